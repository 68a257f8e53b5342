//! A three-outcome Bell inequality with the symmetry of the regular
//! tetrahedron.
//!
//! The symmetric group S4 acts on ℝ³ through its faithful orthogonal
//! representation. A generic orbit of 24 unit vectors splits into eight
//! orthonormal triples, each defining a three-outcome measurement. Two
//! diagonal orbits of the product representation select 48 joint
//! probabilities whose sum is bounded by 14 for every local model, while the
//! maximally entangled scalar state reaches
//! `(24/81)(3+√3)² + (8/81)(3+4√2)² ≈ 14.0363`.
//!
//! Modules, bottom-up:
//!
//! * [`group`]: permutations, group generation, conjugacy classes and the
//!   representation `D`.
//! * [`orbit`]: orbits, stabilizers, the labelled 24-vector orbit and its
//!   observables.
//! * [`decomp`]: Clebsch–Gordan matrix, irreducible projections and the
//!   spin decomposition of `m m′ᵀ`.
//! * [`bell`]: the operator `X` and its spectrum by two routes.
//! * [`classical`]: the inequality terms, strategy coefficients, exhaustive
//!   enumeration and the constraint-graph cycles.
//! * [`game`]: the nonlocal-game reading of the inequality.

pub mod bell;
pub mod classical;
pub mod decomp;
pub mod error;
pub mod fixtures;
pub mod game;
pub mod group;
pub mod orbit;
pub mod tol;

pub use error::{Error, Result};

use decomp::{BlockLayout, CGMatrix};
use group::Representation;
use orbit::LabeledOrbit;

/// Everything derived once from the representation: the group table, the
/// labelled orbit and the Clebsch–Gordan layout.
#[derive(Debug, Clone)]
pub struct Model {
    pub rep: Representation,
    pub orbit: LabeledOrbit,
    pub cg: CGMatrix,
    pub layout: BlockLayout,
}

impl Model {
    pub fn build() -> Result<Self> {
        let rep = Representation::build()?;
        let orbit = LabeledOrbit::standard(&rep)?;
        let cg = decomp::cg_matrix();
        let layout = BlockLayout::detect(&rep, &cg)?;
        Ok(Self { rep, orbit, cg, layout })
    }
}
