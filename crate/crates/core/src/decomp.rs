//! Clebsch–Gordan structure of `D ⊗ D = D ⊕ D̃ ⊕ D₂ ⊕ D₀`.
//!
//! Product-basis vectors are indexed `3·i + j` for `e_i ⊗ e_j` (zero-based),
//! which is the row-major layout of the Kronecker product.

use std::fmt;
use std::ops::Range;

use nalgebra::{Matrix3, SMatrix, SVector, Vector3};

use crate::error::{Error, Result};
use crate::group::{Permutation, Representation};
use crate::orbit::UnitVector3;
use crate::tol;

pub type Matrix9 = SMatrix<f64, 9, 9>;
pub type Vector9 = SVector<f64, 9>;

/// The four irreducible components of `D ⊗ D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Irrep {
    /// The defining three-dimensional representation.
    D,
    /// `sgn ⊗ D`, the antisymmetric part.
    DTilde,
    /// The two-dimensional representation (factors through S3).
    D2,
    /// The trivial representation.
    D0,
}

impl Irrep {
    pub const ALL: [Irrep; 4] = [Irrep::D, Irrep::DTilde, Irrep::D2, Irrep::D0];

    pub fn dim(self) -> usize {
        match self {
            Irrep::D | Irrep::DTilde => 3,
            Irrep::D2 => 2,
            Irrep::D0 => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Irrep::D => "D",
            Irrep::DTilde => "D~",
            Irrep::D2 => "D2",
            Irrep::D0 => "D0",
        }
    }

    fn position(self) -> usize {
        self as usize
    }

    /// Character of `g` in this irrep, from the defining character.
    fn character(self, rep: &Representation, g: &Permutation) -> f64 {
        match self {
            Irrep::D => rep.character(g),
            Irrep::DTilde => g.sign() as f64 * rep.character(g),
            Irrep::D2 => match g.cycle_type().as_slice() {
                [1, 1, 1, 1] | [2, 2] => 2.0,
                [1, 3] => -1.0,
                _ => 0.0,
            },
            Irrep::D0 => 1.0,
        }
    }
}

impl fmt::Display for Irrep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Kronecker product `φ ⊗ ψ` in the product basis.
pub fn kron(phi: &Vector3<f64>, psi: &Vector3<f64>) -> Vector9 {
    Vector9::from_fn(|r, _| phi[r / 3] * psi[r % 3])
}

/// `M ⊗ M` acting on the product basis.
pub fn kron_square(m: &Matrix3<f64>) -> Matrix9 {
    m.kronecker(m)
}

/// The orthogonal change of basis from the product basis to the one that
/// exhibits the irreducible decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CGMatrix(Matrix9);

impl CGMatrix {
    pub fn matrix(&self) -> &Matrix9 {
        &self.0
    }

    pub fn orthogonality_defect(&self) -> f64 {
        (self.0 * self.0.transpose() - Matrix9::identity()).amax()
    }

    /// `C (M ⊗ M) Cᵀ`.
    pub fn conjugate(&self, m: &Matrix3<f64>) -> Matrix9 {
        self.0 * kron_square(m) * self.0.transpose()
    }
}

pub fn cg_matrix() -> CGMatrix {
    let a = (2.0f64 / 3.0).sqrt();
    let r2 = 1.0 / 2f64.sqrt();
    let r3 = 1.0 / 3f64.sqrt();
    let r6 = 1.0 / 6f64.sqrt();
    #[rustfmt::skip]
    let rows = [
        a,   0.0, 0.0, 0.0, -r6, 0.0, 0.0, 0.0, -r6,
        0.0, -r6, 0.0, -r6, r3,  0.0, 0.0, 0.0, -r3,
        0.0, 0.0, -r6, 0.0, 0.0, -r3, -r6, -r3, 0.0,
        0.0, r2,  0.0, -r2, 0.0, 0.0, 0.0, 0.0, 0.0,
        0.0, 0.0, r2,  0.0, 0.0, 0.0, -r2, 0.0, 0.0,
        0.0, 0.0, 0.0, 0.0, 0.0, r2,  0.0, -r2, 0.0,
        0.0, r3,  0.0, r3,  r6,  0.0, 0.0, 0.0, -r6,
        0.0, 0.0, r3,  0.0, 0.0, -r6, r3,  -r6, 0.0,
        r3,  0.0, 0.0, 0.0, r3,  0.0, 0.0, 0.0, r3,
    ];
    CGMatrix(Matrix9::from_row_slice(&rows))
}

/// Which rows of the Clebsch–Gordan matrix carry which irrep.
///
/// Found by reading the block pattern of all conjugated Kronecker squares
/// and matching each block's character against the irreducible characters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockLayout {
    rows: [Range<usize>; 4],
}

impl BlockLayout {
    pub fn detect(rep: &Representation, cg: &CGMatrix) -> Result<Self> {
        let conjugated: Vec<(Permutation, Matrix9)> = rep.iter().map(|(p, m)| (*p, cg.conjugate(m.matrix()))).collect();

        // Rows coupled by a non-negligible entry for some g share a block.
        let mut block_of: [usize; 9] = std::array::from_fn(|r| r);
        for (_, m) in &conjugated {
            for r in 0..9 {
                for c in 0..9 {
                    if m[(r, c)].abs() > tol::BLOCK_ZERO {
                        let (a, b) = (block_of[r], block_of[c]);
                        if a != b {
                            let (lo, hi) = (a.min(b), a.max(b));
                            for x in block_of.iter_mut() {
                                if *x == hi {
                                    *x = lo;
                                }
                            }
                        }
                    }
                }
            }
        }

        let mut blocks: Vec<Range<usize>> = Vec::new();
        let mut start = 0;
        for r in 1..=9 {
            if r == 9 || block_of[r] != block_of[start] {
                if block_of[start..r].iter().any(|&b| b != block_of[start]) {
                    return Err(Error::BlockStructure("non-contiguous block".into()));
                }
                blocks.push(start..r);
                start = r;
            }
        }
        // A block must not reappear after another one.
        let ids: Vec<usize> = blocks.iter().map(|b| block_of[b.start]).collect();
        for (a, x) in ids.iter().enumerate() {
            if ids[a + 1..].contains(x) {
                return Err(Error::BlockStructure("non-contiguous block".into()));
            }
        }
        if blocks.len() != 4 {
            return Err(Error::BlockStructure(format!("{} blocks, expected 4", blocks.len())));
        }

        let mut rows: [Option<Range<usize>>; 4] = Default::default();
        for block in blocks {
            let matching: Vec<Irrep> = Irrep::ALL
                .into_iter()
                .filter(|irrep| irrep.dim() == block.len())
                .filter(|irrep| {
                    conjugated.iter().all(|(p, m)| {
                        let trace: f64 = block.clone().map(|r| m[(r, r)]).sum();
                        (trace - irrep.character(rep, p)).abs() < tol::HOMOMORPHISM
                    })
                })
                .collect();
            let [irrep] = matching.as_slice() else {
                return Err(Error::BlockStructure(format!(
                    "rows {block:?} match {} irreps",
                    matching.len()
                )));
            };
            if rows[irrep.position()].replace(block).is_some() {
                return Err(Error::BlockStructure(format!("{irrep} appears twice")));
            }
        }
        Ok(Self {
            rows: rows.map(|r| r.expect("four blocks, four distinct irreps")),
        })
    }

    pub fn rows(&self, irrep: Irrep) -> Range<usize> {
        self.rows[irrep.position()].clone()
    }

    /// Largest entry outside the block pattern.
    pub fn off_block_max(&self, m: &Matrix9) -> f64 {
        let mut owner = [0usize; 9];
        for (k, range) in self.rows.iter().enumerate() {
            for r in range.clone() {
                owner[r] = k;
            }
        }
        let mut worst = 0.0f64;
        for r in 0..9 {
            for c in 0..9 {
                if owner[r] != owner[c] {
                    worst = worst.max(m[(r, c)].abs());
                }
            }
        }
        worst
    }

    /// The diagonal block of `m` belonging to `irrep`.
    pub fn block(&self, m: &Matrix9, irrep: Irrep) -> Vec<Vec<f64>> {
        let range = self.rows(irrep);
        range
            .clone()
            .map(|r| range.clone().map(|c| m[(r, c)]).collect())
            .collect()
    }
}

/// Squared norms of the projections of a product state onto each irrep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IrrepProjection {
    norms_squared: [f64; 4],
}

impl IrrepProjection {
    pub fn norm_squared(&self, irrep: Irrep) -> f64 {
        self.norms_squared[irrep.position()]
    }

    pub fn dim(&self, irrep: Irrep) -> usize {
        irrep.dim()
    }

    pub fn total(&self) -> f64 {
        self.norms_squared.iter().sum()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.norms_squared
            .iter()
            .zip(&other.norms_squared)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Projection components written out in closed form, in the order of the
/// Clebsch–Gordan rows for `D`, `D₂` and `D₀`. The `D̃` part is the
/// cross product itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormComponents {
    pub d: [f64; 3],
    pub d_tilde: [f64; 3],
    pub d2: [f64; 2],
    pub d0: f64,
}

pub fn closed_form_components(phi: &UnitVector3, psi: &UnitVector3) -> ClosedFormComponents {
    let m = phi.vector();
    let n = psi.vector();
    let r2 = 1.0 / 2f64.sqrt();
    let r3 = 1.0 / 3f64.sqrt();
    let r6 = 1.0 / 6f64.sqrt();
    let a = (2.0f64 / 3.0).sqrt();

    let d0 = r3 * m.dot(n);
    let d_tilde = (m.cross(n) * r2).into();
    let d2 = [
        r3 * (m[0] * n[1] + m[1] * n[0]) + r6 * (m[1] * n[1] - m[2] * n[2]),
        r3 * (m[0] * n[2] + m[2] * n[0]) - r6 * (m[1] * n[2] + m[2] * n[1]),
    ];
    let d = [
        a * m[0] * n[0] - r6 * (m[1] * n[1] + m[2] * n[2]),
        r3 * (m[1] * n[1] - m[2] * n[2]) - r6 * (m[0] * n[1] + m[1] * n[0]),
        -r3 * (m[1] * n[2] + m[2] * n[1]) - r6 * (m[0] * n[2] + m[2] * n[0]),
    ];
    ClosedFormComponents { d, d_tilde, d2, d0 }
}

pub fn project_closed_form(phi: &UnitVector3, psi: &UnitVector3) -> IrrepProjection {
    let c = closed_form_components(phi, psi);
    let sq = |xs: &[f64]| xs.iter().map(|x| x * x).sum::<f64>();
    IrrepProjection {
        norms_squared: [sq(&c.d), sq(&c.d_tilde), sq(&c.d2), c.d0 * c.d0],
    }
}

/// Applies `C` to `φ ⊗ ψ` and sums squared entries per block.
pub fn project_via_cg(layout: &BlockLayout, cg: &CGMatrix, phi: &UnitVector3, psi: &UnitVector3) -> IrrepProjection {
    project_state(layout, cg, &kron(phi.vector(), psi.vector()))
}

/// Block norms of an arbitrary bipartite state.
pub fn project_state(layout: &BlockLayout, cg: &CGMatrix, state: &Vector9) -> IrrepProjection {
    let image = cg.matrix() * state;
    let norms_squared = Irrep::ALL.map(|irrep| layout.rows(irrep).map(|r| image[r] * image[r]).sum());
    IrrepProjection { norms_squared }
}

/// `m m′ᵀ = S + A + Δ`: symmetric traceless, antisymmetric and scalar parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinDecomposition {
    pub s: Matrix3<f64>,
    pub a: Matrix3<f64>,
    pub delta: Matrix3<f64>,
}

/// Levi-Civita symbol on zero-based indices, `ε₀₁₂ = +1`.
fn levi_civita(k: usize, i: usize, j: usize) -> f64 {
    match (k, i, j) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

pub fn spin_decompose(m: &UnitVector3, mprime: &UnitVector3) -> SpinDecomposition {
    let u = m.vector();
    let v = mprime.vector();
    let dot = u.dot(v);
    let cross = u.cross(v);
    let s = Matrix3::from_fn(|i, j| {
        let kd = if i == j { 1.0 } else { 0.0 };
        0.5 * (u[i] * v[j] + u[j] * v[i]) - dot / 3.0 * kd
    });
    let a = Matrix3::from_fn(|i, j| (0..3).map(|k| 0.5 * cross[k] * levi_civita(k, i, j)).sum());
    let delta = Matrix3::identity() * (dot / 3.0);
    SpinDecomposition { s, a, delta }
}

impl SpinDecomposition {
    pub fn reconstruct(&self) -> Matrix3<f64> {
        self.s + self.a + self.delta
    }

    /// `D₂` components as linear combinations of `S`, in Clebsch–Gordan row
    /// order.
    pub fn d2_from_s(&self) -> [f64; 2] {
        let s = &self.s;
        [
            2.0 / 3f64.sqrt() * s[(0, 1)] + (s[(1, 1)] - s[(2, 2)]) / 6f64.sqrt(),
            2.0 / 3f64.sqrt() * s[(0, 2)] - (2.0f64 / 3.0).sqrt() * s[(1, 2)],
        ]
    }

    /// `D` components as linear combinations of `S`, in Clebsch–Gordan row
    /// order.
    pub fn d_from_s(&self) -> [f64; 3] {
        let s = &self.s;
        let a = (2.0f64 / 3.0).sqrt();
        [
            (1.5f64).sqrt() * s[(0, 0)],
            -a * s[(0, 1)] + (s[(1, 1)] - s[(2, 2)]) / 3f64.sqrt(),
            -a * s[(0, 2)] - 2.0 / 3f64.sqrt() * s[(1, 2)],
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(v: [f64; 3]) -> UnitVector3 {
        UnitVector3::normalize(v).unwrap()
    }

    fn fixture() -> (Representation, CGMatrix, BlockLayout) {
        let rep = Representation::build().unwrap();
        let cg = cg_matrix();
        let layout = BlockLayout::detect(&rep, &cg).unwrap();
        (rep, cg, layout)
    }

    #[test]
    fn cg_rows_and_orthogonality() {
        let cg = cg_matrix();
        let r3 = 1.0 / 3f64.sqrt();
        let last: Vec<f64> = cg.matrix().row(8).iter().copied().collect();
        assert_eq!(last, vec![r3, 0.0, 0.0, 0.0, r3, 0.0, 0.0, 0.0, r3]);
        assert!(cg.orthogonality_defect() < 1e-12);
    }

    #[test]
    fn detected_layout_follows_reference_order() {
        let (_, _, layout) = fixture();
        assert_eq!(layout.rows(Irrep::D), 0..3);
        assert_eq!(layout.rows(Irrep::DTilde), 3..6);
        assert_eq!(layout.rows(Irrep::D2), 6..8);
        assert_eq!(layout.rows(Irrep::D0), 8..9);
    }

    #[test]
    fn block_diagonalizes_every_kronecker_square() {
        let (rep, cg, layout) = fixture();
        for (p, m) in rep.iter() {
            let b = cg.conjugate(m.matrix());
            assert!(layout.off_block_max(&b) < 1e-10, "{p}");
            assert!((b[(8, 8)] - 1.0).abs() < 1e-10);
            let trace_d: f64 = (0..3).map(|r| b[(r, r)]).sum();
            let trace_dt: f64 = (3..6).map(|r| b[(r, r)]).sum();
            assert!((trace_dt - p.sign() as f64 * trace_d).abs() < 1e-10);
        }
    }

    #[test]
    fn transposition_blocks() {
        let (rep, cg, layout) = fixture();
        let t12 = Permutation::transposition(1, 2).unwrap();
        let b = cg.conjugate(rep.matrix(&t12).matrix());
        assert!(layout.off_block_max(&b) < 1e-10);
        let d = layout.block(&b, Irrep::D);
        let dt = layout.block(&b, Irrep::DTilde);
        assert_eq!(d.len(), 3);
        assert_eq!(dt.len(), 3);
        assert_eq!(layout.block(&b, Irrep::D2).len(), 2);
        // Characters differ by sign for an odd element.
        let tr = |x: &Vec<Vec<f64>>| (0..x.len()).map(|k| x[k][k]).sum::<f64>();
        assert!((tr(&d) - 1.0).abs() < 1e-12);
        assert!((tr(&dt) + 1.0).abs() < 1e-12);
    }

    #[test]
    fn closed_form_examples() {
        let e1 = unit([1.0, 0.0, 0.0]);
        let p = project_closed_form(&e1, &e1);
        assert!((p.norm_squared(Irrep::D0) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(p.norm_squared(Irrep::DTilde), 0.0);
        let (_, cg, layout) = fixture();
        let q = project_via_cg(&layout, &cg, &e1, &e1);
        assert!((q.norm_squared(Irrep::D0) - 1.0 / 3.0).abs() < 1e-15);
        let v = unit([0.3, -1.2, 0.7]);
        assert!(project_closed_form(&v, &v).norm_squared(Irrep::DTilde) < 1e-30);
    }

    #[test]
    fn closed_form_components_follow_cg_rows_for_symmetric_parts() {
        let (_, cg, _) = fixture();
        let phi = unit([0.2, 0.9, -0.4]);
        let psi = unit([-0.5, 0.1, 0.8]);
        let image = cg.matrix() * kron(phi.vector(), psi.vector());
        let c = closed_form_components(&phi, &psi);
        for k in 0..3 {
            assert!((image[k] - c.d[k]).abs() < 1e-14);
        }
        for k in 0..2 {
            assert!((image[6 + k] - c.d2[k]).abs() < 1e-14);
        }
        assert!((image[8] - c.d0).abs() < 1e-14);
    }

    #[test]
    fn spin_decomposition_of_e1() {
        let e1 = unit([1.0, 0.0, 0.0]);
        let sd = spin_decompose(&e1, &e1);
        assert!((sd.delta - Matrix3::identity() / 3.0).amax() < 1e-15);
        assert_eq!(sd.a, Matrix3::zeros());
        let s = Matrix3::from_diagonal(&Vector3::new(2.0 / 3.0, -1.0 / 3.0, -1.0 / 3.0));
        assert!((sd.s - s).amax() < 1e-15);
    }

    #[test]
    fn antisymmetric_part_is_half_commutator() {
        let m = unit([0.1, 0.5, -0.3]);
        let n = unit([0.7, -0.2, 0.4]);
        let sd = spin_decompose(&m, &n);
        let outer = m.vector() * n.vector().transpose();
        assert!((sd.a - 0.5 * (outer - outer.transpose())).amax() < 1e-15);
        assert!((sd.a + sd.a.transpose()).amax() == 0.0);
        assert!(sd.s.trace().abs() < 1e-15);
    }
}
