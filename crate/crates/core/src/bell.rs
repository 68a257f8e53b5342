//! The group-averaged operator `X = Σ_n Σ_g |g,φ_n,ψ_n⟩⟨g,φ_n,ψ_n|` and its
//! spectrum, obtained twice: from Schur's lemma on the irreducible
//! projections and from a dense symmetric eigensolve.

use nalgebra::{Matrix3, SymmetricEigen};

use crate::decomp::{kron, kron_square, project_via_cg, BlockLayout, CGMatrix, Irrep, Matrix9, Vector9};
use crate::error::{Error, Result};
use crate::group::{Representation, GROUP_ORDER};
use crate::orbit::{Label, LabeledOrbit, UnitVector3};
use crate::tol;
use crate::Model;

/// A product state `|φ⟩ ⊗ |ψ⟩` with its Kronecker vector cached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductState {
    left: UnitVector3,
    right: UnitVector3,
    kron: Vector9,
}

impl ProductState {
    pub fn new(left: UnitVector3, right: UnitVector3) -> Self {
        let kron = kron(left.vector(), right.vector());
        Self { left, right, kron }
    }

    pub fn from_labels(orbit: &LabeledOrbit, alice: Label, bob: Label) -> Self {
        Self::new(orbit.get(alice), orbit.get(bob))
    }

    pub fn left(&self) -> &UnitVector3 {
        &self.left
    }

    pub fn right(&self) -> &UnitVector3 {
        &self.right
    }

    pub fn kron(&self) -> &Vector9 {
        &self.kron
    }
}

/// Seed labels `(i, α; j, β)` of one diagonal orbit.
pub type SeedPair = (Label, Label);

/// Validates a raw `(i, α, j, β)` tuple.
pub fn seed_pair(raw: (u8, u8, u8, u8)) -> Result<SeedPair> {
    Ok((Label::new(raw.0, raw.1)?, Label::new(raw.2, raw.3)?))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellOperator {
    pub matrix: Matrix9,
}

pub fn build_x(rep: &Representation, seeds: &[ProductState]) -> BellOperator {
    let mut matrix = Matrix9::zeros();
    for seed in seeds {
        for (_, m) in rep.iter() {
            let v = kron_square(m.matrix()) * seed.kron();
            matrix += v * v.transpose();
        }
    }
    BellOperator { matrix }
}

/// One eigenvalue level of the dense spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenLevel {
    pub value: f64,
    pub multiplicity: usize,
}

#[derive(Debug, Clone)]
pub struct DenseSpectrum {
    /// Eigenpairs sorted by decreasing eigenvalue.
    pub pairs: Vec<(f64, Vector9)>,
    /// Largest `‖Xv − λv‖` over all pairs.
    pub max_residual: f64,
}

impl DenseSpectrum {
    /// Groups eigenvalues closer than `1e-8` into levels, descending.
    pub fn levels(&self) -> Vec<EigenLevel> {
        let mut levels: Vec<EigenLevel> = Vec::new();
        for (value, _) in &self.pairs {
            match levels.last_mut() {
                Some(level) if (level.value - value).abs() <= tol::EIGEN_LEVEL => level.multiplicity += 1,
                _ => levels.push(EigenLevel {
                    value: *value,
                    multiplicity: 1,
                }),
            }
        }
        levels
    }

    pub fn max(&self) -> f64 {
        self.pairs[0].0
    }

    pub fn min(&self) -> f64 {
        self.pairs[self.pairs.len() - 1].0
    }
}

impl BellOperator {
    pub fn trace(&self) -> f64 {
        self.matrix.trace()
    }

    pub fn symmetry_defect(&self) -> f64 {
        (self.matrix - self.matrix.transpose()).amax()
    }

    /// Largest entry of `[X, D(g)⊗D(g)]` over the group.
    pub fn commutator_defect(&self, rep: &Representation) -> f64 {
        rep.iter()
            .map(|(_, m)| {
                let k = kron_square(m.matrix());
                (self.matrix * k - k * self.matrix).amax()
            })
            .fold(0.0, f64::max)
    }

    /// `⟨χ|X|χ⟩`.
    pub fn expectation(&self, state: &Vector9) -> f64 {
        (state.transpose() * self.matrix * state)[(0, 0)]
    }

    pub fn dense_spectrum(&self) -> DenseSpectrum {
        let eigen = SymmetricEigen::new(self.matrix);
        let mut pairs: Vec<(f64, Vector9)> = eigen
            .eigenvalues
            .iter()
            .zip(eigen.eigenvectors.column_iter())
            .map(|(&value, v)| (value, v.into_owned()))
            .collect();
        pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
        let max_residual = pairs
            .iter()
            .map(|(value, v)| (self.matrix * v - *value * v).norm())
            .fold(0.0, f64::max);
        DenseSpectrum { pairs, max_residual }
    }
}

/// Eigenvalue of `X` on each irreducible component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralReport {
    per_component: [f64; 4],
    pub lambda_max: f64,
    pub maximizer: Irrep,
    pub optimal_state: Vector9,
}

impl SpectralReport {
    pub fn eigenvalue(&self, irrep: Irrep) -> f64 {
        self.per_component[irrep as usize]
    }

    pub fn components(&self) -> impl Iterator<Item = (Irrep, f64)> + '_ {
        Irrep::ALL.into_iter().map(|i| (i, self.eigenvalue(i)))
    }

    /// `Σ_s d_s λ_s`, which equals the trace of `X`.
    pub fn weighted_trace(&self) -> f64 {
        self.components().map(|(i, v)| i.dim() as f64 * v).sum()
    }
}

/// The maximally entangled scalar state `(1/√3) Σ_k e_k ⊗ e_k`.
pub fn scalar_state() -> Vector9 {
    let r3 = 1.0 / 3f64.sqrt();
    Vector9::from_fn(|r, _| if r % 4 == 0 { r3 } else { 0.0 })
}

/// `(24/81)(3+√3)² + (8/81)(3+4√2)²`, the largest eigenvalue for the two
/// inequality seeds.
pub fn lambda_max_closed_form() -> f64 {
    let s2 = 2f64.sqrt();
    let s3 = 3f64.sqrt();
    24.0 / 81.0 * (3.0 + s3).powi(2) + 8.0 / 81.0 * (3.0 + 4.0 * s2).powi(2)
}

/// Schur route: on component `s` the eigenvalue is `|G|/d_s` times the
/// squared projection norm, summed over seeds.
pub fn eigenvalues_schur(layout: &BlockLayout, cg: &CGMatrix, seeds: &[ProductState]) -> SpectralReport {
    let mut per_component = [0.0; 4];
    for seed in seeds {
        let projection = project_via_cg(layout, cg, seed.left(), seed.right());
        for irrep in Irrep::ALL {
            per_component[irrep as usize] += GROUP_ORDER as f64 / irrep.dim() as f64 * projection.norm_squared(irrep);
        }
    }
    let maximizer = Irrep::ALL
        .into_iter()
        .max_by(|a, b| per_component[*a as usize].total_cmp(&per_component[*b as usize]))
        .expect("four components");
    let optimal_state = match maximizer {
        Irrep::D0 => scalar_state(),
        // Any unit vector of the component is an eigenvector; take the first
        // basis row of its block.
        other => cg.matrix().row(layout.rows(other).start).transpose(),
    };
    SpectralReport {
        per_component,
        lambda_max: per_component[maximizer as usize],
        maximizer,
        optimal_state,
    }
}

/// Quantum value of the inequality defined by the diagonal orbits of
/// `seed_pairs`.
pub fn quantum_bound(model: &Model, seed_pairs: &[SeedPair]) -> SpectralReport {
    let seeds: Vec<ProductState> = seed_pairs
        .iter()
        .map(|(a, b)| ProductState::from_labels(&model.orbit, *a, *b))
        .collect();
    eigenvalues_schur(&model.layout, &model.cg, &seeds)
}

/// The two seeds of the inequality.
pub fn inequality_seeds() -> [SeedPair; 2] {
    [
        seed_pair(crate::fixtures::FIRST_SEED).expect("valid seed"),
        seed_pair(crate::fixtures::SECOND_SEED).expect("valid seed"),
    ]
}

/// Product states built from seed labels.
pub fn seed_states(orbit: &LabeledOrbit, seed_pairs: &[SeedPair]) -> Vec<ProductState> {
    seed_pairs
        .iter()
        .map(|(a, b)| ProductState::from_labels(orbit, *a, *b))
        .collect()
}

/// The bipartite state as the 3x3 coefficient matrix `Ψ_ij = ⟨e_i⊗e_j|χ⟩`.
fn coefficients(state: &Vector9) -> Matrix3<f64> {
    Matrix3::from_fn(|i, j| state[3 * i + j])
}

/// Reduced density matrix of the first factor.
pub fn reduced_density_left(state: &Vector9) -> Matrix3<f64> {
    let psi = coefficients(state);
    psi * psi.transpose()
}

/// Reduced density matrix of the second factor.
pub fn reduced_density_right(state: &Vector9) -> Matrix3<f64> {
    let psi = coefficients(state);
    psi.transpose() * psi
}

/// `Σ_n Σ_g |⟨g,φ_n,ψ_n|χ⟩|²`, summed term by term over the group.
pub fn orbit_probability_sum(rep: &Representation, seeds: &[ProductState], state: &Vector9) -> Result<f64> {
    check_unit(state)?;
    let mut total = 0.0;
    for seed in seeds {
        for (_, m) in rep.iter() {
            let left = seed.left().transformed(m.matrix());
            let right = seed.right().transformed(m.matrix());
            let amplitude = kron(left.vector(), right.vector()).dot(state);
            total += amplitude * amplitude;
        }
    }
    Ok(total)
}

pub(crate) fn check_unit(state: &Vector9) -> Result<()> {
    let norm = state.norm();
    if !norm.is_finite() || (norm - 1.0).abs() > tol::STATE_NORM {
        return Err(Error::InvalidState { norm });
    }
    Ok(())
}

/// Outcome of comparing the Schur-route eigenvalues with the dense levels.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumAgreement {
    /// Each level with the total dimension of the Schur components it
    /// matched.
    pub levels: Vec<(EigenLevel, usize)>,
    pub max_deviation: f64,
    /// Every level matched components whose dimensions add up to its
    /// multiplicity.
    pub consistent: bool,
}

pub fn compare_spectra(report: &SpectralReport, dense: &DenseSpectrum) -> SpectrumAgreement {
    let levels = dense.levels();
    let mut max_deviation = 0.0f64;
    let mut consistent = true;
    let mut used = [false; 4];
    let mut matched = Vec::with_capacity(levels.len());
    for level in levels {
        let mut dims = 0;
        for (k, (irrep, value)) in report.components().enumerate() {
            if (value - level.value).abs() <= tol::EIGEN_LEVEL {
                dims += irrep.dim();
                used[k] = true;
                max_deviation = max_deviation.max((value - level.value).abs());
            }
        }
        consistent &= dims == level.multiplicity;
        matched.push((level, dims));
    }
    consistent &= used.iter().all(|&u| u);
    SpectrumAgreement {
        levels: matched,
        max_deviation,
        consistent,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::project_closed_form;

    fn model() -> Model {
        Model::build().unwrap()
    }

    fn inequality_seed_states(model: &Model) -> Vec<ProductState> {
        seed_states(&model.orbit, &inequality_seeds())
    }

    #[test]
    fn single_seed_operator() {
        let model = model();
        let seeds = inequality_seed_states(&model);
        let x = build_x(&model.rep, &seeds[..1]);
        assert!((x.trace() - 24.0).abs() < 1e-8);
        assert!(x.symmetry_defect() < 1e-12);
        assert!(x.commutator_defect(&model.rep) < 1e-9);
        assert!(x.dense_spectrum().min() > -1e-9);

        let both = build_x(&model.rep, &seeds);
        assert!((both.trace() - 48.0).abs() < 1e-8);
        assert!(both.commutator_defect(&model.rep) < 1e-9);
    }

    #[test]
    fn scalar_eigenvalues_per_seed() {
        let model = model();
        let seeds = inequality_seed_states(&model);
        let s2 = 2f64.sqrt();
        let s3 = 3f64.sqrt();
        let first = eigenvalues_schur(&model.layout, &model.cg, &seeds[..1]);
        assert!((first.eigenvalue(Irrep::D0) - 24.0 / 81.0 * (3.0 + s3).powi(2)).abs() < 1e-12);
        let second = eigenvalues_schur(&model.layout, &model.cg, &seeds[1..]);
        assert!((second.eigenvalue(Irrep::D0) - 8.0 / 81.0 * (3.0 + 4.0 * s2).powi(2)).abs() < 1e-12);
    }

    #[test]
    fn schur_matches_dense() {
        let model = model();
        let seeds = inequality_seed_states(&model);
        for subset in [&seeds[..1], &seeds[1..], &seeds[..]] {
            let report = eigenvalues_schur(&model.layout, &model.cg, subset);
            let dense = build_x(&model.rep, subset).dense_spectrum();
            assert!(dense.max_residual <= 1e-10);
            let agreement = compare_spectra(&report, &dense);
            assert!(agreement.consistent, "{agreement:?}");
            assert!(agreement.max_deviation < 1e-9);
            assert!((report.weighted_trace() - 24.0 * subset.len() as f64).abs() < 1e-8);
        }
    }

    #[test]
    fn quantum_bound_for_inequality_seeds() {
        let model = model();
        let report = quantum_bound(&model, &inequality_seeds());
        assert_eq!(report.maximizer, Irrep::D0);
        assert!((report.lambda_max - lambda_max_closed_form()).abs() < 1e-9);
        assert!((report.lambda_max - 14.036).abs() < 5e-4);
        assert_eq!(report.optimal_state, scalar_state());

        let x = build_x(&model.rep, &inequality_seed_states(&model));
        let chi = report.optimal_state;
        assert!((x.matrix * chi - report.lambda_max * chi).norm() < 1e-8);
        assert!((x.expectation(&chi) - report.lambda_max).abs() < 1e-9);
        let third = Matrix3::identity() / 3.0;
        assert!((reduced_density_left(&chi) - third).amax() < 1e-10);
        assert!((reduced_density_right(&chi) - third).amax() < 1e-10);
    }

    #[test]
    fn expectation_equals_probability_sum() {
        let model = model();
        let seeds = inequality_seed_states(&model);
        let x = build_x(&model.rep, &seeds);
        let mut states = vec![scalar_state()];
        for (_, v) in x.dense_spectrum().pairs {
            states.push(v);
        }
        let mixed = (states[1] + states[4] * 2.0 - states[8]).normalize();
        states.push(mixed);
        for chi in states {
            let via_sum = orbit_probability_sum(&model.rep, &seeds, &chi).unwrap();
            assert!((x.expectation(&chi) - via_sum).abs() < 1e-9);
        }
        assert!(orbit_probability_sum(&model.rep, &seeds, &(scalar_state() * 2.0)).is_err());
    }

    #[test]
    fn closed_form_projection_agrees_with_schur_input() {
        let model = model();
        for seed in inequality_seed_states(&model) {
            let a = project_closed_form(seed.left(), seed.right());
            let b = project_via_cg(&model.layout, &model.cg, seed.left(), seed.right());
            assert!(a.max_abs_diff(&b) < 1e-12);
        }
    }

    #[test]
    fn unknown_seed_label() {
        assert!(matches!(seed_pair((9, 0, 1, 0)), Err(Error::LabelNotFound(_))));
        assert!(matches!(seed_pair((1, 0, 1, 3)), Err(Error::LabelNotFound(_))));
    }
}
