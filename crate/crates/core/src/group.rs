//! The symmetric group S4 and its faithful three-dimensional orthogonal
//! representation, the symmetry group of the regular tetrahedron.
//!
//! Permutations are stored as one-based image arrays and compose right to
//! left: `p.compose(&q)` applies `q` first. With that convention the
//! representation is a homomorphism, `D(p∘q) = D(p)·D(q)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use nalgebra::Matrix3;

use crate::error::{Error, Result};
use crate::tol;

/// Order of S4.
pub const GROUP_ORDER: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation([u8; 4]);

impl Permutation {
    pub fn new(images: [u8; 4]) -> Result<Self> {
        let mut seen = [false; 4];
        for &x in &images {
            if !(1..=4).contains(&x) || seen[(x - 1) as usize] {
                return Err(Error::InvalidPermutation(images));
            }
            seen[(x - 1) as usize] = true;
        }
        Ok(Self(images))
    }

    pub const fn identity() -> Self {
        Self([1, 2, 3, 4])
    }

    pub fn transposition(i: u8, j: u8) -> Result<Self> {
        if !(1..=4).contains(&i) || !(1..=4).contains(&j) || i == j {
            return Err(Error::InvalidTransposition(i, j));
        }
        let mut images = [1, 2, 3, 4];
        images[(i - 1) as usize] = j;
        images[(j - 1) as usize] = i;
        Ok(Self(images))
    }

    pub fn images(&self) -> [u8; 4] {
        self.0
    }

    /// Image of the point `i` (one-based).
    pub fn apply(&self, i: u8) -> u8 {
        self.0[(i - 1) as usize]
    }

    /// `self ∘ other`: `result[i] = self[other[i]]`.
    pub fn compose(&self, other: &Self) -> Self {
        let mut images = [0u8; 4];
        for (slot, &x) in images.iter_mut().zip(other.0.iter()) {
            *slot = self.apply(x);
        }
        Self(images)
    }

    pub fn inverse(&self) -> Self {
        let mut images = [0u8; 4];
        for (i, &x) in self.0.iter().enumerate() {
            images[(x - 1) as usize] = i as u8 + 1;
        }
        Self(images)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// Disjoint cycles of length at least two, each starting at its
    /// smallest point.
    pub fn cycles(&self) -> Vec<Vec<u8>> {
        let mut visited = [false; 4];
        let mut cycles = Vec::new();
        for start in 1..=4u8 {
            if visited[(start - 1) as usize] {
                continue;
            }
            let mut cycle = vec![start];
            visited[(start - 1) as usize] = true;
            let mut next = self.apply(start);
            while next != start {
                cycle.push(next);
                visited[(next - 1) as usize] = true;
                next = self.apply(next);
            }
            if cycle.len() > 1 {
                cycles.push(cycle);
            }
        }
        cycles
    }

    /// Sorted cycle lengths including fixed points, e.g. `[1, 1, 2]` for a
    /// transposition.
    pub fn cycle_type(&self) -> Vec<usize> {
        let moved: usize = self.cycles().iter().map(Vec::len).sum();
        let mut lengths: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        lengths.extend(std::iter::repeat_n(1, 4 - moved));
        lengths.sort_unstable();
        lengths
    }

    /// +1 for even permutations, -1 for odd ones.
    pub fn sign(&self) -> i32 {
        let transpositions: usize = self.cycles().iter().map(|c| c.len() - 1).sum();
        if transpositions.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Factorization into adjacent transpositions `(k k+1)` found by bubble
    /// sorting the image array. Returns `k` values; the permutation equals
    /// the composition of the listed transpositions from left to right.
    pub fn adjacent_factorization(&self) -> Vec<u8> {
        let mut images = self.0;
        let mut swaps = Vec::new();
        let mut changed = true;
        while changed {
            changed = false;
            for k in 0..3 {
                if images[k] > images[k + 1] {
                    images.swap(k, k + 1);
                    swaps.push(k as u8 + 1);
                    changed = true;
                }
            }
        }
        // self ∘ s_{w0} ∘ s_{w1} ∘ ... = id, hence self = ... ∘ s_{w1} ∘ s_{w0}.
        swaps.reverse();
        swaps
    }

    /// Factorization into arbitrary transpositions from the cycle
    /// decomposition: `(a1 a2 .. ak) = (a1 ak) ∘ .. ∘ (a1 a2)`.
    pub fn cycle_factorization(&self) -> Vec<(u8, u8)> {
        let mut factors = Vec::new();
        for cycle in self.cycles() {
            let head = cycle[0];
            for &x in cycle[1..].iter().rev() {
                factors.push((head.min(x), head.max(x)));
            }
        }
        factors
    }
}

impl Default for Permutation {
    fn default() -> Self {
        Self::identity()
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cycle in cycles {
            write!(f, "(")?;
            for x in cycle {
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// Closure of `generators` under composition. The identity is always
/// included.
pub fn generate_group(generators: &[Permutation]) -> BTreeSet<Permutation> {
    let mut group = BTreeSet::from([Permutation::identity()]);
    let mut frontier = vec![Permutation::identity()];
    while let Some(p) = frontier.pop() {
        for g in generators {
            let q = g.compose(&p);
            if group.insert(q) {
                frontier.push(q);
            }
        }
    }
    group
}

/// All 24 elements of S4, generated from the adjacent transpositions.
pub fn symmetric_group() -> BTreeSet<Permutation> {
    let generators: Vec<Permutation> = (1..=3)
        .map(|k| Permutation::transposition(k, k + 1).expect("adjacent pair"))
        .collect();
    generate_group(&generators)
}

/// Conjugacy classes by brute-force conjugation, ordered by their smallest
/// element.
pub fn conjugacy_classes(group: &BTreeSet<Permutation>) -> Vec<BTreeSet<Permutation>> {
    let mut remaining = group.clone();
    let mut classes = Vec::new();
    while let Some(&x) = remaining.iter().next() {
        let class: BTreeSet<Permutation> = group.iter().map(|g| g.compose(&x).compose(&g.inverse())).collect();
        for c in &class {
            remaining.remove(c);
        }
        classes.push(class);
    }
    classes
}

/// A real orthogonal 3x3 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RepMatrix(Matrix3<f64>);

impl RepMatrix {
    pub fn identity() -> Self {
        Self(Matrix3::identity())
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    pub fn determinant(&self) -> f64 {
        self.0.determinant()
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    /// Largest entry of `MᵀM - I` in absolute value.
    pub fn orthogonality_defect(&self) -> f64 {
        (self.0.transpose() * self.0 - Matrix3::identity()).amax()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.0 - other.0).amax()
    }
}

impl std::ops::Mul for RepMatrix {
    type Output = RepMatrix;

    fn mul(self, rhs: Self) -> Self {
        Self(self.0 * rhs.0)
    }
}

/// The matrix `D(i j)` of a transposition, from its closed-form radicals.
pub fn transposition_matrix(i: u8, j: u8) -> Result<RepMatrix> {
    if !(1..=4).contains(&i) || !(1..=4).contains(&j) || i >= j {
        return Err(Error::InvalidTransposition(i, j));
    }
    let s2 = 2f64.sqrt();
    let s3 = 3f64.sqrt();
    let s6 = 6f64.sqrt();
    let s8 = 8f64.sqrt();
    #[rustfmt::skip]
    let m = match (i, j) {
        (1, 2) => Matrix3::new(
            1.0, 0.0, 0.0,
            0.0, 1.0, 0.0,
            0.0, 0.0, -1.0,
        ),
        (1, 3) => Matrix3::new(
            1.0, 0.0, 0.0,
            0.0, -0.5, -s3 / 2.0,
            0.0, -s3 / 2.0, 0.5,
        ),
        (1, 4) => Matrix3::new(
            -1.0 / 3.0, -s2 / 3.0, -s6 / 3.0,
            -s2 / 3.0, 5.0 / 6.0, -s3 / 6.0,
            -s6 / 3.0, -s3 / 6.0, 0.5,
        ),
        (2, 3) => Matrix3::new(
            1.0, 0.0, 0.0,
            0.0, -0.5, s3 / 2.0,
            0.0, s3 / 2.0, 0.5,
        ),
        (2, 4) => Matrix3::new(
            -1.0 / 3.0, -s2 / 3.0, s6 / 3.0,
            -s2 / 3.0, 5.0 / 6.0, s3 / 6.0,
            s6 / 3.0, s3 / 6.0, 0.5,
        ),
        (3, 4) => Matrix3::new(
            -1.0 / 3.0, s8 / 3.0, 0.0,
            s8 / 3.0, 1.0 / 3.0, 0.0,
            0.0, 0.0, 1.0,
        ),
        _ => unreachable!("range checked above"),
    };
    Ok(RepMatrix(m))
}

/// The representation `D` as a lookup table over all of S4.
#[derive(Debug, Clone)]
pub struct Representation {
    table: BTreeMap<Permutation, RepMatrix>,
}

impl Representation {
    /// Builds `D` from the adjacent-transposition factorization of every
    /// element and cross-checks it against the cycle factorization, which
    /// uses all six reference transposition matrices.
    pub fn build() -> Result<Self> {
        let mut table = BTreeMap::new();
        for p in symmetric_group() {
            let adjacent = p
                .adjacent_factorization()
                .into_iter()
                .map(|k| transposition_matrix(k, k + 1))
                .try_fold(RepMatrix::identity(), |acc, m| m.map(|m| acc * m))?;
            let via_cycles = p
                .cycle_factorization()
                .into_iter()
                .map(|(a, b)| transposition_matrix(a, b))
                .try_fold(RepMatrix::identity(), |acc, m| m.map(|m| acc * m))?;
            let deviation = adjacent.max_abs_diff(&via_cycles);
            if deviation > tol::HOMOMORPHISM {
                return Err(Error::RepresentationInconsistency {
                    element: p.to_string(),
                    deviation,
                });
            }
            table.insert(p, adjacent);
        }
        Ok(Self { table })
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn matrix(&self, p: &Permutation) -> &RepMatrix {
        &self.table[p]
    }

    /// Elements paired with their matrices, in permutation order.
    pub fn iter(&self) -> impl Iterator<Item = (&Permutation, &RepMatrix)> {
        self.table.iter()
    }

    pub fn elements(&self) -> impl Iterator<Item = &Permutation> {
        self.table.keys()
    }

    /// Largest deviation of `D(p∘q)` from `D(p)·D(q)` over all pairs.
    pub fn homomorphism_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for (p, dp) in &self.table {
            for (q, dq) in &self.table {
                let lhs = self.table[&p.compose(q)];
                worst = worst.max(lhs.max_abs_diff(&(*dp * *dq)));
            }
        }
        worst
    }

    /// Character `tr D(g)`.
    pub fn character(&self, p: &Permutation) -> f64 {
        self.table[p].trace()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(i: u8, j: u8) -> Permutation {
        Permutation::transposition(i, j).unwrap()
    }

    #[test]
    fn compose_examples() {
        assert!(t(1, 2).compose(&t(1, 2)).is_identity());
        assert_eq!(Permutation::identity().compose(&t(3, 4)), t(3, 4));
        // (12)∘(23): 1→2, 2→3, 3→1
        assert_eq!(t(1, 2).compose(&t(2, 3)).images(), [2, 3, 1, 4]);
    }

    #[test]
    fn invalid_permutations_rejected() {
        assert!(Permutation::new([1, 1, 3, 4]).is_err());
        assert!(Permutation::new([0, 2, 3, 4]).is_err());
        assert!(Permutation::new([1, 2, 3, 5]).is_err());
        assert!(matches!(
            Permutation::transposition(2, 2),
            Err(Error::InvalidTransposition(2, 2))
        ));
    }

    #[test]
    fn generated_subgroups() {
        assert_eq!(generate_group(&[]), BTreeSet::from([Permutation::identity()]));
        assert_eq!(generate_group(&[t(1, 2)]).len(), 2);
        assert_eq!(generate_group(&[t(1, 2), t(2, 3), t(3, 4)]).len(), GROUP_ORDER);
        // A 4-cycle generates C4.
        let four_cycle = Permutation::new([2, 3, 4, 1]).unwrap();
        assert_eq!(generate_group(&[four_cycle]).len(), 4);
    }

    #[test]
    fn class_sizes() {
        let classes = conjugacy_classes(&symmetric_group());
        assert_eq!(classes.len(), 5);
        let mut sizes: Vec<usize> = classes.iter().map(BTreeSet::len).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 3, 6, 6, 8]);
        let identity_class = classes.iter().find(|c| c.contains(&Permutation::identity())).unwrap();
        assert_eq!(identity_class.len(), 1);
    }

    #[test]
    fn transposition_matrices_match_closed_forms() {
        let d12 = transposition_matrix(1, 2).unwrap();
        assert_eq!(*d12.matrix(), Matrix3::from_diagonal(&[1.0, 1.0, -1.0].into()));
        let d34 = transposition_matrix(3, 4).unwrap();
        let r8 = 8f64.sqrt() / 3.0;
        let expected = Matrix3::new(-1.0 / 3.0, r8, 0.0, r8, 1.0 / 3.0, 0.0, 0.0, 0.0, 1.0);
        assert!((d34.matrix() - expected).amax() < 1e-15);
        assert!(transposition_matrix(2, 2).is_err());
        assert!(transposition_matrix(3, 1).is_err());
        assert!(transposition_matrix(0, 5).is_err());
        for (i, j) in [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)] {
            let m = transposition_matrix(i, j).unwrap();
            assert!(m.orthogonality_defect() < 1e-12);
            assert!((m.determinant() + 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn factorizations_recompose() {
        for p in symmetric_group() {
            let adjacent = p
                .adjacent_factorization()
                .into_iter()
                .fold(Permutation::identity(), |acc, k| acc.compose(&t(k, k + 1)));
            assert_eq!(adjacent, p);
            let cycles = p
                .cycle_factorization()
                .into_iter()
                .fold(Permutation::identity(), |acc, (a, b)| acc.compose(&t(a, b)));
            assert_eq!(cycles, p);
        }
    }

    #[test]
    fn representation_is_faithful_homomorphism() {
        let rep = Representation::build().unwrap();
        assert_eq!(rep.order(), GROUP_ORDER);
        assert_eq!(*rep.matrix(&Permutation::identity()), RepMatrix::identity());
        assert!(rep.homomorphism_defect() < 1e-10);
        let mats: Vec<_> = rep.iter().map(|(_, m)| *m).collect();
        for (a, ma) in mats.iter().enumerate() {
            assert!(ma.orthogonality_defect() < 1e-12);
            for mb in &mats[a + 1..] {
                assert!(ma.max_abs_diff(mb) > 0.1);
            }
        }
        for (p, m) in rep.iter() {
            assert!((m.determinant() - p.sign() as f64).abs() < 1e-12);
        }
        for (i, j) in [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)] {
            let built = rep.matrix(&t(i, j));
            assert!(built.max_abs_diff(&transposition_matrix(i, j).unwrap()) < 1e-12);
        }
    }

    #[test]
    fn three_cycle_independent_of_factorization() {
        let rep = Representation::build().unwrap();
        let d12 = transposition_matrix(1, 2).unwrap();
        let d23 = transposition_matrix(2, 3).unwrap();
        let d13 = transposition_matrix(1, 3).unwrap();
        let cycle = t(1, 2).compose(&t(2, 3));
        assert_eq!(cycle, t(1, 3).compose(&t(1, 2)));
        assert!((d12 * d23).max_abs_diff(&(d13 * d12)) < 1e-12);
        assert!(rep.matrix(&cycle).max_abs_diff(&(d12 * d23)) < 1e-12);
    }

    #[test]
    fn characters_constant_on_classes() {
        let rep = Representation::build().unwrap();
        for class in conjugacy_classes(&symmetric_group()) {
            let first = rep.character(class.iter().next().unwrap());
            for p in &class {
                assert!((rep.character(p) - first).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn display_uses_cycle_notation() {
        assert_eq!(Permutation::identity().to_string(), "()");
        assert_eq!(t(1, 2).to_string(), "(12)");
        assert_eq!(t(1, 2).compose(&t(3, 4)).to_string(), "(12)(34)");
        assert_eq!(t(1, 2).compose(&t(2, 3)).to_string(), "(123)");
    }
}
