//! Orbits of the representation on the unit sphere, stabilizers, the
//! partition of the generic orbit into eight orthonormal measurement bases,
//! and the observables they define.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};
use crate::fixtures;
use crate::group::{Permutation, Representation, GROUP_ORDER};
use crate::tol;

/// Number of observables per party.
pub const OBSERVABLES: usize = 8;
/// Number of outcomes per observable.
pub const OUTCOMES: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitVector3(Vector3<f64>);

impl UnitVector3 {
    /// Accepts `components` only if its norm is 1 within `1e-12`.
    pub fn new(components: [f64; 3]) -> Result<Self> {
        let v = Vector3::from(components);
        let norm = v.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > tol::UNIT_NORM {
            return Err(Error::InvalidState { norm });
        }
        Ok(Self(v))
    }

    /// Rescales a nonzero vector to unit length.
    pub fn normalize(components: [f64; 3]) -> Result<Self> {
        let v = Vector3::from(components);
        let norm = v.norm();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::InvalidState { norm });
        }
        Ok(Self(v / norm))
    }

    pub fn vector(&self) -> &Vector3<f64> {
        &self.0
    }

    pub fn to_array(&self) -> [f64; 3] {
        [self.0.x, self.0.y, self.0.z]
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.0.dot(&other.0)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.0 - other.0).amax()
    }

    /// Image under an orthogonal matrix, which preserves the norm.
    pub fn transformed(&self, m: &Matrix3<f64>) -> Self {
        Self(m * self.0)
    }
}

/// Position `x^i_α` of a vector in the labelled orbit: observable `index`
/// in 1..=8 and outcome in 0..=2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label {
    index: u8,
    outcome: u8,
}

impl Label {
    pub fn new(index: u8, outcome: u8) -> Result<Self> {
        let label = Self { index, outcome };
        if !(1..=OBSERVABLES as u8).contains(&index) || outcome >= OUTCOMES as u8 {
            return Err(Error::LabelNotFound(label));
        }
        Ok(label)
    }

    pub fn index(&self) -> u8 {
        self.index
    }

    pub fn outcome(&self) -> u8 {
        self.outcome
    }

    /// All 24 labels in `(index, outcome)` order.
    pub fn all() -> impl Iterator<Item = Label> {
        (1..=OBSERVABLES as u8).flat_map(|index| (0..OUTCOMES as u8).map(move |outcome| Label { index, outcome }))
    }

    fn slot(&self) -> (usize, usize) {
        (self.index as usize - 1, self.outcome as usize)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^{}_{}", self.index, self.outcome)
    }
}

/// `{D(g)·start}` deduplicated at `tol`, in group-element order.
pub fn generate_orbit(rep: &Representation, start: &UnitVector3, tol: f64) -> Vec<UnitVector3> {
    let mut orbit: Vec<UnitVector3> = Vec::new();
    for (_, m) in rep.iter() {
        let image = start.transformed(m.matrix());
        if !orbit.iter().any(|v| v.max_abs_diff(&image) <= tol) {
            orbit.push(image);
        }
    }
    orbit
}

/// The orbit of the vertex `(1,0,0)`: the four vertices of a regular
/// tetrahedron.
pub fn tetrahedron_orbit(rep: &Representation) -> Vec<UnitVector3> {
    let vertex = UnitVector3::new([1.0, 0.0, 0.0]).expect("unit vector");
    generate_orbit(rep, &vertex, tol::VECTOR_MATCH)
}

/// The starting vector `(1,1,1)/√3` of the generic orbit.
pub fn generic_start() -> UnitVector3 {
    UnitVector3::normalize([1.0, 1.0, 1.0]).expect("nonzero")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stabilizer {
    pub elements: BTreeSet<Permutation>,
}

impl Stabilizer {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.elements.contains(p)
    }

    /// Closed under composition and inverses, and contains the identity.
    pub fn is_subgroup(&self) -> bool {
        self.elements.contains(&Permutation::identity())
            && self.elements.iter().all(|p| {
                self.elements.contains(&p.inverse())
                    && self.elements.iter().all(|q| self.elements.contains(&p.compose(q)))
            })
    }
}

pub fn stabilizer(rep: &Representation, v: &UnitVector3) -> Stabilizer {
    let elements = rep
        .iter()
        .filter(|(_, m)| v.transformed(m.matrix()).max_abs_diff(v) <= tol::VECTOR_MATCH)
        .map(|(p, _)| *p)
        .collect();
    Stabilizer { elements }
}

/// The generic orbit with every vector assigned its label `x^i_α`; each
/// triple `{x^i_0, x^i_1, x^i_2}` is an orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledOrbit {
    vectors: [[UnitVector3; OUTCOMES]; OBSERVABLES],
}

impl LabeledOrbit {
    /// Generates the orbit of `(1,1,1)/√3` and labels it against the
    /// reference table.
    pub fn standard(rep: &Representation) -> Result<Self> {
        let orbit = generate_orbit(rep, &generic_start(), tol::VECTOR_MATCH);
        partition_into_bases(&orbit)
    }

    pub fn get(&self, label: Label) -> UnitVector3 {
        let (i, a) = label.slot();
        self.vectors[i][a]
    }

    /// The orthonormal triple of observable `index` (1..=8).
    pub fn basis(&self, index: u8) -> Result<[UnitVector3; OUTCOMES]> {
        Label::new(index, 0)?;
        Ok(self.vectors[index as usize - 1])
    }

    pub fn iter(&self) -> impl Iterator<Item = (Label, UnitVector3)> + '_ {
        Label::all().map(|l| (l, self.get(l)))
    }

    /// Label of the entry within `tol` of `v`, if any.
    pub fn find(&self, v: &UnitVector3, tol: f64) -> Option<Label> {
        self.iter().find(|(_, u)| u.max_abs_diff(v) <= tol).map(|(l, _)| l)
    }

    /// The permutation of labels induced by `D(g)`.
    pub fn induced_action(&self, rep: &Representation, g: &Permutation) -> Result<BTreeMap<Label, Label>> {
        let m = rep.matrix(g).matrix();
        self.iter()
            .map(|(l, v)| {
                let image = v.transformed(m);
                self.find(&image, tol::VECTOR_MATCH)
                    .map(|target| (l, target))
                    .ok_or(Error::OrbitClosure {
                        vector: image.to_array(),
                    })
            })
            .collect()
    }
}

/// Splits a 24-vector orbit into eight orthonormal triples and labels it
/// against the embedded reference table.
pub fn partition_into_bases(orbit: &[UnitVector3]) -> Result<LabeledOrbit> {
    partition_into_bases_with_fixture(orbit, &fixtures::reference_orbit())
}

/// As [`partition_into_bases`], labelling against a caller-supplied table
/// indexed `[i - 1][α]`.
pub fn partition_into_bases_with_fixture(
    orbit: &[UnitVector3],
    fixture: &[[[f64; 3]; OUTCOMES]; OBSERVABLES],
) -> Result<LabeledOrbit> {
    let n = orbit.len();
    if n != GROUP_ORDER {
        return Err(Error::NoBasisPartition(format!("expected 24 vectors, got {n}")));
    }
    for (a, u) in orbit.iter().enumerate() {
        for v in &orbit[a + 1..] {
            if u.max_abs_diff(v) <= 1e-6 {
                return Err(Error::NoBasisPartition("orbit contains duplicate vectors".into()));
            }
        }
    }

    let neighbours: Vec<Vec<usize>> = (0..n)
        .map(|a| {
            (0..n)
                .filter(|&b| b != a && orbit[a].dot(&orbit[b]).abs() < tol::ORTHOGONAL_EDGE)
                .collect()
        })
        .collect();

    let mut triangles: BTreeSet<[usize; 3]> = BTreeSet::new();
    for (a, adj) in neighbours.iter().enumerate() {
        // Every vector must be orthogonal to exactly two others, which are
        // orthogonal to each other.
        let &[b, c] = adj.as_slice() else {
            return Err(Error::NoBasisPartition(format!(
                "vector {a} is orthogonal to {} others, expected 2",
                adj.len()
            )));
        };
        if !neighbours[b].contains(&c) {
            return Err(Error::NoBasisPartition(format!(
                "neighbours {b} and {c} of vector {a} are not orthogonal"
            )));
        }
        let mut tri = [a, b, c];
        tri.sort_unstable();
        triangles.insert(tri);
    }
    if triangles.len() != OBSERVABLES {
        return Err(Error::NoBasisPartition(format!(
            "found {} triangles, expected 8",
            triangles.len()
        )));
    }

    let fixture_vectors: Vec<(Label, Vector3<f64>)> = Label::all()
        .map(|l| {
            let (i, a) = l.slot();
            (l, Vector3::from(fixture[i][a]))
        })
        .collect();
    let label_of = |v: &UnitVector3| -> Result<Label> {
        fixture_vectors
            .iter()
            .find(|(_, f)| (v.vector() - f).amax() <= tol::VECTOR_MATCH)
            .map(|(l, _)| *l)
            .ok_or(Error::LabelingMismatch { vector: v.to_array() })
    };

    let mut slots: [[Option<UnitVector3>; OUTCOMES]; OBSERVABLES] = [[None; OUTCOMES]; OBSERVABLES];
    for tri in &triangles {
        let labels = tri.iter().map(|&a| label_of(&orbit[a])).collect::<Result<Vec<_>>>()?;
        if labels.iter().any(|l| l.index != labels[0].index) {
            return Err(Error::NoBasisPartition(format!(
                "orthogonal triple {} {} {} spans several observables",
                labels[0], labels[1], labels[2]
            )));
        }
        for (&a, l) in tri.iter().zip(&labels) {
            let (i, o) = l.slot();
            if slots[i][o].replace(orbit[a]).is_some() {
                return Err(Error::NoBasisPartition(format!("label {l} assigned twice")));
            }
        }
    }

    let vectors = slots.map(|triple| triple.map(|v| v.expect("24 distinct labels fill every slot")));
    Ok(LabeledOrbit { vectors })
}

/// A three-outcome observable `Σ_α value(α) |x_α⟩⟨x_α|`.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    pub matrix: Matrix3<f64>,
    pub eigenpairs: [(f64, UnitVector3); OUTCOMES],
}

pub fn observable_from_basis(triple: &[UnitVector3; OUTCOMES], values: [f64; OUTCOMES]) -> Result<Observable> {
    let mut deviation = 0.0f64;
    for a in 0..OUTCOMES {
        for b in 0..OUTCOMES {
            let expected = if a == b { 1.0 } else { 0.0 };
            deviation = deviation.max((triple[a].dot(&triple[b]) - expected).abs());
        }
    }
    if deviation > tol::ORTHONORMAL_BASIS {
        return Err(Error::InvalidBasis { deviation });
    }
    let matrix = triple
        .iter()
        .zip(values)
        .map(|(x, value)| value * x.vector() * x.vector().transpose())
        .sum();
    let eigenpairs = [0, 1, 2].map(|a| (values[a], triple[a]));
    Ok(Observable { matrix, eigenpairs })
}

/// The observable of basis `index` with outcome values `0, 1, 2`.
pub fn standard_observable(orbit: &LabeledOrbit, index: u8) -> Result<Observable> {
    observable_from_basis(&orbit.basis(index)?, [0.0, 1.0, 2.0])
}

/// Orbit–stabilizer identity for `v`.
pub fn orbit_stabilizer_product(rep: &Representation, v: &UnitVector3) -> usize {
    generate_orbit(rep, v, tol::VECTOR_MATCH).len() * stabilizer(rep, v).order()
}
