//! Numeric tolerances shared across the crate.
//!
//! These are part of the tested contract and are not configurable at runtime.

/// Unit-norm check for states and orbit vectors.
pub const UNIT_NORM: f64 = 1e-12;

/// Orthogonality of representation matrices and the Clebsch-Gordan matrix.
pub const ORTHOGONAL: f64 = 1e-12;

/// Homomorphism identities and factorization independence.
pub const HOMOMORPHISM: f64 = 1e-10;

/// Orthonormality inside one measurement basis.
pub const ORTHONORMAL_BASIS: f64 = 1e-10;

/// Vector identification when deduplicating orbits and matching fixtures.
pub const VECTOR_MATCH: f64 = 1e-9;

/// An edge of the orthogonality graph: |<u|v>| below this.
pub const ORTHOGONAL_EDGE: f64 = 1e-9;

/// Entries outside the irreducible block pattern.
pub const BLOCK_ZERO: f64 = 1e-10;

/// Eigenvalues closer than this form one degenerate level.
pub const EIGEN_LEVEL: f64 = 1e-8;

/// Residual bound for the dense eigensolver.
pub const EIGEN_RESIDUAL: f64 = 1e-10;

/// Normalization check on bipartite states handed to probability sums.
pub const STATE_NORM: f64 = 1e-10;
