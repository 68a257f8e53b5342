//! Reference data entered by hand.
//!
//! Generated quantities are checked against these tables; nothing in the
//! computational path reads them except the labelling of the generic orbit.

/// The 24 labelled vectors `x^i_α` of the generic orbit, indexed as
/// `[i - 1][α]`, evaluated from their closed-form radicals.
pub fn reference_orbit() -> [[[f64; 3]; 3]; 8] {
    let s2 = 2f64.sqrt();
    let s3 = 3f64.sqrt();
    let s6 = 6f64.sqrt();
    let r3 = s3 / 3.0;

    // Recurring coordinate expressions.
    let p = (3.0 * s2 - s3 - s6) / 9.0;
    let q = (-s3 + 2.0 * s6) / 9.0;
    let n = -(3.0 * s2 + s3 + s6) / 9.0;

    [
        [
            [r3, r3, -r3],
            [r3, 0.5 * (1.0 - r3), 0.5 * (1.0 + r3)],
            [r3, -0.5 * (1.0 + r3), -0.5 * (1.0 - r3)],
        ],
        [
            [
                (-3.0 * s2 - s3 - s6) / 9.0,
                (-3.0 + 5.0 * s3 - 2.0 * s6) / 18.0,
                (-1.0 - 2.0 * s2 + s3) / 6.0,
            ],
            [q, (9.0 - s3 - 2.0 * s6) / 18.0, -(1.0 + 2.0 * s2 + s3) / 6.0],
            [p, -(3.0 + 2.0 * s3 + s6) / 9.0, (1.0 - s2) / 3.0],
        ],
        [
            [p, (3.0 + 5.0 * s3 - 2.0 * s6) / 18.0, (1.0 + 2.0 * s2 + s3) / 6.0],
            [q, -(9.0 + s3 + 2.0 * s6) / 18.0, (1.0 + 2.0 * s2 - s3) / 6.0],
            [n, (3.0 - 2.0 * s3 - s6) / 9.0, (-1.0 + s2) / 3.0],
        ],
        [
            [p, (3.0 - s3 + 4.0 * s6) / 18.0, (3.0 + s3) / 6.0],
            [q, (s3 + 2.0 * s6) / 9.0, -r3],
            [n, (-3.0 - s3 + 4.0 * s6) / 18.0, (-3.0 + s3) / 6.0],
        ],
        [
            [q, (9.0 - s3 - 2.0 * s6) / 18.0, (1.0 + 2.0 * s2 + s3) / 6.0],
            [n, (-3.0 + 5.0 * s3 - 2.0 * s6) / 18.0, (1.0 + 2.0 * s2 - s3) / 6.0],
            [p, -(3.0 + 2.0 * s3 + s6) / 9.0, (-1.0 + s2) / 3.0],
        ],
        [
            [n, (-3.0 - s3 + 4.0 * s6) / 18.0, (3.0 - s3) / 6.0],
            [p, (3.0 - s3 + 4.0 * s6) / 18.0, -(3.0 + s3) / 6.0],
            [q, (s3 + 2.0 * s6) / 9.0, r3],
        ],
        [
            [p, (3.0 + 5.0 * s3 - 2.0 * s6) / 18.0, -(1.0 + 2.0 * s2 + s3) / 6.0],
            [q, -(9.0 + s3 + 2.0 * s6) / 18.0, (-1.0 - 2.0 * s2 + s3) / 6.0],
            [n, (3.0 - 2.0 * s3 - s6) / 9.0, (1.0 - s2) / 3.0],
        ],
        [
            [r3, -0.5 * (1.0 + r3), 0.5 * (1.0 - r3)],
            [r3, 0.5 * (1.0 - r3), -0.5 * (1.0 + r3)],
            [r3, r3, r3],
        ],
    ]
}

/// Tetrahedron vertices `a1..a4`; `a4 = (1,0,0)` is the starting vertex.
pub fn tetrahedron_vertices() -> [[f64; 3]; 4] {
    let s2 = 2f64.sqrt();
    let s6 = 6f64.sqrt();
    let s8 = 8f64.sqrt();
    [
        [-1.0 / 3.0, -s2 / 3.0, -s6 / 3.0],
        [-1.0 / 3.0, -s2 / 3.0, s6 / 3.0],
        [-1.0 / 3.0, s8 / 3.0, 0.0],
        [1.0, 0.0, 0.0],
    ]
}

/// The 48 probability terms `P(a_i = α, b_j = β)` of the inequality, as
/// `(i, α, j, β)` in reference order.
#[rustfmt::skip]
pub const INEQUALITY_TERMS: [(u8, u8, u8, u8); 48] = [
    (1, 0, 4, 1), (1, 1, 5, 0), (1, 2, 7, 1), (2, 0, 4, 2),
    (2, 1, 8, 1), (2, 2, 5, 2), (3, 0, 4, 0), (3, 1, 8, 0),
    (3, 2, 7, 2), (4, 0, 3, 0), (4, 1, 1, 0), (4, 2, 2, 0),
    (5, 0, 1, 1), (5, 1, 6, 0), (5, 2, 2, 2), (6, 0, 5, 1),
    (6, 1, 7, 0), (6, 2, 8, 2), (7, 0, 6, 1), (7, 1, 1, 2),
    (7, 2, 3, 2), (8, 0, 3, 1), (8, 1, 2, 1), (8, 2, 6, 2),
    (1, 0, 8, 1), (1, 1, 8, 2), (1, 2, 8, 0), (2, 0, 7, 2),
    (2, 1, 7, 0), (2, 2, 7, 1), (3, 0, 5, 0), (3, 1, 5, 2),
    (3, 2, 5, 1), (4, 0, 6, 2), (4, 1, 6, 1), (4, 2, 6, 0),
    (5, 0, 3, 0), (5, 1, 3, 2), (5, 2, 3, 1), (6, 0, 4, 2),
    (6, 1, 4, 1), (6, 2, 4, 0), (7, 0, 2, 1), (7, 1, 2, 2),
    (7, 2, 2, 0), (8, 0, 1, 2), (8, 1, 1, 0), (8, 2, 1, 1),
];

/// Classical bound of the inequality.
pub const CLASSICAL_BOUND: u32 = 14;

/// Number of deterministic strategies with coefficient `c`, for `c = 1..=16`.
pub const COEFFICIENT_COUNTS: [(u32, u64); 16] = [
    (1, 327_600),
    (2, 1_494_180),
    (3, 4_141_080),
    (4, 7_754_904),
    (5, 9_832_752),
    (6, 9_010_692),
    (7, 5_984_856),
    (8, 2_966_364),
    (9, 1_094_688),
    (10, 314_712),
    (11, 72_720),
    (12, 12_410),
    (13, 1_584),
    (14, 144),
    (15, 0),
    (16, 0),
];

/// Winning answer pairs per question pair `(s, t)`, in the compact
/// "st | ab, ..." layout of the reference game table.
pub const WIN_TABLE: [(&str, &str); 32] = [
    ("14", "01"),
    ("15", "10"),
    ("17", "21"),
    ("18", "01, 12, 20"),
    ("24", "02"),
    ("25", "22"),
    ("27", "02, 10, 21"),
    ("28", "11"),
    ("34", "00"),
    ("35", "00, 12, 21"),
    ("37", "22"),
    ("38", "10"),
    ("41", "10"),
    ("42", "20"),
    ("43", "00"),
    ("46", "02, 11, 20"),
    ("51", "01"),
    ("52", "22"),
    ("53", "00, 12, 21"),
    ("56", "10"),
    ("64", "02, 11, 20"),
    ("65", "01"),
    ("67", "10"),
    ("68", "22"),
    ("71", "12"),
    ("72", "01, 12, 20"),
    ("73", "22"),
    ("76", "01"),
    ("81", "02, 10, 21"),
    ("82", "11"),
    ("83", "01"),
    ("86", "22"),
];

/// An optimal deterministic strategy, outcomes for observables 1..=8.
pub const OPTIMAL_ALICE: [u8; 8] = [2, 2, 1, 2, 1, 0, 2, 0];
pub const OPTIMAL_BOB: [u8; 8] = [2, 0, 2, 2, 2, 0, 1, 0];

/// Seeds `(i, α; j, β)` of the two diagonal orbits used for the inequality.
pub const FIRST_SEED: (u8, u8, u8, u8) = (1, 1, 8, 2);
pub const SECOND_SEED: (u8, u8, u8, u8) = (6, 2, 8, 2);

/// First reference cycle of the constraint graph: Alice vertices and Bob
/// vertices as `(i, α)`.
pub const FIRST_CYCLE_ALICE: [(u8, u8); 3] = [(1, 0), (2, 1), (6, 1)];
pub const FIRST_CYCLE_BOB: [(u8, u8); 3] = [(8, 1), (7, 0), (4, 1)];
