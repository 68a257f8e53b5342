//! The 48-term inequality and its classical bound.
//!
//! The terms are generated from two diagonal orbits of `D(g) ⊗ D(g)` and
//! checked against the reference inequality. A deterministic strategy
//! assigns one outcome to each of the 16 observables; its coefficient is the
//! number of terms it satisfies. The classical bound is the maximum
//! coefficient, found by enumerating all `3^16` strategies with exact
//! integer counting.

use std::collections::BTreeSet;
use std::fmt;

use crate::bell::{check_unit, SeedPair};
use crate::decomp::{kron, Vector9};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::group::Representation;
use crate::orbit::{Label, LabeledOrbit, OBSERVABLES, OUTCOMES};
use crate::tol;
use crate::Model;

/// Number of deterministic strategies of one party, `3^8`.
pub const PARTY_STRATEGIES: usize = 6561;
/// Number of joint deterministic strategies, `3^16`.
pub const TOTAL_STRATEGIES: u64 = 43_046_721;
/// Histogram bins `c = 0..=16`.
pub const BINS: usize = 17;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OrbitSource {
    First,
    Second,
}

impl fmt::Display for OrbitSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrbitSource::First => "O1",
            OrbitSource::Second => "O2",
        })
    }
}

/// One probability term `P(a_i = α, b_j = β)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrbitTerm {
    pub alice: Label,
    pub bob: Label,
    pub source: OrbitSource,
}

impl OrbitTerm {
    /// `(i, α, j, β)`.
    pub fn as_tuple(&self) -> (u8, u8, u8, u8) {
        (
            self.alice.index(),
            self.alice.outcome(),
            self.bob.index(),
            self.bob.outcome(),
        )
    }
}

impl fmt::Display for OrbitTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (i, a, j, b) = self.as_tuple();
        write!(f, "|{i},{a};{j},{b}>")
    }
}

/// Labels of `(D(g)⊗D(g))(x_seed.0 ⊗ x_seed.1)` for all `g`, sorted.
pub fn diagonal_orbit(
    orbit: &LabeledOrbit,
    rep: &Representation,
    seed: SeedPair,
    source: OrbitSource,
) -> Result<Vec<OrbitTerm>> {
    let left = orbit.get(seed.0);
    let right = orbit.get(seed.1);
    let mut terms = BTreeSet::new();
    for (_, m) in rep.iter() {
        let find = |v: crate::orbit::UnitVector3| {
            let image = v.transformed(m.matrix());
            orbit.find(&image, tol::VECTOR_MATCH).ok_or(Error::OrbitClosure {
                vector: image.to_array(),
            })
        };
        terms.insert(OrbitTerm {
            alice: find(left)?,
            bob: find(right)?,
            source,
        });
    }
    Ok(terms.into_iter().collect())
}

/// The 48 terms of the inequality, first orbit then second, each sorted.
pub fn inequality_terms(model: &Model) -> Result<Vec<OrbitTerm>> {
    let seeds = crate::bell::inequality_seeds();
    let mut terms = diagonal_orbit(&model.orbit, &model.rep, seeds[0], OrbitSource::First)?;
    terms.extend(diagonal_orbit(&model.orbit, &model.rep, seeds[1], OrbitSource::Second)?);
    check_against_fixture(&terms)?;
    check_term_structure(&terms)?;
    Ok(terms)
}

/// Set equality with the reference inequality.
pub fn check_against_fixture(terms: &[OrbitTerm]) -> Result<()> {
    let generated: BTreeSet<(u8, u8, u8, u8)> = terms.iter().map(OrbitTerm::as_tuple).collect();
    let reference: BTreeSet<(u8, u8, u8, u8)> = fixtures::INEQUALITY_TERMS.iter().copied().collect();
    if generated.len() != terms.len() {
        return Err(Error::InequalityFixtureMismatch(
            "generated terms contain duplicates".into(),
        ));
    }
    if generated != reference {
        let missing: Vec<_> = reference.difference(&generated).collect();
        let extra: Vec<_> = generated.difference(&reference).collect();
        return Err(Error::InequalityFixtureMismatch(format!(
            "missing {missing:?}, unexpected {extra:?}"
        )));
    }
    Ok(())
}

/// Within each source every Alice label and every Bob label occurs once.
pub fn check_term_structure(terms: &[OrbitTerm]) -> Result<()> {
    for source in [OrbitSource::First, OrbitSource::Second] {
        let of_source: Vec<&OrbitTerm> = terms.iter().filter(|t| t.source == source).collect();
        let alice: BTreeSet<Label> = of_source.iter().map(|t| t.alice).collect();
        let bob: BTreeSet<Label> = of_source.iter().map(|t| t.bob).collect();
        if of_source.len() != 24 || alice.len() != 24 || bob.len() != 24 {
            return Err(Error::InequalityFixtureMismatch(format!(
                "orbit {source}: {} terms, {} Alice labels, {} Bob labels",
                of_source.len(),
                alice.len(),
                bob.len()
            )));
        }
    }
    Ok(())
}

/// A deterministic strategy: outcomes `f_A(s)` and `f_B(t)` for the eight
/// observables of each party.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Strategy {
    alice: [u8; OBSERVABLES],
    bob: [u8; OBSERVABLES],
}

impl Strategy {
    pub fn new(alice: [u8; OBSERVABLES], bob: [u8; OBSERVABLES]) -> Result<Self> {
        for (index, &outcome) in alice.iter().chain(bob.iter()).enumerate() {
            if outcome >= OUTCOMES as u8 {
                return Err(Error::InvalidStrategy {
                    index: index % OBSERVABLES + 1,
                    outcome,
                });
            }
        }
        Ok(Self { alice, bob })
    }

    /// Strategy with both parties decoded from base-3 indices in
    /// `0..6561`; digit `k` is the outcome of observable `k + 1`.
    pub fn from_indices(alice: usize, bob: usize) -> Self {
        Self {
            alice: decode(alice),
            bob: decode(bob),
        }
    }

    pub fn indices(&self) -> (usize, usize) {
        (encode(&self.alice), encode(&self.bob))
    }

    pub fn alice(&self) -> &[u8; OBSERVABLES] {
        &self.alice
    }

    pub fn bob(&self) -> &[u8; OBSERVABLES] {
        &self.bob
    }

    /// Outcome of Alice's observable `s` (1..=8).
    pub fn alice_answer(&self, s: u8) -> u8 {
        self.alice[s as usize - 1]
    }

    pub fn bob_answer(&self, t: u8) -> u8 {
        self.bob[t as usize - 1]
    }

    /// The strategy that scores 14, read off the reference optimal table.
    pub fn reference_optimum() -> Self {
        Self::new(fixtures::OPTIMAL_ALICE, fixtures::OPTIMAL_BOB).expect("valid outcomes")
    }
}

fn decode(mut index: usize) -> [u8; OBSERVABLES] {
    debug_assert!(index < PARTY_STRATEGIES);
    let mut digits = [0u8; OBSERVABLES];
    for d in digits.iter_mut() {
        *d = (index % 3) as u8;
        index /= 3;
    }
    digits
}

fn encode(digits: &[u8; OBSERVABLES]) -> usize {
    digits.iter().rev().fold(0, |acc, &d| acc * 3 + d as usize)
}

/// Number of terms `σ` satisfies, counted directly over the term list.
pub fn coefficient_c(terms: &[OrbitTerm], sigma: &Strategy) -> u32 {
    terms
        .iter()
        .filter(|t| {
            sigma.alice_answer(t.alice.index()) == t.alice.outcome()
                && sigma.bob_answer(t.bob.index()) == t.bob.outcome()
        })
        .count() as u32
}

/// Per question pair `(s, t)` the 3x3 indicator of the answer pairs that
/// appear as terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WinMatrices {
    cells: [[[[u8; OUTCOMES]; OUTCOMES]; OBSERVABLES]; OBSERVABLES],
}

impl WinMatrices {
    pub fn from_terms(terms: &[OrbitTerm]) -> Self {
        Self::from_tuples(terms.iter().map(OrbitTerm::as_tuple))
    }

    /// From `(s, a, t, b)` tuples with `s, t` in 1..=8 and `a, b` in 0..=2.
    pub fn from_tuples(tuples: impl IntoIterator<Item = (u8, u8, u8, u8)>) -> Self {
        let mut cells = [[[[0u8; OUTCOMES]; OUTCOMES]; OBSERVABLES]; OBSERVABLES];
        for (s, a, t, b) in tuples {
            cells[s as usize - 1][t as usize - 1][a as usize][b as usize] += 1;
        }
        Self { cells }
    }

    /// Indicator (count) for question `(s, t)` and answers `(a, b)`.
    pub fn get(&self, s: u8, t: u8, a: u8, b: u8) -> u8 {
        self.cells[s as usize - 1][t as usize - 1][a as usize][b as usize]
    }

    /// Coefficient through the per-pair lookup.
    pub fn coefficient(&self, sigma: &Strategy) -> u32 {
        let mut c = 0u32;
        for s in 0..OBSERVABLES {
            for t in 0..OBSERVABLES {
                c += self.cells[s][t][sigma.alice[s] as usize][sigma.bob[t] as usize] as u32;
            }
        }
        c
    }

    /// `g_t(β) = Σ_s W_{s,t}[f_A(s), β]`, flattened as `3·t + β`.
    fn bob_gains(&self, alice: &[u8; OBSERVABLES]) -> [u8; OBSERVABLES * OUTCOMES] {
        let mut gains = [0u8; OBSERVABLES * OUTCOMES];
        for (s, &a) in alice.iter().enumerate() {
            for t in 0..OBSERVABLES {
                for b in 0..OUTCOMES {
                    gains[OUTCOMES * t + b] += self.cells[s][t][a as usize][b];
                }
            }
        }
        gains
    }
}

/// Exact count of strategies per coefficient value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CoefficientHistogram {
    pub counts: [u64; BINS],
}

impl CoefficientHistogram {
    pub fn get(&self, c: usize) -> u64 {
        self.counts[c]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Largest `c` with a nonzero count.
    pub fn max_coefficient(&self) -> usize {
        self.counts.iter().rposition(|&n| n > 0).unwrap_or(0)
    }

    pub fn merge(&mut self, other: &Self) {
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            *a += b;
        }
    }

    /// Comparison with the reference counts for `c = 1..=16`, as
    /// `(c, expected, actual)`.
    pub fn against_reference(&self) -> Vec<(u32, u64, u64)> {
        fixtures::COEFFICIENT_COUNTS
            .iter()
            .map(|&(c, expected)| (c, expected, self.counts[c as usize]))
            .collect()
    }

    /// Zero bin implied by the reference counts: all strategies minus the
    /// listed ones.
    pub fn reference_zero_bin() -> u64 {
        TOTAL_STRATEGIES - fixtures::COEFFICIENT_COUNTS.iter().map(|&(_, n)| n).sum::<u64>()
    }

    pub fn matches_reference(&self) -> bool {
        self.against_reference().iter().all(|(_, e, a)| e == a) && self.total() == TOTAL_STRATEGIES
    }

    /// `c,count` rows with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("c,count\n");
        for (c, n) in self.counts.iter().enumerate() {
            out.push_str(&format!("{c},{n}\n"));
        }
        out
    }
}

/// Result of the exhaustive enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    pub histogram: CoefficientHistogram,
    pub best: u32,
    /// All strategies attaining `best`, ordered by `(alice, bob)` index.
    pub optimal: Vec<Strategy>,
}

struct Partial {
    histogram: CoefficientHistogram,
    best: u32,
    optimal: Vec<(u16, u16)>,
}

fn enumerate_range(
    table: &WinMatrices,
    bob_offsets: &[[u8; OBSERVABLES]],
    alice_range: std::ops::Range<usize>,
) -> Partial {
    let mut histogram = CoefficientHistogram::default();
    let mut best = 0u32;
    let mut optimal = Vec::new();
    for a in alice_range {
        let gains = table.bob_gains(&decode(a));
        let mut local = [0u64; BINS];
        for (b, offsets) in bob_offsets.iter().enumerate() {
            let c = offsets.iter().map(|&o| gains[o as usize] as u32).sum::<u32>();
            local[c as usize] += 1;
            if c >= best {
                if c > best {
                    best = c;
                    optimal.clear();
                }
                optimal.push((a as u16, b as u16));
            }
        }
        for (h, l) in histogram.counts.iter_mut().zip(local) {
            *h += l;
        }
    }
    Partial {
        histogram,
        best,
        optimal,
    }
}

/// Enumerates all `3^16` strategies over `threads` workers.
///
/// Alice strategies are split into contiguous ranges; each worker fills a
/// private histogram and the results are added in range order, so the
/// output does not depend on `threads`.
pub fn enumerate_strategies(table: &WinMatrices, threads: usize) -> Enumeration {
    let threads = threads.clamp(1, PARTY_STRATEGIES);
    let bob_offsets: Vec<[u8; OBSERVABLES]> = (0..PARTY_STRATEGIES)
        .map(|b| {
            let digits = decode(b);
            std::array::from_fn(|t| (OUTCOMES * t) as u8 + digits[t])
        })
        .collect();

    let chunk = PARTY_STRATEGIES.div_ceil(threads);
    let ranges: Vec<std::ops::Range<usize>> = (0..threads)
        .map(|w| (w * chunk).min(PARTY_STRATEGIES)..((w + 1) * chunk).min(PARTY_STRATEGIES))
        .filter(|r| !r.is_empty())
        .collect();

    let partials: Vec<Partial> = if ranges.len() == 1 {
        vec![enumerate_range(table, &bob_offsets, ranges[0].clone())]
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = ranges
                .iter()
                .map(|r| {
                    let offsets = &bob_offsets;
                    scope.spawn(move || enumerate_range(table, offsets, r.clone()))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("enumeration worker panicked"))
                .collect()
        })
    };

    let best = partials.iter().map(|p| p.best).max().unwrap_or(0);
    let mut histogram = CoefficientHistogram::default();
    let mut optimal = Vec::new();
    for p in &partials {
        histogram.merge(&p.histogram);
        if p.best == best {
            optimal.extend(
                p.optimal
                    .iter()
                    .map(|&(a, b)| Strategy::from_indices(a as usize, b as usize)),
            );
        }
    }
    Enumeration {
        histogram,
        best,
        optimal,
    }
}

/// Histogram of `c(σ)` over every deterministic strategy.
pub fn classical_histogram(terms: &[OrbitTerm], threads: usize) -> CoefficientHistogram {
    enumerate_strategies(&WinMatrices::from_terms(terms), threads).histogram
}

/// A vertex of the constraint graph: an outcome label on one side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Vertex {
    Alice(Label),
    Bob(Label),
}

/// One cycle of the constraint graph, vertices in traversal order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    pub alice: Vec<Label>,
    pub bob: Vec<Label>,
    pub edges: Vec<OrbitTerm>,
}

impl Cycle {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// Decomposes the bipartite graph with one edge per term into cycles.
///
/// Every vertex must have degree two; cycles start at the smallest
/// unvisited Alice label and leave it along its first-orbit edge.
pub fn constraint_graph_cycles(terms: &[OrbitTerm]) -> Result<Vec<Cycle>> {
    let incident = |v: Vertex| -> Vec<usize> {
        terms
            .iter()
            .enumerate()
            .filter(|(_, t)| match v {
                Vertex::Alice(l) => t.alice == l,
                Vertex::Bob(l) => t.bob == l,
            })
            .map(|(k, _)| k)
            .collect()
    };
    for label in Label::all() {
        for v in [Vertex::Alice(label), Vertex::Bob(label)] {
            let degree = incident(v).len();
            if degree != 2 {
                return Err(Error::GraphStructure(format!("{v:?} has degree {degree}")));
            }
        }
    }

    let mut used = vec![false; terms.len()];
    let mut cycles = Vec::new();
    for start in Label::all() {
        let start_edges = incident(Vertex::Alice(start));
        if start_edges.iter().all(|&e| used[e]) {
            continue;
        }
        let first = *start_edges
            .iter()
            .filter(|&&e| !used[e])
            .min_by_key(|&&e| terms[e].source)
            .expect("unused edge");
        let mut cycle = Cycle {
            alice: vec![start],
            bob: Vec::new(),
            edges: Vec::new(),
        };
        let mut edge = first;
        loop {
            used[edge] = true;
            let term = terms[edge];
            cycle.edges.push(term);
            let at_alice = cycle.edges.len() % 2 == 1;
            let next = if at_alice {
                cycle.bob.push(term.bob);
                Vertex::Bob(term.bob)
            } else {
                if term.alice == start {
                    break;
                }
                cycle.alice.push(term.alice);
                Vertex::Alice(term.alice)
            };
            match incident(next).into_iter().find(|&e| !used[e]) {
                Some(e) => edge = e,
                None => {
                    return Err(Error::GraphStructure(format!("walk from {start} stuck at {next:?}")));
                }
            }
        }
        cycles.push(cycle);
    }
    Ok(cycles)
}

/// `|⟨x^i_α ⊗ x^j_β | χ⟩|²` for each term.
pub fn term_probabilities(orbit: &LabeledOrbit, terms: &[OrbitTerm], state: &Vector9) -> Result<Vec<f64>> {
    check_unit(state)?;
    Ok(terms
        .iter()
        .map(|t| {
            let amplitude = kron(orbit.get(t.alice).vector(), orbit.get(t.bob).vector()).dot(state);
            amplitude * amplitude
        })
        .collect())
}

/// The inequality's left-hand side evaluated on a quantum state.
pub fn quantum_value_s(orbit: &LabeledOrbit, terms: &[OrbitTerm], state: &Vector9) -> Result<f64> {
    Ok(term_probabilities(orbit, terms, state)?.iter().sum())
}
