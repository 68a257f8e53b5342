//! The inequality read as a cooperative nonlocal game.
//!
//! A referee sends Alice a question `s` and Bob a question `t`, both
//! uniform on 1..=8. Each answers 0, 1 or 2. They win when `(a, b)` is one
//! of the pairs listed for `(s, t)`; question pairs with no listed answers
//! are lost whatever the answers.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::classical::{enumerate_strategies, OrbitTerm, Strategy, WinMatrices};
use crate::decomp::{kron, Vector9};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::orbit::{Label, LabeledOrbit, OBSERVABLES};

/// Number of equally likely question pairs.
pub const QUESTION_PAIRS: u32 = 64;

/// Winning answer pairs per question pair. All 64 keys are present.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WinTable {
    wins: BTreeMap<(u8, u8), BTreeSet<(u8, u8)>>,
}

impl WinTable {
    fn empty() -> Self {
        let wins = (1..=OBSERVABLES as u8)
            .flat_map(|s| (1..=OBSERVABLES as u8).map(move |t| ((s, t), BTreeSet::new())))
            .collect();
        Self { wins }
    }

    /// Winning answers for questions `(s, t)`.
    pub fn wins(&self, s: u8, t: u8) -> &BTreeSet<(u8, u8)> {
        &self.wins[&(s, t)]
    }

    pub fn is_win(&self, s: u8, t: u8, a: u8, b: u8) -> bool {
        self.wins(s, t).contains(&(a, b))
    }

    pub fn total_winning_pairs(&self) -> usize {
        self.wins.values().map(BTreeSet::len).sum()
    }

    pub fn nonempty_questions(&self) -> usize {
        self.wins.values().filter(|w| !w.is_empty()).count()
    }

    /// Every winning `(s, a, t, b)`.
    pub fn tuples(&self) -> impl Iterator<Item = (u8, u8, u8, u8)> + '_ {
        self.wins
            .iter()
            .flat_map(|(&(s, t), pairs)| pairs.iter().map(move |&(a, b)| (s, a, t, b)))
    }

    /// One line `st | ab, ab` per question pair with winning answers.
    pub fn to_compact_text(&self) -> String {
        let mut out = String::new();
        for (&(s, t), pairs) in &self.wins {
            if pairs.is_empty() {
                continue;
            }
            let answers: Vec<String> = pairs.iter().map(|(a, b)| format!("{a}{b}")).collect();
            out.push_str(&format!("{s}{t} | {}\n", answers.join(", ")));
        }
        out
    }

    /// `s,t,alice_out,bob_out` rows with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,t,alice_out,bob_out\n");
        for (s, a, t, b) in self.tuples() {
            out.push_str(&format!("{s},{t},{a},{b}\n"));
        }
        out
    }

    /// The embedded reference table.
    pub fn reference() -> Self {
        let mut table = Self::empty();
        for (key, answers) in fixtures::WIN_TABLE {
            let digits: Vec<u8> = key.bytes().map(|c| c - b'0').collect();
            let set = table.wins.get_mut(&(digits[0], digits[1])).expect("question in range");
            for pair in answers.split(", ") {
                let d: Vec<u8> = pair.bytes().map(|c| c - b'0').collect();
                set.insert((d[0], d[1]));
            }
        }
        table
    }
}

/// `wins[(i, j)]` contains `(α, β)` exactly when `|i,α; j,β⟩` is a term.
/// The result must equal the reference table.
pub fn build_win_table(terms: &[OrbitTerm]) -> Result<WinTable> {
    let table = win_table_from_terms(terms);
    let reference = WinTable::reference();
    if table != reference {
        let differing: Vec<String> = table
            .wins
            .iter()
            .filter(|(k, v)| reference.wins[*k] != **v)
            .map(|(&(s, t), v)| format!("{s}{t}: got {v:?}, expected {:?}", reference.wins[&(s, t)]))
            .collect();
        return Err(Error::WinTableMismatch(differing.join("; ")));
    }
    Ok(table)
}

fn win_table_from_terms(terms: &[OrbitTerm]) -> WinTable {
    let mut table = WinTable::empty();
    for term in terms {
        let (s, a, t, b) = term.as_tuple();
        table.wins.get_mut(&(s, t)).expect("question in range").insert((a, b));
    }
    table
}

/// Winning probability of a deterministic strategy, an exact multiple of
/// 1/64.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct WinProbability {
    pub wins: u32,
}

impl WinProbability {
    pub fn value(&self) -> f64 {
        self.wins as f64 / QUESTION_PAIRS as f64
    }

    /// Numerator and denominator in lowest terms.
    pub fn reduced(&self) -> (u32, u32) {
        let mut a = self.wins;
        let mut b = QUESTION_PAIRS;
        while b != 0 {
            (a, b) = (b, a % b);
        }
        let g = a.max(1);
        (self.wins / g, QUESTION_PAIRS / g)
    }
}

impl fmt::Display for WinProbability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.wins, QUESTION_PAIRS)
    }
}

pub fn classical_win_probability(sigma: &Strategy, table: &WinTable) -> WinProbability {
    let mut wins = 0;
    for s in 1..=OBSERVABLES as u8 {
        for t in 1..=OBSERVABLES as u8 {
            if table.is_win(s, t, sigma.alice_answer(s), sigma.bob_answer(t)) {
                wins += 1;
            }
        }
    }
    WinProbability { wins }
}

/// Average over questions of the probability that measuring `a_s ⊗ b_t` on
/// `state` yields a winning answer pair.
pub fn quantum_win_probability(state: &Vector9, orbit: &LabeledOrbit, table: &WinTable) -> Result<f64> {
    crate::bell::check_unit(state)?;
    let mut total = 0.0;
    for (s, a, t, b) in table.tuples() {
        let x = orbit.get(Label::new(s, a)?);
        let y = orbit.get(Label::new(t, b)?);
        let amplitude = kron(x.vector(), y.vector()).dot(state);
        total += amplitude * amplitude;
    }
    Ok(total / QUESTION_PAIRS as f64)
}

/// Best classical winning probability with every strategy attaining it.
pub fn classical_optimum(table: &WinTable, threads: usize) -> (WinProbability, Vec<Strategy>) {
    let matrices = WinMatrices::from_tuples(table.tuples());
    let result = enumerate_strategies(&matrices, threads);
    (WinProbability { wins: result.best }, result.optimal)
}
