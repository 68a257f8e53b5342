//! The subcommands as library functions returning a [`RunReport`].

use std::path::{Path, PathBuf};
use std::time::Instant;

use nalgebra::Matrix3;
use serde_json::{json, Value};
use thiserror::Error;

use s4bell::bell::{
    build_x, compare_spectra, inequality_seeds, lambda_max_closed_form, quantum_bound, reduced_density_left,
    reduced_density_right, scalar_state, seed_states,
};
use s4bell::classical::{
    constraint_graph_cycles, enumerate_strategies, inequality_terms, CoefficientHistogram, Strategy, WinMatrices, BINS,
    TOTAL_STRATEGIES,
};
use s4bell::decomp::{cg_matrix, BlockLayout, Irrep};
use s4bell::fixtures;
use s4bell::game::{build_win_table, classical_optimum, classical_win_probability, quantum_win_probability};
use s4bell::group::{conjugacy_classes, generate_group, Permutation, Representation, GROUP_ORDER};
use s4bell::orbit::{
    generate_orbit, generic_start, partition_into_bases_with_fixture, tetrahedron_orbit, LabeledOrbit,
};
use s4bell::{tol, Model};

use crate::report::RunReport;

/// Failures that prevent a command from producing a report.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("thread count must be at least 1")]
    InvalidThreads,
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundMode {
    Quantum,
    Classical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GameMode {
    Table,
    Optimize,
    Quantum,
}

/// Options for [`cmd_verify`].
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct VerifyOptions {
    /// Added to the first coordinate of the first reference vector before
    /// the orbit is labelled. Test hook for the fault path.
    pub fixture_perturbation: Option<f64>,
}

pub fn default_threads() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn build_model(report: &mut RunReport) -> Option<Model> {
    let model = Model::build();
    report.check_ok("model construction", &model);
    model.ok()
}

/// Group, orbit, Clebsch–Gordan and fixture invariants.
pub fn cmd_verify(options: VerifyOptions) -> RunReport {
    let start = Instant::now();
    let mut report = RunReport::new("verify-group");
    if let Some(delta) = options.fixture_perturbation {
        report.input("fixture_perturbation", delta);
    }

    let generators: Vec<Permutation> = [(1, 2), (2, 3), (3, 4)]
        .into_iter()
        .map(|(i, j)| Permutation::transposition(i, j).expect("valid transposition"))
        .collect();
    let group = generate_group(&generators);
    report.result("group_order", group.len());
    report.check_eq("group order", GROUP_ORDER, group.len());

    let mut sizes: Vec<usize> = conjugacy_classes(&group).iter().map(|c| c.len()).collect();
    sizes.sort_unstable();
    report.result("class_sizes", sizes.clone());
    report.check_eq("class sizes", vec![1usize, 3, 6, 6, 8], sizes);

    let rep = Representation::build();
    report.check_ok("factorization independence", &rep);
    let Ok(rep) = rep else {
        report.elapsed = start.elapsed().as_secs_f64();
        return report;
    };

    report.check_at_most("homomorphism defect", tol::HOMOMORPHISM, rep.homomorphism_defect());
    let orthogonality = rep.iter().map(|(_, m)| m.orthogonality_defect()).fold(0.0, f64::max);
    report.check_at_most("orthogonality defect", tol::ORTHOGONAL, orthogonality);
    let det_sign = rep
        .iter()
        .map(|(p, m)| (m.determinant() - p.sign() as f64).abs())
        .fold(0.0, f64::max);
    report.check_at_most("determinant equals sign", tol::HOMOMORPHISM, det_sign);

    verify_tetrahedron(&mut report, &rep);

    let mut fixture = fixtures::reference_orbit();
    if let Some(delta) = options.fixture_perturbation {
        fixture[0][0][0] += delta;
    }
    let orbit = generate_orbit(&rep, &generic_start(), tol::VECTOR_MATCH);
    report.check_eq("generic orbit size", GROUP_ORDER, orbit.len());
    let labeled = partition_into_bases_with_fixture(&orbit, &fixture);
    report.check_ok("orbit labelling", &labeled);

    let cg = cg_matrix();
    report.check_at_most(
        "clebsch-gordan orthogonality",
        tol::ORTHOGONAL,
        cg.orthogonality_defect(),
    );
    match BlockLayout::detect(&rep, &cg) {
        Ok(layout) => {
            report.check("block layout", "ok", "ok", true);
            let dims: Vec<usize> = Irrep::ALL.iter().map(|&s| layout.rows(s).len()).collect();
            report.result("block_dimensions", dims.clone());
            report.check_eq("block dimensions", vec![3usize, 3, 2, 1], dims);
            let off = rep
                .iter()
                .map(|(_, m)| layout.off_block_max(&cg.conjugate(m.matrix())))
                .fold(0.0, f64::max);
            report.check_at_most("off-block entries", tol::BLOCK_ZERO, off);
        }
        Err(e) => report.check("block layout", "ok", e.to_string(), false),
    }

    if let Ok(orbit) = labeled {
        verify_inequality(&mut report, rep, orbit);
    }

    report.elapsed = start.elapsed().as_secs_f64();
    report
}

fn verify_tetrahedron(report: &mut RunReport, rep: &Representation) {
    let vertices = tetrahedron_orbit(rep);
    report.check_eq("tetrahedron orbit size", 4, vertices.len());
    let mut worst_match = 0.0f64;
    for reference in fixtures::tetrahedron_vertices() {
        let best = vertices
            .iter()
            .map(|v| {
                v.to_array()
                    .iter()
                    .zip(reference)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(f64::INFINITY, f64::min);
        worst_match = worst_match.max(best);
    }
    report.check_at_most("tetrahedron vertices", 1e-12, worst_match);
    let mut worst_dot = 0.0f64;
    for (a, u) in vertices.iter().enumerate() {
        for v in &vertices[a + 1..] {
            worst_dot = worst_dot.max((u.dot(v) + 1.0 / 3.0).abs());
        }
    }
    report.check_at_most("tetrahedron dot products", 1e-12, worst_dot);
}

fn verify_inequality(report: &mut RunReport, rep: Representation, orbit: LabeledOrbit) {
    let cg = cg_matrix();
    let Ok(layout) = BlockLayout::detect(&rep, &cg) else {
        return;
    };
    let model = Model { rep, orbit, cg, layout };
    let terms = inequality_terms(&model);
    report.check_ok("inequality terms", &terms);
    let Ok(terms) = terms else { return };
    match constraint_graph_cycles(&terms) {
        Ok(cycles) => {
            let lengths: Vec<usize> = cycles.iter().map(|c| c.len()).collect();
            report.check_eq("constraint graph cycles", vec![6usize; 8], lengths);
        }
        Err(e) => report.check("constraint graph cycles", "ok", e.to_string(), false),
    }
    report.check_ok("win table", &build_win_table(&terms));
}

/// CSV of the labelled orbit, columns `i,alpha,v1,v2,v3`. Coordinates use
/// the shortest representation that parses back to the same double.
pub fn orbit_csv(orbit: &LabeledOrbit) -> String {
    let mut out = String::from("i,alpha,v1,v2,v3\n");
    for (label, v) in orbit.iter() {
        let [x, y, z] = v.to_array();
        out.push_str(&format!("{},{},{x:?},{y:?},{z:?}\n", label.index(), label.outcome()));
    }
    out
}

/// The labelled 24-vector orbit with its checks.
pub fn cmd_orbit() -> (RunReport, Option<LabeledOrbit>) {
    let start = Instant::now();
    let mut report = RunReport::new("orbit");
    let Some(model) = build_model(&mut report) else {
        return (report, None);
    };
    let fixture = fixtures::reference_orbit();
    let mut worst = 0.0f64;
    let mut rows = Vec::new();
    for (label, v) in model.orbit.iter() {
        let reference = fixture[label.index() as usize - 1][label.outcome() as usize];
        for (a, b) in v.to_array().iter().zip(reference) {
            worst = worst.max((a - b).abs());
        }
        rows.push(json!({"label": label.to_string(), "vector": v.to_array().to_vec()}));
    }
    report.result("vectors", rows);
    report.check_at_most("fixture agreement", tol::VECTOR_MATCH, worst);
    let mut basis_defect = 0.0f64;
    for i in 1..=8 {
        let triple = model.orbit.basis(i).expect("index in range");
        let gram = Matrix3::from_fn(|r, c| triple[r].dot(&triple[c]));
        basis_defect = basis_defect.max((gram - Matrix3::identity()).amax());
    }
    report.check_at_most("bases orthonormal", tol::ORTHONORMAL_BASIS, basis_defect);
    report.elapsed = start.elapsed().as_secs_f64();
    (report, Some(model.orbit))
}

pub fn cmd_bound(mode: BoundMode, threads: usize) -> Result<RunReport, CliError> {
    if threads == 0 {
        return Err(CliError::InvalidThreads);
    }
    let start = Instant::now();
    let mut report = RunReport::new("bound");
    report.input(
        "mode",
        match mode {
            BoundMode::Quantum => "quantum",
            BoundMode::Classical => "classical",
        },
    );
    if let Some(model) = build_model(&mut report) {
        match mode {
            BoundMode::Quantum => quantum_section(&mut report, &model),
            BoundMode::Classical => {
                report.input("threads", threads);
                classical_section(&mut report, &model, threads);
            }
        }
    }
    report.elapsed = start.elapsed().as_secs_f64();
    Ok(report)
}

fn quantum_section(report: &mut RunReport, model: &Model) {
    let seeds = inequality_seeds();
    report.input(
        "seeds",
        seeds.iter().map(|(a, b)| format!("{a} {b}")).collect::<Vec<_>>(),
    );
    let closed = lambda_max_closed_form();
    let schur = quantum_bound(model, &seeds);
    let x = build_x(&model.rep, &seed_states(&model.orbit, &seeds));
    let dense = x.dense_spectrum();
    let agreement = compare_spectra(&schur, &dense);

    report.result("lambda_max", schur.lambda_max);
    report.result("closed_form", closed);
    report.result("dense_max", dense.max());
    report.result("maximizer", schur.maximizer.name());
    let components: serde_json::Map<String, Value> = schur
        .components()
        .map(|(s, value)| (s.name().to_owned(), json!(value)))
        .collect();
    report.result("component_eigenvalues", components);
    report.result(
        "component_dimensions",
        Irrep::ALL
            .iter()
            .map(|s| (s.name().to_owned(), json!(s.dim())))
            .collect::<serde_json::Map<_, _>>(),
    );
    report.result("weighted_trace", schur.weighted_trace());
    report.result(
        "dense_levels",
        dense
            .levels()
            .iter()
            .map(|l| json!({"value": l.value, "multiplicity": l.multiplicity}))
            .collect::<Vec<_>>(),
    );

    report.check_close("schur route vs closed form", closed, schur.lambda_max, 1e-9);
    report.check_close("dense route vs closed form", closed, dense.max(), 1e-9);
    report.check("spectra consistent", true, agreement.consistent, agreement.consistent);
    report.check_close("weighted trace", 48.0, schur.weighted_trace(), 1e-9);
    report.check_close("trace of X", 48.0, x.trace(), 1e-9);
    report.check_at_most("dense residual", tol::EIGEN_RESIDUAL, dense.max_residual);
    report.check_at_most("commutator defect", tol::HOMOMORPHISM, x.commutator_defect(&model.rep));
    let third = Matrix3::identity() / 3.0;
    let rho = (reduced_density_left(&schur.optimal_state) - third)
        .amax()
        .max((reduced_density_right(&schur.optimal_state) - third).amax());
    report.check_at_most("reduced states maximally mixed", 1e-10, rho);
}

fn classical_section(report: &mut RunReport, model: &Model, threads: usize) {
    let terms = inequality_terms(model);
    report.check_ok("inequality terms", &terms);
    let Ok(terms) = terms else { return };
    let result = enumerate_strategies(&WinMatrices::from_terms(&terms), threads);
    report.result("strategies", TOTAL_STRATEGIES);
    report.result("max_c", result.best);
    report.result("argmax_count", result.optimal.len());
    report.check_eq("classical bound", fixtures::CLASSICAL_BOUND, result.best);
    report.check_eq("optimal strategy count", 144, result.optimal.len());
    let contains = result.optimal.contains(&Strategy::reference_optimum());
    report.check("reference optimum attains the bound", true, contains, contains);
}

/// Reference count for bin `c`; bin 0 is implied by the others.
fn reference_bin(c: usize) -> u64 {
    if c == 0 {
        CoefficientHistogram::reference_zero_bin()
    } else {
        fixtures::COEFFICIENT_COUNTS[c - 1].1
    }
}

/// Full enumeration. The CSV depends only on the counts, so it is
/// byte-identical for every thread count.
pub fn cmd_histogram(threads: usize, out: Option<&Path>) -> Result<(RunReport, String), CliError> {
    if threads == 0 {
        return Err(CliError::InvalidThreads);
    }
    let start = Instant::now();
    let mut report = RunReport::new("histogram");
    report.input("threads", threads);
    if let Some(path) = out {
        report.input("out", path.display().to_string());
    }
    let Some(model) = build_model(&mut report) else {
        return Ok((report, String::new()));
    };
    let terms = inequality_terms(&model);
    report.check_ok("inequality terms", &terms);
    let Ok(terms) = terms else {
        return Ok((report, String::new()));
    };
    let result = enumerate_strategies(&WinMatrices::from_terms(&terms), threads);
    let csv = result.histogram.to_csv();
    if let Some(path) = out {
        std::fs::write(path, &csv).map_err(|source| CliError::Io {
            path: path.to_owned(),
            source,
        })?;
    }

    let rows: Vec<Value> = (0..BINS)
        .map(|c| {
            let count = result.histogram.get(c);
            let reference = reference_bin(c);
            json!({"c": c, "count": count, "reference": reference, "match": count == reference})
        })
        .collect();
    report.result("bins", rows);
    report.result("max_c", result.best);
    report.check_eq("total strategies", TOTAL_STRATEGIES, result.histogram.total());
    for c in 0..BINS {
        report.check_eq(&format!("bin c={c}"), reference_bin(c), result.histogram.get(c));
    }
    report.elapsed = start.elapsed().as_secs_f64();
    Ok((report, csv))
}

pub fn cmd_game(mode: GameMode, threads: usize) -> Result<RunReport, CliError> {
    if threads == 0 {
        return Err(CliError::InvalidThreads);
    }
    let start = Instant::now();
    let mut report = RunReport::new("game");
    report.input(
        "mode",
        match mode {
            GameMode::Table => "table",
            GameMode::Optimize => "optimize",
            GameMode::Quantum => "quantum",
        },
    );
    let Some(model) = build_model(&mut report) else {
        return Ok(report);
    };
    let table = inequality_terms(&model).and_then(|terms| build_win_table(&terms));
    report.check_ok("win table", &table);
    let Ok(table) = table else { return Ok(report) };

    match mode {
        GameMode::Table => {
            report.result("winning_pairs", table.total_winning_pairs());
            report.result("table", table.to_compact_text());
            report.check_eq("winning answer pairs", 48, table.total_winning_pairs());
            report.check_eq("question pairs with a winning answer", 32, table.nonempty_questions());
        }
        GameMode::Optimize => {
            report.input("threads", threads);
            let (best, optimal) = classical_optimum(&table, threads);
            let reference = classical_win_probability(&Strategy::reference_optimum(), &table);
            report.result("classical_win_probability", best.value());
            report.result("classical_wins", best.to_string());
            report.result("optimal_strategies", optimal.len());
            report.result("reference_strategy_wins", reference.to_string());
            report.check_eq("classical optimum", "14/64".to_owned(), best.to_string());
            report.check_eq("optimal strategy count", 144, optimal.len());
            report.check_eq("reference strategy", "14/64".to_owned(), reference.to_string());
        }
        GameMode::Quantum => {
            let closed = lambda_max_closed_form();
            match quantum_win_probability(&scalar_state(), &model.orbit, &table) {
                Ok(p) => {
                    report.result("quantum_win_probability", p);
                    report.result("times_64", p * 64.0);
                    report.result("classical_win_probability", 14.0 / 64.0);
                    report.result("margin_times_64", p * 64.0 - 14.0);
                    report.check_close("quantum value", closed / 64.0, p, 1e-9 / 64.0);
                    report.check("exceeds classical", "> 0.21875", p, p > 14.0 / 64.0);
                }
                Err(e) => report.check("quantum value", "ok", e.to_string(), false),
            }
        }
    }
    report.elapsed = start.elapsed().as_secs_f64();
    Ok(report)
}
