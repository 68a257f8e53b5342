use std::sync::OnceLock;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use s4bell::bell::{build_x, inequality_seeds, lambda_max_closed_form, seed_states};
use s4bell::classical::{coefficient_c, inequality_terms, quantum_value_s, OrbitTerm, WinMatrices};
use s4bell::decomp::{closed_form_components, project_closed_form, project_via_cg, spin_decompose, Irrep, Vector9};
use s4bell::group::{symmetric_group, Permutation};
use s4bell::orbit::UnitVector3;
use s4bell::Model;

struct Shared {
    model: Model,
    terms: Vec<OrbitTerm>,
}

fn shared() -> &'static Shared {
    static SHARED: OnceLock<Shared> = OnceLock::new();
    SHARED.get_or_init(|| {
        let model = Model::build().unwrap();
        let terms = inequality_terms(&model).unwrap();
        Shared { model, terms }
    })
}

fn permutation() -> impl Strategy<Value = Permutation> {
    let all: Vec<Permutation> = symmetric_group().into_iter().collect();
    proptest::sample::select(all)
}

fn unit_vector() -> impl Strategy<Value = UnitVector3> {
    prop::array::uniform3(-1.0f64..1.0)
        .prop_filter("nonzero", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-3)
        .prop_map(|v| UnitVector3::normalize(v).unwrap())
}

fn unit_state() -> impl Strategy<Value = Vector9> {
    prop::array::uniform9(-1.0f64..1.0)
        .prop_filter("nonzero", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-3)
        .prop_map(|v| Vector9::from_column_slice(&v).normalize())
}

fn strategy() -> impl Strategy<Value = s4bell::classical::Strategy> {
    (0usize..6561, 0usize..6561).prop_map(|(a, b)| s4bell::classical::Strategy::from_indices(a, b))
}

proptest! {
    #[test]
    fn group_law(p in permutation(), q in permutation(), r in permutation()) {
        prop_assert!(p.compose(&p.inverse()).is_identity());
        prop_assert_eq!(p.compose(&q).compose(&r), p.compose(&q.compose(&r)));
        prop_assert_eq!(Permutation::identity().compose(&p), p);
        prop_assert_eq!(p.compose(&q).sign(), p.sign() * q.sign());
    }

    #[test]
    fn representation_products(p in permutation(), q in permutation()) {
        let rep = &shared().model.rep;
        let lhs = *rep.matrix(&p.compose(&q));
        let rhs = *rep.matrix(&p) * *rep.matrix(&q);
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-10);
    }

    #[test]
    fn projections_complete_and_consistent(phi in unit_vector(), psi in unit_vector()) {
        let model = &shared().model;
        let a = project_closed_form(&phi, &psi);
        let b = project_via_cg(&model.layout, &model.cg, &phi, &psi);
        prop_assert!(a.max_abs_diff(&b) < 1e-12);
        prop_assert!((a.total() - 1.0).abs() < 1e-10);
        prop_assert!((b.total() - 1.0).abs() < 1e-10);
        for irrep in Irrep::ALL {
            prop_assert!(a.norm_squared(irrep) >= 0.0);
        }
    }

    #[test]
    fn spin_parts(m in unit_vector(), n in unit_vector()) {
        let sd = spin_decompose(&m, &n);
        let outer = m.vector() * n.vector().transpose();
        prop_assert!((sd.reconstruct() - outer).amax() < 1e-12);
        prop_assert!(sd.s.trace().abs() < 1e-12);
        prop_assert!((sd.s - sd.s.transpose()).amax() < 1e-15);
        prop_assert!((sd.a + sd.a.transpose()).amax() < 1e-15);
        let dot = m.dot(&n);
        prop_assert!((sd.delta - nalgebra::Matrix3::identity() * (dot / 3.0)).amax() < 1e-15);

        let c = closed_form_components(&m, &n);
        for (x, y) in sd.d2_from_s().iter().zip(c.d2) {
            prop_assert!((x - y).abs() < 1e-12);
        }
        for (x, y) in sd.d_from_s().iter().zip(c.d) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn coefficient_routes_agree(sigma in strategy()) {
        let terms = &shared().terms;
        let direct = coefficient_c(terms, &sigma);
        let lookup = WinMatrices::from_terms(terms).coefficient(&sigma);
        prop_assert_eq!(direct, lookup);
        prop_assert!(direct <= 14);
        let (a, b) = sigma.indices();
        prop_assert_eq!(s4bell::classical::Strategy::from_indices(a, b), sigma);
    }

    #[test]
    fn quantum_value_below_lambda_max(state in unit_state()) {
        let s = shared();
        let value = quantum_value_s(&s.model.orbit, &s.terms, &state).unwrap();
        prop_assert!(value <= lambda_max_closed_form() + 1e-9);
        let x = build_x(&s.model.rep, &seed_states(&s.model.orbit, &inequality_seeds()));
        prop_assert!((x.expectation(&state) - value).abs() < 1e-9);
    }
}

/// A thousand seeded pairs, in addition to the shrinking search above.
#[test]
fn projections_agree_on_seeded_sample() {
    let model = &shared().model;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    let mut draw = || loop {
        let v: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        if let Ok(u) = UnitVector3::normalize(v) {
            break u;
        }
    };
    for _ in 0..1000 {
        let phi = draw();
        let psi = draw();
        let a = project_closed_form(&phi, &psi);
        let b = project_via_cg(&model.layout, &model.cg, &phi, &psi);
        assert!(a.max_abs_diff(&b) < 1e-12);
    }
}

#[test]
fn scalar_weight_of_orbit_pairs() {
    let model = &shared().model;
    for (la, x) in model.orbit.iter() {
        for (lb, y) in model.orbit.iter() {
            let p = project_closed_form(&x, &y).norm_squared(Irrep::D0);
            let dot = x.dot(&y);
            assert!((p - dot * dot / 3.0).abs() < 1e-14, "{la} {lb}");
        }
    }
}

#[test]
fn reference_optimum_scores_fourteen() {
    let terms = &shared().terms;
    assert_eq!(
        coefficient_c(terms, &s4bell::classical::Strategy::reference_optimum()),
        14
    );
}
