use std::f64::consts::PI;

use mpolylog::chen::EvalConfig;
use mpolylog::monodromy::{check_dsn, check_f_relation, check_trivial, predicted_f, FFamily, MonodromyResult};
use mpolylog::paths::{all_components, DivisorComponent};
use mpolylog::C64;

fn c(v: &[(f64, f64)]) -> Vec<C64> {
    v.iter().map(|&(a, b)| C64::new(a, b)).collect()
}

fn points() -> Vec<Vec<C64>> {
    vec![
        c(&[(0.3, 0.1), (0.4, -0.2)]),
        c(&[(0.3, 0.1), (0.4, -0.2), (0.5, 0.15)]),
        c(&[(0.6, 0.2), (0.7, 0.1), (0.4, -0.3)]),
    ]
}

fn certified(r: &MonodromyResult) {
    assert!((r.loop_dlog - C64::new(0.0, 2.0 * PI)).norm() < 1e-8, "{r:?}");
    for (comp, w) in &r.winding_certificate {
        let expected = if *comp == r.component { 1.0 } else { 0.0 };
        assert!((w - expected).norm() < 1e-6, "{comp}: {w}");
    }
}

#[test]
fn explicit_monodromy_matches_closed_form() {
    let cfg = EvalConfig::default();
    for x in points() {
        for s in 1..=x.len() {
            let r = check_dsn(&x, s, &cfg).unwrap();
            certified(&r);
            assert!(r.abs_err < 1e-7, "s = {s}: {r:?}");
        }
    }
}

#[test]
fn trivial_components_have_no_monodromy() {
    let cfg = EvalConfig::default();
    for x in points() {
        let n = x.len();
        for comp in all_components(n) {
            if matches!(comp, DivisorComponent::ProductOne(_, j) if j + 1 == n) {
                continue;
            }
            let r = check_trivial(&x, comp, &cfg).unwrap();
            certified(&r);
            assert!(r.abs_err < 1e-7, "{comp}: {r:?}");
        }
    }
}

#[test]
fn nontrivial_component_is_rejected_as_trivial() {
    let x = c(&[(0.3, 0.1), (0.4, -0.2)]);
    assert!(check_trivial(&x, DivisorComponent::ProductOne(0, 1), &EvalConfig::default()).is_err());
}

#[test]
fn relations_in_two_variables() {
    let cfg = EvalConfig::default();
    let x = c(&[(0.3, 0.1), (0.4, -0.2)]);
    for (family, j) in [(FFamily::J0, 1), (FFamily::OneJ, 1), (FFamily::JN, 2)] {
        let r = check_f_relation(&x, family, j, &cfg).unwrap();
        certified(&r);
        assert!(r.abs_err < 1e-7, "{family:?} {j}: {r:?}");
    }
}

#[test]
fn relations_in_three_variables() {
    let cfg = EvalConfig::default();
    for x in &points()[1..] {
        for (family, j) in [(FFamily::J0, 2), (FFamily::OneJ, 1), (FFamily::OneJ, 2), (FFamily::JN, 2), (FFamily::JN, 3)] {
            let r = check_f_relation(x, family, j, &cfg).unwrap();
            certified(&r);
            assert!(r.abs_err < 1e-7, "{family:?} {j}: {r:?}");
        }
    }
}

/// The loop around `{x_1 = 0}` maps to a loop in the transformed variables
/// around two intersecting components at once; the jump then carries an
/// extra `(2πi)^2` on top of the first-order sum.
#[test]
fn first_coordinate_loop_adds_a_quadratic_term() {
    let cfg = EvalConfig::default();
    let two_pi_i = C64::new(0.0, 2.0 * PI);
    for x in &points()[1..] {
        let r = check_f_relation(x, FFamily::J0, 1, &cfg).unwrap();
        certified(&r);
        let first_order = predicted_f(FFamily::J0, 1, x, &cfg).unwrap();
        assert!((r.observed - first_order - two_pi_i * two_pi_i).norm() < 1e-7, "{r:?}");
    }
}

#[test]
fn illegal_family_indices_are_rejected() {
    let cfg = EvalConfig::default();
    let x = c(&[(0.3, 0.1), (0.4, -0.2)]);
    assert!(check_f_relation(&x, FFamily::J0, 2, &cfg).is_err());
    assert!(check_f_relation(&x, FFamily::JN, 1, &cfg).is_err());
    assert!(check_f_relation(&x[..1], FFamily::OneJ, 1, &cfg).is_err());
}
