use difftrans::chain::{compose_transform, lambda_table, verify_chain_identity};
use difftrans::expr::{Expr, C64};
use difftrans::numeric::standard_env;
use difftrans::syntax::{parse_expr, parse_poly};
use proptest::prelude::*;

fn x(s: &str) -> Expr {
    parse_expr(s).unwrap()
}

fn points() -> Vec<C64> {
    (0..10).map(|i| C64::new(0.4 + 0.23 * i as f64, 0.3 - 0.07 * i as f64)).collect()
}

/// `|f1(a o e)|` at each point, where `f1` is the transform of `f` by `e`.
fn transported(f: &str, a: &str, e: &str) -> f64 {
    let t = compose_transform(&parse_poly(f).unwrap(), &x(e)).unwrap();
    let composed = x(a).substitute(&Expr::var(), &x(e));
    let value = t.poly.apply(&composed);
    points()
        .into_iter()
        .map(|z| value.eval_complex(&standard_env(z)).unwrap().norm())
        .fold(0.0, f64::max)
}

#[test]
fn solutions_are_transported() {
    for (f, a) in [("u1 - u0", "exp(z)"), ("u2 + u0", "sin(z)"), ("u1 - z*u0", "exp(z^2/2)")] {
        for e in ["2*z", "z + 1", "z^2", "3*z - 1/2"] {
            let r = transported(f, a, e);
            assert!(r < 1e-8, "{f} with {a} o {e}: {r}");
        }
    }
}

#[test]
fn transported_solution_is_exact_for_exp() {
    let t = compose_transform(&parse_poly("u1 - u0").unwrap(), &x("z^2")).unwrap();
    assert!(t.poly.apply(&x("exp(z^2)")).is_zero());
    assert_eq!(t.poly, parse_poly("u1 - 2*z*u0").unwrap());
}

#[test]
fn chain_identity_on_samples() {
    let env = standard_env(C64::new(0.0, 0.0));
    let samples = points();
    for (e, u) in [("z^2", "sin(z)"), ("2*z + 1", "exp(z)"), ("z + 1", "sin(z)"), ("z^3 + z", "Gamma(z)")] {
        let c = verify_chain_identity(&x(e), &x(u), 4, &samples, &env, 1e-8).unwrap();
        assert!(c.report.passed, "{u} o {e}: {}", c.report.max);
        assert_eq!(c.report.entries.len(), 40);
    }
}

#[test]
fn symbolic_table_diagonal() {
    let e = x("e(z)");
    let t = lambda_table(&e, 6).unwrap();
    let de = Expr::deriv("e", 1, Expr::var());
    for k in 1..=6 {
        assert!((t.get(k, k) * Expr::pow(de.clone(), k as i64)).simplify().is_one(), "k = {k}");
        assert!(t.get(k, 0).is_zero());
    }
}

fn arb_inner() -> impl Strategy<Value = String> {
    prop_oneof![
        (1i64..5, -3i64..4).prop_map(|(a, b)| format!("{a}*z + {b}")),
        (1i64..4, 0i64..3).prop_map(|(a, b)| format!("{a}*z^2 + {b}*z")),
        (1i64..3).prop_map(|a| format!("exp({a}*z)")),
        Just("z^3 + 1".to_string()),
    ]
}

fn arb_poly() -> impl Strategy<Value = String> {
    prop::sample::select(vec!["u1 - u0", "u2 + u0", "u1^2 - z*u0", "u0*u2 - u1^2 + 1", "(z+1)*u1 + u0^3"])
        .prop_map(str::to_string)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Transforming by `e1` and then by `e2` gives the transform by `e1 o e2`,
    /// up to a power of the inner derivative.
    #[test]
    fn composition_of_transforms(f in arb_poly(), e1 in arb_inner(), e2 in arb_inner()) {
        let f = parse_poly(&f).unwrap();
        let (e1, e2) = (x(&e1), x(&e2));
        let twice = compose_transform(&compose_transform(&f, &e1).unwrap().poly, &e2).unwrap();
        let once = compose_transform(&f, &e1.substitute(&Expr::var(), &e2)).unwrap();
        // Both are multiples of the same polynomial: compare after dividing by a
        // common coefficient of the leading monomial.
        let (lead, c2) = twice.poly.terms().last().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let c1 = once.poly.terms().find(|(m, _)| **m == lead).map(|(_, c)| c.clone()).unwrap();
        let a = twice.poly.scale(&c1);
        let b = once.poly.scale(&c2);
        prop_assert!(a.sub(&b).terms().all(|(_, c)| c.is_zero()), "{a} vs {b}");
    }

    #[test]
    fn table_recurrence_and_diagonal(e in arb_inner()) {
        let e = x(&e);
        let t = lambda_table(&e, 4).unwrap();
        let de = e.differentiate();
        for k in 1..=4usize {
            prop_assert!((t.get(k, k) * Expr::pow(de.clone(), k as i64)).simplify().is_one());
            prop_assert!(t.get(k, 0).is_zero());
            for j in 1..k {
                let next = ((t.get(k - 1, j).differentiate() + t.get(k - 1, j - 1)) / de.clone()).simplify();
                prop_assert!(next.equivalent(&t.get(k, j)));
            }
        }
    }
}
