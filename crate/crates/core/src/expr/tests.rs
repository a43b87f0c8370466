use proptest::prelude::*;

use super::*;
use crate::numeric::standard_env;
use crate::syntax::parse_expr;

fn z() -> Expr {
    Expr::var()
}

fn x(s: &str) -> Expr {
    parse_expr(s).unwrap()
}

#[test]
fn canonical_forms() {
    assert_eq!(((z() + Expr::zero()) * Expr::one()).simplify(), z());
    assert_eq!(x("(z+1)*(z+2)/(z+1)"), x("z + 2"));
    assert_eq!(x("(z^2 + 3*z + 2)/(z^2 - 1)"), x("(z+2)/(z-1)"));
    assert_eq!(x("sin(z)*sin(z)/sin(z)"), x("sin(z)"));
    assert_eq!(x("pi*z - z*pi"), Expr::zero());
    assert!(x("2/4*z").equivalent(&x("z/2")));
    let ep = Expr::deriv("e", 1, z());
    assert!((ep.clone() * ep.recip()).simplify().is_one());
}

#[test]
fn numerator_and_denominator() {
    let (n, d) = x("(z+1)/(z^2*(z-3))").numer_denom();
    assert_eq!(n, x("z + 1"));
    assert_eq!(d, x("z^3 - 3*z^2"));
    assert!(x("z^2 + sin(z)").is_polynomial());
    assert!(!x("1/(z+1)").is_polynomial());
    assert_eq!(x("1/(z*(z+1)^3)").denominator_multiplicity(&x("z+1")), 3);
}

#[test]
fn derivatives() {
    assert_eq!(x("z^3").differentiate(), x("3*z^2"));
    assert_eq!(x("1/sin(z)").differentiate(), x("-cos(z)/sin(z)^2"));
    assert_eq!(x("exp(2*z+1)").differentiate(), x("2*exp(2*z+1)"));
    assert_eq!(x("Gamma(z)").differentiate(), x("D1[Gamma](z)"));
    assert_eq!(x("f(z^2)").nth_derivative(2), x("4*z^2*D2[f](z^2) + 2*D1[f](z^2)"));
    assert!(x("log(2)*pi").differentiate().is_zero());
}

#[test]
fn substitution_and_atoms() {
    let s = x("z^2 + z").substitute(&z(), &x("2*z"));
    assert_eq!(s.simplify(), x("4*z^2 + 2*z"));
    let atoms = x("Gamma(z)*cos(pi*z/2) + exp(z*log(2)) + log(2)").function_atoms();
    assert_eq!(atoms.len(), 3);
    assert!(!atoms.contains(&x("log(2)")));
    assert_eq!(x("K(z-1) + sin(exp(z))").function_symbols().len(), 3);
}

#[test]
fn evaluation_errors() {
    let env = standard_env(C64::new(0.5, 0.0));
    assert!(matches!(x("foo(z)").eval_complex(&env), Err(EvalError::UnboundSymbol(_))));
    let at_pole = standard_env(C64::new(-2.0, 0.0));
    assert!(matches!(x("Gamma(z)").eval_complex(&at_pole), Err(EvalError::PoleHit { .. })));
    let v = x("z^2 + 1/z").eval_complex(&standard_env(C64::new(2.0, 0.0))).unwrap();
    assert!((v - C64::new(4.5, 0.0)).norm() < 1e-15);
}

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        4 => Just(Expr::var()),
        3 => (-4i64..5).prop_map(Expr::int),
        1 => (-5i64..6, 1i64..5).prop_map(|(n, d)| Expr::frac(n, d)),
        1 => Just(Expr::constant("pi")),
    ]
}

/// Random expressions over `z`, small rationals, `pi` and a few applications.
fn arb_expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a + b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a - b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a * b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a / b),
            (inner.clone(), -2i64..4).prop_map(|(a, n)| Expr::pow(a, n)),
            inner.clone().prop_map(|a| Expr::apply("sin", a)),
            inner.clone().prop_map(|a| Expr::apply("exp", a)),
            Just(Expr::call("Gamma")),
        ]
    })
}

/// Division by an exact zero has no canonical form.
fn divides_by_zero(e: &Expr) -> bool {
    match e.node() {
        Node::Pow(b, n) if *n < 0 && b.simplify().is_zero() => true,
        Node::Pow(b, _) | Node::Apply(_, b) | Node::Deriv(_, _, b) => divides_by_zero(b),
        Node::Add(xs) | Node::Mul(xs) => xs.iter().any(divides_by_zero),
        _ => false,
    }
}

fn eval_at(e: &Expr, z: C64) -> Option<C64> {
    e.eval_complex(&standard_env(z)).ok().filter(|v| v.is_finite() && v.norm() < 1e8)
}

fn close(a: C64, b: C64, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + a.norm().max(b.norm()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn simplify_is_idempotent(e in arb_expr()) {
        let s = e.simplify();
        prop_assert_eq!(s.simplify(), s);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn simplify_preserves_values(e in arb_expr(), re in 0.3f64..3.0, im in -1.0f64..1.0) {
        let z = C64::new(re, im);
        let s = e.simplify();
        if let (Some(a), Some(b)) = (eval_at(&e, z), eval_at(&s, z)) {
            prop_assert!(close(a, b, 1e-8), "{e} = {a} but {s} = {b}");
        }
    }

    #[test]
    fn derivative_is_linear_and_leibniz(a in arb_expr(), b in arb_expr()) {
        let da = a.differentiate();
        let db = b.differentiate();
        prop_assert!((&a + &b).differentiate().equivalent(&(&da + &db)));
        prop_assert!((&a * &b).differentiate().equivalent(&(&da * &b + &a * &db)));
    }

    #[test]
    fn derivative_matches_finite_differences(e in arb_expr(), re in 0.5f64..3.0) {
        let h = 1e-5;
        let d = e.differentiate();
        let pts = [C64::new(re - h, 0.0), C64::new(re + h, 0.0), C64::new(re, 0.0)];
        if let (Some(lo), Some(hi), Some(exact)) = (eval_at(&e, pts[0]), eval_at(&e, pts[1]), eval_at(&d, pts[2])) {
            let fd = (hi - lo) / (2.0 * h);
            // Skip where the difference quotient is dominated by rounding or curvature.
            if lo.norm().max(hi.norm()) < 1e3 && exact.norm() < 1e3 {
                prop_assert!(close(fd, exact, 1e-4), "{e}: fd {fd} vs {exact}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn print_parse_round_trip(e in arb_expr()) {
        let s = e.simplify();
        prop_assume!(!divides_by_zero(&s));
        let text = s.to_string();
        let back = parse_expr(&text).map_err(|err| TestCaseError::fail(format!("{text}: {err}")))?;
        prop_assert_eq!(back, s, "printed as {}", text);
    }
}
