use difftrans::diffpoly::{DiffMonomial, DiffPoly};
use difftrans::expr::Expr;
use difftrans::syntax::parse_expr;
use proptest::prelude::*;

fn coefficient() -> impl Strategy<Value = Expr> {
    (-3i64..4, -2i64..3, 0i64..2).prop_map(|(a, b, c)| {
        let z = Expr::var();
        (Expr::int(a) + Expr::int(b) * z.clone() + Expr::int(c) * Expr::pow(z, 2)).simplify()
    })
}

fn monomial() -> impl Strategy<Value = DiffMonomial> {
    prop::collection::vec((0u32..3, 1u32..3), 0..3).prop_map(DiffMonomial::from_pairs)
}

fn diffpoly() -> impl Strategy<Value = DiffPoly> {
    prop::collection::vec((monomial(), coefficient()), 0..4).prop_map(|terms| {
        terms.into_iter().fold(DiffPoly::zero(), |acc, (m, c)| acc.add(&DiffPoly::term(m, c)))
    })
}

fn function() -> impl Strategy<Value = Expr> {
    prop::sample::select(vec!["exp(z)", "sin(2*z)", "z^3 - z", "1/(z+2)", "Gamma(z)", "cos(z)*z"])
        .prop_map(|s| parse_expr(s).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_axioms(f in diffpoly(), g in diffpoly(), h in diffpoly()) {
        prop_assert_eq!(f.add(&g), g.add(&f));
        prop_assert_eq!(f.mul(&g), g.mul(&f));
        prop_assert_eq!(f.add(&g).add(&h), f.add(&g.add(&h)));
        prop_assert_eq!(f.mul(&g).mul(&h), f.mul(&g.mul(&h)));
        prop_assert_eq!(f.mul(&g.add(&h)), f.mul(&g).add(&f.mul(&h)));
        prop_assert!(f.sub(&f).is_zero());
        prop_assert_eq!(f.mul(&DiffPoly::constant(Expr::one())), f.clone());
    }

    #[test]
    fn derivation_is_additive_and_leibniz(f in diffpoly(), g in diffpoly()) {
        prop_assert_eq!(f.add(&g).derive(), f.derive().add(&g.derive()));
        prop_assert_eq!(f.mul(&g).derive(), f.derive().mul(&g).add(&f.mul(&g.derive())));
    }

    #[test]
    fn order_of_derivative(f in diffpoly()) {
        let d = f.derive();
        if f.ord() >= 0 {
            prop_assert_eq!(d.ord(), f.ord() + 1);
        } else {
            prop_assert!(d.ord() == -1);
        }
    }

    #[test]
    fn application_is_a_differential_homomorphism(f in diffpoly(), g in diffpoly(), a in function()) {
        let fa = f.apply(&a);
        let ga = g.apply(&a);
        prop_assert!(f.add(&g).apply(&a).equivalent(&(&fa + &ga)));
        prop_assert!(f.mul(&g).apply(&a).equivalent(&(&fa * &ga)));
        prop_assert!(f.derive().apply(&a).equivalent(&fa.differentiate()));
    }

    #[test]
    fn print_parse_round_trip(f in diffpoly()) {
        let back = difftrans::syntax::parse_poly(&f.to_string()).unwrap();
        prop_assert_eq!(back, f);
    }
}

#[test]
fn g_witness_is_satisfied_by_gamma_over_trigamma() {
    let e = difftrans::syntax::parse_expr_raw("D2[x](z)*x(z) - D1[x](z)^2 - y(z)*x(z)^2").unwrap();
    let g = DiffPoly::from_expr_in(&e.rename_function("y", "H1"), "x").unwrap();
    assert_eq!(g.ord(), 2);
    let plan = difftrans::numeric::SamplePlan::real(&[1.5, 2.5, 3.7], 1e-8);
    let r = difftrans::numeric::ade_residual("g", &g, "Gamma", &plan).unwrap();
    assert!(r.passed && r.max < 1e-8, "{r:?}");
}
