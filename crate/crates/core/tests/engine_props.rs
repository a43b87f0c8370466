use difftrans::diffpoly::DiffPoly;
use difftrans::engine::{
    certify_transcendence, check_certificate, classify_expr, dependency_transfer, Classification, Classified,
    EngineError, FunctionSymbol, FunctionalEquation, KnowledgeBase,
};
use difftrans::expr::Expr;
use difftrans::syntax::{parse_expr, parse_poly};
use proptest::prelude::*;

fn x(s: &str) -> Expr {
    parse_expr(s).unwrap()
}

fn kb_with(names: &[&str]) -> KnowledgeBase {
    let mut kb = KnowledgeBase::standard();
    for n in names {
        kb.register(FunctionSymbol::new(*n, Classification::Unknown).meromorphic()).unwrap();
    }
    kb
}

/// Affine shifts and small rational coefficients.
fn arb_inner() -> impl Strategy<Value = String> {
    prop_oneof![
        Just("z".to_string()),
        (-3i64..4).prop_map(|a| format!("z + {a}")),
        (2i64..4, -2i64..3).prop_map(|(a, b)| format!("{a}*z + {b}")),
        Just("1 - z".to_string()),
    ]
}

/// Terms built from the unknown `U` and DA atoms only.
fn arb_term() -> impl Strategy<Value = String> {
    let da = prop::sample::select(vec!["exp", "sin", "cos", "tan", "cosh"]);
    prop_oneof![
        arb_inner().prop_map(|e| format!("U({e})")),
        (da, arb_inner()).prop_map(|(f, e)| format!("{f}({e})")),
        (-3i64..4, 0u32..3).prop_map(|(c, p)| format!("{c}*z^{p}")),
        arb_inner().prop_map(|e| format!("D1[U]({e})")),
    ]
}

fn arb_side() -> impl Strategy<Value = String> {
    prop::collection::vec((arb_term(), arb_term(), prop::bool::ANY), 1..4).prop_map(|ts| {
        ts.into_iter()
            .map(|(a, b, mul)| if mul { format!("({a})*({b})") } else { format!("{a} + {b}") })
            .collect::<Vec<_>>()
            .join(" - ")
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// Without a transcendental anchor nothing can be certified.
    #[test]
    fn no_dt_verdict_from_algebraic_atoms(lhs in arb_side(), rhs in arb_side()) {
        let kb = kb_with(&["U"]);
        let eq = FunctionalEquation::new("U", x(&lhs), x(&rhs), "U");
        match certify_transcendence(&eq, &kb) {
            Ok(c) => prop_assert!(false, "certified {lhs} = {rhs}: {c:?}"),
            Err(EngineError::ShapeMismatch(_) | EngineError::NoTranscendentalAnchor(_)) => {}
            Err(e) => prop_assert!(false, "unexpected error {e} for {lhs} = {rhs}"),
        }
    }

    /// A DA symbol stays DA whatever equation it is claimed to satisfy.
    #[test]
    fn algebraic_symbols_are_never_promoted(f in prop::sample::select(vec!["exp", "sin", "tan"]), e in arb_inner()) {
        let kb = KnowledgeBase::standard();
        let eq = FunctionalEquation::new(f, x(&format!("{f}({e}) - {f}(z)")), x("Gamma(z)"), f);
        prop_assert!(certify_transcendence(&eq, &kb).is_err());
        prop_assert_eq!(kb.classification(f), Some(Classification::Algebraic));
    }
}

#[test]
fn classification_examples() {
    let kb = KnowledgeBase::standard();
    let da = |s: &str| matches!(classify_expr(&x(s), &kb).unwrap(), Classified::Algebraic(_));
    assert!(da("(2*pi)^3*cos(pi*z/2)"));
    assert!(da("exp(z*log(2*pi))*cos(pi*z/2)"));
    assert!(da("sin(exp(z))"));
    assert!(da("tan(z)^2 + 1/(z - 1)"));
    assert!(!da("D1[Gamma](z)"));
    assert!(!da("Gamma(z)*sin(z)"));
    assert!(!da("exp(tan(z))"));
    assert!(matches!(classify_expr(&x("W(z)"), &kb), Err(EngineError::UnknownSymbol(_))));
}

#[test]
fn registration_examples() {
    let mut kb = KnowledgeBase::standard();
    assert_eq!(kb.classification("Gamma"), Some(Classification::Transcendental));
    let gamma_da = FunctionSymbol::new("Gamma", Classification::Algebraic);
    assert!(kb.register(gamma_da).is_err());
    let constant = FunctionSymbol::new("w", Classification::Algebraic).entire().with_witness(parse_poly("z^2 + 1").unwrap());
    assert!(kb.register(constant).is_err(), "a witness without indeterminates is rejected");
    let unchecked = FunctionSymbol::new("w", Classification::Algebraic).entire().with_witness(parse_poly("u1 + u0").unwrap());
    assert!(kb.register(unchecked).is_ok(), "no evaluator, so nothing to check numerically");
}

#[test]
fn zeta_reflection_is_certified_and_checked() {
    let kb = kb_with(&["zeta"]);
    let eq = FunctionalEquation::new(
        "zeta",
        x("zeta(z)"),
        x("exp(z*log(2*pi))*zeta(1-z)/(2*Gamma(z)*cos(pi*z/2))"),
        "zeta",
    );
    let c = certify_transcendence(&eq, &kb).unwrap();
    assert_eq!(c.root.conclusion, Classification::Transcendental);
    assert!(check_certificate(&c, &kb).accepted);
}

#[test]
fn transfer_negative_cases() {
    let kb = kb_with(&["H1"]);
    let witness = |s: &str| DiffPoly::from_expr_in(&x(s), "x").unwrap();
    let g = witness("D2[x](z)*x(z) - D1[x](z)^2 - H1(z)*x(z)^2");
    assert!(dependency_transfer(&g, "Gamma", "H1", &kb).is_ok());
    let zero = DiffPoly::zero();
    assert!(matches!(dependency_transfer(&zero, "Gamma", "H1", &kb), Err(EngineError::WitnessFails(_))));
    let fake = witness("D2[x](z)*x(z) - D1[x](z)^2 - sin(z)*x(z)^2");
    assert!(dependency_transfer(&fake, "Gamma", "sin", &kb).is_err());
    assert!(dependency_transfer(&g, "exp", "H1", &kb).is_err());
}
