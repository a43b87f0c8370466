//! Classification of expressions as differentially algebraic by the closure
//! rules: knowledge-base leaves, derivatives, compositions and field
//! operations.

use crate::expr::{Expr, Node};

use super::certificate::{ProofNode, Rule};
use super::kb::{Classification, KnowledgeBase};
use super::rules;
use super::EngineError;

#[derive(Clone, Debug, PartialEq)]
pub enum Classified {
    Algebraic(ProofNode),
    /// Not derivable; the reason names the blocking atom or condition.
    Unknown(String),
}

impl Classified {
    pub fn proof(self) -> Option<ProofNode> {
        match self {
            Classified::Algebraic(p) => Some(p),
            Classified::Unknown(_) => None,
        }
    }
}

/// DA with a certificate, or UNKNOWN. Never concludes DT.
pub fn classify_expr(e: &Expr, kb: &KnowledgeBase) -> Result<Classified, EngineError> {
    if let Some(name) = kb.first_unknown_name(e) {
        return Err(EngineError::UnknownSymbol(name));
    }
    Ok(classify(&e.simplify(), kb))
}

fn classify(e: &Expr, kb: &KnowledgeBase) -> Classified {
    let atoms: Vec<Expr> = e.function_atoms().into_iter().collect();
    if atoms.is_empty() {
        return Classified::Algebraic(ProofNode::new(Rule::KBAlgebraic, e.clone(), Classification::Algebraic));
    }
    if atoms.len() == 1 && atoms[0] == *e {
        return classify_atom(e, kb);
    }
    let mut premises = Vec::with_capacity(atoms.len());
    for a in &atoms {
        match classify_atom(a, kb) {
            Classified::Algebraic(p) => premises.push(p),
            unknown => return unknown,
        }
    }
    let subjects: Vec<&Expr> = premises.iter().map(|p| &p.subject).collect();
    let conditions = rules::field_closure_conditions(e, &subjects);
    Classified::Algebraic(
        ProofNode::new(Rule::FieldClosure, e.clone(), Classification::Algebraic)
            .with_conditions(conditions)
            .with_premises(premises),
    )
}

fn classify_atom(a: &Expr, kb: &KnowledgeBase) -> Classified {
    let (f, k, arg) = a.as_application().expect("atoms are applications");
    if matches!(arg.node(), Node::Var) {
        if k > 0 {
            return match classify_atom(&Expr::call(f), kb) {
                Classified::Algebraic(p) => Classified::Algebraic(
                    ProofNode::new(Rule::DerivativeRule, a.clone(), Classification::Algebraic).with_premises(vec![p]),
                ),
                unknown => unknown,
            };
        }
        let conditions = rules::leaf_conditions(a, kb);
        if conditions.iter().all(|c| c.satisfied) {
            return Classified::Algebraic(
                ProofNode::new(Rule::KBAlgebraic, a.clone(), Classification::Algebraic).with_conditions(conditions),
            );
        }
        let class = kb.classification(f).unwrap_or(Classification::Unknown);
        return Classified::Unknown(format!("`{f}` is {class} in the knowledge base"));
    }
    let outer = match classify_atom(&Expr::deriv(f, k, Expr::var()), kb) {
        Classified::Algebraic(p) => p,
        unknown => return unknown,
    };
    let inner = match classify(arg, kb) {
        Classified::Algebraic(p) => p,
        unknown => return unknown,
    };
    let conditions = rules::composition_conditions(f, arg, kb, false);
    if let Some(bad) = conditions.iter().find(|c| !c.satisfied) {
        return Classified::Unknown(format!("composition `{a}` lacks {} for {}", bad.kind, bad.subject));
    }
    Classified::Algebraic(
        ProofNode::new(Rule::CompositionRule, a.clone(), Classification::Algebraic)
            .with_conditions(conditions)
            .with_premises(vec![outer, inner]),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_expr;

    fn classify_text(s: &str) -> Classified {
        classify_expr(&parse_expr(s).unwrap(), &KnowledgeBase::standard()).unwrap()
    }

    #[test]
    fn elementary_factors_are_algebraic() {
        let Classified::Algebraic(p) = classify_text("exp(z*log(2*pi))*cos(pi*z/2)") else {
            panic!("expected DA")
        };
        assert_eq!(p.rule, Rule::FieldClosure);
        assert_eq!(p.premises.len(), 2);
        assert!(p.premises.iter().all(|q| q.rule == Rule::CompositionRule));
        assert!(p.leaves_are_grounded());
    }

    #[test]
    fn gamma_derivative_is_unknown() {
        assert!(matches!(classify_text("D1[Gamma](z)"), Classified::Unknown(_)));
        assert!(matches!(classify_text("z*Gamma(z) + 1"), Classified::Unknown(_)));
    }

    #[test]
    fn nested_composition() {
        let Classified::Algebraic(p) = classify_text("sin(exp(z))") else { panic!("expected DA") };
        assert_eq!(p.rule, Rule::CompositionRule);
        assert_eq!(p.premises[0].subject, parse_expr("sin(z)").unwrap());
        assert_eq!(p.premises[1].subject, parse_expr("exp(z)").unwrap());
        assert!(p.side_conditions.iter().all(|c| c.satisfied));
    }

    #[test]
    fn rational_functions_are_leaves() {
        let Classified::Algebraic(p) = classify_text("(z^2 + 1)/(z - pi)") else { panic!() };
        assert_eq!(p.rule, Rule::KBAlgebraic);
        assert!(p.premises.is_empty());
    }

    #[test]
    fn non_entire_inner_blocks_composition() {
        assert!(matches!(classify_text("sin(1/z)"), Classified::Unknown(_)));
        assert!(matches!(classify_text("log(z)"), Classified::Unknown(_)));
    }

    #[test]
    fn unregistered_symbol_is_an_error() {
        let err = classify_expr(&parse_expr("foo(z)").unwrap(), &KnowledgeBase::standard());
        assert_eq!(err, Err(EngineError::UnknownSymbol("foo".into())));
    }
}
