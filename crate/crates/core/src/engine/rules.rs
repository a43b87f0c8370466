//! Rule contracts: the side conditions each rule must record, computed from
//! the subject and the knowledge base. The builder and the checker share
//! these functions, so a certificate is accepted only if its recorded
//! conditions are exactly the recomputed ones.

use crate::expr::{Expr, Node, Wrt, C64};
use crate::numeric::{fe_residual, SamplePlan};

use super::certificate::{Condition, ProofNode, Rule, SideCondition};
use super::kb::{is_affine, Classification, KnowledgeBase, AXIOM_SYMBOL};

/// Placeholder the anchor atom is replaced by when checking that the
/// equation really involves it.
const ANCHOR_PLACEHOLDER: &str = "__anchor";

pub const TRANSFER_TOLERANCE: f64 = 1e-6;

fn transfer_points() -> Vec<C64> {
    vec![
        C64::new(1.5, 0.0),
        C64::new(2.5, 0.0),
        C64::new(3.7, 0.0),
        C64::new(1.2, 0.5),
        C64::new(2.8, -0.9),
    ]
}

fn sc(kind: Condition, subject: impl std::fmt::Display, ok: bool) -> SideCondition {
    SideCondition::new(kind, subject, ok)
}

pub fn axiom_conditions(kb: &KnowledgeBase) -> Vec<SideCondition> {
    let ok = kb.classification(AXIOM_SYMBOL) == Some(Classification::Transcendental);
    vec![sc(Condition::KbClassification, format!("{AXIOM_SYMBOL} is DT"), ok)]
}

/// `Gamma(z)` is DT.
pub fn axiom_node(kb: &KnowledgeBase) -> ProofNode {
    ProofNode::new(Rule::AxiomGamma, Expr::call(AXIOM_SYMBOL), Classification::Transcendental)
        .with_conditions(axiom_conditions(kb))
}

/// A leaf is either free of function atoms or a meromorphic DA symbol
/// applied at `z`.
pub fn leaf_conditions(subject: &Expr, kb: &KnowledgeBase) -> Vec<SideCondition> {
    match subject.node() {
        Node::Apply(f, a) if matches!(a.node(), Node::Var) => {
            let ok = kb.classification(f) == Some(Classification::Algebraic);
            vec![
                sc(Condition::KbClassification, format!("{f} is DA"), ok),
                sc(Condition::Meromorphic, f, kb.is_meromorphic_symbol(f)),
            ]
        }
        _ => Vec::new(),
    }
}

/// `D^k f (inner)` from `D^k f (z)` and `inner`. With `transfer` the rule
/// carries transcendence from `f` to `f o inner`, which needs an affine inner
/// function; otherwise it carries algebraicity and needs `f` meromorphic.
pub fn composition_conditions(f: &str, inner: &Expr, kb: &KnowledgeBase, transfer: bool) -> Vec<SideCondition> {
    let mut out = Vec::new();
    if !transfer {
        out.push(sc(Condition::Meromorphic, f, kb.is_meromorphic_symbol(f)));
    }
    out.push(sc(Condition::Entire, inner, kb.is_entire(inner)));
    out.push(sc(Condition::DerivativeNonzero, inner, kb.derivative_nonzero(inner)));
    if transfer {
        out.push(sc(Condition::Affine, inner, is_affine(inner)));
    }
    out
}

pub fn field_closure_conditions(subject: &Expr, premise_subjects: &[&Expr]) -> Vec<SideCondition> {
    let atoms = subject.function_atoms();
    let covered = atoms.len() == premise_subjects.len() && atoms.iter().zip(premise_subjects).all(|(a, p)| a == *p);
    vec![sc(Condition::AtomsCovered, subject, covered)]
}

pub fn chain_step_conditions(subject: &Expr, premise: Option<(&Expr, Classification)>) -> Vec<SideCondition> {
    let ok = premise.is_some_and(|(s, c)| s == subject && c == Classification::Transcendental);
    vec![sc(Condition::ChainStep, subject, ok)]
}

/// Atoms of `E = lhs - rhs` split around a chosen anchor.
#[derive(Clone, Debug, PartialEq)]
pub struct Partition {
    pub difference: Expr,
    pub unknown_atoms: Vec<Expr>,
    /// Distinct inner functions the unknown is composed with, sorted.
    pub inners: Vec<Expr>,
    pub coefficient_atoms: Vec<Expr>,
}

impl Partition {
    pub fn coefficient_product(&self) -> Expr {
        Expr::mul(self.coefficient_atoms.clone()).simplify()
    }
}

/// Why an equation cannot take the reduction shape at all.
#[derive(Clone, Debug, PartialEq)]
pub struct ShapeError(pub String);

pub fn partition(lhs: &Expr, rhs: &Expr, unknown: &str, anchor: &Expr) -> Result<Partition, ShapeError> {
    let difference = (lhs - rhs).simplify();
    let mut unknown_atoms = Vec::new();
    let mut coefficient_atoms = Vec::new();
    let mut anchor_seen = false;
    for a in difference.function_atoms() {
        let (f, _, arg) = a.as_application().expect("atoms are applications");
        if arg.function_symbols().contains(unknown) {
            return Err(ShapeError(format!("`{unknown}` occurs inside the argument of `{a}`")));
        }
        if f == unknown {
            unknown_atoms.push(a);
        } else if &a == anchor {
            anchor_seen = true;
        } else if a.function_symbols().contains(unknown) {
            return Err(ShapeError(format!("`{unknown}` occurs inside `{a}`")));
        } else {
            coefficient_atoms.push(a);
        }
    }
    if !anchor_seen {
        return Err(ShapeError(format!("anchor `{anchor}` does not occur in the equation")));
    }
    let mut inners: Vec<Expr> = unknown_atoms.iter().map(|a| a.as_application().unwrap().2.clone()).collect();
    inners.sort();
    inners.dedup();
    Ok(Partition { difference, unknown_atoms, inners, coefficient_atoms })
}

/// Conditions recorded on a main-reduction node, in fixed order.
pub fn reduction_conditions(
    p: &Partition,
    unknown: &str,
    admissible: &[Expr],
    anchor: &Expr,
    kb: &KnowledgeBase,
) -> Vec<SideCondition> {
    let b = Expr::call(unknown);
    let mut out = vec![
        sc(Condition::UnknownOccurs, &b, !p.unknown_atoms.is_empty()),
        sc(Condition::UnknownNotAlgebraic, &b, kb.classification(unknown).is_some_and(|c| c != Classification::Algebraic)),
        sc(Condition::Meromorphic, unknown, kb.is_meromorphic_symbol(unknown)),
    ];
    for e in &p.inners {
        out.push(sc(Condition::Admissible, e, admissible.contains(e)));
        out.push(sc(Condition::Entire, e, kb.is_entire(e)));
        out.push(sc(Condition::DerivativeNonzero, e, kb.derivative_nonzero(e)));
    }
    out.push(sc(Condition::AnchorAlgebraic, anchor, involves(&p.difference, anchor)));
    out
}

/// `dE/dA`, the anchor treated as an independent symbol.
pub fn anchor_slope(difference: &Expr, anchor: &Expr) -> Expr {
    let placeholder = Expr::constant(ANCHOR_PLACEHOLDER);
    let replaced = difference.substitute(anchor, &placeholder);
    replaced.derive(&Wrt::Symbol(ANCHOR_PLACEHOLDER.into())).substitute(&placeholder, anchor).simplify()
}

fn involves(difference: &Expr, anchor: &Expr) -> bool {
    !anchor_slope(difference, anchor).is_zero()
}

/// Everything a dependency transfer needs to know about its witness.
#[derive(Clone, Debug)]
pub struct TransferInput<'a> {
    /// Witness with `u_k` standing for `D^k x`.
    pub witness: &'a crate::diffpoly::DiffPoly,
    /// Known DT symbol substituted for `x`.
    pub known: &'a str,
    /// Symbol substituted for `y` in the coefficients.
    pub candidate: &'a str,
}

pub fn transfer_conditions(t: &TransferInput<'_>, kb: &KnowledgeBase) -> Vec<SideCondition> {
    let candidate = Expr::call(t.candidate);
    let coefficients: Vec<&Expr> = t.witness.terms().map(|(_, c)| c).collect();
    let mentions = |c: &Expr| c.function_symbols().contains(t.candidate);
    let nonzero = coefficients.iter().any(|c| !c.is_zero() && !mentions(c));
    let occurs = coefficients.iter().any(|c| mentions(c));
    let in_tower = coefficients.iter().all(|c| {
        c.function_atoms().iter().all(|a| {
            let (f, _, arg) = a.as_application().unwrap();
            (f == t.candidate && matches!(arg.node(), Node::Var))
                || (!a.function_symbols().contains(t.candidate)
                    && matches!(super::classify::classify_expr(a, kb), Ok(super::classify::Classified::Algebraic(_))))
        }) && !c.constants().iter().any(|k| !kb.is_constant(k))
    });
    let (residual_ok, residual_note) = witness_residual(t);
    vec![
        sc(Condition::AnchorTranscendental, t.known, kb.classification(t.known) == Some(Classification::Transcendental)),
        sc(
            Condition::UnknownNotAlgebraic,
            &candidate,
            kb.classification(t.candidate).is_some_and(|c| c != Classification::Algebraic),
        ),
        sc(Condition::WitnessNonzero, "coefficient free of the candidate", nonzero),
        sc(Condition::WitnessOrder, format!("ord = {}", t.witness.ord()), t.witness.ord() >= 0),
        sc(Condition::CandidateOccurs, &candidate, occurs),
        sc(Condition::CoefficientsInTower, &candidate, in_tower),
        sc(Condition::WitnessResidual, residual_note, residual_ok),
    ]
}

/// Numeric residual of the witness with `x -> known`, `y -> candidate`.
/// Symbols without an evaluator pass with a note.
fn witness_residual(t: &TransferInput<'_>) -> (bool, String) {
    let e = t.witness.apply_symbol(t.known);
    let plan = SamplePlan::new(transfer_points(), TRANSFER_TOLERANCE);
    match fe_residual("witness", &e, &Expr::zero(), &plan) {
        Ok(r) if !r.entries.is_empty() => (r.passed, format!("max residual {:.1e}, tolerance {:.0e}", r.max, TRANSFER_TOLERANCE)),
        Ok(_) => (false, "no regular sample point".into()),
        Err(crate::expr::EvalError::Unsupported(_) | crate::expr::EvalError::UnboundSymbol(_)) => {
            (true, "not numerically evaluable".into())
        }
        Err(e) => (false, e.to_string()),
    }
}
