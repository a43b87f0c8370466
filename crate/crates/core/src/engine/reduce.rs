//! DT derivations: the main reduction for functional equations, chains of
//! equations by induction, and transfer through a witness equation.

use crate::diffpoly::DiffPoly;
use crate::expr::{Expr, Node};
use crate::syntax::{CHAIN_MEMBER, CHAIN_PREVIOUS};

use super::certificate::{Certificate, Condition, ProofNode, Rule, SideCondition};
use super::classify::{classify_expr, Classified};
use super::kb::{is_affine, Classification, KnowledgeBase, AXIOM_SYMBOL};
use super::rules::{self, TransferInput};
use super::EngineError;

/// `lhs = rhs` in the unknown function `unknown`. `inners` lists the
/// admissible inner functions the unknown may be composed with.
#[derive(Clone, Debug, PartialEq)]
pub struct FunctionalEquation {
    pub name: String,
    pub lhs: Expr,
    pub rhs: Expr,
    pub unknown: String,
    pub inners: Vec<Expr>,
    pub note: String,
}

impl FunctionalEquation {
    /// Affine arguments of the unknown (`z`, `z-1`, `1-z`) are admissible
    /// from the start.
    pub fn new(name: impl Into<String>, lhs: Expr, rhs: Expr, unknown: impl Into<String>) -> Self {
        let unknown = unknown.into();
        let (lhs, rhs) = (lhs.simplify(), rhs.simplify());
        let inners = (&lhs - &rhs)
            .simplify()
            .function_atoms()
            .into_iter()
            .filter_map(|a| {
                let (f, _, arg) = a.as_application()?;
                (f == unknown && is_affine(arg)).then(|| arg.clone())
            })
            .collect();
        FunctionalEquation { name: name.into(), lhs, rhs, unknown, inners, note: String::new() }.normalized()
    }

    pub fn with_inners(mut self, inners: impl IntoIterator<Item = Expr>) -> Self {
        self.inners.extend(inners.into_iter().map(|e| e.simplify()));
        self.normalized()
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    fn normalized(mut self) -> Self {
        self.inners.sort();
        self.inners.dedup();
        self
    }
}

fn grounded_transcendental(f: &str, kb: &KnowledgeBase) -> bool {
    kb.classification(f) == Some(Classification::Transcendental)
        && (f == AXIOM_SYMBOL || kb.get(f).is_some_and(|s| s.certificate.is_some()))
}

/// DT proof of an atom `f(e)`: the axiom, a stored certificate, or a
/// composition of either with an affine DA inner function.
pub fn anchor_proof(atom: &Expr, kb: &KnowledgeBase) -> Result<ProofNode, EngineError> {
    let not_dt = || EngineError::AnchorNotDT(atom.to_string());
    let (f, k, arg) = atom.as_application().ok_or_else(not_dt)?;
    if k != 0 || !grounded_transcendental(f, kb) {
        return Err(not_dt());
    }
    let base = if f == AXIOM_SYMBOL {
        rules::axiom_node(kb)
    } else {
        kb.get(f).and_then(|s| s.certificate.as_deref()).cloned().ok_or_else(not_dt)?
    };
    if matches!(arg.node(), Node::Var) {
        return Ok(base);
    }
    let inner = match classify_expr(arg, kb)? {
        Classified::Algebraic(p) => p,
        Classified::Unknown(why) => {
            return Err(EngineError::MissingSideCondition(format!("inner function `{arg}` of `{atom}`: {why}")))
        }
    };
    let conditions = rules::composition_conditions(f, arg, kb, true);
    if let Some(bad) = conditions.iter().find(|c| !c.satisfied) {
        return Err(EngineError::MissingSideCondition(format!("{} for `{}` in `{atom}`", bad.kind, bad.subject)));
    }
    Ok(ProofNode::new(Rule::CompositionRule, atom.clone(), Classification::Transcendental)
        .with_conditions(conditions)
        .with_premises(vec![base, inner]))
}

/// Atoms of `difference` that can serve as the transcendental anchor.
fn anchor_candidates(difference: &Expr, unknown: &str, kb: &KnowledgeBase) -> Vec<Expr> {
    difference
        .function_atoms()
        .into_iter()
        .filter(|a| {
            let (f, k, _) = a.as_application().expect("atoms are applications");
            f != unknown && k == 0 && grounded_transcendental(f, kb)
        })
        .collect()
}

fn check_names(eq: &FunctionalEquation, kb: &KnowledgeBase) -> Result<(), EngineError> {
    if !kb.contains(&eq.unknown) {
        return Err(EngineError::UnknownSymbol(eq.unknown.clone()));
    }
    for e in [&eq.lhs, &eq.rhs].into_iter().chain(&eq.inners) {
        if let Some(name) = kb.first_unknown_name(e) {
            return Err(EngineError::UnknownSymbol(name));
        }
    }
    Ok(())
}

fn da_proof(e: &Expr, kb: &KnowledgeBase, role: &str) -> Result<ProofNode, EngineError> {
    match classify_expr(e, kb)? {
        Classified::Algebraic(p) => Ok(p),
        Classified::Unknown(why) => Err(EngineError::MissingSideCondition(format!("{role} `{e}` is not DA: {why}"))),
    }
}

pub(crate) const DETAIL_LHS: &str = "lhs";
pub(crate) const DETAIL_RHS: &str = "rhs";
pub(crate) const DETAIL_UNKNOWN: &str = "unknown";
pub(crate) const DETAIL_INNERS: &str = "inners";
pub(crate) const DETAIL_WITNESS: &str = "witness";
pub(crate) const DETAIL_KNOWN: &str = "known";
pub(crate) const DETAIL_CANDIDATE: &str = "candidate";
pub(crate) const INNER_SEPARATOR: &str = "; ";

fn reduction_node(eq: &FunctionalEquation, kb: &KnowledgeBase, induction: bool) -> Result<ProofNode, EngineError> {
    check_names(eq, kb)?;
    let difference = (&eq.lhs - &eq.rhs).simplify();
    let anchor = match anchor_candidates(&difference, &eq.unknown, kb).as_slice() {
        [] => return Err(EngineError::NoTranscendentalAnchor(format!("`{}` involves no DT atom", eq.name))),
        [a] => a.clone(),
        many => {
            let list: Vec<String> = many.iter().map(Expr::to_string).collect();
            return Err(EngineError::ShapeMismatch(format!("several DT atoms: {}", list.join(", "))));
        }
    };
    let p = rules::partition(&eq.lhs, &eq.rhs, &eq.unknown, &anchor).map_err(|e| EngineError::ShapeMismatch(e.0))?;
    let conditions = rules::reduction_conditions(&p, &eq.unknown, &eq.inners, &anchor, kb);
    if let Some(bad) = conditions.iter().find(|c| !c.satisfied) {
        let msg = format!("{} fails for `{}`", bad.kind, bad.subject);
        return Err(match bad.kind {
            Condition::UnknownOccurs | Condition::AnchorAlgebraic => EngineError::ShapeMismatch(msg),
            _ => EngineError::MissingSideCondition(msg),
        });
    }

    let mut anchor_node = anchor_proof(&anchor, kb)?;
    if induction {
        let conditions = rules::chain_step_conditions(&anchor, Some((&anchor_node.subject, anchor_node.conclusion)));
        anchor_node = ProofNode::new(Rule::Induction, anchor.clone(), Classification::Transcendental)
            .with_conditions(conditions)
            .with_premises(vec![anchor_node]);
    }
    let mut premises = vec![anchor_node, da_proof(&p.coefficient_product(), kb, "coefficient")?];
    for e in &p.inners {
        premises.push(da_proof(e, kb, "inner function")?);
    }

    let inners: Vec<String> = eq.inners.iter().map(Expr::to_string).collect();
    let mut node = ProofNode::new(Rule::MainReduction, Expr::call(&eq.unknown), Classification::Transcendental)
        .with_conditions(conditions)
        .with_premises(premises)
        .with_detail(DETAIL_LHS, &eq.lhs)
        .with_detail(DETAIL_RHS, &eq.rhs)
        .with_detail(DETAIL_UNKNOWN, &eq.unknown)
        .with_detail(DETAIL_INNERS, inners.join(INNER_SEPARATOR))
        .with_detail(
            "argument",
            format!("if {} were DA, {anchor} would be algebraic over DA functions", eq.unknown),
        );
    let slope = rules::anchor_slope(&difference, &anchor);
    if slope.function_symbols().contains(&eq.unknown) {
        node = node.with_detail("assumption", format!("{slope} is not identically zero"));
    }
    if !eq.note.is_empty() {
        node = node.with_detail("note", &eq.note);
    }
    Ok(node)
}

/// The main reduction: if the unknown were DA, the anchor would be DA.
pub fn certify_transcendence(eq: &FunctionalEquation, kb: &KnowledgeBase) -> Result<Certificate, EngineError> {
    let root = reduction_node(eq, kb, false)?;
    Ok(Certificate::new(&eq.name, &eq.unknown, root))
}

/// Template equations `X_m` in `X` (the member) and `Y` (the previous
/// member, `base` for the first).
#[derive(Clone, Debug, PartialEq)]
pub struct Chain {
    pub name: String,
    pub lhs: Expr,
    pub rhs: Expr,
    pub base: Expr,
    pub members: Vec<String>,
}

impl Chain {
    pub fn equations(&self) -> Vec<FunctionalEquation> {
        let mut out = Vec::with_capacity(self.members.len());
        for (m, member) in self.members.iter().enumerate() {
            let side = |e: &Expr| {
                let e = e.rename_function(CHAIN_MEMBER, member);
                if m == 0 {
                    e.instantiate_function(CHAIN_PREVIOUS, &self.base)
                } else {
                    e.rename_function(CHAIN_PREVIOUS, &self.members[m - 1])
                }
            };
            out.push(FunctionalEquation::new(member, side(&self.lhs), side(&self.rhs), member));
        }
        out
    }
}

/// Certify every member in order; each member's anchor is the previous
/// member, so each conclusion is recorded before the next step.
pub fn certify_chain(chain: &Chain, kb: &mut KnowledgeBase) -> Result<Vec<Certificate>, EngineError> {
    let mut out = Vec::new();
    for (m, eq) in chain.equations().into_iter().enumerate() {
        let previous = if m == 0 { chain.base.function_symbols() } else { [chain.members[m - 1].clone()].into() };
        let difference = (&eq.lhs - &eq.rhs).simplify();
        for f in difference.function_symbols() {
            let da = kb.classification(&f) == Some(Classification::Algebraic);
            if f != eq.unknown && !previous.contains(&f) && !da {
                return Err(EngineError::BrokenChain(format!("member `{}` refers to `{f}`", eq.unknown)));
            }
        }
        if anchor_candidates(&difference, &eq.unknown, kb).len() != 1 {
            return Err(EngineError::BrokenChain(format!("member `{}` has no unique DT anchor", eq.unknown)));
        }
        let root = reduction_node(&eq, kb, m > 0)?;
        kb.record_transcendental(&eq.unknown, root.clone())?;
        out.push(Certificate::new(format!("{}:{}", chain.name, eq.unknown), &eq.unknown, root));
    }
    Ok(out)
}

/// `witness` has `u_k` for `D^k known` and coefficients that may involve
/// `candidate(z)`. If `candidate` were DA, `known` would be algebraic over
/// a DA field and hence DA.
pub fn dependency_transfer(
    witness: &DiffPoly,
    known: &str,
    candidate: &str,
    kb: &KnowledgeBase,
) -> Result<Certificate, EngineError> {
    for name in [known, candidate] {
        if !kb.contains(name) {
            return Err(EngineError::UnknownSymbol(name.into()));
        }
    }
    let input = TransferInput { witness, known, candidate };
    let conditions = rules::transfer_conditions(&input, kb);
    if !grounded_transcendental(known, kb) {
        return Err(EngineError::AnchorNotDT(known.into()));
    }
    let failed: Vec<String> = conditions
        .iter()
        .filter(|c: &&SideCondition| !c.satisfied)
        .map(|c| format!("{} ({})", c.kind, c.subject))
        .collect();
    if !failed.is_empty() {
        return Err(EngineError::WitnessFails(failed.join(", ")));
    }
    let premise = anchor_proof(&Expr::call(known), kb)?;
    let root = ProofNode::new(Rule::DependencyTransfer, Expr::call(candidate), Classification::Transcendental)
        .with_conditions(conditions)
        .with_premises(vec![premise])
        .with_detail(DETAIL_WITNESS, witness.to_expr())
        .with_detail(DETAIL_KNOWN, known)
        .with_detail(DETAIL_CANDIDATE, candidate)
        .with_detail(
            "argument",
            format!("{known} satisfies the witness over C(z, {candidate}, derivatives); {candidate} DA would make {known} DA"),
        );
    Ok(Certificate::new(candidate, candidate, root))
}
