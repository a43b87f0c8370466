//! Independent re-validation of proof trees. Each node's side conditions
//! are recomputed from its subject, premises and the knowledge base, and
//! must match the recorded list exactly.

use serde::Serialize;

use crate::expr::{Expr, Node};
use crate::syntax::{parse_expr, parse_poly};

use super::certificate::{path_label, Certificate, ProofNode, Rule, SideCondition};
use super::kb::{Classification, KnowledgeBase, AXIOM_SYMBOL};
use super::reduce::{
    DETAIL_CANDIDATE, DETAIL_INNERS, DETAIL_KNOWN, DETAIL_LHS, DETAIL_RHS, DETAIL_UNKNOWN, DETAIL_WITNESS,
    INNER_SEPARATOR,
};
use super::rules::{self, TransferInput};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Rejection {
    pub path: String,
    pub rule: Rule,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub accepted: bool,
    pub nodes: usize,
    pub rejections: Vec<Rejection>,
}

pub fn check_certificate(c: &Certificate, kb: &KnowledgeBase) -> CheckReport {
    let mut rejections = Vec::new();
    if c.conclusion != c.root.conclusion || c.root.subject != Expr::call(&c.symbol) {
        rejections.push(Rejection {
            path: path_label(&[]),
            rule: c.root.rule,
            reason: format!("certificate claims {} {} but the root proves {} {}", c.symbol, c.conclusion, c.root.subject, c.root.conclusion),
        });
    }
    for (path, node) in c.root.walk() {
        if let Err(reason) = check_node(node, kb) {
            rejections.push(Rejection { path: path_label(&path), rule: node.rule, reason });
        }
    }
    CheckReport { accepted: rejections.is_empty(), nodes: c.root.node_count(), rejections }
}

type Verdict = Result<(), String>;

fn expect(cond: bool, msg: impl FnOnce() -> String) -> Verdict {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn conclusion(n: &ProofNode, want: Classification) -> Verdict {
    expect(n.conclusion == want, || format!("rule concludes {want}, node claims {}", n.conclusion))
}

fn premise_count(n: &ProofNode, want: usize) -> Verdict {
    expect(n.premises.len() == want, || format!("expected {want} premises, found {}", n.premises.len()))
}

fn premise(n: &ProofNode, i: usize, subject: &Expr, want: Classification) -> Verdict {
    let p = &n.premises[i];
    expect(&p.subject == subject, || format!("premise {i} proves `{}`, expected `{subject}`", p.subject))?;
    expect(p.conclusion == want, || format!("premise {i} concludes {}, expected {want}", p.conclusion))
}

fn conditions(n: &ProofNode, expected: &[SideCondition]) -> Verdict {
    if n.side_conditions != expected {
        let first = n.side_conditions.iter().zip(expected).position(|(a, b)| a != b);
        return Err(match first {
            Some(i) => format!(
                "condition {i} recorded as {}, recomputed as {}",
                describe(&n.side_conditions[i]),
                describe(&expected[i])
            ),
            None => format!("{} conditions recorded, {} recomputed", n.side_conditions.len(), expected.len()),
        });
    }
    match n.side_conditions.iter().find(|c| !c.satisfied) {
        Some(c) => Err(format!("side condition {} fails for {}", c.kind, c.subject)),
        None => Ok(()),
    }
}

fn describe(c: &SideCondition) -> String {
    format!("{}({}){}", c.kind, c.subject, if c.satisfied { "" } else { "!" })
}

fn detail<'a>(n: &'a ProofNode, key: &str) -> Result<&'a str, String> {
    n.details.get(key).map(String::as_str).ok_or_else(|| format!("missing detail `{key}`"))
}

fn parsed(n: &ProofNode, key: &str) -> Result<Expr, String> {
    parse_expr(detail(n, key)?).map_err(|e| format!("detail `{key}`: {e}"))
}

fn check_node(n: &ProofNode, kb: &KnowledgeBase) -> Verdict {
    use Classification::{Algebraic as DA, Transcendental as DT};
    match n.rule {
        Rule::AxiomGamma => {
            expect(n.subject == Expr::call(AXIOM_SYMBOL), || format!("axiom applies to {AXIOM_SYMBOL}(z) only"))?;
            conclusion(n, DT)?;
            premise_count(n, 0)?;
            conditions(n, &rules::axiom_conditions(kb))
        }
        Rule::KBAlgebraic => {
            conclusion(n, DA)?;
            premise_count(n, 0)?;
            if let Some(name) = kb.first_unknown_name(&n.subject) {
                return Err(format!("`{name}` is not in the knowledge base"));
            }
            let atoms = n.subject.function_atoms();
            let is_leaf = atoms.is_empty() || matches!(n.subject.node(), Node::Apply(_, a) if matches!(a.node(), Node::Var));
            expect(is_leaf, || format!("`{}` is not a knowledge-base leaf", n.subject))?;
            conditions(n, &rules::leaf_conditions(&n.subject, kb))
        }
        Rule::DerivativeRule => {
            conclusion(n, DA)?;
            premise_count(n, 1)?;
            let Some((f, k, arg)) = n.subject.as_application() else {
                return Err("subject is not an application".into());
            };
            expect(k > 0 && matches!(arg.node(), Node::Var), || format!("`{}` is not a derivative at z", n.subject))?;
            premise(n, 0, &Expr::call(f), DA)?;
            conditions(n, &[])
        }
        Rule::CompositionRule => {
            let Some((f, k, arg)) = n.subject.as_application() else {
                return Err("subject is not an application".into());
            };
            expect(!matches!(arg.node(), Node::Var), || "composition with the identity".into())?;
            premise_count(n, 2)?;
            let transfer = n.conclusion == DT;
            expect(!transfer || k == 0, || "transcendence transfers to f(e) only".into())?;
            expect(n.conclusion != Classification::Unknown, || "composition concludes UNKNOWN".into())?;
            premise(n, 0, &Expr::deriv(f, k, Expr::var()), n.conclusion)?;
            premise(n, 1, arg, DA)?;
            conditions(n, &rules::composition_conditions(f, arg, kb, transfer))
        }
        Rule::FieldClosure => {
            conclusion(n, DA)?;
            expect(n.premises.iter().all(|p| p.conclusion == DA), || "a premise is not DA".into())?;
            let subjects: Vec<&Expr> = n.premises.iter().map(|p| &p.subject).collect();
            conditions(n, &rules::field_closure_conditions(&n.subject, &subjects))
        }
        Rule::Induction => {
            conclusion(n, DT)?;
            premise_count(n, 1)?;
            let p = &n.premises[0];
            conditions(n, &rules::chain_step_conditions(&n.subject, Some((&p.subject, p.conclusion))))
        }
        Rule::MainReduction => check_reduction(n, kb),
        Rule::DependencyTransfer => check_transfer(n, kb),
    }
}

fn check_reduction(n: &ProofNode, kb: &KnowledgeBase) -> Verdict {
    use Classification::{Algebraic as DA, Transcendental as DT};
    conclusion(n, DT)?;
    let unknown = detail(n, DETAIL_UNKNOWN)?;
    expect(n.subject == Expr::call(unknown), || format!("subject is not {unknown}(z)"))?;
    let (lhs, rhs) = (parsed(n, DETAIL_LHS)?, parsed(n, DETAIL_RHS)?);
    let admissible = detail(n, DETAIL_INNERS)?
        .split(INNER_SEPARATOR)
        .filter(|s| !s.is_empty())
        .map(|s| parse_expr(s).map_err(|e| format!("inner `{s}`: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    let anchor = &n.premises.first().ok_or("no anchor premise")?.subject;
    let p = rules::partition(&lhs, &rhs, unknown, anchor).map_err(|e| e.0)?;
    premise_count(n, 2 + p.inners.len())?;
    premise(n, 0, anchor, DT)?;
    premise(n, 1, &p.coefficient_product(), DA)?;
    for (i, e) in p.inners.iter().enumerate() {
        premise(n, 2 + i, e, DA)?;
    }
    conditions(n, &rules::reduction_conditions(&p, unknown, &admissible, anchor, kb))
}

fn check_transfer(n: &ProofNode, kb: &KnowledgeBase) -> Verdict {
    conclusion(n, Classification::Transcendental)?;
    let known = detail(n, DETAIL_KNOWN)?;
    let candidate = detail(n, DETAIL_CANDIDATE)?;
    expect(n.subject == Expr::call(candidate), || format!("subject is not {candidate}(z)"))?;
    let witness = parse_poly(detail(n, DETAIL_WITNESS)?).map_err(|e| format!("witness: {e}"))?;
    premise_count(n, 1)?;
    premise(n, 0, &Expr::call(known), Classification::Transcendental)?;
    let input = TransferInput { witness: &witness, known, candidate };
    conditions(n, &rules::transfer_conditions(&input, kb))
}
