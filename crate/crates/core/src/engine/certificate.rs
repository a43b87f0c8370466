//! Proof trees. Each node applies one rule, records the side conditions it
//! checked and concludes a classification for its subject.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::expr::Expr;

use super::kb::Classification;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Rule {
    AxiomGamma,
    KBAlgebraic,
    DerivativeRule,
    CompositionRule,
    FieldClosure,
    MainReduction,
    DependencyTransfer,
    Induction,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Condition {
    /// The knowledge base classifies the symbol as the node needs.
    KbClassification,
    Meromorphic,
    Entire,
    DerivativeNonzero,
    Affine,
    /// The inner function is in the equation's admissible list.
    Admissible,
    /// Premises cover exactly the atoms of the subject.
    AtomsCovered,
    UnknownOccurs,
    UnknownNotAlgebraic,
    /// The equation, as a relation for the anchor, is not vacuous.
    AnchorAlgebraic,
    AnchorTranscendental,
    WitnessNonzero,
    WitnessOrder,
    WitnessResidual,
    CandidateOccurs,
    /// Witness coefficients lie in a field generated by the candidate over DA functions.
    CoefficientsInTower,
    ChainStep,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SideCondition {
    pub kind: Condition,
    pub subject: String,
    pub satisfied: bool,
}

impl SideCondition {
    pub fn new(kind: Condition, subject: impl fmt::Display, satisfied: bool) -> Self {
        SideCondition { kind, subject: subject.to_string(), satisfied }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProofNode {
    pub rule: Rule,
    pub subject: Expr,
    pub conclusion: Classification,
    pub side_conditions: Vec<SideCondition>,
    pub details: BTreeMap<String, String>,
    pub premises: Vec<ProofNode>,
}

impl ProofNode {
    pub fn new(rule: Rule, subject: Expr, conclusion: Classification) -> Self {
        ProofNode {
            rule,
            subject,
            conclusion,
            side_conditions: Vec::new(),
            details: BTreeMap::new(),
            premises: Vec::new(),
        }
    }

    pub fn with_conditions(mut self, c: Vec<SideCondition>) -> Self {
        self.side_conditions = c;
        self
    }

    pub fn with_premises(mut self, p: Vec<ProofNode>) -> Self {
        self.premises = p;
        self
    }

    pub fn with_detail(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.details.insert(key.into(), value.to_string());
        self
    }

    pub fn node_count(&self) -> usize {
        1 + self.premises.iter().map(ProofNode::node_count).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.premises.iter().map(ProofNode::depth).max().unwrap_or(0)
    }

    /// Every path ends in an axiom or a knowledge-base leaf.
    pub fn leaves_are_grounded(&self) -> bool {
        if self.premises.is_empty() {
            matches!(self.rule, Rule::AxiomGamma | Rule::KBAlgebraic)
        } else {
            self.premises.iter().all(ProofNode::leaves_are_grounded)
        }
    }

    /// Pre-order walk with the child-index path of each node.
    pub fn walk(&self) -> Vec<(Vec<usize>, &ProofNode)> {
        let mut out = Vec::new();
        fn go<'a>(n: &'a ProofNode, path: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, &'a ProofNode)>) {
            out.push((path.clone(), n));
            for (i, p) in n.premises.iter().enumerate() {
                path.push(i);
                go(p, path, out);
                path.pop();
            }
        }
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn node_mut(&mut self, path: &[usize]) -> Option<&mut ProofNode> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.premises.get_mut(i)?.node_mut(rest),
        }
    }

    fn render(&self, indent: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pad = "  ".repeat(indent);
        writeln!(f, "{pad}{} {} : {}", self.rule, self.subject, self.conclusion)?;
        for key in ["argument", "assumption", "note"] {
            if let Some(v) = self.details.get(key) {
                writeln!(f, "{pad}  {key}: {v}")?;
            }
        }
        for c in &self.side_conditions {
            let mark = if c.satisfied { "ok" } else { "FAILED" };
            writeln!(f, "{pad}  [{mark}] {} {}", c.kind, c.subject)?;
        }
        for p in &self.premises {
            p.render(indent + 1, f)?;
        }
        Ok(())
    }
}

impl fmt::Display for ProofNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.render(0, f)
    }
}

/// Dotted form of a node path; the root is `root`.
pub fn path_label(path: &[usize]) -> String {
    if path.is_empty() {
        "root".into()
    } else {
        path.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(".")
    }
}

/// A named top-level certificate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub name: String,
    pub symbol: String,
    pub conclusion: Classification,
    pub root: ProofNode,
}

impl Certificate {
    pub fn new(name: impl Into<String>, symbol: impl Into<String>, root: ProofNode) -> Self {
        Certificate { name: name.into(), symbol: symbol.into(), conclusion: root.conclusion, root }
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "certificate {}: {} is {}", self.name, self.symbol, self.conclusion)?;
        self.root.render(1, f)
    }
}
