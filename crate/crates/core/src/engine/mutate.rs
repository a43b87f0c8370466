//! Single-node certificate mutations for soundness testing.

use serde::Serialize;

use super::certificate::{path_label, Certificate};
use super::kb::Classification;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Mutation {
    /// Negate the `satisfied` flag of one side condition.
    FlipCondition { path: Vec<usize>, index: usize },
    DropCondition { path: Vec<usize>, index: usize },
    /// Swap DA and DT in one node's conclusion.
    FlipConclusion { path: Vec<usize> },
}

impl std::fmt::Display for Mutation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mutation::FlipCondition { path, index } => write!(f, "flip condition {index} at {}", path_label(path)),
            Mutation::DropCondition { path, index } => write!(f, "drop condition {index} at {}", path_label(path)),
            Mutation::FlipConclusion { path } => write!(f, "flip conclusion at {}", path_label(path)),
        }
    }
}

/// Every single-node mutation of `c`, in tree order.
pub fn mutations(c: &Certificate) -> Vec<Mutation> {
    let mut out = Vec::new();
    for (path, node) in c.root.walk() {
        out.push(Mutation::FlipConclusion { path: path.clone() });
        for index in 0..node.side_conditions.len() {
            out.push(Mutation::FlipCondition { path: path.clone(), index });
            out.push(Mutation::DropCondition { path: path.clone(), index });
        }
    }
    out
}

pub fn apply_mutation(c: &Certificate, m: &Mutation) -> Certificate {
    let mut out = c.clone();
    match m {
        Mutation::FlipCondition { path, index } => {
            let n = out.root.node_mut(path).expect("path exists");
            n.side_conditions[*index].satisfied ^= true;
        }
        Mutation::DropCondition { path, index } => {
            out.root.node_mut(path).expect("path exists").side_conditions.remove(*index);
        }
        Mutation::FlipConclusion { path } => {
            let n = out.root.node_mut(path).expect("path exists");
            n.conclusion = match n.conclusion {
                Classification::Algebraic => Classification::Transcendental,
                _ => Classification::Algebraic,
            };
        }
    }
    out
}

/// `count` mutations spread over the certificates: round-robin over the
/// certificates, stepping `stride` through each one's mutation list.
pub fn select_mutations(certs: &[Certificate], count: usize, stride: usize) -> Vec<(usize, Mutation)> {
    let all: Vec<Vec<Mutation>> = certs.iter().map(mutations).collect();
    let mut cursor = vec![0usize; certs.len()];
    let mut out = Vec::with_capacity(count);
    let total: usize = all.iter().map(Vec::len).sum();
    let mut round = 0;
    while out.len() < count.min(total) && round < total.max(1) * certs.len().max(1) {
        let i = round % certs.len().max(1);
        round += 1;
        let Some(list) = all.get(i) else { break };
        if list.is_empty() {
            continue;
        }
        let m = list[(cursor[i] * stride) % list.len()].clone();
        cursor[i] += 1;
        if !out.iter().any(|(j, x)| *j == i && *x == m) {
            out.push((i, m));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{check_certificate, certify_transcendence, FunctionSymbol, FunctionalEquation, KnowledgeBase};
    use crate::syntax::parse_expr;

    #[test]
    fn every_mutation_of_a_small_certificate_is_rejected() {
        let mut kb = KnowledgeBase::standard();
        kb.register(FunctionSymbol::new("H", Classification::Unknown).meromorphic()).unwrap();
        let x = |s: &str| parse_expr(s).unwrap();
        let eq = FunctionalEquation::new("H", x("H(z+1)"), x("z*H(z) + 1/Gamma(1-z)"), "H");
        let c = certify_transcendence(&eq, &kb).unwrap();
        let all = mutations(&c);
        assert!(all.len() > 20);
        for m in &all {
            let r = check_certificate(&apply_mutation(&c, m), &kb);
            assert!(!r.accepted, "{m} accepted");
        }
    }

    #[test]
    fn selection_is_deterministic_and_distinct() {
        let mut kb = KnowledgeBase::standard();
        kb.register(FunctionSymbol::new("K", Classification::Unknown).meromorphic()).unwrap();
        let x = |s: &str| parse_expr(s).unwrap();
        let c = certify_transcendence(&FunctionalEquation::new("K", x("K(z) - K(z-1)"), x("Gamma(z)"), "K"), &kb).unwrap();
        let certs = vec![c.clone(), c];
        let a = select_mutations(&certs, 10, 7);
        assert_eq!(a, select_mutations(&certs, 10, 7));
        assert_eq!(a.len(), 10);
        assert!(a.iter().any(|(i, _)| *i == 1));
    }
}
