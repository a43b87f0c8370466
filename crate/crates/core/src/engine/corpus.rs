//! Running a `.dfa` source file through the engine.

use crate::diffpoly::DiffPoly;
use crate::syntax::{SourceFile, Statement, SymbolDecl};

use super::certificate::Certificate;
use super::kb::{FunctionSymbol, KnowledgeBase};
use super::reduce::{certify_chain, certify_transcendence, dependency_transfer, Chain, FunctionalEquation};
use super::EngineError;

/// Result of one certifying statement.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub name: String,
    pub result: Result<Vec<Certificate>, EngineError>,
}

#[derive(Clone, Debug)]
pub struct Corpus {
    pub kb: KnowledgeBase,
    pub outcomes: Vec<Outcome>,
}

impl Corpus {
    pub fn certificates(&self) -> impl Iterator<Item = &Certificate> {
        self.outcomes.iter().filter_map(|o| o.result.as_ref().ok()).flatten()
    }

    pub fn failures(&self) -> impl Iterator<Item = (&str, &EngineError)> {
        self.outcomes.iter().filter_map(|o| o.result.as_ref().err().map(|e| (o.name.as_str(), e)))
    }
}

fn symbol(d: &SymbolDecl) -> FunctionSymbol {
    let mut s = FunctionSymbol::new(&d.name, d.classification).with_note(&d.note);
    s.flags.entire = d.entire;
    s.flags.meromorphic = d.meromorphic;
    s.flags.derivative_nonzero = d.derivative_nonzero;
    s.witness = d.witness.clone();
    s
}

/// Execute the statements in order on top of `kb`. Declarations that fail
/// are reported as outcomes; DT conclusions are recorded as they are
/// derived, so later statements may anchor on them.
pub fn build_corpus(src: &SourceFile, mut kb: KnowledgeBase) -> Corpus {
    let mut outcomes = Vec::new();
    for stmt in &src.statements {
        let result = match stmt {
            Statement::Symbol(d) => match kb.register(symbol(d)) {
                Ok(()) => continue,
                Err(e) => Err(e.into()),
            },
            Statement::Parameter(d) => match kb.declare_parameter(&d.name) {
                Ok(()) => continue,
                Err(e) => Err(e.into()),
            },
            Statement::Identity(_) => continue,
            Statement::Equation(d) => {
                let eq = FunctionalEquation::new(&d.name, d.lhs.clone(), d.rhs.clone(), &d.unknown)
                    .with_inners(d.inners.iter().cloned())
                    .with_note(&d.note);
                certify_transcendence(&eq, &kb).and_then(|c| {
                    kb.record_transcendental(&d.unknown, c.root.clone())?;
                    Ok(vec![c])
                })
            }
            Statement::Chain(d) => {
                let chain = Chain {
                    name: d.name.clone(),
                    lhs: d.lhs.clone(),
                    rhs: d.rhs.clone(),
                    base: d.base.clone(),
                    members: d.members.clone(),
                };
                certify_chain(&chain, &mut kb)
            }
            Statement::Transfer(d) => {
                let w = d.witness.rename_function(&d.candidate_placeholder, &d.candidate);
                DiffPoly::from_expr_in(&w, &d.known_placeholder)
                    .map_err(EngineError::ShapeMismatch)
                    .and_then(|w| dependency_transfer(&w, &d.known, &d.candidate, &kb))
                    .and_then(|mut c| {
                        kb.record_transcendental(&d.candidate, c.root.clone())?;
                        c.name = d.name.clone();
                        Ok(vec![c])
                    })
            }
        };
        outcomes.push(Outcome { name: stmt.name().to_string(), result });
    }
    Corpus { kb, outcomes }
}
