//! Certificate engine for differential transcendence.
//!
//! A [`KnowledgeBase`] holds classified symbols with declared analytic flags.
//! [`classify_expr`] proves expressions DA by the closure rules;
//! [`certify_transcendence`], [`certify_chain`] and [`dependency_transfer`]
//! derive DT verdicts, and [`check_certificate`] re-validates a proof tree
//! against the knowledge base without searching.

mod certificate;
mod check;
mod classify;
mod corpus;
mod kb;
mod mutate;
mod reduce;
pub mod rules;

use thiserror::Error;

pub use certificate::{path_label, Certificate, Condition, ProofNode, Rule, SideCondition};
pub use check::{check_certificate, CheckReport, Rejection};
pub use classify::{classify_expr, Classified};
pub use corpus::{build_corpus, Corpus, Outcome};
pub use kb::{
    is_affine, AnalyticFlags, Classification, FunctionSymbol, KbError, KnowledgeBase, AXIOM_SYMBOL,
    RESERVED_CONSTANTS, WITNESS_TOLERANCE,
};
pub use mutate::{apply_mutation, mutations, select_mutations, Mutation};
pub use reduce::{anchor_proof, certify_chain, certify_transcendence, dependency_transfer, Chain, FunctionalEquation};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("missing side condition: {0}")]
    MissingSideCondition(String),
    #[error("no transcendental anchor: {0}")]
    NoTranscendentalAnchor(String),
    #[error("witness fails: {0}")]
    WitnessFails(String),
    #[error("`{0}` is not known to be DT")]
    AnchorNotDT(String),
    #[error("broken chain: {0}")]
    BrokenChain(String),
    #[error(transparent)]
    Kb(#[from] KbError),
}
