//! Knowledge base: named function symbols with a classification and
//! declared analytic flags.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::diffpoly::DiffPoly;
use crate::expr::{is_elementary, EvalError, Expr, C64};
use crate::numeric::{ade_residual, SamplePlan, SUPPORTED};

use super::certificate::ProofNode;

/// The axiom symbol.
pub const AXIOM_SYMBOL: &str = "Gamma";

/// Named constants every source file may use.
pub const RESERVED_CONSTANTS: &[&str] = &["pi", "e", "gammaEuler", "Ei1"];

/// Registration-time witness check.
pub const WITNESS_TOLERANCE: f64 = 1e-6;

fn witness_points() -> Vec<C64> {
    vec![
        C64::new(0.35, 0.2),
        C64::new(0.8, 0.0),
        C64::new(1.3, -0.45),
        C64::new(1.75, 0.6),
        C64::new(2.4, 0.1),
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Classification {
    #[serde(rename = "DA")]
    Algebraic,
    #[serde(rename = "DT")]
    Transcendental,
    #[serde(rename = "UNKNOWN")]
    Unknown,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Algebraic => "DA",
            Classification::Transcendental => "DT",
            Classification::Unknown => "UNKNOWN",
        })
    }
}

/// Declared analytic properties. These are metadata, not computed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AnalyticFlags {
    pub entire: bool,
    pub meromorphic: bool,
    pub derivative_nonzero: bool,
}

#[derive(Clone, Debug)]
pub struct FunctionSymbol {
    pub name: String,
    pub classification: Classification,
    pub flags: AnalyticFlags,
    /// An equation the symbol satisfies, for DA symbols.
    pub witness: Option<DiffPoly>,
    pub note: String,
    /// Set once a DT conclusion has been derived for the symbol.
    pub certificate: Option<Arc<ProofNode>>,
}

impl FunctionSymbol {
    pub fn new(name: impl Into<String>, classification: Classification) -> Self {
        FunctionSymbol {
            name: name.into(),
            classification,
            flags: AnalyticFlags::default(),
            witness: None,
            note: String::new(),
            certificate: None,
        }
    }

    /// Entire implies meromorphic.
    pub fn entire(mut self) -> Self {
        self.flags.entire = true;
        self.flags.meromorphic = true;
        self
    }

    pub fn meromorphic(mut self) -> Self {
        self.flags.meromorphic = true;
        self
    }

    pub fn nonzero_derivative(mut self) -> Self {
        self.flags.derivative_nonzero = true;
        self
    }

    pub fn with_witness(mut self, w: DiffPoly) -> Self {
        self.witness = Some(w);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KbError {
    #[error("`{0}` is already registered")]
    DuplicateName(String),
    #[error("inconsistent classification for `{name}`: {reason}")]
    InconsistentClassification { name: String, reason: String },
    #[error("witness of `{name}` fails: {reason}")]
    WitnessFails { name: String, reason: String },
    #[error("`{0}` is not registered")]
    NotRegistered(String),
}

#[derive(Clone, Debug, Default)]
pub struct KnowledgeBase {
    symbols: BTreeMap<String, FunctionSymbol>,
    parameters: BTreeSet<String>,
}

impl KnowledgeBase {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Gamma as the axiom and the elementary functions with their equations.
    pub fn standard() -> Self {
        let mut kb = Self::empty();
        let da = Classification::Algebraic;
        let poly = |s: &str| crate::syntax::parse_poly(s).expect("built-in witness parses");
        let prelude = [
            FunctionSymbol::new(AXIOM_SYMBOL, Classification::Transcendental)
                .meromorphic()
                .nonzero_derivative()
                .with_note("Hoelder: Gamma satisfies no algebraic differential equation over C(z)"),
            FunctionSymbol::new("exp", da).entire().nonzero_derivative().with_witness(poly("u1 - u0")),
            FunctionSymbol::new("sin", da).entire().nonzero_derivative().with_witness(poly("u2 + u0")),
            FunctionSymbol::new("cos", da).entire().nonzero_derivative().with_witness(poly("u2 + u0")),
            FunctionSymbol::new("sinh", da).entire().nonzero_derivative().with_witness(poly("u2 - u0")),
            FunctionSymbol::new("cosh", da).entire().nonzero_derivative().with_witness(poly("u2 - u0")),
            FunctionSymbol::new("tan", da).meromorphic().nonzero_derivative().with_witness(poly("u1 - u0^2 - 1")),
            FunctionSymbol::new("cot", da).meromorphic().nonzero_derivative().with_witness(poly("u1 + u0^2 + 1")),
            // Not meromorphic on C: it may appear with constant arguments only.
            FunctionSymbol::new("log", da).nonzero_derivative().with_witness(poly("z*u1 - 1")),
        ];
        for sym in prelude {
            kb.register(sym).expect("prelude is consistent");
        }
        kb
    }

    pub fn register(&mut self, sym: FunctionSymbol) -> Result<(), KbError> {
        if let Some(old) = self.symbols.get(&sym.name) {
            if old.classification != sym.classification {
                return Err(KbError::InconsistentClassification {
                    name: sym.name.clone(),
                    reason: format!("registered as {}, now declared {}", old.classification, sym.classification),
                });
            }
            return Err(KbError::DuplicateName(sym.name));
        }
        if sym.name == AXIOM_SYMBOL && sym.classification != Classification::Transcendental {
            return Err(KbError::InconsistentClassification {
                name: sym.name,
                reason: "Gamma is differentially transcendental by axiom".into(),
            });
        }
        if sym.witness.is_some() && sym.classification != Classification::Algebraic {
            return Err(KbError::InconsistentClassification {
                name: sym.name,
                reason: "only DA symbols carry a witness equation".into(),
            });
        }
        if let Some(w) = &sym.witness {
            check_witness(&sym.name, w)?;
        }
        if self.parameters.contains(&sym.name) {
            return Err(KbError::DuplicateName(sym.name));
        }
        self.symbols.insert(sym.name.clone(), sym);
        Ok(())
    }

    pub fn declare_parameter(&mut self, name: &str) -> Result<(), KbError> {
        if self.symbols.contains_key(name) || RESERVED_CONSTANTS.contains(&name) || !self.parameters.insert(name.into()) {
            return Err(KbError::DuplicateName(name.into()));
        }
        Ok(())
    }

    /// Store a DT conclusion and the certificate that proves it.
    pub fn record_transcendental(&mut self, name: &str, proof: ProofNode) -> Result<(), KbError> {
        let sym = self.symbols.get_mut(name).ok_or_else(|| KbError::NotRegistered(name.into()))?;
        if sym.classification == Classification::Algebraic {
            return Err(KbError::InconsistentClassification {
                name: name.into(),
                reason: "registered DA, certificate concludes DT".into(),
            });
        }
        sym.classification = Classification::Transcendental;
        sym.certificate = Some(Arc::new(proof));
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&FunctionSymbol> {
        self.symbols.get(name)
    }

    pub fn classification(&self, name: &str) -> Option<Classification> {
        self.get(name).map(|s| s.classification)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.symbols.contains_key(name)
    }

    pub fn is_constant(&self, name: &str) -> bool {
        RESERVED_CONSTANTS.contains(&name) || self.parameters.contains(name)
    }

    pub fn symbols(&self) -> impl Iterator<Item = &FunctionSymbol> {
        self.symbols.values()
    }

    pub fn parameters(&self) -> impl Iterator<Item = &String> {
        self.parameters.iter()
    }

    /// First symbol or constant in `e` the knowledge base does not know.
    pub fn first_unknown_name(&self, e: &Expr) -> Option<String> {
        e.function_symbols()
            .into_iter()
            .find(|f| !self.contains(f))
            .or_else(|| e.constants().into_iter().find(|c| !self.is_constant(c)))
    }

    fn flag(&self, f: &str, pick: fn(&AnalyticFlags) -> bool) -> bool {
        self.get(f).is_some_and(|s| pick(&s.flags))
    }

    pub fn is_meromorphic_symbol(&self, f: &str) -> bool {
        self.flag(f, |fl| fl.meromorphic)
    }

    /// Entire: a polynomial in `z`, constants and applications of entire
    /// symbols (or their derivatives) to entire arguments.
    pub fn is_entire(&self, e: &Expr) -> bool {
        let (num, den) = e.numer_denom();
        if den.depends_on_var() {
            return false;
        }
        num.function_atoms().iter().all(|a| {
            let (f, _, arg) = a.as_application().expect("atoms are applications");
            self.flag(f, |fl| fl.entire) && self.is_entire(arg)
        })
    }

    /// `e'` is not identically zero. Opaque symbols inside `e` must carry
    /// the declared flag.
    pub fn derivative_nonzero(&self, e: &Expr) -> bool {
        if e.differentiate().is_zero() {
            return false;
        }
        atom_heads(e).iter().all(|f| is_elementary(f) || self.flag(f, |fl| fl.derivative_nonzero))
    }
}

/// Heads of all `z`-dependent applications, nested ones included.
pub(crate) fn atom_heads(e: &Expr) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for a in e.function_atoms() {
        if let Some((f, _, arg)) = a.as_application() {
            out.insert(f.to_string());
            out.extend(atom_heads(arg));
        }
    }
    out
}

/// `alpha*z + beta` with constant `alpha != 0`.
pub fn is_affine(e: &Expr) -> bool {
    let d = e.differentiate();
    !d.is_zero() && !d.depends_on_var() && d.max_indet().is_none()
}

fn check_witness(name: &str, w: &DiffPoly) -> Result<(), KbError> {
    if w.is_zero() || w.ord() < 0 {
        return Err(KbError::WitnessFails {
            name: name.into(),
            reason: "witness has no differential indeterminate".into(),
        });
    }
    if !SUPPORTED.contains(&name) {
        return Ok(());
    }
    let plan = SamplePlan::new(witness_points(), WITNESS_TOLERANCE);
    match ade_residual(name, w, name, &plan) {
        Ok(r) if r.entries.is_empty() || r.passed => Ok(()),
        Ok(r) => Err(KbError::WitnessFails { name: name.into(), reason: format!("residual {:.3e}", r.max) }),
        // Not numerically evaluable with this witness: nothing to check.
        Err(EvalError::Unsupported(_)) => Ok(()),
        Err(e) => Err(KbError::WitnessFails { name: name.into(), reason: e.to_string() }),
    }
}
