//! Complex evaluation of expression trees.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use thiserror::Error;

use super::{Expr, Node};

pub type C64 = Complex64;

/// Samples closer than this to a declared pole are refused.
pub const POLE_RADIUS: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("unbound symbol `{0}`")]
    UnboundSymbol(String),
    #[error("`{symbol}` evaluated at its pole near {at}")]
    PoleHit { symbol: String, at: C64 },
    #[error("overflow or non-finite value in `{0}`")]
    Overflow(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("series for `{symbol}` did not converge within {terms} terms")]
    ConvergenceFailure { symbol: String, terms: usize },
}

/// Numeric implementation of a function symbol: `(order, w) -> D^order f (w)`.
pub type Evaluator = Arc<dyn Fn(u32, C64) -> Result<C64, EvalError> + Send + Sync>;

/// Bindings needed to evaluate an expression: the point, function
/// evaluators, constant values and a relative tolerance target.
#[derive(Clone)]
pub struct EvalEnv {
    pub z: C64,
    pub functions: BTreeMap<String, Evaluator>,
    pub constants: BTreeMap<String, C64>,
    pub tolerance: f64,
}

impl EvalEnv {
    pub fn new(z: C64) -> Self {
        EvalEnv { z, functions: BTreeMap::new(), constants: BTreeMap::new(), tolerance: 1e-12 }
    }

    pub fn at(&self, z: C64) -> Self {
        EvalEnv { z, ..self.clone() }
    }

    pub fn with_function(mut self, name: impl Into<String>, f: Evaluator) -> Self {
        self.functions.insert(name.into(), f);
        self
    }

    pub fn with_constant(mut self, name: impl Into<String>, v: C64) -> Self {
        self.constants.insert(name.into(), v);
        self
    }
}

fn finite(v: C64, what: &str) -> Result<C64, EvalError> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(EvalError::Overflow(what.to_string()))
    }
}

impl Expr {
    /// Evaluate at `env.z`. Every function symbol and named constant must be bound.
    pub fn eval_complex(&self, env: &EvalEnv) -> Result<C64, EvalError> {
        match self.node() {
            Node::Num(q) => Ok(C64::new(Expr::to_f64(q), 0.0)),
            Node::Const(c) => env
                .constants
                .get(c)
                .copied()
                .ok_or_else(|| EvalError::UnboundSymbol(c.clone())),
            Node::Var => Ok(env.z),
            Node::Indet(k) => Err(EvalError::UnboundSymbol(format!("u{k}"))),
            Node::Apply(f, a) | Node::Deriv(f, _, a) => {
                let k = match self.node() {
                    Node::Deriv(_, k, _) => *k,
                    _ => 0,
                };
                let eval = env
                    .functions
                    .get(f)
                    .ok_or_else(|| EvalError::UnboundSymbol(f.clone()))?;
                let w = a.eval_complex(env)?;
                finite(eval(k, w)?, f)
            }
            Node::Add(xs) => {
                let mut acc = C64::new(0.0, 0.0);
                for x in xs {
                    acc += x.eval_complex(env)?;
                }
                finite(acc, "sum")
            }
            Node::Mul(xs) => {
                let mut acc = C64::new(1.0, 0.0);
                for x in xs {
                    acc *= x.eval_complex(env)?;
                }
                finite(acc, "product")
            }
            Node::Pow(b, n) => {
                let v = b.eval_complex(env)?;
                if *n < 0 && v.norm() == 0.0 {
                    return Err(EvalError::Overflow("division by zero".into()));
                }
                let e = i32::try_from(*n).map_err(|_| EvalError::Overflow("exponent".into()))?;
                finite(v.powi(e), "power")
            }
        }
    }
}
