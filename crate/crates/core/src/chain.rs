//! Chain rule for compositions with an inner function `e`.
//!
//! `(D^k u)(e(z)) = sum_{j=1..k} lambda_{kj}(z) D^j (u o e)(z)` where
//! `lambda_{11} = 1/e'` and `lambda_{k+1,j} = (lambda_{kj}' + lambda_{k,j-1}) / e'`.
//! [`compose_transform`] turns an equation `f` satisfied by `g` into one
//! satisfied by `g o e`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;
use thiserror::Error;

use crate::diffpoly::{DiffMonomial, DiffPoly};
use crate::expr::{EvalEnv, EvalError, Expr, C64};
use crate::numeric::ResidualReport;

/// `e'` smaller than this at a sample makes the sample unusable.
pub const DERIVATIVE_FLOOR: f64 = 1e-12;

/// Symbol standing in for an arbitrary inner function when the clearing
/// power is computed.
const GENERIC_INNER: &str = "__inner";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChainError {
    #[error("inner function `{0}` is constant")]
    ConstantInner(String),
    #[error("derivative of the inner function vanishes at sample {0}")]
    DerivativeVanishes(C64),
    #[error("{0}")]
    Eval(#[from] EvalError),
    #[error("transform needs ord f >= 0 or a coefficient-only f; got kmax = 0")]
    EmptyTable,
}

/// Triangular table `lambda_{kj}`, `1 <= j <= k <= kmax`. Immutable.
#[derive(Clone, Debug)]
pub struct LambdaTable {
    inner: Expr,
    rows: Arc<Vec<Vec<Expr>>>,
    kmax: usize,
}

type Cache = Mutex<HashMap<Expr, Arc<Vec<Vec<Expr>>>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

impl LambdaTable {
    pub fn inner(&self) -> &Expr {
        &self.inner
    }

    pub fn kmax(&self) -> usize {
        self.kmax
    }

    /// `lambda_{kj}`; zero outside `1 <= j <= k <= kmax`.
    pub fn get(&self, k: usize, j: usize) -> Expr {
        if j == 0 || j > k || k > self.kmax {
            return Expr::zero();
        }
        self.rows[k - 1][j - 1].clone()
    }

    /// Row `k` as `(j, lambda_kj)` pairs.
    pub fn row(&self, k: usize) -> Vec<(usize, Expr)> {
        (1..=k).map(|j| (j, self.get(k, j))).collect()
    }
}

/// Build the table by the recurrence, every entry simplified. Rows are
/// memoized per inner function and shared between tables.
pub fn lambda_table(e: &Expr, kmax: usize) -> Result<LambdaTable, ChainError> {
    if kmax == 0 {
        return Err(ChainError::EmptyTable);
    }
    let e = e.simplify();
    let de = e.differentiate();
    if de.is_zero() {
        return Err(ChainError::ConstantInner(e.to_string()));
    }
    let cached = cache().lock().unwrap().get(&e).cloned();
    let mut rows: Vec<Vec<Expr>> = cached.map(|r| (*r).clone()).unwrap_or_default();
    if rows.len() < kmax {
        let inv = de.recip().simplify();
        if rows.is_empty() {
            rows.push(vec![inv.clone()]);
        }
        while rows.len() < kmax {
            let prev = rows.last().unwrap();
            let k = prev.len();
            let next: Vec<Expr> = (1..=k + 1)
                .map(|j| {
                    let keep = if j <= k { prev[j - 1].differentiate() } else { Expr::zero() };
                    let shift = if j >= 2 { prev[j - 2].clone() } else { Expr::zero() };
                    ((keep + shift) * &inv).simplify()
                })
                .collect();
            rows.push(next);
        }
        cache().lock().unwrap().insert(e.clone(), Arc::new(rows.clone()));
    }
    Ok(LambdaTable { inner: e, rows: Arc::new(rows), kmax })
}

/// Result of [`compose_transform`].
#[derive(Clone, Debug)]
pub struct Transform {
    pub poly: DiffPoly,
    /// `m` in the factor `(e')^m` multiplied through.
    pub clearing_power: u32,
    pub note: String,
}

/// Substitute `z -> e`, `u_k -> sum_j lambda_kj u_j` and multiply by `(e')^m`.
fn transform_raw(f: &DiffPoly, e: &Expr, table: Option<&LambdaTable>) -> DiffPoly {
    let images: Vec<DiffPoly> = match table {
        None => vec![DiffPoly::indet(0)],
        Some(t) => std::iter::once(DiffPoly::indet(0))
            .chain((1..=t.kmax()).map(|k| {
                t.row(k).into_iter().fold(DiffPoly::zero(), |acc, (j, l)| {
                    acc.add(&DiffPoly::term(DiffMonomial::indet(j as u32), l))
                })
            }))
            .collect(),
    };
    let mut out = DiffPoly::zero();
    for (m, c) in f.terms() {
        let mut term = DiffPoly::constant(c.substitute(&Expr::var(), e));
        for &(k, p) in m.pairs() {
            term = term.mul(&images[k as usize].pow(p));
        }
        out = out.add(&term);
    }
    out
}

/// The clearing power is read off a run with an arbitrary inner function,
/// so it does not depend on accidental simplifications for a particular `e`.
fn generic_clearing_power(f: &DiffPoly) -> u32 {
    let n = f.ord();
    if n < 1 {
        return 0;
    }
    let g = Expr::call(GENERIC_INNER);
    let table = lambda_table(&g, n as usize).expect("generic inner is not constant");
    let raw = transform_raw(f, &g, Some(&table));
    let dg = Expr::deriv(GENERIC_INNER, 1, Expr::var());
    raw.terms().map(|(_, c)| c.denominator_multiplicity(&dg)).max().unwrap_or(0)
}

/// `f_1` whose solutions include `g o e` for every solution `g` of `f`.
pub fn compose_transform(f: &DiffPoly, e: &Expr) -> Result<Transform, ChainError> {
    let e = e.simplify();
    let de = e.differentiate();
    if de.is_zero() {
        return Err(ChainError::ConstantInner(e.to_string()));
    }
    let n = f.ord();
    if n < 1 {
        let poly = transform_raw(f, &e, None);
        let note = format!("no derivatives: coefficients composed with {e}");
        return Ok(Transform { poly, clearing_power: 0, note });
    }
    let table = lambda_table(&e, n as usize)?;
    let m = generic_clearing_power(f);
    let raw = transform_raw(f, &e, Some(&table));
    let poly = raw.scale(&Expr::pow(de.clone(), i64::from(m)));
    let note = format!("multiplied through by (e')^{m} with e' = {de}");
    Ok(Transform { poly, clearing_power: m, note })
}

/// Residual of the chain identity per order.
#[derive(Clone, Debug, Serialize)]
pub struct ChainCheck {
    pub inner: String,
    pub function: String,
    pub kmax: usize,
    pub report: ResidualReport,
}

/// Compare `(D^k u)(e(z))` with `sum_j lambda_kj D^j(u o e)` at each sample,
/// both sides derived symbolically and then evaluated in `env`. `u` is an
/// expression in `z`.
pub fn verify_chain_identity(
    e: &Expr,
    u: &Expr,
    kmax: usize,
    samples: &[C64],
    env: &EvalEnv,
    tolerance: f64,
) -> Result<ChainCheck, ChainError> {
    let table = lambda_table(e, kmax)?;
    let e = table.inner().clone();
    let de = e.differentiate();
    let composed = u.substitute(&Expr::var(), &e);
    let mut lhs = Vec::with_capacity(kmax);
    let mut du = u.simplify();
    for _ in 0..kmax {
        du = du.differentiate();
        lhs.push(du.substitute(&Expr::var(), &e));
    }
    let mut composed_derivs = vec![composed];
    for _ in 0..kmax {
        let next = composed_derivs.last().unwrap().differentiate();
        composed_derivs.push(next);
    }
    let rhs: Vec<Expr> = (1..=kmax)
        .map(|k| {
            Expr::add(table.row(k).into_iter().map(|(j, l)| l * &composed_derivs[j]).collect()).simplify()
        })
        .collect();
    let mut report = ResidualReport::new(format!("chain {u} o {e}"), tolerance);
    for &z in samples {
        let env = env.at(z);
        if de.eval_complex(&env)?.norm() < DERIVATIVE_FLOOR {
            return Err(ChainError::DerivativeVanishes(z));
        }
        for k in 1..=kmax {
            let l = lhs[k - 1].eval_complex(&env)?;
            let r = rhs[k - 1].eval_complex(&env)?;
            report.push(format!("k={k}"), z, (l - r).norm());
        }
    }
    Ok(ChainCheck { inner: e.to_string(), function: u.to_string(), kmax, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::standard_env;
    use crate::syntax::{parse_expr, parse_poly};

    fn x(s: &str) -> Expr {
        parse_expr(s).unwrap()
    }

    #[test]
    fn first_entries_for_generic_inner() {
        let t = lambda_table(&x("e(z)"), 2).unwrap();
        assert_eq!(t.get(1, 1), x("1/D1[e](z)"));
        assert_eq!(t.get(2, 1), x("-D2[e](z)/D1[e](z)^3"));
        assert_eq!(t.get(2, 2), x("D1[e](z)^-2"));
        assert!(t.get(2, 0).is_zero() && t.get(1, 2).is_zero());
    }

    #[test]
    fn linear_inner_has_diagonal_table() {
        let t = lambda_table(&x("a*z + b"), 4).unwrap();
        for k in 1..=4 {
            for j in 1..k {
                assert!(t.get(k, j).is_zero());
            }
            assert_eq!(t.get(k, k), x(&format!("a^-{k}")));
        }
    }

    #[test]
    fn square_inner_entries() {
        let t = lambda_table(&x("z^2"), 2).unwrap();
        assert_eq!(t.get(1, 1), x("1/(2*z)"));
        assert_eq!(t.get(2, 1), x("-1/(4*z^3)"));
        assert_eq!(t.get(2, 2), x("1/(4*z^2)"));
    }

    #[test]
    fn constant_inner_is_rejected() {
        assert!(matches!(lambda_table(&x("3"), 2), Err(ChainError::ConstantInner(_))));
        let f = parse_poly("u1 - u0").unwrap();
        assert!(matches!(compose_transform(&f, &x("pi")), Err(ChainError::ConstantInner(_))));
    }

    #[test]
    fn exp_doubling() {
        let t = compose_transform(&parse_poly("u1 - u0").unwrap(), &x("2*z")).unwrap();
        assert_eq!(t.poly, parse_poly("u1 - 2*u0").unwrap());
        assert_eq!(t.clearing_power, 1);
        assert!(t.poly.apply(&x("exp(2*z)")).is_zero());
    }

    #[test]
    fn coefficient_only_polynomial() {
        let f = parse_poly("z^2 + 1").unwrap();
        let t = compose_transform(&f, &x("z + 3")).unwrap();
        assert_eq!(t.poly, parse_poly("(z+3)^2 + 1").unwrap());
    }

    #[test]
    fn identity_inner_is_exact() {
        let samples = [C64::new(0.7, 0.1), C64::new(1.9, -0.3)];
        let env = standard_env(C64::new(0.0, 0.0));
        let c = verify_chain_identity(&x("z"), &x("Gamma(z)"), 3, &samples, &env, 1e-8).unwrap();
        assert_eq!(c.report.max, 0.0);
    }

    #[test]
    fn vanishing_derivative_is_reported() {
        let env = standard_env(C64::new(0.0, 0.0));
        let err = verify_chain_identity(&x("z^2"), &x("sin(z)"), 2, &[C64::new(0.0, 0.0)], &env, 1e-8);
        assert!(matches!(err, Err(ChainError::DerivativeVanishes(_))));
    }
}
