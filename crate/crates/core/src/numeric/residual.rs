//! Residuals of identities and algebraic differential equations at sample points.

use serde::Serialize;

use crate::diffpoly::DiffPoly;
use crate::expr::{EvalEnv, EvalError, Expr, C64};

use super::registry::standard_env;

/// A complex number in reports.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Point {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for Point {
    fn from(z: C64) -> Self {
        Point { re: z.re, im: z.im }
    }
}

/// Sample points and the tolerance a report is judged against. Points that
/// land within the pole radius of any evaluated symbol are skipped, with
/// the reason recorded.
#[derive(Clone, Debug)]
pub struct SamplePlan {
    pub points: Vec<C64>,
    pub tolerance: f64,
}

impl SamplePlan {
    pub fn new(points: Vec<C64>, tolerance: f64) -> Self {
        SamplePlan { points, tolerance }
    }

    pub fn real(points: &[f64], tolerance: f64) -> Self {
        Self::new(points.iter().map(|&x| C64::new(x, 0.0)).collect(), tolerance)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualEntry {
    pub label: String,
    pub z: Point,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Skipped {
    pub z: Point,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualReport {
    pub name: String,
    pub tolerance: f64,
    pub entries: Vec<ResidualEntry>,
    pub max: f64,
    pub skipped: Vec<Skipped>,
    pub passed: bool,
}

impl ResidualReport {
    pub fn new(name: impl Into<String>, tolerance: f64) -> Self {
        ResidualReport {
            name: name.into(),
            tolerance,
            entries: Vec::new(),
            max: 0.0,
            skipped: Vec::new(),
            passed: false,
        }
    }

    pub fn push(&mut self, label: impl Into<String>, z: C64, residual: f64) {
        self.entries.push(ResidualEntry { label: label.into(), z: z.into(), residual });
        self.max = self.entries.iter().map(|e| e.residual).fold(0.0, f64::max);
        self.passed = self.max < self.tolerance;
    }

    pub fn skip(&mut self, z: C64, reason: impl Into<String>) {
        self.skipped.push(Skipped { z: z.into(), reason: reason.into() });
    }
}

/// `|lhs - rhs|` at each sample, evaluated in `env` (its `z` is overwritten).
pub fn fe_residual_in(
    name: &str,
    lhs: &Expr,
    rhs: &Expr,
    plan: &SamplePlan,
    env: &EvalEnv,
) -> Result<ResidualReport, EvalError> {
    let mut report = ResidualReport::new(name, plan.tolerance);
    for &z in &plan.points {
        let env = env.at(z);
        let both = lhs.eval_complex(&env).and_then(|l| Ok((l, rhs.eval_complex(&env)?)));
        match both {
            Ok((l, r)) => report.push(name, z, (l - r).norm()),
            Err(EvalError::PoleHit { symbol, at }) => {
                report.skip(z, format!("`{symbol}` has a declared pole near {at}"))
            }
            Err(e) => return Err(e),
        }
    }
    Ok(report)
}

/// [`fe_residual_in`] with the standard evaluators.
pub fn fe_residual(name: &str, lhs: &Expr, rhs: &Expr, plan: &SamplePlan) -> Result<ResidualReport, EvalError> {
    fe_residual_in(name, lhs, rhs, plan, &standard_env(C64::new(0.0, 0.0)))
}

/// `|f(a)|` with `u_k -> D^k a`, using the numeric derivatives of the symbol
/// `a` (for Gamma: `Gamma * Bell(psi, psi', ...)`).
pub fn ade_residual(name: &str, f: &DiffPoly, a: &str, plan: &SamplePlan) -> Result<ResidualReport, EvalError> {
    let expr = f.apply_symbol(a);
    fe_residual(name, &expr, &Expr::zero(), plan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_expr, parse_poly};

    #[test]
    fn exp_satisfies_its_equation() {
        let plan = SamplePlan::real(&[0.1, 0.7, 1.3, -0.4, 2.2], 1e-12);
        let r = ade_residual("exp", &parse_poly("u1 - u0").unwrap(), "exp", &plan).unwrap();
        assert!(r.passed && r.max < 1e-12, "{r:?}");
    }

    #[test]
    fn gamma_is_not_its_own_derivative() {
        let plan = SamplePlan::real(&[2.5], 1e-8);
        let r = ade_residual("neg", &parse_poly("u1 - u0").unwrap(), "Gamma", &plan).unwrap();
        assert!(r.max > 0.1);
        assert!(!r.passed);
    }

    #[test]
    fn pole_samples_are_skipped() {
        let plan = SamplePlan::real(&[0.0, 1.5], 1e-10);
        let g = parse_expr("Gamma(z+1)").unwrap();
        let zg = parse_expr("z*Gamma(z)").unwrap();
        let r = fe_residual("rec", &g, &zg, &plan).unwrap();
        assert_eq!(r.entries.len(), 1);
        assert_eq!(r.skipped.len(), 1);
    }
}
