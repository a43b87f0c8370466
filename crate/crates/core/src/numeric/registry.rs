//! Name-indexed evaluators, declared poles and named constants.

use std::f64::consts::{E, PI};
use std::sync::Arc;

use crate::expr::{EvalEnv, EvalError, Evaluator, C64, POLE_RADIUS};

use super::special;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
/// `Ei(1)`.
pub const EI_1: f64 = 1.895_117_816_355_936_8;

/// Names with a numeric implementation.
pub const SUPPORTED: &[&str] = &[
    "A1", "Gamma", "H1", "K1", "beta", "cos", "cosh", "cot", "eta", "exp", "log", "psi", "sin", "sinh",
    "tan", "zeta",
];

/// Where a symbol is declared singular.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PoleSet {
    None,
    NonPositiveIntegers,
    Integers,
    Point(i64),
    /// Odd multiples of `pi/2` (tan) or multiples of `pi` (cot); only
    /// relevant for real-axis samples.
    TrigPoles { offset_half: bool },
    /// The branch cut and zero of `log`.
    Origin,
}

impl PoleSet {
    pub fn near(&self, w: C64) -> bool {
        let int_dist = |x: C64| (x - C64::new(x.re.round(), 0.0)).norm();
        match *self {
            PoleSet::None => false,
            PoleSet::NonPositiveIntegers => w.re < 0.5 && int_dist(w) < POLE_RADIUS,
            PoleSet::Integers => int_dist(w) < POLE_RADIUS,
            PoleSet::Point(p) => (w - C64::new(p as f64, 0.0)).norm() < POLE_RADIUS,
            PoleSet::TrigPoles { offset_half } => {
                let t = w / PI - if offset_half { 0.5 } else { 0.0 };
                int_dist(t) * PI < POLE_RADIUS
            }
            PoleSet::Origin => w.norm() < POLE_RADIUS,
        }
    }
}

pub fn declared_poles(name: &str) -> PoleSet {
    match name {
        "Gamma" | "psi" | "H1" => PoleSet::NonPositiveIntegers,
        "K1" | "A1" => PoleSet::Integers,
        "zeta" => PoleSet::Point(1),
        "tan" => PoleSet::TrigPoles { offset_half: true },
        "cot" => PoleSet::TrigPoles { offset_half: false },
        "log" => PoleSet::Origin,
        _ => PoleSet::None,
    }
}

fn unsupported_order(name: &str, k: u32) -> EvalError {
    EvalError::Unsupported(format!("derivative of order {k} of `{name}`"))
}

fn order_zero(name: &str, k: u32, v: impl FnOnce() -> Result<C64, EvalError>) -> Result<C64, EvalError> {
    if k == 0 {
        v()
    } else {
        Err(unsupported_order(name, k))
    }
}

/// `D^k name (z)`.
pub fn special_value(name: &str, k: u32, z: C64) -> Result<C64, EvalError> {
    if declared_poles(name).near(z) {
        return Err(EvalError::PoleHit { symbol: name.to_string(), at: z });
    }
    match name {
        "Gamma" => special::gamma_derivative(k, z),
        "psi" => special::polygamma(k, z),
        "H1" => special::h1(k, z),
        "zeta" => order_zero(name, k, || special::zeta(z)),
        "eta" => order_zero(name, k, || special::eta(z)),
        "beta" => order_zero(name, k, || special::beta(z)),
        "K1" => order_zero(name, k, || special::k1(z)),
        "A1" => order_zero(name, k, || special::a1(z)),
        "exp" => Ok(z.exp()),
        "sin" | "cos" => {
            // D^k sin = sin(z + k pi/2)
            let shift = f64::from(k % 4) * PI / 2.0;
            Ok(if name == "sin" { (z + shift).sin() } else { (z + shift).cos() })
        }
        "sinh" | "cosh" => {
            let odd = k % 2 == 1;
            Ok(if (name == "sinh") != odd { z.sinh() } else { z.cosh() })
        }
        "tan" => order_zero(name, k, || Ok(z.tan())),
        "cot" => order_zero(name, k, || Ok(1.0 / z.tan())),
        "log" => order_zero(name, k, || Ok(z.ln())),
        _ => Err(EvalError::Unsupported(format!("no evaluator for `{name}`"))),
    }
}

pub fn evaluator(name: &str) -> Option<Evaluator> {
    if !SUPPORTED.contains(&name) {
        return None;
    }
    let owned = name.to_string();
    Some(Arc::new(move |k, z| special_value(&owned, k, z)))
}

pub fn constant_value(name: &str) -> Option<C64> {
    let v = match name {
        "pi" => PI,
        "e" => E,
        "gammaEuler" => EULER_GAMMA,
        "Ei1" => EI_1,
        _ => return None,
    };
    Some(C64::new(v, 0.0))
}

/// An environment with every supported symbol and named constant bound.
pub fn standard_env(z: C64) -> EvalEnv {
    let mut env = EvalEnv::new(z);
    for name in SUPPORTED {
        env = env.with_function(*name, evaluator(name).unwrap());
    }
    for c in ["pi", "e", "gammaEuler", "Ei1"] {
        env = env.with_constant(c, constant_value(c).unwrap());
    }
    env
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trig_derivative_cycle() {
        let z = C64::new(0.3, 0.2);
        assert!((special_value("sin", 1, z).unwrap() - z.cos()).norm() < 1e-15);
        assert!((special_value("sin", 2, z).unwrap() + z.sin()).norm() < 1e-15);
        assert!((special_value("cos", 1, z).unwrap() + z.sin()).norm() < 1e-15);
        assert!((special_value("cosh", 1, z).unwrap() - z.sinh()).norm() < 1e-15);
    }

    #[test]
    fn poles_and_unsupported() {
        assert!(matches!(special_value("Gamma", 0, C64::new(0.0, 0.0)), Err(EvalError::PoleHit { .. })));
        assert!(matches!(special_value("K1", 0, C64::new(2.0005, 0.0)), Err(EvalError::PoleHit { .. })));
        assert!(matches!(special_value("zeta", 1, C64::new(2.0, 0.0)), Err(EvalError::Unsupported(_))));
        assert!(matches!(special_value("Rf", 0, C64::new(2.0, 0.0)), Err(EvalError::Unsupported(_))));
    }
}
