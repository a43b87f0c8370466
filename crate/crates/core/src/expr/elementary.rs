//! Built-in knowledge about elementary function symbols: first derivatives
//! and a few exact values. Everything else is an opaque symbol whose
//! derivatives stay as `D^k f` markers.

use super::Expr;

const ELEMENTARY: &[&str] = &["exp", "sin", "cos", "tan", "cot", "log", "sinh", "cosh"];

pub fn is_elementary(name: &str) -> bool {
    ELEMENTARY.contains(&name)
}

/// `f'(a)` for an elementary `f`, as an unsimplified tree.
pub(crate) fn first_derivative(f: &str, a: &Expr) -> Option<Expr> {
    let app = |g: &str| Expr::apply(g, a.clone());
    Some(match f {
        "exp" => app("exp"),
        "sin" => app("cos"),
        "cos" => -app("sin"),
        "tan" => Expr::one() + Expr::pow(app("tan"), 2),
        "cot" => -(Expr::one() + Expr::pow(app("cot"), 2)),
        "log" => a.recip(),
        "sinh" => app("cosh"),
        "cosh" => app("sinh"),
        _ => return None,
    })
}

/// Exact values at rational points that are forced to fold (`exp(0) = 1`).
pub(crate) fn fold_value(f: &str, a: &Expr) -> Option<Expr> {
    let q = a.as_rational()?;
    use num_traits::{One, Zero};
    match f {
        "exp" | "cos" | "cosh" if q.is_zero() => Some(Expr::one()),
        "sin" | "tan" | "sinh" if q.is_zero() => Some(Expr::zero()),
        "log" if q.is_one() => Some(Expr::zero()),
        _ => None,
    }
}

/// Rewrite `D^k f (a)` for elementary `f` into closed form.
pub(crate) fn derivative_marker(f: &str, k: u32, a: &Expr) -> Option<Expr> {
    if k == 0 {
        return Some(Expr::apply(f, a.clone()));
    }
    if !is_elementary(f) {
        return None;
    }
    let mut d = Expr::call(f);
    for _ in 0..k {
        d = d.differentiate();
    }
    Some(d.substitute(&Expr::var(), a))
}
