//! Structural differentiation and substitution.

use super::elementary;
use super::{Expr, Node};

/// What a derivative is taken with respect to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Wrt {
    /// The independent variable `z`. Indeterminates follow `D u_k = u_{k+1}`.
    Var,
    /// A named constant or parameter, treated as an independent variable.
    Symbol(String),
}

impl Expr {
    /// `d/dz`, simplified.
    pub fn differentiate(&self) -> Expr {
        self.derive(&Wrt::Var)
    }

    /// Partial derivative, simplified.
    pub fn derive(&self, wrt: &Wrt) -> Expr {
        self.derive_raw(wrt).simplify()
    }

    fn depends_on(&self, wrt: &Wrt) -> bool {
        match wrt {
            Wrt::Var => self.depends_on_var() || self.max_indet().is_some(),
            Wrt::Symbol(s) => self.constants().contains(s),
        }
    }

    fn derive_raw(&self, wrt: &Wrt) -> Expr {
        if !self.depends_on(wrt) {
            return Expr::zero();
        }
        match self.node() {
            Node::Num(_) => Expr::zero(),
            Node::Const(c) => match wrt {
                Wrt::Symbol(s) if s == c => Expr::one(),
                _ => Expr::zero(),
            },
            Node::Var => Expr::one(),
            Node::Indet(k) => Expr::indet(k + 1),
            Node::Apply(f, a) => {
                let outer = elementary::first_derivative(f, a)
                    .unwrap_or_else(|| Expr::deriv(f.clone(), 1, a.clone()));
                outer * a.derive_raw(wrt)
            }
            Node::Deriv(f, k, a) => Expr::deriv(f.clone(), k + 1, a.clone()) * a.derive_raw(wrt),
            Node::Add(xs) => Expr::add(xs.iter().map(|x| x.derive_raw(wrt)).collect()),
            Node::Mul(xs) => {
                let mut terms = Vec::with_capacity(xs.len());
                for i in 0..xs.len() {
                    let dx = xs[i].derive_raw(wrt);
                    if dx.is_zero() {
                        continue;
                    }
                    let mut factors: Vec<Expr> = Vec::with_capacity(xs.len());
                    for (j, x) in xs.iter().enumerate() {
                        factors.push(if i == j { dx.clone() } else { x.clone() });
                    }
                    terms.push(Expr::mul(factors));
                }
                Expr::add(terms)
            }
            Node::Pow(b, n) => Expr::mul(vec![
                Expr::int(*n),
                Expr::pow(b.clone(), n - 1),
                b.derive_raw(wrt),
            ]),
        }
    }

    /// `k`-th derivative in `z`.
    pub fn nth_derivative(&self, k: u32) -> Expr {
        let mut d = self.simplify();
        for _ in 0..k {
            d = d.differentiate();
        }
        d
    }

    /// Replace every subtree equal to `target` (compared after
    /// simplification) by `replacement`. Simplified result.
    pub fn substitute(&self, target: &Expr, replacement: &Expr) -> Expr {
        let target = target.simplify();
        let repl = replacement.simplify();
        self.simplify()
            .rewrite(&mut |e| (e == &target).then(|| repl.clone()))
            .simplify()
    }
}
