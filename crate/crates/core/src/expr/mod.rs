//! Immutable symbolic expressions over the rationals in one variable `z`.
//!
//! An [`Expr`] is a reference-counted tree. Constructors such as [`Expr::add`]
//! only assemble nodes; [`Expr::simplify`] maps any tree to its canonical form,
//! a reduced quotient of polynomials in the expression's atoms (see
//! [`canon`]). Canonical forms compare equal exactly when the underlying
//! rational functions agree, so identity checks are plain `==` on simplified
//! values.

mod canon;
mod diff;
mod elementary;
mod eval;
mod poly;
mod print;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use diff::Wrt;
pub use elementary::is_elementary;
pub use eval::{C64, EvalEnv, EvalError, Evaluator, POLE_RADIUS};

/// Name of the single independent variable.
pub const VAR_NAME: &str = "z";

/// One node of an expression tree.
///
/// Variant order is the first key of the total node order used by canonical
/// forms; the derived `Ord` then compares symbol names and children.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Node {
    Num(BigRational),
    /// Named constant (`pi`, `e`, `gammaEuler`, `Ei1`) or free parameter (`k`, `x0`, ...).
    Const(String),
    Var,
    /// Differential indeterminate `u_k`, standing for `D^k X`.
    Indet(u32),
    Apply(String, Expr),
    /// `D^k f` evaluated at the argument. Only ever applied to a function symbol.
    Deriv(String, u32, Expr),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Pow(Expr, i64),
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Expr(Arc<Node>);

impl Expr {
    pub fn from_node(node: Node) -> Self {
        Expr(Arc::new(node))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn rational(q: BigRational) -> Self {
        Self::from_node(Node::Num(q))
    }

    pub fn int(n: i64) -> Self {
        Self::rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Self::rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn var() -> Self {
        Self::from_node(Node::Var)
    }

    pub fn constant(name: impl Into<String>) -> Self {
        Self::from_node(Node::Const(name.into()))
    }

    pub fn indet(k: u32) -> Self {
        Self::from_node(Node::Indet(k))
    }

    pub fn apply(f: impl Into<String>, arg: Expr) -> Self {
        Self::from_node(Node::Apply(f.into(), arg))
    }

    /// `D^k f (arg)`; `k = 0` is plain application.
    pub fn deriv(f: impl Into<String>, k: u32, arg: Expr) -> Self {
        if k == 0 {
            Self::apply(f, arg)
        } else {
            Self::from_node(Node::Deriv(f.into(), k, arg))
        }
    }

    /// Shorthand for `f(z)`.
    pub fn call(f: impl Into<String>) -> Self {
        Self::apply(f, Self::var())
    }

    pub fn add(terms: Vec<Expr>) -> Self {
        match terms.len() {
            0 => Self::zero(),
            1 => terms.into_iter().next().unwrap(),
            _ => Self::from_node(Node::Add(terms)),
        }
    }

    pub fn mul(factors: Vec<Expr>) -> Self {
        match factors.len() {
            0 => Self::one(),
            1 => factors.into_iter().next().unwrap(),
            _ => Self::from_node(Node::Mul(factors)),
        }
    }

    pub fn pow(base: Expr, exp: i64) -> Self {
        match exp {
            0 => Self::one(),
            1 => base,
            _ => Self::from_node(Node::Pow(base, exp)),
        }
    }

    pub fn recip(&self) -> Self {
        Self::pow(self.clone(), -1)
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self.node() {
            Node::Num(q) => Some(q),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_rational().is_some_and(|q| q.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|q| q.is_one())
    }

    /// True for the leaf kinds and applications: the things canonical
    /// polynomials are built over.
    pub fn is_atom(&self) -> bool {
        !matches!(self.node(), Node::Num(_) | Node::Add(_) | Node::Mul(_) | Node::Pow(..))
    }

    /// Does the variable `z` occur anywhere in the tree?
    pub fn depends_on_var(&self) -> bool {
        self.any(&|n| matches!(n, Node::Var))
    }

    pub fn contains(&self, target: &Expr) -> bool {
        if self == target {
            return true;
        }
        self.children().iter().any(|c| c.contains(target))
    }

    fn any(&self, pred: &dyn Fn(&Node) -> bool) -> bool {
        pred(self.node()) || self.children().iter().any(|c| c.any(pred))
    }

    pub fn children(&self) -> Vec<&Expr> {
        match self.node() {
            Node::Num(_) | Node::Const(_) | Node::Var | Node::Indet(_) => vec![],
            Node::Apply(_, a) | Node::Deriv(_, _, a) => vec![a],
            Node::Add(xs) | Node::Mul(xs) => xs.iter().collect(),
            Node::Pow(b, _) => vec![b],
        }
    }

    /// Function symbols applied anywhere in the tree (including inside
    /// derivative markers).
    pub fn function_symbols(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_functions(&mut out);
        out
    }

    fn collect_functions(&self, out: &mut BTreeSet<String>) {
        if let Node::Apply(f, _) | Node::Deriv(f, _, _) = self.node() {
            out.insert(f.clone());
        }
        for c in self.children() {
            c.collect_functions(out);
        }
    }

    /// Named constants and parameters occurring in the tree.
    pub fn constants(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_constants(&mut out);
        out
    }

    fn collect_constants(&self, out: &mut BTreeSet<String>) {
        if let Node::Const(c) = self.node() {
            out.insert(c.clone());
        }
        for c in self.children() {
            c.collect_constants(out);
        }
    }

    /// Largest `k` with `u_k` present, if any indeterminate occurs.
    pub fn max_indet(&self) -> Option<u32> {
        let own = match self.node() {
            Node::Indet(k) => Some(*k),
            _ => None,
        };
        self.children().iter().filter_map(|c| c.max_indet()).chain(own).max()
    }

    /// Maximal application / derivative-marker subterms whose argument
    /// depends on `z`. These are the "transcendental atoms" the engine reasons
    /// about; everything else in a canonical expression is field arithmetic
    /// over `z` and constants.
    pub fn function_atoms(&self) -> BTreeSet<Expr> {
        let mut out = BTreeSet::new();
        self.collect_function_atoms(&mut out);
        out
    }

    fn collect_function_atoms(&self, out: &mut BTreeSet<Expr>) {
        match self.node() {
            Node::Apply(_, a) | Node::Deriv(_, _, a) => {
                if a.depends_on_var() {
                    out.insert(self.clone());
                }
            }
            _ => {
                for c in self.children() {
                    c.collect_function_atoms(out);
                }
            }
        }
    }

    /// Head symbol, order and argument of an application or derivative marker.
    pub fn as_application(&self) -> Option<(&str, u32, &Expr)> {
        match self.node() {
            Node::Apply(f, a) => Some((f.as_str(), 0, a)),
            Node::Deriv(f, k, a) => Some((f.as_str(), *k, a)),
            _ => None,
        }
    }

    /// Rebuild the tree bottom-up, giving `f` a chance to replace each node
    /// after its children were rewritten. The result is not simplified.
    pub fn rewrite(&self, f: &mut dyn FnMut(&Expr) -> Option<Expr>) -> Expr {
        let rebuilt = match self.node() {
            Node::Num(_) | Node::Const(_) | Node::Var | Node::Indet(_) => self.clone(),
            Node::Apply(g, a) => Expr::apply(g.clone(), a.rewrite(f)),
            Node::Deriv(g, k, a) => Expr::deriv(g.clone(), *k, a.rewrite(f)),
            Node::Add(xs) => Expr::add(xs.iter().map(|x| x.rewrite(f)).collect()),
            Node::Mul(xs) => Expr::mul(xs.iter().map(|x| x.rewrite(f)).collect()),
            Node::Pow(b, n) => Expr::pow(b.rewrite(f), *n),
        };
        f(&rebuilt).unwrap_or(rebuilt)
    }

    /// Rename every occurrence of function symbol `from` (applications and
    /// derivative markers). Simplified result.
    pub fn rename_function(&self, from: &str, to: &str) -> Expr {
        self.rewrite(&mut |e| match e.node() {
            Node::Apply(g, a) if g == from => Some(Expr::apply(to, a.clone())),
            Node::Deriv(g, k, a) if g == from => Some(Expr::deriv(to, *k, a.clone())),
            _ => None,
        })
        .simplify()
    }

    /// Replace each application `name(arg)` by `template` with `z` bound to
    /// `arg`. Simplified result.
    pub fn instantiate_function(&self, name: &str, template: &Expr) -> Expr {
        self.rewrite(&mut |e| match e.node() {
            Node::Apply(g, a) if g == name => Some(template.substitute(&Expr::var(), a)),
            _ => None,
        })
        .simplify()
    }

    pub fn to_f64(q: &BigRational) -> f64 {
        use num_traits::ToPrimitive;
        q.to_f64().unwrap_or_else(|| {
            if q.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        })
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({self})")
    }
}

macro_rules! bin_op {
    ($trait:ident, $method:ident, $build:expr) => {
        impl std::ops::$trait<Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                $build(self, rhs)
            }
        }
        impl std::ops::$trait<&Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                $build(self.clone(), rhs.clone())
            }
        }
        impl std::ops::$trait<&Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                $build(self, rhs.clone())
            }
        }
        impl std::ops::$trait<Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                $build(self.clone(), rhs)
            }
        }
    };
}

bin_op!(Add, add, |a, b| Expr::add(vec![a, b]));
bin_op!(Sub, sub, |a, b: Expr| Expr::add(vec![a, -b]));
bin_op!(Mul, mul, |a, b| Expr::mul(vec![a, b]));
bin_op!(Div, div, |a, b: Expr| Expr::mul(vec![a, b.recip()]));

impl std::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::mul(vec![Expr::int(-1), self])
    }
}

impl std::ops::Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -self.clone()
    }
}

#[cfg(test)]
mod tests;
