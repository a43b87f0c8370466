//! Canonical form: a reduced fraction of atom polynomials with a monic
//! denominator, rendered back as a tree.
//!
//! Rendering rules (the shape every simplified [`Expr`] has):
//! - a denominator that is a single monomial is folded into each numerator
//!   term as negative exponents (Laurent form);
//! - any other denominator `D` appears once, as the trailing factor `D^-1`;
//! - sums list terms in decreasing graded monomial order; products list a
//!   rational coefficient first, then atom powers in atom order.

use num_rational::BigRational;
use num_traits::One;

use super::elementary;
use super::poly::{gcd, Monomial, Poly};
use super::{Expr, Node};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct RatFunc {
    pub num: Poly,
    pub den: Poly,
}

impl RatFunc {
    fn poly(p: Poly) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    fn constant(q: BigRational) -> Self {
        Self::poly(Poly::constant(q))
    }

    /// Reduce by the gcd and make the denominator monic.
    fn new(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::poly(Poly::zero());
        }
        let (num, den) = if let Some((m, c)) = den.as_monomial() {
            // Monomial denominators only share monomial content with the numerator.
            let common = num.monomial_content().gcd(m);
            let den_m = m.div(&common).unwrap();
            let num = num.div_monomial(&common).unwrap().scale(&c.recip());
            (num, Poly::monomial(den_m, BigRational::one()))
        } else {
            let g = gcd(&num, &den);
            if g.is_one() {
                (num, den)
            } else {
                (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
            }
        };
        let lc = den.leading().map(|(_, c)| c.clone()).unwrap();
        if lc.is_one() {
            RatFunc { num, den }
        } else {
            let inv = lc.recip();
            RatFunc { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    fn add(&self, other: &RatFunc) -> RatFunc {
        if self.den == other.den {
            return Self::new(self.num.add(&other.num), self.den.clone());
        }
        if self.den.is_one() {
            return Self::new(self.num.mul(&other.den).add(&other.num), other.den.clone());
        }
        if other.den.is_one() {
            return Self::new(self.num.add(&other.num.mul(&self.den)), self.den.clone());
        }
        Self::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    fn mul(&self, other: &RatFunc) -> RatFunc {
        if self.num.is_zero() || other.num.is_zero() {
            return Self::poly(Poly::zero());
        }
        Self::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    fn inverse(&self) -> Option<RatFunc> {
        if self.num.is_zero() {
            return None;
        }
        Some(Self::new(self.den.clone(), self.num.clone()))
    }

    fn pow(&self, n: i64) -> Option<RatFunc> {
        let base = if n < 0 { self.inverse()? } else { self.clone() };
        let k = n.unsigned_abs() as u32;
        // Powers of a reduced fraction stay reduced.
        let mut out = RatFunc { num: base.num.pow(k), den: base.den.pow(k) };
        if k == 0 {
            out = Self::constant(BigRational::one());
        }
        Some(out)
    }
}

/// Convert a tree to a reduced fraction. Atoms are canonicalized on the way.
pub(crate) fn to_ratfunc(e: &Expr) -> RatFunc {
    match e.node() {
        Node::Num(q) => RatFunc::constant(q.clone()),
        Node::Const(_) | Node::Var | Node::Indet(_) => RatFunc::poly(Poly::atom(e.clone())),
        Node::Apply(f, a) => {
            let a = a.simplify();
            match elementary::fold_value(f, &a) {
                Some(v) => to_ratfunc(&v),
                None => RatFunc::poly(Poly::atom(Expr::apply(f.clone(), a))),
            }
        }
        Node::Deriv(f, k, a) => {
            let a = a.simplify();
            match elementary::derivative_marker(f, *k, &a) {
                Some(v) => to_ratfunc(&v),
                None => RatFunc::poly(Poly::atom(Expr::deriv(f.clone(), *k, a))),
            }
        }
        Node::Add(xs) => {
            let mut acc = RatFunc::poly(Poly::zero());
            for x in xs {
                acc = acc.add(&to_ratfunc(x));
            }
            acc
        }
        Node::Mul(xs) => {
            let mut acc = RatFunc::constant(BigRational::one());
            for x in xs {
                acc = acc.mul(&to_ratfunc(x));
                if acc.num.is_zero() {
                    break;
                }
            }
            acc
        }
        Node::Pow(b, n) => {
            let base = to_ratfunc(b);
            match base.pow(*n) {
                Some(r) => r,
                // 0^-n: kept as an opaque atom so that simplification stays total.
                None => RatFunc::poly(Poly::atom(Expr::pow(Expr::zero(), *n))),
            }
        }
    }
}

/// One Laurent term `c * m / d`, `d` a monomial.
fn term_expr(c: &BigRational, m: &Monomial, d: &Monomial) -> Expr {
    let common = m.gcd(d);
    let m = m.div(&common).unwrap();
    let d = d.div(&common).unwrap();
    let mut factors: Vec<(Expr, i64)> = m
        .factors()
        .iter()
        .map(|(a, e)| (a.clone(), i64::from(*e)))
        .chain(d.factors().iter().map(|(a, e)| (a.clone(), -i64::from(*e))))
        .collect();
    factors.sort_by(|x, y| x.0.cmp(&y.0));
    let mut out: Vec<Expr> = Vec::with_capacity(factors.len() + 1);
    if !c.is_one() || factors.is_empty() {
        out.push(Expr::rational(c.clone()));
    }
    out.extend(factors.into_iter().map(|(a, e)| Expr::pow(a, e)));
    Expr::mul(out)
}

fn poly_expr(p: &Poly, den: &Monomial) -> Expr {
    if p.is_zero() {
        return Expr::zero();
    }
    Expr::add(p.terms().rev().map(|(m, c)| term_expr(c, m, den)).collect())
}

pub(crate) fn from_ratfunc(r: &RatFunc) -> Expr {
    if let Some((m, _)) = r.den.as_monomial() {
        return poly_expr(&r.num, m);
    }
    // Split the monomial part off the denominator; the rest stays as D^-1.
    let dm = r.den.monomial_content();
    let rest = r.den.div_monomial(&dm).unwrap();
    let num = poly_expr(&r.num, &dm);
    let den = Expr::pow(poly_expr(&rest, &Monomial::one()), -1);
    match num.node() {
        Node::Mul(xs) => {
            let mut xs = xs.clone();
            xs.push(den);
            Expr::mul(xs)
        }
        _ if num.is_one() => den,
        _ => Expr::mul(vec![num, den]),
    }
}

impl Expr {
    /// Canonical form. Idempotent, total, and value-preserving wherever the
    /// input is defined.
    pub fn simplify(&self) -> Expr {
        from_ratfunc(&to_ratfunc(self))
    }

    /// Simplified `self - other` is the zero constant.
    pub fn equivalent(&self, other: &Expr) -> bool {
        (self - other).simplify().is_zero()
    }

    /// Numerator and denominator of the canonical fraction, each rendered as
    /// a polynomial expression.
    pub fn numer_denom(&self) -> (Expr, Expr) {
        let r = to_ratfunc(self);
        (
            poly_expr(&r.num, &Monomial::one()),
            poly_expr(&r.den, &Monomial::one()),
        )
    }

    /// Multiplicity of the polynomial `factor` in the canonical denominator.
    pub fn denominator_multiplicity(&self, factor: &Expr) -> u32 {
        let r = to_ratfunc(self);
        let f = to_ratfunc(factor);
        if !f.den.is_one() || f.num.as_constant().is_some() {
            return 0;
        }
        let mut den = r.den;
        let mut k = 0;
        while let Some(q) = den.div_exact(&f.num) {
            if q.len() == den.len() && q == den {
                break;
            }
            den = q;
            k += 1;
        }
        k
    }

    /// Is the canonical form a polynomial (trivial denominator) in its atoms?
    pub fn is_polynomial(&self) -> bool {
        to_ratfunc(self).den.is_one()
    }

    /// Degree of the canonical numerator in the atom `atom`, and whether the
    /// atom also occurs in the denominator.
    pub fn atom_degree(&self, atom: &Expr) -> (u32, bool) {
        let r = to_ratfunc(self);
        (r.num.degree_in(atom), r.den.degree_in(atom) > 0)
    }

    /// View a polynomial expression as a map from exponent to coefficient in
    /// the atom `atom`. Returns `None` if the atom occurs in a denominator.
    pub fn coefficients_in(&self, atom: &Expr) -> Option<Vec<Expr>> {
        let r = to_ratfunc(self);
        if r.den.degree_in(atom) > 0 {
            return None;
        }
        let den = from_ratfunc(&RatFunc { num: Poly::one(), den: r.den.clone() });
        Some(
            r.num
                .coefficients_in(atom)
                .iter()
                .map(|c| (poly_expr(c, &Monomial::one()) * &den).simplify())
                .collect(),
        )
    }

    /// Split the canonical form into `coefficient * prod u_k^e_k` terms.
    /// Returns `None` when an indeterminate occurs in the denominator.
    /// Exponent lists are sorted by index.
    pub fn split_indeterminates(&self) -> Option<Vec<(Vec<(u32, u32)>, Expr)>> {
        let r = to_ratfunc(self);
        if r.den.variables().iter().any(|v| matches!(v.node(), Node::Indet(_))) {
            return None;
        }
        let den = from_ratfunc(&RatFunc { num: Poly::one(), den: r.den.clone() });
        let mut groups: std::collections::BTreeMap<Vec<(u32, u32)>, Poly> = Default::default();
        for (m, c) in r.num.terms() {
            let mut key = Vec::new();
            let mut rest = Monomial::one();
            for (a, e) in m.factors() {
                match a.node() {
                    Node::Indet(k) => key.push((*k, *e)),
                    _ => rest = rest.mul(&Monomial::atom(a.clone(), *e)),
                }
            }
            key.sort();
            let entry = groups.entry(key).or_insert_with(Poly::zero);
            *entry = entry.add(&Poly::monomial(rest, c.clone()));
        }
        Some(
            groups
                .into_iter()
                .map(|(k, p)| (k, (poly_expr(&p, &Monomial::one()) * &den).simplify()))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        )
    }

    /// True when a canonical term carries a negative rational coefficient.
    pub(crate) fn leading_coefficient_negative(&self) -> bool {
        use num_traits::Signed;
        match self.node() {
            Node::Num(q) => q.is_negative(),
            Node::Mul(xs) => xs.first().and_then(|x| x.as_rational()).is_some_and(|q| q.is_negative()),
            _ => false,
        }
    }
}
