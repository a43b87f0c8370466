//! Differential polynomials `f(z, u0, ..., un)` with [`Expr`] coefficients.
//!
//! `u_k` stands for `D^k X`. The derivation acts on coefficients through
//! [`Expr::differentiate`] and on indeterminates by `D u_k = u_{k+1}`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::expr::{Expr, Node, VAR_NAME};

/// Power product `prod u_k^e_k`, sorted by index, exponents positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct DiffMonomial(Vec<(u32, u32)>);

impl DiffMonomial {
    pub fn one() -> Self {
        DiffMonomial(Vec::new())
    }

    pub fn indet(k: u32) -> Self {
        DiffMonomial(vec![(k, 1)])
    }

    /// Build from `(index, exponent)` pairs in any order; zero exponents dropped.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, u32)>) -> Self {
        let mut map: BTreeMap<u32, u32> = BTreeMap::new();
        for (k, e) in pairs {
            *map.entry(k).or_default() += e;
        }
        DiffMonomial(map.into_iter().filter(|(_, e)| *e > 0).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn max_index(&self) -> Option<u32> {
        self.0.last().map(|(k, _)| *k)
    }

    pub fn exponent(&self, k: u32) -> u32 {
        self.0.iter().find(|(j, _)| *j == k).map_or(0, |(_, e)| *e)
    }

    pub fn mul(&self, other: &DiffMonomial) -> DiffMonomial {
        Self::from_pairs(self.0.iter().chain(other.0.iter()).copied())
    }

    /// `(e_k, m / u_k * u_{k+1})` for each `k` present: the Leibniz expansion of `D m`.
    fn derivative_terms(&self) -> Vec<(u32, DiffMonomial)> {
        self.0
            .iter()
            .map(|&(k, e)| {
                let pairs = self
                    .0
                    .iter()
                    .map(|&(j, f)| if j == k { (j, f - 1) } else { (j, f) })
                    .chain(std::iter::once((k + 1, 1)));
                (e, Self::from_pairs(pairs))
            })
            .collect()
    }

    /// Substitute `u_k -> img(k)`.
    fn eval_with(&self, img: &mut dyn FnMut(u32) -> Expr) -> Expr {
        Expr::mul(self.0.iter().map(|&(k, e)| Expr::pow(img(k), i64::from(e))).collect())
    }
}

impl Ord for DiffMonomial {
    /// Graded: total degree first, then exponents compared from the highest
    /// index down.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let top = self.max_index().max(other.max_index()).unwrap_or(0);
            for k in (0..=top).rev() {
                match self.exponent(k).cmp(&other.exponent(k)) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for DiffMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DiffMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        for (i, (k, e)) in self.0.iter().rev().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "u{k}")?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// Element of `L{X}`: finitely many monomials with nonzero simplified coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct DiffPoly {
    terms: BTreeMap<DiffMonomial, Expr>,
}

impl DiffPoly {
    pub fn zero() -> Self {
        DiffPoly::default()
    }

    pub fn constant(c: Expr) -> Self {
        Self::term(DiffMonomial::one(), c)
    }

    /// `u_k`.
    pub fn indet(k: u32) -> Self {
        Self::term(DiffMonomial::indet(k), Expr::one())
    }

    pub fn term(m: DiffMonomial, c: Expr) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    fn add_term(&mut self, m: DiffMonomial, c: Expr) {
        let sum = match self.terms.remove(&m) {
            Some(old) => (old + c).simplify(),
            None => c.simplify(),
        };
        if !sum.is_zero() {
            self.terms.insert(m, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&DiffMonomial, &Expr)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &DiffMonomial) -> Expr {
        self.terms.get(m).cloned().unwrap_or_else(Expr::zero)
    }

    /// Largest `k` with `u_k` present; `-1` for elements of the coefficient field.
    pub fn ord(&self) -> i64 {
        self.terms.keys().filter_map(|m| m.max_index()).max().map_or(-1, i64::from)
    }

    /// Total degree in the indeterminates, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn add(&self, other: &DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> DiffPoly {
        self.map_coefficients(|c| -c)
    }

    pub fn sub(&self, other: &DiffPoly) -> DiffPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &DiffPoly) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &Expr) -> DiffPoly {
        self.map_coefficients(|x| x * c)
    }

    pub fn pow(&self, n: u32) -> DiffPoly {
        let mut out = DiffPoly::constant(Expr::one());
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Apply `f` to every coefficient (results are simplified, zeros dropped).
    pub fn map_coefficients(&self, mut f: impl FnMut(&Expr) -> Expr) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// Formal total derivative.
    pub fn derive(&self) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.differentiate());
            for (e, dm) in m.derivative_terms() {
                out.add_term(dm, Expr::int(i64::from(e)) * c);
            }
        }
        out
    }

    /// Substitute `u_k -> img(k)` and return the (unsimplified) sum.
    pub fn substitute_indets(&self, mut img: impl FnMut(u32) -> Expr) -> Expr {
        Expr::add(
            self.terms
                .iter()
                .rev()
                .map(|(m, c)| c * m.eval_with(&mut img))
                .collect(),
        )
    }

    /// `f(a) = f(z, a, Da, ..., D^n a)`, simplified.
    pub fn apply(&self, a: &Expr) -> Expr {
        let mut derivs: Vec<Expr> = vec![a.simplify()];
        self.substitute_indets(|k| {
            while derivs.len() <= k as usize {
                let next = derivs.last().unwrap().differentiate();
                derivs.push(next);
            }
            derivs[k as usize].clone()
        })
        .simplify()
    }

    /// `f` with `u_k -> D^k[name](z)`, the form used for numeric evaluation.
    pub fn apply_symbol(&self, name: &str) -> Expr {
        self.substitute_indets(|k| Expr::deriv(name, k, Expr::var())).simplify()
    }

    /// The expression with `u_k` as [`Node::Indet`] leaves, simplified.
    pub fn to_expr(&self) -> Expr {
        self.substitute_indets(Expr::indet).simplify()
    }

    /// Read a polynomial in `u0, u1, ...` from an expression. Fails if an
    /// indeterminate sits in a denominator or inside a function argument.
    pub fn from_expr(e: &Expr) -> Result<DiffPoly, String> {
        let bad_arg = e.function_atoms().iter().chain(e.constant_args().iter()).any(|a| {
            a.as_application().is_some_and(|(_, _, arg)| arg.max_indet().is_some())
        });
        if bad_arg {
            return Err("indeterminate inside a function argument".into());
        }
        let parts = e
            .split_indeterminates()
            .ok_or_else(|| "indeterminate in a denominator".to_string())?;
        let mut out = DiffPoly::zero();
        for (pairs, c) in parts {
            out.add_term(DiffMonomial::from_pairs(pairs), c);
        }
        Ok(out)
    }

    /// Read a polynomial in the function symbol `x`: `x(z) -> u0`,
    /// `D^k[x](z) -> u_k`. Other symbols become coefficients.
    pub fn from_expr_in(e: &Expr, x: &str) -> Result<DiffPoly, String> {
        let mut bad: Option<String> = None;
        let replaced = e.rewrite(&mut |n| match n.node() {
            Node::Apply(g, a) | Node::Deriv(g, _, a) if g == x => {
                if !matches!(a.node(), Node::Var) {
                    bad = Some(format!("`{x}` applied at `{a}`, expected `{VAR_NAME}`"));
                    return None;
                }
                let (_, k, _) = n.as_application().unwrap();
                Some(Expr::indet(k))
            }
            _ => None,
        });
        if let Some(msg) = bad {
            return Err(msg);
        }
        Self::from_expr(&replaced)
    }
}

impl Expr {
    /// Applications whose argument is free of `z` (complement of
    /// [`Expr::function_atoms`]).
    pub(crate) fn constant_args(&self) -> Vec<Expr> {
        let mut out = Vec::new();
        fn walk(e: &Expr, out: &mut Vec<Expr>) {
            if let Some((_, _, a)) = e.as_application() {
                if !a.depends_on_var() {
                    out.push(e.clone());
                }
            }
            for c in e.children() {
                walk(c, out);
            }
        }
        walk(self, &mut out);
        out
    }
}

fn needs_parens(c: &Expr) -> bool {
    matches!(c.node(), Node::Add(_))
}

impl fmt::Display for DiffPoly {
    /// Terms in decreasing monomial order; the output parses back with
    /// [`crate::syntax::parse_poly`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = !needs_parens(c) && c.leading_coefficient_negative();
            let c = if negative { (-c).simplify() } else { c.clone() };
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                if needs_parens(&c) {
                    write!(f, "({c})")?;
                } else {
                    write!(f, "{c}")?;
                }
            } else if c.is_one() {
                write!(f, "{m}")?;
            } else if needs_parens(&c) {
                write!(f, "({c})*{m}")?;
            } else {
                write!(f, "{c}*{m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_expr, parse_poly};

    fn p(s: &str) -> DiffPoly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn ring_arithmetic() {
        assert_eq!(p("u1 - u0").add(&p("u0")), p("u1"));
        assert_eq!(p("u0").mul(&p("u0")).to_string(), "u0^2");
        assert_eq!(p("u1 - u0").mul(&p("u1 + u0")), p("u1^2 - u0^2"));
    }

    #[test]
    fn order() {
        assert_eq!(p("u1 - u0").ord(), 1);
        assert_eq!(p("z^2 + 1").ord(), -1);
        assert_eq!(p("u3^2*u0 + z*u2").ord(), 3);
        assert_eq!(DiffPoly::zero().ord(), -1);
    }

    #[test]
    fn derivation() {
        assert_eq!(p("u0").derive(), p("u1"));
        assert_eq!(p("z*u0").derive(), p("u0 + z*u1"));
        assert_eq!(p("u0^2").derive(), p("2*u0*u1"));
    }

    #[test]
    fn application() {
        assert!(p("u1 - u0").apply(&parse_expr("exp(z)").unwrap()).is_zero());
        let z2 = parse_expr("z^2").unwrap();
        assert_eq!(p("u0").apply(&z2), z2);
    }

    #[test]
    fn witness_in_named_symbol() {
        let e = crate::syntax::parse_expr_raw("D2[x](z)*x(z) - D1[x](z)^2 - y(z)*x(z)^2").unwrap();
        let g = DiffPoly::from_expr_in(&e, "x").unwrap();
        assert_eq!(g.ord(), 2);
        assert_eq!(g.coefficient(&DiffMonomial::from_pairs([(0, 2)])).to_string(), "-y(z)");
        assert_eq!(g, p("u2*u0 - u1^2 - y(z)*u0^2"));
    }

    #[test]
    fn display_is_grlex_descending() {
        assert_eq!(p("u0 + u1^2 + u2*u0 + 3").to_string(), "u2*u0 + u1^2 + u0 + 3");
        assert_eq!(p("-u1 + (z + 1)*u0").to_string(), "-u1 + (z + 1)*u0");
    }

    #[test]
    fn rejects_non_polynomial_input() {
        assert!(parse_poly("1/u0").is_err());
        assert!(parse_poly("sin(u0)").is_err());
    }
}
