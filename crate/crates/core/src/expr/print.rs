//! Text rendering in the same grammar the parser accepts.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::{Expr, Node};

// Precedence levels of the printed grammar.
const SUM: u8 = 1;
const PRODUCT: u8 = 2;
const ATOM: u8 = 4;

fn paren(f: &mut fmt::Formatter<'_>, open: bool, body: impl FnOnce(&mut fmt::Formatter<'_>) -> fmt::Result) -> fmt::Result {
    if open {
        f.write_str("(")?;
    }
    body(f)?;
    if open {
        f.write_str(")")?;
    }
    Ok(())
}

fn precedence(e: &Expr) -> u8 {
    match e.node() {
        Node::Add(_) => SUM,
        Node::Mul(_) => PRODUCT,
        Node::Num(q) if !q.is_integer() || q.is_negative() => PRODUCT,
        Node::Pow(_, n) if *n < 0 => PRODUCT,
        Node::Pow(..) => PRODUCT + 1,
        _ => ATOM,
    }
}

fn write_int(f: &mut fmt::Formatter<'_>, n: &BigInt) -> fmt::Result {
    write!(f, "{n}")
}

/// Split a product into sign, numerator factors and denominator factors.
fn split_product(factors: &[Expr]) -> (bool, Vec<Expr>, Vec<Expr>) {
    let mut negative = false;
    let mut num = Vec::new();
    let mut den = Vec::new();
    for x in factors {
        match x.node() {
            Node::Num(q) => {
                negative ^= q.is_negative();
                let q = q.abs();
                if !q.numer().is_one() {
                    num.push(Expr::rational(BigRational::from_integer(q.numer().clone())));
                }
                if !q.denom().is_one() {
                    den.push(Expr::rational(BigRational::from_integer(q.denom().clone())));
                }
            }
            Node::Pow(b, n) if *n < 0 => den.push(Expr::pow(b.clone(), -n)),
            _ => num.push(x.clone()),
        }
    }
    (negative, num, den)
}

fn write_factor_list(f: &mut fmt::Formatter<'_>, xs: &[Expr]) -> fmt::Result {
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            f.write_str("*")?;
        }
        write_at(f, x, PRODUCT + 1)?;
    }
    Ok(())
}

fn write_product(f: &mut fmt::Formatter<'_>, factors: &[Expr]) -> fmt::Result {
    let (negative, num, den) = split_product(factors);
    if negative {
        f.write_str("-")?;
    }
    if num.is_empty() {
        f.write_str("1")?;
    } else {
        write_factor_list(f, &num)?;
    }
    if !den.is_empty() {
        f.write_str("/")?;
        let group = den.len() > 1;
        paren(f, group, |f| write_factor_list(f, &den))?;
    }
    Ok(())
}

fn write_at(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
    paren(f, precedence(e) < min, |f| write_node(f, e))
}

fn write_node(f: &mut fmt::Formatter<'_>, e: &Expr) -> fmt::Result {
    match e.node() {
        Node::Num(q) => {
            if q.is_integer() {
                write_int(f, q.numer())
            } else {
                write_int(f, q.numer())?;
                f.write_str("/")?;
                write_int(f, q.denom())
            }
        }
        Node::Const(c) => f.write_str(c),
        Node::Var => f.write_str(super::VAR_NAME),
        Node::Indet(k) => write!(f, "u{k}"),
        Node::Apply(g, a) => write!(f, "{g}({a})"),
        Node::Deriv(g, k, a) => write!(f, "D{k}[{g}]({a})"),
        Node::Add(xs) => {
            for (i, x) in xs.iter().enumerate() {
                if i == 0 {
                    write_at(f, x, SUM)?;
                } else if x.leading_coefficient_negative() {
                    f.write_str(" - ")?;
                    write_at(f, &negated(x), PRODUCT)?;
                } else {
                    f.write_str(" + ")?;
                    write_at(f, x, PRODUCT)?;
                }
            }
            Ok(())
        }
        Node::Mul(xs) => write_product(f, xs),
        Node::Pow(_, n) if *n < 0 => write_product(f, std::slice::from_ref(e)),
        Node::Pow(b, n) => {
            write_at(f, b, ATOM)?;
            write!(f, "^{n}")
        }
    }
}

/// Flip the sign of the leading rational coefficient of a term.
fn negated(x: &Expr) -> Expr {
    match x.node() {
        Node::Num(q) => Expr::rational(-q),
        Node::Mul(xs) => {
            let mut xs = xs.clone();
            let q = xs[0].as_rational().cloned().expect("leading coefficient");
            if (-&q).is_one() {
                xs.remove(0);
            } else {
                xs[0] = Expr::rational(-q);
            }
            Expr::mul(xs)
        }
        _ => x.clone(),
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_node(f, self)
    }
}

/// Expressions serialize as their canonical text.
impl serde::Serialize for Expr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
