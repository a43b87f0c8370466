//! Sparse multivariate polynomials over Q whose variables are expression atoms.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::Expr;

/// Power product of atoms, sorted by atom, all exponents positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Expr, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn atom(a: Expr, e: u32) -> Self {
        if e == 0 {
            Self::one()
        } else {
            Monomial(vec![(a, e)])
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn factors(&self) -> &[(Expr, u32)] {
        &self.0
    }

    pub fn exponent(&self, v: &Expr) -> u32 {
        self.0
            .binary_search_by(|(a, _)| a.cmp(v))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// `self / other` when every exponent of `other` is covered.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for (a, e) in &self.0 {
            if j < other.0.len() && &other.0[j].0 == a {
                let f = other.0[j].1;
                j += 1;
                match e.cmp(&f) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((a.clone(), e - f)),
                }
            } else if j < other.0.len() && &other.0[j].0 < a {
                return None;
            } else {
                out.push((a.clone(), *e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    /// Componentwise minimum of exponents.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .filter_map(|(a, e)| {
                    let f = other.exponent(a);
                    (f > 0).then(|| (a.clone(), (*e).min(f)))
                })
                .collect(),
        )
    }

    fn without(&self, v: &Expr) -> Monomial {
        Monomial(self.0.iter().filter(|(a, _)| a != v).cloned().collect())
    }
}

/// Graded order: total degree first, then lexicographic with smaller atoms
/// weighing more.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let (mut i, mut j) = (0, 0);
            loop {
                match (self.0.get(i), other.0.get(j)) {
                    (None, None) => return Ordering::Equal,
                    (Some(_), None) => return Ordering::Greater,
                    (None, Some(_)) => return Ordering::Less,
                    (Some((a, e)), Some((b, f))) => match a.cmp(b) {
                        Ordering::Less => return Ordering::Greater,
                        Ordering::Greater => return Ordering::Less,
                        Ordering::Equal => {
                            if e != f {
                                return e.cmp(f);
                            }
                            i += 1;
                            j += 1;
                        }
                    },
                }
            }
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(q: BigRational) -> Self {
        let mut p = Poly::zero();
        if !q.is_zero() {
            p.terms.insert(Monomial::one(), q);
        }
        p
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn monomial(m: Monomial, c: BigRational) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn atom(a: Expr) -> Self {
        Self::monomial(Monomial::atom(a, 1), BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn as_monomial(&self) -> Option<(&Monomial, &BigRational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, q: &BigRational) -> Poly {
        if q.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * q)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, q: &BigRational) -> Poly {
        if q.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(n, c)| (n.mul(m), c * q)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            for (n, d) in &other.terms {
                out.add_term(m.mul(n), c * d);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn variables(&self) -> BTreeSet<Expr> {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(a, _)| a.clone()))
            .collect()
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::one();
        };
        it.fold(first.clone(), |acc, m| acc.gcd(m))
    }

    pub fn div_monomial(&self, m: &Monomial) -> Option<Poly> {
        let mut out = Poly::zero();
        for (n, c) in &self.terms {
            out.terms.insert(n.div(m)?, c.clone());
        }
        Some(out)
    }

    /// Make the leading coefficient 1.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some((_, c)) if !c.is_one() => self.scale(&c.recip()),
            _ => self.clone(),
        }
    }

    /// Exact quotient, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        assert!(!d.is_zero(), "division by the zero polynomial");
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        let (lm, lc) = d.leading().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((m, c)) = rem.leading().map(|(m, c)| (m.clone(), c.clone())) {
            let qm = m.div(&lm)?;
            let qc = c / &lc;
            rem = rem.sub(&d.mul_monomial(&qm, &qc));
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    pub fn degree_in(&self, v: &Expr) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    /// Coefficients with respect to `v`, indexed by power.
    pub fn coefficients_in(&self, v: &Expr) -> Vec<Poly> {
        let mut out = vec![Poly::zero(); self.degree_in(v) as usize + 1];
        for (m, c) in &self.terms {
            let e = m.exponent(v) as usize;
            out[e].add_term(m.without(v), c.clone());
        }
        out
    }

    fn leading_coefficient_in(&self, v: &Expr) -> Poly {
        self.coefficients_in(v).pop().unwrap_or_default()
    }

    /// Content with respect to `v`: gcd of all coefficients in `v`.
    fn content_in(&self, v: &Expr) -> Poly {
        let mut g = Poly::zero();
        for c in self.coefficients_in(v) {
            if c.is_zero() {
                continue;
            }
            g = gcd(&g, &c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    fn primitive_part_in(&self, v: &Expr) -> Poly {
        let c = self.content_in(v);
        if c.is_zero() {
            return Poly::zero();
        }
        self.div_exact(&c).expect("content divides")
    }

    /// Scaled to integer coefficients with no common factor. Pseudo-remainders
    /// grow exponentially without this.
    fn integer_primitive(&self) -> Poly {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            return self.clone();
        }
        self.scale(&BigRational::new(den, num))
    }

    /// Pseudo-remainder of `self` by `b` as polynomials in `v`.
    fn pseudo_remainder(&self, b: &Poly, v: &Expr) -> Poly {
        let n = b.degree_in(v);
        let lcb = b.leading_coefficient_in(v);
        let mut r = self.clone();
        let mut steps = 0u32;
        let m = self.degree_in(v);
        while !r.is_zero() && r.degree_in(v) >= n {
            let dr = r.degree_in(v);
            let lr = r.leading_coefficient_in(v);
            let shift = Monomial::atom(v.clone(), dr - n);
            r = r.mul(&lcb).sub(&lr.mul(b).mul_monomial(&shift, &BigRational::one()));
            steps += 1;
        }
        let total = (m + 1).saturating_sub(n);
        if steps < total {
            r = r.mul(&lcb.pow(total - steps));
        }
        r
    }
}

/// Monic greatest common divisor over Q.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.as_constant().is_some() || b.as_constant().is_some() {
        return Poly::one();
    }
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let mg = Poly::monomial(ma.gcd(&mb), BigRational::one());
    let a = a.div_monomial(&ma).unwrap();
    let b = b.div_monomial(&mb).unwrap();
    if a.as_constant().is_some() || b.as_constant().is_some() {
        return mg;
    }
    if a.len() == 1 || b.len() == 1 {
        // Monomial content was stripped, so a remaining monomial is constant.
        return mg;
    }
    let va = a.variables();
    let vb = b.variables();
    let g = match va.intersection(&vb).last().cloned() {
        None => Poly::one(),
        Some(v) => {
            let only_a = va.iter().find(|x| !vb.contains(*x)).cloned();
            let only_b = vb.iter().find(|x| !va.contains(*x)).cloned();
            if let Some(w) = only_a {
                gcd(&a.content_in(&w), &b)
            } else if let Some(w) = only_b {
                gcd(&a, &b.content_in(&w))
            } else {
                let ca = a.content_in(&v);
                let cb = b.content_in(&v);
                let c = gcd(&ca, &cb);
                let pa = a.div_exact(&ca).unwrap();
                let pb = b.div_exact(&cb).unwrap();
                c.mul(&primitive_gcd(pa, pb, &v))
            }
        }
    };
    mg.mul(&g).monic()
}

/// Gcd of two polynomials primitive in `v`, by the primitive remainder sequence.
fn primitive_gcd(a: Poly, b: Poly, v: &Expr) -> Poly {
    let (mut p, mut q) = if a.degree_in(v) >= b.degree_in(v) { (a, b) } else { (b, a) };
    loop {
        if q.is_zero() {
            return p.primitive_part_in(v);
        }
        if q.degree_in(v) == 0 {
            return Poly::one();
        }
        let r = p.pseudo_remainder(&q, v);
        p = q;
        q = r.primitive_part_in(v).integer_primitive();
    }
}
