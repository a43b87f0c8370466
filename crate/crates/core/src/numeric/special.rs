//! Special functions on the complex plane: Gamma and its derivatives,
//! polygamma, zeta, eta, beta, the Hurwitz-type sums behind `H1`, and the
//! factorially convergent Kurepa-type series `K1`, `A1`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::expr::{EvalError, C64, POLE_RADIUS};

const STIRLING_TERMS: usize = 14;
const SHIFT_TARGET: f64 = 15.0;
const SERIES_CAP: usize = 20_000;
const ZETA_TERMS: usize = 24;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// `b^w` for real `b > 0`, through the real power so large bases keep
/// full relative accuracy.
fn real_pow(b: f64, w: C64) -> C64 {
    C64::from_polar(b.powf(w.re), w.im * b.ln())
}

/// `B_0, B_2, B_4, ...` via the Akiyama-Tanigawa algorithm in exact arithmetic.
pub fn bernoulli_even() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n = 2 * 40;
        let mut out = Vec::new();
        let mut a: Vec<BigRational> = Vec::with_capacity(n + 1);
        for m in 0..=n {
            a.push(BigRational::new(BigInt::from(1), BigInt::from(m as u64 + 1)));
            for j in (1..=m).rev() {
                let diff = &a[j - 1] - &a[j];
                a[j - 1] = diff * BigRational::from_integer(BigInt::from(j as u64));
            }
            // a[0] is B_m (with B_1 = +1/2).
            if m % 2 == 0 {
                out.push(a[0].to_f64().unwrap_or(0.0));
            }
        }
        out
    })
}

/// Distance check against the non-positive integers.
fn near_nonpositive_integer(z: C64) -> bool {
    z.re < 0.5 && (z - c(z.re.round())).norm() < POLE_RADIUS
}

fn near_integer(z: C64) -> bool {
    (z - c(z.re.round())).norm() < POLE_RADIUS
}

fn pole(symbol: &str, at: C64) -> EvalError {
    EvalError::PoleHit { symbol: symbol.to_string(), at }
}

fn finite(v: C64, symbol: &str) -> Result<C64, EvalError> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(EvalError::Overflow(symbol.to_string()))
    }
}

/// `ln Gamma(w)` by the Stirling series; intended for `Re w >= 15`.
fn ln_gamma_stirling(w: C64) -> C64 {
    let b = bernoulli_even();
    let mut s = (w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln();
    let w2 = w * w;
    let mut wpow = w;
    for k in 1..=STIRLING_TERMS {
        let kf = k as f64;
        s += b[k] / (2.0 * kf * (2.0 * kf - 1.0)) / wpow;
        wpow *= w2;
    }
    s
}

/// Number of unit shifts bringing `Re z` up to the asymptotic region.
fn shift_count(z: C64) -> usize {
    (SHIFT_TARGET - z.re).ceil().max(0.0) as usize
}

pub fn gamma(z: C64) -> Result<C64, EvalError> {
    if near_nonpositive_integer(z) {
        return Err(pole("Gamma", z));
    }
    if z.re < 0.5 {
        let s = (PI * z).sin();
        return finite(c(PI) / (s * gamma(1.0 - z)?), "Gamma");
    }
    let n = shift_count(z);
    let mut prod = c(1.0);
    for i in 0..n {
        prod *= z + i as f64;
    }
    finite(ln_gamma_stirling(z + n as f64).exp() / prod, "Gamma")
}

/// Polygamma `psi^(m)(z)`; `m = 0` is the digamma function.
pub fn polygamma(m: u32, z: C64) -> Result<C64, EvalError> {
    if near_nonpositive_integer(z) {
        return Err(pole("psi", z));
    }
    let n = shift_count(z);
    let w = z + n as f64;
    let b = bernoulli_even();
    let fact = |k: u32| (1..=k).map(f64::from).product::<f64>();
    let mut asym;
    if m == 0 {
        asym = w.ln() - 0.5 / w;
        let w2 = w * w;
        let mut wpow = w2;
        for k in 1..=STIRLING_TERMS {
            asym -= b[k] / (2.0 * k as f64) / wpow;
            wpow *= w2;
        }
    } else {
        // (-1)^(m+1) [ (m-1)!/w^m + m!/(2 w^(m+1)) + sum B_2k (2k+m-1)!/((2k)! w^(2k+m)) ]
        let mut t = fact(m - 1) / w.powi(m as i32) + fact(m) / (2.0 * w.powi(m as i32 + 1));
        for k in 1..=STIRLING_TERMS {
            let k2 = 2 * k as u32;
            let coef = b[k] * ((k2..k2 + m).map(f64::from).product::<f64>()) / f64::from(k2);
            t += coef / w.powi((k2 + m) as i32);
        }
        asym = if m % 2 == 1 { t } else { -t };
    }
    // psi^(m)(z) = psi^(m)(z+n) - (-1)^m m! sum_{i<n} (z+i)^-(m+1)
    let mut tail = C64::zero();
    for i in 0..n {
        tail += (z + i as f64).powi(-(m as i32 + 1));
    }
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    finite(asym - sign * fact(m) * tail, "psi")
}

/// Complete Bell polynomials `Y_0..=Y_k` in the arguments `x[0] = x_1, ...`.
fn bell(x: &[C64], k: usize) -> Vec<C64> {
    let mut y = vec![c(1.0)];
    for n in 0..k {
        let mut s = C64::zero();
        let mut binom = 1.0;
        for i in 0..=n {
            s += binom * y[n - i] * x[i];
            binom = binom * (n - i) as f64 / (i + 1) as f64;
        }
        y.push(s);
    }
    y
}

/// `D^k Gamma (z) = Gamma(z) * Y_k(psi, psi', ..., psi^(k-1))`.
pub fn gamma_derivative(k: u32, z: C64) -> Result<C64, EvalError> {
    let g = gamma(z)?;
    if k == 0 {
        return Ok(g);
    }
    let psis: Vec<C64> = (0..k).map(|m| polygamma(m, z)).collect::<Result<_, _>>()?;
    finite(g * bell(&psis, k as usize)[k as usize], "Gamma")
}

/// `sum_{n >= 0} (n + z)^-p` for integer `p >= 2`: direct sum, then an
/// Euler-Maclaurin tail.
pub fn hurwitz(p: u32, z: C64) -> Result<C64, EvalError> {
    assert!(p >= 2, "hurwitz sum needs p >= 2");
    if near_nonpositive_integer(z) {
        return Err(pole("H1", z));
    }
    let pf = f64::from(p);
    let start = (20.0 + z.im.abs() - z.re).ceil().max(10.0) as usize;
    let mut s = C64::zero();
    for n in 0..start {
        s += (z + n as f64).powi(-(p as i32));
    }
    let w = z + start as f64;
    s += w.powi(1 - p as i32) / (pf - 1.0) + 0.5 * w.powi(-(p as i32));
    // - sum_k B_2k/(2k)! f^(2k-1)(N), f^(m)(x) = (-1)^m p(p+1)...(p+m-1) (x+z)^-(p+m)
    let b = bernoulli_even();
    let mut fact2k = 1.0;
    for k in 1..=STIRLING_TERMS {
        let m = 2 * k - 1;
        fact2k *= (2 * k - 1) as f64 * (2 * k) as f64;
        let rising: f64 = (0..m).map(|i| pf + i as f64).product();
        let deriv = -rising * w.powi(-(p as i32 + m as i32));
        s -= b[k] / fact2k * deriv;
    }
    finite(s, "H1")
}

/// `H1(z) = sum 1/(n+z)^2` and its derivatives:
/// `D^k H1 = (-1)^k (k+1)! sum (n+z)^-(k+2)`.
pub fn h1(k: u32, z: C64) -> Result<C64, EvalError> {
    let fact: f64 = (1..=k + 1).map(f64::from).product();
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign * fact * hurwitz(k + 2, z)?)
}

/// Riemann zeta. Euler-Maclaurin summation for `Re s > -3`, the reflection
/// formula below.
pub fn zeta(s: C64) -> Result<C64, EvalError> {
    if (s - 1.0).norm() < POLE_RADIUS {
        return Err(pole("zeta", s));
    }
    if s.re <= -3.0 {
        let w = 1.0 - s;
        let v = real_pow(2.0, s) * real_pow(PI, s - 1.0) * (PI * s / 2.0).sin() * gamma(w)? * zeta(w)?;
        return finite(v, "zeta");
    }
    // Small N keeps the cancellation in the direct sum mild for Re s < 0;
    // the correction series makes up for it.
    let n = 8 + s.im.abs().ceil() as usize;
    let mut sum = C64::zero();
    for k in 1..n {
        sum += real_pow(k as f64, -s);
    }
    let nf = n as f64;
    sum += real_pow(nf, 1.0 - s) / (s - 1.0) + 0.5 * real_pow(nf, -s);
    let b = bernoulli_even();
    let mut fact2k = 1.0;
    // rising = s (s+1) ... (s+2k-2)
    let mut rising = s;
    for k in 1..=ZETA_TERMS {
        if k > 1 {
            let j = (2 * k - 3) as f64;
            rising *= (s + j) * (s + j + 1.0);
        }
        fact2k *= (2 * k - 1) as f64 * (2 * k) as f64;
        sum += b[k] / fact2k * rising * real_pow(nf, -s - (2 * k - 1) as f64);
    }
    finite(sum, "zeta")
}

/// Accelerated alternating sum `sum_{k>=0} (-1)^k a_k` (Cohen, Rodriguez
/// Villegas, Zagier; algorithm 1).
fn alternating_sum(a: impl Fn(usize) -> C64, terms: usize) -> C64 {
    let n = terms as f64;
    let mut d = (3.0 + 8f64.sqrt()).powf(n);
    d = (d + 1.0 / d) / 2.0;
    let mut b = -1.0;
    let mut cc = -d;
    let mut s = C64::zero();
    for k in 0..terms {
        let kf = k as f64;
        cc = b - cc;
        s += cc * a(k);
        b = (kf + n) * (kf - n) * b / ((kf + 0.5) * (kf + 1.0));
    }
    s / d
}

fn acceleration_terms(s: C64) -> usize {
    (40.0 + 3.0 * s.im.abs()).ceil().min(200.0) as usize
}

/// Dirichlet eta. Alternating acceleration for `Re s > 0`; for `Re s <= 0`,
/// `(1 - 2^(1-s)) zeta(s)`.
pub fn eta(s: C64) -> Result<C64, EvalError> {
    if s.re <= 0.0 {
        return finite((1.0 - real_pow(2.0, 1.0 - s)) * zeta(s)?, "eta");
    }
    let v = alternating_sum(|k| real_pow(k as f64 + 1.0, -s), acceleration_terms(s));
    finite(v, "eta")
}

/// Dirichlet beta. Alternating acceleration for `Re s > 0`; for `Re s <= 0`,
/// `beta(s) = (2/pi)^w sin(pi w/2) Gamma(w) beta(w)` with `w = 1 - s`.
pub fn beta(s: C64) -> Result<C64, EvalError> {
    if s.re <= 0.0 {
        let w = 1.0 - s;
        let v = real_pow(2.0 / PI, w) * (PI * w / 2.0).sin() * gamma(w)? * beta(w)?;
        return finite(v, "beta");
    }
    let v = alternating_sum(|k| real_pow(2.0 * k as f64 + 1.0, -s), acceleration_terms(s));
    finite(v, "beta")
}

/// Sum `sign^n g_n` where `g_0 = first` and `g_{n+1} = g_n / (base - n)`.
/// Stops once terms are below `1e-17` of the running sum.
fn factorial_series(symbol: &str, first: C64, base: C64, alternating: bool) -> Result<C64, EvalError> {
    let mut term = first;
    let mut sum = first;
    for n in 0..SERIES_CAP {
        term /= base - n as f64;
        let signed = if alternating && n % 2 == 0 { -term } else { term };
        sum += signed;
        if n as f64 > base.norm() && term.norm() <= 1e-17 * sum.norm().max(1e-300) {
            return finite(sum, symbol);
        }
    }
    Err(EvalError::ConvergenceFailure { symbol: symbol.to_string(), terms: SERIES_CAP })
}

/// `K1(z) = sum_{n>=0} Gamma(z - n)`, simple poles at the integers.
pub fn k1(z: C64) -> Result<C64, EvalError> {
    if near_integer(z) {
        return Err(pole("K1", z));
    }
    // Gamma(z-n-1) = Gamma(z-n) / (z-n-1)
    factorial_series("K1", gamma(z)?, z - 1.0, false)
}

/// `A1(z) = sum_{n>=0} (-1)^n Gamma(z + 1 - n)`, simple poles at the integers.
pub fn a1(z: C64) -> Result<C64, EvalError> {
    if near_integer(z) {
        return Err(pole("A1", z));
    }
    // Gamma(z-n) = Gamma(z+1-n) / (z-n)
    factorial_series("A1", gamma(z + 1.0)?, z, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol * (1.0 + b.norm())
    }

    #[test]
    fn bernoulli_values() {
        let b = bernoulli_even();
        assert_eq!(b[0], 1.0);
        assert!((b[1] - 1.0 / 6.0).abs() < 1e-16);
        assert!((b[2] + 1.0 / 30.0).abs() < 1e-16);
        assert!((b[6] - 691.0 / 2730.0 * -1.0).abs() < 1e-15);
    }

    #[test]
    fn gamma_factorials_and_half() {
        assert!(close(gamma(c(5.0)).unwrap(), c(24.0), 1e-13));
        assert!(close(gamma(c(1.0)).unwrap(), c(1.0), 1e-14));
        assert!(close(gamma(c(0.5)).unwrap(), c(PI.sqrt()), 1e-14));
        assert!(close(gamma(c(-0.5)).unwrap(), c(-2.0 * PI.sqrt()), 1e-13));
        assert!(matches!(gamma(c(0.0)), Err(EvalError::PoleHit { .. })));
        assert!(matches!(gamma(c(-3.0)), Err(EvalError::PoleHit { .. })));
    }

    #[test]
    fn digamma_known_values() {
        let euler = 0.577_215_664_901_532_9;
        assert!(close(polygamma(0, c(1.0)).unwrap(), c(-euler), 1e-14));
        assert!(close(polygamma(1, c(1.0)).unwrap(), c(PI * PI / 6.0), 1e-13));
        // psi''(1) = -2 zeta(3)
        assert!(close(polygamma(2, c(1.0)).unwrap(), c(-2.0 * 1.202_056_903_159_594_3), 1e-12));
    }

    #[test]
    fn gamma_derivative_at_one() {
        let euler = 0.577_215_664_901_532_9;
        assert!(close(gamma_derivative(1, c(1.0)).unwrap(), c(-euler), 1e-13));
        let second = euler * euler + PI * PI / 6.0;
        assert!(close(gamma_derivative(2, c(1.0)).unwrap(), c(second), 1e-13));
    }

    #[test]
    fn zeta_eta_beta_values() {
        assert!(close(zeta(c(2.0)).unwrap(), c(PI * PI / 6.0), 1e-14));
        assert!(close(zeta(c(-1.0)).unwrap(), c(-1.0 / 12.0), 1e-13));
        assert!(close(zeta(c(-5.0)).unwrap(), c(-1.0 / 252.0), 1e-12));
        assert!(zeta(c(-2.0)).unwrap().norm() < 1e-13);
        assert!(close(eta(c(1.0)).unwrap(), c(2f64.ln()), 1e-14));
        assert!(close(beta(c(2.0)).unwrap(), c(0.915_965_594_177_219), 1e-14));
        assert!(close(beta(c(1.0)).unwrap(), c(PI / 4.0), 1e-14));
        assert!(close(beta(c(0.0)).unwrap(), c(0.5), 1e-13));
        assert!(matches!(zeta(c(1.0)), Err(EvalError::PoleHit { .. })));
    }

    #[test]
    fn h1_is_zeta_two_at_one() {
        assert!(close(h1(0, c(1.0)).unwrap(), c(PI * PI / 6.0), 1e-14));
    }

    #[test]
    fn kurepa_series_at_integer_is_a_pole() {
        assert!(matches!(k1(c(3.0)), Err(EvalError::PoleHit { .. })));
        assert!(matches!(a1(c(-2.0)), Err(EvalError::PoleHit { .. })));
    }
}
