//! Rank falsifier: evidence for or against an algebraic differential
//! equation of bounded shape.
//!
//! Rows are samples `z_i`, columns are `z^p * prod u_k^e_k` with
//! `u_k -> D^k a (z_i)`. A nonzero ADE within the bounds is a null vector of
//! the column-normalized matrix, so a clearly positive smallest singular
//! value rules such equations out at the sampled points.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::diffpoly::DiffMonomial;
use crate::expr::{EvalError, C64};

use super::registry::special_value;
use super::residual::Point;

/// Singular values at or below this (after column normalization) count as zero.
pub const RANK_THRESHOLD: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct FalsifySpec {
    /// Generator symbols; only a single generator is supported.
    pub generators: Vec<String>,
    pub order: u32,
    pub degree: u32,
    pub coeff_degree: u32,
    pub samples: usize,
    pub seed: u64,
    pub re_range: (f64, f64),
    pub im_range: (f64, f64),
    pub holdout: usize,
}

impl FalsifySpec {
    pub fn new(symbol: &str, order: u32, degree: u32, coeff_degree: u32, samples: usize, seed: u64) -> Self {
        FalsifySpec {
            generators: vec![symbol.to_string()],
            order,
            degree,
            coeff_degree,
            samples,
            seed,
            re_range: (1.0, 6.0),
            im_range: (-2.0, 2.0),
            holdout: 40,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FalsifyError {
    #[error("need at least {needed} samples for {columns} columns, got {got}")]
    InsufficientSamples { needed: usize, columns: usize, got: usize },
    #[error("{0}")]
    PoleHit(EvalError),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("{0}")]
    Eval(EvalError),
}

impl From<EvalError> for FalsifyError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::PoleHit { .. } => FalsifyError::PoleHit(e),
            EvalError::Unsupported(m) => FalsifyError::Unsupported(m),
            other => FalsifyError::Eval(other),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Coefficient {
    pub column: String,
    pub value: Point,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum Verdict {
    NoDependencyFound,
    DependencyCandidate { coefficients: Vec<Coefficient>, holdout_residual: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FalsifierReport {
    pub symbol: String,
    pub order: u32,
    pub degree: u32,
    pub coeff_degree: u32,
    pub seed: u64,
    pub re_range: (f64, f64),
    pub im_range: (f64, f64),
    pub rows: usize,
    pub columns: usize,
    pub basis: Vec<String>,
    pub threshold: f64,
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub qr_min_pivot: f64,
    pub qr_rank: usize,
    pub oracles_agree: bool,
    pub verdict: Verdict,
}

/// Column `z^p * m`.
#[derive(Clone, Debug)]
struct Column {
    monomial: DiffMonomial,
    p: u32,
}

impl Column {
    fn label(&self) -> String {
        let m = if self.monomial.is_one() { None } else { Some(self.monomial.to_string()) };
        match (self.p, m) {
            (0, None) => "1".into(),
            (0, Some(m)) => m,
            (1, None) => "z".into(),
            (1, Some(m)) => format!("z*{m}"),
            (p, None) => format!("z^{p}"),
            (p, Some(m)) => format!("z^{p}*{m}"),
        }
    }

    fn value(&self, z: C64, derivs: &[C64]) -> C64 {
        let mut v = z.powu(self.p);
        for &(k, e) in self.monomial.pairs() {
            v *= derivs[k as usize].powu(e);
        }
        v
    }
}

/// All monomials in `u_0..=u_order` of total degree `<= degree`, ascending.
fn monomials(order: u32, degree: u32) -> Vec<DiffMonomial> {
    let mut out = vec![DiffMonomial::one()];
    let mut frontier = vec![Vec::<u32>::new()];
    for _ in 0..degree {
        let mut next = Vec::new();
        for idx in &frontier {
            let lo = idx.last().copied().unwrap_or(0);
            for k in lo..=order {
                let mut v = idx.clone();
                v.push(k);
                out.push(DiffMonomial::from_pairs(v.iter().map(|&k| (k, 1))));
                next.push(v);
            }
        }
        frontier = next;
    }
    out.sort();
    out.dedup();
    out
}

fn basis(order: u32, degree: u32, coeff_degree: u32) -> Vec<Column> {
    monomials(order, degree)
        .into_iter()
        .flat_map(|m| (0..=coeff_degree).map(move |p| Column { monomial: m.clone(), p }))
        .collect()
}

fn draw(rng: &mut ChaCha8Rng, spec: &FalsifySpec) -> C64 {
    let re = rng.random_range(spec.re_range.0..spec.re_range.1);
    let im = if spec.im_range.0 < spec.im_range.1 {
        rng.random_range(spec.im_range.0..spec.im_range.1)
    } else {
        spec.im_range.0
    };
    C64::new(re, im)
}

fn derivatives(symbol: &str, order: u32, z: C64) -> Result<Vec<C64>, EvalError> {
    (0..=order).map(|k| special_value(symbol, k, z)).collect()
}

/// Evaluation matrix with each row scaled to unit norm. Row scaling leaves
/// the null space alone and keeps samples where the function is tiny from
/// being drowned out by those where it is huge.
fn matrix(columns: &[Column], rows: &[(C64, Vec<C64>)]) -> DMatrix<Complex64> {
    let mut m = DMatrix::from_fn(rows.len(), columns.len(), |i, j| columns[j].value(rows[i].0, &rows[i].1));
    for mut row in m.row_iter_mut() {
        let n = row.norm();
        if n > 0.0 {
            row /= Complex64::new(n, 0.0);
        }
    }
    m
}

/// Scale each column to unit Euclidean norm; returns the norms used.
fn normalize_columns(m: &mut DMatrix<Complex64>) -> Vec<f64> {
    let mut norms = Vec::with_capacity(m.ncols());
    for mut col in m.column_iter_mut() {
        let n = col.norm();
        let n = if n > 0.0 { n } else { 1.0 };
        col /= Complex64::new(n, 0.0);
        norms.push(n);
    }
    norms
}

/// Smallest and largest singular value and a right singular vector for the smallest.
fn svd_extremes(m: &DMatrix<Complex64>) -> (f64, f64, Vec<Complex64>) {
    let svd = m.clone().svd(false, true);
    let s = &svd.singular_values;
    let (mut imin, mut imax) = (0, 0);
    for i in 0..s.len() {
        if s[i] < s[imin] {
            imin = i;
        }
        if s[i] > s[imax] {
            imax = i;
        }
    }
    let vt = svd.v_t.expect("requested V^H");
    let v = (0..m.ncols()).map(|j| vt[(imin, j)].conj()).collect();
    (s[imin], s[imax], v)
}

/// Householder QR with column pivoting; returns `|R_kk|` in pivot order.
pub fn pivoted_qr_diagonal(a: &DMatrix<Complex64>) -> Vec<f64> {
    let mut a = a.clone();
    let (m, n) = a.shape();
    let steps = m.min(n);
    let mut diag = Vec::with_capacity(steps);
    for k in 0..steps {
        let sub_norm = |a: &DMatrix<Complex64>, j: usize| {
            (k..m).map(|i| a[(i, j)].norm_sqr()).sum::<f64>()
        };
        let pivot = (k..n)
            .max_by(|&x, &y| sub_norm(&a, x).total_cmp(&sub_norm(&a, y)).then(y.cmp(&x)))
            .unwrap();
        a.swap_columns(k, pivot);
        let norm = sub_norm(&a, k).sqrt();
        if norm == 0.0 {
            diag.push(0.0);
            continue;
        }
        let x0 = a[(k, k)];
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { Complex64::new(1.0, 0.0) };
        let alpha = -phase * norm;
        let mut v: Vec<Complex64> = (k..m).map(|i| a[(i, k)]).collect();
        v[0] -= alpha;
        let vn = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if vn > 0.0 {
            for c in &mut v {
                *c /= vn;
            }
            for j in k..n {
                let dot: Complex64 = (k..m).map(|i| v[i - k].conj() * a[(i, j)]).sum();
                for i in k..m {
                    let vi = v[i - k];
                    a[(i, j)] -= 2.0 * vi * dot;
                }
            }
        }
        diag.push(alpha.norm());
    }
    diag
}

pub fn ade_falsify(spec: &FalsifySpec) -> Result<FalsifierReport, FalsifyError> {
    let symbol = match spec.generators.as_slice() {
        [one] => one.clone(),
        [] => return Err(FalsifyError::Unsupported("no generator symbol".into())),
        _ => {
            return Err(FalsifyError::Unsupported(
                "several generator symbols; the falsifier handles a single symbol".into(),
            ))
        }
    };
    let columns = basis(spec.order, spec.degree, spec.coeff_degree);
    let needed = 2 * columns.len();
    if spec.samples < needed {
        return Err(FalsifyError::InsufficientSamples { needed, columns: columns.len(), got: spec.samples });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let sample = |rng: &mut ChaCha8Rng| -> Result<(C64, Vec<C64>), FalsifyError> {
        let z = draw(rng, spec);
        Ok((z, derivatives(&symbol, spec.order, z)?))
    };
    let rows: Vec<_> = (0..spec.samples).map(|_| sample(&mut rng)).collect::<Result<_, _>>()?;
    let holdout: Vec<_> = (0..spec.holdout).map(|_| sample(&mut rng)).collect::<Result<_, _>>()?;

    let mut m = matrix(&columns, &rows);
    normalize_columns(&mut m);
    let (sigma_min, sigma_max, _) = svd_extremes(&m);
    let pivots = pivoted_qr_diagonal(&m);
    let qr_min_pivot = pivots.iter().copied().fold(f64::INFINITY, f64::min);
    let qr_rank = pivots.iter().filter(|&&p| p > RANK_THRESHOLD).count();
    let svd_full = sigma_min > RANK_THRESHOLD;
    let qr_full = qr_min_pivot > RANK_THRESHOLD;

    let verdict = if svd_full {
        Verdict::NoDependencyFound
    } else {
        candidate(&columns, &rows, &holdout)
    };
    Ok(FalsifierReport {
        symbol,
        order: spec.order,
        degree: spec.degree,
        coeff_degree: spec.coeff_degree,
        seed: spec.seed,
        re_range: spec.re_range,
        im_range: spec.im_range,
        rows: rows.len(),
        columns: columns.len(),
        basis: columns.iter().map(Column::label).collect(),
        threshold: RANK_THRESHOLD,
        sigma_min,
        sigma_max,
        qr_min_pivot,
        qr_rank,
        oracles_agree: svd_full == qr_full,
        verdict,
    })
}

/// Grow a column prefix until it becomes rank deficient; its null vector is
/// the lowest dependency in basis order.
fn candidate(columns: &[Column], rows: &[(C64, Vec<C64>)], holdout: &[(C64, Vec<C64>)]) -> Verdict {
    for j in 1..=columns.len() {
        let prefix = &columns[..j];
        let mut m = matrix(prefix, rows);
        let norms = normalize_columns(&mut m);
        let (smin, _, v) = svd_extremes(&m);
        if smin > RANK_THRESHOLD {
            continue;
        }
        let mut c: Vec<Complex64> = v.iter().zip(&norms).map(|(x, n)| x / *n).collect();
        // Scale so the largest coefficient is exactly 1.
        let lead = *c.iter().max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap();
        for x in &mut c {
            *x /= lead;
        }
        let holdout_residual = holdout
            .iter()
            .map(|(z, d)| {
                let terms: Vec<Complex64> = prefix.iter().zip(&c).map(|(col, ci)| ci * col.value(*z, d)).collect();
                let sum: Complex64 = terms.iter().sum();
                let scale: f64 = terms.iter().map(|t| t.norm()).sum();
                sum.norm() / scale.max(f64::MIN_POSITIVE)
            })
            .fold(0.0, f64::max);
        let coefficients = prefix
            .iter()
            .zip(&c)
            .filter(|(_, ci)| ci.norm() > 1e-9)
            .map(|(col, ci)| Coefficient { column: col.label(), value: (*ci).into() })
            .collect();
        return Verdict::DependencyCandidate { coefficients, holdout_residual };
    }
    Verdict::DependencyCandidate { coefficients: Vec::new(), holdout_residual: f64::NAN }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_size_and_order() {
        let b = basis(2, 3, 2);
        assert_eq!(b.len(), 20 * 3);
        let labels: Vec<_> = basis(1, 1, 0).iter().map(Column::label).collect();
        assert_eq!(labels, ["1", "u0", "u1"]);
    }

    #[test]
    fn qr_diagonal_matches_rank() {
        let m = DMatrix::from_fn(6, 3, |i, j| {
            let x = Complex64::new(i as f64 + 1.0, 0.5);
            match j {
                0 => x,
                1 => x * x,
                _ => 2.0 * x - 3.0 * x * x,
            }
        });
        let d = pivoted_qr_diagonal(&m);
        assert!(d[0] >= d[1] && d[1] > 1e-3);
        assert!(d[2] < 1e-10);
    }

    #[test]
    fn too_few_samples_is_an_error() {
        let spec = FalsifySpec::new("exp", 1, 1, 0, 5, 1);
        assert!(matches!(ade_falsify(&spec), Err(FalsifyError::InsufficientSamples { .. })));
    }

    #[test]
    fn two_generators_unsupported() {
        let mut spec = FalsifySpec::new("H1", 1, 1, 0, 50, 1);
        spec.generators.push("Gamma".into());
        assert!(matches!(ade_falsify(&spec), Err(FalsifyError::Unsupported(_))));
    }
}
