//! Largest-eigenvalue distribution of complex Wishart matrices.
//!
//! For an M_S×M_R channel with i.i.d. CN(0,1) entries and M_S ≥ M_R, the CDF
//! of the largest eigenvalue λ of HᴴH is
//!
//! F(u) = 1 − Σ_{n,m} d_{n,m} Σ_{k=0}^{m} (n u)^k / k! · e^{−n u}
//!
//! with the coefficients tabulated below. Near the origin the sum cancels down
//! to O(u^{M_S M_R}); there the CDF and PDF switch to exact Taylor
//! coefficients generated from the same table in rational arithmetic.

use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::sync::OnceLock;

/// (n, m, numerator, denominator)
type Raw = &'static [(u32, u32, i64, i64)];

const T22: Raw = &[(1, 0, 2, 1), (1, 1, -2, 1), (1, 2, 2, 1), (2, 0, -1, 1)];
const T32: Raw = &[(1, 1, 3, 1), (1, 2, -4, 1), (1, 3, 3, 1), (2, 1, -3, 4), (2, 2, -1, 4)];
const T42: Raw = &[
    (1, 2, 4, 1),
    (1, 3, -6, 1),
    (1, 4, 4, 1),
    (2, 2, -1, 2),
    (2, 3, -3, 8),
    (2, 4, -1, 8),
];
const T33: Raw = &[
    (1, 0, 3, 1),
    (1, 1, -6, 1),
    (1, 2, 12, 1),
    (1, 3, -12, 1),
    (1, 4, 6, 1),
    (2, 0, -3, 1),
    (2, 1, 3, 2),
    (2, 2, -3, 4),
    (2, 3, -3, 8),
    (2, 4, -3, 8),
    (3, 0, 1, 1),
];
const T43: Raw = &[
    (1, 1, 6, 1),
    (1, 2, -16, 1),
    (1, 3, 27, 1),
    (1, 4, -24, 1),
    (1, 5, 10, 1),
    (2, 1, -3, 1),
    (2, 2, 1, 1),
    (2, 3, 3, 8),
    (2, 4, -3, 4),
    (2, 5, -5, 32),
    (2, 6, -15, 32),
    (3, 1, 2, 3),
    (3, 2, 8, 27),
    (3, 3, 1, 27),
];
const T44: Raw = &[
    (1, 0, 4, 1),
    (1, 1, -12, 1),
    (1, 2, 36, 1),
    (1, 3, -68, 1),
    (1, 4, 84, 1),
    (1, 5, -60, 1),
    (1, 6, 20, 1),
    (2, 0, -6, 1),
    (2, 1, 6, 1),
    (2, 2, -6, 1),
    (2, 3, 1, 1),
    (2, 4, -1, 1),
    (2, 5, 5, 2),
    (2, 6, -5, 2),
    (2, 7, 35, 32),
    (2, 8, -35, 32),
    (3, 0, 4, 1),
    (3, 1, -4, 3),
    (3, 2, 4, 9),
    (3, 3, 28, 81),
    (3, 4, 92, 243),
    (3, 5, 100, 729),
    (3, 6, 20, 729),
    (4, 0, -1, 1),
];

/// Extra Taylor terms kept beyond the leading order.
const TAYLOR_EXTRA: usize = 90;

/// One coefficient d_{n,m}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigCoeff {
    pub n: u32,
    pub m: u32,
    pub d: f64,
}

/// Coefficients d_{n,m} of the largest-eigenvalue CDF for dims (M_S, M_R).
#[derive(Debug, Clone)]
pub struct EigCoeffTable {
    pub ms: u32,
    pub mr: u32,
    pub entries: Vec<EigCoeff>,
    exact: Vec<(u32, u32, BigRational)>,
    /// PDF Taylor coefficients: f(u) = Σ_s pdf_taylor[s] u^s.
    pdf_taylor: Vec<f64>,
}

fn factorial_big(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

impl EigCoeffTable {
    fn build(ms: u32, mr: u32, raw: &[(u32, u32, i64, i64)]) -> Self {
        let exact: Vec<_> = raw
            .iter()
            .map(|&(n, m, p, q)| (n, m, BigRational::new(BigInt::from(p), BigInt::from(q))))
            .collect();
        let entries = exact
            .iter()
            .map(|(n, m, d)| EigCoeff { n: *n, m: *m, d: d.to_f64().unwrap() })
            .collect();
        let len = (ms * mr) as usize + TAYLOR_EXTRA;
        let mut pdf_taylor = Vec::with_capacity(len);
        for s in 0..len as u32 {
            // e_s = Σ d n^{s+1} (−1)^{s−m} / (m! (s−m)!)
            let mut acc = BigRational::zero();
            for (n, m, d) in &exact {
                if *m > s {
                    continue;
                }
                let num = d * BigRational::from_integer(BigInt::from(*n).pow(s + 1));
                let den = factorial_big(*m) * factorial_big(s - m);
                let term = num / BigRational::from_integer(den);
                if (s - m) % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            pdf_taylor.push(acc.to_f64().unwrap_or(0.0));
        }
        EigCoeffTable { ms, mr, entries, exact, pdf_taylor }
    }

    /// Exact coefficient values as (n, m, numerator, denominator).
    pub fn exact_entries(&self) -> impl Iterator<Item = (u32, u32, &BigRational)> {
        self.exact.iter().map(|(n, m, d)| (*n, *m, d))
    }

    /// Order of the leading Taylor term of the PDF, t = M_S·M_R − 1.
    pub fn origin_order(&self) -> u32 {
        self.ms * self.mr - 1
    }

    /// f^{(t)}(0) of the normalized PDF, t = M_S·M_R − 1.
    pub fn origin_derivative(&self) -> f64 {
        let t = self.origin_order();
        self.pdf_taylor[t as usize] * super::gamma::factorial(t)
    }

    /// PDF Taylor coefficients around the origin.
    pub fn pdf_taylor(&self) -> &[f64] {
        &self.pdf_taylor
    }

    fn direct_cdf(&self, u: f64) -> (f64, f64) {
        // 1 − Σ d e^{−nu} Σ_{k≤m} (nu)^k/k!
        let mut tail = 0.0;
        let mut mag = 1.0;
        for e in &self.entries {
            let y = e.n as f64 * u;
            let mut t = 1.0;
            let mut s = 1.0;
            for k in 1..=e.m {
                t *= y / k as f64;
                s += t;
            }
            let v = e.d * s * (-y).exp();
            tail += v;
            mag += v.abs();
        }
        (1.0 - tail, mag * 4.0 * f64::EPSILON)
    }

    fn direct_pdf(&self, u: f64) -> (f64, f64) {
        let mut sum = 0.0;
        let mut mag = 0.0;
        for e in &self.entries {
            let n = e.n as f64;
            let mut t = n * (-n * u).exp();
            for k in 1..=e.m {
                t *= n * u / k as f64;
            }
            let v = e.d * t;
            sum += v;
            mag += v.abs();
        }
        (sum, mag * 4.0 * f64::EPSILON)
    }

    /// Taylor sum Σ c_s u^{s+shift} with c_s = pdf_taylor[s]/div(s); returns
    /// None when the retained terms do not converge.
    fn taylor(&self, u: f64, cdf: bool) -> Option<(f64, f64)> {
        let t0 = self.origin_order() as usize;
        let mut pw = u.powi(t0 as i32 + cdf as i32);
        let mut sum = 0.0;
        let mut mag = 0.0;
        let mut last = f64::INFINITY;
        for s in t0..self.pdf_taylor.len() {
            let c = if cdf { self.pdf_taylor[s] / (s + 1) as f64 } else { self.pdf_taylor[s] };
            let v = c * pw;
            sum += v;
            mag += v.abs();
            last = v.abs();
            if s > t0 + 2 && last <= f64::EPSILON * 0.1 * sum.abs() {
                return Some((sum, mag * 4.0 * f64::EPSILON + last));
            }
            pw *= u;
        }
        if last <= 1e-14 * sum.abs() {
            Some((sum, mag * 4.0 * f64::EPSILON + last))
        } else {
            None
        }
    }

    fn pick(&self, u: f64, cdf: bool) -> f64 {
        let (v, err) = if cdf { self.direct_cdf(u) } else { self.direct_pdf(u) };
        if err <= 1e-14 * v.abs() {
            return v;
        }
        match self.taylor(u, cdf) {
            Some((tv, terr)) if terr < err => tv,
            _ => v,
        }
    }

    /// CDF of the normalized largest eigenvalue at u ≥ 0.
    pub fn cdf(&self, u: f64) -> f64 {
        if u <= 0.0 {
            return 0.0;
        }
        self.pick(u, true).clamp(0.0, 1.0)
    }

    /// PDF of the normalized largest eigenvalue at u ≥ 0.
    pub fn pdf(&self, u: f64) -> f64 {
        if u < 0.0 {
            return 0.0;
        }
        if u == 0.0 {
            return if self.origin_order() == 0 { self.pdf_taylor[0] } else { 0.0 };
        }
        self.pick(u, false).max(0.0)
    }

    /// Mean of the normalized largest eigenvalue, Σ d (m+1)/n.
    pub fn mean(&self) -> f64 {
        self.entries.iter().map(|e| e.d * (e.m as f64 + 1.0) / e.n as f64).sum()
    }
}

/// Coefficient table for an M_S×M_R channel, 1 ≤ M_R ≤ M_S ≤ 4.
pub fn wishart_max_eig_coeffs(ms: u32, mr: u32) -> Result<&'static EigCoeffTable> {
    if ms < mr {
        return Err(Error::Contract(format!(
            "Wishart table needs M_S ≥ M_R, got ({ms}, {mr}); swap the dimensions"
        )));
    }
    if mr == 0 || ms > 4 {
        return Err(Error::Unsupported(format!(
            "Wishart tables cover 1 ≤ M_R ≤ M_S ≤ 4, got ({ms}, {mr})"
        )));
    }
    static TABLES: OnceLock<Vec<EigCoeffTable>> = OnceLock::new();
    let tables = TABLES.get_or_init(|| {
        let mut v = Vec::new();
        for s in 1..=4u32 {
            for r in 1..=s {
                let single = [(1, s - 1, 1, 1)];
                let raw: &[(u32, u32, i64, i64)] = match (s, r) {
                    (_, 1) => &single,
                    (2, 2) => T22,
                    (3, 2) => T32,
                    (4, 2) => T42,
                    (3, 3) => T33,
                    (4, 3) => T43,
                    (4, 4) => T44,
                    _ => unreachable!(),
                };
                v.push(EigCoeffTable::build(s, r, raw));
            }
        }
        v
    });
    Ok(tables.iter().find(|t| t.ms == ms && t.mr == mr).expect("table present"))
}

/// All supported (M_S, M_R) pairs.
pub fn supported_dims() -> impl Iterator<Item = (u32, u32)> {
    (1..=4u32).flat_map(|s| (1..=s).map(move |r| (s, r)))
}
