//! Gauss hypergeometric function ₂F₁(a, b; c; z) for real z in (−1, 1).
//!
//! | region        | method                                                  |
//! |---------------|---------------------------------------------------------|
//! | \|z\| ≤ 0.5   | power series                                            |
//! | z < −0.5      | Pfaff transformation to z/(z−1) ∈ (1/3, 1/2)            |
//! | z > 0.5       | linear transformation to 1−z (A&S 15.3.6)               |
//! | z > 0.5, c−a−b integer | logarithmic forms A&S 15.3.10, 15.3.11, 15.3.12 |
//!
//! The evaluation is generic over [`Real`] so the same code runs in `f64`
//! and in extended precision.

use super::real::Real;
use crate::{Error, Result};

const MAX_TERMS: usize = 100_000;

/// ₂F₁(a, b; c; z) in double precision.
pub fn gauss_2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    hyp2f1_w(&a, &b, &c, &z, &(1.0 - z))
}

fn nonpos_int(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

fn small(term: &impl Real, sum: &impl Real, eps: f64) -> bool {
    let t = term.to_f64().abs();
    let s = sum.to_f64().abs();
    t <= eps * s || (t == 0.0)
}

/// ₂F₁ with the complement `w = 1 − z` supplied by the caller, who may know
/// it more accurately than `1 − z` evaluates.
pub(crate) fn hyp2f1_w<R: Real>(a: &R, b: &R, c: &R, z: &R, w: &R) -> Result<R> {
    let (af, bf, cf, wf) = (a.to_f64(), b.to_f64(), c.to_f64(), w.to_f64());
    if !(wf > 0.0 && wf < 2.0) {
        return Err(Error::Domain(format!("₂F₁ needs |z| < 1, got z = {}", 1.0 - wf)));
    }
    if nonpos_int(cf) {
        return Err(Error::Domain(format!("₂F₁ needs c not a non-positive integer, got {cf}")));
    }
    if z.to_f64() == 0.0 {
        return Ok(R::one());
    }
    if nonpos_int(af) || nonpos_int(bf) || z.to_f64().abs() <= 0.5 {
        return series(a, b, c, z);
    }
    if wf > 1.5 {
        // Pfaff: (1−z)^(−a) F(a, c−b; c; z/(z−1))
        let zz = z.clone() / (z.clone() - R::one());
        let f = series(a, &(c.clone() - b.clone()), c, &zz)?;
        return Ok((-(a.clone() * w.ln())).exp() * f);
    }
    let s = cf - af - bf;
    let m = s.round();
    if (s - m).abs() <= 1e-12 * cf.abs().max(1.0) {
        let m = m as i64;
        return match m {
            0 => log_equal(a, b, w),
            m if m > 0 => log_above(a, b, m as usize, w),
            m => log_below(a, b, (-m) as usize, w),
        };
    }
    // A&S 15.3.6
    let cab = c.clone() - a.clone() - b.clone();
    let gc = R::gamma(c);
    let t1 = gc.clone() * R::gamma(&cab) * R::rgamma(&(c.clone() - a.clone())) * R::rgamma(&(c.clone() - b.clone()));
    let f1 = series(a, b, &(R::one() - cab.clone()), w)?;
    let t2 = gc * R::gamma(&(-cab.clone())) * R::rgamma(a) * R::rgamma(b);
    let f2 = series(&(c.clone() - a.clone()), &(c.clone() - b.clone()), &(cab.clone() + R::one()), w)?;
    Ok(t1 * f1 + t2 * (cab * w.ln()).exp() * f2)
}

fn series<R: Real>(a: &R, b: &R, c: &R, z: &R) -> Result<R> {
    let eps = R::epsilon() * 0.5;
    let mut term = R::one();
    let mut sum = R::one();
    let mut quiet = 0;
    for n in 0..MAX_TERMS {
        let nr = R::from_f64(n as f64);
        term = term * (a.clone() + nr.clone()) * (b.clone() + nr.clone()) / ((c.clone() + nr.clone()) * (nr + R::one()))
            * z.clone();
        sum = sum + term.clone();
        if term.to_f64() == 0.0 {
            return Ok(sum);
        }
        if small(&term, &sum, eps) {
            quiet += 1;
            if quiet >= 2 {
                return Ok(sum);
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::Numerical(format!("₂F₁ series did not converge at z = {:e}", z.to_f64())))
}

/// Σ_{n<m} (p)_n (q)_n / (n! (1−m)_n) w^n
fn finite_part<R: Real>(p: &R, q: &R, m: usize, w: &R) -> R {
    let mut term = R::one();
    let mut sum = R::one();
    for n in 0..m.saturating_sub(1) {
        let nr = R::from_f64(n as f64);
        let den = (nr.clone() + R::one()) * (R::from_f64(1.0 - m as f64) + nr.clone());
        term = term * (p.clone() + nr.clone()) * (q.clone() + nr) / den * w.clone();
        sum = sum + term.clone();
    }
    sum
}

/// Σ_n (p)_n (q)_n / (n! (n+m)!) w^n [ln w − φ(n+1) − φ(n+m+1) + φ(p+n) + φ(q+n)]
/// with φ = ψ + γ.
fn log_series<R: Real>(p: &R, q: &R, m: usize, w: &R) -> Result<R> {
    let eps = R::epsilon() * 0.5;
    let lw = w.ln();
    let mut coef = R::one();
    for k in 1..=m {
        coef = coef / R::from_f64(k as f64);
    }
    let mut phi_n1 = R::zero();
    let mut phi_nm1 = R::digamma_shifted(&R::from_f64((m + 1) as f64));
    let mut phi_p = R::digamma_shifted(p);
    let mut phi_q = R::digamma_shifted(q);
    let mut sum = R::zero();
    let mut quiet = 0;
    for n in 0..MAX_TERMS {
        let nr = R::from_f64(n as f64);
        let bracket = lw.clone() - phi_n1.clone() - phi_nm1.clone() + phi_p.clone() + phi_q.clone();
        let term = coef.clone() * bracket;
        sum = sum + term.clone();
        if n > 0 && small(&term, &sum, eps) {
            quiet += 1;
            if quiet >= 2 {
                return Ok(sum);
            }
        } else {
            quiet = 0;
        }
        let pn = p.clone() + nr.clone();
        let qn = q.clone() + nr.clone();
        let np1 = nr.clone() + R::one();
        let nm1 = nr + R::from_f64((m + 1) as f64);
        coef = coef * pn.clone() * qn.clone() / (np1.clone() * nm1.clone()) * w.clone();
        phi_n1 = phi_n1 + R::one() / np1;
        phi_nm1 = phi_nm1 + R::one() / nm1;
        phi_p = phi_p + R::one() / pn;
        phi_q = phi_q + R::one() / qn;
    }
    Err(Error::Numerical("₂F₁ logarithmic series did not converge".into()))
}

fn sign_m<R: Real>(m: usize) -> R {
    if m % 2 == 0 {
        R::one()
    } else {
        -R::one()
    }
}

/// c = a + b (A&S 15.3.10).
fn log_equal<R: Real>(a: &R, b: &R, w: &R) -> Result<R> {
    let s = log_series(a, b, 0, w)?;
    let pre = R::gamma(&(a.clone() + b.clone())) * R::rgamma(a) * R::rgamma(b);
    Ok(-(pre * s))
}

/// c = a + b + m (A&S 15.3.11).
fn log_above<R: Real>(a: &R, b: &R, m: usize, w: &R) -> Result<R> {
    let mr = R::from_f64(m as f64);
    let c = a.clone() + b.clone() + mr.clone();
    let gc = R::gamma(&c);
    let first = R::gamma(&mr) * gc.clone() * R::rgamma(&(a.clone() + mr.clone())) * R::rgamma(&(b.clone() + mr.clone()))
        * finite_part(a, b, m, w);
    let s = log_series(&(a.clone() + mr.clone()), &(b.clone() + mr), m, w)?;
    let second = sign_m::<R>(m) * gc * R::rgamma(a) * R::rgamma(b) * w.powi(m as i32) * s;
    Ok(first - second)
}

/// c = a + b − m (A&S 15.3.12).
fn log_below<R: Real>(a: &R, b: &R, m: usize, w: &R) -> Result<R> {
    let mr = R::from_f64(m as f64);
    let c = a.clone() + b.clone() - mr.clone();
    let gc = R::gamma(&c);
    let (am, bm) = (a.clone() - mr.clone(), b.clone() - mr.clone());
    let first = R::gamma(&mr) * gc.clone() * R::rgamma(a) * R::rgamma(b) * w.powi(-(m as i32)) * finite_part(&am, &bm, m, w);
    let s = log_series(a, b, m, w)?;
    let second = sign_m::<R>(m) * gc * R::rgamma(&am) * R::rgamma(&bm) * s;
    Ok(first - second)
}
