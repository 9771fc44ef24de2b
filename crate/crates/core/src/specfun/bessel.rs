//! Modified Bessel function of the second kind K_n(x) for integer order.
//!
//! K₀ and K₁ come from their ascending series for x ≤ 2 and from Steed's
//! continued fraction (Temme's CF2) above, followed by upward recurrence.

use super::gamma::EULER_GAMMA;
use crate::{Error, Result};
use std::f64::consts::PI;

fn k01_series(x: f64) -> (f64, f64) {
    let y = 0.25 * x * x;
    let lnx2 = (0.5 * x).ln();
    // K0 = -(ln(x/2)+γ) I0 + Σ y^k/(k!)² H_k
    // K1 = 1/x + ln(x/2) I1 - (x/4) Σ y^k/(k!(k+1)!) [ψ(k+1)+ψ(k+2)]
    let mut t0 = 1.0; // y^k/(k!)^2
    let mut t1 = 1.0; // y^k/(k!(k+1)!)
    let mut h = 0.0;
    let mut i0 = 1.0;
    let mut s0 = 0.0;
    let mut i1 = 1.0;
    let mut s1 = 2.0 * (-EULER_GAMMA) + 1.0;
    for k in 1..60 {
        let kf = k as f64;
        t0 *= y / (kf * kf);
        t1 *= y / (kf * (kf + 1.0));
        h += 1.0 / kf;
        i0 += t0;
        s0 += t0 * h;
        i1 += t1;
        s1 += t1 * (2.0 * (h - EULER_GAMMA) + 1.0 / (kf + 1.0));
        if t0 < 1e-18 * i0 && t1 < 1e-18 * i1 {
            break;
        }
    }
    let k0 = -(lnx2 + EULER_GAMMA) * i0 + s0;
    let k1 = 1.0 / x + lnx2 * (0.5 * x * i1) - 0.25 * x * s1;
    (k0, k1)
}

/// e^x K₀(x), e^x K₁(x) for x > 2.
fn k01_cf2_scaled(x: f64) -> Result<(f64, f64)> {
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut h = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 1..10_000 {
        let fi = i as f64;
        a -= 2.0 * fi;
        c = -a * c / (fi + 1.0);
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < f64::EPSILON {
            h *= a1;
            let k0 = (PI / (2.0 * x)).sqrt() / s;
            let k1 = k0 * (x + 0.5 - h) / x;
            return Ok((k0, k1));
        }
    }
    Err(Error::Numerical(format!("Bessel K continued fraction failed at x = {x}")))
}

fn recur(n: u32, x: f64, k0: f64, k1: f64) -> f64 {
    if n == 0 {
        return k0;
    }
    let (mut km, mut k) = (k0, k1);
    for j in 1..n {
        let kp = km + 2.0 * j as f64 / x * k;
        km = k;
        k = kp;
    }
    k
}

fn check(x: f64) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("Bessel K requires finite x > 0, got {x}")));
    }
    Ok(())
}

/// e^x K_n(x).
pub fn bessel_k_scaled(order: i32, x: f64) -> Result<f64> {
    check(x)?;
    let n = order.unsigned_abs();
    let (k0, k1) = if x <= 2.0 {
        let (k0, k1) = k01_series(x);
        (k0 * x.exp(), k1 * x.exp())
    } else {
        k01_cf2_scaled(x)?
    };
    Ok(recur(n, x, k0, k1))
}

/// K_n(x) together with a flag that is set when the result underflowed to 0.
pub fn bessel_k_flagged(order: i32, x: f64) -> Result<(f64, bool)> {
    check(x)?;
    let n = order.unsigned_abs();
    let v = if x <= 2.0 {
        let (k0, k1) = k01_series(x);
        recur(n, x, k0, k1)
    } else {
        bessel_k_scaled(order, x)? * (-x).exp()
    };
    if v < f64::MIN_POSITIVE {
        Ok((0.0, true))
    } else {
        Ok((v, false))
    }
}

/// K_n(x) for integer order n (negative orders use K₋ₙ = Kₙ).
pub fn bessel_k(order: i32, x: f64) -> Result<f64> {
    bessel_k_flagged(order, x).map(|(v, _)| v)
}
