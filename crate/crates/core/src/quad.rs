//! Globally adaptive Gauss–Kronrod (7/15-point) quadrature.

use crate::{Error, Result};
use std::collections::BinaryHeap;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Tolerances and limits for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions { abs_tol: 1e-12, rel_tol: 1e-8, max_intervals: 4000 }
    }
}

/// Integral estimate with its error bound.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, o: &Self) -> bool {
        self.error == o.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Piece {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&o.error)
    }
}

/// ∫ f over the finite intervals between consecutive `points`.
pub fn integrate_points(f: impl Fn(f64) -> f64, points: &[f64], opts: QuadOptions) -> Result<QuadResult> {
    let mut heap = BinaryHeap::new();
    for w in points.windows(2) {
        if w[1] > w[0] {
            let (value, error) = gk15(&f, w[0], w[1]);
            heap.push(Piece { a: w[0], b: w[1], value, error });
        }
    }
    let mut total: f64 = heap.iter().map(|p| p.value).sum();
    let mut err: f64 = heap.iter().map(|p| p.error).sum();
    loop {
        if !total.is_finite() || !err.is_finite() {
            return Err(Error::Numerical(format!("quadrature hit a non-finite value (estimate {total:e})")));
        }
        if err <= opts.abs_tol.max(opts.rel_tol * total.abs()) {
            // running sums drift; report the exact ones
            total = heap.iter().map(|p| p.value).sum();
            err = heap.iter().map(|p| p.error).sum();
            if err <= opts.abs_tol.max(opts.rel_tol * total.abs()) {
                return Ok(QuadResult { value: total, error: err, intervals: heap.len() });
            }
        }
        if heap.len() >= opts.max_intervals {
            return Err(Error::Numerical(format!(
                "quadrature did not converge: estimate {total:e}, error {err:e}, {} intervals",
                heap.len()
            )));
        }
        let worst = heap.pop().expect("non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            return Err(Error::Numerical(format!(
                "quadrature interval collapsed near {:e}: estimate {total:e}, error {err:e}",
                worst.a
            )));
        }
        total -= worst.value;
        err -= worst.error;
        for (a, b) in [(worst.a, mid), (mid, worst.b)] {
            let (value, error) = gk15(&f, a, b);
            total += value;
            err += error;
            heap.push(Piece { a, b, value, error });
        }
    }
}

/// ∫_a^b f(x) dx.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, opts: QuadOptions) -> Result<QuadResult> {
    integrate_points(f, &[a, b], opts)
}

/// ∫_a^∞ f(x) dx with finite breakpoints `points` (ascending, all ≥ a).
/// The tail beyond the last breakpoint L is mapped by x = L + h·s/(1−s) with
/// h = max(L, 1).
pub fn integrate_to_infinity(f: impl Fn(f64) -> f64, points: &[f64], opts: QuadOptions) -> Result<QuadResult> {
    let last = *points.last().expect("at least one point");
    let h = last.max(1.0);
    let head = if points.len() > 1 { Some(integrate_points(&f, points, opts)?) } else { None };
    let g = |s: f64| {
        if s >= 1.0 {
            return 0.0;
        }
        let d = 1.0 - s;
        let x = last + h * s / d;
        let v = f(x);
        if v == 0.0 {
            0.0
        } else {
            h * v / (d * d)
        }
    };
    let tail_opts = QuadOptions { abs_tol: opts.abs_tol * 0.5, ..opts };
    let tail = integrate_points(g, &[0.0, 0.5, 0.9, 0.99, 1.0], tail_opts)?;
    Ok(match head {
        Some(h) => QuadResult {
            value: h.value + tail.value,
            error: h.error + tail.error,
            intervals: h.intervals + tail.intervals,
        },
        None => tail,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_and_exponential() {
        let r = integrate(|x| x * x, 0.0, 3.0, QuadOptions::default()).unwrap();
        assert!((r.value - 9.0).abs() < 1e-13);
        let r = integrate_to_infinity(|x| (-x).exp(), &[0.0], QuadOptions::default()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-10);
        let r = integrate_to_infinity(|x| (-2.0 * x * x).exp(), &[0.0, 1.0], QuadOptions::default()).unwrap();
        assert!((r.value - 0.5 * (std::f64::consts::PI / 2.0).sqrt()).abs() < 1e-10);
    }

    #[test]
    fn endpoint_singularity() {
        // ∫₀¹ x^{-1/2} = 2
        let opts = QuadOptions { abs_tol: 1e-10, rel_tol: 1e-10, max_intervals: 4000 };
        let r = integrate(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, opts).unwrap();
        assert!((r.value - 2.0).abs() < 1e-8);
    }

    #[test]
    fn non_convergence_reported() {
        let opts = QuadOptions { abs_tol: 1e-15, rel_tol: 1e-15, max_intervals: 10 };
        let e = integrate(|x: f64| (1.0 / x).sin(), 1e-6, 1.0, opts).unwrap_err();
        assert!(matches!(e, Error::Numerical(_)));
    }
}
