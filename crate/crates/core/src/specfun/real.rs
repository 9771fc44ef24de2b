//! Scalar abstraction shared by `f64` and the extended-precision type [`Hp`].
//!
//! `Hp` carries a thread-local working precision in bits. Values created
//! while a precision is active are rounded to it, and arithmetic between
//! them keeps it.

use super::gamma;
use dashu_float::ops::SquareRoot;
use dashu_float::round::mode::HalfEven;
use dashu_float::{Context, FBig};
use std::cell::{Cell, RefCell};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

pub trait Real:
    Clone
    + PartialOrd
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_f64(x: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn ln(&self) -> Self;
    fn exp(&self) -> Self;
    fn sqrt(&self) -> Self;
    /// Unit roundoff of the current working precision.
    fn epsilon() -> f64;
    /// Γ(x).
    fn gamma(x: &Self) -> Self;
    /// 1/Γ(x), zero at the poles.
    fn rgamma(x: &Self) -> Self;
    /// ψ(x) + Euler's constant.
    fn digamma_shifted(x: &Self) -> Self;
    /// √π at the working precision.
    fn sqrt_pi() -> Self;

    fn zero() -> Self {
        Self::from_f64(0.0)
    }
    fn one() -> Self {
        Self::from_f64(1.0)
    }
    fn abs(&self) -> Self {
        if self.to_f64() < 0.0 {
            -self.clone()
        } else {
            self.clone()
        }
    }
    fn powi(&self, n: i32) -> Self {
        let mut base = if n < 0 { Self::one() / self.clone() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }
}

impl Real for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn epsilon() -> f64 {
        f64::EPSILON
    }
    fn gamma(x: &Self) -> Self {
        gamma::gamma(*x)
    }
    fn rgamma(x: &Self) -> Self {
        gamma::rgamma(*x)
    }
    fn digamma_shifted(x: &Self) -> Self {
        gamma::digamma_shifted(*x)
    }
    fn sqrt_pi() -> Self {
        std::f64::consts::PI.sqrt()
    }
}

type Big = FBig<HalfEven, 2>;

thread_local! {
    static PRECISION: Cell<usize> = const { Cell::new(128) };
    static SQRT_PI: RefCell<Option<(usize, Big)>> = const { RefCell::new(None) };
}

/// Extended-precision binary float.
#[derive(Clone, PartialEq, PartialOrd)]
pub struct Hp(Big);

impl Hp {
    /// Current working precision in bits.
    pub fn precision() -> usize {
        PRECISION.with(|p| p.get())
    }

    /// Run `f` with the working precision set to `bits`.
    pub fn with_precision<T>(bits: usize, f: impl FnOnce() -> T) -> T {
        let old = PRECISION.with(|p| p.replace(bits.max(64)));
        let out = f();
        PRECISION.with(|p| p.set(old));
        out
    }

    fn round(v: Big) -> Self {
        Hp(v.with_precision(Self::precision()).value())
    }

    pub fn from_i64(n: i64) -> Self {
        Self::round(Big::from(n))
    }

    pub fn sqrt_pi() -> Self {
        let prec = Self::precision();
        SQRT_PI.with(|c| {
            let mut c = c.borrow_mut();
            if let Some((p, v)) = c.as_ref() {
                if *p == prec {
                    return Hp(v.clone());
                }
            }
            let pi = Context::<HalfEven>::new(prec + 16).pi::<2>().value();
            let v = pi.sqrt().with_precision(prec).value();
            *c = Some((prec, v.clone()));
            Hp(v)
        })
    }

    /// Twice the argument when it is an integer or half-integer.
    fn twice_integral(x: &Hp) -> Option<i64> {
        let t = x.to_f64() * 2.0;
        if t.abs() < 1e6 && t == t.round() && Hp::from_i64(t as i64) == Hp::from_f64(2.0) * x.clone() {
            Some(t as i64)
        } else {
            None
        }
    }
}

impl fmt::Debug for Hp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hp({:e})", self.to_f64())
    }
}

macro_rules! hp_binop {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr for Hp {
            type Output = Hp;
            fn $m(self, rhs: Hp) -> Hp {
                Hp(&self.0 $op &rhs.0)
            }
        }
    };
}
hp_binop!(Add, add, +);
hp_binop!(Sub, sub, -);
hp_binop!(Mul, mul, *);
hp_binop!(Div, div, /);

impl Neg for Hp {
    type Output = Hp;
    fn neg(self) -> Hp {
        Hp(-self.0)
    }
}

impl Real for Hp {
    fn from_f64(x: f64) -> Self {
        Self::round(Big::try_from(x).expect("finite f64"))
    }
    fn to_f64(&self) -> f64 {
        self.0.to_f64().value()
    }
    fn ln(&self) -> Self {
        Hp(self.0.ln())
    }
    fn exp(&self) -> Self {
        Hp(self.0.exp())
    }
    fn sqrt(&self) -> Self {
        Hp(self.0.sqrt())
    }
    fn epsilon() -> f64 {
        2f64.powi(-(Self::precision() as i32))
    }
    fn sqrt_pi() -> Self {
        Hp::sqrt_pi()
    }
    fn zero() -> Self {
        Self::from_i64(0)
    }
    fn one() -> Self {
        Self::from_i64(1)
    }
    fn abs(&self) -> Self {
        if self.0 < Big::ZERO {
            -self.clone()
        } else {
            self.clone()
        }
    }

    fn gamma(x: &Self) -> Self {
        match Self::twice_integral(x) {
            Some(t) if t % 2 == 0 => {
                let n = t / 2;
                if n <= 0 {
                    panic!("Γ pole at {n}");
                }
                (1..n).fold(Hp::one(), |acc, k| acc * Hp::from_i64(k))
            }
            Some(t) => {
                // x = t/2 with t odd; Γ(1/2) = √π
                let mut acc = Hp::sqrt_pi();
                let mut y = 1i64;
                while y < t {
                    acc = acc * Hp::from_i64(y) / Hp::from_i64(2);
                    y += 2;
                }
                while y > t {
                    y -= 2;
                    acc = acc * Hp::from_i64(2) / Hp::from_i64(y);
                }
                acc
            }
            None => {
                debug_assert!(false, "extended Γ only at integer and half-integer points");
                Hp::from_f64(gamma::gamma(x.to_f64()))
            }
        }
    }

    fn rgamma(x: &Self) -> Self {
        match Self::twice_integral(x) {
            Some(t) if t % 2 == 0 && t <= 0 => Hp::zero(),
            _ => Hp::one() / Self::gamma(x),
        }
    }

    fn digamma_shifted(x: &Self) -> Self {
        match Self::twice_integral(x) {
            Some(t) if t > 0 && t % 2 == 0 => (1..t / 2).fold(Hp::zero(), |acc, k| acc + Hp::one() / Hp::from_i64(k)),
            Some(t) if t > 0 => {
                // φ(n + 1/2) = -2 ln 2 + Σ_{k=1}^{n} 2/(2k-1)
                let n = (t - 1) / 2;
                let two = Hp::from_i64(2);
                let start = -(two.clone() * two.ln());
                (1..=n).fold(start, |acc, k| acc + two.clone() / Hp::from_i64(2 * k - 1))
            }
            _ => {
                debug_assert!(false, "extended ψ only at positive integer and half-integer points");
                Hp::from_f64(gamma::digamma_shifted(x.to_f64()))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hp_arithmetic_tracks_precision() {
        Hp::with_precision(200, || {
            let third = Hp::one() / Hp::from_i64(3);
            let back = third * Hp::from_i64(3) - Hp::one();
            assert!(back.to_f64().abs() < 1e-59);
            let tiny = Hp::from_f64(1e-40);
            let s = (Hp::one() + tiny) - Hp::one();
            assert!((s.to_f64() / 1e-40 - 1.0).abs() < 1e-15);
        });
    }

    #[test]
    fn hp_gamma_half_integers() {
        Hp::with_precision(160, || {
            let sp = std::f64::consts::PI.sqrt();
            let g = Hp::gamma(&Hp::from_f64(4.5)).to_f64();
            assert!((g - 11.631_728_396_567_45).abs() < 1e-12);
            let g = Hp::gamma(&Hp::from_f64(-1.5)).to_f64();
            assert!((g - 4.0 / 3.0 * sp).abs() < 1e-14);
            assert!((Hp::gamma(&Hp::from_f64(6.0)).to_f64() - 120.0).abs() < 1e-12);
            assert_eq!(Hp::rgamma(&Hp::from_f64(-2.0)).to_f64(), 0.0);
        });
    }

    #[test]
    fn hp_digamma_matches_f64() {
        Hp::with_precision(128, || {
            for x in [1.0, 4.0, 0.5, 3.5, 7.5] {
                let h = Hp::digamma_shifted(&Hp::from_f64(x)).to_f64();
                let f = gamma::digamma(x) + gamma::EULER_GAMMA;
                assert!((h - f).abs() < 1e-13, "x={x} {h} {f}");
            }
        });
    }
}
