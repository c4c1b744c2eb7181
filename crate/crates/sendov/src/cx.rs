//! Precision-generic scalars: a minimal `Real` trait implemented by `f64`
//! and [`Dd`], and a complex type `C<R>` over either.
//!
//! Everything in the evaluation pipeline (quadrature, root iteration,
//! winding counts) is written once against these and instantiated at both
//! precisions.

use crate::dd::Dd;
use num_complex::Complex64;
use std::ops::{Add, Div, Mul, Neg, Sub};

pub trait Real:
    Copy
    + PartialEq
    + PartialOrd
    + std::fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Short name used in reports ("double" / "dd").
    const NAME: &'static str;
    /// Unit roundoff of the representation.
    const EPSILON: f64;

    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn abs(self) -> Self;
    fn sqrt(self) -> Self;
    /// Exact scale by 2^e.
    fn ldexp(self, e: i32) -> Self;
    /// floor(log2 |x|), 0 for zero/non-finite.
    fn exponent(self) -> i32;
    fn is_finite(self) -> bool;

    #[inline]
    fn zero() -> Self {
        Self::from_f64(0.0)
    }
    #[inline]
    fn one() -> Self {
        Self::from_f64(1.0)
    }
}

impl Real for f64 {
    const NAME: &'static str = "double";
    const EPSILON: f64 = f64::EPSILON;

    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }
    #[inline]
    fn to_f64(self) -> f64 {
        self
    }
    #[inline]
    fn abs(self) -> Self {
        f64::abs(self)
    }
    #[inline]
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    #[inline]
    fn ldexp(self, e: i32) -> Self {
        if e.abs() <= 1000 {
            self * f64::from_bits(((e + 1023) as u64) << 52)
        } else {
            let half = e / 2;
            self.ldexp(half).ldexp(e - half)
        }
    }
    #[inline]
    fn exponent(self) -> i32 {
        if self == 0.0 || !self.is_finite() {
            0
        } else {
            ((self.to_bits() >> 52) & 0x7ff) as i32 - 1023
        }
    }
    #[inline]
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
}

impl Real for Dd {
    const NAME: &'static str = "dd";
    const EPSILON: f64 = 4.93e-32; // 2^-104

    #[inline]
    fn from_f64(x: f64) -> Self {
        Dd::from_f64(x)
    }
    #[inline]
    fn to_f64(self) -> f64 {
        Dd::to_f64(self)
    }
    #[inline]
    fn abs(self) -> Self {
        Dd::abs(self)
    }
    #[inline]
    fn sqrt(self) -> Self {
        Dd::sqrt(self)
    }
    #[inline]
    fn ldexp(self, e: i32) -> Self {
        Dd::ldexp(self, e)
    }
    #[inline]
    fn exponent(self) -> i32 {
        Dd::exponent(self)
    }
    #[inline]
    fn is_finite(self) -> bool {
        Dd::is_finite(self)
    }
}

/// Complex number over a generic real scalar.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct C<R> {
    pub re: R,
    pub im: R,
}

impl<R: Real> C<R> {
    #[inline]
    pub fn new(re: R, im: R) -> Self {
        C { re, im }
    }

    #[inline]
    pub fn zero() -> Self {
        C::new(R::zero(), R::zero())
    }

    #[inline]
    pub fn one() -> Self {
        C::new(R::one(), R::zero())
    }

    #[inline]
    pub fn from_f64(re: f64, im: f64) -> Self {
        C::new(R::from_f64(re), R::from_f64(im))
    }

    #[inline]
    pub fn from_c64(z: Complex64) -> Self {
        C::from_f64(z.re, z.im)
    }

    #[inline]
    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    #[inline]
    pub fn conj(self) -> Self {
        C::new(self.re, -self.im)
    }

    #[inline]
    pub fn scale(self, s: R) -> Self {
        C::new(self.re * s, self.im * s)
    }

    #[inline]
    pub fn ldexp(self, e: i32) -> Self {
        C::new(self.re.ldexp(e), self.im.ldexp(e))
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    /// Modulus, computed overflow-safely (hypot style).
    pub fn abs(self) -> R {
        let a = self.re.abs();
        let b = self.im.abs();
        let (big, small) = if a < b { (b, a) } else { (a, b) };
        if big == R::zero() {
            return R::zero();
        }
        let t = small / big;
        big * (R::one() + t * t).sqrt()
    }

    /// Squared modulus; may overflow for huge components.
    #[inline]
    pub fn norm_sqr(self) -> R {
        self.re * self.re + self.im * self.im
    }

    /// max(|re|, |im|) exponent, for renormalization decisions.
    #[inline]
    pub fn max_exponent(self) -> i32 {
        self.re.exponent().max(self.im.exponent())
    }

    /// Argument through f64 (sufficient for winding decisions).
    #[inline]
    pub fn arg_f64(self) -> f64 {
        self.im.to_f64().atan2(self.re.to_f64())
    }

    pub fn recip(self) -> Self {
        C::one() / self
    }
}

impl<R: Real> Add for C<R> {
    type Output = C<R>;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        C::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl<R: Real> Sub for C<R> {
    type Output = C<R>;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        C::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl<R: Real> Neg for C<R> {
    type Output = C<R>;
    #[inline]
    fn neg(self) -> Self {
        C::new(-self.re, -self.im)
    }
}

impl<R: Real> Mul for C<R> {
    type Output = C<R>;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        C::new(
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
        )
    }
}

impl<R: Real> Div for C<R> {
    type Output = C<R>;
    /// Smith's algorithm, robust against component over/underflow.
    fn div(self, rhs: Self) -> Self {
        if rhs.re.abs() >= rhs.im.abs() {
            if rhs.re == R::zero() {
                // denominator is exactly zero
                return C::from_f64(self.re.to_f64() / 0.0, self.im.to_f64() / 0.0);
            }
            let r = rhs.im / rhs.re;
            let den = rhs.re + rhs.im * r;
            C::new((self.re + self.im * r) / den, (self.im - self.re * r) / den)
        } else {
            let r = rhs.re / rhs.im;
            let den = rhs.re * r + rhs.im;
            C::new((self.re * r + self.im) / den, (self.im * r - self.re) / den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_field_ops_f64() {
        let a: C<f64> = C::from_f64(1.0, 2.0);
        let b: C<f64> = C::from_f64(-0.5, 0.25);
        let p = a * b;
        let q = p / b;
        assert!((q - a).abs() < 1e-14);
        assert!((a.abs() - 5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn complex_field_ops_dd() {
        let a: C<Dd> = C::from_f64(0.3, -0.7);
        let b: C<Dd> = C::from_f64(1.9, 0.2);
        let q = (a * b) / b;
        assert!((q - a).abs().to_f64() < 1e-30);
    }

    #[test]
    fn hypot_avoids_overflow() {
        let a: C<f64> = C::from_f64(1e300, 1e300);
        assert!(a.abs().is_finite());
    }

    #[test]
    fn smith_division_extreme_scales() {
        let a: C<f64> = C::from_f64(1e250, -3e250);
        let b: C<f64> = C::from_f64(2e250, 1e250);
        let q = a / b;
        assert!(q.is_finite());
        // reference in modest scale
        let ar: C<f64> = C::from_f64(1.0, -3.0);
        let br: C<f64> = C::from_f64(2.0, 1.0);
        let qr = ar / br;
        assert!((q - qr).abs() < 1e-14);
    }
}
