//! Double-double arithmetic: an unevaluated sum of two `f64`s giving
//! roughly 31 significant decimal digits.
//!
//! This is the extended-precision backbone used when configurations have
//! features below binary64 resolution (for example `1 - beta` around 1e-9
//! while `beta` itself is stored against 1). Only the field operations,
//! square roots and decimal conversions are provided; that is all the
//! evaluation pipeline needs.
//!
//! The error-free transforms are the classic Dekker/Knuth ones; no FMA is
//! assumed so results are identical across targets.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Splitter constant 2^27 + 1 for Dekker's product.
const SPLIT: f64 = 134_217_729.0;

/// Knuth two-sum: `a + b = s + e` exactly, no magnitude assumption.
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let v = s - a;
    let e = (a - (s - v)) + (b - v);
    (s, e)
}

/// Fast two-sum, valid when `|a| >= |b|`.
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

/// Dekker split of a double into high and low 26-bit halves.
#[inline]
fn split(a: f64) -> (f64, f64) {
    let t = SPLIT * a;
    let hi = t - (t - a);
    (hi, a - hi)
}

/// Dekker product: `a * b = p + e` exactly.
#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    let e = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
    (p, e)
}

/// A double-double value `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Copy, Clone, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

pub const DD_ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
pub const DD_ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

impl Dd {
    #[inline]
    pub const fn new(hi: f64, lo: f64) -> Self {
        Dd { hi, lo }
    }

    #[inline]
    pub fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    /// Exact sum of two doubles as a Dd.
    #[inline]
    pub fn from_sum(a: f64, b: f64) -> Self {
        let (s, e) = two_sum(a, b);
        Dd { hi: s, lo: e }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    #[inline]
    pub fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    pub fn sqrt(self) -> Self {
        if self.hi == 0.0 && self.lo == 0.0 {
            return DD_ZERO;
        }
        debug_assert!(self.hi > 0.0, "sqrt of negative dd");
        // One Newton/Karp step on the f64 estimate doubles its digits.
        let x = 1.0 / self.hi.sqrt();
        let ax = self.hi * x;
        let ax_dd = Dd::from_f64(ax);
        let err = self - ax_dd * ax_dd;
        ax_dd + Dd::from_f64(err.hi * (x * 0.5))
    }

    /// Exact scale by a power of two.
    #[inline]
    pub fn ldexp(self, e: i32) -> Self {
        // Split large shifts so each factor stays a normal power of two.
        if e.abs() <= 1000 {
            let f = pow2(e);
            Dd {
                hi: self.hi * f,
                lo: self.lo * f,
            }
        } else {
            let half = e / 2;
            self.ldexp(half).ldexp(e - half)
        }
    }

    /// floor(log2 |x|) of the leading component; 0 for zero/non-finite.
    #[inline]
    pub fn exponent(self) -> i32 {
        if self.hi == 0.0 || !self.hi.is_finite() {
            0
        } else {
            ((self.hi.to_bits() >> 52) & 0x7ff) as i32 - 1023
        }
    }

    pub fn recip(self) -> Self {
        DD_ONE / self
    }

    /// Parse a decimal string, keeping every printed digit to dd accuracy.
    ///
    /// Accepts optional sign, decimal point and a case-insensitive exponent
    /// (`1.5e-7`, `-4.07E-7`).
    pub fn parse(text: &str) -> Result<Self, DdParseError> {
        let s = text.trim();
        let bytes = s.as_bytes();
        if bytes.is_empty() {
            return Err(DdParseError::empty(text));
        }
        let mut i = 0;
        let neg = match bytes[0] {
            b'-' => {
                i += 1;
                true
            }
            b'+' => {
                i += 1;
                false
            }
            _ => false,
        };
        let mut acc = DD_ZERO;
        let mut digits = 0usize;
        let mut frac_len: i32 = 0;
        let mut seen_point = false;
        while i < bytes.len() {
            match bytes[i] {
                b'0'..=b'9' => {
                    acc = acc * Dd::from_f64(10.0) + Dd::from_f64((bytes[i] - b'0') as f64);
                    digits += 1;
                    if seen_point {
                        frac_len += 1;
                    }
                    i += 1;
                }
                b'.' if !seen_point => {
                    seen_point = true;
                    i += 1;
                }
                b'e' | b'E' => break,
                _ => return Err(DdParseError::bad_char(text, i)),
            }
        }
        if digits == 0 {
            return Err(DdParseError::empty(text));
        }
        let mut exp: i32 = 0;
        if i < bytes.len() {
            // exponent part
            i += 1;
            let rest = &s[i..];
            exp = rest
                .parse::<i32>()
                .map_err(|_| DdParseError::bad_exponent(text))?;
        }
        let scale = exp - frac_len;
        // dividing by an exact positive power keeps a single rounding
        let mut v = if scale < 0 && scale >= -31 {
            acc / pow10(-scale)
        } else {
            acc * pow10(scale)
        };
        if neg {
            v = -v;
        }
        Ok(v)
    }

    /// Format with `sig` significant decimal digits (round-half-away).
    pub fn to_decimal_string(self, sig: usize) -> String {
        debug_assert!(sig >= 1 && sig <= 34);
        if !self.is_finite() {
            return format!("{}", self.hi);
        }
        if self.hi == 0.0 && self.lo == 0.0 {
            return "0".to_string();
        }
        let neg = self.hi < 0.0;
        let mut v = self.abs();
        // decimal exponent of the leading digit
        let mut e10 = v.hi.abs().log10().floor() as i32;
        v = v * pow10(-e10);
        // guard against log10 rounding at decade boundaries
        if v.hi >= 10.0 {
            v = v * pow10(-1);
            e10 += 1;
        } else if v.hi < 1.0 {
            v = v * pow10(1);
            e10 -= 1;
        }
        let mut digits = Vec::with_capacity(sig + 1);
        for _ in 0..sig {
            let d = v.hi.floor();
            let d = d.clamp(0.0, 9.0);
            digits.push(d as u8);
            v = (v - Dd::from_f64(d)) * Dd::from_f64(10.0);
        }
        // round on the next digit
        if v.hi >= 5.0 {
            let mut k = sig;
            loop {
                if k == 0 {
                    digits.insert(0, 1);
                    e10 += 1;
                    digits.truncate(sig);
                    break;
                }
                k -= 1;
                if digits[k] == 9 {
                    digits[k] = 0;
                } else {
                    digits[k] += 1;
                    break;
                }
            }
        }
        let mut mantissa = String::new();
        if neg {
            mantissa.push('-');
        }
        mantissa.push((b'0' + digits[0]) as char);
        if sig > 1 {
            mantissa.push('.');
            for &d in &digits[1..] {
                mantissa.push((b'0' + d) as char);
            }
        }
        if e10 == 0 {
            mantissa
        } else {
            format!("{}e{}", mantissa, e10)
        }
    }
}

/// 2^e as f64 (|e| <= 1023).
#[inline]
fn pow2(e: i32) -> f64 {
    f64::from_bits(((e + 1023) as u64) << 52)
}

/// 10^e in dd, exact up to 10^31 and correctly rounded beyond.
pub fn pow10(e: i32) -> Dd {
    if e == 0 {
        return DD_ONE;
    }
    let neg = e < 0;
    let mut k = e.unsigned_abs();
    let mut base = Dd::from_f64(10.0);
    let mut acc = DD_ONE;
    while k > 0 {
        if k & 1 == 1 {
            acc = acc * base;
        }
        base = base * base;
        k >>= 1;
    }
    if neg {
        DD_ONE / acc
    } else {
        acc
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid decimal literal {text:?}: {reason}")]
pub struct DdParseError {
    pub text: String,
    pub reason: String,
}

impl DdParseError {
    fn empty(t: &str) -> Self {
        DdParseError {
            text: t.to_string(),
            reason: "no digits".into(),
        }
    }
    fn bad_char(t: &str, at: usize) -> Self {
        DdParseError {
            text: t.to_string(),
            reason: format!("unexpected character at byte {at}"),
        }
    }
    fn bad_exponent(t: &str) -> Self {
        DdParseError {
            text: t.to_string(),
            reason: "malformed exponent".into(),
        }
    }
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, rhs: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, rhs.hi);
        let (t, f) = two_sum(self.lo, rhs.lo);
        let (s, e2) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e2 + f);
        Dd { hi, lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, rhs: Dd) -> Dd {
        self + (-rhs)
    }
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, rhs: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let e = e + (self.hi * rhs.lo + self.lo * rhs.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    #[inline]
    fn div(self, rhs: Dd) -> Dd {
        let q1 = self.hi / rhs.hi;
        if !q1.is_finite() {
            return Dd::from_f64(q1);
        }
        let r = self - rhs.mul_f64(q1);
        let q2 = r.hi / rhs.hi;
        let r = r - rhs.mul_f64(q2);
        let q3 = r.hi / rhs.hi;
        let (s, e) = quick_two_sum(q1, q2);
        Dd::from_sum(s, e + q3)
    }
}

impl Dd {
    #[inline]
    pub fn mul_f64(self, rhs: f64) -> Dd {
        let (p, e) = two_prod(self.hi, rhs);
        let (hi, lo) = quick_two_sum(p, e + self.lo * rhs);
        Dd { hi, lo }
    }

    #[inline]
    pub fn add_f64(self, rhs: f64) -> Dd {
        let (s, e) = two_sum(self.hi, rhs);
        let (hi, lo) = quick_two_sum(s, e + self.lo);
        Dd { hi, lo }
    }
}

impl PartialOrd for Dd {
    #[inline]
    fn partial_cmp(&self, other: &Dd) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            ord => ord,
        }
    }
}

impl fmt::Debug for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dd({:e} + {:e})", self.hi, self.lo)
    }
}

impl fmt::Display for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal_string(32))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_identities() {
        let a = Dd::parse("0.1").unwrap();
        let b = Dd::parse("0.2").unwrap();
        let c = a + b;
        let d = Dd::parse("0.3").unwrap();
        assert!((c - d).to_f64().abs() < 1e-31);
        let p = a * b;
        let q = Dd::parse("0.02").unwrap();
        assert!((p - q).to_f64().abs() < 1e-32);
    }

    #[test]
    fn division_and_sqrt() {
        let x = Dd::from_f64(2.0);
        let r = x.sqrt();
        let back = r * r - x;
        assert!(back.to_f64().abs() < 1e-31);
        let t = DD_ONE / Dd::from_f64(3.0);
        let three_t = t.mul_f64(3.0);
        assert!((three_t - DD_ONE).to_f64().abs() < 1e-31);
    }

    #[test]
    fn parse_preserves_tiny_complements() {
        // 1 - 0.999999998817902 must come out as exactly the decimal complement.
        let beta = Dd::parse("0.999999998817902").unwrap();
        let one_minus = DD_ONE - beta;
        let expect = Dd::parse("1.182098e-9").unwrap();
        // parse rounds at the dd epsilon on the value ~1, which is ~1e-23
        // relative to the 1e-9-scale complement
        let rel = ((one_minus - expect) / expect).to_f64().abs();
        assert!(rel < 1e-21, "rel = {rel}");
    }

    #[test]
    fn parse_scientific_case_insensitive() {
        let a = Dd::parse("-4.07186589509001E-7").unwrap();
        let b = Dd::parse("-4.07186589509001e-7").unwrap();
        assert_eq!(a.hi, b.hi);
        assert_eq!(a.lo, b.lo);
        assert!((a.to_f64() + 4.07186589509001e-7).abs() < 1e-22);
    }

    #[test]
    fn format_round_trip() {
        for s in [
            "0.788188270312241",
            "-0.00478291485722727",
            "0.999999998817902",
            "123.456",
            "1e-30",
        ] {
            let v = Dd::parse(s).unwrap();
            let t = v.to_decimal_string(32);
            let v2 = Dd::parse(&t).unwrap();
            assert_eq!(v.hi, v2.hi, "{s} -> {t}");
            assert!((v.lo - v2.lo).abs() <= v.hi.abs() * 1e-31, "{s} -> {t}");
        }
    }

    #[test]
    fn ldexp_exponent() {
        let x = Dd::parse("1.5").unwrap();
        let y = x.ldexp(100);
        assert_eq!(y.hi, 1.5 * 2f64.powi(100));
        assert_eq!(Dd::from_f64(8.0).exponent(), 3);
        let z = x.ldexp(900).ldexp(-900);
        assert_eq!(z.hi, 1.5);
    }

    #[test]
    fn rejects_garbage() {
        assert!(Dd::parse("").is_err());
        assert!(Dd::parse("abc").is_err());
        assert!(Dd::parse("1.2.3").is_err());
        assert!(Dd::parse("1e").is_err());
    }
}
