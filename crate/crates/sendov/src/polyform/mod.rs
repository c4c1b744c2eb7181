//! Polynomial specifications in integral form.
//!
//! A [`PolySpec`] describes `P(z) = ∫_β^z ∏_i (w - ζ_i)^{m_i} dw`: a root
//! pinned at `β ∈ [0, 1]` on the real axis plus the critical points of `P`
//! with multiplicities. The degree is `n = 1 + Σ m_i` and the leading
//! coefficient is `1/n` (the derivative is kept monic; external constant
//! factors change neither roots nor critical points).
//!
//! Coordinates are stored in double-double precision so that specs ingested
//! from decimal text keep every printed digit; plain `f64` views are derived
//! from them.

mod eval;
mod expand;
mod json;

pub use eval::{eval, eval_derivative, eval_dd, eval_derivative_dd};
pub use expand::{expand_coefficients, expand_coefficients_with_cap, CoefficientPoly};
pub use json::{spec_from_json, spec_to_json, SpecDocument};

use crate::cx::{Real, C};
use crate::dd::{Dd, DdParseError};
use num_complex::Complex64;
use thiserror::Error;

/// Default cap for dense coefficient expansion; beyond this the dense
/// representation is numerically unsafe.
pub const EXPAND_DEGREE_CAP: u32 = 64;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum SpecError {
    #[error("beta must lie in [0, 1], got {0}")]
    InvalidBeta(f64),
    #[error("critical point multiplicity must be >= 1")]
    ZeroMultiplicity,
    #[error("a spec needs at least one critical point")]
    NoCriticalPoints,
    #[error(transparent)]
    BadDecimal(#[from] DdParseError),
}

/// One distinct critical point with its multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalPoint {
    zeta: C<Dd>,
    m: u32,
}

impl CriticalPoint {
    pub fn new(zeta: Complex64, m: u32) -> Result<Self, SpecError> {
        if m == 0 {
            return Err(SpecError::ZeroMultiplicity);
        }
        Ok(CriticalPoint {
            zeta: C::from_c64(zeta),
            m,
        })
    }

    /// Build from decimal strings, keeping all printed digits.
    pub fn from_decimal(re: &str, im: &str, m: u32) -> Result<Self, SpecError> {
        if m == 0 {
            return Err(SpecError::ZeroMultiplicity);
        }
        Ok(CriticalPoint {
            zeta: C::new(Dd::parse(re)?, Dd::parse(im)?),
            m,
        })
    }

    pub fn zeta(&self) -> Complex64 {
        self.zeta.to_c64()
    }

    pub(crate) fn zeta_dd(&self) -> C<Dd> {
        self.zeta
    }

    pub fn multiplicity(&self) -> u32 {
        self.m
    }

    /// The conjugate point with the same multiplicity.
    pub fn conjugate(&self) -> Self {
        CriticalPoint {
            zeta: self.zeta.conj(),
            m: self.m,
        }
    }
}

/// A polynomial `P(z) = ∫_β^z ∏ (w - ζ_i)^{m_i} dw`.
///
/// Immutable after construction; all operations on it are pure, so values
/// can be shared freely across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct PolySpec {
    beta: Dd,
    crits: Vec<CriticalPoint>,
}

impl PolySpec {
    pub fn new(beta: f64, crits: Vec<CriticalPoint>) -> Result<Self, SpecError> {
        Self::with_beta_dd(Dd::from_f64(beta), crits)
    }

    /// Build with `beta` given as a decimal string (digit-exact).
    pub fn from_decimal_beta(beta: &str, crits: Vec<CriticalPoint>) -> Result<Self, SpecError> {
        Self::with_beta_dd(Dd::parse(beta)?, crits)
    }

    pub(crate) fn with_beta_dd(beta: Dd, crits: Vec<CriticalPoint>) -> Result<Self, SpecError> {
        let b = beta.to_f64();
        if !(0.0..=1.0).contains(&b) || !b.is_finite() {
            return Err(SpecError::InvalidBeta(b));
        }
        if crits.is_empty() {
            return Err(SpecError::NoCriticalPoints);
        }
        Ok(PolySpec { beta, crits })
    }

    pub fn beta(&self) -> f64 {
        self.beta.to_f64()
    }

    pub(crate) fn beta_dd(&self) -> Dd {
        self.beta
    }

    pub fn critical_points(&self) -> &[CriticalPoint] {
        &self.crits
    }

    /// Degree of `P`: `1 + Σ m_i`.
    pub fn degree(&self) -> u32 {
        1 + self.crits.iter().map(|c| c.m).sum::<u32>()
    }

    /// Largest critical-point modulus (0 never happens: crits nonempty).
    pub fn max_crit_modulus(&self) -> f64 {
        self.crits
            .iter()
            .map(|c| c.zeta.to_c64().norm())
            .fold(0.0, f64::max)
    }

    /// Precision-generic view of the defining data.
    pub(crate) fn view<R: Real>(&self) -> SpecView<R> {
        SpecView {
            beta: C::new(R::from_f64(self.beta.hi) + R::from_f64(self.beta.lo), R::zero()),
            crits: self
                .crits
                .iter()
                .map(|c| {
                    (
                        C::new(
                            R::from_f64(c.zeta.re.hi) + R::from_f64(c.zeta.re.lo),
                            R::from_f64(c.zeta.im.hi) + R::from_f64(c.zeta.im.lo),
                        ),
                        c.m,
                    )
                })
                .collect(),
            degree: self.degree(),
        }
    }
}

/// Defining data of a spec lowered to one working precision.
#[derive(Debug, Clone)]
pub(crate) struct SpecView<R> {
    pub beta: C<R>,
    pub crits: Vec<(C<R>, u32)>,
    pub degree: u32,
}

impl<R: Real> SpecView<R> {
    /// Scaled derivative `2^{-kappa} ∏ (z - ζ_i)^{m_i}`, computed as an
    /// exactly-scaled product (complex mantissa, power-of-two exponent
    /// carried separately) so multiplicities in the thousands neither
    /// overflow nor underflow intermediates.
    pub fn p_prime_scaled(&self, z: C<R>, kappa: i64) -> C<R> {
        let mut mant = C::<R>::one();
        let mut e2: i64 = -kappa;
        for &(zeta, m) in &self.crits {
            let mut base = z - zeta;
            let mut base_e: i64 = 0;
            renorm(&mut base, &mut base_e);
            let mut k = m;
            while k > 0 {
                if k & 1 == 1 {
                    mant = mant * base;
                    e2 += base_e;
                    renorm(&mut mant, &mut e2);
                }
                k >>= 1;
                if k > 0 {
                    base = base * base;
                    base_e *= 2;
                    renorm(&mut base, &mut base_e);
                }
            }
        }
        materialize(mant, e2)
    }

    /// Base-2 logarithm of `|P'(z)|`, always finite-range (used to pick the
    /// global scaling exponent).
    pub fn log2_p_prime_mag(&self, z: C<R>) -> f64 {
        let mut acc = 0.0f64;
        for &(zeta, m) in &self.crits {
            let r = (z - zeta).abs().to_f64();
            if r == 0.0 {
                return f64::NEG_INFINITY;
            }
            acc += m as f64 * r.log2();
        }
        acc
    }
}

/// Pull the exponent out of `x` whenever its components drift far from 1.
#[inline]
fn renorm<R: Real>(x: &mut C<R>, e2: &mut i64) {
    let ex = x.max_exponent();
    if ex.abs() > 256 {
        *x = x.ldexp(-ex);
        *e2 += ex as i64;
    }
}

/// `mant * 2^{e2}`, saturating to 0 / infinity outside the f64 range.
#[inline]
fn materialize<R: Real>(mant: C<R>, e2: i64) -> C<R> {
    if e2 == 0 {
        return mant;
    }
    if e2 > 1_100_000 || e2 < -1_100_000 {
        // absurd exponent: saturate by sign of exponent
        return if e2 > 0 {
            C::from_f64(f64::INFINITY, f64::INFINITY)
        } else {
            C::zero()
        };
    }
    mant.ldexp(e2 as i32)
}
