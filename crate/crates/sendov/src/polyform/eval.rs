//! Evaluation of `P` and `P'` from the integral form.

use super::PolySpec;
use crate::cx::C;
use crate::dd::Dd;
use crate::quad::{integrate_segment, QuadError, QuadOpts};
use num_complex::Complex64;

/// Degree above which `eval` switches to the double-double path internally.
pub(crate) const DD_DEGREE_THRESHOLD: u32 = 128;

/// `P'(z) = ∏ (z - ζ_i)^{m_i}`.
///
/// For degrees up to 64 this is the exact complex product. Beyond that the
/// log-magnitude and the argument are accumulated separately so that
/// multiplicities up to several thousand cannot overflow or underflow
/// intermediates; values whose true magnitude exceeds the f64 range
/// saturate to infinity/zero.
pub fn eval_derivative(spec: &PolySpec, z: Complex64) -> Complex64 {
    if spec.degree() <= 64 {
        let mut acc = Complex64::new(1.0, 0.0);
        for c in spec.critical_points() {
            let base = z - c.zeta();
            for _ in 0..c.multiplicity() {
                acc *= base;
            }
        }
        acc
    } else {
        let mut log_mag = 0.0f64;
        let mut arg = 0.0f64;
        for c in spec.critical_points() {
            let t = z - c.zeta();
            let m = c.multiplicity() as f64;
            log_mag += m * t.norm().ln();
            arg += m * t.im.atan2(t.re);
        }
        let (s, cs) = arg.sin_cos();
        let mag = log_mag.exp();
        Complex64::new(mag * cs, mag * s)
    }
}

/// `P'(z)` in double-double precision (exactly-scaled product).
pub fn eval_derivative_dd(spec: &PolySpec, z: Complex64) -> (Dd, Dd) {
    let view = spec.view::<Dd>();
    let v = view.p_prime_scaled(C::from_c64(z), 0);
    (v.re, v.im)
}

/// `P(z)` by adaptive Gauss-Legendre quadrature along the straight segment
/// from `β` to `z`.
///
/// `z = β` short-circuits to exactly zero. Degrees above 128 are integrated
/// in double-double internally and rounded on return.
pub fn eval(spec: &PolySpec, z: Complex64) -> Result<Complex64, QuadError> {
    if z.re == spec.beta() && z.im == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if spec.degree() > DD_DEGREE_THRESHOLD {
        let (re, im) = eval_dd(spec, z)?;
        Ok(Complex64::new(re.to_f64(), im.to_f64()))
    } else {
        let view = spec.view::<f64>();
        let opts = QuadOpts::double();
        let f = |w: C<f64>| view.p_prime_scaled(w, 0);
        let beta = view.beta;
        let v = integrate_segment(&f, beta, C::from_c64(z), &opts)?;
        Ok(v.to_c64())
    }
}

/// `P(z)` in double-double precision.
pub fn eval_dd(spec: &PolySpec, z: Complex64) -> Result<(Dd, Dd), QuadError> {
    let view = spec.view::<Dd>();
    let opts = QuadOpts::double_double();
    let f = |w: C<Dd>| view.p_prime_scaled(w, 0);
    let v = integrate_segment(&f, view.beta, C::from_c64(z), &opts)?;
    Ok((v.re, v.im))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyform::CriticalPoint;

    fn simple_square() -> PolySpec {
        // P'(w) = w, P(z) = z^2/2
        PolySpec::new(0.0, vec![CriticalPoint::new(Complex64::new(0.0, 0.0), 1).unwrap()]).unwrap()
    }

    fn counterexample_quartic() -> PolySpec {
        PolySpec::from_decimal_beta(
            "0.674",
            vec![
                CriticalPoint::from_decimal("-0.24", "0.38", 1).unwrap(),
                CriticalPoint::from_decimal("-0.13", "-0.25", 2).unwrap(),
            ],
        )
        .unwrap()
    }

    #[test]
    fn derivative_simple_point() {
        let spec = simple_square();
        let v = eval_derivative(&spec, Complex64::new(3.0, 0.0));
        assert_eq!(v, Complex64::new(3.0, 0.0));
    }

    #[test]
    fn derivative_vanishes_at_critical_point() {
        let spec = counterexample_quartic();
        let v = eval_derivative(&spec, Complex64::new(-0.24, 0.38));
        assert_eq!(v, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn counterexample_derivative_magnitude_at_beta() {
        // |P'(β)| of the monic product; the quartic written with a leading
        // factor 4 has 4x this, ≈ 2.807.
        let spec = counterexample_quartic();
        let v = eval_derivative(&spec, Complex64::new(0.674, 0.0));
        assert!((v.norm() - 0.70171798788992759866).abs() < 1e-14);
        assert!((4.0 * v.norm() - 2.807).abs() < 1e-3);
    }

    #[test]
    fn eval_squares() {
        let spec = simple_square();
        let v = eval(&spec, Complex64::new(1.0, 0.0)).unwrap();
        assert!((v - Complex64::new(0.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn eval_at_beta_is_exactly_zero() {
        let spec = counterexample_quartic();
        let v = eval(&spec, Complex64::new(spec.beta(), 0.0)).unwrap();
        assert_eq!(v, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn eval_z5_minus_z_vanishes_at_one() {
        // crits at (1/5)^{1/4} times 4th roots of unity give P = (z^5 - z)/5,
        // which vanishes at z = 1.
        let r = (1.0f64 / 5.0).powf(0.25);
        let crits = (0..4)
            .map(|k| {
                let th = std::f64::consts::FRAC_PI_2 * k as f64;
                CriticalPoint::new(Complex64::from_polar(r, th), 1).unwrap()
            })
            .collect();
        let spec = PolySpec::new(0.0, crits).unwrap();
        let v = eval(&spec, Complex64::new(1.0, 0.0)).unwrap();
        assert!(v.norm() < 1e-14, "|P(1)| = {}", v.norm());
        // and the closed-form antiderivative at another point
        let z = Complex64::new(0.3, -0.8);
        let want = (z.powu(5) - z) / 5.0;
        let got = eval(&spec, z).unwrap();
        assert!((got - want).norm() < 1e-13 * (1.0 + want.norm()));
    }

    #[test]
    fn log_accumulation_path_matches_closed_form() {
        // degree 101: P'(w) = w^100, so P(z) = (z^101 - β^101)/101
        let spec =
            PolySpec::new(0.5, vec![CriticalPoint::new(Complex64::new(0.0, 0.0), 100).unwrap()])
                .unwrap();
        let z = Complex64::new(1.1, 0.3);
        let v = eval_derivative(&spec, z);
        let want = z.powu(100);
        assert!((v - want).norm() < 1e-11 * want.norm());
    }
}
