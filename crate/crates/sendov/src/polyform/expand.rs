//! Dense coefficient expansion for small degrees.

use super::{PolySpec, EXPAND_DEGREE_CAP};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ExpandError {
    #[error("degree {degree} exceeds the dense expansion cap {cap}")]
    DegreeTooLarge { degree: u32, cap: u32 },
}

/// Dense polynomial in ascending coefficient order.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientPoly {
    /// `coeffs[k]` multiplies `z^k`; length is `degree + 1`.
    pub coeffs: Vec<Complex64>,
}

impl CoefficientPoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> Complex64 {
        *self.coeffs.last().expect("nonempty coefficients")
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Formal derivative.
    pub fn derivative(&self) -> CoefficientPoly {
        if self.coeffs.len() <= 1 {
            return CoefficientPoly {
                coeffs: vec![Complex64::new(0.0, 0.0)],
            };
        }
        CoefficientPoly {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        }
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[Complex64]) -> CoefficientPoly {
        let mut asc = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); asc.len() + 1];
            for (k, &c) in asc.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= r * c;
            }
            asc = next;
        }
        CoefficientPoly { coeffs: asc }
    }
}

/// Coefficients of `P` by convolving the linear factors of `P'` and
/// integrating term by term; the constant term is fixed by `P(β) = 0` and
/// the leading coefficient is `1/n`.
pub fn expand_coefficients(spec: &PolySpec) -> Result<CoefficientPoly, ExpandError> {
    expand_coefficients_with_cap(spec, EXPAND_DEGREE_CAP)
}

/// As [`expand_coefficients`] with a caller-chosen degree cap.
pub fn expand_coefficients_with_cap(
    spec: &PolySpec,
    cap: u32,
) -> Result<CoefficientPoly, ExpandError> {
    let n = spec.degree();
    if n > cap {
        return Err(ExpandError::DegreeTooLarge { degree: n, cap });
    }
    // P' as a monic dense polynomial, ascending order.
    let mut dp = vec![Complex64::new(1.0, 0.0)];
    for c in spec.critical_points() {
        let zeta = c.zeta();
        for _ in 0..c.multiplicity() {
            let mut next = vec![Complex64::new(0.0, 0.0); dp.len() + 1];
            for (k, &a) in dp.iter().enumerate() {
                next[k + 1] += a;
                next[k] -= zeta * a;
            }
            dp = next;
        }
    }
    // integrate: coefficient of z^{k+1} in P is dp[k] / (k+1)
    let mut coeffs = vec![Complex64::new(0.0, 0.0); dp.len() + 1];
    for (k, &a) in dp.iter().enumerate() {
        coeffs[k + 1] = a / (k + 1) as f64;
    }
    // constant term from P(beta) = 0
    let beta = Complex64::new(spec.beta(), 0.0);
    let mut s = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().skip(1).rev() {
        s = (s + c) * beta;
    }
    coeffs[0] = -s;
    Ok(CoefficientPoly { coeffs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyform::CriticalPoint;

    #[test]
    fn simple_square_coefficients() {
        let spec = PolySpec::new(
            0.0,
            vec![CriticalPoint::new(Complex64::new(0.0, 0.0), 1).unwrap()],
        )
        .unwrap();
        let p = expand_coefficients(&spec).unwrap();
        assert_eq!(p.coeffs.len(), 3);
        assert!((p.coeffs[0]).norm() < 1e-16);
        assert!((p.coeffs[1]).norm() < 1e-16);
        assert!((p.coeffs[2] - Complex64::new(0.5, 0.0)).norm() < 1e-16);
    }

    #[test]
    fn cube_at_beta_one() {
        // β = 1, double critical point at 0: P = (z^3 - 1)/3
        let spec = PolySpec::new(
            1.0,
            vec![CriticalPoint::new(Complex64::new(0.0, 0.0), 2).unwrap()],
        )
        .unwrap();
        let p = expand_coefficients(&spec).unwrap();
        let want = [
            Complex64::new(-1.0 / 3.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0 / 3.0, 0.0),
        ];
        for (g, w) in p.coeffs.iter().zip(want.iter()) {
            assert!((g - w).norm() < 1e-15);
        }
    }

    #[test]
    fn leading_coefficient_is_one_over_n() {
        let spec = PolySpec::new(
            0.3,
            vec![
                CriticalPoint::new(Complex64::new(0.1, 0.2), 2).unwrap(),
                CriticalPoint::new(Complex64::new(-0.4, 0.0), 3).unwrap(),
            ],
        )
        .unwrap();
        let n = spec.degree();
        let p = expand_coefficients(&spec).unwrap();
        assert_eq!(p.degree(), n as usize);
        assert!((p.leading() - Complex64::new(1.0 / n as f64, 0.0)).norm() < 1e-16);
        // P(beta) = 0 by construction
        assert!(p.eval(Complex64::new(spec.beta(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn cap_enforced() {
        let spec = PolySpec::new(
            0.5,
            vec![CriticalPoint::new(Complex64::new(0.0, 0.0), 100).unwrap()],
        )
        .unwrap();
        assert!(matches!(
            expand_coefficients(&spec),
            Err(ExpandError::DegreeTooLarge { degree: 101, cap: 64 })
        ));
        assert!(expand_coefficients_with_cap(&spec, 128).is_ok());
    }

    #[test]
    fn from_roots_round_trip() {
        let roots = [
            Complex64::new(0.5, 0.0),
            Complex64::new(-0.25, 0.4),
            Complex64::new(-0.25, -0.4),
        ];
        let p = CoefficientPoly::from_roots(&roots);
        for &r in &roots {
            assert!(p.eval(r).norm() < 1e-14);
        }
        assert!((p.leading() - Complex64::new(1.0, 0.0)).norm() < 1e-16);
    }
}
