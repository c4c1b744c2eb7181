//! All roots of a small dense polynomial (Aberth on Horner evaluation).
//!
//! Used for the rooted-derivative constructions (lines, quartics) and as
//! an independent route in tests. Not meant for high degrees; the
//! integral-form solver in this module's parent handles those.

use super::RootError;
use crate::polyform::CoefficientPoly;
use num_complex::Complex64;

/// All roots of `p` (degree ≥ 1, finite coefficients, nonzero leading).
pub fn dense_roots(p: &CoefficientPoly) -> Result<Vec<Complex64>, RootError> {
    let n = p.degree();
    let lead = p.leading();
    assert!(lead.norm() > 0.0, "leading coefficient must be nonzero");
    if n == 0 {
        return Ok(vec![]);
    }
    if n == 1 {
        return Ok(vec![-p.coeffs[0] / p.coeffs[1]]);
    }
    let dp = p.derivative();
    // classic Cauchy-style initialization radius
    let r0 = (1.0
        + p.coeffs[..n]
            .iter()
            .map(|c| (c / lead).norm())
            .fold(0.0, f64::max))
    .min(8.0);
    let mut zs: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(r0, std::f64::consts::TAU * (k as f64 + 0.37) / n as f64))
        .collect();
    let max_sweeps = 300;
    for _sweep in 0..max_sweeps {
        let mut max_rel = 0.0f64;
        for k in 0..n {
            let z = zs[k];
            let pv = p.eval(z);
            if pv.norm() == 0.0 {
                continue;
            }
            let dv = dp.eval(z);
            let nwt = if dv.norm() == 0.0 {
                Complex64::new(1e-3, 1e-3)
            } else {
                pv / dv
            };
            let mut s = Complex64::new(0.0, 0.0);
            let mut collided = false;
            for (j, other) in zs.iter().enumerate() {
                if j != k {
                    let d = z - other;
                    if d.norm_sqr() == 0.0 {
                        collided = true;
                    } else {
                        s += d.inv();
                    }
                }
            }
            if collided {
                zs[k] = z + Complex64::new(1e-8 * (1.0 + z.norm()), 1e-10 * (k + 1) as f64);
                max_rel = f64::INFINITY;
                continue;
            }
            let denom = Complex64::new(1.0, 0.0) - nwt * s;
            let w = if denom.norm() < 1e-290 { nwt } else { nwt / denom };
            if !w.re.is_finite() || !w.im.is_finite() {
                max_rel = f64::INFINITY;
                continue;
            }
            max_rel = max_rel.max(w.norm() / (1.0 + z.norm()));
            zs[k] = z - w;
        }
        if max_rel <= 1e-14 {
            return Ok(zs);
        }
    }
    // multiple roots stall above the tight tolerance; accept the cluster if
    // the residuals are at noise level
    let scale = p.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if zs
        .iter()
        .all(|&z| p.eval(z).norm() <= 1e-10 * scale * (1.0 + z.norm()).powi(n as i32))
    {
        return Ok(zs);
    }
    Err(RootError::NoConvergence { sweeps: max_sweeps })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted_by_arg(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.arg().partial_cmp(&b.arg()).unwrap());
        v
    }

    #[test]
    fn cubic_roots_of_unity() {
        let p = CoefficientPoly {
            coeffs: vec![
                Complex64::new(-1.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
            ],
        };
        let roots = sorted_by_arg(dense_roots(&p).unwrap());
        let want = sorted_by_arg(
            (0..3)
                .map(|k| Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / 3.0))
                .collect(),
        );
        for (g, w) in roots.iter().zip(want.iter()) {
            assert!((g - w).norm() < 1e-12, "{g} vs {w}");
        }
    }

    #[test]
    fn from_roots_round_trip() {
        let want = [
            Complex64::new(0.3, 0.1),
            Complex64::new(-0.5, 0.0),
            Complex64::new(0.0, -0.9),
            Complex64::new(0.8, 0.55),
        ];
        let p = CoefficientPoly::from_roots(&want);
        let got = dense_roots(&p).unwrap();
        for w in &want {
            assert!(got.iter().any(|g| (g - w).norm() < 1e-11));
        }
    }

    #[test]
    fn double_root_cluster() {
        // (z - 0.5)^2 (z + 0.25)
        let p = CoefficientPoly::from_roots(&[
            Complex64::new(0.5, 0.0),
            Complex64::new(0.5, 0.0),
            Complex64::new(-0.25, 0.0),
        ]);
        let got = dense_roots(&p).unwrap();
        let near_half = got.iter().filter(|z| (*z - Complex64::new(0.5, 0.0)).norm() < 1e-6);
        assert_eq!(near_half.count(), 2);
    }
}
