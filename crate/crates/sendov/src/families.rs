//! Constructive generators for the special families with known distance
//! bounds, and their per-family checks.
//!
//! All generators emit specs with `β` real in `[0, 1]` (the rotation
//! freedom of the problem); rotated parameters such as the phase `t` of
//! `z^n − e^{it}` are kept in the descriptor for provenance only.

use crate::polyform::{CoefficientPoly, CriticalPoint, PolySpec, SpecError};
use crate::roots::{dense_roots, RootError};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum FamilyError {
    #[error("the requested polynomial is not real (roots not closed under conjugation)")]
    NotRealPolynomial,
    #[error("a constructed root has modulus {0} > 1")]
    RootOutsideDisk(f64),
    #[error("family construction needs degree <= {cap}, got {degree}")]
    DegreeTooLarge { degree: u32, cap: u32 },
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Roots(#[from] RootError),
}

/// Which generator produced a spec; serialized into the optional `family`
/// annotation of spec files (ignored by the core parser).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum FamilyDescriptor {
    BrsStar { n: u32 },
    CircleOneCrit { n: u32, beta: f64, zeta_re: f64, zeta_im: f64 },
    LineRooted { beta: f64, offsets: Vec<f64>, angle: f64 },
    RealQuartic { beta: f64 },
    PhelpsRodriguez { n: u32, t: f64 },
}

/// The Bojanov-Rahman-Szynal extremal at the origin: `P = (z^n − z)/n`.
///
/// `β = 0` and the critical points are `(1/n)^{1/(n−1)} ω` over the
/// `(n−1)`-th roots of unity, so `d = (1/n)^{1/(n−1)}` exactly.
pub fn brs_star(n: u32) -> PolySpec {
    assert!(n >= 2);
    let r = crate::metrics::rn_at_zero(n);
    let crits = (0..n - 1)
        .map(|k| {
            let th = std::f64::consts::TAU * k as f64 / (n - 1) as f64;
            CriticalPoint::new(Complex64::from_polar(r, th), 1).expect("m = 1")
        })
        .collect();
    PolySpec::new(0.0, crits).expect("beta = 0 is valid")
}

/// Exactly one distinct critical point: `P = ((z−ζ)^n − (β−ζ)^n)/n`.
///
/// All roots lie on the circle of radius `|β − ζ|` about `ζ`, so
/// `d(P, β) = |β − ζ|`.
pub fn circle_one_crit(n: u32, beta: f64, zeta: Complex64) -> Result<PolySpec, FamilyError> {
    if n < 2 {
        return Err(FamilyError::InvalidParam("n must be >= 2".into()));
    }
    Ok(PolySpec::new(
        beta,
        vec![CriticalPoint::new(zeta, n - 1)?],
    )?)
}

/// The largest radius a one-critical-point member of `S(β)` can reach.
///
/// Even `n`: `(1+β)/2` (furthest root at −1). Odd `n`: the positive root
/// of `2(1+cos(π/n))(r² − βr) = 1 − β²`, solved in the cancellation-free
/// branch `r = [β + √(β² + 2(1−β²)/(1+cos(π/n)))]/2`.
pub fn extremal_radius(n: u32, beta: f64) -> f64 {
    assert!(n >= 2 && (0.0..=1.0).contains(&beta));
    if n % 2 == 0 {
        (1.0 + beta) / 2.0
    } else {
        let cs = (std::f64::consts::PI / n as f64).cos();
        (beta + (beta * beta + 2.0 * (1.0 - beta * beta) / (1.0 + cs)).sqrt()) / 2.0
    }
}

/// A member with all roots on the line through `β` with direction
/// `e^{i·angle}`: simple roots `{β} ∪ {β + t_k e^{i·angle}}`.
///
/// Critical points come from rooting the derivative of the dense
/// expansion, so the construction is capped at degree 64.
pub fn line_rooted(beta: f64, offsets: &[f64], angle: f64) -> Result<PolySpec, FamilyError> {
    if !(0.0..=1.0).contains(&beta) {
        return Err(FamilyError::InvalidParam(format!("beta = {beta}")));
    }
    if offsets.is_empty() {
        return Err(FamilyError::InvalidParam("need at least one offset".into()));
    }
    let degree = offsets.len() as u32 + 1;
    if degree > crate::polyform::EXPAND_DEGREE_CAP {
        return Err(FamilyError::DegreeTooLarge {
            degree,
            cap: crate::polyform::EXPAND_DEGREE_CAP,
        });
    }
    let dir = Complex64::from_polar(1.0, angle);
    let b = Complex64::new(beta, 0.0);
    let mut roots = vec![b];
    for &t in offsets {
        let z = b + dir * t;
        let m = z.norm();
        if m > 1.0 + 1e-12 {
            return Err(FamilyError::RootOutsideDisk(m));
        }
        roots.push(z);
    }
    spec_from_simple_roots(beta, &roots)
}

/// A real quartic `(z−β)(z−z₁)(z−z₂)(z−z₃)` as a spec.
pub fn real_quartic(beta: f64, others: &[Complex64; 3]) -> Result<PolySpec, FamilyError> {
    validate_real_quartic(beta, others)?;
    let mut roots = vec![Complex64::new(beta, 0.0)];
    roots.extend_from_slice(others);
    spec_from_simple_roots(beta, &roots)
}

/// Derivative-magnitude check for real quartics.
///
/// For a monic real quartic in `S(β)` whose nearest critical point is
/// farther than `(1+β)/2`, the derivative at the root satisfies
/// `|P'(β)| ≤ (1+β)²`; this computes all the quantities and the verdict.
/// Nonreal inputs are rejected — the bound can fail for them.
#[derive(Debug, Clone, Serialize)]
pub struct QuarticCheck {
    pub d: f64,
    pub dpb_modulus: f64,
    pub bound_applicable: bool,
    pub holds: bool,
}

pub fn real_quartic_check(
    beta: f64,
    others: &[Complex64; 3],
) -> Result<QuarticCheck, FamilyError> {
    validate_real_quartic(beta, others)?;
    let b = Complex64::new(beta, 0.0);
    // P'(β) = ∏ (β − z_i) for the monic quartic
    let dpb: Complex64 = others.iter().map(|z| b - z).product();
    let dpb_modulus = dpb.norm();
    let mut roots = vec![b];
    roots.extend_from_slice(others);
    let p = CoefficientPoly::from_roots(&roots);
    let crits = dense_roots(&p.derivative())?;
    let d = crits
        .iter()
        .map(|z| (z - b).norm())
        .fold(f64::INFINITY, f64::min);
    let bound = (1.0 + beta) * (1.0 + beta);
    let bound_applicable = d > (1.0 + beta) / 2.0;
    let holds = !bound_applicable || dpb_modulus <= bound + 1e-10;
    Ok(QuarticCheck {
        d,
        dpb_modulus,
        bound_applicable,
        holds,
    })
}

/// `z^n − e^{it}` rotated to its real representative: `P = (z^n − 1)/n`
/// with `β = 1` and a single critical point of multiplicity `n − 1` at the
/// origin; `d(P, β) = 1`.
pub fn phelps_rodriguez(n: u32, _t: f64) -> PolySpec {
    assert!(n >= 2);
    PolySpec::new(
        1.0,
        vec![CriticalPoint::new(Complex64::new(0.0, 0.0), n - 1).expect("m >= 1")],
    )
    .expect("beta = 1 is valid")
}

fn validate_real_quartic(beta: f64, others: &[Complex64; 3]) -> Result<(), FamilyError> {
    if !(0.0..=1.0).contains(&beta) {
        return Err(FamilyError::InvalidParam(format!("beta = {beta}")));
    }
    for z in others {
        let m = z.norm();
        if m > 1.0 + 1e-12 {
            return Err(FamilyError::RootOutsideDisk(m));
        }
    }
    // conjugation closure of the multiset
    let mut used = [false; 3];
    for i in 0..3 {
        if others[i].im.abs() <= 1e-12 {
            continue;
        }
        let mut found = false;
        for j in 0..3 {
            if i != j && !used[j] && (others[j] - others[i].conj()).norm() <= 1e-9 {
                used[j] = true;
                found = true;
                break;
            }
        }
        if !found && !used[i] {
            return Err(FamilyError::NotRealPolynomial);
        }
    }
    Ok(())
}

/// Spec whose `P` has exactly the given simple roots (β among them):
/// expand, differentiate, and re-root.
fn spec_from_simple_roots(beta: f64, roots: &[Complex64]) -> Result<PolySpec, FamilyError> {
    let p = CoefficientPoly::from_roots(roots);
    let crit_pts = dense_roots(&p.derivative())?;
    let crits = crit_pts
        .into_iter()
        .map(|z| CriticalPoint::new(z, 1))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PolySpec::new(beta, crits)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{dist_to_nearest_critical, rn_at_zero};

    #[test]
    fn brs_star_distances() {
        let s2 = brs_star(2);
        assert_eq!(s2.critical_points().len(), 1);
        assert!((dist_to_nearest_critical(&s2) - 0.5).abs() < 1e-15);
        let s5 = brs_star(5);
        assert!((dist_to_nearest_critical(&s5) - (1.0f64 / 5.0).powf(0.25)).abs() < 1e-13);
        let s3 = brs_star(3);
        assert!((dist_to_nearest_critical(&s3) - crate::metrics::r3_exact(0.0)).abs() < 1e-13);
    }

    #[test]
    fn circle_family_roots() {
        // n = 2, β = 1, ζ = 0: P = (z² − 1)/2, roots ±1
        let spec = circle_one_crit(2, 1.0, Complex64::new(0.0, 0.0)).unwrap();
        let rs = crate::roots::find_roots(&spec).unwrap();
        assert!(rs.roots.iter().any(|z| (z - Complex64::new(1.0, 0.0)).norm() < 1e-12));
        assert!(rs.roots.iter().any(|z| (z + Complex64::new(1.0, 0.0)).norm() < 1e-12));

        // n = 4, β = 1, ζ = 0: 4th roots of unity, d = 1 = (1+β)/2
        let spec = circle_one_crit(4, 1.0, Complex64::new(0.0, 0.0)).unwrap();
        let rep = crate::roots::check_membership(&spec, 1e-9).unwrap();
        assert!(rep.is_member);
        assert!((dist_to_nearest_critical(&spec) - 1.0).abs() < 1e-15);
        assert_eq!(extremal_radius(4, 1.0), 1.0);
    }

    #[test]
    fn extremal_radius_values() {
        assert!((extremal_radius(2, 0.3) - 0.65).abs() < 1e-15);
        // odd-n closed form checks (frozen from exact evaluation)
        assert!((extremal_radius(3, 0.5) - 0.809016994374947424).abs() < 1e-15);
        assert!((extremal_radius(3, 0.0) - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!((extremal_radius(3, 0.0) - rn_at_zero(3)).abs() < 1e-15);
        assert!((extremal_radius(3, 1.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn extremal_circle_touches_unit_circle() {
        for &(n, beta) in &[(3u32, 0.5f64), (5, 0.25), (7, 0.8), (49, 0.37), (4, 0.3), (10, 0.9)]
        {
            let r = extremal_radius(n, beta);
            let zeta = Complex64::new(beta - r, 0.0);
            let spec = circle_one_crit(n, beta, zeta).unwrap();
            let rs = crate::roots::find_roots(&spec).unwrap();
            let mx = rs.max_modulus();
            assert!((mx - 1.0).abs() < 1e-10, "n={n} beta={beta}: max={mx}");
        }
    }

    #[test]
    fn line_rooted_examples() {
        // β = 1, one root at −1: critical point at 0, d = 1
        let spec = line_rooted(1.0, &[-2.0], 0.0).unwrap();
        assert!((dist_to_nearest_critical(&spec) - 1.0).abs() < 1e-12);

        // β = 0.5, offset −1.4: bound 1 − β(1−β)/2 = 0.875
        let spec = line_rooted(0.5, &[-1.4], 0.0).unwrap();
        let d = dist_to_nearest_critical(&spec);
        assert!((d - 0.7).abs() < 1e-12); // midpoint of the two roots
        assert!(d <= 0.875);

        // degree 3 along the real axis
        let spec = line_rooted(0.6, &[-1.5, 0.35], 0.0).unwrap();
        let d = dist_to_nearest_critical(&spec);
        assert!(d <= 1.0 - 0.5 * 0.6 * 0.4 + 1e-10);

        assert!(matches!(
            line_rooted(0.5, &[0.6], 0.0),
            Err(FamilyError::RootOutsideDisk(_))
        ));
    }

    #[test]
    fn quartic_check_boundary_case() {
        // β = 1, roots {−1, ±i}: P = z⁴ − 1, |P'(1)| = 4 = (1+β)²
        let others = [
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, -1.0),
        ];
        let chk = real_quartic_check(1.0, &others).unwrap();
        assert!((chk.dpb_modulus - 4.0).abs() < 1e-13);
        assert!((chk.d - 1.0).abs() < 1e-10);
        assert!(!chk.bound_applicable); // d = (1+β)/2 exactly, not above it
        assert!(chk.holds);
    }

    #[test]
    fn quartic_check_rejects_nonreal() {
        // the degree-4 counterexample configuration is nonreal
        let others = [
            Complex64::new(-0.3, 0.4),
            Complex64::new(-0.1, 0.2),
            Complex64::new(0.5, 0.0),
        ];
        assert!(matches!(
            real_quartic_check(0.674, &others),
            Err(FamilyError::NotRealPolynomial)
        ));
    }

    #[test]
    fn phelps_rodriguez_distance_one() {
        for n in [2u32, 7, 20] {
            let spec = phelps_rodriguez(n, 0.4);
            assert_eq!(spec.degree(), n);
            assert!((dist_to_nearest_critical(&spec) - 1.0).abs() < 1e-15);
            assert!(crate::metrics::check_refined_bound(&spec, 123.0));
        }
        let rep = crate::roots::check_membership(&phelps_rodriguez(7, 0.0), 1e-9).unwrap();
        assert!(rep.is_member);
        assert!((rep.max_modulus - 1.0).abs() < 1e-12);
    }
}
