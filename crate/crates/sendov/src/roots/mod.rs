//! Root finding and unit-disk membership certification.
//!
//! [`find_roots`] runs Aberth-Ehrlich simultaneous iteration directly on
//! the integral form (never through dense coefficients beyond degree 64),
//! with `β` injected as a known root. [`count_roots_in_disk`] counts zeros
//! independently through the argument principle, and [`check_membership`]
//! requires the two certificates to agree.
//!
//! Everything here is a pure function of its inputs with fixed iteration
//! order, so results are reproducible run to run.

mod aberth;
mod dense;
mod eval_engine;
mod winding;

pub use dense::dense_roots;

use crate::cx::{Real, C};
use crate::dd::Dd;
use crate::polyform::PolySpec;
use crate::quad::{QuadError, QuadOpts};
use aberth::{aberth_solve, AberthOpts};
use eval_engine::CircleEval;
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum RootError {
    /// Iteration did not reach the correction tolerance; retry in extended
    /// precision (the auto policy does this by itself).
    #[error("root iteration did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    /// A root lies within ~1e-13 of the counting circle.
    #[error("a root lies on or numerically on the counting circle")]
    OnCircleAmbiguity,
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    /// The two certification paths disagree: numerical breakdown, caller
    /// should escalate precision.
    #[error("direct roots (max modulus {max_modulus}) and winding count {disk_count} of {degree} disagree")]
    MethodDisagreement {
        max_modulus: f64,
        disk_count: u32,
        degree: u32,
    },
}

/// Working precision selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Precision {
    /// Binary64 up to degree 128, double-double beyond, and escalation to
    /// double-double whenever binary64 fails to converge.
    Auto,
    Double,
    DoubleDouble,
}

#[derive(Debug, Clone, Copy)]
pub struct RootOpts {
    pub precision: Precision,
    pub max_sweeps: usize,
    /// Degree cap for the winding-number cross-check in membership.
    pub winding_cap: u32,
}

impl Default for RootOpts {
    fn default() -> Self {
        RootOpts {
            precision: Precision::Auto,
            max_sweeps: 500,
            winding_cap: 1000,
        }
    }
}

/// Degree above which the auto policy goes straight to double-double.
const AUTO_DD_DEGREE: u32 = 128;

/// All roots of `P`, with multiplicity; `roots[0]` is `β` itself.
#[derive(Debug, Clone, Serialize)]
pub struct RootSet {
    pub roots: Vec<Complex64>,
    /// `|P(root)|` backward-error estimates, same order as `roots`.
    pub residuals: Vec<f64>,
}

impl RootSet {
    pub fn max_modulus(&self) -> f64 {
        self.roots.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MembershipMethod {
    DirectRoots,
    ArgumentPrinciple,
    Both,
}

/// Verdict and margins for "all roots in the closed unit disk".
#[derive(Debug, Clone, Serialize)]
pub struct MembershipReport {
    pub is_member: bool,
    pub max_modulus: f64,
    /// `1 + tol − max_modulus`; negative when not a member.
    pub margin: f64,
    pub method: MembershipMethod,
    pub disk_count: Option<u32>,
    pub tol: f64,
}

/// All `n` roots of `P` (auto precision policy).
pub fn find_roots(spec: &PolySpec) -> Result<RootSet, RootError> {
    find_roots_with(spec, &RootOpts::default())
}

pub fn find_roots_with(spec: &PolySpec, opts: &RootOpts) -> Result<RootSet, RootError> {
    match opts.precision {
        Precision::Double => solve::<f64>(spec, opts),
        Precision::DoubleDouble => solve::<Dd>(spec, opts),
        Precision::Auto => {
            if spec.degree() > AUTO_DD_DEGREE {
                solve::<Dd>(spec, opts)
            } else {
                match solve::<f64>(spec, opts) {
                    Err(RootError::NoConvergence { .. }) | Err(RootError::Quadrature(_)) => {
                        solve::<Dd>(spec, opts)
                    }
                    other => other,
                }
            }
        }
    }
}

fn solve<R: Real>(spec: &PolySpec, opts: &RootOpts) -> Result<RootSet, RootError> {
    let view = spec.view::<R>();
    let n_unknown = (spec.degree() - 1) as usize;
    let radius = f64::max(1.0, spec.max_crit_modulus()) * (1.0 + 1e-3);
    let quad = QuadOpts::for_precision::<R>();
    let eval = CircleEval::new(&view, radius, quad)?;
    let beta = view.beta;

    let newton = |z: C<R>| -> Result<C<R>, QuadError> {
        let p = eval.p_scaled(z)?;
        let dp = eval.p_prime_scaled(z);
        if p.abs() == R::zero() {
            return Ok(C::zero());
        }
        Ok(p / dp)
    };
    let init: Vec<C<R>> = (0..n_unknown)
        .map(|k| {
            let th = std::f64::consts::TAU * (k as f64 + 0.37) / n_unknown as f64;
            C::from_f64(radius * th.cos(), radius * th.sin())
        })
        .collect();
    let ab = AberthOpts {
        max_sweeps: opts.max_sweeps,
        ..AberthOpts::default()
    };
    let zs = aberth_solve(&newton, init, &[beta], &ab)?;

    let mut roots = Vec::with_capacity(n_unknown + 1);
    let mut residuals = Vec::with_capacity(n_unknown + 1);
    roots.push(Complex64::new(spec.beta(), 0.0));
    residuals.push(0.0);
    for z in zs {
        roots.push(z.to_c64());
        let r = eval.p_scaled(z).map(|p| p.abs().to_f64()).unwrap_or(f64::NAN);
        // undo the global scale, saturating at the f64 range
        let unscaled = if eval.kappa.unsigned_abs() > 2000 {
            if eval.kappa > 0 {
                f64::MAX
            } else {
                0.0
            }
        } else {
            r * 2f64.powi(eval.kappa.clamp(-1022, 1023) as i32)
        };
        residuals.push(unscaled);
    }
    Ok(RootSet { roots, residuals })
}

/// Number of roots with `|z| < radius`, by the argument principle.
pub fn count_roots_in_disk(spec: &PolySpec, radius: f64) -> Result<u32, RootError> {
    count_roots_in_disk_with(spec, radius, &RootOpts::default())
}

pub fn count_roots_in_disk_with(
    spec: &PolySpec,
    radius: f64,
    opts: &RootOpts,
) -> Result<u32, RootError> {
    assert!(radius > 0.0 && radius.is_finite());
    match opts.precision {
        Precision::Double => winding::count_in_circle(&spec.view::<f64>(), radius, &QuadOpts::double()),
        Precision::DoubleDouble => {
            winding::count_in_circle(&spec.view::<Dd>(), radius, &QuadOpts::double_double())
        }
        Precision::Auto => {
            if spec.degree() > AUTO_DD_DEGREE {
                winding::count_in_circle(&spec.view::<Dd>(), radius, &QuadOpts::double_double())
            } else {
                match winding::count_in_circle(&spec.view::<f64>(), radius, &QuadOpts::double()) {
                    Err(RootError::Quadrature(_)) => {
                        winding::count_in_circle(&spec.view::<Dd>(), radius, &QuadOpts::double_double())
                    }
                    other => other,
                }
            }
        }
    }
}

/// Certify membership in `S(β)` at tolerance `tol` (default-style 1e-9).
///
/// Runs the direct root solve; for degrees within the winding cap it also
/// counts roots inside `|z| = 1 + tol` by the argument principle and
/// demands the two verdicts agree.
pub fn check_membership(spec: &PolySpec, tol: f64) -> Result<MembershipReport, RootError> {
    check_membership_with(spec, tol, &RootOpts::default())
}

pub fn check_membership_with(
    spec: &PolySpec,
    tol: f64,
    opts: &RootOpts,
) -> Result<MembershipReport, RootError> {
    assert!(tol >= 0.0);
    let rs = find_roots_with(spec, opts)?;
    let max_modulus = rs.max_modulus();
    let is_member = max_modulus <= 1.0 + tol;
    let margin = 1.0 + tol - max_modulus;
    if spec.degree() <= opts.winding_cap {
        let disk_count = count_roots_in_disk_with(spec, 1.0 + tol, opts)?;
        let count_says_member = disk_count == spec.degree();
        if count_says_member != is_member {
            return Err(RootError::MethodDisagreement {
                max_modulus,
                disk_count,
                degree: spec.degree(),
            });
        }
        Ok(MembershipReport {
            is_member,
            max_modulus,
            margin,
            method: MembershipMethod::Both,
            disk_count: Some(disk_count),
            tol,
        })
    } else {
        Ok(MembershipReport {
            is_member,
            max_modulus,
            margin,
            method: MembershipMethod::DirectRoots,
            disk_count: None,
            tol,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyform::CriticalPoint;

    fn cube_spec() -> PolySpec {
        // P = (z^3 - 1)/3
        PolySpec::new(1.0, vec![CriticalPoint::new(Complex64::new(0.0, 0.0), 2).unwrap()]).unwrap()
    }

    #[test]
    fn cube_roots_of_unity() {
        let rs = find_roots(&cube_spec()).unwrap();
        assert_eq!(rs.roots.len(), 3);
        for k in 0..3 {
            let w = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / 3.0);
            assert!(
                rs.roots.iter().any(|z| (z - w).norm() < 1e-12),
                "missing root {w}"
            );
        }
        for r in &rs.residuals {
            assert!(*r < 1e-12);
        }
    }

    #[test]
    fn z5_minus_z_roots() {
        let r = (1.0f64 / 5.0).powf(0.25);
        let crits = (0..4)
            .map(|k| {
                CriticalPoint::new(
                    Complex64::from_polar(r, std::f64::consts::FRAC_PI_2 * k as f64),
                    1,
                )
                .unwrap()
            })
            .collect();
        let spec = PolySpec::new(0.0, crits).unwrap();
        let rs = find_roots(&spec).unwrap();
        assert_eq!(rs.roots.len(), 5);
        // roots: 0 and the 4th roots of unity
        assert!(rs.roots.iter().any(|z| z.norm() < 1e-12));
        for k in 0..4 {
            let w = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_2 * k as f64);
            assert!(rs.roots.iter().any(|z| (z - w).norm() < 1e-12));
        }
    }

    #[test]
    fn counterexample_roots_inside_disk() {
        let spec = PolySpec::from_decimal_beta(
            "0.674",
            vec![
                CriticalPoint::from_decimal("-0.24", "0.38", 1).unwrap(),
                CriticalPoint::from_decimal("-0.13", "-0.25", 2).unwrap(),
            ],
        )
        .unwrap();
        let rs = find_roots(&spec).unwrap();
        assert_eq!(rs.roots.len(), 4);
        let mx = rs.max_modulus();
        assert!(mx < 1.0, "max modulus {mx}");
        assert!((mx - 0.9995838675576348).abs() < 1e-10);
    }

    #[test]
    fn winding_counts_cube() {
        let spec = cube_spec();
        assert_eq!(count_roots_in_disk(&spec, 1.000001).unwrap(), 3);
        assert_eq!(count_roots_in_disk(&spec, 0.5).unwrap(), 0);
        assert_eq!(count_roots_in_disk(&spec, 2.0).unwrap(), 3);
    }

    #[test]
    fn membership_both_methods() {
        let spec = cube_spec();
        let rep = check_membership(&spec, 1e-9).unwrap();
        assert!(rep.is_member);
        assert_eq!(rep.method, MembershipMethod::Both);
        assert_eq!(rep.disk_count, Some(3));
        assert!((rep.max_modulus - 1.0).abs() < 1e-12);
    }

    #[test]
    fn membership_rejects_outside_root() {
        // β = 1, critical point at 1.2: P = z²/2 − 1.2z + 0.7, roots {1, 1.4}
        let spec =
            PolySpec::new(1.0, vec![CriticalPoint::new(Complex64::new(1.2, 0.0), 1).unwrap()])
                .unwrap();
        let rep = check_membership(&spec, 1e-9).unwrap();
        assert!(!rep.is_member);
        assert!(rep.margin < 0.0);
        assert!((rep.max_modulus - 1.4).abs() < 1e-12);
        assert_eq!(rep.disk_count, Some(1));
    }

    #[test]
    fn double_root_at_beta() {
        // P = z²/2: double root at β = 0
        let spec =
            PolySpec::new(0.0, vec![CriticalPoint::new(Complex64::new(0.0, 0.0), 1).unwrap()])
                .unwrap();
        let rs = find_roots(&spec).unwrap();
        assert_eq!(rs.roots.len(), 2);
        for z in &rs.roots {
            assert!(z.norm() < 1e-10);
        }
    }
}
