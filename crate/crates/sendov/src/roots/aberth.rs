//! Aberth-Ehrlich simultaneous root iteration, generic over precision.
//!
//! The iteration works on the unknown roots only; already-known roots
//! (here: `β`, pinned by construction) enter as fixed repulsion terms,
//! which deflates them implicitly without ever forming a quotient
//! polynomial.

use super::RootError;
use crate::cx::{Real, C};
use crate::quad::QuadError;
use num_complex::Complex64;

#[derive(Debug, Clone, Copy)]
pub(crate) struct AberthOpts {
    pub max_sweeps: usize,
    /// Convergence: every correction `|w| ≤ tol · (1 + |z|)`.
    pub tol: f64,
    /// Declare no-convergence after this many sweeps without the largest
    /// correction improving (only past `stall_min` sweeps).
    pub stall_sweeps: usize,
    pub stall_min: usize,
}

impl Default for AberthOpts {
    fn default() -> Self {
        AberthOpts {
            max_sweeps: 500,
            tol: 1e-13,
            stall_sweeps: 30,
            stall_min: 60,
        }
    }
}

/// Run the iteration. `newton` must return `P(z)/P'(z)`.
///
/// Sequential Gauss-Seidel sweeps in fixed index order: deterministic for
/// identical inputs.
pub(crate) fn aberth_solve<R: Real>(
    newton: &dyn Fn(C<R>) -> Result<C<R>, QuadError>,
    mut zs: Vec<C<R>>,
    fixed: &[C<R>],
    opts: &AberthOpts,
) -> Result<Vec<C<R>>, RootError> {
    let m = zs.len();
    if m == 0 {
        return Ok(zs);
    }
    let mut best = f64::INFINITY;
    let mut since_best = 0usize;
    for sweep in 0..opts.max_sweeps {
        let mut max_rel = 0.0f64;
        for k in 0..m {
            let z = zs[k];
            let nwt = newton(z)?;
            if nwt.abs() == R::zero() {
                continue; // exactly on a root
            }
            // Repulsion sum in f64: it only steers the deflation and its
            // error enters the correction at second order.
            let zf = z.to_c64();
            let mut s = Complex64::new(0.0, 0.0);
            let mut collided = false;
            for (j, other) in zs.iter().enumerate() {
                if j == k {
                    continue;
                }
                let d = zf - other.to_c64();
                if d.norm_sqr() == 0.0 {
                    collided = true;
                } else {
                    s += d.inv();
                }
            }
            for f in fixed {
                let d = zf - f.to_c64();
                if d.norm_sqr() == 0.0 {
                    collided = true;
                } else {
                    s += d.inv();
                }
            }
            if collided {
                // separate coincident iterates deterministically and retry
                // on the next sweep
                let bump = 1e-8 * (1.0 + zf.norm());
                zs[k] = z + C::from_f64(bump, bump * (k as f64 + 1.0) * 1e-2);
                max_rel = f64::INFINITY;
                continue;
            }
            let denom = C::<R>::one() - nwt * C::from_c64(s);
            let w = if denom.abs().to_f64() < 1e-280 {
                nwt
            } else {
                nwt / denom
            };
            if !w.is_finite() {
                max_rel = f64::INFINITY;
                continue;
            }
            let rel = w.abs().to_f64() / (1.0 + z.abs().to_f64());
            max_rel = max_rel.max(rel);
            zs[k] = z - w;
        }
        if max_rel <= opts.tol {
            return Ok(zs);
        }
        if max_rel < best * 0.9 {
            best = max_rel;
            since_best = 0;
        } else {
            since_best += 1;
            if sweep >= opts.stall_min && since_best >= opts.stall_sweeps {
                return Err(RootError::NoConvergence { sweeps: sweep + 1 });
            }
        }
    }
    Err(RootError::NoConvergence {
        sweeps: opts.max_sweeps,
    })
}
