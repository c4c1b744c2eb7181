//! Zero counting by the argument principle.
//!
//! The winding number of `P` around a circle equals the number of enclosed
//! zeros. Samples of `P` on the circle are chained through short chord
//! integrals; an arc is accepted once its argument increment is safely
//! below π/2 (no branch ambiguity), and is bisected otherwise. A large
//! magnitude swing across an arc also forces a bisection, so a pair of
//! zeros hiding inside one arc cannot alias a full turn away.

use super::RootError;
use crate::cx::{Real, C};
use crate::polyform::SpecView;
use crate::quad::{integrate_segment, QuadOpts};
use std::f64::consts::{PI, TAU};

/// Arcs narrower than this that still carry a > π/2 increment mean a root
/// sits on (or numerically on) the circle.
const AMBIGUITY_WIDTH: f64 = 1e-13;
/// Magnitude-swing refinement is applied down to this arc width.
const RATIO_WIDTH: f64 = 1e-10;
const MAX_SAMPLES: usize = 400_000;
const MAX_DEPTH: usize = 60;

/// Number of roots of `P` strictly inside `|z| = radius`.
pub(crate) fn count_in_circle<R: Real>(
    view: &SpecView<R>,
    radius: f64,
    opts: &QuadOpts,
) -> Result<u32, RootError> {
    let kappa = super::eval_engine::probe_kappa(view, radius);
    let f = |w: C<R>| view.p_prime_scaled(w, kappa);
    let at = |th: f64| C::<R>::from_f64(radius * th.cos(), radius * th.sin());

    // anchor at angle 0, reached from beta
    let z0 = at(0.0);
    let p0 = integrate_segment(&f, view.beta, z0, opts)?;

    // initial ring: 8 samples per root keeps every true increment well
    // under π even with a zero grazing the circle
    let m = (8 * view.degree as usize).max(64);
    let mut ring: Vec<(f64, C<R>)> = Vec::with_capacity(m + 1);
    ring.push((0.0, p0));
    let mut prev = (z0, p0);
    for j in 1..=m {
        let th = TAU * j as f64 / m as f64;
        let z = at(th);
        let p = prev.1 + integrate_segment(&f, prev.0, z, opts)?;
        ring.push((th, p));
        prev = (z, p);
    }
    // ring[m] is the chained value back at angle 2π, not a reuse of p0, so
    // the final arc's increment follows the same continuous chain.

    let mut samples = m + 1;
    let mut total = 0.0f64;
    let mut stack: Vec<(f64, C<R>, f64, C<R>, usize)> = Vec::new();
    for w in ring.windows(2) {
        stack.push((w[0].0, w[0].1, w[1].0, w[1].1, 0));
    }
    while let Some((th1, p1, th2, p2, depth)) = stack.pop() {
        let width = th2 - th1;
        let a1 = p1.abs().to_f64();
        let a2 = p2.abs().to_f64();
        let inc = if a1 == 0.0 || a2 == 0.0 {
            f64::NAN
        } else {
            (p2 * p1.conj()).arg_f64()
        };
        let must_split = !(inc.abs() < PI / 2.0);
        let want_split = must_split
            || ((a1 / a2 > 1e3 || a2 / a1 > 1e3 || !(a1 / a2).is_finite()) && width > RATIO_WIDTH);
        if !want_split {
            total += inc;
            continue;
        }
        if must_split && width < AMBIGUITY_WIDTH {
            return Err(RootError::OnCircleAmbiguity);
        }
        samples += 1;
        if samples > MAX_SAMPLES || depth > MAX_DEPTH {
            return Err(RootError::OnCircleAmbiguity);
        }
        let thm = 0.5 * (th1 + th2);
        let pm = p1 + integrate_segment(&f, at(th1), at(thm), opts)?;
        stack.push((thm, pm, th2, p2, depth + 1));
        stack.push((th1, p1, thm, pm, depth + 1));
    }
    let w = total / TAU;
    let rounded = w.round();
    debug_assert!(
        (w - rounded).abs() < 0.05,
        "winding accumulation not integral: {w}"
    );
    if rounded < -0.5 {
        // impossible for a polynomial; flag the numerical breakdown
        return Err(RootError::OnCircleAmbiguity);
    }
    Ok(rounded as u32)
}
