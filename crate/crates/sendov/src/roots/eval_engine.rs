//! Repeated evaluation of `P` for the root iteration.
//!
//! Integrating from `β` for every evaluation would need O(n) panels each
//! time (the integrand's phase turns ~n times along such a chord). Instead
//! the evaluator computes, once, a chain of "station" values of `P` around
//! the initialization circle — short chord integrals whose errors scale
//! with their own length — and then reaches any point through its nearest
//! station. Path independence is exact: the integrand is entire.
//!
//! All values carry a global power-of-two scale `2^{-κ}` chosen from the
//! integrand's magnitude on the circle, so degrees in the thousands stay
//! inside the representable range.

use crate::cx::{Real, C};
use crate::polyform::SpecView;
use crate::quad::{integrate_segment, QuadError, QuadOpts};

pub(crate) struct CircleEval<'a, R: Real> {
    view: &'a SpecView<R>,
    pub kappa: i64,
    stations: Vec<(C<R>, C<R>)>,
    opts: QuadOpts,
}

/// Pick a scale exponent so circle-magnitudes sit near 2^0.
pub(crate) fn probe_kappa<R: Real>(view: &SpecView<R>, radius: f64) -> i64 {
    let mut max_log2 = f64::NEG_INFINITY;
    for k in 0..16 {
        let th = std::f64::consts::TAU * (k as f64 + 0.5) / 16.0;
        let z = C::from_f64(radius * th.cos(), radius * th.sin());
        let l = view.log2_p_prime_mag(z);
        if l.is_finite() {
            max_log2 = max_log2.max(l);
        }
    }
    if max_log2.is_finite() && max_log2.abs() > 600.0 {
        max_log2.round() as i64
    } else {
        0
    }
}

impl<'a, R: Real> CircleEval<'a, R> {
    pub fn new(view: &'a SpecView<R>, radius: f64, opts: QuadOpts) -> Result<Self, QuadError> {
        let kappa = probe_kappa(view, radius);
        let f = |w: C<R>| view.p_prime_scaled(w, kappa);
        let m = (2 * view.degree as usize).max(16);
        let mut stations = Vec::with_capacity(m);
        // anchor on the positive real axis, reached radially from beta
        let s0 = C::<R>::from_f64(radius, 0.0);
        let a0 = integrate_segment(&f, view.beta, s0, &opts)?;
        stations.push((s0, a0));
        let mut prev_pos = s0;
        let mut prev_val = a0;
        for j in 1..m {
            let th = std::f64::consts::TAU * j as f64 / m as f64;
            let pos = C::from_f64(radius * th.cos(), radius * th.sin());
            let val = prev_val + integrate_segment(&f, prev_pos, pos, &opts)?;
            stations.push((pos, val));
            prev_pos = pos;
            prev_val = val;
        }
        Ok(CircleEval {
            view,
            kappa,
            stations,
            opts,
        })
    }

    /// `2^{-κ} P(z)` via the nearest station.
    pub fn p_scaled(&self, z: C<R>) -> Result<C<R>, QuadError> {
        let m = self.stations.len();
        let th = z.arg_f64();
        let jf = th / std::f64::consts::TAU * m as f64;
        let j = (jf.round() as i64).rem_euclid(m as i64) as usize;
        let (pos, val) = self.stations[j];
        let f = |w: C<R>| self.view.p_prime_scaled(w, self.kappa);
        Ok(val + integrate_segment(&f, pos, z, &self.opts)?)
    }

    /// `2^{-κ} P'(z)`.
    pub fn p_prime_scaled(&self, z: C<R>) -> C<R> {
        self.view.p_prime_scaled(z, self.kappa)
    }
}
