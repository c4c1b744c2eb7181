//! Adaptive Gauss-Legendre quadrature along straight segments in the
//! complex plane.
//!
//! The integrands here are entire (products of linear factors), so a
//! 16-point panel converges superexponentially and interval bisection
//! handles the sharp magnitude/phase variation near high-multiplicity
//! critical points. A panel is accepted when splitting it changes the
//! estimate by less than the tolerance relative to the split value; the
//! total error is then bounded by `rel_tol` times the accumulated panel
//! magnitudes, which is the conditioning of the sum itself.

use crate::cx::{Real, C};
use thiserror::Error;

/// 16-point Gauss-Legendre nodes and weights on [-1, 1], stored as
/// double-double (hi, lo) pairs so the dd instantiation keeps full accuracy.
const GL16_HILO: [(f64, f64, f64, f64); 16] = [
    (-0.9894009349916499, 5.914095566469922e-18, 0.027152459411754096, -1.56154670271636e-18),
    (-0.9445750230732326, 2.4190068142444825e-17, 0.062253523938647894, -7.690264522605704e-19),
    (-0.8656312023878318, 1.1315677979849837e-17, 0.09515851168249279, -8.783003597087393e-19),
    (-0.755404408355003, -3.5241085894430354e-17, 0.12462897125553388, -4.841529802320495e-18),
    (-0.6178762444026438, 2.2123521973463665e-17, 0.14959598881657674, -3.887619883741701e-18),
    (-0.45801677765722737, -1.6662404170959257e-17, 0.16915651939500254, 2.323299329564479e-18),
    (-0.2816035507792589, 2.1958791252592132e-18, 0.18260341504492358, 5.090226510905207e-18),
    (-0.09501250983763744, 3.275947755433097e-19, 0.1894506104550685, -5.883843495582664e-18),
    (0.09501250983763744, -3.275947755433097e-19, 0.1894506104550685, -5.883843495582664e-18),
    (0.2816035507792589, -2.1958791252592132e-18, 0.18260341504492358, 5.090226510905207e-18),
    (0.45801677765722737, 1.6662404170959257e-17, 0.16915651939500254, 2.323299329564479e-18),
    (0.6178762444026438, -2.2123521973463665e-17, 0.14959598881657674, -3.887619883741701e-18),
    (0.755404408355003, 3.5241085894430354e-17, 0.12462897125553388, -4.841529802320495e-18),
    (0.8656312023878318, -1.1315677979849837e-17, 0.09515851168249279, -8.783003597087393e-19),
    (0.9445750230732326, -2.4190068142444825e-17, 0.062253523938647894, -7.690264522605704e-19),
    (0.9894009349916499, -5.914095566469922e-18, 0.027152459411754096, -1.56154670271636e-18),
];

#[derive(Debug, Clone, Error, PartialEq)]
pub enum QuadError {
    /// Refinement hit the depth cap before successive estimates agreed.
    /// Signals ill-conditioning; callers may retry in extended precision.
    #[error("quadrature did not converge within depth {max_depth} (panels used: {panels})")]
    NoConvergence { max_depth: usize, panels: usize },
    /// Safety valve: too many panels in one integral.
    #[error("quadrature exceeded the panel budget ({panels})")]
    PanelBudget { panels: usize },
}

#[derive(Debug, Clone, Copy)]
pub struct QuadOpts {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_depth: usize,
    pub max_panels: usize,
}

impl QuadOpts {
    /// Contract defaults for the binary64 path.
    pub fn double() -> Self {
        QuadOpts {
            rel_tol: 1e-12,
            abs_tol: 1e-300,
            max_depth: 40,
            max_panels: 200_000,
        }
    }

    /// Tighter tolerance for the double-double path.
    pub fn double_double() -> Self {
        QuadOpts {
            rel_tol: 1e-27,
            abs_tol: 1e-300,
            max_depth: 60,
            max_panels: 400_000,
        }
    }

    pub fn for_precision<R: Real>() -> Self {
        if R::EPSILON < 1e-20 {
            Self::double_double()
        } else {
            Self::double()
        }
    }
}

#[inline]
fn gl16<R: Real>() -> [(R, R); 16] {
    let mut out = [(R::zero(), R::zero()); 16];
    for (i, &(xh, xl, wh, wl)) in GL16_HILO.iter().enumerate() {
        out[i] = (
            R::from_f64(xh) + R::from_f64(xl),
            R::from_f64(wh) + R::from_f64(wl),
        );
    }
    out
}

/// Single 16-point panel over the segment [a, b].
fn panel<R: Real, F: Fn(C<R>) -> C<R>>(f: &F, nodes: &[(R, R); 16], a: C<R>, b: C<R>) -> C<R> {
    let half = R::from_f64(0.5);
    let mid = (a + b).scale(half);
    let rad = (b - a).scale(half);
    let mut acc = C::zero();
    for &(x, w) in nodes.iter() {
        let z = mid + rad.scale(x);
        acc = acc + f(z).scale(w);
    }
    acc * rad
}

/// Adaptive integral of `f` along the straight segment from `a` to `b`.
///
/// Returns exactly zero for an empty segment.
pub fn integrate_segment<R: Real, F: Fn(C<R>) -> C<R>>(
    f: &F,
    a: C<R>,
    b: C<R>,
    opts: &QuadOpts,
) -> Result<C<R>, QuadError> {
    if a == b {
        return Ok(C::zero());
    }
    let nodes = gl16::<R>();
    let whole = panel(f, &nodes, a, b);
    let mut total = C::zero();
    let mut panels = 1usize;
    // Work stack of (a, b, parent_estimate, depth).
    let mut stack: Vec<(C<R>, C<R>, C<R>, usize)> = vec![(a, b, whole, 0)];
    while let Some((a, b, parent, depth)) = stack.pop() {
        let mid = (a + b).scale(R::from_f64(0.5));
        let left = panel(f, &nodes, a, mid);
        let right = panel(f, &nodes, mid, b);
        panels += 2;
        if panels > opts.max_panels {
            return Err(QuadError::PanelBudget { panels });
        }
        let children = left + right;
        let err = (children - parent).abs().to_f64();
        let scale = left.abs().to_f64() + right.abs().to_f64();
        if err <= (opts.rel_tol * scale).max(opts.abs_tol) || !err.is_finite() {
            total = total + children;
        } else if depth + 1 >= opts.max_depth {
            return Err(QuadError::NoConvergence {
                max_depth: opts.max_depth,
                panels,
            });
        } else {
            stack.push((a, mid, left, depth + 1));
            stack.push((mid, b, right, depth + 1));
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dd::Dd;

    #[test]
    fn polynomial_segments_exact() {
        // integral of w^2 from 0 to 1+i is (1+i)^3/3
        let opts = QuadOpts::double();
        let f = |z: C<f64>| z * z;
        let a = C::from_f64(0.0, 0.0);
        let b = C::from_f64(1.0, 1.0);
        let got = integrate_segment(&f, a, b, &opts).unwrap();
        let want = (b * b * b).scale(1.0 / 3.0);
        assert!((got - want).abs() < 1e-14);
    }

    #[test]
    fn empty_segment_is_exactly_zero() {
        let opts = QuadOpts::double();
        let f = |z: C<f64>| z;
        let a = C::from_f64(0.3, -0.2);
        let got = integrate_segment(&f, a, a, &opts).unwrap();
        assert_eq!(got.re, 0.0);
        assert_eq!(got.im, 0.0);
    }

    #[test]
    fn peaked_high_power_converges() {
        // integral of w^199 from 0 to 1 = 1/200; sharply peaked at 1.
        let opts = QuadOpts::double();
        let f = |z: C<f64>| {
            let mut acc = C::one();
            let mut base = z;
            let mut k = 199u32;
            while k > 0 {
                if k & 1 == 1 {
                    acc = acc * base;
                }
                base = base * base;
                k >>= 1;
            }
            acc
        };
        let got = integrate_segment(&f, C::from_f64(0.0, 0.0), C::from_f64(1.0, 0.0), &opts)
            .unwrap();
        assert!((got.re - 1.0 / 200.0).abs() < 1e-14, "got {}", got.re);
    }

    #[test]
    fn dd_panel_reaches_dd_accuracy() {
        let opts = QuadOpts::double_double();
        let f = |z: C<Dd>| z * z * z;
        let b = C::<Dd>::from_f64(2.0, 0.0);
        let got = integrate_segment(&f, C::zero(), b, &opts).unwrap();
        // exact: 2^4/4 = 4
        assert!((got.re - Dd::from_f64(4.0)).abs().to_f64() < 1e-29);
        assert!(got.im.abs().to_f64() < 1e-29);
    }

    #[test]
    fn oscillatory_phase_converges() {
        // integral of w^60 along the chord from 1 to -1+0.01i (phase turns ~60π)
        let opts = QuadOpts::double();
        let pow = |z: C<f64>, mut k: u32| {
            let mut acc = C::one();
            let mut base = z;
            while k > 0 {
                if k & 1 == 1 {
                    acc = acc * base;
                }
                base = base * base;
                k >>= 1;
            }
            acc
        };
        let f = |z: C<f64>| pow(z, 60);
        let a = C::from_f64(1.0, 0.0);
        let b = C::from_f64(-1.0, 0.01);
        let got = integrate_segment(&f, a, b, &opts).unwrap();
        let want = (pow(b, 61) - pow(a, 61)).scale(1.0 / 61.0);
        assert!((got - want).abs() < 1e-12 * (1.0 + want.abs()));
    }
}
