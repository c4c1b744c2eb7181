//! Numerical toolkit around the quadratic refinement of Sendov's
//! conjecture.
//!
//! For a polynomial with all roots in the closed unit disk and a root at
//! `β ∈ [0, 1]`, let `d(P, β)` be the distance from `β` to the nearest
//! critical point. Sendov's conjecture says `d(P, β) ≤ 1`; the refinement
//! studied here asks for constants `c > 0` with
//! `d(P, β) ≤ 1 − c·β(1−β)`.
//!
//! This crate provides:
//!
//! - [`polyform`]: polynomials specified by `β` and the critical points
//!   with multiplicities, `P(z) = ∫_β^z ∏ (w−ζ_i)^{m_i} dw`, evaluated
//!   stably up to degree ~3200 (with an internal double-double path);
//! - [`roots`]: all-roots solving (Aberth-Ehrlich on the integral form)
//!   and unit-disk membership certification, cross-checked by
//!   argument-principle winding counts;
//! - [`metrics`]: `d`, the deficiency ratio `c = (1−d)/(β(1−β))`, and a
//!   catalog of closed-form bounds and exact `r_n(β)` formulas;
//! - [`families`]: constructive generators for the special families
//!   (roots on a line, one distinct critical point, `z^n − z`,
//!   `z^n − e^{it}`, real quartics) and their distance-bound checks;
//! - [`search`]: derivative-free searches over critical-point
//!   configurations with fixed multiplicity patterns, minimizing `c`;
//! - [`tables`]: an embedded dataset of conjectured extremal
//!   configurations (degrees 6 through 3201) with verification;
//! - [`cli`]: the `sendov` command-line tool (`eval`, `verify-tables`,
//!   `bound`, `search`, `families`).
//!
//! Start with the runnable examples in `examples/`.

pub mod cli;
pub mod cx;
pub mod dd;
pub mod families;
pub mod metrics;
pub mod polyform;
pub mod quad;
pub mod roots;
pub mod search;
pub mod tables;

pub use polyform::{CriticalPoint, PolySpec};
