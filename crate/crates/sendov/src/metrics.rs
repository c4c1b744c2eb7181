//! Distances, the deficiency ratio `c`, and the catalog of closed-form
//! bounds and exact formulas for `r_n(β)`.
//!
//! Conventions: `d(P, β)` is the distance from `β` to the nearest critical
//! point; `r_n(β)` the largest such distance over degree-`n` members of
//! `S(β)`; and `c_n(β) = (1 − r_n(β)) / (β(1−β))` the quadratic deficiency
//! ratio. The catalog names each formula and marks whether it is exact, a
//! proved upper bound, an asymptotic expansion, or a conjectured value.

use crate::dd::{Dd, DD_ONE};
use crate::polyform::PolySpec;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum MetricsError {
    #[error("c is undefined at beta = {0} (needs 0 < beta < 1)")]
    EndpointUndefined(f64),
}

/// A `(β, d, c)` triple with `c = (1−d)/(β(1−β))`.
#[derive(Debug, Clone, Copy, Serialize, PartialEq)]
pub struct CValue {
    pub beta: f64,
    pub d: f64,
    pub c: f64,
}

/// `d(P, β) = min_i |ζ_i − β|` (multiplicity-independent).
pub fn dist_to_nearest_critical(spec: &PolySpec) -> f64 {
    dist_to_nearest_critical_dd(spec).to_f64()
}

/// Extended-precision distance, needed when `1 − d` is at the 1e-10 scale.
pub(crate) fn dist_to_nearest_critical_dd(spec: &PolySpec) -> Dd {
    let beta = spec.beta_dd();
    spec.critical_points()
        .iter()
        .map(|c| {
            let dr = c.zeta_dd().re - beta;
            let di = c.zeta_dd().im;
            (dr * dr + di * di).sqrt()
        })
        .min_by(|a, b| a.partial_cmp(b).expect("finite distances"))
        .expect("spec has critical points")
}

/// `c = (1−d)/(β(1−β))` from binary64 inputs.
///
/// For `1 − β` below about 1e-8 the subtraction must instead be carried in
/// extended precision from the decimal input (see [`c_value_dd`]); this
/// entry point is fine away from the endpoint.
pub fn c_value(beta: f64, d: f64) -> Result<CValue, MetricsError> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(MetricsError::EndpointUndefined(beta));
    }
    Ok(CValue {
        beta,
        d,
        c: (1.0 - d) / (beta * (1.0 - beta)),
    })
}

/// `c` computed entirely in double-double; `beta` and `d` should come from
/// decimal-exact parsing so `1−β` and `1−d` keep their digits.
pub fn c_value_dd(beta: Dd, d: Dd) -> Result<CValue, MetricsError> {
    let b = beta.to_f64();
    if !(b > 0.0 && b < 1.0) {
        return Err(MetricsError::EndpointUndefined(b));
    }
    let c = (DD_ONE - d) / (beta * (DD_ONE - beta));
    Ok(CValue {
        beta: b,
        d: d.to_f64(),
        c: c.to_f64(),
    })
}

/// `c` for a spec, with the distance and `1−β` both carried in dd.
pub fn c_value_of_spec(spec: &PolySpec) -> Result<CValue, MetricsError> {
    c_value_dd(spec.beta_dd(), dist_to_nearest_critical_dd(spec))
}

/// Schmeisser's bound: `r_n(β) ≤ (n + 2β − β²(n−2)) / (n + 2 − β(n−2))`.
pub fn schmeisser_bound(n: u32, beta: f64) -> f64 {
    let nf = n as f64;
    (nf + 2.0 * beta - beta * beta * (nf - 2.0)) / (nf + 2.0 - beta * (nf - 2.0))
}

/// Relaxation of Schmeisser's bound: `r_n(β) ≤ 1 − ((4−n)/4)·β(1−β)`.
pub fn relaxed_schmeisser_bound(n: u32, beta: f64) -> f64 {
    1.0 - (4.0 - n as f64) / 4.0 * beta * (1.0 - beta)
}

/// Exact: `r_2(β) = (1+β)/2`.
pub fn r2_exact(beta: f64) -> f64 {
    (1.0 + beta) / 2.0
}

/// Rahman's exact formula: `r_3(β) = (3β + √(12 − 3β²)) / 6`.
pub fn r3_exact(beta: f64) -> f64 {
    (3.0 * beta + (12.0 - 3.0 * beta * beta).sqrt()) / 6.0
}

/// Exact at the origin: `r_n(0) = (1/n)^{1/(n−1)}`.
pub fn rn_at_zero(n: u32) -> f64 {
    (1.0 / n as f64).powf(1.0 / (n as f64 - 1.0))
}

/// Second-order expansion of `r_5` near `β = 1`:
/// `1 − (3/10)(1−β) + (1/200)(1−β)²` (the cubic term is dropped).
pub fn r5_asymptotic(beta: f64) -> f64 {
    let t = 1.0 - beta;
    1.0 - 0.3 * t + t * t / 200.0
}

/// Conjectured smallest `c_n` for `2 ≤ n ≤ 8`.
///
/// Exact constants where known (`1/2`, `1/3`, `1/3`, `3/10`,
/// `(8−4√2)/7`); the degree 6 and 7 values are the best experimentally
/// found configurations, kept verbatim.
pub fn conjectured_cn(n: u32) -> Option<f64> {
    match n {
        2 => Some(0.5),
        3 => Some(1.0 / 3.0),
        4 => Some(1.0 / 3.0),
        5 => Some(0.3),
        6 => Some(0.365121611819106),
        7 => Some(0.335088765359222),
        8 => Some((8.0 - 4.0 * 2f64.sqrt()) / 7.0),
        _ => None,
    }
}

/// Does the spec satisfy the refined bound `d ≤ 1 − c·β(1−β)`?
///
/// Distances within 1e-12 of the bound count as satisfying it: the
/// conjectured extremal configurations sit exactly on the bound, so an
/// exact `≤` would flip on the last binary digit.
pub fn check_refined_bound(spec: &PolySpec, c: f64) -> bool {
    let beta = spec.beta();
    let d = dist_to_nearest_critical(spec);
    d <= 1.0 - c * beta * (1.0 - beta) + 1e-12
}

/// How a catalog formula is to be read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Exact,
    UpperBound,
    Conjectured,
    Asymptotic,
}

/// A named bound or exact formula for `r_n(β)`.
pub struct BoundEntry {
    pub name: &'static str,
    pub kind: BoundKind,
    /// Human-readable domain of validity.
    pub applicability: &'static str,
    is_applicable: fn(n: u32, beta: f64) -> bool,
    value: fn(n: u32, beta: f64) -> f64,
}

impl BoundEntry {
    /// The formula's value, if applicable at `(n, beta)`.
    pub fn value_at(&self, n: u32, beta: f64) -> Option<f64> {
        if (self.is_applicable)(n, beta) {
            let v = (self.value)(n, beta);
            debug_assert!(v.is_finite());
            Some(v)
        } else {
            None
        }
    }
}

/// The full catalog of `r_n(β)` formulas.
pub fn catalog() -> &'static [BoundEntry] {
    &[
        BoundEntry {
            name: "schmeisser_bound",
            kind: BoundKind::UpperBound,
            applicability: "n >= 2, 0 <= beta <= 1",
            is_applicable: |n, b| n >= 2 && (0.0..=1.0).contains(&b),
            value: schmeisser_bound,
        },
        BoundEntry {
            name: "relaxed_schmeisser_bound",
            kind: BoundKind::UpperBound,
            applicability: "n >= 2, 0 <= beta <= 1",
            is_applicable: |n, b| n >= 2 && (0.0..=1.0).contains(&b),
            value: relaxed_schmeisser_bound,
        },
        BoundEntry {
            name: "r2_exact",
            kind: BoundKind::Exact,
            applicability: "n = 2",
            is_applicable: |n, b| n == 2 && (0.0..=1.0).contains(&b),
            value: |_, b| r2_exact(b),
        },
        BoundEntry {
            name: "r3_exact",
            kind: BoundKind::Exact,
            applicability: "n = 3",
            is_applicable: |n, b| n == 3 && (0.0..=1.0).contains(&b),
            value: |_, b| r3_exact(b),
        },
        BoundEntry {
            name: "rn_at_zero",
            kind: BoundKind::Exact,
            applicability: "beta = 0 (shown as a constant column)",
            is_applicable: |n, _| n >= 2,
            value: |n, _| rn_at_zero(n),
        },
        BoundEntry {
            name: "r5_asymptotic",
            kind: BoundKind::Asymptotic,
            applicability: "n = 5, beta near 1",
            is_applicable: |n, b| n == 5 && (0.0..=1.0).contains(&b),
            value: |_, b| r5_asymptotic(b),
        },
        BoundEntry {
            name: "conjectured_refined_bound",
            kind: BoundKind::Conjectured,
            applicability: "2 <= n <= 8: 1 - c_n beta(1-beta)",
            is_applicable: |n, b| conjectured_cn(n).is_some() && (0.0..=1.0).contains(&b),
            value: |n, b| 1.0 - conjectured_cn(n).expect("applicable") * b * (1.0 - b),
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyform::CriticalPoint;
    use num_complex::Complex64;

    fn counterexample() -> PolySpec {
        PolySpec::from_decimal_beta(
            "0.674",
            vec![
                CriticalPoint::from_decimal("-0.24", "0.38", 1).unwrap(),
                CriticalPoint::from_decimal("-0.13", "-0.25", 2).unwrap(),
            ],
        )
        .unwrap()
    }

    fn table1_n6() -> PolySpec {
        PolySpec::from_decimal_beta(
            "0.788188270312241",
            vec![
                CriticalPoint::from_decimal("0.0469833741737209", "0.576557593047195", 1).unwrap(),
                CriticalPoint::from_decimal("0.0469833741737209", "-0.576557593047195", 1)
                    .unwrap(),
                CriticalPoint::from_decimal("-0.150855581784183", "0", 3).unwrap(),
            ],
        )
        .unwrap()
    }

    #[test]
    fn distance_examples() {
        assert!((dist_to_nearest_critical(&counterexample()) - 0.842).abs() < 1e-3);
        assert!(
            (dist_to_nearest_critical(&table1_n6()) - 0.939043852096423).abs() < 1e-12,
            "d = {}",
            dist_to_nearest_critical(&table1_n6())
        );
        // critical point on beta: zero distance
        let spec = PolySpec::new(
            0.5,
            vec![CriticalPoint::new(Complex64::new(0.5, 0.0), 1).unwrap()],
        )
        .unwrap();
        assert_eq!(dist_to_nearest_critical(&spec), 0.0);
    }

    #[test]
    fn c_value_examples() {
        let c = c_value(0.5, 1.0).unwrap();
        assert_eq!(c.c, 0.0);
        let c = c_value(0.788188270312241, 0.939043852096423).unwrap();
        assert!((c.c - 0.365121611819106).abs() < 1e-9 * 0.365);
        assert!(c_value(0.0, 0.5).is_err());
        assert!(c_value(1.0, 0.5).is_err());
    }

    #[test]
    fn c_value_dd_table3_n300() {
        let beta = Dd::parse("0.999999387871706").unwrap();
        let d = Dd::parse("0.999999795513218").unwrap();
        let c = c_value_dd(beta, d).unwrap();
        assert!(
            (c.c - 0.334058904562927).abs() < 1e-6 * 0.334,
            "c = {}",
            c.c
        );
    }

    #[test]
    fn schmeisser_examples() {
        assert!((schmeisser_bound(2, 0.5) - 0.75).abs() < 1e-15);
        assert!((schmeisser_bound(4, 1.0) - 1.0).abs() < 1e-15);
        assert!((schmeisser_bound(4, 0.5) - 0.9).abs() < 1e-15);
        // n = 2 agrees with the exact r_2
        for k in 0..=100 {
            let b = k as f64 / 100.0;
            assert!((schmeisser_bound(2, b) - r2_exact(b)).abs() < 1e-14);
        }
    }

    #[test]
    fn relaxed_bound_examples() {
        assert_eq!(relaxed_schmeisser_bound(4, 0.3), 1.0);
        assert!((relaxed_schmeisser_bound(2, 0.5) - 0.875).abs() < 1e-15);
        assert!((relaxed_schmeisser_bound(8, 0.5) - 1.25).abs() < 1e-15);
    }

    #[test]
    fn exact_formulas_at_endpoints() {
        assert_eq!(r3_exact(1.0), 1.0);
        assert!((r3_exact(0.0) - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!((r3_exact(0.0) - rn_at_zero(3)).abs() < 1e-15);
        assert_eq!(rn_at_zero(2), 0.5);
        assert_eq!(r2_exact(1.0), 1.0);
    }

    #[test]
    fn conjectured_constants() {
        assert_eq!(conjectured_cn(2), Some(0.5));
        assert_eq!(conjectured_cn(5), Some(0.3));
        let c8 = conjectured_cn(8).unwrap();
        assert!((c8 - 0.334735107215374).abs() < 1e-14);
        assert_eq!(conjectured_cn(9), None);
        assert_eq!(conjectured_cn(1), None);
    }

    #[test]
    fn refined_bound_on_table_row() {
        let spec = table1_n6();
        assert!(check_refined_bound(&spec, 0.365121611819106));
        assert!(check_refined_bound(&spec, 0.0));
        // equality within 1e-9
        let d = dist_to_nearest_critical(&spec);
        let b = spec.beta();
        let bound = 1.0 - 0.365121611819106 * b * (1.0 - b);
        assert!((d - bound).abs() < 1e-9);
    }

    #[test]
    fn catalog_applicability() {
        let cat = catalog();
        let r3 = cat.iter().find(|e| e.name == "r3_exact").unwrap();
        assert!(r3.value_at(3, 0.5).is_some());
        assert!(r3.value_at(4, 0.5).is_none());
        let s = cat.iter().find(|e| e.name == "schmeisser_bound").unwrap();
        assert!(s.value_at(17, 0.25).is_some());
    }
}
