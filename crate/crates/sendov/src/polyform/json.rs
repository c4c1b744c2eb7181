//! JSON spec files.
//!
//! Format:
//! ```json
//! {"beta": "0.788188270312241",
//!  "critical_points": [{"re": "0.04698...", "im": "0.57655...", "m": 1}, ...],
//!  "family": {...}}
//! ```
//! Numeric fields accept either JSON numbers or strings; strings preserve
//! every printed digit (the decimal is parsed into double-double directly,
//! never through a rounded `f64`). Writers emit strings for the same
//! reason. The optional `family` annotation is carried through untouched
//! and ignored by the core parser.

use super::{CriticalPoint, PolySpec, SpecError};
use crate::dd::Dd;
use serde::{Deserialize, Serialize};

/// A decimal value as it appears in a file: number or digit-preserving text.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum DecScalar {
    Text(String),
    Num(f64),
}

impl DecScalar {
    pub fn to_dd(&self) -> Result<Dd, SpecError> {
        match self {
            DecScalar::Text(s) => Ok(Dd::parse(s)?),
            DecScalar::Num(x) => Ok(Dd::from_f64(*x)),
        }
    }

    fn from_dd(v: Dd) -> DecScalar {
        // 33 significant digits round-trip the full dd value.
        DecScalar::Text(v.to_decimal_string(33))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CritDocument {
    pub re: DecScalar,
    pub im: DecScalar,
    pub m: u32,
}

/// On-disk shape of a spec file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpecDocument {
    pub beta: DecScalar,
    pub critical_points: Vec<CritDocument>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub family: Option<serde_json::Value>,
}

impl SpecDocument {
    pub fn to_spec(&self) -> Result<PolySpec, SpecError> {
        let beta = self.beta.to_dd()?;
        let crits = self
            .critical_points
            .iter()
            .map(|c| {
                if c.m == 0 {
                    return Err(SpecError::ZeroMultiplicity);
                }
                Ok(CriticalPoint {
                    zeta: crate::cx::C::new(c.re.to_dd()?, c.im.to_dd()?),
                    m: c.m,
                })
            })
            .collect::<Result<Vec<_>, SpecError>>()?;
        PolySpec::with_beta_dd(beta, crits)
    }

    pub fn from_spec(spec: &PolySpec) -> SpecDocument {
        SpecDocument {
            beta: DecScalar::from_dd(spec.beta_dd()),
            critical_points: spec
                .critical_points()
                .iter()
                .map(|c| CritDocument {
                    re: DecScalar::from_dd(c.zeta_dd().re),
                    im: DecScalar::from_dd(c.zeta_dd().im),
                    m: c.multiplicity(),
                })
                .collect(),
            family: None,
        }
    }
}

/// Parse a spec from JSON text.
pub fn spec_from_json(text: &str) -> Result<PolySpec, SpecJsonError> {
    let doc: SpecDocument = serde_json::from_str(text)?;
    Ok(doc.to_spec()?)
}

/// Serialize a spec to JSON text (decimal strings, full precision).
pub fn spec_to_json(spec: &PolySpec) -> String {
    serde_json::to_string_pretty(&SpecDocument::from_spec(spec)).expect("spec serializes")
}

#[derive(Debug, thiserror::Error)]
pub enum SpecJsonError {
    #[error("malformed spec JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Spec(#[from] SpecError),
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_numbers_and_strings() {
        let text = r#"{
            "beta": "0.999999387871706",
            "critical_points": [
                {"re": 0.0000399954026754105, "im": "0.00898912895921542", "m": 1},
                {"re": "-4.07186589509001E-7", "im": "-0.0000301636393125034", "m": 298}
            ]
        }"#;
        let spec = spec_from_json(text).unwrap();
        assert_eq!(spec.degree(), 300);
        // string parse keeps the digits that f64 would round away
        let beta = spec.beta_dd();
        let complement = (crate::dd::DD_ONE - beta).to_f64();
        assert!((complement - 6.12128294e-7).abs() < 1e-20);
    }

    #[test]
    fn rejects_invalid() {
        assert!(spec_from_json("{").is_err());
        assert!(spec_from_json(r#"{"beta": 1.5, "critical_points": [{"re": 0, "im": 0, "m": 1}]}"#).is_err());
        assert!(spec_from_json(r#"{"beta": 0.5, "critical_points": []}"#).is_err());
        assert!(spec_from_json(r#"{"beta": 0.5, "critical_points": [{"re": 0, "im": 0, "m": 0}]}"#)
            .is_err());
    }

    #[test]
    fn round_trip_preserves_values() {
        let text = r#"{"beta": "0.788188270312241", "critical_points": [
            {"re": "0.0469833741737209", "im": "0.576557593047195", "m": 1},
            {"re": "0.0469833741737209", "im": "-0.576557593047195", "m": 1},
            {"re": "-0.150855581784183", "im": "0", "m": 3}]}"#;
        let spec = spec_from_json(text).unwrap();
        let out = spec_to_json(&spec);
        let spec2 = spec_from_json(&out).unwrap();
        assert_eq!(spec.beta_dd().hi, spec2.beta_dd().hi);
        assert!((spec.beta_dd().lo - spec2.beta_dd().lo).abs() < 1e-31);
        for (a, b) in spec.critical_points().iter().zip(spec2.critical_points()) {
            assert_eq!(a.multiplicity(), b.multiplicity());
            assert_eq!(a.zeta_dd().re.hi, b.zeta_dd().re.hi);
            assert_eq!(a.zeta_dd().im.hi, b.zeta_dd().im.hi);
        }
    }

    #[test]
    fn family_annotation_ignored_and_preserved() {
        let text = r#"{"beta": 0.5, "critical_points": [{"re": 0.1, "im": 0, "m": 1}],
                       "family": {"name": "brs_star", "n": 2}}"#;
        let doc: SpecDocument = serde_json::from_str(text).unwrap();
        assert!(doc.family.is_some());
        assert!(doc.to_spec().is_ok());
    }
}
