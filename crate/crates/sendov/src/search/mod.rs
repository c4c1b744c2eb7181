//! Searches for configurations minimizing the deficiency ratio `c`.
//!
//! A search fixes a multiplicity pattern (how many distinct critical
//! points, their multiplicities, which come as conjugate pairs), exposes
//! the free coordinates as a real parameter vector, and runs seeded
//! Nelder-Mead descents on `c` after rescaling each candidate so its
//! furthest root touches the unit circle. Every reported result is
//! membership-checked. Identical seeds give bit-identical results.

mod nelder_mead;

use crate::metrics::{c_value, dist_to_nearest_critical, MetricsError};
use crate::polyform::{CriticalPoint, PolySpec, SpecDocument, SpecError};
use crate::roots::{check_membership, find_roots, MembershipReport, RootError};
use nelder_mead::{nelder_mead, NmOpts};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum SearchError {
    #[error("no start produced a disk-member result")]
    NoFeasibleResult,
    #[error("start spec does not match the multiplicity pattern")]
    PatternMismatch,
    #[error("pattern invalid: {0}")]
    BadPattern(String),
    #[error("cannot normalize a spec whose roots are all at the origin")]
    DegenerateScale,
    #[error(transparent)]
    Roots(#[from] RootError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Spec(#[from] SpecError),
}

/// One group of critical points: a multiplicity, either a single real
/// point or a conjugate pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternPart {
    pub m: u32,
    pub paired: bool,
}

/// A multiset of [`PatternPart`]s describing the shape of a configuration.
///
/// The degree is `1 + Σ m·(paired ? 2 : 1)`; unpaired parts stay on the
/// real axis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiplicityPattern {
    parts: Vec<PatternPart>,
}

impl MultiplicityPattern {
    pub fn new(mut parts: Vec<PatternPart>) -> Result<Self, SearchError> {
        if parts.is_empty() {
            return Err(SearchError::BadPattern("no parts".into()));
        }
        if parts.iter().any(|p| p.m == 0) {
            return Err(SearchError::BadPattern("zero multiplicity".into()));
        }
        parts.sort_by(|a, b| (b.m, b.paired).cmp(&(a.m, a.paired)));
        Ok(MultiplicityPattern { parts })
    }

    pub fn parts(&self) -> &[PatternPart] {
        &self.parts
    }

    /// Degree of the polynomials this pattern describes.
    pub fn degree(&self) -> u32 {
        1 + self
            .parts
            .iter()
            .map(|p| p.m * if p.paired { 2 } else { 1 })
            .sum::<u32>()
    }

    /// Number of distinct critical points.
    pub fn distinct_points(&self) -> u32 {
        self.parts.iter().map(|p| if p.paired { 2 } else { 1 }).sum()
    }

    /// Multiset of the multiplicities of the distinct points, sorted
    /// descending (a conjugate pair contributes its multiplicity twice).
    pub fn multiplicity_multiset(&self) -> Vec<u32> {
        let mut v = Vec::new();
        for p in &self.parts {
            v.push(p.m);
            if p.paired {
                v.push(p.m);
            }
        }
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }

    /// Parameter dimension: one slot for β when free, then (re, im) per
    /// paired part and re per unpaired part.
    pub fn dims(&self, beta_free: bool) -> usize {
        (beta_free as usize)
            + self
                .parts
                .iter()
                .map(|p| if p.paired { 2 } else { 1 })
                .sum::<usize>()
    }

    /// Build the spec for a parameter vector.
    fn decode(&self, beta: f64, params: &[f64]) -> Result<PolySpec, SearchError> {
        let mut crits = Vec::new();
        let mut i = 0;
        for p in &self.parts {
            if p.paired {
                let re = params[i].clamp(-2.0, 2.0);
                let im = params[i + 1].clamp(-2.0, 2.0);
                i += 2;
                crits.push(CriticalPoint::new(Complex64::new(re, im), p.m)?);
                crits.push(CriticalPoint::new(Complex64::new(re, -im), p.m)?);
            } else {
                let re = params[i].clamp(-2.0, 2.0);
                i += 1;
                crits.push(CriticalPoint::new(Complex64::new(re, 0.0), p.m)?);
            }
        }
        debug_assert_eq!(i, params.len());
        Ok(PolySpec::new(beta, crits)?)
    }

    /// Extract the parameter vector from a spec laid out in part order.
    fn encode(&self, spec: &PolySpec) -> Result<Vec<f64>, SearchError> {
        let crits = spec.critical_points();
        let mut params = Vec::new();
        let mut i = 0;
        for p in &self.parts {
            if p.paired {
                if i + 1 >= crits.len()
                    || crits[i].multiplicity() != p.m
                    || crits[i + 1].multiplicity() != p.m
                {
                    return Err(SearchError::PatternMismatch);
                }
                let a = crits[i].zeta();
                let b = crits[i + 1].zeta();
                if (a - b.conj()).norm() > 1e-9 * (1.0 + a.norm()) {
                    return Err(SearchError::PatternMismatch);
                }
                params.push(a.re);
                params.push(a.im.abs());
                i += 2;
            } else {
                if i >= crits.len() || crits[i].multiplicity() != p.m {
                    return Err(SearchError::PatternMismatch);
                }
                let z = crits[i].zeta();
                if z.im.abs() > 1e-9 {
                    return Err(SearchError::PatternMismatch);
                }
                params.push(z.re);
                i += 1;
            }
        }
        if i != crits.len() {
            return Err(SearchError::PatternMismatch);
        }
        Ok(params)
    }

    fn fnv_hash(&self) -> u64 {
        let mut h: u64 = 0xcbf29ce484222325;
        for p in &self.parts {
            for b in p
                .m
                .to_le_bytes()
                .iter()
                .chain([p.paired as u8].iter())
            {
                h ^= *b as u64;
                h = h.wrapping_mul(0x100000001b3);
            }
        }
        h
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BetaMode {
    FreeIn { lo: f64, hi: f64 },
    Fixed(f64),
}

impl Default for BetaMode {
    /// Free range default; the upper cap mirrors that minima are often
    /// approached (not attained) as β → 1.
    fn default() -> Self {
        BetaMode::FreeIn { lo: 0.01, hi: 0.999 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// Rescale every candidate so its furthest root has modulus exactly 1.
    #[default]
    RescaleToUnit,
    /// Leave candidates as decoded; infeasibility only enters through the
    /// penalty term.
    PenaltyOnly,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchProblem {
    pub n: u32,
    pub pattern: MultiplicityPattern,
    #[serde(default)]
    pub beta_mode: BetaMode,
    #[serde(default)]
    pub normalization: Normalization,
}

impl SearchProblem {
    pub fn new(n: u32, pattern: MultiplicityPattern) -> Result<Self, SearchError> {
        if pattern.degree() != n {
            return Err(SearchError::BadPattern(format!(
                "pattern degree {} != n = {}",
                pattern.degree(),
                n
            )));
        }
        Ok(SearchProblem {
            n,
            pattern,
            beta_mode: BetaMode::default(),
            normalization: Normalization::default(),
        })
    }

    fn beta_bounds(&self) -> (f64, f64) {
        match self.beta_mode {
            BetaMode::FreeIn { lo, hi } => (lo, hi),
            BetaMode::Fixed(b) => (b, b),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    pub budget: usize,
    pub penalty_weight: f64,
    pub membership_tol: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            budget: 4000,
            penalty_weight: 1e3,
            membership_tol: 1e-9,
        }
    }
}

/// Best configuration found by a search.
#[derive(Debug, Clone, Serialize)]
pub struct SearchResult {
    #[serde(serialize_with = "ser_spec")]
    pub spec: PolySpec,
    pub d: f64,
    pub c: f64,
    pub membership: MembershipReport,
    pub converged: bool,
    pub evaluations: usize,
    pub seed: u64,
}

fn ser_spec<S: serde::Serializer>(spec: &PolySpec, s: S) -> Result<S::Ok, S::Error> {
    SpecDocument::from_spec(spec).serialize(s)
}

/// Largest root modulus of the spec's polynomial.
pub fn max_root_modulus(spec: &PolySpec) -> Result<f64, RootError> {
    Ok(find_roots(spec)?.max_modulus())
}

/// `c` plus a penalty for roots sticking out of the unit disk:
/// `c + weight · max(0, max|root| − 1)`. Lower is better.
pub fn objective(spec: &PolySpec, penalty_weight: f64) -> Result<f64, SearchError> {
    let s = max_root_modulus(spec)?;
    let d = dist_to_nearest_critical(spec);
    let cv = c_value(spec.beta(), d)?;
    Ok(cv.c + penalty_weight * (s - 1.0).max(0.0))
}

/// Rescale so the furthest root has modulus exactly 1 (β and all critical
/// points divided by the max root modulus). Conjugate symmetry and
/// `β ∈ (0, 1]` are preserved; β stays a root.
pub fn normalize(spec: &PolySpec) -> Result<PolySpec, SearchError> {
    let s = max_root_modulus(spec)?;
    normalize_with_scale(spec, s)
}

fn normalize_with_scale(spec: &PolySpec, s: f64) -> Result<PolySpec, SearchError> {
    if !(s > 0.0) {
        return Err(SearchError::DegenerateScale);
    }
    debug_assert!(
        s >= spec.beta() - 1e-12,
        "max root modulus below beta cannot happen: beta is a root"
    );
    let beta = (spec.beta() / s).min(1.0);
    let crits = spec
        .critical_points()
        .iter()
        .map(|c| CriticalPoint::new(c.zeta() / s, c.multiplicity()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PolySpec::new(beta, crits)?)
}

/// Nelder-Mead descent from a start spec matching the problem's pattern.
///
/// Deterministic given `(problem, start, seed)`. Budget exhaustion is not
/// an error: the best-so-far result is returned with `converged = false`.
pub fn local_search(
    problem: &SearchProblem,
    start: &PolySpec,
    seed: u64,
    opts: &SearchOptions,
) -> Result<SearchResult, SearchError> {
    let (lo, hi) = problem.beta_bounds();
    let beta_free = !matches!(problem.beta_mode, BetaMode::Fixed(_));
    let mut x0 = Vec::new();
    if beta_free {
        if !(lo < hi) {
            return Err(SearchError::BadPattern("empty beta range".into()));
        }
        x0.push(start.beta().clamp(lo, hi));
    }
    x0.extend(problem.pattern.encode(start)?);

    let decode = |x: &[f64]| -> Result<PolySpec, SearchError> {
        let (beta, rest) = if beta_free {
            (x[0].clamp(lo, hi), &x[1..])
        } else {
            (lo, x)
        };
        problem.pattern.decode(beta, rest)
    };

    let normalization = problem.normalization;
    let penalty = opts.penalty_weight;
    let mut evals_outside = 0usize;
    let mut f = |x: &[f64]| -> f64 {
        evals_outside += 1;
        let spec = match decode(x) {
            Ok(s) => s,
            Err(_) => return f64::INFINITY,
        };
        let s = match max_root_modulus(&spec) {
            Ok(s) => s,
            Err(_) => return f64::INFINITY,
        };
        let eval_spec = match normalization {
            Normalization::RescaleToUnit => match normalize_with_scale(&spec, s) {
                Ok(ns) => ns,
                Err(_) => return f64::INFINITY,
            },
            Normalization::PenaltyOnly => spec,
        };
        let d = dist_to_nearest_critical(&eval_spec);
        let cv = match c_value(eval_spec.beta(), d) {
            Ok(cv) => cv,
            Err(_) => return f64::INFINITY,
        };
        let excess = match normalization {
            Normalization::RescaleToUnit => 0.0,
            Normalization::PenaltyOnly => (s - 1.0).max(0.0),
        };
        cv.c + penalty * excess
    };

    // deterministic simplex steps with a small seeded jitter
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = x0.len();
    let mut h = Vec::with_capacity(dim);
    for i in 0..dim {
        let base = if beta_free && i == 0 {
            0.05 * (hi - lo)
        } else {
            0.1
        };
        h.push(base * (1.0 + 0.2 * (rng.random::<f64>() - 0.5)));
    }

    let nm_opts = NmOpts {
        budget: opts.budget,
        ..NmOpts::default()
    };
    let first = nelder_mead(&mut f, &x0, &h, &nm_opts);
    // one re-expansion restart at the incumbent: fresh simplex scale there
    let remaining = opts.budget.saturating_sub(first.evaluations);
    let result = if remaining > dim + 1 {
        let second = nelder_mead(
            &mut f,
            &first.x,
            &h,
            &NmOpts {
                budget: remaining,
                ..NmOpts::default()
            },
        );
        if second.value < first.value {
            second
        } else {
            first
        }
    } else {
        first
    };

    let raw = decode(&result.x)?;
    let final_spec = match problem.normalization {
        Normalization::RescaleToUnit => normalize(&raw)?,
        Normalization::PenaltyOnly => raw,
    };
    let d = dist_to_nearest_critical(&final_spec);
    let cv = c_value(final_spec.beta(), d)?;
    let membership = check_membership(&final_spec, opts.membership_tol)?;
    Ok(SearchResult {
        spec: final_spec,
        d,
        c: cv.c,
        membership,
        converged: result.converged,
        evaluations: evals_outside,
        seed,
    })
}

/// `k` seeded random starts; returns the member result with minimal `c`
/// (ties to the lower start index). Fully reproducible from `seed`.
pub fn multistart(
    problem: &SearchProblem,
    k: usize,
    seed: u64,
    opts: &SearchOptions,
) -> Result<SearchResult, SearchError> {
    assert!(k >= 1);
    let attempts: Vec<Option<SearchResult>> = (0..k)
        .into_par_iter()
        .map(|i| {
            let start_seed = splitmix(seed ^ (i as u64).wrapping_mul(0x9e3779b97f4a7c15));
            let start = sample_start(problem, start_seed)?;
            local_search(problem, &start, start_seed, opts).ok()
        })
        .collect();
    let mut best: Option<SearchResult> = None;
    for r in attempts.into_iter().flatten() {
        if !r.membership.is_member {
            continue;
        }
        match &best {
            Some(b) if b.c <= r.c => {}
            _ => best = Some(r),
        }
    }
    best.ok_or(SearchError::NoFeasibleResult)
}

fn sample_start(problem: &SearchProblem, seed: u64) -> Option<PolySpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = problem.beta_bounds();
    let beta = if lo < hi {
        lo + (hi - lo) * rng.random::<f64>()
    } else {
        lo
    };
    let mut params = Vec::new();
    for p in problem.pattern.parts() {
        if p.paired {
            // uniform in the upper half disk
            let r = rng.random::<f64>().sqrt();
            let th = std::f64::consts::PI * rng.random::<f64>();
            params.push(r * th.cos());
            params.push(r * th.sin());
        } else {
            params.push(2.0 * rng.random::<f64>() - 1.0);
        }
    }
    problem.pattern.decode(beta, &params).ok()
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// All patterns of total multiplicity `n − 1` using at most `max_distinct`
/// distinct critical points, in a canonical deterministic order.
pub fn enumerate_patterns(n: u32, max_distinct: u32) -> Vec<MultiplicityPattern> {
    assert!((1..=6).contains(&max_distinct) || n <= 8, "practical cap");
    let target = n - 1;
    let mut out = Vec::new();
    let mut parts = Vec::new();
    // parts are chosen in non-increasing (m, paired) order to avoid
    // duplicate multisets
    fn rec(
        remaining: u32,
        slots: u32,
        max_m: u32,
        parts: &mut Vec<PatternPart>,
        out: &mut Vec<MultiplicityPattern>,
    ) {
        if remaining == 0 {
            out.push(MultiplicityPattern {
                parts: parts.clone(),
            });
            return;
        }
        if slots == 0 {
            return;
        }
        for m in (1..=remaining.min(max_m)).rev() {
            for paired in [true, false] {
                // canonical order: when equal m, paired sorts before unpaired
                if let Some(last) = parts.last() {
                    if m == last.m && paired && !last.paired {
                        continue;
                    }
                }
                let weight = if paired { 2 } else { 1 };
                if m * weight > remaining || weight > slots {
                    continue;
                }
                parts.push(PatternPart { m, paired });
                rec(remaining - m * weight, slots - weight, m, parts, out);
                parts.pop();
            }
        }
    }
    rec(target, max_distinct, target, &mut parts, &mut out);
    out
}

/// Run [`multistart`] over every pattern from [`enumerate_patterns`];
/// results sorted by `c`. Patterns yielding no feasible result are
/// dropped. Per-pattern seeds derive from the pattern identity, so a scan
/// with a larger `max_distinct` reproduces the shared patterns' results
/// exactly.
pub fn pattern_scan(
    n: u32,
    max_distinct: u32,
    k: usize,
    seed: u64,
    opts: &SearchOptions,
) -> Vec<SearchResult> {
    let patterns = enumerate_patterns(n, max_distinct);
    let mut results: Vec<SearchResult> = patterns
        .par_iter()
        .filter_map(|pattern| {
            let problem = SearchProblem::new(n, pattern.clone()).ok()?;
            let pseed = splitmix(seed ^ pattern.fnv_hash());
            multistart(&problem, k, pseed, opts).ok()
        })
        .collect();
    results.sort_by(|a, b| a.c.partial_cmp(&b.c).unwrap_or(std::cmp::Ordering::Equal));
    results
}
