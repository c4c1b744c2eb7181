//! The `sendov` command-line tool.
//!
//! Subcommands: `eval` (inspect one spec file), `verify-tables` (recompute
//! the embedded dataset), `bound` (bound-catalog CSV over a β grid),
//! `search` (run a search problem file), `families` (generate family
//! specs). Exit codes are stable: 0 success/pass, 1 check failure,
//! 2 usage/data error.

use crate::families::{self, FamilyDescriptor};
use crate::metrics::{self, catalog};
use crate::polyform::{spec_from_json, PolySpec, SpecDocument};
use crate::roots::{check_membership_with, Precision, RootOpts};
use crate::search::{multistart, pattern_scan, MultiplicityPattern, SearchOptions, SearchProblem};
use crate::tables::{verify_tables, MembershipOutcome, VerifyOptions};
use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Deserialize;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "sendov", version, about = "critical-point distance bounds for polynomials with roots in the unit disk")]
struct Cli {
    /// Emit machine-readable JSON instead of human text.
    #[arg(long, global = true)]
    json: bool,
    /// Working precision for root finding and membership.
    #[arg(long, global = true, value_enum, default_value_t = PrecisionArg::Auto)]
    precision: PrecisionArg,
    /// Seed for the search commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PrecisionArg {
    Auto,
    Double,
    Dd,
}

impl From<PrecisionArg> for Precision {
    fn from(p: PrecisionArg) -> Precision {
        match p {
            PrecisionArg::Auto => Precision::Auto,
            PrecisionArg::Double => Precision::Double,
            PrecisionArg::Dd => Precision::DoubleDouble,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate a spec file: degree, d, c, membership.
    Eval {
        spec_file: PathBuf,
        /// Disk-membership tolerance.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Recompute the embedded extremal tables and compare.
    VerifyTables {
        #[arg(long, default_value_t = 400)]
        max_n: u32,
        #[arg(long, default_value_t = 400)]
        membership_cap: u32,
        /// Relative tolerance on r.
        #[arg(long, default_value_t = 1e-9)]
        tol_r: f64,
        /// Relative tolerance on c.
        #[arg(long, default_value_t = 1e-6)]
        tol_c: f64,
        /// Also certify membership for the n ≥ 600 rows (slow).
        #[arg(long)]
        deep: bool,
    },
    /// Tabulate the bound catalog over a β grid as CSV.
    Bound {
        #[arg(long)]
        n: u32,
        /// Grid as lo:step:hi.
        #[arg(long, default_value = "0:0.01:1")]
        beta_grid: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a search problem file (multistart or pattern scan).
    Search {
        problem_file: PathBuf,
        /// Starts per multistart.
        #[arg(long, default_value_t = 50)]
        starts: usize,
        /// Objective evaluation budget per local search.
        #[arg(long, default_value_t = 4000)]
        budget: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a family spec file.
    Families {
        #[command(subcommand)]
        family: FamilyCmd,
    },
}

#[derive(Subcommand)]
enum FamilyCmd {
    /// (z^n − z)/n: the extremal family at β = 0.
    BrsStar {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// One distinct critical point of multiplicity n−1.
    Circle {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 0.0)]
        zeta_re: f64,
        #[arg(long, default_value_t = 0.0)]
        zeta_im: f64,
        /// Place ζ at β − r with r the extremal radius (overrides zeta).
        #[arg(long)]
        extremal: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// All roots on a line through β.
    Line {
        #[arg(long)]
        beta: f64,
        /// Comma-separated signed offsets along the line.
        #[arg(long, value_delimiter = ',')]
        offsets: Vec<f64>,
        #[arg(long, default_value_t = 0.0)]
        angle: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// (z^n − 1)/n with β = 1 (real representative of z^n − e^{it}).
    PhelpsRodriguez {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 0.0)]
        t: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Entry point for the binary.
pub fn run() -> ExitCode {
    run_from(std::env::args_os())
}

pub fn run_from<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            // clap handles --help/--version through this path as well
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let precision: Precision = cli.precision.into();
    match &cli.cmd {
        Cmd::Eval { spec_file, tol } => cmd_eval(spec_file, *tol, precision, cli.json),
        Cmd::VerifyTables {
            max_n,
            membership_cap,
            tol_r,
            tol_c,
            deep,
        } => cmd_verify_tables(*max_n, *membership_cap, *tol_r, *tol_c, *deep, precision, cli.json),
        Cmd::Bound { n, beta_grid, out } => cmd_bound(*n, beta_grid, out.as_deref()),
        Cmd::Search {
            problem_file,
            starts,
            budget,
            out,
        } => cmd_search(problem_file, *starts, *budget, cli.seed, out.as_deref()),
        Cmd::Families { family } => cmd_families(family),
    }
}

fn fail2(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn cmd_eval(spec_file: &PathBuf, tol: f64, precision: Precision, json: bool) -> ExitCode {
    let text = match fs::read_to_string(spec_file) {
        Ok(t) => t,
        Err(e) => return fail2(format!("{}: {e}", spec_file.display())),
    };
    let spec = match spec_from_json(&text) {
        Ok(s) => s,
        Err(e) => return fail2(e),
    };
    let opts = RootOpts {
        precision,
        ..RootOpts::default()
    };
    let d = metrics::dist_to_nearest_critical(&spec);
    let beta = spec.beta();
    let c = metrics::c_value_of_spec(&spec).ok().map(|cv| cv.c);
    let half_bound = (1.0 + beta) / 2.0;
    let membership = match check_membership_with(&spec, tol, &opts) {
        Ok(m) => m,
        Err(e) => return fail2(format!("membership check failed: {e}")),
    };
    if json {
        let report = serde_json::json!({
            "degree": spec.degree(),
            "beta": beta,
            "d": d,
            "c": c,
            "half_bound": half_bound,
            "d_exceeds_half_bound": d > half_bound,
            "membership": membership,
        });
        println!("{}", serde_json::to_string_pretty(&report).expect("valid json"));
    } else {
        println!("degree: {}", spec.degree());
        println!("beta:   {beta:.17}");
        println!("d:      {d:.17}");
        match c {
            Some(c) => println!("c:      {c:.17}"),
            None => println!("c:      undefined (beta at an endpoint)"),
        }
        println!(
            "d vs (1+beta)/2 = {:.17}: {}",
            half_bound,
            if d > half_bound { "exceeds it" } else { "within it" }
        );
        println!(
            "membership: {} (max modulus {:.17}, margin {:.3e}, method {:?}, disk count {:?})",
            if membership.is_member { "member" } else { "NOT a member" },
            membership.max_modulus,
            membership.margin,
            membership.method,
            membership.disk_count,
        );
    }
    if membership.is_member {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn cmd_verify_tables(
    max_n: u32,
    membership_cap: u32,
    tol_r: f64,
    tol_c: f64,
    deep: bool,
    precision: Precision,
    json: bool,
) -> ExitCode {
    let opts = VerifyOptions {
        max_n,
        membership_cap,
        deep,
        tol_r,
        tol_c,
        precision,
        ..VerifyOptions::default()
    };
    let report = match verify_tables(&opts) {
        Ok(r) => r,
        Err(e) => return fail2(e),
    };
    if json {
        println!("{}", serde_json::to_string_pretty(&report).expect("valid json"));
    } else {
        for r in &report.records {
            let memb = match &r.membership {
                MembershipOutcome::Checked(m) if m.is_member => {
                    format!("member (margin {:.3e})", m.margin)
                }
                MembershipOutcome::Checked(m) => format!("NOT member (max {})", m.max_modulus),
                MembershipOutcome::Skipped { reason } => format!("membership skipped: {reason}"),
                MembershipOutcome::Failed { error } => format!("membership FAILED: {error}"),
            };
            println!(
                "table {} n={:>5}: r {} c {} derived {}  {}{}",
                r.table_id,
                r.n,
                if r.r_match { "ok" } else { "MISMATCH" },
                if r.c_match { "ok" } else { "MISMATCH" },
                match r.derived_match {
                    Some(true) => "ok",
                    Some(false) => "MISMATCH",
                    None => "-",
                },
                memb,
                if r.warning_only { " [warnings only]" } else { "" },
            );
        }
        println!(
            "{} records: {} value failures, {} membership failures, {} warnings",
            report.total, report.value_failures, report.membership_failures, report.warnings
        );
    }
    if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn parse_grid(text: &str) -> Option<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return None;
    }
    let lo: f64 = parts[0].parse().ok()?;
    let step: f64 = parts[1].parse().ok()?;
    let hi: f64 = parts[2].parse().ok()?;
    if !(step > 0.0) || hi < lo || !lo.is_finite() || !hi.is_finite() {
        return None;
    }
    let count = ((hi - lo) / step).round() as usize;
    let mut grid: Vec<f64> = (0..=count).map(|k| lo + step * k as f64).collect();
    if let Some(last) = grid.last_mut() {
        if (*last - hi).abs() < step * 1e-9 {
            *last = hi;
        }
    }
    grid.retain(|b| *b <= hi + step * 1e-9);
    Some(grid)
}

fn cmd_bound(n: u32, beta_grid: &str, out: Option<&std::path::Path>) -> ExitCode {
    if n < 2 {
        return fail2("--n must be at least 2");
    }
    let grid = match parse_grid(beta_grid) {
        Some(g) if !g.is_empty() => g,
        _ => return fail2(format!("bad grid {beta_grid:?}, expected lo:step:hi")),
    };
    let entries: Vec<_> = catalog()
        .iter()
        .filter(|e| grid.iter().any(|b| e.value_at(n, *b).is_some()))
        .collect();
    let mut csv = String::new();
    csv.push_str("beta");
    for e in &entries {
        csv.push(',');
        csv.push_str(e.name);
    }
    csv.push_str("\r\n");
    for &b in &grid {
        csv.push_str(&format!("{b:.17}"));
        for e in &entries {
            csv.push(',');
            if let Some(v) = e.value_at(n, b) {
                csv.push_str(&format!("{v:.16e}"));
            }
        }
        csv.push_str("\r\n");
    }
    match out {
        Some(path) => {
            if let Err(e) = fs::write(path, csv) {
                return fail2(format!("{}: {e}", path.display()));
            }
        }
        None => print!("{csv}"),
    }
    ExitCode::SUCCESS
}

/// Search problem file: a [`SearchProblem`] plus a `mode` selector.
#[derive(Deserialize)]
struct ProblemFile {
    n: u32,
    #[serde(default)]
    pattern: Option<MultiplicityPattern>,
    #[serde(default)]
    beta_mode: crate::search::BetaMode,
    #[serde(default)]
    normalization: crate::search::Normalization,
    #[serde(default)]
    mode: ProblemMode,
}

#[derive(Deserialize, Default)]
#[serde(rename_all = "snake_case")]
enum ProblemMode {
    #[default]
    Multistart,
    PatternScan {
        max_distinct: u32,
    },
}

fn cmd_search(
    problem_file: &PathBuf,
    starts: usize,
    budget: usize,
    seed: u64,
    out: Option<&std::path::Path>,
) -> ExitCode {
    let text = match fs::read_to_string(problem_file) {
        Ok(t) => t,
        Err(e) => return fail2(format!("{}: {e}", problem_file.display())),
    };
    let pf: ProblemFile = match serde_json::from_str(&text) {
        Ok(p) => p,
        Err(e) => return fail2(format!("malformed problem file: {e}")),
    };
    let opts = SearchOptions {
        budget,
        ..SearchOptions::default()
    };
    let json = match pf.mode {
        ProblemMode::Multistart => {
            let pattern = match pf.pattern {
                Some(p) => p,
                None => return fail2("multistart mode needs a \"pattern\""),
            };
            let mut problem = match SearchProblem::new(pf.n, pattern) {
                Ok(p) => p,
                Err(e) => return fail2(e),
            };
            problem.beta_mode = pf.beta_mode;
            problem.normalization = pf.normalization;
            match multistart(&problem, starts, seed, &opts) {
                Ok(result) => serde_json::to_string_pretty(&result).expect("valid json"),
                Err(e) => {
                    eprintln!("search failed: {e}");
                    return ExitCode::from(1);
                }
            }
        }
        ProblemMode::PatternScan { max_distinct } => {
            let results = pattern_scan(pf.n, max_distinct, starts, seed, &opts);
            if results.is_empty() {
                eprintln!("search failed: no feasible result in any pattern");
                return ExitCode::from(1);
            }
            serde_json::to_string_pretty(&results).expect("valid json")
        }
    };
    match out {
        Some(path) => {
            if let Err(e) = fs::write(path, json) {
                return fail2(format!("{}: {e}", path.display()));
            }
        }
        None => println!("{json}"),
    }
    ExitCode::SUCCESS
}

fn cmd_families(family: &FamilyCmd) -> ExitCode {
    let (spec, descriptor, out): (PolySpec, FamilyDescriptor, Option<&PathBuf>) = match family {
        FamilyCmd::BrsStar { n, out } => {
            if *n < 2 {
                return fail2("--n must be at least 2");
            }
            (families::brs_star(*n), FamilyDescriptor::BrsStar { n: *n }, out.as_ref())
        }
        FamilyCmd::Circle {
            n,
            beta,
            zeta_re,
            zeta_im,
            extremal,
            out,
        } => {
            let zeta = if *extremal {
                if !(0.0..=1.0).contains(beta) {
                    return fail2("--beta must be in [0, 1]");
                }
                Complex64::new(beta - families::extremal_radius(*n, *beta), 0.0)
            } else {
                Complex64::new(*zeta_re, *zeta_im)
            };
            match families::circle_one_crit(*n, *beta, zeta) {
                Ok(s) => (
                    s,
                    FamilyDescriptor::CircleOneCrit {
                        n: *n,
                        beta: *beta,
                        zeta_re: zeta.re,
                        zeta_im: zeta.im,
                    },
                    out.as_ref(),
                ),
                Err(e) => return fail2(e),
            }
        }
        FamilyCmd::Line {
            beta,
            offsets,
            angle,
            out,
        } => match families::line_rooted(*beta, offsets, *angle) {
            Ok(s) => (
                s,
                FamilyDescriptor::LineRooted {
                    beta: *beta,
                    offsets: offsets.clone(),
                    angle: *angle,
                },
                out.as_ref(),
            ),
            Err(e) => return fail2(e),
        },
        FamilyCmd::PhelpsRodriguez { n, t, out } => {
            if *n < 2 {
                return fail2("--n must be at least 2");
            }
            (
                families::phelps_rodriguez(*n, *t),
                FamilyDescriptor::PhelpsRodriguez { n: *n, t: *t },
                out.as_ref(),
            )
        }
    };
    let mut doc = SpecDocument::from_spec(&spec);
    doc.family = Some(serde_json::to_value(&descriptor).expect("descriptor serializes"));
    let json = serde_json::to_string_pretty(&doc).expect("valid json");
    match out {
        Some(path) => {
            if let Err(e) = fs::write(path, json) {
                return fail2(format!("{}: {e}", path.display()));
            }
        }
        None => println!("{json}"),
    }
    ExitCode::SUCCESS
}
