//! Command-line front end: single-instance analyses, verification
//! campaigns, and the built-in reproductions, all emitting deterministic
//! JSON reports.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input error,
//! 3 enumeration cap exceeded.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_traits::Signed;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use occucert::campaign::{
    self, CampaignError, Thm1InstanceConfig,
};
use occucert::coloring::{run_demand_process, ColoringError, DemandVector};
use occucert::families::{self, FamilyError};
use occucert::graph::{Graph, GraphError};
use occucert::hardcore::{Fugacity, HardcoreError};
use occucert::occupancy::{
    conjecture_scan, general_params, GraphSource, LambdaLaw, OccupancyError, ScanConfig,
};
use occucert::rat::{fmt_rat, parse_rat, RatParseError};
use occucert::report::{
    analyze_report, certify_report, certify_report_mad, constants_report, counterexample_report,
    demand_report, fmt_real, scan_json, to_json_string, CampaignSummary, GraphJson,
};
use occucert::special::SpecialError;
use occucert::tol::DEFAULT_ENUM_CAP;

#[derive(Parser)]
#[command(
    name = "occucert",
    version,
    about = "Exact occupancy-fraction certificates for the hard-core model on small graphs"
)]
struct Cli {
    #[command(subcommand)]
    mode: Mode,
}

#[derive(Args)]
struct SourceArgs {
    /// JSON graph file: {"n": 3, "edges": [[0,1],[0,2]]}
    #[arg(long, value_name = "FILE", conflicts_with = "family")]
    graph: Option<PathBuf>,
    /// Generator spec: complete:4, cycle:5, path:3, star:2, biclique:2,3,
    /// er:8,0.35, or a '+'-joined disjoint union of those
    #[arg(long, value_name = "SPEC")]
    family: Option<String>,
}

#[derive(Args)]
struct CommonArgs {
    /// Seed for random families and campaign sampling
    #[arg(long, default_value_t = 17)]
    seed: u64,
    /// Per-component enumeration cap (default 24; env OCCUCERT_CAP)
    #[arg(long)]
    cap: Option<usize>,
    /// Write the JSON report to this file instead of stdout
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Mode {
    /// Degree and mad profiles, exact hard-core summary, and the
    /// degree-parameter expected-size bound for one instance
    Analyze {
        #[command(flatten)]
        source: SourceArgs,
        /// Uniform "p/q" or per-vertex "p1/q1,p2/q2,..."
        #[arg(long, value_name = "SPEC")]
        lambda: String,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Dual certificate and series diagnostics for one instance
    Certify {
        #[command(flatten)]
        source: SourceArgs,
        /// Uniform "p/q" or per-vertex "p1/q1,p2/q2,..."
        #[arg(long, value_name = "SPEC")]
        lambda: String,
        /// Neighborhood mad bound; selects the bounded-mad parameter family
        /// (lambda must then be uniform)
        #[arg(long)]
        b: Option<f64>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Expected-size bound sweep: every connected graph up to 6 vertices
    /// with five fugacity patterns each, plus 500 random instances at 7-8
    VerifyThm1 {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Bounded-neighborhood-mad bound sweep: triangle-free connected graphs
    /// up to 9 vertices plus random matching-neighborhood graphs
    VerifyThm2 {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run the demand process on one instance with tight demands and verify
    /// the resulting fractional distribution
    FracColor {
        #[command(flatten)]
        source: SourceArgs,
        /// Uniform "p/q" or per-vertex "p1/q1,p2/q2,..."
        #[arg(long, value_name = "SPEC")]
        lambda: String,
        /// Re-verify local occupancy on every induced subgraph the process
        /// visits
        #[arg(long)]
        strict: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Reproduce the K_{1,2} LP relaxation gap at lambda = 7/5
    Counterexample {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Solve the two fugacity-threshold constants and report residuals
    Constants {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Random scan for violations of the expected-size bound
    Scan {
        /// Instance generator: "cliques" (tight family) or "random:P" with
        /// edge probability P
        #[arg(long, value_name = "SOURCE", default_value = "random:0.5")]
        family: String,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Rat(#[from] RatParseError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Hardcore(#[from] HardcoreError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Occupancy(#[from] OccupancyError),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error(transparent)]
    Campaign(#[from] CampaignError),
    #[error(transparent)]
    Special(#[from] SpecialError),
}

fn graph_code(e: &GraphError) -> u8 {
    match e {
        GraphError::SubsetCapExceeded { .. } => 3,
        _ => 2,
    }
}

fn hardcore_code(e: &HardcoreError) -> u8 {
    match e {
        HardcoreError::CapExceeded { .. } => 3,
        HardcoreError::Graph(g) => graph_code(g),
        _ => 2,
    }
}

fn occupancy_code(e: &OccupancyError) -> u8 {
    match e {
        OccupancyError::LpSizeCap { .. } => 3,
        OccupancyError::Hardcore(h) => hardcore_code(h),
        OccupancyError::Graph(g) => graph_code(g),
        _ => 2,
    }
}

fn coloring_code(e: &ColoringError) -> u8 {
    match e {
        ColoringError::Hardcore(h) => hardcore_code(h),
        ColoringError::Occupancy(o) => occupancy_code(o),
        ColoringError::Graph(g) => graph_code(g),
        _ => 2,
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Graph(e) => graph_code(e),
            CliError::Hardcore(e) => hardcore_code(e),
            CliError::Occupancy(e) => occupancy_code(e),
            CliError::Coloring(e) => coloring_code(e),
            CliError::Campaign(e) => match e {
                CampaignError::Occupancy(o) => occupancy_code(o),
                CampaignError::Coloring(c) => coloring_code(c),
                CampaignError::Hardcore(h) => hardcore_code(h),
                CampaignError::Graph(g) => graph_code(g),
                _ => 2,
            },
            _ => 2,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.mode) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn effective_cap(flag: Option<usize>) -> Result<usize, CliError> {
    if let Some(c) = flag {
        return Ok(c);
    }
    match std::env::var("OCCUCERT_CAP") {
        Ok(s) => s
            .trim()
            .parse::<usize>()
            .map_err(|_| CliError::Input(format!("OCCUCERT_CAP is not a vertex count: {s:?}"))),
        Err(_) => Ok(DEFAULT_ENUM_CAP),
    }
}

fn load_graph(source: &SourceArgs, seed: u64) -> Result<Graph, CliError> {
    match (&source.graph, &source.family) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)?;
            let gj: GraphJson = serde_json::from_str(&text)?;
            Ok(gj.to_graph()?)
        }
        (None, Some(spec)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok(families::parse_family_spec(spec, &mut rng)?)
        }
        (None, None) => Err(CliError::Input(
            "provide a graph with --graph FILE or --family SPEC".to_string(),
        )),
        (Some(_), Some(_)) => unreachable!("clap rejects the combination"),
    }
}

fn parse_lambda(spec: &str, g: &Graph) -> Result<Fugacity, CliError> {
    let values = spec
        .split(',')
        .map(|s| parse_rat(s.trim()))
        .collect::<Result<Vec<_>, _>>()?;
    let raw = Fugacity::per_vertex(values)?;
    Ok(raw.resolve(g)?)
}

fn emit(out: &Option<PathBuf>, json: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, json)?,
        None => print!("{json}"),
    }
    Ok(())
}

fn run(mode: Mode) -> Result<u8, CliError> {
    match mode {
        Mode::Analyze {
            source,
            lambda,
            common,
        } => {
            let cap = effective_cap(common.cap)?;
            let g = load_graph(&source, common.seed)?;
            let lam = parse_lambda(&lambda, &g)?;
            let r = analyze_report(&g, &lam, cap)?;
            emit(&common.out, &to_json_string(&r))?;
            Ok(0)
        }
        Mode::Certify {
            source,
            lambda,
            b,
            common,
        } => {
            let cap = effective_cap(common.cap)?;
            let g = load_graph(&source, common.seed)?;
            let lam = parse_lambda(&lambda, &g)?;
            let r = match b {
                None => certify_report(&g, &lam, cap, None)?,
                Some(b) => {
                    let uniform = lam.as_uniform().ok_or_else(|| {
                        CliError::Input(
                            "the bounded-mad parameters need a uniform lambda".to_string(),
                        )
                    })?;
                    certify_report_mad(&g, occucert::rat::rat_to_f64(uniform), b, cap, None)?
                }
            };
            let ok = r.certificate.is_some() && !r.gap.starts_with('-');
            emit(&common.out, &to_json_string(&r))?;
            Ok(if ok { 0 } else { 1 })
        }
        Mode::VerifyThm1 { common } => {
            let cap = effective_cap(common.cap)?;
            let cfg = Thm1InstanceConfig {
                seed: common.seed,
                ..Thm1InstanceConfig::default()
            };
            let instances = campaign::thm1_instances(&cfg)?;
            let r = campaign::verify_thm1(&instances, cap)?;
            for note in &r.outcome.failure_notes {
                eprintln!("failure: {note}");
            }
            let summary = CampaignSummary {
                mode: "verify-thm1".to_string(),
                instances: r.outcome.instances,
                passes: r.outcome.passes,
                failures: r.outcome.failures,
                skipped: r.outcome.skipped,
                worst_gap: r.worst_gap.as_ref().map(fmt_rat),
                seed: Some(common.seed),
            };
            emit(&common.out, &to_json_string(&summary))?;
            Ok(if r.outcome.ok() { 0 } else { 1 })
        }
        Mode::VerifyThm2 { common } => {
            let cap = effective_cap(common.cap)?;
            let instances = campaign::thm2_instances(9, 100, common.seed)?;
            let r = campaign::verify_thm2(&instances, cap)?;
            for note in &r.outcome.failure_notes {
                eprintln!("failure: {note}");
            }
            let summary = CampaignSummary {
                mode: "verify-thm2".to_string(),
                instances: r.outcome.instances,
                passes: r.outcome.passes,
                failures: r.outcome.failures,
                skipped: r.outcome.skipped,
                worst_gap: r.worst_gap.map(fmt_real),
                seed: Some(common.seed),
            };
            emit(&common.out, &to_json_string(&summary))?;
            Ok(if r.outcome.ok() { 0 } else { 1 })
        }
        Mode::FracColor {
            source,
            lambda,
            strict,
            common,
        } => {
            let cap = effective_cap(common.cap)?;
            let g = load_graph(&source, common.seed)?;
            let lam = parse_lambda(&lambda, &g)?;
            let p = general_params(&lam)?;
            let q = campaign::primal_vector(&g, &p.beta, &p.gamma)?.ok_or_else(|| {
                CliError::Input(
                    "the tight demand system is singular at this lambda; lower it".to_string(),
                )
            })?;
            if q.iter().any(|x| x.is_negative()) {
                return Err(CliError::Input(
                    "tight demands go negative at this lambda; lower it below 1/max-degree"
                        .to_string(),
                ));
            }
            let qv = DemandVector::new(q)?;
            let fc = run_demand_process(&g, &p, &qv, cap, strict)?;
            let r = demand_report(&g, &p, &fc, &qv)?;
            let ok = r.verdict.certifying;
            emit(&common.out, &to_json_string(&r))?;
            Ok(if ok { 0 } else { 1 })
        }
        Mode::Counterexample { common } => {
            let cap = effective_cap(common.cap)?;
            let r = counterexample_report(cap)?;
            let ok = r.candidate_feasible
                && r.optimum == "1"
                && r.bound == "497/494"
                && r.expected_size == "203/179";
            emit(&common.out, &to_json_string(&r))?;
            Ok(if ok { 0 } else { 1 })
        }
        Mode::Constants { common } => {
            let r = constants_report()?;
            let close = |got: &str, want: f64| {
                got.parse::<f64>()
                    .map(|g| (g - want).abs() <= 1e-6)
                    .unwrap_or(false)
            };
            let small = |res: &str| res.parse::<f64>().map(|r| r < 1e-12).unwrap_or(false);
            let ok = close(&r.c0, 0.109_597_2)
                && close(&r.eta, 0.089_688_38)
                && small(&r.c0_residual)
                && small(&r.eta_residual);
            emit(&common.out, &to_json_string(&r))?;
            Ok(if ok { 0 } else { 1 })
        }
        Mode::Scan { family, common } => {
            let cap = effective_cap(common.cap)?;
            let source = parse_scan_source(&family)?;
            let config = ScanConfig {
                sizes: vec![4, 5, 6, 7, 8, 9],
                per_size: 25,
                source,
                lambda: LambdaLaw::BelowInverseDelta,
                seed: common.seed,
                cap,
            };
            let report = conjecture_scan(&config)?;
            let ok = report.violations.is_empty();
            emit(&common.out, &to_json_string(&scan_json(&report)))?;
            Ok(if ok { 0 } else { 1 })
        }
    }
}

fn parse_scan_source(s: &str) -> Result<GraphSource, CliError> {
    if s == "cliques" {
        return Ok(GraphSource::Cliques);
    }
    if let Some(rest) = s.strip_prefix("random") {
        let p = match rest.strip_prefix(':') {
            Some(v) => v.parse::<f64>().map_err(|_| {
                CliError::Input(format!("edge probability is not a number: {v:?}"))
            })?,
            None if rest.is_empty() => 0.5,
            _ => {
                return Err(CliError::Input(format!(
                    "unknown scan source {s:?}; use \"cliques\" or \"random:P\""
                )))
            }
        };
        return Ok(GraphSource::Random {
            edge_probability: p,
        });
    }
    Err(CliError::Input(format!(
        "unknown scan source {s:?}; use \"cliques\" or \"random:P\""
    )))
}
