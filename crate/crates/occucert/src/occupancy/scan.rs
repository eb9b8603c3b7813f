//! Randomized search for violations of the degree-sequence expected-size
//! bound outside the proven fugacity range. Each sampled instance compares
//! the exact expectation against the bound; negative gaps are recorded
//! exactly and reproducibly under the configured seed.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::families;
use crate::graph::Graph;
use crate::hardcore::{self, Fugacity, HardcoreError};
use crate::rat::{rat, Rat};
use num_traits::Signed;

use super::{thm1_bound, OccupancyError};

#[derive(Debug, Clone, PartialEq)]
pub enum GraphSource {
    Random { edge_probability: f64 },
    /// Disjoint unions of cliques: the tightness family.
    Cliques,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LambdaLaw {
    /// One rational shared by all vertices, numerator drawn from
    /// 1..=max_numerator and denominator from 1..=max_denominator.
    Uniform {
        max_numerator: u32,
        max_denominator: u32,
    },
    /// Independent per-vertex rationals from the same box.
    PerVertex {
        max_numerator: u32,
        max_denominator: u32,
    },
    /// Per-vertex lambda_u = p/(q*Delta) with 1 <= p < q <= 20, always
    /// inside the proven range; isolated-only graphs use lambda = 1/2.
    BelowInverseDelta,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanConfig {
    pub sizes: Vec<usize>,
    pub per_size: usize,
    pub source: GraphSource,
    pub lambda: LambdaLaw,
    pub seed: u64,
    /// Independent-set enumeration cap per connected component; instances
    /// over the cap are skipped and counted.
    pub cap: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanViolation {
    pub n: usize,
    pub edges: Vec<(u32, u32)>,
    pub lambda: Vec<Rat>,
    pub expected_size: Rat,
    pub bound: Rat,
    /// expected_size - bound; negative in a violation.
    pub gap: Rat,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanReport {
    pub instances: usize,
    pub skipped_cap: usize,
    pub violations: Vec<ScanViolation>,
    /// Smallest gap over all completed instances.
    pub worst_gap: Option<Rat>,
    pub seed: u64,
}

/// Exact E|X| - thm1_bound for one instance.
pub fn gap_for_instance(
    g: &Graph,
    lambda: &Fugacity,
    cap: usize,
) -> Result<Rat, OccupancyError> {
    let expected = hardcore::expected_size(g, lambda, cap)?;
    Ok(expected - thm1_bound(g, lambda)?)
}

fn sample_lambda(
    law: &LambdaLaw,
    g: &Graph,
    rng: &mut ChaCha8Rng,
) -> Result<Fugacity, OccupancyError> {
    let draw_box = |max_n: u32, max_d: u32, rng: &mut ChaCha8Rng| {
        rat(
            rng.gen_range(1..=max_n as i64),
            rng.gen_range(1..=max_d as i64),
        )
    };
    let f = match law {
        LambdaLaw::Uniform {
            max_numerator,
            max_denominator,
        } => Fugacity::uniform(g.n(), draw_box(*max_numerator, *max_denominator, rng))?,
        LambdaLaw::PerVertex {
            max_numerator,
            max_denominator,
        } => {
            let vals = (0..g.n())
                .map(|_| draw_box(*max_numerator, *max_denominator, rng))
                .collect();
            Fugacity::per_vertex(vals)?
        }
        LambdaLaw::BelowInverseDelta => {
            let delta = g.max_degree() as i64;
            if delta == 0 {
                Fugacity::uniform(g.n(), rat(1, 2))?
            } else {
                let vals = (0..g.n())
                    .map(|_| {
                        let q = rng.gen_range(2i64..=20);
                        let p = rng.gen_range(1i64..q);
                        rat(p, q * delta)
                    })
                    .collect();
                Fugacity::per_vertex(vals)?
            }
        }
    };
    Ok(f)
}

fn validate(config: &ScanConfig) -> Result<(), OccupancyError> {
    let bad = |msg: &str| Err(OccupancyError::BadScanConfig(msg.to_string()));
    let box_bad = match &config.lambda {
        LambdaLaw::Uniform {
            max_numerator,
            max_denominator,
        }
        | LambdaLaw::PerVertex {
            max_numerator,
            max_denominator,
        } => *max_numerator == 0 || *max_denominator == 0,
        LambdaLaw::BelowInverseDelta => false,
    };
    if box_bad {
        return bad("lambda box bounds must be at least 1");
    }
    if config.sizes.iter().any(|&n| n == 0) {
        return bad("graph sizes must be at least 1");
    }
    Ok(())
}

pub fn conjecture_scan(config: &ScanConfig) -> Result<ScanReport, OccupancyError> {
    validate(config)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut report = ScanReport {
        instances: 0,
        skipped_cap: 0,
        violations: Vec::new(),
        worst_gap: None,
        seed: config.seed,
    };
    for &n in &config.sizes {
        for _ in 0..config.per_size {
            let g = match config.source {
                GraphSource::Random { edge_probability } => {
                    families::erdos_renyi(n, edge_probability, &mut rng)?
                }
                GraphSource::Cliques => families::random_clique_union(n, &mut rng)?,
            };
            let lambda = sample_lambda(&config.lambda, &g, &mut rng)?;
            let expected = match hardcore::expected_size(&g, &lambda, config.cap) {
                Ok(e) => e,
                Err(HardcoreError::CapExceeded { .. }) => {
                    report.skipped_cap += 1;
                    continue;
                }
                Err(e) => return Err(e.into()),
            };
            let bound = thm1_bound(&g, &lambda)?;
            let gap = &expected - &bound;
            report.instances += 1;
            let worse = match &report.worst_gap {
                None => true,
                Some(w) => gap < *w,
            };
            if worse {
                report.worst_gap = Some(gap.clone());
            }
            if gap.is_negative() {
                report.violations.push(ScanViolation {
                    n: g.n(),
                    edges: g.edges().to_vec(),
                    lambda: lambda.iter().cloned().collect(),
                    expected_size: expected,
                    bound,
                    gap,
                });
            }
        }
    }
    Ok(report)
}
