//! Verification campaigns over generated instance families: exhaustive
//! small-graph sweeps plus seeded random samples, with exact pass/fail
//! accounting. Shared by the CLI verify modes and the integration suite.

use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::coloring::{run_demand_process, verify_membership, ColoringError, DemandVector};
use crate::families::{self, FamilyError};
use crate::graph::{Graph, GraphError};
use crate::hardcore::{self, Fugacity, HardcoreError};
use crate::linalg::{solve_exact, LinalgError, RatMatrix};
use crate::occupancy::{
    dual_certificate, general_params, h_tau_profiles, logz_bound_thm1, logz_bound_trianglefree,
    lp_optimum_bruteforce, series_terms, thm1_bound, thm2_bound, OccupancyError,
};
use crate::rat::{fmt_rat, rat, rat_from_f64, rat_int, rat_to_f64, Rat};
use crate::special::{C0_PUBLISHED, ETA_PUBLISHED};

#[derive(Debug, Error)]
pub enum CampaignError {
    #[error(transparent)]
    Occupancy(#[from] OccupancyError),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error(transparent)]
    Hardcore(#[from] HardcoreError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Pass/fail tally; instances = passes + failures + skipped.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub instances: usize,
    pub passes: usize,
    pub failures: usize,
    pub skipped: usize,
    /// First few failures, one line each, keyed by instance.
    pub failure_notes: Vec<String>,
}

impl Outcome {
    const MAX_NOTES: usize = 12;

    fn record(&mut self, key: &str, ok: bool, note: impl FnOnce() -> String) {
        self.instances += 1;
        if ok {
            self.passes += 1;
        } else {
            self.failures += 1;
            if self.failure_notes.len() < Self::MAX_NOTES {
                self.failure_notes.push(format!("{key}: {}", note()));
            }
        }
    }

    fn skip(&mut self) {
        self.instances += 1;
        self.skipped += 1;
    }

    pub fn ok(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone)]
pub struct SweepInstance {
    pub key: String,
    pub graph: Graph,
    pub lambda: Fugacity,
}

/// Uniform lambda = num/(den*Delta); isolated-only graphs (Delta = 0) get
/// num/den directly, where any positive value is admissible.
fn uniform_fraction(g: &Graph, num: i64, den: i64) -> Result<Fugacity, HardcoreError> {
    let delta = g.max_degree() as i64;
    let lam = if delta == 0 {
        rat(num, den)
    } else {
        rat(num, den * delta)
    };
    Fugacity::uniform(g.n(), lam)
}

/// Per-vertex lambda_u = p/(q*Delta) with 1 <= p < q <= 20, so every entry
/// is strictly below 1/Delta.
fn random_below_inverse_delta<R: Rng>(g: &Graph, rng: &mut R) -> Result<Fugacity, HardcoreError> {
    let delta = g.max_degree() as i64;
    let mut vals = Vec::with_capacity(g.n());
    for _ in 0..g.n() {
        let q = rng.gen_range(2..=20i64);
        let p = rng.gen_range(1..q);
        vals.push(if delta == 0 { rat(p, q) } else { rat(p, q * delta) });
    }
    Fugacity::per_vertex(vals)
}

/// The standard pattern list for a graph: 1/(2 Delta), 9/(10 Delta), then
/// `random_patterns` random per-vertex vectors below 1/Delta.
pub fn fugacity_patterns<R: Rng>(
    g: &Graph,
    random_patterns: usize,
    rng: &mut R,
) -> Result<Vec<Fugacity>, HardcoreError> {
    let mut out = vec![uniform_fraction(g, 1, 2)?, uniform_fraction(g, 9, 10)?];
    for _ in 0..random_patterns {
        out.push(random_below_inverse_delta(g, rng)?);
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct Thm1InstanceConfig {
    /// Every connected graph with at most this many vertices.
    pub exhaustive_max: usize,
    /// Sizes cycled through for the random sample.
    pub random_sizes: Vec<usize>,
    pub random_instances: usize,
    /// Random per-vertex patterns appended to the two uniform ones.
    pub random_patterns: usize,
    pub seed: u64,
}

impl Default for Thm1InstanceConfig {
    fn default() -> Self {
        Thm1InstanceConfig {
            exhaustive_max: 6,
            random_sizes: vec![7, 8],
            random_instances: 500,
            random_patterns: 3,
            seed: 17,
        }
    }
}

/// Exhaustive connected graphs with all patterns each, then the random
/// sample with one pattern per instance, cycling through the pattern kinds.
pub fn thm1_instances(cfg: &Thm1InstanceConfig) -> Result<Vec<SweepInstance>, CampaignError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::new();
    for n in 1..=cfg.exhaustive_max {
        for (gi, g) in families::connected_graphs(n)?.into_iter().enumerate() {
            let pats = fugacity_patterns(&g, cfg.random_patterns, &mut rng)?;
            for (pi, lambda) in pats.into_iter().enumerate() {
                out.push(SweepInstance {
                    key: format!("n{n}-g{gi}-p{pi}"),
                    graph: g.clone(),
                    lambda,
                });
            }
        }
    }
    if !cfg.random_sizes.is_empty() {
        for i in 0..cfg.random_instances {
            let n = cfg.random_sizes[i % cfg.random_sizes.len()];
            let p = rng.gen_range(0.2..0.8);
            let g = families::random_connected_graph(n, p, &mut rng)?;
            let pats = fugacity_patterns(&g, cfg.random_patterns, &mut rng)?;
            let pick = i % pats.len();
            let lambda = pats.into_iter().nth(pick).expect("pick < pats.len()");
            out.push(SweepInstance {
                key: format!("r{i}"),
                graph: g,
                lambda,
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct Thm1Report {
    pub outcome: Outcome,
    /// Minimum of E|X| - bound across instances; nonnegative iff all pass.
    pub worst_gap: Option<Rat>,
}

/// Exact check E|X| >= degree-parameter bound on every instance.
pub fn verify_thm1(instances: &[SweepInstance], cap: usize) -> Result<Thm1Report, CampaignError> {
    let mut outcome = Outcome::default();
    let mut worst_gap: Option<Rat> = None;
    for inst in instances {
        let expected = match hardcore::expected_size(&inst.graph, &inst.lambda, cap) {
            Ok(e) => e,
            Err(HardcoreError::CapExceeded { .. }) => {
                outcome.skip();
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let bound = thm1_bound(&inst.graph, &inst.lambda)?;
        let gap = &expected - &bound;
        let ok = !gap.is_negative();
        outcome.record(&inst.key, ok, || {
            format!(
                "expected size {} fell below the bound {}",
                fmt_rat(&expected),
                fmt_rat(&bound)
            )
        });
        if worst_gap.as_ref().is_none_or(|w| &gap < w) {
            worst_gap = Some(gap);
        }
    }
    Ok(Thm1Report { outcome, worst_gap })
}

/// Clique disjoint unions with component-constant lambda below 1/Delta;
/// the bound is tight here, so every gap must be exactly zero.
pub fn clique_tightness(seed: u64, cap: usize) -> Result<Thm1Report, CampaignError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut outcome = Outcome::default();
    let mut worst_gap: Option<Rat> = None;
    let mut sizes: Vec<Vec<usize>> = Vec::new();
    for a in 2..=5usize {
        sizes.push(vec![a]);
        for b in a..=5 {
            sizes.push(vec![a, b]);
            for c in b..=5 {
                sizes.push(vec![a, b, c]);
            }
        }
    }
    for (i, parts) in sizes.iter().enumerate() {
        let graphs = parts
            .iter()
            .map(|&k| families::complete(k))
            .collect::<Result<Vec<_>, _>>()?;
        let g = families::disjoint_union(&graphs)?;
        // Component-constant lambda: every vertex of part j gets p_j/(q_j*Delta).
        let delta = g.max_degree() as i64;
        let mut vals = Vec::with_capacity(g.n());
        for &k in parts {
            let q = rng.gen_range(2..=20i64);
            let p = rng.gen_range(1..q);
            let lam = rat(p, q * delta);
            vals.extend(std::iter::repeat_n(lam, k));
        }
        let lambda = Fugacity::per_vertex(vals)?;
        let expected = hardcore::expected_size(&g, &lambda, cap)?;
        let bound = thm1_bound(&g, &lambda)?;
        let gap = &expected - &bound;
        let ok = gap == Rat::from_integer(0.into());
        outcome.record(&format!("cliques-{i}"), ok, || {
            format!("gap {} is not exactly zero", fmt_rat(&gap))
        });
        if worst_gap.as_ref().is_none_or(|w| &gap < w) {
            worst_gap = Some(gap);
        }
    }
    Ok(Thm1Report { outcome, worst_gap })
}

/// Independent re-verification of each dual certificate: exact linear
/// system residual, exact nonnegativity, exact objective-vs-baseline
/// comparison, spectral radii strictly inside the unit disk, and exact weak
/// duality against the brute-force LP optimum.
pub fn verify_dual_suite(instances: &[SweepInstance], lp_cap: usize) -> Result<Outcome, CampaignError> {
    let mut outcome = Outcome::default();
    let one = Rat::one();
    let rho_limit = 1.0 - 1e-9;
    for inst in instances {
        let p = general_params(&inst.lambda)?;
        let cert = match dual_certificate(&inst.graph, &p) {
            Ok(c) => c,
            Err(OccupancyError::ConditionsFailed(c)) => {
                outcome.record(&inst.key, false, || format!("conditions failed: {c}"));
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let mut problem: Option<String> = None;
        for u in 0..inst.graph.n() {
            let mut row = &p.beta[u] * &cert.y_prime[u];
            for v in inst.graph.neighbors(u) {
                row += &p.gamma[v] * &cert.y_prime[v];
            }
            if row != one {
                problem = Some(format!("dual system row {u} equals {}", fmt_rat(&row)));
                break;
            }
        }
        if problem.is_none() {
            if let Some(v) = cert.y_prime.iter().position(|y| y.is_negative()) {
                problem = Some(format!("certificate entry {v} is negative"));
            }
        }
        if problem.is_none() && cert.objective < cert.baseline {
            problem = Some(format!(
                "objective {} below baseline {}",
                fmt_rat(&cert.objective),
                fmt_rat(&cert.baseline)
            ));
        }
        if problem.is_none() && !(cert.rho_bagamma <= rho_limit && cert.rho_lgh <= rho_limit) {
            problem = Some(format!(
                "spectral radius too close to 1 ({} / {})",
                cert.rho_bagamma, cert.rho_lgh
            ));
        }
        if problem.is_none() && inst.graph.n() <= lp_cap {
            let sol = lp_optimum_bruteforce(&inst.graph, &p)?;
            if sol.optimum < cert.objective {
                problem = Some(format!(
                    "LP optimum {} below certificate objective {}",
                    fmt_rat(&sol.optimum),
                    fmt_rat(&cert.objective)
                ));
            }
        }
        let ok = problem.is_none();
        outcome.record(&inst.key, ok, || problem.unwrap_or_default());
    }
    Ok(outcome)
}

/// Series terms S_1..S_depth must clear a -1e-10 floor on every connected
/// graph up to max_n at lambda = 9/(10 Delta).
pub fn verify_series_positivity(max_n: usize, depth: usize) -> Result<Outcome, CampaignError> {
    let mut outcome = Outcome::default();
    let floor = -rat(1, 10_000_000_000);
    for n in 1..=max_n {
        for (gi, g) in families::connected_graphs(n)?.iter().enumerate() {
            let lambda = uniform_fraction(g, 9, 10)?;
            let p = general_params(&lambda)?;
            let diag = series_terms(g, &p, Some(depth))?;
            let bad = diag.s_terms_exact.iter().position(|s| s < &floor);
            outcome.record(&format!("n{n}-g{gi}"), bad.is_none(), || {
                let k = bad.unwrap();
                format!(
                    "S_{} = {} is below the floor",
                    k + 1,
                    fmt_rat(&diag.s_terms_exact[k])
                )
            });
        }
    }
    Ok(outcome)
}

#[derive(Debug, Clone)]
pub struct Thm2Instance {
    pub key: String,
    pub graph: Graph,
    pub lambda: f64,
    pub b: f64,
}

/// Triangle-free connected graphs up to max_n at b = 0 with two lambda
/// fractions of the published threshold, plus random neighborhood-matching
/// graphs at b = 1.
pub fn thm2_instances(
    max_n: usize,
    random_b1: usize,
    seed: u64,
) -> Result<Vec<Thm2Instance>, CampaignError> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        for (gi, g) in families::connected_triangle_free_graphs(n)?
            .into_iter()
            .enumerate()
        {
            let delta = g.max_degree();
            for (fi, frac) in [0.5f64, 0.9].into_iter().enumerate() {
                let lambda = if delta == 0 {
                    0.5
                } else {
                    frac * C0_PUBLISHED / delta as f64
                };
                out.push(Thm2Instance {
                    key: format!("tf-n{n}-g{gi}-f{fi}"),
                    graph: g.clone(),
                    lambda,
                    b: 0.0,
                });
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..random_b1 {
        let n = rng.gen_range(4..=12usize);
        let target = rng.gen_range(n..=2 * n);
        let g = families::random_neighborhood_matching_graph(n, target, &mut rng)?;
        let delta = g.max_degree();
        let lambda = 0.9 * ETA_PUBLISHED / delta as f64;
        out.push(Thm2Instance {
            key: format!("nm-{i}"),
            graph: g,
            lambda,
            b: 1.0,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct Thm2Report {
    pub outcome: Outcome,
    pub worst_gap: Option<f64>,
}

/// E|X| (exact, at the dyadic value of lambda) must stay within 1e-9 of or
/// above the bounded-neighborhood-mad bound.
pub fn verify_thm2(instances: &[Thm2Instance], cap: usize) -> Result<Thm2Report, CampaignError> {
    let mut outcome = Outcome::default();
    let mut worst_gap: Option<f64> = None;
    for inst in instances {
        let t2 = thm2_bound(&inst.graph, inst.lambda, inst.b)?;
        let lam_rat =
            rat_from_f64(inst.lambda).ok_or(OccupancyError::LambdaOutOfRange {
                lambda: inst.lambda,
                limit: f64::INFINITY,
            })?;
        let lambda = Fugacity::uniform(inst.graph.n(), lam_rat)?;
        let expected = match hardcore::expected_size(&inst.graph, &lambda, cap) {
            Ok(e) => e,
            Err(HardcoreError::CapExceeded { .. }) => {
                outcome.skip();
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let gap = rat_to_f64(&expected) - t2.value;
        let ok = gap >= -1e-9;
        outcome.record(&inst.key, ok, || {
            format!("expected size {} below bound {}", rat_to_f64(&expected), t2.value)
        });
        if worst_gap.is_none_or(|w| gap < w) {
            worst_gap = Some(gap);
        }
    }
    Ok(Thm2Report { outcome, worst_gap })
}

/// Series diagnostics on the same instances: S_1 above its closed-form
/// lower estimate, the discarded tail within its upper estimate, operator
/// norm at most 2C, and the h/tau profile monotone with derivatives inside
/// the sandwich bounds.
pub fn verify_thm2_series(instances: &[Thm2Instance]) -> Result<Outcome, CampaignError> {
    let mut outcome = Outcome::default();
    for inst in instances {
        let t2 = thm2_bound(&inst.graph, inst.lambda, inst.b)?;
        let Some((sub, params)) = t2.working else {
            // Every vertex isolated: nothing to diagnose.
            outcome.record(&inst.key, true, String::new);
            continue;
        };
        let diag = series_terms(&sub, &params, None)?;
        let mut problem: Option<String> = None;

        let s1 = rat_to_f64(&diag.s_terms_exact[0]);
        let s1_est = diag.s1_lower_est.expect("mad flavor carries the estimate");
        if s1 < s1_est - 1e-10 {
            problem = Some(format!("S_1 = {s1} below its lower estimate {s1_est}"));
        }

        if problem.is_none() {
            let tail = rat_to_f64(&(&diag.certificate_gap - &diag.s_terms_exact[0]));
            let tail_est = diag.tail_upper_est.expect("mad flavor carries the estimate");
            if tail.abs() > tail_est + 1e-10 {
                problem = Some(format!("tail {tail} exceeds its estimate {tail_est}"));
            }
        }

        if problem.is_none() {
            let c = inst.lambda * sub.max_degree() as f64;
            let cc = c * (1.0 + c).powf(inst.b);
            if diag.m_norm > 2.0 * cc {
                problem = Some(format!("operator norm {} above 2C = {}", diag.m_norm, 2.0 * cc));
            }
        }

        if problem.is_none() {
            let profile = h_tau_profiles(inst.lambda, inst.b, sub.max_degree() as u32)?;
            if !profile.strictly_decreasing {
                problem = Some("h/tau not strictly decreasing on the degree grid".to_string());
            } else if !profile.bounds_ok {
                problem = Some("derivative sandwich bounds violated".to_string());
            }
        }

        let ok = problem.is_none();
        outcome.record(&inst.key, ok, || problem.unwrap_or_default());
    }
    Ok(outcome)
}

/// Adaptive Simpson quadrature with Richardson correction.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: usize,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + recurse(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(fa, fm, fb, a, b);
    recurse(f, a, b, fa, fm, fb, whole, tol, 48)
}

/// Integrated-bound suite on degree-parameter instances: the closed form
/// must sit below exact log Z and agree with direct quadrature of its
/// defining integrand sum_u lambda_u/(1 + (d_u+1) t lambda_u) over [0,1].
pub fn verify_logz_thm1(instances: &[SweepInstance], cap: usize) -> Result<Outcome, CampaignError> {
    let mut outcome = Outcome::default();
    for inst in instances {
        let lb = logz_bound_thm1(&inst.graph, &inst.lambda)?;
        let logz = match hardcore::log_partition(&inst.graph, &inst.lambda, cap) {
            Ok(z) => z,
            Err(HardcoreError::CapExceeded { .. }) => {
                outcome.skip();
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let mut problem: Option<String> = None;
        if lb > logz + 1e-9 {
            problem = Some(format!("bound {lb} exceeds log Z = {logz}"));
        }
        if problem.is_none() {
            let lam_f: Vec<f64> = inst.lambda.iter().map(rat_to_f64).collect();
            let degs = inst.graph.degrees().to_vec();
            let f = |t: f64| {
                lam_f
                    .iter()
                    .zip(&degs)
                    .map(|(&l, &d)| l / (1.0 + (d as f64 + 1.0) * t * l))
                    .sum::<f64>()
            };
            let quad = adaptive_simpson(&f, 0.0, 1.0, 1e-11);
            if (quad - lb).abs() > 1e-8 {
                problem = Some(format!("quadrature {quad} disagrees with closed form {lb}"));
            }
        }
        let ok = problem.is_none();
        outcome.record(&inst.key, ok, || problem.unwrap_or_default());
    }
    Ok(outcome)
}

/// Triangle-free integrated bound must sit below exact log Z on the b = 0
/// instances.
pub fn verify_logz_trianglefree(
    instances: &[Thm2Instance],
    cap: usize,
) -> Result<Outcome, CampaignError> {
    let mut outcome = Outcome::default();
    for inst in instances.iter().filter(|i| i.b == 0.0) {
        let lb = logz_bound_trianglefree(&inst.graph, inst.lambda)?;
        let lam_rat =
            rat_from_f64(inst.lambda).ok_or(OccupancyError::LambdaOutOfRange {
                lambda: inst.lambda,
                limit: f64::INFINITY,
            })?;
        let lambda = Fugacity::uniform(inst.graph.n(), lam_rat)?;
        let logz = match hardcore::log_partition(&inst.graph, &lambda, cap) {
            Ok(z) => z,
            Err(HardcoreError::CapExceeded { .. }) => {
                outcome.skip();
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let ok = lb <= logz + 1e-9;
        outcome.record(&inst.key, ok, || {
            format!("bound {lb} exceeds log Z = {logz}")
        });
    }
    Ok(outcome)
}

/// Tightness spot checks: the degree-parameter integrated bound equals
/// log Z on cliques, and the triangle-free one equals log(1 + lambda) on a
/// single vertex.
pub fn logz_tightness(cap: usize) -> Result<Outcome, CampaignError> {
    let mut outcome = Outcome::default();
    for m in 1..=8usize {
        for (li, lam) in [rat(1, 2), rat(1, 3), rat(7, 5)].into_iter().enumerate() {
            let g = families::complete(m)?;
            let lambda = Fugacity::uniform(m, lam)?;
            let lb = logz_bound_thm1(&g, &lambda)?;
            let logz = hardcore::log_partition(&g, &lambda, cap)?;
            let ok = (lb - logz).abs() <= 1e-10;
            outcome.record(&format!("clique-{m}-{li}"), ok, || {
                format!("clique bound {lb} differs from log Z = {logz}")
            });
        }
    }
    for (li, lam) in [0.5f64, 0.25, 0.05].into_iter().enumerate() {
        let g = Graph::new(1, &[])?;
        let lb = logz_bound_trianglefree(&g, lam)?;
        let expected = (1.0 + lam).ln();
        let ok = (lb - expected).abs() <= 1e-10;
        outcome.record(&format!("vertex-{li}"), ok, || {
            format!("single-vertex bound {lb} differs from log(1+lambda) = {expected}")
        });
    }
    Ok(outcome)
}

/// One vertex where the hit time exceeded the per-vertex product bound
/// (beta_u + d_u gamma_u) q_u.
#[derive(Debug, Clone)]
pub struct ProductBoundWitness {
    pub key: String,
    pub vertex: usize,
    pub hit_time: Rat,
    pub bound: Rat,
    pub fell_back: bool,
    pub degrees: Vec<u32>,
}

#[derive(Debug, Clone, Default)]
pub struct DemandSweepReport {
    pub instances: usize,
    pub core_passes: usize,
    pub core_failures: usize,
    pub core_notes: Vec<String>,
    /// Instances where some vertex broke the per-vertex product bound
    /// T_u <= (beta_u + d_u gamma_u) q_u. The integrated row bound
    /// T_u <= beta_u q_u + gamma_u sum_{v ~ u} q_v is checked in the core
    /// set instead; the product form is strictly stronger for non-uniform
    /// q and does fail on real instances (see the demand sweep tests).
    pub product_bound_failures: usize,
    pub product_witnesses: Vec<ProductBoundWitness>,
}

/// Solves the tight demand system: row u reads
/// beta_u q_u + gamma_u sum_{v ~ u} q_v = 1. None when singular.
pub fn primal_vector(
    g: &Graph,
    beta: &[Rat],
    gamma: &[Rat],
) -> Result<Option<Vec<Rat>>, CampaignError> {
    let n = g.n();
    let mut m = RatMatrix::zeros(n, n);
    for u in 0..n {
        m.set(u, u, beta[u].clone());
        for v in g.neighbors(u) {
            m.set(u, v, gamma[u].clone());
        }
    }
    let ones = vec![Rat::one(); n];
    match solve_exact(&m, &ones) {
        Ok(q) => Ok(Some(q)),
        Err(LinalgError::Singular { .. }) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

/// Demand-process sweep over all connected graphs up to max_n: q solves
/// the tight demand system at lambda = 1 when that solution exists and is
/// nonnegative, else at lambda = 1/(2 Delta) where nonnegativity is
/// guaranteed. Core checks: total mass, hit times, support independence,
/// integrated row bound, exact marginals at least q. The per-vertex
/// product bound is tallied separately with witnesses.
pub fn demand_sweep(max_n: usize, cap: usize) -> Result<DemandSweepReport, CampaignError> {
    const MAX_NOTES: usize = 12;
    const MAX_WITNESSES: usize = 12;
    let mut report = DemandSweepReport::default();
    for n in 1..=max_n {
        for (gi, g) in families::connected_graphs(n)?.into_iter().enumerate() {
            let key = format!("n{n}-g{gi}");
            report.instances += 1;

            let lam1 = Fugacity::uniform(n, rat_int(1))?;
            let p1 = general_params(&lam1)?;
            let q1 = primal_vector(&g, &p1.beta, &p1.gamma)?;
            let (p, q, fell_back) = match q1 {
                Some(q) if q.iter().all(|x| !x.is_negative()) => (p1, q, false),
                _ => {
                    let lam2 = uniform_fraction(&g, 1, 2)?;
                    let p2 = general_params(&lam2)?;
                    let q2 = primal_vector(&g, &p2.beta, &p2.gamma)?
                        .expect("diagonally dominant system is nonsingular");
                    (p2, q2, true)
                }
            };
            if q.iter().any(|x| x.is_negative()) {
                report.core_failures += 1;
                if report.core_notes.len() < MAX_NOTES {
                    report
                        .core_notes
                        .push(format!("{key}: fallback demand vector has a negative entry"));
                }
                continue;
            }

            let qv = DemandVector::new(q.clone())?;
            let fc = run_demand_process(&g, &p, &qv, cap, false)?;
            let verdict = verify_membership(&g, &p, &fc, &qv)?;

            let core_ok = verdict.support_independent
                && verdict.masses_nonnegative
                && verdict.total_mass_ok
                && verdict.hit_times_ok
                && verdict.marginals_ok
                && verdict.tubound_ok;
            if core_ok {
                report.core_passes += 1;
            } else {
                report.core_failures += 1;
                if report.core_notes.len() < MAX_NOTES {
                    report.core_notes.push(format!("{key}: {verdict:?}"));
                }
            }

            if !verdict.remark_bound_ok {
                report.product_bound_failures += 1;
                for &u in &verdict.remark_violations {
                    if report.product_witnesses.len() >= MAX_WITNESSES {
                        break;
                    }
                    let d = g.degrees()[u] as i64;
                    let bound = (&p.beta[u] + rat_int(d) * &p.gamma[u]) * &q[u];
                    report.product_witnesses.push(ProductBoundWitness {
                        key: key.clone(),
                        vertex: u,
                        hit_time: fc.hit_times[u].clone(),
                        bound,
                        fell_back,
                        degrees: g.degrees().to_vec(),
                    });
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    const CAP: usize = crate::tol::DEFAULT_ENUM_CAP;

    fn small_cfg() -> Thm1InstanceConfig {
        Thm1InstanceConfig {
            exhaustive_max: 4,
            random_sizes: vec![5],
            random_instances: 6,
            random_patterns: 3,
            seed: 11,
        }
    }

    #[test]
    fn instance_generation_counts_and_determinism() {
        let cfg = small_cfg();
        let a = thm1_instances(&cfg).unwrap();
        // 10 connected graphs up to n = 4, 5 patterns each, plus 6 random.
        assert_eq!(a.len(), 10 * 5 + 6);
        let b = thm1_instances(&cfg).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.key, y.key);
            assert_eq!(x.graph.edges(), y.graph.edges());
            assert_eq!(x.lambda, y.lambda);
        }
        let mut keys: Vec<&str> = a.iter().map(|i| i.key.as_str()).collect();
        keys.sort_unstable();
        keys.dedup();
        assert_eq!(keys.len(), a.len());
    }

    #[test]
    fn thm1_sweep_small_clean() {
        let instances = thm1_instances(&small_cfg()).unwrap();
        let r = verify_thm1(&instances, CAP).unwrap();
        assert_eq!(r.outcome.failures, 0, "{:?}", r.outcome.failure_notes);
        assert_eq!(r.outcome.skipped, 0);
        assert!(!r.worst_gap.unwrap().is_negative());
    }

    #[test]
    fn clique_tightness_gap_exactly_zero() {
        let r = clique_tightness(3, CAP).unwrap();
        assert_eq!(r.outcome.failures, 0, "{:?}", r.outcome.failure_notes);
        // 4 single parts + 10 pairs + 20 triples.
        assert_eq!(r.outcome.instances, 34);
        assert_eq!(r.worst_gap.unwrap(), rat_int(0));
    }

    #[test]
    fn dual_suite_small_clean() {
        let instances = thm1_instances(&small_cfg()).unwrap();
        let o = verify_dual_suite(&instances, crate::tol::LP_CAP).unwrap();
        assert_eq!(o.failures, 0, "{:?}", o.failure_notes);
        assert_eq!(o.passes, o.instances);
    }

    #[test]
    fn series_positivity_small_clean() {
        let o = verify_series_positivity(4, 10).unwrap();
        assert_eq!(o.failures, 0, "{:?}", o.failure_notes);
        assert_eq!(o.instances, 10);
    }

    #[test]
    fn thm2_instances_cover_both_flavors() {
        let instances = thm2_instances(5, 5, 7).unwrap();
        // 12 triangle-free connected graphs up to n = 5, two fractions each.
        assert_eq!(instances.iter().filter(|i| i.b == 0.0).count(), 24);
        assert_eq!(instances.iter().filter(|i| i.b == 1.0).count(), 5);
        for inst in &instances {
            assert!(inst.lambda > 0.0);
        }
        let again = thm2_instances(5, 5, 7).unwrap();
        for (x, y) in instances.iter().zip(&again) {
            assert_eq!(x.graph.edges(), y.graph.edges());
            assert_eq!(x.lambda, y.lambda);
        }
    }

    #[test]
    fn thm2_sweep_small_clean() {
        let instances = thm2_instances(5, 5, 7).unwrap();
        let r = verify_thm2(&instances, CAP).unwrap();
        assert_eq!(r.outcome.failures, 0, "{:?}", r.outcome.failure_notes);
        assert!(r.worst_gap.unwrap() >= -1e-9);
        let o = verify_thm2_series(&instances).unwrap();
        assert_eq!(o.failures, 0, "{:?}", o.failure_notes);
    }

    #[test]
    fn quadrature_matches_closed_forms() {
        let cube = adaptive_simpson(&|t: f64| 3.0 * t * t, 0.0, 1.0, 1e-12);
        assert!((cube - 1.0).abs() < 1e-12);
        let log2 = adaptive_simpson(&|t: f64| 1.0 / (1.0 + t), 0.0, 1.0, 1e-12);
        assert!((log2 - std::f64::consts::LN_2).abs() < 1e-11);
    }

    #[test]
    fn logz_suites_small_clean() {
        let instances = thm1_instances(&small_cfg()).unwrap();
        let o = verify_logz_thm1(&instances, CAP).unwrap();
        assert_eq!(o.failures, 0, "{:?}", o.failure_notes);

        let tf = thm2_instances(5, 3, 7).unwrap();
        let o = verify_logz_trianglefree(&tf, CAP).unwrap();
        assert_eq!(o.failures, 0, "{:?}", o.failure_notes);
        assert_eq!(o.instances, 24);

        let o = logz_tightness(CAP).unwrap();
        assert_eq!(o.failures, 0, "{:?}", o.failure_notes);
    }

    #[test]
    fn demand_sweep_core_clean_with_known_product_witness() {
        let r = demand_sweep(4, CAP).unwrap();
        assert_eq!(r.instances, 10);
        assert_eq!(r.core_failures, 0, "{:?}", r.core_notes);
        // The 4-star falls back to lambda = 1/6 and its center hits at
        // 379/414, above the product bound 10 * 2/23 = 360/414.
        assert!(r.product_bound_failures >= 1);
        let w = r
            .product_witnesses
            .iter()
            .find(|w| w.degrees == vec![3, 1, 1, 1])
            .expect("4-star witness present");
        assert!(w.fell_back);
        assert_eq!(w.vertex, 0);
        assert_eq!(w.hit_time, rat(379, 414));
        assert_eq!(w.bound, rat(20, 23));
        assert!(w.hit_time > w.bound);
    }

    #[test]
    fn demand_sweep_path3_stays_at_lambda_one() {
        // P3 at lambda = 1 has primal solution (0, 1/2, 1/2): nonnegative,
        // so no fallback, and the zero-demand center stays inactive.
        let r = demand_sweep(3, CAP).unwrap();
        assert_eq!(r.instances, 4);
        assert_eq!(r.core_failures, 0, "{:?}", r.core_notes);
        assert_eq!(r.product_bound_failures, 0);
    }
}
