//! Typed JSON report shapes shared by the CLI and the FFI surface, and the
//! numeric formatting contract: exact rationals as "p/q" strings, reals as
//! decimals with 15 significant digits.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::coloring::{verify_membership, ColoringError, DemandVector, FractionalColoring};
use crate::graph::{Graph, GraphError};
use crate::hardcore::{self, Fugacity};
use crate::occupancy::{
    dual_certificate, general_params, series_terms, thm1_bound, thm2_bound, DualCertificate,
    DualConditions, OccupancyError, OccupancyParams, ScanReport, SeriesDiagnostics,
};
use crate::rat::{fmt_rat, rat_from_f64, rat_to_f64, Rat};
use crate::special::{solve_c0, solve_eta, SolverConfig, SpecialError, C0_PUBLISHED, ETA_PUBLISHED};

/// 15 significant digits; fixed point for moderate magnitudes, scientific
/// otherwise, trailing zeros trimmed. Deterministic for a given input.
pub fn fmt_real(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.14e}");
    let exp: i32 = sci
        .split('e')
        .nth(1)
        .expect("scientific format has an exponent")
        .parse()
        .expect("exponent is an integer");
    if (-5..15).contains(&exp) {
        let decimals = (14 - exp).max(0) as usize;
        trim_fixed(format!("{x:.decimals$}"))
    } else {
        let (mantissa, _) = sci.split_once('e').expect("checked above");
        format!("{}e{}", trim_fixed(mantissa.to_string()), exp)
    }
}

fn trim_fixed(mut s: String) -> String {
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum NumberStyle {
    Exact,
    Real,
}

fn fmt_value(r: &Rat, style: NumberStyle) -> String {
    match style {
        NumberStyle::Exact => fmt_rat(r),
        NumberStyle::Real => fmt_real(rat_to_f64(r)),
    }
}

fn mask_to_set(mask: u64) -> Vec<u32> {
    let mut out = Vec::new();
    let mut bits = mask;
    while bits != 0 {
        out.push(bits.trailing_zeros());
        bits &= bits - 1;
    }
    out
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<(u32, u32)>,
}

impl GraphJson {
    pub fn from_graph(g: &Graph) -> Self {
        GraphJson {
            n: g.n(),
            edges: g.edges().to_vec(),
        }
    }

    pub fn to_graph(&self) -> Result<Graph, GraphError> {
        Graph::new(self.n, &self.edges)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ValueAt {
    pub vertex: usize,
    pub value: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ConditionsJson {
    pub all_ok: bool,
    pub positivity_ok: bool,
    pub degree_ratio_ok: bool,
    pub neighbor_sum_ok: bool,
    pub min_parameter: ValueAt,
    pub worst_degree_ratio: ValueAt,
    pub worst_neighbor_sum: ValueAt,
}

fn conditions_json(c: &DualConditions, style: NumberStyle) -> ConditionsJson {
    let at = |(vertex, ref value): (usize, Rat)| ValueAt {
        vertex,
        value: fmt_value(value, style),
    };
    ConditionsJson {
        all_ok: c.all_ok(),
        positivity_ok: c.positivity_ok,
        degree_ratio_ok: c.degree_ratio_ok,
        neighbor_sum_ok: c.neighbor_sum_ok,
        min_parameter: at(c.min_parameter.clone()),
        worst_degree_ratio: at(c.worst_degree_ratio.clone()),
        worst_neighbor_sum: at(c.worst_neighbor_sum.clone()),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CertificateJson {
    pub y_prime: Vec<String>,
    pub objective: String,
    pub baseline: String,
    pub rho_bagamma: String,
    pub rho_lgh: String,
    pub conditions: ConditionsJson,
}

fn certificate_json(c: &DualCertificate, style: NumberStyle) -> CertificateJson {
    CertificateJson {
        y_prime: c.y_prime.iter().map(|y| fmt_value(y, style)).collect(),
        objective: fmt_value(&c.objective, style),
        baseline: fmt_value(&c.baseline, style),
        rho_bagamma: fmt_real(c.rho_bagamma),
        rho_lgh: fmt_real(c.rho_lgh),
        conditions: conditions_json(&c.conditions, style),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct SeriesJson {
    #[serde(rename = "S")]
    pub s: Vec<String>,
    pub m_norm: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub s1_lower_est: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tail_upper_est: Option<String>,
}

fn series_json(d: &SeriesDiagnostics, style: NumberStyle) -> SeriesJson {
    let s = match style {
        NumberStyle::Exact => d.s_terms_exact.iter().map(fmt_rat).collect(),
        NumberStyle::Real => d.s_terms.iter().copied().map(fmt_real).collect(),
    };
    SeriesJson {
        s,
        m_norm: fmt_real(d.m_norm),
        s1_lower_est: d.s1_lower_est.map(fmt_real),
        tail_upper_est: d.tail_upper_est.map(fmt_real),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct InstanceReport {
    pub graph: GraphJson,
    pub lambda: Fugacity,
    pub flavor: String,
    pub bound: String,
    pub expected_size: String,
    pub gap: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub certificate: Option<CertificateJson>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub series: Option<SeriesJson>,
}

fn certificate_and_series(
    g: &Graph,
    p: &OccupancyParams,
    depth: Option<usize>,
) -> Result<(Option<DualCertificate>, Option<SeriesDiagnostics>), OccupancyError> {
    let certificate = match dual_certificate(g, p) {
        Ok(c) => Some(c),
        Err(OccupancyError::ConditionsFailed(_)) => None,
        Err(e) => return Err(e),
    };
    let series = if certificate.is_some() {
        match series_terms(g, p, depth) {
            Ok(s) => Some(s),
            Err(OccupancyError::SpectralRadiusNearOne { .. }) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    Ok((certificate, series))
}

/// Degree-parameter instance report: exact bound, expectation, gap, and the
/// dual certificate with series diagnostics when the feasibility conditions
/// hold. All numerics exact.
pub fn certify_report(
    g: &Graph,
    lambda: &Fugacity,
    cap: usize,
    depth: Option<usize>,
) -> Result<InstanceReport, OccupancyError> {
    let p = general_params(lambda)?;
    let expected = hardcore::expected_size(g, lambda, cap)?;
    let bound = thm1_bound(g, lambda)?;
    let gap = &expected - &bound;
    let (certificate, series) = certificate_and_series(g, &p, depth)?;
    Ok(InstanceReport {
        graph: GraphJson::from_graph(g),
        lambda: lambda.clone(),
        flavor: "general".to_string(),
        bound: fmt_rat(&bound),
        expected_size: fmt_rat(&expected),
        gap: fmt_rat(&gap),
        certificate: certificate.map(|c| certificate_json(&c, NumberStyle::Exact)),
        series: series.map(|s| series_json(&s, NumberStyle::Exact)),
    })
}

/// Bounded-neighborhood-mad instance report; the bound is a real, the
/// expectation stays exact, diagnostics are formatted as reals.
pub fn certify_report_mad(
    g: &Graph,
    lambda: f64,
    b: f64,
    cap: usize,
    depth: Option<usize>,
) -> Result<InstanceReport, OccupancyError> {
    let t2 = thm2_bound(g, lambda, b)?;
    let lam_rat = rat_from_f64(lambda).ok_or(SpecialError::Domain(lambda))?;
    let lam = Fugacity::uniform(g.n(), lam_rat)?;
    let expected = hardcore::expected_size(g, &lam, cap)?;
    let gap = rat_to_f64(&expected) - t2.value;
    let (certificate, series) = match &t2.working {
        Some((sub, params)) => certificate_and_series(sub, params, depth)?,
        None => (None, None),
    };
    Ok(InstanceReport {
        graph: GraphJson::from_graph(g),
        lambda: lam,
        flavor: "mad".to_string(),
        bound: fmt_real(t2.value),
        expected_size: fmt_rat(&expected),
        gap: fmt_real(gap),
        certificate: certificate.map(|c| certificate_json(&c, NumberStyle::Real)),
        series: series.map(|s| series_json(&s, NumberStyle::Real)),
    })
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct HardcoreSummaryJson {
    pub partition_function: String,
    pub log_partition: String,
    pub marginals: Vec<String>,
    pub expected_size: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct AnalyzeReport {
    pub graph: GraphJson,
    pub lambda: Fugacity,
    pub degrees: Vec<u32>,
    pub max_degree: usize,
    pub triangle_free: bool,
    /// Maximum average degree over nonempty subgraphs; absent above the
    /// subset-enumeration cap.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mad: Option<String>,
    /// Per-vertex mad of the neighborhood subgraphs; absent when the graph
    /// has isolated vertices or exceeds the cap.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub neighborhood_mad: Option<Vec<String>>,
    pub summary: HardcoreSummaryJson,
    pub bound: String,
    pub gap: String,
}

pub fn analyze_report(
    g: &Graph,
    lambda: &Fugacity,
    cap: usize,
) -> Result<AnalyzeReport, OccupancyError> {
    let s = hardcore::summary(g, lambda, cap)?;
    let bound = thm1_bound(g, lambda)?;
    let gap = &s.expected_size - &bound;
    let mad = match g.mad() {
        Ok(m) => Some(fmt_rat(&m)),
        Err(GraphError::SubsetCapExceeded { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let neighborhood_mad = match g.neighborhood_mad_profile() {
        Ok(p) => Some(p.iter().map(fmt_rat).collect()),
        Err(GraphError::IsolatedVertex { .. }) | Err(GraphError::SubsetCapExceeded { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    Ok(AnalyzeReport {
        graph: GraphJson::from_graph(g),
        lambda: lambda.clone(),
        degrees: g.degrees().to_vec(),
        max_degree: g.max_degree(),
        triangle_free: g.is_triangle_free(),
        mad,
        neighborhood_mad,
        summary: HardcoreSummaryJson {
            partition_function: fmt_rat(&s.partition_function),
            log_partition: fmt_real(s.log_partition),
            marginals: s.marginals.iter().map(fmt_rat).collect(),
            expected_size: fmt_rat(&s.expected_size),
        },
        bound: fmt_rat(&bound),
        gap: fmt_rat(&gap),
    })
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct SetMass {
    pub set: Vec<u32>,
    pub mass: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct VerdictJson {
    pub support_independent: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub bad_set: Option<Vec<u32>>,
    pub masses_nonnegative: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub bad_mass: Option<Vec<u32>>,
    pub total_mass_ok: bool,
    pub hit_times_ok: bool,
    pub marginals_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub bad_marginal: Option<usize>,
    pub tubound_ok: bool,
    pub remark_bound_ok: bool,
    pub remark_violations: Vec<usize>,
    pub certifying: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct DemandReport {
    pub graph: GraphJson,
    pub lambda: Fugacity,
    pub q: Vec<String>,
    pub breakpoints: Vec<String>,
    pub hit_times: Vec<String>,
    pub distribution: Vec<SetMass>,
    pub marginals: Vec<String>,
    pub total_mass: String,
    pub phases: usize,
    pub verdict: VerdictJson,
}

pub fn demand_report(
    g: &Graph,
    p: &OccupancyParams,
    fc: &FractionalColoring,
    q: &DemandVector,
) -> Result<DemandReport, ColoringError> {
    let v = verify_membership(g, p, fc, q)?;
    let verdict = VerdictJson {
        support_independent: v.support_independent,
        bad_set: v.bad_set.map(mask_to_set),
        masses_nonnegative: v.masses_nonnegative,
        bad_mass: v.bad_mass.map(mask_to_set),
        total_mass_ok: v.total_mass_ok,
        hit_times_ok: v.hit_times_ok,
        marginals_ok: v.marginals_ok,
        bad_marginal: v.bad_marginal,
        tubound_ok: v.tubound_ok,
        remark_bound_ok: v.remark_bound_ok,
        remark_violations: v.remark_violations,
        certifying: v.certifying,
    };
    Ok(DemandReport {
        graph: GraphJson::from_graph(g),
        lambda: p.lambda.clone(),
        q: q.values().iter().map(fmt_rat).collect(),
        breakpoints: fc.breakpoints.iter().map(fmt_rat).collect(),
        hit_times: fc.hit_times.iter().map(fmt_rat).collect(),
        distribution: fc
            .distribution()
            .into_iter()
            .map(|(mask, mass)| SetMass {
                set: mask_to_set(mask),
                mass: fmt_rat(&mass),
            })
            .collect(),
        marginals: fc.marginals(g.n()).iter().map(fmt_rat).collect(),
        total_mass: fmt_rat(&fc.total_mass),
        phases: fc.phases,
        verdict,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ConstantsReport {
    pub c0: String,
    pub c0_published: String,
    pub c0_residual: String,
    pub c0_iterations: usize,
    pub eta: String,
    pub eta_published: String,
    pub eta_residual: String,
    pub eta_iterations: usize,
}

pub fn constants_report() -> Result<ConstantsReport, SpecialError> {
    let cfg = SolverConfig::default();
    let c0 = solve_c0(&cfg)?;
    let eta = solve_eta(&cfg)?;
    Ok(ConstantsReport {
        c0: fmt_real(c0.root),
        c0_published: fmt_real(C0_PUBLISHED),
        c0_residual: fmt_real(c0.residual),
        c0_iterations: c0.iterations,
        eta: fmt_real(eta.root),
        eta_published: fmt_real(ETA_PUBLISHED),
        eta_residual: fmt_real(eta.residual),
        eta_iterations: eta.iterations,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CounterexampleReport {
    pub graph: GraphJson,
    pub lambda: Fugacity,
    /// The hand-checkable feasible point (1, 0, 0).
    pub candidate: Vec<String>,
    pub candidate_feasible: bool,
    pub optimum: String,
    pub witness: Vec<String>,
    pub bound: String,
    pub expected_size: String,
    pub gap: String,
    pub conclusion: String,
}

/// The star K_{1,2} at lambda = 7/5: the expected-size bound holds, yet the
/// LP relaxation bottoms out at 1, strictly below the bound 497/494. This
/// pins down that the LP, not the bound, is what fails above 1/Delta.
pub fn counterexample_report(cap: usize) -> Result<CounterexampleReport, OccupancyError> {
    let g = Graph::new(3, &[(0, 1), (0, 2)])?;
    let lambda = Fugacity::uniform(3, crate::rat::rat(7, 5))?;
    let p = general_params(&lambda)?;

    let candidate = vec![Rat::one(), Rat::zero(), Rat::zero()];
    let candidate_feasible = (0..g.n()).all(|u| {
        let row = &p.beta[u] * &candidate[u]
            + &p.gamma[u]
                * g.neighbors(u)
                    .fold(Rat::zero(), |a, v| a + &candidate[v]);
        row >= Rat::one()
    });

    let sol = crate::occupancy::lp_optimum_bruteforce(&g, &p)?;
    let bound = thm1_bound(&g, &lambda)?;
    let expected = hardcore::expected_size(&g, &lambda, cap)?;
    let gap = &expected - &bound;
    let conclusion = format!(
        "LP optimum {} is strictly below the target bound {}, so the dual \
         certificate cannot exist here; the bound itself still holds, since \
         the exact expected size {} exceeds it",
        fmt_rat(&sol.optimum),
        fmt_rat(&bound),
        fmt_rat(&expected),
    );
    Ok(CounterexampleReport {
        graph: GraphJson::from_graph(&g),
        lambda,
        candidate: candidate.iter().map(fmt_rat).collect(),
        candidate_feasible,
        optimum: fmt_rat(&sol.optimum),
        witness: sol.witness.iter().map(fmt_rat).collect(),
        bound: fmt_rat(&bound),
        expected_size: fmt_rat(&expected),
        gap: fmt_rat(&gap),
        conclusion,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ViolationJson {
    pub n: usize,
    pub edges: Vec<(u32, u32)>,
    pub lambda: Vec<String>,
    pub expected_size: String,
    pub bound: String,
    pub gap: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ScanJson {
    pub instances: usize,
    pub skipped_cap: usize,
    pub violations: Vec<ViolationJson>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub worst_gap: Option<String>,
    pub seed: u64,
}

pub fn scan_json(r: &ScanReport) -> ScanJson {
    ScanJson {
        instances: r.instances,
        skipped_cap: r.skipped_cap,
        violations: r
            .violations
            .iter()
            .map(|v| ViolationJson {
                n: v.n,
                edges: v.edges.clone(),
                lambda: v.lambda.iter().map(fmt_rat).collect(),
                expected_size: fmt_rat(&v.expected_size),
                bound: fmt_rat(&v.bound),
                gap: fmt_rat(&v.gap),
            })
            .collect(),
        worst_gap: r.worst_gap.as_ref().map(fmt_rat),
        seed: r.seed,
    }
}

/// Per-campaign roll-up used by the verification CLI modes.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CampaignSummary {
    pub mode: String,
    pub instances: usize,
    pub passes: usize,
    pub failures: usize,
    pub skipped: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub worst_gap: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
}

/// Pretty JSON with a trailing newline; field order is declaration order,
/// so equal values serialize to identical bytes.
pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types always serialize");
    s.push('\n');
    s
}
