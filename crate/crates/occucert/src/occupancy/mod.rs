//! Local-occupancy machinery: parameter families, the per-vertex occupancy
//! inequality, exact dual certificates with spectral diagnostics, the
//! correction series S_k, and the expected-size / log-partition lower
//! bounds they certify.

pub mod lp;
pub mod scan;

use crate::graph::{Graph, GraphError};
use crate::hardcore::{self, Fugacity, HardcoreError};
use crate::linalg::rational::{solve_exact, RatMatrix};
use crate::linalg::spectral::{symmetric_spectrum, RealMatrix};
use crate::linalg::LinalgError;
use crate::rat::{fmt_rat, ln_rat, rat_from_f64, rat_to_f64, Rat};
use crate::special::{c_of_b, lambert_w, SpecialError};
use crate::tol::{one_minus_1e12, SERIES_TAIL_TOL, VERDICT_TOL};
use num_traits::{One, Signed, Zero};
use std::fmt;
use thiserror::Error;

pub use lp::{lp_optimum_bruteforce, lp_optimum_reference, LpSolution};
pub use scan::{conjecture_scan, GraphSource, LambdaLaw, ScanConfig, ScanReport, ScanViolation};

#[derive(Debug, Error)]
pub enum OccupancyError {
    #[error("fugacity at vertex {v} must be strictly positive")]
    NonpositiveFugacity { v: usize },
    #[error("parameter vectors have {got} entries, graph has {want} vertices")]
    LengthMismatch { got: usize, want: usize },
    #[error("lambda = {lambda} outside the admissible range (0, {limit})")]
    LambdaOutOfRange { lambda: f64, limit: f64 },
    #[error("dual feasibility conditions fail: {0}")]
    ConditionsFailed(Box<DualConditions>),
    #[error("certificate entry y'[{v}] is negative")]
    NegativeCertificate { v: usize },
    #[error("spectral radius {rho} is not safely below one")]
    SpectralRadiusNearOne { rho: f64 },
    #[error("neighborhood of vertex {v} has mad {mad}, exceeding b = {b}")]
    LocalMadTooLarge { v: usize, mad: String, b: f64 },
    #[error("graph is not triangle-free")]
    NotTriangleFree,
    #[error("degree grid is empty (max degree must be at least 1)")]
    EmptyDegreeGrid,
    #[error("LP basis enumeration needs n <= {cap}, got {n}")]
    LpSizeCap { n: usize, cap: usize },
    #[error("LP needs beta[{v}] > 0 and gamma[{v}] >= 0")]
    LpBadParams { v: usize },
    #[error("scan config invalid: {0}")]
    BadScanConfig(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Family(#[from] crate::families::FamilyError),
    #[error(transparent)]
    Hardcore(#[from] HardcoreError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Special(#[from] SpecialError),
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParamFlavor {
    General,
    Mad { b: f64, lambda: f64 },
}

/// Per-vertex parameters (beta_u, gamma_u, lambda_u). Entries are stored as
/// exact rationals even when derived from floating-point formulas, so all
/// linear algebra downstream is exact for the parameters as stored.
#[derive(Debug, Clone, PartialEq)]
pub struct OccupancyParams {
    pub beta: Vec<Rat>,
    pub gamma: Vec<Rat>,
    pub lambda: Fugacity,
    pub flavor: ParamFlavor,
}

impl OccupancyParams {
    pub fn n(&self) -> usize {
        self.beta.len()
    }

    fn check_len(&self, g: &Graph) -> Result<(), OccupancyError> {
        if self.n() != g.n() || self.gamma.len() != g.n() || self.lambda.len() != g.n() {
            return Err(OccupancyError::LengthMismatch {
                got: self.n(),
                want: g.n(),
            });
        }
        Ok(())
    }

    /// h_u = 1/(beta_u + d_u*gamma_u), the diagonal of H^{-1}.
    pub fn h_vec(&self, g: &Graph) -> Vec<Rat> {
        (0..g.n())
            .map(|u| {
                let den = &self.beta[u] + Rat::from_integer(g.degree(u).into()) * &self.gamma[u];
                den.recip()
            })
            .collect()
    }

    /// tau_u = gamma_u/(beta_u + d_u*gamma_u), the diagonal of T.
    pub fn tau_vec(&self, g: &Graph) -> Vec<Rat> {
        self.h_vec(g)
            .into_iter()
            .zip(&self.gamma)
            .map(|(h, gamma)| h * gamma)
            .collect()
    }
}

/// beta_u = 1 + 1/lambda_u, gamma = 1. Valid for every strictly positive
/// fugacity vector; requires no degree information.
pub fn general_params(lambda: &Fugacity) -> Result<OccupancyParams, OccupancyError> {
    let mut beta = Vec::with_capacity(lambda.len());
    for (v, lam) in lambda.iter().enumerate() {
        if !lam.is_positive() {
            return Err(OccupancyError::NonpositiveFugacity { v });
        }
        beta.push(Rat::one() + lam.recip());
    }
    Ok(OccupancyParams {
        gamma: vec![Rat::one(); lambda.len()],
        lambda: lambda.clone(),
        beta,
        flavor: ParamFlavor::General,
    })
}

/// Degree-driven parameters for graphs whose neighborhoods have mad at most
/// b: with s = (1+lambda)^b ln(1+lambda) and D_u = d_u*s,
/// beta_u = ((1+lambda)/lambda) D_u/(W(D_u)(1+W(D_u))) and
/// gamma_u = ((1+lambda)/lambda) D_u/(d_u(1+W(D_u))).
/// Requires 0 < lambda < c(b)/Delta and no isolated vertices.
pub fn mad_params(g: &Graph, lambda: f64, b: f64) -> Result<OccupancyParams, OccupancyError> {
    let c = c_of_b(b)?;
    if let Some(v) = g.degrees().iter().position(|&d| d == 0) {
        return Err(GraphError::IsolatedVertex { v }.into());
    }
    let limit = c / g.max_degree() as f64;
    if !(lambda > 0.0 && lambda < limit) {
        return Err(OccupancyError::LambdaOutOfRange { lambda, limit });
    }
    let s = (1.0 + lambda).powf(b) * (1.0 + lambda).ln();
    let pref = (1.0 + lambda) / lambda;
    let mut beta = Vec::with_capacity(g.n());
    let mut gamma = Vec::with_capacity(g.n());
    let exact = |x: f64| rat_from_f64(x).expect("parameter formulas yield finite values");
    for u in 0..g.n() {
        let d = g.degree(u) as f64;
        let big_d = d * s;
        let w = lambert_w(big_d)?;
        beta.push(exact(pref * big_d / (w * (1.0 + w))));
        gamma.push(exact(pref * big_d / (d * (1.0 + w))));
    }
    let lam = Fugacity::per_vertex(vec![exact(lambda); g.n()])?;
    Ok(OccupancyParams {
        beta,
        gamma,
        lambda: lam,
        flavor: ParamFlavor::Mad { b, lambda },
    })
}

#[derive(Debug, Clone)]
pub struct LocalOccupancyRow {
    pub vertex: usize,
    /// beta_u Pr(u in X) + gamma_u sum over N(u) of Pr(v in X), exact.
    pub value: Rat,
    pub ok: bool,
}

#[derive(Debug, Clone)]
pub struct LocalOccupancyReport {
    pub rows: Vec<LocalOccupancyRow>,
    pub all_ok: bool,
}

/// Checks the defining per-vertex inequality against exact marginals.
/// A row passes when its value is at least 1 - 1e-12.
pub fn verify_local_occupancy(
    g: &Graph,
    p: &OccupancyParams,
    cap: usize,
) -> Result<LocalOccupancyReport, OccupancyError> {
    p.check_len(g)?;
    let m = hardcore::marginals(g, &p.lambda, cap)?;
    let threshold = one_minus_1e12();
    let rows: Vec<LocalOccupancyRow> = (0..g.n())
        .map(|u| {
            let neighbor_sum = g
                .neighbors(u)
                .fold(Rat::zero(), |acc, v| acc + &m[v]);
            let value = &p.beta[u] * &m[u] + &p.gamma[u] * neighbor_sum;
            let ok = value >= threshold;
            LocalOccupancyRow {
                vertex: u,
                value,
                ok,
            }
        })
        .collect();
    let all_ok = rows.iter().all(|r| r.ok);
    Ok(LocalOccupancyReport { rows, all_ok })
}

/// The three feasibility conditions for the dual certificate: positivity of
/// all parameters, d_u*gamma_u/beta_u < 1, and sum over N(u) of
/// gamma_v/beta_v <= 1. Failures are recorded, not raised.
#[derive(Debug, Clone)]
pub struct DualConditions {
    pub positivity_ok: bool,
    /// Smallest entry among beta, gamma, lambda and a vertex attaining it.
    pub min_parameter: (usize, Rat),
    pub degree_ratio_ok: bool,
    /// Largest d_u*gamma_u/beta_u and a vertex attaining it.
    pub worst_degree_ratio: (usize, Rat),
    pub neighbor_sum_ok: bool,
    /// Largest neighborhood sum of gamma_v/beta_v and a vertex attaining it.
    pub worst_neighbor_sum: (usize, Rat),
}

impl DualConditions {
    pub fn all_ok(&self) -> bool {
        self.positivity_ok && self.degree_ratio_ok && self.neighbor_sum_ok
    }
}

impl fmt::Display for DualConditions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "min parameter {} at vertex {}, max d*gamma/beta {} at vertex {}, \
             max neighborhood gamma/beta sum {} at vertex {}",
            fmt_rat(&self.min_parameter.1),
            self.min_parameter.0,
            fmt_rat(&self.worst_degree_ratio.1),
            self.worst_degree_ratio.0,
            fmt_rat(&self.worst_neighbor_sum.1),
            self.worst_neighbor_sum.0,
        )
    }
}

pub fn check_dual_conditions(
    g: &Graph,
    p: &OccupancyParams,
) -> Result<DualConditions, OccupancyError> {
    p.check_len(g)?;
    let mut min_parameter = (0usize, p.beta[0].clone());
    for u in 0..g.n() {
        for value in [&p.beta[u], &p.gamma[u], p.lambda.get(u)] {
            if *value < min_parameter.1 {
                min_parameter = (u, value.clone());
            }
        }
    }
    let positivity_ok = min_parameter.1.is_positive();

    let ratio = |u: usize| {
        Rat::from_integer(g.degree(u).into()) * &p.gamma[u] / &p.beta[u]
    };
    let mut worst_degree_ratio = (0usize, ratio(0));
    for u in 1..g.n() {
        let r = ratio(u);
        if r > worst_degree_ratio.1 {
            worst_degree_ratio = (u, r);
        }
    }
    let degree_ratio_ok = worst_degree_ratio.1 < Rat::one();

    let nsum = |u: usize| {
        g.neighbors(u)
            .fold(Rat::zero(), |acc, v| acc + &p.gamma[v] / &p.beta[v])
    };
    let mut worst_neighbor_sum = (0usize, nsum(0));
    for u in 1..g.n() {
        let s = nsum(u);
        if s > worst_neighbor_sum.1 {
            worst_neighbor_sum = (u, s);
        }
    }
    let neighbor_sum_ok = worst_neighbor_sum.1 <= Rat::one();

    Ok(DualConditions {
        positivity_ok,
        min_parameter,
        degree_ratio_ok,
        worst_degree_ratio,
        neighbor_sum_ok,
        worst_neighbor_sum,
    })
}

/// y' = (B + A Gamma)^{-1} 1 together with the exactly verified identities
/// and float spectral diagnostics backing its feasibility.
#[derive(Debug, Clone)]
pub struct DualCertificate {
    pub y_prime: Vec<Rat>,
    /// 1^T y', a lower bound for the LP optimum.
    pub objective: Rat,
    /// 1^T H^{-1} 1 = sum of 1/(beta_u + d_u*gamma_u).
    pub baseline: Rat,
    /// max |(B + A Gamma) y' - 1| recomputed in floats.
    pub residual_max: f64,
    pub conditions: DualConditions,
    /// Spectral radius of B^{-1} A Gamma.
    pub rho_bagamma: f64,
    /// Spectral radius of L Gamma H^{-1}.
    pub rho_lgh: f64,
}

/// B + A Gamma as an exact matrix: diagonal beta_u, entry gamma_v at (u, v)
/// for each edge uv.
fn b_plus_a_gamma(g: &Graph, p: &OccupancyParams) -> RatMatrix {
    let n = g.n();
    let mut m = RatMatrix::zeros(n, n);
    for u in 0..n {
        m.set(u, u, p.beta[u].clone());
        for v in g.neighbors(u) {
            m.set(u, v, p.gamma[v].clone());
        }
    }
    m
}

fn rho_b_inverse_a_gamma(g: &Graph, p: &OccupancyParams) -> Result<f64, LinalgError> {
    let n = g.n();
    let beta: Vec<f64> = p.beta.iter().map(rat_to_f64).collect();
    let gamma: Vec<f64> = p.gamma.iter().map(rat_to_f64).collect();
    // Similarity transform of B^{-1} A Gamma with weights sqrt(beta*gamma):
    // entries A_uv sqrt(gamma_u gamma_v / (beta_u beta_v)), symmetric.
    let s = RealMatrix::from_fn(n, n, |u, v| {
        if g.has_edge(u, v) {
            (gamma[u] * gamma[v] / (beta[u] * beta[v])).sqrt()
        } else {
            0.0
        }
    });
    let spec = symmetric_spectrum(&s)?;
    Ok(spec
        .eigenvalues
        .iter()
        .fold(0.0f64, |acc, e| acc.max(e.abs())))
}

/// The symmetrized series operator M = T^{1/2} L T^{1/2}; its spectrum is
/// that of L Gamma H^{-1}.
fn series_operator(g: &Graph, tau: &[f64]) -> RealMatrix {
    let n = g.n();
    RealMatrix::from_fn(n, n, |u, v| {
        if u == v {
            tau[u] * g.degree(u) as f64
        } else if g.has_edge(u, v) {
            -(tau[u] * tau[v]).sqrt()
        } else {
            0.0
        }
    })
}

pub fn dual_certificate(
    g: &Graph,
    p: &OccupancyParams,
) -> Result<DualCertificate, OccupancyError> {
    let conditions = check_dual_conditions(g, p)?;
    if !conditions.all_ok() {
        return Err(OccupancyError::ConditionsFailed(Box::new(conditions)));
    }
    let m = b_plus_a_gamma(g, p);
    let ones = vec![Rat::one(); g.n()];
    let y_prime = solve_exact(&m, &ones)?;
    // The identity (B + A Gamma) y' = 1 must hold as exact rationals.
    assert_eq!(m.mul_vec(&y_prime)?, ones, "exact solve left a residual");
    if let Some(v) = y_prime.iter().position(|y| y.is_negative()) {
        return Err(OccupancyError::NegativeCertificate { v });
    }
    let objective = y_prime.iter().fold(Rat::zero(), |a, y| a + y);
    let h = p.h_vec(g);
    let baseline = h.iter().fold(Rat::zero(), |a, x| a + x);

    let mf = m.to_f64();
    let yf: Vec<f64> = y_prime.iter().map(rat_to_f64).collect();
    let residual_max = mf
        .matvec(&yf)
        .iter()
        .fold(0.0f64, |acc, r| acc.max((r - 1.0).abs()));

    let rho_bagamma = rho_b_inverse_a_gamma(g, p)?;
    let tau: Vec<f64> = p.tau_vec(g).iter().map(rat_to_f64).collect();
    let spec = symmetric_spectrum(&series_operator(g, &tau))?;
    let rho_lgh = spec
        .eigenvalues
        .iter()
        .fold(0.0f64, |acc, e| acc.max(e.abs()));

    Ok(DualCertificate {
        y_prime,
        objective,
        baseline,
        residual_max,
        conditions,
        rho_bagamma,
        rho_lgh,
    })
}

/// Series terms S_k = 1^T H^{-1} (L Gamma H^{-1})^k 1 and the quantities
/// controlling them.
#[derive(Debug, Clone)]
pub struct SeriesDiagnostics {
    /// S_1..S_K as floats (exact values rounded once).
    pub s_terms: Vec<f64>,
    /// The same terms as exact rationals.
    pub s_terms_exact: Vec<Rat>,
    /// Operator norm of M = T^{1/2} L T^{1/2}; equals the spectral radius
    /// of L Gamma H^{-1}.
    pub m_norm: f64,
    /// Lower estimate for S_1 (mad flavor only): 2 lambda^4 e^{-4C}/(1+C)^8
    /// times the degree disparity energy.
    pub s1_lower_est: Option<f64>,
    /// Upper estimate for |sum of S_k, k >= 2| (mad flavor only).
    pub tail_upper_est: Option<f64>,
    /// Degree disparity energy: sum over edges of (d_u - d_v)^2.
    pub disparity: u64,
    pub h_vec: Vec<f64>,
    pub tau_vec: Vec<f64>,
    /// Exact sum of the computed terms.
    pub partial_sum: Rat,
    /// objective - baseline; the full series sums to this.
    pub certificate_gap: Rat,
    /// Rigorous bound on the discarded tail:
    /// ||M||^{K+1}/(1-||M||) * ||h/sqrt(tau)|| * ||sqrt(tau)||.
    pub geometric_tail_bound: f64,
    /// Largest disagreement between the exact vector iteration and an
    /// independent float matrix-power evaluation.
    pub two_path_max_dev: f64,
}

/// Truncation depth per the adaptive rule: smallest K with
/// m^{K+1}/(1-m) * ||h|| * ||tau|| * n below the series tail tolerance.
fn adaptive_depth(m_norm: f64, h: &[f64], tau: &[f64], n: usize) -> usize {
    let norm2 = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let scale = norm2(h) * norm2(tau) * n as f64;
    let mut k = 1usize;
    while k < 400 {
        let bound = m_norm.powi(k as i32 + 1) / (1.0 - m_norm) * scale;
        if bound < SERIES_TAIL_TOL {
            break;
        }
        k += 1;
    }
    k
}

pub fn series_terms(
    g: &Graph,
    p: &OccupancyParams,
    depth: Option<usize>,
) -> Result<SeriesDiagnostics, OccupancyError> {
    let conditions = check_dual_conditions(g, p)?;
    if !conditions.positivity_ok {
        return Err(OccupancyError::ConditionsFailed(Box::new(conditions)));
    }
    let n = g.n();
    let h = p.h_vec(g);
    let tau = p.tau_vec(g);
    let h_f: Vec<f64> = h.iter().map(rat_to_f64).collect();
    let tau_f: Vec<f64> = tau.iter().map(rat_to_f64).collect();

    let spec = symmetric_spectrum(&series_operator(g, &tau_f))?;
    let m_norm = spec
        .eigenvalues
        .iter()
        .fold(0.0f64, |acc, e| acc.max(e.abs()));
    if m_norm >= 1.0 - VERDICT_TOL {
        return Err(OccupancyError::SpectralRadiusNearOne { rho: m_norm });
    }
    let k_max = depth.unwrap_or_else(|| adaptive_depth(m_norm, &h_f, &tau_f, n));

    // Exact evaluation by vector iteration: v_{k} = L (T v_{k-1}), starting
    // from the all-ones vector; S_k = h^T v_k.
    let mut v = vec![Rat::one(); n];
    let mut s_terms_exact = Vec::with_capacity(k_max);
    for _ in 0..k_max {
        let w: Vec<Rat> = (0..n).map(|u| &tau[u] * &v[u]).collect();
        v = (0..n)
            .map(|u| {
                let deg = Rat::from_integer(g.degree(u).into());
                let nb = g.neighbors(u).fold(Rat::zero(), |acc, x| acc + &w[x]);
                deg * &w[u] - nb
            })
            .collect();
        s_terms_exact.push(h.iter().zip(&v).fold(Rat::zero(), |a, (hi, vi)| a + hi * vi));
    }

    // Independent float path: explicit powers of the matrix L*T.
    let lt = {
        let l = g.laplacian();
        RealMatrix::from_fn(n, n, |u, x| l.get(u, x) * tau_f[x])
    };
    let mut power = RealMatrix::identity(n);
    let mut two_path_max_dev = 0.0f64;
    for s_exact in &s_terms_exact {
        power = power.matmul(&lt);
        let ones = vec![1.0; n];
        let pv = power.matvec(&ones);
        let s_float: f64 = h_f.iter().zip(&pv).map(|(a, b)| a * b).sum();
        two_path_max_dev = two_path_max_dev.max((s_float - rat_to_f64(s_exact)).abs());
    }

    let m = b_plus_a_gamma(g, p);
    let ones = vec![Rat::one(); n];
    let y_prime = solve_exact(&m, &ones)?;
    let objective = y_prime.iter().fold(Rat::zero(), |a, y| a + y);
    let baseline = h.iter().fold(Rat::zero(), |a, x| a + x);
    let certificate_gap = objective - baseline;
    let partial_sum = s_terms_exact.iter().fold(Rat::zero(), |a, s| a + s);

    let norm2 = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let weighted_h: Vec<f64> = h_f
        .iter()
        .zip(&tau_f)
        .map(|(hi, ti)| if *ti > 0.0 { hi / ti.sqrt() } else { 0.0 })
        .collect();
    let sqrt_tau: Vec<f64> = tau_f.iter().map(|t| t.max(0.0).sqrt()).collect();
    let geometric_tail_bound = if m_norm > 0.0 {
        m_norm.powi(k_max as i32 + 1) / (1.0 - m_norm) * norm2(&weighted_h) * norm2(&sqrt_tau)
    } else {
        0.0
    };

    let (s1_lower_est, tail_upper_est) = match p.flavor {
        ParamFlavor::Mad { b, lambda } => {
            let c = c_of_b(b)?;
            let cc = c * (1.0 + c).powf(b);
            let e_d = g.disparity_energy() as f64;
            let s1 = 2.0 * lambda.powi(4) * (-4.0 * cc).exp() / (1.0 + cc).powi(8) * e_d;
            let tail = 2.0
                * lambda.powi(4)
                * (1.0 + c).powf((3.0 * b - 1.0).max(0.0))
                * (2.0 * cc / (1.0 - 2.0 * cc))
                * e_d;
            (Some(s1), Some(tail))
        }
        ParamFlavor::General => (None, None),
    };

    Ok(SeriesDiagnostics {
        s_terms: s_terms_exact.iter().map(rat_to_f64).collect(),
        s_terms_exact,
        m_norm,
        s1_lower_est,
        tail_upper_est,
        disparity: g.disparity_energy(),
        h_vec: h_f,
        tau_vec: tau_f,
        partial_sum,
        certificate_gap,
        geometric_tail_bound,
        two_path_max_dev,
    })
}

/// Values of h, tau and their analytic derivatives at a continuous degree
/// x > 0, for the mad parameter family at (lambda, b). Returns
/// (h, tau, h', tau').
pub fn h_tau_at(lambda: f64, b: f64, x: f64) -> Result<(f64, f64, f64, f64), OccupancyError> {
    let s = (1.0 + lambda).powf(b) * (1.0 + lambda).ln();
    let w = lambert_w(s * x)?;
    let pref = lambda / ((1.0 + lambda) * s);
    let h = pref * w / x;
    let tau = w / (x * (1.0 + w));
    let hp = -pref * w * w / (x * x * (1.0 + w));
    let taup = -w * w * (2.0 + w) / (x * x * (1.0 + w).powi(3));
    Ok((h, tau, hp, taup))
}

#[derive(Debug, Clone)]
pub struct HTauRow {
    pub x: u32,
    pub h: f64,
    pub tau: f64,
    pub h_prime: f64,
    pub tau_prime: f64,
}

#[derive(Debug, Clone)]
pub struct HTauProfile {
    pub rows: Vec<HTauRow>,
    /// The derivative sandwich: each bound pair brackets the negated
    /// derivative strictly at every grid point.
    pub neg_h_prime_lower: f64,
    pub neg_h_prime_upper: f64,
    pub neg_tau_prime_lower: f64,
    pub neg_tau_prime_upper: f64,
    pub bounds_ok: bool,
    pub strictly_decreasing: bool,
}

/// Tabulates h, tau and their derivatives on the integer degree grid
/// 1..=delta and checks the four derivative bounds
/// lambda^2 e^{-2C}/(1+C)^3 < -h' < lambda^2 (1+lambda)^{b-1} and
/// 2 lambda^2 e^{-2C}/(1+C)^5 < -tau' < 2 lambda^2 (1+lambda)^{2b},
/// where C = c(1+c)^b.
pub fn h_tau_profiles(lambda: f64, b: f64, delta: u32) -> Result<HTauProfile, OccupancyError> {
    let c = c_of_b(b)?;
    if delta == 0 {
        return Err(OccupancyError::EmptyDegreeGrid);
    }
    let limit = c / delta as f64;
    if !(lambda > 0.0 && lambda < limit) {
        return Err(OccupancyError::LambdaOutOfRange { lambda, limit });
    }
    let cc = c * (1.0 + c).powf(b);
    let neg_h_prime_lower = lambda * lambda * (-2.0 * cc).exp() / (1.0 + cc).powi(3);
    let neg_h_prime_upper = lambda * lambda * (1.0 + lambda).powf(b - 1.0);
    let neg_tau_prime_lower = 2.0 * lambda * lambda * (-2.0 * cc).exp() / (1.0 + cc).powi(5);
    let neg_tau_prime_upper = 2.0 * lambda * lambda * (1.0 + lambda).powf(2.0 * b);

    let mut rows = Vec::with_capacity(delta as usize);
    for x in 1..=delta {
        let (h, tau, h_prime, tau_prime) = h_tau_at(lambda, b, x as f64)?;
        rows.push(HTauRow {
            x,
            h,
            tau,
            h_prime,
            tau_prime,
        });
    }
    let bounds_ok = rows.iter().all(|r| {
        neg_h_prime_lower < -r.h_prime
            && -r.h_prime < neg_h_prime_upper
            && neg_tau_prime_lower < -r.tau_prime
            && -r.tau_prime < neg_tau_prime_upper
    });
    let strictly_decreasing = rows
        .windows(2)
        .all(|w| w[1].h < w[0].h && w[1].tau < w[0].tau);

    Ok(HTauProfile {
        rows,
        neg_h_prime_lower,
        neg_h_prime_upper,
        neg_tau_prime_lower,
        neg_tau_prime_upper,
        bounds_ok,
        strictly_decreasing,
    })
}

/// Sum over vertices of lambda_u/(1 + (d_u+1) lambda_u), exact. Valid to
/// evaluate for any nonnegative fugacity; it lower-bounds the expected
/// independent-set size when every lambda_u < 1/Delta.
pub fn thm1_bound(g: &Graph, lambda: &Fugacity) -> Result<Rat, OccupancyError> {
    if lambda.len() != g.n() {
        return Err(OccupancyError::LengthMismatch {
            got: lambda.len(),
            want: g.n(),
        });
    }
    let mut total = Rat::zero();
    for u in 0..g.n() {
        let lam = lambda.get(u);
        let den = Rat::one() + Rat::from_integer((g.degree(u) + 1).into()) * lam;
        total += lam / den;
    }
    Ok(total)
}

#[derive(Debug, Clone)]
pub struct Thm2Bound {
    pub value: f64,
    /// Per-vertex terms 1/(beta_u + d_u gamma_u) on the working graph.
    pub per_vertex: Vec<f64>,
    /// Original indices of isolated vertices removed before evaluation.
    pub stripped: Vec<usize>,
    /// Working graph (isolated vertices removed) and its parameters; None
    /// when every vertex was isolated, in which case the bound is 0.
    pub working: Option<(Graph, OccupancyParams)>,
}

/// Expected-size lower bound for graphs of bounded neighborhood mad:
/// sum over non-isolated vertices of 1/(beta_u + d_u gamma_u) with the mad
/// parameter family. Isolated vertices contribute nothing and are stripped.
pub fn thm2_bound(g: &Graph, lambda: f64, b: f64) -> Result<Thm2Bound, OccupancyError> {
    let keep: Vec<usize> = (0..g.n()).filter(|&u| g.degree(u) > 0).collect();
    let stripped: Vec<usize> = (0..g.n()).filter(|&u| g.degree(u) == 0).collect();
    if keep.is_empty() {
        return Ok(Thm2Bound {
            value: 0.0,
            per_vertex: Vec::new(),
            stripped,
            working: None,
        });
    }
    let sub = g.induced(&keep)?;
    let b_rat = rat_from_f64(b).ok_or(SpecialError::InvalidB(b))?;
    for (i, mad) in sub.neighborhood_mad_profile()?.iter().enumerate() {
        if *mad > b_rat {
            return Err(OccupancyError::LocalMadTooLarge {
                v: keep[i],
                mad: fmt_rat(mad),
                b,
            });
        }
    }
    let params = mad_params(&sub, lambda, b)?;
    let per_vertex: Vec<f64> = params.h_vec(&sub).iter().map(rat_to_f64).collect();
    let value = per_vertex.iter().sum();
    Ok(Thm2Bound {
        value,
        per_vertex,
        stripped,
        working: Some((sub, params)),
    })
}

/// Free-energy form of the degree-based bound: sum over vertices of
/// ln(1 + (d_u+1) lambda_u)/(d_u+1). This is the closed form of the
/// straight-line integral of thm1_bound from 0 to lambda.
pub fn logz_bound_thm1(g: &Graph, lambda: &Fugacity) -> Result<f64, OccupancyError> {
    if lambda.len() != g.n() {
        return Err(OccupancyError::LengthMismatch {
            got: lambda.len(),
            want: g.n(),
        });
    }
    let mut total = 0.0f64;
    for u in 0..g.n() {
        let d1 = g.degree(u) + 1;
        let inner = Rat::one() + Rat::from_integer(d1.into()) * lambda.get(u);
        total += ln_rat(&inner) / d1 as f64;
    }
    Ok(total)
}

/// Free-energy lower bound for triangle-free graphs at uniform lambda:
/// sum over vertices of (W(d_u ln(1+lambda))^2 + 2 W(d_u ln(1+lambda)))
/// / (2 d_u). Isolated vertices contribute the d -> 0 limit ln(1+lambda),
/// which is also exactly their log partition function.
pub fn logz_bound_trianglefree(g: &Graph, lambda: f64) -> Result<f64, OccupancyError> {
    if !g.is_triangle_free() {
        return Err(OccupancyError::NotTriangleFree);
    }
    let delta = g.max_degree();
    if delta > 0 {
        let limit = c_of_b(0.0)? / delta as f64;
        if !(lambda > 0.0 && lambda < limit) {
            return Err(OccupancyError::LambdaOutOfRange { lambda, limit });
        }
    } else if lambda <= 0.0 {
        return Err(OccupancyError::LambdaOutOfRange {
            lambda,
            limit: f64::INFINITY,
        });
    }
    let t = (1.0 + lambda).ln();
    let mut total = 0.0f64;
    for u in 0..g.n() {
        let d = g.degree(u);
        if d == 0 {
            total += t;
        } else {
            let w = lambert_w(d as f64 * t)?;
            total += (w * w + 2.0 * w) / (2.0 * d as f64);
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::hardcore::expected_size;
    use crate::rat::{rat, rat_int};
    use crate::tol::DEFAULT_ENUM_CAP;

    const CAP: usize = DEFAULT_ENUM_CAP;

    fn star2() -> Graph {
        Graph::new(3, &[(0, 1), (0, 2)]).unwrap()
    }

    fn uniform(n: usize, num: i64, den: i64) -> Fugacity {
        Fugacity::uniform(n, rat(num, den)).unwrap()
    }

    #[test]
    fn general_params_formulas() {
        let p = general_params(&uniform(3, 1, 1)).unwrap();
        assert!(p.beta.iter().all(|b| *b == rat_int(2)));
        assert!(p.gamma.iter().all(|g| *g == rat_int(1)));
        let p = general_params(&uniform(2, 7, 5)).unwrap();
        assert!(p.beta.iter().all(|b| *b == rat(12, 7)));
        let p = general_params(&uniform(2, 1, 4)).unwrap();
        assert!(p.beta.iter().all(|b| *b == rat_int(5)));
        assert!(matches!(
            general_params(&Fugacity::per_vertex(vec![rat_int(1), rat_int(0)]).unwrap()),
            Err(OccupancyError::NonpositiveFugacity { v: 1 })
        ));
    }

    #[test]
    fn mad_params_regression_and_structure() {
        // Cubic graph at lambda = 0.03, b = 0: frozen reference values for
        // beta and gamma computed with 30-digit interval arithmetic.
        let k4 = families::complete(4).unwrap();
        let p = mad_params(&k4, 0.03, 0.0).unwrap();
        let beta = rat_to_f64(&p.beta[0]);
        let gamma = rat_to_f64(&p.gamma[0]);
        assert!((beta - 34.4422562715240406).abs() <= 1e-10, "beta = {beta}");
        assert!((gamma - 0.9381854597262648).abs() <= 1e-12, "gamma = {gamma}");
        // Regular graph: constant parameters.
        assert!(p.beta.iter().all(|b| b == &p.beta[0]));
        assert!(p.gamma.iter().all(|g| g == &p.gamma[0]));
        // b = 0 collapse: gamma/beta = W(D)/d.
        let ratio = gamma / beta;
        let d_big = 3.0 * (1.03f64).ln();
        let w = lambert_w(d_big).unwrap();
        assert!((ratio - w / 3.0).abs() <= 1e-14);
    }

    #[test]
    fn mad_params_preconditions() {
        let k4 = families::complete(4).unwrap();
        // c(0)/3 is about 0.0365; anything at or above is rejected.
        assert!(matches!(
            mad_params(&k4, 0.04, 0.0),
            Err(OccupancyError::LambdaOutOfRange { .. })
        ));
        assert!(matches!(
            mad_params(&k4, 0.0, 0.0),
            Err(OccupancyError::LambdaOutOfRange { .. })
        ));
        assert!(mad_params(&k4, 0.03, 0.5).is_err());
        let with_isolated = Graph::new(3, &[(0, 1)]).unwrap();
        assert!(matches!(
            mad_params(&with_isolated, 0.01, 0.0),
            Err(OccupancyError::Graph(GraphError::IsolatedVertex { v: 2 }))
        ));
    }

    #[test]
    fn local_occupancy_equalities_and_slack() {
        // K2 at lambda = 1: both rows exactly 1 (closed neighborhood is a
        // clique, so the inequality is tight).
        let k2 = families::complete(2).unwrap();
        let p = general_params(&uniform(2, 1, 1)).unwrap();
        let rep = verify_local_occupancy(&k2, &p, CAP).unwrap();
        assert!(rep.all_ok);
        assert!(rep.rows.iter().all(|r| r.value == Rat::one()));

        let k3 = families::complete(3).unwrap();
        let p = general_params(&uniform(3, 1, 1)).unwrap();
        let rep = verify_local_occupancy(&k3, &p, CAP).unwrap();
        assert!(rep.rows.iter().all(|r| r.value == Rat::one()));

        // Star center at lambda = 7/5: strict slack 228/179.
        let p = general_params(&uniform(3, 7, 5)).unwrap();
        let rep = verify_local_occupancy(&star2(), &p, CAP).unwrap();
        assert_eq!(rep.rows[0].value, rat(228, 179));
        assert!(rep.all_ok);
    }

    #[test]
    fn dual_conditions_boundary() {
        let k2 = families::complete(2).unwrap();
        let p = OccupancyParams {
            beta: vec![rat_int(1); 2],
            gamma: vec![rat_int(1); 2],
            lambda: uniform(2, 1, 1),
            flavor: ParamFlavor::General,
        };
        let c = check_dual_conditions(&k2, &p).unwrap();
        assert!(c.positivity_ok);
        assert!(!c.degree_ratio_ok, "d*gamma/beta = 1 must fail strictness");
        assert_eq!(c.worst_degree_ratio.1, Rat::one());
        assert!(!c.all_ok());
    }

    #[test]
    fn dual_conditions_pass_below_inverse_delta() {
        for g in families::connected_graphs(5).unwrap() {
            let delta = g.max_degree() as i64;
            let lam = Fugacity::uniform(g.n(), rat(9, 10 * delta)).unwrap();
            let p = general_params(&lam).unwrap();
            let c = check_dual_conditions(&g, &p).unwrap();
            assert!(c.all_ok(), "failed on {:?}", g.edges());
        }
    }

    #[test]
    fn dual_certificate_star_at_quarter() {
        let p = general_params(&uniform(3, 1, 4)).unwrap();
        let cert = dual_certificate(&star2(), &p).unwrap();
        assert_eq!(cert.y_prime, vec![rat(3, 23), rat(4, 23), rat(4, 23)]);
        assert_eq!(cert.objective, rat(11, 23));
        assert_eq!(cert.baseline, rat(10, 21));
        assert!(cert.objective >= cert.baseline);
        assert!(cert.residual_max <= 1e-9);
        // rho(B^{-1} A Gamma) = sqrt(2)/5 for the star with beta = 5.
        assert!((cert.rho_bagamma - 2.0f64.sqrt() / 5.0).abs() <= 1e-10);
        // rho(L Gamma H^{-1}) = 19/42.
        assert!((cert.rho_lgh - 19.0 / 42.0).abs() <= 1e-10);
    }

    #[test]
    fn dual_certificate_regular_graph_hits_baseline() {
        let k2 = families::complete(2).unwrap();
        let p = general_params(&uniform(2, 1, 2)).unwrap(); // beta = 3
        let cert = dual_certificate(&k2, &p).unwrap();
        assert_eq!(cert.y_prime, vec![rat(1, 4), rat(1, 4)]);
        assert_eq!(cert.objective, cert.baseline);
        assert!((cert.rho_bagamma - 1.0 / 3.0).abs() <= 1e-12);
    }

    #[test]
    fn dual_certificate_rejects_failed_conditions() {
        // Star at lambda = 7/5: center degree ratio 2/(12/7) = 7/6 > 1.
        let p = general_params(&uniform(3, 7, 5)).unwrap();
        assert!(matches!(
            dual_certificate(&star2(), &p),
            Err(OccupancyError::ConditionsFailed(_))
        ));
    }

    #[test]
    fn series_vanishes_on_regular_graphs() {
        let c4 = families::cycle(4).unwrap();
        let p = general_params(&uniform(4, 1, 4)).unwrap();
        let d = series_terms(&c4, &p, Some(6)).unwrap();
        assert!(d.s_terms_exact.iter().all(|s| s.is_zero()));
        assert_eq!(d.partial_sum, Rat::zero());
        assert_eq!(d.certificate_gap, Rat::zero());
        assert_eq!(d.disparity, 0);
    }

    #[test]
    fn series_star_first_term_and_gap() {
        let p = general_params(&uniform(3, 1, 4)).unwrap();
        let d = series_terms(&star2(), &p, None).unwrap();
        // S_1 = sum over edges of (h_u - h_v)(tau_u - tau_v) = 2*(1/6-1/7)^2.
        assert_eq!(d.s_terms_exact[0], rat(1, 882));
        assert_eq!(d.certificate_gap, rat(11, 23) - rat(10, 21));
        assert!((d.m_norm - 19.0 / 42.0).abs() <= 1e-10);
        assert!(d.two_path_max_dev <= 1e-9);
        // Partial sum approaches the gap to within the reported tail bound.
        let miss = rat_to_f64(&(&d.certificate_gap - &d.partial_sum)).abs();
        assert!(miss <= d.geometric_tail_bound + 1e-15, "miss = {miss:e}");
        assert!(d.geometric_tail_bound < 1e-10);
    }

    #[test]
    fn series_matches_edgewise_formula() {
        // S_1 = sum over edges (h_u - h_v)(tau_u - tau_v) on a non-regular
        // graph with per-vertex fugacities.
        let g = Graph::new(4, &[(0, 1), (1, 2), (2, 3), (0, 2)]).unwrap();
        let lam =
            Fugacity::per_vertex(vec![rat(1, 5), rat(1, 7), rat(2, 9), rat(1, 8)]).unwrap();
        let p = general_params(&lam).unwrap();
        let d = series_terms(&g, &p, Some(3)).unwrap();
        let h = p.h_vec(&g);
        let tau = p.tau_vec(&g);
        let mut s1 = Rat::zero();
        for &(u, v) in g.edges() {
            let (u, v) = (u as usize, v as usize);
            s1 += (&h[u] - &h[v]) * (&tau[u] - &tau[v]);
        }
        assert_eq!(d.s_terms_exact[0], s1);
    }

    #[test]
    fn neumann_identity_for_certificate() {
        // (I - L Gamma H^{-1})(H y') = 1 exactly, tying the series operator
        // to the dual certificate.
        let p = general_params(&uniform(3, 1, 4)).unwrap();
        let g = star2();
        let cert = dual_certificate(&g, &p).unwrap();
        let h = p.h_vec(&g);
        let hy: Vec<Rat> = cert
            .y_prime
            .iter()
            .zip(&h)
            .map(|(y, hi)| y / hi)
            .collect();
        assert_eq!(hy, vec![rat(21, 23), rat(24, 23), rat(24, 23)]);
        let tau = p.tau_vec(&g);
        // Compute (I - LT) hy.
        let t_hy: Vec<Rat> = (0..3).map(|u| &tau[u] * &hy[u]).collect();
        let lt_hy: Vec<Rat> = (0..3)
            .map(|u| {
                let deg = Rat::from_integer(g.degree(u).into());
                deg * &t_hy[u] - g.neighbors(u).fold(Rat::zero(), |a, x| a + &t_hy[x])
            })
            .collect();
        for u in 0..3 {
            assert_eq!(&hy[u] - &lt_hy[u], Rat::one());
        }
    }

    #[test]
    fn h_tau_profile_bounds_and_monotonicity() {
        let prof = h_tau_profiles(0.03, 0.0, 3).unwrap();
        assert!(prof.bounds_ok);
        assert!(prof.strictly_decreasing);
        // h(3) agrees with 1/(beta + 3 gamma) from the parameter family.
        let k4 = families::complete(4).unwrap();
        let p = mad_params(&k4, 0.03, 0.0).unwrap();
        let h3 = rat_to_f64(&p.h_vec(&k4)[0]);
        assert!((prof.rows[2].h - h3).abs() <= 1e-15);
        assert!(matches!(
            h_tau_profiles(0.2, 0.0, 3),
            Err(OccupancyError::LambdaOutOfRange { .. })
        ));
        assert!(matches!(
            h_tau_profiles(0.03, 0.0, 0),
            Err(OccupancyError::EmptyDegreeGrid)
        ));
    }

    #[test]
    fn h_tau_derivatives_match_finite_differences() {
        for &(lambda, b, x) in &[(0.03, 0.0, 2.0), (0.02, 1.0, 3.0), (0.01, 2.0, 1.5)] {
            let (_, _, hp, taup) = h_tau_at(lambda, b, x).unwrap();
            let eps = 1e-6;
            let (h_plus, tau_plus, _, _) = h_tau_at(lambda, b, x + eps).unwrap();
            let (h_minus, tau_minus, _, _) = h_tau_at(lambda, b, x - eps).unwrap();
            let hp_fd = (h_plus - h_minus) / (2.0 * eps);
            let taup_fd = (tau_plus - tau_minus) / (2.0 * eps);
            assert!((hp - hp_fd).abs() <= 1e-6 * hp.abs(), "h' at {x}");
            assert!((taup - taup_fd).abs() <= 1e-6 * taup.abs(), "tau' at {x}");
        }
    }

    #[test]
    fn thm1_bound_values() {
        assert_eq!(
            thm1_bound(&star2(), &uniform(3, 7, 5)).unwrap(),
            rat(497, 494)
        );
        // Cliques: bound equals the exact expected size for any lambda.
        for n in 2..=4 {
            let g = families::complete(n).unwrap();
            for lam in [rat(1, 3), rat(7, 5), rat_int(3)] {
                let f = Fugacity::uniform(n, lam).unwrap();
                assert_eq!(
                    thm1_bound(&g, &f).unwrap(),
                    expected_size(&g, &f, CAP).unwrap()
                );
            }
        }
        let zero = Fugacity::uniform(3, rat_int(0)).unwrap();
        assert_eq!(thm1_bound(&star2(), &zero).unwrap(), Rat::zero());
    }

    #[test]
    fn thm2_bound_on_pentagon() {
        let c5 = families::cycle(5).unwrap();
        let b = thm2_bound(&c5, 0.05, 0.0).unwrap();
        assert!((b.value - 0.217766202965891).abs() <= 1e-12, "value = {}", b.value);
        // Exact expected size 22/101 dominates the bound.
        let exact = expected_size(&c5, &uniform(5, 1, 20), CAP).unwrap();
        assert_eq!(exact, rat(22, 101));
        assert!(b.value <= rat_to_f64(&exact) + 1e-9);
        // d-regular collapse: n * (lambda/((1+lambda)s)) * W(d ln(1+lambda))/d.
        let s = (1.05f64).ln();
        let w = lambert_w(2.0 * s).unwrap();
        let collapsed = 5.0 * (0.05 / (1.05 * s)) * w / 2.0;
        assert!((b.value - collapsed).abs() <= 1e-13);
    }

    #[test]
    fn thm2_bound_strips_isolated_and_checks_mad() {
        let g = Graph::new(4, &[(0, 1), (1, 2)]).unwrap();
        let b = thm2_bound(&g, 0.04, 0.0).unwrap();
        assert_eq!(b.stripped, vec![3]);
        let p3 = families::path(3).unwrap();
        let direct = thm2_bound(&p3, 0.04, 0.0).unwrap();
        assert!((b.value - direct.value).abs() <= 1e-15);

        // Triangles force neighborhood mad 1 > 0.
        let k3 = families::complete(3).unwrap();
        assert!(matches!(
            thm2_bound(&k3, 0.03, 0.0),
            Err(OccupancyError::LocalMadTooLarge { .. })
        ));
        // All-isolated graph: empty bound.
        let iso = Graph::new(2, &[]).unwrap();
        let b = thm2_bound(&iso, 0.3, 0.0).unwrap();
        assert_eq!(b.value, 0.0);
        assert!(b.working.is_none());
    }

    #[test]
    fn thm2_small_lambda_ratio_approaches_one() {
        // As lambda -> 0, bound/(n*lambda) -> 1 since W(x) ~ x.
        let c5 = families::cycle(5).unwrap();
        for &lambda in &[1e-4, 1e-6] {
            let b = thm2_bound(&c5, lambda, 0.0).unwrap();
            let ratio = b.value / (5.0 * lambda);
            assert!((ratio - 1.0).abs() <= 40.0 * lambda, "ratio = {ratio}");
        }
    }

    #[test]
    fn logz_thm1_tight_on_cliques_and_singletons() {
        let one = Graph::new(1, &[]).unwrap();
        let lam1 = Fugacity::uniform(1, rat_int(1)).unwrap();
        let b = logz_bound_thm1(&one, &lam1).unwrap();
        assert!((b - 2.0f64.ln()).abs() <= 1e-15);

        for n in 2..=4 {
            let g = families::complete(n).unwrap();
            let lam = Fugacity::uniform(n, rat(2, 5)).unwrap();
            let bound = logz_bound_thm1(&g, &lam).unwrap();
            let logz = hardcore::log_partition(&g, &lam, CAP).unwrap();
            assert!((bound - logz).abs() <= 1e-12, "n = {n}");
        }

        // Strict on the star.
        let lam = uniform(3, 1, 4);
        let bound = logz_bound_thm1(&star2(), &lam).unwrap();
        let logz = hardcore::log_partition(&star2(), &lam, CAP).unwrap();
        assert!(bound <= logz + 1e-12);
        assert!(bound < logz);
    }

    #[test]
    fn logz_trianglefree_values() {
        let c5 = families::cycle(5).unwrap();
        let b = logz_bound_trianglefree(&c5, 0.05).unwrap();
        assert!((b - 0.233078494386237).abs() <= 1e-12, "b = {b}");
        let logz = hardcore::log_partition(&c5, &uniform(5, 1, 20), CAP).unwrap();
        assert!((logz - 0.233093882167378).abs() <= 1e-12);
        assert!(b <= logz + 1e-9);

        // Single vertex: bound equals log Z = ln(1+lambda) exactly.
        let one = Graph::new(1, &[]).unwrap();
        let b = logz_bound_trianglefree(&one, 0.5).unwrap();
        assert!((b - 1.5f64.ln()).abs() <= 1e-15);

        assert!(matches!(
            logz_bound_trianglefree(&families::complete(3).unwrap(), 0.01),
            Err(OccupancyError::NotTriangleFree)
        ));
        assert!(matches!(
            logz_bound_trianglefree(&c5, 0.9),
            Err(OccupancyError::LambdaOutOfRange { .. })
        ));
    }

    #[test]
    fn logz_trianglefree_derivative_matches_h() {
        // d/dlambda of the per-vertex term equals h(d)/lambda at b = 0.
        let d = 3.0;
        let lambda = 0.02;
        let eps = 1e-7;
        let term = |lam: f64| {
            let w = lambert_w(d * (1.0 + lam).ln()).unwrap();
            (w * w + 2.0 * w) / (2.0 * d)
        };
        let fd = (term(lambda + eps) - term(lambda - eps)) / (2.0 * eps);
        let (h, _, _, _) = h_tau_at(lambda, 0.0, d).unwrap();
        assert!((fd - h / lambda).abs() <= 1e-6 * (h / lambda));
    }
}
