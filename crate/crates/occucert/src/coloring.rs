//! Constructive membership certificates for the independence polytope: an
//! event-driven weight process that, given a feasible demand vector q,
//! builds a fractional coloring whose per-vertex mass meets q.
//!
//! Each phase runs the exact hard-core distribution on the subgraph induced
//! by the active vertices; weights grow linearly until some active vertex
//! reaches its demand, at which point every such vertex deactivates.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::graph::{Graph, GraphError};
use crate::hardcore::{self, Fugacity, HardcoreError};
use crate::occupancy::{self, OccupancyError, OccupancyParams, ParamFlavor};
use crate::rat::{fmt_rat, Rat};

#[derive(Debug, Error)]
pub enum ColoringError {
    #[error("demand vector has {got} entries, graph has {want} vertices")]
    LengthMismatch { got: usize, want: usize },
    #[error("demand q[{v}] is negative")]
    NegativeDemand { v: usize },
    #[error("demand infeasible: row {v} evaluates to {value} > 1")]
    InfeasibleDemand { v: usize, value: String },
    #[error("fugacity at vertex {v} must be strictly positive for the weight process")]
    NonpositiveFugacity { v: usize },
    #[error("phase {phase}: induced subgraph fails local occupancy at vertex {vertex}")]
    LocalOccupancyFailed { phase: usize, vertex: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Hardcore(#[from] HardcoreError),
    #[error(transparent)]
    Occupancy(#[from] OccupancyError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DemandVector {
    q: Vec<Rat>,
}

impl DemandVector {
    pub fn new(q: Vec<Rat>) -> Result<Self, ColoringError> {
        if let Some(v) = q.iter().position(|x| x.is_negative()) {
            return Err(ColoringError::NegativeDemand { v });
        }
        Ok(DemandVector { q })
    }

    pub fn uniform(n: usize, q: Rat) -> Result<Self, ColoringError> {
        DemandVector::new(vec![q; n])
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    pub fn get(&self, v: usize) -> &Rat {
        &self.q[v]
    }

    pub fn values(&self) -> &[Rat] {
        &self.q
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DemandRow {
    pub vertex: usize,
    /// beta_u q_u + gamma_u sum over N(u) of q_v, exact.
    pub value: Rat,
    /// 1 - value; nonnegative iff the row is feasible.
    pub slack: Rat,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DemandCheck {
    pub rows: Vec<DemandRow>,
    pub feasible: bool,
}

/// Exact per-vertex evaluation of (B + Gamma A) q <= 1. Infeasibility is a
/// result, not an error.
pub fn check_demand(
    g: &Graph,
    p: &OccupancyParams,
    q: &DemandVector,
) -> Result<DemandCheck, ColoringError> {
    let n = g.n();
    if p.n() != n || q.len() != n {
        return Err(ColoringError::LengthMismatch {
            got: if p.n() != n { p.n() } else { q.len() },
            want: n,
        });
    }
    let rows: Vec<DemandRow> = (0..n)
        .map(|u| {
            let neighbor_sum = g.neighbors(u).fold(Rat::zero(), |a, v| a + q.get(v));
            let value = &p.beta[u] * q.get(u) + &p.gamma[u] * neighbor_sum;
            let slack = Rat::one() - &value;
            let ok = !slack.is_negative();
            DemandRow {
                vertex: u,
                value,
                slack,
                ok,
            }
        })
        .collect();
    let feasible = rows.iter().all(|r| r.ok);
    Ok(DemandCheck { rows, feasible })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FractionalColoring {
    /// Accumulated weight per independent set (vertex bitmask of the host
    /// graph) at the stopping time; no padding applied.
    pub weights: BTreeMap<u64, Rat>,
    /// t_0 = 0 followed by each phase end, strictly increasing.
    pub breakpoints: Vec<Rat>,
    /// T_u: when vertex u left the active set; 0 for vertices that never
    /// activated.
    pub hit_times: Vec<Rat>,
    /// w(G) at stop; equals the final breakpoint.
    pub total_mass: Rat,
    pub phases: usize,
    /// All hit times at most 1, so padding the empty set turns the weights
    /// into a probability distribution meeting the demands.
    pub certifying: bool,
}

impl FractionalColoring {
    /// The weights extended to a probability distribution: the empty set
    /// absorbs 1 - total_mass. Returned unpadded when total_mass > 1.
    pub fn distribution(&self) -> Vec<(u64, Rat)> {
        let mut out: BTreeMap<u64, Rat> = self.weights.clone();
        let pad = Rat::one() - &self.total_mass;
        if !pad.is_negative() {
            *out.entry(0).or_insert_with(Rat::zero) += pad;
        }
        out.into_iter().collect()
    }

    /// Per-vertex mass of the padded distribution (padding only touches the
    /// empty set, so this is the raw per-vertex weight sum).
    pub fn marginals(&self, n: usize) -> Vec<Rat> {
        let mut m = vec![Rat::zero(); n];
        for (mask, w) in &self.weights {
            let mut bits = *mask;
            while bits != 0 {
                let v = bits.trailing_zeros() as usize;
                m[v] += w;
                bits &= bits - 1;
            }
        }
        m
    }
}

/// Runs the weight process to completion. `strict` re-verifies the local
/// occupancy inequality on every induced subgraph actually visited.
pub fn run_demand_process(
    g: &Graph,
    p: &OccupancyParams,
    q: &DemandVector,
    cap: usize,
    strict: bool,
) -> Result<FractionalColoring, ColoringError> {
    let n = g.n();
    let check = check_demand(g, p, q)?;
    if let Some(row) = check.rows.iter().find(|r| !r.ok) {
        return Err(ColoringError::InfeasibleDemand {
            v: row.vertex,
            value: fmt_rat(&row.value),
        });
    }
    for (v, lam) in p.lambda.iter().enumerate() {
        if !lam.is_positive() {
            return Err(ColoringError::NonpositiveFugacity { v });
        }
    }

    let mut active: Vec<usize> = (0..n).filter(|&v| q.get(v).is_positive()).collect();
    let mut vertex_weight = vec![Rat::zero(); n];
    let mut hit_times = vec![Rat::zero(); n];
    let mut weights: BTreeMap<u64, Rat> = BTreeMap::new();
    let mut breakpoints = vec![Rat::zero()];
    let mut now = Rat::zero();
    let mut phases = 0usize;

    while !active.is_empty() {
        phases += 1;
        assert!(phases <= n, "each phase deactivates at least one vertex");
        let sub = g.induced(&active)?;
        let lam_sub = Fugacity::per_vertex(
            active.iter().map(|&v| p.lambda.get(v).clone()).collect(),
        )?;
        if strict {
            let p_sub = OccupancyParams {
                beta: active.iter().map(|&v| p.beta[v].clone()).collect(),
                gamma: active.iter().map(|&v| p.gamma[v].clone()).collect(),
                lambda: lam_sub.clone(),
                flavor: ParamFlavor::General,
            };
            let report = occupancy::verify_local_occupancy(&sub, &p_sub, cap)?;
            if let Some(row) = report.rows.iter().find(|r| !r.ok) {
                return Err(ColoringError::LocalOccupancyFailed {
                    phase: phases,
                    vertex: active[row.vertex],
                });
            }
        }
        let dist = hardcore::hardcore_distribution(&sub, &lam_sub, cap)?;
        let rates = hardcore::marginals(&sub, &lam_sub, cap)?;

        let mut dt: Option<Rat> = None;
        for (i, &v) in active.iter().enumerate() {
            let need = (q.get(v) - &vertex_weight[v]) / &rates[i];
            if dt.as_ref().map_or(true, |d| need < *d) {
                dt = Some(need);
            }
        }
        let dt = dt.expect("active set is nonempty");

        let mut phase_gain = Rat::zero();
        for (mask_sub, prob) in &dist {
            let mut lifted = 0u64;
            let mut bits = *mask_sub;
            while bits != 0 {
                let i = bits.trailing_zeros() as usize;
                lifted |= 1u64 << active[i];
                bits &= bits - 1;
            }
            let gain = &dt * prob;
            phase_gain += &gain;
            *weights.entry(lifted).or_insert_with(Rat::zero) += gain;
        }
        // dw(G)/dt = 1: the distribution sums to one, so the mass gained in
        // a phase equals its length.
        assert_eq!(phase_gain, dt, "phase mass must equal phase length");

        for (i, &v) in active.iter().enumerate() {
            vertex_weight[v] += &dt * &rates[i];
        }
        now += &dt;
        breakpoints.push(now.clone());

        let mut staying = Vec::with_capacity(active.len());
        let mut deactivated = 0usize;
        for &v in &active {
            if vertex_weight[v] == *q.get(v) {
                hit_times[v] = now.clone();
                deactivated += 1;
            } else {
                staying.push(v);
            }
        }
        assert!(deactivated > 0, "the minimizing vertex reaches its demand");
        active = staying;
    }

    let total_mass = weights.values().fold(Rat::zero(), |a, w| a + w);
    let certifying = hit_times.iter().all(|t| *t <= Rat::one());
    Ok(FractionalColoring {
        weights,
        breakpoints,
        hit_times,
        total_mass,
        phases,
        certifying,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MembershipVerdict {
    pub support_independent: bool,
    /// First weighted set that is not independent, if any.
    pub bad_set: Option<u64>,
    pub masses_nonnegative: bool,
    pub bad_mass: Option<u64>,
    /// Recorded total matches the weights and is at most 1, so the padded
    /// distribution sums to exactly 1.
    pub total_mass_ok: bool,
    /// Every T_u <= 1.
    pub hit_times_ok: bool,
    /// Padded per-vertex mass covers the demand exactly.
    pub marginals_ok: bool,
    pub bad_marginal: Option<usize>,
    /// Integrated hit-time bound T_u <= beta_u q_u + gamma_u sum_{N(u)} q_v.
    pub tubound_ok: bool,
    /// Per-vertex form T_u <= (beta_u + d_u gamma_u) q_u. Sound for constant
    /// demands; can fail for non-constant q even on certifying runs.
    pub remark_bound_ok: bool,
    pub remark_violations: Vec<usize>,
    /// The verdict that q lies in the independence polytope: independent
    /// support, nonnegative masses, unit total, hit times and marginals ok.
    pub certifying: bool,
}

fn is_independent(g: &Graph, mask: u64) -> bool {
    let mut bits = mask;
    while bits != 0 {
        let v = bits.trailing_zeros() as usize;
        if v >= g.n() || g.adj_mask(v) & mask != 0 {
            return false;
        }
        bits &= bits - 1;
    }
    true
}

/// Exact audit of a finished run against its demand vector.
pub fn verify_membership(
    g: &Graph,
    p: &OccupancyParams,
    fc: &FractionalColoring,
    q: &DemandVector,
) -> Result<MembershipVerdict, ColoringError> {
    let n = g.n();
    if p.n() != n || q.len() != n || fc.hit_times.len() != n {
        return Err(ColoringError::LengthMismatch {
            got: if p.n() != n {
                p.n()
            } else if q.len() != n {
                q.len()
            } else {
                fc.hit_times.len()
            },
            want: n,
        });
    }

    let mut bad_set = None;
    let mut bad_mass = None;
    for (mask, w) in &fc.weights {
        if bad_set.is_none() && !is_independent(g, *mask) {
            bad_set = Some(*mask);
        }
        if bad_mass.is_none() && w.is_negative() {
            bad_mass = Some(*mask);
        }
    }
    let support_independent = bad_set.is_none();
    let masses_nonnegative = bad_mass.is_none();

    let recomputed = fc.weights.values().fold(Rat::zero(), |a, w| a + w);
    let total_mass_ok = recomputed == fc.total_mass && fc.total_mass <= Rat::one();

    let hit_times_ok = fc.hit_times.iter().all(|t| *t <= Rat::one());

    let marginals = fc.marginals(n);
    let bad_marginal = (0..n).find(|&v| marginals[v] < *q.get(v));
    let marginals_ok = bad_marginal.is_none();

    let mut tubound_ok = true;
    let mut remark_violations = Vec::new();
    for u in 0..n {
        let neighbor_sum = g.neighbors(u).fold(Rat::zero(), |a, v| a + q.get(v));
        let integrated = &p.beta[u] * q.get(u) + &p.gamma[u] * neighbor_sum;
        if fc.hit_times[u] > integrated {
            tubound_ok = false;
        }
        let per_vertex =
            (&p.beta[u] + Rat::from_integer(g.degree(u).into()) * &p.gamma[u]) * q.get(u);
        if fc.hit_times[u] > per_vertex {
            remark_violations.push(u);
        }
    }
    let remark_bound_ok = remark_violations.is_empty();

    let certifying = support_independent
        && masses_nonnegative
        && total_mass_ok
        && hit_times_ok
        && marginals_ok;

    Ok(MembershipVerdict {
        support_independent,
        bad_set,
        masses_nonnegative,
        bad_mass,
        total_mass_ok,
        hit_times_ok,
        marginals_ok,
        bad_marginal,
        tubound_ok,
        remark_bound_ok,
        remark_violations,
        certifying,
    })
}
