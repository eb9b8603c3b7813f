//! Exact brute-force solver for the vertex program
//! min 1^T x subject to (B + Gamma A) x >= 1, x >= 0,
//! by enumerating basic solutions: every choice of tight rows R and free
//! coordinates C with |R| = |C| gives at most one candidate vertex.
//!
//! The fast path scales each row to integers and runs fraction-free Bareiss
//! determinants in checked i128; any overflow falls back to exact rational
//! elimination for that basis only.

use crate::graph::Graph;
use crate::linalg::rational::{solve_exact, RatMatrix};
use crate::linalg::LinalgError;
use crate::rat::Rat;
use crate::tol::LP_CAP;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{OccupancyError, OccupancyParams};

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub optimum: Rat,
    /// A minimizer; ties are resolved by the fixed enumeration order
    /// (basis size ascending, then tight rows and free columns in
    /// lexicographic order), so output is deterministic.
    pub witness: Vec<Rat>,
    pub bases_examined: u64,
}

/// Constraint matrix B + Gamma A: row u reads
/// beta_u x_u + gamma_u sum over N(u) of x_v >= 1.
fn constraint_matrix(g: &Graph, p: &OccupancyParams) -> RatMatrix {
    let n = g.n();
    let mut m = RatMatrix::zeros(n, n);
    for u in 0..n {
        m.set(u, u, p.beta[u].clone());
        for v in g.neighbors(u) {
            m.set(u, v, p.gamma[u].clone());
        }
    }
    m
}

struct IntSystem {
    /// Row-scaled integer coefficients; row u of `coef` times x compares
    /// against rhs[u] (> 0).
    coef: Vec<Vec<i128>>,
    rhs: Vec<i128>,
}

fn build_int_system(g: &Graph, p: &OccupancyParams) -> Option<IntSystem> {
    let n = g.n();
    let mut coef = vec![vec![0i128; n]; n];
    let mut rhs = vec![0i128; n];
    for u in 0..n {
        let mut scale = p.beta[u].denom().clone();
        if g.degree(u) > 0 {
            scale = scale.lcm(p.gamma[u].denom());
        }
        let scale_rat = Rat::from_integer(scale.clone());
        coef[u][u] = (&p.beta[u] * &scale_rat).to_integer().to_i128()?;
        if g.degree(u) > 0 {
            let gu = (&p.gamma[u] * &scale_rat).to_integer().to_i128()?;
            for v in g.neighbors(u) {
                coef[u][v] = gu;
            }
        }
        rhs[u] = scale.to_i128()?;
    }
    Some(IntSystem { coef, rhs })
}

/// Fraction-free Bareiss determinant over checked i128.
/// Returns None on arithmetic overflow.
fn bareiss_det(mut m: Vec<Vec<i128>>) -> Option<i128> {
    let k = m.len();
    if k == 0 {
        return Some(1);
    }
    let mut negate = false;
    let mut prev = 1i128;
    for p in 0..k {
        if m[p][p] == 0 {
            match (p + 1..k).find(|&r| m[r][p] != 0) {
                Some(r) => {
                    m.swap(p, r);
                    negate = !negate;
                }
                None => return Some(0),
            }
        }
        for i in p + 1..k {
            for j in p + 1..k {
                let a = m[p][p].checked_mul(m[i][j])?;
                let b = m[i][p].checked_mul(m[p][j])?;
                // Exact by the Bareiss identity: prev divides a - b.
                m[i][j] = a.checked_sub(b)?.checked_div(prev)?;
            }
            m[i][p] = 0;
        }
        prev = m[p][p];
    }
    let det = m[k - 1][k - 1];
    if negate {
        det.checked_neg()
    } else {
        Some(det)
    }
}

enum BasisOutcome {
    Singular,
    Overflow,
    Infeasible,
    Feasible { witness: Vec<Rat>, objective: Rat },
}

fn try_basis_int(sys: &IntSystem, rows: &[usize], cols: &[usize], n: usize) -> BasisOutcome {
    let k = rows.len();
    let base: Vec<Vec<i128>> = rows
        .iter()
        .map(|&u| cols.iter().map(|&c| sys.coef[u][c]).collect())
        .collect();
    let det = match bareiss_det(base.clone()) {
        None => return BasisOutcome::Overflow,
        Some(0) => return BasisOutcome::Singular,
        Some(d) => d,
    };
    // Cramer: x at cols[j] is dets[j]/det, all other coordinates 0.
    let mut dets = Vec::with_capacity(k);
    for j in 0..k {
        let mut mj = base.clone();
        for (i, &u) in rows.iter().enumerate() {
            mj[i][j] = sys.rhs[u];
        }
        match bareiss_det(mj) {
            None => return BasisOutcome::Overflow,
            Some(d) => dets.push(d),
        }
    }
    for &dj in &dets {
        if dj != 0 && (dj > 0) != (det > 0) {
            return BasisOutcome::Infeasible;
        }
    }
    // Every row u must satisfy sum_j coef[u][cols[j]] * x_j >= rhs[u];
    // multiply through by det, flipping the sense when det < 0.
    for u in 0..n {
        let mut lhs = 0i128;
        for (j, &c) in cols.iter().enumerate() {
            let term = match sys.coef[u][c].checked_mul(dets[j]) {
                None => return BasisOutcome::Overflow,
                Some(t) => t,
            };
            lhs = match lhs.checked_add(term) {
                None => return BasisOutcome::Overflow,
                Some(s) => s,
            };
        }
        let bound = match sys.rhs[u].checked_mul(det) {
            None => return BasisOutcome::Overflow,
            Some(b) => b,
        };
        let ok = if det > 0 { lhs >= bound } else { lhs <= bound };
        if !ok {
            return BasisOutcome::Infeasible;
        }
    }
    let mut witness = vec![Rat::zero(); n];
    for (j, &c) in cols.iter().enumerate() {
        witness[c] = Rat::new(BigInt::from(dets[j]), BigInt::from(det));
    }
    let objective = witness.iter().fold(Rat::zero(), |a, x| a + x);
    BasisOutcome::Feasible { witness, objective }
}

fn try_basis_rat(
    mat: &RatMatrix,
    rows: &[usize],
    cols: &[usize],
    n: usize,
) -> Result<BasisOutcome, OccupancyError> {
    let k = rows.len();
    let x_cols = if k == 0 {
        Vec::new()
    } else {
        let sub = RatMatrix::from_rows(
            rows.iter()
                .map(|&u| cols.iter().map(|&c| mat.get(u, c).clone()).collect())
                .collect(),
        );
        match solve_exact(&sub, &vec![Rat::one(); k]) {
            Ok(x) => x,
            Err(LinalgError::Singular { .. }) => return Ok(BasisOutcome::Singular),
            Err(e) => return Err(e.into()),
        }
    };
    if x_cols.iter().any(|x| x.is_negative()) {
        return Ok(BasisOutcome::Infeasible);
    }
    let mut witness = vec![Rat::zero(); n];
    for (j, &c) in cols.iter().enumerate() {
        witness[c] = x_cols[j].clone();
    }
    for u in 0..n {
        let row_value = (0..n).fold(Rat::zero(), |acc, c| acc + mat.get(u, c) * &witness[c]);
        if row_value < Rat::one() {
            return Ok(BasisOutcome::Infeasible);
        }
    }
    let objective = witness.iter().fold(Rat::zero(), |a, x| a + x);
    Ok(BasisOutcome::Feasible { witness, objective })
}

/// All k-subsets of 0..n in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut c: Vec<usize> = (0..k).collect();
    loop {
        out.push(c.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if c[i] < n - k + i {
                break;
            }
        }
        c[i] += 1;
        for j in i + 1..k {
            c[j] = c[j - 1] + 1;
        }
    }
}

fn solve_bruteforce(
    g: &Graph,
    p: &OccupancyParams,
    force_rational: bool,
) -> Result<LpSolution, OccupancyError> {
    p.check_len(g)?;
    let n = g.n();
    if n > LP_CAP {
        return Err(OccupancyError::LpSizeCap { n, cap: LP_CAP });
    }
    for v in 0..n {
        if !p.beta[v].is_positive() || p.gamma[v].is_negative() {
            return Err(OccupancyError::LpBadParams { v });
        }
    }
    let mat = constraint_matrix(g, p);
    let int_sys = if force_rational {
        None
    } else {
        build_int_system(g, p)
    };
    let mut best: Option<(Rat, Vec<Rat>)> = None;
    let mut bases_examined = 0u64;
    for k in 0..=n {
        let combs = combinations(n, k);
        for rows in &combs {
            for cols in &combs {
                bases_examined += 1;
                let outcome = match &int_sys {
                    Some(sys) => match try_basis_int(sys, rows, cols, n) {
                        BasisOutcome::Overflow => try_basis_rat(&mat, rows, cols, n)?,
                        other => other,
                    },
                    None => try_basis_rat(&mat, rows, cols, n)?,
                };
                if let BasisOutcome::Feasible { witness, objective } = outcome {
                    let improves = match &best {
                        None => true,
                        Some((cur, _)) => objective < *cur,
                    };
                    if improves {
                        best = Some((objective, witness));
                    }
                }
            }
        }
    }
    // beta > 0 and gamma >= 0 make x = t*1 feasible for large t, and the
    // objective is bounded below by 0, so some vertex is optimal.
    let (optimum, witness) = best.expect("feasible bounded LP has an optimal vertex");
    Ok(LpSolution {
        optimum,
        witness,
        bases_examined,
    })
}

pub fn lp_optimum_bruteforce(
    g: &Graph,
    p: &OccupancyParams,
) -> Result<LpSolution, OccupancyError> {
    solve_bruteforce(g, p, false)
}

/// Same enumeration with all per-basis arithmetic done in exact rationals;
/// slower, used to cross-check the integer fast path.
pub fn lp_optimum_reference(
    g: &Graph,
    p: &OccupancyParams,
) -> Result<LpSolution, OccupancyError> {
    solve_bruteforce(g, p, true)
}
