//! Symmetric eigensolver (cyclic Jacobi) and the spectral helpers built on it.
//!
//! Non-symmetric spectral radii are only ever computed through an explicit
//! positive-diagonal similarity that makes the operator symmetric; there is no
//! general eigensolver here and none is needed at desk scale.

use super::LinalgError;
use crate::tol::{ABS_TOL, JACOBI_OFF_TOL};

/// Dense row-major matrix of doubles.
#[derive(Debug, Clone, PartialEq)]
pub struct RealMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl RealMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RealMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RealMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = RealMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * x[j]).sum())
            .collect()
    }

    pub fn matmul(&self, other: &RealMatrix) -> RealMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = RealMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> RealMatrix {
        RealMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn scale(&self, s: f64) -> RealMatrix {
        RealMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    fn symmetry_deviation(&self) -> f64 {
        let mut dev = 0.0f64;
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                dev = dev.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        dev
    }

    fn off_diagonal_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j {
                    s += self.get(i, j) * self.get(i, j);
                }
            }
        }
        s.sqrt()
    }
}

/// Eigenvalues in ascending order; `vectors` holds the matching orthonormal
/// eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub vectors: RealMatrix,
}

#[derive(Debug, Clone)]
pub struct PsdReport {
    pub is_psd: bool,
    pub min_eigenvalue: f64,
    /// Eigenvector of the most negative eigenvalue when the check fails.
    pub witness: Option<Vec<f64>>,
}

/// Full spectrum of a symmetric matrix via cyclic Jacobi rotations.
///
/// Sweeps run until the off-diagonal Frobenius norm is at most
/// `max(JACOBI_OFF_TOL, 1e-15 * scale)`; convergence is quadratic, so this
/// lands within a handful of sweeps at the sizes used here.
pub fn symmetric_spectrum(m: &RealMatrix) -> Result<Spectrum, LinalgError> {
    let n = require_square(m)?;
    let dev = m.symmetry_deviation();
    if dev > ABS_TOL * (1.0 + m.max_abs()) {
        return Err(LinalgError::NotSymmetric { deviation: dev });
    }

    let mut a = m.clone();
    // Exact symmetrization so rotations annihilate pairs consistently.
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (a.get(i, j) + a.get(j, i));
            a.set(i, j, avg);
            a.set(j, i, avg);
        }
    }
    let mut q = RealMatrix::identity(n);
    let target = JACOBI_OFF_TOL.max(1e-15 * (1.0 + a.frobenius()));

    let max_sweeps = 80;
    let mut achieved = a.off_diagonal_norm();
    for _ in 0..max_sweeps {
        if achieved <= target {
            break;
        }
        for p in 0..n {
            for r in (p + 1)..n {
                jacobi_rotate(&mut a, &mut q, p, r);
            }
        }
        achieved = a.off_diagonal_norm();
    }
    if achieved > target {
        return Err(LinalgError::JacobiStalled {
            target,
            achieved,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.get(i, i).partial_cmp(&a.get(j, j)).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a.get(i, i)).collect();
    let vectors = RealMatrix::from_fn(n, n, |i, j| q.get(i, order[j]));
    Ok(Spectrum {
        eigenvalues,
        vectors,
    })
}

fn jacobi_rotate(a: &mut RealMatrix, q: &mut RealMatrix, p: usize, r: usize) {
    let apr = a.get(p, r);
    if apr == 0.0 {
        return;
    }
    let theta = (a.get(r, r) - a.get(p, p)) / (2.0 * apr);
    let t = if theta >= 0.0 {
        1.0 / (theta + (theta * theta + 1.0).sqrt())
    } else {
        -1.0 / (-theta + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let n = a.rows();

    for k in 0..n {
        let akp = a.get(k, p);
        let akr = a.get(k, r);
        a.set(k, p, c * akp - s * akr);
        a.set(k, r, s * akp + c * akr);
    }
    for k in 0..n {
        let apk = a.get(p, k);
        let ark = a.get(r, k);
        a.set(p, k, c * apk - s * ark);
        a.set(r, k, s * apk + c * ark);
    }
    // Pin the annihilated pair to exactly zero to avoid round-off residue.
    a.set(p, r, 0.0);
    a.set(r, p, 0.0);
    for k in 0..n {
        let qkp = q.get(k, p);
        let qkr = q.get(k, r);
        q.set(k, p, c * qkp - s * qkr);
        q.set(k, r, s * qkp + c * qkr);
    }
}

/// Largest singular value, computed as sqrt of the top eigenvalue of MᵀM.
pub fn operator_norm(m: &RealMatrix) -> Result<f64, LinalgError> {
    let gram = m.transpose().matmul(m);
    let spec = symmetric_spectrum(&gram)?;
    let top = spec.eigenvalues.last().copied().unwrap_or(0.0);
    Ok(top.max(0.0).sqrt())
}

/// Spectral radius of `t` given a positive diagonal `symmetrizer` w such that
/// `diag(w)^(1/2) t diag(w)^(-1/2)` is symmetric. Errors if it is not (within
/// ABS_TOL scaling) or if the symmetrizer fails positivity.
pub fn spectral_radius_similar(
    t: &RealMatrix,
    symmetrizer: &[f64],
) -> Result<f64, LinalgError> {
    let n = require_square(t)?;
    if symmetrizer.len() != n {
        return Err(LinalgError::DimensionMismatch {
            rows: n,
            cols: n,
            len: symmetrizer.len(),
        });
    }
    for (i, &w) in symmetrizer.iter().enumerate() {
        if !(w > 0.0) {
            return Err(LinalgError::BadSymmetrizer { index: i, value: w });
        }
    }
    let sqrt_w: Vec<f64> = symmetrizer.iter().map(|w| w.sqrt()).collect();
    let s = RealMatrix::from_fn(n, n, |i, j| sqrt_w[i] * t.get(i, j) / sqrt_w[j]);
    let dev = s.symmetry_deviation();
    if dev > ABS_TOL * (1.0 + s.max_abs()) {
        return Err(LinalgError::NotSymmetrizable { deviation: dev });
    }
    let spec = symmetric_spectrum(&s)?;
    Ok(spec
        .eigenvalues
        .iter()
        .fold(0.0f64, |m, &e| m.max(e.abs())))
}

/// Upper bound on the spectral radius via Gelfand's formula: the minimum of
/// ||T^m||^(1/m) over m = 1, 2, 4, ..., 256. Always an upper bound; converges
/// to rho(T) for the (diagonalizable) operators used here.
pub fn gelfand_rho_upper(t: &RealMatrix) -> Result<f64, LinalgError> {
    let mut best = operator_norm(t)?;
    if best == 0.0 {
        return Ok(0.0);
    }
    let mut power = t.clone();
    let mut log_scale = 0.0f64; // accumulated ln of divided-out norms
    let mut m = 1u32;
    for _ in 0..8 {
        // power currently holds T^m / exp(log_scale)
        let norm = power.frobenius();
        if norm == 0.0 {
            return Ok(0.0);
        }
        let scaled = power.scale(1.0 / norm);
        power = scaled.matmul(&scaled);
        log_scale = 2.0 * (log_scale + norm.ln());
        m *= 2;
        let opn = operator_norm(&power)?;
        if opn == 0.0 {
            return Ok(0.0);
        }
        let estimate = ((opn.ln() + log_scale) / m as f64).exp();
        best = best.min(estimate);
    }
    Ok(best)
}

/// Partial sums `x_j = sum_{k<=j} T^k b` for j = 0..=k_max.
///
/// Requires a certified spectral radius below one (Gelfand upper bound);
/// errors otherwise instead of silently summing a divergent series.
pub fn neumann_partial_sums(
    t: &RealMatrix,
    b: &[f64],
    k_max: usize,
) -> Result<Vec<Vec<f64>>, LinalgError> {
    let n = require_square(t)?;
    if b.len() != n {
        return Err(LinalgError::DimensionMismatch {
            rows: n,
            cols: n,
            len: b.len(),
        });
    }
    let bound = gelfand_rho_upper(t)?;
    if !(bound < 1.0) {
        return Err(LinalgError::SpectralRadiusNotBelowOne { bound });
    }
    let mut partials = Vec::with_capacity(k_max + 1);
    let mut term = b.to_vec();
    let mut sum = b.to_vec();
    partials.push(sum.clone());
    for _ in 1..=k_max {
        term = t.matvec(&term);
        for (s, v) in sum.iter_mut().zip(&term) {
            *s += v;
        }
        partials.push(sum.clone());
    }
    Ok(partials)
}

/// Positive semidefiniteness up to `-ABS_TOL * (1 + ||M||)` on the spectrum.
pub fn psd_check(m: &RealMatrix) -> Result<PsdReport, LinalgError> {
    let spec = symmetric_spectrum(m)?;
    let min = spec.eigenvalues[0];
    let scale = spec
        .eigenvalues
        .iter()
        .fold(0.0f64, |acc, &e| acc.max(e.abs()));
    let is_psd = min >= -ABS_TOL * (1.0 + scale);
    let witness = if is_psd {
        None
    } else {
        let n = spec.vectors.rows();
        Some((0..n).map(|i| spec.vectors.get(i, 0)).collect())
    };
    Ok(PsdReport {
        is_psd,
        min_eigenvalue: min,
        witness,
    })
}

fn require_square(m: &RealMatrix) -> Result<usize, LinalgError> {
    if m.rows != m.cols {
        return Err(LinalgError::NonSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    Ok(m.rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tol::approx_eq;

    fn path3_laplacian() -> RealMatrix {
        // Star on 3 vertices with center 0; eigenvalues 0, 1, 3.
        let mut l = RealMatrix::zeros(3, 3);
        l.set(0, 0, 2.0);
        l.set(1, 1, 1.0);
        l.set(2, 2, 1.0);
        l.set(0, 1, -1.0);
        l.set(1, 0, -1.0);
        l.set(0, 2, -1.0);
        l.set(2, 0, -1.0);
        l
    }

    #[test]
    fn star_laplacian_spectrum() {
        let spec = symmetric_spectrum(&path3_laplacian()).unwrap();
        let want = [0.0, 1.0, 3.0];
        for (got, want) in spec.eigenvalues.iter().zip(want) {
            assert!((got - want).abs() <= 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn spectrum_reconstructs_matrix() {
        let m = path3_laplacian();
        let spec = symmetric_spectrum(&m).unwrap();
        let n = 3;
        let mut recon = RealMatrix::zeros(n, n);
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let v = recon.get(i, j)
                        + spec.eigenvalues[k] * spec.vectors.get(i, k) * spec.vectors.get(j, k);
                    recon.set(i, j, v);
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                assert!(approx_eq(recon.get(i, j), m.get(i, j), 1e-9, 1e-9));
            }
        }
        // Orthonormality of the eigenvector columns.
        let qtq = spec.vectors.transpose().matmul(&spec.vectors);
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((qtq.get(i, j) - want).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn asymmetric_input_is_rejected() {
        let mut m = RealMatrix::zeros(2, 2);
        m.set(0, 1, 1.0);
        assert!(matches!(
            symmetric_spectrum(&m),
            Err(LinalgError::NotSymmetric { .. })
        ));
    }

    #[test]
    fn operator_norm_of_scaled_adjacency() {
        // (1/2) * K2 adjacency has singular values 1/2, 1/2.
        let mut m = RealMatrix::zeros(2, 2);
        m.set(0, 1, 0.5);
        m.set(1, 0, 0.5);
        assert!((operator_norm(&m).unwrap() - 0.5).abs() <= 1e-12);
    }

    #[test]
    fn similar_radius_on_scaled_adjacency() {
        // T = B^{-1} A with B = 2I on an edge: radius 1/2, symmetrizer (2, 2).
        let mut t = RealMatrix::zeros(2, 2);
        t.set(0, 1, 0.5);
        t.set(1, 0, 0.5);
        let rho = spectral_radius_similar(&t, &[2.0, 2.0]).unwrap();
        assert!((rho - 0.5).abs() <= 1e-12);
    }

    #[test]
    fn similar_radius_rejects_impossible_symmetrizer() {
        // Nilpotent upper-triangular block cannot be symmetrized diagonally.
        let mut t = RealMatrix::zeros(2, 2);
        t.set(0, 1, 1.0);
        assert!(matches!(
            spectral_radius_similar(&t, &[1.0, 1.0]),
            Err(LinalgError::NotSymmetrizable { .. })
        ));
        assert!(matches!(
            spectral_radius_similar(&t, &[1.0, -1.0]),
            Err(LinalgError::BadSymmetrizer { .. })
        ));
    }

    #[test]
    fn neumann_partials_on_half_identity() {
        let t = RealMatrix::identity(2).scale(0.5);
        let partials = neumann_partial_sums(&t, &[1.0, 1.0], 10).unwrap();
        for (j, p) in partials.iter().enumerate() {
            let want = 2.0 - 0.5f64.powi(j as i32);
            for v in p {
                assert!(approx_eq(*v, want, 1e-12, 1e-12));
            }
        }
    }

    #[test]
    fn neumann_rejects_divergent_operator() {
        let t = RealMatrix::identity(2);
        assert!(matches!(
            neumann_partial_sums(&t, &[1.0, 1.0], 4),
            Err(LinalgError::SpectralRadiusNotBelowOne { .. })
        ));
    }

    #[test]
    fn zero_matrix_neumann_is_constant() {
        let t = RealMatrix::zeros(3, 3);
        let partials = neumann_partial_sums(&t, &[1.0, 2.0, 3.0], 3).unwrap();
        for p in partials {
            assert_eq!(p, vec![1.0, 2.0, 3.0]);
        }
    }

    #[test]
    fn psd_check_flags_indefinite() {
        let l = path3_laplacian();
        assert!(psd_check(&l).unwrap().is_psd);
        let mut m = RealMatrix::identity(2);
        m.set(1, 1, -1.0);
        let report = psd_check(&m).unwrap();
        assert!(!report.is_psd);
        assert!((report.min_eigenvalue + 1.0).abs() <= 1e-12);
        let w = report.witness.unwrap();
        // Witness is the eigenvector of the negative eigenvalue: e_1.
        assert!(w[0].abs() <= 1e-10 && (w[1].abs() - 1.0).abs() <= 1e-10);
    }
}
