//! Exact rational matrices with full-pivot Gaussian elimination.

use super::LinalgError;
use crate::rat::Rat;
use num_traits::{One, Zero};

/// Dense row-major matrix of exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rat>) -> Self {
        assert_eq!(data.len(), rows * cols, "data length must be rows*cols");
        RatMatrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix::new(rows, cols, vec![Rat::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        RatMatrix::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul_vec(&self, x: &[Rat]) -> Result<Vec<Rat>, LinalgError> {
        if x.len() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                rows: self.rows,
                cols: self.cols,
                len: x.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = Rat::zero();
                for j in 0..self.cols {
                    if !self.get(i, j).is_zero() {
                        acc += self.get(i, j) * &x[j];
                    }
                }
                acc
            })
            .collect())
    }

    pub fn mul_mat(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = RatMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let cur = out.get(i, j) + a * b;
                        out.set(i, j, cur);
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut out = RatMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn to_f64(&self) -> super::RealMatrix {
        super::RealMatrix::from_fn(self.rows, self.cols, |i, j| crate::rat::rat_to_f64(self.get(i, j)))
    }
}

// Pivot preference: among nonzero candidates pick the one with the fewest
// total bits, tie-broken by position. Exactness never needs magnitude-based
// pivoting; small pivots keep intermediate numerators from ballooning.
fn pivot_weight(r: &Rat) -> u64 {
    r.numer().bits() + r.denom().bits()
}

/// Solves `a x = b` by Gaussian elimination with full pivoting, exactly.
pub fn solve_exact(a: &RatMatrix, b: &[Rat]) -> Result<Vec<Rat>, LinalgError> {
    let n = square_dim(a)?;
    if b.len() != n {
        return Err(LinalgError::DimensionMismatch {
            rows: a.rows,
            cols: a.cols,
            len: b.len(),
        });
    }
    let mut aug = a.clone();
    let mut rhs = b.to_vec();
    // col_perm[j] = original column index occupying slot j after swaps.
    let mut col_perm: Vec<usize> = (0..n).collect();

    for step in 0..n {
        let Some((pr, pc)) = find_pivot(&aug, step) else {
            return Err(LinalgError::Singular { rank: step });
        };
        swap_rows(&mut aug, &mut rhs, step, pr);
        swap_cols(&mut aug, &mut col_perm, step, pc);

        let pivot = aug.get(step, step).clone();
        for r in (step + 1)..n {
            if aug.get(r, step).is_zero() {
                continue;
            }
            let factor = aug.get(r, step) / &pivot;
            for c in step..n {
                let v = aug.get(r, c) - &factor * aug.get(step, c);
                aug.set(r, c, v);
            }
            rhs[r] = &rhs[r] - &factor * &rhs[step];
        }
    }

    // Back substitution in permuted coordinates, then undo the column swaps.
    let mut y = vec![Rat::zero(); n];
    for i in (0..n).rev() {
        let mut acc = rhs[i].clone();
        for j in (i + 1)..n {
            acc -= aug.get(i, j) * &y[j];
        }
        y[i] = acc / aug.get(i, i);
    }
    let mut x = vec![Rat::zero(); n];
    for (slot, &orig) in col_perm.iter().enumerate() {
        x[orig] = y[slot].clone();
    }
    Ok(x)
}

/// Exact inverse via `n` simultaneous solves on the augmented identity.
pub fn inverse_exact(a: &RatMatrix) -> Result<RatMatrix, LinalgError> {
    let n = square_dim(a)?;
    let mut aug = a.clone();
    let mut rhs = RatMatrix::identity(n);
    let mut col_perm: Vec<usize> = (0..n).collect();

    for step in 0..n {
        let Some((pr, pc)) = find_pivot(&aug, step) else {
            return Err(LinalgError::Singular { rank: step });
        };
        if pr != step {
            for c in 0..n {
                let tmp = aug.get(step, c).clone();
                aug.set(step, c, aug.get(pr, c).clone());
                aug.set(pr, c, tmp);
                let tmp = rhs.get(step, c).clone();
                rhs.set(step, c, rhs.get(pr, c).clone());
                rhs.set(pr, c, tmp);
            }
        }
        if pc != step {
            for r in 0..n {
                let tmp = aug.get(r, step).clone();
                aug.set(r, step, aug.get(r, pc).clone());
                aug.set(r, pc, tmp);
            }
            col_perm.swap(step, pc);
        }
        let pivot = aug.get(step, step).clone();
        for r in 0..n {
            if r == step || aug.get(r, step).is_zero() {
                continue;
            }
            let factor = aug.get(r, step) / &pivot;
            for c in 0..n {
                let v = aug.get(r, c) - &factor * aug.get(step, c);
                aug.set(r, c, v);
                let v = rhs.get(r, c) - &factor * rhs.get(step, c);
                rhs.set(r, c, v);
            }
        }
    }

    // Row i of the result corresponds to original column col_perm[i].
    let mut inv = RatMatrix::zeros(n, n);
    for slot in 0..n {
        let pivot = aug.get(slot, slot);
        for c in 0..n {
            inv.set(col_perm[slot], c, rhs.get(slot, c) / pivot);
        }
    }
    Ok(inv)
}

fn square_dim(a: &RatMatrix) -> Result<usize, LinalgError> {
    if a.rows != a.cols {
        return Err(LinalgError::NonSquare {
            rows: a.rows,
            cols: a.cols,
        });
    }
    Ok(a.rows)
}

fn find_pivot(aug: &RatMatrix, step: usize) -> Option<(usize, usize)> {
    let n = aug.rows;
    let mut best: Option<(u64, usize, usize)> = None;
    for r in step..n {
        for c in step..n {
            let v = aug.get(r, c);
            if v.is_zero() {
                continue;
            }
            let w = pivot_weight(v);
            if best.map_or(true, |(bw, _, _)| w < bw) {
                best = Some((w, r, c));
            }
        }
    }
    best.map(|(_, r, c)| (r, c))
}

fn swap_rows(aug: &mut RatMatrix, rhs: &mut [Rat], a: usize, b: usize) {
    if a == b {
        return;
    }
    for c in 0..aug.cols {
        let tmp = aug.get(a, c).clone();
        aug.set(a, c, aug.get(b, c).clone());
        aug.set(b, c, tmp);
    }
    rhs.swap(a, b);
}

fn swap_cols(aug: &mut RatMatrix, col_perm: &mut [usize], a: usize, b: usize) {
    if a == b {
        return;
    }
    for r in 0..aug.rows {
        let tmp = aug.get(r, a).clone();
        aug.set(r, a, aug.get(r, b).clone());
        aug.set(r, b, tmp);
    }
    col_perm.swap(a, b);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    fn m2(a: i64, b: i64, c: i64, d: i64) -> RatMatrix {
        RatMatrix::from_rows(vec![
            vec![rat_int(a), rat_int(b)],
            vec![rat_int(c), rat_int(d)],
        ])
    }

    #[test]
    fn solve_small_symmetric_system() {
        let a = m2(5, 1, 1, 5);
        let x = solve_exact(&a, &[rat_int(1), rat_int(1)]).unwrap();
        assert_eq!(x, vec![rat(1, 6), rat(1, 6)]);
    }

    #[test]
    fn inverse_small_symmetric_system() {
        let a = m2(5, 1, 1, 5);
        let inv = inverse_exact(&a).unwrap();
        let want = RatMatrix::from_rows(vec![
            vec![rat(5, 24), rat(-1, 24)],
            vec![rat(-1, 24), rat(5, 24)],
        ]);
        assert_eq!(inv, want);
        assert_eq!(a.mul_mat(&inv), RatMatrix::identity(2));
    }

    #[test]
    fn singular_reports_rank() {
        let a = RatMatrix::from_rows(vec![
            vec![rat_int(1), rat_int(2), rat_int(3)],
            vec![rat_int(2), rat_int(4), rat_int(6)],
            vec![rat_int(0), rat_int(0), rat_int(1)],
        ]);
        match solve_exact(&a, &[rat_int(1), rat_int(2), rat_int(3)]) {
            Err(LinalgError::Singular { rank }) => assert_eq!(rank, 2),
            other => panic!("expected singular, got {other:?}"),
        }
    }

    #[test]
    fn non_square_and_mismatch_are_rejected() {
        let zeros3 = vec![rat_int(0), rat_int(0), rat_int(0)];
        let a = RatMatrix::zeros(2, 3);
        assert!(matches!(
            solve_exact(&a, &zeros3),
            Err(LinalgError::NonSquare { .. })
        ));
        let a = RatMatrix::identity(2);
        assert!(matches!(
            solve_exact(&a, &zeros3),
            Err(LinalgError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn permutation_heavy_pivoting() {
        // Forces both row and column swaps: leading entries are zero.
        let a = RatMatrix::from_rows(vec![
            vec![rat_int(0), rat_int(0), rat_int(2)],
            vec![rat_int(0), rat_int(3), rat_int(0)],
            vec![rat_int(5), rat_int(0), rat_int(0)],
        ]);
        let x = solve_exact(&a, &[rat_int(2), rat_int(6), rat_int(10)]).unwrap();
        assert_eq!(x, vec![rat_int(2), rat_int(2), rat_int(1)]);
    }
}
