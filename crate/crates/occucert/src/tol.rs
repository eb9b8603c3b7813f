//! Centralized numeric tolerances and desk-scale size caps.
//!
//! Exact rational comparisons never consult these. Every floating verdict in
//! the crate references a named constant here so the tolerance story stays in
//! one place.

use crate::rat::Rat;
use num_bigint::BigInt;
use num_traits::One;

/// Absolute tolerance for float identities (residuals, reconstruction error).
pub const ABS_TOL: f64 = 1e-10;

/// Relative tolerance for float identities on quantities of unknown scale.
pub const REL_TOL: f64 = 1e-9;

/// Inequality verdicts in the float (mad-parameter) pipeline allow this slack.
pub const VERDICT_TOL: f64 = 1e-9;

/// Cyclic Jacobi sweeps run until the off-diagonal Frobenius norm drops here.
pub const JACOBI_OFF_TOL: f64 = 1e-12;

/// Lambert W iterates until the residual |w e^w - x| falls below this, relative to x.
pub const LAMBERT_REL_TOL: f64 = 1e-13;

/// Root solvers polish until interval/residual reach this scale.
pub const ROOT_TOL: f64 = 1e-15;

/// Series truncation depth is chosen so the geometric tail bound is below this.
pub const SERIES_TAIL_TOL: f64 = 1e-12;

/// Default cap on per-component independent-set enumeration (2^cap states).
pub const DEFAULT_ENUM_CAP: usize = 24;

/// Subset enumeration bound for exact maximum-average-degree computation.
pub const MAD_CAP: usize = 24;

/// Basis enumeration bound for the exact LP solver (C(2n, n) bases).
pub const LP_CAP: usize = 12;

/// Graphs are stored as 64-bit adjacency masks.
pub const MAX_VERTICES: usize = 64;

/// Exact threshold `1 - 10^-12` used by the local-occupancy pass/fail verdict:
/// exact-rational instances sit at >= 1 exactly, float-derived parameters are
/// allowed rounding at the twelfth digit.
pub fn one_minus_1e12() -> Rat {
    let q = BigInt::from(10u32).pow(12);
    Rat::one() - Rat::new(BigInt::one(), q)
}

/// `|a - b| <= abs + rel*max(|a|,|b|)`.
pub fn approx_eq(a: f64, b: f64, abs: f64, rel: f64) -> bool {
    (a - b).abs() <= abs + rel * a.abs().max(b.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{fmt_rat, parse_rat};

    #[test]
    fn one_minus_1e12_is_exact() {
        assert_eq!(
            fmt_rat(&one_minus_1e12()),
            "999999999999/1000000000000"
        );
        assert!(one_minus_1e12() < parse_rat("1").unwrap());
    }

    #[test]
    fn approx_eq_basic() {
        assert!(approx_eq(1.0, 1.0 + 5e-10, 1e-10, 1e-9));
        assert!(!approx_eq(1.0, 1.1, 1e-10, 1e-9));
    }
}
