//! Lambert W on the positive axis and the scalar roots that calibrate the
//! bounded-neighborhood-density parameter plans.

use crate::tol::{LAMBERT_REL_TOL, ROOT_TOL};
use thiserror::Error;

/// Published truncation of the b = 0 fugacity-range constant.
pub const C0_PUBLISHED: f64 = 0.109597;

/// Published truncation of the coefficient in c(b) = coeff / b for b >= 1.
pub const ETA_PUBLISHED: f64 = 0.0896883;

#[derive(Debug, Error, PartialEq)]
pub enum SpecialError {
    #[error("argument {0} outside domain (0, inf)")]
    Domain(f64),
    #[error("iteration failed to converge (residual {residual:e} after {iterations} steps)")]
    NoConvergence { residual: f64, iterations: usize },
    #[error("b must be 0 or at least 1, got {0}")]
    InvalidB(f64),
    #[error("root not bracketed on ({lo}, {hi})")]
    NotBracketed { lo: f64, hi: f64 },
}

#[derive(Debug, Clone, Copy)]
pub struct SolverConfig {
    pub max_iter: usize,
    pub tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_iter: 200,
            tol: ROOT_TOL,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RootResult {
    pub root: f64,
    /// |f(root)| at the returned point.
    pub residual: f64,
    pub iterations: usize,
}

/// Principal Lambert W on (0, inf): the unique w > 0 with w e^w = x.
///
/// Halley iteration from a regime-aware initial guess; converges to machine
/// precision in a handful of steps everywhere on the domain.
pub fn lambert_w(x: f64) -> Result<f64, SpecialError> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(SpecialError::Domain(x));
    }
    let mut w = initial_guess(x);
    let mut residual = f64::INFINITY;
    for iterations in 0..64 {
        let ew = w.exp();
        let f = w * ew - x;
        residual = f.abs();
        if residual <= LAMBERT_REL_TOL * x {
            return Ok(w);
        }
        // Halley step: quadratic convergence with a cubic correction term.
        let wp1 = w + 1.0;
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        let next = w - f / denom;
        if !next.is_finite() {
            break;
        }
        // w > 0 on this domain; a step below zero means the guess overshot.
        w = if next > 0.0 { next } else { w * 0.5 };
        let _ = iterations;
    }
    // Bisection fallback: w e^w is strictly increasing on [0, inf).
    let (mut lo, mut hi) = (0.0f64, x.max(1.0).min(x.ln().max(1.0) + 1.0));
    while hi * hi.exp() < x {
        hi *= 2.0;
    }
    for iterations in 0..200 {
        let mid = 0.5 * (lo + hi);
        let f = mid * mid.exp() - x;
        residual = f.abs();
        if residual <= LAMBERT_REL_TOL * x || (hi - lo) <= f64::EPSILON * hi {
            return Ok(mid);
        }
        if f < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        let _ = iterations;
    }
    Err(SpecialError::NoConvergence {
        residual,
        iterations: 264,
    })
}

fn initial_guess(x: f64) -> f64 {
    if x < 1.0 {
        // Series around 0: W(x) = x - x^2 + 3x^3/2 - ...
        x * (1.0 - x)
    } else {
        // Asymptotic: W(x) = ln x - ln ln x + o(1) for large x.
        let l = x.ln();
        if l > 1.0 {
            l - l.ln()
        } else {
            0.5 * l + 0.35
        }
    }
}

/// Derivative W'(x) = W(x) / (x (1 + W(x))) on (0, inf).
pub fn lambert_w_derivative(x: f64) -> Result<f64, SpecialError> {
    let w = lambert_w(x)?;
    Ok(w / (x * (1.0 + w)))
}

/// Root of e^{-4C}/(1+C)^8 = 2C/(1-2C) on (0, 1/2); this pins the fugacity
/// range for the triangle-free (b = 0) parameter plan. Root ~ 0.1095972.
pub fn solve_c0(cfg: &SolverConfig) -> Result<RootResult, SpecialError> {
    let f = |c: f64| (-4.0 * c).exp() / (1.0 + c).powi(8) - 2.0 * c / (1.0 - 2.0 * c);
    bisect_then_polish(f, 1e-9, 0.5 - 1e-9, cfg)
}

/// Root eta of e^{-4u}/(1+u)^8 = e^{3 eta} * 2u/(1-2u) with u = eta e^{eta};
/// this pins the b >= 1 coefficient. Root ~ 0.08968838 (u ~ 0.09810).
pub fn solve_eta(cfg: &SolverConfig) -> Result<RootResult, SpecialError> {
    let f = |eta: f64| {
        let u = eta * eta.exp();
        (-4.0 * u).exp() / (1.0 + u).powi(8) - (3.0 * eta).exp() * 2.0 * u / (1.0 - 2.0 * u)
    };
    // u < 1/2 throughout the bracket: u(0.35) ~ 0.497.
    bisect_then_polish(f, 1e-9, 0.35, cfg)
}

fn bisect_then_polish(
    f: impl Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    cfg: &SolverConfig,
) -> Result<RootResult, SpecialError> {
    let (flo, fhi) = (f(lo), f(hi));
    if flo.signum() == fhi.signum() {
        return Err(SpecialError::NotBracketed { lo, hi });
    }
    let mut iterations = 0;
    let mut mid = 0.5 * (lo + hi);
    while iterations < cfg.max_iter && (hi - lo) > f64::EPSILON * hi.abs().max(1.0) {
        mid = 0.5 * (lo + hi);
        let fm = f(mid);
        iterations += 1;
        if fm == 0.0 {
            break;
        }
        if fm.signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Secant polish squeezes out the last bits the bisection left behind.
    let mut a = lo;
    let mut b = hi;
    let (mut fa, mut fb) = (f(a), f(b));
    for _ in 0..8 {
        if fa == fb {
            break;
        }
        let c = b - fb * (b - a) / (fb - fa);
        if !c.is_finite() {
            break;
        }
        a = b;
        fa = fb;
        b = c;
        fb = f(b);
        iterations += 1;
        if fb.abs() <= cfg.tol {
            break;
        }
    }
    let root = if fb.abs() <= f(mid).abs() { b } else { mid };
    let residual = f(root).abs();
    Ok(RootResult {
        root,
        residual,
        iterations,
    })
}

/// Admissible fugacity-range constant c(b): published truncations, with
/// b in (0, 1) rejected (the parameter plan is only calibrated at b = 0 and
/// b >= 1). Raw roots are available through solve_c0 / solve_eta.
pub fn c_of_b(b: f64) -> Result<f64, SpecialError> {
    if !b.is_finite() || b < 0.0 || (b > 0.0 && b < 1.0) {
        return Err(SpecialError::InvalidB(b));
    }
    if b == 0.0 {
        Ok(C0_PUBLISHED)
    } else {
        Ok(ETA_PUBLISHED / b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambert_w_known_points() {
        // W(1) is the omega constant.
        assert!((lambert_w(1.0).unwrap() - 0.5671432904097838).abs() <= 1e-15);
        assert!((lambert_w(std::f64::consts::E).unwrap() - 1.0).abs() <= 1e-13);
        let two_e_squared = 2.0 * (2.0f64).exp();
        assert!((lambert_w(two_e_squared).unwrap() - 2.0).abs() <= 1e-13);
    }

    #[test]
    fn lambert_w_round_trip_log_grid() {
        let mut worst = 0.0f64;
        for i in 0..=200 {
            let x = 10f64.powf(-8.0 + 16.0 * i as f64 / 200.0);
            let w = lambert_w(x).unwrap();
            assert!(w > 0.0 && w < x, "0 < W(x) < x fails at {x}: {w}");
            let rel = (w * w.exp() - x).abs() / x;
            worst = worst.max(rel);
        }
        assert!(worst <= 1e-12, "worst relative residual {worst:e}");
    }

    #[test]
    fn lambert_w_is_monotone() {
        let mut prev = 0.0;
        for i in 1..=1000 {
            let x = i as f64 * 0.01;
            let w = lambert_w(x).unwrap();
            assert!(w > prev);
            prev = w;
        }
    }

    #[test]
    fn lambert_w_derivative_matches_finite_differences() {
        for &x in &[0.01, 0.1, 1.0, 3.0, 10.0, 100.0] {
            let h = 1e-6 * x;
            let fd = (lambert_w(x + h).unwrap() - lambert_w(x - h).unwrap()) / (2.0 * h);
            let an = lambert_w_derivative(x).unwrap();
            assert!(
                (fd - an).abs() <= 1e-6 * an.abs().max(1e-12),
                "x={x}: {fd} vs {an}"
            );
        }
    }

    #[test]
    fn lambert_w_rejects_bad_input() {
        for x in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            assert!(matches!(lambert_w(x), Err(SpecialError::Domain(_))));
        }
    }

    #[test]
    fn c0_root_value_and_residual() {
        let r = solve_c0(&SolverConfig::default()).unwrap();
        // Independent high-precision value: 0.109597281554305294.
        assert!((r.root - 0.1095972815543053).abs() <= 1e-12);
        assert!(r.residual < 1e-12);
    }

    #[test]
    fn eta_root_value_and_residual() {
        let r = solve_eta(&SolverConfig::default()).unwrap();
        // Independent high-precision value: 0.089688386070282878.
        assert!((r.root - 0.0896883860702829).abs() <= 1e-12);
        assert!(r.residual < 1e-12);
        let u = r.root * r.root.exp();
        assert!((u - 0.0981041502017519).abs() <= 1e-12);
        assert!(u < 0.5);
    }

    #[test]
    fn published_truncations() {
        assert_eq!(c_of_b(0.0).unwrap(), 0.109597);
        assert_eq!(c_of_b(1.0).unwrap(), 0.0896883);
        assert_eq!(c_of_b(2.0).unwrap(), 0.0896883 / 2.0);
        // The published values truncate the raw roots downward (safe side).
        let c0 = solve_c0(&SolverConfig::default()).unwrap().root;
        let eta = solve_eta(&SolverConfig::default()).unwrap().root;
        assert!(C0_PUBLISHED < c0 && c0 - C0_PUBLISHED < 1e-6);
        assert!(ETA_PUBLISHED < eta && eta - ETA_PUBLISHED < 1e-7);
    }

    #[test]
    fn b_between_zero_and_one_is_rejected() {
        assert!(matches!(c_of_b(0.5), Err(SpecialError::InvalidB(_))));
        assert!(matches!(c_of_b(-1.0), Err(SpecialError::InvalidB(_))));
        assert!(matches!(c_of_b(f64::NAN), Err(SpecialError::InvalidB(_))));
        assert!(c_of_b(1.0).is_ok() && c_of_b(17.5).is_ok());
    }
}
