//! Exact rational scalars: parsing, formatting, and logarithms of big ratios.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rat = BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RatParseError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid integer `{0}`")]
    BadInteger(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// `n/d` as an exact rational. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `p/q` or a bare integer `p` (decimal, optional sign).
pub fn parse_rat(s: &str) -> Result<Rat, RatParseError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(RatParseError::Empty);
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| RatParseError::BadInteger(num.to_string()))?;
    let d: BigInt = match den {
        Some(d) => d
            .parse()
            .map_err(|_| RatParseError::BadInteger(d.to_string()))?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(RatParseError::ZeroDenominator(s.to_string()));
    }
    Ok(Rat::new(n, d))
}

/// Canonical text form: reduced `p/q`, or `p` when the denominator is 1.
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact rational image of a finite double (every finite f64 is rational).
pub fn rat_from_f64(x: f64) -> Option<Rat> {
    Rat::from_float(x)
}

/// Nearest-double approximation, robust to ratios far outside f64 range.
pub fn rat_to_f64(r: &Rat) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    if r.is_zero() {
        return 0.0;
    }
    let sign = if r.is_negative() { -1.0 } else { 1.0 };
    let ln = ln_rat(&r.abs());
    sign * ln.exp()
}

/// Natural log of a positive rational, accurate to ~1e-15 relative even when
/// numerator/denominator overflow f64.
pub fn ln_rat(r: &Rat) -> f64 {
    assert!(r.is_positive(), "ln_rat needs a positive argument");
    ln_big(r.numer()) - ln_big(r.denom())
}

fn ln_big(x: &BigInt) -> f64 {
    debug_assert!(x.sign() == Sign::Plus);
    let bits = x.bits();
    if bits <= 64 {
        return x.to_f64().expect("small BigInt fits f64").ln();
    }
    // Take the top 64 bits as mantissa; the truncation error is below 2^-63.
    let shift = bits - 64;
    let top: BigInt = x >> shift;
    let m = top.to_f64().expect("64-bit mantissa fits f64");
    m.ln() + (shift as f64) * std::f64::consts::LN_2
}
