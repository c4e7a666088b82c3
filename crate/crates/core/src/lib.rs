//! Algebraic manipulation detection (AMD) codes for leaky storage.
//!
//! The crate is organised bottom-up:
//!
//! * [`field`] and [`linalg`]: exact arithmetic over a prime field `F_q` and
//!   over the exponent ring `Z_{q-1}`.
//! * [`amd`]: the systematic AMD code with tag `r^{d+2} + Σ m_i r^i`.
//! * [`wiretap2`]: the MDS coset code for the wiretap II channel.
//! * [`lvamd`]: limited-view AMD codes, both the strong composition
//!   `WtIIenc ∘ AMDenc` and the deterministic exponent-tag weak code.
//! * [`rampsss`]: packed-polynomial ramp secret sharing and its robust
//!   variant, which shares a limited-view AMD codeword.
//! * [`adversary`]: exact distributions and optimal limited-view attack
//!   oracles that certify the security parameters by enumeration.
//! * [`bounds`]: the closed-form efficiency bounds as checkable formulas.

pub mod adversary;
pub mod amd;
pub mod bounds;
pub mod field;
pub mod linalg;
pub mod lvamd;
pub mod rampsss;
pub mod wiretap2;

use thiserror::Error;

pub use field::{ExponentElement, FieldElement, FieldError, PrimeField};
pub use linalg::{ExponentMatrix, LinalgError, Matrix, Vector};

/// Exact probabilities and rates.
pub type Ratio = num_rational::Ratio<u64>;

/// Decoder output: either a message or the distinguished rejection symbol ⊥.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decoded {
    Accept(Vector),
    Reject,
}

impl Decoded {
    pub fn is_reject(&self) -> bool {
        matches!(self, Decoded::Reject)
    }

    pub fn message(&self) -> Option<&Vector> {
        match self {
            Decoded::Accept(m) => Some(m),
            Decoded::Reject => None,
        }
    }

    pub fn into_option(self) -> Option<Vector> {
        match self {
            Decoded::Accept(m) => Some(m),
            Decoded::Reject => None,
        }
    }
}

impl std::fmt::Display for Decoded {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Decoded::Accept(m) => write!(f, "{m}"),
            Decoded::Reject => write!(f, "REJECT"),
        }
    }
}

/// Errors raised by code construction, encoding and decoding.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("{what}: expected length {expected}, got {got}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("message component {index} is zero; messages must lie in (F_q^*)^k")]
    ZeroComponent { index: usize },
    #[error("need at least {need} shares for recovery, got {got}")]
    TooFewShares { need: usize, got: usize },
    #[error("share index {0} out of range")]
    ShareIndex(usize),
    #[error("malformed share line {line}: {reason}")]
    ShareFormat { line: usize, reason: String },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub(crate) fn check_len(what: &'static str, expected: usize, got: usize) -> Result<(), CodeError> {
    if expected != got {
        return Err(CodeError::DimensionMismatch {
            what,
            expected,
            got,
        });
    }
    Ok(())
}

pub(crate) fn check_field(v: &Vector, field: PrimeField) -> Result<(), CodeError> {
    if v.field() != field {
        return Err(FieldError::ModulusMismatch(v.field().modulus(), field.modulus()).into());
    }
    Ok(())
}

/// Parses `"a/b"`, an integer, or a finite decimal such as `"0.25"` into an
/// exact ratio.
pub fn parse_ratio(s: &str) -> Option<Ratio> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num: u64 = num.trim().parse().ok()?;
        let den: u64 = den.trim().parse().ok()?;
        if den == 0 {
            return None;
        }
        return Some(Ratio::new(num, den));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || frac.len() > 18 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let int: u64 = if int.is_empty() { 0 } else { int.parse().ok()? };
        let den = 10u64.checked_pow(frac.len() as u32)?;
        let num = int.checked_mul(den)?.checked_add(frac.parse().ok()?)?;
        return Some(Ratio::new(num, den));
    }
    s.parse().ok().map(Ratio::from_integer)
}

/// `⌊x · n⌋` for a nonnegative ratio.
pub fn floor_times(x: Ratio, n: u64) -> u64 {
    (x * Ratio::from_integer(n)).to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_parsing() {
        assert_eq!(parse_ratio("1/4"), Some(Ratio::new(1, 4)));
        assert_eq!(parse_ratio("0.25"), Some(Ratio::new(1, 4)));
        assert_eq!(parse_ratio("1.5"), Some(Ratio::new(3, 2)));
        assert_eq!(parse_ratio("2"), Some(Ratio::from_integer(2)));
        assert_eq!(parse_ratio(".5"), Some(Ratio::new(1, 2)));
        assert_eq!(parse_ratio("1/0"), None);
        assert_eq!(parse_ratio("abc"), None);
        assert_eq!(parse_ratio("-1"), None);
    }

    #[test]
    fn floors() {
        assert_eq!(floor_times(Ratio::new(1, 4), 4), 1);
        assert_eq!(floor_times(Ratio::new(1, 3), 4), 1);
        assert_eq!(floor_times(Ratio::new(1, 3), 2), 0);
    }
}
