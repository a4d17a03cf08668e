//! Voting with size-limited preference queries.
//!
//! Profiles are exact probability distributions over strict rankings. A
//! [`queries::QuerySession`] hides a profile and only answers restrictions of
//! it to small candidate subsets. On top of that the crate provides positional
//! scoring rules and the span test deciding which of them are computable from
//! `t`-sized queries, STV and Condorcet procedures, the adversarial profile
//! families showing the limits of the query model, and covering-number tools
//! for query-complexity accounting.
//!
//! All arithmetic is exact: probabilities and scores are [`Rational`]s.

pub mod constructions;
pub mod covering;
mod error;
pub mod format;
pub mod profiles;
pub mod queries;
pub mod rules;
pub mod scoring;

pub use error::{Error, Result};
pub use profiles::{Candidate, CandidateSet, Permutation, Profile, Ranking};
pub use scoring::ScoringVector;

/// Exact arbitrary-precision rational, always in lowest terms.
pub type Rational = num::BigRational;

/// Largest candidate count for which operations enumerating all `m!`
/// rankings or permutations will run. Override with `ELICIT_MAX_M`.
pub const DEFAULT_ENUMERATION_CAP: usize = 8;

/// Name of the environment variable overriding [`DEFAULT_ENUMERATION_CAP`].
pub const ENUMERATION_CAP_ENV: &str = "ELICIT_MAX_M";

/// Current enumeration cap, read from the environment on every call.
pub fn enumeration_cap() -> usize {
    std::env::var(ENUMERATION_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_ENUMERATION_CAP)
}

pub(crate) fn check_cap(what: &'static str, m: usize) -> Result<()> {
    let cap = enumeration_cap();
    if m > cap {
        return Err(Error::CapExceeded { what, m, cap });
    }
    Ok(())
}

/// Small helpers for building rationals.
pub mod rational {
    use super::Rational;
    use num::{BigInt, One, Zero};

    pub fn int(n: i64) -> Rational {
        Rational::from_integer(BigInt::from(n))
    }

    pub fn frac(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    pub fn zero() -> Rational {
        Rational::zero()
    }

    pub fn one() -> Rational {
        Rational::one()
    }

    /// Formats as `numerator/denominator`, including `/1` for integers.
    pub fn to_ratio_string(value: &Rational) -> String {
        format!("{}/{}", value.numer(), value.denom())
    }

    /// Lossy conversion for display and statistics.
    pub fn to_f64(value: &Rational) -> f64 {
        use num::ToPrimitive;
        value.to_f64().unwrap_or(f64::NAN)
    }

    /// Parses `p/q` or a bare integer `p`.
    pub fn parse(text: &str) -> crate::Result<Rational> {
        let text = text.trim();
        let bad = || crate::Error::Parse(format!("not a rational: {text:?}"));
        let (numer, denom) = match text.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (text, "1"),
        };
        let numer: BigInt = numer.parse().map_err(|_| bad())?;
        let denom: BigInt = denom.parse().map_err(|_| bad())?;
        if denom.is_zero() {
            return Err(bad());
        }
        Ok(Rational::new(numer, denom))
    }
}
