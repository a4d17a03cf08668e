//! Positional scoring rules and the subspaces computable from `t`-queries.
//!
//! For query size `t` over `m` candidates the basis vectors are
//! `α^k_j = C(j-1, k-1) · C(m-j, t-k)` for `k = 1..=t`. A scoring vector's
//! winners can be computed exactly from `t`-queries iff it lies in their
//! span; [`span_membership`] decides this with exact arithmetic and
//! [`score_via_queries`] is the matching query algorithm.

use std::fmt;

use itertools::Itertools;
use num::{BigInt, Signed, Zero};

use crate::constructions::{embedded_profile, parity_pair};
use crate::error::{invalid, Error, Result};
use crate::profiles::{Candidate, CandidateSet, Profile};
use crate::queries::QuerySession;
use crate::Rational;

/// Weights `α_1..α_m` awarded to positions `1..m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ScoringVector(Vec<Rational>);

impl ScoringVector {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if weights.is_empty() {
            return invalid("a scoring vector needs at least one weight");
        }
        Ok(Self(weights))
    }

    pub fn from_ints(weights: &[i64]) -> Result<Self> {
        Self::new(
            weights
                .iter()
                .map(|w| Rational::from_integer(BigInt::from(*w)))
                .collect(),
        )
    }

    /// Parses comma separated rationals such as `1,0,-1/2`.
    pub fn parse(text: &str) -> Result<Self> {
        Self::new(
            text.split(',')
                .map(crate::rational::parse)
                .collect::<Result<Vec<_>>>()?,
        )
    }

    pub fn m(&self) -> usize {
        self.0.len()
    }

    pub fn weights(&self) -> &[Rational] {
        &self.0
    }

    pub fn dot(&self, other: &[Rational]) -> Rational {
        self.0.iter().zip(other).map(|(x, y)| x * y).sum()
    }

    /// `scale · α + shift · 𝟙`; winners are unchanged for `scale > 0`.
    pub fn affine(&self, scale: &Rational, shift: &Rational) -> Result<Self> {
        if !scale.is_positive() {
            return invalid("affine rescaling needs a positive factor");
        }
        Self::new(self.0.iter().map(|w| w * scale + shift).collect())
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all_equal()
    }
}

impl fmt::Display for ScoringVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.iter().join(","))
    }
}

fn check_dims(profile: &Profile, alpha: &ScoringVector) -> Result<()> {
    if profile.m() != alpha.m() {
        return invalid(format!(
            "scoring vector has {} weights but the profile has {} candidates",
            alpha.m(),
            profile.m()
        ));
    }
    Ok(())
}

/// Expected points of `c`, i.e. `α · pos(σ, c)`.
pub fn score(profile: &Profile, alpha: &ScoringVector, c: Candidate) -> Result<Rational> {
    check_dims(profile, alpha)?;
    Ok(alpha.dot(&profile.pos_vector(c)?))
}

/// Scores of every candidate in canonical order.
pub fn scores(profile: &Profile, alpha: &ScoringVector) -> Result<Vec<(Candidate, Rational)>> {
    check_dims(profile, alpha)?;
    profile
        .candidates()
        .ids()
        .iter()
        .map(|&c| Ok((c, score(profile, alpha, c)?)))
        .collect()
}

/// The full argmax set, in canonical candidate order.
pub fn winners(profile: &Profile, alpha: &ScoringVector) -> Result<Vec<Candidate>> {
    Ok(argmax(scores(profile, alpha)?))
}

pub(crate) fn argmax(scored: Vec<(Candidate, Rational)>) -> Vec<Candidate> {
    let Some(best) = scored.iter().map(|(_, s)| s).max().cloned() else {
        return Vec::new();
    };
    scored
        .into_iter()
        .filter(|(_, s)| *s == best)
        .map(|(c, _)| c)
        .collect()
}

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        0
    } else {
        num::integer::binomial(n as u64, k as u64)
    }
}

fn check_mtk(m: usize, t: usize, k: usize) -> Result<()> {
    if !(1 <= k && k <= t && t <= m) {
        return invalid(format!(
            "basis parameters need 1 <= k <= t <= m, got m={m}, t={t}, k={k}"
        ));
    }
    Ok(())
}

/// The `k`-th basis vector for query size `t` over `m` candidates.
pub fn basis_vector(m: usize, t: usize, k: usize) -> Result<ScoringVector> {
    check_mtk(m, t, k)?;
    ScoringVector::new(
        (1..=m)
            .map(|j| {
                let w = binomial(j - 1, k - 1) * binomial(m - j, t - k);
                Rational::from_integer(BigInt::from(w))
            })
            .collect(),
    )
}

/// The `t` basis vectors spanning the `t`-computable scoring vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisFamily {
    pub m: usize,
    pub t: usize,
    pub vectors: Vec<ScoringVector>,
}

impl BasisFamily {
    pub fn new(m: usize, t: usize) -> Result<Self> {
        check_mtk(m, t, 1)?;
        let vectors = (1..=t)
            .map(|k| basis_vector(m, t, k))
            .collect::<Result<_>>()?;
        Ok(Self { m, t, vectors })
    }

    /// `Σ λ_k α^k`.
    pub fn combine(&self, coefficients: &[Rational]) -> Result<ScoringVector> {
        if coefficients.len() != self.t {
            return invalid("need one coefficient per basis vector");
        }
        let mut out = vec![Rational::zero(); self.m];
        for (lambda, v) in coefficients.iter().zip(&self.vectors) {
            for (o, w) in out.iter_mut().zip(v.weights()) {
                *o += lambda * w;
            }
        }
        ScoringVector::new(out)
    }
}

/// Outcome of testing whether `α` lies in the span for query size `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpanDecision {
    /// `α = Σ λ_k α^k` exactly.
    Member { coefficients: Vec<Rational> },
    /// `α` minus its best triangular fit; zero in the first `t` entries and
    /// nonzero somewhere after, which certifies non-membership.
    NotMember { residual: Vec<Rational> },
}

impl SpanDecision {
    pub fn is_member(&self) -> bool {
        matches!(self, Self::Member { .. })
    }

    pub fn coefficients(&self) -> Option<&[Rational]> {
        match self {
            Self::Member { coefficients } => Some(coefficients),
            Self::NotMember { .. } => None,
        }
    }

    pub fn residual(&self) -> Option<&[Rational]> {
        match self {
            Self::Member { .. } => None,
            Self::NotMember { residual } => Some(residual),
        }
    }
}

/// Exact span test.
///
/// Row `k` of the basis is zero before column `k` and positive at it, so
/// the first `t` coordinates of `α` determine the only candidate
/// coefficients by forward substitution. `α` is a member iff they also
/// reproduce the remaining `m - t` coordinates.
pub fn span_membership(alpha: &ScoringVector, t: usize) -> Result<SpanDecision> {
    let m = alpha.m();
    let basis = BasisFamily::new(m, t)?;
    let mut coefficients: Vec<Rational> = Vec::with_capacity(t);
    for j in 0..t {
        let known: Rational = coefficients
            .iter()
            .zip(&basis.vectors)
            .map(|(lambda, v)| lambda * &v.weights()[j])
            .sum();
        let pivot = &basis.vectors[j].weights()[j];
        coefficients.push((&alpha.weights()[j] - known) / pivot);
    }
    let fit = basis.combine(&coefficients)?;
    let residual: Vec<Rational> = alpha
        .weights()
        .iter()
        .zip(fit.weights())
        .map(|(a, f)| a - f)
        .collect();
    if residual.iter().all(Zero::is_zero) {
        Ok(SpanDecision::Member { coefficients })
    } else {
        Ok(SpanDecision::NotMember { residual })
    }
}

/// Smallest `t` whose span contains `α`; always at most `m`.
pub fn minimal_query_size(alpha: &ScoringVector) -> usize {
    (1..=alpha.m())
        .find(|&t| {
            span_membership(alpha, t)
                .map(|d| d.is_member())
                .unwrap_or(false)
        })
        .unwrap_or(alpha.m())
}

/// Basis-vector scores of `c` read off `t`-query responses: entry `k-1` is
/// `Σ_S Pr[σ|_S(k) = c]` over all `t`-subsets `S`.
fn basis_scores_via_queries(session: &mut QuerySession, c: Candidate) -> Result<Vec<Rational>> {
    let t = session.max_size();
    let subsets = session.candidates().subsets_of_size(t);
    let mut out = vec![Rational::zero(); t];
    for subset in subsets {
        let response = session.query_cached(&subset)?;
        for (ranking, p) in response.support() {
            if let Some(k) = ranking.position(c) {
                out[k] += p;
            }
        }
    }
    Ok(out)
}

/// Computes `score(σ, α, c)` for the hidden profile using only the session's
/// queries. Responses already in the session log are reused.
pub fn score_via_queries(
    session: &mut QuerySession,
    alpha: &ScoringVector,
    c: Candidate,
) -> Result<Rational> {
    let t = session.max_size();
    if alpha.m() != session.candidates().len() {
        return invalid("scoring vector length differs from the candidate count");
    }
    if !session.candidates().contains(c) {
        return invalid(format!("candidate {c} is not in the session"));
    }
    let decision = span_membership(alpha, t)?;
    let Some(lambda) = decision.coefficients() else {
        return Err(Error::NotComputable { t });
    };
    let basis = basis_scores_via_queries(session, c)?;
    Ok(lambda.iter().zip(&basis).map(|(l, s)| l * s).sum())
}

/// Winner set of the hidden profile computed from `t`-queries only.
pub fn winner_via_queries(
    session: &mut QuerySession,
    alpha: &ScoringVector,
) -> Result<Vec<Candidate>> {
    let ids = session.candidates().ids().to_vec();
    let scored = ids
        .into_iter()
        .map(|c| Ok((c, score_via_queries(session, alpha, c)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(argmax(scored))
}

/// Evidence that `α` separates `a` from `b` on one of the embedded profiles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparationCertificate {
    /// 1-based embedding index with a nonzero score gap.
    pub index: usize,
    pub a: Candidate,
    pub b: Candidate,
    /// `s^i = pos(σ^i, a) - pos(σ^i, b)` for every `i` in `1..=m-t`.
    pub differences: Vec<Vec<Rational>>,
    /// `score(σ^index, a) - score(σ^index, b)`.
    pub gap: Rational,
    /// The separating profile `σ^index`.
    pub profile: Profile,
}

/// Finds an embedding index on which `α` tells `a` and `b` apart, for an `α`
/// outside the `t`-computable span. `c1` holds the `t + 1` candidates of the
/// embedded parity construction; the others keep canonical order around it.
pub fn separating_index(
    candidates: &CandidateSet,
    alpha: &ScoringVector,
    t: usize,
    c1: &[Candidate],
    a: Candidate,
    b: Candidate,
) -> Result<SeparationCertificate> {
    let m = candidates.len();
    if alpha.m() != m {
        return invalid("scoring vector length differs from the candidate count");
    }
    if t == 0 || t >= m {
        return invalid(format!("separation needs 1 <= t < m, got t = {t}"));
    }
    if span_membership(alpha, t)?.is_member() {
        return invalid(format!(
            "{alpha} is computable with queries of size {t}; nothing to separate"
        ));
    }
    let c1 = candidates.normalize_subset(c1)?;
    if c1.len() != t + 1 {
        return invalid(format!(
            "the embedded block needs t + 1 = {} candidates",
            t + 1
        ));
    }
    if a == b || !c1.contains(&a) || !c1.contains(&b) {
        return invalid("a and b must be distinct members of the embedded block");
    }
    let inner = parity_pair(&candidates.subset(&c1)?, a, b)?.profile;
    let c2 = candidates.complement(&c1);
    let mut differences = Vec::with_capacity(m - t);
    let mut found = None;
    for i in 1..=m - t {
        let profile = embedded_profile(candidates, &c1, &c2, i, &inner)?;
        let s: Vec<Rational> = profile
            .pos_vector(a)?
            .into_iter()
            .zip(profile.pos_vector(b)?)
            .map(|(x, y)| x - y)
            .collect();
        let gap = alpha.dot(&s);
        if found.is_none() && !gap.is_zero() {
            found = Some((i, gap, profile));
        }
        differences.push(s);
    }
    let Some((index, gap, profile)) = found else {
        return invalid("no embedding index separates a and b");
    };
    Ok(SeparationCertificate {
        index,
        a,
        b,
        differences,
        gap,
        profile,
    })
}

/// A scoring vector normalized into the probability simplex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SimplexPoint {
    /// All weights equal: every candidate always ties.
    Constant,
    Point(Vec<Rational>),
}

/// Translates so the minimum weight is zero, then scales to sum one.
pub fn simplex_coordinates(alpha: &ScoringVector) -> SimplexPoint {
    let min = alpha
        .weights()
        .iter()
        .min()
        .cloned()
        .expect("nonempty vector");
    let shifted: Vec<Rational> = alpha.weights().iter().map(|w| w - &min).collect();
    let total: Rational = shifted.iter().sum();
    if total.is_zero() {
        return SimplexPoint::Constant;
    }
    SimplexPoint::Point(shifted.into_iter().map(|w| w / &total).collect())
}
