//! Size-limited access to a hidden profile.
//!
//! [`QuerySession`] is the idealized oracle: a query on `Q` returns the exact
//! distribution `σ|_Q`. [`SampledSession`] instead draws individual voters.
//! [`indistinguishable`] decides whether two profiles agree on every query
//! of a given size.

use std::collections::BTreeMap;

use num::bigint::RandBigInt;
use num::{BigInt, Integer, One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::profiles::{Candidate, CandidateSet, MassAccumulator, Profile, Ranking};
use crate::Rational;

/// A nonempty candidate subset, stored in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Query(Vec<Candidate>);

impl Query {
    pub fn new(candidates: &CandidateSet, members: &[Candidate]) -> Result<Self> {
        Ok(Self(candidates.normalize_subset(members)?))
    }

    pub fn members(&self) -> &[Candidate] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn check_t(m: usize, t: usize) -> Result<()> {
    if t == 0 || t > m {
        return invalid(format!("query size t = {t} must lie in 1..={m}"));
    }
    Ok(())
}

/// Exact oracle over a hidden profile with maximum query size `t`.
#[derive(Debug, Clone)]
pub struct QuerySession {
    hidden: Profile,
    max_size: usize,
    log: Vec<Query>,
    responses: BTreeMap<Query, Profile>,
}

impl QuerySession {
    pub fn open(hidden: Profile, t: usize) -> Result<Self> {
        check_t(hidden.m(), t)?;
        Ok(Self {
            hidden,
            max_size: t,
            log: Vec::new(),
            responses: BTreeMap::new(),
        })
    }

    pub fn max_size(&self) -> usize {
        self.max_size
    }

    pub fn candidates(&self) -> &CandidateSet {
        self.hidden.candidates()
    }

    pub fn log(&self) -> &[Query] {
        &self.log
    }

    pub fn query_count(&self) -> usize {
        self.log.len()
    }

    fn validate(&self, members: &[Candidate]) -> Result<Query> {
        let q = Query::new(self.hidden.candidates(), members)?;
        if q.len() > self.max_size {
            return Err(Error::QueryTooLarge {
                size: q.len(),
                max: self.max_size,
            });
        }
        Ok(q)
    }

    /// Issues a query and logs it, even when the subset was asked before.
    pub fn query(&mut self, members: &[Candidate]) -> Result<Profile> {
        let q = self.validate(members)?;
        let response = match self.responses.get(&q) {
            Some(r) => r.clone(),
            None => self.hidden.restrict(q.members())?,
        };
        self.responses.insert(q.clone(), response.clone());
        self.log.push(q);
        Ok(response)
    }

    /// Returns the logged response when this subset was already asked, and
    /// issues a fresh query otherwise.
    pub fn query_cached(&mut self, members: &[Candidate]) -> Result<Profile> {
        let q = self.validate(members)?;
        if let Some(r) = self.responses.get(&q) {
            return Ok(r.clone());
        }
        self.query(members)
    }

    /// The log paired with responses, in issue order.
    pub fn transcript(&self) -> Vec<(Query, Profile)> {
        self.log
            .iter()
            .map(|q| (q.clone(), self.responses[q].clone()))
            .collect()
    }
}

/// Result of one sampled query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleOutcome {
    pub empirical: Profile,
    /// Total-variation distance between `empirical` and the exact restriction.
    pub tv_distance: Rational,
}

/// Oracle returning `n` sampled voters restricted to the query.
///
/// Query number `k` (0-based, counting accepted queries) draws from
/// `ChaCha8Rng::seed_from_u64(seed)` switched to stream `k`, so a fixed seed
/// and call sequence always reproduce the same samples.
#[derive(Debug, Clone)]
pub struct SampledSession {
    hidden: Profile,
    max_size: usize,
    seed: u64,
    log: Vec<(Query, usize)>,
}

impl SampledSession {
    pub fn open(hidden: Profile, t: usize, seed: u64) -> Result<Self> {
        check_t(hidden.m(), t)?;
        Ok(Self {
            hidden,
            max_size: t,
            seed,
            log: Vec::new(),
        })
    }

    pub fn log(&self) -> &[(Query, usize)] {
        &self.log
    }

    pub fn query_count(&self) -> usize {
        self.log.len()
    }

    pub fn sample_query(&mut self, members: &[Candidate], n: usize) -> Result<SampleOutcome> {
        let q = Query::new(self.hidden.candidates(), members)?;
        if q.len() > self.max_size {
            return Err(Error::QueryTooLarge {
                size: q.len(),
                max: self.max_size,
            });
        }
        if n == 0 {
            return invalid("sample count must be at least 1");
        }
        let exact = self.hidden.restrict(q.members())?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.log.len() as u64);

        // Draw integer tickets below the common denominator so sampling is exact.
        let denom = exact
            .support()
            .fold(BigInt::one(), |acc, (_, p)| acc.lcm(p.denom()));
        let mut cumulative = Vec::with_capacity(exact.support_len());
        let mut running = BigInt::zero();
        for (ranking, p) in exact.support() {
            running += p.numer() * (&denom / p.denom());
            cumulative.push((running.clone(), ranking.clone()));
        }
        let mut counts: BTreeMap<Ranking, usize> = BTreeMap::new();
        for _ in 0..n {
            let ticket = rng.gen_bigint_range(&BigInt::zero(), &denom);
            let idx = cumulative.partition_point(|(upper, _)| *upper <= ticket);
            *counts.entry(cumulative[idx].1.clone()).or_default() += 1;
        }

        let mut acc = MassAccumulator::new(exact.candidates().clone());
        for (ranking, count) in counts {
            acc.add(ranking, Rational::new(BigInt::from(count), BigInt::from(n)));
        }
        let empirical = acc.finish()?;
        let tv_distance = total_variation(&empirical, &exact);
        self.log.push((q, n));
        Ok(SampleOutcome {
            empirical,
            tv_distance,
        })
    }
}

/// Half the L1 distance between two profiles over the same candidates.
pub fn total_variation(p: &Profile, q: &Profile) -> Rational {
    let mut keys: Vec<&Ranking> = p
        .support()
        .map(|(r, _)| r)
        .chain(q.support().map(|(r, _)| r))
        .collect();
    keys.sort();
    keys.dedup();
    let sum: Rational = keys
        .into_iter()
        .map(|r| (p.probability(r) - q.probability(r)).abs())
        .sum();
    sum / Rational::from_integer(BigInt::from(2))
}

/// A query and ranking on which two profiles disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub query: Query,
    pub ranking: Ranking,
    pub first: Rational,
    pub second: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndistinguishabilityReport {
    pub t: usize,
    /// First disagreement in canonical order; `None` iff indistinguishable.
    pub witness: Option<Witness>,
}

impl IndistinguishabilityReport {
    pub fn indistinguishable(&self) -> bool {
        self.witness.is_none()
    }
}

/// Exact `t`-indistinguishability test over all subsets of size exactly `t`.
///
/// Subsets are checked in parallel; the reported witness is always the
/// lexicographically first failing subset and, within it, the first
/// disagreeing ranking.
pub fn indistinguishable(
    first: &Profile,
    second: &Profile,
    t: usize,
) -> Result<IndistinguishabilityReport> {
    if first.candidates() != second.candidates() {
        return invalid("compared profiles have different candidate sets");
    }
    check_t(first.m(), t)?;
    let subsets = first.candidates().subsets_of_size(t);
    let witness = subsets.par_iter().find_map_first(|members| {
        let p = first
            .restrict(members)
            .expect("subset of the candidate set");
        let q = second
            .restrict(members)
            .expect("subset of the candidate set");
        if p == q {
            return None;
        }
        let mut keys: Vec<&Ranking> = p
            .support()
            .map(|(r, _)| r)
            .chain(q.support().map(|(r, _)| r))
            .collect();
        keys.sort();
        keys.into_iter().find_map(|r| {
            let (a, b) = (p.probability(r), q.probability(r));
            (a != b).then(|| Witness {
                query: Query(members.clone()),
                ranking: r.clone(),
                first: a,
                second: b,
            })
        })
    });
    Ok(IndistinguishabilityReport { t, witness })
}

/// Largest `t` for which the two profiles are `t`-indistinguishable
/// (0 when they already differ on singletons, which cannot happen for
/// profiles over the same set).
pub fn max_indistinguishable_size(first: &Profile, second: &Profile) -> Result<usize> {
    let mut best = 0;
    for t in 1..=first.m() {
        if indistinguishable(first, second, t)?.indistinguishable() {
            best = t;
        } else {
            break;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn setup() -> (CandidateSet, Profile) {
        let set = CandidateSet::letters(3).unwrap();
        let p = Profile::new(
            set.clone(),
            [
                (Ranking::parse("a>b>c", &set).unwrap(), frac(1, 2)),
                (Ranking::parse("c>b>a", &set).unwrap(), frac(1, 2)),
            ],
        )
        .unwrap();
        (set, p)
    }

    #[test]
    fn open_session_bounds() {
        let (set, p) = setup();
        assert!(QuerySession::open(p.clone(), 0).is_err());
        assert!(QuerySession::open(p.clone(), 4).is_err());
        let mut full = QuerySession::open(p.clone(), 3).unwrap();
        assert_eq!(full.query(set.ids()).unwrap(), p);
        let mut single = QuerySession::open(p, 1).unwrap();
        let resp = single.query(&[Candidate(2)]).unwrap();
        assert_eq!(resp.support_len(), 1);
    }

    #[test]
    fn query_returns_restriction() {
        let (set, p) = setup();
        let mut s = QuerySession::open(p, 2).unwrap();
        let got = s.query(&[Candidate(1), Candidate(2)]).unwrap();
        let bc = set.subset(&[Candidate(1), Candidate(2)]).unwrap();
        assert_eq!(got, Profile::uniform(&bc).unwrap());
        assert_eq!(
            s.query(set.ids()),
            Err(Error::QueryTooLarge { size: 3, max: 2 })
        );
        assert_eq!(s.query_count(), 1);
    }

    #[test]
    fn query_count_and_cache() {
        let (_, p) = setup();
        let mut s = QuerySession::open(p, 2).unwrap();
        assert_eq!(s.query_count(), 0);
        s.query(&[Candidate(0), Candidate(1)]).unwrap();
        s.query(&[Candidate(0), Candidate(2)]).unwrap();
        s.query(&[Candidate(0), Candidate(1)]).unwrap();
        assert_eq!(s.query_count(), 3);
        s.query_cached(&[Candidate(1), Candidate(0)]).unwrap();
        assert_eq!(s.query_count(), 3);
        assert!(s
            .query(&[Candidate(0), Candidate(1), Candidate(2)])
            .is_err());
        assert_eq!(s.query_count(), 3);
        assert_eq!(s.transcript().len(), 3);
    }

    #[test]
    fn parity_pair_indistinguishability() {
        let (_, p) = setup();
        let swapped = p.transpose(Candidate(0), Candidate(1)).unwrap();
        assert!(indistinguishable(&p, &swapped, 2)
            .unwrap()
            .indistinguishable());
        let report = indistinguishable(&p, &swapped, 3).unwrap();
        let w = report.witness.unwrap();
        assert_eq!(
            w.query.members(),
            &[Candidate(0), Candidate(1), Candidate(2)]
        );
        assert_ne!(w.first, w.second);
        assert!(indistinguishable(&p, &p, 3).unwrap().indistinguishable());
        assert_eq!(max_indistinguishable_size(&p, &swapped).unwrap(), 2);
        let other = Profile::uniform(&CandidateSet::letters(2).unwrap()).unwrap();
        assert!(indistinguishable(&p, &other, 1).is_err());
    }

    #[test]
    fn sampling_is_deterministic() {
        let set = CandidateSet::letters(3).unwrap();
        let unif = Profile::uniform(&set).unwrap();
        let run = || {
            let mut s = SampledSession::open(unif.clone(), 2, 42).unwrap();
            let a = s.sample_query(&[Candidate(0), Candidate(1)], 50).unwrap();
            let b = s.sample_query(&[Candidate(1), Candidate(2)], 50).unwrap();
            (a, b)
        };
        assert_eq!(run(), run());
        let mut s = SampledSession::open(unif.clone(), 2, 7).unwrap();
        let one = s.sample_query(&[Candidate(0), Candidate(2)], 1).unwrap();
        assert_eq!(one.empirical.support_len(), 1);
        assert_eq!(one.tv_distance, frac(1, 2));
        assert!(s.sample_query(set.ids(), 10).is_err());
        assert!(s.sample_query(&[Candidate(0)], 0).is_err());
        assert_eq!(s.query_count(), 1);
    }

    #[test]
    fn sampling_converges_on_average() {
        let set = CandidateSet::letters(3).unwrap();
        let unif = Profile::uniform(&set).unwrap();
        let mean_tv = |n: usize| {
            let total: f64 = (0..20u64)
                .map(|seed| {
                    let mut s = SampledSession::open(unif.clone(), 3, seed).unwrap();
                    crate::rational::to_f64(&s.sample_query(set.ids(), n).unwrap().tv_distance)
                })
                .sum();
            total / 20.0
        };
        let (small, large) = (mean_tv(10), mean_tv(2000));
        assert!(
            large < small,
            "tv at n=2000 ({large}) not below n=10 ({small})"
        );
    }

    #[test]
    fn sampling_respects_zero_mass() {
        let (set, p) = setup();
        let mut s = SampledSession::open(p, 3, 3).unwrap();
        let out = s.sample_query(set.ids(), 200).unwrap();
        assert!(out.empirical.support_len() <= 2);
        assert!(out.tv_distance >= Rational::zero());
    }
}
