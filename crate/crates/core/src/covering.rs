//! Covering numbers `cov(m, t, t*)`: how many `t`-subsets of `{0, …, m-1}`
//! are needed so that every `t*`-subset lies inside one of them.

use itertools::Itertools;
use num::BigInt;

use crate::error::{invalid, Error, Result};
use crate::scoring::binomial;
use crate::Rational;

/// Largest ground set supported; subsets are stored as `u64` bit masks.
pub const MAX_GROUND: usize = 64;

/// Exhaustive search refuses more than this many base sets `C(m, t)`.
pub const EXACT_COVER_CAP: u64 = 20;

/// Greedy search refuses instances with more than this many
/// `(t-set, t*-set)` pairs.
pub const GREEDY_WORK_CAP: u64 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverInstance {
    pub m: usize,
    pub t: usize,
    pub t_star: usize,
    /// Sorted `t`-subsets of `0..m`.
    pub sets: Vec<Vec<usize>>,
}

fn check_params(m: usize, t: usize, t_star: usize) -> Result<()> {
    if !(1 <= t_star && t_star <= t && t <= m) {
        return invalid(format!(
            "need 1 <= t* <= t <= m, got m={m}, t={t}, t*={t_star}"
        ));
    }
    if m > MAX_GROUND {
        return invalid(format!(
            "ground sets above {MAX_GROUND} elements are not supported"
        ));
    }
    Ok(())
}

fn mask(set: &[usize]) -> u64 {
    set.iter().fold(0, |acc, x| acc | 1 << x)
}

fn subsets(m: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..m).combinations(k)
}

impl CoverInstance {
    pub fn new(m: usize, t: usize, t_star: usize, sets: Vec<Vec<usize>>) -> Result<Self> {
        check_params(m, t, t_star)?;
        let mut normalized = Vec::with_capacity(sets.len());
        for set in sets {
            let sorted: Vec<usize> = set.into_iter().sorted().dedup().collect();
            if sorted.len() != t || sorted.iter().any(|x| *x >= m) {
                return invalid(format!("{sorted:?} is not a {t}-subset of 0..{m}"));
            }
            normalized.push(sorted);
        }
        Ok(Self {
            m,
            t,
            t_star,
            sets: normalized,
        })
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

/// `C(m, t*) / C(t, t*)` exactly.
pub fn cover_lower_bound_ratio(m: usize, t: usize, t_star: usize) -> Result<Rational> {
    check_params(m, t, t_star)?;
    Ok(Rational::new(
        BigInt::from(binomial(m, t_star)),
        BigInt::from(binomial(t, t_star)),
    ))
}

/// `⌈C(m, t*) / C(t, t*)⌉`.
pub fn cover_lower_bound(m: usize, t: usize, t_star: usize) -> Result<u64> {
    check_params(m, t, t_star)?;
    Ok(binomial(m, t_star).div_ceil(binomial(t, t_star)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverCheck {
    /// Lexicographically first `t*`-subset no listed set contains.
    pub uncovered: Option<Vec<usize>>,
}

impl CoverCheck {
    pub fn covered(&self) -> bool {
        self.uncovered.is_none()
    }
}

pub fn is_cover(instance: &CoverInstance) -> CoverCheck {
    let masks: Vec<u64> = instance.sets.iter().map(|s| mask(s)).collect();
    let uncovered = subsets(instance.m, instance.t_star).find(|small| {
        let s = mask(small);
        !masks.iter().any(|big| s & !big == 0)
    });
    CoverCheck { uncovered }
}

/// Repeatedly adds the `t`-set containing the most uncovered `t*`-sets,
/// preferring the lexicographically first on ties.
pub fn greedy_cover(m: usize, t: usize, t_star: usize) -> Result<CoverInstance> {
    check_params(m, t, t_star)?;
    let work = binomial(m, t).saturating_mul(binomial(m, t_star));
    if work > GREEDY_WORK_CAP {
        return Err(Error::CapExceeded {
            what: "greedy cover search",
            m: work as usize,
            cap: GREEDY_WORK_CAP as usize,
        });
    }
    let small: Vec<u64> = subsets(m, t_star).map(|s| mask(&s)).collect();
    let big: Vec<Vec<usize>> = subsets(m, t).collect();
    let big_masks: Vec<u64> = big.iter().map(|s| mask(s)).collect();
    let mut covered = vec![false; small.len()];
    let mut remaining = small.len();
    let mut chosen = Vec::new();
    while remaining > 0 {
        let (best, gain) = big_masks
            .iter()
            .enumerate()
            .map(|(k, b)| {
                let gain = small
                    .iter()
                    .zip(&covered)
                    .filter(|(s, done)| !**done && **s & !b == 0)
                    .count();
                (k, gain)
            })
            .fold((0, 0), |acc, x| if x.1 > acc.1 { x } else { acc });
        debug_assert!(gain > 0);
        for (s, done) in small.iter().zip(covered.iter_mut()) {
            if !*done && *s & !big_masks[best] == 0 {
                *done = true;
                remaining -= 1;
            }
        }
        chosen.push(big[best].clone());
    }
    CoverInstance::new(m, t, t_star, chosen)
}

/// A minimum cover, searching set counts upward from the lower bound and
/// combinations in lexicographic order within each count.
pub fn exact_cover(m: usize, t: usize, t_star: usize) -> Result<CoverInstance> {
    check_params(m, t, t_star)?;
    let n = binomial(m, t);
    if n > EXACT_COVER_CAP {
        return Err(Error::CapExceeded {
            what: "exhaustive cover search",
            m: n as usize,
            cap: EXACT_COVER_CAP as usize,
        });
    }
    let big: Vec<Vec<usize>> = subsets(m, t).collect();
    let big_masks: Vec<u64> = big.iter().map(|s| mask(s)).collect();
    let full = (1usize << big.len()) - 1;
    // blocked[u] holds when some t*-set lies only in base sets from u, so
    // any selection disjoint from u misses it.
    let mut blocked = vec![false; full + 1];
    for small in subsets(m, t_star) {
        let s = mask(&small);
        let holders = big_masks
            .iter()
            .enumerate()
            .filter(|(_, b)| s & !**b == 0)
            .fold(0usize, |acc, (k, _)| acc | 1 << k);
        blocked[holders] = true;
    }
    for bit in 0..big.len() {
        for u in 0..=full {
            if u >> bit & 1 == 1 && blocked[u & !(1 << bit)] {
                blocked[u] = true;
            }
        }
    }
    let start = cover_lower_bound(m, t, t_star)? as usize;
    for k in start..=big.len() {
        for combo in (0..big.len()).combinations(k) {
            let pick = combo.iter().fold(0usize, |acc, i| acc | 1 << i);
            if !blocked[full & !pick] {
                let sets = combo.into_iter().map(|i| big[i].clone()).collect();
                return CoverInstance::new(m, t, t_star, sets);
            }
        }
    }
    unreachable!("all base sets always form a cover")
}

pub fn exact_cover_size(m: usize, t: usize, t_star: usize) -> Result<usize> {
    Ok(exact_cover(m, t, t_star)?.len())
}
