//! Profile families that defeat size-limited queries.
//!
//! Every random generating process here is expanded exactly into a single
//! [`Profile`] by enumerating all of its branches.

use itertools::Itertools;
use num::{BigInt, One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::profiles::{Candidate, CandidateSet, MassAccumulator, Permutation, Profile, Ranking};
use crate::queries::{indistinguishable, Witness};
use crate::scoring::{self, minimal_query_size, separating_index, ScoringVector};
use crate::Rational;

fn factorial(n: usize) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

fn ratio(n: impl Into<BigInt>, d: impl Into<BigInt>) -> Rational {
    Rational::new(n.into(), d.into())
}

/// A profile whose plurality scores for `a` and `b` differ although it
/// cannot be told apart from its `a ↔ b` swap by any query missing a
/// candidate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityPair {
    pub a: Candidate,
    pub b: Candidate,
    pub profile: Profile,
    pub transposed: Profile,
}

/// Draw `S` uniformly from the subsets of `C \ {a, b}`, then output
/// `τ^S ≻ a ≻ b ≻ τ^{S̄}` if `|S|` is even and `τ^S ≻ b ≻ a ≻ τ^{S̄}` if odd,
/// with both sides in uniformly random order.
pub fn parity_pair(candidates: &CandidateSet, a: Candidate, b: Candidate) -> Result<ParityPair> {
    if a == b {
        return invalid("parity pair needs two distinct candidates");
    }
    if !candidates.contains(a) || !candidates.contains(b) {
        return invalid("a and b must belong to the candidate set");
    }
    crate::check_cap("building the parity pair", candidates.len())?;
    let rest = candidates.complement(&[a, b]);
    let subsets = 1usize << rest.len();
    let mut acc = MassAccumulator::new(candidates.clone());
    for mask in 0..subsets {
        let (inside, outside): (Vec<Candidate>, Vec<Candidate>) =
            rest.iter().enumerate().partition_map(|(k, c)| {
                if mask >> k & 1 == 1 {
                    itertools::Either::Left(*c)
                } else {
                    itertools::Either::Right(*c)
                }
            });
        let middle = if inside.len() % 2 == 0 {
            [a, b]
        } else {
            [b, a]
        };
        let p = ratio(
            1,
            BigInt::from(subsets) * factorial(inside.len()) * factorial(outside.len()),
        );
        for head in inside.iter().copied().permutations(inside.len()) {
            for tail in outside.iter().copied().permutations(outside.len()) {
                let order = head.iter().chain(&middle).chain(&tail).copied().collect();
                acc.add(Ranking::new(order)?, p.clone());
            }
        }
    }
    let profile = acc.finish()?;
    let transposed = profile.transpose(a, b)?;
    Ok(ParityPair {
        a,
        b,
        profile,
        transposed,
    })
}

/// Profiles `σ^c`, one per candidate, each won uniquely by `c` and all
/// `t`-indistinguishable from the uniform profile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WinnerFamily {
    pub alpha: ScoringVector,
    pub t: usize,
    /// Oriented so that `score(σ, a) > score(σ, b)`.
    pub a: Candidate,
    pub b: Candidate,
    pub profiles: Vec<(Candidate, Profile)>,
    /// The same process without the swap branch.
    pub uniform: Profile,
}

impl WinnerFamily {
    pub fn profile(&self, c: Candidate) -> Option<&Profile> {
        self.profiles.iter().find(|(d, _)| *d == c).map(|(_, p)| p)
    }
}

/// `σ^c = (1/m!) Σ_π (π(b) = c ? π ∘ σ^{a↔b} : π ∘ σ)`.
///
/// Requires `score(σ, a) ≠ score(σ, b)` and `σ`, `σ^{a↔b}` to be
/// `t`-indistinguishable; both are checked.
pub fn winner_family(
    sigma: &Profile,
    a: Candidate,
    b: Candidate,
    alpha: &ScoringVector,
    t: usize,
) -> Result<WinnerFamily> {
    let candidates = sigma.candidates().clone();
    let score_a = scoring::score(sigma, alpha, a)?;
    let score_b = scoring::score(sigma, alpha, b)?;
    if score_a == score_b {
        return invalid(format!(
            "a and b have the same score {score_a}; the family needs distinct scores"
        ));
    }
    let swapped = sigma.transpose(a, b)?;
    let report = indistinguishable(sigma, &swapped, t)?;
    if let Some(w) = report.witness {
        return invalid(format!(
            "the profile and its a<->b swap differ on query {{{}}}: {}",
            w.query
                .members()
                .iter()
                .map(|c| candidates.name(*c))
                .join(","),
            w.ranking.display(&candidates.subset(w.query.members())?)
        ));
    }
    let (a, b) = if score_a > score_b { (a, b) } else { (b, a) };
    let perms = Permutation::all(&candidates)?;
    let weight = ratio(1, factorial(candidates.len()));
    let build = |swap_when: Option<Candidate>| -> Result<Profile> {
        let mut acc = MassAccumulator::new(candidates.clone());
        for pi in &perms {
            let source = match swap_when {
                Some(c) if pi.apply(b) == c => &swapped,
                _ => sigma,
            };
            for (ranking, p) in source.support() {
                acc.add(pi.permute_unchecked(ranking), p * &weight);
            }
        }
        acc.finish()
    };
    let profiles = candidates
        .ids()
        .par_iter()
        .map(|&c| Ok((c, build(Some(c))?)))
        .collect::<Result<Vec<_>>>()?;
    let uniform = build(None)?;
    Ok(WinnerFamily {
        alpha: alpha.clone(),
        t,
        a,
        b,
        profiles,
        uniform,
    })
}

/// `σ^i` over `C1 ∪ C2`: the first `i - 1` members of `c2` in order, then
/// a ranking of `inner`, then the rest of `c2`.
pub fn embedded_profile(
    candidates: &CandidateSet,
    c1: &[Candidate],
    c2: &[Candidate],
    i: usize,
    inner: &Profile,
) -> Result<Profile> {
    let c1 = candidates.normalize_subset(c1)?;
    let mut all: Vec<Candidate> = c1.iter().chain(c2).copied().collect();
    all.sort_unstable();
    if all != candidates.ids() {
        return invalid("the two blocks must partition the candidate set");
    }
    if inner.candidates().ids() != c1.as_slice() {
        return invalid("the inner profile must rank exactly the first block");
    }
    if i == 0 || i > c2.len() + 1 {
        return invalid(format!(
            "embedding index {i} is outside 1..={}",
            c2.len() + 1
        ));
    }
    let (before, after) = c2.split_at(i - 1);
    let mut acc = MassAccumulator::new(candidates.clone());
    for (ranking, p) in inner.support() {
        let order = before
            .iter()
            .chain(ranking.order())
            .chain(after)
            .copied()
            .collect();
        acc.add(Ranking::new(order)?, p.clone());
    }
    acc.finish()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StvFamilyParams {
    /// `cycle[k] → cycle[k + 1]`, closing back to `cycle[0]`.
    pub cycle: Vec<Candidate>,
    /// Rankings whose first and last candidates are consecutive in the cycle.
    pub ranked_set: Vec<Ranking>,
    pub epsilon: Rational,
}

impl StvFamilyParams {
    pub fn next(&self, c: Candidate) -> Candidate {
        let k = self
            .cycle
            .iter()
            .position(|d| *d == c)
            .expect("candidate on the cycle");
        self.cycle[(k + 1) % self.cycle.len()]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StvFamily {
    pub params: StvFamilyParams,
    /// Uniform over `params.ranked_set`.
    pub cyclic: Profile,
    pub profiles: Vec<(Candidate, Profile)>,
}

impl StvFamily {
    pub fn profile(&self, c: Candidate) -> Option<&Profile> {
        self.profiles.iter().find(|(d, _)| *d == c).map(|(_, p)| p)
    }
}

/// `σ_STV^c = ε · σ^{next(c)} + (1 - ε) · Unif(R)`, with `σ^{·}` the winner
/// family for `(-1, 0, …, 0)` and the cycle in canonical order. The default
/// `ε` is `1/m²`.
pub fn stv_family(candidates: &CandidateSet, epsilon: Option<Rational>) -> Result<StvFamily> {
    let m = candidates.len();
    if m < 3 {
        return invalid("the STV family needs at least three candidates");
    }
    let epsilon = epsilon.unwrap_or_else(|| ratio(1, m * m));
    let bound = (Rational::one() - &epsilon) / ratio(m * (m - 1), 1);
    if !epsilon.is_positive() || epsilon >= bound {
        return invalid(format!(
            "epsilon {epsilon} must satisfy 0 < epsilon < (1 - epsilon)/(m(m-1))"
        ));
    }
    let cycle = candidates.ids().to_vec();
    let next = |c: Candidate| cycle[(cycle.iter().position(|d| *d == c).unwrap() + 1) % m];
    let ranked_set: Vec<Ranking> = candidates
        .rankings()?
        .into_iter()
        .filter(|r| r.order()[m - 1] == next(r.order()[0]))
        .collect();
    let cyclic = Profile::uniform_over(candidates.clone(), ranked_set.clone())?;

    let (a, b) = (cycle[0], cycle[1]);
    let pair = parity_pair(candidates, a, b)?;
    let mut weights = vec![Rational::zero(); m];
    weights[0] = -Rational::one();
    let alpha = ScoringVector::new(weights)?;
    let family = winner_family(&pair.profile, a, b, &alpha, m - 1)?;

    let rest = Rational::one() - &epsilon;
    let profiles = cycle
        .iter()
        .map(|&c| {
            let inner = family
                .profile(next(c))
                .expect("family covers every candidate");
            let p = crate::profiles::mix([(inner, epsilon.clone()), (&cyclic, rest.clone())])?;
            Ok((c, p))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(StvFamily {
        params: StvFamilyParams {
            cycle,
            ranked_set,
            epsilon,
        },
        cyclic,
        profiles,
    })
}

/// A profile on which `b` wins uniquely while every query not containing
/// all of `c1` sees the uniform distribution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryComplexityInstance {
    pub alpha: ScoringVector,
    pub t_star: usize,
    pub c1: Vec<Candidate>,
    /// Oriented so that `score(σ^i, a) > score(σ^i, b)`.
    pub a: Candidate,
    pub b: Candidate,
    /// Embedding index of the separating profile.
    pub index: usize,
    pub separating: Profile,
    pub profile: Profile,
}

/// Mixes over all permutations `π`: `π ∘ (σ^i)^{a↔b}` when `π` fixes `c1`
/// pointwise, `π ∘ σ^i` otherwise. `a` and `b` are the first two members
/// of `c1`, swapped if needed to orient the score gap.
pub fn query_complexity_instance(
    alpha: &ScoringVector,
    candidates: &CandidateSet,
    c1: &[Candidate],
) -> Result<QueryComplexityInstance> {
    if alpha.m() != candidates.len() {
        return invalid("scoring vector length differs from the candidate count");
    }
    let t_star = minimal_query_size(alpha);
    if t_star < 2 {
        return invalid("constant scoring vectors have no hard instance");
    }
    let c1 = candidates.normalize_subset(c1)?;
    if c1.len() != t_star {
        return invalid(format!(
            "the fixed block needs exactly t* = {t_star} candidates"
        ));
    }
    let cert = separating_index(candidates, alpha, t_star - 1, &c1, c1[0], c1[1])?;
    let (a, b) = if cert.gap.is_positive() {
        (c1[0], c1[1])
    } else {
        (c1[1], c1[0])
    };
    let separating = cert.profile;
    let swapped = separating.transpose(a, b)?;
    let weight = ratio(1, factorial(candidates.len()));
    let mut acc = MassAccumulator::new(candidates.clone());
    for pi in Permutation::all(candidates)? {
        let source = if pi.fixes(&c1) { &swapped } else { &separating };
        for (ranking, p) in source.support() {
            acc.add(pi.permute_unchecked(ranking), p * &weight);
        }
    }
    Ok(QueryComplexityInstance {
        alpha: alpha.clone(),
        t_star,
        c1,
        a,
        b,
        index: cert.index,
        separating,
        profile: acc.finish()?,
    })
}

/// `min(δ + 1/m, δ + (1 - δ)/t*)`.
pub fn bound_success_probability(delta: &Rational, m: usize, t_star: usize) -> Result<Rational> {
    if delta.is_negative() || *delta > Rational::one() {
        return invalid(format!("delta {delta} is outside [0, 1]"));
    }
    if t_star < 2 || t_star > m {
        return invalid(format!("need 2 <= t* <= m, got t* = {t_star}, m = {m}"));
    }
    let first = delta + ratio(1, m);
    let second = delta + (Rational::one() - delta) / ratio(t_star, 1);
    Ok(first.min(second))
}

/// Result of checking that a family could fool every query algorithm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyCheck {
    /// First pair of members that some `t`-query tells apart.
    pub distinguishable: Option<(Candidate, Candidate, Witness)>,
    /// Members whose winner set is not exactly their own label.
    pub wrong_winners: Vec<(Candidate, Vec<Candidate>)>,
}

impl FamilyCheck {
    pub fn passed(&self) -> bool {
        self.distinguishable.is_none() && self.wrong_winners.is_empty()
    }
}

/// Checks that the members are pairwise `t`-indistinguishable and that the
/// member labelled `c` has `{c}` as its winner set under `rule`.
pub fn check_family<F>(family: &[(Candidate, Profile)], t: usize, rule: F) -> Result<FamilyCheck>
where
    F: Fn(&Profile) -> Result<Vec<Candidate>>,
{
    let mut distinguishable = None;
    'outer: for (k, (c, p)) in family.iter().enumerate() {
        for (d, q) in &family[k + 1..] {
            if let Some(w) = indistinguishable(p, q, t)?.witness {
                distinguishable = Some((*c, *d, w));
                break 'outer;
            }
        }
    }
    let mut wrong_winners = Vec::new();
    for (c, p) in family {
        let w = rule(p)?;
        if w != [*c] {
            wrong_winners.push((*c, w));
        }
    }
    Ok(FamilyCheck {
        distinguishable,
        wrong_winners,
    })
}

/// The six-ranking profile over `{a, b, c}` with `Pr[a≻b] = p1`,
/// `Pr[b≻c] = p2` and `Pr[c≻a] = p3`.
pub fn margins_to_profile(p1: &Rational, p2: &Rational, p3: &Rational) -> Result<Profile> {
    let third = ratio(1, 3);
    let two_thirds = ratio(2, 3);
    for p in [p1, p2, p3] {
        if *p < third || *p > two_thirds {
            return invalid(format!("margin {p} is outside [1/3, 2/3]"));
        }
    }
    let set = CandidateSet::letters(3)?;
    let rows = [
        ("a>b>c", p2 - &third),
        ("a>c>b", &two_thirds - p2),
        ("b>c>a", p3 - &third),
        ("b>a>c", &two_thirds - p3),
        ("c>a>b", p1 - &third),
        ("c>b>a", &two_thirds - p1),
    ];
    let entries = rows
        .into_iter()
        .map(|(r, p)| Ok((Ranking::parse(r, &set)?, p)))
        .collect::<Result<Vec<_>>>()?;
    Profile::new(set, entries)
}

/// Largest scale parameter accepted by the Fibonacci instances.
pub const MAX_FIBONACCI_N: u64 = 60;

/// `F_k` with `F_1 = 1`, `F_2 = 2`, `F_{k+2} = F_{k+1} + F_k`.
pub fn shifted_fibonacci(k: u64) -> u64 {
    assert!(k >= 1, "the shifted sequence starts at index 1");
    let (mut x, mut y) = (1u64, 2u64);
    for _ in 1..k {
        (x, y) = (y, x + y);
    }
    x
}

/// Scaled margins `(p̂1, p̂2, p̂3)` and the winner for one table row.
fn fibonacci_row(i: u64, s: u64, r: u8) -> ([u64; 3], Candidate) {
    let f = shifted_fibonacci;
    let (a, b, c) = (Candidate(0), Candidate(1), Candidate(2));
    match r {
        1 => ([s + f(i + 2), s, s + f(i)], a),
        2 => ([s + f(i + 2), s, s + f(i + 1)], c),
        3 => ([s + f(i), s + f(i + 2), s], b),
        4 => ([s + f(i + 1), s + f(i + 2), s], a),
        5 => ([s, s + f(i), s + f(i + 2)], c),
        6 => ([s, s + f(i + 1), s + f(i + 2)], b),
        _ => unreachable!("row index checked by callers"),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibonacciInstance {
    pub n: u64,
    pub i: u64,
    pub s: u64,
    pub r: u8,
    pub scaled: [u64; 3],
    /// `(Pr[a≻b], Pr[b≻c], Pr[c≻a])`.
    pub margins: [Rational; 3],
    pub profile: Profile,
    pub winner: Candidate,
}

fn check_n(n: u64) -> Result<()> {
    if n == 0 || n > MAX_FIBONACCI_N {
        return invalid(format!("n must lie in 1..={MAX_FIBONACCI_N}"));
    }
    Ok(())
}

/// `n · F_{n+2}`, the largest shift.
pub fn fibonacci_shift_limit(n: u64) -> u64 {
    n * shifted_fibonacci(n + 2)
}

/// Instance `σ(i, s, r)` with `p_j = 1/3 + p̂_j / (3 (n+1) F_{n+2})`.
pub fn fibonacci_instance(n: u64, i: u64, s: u64, r: u8) -> Result<FibonacciInstance> {
    check_n(n)?;
    if i == 0 || i > n {
        return invalid(format!("i = {i} is outside 1..={n}"));
    }
    if s > fibonacci_shift_limit(n) {
        return invalid(format!(
            "s = {s} exceeds n * F(n+2) = {}",
            fibonacci_shift_limit(n)
        ));
    }
    if !(1..=6).contains(&r) {
        return invalid(format!("row r = {r} is outside 1..=6"));
    }
    let (scaled, winner) = fibonacci_row(i, s, r);
    let denom = BigInt::from(3) * BigInt::from(n + 1) * BigInt::from(shifted_fibonacci(n + 2));
    let margins = scaled.map(|p| ratio(1, 3) + Rational::new(BigInt::from(p), denom.clone()));
    let profile = margins_to_profile(&margins[0], &margins[1], &margins[2])?;
    Ok(FibonacciInstance {
        n,
        i,
        s,
        r,
        scaled,
        margins,
        profile,
        winner,
    })
}

/// A parameter triple reproducing some observed scaled margins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Consistent {
    pub i: u64,
    pub s: u64,
    pub r: u8,
    pub winner: Candidate,
}

/// All `(i, s, r)` whose scaled margins agree with every observed entry,
/// optionally with `i` known. Ordered by `i`, then `r`, then `s`.
pub fn fibonacci_consistent_set(
    n: u64,
    observed: [Option<u64>; 3],
    fixed_i: Option<u64>,
) -> Result<Vec<Consistent>> {
    check_n(n)?;
    let top = (n + 1) * shifted_fibonacci(n + 2);
    if let Some(p) = observed.iter().flatten().find(|p| **p > top) {
        return invalid(format!("observed value {p} exceeds (n+1) * F(n+2) = {top}"));
    }
    let is = match fixed_i {
        Some(i) if i == 0 || i > n => return invalid(format!("i = {i} is outside 1..={n}")),
        Some(i) => i..=i,
        None => 1..=n,
    };
    let limit = fibonacci_shift_limit(n);
    let mut out = Vec::new();
    for i in is {
        for r in 1..=6u8 {
            let (offsets, _) = fibonacci_row(i, 0, r);
            let shifts: Vec<Option<u64>> = observed
                .iter()
                .zip(offsets)
                .filter_map(|(o, off)| o.map(|v| v.checked_sub(off)))
                .collect();
            let candidates: Vec<u64> = if shifts.is_empty() {
                (0..=limit).collect()
            } else if shifts.iter().all_equal() {
                shifts[0].filter(|s| *s <= limit).into_iter().collect()
            } else {
                Vec::new()
            };
            for s in candidates {
                let (_, winner) = fibonacci_row(i, s, r);
                out.push(Consistent { i, s, r, winner });
            }
        }
    }
    Ok(out)
}

/// Whether `(i, s)` lies in the central region where no edge effects leak
/// information: `3 <= i <= n - 2` and `F_{n+2} <= s <= (n - 2) F_{n+2}`.
pub fn fibonacci_central(n: u64, i: u64, s: u64) -> bool {
    let f = shifted_fibonacci(n + 2);
    n >= 5 && (3..=n - 2).contains(&i) && s >= f && s <= (n - 2) * f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use crate::rules::{plurality_score, stv_winners};
    use crate::scoring::{score, winners};

    fn letters(m: usize) -> CandidateSet {
        CandidateSet::letters(m).unwrap()
    }

    fn plurality(m: usize) -> ScoringVector {
        let mut w = vec![0; m];
        w[0] = 1;
        ScoringVector::from_ints(&w).unwrap()
    }

    #[test]
    fn parity_pair_small_cases() {
        let set = letters(3);
        let pp = parity_pair(&set, Candidate(0), Candidate(1)).unwrap();
        let expected = Profile::new(
            set.clone(),
            [
                (Ranking::parse("a>b>c", &set).unwrap(), frac(1, 2)),
                (Ranking::parse("c>b>a", &set).unwrap(), frac(1, 2)),
            ],
        )
        .unwrap();
        assert_eq!(pp.profile, expected);

        let two = letters(2);
        let pp = parity_pair(&two, Candidate(0), Candidate(1)).unwrap();
        assert_eq!(
            pp.profile,
            Profile::point(two.clone(), Ranking::parse("a>b", &two).unwrap()).unwrap()
        );
        assert!(parity_pair(&two, Candidate(0), Candidate(0)).is_err());
    }

    #[test]
    fn parity_pair_properties() {
        for m in 2..=6 {
            let set = letters(m);
            let (a, b) = (Candidate(0), Candidate(1));
            let pp = parity_pair(&set, a, b).unwrap();
            let fact: usize = (1..m).product();
            assert_eq!(pp.profile.support_len(), fact);
            for (r, _) in pp.profile.support() {
                let (pa, pb) = (r.position(a).unwrap(), r.position(b).unwrap());
                assert_eq!(pa.abs_diff(pb), 1);
            }
            assert_eq!(
                plurality_score(&pp.profile, a).unwrap(),
                frac(1, 1 << (m - 2))
            );
            if m > 2 {
                assert_eq!(plurality_score(&pp.profile, b).unwrap(), int(0));
                assert!(indistinguishable(&pp.profile, &pp.transposed, m - 1)
                    .unwrap()
                    .indistinguishable());
            }
            assert!(!indistinguishable(&pp.profile, &pp.transposed, m)
                .unwrap()
                .indistinguishable());
        }
    }

    #[test]
    fn plurality_winner_family() {
        for m in 3..=4 {
            let set = letters(m);
            let pp = parity_pair(&set, Candidate(0), Candidate(1)).unwrap();
            let fam = winner_family(
                &pp.profile,
                Candidate(0),
                Candidate(1),
                &plurality(m),
                m - 1,
            )
            .unwrap();
            assert_eq!(fam.uniform, Profile::uniform(&set).unwrap());
            assert_eq!(fam.profiles.len(), m);
            let check = check_family(&fam.profiles, m - 1, |p| winners(p, &plurality(m))).unwrap();
            assert!(check.passed(), "{check:?}");
            for (_, p) in &fam.profiles {
                for q in set.subsets_of_size(m - 1) {
                    assert_eq!(p.restrict(&q).unwrap(), fam.uniform.restrict(&q).unwrap());
                }
            }
        }
    }

    #[test]
    fn winner_family_orients_and_validates() {
        let set = letters(3);
        let pp = parity_pair(&set, Candidate(0), Candidate(1)).unwrap();
        let fam = winner_family(&pp.profile, Candidate(1), Candidate(0), &plurality(3), 2).unwrap();
        assert_eq!((fam.a, fam.b), (Candidate(0), Candidate(1)));
        let unif = Profile::uniform(&set).unwrap();
        assert!(winner_family(&unif, Candidate(0), Candidate(1), &plurality(3), 2).is_err());
        assert!(winner_family(&pp.profile, Candidate(0), Candidate(1), &plurality(3), 3).is_err());
    }

    #[test]
    fn embedded_profiles() {
        let set = letters(5);
        let c1 = [Candidate(0), Candidate(1), Candidate(2)];
        let c2 = [Candidate(3), Candidate(4)];
        let inner = parity_pair(&set.subset(&c1).unwrap(), Candidate(0), Candidate(1))
            .unwrap()
            .profile;
        let first = embedded_profile(&set, &c1, &c2, 1, &inner).unwrap();
        for (r, _) in first.support() {
            assert_eq!(&r.order()[3..], &c2);
        }
        for i in 1..=3 {
            let p = embedded_profile(&set, &c1, &c2, i, &inner).unwrap();
            let pos = p.pos_vector(Candidate(0)).unwrap();
            assert!(pos[..i - 1].iter().all(Zero::is_zero));
            let swapped = p.transpose(Candidate(0), Candidate(1)).unwrap();
            assert!(indistinguishable(&p, &swapped, 2)
                .unwrap()
                .indistinguishable());
        }
        assert!(embedded_profile(&set, &c1, &c2, 0, &inner).is_err());
        assert!(embedded_profile(&set, &c1, &c2, 4, &inner).is_err());
    }

    #[test]
    fn stv_family_m3() {
        let set = letters(3);
        let fam = stv_family(&set, None).unwrap();
        assert_eq!(fam.params.epsilon, frac(1, 9));
        for (c, p) in &fam.profiles {
            assert_eq!(stv_winners(p).winners, vec![*c]);
        }
        let check = check_family(&fam.profiles, 2, |p| Ok(stv_winners(p).winners)).unwrap();
        assert!(check.passed());
        assert!(stv_family(&letters(2), None).is_err());
        assert!(stv_family(&set, Some(frac(1, 2))).is_err());
    }

    #[test]
    fn cyclic_part_trails_by_the_stated_gap() {
        let m = 4;
        let set = letters(m);
        let fam = stv_family(&set, None).unwrap();
        let cycle = &fam.params.cycle;
        for k in 2..m {
            let remaining = &cycle[k - 1..];
            let restricted = fam.cyclic.restrict(remaining).unwrap();
            let plu = |c: Candidate| plurality_score(&restricted, c).unwrap();
            let target = plu(cycle[k - 1]);
            let gap = frac(1, (m * (remaining.len() - 1)) as i64);
            for c in &remaining[1..] {
                assert_eq!(plu(*c) - &target, gap);
            }
        }
    }

    #[test]
    fn borda_hard_instance() {
        let set = letters(4);
        let borda = ScoringVector::from_ints(&[3, 2, 1, 0]).unwrap();
        let inst = query_complexity_instance(&borda, &set, &[Candidate(0), Candidate(1)]).unwrap();
        assert_eq!(inst.t_star, 2);
        assert_eq!(winners(&inst.profile, &borda).unwrap(), vec![inst.b]);
        let unif = Profile::uniform(&set).unwrap();
        assert!(
            score(&inst.profile, &borda, inst.a).unwrap() < score(&unif, &borda, inst.a).unwrap()
        );
        for size in 1..=3 {
            for q in set.subsets_of_size(size) {
                if !inst.c1.iter().all(|c| q.contains(c)) {
                    assert!(inst.profile.restrict(&q).unwrap().is_uniform());
                }
            }
        }
        let constant = ScoringVector::from_ints(&[1, 1, 1, 1]).unwrap();
        assert!(query_complexity_instance(&constant, &set, &[Candidate(0)]).is_err());
        assert!(query_complexity_instance(&borda, &set, &[Candidate(0)]).is_err());
    }

    #[test]
    fn success_bound_examples() {
        assert_eq!(
            bound_success_probability(&int(0), 3, 2).unwrap(),
            frac(1, 3)
        );
        assert_eq!(bound_success_probability(&int(1), 3, 2).unwrap(), int(1));
        assert_eq!(
            bound_success_probability(&frac(2, 3), 3, 2).unwrap(),
            frac(5, 6)
        );
        assert!(bound_success_probability(&frac(3, 2), 3, 2).is_err());
        assert!(bound_success_probability(&int(0), 3, 1).is_err());
    }

    #[test]
    fn margins_examples() {
        let third = frac(1, 3);
        let p = margins_to_profile(&third, &third, &third).unwrap();
        assert_eq!(p.support_len(), 3);
        let set = p.candidates().clone();
        for r in ["a>c>b", "b>a>c", "c>b>a"] {
            assert_eq!(p.probability(&Ranking::parse(r, &set).unwrap()), third);
        }
        let half = frac(1, 2);
        let p = margins_to_profile(&half, &half, &half).unwrap();
        assert_eq!(p.support_len(), 6);
        assert!(p.support().all(|(_, q)| *q == frac(1, 6)));
        let p = margins_to_profile(&frac(1, 2), &frac(3, 5), &frac(2, 5)).unwrap();
        let (a, b, c) = (Candidate(0), Candidate(1), Candidate(2));
        assert_eq!(p.pairwise(a, b).unwrap(), frac(1, 2));
        assert_eq!(p.pairwise(b, c).unwrap(), frac(3, 5));
        assert_eq!(p.pairwise(c, a).unwrap(), frac(2, 5));
        assert!(margins_to_profile(&frac(1, 4), &half, &half).is_err());
    }

    #[test]
    fn fibonacci_prefix() {
        let prefix: Vec<u64> = (1..=6).map(shifted_fibonacci).collect();
        assert_eq!(prefix, vec![1, 2, 3, 5, 8, 13]);
    }

    #[test]
    fn fibonacci_rows() {
        let f = shifted_fibonacci;
        let inst = fibonacci_instance(6, 2, 10, 1).unwrap();
        assert_eq!(inst.scaled, [10 + f(4), 10, 10 + f(2)]);
        assert_eq!(inst.winner, Candidate(0));
        let inst = fibonacci_instance(6, 2, 10, 6).unwrap();
        assert_eq!(inst.scaled, [10, 10 + f(3), 10 + f(4)]);
        assert_eq!(inst.winner, Candidate(1));
        let borda = ScoringVector::from_ints(&[1, 0, -1]).unwrap();
        assert_eq!(winners(&inst.profile, &borda).unwrap(), vec![inst.winner]);
        assert!(fibonacci_instance(6, 0, 0, 1).is_err());
        assert!(fibonacci_instance(6, 1, 6 * f(8) + 1, 1).is_err());
        assert!(fibonacci_instance(6, 1, 0, 7).is_err());
    }

    /// Brute-force grid search, independent of the solver above.
    fn grid(n: u64, observed: [Option<u64>; 3], fixed_i: Option<u64>) -> Vec<Consistent> {
        let mut out = Vec::new();
        for i in 1..=n {
            if fixed_i.is_some_and(|f| f != i) {
                continue;
            }
            for r in 1..=6 {
                for s in 0..=fibonacci_shift_limit(n) {
                    let inst = fibonacci_instance(n, i, s, r).unwrap();
                    if observed
                        .iter()
                        .zip(inst.scaled)
                        .all(|(o, v)| o.is_none_or(|o| o == v))
                    {
                        out.push(Consistent {
                            i,
                            s,
                            r,
                            winner: inst.winner,
                        });
                    }
                }
            }
        }
        out
    }

    #[test]
    fn consistent_sets_match_grid() {
        let n = 6;
        let f = shifted_fibonacci(n + 2);
        for (obs, fixed) in [
            ([Some(2 * f), None, None], Some(3)),
            ([Some(2 * f + 5), Some(2 * f), None], None),
            ([Some(2 * f), Some(2 * f + 8), None], None),
            ([None, Some(40), Some(41)], Some(2)),
        ] {
            let fast = fibonacci_consistent_set(n, obs, fixed).unwrap();
            assert_eq!(fast, grid(n, obs, fixed));
        }
    }

    #[test]
    fn ambiguity_counts() {
        let n = 8;
        let f = shifted_fibonacci(n + 2);
        let names = |v: &[Consistent]| v.iter().map(|c| c.winner.0).sorted().collect::<Vec<_>>();
        let one = fibonacci_consistent_set(n, [Some(3 * f), None, None], Some(4)).unwrap();
        assert_eq!(names(&one), vec![0, 0, 1, 1, 2, 2]);
        let down = fibonacci_consistent_set(n, [Some(3 * f + 8), Some(3 * f), None], None).unwrap();
        assert_eq!(names(&down), vec![0, 2]);
        let up = fibonacci_consistent_set(n, [Some(3 * f), Some(3 * f + 8), None], None).unwrap();
        assert_eq!(names(&up), vec![0, 1, 1, 2]);
    }
}
