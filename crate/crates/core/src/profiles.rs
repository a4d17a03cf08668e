//! Rankings, permutations and exact preference profiles.
//!
//! A candidate is a positional index into the candidate set it was created
//! with; labels are carried alongside for I/O. Restricting a set keeps the
//! original indices, so candidates keep their identity across subsets.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num::{BigInt, One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::{check_cap, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Candidate(pub usize);

impl fmt::Display for Candidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// An ordered set of distinct candidates with labels.
///
/// Members are kept in ascending index order, which is also the canonical
/// order used for iteration, subset enumeration and tie reporting.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CandidateSet {
    ids: Vec<Candidate>,
    labels: Vec<String>,
}

impl CandidateSet {
    /// Builds a set from labels; the `k`-th label becomes `Candidate(k)`.
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return invalid("a candidate set needs at least one candidate");
        }
        if let Some(dup) = labels.iter().duplicates().next() {
            return invalid(format!("duplicate candidate label {dup:?}"));
        }
        if let Some(bad) = labels.iter().find(|l| {
            l.is_empty() || l.contains(|c: char| c == ',' || c == '>' || c.is_whitespace())
        }) {
            return invalid(format!(
                "candidate label {bad:?} is empty or contains ',', '>' or whitespace"
            ));
        }
        let ids = (0..labels.len()).map(Candidate).collect();
        Ok(Self { ids, labels })
    }

    /// `m` candidates labelled `a`, `b`, `c`, ... (then `c27`, `c28`, ... past `z`).
    pub fn letters(m: usize) -> Result<Self> {
        Self::new((0..m).map(|k| {
            if k < 26 {
                char::from(b'a' + k as u8).to_string()
            } else {
                format!("c{}", k + 1)
            }
        }))
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[Candidate] {
        &self.ids
    }

    pub fn iter(&self) -> impl Iterator<Item = (Candidate, &str)> + '_ {
        self.ids
            .iter()
            .copied()
            .zip(self.labels.iter().map(String::as_str))
    }

    pub fn contains(&self, c: Candidate) -> bool {
        self.position(c).is_some()
    }

    /// Index of `c` within this set's canonical order.
    pub fn position(&self, c: Candidate) -> Option<usize> {
        self.ids.binary_search(&c).ok()
    }

    pub fn label(&self, c: Candidate) -> Option<&str> {
        self.position(c).map(|p| self.labels[p].as_str())
    }

    pub fn find(&self, label: &str) -> Option<Candidate> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|p| self.ids[p])
    }

    /// Label of `c`, falling back to its index form for foreign candidates.
    pub fn name(&self, c: Candidate) -> String {
        self.label(c).map_or_else(|| c.to_string(), str::to_owned)
    }

    /// Members as a sorted vector checked to be a nonempty subset of `self`.
    pub fn normalize_subset(&self, members: &[Candidate]) -> Result<Vec<Candidate>> {
        if members.is_empty() {
            return invalid("candidate subset is empty");
        }
        let mut sorted = members.to_vec();
        sorted.sort_unstable();
        if let Some(dup) = sorted.iter().duplicates().next() {
            return invalid(format!("candidate {} listed twice", self.name(*dup)));
        }
        if let Some(foreign) = sorted.iter().find(|c| !self.contains(**c)) {
            return invalid(format!("candidate {foreign} is not in the candidate set"));
        }
        Ok(sorted)
    }

    pub fn subset(&self, members: &[Candidate]) -> Result<Self> {
        let ids = self.normalize_subset(members)?;
        let labels = ids.iter().map(|c| self.name(*c)).collect();
        Ok(Self { ids, labels })
    }

    /// Members of `self` not in `members`, in canonical order.
    pub fn complement(&self, members: &[Candidate]) -> Vec<Candidate> {
        self.ids
            .iter()
            .copied()
            .filter(|c| !members.contains(c))
            .collect()
    }

    /// All subsets of size `k` in lexicographic order of candidate indices.
    pub fn subsets_of_size(&self, k: usize) -> Vec<Vec<Candidate>> {
        self.ids.iter().copied().combinations(k).collect()
    }

    /// Every ranking of this set, in lexicographic order. Refused above the
    /// enumeration cap.
    pub fn rankings(&self) -> Result<Vec<Ranking>> {
        check_cap("enumerating all rankings", self.len())?;
        Ok(self
            .ids
            .iter()
            .copied()
            .permutations(self.len())
            .map(Ranking)
            .collect())
    }

    /// Parses a comma separated label list into candidates of this set.
    pub fn parse_subset(&self, text: &str) -> Result<Vec<Candidate>> {
        text.split(',')
            .map(|l| {
                let l = l.trim();
                self.find(l)
                    .ok_or_else(|| crate::Error::Parse(format!("unknown candidate {l:?}")))
            })
            .collect()
    }
}

/// A strict total order; position `j` (0-based here) holds the `j+1`-th
/// most preferred candidate.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ranking(Vec<Candidate>);

impl Ranking {
    pub fn new(order: Vec<Candidate>) -> Result<Self> {
        if order.is_empty() {
            return invalid("a ranking needs at least one candidate");
        }
        if let Some(dup) = order.iter().duplicates().next() {
            return invalid(format!("candidate {dup} appears twice in a ranking"));
        }
        Ok(Self(order))
    }

    /// Parses `a>b>c` against a candidate set; the result must rank all of it.
    pub fn parse(text: &str, candidates: &CandidateSet) -> Result<Self> {
        let order = text
            .split('>')
            .map(|l| {
                let l = l.trim();
                candidates
                    .find(l)
                    .ok_or_else(|| crate::Error::Parse(format!("unknown candidate {l:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let ranking = Self::new(order)?;
        if !ranking.ranks_exactly(candidates) {
            return invalid(format!("ranking {text:?} does not rank every candidate"));
        }
        Ok(ranking)
    }

    pub fn order(&self) -> &[Candidate] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn top(&self) -> Candidate {
        self.0[0]
    }

    /// 0-based position of `c`, the inverse lookup.
    pub fn position(&self, c: Candidate) -> Option<usize> {
        self.0.iter().position(|&x| x == c)
    }

    pub fn prefers(&self, a: Candidate, b: Candidate) -> bool {
        match (self.position(a), self.position(b)) {
            (Some(pa), Some(pb)) => pa < pb,
            _ => false,
        }
    }

    /// Whether the ranked candidates are exactly the members of `set`.
    pub fn ranks_exactly(&self, set: &CandidateSet) -> bool {
        self.0.len() == set.len() && self.0.iter().all(|c| set.contains(*c))
    }

    /// Restriction to `subset`, preserving relative order.
    pub fn restrict(&self, subset: &[Candidate]) -> Result<Self> {
        if subset.is_empty() {
            return invalid("cannot restrict to the empty set");
        }
        if let Some(dup) = subset.iter().duplicates().next() {
            return invalid(format!("candidate {dup} listed twice"));
        }
        if let Some(foreign) = subset.iter().find(|c| self.position(**c).is_none()) {
            return invalid(format!("candidate {foreign} is not ranked"));
        }
        Ok(self.restrict_unchecked(subset))
    }

    pub(crate) fn restrict_unchecked(&self, subset: &[Candidate]) -> Self {
        Self(
            self.0
                .iter()
                .copied()
                .filter(|c| subset.contains(c))
                .collect(),
        )
    }

    pub fn display(&self, set: &CandidateSet) -> String {
        self.0.iter().map(|c| set.name(*c)).join(">")
    }
}

/// A bijection of one candidate set onto itself.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    domain: Vec<Candidate>,
    image: Vec<Candidate>,
}

impl Permutation {
    pub fn identity(set: &CandidateSet) -> Self {
        Self {
            domain: set.ids().to_vec(),
            image: set.ids().to_vec(),
        }
    }

    /// The permutation sending `set.ids()[k]` to `images[k]`.
    pub fn from_images(set: &CandidateSet, images: Vec<Candidate>) -> Result<Self> {
        if images.len() != set.len() {
            return invalid("permutation image has the wrong length");
        }
        let mut sorted = images.clone();
        sorted.sort_unstable();
        if sorted != set.ids() {
            return invalid("permutation images are not a rearrangement of the candidate set");
        }
        Ok(Self {
            domain: set.ids().to_vec(),
            image: images,
        })
    }

    /// The `(a, b)`-transposition.
    pub fn transposition(set: &CandidateSet, a: Candidate, b: Candidate) -> Result<Self> {
        if a == b {
            return invalid("a transposition needs two distinct candidates");
        }
        let (Some(pa), Some(pb)) = (set.position(a), set.position(b)) else {
            return invalid("transposed candidates must belong to the candidate set");
        };
        let mut perm = Self::identity(set);
        perm.image.swap(pa, pb);
        Ok(perm)
    }

    /// All `m!` permutations, in lexicographic order of their image lists.
    pub fn all(set: &CandidateSet) -> Result<Vec<Self>> {
        check_cap("enumerating all permutations", set.len())?;
        Ok(set
            .ids()
            .iter()
            .copied()
            .permutations(set.len())
            .map(|image| Self {
                domain: set.ids().to_vec(),
                image,
            })
            .collect())
    }

    pub fn domain(&self) -> &[Candidate] {
        &self.domain
    }

    pub fn get(&self, c: Candidate) -> Option<Candidate> {
        self.domain.binary_search(&c).ok().map(|p| self.image[p])
    }

    /// # Panics
    /// If `c` is outside the domain.
    pub fn apply(&self, c: Candidate) -> Candidate {
        self.get(c)
            .expect("candidate outside the permutation's domain")
    }

    pub fn inverse(&self) -> Self {
        let mut image = vec![Candidate(0); self.domain.len()];
        for (from, to) in self.domain.iter().zip(&self.image) {
            let p = self.domain.binary_search(to).expect("image inside domain");
            image[p] = *from;
        }
        Self {
            domain: self.domain.clone(),
            image,
        }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.domain != other.domain {
            return invalid("composed permutations act on different candidate sets");
        }
        let image = other.image.iter().map(|c| self.apply(*c)).collect();
        Ok(Self {
            domain: self.domain.clone(),
            image,
        })
    }

    /// Whether every member of `members` is a fixed point.
    pub fn fixes(&self, members: &[Candidate]) -> bool {
        members.iter().all(|c| self.get(*c) == Some(*c))
    }

    /// `π ∘ σ`: position `j` of the result holds `π(σ(j))`.
    pub fn permute_ranking(&self, ranking: &Ranking) -> Result<Ranking> {
        if ranking.len() != self.domain.len()
            || ranking.order().iter().any(|c| self.get(*c).is_none())
        {
            return invalid("ranking and permutation act on different candidate sets");
        }
        Ok(self.permute_unchecked(ranking))
    }

    pub(crate) fn permute_unchecked(&self, ranking: &Ranking) -> Ranking {
        Ranking(ranking.order().iter().map(|c| self.apply(*c)).collect())
    }
}

/// An exact probability distribution over the rankings of a candidate set.
///
/// Only the support is stored, keyed in lexicographic ranking order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Profile {
    candidates: CandidateSet,
    mass: BTreeMap<Ranking, Rational>,
}

impl Profile {
    /// Validates and builds a profile. Repeated rankings have their masses
    /// merged and zero masses are dropped.
    pub fn new<I>(candidates: CandidateSet, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Ranking, Rational)>,
    {
        let mut acc = MassAccumulator::new(candidates);
        for (ranking, p) in entries {
            if p.is_negative() {
                return invalid(format!("negative probability {p}"));
            }
            if !ranking.ranks_exactly(&acc.candidates) {
                return invalid(format!(
                    "ranking {} does not rank exactly the candidate set",
                    ranking.display(&acc.candidates)
                ));
            }
            acc.add(ranking, p);
        }
        acc.finish()
    }

    pub fn point(candidates: CandidateSet, ranking: Ranking) -> Result<Self> {
        Self::new(candidates, [(ranking, Rational::one())])
    }

    /// The uniform distribution over all `m!` rankings.
    pub fn uniform(candidates: &CandidateSet) -> Result<Self> {
        let rankings = candidates.rankings()?;
        Self::uniform_over(candidates.clone(), rankings)
    }

    /// Uniform over a set of rankings; repeated rankings count once.
    pub fn uniform_over(candidates: CandidateSet, rankings: Vec<Ranking>) -> Result<Self> {
        let mut rankings = rankings;
        rankings.sort();
        rankings.dedup();
        if rankings.is_empty() {
            return invalid("cannot build a uniform profile over no rankings");
        }
        let p = Rational::new(BigInt::one(), BigInt::from(rankings.len()));
        Self::new(candidates, rankings.into_iter().map(|r| (r, p.clone())))
    }

    pub fn candidates(&self) -> &CandidateSet {
        &self.candidates
    }

    pub fn m(&self) -> usize {
        self.candidates.len()
    }

    pub fn support(&self) -> impl Iterator<Item = (&Ranking, &Rational)> + '_ {
        self.mass.iter()
    }

    pub fn support_len(&self) -> usize {
        self.mass.len()
    }

    pub fn probability(&self, ranking: &Ranking) -> Rational {
        self.mass
            .get(ranking)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn total_mass(&self) -> Rational {
        self.mass.values().sum()
    }

    /// Distribution of `σ|_S` for `σ` drawn from this profile.
    pub fn restrict(&self, subset: &[Candidate]) -> Result<Self> {
        let subset = self.candidates.normalize_subset(subset)?;
        let mut acc = MassAccumulator::new(self.candidates.subset(&subset)?);
        for (ranking, p) in &self.mass {
            acc.add(ranking.restrict_unchecked(&subset), p.clone());
        }
        acc.finish()
    }

    /// Distribution of `π ∘ σ`.
    pub fn permute(&self, perm: &Permutation) -> Result<Self> {
        if perm.domain() != self.candidates.ids() {
            return invalid("permutation and profile act on different candidate sets");
        }
        let mut acc = MassAccumulator::new(self.candidates.clone());
        for (ranking, p) in &self.mass {
            acc.add(perm.permute_unchecked(ranking), p.clone());
        }
        acc.finish()
    }

    /// The profile with `a` and `b` swapped in every ranking.
    pub fn transpose(&self, a: Candidate, b: Candidate) -> Result<Self> {
        let perm = Permutation::transposition(&self.candidates, a, b)?;
        self.permute(&perm)
    }

    /// Entry `j` is the probability that `c` sits at position `j + 1`.
    pub fn pos_vector(&self, c: Candidate) -> Result<Vec<Rational>> {
        if !self.candidates.contains(c) {
            return invalid(format!("candidate {c} is not in the profile"));
        }
        let mut pos = vec![Rational::zero(); self.m()];
        for (ranking, p) in &self.mass {
            let j = ranking.position(c).expect("support ranks every candidate");
            pos[j] += p;
        }
        Ok(pos)
    }

    /// `Pr[a ≻ b]`.
    pub fn pairwise(&self, a: Candidate, b: Candidate) -> Result<Rational> {
        if a == b || !self.candidates.contains(a) || !self.candidates.contains(b) {
            return invalid("pairwise comparison needs two distinct candidates of the profile");
        }
        Ok(self
            .mass
            .iter()
            .filter(|(r, _)| r.prefers(a, b))
            .map(|(_, p)| p)
            .sum())
    }

    /// Whether this is the uniform distribution over all rankings.
    pub fn is_uniform(&self) -> bool {
        let fact: BigInt = (1..=self.m()).map(BigInt::from).product();
        let expected = Rational::new(BigInt::one(), fact.clone());
        BigInt::from(self.mass.len()) == fact && self.mass.values().all(|p| *p == expected)
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (ranking, p)) in self.mass.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}({})", p, ranking.display(&self.candidates))?;
        }
        Ok(())
    }
}

/// Weighted mixture of profiles over a common candidate set.
pub fn mix<'a, I>(parts: I) -> Result<Profile>
where
    I: IntoIterator<Item = (&'a Profile, Rational)>,
{
    let mut parts = parts.into_iter().peekable();
    let Some((first, _)) = parts.peek() else {
        return invalid("cannot mix an empty list of profiles");
    };
    let mut acc = MassAccumulator::new(first.candidates.clone());
    let mut total = Rational::zero();
    for (profile, weight) in parts {
        if weight.is_negative() {
            return invalid(format!("negative mixture weight {weight}"));
        }
        if profile.candidates != acc.candidates {
            return invalid("mixed profiles have different candidate sets");
        }
        acc.add_profile(profile, &weight);
        total += weight;
    }
    if !total.is_one() {
        return invalid(format!("mixture weights sum to {total}, not 1"));
    }
    acc.finish()
}

/// Sums weighted rankings, then checks the total is exactly one.
#[derive(Debug, Clone)]
pub(crate) struct MassAccumulator {
    candidates: CandidateSet,
    mass: BTreeMap<Ranking, Rational>,
}

impl MassAccumulator {
    pub(crate) fn new(candidates: CandidateSet) -> Self {
        Self {
            candidates,
            mass: BTreeMap::new(),
        }
    }

    pub(crate) fn add(&mut self, ranking: Ranking, p: Rational) {
        *self.mass.entry(ranking).or_insert_with(Rational::zero) += p;
    }

    pub(crate) fn add_profile(&mut self, profile: &Profile, weight: &Rational) {
        if weight.is_zero() {
            return;
        }
        for (ranking, p) in &profile.mass {
            self.add(ranking.clone(), p * weight);
        }
    }

    pub(crate) fn finish(mut self) -> Result<Profile> {
        self.mass.retain(|_, p| !p.is_zero());
        let total: Rational = self.mass.values().sum();
        if !total.is_one() {
            return invalid(format!("probabilities sum to {total}, not 1"));
        }
        Ok(Profile {
            candidates: self.candidates,
            mass: self.mass,
        })
    }
}

/// A random profile with between one and `max_support` distinct rankings
/// and small integer weights, normalized to sum to one.
pub fn random_profile<R: Rng + ?Sized>(
    candidates: &CandidateSet,
    max_support: usize,
    rng: &mut R,
) -> Profile {
    let support = rng.gen_range(1..=max_support.max(1));
    let mut entries = Vec::with_capacity(support);
    for _ in 0..support {
        let mut order = candidates.ids().to_vec();
        order.shuffle(rng);
        entries.push((Ranking(order), rng.gen_range(1..=12i64)));
    }
    let total: i64 = entries.iter().map(|(_, w)| w).sum();
    Profile::new(
        candidates.clone(),
        entries
            .into_iter()
            .map(|(r, w)| (r, Rational::new(BigInt::from(w), BigInt::from(total)))),
    )
    .expect("normalized weights sum to one")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn abc() -> CandidateSet {
        CandidateSet::letters(3).unwrap()
    }

    fn r(set: &CandidateSet, s: &str) -> Ranking {
        Ranking::parse(s, set).unwrap()
    }

    fn half_pair(set: &CandidateSet) -> Profile {
        Profile::new(
            set.clone(),
            [(r(set, "a>b>c"), frac(1, 2)), (r(set, "c>b>a"), frac(1, 2))],
        )
        .unwrap()
    }

    #[test]
    fn restrict_ranking_preserves_order() {
        let set = abc();
        let [a, b, c] = [Candidate(0), Candidate(1), Candidate(2)];
        assert_eq!(r(&set, "a>b>c").restrict(&[a, c]).unwrap().order(), &[a, c]);
        assert_eq!(
            r(&set, "a>b>c").restrict(&[a, b, c]).unwrap(),
            r(&set, "a>b>c")
        );
        assert_eq!(r(&set, "c>b>a").restrict(&[a, b]).unwrap().order(), &[b, a]);
        assert!(r(&set, "a>b>c").restrict(&[]).is_err());
        assert!(r(&set, "a>b>c").restrict(&[Candidate(7)]).is_err());
    }

    #[test]
    fn permute_ranking_by_transposition() {
        let set = abc();
        let id = Permutation::identity(&set);
        let ab = Permutation::transposition(&set, Candidate(0), Candidate(1)).unwrap();
        assert_eq!(
            id.permute_ranking(&r(&set, "a>b>c")).unwrap(),
            r(&set, "a>b>c")
        );
        assert_eq!(
            ab.permute_ranking(&r(&set, "a>b>c")).unwrap(),
            r(&set, "b>a>c")
        );
        assert_eq!(
            ab.permute_ranking(&r(&set, "c>b>a")).unwrap(),
            r(&set, "c>a>b")
        );
        let pair = CandidateSet::letters(2).unwrap();
        assert!(ab.permute_ranking(&r(&pair, "a>b")).is_err());
    }

    #[test]
    fn permutation_inverse_and_compose() {
        let set = CandidateSet::letters(4).unwrap();
        for perm in Permutation::all(&set).unwrap() {
            let id = perm.compose(&perm.inverse()).unwrap();
            assert_eq!(id, Permutation::identity(&set));
        }
    }

    #[test]
    fn restrict_profile_merges_masses() {
        let set = abc();
        let pair = half_pair(&set);
        let got = pair.restrict(&[Candidate(0), Candidate(1)]).unwrap();
        let ab = set.subset(&[Candidate(0), Candidate(1)]).unwrap();
        let want = Profile::new(
            ab.clone(),
            [(r(&ab, "a>b"), frac(1, 2)), (r(&ab, "b>a"), frac(1, 2))],
        )
        .unwrap();
        assert_eq!(got, want);
        assert_eq!(pair.restrict(set.ids()).unwrap(), pair);
        let unif = Profile::uniform(&set).unwrap();
        assert_eq!(
            unif.restrict(&[Candidate(0), Candidate(1)]).unwrap(),
            Profile::uniform(&ab).unwrap()
        );
    }

    #[test]
    fn transpose_examples() {
        let set = abc();
        let pair = half_pair(&set);
        let got = pair.transpose(Candidate(0), Candidate(1)).unwrap();
        let want = Profile::new(
            set.clone(),
            [
                (r(&set, "b>a>c"), frac(1, 2)),
                (r(&set, "c>a>b"), frac(1, 2)),
            ],
        )
        .unwrap();
        assert_eq!(got, want);
        assert_eq!(got.transpose(Candidate(0), Candidate(1)).unwrap(), pair);
        let unif = Profile::uniform(&set).unwrap();
        assert_eq!(unif.transpose(Candidate(0), Candidate(2)).unwrap(), unif);
        assert!(pair.transpose(Candidate(0), Candidate(0)).is_err());
        assert!(pair.transpose(Candidate(0), Candidate(5)).is_err());
    }

    #[test]
    fn mixtures() {
        let set = abc();
        let pair = half_pair(&set);
        assert_eq!(mix([(&pair, frac(1, 1))]).unwrap(), pair);
        assert_eq!(
            mix([(&pair, frac(1, 2)), (&pair, frac(1, 2))]).unwrap(),
            pair
        );
        assert!(mix([(&pair, frac(1, 2)), (&pair, frac(1, 3))]).is_err());
        assert!(mix([(&pair, frac(3, 2)), (&pair, frac(-1, 2))]).is_err());
    }

    #[test]
    fn pos_vectors() {
        let set = abc();
        let pair = half_pair(&set);
        assert_eq!(
            pair.pos_vector(Candidate(1)).unwrap(),
            vec![frac(0, 1), frac(1, 1), frac(0, 1)]
        );
        assert_eq!(
            pair.pos_vector(Candidate(0)).unwrap(),
            vec![frac(1, 2), frac(0, 1), frac(1, 2)]
        );
        let unif = Profile::uniform(&set).unwrap();
        for c in set.ids() {
            assert_eq!(unif.pos_vector(*c).unwrap(), vec![frac(1, 3); 3]);
        }
        assert!(pair.pos_vector(Candidate(3)).is_err());
    }

    #[test]
    fn uniform_constructors() {
        let two = CandidateSet::letters(2).unwrap();
        let u2 = Profile::uniform(&two).unwrap();
        assert_eq!(u2.support_len(), 2);
        assert!(u2.support().all(|(_, p)| *p == frac(1, 2)));
        let set = abc();
        let point = Profile::uniform_over(set.clone(), vec![r(&set, "a>b>c")]).unwrap();
        assert_eq!(point.probability(&r(&set, "a>b>c")), frac(1, 1));
        let u3 = Profile::uniform(&set).unwrap();
        assert_eq!(u3.support_len(), 6);
        assert!(u3.is_uniform());
        assert!(u3.support().all(|(_, p)| *p == frac(1, 6)));
        assert!(Profile::uniform_over(set, vec![]).is_err());
    }

    #[test]
    fn profile_validation() {
        let set = abc();
        assert!(Profile::new(set.clone(), [(r(&set, "a>b>c"), frac(1, 2))]).is_err());
        assert!(Profile::new(
            set.clone(),
            [
                (r(&set, "a>b>c"), frac(3, 2)),
                (r(&set, "b>a>c"), frac(-1, 2))
            ]
        )
        .is_err());
        let pair = CandidateSet::letters(2).unwrap();
        assert!(Profile::new(set.clone(), [(r(&pair, "a>b"), frac(1, 1))]).is_err());
        assert!(CandidateSet::new(["a", "a"]).is_err());
        assert!(CandidateSet::new(Vec::<String>::new()).is_err());
    }

    #[test]
    fn enumeration_cap_refuses() {
        let big = CandidateSet::letters(crate::DEFAULT_ENUMERATION_CAP + 1).unwrap();
        if std::env::var(crate::ENUMERATION_CAP_ENV).is_err() {
            assert!(matches!(
                big.rankings(),
                Err(crate::Error::CapExceeded { .. })
            ));
            assert!(Profile::uniform(&big).is_err());
        }
    }
}
