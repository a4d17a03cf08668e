//! Preset scoring vectors, STV, and the knockout Condorcet procedure.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num::{BigInt, One, Zero};

use crate::error::{invalid, Error, Result};
use crate::profiles::{Candidate, Profile};
use crate::queries::QuerySession;
use crate::scoring::ScoringVector;
use crate::Rational;

/// `Pr[σ(1) = c]`.
pub fn plurality_score(profile: &Profile, c: Candidate) -> Result<Rational> {
    Ok(profile.pos_vector(c)?.swap_remove(0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Plurality,
    Veto,
    Borda,
    AntiBorda,
}

impl Preset {
    pub const ALL: [Preset; 4] = [Self::Plurality, Self::Veto, Self::Borda, Self::AntiBorda];

    pub fn name(self) -> &'static str {
        match self {
            Self::Plurality => "plurality",
            Self::Veto => "veto",
            Self::Borda => "borda",
            Self::AntiBorda => "antiborda",
        }
    }

    pub fn vector(self, m: usize) -> Result<ScoringVector> {
        if m == 0 {
            return invalid("a preset needs at least one candidate");
        }
        let w: Vec<i64> = match self {
            Self::Plurality => (0..m).map(|j| i64::from(j == 0)).collect(),
            Self::Veto => (0..m).map(|j| -i64::from(j + 1 == m)).collect(),
            Self::Borda => (0..m).map(|j| (m - 1 - j) as i64).collect(),
            Self::AntiBorda => (0..m).map(|j| j as i64 - (m - 1) as i64).collect(),
        };
        ScoringVector::from_ints(&w)
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "unknown preset {s:?}; expected plurality, veto, borda or antiborda"
                ))
            })
    }
}

/// The named preset vector for `m` candidates.
pub fn preset(name: &str, m: usize) -> Result<ScoringVector> {
    name.parse::<Preset>()?.vector(m)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EliminationStep {
    pub eliminated: Candidate,
    /// Plurality scores of the candidates still standing, before removal.
    pub scores: Vec<(Candidate, Rational)>,
}

/// One elimination order ending in `winner`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EliminationTrace {
    pub steps: Vec<EliminationStep>,
    pub winner: Candidate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StvOutcome {
    /// Every candidate that survives some valid elimination order.
    pub winners: Vec<Candidate>,
    /// One witness order per winner, aligned with `winners`.
    pub traces: Vec<EliminationTrace>,
}

type Witnesses = Vec<(Candidate, Vec<EliminationStep>)>;

struct Stv<'a> {
    profile: &'a Profile,
    ids: Vec<Candidate>,
    memo: HashMap<u64, Witnesses>,
}

impl Stv<'_> {
    fn plurality(&self, mask: u64) -> Vec<(Candidate, Rational)> {
        let mut scores: Vec<Rational> = vec![Rational::zero(); self.ids.len()];
        for (ranking, p) in self.profile.support() {
            let top = ranking
                .order()
                .iter()
                .find_map(|c| {
                    let k = self.ids.binary_search(c).expect("profile candidate");
                    (mask >> k & 1 == 1).then_some(k)
                })
                .expect("nonempty remaining set");
            scores[top] += p;
        }
        (0..self.ids.len())
            .filter(|k| mask >> k & 1 == 1)
            .map(|k| (self.ids[k], scores[k].clone()))
            .collect()
    }

    /// Winners reachable from `mask` with the first witness order found,
    /// in canonical candidate order.
    fn solve(&mut self, mask: u64) -> Witnesses {
        if let Some(w) = self.memo.get(&mask) {
            return w.clone();
        }
        let out = if mask.count_ones() == 1 {
            vec![(self.ids[mask.trailing_zeros() as usize], Vec::new())]
        } else {
            let scores = self.plurality(mask);
            let low = scores
                .iter()
                .map(|(_, s)| s)
                .min()
                .expect("nonempty")
                .clone();
            let mut found: Witnesses = Vec::new();
            for (c, s) in &scores {
                if *s != low {
                    continue;
                }
                let k = self.ids.binary_search(c).expect("profile candidate");
                for (w, rest) in self.solve(mask & !(1 << k)) {
                    if found.iter().all(|(f, _)| *f != w) {
                        let mut steps = vec![EliminationStep {
                            eliminated: *c,
                            scores: scores.clone(),
                        }];
                        steps.extend(rest);
                        found.push((w, steps));
                    }
                }
            }
            found.sort_by_key(|(w, _)| *w);
            found
        };
        self.memo.insert(mask, out.clone());
        out
    }
}

/// Largest candidate count accepted by [`stv_winners`].
pub const MAX_STV_CANDIDATES: usize = 20;

/// All STV winners, branching over every tie for the lowest plurality score.
/// When every remaining candidate ties at each step, all of them win.
///
/// # Panics
/// If the profile has more than [`MAX_STV_CANDIDATES`] candidates.
pub fn stv_winners(profile: &Profile) -> StvOutcome {
    let ids = profile.candidates().ids().to_vec();
    assert!(
        ids.len() <= MAX_STV_CANDIDATES,
        "too many candidates for exhaustive STV"
    );
    let full = (1u64 << ids.len()) - 1;
    let mut stv = Stv {
        profile,
        ids,
        memo: HashMap::new(),
    };
    let mut winners = Vec::new();
    let mut traces = Vec::new();
    for (w, steps) in stv.solve(full) {
        winners.push(w);
        traces.push(EliminationTrace { steps, winner: w });
    }
    StvOutcome { winners, traces }
}

/// One size-2 query and its result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Match {
    /// Knockout round starting at 1; `None` for verification comparisons.
    pub round: Option<usize>,
    pub first: Candidate,
    pub second: Candidate,
    /// `Pr[first ≻ second]`.
    pub margin: Rational,
    /// The candidate advancing; `first` on an exact tie.
    pub winner: Candidate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CondorcetRun {
    pub rounds: Vec<Vec<Match>>,
    pub champion: Candidate,
    pub verification: Vec<Match>,
    pub winner: Option<Candidate>,
    pub queries: usize,
    pub budget: usize,
}

/// `2m - ⌊log₂ m⌋ - 2`.
pub fn condorcet_budget(m: usize) -> usize {
    if m == 0 {
        return 0;
    }
    2 * m - m.ilog2() as usize - 2
}

fn play(
    session: &mut QuerySession,
    round: Option<usize>,
    x: Candidate,
    y: Candidate,
) -> Result<Match> {
    let response = session.query(&[x, y])?;
    let margin = response.pairwise(x, y)?;
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let winner = if margin >= half { x } else { y };
    Ok(Match {
        round,
        first: x,
        second: y,
        margin,
        winner,
    })
}

/// Knockout tournament followed by checks of the champion against every
/// opponent it did not meet.
///
/// When `m` is not a power of two, only the first `2(m - 2^⌊log₂ m⌋)`
/// candidates play an opening round, so every later round is a full
/// bracket and the champion meets at least `⌊log₂ m⌋` opponents.
pub fn condorcet_via_queries(session: &mut QuerySession) -> Result<CondorcetRun> {
    if session.max_size() < 2 {
        return invalid("pairwise comparisons need queries of size at least 2");
    }
    let ids = session.candidates().ids().to_vec();
    let m = ids.len();
    let start = session.query_count();
    let strength = 1usize << m.ilog2();
    let mut rounds: Vec<Vec<Match>> = Vec::new();
    let mut alive = ids.clone();
    if m > strength {
        let opening = 2 * (m - strength);
        let mut games = Vec::new();
        let mut next: Vec<Candidate> = Vec::new();
        for pair in alive[..opening].chunks(2) {
            let g = play(session, Some(1), pair[0], pair[1])?;
            next.push(g.winner);
            games.push(g);
        }
        next.extend_from_slice(&alive[opening..]);
        rounds.push(games);
        alive = next;
    }
    while alive.len() > 1 {
        let round = rounds.len() + 1;
        let mut games = Vec::new();
        let mut next = Vec::new();
        for pair in alive.chunks(2) {
            let g = play(session, Some(round), pair[0], pair[1])?;
            next.push(g.winner);
            games.push(g);
        }
        rounds.push(games);
        alive = next;
    }
    let champion = alive[0];

    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let mut strict = true;
    let mut met = Vec::new();
    for g in rounds.iter().flatten() {
        if g.first == champion || g.second == champion {
            let opponent = if g.first == champion {
                g.second
            } else {
                g.first
            };
            let won = if g.first == champion {
                g.margin > half
            } else {
                g.margin < half
            };
            strict &= won;
            met.push(opponent);
        }
    }
    let mut verification = Vec::new();
    for &c in &ids {
        if c == champion || met.contains(&c) {
            continue;
        }
        let g = play(session, None, champion, c)?;
        strict &= g.margin > half;
        verification.push(g);
    }
    Ok(CondorcetRun {
        rounds,
        champion,
        verification,
        winner: strict.then_some(champion),
        queries: session.query_count() - start,
        budget: condorcet_budget(m),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::{random_profile, CandidateSet, Ranking};
    use crate::rational::{frac, int};
    use itertools::Itertools;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn profile(set: &CandidateSet, rows: &[(&str, i64, i64)]) -> Profile {
        Profile::new(
            set.clone(),
            rows.iter()
                .map(|(r, n, d)| (Ranking::parse(r, set).unwrap(), frac(*n, *d))),
        )
        .unwrap()
    }

    #[test]
    fn presets() {
        let v = |w: &[i64]| ScoringVector::from_ints(w).unwrap();
        assert_eq!(preset("plurality", 3).unwrap(), v(&[1, 0, 0]));
        assert_eq!(preset("veto", 4).unwrap(), v(&[0, 0, 0, -1]));
        assert_eq!(preset("borda", 4).unwrap(), v(&[3, 2, 1, 0]));
        assert_eq!(preset("antiborda", 4).unwrap(), v(&[-3, -2, -1, 0]));
        assert!(preset("copeland", 4).is_err());
    }

    #[test]
    fn plurality_scores() {
        let set = CandidateSet::letters(4).unwrap();
        let unif = Profile::uniform(&set).unwrap();
        let total: Rational = set
            .ids()
            .iter()
            .map(|c| plurality_score(&unif, *c).unwrap())
            .sum();
        assert_eq!(total, int(1));
        assert_eq!(plurality_score(&unif, Candidate(2)).unwrap(), frac(1, 4));
        assert!(plurality_score(&unif, Candidate(9)).is_err());
    }

    #[test]
    fn stv_examples() {
        let two = CandidateSet::letters(2).unwrap();
        let p = profile(&two, &[("a>b", 3, 5), ("b>a", 2, 5)]);
        assert_eq!(stv_winners(&p).winners, vec![Candidate(0)]);

        let three = CandidateSet::letters(3).unwrap();
        let point = profile(&three, &[("a>b>c", 1, 1)]);
        let out = stv_winners(&point);
        assert_eq!(out.winners, vec![Candidate(0)]);
        assert_eq!(out.traces[0].steps.len(), 2);

        let unif = Profile::uniform(&three).unwrap();
        assert_eq!(stv_winners(&unif).winners, three.ids());
    }

    #[test]
    fn stv_traces_are_valid() {
        let set = CandidateSet::letters(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let p = random_profile(&set, 4, &mut rng);
            let out = stv_winners(&p);
            assert!(!out.winners.is_empty());
            for trace in &out.traces {
                assert_eq!(trace.steps.len(), 3);
                for step in &trace.steps {
                    let low = step.scores.iter().map(|(_, s)| s).min().unwrap();
                    let mine = &step
                        .scores
                        .iter()
                        .find(|(c, _)| *c == step.eliminated)
                        .unwrap()
                        .1;
                    assert_eq!(mine, low);
                }
            }
        }
    }

    /// Naive recursion over every elimination order, no memo.
    fn naive_stv(p: &Profile, remaining: Vec<Candidate>, out: &mut Vec<Candidate>) {
        if remaining.len() == 1 {
            out.push(remaining[0]);
            return;
        }
        let r = p.restrict(&remaining).unwrap();
        let scores: Vec<_> = remaining
            .iter()
            .map(|c| plurality_score(&r, *c).unwrap())
            .collect();
        let low = scores.iter().min().unwrap();
        for (k, s) in scores.iter().enumerate() {
            if s == low {
                let mut rest = remaining.clone();
                rest.remove(k);
                naive_stv(p, rest, out);
            }
        }
    }

    #[test]
    fn stv_matches_naive_branching() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for m in 2..=4 {
            let set = CandidateSet::letters(m).unwrap();
            for _ in 0..40 {
                let p = random_profile(&set, 3, &mut rng);
                let mut all = Vec::new();
                naive_stv(&p, set.ids().to_vec(), &mut all);
                let expected: Vec<_> = all.into_iter().sorted().dedup().collect();
                assert_eq!(stv_winners(&p).winners, expected);
            }
        }
    }

    #[test]
    fn condorcet_examples() {
        let set = CandidateSet::letters(4).unwrap();
        let p = profile(&set, &[("a>b>c>d", 1, 1)]);
        let mut s = QuerySession::open(p, 2).unwrap();
        let run = condorcet_via_queries(&mut s).unwrap();
        assert_eq!(run.winner, Some(Candidate(0)));
        assert!(run.queries <= run.budget);

        let three = CandidateSet::letters(3).unwrap();
        let cycle = profile(&three, &[("a>b>c", 1, 3), ("c>a>b", 1, 3), ("b>c>a", 1, 3)]);
        let mut s = QuerySession::open(cycle, 2).unwrap();
        assert_eq!(condorcet_via_queries(&mut s).unwrap().winner, None);

        let tie = profile(
            &CandidateSet::letters(2).unwrap(),
            &[("a>b", 1, 2), ("b>a", 1, 2)],
        );
        let mut s = QuerySession::open(tie, 2).unwrap();
        assert_eq!(condorcet_via_queries(&mut s).unwrap().winner, None);

        let mut s = QuerySession::open(Profile::uniform(&three).unwrap(), 1).unwrap();
        assert!(condorcet_via_queries(&mut s).is_err());
    }

    #[test]
    fn condorcet_budget_values() {
        assert_eq!(condorcet_budget(2), 1);
        assert_eq!(condorcet_budget(3), 3);
        assert_eq!(condorcet_budget(4), 4);
        assert_eq!(condorcet_budget(5), 6);
        assert_eq!(condorcet_budget(8), 11);
    }

    #[test]
    fn condorcet_matches_pairwise_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for m in 2..=9 {
            let set = CandidateSet::letters(m).unwrap();
            for _ in 0..20 {
                let p = random_profile(&set, 3, &mut rng);
                let half = frac(1, 2);
                let expected = set.ids().iter().copied().find(|&a| {
                    set.ids()
                        .iter()
                        .all(|&b| a == b || p.pairwise(a, b).unwrap() > half)
                });
                let mut s = QuerySession::open(p, 2).unwrap();
                let run = condorcet_via_queries(&mut s).unwrap();
                assert_eq!(run.winner, expected);
                assert!(
                    run.queries <= condorcet_budget(m),
                    "m = {m}: {} queries",
                    run.queries
                );
            }
        }
    }
}
