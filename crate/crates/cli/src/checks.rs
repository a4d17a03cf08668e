//! Verifiers for each construction. Each one fills a report with checks and
//! returns the profiles it built so generators can write them out.

use anyhow::{ensure, Result};
use elicit_core::constructions as cons;
use elicit_core::covering::{
    cover_lower_bound, exact_cover, greedy_cover, is_cover, EXACT_COVER_CAP, GREEDY_WORK_CAP,
};
use elicit_core::profiles::random_profile;
use elicit_core::queries::{indistinguishable, QuerySession};
use elicit_core::rules::{
    condorcet_budget, condorcet_via_queries, plurality_score, preset, stv_winners,
};
use elicit_core::scoring::{
    self, basis_vector, binomial, score_via_queries, separating_index, span_membership,
    winner_via_queries, BasisFamily,
};
use elicit_core::{rational, Candidate, CandidateSet, Profile, Ranking, Rational, ScoringVector};
use num::{BigInt, One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::report::{Check, Report};
use crate::show;

pub type Built = Vec<(String, Profile)>;

pub fn letters(m: usize) -> Result<CandidateSet> {
    Ok(CandidateSet::letters(m)?)
}

fn all_uniform(
    p: &Profile,
    subsets: impl IntoIterator<Item = Vec<Candidate>>,
) -> Result<Option<Vec<Candidate>>> {
    for q in subsets {
        if !p.restrict(&q)?.is_uniform() {
            return Ok(Some(q));
        }
    }
    Ok(None)
}

pub fn parity_pair(m: usize, report: &mut Report) -> Result<Built> {
    ensure!(m >= 2, "the parity pair needs at least two candidates");
    let set = letters(m)?;
    let (a, b) = (Candidate(0), Candidate(1));
    let pp = cons::parity_pair(&set, a, b)?;
    let plu_a = plurality_score(&pp.profile, a)?;
    let plu_b = plurality_score(&pp.profile, b)?;
    let expected = Rational::new(BigInt::one(), BigInt::from(2u32).pow(m as u32 - 2));
    report.check(
        Check::new("plu(a) = 1/2^(m-2)", plu_a == expected)
            .detail(format!("plu(a) = {}", show::r(&plu_a))),
    );
    report.check(
        Check::new("plu(b) = 0", plu_b.is_zero()).detail(format!("plu(b) = {}", show::r(&plu_b))),
    );
    let below = indistinguishable(&pp.profile, &pp.transposed, m - 1)?;
    report.check(
        Check::new("swap is (m-1)-indistinguishable", below.indistinguishable())
            .witness(below.witness.as_ref().map(|w| show::witness(&set, w))),
    );
    let full = indistinguishable(&pp.profile, &pp.transposed, m)?;
    let mut c = Check::new(
        "swap is distinguished by an m-query",
        !full.indistinguishable(),
    );
    if let Some(w) = &full.witness {
        c = c.detail(show::witness(&set, w));
    }
    report.check(c);
    report.value("support size", pp.profile.support_len());
    Ok(vec![
        ("sigma".into(), pp.profile),
        ("sigma-swapped".into(), pp.transposed),
    ])
}

fn random_coefficients(rng: &mut ChaCha8Rng, k: usize) -> Vec<Rational> {
    (0..k)
        .map(|_| rational::frac(rng.gen_range(-6..=6), rng.gen_range(1..=4)))
        .collect()
}

pub fn query_scoring(
    m: usize,
    t: usize,
    cases: usize,
    rng: &mut ChaCha8Rng,
    report: &mut Report,
) -> Result<()> {
    let set = letters(m)?;
    let basis = BasisFamily::new(m, t)?;
    let limit = binomial(m, t);
    let mut score_mismatch = None;
    let mut winner_mismatch = None;
    let mut most = 0;
    for case in 0..cases {
        let p = random_profile(&set, 8, rng);
        let alpha = basis.combine(&random_coefficients(rng, t))?;
        let mut session = QuerySession::open(p.clone(), t)?;
        for &c in set.ids() {
            let got = score_via_queries(&mut session, &alpha, c)?;
            let want = scoring::score(&p, &alpha, c)?;
            if got != want && score_mismatch.is_none() {
                score_mismatch = Some(format!(
                    "case {case}, alpha ({}), candidate {}: {} vs {}",
                    show::vector(alpha.weights()),
                    set.name(c),
                    show::r(&got),
                    show::r(&want)
                ));
            }
        }
        let via = winner_via_queries(&mut session, &alpha)?;
        let direct = scoring::winners(&p, &alpha)?;
        if via != direct && winner_mismatch.is_none() {
            winner_mismatch = Some(format!(
                "case {case}: {} vs {}",
                show::set(&set, &via),
                show::set(&set, &direct)
            ));
        }
        most = most.max(session.query_count());
    }
    report.check(
        Check::new(
            "scores from queries equal direct scores",
            score_mismatch.is_none(),
        )
        .detail(format!("{cases} profiles"))
        .witness(score_mismatch),
    );
    report.check(
        Check::new(
            "winners from queries equal direct winners",
            winner_mismatch.is_none(),
        )
        .witness(winner_mismatch),
    );
    report.check(
        Check::new("queries <= C(m,t)", most as u64 <= limit)
            .detail(format!("at most {most} of {limit}")),
    );
    Ok(())
}

pub fn span(m: usize, report: &mut Report) -> Result<()> {
    let plurality = preset("plurality", m)?;
    let borda = preset("borda", m)?;
    let mut accepted = None;
    for t in 1..m {
        if span_membership(&plurality, t)?.is_member() {
            accepted = Some(format!("t = {t}"));
            break;
        }
    }
    report.check(
        Check::new("plurality rejected for every t < m", accepted.is_none()).witness(accepted),
    );
    let mut rejected = None;
    for t in 2..=m {
        if !span_membership(&borda, t)?.is_member() {
            rejected = Some(format!("t = {t}"));
            break;
        }
    }
    report
        .check(Check::new("Borda accepted for every t >= 2", rejected.is_none()).witness(rejected));
    let mut shape = None;
    let mut nesting = None;
    for t in 1..=m {
        for k in 1..=t {
            let v = basis_vector(m, t, k)?;
            let w = v.weights();
            let diagonal = rational::int(binomial(m - k, t - k) as i64);
            let ok =
                w[..k - 1].iter().all(Zero::is_zero) && w[k - 1] == diagonal && !diagonal.is_zero();
            if !ok && shape.is_none() {
                shape = Some(format!("t = {t}, k = {k}: ({})", show::vector(w)));
            }
            for larger in t..=m {
                if !span_membership(&v, larger)?.is_member() && nesting.is_none() {
                    nesting = Some(format!(
                        "basis vector t = {t}, k = {k} outside t = {larger}"
                    ));
                }
            }
        }
    }
    report.check(
        Check::new(
            "basis is triangular with diagonal C(m-k,t-k)",
            shape.is_none(),
        )
        .witness(shape),
    );
    report.check(
        Check::new(
            "smaller query sizes span nested subspaces",
            nesting.is_none(),
        )
        .witness(nesting),
    );
    Ok(())
}

/// Embedded-parity separation certificate for `alpha` at query size `t`.
pub fn separation(alpha: &ScoringVector, t: usize, report: &mut Report) -> Result<Built> {
    let m = alpha.m();
    ensure!(t >= 1 && t < m, "need 1 <= t < m");
    let set = letters(m)?;
    let decision = span_membership(alpha, t)?;
    report.check(Check::new(
        "alpha is outside the span at t",
        !decision.is_member(),
    ));
    if decision.is_member() {
        return Ok(Vec::new());
    }
    let c1: Vec<Candidate> = set.ids()[..=t].to_vec();
    let (a, b) = (c1[0], c1[1]);
    let cert = separating_index(&set, alpha, t, &c1, a, b)?;
    let inner = cons::parity_pair(&set.subset(&c1)?, a, b)?.profile;
    let inner_gap = plurality_score(&inner, a)? - plurality_score(&inner, b)?;
    let c2 = set.complement(&c1);
    let mut bad_pos = None;
    let mut bad_shape = None;
    for (idx, s) in cert.differences.iter().enumerate() {
        let i = idx + 1;
        let sigma = cons::embedded_profile(&set, &c1, &c2, i, &inner)?;
        let direct: Vec<Rational> = sigma
            .pos_vector(a)?
            .into_iter()
            .zip(sigma.pos_vector(b)?)
            .map(|(x, y)| x - y)
            .collect();
        if *s != direct && bad_pos.is_none() {
            bad_pos = Some(format!(
                "i = {i}: ({}) vs ({})",
                show::vector(s),
                show::vector(&direct)
            ));
        }
        let ok =
            s[..i - 1].iter().all(Zero::is_zero) && s[i - 1] == inner_gap && !inner_gap.is_zero();
        if !ok && bad_shape.is_none() {
            bad_shape = Some(format!("i = {i}: ({})", show::vector(s)));
        }
    }
    report.check(
        Check::new(
            "s^i equals pos(a) - pos(b) on the embedded profile",
            bad_pos.is_none(),
        )
        .witness(bad_pos),
    );
    report.check(
        Check::new(
            "s^i_j = 0 for j < i and s^i_i = plu(a) - plu(b) != 0",
            bad_shape.is_none(),
        )
        .detail(format!("plu(a) - plu(b) = {}", show::r(&inner_gap)))
        .witness(bad_shape),
    );
    let gap = scoring::score(&cert.profile, alpha, a)? - scoring::score(&cert.profile, alpha, b)?;
    report.check(
        Check::new(
            "score gap at the separating index is nonzero",
            !gap.is_zero() && gap == cert.gap,
        )
        .detail(format!("index {}, gap {}", cert.index, show::r(&gap))),
    );
    for (idx, s) in cert.differences.iter().enumerate() {
        report.value(&format!("s^{}", idx + 1), show::vector(s));
    }
    Ok(vec![("separating".into(), cert.profile)])
}

fn family_checks(
    set: &CandidateSet,
    family: &[(Candidate, Profile)],
    t: usize,
    rule: impl Fn(&Profile) -> elicit_core::Result<Vec<Candidate>>,
    report: &mut Report,
) -> Result<()> {
    let fc = cons::check_family(family, t, rule)?;
    let pair = fc.distinguishable.as_ref().map(|(c, d, w)| {
        format!(
            "{} vs {}: {}",
            set.name(*c),
            set.name(*d),
            show::witness(set, w)
        )
    });
    report.check(
        Check::new(
            format!("members are pairwise {t}-indistinguishable"),
            pair.is_none(),
        )
        .witness(pair),
    );
    let wrong = fc
        .wrong_winners
        .first()
        .map(|(c, w)| format!("member {} has winners {}", set.name(*c), show::set(set, w)));
    report.check(
        Check::new("member c has winner set {c}", wrong.is_none())
            .detail(format!("{} members", family.len()))
            .witness(wrong),
    );
    Ok(())
}

pub fn winner_family(alpha: &ScoringVector, t: usize, report: &mut Report) -> Result<Built> {
    let m = alpha.m();
    let mut scratch = Report::new("");
    let built = separation(alpha, t, &mut scratch)?;
    let Some((_, sigma)) = built.into_iter().next() else {
        report.check(Check::new("alpha is outside the span at t", false));
        return Ok(Vec::new());
    };
    let set = letters(m)?;
    let fam = cons::winner_family(&sigma, Candidate(0), Candidate(1), alpha, t)?;
    family_checks(
        &set,
        &fam.profiles,
        t,
        |p| scoring::winners(p, alpha),
        report,
    )?;
    let mut bad = None;
    for (c, p) in &fam.profiles {
        if let Some(q) = all_uniform(p, set.subsets_of_size(t))? {
            bad = Some(format!(
                "member {} restricted to {}",
                set.name(*c),
                show::set(&set, &q)
            ));
            break;
        }
    }
    report
        .check(Check::new(format!("every {t}-restriction is uniform"), bad.is_none()).witness(bad));
    Ok(fam
        .profiles
        .into_iter()
        .map(|(c, p)| (format!("sigma-{}", set.name(c)), p))
        .collect())
}

pub fn stv_family(m: usize, epsilon: Option<Rational>, report: &mut Report) -> Result<Built> {
    let set = letters(m)?;
    let fam = cons::stv_family(&set, epsilon)?;
    report.param("epsilon", show::r(&fam.params.epsilon));
    family_checks(
        &set,
        &fam.profiles,
        m - 1,
        |p| Ok(stv_winners(p).winners),
        report,
    )?;
    let mut out = vec![("cyclic".to_string(), fam.cyclic)];
    out.extend(
        fam.profiles
            .into_iter()
            .map(|(c, p)| (format!("sigma-{}", set.name(c)), p)),
    );
    Ok(out)
}

pub fn hard_instance(
    alpha: &ScoringVector,
    c1: Option<Vec<Candidate>>,
    report: &mut Report,
) -> Result<Built> {
    let m = alpha.m();
    let set = letters(m)?;
    let t_star = scoring::minimal_query_size(alpha);
    let c1 = c1.unwrap_or_else(|| set.ids()[..t_star.min(m)].to_vec());
    let inst = cons::query_complexity_instance(alpha, &set, &c1)?;
    report
        .value("t*", inst.t_star)
        .value("C1", show::set(&set, &inst.c1))
        .value("a", set.name(inst.a))
        .value("b", set.name(inst.b))
        .value("separating index", inst.index);
    let mut checked = 0;
    let mut bad = None;
    for size in 1..m {
        let open: Vec<Vec<Candidate>> = set
            .subsets_of_size(size)
            .into_iter()
            .filter(|q| !inst.c1.iter().all(|c| q.contains(c)))
            .collect();
        checked += open.len();
        if bad.is_none() {
            bad = all_uniform(&inst.profile, open)?.map(|q| show::set(&set, &q));
        }
    }
    report.check(
        Check::new(
            "queries missing part of C1 see the uniform distribution",
            bad.is_none(),
        )
        .detail(format!("{checked} queries"))
        .witness(bad),
    );
    let w = scoring::winners(&inst.profile, alpha)?;
    report.check(
        Check::new("b is the unique winner", w == [inst.b])
            .detail(format!("winners {}", show::set(&set, &w))),
    );
    Ok(vec![
        ("instance".into(), inst.profile),
        ("separating".into(), inst.separating),
    ])
}

fn borda3() -> ScoringVector {
    ScoringVector::from_ints(&[1, 0, -1]).expect("valid vector")
}

/// Margins recovered from two-candidate restrictions, in the order
/// `a≻b`, `b≻c`, `c≻a`.
fn observed_margins(p: &Profile) -> Result<[Rational; 3]> {
    let pair = |x: usize, y: usize| -> Result<Rational> {
        let (x, y) = (Candidate(x), Candidate(y));
        Ok(p.restrict(&[x, y])?.probability(&Ranking::new(vec![x, y])?))
    };
    Ok([pair(0, 1)?, pair(1, 2)?, pair(2, 0)?])
}

pub fn fibonacci_instance(n: u64, i: u64, s: u64, r: u8, report: &mut Report) -> Result<Built> {
    let inst = cons::fibonacci_instance(n, i, s, r)?;
    let set = inst.profile.candidates().clone();
    let (lo, hi) = (rational::frac(1, 3), rational::frac(2, 3));
    report.value(
        "scaled margins",
        inst.scaled
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(","),
    );
    report.value("margins", show::vector(&inst.margins));
    report.check(Check::new(
        "margins lie in [1/3, 2/3]",
        inst.margins.iter().all(|p| *p >= lo && *p <= hi),
    ));
    let seen = observed_margins(&inst.profile)?;
    report.check(
        Check::new(
            "pairwise restrictions reproduce the margins",
            seen == inst.margins,
        )
        .witness(Some(show::vector(&seen))),
    );
    let w = scoring::winners(&inst.profile, &borda3())?;
    report.check(
        Check::new("declared winner is the Borda winner", w == [inst.winner])
            .detail(format!("winner {}", set.name(inst.winner)))
            .witness(Some(show::set(&set, &w))),
    );
    Ok(vec![("instance".into(), inst.profile)])
}

pub fn fibonacci_grid(n: u64, report: &mut Report) -> Result<()> {
    let big_f = cons::shifted_fibonacci(n + 2);
    let (lo, hi) = (rational::frac(1, 3), rational::frac(2, 3));
    let borda = borda3();
    let mut count = 0u64;
    let mut range = None;
    let mut restriction = None;
    let mut winner = None;
    for i in 1..=n {
        for s in 0..=cons::fibonacci_shift_limit(n) {
            for r in 1..=6u8 {
                let inst = cons::fibonacci_instance(n, i, s, r)?;
                let tag = || format!("i = {i}, s = {s}, r = {r}");
                if range.is_none() && !inst.margins.iter().all(|p| *p >= lo && *p <= hi) {
                    range = Some(tag());
                }
                if restriction.is_none() && observed_margins(&inst.profile)? != inst.margins {
                    restriction = Some(tag());
                }
                if winner.is_none() && scoring::winners(&inst.profile, &borda)? != [inst.winner] {
                    winner = Some(tag());
                }
                count += 1;
            }
        }
    }
    report.check(
        Check::new("margins lie in [1/3, 2/3]", range.is_none())
            .detail(format!("{count} instances"))
            .witness(range),
    );
    report.check(
        Check::new(
            "pairwise restrictions reproduce the margins",
            restriction.is_none(),
        )
        .witness(restriction),
    );
    report.check(
        Check::new("declared winners are the Borda winners", winner.is_none()).witness(winner),
    );

    let winners = |v: &[cons::Consistent]| {
        let mut w: Vec<usize> = v.iter().map(|x| x.winner.0).collect();
        w.sort_unstable();
        w
    };
    let (lo, hi) = (big_f, (n - 1) * big_f);
    let mut one = None;
    if n >= 5 {
        'one: for i in 3..=n - 2 {
            for p1 in lo..=hi {
                let got = winners(&cons::fibonacci_consistent_set(
                    n,
                    [Some(p1), None, None],
                    Some(i),
                )?);
                if got != [0, 0, 1, 1, 2, 2] {
                    one = Some(format!("i = {i}, p1 = {p1}: {got:?}"));
                    break 'one;
                }
            }
        }
    }
    report.check(
        Check::new(
            "one margin with i known leaves 6 triples, two per winner",
            one.is_none(),
        )
        .witness(one),
    );
    let mut down = None;
    let mut up = None;
    for j in 3..=n {
        let gap = cons::shifted_fibonacci(j);
        if gap > hi - lo {
            continue;
        }
        for p2 in lo..=hi - gap {
            let d = winners(&cons::fibonacci_consistent_set(
                n,
                [Some(p2 + gap), Some(p2), None],
                None,
            )?);
            if d != [0, 2] && down.is_none() {
                down = Some(format!("gap F{j}, p2 = {p2}: {d:?}"));
            }
            let u = winners(&cons::fibonacci_consistent_set(
                n,
                [Some(p2), Some(p2 + gap), None],
                None,
            )?);
            if u != [0, 1, 1, 2] && up.is_none() {
                up = Some(format!("gap F{j}, p1 = {p2}: {u:?}"));
            }
        }
    }
    report.check(
        Check::new(
            "p1 - p2 a Fibonacci gap leaves 2 triples won by a and c",
            down.is_none(),
        )
        .witness(down),
    );
    report.check(
        Check::new(
            "p2 - p1 a Fibonacci gap leaves 4 triples won by a, b, b, c",
            up.is_none(),
        )
        .witness(up),
    );
    Ok(())
}

fn condorcet_oracle(p: &Profile) -> Result<Option<Candidate>> {
    let ids = p.candidates().ids();
    let half = rational::frac(1, 2);
    for &a in ids {
        let mut beats_all = true;
        for &b in ids {
            if a != b && p.pairwise(a, b)? <= half {
                beats_all = false;
                break;
            }
        }
        if beats_all {
            return Ok(Some(a));
        }
    }
    Ok(None)
}

pub fn three_cycle() -> Result<Profile> {
    let set = letters(3)?;
    let third = rational::frac(1, 3);
    let rows = ["a>b>c", "c>a>b", "b>c>a"]
        .iter()
        .map(|s| Ok((Ranking::parse(s, &set)?, third.clone())))
        .collect::<elicit_core::Result<Vec<_>>>()?;
    Ok(Profile::new(set, rows)?)
}

pub fn condorcet(m: usize, cases: usize, rng: &mut ChaCha8Rng, report: &mut Report) -> Result<()> {
    let set = letters(m)?;
    let budget = condorcet_budget(m);
    let mut mismatch = None;
    let mut most = 0;
    let mut wide = false;
    let mut found = 0;
    for case in 0..cases {
        let p = random_profile(&set, 5, rng);
        let expected = condorcet_oracle(&p)?;
        let mut session = QuerySession::open(p, 2)?;
        let run = condorcet_via_queries(&mut session)?;
        if run.winner != expected && mismatch.is_none() {
            let name = |w: Option<Candidate>| w.map_or("none".to_string(), |c| set.name(c));
            mismatch = Some(format!(
                "case {case}: {} vs {}",
                name(run.winner),
                name(expected)
            ));
        }
        wide |= session.log().iter().any(|q| q.len() != 2);
        most = most.max(session.query_count());
        found += usize::from(expected.is_some());
    }
    report.check(
        Check::new(
            "knockout agrees with the pairwise majority winner",
            mismatch.is_none(),
        )
        .detail(format!("{cases} profiles, {found} with a winner"))
        .witness(mismatch),
    );
    report.check(Check::new("only pairwise queries", !wide));
    report.check(
        Check::new("queries within 2m - floor(log2 m) - 2", most <= budget)
            .detail(format!("at most {most} of {budget}")),
    );
    if m == 3 {
        let mut session = QuerySession::open(three_cycle()?, 2)?;
        let run = condorcet_via_queries(&mut session)?;
        report.check(Check::new("3-cycle has no winner", run.winner.is_none()));
    }
    Ok(())
}

pub fn covering(m: usize, report: &mut Report) -> Result<()> {
    let mut diagonal = None;
    let mut order = None;
    let mut invalid = None;
    let mut instances = 0;
    for t in 1..=m {
        if cover_lower_bound(m, t, t)? != binomial(m, t) && diagonal.is_none() {
            diagonal = Some(format!("t = {t}"));
        }
        if binomial(m, t) > EXACT_COVER_CAP {
            continue;
        }
        for ts in 1..=t {
            if binomial(m, t).saturating_mul(binomial(m, ts)) > GREEDY_WORK_CAP {
                continue;
            }
            let lb = cover_lower_bound(m, t, ts)? as usize;
            let best = exact_cover(m, t, ts)?;
            let greedy = greedy_cover(m, t, ts)?;
            if !(lb <= best.len() && best.len() <= greedy.len()) && order.is_none() {
                order = Some(format!(
                    "t = {t}, t* = {ts}: {lb}, {}, {}",
                    best.len(),
                    greedy.len()
                ));
            }
            if (!is_cover(&best).covered() || !is_cover(&greedy).covered()) && invalid.is_none() {
                invalid = Some(format!("t = {t}, t* = {ts}"));
            }
            instances += 1;
        }
    }
    report.check(
        Check::new("lower bound for t* = t is C(m,t)", diagonal.is_none()).witness(diagonal),
    );
    report.check(
        Check::new("lower bound <= exact <= greedy", order.is_none())
            .detail(format!(
                "{instances} instances with C(m,t) <= {EXACT_COVER_CAP}"
            ))
            .witness(order),
    );
    report.check(
        Check::new("returned covers cover every t*-set", invalid.is_none()).witness(invalid),
    );
    Ok(())
}
