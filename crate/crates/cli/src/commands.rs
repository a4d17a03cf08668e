use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use elicit_core::constructions::{bound_success_probability, fibonacci_consistent_set};
use elicit_core::covering::{
    cover_lower_bound, cover_lower_bound_ratio, exact_cover, greedy_cover, is_cover, CoverInstance,
};
use elicit_core::format::{profile_from_json, profile_to_json, transcript_to_json};
use elicit_core::profiles::random_profile;
use elicit_core::queries::{
    indistinguishable, max_indistinguishable_size, QuerySession, SampledSession,
};
use elicit_core::rules::{condorcet_via_queries, plurality_score, stv_winners, Match, Preset};
use elicit_core::scoring::{
    self, basis_vector, minimal_query_size, score_via_queries, simplex_coordinates,
    span_membership, winner_via_queries, SimplexPoint, SpanDecision,
};
use elicit_core::{rational, Candidate, CandidateSet, Profile, Rational, ScoringVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::checks::{self, letters, Built};
use crate::report::{Check, Report};
use crate::{show, Clock, Command, GenerateArgs, Generator, SpanArgs, Target, VerifyArgs};

pub(crate) fn execute(command: &Command, clock: &mut Clock) -> Result<Vec<Report>> {
    let mut reports = match command {
        Command::Verify(args) => return verify(args, clock),
        Command::Span(args) => vec![span(args)?],
        Command::Basis { m, t } => vec![basis(*m, *t)?],
        Command::Simplex { m, grid, out } => vec![simplex(*m, *grid, out.as_deref())?],
        Command::BoundCurve {
            m,
            tstar,
            grid,
            out,
        } => vec![bound_curve(*m, *tstar, *grid, out.as_deref())?],
        Command::Cover { m, t, tstar, out } => vec![cover(*m, *t, *tstar, out.as_deref())?],
        Command::Generate(args) => vec![generate(args)?],
        Command::Consistent { n, p1, p2, p3, i } => vec![consistent(*n, [*p1, *p2, *p3], *i)?],
        Command::Plurality { profile } => vec![plurality(&load(profile)?)?],
        Command::Score {
            profile,
            alpha,
            t,
            transcript,
        } => vec![score(&load(profile)?, alpha, *t, transcript.as_deref())?],
        Command::Stv { profile } => vec![stv(&load(profile)?)],
        Command::Condorcet { profile } => vec![condorcet(load(profile)?)?],
        Command::Sample {
            profile,
            t,
            subset,
            n,
            seed,
        } => vec![sample(load(profile)?, *t, subset, *n, *seed)?],
        Command::Indist { profile, other, t } => vec![indist(&load(profile)?, &load(other)?, *t)?],
    };
    for r in &mut reports {
        clock.stamp(r);
    }
    Ok(reports)
}

fn load(path: &Path) -> Result<Profile> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    profile_from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

/// A preset name for `m` candidates, or comma separated weights.
fn resolve_alpha(text: &str, m: Option<usize>) -> Result<ScoringVector> {
    if let Ok(p) = text.parse::<Preset>() {
        let Some(m) = m else {
            bail!("preset {p} needs a candidate count");
        };
        return Ok(p.vector(m)?);
    }
    let alpha = ScoringVector::parse(text)?;
    if let Some(m) = m {
        ensure!(
            alpha.m() == m,
            "alpha has {} weights for {m} candidates",
            alpha.m()
        );
    }
    Ok(alpha)
}

fn write_csv(report: &mut Report, csv: String, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, csv).with_context(|| format!("writing {}", path.display()))?;
            report.value("wrote", path.display());
        }
        None => report.data = Some(csv),
    }
    Ok(())
}

fn winner_lines(report: &mut Report, set: &CandidateSet, winners: &[Candidate]) {
    report.value("winners", show::set(set, winners));
    match winners {
        [] => {}
        [only] => {
            report.value("winner", set.name(*only));
        }
        [first, ..] => {
            report.value(
                "winner",
                format!(
                    "{} (tie broken by candidate order for display)",
                    set.name(*first)
                ),
            );
        }
    }
}

// ---- verify --------------------------------------------------------------

fn range(args: &VerifyArgs, lo: usize) -> Vec<usize> {
    match args.m {
        Some(m) => vec![m],
        None => (lo..=args.max_m).collect(),
    }
}

fn alphas(args: &VerifyArgs, default: &str, lo: usize) -> Result<Vec<ScoringVector>> {
    let text = args.alpha.as_deref().unwrap_or(default);
    if text.parse::<Preset>().is_ok() {
        range(args, lo)
            .into_iter()
            .map(|m| resolve_alpha(text, Some(m)))
            .collect()
    } else {
        Ok(vec![resolve_alpha(text, args.m)?])
    }
}

fn verify(args: &VerifyArgs, clock: &mut Clock) -> Result<Vec<Report>> {
    let targets: Vec<Target> = match args.target {
        Target::All => Target::value_variants_without_all(),
        t => vec![t],
    };
    let mut reports = Vec::new();
    for target in targets {
        verify_target(target, args, clock, &mut reports)?;
    }
    Ok(reports)
}

impl Target {
    fn value_variants_without_all() -> Vec<Target> {
        use clap::ValueEnum;
        Target::value_variants()
            .iter()
            .copied()
            .filter(|t| *t != Target::All)
            .collect()
    }

    fn name(self) -> String {
        use clap::ValueEnum;
        self.to_possible_value()
            .expect("no skipped variants")
            .get_name()
            .to_string()
    }
}

fn verify_target(
    target: Target,
    args: &VerifyArgs,
    clock: &mut Clock,
    out: &mut Vec<Report>,
) -> Result<()> {
    let command = format!("verify {}", target.name());
    let mut push = |mut r: Report| {
        clock.stamp(&mut r);
        out.push(r);
    };
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    match target {
        Target::All => unreachable!("expanded by the caller"),
        Target::ParityPair => {
            for m in range(args, 3) {
                let mut r = Report::new(&command);
                r.param("m", m);
                checks::parity_pair(m, &mut r)?;
                push(r);
            }
        }
        Target::QueryScoring => {
            for m in range(args, 1) {
                let ts = match args.t {
                    Some(t) => vec![t],
                    None => (1..=m).collect(),
                };
                for t in ts {
                    let mut r = Report::new(&command);
                    r.param("m", m).param("t", t).param("seed", args.seed);
                    checks::query_scoring(m, t, args.cases, &mut rng, &mut r)?;
                    push(r);
                }
            }
        }
        Target::Span => {
            for m in range(args, 2) {
                let mut r = Report::new(&command);
                r.param("m", m);
                checks::span(m, &mut r)?;
                push(r);
            }
        }
        Target::WinnerFamily => {
            for alpha in alphas(args, "plurality", 3)? {
                let t = args.t.unwrap_or(alpha.m() - 1);
                let mut r = Report::new(&command);
                r.param("alpha", show::vector(alpha.weights()))
                    .param("t", t);
                checks::winner_family(&alpha, t, &mut r)?;
                push(r);
            }
        }
        Target::Separation => {
            let vectors = match &args.alpha {
                Some(_) => alphas(args, "", 2)?,
                None => {
                    let mut v = alphas(args, "plurality", 3)?;
                    v.extend(
                        range(args, 3)
                            .into_iter()
                            .map(|m| resolve_alpha("veto", Some(m)))
                            .collect::<Result<Vec<_>>>()?,
                    );
                    v
                }
            };
            for alpha in vectors {
                let m = alpha.m();
                let ts: Vec<usize> = match args.t {
                    Some(t) => vec![t],
                    None => (1..m)
                        .filter(|&t| span_membership(&alpha, t).is_ok_and(|d| !d.is_member()))
                        .collect(),
                };
                for t in ts {
                    let mut r = Report::new(&command);
                    r.param("alpha", show::vector(alpha.weights()))
                        .param("t", t);
                    checks::separation(&alpha, t, &mut r)?;
                    push(r);
                }
            }
        }
        Target::StvFamily => {
            for m in range(args, 3) {
                let mut r = Report::new(&command);
                r.param("m", m);
                checks::stv_family(m, None, &mut r)?;
                push(r);
            }
        }
        Target::HardInstance => {
            for alpha in alphas(args, "borda", 3)? {
                let mut r = Report::new(&command);
                r.param("alpha", show::vector(alpha.weights()));
                checks::hard_instance(&alpha, None, &mut r)?;
                push(r);
            }
        }
        Target::Fibonacci => {
            let mut r = Report::new(&command);
            r.param("n", args.n);
            checks::fibonacci_grid(args.n, &mut r)?;
            push(r);
        }
        Target::Condorcet => {
            let ms = match args.m {
                Some(m) => vec![m],
                None => (2..=16).collect(),
            };
            for m in ms {
                let mut r = Report::new(&command);
                r.param("m", m).param("seed", args.seed);
                checks::condorcet(m, args.cases, &mut rng, &mut r)?;
                push(r);
            }
        }
        Target::Covering => {
            for m in range(args, 1) {
                let mut r = Report::new(&command);
                r.param("m", m);
                checks::covering(m, &mut r)?;
                push(r);
            }
        }
    }
    Ok(())
}

// ---- scoring geometry ----------------------------------------------------

fn span(args: &SpanArgs) -> Result<Report> {
    let alpha = resolve_alpha(&args.alpha, args.m)?;
    let mut r = Report::new("span");
    r.param("alpha", show::vector(alpha.weights()));
    if let Some(t) = args.t {
        r.param("t", t);
        match span_membership(&alpha, t)? {
            SpanDecision::Member { coefficients } => {
                r.value("decision", "member")
                    .value("coefficients", show::vector(&coefficients));
            }
            SpanDecision::NotMember { residual } => {
                r.value("decision", "not member")
                    .value("residual", show::vector(&residual));
            }
        }
    }
    r.value("minimal query size", minimal_query_size(&alpha));
    match simplex_coordinates(&alpha) {
        SimplexPoint::Constant => r.value("normalized", "constant"),
        SimplexPoint::Point(x) => r.value("normalized", show::vector(&x)),
    };
    Ok(r)
}

fn basis(m: usize, t: usize) -> Result<Report> {
    let mut r = Report::new("basis");
    r.param("m", m).param("t", t);
    for k in 1..=t {
        let v = basis_vector(m, t, k)?;
        r.value(&format!("alpha^{k}"), show::vector(v.weights()));
        if let SimplexPoint::Point(x) = simplex_coordinates(&v) {
            r.value(&format!("alpha^{k} normalized"), show::vector(&x));
        }
    }
    Ok(r)
}

/// Nonnegative integer vectors of length `m` summing to `total`, in
/// decreasing lexicographic order.
fn compositions(m: usize, total: usize) -> Vec<Vec<usize>> {
    if m == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for mut rest in compositions(m - 1, total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn simplex(m: usize, grid: usize, out: Option<&Path>) -> Result<Report> {
    ensure!(m >= 1 && grid >= 1, "need m >= 1 and a positive grid");
    let mut r = Report::new("simplex");
    r.param("m", m).param("grid", grid);
    let mut csv = String::new();
    let header: Vec<String> = (1..=m)
        .map(|j| format!("w{j}"))
        .chain((1..=m).map(|j| format!("x{j}")))
        .chain(["constant".into(), "t_star".into()])
        .collect();
    writeln!(csv, "{}", header.join(",")).unwrap();
    let points = compositions(m, grid);
    for point in &points {
        let w: Vec<Rational> = point
            .iter()
            .map(|k| rational::frac(*k as i64, grid as i64))
            .collect();
        let alpha = ScoringVector::new(w.clone())?;
        let (x, constant) = match simplex_coordinates(&alpha) {
            SimplexPoint::Constant => (vec![String::new(); m], "yes"),
            SimplexPoint::Point(x) => (x.iter().map(show::r).collect(), "no"),
        };
        let row: Vec<String> = w
            .iter()
            .map(show::r)
            .chain(x)
            .chain([constant.to_string(), minimal_query_size(&alpha).to_string()])
            .collect();
        writeln!(csv, "{}", row.join(",")).unwrap();
    }
    r.value("points", points.len());
    write_csv(&mut r, csv, out)?;
    Ok(r)
}

fn bound_curve(m: usize, t_star: usize, grid: usize, out: Option<&Path>) -> Result<Report> {
    ensure!(grid >= 1, "the grid needs at least one step");
    let mut r = Report::new("bound-curve");
    r.param("m", m).param("t*", t_star).param("grid", grid);
    let baseline = rational::frac(1, m as i64);
    let mut csv = String::from("delta,bound,baseline\n");
    for k in 0..=grid {
        let delta = rational::frac(k as i64, grid as i64);
        let bound = bound_success_probability(&delta, m, t_star)?;
        writeln!(
            csv,
            "{},{},{}",
            show::r(&delta),
            show::r(&bound),
            show::r(&baseline)
        )
        .unwrap();
    }
    write_csv(&mut r, csv, out)?;
    Ok(r)
}

fn listing(cover: &CoverInstance) -> String {
    cover
        .sets
        .iter()
        .map(|s| {
            format!(
                "{{{}}}",
                s.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
            )
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn cover(m: usize, t: Option<usize>, t_star: Option<usize>, out: Option<&Path>) -> Result<Report> {
    let mut r = Report::new("cover");
    r.param("m", m);
    if let Some(t) = t {
        r.param("t", t);
    }
    if let Some(ts) = t_star {
        r.param("t*", ts);
    }
    let mut csv = String::from("m,t,t_star,lower_bound_ratio,lower_bound,greedy,exact\n");
    let mut failure = None;
    let mut rows = 0;
    for tt in t.map_or_else(|| (1..=m).collect(), |t| vec![t]) {
        for ts in t_star.map_or_else(|| (1..=tt).collect(), |s| vec![s]) {
            let ratio = cover_lower_bound_ratio(m, tt, ts)?;
            let lb = cover_lower_bound(m, tt, ts)?;
            let greedy = greedy_cover(m, tt, ts).ok();
            let exact = exact_cover(m, tt, ts).ok();
            for found in [&greedy, &exact].into_iter().flatten() {
                if failure.is_none() && !is_cover(found).covered() {
                    failure = Some(format!("t = {tt}, t* = {ts}: {}", listing(found)));
                }
            }
            let g = greedy.as_ref().map(CoverInstance::len);
            let e = exact.as_ref().map(CoverInstance::len);
            let ordered = e.is_none_or(|e| lb as usize <= e && g.is_none_or(|g| e <= g));
            if failure.is_none() && !ordered {
                failure = Some(format!(
                    "t = {tt}, t* = {ts}: bound {lb}, exact {e:?}, greedy {g:?}"
                ));
            }
            let cell = |x: Option<usize>| x.map(|v| v.to_string()).unwrap_or_default();
            writeln!(
                csv,
                "{m},{tt},{ts},{},{lb},{},{}",
                show::r(&ratio),
                cell(g),
                cell(e)
            )
            .unwrap();
            if t.is_some() && t_star.is_some() {
                if let Some(g) = &greedy {
                    r.value("greedy cover", listing(g));
                }
                if let Some(e) = &exact {
                    r.value("exact cover", listing(e));
                }
            }
            rows += 1;
        }
    }
    r.check(
        Check::new(
            "covers are valid and lower bound <= exact <= greedy",
            failure.is_none(),
        )
        .detail(format!("{rows} rows"))
        .witness(failure),
    );
    if t.is_some() && t_star.is_some() && out.is_none() {
        // A single row: keep the listing visible instead of printing bare CSV.
        r.value("csv", csv.lines().nth(1).unwrap_or_default());
        return Ok(r);
    }
    write_csv(&mut r, csv, out)?;
    Ok(r)
}

// ---- generators ----------------------------------------------------------

fn need<T: Copy>(value: Option<T>, flag: &str) -> Result<T> {
    value.with_context(|| format!("--{flag} is required for this generator"))
}

fn generate(args: &GenerateArgs) -> Result<Report> {
    let name = {
        use clap::ValueEnum;
        args.target
            .to_possible_value()
            .expect("named variant")
            .get_name()
            .to_string()
    };
    let mut r = Report::new(format!("generate {name}"));
    let built: Built = match args.target {
        Generator::ParityPair => {
            let m = need(args.m, "m")?;
            r.param("m", m);
            checks::parity_pair(m, &mut r)?
        }
        Generator::WinnerFamily | Generator::Separation | Generator::HardInstance => {
            let default = if args.target == Generator::HardInstance {
                "borda"
            } else {
                "plurality"
            };
            let alpha = resolve_alpha(args.alpha.as_deref().unwrap_or(default), args.m)?;
            r.param("alpha", show::vector(alpha.weights()));
            if args.target == Generator::HardInstance {
                let set = letters(alpha.m())?;
                let c1 = args
                    .c1
                    .as_deref()
                    .map(|text| set.parse_subset(text))
                    .transpose()?;
                checks::hard_instance(&alpha, c1, &mut r)?
            } else {
                let t = args.t.unwrap_or(alpha.m().saturating_sub(1));
                r.param("t", t);
                if args.target == Generator::WinnerFamily {
                    checks::winner_family(&alpha, t, &mut r)?
                } else {
                    checks::separation(&alpha, t, &mut r)?
                }
            }
        }
        Generator::StvFamily => {
            let m = need(args.m, "m")?;
            r.param("m", m);
            let epsilon = args.epsilon.as_deref().map(rational::parse).transpose()?;
            checks::stv_family(m, epsilon, &mut r)?
        }
        Generator::Fibonacci => {
            let (i, s, row) = (need(args.i, "i")?, need(args.s, "s")?, need(args.r, "r")?);
            r.param("n", args.n)
                .param("i", i)
                .param("s", s)
                .param("r", row);
            checks::fibonacci_instance(args.n, i, s, row, &mut r)?
        }
        Generator::Random => {
            let m = need(args.m, "m")?;
            r.param("m", m)
                .param("support", args.support)
                .param("seed", args.seed);
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            vec![(
                "random".into(),
                random_profile(&letters(m)?, args.support, &mut rng),
            )]
        }
    };
    for (label, p) in &built {
        r.value(
            &format!("profile {label}"),
            format!("{} rankings", p.support_len()),
        );
    }
    if let Some(dir) = &args.out {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        for (label, p) in &built {
            let path = dir.join(format!("{label}.json"));
            fs::write(&path, profile_to_json(p) + "\n")
                .with_context(|| format!("writing {}", path.display()))?;
            r.value("wrote", path.display());
        }
    }
    Ok(r)
}

fn consistent(n: u64, observed: [Option<u64>; 3], i: Option<u64>) -> Result<Report> {
    let mut r = Report::new("consistent");
    r.param("n", n);
    for (k, p) in observed.iter().enumerate() {
        if let Some(p) = p {
            r.param(&format!("p{}", k + 1), p);
        }
    }
    if let Some(i) = i {
        r.param("i", i);
    }
    let set = letters(3)?;
    let found = fibonacci_consistent_set(n, observed, i)?;
    for c in &found {
        r.value(
            "triple",
            format!(
                "i={} s={} r={} winner={}",
                c.i,
                c.s,
                c.r,
                set.name(c.winner)
            ),
        );
    }
    r.value("count", found.len());
    let mut winners: Vec<String> = found.iter().map(|c| set.name(c.winner)).collect();
    winners.sort();
    r.value("winner multiset", format!("{{{}}}", winners.join(",")));
    Ok(r)
}

// ---- rules on profiles ---------------------------------------------------

fn plurality(p: &Profile) -> Result<Report> {
    let set = p.candidates();
    let mut r = Report::new("plurality");
    let mut w = Vec::new();
    let mut best: Option<Rational> = None;
    for &c in set.ids() {
        let s = plurality_score(p, c)?;
        r.value(&format!("score {}", set.name(c)), show::r(&s));
        match &best {
            Some(b) if s < *b => {}
            Some(b) if s == *b => w.push(c),
            _ => {
                best = Some(s);
                w = vec![c];
            }
        }
    }
    winner_lines(&mut r, set, &w);
    Ok(r)
}

fn score(p: &Profile, alpha: &str, t: Option<usize>, transcript: Option<&Path>) -> Result<Report> {
    let set = p.candidates();
    let alpha = resolve_alpha(alpha, Some(p.m()))?;
    let mut r = Report::new("score");
    r.param("alpha", show::vector(alpha.weights()));
    let direct = scoring::scores(p, &alpha)?;
    for (c, s) in &direct {
        r.value(&format!("score {}", set.name(*c)), show::r(s));
    }
    let winners = scoring::winners(p, &alpha)?;
    winner_lines(&mut r, set, &winners);
    if let Some(t) = t {
        r.param("t", t);
        let mut session = QuerySession::open(p.clone(), t)?;
        let mut mismatch = None;
        for (c, s) in &direct {
            let via = score_via_queries(&mut session, &alpha, *c)?;
            if via != *s && mismatch.is_none() {
                mismatch = Some(format!(
                    "{}: {} vs {}",
                    set.name(*c),
                    show::r(&via),
                    show::r(s)
                ));
            }
        }
        let via = winner_via_queries(&mut session, &alpha)?;
        r.check(
            Check::new(
                "scores from queries equal direct scores",
                mismatch.is_none(),
            )
            .witness(mismatch),
        );
        r.check(Check::new(
            "winners from queries equal direct winners",
            via == winners,
        ));
        r.queries = Some(session.query_count());
        if let Some(path) = transcript {
            fs::write(path, transcript_to_json(&session) + "\n")
                .with_context(|| format!("writing {}", path.display()))?;
            r.value("wrote", path.display());
        }
    }
    Ok(r)
}

fn stv(p: &Profile) -> Report {
    let set = p.candidates();
    let outcome = stv_winners(p);
    let mut r = Report::new("stv");
    winner_lines(&mut r, set, &outcome.winners);
    for trace in &outcome.traces {
        let mut line = String::new();
        for step in &trace.steps {
            let scores: Vec<String> = step
                .scores
                .iter()
                .map(|(c, s)| format!("{}={}", set.name(*c), show::r(s)))
                .collect();
            write!(
                line,
                "{} out [{}]; ",
                set.name(step.eliminated),
                scores.join(" ")
            )
            .unwrap();
        }
        write!(line, "{} wins", set.name(trace.winner)).unwrap();
        r.value("trace", line);
    }
    r
}

fn match_line(set: &CandidateSet, m: &Match) -> String {
    format!(
        "{} vs {}: Pr[{}>{}] = {}, {} advances",
        set.name(m.first),
        set.name(m.second),
        set.name(m.first),
        set.name(m.second),
        show::r(&m.margin),
        set.name(m.winner)
    )
}

fn condorcet(p: Profile) -> Result<Report> {
    let set = p.candidates().clone();
    let mut session = QuerySession::open(p, set.len().min(2))?;
    let run = condorcet_via_queries(&mut session)?;
    let mut r = Report::new("condorcet");
    for (k, round) in run.rounds.iter().enumerate() {
        for m in round {
            r.value(&format!("round {}", k + 1), match_line(&set, m));
        }
    }
    r.value("champion", set.name(run.champion));
    for m in &run.verification {
        r.value("verify", match_line(&set, m));
    }
    r.value(
        "condorcet winner",
        run.winner.map_or("none".to_string(), |c| set.name(c)),
    );
    r.value("budget", run.budget);
    r.queries = Some(run.queries);
    Ok(r)
}

fn sample(p: Profile, t: usize, subset: &str, n: usize, seed: u64) -> Result<Report> {
    let set = p.candidates().clone();
    let members = set.parse_subset(subset)?;
    let exact = p.restrict(&members)?;
    let mut session = SampledSession::open(p, t, seed)?;
    let outcome = session.sample_query(&members, n)?;
    let mut r = Report::new("sample");
    r.param("t", t)
        .param("subset", show::set(&set, &members))
        .param("n", n)
        .param("seed", seed);
    for (ranking, q) in outcome.empirical.support() {
        r.value(&format!("sampled {}", ranking.display(&set)), show::r(q));
    }
    for (ranking, q) in exact.support() {
        r.value(&format!("exact {}", ranking.display(&set)), show::r(q));
    }
    r.value("total variation", show::r(&outcome.tv_distance));
    r.queries = Some(session.query_count());
    Ok(r)
}

fn indist(p: &Profile, q: &Profile, t: Option<usize>) -> Result<Report> {
    ensure!(
        p.candidates() == q.candidates(),
        "the profiles rank different candidates"
    );
    let set = p.candidates();
    let mut r = Report::new("indist");
    if let Some(t) = t {
        r.param("t", t);
        let report = indistinguishable(p, q, t)?;
        r.value(
            "indistinguishable",
            if report.indistinguishable() {
                "yes"
            } else {
                "no"
            },
        );
        if let Some(w) = &report.witness {
            r.value("witness", show::witness(set, w));
        }
    }
    r.value(
        "largest indistinguishable size",
        max_indistinguishable_size(p, q)?,
    );
    Ok(r)
}
