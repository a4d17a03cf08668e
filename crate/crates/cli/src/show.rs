//! Text forms used in reports. Rationals are always `p/q`.

use elicit_core::queries::Witness;
use elicit_core::rational::to_ratio_string;
use elicit_core::{Candidate, CandidateSet, Rational};

pub fn r(value: &Rational) -> String {
    to_ratio_string(value)
}

pub fn vector(values: &[Rational]) -> String {
    values.iter().map(r).collect::<Vec<_>>().join(",")
}

pub fn set(candidates: &CandidateSet, members: &[Candidate]) -> String {
    let names: Vec<String> = members.iter().map(|c| candidates.name(*c)).collect();
    format!("{{{}}}", names.join(","))
}

pub fn witness(candidates: &CandidateSet, w: &Witness) -> String {
    format!(
        "query {} ranking {}: {} vs {}",
        set(candidates, w.query.members()),
        w.ranking.display(candidates),
        r(&w.first),
        r(&w.second)
    )
}
