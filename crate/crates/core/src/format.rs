//! JSON file formats for profiles and query transcripts.
//!
//! A profile document lists candidate labels and the support:
//!
//! ```json
//! {"candidates": ["a", "b", "c"],
//!  "rankings": [{"ranking": ["a", "b", "c"], "probability": "1/2"},
//!               {"ranking": ["c", "b", "a"], "probability": "1/2"}]}
//! ```
//!
//! Probabilities are exact `p/q` strings. On load, candidate ids follow the
//! order of the `candidates` list.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profiles::{CandidateSet, Profile, Ranking};
use crate::queries::QuerySession;
use crate::rational::{parse, to_ratio_string};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RankingEntry {
    pub ranking: Vec<String>,
    pub probability: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileDocument {
    pub candidates: Vec<String>,
    pub rankings: Vec<RankingEntry>,
}

impl ProfileDocument {
    pub fn from_profile(profile: &Profile) -> Self {
        let set = profile.candidates();
        Self {
            candidates: set.iter().map(|(_, l)| l.to_owned()).collect(),
            rankings: entries(profile),
        }
    }

    /// Rejects repeated rankings, unknown labels and masses not summing to one.
    pub fn to_profile(&self) -> Result<Profile> {
        let set = CandidateSet::new(self.candidates.iter().cloned())?;
        let mut seen = std::collections::BTreeSet::new();
        let mut rows = Vec::with_capacity(self.rankings.len());
        for entry in &self.rankings {
            let order = entry
                .ranking
                .iter()
                .map(|l| {
                    set.find(l)
                        .ok_or_else(|| Error::Parse(format!("unknown candidate {l:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            let ranking = Ranking::new(order)?;
            if !seen.insert(ranking.clone()) {
                return Err(Error::Parse(format!(
                    "ranking {} listed twice",
                    entry.ranking.join(">")
                )));
            }
            rows.push((ranking, parse(&entry.probability)?));
        }
        Profile::new(set, rows)
    }
}

fn entries(profile: &Profile) -> Vec<RankingEntry> {
    let set = profile.candidates();
    profile
        .support()
        .map(|(r, p)| RankingEntry {
            ranking: r.order().iter().map(|c| set.name(*c)).collect(),
            probability: to_ratio_string(p),
        })
        .collect()
}

pub fn profile_to_json(profile: &Profile) -> String {
    serde_json::to_string_pretty(&ProfileDocument::from_profile(profile))
        .expect("plain data serializes")
}

pub fn profile_from_json(text: &str) -> Result<Profile> {
    let doc: ProfileDocument =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    doc.to_profile()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptEntry {
    pub index: usize,
    pub subset: Vec<String>,
    pub response: Vec<RankingEntry>,
}

/// Every logged query of a session, in order, with its exact response.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptDocument {
    pub t: usize,
    pub candidates: Vec<String>,
    pub queries: Vec<TranscriptEntry>,
}

impl TranscriptDocument {
    pub fn from_session(session: &QuerySession) -> Self {
        let set = session.candidates();
        let queries = session
            .transcript()
            .into_iter()
            .enumerate()
            .map(|(index, (q, response))| TranscriptEntry {
                index,
                subset: q.members().iter().map(|c| set.name(*c)).collect(),
                response: entries(&response),
            })
            .collect();
        Self {
            t: session.max_size(),
            candidates: set.iter().map(|(_, l)| l.to_owned()).collect(),
            queries,
        }
    }
}

pub fn transcript_to_json(session: &QuerySession) -> String {
    serde_json::to_string_pretty(&TranscriptDocument::from_session(session))
        .expect("plain data serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::{random_profile, Candidate};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for m in 1..=5 {
            let set = CandidateSet::new((0..m).map(|k| format!("c{k}"))).unwrap();
            for _ in 0..10 {
                let p = random_profile(&set, 6, &mut rng);
                let text = profile_to_json(&p);
                let back = profile_from_json(&text).unwrap();
                assert_eq!(back, p);
                assert_eq!(profile_to_json(&back), text);
            }
        }
    }

    #[test]
    fn rejects_bad_documents() {
        let dup = r#"{"candidates":["a","b"],"rankings":[
            {"ranking":["a","b"],"probability":"1/2"},
            {"ranking":["a","b"],"probability":"1/2"}]}"#;
        assert!(profile_from_json(dup).is_err());
        let short =
            r#"{"candidates":["a","b"],"rankings":[{"ranking":["a","b"],"probability":"1/3"}]}"#;
        assert!(profile_from_json(short).is_err());
        let foreign =
            r#"{"candidates":["a","b"],"rankings":[{"ranking":["a","z"],"probability":"1"}]}"#;
        assert!(profile_from_json(foreign).is_err());
        let partial =
            r#"{"candidates":["a","b","c"],"rankings":[{"ranking":["a","b"],"probability":"1"}]}"#;
        assert!(profile_from_json(partial).is_err());
        assert!(profile_from_json("{").is_err());
    }

    #[test]
    fn transcript_lists_queries_in_order() {
        let set = CandidateSet::letters(3).unwrap();
        let p = Profile::uniform(&set).unwrap();
        let mut s = QuerySession::open(p, 2).unwrap();
        s.query(&[Candidate(1), Candidate(2)]).unwrap();
        s.query(&[Candidate(0)]).unwrap();
        let doc = TranscriptDocument::from_session(&s);
        assert_eq!(doc.t, 2);
        assert_eq!(doc.queries.len(), 2);
        assert_eq!(doc.queries[0].subset, vec!["b", "c"]);
        assert_eq!(doc.queries[1].response[0].probability, "1/1");
    }
}
