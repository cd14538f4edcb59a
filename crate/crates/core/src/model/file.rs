//! JSON representation of jurisdictions and models.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{CaseState, CourtId, Jurisdiction, ModelError, Tjcm, Val};

#[derive(Debug, thiserror::Error)]
pub enum FileError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct JurisdictionFile {
    pub courts: Vec<String>,
    #[serde(default)]
    pub hierarchy: Vec<(String, String)>,
    #[serde(default)]
    pub binding: Vec<(String, String)>,
    /// When set, `hierarchy` is a reduced relation to be closed transitively.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub transitive_closure: bool,
}

impl JurisdictionFile {
    pub fn into_jurisdiction(self) -> Jurisdiction {
        let pairs = |v: Vec<(String, String)>| {
            v.into_iter().map(|(a, b)| (CourtId::new(a), CourtId::new(b))).collect::<Vec<_>>()
        };
        let mut j = Jurisdiction::new(self.courts, pairs(self.hierarchy), pairs(self.binding));
        if self.transitive_closure {
            j.close_hierarchy();
        }
        j
    }

    pub fn from_jurisdiction(j: &Jurisdiction) -> Self {
        let pairs = |s: &std::collections::BTreeSet<(CourtId, CourtId)>| {
            s.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
        };
        JurisdictionFile {
            courts: j.courts().iter().map(ToString::to_string).collect(),
            hierarchy: pairs(j.hierarchy()),
            binding: pairs(j.binding()),
            transitive_closure: false,
        }
    }

    pub fn read(path: &Path) -> Result<Self, FileError> {
        Ok(serde_json::from_str(&read_to_string(path)?)?)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct StateFile {
    pub names: Vec<String>,
    pub court: String,
    #[serde(default)]
    pub facts: Vec<String>,
    pub decision: String,
    pub time: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ModelFile {
    #[serde(flatten)]
    pub jurisdiction: JurisdictionFile,
    pub states: Vec<StateFile>,
    #[serde(default)]
    pub relevance: Vec<(String, String)>,
    #[serde(default)]
    pub decided_names: Vec<String>,
    #[serde(default = "default_true")]
    pub strict: bool,
}

impl ModelFile {
    pub fn parse(text: &str) -> Result<Self, FileError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: &Path) -> Result<Self, FileError> {
        Self::parse(&read_to_string(path)?)
    }

    pub fn into_model(self) -> Result<Tjcm, FileError> {
        let jurisdiction = self.jurisdiction.into_jurisdiction();
        let states = self
            .states
            .into_iter()
            .map(|s| {
                let decision =
                    Val::from_token(&s.decision).ok_or_else(|| ModelError::BadDecision(s.decision.clone()))?;
                Ok(CaseState {
                    names: s.names,
                    court: CourtId::new(s.court),
                    facts: s.facts.into_iter().collect(),
                    decision,
                    time: s.time,
                })
            })
            .collect::<Result<Vec<_>, ModelError>>()?;
        Ok(Tjcm::new(states, jurisdiction, &self.relevance, self.decided_names, self.strict)?)
    }

    pub fn from_model(m: &Tjcm) -> Self {
        ModelFile {
            jurisdiction: JurisdictionFile::from_jurisdiction(m.jurisdiction()),
            states: m
                .states()
                .iter()
                .map(|s| StateFile {
                    names: s.names.clone(),
                    court: s.court.to_string(),
                    facts: s.facts.iter().cloned().collect(),
                    decision: s.decision.token().to_string(),
                    time: s.time,
                })
                .collect(),
            relevance: m.relevance().iter().map(|&(a, b)| (m.name(a).to_string(), m.name(b).to_string())).collect(),
            decided_names: m.decided_names().to_vec(),
            strict: m.is_strict(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model file serializes")
    }
}

impl Tjcm {
    /// Parses a model from its JSON text.
    pub fn from_json(text: &str) -> Result<Tjcm, FileError> {
        ModelFile::parse(text)?.into_model()
    }

    pub fn load(path: &Path) -> Result<Tjcm, FileError> {
        ModelFile::read(path)?.into_model()
    }

    pub fn to_json(&self) -> String {
        ModelFile::from_model(self).to_json()
    }
}

fn read_to_string(path: &Path) -> Result<String, FileError> {
    std::fs::read_to_string(path).map_err(|source| FileError::Io { path: path.display().to_string(), source })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = r#"{
        "courts": ["hi", "mid", "lo"],
        "hierarchy": [["hi", "mid"], ["mid", "lo"]],
        "transitive_closure": true,
        "binding": [["hi", "mid"], ["hi", "lo"], ["mid", "lo"]],
        "states": [
            {"names": ["a"], "court": "hi", "facts": ["f"], "decision": "1", "time": 1},
            {"names": ["b", "b_alias"], "court": "lo", "decision": "?", "time": 2}
        ],
        "relevance": [["a", "b_alias"]],
        "decided_names": ["a"]
    }"#;

    #[test]
    fn loads_with_closure_and_aliases() {
        let m = Tjcm::from_json(SMALL).unwrap();
        assert!(m.is_strict());
        assert!(m.jurisdiction().is_higher(&"hi".into(), &"lo".into()));
        let a = m.lookup("a").unwrap();
        let b = m.lookup("b").unwrap();
        assert_eq!(m.lookup("b_alias").unwrap(), b);
        assert!(m.is_relevant(a, b));
        assert_eq!(crate::model::validate_model(&m), Ok(()));
    }

    #[test]
    fn write_then_read_is_identity() {
        let m = Tjcm::from_json(SMALL).unwrap();
        let again = Tjcm::from_json(&m.to_json()).unwrap();
        assert_eq!(ModelFile::from_model(&m), ModelFile::from_model(&again));
    }

    #[test]
    fn bad_decision_token() {
        let text = SMALL.replace("\"decision\": \"1\"", "\"decision\": \"yes\"");
        assert!(matches!(Tjcm::from_json(&text), Err(FileError::Model(ModelError::BadDecision(_)))));
    }

    #[test]
    fn unknown_relevance_name() {
        let text = SMALL.replace("[\"a\", \"b_alias\"]", "[\"a\", \"zzz\"]");
        assert!(matches!(Tjcm::from_json(&text), Err(FileError::Model(ModelError::UnknownState(_)))));
    }
}
