//! Building models from factor-annotated cases.
//!
//! A decided case `p` is relevant for another case `c` when `c` is at least
//! as strong as `p` for the side `p` found for: `c` has every factor that
//! favoured that side in `p`, and no factor favouring the other side that
//! `p` lacked.

use std::collections::{BTreeSet, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::model::{
    validate_jurisdiction, validate_model, CaseState, CourtId, Jurisdiction, ModelError, Tjcm, Val, Violation,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorCase {
    pub name: String,
    pub court: String,
    pub time: u64,
    #[serde(default)]
    pub pro_plaintiff: BTreeSet<String>,
    #[serde(default)]
    pub pro_defendant: BTreeSet<String>,
    #[serde(with = "outcome_token")]
    pub outcome: Val,
}

mod outcome_token {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::model::Val;

    pub fn serialize<S: Serializer>(v: &Val, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(v.token())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Val, D::Error> {
        let t = String::deserialize(d)?;
        Val::from_token(&t).ok_or_else(|| serde::de::Error::custom(format!("invalid outcome `{t}`")))
    }
}

impl FactorCase {
    pub fn new<P, D>(name: &str, court: &str, time: u64, pro_plaintiff: P, pro_defendant: D, outcome: Val) -> Self
    where
        P: IntoIterator,
        P::Item: Into<String>,
        D: IntoIterator,
        D::Item: Into<String>,
    {
        FactorCase {
            name: name.to_string(),
            court: court.to_string(),
            time,
            pro_plaintiff: pro_plaintiff.into_iter().map(Into::into).collect(),
            pro_defendant: pro_defendant.into_iter().map(Into::into).collect(),
            outcome,
        }
    }

    /// Factors favouring outcome `o`: plaintiff factors for 1, defendant factors for 0.
    pub fn pro(&self, o: Val) -> &BTreeSet<String> {
        match o {
            Val::One => &self.pro_plaintiff,
            _ => &self.pro_defendant,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error("precedent `{0}` has no outcome")]
    UndecidedPrecedent(String),
    #[error("new case `{0}` already has an outcome")]
    DecidedNewCase(String),
    #[error("duplicate case name `{0}`")]
    DuplicateName(String),
    #[error("case `{case}` lists factor `{factor}` for both sides")]
    FactorOverlap { case: String, factor: String },
    #[error("decided case `{decided}` is not strictly before new case `{new}`")]
    OrderViolation { decided: String, new: String },
    #[error("invalid jurisdiction: {}", join(.0))]
    Jurisdiction(Vec<Violation>),
    #[error("ingested model is invalid: {}", join(.0))]
    InvalidModel(Vec<Violation>),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed cases JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed cases CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("CSV row {row}: {msg}")]
    CsvField { row: usize, msg: String },
}

fn join(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// Whether decided `p` is a-fortiori relevant for `c`.
pub fn afortiori_relevant(p: &FactorCase, c: &FactorCase) -> Result<bool, IngestError> {
    let o = p.outcome;
    let Some(other) = o.opposite() else {
        return Err(IngestError::UndecidedPrecedent(p.name.clone()));
    };
    Ok(p.pro(o).is_subset(c.pro(o)) && c.pro(other).is_subset(p.pro(other)))
}

/// Builds a strict-class model with relevance derived from the factors.
pub fn build_model(cases: &[FactorCase], jur: Jurisdiction, new_cases: &[FactorCase]) -> Result<Tjcm, IngestError> {
    validate_jurisdiction(&jur).map_err(IngestError::Jurisdiction)?;
    let mut names = HashSet::new();
    for c in cases.iter().chain(new_cases) {
        if !names.insert(c.name.as_str()) {
            return Err(IngestError::DuplicateName(c.name.clone()));
        }
        if let Some(f) = c.pro_plaintiff.intersection(&c.pro_defendant).next() {
            return Err(IngestError::FactorOverlap { case: c.name.clone(), factor: f.clone() });
        }
    }
    for c in cases {
        if !c.outcome.is_decided() {
            return Err(IngestError::UndecidedPrecedent(c.name.clone()));
        }
    }
    for n in new_cases {
        if n.outcome.is_decided() {
            return Err(IngestError::DecidedNewCase(n.name.clone()));
        }
        if let Some(d) = cases.iter().find(|d| d.time >= n.time) {
            return Err(IngestError::OrderViolation { decided: d.name.clone(), new: n.name.clone() });
        }
    }
    let mut relevance = Vec::new();
    for p in cases {
        for c in cases.iter().chain(new_cases) {
            if p.name != c.name && afortiori_relevant(p, c)? {
                relevance.push((p.name.clone(), c.name.clone()));
            }
        }
    }
    let states = cases
        .iter()
        .chain(new_cases)
        .map(|c| CaseState {
            names: vec![c.name.clone()],
            court: CourtId::new(c.court.clone()),
            facts: c.pro_plaintiff.union(&c.pro_defendant).cloned().collect(),
            decision: c.outcome,
            time: c.time,
        })
        .collect();
    let decided = cases.iter().map(|c| c.name.clone()).collect();
    let m = Tjcm::new(states, jur, &relevance, decided, true)?;
    validate_model(&m).map_err(IngestError::InvalidModel)?;
    Ok(m)
}

/// Splits a mixed batch into decided cases and new cases, then builds the model.
pub fn build_model_from_batch(batch: &[FactorCase], jur: Jurisdiction) -> Result<Tjcm, IngestError> {
    let (decided, new): (Vec<_>, Vec<_>) = batch.iter().cloned().partition(|c| c.outcome.is_decided());
    build_model(&decided, jur, &new)
}

pub fn parse_cases_json(text: &str) -> Result<Vec<FactorCase>, IngestError> {
    Ok(serde_json::from_str(text)?)
}

#[derive(Deserialize)]
struct CsvRow {
    name: String,
    court: String,
    time: u64,
    #[serde(default)]
    pro_plaintiff: String,
    #[serde(default)]
    pro_defendant: String,
    outcome: String,
}

fn factor_list(field: &str) -> BTreeSet<String> {
    field.split(';').map(str::trim).filter(|f| !f.is_empty()).map(String::from).collect()
}

/// Parses cases from CSV with a header row; factor columns hold `;`-separated lists.
pub fn parse_cases_csv(text: &str) -> Result<Vec<FactorCase>, IngestError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (i, row) in rdr.deserialize::<CsvRow>().enumerate() {
        let row = row?;
        let outcome = Val::from_token(&row.outcome)
            .ok_or_else(|| IngestError::CsvField { row: i + 1, msg: format!("invalid outcome `{}`", row.outcome) })?;
        out.push(FactorCase {
            name: row.name,
            court: row.court,
            time: row.time,
            pro_plaintiff: factor_list(&row.pro_plaintiff),
            pro_defendant: factor_list(&row.pro_defendant),
            outcome,
        });
    }
    Ok(out)
}

/// Reads a cases file, choosing CSV for a `.csv` extension and JSON otherwise.
pub fn read_cases(path: &Path) -> Result<Vec<FactorCase>, IngestError> {
    let text =
        std::fs::read_to_string(path).map_err(|source| IngestError::Io { path: path.display().to_string(), source })?;
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        parse_cases_csv(&text)
    } else {
        parse_cases_json(&text)
    }
}
