//! Jurisdictions and case-base models.
//!
//! A [`Tjcm`] is a finite set of case states, each carrying a court, a set of
//! names, a set of fact tokens, a decision and a time rank, together with a
//! [`Jurisdiction`] and a relevance relation between states.

mod file;
mod validate;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub use file::{FileError, JurisdictionFile, ModelFile, StateFile};
pub use validate::{validate_jurisdiction, validate_model, Violation};

/// Identifier of a court inside a jurisdiction.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CourtId(String);

impl CourtId {
    pub fn new(id: impl Into<String>) -> Self {
        CourtId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for CourtId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for CourtId {
    fn from(s: &str) -> Self {
        CourtId::new(s)
    }
}

impl From<String> for CourtId {
    fn from(s: String) -> Self {
        CourtId(s)
    }
}

/// Index of a state inside its model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub usize);

impl StateId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// Classifier output: plaintiff wins, defendant wins, or no decision yet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Val {
    One,
    Zero,
    Unknown,
}

impl Val {
    /// The opposite outcome; `None` for [`Val::Unknown`].
    pub fn opposite(self) -> Option<Val> {
        match self {
            Val::One => Some(Val::Zero),
            Val::Zero => Some(Val::One),
            Val::Unknown => None,
        }
    }

    pub fn is_decided(self) -> bool {
        self != Val::Unknown
    }

    pub fn token(self) -> &'static str {
        match self {
            Val::One => "1",
            Val::Zero => "0",
            Val::Unknown => "?",
        }
    }

    pub fn from_token(token: &str) -> Option<Val> {
        match token {
            "1" => Some(Val::One),
            "0" => Some(Val::Zero),
            "?" => Some(Val::Unknown),
            _ => None,
        }
    }

    pub const ALL: [Val; 3] = [Val::One, Val::Zero, Val::Unknown];
    pub const OUTCOMES: [Val; 2] = [Val::Zero, Val::One];
}

impl fmt::Display for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// Courts with their hierarchy (`H`) and binding (`B`) relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Jurisdiction {
    courts: Vec<CourtId>,
    hierarchy: BTreeSet<(CourtId, CourtId)>,
    binding: BTreeSet<(CourtId, CourtId)>,
}

impl Jurisdiction {
    pub fn new<C, P>(courts: C, hierarchy: P, binding: P) -> Self
    where
        C: IntoIterator,
        C::Item: Into<CourtId>,
        P: IntoIterator,
        P::Item: Into<(CourtId, CourtId)>,
    {
        Jurisdiction {
            courts: courts.into_iter().map(Into::into).collect(),
            hierarchy: hierarchy.into_iter().map(Into::into).collect(),
            binding: binding.into_iter().map(Into::into).collect(),
        }
    }

    /// Builds a jurisdiction from string pairs, the common case in tests and fixtures.
    pub fn from_strs(courts: &[&str], hierarchy: &[(&str, &str)], binding: &[(&str, &str)]) -> Self {
        let pair = |&(a, b): &(&str, &str)| (CourtId::new(a), CourtId::new(b));
        Jurisdiction {
            courts: courts.iter().map(|c| CourtId::new(*c)).collect(),
            hierarchy: hierarchy.iter().map(pair).collect(),
            binding: binding.iter().map(pair).collect(),
        }
    }

    pub fn courts(&self) -> &[CourtId] {
        &self.courts
    }

    pub fn hierarchy(&self) -> &BTreeSet<(CourtId, CourtId)> {
        &self.hierarchy
    }

    pub fn binding(&self) -> &BTreeSet<(CourtId, CourtId)> {
        &self.binding
    }

    pub fn has_court(&self, c: &CourtId) -> bool {
        self.courts.contains(c)
    }

    /// `H(higher, lower)`: `higher` is hierarchically above `lower`.
    pub fn is_higher(&self, higher: &CourtId, lower: &CourtId) -> bool {
        self.hierarchy.contains(&(higher.clone(), lower.clone()))
    }

    /// `B(from, to)`: decisions of `from` bind `to`.
    pub fn binds(&self, from: &CourtId, to: &CourtId) -> bool {
        self.binding.contains(&(from.clone(), to.clone()))
    }

    /// Replaces the hierarchy with its transitive closure.
    pub fn close_hierarchy(&mut self) {
        loop {
            let mut added = Vec::new();
            for (a, b) in &self.hierarchy {
                for (b2, c) in self.hierarchy.range((b.clone(), CourtId::new(""))..) {
                    if b2 != b {
                        break;
                    }
                    let pair = (a.clone(), c.clone());
                    if !self.hierarchy.contains(&pair) {
                        added.push(pair);
                    }
                }
            }
            if added.is_empty() {
                return;
            }
            self.hierarchy.extend(added);
        }
    }
}

/// One case: a state of the model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseState {
    /// The first name is canonical; the rest are aliases.
    pub names: Vec<String>,
    pub court: CourtId,
    pub facts: BTreeSet<String>,
    pub decision: Val,
    /// Encodes the total temporal preorder; equal ranks are simultaneous.
    pub time: u64,
}

impl CaseState {
    pub fn new(name: impl Into<String>, court: impl Into<CourtId>, decision: Val, time: u64) -> Self {
        CaseState { names: vec![name.into()], court: court.into(), facts: BTreeSet::new(), decision, time }
    }

    pub fn with_facts<I, S>(mut self, facts: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.facts = facts.into_iter().map(Into::into).collect();
        self
    }

    pub fn with_alias(mut self, alias: impl Into<String>) -> Self {
        self.names.push(alias.into());
        self
    }

    pub fn canonical_name(&self) -> &str {
        &self.names[0]
    }

    pub fn has_name(&self, name: &str) -> bool {
        self.names.iter().any(|n| n == name)
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("state {0} has no name")]
    NamelessState(usize),
    #[error("unknown state name `{0}`")]
    UnknownState(String),
    #[error("state `{state}` refers to unknown court `{court}`")]
    UnknownCourt { state: String, court: String },
    #[error("invalid decision token `{0}` (expected \"0\", \"1\" or \"?\")")]
    BadDecision(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TemporalOrder {
    Before,
    Simultaneous,
    After,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CourtOrder {
    /// The first state's court is strictly below the second's.
    Lower,
    /// The first state's court is strictly above the second's.
    Higher,
    SameCourt,
    Unrelated,
}

/// A temporal jurisdictional classifier model.
#[derive(Clone, Debug)]
pub struct Tjcm {
    states: Vec<CaseState>,
    jurisdiction: Jurisdiction,
    relevance: BTreeSet<(StateId, StateId)>,
    decided_names: Vec<String>,
    strict: bool,
    by_name: BTreeMap<String, StateId>,
    court_index: Vec<usize>,
    relevant_for: Vec<Vec<StateId>>,
}

impl Tjcm {
    /// Assembles a model. Relevance pairs `(a, b)` read "`a` is relevant for `b`"
    /// and may use any name of a state.
    ///
    /// Only structural problems fail here; class conditions are left to
    /// [`validate_model`].
    pub fn new(
        states: Vec<CaseState>,
        jurisdiction: Jurisdiction,
        relevance: &[(String, String)],
        decided_names: Vec<String>,
        strict: bool,
    ) -> Result<Self, ModelError> {
        let mut by_name = BTreeMap::new();
        let mut court_index = Vec::with_capacity(states.len());
        for (i, s) in states.iter().enumerate() {
            if s.names.is_empty() {
                return Err(ModelError::NamelessState(i));
            }
            for n in &s.names {
                by_name.entry(n.clone()).or_insert(StateId(i));
            }
            let ci = jurisdiction
                .courts
                .iter()
                .position(|c| *c == s.court)
                .ok_or_else(|| ModelError::UnknownCourt { state: s.names[0].clone(), court: s.court.to_string() })?;
            court_index.push(ci);
        }
        let lookup = |n: &String| by_name.get(n).copied().ok_or_else(|| ModelError::UnknownState(n.clone()));
        let mut rel = BTreeSet::new();
        for (a, b) in relevance {
            rel.insert((lookup(a)?, lookup(b)?));
        }
        let mut relevant_for = vec![Vec::new(); states.len()];
        for &(a, b) in &rel {
            relevant_for[b.0].push(a);
        }
        Ok(Tjcm { states, jurisdiction, relevance: rel, decided_names, strict, by_name, court_index, relevant_for })
    }

    pub fn states(&self) -> &[CaseState] {
        &self.states
    }

    pub fn state_ids(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.states.len()).map(StateId)
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state(&self, s: StateId) -> &CaseState {
        &self.states[s.0]
    }

    pub fn jurisdiction(&self) -> &Jurisdiction {
        &self.jurisdiction
    }

    pub fn relevance(&self) -> &BTreeSet<(StateId, StateId)> {
        &self.relevance
    }

    pub fn decided_names(&self) -> &[String] {
        &self.decided_names
    }

    pub fn is_strict(&self) -> bool {
        self.strict
    }

    pub fn set_strict(&mut self, strict: bool) {
        self.strict = strict;
    }

    pub fn lookup(&self, name: &str) -> Result<StateId, ModelError> {
        self.by_name.get(name).copied().ok_or_else(|| ModelError::UnknownState(name.to_string()))
    }

    pub fn name(&self, s: StateId) -> &str {
        self.states[s.0].canonical_name()
    }

    pub fn decision(&self, s: StateId) -> Val {
        self.states[s.0].decision
    }

    pub fn time(&self, s: StateId) -> u64 {
        self.states[s.0].time
    }

    pub fn court(&self, s: StateId) -> &CourtId {
        &self.states[s.0].court
    }

    /// Position of the state's court in the jurisdiction's court list.
    pub fn court_index(&self, s: StateId) -> usize {
        self.court_index[s.0]
    }

    /// `R(s)`: the states relevant for `s`.
    pub fn relevant_for(&self, s: StateId) -> &[StateId] {
        &self.relevant_for[s.0]
    }

    pub fn is_relevant(&self, a: StateId, b: StateId) -> bool {
        self.relevance.contains(&(a, b))
    }

    pub fn decided_states(&self) -> impl Iterator<Item = StateId> + '_ {
        self.state_ids().filter(|&s| self.decision(s).is_decided())
    }

    pub fn undecided_states(&self) -> impl Iterator<Item = StateId> + '_ {
        self.state_ids().filter(|&s| !self.decision(s).is_decided())
    }

    /// `a <_T b`.
    pub fn earlier(&self, a: StateId, b: StateId) -> bool {
        self.time(a) < self.time(b)
    }

    pub fn temporal_order(&self, a: StateId, b: StateId) -> TemporalOrder {
        match self.time(a).cmp(&self.time(b)) {
            Ordering::Less => TemporalOrder::Before,
            Ordering::Equal => TemporalOrder::Simultaneous,
            Ordering::Greater => TemporalOrder::After,
        }
    }

    /// `a ≺ b`: the court of `b` is hierarchically above the court of `a`.
    pub fn lower(&self, a: StateId, b: StateId) -> bool {
        self.jurisdiction.is_higher(self.court(b), self.court(a))
    }

    /// `a ≅ b`.
    pub fn same_court(&self, a: StateId, b: StateId) -> bool {
        self.court_index[a.0] == self.court_index[b.0]
    }

    pub fn court_order(&self, a: StateId, b: StateId) -> CourtOrder {
        if self.same_court(a, b) {
            CourtOrder::SameCourt
        } else if self.lower(a, b) {
            CourtOrder::Lower
        } else if self.lower(b, a) {
            CourtOrder::Higher
        } else {
            CourtOrder::Unrelated
        }
    }

    /// States whose token sets contain `token` (a fact, name or court).
    pub fn states_with_token<'a>(&'a self, token: &'a str) -> impl Iterator<Item = StateId> + 'a {
        self.state_ids().filter(move |&s| {
            let st = self.state(s);
            st.court.as_str() == token || st.has_name(token) || st.facts.contains(token)
        })
    }

    /// Whether `token` belongs to the model's atom vocabulary.
    pub fn knows_token(&self, token: &str) -> bool {
        self.jurisdiction.courts.iter().any(|c| c.as_str() == token)
            || self.by_name.contains_key(token)
            || self.decided_names.iter().any(|n| n == token)
            || self.states.iter().any(|s| s.facts.contains(token))
    }

    /// All names of all states, in state order.
    pub fn all_names(&self) -> impl Iterator<Item = &str> + '_ {
        self.states.iter().flat_map(|s| s.names.iter().map(String::as_str))
    }

    /// All fact tokens, sorted.
    pub fn all_facts(&self) -> BTreeSet<&str> {
        self.states.iter().flat_map(|s| s.facts.iter().map(String::as_str)).collect()
    }
}

/// Temporal comparison of two states addressed by name.
pub fn temporal_compare(m: &Tjcm, a: &str, b: &str) -> Result<TemporalOrder, ModelError> {
    Ok(m.temporal_order(m.lookup(a)?, m.lookup(b)?))
}

/// Court comparison of two states addressed by name.
pub fn court_compare(m: &Tjcm, a: &str, b: &str) -> Result<CourtOrder, ModelError> {
    Ok(m.court_order(m.lookup(a)?, m.lookup(b)?))
}

/// Returns true when the token is usable as an identifier in the formula syntax.
pub fn is_identifier(token: &str) -> bool {
    !token.is_empty() && token.chars().all(is_ident_char)
}

pub(crate) fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '*' | '\'' | '.')
}
