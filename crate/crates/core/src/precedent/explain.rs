//! Human-readable account of how a new case is classified.

use std::fmt;

use crate::model::{StateId, Tjcm, Val};

use super::{DecisionSet, PrecedentEngine, PrecedentError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exception {
    /// Decided per incuriam by the same court as the case at hand.
    PerIncuriamSameCourt,
    Overruled {
        by: StateId,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DominanceReason {
    HigherCourt,
    LaterSameCourt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Supporting, but decided by a court that does not bind this one.
    NotBinding,
    Excepted(Exception),
    Dominated {
        by: StateId,
        reason: DominanceReason,
    },
    Best,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrecedentStatus {
    pub precedent: StateId,
    pub outcome: Val,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplanationTrace {
    pub state: StateId,
    pub entries: Vec<PrecedentStatus>,
    pub decision: DecisionSet,
}

impl PrecedentEngine<'_> {
    /// Status of every supporting precedent of `s`, in model order.
    pub fn explain(&self, s: StateId) -> Result<ExplanationTrace, PrecedentError> {
        let m = self.model();
        let binding: Vec<StateId> = self.potentially_binding(s).iter().map(|p| p.state).collect();
        let bound = self.binding_no_exception(s)?;
        let mut entries = Vec::new();
        for p in super::precedents(m, s) {
            let verdict = if !binding.contains(&p.state) {
                Verdict::NotBinding
            } else if let Some(e) = self.exception(s, p.state)? {
                Verdict::Excepted(e)
            } else {
                let dominating = bound.iter().find_map(|&b| self.dominated_by(p.state, b).map(|r| (b, r)));
                match dominating {
                    Some((by, reason)) => Verdict::Dominated { by, reason },
                    None => Verdict::Best,
                }
            };
            entries.push(PrecedentStatus { precedent: p.state, outcome: p.outcome, verdict });
        }
        Ok(ExplanationTrace { state: s, entries, decision: self.decide(s)? })
    }
}

impl ExplanationTrace {
    pub fn render(&self, m: &Tjcm) -> String {
        let mut out = format!("case {} at {}\n", m.name(self.state), m.court(self.state));
        if self.entries.is_empty() {
            out.push_str("  no supporting precedents\n");
        }
        for e in &self.entries {
            let p = e.precedent;
            let status = match e.verdict {
                Verdict::NotBinding => format!("not binding ({} does not bind {})", m.court(p), m.court(self.state)),
                Verdict::Excepted(Exception::PerIncuriamSameCourt) => {
                    "potentially binding -> excluded: per incuriam, same court".to_string()
                }
                Verdict::Excepted(Exception::Overruled { by }) => {
                    format!("potentially binding -> excluded: overruled by {}", m.name(by))
                }
                Verdict::Dominated { by, reason } => {
                    let why = match reason {
                        DominanceReason::HigherCourt => "higher court",
                        DominanceReason::LaterSameCourt => "later, same court",
                    };
                    format!("binding -> dominated by {} ({why})", m.name(by))
                }
                Verdict::Best => "binding -> best".to_string(),
            };
            out.push_str(&format!(
                "  {} [{}, t={}] supports {}: supporting -> {status}\n",
                m.name(p),
                m.court(p),
                m.time(p),
                e.outcome
            ));
        }
        out.push_str(&format!("decision: {}\n", self.decision));
        out
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::NotBinding => "not binding",
            Verdict::Excepted(Exception::PerIncuriamSameCourt) => "per incuriam",
            Verdict::Excepted(Exception::Overruled { .. }) => "overruled",
            Verdict::Dominated { .. } => "dominated",
            Verdict::Best => "best",
        };
        f.write_str(s)
    }
}
