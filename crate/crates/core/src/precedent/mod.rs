//! Precedent semantics computed directly on the model.
//!
//! The free functions implement the notions that only look at the model
//! (supporting precedents, potential bindingness, overruling power). Notions
//! that need the per-incuriam recursion live on [`PrecedentEngine`], which
//! memoizes per-incuriam verdicts across queries.

mod explain;
mod sgraph;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use crate::model::{CourtId, Jurisdiction, StateId, Tjcm, Val};

pub use explain::{DominanceReason, Exception, ExplanationTrace, PrecedentStatus, Verdict};
pub use sgraph::{EdgeKind, SGraph};

/// A supporting precedent together with the outcome it supports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Precedent {
    pub state: StateId,
    pub outcome: Val,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PrecedentError {
    #[error("state `{0}` is undecided")]
    UndecidedRoot(String),
    #[error("binding/overruling dependencies form a cycle: {}", .0.join(" -> "))]
    CycleDetected(Vec<String>),
}

/// `Π(p, s, o)` with `s` fixed: decided, relevant for `s` and strictly earlier.
pub fn precedents(m: &Tjcm, s: StateId) -> Vec<Precedent> {
    let mut out: Vec<Precedent> = m
        .relevant_for(s)
        .iter()
        .filter(|&&p| m.decision(p).is_decided() && m.earlier(p, s))
        .map(|&p| Precedent { state: p, outcome: m.decision(p) })
        .collect();
    out.sort();
    out
}

/// `β_s`: the precedents of `s` whose court binds the court of `s`.
pub fn potentially_binding(m: &Tjcm, s: StateId) -> Vec<Precedent> {
    let j = m.jurisdiction();
    precedents(m, s).into_iter().filter(|p| j.binds(m.court(p.state), m.court(s))).collect()
}

/// `O(c', c)`: `c'` is above `c`, or is `c` itself and not bound by itself.
pub fn overruling_power(j: &Jurisdiction, overruler: &CourtId, c: &CourtId) -> bool {
    j.is_higher(overruler, c) || (overruler == c && !j.binds(c, c))
}

/// `ω_s`: later decided states, going the other way from `s`, for which `s`
/// is a precedent and whose court may overrule the court of `s`.
pub fn potential_overrulers(m: &Tjcm, s: StateId) -> Vec<StateId> {
    let Some(opposite) = m.decision(s).opposite() else {
        return Vec::new();
    };
    let j = m.jurisdiction();
    m.state_ids()
        .filter(|&t| {
            m.decision(t) == opposite
                && m.earlier(s, t)
                && m.is_relevant(s, t)
                && overruling_power(j, m.court(t), m.court(s))
        })
        .collect()
}

/// `Overrule_T(s, before)`: potential overrulers of `s` strictly earlier than `before`.
pub fn overrule_before(m: &Tjcm, s: StateId, before: StateId) -> Vec<StateId> {
    potential_overrulers(m, s).into_iter().filter(|&t| m.earlier(t, before)).collect()
}

fn split_binding(m: &Tjcm, s: StateId, same: bool) -> Vec<StateId> {
    let v = m.decision(s);
    if !v.is_decided() {
        return Vec::new();
    }
    potentially_binding(m, s).into_iter().filter(|p| (p.outcome == v) == same).map(|p| p.state).collect()
}

/// Potentially binding precedents of `s` that `s` was decided against.
pub fn against(m: &Tjcm, s: StateId) -> Vec<StateId> {
    split_binding(m, s, false)
}

/// Potentially binding precedents of `s` that `s` was decided according to.
pub fn according(m: &Tjcm, s: StateId) -> Vec<StateId> {
    split_binding(m, s, true)
}

/// Output of the decision function: a set of outcomes, possibly empty.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DecisionSet {
    pub outcomes: BTreeSet<Val>,
}

impl DecisionSet {
    pub fn single(v: Val) -> Self {
        DecisionSet { outcomes: [v].into() }
    }

    pub fn is_undetermined(&self) -> bool {
        self.outcomes.is_empty()
    }

    /// The unique outcome, if there is exactly one.
    pub fn forced(&self) -> Option<Val> {
        match self.outcomes.len() {
            1 => self.outcomes.first().copied(),
            _ => None,
        }
    }
}

impl fmt::Display for DecisionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.outcomes.is_empty() {
            return f.write_str("∅ (undetermined)");
        }
        // 0 before 1 before ?
        let order = [Val::Zero, Val::One, Val::Unknown];
        let items: Vec<&str> = order.iter().filter(|v| self.outcomes.contains(v)).map(|v| v.token()).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

/// Queries needing the per-incuriam recursion, with shared memo tables.
pub struct PrecedentEngine<'m> {
    m: &'m Tjcm,
    beta: Vec<Vec<Precedent>>,
    omega: Vec<Vec<StateId>>,
    incuriam: Vec<OnceLock<bool>>,
}

impl<'m> PrecedentEngine<'m> {
    pub fn new(m: &'m Tjcm) -> Self {
        PrecedentEngine {
            m,
            beta: m.state_ids().map(|s| potentially_binding(m, s)).collect(),
            omega: m.state_ids().map(|s| potential_overrulers(m, s)).collect(),
            incuriam: (0..m.len()).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn model(&self) -> &'m Tjcm {
        self.m
    }

    pub fn potentially_binding(&self, s: StateId) -> &[Precedent] {
        &self.beta[s.0]
    }

    pub fn potential_overrulers(&self, s: StateId) -> &[StateId] {
        &self.omega[s.0]
    }

    fn overrule_before(&self, s: StateId, before: StateId) -> impl Iterator<Item = StateId> + '_ {
        self.omega[s.0].iter().copied().filter(move |&t| self.m.earlier(t, before))
    }

    /// Edge targets of `s` in every s-graph containing it.
    pub(crate) fn successors(&self, s: StateId) -> impl Iterator<Item = (StateId, EdgeKind)> + '_ {
        let b = self.beta[s.0].iter().map(|p| (p.state, EdgeKind::Binding));
        let o = self.omega[s.0].iter().map(|&t| (t, EdgeKind::Overruling));
        b.chain(o)
    }

    pub fn s_graph(&self, root: StateId) -> Result<SGraph, PrecedentError> {
        SGraph::build(self, root)
    }

    /// Whether decided `s` was decided per incuriam.
    pub fn incuriam(&self, s: StateId) -> Result<bool, PrecedentError> {
        if let Some(&v) = self.incuriam[s.0].get() {
            return Ok(v);
        }
        let g = self.s_graph(s)?;
        // heights strictly decrease along edges, so sinks-first order meets dependencies first
        let mut order: Vec<StateId> = g.nodes().collect();
        order.sort_by_key(|&n| g.height(n));
        for n in order {
            if self.incuriam[n.0].get().is_none() {
                let v = self.incuriam_step(n);
                let _ = self.incuriam[n.0].set(v);
            }
        }
        Ok(self.known_incuriam(s))
    }

    fn known_incuriam(&self, s: StateId) -> bool {
        *self.incuriam[s.0].get().expect("per-incuriam dependency evaluated out of order")
    }

    /// One level of the recursion, assuming every successor is settled.
    fn incuriam_step(&self, s: StateId) -> bool {
        let m = self.m;
        let inc = |x: StateId| self.known_incuriam(x);
        let according_ones = according(m, s);
        against(m, s).into_iter().any(|w| {
            let authority = !inc(w) || m.lower(s, w);
            let overrulers_void = self.overrule_before(w, s).all(inc);
            authority
                && overrulers_void
                && according_ones.iter().all(|&a| {
                    let void_and_not_above = inc(a) && !m.lower(s, a);
                    let validly_overruled = self.overrule_before(a, s).any(|t| !inc(t));
                    let outranked = (m.earlier(a, w) && m.same_court(w, a)) || m.lower(a, w);
                    void_and_not_above || validly_overruled || outranked
                })
        })
    }

    /// `s` has a potential overruler that was not itself decided per incuriam.
    pub fn overruled(&self, s: StateId) -> Result<bool, PrecedentError> {
        for &t in &self.omega[s.0] {
            if !self.incuriam(t)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// The overruler that takes away the binding force of `s`, if any.
    pub fn overruled_by(&self, s: StateId) -> Result<Option<StateId>, PrecedentError> {
        for &t in &self.omega[s.0] {
            if !self.incuriam(t)? {
                return Ok(Some(t));
            }
        }
        Ok(None)
    }

    /// The exception, if any, that removes precedent `p` from the binding precedents of `s`.
    pub fn exception(&self, s: StateId, p: StateId) -> Result<Option<Exception>, PrecedentError> {
        if self.incuriam(p)? && self.m.same_court(s, p) {
            return Ok(Some(Exception::PerIncuriamSameCourt));
        }
        Ok(self.overruled_by(p)?.map(|by| Exception::Overruled { by }))
    }

    /// `β̄_s`: potentially binding precedents that no exception applies to.
    pub fn binding_no_exception(&self, s: StateId) -> Result<Vec<StateId>, PrecedentError> {
        let mut out = Vec::new();
        for p in &self.beta[s.0] {
            if self.exception(s, p.state)?.is_none() {
                out.push(p.state);
            }
        }
        Ok(out)
    }

    /// Why `a` is not best against `b`, if `b` dominates it.
    pub(crate) fn dominated_by(&self, a: StateId, b: StateId) -> Option<DominanceReason> {
        if self.m.lower(a, b) {
            Some(DominanceReason::HigherCourt)
        } else if self.m.same_court(a, b) && self.m.earlier(a, b) {
            Some(DominanceReason::LaterSameCourt)
        } else {
            None
        }
    }

    /// Binding precedents not outranked by a higher court nor by a later
    /// decision of the same court.
    pub fn best_th(&self, s: StateId) -> Result<Vec<StateId>, PrecedentError> {
        let bound = self.binding_no_exception(s)?;
        Ok(bound.iter().copied().filter(|&a| bound.iter().all(|&b| self.dominated_by(a, b).is_none())).collect())
    }

    pub fn decide(&self, s: StateId) -> Result<DecisionSet, PrecedentError> {
        let v = self.m.decision(s);
        if v.is_decided() {
            return Ok(DecisionSet::single(v));
        }
        Ok(DecisionSet { outcomes: self.best_th(s)?.into_iter().map(|p| self.m.decision(p)).collect() })
    }

    /// The decision for `s` is forced to be `o`.
    pub fn forced(&self, s: StateId, o: Val) -> Result<bool, PrecedentError> {
        Ok(self.decide(s)?.forced() == Some(o))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::CaseState;

    /// Two courts, `top` above `low`, both bindings in place.
    fn ladder(states: Vec<CaseState>, rel: &[(&str, &str)], self_bound: &[&str]) -> Tjcm {
        let mut b = vec![("top", "low")];
        b.extend(self_bound.iter().map(|c| (*c, *c)));
        let j = Jurisdiction::from_strs(&["top", "low"], &[("top", "low")], &b);
        let names = states.iter().filter(|s| s.decision.is_decided()).map(|s| s.names[0].clone()).collect();
        let rel: Vec<(String, String)> = rel.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
        Tjcm::new(states, j, &rel, names, true).unwrap()
    }

    #[test]
    fn power_to_overrule() {
        let j = Jurisdiction::from_strs(&["a", "b", "c"], &[("a", "b")], &[("a", "b"), ("b", "b")]);
        assert!(overruling_power(&j, &"a".into(), &"b".into()));
        assert!(!overruling_power(&j, &"b".into(), &"b".into()));
        assert!(overruling_power(&j, &"c".into(), &"c".into()));
        assert!(!overruling_power(&j, &"b".into(), &"a".into()));
    }

    #[test]
    fn lower_court_going_against_is_incuriam() {
        let m = ladder(
            vec![
                CaseState::new("p", "top", Val::One, 1),
                CaseState::new("q", "low", Val::Zero, 2),
                CaseState::new("new", "low", Val::Unknown, 3),
            ],
            &[("p", "q"), ("p", "new"), ("q", "new")],
            &["low"],
        );
        let e = PrecedentEngine::new(&m);
        let (p, q, new) = (m.lookup("p").unwrap(), m.lookup("q").unwrap(), m.lookup("new").unwrap());
        assert!(e.incuriam(q).unwrap());
        assert!(!e.incuriam(p).unwrap());
        assert_eq!(e.binding_no_exception(new).unwrap(), vec![p]);
        assert_eq!(e.decide(new).unwrap().to_string(), "{1}");
        assert!(matches!(e.incuriam(new), Err(PrecedentError::UndecidedRoot(_))));
    }

    #[test]
    fn higher_court_may_overrule() {
        let m = ladder(
            vec![
                CaseState::new("p", "low", Val::One, 1),
                CaseState::new("q", "top", Val::Zero, 2),
                CaseState::new("new", "low", Val::Unknown, 3),
            ],
            &[("p", "q"), ("p", "new"), ("q", "new")],
            &["low"],
        );
        let e = PrecedentEngine::new(&m);
        let (p, q, new) = (m.lookup("p").unwrap(), m.lookup("q").unwrap(), m.lookup("new").unwrap());
        // top is not bound by low, so q does not go against anything
        assert!(!e.incuriam(q).unwrap());
        assert_eq!(e.potential_overrulers(p), &[q]);
        assert!(e.overruled(p).unwrap());
        assert_eq!(e.best_th(new).unwrap(), vec![q]);
        assert!(e.forced(new, Val::Zero).unwrap());
    }

    #[test]
    fn decision_set_display() {
        assert_eq!(DecisionSet::default().to_string(), "∅ (undetermined)");
        let both = DecisionSet { outcomes: [Val::One, Val::Zero].into() };
        assert_eq!(both.to_string(), "{0,1}");
        assert_eq!(both.forced(), None);
        assert_eq!(DecisionSet::single(Val::One).forced(), Some(Val::One));
    }
}
