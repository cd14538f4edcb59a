//! Unmemoized per-incuriam test, written against the raw model only.
//!
//! Deliberately shares nothing with [`crate::precedent`]: every relation is
//! recomputed here by scanning all states, and the recursion is plain.

use crate::model::{StateId, Tjcm, Val};

/// `x` supports `y` with outcome `o`: decided, relevant and strictly earlier.
fn supports(m: &Tjcm, x: StateId, y: StateId) -> Option<Val> {
    let v = m.decision(x);
    (v != Val::Unknown && m.is_relevant(x, y) && m.time(x) < m.time(y)).then_some(v)
}

fn court_above(m: &Tjcm, x: StateId, y: StateId) -> bool {
    m.jurisdiction().is_higher(m.court(x), m.court(y))
}

/// `x` is a potentially binding precedent for `y`.
fn binds(m: &Tjcm, x: StateId, y: StateId) -> bool {
    supports(m, x, y).is_some() && m.jurisdiction().binds(m.court(x), m.court(y))
}

/// `y` potentially overrules `x`.
fn overrules(m: &Tjcm, x: StateId, y: StateId) -> bool {
    let (vx, vy) = (m.decision(x), m.decision(y));
    if supports(m, x, y).is_none() || vy == Val::Unknown || vy == vx {
        return false;
    }
    let (cx, cy) = (m.court(x), m.court(y));
    court_above(m, y, x) || (cx == cy && !m.jurisdiction().binds(cx, cx))
}

/// Every recursive call is on a state strictly earlier than `s`, so this
/// terminates on any model, cyclic dependency graphs included.
fn inc(m: &Tjcm, s: StateId) -> bool {
    let all: Vec<StateId> = m.state_ids().collect();
    let f = m.decision(s);
    let went_against = |x: StateId| binds(m, x, s) && m.decision(x) != f;
    let followed = |x: StateId| binds(m, x, s) && m.decision(x) == f;
    // s ≺ x
    let below = |x: StateId| court_above(m, x, s);
    for &w in all.iter().filter(|&&w| went_against(w)) {
        let w_inc = inc(m, w);
        if w_inc && !below(w) {
            continue;
        }
        let mut overrulers_void = true;
        for &t in &all {
            if overrules(m, w, t) && m.time(t) < m.time(s) && !inc(m, t) {
                overrulers_void = false;
            }
        }
        if !overrulers_void {
            continue;
        }
        let mut every_follow_excused = true;
        for &a in all.iter().filter(|&&a| followed(a)) {
            let a_void = inc(m, a) && !below(a);
            let mut a_overruled = false;
            for &t in &all {
                if overrules(m, a, t) && m.time(t) < m.time(s) && !inc(m, t) {
                    a_overruled = true;
                }
            }
            let a_outranked = (m.time(a) < m.time(w) && m.court(a) == m.court(w)) || court_above(m, w, a);
            if !(a_void || a_overruled || a_outranked) {
                every_follow_excused = false;
            }
        }
        if every_follow_excused {
            return true;
        }
    }
    false
}

/// Per-incuriam verdict for decided `s`; `None` for an undecided state.
pub fn brute_incuriam(m: &Tjcm, s: StateId) -> Option<bool> {
    (m.decision(s) != Val::Unknown).then(|| inc(m, s))
}
