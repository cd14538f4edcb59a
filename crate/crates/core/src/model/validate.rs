use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{is_identifier, CourtId, Jurisdiction, Tjcm};

/// A violated model-class condition. Violations are data, not faults.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Violation {
    EmptyCourtId,
    DuplicateCourt(CourtId),
    /// A hierarchy or binding pair mentions a court outside the court set.
    UnknownCourt {
        relation: &'static str,
        pair: (CourtId, CourtId),
    },
    HierarchyReflexive(CourtId),
    /// `(a,b)` and `(b,c)` are in `H` but `(a,c)` is not.
    TransitivityGap {
        via: CourtId,
        missing: (CourtId, CourtId),
    },
    HierarchySymmetric(CourtId, CourtId),
    NoStates,
    InvalidToken(String),
    /// A token is used in more than one of the name, fact and court vocabularies.
    VocabularyClash(String),
    DuplicateName(String),
    /// A decided state carries a name outside `Names_d`, or an undecided one a name inside it.
    DecidedNameMismatch {
        state: String,
        name: String,
    },
    TooManyDecided {
        decided: usize,
        names: usize,
    },
    /// (O): a decided state is not strictly before an undecided one.
    OrderViolation {
        decided: String,
        undecided: String,
    },
    /// (SD): `H ⊆ B` fails for this pair.
    HierarchyNotBinding(CourtId, CourtId),
    /// (SD): `B ⊆ H ∪ I` fails for this pair.
    BindingOutsideHierarchy(CourtId, CourtId),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            EmptyCourtId => write!(f, "empty court identifier"),
            DuplicateCourt(c) => write!(f, "duplicate court {c}"),
            UnknownCourt { relation, pair: (a, b) } => {
                write!(f, "{relation} pair ({a},{b}) mentions an unknown court")
            }
            HierarchyReflexive(c) => write!(f, "irreflexivity: hierarchy contains ({c},{c})"),
            TransitivityGap { via, missing: (a, c) } => {
                write!(f, "transitivity gap: ({a},{c}) missing (via {via})")
            }
            HierarchySymmetric(a, b) => write!(f, "asymmetry: hierarchy contains both ({a},{b}) and ({b},{a})"),
            NoStates => write!(f, "model has no states"),
            InvalidToken(t) => write!(f, "token `{t}` is not a valid identifier"),
            VocabularyClash(t) => write!(f, "token `{t}` is used in more than one vocabulary"),
            DuplicateName(n) => write!(f, "name `{n}` is shared by several states"),
            DecidedNameMismatch { state, name } => {
                write!(f, "state {state}: decided status disagrees with membership of `{name}` in decided_names")
            }
            TooManyDecided { decided, names } => {
                write!(f, "{decided} decided states but only {names} decided names")
            }
            OrderViolation { decided, undecided } => {
                write!(f, "(O): decided {decided} is not strictly before undecided {undecided}")
            }
            HierarchyNotBinding(a, b) => write!(f, "(SD): H({a},{b}) holds but B({a},{b}) does not"),
            BindingOutsideHierarchy(a, b) => write!(f, "(SD): B({a},{b}) holds but neither H({a},{b}) nor {a}={b}"),
        }
    }
}

/// Checks the jurisdiction conditions; returns every violation found.
pub fn validate_jurisdiction(j: &Jurisdiction) -> Result<(), Vec<Violation>> {
    let mut out = BTreeSet::new();
    let mut seen = BTreeSet::new();
    for c in j.courts() {
        if c.as_str().is_empty() {
            out.insert(Violation::EmptyCourtId);
        }
        if !seen.insert(c) {
            out.insert(Violation::DuplicateCourt(c.clone()));
        }
    }
    for (relation, set) in [("hierarchy", j.hierarchy()), ("binding", j.binding())] {
        for (a, b) in set {
            if !j.has_court(a) || !j.has_court(b) {
                out.insert(Violation::UnknownCourt { relation, pair: (a.clone(), b.clone()) });
            }
        }
    }
    let h = j.hierarchy();
    for (a, b) in h {
        if a == b {
            out.insert(Violation::HierarchyReflexive(a.clone()));
        } else if h.contains(&(b.clone(), a.clone())) {
            let (x, y) = if a < b { (a, b) } else { (b, a) };
            out.insert(Violation::HierarchySymmetric(x.clone(), y.clone()));
        }
        for (b2, c) in h {
            if b2 == b && !h.contains(&(a.clone(), c.clone())) {
                out.insert(Violation::TransitivityGap { via: b.clone(), missing: (a.clone(), c.clone()) });
            }
        }
    }
    finish(out)
}

/// Checks every model condition, plus (SD) and (O) when the model is strict.
pub fn validate_model(m: &Tjcm) -> Result<(), Vec<Violation>> {
    let mut out: BTreeSet<Violation> =
        validate_jurisdiction(m.jurisdiction()).err().unwrap_or_default().into_iter().collect();
    if m.is_empty() {
        out.insert(Violation::NoStates);
    }

    // vocabulary checks
    let mut kinds: BTreeMap<&str, BTreeSet<u8>> = BTreeMap::new();
    for c in m.jurisdiction().courts() {
        kinds.entry(c.as_str()).or_default().insert(0);
    }
    let mut name_owner: BTreeMap<&str, usize> = BTreeMap::new();
    for (i, s) in m.states().iter().enumerate() {
        for n in &s.names {
            kinds.entry(n).or_default().insert(1);
            if let Some(&prev) = name_owner.get(n.as_str()) {
                if prev != i {
                    out.insert(Violation::DuplicateName(n.clone()));
                }
            } else {
                name_owner.insert(n, i);
            }
        }
        for fact in &s.facts {
            kinds.entry(fact).or_default().insert(2);
        }
    }
    for n in m.decided_names() {
        kinds.entry(n).or_default().insert(1);
    }
    for (token, k) in &kinds {
        if !is_identifier(token) {
            out.insert(Violation::InvalidToken(token.to_string()));
        }
        if k.len() > 1 {
            out.insert(Violation::VocabularyClash(token.to_string()));
        }
    }

    let decided_names: BTreeSet<&str> = m.decided_names().iter().map(String::as_str).collect();
    for s in m.states() {
        for n in &s.names {
            if s.decision.is_decided() != decided_names.contains(n.as_str()) {
                out.insert(Violation::DecidedNameMismatch { state: s.canonical_name().to_string(), name: n.clone() });
            }
        }
    }
    let decided = m.decided_states().count();
    if decided > decided_names.len() {
        out.insert(Violation::TooManyDecided { decided, names: decided_names.len() });
    }

    if m.is_strict() {
        if let (Some(latest), Some(earliest)) =
            (m.decided_states().max_by_key(|&s| m.time(s)), m.undecided_states().min_by_key(|&s| m.time(s)))
        {
            // report every offending pair, not just the extreme one
            if m.time(latest) >= m.time(earliest) {
                for d in m.decided_states() {
                    for u in m.undecided_states() {
                        if m.time(d) >= m.time(u) {
                            out.insert(Violation::OrderViolation {
                                decided: m.name(d).to_string(),
                                undecided: m.name(u).to_string(),
                            });
                        }
                    }
                }
            }
        }
        let j = m.jurisdiction();
        for (a, b) in j.hierarchy() {
            if !j.binding().contains(&(a.clone(), b.clone())) {
                out.insert(Violation::HierarchyNotBinding(a.clone(), b.clone()));
            }
        }
        for (a, b) in j.binding() {
            if a != b && !j.hierarchy().contains(&(a.clone(), b.clone())) {
                out.insert(Violation::BindingOutsideHierarchy(a.clone(), b.clone()));
            }
        }
    }
    finish(out)
}

fn finish(out: BTreeSet<Violation>) -> Result<(), Vec<Violation>> {
    if out.is_empty() {
        Ok(())
    } else {
        Err(out.into_iter().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{CaseState, Val};

    fn example_jurisdiction() -> Jurisdiction {
        let h: Vec<(String, String)> = (0..=2)
            .flat_map(|i| (1..=4).filter(move |&j| i < j).map(move |j| (format!("c{i}"), format!("c{j}"))))
            .collect();
        let mut b = h.clone();
        b.push(("c1".into(), "c1".into()));
        b.push(("c2".into(), "c2".into()));
        let pairs = |v: Vec<(String, String)>| {
            v.into_iter().map(|(a, b)| (CourtId::new(a), CourtId::new(b))).collect::<Vec<_>>()
        };
        Jurisdiction::new(["c0", "c1", "c2", "c3", "c4"], pairs(h), pairs(b))
    }

    #[test]
    fn running_example_jurisdiction_is_valid() {
        assert_eq!(validate_jurisdiction(&example_jurisdiction()), Ok(()));
    }

    #[test]
    fn reflexive_hierarchy() {
        let j = Jurisdiction::from_strs(&["c0"], &[("c0", "c0")], &[]);
        assert_eq!(validate_jurisdiction(&j), Err(vec![Violation::HierarchyReflexive("c0".into())]));
    }

    #[test]
    fn transitivity_gap() {
        let j = Jurisdiction::from_strs(&["c0", "c1", "c2"], &[("c0", "c1"), ("c1", "c2")], &[]);
        assert_eq!(
            validate_jurisdiction(&j),
            Err(vec![Violation::TransitivityGap { via: "c1".into(), missing: ("c0".into(), "c2".into()) }])
        );
    }

    #[test]
    fn symmetric_pairs_reported() {
        let j = Jurisdiction::from_strs(&["a", "b"], &[("a", "b"), ("b", "a")], &[]);
        let v = validate_jurisdiction(&j).unwrap_err();
        assert!(v.contains(&Violation::HierarchySymmetric("a".into(), "b".into())));
        // transitivity then forces the reflexive pairs, which are missing
        assert!(v.iter().any(|x| matches!(x, Violation::TransitivityGap { .. })));
    }

    #[test]
    fn unknown_court_in_pair() {
        let j = Jurisdiction::from_strs(&["a"], &[], &[("a", "z")]);
        assert!(matches!(validate_jurisdiction(&j).unwrap_err()[0], Violation::UnknownCourt { .. }));
    }

    fn two_state_model(decided_time: u64, new_time: u64, strict: bool) -> Tjcm {
        Tjcm::new(
            vec![
                CaseState::new("s1", "c0", Val::One, decided_time),
                CaseState::new("s*", "c0", Val::Unknown, new_time),
            ],
            Jurisdiction::from_strs(&["c0"], &[], &[]),
            &[],
            vec!["s1".into()],
            strict,
        )
        .unwrap()
    }

    #[test]
    fn order_condition() {
        assert_eq!(validate_model(&two_state_model(1, 2, true)), Ok(()));
        assert_eq!(
            validate_model(&two_state_model(5, 3, true)),
            Err(vec![Violation::OrderViolation { decided: "s1".into(), undecided: "s*".into() }])
        );
        assert_eq!(validate_model(&two_state_model(5, 3, false)), Ok(()));
    }

    #[test]
    fn binding_outside_hierarchy() {
        let mut j = example_jurisdiction();
        j.binding.insert(("c3".into(), "c2".into()));
        let m = Tjcm::new(vec![CaseState::new("a", "c3", Val::Unknown, 0)], j, &[], vec![], true).unwrap();
        assert_eq!(validate_model(&m), Err(vec![Violation::BindingOutsideHierarchy("c3".into(), "c2".into())]));
    }

    #[test]
    fn name_conditions() {
        let j = Jurisdiction::from_strs(&["c0"], &[], &[]);
        let m = Tjcm::new(
            vec![
                CaseState::new("a", "c0", Val::One, 0),
                CaseState::new("a", "c0", Val::Unknown, 1),
                CaseState::new("b", "c0", Val::Zero, 0).with_facts(["c0"]),
            ],
            j,
            &[],
            vec!["a".into()],
            false,
        )
        .unwrap();
        let v = validate_model(&m).unwrap_err();
        assert!(v.contains(&Violation::DuplicateName("a".into())));
        assert!(v.contains(&Violation::DecidedNameMismatch { state: "b".into(), name: "b".into() }));
        assert!(v.contains(&Violation::DecidedNameMismatch { state: "a".into(), name: "a".into() }));
        assert!(v.contains(&Violation::VocabularyClash("c0".into())));
        assert!(v.contains(&Violation::TooManyDecided { decided: 2, names: 1 }));
    }
}
