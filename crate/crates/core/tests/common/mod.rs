#![allow(dead_code)]

use std::path::PathBuf;

use precedent_engine::checker::{Denotations, EvalSession};
use precedent_engine::formula::{Arena, Builder, ExpandConfig, Expander, NamedContext, NodeId};
use precedent_engine::model::{StateId, Tjcm, Val};
use precedent_engine::precedent::{
    according, against, overruling_power, potential_overrulers, potentially_binding, precedents, PrecedentEngine,
};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn fixture(name: &str) -> Tjcm {
    Tjcm::load(&fixture_path(name)).expect("fixture loads")
}

pub fn running_example() -> Tjcm {
    fixture("running_example.json")
}

pub fn id(m: &Tjcm, name: &str) -> StateId {
    m.lookup(name).unwrap()
}

pub fn names_of(m: &Tjcm, ids: impl IntoIterator<Item = StateId>) -> Vec<String> {
    let mut v: Vec<String> = ids.into_iter().map(|s| m.name(s).to_string()).collect();
    v.sort();
    v
}

/// Aliased random models can carry more decided names than the default cap.
pub fn uncapped(ctx: &NamedContext) -> ExpandConfig {
    ExpandConfig { incuriam_cap: ctx.decided_names.len(), ..ExpandConfig::default() }
}

/// Which groups of checks to run; the incuriam family is by far the costliest.
#[derive(Clone, Copy)]
pub struct Scope {
    pub basic: bool,
    pub incuriam: bool,
    pub classification: bool,
}

pub const ALL: Scope = Scope { basic: true, incuriam: true, classification: true };

/// Compares formula evaluation with the direct semantic computation for
/// every derived operator, state and name instantiation. Returns one line per
/// disagreement, tagged with the operator.
pub fn formula_vs_semantics(m: &Tjcm, scope: Scope) -> Vec<String> {
    let mut arena = Arena::new();
    let mut session = EvalSession::new(m);
    compare(m, scope, &mut arena, |a, f, s| session.holds(a, f, s))
}

/// Same comparison, with formulas evaluated while they are expanded.
pub fn denotations_vs_semantics(m: &Tjcm, scope: Scope) -> Vec<String> {
    let mut den = Denotations::new(m);
    compare(m, scope, &mut den, |d, f, s| d.holds(f, s))
}

fn compare<B: Builder>(
    m: &Tjcm,
    scope: Scope,
    target: &mut B,
    mut holds: impl FnMut(&B, B::F, StateId) -> bool,
) -> Vec<String> {
    let ctx = NamedContext::from_model(m);
    let engine = PrecedentEngine::new(m);
    let mut bad = Vec::new();
    let states: Vec<StateId> = m.state_ids().collect();
    let names: Vec<String> = m.all_names().map(String::from).collect();
    let named = |n: &str| m.lookup(n).ok();
    let has = |s: StateId, n: &str| m.state(s).has_name(n);

    let mut ex = Expander::with_config(target, &ctx, uncapped(&ctx));
    // test subformulas: both outcomes and every fact
    let mut phis: Vec<(String, B::F)> = Vec::new();
    for o in Val::OUTCOMES {
        phis.push((format!("t({o})"), ex.builder().dec(o)));
    }
    for f in m.all_facts() {
        phis.push((f.to_string(), ex.builder().atom(f)));
    }
    let top = ex.builder().top();
    phis.push(("T".into(), top));
    let holds_sem = |phi: &str, s: StateId| -> bool {
        match phi {
            "T" => true,
            "t(0)" => m.decision(s) == Val::Zero,
            "t(1)" => m.decision(s) == Val::One,
            f => m.state(s).facts.contains(f),
        }
    };

    let mut checks: Vec<(String, B::F, Vec<bool>)> = Vec::new();
    let mut push = |tag: String, f: B::F, expected: Vec<bool>| checks.push((tag, f, expected));

    if scope.basic {
        for (pname, phi) in &phis {
            push(
                format!("Lower({pname})"),
                ex.lower(*phi),
                states.iter().map(|&s| states.iter().any(|&t| m.lower(t, s) && holds_sem(pname, t))).collect(),
            );
            push(
                format!("Higher({pname})"),
                ex.higher(*phi),
                states.iter().map(|&s| states.iter().any(|&t| m.lower(s, t) && holds_sem(pname, t))).collect(),
            );
            push(
                format!("SameCourt({pname})"),
                ex.same_court(*phi),
                states.iter().map(|&s| states.iter().any(|&t| m.same_court(s, t) && holds_sem(pname, t))).collect(),
            );
            push(
                format!("Fhat({pname})"),
                ex.fhat_any(*phi),
                states
                    .iter()
                    .map(|&s| {
                        m.decision(s).is_decided() && states.iter().any(|&t| m.earlier(s, t) && holds_sem(pname, t))
                    })
                    .collect(),
            );
            for n in &names {
                push(
                    format!("Fhat({n},{pname})"),
                    ex.fhat(n, *phi),
                    states
                        .iter()
                        .map(|&s| has(s, n) && states.iter().any(|&t| m.earlier(s, t) && holds_sem(pname, t)))
                        .collect(),
                );
                for k in &names {
                    let sk = named(k).unwrap();
                    push(
                        format!("Phat({n},{k},{pname})"),
                        ex.phat(n, k, *phi),
                        states.iter().map(|&s| has(s, n) && m.earlier(sk, s) && holds_sem(pname, sk)).collect(),
                    );
                    push(
                        format!("Supporting({n},{k},{pname})"),
                        ex.supporting(n, k, *phi),
                        states
                            .iter()
                            .map(|&s| has(s, n) && m.earlier(sk, s) && m.is_relevant(sk, s) && holds_sem(pname, sk))
                            .collect(),
                    );
                    let pb = |s: StateId| -> bool {
                        has(s, n) && potentially_binding(m, s).iter().any(|p| p.state == sk) && holds_sem(pname, sk)
                    };
                    // the precedent name ranges over decided names
                    if m.decision(sk).is_decided() {
                        push(
                            format!("PBinding({n},{k},{pname})"),
                            ex.pbinding(n, k, *phi),
                            states.iter().map(|&s| pb(s)).collect(),
                        );
                    }
                    push(
                        format!("POverruling({n},{k},{pname})"),
                        ex.poverruling(n, k, *phi),
                        states
                            .iter()
                            .map(|&s| has(s, n) && potential_overrulers(m, s).contains(&sk) && holds_sem(pname, sk))
                            .collect(),
                    );
                    push(
                        format!("Against({n},{k},{pname})"),
                        ex.against(n, k, *phi),
                        states
                            .iter()
                            .map(|&s| has(s, n) && against(m, s).contains(&sk) && holds_sem(pname, sk))
                            .collect(),
                    );
                    push(
                        format!("According({n},{k},{pname})"),
                        ex.according(n, k, *phi),
                        states
                            .iter()
                            .map(|&s| has(s, n) && according(m, s).contains(&sk) && holds_sem(pname, sk))
                            .collect(),
                    );
                }
            }
        }
        // Supporting with a decision formula gives exactly the supporting precedents
        for n in &names {
            for k in &names {
                let sk = named(k).unwrap();
                for o in Val::OUTCOMES {
                    let t = ex.builder().dec(o);
                    push(
                        format!("Supporting({n},{k},t({o})) as precedent"),
                        ex.supporting(n, k, t),
                        states
                            .iter()
                            .map(|&s| has(s, n) && precedents(m, s).iter().any(|p| p.state == sk && p.outcome == o))
                            .collect(),
                    );
                }
            }
        }
        for c in m.jurisdiction().courts() {
            push(
                format!("PwOver({c})"),
                ex.pw_over(c.as_str()),
                states.iter().map(|&s| overruling_power(m.jurisdiction(), m.court(s), c)).collect(),
            );
        }
    }

    if scope.incuriam || scope.classification {
        let inc = match ex.incuriam() {
            Ok(f) => f,
            Err(e) => return vec![format!("expansion failed: {e}")],
        };
        let sem_inc: Vec<bool> = states
            .iter()
            .map(|&s| m.decision(s).is_decided() && engine.incuriam(s).expect("strict models are acyclic"))
            .collect();
        if scope.incuriam {
            push("Incuriam".into(), inc, sem_inc.clone());
            let ov = ex.overruled().unwrap();
            push("Overruled".into(), ov, states.iter().map(|&s| engine.overruled(s).unwrap()).collect());
        }
        if scope.classification {
            for n in &names {
                for (pname, phi) in &phis {
                    let bf = ex.binding(n, *phi).unwrap();
                    push(
                        format!("Binding({n},{pname})"),
                        bf,
                        states
                            .iter()
                            .map(|&s| {
                                has(s, n)
                                    && engine.binding_no_exception(s).unwrap().iter().any(|&p| holds_sem(pname, p))
                            })
                            .collect(),
                    );
                    let bb = ex.best_binding(n, *phi).unwrap();
                    push(
                        format!("BestBinding({n},{pname})"),
                        bb,
                        states
                            .iter()
                            .map(|&s| has(s, n) && engine.best_th(s).unwrap().iter().any(|&p| holds_sem(pname, p)))
                            .collect(),
                    );
                }
                for o in Val::OUTCOMES {
                    let cl = ex.cl(n, o).unwrap();
                    push(
                        format!("Cl({n},{o})"),
                        cl,
                        states
                            .iter()
                            .map(|&s| {
                                let outs: Vec<Val> =
                                    engine.best_th(s).unwrap().iter().map(|&p| m.decision(p)).collect();
                                has(s, n) && !outs.is_empty() && outs.iter().all(|&v| v == o)
                            })
                            .collect(),
                    );
                    if !m.decision(named(n).unwrap()).is_decided() {
                        let s = named(n).unwrap();
                        let forced = engine.forced(s, o).unwrap();
                        let exp: Vec<bool> = states.iter().map(|&t| t == s && forced).collect();
                        push(format!("Cl({n},{o}) as forced"), cl, exp);
                    }
                }
            }
        }
    }

    drop(ex);
    for (tag, f, expected) in checks {
        for (i, &s) in states.iter().enumerate() {
            let got = holds(target, f, s);
            if got != expected[i] {
                bad.push(format!("{tag} at {}: formula {got} vs semantic {}", m.name(s), expected[i]));
            }
        }
    }
    bad
}

/// For every decided state: once some level at or above its height holds,
/// every level from the height up to the number of decided names holds.
pub fn star_violations(m: &Tjcm) -> Vec<String> {
    let ctx = NamedContext::from_model(m);
    let top = ctx.decided_names.len();
    let mut arena = Arena::new();
    let mut ex = Expander::with_config(&mut arena, &ctx, uncapped(&ctx));
    let levels: Vec<NodeId> = (1..=top.max(1)).map(|j| ex.iota(j).unwrap()).collect();
    drop(ex);
    let engine = PrecedentEngine::new(m);
    let mut session = EvalSession::new(m);
    let mut bad = Vec::new();
    for s in m.decided_states() {
        let h = engine.s_graph(s).unwrap().height(s).max(1);
        if h > top {
            continue;
        }
        let vals: Vec<bool> = levels.iter().map(|&l| session.holds(&arena, l, s)).collect();
        if vals[h - 1..].iter().any(|&v| v) && !vals[h - 1..top].iter().all(|&v| v) {
            bad.push(format!("{}: height {h}, levels {vals:?}", m.name(s)));
        }
    }
    bad
}
