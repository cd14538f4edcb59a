mod common;

use common::{fixture, fixture_path, id, names_of, running_example};
use precedent_engine::checker::{Denotations, EvalSession};
use precedent_engine::formula::{parse, parse_with, Arena, ExpandConfig, Expander, IotaForm, NamedContext};
use precedent_engine::ingestion::{build_model_from_batch, read_cases};
use precedent_engine::model::{JurisdictionFile, Val};
use precedent_engine::precedent::{DecisionSet, DominanceReason, EdgeKind, Exception, PrecedentEngine, Verdict};

#[test]
fn explanation_of_the_new_case() {
    let m = running_example();
    let engine = PrecedentEngine::new(&m);
    let trace = engine.explain(id(&m, "n*")).unwrap();
    let verdicts: Vec<(String, Verdict)> =
        trace.entries.iter().map(|e| (m.name(e.precedent).to_string(), e.verdict)).collect();
    assert_eq!(
        verdicts,
        [
            ("n1".to_string(), Verdict::Excepted(Exception::Overruled { by: id(&m, "n3") })),
            ("n2".to_string(), Verdict::Dominated { by: id(&m, "n3"), reason: DominanceReason::HigherCourt }),
            ("n3".to_string(), Verdict::Best),
            ("n4".to_string(), Verdict::Excepted(Exception::PerIncuriamSameCourt)),
            ("n5".to_string(), Verdict::NotBinding),
            ("n6".to_string(), Verdict::NotBinding),
        ]
    );
    assert_eq!(trace.decision, DecisionSet::single(Val::Zero));
    let text = trace.render(&m);
    assert!(text.starts_with("case n* at c2\n"));
    assert!(text.contains("n2 [c1, t=2] supports 1: supporting -> binding -> dominated by n3 (higher court)\n"));
    assert!(text.ends_with("decision: {0}\n"));
}

#[test]
fn dependency_graphs() {
    let m = running_example();
    let engine = PrecedentEngine::new(&m);
    let g4 = engine.s_graph(id(&m, "n4")).unwrap();
    assert_eq!(names_of(&m, g4.nodes()), ["n3", "n4"]);
    assert_eq!(g4.edges(), [(id(&m, "n4"), id(&m, "n3"), EdgeKind::Binding)]);
    assert_eq!((g4.height(id(&m, "n4")), g4.height(id(&m, "n3"))), (1, 0));
    assert_eq!(
        g4.to_dot(&m),
        "digraph sgraph {\n  \"n3\" [label=\"n3/c0/0/0\"];\n  \"n4\" [label=\"n4/c2/1/1\"];\n  \"n4\" -> \"n3\" [kind=binding];\n}\n"
    );

    let g1 = engine.s_graph(id(&m, "n1")).unwrap();
    assert_eq!(g1.edges(), [(id(&m, "n1"), id(&m, "n3"), EdgeKind::Overruling)]);
    assert_eq!(g1.height(id(&m, "n1")), 1);

    let g3 = engine.s_graph(id(&m, "n3")).unwrap();
    assert_eq!(g3.len(), 1);
    assert!(engine.s_graph(id(&m, "n*")).is_err());
}

#[test]
fn per_incuriam_and_overruled_everywhere() {
    let m = running_example();
    let engine = PrecedentEngine::new(&m);
    let ctx = NamedContext::from_model(&m);
    let mut arena = Arena::new();
    let inc = parse(&mut arena, &ctx, "Incuriam").unwrap();
    let ov = parse(&mut arena, &ctx, "Overruled").unwrap();
    let mut session = EvalSession::new(&m);
    assert_eq!(names_of(&m, session.eval(&arena, inc).iter()), ["n4"]);
    assert_eq!(names_of(&m, session.eval(&arena, ov).iter()), ["n1"]);
    for s in m.decided_states() {
        assert_eq!(engine.incuriam(s).unwrap(), session.holds(&arena, inc, s), "{}", m.name(s));
        assert_eq!(engine.overruled(s).unwrap(), session.holds(&arena, ov, s), "{}", m.name(s));
    }
    assert!(engine.incuriam(id(&m, "n*")).is_err());
    assert_eq!(engine.overruled_by(id(&m, "n1")).unwrap(), Some(id(&m, "n3")));
}

#[test]
fn supporting_facts_hold_only_in_their_direction() {
    let m = running_example();
    let ctx = NamedContext::from_model(&m);
    let mut den = Denotations::new(&m);
    let mut ex = Expander::new(&mut den, &ctx);
    let mut supported = Vec::new();
    for n in ["n1", "n2", "n3", "n4", "n5", "n6", "n*"] {
        for o in ["0", "1"] {
            let f = parse_with(&mut ex, &format!("Supporting(n*,{n},t({o}))")).unwrap();
            if ex.builder().holds(f, id(&m, "n*")) {
                supported.push(format!("{n}:{o}"));
            }
        }
    }
    assert_eq!(supported, ["n1:1", "n2:1", "n3:0", "n4:1", "n5:0", "n6:1"]);
}

/// The crafted model where the guard on the according precedent decides the verdict.
#[test]
fn iota_guard_counterexample() {
    let m = fixture("iota_guard.json");
    let s = id(&m, "s");
    assert!(!PrecedentEngine::new(&m).incuriam(s).unwrap());
    let ctx = NamedContext::from_model(&m);
    let eval = |form: IotaForm| {
        let mut den = Denotations::new(&m);
        let cfg = ExpandConfig { iota_form: form, ..ExpandConfig::default() };
        let f = Expander::with_config(&mut den, &ctx, cfg).incuriam().unwrap();
        den.holds(f, s)
    };
    assert!(!eval(IotaForm::Repaired));
    assert!(eval(IotaForm::AsPrinted), "the literal guard no longer misfires on this model");
    // the according precedent is itself per incuriam, but decided by a higher court
    assert!(PrecedentEngine::new(&m).incuriam(id(&m, "b")).unwrap());
}

#[test]
fn conflict_at_the_same_self_bound_court_follows_the_earlier_precedent() {
    // with the new case at the appeal court too, the later appeal decision went
    // against a precedent binding that court and is disregarded there
    let jur = JurisdictionFile::read(&fixture_path("conflict_jurisdiction.json")).unwrap().into_jurisdiction();
    let mut cases = read_cases(&fixture_path("conflict_cases.json")).unwrap();
    cases[2].court = "appeal".into();
    let m = build_model_from_batch(&cases, jur).unwrap();
    let engine = PrecedentEngine::new(&m);
    assert!(engine.incuriam(id(&m, "case2")).unwrap());
    assert_eq!(engine.decide(id(&m, "case3")).unwrap(), DecisionSet::single(Val::One));
}
