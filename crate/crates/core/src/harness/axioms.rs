//! Instantiates the axiom schemas on one model and checks each instance.

use std::fmt;

use rand::Rng;

use super::{random_formula, Vocabulary};
use crate::checker::EvalSession;
use crate::formula::{Arena, Builder, NodeId};
use crate::model::{Tjcm, Val};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    /// Random `(φ, ψ)` pairs per schema with schematic subformulas.
    pub samples: usize,
    pub formula_depth: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { samples: 4, formula_depth: 3 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomOutcome {
    pub tag: &'static str,
    pub instances: usize,
    /// First falsifying state, by canonical name.
    pub failure: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AxiomReport {
    pub outcomes: Vec<AxiomOutcome>,
}

impl AxiomReport {
    pub fn all_ok(&self) -> bool {
        self.outcomes.iter().all(|o| o.failure.is_none())
    }

    pub fn failed(&self) -> impl Iterator<Item = &AxiomOutcome> {
        self.outcomes.iter().filter(|o| o.failure.is_some())
    }

    pub fn get(&self, tag: &str) -> Option<&AxiomOutcome> {
        self.outcomes.iter().find(|o| o.tag == tag)
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for o in &self.outcomes {
            match &o.failure {
                None => writeln!(f, "AXIOM {} OK", o.tag)?,
                Some(s) => writeln!(f, "AXIOM {} FAIL @state {s}", o.tag)?,
            }
        }
        Ok(())
    }
}

struct Suite<'m> {
    arena: Arena,
    session: EvalSession<'m>,
    report: AxiomReport,
}

impl Suite<'_> {
    fn check(&mut self, tag: &'static str, instances: Vec<NodeId>) {
        let mut failure = None;
        for f in &instances {
            let holds = self.session.eval(&self.arena, *f);
            if let Some(s) = self.session.model().state_ids().find(|&s| !holds.contains(s)) {
                failure = Some(self.session.model().name(s).to_string());
                break;
            }
        }
        self.report.outcomes.push(AxiomOutcome { tag, instances: instances.len(), failure });
    }
}

/// Checks instances of every schema, plus SL and OL, on `m`.
///
/// Schematic `φ`, `ψ` are random formulas over the model's vocabulary; names
/// and courts range over the model's own.
pub fn axiom_suite<R: Rng>(m: &Tjcm, rng: &mut R, cfg: SuiteConfig) -> AxiomReport {
    let mut suite = Suite { arena: Arena::new(), session: EvalSession::new(m), report: AxiomReport::default() };
    let vocab = Vocabulary::of_model(m);
    let names: Vec<String> = m.all_names().map(String::from).collect();
    let courts = vocab.courts.clone();
    let a = &mut suite.arena;
    let pairs: Vec<(NodeId, NodeId)> = (0..cfg.samples)
        .map(|_| {
            let p = random_formula(rng, a, &vocab, cfg.formula_depth);
            let q = random_formula(rng, a, &vocab, cfg.formula_depth);
            (p, q)
        })
        .collect();

    type Schema = fn(&mut Arena, NodeId, NodeId) -> NodeId;
    let schemas: [(&'static str, Schema); 10] = [
        ("K_box", |a, p, q| k(a, p, q, <Arena as Builder>::boxed)),
        ("T_box", |a, p, _| {
            let b = a.boxed(p);
            a.implies(b, p)
        }),
        ("4_box", |a, p, _| {
            let b = a.boxed(p);
            let bb = a.boxed(b);
            a.implies(b, bb)
        }),
        ("B_box", |a, p, _| {
            let d = a.diamond(p);
            let bd = a.boxed(d);
            a.implies(p, bd)
        }),
        ("K_T", |a, p, q| k(a, p, q, <Arena as Builder>::tbox)),
        ("T_T", |a, p, _| {
            let b = a.tbox(p);
            a.implies(b, p)
        }),
        ("4_T", |a, p, _| {
            let b = a.tbox(p);
            let bb = a.tbox(b);
            a.implies(b, bb)
        }),
        ("MIX_box_T", |a, p, _| {
            let b = a.boxed(p);
            let t = a.tbox(p);
            a.implies(b, t)
        }),
        ("K_R", |a, p, q| k(a, p, q, <Arena as Builder>::rbox)),
        ("MIX_box_R", |a, p, _| {
            let b = a.boxed(p);
            let r = a.rbox(p);
            a.implies(b, r)
        }),
    ];
    for (tag, schema) in schemas {
        let inst = pairs.iter().map(|&(p, q)| schema(&mut suite.arena, p, q)).collect();
        suite.check(tag, inst);
    }

    let a = &mut suite.arena;
    let vals: Vec<NodeId> = Val::ALL.iter().map(|&v| a.dec(v)).collect();
    let at_least = a.any(vals.iter().copied());
    suite.check("AtLeastValue", vec![at_least]);
    let a = &mut suite.arena;
    let mut at_most = Vec::new();
    for &x in &vals {
        for &y in &vals {
            if x != y {
                let ny = a.not(y);
                at_most.push(a.implies(x, ny));
            }
        }
    }
    suite.check("AtMostValue", at_most);

    let a = &mut suite.arena;
    let mut total = Vec::new();
    for &(p, _) in &pairs {
        for n in &names {
            for m2 in &names {
                let tp = a.tbox(p);
                let at_m = at(a, m2, p);
                let l = a.implies(tp, at_m);
                let left = at(a, n, l);
                let at_n = at(a, n, p);
                let r = a.implies(tp, at_n);
                let right = at(a, m2, r);
                total.push(a.or(left, right));
            }
        }
    }
    suite.check("Total_T", total);

    let a = &mut suite.arena;
    let court_atoms: Vec<NodeId> = courts.iter().map(|c| a.atom(c)).collect();
    let least_court = a.any(court_atoms.iter().copied());
    suite.check("AtLeastCourt", vec![least_court]);
    let a = &mut suite.arena;
    let mut most_court = Vec::new();
    let mut irr = Vec::new();
    let mut glob_h = Vec::new();
    let mut glob_b = Vec::new();
    let mut trans = Vec::new();
    for (i, ci) in courts.iter().enumerate() {
        let h_ii = a.h(ci, ci);
        irr.push(a.not(h_ii));
        for (j, cj) in courts.iter().enumerate() {
            if i != j {
                let n = a.not(court_atoms[j]);
                most_court.push(a.implies(court_atoms[i], n));
            }
            let h = a.h(ci, cj);
            let bh = a.boxed(h);
            glob_h.push(a.implies(h, bh));
            let b = a.b(ci, cj);
            let bb = a.boxed(b);
            glob_b.push(a.implies(b, bb));
            for ck in &courts {
                let h2 = a.h(cj, ck);
                let h3 = a.h(ci, ck);
                let both = a.and(h, h2);
                trans.push(a.implies(both, h3));
            }
        }
    }
    suite.check("AtMostCourt", most_court);
    suite.check("IrrHierarchy", irr);
    suite.check("TrHierarchy", trans);
    suite.check("GlobHier", glob_h);
    suite.check("GlobBind", glob_b);

    let a = &mut suite.arena;
    let mut nam1 = Vec::new();
    for &(p, _) in &pairs {
        for n in &names {
            let na = a.atom(n);
            let conj = a.and(na, p);
            let d = a.diamond(conj);
            let at_n = at(a, n, p);
            nam1.push(a.implies(d, at_n));
        }
    }
    suite.check("nam1", nam1);
    let a = &mut suite.arena;
    let unknown = a.dec(Val::Unknown);
    let decided = a.not(unknown);
    let named: Vec<NodeId> = m.decided_names().iter().map(|n| a.atom(n)).collect();
    let any_named = a.any(named);
    let nam2 = a.iff(decided, any_named);
    suite.check("nam2", vec![nam2]);

    let a = &mut suite.arena;
    let mut sl_parts = Vec::new();
    for ci in &courts {
        for cj in courts.iter().filter(|c| *c != ci) {
            let h = a.h(ci, cj);
            let b = a.b(ci, cj);
            let up = a.implies(h, b);
            let nh = a.not(h);
            let nb = a.not(b);
            let down = a.implies(nh, nb);
            sl_parts.push(a.and(up, down));
        }
    }
    let sl = a.all(sl_parts);
    suite.check("SL", vec![sl]);
    let a = &mut suite.arena;
    let later_unknown = a.tbox(unknown);
    let imp = a.implies(unknown, later_unknown);
    let ol = a.boxed(imp);
    suite.check("OL", vec![ol]);
    suite.report
}

/// `(□φ ∧ □(φ → ψ)) → □ψ` for the box given by `bx`.
fn k(a: &mut Arena, p: NodeId, q: NodeId, bx: fn(&mut Arena, NodeId) -> NodeId) -> NodeId {
    let bp = bx(a, p);
    let imp = a.implies(p, q);
    let bimp = bx(a, imp);
    let lhs = a.and(bp, bimp);
    let bq = bx(a, q);
    a.implies(lhs, bq)
}

fn at(a: &mut Arena, n: &str, p: NodeId) -> NodeId {
    let na = a.atom(n);
    let imp = a.implies(na, p);
    a.boxed(imp)
}
