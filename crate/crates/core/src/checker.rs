//! Model checking of core formulas.
//!
//! [`Frame`] holds the satisfaction clauses of the core connectives as
//! operations on state bitsets. Two evaluators are built on it:
//!
//! - [`EvalSession`] evaluates arena formulas bottom-up over the whole state
//!   set at once, keeping one bitset per arena node for later queries. Since
//!   children always have smaller ids than parents, evaluating the missing
//!   nodes in ascending id order never meets an unevaluated child.
//! - [`Denotations`] is a formula [`Builder`] that applies each connective
//!   as soon as it is built, so a macro expansion is evaluated without ever
//!   being stored. Equal truth sets share an id, which keeps both memory and
//!   the per-connective cache small.
//!
//! [`naive_satisfies`] is the direct recursive reading of the satisfaction
//! clauses, used to cross-check both on small formulas.

use std::collections::{BTreeSet, HashMap};

use indexmap::IndexSet;
use rustc_hash::{FxBuildHasher, FxHashMap};

use crate::formula::{Arena, Builder, Node, NodeId};
use crate::model::{ModelError, StateId, Tjcm, Val};

/// Bitset over the states of one model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateSet {
    words: Vec<u64>,
    len: usize,
}

impl StateSet {
    fn from_words(words: &[u64], len: usize) -> Self {
        StateSet { words: words.to_vec(), len }
    }

    pub fn contains(&self, s: StateId) -> bool {
        s.0 < self.len && self.words[s.0 / 64] >> (s.0 % 64) & 1 == 1
    }

    pub fn iter(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.len).map(StateId).filter(move |&s| self.contains(s))
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_full(&self) -> bool {
        self.count() == self.len
    }
}

fn set_bit(words: &mut [u64], i: usize) {
    words[i / 64] |= 1 << (i % 64);
}

fn get_bit(words: &[u64], i: usize) -> bool {
    words[i / 64] >> (i % 64) & 1 == 1
}

/// One model's satisfaction clauses, on bitsets of `words` words.
pub struct Frame<'m> {
    model: &'m Tjcm,
    words: usize,
    full: Vec<u64>,
    tokens: HashMap<&'m str, Vec<u64>>,
    court_index: HashMap<&'m str, usize>,
    /// `higher[a * courts + b]` is `H(a, b)`; `binds` likewise for `B`.
    higher: Vec<bool>,
    binds: Vec<bool>,
    /// States grouped by rank, latest group first.
    rank_groups: Vec<Vec<usize>>,
    relevant_masks: Vec<Vec<u64>>,
}

impl<'m> Frame<'m> {
    pub fn new(model: &'m Tjcm) -> Self {
        let n = model.len();
        let words = n.div_ceil(64).max(1);
        let mut full = vec![0u64; words];
        for i in 0..n {
            set_bit(&mut full, i);
        }
        let mut tokens: HashMap<&str, Vec<u64>> = HashMap::new();
        for (i, st) in model.states().iter().enumerate() {
            let toks = st
                .names
                .iter()
                .map(String::as_str)
                .chain(st.facts.iter().map(String::as_str))
                .chain([st.court.as_str()]);
            for t in toks {
                set_bit(tokens.entry(t).or_insert_with(|| vec![0; words]), i);
            }
        }
        let j = model.jurisdiction();
        let courts = j.courts();
        for c in courts {
            tokens.entry(c.as_str()).or_insert_with(|| vec![0; words]);
        }
        for name in model.decided_names() {
            tokens.entry(name.as_str()).or_insert_with(|| vec![0; words]);
        }
        let court_index = courts.iter().enumerate().map(|(i, c)| (c.as_str(), i)).collect();
        let mut higher = Vec::with_capacity(courts.len() * courts.len());
        let mut binds = Vec::with_capacity(courts.len() * courts.len());
        for a in courts {
            for b in courts {
                higher.push(j.is_higher(a, b));
                binds.push(j.binds(a, b));
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(model.time(StateId(i))));
        let mut rank_groups: Vec<Vec<usize>> = Vec::new();
        for i in order {
            match rank_groups.last_mut() {
                Some(g) if model.time(StateId(g[0])) == model.time(StateId(i)) => g.push(i),
                _ => rank_groups.push(vec![i]),
            }
        }
        let relevant_masks = model
            .state_ids()
            .map(|s| {
                let mut m = vec![0u64; words];
                for r in model.relevant_for(s) {
                    set_bit(&mut m, r.0);
                }
                m
            })
            .collect();
        Frame { model, words, full, tokens, court_index, higher, binds, rank_groups, relevant_masks }
    }

    pub fn model(&self) -> &'m Tjcm {
        self.model
    }

    /// Words per bitset.
    pub fn words(&self) -> usize {
        self.words
    }

    /// States carrying `token` as a name, fact or court; `false` if the model never mentions it.
    fn atom(&self, token: &str, out: &mut [u64]) -> bool {
        match self.tokens.get(token) {
            Some(bits) => {
                out.copy_from_slice(bits);
                true
            }
            None => {
                out.fill(0);
                false
            }
        }
    }

    fn dec(&self, v: Val, out: &mut [u64]) {
        out.fill(0);
        for s in self.model.state_ids().filter(|&s| self.model.decision(s) == v) {
            set_bit(out, s.0);
        }
    }

    /// `H(a, b)` or, with `hierarchy` false, `B(a, b)`; unknown courts make it false.
    fn relation(&self, hierarchy: bool, a: &str, b: &str, out: &mut [u64]) {
        let holds = match (self.court_index.get(a), self.court_index.get(b)) {
            (Some(&a), Some(&b)) => {
                let k = a * self.court_index.len() + b;
                if hierarchy {
                    self.higher[k]
                } else {
                    self.binds[k]
                }
            }
            _ => false,
        };
        self.constant(holds, out);
    }

    fn constant(&self, holds: bool, out: &mut [u64]) {
        if holds {
            out.copy_from_slice(&self.full);
        } else {
            out.fill(0);
        }
    }

    fn not(&self, x: &[u64], out: &mut [u64]) {
        for ((o, c), f) in out.iter_mut().zip(x).zip(&self.full) {
            *o = !c & f;
        }
    }

    fn and(&self, x: &[u64], y: &[u64], out: &mut [u64]) {
        for ((o, a), b) in out.iter_mut().zip(x).zip(y) {
            *o = a & b;
        }
    }

    fn boxed(&self, x: &[u64], out: &mut [u64]) {
        self.constant(x == &self.full[..], out);
    }

    fn tbox(&self, x: &[u64], out: &mut [u64]) {
        out.fill(0);
        for group in &self.rank_groups {
            if !group.iter().all(|&i| get_bit(x, i)) {
                break;
            }
            for &i in group {
                set_bit(out, i);
            }
        }
    }

    fn rbox(&self, x: &[u64], out: &mut [u64]) {
        out.fill(0);
        for (i, mask) in self.relevant_masks.iter().enumerate() {
            if mask.iter().zip(x).all(|(m, c)| m & !c == 0) {
                set_bit(out, i);
            }
        }
    }
}

pub struct EvalSession<'m> {
    frame: Frame<'m>,
    memo: Vec<u64>,
    done: Vec<bool>,
    unknown: BTreeSet<String>,
}

impl<'m> EvalSession<'m> {
    pub fn new(model: &'m Tjcm) -> Self {
        EvalSession { frame: Frame::new(model), memo: Vec::new(), done: Vec::new(), unknown: BTreeSet::new() }
    }

    pub fn model(&self) -> &'m Tjcm {
        self.frame.model
    }

    /// Atom tokens met so far that are not in the model's vocabulary; they evaluate to false.
    pub fn unknown_atoms(&self) -> &BTreeSet<String> {
        &self.unknown
    }

    /// Number of formula nodes with a cached value.
    pub fn cached_nodes(&self) -> usize {
        self.done.iter().filter(|d| **d).count()
    }

    /// Evaluates `f` at every state. The session's cache is keyed by node id,
    /// so one session must only ever be used with one arena.
    pub fn eval(&mut self, arena: &Arena, f: NodeId) -> StateSet {
        self.ensure(arena, f);
        let w = self.frame.words;
        StateSet::from_words(&self.memo[f.index() * w..(f.index() + 1) * w], self.frame.model.len())
    }

    pub fn holds(&mut self, arena: &Arena, f: NodeId, s: StateId) -> bool {
        self.ensure(arena, f);
        get_bit(&self.memo[f.index() * self.frame.words..], s.0)
    }

    pub fn valid(&mut self, arena: &Arena, f: NodeId) -> bool {
        self.ensure(arena, f);
        let w = self.frame.words;
        self.memo[f.index() * w..(f.index() + 1) * w] == self.frame.full[..]
    }

    fn ensure(&mut self, arena: &Arena, root: NodeId) {
        if self.done.len() < arena.len() {
            self.done.resize(arena.len(), false);
            self.memo.resize(arena.len() * self.frame.words, 0);
        }
        if self.done[root.index()] {
            return;
        }
        let mut pending = Vec::new();
        let mut seen = vec![false; root.index() + 1];
        let mut stack = vec![root];
        while let Some(id) = stack.pop() {
            if self.done[id.index()] || std::mem::replace(&mut seen[id.index()], true) {
                continue;
            }
            pending.push(id);
            stack.extend(arena.node(id).children());
        }
        pending.sort_unstable();
        for id in pending {
            self.compute(arena, id);
        }
    }

    fn compute(&mut self, arena: &Arena, id: NodeId) {
        let w = self.frame.words;
        let (before, rest) = self.memo.split_at_mut(id.index() * w);
        let out = &mut rest[..w];
        let child = |x: NodeId| &before[x.index() * w..(x.index() + 1) * w];
        let fr = &self.frame;
        match arena.node(id) {
            Node::Atom(sym) => {
                let token = arena.symbol(sym);
                if !fr.atom(token, out) {
                    self.unknown.insert(token.to_string());
                }
            }
            Node::Dec(v) => fr.dec(v, out),
            Node::HRel(a, b) => fr.relation(true, arena.symbol(a), arena.symbol(b), out),
            Node::BRel(a, b) => fr.relation(false, arena.symbol(a), arena.symbol(b), out),
            Node::Not(x) => fr.not(child(x), out),
            Node::And(x, y) => fr.and(child(x), child(y), out),
            Node::Box(x) => fr.boxed(child(x), out),
            Node::TBox(x) => fr.tbox(child(x), out),
            Node::RBox(x) => fr.rbox(child(x), out),
        }
        self.done[id.index()] = true;
    }
}

/// A truth set interned by [`Denotations`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Truth(u32);

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Op {
    Not(Truth),
    And(Truth, Truth),
    Box(Truth),
    TBox(Truth),
    RBox(Truth),
}

/// Evaluates formulas as they are built, without keeping their syntax.
pub struct Denotations<'m> {
    frame: Frame<'m>,
    sets: IndexSet<Box<[u64]>, FxBuildHasher>,
    ops: FxHashMap<Op, Truth>,
    atoms: FxHashMap<Box<str>, Truth>,
    scratch: Vec<u64>,
    unknown: BTreeSet<String>,
}

impl<'m> Denotations<'m> {
    pub fn new(model: &'m Tjcm) -> Self {
        let frame = Frame::new(model);
        let scratch = vec![0; frame.words];
        Denotations {
            frame,
            sets: IndexSet::default(),
            ops: FxHashMap::default(),
            atoms: FxHashMap::default(),
            scratch,
            unknown: BTreeSet::new(),
        }
    }

    pub fn model(&self) -> &'m Tjcm {
        self.frame.model
    }

    pub fn set(&self, t: Truth) -> StateSet {
        StateSet::from_words(&self.sets[t.0 as usize], self.frame.model.len())
    }

    pub fn holds(&self, t: Truth, s: StateId) -> bool {
        get_bit(&self.sets[t.0 as usize], s.0)
    }

    pub fn valid(&self, t: Truth) -> bool {
        self.sets[t.0 as usize][..] == self.frame.full[..]
    }

    /// Atom tokens met so far that are not in the model's vocabulary; they evaluate to false.
    pub fn unknown_atoms(&self) -> &BTreeSet<String> {
        &self.unknown
    }

    /// Number of distinct truth sets met so far.
    pub fn distinct_sets(&self) -> usize {
        self.sets.len()
    }

    fn intern_scratch(&mut self) -> Truth {
        if let Some(i) = self.sets.get_index_of(&self.scratch[..]) {
            return Truth(i as u32);
        }
        let (i, _) = self.sets.insert_full(self.scratch.clone().into_boxed_slice());
        Truth(u32::try_from(i).expect("truth set overflow"))
    }

    fn apply(&mut self, op: Op) -> Truth {
        if let Some(&t) = self.ops.get(&op) {
            return t;
        }
        let get = |t: Truth| &self.sets[t.0 as usize][..];
        let out = &mut self.scratch;
        match op {
            Op::Not(x) => self.frame.not(get(x), out),
            Op::And(x, y) => self.frame.and(get(x), get(y), out),
            Op::Box(x) => self.frame.boxed(get(x), out),
            Op::TBox(x) => self.frame.tbox(get(x), out),
            Op::RBox(x) => self.frame.rbox(get(x), out),
        }
        let t = self.intern_scratch();
        self.ops.insert(op, t);
        t
    }
}

impl Builder for Denotations<'_> {
    type F = Truth;

    fn atom(&mut self, token: &str) -> Truth {
        if let Some(&t) = self.atoms.get(token) {
            return t;
        }
        if !self.frame.atom(token, &mut self.scratch) {
            self.unknown.insert(token.to_string());
        }
        let t = self.intern_scratch();
        self.atoms.insert(token.into(), t);
        t
    }

    fn dec(&mut self, v: Val) -> Truth {
        self.frame.dec(v, &mut self.scratch);
        self.intern_scratch()
    }

    fn h(&mut self, higher: &str, lower: &str) -> Truth {
        self.frame.relation(true, higher, lower, &mut self.scratch);
        self.intern_scratch()
    }

    fn b(&mut self, from: &str, to: &str) -> Truth {
        self.frame.relation(false, from, to, &mut self.scratch);
        self.intern_scratch()
    }

    fn not(&mut self, x: Truth) -> Truth {
        self.apply(Op::Not(x))
    }

    fn and(&mut self, x: Truth, y: Truth) -> Truth {
        // conjunction commutes, so one cache entry serves both orders
        let (x, y) = if x.0 <= y.0 { (x, y) } else { (y, x) };
        self.apply(Op::And(x, y))
    }

    fn boxed(&mut self, x: Truth) -> Truth {
        self.apply(Op::Box(x))
    }

    fn tbox(&mut self, x: Truth) -> Truth {
        self.apply(Op::TBox(x))
    }

    fn rbox(&mut self, x: Truth) -> Truth {
        self.apply(Op::RBox(x))
    }
}

/// `M, s ⊨ f`, evaluated through a fresh session.
pub fn satisfies(m: &Tjcm, arena: &Arena, s: StateId, f: NodeId) -> bool {
    EvalSession::new(m).holds(arena, f, s)
}

/// Like [`satisfies`], addressing the state by any of its names.
pub fn satisfies_named(m: &Tjcm, arena: &Arena, name: &str, f: NodeId) -> Result<bool, ModelError> {
    Ok(satisfies(m, arena, m.lookup(name)?, f))
}

/// `M ⊨ f`: `f` holds at every state.
pub fn valid_in_model(m: &Tjcm, arena: &Arena, f: NodeId) -> bool {
    EvalSession::new(m).valid(arena, f)
}

/// Direct recursive evaluation, without sharing or caching. Exponential in
/// the modal depth; meant for small formulas and as a reference.
pub fn naive_satisfies(m: &Tjcm, arena: &Arena, s: StateId, f: NodeId) -> bool {
    let rec = |x: NodeId, t: StateId| naive_satisfies(m, arena, t, x);
    match arena.node(f) {
        Node::Atom(sym) => {
            let token = arena.symbol(sym);
            let st = m.state(s);
            st.court.as_str() == token || st.has_name(token) || st.facts.contains(token)
        }
        Node::Dec(v) => m.decision(s) == v,
        Node::HRel(a, b) => m.jurisdiction().is_higher(&arena.symbol(a).into(), &arena.symbol(b).into()),
        Node::BRel(a, b) => m.jurisdiction().binds(&arena.symbol(a).into(), &arena.symbol(b).into()),
        Node::Not(x) => !rec(x, s),
        Node::And(x, y) => rec(x, s) && rec(y, s),
        Node::Box(x) => m.state_ids().all(|t| rec(x, t)),
        Node::TBox(x) => m.state_ids().filter(|&t| m.time(s) <= m.time(t)).all(|t| rec(x, t)),
        Node::RBox(x) => m.relevant_for(s).iter().all(|&t| rec(x, t)),
    }
}
