//! Formulas of the modal language.
//!
//! Formulas live in a hash-consed [`Arena`]: every structurally distinct
//! subformula is stored exactly once, so a [`NodeId`] identifies a formula up
//! to structural equality and derived operators that reuse subterms (the
//! per-incuriam family in particular) stay polynomial in size.
//!
//! Only the nine core constructors exist as nodes. Every derived operator,
//! from `∨` up to the precedent macros in [`expand`], is expanded into them
//! at construction time.

pub mod expand;
mod parse;
mod print;

use std::collections::hash_map::Entry;

use indexmap::IndexSet;
use rustc_hash::{FxBuildHasher, FxHashMap};

use crate::model::Val;

pub use expand::{ExpandConfig, ExpandError, Expander, IotaForm, NamedContext};
pub use parse::{parse, parse_with, ParseError};
pub use print::print;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Interned token (fact, name or court).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sym(u32);

impl Sym {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Atom(Sym),
    Dec(Val),
    HRel(Sym, Sym),
    BRel(Sym, Sym),
    Not(NodeId),
    And(NodeId, NodeId),
    /// Universal modality over all states.
    Box(NodeId),
    /// Universal modality over states not earlier than the current one.
    TBox(NodeId),
    /// Universal modality over the states relevant for the current one.
    RBox(NodeId),
}

impl Node {
    pub fn children(&self) -> impl Iterator<Item = NodeId> {
        let (a, b) = match *self {
            Node::Atom(_) | Node::Dec(_) | Node::HRel(..) | Node::BRel(..) => (None, None),
            Node::Not(x) | Node::Box(x) | Node::TBox(x) | Node::RBox(x) => (Some(x), None),
            Node::And(x, y) => (Some(x), Some(y)),
        };
        a.into_iter().chain(b)
    }
}

/// Hash-consing store for formulas. Children always have smaller ids than
/// their parents.
#[derive(Clone, Debug, Default)]
pub struct Arena {
    nodes: Vec<Node>,
    index: FxHashMap<Node, NodeId>,
    symbols: IndexSet<String, FxBuildHasher>,
}

impl Arena {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: NodeId) -> Node {
        self.nodes[id.index()]
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn symbol(&self, sym: Sym) -> &str {
        &self.symbols[sym.index()]
    }

    pub fn intern(&mut self, token: &str) -> Sym {
        if let Some(i) = self.symbols.get_index_of(token) {
            return Sym(i as u32);
        }
        let (i, _) = self.symbols.insert_full(token.to_string());
        Sym(i as u32)
    }

    /// Looks up an interned token without inserting it.
    pub fn lookup_symbol(&self, token: &str) -> Option<Sym> {
        self.symbols.get_index_of(token).map(|i| Sym(i as u32))
    }

    pub fn mk(&mut self, node: Node) -> NodeId {
        match self.index.entry(node) {
            Entry::Occupied(e) => *e.get(),
            Entry::Vacant(e) => {
                let id = NodeId(u32::try_from(self.nodes.len()).expect("formula arena overflow"));
                self.nodes.push(node);
                *e.insert(id)
            }
        }
    }

    /// Number of nodes reachable from `root`.
    pub fn dag_size(&self, root: NodeId) -> usize {
        let mut seen = vec![false; root.index() + 1];
        let mut stack = vec![root];
        let mut count = 0;
        while let Some(id) = stack.pop() {
            if std::mem::replace(&mut seen[id.index()], true) {
                continue;
            }
            count += 1;
            stack.extend(self.node(id).children());
        }
        count
    }
}

/// Target of formula construction. [`Arena`] records syntax; other
/// implementations may interpret each connective as it is built. Derived
/// connectives are defined once here, in terms of the core ones.
pub trait Builder {
    type F: Copy;

    fn atom(&mut self, token: &str) -> Self::F;
    fn dec(&mut self, v: Val) -> Self::F;
    fn h(&mut self, higher: &str, lower: &str) -> Self::F;
    fn b(&mut self, from: &str, to: &str) -> Self::F;
    fn not(&mut self, x: Self::F) -> Self::F;
    fn and(&mut self, x: Self::F, y: Self::F) -> Self::F;
    fn boxed(&mut self, x: Self::F) -> Self::F;
    fn tbox(&mut self, x: Self::F) -> Self::F;
    fn rbox(&mut self, x: Self::F) -> Self::F;

    /// `t(0) ∧ ¬t(0)`.
    fn bottom(&mut self) -> Self::F {
        let z = self.dec(Val::Zero);
        let nz = self.not(z);
        self.and(z, nz)
    }

    fn top(&mut self) -> Self::F {
        let b = self.bottom();
        self.not(b)
    }

    /// `¬(¬x ∧ ¬y)`.
    fn or(&mut self, x: Self::F, y: Self::F) -> Self::F {
        let (nx, ny) = (self.not(x), self.not(y));
        let c = self.and(nx, ny);
        self.not(c)
    }

    /// `¬(x ∧ ¬y)`.
    fn implies(&mut self, x: Self::F, y: Self::F) -> Self::F {
        let ny = self.not(y);
        let c = self.and(x, ny);
        self.not(c)
    }

    fn iff(&mut self, x: Self::F, y: Self::F) -> Self::F {
        let l = self.implies(x, y);
        let r = self.implies(y, x);
        self.and(l, r)
    }

    fn diamond(&mut self, x: Self::F) -> Self::F {
        let nx = self.not(x);
        let b = self.boxed(nx);
        self.not(b)
    }

    fn tdiamond(&mut self, x: Self::F) -> Self::F {
        let nx = self.not(x);
        let b = self.tbox(nx);
        self.not(b)
    }

    fn rdiamond(&mut self, x: Self::F) -> Self::F {
        let nx = self.not(x);
        let b = self.rbox(nx);
        self.not(b)
    }

    /// Left-nested conjunction; `⊤` when empty.
    fn all(&mut self, items: impl IntoIterator<Item = Self::F>) -> Self::F {
        let mut it = items.into_iter();
        match it.next() {
            None => self.top(),
            Some(first) => it.fold(first, |acc, x| self.and(acc, x)),
        }
    }

    /// Left-nested disjunction; `⊥` when empty.
    fn any(&mut self, items: impl IntoIterator<Item = Self::F>) -> Self::F {
        let mut it = items.into_iter();
        match it.next() {
            None => self.bottom(),
            Some(first) => it.fold(first, |acc, x| self.or(acc, x)),
        }
    }
}

impl Builder for Arena {
    type F = NodeId;

    fn atom(&mut self, token: &str) -> NodeId {
        let s = self.intern(token);
        self.mk(Node::Atom(s))
    }

    fn dec(&mut self, v: Val) -> NodeId {
        self.mk(Node::Dec(v))
    }

    fn h(&mut self, higher: &str, lower: &str) -> NodeId {
        let (a, b) = (self.intern(higher), self.intern(lower));
        self.mk(Node::HRel(a, b))
    }

    fn b(&mut self, from: &str, to: &str) -> NodeId {
        let (a, b) = (self.intern(from), self.intern(to));
        self.mk(Node::BRel(a, b))
    }

    fn not(&mut self, x: NodeId) -> NodeId {
        self.mk(Node::Not(x))
    }

    fn and(&mut self, x: NodeId, y: NodeId) -> NodeId {
        self.mk(Node::And(x, y))
    }

    fn boxed(&mut self, x: NodeId) -> NodeId {
        self.mk(Node::Box(x))
    }

    fn tbox(&mut self, x: NodeId) -> NodeId {
        self.mk(Node::TBox(x))
    }

    fn rbox(&mut self, x: NodeId) -> NodeId {
        self.mk(Node::RBox(x))
    }
}
