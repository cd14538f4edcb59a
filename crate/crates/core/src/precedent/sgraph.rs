//! The dependency graph below a decided case.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::model::{StateId, Tjcm};

use super::{PrecedentEngine, PrecedentError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeKind {
    /// Target is a potentially binding precedent of the source.
    Binding,
    /// Target potentially overrules the source.
    Overruling,
}

impl EdgeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EdgeKind::Binding => "binding",
            EdgeKind::Overruling => "overruling",
        }
    }
}

/// Closure of a decided root under binding and overruling successors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SGraph {
    root: StateId,
    heights: BTreeMap<StateId, usize>,
    edges: Vec<(StateId, StateId, EdgeKind)>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mark {
    Open,
    Closed,
}

impl SGraph {
    pub(super) fn build(engine: &PrecedentEngine<'_>, root: StateId) -> Result<SGraph, PrecedentError> {
        let m = engine.model();
        if !m.decision(root).is_decided() {
            return Err(PrecedentError::UndecidedRoot(m.name(root).to_string()));
        }
        let mut marks: BTreeMap<StateId, Mark> = BTreeMap::new();
        let mut heights = BTreeMap::new();
        let mut edges = Vec::new();
        // iterative DFS; a frame holds the node, its successor list and the next index
        type Frame = (StateId, Vec<(StateId, EdgeKind)>, usize);
        let mut stack: Vec<Frame> = Vec::new();
        marks.insert(root, Mark::Open);
        stack.push((root, engine.successors(root).collect(), 0));
        while let Some(frame) = stack.last_mut() {
            let (node, succ, next) = (frame.0, &frame.1, frame.2);
            if next == succ.len() {
                let h = succ.iter().map(|(t, _)| heights[t] + 1).max().unwrap_or(0);
                heights.insert(node, h);
                marks.insert(node, Mark::Closed);
                stack.pop();
                continue;
            }
            let (target, kind) = succ[next];
            frame.2 += 1;
            debug_assert!(m.decision(target).is_decided(), "undecided state in dependency graph");
            edges.push((node, target, kind));
            match marks.get(&target) {
                Some(Mark::Closed) => {}
                Some(Mark::Open) => {
                    let start = stack.iter().position(|f| f.0 == target).expect("open node is on the stack");
                    let mut cycle: Vec<String> = stack[start..].iter().map(|f| m.name(f.0).to_string()).collect();
                    cycle.push(m.name(target).to_string());
                    return Err(PrecedentError::CycleDetected(cycle));
                }
                None => {
                    marks.insert(target, Mark::Open);
                    let succ = engine.successors(target).collect();
                    stack.push((target, succ, 0));
                }
            }
        }
        edges.sort();
        edges.dedup();
        Ok(SGraph { root, heights, edges })
    }

    pub fn root(&self) -> StateId {
        self.root
    }

    pub fn nodes(&self) -> impl Iterator<Item = StateId> + '_ {
        self.heights.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.heights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heights.is_empty()
    }

    pub fn contains(&self, s: StateId) -> bool {
        self.heights.contains_key(&s)
    }

    pub fn edges(&self) -> &[(StateId, StateId, EdgeKind)] {
        &self.edges
    }

    /// Edges on the longest path from `s` to a sink. Panics if `s` is not a node.
    pub fn height(&self, s: StateId) -> usize {
        self.heights[&s]
    }

    pub fn heights(&self) -> &BTreeMap<StateId, usize> {
        &self.heights
    }

    /// Graphviz rendering with nodes and edges in canonical-name order.
    pub fn to_dot(&self, m: &Tjcm) -> String {
        let mut nodes: Vec<StateId> = self.nodes().collect();
        nodes.sort_by(|a, b| m.name(*a).cmp(m.name(*b)));
        let mut edges: Vec<_> = self.edges.iter().map(|&(a, b, k)| (m.name(a), m.name(b), k)).collect();
        edges.sort();
        let mut out = String::from("digraph sgraph {\n");
        for n in nodes {
            let label = format!("{}/{}/{}/{}", m.name(n), m.court(n), m.decision(n), self.height(n));
            writeln!(out, "  {} [label={}];", quote(m.name(n)), quote(&label)).unwrap();
        }
        for (a, b, k) in edges {
            writeln!(out, "  {} -> {} [kind={}];", quote(a), quote(b), k.as_str()).unwrap();
        }
        out.push_str("}\n");
        out
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{CaseState, Jurisdiction, Val};

    #[test]
    fn cycle_is_reported_not_looped() {
        // y is above x yet x binds y: allowed only outside the strict class
        let j = Jurisdiction::from_strs(&["x", "y"], &[("y", "x")], &[("x", "y")]);
        let states = vec![CaseState::new("a", "x", Val::One, 1), CaseState::new("b", "y", Val::Zero, 2)];
        let rel = vec![("a".to_string(), "b".to_string())];
        let m = Tjcm::new(states, j, &rel, vec!["a".into(), "b".into()], false).unwrap();
        let e = PrecedentEngine::new(&m);
        match e.s_graph(m.lookup("b").unwrap()) {
            Err(PrecedentError::CycleDetected(path)) => assert_eq!(path, ["b", "a", "b"]),
            other => panic!("expected a cycle, got {other:?}"),
        }
        assert!(e.incuriam(m.lookup("a").unwrap()).is_err());
    }

    #[test]
    fn single_node_graph() {
        let j = Jurisdiction::from_strs(&["x"], &[], &[]);
        let m = Tjcm::new(vec![CaseState::new("a", "x", Val::One, 1)], j, &[], vec!["a".into()], true).unwrap();
        let e = PrecedentEngine::new(&m);
        let g = e.s_graph(StateId(0)).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g.height(StateId(0)), 0);
        assert!(g.edges().is_empty());
        assert_eq!(g.to_dot(&m), "digraph sgraph {\n  \"a\" [label=\"a/x/1/0\"];\n}\n");
    }
}
