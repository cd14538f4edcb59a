//! Printing core formulas in the concrete syntax accepted by [`super::parse`].
//!
//! The output is the tree rendering, so shared subformulas are repeated.
//! Conjunctions associate to the left; a conjunction in right position or
//! under a prefix operator gets parentheses, nothing else does.

use super::{Arena, Node, NodeId};

pub fn print(arena: &Arena, f: NodeId) -> String {
    let mut out = String::new();
    write_formula(arena, f, &mut out);
    out
}

fn write_formula(arena: &Arena, f: NodeId, out: &mut String) {
    match arena.node(f) {
        Node::And(x, y) => {
            write_formula(arena, x, out);
            out.push_str(" & ");
            write_operand(arena, y, out);
        }
        _ => write_operand(arena, f, out),
    }
}

/// Writes `f` so that it binds at least as tightly as a prefix operator.
fn write_operand(arena: &Arena, f: NodeId, out: &mut String) {
    match arena.node(f) {
        Node::Atom(s) => out.push_str(arena.symbol(s)),
        Node::Dec(v) => {
            out.push_str("t(");
            out.push_str(v.token());
            out.push(')');
        }
        Node::HRel(a, b) | Node::BRel(a, b) => {
            out.push_str(if matches!(arena.node(f), Node::HRel(..)) { "H(" } else { "B(" });
            out.push_str(arena.symbol(a));
            out.push(',');
            out.push_str(arena.symbol(b));
            out.push(')');
        }
        Node::Not(x) => prefix(arena, "~", x, out),
        Node::Box(x) => prefix(arena, "[]", x, out),
        Node::TBox(x) => prefix(arena, "[T]", x, out),
        Node::RBox(x) => prefix(arena, "[R]", x, out),
        Node::And(..) => {
            out.push('(');
            write_formula(arena, f, out);
            out.push(')');
        }
    }
}

fn prefix(arena: &Arena, op: &str, x: NodeId, out: &mut String) {
    out.push_str(op);
    write_operand(arena, x, out);
}
