//! Text and JSON renderings of library values.

use dag_inclusion::inclusion::Violation;
use dag_inclusion::separation::{DependenceComplex, DisjointTriplet};
use dag_inclusion::sweep::Pair;
use dag_inclusion::transform::{OpKind, TransformSequence};
use dag_inclusion::{Dag, NodeSet};
use serde_json::{json, Value};

pub fn names(g: &Dag, s: NodeSet) -> Vec<String> {
    g.names(s).into_iter().map(String::from).collect()
}

pub fn dag(g: &Dag) -> Value {
    let arrows: Vec<[&str; 2]> = g
        .arrows()
        .into_iter()
        .map(|(t, h)| [g.name(t), g.name(h)])
        .collect();
    json!({
        "nodes": g.nodes().iter().map(|n| n.as_str()).collect::<Vec<_>>(),
        "arrows": arrows,
    })
}

/// `a->b,c->b`, or `(no arrows)`.
pub fn compact(g: &Dag) -> String {
    let arrows: Vec<String> = g
        .arrows()
        .into_iter()
        .map(|(t, h)| format!("{}->{}", g.name(t), g.name(h)))
        .collect();
    if arrows.is_empty() {
        "(no arrows)".into()
    } else {
        arrows.join(",")
    }
}

pub fn pair(p: &Pair) -> Value {
    json!({ "k": dag(&p.k), "l": dag(&p.l) })
}

pub fn pair_text(p: &Pair) -> String {
    format!("K: {}  L: {}", compact(&p.k), compact(&p.l))
}

pub fn triplet(g: &Dag, t: &DisjointTriplet) -> Value {
    json!({ "a": names(g, t.a), "b": names(g, t.b), "c": names(g, t.c) })
}

pub fn complex(g: &Dag, k: &DependenceComplex) -> Value {
    let ropes: Vec<Value> = k
        .ropes
        .iter()
        .map(|(&c, rope)| {
            json!({
                "collider": g.name(c),
                "path": rope.0.iter().map(|&x| g.name(x)).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "path": k.pi.0.iter().map(|&x| g.name(x)).collect::<Vec<_>>(),
        "path_text": k.pi.display(g),
        "ropes": ropes,
    })
}

pub fn complex_text(g: &Dag, k: &DependenceComplex) -> String {
    let mut out = format!("  active path: {}\n", k.pi.display(g));
    for (&c, rope) in &k.ropes {
        out.push_str(&format!("  rope from {}: {}\n", g.name(c), rope.display(g)));
    }
    out
}

pub fn violation(g: &Dag, v: &Violation) -> Value {
    json!({
        "condition": v.condition.label(),
        "witness": v.witness.iter().map(|&x| g.name(x)).collect::<Vec<_>>(),
    })
}

fn kind(k: OpKind) -> &'static str {
    match k {
        OpKind::Reverse => "reverse",
        OpKind::Add => "add",
    }
}

pub fn sequence(seq: &TransformSequence) -> Value {
    let g = &seq.start;
    let ops: Vec<Value> = seq
        .ops
        .iter()
        .map(
            |op| json!({ "kind": kind(op.kind), "tail": g.name(op.tail), "head": g.name(op.head) }),
        )
        .collect();
    let end = seq.end().ok();
    json!({
        "start": dag(g),
        "ops": ops,
        "end": end.as_ref().map(dag),
        "simple_shape": seq.is_simple_shape(),
    })
}

/// One op per line, in the format `replay` reads.
pub fn sequence_text(seq: &TransformSequence) -> String {
    if seq.ops.is_empty() {
        return "  (no operations)\n".into();
    }
    seq.ops
        .iter()
        .enumerate()
        .map(|(i, op)| format!("  {}. {}\n", i + 1, op.display(&seq.start)))
        .collect()
}
