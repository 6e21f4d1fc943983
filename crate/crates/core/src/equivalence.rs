//! Legal (covered) arrow reversals and Markov equivalence.

use std::collections::{HashMap, VecDeque};

use crate::dag::Dag;
use crate::error::{Error, Result};
use crate::nodeset::NodeSet;

/// Reverses `tail -> head` into `head -> tail`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ReversalOp {
    pub tail: usize,
    pub head: usize,
}

/// `tail -> head` is present and `pa(tail) ∪ {tail} = pa(head)`.
pub fn is_legal_reversal(g: &Dag, tail: usize, head: usize) -> Result<bool> {
    if tail >= g.n() || head >= g.n() {
        return Err(Error::UnknownNode(format!("#{}", tail.max(head))));
    }
    if tail == head {
        return Err(Error::InvalidQuery("reversal endpoints must differ".into()));
    }
    Ok(covered(g, tail, head))
}

pub(crate) fn covered(g: &Dag, tail: usize, head: usize) -> bool {
    g.has_arrow(tail, head) && g.parents(tail).with(tail) == g.parents(head)
}

pub fn apply_reversal(g: &Dag, op: ReversalOp) -> Result<Dag> {
    if !is_legal_reversal(g, op.tail, op.head)? {
        return Err(Error::IllegalReversal(
            g.name(op.tail).into(),
            g.name(op.head).into(),
        ));
    }
    Ok(g.reversed_unchecked(op.tail, op.head))
}

/// Same skeleton and same immoralities.
pub fn equivalent(k: &Dag, l: &Dag) -> Result<bool> {
    k.check_same_nodes(l)?;
    Ok(same_class(k, l))
}

pub(crate) fn same_class(k: &Dag, l: &Dag) -> bool {
    k.adjacency() == l.adjacency() && k.immoralities() == l.immoralities()
}

/// Legal reversals turning `l` into exactly `k`.
///
/// Repeatedly picks the smallest terminal node `t` of `k` among the nodes not
/// yet settled. While `t` still has children in the working graph, the
/// smallest child with no other child of `t` among its ancestors is reversed
/// (that arrow is always covered). Once `t` has no children its parents agree
/// with `k` and it is settled; settled nodes have no children among the rest,
/// so legality checks on the full graph match those on the induced subgraph.
pub fn reversal_sequence(l: &Dag, k: &Dag) -> Result<Vec<ReversalOp>> {
    if !equivalent(k, l)? {
        return Err(Error::NotEquivalent);
    }
    let mut cur = l.clone();
    let mut ops = Vec::new();
    let mut active = l.all_nodes();
    while active.len() > 1 {
        let t = k
            .terminal_nodes_within(active)
            .first()
            .expect("every DAG has a terminal node");
        loop {
            let kids = cur.children(t) & active;
            if kids.is_empty() {
                break;
            }
            let c = kids
                .iter()
                .find(|&c| (cur.ancestors(NodeSet::singleton(c)) & kids) == NodeSet::singleton(c))
                .expect("some child of t has no other child of t as an ancestor");
            if !covered(&cur, t, c) {
                return Err(Error::InternalInvariantBroken(format!(
                    "{} is not covered in an equivalent graph",
                    cur.arrow_label(t, c)
                )));
            }
            cur = cur.reversed_unchecked(t, c);
            ops.push(ReversalOp { tail: t, head: c });
        }
        active.remove(t);
    }
    if &cur != k {
        return Err(Error::InternalInvariantBroken(
            "reversal sequence did not reach the target".into(),
        ));
    }
    Ok(ops)
}

/// Every member of the equivalence class of `g`, `g` first, the rest in
/// breadth-first order of legal reversals.
pub fn equivalence_class(g: &Dag) -> Vec<Dag> {
    class_with_paths(g).into_iter().map(|(d, _)| d).collect()
}

/// Class members paired with a reversal sequence reaching them from `g`.
pub fn class_with_paths(g: &Dag) -> Vec<(Dag, Vec<ReversalOp>)> {
    let mut seen: HashMap<Vec<NodeSet>, usize> = HashMap::new();
    let mut out: Vec<(Dag, Vec<ReversalOp>)> = vec![(g.clone(), Vec::new())];
    seen.insert(g.parent_sets().to_vec(), 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let cur = out[i].0.clone();
        for (t, h) in cur.arrows() {
            if !covered(&cur, t, h) {
                continue;
            }
            let next = cur.reversed_unchecked(t, h);
            if seen.contains_key(next.parent_sets()) {
                continue;
            }
            let mut path = out[i].1.clone();
            path.push(ReversalOp { tail: t, head: h });
            seen.insert(next.parent_sets().to_vec(), out.len());
            queue.push_back(out.len());
            out.push((next, path));
        }
    }
    out
}
