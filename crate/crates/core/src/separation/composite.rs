//! Composite dependence statements `u ⊥̸ v | +T −S`: dependence given every
//! conditioning set that contains `T` and avoids `S`.

use super::d_connected_sets;
use crate::dag::Dag;
use crate::error::{Error, Result};
use crate::nodeset::NodeSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CompositeStatement {
    pub u: usize,
    pub v: usize,
    /// Always conditioned on.
    pub t: NodeSet,
    /// Never conditioned on.
    pub s: NodeSet,
}

impl CompositeStatement {
    pub fn new(u: usize, v: usize, t: NodeSet, s: NodeSet) -> Result<Self> {
        let uv = NodeSet::singleton(u).with(v);
        if u == v || !t.is_disjoint(uv) || !s.is_disjoint(uv) || !t.is_disjoint(s) {
            return Err(Error::InvalidQuery(
                "composite statement needs u != v and disjoint T, S avoiding u, v".into(),
            ));
        }
        Ok(CompositeStatement { u, v, t, s })
    }

    /// The `⋆` form: dependence given every set.
    pub fn star(u: usize, v: usize) -> Result<Self> {
        Self::new(u, v, NodeSet::EMPTY, NodeSet::EMPTY)
    }
}

/// Exhaustive check over every `W` with `T ⊆ W ⊆ N ∖ ({u,v} ∪ S)`.
pub fn composite_holds(g: &Dag, s: &CompositeStatement) -> Result<bool> {
    let all = g.all_nodes();
    let mentioned = s.t | s.s | NodeSet::singleton(s.u).with(s.v);
    if let Some(bad) = (mentioned - all).first() {
        return Err(Error::UnknownNode(format!("#{bad}")));
    }
    let free = all - mentioned;
    let (u, v) = (NodeSet::singleton(s.u), NodeSet::singleton(s.v));
    Ok(free
        .subsets()
        .all(|extra| d_connected_sets(g, u, v, s.t | extra)))
}

fn check_nodes(g: &Dag, nodes: &[usize]) -> Result<()> {
    match nodes.iter().find(|&&x| x >= g.n()) {
        Some(bad) => Err(Error::UnknownNode(format!("#{bad}"))),
        None => Ok(()),
    }
}

/// Adjacency, which is exactly `u ⊥̸ v | ⋆`.
pub fn edge_iff_star_dependent(g: &Dag, u: usize, v: usize) -> Result<bool> {
    check_nodes(g, &[u, v])?;
    if u == v {
        return Err(Error::InvalidQuery("u and v must differ".into()));
    }
    Ok(g.adjacent(u, v))
}

/// Graphical form of `u ⊥̸ v | +w`: adjacent, or a common child that is an
/// ancestor of `w`.
pub fn plus_w_dependent(g: &Dag, u: usize, v: usize, w: usize) -> Result<bool> {
    check_nodes(g, &[u, v, w])?;
    if u == v || u == w || v == w {
        return Err(Error::InvalidQuery("u, v, w must be distinct".into()));
    }
    Ok(plus_w(g, u, v, w))
}

pub(crate) fn plus_w(g: &Dag, u: usize, v: usize, w: usize) -> bool {
    g.adjacent(u, v)
        || !(g.children(u) & g.children(v) & g.ancestors(NodeSet::singleton(w))).is_empty()
}

/// `pa(u) ∪ pa(v)`, which separates any non-adjacent pair.
pub fn nonadjacent_separator(g: &Dag, u: usize, v: usize) -> Result<NodeSet> {
    check_nodes(g, &[u, v])?;
    if u == v {
        return Err(Error::InvalidQuery("u and v must differ".into()));
    }
    if g.adjacent(u, v) {
        return Err(Error::NodesAdjacent(g.name(u).into(), g.name(v).into()));
    }
    Ok((g.parents(u) | g.parents(v)).without(u).without(v))
}
