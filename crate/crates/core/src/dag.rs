//! Directed acyclic graphs and their structural queries.
//!
//! Nodes are identified by name and stored sorted, so node `i` is the `i`-th
//! smallest name. Every set-valued result is a [`NodeSet`] over those indices.

use std::borrow::Borrow;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::nodeset::{NodeSet, MAX_NODES};

/// A node name drawn from `[A-Za-z0-9_]+`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(String);

impl NodeId {
    pub fn new(name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        let valid =
            !name.is_empty() && name.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_');
        if valid {
            Ok(NodeId(name))
        } else {
            Err(Error::InvalidNodeName(name))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl Borrow<str> for NodeId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.0, f)
    }
}

/// Immutable DAG over a sorted node list.
///
/// Graphs over the same node names share index assignments, so node sets and
/// arrows computed on one graph can be used directly on another.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dag {
    nodes: Arc<[NodeId]>,
    parents: Vec<NodeSet>,
    children: Vec<NodeSet>,
}

/// Undirected underlying graph; lines are stored as `(i, j)` with `i < j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Skeleton {
    pub nodes: Arc<[NodeId]>,
    pub lines: BTreeSet<(usize, usize)>,
}

/// `u -> w <- v` with `u`, `v` non-adjacent, stored with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Immorality {
    pub u: usize,
    pub v: usize,
    pub w: usize,
}

impl Immorality {
    pub fn new(u: usize, v: usize, w: usize) -> Self {
        let (u, v) = if u < v { (u, v) } else { (v, u) };
        Immorality { u, v, w }
    }
}

/// Validates a list of names into the sorted node list graphs are built over.
pub fn node_list<S: AsRef<str>>(names: &[S]) -> Result<Arc<[NodeId]>> {
    let mut ids = names
        .iter()
        .map(|s| NodeId::new(s.as_ref()))
        .collect::<Result<Vec<_>>>()?;
    ids.sort();
    if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateNode(w[0].to_string()));
    }
    if ids.is_empty() {
        return Err(Error::EmptyNodeSet);
    }
    if ids.len() > MAX_NODES {
        return Err(Error::TooManyNodes(ids.len()));
    }
    Ok(ids.into())
}

impl Dag {
    /// Builds and validates a DAG from node names and `(tail, head)` arrows.
    ///
    /// Repeated identical arrows collapse into one.
    pub fn new<S: AsRef<str>, T: AsRef<str>>(nodes: &[S], arrows: &[(T, T)]) -> Result<Self> {
        let nodes = node_list(nodes)?;
        let index = |name: &str| -> Result<usize> {
            nodes
                .binary_search_by(|n| n.as_str().cmp(name))
                .map_err(|_| Error::UnknownNode(name.to_string()))
        };
        let mut parents = vec![NodeSet::EMPTY; nodes.len()];
        for (t, h) in arrows {
            let (t, h) = (index(t.as_ref())?, index(h.as_ref())?);
            if t == h {
                return Err(Error::SelfLoop(nodes[t].to_string()));
            }
            if parents[t].contains(h) {
                return Err(Error::DoubleArrow(
                    nodes[h].to_string(),
                    nodes[t].to_string(),
                ));
            }
            parents[h].insert(t);
        }
        Dag::from_parents(nodes, parents)
    }

    /// Graph with no arrows.
    pub fn empty(nodes: Arc<[NodeId]>) -> Self {
        let n = nodes.len();
        Dag {
            nodes,
            parents: vec![NodeSet::EMPTY; n],
            children: vec![NodeSet::EMPTY; n],
        }
    }

    /// Builds from per-node parent sets, checking every structural invariant.
    pub fn from_parents(nodes: Arc<[NodeId]>, parents: Vec<NodeSet>) -> Result<Self> {
        let n = nodes.len();
        assert_eq!(parents.len(), n, "one parent set per node");
        let all = NodeSet::full(n);
        let mut children = vec![NodeSet::EMPTY; n];
        for (h, pa) in parents.iter().enumerate() {
            if let Some(bad) = (*pa - all).first() {
                return Err(Error::UnknownNode(format!("#{bad}")));
            }
            if pa.contains(h) {
                return Err(Error::SelfLoop(nodes[h].to_string()));
            }
            for t in pa.iter() {
                if parents[t].contains(h) {
                    return Err(Error::DoubleArrow(
                        nodes[t].to_string(),
                        nodes[h].to_string(),
                    ));
                }
                children[t].insert(h);
            }
        }
        let dag = Dag {
            nodes,
            parents,
            children,
        };
        if let Some(cycle) = dag.find_cycle() {
            return Err(Error::CycleDetected(
                cycle
                    .into_iter()
                    .map(|i| dag.nodes[i].to_string())
                    .collect(),
            ));
        }
        Ok(dag)
    }

    /// Peels terminal nodes; whatever survives contains a cycle, which is
    /// traced by following the smallest surviving child.
    fn find_cycle(&self) -> Option<Vec<usize>> {
        let mut alive = NodeSet::full(self.n());
        loop {
            let terminal: NodeSet = alive
                .iter()
                .filter(|&i| (self.children[i] & alive).is_empty())
                .collect();
            if terminal.is_empty() {
                break;
            }
            alive = alive - terminal;
        }
        let start = alive.first()?;
        let mut trail = vec![start];
        let mut cur = start;
        loop {
            cur = (self.children[cur] & alive)
                .first()
                .expect("surviving nodes keep a surviving child");
            if let Some(pos) = trail.iter().position(|&x| x == cur) {
                let mut cycle = trail.split_off(pos);
                cycle.push(cur);
                return Some(cycle);
            }
            trail.push(cur);
        }
    }

    pub fn n(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &Arc<[NodeId]> {
        &self.nodes
    }

    pub fn all_nodes(&self) -> NodeSet {
        NodeSet::full(self.n())
    }

    pub fn name(&self, i: usize) -> &str {
        self.nodes[i].as_str()
    }

    pub fn same_nodes(&self, other: &Dag) -> bool {
        Arc::ptr_eq(&self.nodes, &other.nodes) || self.nodes == other.nodes
    }

    pub(crate) fn check_same_nodes(&self, other: &Dag) -> Result<()> {
        if self.same_nodes(other) {
            Ok(())
        } else {
            Err(Error::NodeSetMismatch)
        }
    }

    /// Index of a node name.
    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.nodes
            .binary_search_by(|n| n.as_str().cmp(name))
            .map_err(|_| Error::UnknownNode(name.to_string()))
    }

    /// Resolves a collection of names into a node set.
    pub fn node_set<S: AsRef<str>>(&self, names: &[S]) -> Result<NodeSet> {
        names
            .iter()
            .map(|s| self.index_of(s.as_ref()))
            .collect::<Result<NodeSet>>()
    }

    pub fn names(&self, set: NodeSet) -> Vec<&str> {
        set.iter().map(|i| self.name(i)).collect()
    }

    pub fn parents(&self, u: usize) -> NodeSet {
        self.parents[u]
    }

    pub fn children(&self, u: usize) -> NodeSet {
        self.children[u]
    }

    pub fn neighbours(&self, u: usize) -> NodeSet {
        self.parents[u] | self.children[u]
    }

    pub fn parent_sets(&self) -> &[NodeSet] {
        &self.parents
    }

    pub fn has_arrow(&self, tail: usize, head: usize) -> bool {
        self.parents[head].contains(tail)
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.neighbours(u).contains(v)
    }

    /// Arrows `(tail, head)` in increasing order.
    pub fn arrows(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<_> = (0..self.n())
            .flat_map(|h| self.parents[h].iter().map(move |t| (t, h)))
            .collect();
        out.sort_unstable();
        out
    }

    pub fn arrow_count(&self) -> usize {
        self.parents.iter().map(|p| p.len()).sum()
    }

    /// `|E(G)|`, which equals the arrow count for a DAG.
    pub fn edge_count(&self) -> usize {
        self.arrow_count()
    }

    /// `an_G(set)`, reflexive.
    pub fn ancestors(&self, set: NodeSet) -> NodeSet {
        closure(set, &self.parents)
    }

    /// `ds_G(set)`, reflexive.
    pub fn descendants(&self, set: NodeSet) -> NodeSet {
        closure(set, &self.children)
    }

    /// Whether a directed path `from ~> to` exists (reflexively true).
    pub fn has_directed_path(&self, from: usize, to: usize) -> bool {
        self.descendants(NodeSet::singleton(from)).contains(to)
    }

    /// Causal ordering; among available nodes the smallest name goes first.
    pub fn causal_ordering(&self) -> Vec<usize> {
        let mut placed = NodeSet::EMPTY;
        let mut order = Vec::with_capacity(self.n());
        while order.len() < self.n() {
            let next = (self.all_nodes() - placed)
                .iter()
                .find(|&i| self.parents[i].is_subset(placed))
                .expect("acyclic graphs always have a source among unplaced nodes");
            placed.insert(next);
            order.push(next);
        }
        order
    }

    pub fn terminal_nodes(&self) -> NodeSet {
        (0..self.n())
            .filter(|&i| self.children[i].is_empty())
            .collect()
    }

    /// Terminal nodes of the subgraph induced by `within`.
    pub fn terminal_nodes_within(&self, within: NodeSet) -> NodeSet {
        within
            .iter()
            .filter(|&i| (self.children[i] & within).is_empty())
            .collect()
    }

    pub fn is_immorality(&self, u: usize, v: usize, w: usize) -> bool {
        u != v && self.has_arrow(u, w) && self.has_arrow(v, w) && !self.adjacent(u, v)
    }

    pub fn immoralities(&self) -> BTreeSet<Immorality> {
        let mut out = BTreeSet::new();
        for w in 0..self.n() {
            let pa: Vec<usize> = self.parents[w].iter().collect();
            for (i, &u) in pa.iter().enumerate() {
                for &v in &pa[i + 1..] {
                    if !self.adjacent(u, v) {
                        out.insert(Immorality::new(u, v, w));
                    }
                }
            }
        }
        out
    }

    pub fn skeleton(&self) -> Skeleton {
        Skeleton {
            nodes: self.nodes.clone(),
            lines: self
                .arrows()
                .into_iter()
                .map(|(t, h)| (t.min(h), t.max(h)))
                .collect(),
        }
    }

    /// Per-node adjacency sets; two DAGs share a skeleton iff these match.
    pub fn adjacency(&self) -> Vec<NodeSet> {
        (0..self.n()).map(|i| self.neighbours(i)).collect()
    }

    /// Subgraph induced by `keep`, re-indexed over the kept names.
    pub fn induced_subgraph(&self, keep: NodeSet) -> Result<Dag> {
        if keep.is_empty() {
            return Err(Error::EmptyNodeSet);
        }
        if !keep.is_subset(self.all_nodes()) {
            return Err(Error::UnknownNode(format!(
                "#{}",
                (keep - self.all_nodes()).first().unwrap()
            )));
        }
        let kept: Vec<usize> = keep.iter().collect();
        let nodes: Arc<[NodeId]> = kept.iter().map(|&i| self.nodes[i].clone()).collect();
        let remap = |set: NodeSet| -> NodeSet {
            kept.iter()
                .enumerate()
                .filter(|(_, &old)| set.contains(old))
                .map(|(new, _)| new)
                .collect()
        };
        let parents = kept.iter().map(|&i| remap(self.parents[i])).collect();
        Dag::from_parents(nodes, parents)
    }

    /// Graph with `tail -> head` replaced by `head -> tail`; may be cyclic.
    pub(crate) fn reversed_unchecked(&self, tail: usize, head: usize) -> Dag {
        let mut g = self.clone();
        g.parents[head].remove(tail);
        g.children[tail].remove(head);
        g.parents[tail].insert(head);
        g.children[head].insert(tail);
        g
    }

    pub(crate) fn added_unchecked(&self, tail: usize, head: usize) -> Dag {
        let mut g = self.clone();
        g.parents[head].insert(tail);
        g.children[tail].insert(head);
        g
    }

    pub fn arrow_label(&self, tail: usize, head: usize) -> String {
        format!("{} -> {}", self.name(tail), self.name(head))
    }
}

fn closure(mut set: NodeSet, step: &[NodeSet]) -> NodeSet {
    let mut frontier = set;
    while !frontier.is_empty() {
        let mut next = NodeSet::EMPTY;
        for i in frontier.iter() {
            next = next | step[i];
        }
        frontier = next - set;
        set = set | next;
    }
    set
}

impl fmt::Debug for Dag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dag {{ nodes: {:?}, arrows: [", self.nodes)?;
        for (k, (t, h)) in self.arrows().into_iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}", self.arrow_label(t, h))?;
        }
        f.write_str("] }")
    }
}
