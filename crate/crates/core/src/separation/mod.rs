//! d-separation, the moralization criterion, dependence complexes and
//! composite dependence statements.

mod complex;
pub(crate) mod composite;

pub use complex::{find_dependence_complex, validate_complex, DependenceComplex};
pub use composite::{
    composite_holds, edge_iff_star_dependent, nonadjacent_separator, plus_w_dependent,
    CompositeStatement,
};

use std::cmp::Ordering;

use crate::dag::Dag;
use crate::error::{Error, Result};
use crate::nodeset::NodeSet;

/// `⟨A, B | C⟩` with `A`, `B` nonempty and all three pairwise disjoint.
///
/// The canonical form puts the lexicographically smaller of `A`, `B` first,
/// so `⟨A,B|C⟩` and `⟨B,A|C⟩` compare equal after [`canonical`](Self::canonical).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DisjointTriplet {
    pub a: NodeSet,
    pub b: NodeSet,
    pub c: NodeSet,
}

impl DisjointTriplet {
    pub fn new(a: NodeSet, b: NodeSet, c: NodeSet) -> Result<Self> {
        if a.is_empty()
            || b.is_empty()
            || !a.is_disjoint(b)
            || !a.is_disjoint(c)
            || !b.is_disjoint(c)
        {
            return Err(Error::TripletNotDisjoint);
        }
        Ok(DisjointTriplet { a, b, c }.canonical())
    }

    pub fn canonical(self) -> Self {
        if self.b.lex_cmp(self.a) == Ordering::Less {
            DisjointTriplet {
                a: self.b,
                b: self.a,
                c: self.c,
            }
        } else {
            self
        }
    }

    pub fn swapped(self) -> Self {
        DisjointTriplet {
            a: self.b,
            b: self.a,
            c: self.c,
        }
    }

    pub fn nodes(self) -> NodeSet {
        self.a | self.b | self.c
    }

    /// Renders as `a,b _||_ c | d` with node names from `g`; the `| ...`
    /// part is omitted when `C` is empty.
    pub fn display(&self, g: &Dag) -> String {
        let mut out = format!(
            "{} _||_ {}",
            g.names(self.a).join(","),
            g.names(self.b).join(",")
        );
        if !self.c.is_empty() {
            out.push_str(&format!(" | {}", g.names(self.c).join(",")));
        }
        out
    }
}

/// Nodes joined to `from` by a trail that is active with respect to `cond`.
///
/// Reachability over (node, direction of entry) states: entering a node from
/// a parent may continue to children when the node is outside `cond`, and
/// may bounce back up to other parents when the node has a descendant in
/// `cond`. Entering from a child continues anywhere unless the node is in
/// `cond`. `from` itself is included.
pub fn active_reach(g: &Dag, from: NodeSet, cond: NodeSet) -> NodeSet {
    let active_colliders = g.ancestors(cond);
    // Visited states split by entry direction.
    let mut up = NodeSet::EMPTY;
    let mut down = NodeSet::EMPTY;
    let mut reached = NodeSet::EMPTY;
    let mut stack: Vec<(usize, bool)> = from.iter().map(|x| (x, true)).collect();
    while let Some((y, going_up)) = stack.pop() {
        let seen = if going_up { &mut up } else { &mut down };
        if seen.contains(y) {
            continue;
        }
        seen.insert(y);
        if !cond.contains(y) {
            reached.insert(y);
        }
        if going_up {
            if !cond.contains(y) {
                stack.extend(g.parents(y).iter().map(|p| (p, true)));
                stack.extend(g.children(y).iter().map(|c| (c, false)));
            }
        } else {
            if !cond.contains(y) {
                stack.extend(g.children(y).iter().map(|c| (c, false)));
            }
            if active_colliders.contains(y) {
                stack.extend(g.parents(y).iter().map(|p| (p, true)));
            }
        }
    }
    reached
}

/// Whether some active path w.r.t. `c` joins a node of `a` to a node of `b`.
pub fn d_connected_sets(g: &Dag, a: NodeSet, b: NodeSet, c: NodeSet) -> bool {
    !(active_reach(g, a, c) & b).is_empty()
}

pub fn d_connected(g: &Dag, t: &DisjointTriplet) -> Result<bool> {
    check_triplet(g, t)?;
    Ok(d_connected_sets(g, t.a, t.b, t.c))
}

pub fn d_separated(g: &Dag, t: &DisjointTriplet) -> Result<bool> {
    d_connected(g, t).map(|c| !c)
}

/// Separation of `a` and `b` by `c` in the moral graph of the ancestral set
/// of `a ∪ b ∪ c`.
pub fn moral_separated_sets(g: &Dag, a: NodeSet, b: NodeSet, c: NodeSet) -> bool {
    let keep = g.ancestors(a | b | c);
    let mut moral = vec![NodeSet::EMPTY; g.n()];
    for v in keep.iter() {
        let pa = g.parents(v);
        for p in pa.iter() {
            moral[v].insert(p);
            moral[p].insert(v);
            // Marry parents.
            moral[p] = moral[p] | pa.without(p);
        }
    }
    let open = keep - c;
    let mut seen = a & open;
    let mut frontier = seen;
    while !frontier.is_empty() {
        let mut next = NodeSet::EMPTY;
        for x in frontier.iter() {
            next = next | (moral[x] & open);
        }
        frontier = next - seen;
        seen = seen | next;
    }
    seen.is_disjoint(b)
}

pub fn moral_separated(g: &Dag, t: &DisjointTriplet) -> Result<bool> {
    check_triplet(g, t)?;
    Ok(moral_separated_sets(g, t.a, t.b, t.c))
}

fn check_triplet(g: &Dag, t: &DisjointTriplet) -> Result<()> {
    if let Some(bad) = (t.nodes() - g.all_nodes()).first() {
        return Err(Error::UnknownNode(format!("#{bad}")));
    }
    if t.a.is_empty() || t.b.is_empty() || !t.a.is_disjoint(t.b) || !t.c.is_disjoint(t.a | t.b) {
        return Err(Error::TripletNotDisjoint);
    }
    Ok(())
}

/// A node sequence in a host graph; see [`Path::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path(pub Vec<usize>);

impl Path {
    pub fn nodes(&self) -> &[usize] {
        &self.0
    }

    pub fn node_set(&self) -> NodeSet {
        self.0.iter().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Checks the sequence is nonempty, repetition-free and that consecutive
    /// nodes are adjacent in `g`.
    pub fn validate(&self, g: &Dag) -> Result<()> {
        if self.0.is_empty() {
            return Err(Error::InvalidPath("empty".into()));
        }
        if let Some(&bad) = self.0.iter().find(|&&i| i >= g.n()) {
            return Err(Error::InvalidPath(format!("node #{bad} not in graph")));
        }
        if self.node_set().len() != self.0.len() {
            return Err(Error::InvalidPath("repeated node".into()));
        }
        if let Some(w) = self.0.windows(2).find(|w| !g.adjacent(w[0], w[1])) {
            return Err(Error::InvalidPath(format!(
                "{} and {} are not adjacent",
                g.name(w[0]),
                g.name(w[1])
            )));
        }
        Ok(())
    }

    /// Interior nodes with both path arrows pointing in.
    pub fn colliders(&self, g: &Dag) -> NodeSet {
        self.0
            .windows(3)
            .filter(|w| g.has_arrow(w[0], w[1]) && g.has_arrow(w[2], w[1]))
            .map(|w| w[1])
            .collect()
    }

    pub fn non_colliders(&self, g: &Dag) -> NodeSet {
        self.node_set() - self.colliders(g)
    }

    pub fn is_open(&self, g: &Dag) -> bool {
        self.colliders(g).is_empty()
    }

    pub fn is_directed(&self, g: &Dag) -> bool {
        self.0.windows(2).all(|w| g.has_arrow(w[0], w[1]))
    }

    pub fn display(&self, g: &Dag) -> String {
        let mut out = String::new();
        for (k, &x) in self.0.iter().enumerate() {
            if k > 0 {
                out.push_str(if g.has_arrow(self.0[k - 1], x) {
                    " -> "
                } else {
                    " <- "
                });
            }
            out.push_str(g.name(x));
        }
        out
    }
}

/// Non-colliders outside `c`, colliders with a descendant in `c`.
pub fn is_active_path(g: &Dag, p: &Path, c: NodeSet) -> Result<bool> {
    p.validate(g)?;
    Ok(path_is_active(g, p, c))
}

pub(crate) fn path_is_active(g: &Dag, p: &Path, c: NodeSet) -> bool {
    let colliders = p.colliders(g);
    if !(p.node_set() - colliders).is_disjoint(c) {
        return false;
    }
    colliders
        .iter()
        .all(|d| !g.descendants(NodeSet::singleton(d)).is_disjoint(c))
}

#[cfg(test)]
pub(crate) mod brute {
    //! Path-enumeration d-separation, independent of both production routes.
    use super::*;

    pub fn all_paths(g: &Dag, from: usize, to: usize) -> Vec<Vec<usize>> {
        fn go(g: &Dag, to: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            let last = *cur.last().unwrap();
            if last == to {
                out.push(cur.clone());
                return;
            }
            for nb in 0..g.n() {
                if g.adjacent(last, nb) && !cur.contains(&nb) {
                    cur.push(nb);
                    go(g, to, cur, out);
                    cur.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(g, to, &mut vec![from], &mut out);
        out
    }

    pub fn connected(g: &Dag, a: NodeSet, b: NodeSet, c: NodeSet) -> bool {
        a.iter().any(|x| {
            b.iter().any(|y| {
                all_paths(g, x, y).into_iter().any(|p| {
                    let interior = &p[1..p.len() - 1];
                    !c.contains(x)
                        && !c.contains(y)
                        && interior.iter().enumerate().all(|(k, &w)| {
                            let prev = p[k];
                            let next = p[k + 2];
                            let collider = g.has_arrow(prev, w) && g.has_arrow(next, w);
                            if collider {
                                let mut desc = vec![w];
                                let mut i = 0;
                                while i < desc.len() {
                                    let d = desc[i];
                                    for ch in g.children(d).iter() {
                                        if !desc.contains(&ch) {
                                            desc.push(ch);
                                        }
                                    }
                                    i += 1;
                                }
                                desc.iter().any(|&d| c.contains(d))
                            } else {
                                !c.contains(w)
                            }
                        })
                })
            })
        })
    }
}
