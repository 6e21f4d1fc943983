//! Dependence complexes: an active path plus one rope per collider outside
//! the conditioning set, each rope a directed path from its collider into
//! the conditioning set.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, VecDeque};

use super::{d_connected_sets, path_is_active, Path};
use crate::dag::Dag;
use crate::error::{Error, Result};
use crate::nodeset::NodeSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependenceComplex {
    pub pi: Path,
    /// Keyed by collider; each rope starts at its key.
    pub ropes: BTreeMap<usize, Path>,
}

impl DependenceComplex {
    pub fn endpoints(&self) -> (usize, usize) {
        (self.pi.0[0], *self.pi.0.last().unwrap())
    }

    pub fn arrows(&self, g: &Dag) -> BTreeSet<(usize, usize)> {
        let mut out = BTreeSet::new();
        for w in self.pi.0.windows(2) {
            out.insert(if g.has_arrow(w[0], w[1]) {
                (w[0], w[1])
            } else {
                (w[1], w[0])
            });
        }
        for rope in self.ropes.values() {
            for w in rope.0.windows(2) {
                out.insert((w[0], w[1]));
            }
        }
        out
    }

    pub fn nodes(&self) -> NodeSet {
        self.ropes
            .values()
            .fold(self.pi.node_set(), |acc, r| acc | r.node_set())
    }

    /// Recovers path and ropes from the arrow set alone.
    ///
    /// Nodes touched by three arrows are colliders with a rope; of their
    /// three branches the single outgoing one is the rope.
    pub fn decompose(
        arrows: &BTreeSet<(usize, usize)>,
        a: usize,
        b: usize,
    ) -> Option<DependenceComplex> {
        // Per node: (neighbour, true when the arrow leaves this node).
        let mut incident: BTreeMap<usize, Vec<(usize, bool)>> = BTreeMap::new();
        for &(t, h) in arrows {
            incident.entry(t).or_default().push((h, true));
            incident.entry(h).or_default().push((t, false));
        }
        if a == b || incident.get(&a)?.len() != 1 {
            return None;
        }
        let mut used = 0usize;
        let mut pi = vec![a];
        let mut prev = None;
        let mut cur = a;
        let mut colliders = Vec::new();
        while cur != b {
            let inc = &incident[&cur];
            let next = match inc.len() {
                1 if prev.is_none() => inc[0].0,
                2 => inc.iter().find(|(x, _)| Some(*x) != prev)?.0,
                3 => {
                    let incoming: Vec<usize> = inc
                        .iter()
                        .filter(|(_, out)| !out)
                        .map(|(x, _)| *x)
                        .collect();
                    if incoming.len() != 2 || !incoming.contains(&prev?) {
                        return None;
                    }
                    colliders.push(cur);
                    *incoming.iter().find(|&&x| Some(x) != prev)?
                }
                _ => return None,
            };
            if pi.contains(&next) {
                return None;
            }
            used += 1;
            prev = Some(cur);
            cur = next;
            pi.push(cur);
        }
        if incident[&b].len() != 1 {
            return None;
        }
        let mut ropes = BTreeMap::new();
        for d in colliders {
            let mut rope = vec![d];
            let mut cur = incident[&d].iter().find(|(_, out)| *out)?.0;
            let mut prev = d;
            loop {
                if rope.contains(&cur) || pi.contains(&cur) {
                    return None;
                }
                rope.push(cur);
                used += 1;
                let inc = &incident[&cur];
                match inc.len() {
                    1 => break,
                    2 => {
                        let (nx, out) = *inc.iter().find(|(x, _)| *x != prev)?;
                        if !out {
                            return None;
                        }
                        prev = cur;
                        cur = nx;
                    }
                    _ => return None,
                }
            }
            ropes.insert(d, Path(rope));
        }
        (used == arrows.len()).then_some(DependenceComplex {
            pi: Path(pi),
            ropes,
        })
    }
}

/// Checks every structural requirement of a complex for conditioning set `c`.
pub fn validate_complex(g: &Dag, k: &DependenceComplex, c: NodeSet) -> bool {
    let pi = &k.pi;
    if pi.len() < 2 || pi.validate(g).is_err() {
        return false;
    }
    let (a, b) = k.endpoints();
    if c.contains(a) || c.contains(b) || !path_is_active(g, pi, c) {
        return false;
    }
    let open_colliders = pi.colliders(g) - c;
    let keys: NodeSet = k.ropes.keys().copied().collect();
    if keys != open_colliders || keys.len() != k.ropes.len() {
        return false;
    }
    let on_pi = pi.node_set();
    let mut claimed = NodeSet::EMPTY;
    for (&d, rope) in &k.ropes {
        let r = rope.nodes();
        if r.len() < 2 || r[0] != d || rope.validate(g).is_err() || !rope.is_directed(g) {
            return false;
        }
        let (last, body) = r.split_last().unwrap();
        if !c.contains(*last) || body.iter().any(|&x| c.contains(x)) {
            return false;
        }
        if r[1..].iter().any(|&x| on_pi.contains(x)) {
            return false;
        }
        if !claimed.is_disjoint(rope.node_set()) {
            return false;
        }
        claimed = claimed | rope.node_set();
    }
    DependenceComplex::decompose(&k.arrows(g), a, b).as_ref() == Some(k)
}

/// A complex between `a` and `b` for `c`, or `None` when they are d-separated.
///
/// Looks for an active path with fewest colliders and the shortest rope per
/// collider first; when that route yields a repeated node or colliding ropes,
/// falls back to exhaustive search over active paths and rope assignments.
pub fn find_dependence_complex(
    g: &Dag,
    a: usize,
    b: usize,
    c: NodeSet,
) -> Result<Option<DependenceComplex>> {
    let all = g.all_nodes();
    for x in [a, b] {
        if !all.contains(x) {
            return Err(Error::UnknownNode(format!("#{x}")));
        }
    }
    if !c.is_subset(all) {
        return Err(Error::UnknownNode(format!(
            "#{}",
            (c - all).first().unwrap()
        )));
    }
    if a == b || c.contains(a) || c.contains(b) {
        return Err(Error::InvalidQuery(
            "endpoints must be distinct and outside the conditioning set".into(),
        ));
    }
    if !d_connected_sets(g, NodeSet::singleton(a), NodeSet::singleton(b), c) {
        return Ok(None);
    }
    if let Some(k) = greedy(g, a, b, c) {
        if validate_complex(g, &k, c) {
            return Ok(Some(k));
        }
    }
    match exhaustive(g, a, b, c) {
        Some(k) => Ok(Some(k)),
        None => Err(Error::InternalInvariantBroken(format!(
            "{} and {} are d-connected but no dependence complex was found",
            g.name(a),
            g.name(b)
        ))),
    }
}

fn greedy(g: &Dag, a: usize, b: usize, c: NodeSet) -> Option<DependenceComplex> {
    let pi = fewest_collider_walk(g, a, b, c)?;
    if pi.node_set().len() != pi.len() || !path_is_active(g, &pi, c) {
        return None;
    }
    let mut blocked = pi.node_set();
    let mut ropes = BTreeMap::new();
    for d in (pi.colliders(g) - c).iter() {
        let rope = shortest_rope(g, d, c, blocked.without(d))?;
        blocked = blocked | rope.node_set();
        ropes.insert(d, rope);
    }
    Some(DependenceComplex { pi, ropes })
}

/// Dijkstra over (node, entered-by-arrow-into-node) states; cost is
/// (colliders passed, length).
fn fewest_collider_walk(g: &Dag, a: usize, b: usize, c: NodeSet) -> Option<Path> {
    let active_colliders = g.ancestors(c);
    let n = g.n();
    // state = node * 2 + (entered along an arrow pointing into the node)
    let mut best = vec![(u32::MAX, u32::MAX); 2 * n];
    let mut pred: Vec<Option<usize>> = vec![None; 2 * n];
    let mut heap = BinaryHeap::new();
    best[2 * a] = (0, 0);
    heap.push(Reverse(((0u32, 0u32), 2 * a)));
    let mut done = None;
    while let Some(Reverse((cost, s))) = heap.pop() {
        if cost > best[s] {
            continue;
        }
        let (y, into) = (s / 2, s % 2 == 1);
        if y == b {
            done = Some(s);
            break;
        }
        for z in g.neighbours(y).iter() {
            let collider = into && g.has_arrow(z, y);
            let allowed = if collider {
                active_colliders.contains(y)
            } else {
                !c.contains(y)
            };
            if !allowed {
                continue;
            }
            let t = 2 * z + usize::from(g.has_arrow(y, z));
            let next = (cost.0 + u32::from(collider), cost.1 + 1);
            if next < best[t] {
                best[t] = next;
                pred[t] = Some(s);
                heap.push(Reverse((next, t)));
            }
        }
    }
    let mut s = done?;
    let mut nodes = vec![s / 2];
    while let Some(p) = pred[s] {
        nodes.push(p / 2);
        s = p;
    }
    nodes.reverse();
    Some(Path(nodes))
}

/// Shortest directed path from `d` to the first node of `c`, avoiding `blocked`.
fn shortest_rope(g: &Dag, d: usize, c: NodeSet, blocked: NodeSet) -> Option<Path> {
    let mut pred = vec![usize::MAX; g.n()];
    let mut seen = blocked.with(d);
    let mut queue = VecDeque::from([d]);
    while let Some(x) = queue.pop_front() {
        for y in (g.children(x) - seen).iter() {
            seen.insert(y);
            pred[y] = x;
            if c.contains(y) {
                let mut rope = vec![y];
                let mut cur = y;
                while cur != d {
                    cur = pred[cur];
                    rope.push(cur);
                }
                rope.reverse();
                return Some(Path(rope));
            }
            queue.push_back(y);
        }
    }
    None
}

fn exhaustive(g: &Dag, a: usize, b: usize, c: NodeSet) -> Option<DependenceComplex> {
    let mut paths = Vec::new();
    simple_paths(g, b, &mut vec![a], &mut paths);
    let mut active: Vec<Path> = paths
        .into_iter()
        .map(Path)
        .filter(|p| path_is_active(g, p, c))
        .collect();
    active.sort_by_key(|p| (p.colliders(g).len(), p.len(), p.0.clone()));
    for pi in active {
        let colliders: Vec<usize> = (pi.colliders(g) - c).iter().collect();
        let mut ropes = BTreeMap::new();
        if assign_ropes(g, c, &colliders, pi.node_set(), &mut ropes) {
            return Some(DependenceComplex { pi, ropes });
        }
    }
    None
}

fn simple_paths(g: &Dag, to: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let last = *cur.last().unwrap();
    if last == to {
        out.push(cur.clone());
        return;
    }
    for nb in g.neighbours(last).iter() {
        if !cur.contains(&nb) {
            cur.push(nb);
            simple_paths(g, to, cur, out);
            cur.pop();
        }
    }
}

fn assign_ropes(
    g: &Dag,
    c: NodeSet,
    colliders: &[usize],
    blocked: NodeSet,
    ropes: &mut BTreeMap<usize, Path>,
) -> bool {
    let Some((&d, rest)) = colliders.split_first() else {
        return true;
    };
    let mut candidates = Vec::new();
    directed_to_c(g, c, blocked, &mut vec![d], &mut candidates);
    candidates.sort_by_key(|r| (r.len(), r.clone()));
    for rope in candidates {
        let rope = Path(rope);
        let used = rope.node_set();
        ropes.insert(d, rope);
        if assign_ropes(g, c, rest, blocked | used, ropes) {
            return true;
        }
        ropes.remove(&d);
    }
    false
}

fn directed_to_c(
    g: &Dag,
    c: NodeSet,
    blocked: NodeSet,
    cur: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    let last = *cur.last().unwrap();
    for y in (g.children(last) - blocked).iter() {
        if cur.contains(&y) {
            continue;
        }
        cur.push(y);
        if c.contains(y) {
            out.push(cur.clone());
        } else {
            directed_to_c(g, c, blocked, cur, out);
        }
        cur.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn open_chain_needs_no_ropes() {
        let g = Dag::new(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap();
        let k = find_dependence_complex(&g, 0, 2, NodeSet::EMPTY)
            .unwrap()
            .unwrap();
        assert_eq!(k.pi, Path(vec![0, 1, 2]));
        assert!(k.ropes.is_empty());
        assert!(validate_complex(&g, &k, NodeSet::EMPTY));
        assert_eq!(
            find_dependence_complex(&g, 0, 2, NodeSet::singleton(1)).unwrap(),
            None
        );
    }

    #[test]
    fn collider_gets_a_rope() {
        let g = Dag::new(&["a", "b", "c", "d"], &[("a", "d"), ("b", "d"), ("d", "c")]).unwrap();
        let c = g.node_set(&["c"]).unwrap();
        let (a, b, d, cc) = (0, 1, 3, 2);
        let k = find_dependence_complex(&g, a, b, c).unwrap().unwrap();
        assert_eq!(k.pi, Path(vec![a, d, b]));
        assert_eq!(k.ropes.get(&d), Some(&Path(vec![d, cc])));
        assert!(validate_complex(&g, &k, c));
    }

    #[test]
    fn invalid_complexes_are_rejected() {
        let g = Dag::new(
            &["a", "b", "c", "d", "e"],
            &[("a", "d"), ("b", "d"), ("d", "e"), ("e", "c"), ("b", "e")],
        )
        .unwrap();
        let idx = |s| g.index_of(s).unwrap();
        let c = g.node_set(&["c"]).unwrap();
        let good = DependenceComplex {
            pi: Path(vec![idx("a"), idx("d"), idx("b")]),
            ropes: BTreeMap::from([(idx("d"), Path(vec![idx("d"), idx("e"), idx("c")]))]),
        };
        assert!(validate_complex(&g, &good, c));
        // The rope d -> b re-enters pi.
        let crossing = DependenceComplex {
            pi: Path(vec![idx("a"), idx("d"), idx("b")]),
            ropes: BTreeMap::from([(idx("d"), Path(vec![idx("d"), idx("b")]))]),
        };
        assert!(!validate_complex(&g, &crossing, c));
        let blocked = DependenceComplex {
            pi: Path(vec![idx("a"), idx("d"), idx("b")]),
            ropes: BTreeMap::new(),
        };
        assert!(!validate_complex(&g, &blocked, NodeSet::EMPTY));
        assert!(!validate_complex(&g, &blocked, c));
    }

    #[test]
    fn query_errors() {
        let g = Dag::new(&["a", "b"], &[("a", "b")]).unwrap();
        assert!(matches!(
            find_dependence_complex(&g, 0, 0, NodeSet::EMPTY),
            Err(Error::InvalidQuery(_))
        ));
        assert!(matches!(
            find_dependence_complex(&g, 0, 5, NodeSet::EMPTY),
            Err(Error::UnknownNode(_))
        ));
    }

    #[test]
    fn decomposition_round_trips() {
        let g = Dag::new(
            &["a", "b", "c", "d", "e", "f"],
            &[
                ("a", "d"),
                ("e", "d"),
                ("e", "f"),
                ("b", "f"),
                ("d", "c"),
                ("f", "c"),
            ],
        )
        .unwrap();
        let c = g.node_set(&["c"]).unwrap();
        let k = find_dependence_complex(&g, 0, 1, c).unwrap().unwrap();
        assert!(validate_complex(&g, &k, c));
        let (a, b) = k.endpoints();
        assert_eq!(DependenceComplex::decompose(&k.arrows(&g), a, b), Some(k));
    }
}
