//! Transformation sequences of legal reversals and legal arrow additions.
//!
//! Each step of such a sequence can only shrink the independence model, so a
//! sequence from `L` to `K` certifies `I(K) ⊆ I(L)`.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::dag::Dag;
use crate::equivalence::{class_with_paths, covered, reversal_sequence, same_class};
use crate::error::{Error, Result};
use crate::inclusion::{conditions_hold, includes, ConditionSet};
use crate::nodeset::NodeSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OpKind {
    Reverse,
    Add,
}

/// `Reverse` turns `tail -> head` into `head -> tail`; `Add` inserts
/// `tail -> head`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TransformOp {
    pub kind: OpKind,
    pub tail: usize,
    pub head: usize,
}

impl TransformOp {
    pub fn reverse(tail: usize, head: usize) -> Self {
        TransformOp {
            kind: OpKind::Reverse,
            tail,
            head,
        }
    }

    pub fn add(tail: usize, head: usize) -> Self {
        TransformOp {
            kind: OpKind::Add,
            tail,
            head,
        }
    }

    pub fn display(&self, g: &Dag) -> String {
        let verb = match self.kind {
            OpKind::Reverse => "reverse",
            OpKind::Add => "add",
        };
        format!("{verb} {}", g.arrow_label(self.tail, self.head))
    }

    /// Applies the op, failing if it is not legal on `g`.
    pub fn apply(&self, g: &Dag) -> Result<Dag> {
        if self.tail >= g.n() || self.head >= g.n() {
            return Err(Error::UnknownNode(format!("#{}", self.tail.max(self.head))));
        }
        match self.kind {
            OpKind::Reverse => {
                if self.tail == self.head || !covered(g, self.tail, self.head) {
                    return Err(Error::IllegalReversal(
                        g.name(self.tail).into(),
                        g.name(self.head).into(),
                    ));
                }
                Ok(g.reversed_unchecked(self.tail, self.head))
            }
            OpKind::Add => apply_add(g, *self),
        }
    }
}

impl fmt::Display for OpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OpKind::Reverse => "reverse",
            OpKind::Add => "add",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformSequence {
    pub start: Dag,
    pub ops: Vec<TransformOp>,
}

impl TransformSequence {
    /// Every graph along the sequence, `start` first.
    pub fn replay(&self) -> Result<Vec<Dag>> {
        let mut graphs = vec![self.start.clone()];
        for op in &self.ops {
            let next = op.apply(graphs.last().unwrap())?;
            graphs.push(next);
        }
        Ok(graphs)
    }

    pub fn end(&self) -> Result<Dag> {
        Ok(self.replay()?.pop().unwrap())
    }

    pub fn add_count(&self) -> usize {
        self.ops.iter().filter(|op| op.kind == OpKind::Add).count()
    }

    /// Reversals, then additions, then reversals.
    pub fn is_simple_shape(&self) -> bool {
        let kinds: Vec<OpKind> = self.ops.iter().map(|op| op.kind).collect();
        let first_add = kinds.iter().position(|&k| k == OpKind::Add);
        let last_add = kinds.iter().rposition(|&k| k == OpKind::Add);
        match (first_add, last_add) {
            (Some(f), Some(l)) => kinds[f..=l].iter().all(|&k| k == OpKind::Add),
            _ => true,
        }
    }

    fn push_reversals(&mut self, from: &Dag, to: &Dag) -> Result<()> {
        let revs = reversal_sequence(from, to)?;
        self.ops.extend(
            revs.into_iter()
                .map(|r| TransformOp::reverse(r.tail, r.head)),
        );
        Ok(())
    }
}

/// The arrow is absent, the pair non-adjacent and no directed path runs
/// from `head` back to `tail`.
pub fn is_legal_add(g: &Dag, tail: usize, head: usize) -> Result<bool> {
    if tail >= g.n() || head >= g.n() {
        return Err(Error::UnknownNode(format!("#{}", tail.max(head))));
    }
    if tail == head {
        return Err(Error::InvalidQuery("arrow endpoints must differ".into()));
    }
    Ok(legal_add(g, tail, head))
}

fn legal_add(g: &Dag, tail: usize, head: usize) -> bool {
    !g.adjacent(tail, head) && !g.has_directed_path(head, tail)
}

pub fn apply_add(g: &Dag, op: TransformOp) -> Result<Dag> {
    if !is_legal_add(g, op.tail, op.head)? {
        return Err(Error::IllegalAdd(
            g.name(op.tail).into(),
            g.name(op.head).into(),
        ));
    }
    Ok(g.added_unchecked(op.tail, op.head))
}

/// Synthesizes `reversals*, one add, reversals*` from `l` to `k` when `k`
/// has exactly one more edge and satisfies the graphical conditions (a)–(e)
/// relative to `l`.
///
/// Works by induction on nodes. For the smallest terminal node `t` of `k`
/// among the unsettled nodes, every legal reversal of an arrow out of `t` is
/// performed. With `P`, `C` the parents and children of `t` in the working
/// graph and `X` the remaining `k`-parents of `t`, nothing left to fix
/// (`C = X = ∅`) settles `t`; otherwise one arrow is added: `x -> t` for
/// `x ∈ X` when `C = ∅`, else `p -> c` for a parent `p` of `t` missing on a
/// child `c`, else `x -> t` for an extra parent `x` of some child `c`. The
/// added arrow is accepted once the result is Markov equivalent to `k`; the
/// remaining reversals come from [`reversal_sequence`].
pub fn one_edge_sequence(l: &Dag, k: &Dag) -> Result<TransformSequence> {
    k.check_same_nodes(l)?;
    if k.edge_count() != l.edge_count() + 1 {
        return Err(Error::PreconditionViolated(format!(
            "|E(K)| = {} must be |E(L)| + 1 = {}",
            k.edge_count(),
            l.edge_count() + 1
        )));
    }
    if !conditions_hold(ConditionSet::Graphical, k, l)? {
        return Err(Error::PreconditionViolated(
            "graphical conditions (a)-(e) do not hold".into(),
        ));
    }
    let mut seq = TransformSequence {
        start: l.clone(),
        ops: Vec::new(),
    };
    let mut cur = l.clone();
    let mut active = l.all_nodes();
    while active.len() > 1 {
        let t = k
            .terminal_nodes_within(active)
            .first()
            .expect("every DAG has a terminal node");
        while let Some(y) = (cur.children(t) & active)
            .iter()
            .find(|&y| covered(&cur, t, y))
        {
            cur = cur.reversed_unchecked(t, y);
            seq.ops.push(TransformOp::reverse(t, y));
        }
        let p = cur.parents(t) & active;
        let c = cur.children(t) & active;
        let x = (k.parents(t) & active) - (p | c);
        if c.is_empty() && x.is_empty() {
            active.remove(t);
            continue;
        }
        let candidates = add_candidates(&cur, t, p, c, x);
        for (tail, head) in candidates {
            if !legal_add(&cur, tail, head) {
                continue;
            }
            let added = cur.added_unchecked(tail, head);
            if same_class(&added, k) {
                seq.ops.push(TransformOp::add(tail, head));
                seq.push_reversals(&added, k)?;
                return Ok(seq);
            }
        }
        return Err(Error::InternalInvariantBroken(format!(
            "no candidate arrow at terminal node {} yields a graph equivalent to K",
            cur.name(t)
        )));
    }
    Err(Error::InternalInvariantBroken(
        "every node settled without adding an arrow".into(),
    ))
}

/// Candidate arrows for the first applicable case, in trial order.
fn add_candidates(cur: &Dag, t: usize, p: NodeSet, c: NodeSet, x: NodeSet) -> Vec<(usize, usize)> {
    if c.is_empty() {
        return x.iter().map(|x| (x, t)).collect();
    }
    let missing_parent: Vec<(usize, usize)> = c
        .iter()
        .flat_map(|ch| (p - cur.parents(ch)).iter().map(move |pp| (pp, ch)))
        .collect();
    if !missing_parent.is_empty() {
        return missing_parent;
    }
    let mut out: Vec<(usize, usize)> = c
        .iter()
        .flat_map(|ch| (cur.parents(ch) - p.with(t)).iter().map(move |xx| (xx, t)))
        .collect();
    out.dedup();
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MeekOutcome {
    /// A shortest sequence from `l` to `k`.
    Found(TransformSequence),
    /// The step bound cut the search off.
    Exhausted,
    /// The whole reachable state space was searched without reaching `k`.
    NoSequence,
}

/// `2 · (|E(K)| + |N|²)`.
pub fn default_max_steps(k: &Dag) -> usize {
    2 * (k.edge_count() + k.n() * k.n())
}

/// Breadth-first search for a shortest sequence of legal reversals and
/// legal additions from `l` to exactly `k`.
///
/// Only states whose skeleton lies between those of `l` and `k` and whose
/// model still contains `I(K)` are explored; every intermediate graph of a
/// valid sequence has both properties. `max_steps = None` searches the full
/// (finite) state space.
pub fn meek_search(l: &Dag, k: &Dag, max_steps: Option<usize>) -> Result<MeekOutcome> {
    k.check_same_nodes(l)?;
    if !includes(k, l)? {
        return Err(Error::InclusionFails);
    }
    if l == k {
        return Ok(MeekOutcome::Found(TransformSequence {
            start: l.clone(),
            ops: Vec::new(),
        }));
    }
    let target_adj = k.adjacency();
    let mut states = vec![l.clone()];
    let mut pred: Vec<Option<(usize, TransformOp)>> = vec![None];
    let mut depth = vec![0usize];
    let mut seen: HashMap<Vec<NodeSet>, usize> = HashMap::from([(l.parent_sets().to_vec(), 0)]);
    let mut queue = VecDeque::from([0usize]);
    let mut truncated = false;
    while let Some(i) = queue.pop_front() {
        if max_steps.is_some_and(|m| depth[i] >= m) {
            truncated = true;
            continue;
        }
        let cur = states[i].clone();
        let mut moves: Vec<(TransformOp, Dag)> = Vec::new();
        for (t, h) in cur.arrows() {
            if covered(&cur, t, h) {
                moves.push((TransformOp::reverse(t, h), cur.reversed_unchecked(t, h)));
            }
        }
        for (u, &wanted) in target_adj.iter().enumerate() {
            for v in (wanted - cur.neighbours(u)).iter() {
                if legal_add(&cur, u, v) {
                    let next = cur.added_unchecked(u, v);
                    if includes(k, &next)? {
                        moves.push((TransformOp::add(u, v), next));
                    }
                }
            }
        }
        for (op, next) in moves {
            if seen.contains_key(next.parent_sets()) {
                continue;
            }
            let j = states.len();
            seen.insert(next.parent_sets().to_vec(), j);
            pred.push(Some((i, op)));
            depth.push(depth[i] + 1);
            let done = &next == k;
            states.push(next);
            if done {
                let mut ops = Vec::new();
                let mut at = j;
                while let Some((p, op)) = pred[at] {
                    ops.push(op);
                    at = p;
                }
                ops.reverse();
                return Ok(MeekOutcome::Found(TransformSequence {
                    start: l.clone(),
                    ops,
                }));
            }
            queue.push_back(j);
        }
    }
    Ok(if truncated {
        MeekOutcome::Exhausted
    } else {
        MeekOutcome::NoSequence
    })
}

/// [`meek_search`] at the default bound, repeated without a bound when the
/// bounded search is cut off.
pub fn meek_search_complete(l: &Dag, k: &Dag) -> Result<MeekOutcome> {
    match meek_search(l, k, Some(default_max_steps(k)))? {
        MeekOutcome::Exhausted => meek_search(l, k, None),
        found => Ok(found),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SimpleShape {
    Found(TransformSequence),
    Impossible,
}

/// Looks only for `reversals*, adds*, reversals*` sequences.
///
/// Such a sequence exists iff some member `L*` of the class of `l` is an
/// arrow-wise subgraph of some member `K*` of the class of `k`; additions
/// from `L*` to `K*` then stay acyclic in any order. Short sequences are
/// preferred.
pub fn simple_shape_search(l: &Dag, k: &Dag) -> Result<SimpleShape> {
    k.check_same_nodes(l)?;
    if !includes(k, l)? {
        return Err(Error::InclusionFails);
    }
    let l_class = class_with_paths(l);
    let k_class = class_with_paths(k);
    let mut best: Option<TransformSequence> = None;
    for (l_star, to_l_star) in &l_class {
        for (k_star, to_k_star) in &k_class {
            let contained = l_star
                .parent_sets()
                .iter()
                .zip(k_star.parent_sets())
                .all(|(pl, pk)| pl.is_subset(*pk));
            if !contained {
                continue;
            }
            let adds = k_star.edge_count() - l_star.edge_count();
            let len = to_l_star.len() + adds + to_k_star.len();
            if best.as_ref().is_some_and(|b| b.ops.len() <= len) {
                continue;
            }
            let mut seq = TransformSequence {
                start: l.clone(),
                ops: to_l_star
                    .iter()
                    .map(|r| TransformOp::reverse(r.tail, r.head))
                    .collect(),
            };
            for (t, h) in k_star.arrows() {
                if !l_star.has_arrow(t, h) {
                    seq.ops.push(TransformOp::add(t, h));
                }
            }
            seq.push_reversals(k_star, k)?;
            best = Some(seq);
        }
    }
    Ok(best.map_or(SimpleShape::Impossible, SimpleShape::Found))
}
