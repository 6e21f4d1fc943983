//! Brute-force ground truth: explicit independence models, exhaustive DAG
//! enumeration and seeded random DAGs.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dag::{node_list, Dag, NodeId};
use crate::error::{Error, Result};
use crate::nodeset::NodeSet;
use crate::separation::{d_connected_sets, moral_separated_sets, DisjointTriplet};

/// Default bound on node count for exhaustive enumeration.
pub const DEFAULT_CAP: usize = 5;

/// The d-separation statements of a graph, as canonical triplets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndependenceModel {
    pub nodes: Arc<[NodeId]>,
    pub statements: BTreeSet<DisjointTriplet>,
}

impl IndependenceModel {
    pub fn contains(&self, t: &DisjointTriplet) -> bool {
        self.statements.contains(&t.canonical())
    }

    pub fn len(&self) -> usize {
        self.statements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.statements.is_empty()
    }
}

/// Splits a base-4 code into (A, B, C): digit 1 puts a node in A, 2 in B,
/// 3 in C.
fn decode(mut code: usize, n: usize) -> (NodeSet, NodeSet, NodeSet) {
    let mut sets = [NodeSet::EMPTY; 4];
    for i in 0..n {
        sets[code % 4].insert(i);
        code /= 4;
    }
    (sets[1], sets[2], sets[3])
}

/// Every canonical triplet over `n` nodes with `A`, `B` nonempty.
pub fn enumerate_triplets(n: usize) -> Result<Vec<DisjointTriplet>> {
    if n < 2 {
        return Err(Error::TooFewNodes);
    }
    if n > 16 {
        return Err(Error::CapExceeded { n, cap: 16 });
    }
    Ok((0..1usize << (2 * n))
        .filter_map(|code| {
            let (a, b, c) = decode(code, n);
            let keep = !a.is_empty() && !b.is_empty() && a.lex_cmp(b) == std::cmp::Ordering::Less;
            keep.then_some(DisjointTriplet { a, b, c })
        })
        .collect())
}

fn model_with(g: &Dag, separated: impl Fn(&DisjointTriplet) -> bool) -> IndependenceModel {
    let statements = if g.n() < 2 {
        BTreeSet::new()
    } else {
        enumerate_triplets(g.n())
            .expect("graph size already validated")
            .into_iter()
            .filter(|t| separated(t))
            .collect()
    };
    IndependenceModel {
        nodes: g.nodes().clone(),
        statements,
    }
}

/// `I(G)` via d-separation.
pub fn model(g: &Dag) -> IndependenceModel {
    model_with(g, |t| !d_connected_sets(g, t.a, t.b, t.c))
}

/// `I(G)` via the moralization criterion.
pub fn model_via_moralization(g: &Dag) -> IndependenceModel {
    model_with(g, |t| moral_separated_sets(g, t.a, t.b, t.c))
}

pub fn model_included(m1: &IndependenceModel, m2: &IndependenceModel) -> Result<bool> {
    if m1.nodes != m2.nodes {
        return Err(Error::NodeSetMismatch);
    }
    Ok(m1.statements.is_subset(&m2.statements))
}

/// Names `a`, `b`, ... for small test graphs; `n0`, `n1`, ... past 26.
pub fn standard_nodes(n: usize) -> Arc<[NodeId]> {
    let names: Vec<String> = if n <= 26 {
        (0..n)
            .map(|i| ((b'a' + i as u8) as char).to_string())
            .collect()
    } else {
        (0..n).map(|i| format!("n{i:02}")).collect()
    };
    node_list(&names).expect("generated names are valid")
}

/// Every labeled DAG over `nodes`, each exactly once.
///
/// Each unordered pair is absent or oriented one of two ways; acyclic
/// assignments are kept.
pub fn enumerate_dags(nodes: Arc<[NodeId]>, cap: usize) -> Result<impl Iterator<Item = Dag>> {
    let n = nodes.len();
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let total = 3u64.pow(pairs.len() as u32);
    Ok((0..total).filter_map(move |mut code| {
        let mut parents = vec![NodeSet::EMPTY; n];
        for &(i, j) in &pairs {
            match code % 3 {
                1 => parents[j].insert(i),
                2 => parents[i].insert(j),
                _ => {}
            }
            code /= 3;
        }
        if !acyclic(&parents) {
            return None;
        }
        Some(Dag::from_parents(nodes.clone(), parents).expect("acyclic by construction"))
    }))
}

fn acyclic(parents: &[NodeSet]) -> bool {
    let mut placed = NodeSet::EMPTY;
    loop {
        let ready: NodeSet = (0..parents.len())
            .filter(|&i| !placed.contains(i) && parents[i].is_subset(placed))
            .collect();
        if ready.is_empty() {
            return placed.len() == parents.len();
        }
        placed = placed | ready;
    }
}

/// Seeded random DAG: a shuffled node order, each forward pair an arrow
/// with probability `edge_prob`.
pub fn random_dag(nodes: Arc<[NodeId]>, edge_prob: f64, seed: u64) -> Result<Dag> {
    if !(0.0..=1.0).contains(&edge_prob) {
        return Err(Error::InvalidQuery(format!(
            "edge probability {edge_prob} outside [0, 1]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..nodes.len()).collect();
    order.shuffle(&mut rng);
    let mut parents = vec![NodeSet::EMPTY; nodes.len()];
    for i in 0..order.len() {
        for j in i + 1..order.len() {
            if rng.gen_bool(edge_prob) {
                parents[order[j]].insert(order[i]);
            }
        }
    }
    Dag::from_parents(nodes, parents)
}

/// Checks the semi-graphoid axioms, intersection and composition on `I(g)`.
///
/// For every `⟨A, B|C⟩` and every split of `B` into nonempty `B1`, `B2`:
/// decomposition, weak union, contraction, intersection and composition.
/// Symmetry holds by canonicalization; the table check guards the encoding.
pub fn check_graphoid_composition(g: &Dag, cap: usize) -> Result<bool> {
    let n = g.n();
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    if n < 2 {
        return Ok(true);
    }
    let m = model(g);
    let size = 1usize << (2 * n);
    let encode = |a: NodeSet, b: NodeSet, c: NodeSet| -> usize {
        (0..n)
            .map(|i| {
                let digit = if a.contains(i) {
                    1
                } else if b.contains(i) {
                    2
                } else if c.contains(i) {
                    3
                } else {
                    0
                };
                digit << (2 * i)
            })
            .sum()
    };
    let mut table = vec![false; size];
    for t in &m.statements {
        table[encode(t.a, t.b, t.c)] = true;
        table[encode(t.b, t.a, t.c)] = true;
    }
    let s = |a: NodeSet, b: NodeSet, c: NodeSet| table[encode(a, b, c)];
    for code in 0..size {
        let (a, b, c) = decode(code, n);
        if a.is_empty() || b.is_empty() {
            continue;
        }
        if s(a, b, c) != s(b, a, c) {
            return Ok(false);
        }
        for b1 in b.subsets() {
            let b2 = b - b1;
            if b1.is_empty() || b2.is_empty() {
                continue;
            }
            let whole = s(a, b, c);
            let decomposition = !whole || s(a, b1, c);
            let weak_union = !whole || s(a, b1, c | b2);
            let contraction = !(s(a, b1, c) && s(a, b2, c | b1)) || whole;
            let intersection = !(s(a, b1, c | b2) && s(a, b2, c | b1)) || whole;
            let composition = !(s(a, b1, c) && s(a, b2, c)) || whole;
            if !(decomposition && weak_union && contraction && intersection && composition) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
