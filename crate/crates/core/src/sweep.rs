//! Exhaustive and sampled sweeps over pairs of DAGs.
//!
//! Work is split across threads; findings are sorted by pair key so reports
//! do not depend on scheduling.

use rayon::prelude::*;

use crate::dag::Dag;
use crate::error::Result;
use crate::inclusion::{conditions_hold, includes, ConditionSet};
use crate::oracle::{enumerate_dags, random_dag, standard_nodes};
use crate::transform::{meek_search_complete, simple_shape_search, MeekOutcome, SimpleShape};

/// Which pairs a sweep visits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairSpace {
    /// Every ordered pair of labeled DAGs, bounded by `cap` nodes.
    Exhaustive { cap: usize },
    /// `trials` seeded random pairs.
    Random { seed: u64, trials: usize },
}

/// An ordered pair `(K, L)`, as in "does `I(K) ⊆ I(L)`".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pair {
    pub k: Dag,
    pub l: Dag,
}

impl Pair {
    fn key(&self) -> (Vec<u64>, Vec<u64>) {
        let bits = |g: &Dag| g.parent_sets().iter().map(|s| s.bits()).collect();
        (bits(&self.k), bits(&self.l))
    }
}

fn sorted(mut pairs: Vec<Pair>) -> Vec<Pair> {
    pairs.sort_by_cached_key(Pair::key);
    pairs
}

/// Runs `visit` on every pair of the space, in parallel. Returns the number
/// of pairs visited and the collected results.
fn for_pairs<T, F>(n: usize, space: PairSpace, visit: F) -> Result<(usize, Vec<T>)>
where
    T: Send,
    F: Fn(&Dag, &Dag) -> Result<Option<T>> + Sync,
{
    let nodes = standard_nodes(n);
    match space {
        PairSpace::Exhaustive { cap } => {
            let graphs: Vec<Dag> = enumerate_dags(nodes, cap)?.collect();
            let found: Result<Vec<Vec<T>>> = graphs
                .par_iter()
                .map(|k| {
                    let mut out = Vec::new();
                    for l in &graphs {
                        if let Some(t) = visit(k, l)? {
                            out.push(t);
                        }
                    }
                    Ok(out)
                })
                .collect();
            let visited = graphs.len() * graphs.len();
            Ok((visited, found?.into_iter().flatten().collect()))
        }
        PairSpace::Random { seed, trials } => {
            let found: Result<Vec<Option<T>>> = (0..trials as u64)
                .into_par_iter()
                .map(|i| {
                    let (k, l) = random_pair(&nodes, seed, i)?;
                    visit(&k, &l)
                })
                .collect();
            Ok((trials, found?.into_iter().flatten().collect()))
        }
    }
}

/// Trial `i` of a seeded stream. Odd trials take `L` as a random arrow
/// subset of `K`, so that included pairs are well represented.
pub fn random_pair(
    nodes: &std::sync::Arc<[crate::dag::NodeId]>,
    seed: u64,
    i: u64,
) -> Result<(Dag, Dag)> {
    let s = seed
        .wrapping_mul(0x9e37_79b9_7f4a_7c15)
        .wrapping_add(i.wrapping_mul(2));
    let p = 0.2 + 0.6 * ((i % 7) as f64 / 6.0);
    let k = random_dag(nodes.clone(), p, s)?;
    if i.is_multiple_of(2) {
        return Ok((k, random_dag(nodes.clone(), p, s.wrapping_add(1))?));
    }
    let keep = random_dag(nodes.clone(), 0.5, s.wrapping_add(1))?;
    let mut parents = k.parent_sets().to_vec();
    for (v, ps) in parents.iter_mut().enumerate() {
        let retained = ps.iter().filter(|&u| keep.adjacent(u, v)).collect();
        *ps = retained;
    }
    let l = Dag::from_parents(nodes.clone(), parents)?;
    Ok((k, l))
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConditionsReport {
    pub pairs_checked: usize,
    /// Basic and Verma conditions hold, yet `I(K) ⊄ I(L)`.
    pub basic_verma_insufficient: Vec<Pair>,
    /// The (a), (b~), (*) conditions hold, yet `I(K) ⊄ I(L)`.
    pub inclusion_conditions_insufficient: Vec<Pair>,
    /// Inclusion holds but a necessary condition set fails. Must stay empty.
    pub necessity_violations: Vec<Pair>,
}

struct ConditionsHit {
    basic_verma: bool,
    inclusion: bool,
    necessity: bool,
}

pub fn conditions_fuzz(n: usize, space: PairSpace) -> Result<ConditionsReport> {
    let (visited, hits) = for_pairs(n, space, |k, l| {
        let inc = includes(k, l)?;
        let basic = conditions_hold(ConditionSet::Basic, k, l)?;
        let verma = conditions_hold(ConditionSet::Verma, k, l)?;
        let star = conditions_hold(ConditionSet::Inclusion, k, l)?;
        let graphical = conditions_hold(ConditionSet::Graphical, k, l)?;
        let hit = ConditionsHit {
            basic_verma: !inc && basic && verma,
            inclusion: !inc && star,
            necessity: inc && !(basic && verma && star && graphical),
        };
        if !(hit.basic_verma || hit.inclusion || hit.necessity) {
            return Ok(None);
        }
        let pair = Pair {
            k: k.clone(),
            l: l.clone(),
        };
        Ok(Some((pair, hit)))
    })?;
    let mut report = ConditionsReport {
        pairs_checked: visited,
        ..Default::default()
    };
    for (pair, hit) in hits {
        if hit.basic_verma {
            report.basic_verma_insufficient.push(pair.clone());
        }
        if hit.inclusion {
            report.inclusion_conditions_insufficient.push(pair.clone());
        }
        if hit.necessity {
            report.necessity_violations.push(pair);
        }
    }
    report.basic_verma_insufficient = sorted(report.basic_verma_insufficient);
    report.inclusion_conditions_insufficient = sorted(report.inclusion_conditions_insufficient);
    report.necessity_violations = sorted(report.necessity_violations);
    Ok(report)
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MeekReport {
    /// Pairs with `I(K) ⊆ I(L)`, the only ones searched.
    pub included_pairs: usize,
    /// Included pairs with no sequence after a complete search.
    pub counterexamples: Vec<Pair>,
    /// Included pairs with no `reversals*, adds*, reversals*` sequence.
    pub not_simple: Vec<Pair>,
}

enum MeekHit {
    Fine,
    Counterexample(Pair),
    NotSimple(Pair),
}

pub fn meek_sweep(n: usize, space: PairSpace) -> Result<MeekReport> {
    let (_, hits) = for_pairs(n, space, |k, l| {
        if !includes(k, l)? {
            return Ok(None);
        }
        let pair = || Pair {
            k: k.clone(),
            l: l.clone(),
        };
        let hit = match meek_search_complete(l, k)? {
            MeekOutcome::Found(_) => match simple_shape_search(l, k)? {
                SimpleShape::Found(_) => MeekHit::Fine,
                SimpleShape::Impossible => MeekHit::NotSimple(pair()),
            },
            _ => MeekHit::Counterexample(pair()),
        };
        Ok(Some(hit))
    })?;
    let mut report = MeekReport {
        included_pairs: hits.len(),
        ..Default::default()
    };
    for hit in hits {
        match hit {
            MeekHit::Fine => {}
            MeekHit::Counterexample(p) => report.counterexamples.push(p),
            MeekHit::NotSimple(p) => report.not_simple.push(p),
        }
    }
    report.counterexamples = sorted(report.counterexamples);
    report.not_simple = sorted(report.not_simple);
    Ok(report)
}

/// A pair showing that inclusion cannot be decided locally.
///
/// `K` is complete over `z1..zm, a, b` except that `a` and `b` are
/// non-adjacent, so its only statement is `⟨a, b | z1..zm⟩`. `L` is the
/// single path `a -> z1 -> ... -> zm -> b`. Whether `I(K) ⊆ I(L)` depends
/// on every node of the path at once.
pub fn locality_pair(m: usize) -> Result<Pair> {
    if m == 0 {
        return Err(crate::error::Error::PreconditionViolated(
            "the path needs at least one intermediate node".into(),
        ));
    }
    let zs: Vec<String> = (1..=m).map(|i| format!("z{i}")).collect();
    let mut names = zs.clone();
    names.push("a".into());
    names.push("b".into());
    let order: Vec<&str> = zs.iter().map(String::as_str).chain(["a", "b"]).collect();
    let mut k_arrows = Vec::new();
    for (i, &u) in order.iter().enumerate() {
        for &v in &order[i + 1..] {
            if (u, v) != ("a", "b") {
                k_arrows.push((u, v));
            }
        }
    }
    let path: Vec<&str> = std::iter::once("a")
        .chain(zs.iter().map(String::as_str))
        .chain(["b"])
        .collect();
    let l_arrows: Vec<(&str, &str)> = path.windows(2).map(|w| (w[0], w[1])).collect();
    Ok(Pair {
        k: Dag::new(&names, &k_arrows)?,
        l: Dag::new(&names, &l_arrows)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{model, model_included};

    #[test]
    fn three_node_sweeps_are_clean() {
        let space = PairSpace::Exhaustive { cap: 5 };
        let c = conditions_fuzz(3, space).unwrap();
        assert_eq!(c.pairs_checked, 25 * 25);
        assert!(c.necessity_violations.is_empty());
        let m = meek_sweep(3, space).unwrap();
        assert!(m.counterexamples.is_empty());
    }

    #[test]
    fn random_sweeps_are_deterministic() {
        let space = PairSpace::Random {
            seed: 11,
            trials: 200,
        };
        assert_eq!(
            conditions_fuzz(4, space).unwrap(),
            conditions_fuzz(4, space).unwrap()
        );
    }

    #[test]
    fn locality_pairs() {
        assert!(locality_pair(0).is_err());
        for m in 1..4 {
            let p = locality_pair(m).unwrap();
            assert!(includes(&p.k, &p.l).unwrap());
            let mk = model(&p.k);
            assert_eq!(mk.len(), 1);
            assert!(model_included(&mk, &model(&p.l)).unwrap());
        }
    }
}
