//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so that every line is printed even when
//! output is not captured. Exits non-zero if any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path as FsPath;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use dag_inclusion::equivalence::{apply_reversal, equivalent, reversal_sequence};
use dag_inclusion::inclusion::{conditions_hold, includes, same_size_inclusion, ConditionSet};
use dag_inclusion::oracle::{
    enumerate_dags, enumerate_triplets, model, model_via_moralization, standard_nodes,
};
use dag_inclusion::separation::{
    composite_holds, d_connected_sets, find_dependence_complex, is_active_path,
    nonadjacent_separator, plus_w_dependent, validate_complex, CompositeStatement, DisjointTriplet,
    Path,
};
use dag_inclusion::sweep::{conditions_fuzz, meek_sweep, random_pair, PairSpace};
use dag_inclusion::text::parse_dag;
use dag_inclusion::transform::{
    meek_search_complete, one_edge_sequence, simple_shape_search, MeekOutcome, OpKind, SimpleShape,
};
use dag_inclusion::{Dag, NodeSet};

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

/// A model as a bitset over the index of each triplet in
/// `enumerate_triplets`.
#[derive(Clone, PartialEq, Eq, Hash)]
struct Bits(Vec<u64>);

impl Bits {
    fn of(g: &Dag, index: &BTreeMap<DisjointTriplet, usize>) -> Bits {
        let mut words = vec![0u64; index.len().div_ceil(64)];
        for t in model(g).statements {
            let i = index[&t];
            words[i / 64] |= 1 << (i % 64);
        }
        Bits(words)
    }

    fn subset(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
}

struct Space {
    graphs: Vec<Dag>,
    models: Vec<Bits>,
}

impl Space {
    fn new(n: usize) -> Space {
        let index: BTreeMap<DisjointTriplet, usize> = enumerate_triplets(n)
            .unwrap()
            .into_iter()
            .enumerate()
            .map(|(i, t)| (t, i))
            .collect();
        let graphs: Vec<Dag> = enumerate_dags(standard_nodes(n), 5).unwrap().collect();
        let models = graphs.par_iter().map(|g| Bits::of(g, &index)).collect();
        Space { graphs, models }
    }

    fn pairs(&self) -> impl ParallelIterator<Item = (usize, usize)> + '_ {
        let n = self.graphs.len();
        (0..n * n).into_par_iter().map(move |x| (x / n, x % n))
    }
}

fn fixture(name: &str) -> Dag {
    let path = FsPath::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name);
    parse_dag(&fs::read_to_string(&path).unwrap()).unwrap()
}

/// Active-path criterion by listing every simple path.
fn path_connected(g: &Dag, a: NodeSet, b: NodeSet, c: NodeSet) -> bool {
    fn extend(g: &Dag, path: &mut Vec<usize>, b: NodeSet, c: NodeSet) -> bool {
        let last = *path.last().unwrap();
        if path.len() > 1 && b.contains(last) {
            return is_active_path(g, &Path(path.clone()), c).unwrap();
        }
        for next in g.neighbours(last).iter() {
            if path.contains(&next) {
                continue;
            }
            path.push(next);
            let hit = extend(g, path, b, c);
            path.pop();
            if hit {
                return true;
            }
        }
        false
    }
    a.iter().any(|x| extend(g, &mut vec![x], b, c))
}

fn c1_oracle_agreement(s4: &Space) -> Outcome {
    let triplets = enumerate_triplets(4).unwrap();
    let bad: usize = s4
        .graphs
        .par_iter()
        .map(|g| {
            let by_reach = model(g).statements;
            let by_moral = model_via_moralization(g).statements;
            let by_path: BTreeSet<DisjointTriplet> = triplets
                .iter()
                .filter(|t| !path_connected(g, t.a, t.b, t.c))
                .copied()
                .collect();
            by_reach.symmetric_difference(&by_moral).count()
                + by_reach.symmetric_difference(&by_path).count()
        })
        .sum();
    let checked = s4.graphs.len() * triplets.len();
    if bad == 0 {
        Ok(format!(
            "{} graphs, {checked} triplets, 3 criteria agree",
            s4.graphs.len()
        ))
    } else {
        Err(format!("{bad} disagreements"))
    }
}

fn c2_dependence_complexes(s4: &Space) -> Outcome {
    let (checked, bad): (usize, usize) = s4
        .graphs
        .par_iter()
        .map(|g| {
            let mut checked = 0;
            let mut bad = 0;
            for a in 0..4 {
                for b in 0..4 {
                    if a == b {
                        continue;
                    }
                    let rest = g.all_nodes().without(a).without(b);
                    for c in rest.subsets() {
                        checked += 1;
                        let connected =
                            d_connected_sets(g, NodeSet::singleton(a), NodeSet::singleton(b), c);
                        let ok = match find_dependence_complex(g, a, b, c) {
                            Ok(Some(k)) => {
                                connected && validate_complex(g, &k, c) && k.endpoints() == (a, b)
                            }
                            Ok(None) => !connected,
                            Err(_) => false,
                        };
                        bad += usize::from(!ok);
                    }
                }
            }
            (checked, bad)
        })
        .reduce(|| (0, 0), |x, y| (x.0 + y.0, x.1 + y.1));
    if bad == 0 {
        Ok(format!("{checked} queries"))
    } else {
        Err(format!("{bad} of {checked} queries wrong"))
    }
}

fn c3_pairwise_statements(s4: &Space) -> Outcome {
    let bad: usize = s4
        .graphs
        .par_iter()
        .map(|g| {
            let mut bad = 0;
            for u in 0..4 {
                for v in u + 1..4 {
                    let (su, sv) = (NodeSet::singleton(u), NodeSet::singleton(v));
                    if !g.adjacent(u, v) {
                        let sep = nonadjacent_separator(g, u, v).unwrap();
                        bad += usize::from(d_connected_sets(g, su, sv, sep));
                    }
                    let star = CompositeStatement::star(u, v).unwrap();
                    bad += usize::from(g.adjacent(u, v) != composite_holds(g, &star).unwrap());
                    for w in (0..4).filter(|&w| w != u && w != v) {
                        let plus =
                            CompositeStatement::new(u, v, NodeSet::singleton(w), NodeSet::EMPTY)
                                .unwrap();
                        let brute = composite_holds(g, &plus).unwrap();
                        bad += usize::from(plus_w_dependent(g, u, v, w).unwrap() != brute);
                        if g.is_immorality(u, v, w) {
                            bad += usize::from(!brute);
                        }
                    }
                }
            }
            bad
        })
        .sum();
    if bad == 0 {
        Ok(format!("{} graphs", s4.graphs.len()))
    } else {
        Err(format!("{bad} discrepancies"))
    }
}

fn c4_equivalence(s4: &Space) -> Outcome {
    let bad = s4
        .pairs()
        .filter(|&(i, j)| {
            let (k, l) = (&s4.graphs[i], &s4.graphs[j]);
            equivalent(k, l).unwrap() != (s4.models[i] == s4.models[j])
        })
        .count();
    let total = s4.graphs.len().pow(2);
    if bad == 0 {
        Ok(format!("{total} ordered pairs"))
    } else {
        Err(format!("{bad} of {total} pairs disagree"))
    }
}

fn c5_reversal_sequences(s4: &Space) -> Outcome {
    let eq_pairs: Vec<(usize, usize)> = s4
        .pairs()
        .filter(|&(i, j)| s4.models[i] == s4.models[j])
        .collect();
    let replay_bad = eq_pairs
        .par_iter()
        .filter(|&&(i, j)| {
            let (target, start) = (&s4.graphs[i], &s4.graphs[j]);
            let Ok(ops) = reversal_sequence(start, target) else {
                return true;
            };
            let mut cur = start.clone();
            for op in ops {
                match apply_reversal(&cur, op) {
                    Ok(next) => cur = next,
                    Err(_) => return true,
                }
            }
            &cur != target
        })
        .count();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let sample: Vec<_> = eq_pairs.choose_multiple(&mut rng, 1000).copied().collect();
    let model_bad = sample
        .par_iter()
        .filter(|&&(i, j)| {
            let (target, start) = (&s4.graphs[i], &s4.graphs[j]);
            let want = model(start);
            let mut cur = start.clone();
            for op in reversal_sequence(start, target).unwrap() {
                cur = apply_reversal(&cur, op).unwrap();
                if model(&cur) != want {
                    return true;
                }
            }
            false
        })
        .count();
    if replay_bad + model_bad == 0 {
        Ok(format!(
            "{} equivalent pairs replayed, {} checked step by step",
            eq_pairs.len(),
            sample.len()
        ))
    } else {
        Err(format!(
            "{replay_bad} replay failures, {model_bad} model changes"
        ))
    }
}

fn c6_inclusion(s4: &Space) -> Outcome {
    let bad4 = s4
        .pairs()
        .filter(|&(i, j)| {
            includes(&s4.graphs[i], &s4.graphs[j]).unwrap() != s4.models[i].subset(&s4.models[j])
        })
        .count();
    let nodes = standard_nodes(5);
    let (included5, bad5): (usize, usize) = (0..10_000u64)
        .into_par_iter()
        .map(|i| {
            let (k, l) = random_pair(&nodes, 2024, i).unwrap();
            let truth = model(&k).statements.is_subset(&model(&l).statements);
            (
                usize::from(truth),
                usize::from(includes(&k, &l).unwrap() != truth),
            )
        })
        .reduce(|| (0, 0), |x, y| (x.0 + y.0, x.1 + y.1));
    if bad4 + bad5 == 0 {
        Ok(format!(
            "{} ordered 4-node pairs; 10000 random 5-node pairs ({included5} included)",
            s4.graphs.len().pow(2)
        ))
    } else {
        Err(format!("{bad4} discrepancies at n=4, {bad5} at n=5"))
    }
}

fn c7_same_size(s4: &Space) -> Outcome {
    let (checked, bad): (usize, usize) = s4
        .pairs()
        .filter(|&(i, j)| s4.graphs[i].edge_count() <= s4.graphs[j].edge_count())
        .map(|(i, j)| {
            let (k, l) = (&s4.graphs[i], &s4.graphs[j]);
            let basic = same_size_inclusion(k, l).unwrap();
            let ok =
                basic == includes(k, l).unwrap() && basic == s4.models[i].subset(&s4.models[j]);
            (1, usize::from(!ok))
        })
        .reduce(|| (0, 0), |x, y| (x.0 + y.0, x.1 + y.1));
    if bad == 0 {
        Ok(format!("{checked} pairs with |E(K)| <= |E(L)|"))
    } else {
        Err(format!("{bad} of {checked} disagree"))
    }
}

fn c8_insufficiency() -> Outcome {
    let report = conditions_fuzz(4, PairSpace::Exhaustive { cap: 5 }).map_err(|e| e.to_string())?;
    let (k, l) = (
        fixture("basic_insufficient_k.dag"),
        fixture("basic_insufficient_l.dag"),
    );
    let listed = report
        .basic_verma_insufficient
        .iter()
        .any(|p| p.k == k && p.l == l);
    let basic = conditions_hold(ConditionSet::Basic, &k, &l).unwrap();
    let verma = conditions_hold(ConditionSet::Verma, &k, &l).unwrap();
    let oracle = model(&k).statements.is_subset(&model(&l).statements);
    let confirmed = report
        .basic_verma_insufficient
        .iter()
        .all(|p| !model(&p.k).statements.is_subset(&model(&p.l).statements));
    if !report.basic_verma_insufficient.is_empty()
        && listed
        && basic
        && verma
        && !oracle
        && confirmed
        && report.necessity_violations.is_empty()
    {
        Ok(format!(
            "{} pairs found, fixture among them; {} pass (a),(b~),(*) without inclusion",
            report.basic_verma_insufficient.len(),
            report.inclusion_conditions_insufficient.len()
        ))
    } else {
        Err(format!(
            "found={} fixture_listed={listed} basic={basic} verma={verma} oracle={oracle} \
             confirmed={confirmed} necessity_violations={}",
            report.basic_verma_insufficient.len(),
            report.necessity_violations.len()
        ))
    }
}

fn c9_one_edge(s4: &Space) -> Outcome {
    let results: Vec<(bool, bool)> = s4
        .pairs()
        .filter(|&(i, j)| {
            let (k, l) = (&s4.graphs[i], &s4.graphs[j]);
            k.edge_count() == l.edge_count() + 1
                && conditions_hold(ConditionSet::Graphical, k, l).unwrap()
        })
        .map(|(i, j)| {
            let (k, l) = (&s4.graphs[i], &s4.graphs[j]);
            let Ok(seq) = one_edge_sequence(l, k) else {
                return (false, false);
            };
            let Ok(graphs) = seq.replay() else {
                return (false, false);
            };
            let shape = seq.is_simple_shape() && seq.add_count() == 1;
            let included = s4.models[i].subset(&s4.models[j]);
            let pre = seq.ops.first().is_some_and(|op| op.kind == OpKind::Reverse);
            (shape && graphs.last() == Some(k) && included, pre)
        })
        .collect();
    let bad = results.iter().filter(|r| !r.0).count();
    let with_prefix = results.iter().filter(|r| r.1).count();
    if bad == 0 && !results.is_empty() {
        Ok(format!(
            "{} pairs, all included by the oracle; {with_prefix} needed reversals before the add",
            results.len()
        ))
    } else {
        Err(format!("{bad} of {} pairs failed", results.len()))
    }
}

fn c10_not_simple() -> Outcome {
    let (k, l) = (fixture("not_simple_k.dag"), fixture("not_simple_l.dag"));
    let oracle = model(&k).statements.is_subset(&model(&l).statements);
    let inc = includes(&k, &l).unwrap();
    let simple = simple_shape_search(&l, &k).unwrap();
    let meek = meek_search_complete(&l, &k).unwrap();
    let interleaved = match &meek {
        MeekOutcome::Found(seq) => {
            !seq.is_simple_shape()
                && seq.replay().ok().and_then(|g| g.last().cloned()) == Some(k.clone())
        }
        _ => false,
    };
    let swept = meek_sweep(4, PairSpace::Exhaustive { cap: 5 })
        .map_err(|e| e.to_string())?
        .not_simple
        .iter()
        .any(|p| p.k == k && p.l == l);
    if oracle && inc && simple == SimpleShape::Impossible && interleaved && swept {
        let MeekOutcome::Found(seq) = meek else {
            unreachable!()
        };
        let ops: Vec<String> = seq.ops.iter().map(|op| op.display(&l)).collect();
        Ok(format!("fixture pair, meek sequence: {}", ops.join(", ")))
    } else {
        Err(format!(
            "oracle={oracle} includes={inc} simple={:?} interleaved={interleaved} swept={swept}",
            matches!(simple, SimpleShape::Impossible)
        ))
    }
}

fn c11_meek_sweep(s4: &Space) -> Outcome {
    let included: Vec<(usize, usize)> = s4
        .pairs()
        .filter(|&(i, j)| s4.models[i].subset(&s4.models[j]))
        .collect();
    let bad = included
        .par_iter()
        .filter(|&&(i, j)| {
            let (k, l) = (&s4.graphs[i], &s4.graphs[j]);
            match meek_search_complete(l, k) {
                Ok(MeekOutcome::Found(seq)) => {
                    let graphs = seq.replay().unwrap();
                    graphs.last() != Some(k)
                }
                _ => true,
            }
        })
        .count();
    let report = meek_sweep(4, PairSpace::Exhaustive { cap: 5 }).map_err(|e| e.to_string())?;
    if bad == 0 && report.counterexamples.is_empty() && report.included_pairs == included.len() {
        Ok(format!(
            "{} included pairs, 0 counterexamples, {} need interleaving",
            included.len(),
            report.not_simple.len()
        ))
    } else {
        Err(format!(
            "{bad} pairs without a replaying sequence, {} sweep counterexamples",
            report.counterexamples.len()
        ))
    }
}

/// Labeled DAG counts by inclusion-exclusion over the set of source nodes.
fn labeled_dag_count(n: u32) -> i64 {
    let mut a = vec![1i64];
    for m in 1..=n as usize {
        let mut total = 0i64;
        let mut binom = 1i64;
        for k in 1..=m {
            binom = binom * (m - k + 1) as i64 / k as i64;
            let sign = if k % 2 == 1 { 1 } else { -1 };
            total += sign * binom * (1i64 << (k * (m - k))) * a[m - k];
        }
        a.push(total);
    }
    a[n as usize]
}

fn c12_generators() -> Outcome {
    let mut counts = Vec::new();
    for n in 1..=5u32 {
        let got = enumerate_dags(standard_nodes(n as usize), 5)
            .unwrap()
            .count() as i64;
        if got != labeled_dag_count(n) {
            return Err(format!(
                "n={n}: {got} DAGs, expected {}",
                labeled_dag_count(n)
            ));
        }
        counts.push(got.to_string());
    }
    let classes: BTreeSet<_> = enumerate_dags(standard_nodes(3), 5)
        .unwrap()
        .map(|g| model(&g).statements)
        .collect();
    if classes.len() == 11 {
        Ok(format!(
            "counts {}; 11 classes on 3 nodes",
            counts.join(", ")
        ))
    } else {
        Err(format!("{} classes on 3 nodes", classes.len()))
    }
}

fn main() {
    let start = Instant::now();
    let s4 = Space::new(4);
    let criteria: Vec<Criterion> = vec![
        (
            "oracle agreement on 4-node DAGs",
            Box::new(|| c1_oracle_agreement(&s4)),
        ),
        (
            "dependence complexes witness d-connection",
            Box::new(|| c2_dependence_complexes(&s4)),
        ),
        (
            "pairwise separation, star and plus-w statements",
            Box::new(|| c3_pairwise_statements(&s4)),
        ),
        (
            "equivalence equals model equality",
            Box::new(|| c4_equivalence(&s4)),
        ),
        (
            "reversal sequences replay and preserve models",
            Box::new(|| c5_reversal_sequences(&s4)),
        ),
        (
            "inclusion equals model inclusion",
            Box::new(|| c6_inclusion(&s4)),
        ),
        (
            "basic conditions decide same-size inclusion",
            Box::new(|| c7_same_size(&s4)),
        ),
        (
            "basic and Verma conditions are not sufficient",
            Box::new(c8_insufficiency),
        ),
        (
            "one-edge synthesizer on every eligible pair",
            Box::new(|| c9_one_edge(&s4)),
        ),
        (
            "included pair with no simple-shape sequence",
            Box::new(c10_not_simple),
        ),
        (
            "reversal-and-add sequences for every included pair",
            Box::new(|| c11_meek_sweep(&s4)),
        ),
        (
            "generator counts and 3-node classes",
            Box::new(c12_generators),
        ),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = run();
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed [{:.1}s]",
        criteria.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
