use std::fmt::Write as _;
use std::path::Path;

use dag_inclusion::equivalence::{equivalent, reversal_sequence};
use dag_inclusion::inclusion::{check_conditions, inclusion_witness, ConditionSet};
use dag_inclusion::oracle::{enumerate_dags, model, standard_nodes};
use dag_inclusion::separation::{
    d_connected, d_connected_sets, find_dependence_complex, DisjointTriplet,
};
use dag_inclusion::sweep::{conditions_fuzz, locality_pair, meek_sweep, PairSpace};
use dag_inclusion::transform::{
    default_max_steps, meek_search, one_edge_sequence, MeekOutcome, TransformOp, TransformSequence,
};
use dag_inclusion::{includes, Dag, NodeSet};
use serde_json::{json, Value};

use crate::args::{Command, FuzzMode, SetArg};
use crate::render;
use crate::{max_n, read_dag, CliError, Outcome};

type Res = Result<Outcome, CliError>;

pub fn dispatch(c: &Command) -> Res {
    match c {
        Command::Dsep { file, a, b, c } => dsep(file, a, b, c),
        Command::Model { file } => model_cmd(file),
        Command::Equiv { k, l, sequence } => equiv(k, l, *sequence),
        Command::Includes { k, l } => includes_cmd(k, l),
        Command::Conditions { k, l, set } => conditions(k, l, *set),
        Command::OneEdge { l, k } => one_edge(l, k),
        Command::Meek { l, k, max_steps } => meek(l, k, *max_steps),
        Command::Fuzz {
            mode,
            n,
            exhaustive: _,
            seed,
            trials,
        } => fuzz(*mode, *n, *seed, *trials),
        Command::Enumerate { n } => enumerate(*n),
        Command::Replay { start, ops, target } => replay(start, ops, target.as_deref()),
    }
}

fn pair_of(first: &Path, second: &Path) -> Result<(Dag, Dag), CliError> {
    let (x, y) = (read_dag(first)?, read_dag(second)?);
    if !x.same_nodes(&y) {
        return Err(dag_inclusion::Error::NodeSetMismatch.into());
    }
    Ok((x, y))
}

fn set_arg(g: &Dag, names: &[String]) -> Result<NodeSet, CliError> {
    let names: Vec<&str> = names
        .iter()
        .map(|s| s.trim())
        .filter(|s| !s.is_empty())
        .collect();
    Ok(g.node_set(&names)?)
}

fn dsep(file: &Path, a: &[String], b: &[String], c: &[String]) -> Res {
    let g = read_dag(file)?;
    let t = DisjointTriplet::new(set_arg(&g, a)?, set_arg(&g, b)?, set_arg(&g, c)?)?;
    let statement = t.display(&g);
    if !d_connected(&g, &t)? {
        return Ok(Outcome::new(
            "SEPARATED",
            true,
            format!("SEPARATED\n{statement}\n"),
            json!({ "statement": render::triplet(&g, &t), "witness": null }),
        ));
    }
    let (x, y) =
        t.a.iter()
            .flat_map(|x| t.b.iter().map(move |y| (x, y)))
            .find(|&(x, y)| d_connected_sets(&g, NodeSet::singleton(x), NodeSet::singleton(y), t.c))
            .expect("some pair of endpoints is connected");
    let k = find_dependence_complex(&g, x, y, t.c)?.expect("endpoints are connected");
    let text = format!(
        "CONNECTED\nnot {statement}\nwitness between {} and {}:\n{}",
        g.name(x),
        g.name(y),
        render::complex_text(&g, &k)
    );
    Ok(Outcome::new(
        "CONNECTED",
        false,
        text,
        json!({ "statement": render::triplet(&g, &t), "witness": render::complex(&g, &k) }),
    ))
}

fn model_cmd(file: &Path) -> Res {
    let g = read_dag(file)?;
    let m = model(&g);
    let mut text = format!("{} statements\n", m.len());
    for t in &m.statements {
        writeln!(text, "{}", t.display(&g)).unwrap();
    }
    let statements: Vec<Value> = m
        .statements
        .iter()
        .map(|t| render::triplet(&g, t))
        .collect();
    Ok(Outcome::new(
        "MODEL",
        true,
        text,
        json!({ "graph": render::dag(&g), "count": m.len(), "statements": statements }),
    ))
}

fn reversals(start: &Dag, target: &Dag) -> Result<TransformSequence, CliError> {
    let ops = reversal_sequence(start, target)?
        .into_iter()
        .map(|r| TransformOp::reverse(r.tail, r.head))
        .collect();
    Ok(TransformSequence {
        start: start.clone(),
        ops,
    })
}

fn equiv(first: &Path, second: &Path, sequence: bool) -> Res {
    let (k, l) = pair_of(first, second)?;
    if !equivalent(&k, &l)? {
        let reason = if k.adjacency() != l.adjacency() {
            "skeletons differ"
        } else {
            "immoralities differ"
        };
        return Ok(Outcome::new(
            "NOT EQUIVALENT",
            false,
            format!("NOT EQUIVALENT ({reason})\n"),
            json!({ "reason": reason, "sequence": null }),
        ));
    }
    let mut text = "EQUIVALENT\n".to_string();
    let mut fields = json!({ "sequence": null });
    if sequence {
        let seq = reversals(&k, &l)?;
        write!(
            text,
            "legal reversals turning the first graph into the second:\n{}",
            render::sequence_text(&seq)
        )
        .unwrap();
        fields = json!({ "sequence": render::sequence(&seq) });
    }
    Ok(Outcome::new("EQUIVALENT", true, text, fields))
}

fn includes_cmd(kp: &Path, lp: &Path) -> Res {
    let (k, l) = pair_of(kp, lp)?;
    match inclusion_witness(&k, &l)? {
        None => Ok(Outcome::new(
            "INCLUDED",
            true,
            "INCLUDED\n".into(),
            json!({ "witness": null }),
        )),
        Some((u, v)) => {
            let sep = (k.parents(u) | k.parents(v)).without(u).without(v);
            let path = find_dependence_complex(&l, u, v, sep)?.expect("pair is connected in L");
            let sep_names = render::names(&k, sep);
            let text = format!(
                "NOT INCLUDED\n{} and {} are non-adjacent in K, but not separated in L by \
                 their K-parents {{{}}}\nwitness in L:\n{}",
                k.name(u),
                k.name(v),
                sep_names.join(","),
                render::complex_text(&l, &path)
            );
            Ok(Outcome::new(
                "NOT INCLUDED",
                false,
                text,
                json!({
                    "witness": {
                        "condition": "(**)",
                        "u": k.name(u),
                        "v": k.name(v),
                        "separator": sep_names,
                        "complex_in_l": render::complex(&l, &path),
                    }
                }),
            ))
        }
    }
}

fn conditions(kp: &Path, lp: &Path, set: SetArg) -> Res {
    let (k, l) = pair_of(kp, lp)?;
    let set = match set {
        SetArg::Basic => ConditionSet::Basic,
        SetArg::Verma => ConditionSet::Verma,
        SetArg::Inclusion => ConditionSet::Inclusion,
        SetArg::Graphical => ConditionSet::Graphical,
    };
    let report = check_conditions(set, &k, &l)?;
    let labels: Vec<&str> = set.conditions().iter().map(|c| c.label()).collect();
    let verdict = if report.satisfied {
        "SATISFIED"
    } else {
        "VIOLATED"
    };
    let mut text = format!("{verdict} {}\n", labels.join(" "));
    for v in &report.violations {
        writeln!(text, "  {}", v.display(&k)).unwrap();
    }
    let violations: Vec<Value> = report
        .violations
        .iter()
        .map(|v| render::violation(&k, v))
        .collect();
    Ok(Outcome::new(
        verdict,
        report.satisfied,
        text,
        json!({ "conditions": labels, "violations": violations }),
    ))
}

fn one_edge(lp: &Path, kp: &Path) -> Res {
    let (l, k) = pair_of(lp, kp)?;
    let seq = one_edge_sequence(&l, &k)?;
    Ok(Outcome::new(
        "SEQUENCE",
        true,
        format!("SEQUENCE\n{}", render::sequence_text(&seq)),
        json!({ "sequence": render::sequence(&seq) }),
    ))
}

fn meek(lp: &Path, kp: &Path, max_steps: Option<usize>) -> Res {
    let (l, k) = pair_of(lp, kp)?;
    let bound = max_steps.unwrap_or_else(|| default_max_steps(&k));
    let outcome = meek_search(&l, &k, Some(bound))?;
    Ok(match outcome {
        MeekOutcome::Found(seq) => {
            let shape = if seq.is_simple_shape() {
                ""
            } else {
                " (interleaved)"
            };
            Outcome::new(
                "FOUND",
                true,
                format!("FOUND{shape}\n{}", render::sequence_text(&seq)),
                json!({ "max_steps": bound, "sequence": render::sequence(&seq) }),
            )
        }
        MeekOutcome::Exhausted => Outcome::new(
            "EXHAUSTED",
            false,
            format!("EXHAUSTED: no sequence within {bound} steps\n"),
            json!({ "max_steps": bound, "sequence": null }),
        ),
        MeekOutcome::NoSequence => Outcome::new(
            "NO SEQUENCE",
            false,
            "NO SEQUENCE: the whole state space was searched\n".into(),
            json!({ "max_steps": bound, "sequence": null }),
        ),
    })
}

fn fuzz(mode: FuzzMode, n: usize, seed: Option<u64>, trials: Option<usize>) -> Res {
    if mode == FuzzMode::Locality {
        return locality(n);
    }
    let space = match (seed, trials) {
        (None, None) => PairSpace::Exhaustive { cap: max_n()? },
        (seed, trials) => PairSpace::Random {
            seed: seed.unwrap_or(0),
            trials: trials.unwrap_or(1000),
        },
    };
    let space_json = match space {
        PairSpace::Exhaustive { .. } => json!({ "exhaustive": true }),
        PairSpace::Random { seed, trials } => {
            json!({ "exhaustive": false, "seed": seed, "trials": trials })
        }
    };
    let list = |pairs: &[dag_inclusion::sweep::Pair], text: &mut String| -> Vec<Value> {
        for p in pairs {
            writeln!(text, "  {}", render::pair_text(p)).unwrap();
        }
        pairs.iter().map(render::pair).collect()
    };
    match mode {
        FuzzMode::Conditions => {
            let r = conditions_fuzz(n, space)?;
            let mut text = format!("REPORT {} pairs checked\n", r.pairs_checked);
            writeln!(
                text,
                "basic and Verma conditions hold without inclusion: {}",
                r.basic_verma_insufficient.len()
            )
            .unwrap();
            let bv = list(&r.basic_verma_insufficient, &mut text);
            writeln!(
                text,
                "(a), (b~), (*) hold without inclusion: {}",
                r.inclusion_conditions_insufficient.len()
            )
            .unwrap();
            let inc = list(&r.inclusion_conditions_insufficient, &mut text);
            writeln!(
                text,
                "necessary conditions failing on included pairs: {}",
                r.necessity_violations.len()
            )
            .unwrap();
            let nec = list(&r.necessity_violations, &mut text);
            let clean = r.necessity_violations.is_empty();
            Ok(Outcome::new(
                "REPORT",
                clean,
                text,
                json!({
                    "mode": "conditions",
                    "n": n,
                    "space": space_json,
                    "pairs_checked": r.pairs_checked,
                    "basic_verma_insufficient": bv,
                    "inclusion_conditions_insufficient": inc,
                    "necessity_violations": nec,
                }),
            ))
        }
        FuzzMode::Meek => {
            let r = meek_sweep(n, space)?;
            let mut text = format!("REPORT {} included pairs searched\n", r.included_pairs);
            writeln!(
                text,
                "pairs without any sequence: {}",
                r.counterexamples.len()
            )
            .unwrap();
            let ce = list(&r.counterexamples, &mut text);
            writeln!(
                text,
                "pairs needing interleaved reversals and additions: {}",
                r.not_simple.len()
            )
            .unwrap();
            let ns = list(&r.not_simple, &mut text);
            Ok(Outcome::new(
                "REPORT",
                r.counterexamples.is_empty(),
                text,
                json!({
                    "mode": "meek",
                    "n": n,
                    "space": space_json,
                    "included_pairs": r.included_pairs,
                    "counterexamples": ce,
                    "not_simple": ns,
                }),
            ))
        }
        FuzzMode::Locality => unreachable!(),
    }
}

fn locality(n: usize) -> Res {
    if n == 0 {
        return Err(CliError::plain("--n must be at least 1 for locality"));
    }
    let mut text = String::from("REPORT\n");
    let mut rows = Vec::new();
    let mut all = true;
    for m in 1..=n {
        let p = locality_pair(m)?;
        let inc = includes(&p.k, &p.l)?;
        all &= inc;
        writeln!(
            text,
            "  path length {}: L = {}  included: {inc}",
            m + 1,
            render::compact(&p.l)
        )
        .unwrap();
        rows.push(json!({ "length": m + 1, "pair": render::pair(&p), "included": inc }));
    }
    Ok(Outcome::new(
        "REPORT",
        all,
        text,
        json!({ "mode": "locality", "n": n, "pairs": rows }),
    ))
}

fn enumerate(n: usize) -> Res {
    let count = enumerate_dags(standard_nodes(n), max_n()?)?.count();
    Ok(Outcome::new(
        "COUNT",
        true,
        format!("{count} labeled DAGs on {n} nodes\n"),
        json!({ "n": n, "count": count }),
    ))
}

/// Verdict lines (`FOUND (interleaved)`), headers ending in `:` and
/// `(no operations)`, as printed around sequences.
fn is_header(line: &str) -> bool {
    let verdict = line
        .split_whitespace()
        .next()
        .is_some_and(|w| w.chars().all(|c| c.is_ascii_uppercase()));
    verdict || line.ends_with(':') || line == "(no operations)"
}

/// Parses `reverse a -> b` / `add a -> b` lines, optionally numbered.
/// Accepts the text output of `equiv --sequence`, `one-edge` and `meek`.
fn parse_ops_text(g: &Dag, text: &str) -> Result<Vec<TransformOp>, CliError> {
    let mut ops = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() || is_header(line) {
            continue;
        }
        let bad = || {
            CliError::plain(format!(
                "line {}: expected `reverse a -> b` or `add a -> b`",
                i + 1
            ))
        };
        let line = match line.split_once(". ") {
            Some((num, rest)) if num.chars().all(|c| c.is_ascii_digit()) => rest.trim(),
            _ => line,
        };
        let (verb, rest) = line.split_once(char::is_whitespace).ok_or_else(bad)?;
        let (t, h) = rest.split_once("->").ok_or_else(bad)?;
        let (t, h) = (g.index_of(t.trim())?, g.index_of(h.trim())?);
        ops.push(match verb {
            "reverse" => TransformOp::reverse(t, h),
            "add" => TransformOp::add(t, h),
            _ => return Err(bad()),
        });
    }
    Ok(ops)
}

fn parse_ops_json(g: &Dag, text: &str) -> Result<Vec<TransformOp>, CliError> {
    let doc: Value =
        serde_json::from_str(text).map_err(|e| CliError::plain(format!("invalid JSON: {e}")))?;
    let ops = doc
        .pointer("/sequence/ops")
        .or_else(|| doc.get("ops"))
        .and_then(Value::as_array)
        .ok_or_else(|| CliError::plain("JSON has no `sequence.ops` or `ops` array"))?;
    ops.iter()
        .map(|op| {
            let field = |name: &str| {
                op.get(name)
                    .and_then(Value::as_str)
                    .ok_or_else(|| CliError::plain(format!("operation without string `{name}`")))
            };
            let (t, h) = (g.index_of(field("tail")?)?, g.index_of(field("head")?)?);
            match field("kind")? {
                "reverse" => Ok(TransformOp::reverse(t, h)),
                "add" => Ok(TransformOp::add(t, h)),
                other => Err(CliError::plain(format!("unknown operation kind {other:?}"))),
            }
        })
        .collect()
}

fn replay(start: &Path, ops_path: &Path, target: Option<&Path>) -> Res {
    let g = read_dag(start)?;
    let text = std::fs::read_to_string(ops_path).map_err(|e| CliError {
        file: Some(ops_path.display().to_string()),
        error: None,
        message: e.to_string(),
    })?;
    let ops = if text.trim_start().starts_with('{') {
        parse_ops_json(&g, &text)?
    } else {
        parse_ops_text(&g, &text)?
    };
    let mut cur = g.clone();
    for (i, op) in ops.iter().enumerate() {
        cur = op.apply(&cur).map_err(|e| CliError {
            file: None,
            message: format!("step {} ({}): {e}", i + 1, op.display(&cur)),
            error: Some(e),
        })?;
    }
    let seq = TransformSequence { start: g, ops };
    let mut fields =
        json!({ "steps": seq.ops.len(), "end": render::dag(&cur), "matches_target": null });
    let mut text = format!(
        "REPLAYED {} steps\nend: {}\n",
        seq.ops.len(),
        render::compact(&cur)
    );
    let Some(tp) = target else {
        return Ok(Outcome::new("REPLAYED", true, text, fields));
    };
    let want = read_dag(tp)?;
    let matches = want == cur;
    fields["matches_target"] = json!(matches);
    let verdict = if matches { "MATCHES" } else { "DIFFERS" };
    writeln!(text, "{verdict} target {}", render::compact(&want)).unwrap();
    Ok(Outcome::new(verdict, matches, text, fields))
}

#[cfg(test)]
mod tests {
    use super::*;
    use dag_inclusion::OpKind;

    fn chain() -> Dag {
        Dag::new(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap()
    }

    #[test]
    fn ops_text_accepts_printed_sequences() {
        let text = "FOUND (interleaved)\n  1. add a -> c\n  2. reverse a -> b # note\n\n";
        let ops = parse_ops_text(&chain(), text).unwrap();
        assert_eq!(
            ops,
            vec![TransformOp::add(0, 2), TransformOp::reverse(0, 1)]
        );
        let header =
            "legal reversals turning the first graph into the second:\n  (no operations)\n";
        assert!(parse_ops_text(&chain(), header).unwrap().is_empty());
    }

    #[test]
    fn ops_text_errors() {
        assert!(parse_ops_text(&chain(), "flip a -> b").is_err());
        assert!(parse_ops_text(&chain(), "add a b").is_err());
        assert!(parse_ops_text(&chain(), "add a -> z").is_err());
    }

    #[test]
    fn ops_json() {
        let doc = r#"{"sequence": {"ops": [{"kind": "add", "tail": "a", "head": "c"}]}}"#;
        let ops = parse_ops_json(&chain(), doc).unwrap();
        assert_eq!(ops[0].kind, OpKind::Add);
        let bare = r#"{"ops": [{"kind": "reverse", "tail": "b", "head": "c"}]}"#;
        assert_eq!(
            parse_ops_json(&chain(), bare).unwrap(),
            vec![TransformOp::reverse(1, 2)]
        );
        assert!(parse_ops_json(
            &chain(),
            r#"{"ops": [{"kind": "swap", "tail": "a", "head": "b"}]}"#
        )
        .is_err());
        assert!(parse_ops_json(&chain(), "{").is_err());
    }
}
