//! Conditions for `I(K) ⊆ I(L)` and the decision procedure.
//!
//! All checks take `k` first and `l` second and ask whether the model of `k`
//! is contained in the model of `l`; `l` is typically the sparser graph.

use std::fmt;
use std::str::FromStr;

use crate::dag::Dag;
use crate::error::{Error, Result};
use crate::nodeset::NodeSet;
use crate::separation::composite::plus_w;
use crate::separation::d_connected_sets;

/// Which local condition a violation belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Condition {
    /// (a): edges of L are edges of K.
    A,
    /// (b~): immoralities of L are edges or immoralities of K.
    BTilde,
    /// (c~): immoralities of K with both legs in L are immoralities of L.
    CTilde,
    VermaI,
    VermaII,
    VermaIII,
    /// (*): K-immoralities are separated in L by the union of K-parents.
    Star,
    /// (**): every K-non-adjacent pair is separated in L by the union of K-parents.
    Enforced,
    GraphB,
    GraphC,
    GraphD,
    GraphE,
}

impl Condition {
    pub fn label(self) -> &'static str {
        match self {
            Condition::A => "(a)",
            Condition::BTilde => "(b~)",
            Condition::CTilde => "(c~)",
            Condition::VermaI => "(i)",
            Condition::VermaII => "(ii)",
            Condition::VermaIII => "(iii)",
            Condition::Star => "(*)",
            Condition::Enforced => "(**)",
            Condition::GraphB => "(b)",
            Condition::GraphC => "(c)",
            Condition::GraphD => "(d)",
            Condition::GraphE => "(e)",
        }
    }

    /// Number of nodes in a witness.
    pub fn arity(self) -> usize {
        match self {
            Condition::A | Condition::VermaI | Condition::Enforced => 2,
            Condition::GraphD | Condition::GraphE => 4,
            _ => 3,
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A failed instance of a condition.
///
/// Witness layout: `(u, v)` for two-node conditions, `(u, v, w)` for
/// three-node ones except `(c)` which is the path `(u, w, v)`, and the path
/// `(u, w, t, v)` for `(d)` and `(e)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Violation {
    pub condition: Condition,
    pub witness: Vec<usize>,
}

impl Violation {
    /// Re-evaluates this instance; true iff it is still violated.
    pub fn recheck(&self, k: &Dag, l: &Dag) -> bool {
        self.witness.len() == self.condition.arity()
            && self.witness.iter().all(|&x| x < k.n())
            && violated(self.condition, k, l, &self.witness)
    }

    pub fn display(&self, g: &Dag) -> String {
        let names: Vec<&str> = self.witness.iter().map(|&x| g.name(x)).collect();
        format!("{} at ({})", self.condition, names.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConditionReport {
    pub satisfied: bool,
    pub violations: Vec<Violation>,
}

/// The four condition ladders.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionSet {
    Basic,
    Verma,
    Inclusion,
    Graphical,
}

impl ConditionSet {
    pub fn conditions(self) -> &'static [Condition] {
        use Condition::*;
        match self {
            ConditionSet::Basic => &[A, BTilde, CTilde],
            ConditionSet::Verma => &[VermaI, VermaII, VermaIII],
            ConditionSet::Inclusion => &[A, BTilde, Star],
            ConditionSet::Graphical => &[A, GraphB, GraphC, GraphD, GraphE],
        }
    }
}

impl FromStr for ConditionSet {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "basic" => Ok(ConditionSet::Basic),
            "verma" => Ok(ConditionSet::Verma),
            "inclusion" => Ok(ConditionSet::Inclusion),
            "graphical" => Ok(ConditionSet::Graphical),
            other => Err(format!(
                "unknown condition set {other:?}; expected basic, verma, inclusion or graphical"
            )),
        }
    }
}

/// u−w−v: a path with `w` not a collider.
fn open3(g: &Dag, u: usize, w: usize, v: usize) -> bool {
    u != v && g.adjacent(u, w) && g.adjacent(w, v) && !(g.has_arrow(u, w) && g.has_arrow(v, w))
}

/// u−w−t−v: a path of four distinct nodes with no collider.
fn open4(g: &Dag, u: usize, w: usize, t: usize, v: usize) -> bool {
    u != t && w != v && u != v && open3(g, u, w, t) && open3(g, w, t, v)
}

fn v_shape(g: &Dag, u: usize, w: usize, v: usize) -> bool {
    u != v && g.has_arrow(u, w) && g.has_arrow(v, w)
}

/// Separation of `u`, `v` in `l` by the union of their parents in `k`.
fn parents_separate(k: &Dag, l: &Dag, u: usize, v: usize) -> bool {
    let sep = (k.parents(u) | k.parents(v)).without(u).without(v);
    !d_connected_sets(l, NodeSet::singleton(u), NodeSet::singleton(v), sep)
}

fn violated(cond: Condition, k: &Dag, l: &Dag, x: &[usize]) -> bool {
    use Condition::*;
    match cond {
        A | VermaI => {
            let (u, v) = (x[0], x[1]);
            u != v && l.adjacent(u, v) && !k.adjacent(u, v)
        }
        Enforced => {
            let (u, v) = (x[0], x[1]);
            u != v && !k.adjacent(u, v) && !parents_separate(k, l, u, v)
        }
        BTilde => {
            let (u, v, w) = (x[0], x[1], x[2]);
            distinct(x)
                && l.is_immorality(u, v, w)
                && !(k.adjacent(u, v) || k.is_immorality(u, v, w))
        }
        CTilde => {
            let (u, v, w) = (x[0], x[1], x[2]);
            distinct(x)
                && k.is_immorality(u, v, w)
                && l.adjacent(u, w)
                && l.adjacent(w, v)
                && !l.is_immorality(u, v, w)
        }
        VermaII => {
            let (u, v, w) = (x[0], x[1], x[2]);
            distinct(x) && plus_w(l, u, v, w) && !plus_w(k, u, v, w)
        }
        VermaIII => {
            let (u, v, w) = (x[0], x[1], x[2]);
            distinct(x)
                && plus_w(k, u, v, w)
                && l.adjacent(u, w)
                && l.adjacent(w, v)
                && !(plus_w(l, u, v, w) || k.adjacent(u, v))
        }
        Star => {
            let (u, v, w) = (x[0], x[1], x[2]);
            distinct(x) && k.is_immorality(u, v, w) && !parents_separate(k, l, u, v)
        }
        GraphB => {
            let (u, v, w) = (x[0], x[1], x[2]);
            distinct(x) && v_shape(l, u, w, v) && !(k.adjacent(u, v) || v_shape(k, u, w, v))
        }
        GraphC => {
            let (u, w, v) = (x[0], x[1], x[2]);
            distinct(x) && open3(l, u, w, v) && !(k.adjacent(u, v) || open3(k, u, w, v))
        }
        GraphD => {
            let (u, w, t, v) = (x[0], x[1], x[2], x[3]);
            let pattern = |g: &Dag| g.has_arrow(u, w) && g.has_arrow(t, w) && g.adjacent(t, v);
            distinct(x)
                && pattern(l)
                && !(k.adjacent(u, v) || open3(k, u, t, v) || v_shape(k, u, w, v) || pattern(k))
        }
        GraphE => {
            let (u, w, t, v) = (x[0], x[1], x[2], x[3]);
            distinct(x)
                && open4(l, u, w, t, v)
                && !(k.adjacent(u, v)
                    || open3(k, u, w, v)
                    || open3(k, u, t, v)
                    || open4(k, u, w, t, v))
        }
    }
}

fn distinct(x: &[usize]) -> bool {
    x.iter().copied().collect::<NodeSet>().len() == x.len()
}

/// Candidate witnesses for `cond` over `n` nodes.
fn candidates(cond: Condition, n: usize, mut visit: impl FnMut(&[usize]) -> bool) {
    use Condition::*;
    match cond.arity() {
        2 => {
            for u in 0..n {
                for v in u + 1..n {
                    if !visit(&[u, v]) {
                        return;
                    }
                }
            }
        }
        3 => {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if a == b || b == c || a == c {
                            continue;
                        }
                        // Symmetric in the outer pair: keep the smaller first.
                        let keep = match cond {
                            GraphC => a < c,
                            _ => a < b,
                        };
                        if keep && !visit(&[a, b, c]) {
                            return;
                        }
                    }
                }
            }
        }
        _ => {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        for d in 0..n {
                            let x = [a, b, c, d];
                            if !distinct(&x) || (cond == GraphE && a > d) {
                                continue;
                            }
                            if !visit(&x) {
                                return;
                            }
                        }
                    }
                }
            }
        }
    }
}

fn report(k: &Dag, l: &Dag, conds: &[Condition]) -> Result<ConditionReport> {
    k.check_same_nodes(l)?;
    let mut violations = Vec::new();
    for &cond in conds {
        candidates(cond, k.n(), |x| {
            if violated(cond, k, l, x) {
                violations.push(Violation {
                    condition: cond,
                    witness: x.to_vec(),
                });
            }
            true
        });
    }
    Ok(ConditionReport {
        satisfied: violations.is_empty(),
        violations,
    })
}

/// Whether every condition holds, stopping at the first violation.
fn holds(k: &Dag, l: &Dag, conds: &[Condition]) -> Result<bool> {
    k.check_same_nodes(l)?;
    let mut ok = true;
    for &cond in conds {
        candidates(cond, k.n(), |x| {
            ok = !violated(cond, k, l, x);
            ok
        });
        if !ok {
            break;
        }
    }
    Ok(ok)
}

pub fn check_conditions(set: ConditionSet, k: &Dag, l: &Dag) -> Result<ConditionReport> {
    report(k, l, set.conditions())
}

pub fn conditions_hold(set: ConditionSet, k: &Dag, l: &Dag) -> Result<bool> {
    holds(k, l, set.conditions())
}

/// (a), (b~), (c~).
pub fn basic_conditions(k: &Dag, l: &Dag) -> Result<ConditionReport> {
    check_conditions(ConditionSet::Basic, k, l)
}

/// Verma's (i)–(iii), with `+w` dependence evaluated graphically.
pub fn verma_conditions(k: &Dag, l: &Dag) -> Result<ConditionReport> {
    check_conditions(ConditionSet::Verma, k, l)
}

/// (a), (b~), (*).
pub fn inclusion_conditions(k: &Dag, l: &Dag) -> Result<ConditionReport> {
    check_conditions(ConditionSet::Inclusion, k, l)
}

/// The local conditions (a)–(e).
pub fn graphical_conditions(k: &Dag, l: &Dag) -> Result<ConditionReport> {
    check_conditions(ConditionSet::Graphical, k, l)
}

/// Decides `I(K) ⊆ I(L)`: every pair non-adjacent in `k` must be separated
/// in `l` by the union of its parents in `k`.
pub fn includes(k: &Dag, l: &Dag) -> Result<bool> {
    Ok(inclusion_witness(k, l)?.is_none())
}

/// First pair `(u, v)` breaking the enforced condition, if any.
pub fn inclusion_witness(k: &Dag, l: &Dag) -> Result<Option<(usize, usize)>> {
    k.check_same_nodes(l)?;
    let n = k.n();
    for u in 0..n {
        for v in u + 1..n {
            if !k.adjacent(u, v) && !parents_separate(k, l, u, v) {
                return Ok(Some((u, v)));
            }
        }
    }
    Ok(None)
}

/// Inclusion via the basic conditions, valid when `|E(K)| ≤ |E(L)|`.
pub fn same_size_inclusion(k: &Dag, l: &Dag) -> Result<bool> {
    k.check_same_nodes(l)?;
    if k.edge_count() > l.edge_count() {
        return Err(Error::SizePreconditionViolated {
            k: k.edge_count(),
            l: l.edge_count(),
        });
    }
    conditions_hold(ConditionSet::Basic, k, l)
}
