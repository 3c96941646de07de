//! Connections between roots: breadth-first search over `±Γ`, a literal
//! evaluation of connection chains used as an oracle, and root classes.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::exactq::MatrixQ;
use crate::report::{CheckReport, Tally, Witness};

use super::roots::{RootDecomposition, RootForm, WeightDecomposition};
use super::SplitError;

/// Forms whose classes are computed (`roots`) and the extra summands allowed
/// in connections (`weights`), with `α|_H` for pullbacks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSystem {
    pub roots: Vec<RootForm>,
    pub weights: Vec<RootForm>,
    pub alpha_h: MatrixQ,
    alpha_h_inv: MatrixQ,
}

/// `{γ_1, (γ_2, γ_3), ..., (γ_2n, γ_2n+1)}`; no pairs means
/// `γ' = ±γ(α^k, α^k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Connection {
    pub first: RootForm,
    pub pairs: Vec<(RootForm, RootForm)>,
}

impl RootSystem {
    pub fn new(roots: Vec<RootForm>, weights: Vec<RootForm>, alpha_h: MatrixQ) -> Result<Self, SplitError> {
        let alpha_h_inv = alpha_h.inverse().ok_or(SplitError::AlphaNotInvertible)?;
        Ok(RootSystem { roots, weights, alpha_h, alpha_h_inv })
    }

    pub fn from_decompositions(dec: &RootDecomposition, wdec: &WeightDecomposition) -> Result<Self, SplitError> {
        RootSystem::new(dec.forms(), wdec.forms(), dec.alpha_h.clone())
    }

    /// Weights in the role of roots, as in the decomposition of `A`.
    pub fn for_weights(&self) -> RootSystem {
        RootSystem {
            roots: self.weights.clone(),
            weights: self.roots.clone(),
            alpha_h: self.alpha_h.clone(),
            alpha_h_inv: self.alpha_h_inv.clone(),
        }
    }

    pub fn h(&self) -> usize {
        self.alpha_h.rows()
    }

    /// `δ(α^{-1}, α^{-1})`.
    pub fn pull_inv(&self, d: &RootForm) -> RootForm {
        d.compose(&self.alpha_h_inv)
    }

    /// `δ(α^k, α^k)`.
    pub fn pull(&self, d: &RootForm, k: i32) -> RootForm {
        let m = if k >= 0 { &self.alpha_h } else { &self.alpha_h_inv };
        let mut out = d.clone();
        for _ in 0..k.unsigned_abs() {
            out = out.compose(m);
        }
        out
    }

    fn pm_roots(&self) -> HashSet<RootForm> {
        self.roots.iter().flat_map(|g| [g.clone(), g.neg()]).collect()
    }

    /// `±Γ ∪ ±Λ ∪ {0}` in a fixed order.
    pub fn summands(&self) -> Vec<RootForm> {
        let mut out = vec![RootForm::zero(self.h())];
        for g in self.roots.iter().chain(&self.weights) {
            for s in [g.clone(), g.neg()] {
                if !out.contains(&s) {
                    out.push(s);
                }
            }
        }
        out
    }

    /// `{γ(α^k, α^k) : k ∈ Z}`. Pullbacks permute a genuine root system, so
    /// the orbit is finite; the walk is capped in case they do not.
    pub fn orbit(&self, g: &RootForm) -> Vec<RootForm> {
        let cap = 2 * self.roots.len() + 2;
        let mut out = vec![g.clone()];
        for m in [&self.alpha_h, &self.alpha_h_inv] {
            let mut cur = g.compose(m);
            for _ in 0..cap {
                if out.contains(&cur) {
                    break;
                }
                out.push(cur.clone());
                cur = cur.compose(m);
            }
        }
        out
    }

    fn require_root(&self, g: &RootForm) -> Result<(), SplitError> {
        if self.roots.contains(g) {
            Ok(())
        } else {
            Err(SplitError::NotARoot)
        }
    }

    /// Breadth-first search for a connection from `γ` to `γ'`. States are
    /// the partial sums `γ̄_i ∈ ±Γ`, with
    /// `γ̄_i = (γ̄_{i-1} + γ_{2i} + γ_{2i+1})(α^{-1}, α^{-1})`.
    pub fn connected(&self, g: &RootForm, g2: &RootForm) -> Result<Option<Connection>, SplitError> {
        self.require_root(g)?;
        self.require_root(g2)?;
        let start = self.orbit(g);
        let targets: HashSet<RootForm> = self.orbit(g2).into_iter().flat_map(|t| [t.neg(), t]).collect();
        if start.iter().any(|s| targets.contains(s)) {
            return Ok(Some(Connection { first: g.clone(), pairs: Vec::new() }));
        }
        let allowed = self.pm_roots();
        let summands = self.summands();
        let mut parent: HashMap<RootForm, Option<(RootForm, RootForm, RootForm)>> = HashMap::new();
        let mut queue = VecDeque::new();
        for s in &start {
            parent.insert(s.clone(), None);
            queue.push_back(s.clone());
        }
        let chain = |parent: &HashMap<RootForm, Option<(RootForm, RootForm, RootForm)>>, mut cur: RootForm| {
            let mut pairs = Vec::new();
            while let Some(Some((prev, mu, beta))) = parent.get(&cur) {
                pairs.push((mu.clone(), beta.clone()));
                cur = prev.clone();
            }
            pairs.reverse();
            Connection { first: cur, pairs }
        };
        while let Some(d) = queue.pop_front() {
            for a in 0..summands.len() {
                for c in a..summands.len() {
                    let next = self.pull_inv(&d.add(&summands[a]).add(&summands[c]));
                    if targets.contains(&next) {
                        let mut conn = chain(&parent, d.clone());
                        conn.pairs.push((summands[a].clone(), summands[c].clone()));
                        return Ok(Some(conn));
                    }
                    if allowed.contains(&next) && !parent.contains_key(&next) {
                        parent.insert(next.clone(), Some((d.clone(), summands[a].clone(), summands[c].clone())));
                        queue.push_back(next);
                    }
                }
            }
        }
        Ok(None)
    }

    /// `γ̄_i` summed term by term:
    /// `γ_1(α^{-i}, α^{-i}) + Σ_{j ≤ i} (γ_2j + γ_2j+1)(α^{-i-1+j}, α^{-i-1+j})`.
    pub fn literal_partial(&self, c: &Connection, i: usize) -> RootForm {
        let i32i = i as i32;
        let mut acc = self.pull(&c.first, -i32i);
        for (j, (mu, beta)) in c.pairs.iter().take(i).enumerate() {
            let j = j as i32 + 1;
            acc = acc.add(&self.pull(&mu.add(beta), -i32i - 1 + j));
        }
        acc
    }

    /// `γ̄_i` by the recurrence used in the search.
    pub fn recurrence_partial(&self, c: &Connection, i: usize) -> RootForm {
        let mut acc = c.first.clone();
        for (mu, beta) in c.pairs.iter().take(i) {
            acc = self.pull_inv(&acc.add(mu).add(beta));
        }
        acc
    }

    /// Checks a chain against the definition, evaluating every `γ̄_i` by
    /// the literal sum.
    pub fn is_connection(&self, g: &RootForm, g2: &RootForm, c: &Connection) -> bool {
        let pm_target = |x: &RootForm| self.orbit(g2).iter().any(|t| t == x || &t.neg() == x);
        if c.pairs.is_empty() {
            return self.orbit(g).iter().any(pm_target);
        }
        if !self.orbit(g).contains(&c.first) {
            return false;
        }
        let summands = self.summands();
        if !c.pairs.iter().all(|(m, b)| summands.contains(m) && summands.contains(b)) {
            return false;
        }
        let allowed = self.pm_roots();
        let n = c.pairs.len();
        (1..n).all(|i| allowed.contains(&self.literal_partial(c, i))) && pm_target(&self.literal_partial(c, n))
    }

    /// Exhaustive search over chains with at most `max_pairs` pairs, checked
    /// by `is_connection`.
    pub fn literal_connected(&self, g: &RootForm, g2: &RootForm, max_pairs: usize) -> Option<Connection> {
        let trivial = Connection { first: g.clone(), pairs: Vec::new() };
        if self.is_connection(g, g2, &trivial) {
            return Some(trivial);
        }
        let summands = self.summands();
        let mut unordered = Vec::new();
        for a in 0..summands.len() {
            for c in a..summands.len() {
                unordered.push((summands[a].clone(), summands[c].clone()));
            }
        }
        for first in self.orbit(g) {
            for n in 1..=max_pairs {
                let mut idx = vec![0usize; n];
                loop {
                    let conn = Connection { first: first.clone(), pairs: idx.iter().map(|&k| unordered[k].clone()).collect() };
                    if self.is_connection(g, g2, &conn) {
                        return Some(conn);
                    }
                    let mut p = n;
                    loop {
                        if p == 0 {
                            break;
                        }
                        p -= 1;
                        idx[p] += 1;
                        if idx[p] < unordered.len() {
                            break;
                        }
                        idx[p] = 0;
                    }
                    if idx.iter().all(|&k| k == 0) {
                        break;
                    }
                }
            }
        }
        None
    }
}

/// Classes of `roots` under connection, as index lists into `roots`.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct RootClassPartition {
    pub classes: Vec<Vec<usize>>,
}

impl RootClassPartition {
    pub fn class_of(&self, i: usize) -> Option<usize> {
        self.classes.iter().position(|c| c.contains(&i))
    }

    /// Disjoint blocks covering `0..n`.
    pub fn is_partition(&self, n: usize) -> bool {
        let mut seen = vec![false; n];
        for c in &self.classes {
            if c.is_empty() {
                return false;
            }
            for &i in c {
                if i >= n || seen[i] {
                    return false;
                }
                seen[i] = true;
            }
        }
        seen.into_iter().all(|s| s)
    }
}

pub fn root_classes(sys: &RootSystem) -> Result<RootClassPartition, SplitError> {
    let n = sys.roots.len();
    let mut assigned = vec![false; n];
    let mut classes = Vec::new();
    for i in 0..n {
        if assigned[i] {
            continue;
        }
        let mut class = vec![i];
        assigned[i] = true;
        for j in i + 1..n {
            if !assigned[j] && sys.connected(&sys.roots[i], &sys.roots[j])?.is_some() {
                class.push(j);
                assigned[j] = true;
            }
        }
        classes.push(class);
    }
    Ok(RootClassPartition { classes })
}

/// Equivalence laws of the relation on a computed partition, plus
/// invariance under pullbacks and closure under admissible sums.
pub fn check_connection_laws(sys: &RootSystem, part: &RootClassPartition) -> Vec<CheckReport> {
    let n = sys.roots.len();
    let r = &sys.roots;
    let conn = |a: usize, b: usize| sys.connected(&r[a], &r[b]).ok().flatten().is_some();
    let rel: Vec<Vec<bool>> = (0..n).map(|a| (0..n).map(|b| conn(a, b)).collect()).collect();
    let w = |names: &[(&str, usize)], what: &str| Witness {
        args: names.iter().map(|(k, i)| (k.to_string(), format!("root {i}"))).collect(),
        residual: what.to_string(),
    };

    let mut partition = Tally::new("classes_partition");
    partition.record_bool(Some(part.is_partition(n)), || w(&[], "blocks overlap or miss a root"));
    for a in 0..n {
        for b in 0..n {
            let same = part.class_of(a) == part.class_of(b);
            partition.record_bool(Some(same == rel[a][b]), || w(&[("g", a), ("g'", b)], "class disagrees with the relation"));
        }
    }

    let mut refl = Tally::new("connection_reflexive");
    let mut sym = Tally::new("connection_symmetric");
    let mut trans = Tally::new("connection_transitive");
    for a in 0..n {
        refl.record_bool(Some(rel[a][a]), || w(&[("g", a)], "not connected to itself"));
        for b in 0..n {
            sym.record_bool(Some(!rel[a][b] || rel[b][a]), || w(&[("g", a), ("g'", b)], "relation not symmetric"));
            for c in 0..n {
                trans.record_bool(Some(!(rel[a][b] && rel[b][c]) || rel[a][c]), || {
                    w(&[("g", a), ("g'", b), ("g''", c)], "relation not transitive")
                });
            }
        }
    }

    let index = |f: &RootForm| r.iter().position(|g| g == f);
    let mut pull = Tally::new("connection_pullback_invariant");
    let mut sums = Tally::new("connection_sum_closed");
    let summands = sys.summands();
    for a in 0..n {
        for b in 0..n {
            if !rel[a][b] {
                continue;
            }
            for k1 in -1..=1 {
                for k2 in -1..=1 {
                    let (Some(p), Some(q)) = (index(&sys.pull(&r[a], k1)), index(&sys.pull(&r[b], k2))) else {
                        pull.add_skipped(1);
                        continue;
                    };
                    pull.record_bool(Some(rel[p][q]), || w(&[("g", a), ("g'", b)], "pullbacks not connected"));
                }
            }
            for s in 0..summands.len() {
                for t in s..summands.len() {
                    if let Some(c) = index(&r[a].add(&summands[s]).add(&summands[t])) {
                        sums.record_bool(Some(rel[b][c]), || w(&[("g", a), ("g'", b), ("sum", c)], "admissible sum not connected"));
                    }
                }
            }
        }
    }
    vec![partition.finish(), refl.finish(), sym.finish(), trans.finish(), pull.finish(), sums.finish()]
}
