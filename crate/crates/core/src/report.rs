//! Check reports and the tuple enumerator shared by all identity checkers.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::exactq::Vector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// No violation among the evaluable tuples.
    Pass,
    Fail,
    /// A precondition failed, so the check was not run.
    Blocked,
    NotApplicable,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Blocked => "blocked",
            Status::NotApplicable => "n/a",
        };
        write!(f, "{s}")
    }
}

/// A concrete counterexample: named arguments and the nonzero residual.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub args: Vec<(String, String)>,
    pub residual: String,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let args: Vec<String> = self.args.iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(f, "{} -> residual {}", args.join(", "), self.residual)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub status: Status,
    pub evaluated: u64,
    pub skipped: u64,
    pub violations: u64,
    pub witness: Option<Witness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn blocked(name: &str, why: impl Into<String>) -> Self {
        CheckReport {
            name: name.to_string(),
            status: Status::Blocked,
            evaluated: 0,
            skipped: 0,
            violations: 0,
            witness: None,
            note: Some(why.into()),
        }
    }

    pub fn not_applicable(name: &str, why: impl Into<String>) -> Self {
        CheckReport { status: Status::NotApplicable, ..Self::blocked(name, why) }
    }

    /// Single yes/no fact with an optional explanation on failure.
    pub fn verdict(name: &str, ok: bool, note: Option<String>) -> Self {
        CheckReport {
            name: name.to_string(),
            status: if ok { Status::Pass } else { Status::Fail },
            evaluated: 1,
            skipped: 0,
            violations: u64::from(!ok),
            witness: None,
            note,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<28} {:<8} evaluated={} skipped={} violations={}",
            self.name, self.status, self.evaluated, self.skipped, self.violations
        )?;
        if let Some(w) = &self.witness {
            write!(f, "\n    witness: {w}")?;
        }
        if let Some(n) = &self.note {
            write!(f, "\n    note: {n}")?;
        }
        Ok(())
    }
}

/// Accumulates outcomes while a checker walks its tuples.
#[derive(Debug)]
pub struct Tally {
    name: String,
    evaluated: u64,
    skipped: u64,
    violations: u64,
    witness: Option<Witness>,
}

impl Tally {
    pub fn new(name: &str) -> Self {
        Tally { name: name.to_string(), evaluated: 0, skipped: 0, violations: 0, witness: None }
    }

    /// Record one tuple. `residual` is `None` when the tuple could not be
    /// evaluated; `witness` is only called for the first violation.
    pub fn record<F>(&mut self, residual: Option<Vector>, witness: F)
    where
        F: FnOnce(&Vector) -> Witness,
    {
        match residual {
            None => self.skipped += 1,
            Some(r) => {
                self.evaluated += 1;
                if !r.is_zero() {
                    self.violations += 1;
                    if self.witness.is_none() {
                        self.witness = Some(witness(&r));
                    }
                }
            }
        }
    }

    /// Record a boolean outcome.
    pub fn record_bool<F>(&mut self, outcome: Option<bool>, witness: F)
    where
        F: FnOnce() -> Witness,
    {
        match outcome {
            None => self.skipped += 1,
            Some(true) => self.evaluated += 1,
            Some(false) => {
                self.evaluated += 1;
                self.violations += 1;
                if self.witness.is_none() {
                    self.witness = Some(witness());
                }
            }
        }
    }

    /// Record `n` tuples known to have zero residual.
    pub fn add_passes(&mut self, n: u64) {
        self.evaluated += n;
    }

    pub fn add_skipped(&mut self, n: u64) {
        self.skipped += n;
    }

    pub fn has_violation(&self) -> bool {
        self.violations > 0
    }

    pub fn finish(self) -> CheckReport {
        CheckReport {
            name: self.name,
            status: if self.violations == 0 { Status::Pass } else { Status::Fail },
            evaluated: self.evaluated,
            skipped: self.skipped,
            violations: self.violations,
            witness: self.witness,
            note: None,
        }
    }
}

/// One group of tuple slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Block {
    /// `len` independent indices in `0..range`.
    Free { len: usize, range: usize },
    /// `len` strictly increasing indices in `0..range` (alternating slots).
    Increasing { len: usize, range: usize },
    /// `len` non-decreasing indices in `0..range` (symmetric slots).
    NonDecreasing { len: usize, range: usize },
}

impl Block {
    fn len(&self) -> usize {
        match *self {
            Block::Free { len, .. } | Block::Increasing { len, .. } | Block::NonDecreasing { len, .. } => len,
        }
    }

    fn range(&self) -> usize {
        match *self {
            Block::Free { range, .. } | Block::Increasing { range, .. } | Block::NonDecreasing { range, .. } => range,
        }
    }

    /// Smallest admissible value at position `pos` given the previous one.
    fn start(&self, pos: usize, prev: Option<usize>) -> usize {
        match (self, pos, prev) {
            (_, 0, _) | (Block::Free { .. }, _, _) => 0,
            (Block::Increasing { .. }, _, Some(p)) => p + 1,
            (Block::NonDecreasing { .. }, _, Some(p)) => p,
            _ => 0,
        }
    }
}

/// Visit every tuple allowed by the blocks in lexicographic order.
pub fn for_each_tuple<F>(blocks: &[Block], mut f: F)
where
    F: FnMut(&[usize]),
{
    let slots: Vec<(usize, usize)> = blocks
        .iter()
        .enumerate()
        .flat_map(|(b, blk)| (0..blk.len()).map(move |p| (b, p)))
        .collect();
    let mut t = vec![0usize; slots.len()];
    fill(blocks, &slots, &mut t, 0, &mut f);
}

fn fill<F>(blocks: &[Block], slots: &[(usize, usize)], t: &mut [usize], s: usize, f: &mut F)
where
    F: FnMut(&[usize]),
{
    if s == slots.len() {
        f(t);
        return;
    }
    let (b, p) = slots[s];
    let prev = if p > 0 { Some(t[s - 1]) } else { None };
    for v in blocks[b].start(p, prev)..blocks[b].range() {
        t[s] = v;
        fill(blocks, slots, t, s + 1, f);
    }
}

/// Test support: verify that a residual has the formal symmetries a checker
/// relies on when it only walks sorted tuples.
#[cfg(test)]
pub(crate) mod symmetry {
    use crate::exactq::Vector;

    #[derive(Debug, Clone, Copy)]
    pub enum Group<'a> {
        /// Residual changes sign under swaps of these slots.
        Alt(&'a [usize]),
        /// Residual is invariant under permutations of these slots.
        Sym(&'a [usize]),
    }

    /// Sorted representative and sign; `None` if an alternating group repeats.
    pub fn canonical(t: &[usize], groups: &[Group]) -> Option<(bool, Vec<usize>)> {
        let mut rep = t.to_vec();
        let mut neg = false;
        for g in groups {
            let (pos, alt) = match g {
                Group::Alt(p) => (*p, true),
                Group::Sym(p) => (*p, false),
            };
            let mut vals: Vec<usize> = pos.iter().map(|&p| t[p]).collect();
            // Bubble sort to track the permutation sign.
            for a in 0..vals.len() {
                for b in 0..vals.len() - 1 - a {
                    if vals[b] > vals[b + 1] {
                        vals.swap(b, b + 1);
                        neg ^= alt;
                    }
                }
            }
            if alt && vals.windows(2).any(|w| w[0] == w[1]) {
                return None;
            }
            for (&p, v) in pos.iter().zip(vals) {
                rep[p] = v;
            }
        }
        Some((neg, rep))
    }

    pub fn assert_reduction<F>(ranges: &[usize], groups: &[Group], mut f: F)
    where
        F: FnMut(&[usize]) -> Vector,
    {
        let mut t = vec![0usize; ranges.len()];
        let mut nonzero = 0;
        loop {
            let val = f(&t);
            match canonical(&t, groups) {
                None => assert!(val.is_zero(), "residual at {t:?} should vanish"),
                Some((neg, rep)) => {
                    let r = f(&rep);
                    let expect = if neg { r.neg() } else { r };
                    assert_eq!(val, expect, "symmetry fails at {t:?} vs {rep:?}");
                    nonzero += usize::from(!val.is_zero());
                }
            }
            let mut s = ranges.len();
            loop {
                if s == 0 {
                    assert!(nonzero > 0, "random data gave an identically zero residual");
                    return;
                }
                s -= 1;
                t[s] += 1;
                if t[s] < ranges[s] {
                    break;
                }
                t[s] = 0;
            }
        }
    }
}
