//! The JSON bundle file format.
//!
//! Vectors are sparse `[[index, "p/q"], ...]` lists, matrices sparse
//! `[[row, col, "p/q"], ...]` lists, all indices 0-based. An unevaluable
//! structure constant is written as `null`. Saving is canonical: sorted
//! entries, no zeros, fixed key order, so `save(load(f)) == f` byte for byte
//! for any file produced by `save`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::core3lie::Hom3Lie;
use crate::exactq::{MatrixQ, PartialMap, Rational, SubspaceQ, Vector};
use crate::repmod::PairAction;
use crate::rinehart::{self, CommAlgebra, Flags, ModuleAction, RinehartBundle};

pub const FORMAT: &str = "hom3lr-bundle/1";

#[derive(Debug, thiserror::Error)]
pub enum BundleFileError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("{at}: {message}")]
    Invalid { at: String, message: String },
    #[error("declared flag {flag:?} does not hold: {reason}")]
    Flag { flag: &'static str, reason: String },
}

fn invalid(at: impl Into<String>, message: impl Into<String>) -> BundleFileError {
    BundleFileError::Invalid { at: at.into(), message: message.into() }
}

type SparseVec = Vec<(usize, String)>;
type SparseMat = Vec<(usize, usize, String)>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleFile {
    pub format: String,
    #[serde(rename = "L")]
    pub l: LieSection,
    #[serde(rename = "A")]
    pub a: AlgebraSection,
    /// Nonzero maps `x ↦ a_k x`.
    #[serde(default)]
    pub action: Vec<ActionEntry>,
    /// Nonzero `ρ(e_i, e_j)` with `i < j`.
    #[serde(default)]
    pub rho: Vec<RhoEntry>,
    #[serde(default)]
    pub flags: Flags,
    #[serde(rename = "H", default, skip_serializing_if = "Option::is_none")]
    pub h: Option<Vec<SparseVec>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LieSection {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub labels: Vec<String>,
    /// `[i, j, k, value]`.
    pub bracket: Vec<(usize, usize, usize, Option<SparseVec>)>,
    pub alpha: SparseMat,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSection {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub labels: Vec<String>,
    /// `[i, j, value]` with `i <= j`.
    pub mult: Vec<(usize, usize, Option<SparseVec>)>,
    pub phi: SparseMat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<SparseVec>,
}

/// A partial matrix: defined entries plus the columns with no known image.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialEntries {
    pub entries: SparseMat,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub undefined: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionEntry {
    pub a: usize,
    #[serde(flatten)]
    pub map: PartialEntries,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RhoEntry {
    pub pair: (usize, usize),
    #[serde(flatten)]
    pub map: PartialEntries,
}

fn vec_out(v: &Vector) -> SparseVec {
    v.iter().map(|(i, c)| (i, c.to_string())).collect()
}

fn mat_out(m: &MatrixQ) -> SparseMat {
    m.entries().into_iter().map(|(i, j, c)| (i, j, c.to_string())).collect()
}

fn partial_out(p: &PartialMap) -> PartialEntries {
    let mut entries = Vec::new();
    let mut undefined = Vec::new();
    for (j, col) in p.columns().iter().enumerate() {
        match col {
            None => undefined.push(j),
            Some(v) => entries.extend(v.iter().map(|(i, c)| (i, j, c.to_string()))),
        }
    }
    entries.sort_by_key(|&(i, j, _)| (i, j));
    PartialEntries { entries, undefined }
}

fn is_zero_map(p: &PartialMap) -> bool {
    p.is_total() && p.columns().iter().all(|c| c.as_ref().is_some_and(Vector::is_zero))
}

impl BundleFile {
    pub fn from_bundle(b: &RinehartBundle) -> Self {
        let action = (0..b.a_dim())
            .filter(|&k| !is_zero_map(b.action.map(k)))
            .map(|k| ActionEntry { a: k, map: partial_out(b.action.map(k)) })
            .collect();
        let rho = b.rho.entries().map(|(&pair, op)| RhoEntry { pair, map: partial_out(op) }).collect();
        BundleFile {
            format: FORMAT.to_string(),
            l: LieSection {
                dim: b.l_dim(),
                labels: b.lie.labels.clone(),
                bracket: b.lie.bracket.entries().into_iter().map(|([i, j, k], v)| (i, j, k, v.as_ref().map(vec_out))).collect(),
                alpha: mat_out(&b.lie.alpha),
            },
            a: AlgebraSection {
                dim: b.a_dim(),
                labels: b.alg.labels.clone(),
                mult: b.alg.products().into_iter().map(|((i, j), v)| (i, j, v.as_ref().map(vec_out))).collect(),
                phi: mat_out(&b.alg.phi),
                unit: b.alg.unit.as_ref().map(vec_out),
            },
            action,
            rho,
            flags: b.flags,
            h: b.h.as_ref().map(|h| h.basis().iter().map(vec_out).collect()),
            metadata: BTreeMap::new(),
        }
    }

    /// Builds the bundle and checks shapes, antisymmetry and index ranges.
    /// Declared flags are not verified here; see [`load_str`].
    pub fn to_bundle(&self) -> Result<RinehartBundle, BundleFileError> {
        if self.format != FORMAT {
            return Err(invalid("format", format!("expected {FORMAT:?}, got {:?}", self.format)));
        }
        let (n, m) = (self.l.dim, self.a.dim);
        if n == 0 || m == 0 {
            return Err(invalid("dim", "L and A must be nonzero"));
        }

        let mut bracket = crate::core3lie::Bracket::new(n);
        for (t, (i, j, k, v)) in self.l.bracket.iter().enumerate() {
            let at = format!("L.bracket[{t}]");
            let value = v.as_ref().map(|v| parse_vec(v, n, &at)).transpose()?;
            bracket
                .set(*i, *j, *k, value)
                .map_err(|e| invalid(&at, format!("triple ({i}, {j}, {k}): {e}")))?;
        }
        let alpha = parse_mat(&self.l.alpha, n, n, "L.alpha")?;
        let mut lie = Hom3Lie::new(bracket, alpha);
        if !self.l.labels.is_empty() {
            check_labels(&self.l.labels, n, "L.labels")?;
            lie = lie.with_labels(self.l.labels.clone());
        }

        let mut alg = CommAlgebra::new(m);
        for (t, (i, j, v)) in self.a.mult.iter().enumerate() {
            let at = format!("A.mult[{t}]");
            let value = v.as_ref().map(|v| parse_vec(v, m, &at)).transpose()?;
            alg.set_product(*i, *j, value).map_err(|e| invalid(&at, e.to_string()))?;
        }
        alg.phi = parse_mat(&self.a.phi, m, m, "A.phi")?;
        alg.unit = self.a.unit.as_ref().map(|u| parse_vec(u, m, "A.unit")).transpose()?;
        if !self.a.labels.is_empty() {
            check_labels(&self.a.labels, m, "A.labels")?;
            alg.labels = self.a.labels.clone();
        }

        let mut maps = vec![None; m];
        for (t, e) in self.action.iter().enumerate() {
            let at = format!("action[{t}]");
            if e.a >= m {
                return Err(invalid(&at, format!("algebra index {} out of range", e.a)));
            }
            if maps[e.a].is_some() {
                return Err(invalid(&at, format!("map for a{} given twice", e.a)));
            }
            maps[e.a] = Some(parse_partial(&e.map, n, &at)?);
        }
        let maps = maps.into_iter().map(|p| p.unwrap_or_else(|| PartialMap::zero(n, n))).collect();
        let action = ModuleAction::new(maps, n).map_err(|e| invalid("action", e.to_string()))?;

        let mut rho = PairAction::new(n, m);
        for (t, e) in self.rho.iter().enumerate() {
            let at = format!("rho[{t}]");
            let (i, j) = e.pair;
            let op = parse_partial(&e.map, m, &at)?;
            rho.set(i, j, op).map_err(|err| invalid(&at, format!("pair ({i}, {j}): {err}")))?;
        }

        let mut b = RinehartBundle::new(lie, alg, action, rho).map_err(|e| invalid("bundle", e.to_string()))?;
        b.flags = self.flags;
        if let Some(h) = &self.h {
            let vs = h.iter().enumerate().map(|(t, v)| parse_vec(v, n, &format!("H[{t}]"))).collect::<Result<Vec<_>, _>>()?;
            let space = SubspaceQ::span(n, vs.iter());
            if space.dim() != vs.len() {
                return Err(invalid("H", "basis vectors are linearly dependent"));
            }
            b.h = Some(space);
        }
        Ok(b)
    }
}

fn check_labels(labels: &[String], n: usize, at: &str) -> Result<(), BundleFileError> {
    if labels.len() != n {
        return Err(invalid(at, format!("{} labels for dimension {n}", labels.len())));
    }
    Ok(())
}

fn parse_q(s: &str, at: &str) -> Result<Rational, BundleFileError> {
    s.parse().map_err(|e| invalid(at, format!("{s:?}: {e}")))
}

fn parse_vec(v: &SparseVec, dim: usize, at: &str) -> Result<Vector, BundleFileError> {
    let mut seen = std::collections::HashSet::new();
    let mut pairs = Vec::with_capacity(v.len());
    for (i, c) in v {
        if *i >= dim {
            return Err(invalid(at, format!("index {i} out of range for dimension {dim}")));
        }
        if !seen.insert(*i) {
            return Err(invalid(at, format!("index {i} repeated")));
        }
        pairs.push((*i, parse_q(c, at)?));
    }
    Ok(Vector::from_pairs(dim, pairs))
}

fn parse_entries(e: &SparseMat, rows: usize, cols: usize, at: &str) -> Result<Vec<(usize, usize, Rational)>, BundleFileError> {
    let mut seen = std::collections::HashSet::new();
    e.iter()
        .map(|(i, j, c)| {
            if *i >= rows || *j >= cols {
                return Err(invalid(at, format!("entry ({i}, {j}) out of range for {rows}x{cols}")));
            }
            if !seen.insert((*i, *j)) {
                return Err(invalid(at, format!("entry ({i}, {j}) repeated")));
            }
            Ok((*i, *j, parse_q(c, at)?))
        })
        .collect()
}

fn parse_mat(e: &SparseMat, rows: usize, cols: usize, at: &str) -> Result<MatrixQ, BundleFileError> {
    Ok(MatrixQ::from_entries(rows, cols, parse_entries(e, rows, cols, at)?))
}

fn parse_partial(p: &PartialEntries, n: usize, at: &str) -> Result<PartialMap, BundleFileError> {
    let m = parse_mat(&p.entries, n, n, at)?;
    let mut cols: Vec<Option<Vector>> = m.columns().iter().cloned().map(Some).collect();
    for &j in &p.undefined {
        if j >= n {
            return Err(invalid(at, format!("undefined column {j} out of range")));
        }
        if !m.column(j).is_zero() {
            return Err(invalid(at, format!("column {j} is both undefined and given entries")));
        }
        cols[j] = None;
    }
    Ok(PartialMap::from_columns(n, cols))
}

/// Re-verifies every flag the file declares.
pub fn verify_flags(b: &RinehartBundle) -> Result<(), BundleFileError> {
    let fail = |flag: &'static str, r: &rinehart::RinehartReport| {
        let first = r.first_failure().map(|c| c.to_string()).unwrap_or_default();
        BundleFileError::Flag { flag, reason: first }
    };
    if b.flags.weak {
        let r = rinehart::check_weak_rinehart(b);
        if !r.passed() {
            return Err(fail("weak", &r));
        }
    }
    if b.flags.full {
        let r = rinehart::check_full_rinehart(b);
        if !r.passed() {
            return Err(fail("full", &r));
        }
    }
    if b.flags.regular {
        let r = rinehart::check_regular(b);
        if !r.passed() {
            return Err(BundleFileError::Flag { flag: "regular", reason: r.note.unwrap_or_default() });
        }
    }
    Ok(())
}

pub fn parse_str(s: &str) -> Result<BundleFile, BundleFileError> {
    serde_json::from_str(s).map_err(|e| BundleFileError::Parse { line: e.line(), column: e.column(), message: e.to_string() })
}

/// Parses, validates and re-verifies the declared flags.
pub fn load_str(s: &str) -> Result<RinehartBundle, BundleFileError> {
    let b = parse_str(s)?.to_bundle()?;
    verify_flags(&b)?;
    Ok(b)
}

pub fn load(path: &Path) -> Result<RinehartBundle, BundleFileError> {
    let s = std::fs::read_to_string(path).map_err(|source| BundleFileError::Io { path: path.display().to_string(), source })?;
    load_str(&s)
}

/// Canonical pretty JSON with a trailing newline.
pub fn to_string(b: &RinehartBundle) -> String {
    file_to_string(&BundleFile::from_bundle(b))
}

pub fn file_to_string(f: &BundleFile) -> String {
    let mut s = serde_json::to_string_pretty(f).expect("bundle files always serialize");
    s.push('\n');
    s
}

pub fn save(b: &RinehartBundle, path: &Path) -> std::io::Result<()> {
    std::fs::write(path, to_string(b))
}
