use std::collections::BTreeMap;
use std::fmt;

use super::Rational;

/// Sparse vector over Q: sorted `(index, value)` pairs, zeros never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Vector {
    dim: usize,
    entries: Vec<(usize, Rational)>,
}

impl Vector {
    pub fn zero(dim: usize) -> Self {
        Vector { dim, entries: Vec::new() }
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        assert!(i < dim, "basis index {i} out of range for dimension {dim}");
        Vector { dim, entries: vec![(i, Rational::one())] }
    }

    pub fn from_dense(values: &[Rational]) -> Self {
        let entries = values
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| (i, v.clone()))
            .collect();
        Vector { dim: values.len(), entries }
    }

    /// Build from arbitrary `(index, value)` pairs; repeated indices are summed.
    pub fn from_pairs<I>(dim: usize, pairs: I) -> Self
    where
        I: IntoIterator<Item = (usize, Rational)>,
    {
        let mut acc = Accumulator::new(dim);
        for (i, v) in pairs {
            acc.add(i, &v);
        }
        acc.finish()
    }

    pub fn from_ints(values: &[i64]) -> Self {
        let dense: Vec<Rational> = values.iter().map(|&v| Rational::from_int(v)).collect();
        Self::from_dense(&dense)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize) -> Rational {
        match self.entries.binary_search_by_key(&i, |(j, _)| *j) {
            Ok(p) => self.entries[p].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rational)> + '_ {
        self.entries.iter().map(|(i, v)| (*i, v))
    }

    pub fn to_dense(&self) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim];
        for (i, v) in &self.entries {
            out[*i] = v.clone();
        }
        out
    }

    /// First nonzero index.
    pub fn leading(&self) -> Option<(usize, &Rational)> {
        self.entries.first().map(|(i, v)| (*i, v))
    }

    pub fn scale(&self, c: &Rational) -> Vector {
        if c.is_zero() {
            return Vector::zero(self.dim);
        }
        if c.is_one() {
            return self.clone();
        }
        Vector {
            dim: self.dim,
            entries: self.entries.iter().map(|(i, v)| (*i, v * c)).collect(),
        }
    }

    pub fn neg(&self) -> Vector {
        Vector {
            dim: self.dim,
            entries: self.entries.iter().map(|(i, v)| (*i, -v)).collect(),
        }
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, c: &Rational, other: &Vector) -> Vector {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        if c.is_zero() || other.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut p, mut q) = (0, 0);
        let (a, b) = (&self.entries, &other.entries);
        while p < a.len() || q < b.len() {
            let take_a = q >= b.len() || (p < a.len() && a[p].0 < b[q].0);
            let take_b = p >= a.len() || (q < b.len() && b[q].0 < a[p].0);
            if take_a {
                out.push(a[p].clone());
                p += 1;
            } else if take_b {
                out.push((b[q].0, c * &b[q].1));
                q += 1;
            } else {
                let v = &a[p].1 + &(c * &b[q].1);
                if !v.is_zero() {
                    out.push((a[p].0, v));
                }
                p += 1;
                q += 1;
            }
        }
        Vector { dim: self.dim, entries: out }
    }

    pub fn add(&self, other: &Vector) -> Vector {
        self.add_scaled(&Rational::one(), other)
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        self.add_scaled(&-Rational::one(), other)
    }

    pub fn dot(&self, other: &Vector) -> Rational {
        let mut acc = Rational::zero();
        let (mut p, mut q) = (0, 0);
        while p < self.entries.len() && q < other.entries.len() {
            let (i, j) = (self.entries[p].0, other.entries[q].0);
            if i == j {
                acc += &self.entries[p].1 * &other.entries[q].1;
                p += 1;
                q += 1;
            } else if i < j {
                p += 1;
            } else {
                q += 1;
            }
        }
        acc
    }

    /// Concatenate `self` (first block) and `other` (second block).
    pub fn concat(&self, other: &Vector) -> Vector {
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().map(|(i, v)| (i + self.dim, v.clone())));
        Vector { dim: self.dim + other.dim, entries }
    }

    /// Re-embed into a space of dimension `dim`, shifting indices by `offset`.
    pub fn embed(&self, dim: usize, offset: usize) -> Vector {
        assert!(offset + self.dim <= dim);
        Vector {
            dim,
            entries: self.entries.iter().map(|(i, v)| (i + offset, v.clone())).collect(),
        }
    }

    /// Components with indices in `start..start+len`, re-indexed from 0.
    pub fn slice(&self, start: usize, len: usize) -> Vector {
        Vector {
            dim: len,
            entries: self
                .entries
                .iter()
                .filter(|(i, _)| *i >= start && *i < start + len)
                .map(|(i, v)| (i - start, v.clone()))
                .collect(),
        }
    }

    /// Render with basis labels, e.g. `2*x - 1/2*y`.
    pub fn render(&self, labels: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, (i, v)) in self.entries.iter().enumerate() {
            let name = labels.get(*i).cloned().unwrap_or_else(|| format!("e{}", i + 1));
            let (neg, mag) = if v.is_negative() { (true, -v) } else { (false, v.clone()) };
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if mag.is_one() {
                s.push_str(&name);
            } else {
                s.push_str(&format!("{mag}*{name}"));
            }
        }
        s
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Vector[{}]{{", self.dim)?;
        for (k, (i, v)) in self.entries.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{i}: {v}")?;
        }
        write!(f, "}}")
    }
}

/// Mutable sum of many sparse terms.
#[derive(Debug, Clone)]
pub struct Accumulator {
    dim: usize,
    terms: BTreeMap<usize, Rational>,
}

impl Accumulator {
    pub fn new(dim: usize) -> Self {
        Accumulator { dim, terms: BTreeMap::new() }
    }

    pub fn add(&mut self, i: usize, v: &Rational) {
        assert!(i < self.dim, "index {i} out of range for dimension {}", self.dim);
        if v.is_zero() {
            return;
        }
        let slot = self.terms.entry(i).or_insert_with(Rational::zero);
        *slot += v;
    }

    pub fn add_vector(&mut self, c: &Rational, v: &Vector) {
        assert_eq!(v.dim, self.dim, "dimension mismatch");
        if c.is_zero() {
            return;
        }
        for (i, x) in v.iter() {
            self.add(i, &(c * x));
        }
    }

    pub fn finish(self) -> Vector {
        Vector {
            dim: self.dim,
            entries: self.terms.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
        }
    }
}
