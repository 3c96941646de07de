//! Exponential polynomials in `x, y, z`: finite sums of
//! `c * x^a y^b z^c e^{k z}` with rational `c`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::exactq::{Rational, Vector};

/// Exponents `(a, b, c, k)` of `x^a y^b z^c e^{k z}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mono {
    pub x: u32,
    pub y: u32,
    pub z: u32,
    pub k: i64,
}

impl Mono {
    pub const ONE: Mono = Mono { x: 0, y: 0, z: 0, k: 0 };

    pub fn new(x: u32, y: u32, z: u32, k: i64) -> Self {
        Mono { x, y, z, k }
    }

    pub fn poly_degree(&self) -> u32 {
        self.x + self.y + self.z
    }

    fn mul(&self, o: &Mono) -> Mono {
        Mono { x: self.x + o.x, y: self.y + o.y, z: self.z + o.z, k: self.k + o.k }
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (name, e) in [("x", self.x), ("y", self.y), ("z", self.z)] {
            match e {
                0 => {}
                1 => parts.push(name.to_string()),
                _ => parts.push(format!("{name}^{e}")),
            }
        }
        if self.k != 0 {
            parts.push(format!("e^{{{} z}}", self.k));
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ExpPoly {
    terms: BTreeMap<Mono, Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse exponential polynomial term {term:?}: {reason}")]
pub struct ParseExpPolyError {
    pub term: String,
    pub reason: String,
}

impl ExpPoly {
    pub fn zero() -> Self {
        ExpPoly::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, Mono::ONE)
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn term(c: Rational, m: Mono) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        ExpPoly { terms }
    }

    pub fn mono(m: Mono) -> Self {
        Self::term(Rational::one(), m)
    }

    pub fn x() -> Self {
        Self::mono(Mono::new(1, 0, 0, 0))
    }

    pub fn y() -> Self {
        Self::mono(Mono::new(0, 1, 0, 0))
    }

    pub fn z() -> Self {
        Self::mono(Mono::new(0, 0, 1, 0))
    }

    pub fn exp(k: i64) -> Self {
        Self::mono(Mono::new(0, 0, 0, k))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Rational)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Mono) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    fn add_term(&mut self, m: Mono, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, o: &ExpPoly) -> ExpPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, c);
        }
        out
    }

    pub fn sub(&self, o: &ExpPoly) -> ExpPoly {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> ExpPoly {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> ExpPoly {
        if c.is_zero() {
            return ExpPoly::zero();
        }
        ExpPoly { terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect() }
    }

    pub fn mul(&self, o: &ExpPoly) -> ExpPoly {
        let mut out = ExpPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term(m1.mul(m2), &(c1 * c2));
            }
        }
        out
    }

    pub fn dx(&self) -> ExpPoly {
        let mut out = ExpPoly::zero();
        for (m, c) in &self.terms {
            if m.x > 0 {
                out.add_term(Mono { x: m.x - 1, ..*m }, &(c * &Rational::from_int(m.x as i64)));
            }
        }
        out
    }

    pub fn dy(&self) -> ExpPoly {
        let mut out = ExpPoly::zero();
        for (m, c) in &self.terms {
            if m.y > 0 {
                out.add_term(Mono { y: m.y - 1, ..*m }, &(c * &Rational::from_int(m.y as i64)));
            }
        }
        out
    }

    pub fn dz(&self) -> ExpPoly {
        let mut out = ExpPoly::zero();
        for (m, c) in &self.terms {
            if m.z > 0 {
                out.add_term(Mono { z: m.z - 1, ..*m }, &(c * &Rational::from_int(m.z as i64)));
            }
            if m.k != 0 {
                out.add_term(*m, &(c * &Rational::from_int(m.k)));
            }
        }
        out
    }

    /// Largest `a + b + c` over the terms.
    pub fn poly_degree(&self) -> u32 {
        self.terms.keys().map(Mono::poly_degree).max().unwrap_or(0)
    }

    /// Largest `|k|` over the terms.
    pub fn max_exp(&self) -> i64 {
        self.terms.keys().map(|m| m.k.abs()).max().unwrap_or(0)
    }

    /// Coordinates in a monomial basis; `None` if some term is outside it.
    pub fn coords(&self, index: &HashMap<Mono, usize>, dim: usize) -> Option<Vector> {
        let mut pairs = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            pairs.push((*index.get(m)?, c.clone()));
        }
        Some(Vector::from_pairs(dim, pairs))
    }

    /// Inverse of `coords`.
    pub fn from_coords(v: &Vector, basis: &[Mono]) -> ExpPoly {
        let mut out = ExpPoly::zero();
        for (i, c) in v.iter() {
            out.add_term(basis[i], c);
        }
        out
    }

    /// Random element with `poly_degree <= max_degree`, `|k| <= max_exp`.
    pub fn sample<R: Rng>(rng: &mut R, max_degree: u32, max_exp: i64, max_terms: usize) -> ExpPoly {
        let mut out = ExpPoly::zero();
        let n = rng.gen_range(1..=max_terms.max(1));
        for _ in 0..n {
            let d = rng.gen_range(0..=max_degree);
            let a = rng.gen_range(0..=d);
            let b = rng.gen_range(0..=d - a);
            let c = d - a - b;
            let k = rng.gen_range(-max_exp..=max_exp);
            let num = rng.gen_range(-5i64..=5);
            let den = rng.gen_range(1i64..=3);
            out.add_term(Mono::new(a, b, c, k), &Rational::new(num, den));
        }
        out
    }
}

/// Determinant of the Jacobian of `(f, g, h)` with respect to `(x, y, z)`.
pub fn jacobian(f: &ExpPoly, g: &ExpPoly, h: &ExpPoly) -> ExpPoly {
    let r = |p: &ExpPoly| [p.dx(), p.dy(), p.dz()];
    let (a, b, c) = (r(f), r(g), r(h));
    let m1 = b[1].mul(&c[2]).sub(&b[2].mul(&c[1]));
    let m2 = b[0].mul(&c[2]).sub(&b[2].mul(&c[0]));
    let m3 = b[0].mul(&c[1]).sub(&b[1].mul(&c[0]));
    a[0].mul(&m1).sub(&a[1].mul(&m2)).add(&a[2].mul(&m3))
}

impl fmt::Display for ExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if *m == Mono::ONE {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag} * {m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExpPoly({self})")
    }
}

fn parse_term(src: &str) -> Result<(Rational, Mono), ParseExpPolyError> {
    let err = |reason: &str| ParseExpPolyError { term: src.to_string(), reason: reason.to_string() };
    let mut coeff = Rational::one();
    let mut mono = Mono::ONE;
    let s: String = src.chars().filter(|c| !c.is_whitespace()).collect();
    let mut rest = s.as_str();
    // Leading rational coefficient.
    let end = rest.find(|c: char| !(c.is_ascii_digit() || c == '/')).unwrap_or(rest.len());
    if end > 0 {
        coeff = rest[..end].parse().map_err(|_| err("bad coefficient"))?;
        rest = &rest[end..];
    }
    while !rest.is_empty() {
        rest = rest.strip_prefix('*').unwrap_or(rest);
        if let Some(r) = rest.strip_prefix("e^{") {
            let close = r.find('}').ok_or_else(|| err("unterminated exponent"))?;
            let inner = &r[..close];
            let k = inner.strip_suffix('z').ok_or_else(|| err("exponent must be of the form k z"))?;
            let k: i64 = match k {
                "" => 1,
                "-" => -1,
                _ => k.parse().map_err(|_| err("bad exponent"))?,
            };
            mono.k += k;
            rest = &r[close + 1..];
            continue;
        }
        let var = rest.chars().next().unwrap();
        rest = &rest[1..];
        let mut e = 1u32;
        if let Some(r) = rest.strip_prefix('^') {
            let end = r.find(|c: char| !c.is_ascii_digit()).unwrap_or(r.len());
            e = r[..end].parse().map_err(|_| err("bad power"))?;
            rest = &r[end..];
        }
        match var {
            'x' => mono.x += e,
            'y' => mono.y += e,
            'z' => mono.z += e,
            _ => return Err(err("unknown symbol")),
        }
    }
    Ok((coeff, mono))
}

impl FromStr for ExpPoly {
    type Err = ParseExpPolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut out = ExpPoly::zero();
        // Split on top-level + and - outside braces.
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        let mut depth = 0;
        for ch in s.chars() {
            match ch {
                '{' => {
                    depth += 1;
                    cur.push(ch);
                }
                '}' => {
                    depth -= 1;
                    cur.push(ch);
                }
                '+' | '-' if depth == 0 => {
                    if !cur.trim().is_empty() {
                        terms.push((neg, std::mem::take(&mut cur)));
                    }
                    cur.clear();
                    neg = ch == '-';
                }
                _ => cur.push(ch),
            }
        }
        if !cur.trim().is_empty() {
            terms.push((neg, cur));
        }
        for (neg, t) in terms {
            if t.trim() == "0" {
                continue;
            }
            let (c, m) = parse_term(&t)?;
            out.add_term(m, &if neg { -c } else { c });
        }
        Ok(out)
    }
}
