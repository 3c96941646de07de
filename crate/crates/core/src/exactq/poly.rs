//! Univariate polynomials over Q, characteristic polynomials and rational
//! eigenvalues.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::rational::bigint_divisors;
use super::{MatrixQ, Rational, SubspaceQ};

/// Coefficients from the constant term upwards, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpectrumError {
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("constant term {0} too large to enumerate rational root candidates")]
    TooLarge(String),
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| Rational::from_int(v)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![Rational::one()] }
    }

    /// `x - r`.
    pub fn linear(r: &Rational) -> Self {
        Poly::new(vec![-r, Rational::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn lead(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = &acc * x + c;
        }
        acc
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        Poly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// Quotient and remainder.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead_inv = d.lead().recip();
        let mut rem = self.coeffs.clone();
        let Some(sd) = self.degree() else {
            return (Poly::zero(), Poly::zero());
        };
        if sd < dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); sd - dd + 1];
        for k in (0..=sd - dd).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[k + j] -= &c * dc;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * &Rational::from_int(i as i64))
                .collect(),
        )
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(&self.lead().recip())
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Same roots, each simple.
    pub fn squarefree(&self) -> Poly {
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Integer polynomial with the same roots and coprime coefficients.
    fn primitive_integer(&self) -> Vec<BigInt> {
        let mut l = BigInt::one();
        for c in &self.coeffs {
            l = l.lcm(&c.denom());
        }
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| c.numer() * (&l / c.denom())).collect();
        let mut g = BigInt::zero();
        for c in &ints {
            g = g.gcd(c);
        }
        if g.is_zero() {
            return ints;
        }
        ints.into_iter().map(|c| c / &g).collect()
    }

    /// Distinct rational roots in increasing order.
    pub fn rational_roots(&self) -> Result<Vec<Rational>, SpectrumError> {
        const DIVISOR_SEARCH_LIMIT: u64 = 2_000_000;
        if self.degree().unwrap_or(0) == 0 {
            return Ok(Vec::new());
        }
        let mut p = self.squarefree();
        let mut roots = Vec::new();
        if p.coeff(0).is_zero() {
            roots.push(Rational::zero());
            p = p.div_rem(&Poly::linear(&Rational::zero())).0;
        }
        loop {
            if p.degree().unwrap_or(0) == 0 {
                break;
            }
            let ints = p.primitive_integer();
            let a0 = ints[0].clone();
            let an = ints.last().unwrap().clone();
            let too_large = |n: &BigInt| SpectrumError::TooLarge(n.to_string());
            let num = bigint_divisors(&a0, DIVISOR_SEARCH_LIMIT).ok_or_else(|| too_large(&a0))?;
            let den = bigint_divisors(&an, DIVISOR_SEARCH_LIMIT).ok_or_else(|| too_large(&an))?;
            let mut found = None;
            'search: for d in &den {
                for n in &num {
                    for s in [n.clone(), -n.clone()] {
                        let cand = Rational::from_big(num_rational::BigRational::new(s, d.clone()));
                        if p.eval(&cand).is_zero() {
                            found = Some(cand);
                            break 'search;
                        }
                    }
                }
            }
            match found {
                Some(r) => {
                    p = p.div_rem(&Poly::linear(&r)).0;
                    roots.push(r);
                }
                None => break,
            }
        }
        roots.sort();
        Ok(roots)
    }

    /// Multiplicity of `r` as a root.
    pub fn multiplicity(&self, r: &Rational) -> usize {
        let lin = Poly::linear(r);
        let mut p = self.clone();
        let mut m = 0;
        while !p.is_zero() && p.eval(r).is_zero() {
            p = p.div_rem(&lin).0;
            m += 1;
        }
        m
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{mag}*t")?,
                (_, true) => write!(f, "t^{i}")?,
                (_, false) => write!(f, "{mag}*t^{i}")?,
            }
        }
        Ok(())
    }
}

/// `det(t I - M)` via reduction to upper Hessenberg form.
pub fn char_poly(m: &MatrixQ) -> Result<Poly, SpectrumError> {
    if !m.is_square() {
        return Err(SpectrumError::NotSquare(m.rows(), m.cols()));
    }
    let n = m.rows();
    let mut h = m.to_dense_rows();
    for k in 1..n.saturating_sub(1) {
        let Some(p) = (k..n).find(|&i| !h[i][k - 1].is_zero()) else {
            continue;
        };
        if p != k {
            h.swap(p, k);
            for row in h.iter_mut() {
                row.swap(p, k);
            }
        }
        let piv = h[k][k - 1].recip();
        for i in k + 1..n {
            if h[i][k - 1].is_zero() {
                continue;
            }
            let t = &h[i][k - 1] * &piv;
            for j in 0..n {
                let v = &t * &h[k][j];
                h[i][j] -= v;
            }
            for row in h.iter_mut() {
                let v = &t * &row[i];
                row[k] += v;
            }
        }
    }
    // p_k is the characteristic polynomial of the leading k x k block.
    let mut p: Vec<Poly> = vec![Poly::one()];
    for k in 0..n {
        let mut pk = Poly::new(vec![-h[k][k].clone(), Rational::one()]).mul(&p[k]);
        let mut prod = Rational::one();
        for i in 1..=k {
            prod = &prod * &h[k - i + 1][k - i];
            if prod.is_zero() {
                break;
            }
            let c = &h[k - i][k] * &prod;
            pk = pk.sub(&p[k - i].scale(&c));
        }
        p.push(pk);
    }
    Ok(p.pop().unwrap())
}

/// Distinct rational eigenvalues with algebraic multiplicities.
pub fn rational_spectrum(m: &MatrixQ) -> Result<Vec<(Rational, usize)>, SpectrumError> {
    let cp = char_poly(m)?;
    let roots = cp.rational_roots()?;
    Ok(roots.into_iter().map(|r| {
        let k = cp.multiplicity(&r);
        (r, k)
    }).collect())
}

/// `ker(M - λ I)`.
pub fn eigenspace(m: &MatrixQ, lambda: &Rational) -> SubspaceQ {
    let shifted = m.sub(&MatrixQ::scalar(m.rows(), lambda));
    SubspaceQ::from_vectors(m.rows(), shifted.kernel())
}
