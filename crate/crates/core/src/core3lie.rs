//! 3-Lie and Hom 3-Lie algebras given by structure constants.

use std::collections::HashMap;

use crate::exactq::{Accumulator, MatrixQ, PartialMap, RowReducer, SubspaceQ, Vector};
use crate::report::{for_each_tuple, Block, CheckReport, Tally, Witness};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BracketError {
    #[error("bracket index ({0}, {1}, {2}) out of range for dimension {3}")]
    OutOfRange(usize, usize, usize, usize),
    #[error("bracket [e{}, e{}, e{}] has a repeated argument but a nonzero value", .0 + 1, .1 + 1, .2 + 1)]
    Repeated(usize, usize, usize),
    #[error("bracket entry [e{}, e{}, e{}] contradicts antisymmetry with an earlier entry", .0 + 1, .1 + 1, .2 + 1)]
    NotAntisymmetric(usize, usize, usize),
    #[error("bracket value has dimension {0}, expected {1}")]
    ValueDim(usize, usize),
}

/// Sort three distinct indices, returning the permutation sign.
pub fn sort3(i: usize, j: usize, k: usize) -> Option<(i8, [usize; 3])> {
    if i == j || j == k || i == k {
        return None;
    }
    let mut t = [i, j, k];
    let mut sign = 1i8;
    for a in 0..3 {
        for b in 0..2 - a {
            if t[b] > t[b + 1] {
                t.swap(b, b + 1);
                sign = -sign;
            }
        }
    }
    Some((sign, t))
}

/// Antisymmetric trilinear bracket on `Q^n` given on basis triples.
///
/// Missing entries are zero; an entry stored as `None` is known to exist but
/// cannot be evaluated (its exact value falls outside a truncation).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bracket {
    dim: usize,
    entries: HashMap<[usize; 3], Option<Vector>>,
}

impl Bracket {
    pub fn new(dim: usize) -> Self {
        Bracket { dim, entries: HashMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Set `[e_i, e_j, e_k]`, filling the other orderings by antisymmetry.
    /// A conflicting earlier entry for the same unordered triple is an error.
    pub fn set(&mut self, i: usize, j: usize, k: usize, value: Option<Vector>) -> Result<(), BracketError> {
        if i >= self.dim || j >= self.dim || k >= self.dim {
            return Err(BracketError::OutOfRange(i, j, k, self.dim));
        }
        if let Some(v) = &value {
            if v.dim() != self.dim {
                return Err(BracketError::ValueDim(v.dim(), self.dim));
            }
        }
        let Some((sign, key)) = sort3(i, j, k) else {
            return match value {
                Some(v) if v.is_zero() => Ok(()),
                _ => Err(BracketError::Repeated(i, j, k)),
            };
        };
        let value = value.map(|v| if sign < 0 { v.neg() } else { v });
        let normalized = match &value {
            Some(v) if v.is_zero() => None,
            other => Some(other.clone()),
        };
        let existing = self.entries.get(&key).cloned();
        match (existing, normalized) {
            (Some(old), Some(new)) if old != new => Err(BracketError::NotAntisymmetric(i, j, k)),
            (Some(_), None) => Err(BracketError::NotAntisymmetric(i, j, k)),
            (_, Some(new)) => {
                self.entries.insert(key, new);
                Ok(())
            }
            (None, None) => Ok(()),
        }
    }

    /// `[e_i, e_j, e_k]`.
    pub fn basis(&self, i: usize, j: usize, k: usize) -> Option<Vector> {
        let Some((sign, key)) = sort3(i, j, k) else {
            return Some(Vector::zero(self.dim));
        };
        match self.entries.get(&key) {
            None => Some(Vector::zero(self.dim)),
            Some(None) => None,
            Some(Some(v)) => Some(if sign < 0 { v.neg() } else { v.clone() }),
        }
    }

    pub fn eval(&self, u: &Vector, v: &Vector, w: &Vector) -> Option<Vector> {
        let mut acc = Accumulator::new(self.dim);
        for (i, a) in u.iter() {
            for (j, b) in v.iter() {
                if i == j {
                    continue;
                }
                let ab = a * b;
                for (k, c) in w.iter() {
                    if k == i || k == j {
                        continue;
                    }
                    let e = self.basis(i, j, k)?;
                    if !e.is_zero() {
                        acc.add_vector(&(&ab * c), &e);
                    }
                }
            }
        }
        Some(acc.finish())
    }

    /// Nonzero or unevaluable entries with `i < j < k`, sorted.
    pub fn entries(&self) -> Vec<([usize; 3], Option<Vector>)> {
        let mut out: Vec<_> = self.entries.iter().map(|(k, v)| (*k, v.clone())).collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    pub fn unevaluable_count(&self) -> usize {
        self.entries.values().filter(|v| v.is_none()).count()
    }

    /// `z ↦ [u, v, z]`.
    pub fn ad(&self, u: &Vector, v: &Vector) -> PartialMap {
        let cols = (0..self.dim).map(|k| self.eval(u, v, &Vector::unit(self.dim, k))).collect();
        PartialMap::from_columns(self.dim, cols)
    }

    /// Post-compose every entry with a linear map.
    pub fn map_values(&self, m: &MatrixQ) -> Bracket {
        let entries = self
            .entries
            .iter()
            .filter_map(|(k, v)| match v {
                None => Some((*k, None)),
                Some(v) => {
                    let w = m.apply(v);
                    (!w.is_zero()).then_some((*k, Some(w)))
                }
            })
            .collect();
        Bracket { dim: self.dim, entries }
    }
}

/// `(L, [·,·,·], α)`; with `α = Id` this is an ordinary 3-Lie algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hom3Lie {
    pub bracket: Bracket,
    pub alpha: MatrixQ,
    pub labels: Vec<String>,
}

pub fn default_labels(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

impl Hom3Lie {
    pub fn new(bracket: Bracket, alpha: MatrixQ) -> Self {
        let n = bracket.dim();
        assert_eq!((alpha.rows(), alpha.cols()), (n, n), "twist map must be {n}x{n}");
        Hom3Lie { bracket, alpha, labels: default_labels("e", n) }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.dim());
        self.labels = labels;
        self
    }

    pub fn dim(&self) -> usize {
        self.bracket.dim()
    }

    pub fn e(&self, i: usize) -> Vector {
        Vector::unit(self.dim(), i)
    }

    pub fn br(&self, u: &Vector, v: &Vector, w: &Vector) -> Option<Vector> {
        self.bracket.eval(u, v, w)
    }

    pub fn label(&self, i: usize) -> String {
        self.labels[i].clone()
    }

    pub fn render(&self, v: &Vector) -> String {
        v.render(&self.labels)
    }

    fn witness(&self, names: &[&str], t: &[usize], r: &Vector) -> Witness {
        Witness {
            args: names.iter().zip(t).map(|(n, &i)| (n.to_string(), self.label(i))).collect(),
            residual: self.render(r),
        }
    }
}

/// `[[x1,x2,x3],y2,y3] - Σ_cyc [[x_i,y2,y3],x_{i+1},x_{i+2}]` on basis vectors.
pub fn filippov_residual(alg: &Hom3Lie, t: &[usize]) -> Option<Vector> {
    let e = |i: usize| alg.e(t[i]);
    let (x1, x2, x3, y2, y3) = (e(0), e(1), e(2), e(3), e(4));
    let lhs = alg.br(&alg.br(&x1, &x2, &x3)?, &y2, &y3)?;
    let r1 = alg.br(&alg.br(&x1, &y2, &y3)?, &x2, &x3)?;
    let r2 = alg.br(&alg.br(&x2, &y2, &y3)?, &x3, &x1)?;
    let r3 = alg.br(&alg.br(&x3, &y2, &y3)?, &x1, &x2)?;
    Some(lhs.sub(&r1).sub(&r2).sub(&r3))
}

/// Hom-Jacobi residual
/// `[αx1,αx2,[x3,x4,x5]] - [[x1,x2,x3],αx4,αx5] - [αx3,[x1,x2,x4],αx5] - [αx3,αx4,[x1,x2,x5]]`.
pub fn hom_jacobi_residual(alg: &Hom3Lie, t: &[usize]) -> Option<Vector> {
    let x: Vec<Vector> = t.iter().map(|&i| alg.e(i)).collect();
    let a: Vec<Vector> = x.iter().map(|v| alg.alpha.apply(v)).collect();
    let lhs = alg.br(&a[0], &a[1], &alg.br(&x[2], &x[3], &x[4])?)?;
    let r1 = alg.br(&alg.br(&x[0], &x[1], &x[2])?, &a[3], &a[4])?;
    let r2 = alg.br(&a[2], &alg.br(&x[0], &x[1], &x[3])?, &a[4])?;
    let r3 = alg.br(&a[2], &a[3], &alg.br(&x[0], &x[1], &x[4])?)?;
    Some(lhs.sub(&r1).sub(&r2).sub(&r3))
}

/// Filippov identity; only meaningful when `α = Id`.
pub fn check_jacobi(alg: &Hom3Lie) -> CheckReport {
    const NAME: &str = "filippov";
    if !alg.alpha.is_identity() {
        return CheckReport::not_applicable(NAME, "twist map is not the identity");
    }
    let n = alg.dim();
    let mut tally = Tally::new(NAME);
    // Alternating in (x1,x2,x3) and in (y2,y3).
    let blocks = [Block::Increasing { len: 3, range: n }, Block::Increasing { len: 2, range: n }];
    for_each_tuple(&blocks, |t| {
        tally.record(filippov_residual(alg, t), |r| alg.witness(&["x1", "x2", "x3", "y2", "y3"], t, r));
    });
    tally.finish()
}

pub fn check_hom_jacobi(alg: &Hom3Lie) -> CheckReport {
    let n = alg.dim();
    let mut tally = Tally::new("hom_jacobi");
    // Alternating in (x1,x2) and in (x3,x4,x5).
    let blocks = [Block::Increasing { len: 2, range: n }, Block::Increasing { len: 3, range: n }];
    for_each_tuple(&blocks, |t| {
        tally.record(hom_jacobi_residual(alg, t), |r| alg.witness(&["x1", "x2", "x3", "x4", "x5"], t, r));
    });
    tally.finish()
}

/// `α[x,y,z] = [αx,αy,αz]`.
pub fn check_multiplicative(alg: &Hom3Lie) -> CheckReport {
    let n = alg.dim();
    let mut tally = Tally::new("multiplicative");
    for_each_tuple(&[Block::Increasing { len: 3, range: n }], |t| {
        let x: Vec<Vector> = t.iter().map(|&i| alg.e(i)).collect();
        let a: Vec<Vector> = x.iter().map(|v| alg.alpha.apply(v)).collect();
        let res = (|| {
            let lhs = alg.alpha.apply(&alg.br(&x[0], &x[1], &x[2])?);
            Some(lhs.sub(&alg.br(&a[0], &a[1], &a[2])?))
        })();
        tally.record(res, |r| alg.witness(&["x", "y", "z"], t, r));
    });
    tally.finish()
}

pub fn is_regular(alg: &Hom3Lie) -> bool {
    alg.alpha.is_invertible() && check_multiplicative(alg).passed()
}

/// Solution space of a linear system assembled from partially known rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solved {
    pub space: SubspaceQ,
    /// Equation blocks dropped because some coefficient was unevaluable.
    pub dropped: usize,
}

/// `{x : [x, e_j, e_k] = 0 for all j < k}`.
///
/// Equation blocks `(j, k)` with an unevaluable coefficient are dropped, so
/// the result contains the true center.
pub fn center_solved(alg: &Hom3Lie) -> Solved {
    let n = alg.dim();
    let mut red = RowReducer::new(n);
    let mut dropped = 0;
    'pairs: for j in 0..n {
        for k in j + 1..n {
            // Column i of this block is [e_i, e_j, e_k].
            let cols: Option<Vec<Vector>> = (0..n).map(|i| alg.bracket.basis(i, j, k)).collect();
            let Some(cols) = cols else {
                dropped += 1;
                continue;
            };
            for row in MatrixQ::from_columns(n, cols).row_vectors() {
                red.insert(&row);
            }
            if red.is_full() {
                break 'pairs;
            }
        }
    }
    let space = SubspaceQ::from_vectors(n, crate::exactq::kernel_from_rref(&red.into_rref(), n));
    Solved { space, dropped }
}

pub fn center(alg: &Hom3Lie) -> SubspaceQ {
    center_solved(alg).space
}

/// `[S,S,S] ⊆ S` and `α(S) ⊆ S`.
pub fn is_subalgebra(alg: &Hom3Lie, s: &SubspaceQ) -> CheckReport {
    let b = s.basis();
    let mut tally = Tally::new("subalgebra");
    for_each_tuple(&[Block::Increasing { len: 3, range: b.len() }], |t| {
        let v = alg.br(&b[t[0]], &b[t[1]], &b[t[2]]);
        tally.record_bool(v.map(|v| s.contains(&v)), || Witness {
            args: t.iter().map(|&i| ("s".to_string(), alg.render(&b[i]))).collect(),
            residual: "bracket leaves the subspace".into(),
        });
    });
    stable_under_alpha(alg, s, &mut tally);
    tally.finish()
}

/// `[S, L, L] ⊆ S` and `α(S) ⊆ S`.
pub fn is_ideal(alg: &Hom3Lie, s: &SubspaceQ) -> CheckReport {
    let n = alg.dim();
    let b = s.basis();
    let mut tally = Tally::new("ideal");
    for (si, sv) in b.iter().enumerate() {
        for_each_tuple(&[Block::Increasing { len: 2, range: n }], |t| {
            let v = alg.br(sv, &alg.e(t[0]), &alg.e(t[1]));
            tally.record_bool(v.map(|v| s.contains(&v)), || Witness {
                args: vec![
                    ("s".into(), alg.render(&b[si])),
                    ("y".into(), alg.label(t[0])),
                    ("z".into(), alg.label(t[1])),
                ],
                residual: "bracket leaves the subspace".into(),
            });
        });
    }
    stable_under_alpha(alg, s, &mut tally);
    tally.finish()
}

fn stable_under_alpha(alg: &Hom3Lie, s: &SubspaceQ, tally: &mut Tally) {
    for v in s.basis() {
        let img = alg.alpha.apply(v);
        tally.record_bool(Some(s.contains(&img)), || Witness {
            args: vec![("s".into(), alg.render(v))],
            residual: format!("alpha(s) = {} leaves the subspace", alg.render(&img)),
        });
    }
}

/// `ad_{x,y} = [x, y, ·]`.
pub fn ad(alg: &Hom3Lie, x: &Vector, y: &Vector) -> PartialMap {
    alg.bracket.ad(x, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactq::Rational;
    use crate::report::symmetry::assert_reduction;
    use crate::report::symmetry::Group::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn d4(alpha: MatrixQ) -> Hom3Lie {
        let mut b = Bracket::new(4);
        b.set(0, 1, 2, Some(Vector::unit(4, 3))).unwrap();
        Hom3Lie::new(b, alpha)
    }

    pub(crate) fn random_structure(n: usize, seed: u64) -> Hom3Lie {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut b = Bracket::new(n);
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let v: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
                    b.set(i, j, k, Some(Vector::from_ints(&v))).unwrap();
                }
            }
        }
        let rows: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-2..=2)).collect()).collect();
        Hom3Lie::new(b, MatrixQ::from_int_rows(&rows))
    }

    #[test]
    fn antisymmetry_enforced() {
        let mut b = Bracket::new(3);
        b.set(0, 1, 2, Some(Vector::unit(3, 0))).unwrap();
        assert_eq!(b.basis(1, 0, 2), Some(Vector::unit(3, 0).neg()));
        assert_eq!(b.basis(2, 0, 1), Some(Vector::unit(3, 0)));
        assert!(b.set(1, 0, 2, Some(Vector::unit(3, 0))).is_err());
        assert!(b.set(1, 0, 2, Some(Vector::unit(3, 0).neg())).is_ok());
        assert!(b.set(0, 0, 2, Some(Vector::unit(3, 1))).is_err());
    }

    #[test]
    fn d4_is_3lie_and_hom_3lie() {
        let alg = d4(MatrixQ::identity(4));
        assert!(check_jacobi(&alg).passed());
        assert!(check_hom_jacobi(&alg).passed());
        assert!(check_multiplicative(&alg).passed());
        let neg = d4(MatrixQ::scalar(4, &Rational::from_int(-1)));
        assert!(check_hom_jacobi(&neg).passed());
        assert!(check_multiplicative(&neg).passed());
        assert_eq!(check_jacobi(&neg).status, crate::report::Status::NotApplicable);
    }

    #[test]
    fn d4_center_and_ideals() {
        let alg = d4(MatrixQ::identity(4));
        assert_eq!(center(&alg), SubspaceQ::coordinate(4, &[3]));
        assert!(is_ideal(&alg, &SubspaceQ::coordinate(4, &[3])).passed());
        assert!(!is_ideal(&alg, &SubspaceQ::coordinate(4, &[0])).passed());
        assert!(is_subalgebra(&alg, &SubspaceQ::coordinate(4, &[0, 1])).passed());
    }

    #[test]
    fn non_multiplicative_twist_detected() {
        let alpha = MatrixQ::diagonal(&[Rational::from_int(2), Rational::one(), Rational::one(), Rational::one()]);
        let alg = d4(alpha);
        let r = check_multiplicative(&alg);
        assert!(!r.passed());
        assert_eq!(r.witness.unwrap().residual, "-e4");
    }

    #[test]
    fn filippov_reduction_is_exact() {
        let alg = random_structure(4, 7);
        let mut alg = alg;
        alg.alpha = MatrixQ::identity(4);
        assert_reduction(&[4; 5], &[Alt(&[0, 1, 2]), Alt(&[3, 4])], |t| filippov_residual(&alg, t).unwrap());
    }

    #[test]
    fn hom_jacobi_reduction_is_exact() {
        let alg = random_structure(4, 11);
        assert_reduction(&[4; 5], &[Alt(&[0, 1]), Alt(&[2, 3, 4])], |t| hom_jacobi_residual(&alg, t).unwrap());
    }
}
