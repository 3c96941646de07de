//! Root forms and simultaneous eigenspace decompositions of `L` and `A`.

use std::fmt;

use crate::exactq::{rational_spectrum, eigenspace, MatrixQ, Rational, SubspaceQ, Vector};
use crate::rinehart::RinehartBundle;

use super::SplitError;

/// Antisymmetric bilinear form on `H`, stored by its values on basis pairs
/// `(h_i, h_j)`, `i < j`, in lexicographic order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootForm {
    h: usize,
    coeffs: Vec<Rational>,
}

fn pair_count(h: usize) -> usize {
    h * h.saturating_sub(1) / 2
}

fn pair_index(h: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < h);
    i * (2 * h - i - 1) / 2 + (j - i - 1)
}

impl RootForm {
    pub fn zero(h: usize) -> Self {
        RootForm { h, coeffs: vec![Rational::zero(); pair_count(h)] }
    }

    /// From values on basis pairs `i < j`, in lexicographic order.
    pub fn from_pair_values(h: usize, coeffs: Vec<Rational>) -> Self {
        assert_eq!(coeffs.len(), pair_count(h), "wrong number of pair values");
        RootForm { h, coeffs }
    }

    /// `None` unless `m` is square and antisymmetric.
    pub fn from_matrix(m: &MatrixQ) -> Option<Self> {
        let h = m.rows();
        if m.cols() != h || !m.add(&m.transpose()).is_zero() {
            return None;
        }
        let coeffs = (0..h).flat_map(|i| (i + 1..h).map(move |j| (i, j))).map(|(i, j)| m.get(i, j)).collect();
        Some(RootForm { h, coeffs })
    }

    pub fn dim_h(&self) -> usize {
        self.h
    }

    pub fn pair_values(&self) -> &[Rational] {
        &self.coeffs
    }

    /// `γ(h_i, h_j)` on basis vectors.
    pub fn get(&self, i: usize, j: usize) -> Rational {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Less => self.coeffs[pair_index(self.h, i, j)].clone(),
            Greater => -&self.coeffs[pair_index(self.h, j, i)],
            Equal => Rational::zero(),
        }
    }

    pub fn matrix(&self) -> MatrixQ {
        let h = self.h;
        let entries = (0..h).flat_map(|i| (0..h).map(move |j| (i, j))).map(|(i, j)| (i, j, self.get(i, j)));
        MatrixQ::from_entries(h, h, entries)
    }

    /// `uᵀ M v` for `u, v` given in `H`-coordinates.
    pub fn value(&self, u: &Vector, v: &Vector) -> Rational {
        let mut acc = Rational::zero();
        for (i, a) in u.iter() {
            for (j, b) in v.iter() {
                if i != j {
                    acc += &(&(a * b) * &self.get(i, j));
                }
            }
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    pub fn add(&self, other: &RootForm) -> RootForm {
        assert_eq!(self.h, other.h);
        RootForm { h: self.h, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn neg(&self) -> RootForm {
        RootForm { h: self.h, coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }

    /// `(u, v) ↦ γ(M u, M v)`.
    pub fn compose(&self, m: &MatrixQ) -> RootForm {
        let h = self.h;
        let coeffs = (0..h)
            .flat_map(|i| (i + 1..h).map(move |j| (i, j)))
            .map(|(i, j)| self.value(m.column(i), m.column(j)))
            .collect();
        RootForm { h, coeffs }
    }

    /// Values on nonzero basis pairs, e.g. `x∧y:-1`.
    pub fn render(&self, h_labels: &[String]) -> String {
        let mut parts = Vec::new();
        for i in 0..self.h {
            for j in i + 1..self.h {
                let c = self.get(i, j);
                if !c.is_zero() {
                    parts.push(format!("{}∧{}:{}", h_labels[i], h_labels[j], c));
                }
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" ")
        }
    }

    pub fn matrix_strings(&self) -> Vec<Vec<String>> {
        (0..self.h).map(|i| (0..self.h).map(|j| self.get(i, j).to_string()).collect()).collect()
    }
}

impl fmt::Debug for RootForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RootForm{:?}", self.coeffs)
    }
}

/// `γ(α^k, α^k)` for `α|_H = ah`, i.e. `(ah^k)ᵀ · M · ah^k`.
pub fn pullback_root(g: &RootForm, ah: &MatrixQ, k: i32) -> Option<RootForm> {
    Some(g.compose(&ah.pow(k)?))
}

/// One root or weight together with its space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graded {
    pub form: RootForm,
    pub space: SubspaceQ,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootDecomposition {
    pub h: SubspaceQ,
    /// `α|_H` in the basis of `h`.
    pub alpha_h: MatrixQ,
    pub roots: Vec<Graded>,
    /// `L_0 = H`.
    pub residual_ok: bool,
}

impl RootDecomposition {
    pub fn forms(&self) -> Vec<RootForm> {
        self.roots.iter().map(|r| r.form.clone()).collect()
    }

    /// `L_γ`, with `L_0 = H`; `None` when `γ` is neither a root nor zero.
    pub fn space(&self, g: &RootForm) -> Option<&SubspaceQ> {
        if g.is_zero() {
            return Some(&self.h);
        }
        self.roots.iter().find(|r| &r.form == g).map(|r| &r.space)
    }

    pub fn h_labels(&self, b: &RinehartBundle) -> Vec<String> {
        self.h.basis().iter().map(|v| b.lie.render(v)).collect()
    }

    /// `H`-coordinates of an element of `H`.
    pub fn h_coords(&self, v: &Vector) -> Option<Vector> {
        self.h.coordinates(v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightDecomposition {
    pub a0: SubspaceQ,
    pub weights: Vec<Graded>,
}

impl WeightDecomposition {
    pub fn forms(&self) -> Vec<RootForm> {
        self.weights.iter().map(|w| w.form.clone()).collect()
    }

    /// `A_λ`, with `A_0` for the zero form.
    pub fn space(&self, l: &RootForm) -> Option<&SubspaceQ> {
        if l.is_zero() {
            return Some(&self.a0);
        }
        self.weights.iter().find(|w| &w.form == l).map(|w| &w.space)
    }
}

/// Joint rational eigenspaces of `ops`, keyed by eigenvalue tuples. Empty
/// intersections are dropped as soon as they appear.
fn joint_eigenspaces(ops: &[MatrixQ], dim: usize) -> Result<Vec<(Vec<Rational>, SubspaceQ)>, SplitError> {
    let mut pieces = vec![(Vec::new(), SubspaceQ::full(dim))];
    for op in ops {
        let spectrum = rational_spectrum(op).map_err(|e| SplitError::Spectrum(e.to_string()))?;
        let spaces: Vec<(Rational, SubspaceQ)> = spectrum.into_iter().map(|(l, _)| {
            let e = eigenspace(op, &l);
            (l, e)
        }).collect();
        let mut next = Vec::new();
        for (tuple, v) in &pieces {
            for (l, e) in &spaces {
                let w = v.intersect(e);
                if !w.is_zero() {
                    let mut t = tuple.clone();
                    t.push(l.clone());
                    next.push((t, w));
                }
            }
        }
        pieces = next;
    }
    Ok(pieces)
}

fn pairs(h: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..h).flat_map(move |i| (i + 1..h).map(move |j| (i, j)))
}

/// Pieces sorted by the first pivot of their space, zero form split off.
fn assemble(
    pieces: Vec<(Vec<Rational>, SubspaceQ)>,
    h: usize,
    dim: usize,
    what: &'static str,
) -> Result<(SubspaceQ, Vec<Graded>), SplitError> {
    let total: usize = pieces.iter().map(|p| p.1.dim()).sum();
    let spaces: Vec<SubspaceQ> = pieces.iter().map(|p| p.1.clone()).collect();
    if total != dim || !SubspaceQ::is_direct_sum(&spaces) {
        return Err(SplitError::NotSplit { space: what, found: total, dim });
    }
    let mut zero = SubspaceQ::zero(dim);
    let mut graded = Vec::new();
    for (t, space) in pieces {
        let form = RootForm::from_pair_values(h, t);
        if form.is_zero() {
            zero = space;
        } else {
            graded.push(Graded { form, space });
        }
    }
    graded.sort_by_key(|g| g.space.basis()[0].leading().map(|(i, _)| i));
    Ok((zero, graded))
}

fn check_h(b: &RinehartBundle, h: &SubspaceQ) -> Result<(), SplitError> {
    if h.ambient() != b.l_dim() {
        return Err(SplitError::Ambient { got: h.ambient(), want: b.l_dim() });
    }
    Ok(())
}

/// `L = H ⊕ ⊕ L_γ` from the joint eigenspaces of `S_ij = α⁻¹∘ad(h_i, h_j)`.
pub fn root_decompose(b: &RinehartBundle, h: &SubspaceQ) -> Result<RootDecomposition, SplitError> {
    check_h(b, h)?;
    let n = b.l_dim();
    let alpha_inv = b.lie.alpha.inverse().ok_or(SplitError::AlphaNotInvertible)?;
    let hb = h.basis();
    for i in 0..hb.len() {
        for j in i + 1..hb.len() {
            for k in j + 1..hb.len() {
                let v = b.lie.br(&hb[i], &hb[j], &hb[k]).ok_or_else(|| SplitError::Unevaluable("[H, H, H]".into()))?;
                if !v.is_zero() {
                    let r = |x: &Vector| b.lie.render(x);
                    return Err(SplitError::NotAbelian(format!("[{}, {}, {}] = {}", r(&hb[i]), r(&hb[j]), r(&hb[k]), r(&v))));
                }
            }
        }
    }
    if h.image(&b.lie.alpha) != *h {
        return Err(SplitError::NotAlphaStable);
    }
    let alpha_h = h.restrict(&b.lie.alpha).ok_or(SplitError::NotAlphaStable)?;
    let mut ops = Vec::new();
    for (i, j) in pairs(hb.len()) {
        let ad = b.lie.bracket.ad(&hb[i], &hb[j]).to_total().ok_or_else(|| {
            SplitError::Unevaluable(format!("ad({}, {})", b.lie.render(&hb[i]), b.lie.render(&hb[j])))
        })?;
        ops.push(alpha_inv.compose(&ad));
    }
    let (l0, roots) = assemble(joint_eigenspaces(&ops, n)?, hb.len(), n, "L")?;
    if l0 != *h {
        return Err(SplitError::L0TooLarge { l0: l0.dim(), h: h.dim() });
    }
    Ok(RootDecomposition { h: h.clone(), alpha_h, roots, residual_ok: true })
}

/// `A = A_0 ⊕ ⊕ A_λ` from the joint eigenspaces of `U_ij = φ⁻¹∘ρ(h_i, h_j)`.
pub fn weight_decompose(b: &RinehartBundle, h: &SubspaceQ) -> Result<WeightDecomposition, SplitError> {
    check_h(b, h)?;
    let m = b.a_dim();
    let phi_inv = b.alg.phi.inverse().ok_or(SplitError::PhiNotInvertible)?;
    let hb = h.basis();
    let mut ops = Vec::new();
    for (i, j) in pairs(hb.len()) {
        let r = b.rho.op(&hb[i], &hb[j]).to_total().ok_or_else(|| {
            SplitError::Unevaluable(format!("rho({}, {})", b.lie.render(&hb[i]), b.lie.render(&hb[j])))
        })?;
        ops.push(phi_inv.compose(&r));
    }
    let (a0, weights) = assemble(joint_eigenspaces(&ops, m)?, hb.len(), m, "A")?;
    Ok(WeightDecomposition { a0, weights })
}

/// Greedy candidate for `H`: basis vectors whose mutual brackets vanish and
/// whose span stays `α`-stable, accepted only if `root_decompose` succeeds.
pub fn auto_cartan(b: &RinehartBundle) -> Result<SubspaceQ, SplitError> {
    let n = b.l_dim();
    let mut chosen: Vec<usize> = Vec::new();
    for c in 0..n {
        let commutes = (0..chosen.len()).all(|p| {
            (p + 1..chosen.len()).all(|q| b.lie.bracket.basis(chosen[p], chosen[q], c).is_some_and(|v| v.is_zero()))
        });
        if !commutes {
            continue;
        }
        let mut trial = chosen.clone();
        trial.push(c);
        if SubspaceQ::coordinate(n, &trial).is_invariant(&b.lie.alpha) {
            chosen = trial;
        }
    }
    let h = SubspaceQ::coordinate(n, &chosen);
    match root_decompose(b, &h) {
        Ok(_) => Ok(h),
        Err(e) => Err(SplitError::NoAutoCartan(e.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::exactq::q;

    #[test]
    fn pair_indexing_is_lexicographic() {
        let idx: Vec<usize> = pairs(4).map(|(i, j)| pair_index(4, i, j)).collect();
        assert_eq!(idx, (0..6).collect::<Vec<_>>());
    }

    #[test]
    fn matrix_round_trip() {
        let g = RootForm::from_pair_values(3, vec![q(1, 1), q(-2, 3), q(5, 1)]);
        let m = g.matrix();
        assert_eq!(m.get(2, 0), q(2, 3));
        assert_eq!(RootForm::from_matrix(&m), Some(g));
        assert_eq!(RootForm::from_matrix(&MatrixQ::identity(2)), None);
    }

    #[test]
    fn pullback_examples() {
        let g = RootForm::from_pair_values(2, vec![q(1, 1)]);
        let ah = MatrixQ::diagonal(&[q(1, 1), q(2, 1)]);
        assert_eq!(pullback_root(&g, &ah, 0), Some(g.clone()));
        assert_eq!(pullback_root(&g, &ah, -1).unwrap().matrix(), MatrixQ::from_rows(&[vec![q(0, 1), q(1, 2)], vec![q(-1, 2), q(0, 1)]]));
        assert_eq!(pullback_root(&g, &ah, 1).unwrap().get(0, 1), q(2, 1));
        let neg = MatrixQ::scalar(2, &q(-1, 1));
        for k in -3..=3 {
            assert_eq!(pullback_root(&g, &neg, k), Some(g.clone()));
        }
    }

    #[test]
    fn toy_roots() {
        let b = corpus::toy_split();
        let dec = root_decompose(&b, b.h.as_ref().unwrap()).unwrap();
        assert_eq!(dec.roots.len(), 1);
        assert_eq!(dec.roots[0].form.get(0, 1), q(1, 1));
        assert_eq!(dec.roots[0].space, SubspaceQ::coordinate(3, &[2]));
        let w = weight_decompose(&b, b.h.as_ref().unwrap()).unwrap();
        assert!(w.weights.is_empty());
        assert!(w.a0.is_full());
        assert_eq!(auto_cartan(&b).unwrap(), SubspaceQ::coordinate(3, &[0, 1]));
    }

    #[test]
    fn abelian_with_h_full() {
        let lie = crate::core3lie::Hom3Lie::new(crate::core3lie::Bracket::new(3), MatrixQ::identity(3));
        let b = RinehartBundle::over_scalars(lie);
        let dec = root_decompose(&b, &SubspaceQ::full(3)).unwrap();
        assert!(dec.roots.is_empty());
        let err = root_decompose(&b, &SubspaceQ::coordinate(3, &[0, 1])).unwrap_err();
        assert!(matches!(err, SplitError::L0TooLarge { l0: 3, h: 2 }));
    }

    #[test]
    fn rejects_bad_cartan() {
        let b = corpus::toy_split();
        let err = root_decompose(&b, &SubspaceQ::full(3)).unwrap_err();
        assert!(matches!(err, SplitError::NotAbelian(_)), "{err}");
        let mut twisted = b.clone();
        twisted.lie.alpha = MatrixQ::from_int_rows(&[vec![1, 0, 0], vec![0, 1, 0], vec![1, 0, 1]]);
        let err = root_decompose(&twisted, &SubspaceQ::coordinate(3, &[0, 1])).unwrap_err();
        assert_eq!(err, SplitError::NotAlphaStable);
    }

    #[test]
    fn irrational_spectrum_is_not_split() {
        // [h1, h2, u] = v, [h1, h2, v] = 2u: eigenvalues ±√2.
        let mut br = crate::core3lie::Bracket::new(4);
        br.set(0, 1, 2, Some(Vector::unit(4, 3))).unwrap();
        br.set(0, 1, 3, Some(Vector::unit(4, 2).scale(&q(2, 1)))).unwrap();
        let b = RinehartBundle::over_scalars(crate::core3lie::Hom3Lie::new(br, MatrixQ::identity(4)));
        let err = root_decompose(&b, &SubspaceQ::coordinate(4, &[0, 1])).unwrap_err();
        assert!(matches!(err, SplitError::NotSplit { space: "L", found: 2, dim: 4 }), "{err}");
    }
}
