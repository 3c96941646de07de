use super::echelon::{kernel_from_rref, kernel_of_rows, RowReducer};
use super::{MatrixQ, PartialMap, Rational, Vector};

/// Subspace of `Q^n` stored as its reduced row echelon basis, so equal
/// subspaces have identical representations.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SubspaceQ {
    ambient: usize,
    basis: Vec<Vector>,
}

impl SubspaceQ {
    pub fn zero(ambient: usize) -> Self {
        SubspaceQ { ambient, basis: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        SubspaceQ { ambient, basis: (0..ambient).map(|i| Vector::unit(ambient, i)).collect() }
    }

    pub fn span<'a, I>(ambient: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = &'a Vector>,
    {
        let mut red = RowReducer::new(ambient);
        for v in vectors {
            red.insert(v);
            if red.is_full() {
                break;
            }
        }
        SubspaceQ { ambient, basis: red.into_rref() }
    }

    pub fn from_vectors(ambient: usize, vectors: Vec<Vector>) -> Self {
        Self::span(ambient, vectors.iter())
    }

    /// Span of the given basis vectors `e_i`.
    pub fn coordinate(ambient: usize, indices: &[usize]) -> Self {
        let v: Vec<Vector> = indices.iter().map(|&i| Vector::unit(ambient, i)).collect();
        Self::span(ambient, v.iter())
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    fn pivot_cols(&self) -> Vec<usize> {
        self.basis.iter().map(|r| r.leading().unwrap().0).collect()
    }

    /// Coordinates of `v` with respect to `basis()`, if `v` lies in the space.
    pub fn coordinates(&self, v: &Vector) -> Option<Vector> {
        assert_eq!(v.dim(), self.ambient, "ambient dimension mismatch");
        let piv = self.pivot_cols();
        let coords: Vec<Rational> = piv.iter().map(|&p| v.get(p)).collect();
        let mut rest = v.clone();
        for (c, b) in coords.iter().zip(&self.basis) {
            rest = rest.add_scaled(&-c, b);
        }
        rest.is_zero().then(|| Vector::from_dense(&coords))
    }

    pub fn contains(&self, v: &Vector) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn is_subspace_of(&self, other: &SubspaceQ) -> bool {
        self.basis.iter().all(|b| other.contains(b))
    }

    pub fn sum(&self, other: &SubspaceQ) -> SubspaceQ {
        assert_eq!(self.ambient, other.ambient);
        SubspaceQ::span(self.ambient, self.basis.iter().chain(&other.basis))
    }

    pub fn sum_all<'a, I>(ambient: usize, spaces: I) -> SubspaceQ
    where
        I: IntoIterator<Item = &'a SubspaceQ>,
    {
        let mut red = RowReducer::new(ambient);
        for s in spaces {
            for b in &s.basis {
                red.insert(b);
            }
        }
        SubspaceQ { ambient, basis: red.into_rref() }
    }

    /// Equations whose common kernel is this subspace.
    pub fn annihilator(&self) -> Vec<Vector> {
        kernel_from_rref(&self.basis, self.ambient)
    }

    pub fn intersect(&self, other: &SubspaceQ) -> SubspaceQ {
        assert_eq!(self.ambient, other.ambient);
        if self.is_zero() || other.is_zero() {
            return SubspaceQ::zero(self.ambient);
        }
        // x = sum a_i b_i lies in `other` iff every annihilating equation vanishes.
        let eqs = other.annihilator();
        let rows: Vec<Vector> = eqs
            .iter()
            .map(|e| Vector::from_dense(&self.basis.iter().map(|b| e.dot(b)).collect::<Vec<_>>()))
            .collect();
        let coeffs = kernel_of_rows(rows.iter(), self.dim());
        let vs: Vec<Vector> = coeffs.iter().map(|a| self.combine(a)).collect();
        SubspaceQ::span(self.ambient, vs.iter())
    }

    /// `sum a_i basis_i`.
    pub fn combine(&self, coeffs: &Vector) -> Vector {
        assert_eq!(coeffs.dim(), self.dim());
        let mut out = Vector::zero(self.ambient);
        for (i, c) in coeffs.iter() {
            out = out.add_scaled(c, &self.basis[i]);
        }
        out
    }

    /// True when the spaces pairwise add up to a direct sum.
    pub fn is_direct_sum(spaces: &[SubspaceQ]) -> bool {
        let Some(first) = spaces.first() else {
            return true;
        };
        let total: usize = spaces.iter().map(SubspaceQ::dim).sum();
        SubspaceQ::sum_all(first.ambient, spaces).dim() == total
    }

    pub fn image(&self, m: &MatrixQ) -> SubspaceQ {
        let v: Vec<Vector> = self.basis.iter().map(|b| m.apply(b)).collect();
        SubspaceQ::span(m.rows(), v.iter())
    }

    /// Image under a partial map, `None` if some basis vector is not evaluable.
    pub fn image_partial(&self, m: &PartialMap) -> Option<SubspaceQ> {
        let v: Option<Vec<Vector>> = self.basis.iter().map(|b| m.apply(b)).collect();
        Some(SubspaceQ::span(m.rows(), v?.iter()))
    }

    pub fn is_invariant(&self, m: &MatrixQ) -> bool {
        self.basis.iter().all(|b| self.contains(&m.apply(b)))
    }

    /// Standard basis vectors completing this space to the ambient space.
    pub fn complement_units(&self) -> Vec<usize> {
        let mut red = RowReducer::new(self.ambient);
        for b in &self.basis {
            red.insert(b);
        }
        (0..self.ambient).filter(|&i| red.insert(&Vector::unit(self.ambient, i))).collect()
    }

    /// Matrix of `m` restricted to this subspace in basis coordinates, if the
    /// subspace is invariant.
    pub fn restrict(&self, m: &MatrixQ) -> Option<MatrixQ> {
        let cols: Option<Vec<Vector>> =
            self.basis.iter().map(|b| self.coordinates(&m.apply(b))).collect();
        Some(MatrixQ::from_columns(self.dim(), cols?))
    }

    pub fn render(&self, labels: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let parts: Vec<String> = self.basis.iter().map(|b| b.render(labels)).collect();
        format!("<{}>", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn intersection_of_planes() {
        let a = SubspaceQ::from_vectors(3, vec![Vector::from_ints(&[1, 0, 0]), Vector::from_ints(&[0, 1, 0])]);
        let b = SubspaceQ::from_vectors(3, vec![Vector::from_ints(&[0, 1, 1]), Vector::from_ints(&[1, 0, 1])]);
        let c = a.intersect(&b);
        assert_eq!(c.dim(), 1);
        assert!(c.contains(&Vector::from_ints(&[1, -1, 0])));
        assert_eq!(a.sum(&b).dim(), 3);
    }

    #[test]
    fn canonical_representation() {
        let a = SubspaceQ::from_vectors(3, vec![Vector::from_ints(&[1, 1, 0]), Vector::from_ints(&[1, -1, 0])]);
        assert_eq!(a, SubspaceQ::coordinate(3, &[0, 1]));
        assert_eq!(a.complement_units(), vec![2]);
    }

    #[test]
    fn coordinates_round_trip() {
        let a = SubspaceQ::from_vectors(4, vec![Vector::from_ints(&[1, 2, 0, 1]), Vector::from_ints(&[0, 0, 1, 3])]);
        let v = Vector::from_ints(&[2, 4, -1, -1]);
        let c = a.coordinates(&v).unwrap();
        assert_eq!(a.combine(&c), v);
        assert!(a.coordinates(&Vector::from_ints(&[0, 1, 0, 0])).is_none());
    }
}
