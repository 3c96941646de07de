use std::fmt;

use super::echelon::{kernel_of_rows, RowReducer};
use super::{Accumulator, Rational, Vector};

/// Total linear map `Q^cols -> Q^rows`, stored by sparse columns.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatrixQ {
    rows: usize,
    columns: Vec<Vector>,
}

impl MatrixQ {
    pub fn zero(rows: usize, cols: usize) -> Self {
        MatrixQ { rows, columns: vec![Vector::zero(rows); cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, &Rational::one())
    }

    pub fn scalar(n: usize, c: &Rational) -> Self {
        MatrixQ {
            rows: n,
            columns: (0..n).map(|i| Vector::unit(n, i).scale(c)).collect(),
        }
    }

    pub fn diagonal(values: &[Rational]) -> Self {
        let n = values.len();
        MatrixQ {
            rows: n,
            columns: values.iter().enumerate().map(|(i, c)| Vector::unit(n, i).scale(c)).collect(),
        }
    }

    pub fn from_columns(rows: usize, columns: Vec<Vector>) -> Self {
        for c in &columns {
            assert_eq!(c.dim(), rows, "column dimension mismatch");
        }
        MatrixQ { rows, columns }
    }

    /// Build from dense rows.
    pub fn from_rows(rows: &[Vec<Rational>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut cols = vec![Accumulator::new(r); c];
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix");
            for (j, v) in row.iter().enumerate() {
                cols[j].add(i, v);
            }
        }
        MatrixQ { rows: r, columns: cols.into_iter().map(Accumulator::finish).collect() }
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
        let rows: Vec<Vec<Rational>> =
            rows.iter().map(|r| r.iter().map(|&v| Rational::from_int(v)).collect()).collect();
        Self::from_rows(&rows)
    }

    /// Build from `(row, col, value)` triples.
    pub fn from_entries<I>(rows: usize, cols: usize, entries: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, Rational)>,
    {
        let mut acc = vec![Accumulator::new(rows); cols];
        for (i, j, v) in entries {
            acc[j].add(i, &v);
        }
        MatrixQ { rows, columns: acc.into_iter().map(Accumulator::finish).collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.columns.len()
    }

    pub fn column(&self, j: usize) -> &Vector {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[Vector] {
        &self.columns
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        self.columns[j].get(i)
    }

    /// Nonzero entries as `(row, col, value)`, column-major.
    pub fn entries(&self) -> Vec<(usize, usize, Rational)> {
        let mut out = Vec::new();
        for (j, c) in self.columns.iter().enumerate() {
            for (i, v) in c.iter() {
                out.push((i, j, v.clone()));
            }
        }
        out
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        assert_eq!(v.dim(), self.cols(), "matrix/vector dimension mismatch");
        let mut acc = Accumulator::new(self.rows);
        for (j, c) in v.iter() {
            acc.add_vector(c, &self.columns[j]);
        }
        acc.finish()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &MatrixQ) -> MatrixQ {
        assert_eq!(self.cols(), other.rows, "composition dimension mismatch");
        MatrixQ { rows: self.rows, columns: other.columns.iter().map(|c| self.apply(c)).collect() }
    }

    pub fn transpose(&self) -> MatrixQ {
        let mut acc = vec![Accumulator::new(self.cols()); self.rows];
        for (j, c) in self.columns.iter().enumerate() {
            for (i, v) in c.iter() {
                acc[i].add(j, v);
            }
        }
        MatrixQ { rows: self.cols(), columns: acc.into_iter().map(Accumulator::finish).collect() }
    }

    /// Rows as sparse vectors.
    pub fn row_vectors(&self) -> Vec<Vector> {
        self.transpose().columns
    }

    pub fn add(&self, other: &MatrixQ) -> MatrixQ {
        assert_eq!((self.rows, self.cols()), (other.rows, other.cols()));
        MatrixQ {
            rows: self.rows,
            columns: self.columns.iter().zip(&other.columns).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, other: &MatrixQ) -> MatrixQ {
        assert_eq!((self.rows, self.cols()), (other.rows, other.cols()));
        MatrixQ {
            rows: self.rows,
            columns: self.columns.iter().zip(&other.columns).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> MatrixQ {
        MatrixQ { rows: self.rows, columns: self.columns.iter().map(|v| v.scale(c)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vector::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && self.columns.iter().enumerate().all(|(j, c)| *c == Vector::unit(self.rows, j))
    }

    pub fn trace(&self) -> Rational {
        assert!(self.is_square());
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    pub fn rank(&self) -> usize {
        let mut red = RowReducer::new(self.rows);
        for c in &self.columns {
            red.insert(c);
        }
        red.rank()
    }

    /// Basis of `{x : self x = 0}`.
    pub fn kernel(&self) -> Vec<Vector> {
        kernel_of_rows(self.row_vectors().iter(), self.cols())
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Option<MatrixQ> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        // Row-reduce [A | I] using rows of width 2n.
        let mut red = RowReducer::new(2 * n);
        for (i, row) in self.row_vectors().into_iter().enumerate() {
            red.insert(&row.concat(&Vector::unit(n, i)));
        }
        let rref = red.into_rref();
        if rref.len() < n || rref[n - 1].leading().map_or(true, |(p, _)| p >= n) {
            return None;
        }
        let rows: Vec<Vector> = rref.iter().map(|r| r.slice(n, n)).collect();
        let dense: Vec<Vec<Rational>> = rows.iter().map(Vector::to_dense).collect();
        Some(MatrixQ::from_rows(&dense))
    }

    /// Integer power; negative exponents need an invertible matrix.
    pub fn pow(&self, k: i32) -> Option<MatrixQ> {
        assert!(self.is_square());
        let base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = MatrixQ::identity(self.rows);
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&b);
            }
            b = b.compose(&b);
            e >>= 1;
        }
        Some(acc)
    }

    pub fn block_diag(a: &MatrixQ, b: &MatrixQ) -> MatrixQ {
        let rows = a.rows + b.rows;
        let mut columns: Vec<Vector> = a.columns.iter().map(|c| c.embed(rows, 0)).collect();
        columns.extend(b.columns.iter().map(|c| c.embed(rows, a.rows)));
        MatrixQ { rows, columns }
    }

    /// Kronecker product `a ⊗ b` with basis order `(i, j) -> i * b.cols + j`.
    pub fn kron(a: &MatrixQ, b: &MatrixQ) -> MatrixQ {
        let rows = a.rows * b.rows;
        let mut columns = Vec::with_capacity(a.cols() * b.cols());
        for ca in &a.columns {
            for cb in &b.columns {
                let mut acc = Accumulator::new(rows);
                for (i, x) in ca.iter() {
                    for (k, y) in cb.iter() {
                        acc.add(i * b.rows + k, &(x * y));
                    }
                }
                columns.push(acc.finish());
            }
        }
        MatrixQ { rows, columns }
    }

    pub fn to_dense_rows(&self) -> Vec<Vec<Rational>> {
        let mut out = vec![vec![Rational::zero(); self.cols()]; self.rows];
        for (j, c) in self.columns.iter().enumerate() {
            for (i, v) in c.iter() {
                out[i][j] = v.clone();
            }
        }
        out
    }
}

impl fmt::Debug for MatrixQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.to_dense_rows().iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            write!(f, "{}", cells.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Linear map whose value on some basis vectors is unknown (outside a
/// truncation window). Applying it to a vector that touches an unknown
/// column gives `None`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PartialMap {
    rows: usize,
    columns: Vec<Option<Vector>>,
}

impl PartialMap {
    pub fn zero(rows: usize, cols: usize) -> Self {
        PartialMap { rows, columns: vec![Some(Vector::zero(rows)); cols] }
    }

    pub fn from_columns(rows: usize, columns: Vec<Option<Vector>>) -> Self {
        for c in columns.iter().flatten() {
            assert_eq!(c.dim(), rows, "column dimension mismatch");
        }
        PartialMap { rows, columns }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> Option<&Vector> {
        self.columns[j].as_ref()
    }

    pub fn columns(&self) -> &[Option<Vector>] {
        &self.columns
    }

    pub fn is_total(&self) -> bool {
        self.columns.iter().all(Option::is_some)
    }

    pub fn undefined_count(&self) -> usize {
        self.columns.iter().filter(|c| c.is_none()).count()
    }

    pub fn apply(&self, v: &Vector) -> Option<Vector> {
        assert_eq!(v.dim(), self.cols(), "map/vector dimension mismatch");
        let mut acc = Accumulator::new(self.rows);
        for (j, c) in v.iter() {
            acc.add_vector(c, self.columns[j].as_ref()?);
        }
        Some(acc.finish())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &PartialMap) -> PartialMap {
        assert_eq!(self.cols(), other.rows, "composition dimension mismatch");
        PartialMap {
            rows: self.rows,
            columns: other.columns.iter().map(|c| c.as_ref().and_then(|c| self.apply(c))).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> PartialMap {
        PartialMap {
            rows: self.rows,
            columns: self.columns.iter().map(|v| v.as_ref().map(|v| v.scale(c))).collect(),
        }
    }

    /// Columnwise `self + c * other`; undefined wherever either side is.
    pub fn add_scaled(&self, c: &Rational, other: &PartialMap) -> PartialMap {
        assert_eq!((self.rows, self.cols()), (other.rows, other.cols()));
        if c.is_zero() {
            return self.clone();
        }
        PartialMap {
            rows: self.rows,
            columns: self
                .columns
                .iter()
                .zip(&other.columns)
                .map(|(a, b)| Some(a.as_ref()?.add_scaled(c, b.as_ref()?)))
                .collect(),
        }
    }

    pub fn is_zero_where_defined(&self) -> bool {
        self.columns.iter().flatten().all(Vector::is_zero)
    }

    pub fn to_total(&self) -> Option<MatrixQ> {
        let cols: Option<Vec<Vector>> = self.columns.iter().cloned().collect();
        Some(MatrixQ::from_columns(self.rows, cols?))
    }
}

impl From<&MatrixQ> for PartialMap {
    fn from(m: &MatrixQ) -> Self {
        PartialMap { rows: m.rows(), columns: m.columns().iter().cloned().map(Some).collect() }
    }
}

impl From<MatrixQ> for PartialMap {
    fn from(m: MatrixQ) -> Self {
        PartialMap::from(&m)
    }
}
