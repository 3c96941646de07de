use super::{Rational, Vector};

/// Incremental row echelon form over sparse rows.
///
/// Rows are kept monic with pairwise distinct leading columns. `insert`
/// reduces a new row against the current ones and keeps the remainder.
#[derive(Debug, Clone)]
pub struct RowReducer {
    width: usize,
    rows: Vec<Vector>,
    /// `pivot_row[c]` is the row whose leading column is `c`.
    pivot_row: Vec<Option<usize>>,
}

impl RowReducer {
    pub fn new(width: usize) -> Self {
        RowReducer { width, rows: Vec::new(), pivot_row: vec![None; width] }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.width
    }

    /// Remainder of `v` after eliminating every current pivot column.
    pub fn reduce(&self, v: &Vector) -> Vector {
        assert_eq!(v.dim(), self.width, "row width mismatch");
        let mut v = v.clone();
        let mut cursor = 0;
        loop {
            let hit = v
                .iter()
                .filter(|(i, _)| *i >= cursor)
                .find_map(|(i, c)| self.pivot_row[i].map(|r| (i, r, c.clone())));
            match hit {
                Some((col, r, c)) => {
                    v = v.add_scaled(&-c, &self.rows[r]);
                    cursor = col + 1;
                }
                None => return v,
            }
        }
    }

    /// Returns true when `v` was independent of the rows so far.
    pub fn insert(&mut self, v: &Vector) -> bool {
        let rem = self.reduce(v);
        let Some((lead, c)) = rem.leading() else {
            return false;
        };
        let rem = rem.scale(&c.recip());
        self.pivot_row[lead] = Some(self.rows.len());
        self.rows.push(rem);
        true
    }

    pub fn contains(&self, v: &Vector) -> bool {
        self.reduce(v).is_zero()
    }

    /// Fully reduced rows sorted by pivot column.
    pub fn into_rref(self) -> Vec<Vector> {
        let mut order: Vec<usize> = self.rows.iter().map(|r| r.leading().unwrap().0).collect();
        order.sort_unstable();
        let mut out: Vec<Vector> = Vec::with_capacity(order.len());
        // Back substitution from the last pivot upwards.
        let mut reduced: Vec<Option<Vector>> = vec![None; self.width];
        for &col in order.iter().rev() {
            let mut row = self.rows[self.pivot_row[col].unwrap()].clone();
            let targets: Vec<usize> = row
                .iter()
                .map(|(i, _)| i)
                .filter(|&i| i > col && reduced[i].is_some())
                .collect();
            for i in targets {
                // Earlier eliminations may have changed this coefficient.
                let cur = row.get(i);
                if !cur.is_zero() {
                    row = row.add_scaled(&-cur, reduced[i].as_ref().unwrap());
                }
            }
            reduced[col] = Some(row);
        }
        for col in order {
            out.push(reduced[col].take().unwrap());
        }
        out
    }
}

/// Pivot columns of an RREF row list.
pub fn pivots(rref: &[Vector]) -> Vec<usize> {
    rref.iter().map(|r| r.leading().expect("zero row in rref").0).collect()
}

/// Kernel basis of the linear map whose rows (equations) are given in RREF.
pub fn kernel_from_rref(rref: &[Vector], width: usize) -> Vec<Vector> {
    let piv = pivots(rref);
    let mut is_pivot = vec![false; width];
    for &p in &piv {
        is_pivot[p] = true;
    }
    let mut out = Vec::new();
    for free in (0..width).filter(|c| !is_pivot[*c]) {
        let mut pairs = vec![(free, Rational::one())];
        for (row, &p) in rref.iter().zip(&piv) {
            let c = row.get(free);
            if !c.is_zero() {
                pairs.push((p, -c));
            }
        }
        out.push(Vector::from_pairs(width, pairs));
    }
    out
}

/// Kernel of the equations `rows * x = 0`.
pub fn kernel_of_rows<'a, I>(rows: I, width: usize) -> Vec<Vector>
where
    I: IntoIterator<Item = &'a Vector>,
{
    let mut red = RowReducer::new(width);
    for r in rows {
        red.insert(r);
        if red.is_full() {
            return Vec::new();
        }
    }
    kernel_from_rref(&red.into_rref(), width)
}
