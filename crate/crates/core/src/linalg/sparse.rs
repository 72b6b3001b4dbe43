use super::{LinalgError, Rational};

/// A sparse row: `(column, value)` pairs sorted by column, no zero values.
pub type SparseRow = Vec<(usize, Rational)>;

/// Compressed-row sparse matrix over the rationals.
///
/// Entries are unique per position, never zero, and ordered by `(row, col)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    vals: Vec<Rational>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            row_ptr: vec![0; rows + 1],
            col_idx: Vec::new(),
            vals: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_rows(n, (0..n).map(|i| vec![(i, Rational::ONE)]).collect())
    }

    /// Builds a matrix from arbitrary triplets. Duplicate positions are summed
    /// and zero results dropped.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, Rational)>,
    ) -> Result<Self, LinalgError> {
        let mut per_row: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); rows];
        for (r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(LinalgError::IndexOutOfRange {
                    row: r,
                    col: c,
                    rows,
                    cols,
                });
            }
            per_row[r].push((c, v));
        }
        let rows_vec = per_row.into_iter().map(canonical_row).collect();
        Ok(Self::from_rows(cols, rows_vec))
    }

    pub fn from_dense(cols: usize, dense: &[Vec<Rational>]) -> Result<Self, LinalgError> {
        let mut rows = Vec::with_capacity(dense.len());
        for (r, row) in dense.iter().enumerate() {
            if row.len() != cols {
                return Err(LinalgError::RaggedRow {
                    row: r,
                    len: row.len(),
                    cols,
                });
            }
            rows.push(
                row.iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(c, v)| (c, v.clone()))
                    .collect(),
            );
        }
        Ok(Self::from_rows(cols, rows))
    }

    /// Assembles from rows that already satisfy the sparse-row invariants.
    pub(crate) fn from_rows(cols: usize, rows: Vec<SparseRow>) -> Self {
        let mut row_ptr = Vec::with_capacity(rows.len() + 1);
        let nnz = rows.iter().map(Vec::len).sum();
        let mut col_idx = Vec::with_capacity(nnz);
        let mut vals = Vec::with_capacity(nnz);
        row_ptr.push(0);
        for row in &rows {
            debug_assert!(row.windows(2).all(|w| w[0].0 < w[1].0));
            for (c, v) in row {
                debug_assert!(*c < cols && !v.is_zero());
                col_idx.push(*c);
                vals.push(v.clone());
            }
            row_ptr.push(col_idx.len());
        }
        SparseMatrix {
            rows: rows.len(),
            cols,
            row_ptr,
            col_idx,
            vals,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// Column indices and values of row `r`.
    pub fn row(&self, r: usize) -> (&[usize], &[Rational]) {
        let (a, b) = (self.row_ptr[r], self.row_ptr[r + 1]);
        (&self.col_idx[a..b], &self.vals[a..b])
    }

    pub(crate) fn row_vec(&self, r: usize) -> SparseRow {
        let (c, v) = self.row(r);
        c.iter().copied().zip(v.iter().cloned()).collect()
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        let (cols, vals) = self.row(r);
        match cols.binary_search(&c) {
            Ok(i) => vals[i].clone(),
            Err(_) => Rational::ZERO,
        }
    }

    /// All stored entries in `(row, col)` order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Rational)> + '_ {
        (0..self.rows).flat_map(move |r| {
            let (c, v) = self.row(r);
            c.iter().zip(v).map(move |(c, v)| (r, *c, v))
        })
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        let mut out = vec![vec![Rational::ZERO; self.cols]; self.rows];
        for (r, c, v) in self.entries() {
            out[r][c] = v.clone();
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols, "vector length must equal column count");
        (0..self.rows)
            .map(|r| {
                let (cols, vals) = self.row(r);
                let mut acc = Rational::ZERO;
                for (c, x) in cols.iter().zip(vals) {
                    if !v[*c].is_zero() {
                        acc += x * &v[*c];
                    }
                }
                acc
            })
            .collect()
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut rows: Vec<SparseRow> = vec![Vec::new(); self.cols];
        for (r, c, v) in self.entries() {
            rows[c].push((r, v.clone()));
        }
        Self::from_rows(self.rows, rows)
    }
}

/// Sorts by column, merges duplicates, and drops zeros.
pub(crate) fn canonical_row(mut row: Vec<(usize, Rational)>) -> SparseRow {
    row.sort_by_key(|(c, _)| *c);
    let mut out: SparseRow = Vec::with_capacity(row.len());
    for (c, v) in row {
        match out.last_mut() {
            Some((lc, lv)) if *lc == c => *lv += v,
            _ => out.push((c, v)),
        }
    }
    out.retain(|(_, v)| !v.is_zero());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    #[test]
    fn triplets_merge_and_drop_zeros() {
        let m = SparseMatrix::from_triplets(
            2,
            3,
            vec![(1, 2, q(1)), (0, 1, q(2)), (1, 2, q(-1)), (0, 1, q(3))],
        )
        .unwrap();
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(0, 1), q(5));
        assert_eq!(m.get(1, 2), q(0));
        let e: Vec<_> = m.entries().map(|(r, c, v)| (r, c, v.clone())).collect();
        assert_eq!(e, vec![(0, 1, q(5))]);
    }

    #[test]
    fn out_of_range_rejected() {
        let err = SparseMatrix::from_triplets(1, 1, vec![(0, 1, q(1))]).unwrap_err();
        assert!(matches!(err, LinalgError::IndexOutOfRange { col: 1, .. }));
    }

    #[test]
    fn transpose_and_mul() {
        let m = SparseMatrix::from_dense(2, &[vec![q(1), q(2)], vec![q(0), q(3)]]).unwrap();
        assert_eq!(m.mul_vec(&[q(1), q(1)]), vec![q(3), q(3)]);
        assert_eq!(m.transpose().to_dense(), vec![vec![q(1), q(0)], vec![q(2), q(3)]]);
    }
}
