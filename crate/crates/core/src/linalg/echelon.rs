//! Sparse exact Gaussian elimination.
//!
//! Rows are reduced one at a time against the pivot rows found so far (each
//! normalized to a leading 1), using a dense scratch accumulator and a min-heap
//! of live columns. Pivots are always the lowest nonzero column of the reduced
//! row, so the final back-substitution yields the unique reduced row echelon
//! form no matter which order rows are fed in. Callers exploit that by feeding
//! sparse rows first and skipping exact duplicates, which keeps fill-in low on
//! the heavily redundant constraint systems.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

use super::sparse::{SparseMatrix, SparseRow};
use super::{LinalgError, Rational};

/// Dense accumulator used to reduce a single row.
struct Scratch {
    vals: Vec<Rational>,
    queued: Vec<bool>,
    heap: BinaryHeap<Reverse<usize>>,
    touched: Vec<usize>,
}

impl Scratch {
    fn new(cols: usize) -> Self {
        Scratch {
            vals: vec![Rational::ZERO; cols],
            queued: vec![false; cols],
            heap: BinaryHeap::new(),
            touched: Vec::new(),
        }
    }

    fn touch(&mut self, c: usize) {
        if !self.queued[c] {
            self.queued[c] = true;
            self.heap.push(Reverse(c));
            self.touched.push(c);
        }
    }

    fn load(&mut self, row: &[(usize, Rational)]) {
        for (c, v) in row {
            self.touch(*c);
            self.vals[*c] += v;
        }
    }

    fn clear(&mut self) {
        for c in self.touched.drain(..) {
            self.vals[c] = Rational::ZERO;
            self.queued[c] = false;
        }
        self.heap.clear();
    }

    fn eliminate(&mut self, factor: &Rational, pivot_row: &[(usize, Rational)]) {
        for (cc, v) in pivot_row {
            self.touch(*cc);
            self.vals[*cc].sub_mul_assign(factor, v);
        }
    }

    /// Reduces the loaded row until its leading column has no pivot.
    /// Returns the remainder normalized to a leading 1, or `None` if it vanished.
    fn reduce_leading(&mut self, pivots: &[Option<SparseRow>]) -> Option<SparseRow> {
        while let Some(Reverse(c)) = self.heap.pop() {
            if self.vals[c].is_zero() {
                continue;
            }
            if let Some(prow) = &pivots[c] {
                let factor = std::mem::take(&mut self.vals[c]);
                self.eliminate(&factor, &prow[1..]);
                continue;
            }
            let lead = self.vals[c].recip();
            let mut rest: Vec<usize> = self.heap.drain().map(|Reverse(x)| x).collect();
            rest.sort_unstable();
            let mut out = Vec::with_capacity(rest.len() + 1);
            out.push((c, Rational::ONE));
            for x in rest {
                if x != c && !self.vals[x].is_zero() {
                    out.push((x, &self.vals[x] * &lead));
                }
            }
            out.dedup_by_key(|(x, _)| *x);
            self.clear();
            return Some(out);
        }
        self.clear();
        None
    }

    /// Eliminates every pivot column present in the loaded row.
    fn reduce_full(&mut self, pivots: &[Option<SparseRow>]) -> SparseRow {
        let mut out = Vec::new();
        while let Some(Reverse(c)) = self.heap.pop() {
            if self.vals[c].is_zero() {
                continue;
            }
            match &pivots[c] {
                Some(prow) => {
                    let factor = std::mem::take(&mut self.vals[c]);
                    self.eliminate(&factor, &prow[1..]);
                }
                None => out.push((c, self.vals[c].clone())),
            }
        }
        self.clear();
        out
    }
}

/// An incrementally built row echelon basis of a subspace of `Q^cols`.
pub struct Echelon {
    cols: usize,
    pivots: Vec<Option<SparseRow>>,
    rank: usize,
    scratch: Scratch,
}

impl Echelon {
    pub fn new(cols: usize) -> Self {
        Echelon {
            cols,
            pivots: vec![None; cols],
            rank: 0,
            scratch: Scratch::new(cols),
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Adds a sparse row; returns the new pivot column if the row was independent.
    pub fn insert_sparse(&mut self, row: &[(usize, Rational)]) -> Option<usize> {
        self.scratch.load(row);
        let reduced = self.scratch.reduce_leading(&self.pivots)?;
        let c = reduced[0].0;
        self.pivots[c] = Some(reduced);
        self.rank += 1;
        Some(c)
    }

    pub fn insert_dense(&mut self, v: &[Rational]) -> Option<usize> {
        assert_eq!(v.len(), self.cols);
        self.insert_sparse(&dense_to_sparse(v))
    }

    /// Whether `row` lies in the span of the rows inserted so far.
    pub fn contains_sparse(&mut self, row: &[(usize, Rational)]) -> bool {
        self.scratch.load(row);
        self.scratch.reduce_leading(&self.pivots).is_none()
    }

    pub fn contains_dense(&mut self, v: &[Rational]) -> bool {
        assert_eq!(v.len(), self.cols);
        self.contains_sparse(&dense_to_sparse(v))
    }

    /// Back-substitutes into reduced row echelon form.
    /// Returns the nonzero rows in increasing pivot order.
    pub fn into_rref(mut self) -> (Vec<SparseRow>, Vec<usize>) {
        let pivot_cols: Vec<usize> = (0..self.cols).filter(|c| self.pivots[*c].is_some()).collect();
        for &c in pivot_cols.iter().rev() {
            let row = self.pivots[c].take().expect("pivot row present");
            // Pivots right of `c` are already fully reduced.
            self.scratch.load(&row[1..]);
            let tail = self.scratch.reduce_full(&self.pivots);
            let mut reduced = Vec::with_capacity(tail.len() + 1);
            reduced.push((c, Rational::ONE));
            reduced.extend(tail);
            self.pivots[c] = Some(reduced);
        }
        let rows = pivot_cols
            .iter()
            .map(|c| self.pivots[*c].take().expect("pivot row present"))
            .collect();
        (rows, pivot_cols)
    }
}

pub(crate) fn dense_to_sparse(v: &[Rational]) -> SparseRow {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(c, x)| (c, x.clone()))
        .collect()
}

/// Distinct nonzero rows of `m`, scaled to a leading 1 and ordered sparsest first.
fn elimination_order(m: &SparseMatrix) -> Vec<SparseRow> {
    let mut seen: HashSet<SparseRow> = HashSet::new();
    let mut rows: Vec<SparseRow> = Vec::new();
    for r in 0..m.rows() {
        let row = m.row_vec(r);
        if row.is_empty() {
            continue;
        }
        let lead = row[0].1.recip();
        let scaled: SparseRow = row.into_iter().map(|(c, v)| (c, v * &lead)).collect();
        if seen.insert(scaled.clone()) {
            rows.push(scaled);
        }
    }
    rows.sort_by_key(|r| r.len());
    rows
}

fn echelon_of(m: &SparseMatrix) -> Echelon {
    let mut ech = Echelon::new(m.cols());
    for row in elimination_order(m) {
        if ech.rank() == ech.cols() {
            break;
        }
        ech.insert_sparse(&row);
    }
    ech
}

/// Reduced row echelon form with zero rows dropped, plus the pivot columns.
pub fn rref(m: &SparseMatrix) -> (SparseMatrix, Vec<usize>) {
    let (rows, pivots) = echelon_of(m).into_rref();
    (SparseMatrix::from_rows(m.cols(), rows), pivots)
}

pub fn rank(m: &SparseMatrix) -> usize {
    echelon_of(m).rank()
}

/// Canonical kernel basis built from the reduced row echelon form of `rref_rows`.
fn nullspace_from_rref(
    cols: usize,
    rows: &[SparseRow],
    pivots: &[usize],
) -> Vec<Vec<Rational>> {
    let mut is_pivot = vec![false; cols];
    for p in pivots {
        is_pivot[*p] = true;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !is_pivot[*c]).collect();
    let mut slot = vec![usize::MAX; cols];
    for (i, f) in free.iter().enumerate() {
        slot[*f] = i;
    }
    let mut basis: Vec<Vec<Rational>> = free
        .iter()
        .map(|f| {
            let mut v = vec![Rational::ZERO; cols];
            v[*f] = Rational::ONE;
            v
        })
        .collect();
    for (row, p) in rows.iter().zip(pivots) {
        for (c, val) in row.iter().skip(1) {
            if !is_pivot[*c] {
                basis[slot[*c]][*p] = -val;
            }
        }
    }
    basis
}

/// Basis of `{v : m v = 0}`: one vector per free column (set to 1, other free
/// columns 0, pivots back-solved), in increasing free-column order.
pub fn nullspace(m: &SparseMatrix) -> Vec<Vec<Rational>> {
    let (rows, pivots) = echelon_of(m).into_rref();
    nullspace_from_rref(m.cols(), &rows, &pivots)
}

/// Solves `m x = rhs`, returning the solution with every free variable zero.
///
/// Rows are processed in input order; an inconsistency is reported against the
/// first input row whose reduction leaves only a right-hand-side entry.
pub fn solve(m: &SparseMatrix, rhs: &[Rational]) -> Result<Vec<Rational>, LinalgError> {
    if rhs.len() != m.rows() {
        return Err(LinalgError::RhsLength {
            expected: m.rows(),
            got: rhs.len(),
        });
    }
    let n = m.cols();
    let mut ech = Echelon::new(n + 1);
    for (r, b) in rhs.iter().enumerate() {
        let mut row = m.row_vec(r);
        if !b.is_zero() {
            row.push((n, b.clone()));
        }
        if row.is_empty() {
            continue;
        }
        if ech.insert_sparse(&row) == Some(n) {
            return Err(LinalgError::Inconsistent { row: r });
        }
    }
    let (rows, pivots) = ech.into_rref();
    let mut x = vec![Rational::ZERO; n];
    for (row, p) in rows.iter().zip(&pivots) {
        if let Some((c, v)) = row.last() {
            if *c == n {
                x[*p] = v.clone();
            }
        }
    }
    Ok(x)
}

/// Whether every vector of `b` lies in the span of `a`.
pub fn span_contains(cols: usize, a: &[Vec<Rational>], b: &[Vec<Rational>]) -> bool {
    let mut ech = Echelon::new(cols);
    for v in a {
        ech.insert_dense(v);
    }
    b.iter().all(|v| ech.contains_dense(v))
}

pub fn span_eq(cols: usize, a: &[Vec<Rational>], b: &[Vec<Rational>]) -> bool {
    span_contains(cols, a, b) && span_contains(cols, b, a)
}

/// Dimension of the span of a family of dense vectors.
pub fn span_rank(cols: usize, vs: &[Vec<Rational>]) -> usize {
    let mut ech = Echelon::new(cols);
    for v in vs {
        ech.insert_dense(v);
    }
    ech.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;
    use proptest::prelude::*;

    fn mat(rows: &[&[i64]]) -> SparseMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        let dense: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|x| q(*x)).collect()).collect();
        SparseMatrix::from_dense(cols, &dense).unwrap()
    }

    fn qs(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|x| q(*x)).collect()
    }

    #[test]
    fn rref_rank_one() {
        let (r, p) = rref(&mat(&[&[1, 2], &[2, 4]]));
        assert_eq!(r.to_dense(), vec![qs(&[1, 2])]);
        assert_eq!(p, vec![0]);
    }

    #[test]
    fn rref_identity_is_fixed() {
        let id = SparseMatrix::identity(3);
        let (r, p) = rref(&id);
        assert_eq!(r, id);
        assert_eq!(p, vec![0, 1, 2]);
    }

    #[test]
    fn rref_row_swap() {
        let (r, p) = rref(&mat(&[&[0, 1], &[1, 0]]));
        assert_eq!(r.to_dense(), vec![qs(&[1, 0]), qs(&[0, 1])]);
        assert_eq!(p, vec![0, 1]);
    }

    #[test]
    fn rref_needs_back_substitution() {
        let (r, p) = rref(&mat(&[&[1, 1, 1], &[0, 2, 4], &[0, 0, 3]]));
        assert_eq!(r, SparseMatrix::identity(3));
        assert_eq!(p, vec![0, 1, 2]);
        let (r, _) = rref(&mat(&[&[2, 4, 6], &[1, 3, 5]]));
        assert_eq!(r.to_dense(), vec![qs(&[1, 0, -1]), qs(&[0, 1, 2])]);
    }

    #[test]
    fn nullspace_examples() {
        assert!(nullspace(&SparseMatrix::identity(2)).is_empty());
        assert_eq!(nullspace(&mat(&[&[1, 1]])), vec![qs(&[-1, 1])]);
        assert_eq!(
            nullspace(&SparseMatrix::zeros(2, 3)),
            vec![qs(&[1, 0, 0]), qs(&[0, 1, 0]), qs(&[0, 0, 1])]
        );
    }

    #[test]
    fn solve_examples() {
        assert_eq!(solve(&SparseMatrix::identity(2), &qs(&[3, 5])).unwrap(), qs(&[3, 5]));
        assert_eq!(solve(&mat(&[&[1, 1]]), &qs(&[2])).unwrap(), qs(&[2, 0]));
        assert_eq!(
            solve(&mat(&[&[1], &[1]]), &qs(&[1, 2])),
            Err(LinalgError::Inconsistent { row: 1 })
        );
        assert!(matches!(
            solve(&mat(&[&[1]]), &qs(&[1, 2])),
            Err(LinalgError::RhsLength { .. })
        ));
    }

    #[test]
    fn span_helpers() {
        let a = vec![qs(&[1, 0, 1]), qs(&[0, 1, 1])];
        let b = vec![qs(&[1, 1, 2])];
        assert!(span_contains(3, &a, &b));
        assert!(!span_contains(3, &b, &a));
        assert!(span_eq(3, &a, &[qs(&[1, 1, 2]), qs(&[1, -1, 0])]));
        assert_eq!(span_rank(3, &a), 2);
    }

    /// Reference Gauss-Jordan on dense rows, kept deliberately naive.
    fn dense_rref(mut a: Vec<Vec<Rational>>, cols: usize) -> (Vec<Vec<Rational>>, Vec<usize>) {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            let Some(p) = (r..a.len()).find(|i| !a[*i][c].is_zero()) else {
                continue;
            };
            a.swap(r, p);
            let inv = a[r][c].recip();
            for x in a[r].iter_mut() {
                *x = &*x * &inv;
            }
            for i in 0..a.len() {
                if i != r && !a[i][c].is_zero() {
                    let f = a[i][c].clone();
                    for j in 0..cols {
                        let t = &f * &a[r][j];
                        a[i][j] -= t;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        a.truncate(r);
        (a, pivots)
    }

    fn small_matrix() -> impl Strategy<Value = (usize, Vec<Vec<i64>>)> {
        (1usize..6, 1usize..7).prop_flat_map(|(rows, cols)| {
            (
                Just(cols),
                prop::collection::vec(
                    prop::collection::vec(prop_oneof![3 => Just(0i64), 2 => -3i64..4], cols),
                    rows,
                ),
            )
        })
    }

    proptest! {
        #[test]
        fn matches_dense_reference((cols, rows) in small_matrix()) {
            let dense: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|x| q(*x)).collect()).collect();
            let m = SparseMatrix::from_dense(cols, &dense).unwrap();
            let (r, p) = rref(&m);
            let (dr, dp) = dense_rref(dense, cols);
            prop_assert_eq!(r.to_dense(), dr);
            prop_assert_eq!(&p, &dp);
            let (rr, pp) = rref(&r);
            prop_assert_eq!(rr, r);
            prop_assert_eq!(pp, p);
        }

        #[test]
        fn kernel_vectors_are_annihilated((cols, rows) in small_matrix()) {
            let dense: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|x| q(*x)).collect()).collect();
            let m = SparseMatrix::from_dense(cols, &dense).unwrap();
            let ns = nullspace(&m);
            prop_assert_eq!(rank(&m) + ns.len(), cols);
            for v in &ns {
                prop_assert!(m.mul_vec(v).iter().all(Rational::is_zero));
            }
        }

        #[test]
        fn solve_satisfies_system((cols, rows) in small_matrix(), x in prop::collection::vec(-3i64..4, 7)) {
            let dense: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|v| q(*v)).collect()).collect();
            let m = SparseMatrix::from_dense(cols, &dense).unwrap();
            let x: Vec<Rational> = x[..cols].iter().map(|v| q(*v)).collect();
            let b = m.mul_vec(&x);
            let sol = solve(&m, &b).unwrap();
            prop_assert_eq!(m.mul_vec(&sol), b);
        }
    }
}
