//! Dense reference implementations shared by the integration tests. Nothing
//! here calls the library's linear algebra.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use tribider::bider::MapLaw;
use tribider::{FiniteAlgebra, Rational};

pub type Q = BigRational;

pub fn big(r: &Rational) -> Q {
    Q::new(r.numer(), r.denom())
}

pub fn int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Dense structure tensor `c[i][j][k]`.
pub struct Dense {
    pub d: usize,
    pub c: Vec<Vec<Vec<Q>>>,
}

impl Dense {
    pub fn new(alg: &FiniteAlgebra) -> Self {
        let d = alg.dim();
        let mut c = vec![vec![vec![Q::zero(); d]; d]; d];
        for (i, j, k, v) in alg.structure_constants() {
            c[i][j][k] += big(v);
        }
        Dense { d, c }
    }

    /// `[b_i, b_j]_k`
    pub fn br(&self, i: usize, j: usize, k: usize) -> Q {
        &self.c[i][j][k] - &self.c[j][i][k]
    }

    fn op(&self, bracket: bool, i: usize, j: usize, k: usize) -> Q {
        if bracket {
            self.br(i, j, k)
        } else {
            self.c[i][j][k].clone()
        }
    }

    /// Every row of the constraint system for `law`, over all `d^3` unknowns.
    pub fn constraints(&self, law: MapLaw) -> Vec<Vec<Q>> {
        let d = self.d;
        let u = |i: usize, j: usize, k: usize| (i * d + j) * d + k;
        let (first, second, bracket) = match law {
            MapLaw::LieBider => (true, true, true),
            MapLaw::AssocBider => (true, true, false),
            MapLaw::LieDerivFirstArg => (true, false, true),
            MapLaw::LieDerivSecondArg => (false, true, true),
        };
        let mut rows = Vec::new();
        for (slot, active) in [(1, first), (2, second)] {
            if !active {
                continue;
            }
            for x in 0..d {
                for y in 0..d {
                    for z in 0..d {
                        for k in 0..d {
                            let mut row = vec![Q::zero(); d * d * d];
                            if slot == 1 {
                                // phi(x.y, z) - phi(x,z).y - x.phi(y,z)
                                for s in 0..d {
                                    row[u(s, z, k)] += self.op(bracket, x, y, s);
                                }
                                for m in 0..d {
                                    row[u(x, z, m)] -= self.op(bracket, m, y, k);
                                    row[u(y, z, m)] -= self.op(bracket, x, m, k);
                                }
                            } else {
                                // phi(x, y.z) - phi(x,y).z - y.phi(x,z)
                                for s in 0..d {
                                    row[u(x, s, k)] += self.op(bracket, y, z, s);
                                }
                                for m in 0..d {
                                    row[u(x, y, m)] -= self.op(bracket, m, z, k);
                                    row[u(x, z, m)] -= self.op(bracket, y, m, k);
                                }
                            }
                            rows.push(row);
                        }
                    }
                }
            }
        }
        rows
    }
}

/// Textbook Gauss-Jordan elimination; returns the RREF rows and pivot columns.
pub fn gauss_jordan(mut rows: Vec<Vec<Q>>, cols: usize) -> (Vec<Vec<Q>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= &f * pv;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

pub fn dense_rank(rows: Vec<Vec<Q>>, cols: usize) -> usize {
    gauss_jordan(rows, cols).1.len()
}

/// Kernel basis from the RREF: one vector per free column.
pub fn dense_nullspace(rows: Vec<Vec<Q>>, cols: usize) -> Vec<Vec<Q>> {
    let (rref, pivots) = gauss_jordan(rows, cols);
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Q::zero(); cols];
            v[free] = Q::one();
            for (row, &p) in rref.iter().zip(&pivots) {
                v[p] = -row[free].clone();
            }
            v
        })
        .collect()
}

pub fn to_dense(v: &[Rational]) -> Vec<Q> {
    v.iter().map(big).collect()
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Whether every vector of `b` lies in the span of `a`.
pub fn span_contains(cols: usize, a: &[Vec<Q>], b: &[Vec<Q>]) -> bool {
    let ra = dense_rank(a.to_vec(), cols);
    let mut both = a.to_vec();
    both.extend(b.iter().cloned());
    dense_rank(both, cols) == ra
}
