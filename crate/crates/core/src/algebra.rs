//! Finite-dimensional associative unital algebras given by structure constants.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::atomic::{AtomicU64, Ordering};

use crate::linalg::{nullspace, Rational, SparseMatrix, SparseRow};

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

/// Identity of a constructed algebra; clones share it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraId(u64);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("algebra must have positive dimension")]
    Empty,
    #[error("expected {expected} basis labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("structure constant index ({i}, {j}, {k}) out of range for dimension {dim}")]
    IndexOutOfRange {
        i: usize,
        j: usize,
        k: usize,
        dim: usize,
    },
    #[error("coordinate vector has length {got}, algebra dimension is {dim}")]
    CoordLength { dim: usize, got: usize },
    #[error("not associative: (b{i} b{j}) b{l} != b{i} (b{j} b{l})")]
    NotAssociative { i: usize, j: usize, l: usize },
    #[error("given unit fails u*b{i} = b{i}*u = b{i}")]
    NotUnit { i: usize },
    #[error("operands belong to different algebras")]
    MixedAlgebras,
}

/// A coordinate vector in the basis of a specific algebra.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Element {
    algebra: AlgebraId,
    coords: Vec<Rational>,
}

impl Element {
    pub fn algebra_id(&self) -> AlgebraId {
        self.algebra
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.coords
    }

    pub fn coord(&self, i: usize) -> &Rational {
        &self.coords[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Rational::is_zero)
    }

    pub fn scale(&self, s: &Rational) -> Element {
        Element {
            algebra: self.algebra,
            coords: self.coords.iter().map(|c| c * s).collect(),
        }
    }

    /// Indices and values of the nonzero coordinates.
    pub fn support(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.coords.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    fn zip_with(&self, rhs: &Element, f: impl Fn(&Rational, &Rational) -> Rational) -> Element {
        assert_eq!(self.algebra, rhs.algebra, "elements of different algebras");
        Element {
            algebra: self.algebra,
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| f(a, b)).collect(),
        }
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.coords).finish()
    }
}

impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Add for Element {
    type Output = Element;
    fn add(self, rhs: Element) -> Element {
        &self + &rhs
    }
}

impl Sub for Element {
    type Output = Element;
    fn sub(self, rhs: Element) -> Element {
        &self - &rhs
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        Element {
            algebra: self.algebra,
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

/// An associative unital algebra over the rationals, presented by a basis and
/// the structure constants `b_i b_j = sum_k c[i][j][k] b_k`.
#[derive(Clone, Debug)]
pub struct FiniteAlgebra {
    id: AlgebraId,
    labels: Vec<String>,
    /// `table[i * dim + j]` is the product `b_i b_j`.
    table: Vec<SparseRow>,
    unit: Vec<Rational>,
}

impl PartialEq for FiniteAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.table == other.table && self.unit == other.unit
    }
}

impl FiniteAlgebra {
    /// Validates and builds an algebra. Duplicate constants at one position are
    /// summed. Associativity and the unit laws are checked on all basis tuples.
    pub fn new(
        labels: Vec<String>,
        constants: impl IntoIterator<Item = (usize, usize, usize, Rational)>,
        unit: Vec<Rational>,
    ) -> Result<Self, AlgebraError> {
        let dim = unit.len();
        if dim == 0 {
            return Err(AlgebraError::Empty);
        }
        if labels.len() != dim {
            return Err(AlgebraError::LabelCount {
                expected: dim,
                got: labels.len(),
            });
        }
        let mut raw: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); dim * dim];
        for (i, j, k, c) in constants {
            if i >= dim || j >= dim || k >= dim {
                return Err(AlgebraError::IndexOutOfRange { i, j, k, dim });
            }
            raw[i * dim + j].push((k, c));
        }
        let table = raw.into_iter().map(crate::linalg::sparse_canonical).collect();
        let alg = FiniteAlgebra {
            id: AlgebraId(NEXT_ID.fetch_add(1, Ordering::Relaxed)),
            labels,
            table,
            unit,
        };
        alg.check_associative()?;
        alg.check_unit()?;
        Ok(alg)
    }

    fn check_associative(&self) -> Result<(), AlgebraError> {
        let dim = self.dim();
        for i in 0..dim {
            for j in 0..dim {
                let ij = self.product_of_basis(i, j);
                for l in 0..dim {
                    let mut lhs = vec![Rational::ZERO; dim];
                    for (p, c) in ij {
                        for (k, d) in self.product_of_basis(*p, l) {
                            lhs[*k] += c * d;
                        }
                    }
                    let mut rhs = vec![Rational::ZERO; dim];
                    for (p, c) in self.product_of_basis(j, l) {
                        for (k, d) in self.product_of_basis(i, *p) {
                            rhs[*k] += c * d;
                        }
                    }
                    if lhs != rhs {
                        return Err(AlgebraError::NotAssociative { i, j, l });
                    }
                }
            }
        }
        Ok(())
    }

    fn check_unit(&self) -> Result<(), AlgebraError> {
        let dim = self.dim();
        for i in 0..dim {
            let b = self.basis_coords(i);
            if self.mul_coords(&self.unit, &b) != b || self.mul_coords(&b, &self.unit) != b {
                return Err(AlgebraError::NotUnit { i });
            }
        }
        Ok(())
    }

    pub fn id(&self) -> AlgebraId {
        self.id
    }

    pub fn dim(&self) -> usize {
        self.unit.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    /// Basis index of a label, if present.
    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Sparse coordinates of `b_i b_j`.
    pub fn product_of_basis(&self, i: usize, j: usize) -> &[(usize, Rational)] {
        &self.table[i * self.dim() + j]
    }

    /// All nonzero structure constants `(i, j, k, c)` in lexicographic order.
    pub fn structure_constants(&self) -> impl Iterator<Item = (usize, usize, usize, &Rational)> {
        let dim = self.dim();
        self.table.iter().enumerate().flat_map(move |(ij, row)| {
            row.iter().map(move |(k, c)| (ij / dim, ij % dim, *k, c))
        })
    }

    pub fn unit_coords(&self) -> &[Rational] {
        &self.unit
    }

    pub fn element(&self, coords: Vec<Rational>) -> Result<Element, AlgebraError> {
        if coords.len() != self.dim() {
            return Err(AlgebraError::CoordLength {
                dim: self.dim(),
                got: coords.len(),
            });
        }
        Ok(self.wrap(coords))
    }

    pub(crate) fn wrap(&self, coords: Vec<Rational>) -> Element {
        debug_assert_eq!(coords.len(), self.dim());
        Element {
            algebra: self.id,
            coords,
        }
    }

    pub fn zero(&self) -> Element {
        self.wrap(vec![Rational::ZERO; self.dim()])
    }

    pub fn unit(&self) -> Element {
        self.wrap(self.unit.clone())
    }

    pub fn basis(&self, i: usize) -> Element {
        self.wrap(self.basis_coords(i))
    }

    pub fn basis_elements(&self) -> Vec<Element> {
        (0..self.dim()).map(|i| self.basis(i)).collect()
    }

    fn basis_coords(&self, i: usize) -> Vec<Rational> {
        let mut v = vec![Rational::ZERO; self.dim()];
        v[i] = Rational::ONE;
        v
    }

    /// Whether an element was built from this algebra (or a clone of it).
    pub fn owns(&self, x: &Element) -> bool {
        x.algebra == self.id
    }

    fn check_owned(&self, xs: &[&Element]) -> Result<(), AlgebraError> {
        if xs.iter().all(|x| self.owns(x)) {
            Ok(())
        } else {
            Err(AlgebraError::MixedAlgebras)
        }
    }

    pub fn multiply(&self, x: &Element, y: &Element) -> Result<Element, AlgebraError> {
        self.check_owned(&[x, y])?;
        Ok(self.mul(x, y))
    }

    pub fn lie_bracket(&self, x: &Element, y: &Element) -> Result<Element, AlgebraError> {
        self.check_owned(&[x, y])?;
        Ok(self.bracket(x, y))
    }

    /// Product of elements already known to belong to this algebra.
    pub(crate) fn mul(&self, x: &Element, y: &Element) -> Element {
        debug_assert!(self.owns(x) && self.owns(y));
        self.wrap(self.mul_coords(&x.coords, &y.coords))
    }

    pub(crate) fn bracket(&self, x: &Element, y: &Element) -> Element {
        debug_assert!(self.owns(x) && self.owns(y));
        self.wrap(self.bracket_coords(&x.coords, &y.coords))
    }

    /// `x y z`, associating left.
    pub(crate) fn mul3(&self, x: &Element, y: &Element, z: &Element) -> Element {
        self.mul(&self.mul(x, y), z)
    }

    pub(crate) fn mul_coords(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let dim = self.dim();
        let mut out = vec![Rational::ZERO; dim];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let s = xi * yj;
                for (k, c) in &self.table[i * dim + j] {
                    out[*k] += &s * c;
                }
            }
        }
        out
    }

    pub(crate) fn bracket_coords(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let xy = self.mul_coords(x, y);
        let yx = self.mul_coords(y, x);
        xy.iter().zip(&yx).map(|(a, b)| a - b).collect()
    }

    /// Sparse coordinates of `[b_i, b_j]`.
    pub(crate) fn bracket_of_basis(&self, i: usize, j: usize) -> SparseRow {
        let mut v: Vec<(usize, Rational)> = self.product_of_basis(i, j).to_vec();
        v.extend(self.product_of_basis(j, i).iter().map(|(k, c)| (*k, -c)));
        crate::linalg::sparse_canonical(v)
    }

    /// Whether `x` commutes with every basis element.
    pub fn is_central(&self, x: &Element) -> bool {
        self.owns(x) && (0..self.dim()).all(|i| self.bracket(x, &self.basis(i)).is_zero())
    }

    /// Elements of `span(within)` commuting with every element of `with`.
    ///
    /// Returned vectors are the canonical kernel basis in the coefficient
    /// space of `within`, mapped back to algebra coordinates.
    pub fn centralizer_in(&self, within: &[Element], with: &[Element]) -> Vec<Element> {
        let dim = self.dim();
        let mut triplets = Vec::new();
        for (w_idx, w) in with.iter().enumerate() {
            for (s, u) in within.iter().enumerate() {
                for (k, c) in self.bracket(u, w).support() {
                    triplets.push((w_idx * dim + k, s, c.clone()));
                }
            }
        }
        let m = SparseMatrix::from_triplets(with.len() * dim, within.len(), triplets)
            .expect("indices in range by construction");
        nullspace(&m)
            .into_iter()
            .map(|cs| combine(self, within, &cs))
            .collect()
    }

    /// Canonical basis of the center `{z : [z, b_i] = 0 for all i}`.
    pub fn center_basis(&self) -> Vec<Element> {
        let basis = self.basis_elements();
        self.centralizer_in(&basis, &basis)
    }

    /// A basis pair with nonzero bracket, if any.
    pub fn noncommuting_pair(&self) -> Option<(usize, usize)> {
        let dim = self.dim();
        (0..dim)
            .flat_map(|i| (i + 1..dim).map(move |j| (i, j)))
            .find(|(i, j)| self.product_of_basis(*i, *j) != self.product_of_basis(*j, *i))
    }

    pub fn is_commutative(&self) -> bool {
        self.noncommuting_pair().is_none()
    }

    /// Renders an element as a signed sum of basis labels.
    pub fn format(&self, x: &Element) -> String {
        let mut out = String::new();
        for (i, c) in x.support() {
            let neg = c.signum() < 0;
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if !mag.is_one() {
                out.push_str(&format!("{mag}*"));
            }
            out.push_str(&self.labels[i]);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

/// `sum_s cs[s] * vs[s]`.
pub(crate) fn combine(alg: &FiniteAlgebra, vs: &[Element], cs: &[Rational]) -> Element {
    let mut out = vec![Rational::ZERO; alg.dim()];
    for (v, c) in vs.iter().zip(cs) {
        if c.is_zero() {
            continue;
        }
        for (k, x) in v.support() {
            out[k] += c * x;
        }
    }
    alg.wrap(out)
}
