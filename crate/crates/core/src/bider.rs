//! Bilinear maps on a finite algebra, the linear constraint systems for the
//! biderivation laws, and the standard families of Lie biderivations.
//!
//! A bilinear map is stored through its values on basis pairs,
//! `phi(b_i, b_j) = sum_k t[i][j][k] b_k`. As a vector of unknowns the tensor is
//! flattened in `(i, j, k)` lexicographic order.

use std::fmt;
use std::str::FromStr;

use crate::algebra::{AlgebraId, Element, FiniteAlgebra};
use crate::linalg::{nullspace, sparse_canonical, Rational, SparseMatrix, SparseRow};
use crate::triangular::TriangularAlgebra;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BiderError {
    #[error("element is not central")]
    NotCentral,
    #[error("functional `{which}` is nonzero on the commutator [{left}, {right}]")]
    NotVanishing {
        which: &'static str,
        left: String,
        right: String,
    },
    #[error("functional has length {got}, algebra dimension is {dim}")]
    FunctionalLength { dim: usize, got: usize },
    #[error("coefficient index ({i}, {j}, {k}) out of range for dimension {dim}")]
    IndexOutOfRange {
        i: usize,
        j: usize,
        k: usize,
        dim: usize,
    },
    #[error("coefficient vector has length {got}, expected {expected}")]
    VectorLength { expected: usize, got: usize },
    #[error("operands belong to different algebras")]
    MixedAlgebras,
}

/// Which defining identities a bilinear map must satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MapLaw {
    /// A Lie derivation in each argument.
    LieBider,
    /// An associative derivation in each argument.
    AssocBider,
    LieDerivFirstArg,
    LieDerivSecondArg,
}

/// One Leibniz-type identity, instantiated at basis triples `(x, y, z)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Identity {
    /// `phi([x,y], z) = [phi(x,z), y] + [x, phi(y,z)]`
    LieFirst,
    /// `phi(x, [y,z]) = [phi(x,y), z] + [y, phi(x,z)]`
    LieSecond,
    /// `phi(xy, z) = phi(x,z) y + x phi(y,z)`
    AssocFirst,
    /// `phi(x, yz) = phi(x,y) z + y phi(x,z)`
    AssocSecond,
}

impl MapLaw {
    pub const ALL: [MapLaw; 4] = [
        MapLaw::LieBider,
        MapLaw::AssocBider,
        MapLaw::LieDerivFirstArg,
        MapLaw::LieDerivSecondArg,
    ];

    /// The identities generating the constraints, in row-block order.
    pub fn identities(self) -> &'static [Identity] {
        match self {
            MapLaw::LieBider => &[Identity::LieFirst, Identity::LieSecond],
            MapLaw::AssocBider => &[Identity::AssocFirst, Identity::AssocSecond],
            MapLaw::LieDerivFirstArg => &[Identity::LieFirst],
            MapLaw::LieDerivSecondArg => &[Identity::LieSecond],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MapLaw::LieBider => "lie-bider",
            MapLaw::AssocBider => "assoc-bider",
            MapLaw::LieDerivFirstArg => "lie-deriv-1",
            MapLaw::LieDerivSecondArg => "lie-deriv-2",
        }
    }
}

impl fmt::Display for MapLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MapLaw {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MapLaw::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| format!("unknown law `{s}` (expected lie-bider, assoc-bider, lie-deriv-1 or lie-deriv-2)"))
    }
}

/// A bilinear map `T x T -> T`.
#[derive(Clone, PartialEq, Eq)]
pub struct BilinearMap {
    algebra: AlgebraId,
    dim: usize,
    /// `values[i * dim + j]` = sparse coordinates of `phi(b_i, b_j)`.
    values: Vec<SparseRow>,
}

impl fmt::Debug for BilinearMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.entries().map(|(i, j, k, c)| ((i, j, k), c)))
            .finish()
    }
}

impl BilinearMap {
    pub fn zero(alg: &FiniteAlgebra) -> Self {
        let dim = alg.dim();
        BilinearMap {
            algebra: alg.id(),
            dim,
            values: vec![Vec::new(); dim * dim],
        }
    }

    /// The map whose value on `(b_i, b_j)` is `f(i, j)`.
    pub fn from_basis_values(alg: &FiniteAlgebra, mut f: impl FnMut(usize, usize) -> Element) -> Self {
        let dim = alg.dim();
        let mut values = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let v = f(i, j);
                debug_assert!(alg.owns(&v));
                values.push(v.support().map(|(k, c)| (k, c.clone())).collect());
            }
        }
        BilinearMap {
            algebra: alg.id(),
            dim,
            values,
        }
    }

    /// Builds from `(i, j, k, coefficient)` entries; duplicates are summed.
    pub fn from_entries(
        alg: &FiniteAlgebra,
        entries: impl IntoIterator<Item = (usize, usize, usize, Rational)>,
    ) -> Result<Self, BiderError> {
        let dim = alg.dim();
        let mut raw: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); dim * dim];
        for (i, j, k, c) in entries {
            if i >= dim || j >= dim || k >= dim {
                return Err(BiderError::IndexOutOfRange { i, j, k, dim });
            }
            raw[i * dim + j].push((k, c));
        }
        Ok(BilinearMap {
            algebra: alg.id(),
            dim,
            values: raw.into_iter().map(sparse_canonical).collect(),
        })
    }

    /// Inverse of [`to_vector`](Self::to_vector).
    pub fn from_vector(alg: &FiniteAlgebra, v: &[Rational]) -> Result<Self, BiderError> {
        let dim = alg.dim();
        if v.len() != dim * dim * dim {
            return Err(BiderError::VectorLength {
                expected: dim * dim * dim,
                got: v.len(),
            });
        }
        let values = v
            .chunks(dim)
            .map(|chunk| {
                chunk
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| (k, c.clone()))
                    .collect()
            })
            .collect();
        Ok(BilinearMap {
            algebra: alg.id(),
            dim,
            values,
        })
    }

    /// Dense coefficient vector in `(i, j, k)` lexicographic order.
    pub fn to_vector(&self) -> Vec<Rational> {
        let d = self.dim;
        let mut v = vec![Rational::ZERO; d * d * d];
        for (ij, row) in self.values.iter().enumerate() {
            for (k, c) in row {
                v[ij * d + k] = c.clone();
            }
        }
        v
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn algebra_id(&self) -> AlgebraId {
        self.algebra
    }

    /// Nonzero coefficients `(i, j, k, t[i][j][k])` in lexicographic order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize, &Rational)> {
        let d = self.dim;
        self.values
            .iter()
            .enumerate()
            .flat_map(move |(ij, row)| row.iter().map(move |(k, c)| (ij / d, ij % d, *k, c)))
    }

    pub fn coeff(&self, i: usize, j: usize, k: usize) -> Rational {
        self.values[i * self.dim + j]
            .iter()
            .find(|(kk, _)| *kk == k)
            .map_or(Rational::ZERO, |(_, c)| c.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Vec::is_empty)
    }

    fn check(&self, alg: &FiniteAlgebra) {
        assert_eq!(self.algebra, alg.id(), "bilinear map applied to a foreign algebra");
    }

    /// `phi(b_i, b_j)`.
    pub fn value(&self, alg: &FiniteAlgebra, i: usize, j: usize) -> Element {
        self.check(alg);
        let mut c = vec![Rational::ZERO; self.dim];
        for (k, v) in &self.values[i * self.dim + j] {
            c[*k] = v.clone();
        }
        alg.wrap(c)
    }

    /// `phi(x, y)` by bilinear extension.
    pub fn eval(&self, alg: &FiniteAlgebra, x: &Element, y: &Element) -> Element {
        self.check(alg);
        assert!(alg.owns(x) && alg.owns(y), "arguments from a foreign algebra");
        let mut out = vec![Rational::ZERO; self.dim];
        for (i, xi) in x.support() {
            for (j, yj) in y.support() {
                let s = xi * yj;
                for (k, c) in &self.values[i * self.dim + j] {
                    out[*k] += &s * c;
                }
            }
        }
        alg.wrap(out)
    }

    fn zip_with(&self, rhs: &BilinearMap, f: impl Fn(&Rational, &Rational) -> Rational) -> BilinearMap {
        assert_eq!(self.algebra, rhs.algebra, "maps on different algebras");
        let values = self
            .values
            .iter()
            .zip(&rhs.values)
            .map(|(a, b)| {
                let mut out = Vec::with_capacity(a.len() + b.len());
                let (mut ia, mut ib) = (0, 0);
                while ia < a.len() || ib < b.len() {
                    let ka = a.get(ia).map_or(usize::MAX, |x| x.0);
                    let kb = b.get(ib).map_or(usize::MAX, |x| x.0);
                    let (k, v) = if ka < kb {
                        ia += 1;
                        (ka, f(&a[ia - 1].1, &Rational::ZERO))
                    } else if kb < ka {
                        ib += 1;
                        (kb, f(&Rational::ZERO, &b[ib - 1].1))
                    } else {
                        ia += 1;
                        ib += 1;
                        (ka, f(&a[ia - 1].1, &b[ib - 1].1))
                    };
                    if !v.is_zero() {
                        out.push((k, v));
                    }
                }
                out
            })
            .collect();
        BilinearMap {
            algebra: self.algebra,
            dim: self.dim,
            values,
        }
    }

    pub fn add(&self, rhs: &BilinearMap) -> BilinearMap {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &BilinearMap) -> BilinearMap {
        self.zip_with(rhs, |a, b| a - b)
    }

    pub fn scale(&self, s: &Rational) -> BilinearMap {
        BilinearMap {
            algebra: self.algebra,
            dim: self.dim,
            values: if s.is_zero() {
                vec![Vec::new(); self.values.len()]
            } else {
                self.values
                    .iter()
                    .map(|row| row.iter().map(|(k, c)| (*k, c * s)).collect())
                    .collect()
            },
        }
    }
}

/// Linear operators applied to an unknown value `phi(b_a, b_b)` inside an identity.
#[derive(Clone, Copy)]
enum Op {
    /// `v -> [v, b_q]`
    BracketRight(usize),
    /// `v -> [b_p, v]`
    BracketLeft(usize),
    /// `v -> v b_q`
    MulRight(usize),
    /// `v -> b_p v`
    MulLeft(usize),
}

/// Which argument of the leading `phi` receives the product or bracket.
enum Head {
    First { inner: SparseRow, z: usize },
    Second { x: usize, inner: SparseRow },
}

struct Expansion {
    head: Head,
    /// Subtracted terms: `op(phi(a, b))`.
    terms: [((usize, usize), Op); 2],
}

/// Precomputed basis products and brackets.
struct Tables<'a> {
    alg: &'a FiniteAlgebra,
    brackets: Vec<SparseRow>,
}

impl<'a> Tables<'a> {
    fn new(alg: &'a FiniteAlgebra) -> Self {
        let d = alg.dim();
        let brackets = (0..d * d).map(|ij| alg.bracket_of_basis(ij / d, ij % d)).collect();
        Tables { alg, brackets }
    }

    fn bracket(&self, i: usize, j: usize) -> &[(usize, Rational)] {
        &self.brackets[i * self.alg.dim() + j]
    }

    fn product(&self, i: usize, j: usize) -> &[(usize, Rational)] {
        self.alg.product_of_basis(i, j)
    }

    /// Sparse image of `b_m` under `op`.
    fn apply(&self, op: Op, m: usize) -> &[(usize, Rational)] {
        match op {
            Op::BracketRight(q) => self.bracket(m, q),
            Op::BracketLeft(p) => self.bracket(p, m),
            Op::MulRight(q) => self.product(m, q),
            Op::MulLeft(p) => self.product(p, m),
        }
    }

    fn expand(&self, id: Identity, x: usize, y: usize, z: usize) -> Expansion {
        match id {
            Identity::LieFirst => Expansion {
                head: Head::First {
                    inner: self.bracket(x, y).to_vec(),
                    z,
                },
                terms: [((x, z), Op::BracketRight(y)), ((y, z), Op::BracketLeft(x))],
            },
            Identity::LieSecond => Expansion {
                head: Head::Second {
                    x,
                    inner: self.bracket(y, z).to_vec(),
                },
                terms: [((x, y), Op::BracketRight(z)), ((x, z), Op::BracketLeft(y))],
            },
            Identity::AssocFirst => Expansion {
                head: Head::First {
                    inner: self.product(x, y).to_vec(),
                    z,
                },
                terms: [((x, z), Op::MulRight(y)), ((y, z), Op::MulLeft(x))],
            },
            Identity::AssocSecond => Expansion {
                head: Head::Second {
                    x,
                    inner: self.product(y, z).to_vec(),
                },
                terms: [((x, y), Op::MulRight(z)), ((x, z), Op::MulLeft(y))],
            },
        }
    }

    /// The `dim` constraint rows of one identity at one basis triple.
    fn rows(&self, id: Identity, x: usize, y: usize, z: usize) -> Vec<SparseRow> {
        let d = self.alg.dim();
        let unknown = |i: usize, j: usize, k: usize| (i * d + j) * d + k;
        let mut rows: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); d];
        let exp = self.expand(id, x, y, z);
        match &exp.head {
            Head::First { inner, z } => {
                for (s, c) in inner {
                    for (k, row) in rows.iter_mut().enumerate() {
                        row.push((unknown(*s, *z, k), c.clone()));
                    }
                }
            }
            Head::Second { x, inner } => {
                for (s, c) in inner {
                    for (k, row) in rows.iter_mut().enumerate() {
                        row.push((unknown(*x, *s, k), c.clone()));
                    }
                }
            }
        }
        for ((a, b), op) in exp.terms {
            for m in 0..d {
                for (k, c) in self.apply(op, m) {
                    rows[*k].push((unknown(a, b, m), -c));
                }
            }
        }
        rows.into_iter().map(sparse_canonical).collect()
    }
}

/// The constraint matrix over the `dim^3` unknowns whose kernel is the space of
/// maps obeying `law`. Rows are ordered by identity, then basis triple
/// `(x, y, z)` lexicographically, then output coordinate.
pub fn constraint_matrix(alg: &FiniteAlgebra, law: MapLaw) -> SparseMatrix {
    let d = alg.dim();
    let tables = Tables::new(alg);
    let mut rows = Vec::with_capacity(law.identities().len() * d * d * d * d);
    for &id in law.identities() {
        for x in 0..d {
            for y in 0..d {
                for z in 0..d {
                    rows.extend(tables.rows(id, x, y, z));
                }
            }
        }
    }
    SparseMatrix::from_rows(d * d * d, rows)
}

/// Canonical basis of all bilinear maps satisfying `law`.
pub fn solve_space(alg: &FiniteAlgebra, law: MapLaw) -> Vec<BilinearMap> {
    nullspace(&constraint_matrix(alg, law))
        .into_iter()
        .map(|v| BilinearMap::from_vector(alg, &v).expect("kernel vectors have dim^3 entries"))
        .collect()
}

/// Residual `lhs - rhs` of one identity at `(x, y, z)`, evaluated directly.
pub fn identity_residual(
    alg: &FiniteAlgebra,
    phi: &BilinearMap,
    id: Identity,
    (x, y, z): (&Element, &Element, &Element),
) -> Element {
    let ev = |u: &Element, v: &Element| phi.eval(alg, u, v);
    match id {
        Identity::LieFirst => {
            &(&ev(&alg.bracket(x, y), z) - &alg.bracket(&ev(x, z), y)) - &alg.bracket(x, &ev(y, z))
        }
        Identity::LieSecond => {
            &(&ev(x, &alg.bracket(y, z)) - &alg.bracket(&ev(x, y), z)) - &alg.bracket(y, &ev(x, z))
        }
        Identity::AssocFirst => &(&ev(&alg.mul(x, y), z) - &alg.mul(&ev(x, z), y)) - &alg.mul(x, &ev(y, z)),
        Identity::AssocSecond => &(&ev(x, &alg.mul(y, z)) - &alg.mul(&ev(x, y), z)) - &alg.mul(y, &ev(x, z)),
    }
}

/// First-slot and second-slot residuals of `law` at a triple. A law that
/// constrains only one slot reports zero for the other.
pub fn law_residual(
    alg: &FiniteAlgebra,
    phi: &BilinearMap,
    law: MapLaw,
    triple: (&Element, &Element, &Element),
) -> (Element, Element) {
    let (first, second) = match law {
        MapLaw::LieBider => (Some(Identity::LieFirst), Some(Identity::LieSecond)),
        MapLaw::AssocBider => (Some(Identity::AssocFirst), Some(Identity::AssocSecond)),
        MapLaw::LieDerivFirstArg => (Some(Identity::LieFirst), None),
        MapLaw::LieDerivSecondArg => (None, Some(Identity::LieSecond)),
    };
    let run = |id: Option<Identity>| match id {
        Some(id) => identity_residual(alg, phi, id, triple),
        None => alg.zero(),
    };
    (run(first), run(second))
}

/// First basis triple where `law` fails, with the identity and its residual.
pub fn first_law_violation(
    alg: &FiniteAlgebra,
    phi: &BilinearMap,
    law: MapLaw,
) -> Option<(Identity, (usize, usize, usize), Element)> {
    let basis = alg.basis_elements();
    let d = alg.dim();
    for &id in law.identities() {
        for x in 0..d {
            for y in 0..d {
                for z in 0..d {
                    let r = identity_residual(alg, phi, id, (&basis[x], &basis[y], &basis[z]));
                    if !r.is_zero() {
                        return Some((id, (x, y, z), r));
                    }
                }
            }
        }
    }
    None
}

/// `[phi(x,a),[b,y]] + [phi(x,b),[y,a]] - [phi(y,a),[x,b]] - [phi(y,b),[x,a]]`,
/// the four-point commutator expression in the form it is usually quoted.
pub fn quadruple_residual(
    alg: &FiniteAlgebra,
    phi: &BilinearMap,
    (x, y, a, b): (&Element, &Element, &Element, &Element),
) -> Element {
    let br = |u: &Element, v: &Element| alg.bracket(u, v);
    let ev = |u: &Element, v: &Element| phi.eval(alg, u, v);
    let t1 = br(&ev(x, a), &br(b, y));
    let t2 = br(&ev(x, b), &br(y, a));
    let t3 = br(&ev(y, a), &br(x, b));
    let t4 = br(&ev(y, b), &br(x, a));
    &(&(&t1 + &t2) - &t3) - &t4
}

/// The same four-point expression with the sign of the `[phi(y,a),[x,b]]` term
/// flipped. This is the combination obtained by expanding `phi([x,y],[a,b])`
/// through either argument and applying the Jacobi identity, and it vanishes
/// for every Lie biderivation.
pub fn quadruple_residual_jacobi(
    alg: &FiniteAlgebra,
    phi: &BilinearMap,
    (x, y, a, b): (&Element, &Element, &Element, &Element),
) -> Element {
    let br = |u: &Element, v: &Element| alg.bracket(u, v);
    let ev = |u: &Element, v: &Element| phi.eval(alg, u, v);
    let t1 = br(&ev(x, a), &br(b, y));
    let t2 = br(&ev(x, b), &br(y, a));
    let t3 = br(&ev(y, a), &br(x, b));
    let t4 = br(&ev(y, b), &br(x, a));
    &(&(&t1 + &t2) + &t3) - &t4
}

/// Inner biderivation `(x, y) -> lambda [x, y]` for central `lambda`.
pub fn make_inner(t: &TriangularAlgebra, lambda: &Element) -> Result<BilinearMap, BiderError> {
    let alg = t.algebra();
    if !alg.owns(lambda) {
        return Err(BiderError::MixedAlgebras);
    }
    if !t.is_central(lambda) {
        return Err(BiderError::NotCentral);
    }
    Ok(BilinearMap::from_basis_values(alg, |i, j| {
        alg.mul(lambda, &alg.bracket(&alg.basis(i), &alg.basis(j)))
    }))
}

/// Extremal map `(x, y) -> [x, [y, r]]`.
pub fn make_extremal(t: &TriangularAlgebra, r: &Element) -> Result<BilinearMap, BiderError> {
    let alg = t.algebra();
    if !alg.owns(r) {
        return Err(BiderError::MixedAlgebras);
    }
    Ok(BilinearMap::from_basis_values(alg, |i, j| {
        alg.bracket(&alg.basis(i), &alg.bracket(&alg.basis(j), r))
    }))
}

/// Rank-one central map `(x, y) -> g(x) h(y) z`, where `g` and `h` are linear
/// functionals given by their values on the basis and must vanish on every
/// commutator, and `z` is central.
pub fn make_central(
    t: &TriangularAlgebra,
    g: &[Rational],
    h: &[Rational],
    z: &Element,
) -> Result<BilinearMap, BiderError> {
    let alg = t.algebra();
    let d = alg.dim();
    for f in [g, h] {
        if f.len() != d {
            return Err(BiderError::FunctionalLength { dim: d, got: f.len() });
        }
    }
    if !alg.owns(z) {
        return Err(BiderError::MixedAlgebras);
    }
    for (name, f) in [("g", g), ("h", h)] {
        if let Some((i, j)) = commutator_witness(alg, f) {
            return Err(BiderError::NotVanishing {
                which: name,
                left: alg.label(i).to_string(),
                right: alg.label(j).to_string(),
            });
        }
    }
    if !t.is_central(z) {
        return Err(BiderError::NotCentral);
    }
    Ok(BilinearMap::from_basis_values(alg, |i, j| z.scale(&(&g[i] * &h[j]))))
}

/// A basis pair whose bracket the functional does not kill.
fn commutator_witness(alg: &FiniteAlgebra, f: &[Rational]) -> Option<(usize, usize)> {
    let d = alg.dim();
    (0..d)
        .flat_map(|i| (0..d).map(move |j| (i, j)))
        .find(|(i, j)| {
            let v: Rational = alg
                .bracket_of_basis(*i, *j)
                .iter()
                .map(|(k, c)| c * &f[*k])
                .sum();
            !v.is_zero()
        })
}

/// Coordinate functional `x -> x_i`.
pub fn coordinate_functional(alg: &FiniteAlgebra, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::ZERO; alg.dim()];
    v[i] = Rational::ONE;
    v
}

/// Canonical basis of the functionals vanishing on `[T, T]`.
pub fn commutator_annihilator(alg: &FiniteAlgebra) -> Vec<Vec<Rational>> {
    let d = alg.dim();
    let mut triplets = Vec::new();
    let mut row = 0;
    for i in 0..d {
        for j in 0..d {
            for (k, c) in alg.bracket_of_basis(i, j) {
                triplets.push((row, k, c));
            }
            row += 1;
        }
    }
    nullspace(&SparseMatrix::from_triplets(row, d, triplets).expect("indices in range"))
}
