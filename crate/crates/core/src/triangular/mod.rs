//! Triangular algebras `[A M; 0 B]` realized inside a finite algebra through an
//! idempotent `e`, with constructors for the standard matrix families.

mod bimodule;
mod hypotheses;
mod poset;

pub use bimodule::{bimodule_hom_basis, standard_form_basis, standard_form_check, BimoduleHom};
pub use hypotheses::{hypothesis_report, CondIv, CondIvEvidence, HypothesisDetails, HypothesisReport};
pub use poset::{Poset, PosetError};

use crate::algebra::{combine, AlgebraError, Element, FiniteAlgebra};
use crate::linalg::{dense_to_sparse, nullspace, solve, Echelon, Rational, SparseMatrix};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TriangularError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error("bad split: {0}")]
    BadSplit(String),
    #[error("single block: a one-block algebra is a full matrix algebra, not triangular")]
    SingleBlock,
    #[error("block sizes must be positive")]
    EmptyBlock,
    #[error("poset is not connected")]
    Disconnected,
    #[error("e is not idempotent")]
    NotIdempotent,
    #[error("f * {label} * e is nonzero, so fTe != 0")]
    LowerCornerNonzero { label: String },
    #[error("the bimodule eTf is zero")]
    ZeroBimodule,
    #[error("eTf is not faithful as a {side} module")]
    NotFaithful { side: Side },
    #[error("element is not in the projection of the center onto the {side} corner")]
    NotInProjection { side: Side },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

/// A subspace given by a reduced row echelon basis, so coordinates of a member
/// can be read off at the pivot positions.
#[derive(Clone, Debug)]
pub struct Subspace {
    basis: Vec<Element>,
    pivots: Vec<usize>,
}

impl Subspace {
    fn spanned_by(alg: &FiniteAlgebra, vs: impl IntoIterator<Item = Element>) -> Self {
        let mut ech = Echelon::new(alg.dim());
        for v in vs {
            ech.insert_sparse(&dense_to_sparse(v.coords()));
        }
        let (rows, pivots) = ech.into_rref();
        let basis = rows
            .into_iter()
            .map(|row| {
                let mut c = vec![Rational::ZERO; alg.dim()];
                for (k, v) in row {
                    c[k] = v;
                }
                alg.wrap(c)
            })
            .collect();
        Subspace { basis, pivots }
    }

    pub fn basis(&self) -> &[Element] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of `x` in this basis; meaningful only when `x` lies in the subspace.
    pub fn coords_of(&self, x: &Element) -> Vec<Rational> {
        self.pivots.iter().map(|p| x.coord(*p).clone()).collect()
    }

    pub fn contains(&self, alg: &FiniteAlgebra, x: &Element) -> bool {
        &combine(alg, &self.basis, &self.coords_of(x)) == x
    }
}

/// A triangular algebra: a finite algebra with an idempotent `e` such that
/// `fTe = 0` and `eTf` is a nonzero faithful `(eTe, fTf)`-bimodule.
#[derive(Clone, Debug)]
pub struct TriangularAlgebra {
    alg: FiniteAlgebra,
    e: Element,
    f: Element,
    t11: Subspace,
    t12: Subspace,
    t22: Subspace,
    center: Vec<Element>,
    center_a: Vec<Element>,
    center_b: Vec<Element>,
    proj_a: Subspace,
    proj_b: Subspace,
}

impl TriangularAlgebra {
    pub fn new(alg: FiniteAlgebra, e: Element) -> Result<Self, TriangularError> {
        if !alg.owns(&e) {
            return Err(AlgebraError::MixedAlgebras.into());
        }
        if alg.mul(&e, &e) != e {
            return Err(TriangularError::NotIdempotent);
        }
        let f = &alg.unit() - &e;
        let basis = alg.basis_elements();
        if let Some(i) = (0..alg.dim()).find(|i| !alg.mul3(&f, &basis[*i], &e).is_zero()) {
            return Err(TriangularError::LowerCornerNonzero {
                label: alg.label(i).to_string(),
            });
        }
        let t11 = Subspace::spanned_by(&alg, basis.iter().map(|b| alg.mul3(&e, b, &e)));
        let t12 = Subspace::spanned_by(&alg, basis.iter().map(|b| alg.mul3(&e, b, &f)));
        let t22 = Subspace::spanned_by(&alg, basis.iter().map(|b| alg.mul3(&f, b, &f)));
        if t12.dim() == 0 {
            return Err(TriangularError::ZeroBimodule);
        }
        if !annihilator(&alg, &t11, &t12, Side::Left).is_empty() {
            return Err(TriangularError::NotFaithful { side: Side::Left });
        }
        if !annihilator(&alg, &t22, &t12, Side::Right).is_empty() {
            return Err(TriangularError::NotFaithful { side: Side::Right });
        }
        let center = alg.center_basis();
        let center_a = alg.centralizer_in(t11.basis(), t11.basis());
        let center_b = alg.centralizer_in(t22.basis(), t22.basis());
        let proj_a = Subspace::spanned_by(&alg, center.iter().map(|z| alg.mul3(&e, z, &e)));
        let proj_b = Subspace::spanned_by(&alg, center.iter().map(|z| alg.mul3(&f, z, &f)));
        Ok(TriangularAlgebra {
            alg,
            e,
            f,
            t11,
            t12,
            t22,
            center,
            center_a,
            center_b,
            proj_a,
            proj_b,
        })
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.alg
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    pub fn e(&self) -> &Element {
        &self.e
    }

    pub fn f(&self) -> &Element {
        &self.f
    }

    /// `eTe`, the corner isomorphic to `A`.
    pub fn t11(&self) -> &Subspace {
        &self.t11
    }

    /// `eTf`, the bimodule `M`.
    pub fn t12(&self) -> &Subspace {
        &self.t12
    }

    /// `fTf`, the corner isomorphic to `B`.
    pub fn t22(&self) -> &Subspace {
        &self.t22
    }

    /// Canonical basis of `Z(T)`.
    pub fn center_basis(&self) -> &[Element] {
        &self.center
    }

    /// Basis of `Z(A)` computed inside `eTe`.
    pub fn center_a(&self) -> &[Element] {
        &self.center_a
    }

    pub fn center_b(&self) -> &[Element] {
        &self.center_b
    }

    /// `e Z(T) e`, i.e. `pi_A(Z(T))`.
    pub fn proj_a(&self) -> &Subspace {
        &self.proj_a
    }

    /// `f Z(T) f`, i.e. `pi_B(Z(T))`.
    pub fn proj_b(&self) -> &Subspace {
        &self.proj_b
    }

    pub fn is_central(&self, x: &Element) -> bool {
        self.alg.is_central(x)
    }

    /// Splits `x` as `exe + exf + fxf`.
    pub fn peirce(&self, x: &Element) -> (Element, Element, Element) {
        let a = self.alg.mul3(&self.e, x, &self.e);
        let m = self.alg.mul3(&self.e, x, &self.f);
        let b = self.alg.mul3(&self.f, x, &self.f);
        (a, m, b)
    }

    /// The unique `b` in `fTf` with `a m = m b` for every `m` in `eTf`.
    pub fn tau(&self, a: &Element) -> Result<Element, TriangularError> {
        self.transfer(a, Side::Left)
    }

    /// Inverse of [`tau`](Self::tau): the unique `a` in `eTe` with `a m = m b`.
    pub fn tau_inverse(&self, b: &Element) -> Result<Element, TriangularError> {
        self.transfer(b, Side::Right)
    }

    fn transfer(&self, x: &Element, from: Side) -> Result<Element, TriangularError> {
        if !self.alg.owns(x) {
            return Err(AlgebraError::MixedAlgebras.into());
        }
        let (source, target) = match from {
            Side::Left => (&self.t11, &self.t22),
            Side::Right => (&self.t22, &self.t11),
        };
        if !source.contains(&self.alg, x) {
            return Err(TriangularError::NotInProjection { side: from });
        }
        // Unknowns: coefficients over the target corner basis.
        let dim = self.dim();
        let mut triplets = Vec::new();
        let mut rhs = vec![Rational::ZERO; self.t12.dim() * dim];
        for (mi, m) in self.t12.basis().iter().enumerate() {
            let known = match from {
                Side::Left => self.alg.mul(x, m),
                Side::Right => self.alg.mul(m, x),
            };
            for (k, c) in known.support() {
                rhs[mi * dim + k] = c.clone();
            }
            for (s, v) in target.basis().iter().enumerate() {
                let prod = match from {
                    Side::Left => self.alg.mul(m, v),
                    Side::Right => self.alg.mul(v, m),
                };
                for (k, c) in prod.support() {
                    triplets.push((mi * dim + k, s, c.clone()));
                }
            }
        }
        let sys = SparseMatrix::from_triplets(rhs.len(), target.dim(), triplets)
            .expect("indices in range by construction");
        let coeffs = solve(&sys, &rhs).map_err(|_| TriangularError::NotInProjection { side: from })?;
        Ok(combine(&self.alg, target.basis(), &coeffs))
    }
}

/// Nonzero elements of `corner` annihilating every element of `module` on the given side.
fn annihilator(alg: &FiniteAlgebra, corner: &Subspace, module: &Subspace, side: Side) -> Vec<Element> {
    let dim = alg.dim();
    let mut triplets = Vec::new();
    for (mi, m) in module.basis().iter().enumerate() {
        for (s, u) in corner.basis().iter().enumerate() {
            let prod = match side {
                Side::Left => alg.mul(u, m),
                Side::Right => alg.mul(m, u),
            };
            for (k, c) in prod.support() {
                triplets.push((mi * dim + k, s, c.clone()));
            }
        }
    }
    let sys = SparseMatrix::from_triplets(module.dim() * dim, corner.dim(), triplets)
        .expect("indices in range by construction");
    nullspace(&sys)
        .into_iter()
        .map(|cs| combine(alg, corner.basis(), &cs))
        .collect()
}

/// The algebra of `n x n` matrices supported on the positions allowed by `pattern`,
/// with matrix units in row-major order. The pattern must be reflexive and transitive.
pub fn matrix_unit_algebra(
    n: usize,
    pattern: impl Fn(usize, usize) -> bool,
    label: impl Fn(usize, usize) -> String,
) -> Result<FiniteAlgebra, AlgebraError> {
    let positions: Vec<(usize, usize)> = (0..n)
        .flat_map(|p| (0..n).map(move |q| (p, q)))
        .filter(|(p, q)| pattern(*p, *q))
        .collect();
    let mut index = vec![vec![None; n]; n];
    for (i, (p, q)) in positions.iter().enumerate() {
        index[*p][*q] = Some(i);
    }
    let mut consts = Vec::new();
    for (i, (p, q)) in positions.iter().enumerate() {
        for (j, (r, s)) in positions.iter().enumerate() {
            if q == r {
                let k = index[*p][*s].expect("matrix-unit pattern must be transitive");
                consts.push((i, j, k, Rational::ONE));
            }
        }
    }
    let mut unit = vec![Rational::ZERO; positions.len()];
    for p in 0..n {
        let i = index[p][p].expect("matrix-unit pattern must be reflexive");
        unit[i] = Rational::ONE;
    }
    let labels = positions.iter().map(|(p, q)| label(*p, *q)).collect();
    FiniteAlgebra::new(labels, consts, unit)
}

fn matrix_label(p: usize, q: usize) -> String {
    format!("E{},{}", p + 1, q + 1)
}

/// `M_n(Q)`.
pub fn full_matrix_algebra(n: usize) -> Result<FiniteAlgebra, AlgebraError> {
    matrix_unit_algebra(n, |_, _| true, matrix_label)
}

/// Row and column (1-based) encoded in a matrix-unit label such as `E2,3` or `e1,4`.
pub fn matrix_unit_position(label: &str) -> Option<(usize, usize)> {
    let rest = label.strip_prefix('E').or_else(|| label.strip_prefix('e'))?;
    let (p, q) = rest.split_once(',')?;
    Some((p.parse().ok()?, q.parse().ok()?))
}

/// The trace functional on an algebra whose basis consists of matrix units,
/// or `None` if some label is not of matrix-unit form.
pub fn matrix_trace(alg: &FiniteAlgebra) -> Option<Vec<Rational>> {
    alg.labels()
        .iter()
        .map(|l| {
            matrix_unit_position(l).map(|(p, q)| if p == q { Rational::ONE } else { Rational::ZERO })
        })
        .collect()
}

/// Sum of the diagonal matrix units `E_pp` for the given 0-based rows.
fn diagonal_idempotent(alg: &FiniteAlgebra, rows: impl Iterator<Item = usize>, label: fn(usize, usize) -> String) -> Element {
    let mut c = vec![Rational::ZERO; alg.dim()];
    for p in rows {
        let i = alg.index_of(&label(p, p)).expect("diagonal unit present");
        c[i] = Rational::ONE;
    }
    alg.wrap(c)
}

/// `T_n(Q)` split as `[T_k M_{k x (n-k)}; 0 T_{n-k}]`.
pub fn upper_triangular(n: usize, k: usize) -> Result<TriangularAlgebra, TriangularError> {
    if n < 2 || k == 0 || k >= n {
        return Err(TriangularError::BadSplit(format!(
            "need n >= 2 and 1 <= k <= n - 1, got n = {n}, k = {k}"
        )));
    }
    let alg = matrix_unit_algebra(n, |p, q| p <= q, matrix_label)?;
    let e = diagonal_idempotent(&alg, 0..k, matrix_label);
    TriangularAlgebra::new(alg, e)
}

/// Block upper triangular `B^d_n(Q)` with block sizes `dims`, split after the first `j` blocks.
pub fn block_upper_triangular(dims: &[usize], j: usize) -> Result<TriangularAlgebra, TriangularError> {
    if dims.len() == 1 {
        return Err(TriangularError::SingleBlock);
    }
    if dims.is_empty() || dims.contains(&0) {
        return Err(TriangularError::EmptyBlock);
    }
    if j == 0 || j >= dims.len() {
        return Err(TriangularError::BadSplit(format!(
            "need 1 <= j < {} blocks, got j = {j}",
            dims.len()
        )));
    }
    let block_of: Vec<usize> = dims
        .iter()
        .enumerate()
        .flat_map(|(b, d)| std::iter::repeat(b).take(*d))
        .collect();
    let n = block_of.len();
    let alg = matrix_unit_algebra(n, |p, q| block_of[p] <= block_of[q], matrix_label)?;
    let split: usize = dims[..j].iter().sum();
    let e = diagonal_idempotent(&alg, 0..split, matrix_label);
    TriangularAlgebra::new(alg, e)
}

fn incidence_label(x: usize, y: usize) -> String {
    format!("e{},{}", x + 1, y + 1)
}

/// Incidence algebra of a connected poset over `Q`, with `e` the sum of the
/// idempotents of the downset `split` (0-based elements).
pub fn incidence_algebra(poset: &Poset, split: &[usize]) -> Result<TriangularAlgebra, TriangularError> {
    if !poset.is_connected() {
        return Err(TriangularError::Disconnected);
    }
    let mut s: Vec<usize> = split.to_vec();
    s.sort_unstable();
    s.dedup();
    if s.is_empty() || s.len() >= poset.size() || !poset.is_downset(&s) {
        return Err(TriangularError::BadSplit(
            "split must be a nonempty proper downset".to_string(),
        ));
    }
    let alg = matrix_unit_algebra(poset.size(), |x, y| poset.leq(x, y), incidence_label)?;
    let e = diagonal_idempotent(&alg, s.iter().copied(), incidence_label);
    TriangularAlgebra::new(alg, e).map_err(|err| match err {
        TriangularError::ZeroBimodule => {
            TriangularError::BadSplit("no relation crosses the split".to_string())
        }
        TriangularError::NotFaithful { side } => {
            TriangularError::BadSplit(format!("crossing bimodule is not faithful ({side})"))
        }
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    fn el(t: &TriangularAlgebra, terms: &[(&str, i64)]) -> Element {
        let a = t.algebra();
        let mut c = vec![Rational::ZERO; a.dim()];
        for (l, v) in terms {
            c[a.index_of(l).unwrap()] = q(*v);
        }
        a.element(c).unwrap()
    }

    #[test]
    fn upper_triangular_shapes() {
        let t = upper_triangular(2, 1).unwrap();
        assert_eq!(t.dim(), 3);
        assert_eq!(t.e(), &el(&t, &[("E1,1", 1)]));
        assert_eq!(t.t12().basis(), &[el(&t, &[("E1,2", 1)])]);

        let t = upper_triangular(3, 2).unwrap();
        assert_eq!(t.dim(), 6);
        assert_eq!((t.t11().dim(), t.t12().dim(), t.t22().dim()), (3, 2, 1));
        assert!(!t.algebra().centralizer_in(t.t11().basis(), t.t11().basis()).is_empty());

        let t = upper_triangular(4, 2).unwrap();
        assert_eq!(t.dim(), 10);
        assert_eq!(t.t12().dim(), 4);
    }

    #[test]
    fn bad_splits() {
        assert!(matches!(upper_triangular(3, 0), Err(TriangularError::BadSplit(_))));
        assert!(matches!(upper_triangular(3, 3), Err(TriangularError::BadSplit(_))));
        assert!(matches!(upper_triangular(1, 1), Err(TriangularError::BadSplit(_))));
        assert_eq!(block_upper_triangular(&[3], 1).unwrap_err(), TriangularError::SingleBlock);
        assert_eq!(block_upper_triangular(&[2, 0], 1).unwrap_err(), TriangularError::EmptyBlock);
        assert!(matches!(block_upper_triangular(&[1, 1], 2), Err(TriangularError::BadSplit(_))));
    }

    #[test]
    fn block_shapes() {
        let t = block_upper_triangular(&[2, 1], 1).unwrap();
        assert_eq!(t.dim(), 7);
        assert_eq!((t.t11().dim(), t.t12().dim(), t.t22().dim()), (4, 2, 1));
        assert_eq!(block_upper_triangular(&[2, 2], 1).unwrap().dim(), 12);
        let t2 = block_upper_triangular(&[1, 1], 1).unwrap();
        let u2 = upper_triangular(2, 1).unwrap();
        assert_eq!(t2.algebra(), u2.algebra());
        assert_eq!(t2.e().coords(), u2.e().coords());
    }

    #[test]
    fn full_matrix_center_is_scalar() {
        let m2 = full_matrix_algebra(2).unwrap();
        assert_eq!(m2.center_basis(), vec![m2.unit()]);
    }

    #[test]
    fn incidence_chain_is_upper_triangular() {
        let t = incidence_algebra(&Poset::chain(3).unwrap(), &[0]).unwrap();
        let u = upper_triangular(3, 1).unwrap();
        let consts = |a: &FiniteAlgebra| -> Vec<_> {
            a.structure_constants().map(|(i, j, k, c)| (i, j, k, c.clone())).collect()
        };
        assert_eq!(consts(t.algebra()), consts(u.algebra()));
        assert_eq!(t.algebra().unit_coords(), u.algebra().unit_coords());
        assert_eq!(t.e().coords(), u.e().coords());
    }

    #[test]
    fn incidence_errors() {
        assert_eq!(
            incidence_algebra(&Poset::antichain(2).unwrap(), &[0]).unwrap_err(),
            TriangularError::Disconnected
        );
        let chain = Poset::chain(3).unwrap();
        assert!(matches!(incidence_algebra(&chain, &[1]), Err(TriangularError::BadSplit(_))));
        assert!(matches!(incidence_algebra(&chain, &[]), Err(TriangularError::BadSplit(_))));
        assert!(matches!(
            incidence_algebra(&chain, &[0, 1, 2]),
            Err(TriangularError::BadSplit(_))
        ));
        let vee = Poset::from_relations(3, &[(0, 2), (1, 2)]).unwrap();
        assert!(incidence_algebra(&vee, &[0, 1]).is_ok());
        // {0} is a downset, but e2,2 in the right corner kills M = span{e1,3}.
        assert!(matches!(incidence_algebra(&vee, &[0]), Err(TriangularError::BadSplit(_))));
    }

    #[test]
    fn peirce_examples() {
        let t = upper_triangular(2, 1).unwrap();
        let e12 = el(&t, &[("E1,2", 1)]);
        let (a, m, b) = t.peirce(&e12);
        assert!(a.is_zero() && b.is_zero());
        assert_eq!(m, e12);
        let (a, m, b) = t.peirce(&t.algebra().unit());
        assert_eq!((&a, &b), (t.e(), t.f()));
        assert!(m.is_zero());

        let t = upper_triangular(3, 2).unwrap();
        let x = el(&t, &[("E1,1", 1), ("E2,3", 1)]);
        let (a, m, b) = t.peirce(&x);
        assert_eq!(a, el(&t, &[("E1,1", 1)]));
        assert_eq!(m, el(&t, &[("E2,3", 1)]));
        assert!(b.is_zero());
    }

    #[test]
    fn tau_examples() {
        let t = upper_triangular(3, 2).unwrap();
        let two_e = t.e().scale(&q(2));
        assert_eq!(t.tau(&two_e).unwrap(), t.f().scale(&q(2)));
        assert!(t.tau(&t.algebra().zero()).unwrap().is_zero());
        assert_eq!(
            t.tau(&el(&t, &[("E1,1", 1)])),
            Err(TriangularError::NotInProjection { side: Side::Left })
        );
        assert_eq!(
            t.tau(&el(&t, &[("E1,3", 1)])),
            Err(TriangularError::NotInProjection { side: Side::Left })
        );
        assert_eq!(t.tau_inverse(&t.f().scale(&q(3))).unwrap(), t.e().scale(&q(3)));
    }

    #[test]
    fn constructor_rejections() {
        let alg = matrix_unit_algebra(2, |p, q| p <= q, matrix_label).unwrap();
        let e22 = alg.basis(2);
        // e = E22: f = E11, f E12 e = E12 != 0.
        assert!(matches!(
            TriangularAlgebra::new(alg.clone(), e22),
            Err(TriangularError::LowerCornerNonzero { .. })
        ));
        let not_idem = alg.basis(1);
        assert_eq!(
            TriangularAlgebra::new(alg.clone(), not_idem).unwrap_err(),
            TriangularError::NotIdempotent
        );
        assert_eq!(
            TriangularAlgebra::new(alg.clone(), alg.unit()).unwrap_err(),
            TriangularError::ZeroBimodule
        );
    }
}
