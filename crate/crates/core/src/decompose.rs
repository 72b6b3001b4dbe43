//! Splitting a Lie biderivation into inner, extremal and central parts.

use crate::algebra::{combine, Element};
use crate::bider::{first_law_violation, make_extremal, make_inner, BilinearMap, Identity, MapLaw};
use crate::linalg::{solve, LinalgError, Rational, SparseMatrix};
use crate::triangular::TriangularAlgebra;

/// `phi(x, y) = lambda0 [x, y] + [x, [y, r]] + mu(x, y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub lambda0: Element,
    pub r: Element,
    pub mu: BilinearMap,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DecomposeError {
    #[error("map is not a Lie biderivation: {identity:?} fails at basis triple {triple:?}")]
    NotLieBider {
        identity: Identity,
        triple: (usize, usize, usize),
        residual: Element,
    },
    #[error("no central element accounts for the off-diagonal part")]
    NoCentralLambda,
    #[error("remainder value on basis pair ({i}, {j}) is not central")]
    ResidualNotCentral { i: usize, j: usize, value: Element },
}

/// Decomposes `phi`. The extremal parameter is `r = phi(e, e)`; `lambda0` is
/// the central element whose bracket term matches the `eTf` corner of what is
/// left, with free coordinates in the center basis set to zero.
pub fn decompose(t: &TriangularAlgebra, phi: &BilinearMap) -> Result<Decomposition, DecomposeError> {
    let alg = t.algebra();
    if let Some((identity, triple, residual)) = first_law_violation(alg, phi, MapLaw::LieBider) {
        return Err(DecomposeError::NotLieBider {
            identity,
            triple,
            residual,
        });
    }
    let r = phi.eval(alg, t.e(), t.e());
    let rest = phi.sub(&make_extremal(t, &r).expect("same algebra"));

    let d = alg.dim();
    let z = t.center_basis();
    let corner = |x: &Element| alg.mul3(t.e(), x, t.f());
    let mut triplets = Vec::new();
    let mut rhs = Vec::with_capacity(d * d * d);
    for i in 0..d {
        for j in 0..d {
            let br = alg.bracket(&alg.basis(i), &alg.basis(j));
            let row0 = (i * d + j) * d;
            for (l, zl) in z.iter().enumerate() {
                for (k, c) in corner(&alg.mul(zl, &br)).support() {
                    triplets.push((row0 + k, l, c.clone()));
                }
            }
            let target = corner(&rest.value(alg, i, j));
            rhs.extend(target.into_coords());
        }
    }
    let sys = SparseMatrix::from_triplets(d * d * d, z.len(), triplets).expect("indices in range");
    let coeffs = match solve(&sys, &rhs) {
        Ok(c) => c,
        Err(LinalgError::Inconsistent { .. }) => return Err(DecomposeError::NoCentralLambda),
        Err(e) => unreachable!("well-formed system: {e}"),
    };
    let lambda0 = combine(alg, z, &coeffs);
    let mu = rest.sub(&make_inner(t, &lambda0).expect("combination of central elements"));
    for i in 0..d {
        for j in 0..d {
            let value = mu.value(alg, i, j);
            if !t.is_central(&value) {
                return Err(DecomposeError::ResidualNotCentral { i, j, value });
            }
        }
    }
    let dec = Decomposition { lambda0, r, mu };
    debug_assert!(verify_decomposition(t, phi, &dec));
    Ok(dec)
}

/// Individual postconditions of a decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecompositionCheck {
    pub lambda0_central: bool,
    pub mu_central: bool,
    pub reconstruction_exact: bool,
}

impl DecompositionCheck {
    pub fn ok(&self) -> bool {
        self.lambda0_central && self.mu_central && self.reconstruction_exact
    }
}

pub fn check_decomposition(t: &TriangularAlgebra, phi: &BilinearMap, dec: &Decomposition) -> DecompositionCheck {
    let alg = t.algebra();
    let d = alg.dim();
    let lambda0_central = t.is_central(&dec.lambda0);
    let mu_central = (0..d).all(|i| (0..d).all(|j| t.is_central(&dec.mu.value(alg, i, j))));
    let reconstruction_exact = (0..d).all(|i| {
        (0..d).all(|j| {
            let (x, y) = (alg.basis(i), alg.basis(j));
            let inner = alg.mul(&dec.lambda0, &alg.bracket(&x, &y));
            let extremal = alg.bracket(&x, &alg.bracket(&y, &dec.r));
            let total = &(&inner + &extremal) + &dec.mu.value(alg, i, j);
            total == phi.value(alg, i, j)
        })
    });
    DecompositionCheck {
        lambda0_central,
        mu_central,
        reconstruction_exact,
    }
}

pub fn verify_decomposition(t: &TriangularAlgebra, phi: &BilinearMap, dec: &Decomposition) -> bool {
    check_decomposition(t, phi, dec).ok()
}

/// Coefficient of `[x, y]` in the inner part, as a rational when `lambda0` is
/// a multiple of the identity.
pub fn scalar_lambda(t: &TriangularAlgebra, dec: &Decomposition) -> Option<Rational> {
    let alg = t.algebra();
    let unit = alg.unit();
    let (i, c) = unit.support().next()?;
    let s = dec.lambda0.coord(i) / c;
    (dec.lambda0 == unit.scale(&s)).then_some(s)
}
