//! Bimodule endomorphisms of `M = eTf` and the standard-form test.

use super::TriangularAlgebra;
use crate::algebra::{combine, Element};
use crate::linalg::{nullspace, span_eq, Rational, SparseMatrix};

/// A linear map `M -> M` in the basis of `t12()`: `images[t]` holds the
/// coordinates of `h(m_t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BimoduleHom {
    images: Vec<Vec<Rational>>,
}

impl BimoduleHom {
    pub fn identity(dim: usize) -> Self {
        BimoduleHom {
            images: (0..dim)
                .map(|t| (0..dim).map(|s| if s == t { Rational::ONE } else { Rational::ZERO }).collect())
                .collect(),
        }
    }

    pub fn images(&self) -> &[Vec<Rational>] {
        &self.images
    }

    /// Row-major flattening, index `t * dim + s`.
    pub fn flatten(&self) -> Vec<Rational> {
        self.images.iter().flatten().cloned().collect()
    }

    pub fn apply(&self, t: &TriangularAlgebra, m: &Element) -> Element {
        let coords = t.t12().coords_of(m);
        let mut out = t.algebra().zero();
        for (c, img) in coords.iter().zip(&self.images) {
            if !c.is_zero() {
                out = &out + &combine(t.algebra(), t.t12().basis(), img).scale(c);
            }
        }
        out
    }
}

/// Canonical basis of all maps `h` with `h(am) = a h(m)` and `h(mb) = h(m) b`.
pub fn bimodule_hom_basis(t: &TriangularAlgebra) -> Vec<BimoduleHom> {
    let alg = t.algebra();
    let mb = t.t12().basis();
    let dm = mb.len();
    let unknown = |src: usize, s: usize| src * dm + s;
    let mut triplets = Vec::new();
    let mut row = 0;
    // One block per acting element: left action by eTe, then right action by fTf.
    let actions = t
        .t11()
        .basis()
        .iter()
        .map(|a| (a, true))
        .chain(t.t22().basis().iter().map(|b| (b, false)));
    for (x, left) in actions {
        let act = |m: &Element| {
            let p = if left { alg.mul(x, m) } else { alg.mul(m, x) };
            t.t12().coords_of(&p)
        };
        let action: Vec<Vec<Rational>> = mb.iter().map(act).collect();
        for src in 0..dm {
            // h(x . m_src) - x . h(m_src), coordinate s
            for s in 0..dm {
                for (w, alpha) in action[src].iter().enumerate() {
                    if !alpha.is_zero() {
                        triplets.push((row, unknown(w, s), alpha.clone()));
                    }
                }
                for (v, img) in action.iter().enumerate() {
                    if !img[s].is_zero() {
                        triplets.push((row, unknown(src, v), -&img[s]));
                    }
                }
                row += 1;
            }
        }
    }
    let sys = SparseMatrix::from_triplets(row, dm * dm, triplets).expect("indices in range");
    nullspace(&sys)
        .into_iter()
        .map(|v| BimoduleHom {
            images: v.chunks(dm).map(<[Rational]>::to_vec).collect(),
        })
        .collect()
}

/// The maps `m -> a0 m` for `a0` in a basis of `Z(A)` and `m -> m b0` for `b0` in `Z(B)`.
pub fn standard_form_basis(t: &TriangularAlgebra) -> Vec<BimoduleHom> {
    let alg = t.algebra();
    let mb = t.t12().basis();
    let left = t.center_a().iter().map(|a0| BimoduleHom {
        images: mb.iter().map(|m| t.t12().coords_of(&alg.mul(a0, m))).collect(),
    });
    let right = t.center_b().iter().map(|b0| BimoduleHom {
        images: mb.iter().map(|m| t.t12().coords_of(&alg.mul(m, b0))).collect(),
    });
    left.chain(right).collect()
}

/// Whether every bimodule endomorphism of `M` is of the form `m -> a0 m + m b0`.
pub fn standard_form_check(t: &TriangularAlgebra) -> bool {
    let dm = t.t12().dim();
    let homs: Vec<_> = bimodule_hom_basis(t).iter().map(BimoduleHom::flatten).collect();
    let std: Vec<_> = standard_form_basis(t).iter().map(BimoduleHom::flatten).collect();
    span_eq(dm * dm, &homs, &std)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::span_contains;
    use crate::triangular::{block_upper_triangular, upper_triangular};

    #[test]
    fn upper_triangular_homs_are_scalars() {
        for (n, k) in [(2, 1), (3, 2), (3, 1), (4, 2)] {
            let t = upper_triangular(n, k).unwrap();
            let homs = bimodule_hom_basis(&t);
            assert_eq!(homs.len(), 1, "T{n} split {k}");
            assert_eq!(homs[0], BimoduleHom::identity(t.t12().dim()));
            assert!(standard_form_check(&t));
        }
    }

    #[test]
    fn block_standard_form() {
        let t = block_upper_triangular(&[2, 2], 1).unwrap();
        assert_eq!(bimodule_hom_basis(&t).len(), 1);
        assert!(standard_form_check(&t));
    }

    #[test]
    fn standard_forms_are_homs() {
        let t = block_upper_triangular(&[2, 1], 1).unwrap();
        let dm = t.t12().dim();
        let homs: Vec<_> = bimodule_hom_basis(&t).iter().map(BimoduleHom::flatten).collect();
        let std: Vec<_> = standard_form_basis(&t).iter().map(BimoduleHom::flatten).collect();
        assert!(span_contains(dm * dm, &homs, &std));
        assert!(span_contains(dm * dm, &homs, &[BimoduleHom::identity(dm).flatten()]));
    }

    #[test]
    fn apply_identity() {
        let t = upper_triangular(3, 2).unwrap();
        let id = BimoduleHom::identity(2);
        for m in t.t12().basis() {
            assert_eq!(&id.apply(&t, m), m);
        }
    }
}
