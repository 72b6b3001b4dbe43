//! The four structural hypotheses under which Lie biderivations decompose.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{bimodule_hom_basis, standard_form_basis, standard_form_check, Subspace, TriangularAlgebra};
use crate::algebra::{combine, Element, FiniteAlgebra};
use crate::linalg::{nullspace, span_eq, Rational, SparseMatrix};

const COND_IV_TRIALS: usize = 32;
const COND_IV_SEED: u64 = 0x7472_6962_6964_6572;

/// Outcome of the "central elements of `A` are not zero divisors" hypothesis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CondIv {
    /// Proven: `Z(A)` is one-dimensional, so every nonzero central element is an
    /// invertible scalar.
    Holds,
    /// Randomized trials found no zero divisor; not a proof.
    Inconclusive,
    /// A nonzero central `alpha` and nonzero `a` with `alpha a = 0` were found.
    Violated,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CondIvEvidence {
    ScalarCenter,
    RandomTrials { trials: usize, seed: u64 },
    ZeroDivisor { alpha: Element, a: Element },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesisDetails {
    pub center_dim: usize,
    pub proj_a_dim: usize,
    pub center_a_dim: usize,
    pub proj_b_dim: usize,
    pub center_b_dim: usize,
    /// Two elements of `eTe` that do not commute, if any.
    pub a_noncommuting: Option<(Element, Element)>,
    pub b_noncommuting: Option<(Element, Element)>,
    pub hom_dim: usize,
    pub standard_form_rank: usize,
    pub cond_iv_evidence: CondIvEvidence,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesisReport {
    /// `pi_A(Z(T)) = Z(A)` and `pi_B(Z(T)) = Z(B)`.
    pub cond_i: bool,
    /// `A` or `B` is noncommutative.
    pub cond_ii: bool,
    /// Every bimodule endomorphism of `M` has standard form.
    pub cond_iii: bool,
    pub cond_iv: CondIv,
    pub details: HypothesisDetails,
}

impl HypothesisReport {
    /// All four conditions hold, with (iv) proven.
    pub fn all_hold(&self) -> bool {
        self.cond_i && self.cond_ii && self.cond_iii && self.cond_iv == CondIv::Holds
    }
}

fn noncommuting(alg: &FiniteAlgebra, corner: &Subspace) -> Option<(Element, Element)> {
    let b = corner.basis();
    (0..b.len())
        .flat_map(|i| (i + 1..b.len()).map(move |j| (i, j)))
        .find(|(i, j)| !alg.bracket(&b[*i], &b[*j]).is_zero())
        .map(|(i, j)| (b[i].clone(), b[j].clone()))
}

/// Kernel of `a -> alpha a` on the corner `A`.
fn left_kernel(alg: &FiniteAlgebra, corner: &Subspace, alpha: &Element) -> Vec<Element> {
    let dim = alg.dim();
    let mut triplets = Vec::new();
    for (s, u) in corner.basis().iter().enumerate() {
        for (k, c) in alg.mul(alpha, u).support() {
            triplets.push((k, s, c.clone()));
        }
    }
    let m = SparseMatrix::from_triplets(dim, corner.dim(), triplets).expect("indices in range");
    nullspace(&m)
        .into_iter()
        .map(|cs| combine(alg, corner.basis(), &cs))
        .collect()
}

fn check_cond_iv(t: &TriangularAlgebra) -> (CondIv, CondIvEvidence) {
    let za = t.center_a();
    if za.len() == 1 {
        return (CondIv::Holds, CondIvEvidence::ScalarCenter);
    }
    let alg = t.algebra();
    let mut rng = ChaCha8Rng::seed_from_u64(COND_IV_SEED);
    for _ in 0..COND_IV_TRIALS {
        let alpha = loop {
            let cs: Vec<Rational> = za.iter().map(|_| Rational::integer(rng.gen_range(-5..=5))).collect();
            let alpha = combine(alg, za, &cs);
            if !alpha.is_zero() {
                break alpha;
            }
        };
        if let Some(a) = left_kernel(alg, t.t11(), &alpha).into_iter().next() {
            return (CondIv::Violated, CondIvEvidence::ZeroDivisor { alpha, a });
        }
    }
    (
        CondIv::Inconclusive,
        CondIvEvidence::RandomTrials {
            trials: COND_IV_TRIALS,
            seed: COND_IV_SEED,
        },
    )
}

pub fn hypothesis_report(t: &TriangularAlgebra) -> HypothesisReport {
    let alg = t.algebra();
    let dim = alg.dim();
    let coords = |v: &[Element]| -> Vec<Vec<Rational>> { v.iter().map(|x| x.coords().to_vec()).collect() };
    let cond_i = span_eq(dim, &coords(t.proj_a().basis()), &coords(t.center_a()))
        && span_eq(dim, &coords(t.proj_b().basis()), &coords(t.center_b()));
    let a_noncommuting = noncommuting(alg, t.t11());
    let b_noncommuting = noncommuting(alg, t.t22());
    let cond_ii = a_noncommuting.is_some() || b_noncommuting.is_some();
    let cond_iii = standard_form_check(t);
    let (cond_iv, cond_iv_evidence) = check_cond_iv(t);
    let dm = t.t12().dim();
    let std: Vec<_> = standard_form_basis(t).iter().map(|h| h.flatten()).collect();
    HypothesisReport {
        cond_i,
        cond_ii,
        cond_iii,
        cond_iv,
        details: HypothesisDetails {
            center_dim: t.center_basis().len(),
            proj_a_dim: t.proj_a().dim(),
            center_a_dim: t.center_a().len(),
            proj_b_dim: t.proj_b().dim(),
            center_b_dim: t.center_b().len(),
            a_noncommuting,
            b_noncommuting,
            hom_dim: bimodule_hom_basis(t).len(),
            standard_form_rank: crate::linalg::span_rank(dm * dm, &std),
            cond_iv_evidence,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangular::{block_upper_triangular, incidence_algebra, upper_triangular, Poset};

    #[test]
    fn t3_all_hold() {
        let r = hypothesis_report(&upper_triangular(3, 2).unwrap());
        assert!(r.cond_i && r.cond_ii && r.cond_iii);
        assert_eq!(r.cond_iv, CondIv::Holds);
        assert!(r.details.a_noncommuting.is_some());
        assert!(r.details.b_noncommuting.is_none());
        assert!(r.all_hold());
    }

    #[test]
    fn t2_both_corners_commutative() {
        let r = hypothesis_report(&upper_triangular(2, 1).unwrap());
        assert!(!r.cond_ii);
        assert!(r.cond_i && r.cond_iii);
    }

    #[test]
    fn block_noncommutative_corner() {
        let r = hypothesis_report(&block_upper_triangular(&[2, 1], 1).unwrap());
        assert!(r.cond_ii);
        assert!(r.all_hold());
    }

    #[test]
    fn commutative_right_corner_with_big_center() {
        // 1 <= 3 and 2 <= 3 over {0,1,2}: A = Q x Q has a 2-dimensional center,
        // but only the scalars extend to the center of T.
        let vee = Poset::from_relations(3, &[(0, 2), (1, 2)]).unwrap();
        let t = incidence_algebra(&vee, &[0, 1]).unwrap();
        let r = hypothesis_report(&t);
        assert!(!r.cond_i);
        assert!(!r.cond_ii);
        assert_eq!(r.details.center_a_dim, 2);
        assert_eq!(r.details.proj_a_dim, 1);
        // Q x Q has zero divisors among its central elements.
        assert_eq!(r.cond_iv, CondIv::Violated);
        match r.details.cond_iv_evidence {
            CondIvEvidence::ZeroDivisor { alpha, a } => {
                assert!(!alpha.is_zero() && !a.is_zero());
                assert!(t.algebra().mul(&alpha, &a).is_zero());
            }
            other => panic!("expected a zero-divisor witness, got {other:?}"),
        }
    }
}
