//! Structural identities satisfied by a Lie biderivation of a triangular
//! algebra, checked exhaustively on corner bases.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{combine, Element, FiniteAlgebra};
use crate::bider::{quadruple_residual, quadruple_residual_jacobi, BilinearMap};
use crate::linalg::{solve, SparseMatrix};
use crate::triangular::TriangularAlgebra;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CheckId {
    /// `phi(0, x) = phi(x, 0) = 0`.
    ZeroArgument,
    /// `phi(1, x)` and `phi(x, 1)` are central.
    UnitArgument,
    /// `e phi(e,e) f = -e phi(f,e) f = -e phi(e,f) f = e phi(f,f) f`.
    IdempotentCorners,
    /// `phi(a, m) = alpha0 a m = -phi(m, a)` and `phi(b, m) = -phi(m, b) = +-alpha0 m b`.
    MixedCornerScalar,
    /// Off-diagonal part of `phi(a, b)` and `phi(b, a)`, with a central diagonal.
    CrossCorner,
    /// `phi(m, n) = 0`.
    BimodulePairs,
    /// Shape of `phi(a1, a2)` and `phi(b1, b2)`.
    SameCorner,
}

impl CheckId {
    pub const ALL: [CheckId; 7] = [
        CheckId::ZeroArgument,
        CheckId::UnitArgument,
        CheckId::IdempotentCorners,
        CheckId::MixedCornerScalar,
        CheckId::CrossCorner,
        CheckId::BimodulePairs,
        CheckId::SameCorner,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckId::ZeroArgument => "zero-argument",
            CheckId::UnitArgument => "unit-argument",
            CheckId::IdempotentCorners => "idempotent-corners",
            CheckId::MixedCornerScalar => "mixed-corner-scalar",
            CheckId::CrossCorner => "cross-corner",
            CheckId::BimodulePairs => "bimodule-pairs",
            CheckId::SameCorner => "same-corner",
        }
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Arguments (formatted) and the nonzero residual of a failed relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub relation: &'static str,
    pub args: Vec<String>,
    pub residual: Element,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaCheck {
    pub id: CheckId,
    pub passed: bool,
    pub tuples: usize,
    pub witness: Option<Witness>,
}

/// Which sign of a sign-ambiguous relation held on every tuple.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignFinding {
    /// The relation holds with a minus sign on the scalar term.
    Minus,
    Plus,
    /// Both hold, because the scalar term vanished throughout.
    Both,
    Neither,
}

impl fmt::Display for SignFinding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SignFinding::Minus => "minus",
            SignFinding::Plus => "plus",
            SignFinding::Both => "both",
            SignFinding::Neither => "neither",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaReport {
    pub checks: Vec<LemmaCheck>,
    /// The scalar with `phi(e, m) = alpha0 m`, if one exists in `pi_A(Z(T))`.
    pub alpha0: Option<Element>,
    /// Sign in `phi(b, m) = +-alpha0 m b`.
    pub right_action_sign: Option<SignFinding>,
    /// Sign in `e phi(a1,a2) e = tau^-1(f phi(a1,a2) f) +- alpha0 [a1, a2]`.
    pub corner_a_sign: Option<SignFinding>,
    /// Sign in `f phi(b1,b2) f = tau(e phi(b1,b2) e) +- tau(alpha0) [b1, b2]`.
    pub corner_b_sign: Option<SignFinding>,
}

impl LemmaReport {
    pub fn check(&self, id: CheckId) -> &LemmaCheck {
        self.checks.iter().find(|c| c.id == id).expect("every check is run")
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Accumulates one check: counts tuples and keeps the first failure.
struct Acc {
    id: CheckId,
    tuples: usize,
    witness: Option<Witness>,
}

impl Acc {
    fn new(id: CheckId) -> Self {
        Acc {
            id,
            tuples: 0,
            witness: None,
        }
    }

    fn zero(&mut self, relation: &'static str, args: &[String], residual: Element) {
        self.tuples += 1;
        if self.witness.is_none() && !residual.is_zero() {
            self.witness = Some(Witness {
                relation,
                args: args.to_vec(),
                residual,
            });
        }
    }

    fn fail(&mut self, relation: &'static str, args: &[String], residual: Element) {
        self.tuples += 1;
        if self.witness.is_none() {
            self.witness = Some(Witness {
                relation,
                args: args.to_vec(),
                residual,
            });
        }
    }

    fn finish(self) -> LemmaCheck {
        LemmaCheck {
            id: self.id,
            passed: self.witness.is_none(),
            tuples: self.tuples,
            witness: self.witness,
        }
    }
}

/// Tracks a relation `lhs = base +- term` over many tuples.
struct Sign {
    minus: bool,
    plus: bool,
    witness: Option<(Vec<String>, Element)>,
}

impl Sign {
    fn new() -> Self {
        Sign {
            minus: true,
            plus: true,
            witness: None,
        }
    }

    /// `diff = lhs - base`; the minus form needs `diff + term = 0`.
    fn observe(&mut self, args: &[String], diff: &Element, term: &Element) {
        let m = (diff + term).is_zero();
        let p = (diff - term).is_zero();
        self.minus &= m;
        self.plus &= p;
        if !m && !p && self.witness.is_none() {
            self.witness = Some((args.to_vec(), diff.clone()));
        }
    }

    fn finding(&self) -> SignFinding {
        match (self.minus, self.plus) {
            (true, true) => SignFinding::Both,
            (true, false) => SignFinding::Minus,
            (false, true) => SignFinding::Plus,
            (false, false) => SignFinding::Neither,
        }
    }
}

/// The scalar `alpha0` in `pi_A(Z(T))` with `phi(e, m) = alpha0 m` on `eTf`.
pub fn left_scalar(t: &TriangularAlgebra, phi: &BilinearMap) -> Option<Element> {
    let alg = t.algebra();
    let d = alg.dim();
    let p = t.proj_a().basis();
    let ms = t.t12().basis();
    let mut triplets = Vec::new();
    let mut rhs = Vec::with_capacity(ms.len() * d);
    for (s, m) in ms.iter().enumerate() {
        for (l, pl) in p.iter().enumerate() {
            for (k, c) in alg.mul(pl, m).support() {
                triplets.push((s * d + k, l, c.clone()));
            }
        }
        rhs.extend(phi.eval(alg, t.e(), m).into_coords());
    }
    let sys = SparseMatrix::from_triplets(ms.len() * d, p.len(), triplets).expect("indices in range");
    solve(&sys, &rhs).ok().map(|cs| combine(alg, p, &cs))
}

/// Runs every check on `phi`. Checks are exhaustive over the corner bases, and
/// a failure carries the first offending tuple.
pub fn lemma_suite(t: &TriangularAlgebra, phi: &BilinearMap) -> LemmaReport {
    let alg = t.algebra();
    let (e, f) = (t.e(), t.f());
    let ev = |x: &Element, y: &Element| phi.eval(alg, x, y);
    let ef = |x: &Element| alg.mul3(e, x, f);
    let ee = |x: &Element| alg.mul3(e, x, e);
    let ff = |x: &Element| alg.mul3(f, x, f);
    let fmt = |xs: &[&Element]| -> Vec<String> { xs.iter().map(|x| alg.format(x)).collect() };
    let basis = alg.basis_elements();
    let (a_basis, m_basis, b_basis) = (t.t11().basis(), t.t12().basis(), t.t22().basis());
    let mut checks = Vec::new();

    let mut acc = Acc::new(CheckId::ZeroArgument);
    let zero = alg.zero();
    for x in &basis {
        let args = fmt(&[&zero, x]);
        acc.zero("phi(0,x) = 0", &args, ev(&zero, x));
        acc.zero("phi(x,0) = 0", &args, ev(x, &zero));
    }
    checks.push(acc.finish());

    let mut acc = Acc::new(CheckId::UnitArgument);
    let one = alg.unit();
    for x in &basis {
        for (relation, v) in [("phi(1,x) central", ev(&one, x)), ("phi(x,1) central", ev(x, &one))] {
            if t.is_central(&v) {
                acc.tuples += 1;
            } else {
                acc.fail(relation, &fmt(&[x]), v);
            }
        }
    }
    checks.push(acc.finish());

    let mut acc = Acc::new(CheckId::IdempotentCorners);
    let c = ef(&ev(e, e));
    let args = fmt(&[e, f]);
    acc.zero("e phi(f,e) f = -e phi(e,e) f", &args, &ef(&ev(f, e)) + &c);
    acc.zero("e phi(e,f) f = -e phi(e,e) f", &args, &ef(&ev(e, f)) + &c);
    acc.zero("e phi(f,f) f = e phi(e,e) f", &args, &ef(&ev(f, f)) - &c);
    checks.push(acc.finish());

    let mut acc = Acc::new(CheckId::MixedCornerScalar);
    let alpha0 = left_scalar(t, phi);
    let mut right = Sign::new();
    match &alpha0 {
        None => {
            let m = &m_basis[0];
            acc.fail("phi(e,m) = alpha0 m for central alpha0", &fmt(&[e, m]), ev(e, m));
        }
        Some(alpha) => {
            for m in m_basis {
                for a in a_basis {
                    let am = alg.mul3(alpha, a, m);
                    let args = fmt(&[a, m]);
                    acc.zero("phi(a,m) = alpha0 a m", &args, &ev(a, m) - &am);
                    acc.zero("phi(m,a) = -alpha0 a m", &args, &ev(m, a) + &am);
                }
                for b in b_basis {
                    let args = fmt(&[b, m]);
                    let bm = ev(b, m);
                    acc.zero("phi(b,m) = -phi(m,b)", &args, &bm + &ev(m, b));
                    right.observe(&args, &bm, &alg.mul3(alpha, m, b));
                }
            }
            if right.finding() == SignFinding::Neither {
                let (args, residual) = right.witness.clone().expect("set when neither sign holds");
                acc.fail("phi(b,m) = +-alpha0 m b", &args, residual);
            }
        }
    }
    checks.push(acc.finish());
    let right_action_sign = alpha0.as_ref().map(|_| right.finding());

    let mut acc = Acc::new(CheckId::CrossCorner);
    let (pee, pff) = (ev(e, e), ev(f, f));
    for a in a_basis {
        for b in b_basis {
            let args = fmt(&[a, b]);
            let v = ev(a, b);
            acc.zero("e phi(a,b) f = -a phi(e,e) b", &args, &ef(&v) + &alg.mul3(a, &pee, b));
            let diag = &ee(&v) + &ff(&v);
            if t.is_central(&diag) {
                acc.tuples += 1;
            } else {
                acc.fail("diagonal of phi(a,b) central", &args, diag);
            }
            let w = ev(b, a);
            let args = fmt(&[b, a]);
            acc.zero("e phi(b,a) f = -a phi(f,f) b", &args, &ef(&w) + &alg.mul3(a, &pff, b));
            let diag = &ee(&w) + &ff(&w);
            if t.is_central(&diag) {
                acc.tuples += 1;
            } else {
                acc.fail("diagonal of phi(b,a) central", &args, diag);
            }
        }
    }
    checks.push(acc.finish());

    let mut acc = Acc::new(CheckId::BimodulePairs);
    for m in m_basis {
        for n in m_basis {
            acc.zero("phi(m,n) = 0", &fmt(&[m, n]), ev(m, n));
        }
    }
    checks.push(acc.finish());

    let mut acc = Acc::new(CheckId::SameCorner);
    let mut sign_a = Sign::new();
    let mut sign_b = Sign::new();
    let cef = ef(&pee);
    for a1 in a_basis {
        for a2 in a_basis {
            let args = fmt(&[a1, a2]);
            let v = ev(a1, a2);
            acc.zero("e phi(a1,a2) f = a1 a2 phi(e,e) f", &args, &ef(&v) - &alg.mul(&alg.mul(a1, a2), &cef));
            acc.zero("e phi(a1,a2) f = a2 a1 phi(e,e) f", &args, &ef(&v) - &alg.mul(&alg.mul(a2, a1), &cef));
            let lower = ff(&v);
            match t.tau_inverse(&lower) {
                Err(_) => acc.fail("f phi(a1,a2) f in pi_B(Z(T))", &args, lower),
                Ok(pre) => {
                    acc.tuples += 1;
                    if let Some(alpha) = &alpha0 {
                        let term = alg.mul(alpha, &alg.bracket(a1, a2));
                        sign_a.observe(&args, &(&ee(&v) - &pre), &term);
                    }
                }
            }
        }
    }
    let tau_alpha = alpha0.as_ref().and_then(|a| t.tau(a).ok());
    for b1 in b_basis {
        for b2 in b_basis {
            let args = fmt(&[b1, b2]);
            let v = ev(b1, b2);
            acc.zero("e phi(b1,b2) f = e phi(e,e) b1 b2", &args, &ef(&v) - &alg.mul(&cef, &alg.mul(b1, b2)));
            acc.zero("e phi(b1,b2) f = e phi(e,e) b2 b1", &args, &ef(&v) - &alg.mul(&cef, &alg.mul(b2, b1)));
            let upper = ee(&v);
            match t.tau(&upper) {
                Err(_) => acc.fail("e phi(b1,b2) e in pi_A(Z(T))", &args, upper),
                Ok(img) => {
                    acc.tuples += 1;
                    if let Some(ta) = &tau_alpha {
                        let term = alg.mul(ta, &alg.bracket(b1, b2));
                        sign_b.observe(&args, &(&ff(&v) - &img), &term);
                    }
                }
            }
        }
    }
    let corner_a_sign = alpha0.as_ref().map(|_| sign_a.finding());
    let corner_b_sign = tau_alpha.as_ref().map(|_| sign_b.finding());
    for (sign, finding, relation) in [
        (&sign_a, corner_a_sign, "e phi(a1,a2) e = tau^-1(f phi(a1,a2) f) +- alpha0 [a1,a2]"),
        (&sign_b, corner_b_sign, "f phi(b1,b2) f = tau(e phi(b1,b2) e) +- tau(alpha0) [b1,b2]"),
    ] {
        if finding == Some(SignFinding::Neither) {
            let (args, residual) = sign.witness.clone().expect("set when neither sign holds");
            acc.fail(relation, &args, residual);
        }
    }
    checks.push(acc.finish());

    LemmaReport {
        checks,
        alpha0,
        right_action_sign,
        corner_a_sign,
        corner_b_sign,
    }
}

/// Quadruple sweeps are exhaustive up to this many basis quadruples.
pub const EXHAUSTIVE_QUADRUPLES: usize = 1296;
pub const SAMPLED_QUADRUPLES: usize = 1000;
const QUADRUPLE_SEED: u64 = 0x7175_6164_7275_706c;

/// Which four-point commutator expression to test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadrupleForm {
    /// As usually quoted; see [`quadruple_residual`].
    Stated,
    /// With the Jacobi-consistent sign; see [`quadruple_residual_jacobi`].
    Jacobi,
}

/// Basis index quadruples `(x, y, a, b)`: all of them when there are at most
/// [`EXHAUSTIVE_QUADRUPLES`], otherwise a fixed pseudo-random sample.
pub fn basis_quadruples(dim: usize) -> (Vec<[usize; 4]>, bool) {
    if dim.pow(4) <= EXHAUSTIVE_QUADRUPLES {
        let all = (0..dim.pow(4))
            .map(|n| [n / dim.pow(3), n / dim.pow(2) % dim, n / dim % dim, n % dim])
            .collect();
        return (all, true);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(QUADRUPLE_SEED);
    let sample = (0..SAMPLED_QUADRUPLES)
        .map(|_| std::array::from_fn(|_| rng.gen_range(0..dim)))
        .collect();
    (sample, false)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadrupleCheck {
    pub form: QuadrupleForm,
    pub quadruples: usize,
    pub failures: usize,
    pub witness: Option<Witness>,
}

pub fn quadruple_check(
    alg: &FiniteAlgebra,
    phi: &BilinearMap,
    form: QuadrupleForm,
    quads: &[[usize; 4]],
) -> QuadrupleCheck {
    let basis = alg.basis_elements();
    let mut failures = 0;
    let mut witness = None;
    for &[x, y, a, b] in quads {
        let args = (&basis[x], &basis[y], &basis[a], &basis[b]);
        let r = match form {
            QuadrupleForm::Stated => quadruple_residual(alg, phi, args),
            QuadrupleForm::Jacobi => quadruple_residual_jacobi(alg, phi, args),
        };
        if !r.is_zero() {
            failures += 1;
            witness.get_or_insert_with(|| Witness {
                relation: match form {
                    QuadrupleForm::Stated => "[phi(x,a),[b,y]] + [phi(x,b),[y,a]] = [phi(y,a),[x,b]] + [phi(y,b),[x,a]]",
                    QuadrupleForm::Jacobi => "[phi(x,a),[b,y]] + [phi(x,b),[y,a]] + [phi(y,a),[x,b]] = [phi(y,b),[x,a]]",
                },
                args: [x, y, a, b].iter().map(|&i| alg.label(i).to_string()).collect(),
                residual: r,
            });
        }
    }
    QuadrupleCheck {
        form,
        quadruples: quads.len(),
        failures,
        witness,
    }
}
