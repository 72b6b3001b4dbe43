//! Acceptance criteria. Runs without the libtest harness so that every
//! criterion prints one PASS/FAIL line; exits nonzero if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::Instant;

use common::{dot, to_dense, Dense};
use tribider::bider::{
    commutator_annihilator, first_law_violation, law_residual, make_central, make_extremal, make_inner,
    solve_space, BilinearMap, MapLaw,
};
use tribider::decompose::{check_decomposition, decompose};
use tribider::io::AlgebraFile;
use tribider::lemmas::{basis_quadruples, lemma_suite, quadruple_check, QuadrupleForm};
use tribider::linalg::span_contains;
use tribider::triangular::{
    bimodule_hom_basis, block_upper_triangular, hypothesis_report, matrix_trace, standard_form_check,
    upper_triangular, BimoduleHom, CondIv, TriangularAlgebra,
};
use tribider::Rational;

type Outcome = Result<Vec<String>, Vec<String>>;

fn theorem_algebras() -> Vec<(String, TriangularAlgebra)> {
    let mut out = Vec::new();
    for (n, k) in [(3, 2), (4, 2), (5, 2), (5, 3)] {
        out.push((format!("T{n} k={k}"), upper_triangular(n, k).unwrap()));
    }
    for dims in [[2, 1], [2, 2]] {
        out.push((
            format!("block {:?} j=1", dims),
            block_upper_triangular(&dims, 1).unwrap(),
        ));
    }
    out
}

fn finish(ok: bool, notes: Vec<String>) -> Outcome {
    if ok {
        Ok(notes)
    } else {
        Err(notes)
    }
}

fn criterion_1() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for (name, t) in theorem_algebras() {
        let start = Instant::now();
        let space = solve_space(t.algebra(), MapLaw::LieBider);
        let mut good = 0;
        for phi in &space {
            match decompose(&t, phi) {
                Ok(dec) if check_decomposition(&t, phi, &dec).ok() => good += 1,
                Ok(_) => notes.push(format!("{name}: decomposition failed verification")),
                Err(e) => notes.push(format!("{name}: {e}")),
            }
        }
        ok &= good == space.len();
        notes.push(format!(
            "{name}: {good}/{} basis biderivations decomposed ({:.2?})",
            space.len(),
            start.elapsed()
        ));
    }
    finish(ok, notes)
}

fn criterion_2() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for (name, t) in theorem_algebras() {
        let r = hypothesis_report(&t);
        let pass = r.cond_i && r.cond_ii && r.cond_iii && r.cond_iv == CondIv::Holds;
        ok &= pass;
        notes.push(format!(
            "{name}: i={} ii={} iii={} iv={:?}",
            r.cond_i, r.cond_ii, r.cond_iii, r.cond_iv
        ));
    }
    let r = hypothesis_report(&upper_triangular(2, 1).unwrap());
    ok &= !r.cond_ii;
    notes.push(format!("T2 k=1: cond_ii={} (expected false)", r.cond_ii));
    finish(ok, notes)
}

fn criterion_3() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for (name, t) in theorem_algebras() {
        let space = solve_space(t.algebra(), MapLaw::LieBider);
        let mut failures = Vec::new();
        for (idx, phi) in space.iter().enumerate() {
            for c in lemma_suite(&t, phi).checks {
                if !c.passed {
                    failures.push(format!("map {idx} {}: {:?}", c.id, c.witness));
                }
            }
        }
        ok &= failures.is_empty();
        notes.push(format!(
            "{name}: structural checks {} on {} maps",
            if failures.is_empty() { "pass" } else { "FAIL" },
            space.len()
        ));
        notes.extend(failures.into_iter().take(3));
    }
    for (name, t) in [
        ("T3 k=2", upper_triangular(3, 2).unwrap()),
        ("T4 k=2", upper_triangular(4, 2).unwrap()),
        ("T5 k=2", upper_triangular(5, 2).unwrap()),
        ("T5 k=3", upper_triangular(5, 3).unwrap()),
    ] {
        let alg = t.algebra();
        let (quads, exhaustive) = basis_quadruples(alg.dim());
        let space = solve_space(alg, MapLaw::LieBider);
        let mut stated = 0;
        let mut jacobi = 0;
        let mut witness = None;
        for phi in &space {
            let s = quadruple_check(alg, phi, QuadrupleForm::Stated, &quads);
            stated += s.failures;
            if witness.is_none() {
                witness = s.witness;
            }
            jacobi += quadruple_check(alg, phi, QuadrupleForm::Jacobi, &quads).failures;
        }
        ok &= stated == 0;
        let mut line = format!(
            "{name}: quadruple identity over {} {} quadruples: {stated} nonzero residuals as stated, {jacobi} with the Jacobi sign",
            quads.len(),
            if exhaustive { "exhaustive" } else { "sampled" },
        );
        if let Some(w) = witness {
            line.push_str(&format!(
                "; witness (x,y,a,b) = ({}) residual {}",
                w.args.join("; "),
                alg.format(&w.residual)
            ));
        }
        notes.push(line);
    }
    finish(ok, notes)
}

fn vectors(maps: &[BilinearMap]) -> Vec<Vec<Rational>> {
    maps.iter().map(BilinearMap::to_vector).collect()
}

fn criterion_4() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for (name, t) in [("T3 k=2", upper_triangular(3, 2).unwrap()), ("T4 k=2", upper_triangular(4, 2).unwrap())] {
        let alg = t.algebra();
        let cols = alg.dim().pow(3);
        let assoc = vectors(&solve_space(alg, MapLaw::AssocBider));
        let lie = vectors(&solve_space(alg, MapLaw::LieBider));
        let mut gens = Vec::new();
        for z in t.center_basis() {
            gens.push(make_inner(&t, z).unwrap());
        }
        for b in alg.basis_elements() {
            gens.push(make_extremal(&t, &b).unwrap());
        }
        let funcs = commutator_annihilator(alg);
        for g in &funcs {
            for h in &funcs {
                for z in t.center_basis() {
                    gens.push(make_central(&t, g, h, z).unwrap());
                }
            }
        }
        let in_standard = span_contains(cols, &vectors(&gens), &assoc);
        let in_lie = span_contains(cols, &lie, &assoc);
        ok &= in_standard && in_lie;
        notes.push(format!(
            "{name}: assoc dim {}, inside inner+extremal+central: {in_standard}, inside Lie space: {in_lie}",
            assoc.len()
        ));
    }
    finish(ok, notes)
}

fn criterion_5() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for (name, t) in [("T2 k=1", upper_triangular(2, 1).unwrap()), ("T3 k=2", upper_triangular(3, 2).unwrap())] {
        let alg = t.algebra();
        let dense = Dense::new(alg);
        let cols = alg.dim().pow(3);
        for law in MapLaw::ALL {
            let rows = dense.constraints(law);
            let oracle_dim = cols - common::dense_rank(rows.clone(), cols);
            let ours: Vec<_> = solve_space(alg, law).iter().map(|m| to_dense(&m.to_vector())).collect();
            let independent = common::dense_rank(ours.clone(), cols) == ours.len();
            let annihilated = ours.iter().all(|v| rows.iter().all(|r| dot(r, v) == common::int(0)));
            let pass = oracle_dim == ours.len() && independent && annihilated;
            ok &= pass;
            notes.push(format!(
                "{name} {law}: oracle {oracle_dim}, solver {}, same span: {}",
                ours.len(),
                independent && annihilated && oracle_dim == ours.len()
            ));
        }
    }
    finish(ok, notes)
}

fn criterion_6() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for n in 2..=5 {
        let d = upper_triangular(n, 1).unwrap().center_basis().len();
        ok &= d == 1;
        notes.push(format!("T{n}: center dim {d}"));
    }
    for dims in [&[1, 1][..], &[2, 1], &[1, 2], &[2, 2], &[1, 1, 1], &[2, 1, 1], &[1, 2, 1], &[3, 1]] {
        let d = block_upper_triangular(dims, 1).unwrap().center_basis().len();
        ok &= d == 1;
        notes.push(format!("block {dims:?}: center dim {d}"));
    }
    for (name, t) in theorem_algebras() {
        let alg = t.algebra();
        let homs = bimodule_hom_basis(&t);
        let identity = homs.len() == 1 && homs[0] == BimoduleHom::identity(t.t12().dim());
        let standard = standard_form_check(&t);
        let mut tau_ok = true;
        for a in t.proj_a().basis() {
            let ta = t.tau(a).unwrap();
            for m in t.t12().basis() {
                tau_ok &= alg.multiply(a, m).unwrap() == alg.multiply(m, &ta).unwrap();
            }
        }
        ok &= identity && standard && tau_ok;
        notes.push(format!(
            "{name}: hom space = identity span {identity}, standard form {standard}, a m = m tau(a) {tau_ok}"
        ));
    }
    finish(ok, notes)
}

fn criterion_7() -> Outcome {
    let t = upper_triangular(3, 2).unwrap();
    let alg = t.algebra();
    let tr = matrix_trace(alg).unwrap();
    let e13 = alg.basis(alg.index_of("E1,3").unwrap());
    let maps = [
        ("inner(1)", make_inner(&t, &alg.unit()).unwrap()),
        ("extremal(E1,3)", make_extremal(&t, &e13).unwrap()),
        ("central(tr, tr, 1)", make_central(&t, &tr, &tr, &alg.unit()).unwrap()),
    ];
    let space = vectors(&solve_space(alg, MapLaw::LieBider));
    let basis = alg.basis_elements();
    let mut ok = true;
    let mut notes = Vec::new();
    for (name, phi) in &maps {
        let mut zero = first_law_violation(alg, phi, MapLaw::LieBider).is_none();
        for x in &basis {
            for y in &basis {
                for z in &basis {
                    let (r1, r2) = law_residual(alg, phi, MapLaw::LieBider, (x, y, z));
                    zero &= r1.is_zero() && r2.is_zero();
                }
            }
        }
        let member = span_contains(alg.dim().pow(3), &space, &[phi.to_vector()]);
        ok &= zero && member;
        notes.push(format!("{name}: residual zero {zero}, in solved span {member}"));
    }
    finish(ok, notes)
}

fn verify_body(path: &std::path::Path) -> (String, Option<i32>) {
    let out = Command::new(env!("CARGO_BIN_EXE_tribider"))
        .arg("verify")
        .arg(path)
        .output()
        .expect("binary runs");
    let stdout = String::from_utf8(out.stdout).expect("utf-8 report");
    let body = stdout.lines().filter(|l| !l.starts_with('#')).collect::<Vec<_>>().join("\n");
    (body, out.status.code())
}

fn criterion_8() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t4.json");
    AlgebraFile::from_triangular(&upper_triangular(4, 2).unwrap())
        .save(&path)
        .unwrap();
    let (a, ca) = verify_body(&path);
    let (b, cb) = verify_body(&path);
    let same = a == b && ca == cb && !a.is_empty();
    finish(
        same,
        vec![format!(
            "T4 k=2: {} report lines, exit codes {ca:?}/{cb:?}, identical bodies: {same}",
            a.lines().count()
        )],
    )
}

fn main() {
    let criteria: [(u32, &str, fn() -> Outcome); 8] = [
        (1, "every Lie biderivation decomposes", criterion_1),
        (2, "hypothesis gate", criterion_2),
        (3, "structural identities", criterion_3),
        (4, "associative biderivations are standard", criterion_4),
        (5, "solver agrees with dense oracle", criterion_5),
        (6, "structural facts", criterion_6),
        (7, "constructed maps are solutions", criterion_7),
        (8, "verify is deterministic", criterion_8),
    ];
    let mut failed = 0;
    for (n, title, f) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(vec![format!("panicked: {msg}")])
        });
        let (status, notes) = match result {
            Ok(n) => ("PASS", n),
            Err(n) => {
                failed += 1;
                ("FAIL", n)
            }
        };
        println!("criterion {n}: {status} - {title} ({:.2?})", start.elapsed());
        for note in notes {
            println!("    {note}");
        }
    }
    println!("acceptance: {} of 8 criteria passed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
