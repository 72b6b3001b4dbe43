//! Command-line front end.
//!
//! Reports are line-oriented `key: value` text, or a single JSON document with
//! `--format json`. Wall-clock timing goes on one `#` header line (on stderr
//! in JSON mode), so report bodies are byte-identical across runs.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::algebra::{Element, FiniteAlgebra};
use crate::bider::{solve_space, BilinearMap, MapLaw};
use crate::decompose::{check_decomposition, decompose, DecomposeError};
use crate::io::{AlgebraFile, IoError, MapFile, PosetFile};
use crate::lemmas::{basis_quadruples, lemma_suite, quadruple_check, CheckId, QuadrupleForm, SignFinding, Witness};
use crate::linalg::Rational;
use crate::triangular::{
    block_upper_triangular, hypothesis_report, incidence_algebra, upper_triangular, CondIv, CondIvEvidence,
    HypothesisReport, TriangularAlgebra,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_DECOMPOSE: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "tribider", version, about = "Lie biderivations of triangular algebras over Q")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Tn,
    Block,
    Incidence,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum LawArg {
    LieBider,
    AssocBider,
    #[value(name = "lie-deriv-1")]
    LieDeriv1,
    #[value(name = "lie-deriv-2")]
    LieDeriv2,
}

impl From<LawArg> for MapLaw {
    fn from(l: LawArg) -> Self {
        match l {
            LawArg::LieBider => MapLaw::LieBider,
            LawArg::AssocBider => MapLaw::AssocBider,
            LawArg::LieDeriv1 => MapLaw::LieDerivFirstArg,
            LawArg::LieDeriv2 => MapLaw::LieDerivSecondArg,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Construct a triangular algebra and write its algebra file.
    Build {
        #[arg(long, value_enum)]
        kind: Kind,
        /// Matrix size (tn).
        #[arg(long)]
        n: Option<usize>,
        /// Split point, 1 <= k < n (tn).
        #[arg(long)]
        k: Option<usize>,
        /// Block sizes, comma separated (block).
        #[arg(long, value_delimiter = ',')]
        dims: Vec<usize>,
        /// Number of blocks in the upper-left corner (block).
        #[arg(long)]
        j: Option<usize>,
        /// Poset JSON file (incidence).
        #[arg(long)]
        poset: Option<PathBuf>,
        /// Downset defining the idempotent, 1-based, comma separated (incidence).
        #[arg(long, value_delimiter = ',')]
        downset: Vec<usize>,
        /// Output path; stdout if omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Solve for a basis of all maps satisfying a law.
    Solve {
        algebra: PathBuf,
        #[arg(long, value_enum, default_value_t = LawArg::LieBider)]
        law: LawArg,
        /// Directory for one map file per basis solution.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Split a Lie biderivation into inner, extremal and central parts.
    Decompose { algebra: PathBuf, map: PathBuf },
    /// Run hypotheses, structural identities and solution-space checks.
    Verify { algebra: PathBuf },
    /// Print a basis of the center.
    Center { algebra: PathBuf },
    /// Print the hypothesis report.
    Hypotheses { algebra: PathBuf },
}

/// Output of one command: a report body and an exit code.
pub struct Outcome {
    pub report: Value,
    pub code: i32,
    /// Raw text to print instead of the report (the algebra file from `build`).
    pub raw: Option<String>,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Outcome {
            report,
            code: EXIT_OK,
            raw: None,
        }
    }
}

#[derive(Debug)]
pub struct InputError(pub String);

impl From<IoError> for InputError {
    fn from(e: IoError) -> Self {
        InputError(e.to_string())
    }
}

fn input<E: std::fmt::Display>(e: E) -> InputError {
    InputError(e.to_string())
}

/// Parses arguments, runs the command, prints the report and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let start = Instant::now();
    let name = command_name(&cli.command);
    match run(&cli.command) {
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            EXIT_INPUT
        }
        Ok(out) => {
            let header = format!("# tribider {name} elapsed_ms={}", start.elapsed().as_millis());
            if let Some(raw) = out.raw {
                print!("{raw}");
                eprintln!("{header}");
            } else {
                match cli.format {
                    Format::Text => {
                        println!("{header}");
                        print!("{}", render_text(&out.report));
                    }
                    Format::Json => {
                        eprintln!("{header}");
                        println!("{}", serde_json::to_string_pretty(&out.report).expect("json values serialize"));
                    }
                }
            }
            out.code
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Build { .. } => "build",
        Command::Solve { .. } => "solve",
        Command::Decompose { .. } => "decompose",
        Command::Verify { .. } => "verify",
        Command::Center { .. } => "center",
        Command::Hypotheses { .. } => "hypotheses",
    }
}

fn run(cmd: &Command) -> Result<Outcome, InputError> {
    match cmd {
        Command::Build {
            kind,
            n,
            k,
            dims,
            j,
            poset,
            downset,
            output,
        } => build(*kind, *n, *k, dims, *j, poset.as_deref(), downset, output.as_deref()),
        Command::Solve { algebra, law, out_dir } => solve_cmd(algebra, (*law).into(), out_dir.as_deref()),
        Command::Decompose { algebra, map } => decompose_cmd(algebra, map),
        Command::Verify { algebra } => verify_cmd(algebra),
        Command::Center { algebra } => center_cmd(algebra),
        Command::Hypotheses { algebra } => {
            let (_, t) = load_triangular(algebra)?;
            Ok(Outcome::ok(hypotheses_json(&t, &hypothesis_report(&t))))
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn build(
    kind: Kind,
    n: Option<usize>,
    k: Option<usize>,
    dims: &[usize],
    j: Option<usize>,
    poset: Option<&Path>,
    downset: &[usize],
    output: Option<&Path>,
) -> Result<Outcome, InputError> {
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| InputError(format!("--{flag} is required for this kind")));
    let t = match kind {
        Kind::Tn => upper_triangular(need(n, "n")?, need(k, "k")?).map_err(input)?,
        Kind::Block => {
            if dims.is_empty() {
                return Err(InputError("--dims is required for kind block".into()));
            }
            block_upper_triangular(dims, need(j, "j")?).map_err(input)?
        }
        Kind::Incidence => {
            let path = poset.ok_or_else(|| InputError("--poset is required for kind incidence".into()))?;
            let p = PosetFile::load(path)?.to_poset()?;
            if downset.iter().any(|&x| x == 0) {
                return Err(InputError("downset elements are numbered from 1".into()));
            }
            let split: Vec<usize> = downset.iter().map(|x| x - 1).collect();
            incidence_algebra(&p, &split).map_err(|e| InputError(format!("{e:?}: {e}")))?
        }
    };
    let file = AlgebraFile::from_triangular(&t);
    match output {
        None => Ok(Outcome {
            report: Value::Null,
            code: EXIT_OK,
            raw: Some(file.to_json()),
        }),
        Some(path) => {
            file.save(path)?;
            Ok(Outcome::ok(json!({
                "output": path.display().to_string(),
                "dim": t.dim(),
                "dim_a": t.t11().dim(),
                "dim_m": t.t12().dim(),
                "dim_b": t.t22().dim(),
                "fingerprint": file.fingerprint(),
            })))
        }
    }
}

fn load_algebra(path: &Path) -> Result<(AlgebraFile, FiniteAlgebra, Option<Element>), InputError> {
    let file = AlgebraFile::load(path)?;
    let (alg, e) = file.to_algebra()?;
    Ok((file, alg, e))
}

fn load_triangular(path: &Path) -> Result<(AlgebraFile, TriangularAlgebra), InputError> {
    let file = AlgebraFile::load(path)?;
    let t = file.to_triangular()?;
    Ok((file, t))
}

fn solve_cmd(path: &Path, law: MapLaw, out_dir: Option<&Path>) -> Result<Outcome, InputError> {
    let (file, alg, _) = load_algebra(path)?;
    let space = solve_space(&alg, law);
    let mut written = Vec::new();
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir).map_err(|e| InputError(format!("{}: {e}", dir.display())))?;
        for (idx, phi) in space.iter().enumerate() {
            let p = dir.join(format!("map_{idx:04}.json"));
            MapFile::from_map(phi, &file).save(&p)?;
            written.push(Value::String(p.display().to_string()));
        }
    }
    let unknowns = alg.dim().pow(3);
    Ok(Outcome::ok(json!({
        "law": law.name(),
        "algebra_dim": alg.dim(),
        "unknowns": unknowns,
        "dimension": space.len(),
        "rank": unknowns - space.len(),
        "fingerprint": file.fingerprint(),
        "maps": written,
    })))
}

fn rat(r: &Rational) -> Value {
    Value::String(r.to_string())
}

fn element_json(alg: &FiniteAlgebra, x: &Element) -> Value {
    json!({
        "value": alg.format(x),
        "coords": x.coords().iter().map(rat).collect::<Vec<_>>(),
    })
}

fn map_entries(alg: &FiniteAlgebra, phi: &BilinearMap) -> Value {
    let d = alg.dim();
    let mut out = Vec::new();
    for i in 0..d {
        for j in 0..d {
            let v = phi.value(alg, i, j);
            if !v.is_zero() {
                out.push(Value::String(format!(
                    "({}, {}) -> {}",
                    alg.label(i),
                    alg.label(j),
                    alg.format(&v)
                )));
            }
        }
    }
    Value::Array(out)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn decompose_cmd(alg_path: &Path, map_path: &Path) -> Result<Outcome, InputError> {
    let (file, t) = load_triangular(alg_path)?;
    let alg = t.algebra();
    let phi = MapFile::load(map_path)?.to_map(&file, alg)?;
    match decompose(&t, &phi) {
        Ok(dec) => {
            let check = check_decomposition(&t, &phi, &dec);
            Ok(Outcome {
                report: json!({
                    "status": "ok",
                    "lambda0": element_json(alg, &dec.lambda0),
                    "r": element_json(alg, &dec.r),
                    "mu_zero": dec.mu.is_zero(),
                    "mu": map_entries(alg, &dec.mu),
                    "verification": {
                        "lambda0_central": yes_no(check.lambda0_central),
                        "reconstruction_exact": yes_no(check.reconstruction_exact),
                        "mu_central": yes_no(check.mu_central),
                    },
                }),
                code: if check.ok() { EXIT_OK } else { EXIT_DECOMPOSE },
                raw: None,
            })
        }
        Err(err) => {
            let witness = match &err {
                DecomposeError::NotLieBider {
                    identity,
                    triple: (x, y, z),
                    residual,
                } => json!({
                    "kind": "NotLieBider",
                    "identity": format!("{identity:?}"),
                    "tuple": [alg.label(*x), alg.label(*y), alg.label(*z)],
                    "residual": alg.format(residual),
                }),
                DecomposeError::NoCentralLambda => json!({ "kind": "NoCentralLambda" }),
                DecomposeError::ResidualNotCentral { i, j, value } => json!({
                    "kind": "ResidualNotCentral",
                    "tuple": [alg.label(*i), alg.label(*j)],
                    "value": alg.format(value),
                }),
            };
            Ok(Outcome {
                report: json!({ "status": "failed", "error": err.to_string(), "witness": witness }),
                code: EXIT_DECOMPOSE,
                raw: None,
            })
        }
    }
}

fn center_cmd(path: &Path) -> Result<Outcome, InputError> {
    let (_, alg, _) = load_algebra(path)?;
    let basis = alg.center_basis();
    Ok(Outcome::ok(json!({
        "dimension": basis.len(),
        "basis": basis.iter().map(|z| Value::String(alg.format(z))).collect::<Vec<_>>(),
    })))
}

fn hypotheses_json(t: &TriangularAlgebra, r: &HypothesisReport) -> Value {
    let alg = t.algebra();
    let pair = |p: &Option<(Element, Element)>| match p {
        Some((x, y)) => json!([alg.format(x), alg.format(y)]),
        None => Value::Null,
    };
    let d = &r.details;
    let evidence = match &d.cond_iv_evidence {
        CondIvEvidence::ScalarCenter => json!({ "kind": "scalar-center" }),
        CondIvEvidence::RandomTrials { trials, seed } => {
            json!({ "kind": "random-trials", "trials": trials, "seed": format!("{seed:#x}") })
        }
        CondIvEvidence::ZeroDivisor { alpha, a } => {
            json!({ "kind": "zero-divisor", "alpha": alg.format(alpha), "a": alg.format(a) })
        }
    };
    json!({
        "cond_i": r.cond_i,
        "cond_ii": r.cond_ii,
        "cond_iii": r.cond_iii,
        "cond_iv": match r.cond_iv {
            CondIv::Holds => "holds",
            CondIv::Inconclusive => "inconclusive",
            CondIv::Violated => "violated",
        },
        "all_hold": r.all_hold(),
        "details": {
            "dim": t.dim(),
            "dim_a": t.t11().dim(),
            "dim_m": t.t12().dim(),
            "dim_b": t.t22().dim(),
            "center_dim": d.center_dim,
            "proj_a_dim": d.proj_a_dim,
            "center_a_dim": d.center_a_dim,
            "proj_b_dim": d.proj_b_dim,
            "center_b_dim": d.center_b_dim,
            "a_noncommuting": pair(&d.a_noncommuting),
            "b_noncommuting": pair(&d.b_noncommuting),
            "hom_dim": d.hom_dim,
            "standard_form_rank": d.standard_form_rank,
            "cond_iv_evidence": evidence,
        },
    })
}

fn witness_json(alg: &FiniteAlgebra, map_index: usize, w: &Witness) -> Value {
    json!({
        "map": map_index,
        "relation": w.relation,
        "args": w.args,
        "residual": alg.format(&w.residual),
    })
}

fn merge_sign(acc: Option<SignFinding>, next: Option<SignFinding>) -> Option<SignFinding> {
    use SignFinding::*;
    match (acc, next) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => Some(match (a, b) {
            (Neither, _) | (_, Neither) => Neither,
            (Both, x) | (x, Both) => x,
            (a, b) if a == b => a,
            _ => Neither,
        }),
    }
}

fn verify_cmd(path: &Path) -> Result<Outcome, InputError> {
    let (_, t) = load_triangular(path)?;
    let alg = t.algebra();
    let hyp = hypothesis_report(&t);
    let applicable = hyp.all_hold();
    let mut failed = false;

    let mut dims = Map::new();
    for law in MapLaw::ALL {
        dims.insert(law.name().to_string(), json!(solve_space(alg, law).len()));
    }
    let space = solve_space(alg, MapLaw::LieBider);

    let mut lemmas = Map::new();
    lemmas.insert(
        "status".into(),
        json!(if applicable { "applicable" } else { "hypotheses not met" }),
    );
    lemmas.insert("maps".into(), json!(space.len()));
    let reports: Vec<_> = space.iter().map(|phi| lemma_suite(&t, phi)).collect();
    for id in CheckId::ALL {
        let passed = reports.iter().filter(|r| r.check(id).passed).count();
        let witness = reports
            .iter()
            .enumerate()
            .find_map(|(i, r)| r.check(id).witness.as_ref().map(|w| witness_json(alg, i, w)));
        if applicable && passed < reports.len() {
            failed = true;
        }
        lemmas.insert(
            id.name().into(),
            json!({ "passed": passed, "total": reports.len(), "witness": witness }),
        );
    }
    let fold = |get: fn(&crate::lemmas::LemmaReport) -> Option<SignFinding>| {
        reports
            .iter()
            .fold(None, |acc, r| merge_sign(acc, get(r)))
            .map_or(Value::Null, |s| json!(s.to_string()))
    };
    lemmas.insert(
        "signs".into(),
        json!({
            "right_action": fold(|r| r.right_action_sign),
            "corner_a": fold(|r| r.corner_a_sign),
            "corner_b": fold(|r| r.corner_b_sign),
        }),
    );

    let (quads, exhaustive) = basis_quadruples(alg.dim());
    let mut quad = Map::new();
    quad.insert("mode".into(), json!(if exhaustive { "exhaustive" } else { "sampled" }));
    quad.insert("quadruples".into(), json!(quads.len()));
    for (key, form) in [("stated", QuadrupleForm::Stated), ("jacobi", QuadrupleForm::Jacobi)] {
        let mut failures = 0;
        let mut failing_maps = 0;
        let mut witness = Value::Null;
        for (i, phi) in space.iter().enumerate() {
            let c = quadruple_check(alg, phi, form, &quads);
            failures += c.failures;
            if c.failures > 0 {
                failing_maps += 1;
                if witness.is_null() {
                    witness = witness_json(alg, i, c.witness.as_ref().expect("failures carry a witness"));
                }
            }
        }
        failed |= failures > 0;
        quad.insert(
            key.into(),
            json!({
                "status": if failures == 0 { "pass" } else { "fail" },
                "failures": failures,
                "failing_maps": failing_maps,
                "witness": witness,
            }),
        );
    }

    Ok(Outcome {
        report: json!({
            "status": if failed { "fail" } else { "pass" },
            "hypotheses": hypotheses_json(&t, &hyp),
            "solution_dims": dims,
            "lemmas": lemmas,
            "quadruple_identity": quad,
        }),
        code: if failed { EXIT_VERIFY } else { EXIT_OK },
        raw: None,
    })
}

/// Flattens a JSON value into `dotted.key: value` lines. Arrays of scalars
/// are joined on one line.
pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    flatten(&mut out, "", v);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

fn flatten(out: &mut String, prefix: &str, v: &Value) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(out, &key(k), x);
            }
        }
        Value::Array(xs) if xs.iter().all(|x| scalar(x).is_some() && !x.is_null()) => {
            let parts: Vec<String> = xs.iter().filter_map(scalar).collect();
            let joined = if xs.iter().any(|x| x.as_str().is_some_and(|s| s.contains(','))) {
                parts.join("; ")
            } else {
                parts.join(", ")
            };
            out.push_str(&format!("{prefix}: [{joined}]\n"));
        }
        Value::Array(xs) => {
            for (i, x) in xs.iter().enumerate() {
                flatten(out, &key(&i.to_string()), x);
            }
        }
        other => out.push_str(&format!("{prefix}: {}\n", scalar(other).expect("scalar"))),
    }
}
