// SPDX-License-Identifier: Apache-2.0

//! Command-line front end. [`run`] is the whole program; the binary only
//! forwards `argv` and the exit code.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 usage or spec error.

use crate::cocycles::{self, Cocycle};
use crate::curvature::{self, CurvatureTensor};
use crate::kernels::{self, GramReport, MatrixKernel, Verdict};
use crate::representations::{self as reps, LieRep};
use crate::sampling::{polydisc_point, rng, trial_rng, u0_tuple};
use crate::spec::{self, format_c64, parse_point, SpecError};
use crate::{Mat, C64};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable capping the worker-thread count.
pub const THREADS_ENV: &str = "HOMOKER_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "homoker", version, about = "Homogeneous matrix-valued kernels on the polydisc")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Seed for every random draw.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate, Gram-test or normalize a kernel.
    #[command(subcommand)]
    Kernel(KernelCmd),
    /// Curvature tensor at a basepoint.
    Curvature(CurvatureArgs),
    /// Validate and classify a representation of bⁿ.
    ClassifyRep(ClassifyArgs),
    /// Cocycle identity, quasi-invariance and transformation-rule residuals.
    Verify(VerifyArgs),
    /// Curvature invariants and constant congruences between kernels.
    Equivalence(EquivalenceArgs),
    /// Gram certificate for the bound ‖M_{z_j}‖ ≤ c.
    Bounded(BoundedArgs),
}

#[derive(Debug, Subcommand)]
pub enum KernelCmd {
    Eval(EvalArgs),
    Gram(GramArgs),
    Normalize(EvalArgs),
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub spec: PathBuf,
    /// Comma-separated coordinates, e.g. `0.3,0.1-0.2i`.
    #[arg(long, allow_hyphen_values = true)]
    pub z: String,
    #[arg(long, allow_hyphen_values = true)]
    pub w: String,
}

#[derive(Debug, Args)]
pub struct GramArgs {
    #[arg(long)]
    pub spec: PathBuf,
    /// Explicit points separated by `;`; otherwise `--count` seeded points.
    #[arg(long, allow_hyphen_values = true)]
    pub points: Option<String>,
    #[arg(long, default_value_t = 8)]
    pub count: usize,
    #[arg(long, default_value_t = 0.7)]
    pub radius: f64,
}

#[derive(Debug, Args)]
pub struct CurvatureArgs {
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    pub w: String,
    /// Also report the homogeneity obstructions at the origin.
    #[arg(long)]
    pub check_aut: bool,
    #[arg(long, default_value_t = curvature::DEFAULT_STEP)]
    pub step: f64,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub spec: PathBuf,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub kernel: PathBuf,
    #[arg(long)]
    pub cocycle: Option<PathBuf>,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Tolerance for the cocycle identity and quasi-invariance.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Tolerance for the curvature transformation rule.
    #[arg(long, default_value_t = 1e-5)]
    pub curvature_tol: f64,
    /// Run the boundedness Gram test instead.
    #[arg(long)]
    pub bounded: bool,
    /// 1-based coordinate for `--bounded`.
    #[arg(long, default_value_t = 1)]
    pub j: usize,
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
}

#[derive(Debug, Args)]
pub struct EquivalenceArgs {
    #[arg(long)]
    pub left: PathBuf,
    #[arg(long)]
    pub right: Option<PathBuf>,
    /// `swap`, or a 0-based permutation such as `1,0,2`.
    #[arg(long)]
    pub permute: Option<String>,
}

#[derive(Debug, Args)]
pub struct BoundedArgs {
    #[arg(long)]
    pub spec: PathBuf,
    /// 1-based coordinate.
    #[arg(long)]
    pub j: usize,
    #[arg(long)]
    pub c: f64,
    #[arg(long, default_value_t = 8)]
    pub count: usize,
}

/// One command's result: machine-readable payload, text rendering, exit code.
pub struct Report {
    pub json: Value,
    pub text: String,
    pub code: i32,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Spec(SpecError),
}

impl From<SpecError> for CliError {
    fn from(e: SpecError) -> Self {
        CliError::Spec(e)
    }
}

macro_rules! from_lib_error {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Usage(e.to_string())
            }
        }
    )*};
}
from_lib_error!(
    crate::kernels::KernelError,
    crate::cocycles::CocycleError,
    crate::curvature::CurvatureError,
    crate::representations::RepError,
    crate::mobius::MobiusError
);

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Spec(e) => write!(f, "{e}"),
        }
    }
}

/// Configure the global pool from `HOMOKER_THREADS`, once per process.
pub fn init_threads() {
    static ONCE: std::sync::Once = std::sync::Once::new();
    ONCE.call_once(|| {
        if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()).filter(|&n| n > 0) {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    });
}

/// Parse `args` (including the program name), run, write the report.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    init_threads();
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(report) => {
            let body = match cli.format {
                Format::Text => report.text,
                Format::Json => serde_json::to_string_pretty(&report.json).expect("reports serialize") + "\n",
                Format::Csv => to_csv(&report.json),
            };
            let _ = out.write_all(body.as_bytes());
            report.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Kernel(KernelCmd::Eval(a)) => kernel_eval(a, false),
        Command::Kernel(KernelCmd::Normalize(a)) => kernel_eval(a, true),
        Command::Kernel(KernelCmd::Gram(a)) => kernel_gram(a, cli.seed),
        Command::Curvature(a) => cmd_curvature(a),
        Command::ClassifyRep(a) => cmd_classify(a),
        Command::Verify(a) => cmd_verify(a, cli.seed),
        Command::Equivalence(a) => cmd_equivalence(a),
        Command::Bounded(a) => cmd_bounded(a, cli.seed),
    }
}

fn point(s: &str, n: usize, name: &str) -> Result<Vec<C64>, CliError> {
    let p = parse_point(s)?;
    // A single value is broadcast to every coordinate.
    let p = if p.len() == 1 && n > 1 { vec![p[0]; n] } else { p };
    if p.len() != n {
        return Err(CliError::Usage(format!("--{name} has {} coordinates, the kernel needs {n}", p.len())));
    }
    if !crate::mobius::in_polydisc(&p) {
        return Err(CliError::Usage(format!("--{name} is not inside the polydisc")));
    }
    Ok(p)
}

fn cx(z: C64) -> Value {
    json!([z.re, z.im])
}

fn mat_json(m: &Mat) -> Value {
    Value::Array((0..m.nrows()).map(|i| Value::Array(m.row(i).iter().map(|&z| cx(z)).collect())).collect())
}

/// Parts below `1e-12` of the largest entry print as zero.
fn snap(z: C64, scale: f64) -> C64 {
    let cut = |x: f64| if x.abs() < 1e-12 * scale { 0.0 } else { x };
    C64::new(cut(z.re), cut(z.im))
}

fn mat_text(m: &Mat, indent: &str) -> String {
    let scale = m.iter().fold(0.0f64, |a, z| a.max(z.norm()));
    let cells: Vec<Vec<String>> = (0..m.nrows()).map(|i| m.row(i).iter().map(|&z| format_c64(snap(z, scale))).collect()).collect();
    let width = cells.iter().flatten().map(|s| s.len()).max().unwrap_or(0);
    cells.iter().map(|row| format!("{indent}[ {} ]", row.iter().map(|s| format!("{s:>width$}")).collect::<Vec<_>>().join("  "))).collect::<Vec<_>>().join("\n")
}

fn list_text(v: &[C64]) -> String {
    format!("[{}]", v.iter().map(|&z| format_c64(z)).collect::<Vec<_>>().join(", "))
}

fn kernel_eval(a: &EvalArgs, normalized: bool) -> Result<Report, CliError> {
    let mut k = spec::load_kernel(&a.spec)?;
    if normalized {
        k = kernels::normalize(&k)?;
    }
    let z = point(&a.z, k.dim(), "z")?;
    let w = point(&a.w, k.dim(), "w")?;
    let m = k.evaluate(&z, &w)?;
    let label = if normalized { "normalized K(z,w)" } else { "K(z,w)" };
    let text = format!("{} kernel, n = {}, rank = {}\n{label} =\n{}\n", k.family_name(), k.dim(), k.rank(), mat_text(&m, "  "));
    let json = json!({
        "command": if normalized { "kernel normalize" } else { "kernel eval" },
        "family": k.family_name(),
        "n": k.dim(),
        "rank": k.rank(),
        "z": z.iter().map(|&c| cx(c)).collect::<Vec<_>>(),
        "w": w.iter().map(|&c| cx(c)).collect::<Vec<_>>(),
        "value": mat_json(&m),
    });
    Ok(Report { json, text, code: EXIT_OK })
}

fn gram_text(title: &str, g: &GramReport) -> String {
    format!(
        "{title}\n  points: {}\n  min eigenvalue: {:.12e}\n  max eigenvalue: {:.12e}\n  verdict: {}\n",
        g.points.len(),
        g.min_eigenvalue,
        g.max_eigenvalue,
        g.verdict.as_str()
    )
}

fn seeded_points(n: usize, count: usize, radius: f64, seed: u64) -> Vec<Vec<C64>> {
    let mut g = rng(seed);
    (0..count).map(|_| polydisc_point(&mut g, n, radius)).collect()
}

fn kernel_gram(a: &GramArgs, seed: u64) -> Result<Report, CliError> {
    let k = spec::load_kernel(&a.spec)?;
    let points = match &a.points {
        Some(s) => s.split(';').map(|p| point(p, k.dim(), "points")).collect::<Result<Vec<_>, _>>()?,
        None => seeded_points(k.dim(), a.count, a.radius, seed),
    };
    let g = kernels::gram_check(&k, &points)?;
    let text = gram_text(&format!("Gram test for {} (rank {})", k.family_name(), k.rank()), &g);
    let json = json!({ "command": "kernel gram", "family": k.family_name(), "report": g });
    Ok(Report { json, text, code: EXIT_OK })
}

fn tensor_json(t: &CurvatureTensor) -> Value {
    serde_json::to_value(t).expect("tensors serialize")
}

fn cmd_curvature(a: &CurvatureArgs) -> Result<Report, CliError> {
    let k = spec::load_kernel(&a.spec)?;
    let w = point(&a.w, k.dim(), "w")?;
    let t = curvature::curvature_with_step(&k, &w, a.step)?;
    let mut text = format!("curvature of {} (n = {}, rank = {}) at w = {}\n", k.family_name(), k.dim(), k.rank(), list_text(&w));
    for i in 0..t.n {
        for j in 0..t.n {
            let _ = writeln!(text, "K^{{{}{}}}(w) =\n{}", i + 1, j + 1, mat_text(t.block(i, j), "  "));
        }
    }
    for i in 0..t.n {
        let _ = writeln!(text, "spectrum of K^{{{0}{0}}}(w): {1}", i + 1, list_text(&t.diagonal_spectrum(i)));
    }
    for warning in &t.warnings {
        let _ = writeln!(text, "warning: {warning}");
    }
    let mut json = json!({
        "command": "curvature",
        "family": k.family_name(),
        "tensor": tensor_json(&t),
        "spectra": (0..t.n).map(|i| t.diagonal_spectrum(i).iter().map(|&c| cx(c)).collect::<Vec<_>>()).collect::<Vec<_>>(),
    });
    if a.check_aut {
        let rep = curvature::aut_obstruction_report(&k)?;
        if !rep.diag_similar {
            text.push_str("Aut obstruction: diagonal blocks not similar\n");
        }
        if !rep.offdiag_nilpotent {
            text.push_str("Aut obstruction: off-diagonal blocks not nilpotent\n");
        }
        if rep.diag_similar && rep.offdiag_nilpotent {
            text.push_str("no Aut obstruction at the origin\n");
        }
        json["obstructions"] = serde_json::to_value(&rep).expect("reports serialize");
    }
    Ok(Report { json, text, code: EXIT_OK })
}

fn cmd_classify(a: &ClassifyArgs) -> Result<Report, CliError> {
    let rho = spec::load_rep(&a.spec)?;
    let violations = rho.validate();
    if !violations.is_empty() {
        let list: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
        let text = format!("invalid representation:\n{}\n", list.iter().map(|s| format!("  {s}")).collect::<Vec<_>>().join("\n"));
        let json = json!({ "command": "classify-rep", "valid": false, "violations": violations });
        return Ok(Report { json, text, code: EXIT_FAILED });
    }
    let mf = rho.is_multiplicity_free()?;
    let indecomposable = reps::is_indecomposable(&rho)?;
    let mf_pair = if rho.n() >= 2 { rho.restrict(2)?.is_multiplicity_free()? } else { false };
    let mut json = json!({
        "command": "classify-rep",
        "valid": true,
        "n": rho.n(),
        "r": rho.r(),
        "multiplicity_free": mf,
        "indecomposable": indecomposable,
        "multiplicity_free_on_b2": mf_pair,
    });
    let mut parts = Vec::new();
    if rho.r() <= 3 {
        let tag = reps::classify(&rho)?;
        parts.push(tag.name().to_string());
        json["classification"] = serde_json::to_value(&tag).expect("tags serialize");
    }
    parts.push(if indecomposable { "indecomposable" } else { "decomposable" }.to_string());
    if mf_pair {
        parts.push("multiplicity-free on b²".into());
    } else if mf {
        parts.push("multiplicity-free".into());
    }
    let mut text = parts.join(", ") + "\n";
    if rho.n() == 2 && mf {
        match reps::joint_lattice(&rho) {
            Ok(l) => {
                let p = reps::check_properties(&l);
                let brute = reps::brute_force_indecomposable(&rho)?;
                let _ = writeln!(
                    text,
                    "P1 {} P2 {} P3 {} P4 {}; brute force {}; {}",
                    p.p1,
                    p.p2,
                    p.p3,
                    p.p4,
                    if brute { "indecomposable" } else { "decomposable" },
                    if p.all() == brute { "agree" } else { "DISAGREE" }
                );
                json["lattice"] = serde_json::to_value(&l).expect("lattices serialize");
                json["properties"] = serde_json::to_value(p).expect("properties serialize");
                json["brute_force_indecomposable"] = json!(brute);
                json["criterion_agrees"] = json!(p.all() == brute);
            }
            Err(e) => {
                let _ = writeln!(text, "lattice: {e}");
                json["lattice_error"] = json!(e.to_string());
            }
        }
    }
    Ok(Report { json, text, code: EXIT_OK })
}

fn cmd_verify(a: &VerifyArgs, seed: u64) -> Result<Report, CliError> {
    let k = spec::load_kernel(&a.kernel)?;
    if a.bounded {
        return bounded_report(&k, a.j, a.c, 8, seed, "verify --bounded", true);
    }
    let path = a.cocycle.as_ref().ok_or_else(|| CliError::Usage("verify needs --cocycle (or --bounded)".into()))?;
    let j = spec::load_cocycle(path)?;
    if j.dim() != k.dim() || j.rank() != k.rank() {
        return Err(CliError::Usage(format!("kernel has (n, rank) = ({}, {}), cocycle ({}, {})", k.dim(), k.rank(), j.dim(), j.rank())));
    }
    let identity = cocycles::verify_cocycle_identity(&j, a.trials, seed)?;
    let qi = cocycles::verify_quasi_invariance(&k, &j, a.trials, seed)?;
    let rule_trials = a.trials.min(10);
    let mut rule: f64 = 0.0;
    for t in 0..rule_trials {
        let mut g = trial_rng(seed ^ 0x7261, t as u64);
        let h = u0_tuple(&mut g, k.dim());
        let w = polydisc_point(&mut g, k.dim(), 0.5);
        rule = rule.max(curvature::verify_transformation_rule(&k, &j, &h, &w)?);
    }
    let rows = [
        ("cocycle identity", identity, a.tol, a.trials),
        ("quasi-invariance", qi, a.tol, a.trials),
        ("transformation rule", rule, a.curvature_tol, rule_trials),
    ];
    let ok = rows.iter().all(|r| r.1 < r.2);
    let mut text = format!("{:<22} {:>8} {:>14} {:>10}  status\n", "check", "trials", "max residual", "tolerance");
    for (name, res, tol, n) in rows {
        let _ = writeln!(text, "{name:<22} {n:>8} {res:>14.3e} {tol:>10.1e}  {}", if res < tol { "ok" } else { "FAIL" });
    }
    let json = json!({
        "command": "verify",
        "kernel": k.family_name(),
        "cocycle": j.source_name(),
        "seed": seed,
        "checks": rows.iter().map(|(name, res, tol, n)| json!({
            "check": name, "trials": n, "max_residual": res, "tolerance": tol, "passed": res < tol,
        })).collect::<Vec<_>>(),
        "passed": ok,
    });
    Ok(Report { json, text, code: if ok { EXIT_OK } else { EXIT_FAILED } })
}

fn bounded_report(k: &MatrixKernel, j: usize, c: f64, count: usize, seed: u64, command: &str, strict: bool) -> Result<Report, CliError> {
    if j == 0 || j > k.dim() {
        return Err(CliError::Usage(format!("--j must be in 1..={}", k.dim())));
    }
    if c.is_nan() || c <= 0.0 {
        return Err(CliError::Usage("--c must be positive".into()));
    }
    let mut points = vec![vec![C64::new(0.0, 0.0); k.dim()]];
    points.extend(seeded_points(k.dim(), count.max(1), 0.9, seed));
    let g = kernels::bounded_multiplier_test(k, j - 1, c, &points)?;
    let radii: Vec<f64> = (1..=19).map(|i| i as f64 * 0.05).collect();
    let witness = kernels::bounded_witness_search(k, j - 1, c, &radii)?;
    let fails = g.verdict == Verdict::Indefinite || witness.is_some();
    let mut text = gram_text(&format!("(c² − z_{j} w̄_{j})·K for c = {c}"), &g);
    match &witness {
        Some(w) => {
            let _ = writeln!(
                text,
                "witness: two-point Gram at {} is indefinite (min eigenvalue {:.6e}); ‖M_z{j}‖ > {c}",
                list_text(&w.points[1]),
                w.min_eigenvalue
            );
        }
        None => text.push_str("no two-point witness on the radius grid\n"),
    }
    let json = json!({ "command": command, "j": j, "c": c, "report": g, "witness": witness, "bound_fails": fails });
    Ok(Report { json, text, code: if strict && fails { EXIT_FAILED } else { EXIT_OK } })
}

fn cmd_bounded(a: &BoundedArgs, seed: u64) -> Result<Report, CliError> {
    let k = spec::load_kernel(&a.spec)?;
    bounded_report(&k, a.j, a.c, a.count, seed, "bounded", false)
}

fn parse_sigma(s: &str, n: usize) -> Result<Vec<usize>, CliError> {
    if s == "swap" {
        if n < 2 {
            return Err(CliError::Usage("swap needs n ≥ 2".into()));
        }
        let mut v: Vec<usize> = (0..n).collect();
        v.swap(0, 1);
        return Ok(v);
    }
    s.split(',').map(|t| t.trim().parse::<usize>().map_err(|_| CliError::Usage(format!("bad permutation \"{s}\"")))).collect()
}

fn cmd_equivalence(a: &EquivalenceArgs) -> Result<Report, CliError> {
    let left = spec::load_kernel(&a.left)?;
    if let Some(p) = &a.permute {
        let sigma = parse_sigma(p, left.dim())?;
        let found = kernels::permutation_twist_equivalent(&left, &sigma)?;
        let text = match &found {
            Some(c) => format!("K(σz, σw) = A K(z,w) A* with residual {:.3e}\nA =\n{}\n", c.residual, mat_text(&c.a, "  ")),
            None => "absent: no constant A with K(σz, σw) = A K(z,w) A*\n".to_string(),
        };
        let json = json!({ "command": "equivalence", "sigma": sigma, "twist": found });
        return Ok(Report { json, text, code: EXIT_OK });
    }
    let right_path = a.right.as_ref().ok_or_else(|| CliError::Usage("equivalence needs --right or --permute".into()))?;
    let right = spec::load_kernel(right_path)?;
    let d = curvature::decide_equivalence(&left, &right)?;
    let text = if let Some(w) = &d.witness {
        format!("inequivalent: {w}\n")
    } else {
        match &d.congruence {
            Some(c) if (&c.a - Mat::identity(c.a.nrows(), c.a.ncols())).norm() < 1e-8 => "not distinguished; congruence A = I found\n".to_string(),
            Some(c) => format!("not distinguished; congruence found, A =\n{}\n", mat_text(&c.a, "  ")),
            None => "not distinguished by curvature at 0; no constant congruence found\n".to_string(),
        }
    };
    let json = json!({ "command": "equivalence", "decision": d });
    Ok(Report { json, text, code: EXIT_OK })
}

/// `key,value` lines, one per JSON leaf, keys joined with `.`.
pub fn to_csv(v: &Value) -> String {
    fn walk(v: &Value, key: &str, out: &mut String) {
        match v {
            Value::Object(m) => {
                for (k, x) in m {
                    walk(x, &if key.is_empty() { k.clone() } else { format!("{key}.{k}") }, out);
                }
            }
            Value::Array(a) => {
                for (i, x) in a.iter().enumerate() {
                    walk(x, &format!("{key}.{i}"), out);
                }
            }
            Value::String(s) => {
                let _ = writeln!(out, "{key},\"{}\"", s.replace('"', "\"\""));
            }
            other => {
                let _ = writeln!(out, "{key},{other}");
            }
        }
    }
    let mut out = String::from("key,value\n");
    walk(v, "", &mut out);
    out
}

/// Convenience for tests and examples: run and capture stdout, stderr.
pub fn run_capture(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("homoker").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8_lossy(&out).into_owned(), String::from_utf8_lossy(&err).into_owned())
}

#[allow(dead_code)]
fn _assert_types(_: &LieRep, _: &Cocycle) {}
