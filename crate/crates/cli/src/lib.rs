//! Batch front end for `f2hom`: loads JSON descriptions, runs a computation
//! and renders a text or JSON report.
//!
//! Exit codes: 0 success, 1 mathematical failure, 2 input error.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use f2hom::ainfty::minimal_model;
use f2hom::io::{parse, AlgebraFile, ComplexFile, SystemFile};
use f2hom::simplicial::{LocalSystem, TwistedCochains};
use f2hom::suites::run_suite;
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "f2hom", version, about = "Homological algebra over F2")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Emit one JSON document instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Also write the machine-readable result to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Twisted cohomology of a simplicial complex.
    Cohomology {
        #[arg(long)]
        input: PathBuf,
        /// Local system; the trivial rank-1 system when absent.
        #[arg(long)]
        system: Option<PathBuf>,
    },
    /// Runs a randomized lemma suite.
    LemmaSuite {
        /// filtration, coconnective, adjunction, morse, hochschild-stab or finprop.
        name: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
    /// Minimal A∞ model of a DG algebra.
    MinimalModel {
        #[arg(long)]
        input: PathBuf,
        /// Largest arity computed.
        #[arg(long, default_value_t = 6)]
        cap: usize,
    },
}

/// What a run prints, writes and returns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
    /// Contents for `--out`.
    pub file: Option<String>,
}

impl Outcome {
    fn input_error(msg: impl std::fmt::Display) -> Outcome {
        Outcome { code: 2, stdout: String::new(), stderr: format!("error: {msg}"), file: None }
    }
}

#[derive(Serialize)]
struct CohomologyReport {
    command: &'static str,
    dims: BTreeMap<i64, usize>,
    /// Supports of representative cocycles, per degree.
    representatives: BTreeMap<i64, Vec<Vec<String>>>,
}

#[derive(Serialize)]
struct ModelReport {
    command: &'static str,
    cap: usize,
    relations_hold: bool,
    morphism_holds: bool,
    quasi_isomorphism: bool,
    higher_ops: BTreeMap<usize, usize>,
    algebra: AlgebraFile,
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, String> {
    parse(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn to_json<T: Serialize>(x: &T) -> String {
    serde_json::to_string_pretty(x).expect("reports serialize")
}

pub fn run(cli: &Cli) -> Outcome {
    let mut out = match &cli.command {
        Command::Cohomology { input, system } => cohomology(input, system.as_deref(), cli.json),
        Command::LemmaSuite { name, seed, count } => lemma_suite(name, *seed, *count, cli.json),
        Command::MinimalModel { input, cap } => model(input, *cap, cli.json),
    };
    if cli.out.is_none() {
        out.file = None;
    }
    out
}

fn cohomology(input: &Path, system: Option<&Path>, json: bool) -> Outcome {
    let base = match load::<ComplexFile>(input).and_then(|f| f.build().map_err(|e| e.to_string())) {
        Ok(k) => k,
        Err(e) => return Outcome::input_error(e),
    };
    let e = match system {
        None => LocalSystem::trivial_rank(&base, 1),
        Some(p) => match load::<SystemFile>(p).and_then(|f| f.build(&base).map_err(|e| e.to_string())) {
            Ok(e) => e,
            Err(e) => return Outcome::input_error(e),
        },
    };
    let cochains = TwistedCochains::new(&e);
    let h = cochains.complex().cohomology();
    let dims: BTreeMap<i64, usize> = h.dims().into_iter().filter(|&(_, d)| d > 0).collect();
    let labels = cochains.complex().space();
    let representatives = dims
        .keys()
        .map(|&k| {
            let reps = h
                .representatives(k)
                .iter()
                .map(|v| v.ones().map(|i| labels.labels(k)[i].clone()).collect())
                .collect();
            (k, reps)
        })
        .collect();
    let report = CohomologyReport { command: "cohomology", dims, representatives };
    let doc = to_json(&report);
    let stdout = if json {
        doc.clone()
    } else {
        let mut s = if report.dims.is_empty() {
            "H = 0".to_string()
        } else {
            report.dims.iter().map(|(k, d)| format!("H^{k}: {d}")).collect::<Vec<_>>().join(", ")
        };
        for (k, reps) in &report.representatives {
            for r in reps {
                s.push_str(&format!("\n  H^{k} representative: {}", r.join(" + ")));
            }
        }
        s
    };
    Outcome { code: 0, stdout, stderr: String::new(), file: Some(doc) }
}

fn lemma_suite(name: &str, seed: u64, count: usize, json: bool) -> Outcome {
    let report = match run_suite(name, seed, count) {
        Ok(r) => r,
        Err(e) => return Outcome::input_error(e),
    };
    let doc = to_json(&report);
    let stdout = if json { doc.clone() } else { report.to_string() };
    let code = if report.all_pass() { 0 } else { 1 };
    Outcome { code, stdout, stderr: String::new(), file: Some(doc) }
}

fn model(input: &Path, cap: usize, json: bool) -> Outcome {
    if cap < 2 {
        return Outcome::input_error("cap must be at least 2");
    }
    let dga = match load::<AlgebraFile>(input).and_then(|f| f.build_dga().map_err(|e| e.to_string())) {
        Ok(a) => a,
        Err(e) => return Outcome::input_error(e),
    };
    let m = minimal_model(&dga, cap);
    let relations_hold = m.algebra.check_relations().holds();
    let morphism_holds = m.check_morphism(&dga).holds();
    let quasi_isomorphism = m.linear_part(&dga).is_quasi_isomorphism();
    let higher_ops = m
        .algebra
        .ops()
        .arities()
        .filter(|&a| a >= 3)
        .map(|a| (a, m.algebra.ops().entries(a).count()))
        .collect();
    let report = ModelReport {
        command: "minimal-model",
        cap,
        relations_hold,
        morphism_holds,
        quasi_isomorphism,
        higher_ops,
        algebra: AlgebraFile::from_algebra(&m.algebra),
    };
    let ok = relations_hold && morphism_holds && quasi_isomorphism;
    let stdout = if json {
        to_json(&report)
    } else {
        let mut s = format!(
            "minimal model up to arity {cap}: dim {}, relations {}, morphism {}, quasi-isomorphism {}",
            m.algebra.dim(),
            verdict(relations_hold),
            verdict(morphism_holds),
            verdict(quasi_isomorphism)
        );
        s.push('\n');
        s.push_str(&m.algebra.to_string());
        s
    };
    Outcome { code: if ok { 0 } else { 1 }, stdout, stderr: String::new(), file: Some(to_json(&report.algebra)) }
}

fn verdict(b: bool) -> &'static str {
    if b {
        "hold"
    } else {
        "FAIL"
    }
}
