use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use cjt_cli::family::{Family, FamilyConfig};
use cjt_cli::format::{parse_matrix, parse_point, FormatError, ModuleFile};
use cjt_cli::report::*;
use cjt_cli::scan::{conjecture_scan, question_scan, ScanOptions};
use cjt_cli::suites::verify_theorems;
use cjt_core::chern::filtration_chern_check;
use cjt_core::decomp::{decompose, iso_probe, IsoVerdict, DEFAULT_ROUNDS};
use cjt_core::graded::splitting_type_windowed;
use cjt_core::lattice::{generic_image_power, generic_kernel_filtration, generic_kernel_power, kernel_layer_subquotient};
use cjt_core::rank::{constant_jordan_type_with, SamplingOptions};
use cjt_core::sheaf::{line_restriction_splitting, splitting_type};
use cjt_core::{jordan_type, CoreError, KEModule, PointSpec};
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Parser)]
#[command(name = "cjt", version, about = "Modules over truncated polynomial rings and their vector bundles")]
struct Cli {
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a module file defines a module.
    Validate { file: Option<PathBuf> },
    /// Jordan type at a point or at the generic point.
    Jtype {
        file: Option<PathBuf>,
        /// Comma-separated coordinates.
        #[arg(long, conflicts_with = "generic", allow_hyphen_values = true)]
        point: Option<String>,
        #[arg(long)]
        generic: bool,
    },
    /// Decide whether the Jordan type is constant.
    Cjt {
        file: Option<PathBuf>,
        /// Random planes per power (three or more generators).
        #[arg(long, default_value_t = 64)]
        samples: usize,
        /// Extension degree of the sampling field.
        #[arg(long)]
        ext_degree: Option<u32>,
        #[arg(long, default_value_t = SamplingOptions::default().seed)]
        seed: u64,
    },
    /// Splitting type of the i-th bundle (two generators).
    Bundle {
        file: Option<PathBuf>,
        #[arg(long = "i")]
        index: usize,
        /// Compute degreewise with this window (a number or `auto`).
        #[arg(long)]
        window: Option<String>,
    },
    /// Restrict along `T_j = sum_i a_ij X_i`.
    Restrict {
        file: Option<PathBuf>,
        /// Rows separated by `;`, entries by `,`.
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Splitting type of the i-th bundle restricted to a line.
    LineSplitting {
        file: Option<PathBuf>,
        #[arg(long = "i")]
        index: usize,
        /// An r x 2 matrix of full rank.
        #[arg(long, allow_hyphen_values = true)]
        line: String,
    },
    /// Generic kernel of X^n.
    Genker {
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        power: usize,
    },
    /// Generic image of X^n.
    Genimg {
        file: Option<PathBuf>,
        #[arg(long)]
        power: usize,
    },
    /// The generic kernel filtration J^j K.
    Filtration { file: Option<PathBuf> },
    /// Extract J^-top K / J^bottom K as a module.
    Layer {
        file: Option<PathBuf>,
        #[arg(long, allow_hyphen_values = true)]
        top: i64,
        #[arg(long)]
        bottom: usize,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Linear dual.
    Dual {
        file: Option<PathBuf>,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// The W-module W(n, d).
    Wmodule {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 1)]
        field_degree: u32,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// The n-th syzygy of the trivial module.
    Syzygy {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n: usize,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Direct sum of two modules.
    Dsum {
        a: PathBuf,
        b: PathBuf,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// All bundle splittings and the first Chern class identity.
    Chern { file: Option<PathBuf> },
    /// Split into summands with random endomorphisms.
    Decompose {
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_ROUNDS)]
        rounds: usize,
        /// Write each summand as a module file into this directory.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Look for an isomorphism or an invariant telling two modules apart.
    Isoprobe {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_ROUNDS)]
        rounds: usize,
    },
    /// Run every property check that applies to a module.
    VerifyTheorems {
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check that Loewy-length-3 summands of K2/I2K2 and K2(M/I2) have zero F_1.
    ConjectureScan {
        #[arg(long)]
        count: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value = "all")]
        family: Family,
        #[arg(long, default_value_t = DEFAULT_ROUNDS)]
        rounds: usize,
        #[arg(long, default_value_t = 24)]
        max_dim: usize,
        /// Write counterexample module files into this directory.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Compare K^n(M)/I^m K^n(M) with K^n(M/I^m M).
    QuestionScan {
        #[arg(long)]
        count: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value = "all")]
        family: Family,
        #[arg(long, default_value_t = DEFAULT_ROUNDS)]
        rounds: usize,
        #[arg(long, default_value_t = 24)]
        max_dim: usize,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Core(#[from] CoreError),
    #[error("{0}")]
    Failed(String),
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Core(e) if e.is_mathematical_refusal() => 1,
            CliError::Core(_) => 2,
            CliError::Failed(_) => 1,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

struct Input {
    source: String,
    sha256: String,
    module: KEModule,
}

fn load(path: Option<&Path>) -> CliResult<Input> {
    let (source, text) = match path {
        Some(p) if p.as_os_str() != "-" => {
            let text = fs::read_to_string(p).map_err(|e| CliError::Input(format!("cannot read {}: {e}", p.display())))?;
            (p.display().to_string(), text)
        }
        _ => {
            let mut text = String::new();
            std::io::Read::read_to_string(&mut std::io::stdin(), &mut text)
                .map_err(|e| CliError::Input(format!("cannot read stdin: {e}")))?;
            ("<stdin>".to_string(), text)
        }
    };
    let module = ModuleFile::parse(&text)?.to_module()?;
    Ok(Input { source, sha256: digest(&text), module })
}

struct Outcome {
    text: Vec<String>,
    results: Value,
    seed: Option<u64>,
    /// Failure after the report has been written.
    failure: Option<String>,
}

impl Outcome {
    fn new(text: Vec<String>, results: Value) -> Self {
        Outcome { text, results, seed: None, failure: None }
    }

    fn seeded(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}

fn two_generators(m: &KEModule) -> CliResult<()> {
    if m.rank() != 2 {
        return Err(CoreError::Unsupported(format!("needs exactly two generators, module has {}", m.rank())).into());
    }
    Ok(())
}

fn write_module(m: &KEModule, name: Option<String>, output: Option<&Path>) -> CliResult<Option<Outcome>> {
    let text = ModuleFile::from_module(m, name).to_json();
    match output {
        Some(path) => {
            fs::write(path, &text).map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
            Ok(Some(Outcome::new(
                vec![format!("wrote {} (dim {})", path.display(), m.dim())],
                json!({ "output": path.display().to_string(), "dim": m.dim(), "sha256": digest(&text) }),
            )))
        }
        None => {
            print!("{text}");
            Ok(None)
        }
    }
}

fn run(command: &Command, inputs: &mut Vec<Input>) -> CliResult<Option<Outcome>> {
    let mut take = |path: &Option<PathBuf>| -> CliResult<KEModule> {
        let input = load(path.as_deref())?;
        let m = input.module.clone();
        inputs.push(input);
        Ok(m)
    };
    let outcome = match command {
        Command::Validate { file } => {
            let m = take(file)?;
            Outcome::new(
                vec![format!("valid module: p = {}, field order {}, r = {}, dim = {}", m.p(), m.field().order(), m.rank(), m.dim())],
                json!({ "valid": true, "p": m.p(), "field_order": m.field().order(), "r": m.rank(), "dim": m.dim() }),
            )
        }
        Command::Jtype { file, point, generic } => {
            let m = take(file)?;
            let spec = match (point, generic) {
                (Some(pt), _) => PointSpec::Closed(parse_point(m.field(), pt)?),
                (None, true) => PointSpec::Generic,
                (None, false) => return Err(CliError::Input("give --point or --generic".into())),
            };
            let jt = jordan_type(&m, &spec)?;
            Outcome::new(vec![jt.to_string()], json!({ "jordan_type": jordan_json(&jt) }))
        }
        Command::Cjt { file, samples, ext_degree, seed } => {
            let m = take(file)?;
            let opts = SamplingOptions { samples: *samples, ext_degree: *ext_degree, seed: *seed };
            let d = constant_jordan_type_with(&m, &opts)?;
            Outcome::new(vec![cjt_text(m.field(), &d)], cjt_json(m.field(), &d)).seeded(*seed)
        }
        Command::Bundle { file, index, window } => {
            let m = take(file)?;
            two_generators(&m)?;
            match window {
                None => {
                    let st = splitting_type(&m, *index)?;
                    Outcome::new(vec![st.to_string()], json!({ "index": index, "method": "lattice", "splitting": splitting_json(&st) }))
                }
                Some(w) => {
                    let start = match w.as_str() {
                        "auto" => None,
                        s => Some(s.parse::<usize>().map_err(|_| CliError::Input(format!("window {s:?} is not a number or auto")))?),
                    };
                    let rep = splitting_type_windowed(&m, *index, start)?;
                    let h0: Vec<Value> = rep
                        .attempts
                        .last()
                        .map(|a| a.h0.iter().map(|(n, v)| json!([n, v])).collect())
                        .unwrap_or_default();
                    Outcome::new(
                        vec![rep.splitting.to_string()],
                        json!({
                            "index": index, "method": "window", "window": rep.window,
                            "attempts": rep.attempts.iter().map(|a| json!({
                                "window": a.window, "linear_growth": a.linear_growth, "failure": a.failure,
                                "splitting": a.splitting.as_ref().map(splitting_json),
                            })).collect::<Vec<_>>(),
                            "h0": h0,
                            "splitting": splitting_json(&rep.splitting),
                            "caveat": "stability under doubling of the window is an empirical certificate",
                        }),
                    )
                }
            }
        }
        Command::Restrict { file, matrix, output } => {
            let m = take(file)?;
            let a = parse_matrix(m.field(), matrix)?;
            return write_module(&m.restrict(&a)?, None, output.as_deref());
        }
        Command::LineSplitting { file, index, line } => {
            let m = take(file)?;
            let a = parse_matrix(m.field(), line)?;
            let st = line_restriction_splitting(&m, &a, *index)?;
            Outcome::new(vec![st.to_string()], json!({ "index": index, "splitting": splitting_json(&st) }))
        }
        Command::Genker { file, power } => {
            let m = take(file)?;
            let rep = generic_kernel_power(&m, *power)?;
            let mut text = vec![format!(
                "K^{}: dim {} of {} ({}{})",
                power,
                rep.subspace.dim(),
                m.dim(),
                rep.method.tag(),
                if rep.certified { ", certified" } else { "" }
            )];
            text.extend(rep.subspace.vectors().iter().map(|v| vector_text(m.field(), v)));
            Outcome::new(text, json!({ "power": power, "method": rep.method.tag(), "certified": rep.certified, "subspace": subspace_json(&rep.subspace) }))
        }
        Command::Genimg { file, power } => {
            let m = take(file)?;
            let rep = generic_image_power(&m, *power)?;
            let mut text = vec![format!(
                "I^{}: dim {} of {} ({}{})",
                power,
                rep.subspace.dim(),
                m.dim(),
                rep.method.tag(),
                if rep.certified { ", certified" } else { "" }
            )];
            text.extend(rep.subspace.vectors().iter().map(|v| vector_text(m.field(), v)));
            Outcome::new(text, json!({ "power": power, "method": rep.method.tag(), "certified": rep.certified, "subspace": subspace_json(&rep.subspace) }))
        }
        Command::Filtration { file } => {
            let m = take(file)?;
            let filt = generic_kernel_filtration(&m)?;
            let text = filt.layers.iter().map(|l| format!("J^{}K: dim {}", l.index, l.subspace.dim())).collect();
            Outcome::new(
                text,
                json!({
                    "layers": filt.layers.iter().map(|l| json!({ "index": l.index, "subspace": subspace_json(&l.subspace) })).collect::<Vec<_>>(),
                    "bottom_is_zero": filt.bottom_is_zero, "top_is_whole": filt.top_is_whole,
                }),
            )
        }
        Command::Layer { file, top, bottom, output } => {
            let m = take(file)?;
            let sq = kernel_layer_subquotient(&m, top.unsigned_abs() as usize, *bottom)?;
            return write_module(&sq.module, None, output.as_deref());
        }
        Command::Dual { file, output } => {
            let m = take(file)?;
            return write_module(&m.dual(), None, output.as_deref());
        }
        Command::Wmodule { p, n, d, field_degree, output } => {
            let f = cjt_exact::FieldCtx::new(*p, *field_degree, None).map_err(|e| CliError::Input(e.to_string()))?;
            let w = KEModule::w_module(&f, *n, *d)?;
            return write_module(&w, Some(format!("W({n},{d})")), output.as_deref());
        }
        Command::Syzygy { p, r, n, output } => {
            let f = cjt_exact::FieldCtx::prime(*p).map_err(|e| CliError::Input(e.to_string()))?;
            let m = KEModule::syzygy(&f, *r, *n)?;
            return write_module(&m, Some(format!("Omega^{n}(k)")), output.as_deref());
        }
        Command::Dsum { a, b, output } => {
            let ma = take(&Some(a.clone()))?;
            let mb = take(&Some(b.clone()))?;
            return write_module(&ma.direct_sum(&mb)?, None, output.as_deref());
        }
        Command::Chern { file } => {
            let m = take(file)?;
            two_generators(&m)?;
            let rep = filtration_chern_check(&m)?;
            let mut text: Vec<String> = rep
                .terms
                .iter()
                .map(|t| format!("F_{} = {}  (rank {}, degree {}, contribution {})", t.index, t.splitting, t.rank, t.degree, t.contribution))
                .collect();
            text.push(format!("sum = {} ({})", rep.sum, if rep.holds { "holds" } else { "FAILS" }));
            let mut out = Outcome::new(
                text,
                json!({
                    "terms": rep.terms.iter().map(|t| json!({
                        "index": t.index, "splitting": splitting_json(&t.splitting),
                        "rank": t.rank, "degree": t.degree, "contribution": t.contribution,
                    })).collect::<Vec<_>>(),
                    "sum": rep.sum, "holds": rep.holds,
                }),
            );
            if !rep.holds {
                out.failure = Some(format!("Chern identity fails with sum {}", rep.sum));
            }
            out
        }
        Command::Decompose { file, seed, rounds, emit } => {
            let m = take(file)?;
            let dec = decompose(&m, *seed, *rounds)?;
            let f = m.field();
            let mut text = vec![format!("{} summands, dims {:?}", dec.summands.len(), dec.dims())];
            let mut summands = Vec::new();
            for (k, s) in dec.summands.iter().enumerate() {
                let generic = jordan_type(&s.module, &PointSpec::Generic)?;
                text.push(format!(
                    "  summand {}: dim {}, Loewy length {}, generic Jordan type {}{}",
                    k + 1,
                    s.module.dim(),
                    s.module.loewy_length(),
                    generic,
                    if s.probably_indecomposable { ", no split found" } else { "" }
                ));
                if let Some(dir) = emit {
                    fs::create_dir_all(dir).map_err(|e| CliError::Input(format!("cannot create {}: {e}", dir.display())))?;
                    let path = dir.join(format!("summand_{}.json", k + 1));
                    fs::write(&path, ModuleFile::from_module(&s.module, Some(format!("summand {}", k + 1))).to_json())
                        .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
                }
                summands.push(json!({
                    "module": serde_json::to_value(ModuleFile::from_module(&s.module, None)).expect("serializable"),
                    "inclusion": matrix_json(f, &s.inclusion),
                    "loewy_length": s.module.loewy_length(),
                    "generic_jordan_type": jordan_json(&generic),
                    "probably_indecomposable": s.probably_indecomposable,
                }));
            }
            text.push(format!(
                "certificate verified by reassembly; indecomposability is probabilistic ({} random endomorphisms per block)",
                dec.rounds
            ));
            Outcome::new(
                text,
                json!({
                    "summands": summands, "certificate": matrix_json(f, &dec.certificate),
                    "verified": dec.verified, "rounds": dec.rounds,
                }),
            )
            .seeded(*seed)
        }
        Command::Isoprobe { a, b, seed, rounds } => {
            let ma = take(&Some(a.clone()))?;
            let mb = take(&Some(b.clone()))?;
            let v = iso_probe(&ma, &mb, *seed, *rounds)?;
            let (line, detail) = match &v {
                IsoVerdict::Isomorphic(h) => ("isomorphic".to_string(), json!({ "certificate": matrix_json(ma.field(), h) })),
                IsoVerdict::NotIsomorphic(why) => (format!("not isomorphic: {why}"), json!({ "witness": why })),
                IsoVerdict::Unknown => (format!("unknown after {rounds} random homomorphisms"), json!({})),
            };
            Outcome::new(vec![line], json!({ "verdict": v.tag(), "detail": detail })).seeded(*seed)
        }
        Command::VerifyTheorems { file, seed } => {
            let m = take(file)?;
            let rep = verify_theorems(&m, *seed)?;
            let mut text: Vec<String> = rep.notes.clone();
            text.extend(rep.checks.iter().map(|c| {
                format!("{} {}{}", if c.holds { "ok  " } else { "FAIL" }, c.name, if c.detail.is_empty() { String::new() } else { format!("  [{}]", c.detail) })
            }));
            let failed = rep.failures().count();
            text.push(format!("{} checks, {} failed", rep.checks.len(), failed));
            let mut out = Outcome::new(
                text,
                json!({
                    "notes": rep.notes,
                    "checks": rep.checks.iter().map(|c| json!({ "name": c.name, "holds": c.holds, "detail": c.detail })).collect::<Vec<_>>(),
                    "failed": failed,
                }),
            )
            .seeded(*seed);
            if failed > 0 {
                out.failure = Some(format!("{failed} checks failed"));
            }
            out
        }
        Command::ConjectureScan { count, seed, family, rounds, max_dim, emit } => {
            let opts = ScanOptions {
                family: *family,
                count: *count,
                seed: *seed,
                rounds: *rounds,
                config: FamilyConfig { max_dim: *max_dim, ..FamilyConfig::default() },
            };
            let rep = conjecture_scan(&opts)?;
            let mut text = vec![
                format!("modules scanned: {}", rep.modules),
                format!("subquotients decomposed: {}", rep.constructions),
                format!("summands: {} (Loewy length 3: {})", rep.summands, rep.loewy_three),
                format!("Loewy-length-3 summands with nonzero F_1: {}", rep.counterexamples.len()),
            ];
            let mut cex = Vec::new();
            for (k, c) in rep.counterexamples.iter().enumerate() {
                text.push(format!(
                    "  candidate {}: member #{} {} in {}: F_1 = {}{}",
                    k + 1,
                    c.member_index,
                    c.recipe,
                    c.construction.tag(),
                    c.f1,
                    if c.probably_indecomposable { "" } else { " (summand not fully split)" }
                ));
                if let Some(dir) = emit {
                    fs::create_dir_all(dir).map_err(|e| CliError::Input(format!("cannot create {}: {e}", dir.display())))?;
                    for (suffix, file) in [("module", &c.module), ("summand", &c.summand)] {
                        let path = dir.join(format!("candidate_{}_{suffix}.json", k + 1));
                        fs::write(&path, file.to_json()).map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
                    }
                }
                cex.push(json!({
                    "member_index": c.member_index, "recipe": c.recipe, "construction": c.construction.tag(),
                    "f1": c.f1, "probably_indecomposable": c.probably_indecomposable,
                    "module": serde_json::to_value(&c.module).expect("serializable"),
                    "summand": serde_json::to_value(&c.summand).expect("serializable"),
                }));
            }
            Outcome::new(
                text,
                json!({
                    "family": family.to_string(), "count": count, "rounds": rounds, "max_dim": max_dim,
                    "modules": rep.modules, "constructions": rep.constructions, "summands": rep.summands,
                    "loewy_three": rep.loewy_three, "counterexamples": cex, "records": rep.records,
                }),
            )
            .seeded(*seed)
        }
        Command::QuestionScan { count, seed, family, rounds, max_dim } => {
            let opts = ScanOptions {
                family: *family,
                count: *count,
                seed: *seed,
                rounds: *rounds,
                config: FamilyConfig { max_dim: *max_dim, ..FamilyConfig::default() },
            };
            let rep = question_scan(&opts)?;
            let tally = |diag: bool, verdict: &str| rep.records.iter().filter(|r| (r.n == r.m) == diag && r.verdict == verdict).count();
            let mut text = vec![
                format!(
                    "n = m: {} isomorphic, {} not isomorphic, {} unknown",
                    tally(true, "isomorphic"),
                    tally(true, "not_isomorphic"),
                    tally(true, "unknown")
                ),
                format!(
                    "n != m: {} isomorphic, {} not isomorphic, {} unknown",
                    tally(false, "isomorphic"),
                    tally(false, "not_isomorphic"),
                    tally(false, "unknown")
                ),
            ];
            for r in rep.records.iter().filter(|r| r.verdict != "isomorphic") {
                text.push(format!("  #{} {} (n={}, m={}): {} {}", r.member_index, r.recipe, r.n, r.m, r.verdict, r.detail));
            }
            Outcome::new(
                text,
                json!({
                    "family": family.to_string(), "count": count, "rounds": rounds,
                    "isomorphic": rep.isomorphic, "not_isomorphic": rep.not_isomorphic, "unknown": rep.unknown,
                    "records": rep.records.iter().map(|r| json!({
                        "member_index": r.member_index, "recipe": r.recipe, "n": r.n, "m": r.m,
                        "dims": [r.dims.0, r.dims.1], "verdict": r.verdict, "detail": r.detail,
                    })).collect::<Vec<_>>(),
                }),
            )
            .seeded(*seed)
        }
    };
    Ok(Some(outcome))
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate { .. } => "validate",
        Command::Jtype { .. } => "jtype",
        Command::Cjt { .. } => "cjt",
        Command::Bundle { .. } => "bundle",
        Command::Restrict { .. } => "restrict",
        Command::LineSplitting { .. } => "line-splitting",
        Command::Genker { .. } => "genker",
        Command::Genimg { .. } => "genimg",
        Command::Filtration { .. } => "filtration",
        Command::Layer { .. } => "layer",
        Command::Dual { .. } => "dual",
        Command::Wmodule { .. } => "wmodule",
        Command::Syzygy { .. } => "syzygy",
        Command::Dsum { .. } => "dsum",
        Command::Chern { .. } => "chern",
        Command::Decompose { .. } => "decompose",
        Command::Isoprobe { .. } => "isoprobe",
        Command::VerifyTheorems { .. } => "verify-theorems",
        Command::ConjectureScan { .. } => "conjecture-scan",
        Command::QuestionScan { .. } => "question-scan",
    }
}

fn emit(cli: &Cli, inputs: &[Input], out: &Outcome) -> Result<(), CliError> {
    let body = if cli.json {
        let doc = json!({
            "command": command_name(&cli.command),
            "version": env!("CARGO_PKG_VERSION"),
            "inputs": inputs.iter().map(|i| json!({ "source": i.source, "sha256": i.sha256 })).collect::<Vec<_>>(),
            "seed": out.seed,
            "results": out.results,
        });
        serde_json::to_string_pretty(&doc).expect("reports serialize") + "\n"
    } else {
        out.text.iter().map(|l| format!("{l}\n")).collect()
    };
    match &cli.out {
        Some(path) => fs::write(path, body).map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut inputs = Vec::new();
    let result = run(&cli.command, &mut inputs).and_then(|outcome| {
        if let Some(out) = outcome {
            emit(&cli, &inputs, &out)?;
            if let Some(f) = out.failure {
                return Err(CliError::Failed(f));
            }
        }
        Ok(())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
