//! `lievec`: command-line front end for the symbolic engine.
//!
//! Exit codes: 0 success, 1 a mathematical check failed, 2 bad input.

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use lievec_core::linearize::{SymmetryRow, Verdict};
use lievec_core::parse::system_to_dsl;
use lievec_core::realize::{realize_sl, root_letter, verify_serre, Check, End, Realization, DEFAULT_SEED};
use lievec_core::{
    canonical_coordinates, closure_generate, generic_rank, linearize_pipeline, parse_expr, parse_fields, parse_map,
    parse_system, Chart, Error, FieldSet, LieBasis, OdeSystem, PointMap, Var, VectorField,
};
use serde::Serialize;

const SCHEMA: u32 = 1;
const DEFAULT_BUDGET: usize = 64;

#[derive(Parser)]
#[command(name = "lievec", version, about = "Exact Lie symmetry analysis of ODEs")]
struct Cli {
    /// Seed for generic-rank sampling (decimal or 0x-hex).
    #[arg(long, global = true, env = "LIEVEC_SEED", value_parser = parse_seed, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a file and print it in canonical form.
    Fmt {
        input: String,
        #[arg(long, value_enum, default_value = "fields")]
        kind: Kind,
    },
    /// Bracket of two named fields.
    Bracket { fields: String, a: String, b: String },
    /// Close the fields under the bracket and print the structure constants.
    Table {
        fields: String,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        max_dim: usize,
    },
    /// Generic rank of the coefficient matrix.
    Rank {
        fields: String,
        /// Restrict to these names.
        #[arg(long, value_delimiter = ',')]
        names: Vec<String>,
        #[arg(long, default_value_t = 5)]
        trials: usize,
    },
    /// Root table and defining relations of a simple-root-vector file.
    Roots { fields: String },
    /// Emit the realization of sl(k) as a field file.
    Realize {
        #[arg(value_enum)]
        family: Family,
        k: usize,
        #[arg(long, default_value_t = 1)]
        form: u8,
        /// Write to this file instead of standard output.
        #[arg(long)]
        emit: Option<PathBuf>,
        /// Emit the full root-vector basis instead of the generators.
        #[arg(long)]
        basis: bool,
    },
    /// Second (or higher) prolongation of every field.
    Prolong {
        fields: String,
        #[arg(long, default_value_t = 2)]
        order: usize,
    },
    /// Residuals of the prolonged fields on the solution locus of a system.
    Invariance {
        #[arg(long)]
        system: String,
        #[arg(long)]
        fields: String,
        /// Check the whole closed basis rather than the listed fields.
        #[arg(long)]
        closure: bool,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        max_dim: usize,
    },
    /// Rewrite a system in the target coordinates of a point map.
    Transform {
        #[arg(long)]
        system: String,
        #[arg(long)]
        map: String,
        /// Use the map from target to source.
        #[arg(long)]
        inverse: bool,
    },
    /// Commuting chain of root vectors through one end of the diagram.
    Chain {
        fields: String,
        #[arg(long, value_enum, default_value = "auto")]
        end: EndArg,
    },
    /// Canonical coordinates of a commuting chain.
    Coords {
        fields: String,
        #[arg(long, value_delimiter = ',')]
        chain: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        target: Vec<String>,
        /// Print the file's fields in the new coordinates instead of the map.
        #[arg(long)]
        push: bool,
    },
    /// Verify symmetries, straighten the chain and transform the system.
    Linearize {
        #[arg(long)]
        system: String,
        #[arg(long)]
        fields: String,
        #[arg(long, value_delimiter = ',')]
        chain: Vec<String>,
        /// Write the JSON report here and print a summary instead.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Fields,
    System,
    Map,
    Expr,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Sl,
}

#[derive(Clone, Copy, ValueEnum)]
enum EndArg {
    Auto,
    Left,
    Right,
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let t = s.replace('_', "");
    match t.strip_prefix("0x") {
        Some(h) => u64::from_str_radix(h, 16),
        None => t.parse(),
    }
    .map_err(|e| format!("invalid seed `{s}`: {e}"))
}

enum Failure {
    Input(String),
    Math(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Syntax { .. }
            | Error::Undeclared { .. }
            | Error::NonLinearExp(_)
            | Error::ChartMismatch(_)
            | Error::InvalidChart(_)
            | Error::Invalid(_) => Failure::Input(e.to_string()),
            _ => Failure::Math(e.to_string()),
        }
    }
}

type Outcome = Result<Output, Failure>;

/// Text for standard output plus whether the checks passed.
struct Output {
    text: String,
    ok: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, ok: true }
    }

    fn json<T: Serialize>(value: &T, ok: bool) -> Self {
        let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
        text.push('\n');
        Output { text, ok }
    }
}

fn read_path(arg: &str) -> Result<String, Failure> {
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::Input(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(arg).map_err(|e| Failure::Input(format!("{arg}: {e}")))
    }
}

/// A path, `-`, or the text itself when no such file exists.
fn read_inline(arg: &str) -> Result<String, Failure> {
    if arg == "-" || Path::new(arg).is_file() {
        read_path(arg)
    } else {
        Ok(arg.to_string())
    }
}

fn load_fields(arg: &str) -> Result<FieldSet, Failure> {
    let set = parse_fields(&read_path(arg)?)?;
    if set.fields.is_empty() {
        return Err(Failure::Input(format!("{arg}: no fields")));
    }
    Ok(set)
}

/// Reads `Xa, Xb, ..., X-a, X-b, ...` as simple root vectors.
fn as_realization(set: &FieldSet) -> Option<Realization> {
    if !set.fields.len().is_multiple_of(2) {
        return None;
    }
    let n = set.fields.len() / 2;
    let mut pos = Vec::with_capacity(n);
    let mut neg = Vec::with_capacity(n);
    for i in 0..n {
        pos.push(set.get(&format!("X{}", root_letter(i)))?.clone());
        neg.push(set.get(&format!("X-{}", root_letter(i)))?.clone());
    }
    Realization::from_fields(pos, neg).ok()
}

fn require_realization(set: &FieldSet) -> Result<Realization, Failure> {
    as_realization(set)
        .ok_or_else(|| Failure::Input("expected simple root vectors named Xa, Xb, ... and X-a, X-b, ...".into()))
}

/// Looks labels up in the file, then in the root-vector basis or closure.
fn resolve(set: &FieldSet, labels: &[String]) -> Result<Vec<(String, VectorField)>, Failure> {
    let mut basis: Option<LieBasis> = None;
    let mut out = Vec::new();
    for l in labels {
        if let Some(f) = set.get(l) {
            out.push((l.clone(), f.clone()));
            continue;
        }
        if basis.is_none() {
            basis = Some(match as_realization(set) {
                Some(r) => r.basis()?,
                None => closure_generate(&set.fields, DEFAULT_BUDGET)?,
            });
        }
        let f = basis.as_ref().and_then(|b| b.get(l)).ok_or_else(|| Failure::Input(format!("no field named `{l}`")))?;
        out.push((l.clone(), f.clone()));
    }
    Ok(out)
}

fn chain_for(set: &FieldSet, labels: &[String], seed: u64) -> Result<Vec<(String, VectorField)>, Failure> {
    if !labels.is_empty() {
        return resolve(set, labels);
    }
    match as_realization(set) {
        Some(r) => Ok(r.default_chain(seed)?),
        None => Ok(set.fields.clone()),
    }
}

#[derive(Serialize)]
struct Named {
    name: String,
    field: String,
}

fn named(fields: &[(String, VectorField)]) -> Vec<Named> {
    fields.iter().map(|(n, f)| Named { name: n.clone(), field: f.to_string() }).collect()
}

#[derive(Serialize)]
struct Constant {
    i: usize,
    j: usize,
    k: usize,
    c: String,
}

#[derive(Serialize)]
struct TableReport {
    schema: u32,
    chart: String,
    dimension: usize,
    basis: Vec<Named>,
    constants: Vec<Constant>,
    antisymmetric: bool,
    jacobi: bool,
    rank: usize,
    seed: u64,
}

#[derive(Serialize)]
struct RankReport {
    schema: u32,
    chart: String,
    fields: Vec<String>,
    trials: usize,
    seed: u64,
    rank: usize,
    full: bool,
}

#[derive(Serialize)]
struct Root {
    name: String,
    root: Vec<i64>,
}

#[derive(Serialize)]
struct RootsReport {
    schema: u32,
    rank: usize,
    dimension: usize,
    cartan_matrix: Option<Vec<Vec<i64>>>,
    raw_cartan: Vec<Vec<String>>,
    sign: i64,
    roots: Vec<Root>,
    positive_roots: usize,
    relations: Vec<Check>,
    type_a: bool,
}

#[derive(Serialize)]
struct InvarianceReport {
    schema: u32,
    system: String,
    fields: Vec<SymmetryRow>,
    invariant: bool,
}

#[derive(Serialize)]
struct ChainReport {
    schema: u32,
    end: End,
    chain: Vec<Named>,
    rank: usize,
    seed: u64,
}

#[derive(Serialize)]
struct MapJson {
    source: String,
    target: String,
    forward: Vec<String>,
    inverse: Vec<String>,
}

fn map_json(m: &PointMap) -> MapJson {
    let text = m.to_string();
    let rows: Vec<String> = text.lines().skip(2).map(str::to_string).collect();
    let (forward, inverse) = rows.split_at(m.target().len());
    MapJson {
        source: m.source().to_string(),
        target: m.target().to_string(),
        forward: forward.to_vec(),
        inverse: inverse.to_vec(),
    }
}

fn equations(s: &OdeSystem) -> Vec<String> {
    s.to_string().split("; ").map(str::to_string).collect()
}

#[derive(Serialize)]
struct LinearizeReport {
    schema: u32,
    seed: u64,
    symmetries: Vec<SymmetryRow>,
    chain: Vec<String>,
    stages: Vec<lievec_core::linearize::Stage>,
    map: Option<MapJson>,
    transformed: Option<Vec<String>>,
    verdict: Verdict,
}

fn cartan_a(n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match i.abs_diff(j) {
                    0 => 2,
                    1 => -1,
                    _ => 0,
                })
                .collect()
        })
        .collect()
}

fn check_chart(fields: &FieldSet, s: &OdeSystem) -> Result<(), Failure> {
    if &fields.chart != s.jet().base_chart() {
        return Err(Failure::Input(format!(
            "fields live on ({}) but the system on ({})",
            fields.chart,
            s.jet().base_chart()
        )));
    }
    Ok(())
}

fn run(cmd: Cmd, seed: u64) -> Outcome {
    match cmd {
        Cmd::Fmt { input, kind } => {
            let text = read_path(&input)?;
            let out = match kind {
                Kind::Fields => parse_fields(&text)?.to_dsl(),
                Kind::System => system_to_dsl(&parse_system(&text)?),
                Kind::Map => parse_map(&text)?.to_string(),
                Kind::Expr => format!("{}\n", parse_expr(text.trim(), None)?),
            };
            Ok(Output::ok(out))
        }
        Cmd::Bracket { fields, a, b } => {
            let set = load_fields(&fields)?;
            let get = |n: &str| set.get(n).ok_or_else(|| Failure::Input(format!("no field named `{n}`")));
            let z = get(&a)?.bracket(get(&b)?)?;
            Ok(Output::ok(format!("[{a},{b}] = {z}\n")))
        }
        Cmd::Table { fields, max_dim } => {
            let set = load_fields(&fields)?;
            let b = closure_generate(&set.fields, max_dim)?;
            let sc = b.structure_constants()?;
            let rank = generic_rank(b.fields(), 5, seed)?;
            let constants =
                sc.nonzero().into_iter().map(|(i, j, k, c)| Constant { i, j, k, c: c.to_string() }).collect();
            let basis: Vec<(String, VectorField)> = b.names().iter().cloned().zip(b.fields().iter().cloned()).collect();
            let jacobi = sc.satisfies_jacobi();
            let antisymmetric = sc.is_antisymmetric();
            let report = TableReport {
                schema: SCHEMA,
                chart: set.chart.to_string(),
                dimension: b.len(),
                basis: named(&basis),
                constants,
                antisymmetric,
                jacobi,
                rank,
                seed,
            };
            Ok(Output::json(&report, jacobi && antisymmetric))
        }
        Cmd::Rank { fields, names, trials } => {
            let set = load_fields(&fields)?;
            let chosen = if names.is_empty() { set.fields.clone() } else { resolve(&set, &names)? };
            let vs: Vec<VectorField> = chosen.iter().map(|c| c.1.clone()).collect();
            let rank = generic_rank(&vs, trials, seed)?;
            let report = RankReport {
                schema: SCHEMA,
                chart: set.chart.to_string(),
                fields: chosen.into_iter().map(|c| c.0).collect(),
                trials,
                seed,
                rank,
                full: rank == set.chart.len(),
            };
            Ok(Output::json(&report, true))
        }
        Cmd::Roots { fields } => {
            let set = load_fields(&fields)?;
            let r = require_realization(&set)?;
            let serre = verify_serre(&r);
            let b = r.basis()?;
            let d = r.root_datum(&b)?;
            let cm = d.cartan_matrix();
            let type_a = cm.as_ref() == Some(&cartan_a(r.n));
            let roots =
                d.roots.iter().map(|(i, root)| Root { name: b.names()[*i].clone(), root: root.clone() }).collect();
            let report = RootsReport {
                schema: SCHEMA,
                rank: d.rank(),
                dimension: b.len(),
                cartan_matrix: cm,
                raw_cartan: d.raw_cartan.iter().map(|row| row.iter().map(|q| q.to_string()).collect()).collect(),
                sign: d.sign,
                roots,
                positive_roots: d.positive_roots().len(),
                relations: serre.checks.clone(),
                type_a,
            };
            Ok(Output::json(&report, type_a && serre.passed()))
        }
        Cmd::Realize { family: Family::Sl, k, form, emit, basis } => {
            let r = realize_sl(k, form)?;
            let fields = if basis {
                let b = r.basis()?;
                b.names().iter().cloned().zip(b.fields().iter().cloned()).collect()
            } else {
                r.generators()
            };
            let text = FieldSet { chart: r.chart.clone(), params: Vec::new(), fields }.to_dsl();
            match emit {
                Some(path) => {
                    std::fs::write(&path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
                    Ok(Output::ok(String::new()))
                }
                None => Ok(Output::ok(text)),
            }
        }
        Cmd::Prolong { fields, order } => {
            let set = load_fields(&fields)?;
            let jet = lievec_core::JetChart::over(&set.chart, order)?;
            let prolonged =
                set.fields.iter().map(|(n, f)| Ok((n.clone(), jet.prolong(f)?))).collect::<Result<Vec<_>, Error>>()?;
            Ok(Output::ok(
                FieldSet { chart: jet.chart().clone(), params: set.params.clone(), fields: prolonged }.to_dsl(),
            ))
        }
        Cmd::Invariance { system, fields, closure, max_dim } => {
            let s = parse_system(&read_inline(&system)?)?;
            let set = load_fields(&fields)?;
            check_chart(&set, &s)?;
            let list = if closure {
                let b = closure_generate(&set.fields, max_dim)?;
                b.names().iter().cloned().zip(b.fields().iter().cloned()).collect()
            } else {
                set.fields.clone()
            };
            let mut rows = Vec::new();
            for (name, x) in &list {
                let res = s.invariance(&s.jet().prolong(x)?)?;
                rows.push(SymmetryRow {
                    name: name.clone(),
                    ok: res.iter().all(|e| e.is_zero()),
                    residuals: res.iter().map(|e| e.to_string()).collect(),
                });
            }
            let invariant = rows.iter().all(|r| r.ok);
            let report = InvarianceReport { schema: SCHEMA, system: s.to_string(), fields: rows, invariant };
            Ok(Output::json(&report, invariant))
        }
        Cmd::Transform { system, map, inverse } => {
            let s = parse_system(&read_inline(&system)?)?;
            let mut m = parse_map(&read_path(&map)?)?;
            if inverse {
                m = m.inverted();
            }
            Ok(Output::ok(system_to_dsl(&s.transform(&m)?)))
        }
        Cmd::Chain { fields, end } => {
            let set = load_fields(&fields)?;
            let r = require_realization(&set)?;
            let (end, chain) = match end {
                EndArg::Right => (End::Right, r.abelian_chain(End::Right, seed)?),
                EndArg::Left => (End::Left, r.abelian_chain(End::Left, seed)?),
                EndArg::Auto => match r.abelian_chain(End::Right, seed) {
                    Ok(c) => (End::Right, c),
                    Err(_) => (End::Left, r.abelian_chain(End::Left, seed)?),
                },
            };
            let report = ChainReport { schema: SCHEMA, end, chain: named(&chain), rank: r.n, seed };
            Ok(Output::json(&report, true))
        }
        Cmd::Coords { fields, chain, target, push } => {
            let set = load_fields(&fields)?;
            let chain = chain_for(&set, &chain, seed)?;
            let target =
                if target.is_empty() { None } else { Some(Chart::new(target.iter().map(|n| Var::new(n)).collect())?) };
            let vs: Vec<VectorField> = chain.iter().map(|c| c.1.clone()).collect();
            let m = canonical_coordinates(&vs, target.as_ref(), seed)?;
            if !push {
                if let Some(v) = m.target().vars().iter().find(|v| m.source().contains(v)) {
                    return Err(Failure::Input(format!("target name `{v}` is also a source name")));
                }
                return Ok(Output::ok(m.to_string()));
            }
            let pushed = set
                .fields
                .iter()
                .map(|(n, f)| Ok((n.clone(), m.pushforward(f)?)))
                .collect::<Result<Vec<_>, Error>>()?;
            Ok(Output::ok(FieldSet { chart: m.target().clone(), params: set.params.clone(), fields: pushed }.to_dsl()))
        }
        Cmd::Linearize { system, fields, chain, report } => {
            let s = parse_system(&read_inline(&system)?)?;
            let set = load_fields(&fields)?;
            check_chart(&set, &s)?;
            let chain = chain_for(&set, &chain, seed)?;
            let mut generators = set.fields.clone();
            for c in &chain {
                if set.get(&c.0).is_none() {
                    generators.push(c.clone());
                }
            }
            let labels: Vec<String> = chain.into_iter().map(|c| c.0).collect();
            let rep = linearize_pipeline(&s, &generators, &labels, seed)?;
            let ok = rep.verdict == Verdict::Linearized;
            let summary = match (&rep.transformed, rep.failed_stage()) {
                (Some(t), None) => format!("linearized: {t}\n"),
                (_, stage) => format!("failed at stage {}\n", stage.unwrap_or("verdict")),
            };
            let json = LinearizeReport {
                schema: SCHEMA,
                seed,
                symmetries: rep.symmetries,
                chain: rep.chain,
                stages: rep.stages,
                map: rep.map.as_ref().map(map_json),
                transformed: rep.transformed.as_ref().map(equations),
                verdict: rep.verdict,
            };
            match report {
                Some(path) => {
                    let out = Output::json(&json, ok);
                    std::fs::write(&path, out.text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
                    Ok(Output { text: summary, ok })
                }
                None => Ok(Output::json(&json, ok)),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd, cli.seed) {
        Ok(out) => {
            print!("{}", out.text);
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Math(msg)) => {
            eprintln!("lievec: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("lievec: {msg}");
            ExitCode::from(2)
        }
    }
}
