//! Command-line front end. The `coxdom` binary is a thin wrapper over
//! [`main_with_args`].

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::datum::{CoxeterDatum, ModeChoice, NumericOptions, DEFAULT_RANK_CAP};
use crate::dihedral::{canonical_pair, chain_position, verify_dominance_pair};
use crate::dominance::{
    dominated_set, dominates, elementary_roots, hierarchy, DominanceRecord, HierarchyOptions,
    DEFAULT_DEPTH_CAP, DEFAULT_LEVEL_CAP,
};
use crate::error::Error;
use crate::laws::{check_laws, LawOptions};
use crate::oracle::{agreement, cayley_ball_with_cap, dominance_oracle, Verdict, DEFAULT_BALL_CAP};
use crate::roots::{enumerate_with_cap, inner, minimal_word, Root, RootKey};
use crate::scalar::DEFAULT_TOLERANCE;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATUM: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;
pub const EXIT_LAW: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Auto,
    Exact,
    Approx,
}

/// Dominance hierarchies of Coxeter root systems.
#[derive(Debug, Parser)]
#[command(name = "coxdom", version)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: GlobalOptions,
}

#[derive(Debug, Args, Clone)]
pub struct GlobalOptions {
    /// Output format.
    #[arg(long, value_enum, default_value = "json", global = true)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads (0 lets the runtime decide).
    #[arg(long, env = "COXDOM_THREADS", default_value_t = 0, global = true)]
    pub threads: usize,
    /// Tolerance of the floating-point backend.
    #[arg(long, default_value_t = DEFAULT_TOLERANCE, global = true)]
    pub tolerance: f64,
    /// Numeric backend.
    #[arg(long, value_enum, default_value = "auto", global = true)]
    pub mode: Mode,
    #[arg(long, default_value_t = DEFAULT_RANK_CAP, global = true)]
    pub rank_cap: usize,
    /// Largest allowed level or closure.
    #[arg(long, default_value_t = DEFAULT_LEVEL_CAP, global = true)]
    pub level_cap: usize,
    /// Depth bound for exhausting finite root systems and for descents.
    #[arg(long, default_value_t = DEFAULT_DEPTH_CAP, global = true)]
    pub depth_cap: usize,
    /// Largest allowed Cayley ball.
    #[arg(long, default_value_t = DEFAULT_BALL_CAP, global = true)]
    pub ball_cap: usize,
    /// Record the wall-clock time in the report.
    #[arg(long, global = true)]
    pub timestamp: bool,
}

#[derive(Debug, Subcommand, Clone)]
pub enum Command {
    /// Parse and validate a datum, printing its Gram matrix.
    Validate { datum: PathBuf },
    /// Positive roots up to a depth, with their dominated sets.
    Roots {
        datum: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_depth: usize,
    },
    /// The elementary roots D_0.
    Elementary { datum: PathBuf },
    /// The levels D_0 … D_n.
    Hierarchy {
        datum: PathBuf,
        #[arg(long, default_value_t = 3)]
        levels: usize,
    },
    /// The dominated set of one root.
    Classify {
        datum: PathBuf,
        /// Coefficients in label order, e.g. "3/2,1".
        #[arg(long)]
        x: String,
    },
    /// Whether x dominates y, optionally searching a Cayley ball for a witness.
    Dominates {
        datum: PathBuf,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        /// Ball radius for the oracle.
        #[arg(long)]
        oracle: Option<usize>,
    },
    /// Canonical pair and chain positions of the dihedral subgroup of x and y.
    Dihedral {
        datum: PathBuf,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// Law checks plus oracle agreement.
    Check {
        datum: PathBuf,
        #[arg(long, default_value_t = 3)]
        levels: usize,
        /// Depth of the roots sampled by the law checks.
        #[arg(long, default_value_t = 8)]
        law_depth: usize,
        /// Ball radius for oracle agreement (0 skips it).
        #[arg(long, default_value_t = 8)]
        oracle_radius: usize,
        /// Depth of the roots compared with the oracle.
        #[arg(long, default_value_t = 4)]
        oracle_depth: usize,
        /// Longest element whose inversion set is compared.
        #[arg(long, default_value_t = 6)]
        nset_length: usize,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Roots { .. } => "roots",
            Command::Elementary { .. } => "elementary",
            Command::Hierarchy { .. } => "hierarchy",
            Command::Classify { .. } => "classify",
            Command::Dominates { .. } => "dominates",
            Command::Dihedral { .. } => "dihedral",
            Command::Check { .. } => "check",
        }
    }

    pub fn datum(&self) -> &Path {
        match self {
            Command::Validate { datum }
            | Command::Roots { datum, .. }
            | Command::Elementary { datum }
            | Command::Hierarchy { datum, .. }
            | Command::Classify { datum, .. }
            | Command::Dominates { datum, .. }
            | Command::Dihedral { datum, .. }
            | Command::Check { datum, .. } => datum,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportDocument {
    pub version: String,
    pub timestamp: Option<String>,
    pub command: String,
    pub datum: Value,
    pub backend: String,
    pub tolerance: f64,
    pub result: Value,
}

impl ReportDocument {
    /// Pretty JSON with sorted keys.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        serde_json::to_string_pretty(&value).expect("report serializes") + "\n"
    }
}

/// Rows for csv and table output.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn key_value(pairs: Vec<(&str, String)>) -> Table {
        Table {
            headers: vec!["key".into(), "value".into()],
            rows: pairs.into_iter().map(|(k, v)| vec![k.to_string(), v]).collect(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.headers).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8")
    }

    pub fn to_text(&self) -> String {
        let mut widths: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let line = |cells: &[String]| {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, &w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
                .collect();
            padded.join("  ").trim_end().to_string() + "\n"
        };
        let mut out = line(&self.headers);
        out += &line(&widths.iter().map(|&w| "-".repeat(w)).collect::<Vec<_>>());
        for row in &self.rows {
            out += &line(row);
        }
        out
    }
}

/// Outcome of a run: exit code, report (absent on early failures) and the
/// rendered text that was written.
#[derive(Debug)]
pub struct RunOutcome {
    pub code: i32,
    pub report: Option<ReportDocument>,
    pub rendered: String,
}

struct Rendered {
    result: Value,
    table: Table,
    code: i32,
}

/// Failure with its exit code and message.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Limit(_) => EXIT_LIMIT,
            Error::SelfCheck(_) => EXIT_LAW,
            _ => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(e: Error) -> Failure {
    Failure { code: EXIT_USAGE, message: e.to_string() }
}

/// Parses arguments and runs; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match run(&config) {
        Ok(outcome) => outcome.code,
        Err(f) => {
            eprintln!("coxdom: {}", f.message);
            f.code
        }
    }
}

pub fn load_datum(path: &Path, g: &GlobalOptions) -> Result<CoxeterDatum, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure {
        code: EXIT_DATUM,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    let mode = match g.mode {
        Mode::Auto => ModeChoice::Auto,
        Mode::Exact => ModeChoice::Exact,
        Mode::Approx => ModeChoice::Approx,
    };
    let options = NumericOptions { mode, tolerance: g.tolerance, rank_cap: g.rank_cap };
    CoxeterDatum::parse_with(&text, options)
        .map_err(|e| Failure { code: EXIT_DATUM, message: format!("{}: {e}", path.display()) })
}

/// Runs one command and writes its report.
pub fn run(config: &RunConfig) -> Result<RunOutcome, Failure> {
    let g = &config.global;
    if !(g.tolerance >= 0.0) {
        return Err(Failure { code: EXIT_USAGE, message: "tolerance must be non-negative".into() });
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(g.threads)
        .build()
        .map_err(|e| Failure { code: EXIT_USAGE, message: e.to_string() })?;
    let d = load_datum(config.command.datum(), g)?;
    let rendered = pool.install(|| dispatch(&d, &config.command, g))?;
    let report = ReportDocument {
        version: env!("CARGO_PKG_VERSION").to_string(),
        timestamp: g.timestamp.then(now),
        command: config.command.name().to_string(),
        datum: serde_json::from_str(&d.to_json()).expect("datum json"),
        backend: format!("{:?}", d.backend()).to_lowercase(),
        tolerance: d.eps(),
        result: rendered.result,
    };
    let text = match g.format {
        Format::Json => report.to_json(),
        Format::Csv => rendered.table.to_csv(),
        Format::Table => rendered.table.to_text(),
    };
    match &g.output {
        Some(path) => std::fs::write(path, &text).map_err(|e| Failure {
            code: EXIT_USAGE,
            message: format!("cannot write {}: {e}", path.display()),
        })?,
        None => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(text.as_bytes());
        }
    }
    Ok(RunOutcome { code: rendered.code, report: Some(report), rendered: text })
}

fn now() -> String {
    let secs = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    format!("unix:{secs}")
}

fn coeff_strings(x: &Root) -> Vec<String> {
    x.coeffs().iter().map(ToString::to_string).collect()
}

fn record_json(rec: &DominanceRecord) -> Value {
    json!({
        "coefficients": coeff_strings(&rec.root),
        "depth": rec.depth,
        "n": rec.n,
        "dominated": rec.dominated.iter().map(coeff_strings).collect::<Vec<_>>(),
    })
}

/// The csv/table schema for lists of roots.
fn root_table(d: &CoxeterDatum, records: &[&DominanceRecord]) -> Table {
    let mut headers = vec!["row".to_string(), "depth".into(), "n".into()];
    headers.extend(d.labels().iter().map(|l| format!("c_{l}")));
    headers.extend(["dominated_count".to_string(), "dominated_indices".into()]);
    let rows_by_key: std::collections::HashMap<RootKey, usize> =
        records.iter().enumerate().map(|(i, r)| (r.root.key(d), i)).collect();
    let rows = records
        .iter()
        .enumerate()
        .map(|(i, rec)| {
            let mut indices: Vec<usize> =
                rec.dominated.iter().filter_map(|y| rows_by_key.get(&y.key(d)).copied()).collect();
            indices.sort_unstable();
            let mut row = vec![i.to_string(), rec.depth.to_string(), rec.n.to_string()];
            row.extend(coeff_strings(&rec.root));
            row.push(rec.n.to_string());
            row.push(indices.iter().map(ToString::to_string).collect::<Vec<_>>().join(";"));
            row
        })
        .collect();
    Table { headers, rows }
}

fn parse_root(d: &CoxeterDatum, text: &str) -> Result<Root, Failure> {
    let x = Root::parse(d, text).map_err(usage)?;
    x.sign(d).map_err(usage)?;
    if !crate::roots::is_unit(d, &x).map_err(usage)? {
        return Err(usage(Error::NotARoot(format!("{x} does not have unit norm"))));
    }
    Ok(x)
}

fn records_for(d: &CoxeterDatum, roots: &[Root]) -> Result<Vec<DominanceRecord>, Failure> {
    use rayon::prelude::*;
    Ok(roots.par_iter().map(|x| dominated_set(d, x)).collect::<crate::Result<Vec<_>>>()?)
}

fn dispatch(d: &CoxeterDatum, command: &Command, g: &GlobalOptions) -> Result<Rendered, Failure> {
    let hopts = HierarchyOptions { level_cap: g.level_cap, depth_cap: g.depth_cap };
    match command {
        Command::Validate { .. } => {
            let gram: Vec<Vec<String>> =
                d.gram().iter().map(|row| row.iter().map(ToString::to_string).collect()).collect();
            let mut table = Table { headers: vec!["".into()], rows: vec![] };
            table.headers.extend(d.labels().iter().cloned());
            for (label, row) in d.labels().iter().zip(&gram) {
                let mut r = vec![label.clone()];
                r.extend(row.iter().cloned());
                table.rows.push(r);
            }
            Ok(Rendered {
                result: json!({ "rank": d.rank(), "labels": d.labels(), "gram": gram }),
                table,
                code: EXIT_OK,
            })
        }
        Command::Roots { max_depth, .. } => {
            if *max_depth == 0 {
                return Err(usage(Error::Domain("max-depth must be at least 1".into())));
            }
            let layers = enumerate_with_cap(d, *max_depth, g.level_cap)?;
            let roots: Vec<Root> = layers.iter().cloned().collect();
            let records = records_for(d, &roots)?;
            let table = root_table(d, &records.iter().collect::<Vec<_>>());
            Ok(Rendered {
                result: json!({
                    "max_depth": max_depth,
                    "exhausted": layers.exhausted,
                    "count": records.len(),
                    "layer_sizes": layers.layers.iter().map(Vec::len).collect::<Vec<_>>(),
                    "roots": records.iter().map(record_json).collect::<Vec<_>>(),
                }),
                table,
                code: EXIT_OK,
            })
        }
        Command::Elementary { .. } => {
            let roots = elementary_roots(d, g.level_cap)?;
            let records = records_for(d, &roots)?;
            let finite = !crate::dominance::has_infinite_edge(d, &roots);
            let table = root_table(d, &records.iter().collect::<Vec<_>>());
            Ok(Rendered {
                result: json!({
                    "count": records.len(),
                    "finite_group": finite,
                    "roots": records.iter().map(record_json).collect::<Vec<_>>(),
                }),
                table,
                code: EXIT_OK,
            })
        }
        Command::Hierarchy { levels, .. } => {
            let h = hierarchy(d, *levels, &hopts)?;
            let all: Vec<&DominanceRecord> = h.levels.iter().flat_map(|l| l.roots.iter()).collect();
            let table = root_table(d, &all);
            let levels_json: Vec<Value> = h
                .levels
                .iter()
                .map(|l| {
                    json!({
                        "n": l.n,
                        "size": l.len(),
                        "roots": l.roots.iter().map(record_json).collect::<Vec<_>>(),
                    })
                })
                .collect();
            Ok(Rendered {
                result: json!({ "finite_group": h.finite, "sizes": h.sizes(), "levels": levels_json }),
                table,
                code: EXIT_OK,
            })
        }
        Command::Classify { x, .. } => {
            let x = parse_root(d, x)?;
            let x = x.positive_part(d)?;
            let rec = dominated_set(d, &x)?;
            let (w, a) = minimal_word(d, &x)?;
            let mut result = record_json(&rec);
            result["word"] = json!(w.display(d));
            result["simple"] = json!(d.labels()[a]);
            let table = Table::key_value(vec![
                ("root", x.to_string()),
                ("depth", rec.depth.to_string()),
                ("n", rec.n.to_string()),
                ("word", w.display(d)),
                ("simple", d.labels()[a].clone()),
                ("dominated", rec.dominated.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")),
            ]);
            Ok(Rendered { result, table, code: EXIT_OK })
        }
        Command::Dominates { x, y, oracle, .. } => {
            let x = parse_root(d, x)?;
            let y = parse_root(d, y)?;
            let answer = dominates(d, &x, &y)?;
            let ip = inner(d, &x, &y)?;
            let mut result = json!({
                "x": coeff_strings(&x),
                "y": coeff_strings(&y),
                "dominates": answer,
                "inner": ip.to_string(),
            });
            let mut pairs = vec![("dominates", answer.to_string()), ("inner", ip.to_string())];
            let mut code = EXIT_OK;
            if let Some(radius) = oracle {
                let ball = cayley_ball_with_cap(d, *radius, g.ball_cap)?;
                let verdict = dominance_oracle(d, &ball, &x, &y)?;
                let (label, witness) = match &verdict {
                    Verdict::Consistent => ("consistent", Value::Null),
                    Verdict::Refuted { witness } => (
                        "refuted",
                        json!({ "word": witness.word.display(d), "length": witness.length }),
                    ),
                };
                if answer && verdict.is_refuted() {
                    code = EXIT_LAW;
                }
                pairs.push(("oracle", label.to_string()));
                if let Verdict::Refuted { witness } = &verdict {
                    pairs.push(("witness", witness.word.display(d)));
                }
                result["oracle"] =
                    json!({ "radius": radius, "ball_size": ball.len(), "verdict": label, "witness": witness });
            }
            Ok(Rendered { result, table: Table::key_value(pairs), code })
        }
        Command::Dihedral { x, y, .. } => {
            let x = parse_root(d, x)?;
            let y = parse_root(d, y)?;
            let frame = canonical_pair(d, &x, &y)?;
            let px = chain_position(d, &frame, &x)?;
            let py = chain_position(d, &frame, &y)?;
            let mut result = json!({
                "alpha": coeff_strings(&frame.alpha),
                "beta": coeff_strings(&frame.beta),
                "q": frame.q.to_string(),
                "x_position": { "index": px.index, "family": px.family },
                "y_position": { "index": py.index, "family": py.family },
            });
            let mut pairs = vec![
                ("alpha", frame.alpha.to_string()),
                ("beta", frame.beta.to_string()),
                ("q", frame.q.to_string()),
                ("x", px.to_string()),
                ("y", py.to_string()),
            ];
            let mut code = EXIT_OK;
            let pair = x.key(d) != y.key(d) && dominates(d, &x, &y)?;
            result["dominance_pair"] = json!(pair);
            if pair {
                let rep = verify_dominance_pair(d, &x, &y)?;
                result["opposite_inner"] = json!(rep.opposite_inner);
                result["consecutive"] = json!(rep.consecutive);
                pairs.push(("opposite_inner", rep.opposite_inner.to_string()));
                pairs.push(("consecutive", rep.consecutive.to_string()));
                if !rep.passed() {
                    code = EXIT_LAW;
                }
            }
            Ok(Rendered { result, table: Table::key_value(pairs), code })
        }
        Command::Check { levels, law_depth, oracle_radius, oracle_depth, nset_length, .. } => {
            let h = hierarchy(d, *levels, &hopts)?;
            let lopts = LawOptions { depth_cap: *law_depth, ..LawOptions::default() };
            let laws = check_laws(d, &h, &lopts)?;
            let mut table = Table {
                headers: vec!["law".into(), "checked".into(), "failed".into(), "witness".into()],
                rows: vec![],
            };
            for o in &laws.outcomes {
                table.rows.push(vec![
                    o.name.to_string(),
                    o.checked.to_string(),
                    o.failed.to_string(),
                    o.witnesses.first().cloned().unwrap_or_default(),
                ]);
            }
            let mut passed = laws.passed();
            let mut result = json!({ "sizes": h.sizes(), "laws": laws });
            if *oracle_radius > 0 {
                let ball = cayley_ball_with_cap(d, *oracle_radius, g.ball_cap)?;
                let rep = agreement(d, &ball, *oracle_depth, *nset_length)?;
                let failed = rep.false_positives.len()
                    + rep.missing_witnesses.len()
                    + rep.depth_mismatches.len()
                    + rep.nset_mismatches.len();
                table.rows.push(vec![
                    "oracle_agreement".into(),
                    (rep.pairs + rep.depth_checked + rep.nset_checked).to_string(),
                    failed.to_string(),
                    rep.false_positives
                        .iter()
                        .chain(&rep.missing_witnesses)
                        .chain(&rep.depth_mismatches)
                        .chain(&rep.nset_mismatches)
                        .next()
                        .cloned()
                        .unwrap_or_default(),
                ]);
                passed &= rep.passed();
                result["oracle"] = serde_json::to_value(&rep).expect("report serializes");
            }
            result["passed"] = json!(passed);
            Ok(Rendered { result, table, code: if passed { EXIT_OK } else { EXIT_LAW } })
        }
    }
}
