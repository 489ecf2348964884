//! Command-line front end. [`run`] does all the work so tests can drive it
//! without spawning a process.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::Value;

use crate::coefficients::{coefficient_report, convert, format_sig, ExtReal, RangeType};
use crate::constraints::DEFAULT_EPS_COND;
use crate::dsl::{self, DeclarationDisplay, ParseError, Program};
use crate::error::Error;
use crate::oracle::{oracle_bounds, OracleConfig};
use crate::partition::{BoolExpr, Distribution, EventTable};
use crate::solver::{answer_query, check_feasibility, Feasibility, Interval, SolverConfig, Status};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INFEASIBLE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "relcoef", version, about = "Bounds on probabilities and coefficients of relation between events")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print every coefficient for a pair of events under a distribution.
    Eval(EvalArgs),
    /// Convert a value between the P, O and S ranges.
    Convert(ConvertArgs),
    /// Bound every query of a program.
    Solve(SolveArgs),
    /// Decide whether a program's declarations can hold together.
    Check(CheckArgs),
    /// Sample the constrained simplex for a small program.
    Oracle(OracleArgs),
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// 2x2 table `x,y,z,w` = P(A&B), P(A&-B), P(-A&B), P(-A&-B).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "dist", required_unless_present = "dist")]
    pub table: Option<Vec<f64>>,
    /// File with 2^n atom probabilities, first event most significant.
    #[arg(long)]
    pub dist: Option<PathBuf>,
    /// Comma-separated event names for `--dist` (default A, B, C, ...).
    #[arg(long)]
    pub events: Option<String>,
    /// First event expression.
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    /// Second event expression.
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    /// A number or `inf`.
    #[arg(allow_hyphen_values = true)]
    pub value: String,
    pub from: RangeType,
    pub to: RangeType,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub file: PathBuf,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Restarts of the local search for bilinear problems.
    #[arg(long, default_value_t = 64)]
    pub starts: usize,
    #[arg(long, default_value_t = DEFAULT_EPS_COND)]
    pub eps_cond: f64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    pub file: PathBuf,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 64)]
    pub starts: usize,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    pub file: PathBuf,
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-7)]
    pub tol: f64,
    #[arg(long)]
    pub json: bool,
}

/// One row of `solve --json` output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputRecord {
    pub query: String,
    pub family: &'static str,
    pub range: &'static str,
    pub lo: Value,
    pub hi: Value,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_lo: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_hi: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub accepted: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Output {
    pub program: String,
    pub seed: u64,
    pub elapsed_ms: u64,
    pub records: Vec<OutputRecord>,
}

/// `inf` and undefined values have no JSON number; they become strings.
fn json_number(v: f64) -> Value {
    if v == f64::INFINITY {
        Value::from("inf")
    } else if v.is_nan() {
        Value::Null
    } else {
        serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number)
    }
}

fn json_ext(v: ExtReal) -> Value {
    match v {
        ExtReal::Finite(x) => json_number(x),
        ExtReal::PosInf => Value::from("inf"),
        ExtReal::Undefined => Value::from("undef"),
    }
}

fn code_for(e: &Error) -> i32 {
    match e {
        Error::NumericFailure(_) | Error::UnknownFeasibility { .. } => EXIT_NUMERIC,
        _ => EXIT_INPUT,
    }
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: code_for(&e), message: e.to_string() }
    }
}

type CliResult = Result<i32, Failure>;

fn input_error(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_INPUT, message: message.into() }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn parse_error(path: &Path, e: ParseError) -> Failure {
    input_error(format!("{}:{e}", path.display()))
}

fn load(path: &Path, require_query: bool) -> Result<Program, Failure> {
    let src = read(path)?;
    let parsed = if require_query { dsl::parse(&src) } else { dsl::parse_declarations(&src) };
    parsed.map_err(|e| parse_error(path, e))
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::Eval(args) => cmd_eval(&args, out),
        Command::Convert(args) => cmd_convert(&args, out),
        Command::Solve(args) => cmd_solve(&args, out),
        Command::Check(args) => cmd_check(&args, out),
        Command::Oracle(args) => cmd_oracle(&args, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn ok(r: std::io::Result<()>) -> Result<(), Failure> {
    r.map_err(|e| Failure { code: EXIT_INPUT, message: format!("write failed: {e}") })
}

fn default_names(n: usize) -> Vec<String> {
    (0..n).map(|i| ((b'A' + i as u8) as char).to_string()).collect()
}

fn parse_numbers(text: &str) -> Result<Vec<f64>, Failure> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(|l| l.split(|c: char| c.is_whitespace() || c == ','))
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|_| input_error(format!("'{t}' is not a number"))))
        .collect()
}

fn cmd_eval(args: &EvalArgs, out: &mut dyn Write) -> CliResult {
    let (dist, table) = match (&args.table, &args.dist) {
        (Some(t), _) => {
            if t.len() != 4 {
                return Err(input_error(format!("--table takes 4 values, got {}", t.len())));
            }
            let d = crate::partition::dist_from_2x2(t[0], t[1], t[2], t[3])?;
            let names = match &args.events {
                Some(s) => s.split(',').map(|n| n.trim().to_string()).collect(),
                None => default_names(2),
            };
            (d, EventTable::new(names)?)
        }
        (None, Some(path)) => {
            let d = Distribution::new(parse_numbers(&read(path)?)?)?;
            let names = match &args.events {
                Some(s) => s.split(',').map(|n| n.trim().to_string()).collect(),
                None => default_names(d.num_events()),
            };
            let table = EventTable::new(names)?;
            if table.num_atoms() != d.len() {
                return Err(Error::Dimension { expected: table.num_atoms(), found: d.len() }.into());
            }
            (d, table)
        }
        (None, None) => return Err(input_error("one of --table or --dist is required")),
    };
    let expr = |given: &Option<String>, i: usize| -> Result<BoolExpr, Failure> {
        match given {
            Some(s) => dsl::parse_expr(s, &table).map_err(|e| input_error(format!("expression '{s}': {e}"))),
            None if i < table.len() => Ok(BoolExpr::event(table.names()[i].clone())),
            None => Err(input_error("a single-event distribution needs --a and --b")),
        }
    };
    let (a, b) = (expr(&args.a, 0)?, expr(&args.b, 1)?);
    let report = coefficient_report(&dist, &table, &a, &b)?;
    if args.json {
        let rows: Vec<Value> = report
            .iter()
            .map(|c| {
                serde_json::json!({
                    "coefficient": c.spec.to_string(),
                    "family": c.spec.family.name(),
                    "range": c.spec.range.name(),
                    "value": json_ext(c.value),
                })
            })
            .collect();
        let doc = serde_json::json!({ "a": a.to_string(), "b": b.to_string(), "coefficients": rows });
        ok(writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json values serialize")))?;
    } else {
        let width = report.iter().map(|c| c.spec.to_string().len()).max().unwrap_or(0);
        for c in &report {
            ok(writeln!(out, "{:<width$} = {}", c.spec.to_string(), c.value))?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_convert(args: &ConvertArgs, out: &mut dyn Write) -> CliResult {
    let v = match args.value.as_str() {
        "inf" | "+inf" => f64::INFINITY,
        s => s.parse::<f64>().map_err(|_| input_error(format!("'{s}' is not a number")))?,
    };
    let converted = convert(ExtReal::from_f64(v), args.from, args.to)?;
    ok(writeln!(out, "{converted}"))?;
    Ok(EXIT_OK)
}

fn witness(iv: &Interval) -> (Option<Vec<f64>>, Option<Vec<f64>>) {
    match &iv.witnesses {
        Some((lo, hi)) => (Some(lo.as_slice().to_vec()), Some(hi.as_slice().to_vec())),
        None => (None, None),
    }
}

fn record(query: &crate::coefficients::CoeffSpec, result: &Result<Interval, Error>) -> OutputRecord {
    let mut rec = OutputRecord {
        query: query.to_string(),
        family: query.family.name(),
        range: query.range.name(),
        lo: Value::Null,
        hi: Value::Null,
        status: String::new(),
        witness_lo: None,
        witness_hi: None,
        accepted: None,
        error: None,
    };
    match result {
        Ok(iv) => {
            rec.status = iv.status.name().to_string();
            if iv.has_bounds() {
                rec.lo = json_number(iv.lo);
                rec.hi = json_number(iv.hi);
            }
            (rec.witness_lo, rec.witness_hi) = witness(iv);
        }
        Err(e) => {
            rec.status = "ERROR".into();
            rec.error = Some(e.to_string());
        }
    }
    rec
}

fn text_line(query: &str, result: &Result<Interval, Error>) -> String {
    match result {
        Ok(iv) if iv.has_bounds() => format!("{query} = [{}, {}] {}", format_sig(iv.lo), format_sig(iv.hi), iv.status),
        Ok(iv) => format!("{query}: {}", iv.status),
        Err(e) => format!("{query}: error: {e}"),
    }
}

fn cmd_solve(args: &SolveArgs, out: &mut dyn Write) -> CliResult {
    let program = load(&args.file, true)?;
    let cfg = SolverConfig { seed: args.seed, starts: args.starts, eps_cond: args.eps_cond, ..SolverConfig::default() };
    let started = Instant::now();
    let answers = answer_query(&program, &cfg)?;
    let elapsed_ms = started.elapsed().as_millis() as u64;
    let mut code = EXIT_OK;
    for a in &answers {
        let c = match &a.result {
            Ok(iv) if iv.status == Status::Infeasible => EXIT_INFEASIBLE,
            Ok(_) => EXIT_OK,
            Err(e) => code_for(e),
        };
        code = code.max(c);
    }
    if args.json {
        let doc = Output {
            program: args.file.display().to_string(),
            seed: args.seed,
            elapsed_ms,
            records: answers.iter().map(|a| record(&a.query, &a.result)).collect(),
        };
        ok(writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("records serialize")))?;
    } else {
        for a in &answers {
            ok(writeln!(out, "{}", text_line(&a.query.to_string(), &a.result)))?;
        }
    }
    Ok(code)
}

fn cmd_check(args: &CheckArgs, out: &mut dyn Write) -> CliResult {
    let program = load(&args.file, false)?;
    let cfg = SolverConfig { seed: args.seed, starts: args.starts, ..SolverConfig::default() };
    match check_feasibility(&program, &cfg)? {
        Feasibility::Feasible(d) => {
            let atoms: Vec<String> = d.as_slice().iter().map(|v| format_sig(*v)).collect();
            ok(writeln!(out, "feasible"))?;
            ok(writeln!(out, "example: [{}]", atoms.join(", ")))?;
            Ok(EXIT_OK)
        }
        Feasibility::Infeasible { subsystem } => {
            ok(writeln!(out, "infeasible"))?;
            if subsystem.is_empty() {
                ok(writeln!(out, "the bilinear constraints admit no point"))?;
            } else {
                ok(writeln!(out, "conflicting declarations:"))?;
                for i in subsystem {
                    let line = program.declaration_lines.get(i).copied().unwrap_or(0);
                    ok(writeln!(out, "  line {line}: {}", DeclarationDisplay(&program.declarations[i])))?;
                }
            }
            Ok(EXIT_INFEASIBLE)
        }
    }
}

fn cmd_oracle(args: &OracleArgs, out: &mut dyn Write) -> CliResult {
    let program = load(&args.file, true)?;
    let cfg = OracleConfig { samples: args.samples, seed: args.seed, tol: args.tol, ..OracleConfig::default() };
    let started = Instant::now();
    let report = oracle_bounds(&program, &cfg)?;
    let elapsed_ms = started.elapsed().as_millis() as u64;
    if args.json {
        let records = report
            .answers
            .iter()
            .map(|a| {
                let result = match &a.interval {
                    Some(iv) => Ok(iv.clone()),
                    None => Err(Error::Domain("no feasible sample found".into())),
                };
                let mut rec = record(&a.query, &result);
                if a.interval.is_none() {
                    rec.status = "NO_SAMPLE".into();
                    rec.error = None;
                }
                rec.accepted = Some(a.defined);
                rec
            })
            .collect();
        let doc = Output { program: args.file.display().to_string(), seed: args.seed, elapsed_ms, records };
        ok(writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("records serialize")))?;
    } else {
        ok(writeln!(out, "accepted {} of {} samples", report.accepted, report.samples))?;
        for a in &report.answers {
            let line = match &a.interval {
                Some(iv) => format!("{} ~ [{}, {}] {}", a.query, format_sig(iv.lo), format_sig(iv.hi), iv.status),
                None => format!("{}: no feasible sample found", a.query),
            };
            ok(writeln!(out, "{line}"))?;
        }
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let cli = Cli::try_parse_from(std::iter::once("relcoef").chain(args.iter().copied())).unwrap();
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(cli, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn eval_uniform_table() {
        let (code, out, _) = run_args(&["eval", "--table", "0.25,0.25,0.25,0.25"]);
        assert_eq!(code, 0);
        assert!(out.lines().any(|l| l.starts_with("Q(A|B)") && l.ends_with("= 1")), "{out}");
        assert!(out.lines().any(|l| l.starts_with("FS(A:B)") && l.ends_with("= 0")), "{out}");
    }

    #[test]
    fn eval_renders_inf() {
        let (code, out, _) = run_args(&["eval", "--table", "0.5,0.5,0,0"]);
        assert_eq!(code, 0);
        assert!(out.lines().any(|l| l.starts_with("O(A|B)") && l.ends_with("= inf")), "{out}");
    }

    #[test]
    fn eval_rejects_bad_table() {
        let (code, _, err) = run_args(&["eval", "--table", "0.5,0.5,0.5,0"]);
        assert_eq!(code, EXIT_INPUT);
        assert!(err.contains("sum"), "{err}");
    }

    #[test]
    fn convert_examples() {
        assert_eq!(run_args(&["convert", "0.75", "P", "O"]).1.trim(), "3");
        assert_eq!(run_args(&["convert", "inf", "O", "S"]).1.trim(), "1");
        assert_eq!(run_args(&["convert", "-0.5", "S", "P"]).1.trim(), "0.25");
        assert_eq!(run_args(&["convert", "1.5", "P", "O"]).0, EXIT_INPUT);
    }
}
