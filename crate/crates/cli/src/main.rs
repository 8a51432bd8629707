//! `hypersum`: Gosper, Zeilberger, WZ checks, exact sums and series from
//! the command line.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 proven not summable,
//! 3 search bound exhausted, 4 verification failure.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use thiserror::Error;

use hypersum::gosper::{gosper_antidifference, GosperError, GosperResult};
use hypersum::hyperterm::{parse_linear, parse_term, HyperTerm, LinearForm, ParamBinding, ParseError};
use hypersum::series::known_gf;
use hypersum::verify::{
    grid_points, lower_boundary_vanishes, oracle_sum, run_identity_suite, wz_identity_holds, Manifest,
    WzPair,
};
use hypersum::zeilberger::{creative_telescope, sum_recurrence_natural, Recurrence, ZeilError};

#[derive(Parser, Debug)]
#[command(name = "hypersum", version, about = "Exact hypergeometric summation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args, Debug, Clone)]
struct Opts {
    /// Bind a parameter, e.g. `--param r=3` (repeatable)
    #[arg(long = "param", value_name = "NAME=INT", global = true, value_parser = parse_binding)]
    params: Vec<(char, i64)>,
    /// Largest recurrence order tried by `zeil`
    #[arg(long, default_value_t = 6, global = true)]
    jmax: usize,
    /// Series truncation order
    #[arg(long, default_value_t = 64, global = true)]
    order: usize,
    /// One JSON record per line; integers are decimal strings
    #[arg(long, global = true)]
    machine: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Indefinite summation in k: antidifference certificate or a proof there is none
    Gosper { term: String },
    /// Creative telescoping: recurrence in n for sum_k F(n,k)
    Zeil { term: String },
    /// Check an operator relation sum_j op_j F(n+j,k) = G(n,k+1) - G(n,k)
    WzCheck {
        f: String,
        g: String,
        /// Operator as a recurrence, e.g. "w(n+1) - w(n) = 0"
        #[arg(long, default_value = "w(n+1) - w(n) = 0")]
        operator: String,
        /// Parameter range checked, e.g. `--range r=1..8` (repeatable)
        #[arg(long = "range", value_name = "NAME=LO..HI", value_parser = parse_range)]
        ranges: Vec<(char, i64, i64)>,
    },
    /// Exact sum_{k=lo}^{hi} F(n,k) by direct evaluation
    Sum {
        term: String,
        #[arg(long, default_value = "0")]
        lo: String,
        #[arg(long, default_value = "n")]
        hi: String,
        /// A single n or a range LO..HI
        #[arg(long, default_value = "0..10")]
        n: String,
    },
    /// Coefficients of catalan, central_binomial or ballot(k)
    Series { name: String },
    /// Run an identity manifest
    Suite { manifest: std::path::PathBuf },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{err}\n  {src}\n  {caret}^")]
    Parse { src: String, err: ParseError, caret: String },
    #[error("no recurrence of order <= {0}")]
    Exhausted(usize),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Parse { .. } => 1,
            CliError::Exhausted(_) => 3,
        }
    }
}

fn parse_binding(s: &str) -> Result<(char, i64), String> {
    let (name, v) = s.split_once('=').ok_or("expected NAME=INT")?;
    let mut cs = name.trim().chars();
    match (cs.next(), cs.next()) {
        (Some(c), None) if c.is_ascii_lowercase() => {
            Ok((c, v.trim().parse().map_err(|_| format!("'{v}' is not an integer"))?))
        }
        _ => Err(format!("bad parameter name '{name}'")),
    }
}

fn parse_range(s: &str) -> Result<(char, i64, i64), String> {
    let (name, r) = s.split_once('=').ok_or("expected NAME=LO..HI")?;
    let (c, _) = parse_binding(&format!("{name}=0"))?;
    let (lo, hi) = int_range(r)?;
    Ok((c, lo, hi))
}

fn int_range(s: &str) -> Result<(i64, i64), String> {
    let int = |x: &str| x.trim().parse::<i64>().map_err(|_| format!("'{x}' is not an integer"));
    match s.split_once("..") {
        Some((a, b)) => Ok((int(a)?, int(b)?)),
        None => int(s).map(|v| (v, v)),
    }
}

fn term(src: &str) -> Result<HyperTerm, CliError> {
    parse_term(src).map_err(|err| caret(src, err))
}

fn linear(src: &str) -> Result<LinearForm, CliError> {
    parse_linear(src).map_err(|err| caret(src, err))
}

fn caret(src: &str, err: ParseError) -> CliError {
    let caret = " ".repeat(src[..err.pos.min(src.len())].chars().count());
    CliError::Parse {
        src: src.to_string(),
        err,
        caret,
    }
}

fn binding(opts: &Opts) -> Result<ParamBinding, CliError> {
    let mut b = ParamBinding::new();
    for &(c, v) in &opts.params {
        b.insert(c, v).map_err(|e| CliError::Usage(e.to_string()))?;
    }
    Ok(b)
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn emit(value: serde_json::Value) {
    println!("{value}");
}

fn cmd_gosper(src: &str, opts: &Opts) -> Result<u8, CliError> {
    let f = term(src)?;
    let b = binding(opts)?;
    let result = gosper_antidifference(&f, &b).map_err(|e| match e {
        GosperError::ZeroTerm => usage("the zero term is trivially summable"),
        e => usage(e),
    })?;
    match result {
        GosperResult::Summable(cert) => {
            let g = cert.antidifference(&f.concrete(&b).map_err(usage)?);
            if opts.machine {
                emit(json!({
                    "kind": "gosper",
                    "term": src,
                    "summable": true,
                    "certificate": cert.record(),
                    "G": g.to_string(),
                }));
            } else {
                println!("{}", cert.text());
                println!("G(n,k) = {g}");
            }
            Ok(0)
        }
        GosperResult::NotSummable => {
            if opts.machine {
                emit(json!({"kind": "gosper", "term": src, "summable": false}));
            } else {
                println!("not Gosper-summable");
            }
            Ok(2)
        }
    }
}

fn cmd_zeil(src: &str, opts: &Opts) -> Result<u8, CliError> {
    let f = term(src)?;
    let b = binding(opts)?;
    let cert = creative_telescope(&f, opts.jmax, &b).map_err(|e| match e {
        ZeilError::NoRecurrenceFound(j) => CliError::Exhausted(j),
        e => usage(e),
    })?;
    let natural = sum_recurrence_natural(&f, &cert, &b);
    if opts.machine {
        emit(json!({
            "kind": "zeilberger",
            "term": src,
            "certificate": cert.record(),
            "natural_boundaries": natural.is_ok(),
        }));
        return Ok(0);
    }
    match &natural {
        Ok(rec) => println!("recurrence: {rec}"),
        Err(_) => println!("telescoping relation: {}", cert.recurrence),
    }
    println!("certificate: {}", cert.certificate_text());
    match natural {
        Ok(_) => println!("boundary: natural (F and R*F vanish outside the window, sums checked)"),
        Err(e) => println!("boundary: not natural ({e}); the relation holds for the summand only"),
    }
    Ok(0)
}

fn cmd_wz(f: &str, g: &str, op: &str, ranges: &[(char, i64, i64)], opts: &Opts) -> Result<u8, CliError> {
    let operator: Recurrence = op.parse().map_err(usage)?;
    let pair = WzPair {
        f: term(f)?,
        g: term(g)?,
        operator,
    };
    let base = binding(opts)?;
    let mut grid = Vec::new();
    for point in grid_points(ranges) {
        let mut b = base.clone();
        for (c, v) in point {
            b.insert(c, v).map_err(usage)?;
        }
        grid.push(b);
    }
    let mut failure = None;
    for b in &grid {
        let identity = wz_identity_holds(&pair, b).map_err(usage)?;
        let boundary = lower_boundary_vanishes(&pair, b).map_err(usage)?;
        if !identity || !boundary {
            let what = if !identity { "operator identity" } else { "G(n,0) = 0" };
            failure = Some((b.to_string(), what));
            break;
        }
    }
    if opts.machine {
        emit(json!({
            "kind": "wz",
            "bindings": grid.len().to_string(),
            "verified": failure.is_none(),
            "failure": failure.as_ref().map(|(b, w)| format!("{w} fails at {b}")),
        }));
    } else {
        match &failure {
            None => println!("verified on {} binding(s)", grid.len()),
            Some((b, w)) => println!("{w} fails at {}", if b.is_empty() { "(no parameters)" } else { b }),
        }
    }
    Ok(if failure.is_none() { 0 } else { 4 })
}

fn cmd_sum(src: &str, lo: &str, hi: &str, n: &str, opts: &Opts) -> Result<u8, CliError> {
    let f = term(src)?;
    let (lo, hi) = (linear(lo)?, linear(hi)?);
    if lo.coeff_k != 0 || hi.coeff_k != 0 {
        return Err(usage("bounds may not depend on k"));
    }
    let (a, b) = int_range(n).map_err(CliError::Usage)?;
    let binding = binding(opts)?;
    for n in a..=b {
        let v = oracle_sum(&f, n, &lo, &hi, &binding).map_err(usage)?;
        if opts.machine {
            emit(json!({"kind": "sum", "n": n.to_string(), "value": v.to_string()}));
        } else {
            println!("n={n}: {v}");
        }
    }
    Ok(0)
}

fn cmd_series(name: &str, opts: &Opts) -> Result<u8, CliError> {
    let s = known_gf(name, opts.order).map_err(usage)?;
    if opts.machine {
        let coeffs: Vec<String> = s.coeffs().iter().map(|c| c.to_string()).collect();
        emit(json!({"kind": "series", "name": name, "order": opts.order.to_string(), "coeffs": coeffs}));
    } else {
        print!("{}", s.dump());
    }
    Ok(0)
}

fn cmd_suite(path: &std::path::Path, opts: &Opts) -> Result<u8, CliError> {
    let src = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let manifest = Manifest::from_toml(&src).map_err(usage)?;
    if manifest.case.is_empty() {
        eprintln!("warning: {} has no cases", path.display());
    }
    let report = run_identity_suite(&manifest);
    if opts.machine {
        print!("{}", report.json_lines());
    } else {
        print!("{}", report.table());
    }
    Ok(if report.all_passed() { 0 } else { 4 })
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let opts = &cli.opts;
    match &cli.command {
        Command::Gosper { term } => cmd_gosper(term, opts),
        Command::Zeil { term } => cmd_zeil(term, opts),
        Command::WzCheck { f, g, operator, ranges } => cmd_wz(f, g, operator, ranges, opts),
        Command::Sum { term, lo, hi, n } => cmd_sum(term, lo, hi, n, opts),
        Command::Series { name } => cmd_series(name, opts),
        Command::Suite { manifest } => cmd_suite(manifest, opts),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
