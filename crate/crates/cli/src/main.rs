use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use tausys::tau_gl2::TauTable2;
use tausys::tau_gl3::TauTable3;
use tausys::verify::{self, RunConfig, Selection};
use tausys::{Error, Window};

#[derive(Parser)]
#[command(name = "tausys", version, about = "Tau functions, Birkhoff factors and identity checks for GL2 and GL3 loop groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate tau functions for k from -1 to kmax (and l from -1 to lmax when n = 3).
    Tau {
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=3))]
        n: u8,
        #[arg(long, default_value_t = 3)]
        kmax: i64,
        #[arg(long, default_value_t = 1)]
        lmax: i64,
        #[arg(long, default_value = "0..0", value_parser = parse_range, allow_hyphen_values = true)]
        alpha: (i64, i64),
        #[arg(long, default_value = "0..0", value_parser = parse_range, allow_hyphen_values = true)]
        beta: (i64, i64),
        #[arg(long, default_value = "-4..4", value_parser = parse_range, allow_hyphen_values = true)]
        window: (i64, i64),
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one verification suite, or `all`, and write the JSON report.
    Verify {
        suite: String,
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        window: Option<(i64, i64)>,
        #[arg(long)]
        kmax: Option<i64>,
        #[arg(long)]
        lmax: Option<i64>,
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        alpha: Option<(i64, i64)>,
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        beta: Option<(i64, i64)>,
        /// Number of negative powers of z checked in Birkhoff factors.
        #[arg(long)]
        truncation: Option<i64>,
        /// Expansion order for correlation functions.
        #[arg(long)]
        order: Option<i32>,
        /// Largest determinant size in the determinant identity suite.
        #[arg(long)]
        max: Option<usize>,
        /// Number of random substitutions.
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Record wall time per case (makes reports differ between runs).
        #[arg(long)]
        timings: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parses `lo..hi` or a single integer.
fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let parse = |t: &str| t.trim().parse::<i64>().map_err(|_| format!("`{t}` is not an integer"));
    match s.split_once("..") {
        Some((a, b)) => Ok((parse(a)?, parse(b)?)),
        None => parse(s).map(|v| (v, v)),
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> std::io::Result<()> {
    match out {
        Some(p) => fs::write(p, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn tau_table(n: u8, kmax: i64, lmax: i64, alpha: (i64, i64), beta: (i64, i64), window: Window, format: Format) -> tausys::Result<String> {
    let config = RunConfig {
        window: Some(window),
        kmax: Some(kmax),
        lmax: Some(lmax),
        alpha: Some(alpha),
        beta: Some(beta),
        ..RunConfig::default()
    };
    config.validate()?;
    let alphas: Vec<i64> = (alpha.0..=alpha.1).collect();
    let betas: Vec<i64> = (beta.0..=beta.1).collect();
    let (header, rows): (Vec<&str>, Vec<Vec<String>>) = if n == 2 {
        let rows = TauTable2::new(window).rows(kmax, &alphas);
        (
            vec!["k", "alpha", "tau"],
            rows.into_iter().map(|(k, a, p)| vec![k.to_string(), a.to_string(), p.to_string()]).collect(),
        )
    } else {
        let rows = TauTable3::new(window).rows(kmax, lmax, &alphas, &betas)?;
        (
            vec!["k", "l", "alpha", "beta", "tau"],
            rows.into_iter()
                .map(|(k, l, a, b, p)| vec![k.to_string(), l.to_string(), a.to_string(), b.to_string(), p.to_string()])
                .collect(),
        )
    };
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let to_err = |e: csv::Error| Error::Config(e.to_string());
            w.write_record(&header).map_err(to_err)?;
            for r in &rows {
                w.write_record(r).map_err(to_err)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
        Format::Json => {
            let objs: Vec<serde_json::Value> = rows
                .iter()
                .map(|r| {
                    let mut m = serde_json::Map::new();
                    for (h, v) in header.iter().zip(r) {
                        let value = if *h == "tau" { json!(v) } else { json!(v.parse::<i64>().expect("integer column")) };
                        m.insert(h.to_string(), value);
                    }
                    serde_json::Value::Object(m)
                })
                .collect();
            let mut s = serde_json::to_string_pretty(&json!({ "n": n, "window": [window.lo, window.hi], "rows": objs }))
                .expect("table serializes");
            s.push('\n');
            Ok(s)
        }
    }
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn exit_for(e: &Error) -> u8 {
    match e {
        Error::Config(_) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = verify::init_threads() {
        return fail(2, e);
    }
    match cli.command {
        Command::Tau { n, kmax, lmax, alpha, beta, window, format, out } => {
            match tau_table(n, kmax, lmax, alpha, beta, Window::new(window.0, window.1), format) {
                Ok(text) => match emit(&out, &text) {
                    Ok(()) => ExitCode::SUCCESS,
                    Err(e) => fail(2, e),
                },
                Err(e) => fail(exit_for(&e), e),
            }
        }
        Command::Verify { suite, window, kmax, lmax, alpha, beta, truncation, order, max, trials, seed, timings, out } => {
            let selection: Selection = match suite.parse() {
                Ok(s) => s,
                Err(e) => return fail(2, e),
            };
            let config = RunConfig {
                window: window.map(|(lo, hi)| Window::new(lo, hi)),
                kmax,
                lmax,
                alpha,
                beta,
                truncation,
                order,
                max_size: max,
                trials,
                seed,
                timings,
            };
            let report = match verify::run(selection, &config) {
                Ok(r) => r,
                Err(e) => return fail(exit_for(&e), e),
            };
            let mut text = report.to_json();
            text.push('\n');
            if let Err(e) = emit(&out, &text) {
                return fail(2, e);
            }
            for c in report.failures() {
                eprintln!("FAIL {} {} {:?}: {}", c.suite, c.name, c.params, c.witness.as_deref().unwrap_or(""));
            }
            eprintln!("{}: {} cases, {} failed", report.suite, report.total, report.failed);
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
