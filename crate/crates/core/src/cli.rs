//! Command line front end. Exit codes: 0 success, 1 input or usage error,
//! 2 computed result failed oracle validation.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::catalog::{self, BUILTINS};
use crate::dimpoly::free_term_counts;
use crate::dsl::{parse_system, render_system};
use crate::groebner::BuchbergerOptions;
use crate::operator::Presentation;
use crate::par::Exec;
use crate::pipeline::{compute_scheme_strength, compute_strength, AppliedScheme, ComputeOptions, StrengthReport};
use crate::report::{compare_systems, ReportDocument};
use crate::scheme::SchemeSpec;
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "strength", version, about = "Strength (dimension polynomials) of linear PDE and difference systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute the dimension polynomial of a system or of one of its schemes.
    Compute(ComputeArgs),
    /// Compare two JSON reports; the smaller polynomial is the stronger system.
    Compare { first: PathBuf, second: PathBuf },
    /// Count free terms of order <= r by enumeration and evaluate the polynomial at r.
    OracleCheck {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long = "r")]
        r: u32,
    },
    /// Print the canonical form of a system.
    Render {
        #[command(flatten)]
        source: SourceArgs,
    },
    /// List the built-in systems.
    ListBuiltins,
}

#[derive(Args, Debug)]
struct SourceArgs {
    /// System file in the DSL.
    file: Option<PathBuf>,
    /// Use a built-in system instead of a file.
    #[arg(long, conflicts_with = "file")]
    builtin: Option<String>,
    /// Scheme preset: forward, symmetric or symmetric-space-forward-time.
    #[arg(long)]
    scheme: Option<String>,
    /// Per-operator rule `op=forward|backward|central|central2`; repeatable.
    #[arg(long = "rule")]
    rules: Vec<String>,
    /// Operator comparison sequence, comma separated (default: declaration order).
    #[arg(long, value_delimiter = ',')]
    order: Option<Vec<String>>,
}

#[derive(Args, Debug)]
struct ComputeArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Print the JSON report instead of text.
    #[arg(long)]
    json: bool,
    /// Number of orders past the threshold checked against the oracle.
    #[arg(long, default_value_t = 5)]
    validate_window: u32,
    /// Log every processed S-polynomial pair.
    #[arg(long)]
    trace: bool,
    /// Skip pairs covered by the chain criterion.
    #[arg(long)]
    chain_criterion: bool,
    /// Reduce S-polynomials of equal degree concurrently.
    #[arg(long)]
    parallel_groebner: bool,
    /// Disable all multithreading.
    #[arg(long)]
    sequential: bool,
}

struct Loaded {
    name: String,
    presentation: Presentation,
    scheme: Option<AppliedScheme>,
}

fn load(source: &SourceArgs) -> Result<Loaded, Error> {
    let (name, presentation, builtin) = match (&source.builtin, &source.file) {
        (Some(b), _) => {
            let entry = catalog::builtin(b).ok_or_else(|| Error::UnknownBuiltin(b.clone()))?;
            (b.clone(), entry.presentation(), Some(entry))
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            let doc = parse_system(&text).map_err(Error::Parse)?;
            let name = path.file_stem().map_or_else(|| "system".to_string(), |s| s.to_string_lossy().into_owned());
            (name, doc.presentation, None)
        }
        (None, None) => return Err(Error::Usage("give a system file or --builtin NAME".into())),
    };
    let scheme = if source.scheme.is_some() || !source.rules.is_empty() {
        let m = presentation.operator_count();
        let requested = source.scheme.clone().unwrap_or_else(|| "forward".to_string());
        let preset = builtin.map_or(requested.as_str(), |b| b.resolve_scheme(&requested));
        let spec = SchemeSpec::preset(preset, m)?.with_assignments(&source.rules, &presentation.operator_names)?;
        let label = if source.rules.is_empty() { requested } else { "custom".to_string() };
        Some(AppliedScheme { name: label, spec })
    } else {
        None
    };
    Ok(Loaded { name, presentation, scheme })
}

fn run_compute(loaded: Loaded, options: &ComputeOptions) -> Result<StrengthReport, Error> {
    match loaded.scheme {
        Some(s) => compute_scheme_strength(&loaded.name, &loaded.presentation, s, options),
        None => compute_strength(&loaded.name, &loaded.presentation, options),
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
            } else {
                let _ = write!(out, "{rendered}");
            }
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Error> {
    let io = |e: std::io::Error| Error::Io(e.to_string());
    match command {
        Command::ListBuiltins => {
            for b in &BUILTINS {
                writeln!(out, "{:<10} {}", b.name, b.description).map_err(io)?;
            }
            Ok(EXIT_OK)
        }
        Command::Render { source } => {
            let loaded = load(&source)?;
            let p = match &loaded.scheme {
                Some(s) => crate::scheme::discretize(&loaded.presentation, &s.spec)?,
                None => loaded.presentation,
            };
            write!(out, "{}", render_system(&p)).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Compute(args) => {
            let options = ComputeOptions {
                order: args.source.order.clone(),
                groebner: BuchbergerOptions {
                    chain_criterion: args.chain_criterion,
                    parallel: args.parallel_groebner && !args.sequential,
                    trace: args.trace,
                    track_cofactors: false,
                },
                validate_window: args.validate_window,
                exec: if args.sequential { Exec::Sequential } else { Exec::Parallel },
            };
            let loaded = load(&args.source)?;
            if let Some(s) = &loaded.scheme {
                for d in s.spec.diagnostics(&loaded.presentation.operator_names) {
                    writeln!(err, "warning: {d}").map_err(io)?;
                }
            }
            let report = run_compute(loaded, &options)?;
            let doc = ReportDocument::from_report(&report, args.trace);
            if args.json {
                write!(out, "{}", doc.to_json()).map_err(io)?;
            } else {
                write!(out, "{}", doc.to_text()).map_err(io)?;
            }
            Ok(if doc.validation.ok { EXIT_OK } else { EXIT_VALIDATION })
        }
        Command::Compare { first, second } => {
            let read = |p: &PathBuf| -> Result<ReportDocument, Error> {
                let text = std::fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
                ReportDocument::from_json(&text)
            };
            let (a, b) = (read(&first)?, read(&second)?);
            let verdict = compare_systems(&a, &b)?;
            writeln!(out, "{}: {}(t) = {}", verdict.first, a.function_name(), a.polynomial.standard).map_err(io)?;
            writeln!(out, "{}: {}(t) = {}", verdict.second, b.function_name(), b.polynomial.standard).map_err(io)?;
            writeln!(out, "{}", verdict.message()).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::OracleCheck { source, r } => {
            let options = ComputeOptions { order: source.order.clone(), ..ComputeOptions::default() };
            let loaded = load(&source)?;
            let report = run_compute(loaded, &options)?;
            let counts = free_term_counts(&report.staircase, r, Exec::Parallel);
            let oracle = counts[r as usize];
            let value = report.polynomial.polynomial.eval(&crate::coeff::Rational::from(i64::from(r)));
            writeln!(out, "oracle count at r={r}: {oracle}").map_err(io)?;
            writeln!(out, "polynomial value at r={r}: {value}").map_err(io)?;
            let threshold = report.polynomial.validity_threshold;
            let agrees = value == crate::coeff::Rational::from(oracle as i64);
            if agrees {
                writeln!(out, "agree").map_err(io)?;
                Ok(EXIT_OK)
            } else if r < threshold {
                writeln!(out, "differ below the validity threshold {threshold}").map_err(io)?;
                Ok(EXIT_OK)
            } else {
                writeln!(out, "MISMATCH at or above the validity threshold {threshold}").map_err(io)?;
                Ok(EXIT_VALIDATION)
            }
        }
    }
}
