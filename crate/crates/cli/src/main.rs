use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use iquantum::cartan::{self, CartanDatum};
use iquantum::iqg::embed;
use iquantum::parse::{mentions_u_letters, parse_iexpr, parse_upoly};
use iquantum::udouble::exact_engine;
use iquantum::verify::{run_suite, Method, Suite, SuiteSpec};

#[derive(Parser)]
#[command(name = "iquantum", version, about = "Exact verification of universal iquantum group identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a Cartan datum file or preset and print any violations.
    CheckCartan {
        /// Preset name or path to a JSON Cartan file.
        #[arg(long)]
        cartan: String,
    },
    /// Run a verification suite.
    Verify {
        /// Suite name, or `all`.
        #[arg(long, value_parser = parse_suite)]
        suite: Suite,
        #[arg(long)]
        cartan: String,
        #[arg(long)]
        max_m: Option<i64>,
        #[arg(long)]
        max_n: Option<i64>,
        /// Bound on N and M in the rank-one suite.
        #[arg(long)]
        max_nm: Option<i64>,
        #[arg(long, value_enum, default_value = "both")]
        e: ESet,
        #[arg(long, value_enum, default_value = "exact")]
        method: MethodArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Maximum letters per word during reduction.
        #[arg(long)]
        budget: Option<usize>,
        /// Write the report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Include per-check timings in records output.
        #[arg(long)]
        timing: bool,
        /// Keep weight bases in memory only.
        #[arg(long)]
        no_cache: bool,
    },
    /// Print the canonical form of an expression in Ũ^ı or Ũ.
    Reduce {
        #[arg(long)]
        cartan: String,
        #[arg(long)]
        expr: String,
    },
    /// List the preset Cartan data.
    Presets,
}

#[derive(Clone, Copy, ValueEnum)]
enum ESet {
    Both,
    #[value(name = "+1")]
    Plus,
    #[value(name = "-1")]
    Minus,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Exact,
    Fast,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Records,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse::<Suite>().map_err(|e| e.to_string())
}

/// Failure with its exit code.
struct Exit(u8, String);

fn usage(msg: impl Into<String>) -> Exit {
    Exit(2, msg.into())
}

/// Resolves a preset name or reads a Cartan file; invalid data exits with 1.
fn load_datum(arg: &str) -> Result<CartanDatum, Exit> {
    if cartan::preset_names().contains(&arg) {
        return cartan::preset(arg).map_err(|e| Exit(1, e.to_string()));
    }
    let text = fs::read_to_string(arg).map_err(|e| usage(format!("'{arg}' is neither a preset nor a readable file: {e}")))?;
    let mut raw = CartanDatum::from_json(&text).map_err(|e| Exit(1, format!("malformed Cartan file: {e}")))?;
    let violations = raw.validate();
    if !violations.is_empty() {
        return Err(Exit(1, violations.join("\n")));
    }
    if raw.name.is_empty() {
        raw.name = PathBuf::from(arg).file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    }
    raw.into_datum().map_err(|e| Exit(1, e.to_string()))
}

fn cache_dir() -> Option<PathBuf> {
    if let Some(d) = std::env::var_os("IQUANTUM_CACHE_DIR") {
        return Some(PathBuf::from(d));
    }
    if let Some(d) = std::env::var_os("XDG_CACHE_HOME") {
        return Some(PathBuf::from(d).join("iquantum"));
    }
    std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache").join("iquantum"))
}

fn describe(d: &CartanDatum) -> String {
    let n = d.rank();
    let rows: Vec<String> = (0..n).map(|i| format!("[{}]", (0..n).map(|j| d.c(i, j).to_string()).collect::<Vec<_>>().join(","))).collect();
    let eps: Vec<String> = (0..n).map(|i| d.eps(i).to_string()).collect();
    let tau: Vec<String> = (0..n).map(|i| (d.tau(i) + 1).to_string()).collect();
    format!("{:<12} rank {}  C=[{}]  D=[{}]  tau=[{}]", d.name(), n, rows.join(","), eps.join(","), tau.join(","))
}

fn run(cli: Cli) -> Result<bool, Exit> {
    match cli.command {
        Command::CheckCartan { cartan } => {
            let d = load_datum(&cartan)?;
            println!("valid: {}", describe(&d));
            println!("hash: {}", d.hash_hex());
            Ok(true)
        }
        Command::Presets => {
            for d in cartan::presets() {
                println!("{}", describe(&d));
            }
            Ok(true)
        }
        Command::Reduce { cartan, expr } => {
            let d = load_datum(&cartan)?;
            let eng = exact_engine(&d);
            let bad = |e: iquantum::parse::ParseError| usage(format!("{expr}\n{}^\n{e}", " ".repeat(e.column.saturating_sub(1))));
            let reduced = if mentions_u_letters(&d, &expr).map_err(bad)? {
                eng.reduce(&parse_upoly(&d, &expr).map_err(bad)?)
            } else {
                embed(&eng, &parse_iexpr(&d, &expr).map_err(bad)?)
            };
            let x = reduced.map_err(|e| Exit(1, e.to_string()))?;
            println!("{}", x.to_expr_string());
            Ok(true)
        }
        Command::Verify { suite, cartan, max_m, max_n, max_nm, e, method, seed, budget, out, format, timing, no_cache } => {
            let d = load_datum(&cartan)?;
            let mut spec = SuiteSpec::new(suite, d);
            spec.max_m = max_m;
            spec.max_n = max_n;
            spec.max_nm = max_nm;
            spec.e_set = match e {
                ESet::Both => vec![1, -1],
                ESet::Plus => vec![1],
                ESet::Minus => vec![-1],
            };
            spec.method = match method {
                MethodArg::Exact => Method::Exact,
                MethodArg::Fast => Method::ModularThenExact,
            };
            spec.seed = seed;
            if let Some(b) = budget {
                spec.budget = b;
            }
            spec.cache_dir = if no_cache { None } else { cache_dir() };
            let report = run_suite(&spec).map_err(|e| usage(e.to_string()))?;
            let body = match format {
                Format::Text => report.summary(),
                Format::Records => report.to_records(timing),
            };
            match out {
                Some(path) => {
                    fs::write(&path, &body).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
                    eprintln!("{} checks, {} failed; report written to {}", report.records.len(), report.theorem_failures().len(), path.display());
                }
                None => print!("{body}"),
            }
            Ok(report.all_required_pass())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Exit(code, msg)) => {
            eprintln!("{msg}");
            ExitCode::from(code)
        }
    }
}
