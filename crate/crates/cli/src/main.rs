use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use torus_weyl::gallery::{gallery, run_gallery};
use torus_weyl::local::{ConductorVector, LocalData, LocalFactors};
use torus_weyl::matroid::{b_infinity, LinearMatroid};
use torus_weyl::rational;
use torus_weyl::report::analyze;
use torus_weyl::schema::{load_spec, parse_rational_matrix, LoadedSpec};
use torus_weyl::torus::Limits;
use torus_weyl::Error;

/// Exact invariants of conductor counting on algebraic tori.
#[derive(Parser)]
#[command(name = "torus-weyl", version, arg_required_else_help = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute A, lambda, Sigma, its strata and deg P for a torus spec.
    Analyze {
        #[command(flatten)]
        input: SpecInput,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Coefficients of the unramified local factor at a place.
    Local {
        #[command(flatten)]
        input: SpecInput,
        /// Residue field size (a prime power coprime to lambda).
        #[arg(long)]
        q: u64,
        /// Frobenius as comma-separated generator indices; empty is the identity.
        #[arg(long, default_value = "")]
        frobenius: String,
        /// Largest weighted conductor exponent to include.
        #[arg(long, default_value_t = 2)]
        cap: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// B_inf of a rational matrix (JSON array of rows; entries integers or "p/q").
    Binf {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run the built-in example gallery.
    Examples {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Args)]
struct SpecInput {
    /// Torus specification (JSON).
    #[arg(long)]
    input: PathBuf,
    /// Cap on the number of distinct coweights.
    #[arg(long)]
    distinct_cap: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Exit status: 1 for unreadable or malformed input, 2 for input that parses
/// but fails validation or a computation.
enum Failure {
    Schema(String),
    Validation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_schema() {
            Failure::Schema(e.to_string())
        } else {
            Failure::Validation(e.to_string())
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Schema(format!("{}: {e}", path.display())))
}

fn load(input: &SpecInput) -> Result<LoadedSpec, Failure> {
    let mut limits = Limits::default();
    if let Some(cap) = input.distinct_cap {
        limits.distinct_cap = cap;
    }
    Ok(load_spec(&read(&input.input)?, limits)?)
}

fn big(x: &impl Display) -> Value {
    let s = x.to_string();
    s.parse::<i64>().map_or(Value::String(s), Value::from)
}

fn parse_word(word: &str) -> Result<Vec<usize>, Failure> {
    word.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| Failure::Schema(format!("frobenius: invalid generator index {s:?}"))))
        .collect()
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Analyze { input, format } => {
            let report = analyze(&load(&input)?)?;
            match format {
                Format::Json => print_json(&serde_json::to_value(&report).expect("serializable")),
                Format::Text => print!("{report}"),
            }
        }
        Command::Local { input, q, frobenius, cap, format } => {
            let spec = load(&input)?;
            let t = &spec.torus;
            let word = parse_word(&frobenius)?;
            let lf = LocalFactors::new(t, LocalData::new(t, q, &word)?);
            let factor = lf.local_factor(cap)?;
            let mut subsets = Vec::new();
            if t.is_faithful() {
                for s in t.sigma_set()? {
                    let c = ConductorVector::new(s.counts.iter().map(|&x| i64::from(x > 0)).collect());
                    let fixed = t.coweights().act(lf.local().frobenius, &s) == s;
                    let a = if fixed { Some(lf.a_count(&s)?) } else { None };
                    subsets.push((s, fixed, a, lf.pi_eq(&c)?));
                }
            }
            let local = lf.local();
            match format {
                Format::Json => print_json(&json!({
                    "q": local.q,
                    "p": local.p,
                    "frobenius": word,
                    "f": local.f,
                    "cap": cap,
                    "coefficients": factor.coefficients.iter()
                        .map(|(e, c)| json!({"e": e, "coefficient": big(c)}))
                        .collect::<Vec<_>>(),
                    "subsets": subsets.iter().map(|(s, fixed, a, pi)| json!({
                        "subset": s.counts,
                        "frobenius_fixed": fixed,
                        "a": a.as_ref().map(big),
                        "pi_eq_indicator": big(pi),
                    })).collect::<Vec<_>>(),
                })),
                Format::Text => {
                    println!("q = {} (p = {}), Frobenius order f = {}", local.q, local.p, local.f);
                    println!("{:>4}  coefficient", "e");
                    for (e, c) in &factor.coefficients {
                        println!("{e:>4}  {c}");
                    }
                    if !subsets.is_empty() {
                        println!();
                        println!("{:<12} {:>6} {:>8} {:>12}", "S", "fixed", "a(S)", "pi_eq(1_S)");
                        for (s, fixed, a, pi) in &subsets {
                            let a = a.as_ref().map_or("-".to_string(), ToString::to_string);
                            println!("{:<12} {:>6} {:>8} {:>12}", s.to_string(), fixed, a, pi);
                        }
                    }
                }
            }
        }
        Command::Binf { input, format } => {
            let (cols, rows) = parse_rational_matrix(&read(&input)?)?;
            let (value, cert) = b_infinity(&LinearMatroid::new(cols, &rows)?)?;
            let subset: Vec<usize> = cert.subset.iter().map(|i| i + 1).collect();
            match format {
                Format::Json => print_json(&json!({
                    "value": rational::format(&value),
                    "certificate": {"subset": subset, "alpha": cert.alpha, "beta": cert.beta},
                })),
                Format::Text => {
                    let list = subset.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
                    println!("B_inf = {}", rational::format(&value));
                    println!("A = {{{list}}} (alpha = {}, beta = {})", cert.alpha, cert.beta);
                }
            }
        }
        Command::Examples { format } => {
            let rows = run_gallery(&gallery());
            match format {
                Format::Json => print_json(&Value::Array(
                    rows.iter().map(|r| json!({"name": r.name, "passed": r.passed, "observed": r.detail})).collect(),
                )),
                Format::Text => {
                    for r in &rows {
                        println!("{}  {:<42} {}", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail);
                    }
                    let passed = rows.iter().filter(|r| r.passed).count();
                    println!("{passed}/{} passed", rows.len());
                }
            }
            if rows.iter().any(|r| !r.passed) {
                return Err(Failure::Validation("gallery mismatch".into()));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Schema(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Validation(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
