use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use scaled_trace::galois::{generic_experiment, SnVerdict};
use scaled_trace::groups::{construct_group, group_report};
use scaled_trace::io::{self, IoError};
use scaled_trace::quadform::{equivalent, invariants, SymmetricForm};
use scaled_trace::trace_form::{realize, verify_certificate, SearchPolicy, TraceFormError};
use scaled_trace::BigRational;

#[derive(Parser)]
#[command(name = "scaled-trace", version, about = "Realize rational quadratic forms as scaled trace forms")]
struct Cli {
    /// Seed for every random choice
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Compact single-line JSON instead of indented JSON
    #[arg(long, global = true)]
    json: bool,
    /// Print nothing; the exit status carries the verdict
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct FormInput {
    /// Form JSON file
    file: Option<PathBuf>,
    /// Diagonal form as comma-separated rationals, e.g. 1,-1/2
    #[arg(long, allow_hyphen_values = true)]
    diag: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Find a certificate that the form is a scaled trace form
    Realize {
        #[command(flatten)]
        form: FormInput,
        /// Coefficient bound schedule, comma-separated and increasing
        #[arg(long, value_delimiter = ',')]
        bounds: Option<Vec<u64>>,
        /// Candidates tried per bound
        #[arg(long)]
        tries: Option<u64>,
    },
    /// Check a certificate file
    Verify { file: PathBuf },
    /// Dimension, discriminant, signature and Hasse invariants
    Invariants {
        #[command(flatten)]
        form: FormInput,
    },
    /// Decide whether two forms are isometric over the rationals
    Equivalent {
        /// Form JSON files
        files: Vec<PathBuf>,
        /// Diagonal forms, repeatable
        #[arg(long, allow_hyphen_values = true)]
        diag: Vec<String>,
    },
    /// Galois group evidence for charpoly(A D) with random symmetric A
    Galois {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        diag: Option<String>,
        #[arg(long, default_value_t = 9)]
        bound: u64,
        #[arg(long, default_value_t = 300)]
        primes: usize,
    },
    /// Structural checks on Z/m x| Z/p^k
    GroupVerify {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: Option<u64>,
        /// Enumerate normal subgroups even above the default size limit
        #[arg(long)]
        exhaustive: bool,
    },
}

enum Outcome {
    Success(Value),
    Negative(Value),
}

struct Failure(String);

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure(e.to_string())
    }
}

fn fail<T>(msg: impl ToString) -> Result<T, Failure> {
    Err(Failure(msg.to_string()))
}

fn read_json(path: &PathBuf) -> Result<Value, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    Ok(io::parse_json(&text)?)
}

fn diag_form(list: &str) -> Result<SymmetricForm, Failure> {
    let entries = io::parse_rational_list(list)?;
    SymmetricForm::diagonal(&entries).map_err(|e| Failure(e.to_string()))
}

fn load_form(input: &FormInput) -> Result<SymmetricForm, Failure> {
    match (&input.file, &input.diag) {
        (Some(_), Some(_)) => fail("give either a form file or --diag, not both"),
        (None, None) => fail("a form file or --diag is required"),
        (None, Some(d)) => diag_form(d),
        (Some(path), None) => Ok(io::form_from_json(&read_json(path)?)?),
    }
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Realize { form, bounds, tries } => {
            let d = load_form(form)?;
            let default = SearchPolicy::default();
            let policy = SearchPolicy::new(
                cli.seed,
                bounds.clone().unwrap_or(default.coeff_bound_schedule),
                tries.unwrap_or(default.max_tries_per_bound),
            )
            .map_err(|e| Failure(e.to_string()))?;
            match realize(&d, &policy) {
                Ok(c) => Ok(Outcome::Success(io::certificate_to_json(&c))),
                Err(TraceFormError::SearchExhausted { tries }) => Ok(Outcome::Negative(json!({
                    "error": "search_exhausted",
                    "tries": tries,
                    "seed": cli.seed,
                }))),
                Err(e) => fail(e),
            }
        }
        Command::Verify { file } => {
            let cert = io::certificate_from_json(&read_json(file)?)?;
            Ok(match verify_certificate(&cert) {
                Ok(()) => Outcome::Success(json!({ "valid": true })),
                Err(clause) => Outcome::Negative(json!({ "valid": false, "clause": clause.name() })),
            })
        }
        Command::Invariants { form } => {
            let w = invariants(&load_form(form)?).map_err(|e| Failure(e.to_string()))?;
            Ok(Outcome::Success(io::invariants_to_json(&w)))
        }
        Command::Equivalent { files, diag } => {
            let mut forms = Vec::new();
            for path in files {
                forms.push(io::form_from_json(&read_json(path)?)?);
            }
            for d in diag {
                forms.push(diag_form(d)?);
            }
            let [f1, f2] = forms.as_slice() else {
                return fail(format!("equivalent needs exactly two forms, got {}", forms.len()));
            };
            let eq = equivalent(f1, f2).map_err(|e| Failure(e.to_string()))?;
            let report = json!({ "equivalent": eq });
            Ok(if eq { Outcome::Success(report) } else { Outcome::Negative(report) })
        }
        Command::Galois { n, diag, bound, primes } => {
            let d: Vec<BigRational> = match (diag, n) {
                (Some(list), _) => io::parse_rational_list(list)?,
                (None, Some(n)) => vec![BigRational::from_integer(1.into()); *n],
                (None, None) => return fail("--n or --diag is required"),
            };
            if let Some(n) = n {
                if *n != d.len() {
                    return fail(format!("--n {n} does not match {} diagonal entries", d.len()));
                }
            }
            let r = generic_experiment(&d, *bound, *primes, cli.seed).map_err(|e| Failure(e.to_string()))?;
            let report = io::spec_report_to_json(&r);
            Ok(match r.sn_verdict {
                SnVerdict::Certified => Outcome::Success(report),
                SnVerdict::Inconclusive => Outcome::Negative(report),
            })
        }
        Command::GroupVerify { p, k, m, n, exhaustive } => {
            let g = construct_group(*p, *k, *m).map_err(|e| Failure(e.to_string()))?;
            let r = group_report(&g, *n, *exhaustive).map_err(|e| Failure(e.to_string()))?;
            let report = io::group_report_to_json(&r);
            Ok(if r.passed() { Outcome::Success(report) } else { Outcome::Negative(report) })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let print = |v: &Value| {
        if cli.quiet {
            return;
        }
        let text = if cli.json { serde_json::to_string(v) } else { serde_json::to_string_pretty(v) };
        println!("{}", text.expect("serializable"));
    };
    match run(&cli) {
        Ok(Outcome::Success(v)) => {
            print(&v);
            ExitCode::SUCCESS
        }
        Ok(Outcome::Negative(v)) => {
            print(&v);
            ExitCode::from(1)
        }
        Err(Failure(msg)) => {
            if !cli.quiet {
                eprintln!("error: {msg}");
            }
            ExitCode::from(2)
        }
    }
}
