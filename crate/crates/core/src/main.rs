use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use parmoment::calogero::verify_cm;
use parmoment::commands::{cmd_single, Single};
use parmoment::components::{enumerate_components, verify_component};
use parmoment::exec::Exec;
use parmoment::json::CliError;
use parmoment::report::SCHEMA_VERSION;
use parmoment::sweep::cmd_sweep;
use parmoment::{ComponentIndex, ParabolicContext, Rat};

#[derive(Parser)]
#[command(
    name = "parmoment",
    version,
    about = "Exact verification of parabolic moment map fibers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Randomized verification of one composition.
    Verify {
        #[command(subcommand)]
        suite: Suite,
    },
    /// Every suite over every composition of n.
    Sweep {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        run: RunArgs,
    },
    /// tr s^2 of a Calogero-Moser representative and its per-block terms.
    Hamiltonian {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        rho: Vec<String>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        sigma: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        alpha: Vec<usize>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Moment map of a quadruple.
    Moment(InputArgs),
    /// Jordan P-semicanonical form of r.
    Semicanonical(InputArgs),
    /// Per-block spectrum of r.
    Spec(InputArgs),
    /// Component indices, or a representative.
    Components(InputArgs),
    /// Calogero-Moser representative with its point checks.
    Cm(InputArgs),
}

#[derive(Subcommand)]
enum Suite {
    /// Zero-fiber components: every index a, or the one given by --component.
    Components {
        #[command(flatten)]
        ctx: ContextArgs,
        #[arg(long, value_delimiter = ',')]
        component: Option<Vec<usize>>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Calogero-Moser fiber representatives.
    Cm {
        #[command(flatten)]
        ctx: ContextArgs,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Args)]
struct ContextArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    alpha: Vec<usize>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, default_value_t = 50)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Permit more than five blocks; results are labeled "conjecture regime".
    #[arg(long)]
    allow_conjecture: bool,
    /// Run trials on one thread.
    #[arg(long)]
    sequential: bool,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct OutArgs {
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct InputArgs {
    /// JSON input file; stdin when omitted.
    #[arg(long)]
    input: Option<PathBuf>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
}

enum Failure {
    Usage(String),
    Input(CliError),
}

impl RunArgs {
    fn exec(&self) -> Exec {
        if self.sequential {
            Exec::Sequential
        } else {
            Exec::Parallel
        }
    }
}

fn context(args: &ContextArgs, allow_conjecture: bool) -> Result<ParabolicContext, Failure> {
    ParabolicContext::new(args.n, &args.alpha, allow_conjecture)
        .map_err(|e| Failure::Input(e.into()))
}

fn emit(out: &OutArgs, value: &Value) -> Result<(), Failure> {
    let Format::Json = out.format;
    let text = serde_json::to_string_pretty(value).expect("JSON values serialize") + "\n";
    match &out.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_input(args: &InputArgs) -> Result<Value, Failure> {
    let text = match &args.input {
        Some(path) => fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?,
        None => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Failure::Usage(format!("cannot read stdin: {e}")))?;
            s
        }
    };
    serde_json::from_str(&text).map_err(|e| {
        Failure::Input(CliError::Schema {
            pointer: String::new(),
            message: format!("invalid JSON: {e}"),
        })
    })
}

fn parse_rats(flag: &str, xs: &[String]) -> Result<Vec<Value>, Failure> {
    xs.iter()
        .map(|x| {
            Rat::from_str(x.trim())
                .map(|r| json!(r.to_string()))
                .map_err(|_| Failure::Usage(format!("--{flag}: {x:?} is not a rational")))
        })
        .collect()
}

/// Returns whether every check passed.
fn run(cli: Cli) -> Result<bool, Failure> {
    match cli.command {
        Command::Verify {
            suite:
                Suite::Components {
                    ctx,
                    component,
                    run,
                },
        } => {
            let c = context(&ctx, run.allow_conjecture)?;
            let indices = match component {
                Some(a) => vec![ComponentIndex(a)],
                None => enumerate_components(&c),
            };
            let reports = indices
                .iter()
                .map(|a| verify_component(&c, a, run.trials, run.seed, run.exec()))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| Failure::Input(e.into()))?;
            let passed = reports.iter().all(|r| r.all_passed());
            emit(
                &run.out,
                &json!({ "schema_version": SCHEMA_VERSION, "all_passed": passed, "reports": reports }),
            )?;
            Ok(passed)
        }
        Command::Verify {
            suite: Suite::Cm { ctx, run },
        } => {
            let c = context(&ctx, run.allow_conjecture)?;
            let report = verify_cm(&c, run.trials, run.seed, run.exec());
            emit(
                &run.out,
                &serde_json::to_value(&report).expect("report serializes"),
            )?;
            Ok(report.all_passed())
        }
        Command::Sweep { n, run } => {
            let report = cmd_sweep(n, run.trials, run.seed, run.allow_conjecture, run.exec());
            emit(
                &run.out,
                &serde_json::to_value(&report).expect("report serializes"),
            )?;
            Ok(report.all_passed)
        }
        Command::Hamiltonian {
            rho,
            sigma,
            alpha,
            out,
        } => {
            let input = json!({
                "alpha": alpha,
                "rho": parse_rats("rho", &rho)?,
                "sigma": parse_rats("sigma", &sigma)?,
            });
            let value = cmd_single(Single::Hamiltonian, &input).map_err(Failure::Input)?;
            emit(&out, &value)?;
            Ok(true)
        }
        Command::Moment(args) => single(Single::Moment, &args),
        Command::Semicanonical(args) => single(Single::Semicanonical, &args),
        Command::Spec(args) => single(Single::Spec, &args),
        Command::Components(args) => single(Single::Components, &args),
        Command::Cm(args) => single(Single::Cm, &args),
    }
}

fn single(kind: Single, args: &InputArgs) -> Result<bool, Failure> {
    let input = read_input(args)?;
    let value = cmd_single(kind, &input).map_err(Failure::Input)?;
    let passed = value
        .get("report")
        .and_then(|r| r.get("checks"))
        .and_then(Value::as_array)
        .is_none_or(|checks| checks.iter().all(|c| c["status"] == "pass"));
    emit(&args.out, &value)?;
    Ok(passed)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Input(e)) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(2)
        }
    }
}
