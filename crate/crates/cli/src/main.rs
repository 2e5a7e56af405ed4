use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

mod commands;
mod table;

use commands::Outcome;

/// Numerics for rearrangement-invariant spaces and Sobolev embeddings on
/// Maz'ya domains.
#[derive(Debug, Parser)]
#[command(name = "rispace", version)]
struct Cli {
    #[command(flatten)]
    run: RunArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Grid as `t_min,points_per_decade`.
    #[arg(long, global = true, env = "RISPACE_GRID", default_value = "1e-30,64")]
    grid: String,
    /// Write the output here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Seed for the random members of test families.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OpKind {
    Copson,
    Sup,
    Dilate,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Norm of a function in a space.
    Norm {
        #[arg(long)]
        space: String,
        /// `c*t^a*log^b;...`, or `@file.csv` with columns `t,value`.
        #[arg(long = "fn")]
        func: String,
    },
    /// Non-increasing rearrangement and maximal function on the grid.
    Rearrange {
        #[arg(long = "fn")]
        func: String,
    },
    /// Fundamental function of a space.
    Fundamental {
        #[arg(long)]
        space: String,
    },
    /// The reduced one-dimensional inequality for an embedding.
    Embed {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        domain: String,
        #[arg(long)]
        target: String,
        /// Add the witness `t^{-m(1-alpha)} (log 2/t)^beta` to the family.
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<f64>,
        #[arg(long, default_value_t = 100)]
        random: usize,
    },
    /// Operator norm estimate under grid refinement.
    Opnorm {
        #[arg(long, value_enum)]
        op: OpKind,
        #[arg(long)]
        domain: String,
        #[arg(long)]
        target: String,
        #[arg(long)]
        m: Option<u32>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long, default_value_t = 100)]
        random: usize,
    },
    /// Volume and profile of the model domain.
    Mazya {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long, default_value_t = 101)]
        points: usize,
    },
    /// Fundamental function bounds for the space induced by `Y` and `t^alpha`.
    Thm31 {
        /// Fundamental function of `Y` as `c*t^a*log^b;...`.
        #[arg(long = "phi-y", allow_hyphen_values = true)]
        phi_y: String,
        #[arg(long)]
        alpha: f64,
    },
    /// Nonexistence certificate for a largest Orlicz domain.
    Witness {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        q: String,
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<f64>,
        /// Also write the `(t, u, S)` curve as CSV here.
        #[arg(long)]
        curve: Option<PathBuf>,
    },
    /// Optimal targets for the critical Lorentz domains across `q`.
    Report {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        alpha: f64,
        /// Values of `q`; defaults to `1, 1/(m(1-alpha)), inf`.
        #[arg(long, value_delimiter = ',')]
        q: Vec<String>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Norm { .. } => "norm",
            Command::Rearrange { .. } => "rearrange",
            Command::Fundamental { .. } => "fundamental",
            Command::Embed { .. } => "embed",
            Command::Opnorm { .. } => "opnorm",
            Command::Mazya { .. } => "mazya",
            Command::Thm31 { .. } => "thm31",
            Command::Witness { .. } => "witness",
            Command::Report { .. } => "report",
        }
    }
}

#[derive(Serialize)]
struct GridInfo {
    t_min: f64,
    points_per_decade: u32,
}

#[derive(Serialize)]
struct Envelope<'a> {
    command: &'a str,
    version: &'a str,
    grid: GridInfo,
    seed: u64,
    report: &'a serde_json::Value,
}

fn parse_grid(text: &str) -> rispace::Result<rispace::Grid> {
    let rule = "`t_min,points_per_decade`";
    let (t, p) = text
        .split_once(',')
        .ok_or_else(|| rispace::Error::Parse { token: text.into(), rule: rule.into() })?;
    let t_min = rispace::spaces::parse_real(t)?;
    let ppd = p.trim().parse::<u32>().map_err(|_| rispace::Error::Parse {
        token: p.trim().into(),
        rule: "points per decade as a positive integer".into(),
    })?;
    rispace::make_log_grid(t_min, ppd)
}

fn emit(run: &RunArgs, text: &str) -> std::io::Result<()> {
    match &run.output {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn execute(cli: &Cli) -> Result<bool, String> {
    let grid = parse_grid(&cli.run.grid).map_err(|e| e.to_string())?;
    let Outcome { report, table, text, inconclusive } =
        commands::run(&cli.command, &grid, cli.run.seed).map_err(|e| e.to_string())?;
    let out = match (cli.run.format, text) {
        (None, Some(text)) => text,
        (Some(Format::Csv), _) => table
            .ok_or_else(|| format!("{} has no CSV form", cli.command.name()))?
            .to_csv()
            .map_err(|e| e.to_string())?,
        _ => {
            let env = Envelope {
                command: cli.command.name(),
                version: rispace::VERSION,
                grid: GridInfo { t_min: grid.t_min(), points_per_decade: grid.points_per_decade() },
                seed: cli.run.seed,
                report: &report,
            };
            serde_json::to_string_pretty(&env).map_err(|e| e.to_string())? + "\n"
        }
    };
    emit(&cli.run, &out).map_err(|e| e.to_string())?;
    if let Command::Witness { curve: Some(path), .. } = &cli.command {
        let csv = commands::witness_table(&report)
            .to_csv()
            .map_err(|e| e.to_string())?;
        std::fs::write(path, csv).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    Ok(inconclusive)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(2),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
