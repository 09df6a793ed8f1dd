use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use opfamily::ComplementStrategy;
use opfamily_cli::{parse_complements, parse_family, run_command, CliError, Command, Flags};

/// Local diagonalization of matrix families L(ε) = Σ εⁱ L_i in exact rational arithmetic.
///
/// Exit codes: 0 success, 1 input error, 2 no stabilization within the budget
/// (or too few known coefficients), 3 internal-consistency failure.
#[derive(Parser)]
#[command(name = "opfamily", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Stages, stabilization index and stage dimensions.
    Analyze(Common),
    /// φ, ψ and Δ with the exact residual check.
    Diagonalize(Common),
    /// Laurent coefficients of the generalized inverse L⁺.
    Invert(Common),
    /// All Jordan chains of a given length.
    Jordan {
        #[command(flatten)]
        common: Common,
        /// Chain length.
        #[arg(long)]
        length: usize,
    },
    /// S_P, P(ε) and the local Smith exponents.
    Smith(Common),
    /// The augmented pencil and the bound relating its index to k.
    Linearize(Common),
    /// Every oracle cross-check, with pass/fail detail.
    Verify(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct Common {
    /// Family file (JSON).
    file: PathBuf,
    /// Truncation order for series output. Default: max(2k + 4, 12) for φ, ψ, Δ and 12 for L⁺,
    /// capped by the known coefficients of a truncated series.
    #[arg(long)]
    order: Option<usize>,
    /// Stage budget for the stabilization certificate. Default: max(m + n + 2, d·min(m, n) + 1).
    #[arg(long)]
    max_stages: Option<usize>,
    /// Complement choice: `pivot`, or `given:<file>` with per-stage bases.
    #[arg(long, default_value = "pivot")]
    complement: String,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Pole order p of L(ε); overrides `declared_pole` in the file.
    #[arg(long)]
    pole: Option<usize>,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })
}

fn run(cli: Cli) -> Result<(String, bool), CliError> {
    let (common, command) = match cli.command {
        Cmd::Analyze(c) => (c, Command::Analyze),
        Cmd::Diagonalize(c) => (c, Command::Diagonalize),
        Cmd::Invert(c) => (c, Command::Invert),
        Cmd::Jordan { common, length } => (common, Command::Jordan { length }),
        Cmd::Smith(c) => (c, Command::Smith),
        Cmd::Linearize(c) => (c, Command::Linearize),
        Cmd::Verify(c) => (c, Command::Verify),
    };
    let mut spec = parse_family(&read(&common.file)?)?;
    if let Some(p) = common.pole {
        spec = spec.with_pole(p)?;
    }
    let strategy = match common.complement.as_str() {
        "pivot" => ComplementStrategy::Pivot,
        other => match other.strip_prefix("given:") {
            Some(path) => parse_complements(&read(Path::new(path))?, spec.rows, spec.cols)?,
            None => return Err(CliError::Complement(format!("unknown strategy {other:?}; use pivot or given:<file>"))),
        },
    };
    let flags = Flags { order: common.order, max_stages: common.max_stages, strategy };
    let report = run_command(command, &spec, &flags)?;
    let text = match common.format {
        Format::Json => report.to_json() + "\n",
        Format::Text => report.to_text(),
    };
    Ok((text, report.all_passed()))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok((text, passed)) => {
            print!("{text}");
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
