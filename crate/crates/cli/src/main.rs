//! `tfion`: tables, ion states and plot data from the Thomas-Fermi ion series.

mod commands;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tf_ion::Method;

use commands::{Figure, Settings, Table};
use output::Format;

const EXIT_USAGE: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "tfion", version = commands::VERSION, about = "Series solutions of the Thomas-Fermi ion")]
struct Cli {
    /// Highest order of the K-expansion.
    #[arg(long, global = true, default_value_t = 6)]
    order: usize,

    /// Grid nodes on [0, 1] (odd).
    #[arg(long, global = true, default_value_t = 20001)]
    grid: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Tolerance for the iterative solvers.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,

    /// Nuclear charge; adds physical units to `eval`.
    #[arg(long = "Z", global = true)]
    z: Option<u32>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print one of the coefficient tables.
    Tables {
        #[arg(value_enum)]
        which: Table,
    },
    /// Evaluate the ion state at an electron-to-proton ratio.
    Eval {
        /// e:p-ratio in (0, 1].
        #[arg(long = "n")]
        n: f64,
        /// Truncation order of the N-series (default: all available).
        #[arg(long)]
        terms: Option<usize>,
        #[arg(long, value_enum, default_value_t = MethodArg::Improved)]
        method: MethodArg,
    },
    /// Emit curves per truncation order for plotting.
    Plotdata {
        #[arg(value_enum)]
        figure: Figure,
        #[arg(long, default_value_t = 101)]
        samples: usize,
    },
    /// Check computed results against the stored reference values.
    Validate,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
enum MethodArg {
    Taylor,
    Improved,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Taylor => Method::Taylor,
            MethodArg::Improved => Method::Improved,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let settings = Settings {
        order: cli.order,
        grid: cli.grid,
        tol: cli.tol,
        z: cli.z,
    };
    let result = match cli.command {
        Command::Tables { which } => commands::table(which, &settings).map(|d| (d, true)),
        Command::Eval { n, terms, method } => {
            commands::eval(n, terms, method.into(), &settings).map(|d| (d, true))
        }
        Command::Plotdata { figure, samples } => {
            commands::plotdata(figure, samples, &settings).map(|d| (d, true))
        }
        Command::Validate => commands::validate(&settings),
    };
    match result {
        Ok((doc, passed)) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(doc.render(cli.format).as_bytes()).is_err() {
                return ExitCode::FAILURE;
            }
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_VALIDATION)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { EXIT_NUMERICAL } else { EXIT_USAGE })
        }
    }
}
