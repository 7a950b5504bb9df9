use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use bbsim::commands::{self, ReportOptions, RunOptions, SweepOptions};
use bbsim::EXIT_USAGE;
use bbsim_core::Scheme;

/// Bandwidth-broker simulator for femtocell backhaul sharing an xDSL link.
///
/// Simulates household internet traffic and femtocell calls contending for
/// one link, under a no-prioritization baseline and a dynamic-reservation
/// scheme, and reports femtocell satisfaction and link utilization.
#[derive(Parser)]
#[command(name = "bbsim", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment at the configured background load
    Run(RunArgs),
    /// Sweep the mean background load (ARBIT) across a range
    Sweep(SweepArgs),
    /// Render charts and a text summary from a sweep CSV
    Report(ReportArgs),
    /// Check a config file, reporting every violation
    ValidateConfig(ValidateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Traditional,
    Proposed,
    Both,
}

impl SchemeArg {
    fn schemes(choices: &[SchemeArg]) -> Vec<Scheme> {
        let mut schemes = Vec::new();
        for choice in choices {
            match choice {
                SchemeArg::Traditional => schemes.push(Scheme::Traditional),
                SchemeArg::Proposed => schemes.push(Scheme::Proposed),
                SchemeArg::Both => schemes.extend(Scheme::all()),
            }
        }
        schemes.sort();
        schemes.dedup();
        schemes
    }
}

#[derive(Args)]
struct RunArgs {
    /// JSON scenario config; built-in defaults when omitted
    #[arg(long)]
    config: Option<PathBuf>,
    /// Scheme(s) to simulate
    #[arg(long, value_enum, default_value = "both")]
    scheme: SchemeArg,
    /// Override the configured base seed
    #[arg(long)]
    seed: Option<u64>,
    /// Also write a per-tick timeseries CSV for the first replication
    #[arg(long)]
    timeseries: Option<PathBuf>,
    /// Also write the broker history CSV for the first replication
    #[arg(long)]
    history: Option<PathBuf>,
    /// Summary CSV destination (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// JSON scenario config; built-in defaults when omitted
    #[arg(long)]
    config: Option<PathBuf>,
    /// Swept background load levels as start:stop:step in kbps
    #[arg(long)]
    arbit: String,
    /// Schemes to sweep (comma separated)
    #[arg(long, value_enum, value_delimiter = ',', default_value = "both")]
    schemes: Vec<SchemeArg>,
    /// Sweep CSV destination (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    /// Sweep CSV produced by `bbsim sweep`
    sweep_csv: PathBuf,
    /// Directory the charts and summary are written into
    #[arg(long, default_value = "report")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct ValidateArgs {
    /// JSON scenario config to check
    config: PathBuf,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // --help/--version land here too; only real usage errors exit 1
            let code = if err.use_stderr() {
                EXIT_USAGE as u8
            } else {
                0
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };

    let result = match cli.command {
        Command::Run(args) => commands::cmd_run(&RunOptions {
            config: args.config,
            schemes: SchemeArg::schemes(&[args.scheme]),
            seed: args.seed,
            timeseries: args.timeseries,
            history: args.history,
            out: args.out,
        }),
        Command::Sweep(args) => commands::cmd_sweep(&SweepOptions {
            config: args.config,
            arbit_range: args.arbit,
            schemes: SchemeArg::schemes(&args.schemes),
            out: args.out,
        }),
        Command::Report(args) => commands::cmd_report(&ReportOptions {
            sweep_csv: args.sweep_csv,
            out_dir: args.out_dir,
        }),
        Command::ValidateConfig(args) => commands::cmd_validate(&args.config),
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
