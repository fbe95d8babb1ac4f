use clap::Parser;
use semitoric_cli::commands::{render_report, run_command, Options};
use std::io::Write;
use std::process::ExitCode;

/// Exact toric hypersurface computations over JSON jobs.
#[derive(Parser)]
#[command(name = "semitoric", version, disable_help_subcommand = true)]
struct Cli {
    /// One of: check, contraction, hodge, picard, products, mirror, mddm,
    /// selftest.
    command: String,
    /// Path to the JSON job (required for every command except selftest).
    #[arg(long)]
    input: Option<String>,
    /// Worker parallelism bound for product batches.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Tolerance for numeric root modes.
    #[arg(long, default_value_t = 1e-10)]
    numeric_tolerance: f64,
    /// Seed for generic polynomial sampling.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long)]
    emit: Option<String>,
}

fn emit(text: &str, path: &Option<String>) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = Options {
        jobs: cli.jobs.max(1),
        tolerance: cli.numeric_tolerance,
        seed: cli.seed,
    };
    if cli.command == "selftest" {
        let results = semitoric_cli::acceptance::run_all();
        let mut all_ok = true;
        for r in &results {
            println!("{}", r.render());
            all_ok &= r.passed;
        }
        return if all_ok { ExitCode::SUCCESS } else { ExitCode::from(3) };
    }
    let Some(input_path) = &cli.input else {
        eprintln!("error: --input is required for the {} command", cli.command);
        return ExitCode::from(2);
    };
    let bytes = match std::fs::read(input_path) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: cannot read {input_path}: {e}");
            return ExitCode::from(2);
        }
    };
    match run_command(&cli.command, &bytes, &opts) {
        Ok(report) => {
            let text = render_report(&report);
            if let Err(e) = emit(&text, &cli.emit) {
                eprintln!("error: cannot write report: {e}");
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(u8::try_from(e.code).unwrap_or(1))
        }
    }
}
