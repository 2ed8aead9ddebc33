use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use grouplog::cli::{list_presets, run_suite, RunConfig};

#[derive(Parser)]
#[command(name = "grouplog", version, about = "Checks for the group-ring logarithm over p-adic towers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a check suite and write a JSON report.
    Run(RunArgs),
    /// Print the built-in towers and groups.
    Presets,
}

#[derive(Args)]
struct RunArgs {
    /// TOML run configuration; the flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Built-in tower: TRIVIAL, RAM2 or UNR.
    #[arg(long, conflicts_with = "tower")]
    preset: Option<String>,
    /// TOML tower description.
    #[arg(long)]
    tower: Option<PathBuf>,
    /// Built-in group: C2, C4, C2xC2, D8 or Q8.
    #[arg(long, conflicts_with = "group_table")]
    group: Option<String>,
    /// Multiplication table file.
    #[arg(long)]
    group_table: Option<PathBuf>,
    /// Comma-separated check names, or `all`.
    #[arg(long, value_delimiter = ',')]
    checks: Option<Vec<String>>,
    #[arg(long)]
    seed: Option<u64>,
    /// Retained p-adic digits.
    #[arg(long)]
    precision: Option<i64>,
    /// Sample count for every check.
    #[arg(long)]
    samples: Option<usize>,
    /// Report path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a markdown rendering here.
    #[arg(long)]
    markdown: Option<PathBuf>,
}

impl RunArgs {
    fn into_config(self) -> grouplog::Result<RunConfig> {
        let mut c = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::from_toml("")?,
        };
        if let Some(p) = self.preset {
            (c.preset, c.tower, c.tower_file) = (Some(p), None, None);
        }
        if let Some(t) = self.tower {
            (c.preset, c.tower, c.tower_file) = (None, None, Some(t));
        }
        if let Some(g) = self.group {
            (c.group, c.group_table) = (Some(g), None);
        }
        if let Some(g) = self.group_table {
            (c.group, c.group_table) = (None, Some(g));
        }
        if let Some(checks) = self.checks {
            c.checks = checks;
        }
        if let Some(s) = self.seed {
            c.seed = s;
        }
        if let Some(p) = self.precision {
            c.precision = p;
        }
        if let Some(n) = self.samples {
            c = c.with_samples(n);
        }
        if self.out.is_some() {
            c.out = self.out;
        }
        if self.markdown.is_some() {
            c.markdown = self.markdown;
        }
        Ok(c)
    }
}

fn run(args: RunArgs) -> u8 {
    let config = match args.into_config() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let report = match run_suite(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let json = report.to_json();
    let written = match &config.out {
        Some(path) => std::fs::write(path, &json).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{json}");
            Ok(())
        }
    };
    let written = written.and_then(|_| match &config.markdown {
        Some(path) => std::fs::write(path, report.to_markdown()).map_err(|e| format!("{}: {e}", path.display())),
        None => Ok(()),
    });
    if let Err(e) = written {
        eprintln!("error: {e}");
        return 3;
    }
    eprintln!("verdict: {}", report.verdict);
    report.exit_code() as u8
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Run(args) => run(args),
        Command::Presets => match list_presets() {
            Ok(c) => {
                print!("{c}");
                0
            }
            Err(e) => {
                eprintln!("error: {e}");
                3
            }
        },
    };
    ExitCode::from(code)
}
