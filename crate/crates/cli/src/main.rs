//! `toroidal`: run the verification suites and render their reports.

mod render;

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use toroidal_core::config::{ConfigError, ConfigFile, ConfigOverrides, SweepConfig};
use toroidal_core::suite::{self, render_json_lines, Target};

const EXIT_FAIL: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_WARN: u8 = 3;
const EXIT_INPUT: u8 = 4;

#[derive(Parser)]
#[command(name = "toroidal", version, about = "Exact checks for the toroidal Hecke / quantum toroidal duality")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetArg {
    Hecke,
    Toroidal,
    Duality,
    All,
}

impl From<TargetArg> for Target {
    fn from(t: TargetArg) -> Self {
        match t {
            TargetArg::Hecke => Target::Hecke,
            TargetArg::Toroidal => Target::Toroidal,
            TargetArg::Duality => Target::Duality,
            TargetArg::All => Target::All,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand)]
#[allow(clippy::large_enum_variant)]
enum Command {
    /// Run a suite; prints JSON lines and a final summary line.
    Verify {
        target: TargetArg,
        #[arg(long, env = "TOROIDAL_CONFIG")]
        config: Option<PathBuf>,
        /// "l1" or "poly"
        #[arg(long, env = "TOROIDAL_PRESET")]
        preset: Option<String>,
        #[arg(long, env = "TOROIDAL_N")]
        n: Option<usize>,
        #[arg(long, env = "TOROIDAL_L")]
        l: Option<usize>,
        #[arg(long, env = "TOROIDAL_Q")]
        q: Option<String>,
        #[arg(long, env = "TOROIDAL_D")]
        d: Option<String>,
        /// Lattice window N
        #[arg(long, env = "TOROIDAL_WINDOW")]
        window: Option<i32>,
        /// Mode window K
        #[arg(long, env = "TOROIDAL_MODES")]
        modes: Option<i64>,
        #[arg(long, env = "TOROIDAL_PROBES")]
        probes: Option<usize>,
        #[arg(long, env = "TOROIDAL_SEED")]
        seed: Option<u64>,
        #[arg(long, env = "TOROIDAL_OUT")]
        out: Option<PathBuf>,
        #[arg(long, env = "TOROIDAL_THREADS")]
        threads: Option<usize>,
        #[arg(long, env = "TOROIDAL_NEGATIVE_CONTROL")]
        negative_control: bool,
    },
    /// Render a report stream produced by `verify`.
    Report {
        format: Format,
        /// Input file; `-` or absent reads stdin.
        input: Option<PathBuf>,
    },
}

fn config_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("config error: {}", msg);
    ExitCode::from(EXIT_CONFIG)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify { target, config, preset, n, l, q, d, window, modes, probes, seed, out, threads, negative_control } => {
            let file = match config {
                Some(path) => match fs::read_to_string(&path) {
                    Ok(text) => match ConfigFile::from_toml(&text) {
                        Ok(f) => Some(f),
                        Err(e) => return config_error(e),
                    },
                    Err(e) => return config_error(format!("{}: {}", path.display(), e)),
                },
                None => None,
            };
            let over = ConfigOverrides { preset, n, l, q, d, window, modes, probes, seed, out, negative_control };
            let cfg = match SweepConfig::resolve(file.as_ref(), &over) {
                Ok(c) => c,
                Err(e) => return config_error(e),
            };
            let start = Instant::now();
            let target = Target::from(target);
            let run = match threads {
                Some(0) => return config_error(ConfigError::Constraint("threads >= 1".into())),
                Some(t) => suite::run_with_threads(&cfg, target, t),
                None => suite::run(&cfg, target),
            };
            let run = match run {
                Ok(r) => r,
                Err(e) => return config_error(e),
            };
            let text = render_json_lines(&run);
            let written = match &cfg.out {
                Some(path) => fs::write(path, &text),
                None => io::stdout().write_all(text.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("cannot write reports: {}", e);
                return ExitCode::from(EXIT_INPUT);
            }
            let t = &run.summary.totals;
            eprintln!(
                "{}: checked {} passed {} failed {} skipped {} in {:.2}s",
                target,
                t.checked,
                t.passed,
                t.failed,
                t.skipped,
                start.elapsed().as_secs_f64()
            );
            if t.failed > 0 {
                ExitCode::from(EXIT_FAIL)
            } else if t.skipped > 0 {
                eprintln!("warning: {} checks left the lattice window and were skipped", t.skipped);
                ExitCode::from(EXIT_WARN)
            } else {
                ExitCode::SUCCESS
            }
        }
        Command::Report { format, input } => {
            let mut text = String::new();
            let read = match input.as_deref() {
                Some(p) if p.as_os_str() != "-" => fs::read_to_string(p).map(|t| text = t),
                _ => io::stdin().read_to_string(&mut text).map(|_| ()),
            };
            if let Err(e) = read {
                eprintln!("cannot read input: {}", e);
                return ExitCode::from(EXIT_INPUT);
            }
            let stream = match render::parse_stream(&text) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("malformed report: {:#}", e);
                    return ExitCode::from(EXIT_INPUT);
                }
            };
            let rendered = match format {
                Format::Json => render::render_json(&stream).expect("reports serialize"),
                Format::Table => render::render_table(&stream),
            };
            print!("{}", rendered);
            ExitCode::SUCCESS
        }
    }
}
