//! `consonoscope`: writes consonance analyses as CSV, JSON, DOT, SVG and WAV files.

mod commands;
mod config;
mod error;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use consonoscope::amp::DEFAULT_BIASES;
use consonoscope::ScaleKind;

use crate::commands::Emitter;
use crate::config::{load_config, Settings, OUT_ENV};
use crate::error::CliError;

#[derive(Parser)]
#[command(name = "consonoscope", version, about = "Partial-matching consonance analysis of intervals, scales and triads")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// TOML file with any of the flag keys below (snake_case); flags override it.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Frequency of the scale's C in Hz.
    #[arg(long, global = true, value_name = "HZ")]
    base_freq: Option<f64>,
    /// Exponential decay rate of partial magnitudes.
    #[arg(long, global = true, value_name = "R")]
    decay: Option<f64>,
    /// Maximum number of partials per tone.
    #[arg(long, global = true, value_name = "N")]
    partials: Option<usize>,
    /// Gap below which a partial pair is consonant (Hz).
    #[arg(long, global = true, value_name = "HZ")]
    fc: Option<f64>,
    /// Gap below which a partial pair is dissonant (Hz).
    #[arg(long, global = true, value_name = "HZ")]
    fd: Option<f64>,
    #[arg(long, global = true, value_name = "X")]
    cons_threshold: Option<f64>,
    #[arg(long, global = true, value_name = "X")]
    diss_threshold: Option<f64>,
    /// literal | proximity
    #[arg(long, global = true)]
    mode: Option<String>,
    /// Output directory (falls back to $CONSONOSCOPE_OUT, then ./consonoscope-out).
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Comma-separated subset of csv,json,dot,svg,wav-pcm.
    #[arg(long, global = true, value_name = "LIST")]
    format: Option<String>,
}

impl GlobalArgs {
    fn settings(&self) -> Settings {
        Settings {
            base_freq: self.base_freq,
            decay: self.decay,
            partials: self.partials,
            fc: self.fc,
            fd: self.fd,
            cons_threshold: self.cons_threshold,
            diss_threshold: self.diss_threshold,
            hearing_min: None,
            hearing_max: None,
            mode: self.mode.clone(),
            out: self.out.clone(),
            format: self.format.clone(),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Score two harmonic tones against each other.
    Interval { f1: f64, f2: f64 },
    /// Pairwise matrices, bipartite chart and graphs for one scale.
    Scale { kind: ScaleKind },
    /// Consonance and dissonance graphs for one scale.
    Graphs { kind: ScaleKind },
    /// Major and minor triads in all five temperaments.
    Triads,
    /// Waveform of two pure tones and its beat envelope.
    Beats {
        f1: f64,
        f2: f64,
        #[arg(long, default_value_t = 1.0)]
        duration: f64,
        #[arg(long, default_value_t = 44_100.0)]
        sample_rate: f64,
    },
    /// Square-law amplifier bias sweep over the just C major triad.
    Amp {
        /// Comma-separated ascending list of biases.
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_BIASES.to_vec())]
        biases: Vec<f64>,
    },
    /// Harmonic magnitude profile for a 1 Hz fundamental.
    Decay,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let env_out = std::env::var_os(OUT_ENV).filter(|v| !v.is_empty()).map(PathBuf::from);
    let cfg = load_config(cli.global.config.as_deref(), cli.global.settings(), env_out)?;
    let mut out = Emitter::new(&cfg)?;
    match cli.command {
        Command::Interval { f1, f2 } => print!("{}", commands::interval(&cfg, f1, f2, &mut out)?),
        Command::Scale { kind } => commands::scale(&cfg, kind, &mut out)?,
        Command::Graphs { kind } => commands::graphs(&cfg, kind, &mut out)?,
        Command::Triads => commands::triads(&cfg, &mut out)?,
        Command::Beats { f1, f2, duration, sample_rate } => {
            let s = commands::beats(f1, f2, duration, sample_rate, &mut out)?;
            if let Some(p) = s.measured_period {
                eprintln!("{} envelope peaks, mean spacing {p:.6} s", s.peak_times.len());
            }
        }
        Command::Amp { biases } => {
            commands::amp(&cfg, biases, &mut out)?;
        }
        Command::Decay => commands::decay(&cfg, &mut out)?,
    }
    for p in out.finish() {
        eprintln!("wrote {}", commands::relative(&cfg.out_dir, &p));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
