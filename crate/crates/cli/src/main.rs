use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use ewave::commands::{self, ExitCode};
use ewave::{exit_code, presets, RunConfig};

#[derive(Parser)]
#[command(
    name = "ewave",
    version,
    about = "Electron wavepacket energy exchange with a radiation wave"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print derived parameters of a configuration
    Derive(Source),
    /// Run a scenario and write its files
    Run(RunArgs),
    /// Run a scenario with a sweep
    Scan(RunArgs),
    /// List shipped presets
    ListPresets,
}

#[derive(Args)]
struct Source {
    /// Preset name
    preset: Option<String>,
    /// TOML configuration file
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    source: Source,
    /// Output directory
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Worker threads, 0 picks the core count
    #[arg(long, env = "EWAVE_THREADS", default_value_t = 0)]
    threads: usize,
    /// Write momenta in kg m/s instead of recoil units
    #[arg(long)]
    si_units: bool,
}

impl Source {
    fn load(&self) -> Result<RunConfig> {
        Ok(match (&self.preset, &self.config) {
            (Some(name), None) => RunConfig::preset(name)?,
            (None, Some(path)) => RunConfig::load(path)?,
            _ => bail!(ewave::ConfigError::Invalid {
                section: "scenario",
                message: "give a preset name or --config PATH".into(),
            }),
        })
    }
}

fn execute(args: &RunArgs, scan: bool) -> Result<()> {
    if args.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(args.threads)
            .build_global()
            .context("configuring worker threads")?;
    }
    let cfg = args.source.load()?;
    let out = args
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("out").join(&cfg.scenario.name));
    let outcome = if scan {
        commands::scan(&cfg, Some(&out), args.si_units)?
    } else {
        commands::run(&cfg, Some(&out), args.si_units)?
    };
    print!("{}", toml::to_string(&outcome.summary)?);
    if let Some(m) = &outcome.manifest {
        println!("# manifest: {}", m.display());
    }
    outcome.check.map_err(anyhow::Error::from)
}

fn derive(src: &Source) -> Result<()> {
    let report = commands::derive_report(&src.load()?)?;
    print!("{}", toml::to_string(&report)?);
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Derive(src) => derive(src),
        Command::Run(a) => execute(a, false),
        Command::Scan(a) => execute(a, true),
        Command::ListPresets => {
            for name in presets::names() {
                println!("{name:24} {}", presets::summary(name).unwrap_or(""));
            }
            Ok(())
        }
    };
    if let Err(e) = result {
        eprintln!("error: {e:#}");
        std::process::exit(exit_code(&e) as i32);
    }
    std::process::exit(ExitCode::Success as i32);
}
