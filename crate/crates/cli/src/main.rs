//! Command-line front end: deterministic experiments over the isolated
//! qubits simulation library, emitting CSV or JSON artifacts.
//!
//! Exit codes: 0 on success, 2 on configuration errors, 3 when the check
//! suite reports a failed criterion, 1 otherwise.

use clap::{Args, Parser, Subcommand};
use isoqubits_cli::config::ExperimentConfig;
use isoqubits_cli::experiments::{run_experiment, RunOutput};
use isoqubits_cli::output::OutputFormat;
use isoqubits_cli::CliError;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "isoqubits", version, about = "Deterministic experiments over the isolated-qubits simulation library")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

/// The shared knob set; each experiment validates the fields it needs.
#[derive(Args, Debug, Default, Clone)]
struct Flags {
    /// Number of qubits.
    #[arg(long)]
    n: Option<usize>,
    /// Hidden-message bits of an ensemble.
    #[arg(long)]
    nb: Option<usize>,
    /// Message bits of a code or device.
    #[arg(long)]
    k: Option<usize>,
    /// Measurement outcome count.
    #[arg(long)]
    q: Option<usize>,
    /// Net resolution.
    #[arg(long)]
    eps: Option<f64>,
    /// Rate slack.
    #[arg(long)]
    theta: Option<f64>,
    /// Radius slack.
    #[arg(long)]
    tau: Option<f64>,
    /// Confidence knob of the decoding bound.
    #[arg(long)]
    lambda: Option<f64>,
    /// First message (otm encode).
    #[arg(long)]
    s: Option<u64>,
    /// Second message (otm encode).
    #[arg(long)]
    t: Option<u64>,
    /// Measured-subset size for collision scans.
    #[arg(long)]
    m: Option<usize>,
    /// Enumeration depth for strategy searches.
    #[arg(long)]
    depth: Option<usize>,
    /// Smoothing exponent theta for min-entropy reporting.
    #[arg(long)]
    smoothing: Option<f64>,
    /// Which message an honest reader targets: s or t.
    #[arg(long)]
    side: Option<String>,
    /// Master seed; per-trial seeds derive from it.
    #[arg(long)]
    seed: Option<u64>,
    /// Monte Carlo trials per instance.
    #[arg(long)]
    trials: Option<usize>,
    /// Number of sampled instances.
    #[arg(long)]
    seeds: Option<usize>,
    /// Enumeration cap.
    #[arg(long)]
    cap: Option<u64>,
    /// Cap on dense qubit counts (default: the library limit).
    #[arg(long)]
    max_dim: Option<usize>,
    /// Device file to load instead of sampling.
    #[arg(long)]
    device: Option<PathBuf>,
    /// Output artifact path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Artifact format: csv or json.
    #[arg(long)]
    format: Option<OutputFormat>,
}

impl Flags {
    fn into_config(self) -> ExperimentConfig {
        ExperimentConfig {
            experiment: None,
            n: self.n,
            nb: self.nb,
            k: self.k,
            q: self.q,
            eps: self.eps,
            theta: self.theta,
            tau: self.tau,
            lambda: self.lambda,
            s: self.s,
            t: self.t,
            m: self.m,
            depth: self.depth,
            smoothing: self.smoothing,
            side: self.side,
            seed: self.seed,
            trials: self.trials,
            seeds: self.seeds,
            cap: self.cap,
            max_dim: self.max_dim,
            device: self.device,
            out: self.out,
            format: self.format,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Measurement-net construction.
    Net {
        #[command(subcommand)]
        cmd: NetCmd,
    },
    /// Data-hiding ensembles, the pretty good measurement, and games.
    Hiding {
        #[command(subcommand)]
        cmd: HidingCmd,
    },
    /// One-time memory devices.
    Otm {
        #[command(subcommand)]
        cmd: OtmCmd,
    },
    /// Random codes and the induced channel.
    Codes {
        #[command(subcommand)]
        cmd: CodesCmd,
    },
    /// Property suites.
    Check {
        #[command(subcommand)]
        cmd: CheckCmd,
    },
    /// Run an experiment described by a TOML config file.
    Run {
        /// Config file with the same keys as the flags, plus `experiment`.
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Subcommand)]
enum NetCmd {
    /// Build a net and write it to --out.
    Build(Flags),
}

#[derive(Subcommand)]
enum HidingCmd {
    /// Sample an ensemble and write it to --out.
    Sample(Flags),
    /// Pretty-good-measurement success statistics per seed.
    Pgm(Flags),
    /// The computational-basis discrimination game per seed.
    Game(Flags),
    /// Exhaustive + greedy strategy search (small n).
    Search(Flags),
    /// Collision-entropy scan over enumerated tensor outcomes.
    Collision(Flags),
}

#[derive(Subcommand)]
enum OtmCmd {
    /// Sample a device and write it to --out.
    Sample(Flags),
    /// Print the encoded state of a message pair.
    Encode(Flags),
    /// Honest-recovery Monte Carlo.
    Honest(Flags),
    /// Exact leak-strategy evaluation per seed.
    Leak(Flags),
    /// Enumerated-strategy information maxima.
    Info(Flags),
    /// Collision-entropy scan over enumerated tensor outcomes.
    Collision(Flags),
    /// Three-phase information decomposition per seed.
    Phases(Flags),
}

#[derive(Subcommand)]
enum CodesCmd {
    /// Derived rate/radius parameters.
    Params(Flags),
    /// The random-coding success bound.
    Bound(Flags),
    /// Honest-channel Monte Carlo across block lengths.
    Montecarlo(Flags),
}

#[derive(Subcommand)]
enum CheckCmd {
    /// Run every acceptance criterion.
    All(Flags),
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    let (name, cfg): (&str, ExperimentConfig) = match cli.cmd {
        Cmd::Net { cmd: NetCmd::Build(f) } => ("net-build", f.into_config()),
        Cmd::Hiding { cmd } => match cmd {
            HidingCmd::Sample(f) => ("hiding-sample", f.into_config()),
            HidingCmd::Pgm(f) => ("hiding-pgm", f.into_config()),
            HidingCmd::Game(f) => ("hiding-game", f.into_config()),
            HidingCmd::Search(f) => ("hiding-search", f.into_config()),
            HidingCmd::Collision(f) => ("hiding-collision", f.into_config()),
        },
        Cmd::Otm { cmd } => match cmd {
            OtmCmd::Sample(f) => ("otm-sample", f.into_config()),
            OtmCmd::Encode(f) => ("otm-encode", f.into_config()),
            OtmCmd::Honest(f) => ("otm-honest", f.into_config()),
            OtmCmd::Leak(f) => ("otm-leak", f.into_config()),
            OtmCmd::Info(f) => ("otm-info", f.into_config()),
            OtmCmd::Collision(f) => ("otm-collision", f.into_config()),
            OtmCmd::Phases(f) => ("otm-phases", f.into_config()),
        },
        Cmd::Codes { cmd } => match cmd {
            CodesCmd::Params(f) => ("codes-params", f.into_config()),
            CodesCmd::Bound(f) => ("codes-bound", f.into_config()),
            CodesCmd::Montecarlo(f) => ("codes-montecarlo", f.into_config()),
        },
        Cmd::Check { cmd: CheckCmd::All(f) } => ("check-all", f.into_config()),
        Cmd::Run { config } => {
            let cfg = ExperimentConfig::from_toml_file(&config)?;
            let name = cfg
                .experiment
                .clone()
                .ok_or_else(|| CliError::Config("config file needs an `experiment` key".into()))?;
            let out = run_experiment(&name, &cfg)?;
            return finish(&cfg, out);
        }
    };
    let out = run_experiment(name, &cfg)?;
    finish(&cfg, out)
}

fn finish(cfg: &ExperimentConfig, out: RunOutput) -> Result<(), CliError> {
    if let Some(table) = &out.table {
        let rendered = table.render(cfg.format());
        match &cfg.out {
            Some(path) => std::fs::write(path, rendered)?,
            None => print!("{rendered}"),
        }
    }
    for line in &out.summary {
        println!("{line}");
    }
    for path in &out.written {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
