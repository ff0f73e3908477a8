//! `qembed`: screen a host, solve the active space exactly, map it to
//! qubits, run a VQE and collect the results.

mod commands;
mod config;
mod error;
mod output;
mod problem;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::RunConfig;
use error::CliError;

#[derive(Parser)]
#[command(name = "qembed", version, about = "Active-space embedding: screening, FCI, qubit mapping and VQE")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Downfold a model host onto its active orbitals; writes effective.fcidump and screen.json.
    Screen {
        #[command(flatten)]
        common: Common,
        /// Project the bare interaction instead of the screened one.
        #[arg(long)]
        no_screen: bool,
    },
    /// Exact diagonalization; writes spectrum.txt and fci.json.
    Fci {
        #[command(flatten)]
        common: Common,
        /// Number of eigenstates.
        #[arg(long)]
        states: Option<usize>,
        /// dense or davidson.
        #[arg(long)]
        method: Option<String>,
    },
    /// Qubit Hamiltonian; writes hamiltonian.pauli and map.json.
    Map {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        taper: Taper,
    },
    /// UCCSD-VQE; writes trace.csv and vqe.json.
    Vqe {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        taper: Taper,
        /// Reference determinant label, e.g. "ab" or "20".
        #[arg(long)]
        reference: Option<String>,
        /// off, spin or symmetry ("on").
        #[arg(long)]
        screening: Option<String>,
        /// cobyla or nelder_mead.
        #[arg(long)]
        optimizer: Option<String>,
        /// zero or random.
        #[arg(long)]
        init: Option<String>,
        /// Convergence window in Hartree.
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long)]
        max_evals: Option<usize>,
        /// Global depolarizing probability.
        #[arg(long)]
        depolarizing: Option<f64>,
    },
    /// Merge FCI and VQE summaries of a directory; writes report.txt and report.json.
    Report {
        /// Directory holding fci.json / vqe.json files.
        dir: PathBuf,
        /// Where to write the report (defaults to DIR).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Flags shared by every pipeline command; they override the config file.
#[derive(Args)]
struct Common {
    /// TOML run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// FCIDUMP input (replaces a configured host).
    #[arg(long, conflicts_with = "host")]
    fcidump: Option<PathBuf>,
    /// Host TOML input (replaces a configured FCIDUMP).
    #[arg(long)]
    host: Option<PathBuf>,
    /// Active orbitals, comma separated.
    #[arg(long, value_delimiter = ',')]
    active: Option<Vec<usize>>,
    /// Frozen doubly occupied orbitals, comma separated.
    #[arg(long, value_delimiter = ',')]
    frozen: Option<Vec<usize>>,
    #[arg(long)]
    n_alpha: Option<usize>,
    #[arg(long)]
    n_beta: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for shot sampling and random initial points.
    #[arg(long)]
    seed: Option<u64>,
    /// Shots per energy evaluation; 0 is the exact backend.
    #[arg(long)]
    shots: Option<u64>,
    /// jw, parity or bk.
    #[arg(long)]
    encoding: Option<String>,
    /// Double counting: none or hf.
    #[arg(long)]
    dc: Option<String>,
}

#[derive(Args)]
struct Taper {
    /// Remove the two parity qubits (parity encoding only).
    #[arg(long, conflicts_with = "no_taper")]
    taper: bool,
    #[arg(long)]
    no_taper: bool,
}

impl Taper {
    fn apply(&self, cfg: &mut RunConfig) {
        if self.taper {
            cfg.mapping.taper = Some(true);
        } else if self.no_taper {
            cfg.mapping.taper = Some(false);
        }
    }
}

impl Common {
    fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if let Some(p) = &self.fcidump {
            cfg.input.fcidump = Some(p.clone());
            cfg.input.host = None;
        }
        if let Some(p) = &self.host {
            cfg.input.host = Some(p.clone());
            cfg.input.fcidump = None;
        }
        if let Some(a) = &self.active {
            cfg.active.orbitals = Some(a.clone());
        }
        if let Some(f) = &self.frozen {
            cfg.active.frozen = f.clone();
        }
        cfg.active.n_alpha = self.n_alpha.or(cfg.active.n_alpha);
        cfg.active.n_beta = self.n_beta.or(cfg.active.n_beta);
        if let Some(o) = &self.out {
            cfg.output = Some(o.clone());
        }
        if let Some(s) = self.seed {
            cfg.vqe.seed = s;
        }
        if let Some(s) = self.shots {
            cfg.vqe.shots = s;
        }
        if let Some(e) = &self.encoding {
            cfg.mapping.encoding = e.clone();
        }
        if let Some(d) = &self.dc {
            cfg.screening.dc = d.clone();
        }
        Ok(cfg)
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (outputs, dir, late) = match cli.command {
        Command::Screen { common, no_screen } => {
            let mut cfg = common.resolve()?;
            if no_screen {
                cfg.screening.screen = false;
            }
            (commands::screen(&cfg)?, cfg.output_dir(), None)
        }
        Command::Fci { common, states, method } => {
            let mut cfg = common.resolve()?;
            if let Some(k) = states {
                cfg.fci.states = k;
            }
            if let Some(m) = method {
                cfg.fci.method = m;
            }
            (commands::fci(&cfg)?, cfg.output_dir(), None)
        }
        Command::Map { common, taper } => {
            let mut cfg = common.resolve()?;
            taper.apply(&mut cfg);
            (commands::map(&cfg)?, cfg.output_dir(), None)
        }
        Command::Vqe {
            common,
            taper,
            reference,
            screening,
            optimizer,
            init,
            tolerance,
            max_evals,
            depolarizing,
        } => {
            let mut cfg = common.resolve()?;
            taper.apply(&mut cfg);
            let v = &mut cfg.vqe;
            v.reference = reference.or(v.reference.take());
            if let Some(s) = screening {
                v.screening = s;
            }
            if let Some(o) = optimizer {
                v.optimizer = o;
            }
            if let Some(i) = init {
                v.initial = i;
            }
            v.tolerance = tolerance.unwrap_or(v.tolerance);
            v.max_evaluations = max_evals.unwrap_or(v.max_evaluations);
            v.depolarizing = depolarizing.unwrap_or(v.depolarizing);
            let (out, late) = commands::vqe(&cfg)?;
            (out, cfg.output_dir(), late)
        }
        Command::Report { dir, out } => {
            let outputs = report::report(&dir)?;
            (outputs, out.unwrap_or(dir), None)
        }
    };
    for path in outputs.commit(&dir)? {
        println!("wrote {}", path.display());
    }
    match late {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
