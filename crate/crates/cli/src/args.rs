use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use bosesemi_core::ModelParams;

use crate::parse::{GridSpec, SweepSpec};

#[derive(Debug, Parser)]
#[command(name = "bosesemi", version, about = "Exact and semiclassical spectra of the two-mode Bose-Hubbard model")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact and semiclassical eigenvalues with their differences.
    Spectrum {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
    },
    /// Levels and stationary energies over a range of onsite energies.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
        /// `min:max:steps`, both ends included.
        #[arg(long, allow_hyphen_values = true)]
        sweep: SweepSpec,
    },
    /// Histogram of the exact levels with the smooth semiclassical density.
    Density {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 60)]
        bins: usize,
    },
    /// Momentum distribution of one eigenstate.
    Wavefunction {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
        #[arg(long, default_value_t = 0)]
        state: usize,
    },
    /// Mean-field energy on a (q, p) grid with the stationary points.
    Portrait {
        #[command(flatten)]
        common: Common,
        /// `<nq>x<np>`.
        #[arg(long, default_value_t = GridSpec::default())]
        grid: GridSpec,
    },
}

#[derive(Debug, Clone, Args)]
#[command(group(ArgGroup::new("interaction").required(true).args(["g", "g_over_ns"])))]
pub struct Common {
    #[arg(long)]
    pub particles: usize,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub v: f64,
    /// Interaction strength.
    #[arg(long, allow_negative_numbers = true)]
    pub g: Option<f64>,
    /// Interaction in units of 1/(N+1).
    #[arg(long = "g-over-ns", allow_negative_numbers = true)]
    pub g_over_ns: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub hbar: f64,
    /// Output file; standard output if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

impl Common {
    pub fn params(&self) -> ModelParams {
        let p = match (self.g, self.g_over_ns) {
            (_, Some(x)) => ModelParams::with_g_over_ns(self.particles, self.epsilon, self.v, x),
            (g, None) => ModelParams::new(self.particles, self.epsilon, self.v, g.unwrap_or(0.0)),
        };
        p.with_hbar(self.hbar)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Semiclassical,
    Both,
}

impl Method {
    pub fn exact(self) -> bool {
        self != Method::Semiclassical
    }

    pub fn semiclassical(self) -> bool {
        self != Method::Exact
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Everything that determines an output file, echoed into JSON output.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub particles: usize,
    pub epsilon: f64,
    pub v: f64,
    pub g: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g_over_ns: Option<f64>,
    pub hbar: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<Method>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub state: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bins: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<String>,
    pub format: Format,
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Spectrum { common, .. }
            | Command::Sweep { common, .. }
            | Command::Density { common, .. }
            | Command::Wavefunction { common, .. }
            | Command::Portrait { common, .. } => common,
        }
    }

    pub fn config(&self) -> RunConfig {
        let c = self.common();
        let p = c.params();
        let mut cfg = RunConfig {
            command: "",
            particles: p.particles,
            epsilon: p.epsilon,
            v: p.v,
            g: p.g,
            g_over_ns: c.g_over_ns,
            hbar: p.hbar,
            method: None,
            sweep: None,
            state: None,
            bins: None,
            grid: None,
            format: c.format,
        };
        match self {
            Command::Spectrum { method, .. } => {
                cfg.command = "spectrum";
                cfg.method = Some(*method);
            }
            Command::Sweep { method, sweep, .. } => {
                cfg.command = "sweep";
                cfg.method = Some(*method);
                cfg.sweep = Some(sweep.to_string());
            }
            Command::Density { bins, .. } => {
                cfg.command = "density";
                cfg.bins = Some(*bins);
            }
            Command::Wavefunction { method, state, .. } => {
                cfg.command = "wavefunction";
                cfg.method = Some(*method);
                cfg.state = Some(*state);
            }
            Command::Portrait { grid, .. } => {
                cfg.command = "portrait";
                cfg.grid = Some(grid.to_string());
            }
        }
        cfg
    }
}
