use std::f64::consts::{FRAC_PI_2, PI};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cps_core::{PhaseState, TruncationPolicy, WignerPolicy};

/// Quadrature statistics, wavefunctions and Wigner functions of coherent
/// phase states, written as CSV or JSON tables.
#[derive(Debug, Parser)]
#[command(name = "cps", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Means, variances, covariance, D and R of one state.
    Stats {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        trunc: TruncArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// `stats` over a uniform grid of |eps| or n̄ at fixed phase.
    Sweep {
        #[arg(long, value_enum, default_value_t = SweepParam::Nbar)]
        param: SweepParam,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long, default_value_t = 11)]
        points: usize,
        #[arg(long, default_value = "0", value_parser = parse_angle, allow_hyphen_values = true)]
        phi: f64,
        #[command(flatten)]
        trunc: TruncArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// ψ(x) and |ψ(x)|² on a uniform x grid.
    Wavefunction {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, default_value_t = -6.0, allow_hyphen_values = true)]
        x_min: f64,
        #[arg(long, default_value_t = 6.0, allow_hyphen_values = true)]
        x_max: f64,
        #[arg(long, default_value_t = 121)]
        points: usize,
        #[command(flatten)]
        trunc: TruncArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// W(q, p) on a rectangular grid.
    Wigner {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, default_value_t = -4.0, allow_hyphen_values = true)]
        q_min: f64,
        #[arg(long, default_value_t = 4.0, allow_hyphen_values = true)]
        q_max: f64,
        #[arg(long, default_value_t = -4.0, allow_hyphen_values = true)]
        p_min: f64,
        #[arg(long, default_value_t = 4.0, allow_hyphen_values = true)]
        p_max: f64,
        #[arg(long, default_value_t = 41)]
        nq: usize,
        #[arg(long, default_value_t = 41)]
        np: usize,
        #[command(flatten)]
        wigner: WignerArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Gaussianity G = √(2π σ_x) |ψ(⟨x⟩)|² and its small-|eps| expansion.
    Gaussianity {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        trunc: TruncArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Least-squares slope η of R(n̄) over an n̄ range.
    FitEta {
        #[arg(long, default_value_t = 50.0)]
        from: f64,
        #[arg(long, default_value_t = 150.0)]
        to: f64,
        #[arg(long, default_value_t = 21)]
        points: usize,
        #[command(flatten)]
        trunc: TruncArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Dataset behind one figure.
    Figure {
        #[arg(value_enum)]
        id: FigureId,
        /// Use the fixed term counts 1000/10000/640000/110×110 instead of
        /// adaptive truncation.
        #[arg(long)]
        reference_terms: bool,
        /// Number of samples along the abscissa.
        #[arg(long)]
        points: Option<usize>,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepParam {
    Eps,
    Nbar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FigureId {
    Sigmin,
    #[value(name = "R")]
    R,
    #[value(name = "D")]
    D,
    SqzMeanPhi0,
    PsiVf0,
    PsiPi2,
    #[value(name = "G")]
    G,
    Wig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false, id = "modulus")]
pub struct StateModulus {
    /// |eps| in [0, 1).
    #[arg(long)]
    pub eps: Option<f64>,
    /// Mean photon number n̄ >= 0.
    #[arg(long)]
    pub nbar: Option<f64>,
}

#[derive(Debug, Args)]
pub struct StateArgs {
    #[command(flatten)]
    pub modulus: StateModulus,
    /// Phase in radians; `pi/2`, `pi`, `-pi/2` and `-pi` are exact tokens.
    #[arg(long, default_value = "0", value_parser = parse_angle, allow_hyphen_values = true)]
    pub phi: f64,
}

impl StateArgs {
    pub fn state(&self) -> cps_core::Result<PhaseState> {
        match (self.modulus.eps, self.modulus.nbar) {
            (Some(eps), _) => PhaseState::new(eps, self.phi),
            (None, Some(n_bar)) => PhaseState::from_mean_n(n_bar, self.phi),
            (None, None) => unreachable!("clap enforces one of --eps / --nbar"),
        }
    }
}

#[derive(Debug, Args)]
pub struct TruncArgs {
    /// Term cap for adaptive summation.
    #[arg(long)]
    pub max_terms: Option<usize>,
    /// Absolute tail-bound tolerance.
    #[arg(long)]
    pub tail_tol: Option<f64>,
    /// Sum exactly this many terms.
    #[arg(long)]
    pub fixed_n: Option<usize>,
}

impl TruncArgs {
    /// Policy on top of `base`, which supplies defaults for unset flags.
    pub fn policy(&self, base: TruncationPolicy) -> TruncationPolicy {
        let mut p = base;
        if let Some(m) = self.max_terms {
            p.max_terms = m;
        }
        if let Some(t) = self.tail_tol {
            p.tail_tol = t;
        }
        if let Some(n) = self.fixed_n {
            p.mode = cps_core::TruncationMode::FixedN(n);
            p.max_terms = p.max_terms.max(n);
        }
        p
    }
}

#[derive(Debug, Args)]
pub struct WignerArgs {
    /// Fixed μ cut-off; requires --lambda-max.
    #[arg(long, requires = "lambda_max")]
    pub mu_max: Option<usize>,
    /// Fixed λ cut-off; requires --mu-max.
    #[arg(long, requires = "mu_max")]
    pub lambda_max: Option<usize>,
    /// Tail-bound tolerance; selects the cut-offs when none are fixed.
    #[arg(long, default_value_t = 1e-10)]
    pub wigner_tol: f64,
}

impl WignerArgs {
    pub fn policy(&self) -> WignerPolicy {
        let mut p = match (self.mu_max, self.lambda_max) {
            (Some(mu), Some(lambda)) => WignerPolicy::fixed(mu, lambda),
            _ => WignerPolicy::adaptive(self.wigner_tol),
        };
        p.tail_tol = self.wigner_tol;
        p
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; standard output when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

pub fn parse_angle(s: &str) -> Result<f64, String> {
    let v = match s.trim() {
        "pi/2" => FRAC_PI_2,
        "-pi/2" => -FRAC_PI_2,
        "pi" => PI,
        "-pi" => -PI,
        other => other
            .parse::<f64>()
            .map_err(|_| format!("`{other}` is not an angle in radians (or pi/2, pi, -pi/2, -pi)"))?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("angle must be finite, got {s}"))
    }
}
