//! Command-line grammar.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Debug, Parser)]
#[command(name = "qds3", version, about = "Three-level dissipative system: verification and simulation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

fn finite(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        Ok(x) => Err(format!("{x} is not finite")),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BosonizeCheck {
    Commutators,
    Density,
    Kinetic,
    Twopoint,
}

#[derive(Clone, Debug, PartialEq, Subcommand)]
pub enum Command {
    /// Gell-Mann orthogonality, completeness, commutators and weights.
    VerifyAlgebra,
    /// Yang-Baxter residual over the (f1, f2, μ) grid plus seeded samples.
    VerifyYbe {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Extra random (f1, f2, μ) samples.
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, value_parser = finite, default_value_t = 1e-10)]
        tol: f64,
    },
    /// exp(iH) against the closed-form scattering matrix.
    VerifySmatrix {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, value_parser = finite, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Couplings to R-matrix parameters, with the S ≈ cR certificate.
    Reparam {
        #[arg(long, value_parser = finite, allow_negative_numbers = true)]
        jpar: f64,
        #[arg(long, value_parser = finite, allow_negative_numbers = true)]
        jperp: f64,
        #[arg(long, value_parser = finite, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Finite-window bosonisation identities.
    Bosonize {
        /// Half-width M of the window [−M, M] (depth for twopoint).
        #[arg(long)]
        window: i32,
        #[arg(long, default_value_t = 1)]
        flavors: usize,
        #[arg(long, value_enum)]
        check: BosonizeCheck,
        /// Regularisation a/L.
        #[arg(long, value_parser = finite)]
        a_over_l: Option<f64>,
        /// Position x/L for twopoint.
        #[arg(long, value_parser = finite, default_value_t = 0.125, allow_negative_numbers = true)]
        x_over_l: f64,
    },
    /// Discretized bath against the ohmic spectral density.
    Spectral {
        #[arg(long, default_value_t = 200)]
        n_modes: usize,
        #[arg(long, value_parser = finite, default_value_t = 0.1)]
        alpha: f64,
        #[arg(long, value_parser = finite, default_value_t = 1.0)]
        omega_c: f64,
        /// Gaussian centre in units of ωc.
        #[arg(long, value_parser = finite, default_value_t = 0.3)]
        center: f64,
        /// Gaussian width in units of ωc.
        #[arg(long, value_parser = finite, default_value_t = 0.1)]
        width: f64,
        #[arg(long, value_parser = finite, default_value_t = 0.02)]
        tol: f64,
    },
    /// Time evolution from a JSON configuration; writes CSV.
    Simulate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Unitary conjugation and displaced-oscillator checks.
    Conjugation {
        #[arg(long, default_value_t = 1)]
        n_modes: usize,
        #[arg(long, default_value_t = 12)]
        n_max: usize,
        #[arg(long, value_parser = finite, default_value_t = 1.0)]
        a_over_l: f64,
        #[arg(long, value_parser = finite, default_value_t = 0.0, allow_negative_numbers = true)]
        jpar: f64,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::VerifyAlgebra => "verify-algebra",
            Command::VerifyYbe { .. } => "verify-ybe",
            Command::VerifySmatrix { .. } => "verify-smatrix",
            Command::Reparam { .. } => "reparam",
            Command::Bosonize { .. } => "bosonize",
            Command::Spectral { .. } => "spectral",
            Command::Simulate { .. } => "simulate",
            Command::Conjugation { .. } => "conjugation",
        }
    }

    /// Parameters as a key-value map for result records.
    pub fn parameters(&self) -> BTreeMap<String, Value> {
        let v = match self {
            Command::VerifyAlgebra => json!({}),
            Command::VerifyYbe { seed, samples, tol } => json!({"seed": seed, "samples": samples, "tol": tol}),
            Command::VerifySmatrix { seed, samples, tol } => json!({"seed": seed, "samples": samples, "tol": tol}),
            Command::Reparam { jpar, jperp, tol } => json!({"j_par": jpar, "j_perp": jperp, "tol": tol}),
            Command::Bosonize { window, flavors, check, a_over_l, x_over_l } => json!({
                "window": window,
                "flavors": flavors,
                "check": format!("{check:?}").to_lowercase(),
                "a_over_l": a_over_l,
                "x_over_l": x_over_l,
            }),
            Command::Spectral { n_modes, alpha, omega_c, center, width, tol } => json!({
                "n_modes": n_modes, "alpha": alpha, "omega_c": omega_c,
                "center": center, "width": width, "tol": tol,
            }),
            Command::Simulate { config } => json!({"config": config}),
            Command::Conjugation { n_modes, n_max, a_over_l, jpar } => json!({
                "n_modes": n_modes, "n_max": n_max, "a_over_l": a_over_l, "j_par": jpar,
            }),
        };
        match v {
            Value::Object(m) => m.into_iter().collect(),
            _ => BTreeMap::new(),
        }
    }

}

/// Parsed invocation.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub output_path: Option<PathBuf>,
}

/// Parse `argv` (including the program name).
pub fn parse_command<I, T>(argv: I) -> Result<RunConfig, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv)?;
    Ok(RunConfig { command: cli.command, output_path: cli.out })
}
