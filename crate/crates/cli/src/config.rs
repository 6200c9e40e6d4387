//! Run-wide tolerances, caps and grid sizes.

use clap::{Args, ValueEnum};
use serde::Serialize;

use bergman_core::ballquad::{BallGrid, GridLayout, GridSpec};
use bergman_core::Result;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

pub const MIN_MAX_TERMS: usize = 1_000;
pub const MIN_K_MAX: u64 = 1_000;
pub const MIN_GRID: usize = 8;

#[derive(Debug, Clone, Serialize, Args)]
pub struct RunConfig {
    /// Relative tolerance for hypergeometric series.
    #[arg(long, global = true, default_value_t = 1e-14)]
    pub series_tol: f64,
    /// Relative tolerance of the internal two-grid quadrature check.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub quad_tol: f64,
    /// Term cap for hypergeometric series.
    #[arg(long, global = true, default_value_t = 100_000)]
    pub max_terms: usize,
    /// Degree bound for random coefficient vectors.
    #[arg(long, global = true, default_value_t = 20)]
    pub max_degree: u64,
    /// Singular value count for Dixmier trace estimates.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    pub k_max: u64,
    /// Radial quadrature nodes.
    #[arg(long, global = true, default_value_t = 128)]
    pub radial: usize,
    /// Angular quadrature nodes.
    #[arg(long, global = true, default_value_t = 256)]
    pub angular: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 20_240_601)]
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            series_tol: 1e-14,
            quad_tol: 1e-9,
            max_terms: 100_000,
            max_degree: 20,
            k_max: 1_000_000,
            radial: 128,
            angular: 256,
            format: Format::Json,
            seed: 20_240_601,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> std::result::Result<(), CliError> {
        let positive = |name: &str, x: f64| {
            if x > 0.0 && x.is_finite() {
                Ok(())
            } else {
                Err(CliError::Usage(format!("{name} must be positive, got {x}")))
            }
        };
        positive("series-tol", self.series_tol)?;
        positive("quad-tol", self.quad_tol)?;
        if self.max_terms < MIN_MAX_TERMS {
            return Err(CliError::Usage(format!("max-terms must be at least {MIN_MAX_TERMS}")));
        }
        if self.k_max < MIN_K_MAX {
            return Err(CliError::Usage(format!("k-max must be at least {MIN_K_MAX}")));
        }
        if self.radial < MIN_GRID || self.angular < MIN_GRID {
            return Err(CliError::Usage(format!("radial and angular must be at least {MIN_GRID}")));
        }
        if self.max_degree == 0 {
            return Err(CliError::Usage("max-degree must be at least 1".into()));
        }
        Ok(())
    }

    /// Reduced ball rule of the configured size; `d >= 2` uses half as many
    /// inner-disk radial nodes as radial nodes.
    pub fn ball_grid(&self, d: u32) -> Result<BallGrid> {
        let layout = if d == 1 { GridLayout::Polar } else { GridLayout::Slice };
        let disk_radial = if d == 1 { 0 } else { (self.radial / 2).max(MIN_GRID) };
        BallGrid::new(GridSpec { d, layout, radial: self.radial, angular: self.angular, disk_radial })
    }
}
