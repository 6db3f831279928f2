//! Table reproduction, hole-position sweeps and verification suites.

mod config;
mod golden;
mod integrals;
mod sweep;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::{lemma_suite, GridError, GridSpec, VerificationReport};
use crate::closed_form::ClosedFormError;
use crate::fem::FemError;
use crate::geometry::GeometryError;

pub use config::{parse_domain_spec, parse_grid_config, KeyValues};
pub use golden::{
    golden_rows, reproduce_table, GoldenRow, Quantity, TableArtifact, TableEntry, TableRow, COUNTEREXAMPLES,
    DISK, DISK_SWEEP, ELLIPSE, ELLIPSE_DIAGONAL, ELLIPSE_X, ELLIPSE_Y, RECTANGLE,
};
pub use integrals::{verify_integral_lemmas, CheckKind, IntegralCheck, IntegralReport};
pub use sweep::{run_sweep, trend, SweepPath, SweepResult, SweepRow, SweepSpec, Trend, Verdict, MONOTONE_SLACK};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExperimentError {
    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },
    #[error("invalid grid: {0}")]
    Grid(#[from] GridError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Fem(#[from] FemError),
    #[error(transparent)]
    ClosedForm(#[from] ClosedFormError),
    #[error("unknown table {0} (expected 1 to 4)")]
    UnknownTable(u8),
    #[error("{0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, ExperimentError>;

/// Fixed-point rendering with six significant digits.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let decimals = (5 - x.abs().log10().floor() as i32).max(0) as usize;
    format!("{x:.decimals$}")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaBundle {
    pub grid: GridSpec,
    pub reports: Vec<VerificationReport>,
    pub all_pass: bool,
}

/// Runs every grid check on the grid described by `config` (see
/// [`parse_grid_config`]).
pub fn verify_lemmas(config: &str) -> Result<LemmaBundle> {
    let grid = parse_grid_config(config)?;
    let reports = lemma_suite(&grid)?;
    let all_pass = reports.iter().all(|r| r.pass);
    Ok(LemmaBundle { grid, reports, all_pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(sig6(0.17830094339717), "0.178301");
        assert_eq!(sig6(0.0697002), "0.0697002");
        assert_eq!(sig6(-3.0), "-3.00000");
        assert_eq!(sig6(123456.7), "123457");
        assert_eq!(sig6(0.0), "0");
    }

    #[test]
    fn lemma_bundle_on_small_grid() {
        let b = verify_lemmas("n_values = 2\nratio_values = 5\n").unwrap();
        assert!(b.all_pass);
        let order = b.reports.iter().find(|r| r.claim == "sigma21_le_sigma02").unwrap();
        assert!((order.worst_margin - 0.347513524107).abs() < 1e-9);
        assert!(matches!(verify_lemmas("n_values =\n"), Err(ExperimentError::Grid(GridError::Empty(_)))));
    }
}
