//! Steklov and mixed Steklov-Neumann eigenvalues on doubly connected domains.
//!
//! * [`closed_form`]: exact spectra of concentric annuli in any dimension.
//! * [`analysis`]: grid scans of the inequalities that order those spectra.
//! * [`geometry`]: planar domains with a circular hole, meshing, quadrature.
//! * [`fem`]: P1 discretization and the discrete Dirichlet-to-Neumann
//!   eigenproblem.
//! * [`experiments`]: table reproduction, hole-position sweeps and
//!   integral-inequality checks driven by the `steklov` CLI.

pub mod analysis;
pub mod closed_form;
pub mod experiments;
pub mod fem;
pub mod geometry;

pub use closed_form::{AnnulusSpec, Branch, Problem, RadialProfile, SpectralLine};
