//! # gpvortex
//!
//! A numerical laboratory for the ground states of a rotating two-dimensional
//! superfluid in a homogeneous trap (`k r^s` plus a quadratic term), built
//! around the Gross-Pitaevskii energy functional in its two standard
//! rescalings. The crate computes closed-form Thomas-Fermi theory and critical
//! rotation speeds, minimizes the radial and full 2D functionals, constructs
//! the classical trial states (vortex lattice, giant vortex), and analyzes
//! phase singularities: plaquette windings, circle degrees, vorticity
//! statistics, hole detection and the second-variation symmetry-breaking test.
//!
//! Modules mirror the pipeline:
//!
//! - [`params`]: physical/reduced parameters and the maps between scalings.
//! - [`analytic`]: Thomas-Fermi profiles, effective potentials, critical
//!   speeds, the Gaussian reference profile — the oracle layer.
//! - [`radial`]: 1D constrained minimizers (ground profiles, giant vortex,
//!   annulus-restricted and symmetric variants, fixed-winding states) plus
//!   the potential-function and second-variation diagnostics.
//! - [`gp2d`]: the full 2D complex minimizer, trial-state constructors and
//!   energy-decoupling diagnostics.
//! - [`vortex`]: phase-singularity analysis of 2D fields.
//! - [`cli`]: configuration, parameter sweeps, binary field dumps, CSV/JSON
//!   reports and PPM rendering; drives the `gpvortex` binary.
//!
//! Start with the `examples/` directory: each example is a runnable tour of
//! one capability (`cargo run --release -p gpvortex --example critical_speeds`).

pub mod analytic;
pub mod cli;
pub mod error;
pub mod gp2d;
pub mod numerics;
pub mod params;
pub mod radial;
pub mod vortex;

pub use error::{GpError, Result};
