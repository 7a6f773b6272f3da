//! Numerical laboratory for the collapse of attractive, rotating 2D Bose
//! gases near the critical coupling `a*`.
//!
//! * [`profile`] shoots the radial Gagliardo–Nirenberg ground state `Q` and
//!   derives `a*`, `λ*` and `λ̃`.
//! * [`grid`] provides the periodic spectral discretization.
//! * [`functional`] evaluates the Gross–Pitaevskii and Hartree energies.
//! * [`minimizer`] finds ground states on the unit sphere.
//! * [`asymptotics`] runs collapse scans and checks the blow-up laws.
//! * [`cli`] is the command-line front end.

pub mod asymptotics;
pub mod cli;
pub mod error;
pub mod grid;
pub mod minimizer;
pub mod functional;
pub mod profile;

#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
