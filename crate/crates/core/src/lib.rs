//! Dirichlet spectra of the vibrating string `-y'' = λ ρ(x) y` on `[0, 1]`.
//!
//! The crate is organised bottom-up:
//!
//! * [`density`] builds positive coefficient functions and homotopy families.
//! * [`prufer`] computes eigenvalues and normalized eigenfunctions by shooting
//!   on the Prüfer phase angle.
//! * [`oracle`] is an independent finite-difference eigensolver used to
//!   cross-check the shooting solver.
//! * [`transform`] reduces `-(p y')' = λ ρ y` to a string equation.
//! * [`verify`] turns eigenvalue inequalities and identities into report rows.
//! * [`cli`] wires everything to the `spectra` binary.
//!
//! Data-parallel sweeps go through [`exec`], which uses rayon when the
//! `parallel` feature is enabled and falls back to a plain loop otherwise.

// Negated float comparisons are how NaN inputs get rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod density;
pub mod error;
pub mod exec;
pub mod oracle;
pub mod prufer;
pub mod quadrature;
pub mod transform;
pub mod verify;

pub use density::{Density, DensityKind, DensitySpec, HomotopyFamily};
pub use error::{Error, Result};
pub use prufer::{Eigenpair, SolverConfig, Spectrum};
