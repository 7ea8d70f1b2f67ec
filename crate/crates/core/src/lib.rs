//! Bound-state spectra of Dirac and Klein-Gordon particles in imaginary
//! (PT-symmetric) Coulomb fields.
//!
//! The crate is split into the closed-form side and two independent
//! numerical checks of it:
//!
//! * [`qnum`], [`transform`] and [`spectra`] carry the exact solution: channel
//!   bookkeeping, the similarity transformation that decouples the radial
//!   Dirac system, and the resulting energy formulas with their root filter.
//! * [`analytic`] rebuilds the analytic eigenfunctions and measures how well
//!   they satisfy the reduced radial equations.
//! * [`contour`] discretizes the radial equation on a rotated contour and
//!   solves the energy-dependent eigenproblem self-consistently, using the
//!   dense and tridiagonal kernels in [`eigensolve`].
//!
//! All energies are reported as the dimensionless ratio `E/m` with
//! `hbar = c = 1`.
//!
//! The crate is `no_std` (with `alloc`) when built without the default `std`
//! feature.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod analytic;
pub mod contour;
pub mod eigensolve;
mod error;
pub mod qnum;
pub mod spectra;
pub mod tol;
pub mod transform;

pub use error::{Error, Result};
pub use num_complex::Complex64 as Complex;

/// The imaginary unit.
pub const I: Complex = Complex::new(0.0, 1.0);

/// Which relativistic wave equation a level belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    Dirac,
    KleinGordon,
}

impl core::fmt::Display for Model {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Model::Dirac => f.write_str("dirac"),
            Model::KleinGordon => f.write_str("kg"),
        }
    }
}
