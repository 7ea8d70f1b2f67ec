//! Batch front end for the `cxcoulomb-core` spectra: level tables, figure
//! data, verification suites and rotated-contour solves, with CSV and JSON
//! output.

pub mod commands;
pub mod error;
pub mod oracle;
pub mod table;
pub mod verify;

pub use error::RunError;
