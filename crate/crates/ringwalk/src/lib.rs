//! File formats, scans and command-line runs for the programmable ring
//! Hamiltonian toolkit.

pub mod cli;
pub mod formats;
pub mod manifest;
pub mod scan;
pub mod suite;
