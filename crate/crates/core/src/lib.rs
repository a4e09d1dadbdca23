//! Simulation and verification of a programmable Hamiltonian on a ring of
//! eight-state sites: Kitaev-basis circuits, the programmable circuit V and
//! its compiler, ring configurations and transition rules, the restricted
//! Hamiltonian, and quantum-walk and adiabatic dynamics on the line.

#![no_std]

extern crate alloc;

pub mod dynamics;
pub mod error;
pub mod hamspace;
pub mod linalg;
pub mod qcore;
pub mod ring;
pub mod rules;
pub mod vprog;

pub use error::{Error, Result};
