//! Line Hamiltonians, propagation, the infinite-line Bessel reference and
//! the adiabatic interpolation.

pub mod adiabatic;
pub mod bessel;
pub mod line;
pub mod propagate;

pub use adiabatic::{
    adiabatic_run, adiabatic_runtime, gap_lower_bound, gap_scan, min_steps, runtime_bound, AdiabaticFamily,
    AdiabaticOutcome, GapReport,
};
pub use bessel::{bessel_j, infinite_line_reference};
pub use line::{build_line, CouplingForm, LineHamiltonian, LineVariant, LineWarning};
pub use propagate::{amplitude_trace, peak_scan, propagate, Peak, Propagator, MIN_PEAK_SAMPLES};
