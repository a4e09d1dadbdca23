//! Linear interpolation from the initial penalty Hamiltonian to the
//! history-state Hamiltonian, written in the configuration basis.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // inherent methods shadow these when std is linked
use num_traits::Float;

use super::propagate::taylor_step;
use crate::error::{Error, Result};
use crate::linalg::SymTridiagonal;
use crate::qcore::{Amplitude, BasisLabel, Statevector};

/// Largest `||H|| dt` allowed per piecewise-constant step.
pub const MAX_STEP_PHASE: f64 = 0.1;
/// Gaps below this count as a degenerate ground state.
pub const DEGENERACY_TOL: f64 = 1e-12;
/// Smallest accepted gap-scan grid.
pub const MIN_GAP_GRID: usize = 11;

#[derive(Debug, Clone, PartialEq)]
pub struct AdiabaticFamily {
    pub tbar: usize,
    /// `diag(0, 1, ..., 1)`.
    pub h_init: SymTridiagonal,
    /// Corners 1/2, interior diagonal 1, hops -1/2.
    pub h_final: SymTridiagonal,
    pub delta: f64,
    pub epsilon: f64,
    /// Constant in front of the runtime bound.
    pub omega: f64,
}

impl AdiabaticFamily {
    pub fn new(tbar: usize, delta: f64, epsilon: f64) -> Result<Self> {
        if tbar < 1 {
            return Err(Error::Domain(format!("walk length {tbar} must be at least 1")));
        }
        let dim = tbar + 1;
        let mut init = vec![1.0; dim];
        init[0] = 0.0;
        let mut fin = vec![1.0; dim];
        fin[0] = 0.5;
        fin[tbar] = 0.5;
        Ok(Self {
            tbar,
            h_init: SymTridiagonal::new(init, vec![0.0; tbar])?,
            h_final: SymTridiagonal::new(fin, vec![-0.5; tbar])?,
            delta,
            epsilon,
            omega: 1.0,
        })
    }

    pub fn with_omega(mut self, omega: f64) -> Self {
        self.omega = omega;
        self
    }

    pub fn dim(&self) -> usize {
        self.tbar + 1
    }

    /// `(1 - s) H_init + s H_final`.
    pub fn at(&self, s: f64) -> SymTridiagonal {
        self.h_init.combine(1.0 - s, &self.h_final, s)
    }

    /// Uniform superposition over all configurations.
    pub fn history_state(&self) -> Statevector {
        let a = Amplitude::new(1.0 / (self.dim() as f64).sqrt(), 0.0);
        Statevector::new(vec![a; self.dim()], BasisLabel::WalkLine).expect("finite amplitudes")
    }

    /// Bound on `||H(s)||` over the whole schedule (norms are convex in s).
    pub fn max_norm(&self) -> Result<f64> {
        Ok(self.h_init.spectral_norm()?.max(self.h_final.spectral_norm()?))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapReport {
    pub s: Vec<f64>,
    pub gaps: Vec<f64>,
    pub min_gap: f64,
    /// `1 / (2 (Tbar + 1)^2)`.
    pub bound: f64,
    pub pass: bool,
}

pub fn gap_lower_bound(tbar: usize) -> f64 {
    let d = (tbar + 1) as f64;
    1.0 / (2.0 * d * d)
}

/// Ground-state gap of `H(s)` on an evenly spaced grid over `[0, 1]`.
pub fn gap_scan(fam: &AdiabaticFamily, grid_points: usize) -> Result<GapReport> {
    if grid_points < MIN_GAP_GRID {
        return Err(Error::Domain(format!(
            "gap scan needs at least {MIN_GAP_GRID} grid points, got {grid_points}"
        )));
    }
    let s: Vec<f64> = (0..grid_points).map(|i| i as f64 / (grid_points - 1) as f64).collect();
    let gaps = s.iter().map(|&si| gap_at(fam, si)).collect::<Result<Vec<f64>>>()?;
    let min_gap = gaps.iter().copied().fold(f64::INFINITY, f64::min);
    let bound = gap_lower_bound(fam.tbar);
    Ok(GapReport {
        s,
        gaps,
        min_gap,
        bound,
        pass: min_gap >= bound,
    })
}

/// `lambda_1 - lambda_0` of `H(s)`.
pub fn gap_at(fam: &AdiabaticFamily, s: f64) -> Result<f64> {
    let ev = fam.at(s).eigenvalues()?;
    let gap = ev[1] - ev[0];
    if gap < DEGENERACY_TOL {
        return Err(Error::Degeneracy { s, gap });
    }
    Ok(gap)
}

/// `omega * norm^(1+delta) / (eps^delta * gap^(2+delta))`.
pub fn runtime_bound(norm: f64, min_gap: f64, delta: f64, epsilon: f64, omega: f64) -> Result<f64> {
    if epsilon.is_nan() || delta.is_nan() || epsilon <= 0.0 || delta <= 0.0 {
        return Err(Error::Domain(format!(
            "runtime bound needs epsilon > 0 and delta > 0 (got {epsilon}, {delta})"
        )));
    }
    if min_gap.is_nan() || min_gap <= 0.0 {
        return Err(Error::Domain(format!(
            "runtime bound needs a positive gap, got {min_gap}"
        )));
    }
    Ok(omega * norm.powf(1.0 + delta) / (epsilon.powf(delta) * min_gap.powf(2.0 + delta)))
}

/// Runtime bound with the spectral norm of `H_final - H_init`.
pub fn adiabatic_runtime(fam: &AdiabaticFamily, min_gap: f64) -> Result<f64> {
    let diff = fam.h_final.combine(1.0, &fam.h_init, -1.0);
    runtime_bound(diff.spectral_norm()?, min_gap, fam.delta, fam.epsilon, fam.omega)
}

/// Fewest steps meeting the per-step phase limit for `total_time`.
pub fn min_steps(fam: &AdiabaticFamily, total_time: f64) -> Result<usize> {
    Ok(((total_time * fam.max_norm()? / MAX_STEP_PHASE).ceil() as usize).max(1))
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdiabaticOutcome {
    pub state: Statevector,
    /// `|<history|state>|`.
    pub fidelity: f64,
}

/// Evolves `e_0` under `H(t / total_time)` held constant on each of `steps`
/// equal sub-intervals (sampled at the midpoint), each propagated exactly.
pub fn adiabatic_run(fam: &AdiabaticFamily, total_time: f64, steps: usize) -> Result<AdiabaticOutcome> {
    if !total_time.is_finite() || total_time < 0.0 {
        return Err(Error::Domain(format!(
            "total time must be finite and >= 0, got {total_time}"
        )));
    }
    let mut amps = Statevector::line_site(fam.dim(), 0).into_amps();
    if total_time > 0.0 {
        if steps == 0 {
            return Err(Error::Resolution(f64::INFINITY));
        }
        let dt = total_time / steps as f64;
        let phase = dt * fam.max_norm()?;
        if phase > MAX_STEP_PHASE * (1.0 + 1e-12) {
            return Err(Error::Resolution(phase));
        }
        for k in 0..steps {
            let s = (k as f64 + 0.5) / steps as f64;
            amps = taylor_step(&fam.at(s), &amps, dt);
        }
    }
    let state = Statevector::new(amps, BasisLabel::WalkLine)?;
    let fidelity = fam.history_state().inner(&state).norm();
    Ok(AdiabaticOutcome { state, fidelity })
}
