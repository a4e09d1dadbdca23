//! Unitary propagation on the line and amplitude peak search.

use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)] // inherent methods shadow these when std is linked
use num_traits::Float;

use super::line::LineHamiltonian;
use crate::error::{Error, Result};
use crate::linalg::{SpectralDecomposition, SymTridiagonal};
use crate::qcore::{Amplitude, BasisLabel, Statevector};

/// Largest line handled by dense eigendecomposition.
pub const MAX_PROPAGATE_DIM: usize = 20_000;
/// Smallest sample count accepted by [`peak_scan`].
pub const MIN_PEAK_SAMPLES: usize = 100;
/// Width to which the golden-section search narrows the peak time.
pub const PEAK_TIME_TOL: f64 = 1e-6;

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite("time"))
    }
}

/// Cached eigendecomposition of a line Hamiltonian.
#[derive(Debug, Clone)]
pub struct Propagator {
    spectrum: SpectralDecomposition,
}

impl Propagator {
    pub fn new(h: &SymTridiagonal) -> Result<Self> {
        if h.dim() > MAX_PROPAGATE_DIM {
            return Err(Error::Capacity {
                what: "propagation dimension",
                limit: MAX_PROPAGATE_DIM,
            });
        }
        Ok(Self { spectrum: h.eigen()? })
    }

    pub fn dim(&self) -> usize {
        self.spectrum.dim()
    }

    pub fn spectrum(&self) -> &SpectralDecomposition {
        &self.spectrum
    }

    /// `exp(-i H t) |state>`.
    pub fn evolve(&self, state: &Statevector, t: f64) -> Result<Statevector> {
        check_time(t)?;
        if state.basis() != BasisLabel::WalkLine {
            return Err(Error::WrongBasis);
        }
        if state.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: state.dim(),
            });
        }
        Statevector::new(self.spectrum.evolve(state.amps(), t), BasisLabel::WalkLine)
    }

    /// `<target| exp(-i H t) |source>`.
    pub fn amplitude(&self, source: usize, target: usize, t: f64) -> Result<Amplitude> {
        check_time(t)?;
        if source >= self.dim() || target >= self.dim() {
            return Err(Error::Domain(format!(
                "site out of range for a line of {} sites",
                self.dim()
            )));
        }
        Ok(self.spectrum.transition_amplitude(source, target, t))
    }
}

/// `exp(-i H t) |state>` by full eigendecomposition.
pub fn propagate(h: &SymTridiagonal, state: &Statevector, t: f64) -> Result<Statevector> {
    Propagator::new(h)?.evolve(state, t)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub time: f64,
    pub abs_amp: f64,
    pub amplitude: Amplitude,
}

/// Start-to-target amplitude at `samples` evenly spaced times on
/// `[0, t_max]`.
pub fn amplitude_trace(h: &LineHamiltonian, t_max: f64, samples: usize) -> Result<Vec<(f64, Amplitude)>> {
    check_time(t_max)?;
    if t_max < 0.0 || samples < 2 {
        return Err(Error::Domain(format!(
            "amplitude trace needs t_max >= 0 and at least 2 samples (got {t_max}, {samples})"
        )));
    }
    let p = Propagator::new(&h.matrix)?;
    let step = t_max / (samples - 1) as f64;
    (0..samples)
        .map(|i| {
            let t = step * i as f64;
            Ok((t, p.amplitude(h.start, h.target, t)?))
        })
        .collect()
}

/// Largest `|<target| exp(-i H t) |start>|` on `[0, t_max]`: grid scan, ties
/// to the earlier time, then golden-section refinement inside the
/// neighbouring grid cells.
pub fn peak_scan(h: &LineHamiltonian, t_max: f64, samples: usize) -> Result<Peak> {
    check_time(t_max)?;
    if samples < MIN_PEAK_SAMPLES {
        return Err(Error::Domain(format!(
            "peak scan needs at least {MIN_PEAK_SAMPLES} samples, got {samples}"
        )));
    }
    if t_max <= 0.0 {
        return Err(Error::Domain(format!("peak scan needs t_max > 0, got {t_max}")));
    }
    let p = Propagator::new(&h.matrix)?;
    let f = |t: f64| p.spectrum.transition_amplitude(h.start, h.target, t);
    let step = t_max / (samples - 1) as f64;
    let mut best = (0usize, -1.0f64);
    for i in 0..samples {
        let a = f(step * i as f64).norm();
        if a > best.1 {
            best = (i, a);
        }
    }
    let lo = step * best.0.saturating_sub(1) as f64;
    let hi = (step * (best.0 + 1) as f64).min(t_max);
    let t_star = golden_max(|t| f(t).norm(), lo, hi, PEAK_TIME_TOL);
    let grid_t = step * best.0 as f64;
    let (time, amplitude) = if f(t_star).norm() > best.1 {
        (t_star, f(t_star))
    } else {
        (grid_t, f(grid_t))
    };
    Ok(Peak {
        time,
        abs_amp: amplitude.norm(),
        amplitude,
    })
}

/// Golden-section maximisation of a unimodal function on `[a, b]`.
fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    (a + b) / 2.0
}

/// `exp(-i H dt) x` by a Taylor series summed until the terms fall below
/// double-precision resolution. Exact to rounding when `||H|| dt` is small.
pub(crate) fn taylor_step(h: &SymTridiagonal, x: &[Amplitude], dt: f64) -> Vec<Amplitude> {
    let mut out = x.to_vec();
    let mut term = x.to_vec();
    let scale = x.iter().map(|a| a.norm()).fold(0.0, f64::max);
    for k in 1..=40 {
        let hx = h.apply(&term);
        let factor = Amplitude::new(0.0, -dt / k as f64);
        let mut mag = 0.0f64;
        for (t, v) in term.iter_mut().zip(hx) {
            *t = v * factor;
            mag = mag.max(t.norm());
        }
        for (o, t) in out.iter_mut().zip(&term) {
            *o += t;
        }
        if mag <= f64::EPSILON * 1e-3 * scale {
            break;
        }
    }
    out
}
