//! Tridiagonal walk Hamiltonians on the configuration line.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)] // inherent methods shadow these when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::SymTridiagonal;

/// Hop couplings for the perfect-transfer line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CouplingForm {
    /// `J_t = sqrt(t (Tbar + 1 - t))`, mirror symmetric.
    #[default]
    Standard,
    /// `J_t = sqrt(Tbar (Tbar - t))` taken literally; the last hop vanishes.
    Literal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineVariant {
    /// Unit hops with unit start and stop projectors in the corners.
    StartStop,
    /// Stop projector dropped and `m` extra unit hops appended past the stop
    /// state.
    DummyPadding(usize),
    /// Both projectors dropped; `m` free sites before the start and after
    /// the stop state.
    RunwayLanding(usize),
    /// Engineered couplings and zero diagonal.
    PerfectTransfer(CouplingForm),
}

impl fmt::Display for LineVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LineVariant::StartStop => write!(f, "start-stop"),
            LineVariant::DummyPadding(m) => write!(f, "dummy-padding:{m}"),
            LineVariant::RunwayLanding(m) => write!(f, "runway-landing:{m}"),
            LineVariant::PerfectTransfer(CouplingForm::Standard) => write!(f, "perfect-transfer"),
            LineVariant::PerfectTransfer(CouplingForm::Literal) => write!(f, "perfect-transfer-literal"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineWarning {
    /// Hop `hop` (coupling sites `hop - 1` and `hop`) has zero strength, so
    /// the chain falls apart there.
    Disconnected { hop: usize },
}

impl fmt::Display for LineWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LineWarning::Disconnected { hop } => {
                write!(f, "coupling on hop {hop} is zero; the line is disconnected")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LineHamiltonian {
    pub variant: LineVariant,
    pub tbar: usize,
    pub matrix: SymTridiagonal,
    /// Site of `psi_0`.
    pub start: usize,
    /// Site of `psi_Tbar`.
    pub target: usize,
    pub warnings: Vec<LineWarning>,
}

impl LineHamiltonian {
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Probability of the computation having finished: weight on the target
    /// site and everything after it.
    pub fn completion_probability(&self, amps: &[crate::qcore::Amplitude]) -> f64 {
        amps[self.target..].iter().map(|a| a.norm_sqr()).sum()
    }
}

pub fn build_line(tbar: usize, variant: LineVariant) -> Result<LineHamiltonian> {
    if tbar < 1 {
        return Err(Error::Domain(alloc::format!("walk length {tbar} must be at least 1")));
    }
    let mut warnings = Vec::new();
    let (matrix, start, target) = match variant {
        LineVariant::StartStop => {
            let mut diag = vec![0.0; tbar + 1];
            diag[0] = 1.0;
            diag[tbar] = 1.0;
            (SymTridiagonal::new(diag, vec![1.0; tbar])?, 0, tbar)
        }
        LineVariant::DummyPadding(m) => {
            let dim = tbar + 1 + m;
            let mut diag = vec![0.0; dim];
            diag[0] = 1.0;
            (SymTridiagonal::new(diag, vec![1.0; dim - 1])?, 0, tbar)
        }
        LineVariant::RunwayLanding(m) => {
            let dim = tbar + 1 + 2 * m;
            (SymTridiagonal::new(vec![0.0; dim], vec![1.0; dim - 1])?, m, m + tbar)
        }
        LineVariant::PerfectTransfer(form) => {
            let tb = tbar as f64;
            let off: Vec<f64> = (1..=tbar)
                .map(|t| {
                    let t = t as f64;
                    match form {
                        CouplingForm::Standard => (t * (tb + 1.0 - t)).sqrt(),
                        CouplingForm::Literal => (tb * (tb - t)).sqrt(),
                    }
                })
                .collect();
            for (i, &j) in off.iter().enumerate() {
                if j == 0.0 {
                    warnings.push(LineWarning::Disconnected { hop: i + 1 });
                }
            }
            (SymTridiagonal::new(vec![0.0; tbar + 1], off)?, 0, tbar)
        }
    };
    Ok(LineHamiltonian {
        variant,
        tbar,
        matrix,
        start,
        target,
        warnings,
    })
}
