//! Brute-force validator: the two directional continua are discretized onto
//! `N` modes each, the Hamiltonian is applied matrix-free in the one- and
//! two-excitation sectors, and field matrix elements / correlation functions
//! are extracted from straight time evolution without using any closed form.
//!
//! Everything runs in the frame rotating at the qubit frequency, where the
//! one- and two-excitation blocks are time-independent with diagonal entries
//! given by detunings. Field-operator applications keep the full-frequency
//! spatial phases; moduli of extracted amplitudes are frame-independent.

mod evolve;
mod field;
mod grid;
mod observe;
mod state;

pub use evolve::{evolve_one_exc, evolve_two_exc, EvolutionPlan, Trajectory};
pub use field::{apply_eplus_one, apply_eplus_two};
pub use grid::{build_grid, ModeGrid};
pub use observe::{
    directional_probabilities, oracle_g1, oracle_g1_samples, oracle_g1_two, oracle_g2,
    oracle_g2_sweep, OracleValue,
};
pub use state::{OneExcState, TwoExcState};

/// Largest per-direction mode count the two-excitation sector accepts
/// (`~N^2` amplitudes; beyond this the state no longer fits a desk-scale
/// budget).
pub const MAX_TWO_EXC_MODES: usize = 400;

#[derive(Clone, Debug, PartialEq)]
pub enum OracleError {
    TooFewModes { n: usize },
    MarginTooSmall { margin: f64, minimum: f64 },
    WindowNotPositive { omega_min: f64 },
    DimensionOverflow { n: usize, max: usize },
    StepTooLarge { dt: f64, max_detuning: f64 },
    BadSnapshots,
}

impl std::fmt::Display for OracleError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::TooFewModes { n } => write!(f, "need at least 100 modes per direction, got {n}"),
            Self::MarginTooSmall { margin, minimum } => {
                write!(f, "window margin {margin} is below the minimum {minimum} (20 linewidths)")
            }
            Self::WindowNotPositive { omega_min } => {
                write!(f, "window lower edge {omega_min} must stay above zero frequency")
            }
            Self::DimensionOverflow { n, max } => write!(
                f,
                "two-excitation sector with N = {n} modes per direction exceeds the supported maximum {max}; use a smaller N"
            ),
            Self::StepTooLarge { dt, max_detuning } => write!(
                f,
                "dt = {dt} violates the stability bound dt * max|detuning| <= 0.1 (max detuning {max_detuning})"
            ),
            Self::BadSnapshots => write!(f, "snapshot times must be finite, non-negative and non-decreasing"),
        }
    }
}

impl std::error::Error for OracleError {}
