//! Discretization of the two directional continua.

use super::OracleError;
use crate::model::{coupling_fn, SystemParams};

/// Uniform frequency grid shared by the forward and backward mode families.
///
/// Mode `k` sits at `omega_k = omega_min + k d_omega` and couples with
/// `g_k = g(omega_k) sqrt(d_omega)`, so the discrete golden-rule decay rate
/// reproduces the continuum `Gamma` up to window-truncation corrections of
/// order `Gamma / margin`.
#[derive(Clone, Debug)]
pub struct ModeGrid {
    omega_min: f64,
    omega_max: f64,
    n_modes: usize,
    d_omega: f64,
    omegas: Vec<f64>,
    detunings: Vec<f64>,
    couplings: Vec<f64>,
    omega_q: f64,
    gamma: f64,
    v_g: f64,
}

/// Build a grid spanning `margin` either side of the qubit frequency with
/// `n_modes` modes per direction.
pub fn build_grid(
    params: &SystemParams,
    n_modes: usize,
    margin: f64,
) -> Result<ModeGrid, OracleError> {
    if n_modes < 100 {
        return Err(OracleError::TooFewModes { n: n_modes });
    }
    let minimum = 20.0 * params.gamma;
    if !(margin >= minimum) {
        return Err(OracleError::MarginTooSmall { margin, minimum });
    }
    let omega_min = params.omega_q - margin;
    if !(omega_min > 0.0) {
        return Err(OracleError::WindowNotPositive { omega_min });
    }
    let omega_max = params.omega_q + margin;
    let d_omega = (omega_max - omega_min) / (n_modes - 1) as f64;
    let g = coupling_fn(params);
    let mut omegas = Vec::with_capacity(n_modes);
    let mut detunings = Vec::with_capacity(n_modes);
    let mut couplings = Vec::with_capacity(n_modes);
    for k in 0..n_modes {
        let w = omega_min + k as f64 * d_omega;
        omegas.push(w);
        detunings.push(w - params.omega_q);
        couplings.push(g(w) * d_omega.sqrt());
    }
    Ok(ModeGrid {
        omega_min,
        omega_max,
        n_modes,
        d_omega,
        omegas,
        detunings,
        couplings,
        omega_q: params.omega_q,
        gamma: params.gamma,
        v_g: params.v_g,
    })
}

impl ModeGrid {
    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn d_omega(&self) -> f64 {
        self.d_omega
    }

    pub fn window(&self) -> (f64, f64) {
        (self.omega_min, self.omega_max)
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    pub fn detunings(&self) -> &[f64] {
        &self.detunings
    }

    pub fn couplings(&self) -> &[f64] {
        &self.couplings
    }

    pub fn omega_q(&self) -> f64 {
        self.omega_q
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn v_g(&self) -> f64 {
        self.v_g
    }

    pub fn max_detuning(&self) -> f64 {
        (self.omega_max - self.omega_q).max(self.omega_q - self.omega_min)
    }

    /// Whether the spacing resolves the linewidth (`d_omega <= Gamma / 10`).
    /// Coarser grids are usable but carry larger discretization error.
    pub fn resolves_linewidth(&self) -> bool {
        self.d_omega <= self.gamma / 10.0
    }

    /// The grid-level Rabi parameter `Lambda_grid = sum_k g_k^2` over both
    /// directions; splitting features of the discrete model sit at
    /// `+/- 2 sqrt(Lambda_grid)`, not at the analytic input `Lambda`.
    pub fn lambda_grid(&self) -> f64 {
        2.0 * self.couplings.iter().map(|g| g * g).sum::<f64>()
    }

    /// Half the finite-grid recurrence time `2 pi / d_omega`; evaluations
    /// past this are flagged.
    pub fn recurrence_guard_time(&self) -> f64 {
        std::f64::consts::PI / self.d_omega
    }
}
