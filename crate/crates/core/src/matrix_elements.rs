//! Closed-form matrix elements of the positive-frequency field operator
//! between the few-excitation states of the qubit-waveguide system.
//!
//! All values are reported in reduced units (`hbar = d = 1`), so amplitudes
//! carry units of the decay rate. Every qubit-generated contribution is
//! gated by the light cone: it vanishes identically for retarded time
//! `tau_R = t - |x|/v_g < 0`. The free incident term propagates to the
//! right and is attached to `x > 0` only.
//!
//! Scattered terms live on top of Lorentzian denominators
//! `omega - Omega -+ 2 sqrt(Lambda) + i Gamma`; the `1/sqrt(Lambda)`
//! prefactor of the two-excitation photon channel cancels against the
//! splitting of the two denominators, and a series branch takes over when
//! `2 sqrt(Lambda) tau` is too small for that cancellation to be healthy
//! in floating point.

use num_complex::Complex64 as C64;

use crate::model::{coupling_fn, PulseSpectrum, SpaceTimePoint, SystemParams};
use crate::quadrature::{
    integrate_with_plan, oscillation_guard, QuadratureError, SpectralKernel, Tolerance,
};

/// Which transition a matrix element belongs to.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Transition {
    /// `<g,0| E+ |e,0>`: spontaneously emitted photon.
    Spont,
    /// `<g,0| E+ |G,1>`: incident pulse scattering off the ground-state qubit.
    PulseG1,
    /// `<e,0| E+ |E,1>`: photon detected, qubit still excited.
    E0FromE1,
    /// `<g,0| a(omega') E+ |E,1>`: photon detected, one photon left in the
    /// continuum.
    G0AFromE1,
    /// `<g,0| E+ a^dag(omega') |g,0>`: single injected photon detected.
    G0FromAdag,
}

/// A complex field amplitude at one space-time point.
#[derive(Copy, Clone, Debug)]
pub struct FieldMatrixElement {
    pub value: C64,
    pub transition: Transition,
    pub point: SpaceTimePoint,
}

/// The two-part structure of `<g,0| a(omega') E+ |E,1>`.
///
/// In the plane-wave branch `delta_coeff` multiplies `delta(omega' - omega0)`
/// exactly; for smooth spectra it is the ordinary `f(omega')`-proportional
/// direct amplitude. `smooth` is the `g(omega')`-weighted scattered part.
#[derive(Copy, Clone, Debug)]
pub struct DeltaPlusSmooth {
    pub delta_coeff: C64,
    pub smooth: C64,
}

impl DeltaPlusSmooth {
    pub const ZERO: Self =
        Self { delta_coeff: C64::new(0.0, 0.0), smooth: C64::new(0.0, 0.0) };
}

/// `exp(-i (Omega - i Gamma) tau)`: the decaying phase of every
/// qubit-sourced term. Modulus `exp(-Gamma tau)`.
pub(crate) fn decay_phase(params: &SystemParams, tau: f64) -> C64 {
    C64::from_polar((-params.gamma * tau).exp(), -params.omega_q * tau)
}

/// Below this value of `2 sqrt(Lambda) * tau` the paired Rabi denominators
/// are evaluated through the power series instead.
const RABI_SERIES_THRESHOLD: f64 = 1e-4;

/// `<g,0| E+ (x,t) |e,0>`: the spontaneous-photon amplitude,
/// `Gamma exp(-i(Omega - i Gamma) tau_R)` inside the light cone.
pub fn me_spontaneous(pt: &SpaceTimePoint, params: &SystemParams) -> FieldMatrixElement {
    let tau_r = pt.retarded_time(params);
    let value = if tau_r >= 0.0 {
        params.gamma * decay_phase(params, tau_r)
    } else {
        C64::new(0.0, 0.0)
    };
    FieldMatrixElement { value, transition: Transition::Spont, point: *pt }
}

/// Transmission amplitude `t(omega0) = (omega0 - Omega) / (omega0 - Omega + i Gamma)`.
pub fn transmission_amplitude(omega0: f64, params: &SystemParams) -> C64 {
    debug_assert!(omega0 > 0.0);
    let d = C64::new(omega0 - params.omega_q, params.gamma);
    C64::new(omega0 - params.omega_q, 0.0) / d
}

/// Reflection amplitude `r(omega0) = -i Gamma / (omega0 - Omega + i Gamma)`;
/// satisfies `t = 1 + r` and `|t|^2 + |r|^2 = 1` exactly.
pub fn reflection_amplitude(omega0: f64, params: &SystemParams) -> C64 {
    debug_assert!(omega0 > 0.0);
    let d = C64::new(omega0 - params.omega_q, params.gamma);
    C64::new(0.0, -params.gamma) / d
}

/// `<g,0| E+ (x,t) a^dag(omega') |g,0>`: free propagation of the injected
/// photon (right of the qubit only) plus the scattered Lorentzian term.
pub fn me_g0_from_adag(
    omega_prime: f64,
    pt: &SpaceTimePoint,
    params: &SystemParams,
) -> FieldMatrixElement {
    debug_assert!(omega_prime > 0.0);
    let g = coupling_fn(params)(omega_prime);
    let tau_r = pt.retarded_time(params);
    let mut value = C64::new(0.0, 0.0);
    if pt.is_right_of_qubit() {
        let tau_x = pt.incident_time(params);
        value += C64::i() * g * C64::from_polar(1.0, -omega_prime * tau_x);
    }
    if tau_r >= 0.0 {
        let num = C64::from_polar(1.0, -omega_prime * tau_r) - decay_phase(params, tau_r);
        let den = C64::new(omega_prime - params.omega_q, params.gamma);
        value += params.gamma * g * num / den;
    }
    FieldMatrixElement { value, transition: Transition::G0FromAdag, point: *pt }
}

/// `<g,0| E+ (x,t) |G,1>`: incident plus transmitted field right of the
/// qubit, reflected field on the left. Plane waves evaluate in closed form;
/// smooth spectra by spectral quadrature.
pub fn me_pulse_g1(
    pt: &SpaceTimePoint,
    pulse: &PulseSpectrum,
    params: &SystemParams,
    tol: Tolerance,
) -> Result<FieldMatrixElement, MatrixElementError> {
    let value = match pulse {
        PulseSpectrum::PlaneWave { omega0 } => {
            params.delta_pw.sqrt() * me_g0_from_adag(*omega0, pt, params).value
        }
        _ => {
            let mut value = C64::new(0.0, 0.0);
            if pt.is_right_of_qubit() {
                let tau_x = pt.incident_time(params);
                value += C64::i()
                    * spectral_integral(
                        pulse,
                        params,
                        |_w, phase_x, _e1| phase_x,
                        tau_x,
                        tol,
                    )?;
            }
            let tau_r = pt.retarded_time(params);
            if tau_r >= 0.0 {
                let gamma = params.gamma;
                let omega_q = params.omega_q;
                value += gamma
                    * spectral_integral(
                        pulse,
                        params,
                        move |w, phase_r, e1| (phase_r - e1) / C64::new(w - omega_q, gamma),
                        tau_r,
                        tol,
                    )?;
            }
            value
        }
    };
    Ok(FieldMatrixElement { value, transition: Transition::PulseG1, point: *pt })
}

/// `<e,0| E+ (x,t) |E,1>`: the photon is detected while the qubit keeps its
/// excitation. Carries the Rabi-shifted denominators
/// `omega - Omega -+ 2 sqrt(Lambda) + i Gamma`.
pub fn me_e0_from_e1(
    pt: &SpaceTimePoint,
    pulse: &PulseSpectrum,
    params: &SystemParams,
    tol: Tolerance,
) -> Result<FieldMatrixElement, MatrixElementError> {
    let tau_r = pt.retarded_time(params);
    let shift = params.rabi_shift();
    let gamma = params.gamma;

    let mut value = C64::new(0.0, 0.0);
    if pt.is_right_of_qubit() {
        let tau_x = pt.incident_time(params);
        value += C64::i() * pulse_moment(pulse, params, |_w, ph, _e1| ph, tau_x, tol)?;
    }
    if tau_r >= 0.0 {
        if shift * tau_r >= RABI_SERIES_THRESHOLD {
            // -(Gamma/2) [q_- + q_+] with q_s the shifted Lorentzian terms.
            let omega_q = params.omega_q;
            value += -(gamma / 2.0)
                * pulse_moment(
                    pulse,
                    params,
                    move |w, _ph, e1| {
                        q_term(w, -1.0, shift, omega_q, gamma, tau_r, e1)
                            + q_term(w, 1.0, shift, omega_q, gamma, tau_r, e1)
                    },
                    tau_r,
                    tol,
                )?;
        } else {
            // i Gamma * cos-channel series in Lambda.
            let lambda = params.lambda_rabi;
            let omega_q = params.omega_q;
            value += C64::i()
                * gamma
                * pulse_moment(
                    pulse,
                    params,
                    move |w, ph, e1| {
                        let m = weighted_moments(w, omega_q, gamma, tau_r, ph, e1);
                        m[0] - 2.0 * lambda * m[2] + (2.0 / 3.0) * lambda * lambda * m[4]
                    },
                    tau_r,
                    tol,
                )?;
        }
    }
    Ok(FieldMatrixElement { value, transition: Transition::E0FromE1, point: *pt })
}

/// `<g,0| a(omega',0) E+ (x,t) |E,1>`, split into the direct part (the
/// detected photon is the spontaneous one, the incident photon survives
/// untouched) and the `g(omega')`-weighted scattered part.
pub fn me_g0a_from_e1(
    omega_prime: f64,
    pt: &SpaceTimePoint,
    pulse: &PulseSpectrum,
    params: &SystemParams,
    tol: Tolerance,
) -> Result<DeltaPlusSmooth, MatrixElementError> {
    debug_assert!(omega_prime > 0.0);
    let tau_r = pt.retarded_time(params);
    if tau_r < 0.0 {
        return Ok(DeltaPlusSmooth::ZERO);
    }
    let gamma = params.gamma;
    let shift = params.rabi_shift();
    let e1 = decay_phase(params, tau_r);

    let f_factor = match pulse {
        // Coefficient of delta(omega' - omega0).
        PulseSpectrum::PlaneWave { .. } => C64::new(params.delta_pw.sqrt(), 0.0),
        _ => pulse.amplitude(omega_prime),
    };
    let delta_coeff = gamma * f_factor * e1;

    let g_prime = coupling_fn(params)(omega_prime);
    let smooth = if shift * tau_r >= RABI_SERIES_THRESHOLD {
        let omega_q = params.omega_q;
        -(gamma / (4.0 * params.lambda_rabi.sqrt()))
            * g_prime
            * pulse_moment(
                pulse,
                params,
                move |w, _ph, e1| {
                    q_term(w, -1.0, shift, omega_q, gamma, tau_r, e1)
                        - q_term(w, 1.0, shift, omega_q, gamma, tau_r, e1)
                },
                tau_r,
                tol,
            )?
    } else {
        // -Gamma g(omega') * sin-channel series in Lambda.
        let lambda = params.lambda_rabi;
        let omega_q = params.omega_q;
        -gamma
            * g_prime
            * pulse_moment(
                pulse,
                params,
                move |w, ph, e1| {
                    let m = weighted_moments(w, omega_q, gamma, tau_r, ph, e1);
                    m[1] - (2.0 * lambda / 3.0) * m[3] + (2.0 / 15.0) * lambda * lambda * m[5]
                },
                tau_r,
                tol,
            )?
    };
    Ok(DeltaPlusSmooth { delta_coeff, smooth })
}

/// One shifted-Lorentzian scattered term,
/// `(exp(-i (w + s*shift) tau) - E1(tau)) / (w - Omega + s*shift + i Gamma)`.
fn q_term(w: f64, s: f64, shift: f64, omega_q: f64, gamma: f64, tau: f64, e1: C64) -> C64 {
    let num = C64::from_polar(1.0, -(w + s * shift) * tau) - e1;
    let den = C64::new(w - omega_q + s * shift, gamma);
    num / den
}

/// `E1(tau) * integral_0^tau s^n exp(-i(w - Omega + i Gamma) s) ds` for
/// n = 0..=5, by the stable upward recursion
/// `Etilde_n = (tau^n exp(-i w tau) - n Etilde_{n-1}) / a`.
fn weighted_moments(w: f64, omega_q: f64, gamma: f64, tau: f64, phase: C64, e1: C64) -> [C64; 6] {
    let a = C64::new(gamma, -(w - omega_q));
    let mut m = [C64::new(0.0, 0.0); 6];
    m[0] = (phase - e1) / a;
    let mut tau_n = 1.0;
    for n in 1..6 {
        tau_n *= tau;
        m[n] = (tau_n * phase - n as f64 * m[n - 1]) / a;
    }
    m
}

/// `integral g(w) f(w) phi(w, exp(-i w tau), E1(tau)) dw` over the truncated
/// frequency window, or the same expression evaluated pointwise at the
/// carrier for the plane-wave branch (times `sqrt(Delta)`).
fn pulse_moment(
    pulse: &PulseSpectrum,
    params: &SystemParams,
    phi: impl Fn(f64, C64, C64) -> C64,
    tau: f64,
    tol: Tolerance,
) -> Result<C64, MatrixElementError> {
    let e1 = decay_phase(params, tau.max(0.0));
    match pulse {
        PulseSpectrum::PlaneWave { omega0 } => {
            let g = coupling_fn(params)(*omega0);
            let phase = C64::from_polar(1.0, -omega0 * tau);
            Ok(params.delta_pw.sqrt() * g * phi(*omega0, phase, e1))
        }
        _ => spectral_integral(pulse, params, phi, tau, tol),
    }
}

/// Quadrature of `g(w) f(w) phi(w, exp(-i w tau), E1)` over the window
/// `[max(0, Omega - W), Omega + W]` with `W = max(50 Gamma,
/// 2 sqrt(Lambda) + 20 Gamma)`, narrowed to the pulse support when that is
/// tighter.
fn spectral_integral(
    pulse: &PulseSpectrum,
    params: &SystemParams,
    phi: impl Fn(f64, C64, C64) -> C64,
    tau: f64,
    tol: Tolerance,
) -> Result<C64, MatrixElementError> {
    let gamma = params.gamma;
    let omega_q = params.omega_q;
    let w_half = (50.0 * gamma).max(params.rabi_shift() + 20.0 * gamma);
    let mut lo = (omega_q - w_half).max(0.0);
    let mut hi = omega_q + w_half;
    if let Some(hw) = pulse.support_halfwidth() {
        let c = pulse.carrier();
        let (slo, shi) = ((c - hw).max(0.0), c + hw);
        // Intersect with the pulse support; fall back to the support alone
        // if the carrier sits outside the default window.
        if shi > lo && slo < hi {
            lo = lo.max(slo);
            hi = hi.min(shi);
        } else {
            lo = slo;
            hi = shi;
        }
    }

    let g = coupling_fn(params);
    let e1 = decay_phase(params, tau.max(0.0));
    let feature = gamma.min(pulse.feature_scale().unwrap_or(gamma));
    let kernel = SpectralKernel::new(
        move |w: f64| {
            let phase = C64::from_polar(1.0, -w * tau);
            g(w) * pulse.amplitude(w) * phi(w, phase, e1)
        },
        (lo, hi),
        feature,
    )
    .map_err(MatrixElementError::Quadrature)?;
    let plan = oscillation_guard(&kernel, tau.abs());
    match integrate_with_plan(&kernel, tol, &plan) {
        Ok(res) => Ok(res.value),
        Err(QuadratureError::NonConvergence { best }) => Err(MatrixElementError::Integration {
            achieved: best.abs_error_estimate,
            evaluations: best.evaluations,
        }),
        Err(e) => Err(MatrixElementError::Quadrature(e)),
    }
}

#[derive(Debug)]
pub enum MatrixElementError {
    /// Spectral quadrature did not reach the requested tolerance.
    Integration { achieved: f64, evaluations: usize },
    Quadrature(QuadratureError),
}

impl std::fmt::Display for MatrixElementError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Integration { achieved, evaluations } => write!(
                f,
                "spectral integral did not converge: achieved tolerance {achieved:.3e} after {evaluations} evaluations"
            ),
            Self::Quadrature(e) => write!(f, "quadrature setup failed: {e}"),
        }
    }
}

impl std::error::Error for MatrixElementError {}
