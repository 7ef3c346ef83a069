//! First- and second-order photon correlation functions assembled from the
//! field matrix elements.
//!
//! Second-order values are reported as the dimensionless
//! `g2 = G2 * 2 pi d^4 / (hbar^4 Delta Gamma^3)`, so the resonant
//! forward-forward value at zero delay is 4 and the incident-density
//! prefactors cancel. First-order two-excitation spectra are normalized to
//! the squared incident amplitude the same way.

use num_complex::Complex64 as C64;

use crate::matrix_elements::{me_pulse_g1, me_spontaneous, MatrixElementError};
use crate::model::{PulseSpectrum, SpaceTimePoint, SystemParams};
use crate::quadrature::Tolerance;

/// Which detection channel a first-order contribution came from.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum G1Channel {
    /// Spontaneous photon from the initially excited qubit.
    Spontaneous,
    /// Scattered incident pulse (single-excitation sector).
    Pulse,
    /// Two-excitation sector, qubit keeps its excitation.
    AtomExcited,
    /// Two-excitation sector, photon left in the continuum (integrated).
    PhotonContinuum,
}

/// A single-detector probability density with its per-channel breakdown.
#[derive(Clone, Debug)]
pub struct G1Result {
    pub value: f64,
    pub point: SpaceTimePoint,
    pub breakdown: Vec<(G1Channel, f64)>,
}

/// Detector half-axes, ordered as (sign of x1, sign of x2).
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Geometry {
    /// Both detectors right of the qubit.
    PosPos,
    /// Both detectors left of the qubit.
    NegNeg,
    /// First right, second left.
    PosNeg,
    /// First left, second right.
    NegPos,
}

impl Geometry {
    pub fn label(&self) -> &'static str {
        match self {
            Self::PosPos => "(+,+)",
            Self::NegNeg => "(-,-)",
            Self::PosNeg => "(+,-)",
            Self::NegPos => "(-,+)",
        }
    }

    pub fn first_detector_is_left(&self) -> bool {
        matches!(self, Self::NegNeg | Self::NegPos)
    }
}

impl std::fmt::Display for Geometry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Positions and timing of the two detectors. The second detector is
/// farther from the qubit, so the signal reaches detector 1 first; `delta_t`
/// is the delay of the second click past its own light-cone arrival and
/// `delta_t1` offsets the first click past its light cone (used for
/// left-side first detectors, where the signal builds up over ~1/Gamma).
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct DetectorConfig {
    pub x1: f64,
    pub x2: f64,
    pub delta_t: f64,
    pub delta_t1: f64,
}

impl DetectorConfig {
    pub fn new(x1: f64, x2: f64, delta_t: f64, delta_t1: f64) -> Result<Self, CorrelationError> {
        if x1 == 0.0 || x2 == 0.0 || !x1.is_finite() || !x2.is_finite() {
            return Err(CorrelationError::DetectorAtOrigin);
        }
        if x2.abs() <= x1.abs() {
            return Err(CorrelationError::DetectorOrder { x1, x2 });
        }
        if !(delta_t >= 0.0) {
            return Err(CorrelationError::NegativeDelay { delay: delta_t });
        }
        if !(delta_t1 >= 0.0) {
            return Err(CorrelationError::NegativeDelay { delay: delta_t1 });
        }
        Ok(Self { x1, x2, delta_t, delta_t1 })
    }

    /// Same detectors at a different second-click delay.
    pub fn at_delay(&self, delta_t: f64) -> Result<Self, CorrelationError> {
        Self::new(self.x1, self.x2, delta_t, self.delta_t1)
    }

    /// The conventional first-click offset: `1/Gamma` when the first
    /// detector sits left of the qubit, zero otherwise.
    pub fn default_delta_t1(x1: f64, params: &SystemParams) -> f64 {
        if x1 < 0.0 {
            1.0 / params.gamma
        } else {
            0.0
        }
    }

    pub fn geometry(&self) -> Geometry {
        match (self.x1 > 0.0, self.x2 > 0.0) {
            (true, true) => Geometry::PosPos,
            (false, false) => Geometry::NegNeg,
            (true, false) => Geometry::PosNeg,
            (false, true) => Geometry::NegPos,
        }
    }
}

/// One second-order correlation value split into its two detection pathways
/// and their interference.
#[derive(Copy, Clone, Debug)]
pub struct G2Decomposition {
    /// Spontaneous photon at detector 1, scattered photon at detector 2.
    pub path1: f64,
    /// Scattered photon at detector 1, spontaneous photon at detector 2.
    pub path2: f64,
    /// Signed cross term between the two pathway amplitudes.
    pub interference: f64,
    pub full: f64,
    pub geometry: Geometry,
    pub delta_t: f64,
    pub delta_t1: f64,
}

impl G2Decomposition {
    /// The un-normalized correlation density, for direct comparison against
    /// raw oracle output.
    pub fn raw_full(&self, params: &SystemParams) -> f64 {
        self.full * crate::model::ReducedUnits::g2_raw_scale(params)
    }
}

/// `G1` for the initially excited qubit and no photon:
/// `Gamma^2 exp(-2 Gamma tau_R)` inside the light cone.
pub fn g1_spontaneous(pt: &SpaceTimePoint, params: &SystemParams) -> G1Result {
    let value = me_spontaneous(pt, params).value.norm_sqr();
    G1Result { value, point: *pt, breakdown: vec![(G1Channel::Spontaneous, value)] }
}

/// `G1` for a pulse scattering off the ground-state qubit.
pub fn g1_pulse(
    pt: &SpaceTimePoint,
    pulse: &PulseSpectrum,
    params: &SystemParams,
    tol: Tolerance,
) -> Result<G1Result, MatrixElementError> {
    let value = me_pulse_g1(pt, pulse, params, tol)?.value.norm_sqr();
    Ok(G1Result { value, point: *pt, breakdown: vec![(G1Channel::Pulse, value)] })
}

/// Stationary-limit `G1` of the two-excitation initial state for a plane
/// wave at `omega0`, normalized to the squared incident amplitude. Keeps
/// the oscillatory `exp(+/- i 2 sqrt(Lambda) tau_R)` terms; the transients
/// `exp(-Gamma tau_R)` have been dropped (late-time closed form).
pub fn g1_two_excitation(
    pt: &SpaceTimePoint,
    omega0: f64,
    params: &SystemParams,
) -> G1Result {
    let tau = pt.retarded_time(params);
    let gamma = params.gamma;
    let shift = params.rabi_shift();
    let d_minus = C64::new(omega0 - params.omega_q - shift, gamma);
    let d_plus = C64::new(omega0 - params.omega_q + shift, gamma);

    let (e0, photon) = if pt.is_right_of_qubit() {
        let a = C64::from_polar(1.0, shift * tau) / d_minus;
        let b = C64::from_polar(1.0, -shift * tau) / d_plus;
        let e0 = (C64::new(1.0, 0.0) + C64::i() * (gamma / 2.0) * (a + b)).norm_sqr();
        let photon = gamma * gamma / 16.0 * (a - b).norm_sqr();
        (e0, photon)
    } else {
        let a = C64::from_polar(1.0, -shift * tau) / d_plus;
        let b = C64::from_polar(1.0, shift * tau) / d_minus;
        let e0 = gamma * gamma / 4.0 * (a + b).norm_sqr();
        let photon = gamma * gamma / 16.0 * (a - b).norm_sqr();
        (e0, photon)
    };
    G1Result {
        value: e0 + photon,
        point: *pt,
        breakdown: vec![(G1Channel::AtomExcited, e0), (G1Channel::PhotonContinuum, photon)],
    }
}

/// Which half-axis a stationary spectrum is taken on.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum AxisSide {
    Positive,
    Negative,
}

/// Oscillation-averaged stationary spectrum of the two-excitation `G1`:
/// `1 + (5/16)(L+ + L-)` forward, `(5/16)(L+ + L-)` backward, with
/// unit-height Lorentzians of width `Gamma` centered `2 sqrt(Lambda)` either
/// side of the qubit frequency.
pub fn g1_av_spectrum(omega0: f64, side: AxisSide, params: &SystemParams) -> f64 {
    let gamma = params.gamma;
    let shift = params.rabi_shift();
    let l_plus = {
        let d = omega0 - params.omega_q + shift;
        gamma * gamma / (d * d + gamma * gamma)
    };
    let l_minus = {
        let d = omega0 - params.omega_q - shift;
        gamma * gamma / (d * d + gamma * gamma)
    };
    let peaks = 5.0 / 16.0 * (l_plus + l_minus);
    match side {
        AxisSide::Positive => 1.0 + peaks,
        AxisSide::Negative => peaks,
    }
}

/// Numerical time average of [`g1_two_excitation`] over one full oscillation
/// fundamental (`2 pi / (2 sqrt(Lambda))`, which contains the
/// `4 sqrt(Lambda)` harmonic an integral number of times). Self-check for
/// [`g1_av_spectrum`].
pub fn g1_av_numeric(omega0: f64, side: AxisSide, params: &SystemParams, tau0: f64) -> f64 {
    let shift = params.rabi_shift();
    assert!(shift > 0.0, "g1_av_numeric needs a nonzero Rabi shift");
    let period = 2.0 * std::f64::consts::PI / shift;
    let x = match side {
        AxisSide::Positive => 1.0,
        AxisSide::Negative => -1.0,
    };
    // Composite Simpson over one period.
    let n = 4096;
    let h = period / n as f64;
    let mut acc = 0.0;
    for i in 0..=n {
        let tau = tau0 + i as f64 * h;
        let pt = SpaceTimePoint::new(x, tau + x.abs() / params.v_g).unwrap();
        let v = g1_two_excitation(&pt, omega0, params).value;
        let w = if i == 0 || i == n {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        acc += w * v;
    }
    acc * h / 3.0 / period
}

/// The two normalized pathway amplitudes of the second-order correlation
/// function for a plane wave at `omega0`. `full = |a1 + a2|^2`.
fn g2_path_amplitudes(
    geometry: Geometry,
    omega0: f64,
    delta_t: f64,
    delta_t1: f64,
    params: &SystemParams,
) -> (C64, C64) {
    let gamma = params.gamma;
    let omega_q = params.omega_q;
    let d0 = C64::new(omega0 - omega_q, gamma);
    // exp(-i (Omega - omega0 - i Gamma) dT), modulus exp(-Gamma dT).
    let e_t = C64::from_polar((-gamma * delta_t).exp(), -(omega_q - omega0) * delta_t);
    let one = C64::new(1.0, 0.0);

    match geometry {
        Geometry::PosPos => {
            let a1 = one - C64::i() * gamma * (one - e_t) / d0;
            (a1, e_t)
        }
        Geometry::PosNeg => {
            let a1 = C64::i() * gamma * (one - e_t) / d0;
            (a1, -e_t)
        }
        Geometry::NegNeg => {
            let a1 = gamma * (one - e_t) / d0;
            let a2 = -(gamma / 2.0) * rabi_pair_sum(omega0, delta_t1, params) * e_t;
            (a1, a2)
        }
        Geometry::NegPos => {
            let a1 = one - C64::i() * gamma * (one - e_t) / d0;
            let a2 = C64::i()
                * e_t
                * C64::from_polar(1.0, -omega0 * delta_t1)
                * (gamma / 2.0)
                * rabi_pair_sum(omega0, delta_t1, params);
            (a1, a2)
        }
    }
}

/// The paired Rabi-shifted factor carried by a left-side first click at
/// offset `delta_t1`. Regular as `Lambda -> 0`.
fn rabi_pair_sum(omega0: f64, delta_t1: f64, params: &SystemParams) -> C64 {
    let gamma = params.gamma;
    let shift = params.rabi_shift();
    let e_dt = C64::from_polar((-gamma * delta_t1).exp(), -(params.omega_q - omega0) * delta_t1);
    let d_plus = C64::new(omega0 - params.omega_q + shift, gamma);
    let d_minus = C64::new(omega0 - params.omega_q - shift, gamma);
    (C64::from_polar(1.0, -shift * delta_t1) - e_dt) / d_plus
        + (C64::from_polar(1.0, shift * delta_t1) - e_dt) / d_minus
}

/// Normalized second-order correlation for one detector configuration and a
/// plane wave at `omega0`, decomposed into pathway terms.
pub fn g2(
    config: &DetectorConfig,
    omega0: f64,
    params: &SystemParams,
) -> Result<G2Decomposition, CorrelationError> {
    if !(omega0 > 0.0) {
        return Err(CorrelationError::NonPositiveCarrier { omega0 });
    }
    let geometry = config.geometry();
    let (a1, a2) = g2_path_amplitudes(geometry, omega0, config.delta_t, config.delta_t1, params);
    let path1 = a1.norm_sqr();
    let path2 = a2.norm_sqr();
    let interference = 2.0 * (a1.conj() * a2).re;
    Ok(G2Decomposition {
        path1,
        path2,
        interference,
        full: (a1 + a2).norm_sqr(),
        geometry,
        delta_t: config.delta_t,
        delta_t1: config.delta_t1,
    })
}

/// Evaluate [`g2`] across a delay grid; one decomposition per grid point.
pub fn g2_sweep(
    config: &DetectorConfig,
    delta_t_grid: &[f64],
    omega0: f64,
    params: &SystemParams,
) -> Result<Vec<G2Decomposition>, CorrelationError> {
    delta_t_grid
        .iter()
        .map(|&dt| g2(&config.at_delay(dt)?, omega0, params))
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub enum CorrelationError {
    DetectorAtOrigin,
    DetectorOrder { x1: f64, x2: f64 },
    NegativeDelay { delay: f64 },
    NonPositiveCarrier { omega0: f64 },
}

impl std::fmt::Display for CorrelationError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::DetectorAtOrigin => write!(f, "detectors must sit off the qubit position x = 0"),
            Self::DetectorOrder { x1, x2 } => {
                write!(f, "second detector must be farther out: |x2| > |x1| violated ({x1}, {x2})")
            }
            Self::NegativeDelay { delay } => write!(f, "delays must be >= 0, got {delay}"),
            Self::NonPositiveCarrier { omega0 } => {
                write!(f, "carrier frequency must be positive, got {omega0}")
            }
        }
    }
}

impl std::error::Error for CorrelationError {}
