//! Physical parameters, unit conventions, coupling functions and incident
//! pulse spectra shared by every other module.
//!
//! Everything downstream works in reduced units: `hbar = 1`, dipole moment
//! `d = 1`, and (by convention, not enforcement) `v_g = 1`. Field amplitudes
//! then come out in units of the decay rate and all exported correlation
//! values are dimensionless.

use num_complex::Complex64 as C64;

/// Fraction of the qubit frequency the linewidth may reach before the
/// memoryless-decay treatment becomes questionable. Exceeding it is a
/// warning, not an error.
pub const MARKOV_RATIO_LIMIT: f64 = 0.1;

/// The unit convention every exported number lives in.
///
/// `hbar = 1` and the dipole moment `d = 1`, so field matrix elements are
/// reported in units of the decay rate and the transverse mode area and
/// vacuum permittivity never appear: they are absorbed into `Gamma`.
/// Normalized correlation outputs (`g1_av`, the second-order `g2`) are
/// dimensionless and independent of all of these constants.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct ReducedUnits;

impl ReducedUnits {
    pub const HBAR: f64 = 1.0;
    pub const DIPOLE: f64 = 1.0;

    /// Factor turning the dimensionless second-order value back into the
    /// raw correlation density: `G2 = g2 * Delta Gamma^3 / (2 pi)` (in
    /// reduced units, resonance coupling).
    pub fn g2_raw_scale(params: &SystemParams) -> f64 {
        params.delta_pw * params.gamma.powi(3) / (2.0 * std::f64::consts::PI)
    }
}

/// How the qubit-waveguide coupling depends on frequency.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CouplingMode {
    /// `g(omega) = g(Omega) = sqrt(Gamma / 2 pi)` for all frequencies.
    #[default]
    Resonance,
    /// `g(omega) = sqrt(Gamma / 2 pi) * sqrt(omega / Omega)`, the sqrt-omega
    /// profile of a 1D guided mode.
    PhysicalProfile,
}

/// Parameters of the qubit-waveguide system.
///
/// `lambda_rabi` is the squared stimulated-Rabi coupling integral; it only
/// ever enters the closed forms through the peak shift `2 sqrt(lambda_rabi)`,
/// so it is supplied directly rather than computed from the coupling profile
/// (which would need an arbitrary cutoff).
#[derive(Copy, Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SystemParams {
    /// Qubit transition frequency `Omega` (rad/time).
    pub omega_q: f64,
    /// Decay rate into the waveguide modes `Gamma = 2 pi g^2(Omega)`
    /// (rad/time). The excited-state population decays at `2 Gamma`.
    pub gamma: f64,
    /// Rabi parameter `Lambda` ((rad/time)^2); emission peaks sit at
    /// `Omega +/- 2 sqrt(Lambda)`.
    pub lambda_rabi: f64,
    /// Group velocity of the guided modes (length/time).
    pub v_g: f64,
    /// Spectral width `Delta` assigned to the plane-wave packet (rad/time).
    pub delta_pw: f64,
    /// Frequency profile of the coupling.
    pub coupling: CouplingMode,
}

impl SystemParams {
    /// Validated constructor; rejects any hard invariant violation.
    pub fn new(
        omega_q: f64,
        gamma: f64,
        lambda_rabi: f64,
        v_g: f64,
        delta_pw: f64,
        coupling: CouplingMode,
    ) -> Result<Self, ModelError> {
        let params = Self { omega_q, gamma, lambda_rabi, v_g, delta_pw, coupling };
        let report = validate_params(&params);
        match report.errors.first() {
            Some(err) => Err(err.clone()),
            None => Ok(params),
        }
    }

    /// Convenience constructor in the canonical reduced units
    /// (`Gamma = 1`, `v_g = 1`, resonance coupling) given `Gamma / Omega`
    /// and the peak shift `2 sqrt(Lambda)` in units of `Gamma`.
    pub fn reduced(gamma_over_omega: f64, rabi_shift: f64) -> Result<Self, ModelError> {
        Self::new(
            1.0 / gamma_over_omega,
            1.0,
            (rabi_shift / 2.0) * (rabi_shift / 2.0),
            1.0,
            5.0,
            CouplingMode::Resonance,
        )
    }

    /// Peak shift `2 sqrt(Lambda)` (rad/time).
    pub fn rabi_shift(&self) -> f64 {
        2.0 * self.lambda_rabi.sqrt()
    }

    /// Resonant coupling amplitude `g(Omega) = sqrt(Gamma / 2 pi)`.
    pub fn g_resonant(&self) -> f64 {
        (self.gamma / (2.0 * std::f64::consts::PI)).sqrt()
    }
}

/// Outcome of checking a [`SystemParams`] candidate: hard errors make the
/// parameter set unusable, warnings flag regimes where the closed forms are
/// approximations.
#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub errors: Vec<ModelError>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.errors.is_empty()
    }
}

/// Report every violated invariant of `params`.
pub fn validate_params(params: &SystemParams) -> ValidationReport {
    let mut report = ValidationReport::default();
    let mut positive = |name: &'static str, value: f64| {
        if !(value > 0.0) || !value.is_finite() {
            report.errors.push(ModelError::NonPositive { name, value });
        }
    };
    positive("omega_q", params.omega_q);
    positive("gamma", params.gamma);
    positive("v_g", params.v_g);
    positive("delta_pw", params.delta_pw);
    if !(params.lambda_rabi >= 0.0) || !params.lambda_rabi.is_finite() {
        report
            .errors
            .push(ModelError::NonPositive { name: "lambda_rabi", value: params.lambda_rabi });
    }
    if report.is_ok() && params.gamma / params.omega_q > MARKOV_RATIO_LIMIT {
        report.warnings.push(format!(
            "gamma/omega_q = {:.3e} exceeds the Markov-validity ratio {}",
            params.gamma / params.omega_q,
            MARKOV_RATIO_LIMIT
        ));
    }
    report
}

/// Coupling amplitude `g(omega)` between the qubit and the mode at `omega`.
///
/// `Gamma = 2 pi g^2(Omega)` holds exactly in both coupling modes.
pub fn coupling_g(omega: f64, params: &SystemParams) -> Result<f64, ModelError> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(ModelError::NonPositive { name: "omega", value: omega });
    }
    Ok(coupling_fn(params)(omega))
}

/// The coupling profile as a closure, for use inside spectral kernels where
/// the frequency window has already been validated.
pub(crate) fn coupling_fn(params: &SystemParams) -> impl Fn(f64) -> f64 {
    let g0 = params.g_resonant();
    let omega_q = params.omega_q;
    let mode = params.coupling;
    move |omega: f64| match mode {
        CouplingMode::Resonance => g0,
        CouplingMode::PhysicalProfile => g0 * (omega / omega_q).sqrt(),
    }
}

/// Spectral amplitude `f(omega)` of the incident single-photon pulse.
///
/// The plane-wave variant is symbolic: it selects the closed-form branch
/// `f(omega) = sqrt(Delta) delta(omega - omega0)` and carries no amplitude
/// table of its own.
#[derive(Clone, Debug, PartialEq)]
pub enum PulseSpectrum {
    PlaneWave { omega0: f64 },
    Gaussian { omega0: f64, sigma: f64 },
    Tabulated { grid: Vec<f64>, values: Vec<C64> },
}

impl PulseSpectrum {
    /// A plane wave at carrier `omega0`.
    pub fn plane_wave(omega0: f64) -> Result<Self, ModelError> {
        if !(omega0 > 0.0) {
            return Err(ModelError::NonPositive { name: "omega0", value: omega0 });
        }
        Ok(Self::PlaneWave { omega0 })
    }

    /// A unit-norm Gaussian `f(omega) = (2 pi sigma^2)^{-1/4}
    /// exp(-(omega - omega0)^2 / 4 sigma^2)`; `|f|^2` has standard
    /// deviation `sigma`.
    pub fn gaussian(omega0: f64, sigma: f64) -> Result<Self, ModelError> {
        if !(omega0 > 0.0) {
            return Err(ModelError::NonPositive { name: "omega0", value: omega0 });
        }
        if !(sigma > 0.0) {
            return Err(ModelError::NonPositive { name: "sigma", value: sigma });
        }
        Ok(Self::Gaussian { omega0, sigma })
    }

    /// A tabulated spectrum on a strictly increasing grid; evaluation
    /// interpolates linearly and is zero outside the grid.
    pub fn tabulated(grid: Vec<f64>, values: Vec<C64>) -> Result<Self, ModelError> {
        if grid.len() < 2 || grid.len() != values.len() {
            return Err(ModelError::GridValueMismatch { grid: grid.len(), values: values.len() });
        }
        if !grid.windows(2).all(|w| w[1] > w[0]) {
            return Err(ModelError::GridNotIncreasing);
        }
        if !(grid[0] > 0.0) {
            return Err(ModelError::NonPositive { name: "grid[0]", value: grid[0] });
        }
        Ok(Self::Tabulated { grid, values })
    }

    /// Carrier frequency: the nominal center of the spectrum.
    pub fn carrier(&self) -> f64 {
        match self {
            Self::PlaneWave { omega0 } | Self::Gaussian { omega0, .. } => *omega0,
            Self::Tabulated { grid, values } => {
                let mut num = 0.0;
                let mut den = 0.0;
                for (w, v) in grid.iter().zip(values) {
                    num += w * v.norm_sqr();
                    den += v.norm_sqr();
                }
                if den > 0.0 {
                    num / den
                } else {
                    0.5 * (grid[0] + grid[grid.len() - 1])
                }
            }
        }
    }

    /// Spectral amplitude at `omega`. Panics on the symbolic plane-wave
    /// variant, which has no pointwise value.
    pub fn amplitude(&self, omega: f64) -> C64 {
        match self {
            Self::PlaneWave { .. } => {
                panic!("PulseSpectrum::amplitude: plane wave is a symbolic delta branch")
            }
            Self::Gaussian { omega0, sigma } => {
                let norm = (2.0 * std::f64::consts::PI * sigma * sigma).powf(-0.25);
                let arg = (omega - omega0) / (2.0 * sigma);
                C64::new(norm * (-arg * arg).exp(), 0.0)
            }
            Self::Tabulated { grid, values } => {
                let n = grid.len();
                if omega < grid[0] || omega > grid[n - 1] {
                    return C64::new(0.0, 0.0);
                }
                let idx = match grid.binary_search_by(|w| w.partial_cmp(&omega).unwrap()) {
                    Ok(i) => return values[i],
                    Err(i) => i,
                };
                let (w0, w1) = (grid[idx - 1], grid[idx]);
                let s = (omega - w0) / (w1 - w0);
                values[idx - 1] * (1.0 - s) + values[idx] * s
            }
        }
    }

    /// `integral |f|^2 domega` by the rule used for normalization
    /// (closed form for Gaussian, trapezoid on the tabulated grid).
    pub fn l2_mass(&self) -> f64 {
        match self {
            Self::PlaneWave { .. } => 1.0,
            Self::Gaussian { .. } => 1.0,
            Self::Tabulated { grid, values } => {
                let mut acc = 0.0;
                for i in 0..grid.len() - 1 {
                    let dw = grid[i + 1] - grid[i];
                    acc += 0.5 * dw * (values[i].norm_sqr() + values[i + 1].norm_sqr());
                }
                acc
            }
        }
    }

    /// Smallest spectral feature width; pairs with the linewidth to seed
    /// quadrature panel sizes.
    pub fn feature_scale(&self) -> Option<f64> {
        match self {
            Self::PlaneWave { .. } => None,
            Self::Gaussian { sigma, .. } => Some(*sigma),
            Self::Tabulated { grid, values } => {
                // RMS width of |f|^2 about its mean.
                let c = self.carrier();
                let mut num = 0.0;
                let mut den = 0.0;
                for (w, v) in grid.iter().zip(values) {
                    num += (w - c) * (w - c) * v.norm_sqr();
                    den += v.norm_sqr();
                }
                if den > 0.0 {
                    Some((num / den).sqrt().max(f64::MIN_POSITIVE))
                } else {
                    None
                }
            }
        }
    }

    /// Half-width of the frequency interval that carries essentially all of
    /// `|f|^2` (down to ~1e-14 of the peak for the Gaussian).
    pub fn support_halfwidth(&self) -> Option<f64> {
        match self {
            Self::PlaneWave { .. } => None,
            Self::Gaussian { sigma, .. } => Some(16.0 * sigma),
            Self::Tabulated { grid, .. } => {
                let c = self.carrier();
                Some((grid[grid.len() - 1] - c).abs().max((grid[0] - c).abs()))
            }
        }
    }

    pub fn is_plane_wave(&self) -> bool {
        matches!(self, Self::PlaneWave { .. })
    }
}

/// Rescale a pulse so that `integral |f|^2 domega = 1`.
///
/// Plane waves pass through unchanged; an all-zero tabulated pulse is
/// rejected as degenerate. Idempotent.
pub fn normalize_pulse(pulse: PulseSpectrum) -> Result<PulseSpectrum, ModelError> {
    match pulse {
        PulseSpectrum::PlaneWave { .. } | PulseSpectrum::Gaussian { .. } => Ok(pulse),
        PulseSpectrum::Tabulated { grid, mut values } => {
            let pulse = PulseSpectrum::Tabulated { grid: grid.clone(), values: values.clone() };
            let mass = pulse.l2_mass();
            if !(mass > 0.0) || !mass.is_finite() {
                return Err(ModelError::DegeneratePulse);
            }
            let scale = 1.0 / mass.sqrt();
            for v in &mut values {
                *v *= scale;
            }
            Ok(PulseSpectrum::Tabulated { grid, values })
        }
    }
}

/// A detector location and observation time. The qubit sits at `x = 0`, so
/// detectors must sit strictly off the origin.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct SpaceTimePoint {
    x: f64,
    t: f64,
}

impl SpaceTimePoint {
    pub fn new(x: f64, t: f64) -> Result<Self, ModelError> {
        if x == 0.0 || !x.is_finite() {
            return Err(ModelError::DetectorAtOrigin);
        }
        if !(t >= 0.0) || !t.is_finite() {
            return Err(ModelError::NegativeTime { t });
        }
        Ok(Self { x, t })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// Retarded time `t - |x| / v_g`; every qubit-generated field
    /// contribution vanishes while this is negative.
    pub fn retarded_time(&self, params: &SystemParams) -> f64 {
        self.t - self.x.abs() / params.v_g
    }

    /// Signed propagation phase argument `t - x / v_g` of the incident
    /// (right-moving) free field.
    pub fn incident_time(&self, params: &SystemParams) -> f64 {
        self.t - self.x / params.v_g
    }

    pub fn is_right_of_qubit(&self) -> bool {
        self.x > 0.0
    }
}

/// Everything that can go wrong while building model inputs.
#[derive(Clone, Debug, PartialEq)]
pub enum ModelError {
    NonPositive { name: &'static str, value: f64 },
    DegeneratePulse,
    GridNotIncreasing,
    GridValueMismatch { grid: usize, values: usize },
    DetectorAtOrigin,
    NegativeTime { t: f64 },
}

impl std::fmt::Display for ModelError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::NonPositive { name, value } => {
                write!(f, "{name} must be positive and finite, got {value}")
            }
            Self::DegeneratePulse => write!(f, "tabulated pulse has zero L2 mass"),
            Self::GridNotIncreasing => write!(f, "tabulated grid must be strictly increasing"),
            Self::GridValueMismatch { grid, values } => {
                write!(f, "tabulated grid ({grid}) and values ({values}) must have equal length >= 2")
            }
            Self::DetectorAtOrigin => {
                write!(f, "detector position must be finite and nonzero (qubit sits at x = 0)")
            }
            Self::NegativeTime { t } => write!(f, "observation time must be >= 0, got {t}"),
        }
    }
}

impl std::error::Error for ModelError {}
