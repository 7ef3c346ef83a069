//! Run configuration: flat TOML (section / key = value) with frequencies in
//! declared units of the linewidth or the qubit frequency.
//!
//! Internally everything is rescaled to the canonical unit system
//! `Gamma = 1`; times are then in `1/Gamma` and positions in `v_g/Gamma`.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::correlation::Geometry;
use crate::model::{normalize_pulse, CouplingMode, PulseSpectrum, SystemParams};
use crate::runner::RunnerError;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Spectrum,
    G1TwoExc,
    G2,
    OracleCompare,
    Sweep,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Spectrum => "spectrum",
            Self::G1TwoExc => "g1-two-exc",
            Self::G2 => "g2",
            Self::OracleCompare => "oracle-compare",
            Self::Sweep => "sweep",
        }
    }
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrequencyUnit {
    #[default]
    Gamma,
    OmegaQ,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub run: RawRun,
    #[serde(default)]
    pub units: RawUnits,
    pub params: RawParams,
    #[serde(default)]
    pub pulse: Option<RawPulse>,
    #[serde(default)]
    pub detectors: Option<RawDetectors>,
    #[serde(default)]
    pub grid: Option<RawGrid>,
    #[serde(default)]
    pub sweep: Option<RawSweep>,
    #[serde(default)]
    pub oracle: Option<RawOracle>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawRun {
    pub command: Command,
    pub output_dir: String,
    #[serde(default = "default_formats")]
    pub formats: Vec<String>,
}

fn default_formats() -> Vec<String> {
    vec!["csv".into(), "json".into()]
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawUnits {
    #[serde(default)]
    pub frequency: FrequencyUnit,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawParams {
    pub omega_q: f64,
    pub gamma: f64,
    #[serde(default)]
    pub lambda_rabi: f64,
    #[serde(default = "one")]
    pub v_g: f64,
    #[serde(default = "five")]
    pub delta_pw: f64,
    #[serde(default)]
    pub coupling: CouplingMode,
}

fn one() -> f64 {
    1.0
}

fn five() -> f64 {
    5.0
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
pub struct RawPulse {
    pub kind: String,
    pub omega0: f64,
    #[serde(default)]
    pub sigma: Option<f64>,
    #[serde(default)]
    pub grid: Option<Vec<f64>>,
    #[serde(default)]
    pub values_re: Option<Vec<f64>>,
    #[serde(default)]
    pub values_im: Option<Vec<f64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawDetectors {
    /// Positions in units of `v_g / Gamma`.
    pub x1: f64,
    pub x2: f64,
    /// First-click offset in `1/Gamma`; defaults to 1 when `x1 < 0`.
    #[serde(default)]
    pub delta_t1: Option<f64>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawGrid {
    /// Second-click delay grid in `1/Gamma`.
    #[serde(default)]
    pub delta_t: Option<RawRange>,
    /// Carrier detuning grid in `Gamma`, relative to the qubit frequency.
    #[serde(default)]
    pub omega0_detuning: Option<RawRange>,
    /// Retarded-time grid in `1/Gamma` (g1-two-exc command).
    #[serde(default)]
    pub tau: Option<RawRange>,
    /// Peak shifts `2 sqrt(Lambda)` in `Gamma` (spectrum command).
    #[serde(default)]
    pub rabi_shifts: Option<Vec<f64>>,
}

#[derive(Copy, Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawRange {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl RawRange {
    pub fn points(&self) -> Result<Vec<f64>, RunnerError> {
        if self.n == 0 {
            return Err(RunnerError::config("grid", "empty grid (n = 0)"));
        }
        if !(self.max >= self.min) {
            return Err(RunnerError::config("grid", "grid max must be >= min"));
        }
        if self.n == 1 {
            return Ok(vec![self.min]);
        }
        let step = (self.max - self.min) / (self.n - 1) as f64;
        Ok((0..self.n).map(|i| self.min + step * i as f64).collect())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSweep {
    /// Geometries as sign pairs: "pp", "mm", "pm", "mp".
    pub geometries: Vec<String>,
    /// Carrier frequencies as multiples of the qubit frequency.
    pub omega0_factors: Vec<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawOracle {
    pub quantity: String,
    #[serde(default = "default_modes")]
    pub n_modes: usize,
    /// Window margin in `Gamma`.
    #[serde(default = "default_margin")]
    pub margin: f64,
    /// Pulse spectral width in `Gamma`.
    #[serde(default = "default_sigma")]
    pub sigma: f64,
    /// Carrier detunings in `Gamma` (transmission quantity).
    #[serde(default)]
    pub detunings: Option<Vec<f64>>,
}

fn default_modes() -> usize {
    2000
}

fn default_margin() -> f64 {
    50.0
}

fn default_sigma() -> f64 {
    0.1
}

/// Which oracle cross-check a config requests.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum OracleQuantity {
    Transmission,
    G1Spontaneous,
    G2ForwardForward,
}

/// A parsed config with every quantity rescaled to `Gamma = 1`.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub output_dir: std::path::PathBuf,
    pub formats: Formats,
    pub params: SystemParams,
    pub pulse: Option<PulseSpectrum>,
    pub detectors: Option<ResolvedDetectors>,
    pub delta_t_grid: Option<Vec<f64>>,
    pub detuning_grid: Option<Vec<f64>>,
    pub tau_grid: Option<Vec<f64>>,
    pub rabi_shifts: Option<Vec<f64>>,
    pub sweep: Option<ResolvedSweep>,
    pub oracle: Option<ResolvedOracle>,
    /// Raw config echoed into the manifest.
    pub echo: RawConfig,
}

#[derive(Copy, Clone, Debug, Default)]
pub struct Formats {
    pub csv: bool,
    pub json: bool,
    pub svg: bool,
}

#[derive(Copy, Clone, Debug)]
pub struct ResolvedDetectors {
    pub x1: f64,
    pub x2: f64,
    delta_t1_explicit: Option<f64>,
}

impl ResolvedDetectors {
    /// First-click offset for the configured first detector.
    pub fn delta_t1(&self, params: &SystemParams) -> f64 {
        self.delta_t1_for(self.x1, params)
    }

    /// First-click offset for a detector at `x1` (sweeps override signs per
    /// geometry): the explicit config value, else `1/Gamma` left of the
    /// qubit and zero right of it.
    pub fn delta_t1_for(&self, x1: f64, params: &SystemParams) -> f64 {
        self.delta_t1_explicit
            .unwrap_or_else(|| crate::correlation::DetectorConfig::default_delta_t1(x1, params))
    }
}

#[derive(Clone, Debug)]
pub struct ResolvedSweep {
    pub geometries: Vec<Geometry>,
    pub omega0_values: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct ResolvedOracle {
    pub quantity: OracleQuantity,
    pub n_modes: usize,
    pub margin: f64,
    pub sigma: f64,
    pub detunings: Vec<f64>,
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, RunnerError> {
        let raw: RawConfig = toml::from_str(text)
            .map_err(|e| RunnerError::Config { context: "toml".into(), message: e.to_string() })?;
        Self::resolve(raw)
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self, RunnerError> {
        let text = std::fs::read_to_string(path).map_err(|e| RunnerError::Config {
            context: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::from_toml_str(&text)
    }

    fn resolve(raw: RawConfig) -> Result<Self, RunnerError> {
        // Scale from the declared frequency unit to Gamma = 1.
        let scale = match raw.units.frequency {
            FrequencyUnit::Gamma => 1.0 / raw.params.gamma,
            FrequencyUnit::OmegaQ => 1.0 / raw.params.gamma,
        };
        if !(raw.params.gamma > 0.0) {
            return Err(RunnerError::config("params.gamma", "must be positive"));
        }
        let params = SystemParams::new(
            raw.params.omega_q * scale,
            raw.params.gamma * scale,
            raw.params.lambda_rabi * scale * scale,
            raw.params.v_g,
            raw.params.delta_pw * scale,
            raw.params.coupling,
        )
        .map_err(|e| RunnerError::config("params", &e.to_string()))?;

        let pulse = raw
            .pulse
            .as_ref()
            .map(|p| resolve_pulse(p, scale))
            .transpose()?;

        let detectors = raw
            .detectors
            .as_ref()
            .map(|d| -> Result<ResolvedDetectors, RunnerError> {
                let x_unit = params.v_g / params.gamma;
                Ok(ResolvedDetectors {
                    x1: d.x1 * x_unit,
                    x2: d.x2 * x_unit,
                    delta_t1_explicit: d.delta_t1.map(|v| v / params.gamma),
                })
            })
            .transpose()?;

        let grid = raw.grid.clone().unwrap_or_default();
        let delta_t_grid = grid
            .delta_t
            .map(|r| r.points().map(|v| v.iter().map(|t| t / params.gamma).collect()))
            .transpose()?;
        let detuning_grid = grid
            .omega0_detuning
            .map(|r| r.points().map(|v| v.iter().map(|d| params.omega_q + d * params.gamma).collect()))
            .transpose()?;
        let tau_grid = grid
            .tau
            .map(|r| r.points().map(|v| v.iter().map(|t| t / params.gamma).collect()))
            .transpose()?;
        let rabi_shifts = grid.rabi_shifts.clone().map(|shifts| {
            shifts.iter().map(|s| s * params.gamma).collect::<Vec<f64>>()
        });
        if let Some(shifts) = &rabi_shifts {
            if shifts.is_empty() {
                return Err(RunnerError::config("grid.rabi_shifts", "must be non-empty"));
            }
        }

        let sweep = raw
            .sweep
            .as_ref()
            .map(|s| -> Result<ResolvedSweep, RunnerError> {
                if s.geometries.is_empty() || s.omega0_factors.is_empty() {
                    return Err(RunnerError::config("sweep", "geometries and omega0_factors must be non-empty"));
                }
                let geometries = s
                    .geometries
                    .iter()
                    .map(|g| parse_geometry(g))
                    .collect::<Result<Vec<_>, _>>()?;
                let omega0_values =
                    s.omega0_factors.iter().map(|f| f * params.omega_q).collect();
                Ok(ResolvedSweep { geometries, omega0_values })
            })
            .transpose()?;

        let oracle = raw
            .oracle
            .as_ref()
            .map(|o| -> Result<ResolvedOracle, RunnerError> {
                let quantity = match o.quantity.as_str() {
                    "transmission" => OracleQuantity::Transmission,
                    "g1-spont" => OracleQuantity::G1Spontaneous,
                    "g2-pp" => OracleQuantity::G2ForwardForward,
                    other => {
                        return Err(RunnerError::config(
                            "oracle.quantity",
                            &format!("unknown quantity '{other}' (expected transmission | g1-spont | g2-pp)"),
                        ))
                    }
                };
                Ok(ResolvedOracle {
                    quantity,
                    n_modes: o.n_modes,
                    margin: o.margin * params.gamma,
                    sigma: o.sigma * params.gamma,
                    detunings: o
                        .detunings
                        .clone()
                        .unwrap_or_else(|| vec![-2.0, -1.0, 0.0, 1.0, 2.0])
                        .iter()
                        .map(|d| d * params.gamma)
                        .collect(),
                })
            })
            .transpose()?;

        let mut formats = Formats::default();
        for f in &raw.run.formats {
            match f.as_str() {
                "csv" => formats.csv = true,
                "json" => formats.json = true,
                "svg" => formats.svg = true,
                other => {
                    return Err(RunnerError::config(
                        "run.formats",
                        &format!("unknown format '{other}' (expected csv | json | svg)"),
                    ))
                }
            }
        }

        // Per-command requirements, rejected at parse stage.
        let command = raw.run.command;
        match command {
            Command::Spectrum => {
                require(detuning_grid.is_some(), "grid.omega0_detuning", "required by spectrum")?;
                require(rabi_shifts.is_some(), "grid.rabi_shifts", "required by spectrum")?;
            }
            Command::G1TwoExc => {
                require(tau_grid.is_some(), "grid.tau", "required by g1-two-exc")?;
                require(detectors.is_some(), "detectors", "required by g1-two-exc")?;
                require_plane_wave(&pulse, "g1-two-exc")?;
            }
            Command::G2 => {
                require(delta_t_grid.is_some(), "grid.delta_t", "required by g2")?;
                require(detectors.is_some(), "detectors", "required by g2")?;
                require_plane_wave(&pulse, "g2")?;
            }
            Command::Sweep => {
                require(delta_t_grid.is_some(), "grid.delta_t", "required by sweep")?;
                require(sweep.is_some(), "sweep", "required by sweep")?;
                require(detectors.is_some(), "detectors", "required by sweep")?;
            }
            Command::OracleCompare => {
                require(oracle.is_some(), "oracle", "required by oracle-compare")?;
            }
        }

        Ok(Self {
            command,
            output_dir: std::path::PathBuf::from(&raw.run.output_dir),
            formats,
            params,
            pulse,
            detectors,
            delta_t_grid,
            detuning_grid,
            tau_grid,
            rabi_shifts,
            sweep,
            oracle,
            echo: raw,
        })
    }
}

fn require(ok: bool, field: &str, message: &str) -> Result<(), RunnerError> {
    if ok {
        Ok(())
    } else {
        Err(RunnerError::config(field, message))
    }
}

fn require_plane_wave(pulse: &Option<PulseSpectrum>, command: &str) -> Result<(), RunnerError> {
    match pulse {
        Some(PulseSpectrum::PlaneWave { .. }) => Ok(()),
        Some(_) => Err(RunnerError::config(
            "pulse.kind",
            &format!("{command} evaluates plane-wave closed forms; use kind = \"plane_wave\""),
        )),
        None => Err(RunnerError::config("pulse", &format!("required by {command}"))),
    }
}

fn parse_geometry(s: &str) -> Result<Geometry, RunnerError> {
    match s {
        "pp" | "(+,+)" => Ok(Geometry::PosPos),
        "mm" | "(-,-)" => Ok(Geometry::NegNeg),
        "pm" | "(+,-)" => Ok(Geometry::PosNeg),
        "mp" | "(-,+)" => Ok(Geometry::NegPos),
        other => Err(RunnerError::config(
            "sweep.geometries",
            &format!("unknown geometry '{other}' (expected pp | mm | pm | mp)"),
        )),
    }
}

fn resolve_pulse(raw: &RawPulse, scale: f64) -> Result<PulseSpectrum, RunnerError> {
    let omega0 = raw.omega0 * scale;
    let pulse = match raw.kind.as_str() {
        "plane_wave" => PulseSpectrum::plane_wave(omega0),
        "gaussian" => {
            let sigma = raw
                .sigma
                .ok_or_else(|| RunnerError::config("pulse.sigma", "required for gaussian pulses"))?;
            PulseSpectrum::gaussian(omega0, sigma * scale)
        }
        "tabulated" => {
            let grid = raw
                .grid
                .clone()
                .ok_or_else(|| RunnerError::config("pulse.grid", "required for tabulated pulses"))?;
            let re = raw.values_re.clone().ok_or_else(|| {
                RunnerError::config("pulse.values_re", "required for tabulated pulses")
            })?;
            let im = raw.values_im.clone().unwrap_or_else(|| vec![0.0; re.len()]);
            if im.len() != re.len() {
                return Err(RunnerError::config(
                    "pulse.values_im",
                    "must match values_re in length",
                ));
            }
            let grid = grid.iter().map(|w| w * scale).collect();
            let values = re.iter().zip(&im).map(|(&r, &i)| C64::new(r, i)).collect();
            PulseSpectrum::tabulated(grid, values)
        }
        other => {
            return Err(RunnerError::config(
                "pulse.kind",
                &format!("unknown pulse kind '{other}' (expected plane_wave | gaussian | tabulated)"),
            ))
        }
    }
    .map_err(|e| RunnerError::config("pulse", &e.to_string()))?;
    normalize_pulse(pulse).map_err(|e| RunnerError::config("pulse", &e.to_string()))
}
