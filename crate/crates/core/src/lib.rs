//! Photon correlation functions for a single two-level emitter coupled to a
//! one-dimensional open waveguide.
//!
//! The crate evaluates the closed-form matrix elements of the
//! positive-frequency field operator between few-excitation states
//! (spontaneous emission, single-pulse scattering, and the two-excitation
//! sector with its stimulated-Rabi structure), assembles first- and
//! second-order correlation functions from them, and cross-validates every
//! closed form against an independent discretized-continuum time-evolution
//! oracle that never touches the analytic results.
//!
//! Organization:
//!
//! - [`model`]: system parameters, coupling profiles, pulse spectra, points.
//! - [`quadrature`]: adaptive Gauss-Kronrod integration of spectral kernels.
//! - [`matrix_elements`]: the closed-form field matrix elements.
//! - [`correlation`]: `G1`/`G2` assembly, pathway decomposition, spectra.
//! - [`oracle`]: discretized-mode brute-force validator.
//! - [`runner`]: batch front-end (config files, CSV/JSON/SVG artifacts).
//!
//! The `examples/` directory holds one runnable example per capability; the
//! thin `wqed` binary drives batch runs from TOML configs.

// Validation deliberately writes `!(x > 0.0)` so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Quadrature nodes/weights are written at full published precision.
#![allow(clippy::excessive_precision)]

pub mod correlation;
pub mod matrix_elements;
pub mod model;
pub mod oracle;
pub mod quadrature;
pub mod runner;

pub use correlation::{
    g1_av_spectrum, g1_pulse, g1_spontaneous, g1_two_excitation, g2, g2_sweep, AxisSide,
    DetectorConfig, G1Result, G2Decomposition, Geometry,
};
pub use matrix_elements::{
    me_e0_from_e1, me_g0_from_adag, me_g0a_from_e1, me_pulse_g1, me_spontaneous,
    reflection_amplitude, transmission_amplitude, DeltaPlusSmooth, FieldMatrixElement,
};
pub use model::{
    coupling_g, normalize_pulse, validate_params, CouplingMode, PulseSpectrum, SpaceTimePoint,
    SystemParams,
};
pub use quadrature::{integrate, IntegralResult, SpectralKernel, Tolerance};
