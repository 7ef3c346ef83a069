//! Adaptive one-dimensional integration of complex-valued spectral kernels.
//!
//! The integrands this crate meets are Lorentzian-pole structures (poles
//! displaced off the real axis by the linewidth) multiplied by oscillatory
//! phase factors `exp(-i omega tau)`. A 15-point Kronrod rule with its
//! embedded 7-point Gauss rule is applied per panel; panels are bisected
//! until each panel's error estimate is below its width-proportional share
//! of the requested tolerance.

use num_complex::Complex64 as C64;

/// 15-point Kronrod abscissae on [0, 1] (positive half, center last).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_2,
    0.949_107_912_342_758_524_5,
    0.864_864_423_359_769_072_8,
    0.741_531_185_599_394_439_9,
    0.586_087_235_467_691_130_3,
    0.405_845_151_377_397_166_9,
    0.207_784_955_007_898_467_6,
    0.0,
];

/// Kronrod weights matching [`XGK`].
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_96,
    0.063_092_092_629_978_553_29,
    0.104_790_010_322_250_183_8,
    0.140_653_259_715_525_918_7,
    0.169_004_726_639_267_902_8,
    0.190_350_578_064_785_409_9,
    0.204_432_940_075_298_892_4,
    0.209_482_141_084_727_828_0,
];

/// 7-point Gauss weights for the odd-index abscissae of [`XGK`] (center last).
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_3,
    0.279_705_391_489_276_667_9,
    0.381_830_050_505_118_944_9,
    0.417_959_183_673_469_387_8,
];

/// A complex-valued integrand over a finite frequency window, together with
/// the smallest structure width the integrator must resolve (typically
/// `min(linewidth, pulse width)`).
pub struct SpectralKernel<F>
where
    F: Fn(f64) -> C64,
{
    pub evaluate: F,
    pub window: (f64, f64),
    pub feature_scale: f64,
}

impl<F> SpectralKernel<F>
where
    F: Fn(f64) -> C64,
{
    pub fn new(evaluate: F, window: (f64, f64), feature_scale: f64) -> Result<Self, QuadratureError> {
        if !(window.1 > window.0) || !window.0.is_finite() || !window.1.is_finite() {
            return Err(QuadratureError::BadWindow { lo: window.0, hi: window.1 });
        }
        if !(feature_scale > 0.0) {
            return Err(QuadratureError::BadFeatureScale { scale: feature_scale });
        }
        Ok(Self { evaluate, window, feature_scale })
    }
}

/// Requested accuracy. The effective absolute target is
/// `max(abs, rel * |coarse value|)`.
#[derive(Copy, Clone, Debug)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    /// Default for closed-form evaluation paths.
    pub fn analytic() -> Self {
        Self { abs: 1e-14, rel: 1e-9 }
    }

    /// Looser default for bulk parameter sweeps.
    pub fn sweep() -> Self {
        Self { abs: 1e-12, rel: 1e-6 }
    }

    pub fn absolute(abs: f64) -> Self {
        Self { abs, rel: 0.0 }
    }
}

/// Result of an adaptive integration.
#[derive(Copy, Clone, Debug)]
pub struct IntegralResult {
    pub value: C64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
}

/// Panel-width restrictions computed before integrating.
#[derive(Copy, Clone, Debug, Default)]
pub struct PanelPlan {
    /// Hard cap on panel width; `None` means only the feature scale limits
    /// the initial panels.
    pub max_panel_width: Option<f64>,
}

/// Cap panel widths so that phase factors `exp(-i omega tau)` with retarded
/// times up to `tau_max` cannot alias across a panel: width <= pi/(4 tau_max).
pub fn oscillation_guard<F>(_kernel: &SpectralKernel<F>, tau_max: f64) -> PanelPlan
where
    F: Fn(f64) -> C64,
{
    if tau_max > 0.0 {
        PanelPlan { max_panel_width: Some(std::f64::consts::PI / (4.0 * tau_max)) }
    } else {
        PanelPlan::default()
    }
}

/// Integrate `kernel` over its window to the requested tolerance.
pub fn integrate<F>(kernel: &SpectralKernel<F>, tol: Tolerance) -> Result<IntegralResult, QuadratureError>
where
    F: Fn(f64) -> C64,
{
    integrate_with_plan(kernel, tol, &PanelPlan::default())
}

const MAX_INITIAL_PANELS: usize = 400_000;
const MAX_EVALUATIONS: usize = 40_000_000;

/// Integrate with an explicit panel plan (see [`oscillation_guard`]).
pub fn integrate_with_plan<F>(
    kernel: &SpectralKernel<F>,
    tol: Tolerance,
    plan: &PanelPlan,
) -> Result<IntegralResult, QuadratureError>
where
    F: Fn(f64) -> C64,
{
    let (lo, hi) = kernel.window;
    if !(hi > lo) {
        return Err(QuadratureError::BadWindow { lo, hi });
    }
    let total_width = hi - lo;
    let mut cap = kernel.feature_scale / 4.0;
    if let Some(w) = plan.max_panel_width {
        cap = cap.min(w);
    }
    let n0 = ((total_width / cap).ceil() as usize).clamp(1, MAX_INITIAL_PANELS);
    if (total_width / cap).ceil() > MAX_INITIAL_PANELS as f64 {
        return Err(QuadratureError::PlanTooFine { panels: (total_width / cap).ceil() });
    }

    let mut evaluations = 0usize;
    let mut panels: Vec<Panel> = Vec::with_capacity(n0 + 16);
    for i in 0..n0 {
        let a = lo + total_width * i as f64 / n0 as f64;
        let b = if i + 1 == n0 { hi } else { lo + total_width * (i + 1) as f64 / n0 as f64 };
        panels.push(gk15(&kernel.evaluate, a, b, &mut evaluations));
    }

    let coarse: C64 = panels.iter().map(|p| p.value).sum();
    let target = tol.abs.max(tol.rel * coarse.norm()).max(f64::MIN_POSITIVE);

    // Split every panel whose error exceeds its width-share of the target.
    let mut stack: Vec<Panel> = panels;
    let mut done: Vec<Panel> = Vec::new();
    while let Some(p) = stack.pop() {
        let share = target * ((p.hi - p.lo) / total_width);
        if p.err <= share {
            done.push(p);
            continue;
        }
        if evaluations >= MAX_EVALUATIONS {
            done.push(p);
            done.append(&mut stack);
            let (value, err) = accumulate(&done);
            return Err(QuadratureError::NonConvergence {
                best: IntegralResult { value, abs_error_estimate: err, evaluations },
            });
        }
        let mid = 0.5 * (p.lo + p.hi);
        stack.push(gk15(&kernel.evaluate, p.lo, mid, &mut evaluations));
        stack.push(gk15(&kernel.evaluate, mid, p.hi, &mut evaluations));
    }

    let (value, err) = accumulate(&done);
    Ok(IntegralResult { value, abs_error_estimate: err, evaluations })
}

fn accumulate(panels: &[Panel]) -> (C64, f64) {
    let mut value = C64::new(0.0, 0.0);
    let mut err = 0.0;
    for p in panels {
        value += p.value;
        err += p.err;
    }
    (value, err)
}

struct Panel {
    lo: f64,
    hi: f64,
    value: C64,
    err: f64,
}

/// One 15-point Kronrod panel with the embedded 7-point Gauss estimate.
fn gk15<F>(f: &F, a: f64, b: f64, evaluations: &mut usize) -> Panel
where
    F: Fn(f64) -> C64,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let mut fv = [C64::new(0.0, 0.0); 15];
    for (j, &x) in XGK.iter().enumerate().take(7) {
        fv[j] = f(center - half * x);
        fv[14 - j] = f(center + half * x);
    }
    fv[7] = f(center);
    *evaluations += 15;

    let mut kronrod = C64::new(0.0, 0.0);
    let mut resabs = 0.0;
    for j in 0..7 {
        kronrod += WGK[j] * (fv[j] + fv[14 - j]);
        resabs += WGK[j] * (fv[j].norm() + fv[14 - j].norm());
    }
    kronrod += WGK[7] * fv[7];
    resabs += WGK[7] * fv[7].norm();

    // Gauss nodes are the odd-index Kronrod abscissae plus the center.
    let mut gauss = WG[3] * fv[7];
    for (j, wg) in WG.iter().enumerate().take(3) {
        let idx = 2 * j + 1;
        gauss += *wg * (fv[idx] + fv[14 - idx]);
    }

    let mean = kronrod * 0.5;
    let mut resasc = WGK[7] * (fv[7] - mean).norm();
    for j in 0..7 {
        resasc += WGK[j] * ((fv[j] - mean).norm() + (fv[14 - j] - mean).norm());
    }

    let value = kronrod * half;
    let raw = ((kronrod - gauss) * half).norm();
    Panel { lo: a, hi: b, value, err: rescale_error(raw, resabs * half, resasc * half) }
}

/// QUADPACK-style error rescaling: sharpen the raw `|K - G|` difference
/// toward its observed asymptotic behaviour, with a floor at the rounding
/// level of the panel.
fn rescale_error(err: f64, resabs: f64, resasc: f64) -> f64 {
    let mut scaled = err;
    if resasc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / resasc).powf(1.5);
        scaled = if scale < 1.0 { resasc * scale } else { resasc };
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * resabs);
    }
    scaled
}

#[derive(Clone, Debug)]
pub enum QuadratureError {
    BadWindow { lo: f64, hi: f64 },
    BadFeatureScale { scale: f64 },
    PlanTooFine { panels: f64 },
    /// The subdivision budget ran out; carries the best value reached and
    /// its error estimate.
    NonConvergence { best: IntegralResult },
}

impl std::fmt::Display for QuadratureError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::BadWindow { lo, hi } => write!(f, "bad integration window [{lo}, {hi}]"),
            Self::BadFeatureScale { scale } => write!(f, "feature scale must be positive, got {scale}"),
            Self::PlanTooFine { panels } => {
                write!(f, "panel plan requires {panels} initial panels, above the supported maximum")
            }
            Self::NonConvergence { best } => write!(
                f,
                "integration did not converge; best value {} with error estimate {:.3e} after {} evaluations",
                best.value, best.abs_error_estimate, best.evaluations
            ),
        }
    }
}

impl std::error::Error for QuadratureError {}
