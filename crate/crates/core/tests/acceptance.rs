//! Acceptance suite: one test per shipped guarantee, each printing a
//! PASS/FAIL line with the measured numbers (run with `--nocapture` to see
//! them on success).

use wqed::correlation::{g1_spontaneous, g2, DetectorConfig, Geometry};
use wqed::matrix_elements::{me_pulse_g1, reflection_amplitude, transmission_amplitude};
use wqed::model::{PulseSpectrum, SpaceTimePoint, SystemParams};
use wqed::oracle::{
    build_grid, evolve_one_exc, oracle_g1_samples, oracle_g2_sweep, EvolutionPlan, OneExcState,
    TwoExcState,
};
use wqed::quadrature::{integrate, SpectralKernel, Tolerance};

fn verdict(criterion: u32, name: &str, pass: bool, details: &str) {
    println!(
        "criterion {criterion:2} ({name}): {} — {details}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} ({name}) failed: {details}");
}

/// |t|^2 + |r|^2 = 1 to 1e-12 across a 1000-point window of +/- 10 linewidths.
#[test]
fn criterion_01_unitarity() {
    let start = std::time::Instant::now();
    let p = SystemParams::reduced(0.02, 1.0).unwrap();
    let mut worst = 0.0f64;
    for i in 0..1000 {
        let w = p.omega_q - 10.0 * p.gamma + 20.0 * p.gamma * i as f64 / 999.0;
        let s = transmission_amplitude(w, &p).norm_sqr() + reflection_amplitude(w, &p).norm_sqr();
        worst = worst.max((s - 1.0).abs());
    }
    let pass = worst < 1e-12;
    verdict(
        1,
        "unitarity",
        pass,
        &format!("max ||t|^2+|r|^2 - 1| = {worst:.3e}, runtime {:.3}s", start.elapsed().as_secs_f64()),
    );
}

/// Resonant forward-forward closed form equals 4 exp(-2 Gamma dT) to 1e-12.
#[test]
fn criterion_02_resonant_hbt_closed_form() {
    let start = std::time::Instant::now();
    let p = SystemParams::reduced(0.02, 1.0).unwrap();
    let cfg = DetectorConfig::new(0.5, 1.0, 0.0, 0.0).unwrap();
    let mut worst = 0.0f64;
    for i in 0..=600 {
        let dt = 6.0 * i as f64 / 600.0 / p.gamma;
        let d = g2(&cfg.at_delay(dt).unwrap(), p.omega_q, &p).unwrap();
        worst = worst.max((d.full - 4.0 * (-2.0 * p.gamma * dt).exp()).abs());
    }
    let pass = worst < 1e-12;
    verdict(
        2,
        "resonant (+,+) = 4 exp(-2 Gamma dT)",
        pass,
        &format!("max deviation {worst:.3e}, runtime {:.3}s", start.elapsed().as_secs_f64()),
    );
}

/// The (+,-) resonant zero sits at Gamma dT = ln 2 to 1e-9 (bisection).
#[test]
fn criterion_03_destructive_zero_at_ln2() {
    let start = std::time::Instant::now();
    let p = SystemParams::reduced(0.02, 1.0).unwrap();
    let cfg = DetectorConfig::new(0.5, -1.0, 0.0, 0.0).unwrap();
    // The zero of the full correlation is the crossing of the two pathway
    // weights, which is a signed quantity suitable for bisection.
    let sign = |dt: f64| {
        let d = g2(&cfg.at_delay(dt).unwrap(), p.omega_q, &p).unwrap();
        d.path1 - d.path2
    };
    let (mut lo, mut hi) = (0.01 / p.gamma, 5.0 / p.gamma);
    assert!(sign(lo) < 0.0 && sign(hi) > 0.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if sign(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let root = 0.5 * (lo + hi) * p.gamma;
    let err = (root - std::f64::consts::LN_2).abs();
    // And the correlation value itself vanishes there.
    let at_root = g2(&cfg.at_delay(root / p.gamma).unwrap(), p.omega_q, &p).unwrap().full;
    let pass = err < 1e-9 && at_root < 1e-15;
    verdict(
        3,
        "(+,-) zero at ln 2",
        pass,
        &format!(
            "|Gamma dT - ln2| = {err:.3e}, g2(root) = {at_root:.3e}, runtime {:.3}s",
            start.elapsed().as_secs_f64()
        ),
    );
}

/// Oscillation-averaged forward spectra: two maxima at Omega +/- 2 sqrt(Lambda)
/// within one grid step for the 2 and 5 linewidth shifts, unit baseline far out.
#[test]
fn criterion_04_averaged_spectrum_reproduction() {
    let start = std::time::Instant::now();
    let step = 0.05;
    let mut pass = true;
    let mut details = String::new();
    for rabi in [1.0f64, 2.0, 5.0] {
        let p = SystemParams::reduced(0.02, rabi).unwrap();
        let n = 2201usize;
        let grid: Vec<f64> = (0..n)
            .map(|i| p.omega_q + (i as f64 - (n - 1) as f64 / 2.0) * step * p.gamma)
            .collect();
        let vals: Vec<f64> = grid
            .iter()
            .map(|&w| wqed::correlation::g1_av_spectrum(w, wqed::correlation::AxisSide::Positive, &p))
            .collect();
        let mut maxima = Vec::new();
        for i in 1..n - 1 {
            if vals[i] > vals[i - 1] && vals[i] > vals[i + 1] {
                maxima.push(grid[i]);
            }
        }
        if rabi >= 2.0 {
            let two = maxima.len() == 2;
            let placed = two
                && (maxima[0] - (p.omega_q - p.rabi_shift())).abs() <= step * p.gamma
                && (maxima[1] - (p.omega_q + p.rabi_shift())).abs() <= step * p.gamma;
            pass &= two && placed;
            details.push_str(&format!("shift {rabi}G: {} maxima; ", maxima.len()));
        }
        let base = wqed::correlation::g1_av_spectrum(
            p.omega_q + 50.0 * p.gamma,
            wqed::correlation::AxisSide::Positive,
            &p,
        );
        pass &= (base - 1.0).abs() < 1e-3;
        details.push_str(&format!("baseline(+50G)-1 = {:.2e}; ", base - 1.0));
    }
    details.push_str(&format!("runtime {:.3}s", start.elapsed().as_secs_f64()));
    verdict(4, "averaged spectrum structure", pass, &details);
}

/// Pathway decomposition identity, positivity and the interference bound over
/// a 4-geometry x 200-delay x 5-detuning sweep.
#[test]
fn criterion_05_decomposition_identity_and_bounds() {
    let start = std::time::Instant::now();
    let p = SystemParams::reduced(0.02, 1.0).unwrap();
    let mut worst_identity = 0.0f64;
    let mut pass = true;
    let mut points = 0usize;
    for geometry in [Geometry::PosPos, Geometry::NegNeg, Geometry::PosNeg, Geometry::NegPos] {
        let (x1, x2) = match geometry {
            Geometry::PosPos => (0.5, 1.0),
            Geometry::NegNeg => (-0.5, -1.0),
            Geometry::PosNeg => (0.5, -1.0),
            Geometry::NegPos => (-0.5, 1.0),
        };
        let delta_t1 = DetectorConfig::default_delta_t1(x1, &p);
        for detuning in [-2.0f64, -1.0, 0.0, 1.0, 2.0] {
            let omega0 = p.omega_q + detuning * p.gamma;
            for i in 0..200 {
                let dt = 6.0 * i as f64 / 199.0 / p.gamma;
                let cfg = DetectorConfig::new(x1, x2, dt, delta_t1).unwrap();
                let d = g2(&cfg, omega0, &p).unwrap();
                let identity = (d.full - (d.path1 + d.path2 + d.interference)).abs();
                worst_identity = worst_identity.max(identity);
                pass &= identity < 1e-10;
                pass &= d.full >= 0.0 && d.path1 >= 0.0 && d.path2 >= 0.0;
                pass &= d.interference.abs() <= 2.0 * (d.path1 * d.path2).sqrt() + 1e-12;
                points += 1;
            }
        }
    }
    verdict(
        5,
        "decomposition identity and bounds",
        pass,
        &format!(
            "{points} points, max identity residual {worst_identity:.3e}, runtime {:.3}s",
            start.elapsed().as_secs_f64()
        ),
    );
}

/// Discretized-continuum decay matches exp(-2 Gamma t): rate fitted against
/// the stated unit-prefactor model over Gamma t <= 5, error < 1%.
#[test]
fn criterion_06_wigner_weisskopf_oracle() {
    let start = std::time::Instant::now();
    // Gamma/Omega = 0.01 keeps the 50-linewidth margin above zero frequency.
    let p = SystemParams::reduced(0.01, 1.0).unwrap();
    let grid = build_grid(&p, 2000, 50.0 * p.gamma).unwrap();
    assert!((grid.d_omega() - 0.05 * p.gamma).abs() < 1e-4 * p.gamma);
    let snapshots: Vec<f64> = (0..=50).map(|i| 5.0 * i as f64 / 50.0 / p.gamma).collect();
    let plan = EvolutionPlan::with_dt(&grid, 0.1 / grid.max_detuning(), snapshots).unwrap();
    let traj = evolve_one_exc(&OneExcState::atom_excited(&grid), &grid, &plan).unwrap();

    // Rate-only fit of ln p(t) = -r t (the reference model has prefactor 1),
    // skipping t = 0 where ln p = 0 carries no information.
    let mut num = 0.0;
    let mut den = 0.0;
    // Free-prefactor fit for transparency.
    let (mut s_t, mut s_tt, mut s_y, mut s_ty, mut n) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (t, state) in traj.times.iter().zip(&traj.states) {
        let pe = state.atom_population();
        if *t == 0.0 {
            continue;
        }
        let y = pe.ln();
        num += t * y;
        den += t * t;
        s_t += t;
        s_tt += t * t;
        s_y += y;
        s_ty += t * y;
        n += 1.0;
    }
    let rate_anchored = -num / den;
    let rate_free = -(n * s_ty - s_t * s_y) / (n * s_tt - s_t * s_t);
    let err_anchored = (rate_anchored - 2.0 * p.gamma).abs() / (2.0 * p.gamma);
    let err_free = (rate_free - 2.0 * p.gamma).abs() / (2.0 * p.gamma);
    let pass = err_anchored < 0.01;
    verdict(
        6,
        "Wigner-Weisskopf decay rate",
        pass,
        &format!(
            "fitted-rate error {err_anchored:.4e} (free-prefactor fit {err_free:.4e}; window truncation biases the rate by 2 Gamma/(pi margin)), runtime {:.3}s",
            start.elapsed().as_secs_f64()
        ),
    );
}

/// Oracle vs spectral-quadrature first-order density for a Gaussian pulse
/// through the ground-state qubit: relative L2 deviation < 2% over 50 samples.
#[test]
fn criterion_07_oracle_vs_analytic_g1() {
    let start = std::time::Instant::now();
    let p = SystemParams::reduced(0.01, 1.0).unwrap();
    let sigma = p.gamma / 10.0;
    let omega0 = p.omega_q + p.gamma;
    let pulse = PulseSpectrum::gaussian(omega0, sigma).unwrap();

    // Transmitted-side samples ride the packet; reflected-side samples sit
    // far enough out that the incident tail (packet centered on the qubit
    // at t = 0) has left them.
    let mut samples: Vec<(f64, f64)> = Vec::new();
    for x in [5.0f64, 8.0, 10.0, 15.0] {
        for tau in [-4.0f64, -1.0, 0.0, 1.0, 4.0, 8.0, 12.0] {
            let t = tau + x;
            if t > 0.0 {
                samples.push((x, t));
            }
        }
    }
    for x in [-17.0f64, -20.0, -23.0] {
        for tau in [-4.0f64, -1.0, 0.0, 1.0, 2.0, 5.0, 8.0, 10.0] {
            samples.push((x, x.abs() + tau));
        }
    }
    samples.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    assert!(samples.len() >= 50, "need at least 50 samples, have {}", samples.len());

    let grid = build_grid(&p, 2000, 50.0 * p.gamma).unwrap();
    let plan = EvolutionPlan::with_dt(&grid, 0.1 / grid.max_detuning(), vec![]).unwrap();
    let init = OneExcState::photon_from_pulse(&pulse, &grid);
    let oracle = oracle_g1_samples(&init, &samples, &grid, &plan);

    let mut num = 0.0;
    let mut den = 0.0;
    for ((x, t), o) in samples.iter().zip(&oracle) {
        assert!(!o.beyond_recurrence_guard);
        let pt = SpaceTimePoint::new(*x, *t).unwrap();
        let analytic =
            me_pulse_g1(&pt, &pulse, &p, Tolerance::analytic()).unwrap().value.norm_sqr();
        num += (o.value - analytic) * (o.value - analytic);
        den += analytic * analytic;
    }
    let l2 = (num / den).sqrt();
    let pass = l2 < 0.02;
    verdict(
        7,
        "oracle vs quadrature G1",
        pass,
        &format!(
            "{} samples, relative L2 deviation {l2:.4e}, runtime {:.3}s",
            samples.len(),
            start.elapsed().as_secs_f64()
        ),
    );
}

/// Oracle vs closed-form forward-forward second-order correlation at
/// resonance: scale-normalized deviation < 5% over 8 delays, shrinking at
/// least 1.5x when the mode count doubles (window doubles at fixed spacing).
#[test]
fn criterion_08_oracle_vs_analytic_g2() {
    let start = std::time::Instant::now();
    let p = SystemParams::reduced(0.02, 1.0).unwrap();
    let sigma = p.gamma / 20.0;
    let pulse = PulseSpectrum::gaussian(p.omega_q, sigma).unwrap();
    let delays: Vec<f64> = (0..8).map(|i| 0.3 * i as f64 / p.gamma).collect();
    let closed: Vec<f64> =
        delays.iter().map(|&dt| 4.0 * (-2.0 * p.gamma * dt).exp()).collect();

    let run = |n_modes: usize, margin: f64| -> f64 {
        let grid = build_grid(&p, n_modes, margin).unwrap();
        let plan = EvolutionPlan::with_dt(&grid, 0.1 / grid.max_detuning(), vec![]).unwrap();
        let init = TwoExcState::excited_with_pulse(&pulse, &grid);
        // First click half a lifetime past the light cone (clears the
        // band-edge ringing of the wavefront); at resonance the delay shape
        // is exactly offset-invariant.
        let cfg = DetectorConfig::new(0.5, 1.0, 0.0, 0.5 / p.gamma).unwrap();
        let raw = oracle_g2_sweep(&init, &cfg, &delays, &grid, &plan).unwrap();
        for v in &raw {
            assert!(!v.beyond_recurrence_guard);
        }
        let scale = raw.iter().zip(&closed).map(|(o, c)| o.value * c).sum::<f64>()
            / closed.iter().map(|c| c * c).sum::<f64>();
        raw.iter()
            .zip(&closed)
            .map(|(o, c)| (o.value / scale - c).abs() / closed[0])
            .fold(0.0f64, f64::max)
    };

    let dev_small = run(200, 20.0 * p.gamma);
    let dev_large = run(400, 40.0 * p.gamma);
    let shrink = dev_small / dev_large;
    let pass = dev_small < 0.05 && shrink >= 1.5;
    verdict(
        8,
        "oracle vs closed-form g2 (+,+)",
        pass,
        &format!(
            "max normalized deviation N=200: {dev_small:.4e}, N=400: {dev_large:.4e}, shrink {shrink:.2}x, runtime {:.3}s",
            start.elapsed().as_secs_f64()
        ),
    );
}

/// The spatial integral of the spontaneous density over both half-axes
/// equals Gamma v_g (1 - exp(-2 Gamma t)): checked by independent
/// quadrature over position.
#[test]
fn criterion_09_spontaneous_normalization() {
    let start = std::time::Instant::now();
    let p = SystemParams::reduced(0.02, 1.0).unwrap();
    let mut worst = 0.0f64;
    for t in [0.3, 1.3, 3.0f64] {
        // Integrate over x in (0, v_g t]; the two half-axes contribute
        // equally by symmetry.
        let kernel = SpectralKernel::new(
            |x: f64| {
                let pt = SpaceTimePoint::new(x, t).unwrap();
                num_complex::Complex64::new(g1_spontaneous(&pt, &p).value, 0.0)
            },
            (0.0, p.v_g * t),
            p.v_g / (2.0 * p.gamma),
        )
        .unwrap();
        let integral = 2.0 * integrate(&kernel, Tolerance::absolute(1e-10)).unwrap().value.re;
        let expect = 1.0 - (-2.0 * p.gamma * t).exp();
        worst = worst.max((integral / (p.gamma * p.v_g) - expect).abs());
    }
    let pass = worst < 1e-6;
    verdict(
        9,
        "spontaneous emission normalization",
        pass,
        &format!("max deviation {worst:.3e}, runtime {:.3}s", start.elapsed().as_secs_f64()),
    );
}

/// Repeated sweep runs produce byte-identical CSV artifacts.
#[test]
fn criterion_10_determinism() {
    let start = std::time::Instant::now();
    let bin = env!("CARGO_BIN_EXE_wqed");
    let base = tempfile::tempdir().unwrap();
    let mut checksums: Vec<Vec<(String, String)>> = Vec::new();
    for run_idx in 0..2 {
        let out = base.path().join(format!("run{run_idx}"));
        let config = format!(
            r#"
[run]
command = "sweep"
output_dir = "{}"
formats = ["csv", "json", "svg"]

[params]
omega_q = 50.0
gamma = 1.0
lambda_rabi = 0.25

[detectors]
x1 = 0.5
x2 = 1.0

[grid]
delta_t = {{ min = 0.0, max = 6.0, n = 400 }}

[sweep]
geometries = ["pp", "mm", "pm", "mp"]
omega0_factors = [1.0, 1.1]
"#,
            out.display()
        );
        let cfg_path = base.path().join(format!("sweep{run_idx}.toml"));
        std::fs::write(&cfg_path, config).unwrap();
        let status = std::process::Command::new(bin)
            .args(["sweep", "--config"])
            .arg(&cfg_path)
            .status()
            .unwrap();
        assert!(status.success());
        let manifest: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(out.join("manifest.json")).unwrap())
                .unwrap();
        let mut sums: Vec<(String, String)> = manifest["files"]
            .as_array()
            .unwrap()
            .iter()
            .filter(|f| f["name"].as_str().unwrap().ends_with(".csv"))
            .map(|f| {
                (
                    f["name"].as_str().unwrap().to_string(),
                    f["sha256"].as_str().unwrap().to_string(),
                )
            })
            .collect();
        sums.sort();
        checksums.push(sums);
    }
    let pass = !checksums[0].is_empty() && checksums[0] == checksums[1];
    verdict(
        10,
        "byte-identical sweep reruns",
        pass,
        &format!(
            "{} CSV files compared, runtime {:.3}s",
            checksums[0].len(),
            start.elapsed().as_secs_f64()
        ),
    );
}
