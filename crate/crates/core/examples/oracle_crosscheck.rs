//! Closed forms vs brute force: the same pulse-scattering density computed
//! by spectral quadrature of the analytic matrix element and by discretized
//! time evolution that never sees a closed form.
//!
//! ```bash
//! cargo run --example oracle_crosscheck
//! ```

use wqed::matrix_elements::me_pulse_g1;
use wqed::model::{PulseSpectrum, SpaceTimePoint, SystemParams};
use wqed::oracle::{build_grid, oracle_g1_samples, EvolutionPlan, OneExcState};
use wqed::quadrature::Tolerance;

fn main() {
    let params = SystemParams::reduced(0.01, 1.0).unwrap();
    let pulse = PulseSpectrum::gaussian(params.omega_q + params.gamma, params.gamma / 10.0).unwrap();

    let grid = build_grid(&params, 2000, 50.0 * params.gamma).unwrap();
    let plan = EvolutionPlan::with_dt(&grid, 0.1 / grid.max_detuning(), vec![]).unwrap();
    let init = OneExcState::photon_from_pulse(&pulse, &grid);

    let mut samples: Vec<(f64, f64)> = Vec::new();
    for (x, tau) in [
        (5.0, 0.0),
        (10.0, -2.0),
        (10.0, 3.0),
        (15.0, 0.0),
        (-18.0, 1.0),
        (-20.0, 2.0),
        (-22.0, 5.0),
    ] {
        let x = x * params.v_g / params.gamma;
        samples.push((x, x.abs() / params.v_g + tau / params.gamma));
    }
    samples.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    let oracle = oracle_g1_samples(&init, &samples, &grid, &plan);

    println!("Gaussian pulse, one linewidth detuned, sigma = Gamma/10");
    println!("     x       tau     quadrature      oracle        rel. dev.");
    for ((x, t), o) in samples.iter().zip(&oracle) {
        let pt = SpaceTimePoint::new(*x, *t).unwrap();
        let analytic =
            me_pulse_g1(&pt, &pulse, &params, Tolerance::analytic()).unwrap().value.norm_sqr();
        let rel = (o.value - analytic).abs() / analytic.max(f64::MIN_POSITIVE);
        println!(
            "{:7.1} {:8.2}    {analytic:11.5e}   {:11.5e}    {rel:.2e}",
            x * params.gamma / params.v_g,
            (t - x.abs() / params.v_g) * params.gamma,
            o.value
        );
    }
    println!("\nthe two routes share no code past the system parameters");
}
