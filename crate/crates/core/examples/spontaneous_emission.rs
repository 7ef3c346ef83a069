//! Spatial profile of the spontaneously emitted photon and its total
//! detection probability.
//!
//! ```bash
//! cargo run --example spontaneous_emission
//! ```

use num_complex::Complex64 as C64;
use wqed::correlation::g1_spontaneous;
use wqed::model::{SpaceTimePoint, SystemParams};
use wqed::quadrature::{integrate, SpectralKernel, Tolerance};

fn main() {
    let params = SystemParams::reduced(0.02, 1.0).unwrap();
    let t = 2.0 / params.gamma;

    println!("spontaneous photon density at Gamma t = {}:", params.gamma * t);
    println!("x Gamma/v_g      G1/Gamma^2");
    for i in 0..=12 {
        let x = -3.0 + 0.5 * i as f64;
        if x == 0.0 {
            continue;
        }
        let pt = SpaceTimePoint::new(x * params.v_g / params.gamma, t).unwrap();
        let g1 = g1_spontaneous(&pt, &params).value / (params.gamma * params.gamma);
        println!("{x:10.2}      {g1:.6}");
    }

    // Integrated over both half-axes the density accounts for exactly the
    // probability the qubit has decayed so far.
    for gt in [0.5, 1.0, 2.0, 4.0] {
        let t = gt / params.gamma;
        let kernel = SpectralKernel::new(
            |x: f64| {
                let pt = SpaceTimePoint::new(x, t).unwrap();
                C64::new(g1_spontaneous(&pt, &params).value, 0.0)
            },
            (0.0, params.v_g * t),
            params.v_g / (2.0 * params.gamma),
        )
        .unwrap();
        let integral = 2.0 * integrate(&kernel, Tolerance::absolute(1e-10)).unwrap().value.re
            / (params.gamma * params.v_g);
        let expect = 1.0 - (-2.0 * gt).exp();
        println!(
            "Gamma t = {gt:3.1}: integrated probability {integral:.8} vs 1-exp(-2 Gamma t) = {expect:.8}"
        );
    }
}
