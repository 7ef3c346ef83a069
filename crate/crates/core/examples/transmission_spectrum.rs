//! Single-photon transmission and reflection across the qubit resonance.
//!
//! ```bash
//! cargo run --example transmission_spectrum
//! ```

use wqed::matrix_elements::{reflection_amplitude, transmission_amplitude};
use wqed::model::SystemParams;

fn main() {
    let params = SystemParams::reduced(0.02, 1.0).unwrap();
    println!("detuning/Gamma   |t|^2      |r|^2      |t|^2+|r|^2-1");
    let mut worst = 0.0f64;
    for i in -10..=10 {
        let detuning = i as f64;
        let omega0 = params.omega_q + detuning * params.gamma;
        let t2 = transmission_amplitude(omega0, &params).norm_sqr();
        let r2 = reflection_amplitude(omega0, &params).norm_sqr();
        worst = worst.max((t2 + r2 - 1.0).abs());
        println!("{detuning:10.1}    {t2:.6}   {r2:.6}   {:+.2e}", t2 + r2 - 1.0);
    }
    println!("\nresonant photons are fully reflected; one linewidth out the power splits evenly");
    println!("max unitarity violation over the scan: {worst:.2e}");
}
