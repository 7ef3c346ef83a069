//! Application of the positive-frequency field operator on the discretized
//! mode basis: `E+(x) = i sum_k g_k (a_k e^{i omega_k x / v_g} +
//! b_k e^{-i omega_k x / v_g})`, lowering the excitation number by one.
//!
//! Spatial phases use the full mode frequencies; rotating-frame dressing is
//! a uniform phase within each excitation sector, so extracted moduli are
//! frame-independent.

use num_complex::Complex64 as C64;

use super::grid::ModeGrid;
use super::state::{OneExcState, TwoExcState};

fn phases(grid: &ModeGrid, x: f64) -> (Vec<C64>, Vec<C64>) {
    let k_scale = x / grid.v_g();
    let mut fwd = Vec::with_capacity(grid.n_modes());
    let mut bwd = Vec::with_capacity(grid.n_modes());
    for &w in grid.omegas() {
        fwd.push(C64::from_polar(1.0, w * k_scale));
        bwd.push(C64::from_polar(1.0, -w * k_scale));
    }
    (fwd, bwd)
}

/// `E+(x)` on a one-excitation state: the vacuum amplitude. The atomic
/// component is annihilated (no photon to absorb) and does not contribute.
pub fn apply_eplus_one(state: &OneExcState, x: f64, grid: &ModeGrid) -> C64 {
    assert!(x != 0.0, "field evaluation at the qubit position is excluded");
    let g = grid.couplings();
    let k_scale = x / grid.v_g();
    let mut acc = C64::new(0.0, 0.0);
    for (k, &w) in grid.omegas().iter().enumerate() {
        let fwd = C64::from_polar(1.0, w * k_scale);
        acc += g[k] * (fwd * state.c_a[k] + fwd.conj() * state.c_b[k]);
    }
    C64::i() * acc
}

/// `E+(x)` on a two-excitation state: the residual one-excitation state.
pub fn apply_eplus_two(state: &TwoExcState, x: f64, grid: &ModeGrid) -> OneExcState {
    assert!(x != 0.0, "field evaluation at the qubit position is excluded");
    let n = grid.n_modes();
    let g = grid.couplings();
    let sqrt2 = std::f64::consts::SQRT_2;
    let (fwd, bwd) = phases(grid, x);
    let mut out = OneExcState::zeros(n);

    // Atom-plus-photon blocks: absorbing the photon leaves |e, 0>.
    let mut c_e = C64::new(0.0, 0.0);
    for k in 0..n {
        c_e += g[k] * (fwd[k] * state.c_ea[k] + bwd[k] * state.c_eb[k]);
    }

    // Same-direction pairs: absorbing either partner leaves one photon.
    let mut idx = 0;
    for k in 0..n {
        let c = state.c_aa[idx];
        out.c_a[k] += sqrt2 * g[k] * fwd[k] * c;
        idx += 1;
        for q in k + 1..n {
            let c = state.c_aa[idx];
            out.c_a[q] += g[k] * fwd[k] * c;
            out.c_a[k] += g[q] * fwd[q] * c;
            idx += 1;
        }
    }
    let mut idx = 0;
    for k in 0..n {
        let c = state.c_bb[idx];
        out.c_b[k] += sqrt2 * g[k] * bwd[k] * c;
        idx += 1;
        for q in k + 1..n {
            let c = state.c_bb[idx];
            out.c_b[q] += g[k] * bwd[k] * c;
            out.c_b[k] += g[q] * bwd[q] * c;
            idx += 1;
        }
    }

    // Mixed pairs: absorbing the a-photon leaves the b-photon and vice versa.
    for k in 0..n {
        let row = &state.c_ab[k * n..(k + 1) * n];
        let gk_fwd = g[k] * fwd[k];
        let mut acc_a = C64::new(0.0, 0.0);
        for j in 0..n {
            let c = row[j];
            out.c_b[j] += gk_fwd * c;
            acc_a += g[j] * bwd[j] * c;
        }
        out.c_a[k] += acc_a;
    }

    out.c_e = C64::i() * c_e;
    for k in 0..n {
        out.c_a[k] *= C64::i();
        out.c_b[k] *= C64::i();
    }
    out
}

/// Place one unit of two-photon amplitude on the normalized pair basis
/// state `(k, q)` (same direction). Test helper.
#[cfg(test)]
pub(crate) fn aa_basis_state(n: usize, k: usize, q: usize) -> TwoExcState {
    let mut s = TwoExcState::zeros(n);
    let (k, q) = if k <= q { (k, q) } else { (q, k) };
    s.c_aa[super::state::tri_index(n, k, q)] = C64::new(1.0, 0.0);
    s
}
