//! Amplitude vectors for the one- and two-excitation sectors.

use num_complex::Complex64 as C64;

use super::grid::ModeGrid;
use crate::model::PulseSpectrum;

/// One excitation: atom excited with vacuum, or one photon in either
/// direction. Dimension `1 + 2N`.
#[derive(Clone, Debug)]
pub struct OneExcState {
    pub c_e: C64,
    pub c_a: Vec<C64>,
    pub c_b: Vec<C64>,
}

impl OneExcState {
    pub fn zeros(n: usize) -> Self {
        Self { c_e: C64::new(0.0, 0.0), c_a: vec![C64::new(0.0, 0.0); n], c_b: vec![C64::new(0.0, 0.0); n] }
    }

    /// `|e, 0>`: atom excited, no photons.
    pub fn atom_excited(grid: &ModeGrid) -> Self {
        let mut s = Self::zeros(grid.n_modes());
        s.c_e = C64::new(1.0, 0.0);
        s
    }

    /// `|G, 1>`: ground-state atom with one right-moving photon of spectrum
    /// `f`, sampled on the grid and renormalized to unit norm.
    pub fn photon_from_pulse(pulse: &PulseSpectrum, grid: &ModeGrid) -> Self {
        let mut s = Self::zeros(grid.n_modes());
        let root_dw = grid.d_omega().sqrt();
        for (k, &w) in grid.omegas().iter().enumerate() {
            s.c_a[k] = pulse.amplitude(w) * root_dw;
        }
        let norm = s.norm_sqr().sqrt();
        assert!(norm > 0.0, "pulse has no weight inside the grid window");
        let inv = 1.0 / norm;
        for c in &mut s.c_a {
            *c *= inv;
        }
        s
    }

    pub fn norm_sqr(&self) -> f64 {
        self.c_e.norm_sqr()
            + self.c_a.iter().map(|c| c.norm_sqr()).sum::<f64>()
            + self.c_b.iter().map(|c| c.norm_sqr()).sum::<f64>()
    }

    /// Population of the excited atomic state.
    pub fn atom_population(&self) -> f64 {
        self.c_e.norm_sqr()
    }
}

/// Two excitations: atom excited plus one photon, or two photons.
///
/// Same-direction photon pairs are stored once for `k <= q` as coefficients
/// of the normalized basis states (`a_k^dag a_q^dag |0>` for `k < q`,
/// `(a_k^dag)^2 |0> / sqrt(2)` on the diagonal), so the norm is the plain
/// sum of squared moduli and diagonal couplings carry the bosonic `sqrt(2)`.
/// Mixed-direction amplitudes are a full `N x N` block indexed
/// `[a_mode * N + b_mode]`. Total dimension `2N + N(N+1) + N^2`.
#[derive(Clone, Debug)]
pub struct TwoExcState {
    n: usize,
    pub c_ea: Vec<C64>,
    pub c_eb: Vec<C64>,
    pub c_aa: Vec<C64>,
    pub c_bb: Vec<C64>,
    pub c_ab: Vec<C64>,
}

/// Packed index of the ordered pair `(k, q)` with `k <= q`.
#[inline]
pub(crate) fn tri_index(n: usize, k: usize, q: usize) -> usize {
    debug_assert!(k <= q && q < n);
    k * n - k * (k + 1) / 2 + q
}

impl TwoExcState {
    pub fn zeros(n: usize) -> Self {
        let z = C64::new(0.0, 0.0);
        Self {
            n,
            c_ea: vec![z; n],
            c_eb: vec![z; n],
            c_aa: vec![z; n * (n + 1) / 2],
            c_bb: vec![z; n * (n + 1) / 2],
            c_ab: vec![z; n * n],
        }
    }

    pub fn n_modes(&self) -> usize {
        self.n
    }

    /// Index of the ordered same-direction pair `(k, q)`, `k <= q`, in the
    /// packed `c_aa` / `c_bb` blocks.
    pub fn pair_index(&self, k: usize, q: usize) -> usize {
        tri_index(self.n, k, q)
    }

    /// `|E, 1>`: atom excited plus one right-moving photon of spectrum `f`,
    /// renormalized on the grid.
    pub fn excited_with_pulse(pulse: &PulseSpectrum, grid: &ModeGrid) -> Self {
        let mut s = Self::zeros(grid.n_modes());
        let root_dw = grid.d_omega().sqrt();
        for (k, &w) in grid.omegas().iter().enumerate() {
            s.c_ea[k] = pulse.amplitude(w) * root_dw;
        }
        let norm = s.norm_sqr().sqrt();
        assert!(norm > 0.0, "pulse has no weight inside the grid window");
        let inv = 1.0 / norm;
        for c in &mut s.c_ea {
            *c *= inv;
        }
        s
    }

    /// Atom excited plus one photon in the symmetric coupling-weighted
    /// (bright) mode split across both directions.
    pub fn excited_with_bright_photon(grid: &ModeGrid) -> Self {
        let mut s = Self::zeros(grid.n_modes());
        let norm: f64 = 2.0 * grid.couplings().iter().map(|g| g * g).sum::<f64>();
        let inv = 1.0 / norm.sqrt();
        for (k, &g) in grid.couplings().iter().enumerate() {
            s.c_ea[k] = C64::new(g * inv, 0.0);
            s.c_eb[k] = C64::new(g * inv, 0.0);
        }
        s
    }

    pub fn norm_sqr(&self) -> f64 {
        self.c_ea.iter().map(|c| c.norm_sqr()).sum::<f64>()
            + self.c_eb.iter().map(|c| c.norm_sqr()).sum::<f64>()
            + self.c_aa.iter().map(|c| c.norm_sqr()).sum::<f64>()
            + self.c_bb.iter().map(|c| c.norm_sqr()).sum::<f64>()
            + self.c_ab.iter().map(|c| c.norm_sqr()).sum::<f64>()
    }

    /// Population of the excited atomic state (summed over the photon).
    pub fn atom_population(&self) -> f64 {
        self.c_ea.iter().map(|c| c.norm_sqr()).sum::<f64>()
            + self.c_eb.iter().map(|c| c.norm_sqr()).sum::<f64>()
    }
}

/// Elementwise linear algebra needed by the fixed-step integrator.
pub(crate) trait StateOps: Clone {
    fn zero_like(&self) -> Self;
    fn copy_from(&mut self, other: &Self);
    /// `self += coeff * other`.
    fn axpy(&mut self, coeff: C64, other: &Self);
}

fn axpy_slice(dst: &mut [C64], coeff: C64, src: &[C64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d += coeff * s;
    }
}

impl StateOps for OneExcState {
    fn zero_like(&self) -> Self {
        Self::zeros(self.c_a.len())
    }

    fn copy_from(&mut self, other: &Self) {
        self.c_e = other.c_e;
        self.c_a.copy_from_slice(&other.c_a);
        self.c_b.copy_from_slice(&other.c_b);
    }

    fn axpy(&mut self, coeff: C64, other: &Self) {
        self.c_e += coeff * other.c_e;
        axpy_slice(&mut self.c_a, coeff, &other.c_a);
        axpy_slice(&mut self.c_b, coeff, &other.c_b);
    }
}

impl StateOps for TwoExcState {
    fn zero_like(&self) -> Self {
        Self::zeros(self.n)
    }

    fn copy_from(&mut self, other: &Self) {
        self.c_ea.copy_from_slice(&other.c_ea);
        self.c_eb.copy_from_slice(&other.c_eb);
        self.c_aa.copy_from_slice(&other.c_aa);
        self.c_bb.copy_from_slice(&other.c_bb);
        self.c_ab.copy_from_slice(&other.c_ab);
    }

    fn axpy(&mut self, coeff: C64, other: &Self) {
        axpy_slice(&mut self.c_ea, coeff, &other.c_ea);
        axpy_slice(&mut self.c_eb, coeff, &other.c_eb);
        axpy_slice(&mut self.c_aa, coeff, &other.c_aa);
        axpy_slice(&mut self.c_bb, coeff, &other.c_bb);
        axpy_slice(&mut self.c_ab, coeff, &other.c_ab);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tri_index_walks_the_packed_triangle() {
        let n = 5;
        let mut seen = vec![false; n * (n + 1) / 2];
        for k in 0..n {
            for q in k..n {
                let idx = tri_index(n, k, q);
                assert!(!seen[idx]);
                seen[idx] = true;
            }
        }
        assert!(seen.iter().all(|&s| s));
        assert_eq!(tri_index(n, 0, 0), 0);
        assert_eq!(tri_index(n, 0, 4), 4);
        assert_eq!(tri_index(n, 1, 1), 5);
    }
}
