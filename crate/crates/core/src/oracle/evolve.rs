//! Fixed-step fourth-order time evolution with matrix-free Hamiltonian
//! action in the rotating frame.

use num_complex::Complex64 as C64;

use super::grid::ModeGrid;
use super::state::{OneExcState, StateOps, TwoExcState};
use super::{OracleError, MAX_TWO_EXC_MODES};

/// Integration schedule. The stepper is classical RK4 with a fixed step;
/// in the rotating frame the stability/accuracy constraint is
/// `dt * max|detuning| <= 0.1` and the default step keeps a factor-two
/// margin below it. `coupling_scale` multiplies the interaction terms only
/// (0 gives free propagation for control runs; the field operator is
/// unaffected).
#[derive(Clone, Debug)]
pub struct EvolutionPlan {
    pub dt: f64,
    pub coupling_scale: f64,
    /// Times at which the trajectory keeps a copy of the state; must be
    /// finite, non-negative and non-decreasing.
    pub snapshots: Vec<f64>,
}

impl EvolutionPlan {
    pub fn new(grid: &ModeGrid, snapshots: Vec<f64>) -> Result<Self, OracleError> {
        let dt = 0.05 / grid.max_detuning();
        Self::with_dt(grid, dt, snapshots)
    }

    pub fn with_dt(grid: &ModeGrid, dt: f64, snapshots: Vec<f64>) -> Result<Self, OracleError> {
        if !(dt > 0.0) || dt * grid.max_detuning() > 0.1 + 1e-12 {
            return Err(OracleError::StepTooLarge { dt, max_detuning: grid.max_detuning() });
        }
        if !snapshots.iter().all(|t| t.is_finite() && *t >= 0.0)
            || snapshots.windows(2).any(|w| w[1] < w[0])
        {
            return Err(OracleError::BadSnapshots);
        }
        Ok(Self { dt, coupling_scale: 1.0, snapshots })
    }

    pub fn without_coupling(mut self) -> Self {
        self.coupling_scale = 0.0;
        self
    }
}

/// State snapshots along one evolution. An empty snapshot list yields just
/// the initial state at `t = 0`.
#[derive(Clone, Debug)]
pub struct Trajectory<S> {
    pub times: Vec<f64>,
    pub states: Vec<S>,
}

impl<S> Trajectory<S> {
    pub fn last(&self) -> &S {
        self.states.last().expect("trajectory holds at least one snapshot")
    }
}

/// `out = -i H state` in the one-excitation sector.
fn deriv_one(grid: &ModeGrid, scale: f64, s: &OneExcState, out: &mut OneExcState) {
    let g = grid.couplings();
    let det = grid.detunings();
    let minus_i = C64::new(0.0, -1.0);

    let mut pump = C64::new(0.0, 0.0);
    for k in 0..grid.n_modes() {
        pump += g[k] * (s.c_a[k] + s.c_b[k]);
        out.c_a[k] = minus_i * (det[k] * s.c_a[k] + scale * g[k] * s.c_e);
        out.c_b[k] = minus_i * (det[k] * s.c_b[k] + scale * g[k] * s.c_e);
    }
    out.c_e = minus_i * scale * pump;
}

/// `out = -i H state` in the two-excitation sector, applied as an
/// on-the-fly mode sum (no stored matrix).
fn deriv_two(grid: &ModeGrid, scale: f64, s: &TwoExcState, out: &mut TwoExcState) {
    let n = grid.n_modes();
    let g = grid.couplings();
    let det = grid.detunings();
    let minus_i = C64::new(0.0, -1.0);
    let sqrt2 = std::f64::consts::SQRT_2;

    // Accumulators for the photon-absorption terms feeding the e-blocks.
    let mut acc_ea = vec![C64::new(0.0, 0.0); n];
    let mut acc_eb = vec![C64::new(0.0, 0.0); n];

    // Same-direction pairs: one pass over the packed triangle computes the
    // pair derivatives and scatters absorption terms into the accumulators.
    let mut idx = 0;
    for k in 0..n {
        // Diagonal entry (k, k).
        let c = s.c_aa[idx];
        out.c_aa[idx] = minus_i * (2.0 * det[k] * c + scale * sqrt2 * g[k] * s.c_ea[k]);
        acc_ea[k] += sqrt2 * g[k] * c;
        idx += 1;
        for q in k + 1..n {
            let c = s.c_aa[idx];
            out.c_aa[idx] =
                minus_i * ((det[k] + det[q]) * c + scale * (g[k] * s.c_ea[q] + g[q] * s.c_ea[k]));
            acc_ea[q] += g[k] * c;
            acc_ea[k] += g[q] * c;
            idx += 1;
        }
    }
    let mut idx = 0;
    for k in 0..n {
        let c = s.c_bb[idx];
        out.c_bb[idx] = minus_i * (2.0 * det[k] * c + scale * sqrt2 * g[k] * s.c_eb[k]);
        acc_eb[k] += sqrt2 * g[k] * c;
        idx += 1;
        for q in k + 1..n {
            let c = s.c_bb[idx];
            out.c_bb[idx] =
                minus_i * ((det[k] + det[q]) * c + scale * (g[k] * s.c_eb[q] + g[q] * s.c_eb[k]));
            acc_eb[q] += g[k] * c;
            acc_eb[k] += g[q] * c;
            idx += 1;
        }
    }

    // Mixed pairs, row-major [a_mode * n + b_mode].
    for k in 0..n {
        let row = &s.c_ab[k * n..(k + 1) * n];
        let out_row = &mut out.c_ab[k * n..(k + 1) * n];
        let mut acc_k = C64::new(0.0, 0.0);
        for j in 0..n {
            let c = row[j];
            out_row[j] =
                minus_i * ((det[k] + det[j]) * c + scale * (g[k] * s.c_eb[j] + g[j] * s.c_ea[k]));
            acc_k += g[j] * c;
            acc_eb[j] += g[k] * c;
        }
        acc_ea[k] += acc_k;
    }

    for k in 0..n {
        out.c_ea[k] = minus_i * (det[k] * s.c_ea[k] + scale * acc_ea[k]);
        out.c_eb[k] = minus_i * (det[k] * s.c_eb[k] + scale * acc_eb[k]);
    }
}

/// One classical RK4 step of `dy/dt = deriv(y)` using five work buffers.
fn rk4_step<S: StateOps>(
    deriv: &impl Fn(&S, &mut S),
    y: &mut S,
    dt: f64,
    work: &mut [S; 5],
) {
    let [k1, k2, k3, k4, tmp] = work;
    deriv(y, k1);
    tmp.copy_from(y);
    tmp.axpy(C64::new(0.5 * dt, 0.0), k1);
    deriv(tmp, k2);
    tmp.copy_from(y);
    tmp.axpy(C64::new(0.5 * dt, 0.0), k2);
    deriv(tmp, k3);
    tmp.copy_from(y);
    tmp.axpy(C64::new(dt, 0.0), k3);
    deriv(tmp, k4);
    let w = dt / 6.0;
    y.axpy(C64::new(w, 0.0), k1);
    y.axpy(C64::new(2.0 * w, 0.0), k2);
    y.axpy(C64::new(2.0 * w, 0.0), k3);
    y.axpy(C64::new(w, 0.0), k4);
}

/// Advance `state` from `t_from` to `t_to` in fixed steps no larger than
/// `plan.dt` (the step is shrunk uniformly to land exactly on `t_to`).
pub(crate) fn advance<S: StateOps>(
    deriv: &impl Fn(&S, &mut S),
    state: &mut S,
    t_from: f64,
    t_to: f64,
    dt: f64,
    work: &mut [S; 5],
) {
    debug_assert!(t_to >= t_from);
    let span = t_to - t_from;
    if span <= 0.0 {
        return;
    }
    let n_steps = (span / dt).ceil().max(1.0) as usize;
    let h = span / n_steps as f64;
    for _ in 0..n_steps {
        rk4_step(deriv, state, h, work);
    }
}

fn evolve<S: StateOps>(
    initial: &S,
    plan: &EvolutionPlan,
    deriv: impl Fn(&S, &mut S),
) -> Trajectory<S> {
    let mut work = [
        initial.zero_like(),
        initial.zero_like(),
        initial.zero_like(),
        initial.zero_like(),
        initial.zero_like(),
    ];
    let mut state = initial.clone();
    let mut t = 0.0;
    let mut times = Vec::with_capacity(plan.snapshots.len());
    let mut states = Vec::with_capacity(plan.snapshots.len());
    for &t_snap in &plan.snapshots {
        advance(&deriv, &mut state, t, t_snap, plan.dt, &mut work);
        t = t_snap;
        times.push(t);
        states.push(state.clone());
    }
    if times.is_empty() {
        times.push(0.0);
        states.push(state);
    }
    Trajectory { times, states }
}

/// Evolve a one-excitation state, keeping snapshots at the plan's times.
pub fn evolve_one_exc(
    initial: &OneExcState,
    grid: &ModeGrid,
    plan: &EvolutionPlan,
) -> Result<Trajectory<OneExcState>, OracleError> {
    let scale = plan.coupling_scale;
    Ok(evolve(initial, plan, |s, out| deriv_one(grid, scale, s, out)))
}

/// Evolve a two-excitation state, keeping snapshots at the plan's times.
pub fn evolve_two_exc(
    initial: &TwoExcState,
    grid: &ModeGrid,
    plan: &EvolutionPlan,
) -> Result<Trajectory<TwoExcState>, OracleError> {
    if grid.n_modes() > MAX_TWO_EXC_MODES {
        return Err(OracleError::DimensionOverflow {
            n: grid.n_modes(),
            max: MAX_TWO_EXC_MODES,
        });
    }
    let scale = plan.coupling_scale;
    Ok(evolve(initial, plan, |s, out| deriv_two(grid, scale, s, out)))
}

pub(crate) fn deriv_one_fn<'a>(
    grid: &'a ModeGrid,
    scale: f64,
) -> impl Fn(&OneExcState, &mut OneExcState) + 'a {
    move |s, out| deriv_one(grid, scale, s, out)
}

pub(crate) fn deriv_two_fn<'a>(
    grid: &'a ModeGrid,
    scale: f64,
) -> impl Fn(&TwoExcState, &mut TwoExcState) + 'a {
    move |s, out| deriv_two(grid, scale, s, out)
}

/// Hermiticity cross-check used by tests: `<u|H|v> = conj(<v|H|u>)`.
#[cfg(test)]
fn inner_one(u: &OneExcState, v: &OneExcState) -> C64 {
    let mut acc = u.c_e.conj() * v.c_e;
    for k in 0..u.c_a.len() {
        acc += u.c_a[k].conj() * v.c_a[k] + u.c_b[k].conj() * v.c_b[k];
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{PulseSpectrum, SystemParams};
    use crate::oracle::build_grid;
    use approx::assert_relative_eq;

    fn params() -> SystemParams {
        SystemParams::reduced(0.02, 1.0).unwrap()
    }

    #[test]
    fn one_exc_hamiltonian_is_hermitian() {
        let p = params();
        let grid = build_grid(&p, 120, 20.0 * p.gamma).unwrap();
        let n = grid.n_modes();
        let mut u = OneExcState::zeros(n);
        let mut v = OneExcState::zeros(n);
        u.c_e = C64::new(0.3, -0.1);
        u.c_a[7] = C64::new(0.5, 0.2);
        u.c_b[33] = C64::new(-0.4, 0.9);
        v.c_e = C64::new(-0.2, 0.6);
        v.c_a[12] = C64::new(0.1, 0.1);
        v.c_b[33] = C64::new(0.7, -0.3);
        let mut hu = u.zero_like();
        let mut hv = v.zero_like();
        // deriv = -iH, so <u|(-iH)|v> = -conj(<v|(-iH)|u>).
        super::deriv_one(&grid, 1.0, &u, &mut hu);
        super::deriv_one(&grid, 1.0, &v, &mut hv);
        let lhs = inner_one(&u, &hv);
        let rhs = -inner_one(&v, &hu).conj();
        assert_relative_eq!(lhs.re, rhs.re, epsilon = 1e-12);
        assert_relative_eq!(lhs.im, rhs.im, epsilon = 1e-12);
    }

    #[test]
    fn zero_coupling_keeps_the_atom_excited() {
        let p = params();
        let grid = build_grid(&p, 150, 20.0 * p.gamma).unwrap();
        let plan = EvolutionPlan::new(&grid, vec![1.0, 3.0]).unwrap().without_coupling();
        let traj = evolve_one_exc(&OneExcState::atom_excited(&grid), &grid, &plan).unwrap();
        for s in &traj.states {
            assert_relative_eq!(s.atom_population(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn excited_atom_decays_exponentially() {
        let p = params();
        let grid = build_grid(&p, 800, 40.0 * p.gamma).unwrap();
        let plan = EvolutionPlan::new(&grid, vec![1.0 / p.gamma]).unwrap();
        let traj = evolve_one_exc(&OneExcState::atom_excited(&grid), &grid, &plan).unwrap();
        let pe = traj.last().atom_population();
        assert_relative_eq!(pe, (-2.0f64).exp(), max_relative = 1e-2);
        // Unit norm preserved to integrator accuracy.
        assert_relative_eq!(traj.last().norm_sqr(), 1.0, epsilon = 1e-8);
    }

    #[test]
    fn far_detuned_pulse_passes_through() {
        let p = params();
        let grid = build_grid(&p, 1200, 30.0 * p.gamma).unwrap();
        let pulse = PulseSpectrum::gaussian(p.omega_q + 20.0 * p.gamma, p.gamma).unwrap();
        let init = OneExcState::photon_from_pulse(&pulse, &grid);
        let plan = EvolutionPlan::new(&grid, vec![8.0 / p.gamma]).unwrap();
        let traj = evolve_one_exc(&init, &grid, &plan).unwrap();
        let fwd: f64 = traj.last().c_a.iter().map(|c| c.norm_sqr()).sum();
        assert!(fwd >= 0.99, "transmitted probability {fwd}");
    }

    #[test]
    fn two_exc_norm_is_conserved_and_atom_decays() {
        let p = params();
        let grid = build_grid(&p, 110, 22.0 * p.gamma).unwrap();
        // Far-detuned packet: it cannot re-excite the atom, so the atomic
        // population follows plain spontaneous decay.
        let pulse = PulseSpectrum::gaussian(p.omega_q + 10.0 * p.gamma, p.gamma / 20.0).unwrap();
        let init = TwoExcState::excited_with_pulse(&pulse, &grid);
        assert_relative_eq!(init.norm_sqr(), 1.0, epsilon = 1e-12);
        let plan = EvolutionPlan::new(&grid, vec![5.0 / p.gamma]).unwrap();
        let traj = evolve_two_exc(&init, &grid, &plan).unwrap();
        let last = traj.last();
        assert_relative_eq!(last.norm_sqr(), 1.0, epsilon = 1e-5);
        assert!(last.atom_population() < 0.01);
    }

    #[test]
    fn two_exc_dimension_cap() {
        let p = params();
        let grid = build_grid(&p, 500, 25.0 * p.gamma).unwrap();
        let init = TwoExcState::zeros(grid.n_modes());
        let plan = EvolutionPlan::new(&grid, vec![0.1]).unwrap();
        assert!(matches!(
            evolve_two_exc(&init, &grid, &plan),
            Err(OracleError::DimensionOverflow { .. })
        ));
    }

    #[test]
    fn step_bound_is_enforced() {
        let p = params();
        let grid = build_grid(&p, 200, 20.0 * p.gamma).unwrap();
        assert!(EvolutionPlan::with_dt(&grid, 1.0, vec![]).is_err());
        assert!(EvolutionPlan::with_dt(&grid, 0.004 / p.gamma, vec![0.0, 1.0]).is_ok());
    }
}
