//! Time evolution along the sweep.
//!
//! Integrates `i dψ/dt = H(s(t)) ψ` (ħ = 1) with classical fixed-step
//! fourth-order Runge-Kutta, evaluating `H` at the sub-stage times. The
//! integrator never renormalizes: norm drift is reported as a diagnostic so
//! integration errors stay visible.

use num_complex::Complex;

use crate::cnf::{brute_force_solutions, Assignment, CnfInstance};
use crate::energy::energy_table_serial;
use crate::error::{Error, Result};
use crate::hamiltonian::{
    build_final, interpolate, Schedule, DENSE_SPECTRUM_CAP,
};
use crate::scalar::{from_f64, from_usize, Real};

/// Largest `n` accepted for time evolution (state memory plus the exhaustive
/// solution oracle used for success probabilities).
pub const EVOLVE_CAP: u32 = 24;

/// `2^n` complex amplitudes over `n` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T: Real> {
    amplitudes: Vec<Complex<T>>,
    num_variables: u32,
}

impl<T: Real> StateVector<T> {
    /// Wraps raw amplitudes; the length must be `2^n`. No normalization is
    /// applied.
    pub fn from_amplitudes(amplitudes: Vec<Complex<T>>, num_variables: u32) -> Result<Self> {
        if amplitudes.len() != 1usize << num_variables {
            return Err(Error::InvalidArgument(format!(
                "state over {num_variables} variables needs {} amplitudes, got {}",
                1usize << num_variables,
                amplitudes.len()
            )));
        }
        Ok(Self {
            amplitudes,
            num_variables,
        })
    }

    pub fn num_variables(&self) -> u32 {
        self.num_variables
    }

    pub fn dimension(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    /// Euclidean norm, accumulated in ascending index order.
    pub fn norm(&self) -> T {
        self.amplitudes
            .iter()
            .fold(T::zero(), |acc, c| acc + c.norm_sqr())
            .sqrt()
    }

    /// `|amplitude[index]|^2`.
    pub fn probability(&self, index: usize) -> T {
        self.amplitudes[index].norm_sqr()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        assert_eq!(self.dimension(), other.dimension());
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| {
                acc + a.conj() * b
            })
    }
}

/// The uniform superposition `2^{-n/2} Σ |i>`: the ground state of the
/// initial Hamiltonian, giving every assignment equal probability.
pub fn initial_state<T: Real>(num_variables: u32) -> StateVector<T> {
    assert!(
        (1..=EVOLVE_CAP).contains(&num_variables),
        "state size capped at {EVOLVE_CAP} qubits"
    );
    let dim = 1usize << num_variables;
    let amp = T::one() / from_usize::<T>(dim).sqrt();
    StateVector {
        amplitudes: vec![Complex::new(amp, T::zero()); dim],
        num_variables,
    }
}

/// Probability mass of `state` on the given satisfying assignments.
pub fn success_probability<T: Real>(state: &StateVector<T>, solutions: &[Assignment]) -> T {
    solutions.iter().fold(T::zero(), |acc, a| {
        debug_assert_eq!(a.num_variables(), state.num_variables());
        acc + state.probability(a.index())
    })
}

/// Integration parameters for one sweep.
#[derive(Debug, Clone)]
pub struct EvolutionConfig<T: Real> {
    /// Total sweep time τ (dimensionless, ħ = 1).
    pub total_time: T,
    /// Step count; `None` picks [`default_num_steps`], which keeps
    /// `dt * ||H||` around 0.01.
    pub num_steps: Option<usize>,
    /// Record the instantaneous spectral gap at sampled steps (dense
    /// diagonalization, so capped at [`DENSE_SPECTRUM_CAP`] qubits).
    pub track_gap: bool,
    /// Record `|<ψ_g(t)|ψ(t)>|^2` against the instantaneous ground manifold
    /// at sampled steps (same cap as `track_gap`).
    pub track_ground_overlap: bool,
    /// Record a trace sample every this many steps; 0 means pick a stride
    /// that yields on the order of a thousand samples.
    pub sample_stride: usize,
    /// Worker threads for the matrix-free matvec. Results are bit-identical
    /// for any value; more than one only pays off for large states.
    pub workers: usize,
}

impl<T: Real> EvolutionConfig<T> {
    pub fn new(total_time: T) -> Self {
        Self {
            total_time,
            num_steps: None,
            track_gap: false,
            track_ground_overlap: false,
            sample_stride: 10,
            workers: 1,
        }
    }
}

/// Default step count: `max(1000, ceil(100 τ (n + m)))`, using `n + m` as a
/// coarse bound on the spectral radius of `H(s)`.
pub fn default_num_steps<T: Real>(total_time: T, instance: &CnfInstance) -> usize {
    let tau = total_time.to_f64().expect("finite sweep time");
    let max_energy = (instance.num_variables() as usize + instance.num_clauses()) as f64;
    let fine = (100.0 * tau * max_energy).ceil() as usize;
    fine.max(1000)
}

/// One recorded point of an evolution run.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceSample<T> {
    pub step: usize,
    pub t: T,
    pub s: T,
    pub norm: T,
    pub success_probability: T,
    /// Gap between the ground manifold and the first level above it, when
    /// tracked.
    pub gap: Option<T>,
    /// Probability mass on the instantaneous ground manifold, when tracked.
    pub ground_overlap: Option<T>,
}

/// Outcome of a full sweep.
#[derive(Debug, Clone)]
pub struct EvolutionResult<T: Real> {
    pub final_state: StateVector<T>,
    /// Probability mass of the final state on the satisfying assignments.
    pub success_probability: T,
    /// `| ||ψ(τ)|| - 1 |`; nothing is renormalized along the way.
    pub norm_drift: T,
    /// Samples every `sample_stride` steps plus the final state.
    pub trace: Vec<TraceSample<T>>,
}

impl<T: Real + std::fmt::Display> EvolutionResult<T> {
    /// CSV rendering: `t,s,norm,success_probability[,gap][,overlap]`.
    pub fn to_csv(&self) -> String {
        let has_gap = self.trace.first().is_some_and(|s| s.gap.is_some());
        let has_overlap = self
            .trace
            .first()
            .is_some_and(|s| s.ground_overlap.is_some());
        let mut out = String::from("t,s,norm,success_probability");
        if has_gap {
            out.push_str(",gap");
        }
        if has_overlap {
            out.push_str(",overlap");
        }
        out.push('\n');
        for sample in &self.trace {
            out.push_str(&format!(
                "{},{},{},{}",
                sample.t, sample.s, sample.norm, sample.success_probability
            ));
            if has_gap {
                out.push_str(&format!(",{}", sample.gap.expect("gap tracked")));
            }
            if has_overlap {
                out.push_str(&format!(
                    ",{}",
                    sample.ground_overlap.expect("overlap tracked")
                ));
            }
            out.push('\n');
        }
        out
    }
}

struct Rk4Scratch<T: Real> {
    stage: Vec<Complex<T>>,
    staged_state: Vec<Complex<T>>,
    accum: Vec<Complex<T>>,
}

impl<T: Real> Rk4Scratch<T> {
    fn new(dim: usize) -> Self {
        let zero = Complex::new(T::zero(), T::zero());
        Self {
            stage: vec![zero; dim],
            staged_state: vec![zero; dim],
            accum: vec![zero; dim],
        }
    }
}

/// Applies `-i H(s)` to `input`, writing into `output`.
fn derivative_into<T: Real>(
    schedule: &Schedule<T>,
    s: T,
    input: &[Complex<T>],
    output: &mut [Complex<T>],
    workers: usize,
) {
    schedule.apply_into(s, input, output, workers);
    for c in output.iter_mut() {
        *c = Complex::new(c.im, -c.re);
    }
}

/// One classical RK4 step, in place. `H` is evaluated at `t`, `t + dt/2`,
/// and `t + dt` (the sweep parameter saturates at 1 beyond τ).
fn rk4_step_in_place<T: Real>(
    schedule: &Schedule<T>,
    t: T,
    dt: T,
    state: &mut [Complex<T>],
    scratch: &mut Rk4Scratch<T>,
    workers: usize,
) {
    let half = from_f64::<T>(0.5);
    let half_dt = dt * half;
    let two = from_f64::<T>(2.0);
    let s0 = schedule.s_at(t);
    let s_mid = schedule.s_at(t + half_dt);
    let s1 = schedule.s_at(t + dt);

    // k1
    derivative_into(schedule, s0, state, &mut scratch.stage, workers);
    for i in 0..state.len() {
        scratch.accum[i] = scratch.stage[i];
        scratch.staged_state[i] = state[i] + scratch.stage[i] * half_dt;
    }
    // k2
    derivative_into(
        schedule,
        s_mid,
        &scratch.staged_state,
        &mut scratch.stage,
        workers,
    );
    for i in 0..state.len() {
        scratch.accum[i] += scratch.stage[i] * two;
        scratch.staged_state[i] = state[i] + scratch.stage[i] * half_dt;
    }
    // k3
    derivative_into(
        schedule,
        s_mid,
        &scratch.staged_state,
        &mut scratch.stage,
        workers,
    );
    for i in 0..state.len() {
        scratch.accum[i] += scratch.stage[i] * two;
        scratch.staged_state[i] = state[i] + scratch.stage[i] * dt;
    }
    // k4
    derivative_into(
        schedule,
        s1,
        &scratch.staged_state,
        &mut scratch.stage,
        workers,
    );
    let sixth = dt / from_f64::<T>(6.0);
    for i in 0..state.len() {
        scratch.accum[i] += scratch.stage[i];
        state[i] += scratch.accum[i] * sixth;
    }
}

/// One RK4 step as a pure function. No renormalization is applied.
pub fn step<T: Real>(
    state: &StateVector<T>,
    schedule: &Schedule<T>,
    t: T,
    dt: T,
) -> StateVector<T> {
    assert_eq!(state.dimension(), schedule.dimension());
    assert!(t >= T::zero() && dt >= T::zero());
    let mut amplitudes = state.amplitudes.clone();
    let mut scratch = Rk4Scratch::new(amplitudes.len());
    rk4_step_in_place(schedule, t, dt, &mut amplitudes, &mut scratch, 1);
    StateVector {
        amplitudes,
        num_variables: state.num_variables,
    }
}

/// Runs the full sweep for `instance` under `config`.
///
/// Success probabilities are measured against the exhaustive solution set,
/// which also bounds `n` by [`EVOLVE_CAP`].
pub fn run<T: Real>(instance: &CnfInstance, config: &EvolutionConfig<T>) -> Result<EvolutionResult<T>> {
    let n = instance.num_variables();
    if n > EVOLVE_CAP {
        return Err(Error::CapExceeded {
            what: "time evolution",
            requested: n,
            cap: EVOLVE_CAP,
        });
    }
    let tracking = config.track_gap || config.track_ground_overlap;
    if tracking && n > DENSE_SPECTRUM_CAP {
        return Err(Error::CapExceeded {
            what: "gap/overlap tracking (dense diagonalization)",
            requested: n,
            cap: DENSE_SPECTRUM_CAP,
        });
    }
    if !(config.total_time > T::zero()) {
        return Err(Error::InvalidArgument(
            "total sweep time must be positive".into(),
        ));
    }

    let num_steps = match config.num_steps {
        Some(0) => {
            return Err(Error::InvalidArgument(
                "at least one integration step is required".into(),
            ))
        }
        Some(k) => k,
        None => default_num_steps(config.total_time, instance),
    };
    let stride = match config.sample_stride {
        0 => (num_steps / 1000).max(1),
        k => k,
    };
    let workers = config.workers.max(1);

    let solutions = brute_force_solutions(instance)?;
    let table = energy_table_serial(instance)?;
    let schedule = Schedule::new(
        crate::hamiltonian::DiagonalHamiltonian::from_energy_table(&table),
        config.total_time,
    )?;
    let manifold = schedule.final_hamiltonian().ground_degeneracy();
    if tracking && manifold == schedule.dimension() {
        return Err(Error::InvalidArgument(
            "final Hamiltonian is a multiple of the identity; gap/overlap tracking is undefined"
                .into(),
        ));
    }
    let _ = build_final::<T>(instance); // keep the diagonal construction path exercised

    let dt = config.total_time / from_usize::<T>(num_steps);
    let mut state = initial_state::<T>(n);
    let mut scratch = Rk4Scratch::new(state.dimension());
    let mut trace = Vec::new();

    let sample = |state: &StateVector<T>, step_index: usize, t: T| -> Result<TraceSample<T>> {
        let s = schedule.s_at(t);
        let (gap, ground_overlap) = if tracking {
            let dense = interpolate(&schedule, s)?;
            let pairs = dense.lowest_eigenpairs(manifold + 1);
            let gap = config
                .track_gap
                .then(|| pairs[manifold].0 - pairs[0].0);
            let overlap = config.track_ground_overlap.then(|| {
                pairs[..manifold].iter().fold(T::zero(), |acc, (_, vec)| {
                    let mut amp = Complex::new(T::zero(), T::zero());
                    for (phi, psi) in vec.iter().zip(state.amplitudes()) {
                        amp += phi.conj() * *psi;
                    }
                    acc + amp.norm_sqr()
                })
            });
            (gap, overlap)
        } else {
            (None, None)
        };
        Ok(TraceSample {
            step: step_index,
            t,
            s,
            norm: state.norm(),
            success_probability: success_probability(&state, &solutions),
            gap,
            ground_overlap,
        })
    };

    for j in 0..num_steps {
        let t = from_usize::<T>(j) * dt;
        if j % stride == 0 {
            trace.push(sample(&state, j, t)?);
        }
        rk4_step_in_place(&schedule, t, dt, &mut state.amplitudes, &mut scratch, workers);
    }
    trace.push(sample(&state, num_steps, config.total_time)?);

    let norm_drift = (state.norm() - T::one()).abs();
    let success = success_probability(&state, &solutions);
    Ok(EvolutionResult {
        final_state: state,
        success_probability: success,
        norm_drift,
        trace,
    })
}
