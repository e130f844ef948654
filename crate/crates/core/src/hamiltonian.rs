//! Hamiltonians of the adiabatic sweep.
//!
//! The sweep interpolates linearly between two operators on `n` qubits:
//!
//! * the initial Hamiltonian `H_i = Σ_k (1 - σ_x^(k)) / 2`, whose ground
//!   state is the uniform superposition with energy exactly 0 and whose
//!   spectrum is `{0, 1, ..., n}` with binomial degeneracies;
//! * the final Hamiltonian `H_f`, diagonal in the computational basis with
//!   entry `i` equal to the number of clauses assignment `i` violates, so its
//!   ground space is spanned by the satisfying assignments.
//!
//! `H(s) = (1 - s) H_i + s H_f` for `s = t/τ` in `[0, 1]`. Spin convention:
//! basis state index `i` carries variable `q_k` in bit `k - 1`, and `σ_x^(k)`
//! flips that bit.
//!
//! Dense matrices are only used for diagonalization (spectra, gaps,
//! instantaneous ground states) and are capped at [`DENSE_SPECTRUM_CAP`]
//! qubits; time evolution applies `H(s)` matrix-free through
//! [`Schedule::apply_into`].

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::cnf::CnfInstance;
use crate::energy::{energy_table_serial, plan_chunks, EnergyTable};
use crate::error::{Error, Result};
use crate::scalar::{from_f64, from_u32, from_usize, Real};

/// Largest qubit count for which dense `2^n x 2^n` matrices are built.
pub const DENSE_SPECTRUM_CAP: u32 = 12;

fn check_dense_cap(num_variables: u32, what: &'static str) -> Result<()> {
    if num_variables > DENSE_SPECTRUM_CAP {
        return Err(Error::CapExceeded {
            what,
            requested: num_variables,
            cap: DENSE_SPECTRUM_CAP,
        });
    }
    Ok(())
}

/// Diagonal final Hamiltonian: one real energy per basis state.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalHamiltonian<T: Real> {
    diagonal: Vec<T>,
    num_variables: u32,
}

impl<T: Real> DiagonalHamiltonian<T> {
    /// Converts an energy table into the diagonal of `H_f`. The counts are
    /// small integers, so the conversion is exact.
    pub fn from_energy_table(table: &EnergyTable) -> Self {
        Self {
            diagonal: table.values().iter().map(|&v| from_u32(v)).collect(),
            num_variables: table.num_variables(),
        }
    }

    pub fn num_variables(&self) -> u32 {
        self.num_variables
    }

    pub fn dimension(&self) -> usize {
        self.diagonal.len()
    }

    pub fn diagonal(&self) -> &[T] {
        &self.diagonal
    }

    pub fn ground_energy(&self) -> T {
        self.diagonal
            .iter()
            .copied()
            .fold(self.diagonal[0], |a, b| if b < a { b } else { a })
    }

    /// Multiplicity of the minimal diagonal entry. Entries are converted
    /// integers, so the equality test is exact.
    pub fn ground_degeneracy(&self) -> usize {
        let min = self.ground_energy();
        self.diagonal.iter().filter(|&&v| v == min).count()
    }
}

/// Builds `H_f` for an instance: `diagonal[i] = energy(instance, i)`.
pub fn build_final<T: Real>(instance: &CnfInstance) -> Result<DiagonalHamiltonian<T>> {
    let table = energy_table_serial(instance)?;
    Ok(DiagonalHamiltonian::from_energy_table(&table))
}

/// Dense Hermitian matrix on `n` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseHamiltonian<T: Real> {
    matrix: DMatrix<Complex<T>>,
    num_variables: u32,
}

impl<T: Real> DenseHamiltonian<T> {
    pub fn matrix(&self) -> &DMatrix<Complex<T>> {
        &self.matrix
    }

    pub fn num_variables(&self) -> u32 {
        self.num_variables
    }

    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    /// Largest elementwise deviation from self-adjointness,
    /// `max_ij |H[i,j] - conj(H[j,i])|`.
    pub fn hermiticity_defect(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.matrix.nrows() {
            for j in 0..self.matrix.ncols() {
                let d = (self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm();
                if d > worst {
                    worst = d;
                }
            }
        }
        worst
    }

    /// All eigenvalues, ascending.
    pub fn eigenvalues_ascending(&self) -> Vec<T> {
        let eig = self.matrix.clone().symmetric_eigen();
        let mut values: Vec<T> = eig.eigenvalues.iter().copied().collect();
        values.sort_by(|a, b| a.partial_cmp(b).expect("eigenvalues are finite"));
        values
    }

    /// The `k` lowest eigenvalues with their eigenvectors, ascending.
    pub fn lowest_eigenpairs(&self, k: usize) -> Vec<(T, DVector<Complex<T>>)> {
        let eig = self.matrix.clone().symmetric_eigen();
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| {
            eig.eigenvalues[a]
                .partial_cmp(&eig.eigenvalues[b])
                .expect("eigenvalues are finite")
        });
        order
            .into_iter()
            .take(k)
            .map(|i| (eig.eigenvalues[i], eig.eigenvectors.column(i).into_owned()))
            .collect()
    }
}

/// Builds the initial Hamiltonian `H_i = Σ_k (1 - σ_x^(k)) / 2`.
pub fn build_initial<T: Real>(num_variables: u32) -> Result<DenseHamiltonian<T>> {
    check_dense_cap(num_variables, "dense initial Hamiltonian")?;
    let dim = 1usize << num_variables;
    let half = from_f64::<T>(0.5);
    let diag = Complex::new(from_u32::<T>(num_variables) * half, T::zero());
    let coupling = Complex::new(-half, T::zero());
    let mut matrix = DMatrix::from_element(dim, dim, Complex::new(T::zero(), T::zero()));
    for i in 0..dim {
        matrix[(i, i)] = diag;
        for k in 0..num_variables {
            matrix[(i, i ^ (1usize << k))] = coupling;
        }
    }
    Ok(DenseHamiltonian {
        matrix,
        num_variables,
    })
}

/// Optional extra sweep term, applied with envelope `s(1 - s)` so it vanishes
/// at both endpoints. Disabled unless attached via [`Schedule::with_drive`].
#[derive(Debug, Clone, PartialEq)]
pub struct DriveTerm<T: Real> {
    matrix: DMatrix<Complex<T>>,
}

impl<T: Real> DriveTerm<T> {
    /// Wraps a Hermitian matrix as a drive term.
    pub fn new(matrix: DMatrix<Complex<T>>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::InvalidArgument("drive term must be square".into()));
        }
        let term = Self { matrix };
        let defect = DenseHamiltonian {
            matrix: term.matrix.clone(),
            num_variables: 0,
        }
        .hermiticity_defect();
        if defect > from_f64(1e-12) {
            return Err(Error::InvalidArgument(format!(
                "drive term is not Hermitian (defect {defect:?})"
            )));
        }
        Ok(term)
    }

    pub fn matrix(&self) -> &DMatrix<Complex<T>> {
        &self.matrix
    }
}

/// The sweep: final Hamiltonian, total time `τ`, and the linear ramp
/// `s(t) = t/τ`. The initial Hamiltonian is implicit (fixed form, applied
/// matrix-free); a dense copy is available through [`build_initial`].
#[derive(Debug, Clone)]
pub struct Schedule<T: Real> {
    final_hamiltonian: DiagonalHamiltonian<T>,
    total_time: T,
    drive: Option<DriveTerm<T>>,
}

impl<T: Real> Schedule<T> {
    pub fn new(final_hamiltonian: DiagonalHamiltonian<T>, total_time: T) -> Result<Self> {
        if !(total_time > T::zero()) {
            return Err(Error::InvalidArgument(
                "total sweep time must be positive".into(),
            ));
        }
        Ok(Self {
            final_hamiltonian,
            total_time,
            drive: None,
        })
    }

    /// Attaches an extra drive term (dense, so capped like the spectrum
    /// path).
    pub fn with_drive(mut self, drive: DriveTerm<T>) -> Result<Self> {
        check_dense_cap(self.num_variables(), "drive term application")?;
        if drive.matrix.nrows() != self.dimension() {
            return Err(Error::InvalidArgument(format!(
                "drive term dimension {} does not match 2^n = {}",
                drive.matrix.nrows(),
                self.dimension()
            )));
        }
        self.drive = Some(drive);
        Ok(self)
    }

    pub fn num_variables(&self) -> u32 {
        self.final_hamiltonian.num_variables()
    }

    pub fn dimension(&self) -> usize {
        self.final_hamiltonian.dimension()
    }

    pub fn total_time(&self) -> T {
        self.total_time
    }

    pub fn final_hamiltonian(&self) -> &DiagonalHamiltonian<T> {
        &self.final_hamiltonian
    }

    pub fn drive(&self) -> Option<&DriveTerm<T>> {
        self.drive.as_ref()
    }

    /// Sweep parameter `s(t) = t/τ`, clamped to `[0, 1]`.
    pub fn s_at(&self, t: T) -> T {
        (t / self.total_time).clamp(T::zero(), T::one())
    }

    /// Applies `H(s)` to `input`, writing into `output`, without forming a
    /// matrix: the `H_i` part walks the `n` single-bit-flip neighbours of
    /// each index, the `H_f` part scales by the stored diagonal.
    ///
    /// With `workers > 1` the output range is split into contiguous chunks
    /// evaluated on scoped threads; every element is computed by the same
    /// expression either way, so results are bit-identical for any worker
    /// count.
    pub fn apply_into(
        &self,
        s: T,
        input: &[Complex<T>],
        output: &mut [Complex<T>],
        workers: usize,
    ) {
        let dim = self.dimension();
        assert_eq!(input.len(), dim);
        assert_eq!(output.len(), dim);
        let n = self.num_variables();
        let one_minus_s = T::one() - s;
        let offdiag = Complex::new(-one_minus_s * from_f64::<T>(0.5), T::zero());
        let diag_base = one_minus_s * from_u32::<T>(n) * from_f64::<T>(0.5);
        let drive_scale = Complex::new(s * one_minus_s, T::zero());
        let diagonal = self.final_hamiltonian.diagonal();
        let drive = self.drive.as_ref().map(|d| &d.matrix);

        let fill = |start: usize, out_chunk: &mut [Complex<T>]| {
            for (offset, slot) in out_chunk.iter_mut().enumerate() {
                let i = start + offset;
                let mut flips = Complex::new(T::zero(), T::zero());
                for k in 0..n {
                    flips += input[i ^ (1usize << k)];
                }
                let diag = Complex::new(diag_base + s * diagonal[i], T::zero());
                let mut value = offdiag * flips + diag * input[i];
                if let Some(d) = drive {
                    let mut row = Complex::new(T::zero(), T::zero());
                    for j in 0..dim {
                        row += d[(i, j)] * input[j];
                    }
                    value += drive_scale * row;
                }
                *slot = value;
            }
        };

        if workers <= 1 {
            fill(0, output);
            return;
        }
        let plan = plan_chunks(dim, workers);
        std::thread::scope(|scope| {
            let mut rest: &mut [Complex<T>] = output;
            for range in plan.ranges() {
                let (chunk, tail) = rest.split_at_mut(range.len());
                rest = tail;
                let start = range.start;
                let fill = &fill;
                scope.spawn(move || fill(start, chunk));
            }
        });
    }
}

/// Dense `H(s) = (1-s) H_i + s H_f (+ s(1-s) drive)` for `0 <= s <= 1`.
///
/// At `s = 0` and `s = 1` the result equals `H_i` and `H_f` exactly (the
/// vanishing coefficient contributes signed zeros only).
pub fn interpolate<T: Real>(schedule: &Schedule<T>, s: T) -> Result<DenseHamiltonian<T>> {
    if s < T::zero() || s > T::one() {
        return Err(Error::InvalidArgument(format!(
            "sweep parameter s must lie in [0, 1], got {s:?}"
        )));
    }
    check_dense_cap(schedule.num_variables(), "dense interpolated Hamiltonian")?;
    let initial = build_initial::<T>(schedule.num_variables())?;
    let one_minus_s = T::one() - s;
    let mut matrix = initial.matrix * Complex::new(one_minus_s, T::zero());
    for (i, &d) in schedule.final_hamiltonian.diagonal().iter().enumerate() {
        matrix[(i, i)] += Complex::new(s * d, T::zero());
    }
    if let Some(drive) = &schedule.drive {
        matrix += &drive.matrix * Complex::new(s * one_minus_s, T::zero());
    }
    Ok(DenseHamiltonian {
        matrix,
        num_variables: schedule.num_variables(),
    })
}

/// Low-lying spectrum of `H(s)` over a grid of sweep points.
#[derive(Debug, Clone)]
pub struct SpectrumReport<T> {
    /// Sweep points, in the order given.
    pub s_values: Vec<T>,
    /// The `k` lowest eigenvalues per sweep point, ascending.
    pub eigenvalues: Vec<Vec<T>>,
    /// Smallest gap over the grid between the ground manifold and the first
    /// level above it; the manifold is sized by `ground_degeneracy_final`.
    pub min_gap: T,
    /// Ground-state degeneracy of the final Hamiltonian.
    pub ground_degeneracy_final: usize,
}

impl<T: std::fmt::Display> SpectrumReport<T> {
    /// CSV rendering: header `s,E0,...,E{k-1}`, one row per sweep point.
    pub fn to_csv(&self) -> String {
        let k = self.eigenvalues.first().map_or(0, Vec::len);
        let mut out = String::from("s");
        for level in 0..k {
            out.push_str(&format!(",E{level}"));
        }
        out.push('\n');
        for (s, levels) in self.s_values.iter().zip(&self.eigenvalues) {
            out.push_str(&format!("{s}"));
            for e in levels {
                out.push_str(&format!(",{e}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Diagonalizes `H(s)` on every grid point, keeping the `k` lowest levels.
///
/// The gap at each point is measured manifold-aware, between eigenvalue
/// indices 0 and `m`, where `m` is the final ground degeneracy; instances
/// whose energy is constant over all assignments have no level above the
/// manifold and are rejected.
pub fn spectrum<T: Real>(
    schedule: &Schedule<T>,
    s_grid: &[T],
    k: usize,
) -> Result<SpectrumReport<T>> {
    check_dense_cap(schedule.num_variables(), "dense spectrum")?;
    let dim = schedule.dimension();
    if s_grid.is_empty() {
        return Err(Error::InvalidArgument("empty sweep grid".into()));
    }
    if k == 0 || k > dim {
        return Err(Error::InvalidArgument(format!(
            "level count k={k} must lie in [1, {dim}]"
        )));
    }
    let degeneracy = schedule.final_hamiltonian.ground_degeneracy();
    if degeneracy == dim {
        return Err(Error::InvalidArgument(
            "final Hamiltonian is a multiple of the identity; the spectral gap is undefined"
                .into(),
        ));
    }

    let mut eigenvalues = Vec::with_capacity(s_grid.len());
    let mut min_gap: Option<T> = None;
    for &s in s_grid {
        let all = interpolate(schedule, s)?.eigenvalues_ascending();
        let gap = all[degeneracy] - all[0];
        min_gap = Some(match min_gap {
            Some(g) if g < gap => g,
            _ => gap,
        });
        eigenvalues.push(all[..k].to_vec());
    }
    Ok(SpectrumReport {
        s_values: s_grid.to_vec(),
        eigenvalues,
        min_gap: min_gap.expect("grid is nonempty"),
        ground_degeneracy_final: degeneracy,
    })
}

/// Evenly spaced grid of `points >= 2` sweep values covering `[0, 1]`.
pub fn sweep_grid<T: Real>(points: usize) -> Vec<T> {
    assert!(points >= 2);
    let last = from_usize::<T>(points - 1);
    (0..points).map(|i| from_usize::<T>(i) / last).collect()
}
