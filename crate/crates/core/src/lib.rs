//! Classical simulation of adiabatic quantum optimization for 3-SAT.
//!
//! The crate covers the full pipeline at desk scale:
//!
//! * [`cnf`] — DIMACS parsing/writing, random instance generation at a given
//!   clause/variable ratio, and an exhaustive solving oracle.
//! * [`energy`] — the clause-violation energy function and its tabulation
//!   over all `2^n` assignments, serial or split across worker threads with
//!   disjoint output ranges.
//! * [`hamiltonian`] — the initial (transverse-field) and final (diagonal)
//!   Hamiltonians, their linear interpolation `H(s)`, and dense low-lying
//!   spectra with manifold-aware gaps.
//! * [`evolve`] — fixed-step RK4 integration of the Schrödinger equation
//!   along the sweep, with norm, success-probability, gap, and
//!   ground-overlap diagnostics.
//! * [`bench`] — a serial-vs-parallel timing harness over instance sweeps,
//!   with CSV output.
//!
//! The numeric core is generic over the scalar type through
//! [`scalar::Real`]; `f64` is the default choice and the aliases below pin
//! the common instantiations.

pub mod bench;
pub mod cnf;
pub mod energy;
pub mod error;
pub mod evolve;
pub mod hamiltonian;
pub mod scalar;

pub use error::{DimacsError, Error, Result};
pub use scalar::Real;

/// `f64` state vector.
pub type StateVector64 = evolve::StateVector<f64>;
/// `f32` state vector.
pub type StateVector32 = evolve::StateVector<f32>;
/// `f64` sweep schedule.
pub type Schedule64 = hamiltonian::Schedule<f64>;
/// `f32` sweep schedule.
pub type Schedule32 = hamiltonian::Schedule<f32>;
/// `f64` diagonal final Hamiltonian.
pub type DiagonalHamiltonian64 = hamiltonian::DiagonalHamiltonian<f64>;
/// `f64` dense Hamiltonian.
pub type DenseHamiltonian64 = hamiltonian::DenseHamiltonian<f64>;
/// `f64` spectrum report.
pub type SpectrumReport64 = hamiltonian::SpectrumReport<f64>;
/// `f64` evolution configuration.
pub type EvolutionConfig64 = evolve::EvolutionConfig<f64>;
/// `f64` evolution result.
pub type EvolutionResult64 = evolve::EvolutionResult<f64>;
