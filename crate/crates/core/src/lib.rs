//! Numerical toolkit for adiabatic quantum search over an unstructured
//! database of `N` items.
//!
//! The search Hamiltonian interpolates between the projector-complement of the
//! uniform superposition and that of the marked item,
//!
//! ```text
//! H(s) = f(s) (I - |psi0><psi0|) + g(s) (I - |m><m|),    s in [0, 1]
//! ```
//!
//! Because `H(s)` only ever mixes `|m>` with the uniform superposition, the
//! whole problem lives in a two-dimensional invariant subspace. That makes the
//! spectrum, the time evolution and the runtime analysis exact at any `N`
//! (the spectral code takes `N` as a real number and runs happily at 1e16).
//!
//! Modules:
//!
//! * [`schedule`] – the interpolation functions `f`, `g` (linear, the
//!   `sqrt(N)`-boosted schedule, or user supplied).
//! * [`spectral`] – closed-form gap, energies and transition matrix element,
//!   plus a dense `N x N` oracle for small `N`.
//! * [`dynamics`] – adiabatic time parametrizations, unitary integration of
//!   the Schrödinger equation and lower-bound bookkeeping.
//! * [`ensemble`] – full Hilbert-space simulation of one computer per marked
//!   item, auditing the overlap-sum inequalities behind the `∫g dt` bound.

pub mod dynamics;
pub mod ensemble;
mod error;
pub mod schedule;
pub mod spectral;

pub use dynamics::{
    adiabaticity_audit, build_parametrization, evolve, evolve_energy_shifted, lower_bound_check,
    AuditPoint, EvolutionResult, Knot, LowerBoundReport, QuantumState, Strategy,
    TimeParametrization,
};
pub use ensemble::{
    derive_theorem_bound, evolve_ensemble, integrated_bound_check, BoundCheck, EnsembleReport,
    EnsembleState, TheoremBound,
};
pub use error::{Error, Result};
pub use schedule::{
    BoundaryCheck, BoundaryReport, CustomSchedule, Schedule, ScheduleKind, ScheduleSample,
};
pub use spectral::{
    dense_hamiltonian, dense_spectrum, effective_hamiltonian, gap_curve, shifted_ground_energy,
    spectral_point, EffectiveHamiltonian, SpectralPoint,
};
