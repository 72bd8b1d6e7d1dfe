//! Vacuum-field pressure on a free-electron metal slab.
//!
//! The slab is a lossless plasma, eps(i xi) = 1 + omega_P^2/xi^2, either
//! free-standing or facing perfect mirrors across vacuum gaps. Working in
//! reduced units — lengths in 1/k_P with k_P = omega_P/c, frequencies in
//! omega_P, pressures in hbar c k_P^4 — removes every dimensional
//! constant, so each result depends on the reduced geometry alone.
//!
//! - [`medium`]: plasma response and interface reflection amplitudes at
//!   imaginary frequency.
//! - [`quadrature`]: adaptive Gauss-Kronrod integration, modified Bessel
//!   functions K0..K2 and series summation.
//! - [`pressure`]: the Lifshitz-type surface-pressure evaluations and
//!   their quasistatic/thick-slab asymptotes.
//! - [`modes`]: real-frequency surface-plasmon dispersion and mode-sum
//!   pressures.
//! - [`cli`]: parameter sweeps, figure datasets and CSV/SVG emission for
//!   the `casimir-slab` binary.
//! - [`verify`]: the built-in acceptance criteria.

pub mod cli;
pub mod medium;
pub mod modes;
pub mod pressure;
pub mod quadrature;
pub mod verify;

pub use medium::{MirrorModel, Polarization, Symmetry};
pub use modes::{ModeBranch, ModeSumPressure};
pub use pressure::{Formula, Mirror, PressureValue, SlabSystem};
