//! Redfield and Lindblad master-equation generators for a single qubit with
//! composite system–bath coupling (f₁σᶻ + f₂σˣ)·E.
//!
//! The crate builds the 4×4 superoperators of both models from one bath
//! correlation function, solves for steady states and trajectories, and
//! exposes the diagnostics needed to contrast them: the Redfield steady state
//! carries stationary coherence and can leave the physical state space, while
//! the energy-conserving Lindblad construction thermalizes to a Gibbs state
//! with neither feature.
//!
//! Module layout:
//! - [`bath`]: spectral function, Planck occupation, correlation D(ω)
//! - [`integrals`]: adaptive Gauss–Kronrod quadrature, principal values,
//!   ε-resolvents and the Lamb-shift integrals
//! - [`kernels`]: the generators themselves, plus a generic element-wise
//!   Born-kernel construction used as a cross-check oracle
//! - [`dynamics`]: steady states, propagation, Bloch picture, positivity,
//!   threshold search, decay-rate fits
//! - [`sweep`]: parameter sweeps over ω₀ (data-parallel by default)

// `!(v > 0.0)` is used deliberately throughout so NaN fails validation too;
// reference constants are written with full oracle digits even when the last
// few are beyond f64 resolution.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::excessive_precision)]

pub mod bath;
pub mod dynamics;
pub mod integrals;
pub mod kernels;
pub mod sweep;

pub use bath::{BathError, BathParams, Regime, ZeroFreqLimit};
pub use dynamics::{
    closed_form_steady_state, from_bloch, negativity_threshold, positivity_report, propagate,
    spectral_gap, steady_state, to_bloch, BlochVector, DensityMatrix, DynamicsError,
    PositivityReport, Trajectory,
};
pub use integrals::{
    compute_shift_integrals, QuadratureConfig, QuadratureError, ShiftIntegrals,
};
pub use kernels::{
    generic_generator, generic_generator_extrapolated, lindblad_generator, redfield_generator,
    validate_generator, Generator, KernelError, Model, QubitParams, SelectionRule,
};
pub use sweep::{run_sweep, run_sweep_seq, SweepRequest, SweepRow};
