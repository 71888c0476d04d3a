//! Analog quantum search as resonant two-level dynamics.
//!
//! An unstructured search over n basis states, one of them marked, reduces
//! exactly to a two-level problem spanned by the marked state and the
//! orthogonal rest of the initial superposition. This crate builds the
//! Hamiltonians of that reduction, propagates them (closed forms where they
//! exist, a classical RK4 integrator where they do not), and packages the
//! sweeps used to study the dynamics: resonance curves, phase scans, runtime
//! scaling fits, and a side-by-side comparison with the discrete iteration
//! baseline.
//!
//! Units: hbar = 1 throughout, so energies are angular frequencies and time
//! is their inverse. All numerics are f64.
//!
//! Module map:
//! - [`state`]: normalized state vectors, the two-level subspace, and the
//!   embedding/projection between them.
//! - [`two_level`]: Hermitian 2x2 operators in Pauli coordinates with an
//!   exact propagator.
//! - [`dense`]: dense Hermitian matrices for cross-checking the reduction.
//! - [`search`]: search instances, drive parameters, the effective two-level
//!   reduction, and the Hamiltonian builders.
//! - [`dynamics`]: trajectories, the RK4 integrator, the driven closed form,
//!   peak and threshold detection.
//! - [`grover`]: the discrete-iteration baseline.
//! - [`experiments`]: sweep harnesses, power-law fits, CSV/JSON emission.
//!
//! ```
//! use resonant_search::{build_iontrap, closed_form_trajectory, find_peak, TwoLevelState};
//!
//! // n = 16 states, drive at the built-in resonance. Peak transfer reaches
//! // 1 - 1/n at the first maximum.
//! let eff = build_iontrap(16, 1.0, 1.0)?;
//! let psi0 = TwoLevelState::from_overlap(0.25)?;
//! let window = 1.5 * std::f64::consts::PI / eff.gamma;
//! let traj = closed_form_trajectory(&eff, eff.w_res, &psi0, window, 2001)?;
//! let peak = find_peak(&traj)?;
//! assert!((peak.p_peak - (1.0 - 1.0 / 16.0)).abs() < 1e-6);
//! # Ok::<(), resonant_search::Error>(())
//! ```

pub mod dense;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod grover;
pub mod search;
pub mod state;
pub mod two_level;

pub use dense::DenseHermitian;
pub use dynamics::{
    closed_form_driven, closed_form_trajectory, exact_trajectory, find_first_peak, find_peak,
    find_peak_from, first_hit_time, integrate, integrate_with, ConstantDense, ConstantTwoLevel,
    DrivenTwoLevel, HamiltonianProvider, ModelTag, PeakResult, StepRule, Trajectory,
};
pub use error::{Error, Result};
pub use experiments::{
    compare_discrete, emit_table, emit_to_string, emit_to_writer, fit_log_log, phase_scan,
    resonance_scan, scaling_study, CompareRow, CompareTable, Emit, EpsilonPolicy, ScalingFit,
    ScanInitial, ScanResult, StopRule, TableFormat, TwoLevelModel,
};
pub use grover::{
    grover_iterate, grover_run, grover_success, grover_theta, optimal_iterations, GroverRun,
};
pub use search::{
    build_hg_dense, build_hg_dense_with_limit, build_hg_effective, build_hls, build_iontrap,
    decompose_initial, effective_params, hg_spectral_radius, iontrap_frequency, DriveParams,
    EffectiveTwoLevel, InitialState, SearchInstance,
};
pub use state::{
    embed_two_level, inner_product, project_two_level, StateVector, TwoLevelState,
};
pub use two_level::HermitianTwoLevel;

pub use num_complex::Complex64;

// The guide's code blocks compile and run as doctests, keeping its snippets
// in sync with the crate.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/two-level.md")]
    mod two_level {}
    #[doc = include_str!("../../../book/src/search-hamiltonians.md")]
    mod search_hamiltonians {}
    #[doc = include_str!("../../../book/src/dynamics.md")]
    mod dynamics {}
    #[doc = include_str!("../../../book/src/grover.md")]
    mod grover {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
