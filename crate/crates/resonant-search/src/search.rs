//! Search-problem definitions and their Hamiltonians.
//!
//! A search instance singles out one basis state (the target) of an
//! N-dimensional space. The static Hamiltonian rewards both the target and
//! the initial state and couples them through a phased cross term; restricted
//! to the plane spanned by the target and the initial state's orthogonal
//! complement it is an ordinary two-level system, and that reduction is exact
//! because the full operator annihilates everything outside the plane.

use num_complex::Complex64;
use serde::Serialize;

use crate::dense::DenseHermitian;
use crate::error::{Error, Result};
use crate::state::StateVector;
use crate::two_level::HermitianTwoLevel;

/// Default dimension cap for dense construction; O(N^2) memory above it buys
/// nothing because the two-level reduction is exact.
pub const DENSE_LIMIT_DEFAULT: usize = 4096;

/// Overlaps this close to 1 leave no complement direction to search along.
const OVERLAP_DEGENERACY_TOL: f64 = 1e-12;

/// How a search instance picks its starting state.
#[derive(Clone, Debug, PartialEq)]
pub enum InitialState {
    /// Uniform superposition over all N basis states.
    Uniform,
    /// An arbitrary unit vector (must not coincide with the target state).
    Explicit(StateVector),
}

/// Problem definition: dimension, target index, initial state.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchInstance {
    n: usize,
    target: usize,
    initial: InitialState,
}

impl SearchInstance {
    pub fn new(n: usize, target: usize, initial: InitialState) -> Result<Self> {
        if n < 2 {
            return Err(Error::DimensionTooSmall(n));
        }
        if target >= n {
            return Err(Error::TargetOutOfRange { target, n });
        }
        if let InitialState::Explicit(psi) = &initial {
            if psi.dim() != n {
                return Err(Error::DimensionMismatch { left: psi.dim(), right: n });
            }
            let overlap = psi.amplitudes()[target].norm();
            if overlap >= 1.0 - OVERLAP_DEGENERACY_TOL {
                return Err(Error::TargetIsInitial { overlap });
            }
        }
        Ok(Self { n, target, initial })
    }

    /// Instance starting from the uniform superposition.
    pub fn uniform(n: usize, target: usize) -> Result<Self> {
        Self::new(n, target, InitialState::Uniform)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn initial(&self) -> &InitialState {
        &self.initial
    }

    /// The initial state as a concrete vector.
    pub fn initial_vector(&self) -> StateVector {
        match &self.initial {
            InitialState::Uniform => StateVector::uniform(self.n).expect("n >= 2"),
            InitialState::Explicit(psi) => psi.clone(),
        }
    }
}

/// Static drive parameters (E, epsilon, phi), hbar = 1.
///
/// `energy` may be zero here so degenerate limits stay constructible; the CLI
/// enforces strict positivity on user input.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DriveParams {
    pub energy: f64,
    pub epsilon: f64,
    pub phi: f64,
}

impl DriveParams {
    pub fn new(energy: f64, epsilon: f64, phi: f64) -> Result<Self> {
        if !energy.is_finite() || energy < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "energy must be finite and >= 0, got {energy}"
            )));
        }
        if !epsilon.is_finite() || epsilon < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "epsilon must be finite and >= 0, got {epsilon}"
            )));
        }
        if !phi.is_finite() {
            return Err(Error::InvalidParameter(format!("phi must be finite, got {phi}")));
        }
        Ok(Self { energy, epsilon, phi })
    }

    /// Phase given in units of pi, the natural grid for this problem.
    pub fn from_phi_pi(energy: f64, epsilon: f64, phi_pi: f64) -> Result<Self> {
        Self::new(energy, epsilon, phi_pi * std::f64::consts::PI)
    }
}

/// Two-level reduction of the search Hamiltonian.
///
/// Diagonal energies e_alpha, e_beta; coupling gamma * exp(i phi_prime) on
/// the (target, complement) off-diagonal; w_res = e_beta - e_alpha is the
/// drive frequency at which the oscillating-coupling model is resonant.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EffectiveTwoLevel {
    pub x: f64,
    pub e_alpha: f64,
    pub e_beta: f64,
    pub gamma: f64,
    pub phi_prime: f64,
    pub w_res: f64,
    pub valid: bool,
    pub invalid_reason: Option<String>,
    /// True when E*x + epsilon*exp(i phi) = 0 exactly: gamma = 0, phi_prime
    /// meaningless (reported as 0), no transfer possible.
    pub degenerate_coupling: bool,
}

/// Overlap x = <target|initial> made real positive, plus the unit complement
/// vector beta with initial = x*target + sqrt(1-x^2)*beta.
///
/// The phase of the raw overlap is absorbed into the target's definition, so
/// x is canonical. Rejected when the overlap magnitude is within 1e-12 of 1:
/// the complement direction is then undefined and there is nothing to search.
pub fn decompose_initial(instance: &SearchInstance) -> Result<(f64, StateVector)> {
    let n = instance.n();
    let target = instance.target();
    match instance.initial() {
        InitialState::Uniform => {
            let x = 1.0 / (n as f64).sqrt();
            let spread = Complex64::new(1.0 / ((n - 1) as f64).sqrt(), 0.0);
            let mut amps = vec![spread; n];
            amps[target] = Complex64::new(0.0, 0.0);
            Ok((x, StateVector::from_raw(amps)))
        }
        InitialState::Explicit(psi) => {
            let raw = psi.amplitudes()[target];
            let x = raw.norm();
            if x >= 1.0 - OVERLAP_DEGENERACY_TOL {
                return Err(Error::TargetIsInitial { overlap: x });
            }
            // phase e^{i theta} of <target|psi>; target is redefined as
            // e^{i theta}|target>, so beta = (psi - x e^{i theta} e_t)/s
            let phase = if x == 0.0 {
                Complex64::new(1.0, 0.0)
            } else {
                raw / x
            };
            let s = (1.0 - x * x).sqrt();
            let mut amps: Vec<Complex64> = psi.amplitudes().iter().map(|a| a / s).collect();
            amps[target] = (raw - x * phase) / s;
            Ok((x, StateVector::from_raw(amps)))
        }
    }
}

/// Two-level parameters for drive `d` at overlap `x`, with 0 < x < 1.
///
/// e_alpha = E(1+x^2) + 2 eps x cos(phi); e_beta = E(1-x^2);
/// coupling = sqrt(1-x^2) * (E x + eps e^{i phi}) written as
/// gamma e^{i phi_prime} with a full-quadrant phi_prime;
/// w_res = e_beta - e_alpha.
/// Validity (resonant drive is meaningful) requires eps > E x and
/// cos(phi) < -E x / eps; both together force w_res > 0.
pub fn effective_params(d: &DriveParams, x: f64) -> Result<EffectiveTwoLevel> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "overlap x must lie strictly inside (0, 1), got {x}"
        )));
    }
    let (e, eps, phi) = (d.energy, d.epsilon, d.phi);
    let (sin_phi, cos_phi) = phi.sin_cos();
    let e_alpha = e * (1.0 + x * x) + 2.0 * eps * x * cos_phi;
    let e_beta = e * (1.0 - x * x);
    let s = (1.0 - x * x).sqrt();
    let u = e * x + eps * cos_phi;
    let v = eps * sin_phi;
    let degenerate = u == 0.0 && v == 0.0;
    let gamma = s * (u * u + v * v).sqrt();
    let phi_prime = if degenerate { 0.0 } else { v.atan2(u) };
    let w_res = e_beta - e_alpha;
    // cos(phi) < -E x / eps, written multiplied through by eps >= 0 to avoid
    // dividing by zero at eps = 0
    let (valid, invalid_reason) = if eps <= e * x {
        (
            false,
            Some(format!(
                "epsilon must exceed E*x: epsilon > E*x required (epsilon = {eps}, E*x = {})",
                e * x
            )),
        )
    } else if eps * cos_phi >= -e * x {
        (
            false,
            Some(format!(
                "cos(phi) must lie below -E*x/epsilon: cos(phi) < -E*x/epsilon required \
                 (cos(phi) = {cos_phi}, -E*x/epsilon = {})",
                -e * x / eps
            )),
        )
    } else {
        (true, None)
    };
    Ok(EffectiveTwoLevel {
        x,
        e_alpha,
        e_beta,
        gamma,
        phi_prime,
        w_res,
        valid,
        invalid_reason,
        degenerate_coupling: degenerate,
    })
}

/// Resonant drive frequency of the ion-trap instance: (2/n)(sqrt(n) eps - E).
/// Positive exactly when eps > E/sqrt(n).
pub fn iontrap_frequency(n: usize, energy: f64, epsilon: f64) -> f64 {
    assert!(n >= 2, "iontrap_frequency needs n >= 2, got {n}");
    let nf = n as f64;
    (2.0 / nf) * (nf.sqrt() * epsilon - energy)
}

/// Ion-trap two-level parameters: the drive at phi = pi from the uniform
/// state, x = 1/sqrt(n). The diagonal is e_alpha = E(1+1/n) - 2 eps/sqrt(n),
/// e_beta = E(1-1/n); the coupling magnitude is
/// sqrt(1-1/n) * |E/sqrt(n) - eps| with its sign absorbed into phi_prime.
pub fn build_iontrap(n: usize, energy: f64, epsilon: f64) -> Result<EffectiveTwoLevel> {
    if n < 2 {
        return Err(Error::DimensionTooSmall(n));
    }
    if !(energy > 0.0) || !energy.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "energy must be finite and > 0, got {energy}"
        )));
    }
    let d = DriveParams::new(energy, epsilon, std::f64::consts::PI)?;
    effective_params(&d, 1.0 / (n as f64).sqrt())
}

/// Dense N x N form E(P_target + P_initial) + eps(e^{i phi}|t><psi| + h.c.)
/// with the default dimension cap.
pub fn build_hg_dense(instance: &SearchInstance, d: &DriveParams) -> Result<DenseHermitian> {
    build_hg_dense_with_limit(instance, d, DENSE_LIMIT_DEFAULT)
}

/// As [`build_hg_dense`] with an explicit dimension cap.
pub fn build_hg_dense_with_limit(
    instance: &SearchInstance,
    d: &DriveParams,
    limit: usize,
) -> Result<DenseHermitian> {
    let n = instance.n();
    if n > limit {
        return Err(Error::DenseLimitExceeded { n, limit });
    }
    let target = instance.target();
    let psi = instance.initial_vector();
    let a = psi.amplitudes();
    let e = Complex64::new(d.energy, 0.0);
    let eps_phase = Complex64::from_polar(d.epsilon, d.phi);
    let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            let mut h = e * (a[i] * a[j].conj());
            if i == target {
                h += eps_phase * a[j].conj();
                if j == target {
                    h += e;
                }
            }
            if j == target {
                h += eps_phase.conj() * a[i];
            }
            entries[i * n + j] = h;
        }
    }
    DenseHermitian::from_entries(n, entries)
}

/// The static two-level matrix [[e_alpha, g e^{i phi'}], [g e^{-i phi'}, e_beta]]
/// in (target, complement) ordering.
pub fn build_hg_effective(eff: &EffectiveTwoLevel) -> HermitianTwoLevel {
    let (sin, cos) = eff.phi_prime.sin_cos();
    HermitianTwoLevel::new(
        (eff.e_alpha + eff.e_beta) / 2.0,
        eff.gamma * cos,
        -eff.gamma * sin,
        (eff.e_alpha - eff.e_beta) / 2.0,
    )
}

/// The oscillating-coupling matrix at time t: same diagonal, off-diagonal
/// phase advanced to w t + phi_prime. Eigenvalues are t-independent.
pub fn build_hls(eff: &EffectiveTwoLevel, w: f64, t: f64) -> HermitianTwoLevel {
    let (sin, cos) = (w * t + eff.phi_prime).sin_cos();
    HermitianTwoLevel::new(
        (eff.e_alpha + eff.e_beta) / 2.0,
        eff.gamma * cos,
        -eff.gamma * sin,
        (eff.e_alpha - eff.e_beta) / 2.0,
    )
}

/// Spectral radius of the dense static Hamiltonian, computed exactly from its
/// invariant two-level block (the rest of the spectrum is 0). Accepts the
/// x = 0 edge where the generic parameter path does not.
pub fn hg_spectral_radius(d: &DriveParams, x: f64) -> f64 {
    let (sin_phi, cos_phi) = d.phi.sin_cos();
    let e_alpha = d.energy * (1.0 + x * x) + 2.0 * d.epsilon * x * cos_phi;
    let e_beta = d.energy * (1.0 - x * x);
    let u = d.energy * x + d.epsilon * cos_phi;
    let v = d.epsilon * sin_phi;
    let h0 = (e_alpha + e_beta) / 2.0;
    let hz = (e_alpha - e_beta) / 2.0;
    let omega = (hz * hz + (1.0 - x * x) * (u * u + v * v)).sqrt();
    h0.abs() + omega
}
