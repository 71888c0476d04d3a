//! Complex state vectors in 2 and N dimensions.
//!
//! All states are unit vectors (checked to 1e-12 at construction). Operations
//! that evolve a state are exactly unitary up to floating-point rounding and
//! document their drift bound at the definition site.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::search::{InitialState, SearchInstance};

/// Norm tolerance accepted at construction.
pub const NORM_TOL: f64 = 1e-12;

/// A unit vector of N complex amplitudes, N >= 2.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Validates N >= 2 and unit norm within [`NORM_TOL`].
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() < 2 {
            return Err(Error::DimensionTooSmall(amps.len()));
        }
        let norm = norm_of(&amps);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm, tol: NORM_TOL });
        }
        Ok(Self { amps })
    }

    /// Uniform superposition over all N basis states, amplitudes 1/sqrt(N).
    pub fn uniform(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::DimensionTooSmall(n));
        }
        let a = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
        Ok(Self { amps: vec![a; n] })
    }

    /// Basis state e_k in dimension n.
    pub fn basis(n: usize, k: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::DimensionTooSmall(n));
        }
        if k >= n {
            return Err(Error::TargetOutOfRange { target: k, n });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); n];
        amps[k] = Complex64::new(1.0, 0.0);
        Ok(Self { amps })
    }

    /// Constructor for outputs of norm-preserving operations; skips the norm
    /// check (drift there is bounded by the operation's documented bound).
    pub(crate) fn from_raw(amps: Vec<Complex64>) -> Self {
        debug_assert!(amps.len() >= 2);
        Self { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        norm_of(&self.amps)
    }

    /// |amps[k]|^2.
    pub fn population(&self, k: usize) -> f64 {
        self.amps[k].norm_sqr()
    }
}

fn norm_of(amps: &[Complex64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// <a|b>, conjugate-linear in the first argument.
pub fn inner_product(a: &StateVector, b: &StateVector) -> Result<Complex64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { left: a.dim(), right: b.dim() });
    }
    Ok(a.amps
        .iter()
        .zip(&b.amps)
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// Amplitudes on the target level and on its orthogonal complement.
///
/// Houses the (x, sqrt(1-x^2)) coordinates of the two-level reduction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoLevelState {
    pub c_alpha: Complex64,
    pub c_beta: Complex64,
}

impl TwoLevelState {
    /// Validates |c_alpha|^2 + |c_beta|^2 = 1 within [`NORM_TOL`].
    pub fn new(c_alpha: Complex64, c_beta: Complex64) -> Result<Self> {
        let norm = (c_alpha.norm_sqr() + c_beta.norm_sqr()).sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm, tol: NORM_TOL });
        }
        Ok(Self { c_alpha, c_beta })
    }

    /// Real-amplitude state (x, sqrt(1-x^2)) for overlap x in [0, 1].
    pub fn from_overlap(x: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::InvalidParameter(format!(
                "overlap x must lie in [0, 1], got {x}"
            )));
        }
        Ok(Self {
            c_alpha: Complex64::new(x, 0.0),
            c_beta: Complex64::new((1.0 - x * x).sqrt(), 0.0),
        })
    }

    /// Pure complement state (0, 1).
    pub fn pure_beta() -> Self {
        Self {
            c_alpha: Complex64::new(0.0, 0.0),
            c_beta: Complex64::new(1.0, 0.0),
        }
    }

    pub(crate) fn from_raw(c_alpha: Complex64, c_beta: Complex64) -> Self {
        Self { c_alpha, c_beta }
    }

    /// Population of the target level, |c_alpha|^2.
    pub fn p_alpha(&self) -> f64 {
        self.c_alpha.norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        (self.c_alpha.norm_sqr() + self.c_beta.norm_sqr()).sqrt()
    }
}

/// Lifts a two-level state into the full N-dimensional space of `instance`:
/// c_alpha on the target index, c_beta spread uniformly over the rest.
///
/// Requires the instance's initial state to be `Uniform`, so that the
/// complement level is the uniform state over non-target indices. For
/// explicit initial states the complement differs; go through
/// [`crate::search::decompose_initial`].
pub fn embed_two_level(s: &TwoLevelState, instance: &SearchInstance) -> Result<StateVector> {
    require_uniform(instance, "embed_two_level")?;
    let n = instance.n();
    let spread = s.c_beta / ((n - 1) as f64).sqrt();
    let mut amps = vec![spread; n];
    amps[instance.target()] = s.c_alpha;
    Ok(StateVector::from_raw(amps))
}

/// Projects a full-space vector onto the two-level subspace of `instance`.
///
/// Returns the renormalized (target, complement) amplitudes together with the
/// leakage 1 - |<alpha|v>|^2 - |<beta|v>|^2 outside that subspace. Leakage
/// within 1e-12 of 1 means the vector has no support there and the projection
/// is degenerate.
pub fn project_two_level(
    v: &StateVector,
    instance: &SearchInstance,
) -> Result<(TwoLevelState, f64)> {
    require_uniform(instance, "project_two_level")?;
    let n = instance.n();
    if v.dim() != n {
        return Err(Error::DimensionMismatch { left: v.dim(), right: n });
    }
    let ca = v.amplitudes()[instance.target()];
    let spread = 1.0 / ((n - 1) as f64).sqrt();
    let cb: Complex64 = v
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(k, _)| *k != instance.target())
        .map(|(_, a)| spread * a)
        .sum();
    let weight = ca.norm_sqr() + cb.norm_sqr();
    let leakage = 1.0 - weight;
    if leakage >= 1.0 - 1e-12 {
        return Err(Error::DegenerateProjection { leakage });
    }
    let scale = weight.sqrt();
    Ok((TwoLevelState::from_raw(ca / scale, cb / scale), leakage))
}

fn require_uniform(instance: &SearchInstance, op: &str) -> Result<()> {
    match instance.initial() {
        InitialState::Uniform => Ok(()),
        InitialState::Explicit(_) => Err(Error::InvalidParameter(format!(
            "{op} requires a uniform initial state; explicit initial states \
             define a different complement level (see decompose_initial)"
        ))),
    }
}
