//! Discrete-time amplitude amplification baseline: oracle phase flip plus
//! inversion about the mean, with its closed-form success law.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::state::StateVector;

/// One search run of the discrete iteration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GroverRun {
    pub n: usize,
    pub target: usize,
    pub iterations: usize,
    pub success: f64,
}

/// Rotation angle per iteration: sin(theta) = 1/sqrt(n).
///
/// Computed as atan(1/sqrt(n-1)), which is the same angle; the atan form
/// evaluates exactly at n = 2 (atan(1) is the f64 quarter turn), keeping the
/// iteration-count tie there on the documented side.
pub fn grover_theta(n: usize) -> f64 {
    assert!(n >= 2, "grover_theta needs n >= 2, got {n}");
    (1.0 / ((n - 1) as f64).sqrt()).atan()
}

/// One iteration: flip the sign of the target amplitude, then reflect every
/// amplitude about their mean (a -> 2 mean - a). Unitary, so the norm is
/// preserved to rounding.
pub fn grover_iterate(state: &StateVector, target: usize) -> Result<StateVector> {
    let n = state.dim();
    if target >= n {
        return Err(Error::TargetOutOfRange { target, n });
    }
    let mut amps = state.amplitudes().to_vec();
    amps[target] = -amps[target];
    let mean: Complex64 = amps.iter().sum::<Complex64>() / n as f64;
    for a in &mut amps {
        *a = 2.0 * mean - *a;
    }
    Ok(StateVector::from_raw(amps))
}

/// Success probability after k iterations from the uniform state:
/// sin^2((2k+1) theta).
pub fn grover_success(n: usize, k: usize) -> f64 {
    let theta = grover_theta(n);
    ((2 * k + 1) as f64 * theta).sin().powi(2)
}

/// Iteration count maximizing the closed-form success:
/// round(pi/(4 theta) - 1/2), half away from zero, floored at 0. At n = 2 the
/// rule lands on the k = 1 side of an exact tie (both k give success 1/2).
pub fn optimal_iterations(n: usize) -> usize {
    let v = std::f64::consts::PI / (4.0 * grover_theta(n)) - 0.5;
    v.round().max(0.0) as usize
}

/// Runs k matrix iterations from the uniform state and records the measured
/// success probability.
pub fn grover_run(n: usize, target: usize, iterations: usize) -> Result<GroverRun> {
    let mut state = StateVector::uniform(n)?;
    if target >= n {
        return Err(Error::TargetOutOfRange { target, n });
    }
    for _ in 0..iterations {
        state = grover_iterate(&state, target)?;
    }
    Ok(GroverRun { n, target, iterations, success: state.population(target) })
}
