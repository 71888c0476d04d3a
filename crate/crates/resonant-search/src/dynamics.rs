//! Time evolution: fixed-step RK4 on i psi' = H(t) psi, the exact
//! rotating-frame solution for the driven two-level system, sampled
//! trajectories, and peak / first-hit location on sampled curves.

use num_complex::Complex64;
use serde::Serialize;

use crate::dense::DenseHermitian;
use crate::error::{Error, Result};
use crate::search::EffectiveTwoLevel;
use crate::state::TwoLevelState;
use crate::two_level::HermitianTwoLevel;

/// Norm drift beyond this aborts an integration: the step is too coarse for
/// the requested horizon.
pub const NORM_ABORT_TOL: f64 = 1e-6;

/// Per-run error budgets steering the automatic step choice. The automatic
/// step keeps the accumulated population phase error and the norm drift near
/// these targets, and never exceeds 1/64 of the fastest period.
const AUTO_POPULATION_BUDGET: f64 = 1e-10;
const AUTO_NORM_BUDGET: f64 = 1e-10;

/// Hard ceiling on the number of RK4 steps in one run.
pub const MAX_STEPS: u64 = 100_000_000;

/// Trajectories keep at most this many samples (plus the initial point).
const MAX_SAMPLES: u64 = 2000;

/// Which evolution path produced a trajectory.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelTag {
    HgDense,
    HgEffective,
    HlsNumeric,
    HlsClosedForm,
}

impl ModelTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            ModelTag::HgDense => "hg_dense",
            ModelTag::HgEffective => "hg_effective",
            ModelTag::HlsNumeric => "hls_numeric",
            ModelTag::HlsClosedForm => "hls_closed_form",
        }
    }
}

/// Step-size policy for [`integrate`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StepRule {
    /// Step chosen from the provider's frequency scale and the error budgets.
    Auto,
    /// Requested step; rounded down so a whole number of steps spans the run.
    Fixed(f64),
}

/// Sampled target-population curve.
///
/// `p_target` is the population of the watched level relative to the current
/// norm, so it stays in [0, 1] (up to rounding) even while `norm_error`
/// witnesses integrator drift. Times are strictly increasing from 0.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub p_target: Vec<f64>,
    pub norm_error: Vec<f64>,
    pub model: ModelTag,
}

impl Trajectory {
    pub fn new(
        times: Vec<f64>,
        p_target: Vec<f64>,
        norm_error: Vec<f64>,
        model: ModelTag,
    ) -> Result<Self> {
        if times.len() != p_target.len() || times.len() != norm_error.len() {
            return Err(Error::DimensionMismatch {
                left: times.len(),
                right: p_target.len().max(norm_error.len()),
            });
        }
        if times.first().map_or(true, |t| *t != 0.0) {
            return Err(Error::InvalidParameter(
                "trajectory must start at t = 0".into(),
            ));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter(
                "trajectory times must be strictly increasing".into(),
            ));
        }
        if p_target.iter().any(|p| !(-1e-12..=1.0 + 1e-12).contains(p)) {
            return Err(Error::InvalidParameter(
                "trajectory populations must lie in [-1e-12, 1+1e-12]".into(),
            ));
        }
        Ok(Self { times, p_target, norm_error, model })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn max_norm_error(&self) -> f64 {
        self.norm_error.iter().fold(0.0, |m, e| m.max(*e))
    }
}

/// Located probability maximum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PeakResult {
    pub t_peak: f64,
    pub p_peak: f64,
    /// True when a quadratic fit through the neighbouring samples was applied
    /// (interior maxima only).
    pub refined: bool,
}

/// Hamiltonian seen by the integrator: dimension, action at a given time, and
/// a frequency scale bounding how fast the state can oscillate.
pub trait HamiltonianProvider {
    fn dim(&self) -> usize;
    /// out = H(t) v.
    fn apply(&self, t: f64, v: &[Complex64], out: &mut [Complex64]);
    /// Upper bound on the relevant angular frequencies: diagonal energies,
    /// twice the coupling, the drive frequency, spectral radius.
    fn frequency_scale(&self) -> f64;
    fn model(&self) -> ModelTag;
}

/// Time-independent 2x2 Hamiltonian (the static search model).
pub struct ConstantTwoLevel {
    m: [[Complex64; 2]; 2],
    freq: f64,
}

impl ConstantTwoLevel {
    pub fn new(h: &HermitianTwoLevel) -> Self {
        let omega = h.omega();
        Self {
            m: h.to_matrix(),
            freq: (h.h0.abs() + omega).max(2.0 * omega),
        }
    }
}

impl HamiltonianProvider for ConstantTwoLevel {
    fn dim(&self) -> usize {
        2
    }

    fn apply(&self, _t: f64, v: &[Complex64], out: &mut [Complex64]) {
        out[0] = self.m[0][0] * v[0] + self.m[0][1] * v[1];
        out[1] = self.m[1][0] * v[0] + self.m[1][1] * v[1];
    }

    fn frequency_scale(&self) -> f64 {
        self.freq
    }

    fn model(&self) -> ModelTag {
        ModelTag::HgEffective
    }
}

/// Oscillating-coupling 2x2 Hamiltonian at drive frequency w.
pub struct DrivenTwoLevel {
    e_alpha: f64,
    e_beta: f64,
    gamma: f64,
    phi_prime: f64,
    w: f64,
}

impl DrivenTwoLevel {
    pub fn new(eff: &EffectiveTwoLevel, w: f64) -> Self {
        Self {
            e_alpha: eff.e_alpha,
            e_beta: eff.e_beta,
            gamma: eff.gamma,
            phi_prime: eff.phi_prime,
            w,
        }
    }
}

impl HamiltonianProvider for DrivenTwoLevel {
    fn dim(&self) -> usize {
        2
    }

    fn apply(&self, t: f64, v: &[Complex64], out: &mut [Complex64]) {
        let coupling = Complex64::from_polar(self.gamma, self.w * t + self.phi_prime);
        out[0] = self.e_alpha * v[0] + coupling * v[1];
        out[1] = coupling.conj() * v[0] + self.e_beta * v[1];
    }

    fn frequency_scale(&self) -> f64 {
        self.e_alpha
            .abs()
            .max(self.e_beta.abs())
            .max(2.0 * self.gamma)
            .max(self.w.abs())
    }

    fn model(&self) -> ModelTag {
        ModelTag::HlsNumeric
    }
}

/// Time-independent dense Hamiltonian with a caller-supplied frequency scale
/// (pass the exact spectral radius when known; defaults to the row-sum bound).
pub struct ConstantDense<'a> {
    h: &'a DenseHermitian,
    freq: f64,
}

impl<'a> ConstantDense<'a> {
    pub fn new(h: &'a DenseHermitian) -> Self {
        let freq = h.operator_norm_bound();
        Self { h, freq }
    }

    pub fn with_frequency_scale(h: &'a DenseHermitian, freq: f64) -> Self {
        Self { h, freq }
    }
}

impl HamiltonianProvider for ConstantDense<'_> {
    fn dim(&self) -> usize {
        self.h.dim()
    }

    fn apply(&self, _t: f64, v: &[Complex64], out: &mut [Complex64]) {
        self.h.apply(v, out);
    }

    fn frequency_scale(&self) -> f64 {
        self.freq
    }

    fn model(&self) -> ModelTag {
        ModelTag::HgDense
    }
}

fn auto_step(omega_max: f64, t_end: f64) -> f64 {
    if omega_max <= 0.0 {
        return t_end / 128.0;
    }
    let period = (2.0 * std::f64::consts::PI / omega_max) / 64.0;
    // RK4 local phase error ~ (w dt)^5/120 per step and norm drift
    // ~ (w dt)^6/144; keep the accumulated totals near the budgets
    let phase = (120.0 * AUTO_POPULATION_BUDGET / (omega_max.powi(5) * t_end)).powf(0.25);
    let norm = (144.0 * AUTO_NORM_BUDGET / (omega_max.powi(6) * t_end)).powf(0.2);
    period.min(phase).min(norm)
}

struct StepPlan {
    dt: f64,
    steps: u64,
    sample_every: u64,
}

fn plan_steps(rule: StepRule, omega_max: f64, t_end: f64) -> Result<StepPlan> {
    let dt_req = match rule {
        StepRule::Auto => auto_step(omega_max, t_end),
        StepRule::Fixed(dt) => {
            if !(dt.is_finite() && dt > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "fixed step must be finite and > 0, got {dt}"
                )));
            }
            dt
        }
    };
    let mut steps = (t_end / dt_req).ceil() as u64;
    steps = steps.max(1);
    if steps > MAX_STEPS {
        match rule {
            StepRule::Auto => steps = MAX_STEPS,
            StepRule::Fixed(dt) => {
                return Err(Error::InvalidParameter(format!(
                    "step {dt} needs {steps} steps over t_end = {t_end}, above the {MAX_STEPS} cap"
                )));
            }
        }
    }
    let sample_every = steps.div_ceil(MAX_SAMPLES).max(1);
    let steps = steps.div_ceil(sample_every) * sample_every;
    Ok(StepPlan { dt: t_end / steps as f64, steps, sample_every })
}

/// RK4 integration of i psi' = H(t) psi, sampling at most 2001 points.
///
/// Auto steps hold the sampled norm drift near 1e-10; drift above 1e-6 or a
/// non-finite amplitude aborts the run. Populations are recorded relative to
/// the current norm.
pub fn integrate<P: HamiltonianProvider + ?Sized>(
    provider: &P,
    psi0: &[Complex64],
    target: usize,
    t_end: f64,
    rule: StepRule,
) -> Result<Trajectory> {
    integrate_with(provider, psi0, target, t_end, rule, |_, _| {})
}

/// As [`integrate`], invoking `observer(t, state)` at every recorded sample.
pub fn integrate_with<P, F>(
    provider: &P,
    psi0: &[Complex64],
    target: usize,
    t_end: f64,
    rule: StepRule,
    mut observer: F,
) -> Result<Trajectory>
where
    P: HamiltonianProvider + ?Sized,
    F: FnMut(f64, &[Complex64]),
{
    let n = provider.dim();
    if psi0.len() != n {
        return Err(Error::DimensionMismatch { left: psi0.len(), right: n });
    }
    if target >= n {
        return Err(Error::TargetOutOfRange { target, n });
    }
    if !(t_end.is_finite() && t_end > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "t_end must be finite and > 0, got {t_end}"
        )));
    }
    let norm0 = norm_of(psi0);
    if (norm0 - 1.0).abs() > crate::state::NORM_TOL {
        return Err(Error::NotNormalized { norm: norm0, tol: crate::state::NORM_TOL });
    }

    let plan = plan_steps(rule, provider.frequency_scale(), t_end)?;
    let dt = plan.dt;

    let mut psi = psi0.to_vec();
    let mut k1 = vec![Complex64::new(0.0, 0.0); n];
    let mut k2 = k1.clone();
    let mut k3 = k1.clone();
    let mut k4 = k1.clone();
    let mut tmp = k1.clone();

    let samples = (plan.steps / plan.sample_every) as usize + 1;
    let mut times = Vec::with_capacity(samples);
    let mut p_target = Vec::with_capacity(samples);
    let mut norm_error = Vec::with_capacity(samples);

    let record = |t: f64,
                  psi: &[Complex64],
                  times: &mut Vec<f64>,
                  p: &mut Vec<f64>,
                  ne: &mut Vec<f64>,
                  observer: &mut F|
     -> Result<()> {
        let norm_sq: f64 = psi.iter().map(|a| a.norm_sqr()).sum();
        if !norm_sq.is_finite() {
            return Err(Error::IntegrationAborted {
                t,
                reason: "state left the finite range".into(),
            });
        }
        let norm = norm_sq.sqrt();
        let drift = (norm - 1.0).abs();
        if drift > NORM_ABORT_TOL {
            return Err(Error::IntegrationAborted {
                t,
                reason: format!("norm drift {drift:.3e} exceeds {NORM_ABORT_TOL:.0e}"),
            });
        }
        times.push(t);
        p.push(psi[target].norm_sqr() / norm_sq);
        ne.push(drift);
        observer(t, psi);
        Ok(())
    };

    record(0.0, &psi, &mut times, &mut p_target, &mut norm_error, &mut observer)?;

    let half = dt / 2.0;
    for step in 0..plan.steps {
        let t = step as f64 * dt;
        provider.apply(t, &psi, &mut k1);
        neg_i(&mut k1);
        axpy(&mut tmp, &psi, half, &k1);
        provider.apply(t + half, &tmp, &mut k2);
        neg_i(&mut k2);
        axpy(&mut tmp, &psi, half, &k2);
        provider.apply(t + half, &tmp, &mut k3);
        neg_i(&mut k3);
        axpy(&mut tmp, &psi, dt, &k3);
        provider.apply(t + dt, &tmp, &mut k4);
        neg_i(&mut k4);
        let w = dt / 6.0;
        for i in 0..n {
            psi[i] += w * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
        }
        let done = step + 1;
        if done % plan.sample_every == 0 {
            record(
                done as f64 * dt,
                &psi,
                &mut times,
                &mut p_target,
                &mut norm_error,
                &mut observer,
            )?;
        }
    }

    Trajectory::new(times, p_target, norm_error, provider.model())
}

fn neg_i(v: &mut [Complex64]) {
    for a in v {
        *a = Complex64::new(a.im, -a.re);
    }
}

/// out = base + s * k
fn axpy(out: &mut [Complex64], base: &[Complex64], s: f64, k: &[Complex64]) {
    for i in 0..out.len() {
        out[i] = base[i] + s * k[i];
    }
}

fn norm_of(v: &[Complex64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// Exact state of the driven two-level system at time t.
///
/// The frame change c_alpha = a_alpha e^{-i e_alpha t}, c_beta = a_beta
/// e^{-i e_beta t} followed by a detuning split makes the Hamiltonian
/// constant: [[delta/2, g e^{i phi'}], [g e^{-i phi'}, -delta/2]] with
/// delta = w - (e_beta - e_alpha). The single rotating coupling component
/// makes this exact; no rotating-wave approximation is involved. At delta = 0
/// transfer is maximal, which fixes the sign convention for every scan.
pub fn closed_form_driven(
    eff: &EffectiveTwoLevel,
    w: f64,
    psi0: &TwoLevelState,
    t: f64,
) -> TwoLevelState {
    let delta = w - (eff.e_beta - eff.e_alpha);
    let (sin, cos) = eff.phi_prime.sin_cos();
    let h_rot = HermitianTwoLevel::new(0.0, eff.gamma * cos, -eff.gamma * sin, delta / 2.0);
    let b = h_rot.propagate_exact(psi0, t);
    TwoLevelState::from_raw(
        b.c_alpha * Complex64::from_polar(1.0, (delta / 2.0 - eff.e_alpha) * t),
        b.c_beta * Complex64::from_polar(1.0, -(delta / 2.0 + eff.e_beta) * t),
    )
}

/// Driven-model trajectory sampled from the closed form on a uniform grid.
pub fn closed_form_trajectory(
    eff: &EffectiveTwoLevel,
    w: f64,
    psi0: &TwoLevelState,
    t_end: f64,
    samples: usize,
) -> Result<Trajectory> {
    sample_grid(t_end, samples, ModelTag::HlsClosedForm, |t| {
        closed_form_driven(eff, w, psi0, t)
    })
}

/// Constant two-level trajectory sampled from the exact propagator.
pub fn exact_trajectory(
    h: &HermitianTwoLevel,
    psi0: &TwoLevelState,
    t_end: f64,
    samples: usize,
) -> Result<Trajectory> {
    sample_grid(t_end, samples, ModelTag::HgEffective, |t| {
        h.propagate_exact(psi0, t)
    })
}

fn sample_grid<F: Fn(f64) -> TwoLevelState>(
    t_end: f64,
    samples: usize,
    model: ModelTag,
    state_at: F,
) -> Result<Trajectory> {
    if !(t_end.is_finite() && t_end > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "t_end must be finite and > 0, got {t_end}"
        )));
    }
    if samples < 3 {
        return Err(Error::InvalidParameter(format!(
            "need at least 3 samples, got {samples}"
        )));
    }
    let mut times = Vec::with_capacity(samples);
    let mut p_target = Vec::with_capacity(samples);
    let mut norm_error = Vec::with_capacity(samples);
    for k in 0..samples {
        let t = t_end * k as f64 / (samples - 1) as f64;
        let s = state_at(t);
        times.push(t);
        p_target.push(s.p_alpha().min(1.0 + 1e-12));
        norm_error.push((s.norm() - 1.0).abs());
    }
    Trajectory::new(times, p_target, norm_error, model)
}

/// Quadratic vertex through (t0,p0), (t1,p1), (t2,p2); Some only when the fit
/// is concave.
fn refine_quadratic(t: [f64; 3], p: [f64; 3]) -> Option<(f64, f64)> {
    let d1 = (p[1] - p[0]) / (t[1] - t[0]);
    let d2 = (p[2] - p[1]) / (t[2] - t[1]);
    let a = (d2 - d1) / (t[2] - t[0]);
    if !(a < 0.0) {
        return None;
    }
    let tv = ((t[0] + t[1]) / 2.0 - d1 / (2.0 * a)).clamp(t[0], t[2]);
    let pv = p[0] + d1 * (tv - t[0]) + a * (tv - t[0]) * (tv - t[1]);
    // the vertex of a concave fit cannot fall below the middle sample; cap
    // overshoot at the probability ceiling
    Some((tv, pv.min(1.0_f64.max(p[1]))))
}

fn peak_at(traj: &Trajectory, i: usize, t_floor: f64) -> PeakResult {
    if i == 0 || i + 1 >= traj.len() {
        return PeakResult { t_peak: traj.times[i], p_peak: traj.p_target[i], refined: false };
    }
    let t = [traj.times[i - 1], traj.times[i], traj.times[i + 1]];
    let p = [traj.p_target[i - 1], traj.p_target[i], traj.p_target[i + 1]];
    match refine_quadratic(t, p) {
        Some((tv, pv)) => PeakResult { t_peak: tv.max(t_floor), p_peak: pv, refined: true },
        None => PeakResult { t_peak: t[1], p_peak: p[1], refined: false },
    }
}

/// Global maximum of the sampled curve, quadratically refined when interior.
/// On ties the earliest sample wins, so a constant curve reports t = 0.
pub fn find_peak(traj: &Trajectory) -> Result<PeakResult> {
    find_peak_from(traj, 0)
}

/// As [`find_peak`] but ignoring samples before index `start`; the refined
/// time never falls below the first admitted sample. Used by scans that must
/// not report the initial point as a maximum.
pub fn find_peak_from(traj: &Trajectory, start: usize) -> Result<PeakResult> {
    if traj.len() < 3 {
        return Err(Error::InvalidParameter(format!(
            "peak location needs at least 3 samples, got {}",
            traj.len()
        )));
    }
    if start + 2 > traj.len() {
        return Err(Error::InvalidParameter(format!(
            "peak search start {start} leaves fewer than 2 of {} samples",
            traj.len()
        )));
    }
    let mut best = start;
    for i in start + 1..traj.len() {
        if traj.p_target[i] > traj.p_target[best] {
            best = i;
        }
    }
    Ok(peak_at(traj, best, traj.times[start]))
}

/// Earliest interior local maximum of the sampled curve, refined like
/// [`find_peak`]. Falls back to the larger endpoint (ties prefer t = 0) when
/// the curve is monotone. This is the measurement moment: the first time the
/// target population tops out, even when later peaks match its height.
pub fn find_first_peak(traj: &Trajectory) -> Result<PeakResult> {
    if traj.len() < 3 {
        return Err(Error::InvalidParameter(format!(
            "peak location needs at least 3 samples, got {}",
            traj.len()
        )));
    }
    let p = &traj.p_target;
    for i in 1..traj.len() - 1 {
        if p[i] >= p[i - 1] && p[i] > p[i + 1] {
            return Ok(peak_at(traj, i, traj.times[0]));
        }
    }
    let last = traj.len() - 1;
    let i = if p[last] > p[0] { last } else { 0 };
    Ok(peak_at(traj, i, traj.times[0]))
}

/// Earliest time the curve reaches `threshold`, linearly interpolated between
/// the bracketing samples; None when never reached.
pub fn first_hit_time(traj: &Trajectory, threshold: f64) -> Result<Option<f64>> {
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "threshold must lie in (0, 1], got {threshold}"
        )));
    }
    let p = &traj.p_target;
    for i in 0..traj.len() {
        if p[i] >= threshold {
            if i == 0 {
                return Ok(Some(traj.times[0]));
            }
            let (t0, t1) = (traj.times[i - 1], traj.times[i]);
            let (p0, p1) = (p[i - 1], p[i]);
            return Ok(Some(t0 + (threshold - p0) * (t1 - t0) / (p1 - p0)));
        }
    }
    Ok(None)
}
