//! Sweep harnesses over the two-level search models, power-law fitting, and
//! deterministic CSV/JSON table emission.
//!
//! Every harness evolves closed forms on fixed 2001-point grids, so repeated
//! runs with the same inputs are byte-identical, independent of how many
//! workers execute the sweep.

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::dynamics::{
    closed_form_trajectory, exact_trajectory, find_first_peak, find_peak, find_peak_from,
    first_hit_time, Trajectory,
};
use crate::error::{Error, Result};
use crate::grover::{grover_success, optimal_iterations};
use crate::search::{build_hg_effective, effective_params, DriveParams, EffectiveTwoLevel};
use crate::state::TwoLevelState;

/// Samples per evolved trajectory; matches the integrator's sampling cap.
pub const SCAN_SAMPLES: usize = 2001;

/// Initial state for a resonance scan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanInitial {
    /// The search starting point (overlap x on the target level).
    Uniform,
    /// Pure complement (0, 1); exposes the textbook detuning response.
    PureBeta,
}

impl ScanInitial {
    fn state(&self, x: f64) -> Result<TwoLevelState> {
        match self {
            ScanInitial::Uniform => TwoLevelState::from_overlap(x),
            ScanInitial::PureBeta => Ok(TwoLevelState::pure_beta()),
        }
    }

    fn name(&self) -> &'static str {
        match self {
            ScanInitial::Uniform => "uniform",
            ScanInitial::PureBeta => "pure_beta",
        }
    }
}

/// Which two-level evolution a sweep uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TwoLevelModel {
    /// Static Hamiltonian, exact propagator.
    HgEffective,
    /// Oscillating coupling driven at its resonance frequency, closed form.
    HlsResonant,
}

impl TwoLevelModel {
    fn name(&self) -> &'static str {
        match self {
            TwoLevelModel::HgEffective => "hg_effective",
            TwoLevelModel::HlsResonant => "hls_resonant",
        }
    }
}

/// How the coupling strength scales with the problem size.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EpsilonPolicy {
    Fixed(f64),
    /// epsilon = c * E / sqrt(n); the regime in which the sqrt(n) runtime law
    /// holds.
    CoverSqrtN(f64),
}

impl EpsilonPolicy {
    pub fn epsilon_for(&self, energy: f64, n: usize) -> f64 {
        match self {
            EpsilonPolicy::Fixed(eps) => *eps,
            EpsilonPolicy::CoverSqrtN(c) => c * energy / (n as f64).sqrt(),
        }
    }

    fn name(&self) -> String {
        match self {
            EpsilonPolicy::Fixed(eps) => format!("fixed:{eps}"),
            EpsilonPolicy::CoverSqrtN(c) => format!("c_over_sqrt_n:{c}"),
        }
    }
}

/// What counts as the runtime of one scaling point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopRule {
    /// Time of the first population maximum.
    PeakTime,
    /// First time the population reaches the threshold.
    Threshold(f64),
}

impl StopRule {
    fn name(&self) -> String {
        match self {
            StopRule::PeakTime => "peak_time".into(),
            StopRule::Threshold(p) => format!("threshold:{p}"),
        }
    }
}

/// Parameter record carried by every scan output; together with the axis
/// values it suffices to re-run the sweep bit-identically.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanMetadata {
    pub n: usize,
    pub energy: f64,
    pub epsilon: f64,
    /// Fixed phase in units of pi; absent when phase is the scanned axis.
    pub phi_pi: Option<f64>,
    /// Fixed drive frequency; absent when w is scanned or set per point.
    pub w: Option<f64>,
    pub model: String,
    pub initial: String,
    pub samples_per_point: usize,
}

/// One-axis sweep output: peak probability and peak time per axis value.
/// NaN entries mark points that were not evolved (see `valid`).
#[derive(Clone, Debug, PartialEq)]
pub struct ScanResult {
    pub axis_name: String,
    pub axis_values: Vec<f64>,
    pub p_peak: Vec<f64>,
    pub t_peak: Vec<f64>,
    /// Present for sweeps that can hit invalid drive parameters; `false`
    /// entries carry NaN peaks.
    pub valid: Option<Vec<bool>>,
    pub metadata: ScanMetadata,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingMetadata {
    pub energy: f64,
    pub policy: String,
    pub phi_pi: f64,
    pub model: String,
    pub stop: String,
    pub samples_per_point: usize,
}

/// Log-log least-squares fit of runtime against problem size.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalingFit {
    /// Sizes that produced a runtime, ascending.
    pub n_values: Vec<usize>,
    pub t_star: Vec<f64>,
    pub slope: f64,
    /// Intercept in log space: log(t_star) fitted as slope*log(n) + intercept.
    pub intercept: f64,
    pub r_squared: f64,
    /// Sizes dropped because the stop rule was never satisfied.
    pub excluded: Vec<usize>,
    pub metadata: ScalingMetadata,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompareMetadata {
    pub energy: f64,
    pub c: f64,
    pub samples_per_point: usize,
}

/// One size in the analog-vs-discrete comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct CompareRow {
    pub n: usize,
    pub analog_t_star: f64,
    pub analog_success: f64,
    /// analog_t_star / (pi sqrt(n) / (2 E)).
    pub analog_ratio: f64,
    pub grover_k: usize,
    pub grover_success: f64,
    /// grover_k / (pi sqrt(n) / 4).
    pub grover_ratio: f64,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompareTable {
    pub rows: Vec<CompareRow>,
    pub metadata: CompareMetadata,
}

/// Evolution horizon: 3 pi / (2 gamma) brackets at least one full transfer
/// extremum even off resonance.
fn horizon(gamma: f64) -> Result<f64> {
    let t = 1.5 * std::f64::consts::PI / gamma;
    if !t.is_finite() {
        return Err(Error::InvalidDrive {
            reason: "degenerate coupling: E*x + epsilon*e^(i*phi) = 0 admits no transfer".into(),
        });
    }
    Ok(t)
}

fn require_valid(eff: &EffectiveTwoLevel) -> Result<()> {
    if eff.valid {
        Ok(())
    } else {
        Err(Error::InvalidDrive {
            reason: eff
                .invalid_reason
                .clone()
                .unwrap_or_else(|| "drive parameters fail the validity inequalities".into()),
        })
    }
}

/// Peak response versus drive frequency at fixed (n, E, epsilon, phi).
///
/// The drive must satisfy the validity inequalities and the grid must be
/// strictly increasing and bracket the resonance frequency.
pub fn resonance_scan(
    n: usize,
    energy: f64,
    epsilon: f64,
    phi_pi: f64,
    w_grid: &[f64],
    initial: ScanInitial,
) -> Result<ScanResult> {
    if n < 2 {
        return Err(Error::DimensionTooSmall(n));
    }
    let x = 1.0 / (n as f64).sqrt();
    let d = DriveParams::from_phi_pi(energy, epsilon, phi_pi)?;
    let eff = effective_params(&d, x)?;
    require_valid(&eff)?;
    check_axis(w_grid)?;
    let (lo, hi) = (w_grid[0], w_grid[w_grid.len() - 1]);
    if !(lo <= eff.w_res && eff.w_res <= hi) {
        return Err(Error::InvalidParameter(format!(
            "w grid [{lo}, {hi}] does not cover the resonance frequency {}",
            eff.w_res
        )));
    }
    let psi0 = initial.state(x)?;
    let t_end = horizon(eff.gamma)?;
    let peaks: Vec<(f64, f64)> = w_grid
        .par_iter()
        .map(|w| {
            let traj = closed_form_trajectory(&eff, *w, &psi0, t_end, SCAN_SAMPLES)?;
            let peak = find_peak(&traj)?;
            Ok((peak.p_peak, peak.t_peak))
        })
        .collect::<Result<_>>()?;
    Ok(ScanResult {
        axis_name: "w".into(),
        axis_values: w_grid.to_vec(),
        p_peak: peaks.iter().map(|p| p.0).collect(),
        t_peak: peaks.iter().map(|p| p.1).collect(),
        valid: None,
        metadata: ScanMetadata {
            n,
            energy,
            epsilon,
            phi_pi: Some(phi_pi),
            w: None,
            model: "hls_closed_form".into(),
            initial: initial.name().into(),
            samples_per_point: SCAN_SAMPLES,
        },
    })
}

/// Peak transfer versus coupling phase (axis in units of pi), starting from
/// the uniform initial state, over the window (0, 3 pi/(2 gamma)] with the
/// start point excluded.
///
/// Under `HlsResonant`, grid points violating the validity inequalities are
/// recorded with `valid = false` and NaN peaks instead of failing the scan.
pub fn phase_scan(
    n: usize,
    energy: f64,
    epsilon: f64,
    phi_pi_grid: &[f64],
    model: TwoLevelModel,
) -> Result<ScanResult> {
    if n < 2 {
        return Err(Error::DimensionTooSmall(n));
    }
    check_axis(phi_pi_grid)?;
    let x = 1.0 / (n as f64).sqrt();
    struct Point {
        p: f64,
        t: f64,
        valid: bool,
    }
    let points: Vec<Point> = phi_pi_grid
        .par_iter()
        .map(|phi_pi| {
            let d = DriveParams::from_phi_pi(energy, epsilon, *phi_pi)?;
            let eff = effective_params(&d, x)?;
            let psi0 = TwoLevelState::from_overlap(x)?;
            match model {
                TwoLevelModel::HgEffective => {
                    let t_end = horizon(eff.gamma)?;
                    let h = build_hg_effective(&eff);
                    let traj = exact_trajectory(&h, &psi0, t_end, SCAN_SAMPLES)?;
                    let peak = find_peak_from(&traj, 1)?;
                    Ok(Point { p: peak.p_peak, t: peak.t_peak, valid: true })
                }
                TwoLevelModel::HlsResonant => {
                    if !eff.valid {
                        return Ok(Point { p: f64::NAN, t: f64::NAN, valid: false });
                    }
                    let t_end = horizon(eff.gamma)?;
                    let traj =
                        closed_form_trajectory(&eff, eff.w_res, &psi0, t_end, SCAN_SAMPLES)?;
                    let peak = find_peak_from(&traj, 1)?;
                    Ok(Point { p: peak.p_peak, t: peak.t_peak, valid: true })
                }
            }
        })
        .collect::<Result<_>>()?;
    Ok(ScanResult {
        axis_name: "phi_over_pi".into(),
        axis_values: phi_pi_grid.to_vec(),
        p_peak: points.iter().map(|p| p.p).collect(),
        t_peak: points.iter().map(|p| p.t).collect(),
        valid: match model {
            TwoLevelModel::HgEffective => None,
            TwoLevelModel::HlsResonant => Some(points.iter().map(|p| p.valid).collect()),
        },
        metadata: ScanMetadata {
            n,
            energy,
            epsilon,
            phi_pi: None,
            w: None,
            model: model.name().into(),
            initial: "uniform".into(),
            samples_per_point: SCAN_SAMPLES,
        },
    })
}

/// Runtime-versus-size study: measures t_star per size and fits
/// log(t_star) = slope*log(n) + intercept.
///
/// Needs at least 4 sizes, strictly increasing, spanning at least 3 octaves.
/// Sizes whose stop rule is never met are excluded from the fit and reported;
/// the fit itself then still needs 4 surviving points.
pub fn scaling_study(
    n_list: &[usize],
    energy: f64,
    policy: EpsilonPolicy,
    phi_pi: f64,
    model: TwoLevelModel,
    stop: StopRule,
) -> Result<ScalingFit> {
    check_n_list(n_list)?;
    let runtimes: Vec<Option<f64>> = n_list
        .par_iter()
        .map(|&n| {
            let traj = scaling_trajectory(n, energy, &policy, phi_pi, model)?;
            let t_star = match stop {
                StopRule::PeakTime => Some(find_first_peak(&traj)?.t_peak),
                StopRule::Threshold(p) => first_hit_time(&traj, p)?,
            };
            if let Some(t) = t_star {
                if !(t > 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "stop rule already satisfied at t = 0 for n = {n}; \
                         raise the threshold above the initial population 1/n"
                    )));
                }
            }
            Ok(t_star)
        })
        .collect::<Result<_>>()?;

    let mut n_values = Vec::new();
    let mut t_star = Vec::new();
    let mut excluded = Vec::new();
    for (&n, t) in n_list.iter().zip(&runtimes) {
        match t {
            Some(t) => {
                n_values.push(n);
                t_star.push(*t);
            }
            None => excluded.push(n),
        }
    }
    if n_values.len() < 4 {
        return Err(Error::FitTooFewPoints { points: n_values.len() });
    }
    let ns: Vec<f64> = n_values.iter().map(|&n| n as f64).collect();
    let (slope, intercept, r_squared) = fit_log_log(&ns, &t_star)?;
    Ok(ScalingFit {
        n_values,
        t_star,
        slope,
        intercept,
        r_squared,
        excluded,
        metadata: ScalingMetadata {
            energy,
            policy: policy.name(),
            phi_pi,
            model: model.name().into(),
            stop: stop.name(),
            samples_per_point: SCAN_SAMPLES,
        },
    })
}

fn scaling_trajectory(
    n: usize,
    energy: f64,
    policy: &EpsilonPolicy,
    phi_pi: f64,
    model: TwoLevelModel,
) -> Result<Trajectory> {
    if n < 2 {
        return Err(Error::DimensionTooSmall(n));
    }
    let x = 1.0 / (n as f64).sqrt();
    let eps = policy.epsilon_for(energy, n);
    let d = DriveParams::from_phi_pi(energy, eps, phi_pi)?;
    let eff = effective_params(&d, x)?;
    let psi0 = TwoLevelState::from_overlap(x)?;
    match model {
        TwoLevelModel::HgEffective => {
            let t_end = horizon(eff.gamma)?;
            exact_trajectory(&build_hg_effective(&eff), &psi0, t_end, SCAN_SAMPLES)
        }
        TwoLevelModel::HlsResonant => {
            require_valid(&eff)?;
            let t_end = horizon(eff.gamma)?;
            closed_form_trajectory(&eff, eff.w_res, &psi0, t_end, SCAN_SAMPLES)
        }
    }
}

/// Analog peak times against the discrete iteration count, size by size,
/// both normalized by their asymptotic laws pi*sqrt(n)/(2E) and pi*sqrt(n)/4.
pub fn compare_discrete(n_list: &[usize], energy: f64, c: f64) -> Result<CompareTable> {
    check_n_list(n_list)?;
    let rows: Vec<CompareRow> = n_list
        .par_iter()
        .map(|&n| {
            let traj = scaling_trajectory(
                n,
                energy,
                &EpsilonPolicy::CoverSqrtN(c),
                1.0,
                TwoLevelModel::HgEffective,
            )?;
            let peak = find_first_peak(&traj)?;
            let sqrt_n = (n as f64).sqrt();
            let analog_baseline = std::f64::consts::PI * sqrt_n / (2.0 * energy);
            let k = optimal_iterations(n);
            let grover_baseline = std::f64::consts::PI * sqrt_n / 4.0;
            let note = if n == 2 {
                "iteration-count tie: k = 0 and k = 1 both reach success 1/2".into()
            } else {
                String::new()
            };
            Ok(CompareRow {
                n,
                analog_t_star: peak.t_peak,
                analog_success: peak.p_peak,
                analog_ratio: peak.t_peak / analog_baseline,
                grover_k: k,
                grover_success: grover_success(n, k),
                grover_ratio: k as f64 / grover_baseline,
                note,
            })
        })
        .collect::<Result<_>>()?;
    Ok(CompareTable {
        rows,
        metadata: CompareMetadata { energy, c, samples_per_point: SCAN_SAMPLES },
    })
}

fn check_axis(grid: &[f64]) -> Result<()> {
    if grid.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("axis values must be finite".into()));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParameter(
            "axis values must be strictly increasing".into(),
        ));
    }
    if grid.is_empty() {
        return Err(Error::InvalidParameter("axis grid is empty".into()));
    }
    Ok(())
}

fn check_n_list(n_list: &[usize]) -> Result<()> {
    if n_list.len() < 4 {
        return Err(Error::FitTooFewPoints { points: n_list.len() });
    }
    if n_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter(
            "size list must be strictly increasing".into(),
        ));
    }
    let (min, max) = (n_list[0], n_list[n_list.len() - 1]);
    if (max as f64) < 8.0 * min as f64 {
        return Err(Error::FitSpanTooNarrow { min, max });
    }
    Ok(())
}

/// Ordinary least squares of log(y) against log(x). Returns
/// (slope, intercept, r_squared); all inputs must be positive.
pub fn fit_log_log(x: &[f64], y: &[f64]) -> Result<(f64, f64, f64)> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch { left: x.len(), right: y.len() });
    }
    if x.len() < 2 {
        return Err(Error::FitTooFewPoints { points: x.len() });
    }
    if x.iter().chain(y).any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(Error::InvalidParameter(
            "log-log fit needs positive finite data".into(),
        ));
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|v| (v - mx) * (v - mx)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter(
            "log-log fit needs at least two distinct x values".into(),
        ));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = ly.iter().map(|v| (v - my) * (v - my)).sum();
    let ss_res: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(a, b)| {
            let r = b - (slope * a + intercept);
            r * r
        })
        .sum();
    let r_squared = if ss_tot == 0.0 { 1.0 } else { (1.0 - ss_res / ss_tot).clamp(0.0, 1.0) };
    Ok((slope, intercept, r_squared))
}

/// Output format for [`emit_table`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Json,
}

/// Tables that know how to render themselves; CSV floats carry 17 significant
/// digits so values round-trip exactly, and JSON is emitted with sorted keys.
/// Re-rendering the same value is byte-identical.
pub trait Emit {
    fn write_csv(&self, w: &mut dyn Write) -> std::io::Result<()>;
    fn json_value(&self) -> Value;
}

/// 17 significant digits; enough to reconstruct the exact f64. NaN marks
/// points that were not evolved.
fn fmt17(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else {
        format!("{v:.16e}")
    }
}

fn float_column(values: &[f64]) -> Value {
    Value::Array(values.iter().map(|v| Value::from(*v)).collect())
}

impl Emit for ScanResult {
    fn write_csv(&self, w: &mut dyn Write) -> std::io::Result<()> {
        if self.valid.is_some() {
            writeln!(w, "{},p_peak,t_peak,valid", self.axis_name)?;
        } else {
            writeln!(w, "{},p_peak,t_peak", self.axis_name)?;
        }
        for i in 0..self.axis_values.len() {
            match &self.valid {
                Some(valid) => writeln!(
                    w,
                    "{},{},{},{}",
                    fmt17(self.axis_values[i]),
                    fmt17(self.p_peak[i]),
                    fmt17(self.t_peak[i]),
                    valid[i]
                )?,
                None => writeln!(
                    w,
                    "{},{},{}",
                    fmt17(self.axis_values[i]),
                    fmt17(self.p_peak[i]),
                    fmt17(self.t_peak[i])
                )?,
            }
        }
        Ok(())
    }

    fn json_value(&self) -> Value {
        let mut columns = serde_json::Map::new();
        columns.insert(self.axis_name.clone(), float_column(&self.axis_values));
        columns.insert("p_peak".into(), float_column(&self.p_peak));
        columns.insert("t_peak".into(), float_column(&self.t_peak));
        if let Some(valid) = &self.valid {
            columns.insert(
                "valid".into(),
                Value::Array(valid.iter().map(|v| Value::from(*v)).collect()),
            );
        }
        json!({
            "kind": "scan",
            "metadata": serde_json::to_value(&self.metadata).expect("plain struct"),
            "columns": Value::Object(columns),
        })
    }
}

impl Emit for ScalingFit {
    fn write_csv(&self, w: &mut dyn Write) -> std::io::Result<()> {
        writeln!(w, "n,t_star,slope,intercept,r_squared")?;
        let rows = self
            .n_values
            .iter()
            .zip(self.t_star.iter().map(|t| *t))
            .chain(self.excluded.iter().zip(std::iter::repeat(f64::NAN)));
        let mut rows: Vec<(usize, f64)> = rows.map(|(n, t)| (*n, t)).collect();
        rows.sort_by_key(|r| r.0);
        for (n, t) in rows {
            writeln!(
                w,
                "{n},{},{},{},{}",
                fmt17(t),
                fmt17(self.slope),
                fmt17(self.intercept),
                fmt17(self.r_squared)
            )?;
        }
        Ok(())
    }

    fn json_value(&self) -> Value {
        json!({
            "kind": "scaling_fit",
            "metadata": serde_json::to_value(&self.metadata).expect("plain struct"),
            "n_values": self.n_values,
            "t_star": float_column(&self.t_star),
            "slope": Value::from(self.slope),
            "intercept": Value::from(self.intercept),
            "r_squared": Value::from(self.r_squared),
            "excluded": self.excluded,
        })
    }
}

impl Emit for CompareTable {
    fn write_csv(&self, w: &mut dyn Write) -> std::io::Result<()> {
        writeln!(
            w,
            "n,analog_t_star,analog_success,analog_ratio,grover_k,grover_success,grover_ratio,note"
        )?;
        for r in &self.rows {
            writeln!(
                w,
                "{},{},{},{},{},{},{},{}",
                r.n,
                fmt17(r.analog_t_star),
                fmt17(r.analog_success),
                fmt17(r.analog_ratio),
                r.grover_k,
                fmt17(r.grover_success),
                fmt17(r.grover_ratio),
                r.note
            )?;
        }
        Ok(())
    }

    fn json_value(&self) -> Value {
        json!({
            "kind": "compare",
            "metadata": serde_json::to_value(&self.metadata).expect("plain struct"),
            "columns": {
                "n": self.rows.iter().map(|r| r.n).collect::<Vec<_>>(),
                "analog_t_star": float_column(
                    &self.rows.iter().map(|r| r.analog_t_star).collect::<Vec<_>>()),
                "analog_success": float_column(
                    &self.rows.iter().map(|r| r.analog_success).collect::<Vec<_>>()),
                "analog_ratio": float_column(
                    &self.rows.iter().map(|r| r.analog_ratio).collect::<Vec<_>>()),
                "grover_k": self.rows.iter().map(|r| r.grover_k).collect::<Vec<_>>(),
                "grover_success": float_column(
                    &self.rows.iter().map(|r| r.grover_success).collect::<Vec<_>>()),
                "grover_ratio": float_column(
                    &self.rows.iter().map(|r| r.grover_ratio).collect::<Vec<_>>()),
                "note": self.rows.iter().map(|r| r.note.clone()).collect::<Vec<_>>(),
            },
        })
    }
}

impl Emit for Trajectory {
    fn write_csv(&self, w: &mut dyn Write) -> std::io::Result<()> {
        writeln!(w, "t,p_target,norm_error")?;
        for i in 0..self.times.len() {
            writeln!(
                w,
                "{},{},{}",
                fmt17(self.times[i]),
                fmt17(self.p_target[i]),
                fmt17(self.norm_error[i])
            )?;
        }
        Ok(())
    }

    fn json_value(&self) -> Value {
        json!({
            "kind": "trajectory",
            "model": self.model.as_str(),
            "columns": {
                "t": float_column(&self.times),
                "p_target": float_column(&self.p_target),
                "norm_error": float_column(&self.norm_error),
            },
        })
    }
}

/// Renders a table into the writer; never partial on success.
pub fn emit_to_writer(
    table: &dyn Emit,
    format: TableFormat,
    w: &mut dyn Write,
) -> std::io::Result<()> {
    match format {
        TableFormat::Csv => table.write_csv(w),
        TableFormat::Json => {
            let s = serde_json::to_string_pretty(&table.json_value())
                .expect("tables serialize infallibly");
            w.write_all(s.as_bytes())?;
            w.write_all(b"\n")
        }
    }
}

/// Renders a table to a string (the exact bytes [`emit_table`] would write).
pub fn emit_to_string(table: &dyn Emit, format: TableFormat) -> String {
    let mut buf = Vec::new();
    emit_to_writer(table, format, &mut buf).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("tables are UTF-8")
}

/// Writes a table to a file, reporting the path on failure.
pub fn emit_table(table: &dyn Emit, format: TableFormat, path: &Path) -> Result<()> {
    let io_err = |source| Error::Io { path: path.display().to_string(), source };
    let mut file = std::fs::File::create(path).map_err(io_err)?;
    emit_to_writer(table, format, &mut file).map_err(io_err)?;
    file.flush().map_err(io_err)
}
