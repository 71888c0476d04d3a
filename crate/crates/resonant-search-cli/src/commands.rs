//! The five commands. Each resolves its configuration, runs the library, and
//! returns a [`Report`] for the output layer.

use std::f64::consts::PI;

use resonant_search::experiments::SCAN_SAMPLES;
use resonant_search::{
    build_hg_dense, build_hg_effective, closed_form_trajectory, compare_discrete,
    effective_params, exact_trajectory, find_first_peak, first_hit_time, grover_run,
    hg_spectral_radius, integrate, optimal_iterations, phase_scan, resonance_scan,
    scaling_study, ConstantDense, ConstantTwoLevel, DriveParams, DrivenTwoLevel,
    EffectiveTwoLevel, EpsilonPolicy, ScanInitial, SearchInstance, StepRule, StopRule,
    Trajectory, TwoLevelModel, TwoLevelState,
};
use serde_json::{json, Value};

use crate::config::{AutoOr, EpsilonSpec, Model, RunConfig, WSpec};
use crate::output::{GroverTable, Report};
use crate::{Axis, CliError, Initial, StopSpec};

/// The sweep window 3 pi / (2 gamma) used when `t_end` is `auto`.
fn auto_t_end(eff: &EffectiveTwoLevel) -> Result<f64, CliError> {
    let t = 1.5 * PI / eff.gamma;
    if !t.is_finite() {
        return Err(CliError::config(
            "t_end cannot be chosen automatically: the effective coupling is zero; \
             pass --t-end explicitly",
        ));
    }
    Ok(t)
}

fn uniform_grid(min: f64, max: f64, steps: usize) -> Result<Vec<f64>, CliError> {
    if steps == 0 {
        return Err(CliError::config("steps must be at least 1, got 0"));
    }
    if !(min.is_finite() && max.is_finite() && min < max) {
        return Err(CliError::config(format!(
            "grid needs finite min < max, got [{min}, {max}]"
        )));
    }
    Ok((0..=steps).map(|k| min + (max - min) * k as f64 / steps as f64).collect())
}

pub fn cmd_simulate(cfg: &RunConfig) -> Result<Report, CliError> {
    let n = cfg.require_n()?;
    let epsilon = cfg.epsilon_value(n)?;
    let x = 1.0 / (n as f64).sqrt();
    let drive = DriveParams::from_phi_pi(cfg.energy, epsilon, cfg.phi_pi)?;
    let eff = effective_params(&drive, x)?;

    let driven = matches!(cfg.model, Model::Hls | Model::Iontrap);
    let w = match (driven, cfg.w) {
        (true, WSpec::Resonant) => {
            if !eff.valid {
                let reason = eff
                    .invalid_reason
                    .clone()
                    .unwrap_or_else(|| "drive parameters fail the validity inequalities".into());
                return Err(CliError::config(reason));
            }
            Some(eff.w_res)
        }
        (true, WSpec::Value(v)) => Some(v),
        // the static models have no drive frequency
        (false, _) => None,
    };

    let t_end = match cfg.t_end {
        AutoOr::Value(t) => t,
        AutoOr::Auto => auto_t_end(&eff)?,
    };

    let psi0 = TwoLevelState::from_overlap(x)?;
    let amps = [psi0.c_alpha, psi0.c_beta];
    let traj: Trajectory = match (cfg.model, cfg.dt) {
        (Model::Hls | Model::Iontrap, AutoOr::Auto) => {
            closed_form_trajectory(&eff, w.unwrap(), &psi0, t_end, SCAN_SAMPLES)?
        }
        (Model::Hls | Model::Iontrap, AutoOr::Value(dt)) => {
            let provider = DrivenTwoLevel::new(&eff, w.unwrap());
            integrate(&provider, &amps, 0, t_end, StepRule::Fixed(dt))?
        }
        (Model::HgEffective, AutoOr::Auto) => {
            exact_trajectory(&build_hg_effective(&eff), &psi0, t_end, SCAN_SAMPLES)?
        }
        (Model::HgEffective, AutoOr::Value(dt)) => {
            let provider = ConstantTwoLevel::new(&build_hg_effective(&eff));
            integrate(&provider, &amps, 0, t_end, StepRule::Fixed(dt))?
        }
        (Model::HgDense, rule) => {
            let inst = SearchInstance::uniform(n, cfg.target)?;
            let h = build_hg_dense(&inst, &drive)?;
            let provider =
                ConstantDense::with_frequency_scale(&h, hg_spectral_radius(&drive, x));
            let rule = match rule {
                AutoOr::Auto => StepRule::Auto,
                AutoOr::Value(dt) => StepRule::Fixed(dt),
            };
            integrate(&provider, inst.initial_vector().amplitudes(), cfg.target, t_end, rule)?
        }
    };

    let peak = find_first_peak(&traj)?;
    let mut summary = json!({
        "p_peak": peak.p_peak,
        "t_peak": peak.t_peak,
        "w": w,
        "t_end": t_end,
        "samples": traj.len(),
        "max_norm_error": traj.max_norm_error(),
        "effective": serde_json::to_value(&eff).expect("plain struct"),
    });
    if let Some(threshold) = cfg.threshold {
        summary["first_hit"] = match first_hit_time(&traj, threshold)? {
            Some(t) => Value::from(t),
            None => Value::Null,
        };
    }

    Ok(Report::new("simulate", traj).summary(summary))
}

pub fn cmd_scan(
    cfg: &RunConfig,
    axis: Axis,
    min: f64,
    max: f64,
    steps: usize,
    initial: Initial,
) -> Result<Report, CliError> {
    let n = cfg.require_n()?;
    let epsilon = cfg.epsilon_value(n)?;
    let grid = uniform_grid(min, max, steps)?;
    let table = match axis {
        Axis::W => {
            if !matches!(cfg.model, Model::Hls | Model::Iontrap) {
                return Err(CliError::config(format!(
                    "axis w sweeps the drive frequency, which model {} does not have; \
                     use --model hls or iontrap",
                    cfg.model
                )));
            }
            let initial = match initial {
                Initial::Uniform => ScanInitial::Uniform,
                Initial::PureBeta => ScanInitial::PureBeta,
            };
            resonance_scan(n, cfg.energy, epsilon, cfg.phi_pi, &grid, initial)?
        }
        Axis::Phi => {
            let model = match cfg.model {
                Model::HgEffective => TwoLevelModel::HgEffective,
                Model::Hls => TwoLevelModel::HlsResonant,
                other => {
                    return Err(CliError::config(format!(
                        "axis phi varies the coupling phase, which model {other} pins; \
                         use --model hg-effective or hls"
                    )));
                }
            };
            phase_scan(n, cfg.energy, epsilon, &grid, model)?
        }
    };
    Ok(Report::new("scan", table)
        .param("axis", axis.name())
        .param("min", min)
        .param("max", max)
        .param("steps", steps)
        .param("initial", initial.name()))
}

fn stop_echo(rule: StopRule) -> String {
    match rule {
        StopRule::PeakTime => "peak".into(),
        StopRule::Threshold(p) => format!("threshold:{p}"),
    }
}

pub fn cmd_scaling(
    cfg: &RunConfig,
    n_list: &[usize],
    policy: Option<EpsilonSpec>,
    stop: StopSpec,
) -> Result<Report, CliError> {
    let spec = policy.or(cfg.epsilon).ok_or_else(|| {
        CliError::config("a coupling policy is required: --policy fixed:<v> or c-over-sqrt-n:<c>")
    })?;
    let policy = spec.policy();
    let model = match cfg.model {
        Model::HgEffective => TwoLevelModel::HgEffective,
        Model::Hls | Model::Iontrap => TwoLevelModel::HlsResonant,
        Model::HgDense => {
            return Err(CliError::config(
                "scaling sweeps sizes past the dense-model limit; \
                 use --model hg-effective or hls",
            ));
        }
    };
    let stop_rule = match stop {
        StopSpec::Peak => StopRule::PeakTime,
        StopSpec::Threshold(p) => StopRule::Threshold(p),
        StopSpec::ConfigThreshold => StopRule::Threshold(cfg.threshold.ok_or_else(|| {
            CliError::config("--stop threshold needs a value: --stop threshold:<p> or --threshold")
        })?),
    };
    let fit = scaling_study(n_list, cfg.energy, policy, cfg.phi_pi, model, stop_rule)?;
    let mut report = Report::new("scaling", fit)
        .param("n_list", n_list.to_vec())
        .param("policy", serde_json::to_value(spec).expect("plain enum"))
        .param("stop", stop_echo(stop_rule));
    if let EpsilonPolicy::Fixed(_) = policy {
        report = report.note(
            "fixed-epsilon runtime is size-independent; scaling the coupling as \
             c/sqrt(n) is what produces the square-root law",
        );
    }
    Ok(report)
}

pub fn cmd_grover(cfg: &RunConfig, k: Option<usize>, optimal: bool) -> Result<Report, CliError> {
    let n = cfg.require_n()?;
    // --optimal is also the default when --k is absent
    let iterations = match (k, optimal) {
        (Some(k), false) => k,
        _ => optimal_iterations(n),
    };
    let run = grover_run(n, cfg.target, iterations)?;
    Ok(Report::new("grover", GroverTable(run))
        .param("k", iterations)
        .param("optimal", k.is_none() || optimal))
}

pub fn cmd_compare(cfg: &RunConfig, n_list: &[usize], c: f64) -> Result<Report, CliError> {
    let table = compare_discrete(n_list, cfg.energy, c)?;
    Ok(Report::new("compare", table).param("n_list", n_list.to_vec()).param("c", c))
}
