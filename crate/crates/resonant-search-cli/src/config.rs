//! Run configuration: flag values, JSON config files, and the merge of the
//! two into one validated, echoable config.

use std::fmt;
use std::path::PathBuf;

use clap::ValueEnum;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    /// Full n x n static Hamiltonian, integrated numerically.
    HgDense,
    /// Exact 2x2 reduction of the static Hamiltonian.
    HgEffective,
    /// Driven two-level model with an oscillating coupling.
    Hls,
    /// Driven model preset: phase pi, uniform start (the default).
    Iontrap,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

/// Coupling strength: either a number or a size-dependent policy.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EpsilonSpec {
    Value(f64),
    Policy(PolicySpec),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PolicySpec {
    COverSqrtN { c: f64 },
}

impl EpsilonSpec {
    pub fn parse(s: &str) -> Result<Self, String> {
        if let Some(v) = s.strip_prefix("fixed:") {
            let v: f64 = v.parse().map_err(|_| format!("bad fixed epsilon: {v}"))?;
            return Ok(EpsilonSpec::Value(v));
        }
        if let Some(c) = s.strip_prefix("c-over-sqrt-n:") {
            let c: f64 = c.parse().map_err(|_| format!("bad policy constant: {c}"))?;
            return Ok(EpsilonSpec::Policy(PolicySpec::COverSqrtN { c }));
        }
        s.parse()
            .map(EpsilonSpec::Value)
            .map_err(|_| format!("epsilon must be a number, fixed:<v>, or c-over-sqrt-n:<c>, got {s}"))
    }

    pub fn resolve(&self, energy: f64, n: usize) -> f64 {
        self.policy().epsilon_for(energy, n)
    }

    pub fn policy(&self) -> resonant_search::EpsilonPolicy {
        match self {
            EpsilonSpec::Value(v) => resonant_search::EpsilonPolicy::Fixed(*v),
            EpsilonSpec::Policy(PolicySpec::COverSqrtN { c }) => {
                resonant_search::EpsilonPolicy::CoverSqrtN(*c)
            }
        }
    }
}

/// Drive frequency: a number or the keyword `resonant`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WSpec {
    Resonant,
    Value(f64),
}

impl WSpec {
    pub fn parse(s: &str) -> Result<Self, String> {
        keyword_or_number(s, "resonant").map(|v| match v {
            None => WSpec::Resonant,
            Some(v) => WSpec::Value(v),
        })
    }
}

/// Time quantity: a number or the keyword `auto`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AutoOr {
    Auto,
    Value(f64),
}

impl AutoOr {
    pub fn parse(s: &str) -> Result<Self, String> {
        keyword_or_number(s, "auto").map(|v| match v {
            None => AutoOr::Auto,
            Some(v) => AutoOr::Value(v),
        })
    }
}

fn keyword_or_number(s: &str, keyword: &str) -> Result<Option<f64>, String> {
    if s == keyword {
        return Ok(None);
    }
    s.parse()
        .map(Some)
        .map_err(|_| format!("expected a number or \"{keyword}\", got {s}"))
}

macro_rules! keyword_serde {
    ($ty:ident, $keyword:literal) => {
        impl Serialize for $ty {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                match self {
                    $ty::Value(v) => s.serialize_f64(*v),
                    _ => s.serialize_str($keyword),
                }
            }
        }

        impl<'de> Deserialize<'de> for $ty {
            fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                #[derive(Deserialize)]
                #[serde(untagged)]
                enum Raw {
                    Num(f64),
                    Str(String),
                }
                match Raw::deserialize(d)? {
                    Raw::Num(v) => Ok($ty::Value(v)),
                    Raw::Str(s) => {
                        $ty::parse(&s).map_err(<D::Error as serde::de::Error>::custom)
                    }
                }
            }
        }
    };
}

keyword_serde!(WSpec, "resonant");
keyword_serde!(AutoOr, "auto");

/// One JSON object mirroring the flag names; any subset of fields.
/// Flags override file values.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub n: Option<usize>,
    pub target: Option<usize>,
    pub energy: Option<f64>,
    pub epsilon: Option<EpsilonSpec>,
    pub phi_pi: Option<f64>,
    pub model: Option<Model>,
    pub w: Option<WSpec>,
    pub t_end: Option<AutoOr>,
    pub dt: Option<AutoOr>,
    pub threshold: Option<f64>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
}

impl FileConfig {
    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::config(format!("bad config {}: {e}", path.display())))
    }
}

/// The merged, validated configuration every command runs from. `n` stays
/// optional here because the sweep commands take sizes from `--n-list`.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub target: usize,
    pub energy: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<EpsilonSpec>,
    pub phi_pi: f64,
    pub model: Model,
    pub w: WSpec,
    pub t_end: AutoOr,
    pub dt: AutoOr,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    /// Merges flags over file values over defaults, then checks the
    /// invariants shared by every command.
    pub fn merge(flags: &crate::CommonFlags) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        let cfg = RunConfig {
            n: flags.n.or(file.n),
            target: flags.target.or(file.target).unwrap_or(0),
            energy: flags.energy.or(file.energy).unwrap_or(1.0),
            epsilon: flags.epsilon.or(file.epsilon),
            phi_pi: flags.phi_pi.or(file.phi_pi).unwrap_or(1.0),
            model: flags.model.or(file.model).unwrap_or(Model::Iontrap),
            w: flags.w.or(file.w).unwrap_or(WSpec::Resonant),
            t_end: flags.t_end.or(file.t_end).unwrap_or(AutoOr::Auto),
            dt: flags.dt.or(file.dt).unwrap_or(AutoOr::Auto),
            threshold: flags.threshold.or(file.threshold),
            output: flags.out.clone().or(file.output),
            format: flags.format.or(file.format).unwrap_or(Format::Csv),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        if let Some(n) = self.n {
            if n < 2 {
                return Err(CliError::config(format!("n must be at least 2, got {n}")));
            }
            if self.target >= n {
                return Err(CliError::config(format!(
                    "target must lie in 0..{n}, got {}",
                    self.target
                )));
            }
        }
        if !(self.energy > 0.0 && self.energy.is_finite()) {
            return Err(CliError::config(format!(
                "energy must be finite and > 0, got {}",
                self.energy
            )));
        }
        if !self.phi_pi.is_finite() {
            return Err(CliError::config(format!("phi_pi must be finite, got {}", self.phi_pi)));
        }
        if let Some(EpsilonSpec::Value(v)) = self.epsilon {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(CliError::config(format!(
                    "epsilon must be finite and >= 0, got {v}"
                )));
            }
        }
        if let Some(p) = self.threshold {
            if !(p > 0.0 && p <= 1.0) {
                return Err(CliError::config(format!(
                    "threshold must lie in (0, 1], got {p}"
                )));
            }
        }
        if let AutoOr::Value(t) = self.t_end {
            if !(t > 0.0 && t.is_finite()) {
                return Err(CliError::config(format!(
                    "t_end must be finite and > 0 (or \"auto\"), got {t}"
                )));
            }
        }
        if let AutoOr::Value(dt) = self.dt {
            if !(dt > 0.0 && dt.is_finite()) {
                return Err(CliError::config(format!(
                    "dt must be finite and > 0 (or \"auto\"), got {dt}"
                )));
            }
        }
        if self.model == Model::Iontrap && self.phi_pi != 1.0 {
            return Err(CliError::config(format!(
                "model iontrap fixes the coupling phase at pi; \
                 use --model hls to set phi_pi = {}",
                self.phi_pi
            )));
        }
        Ok(())
    }

    /// The size this run operates on; errors when absent.
    pub fn require_n(&self) -> Result<usize, CliError> {
        self.n
            .ok_or_else(|| CliError::config("n is required (flag --n or config field n)"))
    }

    /// Coupling strength for the given size; errors when unset.
    pub fn epsilon_value(&self, n: usize) -> Result<f64, CliError> {
        let spec = self.epsilon.ok_or_else(|| {
            CliError::config(
                "epsilon is required (a number, fixed:<v>, or c-over-sqrt-n:<c>)",
            )
        })?;
        let v = spec.resolve(self.energy, n);
        if !(v >= 0.0 && v.is_finite()) {
            return Err(CliError::config(format!(
                "epsilon resolves to {v}; it must be finite and >= 0"
            )));
        }
        Ok(v)
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Model::HgDense => "hg-dense",
            Model::HgEffective => "hg-effective",
            Model::Hls => "hls",
            Model::Iontrap => "iontrap",
        };
        f.write_str(s)
    }
}
