use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::link::{ErrorMode, Scenario, Thresholds};
use crate::optimizer::BcdConfig;
use crate::units::db_to_linear;

use super::ExperimentError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentId {
    Fig2,
    #[default]
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Theorems,
}

impl ExperimentId {
    pub const ALL: [ExperimentId; 7] = [
        ExperimentId::Fig2,
        ExperimentId::Fig3,
        ExperimentId::Fig4,
        ExperimentId::Fig5,
        ExperimentId::Fig6,
        ExperimentId::Fig7,
        ExperimentId::Theorems,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentId::Fig2 => "fig2",
            ExperimentId::Fig3 => "fig3",
            ExperimentId::Fig4 => "fig4",
            ExperimentId::Fig5 => "fig5",
            ExperimentId::Fig6 => "fig6",
            ExperimentId::Fig7 => "fig7",
            ExperimentId::Theorems => "theorems",
        }
    }

    /// Axes a sweep entry may target for this experiment.
    pub fn sweep_axes(self) -> &'static [SweepAxis] {
        match self {
            ExperimentId::Fig2 => &[],
            ExperimentId::Fig3 | ExperimentId::Fig4 | ExperimentId::Theorems => {
                &[SweepAxis::PM, SweepAxis::DK]
            }
            ExperimentId::Fig5 => &[SweepAxis::ZEveDb],
            ExperimentId::Fig6 => &[SweepAxis::PSigmaMw],
            ExperimentId::Fig7 => &[SweepAxis::ZEveDb, SweepAxis::PSigmaMw],
        }
    }

    /// Eavesdropper gain (dB) and budget (mW) unless the config says otherwise.
    fn operating_point(self) -> (f64, f64) {
        match self {
            ExperimentId::Fig5 => (-10.0, 3.0),
            ExperimentId::Fig6 => (-5.0, 10.0),
            _ => (-10.0, 10.0),
        }
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExperimentId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ExperimentId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| {
                let known: Vec<_> = ExperimentId::ALL.iter().map(|id| id.as_str()).collect();
                format!("unknown experiment '{s}', expected one of {}", known.join(", "))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SweepAxis {
    #[serde(rename = "p_m")]
    PM,
    #[serde(rename = "d_k")]
    DK,
    #[serde(rename = "z_e_db")]
    ZEveDb,
    #[serde(rename = "p_sigma_mw")]
    PSigmaMw,
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepAxis::PM => "p_m",
            SweepAxis::DK => "d_k",
            SweepAxis::ZEveDb => "z_e_db",
            SweepAxis::PSigmaMw => "p_sigma_mw",
        })
    }
}

/// One swept axis: either an explicit `values` list or an evenly spaced
/// `start..=stop` range with `steps` points. Missing range fields take the
/// axis defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stop: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
}

/// Physical parameters in interface units: gains in dB, powers in mW.
/// Absent gain, budget and message length follow the experiment's operating
/// point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub z_bob_db: f64,
    pub z_eve_db: Option<f64>,
    pub sigma2_mw: f64,
    pub n: u32,
    pub d_m: Option<u32>,
    pub p_sigma_mw: Option<f64>,
    pub thresholds: Thresholds,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            z_bob_db: 0.0,
            z_eve_db: None,
            sigma2_mw: 1.0,
            n: 64,
            d_m: None,
            p_sigma_mw: None,
            thresholds: Thresholds::default(),
        }
    }
}

/// Algorithm settings exposed in the config file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BcdSettings {
    pub xi: f64,
    pub t_max: usize,
    pub subproblem_tol: f64,
    pub init: Option<(f64, f64)>,
}

impl Default for BcdSettings {
    fn default() -> Self {
        let d = BcdConfig::default();
        BcdSettings {
            xi: d.xi,
            t_max: d.t_max,
            subproblem_tol: d.subproblem_tol,
            init: d.init,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment_id: ExperimentId,
    pub scenario: ScenarioConfig,
    pub sweeps: Vec<SweepSpec>,
    /// Key lengths of the power-pair sweep (fig2).
    pub key_lengths: Vec<u32>,
    /// Message lengths of the BCD path runs (fig4).
    pub message_lengths: Vec<u32>,
    /// Grid spacing of the power-pair sweep (fig2), mW.
    pub power_step_mw: f64,
    pub bcd: BcdSettings,
    pub mode: ErrorMode,
    /// Final bracket width of the baseline search, mW.
    pub baseline_tol: f64,
    /// Tolerance on second differences in the theorem checks.
    pub concavity_tol: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            experiment_id: ExperimentId::default(),
            scenario: ScenarioConfig::default(),
            sweeps: Vec::new(),
            key_lengths: vec![30, 60],
            message_lengths: vec![16, 24],
            power_step_mw: 0.05,
            bcd: BcdSettings::default(),
            mode: ErrorMode::Approx,
            baseline_tol: 1e-9,
            concavity_tol: 1e-7,
            output_dir: None,
        }
    }
}

pub const DEFAULT_SWEEP_POINTS: usize = 101;
pub const DEFAULT_POWER_POINTS: usize = 201;
pub const DEFAULT_FIG7_Z_EVE_DB: [f64; 4] = [-10.0, -7.0, -5.0, -3.0];

impl ExperimentConfig {
    pub fn for_experiment(id: ExperimentId) -> Self {
        ExperimentConfig {
            experiment_id: id,
            ..Default::default()
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self, ExperimentError> {
        serde_json::from_str(text).map_err(|e| ExperimentError::Config(format!("parse error: {e}")))
    }

    pub fn from_path(path: &Path) -> Result<Self, ExperimentError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ExperimentError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }

    /// Applies dotted `key=value` overrides. Values are parsed as JSON and
    /// fall back to plain strings, so `scenario.z_eve_db=-5` and
    /// `mode=exact` both work.
    pub fn with_overrides<S: AsRef<str>>(&self, overrides: &[S]) -> Result<Self, ExperimentError> {
        let mut doc = serde_json::to_value(self).map_err(|e| ExperimentError::Config(e.to_string()))?;
        for item in overrides {
            let item = item.as_ref();
            let (key, raw) = item
                .split_once('=')
                .ok_or_else(|| ExperimentError::Config(format!("override '{item}' is not key=value")))?;
            let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
            set_path(&mut doc, key, value)?;
        }
        serde_json::from_value(doc).map_err(|e| ExperimentError::Config(format!("override error: {e}")))
    }

    /// Scenario in linear units at the experiment's operating point.
    pub fn base_scenario(&self) -> Scenario {
        let (z_eve_db, p_sigma) = self.experiment_id.operating_point();
        let sc = &self.scenario;
        Scenario {
            z_bob: db_to_linear(sc.z_bob_db),
            z_eve: db_to_linear(sc.z_eve_db.unwrap_or(z_eve_db)),
            sigma2: sc.sigma2_mw,
            n: sc.n,
            d_m: sc.d_m.unwrap_or(16),
            p_sigma: sc.p_sigma_mw.unwrap_or(p_sigma),
            thresholds: sc.thresholds,
        }
    }

    pub fn z_eve_db(&self) -> f64 {
        self.scenario
            .z_eve_db
            .unwrap_or(self.experiment_id.operating_point().0)
    }

    pub fn bcd_config(&self) -> BcdConfig {
        BcdConfig {
            xi: self.bcd.xi,
            t_max: self.bcd.t_max,
            subproblem_tol: self.bcd.subproblem_tol,
            init: self.bcd.init,
            mode: self.mode,
        }
    }

    fn sweep_spec(&self, axis: SweepAxis) -> Option<&SweepSpec> {
        self.sweeps.iter().find(|s| s.axis == axis)
    }

    /// Sample points of `axis`, from the config or the axis defaults.
    pub fn axis_values(&self, axis: SweepAxis) -> Vec<f64> {
        let sc = self.base_scenario();
        let spec = self.sweep_spec(axis);
        if let Some(values) = spec.and_then(|s| s.values.clone()) {
            return values;
        }
        let (start, stop, steps) = match axis {
            SweepAxis::PM => (0.0, sc.p_sigma, DEFAULT_POWER_POINTS),
            SweepAxis::DK => {
                if spec.is_none() {
                    return (0..=sc.n).map(f64::from).collect();
                }
                (0.0, f64::from(sc.n), sc.n as usize + 1)
            }
            SweepAxis::ZEveDb => {
                if self.experiment_id == ExperimentId::Fig7 && spec.is_none() {
                    return DEFAULT_FIG7_Z_EVE_DB.to_vec();
                }
                (-10.0, -3.0, DEFAULT_SWEEP_POINTS)
            }
            SweepAxis::PSigmaMw => (0.5, 10.0, DEFAULT_SWEEP_POINTS),
        };
        let start = spec.and_then(|s| s.start).unwrap_or(start);
        let stop = spec.and_then(|s| s.stop).unwrap_or(stop);
        let steps = spec.and_then(|s| s.steps).unwrap_or(steps);
        crate::optimizer::search::linspace(start, stop, steps)
    }

    /// Every violated invariant; empty means the config is runnable.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        let sc = self.base_scenario();
        out.extend(sc.issues());
        let allowed = self.experiment_id.sweep_axes();
        for (i, spec) in self.sweeps.iter().enumerate() {
            if !allowed.contains(&spec.axis) {
                out.push(format!(
                    "sweeps[{i}]: axis {} is not swept by {}",
                    spec.axis, self.experiment_id
                ));
            }
            if self.sweeps[..i].iter().any(|s| s.axis == spec.axis) {
                out.push(format!("sweeps[{i}]: duplicate axis {}", spec.axis));
            }
            match &spec.values {
                Some(values) => {
                    if spec.start.is_some() || spec.stop.is_some() || spec.steps.is_some() {
                        out.push(format!("sweeps[{i}]: give either values or start/stop/steps"));
                    }
                    if values.is_empty() {
                        out.push(format!("sweeps[{i}]: values must not be empty"));
                    }
                }
                None => {
                    if spec.steps.is_some_and(|s| s < 2) {
                        out.push(format!("sweeps[{i}]: steps must be at least 2"));
                    }
                    if let (Some(a), Some(b)) = (spec.start, spec.stop) {
                        if a.partial_cmp(&b) != Some(std::cmp::Ordering::Less) {
                            out.push(format!("sweeps[{i}]: start must be below stop"));
                        }
                    }
                }
            }
        }
        for &axis in allowed {
            let values = self.axis_values(axis);
            if values.iter().any(|v| !v.is_finite()) {
                out.push(format!("{axis}: sweep values must be finite"));
                continue;
            }
            let (lo, hi) = match axis {
                SweepAxis::PM => (0.0, sc.p_sigma),
                SweepAxis::DK => (0.0, f64::from(sc.n)),
                SweepAxis::ZEveDb => (f64::NEG_INFINITY, self.scenario.z_bob_db),
                SweepAxis::PSigmaMw => (f64::MIN_POSITIVE, f64::INFINITY),
            };
            if let Some(bad) = values.iter().find(|&&v| v < lo || v > hi) {
                out.push(format!("{axis}: value {bad} outside [{lo}, {hi}]"));
            }
            let needs_even = matches!(
                (self.experiment_id, axis),
                (ExperimentId::Theorems, _) | (_, SweepAxis::PM)
            );
            if needs_even && values.len() < 3 {
                out.push(format!("{axis}: at least 3 points required"));
            }
        }
        if self.experiment_id == ExperimentId::Fig2 {
            if !(self.power_step_mw.is_finite() && self.power_step_mw > 0.0) {
                out.push(format!("power_step_mw must be positive, got {}", self.power_step_mw));
            }
            if self.key_lengths.is_empty() {
                out.push("key_lengths must not be empty".to_string());
            }
            if let Some(bad) = self.key_lengths.iter().find(|&&d| d > sc.n) {
                out.push(format!("key length {bad} exceeds n = {}", sc.n));
            }
        }
        if self.experiment_id == ExperimentId::Fig4 {
            if self.message_lengths.is_empty() {
                out.push("message_lengths must not be empty".to_string());
            }
            if let Some(bad) = self.message_lengths.iter().find(|&&d| d < 1 || d > sc.n) {
                out.push(format!("message length {bad} outside [1, n = {}]", sc.n));
            }
        }
        out.extend(self.bcd_config().issues());
        if !(self.baseline_tol.is_finite() && self.baseline_tol > 0.0) {
            out.push(format!("baseline_tol must be positive, got {}", self.baseline_tol));
        }
        if !(self.concavity_tol.is_finite() && self.concavity_tol >= 0.0) {
            out.push(format!("concavity_tol must be non-negative, got {}", self.concavity_tol));
        }
        out
    }
}

fn set_path(doc: &mut Value, key: &str, value: Value) -> Result<(), ExperimentError> {
    let mut node = doc;
    let parts: Vec<&str> = key.split('.').collect();
    for (i, part) in parts.iter().enumerate() {
        let obj = node
            .as_object_mut()
            .ok_or_else(|| ExperimentError::Config(format!("override '{key}': '{part}' has no fields")))?;
        if i + 1 == parts.len() {
            obj.insert((*part).to_string(), value);
            return Ok(());
        }
        node = obj
            .entry((*part).to_string())
            .or_insert_with(|| Value::Object(Default::default()));
        if node.is_null() {
            *node = Value::Object(Default::default());
        }
    }
    Err(ExperimentError::Config(format!("empty override key '{key}'")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_is_valid_defaults() {
        let cfg = ExperimentConfig::from_json_str("{}").unwrap();
        assert_eq!(cfg, ExperimentConfig::default());
        assert!(cfg.validate().is_empty());
        assert_eq!(cfg.base_scenario(), Scenario::default());
    }

    #[test]
    fn short_blocklength_is_reported() {
        let cfg = ExperimentConfig::from_json_str(r#"{"scenario": {"n": 5}}"#).unwrap();
        assert!(cfg.validate().iter().any(|m| m.contains("n >= 10 required")));
    }

    #[test]
    fn stronger_eavesdropper_is_reported() {
        let cfg = ExperimentConfig::from_json_str(r#"{"scenario": {"z_eve_db": 3}}"#).unwrap();
        assert!(cfg.validate().iter().any(|m| m.contains("exceeds z_bob")));
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(ExperimentConfig::from_json_str(r#"{"scenaro": {}}"#).is_err());
        assert!(ExperimentConfig::from_json_str(r#"{"bcd": {"mu": 1}}"#).is_err());
    }

    #[test]
    fn dotted_overrides_reach_nested_fields() {
        let cfg = ExperimentConfig::default()
            .with_overrides(&["scenario.z_eve_db=-5", "mode=exact", "bcd.t_max=7", "experiment_id=fig6"])
            .unwrap();
        assert_eq!(cfg.scenario.z_eve_db, Some(-5.0));
        assert_eq!(cfg.mode, ErrorMode::Exact);
        assert_eq!(cfg.bcd.t_max, 7);
        assert_eq!(cfg.experiment_id, ExperimentId::Fig6);
        assert!(ExperimentConfig::default().with_overrides(&["nonsense"]).is_err());
        assert!(ExperimentConfig::default().with_overrides(&["scenario.zz=1"]).is_err());
    }

    #[test]
    fn sweep_defaults_and_overrides() {
        let mut cfg = ExperimentConfig::for_experiment(ExperimentId::Fig7);
        assert_eq!(cfg.axis_values(SweepAxis::ZEveDb), DEFAULT_FIG7_Z_EVE_DB.to_vec());
        let p = cfg.axis_values(SweepAxis::PSigmaMw);
        assert_eq!((p.len(), p[0], p[100]), (101, 0.5, 10.0));
        cfg.sweeps.push(SweepSpec {
            axis: SweepAxis::PSigmaMw,
            start: None,
            stop: None,
            steps: None,
            values: Some(vec![2.7, 3.0]),
        });
        assert_eq!(cfg.axis_values(SweepAxis::PSigmaMw), vec![2.7, 3.0]);
        assert!(cfg.validate().is_empty());
        cfg.sweeps.push(SweepSpec {
            axis: SweepAxis::PM,
            start: Some(0.0),
            stop: Some(1.0),
            steps: Some(1),
            values: None,
        });
        let issues = cfg.validate();
        assert!(issues.iter().any(|m| m.contains("not swept by fig7")));
        assert!(issues.iter().any(|m| m.contains("steps must be at least 2")));
    }
}
