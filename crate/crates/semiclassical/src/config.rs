//! Experiment configuration: a strict JSON schema, named presets and dotted
//! `key=value` overrides.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use semiclassical_core::dynamics::{IntegratorConfig, ProductState};
use semiclassical_core::model::{CouplingNormalization, MaserParams};
use semiclassical_core::oracle::DEFAULT_DIM_CAP;
use semiclassical_core::projection::ProjectionDirection;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("config parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid config field `{field}`: {reason}")]
    Invalid { field: String, reason: String },
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("bad override `{0}`: expected key=value with a dotted key")]
    BadOverride(String),
}

fn invalid(field: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        field: field.to_string(),
        reason: reason.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Trajectory,
    OverlapPair,
    Entropy,
    Lyapunov,
    OracleCompare,
    Fig1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    #[default]
    SqrtJ,
    SqrtTwoJ,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub epsilon: f64,
    pub omega: f64,
    pub g: f64,
    pub g_prime: f64,
    pub j: f64,
    #[serde(default)]
    pub normalization: Normalization,
}

impl ModelSpec {
    pub fn params(&self) -> Result<MaserParams, ConfigError> {
        let p = MaserParams::new(self.epsilon, self.omega, self.g, self.g_prime, self.j)
            .map_err(|e| invalid("model", e.to_string()))?;
        Ok(p.with_normalization(match self.normalization {
            Normalization::SqrtJ => CouplingNormalization::SqrtJ,
            Normalization::SqrtTwoJ => CouplingNormalization::SqrtTwoJ,
        }))
    }
}

/// One product coherent state. The field label is given either as `x`
/// (`[re, im]`) or through quadratures `q`, `p` with `x = (q + ip)/√2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    pub y: [f64; 2],
}

impl StateSpec {
    pub fn field_label(&self, field: &str) -> Result<Complex64, ConfigError> {
        match (self.x, self.q, self.p) {
            (Some(x), None, None) => Ok(Complex64::new(x[0], x[1])),
            (None, Some(q), p) => Ok(Complex64::new(q, p.unwrap_or(0.0)) / 2f64.sqrt()),
            (None, None, _) => Err(invalid(field, "needs `x` or `q`")),
            _ => Err(invalid(field, "give either `x` or `q`/`p`, not both")),
        }
    }

    pub fn state(&self, field: &str) -> Result<ProductState, ConfigError> {
        let x = self.field_label(field)?;
        ProductState::from_parts(x, Complex64::new(self.y[0], self.y[1])).map_err(|e| invalid(field, e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSpec {
    pub label: String,
    pub a: StateSpec,
    pub b: StateSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorSpec {
    #[serde(default = "default_rel_tol")]
    pub rel_tol: f64,
    #[serde(default = "default_abs_tol")]
    pub abs_tol: f64,
    #[serde(default = "default_max_step")]
    pub max_step: f64,
}

fn default_rel_tol() -> f64 {
    IntegratorConfig::default().rel_tol
}

fn default_abs_tol() -> f64 {
    IntegratorConfig::default().abs_tol
}

fn default_max_step() -> f64 {
    IntegratorConfig::default().max_step
}

impl Default for IntegratorSpec {
    fn default() -> Self {
        Self {
            rel_tol: default_rel_tol(),
            abs_tol: default_abs_tol(),
            max_step: default_max_step(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSpec {
    /// Photon cutoff; raised automatically when a label needs more.
    #[serde(default)]
    pub n_max: usize,
    #[serde(default = "default_cap")]
    pub cap: usize,
}

fn default_cap() -> usize {
    DEFAULT_DIM_CAP
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    #[default]
    ImagX,
    RealX,
}

impl From<Direction> for ProjectionDirection {
    fn from(d: Direction) -> Self {
        match d {
            Direction::ImagX => ProjectionDirection::ImagX,
            Direction::RealX => ProjectionDirection::RealX,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LyapunovSpec {
    #[serde(default = "default_delta0")]
    pub delta0: f64,
    #[serde(default = "default_renorm")]
    pub renorm_interval: f64,
    /// Total time; defaults to `t_final`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_total: Option<f64>,
}

fn default_delta0() -> f64 {
    1e-8
}

fn default_renorm() -> f64 {
    1.0
}

impl Default for LyapunovSpec {
    fn default() -> Self {
        Self {
            delta0: default_delta0(),
            renorm_interval: default_renorm(),
            t_total: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub model: ModelSpec,
    pub initial_pairs: Vec<PairSpec>,
    pub t_final: f64,
    pub sampling_dt: f64,
    #[serde(default)]
    pub integrator: IntegratorSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energy_target: Option<f64>,
    #[serde(default)]
    pub projection: Direction,
    #[serde(default)]
    pub lyapunov: LyapunovSpec,
    /// Free-text note on how the initial conditions were read, copied into
    /// every manifest.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interpretation: Option<String>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.model.params()?;
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return Err(invalid("t_final", "must be positive"));
        }
        if !(self.sampling_dt > 0.0 && self.sampling_dt.is_finite()) {
            return Err(invalid("sampling_dt", "must be positive"));
        }
        if self.initial_pairs.is_empty() {
            return Err(invalid("initial_pairs", "at least one pair is required"));
        }
        for (k, pair) in self.initial_pairs.iter().enumerate() {
            let ok = !pair.label.is_empty()
                && pair.label.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-');
            if !ok {
                return Err(invalid(&format!("initial_pairs[{k}].label"), "use letters, digits, `_` or `-`"));
            }
            if self.initial_pairs[..k].iter().any(|p| p.label == pair.label) {
                return Err(invalid(&format!("initial_pairs[{k}].label"), "labels must be unique"));
            }
            pair.a.state(&format!("initial_pairs[{k}].a"))?;
            pair.b.state(&format!("initial_pairs[{k}].b"))?;
        }
        self.integrator_config()
            .validate()
            .map_err(|e| invalid("integrator", e.to_string()))?;
        if let Some(e) = self.energy_target {
            if !e.is_finite() {
                return Err(invalid("energy_target", "must be finite"));
            }
        }
        let l = &self.lyapunov;
        if !(l.delta0 > 0.0) {
            return Err(invalid("lyapunov.delta0", "must be positive"));
        }
        if !(l.renorm_interval > 0.0) {
            return Err(invalid("lyapunov.renorm_interval", "must be positive"));
        }
        if let Some(t) = l.t_total {
            if !(t >= l.renorm_interval) {
                return Err(invalid("lyapunov.t_total", "must be at least renorm_interval"));
            }
        }
        if self.experiment == ExperimentKind::OracleCompare && self.oracle.is_none() {
            return Err(invalid("oracle", "oracle-compare needs an oracle section"));
        }
        Ok(())
    }

    pub fn integrator_config(&self) -> IntegratorConfig {
        IntegratorConfig {
            rel_tol: self.integrator.rel_tol,
            abs_tol: self.integrator.abs_tol,
            max_step: self.integrator.max_step,
            dense_output_dt: self.sampling_dt,
        }
    }
}

pub const FIG1_INTERPRETATION: &str = "Preset pairs (u, v) are read as field position quadrature q = u with \
p = 0 (x = q/sqrt(2)) and real spin label y = v, with couplings G/sqrt(2J). Members are projected onto \
E = 8.5 along Re x. Under the plain reading (x = u, G/sqrt(J)) the four points lie at E = 19.5 to 21.0 \
and E = 8.5 cannot be reached by changing Im x.";

/// The `fig1` preset: resonant maser at J = 9/2 with both pairs on E = 8.5.
pub fn fig1_preset() -> Value {
    serde_json::json!({
        "experiment": "fig1",
        "model": {
            "epsilon": 1.0,
            "omega": 1.0,
            "g": 0.5,
            "g_prime": 0.2,
            "j": 4.5,
            "normalization": "sqrt_two_j"
        },
        "initial_pairs": [
            {
                "label": "chaotic",
                "a": { "q": 5.7263433, "y": [-0.24253563, 0.0] },
                "b": { "q": 5.7778567, "y": [-0.26845243, 0.0] }
            },
            {
                "label": "regular",
                "a": { "q": 3.615516, "y": [0.53452248, 0.0] },
                "b": { "q": 3.68977334, "y": [0.50086791, 0.0] }
            }
        ],
        "t_final": 60.0,
        "sampling_dt": 0.05,
        "energy_target": 8.5,
        "projection": "real_x",
        "lyapunov": { "delta0": 1e-8, "renorm_interval": 1.0, "t_total": 500.0 },
        "interpretation": FIG1_INTERPRETATION
    })
}

pub fn preset(name: &str) -> Result<Value, ConfigError> {
    match name {
        "fig1" => Ok(fig1_preset()),
        other => Err(ConfigError::UnknownPreset(other.to_string())),
    }
}

fn merge(base: &mut Value, over: Value) {
    match (base, over) {
        (Value::Object(b), Value::Object(o)) => {
            for (k, v) in o {
                match b.get_mut(&k) {
                    Some(slot) if slot.is_object() && v.is_object() => merge(slot, v),
                    _ => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (b, o) => *b = o,
    }
}

/// Sets `a.b.c = value`; the value is parsed as JSON, falling back to a string.
pub fn apply_override(root: &mut Value, spec: &str) -> Result<(), ConfigError> {
    let (key, raw) = spec
        .split_once('=')
        .ok_or_else(|| ConfigError::BadOverride(spec.to_string()))?;
    let key = key.trim();
    if key.is_empty() || key.split('.').any(str::is_empty) {
        return Err(ConfigError::BadOverride(spec.to_string()));
    }
    let value = serde_json::from_str(raw.trim()).unwrap_or_else(|_| Value::String(raw.trim().to_string()));
    let mut node = root;
    let parts: Vec<&str> = key.split('.').collect();
    for (i, part) in parts.iter().enumerate() {
        let last = i + 1 == parts.len();
        node = match node {
            Value::Object(map) => {
                if last {
                    map.insert(part.to_string(), value);
                    return Ok(());
                }
                map.entry(part.to_string()).or_insert_with(|| Value::Object(Map::new()))
            }
            Value::Array(items) => {
                let idx: usize = part.parse().map_err(|_| ConfigError::BadOverride(spec.to_string()))?;
                let slot = items
                    .get_mut(idx)
                    .ok_or_else(|| invalid(key, format!("index {idx} out of range")))?;
                if last {
                    *slot = value;
                    return Ok(());
                }
                slot
            }
            _ => return Err(invalid(key, "path runs through a scalar")),
        };
    }
    Ok(())
}

/// Expands a `preset` key, applies overrides, then deserializes strictly.
pub fn resolve(mut raw: Value, overrides: &[String]) -> Result<ExperimentConfig, ConfigError> {
    if let Some(name) = raw.as_object_mut().and_then(|m| m.remove("preset")) {
        let name = name
            .as_str()
            .ok_or_else(|| invalid("preset", "must be a string"))?
            .to_string();
        let mut base = preset(&name)?;
        merge(&mut base, raw);
        raw = base;
    }
    for o in overrides {
        apply_override(&mut raw, o)?;
    }
    let cfg: ExperimentConfig = serde_json::from_value(raw).map_err(|e| invalid("<root>", e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn parse_config(text: &str, overrides: &[String]) -> Result<ExperimentConfig, ConfigError> {
    let raw: Value = serde_json::from_str(text).map_err(|e| ConfigError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    resolve(raw, overrides)
}

pub fn load_config(path: &Path, overrides: &[String]) -> Result<ExperimentConfig, ConfigError> {
    let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_config(&text, overrides)
}
