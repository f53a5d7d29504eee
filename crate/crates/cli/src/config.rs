//! Flat dotted-key configuration with defaults, file loading and overrides.

use std::collections::BTreeMap;
use std::path::Path;

use serde_json::{json, Value};

use resonance_core::model::InhomogeneityProfile;

use crate::CliError;

/// Every recognised key with its default.
pub fn defaults() -> BTreeMap<String, Value> {
    let pairs = [
        ("profile.kind", json!("gaussian")),
        ("profile.alpha0", json!(2.0)),
        ("profile.a", json!(39.5)),
        ("model.b", json!(1.0)),
        ("tol_newton", json!(1e-12)),
        ("quad_abs_tol", json!(1e-12)),
        ("root_tol", json!(1e-10)),
        ("threads", json!(0)),
        ("resonance.a_lo", json!(30.0)),
        ("resonance.a_hi", json!(50.0)),
        ("resonance.fit_width", json!(2.0)),
        ("resonance.fit_points", json!(9)),
        ("sweep.a_min", json!(35.0)),
        ("sweep.a_max", json!(44.0)),
        ("sweep.a_step", json!(0.5)),
        ("branch_map.y", json!([-1.0, -0.5, 0.0, 0.5, 1.0])),
        ("branch_map.x_min", json!(0.0)),
        ("branch_map.x_max", json!(18.0)),
        ("branch_map.x_step", json!(0.1)),
        ("trajectory.samples", json!(100)),
        ("caustic.parabola_samples", json!(50)),
    ];
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// The resolved key/value map: defaults, then file, then `--set` overrides.
#[derive(Debug, Clone, PartialEq)]
pub struct RawConfig(pub BTreeMap<String, Value>);

impl RawConfig {
    pub fn resolve(file: Option<&Path>, overrides: &[String]) -> Result<Self, CliError> {
        let mut map = defaults();
        if let Some(path) = file {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Config {
                key: "--config".into(),
                message: format!("cannot read {}: {e}", path.display()),
            })?;
            let parsed: Value = serde_json::from_str(&text).map_err(|e| CliError::Config {
                key: "--config".into(),
                message: format!("invalid JSON in {}: {e}", path.display()),
            })?;
            let Value::Object(obj) = parsed else {
                return Err(CliError::Config {
                    key: "--config".into(),
                    message: "top level must be a JSON object of dotted keys".into(),
                });
            };
            for (k, v) in obj {
                set_known(&mut map, k, v)?;
            }
        }
        for item in overrides {
            let (k, v) = item.split_once('=').ok_or_else(|| CliError::Config {
                key: item.clone(),
                message: "expected key=value".into(),
            })?;
            let v = serde_json::from_str(v).unwrap_or_else(|_| Value::String(v.to_string()));
            set_known(&mut map, k.trim().to_string(), v)?;
        }
        Ok(RawConfig(map))
    }

    pub fn as_json(&self) -> Value {
        Value::Object(self.0.clone().into_iter().collect())
    }

    fn get(&self, key: &str) -> &Value {
        &self.0[key]
    }

    fn number(&self, key: &str) -> Result<f64, CliError> {
        self.get(key)
            .as_f64()
            .filter(|v| v.is_finite())
            .ok_or_else(|| bad(key, "expected a finite number"))
    }

    fn positive(&self, key: &str) -> Result<f64, CliError> {
        let v = self.number(key)?;
        if v > 0.0 {
            Ok(v)
        } else {
            Err(bad(key, "must be > 0"))
        }
    }

    fn count(&self, key: &str, min: u64) -> Result<usize, CliError> {
        match self.get(key).as_u64() {
            Some(n) if n >= min => Ok(n as usize),
            _ => Err(bad(key, &format!("expected an integer >= {min}"))),
        }
    }

    fn string(&self, key: &str) -> Result<&str, CliError> {
        self.get(key).as_str().ok_or_else(|| bad(key, "expected a string"))
    }
}

fn set_known(map: &mut BTreeMap<String, Value>, key: String, value: Value) -> Result<(), CliError> {
    match map.get_mut(&key) {
        Some(slot) => {
            *slot = value;
            Ok(())
        }
        None => Err(bad(&key, "unknown configuration key")),
    }
}

fn bad(key: &str, message: &str) -> CliError {
    CliError::Config {
        key: key.to_string(),
        message: message.to_string(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub newton: f64,
    pub quad_abs: f64,
    pub root: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub profile: InhomogeneityProfile<f64>,
    pub b: f64,
    pub tol: Tolerances,
    pub threads: usize,
    pub bracket: (f64, f64),
    pub fit_width: f64,
    pub fit_points: usize,
    pub sweep: (f64, f64, f64),
    pub ys: Vec<f64>,
    pub x_grid: (f64, f64, f64),
    pub trajectory_samples: usize,
    pub parabola_samples: usize,
}

impl RunConfig {
    pub fn from_raw(raw: &RawConfig) -> Result<Self, CliError> {
        let alpha0 = raw.number("profile.alpha0")?;
        let profile = match raw.string("profile.kind")? {
            "gaussian" => {
                let a = raw.positive("profile.a")?;
                InhomogeneityProfile::gaussian(alpha0, a).map_err(|e| bad("profile.alpha0", &e.to_string()))?
            }
            "constant" => InhomogeneityProfile::constant(alpha0).map_err(|e| bad("profile.alpha0", &e.to_string()))?,
            "zero" => InhomogeneityProfile::Zero,
            other => return Err(bad("profile.kind", &format!("unknown profile {other:?} (gaussian, constant, zero)"))),
        };
        let bracket = (raw.number("resonance.a_lo")?, raw.number("resonance.a_hi")?);
        if !(bracket.0 > 0.0 && bracket.0 < bracket.1) {
            return Err(bad("resonance.a_lo", "bracket must satisfy 0 < a_lo < a_hi"));
        }
        let sweep = (raw.positive("sweep.a_min")?, raw.number("sweep.a_max")?, raw.positive("sweep.a_step")?);
        if sweep.1 < sweep.0 {
            return Err(bad("sweep.a_max", "must be >= sweep.a_min"));
        }
        let ys = raw
            .get("branch_map.y")
            .as_array()
            .and_then(|a| a.iter().map(|v| v.as_f64().filter(|v| v.is_finite())).collect::<Option<Vec<_>>>())
            .filter(|v| !v.is_empty())
            .ok_or_else(|| bad("branch_map.y", "expected a nonempty array of numbers"))?;
        let x_grid = (
            raw.number("branch_map.x_min")?,
            raw.number("branch_map.x_max")?,
            raw.positive("branch_map.x_step")?,
        );
        if x_grid.0 < 0.0 {
            return Err(bad("branch_map.x_min", "must be >= 0"));
        }
        if x_grid.1 < x_grid.0 {
            return Err(bad("branch_map.x_max", "must be >= branch_map.x_min"));
        }
        Ok(RunConfig {
            profile,
            b: raw.positive("model.b")?,
            tol: Tolerances {
                newton: raw.positive("tol_newton")?,
                quad_abs: raw.positive("quad_abs_tol")?,
                root: raw.positive("root_tol")?,
            },
            threads: raw.count("threads", 0)?,
            bracket,
            fit_width: raw.positive("resonance.fit_width")?,
            fit_points: raw.count("resonance.fit_points", 2)?,
            sweep,
            ys,
            x_grid,
            trajectory_samples: raw.count("trajectory.samples", 1)?,
            parabola_samples: raw.count("caustic.parabola_samples", 1)?,
        })
    }
}

/// `lo, lo + step, ...` up to `hi` inclusive (within rounding).
pub fn stepped(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    (0..=n).map(|k| lo + step * k as f64).collect()
}
