//! Run configuration: the JSON config-file schema, flag merging, and
//! validation with field-path diagnostics. Command-line flags always take
//! precedence over config-file values.

use crate::oscillator::{RlcParams, SecondOrderOscillator};
use crate::waveform::{QuadRule, QuadratureConfig, Waveform};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::path::Path;

/// A configuration or usage problem; maps to exit code 2.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{0}")]
pub struct ConfigError(pub String);

fn err<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

/// Oscillator section: exactly one of (gamma, omega0), (q, omega0) or
/// (r, l, c) must determine the system.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OscillatorSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v_m: Option<f64>,
}

impl OscillatorSpec {
    pub fn merge_over(self, base: Option<OscillatorSpec>) -> OscillatorSpec {
        let base = base.unwrap_or_default();
        OscillatorSpec {
            gamma: self.gamma.or(base.gamma),
            omega0: self.omega0.or(base.omega0),
            q: self.q.or(base.q),
            r: self.r.or(base.r),
            l: self.l.or(base.l),
            c: self.c.or(base.c),
            v_m: self.v_m.or(base.v_m),
        }
    }

    pub fn is_empty(&self) -> bool {
        self == &OscillatorSpec::default()
    }

    pub fn resolve(&self) -> Result<SecondOrderOscillator, ConfigError> {
        if let (Some(r), Some(l), Some(c)) = (self.r, self.l, self.c) {
            let p = RlcParams::new(r, l, c, self.v_m.unwrap_or(1.0))
                .map_err(|e| ConfigError(format!("oscillator: {e}")))?;
            return SecondOrderOscillator::from_rlc(&p)
                .map_err(|e| ConfigError(format!("oscillator: {e}")));
        }
        let omega0 = match self.omega0 {
            Some(w) => w,
            None => return err("oscillator: --omega0 is required (or give --r/--l/--c)"),
        };
        if let Some(q) = self.q {
            return SecondOrderOscillator::from_quality(q, omega0)
                .map_err(|e| ConfigError(format!("oscillator: --q invalid: {e}")));
        }
        if let Some(gamma) = self.gamma {
            return SecondOrderOscillator::new(gamma, omega0)
                .map_err(|e| ConfigError(format!("oscillator: {e}")));
        }
        err("oscillator: give --gamma or --q alongside --omega0, or a full --r/--l/--c triple")
    }

    /// The concrete RLC circuit when one was given.
    pub fn rlc(&self) -> Result<Option<RlcParams>, ConfigError> {
        match (self.r, self.l, self.c) {
            (Some(r), Some(l), Some(c)) => RlcParams::new(r, l, c, self.v_m.unwrap_or(1.0))
                .map(Some)
                .map_err(|e| ConfigError(format!("oscillator: {e}"))),
            (None, None, None) => Ok(None),
            _ => err("oscillator: --r, --l and --c must be given together"),
        }
    }
}

/// Input waveform section. `kind` is one of sine, square, triangle, or
/// `descriptor` holds a full JSON waveform descriptor (which wins).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<f64>,
    /// Angular frequency for sine inputs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    /// Period for square/triangle inputs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub period: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub descriptor: Option<Value>,
}

impl InputSpec {
    pub fn merge_over(self, base: Option<InputSpec>) -> InputSpec {
        let base = base.unwrap_or_default();
        InputSpec {
            kind: self.kind.or(base.kind),
            amplitude: self.amplitude.or(base.amplitude),
            omega: self.omega.or(base.omega),
            period: self.period.or(base.period),
            descriptor: self.descriptor.or(base.descriptor),
        }
    }

    pub fn is_empty(&self) -> bool {
        self == &InputSpec::default()
    }

    /// Builds the waveform; `osc` supplies the resonant defaults (sine at
    /// omega_d, unit amplitude).
    pub fn resolve(&self, osc: Option<&SecondOrderOscillator>) -> Result<Waveform, ConfigError> {
        if let Some(desc) = &self.descriptor {
            return Waveform::from_json(desc).map_err(|e| ConfigError(format!("input: {e}")));
        }
        let amplitude = self.amplitude.unwrap_or(1.0);
        let kind = self.kind.as_deref().unwrap_or("sine");
        match kind {
            "sine" => {
                let omega = match (self.omega, osc) {
                    (Some(w), _) => w,
                    (None, Some(o)) => o.omega_d(),
                    (None, None) => return err("input: --drive-omega required for a sine input"),
                };
                Waveform::sine(amplitude, omega, 0.0)
                    .map_err(|e| ConfigError(format!("input: {e}")))
            }
            "square" | "triangle" => {
                let period = match (self.period, self.omega, osc) {
                    (Some(t), _, _) => t,
                    (None, Some(w), _) => std::f64::consts::TAU / w,
                    (None, None, Some(o)) => o.natural_period(),
                    (None, None, None) => {
                        return err("input: --drive-period required for a square/triangle input")
                    }
                };
                crate::waveform::standard_waveform(kind, amplitude, period)
                    .map_err(|e| ConfigError(format!("input: {e}")))
            }
            other => err(format!(
                "input: unknown kind {other:?} (expected sine, square or triangle, \
                 or a JSON descriptor)"
            )),
        }
    }
}

/// Numeric section: grid step, horizon and quadrature.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NumericSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quad_points: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rule: Option<QuadRule>,
}

/// Effective numeric choices after defaulting against an oscillator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolvedNumeric {
    pub dt: f64,
    pub horizon: f64,
    pub quadrature: QuadratureConfig,
}

impl NumericSpec {
    pub fn merge_over(self, base: Option<NumericSpec>) -> NumericSpec {
        let base = base.unwrap_or_default();
        NumericSpec {
            dt: self.dt.or(base.dt),
            horizon: self.horizon.or(base.horizon),
            quad_points: self.quad_points.or(base.quad_points),
            rule: self.rule.or(base.rule),
        }
    }

    pub fn is_empty(&self) -> bool {
        self == &NumericSpec::default()
    }

    pub fn quadrature(&self) -> Result<QuadratureConfig, ConfigError> {
        QuadratureConfig::new(
            self.rule.unwrap_or(QuadRule::Simpson),
            self.quad_points.unwrap_or(256),
        )
        .map_err(|e| ConfigError(format!("numeric: {e}")))
    }

    /// Defaults: dt = T_d/200; horizon = 12/gamma, or 20 T_o when lossless.
    pub fn resolve(&self, osc: &SecondOrderOscillator) -> Result<ResolvedNumeric, ConfigError> {
        let dt = self.dt.unwrap_or(osc.damped_period() / 200.0);
        if !(dt > 0.0) {
            return err(format!("numeric: --dt must be positive (got {dt})"));
        }
        let horizon = self.horizon.unwrap_or(if osc.gamma() > 0.0 {
            12.0 / osc.gamma()
        } else {
            20.0 * osc.natural_period()
        });
        if !(horizon > 0.0) {
            return err(format!("numeric: --horizon must be positive (got {horizon})"));
        }
        Ok(ResolvedNumeric {
            dt,
            horizon,
            quadrature: self.quadrature()?,
        })
    }
}

/// The full run configuration; every emitted metadata block embeds one of
/// these, re-loadable as a config file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subcommand: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oscillator: Option<OscillatorSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<InputSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub numeric: Option<NumericSpec>,
}

impl RunConfig {
    pub fn oscillator_spec(&self) -> OscillatorSpec {
        self.oscillator.unwrap_or_default()
    }

    pub fn input_spec(&self) -> InputSpec {
        self.input.clone().unwrap_or_default()
    }

    pub fn numeric_spec(&self) -> NumericSpec {
        self.numeric.unwrap_or_default()
    }
}

/// Loads and validates a JSON config file. Unknown or ill-typed fields are
/// reported with their path.
pub fn load_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("config {}: {e}", path.display())))?;
    let cfg: RunConfig = serde_json::from_str(&text)
        .map_err(|e| ConfigError(format!("config {}: {e}", path.display())))?;
    // surface oscillator-section violations at load time with the section name
    if let Some(osc) = &cfg.oscillator {
        if !osc.is_empty() {
            osc.resolve()
                .map_err(|e| ConfigError(format!("config {}: {e}", path.display())))?;
        }
    }
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oscillator_spec_variants() {
        let spec = OscillatorSpec {
            gamma: Some(0.05),
            omega0: Some(1.0),
            ..Default::default()
        };
        assert_eq!(spec.resolve().unwrap().gamma(), 0.05);

        let spec = OscillatorSpec {
            q: Some(10.0),
            omega0: Some(1.0),
            ..Default::default()
        };
        assert_eq!(spec.resolve().unwrap().quality(), 10.0);

        let spec = OscillatorSpec {
            r: Some(0.1),
            l: Some(1.0),
            c: Some(1.0),
            ..Default::default()
        };
        assert_eq!(spec.resolve().unwrap().gamma(), 0.05);

        let bad = OscillatorSpec {
            q: Some(0.0),
            omega0: Some(1.0),
            ..Default::default()
        };
        assert!(bad.resolve().is_err());
    }

    #[test]
    fn flag_precedence_in_merge() {
        let file = NumericSpec {
            dt: Some(0.05),
            horizon: Some(100.0),
            ..Default::default()
        };
        let flags = NumericSpec {
            dt: Some(0.01),
            ..Default::default()
        };
        let merged = flags.merge_over(Some(file));
        assert_eq!(merged.dt, Some(0.01));
        assert_eq!(merged.horizon, Some(100.0));
    }

    #[test]
    fn numeric_defaults_follow_oscillator() {
        let osc = SecondOrderOscillator::from_quality(10.0, 1.0).unwrap();
        let resolved = NumericSpec::default().resolve(&osc).unwrap();
        assert!((resolved.dt - osc.damped_period() / 200.0).abs() < 1e-15);
        assert!((resolved.horizon - 240.0).abs() < 1e-9);

        let lossless = SecondOrderOscillator::new(0.0, 1.0).unwrap();
        let resolved = NumericSpec::default().resolve(&lossless).unwrap();
        assert!((resolved.horizon - 20.0 * lossless.natural_period()).abs() < 1e-9);
    }

    #[test]
    fn config_file_round_trip_and_schema_errors() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.json");

        let cfg = RunConfig {
            subcommand: Some("simulate".to_string()),
            oscillator: Some(OscillatorSpec {
                q: Some(10.0),
                omega0: Some(1.0),
                ..Default::default()
            }),
            input: Some(InputSpec {
                kind: Some("sine".to_string()),
                ..Default::default()
            }),
            numeric: Some(NumericSpec {
                dt: Some(0.05),
                ..Default::default()
            }),
        };
        std::fs::write(&path, serde_json::to_string_pretty(&cfg).unwrap()).unwrap();
        let loaded = load_config(&path).unwrap();
        assert_eq!(loaded, cfg);

        // overdamped oscillator in the file: error names the section
        std::fs::write(
            &path,
            r#"{"oscillator": {"gamma": 2.0, "omega0": 1.0}}"#,
        )
        .unwrap();
        let e = load_config(&path).unwrap_err();
        assert!(e.0.contains("oscillator"), "{e}");

        // unknown field: serde path shows up in the message
        std::fs::write(&path, r#"{"oscilator": {}}"#).unwrap();
        assert!(load_config(&path).is_err());

        assert!(load_config(Path::new("/nonexistent/cfg.json")).is_err());
    }

    #[test]
    fn input_defaults_to_resonant_sine() {
        let osc = SecondOrderOscillator::from_quality(10.0, 1.0).unwrap();
        let w = InputSpec::default().resolve(Some(&osc)).unwrap();
        let desc = w.to_json();
        assert_eq!(desc["kind"], "sine");
        assert!((desc["params"]["omega"].as_f64().unwrap() - osc.omega_d()).abs() < 1e-15);
    }
}
