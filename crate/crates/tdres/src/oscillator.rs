//! System models: series-RLC parameter mapping, the underdamped second-order
//! oscillator, its impulse-response flavors, and the simplified cut-off
//! response used for qualitative envelope work.

use crate::waveform::TimeFunction;
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OscillatorError {
    #[error("{name} must be positive (got {value})")]
    NonPositive { name: &'static str, value: f64 },
    #[error("{name} must be nonnegative (got {value})")]
    Negative { name: &'static str, value: f64 },
    #[error("{name} must be finite (got {value})")]
    NonFinite { name: &'static str, value: f64 },
    #[error("not underdamped: gamma = {gamma} >= omega0 = {omega0}")]
    Overdamped { gamma: f64, omega0: f64 },
    #[error("lossless system has no finite cutoff (gamma = 0)")]
    LosslessCutoff,
    #[error("quality factor must exceed 1/2 for an underdamped system (got {0})")]
    QualityTooLow(f64),
    #[error("impulse response descriptor field {0:?} missing or malformed")]
    BadDescriptorField(String),
    #[error("unknown impulse response flavor {0:?}")]
    UnknownFlavor(String),
}

fn positive(name: &'static str, value: f64) -> Result<f64, OscillatorError> {
    if !value.is_finite() {
        Err(OscillatorError::NonFinite { name, value })
    } else if value <= 0.0 {
        Err(OscillatorError::NonPositive { name, value })
    } else {
        Ok(value)
    }
}

fn nonnegative(name: &'static str, value: f64) -> Result<f64, OscillatorError> {
    if !value.is_finite() {
        Err(OscillatorError::NonFinite { name, value })
    } else if value < 0.0 {
        Err(OscillatorError::Negative { name, value })
    } else {
        Ok(value)
    }
}

/// Series RLC circuit parameters with the drive amplitude `v_m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawRlc", into = "RawRlc")]
pub struct RlcParams {
    resistance: f64,
    inductance: f64,
    capacitance: f64,
    drive_amplitude: f64,
}

#[derive(Serialize, Deserialize)]
struct RawRlc {
    r: f64,
    l: f64,
    c: f64,
    v_m: f64,
}

impl TryFrom<RawRlc> for RlcParams {
    type Error = OscillatorError;
    fn try_from(raw: RawRlc) -> Result<Self, Self::Error> {
        RlcParams::new(raw.r, raw.l, raw.c, raw.v_m)
    }
}

impl From<RlcParams> for RawRlc {
    fn from(p: RlcParams) -> Self {
        RawRlc {
            r: p.resistance,
            l: p.inductance,
            c: p.capacitance,
            v_m: p.drive_amplitude,
        }
    }
}

impl RlcParams {
    pub fn new(r: f64, l: f64, c: f64, v_m: f64) -> Result<Self, OscillatorError> {
        Ok(Self {
            resistance: nonnegative("R", r)?,
            inductance: positive("L", l)?,
            capacitance: positive("C", c)?,
            drive_amplitude: positive("v_m", v_m)?,
        })
    }

    pub fn resistance(&self) -> f64 {
        self.resistance
    }
    pub fn inductance(&self) -> f64 {
        self.inductance
    }
    pub fn capacitance(&self) -> f64 {
        self.capacitance
    }
    pub fn drive_amplitude(&self) -> f64 {
        self.drive_amplitude
    }

    pub fn gamma(&self) -> f64 {
        self.resistance / (2.0 * self.inductance)
    }

    pub fn omega0(&self) -> f64 {
        1.0 / (self.inductance * self.capacitance).sqrt()
    }
}

/// Underdamped second-order oscillator: damping factor `gamma` and natural
/// frequency `omega0` with `0 <= gamma < omega0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawOsc", into = "RawOsc")]
pub struct SecondOrderOscillator {
    gamma: f64,
    omega0: f64,
}

#[derive(Serialize, Deserialize)]
struct RawOsc {
    gamma: f64,
    omega0: f64,
}

impl TryFrom<RawOsc> for SecondOrderOscillator {
    type Error = OscillatorError;
    fn try_from(raw: RawOsc) -> Result<Self, Self::Error> {
        SecondOrderOscillator::new(raw.gamma, raw.omega0)
    }
}

impl From<SecondOrderOscillator> for RawOsc {
    fn from(o: SecondOrderOscillator) -> Self {
        RawOsc {
            gamma: o.gamma,
            omega0: o.omega0,
        }
    }
}

/// The derived quantities of an oscillator. `quality` is reported as
/// `f64::INFINITY` for a lossless system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedQuantities {
    pub quality: f64,
    pub omega_d: f64,
    pub natural_period: f64,
    pub damped_period: f64,
}

impl SecondOrderOscillator {
    pub fn new(gamma: f64, omega0: f64) -> Result<Self, OscillatorError> {
        let gamma = nonnegative("gamma", gamma)?;
        let omega0 = positive("omega0", omega0)?;
        if gamma >= omega0 {
            return Err(OscillatorError::Overdamped { gamma, omega0 });
        }
        Ok(Self { gamma, omega0 })
    }

    /// Maps series-RLC values: gamma = R/(2L), omega0 = 1/sqrt(LC).
    pub fn from_rlc(p: &RlcParams) -> Result<Self, OscillatorError> {
        Self::new(p.gamma(), p.omega0())
    }

    /// From quality factor: gamma = omega0 / (2Q). Requires Q > 1/2.
    pub fn from_quality(quality: f64, omega0: f64) -> Result<Self, OscillatorError> {
        let omega0 = positive("omega0", omega0)?;
        if quality.is_infinite() && quality > 0.0 {
            return Self::new(0.0, omega0);
        }
        let quality = positive("Q", quality)?;
        if quality <= 0.5 {
            return Err(OscillatorError::QualityTooLow(quality));
        }
        Self::new(omega0 / (2.0 * quality), omega0)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    /// Q = omega0 / (2 gamma); infinite for the lossless oscillator.
    pub fn quality(&self) -> f64 {
        if self.gamma == 0.0 {
            f64::INFINITY
        } else {
            self.omega0 / (2.0 * self.gamma)
        }
    }

    /// Self-oscillation frequency sqrt(omega0^2 - gamma^2).
    pub fn omega_d(&self) -> f64 {
        (self.omega0 * self.omega0 - self.gamma * self.gamma).sqrt()
    }

    pub fn natural_period(&self) -> f64 {
        2.0 * PI / self.omega0
    }

    pub fn damped_period(&self) -> f64 {
        2.0 * PI / self.omega_d()
    }

    pub fn derived(&self) -> DerivedQuantities {
        DerivedQuantities {
            quality: self.quality(),
            omega_d: self.omega_d(),
            natural_period: self.natural_period(),
            damped_period: self.damped_period(),
        }
    }
}

/// Impulse-response flavors of the supported systems.
///
/// All flavors are causal: the value is 0 for t < 0.
#[derive(Debug, Clone, PartialEq)]
pub enum ImpulseResponse {
    /// (omega0^2 / omega_d) e^(-gamma t) sin(omega_d t)
    Exact { osc: SecondOrderOscillator },
    /// e^(-gamma t) sin(omega_d t); the prefactor-free form used for figure
    /// reproduction.
    Normalized { osc: SecondOrderOscillator },
    /// Undamped sine cut to zero after an integer number of half waves whose
    /// total length is nearest to 1/gamma.
    SimplifiedHs {
        osc: SecondOrderOscillator,
        cutoff: f64,
    },
    /// e^(-a t) for t >= 0: the first-order circuit response.
    FirstOrder { a: f64 },
}

impl ImpulseResponse {
    pub fn exact(osc: &SecondOrderOscillator) -> Self {
        Self::Exact { osc: *osc }
    }

    pub fn normalized(osc: &SecondOrderOscillator) -> Self {
        Self::Normalized { osc: *osc }
    }

    /// Builds the cut simplified response. The cutoff is the positive integer
    /// multiple of the half-period pi/omega0 nearest to 1/gamma, ties rounding
    /// up, with a minimum of one half wave. Errors for a lossless oscillator.
    pub fn simplified(osc: &SecondOrderOscillator) -> Result<Self, OscillatorError> {
        if osc.gamma() == 0.0 {
            return Err(OscillatorError::LosslessCutoff);
        }
        let half = PI / osc.omega0();
        let m = ((1.0 / osc.gamma()) / half).round().max(1.0);
        Ok(Self::SimplifiedHs {
            osc: *osc,
            cutoff: m * half,
        })
    }

    pub fn first_order(a: f64) -> Result<Self, OscillatorError> {
        Ok(Self::FirstOrder {
            a: positive("a", a)?,
        })
    }

    /// The decay rate that bounds the tail: gamma, or `a` for the first-order
    /// flavor. Zero for a lossless kernel.
    pub fn decay_rate(&self) -> f64 {
        match self {
            Self::Exact { osc } | Self::Normalized { osc } | Self::SimplifiedHs { osc, .. } => {
                osc.gamma()
            }
            Self::FirstOrder { a } => *a,
        }
    }

    /// The instant beyond which the response is identically zero, when one
    /// exists (the simplified flavor only).
    pub fn support_cutoff(&self) -> Option<f64> {
        match self {
            Self::SimplifiedHs { cutoff, .. } => Some(*cutoff),
            _ => None,
        }
    }

    pub fn oscillator(&self) -> Option<&SecondOrderOscillator> {
        match self {
            Self::Exact { osc } | Self::Normalized { osc } | Self::SimplifiedHs { osc, .. } => {
                Some(osc)
            }
            Self::FirstOrder { .. } => None,
        }
    }

    /// Wraps this response as a waveform so it can enter the combinators.
    pub fn as_waveform(&self) -> crate::waveform::Waveform {
        crate::waveform::Waveform::kernel(self.clone())
    }

    pub(crate) fn to_json_params(&self) -> Value {
        match self {
            Self::Exact { osc } => json!({
                "flavor": "exact", "gamma": osc.gamma(), "omega0": osc.omega0(),
            }),
            Self::Normalized { osc } => json!({
                "flavor": "normalized", "gamma": osc.gamma(), "omega0": osc.omega0(),
            }),
            Self::SimplifiedHs { osc, cutoff } => json!({
                "flavor": "simplified", "gamma": osc.gamma(), "omega0": osc.omega0(),
                "cutoff": cutoff,
            }),
            Self::FirstOrder { a } => json!({ "flavor": "first_order", "a": a }),
        }
    }

    pub(crate) fn from_json_params(params: &Value) -> Result<Self, OscillatorError> {
        let flavor = params
            .get("flavor")
            .and_then(Value::as_str)
            .ok_or_else(|| OscillatorError::BadDescriptorField("flavor".to_string()))?;
        let field = |name: &str| {
            params
                .get(name)
                .and_then(Value::as_f64)
                .ok_or_else(|| OscillatorError::BadDescriptorField(name.to_string()))
        };
        match flavor {
            "exact" => Ok(Self::exact(&SecondOrderOscillator::new(
                field("gamma")?,
                field("omega0")?,
            )?)),
            "normalized" => Ok(Self::normalized(&SecondOrderOscillator::new(
                field("gamma")?,
                field("omega0")?,
            )?)),
            "simplified" => Self::simplified(&SecondOrderOscillator::new(
                field("gamma")?,
                field("omega0")?,
            )?),
            "first_order" => Self::first_order(field("a")?),
            other => Err(OscillatorError::UnknownFlavor(other.to_string())),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "kind": "kernel", "params": self.to_json_params() })
    }
}

impl TimeFunction for ImpulseResponse {
    fn eval(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        match self {
            Self::Exact { osc } => {
                let wd = osc.omega_d();
                (osc.omega0() * osc.omega0() / wd)
                    * (-osc.gamma() * t).exp()
                    * (wd * t).sin()
            }
            Self::Normalized { osc } => (-osc.gamma() * t).exp() * (osc.omega_d() * t).sin(),
            Self::SimplifiedHs { osc, cutoff } => {
                if t < *cutoff {
                    (osc.omega0() * t).sin()
                } else {
                    0.0
                }
            }
            Self::FirstOrder { a } => (-a * t).exp(),
        }
    }

    fn breakpoints_in(&self, a: f64, b: f64, out: &mut Vec<f64>) {
        if 0.0 > a && 0.0 < b {
            out.push(0.0);
        }
        match self {
            Self::Exact { osc } | Self::Normalized { osc } => {
                // zero crossings at k pi / omega_d keep panels half-wave sized
                let half = PI / osc.omega_d();
                let k0 = (a / half).floor().max(1.0) as i64;
                let k1 = (b / half).ceil() as i64;
                for k in k0..=k1 {
                    let t = k as f64 * half;
                    if t > a && t < b {
                        out.push(t);
                    }
                }
            }
            Self::SimplifiedHs { osc, cutoff } => {
                let half = PI / osc.omega0();
                let k0 = (a / half).floor().max(1.0) as i64;
                let k1 = ((b.min(*cutoff)) / half).ceil() as i64;
                for k in k0..=k1 {
                    let t = k as f64 * half;
                    if t > a && t < b && t <= *cutoff {
                        out.push(t);
                    }
                }
                if *cutoff > a && *cutoff < b {
                    out.push(*cutoff);
                }
            }
            Self::FirstOrder { .. } => {}
        }
    }

    fn quadrature_scale(&self) -> Option<f64> {
        match self {
            Self::Exact { osc } | Self::Normalized { osc } => Some(osc.damped_period()),
            Self::SimplifiedHs { osc, .. } => Some(osc.natural_period()),
            Self::FirstOrder { a } => Some(1.0 / a),
        }
    }

    fn oscillation_period(&self) -> Option<f64> {
        match self {
            Self::Exact { osc } | Self::Normalized { osc } => Some(osc.damped_period()),
            Self::SimplifiedHs { osc, .. } => Some(osc.natural_period()),
            Self::FirstOrder { .. } => None,
        }
    }

    fn descriptor(&self) -> Value {
        self.to_json()
    }
}

impl Serialize for ImpulseResponse {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ImpulseResponse {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let value = Value::deserialize(deserializer)?;
        let params = value
            .get("params")
            .ok_or_else(|| de::Error::custom("missing params"))?;
        ImpulseResponse::from_json_params(params).map_err(de::Error::custom)
    }
}
