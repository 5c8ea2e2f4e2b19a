//! Time-function representation and the interval-restricted Euclidean
//! function space (norm, inner product, scaling, periodic extension, time
//! reversal) used by every other module.
//!
//! Values are plain `f64` in "signal units"; the norm carries units of
//! signal * s^(1/2) and the inner product signal^2 * s. Units are
//! documentation only and never checked at runtime.

use crate::oscillator::ImpulseResponse;
use crate::quad;
pub use crate::quad::{Interval, QuadError, QuadRule, QuadratureConfig};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};
use thiserror::Error;

/// Errors from waveform construction, scaling and descriptor parsing.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum WaveformError {
    #[error("period must be positive and finite (got {0})")]
    InvalidPeriod(f64),
    #[error("window requires t_off > t_on (got t_on={t_on}, t_off={t_off})")]
    InvalidWindow { t_on: f64, t_off: f64 },
    #[error("sampled waveform requires dt > 0 (got {0})")]
    InvalidSampleStep(f64),
    #[error("sampled waveform requires at least 2 values (got {0})")]
    TooFewSamples(usize),
    #[error("parameter {name} must be finite (got {value})")]
    NonFiniteParam { name: &'static str, value: f64 },
    #[error("waveform vanishes on the interval; cannot scale a zero-norm waveform")]
    ZeroNorm,
    #[error("target norm must be positive (got {0})")]
    InvalidTargetNorm(f64),
    #[error("empty superposition")]
    EmptySum,
    #[error("unknown waveform kind {0:?}")]
    UnknownKind(String),
    #[error("descriptor field {0:?} is missing or has the wrong type")]
    BadDescriptorField(String),
    #[error("descriptor parse error: {0}")]
    BadDescriptor(String),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error("impulse response descriptor: {0}")]
    Kernel(String),
}

/// Evaluable time function: the shared view of waveforms and impulse
/// responses taken by the quadrature-backed operations.
///
/// `breakpoints_in` reports instants where the function is not smooth (jumps,
/// kinks, zero-crossing alignment points); integration panels are split
/// there. `quadrature_scale` is the shortest oscillation period, with
/// `f64::INFINITY` meaning piecewise-polynomial between breakpoints and
/// `None` meaning unknown.
pub trait TimeFunction {
    fn eval(&self, t: f64) -> f64;

    fn breakpoints_in(&self, a: f64, b: f64, out: &mut Vec<f64>) {
        let _ = (a, b, out);
    }

    fn quadrature_scale(&self) -> Option<f64> {
        None
    }

    /// Exact period when the function is periodic for t >= 0.
    fn period(&self) -> Option<f64> {
        None
    }

    /// Period of the underlying oscillation for functions that oscillate
    /// without being exactly periodic (damped kernels).
    fn oscillation_period(&self) -> Option<f64> {
        self.period()
    }

    /// JSON descriptor for provenance metadata.
    fn descriptor(&self) -> Value {
        json!({ "kind": "opaque" })
    }
}

impl<T: TimeFunction + ?Sized> TimeFunction for &T {
    fn eval(&self, t: f64) -> f64 {
        (**self).eval(t)
    }
    fn breakpoints_in(&self, a: f64, b: f64, out: &mut Vec<f64>) {
        (**self).breakpoints_in(a, b, out)
    }
    fn quadrature_scale(&self) -> Option<f64> {
        (**self).quadrature_scale()
    }
    fn period(&self) -> Option<f64> {
        (**self).period()
    }
    fn oscillation_period(&self) -> Option<f64> {
        (**self).oscillation_period()
    }
    fn descriptor(&self) -> Value {
        (**self).descriptor()
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Repr {
    Sine {
        amplitude: f64,
        omega: f64,
        phase: f64,
    },
    Square {
        amplitude: f64,
        period: f64,
    },
    Triangle {
        amplitude: f64,
        period: f64,
    },
    UnitStep {
        onset: f64,
    },
    PulseTrain {
        values: Vec<f64>,
        period: f64,
    },
    Windowed {
        inner: Box<Waveform>,
        t_on: f64,
        t_off: f64,
    },
    Scaled {
        inner: Box<Waveform>,
        factor: f64,
    },
    TimeReversed {
        inner: Box<Waveform>,
        duration: f64,
    },
    Periodic {
        inner: Box<Waveform>,
        period: f64,
    },
    Antiperiodic {
        inner: Box<Waveform>,
        half_period: f64,
    },
    Sampled {
        t0: f64,
        dt: f64,
        values: Vec<f64>,
    },
    Sum {
        terms: Vec<Waveform>,
    },
    Kernel {
        resp: ImpulseResponse,
    },
}

/// An evaluable time-function descriptor.
///
/// Construction goes through the checked constructors so the variant
/// invariants (positive periods, ordered windows, sample counts) always hold.
#[derive(Debug, Clone, PartialEq)]
pub struct Waveform {
    repr: Repr,
}

fn ensure_finite(name: &'static str, value: f64) -> Result<f64, WaveformError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(WaveformError::NonFiniteParam { name, value })
    }
}

fn ensure_period(period: f64) -> Result<f64, WaveformError> {
    if period.is_finite() && period > 0.0 {
        Ok(period)
    } else {
        Err(WaveformError::InvalidPeriod(period))
    }
}

impl Waveform {
    /// `amplitude * sin(omega * t + phase)`.
    pub fn sine(amplitude: f64, omega: f64, phase: f64) -> Result<Self, WaveformError> {
        ensure_finite("amplitude", amplitude)?;
        ensure_finite("omega", omega)?;
        ensure_finite("phase", phase)?;
        Ok(Self {
            repr: Repr::Sine {
                amplitude,
                omega,
                phase,
            },
        })
    }

    /// Rectangular wave: `+amplitude` on the first half-period, `-amplitude`
    /// on the second. At a switching instant the left value is used; the wave
    /// starts positive at t = 0.
    pub fn square(amplitude: f64, period: f64) -> Result<Self, WaveformError> {
        ensure_finite("amplitude", amplitude)?;
        Ok(Self {
            repr: Repr::Square {
                amplitude,
                period: ensure_period(period)?,
            },
        })
    }

    /// Symmetric triangle wave: 0 at t = 0, peaks `+amplitude` at T/4 and
    /// `-amplitude` at 3T/4.
    pub fn triangle(amplitude: f64, period: f64) -> Result<Self, WaveformError> {
        ensure_finite("amplitude", amplitude)?;
        Ok(Self {
            repr: Repr::Triangle {
                amplitude,
                period: ensure_period(period)?,
            },
        })
    }

    /// Unit step u(t - onset); value 1 at the onset instant itself.
    pub fn unit_step(onset: f64) -> Result<Self, WaveformError> {
        ensure_finite("onset", onset)?;
        Ok(Self {
            repr: Repr::UnitStep { onset },
        })
    }

    /// One period of samples held constant over each sub-interval
    /// (zero-order hold), repeated with the given period.
    pub fn pulse_train(values: Vec<f64>, period: f64) -> Result<Self, WaveformError> {
        if values.len() < 2 {
            return Err(WaveformError::TooFewSamples(values.len()));
        }
        for &v in &values {
            ensure_finite("pulse_train value", v)?;
        }
        Ok(Self {
            repr: Repr::PulseTrain {
                values,
                period: ensure_period(period)?,
            },
        })
    }

    /// Zero outside `[t_on, t_off)`, the inner waveform inside.
    pub fn windowed(inner: Waveform, t_on: f64, t_off: f64) -> Result<Self, WaveformError> {
        ensure_finite("t_on", t_on)?;
        ensure_finite("t_off", t_off)?;
        if t_off <= t_on {
            return Err(WaveformError::InvalidWindow { t_on, t_off });
        }
        Ok(Self {
            repr: Repr::Windowed {
                inner: Box::new(inner),
                t_on,
                t_off,
            },
        })
    }

    pub fn scaled(inner: Waveform, factor: f64) -> Result<Self, WaveformError> {
        ensure_finite("factor", factor)?;
        Ok(Self {
            repr: Repr::Scaled {
                inner: Box::new(inner),
                factor,
            },
        })
    }

    /// Evaluates `inner(duration - t)` on `[0, duration)`, zero elsewhere.
    pub fn time_reversed(inner: Waveform, duration: f64) -> Result<Self, WaveformError> {
        Ok(Self {
            repr: Repr::TimeReversed {
                inner: Box::new(inner),
                duration: ensure_period(duration)?,
            },
        })
    }

    /// Periodic continuation of the inner waveform's `[0, period)` restriction.
    pub fn periodic_extension(inner: Waveform, period: f64) -> Result<Self, WaveformError> {
        Ok(Self {
            repr: Repr::Periodic {
                inner: Box::new(inner),
                period: ensure_period(period)?,
            },
        })
    }

    /// Antiperiodic continuation: each successive copy of the inner
    /// waveform's `[0, half_period)` restriction flips sign, giving a wave of
    /// period `2 * half_period`.
    pub fn antiperiodic_extension(inner: Waveform, half_period: f64) -> Result<Self, WaveformError> {
        Ok(Self {
            repr: Repr::Antiperiodic {
                inner: Box::new(inner),
                half_period: ensure_period(half_period)?,
            },
        })
    }

    /// Uniform-grid samples with linear interpolation, zero outside the grid.
    pub fn sampled(t0: f64, dt: f64, values: Vec<f64>) -> Result<Self, WaveformError> {
        ensure_finite("t0", t0)?;
        if !dt.is_finite() || dt <= 0.0 {
            return Err(WaveformError::InvalidSampleStep(dt));
        }
        if values.len() < 2 {
            return Err(WaveformError::TooFewSamples(values.len()));
        }
        for &v in &values {
            ensure_finite("sample", v)?;
        }
        Ok(Self {
            repr: Repr::Sampled { t0, dt, values },
        })
    }

    /// Pointwise sum of the terms.
    pub fn sum(terms: Vec<Waveform>) -> Result<Self, WaveformError> {
        if terms.is_empty() {
            return Err(WaveformError::EmptySum);
        }
        Ok(Self {
            repr: Repr::Sum { terms },
        })
    }

    /// Wraps an impulse response so it can enter the waveform combinators
    /// (time reversal, scaling, periodic extension).
    pub fn kernel(resp: ImpulseResponse) -> Self {
        Self {
            repr: Repr::Kernel { resp },
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match &self.repr {
            Repr::Sine { .. } => "sine",
            Repr::Square { .. } => "square",
            Repr::Triangle { .. } => "triangle",
            Repr::UnitStep { .. } => "unit_step",
            Repr::PulseTrain { .. } => "pulse_train",
            Repr::Windowed { .. } => "windowed",
            Repr::Scaled { .. } => "scaled",
            Repr::TimeReversed { .. } => "time_reversed",
            Repr::Periodic { .. } => "periodic",
            Repr::Antiperiodic { .. } => "antiperiodic",
            Repr::Sampled { .. } => "sampled",
            Repr::Sum { .. } => "sum",
            Repr::Kernel { .. } => "kernel",
        }
    }
}

fn rem_period(t: f64, period: f64) -> f64 {
    let r = t.rem_euclid(period);
    // rem_euclid can return `period` itself when t is a tiny negative number.
    if r >= period {
        r - period
    } else {
        r
    }
}

fn square_value(amplitude: f64, period: f64, t: f64) -> f64 {
    if t == 0.0 {
        return amplitude;
    }
    let mut r = t.rem_euclid(period);
    if r == 0.0 {
        // a switching instant at a period boundary takes the left value
        r = period;
    }
    if r <= 0.5 * period {
        amplitude
    } else {
        -amplitude
    }
}

fn triangle_value(amplitude: f64, period: f64, t: f64) -> f64 {
    let r = rem_period(t, period) / period;
    let v = if r <= 0.25 {
        4.0 * r
    } else if r <= 0.75 {
        2.0 - 4.0 * r
    } else {
        4.0 * r - 4.0
    };
    amplitude * v
}

fn push_multiples(step: f64, offset: f64, a: f64, b: f64, out: &mut Vec<f64>) {
    if step <= 0.0 {
        return;
    }
    let k0 = ((a - offset) / step).floor() as i64;
    let k1 = ((b - offset) / step).ceil() as i64;
    for k in k0..=k1 {
        let t = offset + k as f64 * step;
        if t > a && t < b {
            out.push(t);
        }
    }
}

fn merge_scales(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    }
}

impl TimeFunction for Waveform {
    fn eval(&self, t: f64) -> f64 {
        match &self.repr {
            Repr::Sine {
                amplitude,
                omega,
                phase,
            } => amplitude * (omega * t + phase).sin(),
            Repr::Square { amplitude, period } => square_value(*amplitude, *period, t),
            Repr::Triangle { amplitude, period } => triangle_value(*amplitude, *period, t),
            Repr::UnitStep { onset } => {
                if t >= *onset {
                    1.0
                } else {
                    0.0
                }
            }
            Repr::PulseTrain { values, period } => {
                let n = values.len();
                let r = rem_period(t, *period);
                let idx = ((r / period * n as f64).floor() as usize).min(n - 1);
                values[idx]
            }
            Repr::Windowed { inner, t_on, t_off } => {
                if t >= *t_on && t < *t_off {
                    inner.eval(t)
                } else {
                    0.0
                }
            }
            Repr::Scaled { inner, factor } => factor * inner.eval(t),
            Repr::TimeReversed { inner, duration } => {
                if t >= 0.0 && t < *duration {
                    inner.eval(duration - t)
                } else {
                    0.0
                }
            }
            Repr::Periodic { inner, period } => inner.eval(rem_period(t, *period)),
            Repr::Antiperiodic {
                inner,
                half_period,
            } => {
                let m = (t / half_period).floor();
                let r = t - m * half_period;
                let sign = if (m as i64).rem_euclid(2) == 0 {
                    1.0
                } else {
                    -1.0
                };
                sign * inner.eval(r.clamp(0.0, *half_period))
            }
            Repr::Sampled { t0, dt, values } => {
                let n = values.len();
                let t_end = t0 + dt * (n - 1) as f64;
                if t < *t0 || t > t_end {
                    return 0.0;
                }
                let u = (t - t0) / dt;
                let i = (u.floor() as usize).min(n - 2);
                let frac = u - i as f64;
                values[i] + frac * (values[i + 1] - values[i])
            }
            Repr::Sum { terms } => terms.iter().map(|w| w.eval(t)).sum(),
            Repr::Kernel { resp } => resp.eval(t),
        }
    }

    fn breakpoints_in(&self, a: f64, b: f64, out: &mut Vec<f64>) {
        match &self.repr {
            Repr::Sine { .. } => {}
            Repr::Square { period, .. } => push_multiples(period / 2.0, 0.0, a, b, out),
            Repr::Triangle { period, .. } => {
                push_multiples(period / 2.0, period / 4.0, a, b, out)
            }
            Repr::UnitStep { onset } => {
                if *onset > a && *onset < b {
                    out.push(*onset);
                }
            }
            Repr::PulseTrain { values, period } => {
                push_multiples(period / values.len() as f64, 0.0, a, b, out)
            }
            Repr::Windowed { inner, t_on, t_off } => {
                if *t_on > a && *t_on < b {
                    out.push(*t_on);
                }
                if *t_off > a && *t_off < b {
                    out.push(*t_off);
                }
                inner.breakpoints_in(a.max(*t_on), b.min(*t_off), out);
            }
            Repr::Scaled { inner, .. } => inner.breakpoints_in(a, b, out),
            Repr::TimeReversed { inner, duration } => {
                if 0.0 > a && 0.0 < b {
                    out.push(0.0);
                }
                if *duration > a && *duration < b {
                    out.push(*duration);
                }
                let lo = a.max(0.0);
                let hi = b.min(*duration);
                if hi > lo {
                    let mut inner_breaks = Vec::new();
                    inner.breakpoints_in(duration - hi, duration - lo, &mut inner_breaks);
                    out.extend(inner_breaks.into_iter().map(|d| duration - d));
                }
            }
            Repr::Periodic { inner, period } => {
                push_multiples(*period, 0.0, a, b, out);
                let k0 = (a / period).floor() as i64;
                let k1 = (b / period).ceil() as i64;
                let mut inner_breaks = Vec::new();
                inner.breakpoints_in(0.0, *period, &mut inner_breaks);
                for k in k0..=k1 {
                    let shift = k as f64 * period;
                    for &d in &inner_breaks {
                        let t = d + shift;
                        if t > a && t < b {
                            out.push(t);
                        }
                    }
                }
            }
            Repr::Antiperiodic {
                inner,
                half_period,
            } => {
                push_multiples(*half_period, 0.0, a, b, out);
                let k0 = (a / half_period).floor() as i64;
                let k1 = (b / half_period).ceil() as i64;
                let mut inner_breaks = Vec::new();
                inner.breakpoints_in(0.0, *half_period, &mut inner_breaks);
                for k in k0..=k1 {
                    let shift = k as f64 * half_period;
                    for &d in &inner_breaks {
                        let t = d + shift;
                        if t > a && t < b {
                            out.push(t);
                        }
                    }
                }
            }
            Repr::Sampled { t0, dt, values } => {
                let n = values.len();
                let t_end = t0 + dt * (n - 1) as f64;
                if *t0 > a && *t0 < b {
                    out.push(*t0);
                }
                if t_end > a && t_end < b {
                    out.push(t_end);
                }
                push_multiples(*dt, *t0, a.max(*t0), b.min(t_end), out);
            }
            Repr::Sum { terms } => {
                for w in terms {
                    w.breakpoints_in(a, b, out);
                }
            }
            Repr::Kernel { resp } => resp.breakpoints_in(a, b, out),
        }
    }

    fn quadrature_scale(&self) -> Option<f64> {
        match &self.repr {
            Repr::Sine { omega, .. } => {
                if *omega == 0.0 {
                    Some(f64::INFINITY)
                } else {
                    Some(std::f64::consts::TAU / omega.abs())
                }
            }
            // piecewise constant / linear between breakpoints
            Repr::Square { .. }
            | Repr::Triangle { .. }
            | Repr::UnitStep { .. }
            | Repr::PulseTrain { .. }
            | Repr::Sampled { .. } => Some(f64::INFINITY),
            Repr::Windowed { inner, .. }
            | Repr::Scaled { inner, .. }
            | Repr::TimeReversed { inner, .. }
            | Repr::Periodic { inner, .. }
            | Repr::Antiperiodic { inner, .. } => inner.quadrature_scale(),
            Repr::Sum { terms } => terms
                .iter()
                .map(|w| w.quadrature_scale())
                .fold(None, merge_scales),
            Repr::Kernel { resp } => resp.quadrature_scale(),
        }
    }

    fn period(&self) -> Option<f64> {
        match &self.repr {
            Repr::Sine { omega, .. } => {
                if *omega == 0.0 {
                    None
                } else {
                    Some(std::f64::consts::TAU / omega.abs())
                }
            }
            Repr::Square { period, .. }
            | Repr::Triangle { period, .. }
            | Repr::PulseTrain { period, .. }
            | Repr::Periodic { period, .. } => Some(*period),
            Repr::Antiperiodic { half_period, .. } => Some(2.0 * half_period),
            Repr::Scaled { inner, .. } => inner.period(),
            Repr::Sum { terms } => {
                let periods: Option<Vec<f64>> = terms.iter().map(|w| w.period()).collect();
                let periods = periods?;
                let t = periods.iter().cloned().fold(f64::MIN, f64::max);
                for p in &periods {
                    let ratio = t / p;
                    if (ratio - ratio.round()).abs() > 1e-9 * ratio.max(1.0) {
                        return None;
                    }
                }
                Some(t)
            }
            _ => None,
        }
    }

    fn oscillation_period(&self) -> Option<f64> {
        match &self.repr {
            Repr::Kernel { resp } => resp.oscillation_period(),
            Repr::Scaled { inner, .. } => inner.oscillation_period(),
            _ => self.period(),
        }
    }

    fn descriptor(&self) -> Value {
        self.to_json()
    }
}

// --- JSON descriptor ({"kind": ..., "params": {...}, "inner": {...}}) -----

fn get_f64(params: &Value, name: &str) -> Result<f64, WaveformError> {
    params
        .get(name)
        .and_then(Value::as_f64)
        .ok_or_else(|| WaveformError::BadDescriptorField(name.to_string()))
}

fn get_vec(params: &Value, name: &str) -> Result<Vec<f64>, WaveformError> {
    let arr = params
        .get(name)
        .and_then(Value::as_array)
        .ok_or_else(|| WaveformError::BadDescriptorField(name.to_string()))?;
    arr.iter()
        .map(|v| {
            v.as_f64()
                .ok_or_else(|| WaveformError::BadDescriptorField(name.to_string()))
        })
        .collect()
}

impl Waveform {
    pub fn to_json(&self) -> Value {
        match &self.repr {
            Repr::Sine {
                amplitude,
                omega,
                phase,
            } => json!({
                "kind": "sine",
                "params": { "amplitude": amplitude, "omega": omega, "phase": phase },
            }),
            Repr::Square { amplitude, period } => json!({
                "kind": "square",
                "params": { "amplitude": amplitude, "period": period },
            }),
            Repr::Triangle { amplitude, period } => json!({
                "kind": "triangle",
                "params": { "amplitude": amplitude, "period": period },
            }),
            Repr::UnitStep { onset } => json!({
                "kind": "unit_step",
                "params": { "onset": onset },
            }),
            Repr::PulseTrain { values, period } => json!({
                "kind": "pulse_train",
                "params": { "values": values, "period": period },
            }),
            Repr::Windowed { inner, t_on, t_off } => json!({
                "kind": "windowed",
                "params": { "t_on": t_on, "t_off": t_off },
                "inner": inner.to_json(),
            }),
            Repr::Scaled { inner, factor } => json!({
                "kind": "scaled",
                "params": { "factor": factor },
                "inner": inner.to_json(),
            }),
            Repr::TimeReversed { inner, duration } => json!({
                "kind": "time_reversed",
                "params": { "duration": duration },
                "inner": inner.to_json(),
            }),
            Repr::Periodic { inner, period } => json!({
                "kind": "periodic",
                "params": { "period": period },
                "inner": inner.to_json(),
            }),
            Repr::Antiperiodic {
                inner,
                half_period,
            } => json!({
                "kind": "antiperiodic",
                "params": { "half_period": half_period },
                "inner": inner.to_json(),
            }),
            Repr::Sampled { t0, dt, values } => json!({
                "kind": "sampled",
                "params": { "t0": t0, "dt": dt, "values": values },
            }),
            Repr::Sum { terms } => json!({
                "kind": "sum",
                "terms": terms.iter().map(|w| w.to_json()).collect::<Vec<_>>(),
            }),
            Repr::Kernel { resp } => json!({
                "kind": "kernel",
                "params": resp.to_json_params(),
            }),
        }
    }

    pub fn from_json(value: &Value) -> Result<Self, WaveformError> {
        let kind = value
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| WaveformError::BadDescriptorField("kind".to_string()))?;
        let params = value.get("params").cloned().unwrap_or(json!({}));
        let inner = || -> Result<Waveform, WaveformError> {
            let v = value
                .get("inner")
                .ok_or_else(|| WaveformError::BadDescriptorField("inner".to_string()))?;
            Waveform::from_json(v)
        };
        match kind {
            "sine" => Waveform::sine(
                get_f64(&params, "amplitude")?,
                get_f64(&params, "omega")?,
                params.get("phase").and_then(Value::as_f64).unwrap_or(0.0),
            ),
            "square" => Waveform::square(
                get_f64(&params, "amplitude")?,
                get_f64(&params, "period")?,
            ),
            "triangle" => Waveform::triangle(
                get_f64(&params, "amplitude")?,
                get_f64(&params, "period")?,
            ),
            "unit_step" => Waveform::unit_step(get_f64(&params, "onset")?),
            "pulse_train" => Waveform::pulse_train(
                get_vec(&params, "values")?,
                get_f64(&params, "period")?,
            ),
            "windowed" => Waveform::windowed(
                inner()?,
                get_f64(&params, "t_on")?,
                get_f64(&params, "t_off")?,
            ),
            "scaled" => Waveform::scaled(inner()?, get_f64(&params, "factor")?),
            "time_reversed" => Waveform::time_reversed(inner()?, get_f64(&params, "duration")?),
            "periodic" => Waveform::periodic_extension(inner()?, get_f64(&params, "period")?),
            "antiperiodic" => {
                Waveform::antiperiodic_extension(inner()?, get_f64(&params, "half_period")?)
            }
            "sampled" => Waveform::sampled(
                get_f64(&params, "t0")?,
                get_f64(&params, "dt")?,
                get_vec(&params, "values")?,
            ),
            "sum" => {
                let terms = value
                    .get("terms")
                    .and_then(Value::as_array)
                    .ok_or_else(|| WaveformError::BadDescriptorField("terms".to_string()))?;
                Waveform::sum(
                    terms
                        .iter()
                        .map(Waveform::from_json)
                        .collect::<Result<Vec<_>, _>>()?,
                )
            }
            "kernel" => Ok(Waveform::kernel(
                ImpulseResponse::from_json_params(&params)
                    .map_err(|e| WaveformError::Kernel(e.to_string()))?,
            )),
            other => Err(WaveformError::UnknownKind(other.to_string())),
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self, WaveformError> {
        let value: Value =
            serde_json::from_str(s).map_err(|e| WaveformError::BadDescriptor(e.to_string()))?;
        Self::from_json(&value)
    }
}

impl Serialize for Waveform {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Waveform {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let value = Value::deserialize(deserializer)?;
        Waveform::from_json(&value).map_err(de::Error::custom)
    }
}

// --- function-space operations --------------------------------------------

fn merged_breaks<F: TimeFunction + ?Sized, G: TimeFunction + ?Sized>(
    f: &F,
    g: &G,
    iv: Interval,
) -> Vec<f64> {
    let mut breaks = Vec::new();
    f.breakpoints_in(iv.start(), iv.end(), &mut breaks);
    g.breakpoints_in(iv.start(), iv.end(), &mut breaks);
    breaks
}

/// `sqrt(int w^2 dt)` over the interval; units signal * s^(1/2).
pub fn norm<W: TimeFunction + ?Sized>(w: &W, iv: Interval, q: &QuadratureConfig) -> f64 {
    let mut breaks = Vec::new();
    w.breakpoints_in(iv.start(), iv.end(), &mut breaks);
    let val = quad::integrate(
        &|t| {
            let v = w.eval(t);
            v * v
        },
        iv,
        breaks,
        w.quadrature_scale(),
        q,
    );
    val.max(0.0).sqrt()
}

/// `int w1 * w2 dt` over the interval; units signal^2 * s. Symmetric in its
/// arguments.
pub fn inner_product<F: TimeFunction + ?Sized, G: TimeFunction + ?Sized>(
    f: &F,
    g: &G,
    iv: Interval,
    q: &QuadratureConfig,
) -> f64 {
    let breaks = merged_breaks(f, g, iv);
    let scale = merge_scales(f.quadrature_scale(), g.quadrature_scale());
    quad::integrate(&|t| f.eval(t) * g.eval(t), iv, breaks, scale, q)
}

/// Norms and inner product of a pair evaluated on one shared node set, so
/// that `|fg| <= sqrt(ff) * sqrt(gg)` holds exactly for the returned values.
pub fn gram_pair<F: TimeFunction + ?Sized, G: TimeFunction + ?Sized>(
    f: &F,
    g: &G,
    iv: Interval,
    q: &QuadratureConfig,
) -> GramPair {
    let breaks = merged_breaks(f, g, iv);
    let scale = merge_scales(f.quadrature_scale(), g.quadrature_scale());
    let p = quad::integrate_pair(&|t| f.eval(t), &|t| g.eval(t), iv, breaks, scale, q);
    GramPair {
        norm_f: p.ff.max(0.0).sqrt(),
        norm_g: p.gg.max(0.0).sqrt(),
        inner: p.fg,
    }
}

/// Consistent norm/inner-product triple from [`gram_pair`].
#[derive(Debug, Clone, Copy)]
pub struct GramPair {
    pub norm_f: f64,
    pub norm_g: f64,
    pub inner: f64,
}

/// Scales `w` so its norm over `iv` equals `target`; the scale factor is
/// strictly positive.
pub fn scale_to_norm(
    w: &Waveform,
    target: f64,
    iv: Interval,
    q: &QuadratureConfig,
) -> Result<Waveform, WaveformError> {
    if !(target > 0.0) || !target.is_finite() {
        return Err(WaveformError::InvalidTargetNorm(target));
    }
    let n = norm(w, iv, q);
    if n <= 0.0 || !n.is_finite() {
        return Err(WaveformError::ZeroNorm);
    }
    Waveform::scaled(w.clone(), target / n)
}

/// Periodic continuation of `w`'s `[0, period)` restriction.
pub fn periodic_extend(w: &Waveform, period: f64) -> Result<Waveform, WaveformError> {
    Waveform::periodic_extension(w.clone(), period)
}

/// `w(duration - t)` on `[0, duration)`, zero elsewhere.
pub fn time_reverse_on_interval(w: &Waveform, duration: f64) -> Result<Waveform, WaveformError> {
    Waveform::time_reversed(w.clone(), duration)
}

/// Constructor hub for the named stock waveforms.
///
/// `scale` is the angular frequency for `"sine"` and the period for
/// `"square"` and `"triangle"`.
pub fn standard_waveform(kind: &str, amplitude: f64, scale: f64) -> Result<Waveform, WaveformError> {
    match kind {
        "sine" => Waveform::sine(amplitude, scale, 0.0),
        "square" => Waveform::square(amplitude, scale),
        "triangle" => Waveform::triangle(amplitude, scale),
        other => Err(WaveformError::UnknownKind(other.to_string())),
    }
}
