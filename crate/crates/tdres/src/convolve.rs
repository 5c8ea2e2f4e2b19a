//! The zero-state-response engine: numerical convolution of an impulse
//! response with an input waveform, extreme-sample envelopes, linear-growth
//! fits, saturation levels, periodic tails, and beat-period estimation.

use crate::oscillator::{ImpulseResponse, SecondOrderOscillator};
use crate::quad;
use crate::waveform::{Interval, QuadratureConfig, TimeFunction};
use rayon::prelude::*;
use serde_json::{json, Value};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConvolveError {
    #[error("horizon must be positive (got {0})")]
    InvalidHorizon(f64),
    #[error("dt must be positive (got {0})")]
    InvalidDt(f64),
    #[error("dt = {dt} too coarse for an oscillatory kernel; need dt <= {max_dt} (period/64)")]
    DtTooCoarse { dt: f64, max_dt: f64 },
    #[error("evaluation instant must be nonnegative (got {0})")]
    NegativeTime(f64),
    #[error("k_max must be at least 1 (got {0})")]
    InvalidKMax(usize),
    #[error("slope fit needs at least 2 envelope points in k = {k_from}..={k_to}")]
    TooFewPoints { k_from: usize, k_to: usize },
    #[error("lossless system: no saturation exists (gamma = 0)")]
    LosslessSaturation,
    #[error("input waveform is not periodic; operation requires a period")]
    NonPeriodicInput,
    #[error("drive must be detuned: |omega - omega0| = {detuning} <= 3 gamma = {guard}")]
    NotDetuned { detuning: f64, guard: f64 },
    #[error("horizon {horizon} too short: needs at least 3 beat periods ({needed})")]
    InsufficientHorizon { horizon: f64, needed: f64 },
    #[error("no beats detected: envelope has fewer than two minima")]
    NoBeatsDetected,
}

/// Sampled zero-state response on a uniform grid, with the descriptors of the
/// input and kernel that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseTrace {
    t0: f64,
    dt: f64,
    values: Vec<f64>,
    input_descriptor: Value,
    kernel_descriptor: Value,
    quadrature: QuadratureConfig,
}

impl ResponseTrace {
    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn time_at(&self, i: usize) -> f64 {
        self.t0 + self.dt * i as f64
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter_points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(|(i, &v)| (self.time_at(i), v))
    }

    /// CSV body with header `t,f_out`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,f_out\n");
        for (t, v) in self.iter_points() {
            out.push_str(&format!("{},{}\n", t, v));
        }
        out
    }

    /// JSON sidecar describing input, kernel, quadrature and grid.
    pub fn metadata(&self) -> Value {
        json!({
            "input": self.input_descriptor,
            "kernel": self.kernel_descriptor,
            "quadrature": self.quadrature,
            "t0": self.t0,
            "dt": self.dt,
            "samples": self.values.len(),
            "units": { "t": "s", "f_out": "signal" },
        })
    }
}

/// One extreme sample (t_k, f_out(t_k)) at t_k = k pi / omega_d.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremeSample {
    pub k: usize,
    pub t_k: f64,
    pub value: f64,
}

impl ExtremeSample {
    /// The sign the lossless resonant pattern predicts: (-1)^(k+1).
    pub fn expected_sign(&self) -> f64 {
        if self.k % 2 == 1 {
            1.0
        } else {
            -1.0
        }
    }
}

/// The sequence of extreme samples of a response.
#[derive(Debug, Clone, PartialEq)]
pub struct Envelope {
    entries: Vec<ExtremeSample>,
}

impl Envelope {
    pub fn entries(&self) -> &[ExtremeSample] {
        &self.entries
    }

    /// True when the recorded values alternate +, -, +, ... in k.
    pub fn signs_alternate(&self) -> bool {
        self.entries
            .iter()
            .all(|e| e.value == 0.0 || e.value.signum() == e.expected_sign())
    }

    /// CSV body with header `k,t_k,value`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,t_k,value\n");
        for e in &self.entries {
            out.push_str(&format!("{},{},{}\n", e.k, e.t_k, e.value));
        }
        out
    }
}

/// Least-squares line through the rectified envelope points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeFit {
    pub slope: f64,
    pub intercept: f64,
    pub max_relative_residual: f64,
    pub k_from: usize,
    pub k_to: usize,
}

fn convolution_breaks<K, F>(kernel: &K, input: &F, t: f64) -> Vec<f64>
where
    K: TimeFunction + ?Sized,
    F: TimeFunction + ?Sized,
{
    let mut breaks = Vec::new();
    kernel.breakpoints_in(0.0, t, &mut breaks);
    let mut input_breaks = Vec::new();
    input.breakpoints_in(0.0, t, &mut input_breaks);
    breaks.extend(input_breaks.into_iter().map(|d| t - d));
    breaks
}

fn merge_scales(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    }
}

/// Single-instant convolution value: integral of kernel(l) * input(t - l)
/// over l in [0, t].
pub fn zsr_at<K, F>(kernel: &K, input: &F, t: f64, q: &QuadratureConfig) -> Result<f64, ConvolveError>
where
    K: TimeFunction + ?Sized,
    F: TimeFunction + ?Sized,
{
    if t < 0.0 {
        return Err(ConvolveError::NegativeTime(t));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let iv = Interval::new(0.0, t).expect("t > 0 checked above");
    let breaks = convolution_breaks(kernel, input, t);
    let scale = merge_scales(kernel.quadrature_scale(), input.quadrature_scale());
    Ok(quad::integrate(
        &|l| kernel.eval(l) * input.eval(t - l),
        iv,
        breaks,
        scale,
        q,
    ))
}

fn check_dt<K: TimeFunction + ?Sized>(kernel: &K, dt: f64) -> Result<(), ConvolveError> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(ConvolveError::InvalidDt(dt));
    }
    if let Some(p) = kernel.oscillation_period() {
        let max_dt = p / 64.0;
        if dt > max_dt {
            return Err(ConvolveError::DtTooCoarse { dt, max_dt });
        }
    }
    Ok(())
}

/// Full zero-state-response trace on the grid t_i = i * dt up to `horizon`.
///
/// Each sample is an independent convolution integral (direct evaluation, no
/// transform); samples are computed in parallel and assembled in grid order.
pub fn zsr<K, F>(
    kernel: &K,
    input: &F,
    horizon: f64,
    dt: f64,
    q: &QuadratureConfig,
) -> Result<ResponseTrace, ConvolveError>
where
    K: TimeFunction + Sync + ?Sized,
    F: TimeFunction + Sync + ?Sized,
{
    if !(horizon > 0.0) || !horizon.is_finite() {
        return Err(ConvolveError::InvalidHorizon(horizon));
    }
    check_dt(kernel, dt)?;
    let n = (horizon / dt).floor() as usize + 1;
    let values: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let t = i as f64 * dt;
            zsr_at(kernel, input, t, q).expect("grid instants are nonnegative")
        })
        .collect();
    Ok(ResponseTrace {
        t0: 0.0,
        dt,
        values,
        input_descriptor: input.descriptor(),
        kernel_descriptor: kernel.descriptor(),
        quadrature: *q,
    })
}

/// Extreme samples of the response at the analytic instants t_k = k pi /
/// omega_d, using the normalized kernel of `osc`.
pub fn extreme_samples<F>(
    osc: &SecondOrderOscillator,
    input: &F,
    k_max: usize,
    q: &QuadratureConfig,
) -> Result<Envelope, ConvolveError>
where
    F: TimeFunction + Sync + ?Sized,
{
    if k_max < 1 {
        return Err(ConvolveError::InvalidKMax(k_max));
    }
    let kernel = ImpulseResponse::normalized(osc);
    extremes_for_kernel(&kernel, input, 1..=k_max, osc.omega_d(), q)
}

fn extremes_for_kernel<K, F>(
    kernel: &K,
    input: &F,
    ks: std::ops::RangeInclusive<usize>,
    omega_d: f64,
    q: &QuadratureConfig,
) -> Result<Envelope, ConvolveError>
where
    K: TimeFunction + Sync + ?Sized,
    F: TimeFunction + Sync + ?Sized,
{
    let half = PI / omega_d;
    let entries: Vec<ExtremeSample> = ks
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|k| {
            let t_k = k as f64 * half;
            let value = zsr_at(kernel, input, t_k, q).expect("t_k > 0");
            ExtremeSample { k, t_k, value }
        })
        .collect();
    Ok(Envelope { entries })
}

/// Least-squares line through (t_k, |value_k|) for k in [k_from, k_to].
pub fn envelope_slope_fit(
    env: &Envelope,
    k_from: usize,
    k_to: usize,
) -> Result<EnvelopeFit, ConvolveError> {
    let pts: Vec<(f64, f64)> = env
        .entries
        .iter()
        .filter(|e| e.k >= k_from && e.k <= k_to)
        .map(|e| (e.t_k, e.value.abs()))
        .collect();
    if pts.len() < 2 || k_to < k_from + 1 {
        return Err(ConvolveError::TooFewPoints { k_from, k_to });
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    let peak = pts.iter().map(|p| p.1.abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let max_relative_residual = pts
        .iter()
        .map(|&(x, y)| ((slope * x + intercept) - y).abs() / peak)
        .fold(0.0, f64::max);
    Ok(EnvelopeFit {
        slope,
        intercept,
        max_relative_residual,
        k_from,
        k_to,
    })
}

fn saturation_k_range(osc: &SecondOrderOscillator) -> Result<(usize, usize), ConvolveError> {
    if osc.gamma() == 0.0 {
        return Err(ConvolveError::LosslessSaturation);
    }
    let half = PI / osc.omega_d();
    let k_lo = (8.0 / (osc.gamma() * half)).ceil() as usize;
    let k_hi = (12.0 / (osc.gamma() * half)).floor() as usize;
    Ok((k_lo.max(1), k_hi.max(k_lo.max(1) + 1)))
}

/// Mean of |f_out(t_k)| over the saturation window t_k in [8/gamma,
/// 12/gamma], with the normalized kernel of `osc`.
pub fn saturation_level<F>(
    osc: &SecondOrderOscillator,
    input: &F,
    q: &QuadratureConfig,
) -> Result<f64, ConvolveError>
where
    F: TimeFunction + Sync + ?Sized,
{
    let (k_lo, k_hi) = saturation_k_range(osc)?;
    let kernel = ImpulseResponse::normalized(osc);
    let env = extremes_for_kernel(&kernel, input, k_lo..=k_hi, osc.omega_d(), q)?;
    let n = env.entries.len() as f64;
    Ok(env.entries.iter().map(|e| e.value.abs()).sum::<f64>() / n)
}

/// Steady oscillation amplitude measured as sqrt(2) * RMS of the response
/// over exactly one period of the reference oscillation, starting at `t0`
/// (typically deep in the saturated regime).
///
/// For a response that has settled to `M sin(w t + phi)` the discrete mean of
/// the squared samples over one period equals M^2/2 exactly, so this recovers
/// M regardless of the sampling phase.
pub fn steady_amplitude<K, F>(
    kernel: &K,
    input: &F,
    period: f64,
    t0: f64,
    samples: usize,
    q: &QuadratureConfig,
) -> Result<f64, ConvolveError>
where
    K: TimeFunction + Sync + ?Sized,
    F: TimeFunction + Sync + ?Sized,
{
    if !(period > 0.0) {
        return Err(ConvolveError::InvalidHorizon(period));
    }
    let n = samples.max(8);
    let mean_sq: f64 = (0..n)
        .into_par_iter()
        .map(|j| {
            let t = t0 + j as f64 * period / n as f64;
            let v = zsr_at(kernel, input, t, q).expect("t >= 0");
            v * v
        })
        .sum::<f64>()
        / n as f64;
    Ok((2.0 * mean_sq).sqrt())
}

/// Result of the periodic-tail verification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodicTailReport {
    pub is_periodic: bool,
    pub measured_period: f64,
    pub max_relative_deviation: f64,
}

/// Maximum relative deviation |f_out(t + period) - f_out(t)| / max|f_out|
/// over a set of probe phases starting at `t_from`.
pub fn periodicity_drift<K, F>(
    kernel: &K,
    input: &F,
    period: f64,
    t_from: f64,
    q: &QuadratureConfig,
) -> Result<f64, ConvolveError>
where
    K: TimeFunction + Sync + ?Sized,
    F: TimeFunction + Sync + ?Sized,
{
    let phases = 16usize;
    let pairs: Vec<(f64, f64)> = (0..=phases)
        .into_par_iter()
        .map(|j| {
            let t = t_from + j as f64 * period / phases as f64;
            let a = zsr_at(kernel, input, t, q).expect("t >= 0");
            let b = zsr_at(kernel, input, t + period, q).expect("t >= 0");
            (a, b)
        })
        .collect();
    let peak = pairs
        .iter()
        .flat_map(|&(a, b)| [a.abs(), b.abs()])
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    Ok(pairs
        .iter()
        .map(|&(a, b)| (b - a).abs() / peak)
        .fold(0.0, f64::max))
}

/// Verifies that with the simplified cut kernel the response is exactly
/// periodic (within quadrature tolerance) beyond the cutoff, and reports the
/// measured period.
pub fn periodic_tail_check<F>(
    osc: &SecondOrderOscillator,
    input: &F,
    q: &QuadratureConfig,
) -> Result<PeriodicTailReport, ConvolveError>
where
    F: TimeFunction + Sync + ?Sized,
{
    let period = input.period().ok_or(ConvolveError::NonPeriodicInput)?;
    let kernel = ImpulseResponse::simplified(osc).map_err(|_| ConvolveError::LosslessSaturation)?;
    let cutoff = kernel.support_cutoff().expect("simplified kernel has a cutoff");
    let drift = periodicity_drift(&kernel, input, period, cutoff + 0.5 * period, q)?;
    Ok(PeriodicTailReport {
        is_periodic: drift < 1e-6,
        measured_period: period,
        max_relative_deviation: drift,
    })
}

/// Estimated beat structure of a detuned resonant run.
#[derive(Debug, Clone, PartialEq)]
pub struct BeatProfile {
    pub beat_period: f64,
    /// (t, |f_out(t)|) at the detected envelope minima.
    pub minima: Vec<(f64, f64)>,
}

/// Drives the oscillator with a unit sine at `omega_drive` and estimates the
/// beat period as twice the median spacing between consecutive minima of the
/// rectified extreme-sample envelope.
pub fn beat_profile(
    osc: &SecondOrderOscillator,
    omega_drive: f64,
    horizon: f64,
    q: &QuadratureConfig,
) -> Result<BeatProfile, ConvolveError> {
    let detuning = (omega_drive - osc.omega0()).abs();
    let guard = 3.0 * osc.gamma();
    if detuning <= guard {
        return Err(ConvolveError::NotDetuned { detuning, guard });
    }
    let predicted = 2.0 * PI / detuning;
    if horizon < 3.0 * predicted {
        return Err(ConvolveError::InsufficientHorizon {
            horizon,
            needed: 3.0 * predicted,
        });
    }
    let drive = crate::waveform::Waveform::sine(1.0, omega_drive, 0.0)
        .expect("finite drive parameters");
    let k_max = (horizon * osc.omega_d() / PI).floor() as usize;
    let env = extreme_samples(osc, &drive, k_max, q)?;
    let rect: Vec<(f64, f64)> = env
        .entries
        .iter()
        .map(|e| (e.t_k, e.value.abs()))
        .collect();
    let mut minima = Vec::new();
    for i in 1..rect.len().saturating_sub(1) {
        if rect[i].1 < rect[i - 1].1 && rect[i].1 <= rect[i + 1].1 {
            minima.push(rect[i]);
        }
    }
    if minima.len() < 2 {
        return Err(ConvolveError::NoBeatsDetected);
    }
    let mut spacings: Vec<f64> = minima.windows(2).map(|w| w[1].0 - w[0].0).collect();
    spacings.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = spacings[spacings.len() / 2];
    Ok(BeatProfile {
        beat_period: 2.0 * median,
        minima,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::waveform::{QuadRule, Waveform};
    use approx::assert_relative_eq;
    use std::f64::consts::TAU;

    fn q() -> QuadratureConfig {
        QuadratureConfig::simpson_default()
    }

    #[test]
    fn first_order_step_matches_closed_form() {
        // y(t) = (A/a)(1 - e^{-a t}) for input A u(t)
        let a = 1.0;
        let amp = 2.0;
        let h = ImpulseResponse::first_order(a).unwrap();
        let input = Waveform::scaled(Waveform::unit_step(0.0).unwrap(), amp).unwrap();
        let trace = zsr(&h, &input, 5.0, 0.01, &q()).unwrap();
        for (t, v) in trace.iter_points() {
            let oracle = amp / a * (1.0 - (-a * t).exp());
            if oracle.abs() > 1e-12 {
                assert!(
                    (v - oracle).abs() / oracle.abs() < 1e-4,
                    "t={t}: {v} vs {oracle}"
                );
            }
        }
        let at_one = zsr_at(&h, &input, 1.0, &q()).unwrap();
        assert_relative_eq!(at_one, 1.26424, epsilon = 1e-5);
    }

    #[test]
    fn lossless_resonant_sine_grows_linearly() {
        let osc = SecondOrderOscillator::new(0.0, 1.0).unwrap();
        let drive = Waveform::sine(1.0, 1.0, 0.0).unwrap();
        let env = extreme_samples(&osc, &drive, 10, &q()).unwrap();
        assert!(env.signs_alternate());
        for e in env.entries() {
            // oracle: integral of sin^2 over k half-periods = k pi / 2
            let oracle = e.k as f64 * PI / 2.0;
            assert!(
                (e.value.abs() - oracle).abs() / oracle < 0.005,
                "k={}: {} vs {}",
                e.k,
                e.value,
                oracle
            );
        }
    }

    #[test]
    fn square_wave_extremes_follow_s0_pattern() {
        let osc = SecondOrderOscillator::new(0.0, 1.0).unwrap();
        let sq = Waveform::square(1.0, TAU).unwrap();
        let s0 = 2.0;
        let env = extreme_samples(&osc, &sq, 3, &q()).unwrap();
        let expect = [s0, -2.0 * s0, 3.0 * s0];
        for (e, want) in env.entries().iter().zip(expect) {
            assert!(
                (e.value - want).abs() / want.abs() < 0.01,
                "k={}: {} vs {}",
                e.k,
                e.value,
                want
            );
        }
    }

    #[test]
    fn stretched_square_wave_grows_one_third_per_drive_period() {
        let osc = SecondOrderOscillator::new(0.0, 1.0).unwrap();
        let stretched = Waveform::square(1.0, 3.0 * TAU).unwrap();
        let env = extreme_samples(&osc, &stretched, 9, &q()).unwrap();
        let s0 = 2.0;
        for m in 1..=3usize {
            let e = &env.entries()[3 * m - 1]; // k = 3m
            assert!(
                (e.value.abs() - m as f64 * s0).abs() / (m as f64 * s0) < 0.01,
                "k={}: {}",
                e.k,
                e.value
            );
        }
        // growth per drive period is one third of the matched-period case
        let matched = Waveform::square(1.0, TAU).unwrap();
        let env_matched = extreme_samples(&osc, &matched, 3, &q()).unwrap();
        let slope_matched = env_matched.entries()[2].value.abs() / env_matched.entries()[2].t_k;
        let slope_stretched = env.entries()[8].value.abs() / env.entries()[8].t_k;
        assert_relative_eq!(slope_stretched / slope_matched, 1.0 / 3.0, max_relative = 0.02);
    }

    #[test]
    fn zsr_at_consistency_and_commutativity() {
        let osc = SecondOrderOscillator::new(0.05, 1.0).unwrap();
        let h = ImpulseResponse::normalized(&osc);
        let sq = Waveform::square(1.0, TAU).unwrap();

        assert_eq!(zsr_at(&h, &sq, 0.0, &q()).unwrap(), 0.0);
        assert!(zsr_at(&h, &sq, -1.0, &q()).is_err());

        let trace = zsr(&h, &sq, 10.0, 0.05, &q()).unwrap();
        let i = trace.len() / 2;
        let direct = zsr_at(&h, &sq, trace.time_at(i), &q()).unwrap();
        assert_relative_eq!(direct, trace.values()[i], max_relative = 1e-6);

        // Eq-style symmetry: swapping kernel and input roles
        let t = 7.3;
        let a = zsr_at(&h, &sq, t, &q()).unwrap();
        let b = zsr_at(&sq, &h, t, &q()).unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-9);
    }

    #[test]
    fn trace_scales_linearly_with_input_amplitude() {
        let osc = SecondOrderOscillator::new(0.05, 1.0).unwrap();
        let h = ImpulseResponse::normalized(&osc);
        let f = Waveform::sine(1.0, osc.omega_d(), 0.0).unwrap();
        let f2 = Waveform::scaled(f.clone(), 2.0).unwrap();
        let t1 = zsr(&h, &f, 20.0, 0.05, &q()).unwrap();
        let t2 = zsr(&h, &f2, 20.0, 0.05, &q()).unwrap();
        let peak = t1.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for (a, b) in t1.values().iter().zip(t2.values()) {
            assert!((b - 2.0 * a).abs() <= 1e-9 * peak.max(1.0));
        }
    }

    #[test]
    fn dt_guard_and_bad_args() {
        let osc = SecondOrderOscillator::new(0.05, 1.0).unwrap();
        let h = ImpulseResponse::normalized(&osc);
        let f = Waveform::sine(1.0, 1.0, 0.0).unwrap();
        assert!(matches!(
            zsr(&h, &f, 10.0, 0.5, &q()),
            Err(ConvolveError::DtTooCoarse { .. })
        ));
        assert!(zsr(&h, &f, -1.0, 0.01, &q()).is_err());
        assert!(zsr(&h, &f, 10.0, 0.0, &q()).is_err());
    }

    #[test]
    fn slope_fit_examples() {
        let osc = SecondOrderOscillator::new(0.0, 1.0).unwrap();
        let drive = Waveform::sine(1.0, 1.0, 0.0).unwrap();
        let env = extreme_samples(&osc, &drive, 10, &q()).unwrap();
        // oracle: |f_out(t_k)| / t_k = (k pi / 2) / (k pi) = 1/2, omega-free
        let fit = envelope_slope_fit(&env, 1, 10).unwrap();
        assert_relative_eq!(fit.slope, 0.5, max_relative = 1e-3);
        assert!(fit.max_relative_residual < 1e-3);

        // doubling the input amplitude doubles the slope
        let drive2 = Waveform::scaled(drive, 2.0).unwrap();
        let env2 = extreme_samples(&osc, &drive2, 10, &q()).unwrap();
        let fit2 = envelope_slope_fit(&env2, 1, 10).unwrap();
        assert_relative_eq!(fit2.slope, 2.0 * fit.slope, max_relative = 1e-6);

        assert!(envelope_slope_fit(&env, 3, 3).is_err());
    }

    #[test]
    fn initial_slope_independent_of_q_with_cut_kernel() {
        // the cut kernel has no damping inside its window, so the early
        // envelope slope cannot depend on Q
        let qcfg = q();
        let mut slopes = Vec::new();
        for quality in [10.0, 100.0] {
            let osc = SecondOrderOscillator::from_quality(quality, 1.0).unwrap();
            let hs = ImpulseResponse::simplified(&osc).unwrap();
            let drive = Waveform::sine(1.0, osc.omega0(), 0.0).unwrap();
            let half = PI / osc.omega0();
            let v1 = zsr_at(&hs, &drive, half, &qcfg).unwrap().abs();
            let v2 = zsr_at(&hs, &drive, 2.0 * half, &qcfg).unwrap().abs();
            slopes.push((v2 - v1) / half);
        }
        assert_relative_eq!(slopes[0], slopes[1], max_relative = 0.02);
    }

    #[test]
    fn saturation_level_examples() {
        let osc = SecondOrderOscillator::new(0.05, 1.0).unwrap();
        // resonant drive at the self-oscillation frequency
        let drive = Waveform::sine(1.0, osc.omega_d(), 0.0).unwrap();
        let level = saturation_level(&osc, &drive, &q()).unwrap();
        assert_relative_eq!(level, 1.0 / (2.0 * osc.gamma()), max_relative = 0.02);

        // doubling Q doubles the level
        let osc2 = SecondOrderOscillator::new(0.025, 1.0).unwrap();
        let drive2 = Waveform::sine(1.0, osc2.omega_d(), 0.0).unwrap();
        let level2 = saturation_level(&osc2, &drive2, &q()).unwrap();
        assert_relative_eq!(level2 / level, 2.0, max_relative = 0.03);

        let lossless = SecondOrderOscillator::new(0.0, 1.0).unwrap();
        assert_eq!(
            saturation_level(&lossless, &drive, &q()),
            Err(ConvolveError::LosslessSaturation)
        );
    }

    #[test]
    fn saturation_window_is_stable_under_extension() {
        let osc = SecondOrderOscillator::new(0.05, 1.0).unwrap();
        let drive = Waveform::sine(1.0, osc.omega_d(), 0.0).unwrap();
        let level = saturation_level(&osc, &drive, &q()).unwrap();
        // extend the window to [8/gamma, 14/gamma] by hand
        let kernel = ImpulseResponse::normalized(&osc);
        let half = PI / osc.omega_d();
        let k_lo = (8.0 / (osc.gamma() * half)).ceil() as usize;
        let k_hi = (14.0 / (osc.gamma() * half)).floor() as usize;
        let env = extremes_for_kernel(&kernel, &drive, k_lo..=k_hi, osc.omega_d(), &q()).unwrap();
        let extended =
            env.entries().iter().map(|e| e.value.abs()).sum::<f64>() / env.entries().len() as f64;
        assert_relative_eq!(level, extended, max_relative = 0.01);
    }

    #[test]
    fn periodic_tail_with_cut_kernel() {
        let osc = SecondOrderOscillator::from_quality(10.0, 1.0).unwrap();
        let resonant = Waveform::sine(1.0, osc.omega0(), 0.0).unwrap();
        let report = periodic_tail_check(&osc, &resonant, &q()).unwrap();
        assert!(report.is_periodic, "drift = {}", report.max_relative_deviation);
        assert_relative_eq!(report.measured_period, TAU, epsilon = 1e-12);

        let sq = Waveform::square(1.0, osc.natural_period()).unwrap();
        let report = periodic_tail_check(&osc, &sq, &q()).unwrap();
        assert!(report.is_periodic, "drift = {}", report.max_relative_deviation);

        // exact kernel: approximately periodic, drift bounded by the decayed tail
        let h = ImpulseResponse::normalized(&osc);
        let t_probe = 5.0 / osc.gamma();
        let drift = periodicity_drift(&h, &resonant, TAU, t_probe, &q()).unwrap();
        assert!(drift < (-osc.gamma() * t_probe).exp(), "drift = {drift}");
        assert!(drift > 0.0);

        let aperiodic = Waveform::unit_step(0.0).unwrap();
        assert_eq!(
            periodic_tail_check(&osc, &aperiodic, &q()),
            Err(ConvolveError::NonPeriodicInput)
        );
    }

    #[test]
    fn beat_period_for_detuned_drives() {
        let osc = SecondOrderOscillator::new(0.0, 1.0).unwrap();
        let horizon = 200.0;
        for omega in [1.1, 0.9] {
            let beats = beat_profile(&osc, omega, horizon, &q()).unwrap();
            let expected = TAU / 0.1;
            assert!(
                (beats.beat_period - expected).abs() / expected < 0.05,
                "omega={omega}: {} vs {expected}",
                beats.beat_period
            );
        }
        // resonant drive: no envelope minima
        assert!(matches!(
            beat_profile(&osc, 1.0, horizon, &q()),
            Err(ConvolveError::NotDetuned { .. }) | Err(ConvolveError::NoBeatsDetected)
        ));
        // horizon shorter than three beats
        assert!(matches!(
            beat_profile(&osc, 1.1, 100.0, &q()),
            Err(ConvolveError::InsufficientHorizon { .. })
        ));
    }

    #[test]
    fn linearity_over_superpositions() {
        // the three integrals run on different node sets, so the node budget
        // is raised until discretization sits below the 1e-9 identity
        let qc = QuadratureConfig::new(QuadRule::Simpson, 1024).unwrap();
        let osc = SecondOrderOscillator::new(0.05, 1.0).unwrap();
        let h = ImpulseResponse::normalized(&osc);
        let f = Waveform::sine(1.0, 1.0, 0.0).unwrap();
        let g = Waveform::square(1.0, TAU / 0.7).unwrap();
        let (a, b) = (1.7, -0.4);
        let combined = Waveform::sum(vec![
            Waveform::scaled(f.clone(), a).unwrap(),
            Waveform::scaled(g.clone(), b).unwrap(),
        ])
        .unwrap();
        for t in [1.0, 4.3, 9.9] {
            let lhs = zsr_at(&h, &combined, t, &qc).unwrap();
            let rhs = a * zsr_at(&h, &f, t, &qc).unwrap() + b * zsr_at(&h, &g, t, &qc).unwrap();
            let scale = lhs.abs().max(rhs.abs()).max(1e-9);
            assert!((lhs - rhs).abs() / scale < 1e-9, "t={t}");
        }
    }

    #[test]
    fn grid_refinement_leaves_extremes_stable() {
        let osc = SecondOrderOscillator::new(0.05, 1.0).unwrap();
        let h = ImpulseResponse::normalized(&osc);
        let f = Waveform::sine(1.0, osc.omega_d(), 0.0).unwrap();
        let coarse = zsr(&h, &f, 15.0, osc.damped_period() / 128.0, &q()).unwrap();
        let fine = zsr(&h, &f, 15.0, osc.damped_period() / 256.0, &q()).unwrap();
        let peak_coarse = coarse.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let peak_fine = fine.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!((peak_coarse - peak_fine).abs() / peak_fine < 0.001);
    }

    #[test]
    fn trace_csv_and_metadata_round_trip() {
        let osc = SecondOrderOscillator::new(0.05, 1.0).unwrap();
        let h = ImpulseResponse::normalized(&osc);
        let f = Waveform::sine(1.0, 1.0, 0.0).unwrap();
        let trace = zsr(&h, &f, 1.0, 0.05, &q()).unwrap();
        let csv = trace.to_csv();
        assert!(csv.starts_with("t,f_out\n"));
        assert_eq!(csv.lines().count(), trace.len() + 1);

        let meta = trace.metadata();
        let input_back = Waveform::from_json(&meta["input"]).unwrap();
        assert_eq!(input_back, f);
        let kernel_back: ImpulseResponse = serde_json::from_value(meta["kernel"].clone()).unwrap();
        assert_eq!(kernel_back, h);
    }
}
