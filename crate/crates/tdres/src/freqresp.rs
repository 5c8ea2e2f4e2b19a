//! Steady-state (phasor) amplitudes, resonance-curve sweeps, half-power
//! bandwidth, and the transient-duration estimate. Cross-validates the
//! time-domain engine against the frequency-domain picture.

use crate::convolve;
use crate::oscillator::{ImpulseResponse, RlcParams, SecondOrderOscillator};
use crate::waveform::{QuadratureConfig, Waveform};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FreqRespError {
    #[error("omega must be positive (got {0})")]
    InvalidOmega(f64),
    #[error("omega = {omega} outside the narrowband validity region |omega - omega0| <= 0.2 omega0 (omega0 = {omega0})")]
    OutsideValidity { omega: f64, omega0: f64 },
    #[error("frequency grid must be nonempty and strictly increasing")]
    BadGrid,
    #[error("time-domain sweep requires gamma > 0")]
    LosslessTimeDomain,
    #[error("curve lacks a unique interior maximum")]
    NoInteriorPeak,
    #[error("sweep range too narrow: half-power level not crossed on the {side} side")]
    RangeTooNarrow { side: &'static str },
    #[error("transient duration undefined for gamma = 0")]
    LosslessTransient,
    #[error(transparent)]
    Convolve(#[from] convolve::ConvolveError),
}

/// Which formula or engine filled a resonance curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepMethod {
    Analytic,
    TimeDomain,
}

/// The system being swept: a concrete RLC circuit (amplitudes in amperes) or
/// a bare oscillator (unit-drive normalized-kernel amplitudes).
#[derive(Debug, Clone, Copy)]
pub enum SweepSystem<'a> {
    Rlc(&'a RlcParams),
    Oscillator(&'a SecondOrderOscillator),
}

impl SweepSystem<'_> {
    fn oscillator(&self) -> Result<SecondOrderOscillator, FreqRespError> {
        match self {
            SweepSystem::Rlc(p) => {
                SecondOrderOscillator::from_rlc(p).map_err(|_| FreqRespError::LosslessTimeDomain)
            }
            SweepSystem::Oscillator(o) => Ok(**o),
        }
    }

    /// The RLC circuit itself, or the unit equivalent (L = 1, v_m = 1) whose
    /// exact amplitude formula peaks at v_m/R = 1/(2 gamma).
    fn as_rlc(&self) -> RlcParams {
        match self {
            SweepSystem::Rlc(p) => **p,
            SweepSystem::Oscillator(o) => {
                let r = 2.0 * o.gamma();
                let c = 1.0 / (o.omega0() * o.omega0());
                RlcParams::new(r, 1.0, c, 1.0)
                    .expect("underdamped oscillator maps to a valid circuit")
            }
        }
    }
}

/// Amplitude-vs-frequency curve.
#[derive(Debug, Clone, PartialEq)]
pub struct ResonanceCurve {
    omegas: Vec<f64>,
    amplitudes: Vec<f64>,
    method: SweepMethod,
}

impl ResonanceCurve {
    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn method(&self) -> SweepMethod {
        self.method
    }

    pub fn len(&self) -> usize {
        self.omegas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omegas.is_empty()
    }

    /// The curve scaled so its maximum amplitude is 1.
    pub fn peak_normalized(&self) -> ResonanceCurve {
        let peak = self.amplitudes.iter().cloned().fold(0.0, f64::max);
        ResonanceCurve {
            omegas: self.omegas.clone(),
            amplitudes: self.amplitudes.iter().map(|a| a / peak).collect(),
            method: self.method,
        }
    }

    /// CSV body with header `omega,amplitude`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("omega,amplitude\n");
        for (w, a) in self.omegas.iter().zip(&self.amplitudes) {
            out.push_str(&format!("{},{}\n", w, a));
        }
        out
    }
}

/// Exact steady-state current amplitude of the series circuit:
/// v_m / sqrt(R^2 + (wL - 1/(wC))^2). Infinite for R = 0 at exact resonance.
pub fn steady_amplitude_exact(p: &RlcParams, omega: f64) -> Result<f64, FreqRespError> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(FreqRespError::InvalidOmega(omega));
    }
    let reactance = omega * p.inductance() - 1.0 / (omega * p.capacitance());
    let denom = (p.resistance() * p.resistance() + reactance * reactance).sqrt();
    if denom == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(p.drive_amplitude() / denom)
}

/// Narrowband approximation v_m / (2L sqrt(gamma^2 + (w - w0)^2)); valid only
/// for |w - w0| <= 0.2 w0.
pub fn steady_amplitude_lorentzian(p: &RlcParams, omega: f64) -> Result<f64, FreqRespError> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(FreqRespError::InvalidOmega(omega));
    }
    let omega0 = p.omega0();
    if (omega - omega0).abs() > 0.2 * omega0 {
        return Err(FreqRespError::OutsideValidity { omega, omega0 });
    }
    let gamma = p.gamma();
    let detuning = omega - omega0;
    Ok(p.drive_amplitude() / (2.0 * p.inductance() * (gamma * gamma + detuning * detuning).sqrt()))
}

fn check_grid(omegas: &[f64]) -> Result<(), FreqRespError> {
    if omegas.is_empty() || omegas.iter().any(|w| !(*w > 0.0)) {
        return Err(FreqRespError::BadGrid);
    }
    if omegas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(FreqRespError::BadGrid);
    }
    Ok(())
}

/// Sweeps the resonance curve over the given frequency grid.
///
/// The analytic method evaluates the exact amplitude formula. The time-domain
/// method drives the normalized kernel with a unit sine per frequency and
/// measures the saturated steady amplitude (sqrt(2) * RMS over one drive
/// period at t = 10/gamma).
pub fn resonance_sweep(
    system: SweepSystem<'_>,
    omegas: &[f64],
    method: SweepMethod,
    q: &QuadratureConfig,
) -> Result<ResonanceCurve, FreqRespError> {
    check_grid(omegas)?;
    let amplitudes = match method {
        SweepMethod::Analytic => {
            let rlc = system.as_rlc();
            omegas
                .iter()
                .map(|&w| steady_amplitude_exact(&rlc, w))
                .collect::<Result<Vec<_>, _>>()?
        }
        SweepMethod::TimeDomain => {
            let osc = system.oscillator()?;
            if osc.gamma() == 0.0 {
                return Err(FreqRespError::LosslessTimeDomain);
            }
            let kernel = ImpulseResponse::normalized(&osc);
            let t0 = 10.0 / osc.gamma();
            omegas
                .par_iter()
                .map(|&w| {
                    let drive = Waveform::sine(1.0, w, 0.0).expect("finite drive");
                    convolve::steady_amplitude(&kernel, &drive, 2.0 * PI / w, t0, 32, q)
                        .map_err(FreqRespError::from)
                })
                .collect::<Result<Vec<_>, _>>()?
        }
    };
    Ok(ResonanceCurve {
        omegas: omegas.to_vec(),
        amplitudes,
        method,
    })
}

/// Half-power summary of a resonance curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HalfPowerSummary {
    pub omega1: f64,
    pub omega2: f64,
    pub delta_omega: f64,
    pub q_est: f64,
}

impl HalfPowerSummary {
    pub fn to_json(&self) -> Value {
        json!({
            "omega1": self.omega1,
            "omega2": self.omega2,
            "delta_omega": self.delta_omega,
            "q_est": self.q_est,
        })
    }
}

/// Finds the half-power frequencies by linear interpolation at peak/sqrt(2)
/// on both sides of the curve's unique interior maximum.
pub fn half_power(curve: &ResonanceCurve) -> Result<HalfPowerSummary, FreqRespError> {
    let amps = curve.amplitudes();
    let omegas = curve.omegas();
    if amps.len() < 3 {
        return Err(FreqRespError::NoInteriorPeak);
    }
    let (peak_idx, peak) = amps
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .expect("nonempty grid");
    if peak_idx == 0 || peak_idx == amps.len() - 1 || !peak.is_finite() {
        return Err(FreqRespError::NoInteriorPeak);
    }
    let level = peak / 2.0_f64.sqrt();

    let cross = |i0: usize, i1: usize| -> f64 {
        // linear interpolation in (omega, amplitude) between grid neighbors
        let (w0, a0) = (omegas[i0], amps[i0]);
        let (w1, a1) = (omegas[i1], amps[i1]);
        w0 + (level - a0) / (a1 - a0) * (w1 - w0)
    };

    let mut omega1 = None;
    for i in (0..peak_idx).rev() {
        if amps[i] < level {
            omega1 = Some(cross(i, i + 1));
            break;
        }
    }
    let omega1 = omega1.ok_or(FreqRespError::RangeTooNarrow { side: "low" })?;

    let mut omega2 = None;
    for i in peak_idx + 1..amps.len() {
        if amps[i] < level {
            omega2 = Some(cross(i - 1, i));
            break;
        }
    }
    let omega2 = omega2.ok_or(FreqRespError::RangeTooNarrow { side: "high" })?;

    let delta_omega = omega2 - omega1;
    Ok(HalfPowerSummary {
        omega1,
        omega2,
        delta_omega,
        q_est: omegas[peak_idx] / delta_omega,
    })
}

/// Transient duration 1/gamma, with the equivalent (1/pi) Q T_o form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransientDuration {
    pub seconds: f64,
    /// The same duration written as (1/pi) * Q * T_o.
    pub q_periods_form: f64,
}

pub fn transient_duration(
    osc: &SecondOrderOscillator,
) -> Result<TransientDuration, FreqRespError> {
    if osc.gamma() == 0.0 {
        return Err(FreqRespError::LosslessTransient);
    }
    Ok(TransientDuration {
        seconds: 1.0 / osc.gamma(),
        q_periods_form: osc.quality() * osc.natural_period() / PI,
    })
}
