//! Transform-free harmonic discovery: a bank of simulated resonators, each
//! tuned to an integer multiple of the drive's base frequency, recovers the
//! relative sine-series amplitudes of a periodic wave from its saturation
//! levels. A direct quadrature of the Fourier integral serves as the
//! cross-check oracle.

use crate::convolve;
use crate::oscillator::SecondOrderOscillator;
use crate::quad;
use crate::waveform::{Interval, QuadratureConfig, TimeFunction, Waveform};
use serde::Serialize;
use std::f64::consts::TAU;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProbeError {
    #[error("bank quality must be at least 10 for adequate selectivity (got {0})")]
    QualityTooLow(f64),
    #[error("harmonic list must be nonempty")]
    NoHarmonics,
    #[error("harmonic indices must be positive")]
    ZeroHarmonic,
    #[error("input waveform is not periodic")]
    NonPeriodicInput,
    #[error("calibration level must be positive (got {0})")]
    MissingCalibration(f64),
    #[error(transparent)]
    Convolve(#[from] convolve::ConvolveError),
}

/// Saturated response of one bank oscillator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbeResult {
    /// Harmonic index k: the oscillator sits at k times the base frequency.
    pub harmonic: usize,
    /// The oscillator's natural frequency k * 2 pi / T.
    pub omega: f64,
    /// Mean rectified extreme level in the saturation window.
    pub saturated_level: f64,
}

fn bank_oscillator(omega: f64, quality: f64) -> SecondOrderOscillator {
    SecondOrderOscillator::new(omega / (2.0 * quality), omega)
        .expect("Q >= 10 implies underdamped")
}

/// Runs one bank oscillator per requested harmonic against the periodic
/// input and records its saturation level. Results are ordered as requested.
pub fn harmonic_probe<F>(
    input: &F,
    harmonics: &[usize],
    quality: f64,
    q: &QuadratureConfig,
) -> Result<Vec<ProbeResult>, ProbeError>
where
    F: TimeFunction + Sync + ?Sized,
{
    if quality < 10.0 {
        return Err(ProbeError::QualityTooLow(quality));
    }
    if harmonics.is_empty() {
        return Err(ProbeError::NoHarmonics);
    }
    if harmonics.contains(&0) {
        return Err(ProbeError::ZeroHarmonic);
    }
    let period = input.period().ok_or(ProbeError::NonPeriodicInput)?;
    let base = TAU / period;
    harmonics
        .iter()
        .map(|&k| {
            let omega = k as f64 * base;
            let osc = bank_oscillator(omega, quality);
            let saturated_level = convolve::saturation_level(&osc, input, q)?;
            Ok(ProbeResult {
                harmonic: k,
                omega,
                saturated_level,
            })
        })
        .collect()
}

/// Saturation level of the same bank oscillator driven by a unit-amplitude
/// pure sine at its own frequency: the per-frequency calibration factor that
/// cancels quadrature and window bias.
pub fn calibration_level(
    omega: f64,
    quality: f64,
    q: &QuadratureConfig,
) -> Result<f64, ProbeError> {
    if quality < 10.0 {
        return Err(ProbeError::QualityTooLow(quality));
    }
    let osc = bank_oscillator(omega, quality);
    let sine = Waveform::sine(1.0, omega, 0.0).expect("finite sine parameters");
    Ok(convolve::saturation_level(&osc, &sine, q)?)
}

/// Calibrated coefficient estimate: saturated level divided by the
/// unit-sine calibration level at the same frequency and quality.
pub fn coefficient_estimate(probe: &ProbeResult, calibration: f64) -> Result<f64, ProbeError> {
    if !(calibration > 0.0) || !calibration.is_finite() {
        return Err(ProbeError::MissingCalibration(calibration));
    }
    Ok(probe.saturated_level / calibration)
}

/// Direct sine-series coefficient (the oracle the bank is checked against):
/// (2/T) * integral over one period of f(t) sin(2 pi k t / T).
pub fn direct_fourier_coefficient<F>(
    input: &F,
    k: usize,
    period: f64,
    q: &QuadratureConfig,
) -> Result<f64, ProbeError>
where
    F: TimeFunction + ?Sized,
{
    if k == 0 {
        return Err(ProbeError::ZeroHarmonic);
    }
    let omega_k = k as f64 * TAU / period;
    let iv = Interval::new(0.0, period).map_err(|_| ProbeError::NonPeriodicInput)?;
    let mut breaks = Vec::new();
    input.breakpoints_in(0.0, period, &mut breaks);
    let scale = match input.quadrature_scale() {
        Some(s) => Some(s.min(TAU / omega_k)),
        None => Some(TAU / omega_k),
    };
    let integral = quad::integrate(
        &|t| input.eval(t) * (omega_k * t).sin(),
        iv,
        breaks,
        scale,
        q,
    );
    Ok(2.0 / period * integral)
}

/// One row of the probe-vs-oracle comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbeRow {
    pub harmonic: usize,
    pub omega: f64,
    pub saturated_level: f64,
    pub estimate: f64,
    pub direct: f64,
    /// |estimate - |direct|| normalized by the largest |direct| in the run.
    pub relative_error: f64,
}

/// Full probe run: bank levels, unit-sine calibration, coefficient estimates,
/// and the direct-integral oracle, assembled per harmonic.
pub fn probe_with_calibration<F>(
    input: &F,
    harmonics: &[usize],
    quality: f64,
    q: &QuadratureConfig,
) -> Result<Vec<ProbeRow>, ProbeError>
where
    F: TimeFunction + Sync + ?Sized,
{
    let period = input.period().ok_or(ProbeError::NonPeriodicInput)?;
    let probes = harmonic_probe(input, harmonics, quality, q)?;
    let mut rows = Vec::with_capacity(probes.len());
    for p in &probes {
        let cal = calibration_level(p.omega, quality, q)?;
        let estimate = coefficient_estimate(p, cal)?;
        let direct = direct_fourier_coefficient(input, p.harmonic, period, q)?;
        rows.push(ProbeRow {
            harmonic: p.harmonic,
            omega: p.omega,
            saturated_level: p.saturated_level,
            estimate,
            direct,
            relative_error: 0.0,
        });
    }
    let direct_peak = rows
        .iter()
        .map(|r| r.direct.abs())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    for r in &mut rows {
        r.relative_error = (r.estimate - r.direct.abs()).abs() / direct_peak;
    }
    Ok(rows)
}

/// CSV body with header `k,omega,saturated,estimate,direct,relative_error`.
pub fn rows_to_csv(rows: &[ProbeRow]) -> String {
    let mut out = String::from("k,omega,saturated,estimate,direct,relative_error\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.harmonic, r.omega, r.saturated_level, r.estimate, r.direct, r.relative_error
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn q() -> QuadratureConfig {
        QuadratureConfig::simpson_default()
    }

    #[test]
    fn direct_coefficients_of_stock_waves() {
        let sq = Waveform::square(1.0, TAU).unwrap();
        assert_relative_eq!(
            direct_fourier_coefficient(&sq, 1, TAU, &q()).unwrap(),
            4.0 / PI,
            max_relative = 1e-8
        );
        assert!(direct_fourier_coefficient(&sq, 2, TAU, &q())
            .unwrap()
            .abs()
            < 1e-12);
        assert_relative_eq!(
            direct_fourier_coefficient(&sq, 3, TAU, &q()).unwrap(),
            4.0 / (3.0 * PI),
            max_relative = 1e-8
        );

        let sine = Waveform::sine(1.0, 1.0, 0.0).unwrap();
        assert_relative_eq!(
            direct_fourier_coefficient(&sine, 1, TAU, &q()).unwrap(),
            1.0,
            max_relative = 1e-8
        );

        // triangle: (8/pi^2)(1, -1/9, 1/25, ...)
        let tri = Waveform::triangle(1.0, TAU).unwrap();
        let c1 = direct_fourier_coefficient(&tri, 1, TAU, &q()).unwrap();
        let c3 = direct_fourier_coefficient(&tri, 3, TAU, &q()).unwrap();
        let c5 = direct_fourier_coefficient(&tri, 5, TAU, &q()).unwrap();
        assert_relative_eq!(c1, 8.0 / (PI * PI), max_relative = 1e-8);
        assert_relative_eq!(c3 / c1, -1.0 / 9.0, max_relative = 1e-7);
        assert_relative_eq!(c5 / c1, 1.0 / 25.0, max_relative = 1e-7);
    }

    #[test]
    fn square_wave_bank_sees_odd_harmonic_ladder() {
        // raw saturation levels carry the bank's own 1/k resonant-gain
        // factor (gamma_k grows with k at fixed Q); the coefficient ladder
        // appears after unit-sine calibration
        let sq = Waveform::square(1.0, TAU).unwrap();
        let rows = probe_with_calibration(&sq, &[1, 3, 5], 50.0, &q()).unwrap();
        let e1 = rows[0].estimate;
        assert_relative_eq!(rows[1].estimate / e1, 1.0 / 3.0, max_relative = 0.05);
        assert_relative_eq!(rows[2].estimate / e1, 1.0 / 5.0, max_relative = 0.05);
    }

    #[test]
    fn even_harmonic_leakage_is_small_and_drops_with_q() {
        let sq = Waveform::square(1.0, TAU).unwrap();
        let leakage_at = |quality: f64| {
            let probes = harmonic_probe(&sq, &[1, 2], quality, &q()).unwrap();
            probes[1].saturated_level / probes[0].saturated_level
        };
        let leak50 = leakage_at(50.0);
        assert!(leak50 < 0.02, "leakage at Q=50: {leak50}");
        let leak10 = leakage_at(10.0);
        let leak100 = leakage_at(100.0);
        assert!(
            leak100 < leak10,
            "selectivity must improve with Q: {leak10} -> {leak100}"
        );
    }

    #[test]
    fn calibrated_estimates_recover_series_prefactors() {
        let sq = Waveform::square(1.0, TAU).unwrap();
        let rows = probe_with_calibration(&sq, &[1, 3], 50.0, &q()).unwrap();
        assert_relative_eq!(rows[0].estimate, 4.0 / PI, max_relative = 0.05);
        assert_relative_eq!(rows[1].estimate, 4.0 / (3.0 * PI), max_relative = 0.05);

        // self-calibration: a pure sine estimates 1
        let sine = Waveform::sine(1.0, 1.0, 0.0).unwrap();
        let rows = probe_with_calibration(&sine, &[1], 50.0, &q()).unwrap();
        assert_relative_eq!(rows[0].estimate, 1.0, max_relative = 0.01);
    }

    #[test]
    fn triangle_bank_ratios() {
        let tri = Waveform::triangle(1.0, TAU).unwrap();
        let rows = probe_with_calibration(&tri, &[1, 3, 5], 50.0, &q()).unwrap();
        let e1 = rows[0].estimate;
        assert_relative_eq!(rows[1].estimate / e1, 1.0 / 9.0, max_relative = 0.05);
        assert_relative_eq!(rows[2].estimate / e1, 1.0 / 25.0, max_relative = 0.05);
    }

    #[test]
    fn probe_matches_direct_oracle_across_waves() {
        let waves: Vec<Waveform> = vec![
            Waveform::square(1.0, TAU).unwrap(),
            Waveform::triangle(1.0, TAU).unwrap(),
            Waveform::pulse_train(
                vec![1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
                TAU,
            )
            .unwrap(),
        ];
        let harmonics: Vec<usize> = (1..=7).collect();
        for w in &waves {
            let rows = probe_with_calibration(w, &harmonics, 50.0, &q()).unwrap();
            for r in &rows {
                assert!(
                    r.relative_error < 0.05,
                    "kind {:?} k={}: estimate {} vs direct {}",
                    w.kind_name(),
                    r.harmonic,
                    r.estimate,
                    r.direct
                );
            }
        }
    }

    #[test]
    fn guards_and_errors() {
        let sq = Waveform::square(1.0, TAU).unwrap();
        assert!(matches!(
            harmonic_probe(&sq, &[1], 5.0, &q()),
            Err(ProbeError::QualityTooLow(_))
        ));
        assert!(matches!(
            harmonic_probe(&sq, &[], 50.0, &q()),
            Err(ProbeError::NoHarmonics)
        ));
        let aperiodic = Waveform::unit_step(0.0).unwrap();
        assert!(matches!(
            harmonic_probe(&aperiodic, &[1], 50.0, &q()),
            Err(ProbeError::NonPeriodicInput)
        ));
        let p = ProbeResult {
            harmonic: 1,
            omega: 1.0,
            saturated_level: 1.0,
        };
        assert!(coefficient_estimate(&p, 0.0).is_err());
    }

    #[test]
    fn stretched_wave_saturates_at_one_third() {
        // fixed oscillator, square wave stretched to three natural periods
        let quality = 50.0;
        let osc = SecondOrderOscillator::from_quality(quality, 1.0).unwrap();
        let matched = Waveform::square(1.0, osc.natural_period()).unwrap();
        let stretched = Waveform::square(1.0, 3.0 * osc.natural_period()).unwrap();
        let level_matched = convolve::saturation_level(&osc, &matched, &q()).unwrap();
        let level_stretched = convolve::saturation_level(&osc, &stretched, &q()).unwrap();
        assert_relative_eq!(
            level_stretched / level_matched,
            1.0 / 3.0,
            max_relative = 0.05
        );
    }
}
