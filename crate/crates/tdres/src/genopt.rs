//! Matched-drive synthesis and certification: generating-interval selection,
//! the norm-constrained optimal periodic input proportional to the
//! time-reversed kernel, scalar-product bounds, and candidate ranking.
//!
//! Kernels are passed as waveforms; wrap an [`ImpulseResponse`] with
//! [`ImpulseResponse::as_waveform`](crate::oscillator::ImpulseResponse::as_waveform)
//! or hand in any oscillatory waveform directly.

use crate::convolve;
use crate::waveform::{
    self, gram_pair, Interval, QuadratureConfig, TimeFunction, Waveform, WaveformError,
};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenOptError {
    #[error("kernel period must be positive (got {0})")]
    InvalidPeriod(f64),
    #[error("kernel is not oscillatory: no sign change in (0, {0})")]
    NotOscillatory(f64),
    #[error("kernel vanishes on the generating interval")]
    ZeroNormKernel,
    #[error("candidate {index} has zero norm on the generating interval")]
    ZeroNormCandidate { index: usize },
    #[error("need at least 2 candidates to rank (got {0})")]
    TooFewCandidates(usize),
    #[error(
        "damping guard violated: gamma * t_k = {value} >= 0.3 at k = {k}; \
         reduce k_max or use a lossless kernel"
    )]
    DampingGuard { k: usize, value: f64 },
    #[error(transparent)]
    Waveform(#[from] WaveformError),
    #[error(transparent)]
    Convolve(#[from] convolve::ConvolveError),
}

/// Whether the optimal input is defined on half the kernel period (possible
/// only for antisymmetric kernels) or the whole period.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IntervalMode {
    HalfPeriod,
    FullPeriod,
}

/// The interval on which the scalar product is defined and the optimal input
/// synthesized, before periodic continuation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeneratingInterval {
    pub interval: Interval,
    pub mode: IntervalMode,
    /// ||h(t + T/2) + h(t)|| / ||h|| over [0, T/2].
    pub symmetry_defect: f64,
}

impl GeneratingInterval {
    pub fn length(&self) -> f64 {
        self.interval.length()
    }
}

const ANTISYMMETRY_TOLERANCE: f64 = 1e-3;

/// Measures the antisymmetry defect of the kernel over one period and picks
/// the half-period interval when the kernel satisfies h(t + T/2) = -h(t)
/// within tolerance, the full period otherwise.
pub fn choose_generating_interval<K: TimeFunction + ?Sized>(
    kernel: &K,
    period: f64,
    q: &QuadratureConfig,
) -> Result<GeneratingInterval, GenOptError> {
    if !(period > 0.0) || !period.is_finite() {
        return Err(GenOptError::InvalidPeriod(period));
    }
    // oscillatory check: the kernel must change sign inside (0, period)
    let samples = 2048;
    let mut max_abs = 0.0f64;
    let mut vals = Vec::with_capacity(samples);
    for i in 0..samples {
        let t = period * (i as f64 + 0.5) / samples as f64;
        let v = kernel.eval(t);
        max_abs = max_abs.max(v.abs());
        vals.push(v);
    }
    let eps = 1e-9 * max_abs;
    let has_pos = vals.iter().any(|&v| v > eps);
    let has_neg = vals.iter().any(|&v| v < -eps);
    if !(has_pos && has_neg) {
        return Err(GenOptError::NotOscillatory(period));
    }

    let half = period / 2.0;
    let iv_half = Interval::new(0.0, half).expect("period > 0");
    let mut breaks = Vec::new();
    kernel.breakpoints_in(0.0, half, &mut breaks);
    let mut shifted = Vec::new();
    kernel.breakpoints_in(half, period, &mut shifted);
    breaks.extend(shifted.into_iter().map(|d| d - half));
    let scale = kernel.quadrature_scale();
    let defect_sq = crate::quad::integrate(
        &|t| {
            let v = kernel.eval(t + half) + kernel.eval(t);
            v * v
        },
        iv_half,
        breaks.clone(),
        scale,
        q,
    );
    let norm_sq = crate::quad::integrate(
        &|t| {
            let v = kernel.eval(t);
            v * v
        },
        iv_half,
        breaks,
        scale,
        q,
    );
    if norm_sq <= 0.0 {
        return Err(GenOptError::ZeroNormKernel);
    }
    let defect = (defect_sq.max(0.0) / norm_sq).sqrt();
    let (mode, t_gen) = if defect < ANTISYMMETRY_TOLERANCE {
        (IntervalMode::HalfPeriod, half)
    } else {
        (IntervalMode::FullPeriod, period)
    };
    Ok(GeneratingInterval {
        interval: Interval::new(0.0, t_gen).expect("positive generating length"),
        mode,
        symmetry_defect: defect,
    })
}

/// Synthesizes the optimal periodic input: the time-reversed kernel on the
/// generating interval, scaled to `target_norm`, continued periodically
/// (antiperiodically in half-period mode). The scale factor is positive; the
/// opposite sign excites the system equally well.
pub fn optimal_input(
    kernel: &Waveform,
    gi: &GeneratingInterval,
    target_norm: f64,
    q: &QuadratureConfig,
) -> Result<Waveform, GenOptError> {
    let t_gen = gi.length();
    let reversed = waveform::time_reverse_on_interval(kernel, t_gen)?;
    let scaled = waveform::scale_to_norm(&reversed, target_norm, gi.interval, q).map_err(|e| {
        match e {
            WaveformError::ZeroNorm => GenOptError::ZeroNormKernel,
            other => GenOptError::Waveform(other),
        }
    })?;
    let extended = match gi.mode {
        IntervalMode::HalfPeriod => Waveform::antiperiodic_extension(scaled, t_gen)?,
        IntervalMode::FullPeriod => Waveform::periodic_extension(scaled, t_gen)?,
    };
    Ok(extended)
}

/// The scalar product S0 = |(f, h)| on the generating interval, where f is
/// the input read backwards across the interval: f(t) = f_inp(T_gen - t).
///
/// This equals |f_out(T_gen)|, the first extreme of the zero-state response.
pub fn s0<F, K>(
    f_inp: &F,
    kernel: &K,
    gi: &GeneratingInterval,
    q: &QuadratureConfig,
) -> Result<f64, GenOptError>
where
    F: TimeFunction + ?Sized,
    K: TimeFunction + ?Sized,
{
    Ok(convolve::zsr_at(kernel, f_inp, gi.length(), q)?.abs())
}

/// Achieved scalar product, its Cauchy-Schwarz bound, and the predicted
/// extreme sequence S0 * k.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimalityReport {
    pub s0: f64,
    /// ||f|| * ||h|| on the generating interval.
    pub bound: f64,
    /// s0 / bound, in [0, 1]; 1 exactly when f is proportional to the
    /// reversed kernel.
    pub gap_ratio: f64,
    /// Signed predictions S0 * k: alternating (-1)^(k+1) in half-period mode,
    /// all positive in full-period mode.
    pub predicted_extremes: Vec<f64>,
}

impl OptimalityReport {
    pub fn to_json(&self) -> Value {
        json!({
            "s0": self.s0,
            "bound": self.bound,
            "gap_ratio": self.gap_ratio,
            "predicted_extremes": self.predicted_extremes,
        })
    }
}

/// Computes S0, the norm bound and the predicted extremes for an input
/// against a kernel. Norms and the scalar product share one quadrature node
/// set, so the bound is never violated by discretization.
pub fn optimality_report<F, K>(
    f_inp: &F,
    kernel: &K,
    gi: &GeneratingInterval,
    k_max: usize,
    q: &QuadratureConfig,
) -> Result<OptimalityReport, GenOptError>
where
    F: TimeFunction + ?Sized,
    K: TimeFunction + ?Sized,
{
    let t_gen = gi.length();
    let reversed_input = ReversedView {
        inner: f_inp,
        duration: t_gen,
    };
    let gp = gram_pair(&reversed_input, kernel, gi.interval, q);
    let s0 = gp.inner.abs();
    let bound = gp.norm_f * gp.norm_g;
    let gap_ratio = if bound > 0.0 { s0 / bound } else { 0.0 };
    let predicted_extremes = (1..=k_max)
        .map(|k| {
            let sign = match gi.mode {
                IntervalMode::HalfPeriod => {
                    if k % 2 == 1 {
                        1.0
                    } else {
                        -1.0
                    }
                }
                IntervalMode::FullPeriod => 1.0,
            };
            sign * s0 * k as f64
        })
        .collect();
    Ok(OptimalityReport {
        s0,
        bound,
        gap_ratio,
        predicted_extremes,
    })
}

/// Lightweight time-reversal view used to evaluate f(T - t) without cloning
/// into the waveform grammar (works for any `TimeFunction`).
struct ReversedView<'a, F: TimeFunction + ?Sized> {
    inner: &'a F,
    duration: f64,
}

impl<F: TimeFunction + ?Sized> TimeFunction for ReversedView<'_, F> {
    fn eval(&self, t: f64) -> f64 {
        self.inner.eval(self.duration - t)
    }

    fn breakpoints_in(&self, a: f64, b: f64, out: &mut Vec<f64>) {
        let mut inner_breaks = Vec::new();
        self.inner
            .breakpoints_in(self.duration - b, self.duration - a, &mut inner_breaks);
        out.extend(inner_breaks.into_iter().map(|d| self.duration - d));
    }

    fn quadrature_scale(&self) -> Option<f64> {
        self.inner.quadrature_scale()
    }
}

/// One ranked candidate: its index in the input list, the norm-matched
/// waveform, its S0 and the relative miss against the best.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedInput {
    pub index: usize,
    pub waveform: Waveform,
    pub s0: f64,
    /// (S0_best - S0) / S0_best.
    pub miss: f64,
}

/// Norm-matches every candidate to `target_norm` on the generating interval
/// and ranks them by S0, descending. Ties keep insertion order.
pub fn rank_inputs(
    candidates: &[Waveform],
    kernel: &Waveform,
    gi: &GeneratingInterval,
    target_norm: f64,
    q: &QuadratureConfig,
) -> Result<Vec<RankedInput>, GenOptError> {
    if candidates.len() < 2 {
        return Err(GenOptError::TooFewCandidates(candidates.len()));
    }
    let mut ranked = Vec::with_capacity(candidates.len());
    for (index, cand) in candidates.iter().enumerate() {
        let matched = waveform::scale_to_norm(cand, target_norm, gi.interval, q).map_err(|e| {
            match e {
                WaveformError::ZeroNorm => GenOptError::ZeroNormCandidate { index },
                other => GenOptError::Waveform(other),
            }
        })?;
        let s = s0(&matched, kernel, gi, q)?;
        ranked.push(RankedInput {
            index,
            waveform: matched,
            s0: s,
            miss: 0.0,
        });
    }
    ranked.sort_by(|a, b| b.s0.partial_cmp(&a.s0).unwrap());
    let best = ranked[0].s0;
    for r in &mut ranked {
        r.miss = if best > 0.0 { (best - r.s0) / best } else { 0.0 };
    }
    Ok(ranked)
}

/// Per-k relative error between the simulated extremes |f_out(k T_gen)| and
/// the predicted S0 * k.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremeComparison {
    pub per_k_relative_error: Vec<f64>,
    pub max_relative_error: f64,
}

/// Simulates the response to `f_inp` and compares the extreme magnitudes
/// against the S0 * k prediction. Guarded to the regime where kernel damping
/// is negligible: gamma * t_k < 0.3 for every requested k.
pub fn predicted_vs_simulated<F, K>(
    f_inp: &F,
    kernel: &K,
    gi: &GeneratingInterval,
    decay_rate: f64,
    k_max: usize,
    q: &QuadratureConfig,
) -> Result<ExtremeComparison, GenOptError>
where
    F: TimeFunction + Sync + ?Sized,
    K: TimeFunction + Sync + ?Sized,
{
    let t_gen = gi.length();
    let worst = decay_rate * t_gen * k_max as f64;
    if worst >= 0.3 {
        return Err(GenOptError::DampingGuard {
            k: k_max,
            value: worst,
        });
    }
    let s = s0(f_inp, kernel, gi, q)?;
    let mut per_k = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let simulated = convolve::zsr_at(kernel, f_inp, k as f64 * t_gen, q)?.abs();
        let predicted = s * k as f64;
        per_k.push((simulated - predicted).abs() / predicted);
    }
    let max = per_k.iter().cloned().fold(0.0, f64::max);
    Ok(ExtremeComparison {
        per_k_relative_error: per_k,
        max_relative_error: max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oscillator::{ImpulseResponse, SecondOrderOscillator};
    use crate::waveform::norm;
    use approx::assert_relative_eq;
    use std::f64::consts::{PI, TAU};

    fn q() -> QuadratureConfig {
        QuadratureConfig::simpson_default()
    }

    fn pure_sine_kernel() -> Waveform {
        let osc = SecondOrderOscillator::new(0.0, 1.0).unwrap();
        ImpulseResponse::normalized(&osc).as_waveform()
    }

    fn damped_kernel(quality: f64) -> (SecondOrderOscillator, Waveform) {
        let osc = SecondOrderOscillator::from_quality(quality, 1.0).unwrap();
        (osc, ImpulseResponse::normalized(&osc).as_waveform())
    }

    #[test]
    fn generating_interval_for_sine_is_half_period() {
        let h = pure_sine_kernel();
        let gi = choose_generating_interval(&h, TAU, &q()).unwrap();
        assert_eq!(gi.mode, IntervalMode::HalfPeriod);
        assert!(gi.symmetry_defect < 1e-9);
        assert_relative_eq!(gi.length(), PI, epsilon = 1e-12);
    }

    #[test]
    fn generating_interval_for_damped_kernel_is_full_period() {
        let (osc, h) = damped_kernel(10.0);
        let t_d = osc.damped_period();
        let gi = choose_generating_interval(&h, t_d, &q()).unwrap();
        assert_eq!(gi.mode, IntervalMode::FullPeriod);
        // defect oracle: h(t + T/2) = -e^(-gamma T/2) h(t), so the defect is
        // 1 - e^(-gamma T/2)
        let expected = 1.0 - (-osc.gamma() * t_d / 2.0).exp();
        assert_relative_eq!(gi.symmetry_defect, expected, max_relative = 1e-6);
    }

    #[test]
    fn non_oscillatory_kernel_is_rejected() {
        let h = ImpulseResponse::first_order(1.0).unwrap().as_waveform();
        assert!(matches!(
            choose_generating_interval(&h, 2.0, &q()),
            Err(GenOptError::NotOscillatory(_))
        ));
    }

    #[test]
    fn optimal_input_for_sine_is_the_sine_itself() {
        let h = pure_sine_kernel();
        let gi = choose_generating_interval(&h, TAU, &q()).unwrap();
        let target = (PI / 2.0f64).sqrt(); // the sine's own half-wave norm
        let opt = optimal_input(&h, &gi, target, &q()).unwrap();
        for t in [0.3, 2.0, 4.0, 7.5] {
            assert_relative_eq!(opt.eval(t), t.sin(), max_relative = 1e-6, epsilon = 1e-9);
        }
    }

    #[test]
    fn optimal_input_for_damped_kernel_is_reversed_tail() {
        let (osc, h) = damped_kernel(10.0);
        let t_d = osc.damped_period();
        let gi = choose_generating_interval(&h, t_d, &q()).unwrap();
        let opt = optimal_input(&h, &gi, 1.0, &q()).unwrap();
        let achieved = norm(&opt, gi.interval, &q());
        assert_relative_eq!(achieved, 1.0, max_relative = 1e-6);
        // shape check: f(t) proportional to h(T - t) inside the interval
        let kfactor = opt.eval(0.3) / h.eval(t_d - 0.3);
        assert!(kfactor > 0.0);
        for t in [0.1, 1.0, 3.0, 5.5] {
            assert_relative_eq!(opt.eval(t), kfactor * h.eval(t_d - t), max_relative = 1e-9);
        }
        // and periodic continuation beyond the interval
        assert_relative_eq!(opt.eval(t_d + 0.5), opt.eval(0.5), epsilon = 1e-12);
    }

    #[test]
    fn s0_values_from_square_and_matched_sine() {
        let h = pure_sine_kernel();
        let gi = choose_generating_interval(&h, TAU, &q()).unwrap();

        let square = Waveform::square(1.0, TAU).unwrap();
        assert_relative_eq!(s0(&square, &h, &gi, &q()).unwrap(), 2.0, max_relative = 1e-8);

        let target = PI.sqrt(); // unit square's norm over (0, pi)
        let sine = Waveform::sine(1.0, 1.0, 0.0).unwrap();
        let matched = waveform::scale_to_norm(&sine, target, gi.interval, &q()).unwrap();
        assert_relative_eq!(
            s0(&matched, &h, &gi, &q()).unwrap(),
            PI / 2.0f64.sqrt(),
            max_relative = 1e-8
        );

        let zero = Waveform::sine(0.0, 1.0, 0.0).unwrap();
        assert_relative_eq!(s0(&zero, &h, &gi, &q()).unwrap(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn optimality_report_examples() {
        let h = pure_sine_kernel();
        let gi = choose_generating_interval(&h, TAU, &q()).unwrap();

        let opt = optimal_input(&h, &gi, 1.0, &q()).unwrap();
        let report = optimality_report(&opt, &h, &gi, 3, &q()).unwrap();
        assert!(report.gap_ratio > 1.0 - 1e-6);
        assert!(report.gap_ratio <= 1.0 + 1e-9);
        assert_relative_eq!(report.predicted_extremes[1], -2.0 * report.s0, epsilon = 1e-12);

        // unit square against the sine kernel: gap 2 sqrt(2) / pi
        let square = Waveform::square(1.0, TAU).unwrap();
        let report = optimality_report(&square, &h, &gi, 1, &q()).unwrap();
        assert_relative_eq!(
            report.gap_ratio,
            2.0 * 2.0f64.sqrt() / PI,
            max_relative = 1e-6
        );

        // orthogonal input: cosine against sine over the full period
        let full = GeneratingInterval {
            interval: Interval::new(0.0, TAU).unwrap(),
            mode: IntervalMode::FullPeriod,
            symmetry_defect: 1.0,
        };
        let cos = Waveform::sine(1.0, 1.0, PI / 2.0).unwrap();
        let report = optimality_report(&cos, &h, &full, 1, &q()).unwrap();
        assert!(report.gap_ratio.abs() < 1e-9);
    }

    #[test]
    fn ranking_square_against_matched_sine() {
        let h = pure_sine_kernel();
        let gi = choose_generating_interval(&h, TAU, &q()).unwrap();
        let target = PI.sqrt();
        let candidates = vec![
            Waveform::sine(1.0, 1.0, 0.0).unwrap(),
            Waveform::square(1.0, TAU).unwrap(),
        ];
        let ranked = rank_inputs(&candidates, &h, &gi, target, &q()).unwrap();
        assert_eq!(ranked[0].index, 0, "sine first");
        assert_relative_eq!(ranked[1].miss, 0.0995, epsilon = 3e-3);
        assert_relative_eq!(ranked[0].miss, 0.0, epsilon = 1e-15);

        // the reversed kernel beats anything else
        let opt = optimal_input(&h, &gi, target, &q()).unwrap();
        let with_opt = vec![opt, Waveform::triangle(1.0, TAU).unwrap()];
        let ranked = rank_inputs(&with_opt, &h, &gi, target, &q()).unwrap();
        assert_eq!(ranked[0].index, 0);

        // f and -f tie exactly
        let f = Waveform::square(1.0, TAU).unwrap();
        let neg = Waveform::scaled(f.clone(), -1.0).unwrap();
        let ranked = rank_inputs(&[f, neg], &h, &gi, target, &q()).unwrap();
        assert_eq!(ranked[0].s0, ranked[1].s0);
        assert_eq!(ranked[0].index, 0, "ties keep insertion order");

        let zero = Waveform::sine(0.0, 1.0, 0.0).unwrap();
        let err = rank_inputs(
            &[zero, Waveform::square(1.0, TAU).unwrap()],
            &h,
            &gi,
            target,
            &q(),
        );
        assert!(matches!(err, Err(GenOptError::ZeroNormCandidate { index: 0 })));
    }

    #[test]
    fn ranking_invariant_under_rescaling_candidates() {
        let h = pure_sine_kernel();
        let gi = choose_generating_interval(&h, TAU, &q()).unwrap();
        let target = 1.0;
        let base = vec![
            Waveform::square(1.0, TAU).unwrap(),
            Waveform::triangle(1.0, TAU).unwrap(),
            Waveform::sine(1.0, 1.0, 0.0).unwrap(),
        ];
        let rescaled = vec![
            Waveform::scaled(base[0].clone(), -3.7).unwrap(),
            Waveform::scaled(base[1].clone(), 0.01).unwrap(),
            Waveform::scaled(base[2].clone(), -1.0).unwrap(),
        ];
        let r1 = rank_inputs(&base, &h, &gi, target, &q()).unwrap();
        let r2 = rank_inputs(&rescaled, &h, &gi, target, &q()).unwrap();
        for (a, b) in r1.iter().zip(&r2) {
            assert_eq!(a.index, b.index);
            assert!((a.s0 - b.s0).abs() <= 1e-9 * a.s0.max(1e-12));
        }
    }

    #[test]
    fn kernel_rescaling_leaves_gap_and_ranking_unchanged() {
        let h = pure_sine_kernel();
        let h_scaled = Waveform::scaled(h.clone(), 7.5).unwrap();
        let gi = choose_generating_interval(&h, TAU, &q()).unwrap();
        let gi2 = choose_generating_interval(&h_scaled, TAU, &q()).unwrap();
        assert_eq!(gi.mode, gi2.mode);
        let square = Waveform::square(1.0, TAU).unwrap();
        let r1 = optimality_report(&square, &h, &gi, 1, &q()).unwrap();
        let r2 = optimality_report(&square, &h_scaled, &gi2, 1, &q()).unwrap();
        assert_relative_eq!(r1.gap_ratio, r2.gap_ratio, max_relative = 1e-12);
    }

    #[test]
    fn predicted_extremes_match_simulation() {
        let h = pure_sine_kernel();
        let gi = choose_generating_interval(&h, TAU, &q()).unwrap();

        // sine input: both sides analytic
        let sine = Waveform::sine(1.0, 1.0, 0.0).unwrap();
        let cmp = predicted_vs_simulated(&sine, &h, &gi, 0.0, 10, &q()).unwrap();
        assert!(cmp.max_relative_error < 0.01, "{:?}", cmp.per_k_relative_error);

        // square input: magnitudes S0 * {1, 2, 3}
        let square = Waveform::square(1.0, TAU).unwrap();
        let cmp = predicted_vs_simulated(&square, &h, &gi, 0.0, 3, &q()).unwrap();
        assert!(cmp.max_relative_error < 0.01);

        // damping guard: gamma t_k too large
        let (osc, hd) = damped_kernel(10.0);
        let gid = choose_generating_interval(&hd, osc.damped_period(), &q()).unwrap();
        let err = predicted_vs_simulated(&square, &hd, &gid, osc.gamma(), 10, &q());
        assert!(matches!(err, Err(GenOptError::DampingGuard { .. })));
    }

    #[test]
    fn corpus_kernels_reach_unit_gap() {
        let qc = q();
        let two_harmonic = Waveform::sum(vec![
            Waveform::sine(1.0, 1.0, 0.0).unwrap(),
            Waveform::sine(0.3, 3.0, 0.0).unwrap(),
        ])
        .unwrap();
        let kernels: Vec<(Waveform, f64)> = vec![
            (pure_sine_kernel(), TAU),
            (damped_kernel(10.0).1, damped_kernel(10.0).0.damped_period()),
            (
                damped_kernel(100.0).1,
                damped_kernel(100.0).0.damped_period(),
            ),
            (two_harmonic, TAU),
        ];
        for (kernel, period) in &kernels {
            let gi = choose_generating_interval(kernel, *period, &qc).unwrap();
            let opt = optimal_input(kernel, &gi, 1.0, &qc).unwrap();
            let report = optimality_report(&opt, kernel, &gi, 1, &qc).unwrap();
            assert!(
                report.gap_ratio > 1.0 - 1e-6,
                "kernel period {period}: gap {}",
                report.gap_ratio
            );
        }
    }

    #[test]
    fn even_harmonic_content_forces_full_period() {
        let with_even = Waveform::sum(vec![
            Waveform::sine(1.0, 1.0, 0.0).unwrap(),
            Waveform::sine(0.2, 2.0, 0.0).unwrap(),
        ])
        .unwrap();
        let gi = choose_generating_interval(&with_even, TAU, &q()).unwrap();
        assert_eq!(gi.mode, IntervalMode::FullPeriod);
        let opt = optimal_input(&with_even, &gi, 1.0, &q()).unwrap();
        let report = optimality_report(&opt, &with_even, &gi, 1, &q()).unwrap();
        assert!(report.gap_ratio > 1.0 - 1e-6);
    }
}
