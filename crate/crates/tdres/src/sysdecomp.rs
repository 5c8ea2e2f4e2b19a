//! Zero-input / zero-state decomposition, first- and second-order closed
//! forms (the oracles for the convolution engine), direct Newton integration,
//! asymptotic tails, and pointwise numeric Laplace checks.

use crate::oscillator::{ImpulseResponse, SecondOrderOscillator};
use crate::quad;
use crate::waveform::{Interval, QuadratureConfig, TimeFunction, Waveform};
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SysDecompError {
    #[error("decay rate a must be positive (got {0})")]
    InvalidDecay(f64),
    #[error("grid must have dt > 0 and at least 2 points")]
    BadGrid,
    #[error("drive must be a sine waveform (got kind {0:?})")]
    NotSine(String),
    #[error("lossless oscillator driven exactly at resonance has no bounded steady term; use the time-domain engine")]
    ResonantLossless,
    #[error("mass must be positive everywhere on the integration range (found {0})")]
    NonPositiveMass(f64),
    #[error("asymptotic tail requires a decaying kernel (gamma > 0)")]
    LosslessTail,
    #[error("input waveform is not periodic")]
    NonPeriodicInput,
    #[error("Laplace variable must have positive real part (got {0})")]
    NonPositiveRealPart(f64),
    #[error("1 - e^(-sT) is below 1e-12 in magnitude: s lies on a pole of the periodic transform")]
    PeriodicPole,
}

/// Uniform time grid t_i = t0 + i dt, i = 0..len.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeGrid {
    pub t0: f64,
    pub dt: f64,
    pub len: usize,
}

impl TimeGrid {
    pub fn new(t0: f64, dt: f64, len: usize) -> Result<Self, SysDecompError> {
        if !(dt > 0.0) || len < 2 {
            return Err(SysDecompError::BadGrid);
        }
        Ok(Self { t0, dt, len })
    }

    pub fn from_horizon(horizon: f64, dt: f64) -> Result<Self, SysDecompError> {
        if !(dt > 0.0) || !(horizon > 0.0) {
            return Err(SysDecompError::BadGrid);
        }
        Self::new(0.0, dt, (horizon / dt).floor() as usize + 1)
    }

    pub fn time_at(&self, i: usize) -> f64 {
        self.t0 + self.dt * i as f64
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len).map(|i| self.time_at(i))
    }
}

/// First-order problem y' + a y = A u(t) with initial value y(0) = y0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstOrderProblem {
    pub a: f64,
    pub drive_amplitude: f64,
    pub y0: f64,
}

impl FirstOrderProblem {
    pub fn new(a: f64, drive_amplitude: f64, y0: f64) -> Result<Self, SysDecompError> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(SysDecompError::InvalidDecay(a));
        }
        Ok(Self {
            a,
            drive_amplitude,
            y0,
        })
    }
}

/// ZIR, ZSR and total traces on one grid. The total is the pointwise sum by
/// construction.
#[derive(Debug, Clone, PartialEq)]
pub struct DecomposedSolution {
    pub grid: TimeGrid,
    pub zir: Vec<f64>,
    pub zsr: Vec<f64>,
    pub total: Vec<f64>,
}

impl DecomposedSolution {
    /// CSV body with header `t,zir,zsr,total`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,zir,zsr,total\n");
        for i in 0..self.grid.len {
            out.push_str(&format!(
                "{},{},{},{}\n",
                self.grid.time_at(i),
                self.zir[i],
                self.zsr[i],
                self.total[i]
            ));
        }
        out
    }
}

/// Closed-form solution of the first-order problem:
/// zir = y0 e^(-a t), zsr = (A/a)(1 - e^(-a t)).
pub fn first_order_solve(p: &FirstOrderProblem, grid: TimeGrid) -> DecomposedSolution {
    let mut zir = Vec::with_capacity(grid.len);
    let mut zsr = Vec::with_capacity(grid.len);
    let mut total = Vec::with_capacity(grid.len);
    for t in grid.times() {
        let decay = (-p.a * t).exp();
        let i = p.y0 * decay;
        let s = p.drive_amplitude / p.a * (1.0 - decay);
        zir.push(i);
        zsr.push(s);
        total.push(i + s);
    }
    DecomposedSolution {
        grid,
        zir,
        zsr,
        total,
    }
}

/// Coefficients of the assembled second-order closed form: homogeneous term
/// e^(-gamma t)(K1 cos w_d t + K2 sin w_d t) plus the steady sinusoid. The
/// drive frequency is carried alongside so `eval` is self-contained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosedForm {
    pub k1: f64,
    pub k2: f64,
    pub steady_amplitude: f64,
    pub steady_phase: f64,
    pub drive_omega: f64,
}

impl ClosedForm {
    pub fn eval(&self, osc: &SecondOrderOscillator, t: f64) -> f64 {
        let wd = osc.omega_d();
        let homogeneous =
            (-osc.gamma() * t).exp() * (self.k1 * (wd * t).cos() + self.k2 * (wd * t).sin());
        homogeneous + self.steady_amplitude * (self.drive_omega * t + self.steady_phase).sin()
    }
}

/// Exact zero-state response of y'' + 2 gamma y' + omega0^2 y = w_d * f(t)
/// for a sine drive f, i.e. the system whose impulse response is the
/// normalized kernel e^(-gamma t) sin(w_d t).
///
/// Returns the sampled trace and the assembled two-term form. Errors when the
/// oscillator is lossless and driven exactly at its natural frequency (the
/// steady term is unbounded there).
pub fn second_order_closed_form(
    osc: &SecondOrderOscillator,
    drive: &Waveform,
    grid: TimeGrid,
) -> Result<(Vec<f64>, ClosedForm), SysDecompError> {
    let desc = drive.to_json();
    if desc["kind"] != "sine" {
        return Err(SysDecompError::NotSine(
            desc["kind"].as_str().unwrap_or("?").to_string(),
        ));
    }
    let amp = desc["params"]["amplitude"].as_f64().expect("sine amplitude");
    let omega = desc["params"]["omega"].as_f64().expect("sine omega");
    let phase = desc["params"]["phase"].as_f64().unwrap_or(0.0);

    let (gamma, w0, wd) = (osc.gamma(), osc.omega0(), osc.omega_d());
    // phasor denominator D = (w0^2 - w^2) + 2j gamma w
    let d = Complex64::new(w0 * w0 - omega * omega, 2.0 * gamma * omega);
    if d.norm() == 0.0 {
        return Err(SysDecompError::ResonantLossless);
    }
    // steady response to wd * amp * sin(w t + phase)
    let steady_c = Complex64::new(wd * amp, 0.0) / d;
    let steady_amplitude = steady_c.norm();
    let steady_phase = phase + steady_c.arg();

    // fit K1, K2 to zero initial conditions y(0) = 0, y'(0) = 0
    let yp0 = steady_amplitude * steady_phase.sin();
    let dyp0 = steady_amplitude * omega * steady_phase.cos();
    let k1 = -yp0;
    let k2 = (gamma * k1 - dyp0) / wd;

    let form = ClosedForm {
        k1,
        k2,
        steady_amplitude,
        steady_phase,
        drive_omega: omega,
    };
    let trace = grid.times().map(|t| form.eval(osc, t)).collect();
    Ok((trace, form))
}

/// Mass model for Newton integration: constant or time varying.
#[derive(Debug, Clone, PartialEq)]
pub enum MassModel {
    Constant(f64),
    Varying(Waveform),
}

impl MassModel {
    fn eval(&self, t: f64) -> f64 {
        match self {
            MassModel::Constant(m) => *m,
            MassModel::Varying(w) => w.eval(t),
        }
    }
}

/// Velocity decomposition from direct integration of F/m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonVelocity {
    /// v0: the zero-input part.
    pub zir: f64,
    /// integral of F/m: the zero-state part.
    pub zsr: f64,
    pub velocity: f64,
}

/// v(t) = v0 + integral of F(l)/m(l) over [0, t].
pub fn newton_velocity(
    force: &Waveform,
    mass: &MassModel,
    v0: f64,
    t: f64,
    q: &QuadratureConfig,
) -> Result<NewtonVelocity, SysDecompError> {
    if t <= 0.0 {
        return Ok(NewtonVelocity {
            zir: v0,
            zsr: 0.0,
            velocity: v0,
        });
    }
    // scan for nonpositive mass on a grid denser than the quadrature panels
    let probes = 4096;
    for i in 0..=probes {
        let ti = t * i as f64 / probes as f64;
        let m = mass.eval(ti);
        if !(m > 0.0) {
            return Err(SysDecompError::NonPositiveMass(m));
        }
    }
    let iv = Interval::new(0.0, t).expect("t > 0");
    let mut breaks = Vec::new();
    force.breakpoints_in(0.0, t, &mut breaks);
    if let MassModel::Varying(w) = mass {
        w.breakpoints_in(0.0, t, &mut breaks);
    }
    // dividing by a varying mass breaks piecewise-polynomial smoothness, so
    // fall back to the full node budget per panel in that case
    let scale = match mass {
        MassModel::Constant(_) => force.quadrature_scale(),
        MassModel::Varying(_) => None,
    };
    let zsr = quad::integrate(&|l| force.eval(l) / mass.eval(l), iv, breaks, scale, q);
    Ok(NewtonVelocity {
        zir: v0,
        zsr,
        velocity: v0 + zsr,
    })
}

/// Final-state response: integral of h(l) f(t - l) over [0, infinity),
/// truncated at 40 decay constants of the kernel (or the kernel's hard
/// cutoff). Requires a decaying kernel and a periodic input.
pub fn asymptotic_tail(
    h: &ImpulseResponse,
    f_inp: &Waveform,
    t: f64,
    q: &QuadratureConfig,
) -> Result<f64, SysDecompError> {
    if f_inp.period().is_none() {
        return Err(SysDecompError::NonPeriodicInput);
    }
    let lambda_max = match h.support_cutoff() {
        Some(tc) => tc,
        None => {
            let rate = h.decay_rate();
            if rate <= 0.0 {
                return Err(SysDecompError::LosslessTail);
            }
            40.0 / rate
        }
    };
    let iv = Interval::new(0.0, lambda_max).expect("positive truncation horizon");
    let mut breaks = Vec::new();
    h.breakpoints_in(0.0, lambda_max, &mut breaks);
    let mut input_breaks = Vec::new();
    f_inp.breakpoints_in(t - lambda_max, t, &mut input_breaks);
    breaks.extend(input_breaks.into_iter().map(|d| t - d));
    let scale = match (h.quadrature_scale(), f_inp.quadrature_scale()) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (Some(a), None) | (None, Some(a)) => Some(a),
        (None, None) => None,
    };
    Ok(quad::integrate(
        &|l| h.eval(l) * f_inp.eval(t - l),
        iv,
        breaks,
        scale,
        q,
    ))
}

/// Laplace transform of the steady periodic output:
/// H(s) * [integral over one period of f e^(-st)] / (1 - e^(-sT)),
/// with H(s) = omega0^2 / ((s + gamma)^2 + omega_d^2), the transform of the
/// exact kernel flavor.
pub fn laplace_periodic_output(
    osc: &SecondOrderOscillator,
    f_inp: &Waveform,
    s: Complex64,
    q: &QuadratureConfig,
) -> Result<Complex64, SysDecompError> {
    let period = f_inp.period().ok_or(SysDecompError::NonPeriodicInput)?;
    if !(s.re > 0.0) {
        return Err(SysDecompError::NonPositiveRealPart(s.re));
    }
    let denom = Complex64::new(1.0, 0.0) - (-s * period).exp();
    if denom.norm() < 1e-12 {
        return Err(SysDecompError::PeriodicPole);
    }
    let transfer = transfer_exact(osc, s);
    let one_period = laplace_integral(f_inp, s, 0.0, period, q);
    Ok(transfer * one_period / denom)
}

/// H(s) of the exact kernel flavor.
pub fn transfer_exact(osc: &SecondOrderOscillator, s: Complex64) -> Complex64 {
    let wd = osc.omega_d();
    let shifted = s + osc.gamma();
    Complex64::new(osc.omega0() * osc.omega0(), 0.0) / (shifted * shifted + wd * wd)
}

/// Truncated numeric transform of the simulated output: integral of
/// f_out(t) e^(-st) over [0, 30/gamma], with f_out computed by convolution
/// against the exact kernel flavor. The oracle side of the periodic-output
/// formula check.
pub fn truncated_output_transform(
    osc: &SecondOrderOscillator,
    f_inp: &Waveform,
    s: Complex64,
    q: &QuadratureConfig,
) -> Result<Complex64, SysDecompError> {
    if osc.gamma() <= 0.0 {
        return Err(SysDecompError::LosslessTail);
    }
    if !(s.re > 0.0) {
        return Err(SysDecompError::NonPositiveRealPart(s.re));
    }
    let kernel = ImpulseResponse::exact(osc);
    let horizon = 30.0 / osc.gamma();
    let dt = osc.damped_period() / 128.0;
    let trace = crate::convolve::zsr(&kernel, f_inp, horizon, dt, q)
        .expect("grid parameters are valid by construction");
    let last = trace.len() - 1;
    let mut re = 0.0;
    let mut im = 0.0;
    for (i, (t, v)) in trace.iter_points().enumerate() {
        let w = if i == 0 || i == last { 0.5 } else { 1.0 };
        let env = (-s.re * t).exp();
        re += w * v * env * (s.im * t).cos();
        im -= w * v * env * (s.im * t).sin();
    }
    Ok(Complex64::new(re * dt, im * dt))
}

/// Numeric integral of f(t) e^(-st) over [t_from, t_to].
pub fn laplace_integral(
    f: &(impl TimeFunction + ?Sized),
    s: Complex64,
    t_from: f64,
    t_to: f64,
    q: &QuadratureConfig,
) -> Complex64 {
    let iv = Interval::new(t_from, t_to).expect("valid transform range");
    let mut breaks = Vec::new();
    f.breakpoints_in(t_from, t_to, &mut breaks);
    // e^(-st) oscillates at Im(s); fold that into the node-density scale
    let exp_scale = if s.im.abs() > 0.0 {
        Some(std::f64::consts::TAU / s.im.abs())
    } else {
        None
    };
    let scale = match (f.quadrature_scale(), exp_scale) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (Some(a), None) | (None, Some(a)) => Some(a),
        (None, None) => None,
    };
    let re = quad::integrate(
        &|t| f.eval(t) * (-s.re * t).exp() * (s.im * t).cos(),
        iv,
        breaks.clone(),
        scale,
        q,
    );
    let im = quad::integrate(
        &|t| -f.eval(t) * (-s.re * t).exp() * (s.im * t).sin(),
        iv,
        breaks,
        scale,
        q,
    );
    Complex64::new(re, im)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convolve;
    use approx::assert_relative_eq;
    use std::f64::consts::TAU;

    fn q() -> QuadratureConfig {
        QuadratureConfig::simpson_default()
    }

    #[test]
    fn first_order_examples() {
        let p = FirstOrderProblem::new(1.0, 2.0, 5.0).unwrap();
        let grid = TimeGrid::from_horizon(30.0, 0.1).unwrap();
        let sol = first_order_solve(&p, grid);
        assert_relative_eq!(sol.total[0], 5.0, epsilon = 1e-12);
        // late: total approaches A/a entirely through the ZSR
        let last = sol.grid.len - 1;
        assert_relative_eq!(sol.total[last], 2.0, epsilon = 1e-9);
        assert!(sol.zir[last].abs() < 1e-9);

        let driven = FirstOrderProblem::new(1.0, 2.0, 0.0).unwrap();
        let sol = first_order_solve(&driven, TimeGrid::from_horizon(2.0, 0.5).unwrap());
        let i1 = (1.0 / 0.5) as usize;
        assert_relative_eq!(sol.total[i1], 1.26424, epsilon = 1e-5);
        assert_eq!(sol.zir[i1], 0.0);
    }

    #[test]
    fn decomposition_superposes() {
        let grid = TimeGrid::from_horizon(5.0, 0.05).unwrap();
        let full = first_order_solve(&FirstOrderProblem::new(2.0, 3.0, 4.0).unwrap(), grid);
        let zir_only = first_order_solve(&FirstOrderProblem::new(2.0, 0.0, 4.0).unwrap(), grid);
        let zsr_only = first_order_solve(&FirstOrderProblem::new(2.0, 3.0, 0.0).unwrap(), grid);
        for i in 0..grid.len {
            assert_eq!(full.total[i], full.zir[i] + full.zsr[i]);
            assert_relative_eq!(full.zir[i], zir_only.total[i], epsilon = 1e-12);
            assert_relative_eq!(full.zsr[i], zsr_only.total[i], epsilon = 1e-12);
        }
        // doubling A doubles the ZSR, leaves the ZIR untouched
        let doubled = first_order_solve(&FirstOrderProblem::new(2.0, 6.0, 4.0).unwrap(), grid);
        for i in 0..grid.len {
            assert_relative_eq!(doubled.zsr[i], 2.0 * full.zsr[i], epsilon = 1e-12);
            assert_eq!(doubled.zir[i], full.zir[i]);
        }
    }

    #[test]
    fn closed_form_satisfies_zero_initial_conditions() {
        let osc = SecondOrderOscillator::from_quality(10.0, 1.0).unwrap();
        let drive = Waveform::sine(1.0, osc.omega_d(), 0.0).unwrap();
        let grid = TimeGrid::from_horizon(1.0, 1e-4).unwrap();
        let (trace, form) = second_order_closed_form(&osc, &drive, grid).unwrap();
        assert!(trace[0].abs() < 1e-12);
        // numeric derivative at 0
        let h = 1e-5;
        let slope = (form.eval(&osc, h) - form.eval(&osc, 0.0)) / h;
        assert!(slope.abs() < 1e-4, "slope at zero = {slope}");
    }

    #[test]
    fn closed_form_matches_convolution() {
        let osc = SecondOrderOscillator::from_quality(10.0, 1.0).unwrap();
        let drive = Waveform::sine(1.0, osc.omega_d(), 0.0).unwrap();
        let horizon = 10.0 / osc.gamma();
        let dt = osc.damped_period() / 64.0;
        let grid = TimeGrid::from_horizon(horizon, dt).unwrap();
        let (oracle, _) = second_order_closed_form(&osc, &drive, grid).unwrap();
        let kernel = ImpulseResponse::normalized(&osc);
        let trace = convolve::zsr(&kernel, &drive, horizon, dt, &q()).unwrap();
        let peak = oracle.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for (i, (sim, orc)) in trace.values().iter().zip(&oracle).enumerate() {
            assert!(
                (sim - orc).abs() / peak < 1e-3,
                "i={i}: {sim} vs {orc}"
            );
        }
        // late amplitude agrees with the steady phasor value
        let steady = crate::freqresp::steady_amplitude_exact(
            &crate::oscillator::RlcParams::new(
                2.0 * osc.gamma(),
                1.0,
                1.0 / (osc.omega0() * osc.omega0()),
                1.0,
            )
            .unwrap(),
            osc.omega_d(),
        )
        .unwrap();
        // unit equivalent circuit peaks at 1/(2 gamma); narrow off-resonance factor
        let late: f64 = oracle[oracle.len() - 64..]
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()));
        assert_relative_eq!(late, steady, max_relative = 0.01);
    }

    #[test]
    fn closed_form_shows_beats_when_detuned() {
        let osc = SecondOrderOscillator::new(0.0, 1.0).unwrap();
        let drive = Waveform::sine(1.0, 1.1, 0.0).unwrap();
        let grid = TimeGrid::from_horizon(200.0, 0.02).unwrap();
        let (trace, _) = second_order_closed_form(&osc, &drive, grid).unwrap();
        // envelope minima of |f_out| sampled at kernel zero crossings
        let mut rect = Vec::new();
        let mut k = 1usize;
        loop {
            let t = k as f64 * std::f64::consts::PI;
            if t > 200.0 {
                break;
            }
            let i = (t / grid.dt).round() as usize;
            rect.push((t, trace[i.min(grid.len - 1)].abs()));
            k += 1;
        }
        let mut minima = Vec::new();
        for i in 1..rect.len() - 1 {
            if rect[i].1 < rect[i - 1].1 && rect[i].1 <= rect[i + 1].1 {
                minima.push(rect[i].0);
            }
        }
        assert!(minima.len() >= 2);
        let spacing = minima[1] - minima[0];
        assert_relative_eq!(2.0 * spacing, TAU / 0.1, max_relative = 0.02);

        // lossless at exact resonance is rejected
        let resonant = Waveform::sine(1.0, 1.0, 0.0).unwrap();
        assert_eq!(
            second_order_closed_form(&osc, &resonant, grid).map(|_| ()),
            Err(SysDecompError::ResonantLossless)
        );
    }

    #[test]
    fn newton_velocity_examples() {
        let zero_force = Waveform::sine(0.0, 1.0, 0.0).unwrap();
        let v = newton_velocity(&zero_force, &MassModel::Constant(2.0), 3.5, 4.0, &q()).unwrap();
        assert_eq!(v.velocity, 3.5);
        assert_eq!(v.zsr, 0.0);

        let unit_force = Waveform::unit_step(-1.0).unwrap();
        let v = newton_velocity(&unit_force, &MassModel::Constant(2.0), 0.0, 4.0, &q()).unwrap();
        assert_relative_eq!(v.velocity, 2.0, max_relative = 1e-9);

        // time-varying mass m(t) = 1 + t: integral dt/(1+t) = ln 2 at t = 1
        let mass = MassModel::Varying(Waveform::sampled(0.0, 1.0, vec![1.0, 2.0]).unwrap());
        let v = newton_velocity(&unit_force, &mass, 0.0, 1.0, &q()).unwrap();
        assert_relative_eq!(v.zsr, std::f64::consts::LN_2, max_relative = 1e-6);
        assert_relative_eq!(v.velocity, 0.69315, epsilon = 1e-5);

        let bad_mass = MassModel::Constant(-1.0);
        assert!(matches!(
            newton_velocity(&unit_force, &bad_mass, 0.0, 1.0, &q()),
            Err(SysDecompError::NonPositiveMass(_))
        ));
    }

    #[test]
    fn asymptotic_tail_matches_finite_horizon_late() {
        let osc = SecondOrderOscillator::from_quality(10.0, 1.0).unwrap();
        let h = ImpulseResponse::normalized(&osc);
        let drive = Waveform::sine(1.0, osc.omega_d(), 0.0).unwrap();
        let t = 12.0 / osc.gamma();
        let tail = asymptotic_tail(&h, &drive, t, &q()).unwrap();
        let finite = convolve::zsr_at(&h, &drive, t, &q()).unwrap();
        let bound = (-12.0f64).exp() + 1e-6;
        assert!(
            (tail - finite).abs() / tail.abs() < bound,
            "{tail} vs {finite}"
        );

        // periodic in t
        let t2 = t + TAU / osc.omega_d();
        let tail2 = asymptotic_tail(&h, &drive, t2, &q()).unwrap();
        assert_relative_eq!(tail, tail2, max_relative = 1e-6);

        let lossless = SecondOrderOscillator::new(0.0, 1.0).unwrap();
        let h0 = ImpulseResponse::normalized(&lossless);
        assert_eq!(
            asymptotic_tail(&h0, &drive, t, &q()),
            Err(SysDecompError::LosslessTail)
        );
    }

    #[test]
    fn transfer_at_origin_is_unity() {
        // omega0^2 / (gamma^2 + omega_d^2) = 1 by the omega_d definition
        for (g, w0) in [(0.05, 1.0), (0.3, 2.0), (0.0, 1.5)] {
            let osc = SecondOrderOscillator::new(g, w0).unwrap();
            let h0 = transfer_exact(&osc, Complex64::new(1e-300, 0.0));
            assert_relative_eq!(h0.re, 1.0, epsilon = 1e-12);
            assert_relative_eq!(h0.im, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn periodic_laplace_matches_truncated_transform() {
        let osc = SecondOrderOscillator::from_quality(10.0, 1.0).unwrap();
        let drive = Waveform::sine(1.0, osc.omega_d(), 0.0).unwrap();
        let s = Complex64::new(osc.gamma(), 0.0);
        let formula = laplace_periodic_output(&osc, &drive, s, &q()).unwrap();

        // oracle: simulate with the exact kernel, then transform numerically
        let kernel = ImpulseResponse::exact(&osc);
        let horizon = 30.0 / osc.gamma();
        let dt = osc.damped_period() / 128.0;
        let trace = convolve::zsr(&kernel, &drive, horizon, dt, &q()).unwrap();
        let mut acc = 0.0;
        for (t, v) in trace.iter_points() {
            let w = if t == 0.0 || t == trace.time_at(trace.len() - 1) {
                0.5
            } else {
                1.0
            };
            acc += w * v * (-s.re * t).exp();
        }
        let numeric = acc * dt;
        assert!(
            (formula.re - numeric).abs() / numeric.abs() < 0.01,
            "{} vs {numeric}",
            formula.re
        );

        // pole detection: s on the imaginary lattice of the period
        let period = drive.period().unwrap();
        let pole = Complex64::new(1e-15, TAU / period);
        assert_eq!(
            laplace_periodic_output(&osc, &drive, pole, &q()),
            Err(SysDecompError::PeriodicPole)
        );
        assert!(laplace_periodic_output(&osc, &drive, Complex64::new(-1.0, 0.0), &q()).is_err());
    }
}
