//! The cut kernel h_S: undamped oscillations truncated after the integer
//! number of half waves nearest 1/gamma. It makes the saturated regime
//! exactly periodic and the initial envelope slope exactly Q-independent.

use std::error::Error;
use std::f64::consts::PI;
use std::fs;
use std::path::PathBuf;
use tdres::cli::{render_plot, PlotSeries};
use tdres::convolve;
use tdres::waveform::TimeFunction;
use tdres::{ImpulseResponse, QuadratureConfig, SecondOrderOscillator, Waveform};

fn main() -> Result<(), Box<dyn Error>> {
    let out = PathBuf::from("target/example_output/simplified_kernel");
    fs::create_dir_all(&out)?;
    let q = QuadratureConfig::simpson_default();

    let osc = SecondOrderOscillator::from_quality(10.0, 1.0)?;
    let hs = ImpulseResponse::simplified(&osc)?;
    let cutoff = hs.support_cutoff().unwrap();
    println!(
        "1/gamma = {:.1}; cutoff snapped to {} half waves = {:.4} s",
        1.0 / osc.gamma(),
        (cutoff / (PI / osc.omega0())).round(),
        cutoff
    );

    // beyond the cutoff the response to a periodic drive repeats exactly
    let resonant = Waveform::sine(1.0, osc.omega0(), 0.0)?;
    let report = convolve::periodic_tail_check(&osc, &resonant, &q)?;
    println!(
        "tail periodicity with h_S: periodic = {}, measured period {:.4} s, drift {:.1e}",
        report.is_periodic, report.measured_period, report.max_relative_deviation
    );

    // against the exact kernel the tail is only approximately periodic
    let exact = ImpulseResponse::normalized(&osc);
    let t_probe = 5.0 / osc.gamma();
    let drift =
        convolve::periodicity_drift(&exact, &resonant, osc.natural_period(), t_probe, &q)?;
    println!(
        "same check with the exact kernel at t = {t_probe:.0}: drift {:.2e} (< e^(-gamma t) = {:.2e})",
        drift,
        (-osc.gamma() * t_probe).exp()
    );

    // initial slope from the first two extremes is the same at any Q
    for quality in [10.0, 30.0, 100.0] {
        let o = SecondOrderOscillator::from_quality(quality, 1.0)?;
        let k = ImpulseResponse::simplified(&o)?;
        let d = Waveform::sine(1.0, o.omega0(), 0.0)?;
        let half = PI / o.omega0();
        let v1 = convolve::zsr_at(&k, &d, half, &q)?.abs();
        let v2 = convolve::zsr_at(&k, &d, 2.0 * half, &q)?.abs();
        println!("  Q = {quality:>4}: initial envelope slope {:.6}", (v2 - v1) / half);
    }

    let samples = 800;
    let pts = |f: &dyn Fn(f64) -> f64| -> Vec<(f64, f64)> {
        (0..=samples)
            .map(|i| {
                let t = 1.3 * cutoff * i as f64 / samples as f64;
                (t, f(t))
            })
            .collect()
    };
    let series = vec![
        PlotSeries::new("exact h", pts(&|t| exact.eval(t))),
        PlotSeries::new("cut h_S", pts(&|t| hs.eval(t))),
    ];
    fs::write(out.join("kernels.svg"), render_plot(&series, "t [s]", "h(t)")?)?;
    println!("wrote {}", out.display());
    Ok(())
}
