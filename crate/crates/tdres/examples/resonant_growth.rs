//! The full resonant response of a Q = 10 oscillator driven at its
//! self-frequency: linear envelope growth, then saturation.
//!
//! Writes the trace, the extreme-sample envelope and an SVG overlay to
//! `target/example_output/resonant_growth/`.

use std::error::Error;
use std::fs;
use std::path::PathBuf;
use tdres::cli::{render_plot, PlotSeries};
use tdres::convolve;
use tdres::freqresp;
use tdres::{ImpulseResponse, QuadratureConfig, SecondOrderOscillator, Waveform};

fn main() -> Result<(), Box<dyn Error>> {
    let out = PathBuf::from("target/example_output/resonant_growth");
    fs::create_dir_all(&out)?;
    let q = QuadratureConfig::simpson_default();

    let osc = SecondOrderOscillator::from_quality(10.0, 1.0)?;
    let drive = Waveform::sine(1.0, osc.omega_d(), 0.0)?;
    let kernel = ImpulseResponse::normalized(&osc);

    let horizon = 12.0 / osc.gamma();
    let dt = osc.damped_period() / 100.0;
    println!("simulating {horizon} s at dt = {dt:.4} s ...");
    let trace = convolve::zsr(&kernel, &drive, horizon, dt, &q)?;
    fs::write(out.join("trace.csv"), trace.to_csv())?;

    let k_max = (horizon * osc.omega_d() / std::f64::consts::PI) as usize;
    let envelope = convolve::extreme_samples(&osc, &drive, k_max, &q)?;
    fs::write(out.join("envelope.csv"), envelope.to_csv())?;

    let saturation = convolve::saturation_level(&osc, &drive, &q)?;
    let transient = freqresp::transient_duration(&osc)?;
    println!("saturation level      : {saturation:.4}  (1/(2 gamma) = {})", 1.0 / (2.0 * osc.gamma()));
    println!("transient duration    : {:.1} s (= (1/pi) Q T_o = {:.1} s)", transient.seconds, transient.q_periods_form);

    // where the envelope first reaches (1 - 1/e) of saturation
    let threshold = (1.0 - (-1.0f64).exp()) * saturation;
    let settle = envelope
        .entries()
        .windows(2)
        .find_map(|w| {
            let (a, b) = (&w[0], &w[1]);
            (a.value.abs() < threshold && b.value.abs() >= threshold).then(|| {
                a.t_k + (threshold - a.value.abs()) / (b.value.abs() - a.value.abs()) * (b.t_k - a.t_k)
            })
        })
        .unwrap_or(f64::NAN);
    println!("settles to 1 - 1/e at : {settle:.1} s");

    let series = vec![
        PlotSeries::new("f_out", trace.iter_points().collect()),
        PlotSeries::new(
            "extremes",
            envelope.entries().iter().map(|e| (e.t_k, e.value)).collect(),
        ),
    ];
    fs::write(out.join("growth.svg"), render_plot(&series, "t [s]", "f_out")?)?;
    println!("wrote {}", out.display());
    Ok(())
}
