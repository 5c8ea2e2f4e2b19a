//! Beats while hunting for the resonant frequency: a detuned drive modulates
//! the envelope at period 2 pi / |omega - omega0|.

use std::error::Error;
use std::fs;
use std::path::PathBuf;
use tdres::cli::{render_plot, PlotSeries};
use tdres::convolve;
use tdres::{ImpulseResponse, QuadratureConfig, SecondOrderOscillator, Waveform};

fn main() -> Result<(), Box<dyn Error>> {
    let out = PathBuf::from("target/example_output/beats");
    fs::create_dir_all(&out)?;
    let q = QuadratureConfig::simpson_default();

    let osc = SecondOrderOscillator::new(0.0, 1.0)?;
    let horizon = 200.0;

    let mut series = Vec::new();
    for detuning in [0.1, -0.1] {
        let omega = osc.omega0() + detuning;
        let beats = convolve::beat_profile(&osc, omega, horizon, &q)?;
        println!(
            "drive at omega = {omega:.2}: beat period {:.2} s (2 pi/|detuning| = {:.2} s, {} envelope minima)",
            beats.beat_period,
            std::f64::consts::TAU / detuning.abs(),
            beats.minima.len()
        );
    }

    let kernel = ImpulseResponse::normalized(&osc);
    let drive = Waveform::sine(1.0, 1.1, 0.0)?;
    let trace = convolve::zsr(&kernel, &drive, horizon, osc.natural_period() / 64.0, &q)?;
    series.push(PlotSeries::new("f_out (omega = 1.1)", trace.iter_points().collect()));
    fs::write(out.join("beats.svg"), render_plot(&series, "t [s]", "f_out")?)?;
    fs::write(out.join("beats.csv"), trace.to_csv())?;

    match convolve::beat_profile(&osc, osc.omega0(), horizon, &q) {
        Err(e) => println!("drive exactly at omega0: {e}"),
        Ok(_) => unreachable!("resonant drive has no envelope minima"),
    }
    println!("wrote {}", out.display());
    Ok(())
}
