//! Resonance without a sinusoid: a lossless oscillator driven by a square
//! wave grows linearly, extremes stepping through S0, -2 S0, +3 S0 with
//! S0 = 2/omega. Stretching the wave to three natural periods still excites
//! the system, one third as effectively.

use std::error::Error;
use std::fs;
use std::path::PathBuf;
use tdres::cli::{render_plot, PlotSeries};
use tdres::convolve;
use tdres::{ImpulseResponse, QuadratureConfig, SecondOrderOscillator, Waveform};

fn main() -> Result<(), Box<dyn Error>> {
    let out = PathBuf::from("target/example_output/square_wave_drive");
    fs::create_dir_all(&out)?;
    let q = QuadratureConfig::simpson_default();

    let osc = SecondOrderOscillator::new(0.0, 1.0)?;
    let t_o = osc.natural_period();
    let square = Waveform::square(1.0, t_o)?;
    let s0 = 2.0 / osc.omega0();

    println!("matched square wave (T = T_o), S0 = {s0}:");
    let env = convolve::extreme_samples(&osc, &square, 6, &q)?;
    for e in env.entries() {
        println!(
            "  k = {}: f_out({:6.3}) = {:+.4}   (predicted {:+.1})",
            e.k,
            e.t_k,
            e.value,
            e.expected_sign() * s0 * e.k as f64
        );
    }

    let stretched = Waveform::square(1.0, 3.0 * t_o)?;
    println!("stretched square wave (T = 3 T_o): extremes at every third zero-crossing");
    let env3 = convolve::extreme_samples(&osc, &stretched, 9, &q)?;
    for e in env3.entries().iter().filter(|e| e.k % 3 == 0) {
        println!("  k = {}: f_out({:6.3}) = {:+.4}", e.k, e.t_k, e.value);
    }
    let slope_matched = env.entries()[5].value.abs() / env.entries()[5].t_k;
    let slope_stretched = env3.entries()[8].value.abs() / env3.entries()[8].t_k;
    println!(
        "growth per unit time: matched {:.4}, stretched {:.4} (ratio {:.4})",
        slope_matched,
        slope_stretched,
        slope_stretched / slope_matched
    );

    let kernel = ImpulseResponse::normalized(&osc);
    let horizon = 6.0 * t_o;
    let dt = t_o / 200.0;
    let trace = convolve::zsr(&kernel, &square, horizon, dt, &q)?;
    let trace3 = convolve::zsr(&kernel, &stretched, horizon, dt, &q)?;
    let series = vec![
        PlotSeries::new("T = T_o", trace.iter_points().collect()),
        PlotSeries::new("T = 3 T_o", trace3.iter_points().collect()),
    ];
    fs::write(out.join("square_growth.svg"), render_plot(&series, "t [s]", "f_out")?)?;
    fs::write(out.join("matched_envelope.csv"), env.to_csv())?;
    println!("wrote {}", out.display());
    Ok(())
}
