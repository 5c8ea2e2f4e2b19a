//! Discovering a wave's harmonic content with oscillators instead of
//! transforms: resonators tuned to k times the base frequency saturate in
//! proportion to the k-th sine coefficient, once calibrated against a unit
//! sine. Cross-checked against direct Fourier integrals.

use std::error::Error;
use std::f64::consts::{PI, TAU};
use std::fs;
use std::path::PathBuf;
use tdres::fourier_probe;
use tdres::{QuadratureConfig, Waveform};

fn main() -> Result<(), Box<dyn Error>> {
    let out = PathBuf::from("target/example_output/fourier_discovery");
    fs::create_dir_all(&out)?;
    let q = QuadratureConfig::simpson_default();

    let square = Waveform::square(1.0, TAU)?;
    println!("probing the unit square wave with a Q = 50 resonator bank ...");
    let rows = fourier_probe::probe_with_calibration(&square, &[1, 2, 3, 4, 5], 50.0, &q)?;
    println!("{:>2} {:>10} {:>10} {:>10}", "k", "estimate", "direct", "4/(k pi)");
    for r in &rows {
        let series = if r.harmonic % 2 == 1 {
            format!("{:.6}", 4.0 / (r.harmonic as f64 * PI))
        } else {
            "0".to_string()
        };
        println!(
            "{:>2} {:>10.6} {:>10.6} {:>10}",
            r.harmonic, r.estimate, r.direct, series
        );
    }
    fs::write(out.join("square_probe.csv"), fourier_probe::rows_to_csv(&rows))?;

    let triangle = Waveform::triangle(1.0, TAU)?;
    println!("probing the unit triangle wave (coefficients fall off as 1/k^2) ...");
    let rows = fourier_probe::probe_with_calibration(&triangle, &[1, 3, 5], 50.0, &q)?;
    let e1 = rows[0].estimate;
    for r in &rows {
        println!(
            "  k = {}: estimate {:.6}, ratio to k=1 {:.5}",
            r.harmonic,
            r.estimate,
            r.estimate / e1
        );
    }
    fs::write(out.join("triangle_probe.csv"), fourier_probe::rows_to_csv(&rows))?;

    // a 30%-duty pulse train has cosine content too; the bank reads off the
    // sine coefficients, which is what the direct integral reports as well
    let pulse = Waveform::pulse_train(vec![1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0], TAU)?;
    let rows = fourier_probe::probe_with_calibration(&pulse, &[1, 2, 3], 50.0, &q)?;
    println!("30%-duty pulse train, sine coefficients:");
    for r in &rows {
        println!(
            "  k = {}: estimate {:.5} vs direct {:.5} (err {:.2}% of leading)",
            r.harmonic,
            r.estimate,
            r.direct,
            r.relative_error * 100.0
        );
    }
    fs::write(out.join("pulse_probe.csv"), fourier_probe::rows_to_csv(&rows))?;
    println!("wrote {}", out.display());
    Ok(())
}
