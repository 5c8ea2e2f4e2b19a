//! The resonance curve two ways: the exact phasor formula and saturated
//! time-domain amplitudes, with the half-power bandwidth delta_omega = 2 gamma
//! read off the curve.

use std::error::Error;
use std::fs;
use std::path::PathBuf;
use tdres::cli::{render_plot, PlotSeries};
use tdres::freqresp::{self, SweepMethod, SweepSystem};
use tdres::{QuadratureConfig, SecondOrderOscillator};

fn main() -> Result<(), Box<dyn Error>> {
    let out = PathBuf::from("target/example_output/bandwidth");
    fs::create_dir_all(&out)?;
    let q = QuadratureConfig::simpson_default();

    let osc = SecondOrderOscillator::from_quality(10.0, 1.0)?;
    let gamma = osc.gamma();
    let grid: Vec<f64> = (0..=200)
        .map(|i| 1.0 - 5.0 * gamma + 10.0 * gamma * i as f64 / 200.0)
        .collect();

    let analytic =
        freqresp::resonance_sweep(SweepSystem::Oscillator(&osc), &grid, SweepMethod::Analytic, &q)?;
    println!("time-domain sweep over {} frequencies ...", grid.len());
    let timedomain = freqresp::resonance_sweep(
        SweepSystem::Oscillator(&osc),
        &grid,
        SweepMethod::TimeDomain,
        &q,
    )?;

    let hp = freqresp::half_power(&analytic)?;
    println!(
        "half-power: omega1 = {:.4}, omega2 = {:.4}, delta_omega = {:.4} (2 gamma = {:.4}), Q_est = {:.3}",
        hp.omega1,
        hp.omega2,
        hp.delta_omega,
        2.0 * gamma,
        hp.q_est
    );

    fs::write(out.join("analytic.csv"), analytic.to_csv())?;
    fs::write(out.join("timedomain.csv"), timedomain.to_csv())?;
    fs::write(
        out.join("halfpower.json"),
        serde_json::to_string_pretty(&hp.to_json())? + "\n",
    )?;

    let an = analytic.peak_normalized();
    let td = timedomain.peak_normalized();

    // the narrowband consistency claim lives within |omega - omega0| <= 3 gamma
    let rlc = tdres::RlcParams::new(2.0 * gamma, 1.0, 1.0, 1.0)?;
    let lor_peak = 1.0 / (2.0 * gamma);
    let max_gap = grid
        .iter()
        .zip(td.amplitudes())
        .filter(|(w, _)| (**w - 1.0).abs() <= 3.0 * gamma)
        .map(|(w, a)| {
            let lor = freqresp::steady_amplitude_lorentzian(&rlc, *w).unwrap() / lor_peak;
            (a - lor).abs()
        })
        .fold(0.0f64, f64::max);
    println!(
        "time-domain curve vs narrowband shape within 3 gamma of resonance: \
         max difference {:.2}% of peak",
        max_gap * 100.0
    );

    let series = vec![
        PlotSeries::new(
            "analytic",
            an.omegas().iter().cloned().zip(an.amplitudes().iter().cloned()).collect(),
        ),
        PlotSeries::new(
            "time domain",
            td.omegas().iter().cloned().zip(td.amplitudes().iter().cloned()).collect(),
        ),
    ];
    fs::write(
        out.join("resonance_curve.svg"),
        render_plot(&series, "omega [rad/s]", "amplitude / peak")?,
    )?;
    println!("wrote {}", out.display());
    Ok(())
}
