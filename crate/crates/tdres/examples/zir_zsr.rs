//! Zero-input plus zero-state: the response split that separates initial
//! conditions from drive. First-order closed forms, direct Newton
//! integration (including a time-varying mass), and the asymptotic tail.

use std::error::Error;
use std::fs;
use std::path::PathBuf;
use tdres::convolve;
use tdres::sysdecomp::{self, FirstOrderProblem, MassModel, TimeGrid};
use tdres::{ImpulseResponse, QuadratureConfig, SecondOrderOscillator, Waveform};

fn main() -> Result<(), Box<dyn Error>> {
    let out = PathBuf::from("target/example_output/zir_zsr");
    fs::create_dir_all(&out)?;
    let q = QuadratureConfig::simpson_default();

    // y' + y = 2 u(t), y(0) = 5: ZIR decays, ZSR carries the asymptote A/a
    let problem = FirstOrderProblem::new(1.0, 2.0, 5.0)?;
    let grid = TimeGrid::from_horizon(8.0, 0.01)?;
    let solution = sysdecomp::first_order_solve(&problem, grid);
    fs::write(out.join("first_order.csv"), solution.to_csv())?;
    let last = grid.len - 1;
    println!(
        "first order at t = {:.0}: zir = {:.5}, zsr = {:.5}, total -> A/a = {:.5}",
        grid.time_at(last),
        solution.zir[last],
        solution.zsr[last],
        solution.total[last]
    );

    // the same ZSR from the convolution engine
    let h = ImpulseResponse::first_order(1.0)?;
    let step = Waveform::scaled(Waveform::unit_step(0.0)?, 2.0)?;
    let at_one = convolve::zsr_at(&h, &step, 1.0, &q)?;
    println!("zsr(1) by convolution = {at_one:.5} (closed form 2(1 - 1/e) = 1.26424)");

    // Newton: v = v0 + integral F/m; with m(t) = 1 + t the integral is ln 2
    let force = Waveform::unit_step(-1.0)?;
    let mass = MassModel::Varying(Waveform::sampled(0.0, 1.0, vec![1.0, 2.0])?);
    let v = sysdecomp::newton_velocity(&force, &mass, 0.5, 1.0, &q)?;
    println!(
        "newton with m(t) = 1 + t over [0, 1]: zir = {:.4}, zsr = {:.5} (ln 2 = {:.5}), v = {:.5}",
        v.zir,
        v.zsr,
        std::f64::consts::LN_2,
        v.velocity
    );

    // the established periodic state via the truncated infinite-horizon form
    let osc = SecondOrderOscillator::from_quality(10.0, 1.0)?;
    let kernel = ImpulseResponse::normalized(&osc);
    let drive = Waveform::sine(1.0, osc.omega_d(), 0.0)?;
    let t = 12.0 / osc.gamma();
    let tail = sysdecomp::asymptotic_tail(&kernel, &drive, t, &q)?;
    let finite = convolve::zsr_at(&kernel, &drive, t, &q)?;
    println!(
        "asymptotic tail at t = {t:.0}: {tail:.6} vs finite-horizon {finite:.6} \
         (difference {:.1e})",
        (tail - finite).abs()
    );
    println!("wrote {}", out.display());
    Ok(())
}
