//! Pointwise numeric Laplace check: the closed periodic-output transform
//! H(s) * F_one_period(s) / (1 - e^(-sT)) against the transform of an
//! actually simulated response, truncated at 30 decay constants.

use num_complex::Complex64;
use std::error::Error;
use std::fs;
use std::path::PathBuf;
use tdres::sysdecomp;
use tdres::{QuadratureConfig, SecondOrderOscillator, Waveform};

fn main() -> Result<(), Box<dyn Error>> {
    let out = PathBuf::from("target/example_output/laplace_check");
    fs::create_dir_all(&out)?;
    let q = QuadratureConfig::simpson_default();

    let osc = SecondOrderOscillator::from_quality(10.0, 1.0)?;
    let drive = Waveform::sine(1.0, osc.omega_d(), 0.0)?;

    // transfer function at the origin is exactly 1 by the omega_d identity
    let h0 = sysdecomp::transfer_exact(&osc, Complex64::new(1e-12, 0.0));
    println!("H(0+) = {:.12} (omega0^2 / (gamma^2 + omega_d^2) = 1)", h0.re);

    let mut rows = Vec::new();
    for s in [
        Complex64::new(osc.gamma(), 0.0),
        Complex64::new(2.0 * osc.gamma(), 0.0),
        Complex64::new(osc.gamma(), 0.5),
    ] {
        let formula = sysdecomp::laplace_periodic_output(&osc, &drive, s, &q)?;
        println!("simulating the oracle transform at s = {:.3} + {:.3}i ...", s.re, s.im);
        let numeric = sysdecomp::truncated_output_transform(&osc, &drive, s, &q)?;
        let rel_err = (formula - numeric).norm() / numeric.norm();
        println!(
            "  formula {:+.6} {:+.6}i | numeric {:+.6} {:+.6}i | rel err {:.2e}",
            formula.re, formula.im, numeric.re, numeric.im, rel_err
        );
        rows.push(serde_json::json!({
            "s_re": s.re,
            "s_im": s.im,
            "formula_re": formula.re,
            "formula_im": formula.im,
            "numeric_re": numeric.re,
            "numeric_im": numeric.im,
            "rel_err": rel_err,
        }));
    }
    fs::write(
        out.join("laplace.json"),
        serde_json::to_string_pretty(&serde_json::Value::Array(rows))? + "\n",
    )?;

    // a pole of the periodic transform is detected, not evaluated
    let period = 2.0 * std::f64::consts::PI / osc.omega_d();
    let pole = Complex64::new(1e-15, 2.0 * std::f64::consts::PI / period);
    match sysdecomp::laplace_periodic_output(&osc, &drive, pole, &q) {
        Err(e) => println!("at s on the periodic lattice: {e}"),
        Ok(_) => unreachable!("pole must be rejected"),
    }
    println!("wrote {}", out.display());
    Ok(())
}
