//! Command-line frontend: subcommand dispatch, config/flag merging, and
//! deterministic CSV/JSON/SVG emission.
//!
//! Exit codes: 0 on success, 2 on usage or configuration errors (with a
//! diagnostic naming the offending flag), 1 when a module reports a runtime
//! error.

mod config;
mod plot;

pub use config::{
    load_config, ConfigError, InputSpec, NumericSpec, OscillatorSpec, ResolvedNumeric, RunConfig,
};
pub use plot::{export_plot, render_plot, PlotError, PlotSeries};

use crate::convolve;
use crate::fourier_probe;
use crate::freqresp::{self, SweepMethod, SweepSystem};
use crate::genopt;
use crate::oscillator::{ImpulseResponse, SecondOrderOscillator};
use crate::sysdecomp;
use crate::waveform::{QuadRule, TimeFunction, Waveform};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(
    name = "tdres",
    version,
    about = "Time-domain resonance toolkit: convolution responses, envelopes, \
             matched drives, and resonator-bank harmonic probing"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Simulate a zero-state response trace (optionally with envelope and plot)
    Simulate(SimulateArgs),
    /// Sweep the resonance curve and report the half-power bandwidth
    Sweep(SweepArgs),
    /// Synthesize and certify the norm-constrained optimal periodic drive
    Optimize(OptimizeArgs),
    /// Probe the harmonic content of a periodic wave with a resonator bank
    Fourier(FourierArgs),
    /// Decompose responses into ZIR + ZSR, or run the periodic Laplace check
    Decompose(DecomposeArgs),
}

#[derive(Args, Debug, Default)]
struct CommonArgs {
    /// JSON config file; explicit flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
    /// Damping factor gamma (1/s)
    #[arg(long)]
    gamma: Option<f64>,
    /// Natural frequency omega0 (rad/s)
    #[arg(long)]
    omega0: Option<f64>,
    /// Quality factor Q = omega0/(2 gamma)
    #[arg(long)]
    q: Option<f64>,
    /// Series resistance (ohm); give together with --l and --c
    #[arg(long)]
    r: Option<f64>,
    /// Series inductance (henry)
    #[arg(long)]
    l: Option<f64>,
    /// Series capacitance (farad)
    #[arg(long)]
    c: Option<f64>,
    /// Drive voltage amplitude for RLC runs
    #[arg(long)]
    v_m: Option<f64>,
    /// Trace grid step (s); default T_d/200
    #[arg(long)]
    dt: Option<f64>,
    /// Trace horizon (s); default 12/gamma (20 T_o when lossless)
    #[arg(long)]
    horizon: Option<f64>,
    /// Quadrature sub-intervals per shortest period; default 256
    #[arg(long)]
    quad_points: Option<usize>,
    /// Quadrature rule
    #[arg(long, value_enum)]
    rule: Option<RuleArg>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum RuleArg {
    Simpson,
    Trapezoid,
}

impl From<RuleArg> for QuadRule {
    fn from(r: RuleArg) -> Self {
        match r {
            RuleArg::Simpson => QuadRule::Simpson,
            RuleArg::Trapezoid => QuadRule::Trapezoid,
        }
    }
}

#[derive(Args, Debug, Default)]
struct InputArgs {
    /// Input waveform kind: sine, square or triangle
    #[arg(long)]
    input: Option<String>,
    /// JSON waveform descriptor file (overrides --input)
    #[arg(long)]
    input_json: Option<PathBuf>,
    /// Input amplitude (default 1)
    #[arg(long)]
    amplitude: Option<f64>,
    /// Sine drive angular frequency (default: resonant, omega_d)
    #[arg(long)]
    drive_omega: Option<f64>,
    /// Square/triangle drive period (default: T_o)
    #[arg(long)]
    drive_period: Option<f64>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum KernelFlavorArg {
    Normalized,
    Exact,
    Simplified,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[command(flatten)]
    input: InputArgs,
    /// Impulse-response flavor for the convolution kernel
    #[arg(long, value_enum, default_value = "normalized")]
    kernel: KernelFlavorArg,
    /// Trace CSV output path (header `t,f_out`; a JSON sidecar is written
    /// alongside as <out>.meta.json)
    #[arg(long)]
    out: PathBuf,
    /// Also write the extreme-sample envelope CSV (header `k,t_k,value`)
    #[arg(long)]
    envelope: Option<PathBuf>,
    /// Number of extremes for --envelope (default: all within the horizon)
    #[arg(long)]
    k_max: Option<usize>,
    /// Also write an SVG plot of the trace (and envelope when requested)
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum MethodArg {
    Analytic,
    Timedomain,
    Both,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Sweep start frequency (rad/s)
    #[arg(long)]
    from: f64,
    /// Sweep end frequency (rad/s)
    #[arg(long)]
    to: f64,
    /// Number of grid points
    #[arg(long)]
    points: usize,
    #[arg(long, value_enum, default_value = "analytic")]
    method: MethodArg,
    /// Output prefix: writes <out>_analytic.csv / <out>_timedomain.csv /
    /// <out>_halfpower.json
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct OptimizeArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Kernel impulse-response flavor built from the oscillator flags
    #[arg(long, value_enum, default_value = "normalized")]
    kernel: KernelFlavorArg,
    /// JSON waveform descriptor file to use as the kernel instead
    #[arg(long)]
    kernel_json: Option<PathBuf>,
    /// Kernel period for the generating interval (default: T_d, or the
    /// waveform kernel's own period)
    #[arg(long)]
    kernel_period: Option<f64>,
    /// JSON file with an array of candidate waveform descriptors
    #[arg(long)]
    candidates: Option<PathBuf>,
    /// Norm constraint on the generating interval (default: the kernel's norm)
    #[arg(long)]
    target_norm: Option<f64>,
    /// Predicted extremes to include in the report
    #[arg(long, default_value_t = 5)]
    k_max: usize,
    /// Report JSON output path
    #[arg(long)]
    out: PathBuf,
    /// Also write the synthesized optimal waveform sampled over one period
    #[arg(long)]
    optimal_csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FourierArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[command(flatten)]
    input: InputArgs,
    /// Comma-separated harmonic indices, e.g. 1,3,5
    #[arg(long, default_value = "1,3,5")]
    harmonics: String,
    /// Quality factor of every bank oscillator
    #[arg(long, default_value_t = 50.0)]
    bank_q: f64,
    /// Probe CSV output path
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct DecomposeArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[command(flatten)]
    input: InputArgs,
    /// First-order decay rate a (1/s) for the ZIR/ZSR split
    #[arg(long)]
    a: Option<f64>,
    /// Constant drive amplitude A
    #[arg(long, default_value_t = 1.0)]
    drive_amplitude: f64,
    /// Initial value y(0)
    #[arg(long, default_value_t = 0.0)]
    y0: f64,
    /// Run the periodic-output Laplace check instead of the first-order split
    #[arg(long)]
    laplace: bool,
    /// Laplace variable, real part (with --laplace)
    #[arg(long)]
    s_re: Option<f64>,
    /// Laplace variable, imaginary part
    #[arg(long, default_value_t = 0.0)]
    s_im: f64,
    /// Output path (CSV for the split, JSON for the Laplace check)
    #[arg(long)]
    out: PathBuf,
}

/// A failed run with its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: msg.into(),
        }
    }

    fn runtime(msg: impl std::fmt::Display) -> Self {
        Failure {
            code: 1,
            message: msg.to_string(),
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::usage(e.0)
    }
}

/// Parses and runs a full command line (excluding the program name is fine;
/// `tdres` is prepended when missing). Returns the process exit code.
pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let mut argv: Vec<String> = args.into_iter().map(Into::into).collect();
    if argv.first().map(|s| s != "tdres").unwrap_or(true) {
        argv.insert(0, "tdres".to_string());
    }
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders help/version on stdout with code 0, errors on
            // stderr with code 2
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Simulate(args) => simulate(args),
        Command::Sweep(args) => sweep(args),
        Command::Optimize(args) => optimize(args),
        Command::Fourier(args) => fourier(args),
        Command::Decompose(args) => decompose(args),
    }
}

struct MergedSections {
    oscillator: OscillatorSpec,
    input: InputSpec,
    numeric: NumericSpec,
}

fn merge_common(common: &CommonArgs, input: Option<&InputArgs>) -> Result<MergedSections, Failure> {
    let file_cfg = match &common.config {
        Some(path) => load_config(path)?,
        None => RunConfig::default(),
    };
    let osc_flags = OscillatorSpec {
        gamma: common.gamma,
        omega0: common.omega0,
        q: common.q,
        r: common.r,
        l: common.l,
        c: common.c,
        v_m: common.v_m,
    };
    let numeric_flags = NumericSpec {
        dt: common.dt,
        horizon: common.horizon,
        quad_points: common.quad_points,
        rule: common.rule.map(QuadRule::from),
    };
    let input_flags = match input {
        Some(i) => {
            let descriptor = match &i.input_json {
                Some(path) => {
                    let text = std::fs::read_to_string(path).map_err(|e| {
                        Failure::usage(format!("--input-json {}: {e}", path.display()))
                    })?;
                    let value: Value = serde_json::from_str(&text).map_err(|e| {
                        Failure::usage(format!("--input-json {}: {e}", path.display()))
                    })?;
                    Some(value)
                }
                None => None,
            };
            InputSpec {
                kind: i.input.clone(),
                amplitude: i.amplitude,
                omega: i.drive_omega,
                period: i.drive_period,
                descriptor,
            }
        }
        None => InputSpec::default(),
    };
    Ok(MergedSections {
        oscillator: osc_flags.merge_over(file_cfg.oscillator),
        input: input_flags.merge_over(file_cfg.input),
        numeric: numeric_flags.merge_over(file_cfg.numeric),
    })
}

fn resolved_config(
    subcommand: &str,
    osc: &SecondOrderOscillator,
    input: Option<&Waveform>,
    numeric: Option<&ResolvedNumeric>,
) -> RunConfig {
    RunConfig {
        subcommand: Some(subcommand.to_string()),
        oscillator: Some(OscillatorSpec {
            gamma: Some(osc.gamma()),
            omega0: Some(osc.omega0()),
            ..Default::default()
        }),
        input: input.map(|w| InputSpec {
            descriptor: Some(w.to_json()),
            ..Default::default()
        }),
        numeric: numeric.map(|n| NumericSpec {
            dt: Some(n.dt),
            horizon: Some(n.horizon),
            quad_points: Some(n.quadrature.points_per_interval()),
            rule: Some(n.quadrature.rule()),
        }),
    }
}

fn build_kernel(
    flavor: KernelFlavorArg,
    osc: &SecondOrderOscillator,
) -> Result<ImpulseResponse, Failure> {
    match flavor {
        KernelFlavorArg::Normalized => Ok(ImpulseResponse::normalized(osc)),
        KernelFlavorArg::Exact => Ok(ImpulseResponse::exact(osc)),
        KernelFlavorArg::Simplified => {
            ImpulseResponse::simplified(osc).map_err(|e| Failure::usage(format!("--kernel: {e}")))
        }
    }
}

/// Writes every declared output once, in order.
fn write_outputs(files: Vec<(PathBuf, String)>) -> Result<(), Failure> {
    for (path, content) in files {
        std::fs::write(&path, content)
            .map_err(|e| Failure::runtime(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn simulate(args: SimulateArgs) -> Result<(), Failure> {
    let sections = merge_common(&args.common, Some(&args.input))?;
    let osc = sections.oscillator.resolve()?;
    let input = sections.input.resolve(Some(&osc))?;
    let numeric = sections.numeric.resolve(&osc)?;
    let kernel = build_kernel(args.kernel, &osc)?;

    let trace = convolve::zsr(&kernel, &input, numeric.horizon, numeric.dt, &numeric.quadrature)
        .map_err(Failure::runtime)?;

    let mut files: Vec<(PathBuf, String)> = Vec::new();
    files.push((args.out.clone(), trace.to_csv()));

    let mut meta = trace.metadata();
    meta["config"] = serde_json::to_value(resolved_config(
        "simulate",
        &osc,
        Some(&input),
        Some(&numeric),
    ))
    .expect("config serializes");
    let sidecar = args.out.with_extension("csv.meta.json");
    files.push((
        sidecar,
        serde_json::to_string_pretty(&meta).expect("metadata serializes") + "\n",
    ));

    let envelope = if args.envelope.is_some() || args.plot.is_some() {
        let k_default = (numeric.horizon * osc.omega_d() / std::f64::consts::PI).floor() as usize;
        let k_max = args.k_max.unwrap_or(k_default).max(1);
        Some(
            convolve::extreme_samples(&osc, &input, k_max, &numeric.quadrature)
                .map_err(Failure::runtime)?,
        )
    } else {
        None
    };

    if let (Some(path), Some(env)) = (&args.envelope, &envelope) {
        files.push((path.clone(), env.to_csv()));
    }

    if let Some(path) = &args.plot {
        let mut series = vec![PlotSeries::new("f_out", trace.iter_points().collect())];
        if let Some(env) = &envelope {
            series.push(PlotSeries::new(
                "extremes",
                env.entries().iter().map(|e| (e.t_k, e.value)).collect(),
            ));
        }
        let svg = render_plot(&series, "t [s]", "f_out").map_err(Failure::runtime)?;
        files.push((path.clone(), svg));
    }

    write_outputs(files)
}

fn linspace(from: f64, to: f64, points: usize) -> Vec<f64> {
    (0..points)
        .map(|i| from + (to - from) * i as f64 / (points - 1) as f64)
        .collect()
}

fn sweep(args: SweepArgs) -> Result<(), Failure> {
    let sections = merge_common(&args.common, None)?;
    let osc = sections.oscillator.resolve()?;
    let quadrature = sections.numeric.quadrature()?;
    if !(args.from > 0.0) || args.to <= args.from {
        return Err(Failure::usage(format!(
            "--from/--to must satisfy 0 < from < to (got {} and {})",
            args.from, args.to
        )));
    }
    if args.points < 3 {
        return Err(Failure::usage(format!(
            "--points must be at least 3 (got {})",
            args.points
        )));
    }
    let grid = linspace(args.from, args.to, args.points);
    let rlc = sections.oscillator.rlc()?;
    let system = match &rlc {
        Some(p) => SweepSystem::Rlc(p),
        None => SweepSystem::Oscillator(&osc),
    };

    let stem = args.out.display().to_string();
    let mut files: Vec<(PathBuf, String)> = Vec::new();
    let mut halfpower_source = None;

    if args.method == MethodArg::Analytic || args.method == MethodArg::Both {
        let curve = freqresp::resonance_sweep(system, &grid, SweepMethod::Analytic, &quadrature)
            .map_err(Failure::runtime)?;
        files.push((PathBuf::from(format!("{stem}_analytic.csv")), curve.to_csv()));
        halfpower_source = Some(curve);
    }
    if args.method == MethodArg::Timedomain || args.method == MethodArg::Both {
        let curve = freqresp::resonance_sweep(system, &grid, SweepMethod::TimeDomain, &quadrature)
            .map_err(Failure::runtime)?;
        files.push((
            PathBuf::from(format!("{stem}_timedomain.csv")),
            curve.to_csv(),
        ));
        if halfpower_source.is_none() {
            halfpower_source = Some(curve);
        }
    }

    let curve = halfpower_source.expect("at least one method ran");
    let hp = freqresp::half_power(&curve).map_err(Failure::runtime)?;
    files.push((
        PathBuf::from(format!("{stem}_halfpower.json")),
        serde_json::to_string_pretty(&hp.to_json()).expect("summary serializes") + "\n",
    ));
    write_outputs(files)
}

fn optimize(args: OptimizeArgs) -> Result<(), Failure> {
    let sections = merge_common(&args.common, None)?;
    let quadrature = sections.numeric.quadrature()?;

    let (kernel_wave, default_period) = match &args.kernel_json {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::usage(format!("--kernel-json {}: {e}", path.display())))?;
            let w = Waveform::from_json_str(&text)
                .map_err(|e| Failure::usage(format!("--kernel-json {}: {e}", path.display())))?;
            let p = w.oscillation_period();
            (w, p)
        }
        None => {
            let osc = sections.oscillator.resolve()?;
            let kernel = build_kernel(args.kernel, &osc)?;
            let p = kernel.oscillation_period();
            (kernel.as_waveform(), p)
        }
    };
    let period = args
        .kernel_period
        .or(default_period)
        .ok_or_else(|| Failure::usage("--kernel-period required: the kernel has no intrinsic period"))?;

    let gi = genopt::choose_generating_interval(&kernel_wave, period, &quadrature)
        .map_err(Failure::runtime)?;
    let target_norm = match args.target_norm {
        Some(t) => t,
        None => crate::waveform::norm(&kernel_wave, gi.interval, &quadrature),
    };
    let optimal = genopt::optimal_input(&kernel_wave, &gi, target_norm, &quadrature)
        .map_err(Failure::runtime)?;
    let optimal_report =
        genopt::optimality_report(&optimal, &kernel_wave, &gi, args.k_max, &quadrature)
            .map_err(Failure::runtime)?;

    let mut candidate_rows = Vec::new();
    if let Some(path) = &args.candidates {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("--candidates {}: {e}", path.display())))?;
        let values: Vec<Value> = serde_json::from_str(&text)
            .map_err(|e| Failure::usage(format!("--candidates {}: {e}", path.display())))?;
        for (index, v) in values.iter().enumerate() {
            let cand = Waveform::from_json(v)
                .map_err(|e| Failure::usage(format!("--candidates[{index}]: {e}")))?;
            let matched =
                crate::waveform::scale_to_norm(&cand, target_norm, gi.interval, &quadrature)
                    .map_err(Failure::runtime)?;
            let report =
                genopt::optimality_report(&matched, &kernel_wave, &gi, args.k_max, &quadrature)
                    .map_err(Failure::runtime)?;
            candidate_rows.push(json!({
                "index": index,
                "kind": cand.kind_name(),
                "s0": report.s0,
                "gap_ratio": report.gap_ratio,
                "miss_percent": (optimal_report.s0 - report.s0) / optimal_report.s0 * 100.0,
            }));
        }
    }

    let report = json!({
        "kernel": kernel_wave.to_json(),
        "generating_interval": {
            "t_gen": gi.length(),
            "mode": gi.mode,
            "symmetry_defect": gi.symmetry_defect,
        },
        "target_norm": target_norm,
        "bound": optimal_report.bound,
        "optimal": {
            "s0": optimal_report.s0,
            "gap_ratio": optimal_report.gap_ratio,
            "predicted_extremes": optimal_report.predicted_extremes,
            "waveform": optimal.to_json(),
        },
        "candidates": candidate_rows,
    });

    let mut files = vec![(
        args.out.clone(),
        serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
    )];

    if let Some(path) = &args.optimal_csv {
        let full_period = optimal.period().unwrap_or(gi.length());
        let samples = 512usize;
        let mut csv = String::from("t,value\n");
        for i in 0..=samples {
            let t = full_period * i as f64 / samples as f64;
            csv.push_str(&format!("{},{}\n", t, optimal.eval(t)));
        }
        files.push((path.clone(), csv));
    }
    write_outputs(files)
}

fn fourier(args: FourierArgs) -> Result<(), Failure> {
    let sections = merge_common(&args.common, Some(&args.input))?;
    let quadrature = sections.numeric.quadrature()?;
    // a bare `fourier --input square --drive-period T` needs no oscillator;
    // the bank is built from the input's own base frequency
    let osc = sections.oscillator.resolve().ok();
    let mut input_spec = sections.input;
    if input_spec.is_empty() {
        input_spec.kind = Some("square".to_string());
    }
    let input = input_spec.resolve(osc.as_ref())?;
    let harmonics: Vec<usize> = args
        .harmonics
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| Failure::usage(format!("--harmonics: {s:?} is not a positive integer")))
        })
        .collect::<Result<_, _>>()?;
    let rows = fourier_probe::probe_with_calibration(&input, &harmonics, args.bank_q, &quadrature)
        .map_err(Failure::runtime)?;
    write_outputs(vec![(args.out.clone(), fourier_probe::rows_to_csv(&rows))])
}

fn decompose(args: DecomposeArgs) -> Result<(), Failure> {
    let sections = merge_common(&args.common, Some(&args.input))?;
    let quadrature = sections.numeric.quadrature()?;

    if args.laplace {
        let osc = sections.oscillator.resolve()?;
        let input = sections.input.resolve(Some(&osc))?;
        let s_re = args
            .s_re
            .ok_or_else(|| Failure::usage("--s-re is required with --laplace"))?;
        let s = Complex64::new(s_re, args.s_im);
        let formula = sysdecomp::laplace_periodic_output(&osc, &input, s, &quadrature)
            .map_err(Failure::runtime)?;
        let numeric = sysdecomp::truncated_output_transform(&osc, &input, s, &quadrature)
            .map_err(Failure::runtime)?;
        let rel_err = (formula - numeric).norm() / numeric.norm();
        let out = json!({
            "s_re": s.re,
            "s_im": s.im,
            "formula_re": formula.re,
            "formula_im": formula.im,
            "numeric_re": numeric.re,
            "numeric_im": numeric.im,
            "rel_err": rel_err,
        });
        return write_outputs(vec![(
            args.out.clone(),
            serde_json::to_string_pretty(&out).expect("summary serializes") + "\n",
        )]);
    }

    let a = args
        .a
        .ok_or_else(|| Failure::usage("--a is required for the first-order decomposition"))?;
    let problem = sysdecomp::FirstOrderProblem::new(a, args.drive_amplitude, args.y0)
        .map_err(|e| Failure::usage(format!("--a: {e}")))?;
    let horizon = sections.numeric.horizon.unwrap_or(10.0 / a);
    let dt = sections.numeric.dt.unwrap_or(0.01 / a);
    let grid = sysdecomp::TimeGrid::from_horizon(horizon, dt)
        .map_err(|e| Failure::usage(format!("numeric: {e}")))?;
    let solution = sysdecomp::first_order_solve(&problem, grid);
    write_outputs(vec![(args.out.clone(), solution.to_csv())])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_subcommand_is_usage_error() {
        assert_eq!(run(["frobnicate"]), 2);
        assert_eq!(run(["simulate", "--no-such-flag"]), 2);
    }

    #[test]
    fn invalid_quality_is_usage_error() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("t.csv");
        let code = run([
            "simulate",
            "--q",
            "0",
            "--omega0",
            "1",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, 2);
        assert!(!out.exists());
    }

    #[test]
    fn help_exits_zero() {
        assert_eq!(run(["--help"]), 0);
    }
}
