//! # tdres
//!
//! A time-domain resonance toolkit. The core engine evaluates zero-state
//! responses of damped oscillators by direct numerical convolution and builds
//! everything else on top of it:
//!
//! - [`waveform`]: the time-function grammar and the interval-restricted
//!   function space (norms, inner products, scaling, periodic extension,
//!   time reversal);
//! - [`oscillator`]: RLC parameter mapping, second- and first-order impulse
//!   responses, and the cut simplified response;
//! - [`convolve`]: response traces, extreme-sample envelopes, growth fits,
//!   saturation levels, periodic tails and beat periods;
//! - [`freqresp`]: phasor amplitudes, resonance sweeps, half-power
//!   bandwidth, transient duration;
//! - [`genopt`]: norm-constrained synthesis of the optimal periodic drive
//!   (the time-reversed kernel) with Cauchy-Schwarz certification;
//! - [`fourier_probe`]: resonator-bank harmonic discovery without any
//!   transform;
//! - [`sysdecomp`]: ZIR/ZSR decomposition, closed-form oracles, Newton
//!   integration, asymptotic tails and pointwise Laplace checks;
//! - [`cli`]: the `tdres` command-line frontend and the SVG/CSV emitters.
//!
//! Runnable walkthroughs of each capability live in `examples/`.

pub mod cli;
pub mod convolve;
pub mod fourier_probe;
pub mod freqresp;
pub mod genopt;
pub mod oscillator;
mod quad;
pub mod sysdecomp;
pub mod waveform;

pub use oscillator::{ImpulseResponse, RlcParams, SecondOrderOscillator};
pub use waveform::{Interval, QuadRule, QuadratureConfig, TimeFunction, Waveform};
