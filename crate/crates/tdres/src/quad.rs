//! Composite quadrature over panels split at known discontinuities.
//!
//! Integrands built from the waveform grammar are smooth only between known
//! instants (square-wave switchings, window edges, kernel zero-crossings).
//! The engine splits the integration interval at those instants, picks a node
//! density from the shortest oscillation scale involved, and evaluates panel
//! endpoints nudged one part in 1e12 into the panel so that one-sided values
//! are used at jumps.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors from interval and quadrature-configuration construction.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError {
    #[error("invalid interval: end ({end}) must be greater than start ({start})")]
    InvalidInterval { start: f64, end: f64 },
    #[error("interval bounds must be finite (got start={start}, end={end})")]
    NonFiniteInterval { start: f64, end: f64 },
    #[error("points per interval must be at least 16 (got {0})")]
    TooFewPoints(usize),
    #[error("simpson rule requires an even panel count (got {0})")]
    OddSimpsonPanels(usize),
}

/// A time interval `(start, end)` with `end > start`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawInterval", into = "RawInterval")]
pub struct Interval {
    start: f64,
    end: f64,
}

#[derive(Serialize, Deserialize)]
struct RawInterval {
    start: f64,
    end: f64,
}

impl TryFrom<RawInterval> for Interval {
    type Error = QuadError;
    fn try_from(raw: RawInterval) -> Result<Self, QuadError> {
        Interval::new(raw.start, raw.end)
    }
}

impl From<Interval> for RawInterval {
    fn from(iv: Interval) -> Self {
        RawInterval {
            start: iv.start,
            end: iv.end,
        }
    }
}

impl Interval {
    pub fn new(start: f64, end: f64) -> Result<Self, QuadError> {
        if !start.is_finite() || !end.is_finite() {
            return Err(QuadError::NonFiniteInterval { start, end });
        }
        if end <= start {
            return Err(QuadError::InvalidInterval { start, end });
        }
        Ok(Self { start, end })
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn end(&self) -> f64 {
        self.end
    }

    pub fn length(&self) -> f64 {
        self.end - self.start
    }
}

/// Base quadrature rule applied on each smooth panel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadRule {
    Trapezoid,
    Simpson,
}

/// Node-density configuration: `points_per_interval` sub-intervals are laid
/// over each characteristic oscillation scale of the integrand.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawQuadConfig", into = "RawQuadConfig")]
pub struct QuadratureConfig {
    rule: QuadRule,
    points_per_interval: usize,
}

#[derive(Serialize, Deserialize)]
struct RawQuadConfig {
    rule: QuadRule,
    points_per_interval: usize,
}

impl TryFrom<RawQuadConfig> for QuadratureConfig {
    type Error = QuadError;
    fn try_from(raw: RawQuadConfig) -> Result<Self, QuadError> {
        QuadratureConfig::new(raw.rule, raw.points_per_interval)
    }
}

impl From<QuadratureConfig> for RawQuadConfig {
    fn from(q: QuadratureConfig) -> Self {
        RawQuadConfig {
            rule: q.rule,
            points_per_interval: q.points_per_interval,
        }
    }
}

impl QuadratureConfig {
    pub fn new(rule: QuadRule, points_per_interval: usize) -> Result<Self, QuadError> {
        if points_per_interval < 16 {
            return Err(QuadError::TooFewPoints(points_per_interval));
        }
        if rule == QuadRule::Simpson && points_per_interval % 2 != 0 {
            return Err(QuadError::OddSimpsonPanels(points_per_interval));
        }
        Ok(Self {
            rule,
            points_per_interval,
        })
    }

    /// Composite Simpson with 256 sub-intervals per shortest involved period.
    pub fn simpson_default() -> Self {
        Self {
            rule: QuadRule::Simpson,
            points_per_interval: 256,
        }
    }

    /// Trapezoid at the native grid; suited to sampled data that is already
    /// linear between knots.
    pub fn trapezoid_for_sampled() -> Self {
        Self {
            rule: QuadRule::Trapezoid,
            points_per_interval: 16,
        }
    }

    pub fn rule(&self) -> QuadRule {
        self.rule
    }

    pub fn points_per_interval(&self) -> usize {
        self.points_per_interval
    }
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self::simpson_default()
    }
}

/// Neumaier-compensated accumulator; keeps long node sums at f64 accuracy.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

const EDGE_NUDGE: f64 = 1e-12;

fn panel_subdivisions(len: f64, scale: Option<f64>, q: &QuadratureConfig) -> usize {
    let min_n = match q.rule {
        QuadRule::Trapezoid => 1,
        QuadRule::Simpson => 2,
    };
    let n = match scale {
        Some(p) if p.is_finite() && p > 0.0 => {
            let target = len * q.points_per_interval as f64 / p;
            if target >= 4_000_000.0 {
                4_000_000
            } else {
                target.ceil() as usize
            }
        }
        // Infinite scale: the panel is polynomial between breakpoints; the
        // base rule at minimal order is already exact.
        Some(_) => min_n,
        None => q.points_per_interval,
    };
    let n = n.max(min_n);
    match q.rule {
        QuadRule::Trapezoid => n,
        QuadRule::Simpson => n + n % 2,
    }
}

fn panel_integral(f: &dyn Fn(f64) -> f64, a: f64, b: f64, n: usize, rule: QuadRule) -> f64 {
    let h = (b - a) / n as f64;
    let nudge = (b - a) * EDGE_NUDGE;
    let left = f(a + nudge);
    let right = f(b - nudge);
    let mut acc = CompensatedSum::default();
    match rule {
        QuadRule::Trapezoid => {
            acc.add(0.5 * (left + right));
            for i in 1..n {
                acc.add(f(a + i as f64 * h));
            }
            acc.value() * h
        }
        QuadRule::Simpson => {
            acc.add(left);
            acc.add(right);
            for i in 1..n {
                let w = if i % 2 == 1 { 4.0 } else { 2.0 };
                acc.add(w * f(a + i as f64 * h));
            }
            acc.value() * h / 3.0
        }
    }
}

/// Sorts `breaks`, keeps those strictly inside `iv`, and returns the panel
/// edge sequence including the interval endpoints.
fn panel_edges(iv: Interval, breaks: &mut Vec<f64>) -> Vec<f64> {
    let span = iv.length();
    let tol = span * 1e-12;
    breaks.retain(|&b| b.is_finite() && b > iv.start() + tol && b < iv.end() - tol);
    breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut edges = Vec::with_capacity(breaks.len() + 2);
    edges.push(iv.start());
    for &b in breaks.iter() {
        if b - edges.last().unwrap() > tol {
            edges.push(b);
        }
    }
    edges.push(iv.end());
    edges
}

/// Integrates `f` over `iv`, splitting at `breaks` and choosing node density
/// from `scale` (the shortest oscillation period involved; `None` means
/// unknown and falls back to the configured density per panel).
pub(crate) fn integrate(
    f: &dyn Fn(f64) -> f64,
    iv: Interval,
    mut breaks: Vec<f64>,
    scale: Option<f64>,
    q: &QuadratureConfig,
) -> f64 {
    let edges = panel_edges(iv, &mut breaks);
    let mut total = CompensatedSum::default();
    for pair in edges.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let n = panel_subdivisions(b - a, scale, q);
        total.add(panel_integral(f, a, b, n, q.rule()));
    }
    total.value()
}

/// Integrates `f*g`, `f*f` and `g*g` over `iv` on one shared node set, so the
/// discrete Cauchy-Schwarz inequality holds exactly for the returned triple.
pub(crate) fn integrate_pair(
    f: &dyn Fn(f64) -> f64,
    g: &dyn Fn(f64) -> f64,
    iv: Interval,
    mut breaks: Vec<f64>,
    scale: Option<f64>,
    q: &QuadratureConfig,
) -> PairIntegrals {
    let edges = panel_edges(iv, &mut breaks);
    let mut ff = CompensatedSum::default();
    let mut fg = CompensatedSum::default();
    let mut gg = CompensatedSum::default();
    for pair in edges.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let n = panel_subdivisions(b - a, scale, q);
        let h = (b - a) / n as f64;
        let nudge = (b - a) * EDGE_NUDGE;
        let factor = match q.rule() {
            QuadRule::Trapezoid => h,
            QuadRule::Simpson => h / 3.0,
        };
        let mut pff = CompensatedSum::default();
        let mut pfg = CompensatedSum::default();
        let mut pgg = CompensatedSum::default();
        for i in 0..=n {
            let x = match i {
                0 => a + nudge,
                i if i == n => b - nudge,
                _ => a + i as f64 * h,
            };
            let w = match q.rule() {
                QuadRule::Trapezoid => {
                    if i == 0 || i == n {
                        0.5
                    } else {
                        1.0
                    }
                }
                QuadRule::Simpson => {
                    if i == 0 || i == n {
                        1.0
                    } else if i % 2 == 1 {
                        4.0
                    } else {
                        2.0
                    }
                }
            };
            let (fv, gv) = (f(x), g(x));
            pff.add(w * fv * fv);
            pfg.add(w * fv * gv);
            pgg.add(w * gv * gv);
        }
        ff.add(pff.value() * factor);
        fg.add(pfg.value() * factor);
        gg.add(pgg.value() * factor);
    }
    PairIntegrals {
        ff: ff.value(),
        fg: fg.value(),
        gg: gg.value(),
    }
}

/// The three second-moment integrals of a pair of functions on one interval.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PairIntegrals {
    pub ff: f64,
    pub fg: f64,
    pub gg: f64,
}
