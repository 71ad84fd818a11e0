//! Where consecutive squared eigenfunctions cross, and how their zeros
//! interlace.

use super::VerificationReport;
use crate::density::{Density, DensityKind};
use crate::error::{domain, Result};
use crate::prufer::{Eigenpair, Solver, SolverConfig, Spectrum};
use crate::quadrature::simpson_fn;

/// Sample points per interval when scanning for crossings.
const SCAN_POINTS: usize = 512;
const CROSSING_TOL: f64 = 1e-14;
pub const MOMENT_TOL: f64 = 1e-8;

/// One nodal interval `[a, b]` of `y_{n−1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct NodalInterval {
    pub start: f64,
    pub end: f64,
    /// Zeros of `yₙ` inside the interval (one when the zeros interlace).
    pub inner_zeros: Vec<f64>,
    /// Points where `y²ₙ = y²_{n−1}`.
    pub crossings: Vec<f64>,
    /// `∫ₐᵇ x (y²_{n−1} − y²ₙ) dx`.
    pub moment: f64,
    pub moment_error: f64,
}

/// Crossing structure of `y²_{n−1}` and `y²ₙ`.
#[derive(Clone, Debug, PartialEq)]
pub struct CrossingAnalysis {
    pub n: usize,
    pub intervals: Vec<NodalInterval>,
    /// Sum of the per-interval moments.
    pub total: f64,
    pub total_error: f64,
    /// Every departure from the expected pattern, in words.
    pub anomalies: Vec<String>,
}

impl CrossingAnalysis {
    pub fn crossings(&self) -> Vec<f64> {
        self.intervals
            .iter()
            .flat_map(|i| i.crossings.iter().copied())
            .collect()
    }

    pub fn sign_pattern_holds(&self) -> bool {
        self.anomalies.is_empty()
    }
}

fn gap_sq(prev: &Eigenpair, cur: &Eigenpair, x: f64) -> f64 {
    let (a, _) = prev.eval(x);
    let (b, _) = cur.eval(x);
    a * a - b * b
}

/// Squared-slope difference at an endpoint, where both functions vanish.
fn slope_gap_sq(prev: &Eigenpair, cur: &Eigenpair, at_end: bool) -> f64 {
    let i = if at_end { prev.dy.len() - 1 } else { 0 };
    prev.dy[i].powi(2) - cur.dy[i].powi(2)
}

pub fn crossing_analysis(d: &Density, n: usize, config: &SolverConfig) -> Result<CrossingAnalysis> {
    if n < 2 {
        return domain(format!("crossing analysis needs n >= 2, got {n}"));
    }
    let solver = Solver::new(*config);
    let prev = solver.eigenpair(d, n - 1)?;
    let cur = solver.eigenpair(d, n)?;
    Ok(analyse(&prev, &cur))
}

/// Crossing analysis from two consecutive eigenpairs of the same density.
pub fn analyse(prev: &Eigenpair, cur: &Eigenpair) -> CrossingAnalysis {
    let n = cur.index;
    let mut bounds = vec![0.0];
    bounds.extend(&prev.zeros);
    bounds.push(1.0);
    let cells = cur.grid.len() - 1;
    let d = |x: f64| gap_sq(prev, cur, x);

    let mut anomalies = Vec::new();
    let mut intervals = Vec::with_capacity(bounds.len() - 1);
    for w in bounds.windows(2) {
        let (a, b) = (w[0], w[1]);
        let inner_zeros: Vec<f64> = cur.zeros.iter().copied().filter(|z| *z > a && *z < b).collect();
        if inner_zeros.len() != 1 {
            anomalies.push(format!("[{a}, {b}] holds {} zeros of y{n}", inner_zeros.len()));
        }

        // Near the ends of the interval y²ₙ must dominate.
        let edge = |x: f64, at_end: bool| {
            if x == 0.0 || x == 1.0 {
                slope_gap_sq(prev, cur, at_end)
            } else {
                d(x)
            }
        };
        for (x, at_end) in [(a, false), (b, true)] {
            if !(edge(x, at_end) < 0.0) {
                anomalies.push(format!("y{n}² does not dominate at {x}"));
            }
        }
        for &z in &inner_zeros {
            if !(d(z) > 0.0) {
                anomalies.push(format!("y{}² does not dominate at {z}", n - 1));
            }
        }

        let mut xs: Vec<f64> = (1..SCAN_POINTS)
            .map(|k| a + (b - a) * k as f64 / SCAN_POINTS as f64)
            .collect();
        xs.extend(&inner_zeros);
        xs.sort_by(f64::total_cmp);
        let mut samples: Vec<(f64, f64)> = vec![(a, -1.0)];
        samples.extend(xs.iter().map(|&x| (x, d(x))));
        samples.push((b, -1.0));
        let mut crossings = Vec::new();
        for s in samples.windows(2) {
            if (s[0].1 < 0.0) != (s[1].1 < 0.0) {
                crossings.push(bisect(&d, s[0].0, s[1].0));
            }
        }
        if crossings.len() != 2 {
            anomalies.push(format!("[{a}, {b}] has {} crossings", crossings.len()));
        } else if let [z] = inner_zeros[..] {
            if !(crossings[0] < z && z < crossings[1]) {
                anomalies.push(format!("crossings {crossings:?} do not straddle {z}"));
            }
        }

        let moment = simpson_fn(
            |x| x * d(x),
            a,
            b,
            ((b - a) * 2.0 * cells as f64).ceil().max(64.0) as usize,
        );
        intervals.push(NodalInterval {
            start: a,
            end: b,
            inner_zeros,
            crossings,
            moment: moment.value,
            moment_error: moment.error,
        });
    }
    CrossingAnalysis {
        n,
        total: intervals.iter().map(|i| i.moment).sum(),
        total_error: intervals.iter().map(|i| i.moment_error).sum(),
        intervals,
        anomalies,
    }
}

fn bisect<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64) -> f64 {
    let negative_at_a = f(a) < 0.0;
    while b - a > CROSSING_TOL {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if (f(m) < 0.0) == negative_at_a {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// `crossing_pattern` (anomaly count, must be zero) and `crossing_total`
/// (`⟨x⟩ ≥ 0`, asserted only for constant and non-decreasing linear
/// densities, the members of the family `τx + b` with `τ ≥ 0`).
pub fn crossing_rows(d: &Density, a: &CrossingAnalysis) -> Vec<VerificationReport> {
    let digest = d.digest();
    let linear = matches!(d.kind(), DensityKind::Constant | DensityKind::Linear) && d.value(1.0) >= d.value(0.0);
    vec![
        VerificationReport::new("crossing_pattern", digest.clone(), -(a.anomalies.len() as f64), 0.0).with_n(a.n),
        VerificationReport::new("crossing_total", digest, a.total, MOMENT_TOL.max(2.0 * a.total_error))
            .with_n(a.n)
            .with_hypothesis(linear),
    ]
}

/// Smallest distance between a zero of `u_{k+1}` and the nearest zero (or
/// endpoint) of `u_k` bounding its nodal interval, over all consecutive
/// pairs; negative or missing zeros give a negative margin. The ordering
/// `yᵢ < zᵢ` of the i-th zeros is part of the same condition.
pub fn interlacing_margin(s: &Spectrum) -> f64 {
    let mut margin = f64::INFINITY;
    for w in s.pairs.windows(2) {
        let mut bounds = vec![0.0];
        bounds.extend(&w[0].zeros);
        bounds.push(1.0);
        let inner = &w[1].zeros;
        if inner.len() != bounds.len() - 1 {
            return -1.0;
        }
        for (i, &y) in inner.iter().enumerate() {
            margin = margin.min(y - bounds[i]).min(bounds[i + 1] - y);
        }
    }
    if margin.is_finite() {
        margin
    } else {
        0.0
    }
}

pub fn interlacing_check(s: &Spectrum) -> VerificationReport {
    VerificationReport::new("interlacing", s.density.digest(), interlacing_margin(s), 0.0).with_n(s.pairs.len())
}
