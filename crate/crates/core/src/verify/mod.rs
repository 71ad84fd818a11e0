//! Numerical checks of the eigenvalue ratio and gap bounds for concave
//! strings, the perturbation formulas used to prove them, and the
//! oscillation facts they rest on.
//!
//! Every check produces [`VerificationReport`] rows. A row records a margin
//! (left side minus right side of the claimed inequality, or the negated
//! discrepancy for agreement checks), the tolerance it is judged against and
//! whether the inputs satisfy the hypothesis of the claim.

pub mod bounds;
pub mod corpus;
pub mod crossing;
pub mod homotopy;
pub mod identity;
pub mod keller;
pub mod report;
pub mod sl;
pub mod structure;
pub mod suite;

pub use bounds::{check_gap_bound, check_ratio_bound};
pub use crossing::{crossing_analysis, interlacing_check, CrossingAnalysis};
pub use homotopy::{homotopy_monotonicity, slope_family_sweep, HomotopySweep};
pub use identity::{huang_identity_residual, TestFunction};
pub use keller::{keller_derivative, ratio_derivative, Derivative};
pub use report::{sort_reports, write_reports, Format, VerificationReport};
pub use suite::{Claim, Suite};

use crate::oracle::DEFAULT_MESHES;
use crate::prufer::SolverConfig;

/// Default number of τ points in homotopy sweeps.
pub const DEFAULT_TAU_STEPS: usize = 21;

/// Settings shared by all checks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerifyConfig {
    pub solver: SolverConfig,
    pub n_max: usize,
    pub tau_steps: usize,
    pub meshes: (usize, usize),
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            solver: SolverConfig::default(),
            n_max: 8,
            tau_steps: DEFAULT_TAU_STEPS,
            meshes: DEFAULT_MESHES,
            seed: corpus::DEFAULT_SEED,
        }
    }
}

/// Relative discrepancy `|a - b| / scale`, zero when both vanish.
pub(crate) fn relative_gap(a: f64, b: f64, scale: f64) -> f64 {
    let diff = (a - b).abs();
    if diff == 0.0 {
        0.0
    } else {
        diff / scale
    }
}

/// Ordered index pairs `(n, m)` with `n_max >= n > m >= 1`.
pub(crate) fn index_pairs(n_max: usize) -> impl Iterator<Item = (usize, usize)> {
    (2..=n_max).flat_map(|n| (1..n).map(move |m| (n, m)))
}

/// `∫₀¹ f(x, y(x), y'(x)) dx` for an eigenpair, by composite Simpson on each
/// smooth piece of `[0, 1]` between `breakpoints`, evaluating the
/// eigenfunction by Hermite interpolation. The integrand receives points
/// nudged inside the open piece, so one-sided limits are used at kinks.
pub(crate) fn integrate_pair<F>(
    pair: &crate::prufer::Eigenpair,
    breakpoints: &[f64],
    f: F,
) -> crate::quadrature::Estimate
where
    F: Fn(f64, f64, f64) -> f64,
{
    integrate_pair_at(pair, breakpoints, pair.grid.len() - 1, f)
}

/// As [`integrate_pair`] with about `per_unit` Simpson intervals per unit
/// length.
pub(crate) fn integrate_pair_at<F>(
    pair: &crate::prufer::Eigenpair,
    breakpoints: &[f64],
    per_unit: usize,
    f: F,
) -> crate::quadrature::Estimate
where
    F: Fn(f64, f64, f64) -> f64,
{
    integrate_pair_on(pair, (0.0, 1.0), breakpoints, per_unit, f)
}

/// As [`integrate_pair_at`] restricted to `[lo, hi]`.
pub(crate) fn integrate_pair_on<F>(
    pair: &crate::prufer::Eigenpair,
    (lo, hi): (f64, f64),
    breakpoints: &[f64],
    per_unit: usize,
    f: F,
) -> crate::quadrature::Estimate
where
    F: Fn(f64, f64, f64) -> f64,
{
    let mut cuts = vec![lo];
    cuts.extend(breakpoints.iter().copied().filter(|b| *b > lo && *b < hi));
    cuts.push(hi);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut total = crate::quadrature::Estimate { value: 0.0, error: 0.0 };
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let nudge = 1e-12 * (b - a);
        let intervals = ((b - a) * per_unit as f64).ceil().max(8.0) as usize;
        let piece = crate::quadrature::simpson_fn(
            |x| {
                let (y, dy) = pair.eval(x);
                f(x.clamp(a + nudge, b - nudge), y, dy)
            },
            a,
            b,
            intervals,
        );
        total.value += piece.value;
        total.error += piece.error;
    }
    total
}
