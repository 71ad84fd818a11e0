//! Ratio and gap lower bounds for concave densities.

use std::f64::consts::PI;

use super::{index_pairs, VerificationReport};
use crate::density::{Density, CONCAVITY_TOL};
use crate::error::Result;
use crate::prufer::{Solver, SolverConfig};

pub const RATIO_TOL: f64 = 1e-8;
/// Gap tolerances are this multiple of `(mπ)²`.
pub const GAP_TOL: f64 = 1e-8;
/// Required ratio excess when the density varies by at least [`STRICT_VARIATION`].
pub const STRICT_MARGIN: f64 = 1e-4;
pub const STRICT_VARIATION: f64 = 0.1;

/// `λₙ/λₘ − (n/m)²` for every `n > m` up to `n_max`.
pub fn ratio_margins(lambdas: &[f64]) -> Vec<(usize, usize, f64)> {
    index_pairs(lambdas.len())
        .map(|(n, m)| {
            let q = n as f64 / m as f64;
            (n, m, lambdas[n - 1] / lambdas[m - 1] - q * q)
        })
        .collect()
}

/// `λₙ − λₘ − ((n/m)² − 1)(mπ)²/peak` for every `n > m` up to `n_max`.
pub fn gap_margins(lambdas: &[f64], peak: f64) -> Vec<(usize, usize, f64)> {
    index_pairs(lambdas.len())
        .map(|(n, m)| {
            let q = n as f64 / m as f64;
            let mpi = m as f64 * PI;
            let bound = (q * q - 1.0) * mpi * mpi / peak;
            (n, m, lambdas[n - 1] - lambdas[m - 1] - bound)
        })
        .collect()
}

/// Ratio rows, plus the equality and strictness rows that separate constant
/// from varying densities:
///
/// * `ratio`: margin `λₙ/λₘ − (n/m)²`, tolerance 1e-8, in hypothesis when `d`
///   is concave;
/// * `ratio_equality` (constant `d` only): margin `−|λₙ/λₘ − (n/m)²|`;
/// * `ratio_strict` (concave `d` with relative variation ≥ 0.1): margin
///   `λₙ/λₘ − (n/m)² − 1e-4`, tolerance 0.
pub fn check_ratio_bound(d: &Density, n_max: usize, config: &SolverConfig) -> Result<Vec<VerificationReport>> {
    let lambdas = Solver::new(*config).eigenvalues(d, n_max)?;
    Ok(ratio_rows(d, &lambdas))
}

pub fn ratio_rows(d: &Density, lambdas: &[f64]) -> Vec<VerificationReport> {
    let digest = d.digest();
    let concave = d.is_concave(CONCAVITY_TOL);
    let varies = d.relative_variation() >= STRICT_VARIATION;
    let mut rows = Vec::new();
    for (n, m, margin) in ratio_margins(lambdas) {
        let row = |claim: &str, margin: f64, tol: f64| {
            VerificationReport::new(claim, digest.clone(), margin, tol)
                .with_n(n)
                .with_m(m)
        };
        rows.push(row("ratio", margin, RATIO_TOL).with_hypothesis(concave));
        if d.is_constant() {
            rows.push(row("ratio_equality", -margin.abs(), RATIO_TOL));
        } else if concave && varies {
            rows.push(row("ratio_strict", margin - STRICT_MARGIN, 0.0));
        }
    }
    rows
}

/// Gap rows: `gap` with tolerance `1e-8·(mπ)²`, and `gap_equality` for
/// constant densities where the bound is attained.
pub fn check_gap_bound(d: &Density, n_max: usize, config: &SolverConfig) -> Result<Vec<VerificationReport>> {
    let lambdas = Solver::new(*config).eigenvalues(d, n_max)?;
    Ok(gap_rows(d, &lambdas))
}

pub fn gap_rows(d: &Density, lambdas: &[f64]) -> Vec<VerificationReport> {
    let digest = d.digest();
    let concave = d.is_concave(CONCAVITY_TOL);
    let mut rows = Vec::new();
    for (n, m, margin) in gap_margins(lambdas, d.peak()) {
        let mpi = m as f64 * PI;
        let tol = GAP_TOL * mpi * mpi;
        let row = |claim: &str, margin: f64| {
            VerificationReport::new(claim, digest.clone(), margin, tol)
                .with_n(n)
                .with_m(m)
        };
        rows.push(row("gap", margin).with_hypothesis(concave));
        if d.is_constant() {
            rows.push(row("gap_equality", -margin.abs()));
        }
    }
    rows
}
