//! Bounds for `−(p y')' = λ ρ y` through the reduction to a string.

use std::f64::consts::PI;

use super::bounds::{ratio_margins, GAP_TOL, RATIO_TOL};
use super::{index_pairs, VerificationReport};
use crate::density::{Density, CONCAVITY_TOL};
use crate::error::Result;
use crate::oracle::flux_reference_eigenvalues;
use crate::prufer::SolverConfig;
use crate::transform::{legendre_map, sl_eigenvalues, DEFAULT_TABLE_SIZE};

pub const CONSISTENCY_TOL: f64 = 1e-5;

/// Rows for one coefficient pair, keyed by the digest of `pρ`:
///
/// * `sl_consistency`: transformed eigenvalue vs the flux-form oracle;
/// * `sl_ratio`: `λₙ/λₘ − (n/m)²`, in hypothesis when `pρ` is concave in x;
/// * `sl_gap`: `λₙ − λₘ − ((n/m)² − 1)(mπ)²/(pρ)_M`;
/// * `sl_gap_sigma`: the same with the bound divided by `σ²`, which is what
///   the reduction to a string with density `σ²p̃ρ̃` yields.
pub fn sl_rows(
    p: &Density,
    rho: &Density,
    n_max: usize,
    config: &SolverConfig,
    meshes: (usize, usize),
) -> Result<Vec<VerificationReport>> {
    let product = Density::product(vec![p.clone(), rho.clone()])?;
    let digest = product.digest();
    let concave = product.is_concave(CONCAVITY_TOL);
    let sigma = legendre_map(p, rho, DEFAULT_TABLE_SIZE)?.sigma();
    let lambdas = sl_eigenvalues(p, rho, n_max, *config)?;
    let refs = flux_reference_eigenvalues(p, rho, n_max, meshes)?;

    let mut rows = Vec::new();
    for (i, (l, r)) in lambdas.iter().zip(&refs).enumerate() {
        rows.push(
            VerificationReport::new(
                "sl_consistency",
                digest.clone(),
                -((l - r.value) / r.value).abs(),
                CONSISTENCY_TOL,
            )
            .with_n(i + 1),
        );
    }
    for (n, m, margin) in ratio_margins(&lambdas) {
        rows.push(
            VerificationReport::new("sl_ratio", digest.clone(), margin, RATIO_TOL)
                .with_n(n)
                .with_m(m)
                .with_hypothesis(concave),
        );
    }
    let peak = product.peak();
    for (n, m) in index_pairs(n_max) {
        let q = n as f64 / m as f64;
        let mpi = m as f64 * PI;
        let bound = (q * q - 1.0) * mpi * mpi / peak;
        let gap = lambdas[n - 1] - lambdas[m - 1];
        let tol = GAP_TOL * mpi * mpi;
        for (claim, b) in [("sl_gap", bound), ("sl_gap_sigma", bound / (sigma * sigma))] {
            rows.push(
                VerificationReport::new(claim, digest.clone(), gap - b, tol)
                    .with_n(n)
                    .with_m(m)
                    .with_hypothesis(concave),
            );
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(p: Density, rho: Density) -> Vec<VerificationReport> {
        sl_rows(&p, &rho, 3, &SolverConfig::default(), (400, 800)).unwrap()
    }

    #[test]
    fn unit_pair_attains_the_bounds() {
        let one = Density::constant(1.0).unwrap();
        let r = rows(one.clone(), one);
        assert!(r.iter().all(|r| r.pass && r.in_hypothesis), "{r:#?}");
        let gap = r.iter().find(|r| r.claim == "sl_gap" && r.n == Some(2)).unwrap();
        assert!(gap.margin.abs() < 1e-7);
    }

    #[test]
    fn soft_constant_stiffness_breaks_the_unscaled_gap() {
        let r = rows(Density::constant(0.5).unwrap(), Density::constant(1.0).unwrap());
        let plain = r
            .iter()
            .find(|r| r.claim == "sl_gap" && r.n == Some(2) && r.m == Some(1))
            .unwrap();
        // λ₂ − λ₁ = 1.5π² while the unscaled bound is 6π².
        assert!((plain.margin + 4.5 * PI * PI).abs() < 1e-6, "{plain:?}");
        assert!(plain.is_violation());
        assert!(r.iter().filter(|r| r.claim == "sl_gap_sigma").all(|r| r.pass));
    }
}
