//! Structural properties every computed spectrum must have.

use super::{integrate_pair_at, VerificationReport};
use crate::density::Density;
use crate::error::Result;
use crate::oracle::reference_eigenvalues;
use crate::prufer::{Solver, SolverConfig, Spectrum};

pub const NORMALIZATION_TOL: f64 = 1e-8;
pub const ORACLE_TOL: f64 = 1e-6;
pub const SCALING_FACTORS: [f64; 3] = [0.5, 2.0, 10.0];

/// `zero_count`: `n − 1` interior zeros for every eigenfunction.
pub fn zero_count_rows(s: &Spectrum) -> Vec<VerificationReport> {
    let digest = s.density.digest();
    s.pairs
        .iter()
        .map(|p| {
            let miss = (p.zeros.len() as f64 - (p.index as f64 - 1.0)).abs();
            VerificationReport::new("zero_count", digest.clone(), -miss, 0.0).with_n(p.index)
        })
        .collect()
}

/// `normalization`: `|∫ρy² − 1|`, recomputed by Simpson on a grid three
/// times finer than the solver grid using the interpolated eigenfunction.
pub fn normalization_rows(s: &Spectrum) -> Vec<VerificationReport> {
    let d = &s.density;
    let digest = d.digest();
    let kinks = d.breakpoints();
    s.pairs
        .iter()
        .map(|p| {
            let per_unit = 3 * (p.grid.len() - 1);
            let mass = integrate_pair_at(p, &kinks, per_unit, |x, y, _| d.value(x) * y * y);
            VerificationReport::new(
                "normalization",
                digest.clone(),
                -(mass.value - 1.0).abs(),
                mass.tolerance(NORMALIZATION_TOL),
            )
            .with_n(p.index)
        })
        .collect()
}

/// `wronskian`: `w = uₙ' u_{n−1} − u_{n−1}' uₙ` on the interior grid nodes;
/// the margin is `−max w`, so a pass means `w ≤ 0` throughout.
pub fn wronskian_rows(s: &Spectrum) -> Vec<VerificationReport> {
    let digest = s.density.digest();
    s.pairs
        .windows(2)
        .map(|w| {
            let (prev, cur) = (&w[0], &w[1]);
            let last = cur.grid.len() - 1;
            let peak = (1..last)
                .map(|j| cur.dy[j] * prev.y[j] - prev.dy[j] * cur.y[j])
                .fold(f64::NEG_INFINITY, f64::max);
            VerificationReport::new("wronskian", digest.clone(), -peak, 0.0)
                .with_n(cur.index)
                .with_m(prev.index)
        })
        .collect()
}

/// `scaling`: `c·λₙ(cρ)/λₙ(ρ) = 1` within `2·rel_tol`, with the factor in
/// the τ column.
pub fn scaling_rows(d: &Density, lambdas: &[f64], config: &SolverConfig) -> Result<Vec<VerificationReport>> {
    let solver = Solver::new(*config);
    let digest = d.digest();
    let mut rows = Vec::new();
    for c in SCALING_FACTORS {
        let scaled = solver.eigenvalues(&d.scaled(c)?, lambdas.len())?;
        for (n, (l, ls)) in lambdas.iter().zip(&scaled).enumerate() {
            rows.push(
                VerificationReport::new(
                    "scaling",
                    digest.clone(),
                    -(c * ls / l - 1.0).abs(),
                    2.0 * config.rel_tol,
                )
                .with_n(n + 1)
                .with_tau(c),
            );
        }
    }
    Ok(rows)
}

/// `reflection`: `λₙ(ρ(1 − ·)) = λₙ(ρ)` within `2·rel_tol`.
pub fn reflection_rows(d: &Density, lambdas: &[f64], config: &SolverConfig) -> Result<Vec<VerificationReport>> {
    let reflected = Solver::new(*config).eigenvalues(&d.reflected(), lambdas.len())?;
    let digest = d.digest();
    Ok(lambdas
        .iter()
        .zip(&reflected)
        .enumerate()
        .map(|(i, (l, lr))| {
            VerificationReport::new(
                "reflection",
                digest.clone(),
                -(lr / l - 1.0).abs(),
                2.0 * config.rel_tol,
            )
            .with_n(i + 1)
        })
        .collect())
}

/// `oracle_agreement`: relative distance to the Richardson-extrapolated
/// finite-difference eigenvalue, within `max(1e-6, bound/λ)`.
pub fn oracle_rows(d: &Density, lambdas: &[f64], meshes: (usize, usize)) -> Result<Vec<VerificationReport>> {
    let refs = reference_eigenvalues(d, lambdas.len(), meshes)?;
    let digest = d.digest();
    Ok(lambdas
        .iter()
        .zip(&refs)
        .enumerate()
        .map(|(i, (l, r))| {
            let tol = ORACLE_TOL.max(r.bound(meshes.1) / r.value);
            VerificationReport::new(
                "oracle_agreement",
                digest.clone(),
                -((l - r.value) / r.value).abs(),
                tol,
            )
            .with_n(i + 1)
        })
        .collect())
}

/// All structural rows for a spectrum.
pub fn structure_rows(s: &Spectrum, config: &SolverConfig, meshes: (usize, usize)) -> Result<Vec<VerificationReport>> {
    let lambdas = s.lambdas();
    let mut rows = zero_count_rows(s);
    rows.extend(normalization_rows(s));
    rows.extend(wronskian_rows(s));
    rows.push(super::crossing::interlacing_check(s));
    rows.extend(scaling_rows(&s.density, &lambdas, config)?);
    rows.extend(reflection_rows(&s.density, &lambdas, config)?);
    rows.extend(oracle_rows(&s.density, &lambdas, meshes)?);
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_string_is_structurally_sound() {
        let d = Density::constant(1.0).unwrap();
        let s = Solver::default().spectrum(&d, 4).unwrap();
        let rows = structure_rows(&s, &SolverConfig::default(), (400, 800)).unwrap();
        assert!(rows.iter().all(|r| r.pass), "{rows:#?}");
        let claims: std::collections::BTreeSet<_> = rows.iter().map(|r| r.claim.as_str()).collect();
        assert_eq!(claims.len(), 7);
    }

    #[test]
    fn piecewise_density_is_structurally_sound() {
        let d = Density::piecewise_linear(vec![0.0, 0.375, 0.625, 1.0], vec![1.0, 1.0, 2.0, 2.0]).unwrap();
        let s = Solver::default().spectrum(&d, 5).unwrap();
        let rows = structure_rows(&s, &SolverConfig::default(), (1000, 2000)).unwrap();
        assert!(rows.iter().all(|r| r.pass), "{rows:#?}");
    }

    #[test]
    fn wronskian_is_negative_inside() {
        let d = Density::linear(2.0, 1.0).unwrap();
        let s = Solver::default().spectrum(&d, 3).unwrap();
        for r in wronskian_rows(&s) {
            assert!(r.margin > 0.0, "{r:?}");
        }
    }
}
