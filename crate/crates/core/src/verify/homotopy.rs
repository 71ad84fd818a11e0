//! Ratio sweeps along density homotopies.

use super::{integrate_pair_on, VerificationReport};
use crate::density::{Density, HomotopyFamily, CONCAVITY_TOL};
use crate::error::{domain, Result};
use crate::exec;
use crate::prufer::{Solver, SolverConfig};

pub const MONOTONE_TOL: f64 = 1e-9;
/// Successive ratio differences must exceed this multiple of the solver
/// tolerance (relative to the ratio).
pub const STRICT_FACTOR: f64 = 10.0;
/// Parameter grid of the linear-family sweep: `0, 0.2, …, 2`.
pub fn slope_taus() -> Vec<f64> {
    (0..=10).map(|k| k as f64 / 5.0).collect()
}

/// Ratio `λₙ/λ_{n−1}` along `ρ(·, τ) = τρ + (1 − τ)ρ̂`, where ρ̂ interpolates
/// ρ linearly between the zeros of its own (n−1)-th eigenfunction.
#[derive(Clone, Debug)]
pub struct HomotopySweep {
    pub n: usize,
    pub rho: Density,
    pub hat: Density,
    pub taus: Vec<f64>,
    pub ratios: Vec<f64>,
    /// For each τ, `∫_{zᵢ}^{zᵢ₊₁} (ρ − ρ̂)(y²_{n−1} − y²ₙ) dx` on every nodal
    /// interval of ρ̂. Recorded, not asserted.
    pub interval_integrals: Vec<Vec<f64>>,
}

impl HomotopySweep {
    /// Smallest successive ratio difference (positive when increasing).
    pub fn min_step(&self) -> f64 {
        self.ratios
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }

    /// `homotopy_monotone`, `hat_ratio` and per-τ `homotopy_interval_min` rows.
    pub fn rows(&self) -> Vec<VerificationReport> {
        let digest = self.rho.digest();
        let concave = self.rho.is_concave(CONCAVITY_TOL);
        let (n, m) = (self.n, self.n - 1);
        let q = n as f64 / m as f64;
        let step = if self.ratios.len() > 1 { self.min_step() } else { 0.0 };
        let mut rows = vec![
            VerificationReport::new("homotopy_monotone", digest.clone(), step, MONOTONE_TOL)
                .with_n(n)
                .with_m(m)
                .with_hypothesis(concave),
            VerificationReport::new(
                "hat_ratio",
                digest.clone(),
                self.ratios[0] - q * q,
                super::bounds::RATIO_TOL,
            )
            .with_n(n)
            .with_m(m)
            .with_tau(self.taus[0])
            .with_hypothesis(concave),
        ];
        for (tau, pieces) in self.taus.iter().zip(&self.interval_integrals) {
            let least = pieces.iter().copied().fold(f64::INFINITY, f64::min);
            rows.push(
                VerificationReport::new("homotopy_interval_min", digest.clone(), least, 0.0)
                    .with_n(n)
                    .with_m(m)
                    .with_tau(*tau)
                    .with_hypothesis(false),
            );
        }
        rows
    }
}

pub fn homotopy_monotonicity(rho: &Density, n: usize, steps: usize, config: &SolverConfig) -> Result<HomotopySweep> {
    if n < 2 {
        return domain(format!("homotopy sweep needs n >= 2, got {n}"));
    }
    if steps < 2 {
        return domain(format!("homotopy sweep needs at least 2 τ points, got {steps}"));
    }
    let solver = Solver::new(*config);
    let nodes = solver.eigenpair(rho, n - 1)?.zeros;
    let hat = rho.hat_interpolant(&nodes)?;
    let family = HomotopyFamily::affine(hat.clone(), rho.clone());
    let mut bounds = vec![0.0];
    bounds.extend(&nodes);
    bounds.push(1.0);

    let taus: Vec<f64> = (0..steps).map(|k| k as f64 / (steps - 1) as f64).collect();
    let points = exec::try_map(&taus, |&tau| -> Result<(f64, Vec<f64>)> {
        let d = family.blend(tau)?;
        let prev = solver.eigenpair(&d, n - 1)?;
        let cur = solver.eigenpair(&d, n)?;
        let kinks = d.breakpoints();
        let per_unit = cur.grid.len() - 1;
        let pieces = bounds
            .windows(2)
            .map(|w| {
                integrate_pair_on(&cur, (w[0], w[1]), &kinks, per_unit, |x, y, _| {
                    let (p, _) = prev.eval(x);
                    family.partial_tau(x) * (p * p - y * y)
                })
                .value
            })
            .collect();
        Ok((cur.lambda / prev.lambda, pieces))
    })?;
    let (ratios, interval_integrals) = points.into_iter().unzip();
    Ok(HomotopySweep {
        n,
        rho: rho.clone(),
        hat,
        taus,
        ratios,
        interval_integrals,
    })
}

/// `λₙ(τ)/λ_{n−1}(τ)` for `ρ = τx + b` at each τ.
pub fn slope_family_sweep(b: f64, n: usize, taus: &[f64], config: &SolverConfig) -> Result<Vec<f64>> {
    if n < 2 {
        return domain(format!("slope sweep needs n >= 2, got {n}"));
    }
    let family = HomotopyFamily::slope(b)?;
    let solver = Solver::new(*config);
    exec::try_map(taus, |&tau| {
        let d = family.blend(tau)?;
        Ok(solver.eigenvalue(&d, n)? / solver.eigenvalue(&d, n - 1)?)
    })
}

/// `slope_ratio_increasing` rows: each successive difference minus
/// `10 · rel_tol · ratio`, required to be positive.
pub fn slope_rows(b: f64, n: usize, taus: &[f64], config: &SolverConfig) -> Result<Vec<VerificationReport>> {
    let ratios = slope_family_sweep(b, n, taus, config)?;
    let family = HomotopyFamily::slope(b)?;
    let mut rows = Vec::new();
    for (k, w) in ratios.windows(2).enumerate() {
        let threshold = STRICT_FACTOR * config.rel_tol * w[1];
        let digest = family.blend(taus[k + 1])?.digest();
        rows.push(
            VerificationReport::new("slope_ratio_increasing", digest, w[1] - w[0] - threshold, 0.0)
                .with_n(n)
                .with_m(n - 1)
                .with_tau(taus[k + 1]),
        );
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> SolverConfig {
        SolverConfig::default()
    }

    #[test]
    fn constant_density_sweep_is_flat() {
        let rho = Density::constant(1.5).unwrap();
        let s = homotopy_monotonicity(&rho, 2, 5, &cfg()).unwrap();
        for r in &s.ratios {
            assert!((r - 4.0).abs() < 1e-8);
        }
        assert!(s.rows().iter().filter(|r| r.in_hypothesis).all(|r| r.pass));
    }

    #[test]
    fn bump_sweep_is_nondecreasing() {
        let rho = Density::quadratic(-4.0, 4.0, 1.0).unwrap();
        let s = homotopy_monotonicity(&rho, 2, 6, &cfg()).unwrap();
        assert!(s.min_step() >= -MONOTONE_TOL, "{:?}", s.ratios);
        assert!(s.ratios[s.ratios.len() - 1] >= 4.0);
        assert_eq!(s.interval_integrals[0].len(), 1);
    }

    #[test]
    fn slope_family_ratio_increases() {
        let taus = slope_taus();
        assert_eq!(taus.len(), 11);
        let rows = slope_rows(1.0, 2, &taus, &cfg()).unwrap();
        assert_eq!(rows.len(), 10);
        assert!(rows.iter().all(|r| r.pass), "{rows:#?}");
    }

    #[test]
    fn rejects_first_mode() {
        let rho = Density::constant(1.0).unwrap();
        assert!(homotopy_monotonicity(&rho, 1, 5, &cfg()).is_err());
        assert!(slope_family_sweep(1.0, 1, &[0.0], &cfg()).is_err());
    }
}
