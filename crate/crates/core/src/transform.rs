//! Reduction of `-(p y')' = λ ρ y` with Dirichlet conditions to a string
//! equation.
//!
//! The substitution `t(x) = (1/σ) ∫₀ˣ dz / p(z)`, `σ = ∫₀¹ dz / p(z)` maps
//! `[0, 1]` onto itself and turns the problem into `-ÿ = λ σ² p̃(t) ρ̃(t) y`
//! with `p̃(t) = p(x(t))`, `ρ̃(t) = ρ(x(t))`. Eigenvalues are unchanged.

use std::sync::Arc;

use crate::density::Density;
use crate::error::{domain, Result};
use crate::prufer::{Solver, SolverConfig};

pub const DEFAULT_TABLE_SIZE: usize = 8193;

/// Tabulated monotone coordinate change `x ↔ t` for a given `p`.
///
/// `t` is accumulated by per-cell Simpson on a uniform `x` table. Both
/// directions interpolate with cubic Hermite pieces whose slopes are the
/// exact derivatives `dt/dx = 1/(σ p)` and `dx/dt = σ p`.
#[derive(Debug)]
pub struct CoordinateMap {
    p: Density,
    sigma: f64,
    xs: Vec<f64>,
    ts: Vec<f64>,
}

impl CoordinateMap {
    pub fn new(p: &Density, table_size: usize) -> Result<Self> {
        if table_size < 3 {
            return domain(format!("table size {table_size} is too small"));
        }
        let cells = table_size - 1;
        let h = 1.0 / cells as f64;
        let xs: Vec<f64> = (0..table_size).map(|i| i as f64 * h).collect();
        let mut acc = Vec::with_capacity(table_size);
        acc.push(0.0);
        let mut total = 0.0;
        for w in xs.windows(2) {
            let mid = 0.5 * (w[0] + w[1]);
            total += (w[1] - w[0]) / 6.0 * (1.0 / p.value(w[0]) + 4.0 / p.value(mid) + 1.0 / p.value(w[1]));
            acc.push(total);
        }
        let sigma = total;
        let mut ts: Vec<f64> = acc.iter().map(|a| a / sigma).collect();
        ts[cells] = 1.0;
        Ok(Self {
            p: p.clone(),
            sigma,
            xs,
            ts,
        })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn p(&self) -> &Density {
        &self.p
    }

    /// `dx/dt` at the point `x`.
    pub fn dx_dt(&self, x: f64) -> f64 {
        self.sigma * self.p.value(x)
    }

    pub fn t_of_x(&self, x: f64) -> f64 {
        let x = x.clamp(0.0, 1.0);
        let cells = self.xs.len() - 1;
        let i = ((x * cells as f64) as usize).min(cells - 1);
        let (x0, x1) = (self.xs[i], self.xs[i + 1]);
        hermite(
            x,
            x0,
            x1,
            self.ts[i],
            self.ts[i + 1],
            1.0 / self.dx_dt(x0),
            1.0 / self.dx_dt(x1),
        )
    }

    pub fn x_of_t(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, 1.0);
        let cells = self.ts.len() - 1;
        let i = self.ts.partition_point(|&v| v <= t).saturating_sub(1).min(cells - 1);
        let (x0, x1) = (self.xs[i], self.xs[i + 1]);
        hermite(t, self.ts[i], self.ts[i + 1], x0, x1, self.dx_dt(x0), self.dx_dt(x1))
    }
}

fn hermite(s: f64, a: f64, b: f64, ya: f64, yb: f64, ma: f64, mb: f64) -> f64 {
    let h = b - a;
    let u = (s - a) / h;
    let u2 = u * u;
    let u3 = u2 * u;
    (2.0 * u3 - 3.0 * u2 + 1.0) * ya + (u3 - 2.0 * u2 + u) * h * ma + (-2.0 * u3 + 3.0 * u2) * yb + (u3 - u2) * h * mb
}

/// Legendre reduction of the pair `(p, ρ)`.
#[derive(Clone, Debug)]
pub struct LegendreMap {
    coords: Arc<CoordinateMap>,
    rho: Density,
    effective: Density,
}

impl LegendreMap {
    pub fn sigma(&self) -> f64 {
        self.coords.sigma()
    }

    pub fn t_of_x(&self, x: f64) -> f64 {
        self.coords.t_of_x(x)
    }

    pub fn x_of_t(&self, t: f64) -> f64 {
        self.coords.x_of_t(t)
    }

    pub fn p(&self) -> &Density {
        self.coords.p()
    }

    pub fn rho(&self) -> &Density {
        &self.rho
    }

    /// `t ↦ σ² p(x(t)) ρ(x(t))`, the density of the equivalent string.
    pub fn effective_density(&self) -> &Density {
        &self.effective
    }
}

pub fn legendre_map(p: &Density, rho: &Density, table_size: usize) -> Result<LegendreMap> {
    let coords = Arc::new(CoordinateMap::new(p, table_size)?);
    let product = Density::product(vec![p.clone(), rho.clone()])?;
    let sigma = coords.sigma();
    let effective = Density::reparameterized(product, coords.clone())?.scaled(sigma * sigma)?;
    Ok(LegendreMap {
        coords,
        rho: rho.clone(),
        effective,
    })
}

/// n-th Dirichlet eigenvalue of `-(p y')' = λ ρ y`, computed on the
/// transformed string problem.
pub fn sl_eigenvalue(p: &Density, rho: &Density, n: usize, rel_tol: f64) -> Result<f64> {
    let map = legendre_map(p, rho, DEFAULT_TABLE_SIZE)?;
    Solver::new(SolverConfig::default().with_rel_tol(rel_tol)).eigenvalue(map.effective_density(), n)
}

/// Eigenvalues `1..=n_max` of the Sturm-Liouville problem.
pub fn sl_eigenvalues(p: &Density, rho: &Density, n_max: usize, config: SolverConfig) -> Result<Vec<f64>> {
    let map = legendre_map(p, rho, DEFAULT_TABLE_SIZE)?;
    Solver::new(config).eigenvalues(map.effective_density(), n_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn identity_for_unit_p() {
        let one = Density::constant(1.0).unwrap();
        let rho = Density::linear(1.0, 1.0).unwrap();
        let m = legendre_map(&one, &rho, 1025).unwrap();
        assert!((m.sigma() - 1.0).abs() < 1e-14);
        for x in [0.0, 0.1, 0.37, 0.9, 1.0] {
            assert!((m.t_of_x(x) - x).abs() < 1e-14);
            assert!((m.effective_density().value(x) - rho.value(x)).abs() < 1e-13);
        }
    }

    #[test]
    fn constant_p_rescales() {
        let p = Density::constant(2.0).unwrap();
        let rho = Density::quadratic(-1.0, 1.0, 1.0).unwrap();
        let m = legendre_map(&p, &rho, 1025).unwrap();
        assert!((m.sigma() - 0.5).abs() < 1e-14);
        for x in [0.2, 0.5, 0.8] {
            assert!((m.t_of_x(x) - x).abs() < 1e-14);
            assert!((m.effective_density().value(x) - rho.value(x) / 2.0).abs() < 1e-13);
        }
    }

    #[test]
    fn linear_p_closed_form() {
        let p = Density::linear(1.0, 1.0).unwrap();
        let m = legendre_map(&p, &Density::constant(1.0).unwrap(), DEFAULT_TABLE_SIZE).unwrap();
        assert!((m.sigma() - 2f64.ln()).abs() < 1e-13);
        let t_half = 1.5f64.ln() / 2f64.ln();
        assert!((m.t_of_x(0.5) - t_half).abs() < 1e-12);
        assert!((t_half - 0.58496).abs() < 1e-5);
        for i in 0..=100 {
            let x = i as f64 / 100.0;
            let exact = (1.0 + x).ln() / 2f64.ln();
            assert!((m.t_of_x(x) - exact).abs() < 1e-12);
            assert!((m.x_of_t(m.t_of_x(x)) - x).abs() < 1e-10);
        }
    }

    #[test]
    fn map_is_increasing() {
        let p = Density::quadratic(2.0, -2.0, 1.0).unwrap();
        let m = legendre_map(&p, &Density::constant(1.0).unwrap(), 257).unwrap();
        let ts: Vec<f64> = (0..=1000).map(|i| m.t_of_x(i as f64 / 1000.0)).collect();
        assert!(ts.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(m.t_of_x(0.0), 0.0);
        assert_eq!(m.t_of_x(1.0), 1.0);
    }

    #[test]
    fn sl_eigenvalue_closed_forms() {
        let one = Density::constant(1.0).unwrap();
        let l = sl_eigenvalue(&one, &one, 2, 1e-10).unwrap();
        assert!((l / (4.0 * PI * PI) - 1.0).abs() < 1e-9);
        let four = Density::constant(4.0).unwrap();
        let l = sl_eigenvalue(&four, &one, 1, 1e-10).unwrap();
        assert!((l / (4.0 * PI * PI) - 1.0).abs() < 1e-9);
    }
}
