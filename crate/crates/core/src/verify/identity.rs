//! Boundary identity for eigenfunctions of the string equation.
//!
//! For a solution of `−y″ = λρy` with `y(0) = y(1) = 0` and any smooth `g`,
//!
//! ```text
//! g(1) y'(1)² − g(0) y'(0)² = ∫₀¹ [2λ g' ρ + λ g ρ' + ½ g'''] y² dx.
//! ```

use super::{integrate_pair, VerificationReport};
use crate::density::Density;
use crate::error::{domain, Result};
use crate::prufer::{Eigenpair, Solver, SolverConfig};

pub const IDENTITY_TOL: f64 = 1e-6;

/// Polynomial test function of degree at most four, lowest coefficient first.
#[derive(Clone, Debug, PartialEq)]
pub struct TestFunction {
    coeffs: Vec<f64>,
}

impl TestFunction {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() || coeffs.len() > 5 {
            return domain(format!("test function needs 1 to 5 coefficients, got {}", coeffs.len()));
        }
        Ok(Self { coeffs })
    }

    /// The monomial `x^k`.
    pub fn monomial(k: usize) -> Result<Self> {
        let mut coeffs = vec![0.0; k + 1];
        coeffs[k] = 1.0;
        Self::new(coeffs)
    }

    /// `j`-th derivative at `x`.
    pub fn derivative(&self, j: usize, x: f64) -> f64 {
        self.coeffs.iter().enumerate().skip(j).rev().fold(0.0, |acc, (k, c)| {
            let falling: f64 = ((k - j + 1)..=k).map(|v| v as f64).product();
            acc * x + c * falling
        })
    }

    pub fn value(&self, x: f64) -> f64 {
        self.derivative(0, x)
    }
}

/// Both sides of the identity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdentitySides {
    pub lhs: f64,
    pub rhs: f64,
    /// Quadrature refinement error of the right side.
    pub quadrature_error: f64,
}

impl IdentitySides {
    pub fn residual(&self) -> f64 {
        (self.lhs - self.rhs).abs()
    }

    /// `1e-6 · max(|LHS|, 1)`, widened to twice the quadrature error.
    pub fn tolerance(&self) -> f64 {
        (IDENTITY_TOL * self.lhs.abs().max(1.0)).max(2.0 * self.quadrature_error)
    }
}

pub fn identity_sides(d: &Density, pair: &Eigenpair, g: &TestFunction) -> IdentitySides {
    let last = pair.dy.len() - 1;
    let lhs = g.value(1.0) * pair.dy[last].powi(2) - g.value(0.0) * pair.dy[0].powi(2);
    let lam = pair.lambda;
    let rhs = integrate_pair(pair, &d.breakpoints(), |x, y, _| {
        let weight =
            2.0 * lam * g.derivative(1, x) * d.value(x) + lam * g.value(x) * d.derivative(x) + 0.5 * g.derivative(3, x);
        weight * y * y
    });
    IdentitySides {
        lhs,
        rhs: rhs.value,
        quadrature_error: rhs.error,
    }
}

/// `|LHS − RHS|` for the n-th eigenpair of `d`.
pub fn huang_identity_residual(d: &Density, n: usize, g: &TestFunction, config: &SolverConfig) -> Result<f64> {
    let pair = Solver::new(*config).eigenpair(d, n)?;
    Ok(identity_sides(d, &pair, g).residual())
}

/// Rows `huang_identity_g0` … `huang_identity_g3` for `g = 1, x, x², x³`.
pub fn identity_rows(d: &Density, pairs: &[Eigenpair]) -> Vec<VerificationReport> {
    let digest = d.digest();
    let mut rows = Vec::new();
    for pair in pairs {
        for k in 0..=3 {
            let g = TestFunction::monomial(k).expect("degree at most three");
            let sides = identity_sides(d, pair, &g);
            rows.push(
                VerificationReport::new(
                    format!("huang_identity_g{k}"),
                    digest.clone(),
                    -sides.residual(),
                    sides.tolerance(),
                )
                .with_n(pair.index),
            );
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_derivatives() {
        let g = TestFunction::new(vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(g.value(2.0), 1.0 + 4.0 + 12.0 + 32.0);
        assert_eq!(g.derivative(1, 2.0), 2.0 + 12.0 + 48.0);
        assert_eq!(g.derivative(3, 0.7), 24.0);
        assert_eq!(g.derivative(4, 0.7), 0.0);
        assert!(TestFunction::new(vec![0.0; 6]).is_err());
    }

    #[test]
    fn uniform_string_closed_forms() {
        let d = Density::constant(1.0).unwrap();
        let solver = Solver::default();
        for n in 1..=3 {
            let pair = solver.eigenpair(&d, n).unwrap();
            let x = identity_sides(&d, &pair, &TestFunction::monomial(1).unwrap());
            let exact = 2.0 * (n as f64 * PI).powi(2);
            assert!((x.lhs - exact).abs() < 1e-8 * exact, "{x:?}");
            assert!((x.rhs - exact).abs() < 1e-8 * exact, "{x:?}");
            let one = identity_sides(&d, &pair, &TestFunction::monomial(0).unwrap());
            assert!(one.lhs.abs() < 1e-8 && one.rhs.abs() < 1e-12);
        }
    }

    #[test]
    fn ramp_residual_is_small_at_two_resolutions() {
        let d = Density::linear(1.0, 1.0).unwrap();
        let g = TestFunction::monomial(2).unwrap();
        let coarse = huang_identity_residual(&d, 1, &g, &SolverConfig::default().with_grid(1025)).unwrap();
        let fine = huang_identity_residual(&d, 1, &g, &SolverConfig::default()).unwrap();
        assert!(coarse < 1e-6 && fine < 1e-6, "{coarse} {fine}");
    }

    #[test]
    fn piecewise_density_is_handled_per_piece() {
        let d = Density::piecewise_linear(vec![0.0, 0.3, 1.0], vec![1.0, 2.0, 1.5]).unwrap();
        let pairs: Vec<_> = (1..=3).map(|n| Solver::default().eigenpair(&d, n).unwrap()).collect();
        let rows = identity_rows(&d, &pairs);
        assert_eq!(rows.len(), 12);
        assert!(rows.iter().all(|r| r.pass), "{rows:#?}");
    }
}
