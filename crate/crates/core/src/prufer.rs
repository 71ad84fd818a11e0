//! Dirichlet eigenpairs of `-y'' = λ ρ(x) y` by shooting on the Prüfer angle.
//!
//! With `y = r sin θ`, `y' = S r cos θ` the phase obeys
//!
//! ```text
//! θ' = S cos²θ + (λ ρ / S) sin²θ,      θ(0) = 0,
//! (ln r)' = (S - λ ρ / S) sin θ cos θ,
//! ```
//!
//! and `λ` is the n-th eigenvalue exactly when `θ(1; λ) = nπ`. Zeros of `y`
//! are the points where θ crosses a multiple of π, which does not depend on
//! the scale `S`; the solver picks `S = nπ` so the phase advances nearly
//! uniformly and fixed-step RK4 stays accurate for high indices. `S = 1` is
//! the classical substitution and is what [`prufer_terminal_angle`] reports.

use std::f64::consts::PI;

use crate::density::Density;
use crate::error::{Error, Result};
use crate::exec;
use crate::quadrature;

pub const DEFAULT_STEPS: usize = 4096;
pub const DEFAULT_REL_TOL: f64 = 1e-10;
pub const DEFAULT_GRID: usize = 2049;
pub const DEFAULT_MAX_INDEX: usize = 64;

/// Zero locations are refined to this absolute width.
const ZERO_TOL: f64 = 1e-13;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverConfig {
    /// RK4 steps across `[0, 1]` for indices up to `max_index`.
    pub steps: usize,
    pub rel_tol: f64,
    /// Points of the uniform output grid (odd, for Simpson).
    pub grid_size: usize,
    /// Beyond this index the step count grows linearly with `n`.
    pub max_index: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            steps: DEFAULT_STEPS,
            rel_tol: DEFAULT_REL_TOL,
            grid_size: DEFAULT_GRID,
            max_index: DEFAULT_MAX_INDEX,
        }
    }
}

impl SolverConfig {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_grid(mut self, grid_size: usize) -> Self {
        self.grid_size = grid_size;
        self
    }

    pub fn with_steps(mut self, steps: usize) -> Self {
        self.steps = steps;
        self
    }

    fn steps_for(&self, n: usize) -> usize {
        self.steps * n.div_ceil(self.max_index).max(1)
    }

    fn validate(&self, n: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::Domain("eigenvalue index starts at 1".into()));
        }
        if self.steps < 4 {
            return Err(Error::Domain(format!("{} steps is too few", self.steps)));
        }
        if !(self.rel_tol > 0.0) {
            return Err(Error::Domain(format!("rel_tol {} must be positive", self.rel_tol)));
        }
        Ok(())
    }
}

/// Phase and log-amplitude at one abscissa.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PruferState {
    pub x: f64,
    pub theta: f64,
    pub log_r: f64,
}

/// Integration nodes with the density pre-sampled at nodes and midpoints.
/// Breakpoints of the density are always nodes, so every RK4 step sees a
/// smooth integrand.
#[derive(Clone, Debug)]
struct Mesh {
    x: Vec<f64>,
    rho: Vec<f64>,
    rho_mid: Vec<f64>,
}

impl Mesh {
    fn build(d: &Density, steps: usize, extra: &[f64]) -> Self {
        let mut x: Vec<f64> = (0..=steps).map(|i| i as f64 / steps as f64).collect();
        x.extend(d.breakpoints());
        x.extend(extra.iter().copied().filter(|p| (0.0..=1.0).contains(p)));
        x.sort_by(f64::total_cmp);
        x.dedup_by(|a, b| (*a - *b).abs() < 1e-13);
        *x.last_mut().unwrap() = 1.0;
        let rho = x.iter().map(|&xi| d.value(xi)).collect();
        let rho_mid = x.windows(2).map(|w| d.value(0.5 * (w[0] + w[1]))).collect();
        Self { x, rho, rho_mid }
    }

    /// `∫₀¹ ρ dx` by Simpson on each step.
    fn rho_integral(&self) -> f64 {
        self.x
            .windows(2)
            .enumerate()
            .map(|(i, w)| (w[1] - w[0]) / 6.0 * (self.rho[i] + 4.0 * self.rho_mid[i] + self.rho[i + 1]))
            .sum()
    }

    /// `∫₀¹ √ρ dx` by Simpson on each step.
    fn sqrt_rho_integral(&self) -> f64 {
        self.x
            .windows(2)
            .enumerate()
            .map(|(i, w)| {
                (w[1] - w[0]) / 6.0 * (self.rho[i].sqrt() + 4.0 * self.rho_mid[i].sqrt() + self.rho[i + 1].sqrt())
            })
            .sum()
    }

    fn terminal_angle(&self, lambda: f64, scale: f64) -> f64 {
        let mut theta = 0.0;
        for i in 0..self.x.len() - 1 {
            let h = self.x[i + 1] - self.x[i];
            theta = phase_step(theta, h, lambda, scale, self.rho[i], self.rho_mid[i], self.rho[i + 1]);
        }
        theta
    }

    /// θ and ln r at every node.
    fn march(&self, lambda: f64, scale: f64) -> (Vec<f64>, Vec<f64>) {
        let len = self.x.len();
        let mut theta = Vec::with_capacity(len);
        let mut log_r = Vec::with_capacity(len);
        let (mut t, mut l) = (0.0, 0.0);
        theta.push(t);
        log_r.push(l);
        for i in 0..len - 1 {
            let h = self.x[i + 1] - self.x[i];
            (t, l) = phase_step_with_amplitude(t, l, h, lambda, scale, self.rho[i], self.rho_mid[i], self.rho[i + 1]);
            theta.push(t);
            log_r.push(l);
        }
        (theta, log_r)
    }
}

/// `θ'` written as `A + B cos 2θ`, with `A, B` from the local density.
#[inline]
fn phase_rate(theta: f64, lambda: f64, scale: f64, rho: f64) -> f64 {
    let q = lambda * rho / scale;
    0.5 * (scale + q) + 0.5 * (scale - q) * (2.0 * theta).cos()
}

#[inline]
fn phase_step(theta: f64, h: f64, lambda: f64, scale: f64, r0: f64, rm: f64, r1: f64) -> f64 {
    let k1 = phase_rate(theta, lambda, scale, r0);
    let k2 = phase_rate(theta + 0.5 * h * k1, lambda, scale, rm);
    let k3 = phase_rate(theta + 0.5 * h * k2, lambda, scale, rm);
    let k4 = phase_rate(theta + h * k3, lambda, scale, r1);
    theta + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
}

#[inline]
fn rates(theta: f64, lambda: f64, scale: f64, rho: f64) -> (f64, f64) {
    let q = lambda * rho / scale;
    let (s2, c2) = (2.0 * theta).sin_cos();
    (0.5 * (scale + q) + 0.5 * (scale - q) * c2, 0.5 * (scale - q) * s2)
}

#[allow(clippy::too_many_arguments)]
#[inline]
fn phase_step_with_amplitude(
    theta: f64,
    log_r: f64,
    h: f64,
    lambda: f64,
    scale: f64,
    r0: f64,
    rm: f64,
    r1: f64,
) -> (f64, f64) {
    let (a1, b1) = rates(theta, lambda, scale, r0);
    let (a2, b2) = rates(theta + 0.5 * h * a1, lambda, scale, rm);
    let (a3, b3) = rates(theta + 0.5 * h * a2, lambda, scale, rm);
    let (a4, b4) = rates(theta + h * a3, lambda, scale, r1);
    (
        theta + h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4),
        log_r + h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4),
    )
}

/// θ(1; λ) for the classical substitution `y' = r cos θ`, using the
/// default step count.
pub fn prufer_terminal_angle(d: &Density, lambda: f64) -> f64 {
    terminal_angle(d, lambda, DEFAULT_STEPS, 1.0)
}

/// θ(1; λ) with an explicit step count and amplitude scale.
pub fn terminal_angle(d: &Density, lambda: f64, steps: usize, scale: f64) -> f64 {
    Mesh::build(d, steps, &[]).terminal_angle(lambda, scale)
}

/// Phase state along the default mesh for the classical substitution.
pub fn prufer_trajectory(d: &Density, lambda: f64) -> Vec<PruferState> {
    let mesh = Mesh::build(d, DEFAULT_STEPS, &[]);
    let (theta, log_r) = mesh.march(lambda, 1.0);
    mesh.x
        .iter()
        .zip(theta)
        .zip(log_r)
        .map(|((&x, theta), log_r)| PruferState { x, theta, log_r })
        .collect()
}

fn index_scale(n: usize) -> f64 {
    n as f64 * PI
}

/// Evaluations of the increasing shooting function with the tightest
/// bracket seen so far and the two most recent points.
struct Shooting<F> {
    f: F,
    lo: Option<(f64, f64)>,
    hi: Option<(f64, f64)>,
    last: (f64, f64),
    before: (f64, f64),
}

impl<F: Fn(f64) -> f64> Shooting<F> {
    fn eval(&mut self, lam: f64) -> f64 {
        let v = (self.f)(lam);
        if v <= 0.0 && self.lo.is_none_or(|(l, _)| lam >= l) {
            self.lo = Some((lam, v));
        }
        if v >= 0.0 && self.hi.is_none_or(|(h, _)| lam <= h) {
            self.hi = Some((lam, v));
        }
        self.before = self.last;
        self.last = (lam, v);
        v
    }

    /// Secant through the two latest points, kept inside the bracket
    /// (bisection otherwise) and inside `[floor, ceil]` while one side is
    /// still open.
    fn next(&self, floor: f64, ceil: f64) -> f64 {
        let ((a, fa), (b, fb)) = (self.before, self.last);
        let secant = if fa != fb {
            b - fb * (b - a) / (fb - fa)
        } else {
            f64::NAN
        };
        match (self.lo, self.hi) {
            (Some((l, _)), Some((h, _))) => {
                if secant > l && secant < h {
                    secant
                } else {
                    0.5 * (l + h)
                }
            }
            (Some((l, _)), None) => {
                let step = if secant > l {
                    secant
                } else {
                    l + 2.0 * (l - a).abs().max(1e-6 * l)
                };
                step.min(ceil)
            }
            (None, Some((h, _))) => {
                let step = if secant < h && secant > 0.0 {
                    secant
                } else {
                    h - 2.0 * (h - a).abs().max(1e-6 * h)
                };
                step.max(floor)
            }
            (None, None) => unreachable!("every evaluation closes one side"),
        }
    }
}

/// Root of `θ(1; λ) = nπ` on a fixed mesh by a safeguarded secant
/// iteration started from the WKB estimate `(nπ / ∫√ρ)²` and one Newton
/// step with `dθ(1)/dλ ≈ ∫ρ / 2S`. Steps leaving the known bracket are
/// replaced by bisection, and a bisection is forced whenever the bracket
/// fails to halve over three steps. A bracketed secant step shorter than
/// `rel_tol/4` is accepted without another march.
fn solve_on_mesh(mesh: &Mesh, d: &Density, n: usize, rel_tol: f64) -> Result<f64> {
    let scale = index_scale(n);
    let base = (n as f64 * PI).powi(2);
    let f = |lam: f64| mesh.terminal_angle(lam, scale) - scale;
    let (mut floor, mut ceil) = (0.99 * base / d.peak(), 1.01 * base / d.floor());

    let x0 = (base / mesh.sqrt_rho_integral().powi(2)).clamp(floor, ceil);
    let mut s = Shooting {
        f,
        lo: None,
        hi: None,
        last: (x0, f64::NAN),
        before: (x0, f64::NAN),
    };
    let f0 = s.eval(x0);
    if f0 == 0.0 {
        return Ok(x0);
    }
    let slope = mesh.rho_integral() / (2.0 * scale);
    let mut lam = (x0 - f0 / slope).clamp(floor, ceil);
    let mut width = f64::INFINITY;
    let mut stalled = 0;
    for _ in 0..200 {
        let previous = s.last.0;
        let v = s.eval(lam);
        if v == 0.0 || (lam - previous).abs() <= 0.25 * rel_tol * lam {
            return Ok(lam);
        }
        if let (Some((l, _)), Some((h, _))) = (s.lo, s.hi) {
            if h - l <= rel_tol * lam {
                return Ok(lam);
            }
            if h - l > 0.5 * width {
                stalled += 1;
            } else {
                width = h - l;
                stalled = 0;
            }
            if stalled >= 3 {
                stalled = 0;
                width = h - l;
                lam = 0.5 * (l + h);
                continue;
            }
        } else if s.lo.is_none() && lam == floor && v > 0.0 {
            floor *= 0.5;
        } else if s.hi.is_none() && lam == ceil && v < 0.0 {
            ceil *= 2.0;
        }
        lam = s.next(floor, ceil);
        if s.lo.is_some() && s.hi.is_some() && (lam - s.last.0).abs() <= 0.25 * rel_tol * lam {
            return Ok(lam);
        }
    }
    match (s.lo, s.hi) {
        (Some((l, _)), Some((h, _))) => Ok(0.5 * (l + h)),
        (l, h) => Err(Error::Bracket {
            index: n,
            lo: l.map_or(floor, |p| p.0),
            hi: h.map_or(ceil, |p| p.0),
        }),
    }
}

/// One Dirichlet eigenpair sampled on a uniform grid.
#[derive(Clone, Debug)]
pub struct Eigenpair {
    pub index: usize,
    pub lambda: f64,
    pub grid: Vec<f64>,
    pub y: Vec<f64>,
    pub dy: Vec<f64>,
    /// Interior zeros in increasing order; exactly `index - 1` of them.
    pub zeros: Vec<f64>,
    ddy: Vec<f64>,
    rho: Vec<f64>,
}

impl Eigenpair {
    pub fn spacing(&self) -> f64 {
        1.0 / (self.grid.len() - 1) as f64
    }

    /// Density samples on the grid.
    pub fn rho(&self) -> &[f64] {
        &self.rho
    }

    /// `(y, y')` at an arbitrary point, by quintic Hermite interpolation
    /// using `y'' = -λ ρ y` at the grid nodes.
    pub fn eval(&self, x: f64) -> (f64, f64) {
        let h = self.spacing();
        let last = self.grid.len() - 2;
        let j = ((x / h).floor().max(0.0) as usize).min(last);
        let s = (x - self.grid[j]) / h;
        let (b, db) = quintic_basis(s);
        let vals = [
            self.y[j],
            h * self.dy[j],
            h * h * self.ddy[j],
            self.y[j + 1],
            h * self.dy[j + 1],
            h * h * self.ddy[j + 1],
        ];
        let y = b.iter().zip(vals).map(|(b, v)| b * v).sum();
        let dy: f64 = db.iter().zip(vals).map(|(b, v)| b * v).sum();
        (y, dy / h)
    }

    /// `∫ρ y² dx` by composite Simpson on the grid (1 after normalization).
    pub fn mass(&self) -> quadrature::Estimate {
        let v: Vec<f64> = self.rho.iter().zip(&self.y).map(|(r, y)| r * y * y).collect();
        quadrature::simpson_refined(&v, self.spacing())
    }
}

/// Quintic Hermite basis on `[0, 1]` and its derivative, ordered as
/// `(y0, y0', y0'', y1, y1', y1'')`.
fn quintic_basis(s: f64) -> ([f64; 6], [f64; 6]) {
    let s2 = s * s;
    let s3 = s2 * s;
    let s4 = s3 * s;
    let s5 = s4 * s;
    let b = [
        1.0 - 10.0 * s3 + 15.0 * s4 - 6.0 * s5,
        s - 6.0 * s3 + 8.0 * s4 - 3.0 * s5,
        0.5 * s2 - 1.5 * s3 + 1.5 * s4 - 0.5 * s5,
        10.0 * s3 - 15.0 * s4 + 6.0 * s5,
        -4.0 * s3 + 7.0 * s4 - 3.0 * s5,
        0.5 * s3 - s4 + 0.5 * s5,
    ];
    let db = [
        -30.0 * s2 + 60.0 * s3 - 30.0 * s4,
        1.0 - 18.0 * s2 + 32.0 * s3 - 15.0 * s4,
        s - 4.5 * s2 + 6.0 * s3 - 2.5 * s4,
        30.0 * s2 - 60.0 * s3 + 30.0 * s4,
        -12.0 * s2 + 28.0 * s3 - 15.0 * s4,
        1.5 * s2 - 4.0 * s3 + 2.5 * s4,
    ];
    (b, db)
}

/// Eigenvalues and eigenpairs of one density for `n = 1..=n_max`.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub density: Density,
    pub pairs: Vec<Eigenpair>,
}

impl Spectrum {
    pub fn lambdas(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.lambda).collect()
    }
}

/// Shooting solver with a fixed configuration.
#[derive(Clone, Copy, Debug, Default)]
pub struct Solver {
    pub config: SolverConfig,
}

impl Solver {
    pub fn new(config: SolverConfig) -> Self {
        Self { config }
    }

    /// n-th Dirichlet eigenvalue.
    pub fn eigenvalue(&self, d: &Density, n: usize) -> Result<f64> {
        self.config.validate(n)?;
        let mesh = Mesh::build(d, self.config.steps_for(n), &[]);
        solve_on_mesh(&mesh, d, n, self.config.rel_tol)
    }

    /// Eigenvalues `1..=n_max`.
    pub fn eigenvalues(&self, d: &Density, n_max: usize) -> Result<Vec<f64>> {
        let idx: Vec<usize> = (1..=n_max).collect();
        exec::try_map(&idx, |&n| self.eigenvalue(d, n))
    }

    /// Normalized eigenpair on the configured output grid.
    pub fn eigenpair(&self, d: &Density, n: usize) -> Result<Eigenpair> {
        self.config.validate(n)?;
        let g = self.config.grid_size;
        if g < 5 || g.is_multiple_of(2) {
            return Err(Error::Domain(format!("grid size {g} must be odd and at least 5")));
        }
        let grid: Vec<f64> = (0..g).map(|j| j as f64 / (g - 1) as f64).collect();
        let mesh = Mesh::build(d, self.config.steps_for(n), &grid);
        let lambda = solve_on_mesh(&mesh, d, n, self.config.rel_tol)?;
        let scale = index_scale(n);
        let (theta, log_r) = mesh.march(lambda, scale);

        let turns = theta[theta.len() - 1] / PI;
        if (turns - n as f64).abs() > 0.5 {
            return Err(Error::Consistency {
                index: n,
                detail: format!("terminal phase is {turns} π"),
            });
        }

        let mut y = Vec::with_capacity(g);
        let mut dy = Vec::with_capacity(g);
        let mut node = 0;
        for &xg in &grid {
            while (mesh.x[node] - xg).abs() > 1e-12 {
                node += 1;
            }
            let r = log_r[node].exp();
            let (s, c) = theta[node].sin_cos();
            y.push(r * s);
            dy.push(scale * r * c);
        }
        y[0] = 0.0;
        y[g - 1] = 0.0;

        let zeros = self.locate_zeros(d, &mesh, &theta, lambda, scale, n)?;

        let rho: Vec<f64> = grid.iter().map(|&x| d.value(x)).collect();
        let h = 1.0 / (g - 1) as f64;
        let weight: Vec<f64> = rho.iter().zip(&y).map(|(r, v)| r * v * v).collect();
        let norm = quadrature::simpson(&weight, h).sqrt();
        for v in y.iter_mut().chain(dy.iter_mut()) {
            *v /= norm;
        }
        let ddy = rho.iter().zip(&y).map(|(r, v)| -lambda * r * v).collect();

        Ok(Eigenpair {
            index: n,
            lambda,
            grid,
            y,
            dy,
            zeros,
            ddy,
            rho,
        })
    }

    fn locate_zeros(
        &self,
        d: &Density,
        mesh: &Mesh,
        theta: &[f64],
        lambda: f64,
        scale: f64,
        n: usize,
    ) -> Result<Vec<f64>> {
        let mut zeros = Vec::with_capacity(n.saturating_sub(1));
        let mut i = 0;
        for k in 1..n {
            let level = k as f64 * PI;
            while i + 1 < theta.len() && theta[i + 1] < level {
                i += 1;
            }
            if i + 1 >= theta.len() - 1 && theta[theta.len() - 1] < level {
                break;
            }
            // Bisection on a single RK4 step from node i.
            let (x0, t0, r0) = (mesh.x[i], theta[i], mesh.rho[i]);
            let phase_at = |x: f64| {
                let h = x - x0;
                phase_step(t0, h, lambda, scale, r0, d.value(x0 + 0.5 * h), d.value(x))
            };
            let (mut a, mut b) = (x0, mesh.x[i + 1]);
            while b - a > ZERO_TOL {
                let m = 0.5 * (a + b);
                if phase_at(m) < level {
                    a = m;
                } else {
                    b = m;
                }
            }
            zeros.push(0.5 * (a + b));
        }
        if zeros.len() != n - 1 || zeros.iter().any(|z| *z <= 0.0 || *z >= 1.0) {
            return Err(Error::Consistency {
                index: n,
                detail: format!("found {} interior zeros, expected {}", zeros.len(), n - 1),
            });
        }
        Ok(zeros)
    }

    pub fn spectrum(&self, d: &Density, n_max: usize) -> Result<Spectrum> {
        if n_max == 0 {
            return Err(Error::Domain("spectrum needs n_max >= 1".into()));
        }
        let idx: Vec<usize> = (1..=n_max).collect();
        let pairs = exec::try_map(&idx, |&n| self.eigenpair(d, n))?;
        Ok(Spectrum {
            density: d.clone(),
            pairs,
        })
    }
}

/// n-th eigenvalue with default steps.
pub fn eigenvalue(d: &Density, n: usize, rel_tol: f64) -> Result<f64> {
    Solver::new(SolverConfig::default().with_rel_tol(rel_tol)).eigenvalue(d, n)
}

/// n-th normalized eigenpair on a uniform grid of `grid_size` points.
pub fn eigenfunction(d: &Density, n: usize, grid_size: usize) -> Result<Eigenpair> {
    Solver::new(SolverConfig::default().with_grid(grid_size)).eigenpair(d, n)
}

pub fn spectrum(d: &Density, n_max: usize) -> Result<Spectrum> {
    Solver::default().spectrum(d, n_max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> Density {
        Density::constant(1.0).unwrap()
    }

    #[test]
    fn terminal_angle_closed_forms() {
        let d = unit();
        assert!((prufer_terminal_angle(&d, PI * PI) - PI).abs() < 1e-8);
        assert!((prufer_terminal_angle(&d, 4.0 * PI * PI) - 2.0 * PI).abs() < 1e-8);
        // θ' = cos²θ gives θ = arctan x.
        assert!((prufer_terminal_angle(&d, 0.0) - PI / 4.0).abs() < 1e-12);
    }

    #[test]
    fn terminal_angle_is_scale_free_at_eigenvalues() {
        let d = Density::linear(1.0, 1.0).unwrap();
        let lam = eigenvalue(&d, 3, 1e-12).unwrap();
        let t = terminal_angle(&d, lam, 4096, 3.0 * PI);
        assert!((t - 3.0 * PI).abs() < 1e-9);
        let classical = terminal_angle(&d, lam, 1 << 16, 1.0);
        assert!((classical - 3.0 * PI).abs() < 1e-6);
    }

    #[test]
    fn trajectory_starts_at_zero() {
        let traj = prufer_trajectory(&unit(), PI * PI);
        assert_eq!(traj[0].theta, 0.0);
        assert!(traj.windows(2).all(|w| w[1].theta > w[0].theta));
    }

    #[test]
    fn constant_density_eigenvalues() {
        let lam = eigenvalue(&unit(), 3, 1e-10).unwrap();
        assert!((lam / (9.0 * PI * PI) - 1.0).abs() < 1e-10);
        let lam = eigenvalue(&Density::constant(4.0).unwrap(), 1, 1e-10).unwrap();
        assert!((lam - PI * PI / 4.0).abs() < 1e-9);
    }

    #[test]
    fn zero_index_rejected() {
        assert!(matches!(eigenvalue(&unit(), 0, 1e-10), Err(Error::Domain(_))));
    }

    #[test]
    fn second_eigenfunction_closed_form() {
        let p = eigenfunction(&unit(), 2, 2049).unwrap();
        assert_eq!(p.zeros.len(), 1);
        assert!((p.zeros[0] - 0.5).abs() < 1e-12);
        assert!((p.dy[0] - 2.0 * 2f64.sqrt() * PI).abs() < 1e-8);
        for (x, y) in p.grid.iter().zip(&p.y) {
            assert!((y - 2f64.sqrt() * (2.0 * PI * x).sin()).abs() < 1e-9);
        }
        let (y, dy) = p.eval(0.123_456);
        assert!((y - 2f64.sqrt() * (2.0 * PI * 0.123_456).sin()).abs() < 1e-10);
        assert!((dy - 2f64.sqrt() * 2.0 * PI * (2.0 * PI * 0.123_456).cos()).abs() < 1e-8);
    }

    #[test]
    fn ground_state_has_no_zeros() {
        let p = eigenfunction(&unit(), 1, 1025).unwrap();
        assert!(p.zeros.is_empty());
        assert!(p.y[1..p.y.len() - 1].iter().all(|&v| v > 0.0));
        assert!(p.dy[0] > 0.0);
    }

    #[test]
    fn even_grid_rejected() {
        assert!(eigenfunction(&unit(), 1, 1024).is_err());
    }

    #[test]
    fn spectrum_of_unit_density() {
        let s = spectrum(&unit(), 4).unwrap();
        for (k, lam) in s.lambdas().iter().enumerate() {
            let exact = ((k + 1) as f64 * PI).powi(2);
            assert!((lam / exact - 1.0).abs() < 1e-10);
        }
        assert_eq!(spectrum(&unit(), 1).unwrap().pairs.len(), 1);
    }

    #[test]
    fn quintic_basis_reproduces_quintics() {
        let f = |x: f64| 1.0 + x - 2.0 * x.powi(3) + 0.5 * x.powi(5);
        let df = |x: f64| 1.0 - 6.0 * x * x + 2.5 * x.powi(4);
        let ddf = |x: f64| -12.0 * x + 10.0 * x.powi(3);
        let (a, h) = (0.3, 0.2);
        for s in [0.0, 0.25, 0.6, 1.0] {
            let (b, db) = quintic_basis(s);
            let v = [
                f(a),
                h * df(a),
                h * h * ddf(a),
                f(a + h),
                h * df(a + h),
                h * h * ddf(a + h),
            ];
            let y: f64 = b.iter().zip(v).map(|(b, v)| b * v).sum();
            let d: f64 = db.iter().zip(v).map(|(b, v)| b * v).sum::<f64>() / h;
            assert!((y - f(a + s * h)).abs() < 1e-13);
            assert!((d - df(a + s * h)).abs() < 1e-12);
        }
    }

    #[test]
    fn high_index_uses_more_steps() {
        let c = SolverConfig::default();
        assert_eq!(c.steps_for(64), c.steps);
        assert_eq!(c.steps_for(65), 2 * c.steps);
    }
}
