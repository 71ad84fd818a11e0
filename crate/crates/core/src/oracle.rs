//! Finite-difference reference eigenvalues.
//!
//! Central differences on a uniform mesh with a lumped (diagonal) mass turn
//! `-y'' = λ ρ y` into the pencil `K v = λ M v`, `K = tridiag(-1, 2, -1)/h²`,
//! `M = diag ρ(xᵢ)`. The similarity `M^{-1/2} K M^{-1/2}` is symmetric
//! tridiagonal, and its lowest eigenvalues are found by Sturm-sequence
//! bisection. Nothing here shares code with the shooting solver.

use crate::density::Density;
use crate::error::{Error, Result};

pub const DEFAULT_MESHES: (usize, usize) = (1000, 2000);

/// Symmetric tridiagonal matrix.
#[derive(Clone, Debug)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert_eq!(off.len() + 1, diag.len(), "off-diagonal must be one shorter");
        Self { diag, off }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Number of eigenvalues strictly below `shift` (negative LDLᵀ pivots).
    pub fn sturm_count(&self, shift: f64) -> usize {
        let mut count = 0;
        let mut q = self.diag[0] - shift;
        if q < 0.0 {
            count += 1;
        }
        for i in 1..self.diag.len() {
            let guarded = if q == 0.0 {
                f64::EPSILON * self.off[i - 1].abs().max(1.0)
            } else {
                q
            };
            q = self.diag[i] - shift - self.off[i - 1] * self.off[i - 1] / guarded;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    /// The `count` smallest eigenvalues in increasing order.
    pub fn lowest_eigenvalues(&self, count: usize) -> Vec<f64> {
        let (g_lo, g_hi) = self.gershgorin();
        let mut out = Vec::with_capacity(count);
        let mut floor = g_lo;
        for k in 0..count.min(self.dim()) {
            // Eigenvalue k (0-based) is the smallest shift with count > k.
            let mut lo = floor;
            let mut hi = g_hi;
            for _ in 0..256 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if self.sturm_count(mid) > k {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            debug_assert!(
                self.sturm_count(lo) <= k && self.sturm_count(hi) > k,
                "Sturm count must be monotone in the shift"
            );
            out.push(0.5 * (lo + hi));
            floor = lo;
        }
        out
    }
}

/// Mass-lumped finite-difference pencil for `-y'' = λ ρ y`.
#[derive(Clone, Debug)]
pub struct FdProblem {
    pub mesh_size: usize,
    pub h: f64,
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
    pub mass: Vec<f64>,
}

impl FdProblem {
    pub fn new(d: &Density, mesh_size: usize) -> Result<Self> {
        if mesh_size < 2 {
            return Err(Error::Domain(format!("mesh of {mesh_size} cells is degenerate")));
        }
        let h = 1.0 / mesh_size as f64;
        let interior = mesh_size - 1;
        let mass = (1..mesh_size).map(|i| d.value(i as f64 * h)).collect();
        Ok(Self {
            mesh_size,
            h,
            diag: vec![2.0 / (h * h); interior],
            offdiag: vec![-1.0 / (h * h); interior - 1],
            mass,
        })
    }

    /// `M^{-1/2} K M^{-1/2}`.
    pub fn symmetrized(&self) -> SymTridiagonal {
        let s: Vec<f64> = self.mass.iter().map(|m| 1.0 / m.sqrt()).collect();
        let diag = self.diag.iter().zip(&s).map(|(d, s)| d * s * s).collect();
        let off = self
            .offdiag
            .iter()
            .enumerate()
            .map(|(i, e)| e * s[i] * s[i + 1])
            .collect();
        SymTridiagonal::new(diag, off)
    }
}

fn resolution_guard(mesh: usize, n_max: usize) -> Result<()> {
    let required = 8 * n_max;
    if mesh < required {
        return Err(Error::Resolution {
            mesh,
            requested: n_max,
            required,
        });
    }
    Ok(())
}

/// Lowest `n_max` eigenvalues of the lumped-mass pencil on `mesh` cells.
pub fn fd_eigenvalues(d: &Density, n_max: usize, mesh: usize) -> Result<Vec<f64>> {
    resolution_guard(mesh, n_max)?;
    Ok(FdProblem::new(d, mesh)?.symmetrized().lowest_eigenvalues(n_max))
}

/// Eliminates the O(h²) term from values on meshes `N` and `2N`.
pub fn richardson(lambda_n: f64, lambda_2n: f64) -> f64 {
    (4.0 * lambda_2n - lambda_n) / 3.0
}

/// Richardson extrapolation for a general refinement ratio `r`.
fn richardson_ratio(coarse: f64, fine: f64, r: f64) -> f64 {
    let r2 = r * r;
    (r2 * fine - coarse) / (r2 - 1.0)
}

/// Extrapolated eigenvalue together with the size of the eliminated term.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Reference {
    pub value: f64,
    /// `|λ_fine - λ_coarse| / (r² - 1)`, the magnitude of the removed O(h²)
    /// correction on the fine mesh.
    pub correction: f64,
}

impl Reference {
    /// Conservative bound on the remaining error: the O(h²) correction
    /// shrunk by another factor `h_fine²·λ`, floored at 1e-13 relative.
    pub fn bound(&self, fine_mesh: usize) -> f64 {
        let h = 1.0 / fine_mesh as f64;
        (self.correction * self.value * h * h).max(1e-13 * self.value)
    }
}

fn extrapolate(coarse: &[f64], fine: &[f64], r: f64) -> Vec<Reference> {
    coarse
        .iter()
        .zip(fine)
        .map(|(&c, &f)| Reference {
            value: richardson_ratio(c, f, r),
            correction: (f - c).abs() / (r * r - 1.0),
        })
        .collect()
}

/// Richardson-extrapolated reference eigenvalues from two meshes.
pub fn reference_eigenvalues(d: &Density, n_max: usize, meshes: (usize, usize)) -> Result<Vec<Reference>> {
    let coarse = fd_eigenvalues(d, n_max, meshes.0)?;
    let fine = fd_eigenvalues(d, n_max, meshes.1)?;
    Ok(extrapolate(&coarse, &fine, meshes.1 as f64 / meshes.0 as f64))
}

/// Closed-form eigenvalue `k` (1-based) of the discrete Dirichlet Laplacian.
pub fn discrete_laplacian_eigenvalue(mesh: usize, k: usize) -> f64 {
    let h = 1.0 / mesh as f64;
    let s = (k as f64 * std::f64::consts::PI * h / 2.0).sin();
    4.0 / (h * h) * s * s
}

/// Conservative flux-form discretization of `-(p y')' = λ ρ y` with
/// harmonic-mean face coefficients and lumped mass.
pub fn flux_fd_eigenvalues(p: &Density, rho: &Density, n_max: usize, mesh: usize) -> Result<Vec<f64>> {
    resolution_guard(mesh, n_max)?;
    let h = 1.0 / mesh as f64;
    let pn: Vec<f64> = (0..=mesh).map(|i| p.value(i as f64 * h)).collect();
    let face: Vec<f64> = pn.windows(2).map(|w| 2.0 * w[0] * w[1] / (w[0] + w[1])).collect();
    let s: Vec<f64> = (1..mesh).map(|i| 1.0 / rho.value(i as f64 * h).sqrt()).collect();
    let h2 = h * h;
    let diag = (0..mesh - 1)
        .map(|i| (face[i] + face[i + 1]) / h2 * s[i] * s[i])
        .collect();
    let off = (0..mesh - 2).map(|i| -face[i + 1] / h2 * s[i] * s[i + 1]).collect();
    Ok(SymTridiagonal::new(diag, off).lowest_eigenvalues(n_max))
}

/// Richardson-extrapolated flux-form reference eigenvalues.
pub fn flux_reference_eigenvalues(
    p: &Density,
    rho: &Density,
    n_max: usize,
    meshes: (usize, usize),
) -> Result<Vec<Reference>> {
    let coarse = flux_fd_eigenvalues(p, rho, n_max, meshes.0)?;
    let fine = flux_fd_eigenvalues(p, rho, n_max, meshes.1)?;
    Ok(extrapolate(&coarse, &fine, meshes.1 as f64 / meshes.0 as f64))
}

/// Sign changes of the discrete eigenvector for eigenvalue `k` (1-based),
/// located by linear interpolation between mesh nodes. Coarse: only meant
/// to confirm zero locations of the shooting solver to O(h).
pub fn fd_eigenvector_zeros(d: &Density, k: usize, mesh: usize) -> Result<Vec<f64>> {
    resolution_guard(mesh, k)?;
    let prob = FdProblem::new(d, mesh)?;
    let a = prob.symmetrized();
    let lam = a.lowest_eigenvalues(k)[k - 1];
    // Inverse iteration on the tridiagonal system (A - σI) w = v.
    let n = a.dim();
    let shift = lam * (1.0 - 1e-10);
    let mut v = vec![1.0; n];
    for _ in 0..3 {
        v = tridiagonal_solve(&a, shift, &v);
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
    }
    let h = prob.h;
    // Undo the symmetrization: y = M^{-1/2} w.
    let y: Vec<f64> = v.iter().zip(&prob.mass).map(|(w, m)| w / m.sqrt()).collect();
    let mut zeros = Vec::new();
    for i in 0..n - 1 {
        if y[i] == 0.0 {
            zeros.push((i + 1) as f64 * h);
        } else if y[i] * y[i + 1] < 0.0 {
            let s = y[i] / (y[i] - y[i + 1]);
            zeros.push((i + 1) as f64 * h + s * h);
        }
    }
    Ok(zeros)
}

fn tridiagonal_solve(a: &SymTridiagonal, shift: f64, rhs: &[f64]) -> Vec<f64> {
    let n = a.dim();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut b = a.diag[0] - shift;
    c[0] = if n > 1 { a.off[0] / b } else { 0.0 };
    d[0] = rhs[0] / b;
    for i in 1..n {
        b = a.diag[i] - shift - a.off[i - 1] * c[i - 1];
        if i + 1 < n {
            c[i] = a.off[i] / b;
        }
        d[i] = (rhs[i] - a.off[i - 1] * d[i - 1]) / b;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn unit_density_matches_discrete_laplacian() {
        let one = Density::constant(1.0).unwrap();
        for mesh in [64, 100] {
            let vals = fd_eigenvalues(&one, 8, mesh).unwrap();
            for (k, v) in vals.iter().enumerate() {
                let exact = discrete_laplacian_eigenvalue(mesh, k + 1);
                assert!((v / exact - 1.0).abs() < 1e-12, "mesh {mesh} k {k}: {v} vs {exact}");
            }
        }
    }

    #[test]
    fn fine_mesh_values_approach_continuum() {
        let one = Density::constant(1.0).unwrap();
        let v = fd_eigenvalues(&one, 2, 1000).unwrap();
        assert!((v[0] - 9.86959).abs() < 1e-5);
        assert!(v[0] < PI * PI && PI * PI - v[0] < 1e-4);
        assert!(v[1] < 4.0 * PI * PI && 4.0 * PI * PI - v[1] < 1e-3);
    }

    #[test]
    fn richardson_cases() {
        assert_eq!(richardson(3.5, 3.5), 3.5);
        let a = discrete_laplacian_eigenvalue(100, 1);
        let b = discrete_laplacian_eigenvalue(200, 1);
        assert!((richardson(a, b) - PI * PI).abs() < 1e-6);
    }

    #[test]
    fn resolution_guard_enforced() {
        let one = Density::constant(1.0).unwrap();
        assert!(matches!(fd_eigenvalues(&one, 8, 63), Err(Error::Resolution { .. })));
        assert!(fd_eigenvalues(&one, 8, 64).is_ok());
    }

    #[test]
    fn sturm_count_is_monotone() {
        let d = Density::linear(1.0, 1.0).unwrap();
        let a = FdProblem::new(&d, 200).unwrap().symmetrized();
        let mut last = 0;
        for i in 0..400 {
            let c = a.sturm_count(i as f64 * 5.0);
            assert!(c >= last);
            last = c;
        }
    }

    #[test]
    fn pencil_is_positive_and_simple() {
        let d = Density::quadratic(-4.0, 4.0, 1.0).unwrap();
        let v = fd_eigenvalues(&d, 10, 400).unwrap();
        assert!(v[0] > 0.0);
        assert!(v.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn flux_form_reduces_to_string_for_unit_p() {
        let one = Density::constant(1.0).unwrap();
        let rho = Density::linear(1.0, 1.0).unwrap();
        let a = flux_fd_eigenvalues(&one, &rho, 4, 500).unwrap();
        let b = fd_eigenvalues(&rho, 4, 500).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x / y - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn eigenvector_zeros_of_unit_density() {
        let one = Density::constant(1.0).unwrap();
        let z = fd_eigenvector_zeros(&one, 3, 300).unwrap();
        assert_eq!(z.len(), 2);
        assert!((z[0] - 1.0 / 3.0).abs() < 1e-6);
        assert!((z[1] - 2.0 / 3.0).abs() < 1e-6);
    }
}
