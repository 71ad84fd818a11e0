//! Eigenvalue derivatives along one-parameter density families.

use super::{integrate_pair, relative_gap, VerificationReport};
use crate::density::{Density, HomotopyFamily};
use crate::error::{domain, Result};
use crate::prufer::{Solver, SolverConfig};

/// Central-difference step in τ.
pub const FD_STEP: f64 = 1e-4;
/// Eigenvalue tolerance for the difference quotients.
pub const FD_REL_TOL: f64 = 1e-13;
pub const KELLER_TOL: f64 = 1e-4;
/// Relative size below which a derivative is compared against this
/// fraction of the eigenvalue (or ratio) instead, so that stationary
/// families are judged by an absolute criterion.
const SCALE_FLOOR: f64 = 1e-3;
/// Below this distance to the domain edge the difference becomes one-sided.
const MIN_STEP: f64 = 1e-6;

/// An analytic derivative next to its difference-quotient estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Derivative {
    pub formula: f64,
    pub fd: f64,
    /// Step actually used (smaller than [`FD_STEP`] near the domain edge).
    pub step: f64,
    pub one_sided: bool,
    /// Magnitude used to turn the discrepancy into a relative error.
    pub scale: f64,
}

impl Derivative {
    pub fn relative_error(&self) -> f64 {
        relative_gap(self.formula, self.fd, self.scale)
    }

    pub fn report(&self, claim: &str, digest: String) -> VerificationReport {
        VerificationReport::new(claim, digest, -self.relative_error(), KELLER_TOL)
    }
}

/// Second-order difference quotients of the vector-valued `g` at `tau`
/// that stay inside `[lo, hi]`: central with the largest admissible step
/// up to [`FD_STEP`], otherwise the three-point one-sided formula.
fn difference<G>(g: G, tau: f64, (lo, hi): (f64, f64)) -> Result<(Vec<f64>, f64, bool)>
where
    G: Fn(f64) -> Result<Vec<f64>>,
{
    let combine = |parts: &[(f64, Vec<f64>)], h: f64| -> Vec<f64> {
        (0..parts[0].1.len())
            .map(|i| parts.iter().map(|(w, v)| w * v[i]).sum::<f64>() / h)
            .collect()
    };
    let room = (tau - lo).min(hi - tau);
    if room >= MIN_STEP {
        let h = if room >= FD_STEP { FD_STEP } else { 0.5 * room };
        let parts = [(1.0, g(tau + h)?), (-1.0, g(tau - h)?)];
        return Ok((combine(&parts, 2.0 * h), h, false));
    }
    let h = FD_STEP;
    let dir = if tau - lo < hi - tau { 1.0 } else { -1.0 };
    if !(hi - lo > 2.0 * h) {
        return domain(format!("family domain [{lo}, {hi}] is too short to differentiate"));
    }
    let parts = [
        (-3.0 * dir, g(tau)?),
        (4.0 * dir, g(tau + dir * h)?),
        (-dir, g(tau + 2.0 * dir * h)?),
    ];
    Ok((combine(&parts, 2.0 * h), h, true))
}

fn check_tau(f: &HomotopyFamily, tau: f64) -> Result<()> {
    if !f.contains(tau) {
        let (lo, hi) = f.domain();
        return domain(format!("τ = {tau} outside the family domain [{lo}, {hi}]"));
    }
    Ok(())
}

/// Eigenvalue and ratio derivatives for indices `1..=n_max` at one τ.
/// `keller[n − 1]` is `dλₙ/dτ`; `ratio[n − 2]` is `d(λₙ/λ_{n−1})/dτ`.
#[derive(Clone, Debug)]
pub struct DerivativeSet {
    pub keller: Vec<Derivative>,
    pub ratio: Vec<Derivative>,
}

/// Both derivative kinds for every index up to `n_max`, sharing the
/// eigenpairs at τ and the fine eigenvalues at the difference stencil.
///
/// `dλₙ/dτ = −λₙ ∫ ∂ρ/∂τ uₙ² dx` and
/// `d/dτ [λₙ/λₘ] = (λₙ/λₘ) ∫ ∂ρ/∂τ (uₘ² − uₙ²) dx`.
pub fn derivatives_at(f: &HomotopyFamily, tau: f64, n_max: usize, config: &SolverConfig) -> Result<DerivativeSet> {
    check_tau(f, tau)?;
    let d = f.blend(tau)?;
    let pairs = Solver::new(*config).spectrum(&d, n_max)?.pairs;
    let kinks = d.breakpoints();
    let fine = Solver::new(config.with_rel_tol(FD_REL_TOL));
    let (fd, step, one_sided) = difference(|t| fine.eigenvalues(&f.blend(t)?, n_max), tau, f.domain())?;

    let mut keller = Vec::with_capacity(n_max);
    for (pair, &fd) in pairs.iter().zip(&fd) {
        let weighted = integrate_pair(pair, &kinks, |x, y, _| f.partial_tau(x) * y * y);
        let absolute = integrate_pair(pair, &kinks, |x, y, _| f.partial_tau(x).abs() * y * y);
        let formula = -pair.lambda * weighted.value;
        keller.push(Derivative {
            formula,
            fd,
            step,
            one_sided,
            scale: formula
                .abs()
                .max(fd.abs())
                .max(pair.lambda * absolute.value.max(SCALE_FLOOR)),
        });
    }

    let mut ratio = Vec::with_capacity(n_max.saturating_sub(1));
    for w in pairs.windows(2) {
        let (pm, pn) = (&w[0], &w[1]);
        let (im, i_n) = (pm.index - 1, pn.index - 1);
        let q = pn.lambda / pm.lambda;
        let lower = |x: f64| {
            let (ym, _) = pm.eval(x);
            ym * ym
        };
        let signed = integrate_pair(pn, &kinks, |x, y, _| f.partial_tau(x) * (lower(x) - y * y));
        let absolute = integrate_pair(pn, &kinks, |x, y, _| f.partial_tau(x).abs() * (lower(x) + y * y));
        let formula = q * signed.value;
        // Quotient rule on the shared eigenvalue derivatives.
        let (lm, ln) = (pm.lambda, pn.lambda);
        let fd = (fd[i_n] * lm - ln * fd[im]) / (lm * lm);
        ratio.push(Derivative {
            formula,
            fd,
            step,
            one_sided,
            scale: formula.abs().max(fd.abs()).max(q * absolute.value.max(SCALE_FLOOR)),
        });
    }
    Ok(DerivativeSet { keller, ratio })
}

/// `dλₙ/dτ` next to its difference quotient.
pub fn keller_derivative(f: &HomotopyFamily, tau: f64, n: usize, config: &SolverConfig) -> Result<Derivative> {
    Ok(derivatives_at(f, tau, n, config)?.keller[n - 1])
}

/// `d/dτ [λₙ/λ_{n−1}]` next to its difference quotient.
pub fn ratio_derivative(f: &HomotopyFamily, tau: f64, n: usize, config: &SolverConfig) -> Result<Derivative> {
    if n < 2 {
        return domain(format!("ratio derivative needs n >= 2, got {n}"));
    }
    Ok(derivatives_at(f, tau, n, config)?.ratio[n - 2])
}

/// Keller and ratio-derivative agreement rows for one family.
pub fn derivative_rows(
    f: &HomotopyFamily,
    digest: &str,
    taus: &[f64],
    n_max: usize,
    config: &SolverConfig,
) -> Result<Vec<VerificationReport>> {
    let mut rows = Vec::new();
    for &tau in taus {
        let set = derivatives_at(f, tau, n_max, config)?;
        for (i, k) in set.keller.iter().enumerate() {
            rows.push(k.report("keller", digest.to_string()).with_n(i + 1).with_tau(tau));
        }
        for (i, r) in set.ratio.iter().enumerate() {
            rows.push(
                r.report("ratio_derivative", digest.to_string())
                    .with_n(i + 2)
                    .with_m(i + 1)
                    .with_tau(tau),
            );
        }
    }
    Ok(rows)
}

/// The family from the uniform string to `rho`.
pub fn from_uniform(rho: &Density) -> HomotopyFamily {
    let unit = Density::constant(1.0).expect("unit density");
    HomotopyFamily::affine(unit, rho.clone())
}
