//! Runs selected claims over sets of densities and merges the rows.

use std::f64::consts::PI;
use std::time::Instant;

use super::bounds::{gap_rows, ratio_rows};
use super::crossing::{analyse, crossing_rows, interlacing_check};
use super::homotopy::{homotopy_monotonicity, slope_rows, slope_taus};
use super::identity::identity_rows;
use super::keller::{derivative_rows, from_uniform, keller_derivative};
use super::report::sort_reports;
use super::structure::structure_rows;
use super::{corpus, sl, VerificationReport, VerifyConfig};
use crate::density::{Density, HomotopyFamily};
use crate::error::Result;
use crate::exec;
use crate::prufer::{Solver, Spectrum};

/// Parameter values at which derivative formulas are checked.
pub const KELLER_TAUS: [f64; 3] = [0.25, 0.5, 0.75];
/// Intercepts of the linear family `τx + b`.
pub const SLOPE_INTERCEPTS: [f64; 3] = [0.5, 1.0, 2.0];
/// Highest index used by the derivative, identity, crossing and
/// transform checks.
const DETAIL_MAX: usize = 5;
/// Highest index used by the homotopy sweeps.
const SWEEP_MAX: usize = 4;
pub const CLOSED_FORM_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, clap::ValueEnum)]
pub enum Claim {
    Ratio,
    Gap,
    Keller,
    Identity,
    Crossings,
    Homotopy,
    Interlacing,
    Structure,
    Sl,
    All,
}

impl Claim {
    pub const EACH: [Claim; 9] = [
        Claim::Ratio,
        Claim::Gap,
        Claim::Keller,
        Claim::Identity,
        Claim::Crossings,
        Claim::Homotopy,
        Claim::Interlacing,
        Claim::Structure,
        Claim::Sl,
    ];

    fn expand(self) -> Vec<Claim> {
        if self == Claim::All {
            Self::EACH.to_vec()
        } else {
            vec![self]
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Suite {
    pub config: VerifyConfig,
}

impl Suite {
    pub fn new(config: VerifyConfig) -> Self {
        Self { config }
    }

    /// Named densities followed by the seeded random concave ones.
    pub fn default_densities(&self) -> Vec<Density> {
        let mut all: Vec<Density> = corpus::named().into_iter().map(|(_, d)| d).collect();
        all.extend(corpus::random_concave(corpus::RANDOM_CONCAVE_COUNT, self.config.seed));
        all
    }

    pub fn default_pairs(&self) -> Vec<(Density, Density)> {
        let mut all: Vec<_> = corpus::named_pairs().into_iter().map(|(_, p, r)| (p, r)).collect();
        all.extend(corpus::random_pairs(corpus::RANDOM_PAIR_COUNT, self.config.seed));
        all
    }

    /// Rows for `claim` over `densities` (and `pairs` for the transform
    /// claim), sorted. Claims that do not depend on an input density (the
    /// linear-family sweeps and closed forms) are added once.
    pub fn run(
        &self,
        claim: Claim,
        densities: &[Density],
        pairs: &[(Density, Density)],
    ) -> Result<Vec<VerificationReport>> {
        let claims = claim.expand();
        let per_density = exec::try_map(densities, |d| self.density_rows(d, &claims))?;
        let mut rows: Vec<VerificationReport> = per_density.into_iter().flatten().collect();
        if claims.contains(&Claim::Keller) {
            rows.extend(self.timed(|| self.keller_closed_forms())?);
        }
        if claims.contains(&Claim::Homotopy) {
            rows.extend(self.timed(|| self.slope_sweeps())?);
        }
        if claims.contains(&Claim::Sl) {
            let n_max = self.config.n_max.min(DETAIL_MAX);
            let sl = exec::try_map(pairs, |(p, r)| {
                self.timed(|| sl::sl_rows(p, r, n_max, &self.config.solver, self.config.meshes))
            })?;
            rows.extend(sl.into_iter().flatten());
        }
        sort_reports(&mut rows);
        Ok(rows)
    }

    fn timed<F>(&self, f: F) -> Result<Vec<VerificationReport>>
    where
        F: FnOnce() -> Result<Vec<VerificationReport>>,
    {
        let start = Instant::now();
        let rows = f()?;
        let ms = start.elapsed().as_secs_f64() * 1e3;
        Ok(rows.into_iter().map(|r| r.with_runtime(ms)).collect())
    }

    fn density_rows(&self, d: &Density, claims: &[Claim]) -> Result<Vec<VerificationReport>> {
        let cfg = &self.config;
        let solver = Solver::new(cfg.solver);
        let needs_spectrum = claims.iter().any(|c| {
            matches!(
                c,
                Claim::Ratio | Claim::Gap | Claim::Identity | Claim::Crossings | Claim::Interlacing | Claim::Structure
            )
        });
        let start = Instant::now();
        let spectrum = if needs_spectrum {
            Some(solver.spectrum(d, cfg.n_max)?)
        } else {
            None
        };
        let setup_ms = start.elapsed().as_secs_f64() * 1e3;

        let mut rows = Vec::new();
        for &claim in claims {
            let start = Instant::now();
            let mut chunk = match (claim, &spectrum) {
                (Claim::Ratio, Some(s)) => ratio_rows(d, &s.lambdas()),
                (Claim::Gap, Some(s)) => gap_rows(d, &s.lambdas()),
                (Claim::Identity, Some(s)) => identity_rows(d, detail(s)),
                (Claim::Crossings, Some(s)) => detail(s)
                    .windows(2)
                    .flat_map(|w| crossing_rows(d, &analyse(&w[0], &w[1])))
                    .collect(),
                (Claim::Interlacing, Some(s)) => vec![interlacing_check(s)],
                (Claim::Structure, Some(s)) => structure_rows(s, &cfg.solver, cfg.meshes)?,
                (Claim::Keller, _) => derivative_rows(
                    &from_uniform(d),
                    &d.digest(),
                    &KELLER_TAUS,
                    cfg.n_max.min(DETAIL_MAX),
                    &cfg.solver,
                )?,
                (Claim::Homotopy, _) => {
                    let mut out = Vec::new();
                    for n in 2..=cfg.n_max.min(SWEEP_MAX) {
                        out.extend(homotopy_monotonicity(d, n, cfg.tau_steps, &cfg.solver)?.rows());
                    }
                    out
                }
                _ => Vec::new(),
            };
            let ms = start.elapsed().as_secs_f64() * 1e3 + if needs_spectrum { setup_ms } else { 0.0 };
            for r in &mut chunk {
                r.runtime_ms = Some(ms);
            }
            rows.extend(chunk);
        }
        Ok(rows)
    }

    /// `keller_closed_form`: for `ρ = τx + b` at τ = 0 the derivative is
    /// `−n²π²/(2b²)`.
    fn keller_closed_forms(&self) -> Result<Vec<VerificationReport>> {
        let mut rows = Vec::new();
        for b in SLOPE_INTERCEPTS {
            let family = HomotopyFamily::slope(b)?;
            let digest = family.blend(0.0)?.digest();
            for n in 1..=self.config.n_max.min(DETAIL_MAX) {
                let k = keller_derivative(&family, 0.0, n, &self.config.solver)?;
                let exact = -(n as f64 * PI).powi(2) / (2.0 * b * b);
                let err = ((k.formula - exact) / exact).abs();
                rows.push(
                    VerificationReport::new("keller_closed_form", digest.clone(), -err, CLOSED_FORM_TOL)
                        .with_n(n)
                        .with_tau(0.0),
                );
            }
        }
        Ok(rows)
    }

    fn slope_sweeps(&self) -> Result<Vec<VerificationReport>> {
        let taus = slope_taus();
        let mut rows = Vec::new();
        for b in SLOPE_INTERCEPTS {
            for n in 2..=self.config.n_max.min(SWEEP_MAX) {
                rows.extend(slope_rows(b, n, &taus, &self.config.solver)?);
            }
        }
        Ok(rows)
    }
}

fn detail(s: &Spectrum) -> &[crate::prufer::Eigenpair] {
    &s.pairs[..s.pairs.len().min(DETAIL_MAX)]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> Suite {
        Suite::new(VerifyConfig {
            n_max: 3,
            tau_steps: 5,
            meshes: (400, 800),
            ..VerifyConfig::default()
        })
    }

    #[test]
    fn all_claims_pass_on_uniform_and_ramp() {
        let ds = vec![Density::constant(1.0).unwrap(), Density::linear(1.0, 1.0).unwrap()];
        let pairs = vec![(Density::constant(1.0).unwrap(), Density::constant(2.0).unwrap())];
        let rows = small().run(Claim::All, &ds, &pairs).unwrap();
        let bad: Vec<_> = rows.iter().filter(|r| r.is_violation()).collect();
        assert!(bad.is_empty(), "{bad:#?}");
        for claim in [
            "ratio",
            "gap",
            "keller",
            "keller_closed_form",
            "huang_identity_g2",
            "crossing_total",
            "homotopy_monotone",
            "slope_ratio_increasing",
            "interlacing",
            "wronskian",
            "sl_gap",
        ] {
            assert!(rows.iter().any(|r| r.claim == claim), "missing {claim}");
        }
    }

    #[test]
    fn rows_are_sorted_and_deterministic() {
        let ds = vec![Density::linear(-1.0, 2.0).unwrap(), Density::constant(1.0).unwrap()];
        let a = small().run(Claim::Ratio, &ds, &[]).unwrap();
        let b = small().run(Claim::Ratio, &ds, &[]).unwrap();
        let strip = |v: &[VerificationReport]| {
            v.iter()
                .map(|r| (r.claim.clone(), r.density_digest.clone(), r.margin))
                .collect::<Vec<_>>()
        };
        assert_eq!(strip(&a), strip(&b));
        assert!(a
            .windows(2)
            .all(|w| (&w[0].claim, &w[0].density_digest) <= (&w[1].claim, &w[1].density_digest)));
    }

    #[test]
    fn default_corpus_sizes() {
        let s = Suite::default();
        assert_eq!(
            s.default_densities().len(),
            corpus::named().len() + corpus::RANDOM_CONCAVE_COUNT
        );
        assert_eq!(s.default_pairs().len(), 3 + corpus::RANDOM_PAIR_COUNT);
    }
}
