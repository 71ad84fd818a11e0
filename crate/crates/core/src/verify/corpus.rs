//! Fixed and seeded test densities.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::density::Density;
use crate::error::Result;

pub const DEFAULT_SEED: u64 = 42;
pub const RANDOM_CONCAVE_COUNT: usize = 200;
pub const RANDOM_PAIR_COUNT: usize = 20;

/// Largest number of knots (endpoints included) in a random density.
const MAX_KNOTS: usize = 6;

/// Named densities covering every base kind, in and out of the concave class.
pub fn named() -> Vec<(&'static str, Density)> {
    let pl = |k: &[f64], v: &[f64]| Density::piecewise_linear(k.to_vec(), v.to_vec());
    let build = || -> Result<Vec<(&'static str, Density)>> {
        Ok(vec![
            ("unit", Density::constant(1.0)?),
            ("heavy", Density::constant(2.0)?),
            ("light", Density::constant(0.5)?),
            ("ramp_up", Density::linear(1.0, 1.0)?),
            ("ramp_down", Density::linear(-1.0, 2.0)?),
            ("gentle_ramp", Density::linear(0.2, 1.0)?),
            ("steep_ramp", Density::linear(3.0, 1.0)?),
            ("thin_ramp", Density::linear(1.0, 0.1)?),
            ("bump", Density::quadratic(-4.0, 4.0, 1.0)?),
            ("low_bump", Density::quadratic(-1.0, 1.0, 1.0)?),
            ("lifted_bump", Density::quadratic(-1.0, 1.0, 2.0)?),
            ("skew_bump", Density::quadratic(-1.5, 2.0, 1.0)?),
            ("well", Density::quadratic(4.0, -4.0, 2.0)?),
            ("half_parabola", Density::quadratic(1.0, 0.0, 1.0)?),
            ("shallow_well", Density::quadratic(2.0, -2.0, 2.0)?),
            ("tent", pl(&[0.0, 0.5, 1.0], &[1.0, 2.0, 1.0])?),
            ("plateau", pl(&[0.0, 0.25, 0.75, 1.0], &[1.0, 1.5, 1.5, 1.0])?),
            ("ridge", pl(&[0.0, 0.125, 0.5, 1.0], &[1.0, 1.5, 1.75, 1.25])?),
            ("valley", pl(&[0.0, 0.5, 1.0], &[2.0, 1.0, 2.0])?),
            ("step", pl(&[0.0, 0.375, 0.625, 1.0], &[1.0, 1.0, 2.0, 2.0])?),
            (
                "opposed_ramps",
                Density::product(vec![Density::linear(1.0, 1.0)?, Density::linear(-1.0, 2.0)?])?,
            ),
        ])
    };
    build().expect("named corpus densities are valid")
}

/// Concave piecewise-linear densities with knots on multiples of 1/8.
///
/// Interior knots are a random subset of `{1/8, …, 7/8}`; slopes are drawn
/// and sorted in decreasing order, and the values are lifted when needed so
/// the minimum lies in `[0.1, 2]`.
pub fn random_concave(count: usize, seed: u64) -> Vec<Density> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let interior = rng.random_range(0..=MAX_KNOTS - 2);
            let mut slots: Vec<u32> = (1..8).collect();
            let mut knots = vec![0.0, 1.0];
            for _ in 0..interior {
                let j = rng.random_range(0..slots.len());
                knots.push(slots.swap_remove(j) as f64 / 8.0);
            }
            knots.sort_by(f64::total_cmp);

            let mut slopes: Vec<f64> = (1..knots.len()).map(|_| rng.random_range(-3.0..3.0)).collect();
            slopes.sort_by(|a, b| b.total_cmp(a));
            let mut values = vec![0.0];
            for (w, s) in knots.windows(2).zip(&slopes) {
                let last = values[values.len() - 1];
                values.push(last + s * (w[1] - w[0]));
            }
            let low = values.iter().copied().fold(f64::INFINITY, f64::min);
            let lift = rng.random_range(0.1..2.0) - low;
            for v in &mut values {
                *v += lift;
            }
            Density::piecewise_linear(knots, values).expect("lifted values are positive")
        })
        .collect()
}

/// Random positive coefficient pairs `(p, ρ)`.
///
/// Even-indexed pairs take linear `p` and `ρ` with opposite slopes, so `pρ`
/// is concave; odd-indexed pairs use a linear `p` and a quadratic `ρ` of
/// either convexity. Values of `p` straddle 1 so that `σ` takes both sides.
pub fn random_pairs(count: usize, seed: u64) -> Vec<(Density, Density)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_5eed);
    (0..count)
        .map(|i| {
            let p0 = rng.random_range(0.4..2.0);
            let p1 = rng.random_range(0.4..2.0);
            let p = Density::linear(p1 - p0, p0).expect("positive endpoints");
            let rho = if i % 2 == 0 {
                let r0: f64 = rng.random_range(0.5..2.0);
                let delta = rng.random_range(0.1..1.5);
                let r1 = if p1 >= p0 { (r0 - delta).max(0.2) } else { r0 + delta };
                Density::linear(r1 - r0, r0).expect("positive endpoints")
            } else {
                let a = rng.random_range(-2.0..2.0);
                let c = rng.random_range(1.0..2.0);
                Density::quadratic(a, -a, c + a.abs() / 4.0).expect("positive on [0, 1]")
            };
            (p, rho)
        })
        .collect()
}

/// Pairs with closed-form or textbook reference behaviour.
pub fn named_pairs() -> Vec<(&'static str, Density, Density)> {
    let c = |v| Density::constant(v).expect("positive constant");
    vec![
        ("unit_pair", c(1.0), c(1.0)),
        ("stiff_pair", c(4.0), c(1.0)),
        ("ramp_stiffness", Density::linear(1.0, 1.0).expect("positive"), c(1.0)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::CONCAVITY_TOL;

    #[test]
    fn named_corpus_is_large_enough() {
        let corpus = named();
        assert!(corpus.len() >= 20);
        assert!(corpus.iter().any(|(_, d)| !d.is_concave(CONCAVITY_TOL)));
    }

    #[test]
    fn random_densities_are_concave_and_reproducible() {
        let a = random_concave(50, 7);
        let b = random_concave(50, 7);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.to_string(), y.to_string());
            assert!(x.is_concave(CONCAVITY_TOL));
            assert!(x.floor() >= 0.1 - 1e-12);
            assert!(x.breakpoints().len() <= MAX_KNOTS - 2);
            for k in x.breakpoints() {
                assert_eq!((k * 8.0).fract(), 0.0);
            }
        }
        assert_ne!(random_concave(1, 1)[0].to_string(), random_concave(1, 2)[0].to_string());
    }

    #[test]
    fn even_pairs_have_concave_product() {
        for (i, (p, rho)) in random_pairs(10, DEFAULT_SEED).iter().enumerate() {
            let prod = Density::product(vec![p.clone(), rho.clone()]).unwrap();
            if i % 2 == 0 {
                assert!(prod.is_concave(CONCAVITY_TOL), "pair {i}: {prod}");
            }
        }
    }
}
