//! Composite Simpson quadrature with a one-level refinement error estimate.

/// Integral value together with the magnitude of the change under one
/// grid-halving.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

impl Estimate {
    /// The larger of `target` and twice the refinement delta.
    pub fn tolerance(&self, target: f64) -> f64 {
        target.max(2.0 * self.error)
    }
}

/// Composite Simpson rule on uniformly spaced samples.
///
/// `values.len()` must be odd and at least 3.
pub fn simpson(values: &[f64], h: f64) -> f64 {
    let len = values.len();
    assert!(
        len >= 3 && len % 2 == 1,
        "simpson needs an odd number (>= 3) of samples, got {len}"
    );
    let mut odd = 0.0;
    let mut even = 0.0;
    for (i, v) in values.iter().enumerate().take(len - 1).skip(1) {
        if i % 2 == 1 {
            odd += v;
        } else {
            even += v;
        }
    }
    h / 3.0 * (values[0] + values[len - 1] + 4.0 * odd + 2.0 * even)
}

fn trapezoid(values: &[f64], h: f64) -> f64 {
    let len = values.len();
    let inner: f64 = values[1..len - 1].iter().sum();
    h * (0.5 * (values[0] + values[len - 1]) + inner)
}

/// Simpson on all samples, compared against Simpson on every other sample.
///
/// When the sample count does not allow a half grid, the trapezoid rule is
/// used as the coarse companion instead (a more pessimistic estimate).
pub fn simpson_refined(values: &[f64], h: f64) -> Estimate {
    let value = simpson(values, h);
    let len = values.len();
    let coarse = if (len - 1).is_multiple_of(4) {
        let half: Vec<f64> = values.iter().step_by(2).copied().collect();
        simpson(&half, 2.0 * h)
    } else {
        trapezoid(values, h)
    };
    Estimate {
        value,
        error: (value - coarse).abs(),
    }
}

/// Composite Simpson of `f` over `[a, b]` with at least `intervals`
/// subintervals (rounded up to a multiple of four so the estimate can halve).
pub fn simpson_fn<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, intervals: usize) -> Estimate {
    let m = intervals.max(4).div_ceil(4) * 4;
    let h = (b - a) / m as f64;
    let values: Vec<f64> = (0..=m)
        .map(|i| {
            let x = if i == m { b } else { a + i as f64 * h };
            f(x)
        })
        .collect();
    simpson_refined(&values, h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn exact_for_cubics() {
        let h = 0.25;
        let v: Vec<f64> = (0..=4).map(|i| (i as f64 * h).powi(3)).collect();
        assert!((simpson(&v, h) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn sine_square_converges() {
        let e = simpson_fn(|x| (PI * x).sin().powi(2), 0.0, 1.0, 64);
        assert!((e.value - 0.5).abs() < 1e-12);
        assert!(e.tolerance(1e-10) >= 1e-10);
    }

    #[test]
    fn refinement_delta_tracks_error() {
        let e = simpson_fn(|x| (7.0 * x).exp(), 0.0, 1.0, 8);
        let exact = ((7.0f64).exp() - 1.0) / 7.0;
        let err = (e.value - exact).abs();
        assert!(err > 0.0 && err < e.error);
    }

    #[test]
    #[should_panic]
    fn even_sample_count_rejected() {
        simpson(&[1.0, 2.0], 0.5);
    }
}
