//! Positive coefficient functions on `[0, 1]`.
//!
//! A [`Density`] is a closed-form object evaluated on demand. The base kinds
//! (constant, linear, quadratic, continuous piecewise-linear, product) are the
//! ones a user can write down in JSON; the derived kinds (blend, scaled,
//! reflected, reparameterized) are produced by operations in this crate and
//! are never parsed.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{domain, Error, Result};
use crate::transform::CoordinateMap;

/// Smallest admissible infimum of a density.
pub const MIN_FLOOR: f64 = 1e-8;

/// Default slack for the sampled midpoint concavity test.
pub const CONCAVITY_TOL: f64 = 1e-10;

const EXTREMA_SAMPLES: usize = 1024;
const CONCAVITY_SAMPLES: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityKind {
    Constant,
    Linear,
    Quadratic,
    PiecewiseLinear,
    Product,
    Blend,
    Scaled,
    Reflected,
    Reparameterized,
}

#[derive(Clone, Debug)]
enum Shape {
    Constant(f64),
    Linear {
        slope: f64,
        intercept: f64,
    },
    Quadratic {
        a: f64,
        b: f64,
        c: f64,
    },
    PiecewiseLinear {
        knots: Vec<f64>,
        values: Vec<f64>,
    },
    Product(Vec<Density>),
    Blend {
        start: Arc<Density>,
        end: Arc<Density>,
        tau: f64,
    },
    Scaled {
        factor: f64,
        inner: Arc<Density>,
    },
    Reflected(Arc<Density>),
    Reparameterized {
        inner: Arc<Density>,
        map: Arc<CoordinateMap>,
    },
}

/// A continuous function on `[0, 1]` bounded below by a positive floor.
#[derive(Clone, Debug)]
pub struct Density {
    shape: Shape,
    floor: f64,
    peak: f64,
}

impl Density {
    pub fn constant(c: f64) -> Result<Self> {
        Self::finalize(Shape::Constant(c), c, c)
    }

    /// `slope * x + intercept`.
    pub fn linear(slope: f64, intercept: f64) -> Result<Self> {
        let (lo, hi) = minmax(intercept, intercept + slope);
        Self::finalize(Shape::Linear { slope, intercept }, lo, hi)
    }

    /// `a x² + b x + c`.
    pub fn quadratic(a: f64, b: f64, c: f64) -> Result<Self> {
        let f = |x: f64| (a * x + b) * x + c;
        let (mut lo, mut hi) = minmax(f(0.0), f(1.0));
        if a != 0.0 {
            let vertex = -b / (2.0 * a);
            if vertex > 0.0 && vertex < 1.0 {
                let v = f(vertex);
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
        Self::finalize(Shape::Quadratic { a, b, c }, lo, hi)
    }

    /// Continuous piecewise-linear interpolant through `(knots[i], values[i])`.
    pub fn piecewise_linear(knots: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if knots.len() != values.len() {
            return domain(format!("{} knots but {} values", knots.len(), values.len()));
        }
        if knots.len() < 2 {
            return domain("piecewise-linear density needs at least two knots");
        }
        if knots[0] != 0.0 || knots[knots.len() - 1] != 1.0 {
            return domain("knots must start at 0 and end at 1");
        }
        if knots.windows(2).any(|w| w[1] <= w[0]) {
            return domain("knots must be strictly increasing");
        }
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Self::finalize(Shape::PiecewiseLinear { knots, values }, lo, hi)
    }

    /// Pointwise product of positive factors.
    pub fn product(factors: Vec<Density>) -> Result<Self> {
        if factors.is_empty() {
            return domain("product needs at least one factor");
        }
        Self::sampled(Shape::Product(factors))
    }

    /// `(1 - tau) * start + tau * end` for `tau` in `[0, 1]`.
    pub fn blend(start: &Density, end: &Density, tau: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&tau) {
            return domain(format!("blend parameter {tau} outside [0, 1]"));
        }
        Self::sampled(Shape::Blend {
            start: Arc::new(start.clone()),
            end: Arc::new(end.clone()),
            tau,
        })
    }

    /// `factor * self`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0) || !factor.is_finite() {
            return domain(format!("scale factor {factor} must be positive"));
        }
        Self::finalize(
            Shape::Scaled {
                factor,
                inner: Arc::new(self.clone()),
            },
            factor * self.floor,
            factor * self.peak,
        )
    }

    /// `x ↦ self(1 - x)`.
    pub fn reflected(&self) -> Self {
        Self {
            shape: Shape::Reflected(Arc::new(self.clone())),
            floor: self.floor,
            peak: self.peak,
        }
    }

    /// `t ↦ inner(x(t))` for the inverse coordinate of a Legendre map.
    pub(crate) fn reparameterized(inner: Density, map: Arc<CoordinateMap>) -> Result<Self> {
        let (floor, peak) = (inner.floor, inner.peak);
        Self::finalize(
            Shape::Reparameterized {
                inner: Arc::new(inner),
                map,
            },
            floor,
            peak,
        )
    }

    fn sampled(shape: Shape) -> Result<Self> {
        let mut d = Self {
            shape,
            floor: f64::NAN,
            peak: f64::NAN,
        };
        let (lo, hi) = extrema(|x| d.value(x), &d.breakpoints());
        d.floor = lo;
        d.peak = hi;
        Self::finalize(d.shape, lo, hi)
    }

    fn finalize(shape: Shape, floor: f64, peak: f64) -> Result<Self> {
        if !floor.is_finite() || !peak.is_finite() {
            return domain("density has non-finite values");
        }
        if floor < MIN_FLOOR {
            return domain(format!(
                "density infimum {floor:e} is below the admissible floor {MIN_FLOOR:e}"
            ));
        }
        Ok(Self { shape, floor, peak })
    }

    pub fn kind(&self) -> DensityKind {
        match self.shape {
            Shape::Constant(_) => DensityKind::Constant,
            Shape::Linear { .. } => DensityKind::Linear,
            Shape::Quadratic { .. } => DensityKind::Quadratic,
            Shape::PiecewiseLinear { .. } => DensityKind::PiecewiseLinear,
            Shape::Product(_) => DensityKind::Product,
            Shape::Blend { .. } => DensityKind::Blend,
            Shape::Scaled { .. } => DensityKind::Scaled,
            Shape::Reflected(_) => DensityKind::Reflected,
            Shape::Reparameterized { .. } => DensityKind::Reparameterized,
        }
    }

    /// Infimum over `[0, 1]`.
    pub fn floor(&self) -> f64 {
        self.floor
    }

    /// Maximum over `[0, 1]`.
    pub fn peak(&self) -> f64 {
        self.peak
    }

    /// `(max - min) / min`.
    pub fn relative_variation(&self) -> f64 {
        (self.peak - self.floor) / self.floor
    }

    pub fn is_constant(&self) -> bool {
        match &self.shape {
            Shape::Constant(_) => true,
            Shape::Linear { slope, .. } => *slope == 0.0,
            Shape::Quadratic { a, b, .. } => *a == 0.0 && *b == 0.0,
            Shape::PiecewiseLinear { values, .. } => values.iter().all(|v| *v == values[0]),
            _ => self.peak - self.floor <= 1e-14 * self.peak,
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        match &self.shape {
            Shape::Constant(c) => *c,
            Shape::Linear { slope, intercept } => slope * x + intercept,
            Shape::Quadratic { a, b, c } => (a * x + b) * x + c,
            Shape::PiecewiseLinear { knots, values } => {
                let i = piece_index(knots, x);
                let s = (x - knots[i]) / (knots[i + 1] - knots[i]);
                values[i] + s * (values[i + 1] - values[i])
            }
            Shape::Product(factors) => factors.iter().map(|f| f.value(x)).product(),
            Shape::Blend { start, end, tau } => (1.0 - tau) * start.value(x) + tau * end.value(x),
            Shape::Scaled { factor, inner } => factor * inner.value(x),
            Shape::Reflected(inner) => inner.value(1.0 - x),
            Shape::Reparameterized { inner, map } => inner.value(map.x_of_t(t_clamp(x))),
        }
    }

    /// First derivative. At a kink of a piecewise kind this is the slope of
    /// the piece to the right (to the left at `x = 1`).
    pub fn derivative(&self, x: f64) -> f64 {
        match &self.shape {
            Shape::Constant(_) => 0.0,
            Shape::Linear { slope, .. } => *slope,
            Shape::Quadratic { a, b, .. } => 2.0 * a * x + b,
            Shape::PiecewiseLinear { knots, values } => {
                let i = piece_index(knots, x);
                (values[i + 1] - values[i]) / (knots[i + 1] - knots[i])
            }
            Shape::Product(factors) => {
                let vals: Vec<f64> = factors.iter().map(|f| f.value(x)).collect();
                factors
                    .iter()
                    .enumerate()
                    .map(|(i, f)| {
                        let others: f64 = vals
                            .iter()
                            .enumerate()
                            .filter(|(j, _)| *j != i)
                            .map(|(_, v)| v)
                            .product();
                        f.derivative(x) * others
                    })
                    .sum()
            }
            Shape::Blend { start, end, tau } => (1.0 - tau) * start.derivative(x) + tau * end.derivative(x),
            Shape::Scaled { factor, inner } => factor * inner.derivative(x),
            Shape::Reflected(inner) => -inner.derivative(1.0 - x),
            Shape::Reparameterized { inner, map } => {
                let xi = map.x_of_t(t_clamp(x));
                inner.derivative(xi) * map.dx_dt(xi)
            }
        }
    }

    /// Interior points where the derivative may jump, sorted and deduplicated.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut pts = match &self.shape {
            Shape::Constant(_) | Shape::Linear { .. } | Shape::Quadratic { .. } => Vec::new(),
            Shape::PiecewiseLinear { knots, .. } => knots[1..knots.len() - 1].to_vec(),
            Shape::Product(factors) => factors.iter().flat_map(|f| f.breakpoints()).collect(),
            Shape::Blend { start, end, .. } => {
                let mut v = start.breakpoints();
                v.extend(end.breakpoints());
                v
            }
            Shape::Scaled { inner, .. } => inner.breakpoints(),
            Shape::Reflected(inner) => inner.breakpoints().iter().map(|k| 1.0 - k).collect(),
            Shape::Reparameterized { inner, map } => inner.breakpoints().iter().map(|&k| map.t_of_x(k)).collect(),
        };
        pts.retain(|&p| p > 0.0 && p < 1.0);
        pts.sort_by(f64::total_cmp);
        pts.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
        pts
    }

    /// True when `value` is C¹ on `[0, 1]`.
    pub fn is_smooth(&self) -> bool {
        self.breakpoints().is_empty()
    }

    /// Concavity test. Piecewise-linear densities use the exact
    /// non-increasing slope test; smooth parametric kinds are decided in
    /// closed form; everything else falls back to a dense midpoint sample
    /// with slack `tol`.
    pub fn is_concave(&self, tol: f64) -> bool {
        match &self.shape {
            Shape::Constant(_) | Shape::Linear { .. } => true,
            Shape::Quadratic { a, .. } => *a <= 0.0,
            Shape::PiecewiseLinear { knots, values } => {
                let slopes: Vec<f64> = knots
                    .windows(2)
                    .zip(values.windows(2))
                    .map(|(k, v)| (v[1] - v[0]) / (k[1] - k[0]))
                    .collect();
                slopes.windows(2).all(|s| s[1] <= s[0])
            }
            Shape::Scaled { inner, .. } | Shape::Reflected(inner) => inner.is_concave(tol),
            Shape::Blend { start, end, .. } if start.is_concave(tol) && end.is_concave(tol) => true,
            _ => self.midpoint_concave(tol),
        }
    }

    fn midpoint_concave(&self, tol: f64) -> bool {
        let mut xs: Vec<f64> = (0..=CONCAVITY_SAMPLES)
            .map(|i| i as f64 / CONCAVITY_SAMPLES as f64)
            .collect();
        xs.extend(self.breakpoints());
        xs.sort_by(f64::total_cmp);
        let vals: Vec<f64> = xs.iter().map(|&x| self.value(x)).collect();
        for i in 0..xs.len() {
            for j in i + 2..xs.len() {
                let mid = self.value(0.5 * (xs[i] + xs[j]));
                if mid < 0.5 * (vals[i] + vals[j]) - tol {
                    return false;
                }
            }
        }
        true
    }

    /// Continuous piecewise-linear density agreeing with `self` at `nodes`
    /// (0 and 1 are added when missing).
    pub fn hat_interpolant(&self, nodes: &[f64]) -> Result<Density> {
        if let Some(bad) = nodes.iter().find(|z| !(0.0..=1.0).contains(*z)) {
            return domain(format!("interpolation node {bad} outside [0, 1]"));
        }
        let mut knots: Vec<f64> = nodes.to_vec();
        knots.push(0.0);
        knots.push(1.0);
        knots.sort_by(f64::total_cmp);
        knots.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
        let values = knots.iter().map(|&z| self.value(z)).collect();
        Density::piecewise_linear(knots, values)
    }

    /// JSON-schema form, available for the base kinds only.
    pub fn spec(&self) -> Option<DensitySpec> {
        Some(match &self.shape {
            Shape::Constant(c) => DensitySpec::Constant { value: *c },
            Shape::Linear { slope, intercept } => DensitySpec::Linear {
                slope: *slope,
                intercept: *intercept,
            },
            Shape::Quadratic { a, b, c } => DensitySpec::Quadratic { a: *a, b: *b, c: *c },
            Shape::PiecewiseLinear { knots, values } => DensitySpec::PiecewiseLinear {
                knots: knots.clone(),
                values: values.clone(),
            },
            Shape::Product(factors) => DensitySpec::Product {
                factors: factors.iter().map(|f| f.spec()).collect::<Option<_>>()?,
            },
            _ => return None,
        })
    }

    /// Short stable fingerprint of the canonical description.
    pub fn digest(&self) -> String {
        let hash = Sha256::digest(self.to_string().as_bytes());
        hash.iter().take(6).map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Display for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.shape {
            Shape::Constant(c) => write!(f, "constant({c})"),
            Shape::Linear { slope, intercept } => write!(f, "linear({slope},{intercept})"),
            Shape::Quadratic { a, b, c } => write!(f, "quadratic({a},{b},{c})"),
            Shape::PiecewiseLinear { knots, values } => {
                write!(f, "piecewise_linear({knots:?},{values:?})")
            }
            Shape::Product(factors) => {
                write!(f, "product(")?;
                for (i, d) in factors.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{d}")?;
                }
                write!(f, ")")
            }
            Shape::Blend { start, end, tau } => write!(f, "blend({start},{end},{tau})"),
            Shape::Scaled { factor, inner } => write!(f, "scaled({factor},{inner})"),
            Shape::Reflected(inner) => write!(f, "reflected({inner})"),
            Shape::Reparameterized { inner, map } => {
                write!(f, "reparameterized({inner},sigma={})", map.sigma())
            }
        }
    }
}

/// JSON density schema accepted by the command line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DensitySpec {
    Constant { value: f64 },
    Linear { slope: f64, intercept: f64 },
    Quadratic { a: f64, b: f64, c: f64 },
    PiecewiseLinear { knots: Vec<f64>, values: Vec<f64> },
    Product { factors: Vec<DensitySpec> },
}

impl DensitySpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn build(&self) -> Result<Density> {
        match self {
            DensitySpec::Constant { value } => Density::constant(*value),
            DensitySpec::Linear { slope, intercept } => Density::linear(*slope, *intercept),
            DensitySpec::Quadratic { a, b, c } => Density::quadratic(*a, *b, *c),
            DensitySpec::PiecewiseLinear { knots, values } => Density::piecewise_linear(knots.clone(), values.clone()),
            DensitySpec::Product { factors } => {
                if factors.len() != 2 {
                    return domain(format!("product takes exactly two factors, got {}", factors.len()));
                }
                Density::product(factors.iter().map(|f| f.build()).collect::<Result<_>>()?)
            }
        }
    }
}

/// One-parameter family of densities `ρ(·, τ)`.
#[derive(Clone, Debug)]
pub enum HomotopyFamily {
    /// `(1 - τ) start + τ end` for `τ ∈ [0, 1]`.
    Affine { start: Density, end: Density },
    /// `τ x + intercept` for `τ > -intercept`.
    Slope { intercept: f64 },
}

impl HomotopyFamily {
    pub fn affine(start: Density, end: Density) -> Self {
        HomotopyFamily::Affine { start, end }
    }

    pub fn slope(intercept: f64) -> Result<Self> {
        if !(intercept >= MIN_FLOOR) {
            return domain(format!("intercept {intercept} must be positive"));
        }
        Ok(HomotopyFamily::Slope { intercept })
    }

    /// Closed parameter interval on which the family is defined.
    pub fn domain(&self) -> (f64, f64) {
        match self {
            HomotopyFamily::Affine { .. } => (0.0, 1.0),
            HomotopyFamily::Slope { intercept } => (-intercept + MIN_FLOOR, f64::INFINITY),
        }
    }

    pub fn contains(&self, tau: f64) -> bool {
        let (lo, hi) = self.domain();
        tau >= lo && tau <= hi
    }

    pub fn blend(&self, tau: f64) -> Result<Density> {
        match self {
            HomotopyFamily::Affine { start, end } => {
                if tau == 0.0 {
                    Ok(start.clone())
                } else if tau == 1.0 {
                    Ok(end.clone())
                } else {
                    Density::blend(start, end, tau)
                }
            }
            HomotopyFamily::Slope { intercept } => {
                if !self.contains(tau) {
                    return domain(format!("slope {tau} makes the density nonpositive"));
                }
                Density::linear(tau, *intercept)
            }
        }
    }

    /// `∂ρ/∂τ (x, τ)`; independent of τ for both rules.
    pub fn partial_tau(&self, x: f64) -> f64 {
        match self {
            HomotopyFamily::Affine { start, end } => end.value(x) - start.value(x),
            HomotopyFamily::Slope { .. } => x,
        }
    }
}

fn minmax(a: f64, b: f64) -> (f64, f64) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn t_clamp(t: f64) -> f64 {
    t.clamp(0.0, 1.0)
}

/// Index `i` of the piece `[knots[i], knots[i+1]]` containing `x`.
fn piece_index(knots: &[f64], x: f64) -> usize {
    let last = knots.len() - 2;
    knots.partition_point(|&k| k <= x).saturating_sub(1).min(last)
}

/// Minimum and maximum of `f` on `[0, 1]`: dense sample plus breakpoints,
/// then golden-section polish around the best samples.
pub(crate) fn extrema<F: Fn(f64) -> f64>(f: F, breakpoints: &[f64]) -> (f64, f64) {
    let mut xs: Vec<f64> = (0..=EXTREMA_SAMPLES)
        .map(|i| i as f64 / EXTREMA_SAMPLES as f64)
        .collect();
    xs.extend_from_slice(breakpoints);
    xs.sort_by(f64::total_cmp);
    let vals: Vec<f64> = xs.iter().map(|&x| f(x)).collect();

    let argbest = |better: &dyn Fn(f64, f64) -> bool| {
        let mut best = 0;
        for i in 1..vals.len() {
            if better(vals[i], vals[best]) {
                best = i;
            }
        }
        best
    };
    let imin = argbest(&|a, b| a < b);
    let imax = argbest(&|a, b| a > b);

    let bracket = |i: usize| (xs[i.saturating_sub(1)], xs[(i + 1).min(xs.len() - 1)]);
    let (a, b) = bracket(imin);
    let lo = f(golden_min(&f, a, b)).min(vals[imin]);
    let (a, b) = bracket(imax);
    let hi = f(golden_min(&|x| -f(x), a, b)).max(vals[imax]);
    (lo, hi)
}

fn golden_min<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..80 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        if b - a < 1e-14 {
            break;
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize) -> impl Iterator<Item = f64> {
        (0..=n).map(move |i| i as f64 / n as f64)
    }

    #[test]
    fn constant_density() {
        let d = Density::constant(1.0).unwrap();
        assert_eq!(d.value(0.3), 1.0);
        assert_eq!(d.floor(), 1.0);
        assert_eq!(Density::constant(4.0).unwrap().value(0.5), 4.0);
        assert!(matches!(Density::constant(0.0), Err(Error::Domain(_))));
        assert!(Density::constant(1e-9).is_err());
    }

    #[test]
    fn linear_density() {
        let d = Density::linear(1.0, 1.0).unwrap();
        assert_eq!(d.value(0.5), 1.5);
        assert_eq!(d.floor(), 1.0);
        let flat = Density::linear(0.0, 2.0).unwrap();
        assert!(flat.is_constant());
        assert_eq!(flat.value(0.9), 2.0);
        assert!(Density::linear(-2.0, 1.0).is_err());
        assert_eq!(Density::linear(-0.5, 1.0).unwrap().floor(), 0.5);
    }

    #[test]
    fn quadratic_extrema() {
        let bump = Density::quadratic(-4.0, 4.0, 1.0).unwrap();
        assert_eq!(bump.peak(), 2.0);
        assert_eq!(bump.floor(), 1.0);
        let well = Density::quadratic(4.0, -4.0, 2.0).unwrap();
        assert_eq!(well.floor(), 1.0);
        assert!(Density::quadratic(4.0, -4.0, 1.0).is_err());
    }

    #[test]
    fn piecewise_linear_cases() {
        let two = Density::piecewise_linear(vec![0.0, 1.0], vec![1.0, 2.0]).unwrap();
        let lin = Density::linear(1.0, 1.0).unwrap();
        for x in grid(1000) {
            assert!((two.value(x) - lin.value(x)).abs() <= 1e-15);
        }
        let tent = Density::piecewise_linear(vec![0.0, 0.5, 1.0], vec![1.0, 2.0, 1.0]).unwrap();
        assert_eq!(tent.value(0.25), 1.5);
        assert!(tent.is_concave(0.0));
        let vee = Density::piecewise_linear(vec![0.0, 0.5, 1.0], vec![2.0, 1.0, 2.0]).unwrap();
        assert_eq!(vee.value(0.75), 1.5);
        assert!(!vee.is_concave(CONCAVITY_TOL));
        assert_eq!(tent.breakpoints(), vec![0.5]);
    }

    #[test]
    fn piecewise_linear_rejects_bad_input() {
        let pl = Density::piecewise_linear;
        assert!(pl(vec![0.0, 1.0], vec![1.0]).is_err());
        assert!(pl(vec![0.0, 0.6, 0.4, 1.0], vec![1.0; 4]).is_err());
        assert!(pl(vec![0.0, 0.5, 1.0], vec![1.0, 0.0, 1.0]).is_err());
        assert!(pl(vec![0.1, 1.0], vec![1.0, 1.0]).is_err());
    }

    #[test]
    fn concavity_classification() {
        assert!(Density::quadratic(-4.0, 4.0, 1.0).unwrap().is_concave(1e-12));
        assert!(!Density::quadratic(4.0, -4.0, 2.0).unwrap().is_concave(1e-12));
        assert!(Density::linear(3.0, 0.5).unwrap().is_concave(0.0));
        let bump = Density::quadratic(-4.0, 4.0, 1.0).unwrap();
        let prod = Density::product(vec![bump.clone(), Density::constant(2.0).unwrap()]).unwrap();
        assert!(prod.is_concave(CONCAVITY_TOL));
        let sq = Density::product(vec![bump.clone(), bump]).unwrap();
        assert!(!sq.is_concave(CONCAVITY_TOL));
    }

    #[test]
    fn hat_interpolant_cases() {
        let c = Density::constant(3.0).unwrap();
        let h = c.hat_interpolant(&[0.2, 0.7]).unwrap();
        for x in grid(100) {
            assert!((h.value(x) - 3.0).abs() < 1e-15);
        }
        let bump = Density::quadratic(-4.0, 4.0, 1.0).unwrap();
        let tent = bump.hat_interpolant(&[0.0, 0.5, 1.0]).unwrap();
        assert_eq!(tent.value(0.5), 2.0);
        assert_eq!(tent.value(0.25), 1.5);
        assert_eq!(bump.value(0.25), 1.75);
        let lin = Density::linear(2.0, 1.0).unwrap();
        let hl = lin.hat_interpolant(&[0.0, 1.0 / 3.0, 1.0]).unwrap();
        for x in grid(300) {
            assert!((hl.value(x) - lin.value(x)).abs() < 1e-14);
        }
        assert!(bump.hat_interpolant(&[1.5]).is_err());
    }

    #[test]
    fn blend_endpoints_and_midpoint() {
        let one = Density::constant(1.0).unwrap();
        let three = Density::constant(3.0).unwrap();
        let fam = HomotopyFamily::affine(one.clone(), three.clone());
        assert_eq!(fam.blend(0.0).unwrap().to_string(), one.to_string());
        assert_eq!(fam.blend(1.0).unwrap().to_string(), three.to_string());
        let mid = fam.blend(0.5).unwrap();
        assert!((mid.value(0.3) - 2.0).abs() < 1e-15);
        assert!(mid.is_constant());
        assert!(fam.blend(1.5).is_err());
        assert_eq!(fam.partial_tau(0.4), 2.0);
    }

    #[test]
    fn slope_family() {
        let fam = HomotopyFamily::slope(1.0).unwrap();
        assert_eq!(fam.blend(2.0).unwrap().value(0.5), 2.0);
        assert_eq!(fam.partial_tau(0.3), 0.3);
        assert!(fam.blend(-1.5).is_err());
        assert!(HomotopyFamily::slope(0.0).is_err());
    }

    #[test]
    fn product_derivative_matches_finite_difference() {
        let p = Density::product(vec![
            Density::linear(1.0, 1.0).unwrap(),
            Density::quadratic(-1.0, 1.0, 1.0).unwrap(),
        ])
        .unwrap();
        for x in [0.1, 0.4, 0.8] {
            let h = 1e-6;
            let fd = (p.value(x + h) - p.value(x - h)) / (2.0 * h);
            assert!((p.derivative(x) - fd).abs() < 1e-8);
        }
    }

    #[test]
    fn reflected_and_scaled() {
        let d = Density::linear(1.0, 1.0).unwrap();
        let r = d.reflected();
        assert_eq!(r.value(0.0), 2.0);
        assert_eq!(r.derivative(0.3), -1.0);
        let s = d.scaled(2.0).unwrap();
        assert_eq!(s.value(1.0), 4.0);
        assert_eq!(s.floor(), 2.0);
        assert!(d.scaled(-1.0).is_err());
    }

    #[test]
    fn product_extrema_are_polished() {
        // (1 + x)(2 - x) peaks at x = 1/2 with value 2.25.
        let p = Density::product(vec![
            Density::linear(1.0, 1.0).unwrap(),
            Density::linear(-1.0, 2.0).unwrap(),
        ])
        .unwrap();
        assert!((p.peak() - 2.25).abs() < 1e-14);
        assert!((p.floor() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn json_schema_parses() {
        let spec = DensitySpec::from_json(r#"{"kind":"linear","slope":1,"intercept":1}"#).unwrap();
        assert_eq!(spec.build().unwrap().value(1.0), 2.0);
        let prod = DensitySpec::from_json(
            r#"{"kind":"product","factors":[{"kind":"constant","value":2},
                {"kind":"piecewise_linear","knots":[0,0.5,1],"values":[1,2,1]}]}"#,
        )
        .unwrap();
        let d = prod.build().unwrap();
        assert_eq!(d.value(0.5), 4.0);
        assert_eq!(d.spec().unwrap(), prod);
        assert!(DensitySpec::from_json(r#"{"kind":"cubic"}"#).is_err());
        assert!(DensitySpec::from_json("{not json").is_err());
    }

    #[test]
    fn digest_is_stable_and_distinguishes() {
        let a = Density::linear(1.0, 1.0).unwrap();
        let b = Density::linear(1.0, 1.0).unwrap();
        let c = Density::linear(1.0, 2.0).unwrap();
        assert_eq!(a.digest(), b.digest());
        assert_ne!(a.digest(), c.digest());
        assert_eq!(a.digest().len(), 12);
    }
}
