//! Circle and half-line quadrature: periodic trapezoid for smooth integrands,
//! graded Gauss–Legendre panels for peaked ones.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, OnceLock, RwLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Peak widths below this switch the circle integrator from the trapezoid
/// rule to graded panels.
pub const PEAK_SWITCH: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub panel_order: usize,
    pub peak_scale: f64,
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { panel_order: 20, peak_scale: 1.0, abs_tol: 1e-15, rel_tol: 1e-12 }
    }
}

impl QuadratureSpec {
    pub fn with_peak_scale(mut self, peak_scale: f64) -> Self {
        self.peak_scale = peak_scale;
        self
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.panel_order < 4 {
            return Err(Error::InvalidArgument(format!(
                "panel_order must be at least 4, got {}",
                self.panel_order
            )));
        }
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::InvalidArgument("tolerances must be positive".into()));
        }
        if !(self.peak_scale > 0.0) {
            return Err(Error::InvalidArgument("peak_scale must be positive".into()));
        }
        Ok(())
    }

    /// Accepts an error within tolerance of the value, or at roundoff level
    /// relative to ∫|f| when the integral cancels.
    fn accepts(&self, value: Complex64, error: f64, magnitude: f64) -> bool {
        error <= self.abs_tol.max(self.rel_tol * value.norm()).max(1e-14 * magnitude)
    }
}

/// An integral estimate with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: Complex64,
    pub error: f64,
}

/// Gauss–Legendre nodes and weights on [−1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(order: usize) -> Self {
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    /// Cached rule of the given order.
    pub fn cached(order: usize) -> Arc<GaussLegendre> {
        static CACHE: OnceLock<RwLock<HashMap<usize, Arc<GaussLegendre>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
        if let Some(rule) = cache.read().expect("quadrature cache poisoned").get(&order) {
            return rule.clone();
        }
        let rule = Arc::new(GaussLegendre::new(order));
        cache
            .write()
            .expect("quadrature cache poisoned")
            .entry(order)
            .or_insert(rule)
            .clone()
    }

    pub fn integrate<F: Fn(f64) -> Complex64>(&self, a: f64, b: f64, f: &F) -> Complex64 {
        self.integrate_with_magnitude(a, b, f).0
    }

    /// The integral of f together with the same rule applied to |f|.
    pub fn integrate_with_magnitude<F: Fn(f64) -> Complex64>(&self, a: f64, b: f64, f: &F) -> (Complex64, f64) {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = Complex64::new(0.0, 0.0);
        let mut mag = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let v = f(mid + half * x);
            acc += v * *w;
            mag += v.norm() * w;
        }
        (acc * half, mag * half.abs())
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// (1/2π)∫_{−π}^{π} f(φ) dφ with the peak (if any) at φ = 0.
pub fn integrate_circle<F: Fn(f64) -> Complex64>(f: F, spec: &QuadratureSpec) -> Result<Quadrature> {
    integrate_circle_at(f, spec, 0.0, &[])
}

/// (1/2π)∫ over one period, with the peak at `center` and known
/// discontinuities of the integrand at `breakpoints`.
pub fn integrate_circle_at<F: Fn(f64) -> Complex64>(
    f: F,
    spec: &QuadratureSpec,
    center: f64,
    breakpoints: &[f64],
) -> Result<Quadrature> {
    spec.validate()?;
    if spec.peak_scale >= PEAK_SWITCH && breakpoints.is_empty() {
        return integrate_trapezoid(&f, spec, center);
    }
    let breaks = circle_breaks(spec.peak_scale, center, breakpoints);
    let q = integrate_breaks(&f, &breaks, spec)?;
    Ok(Quadrature { value: q.value / (2.0 * PI), error: q.error / (2.0 * PI) })
}

/// Periodic trapezoid rule for (1/2π)∫ over one period, starting from
/// about 24/peak_scale nodes and doubling at most twice.
pub fn integrate_trapezoid<F: Fn(f64) -> Complex64>(f: &F, spec: &QuadratureSpec, center: f64) -> Result<Quadrature> {
    let resolve = (24.0 / spec.peak_scale).ceil() as usize;
    let mut n = resolve.max(32).next_power_of_two();
    let step = |n: usize| 2.0 * PI / n as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut mag = 0.0;
    for j in 0..n {
        let v = f(center - PI + step(n) * j as f64);
        sum += v;
        mag += v.norm();
    }
    let mut prev = sum / n as f64;
    let mut error = f64::INFINITY;
    for _ in 0..2 {
        let h = step(2 * n);
        for j in 0..n {
            let v = f(center - PI + h * (2 * j + 1) as f64);
            sum += v;
            mag += v.norm();
        }
        n *= 2;
        let cur = sum / n as f64;
        error = (cur - prev).norm();
        if spec.accepts(cur, error, mag / n as f64) {
            return Ok(Quadrature { value: cur, error });
        }
        prev = cur;
    }
    Err(Error::NonConvergence { value: prev, error })
}

/// Panel boundaries over [center − π, center + π]: dyadic grading down to
/// the peak scale around the center, at most π/8 wide, split at breakpoints.
fn circle_breaks(peak_scale: f64, center: f64, breakpoints: &[f64]) -> Vec<f64> {
    let mut offsets = vec![0.0, -PI, PI];
    let mut w = peak_scale.min(PI / 8.0);
    while w < PI {
        offsets.push(w);
        offsets.push(-w);
        w *= 2.0;
    }
    for k in 1..8 {
        let x = k as f64 * PI / 8.0;
        offsets.push(x);
        offsets.push(-x);
    }
    for &b in breakpoints {
        let d = crate::geometry::normalize_angle(b - center);
        offsets.push(d);
        if (d - PI).abs() < 1e-15 {
            offsets.push(-PI);
        }
    }
    offsets.sort_by(|a, b| a.total_cmp(b));
    offsets.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
    offsets.into_iter().map(|x| center + x).collect()
}

/// ∫ f over consecutive breakpoints, with two rounds of panel halving as the
/// error estimate.
pub fn integrate_breaks<F: Fn(f64) -> Complex64>(
    f: &F,
    breaks: &[f64],
    spec: &QuadratureSpec,
) -> Result<Quadrature> {
    spec.validate()?;
    let rule = GaussLegendre::cached(spec.panel_order);
    let level = |splits: usize| -> (Complex64, f64) {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut mag = 0.0;
        for pair in breaks.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            let h = (b - a) / splits as f64;
            for s in 0..splits {
                let (v, m) = rule.integrate_with_magnitude(a + h * s as f64, a + h * (s + 1) as f64, f);
                acc += v;
                mag += m;
            }
        }
        (acc, mag)
    };
    let (mut prev, _) = level(1);
    let mut error = f64::INFINITY;
    for splits in [2, 4] {
        let (cur, mag) = level(splits);
        error = (cur - prev).norm();
        if spec.accepts(cur, error, mag) {
            return Ok(Quadrature { value: cur, error });
        }
        prev = cur;
    }
    Err(Error::NonConvergence { value: prev, error })
}

/// ∫_0^upper g(u) du for integrands decaying like a power of (1 + u²), on
/// log-spaced panels.
pub fn integrate_halfline_peak<F: Fn(f64) -> Complex64>(
    g: F,
    upper: f64,
    spec: &QuadratureSpec,
) -> Result<Quadrature> {
    integrate_breaks(&g, &halfline_breaks(upper, &[]), spec)
}

/// Panel boundaries 0, 1/4, 1/2, 1, 2, 4, … up to `upper`, plus extra cuts.
pub fn halfline_breaks(upper: f64, extra: &[f64]) -> Vec<f64> {
    let mut breaks = vec![0.0, 0.25, 0.5];
    let mut x = 1.0;
    while x < upper {
        breaks.push(x);
        x *= 2.0;
    }
    breaks.extend(extra.iter().copied().filter(|&e| e > 0.0));
    breaks.retain(|&b| b < upper);
    breaks.push(upper);
    breaks.sort_by(|a, b| a.total_cmp(b));
    breaks.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * b.abs().max(1.0));
    breaks
}
