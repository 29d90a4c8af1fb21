//! Boundary data, generalized Poisson transforms, normalized kernels, and the
//! Dirichlet and Riquier problems at infinity.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::geometry::{normalize_angle, BoundaryPoint, DiskPoint, RadialFrame};
use crate::numerics::fft::{circle_fft, FourierCoefficients};
use crate::numerics::quadrature::{integrate_circle, integrate_circle_at, integrate_trapezoid, QuadratureSpec};
use crate::polyspherical::{phi_n_frame, zero_free_radius};
use crate::spectral::{PolyKernelForm, SpectralClass, SpectralParam};

/// Relative tolerance of transform quadratures.
pub const TRANSFORM_TOL: f64 = 1e-10;

/// Largest FFT size used to resolve kernel Fourier coefficients.
pub const MAX_FFT: usize = 1 << 21;

/// Truncated Fourier sequence (ν_n) standing in for an analytic functional.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct FourierSeq {
    pub coeffs: BTreeMap<i64, Complex64>,
    /// User-declared bound on Σ|ν_n| outside the stored window.
    pub declared_tail: f64,
}

impl FourierSeq {
    pub fn new(coeffs: BTreeMap<i64, Complex64>) -> Self {
        FourierSeq { coeffs, declared_tail: 0.0 }
    }

    pub fn from_pairs<I: IntoIterator<Item = (i64, Complex64)>>(pairs: I) -> Self {
        Self::new(pairs.into_iter().collect())
    }

    pub fn get(&self, n: i64) -> Complex64 {
        self.coeffs.get(&n).copied().unwrap_or_default()
    }

    /// Largest |n| carried.
    pub fn width(&self) -> i64 {
        self.coeffs.keys().map(|n| n.abs()).max().unwrap_or(0)
    }
}

/// Σ g_n·conj(ν_n) over the window of ν.
///
/// The tail estimate is the declared tail of ν against the largest |g_n|
/// just beyond the window; it must stay below `rel_tol`·|value|.
pub fn pair_functional(nu: &FourierSeq, g: &dyn Fn(i64) -> Complex64, rel_tol: f64) -> Result<Complex64> {
    let mut value = Complex64::new(0.0, 0.0);
    for (&n, c) in &nu.coeffs {
        value += g(n) * c.conj();
    }
    let w = nu.width();
    let beyond = g(w + 1).norm().max(g(-w - 1).norm());
    let tail = nu.declared_tail * beyond;
    if tail > rel_tol * value.norm() {
        return Err(Error::TruncationWarning { value, tail, magnitude: value.norm() });
    }
    Ok(value)
}

/// A density g with respect to normalized arclength.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Density {
    Constant(Complex64),
    Cos(i64),
    Sin(i64),
    /// Indicator of the arc |φ − center| < half_width.
    Indicator { center: f64, half_width: f64 },
    /// φ/π on (−π, π).
    Sawtooth,
    /// Equispaced samples at 2πj/N, linearly interpolated.
    Table(Vec<Complex64>),
    Sum(Vec<(Complex64, Density)>),
}

impl Density {
    pub fn one() -> Self {
        Density::Constant(Complex64::new(1.0, 0.0))
    }

    pub fn eval(&self, phi: f64) -> Complex64 {
        let re = |x: f64| Complex64::new(x, 0.0);
        match self {
            Density::Constant(c) => *c,
            Density::Cos(k) => re((*k as f64 * phi).cos()),
            Density::Sin(k) => re((*k as f64 * phi).sin()),
            Density::Indicator { center, half_width } => {
                let d = normalize_angle(phi - center).abs();
                re(if d < *half_width {
                    1.0
                } else if d == *half_width {
                    0.5
                } else {
                    0.0
                })
            }
            Density::Sawtooth => {
                let a = normalize_angle(phi);
                re(if a == PI { 0.0 } else { a / PI })
            }
            Density::Table(t) => {
                let n = t.len();
                let x = (phi.rem_euclid(2.0 * PI)) / (2.0 * PI) * n as f64;
                let j = (x.floor() as usize).min(n - 1);
                let frac = x - j as f64;
                t[j] * (1.0 - frac) + t[(j + 1) % n] * frac
            }
            Density::Sum(parts) => parts.iter().map(|(c, d)| c * d.eval(phi)).sum(),
        }
    }

    /// Angles where g or its derivative jumps.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Density::Indicator { center, half_width } => vec![center - half_width, center + half_width],
            Density::Sawtooth => vec![PI],
            Density::Table(t) => (0..t.len()).map(|j| 2.0 * PI * j as f64 / t.len() as f64).collect(),
            Density::Sum(parts) => parts.iter().flat_map(|(_, d)| d.breakpoints()).collect(),
            _ => Vec::new(),
        }
    }

    pub fn is_continuous_at(&self, phi: f64) -> bool {
        match self {
            Density::Table(_) => true,
            _ => self
                .breakpoints()
                .iter()
                .all(|b| normalize_angle(phi - b).abs() > 1e-12),
        }
    }

    /// Samples at the angles 2πj/N.
    pub fn sample_table(&self, n: usize) -> Vec<Complex64> {
        (0..n).map(|j| self.eval(2.0 * PI * j as f64 / n as f64)).collect()
    }

    /// Fourier coefficient (1/2π)∫ g e^{−ikφ} dφ.
    pub fn fourier_coefficient(&self, k: i64) -> Result<Complex64> {
        let spec = QuadratureSpec::default().with_rel_tol(1e-12).with_peak_scale(0.01);
        let f = |phi: f64| self.eval(phi) * Complex64::from_polar(1.0, -(k as f64) * phi);
        Ok(integrate_circle_at(f, &spec, 0.0, &self.breakpoints())?.value)
    }

    /// Parses a preset name: one, zero, sawtooth, cos:K, sin:K, indicator:CENTER:HALF_WIDTH.
    pub fn preset(name: &str) -> Result<Self> {
        let parts: Vec<&str> = name.split(':').collect();
        let num = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| Error::InvalidArgument(format!("bad number '{s}' in density preset '{name}'")))
        };
        let int = |s: &str| {
            s.parse::<i64>()
                .map_err(|_| Error::InvalidArgument(format!("bad integer '{s}' in density preset '{name}'")))
        };
        match parts.as_slice() {
            ["one"] => Ok(Density::one()),
            ["zero"] => Ok(Density::Constant(Complex64::new(0.0, 0.0))),
            ["sawtooth"] => Ok(Density::Sawtooth),
            ["cos", k] => Ok(Density::Cos(int(k)?)),
            ["sin", k] => Ok(Density::Sin(int(k)?)),
            ["indicator", c, w] => Ok(Density::Indicator { center: num(c)?, half_width: num(w)? }),
            _ => Err(Error::InvalidArgument(format!("unknown density preset '{name}'"))),
        }
    }
}

/// A point mass of complex weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub point: BoundaryPoint,
    pub weight: Complex64,
}

/// The argument of every Poisson transform.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryDatum {
    Fourier(FourierSeq),
    Density(Density),
    Atoms(Vec<Atom>),
    Mixture { density: Density, atoms: Vec<Atom> },
}

impl BoundaryDatum {
    pub fn lebesgue() -> Self {
        BoundaryDatum::Density(Density::one())
    }

    pub fn dirac(angle: f64) -> Self {
        BoundaryDatum::Atoms(vec![Atom { point: BoundaryPoint::new(angle), weight: Complex64::new(1.0, 0.0) }])
    }

    /// The absolutely continuous part, if any.
    pub fn density(&self) -> Option<&Density> {
        match self {
            BoundaryDatum::Density(d) | BoundaryDatum::Mixture { density: d, .. } => Some(d),
            _ => None,
        }
    }

    pub fn atoms(&self) -> &[Atom] {
        match self {
            BoundaryDatum::Atoms(a) | BoundaryDatum::Mixture { atoms: a, .. } => a,
            _ => &[],
        }
    }

    /// ν̂(k) = ∫ e^{−ikφ} dν.
    pub fn fourier_coefficient(&self, k: i64) -> Result<Complex64> {
        if let BoundaryDatum::Fourier(f) = self {
            return Ok(f.get(k));
        }
        let mut v = match self.density() {
            Some(d) => d.fourier_coefficient(k)?,
            None => Complex64::new(0.0, 0.0),
        };
        for a in self.atoms() {
            v += a.weight * Complex64::from_polar(1.0, -(k as f64) * a.point.angle());
        }
        Ok(v)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("bad JSON datum: {e}")))?;
        Self::from_value(&v)
    }

    pub fn from_value(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::InvalidArgument(format!("bad boundary datum: {what}"));
        let obj = v.as_object().ok_or_else(|| bad("expected an object"))?;
        if let Some(f) = obj.get("fourier") {
            let map = f.as_object().ok_or_else(|| bad("'fourier' must map modes to [re, im]"))?;
            let mut coeffs = BTreeMap::new();
            for (k, c) in map {
                let n: i64 = k.trim().parse().map_err(|_| bad("mode keys must be integers"))?;
                coeffs.insert(n, complex_from_value(c).ok_or_else(|| bad("coefficient must be [re, im]"))?);
            }
            let mut seq = FourierSeq::new(coeffs);
            if let Some(t) = obj.get("tail") {
                seq.declared_tail = t.as_f64().ok_or_else(|| bad("'tail' must be a number"))?;
            }
            return Ok(BoundaryDatum::Fourier(seq));
        }
        let density = obj.get("density").map(density_from_value).transpose()?;
        let atoms = obj
            .get("atoms")
            .map(|a| {
                a.as_array()
                    .ok_or_else(|| bad("'atoms' must be a list"))?
                    .iter()
                    .map(|t| {
                        let t = t.as_array().filter(|t| t.len() == 3).ok_or_else(|| bad("atom must be [angle, re, im]"))?;
                        let x: Vec<f64> = t.iter().filter_map(Value::as_f64).collect();
                        if x.len() != 3 {
                            return Err(bad("atom entries must be numbers"));
                        }
                        Ok(Atom { point: BoundaryPoint::new(x[0]), weight: Complex64::new(x[1], x[2]) })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .transpose()?;
        match (density, atoms) {
            (Some(d), Some(a)) => Ok(BoundaryDatum::Mixture { density: d, atoms: a }),
            (Some(d), None) => Ok(BoundaryDatum::Density(d)),
            (None, Some(a)) => Ok(BoundaryDatum::Atoms(a)),
            (None, None) => Err(bad("expected 'fourier', 'density' or 'atoms'")),
        }
    }

    /// JSON form; presets other than tables are written as tables of 256 samples.
    pub fn to_json(&self) -> Value {
        let atoms = |a: &[Atom]| -> Value {
            a.iter().map(|a| json!([a.point.angle(), a.weight.re, a.weight.im])).collect()
        };
        let density = |d: &Density| -> Value {
            match d {
                Density::Constant(c) if *c == Complex64::new(1.0, 0.0) => json!("one"),
                Density::Cos(k) => json!(format!("cos:{k}")),
                Density::Sin(k) => json!(format!("sin:{k}")),
                Density::Sawtooth => json!("sawtooth"),
                Density::Indicator { center, half_width } => json!(format!("indicator:{center}:{half_width}")),
                other => other.sample_table(256).iter().map(|c| json!([c.re, c.im])).collect(),
            }
        };
        match self {
            BoundaryDatum::Fourier(f) => {
                let map: serde_json::Map<String, Value> =
                    f.coeffs.iter().map(|(n, c)| (n.to_string(), json!([c.re, c.im]))).collect();
                json!({ "fourier": map, "tail": f.declared_tail })
            }
            BoundaryDatum::Density(d) => json!({ "density": density(d) }),
            BoundaryDatum::Atoms(a) => json!({ "atoms": atoms(a) }),
            BoundaryDatum::Mixture { density: d, atoms: a } => json!({ "density": density(d), "atoms": atoms(a) }),
        }
    }
}

fn complex_from_value(v: &Value) -> Option<Complex64> {
    if let Some(x) = v.as_f64() {
        return Some(Complex64::new(x, 0.0));
    }
    let a = v.as_array()?;
    match a.as_slice() {
        [re, im] => Some(Complex64::new(re.as_f64()?, im.as_f64()?)),
        _ => None,
    }
}

fn density_from_value(v: &Value) -> Result<Density> {
    if let Some(name) = v.as_str() {
        return Density::preset(name);
    }
    let table = v
        .as_array()
        .ok_or_else(|| Error::InvalidArgument("density must be a preset name or a sample table".into()))?;
    let samples = table
        .iter()
        .map(complex_from_value)
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::InvalidArgument("table entries must be numbers or [re, im]".into()))?;
    if samples.is_empty() || !samples.len().is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "density table length {} is not a power of two",
            samples.len()
        )));
    }
    Ok(Density::Table(samples))
}

/// A transform value with its normalization by Φ_n(|z| |λ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransformResult {
    pub value: Complex64,
    pub normalized: Complex64,
    pub frame: RadialFrame,
}

/// Order-n transforms at a fixed λ, with the zero-free radius resolved once.
#[derive(Debug, Clone)]
pub struct TransformContext {
    pub n: usize,
    pub spectral: SpectralParam,
    form: PolyKernelForm,
    r_min: Option<f64>,
}

impl TransformContext {
    pub fn new(n: usize, spectral: SpectralParam) -> Result<Self> {
        let r_min = match spectral.class {
            SpectralClass::ForbiddenRay => None,
            _ => Some(zero_free_radius(n, &spectral)?.r_min),
        };
        Ok(TransformContext { n, spectral, form: PolyKernelForm::new(n, spectral), r_min })
    }

    pub fn r_min(&self) -> Option<f64> {
        self.r_min
    }

    /// P_n(z, e^{iφ}|λ) for z on the circle of `frame` at angle `alpha`.
    pub fn kernel(&self, frame: &RadialFrame, alpha: f64, phi: f64) -> Complex64 {
        if frame.r == 0.0 {
            return self.form.eval_log(0.0);
        }
        self.form.eval_log(frame.log_poisson(phi - alpha))
    }

    pub fn phi(&self, r: f64) -> Result<Complex64> {
        phi_n_frame(self.n, &RadialFrame::from_r(r), &self.spectral)
    }

    /// Φ_n(r) when normalization is permitted at r.
    pub fn normalizer(&self, r: f64) -> Result<Complex64> {
        let r_min = self.r_min.ok_or(Error::NormalizationUnavailable {
            r,
            reason: "lambda lies on the forbidden ray".into(),
        })?;
        if r < r_min {
            return Err(Error::NormalizationUnavailable {
                r,
                reason: format!("inside the zero-free radius {r_min}"),
            });
        }
        let p = self.phi(r)?;
        if p.norm() < 1e-300 {
            return Err(Error::NormalizationUnavailable { r, reason: "Phi_n vanishes".into() });
        }
        Ok(p)
    }

    /// ∫ P_n(z, ξ|λ) dν(ξ).
    pub fn value(&self, datum: &BoundaryDatum, z: DiskPoint) -> Result<Complex64> {
        let frame = z.frame();
        let alpha = z.arg();
        let mut v = Complex64::new(0.0, 0.0);
        if let BoundaryDatum::Fourier(seq) = datum {
            return self.fourier_value(seq, &frame, alpha);
        }
        if let Some(d) = datum.density() {
            v += self.density_value(d, &frame, alpha)?;
        }
        for a in datum.atoms() {
            v += a.weight * self.kernel(&frame, alpha, a.point.angle());
        }
        Ok(v)
    }

    pub fn density_value(&self, g: &Density, frame: &RadialFrame, alpha: f64) -> Result<Complex64> {
        if let Density::Constant(c) = g {
            return Ok(c * phi_n_frame(self.n, frame, &self.spectral)?);
        }
        let spec = QuadratureSpec::default()
            .with_rel_tol(TRANSFORM_TOL)
            .with_peak_scale(1.0 / frame.tau.max(1.0));
        let f = |phi: f64| self.kernel(frame, alpha, phi) * g.eval(phi);
        Ok(integrate_circle_at(f, &spec, alpha, &g.breakpoints())?.value)
    }

    fn fourier_value(&self, seq: &FourierSeq, frame: &RadialFrame, alpha: f64) -> Result<Complex64> {
        let coeffs = self.kernel_coefficients(frame, alpha, seq.width())?;
        pair_functional(seq, &|n| coeffs.get(n), 1e-8)
    }

    /// Fourier coefficients of ξ ↦ P_n(z, ξ|λ), resolved past `width`.
    pub fn kernel_coefficients(&self, frame: &RadialFrame, alpha: f64, width: i64) -> Result<FourierCoefficients> {
        let decay = 40.0 / frame.one_minus_r.max(1e-12);
        let want = (4 * (width as usize + 1)).max(width as usize + decay.min(MAX_FFT as f64) as usize);
        let size = want.max(64).next_power_of_two().min(MAX_FFT);
        let step = 2.0 * PI / size as f64;
        let samples: Vec<Complex64> = (0..size).map(|j| self.kernel(frame, alpha, step * j as f64)).collect();
        circle_fft(&samples)
    }

    pub fn transform(&self, datum: &BoundaryDatum, z: DiskPoint) -> Result<TransformResult> {
        let frame = z.frame();
        let value = self.value(datum, z)?;
        let phi = self.normalizer(frame.r)?;
        Ok(TransformResult { value, normalized: value / phi, frame })
    }

    /// P_n(z, ξ|λ)/Φ_n(|z| |λ).
    pub fn normalized_kernel(&self, z: DiskPoint, xi: BoundaryPoint) -> Result<Complex64> {
        let frame = z.frame();
        Ok(self.kernel(&frame, z.arg(), xi.angle()) / self.normalizer(frame.r)?)
    }
}

pub fn poisson_transform(n: usize, s: &SpectralParam, datum: &BoundaryDatum, z: DiskPoint) -> Result<TransformResult> {
    TransformContext::new(n, *s)?.transform(datum, z)
}

pub fn normalized_kernel(n: usize, s: &SpectralParam, z: DiskPoint, xi: BoundaryPoint) -> Result<Complex64> {
    TransformContext::new(n, *s)?.normalized_kernel(z, xi)
}

/// Supremum of |K_{n,λ}(r, e^{iψ})| over the band |ψ| ∈ [ψ_min(r), π], per radius.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayReport {
    pub rows: Vec<(f64, f64)>,
}

pub fn kernel_decay_probe(n: usize, s: &SpectralParam, radii: &[f64], a: f64) -> Result<DecayReport> {
    s.require_off_ray()?;
    let limit = if s.is_critical() { 1.0 } else { 2.0 * s.mu.re / (2.0 * s.mu.re + 1.0) };
    if !(a > 0.0 && a < limit) {
        return Err(Error::InvalidArgument(format!("band exponent a = {a} must lie in (0, {limit})")));
    }
    let ctx = TransformContext::new(n, *s)?;
    let mut rows = Vec::new();
    for &r in radii {
        let frame = RadialFrame::from_r(r);
        let psi_min = if s.is_critical() { 2.0 * frame.tau.ln().powf(-a) } else { 2.0 * frame.tau.powf(-a) };
        let psi_min = psi_min.min(PI);
        let phi = ctx.normalizer(r)?;
        let samples = 512;
        let sup = (0..=samples)
            .map(|j| {
                let psi = psi_min * (PI / psi_min).powf(j as f64 / samples as f64);
                (ctx.kernel(&frame, 0.0, psi) / phi).norm()
            })
            .fold(0.0, f64::max);
        if let Some(&(_, prev)) = rows.last() {
            if sup > prev {
                return Err(Error::DecayViolation { r, previous: prev, current: sup });
            }
        }
        rows.push((r, sup));
    }
    Ok(DecayReport { rows })
}

/// Empirical C̃ with |K_{n,λ}| ≤ C̃·K_{0,λ*}: the sup of the ratio over a net.
pub fn kernel_comparison_constant(n: usize, s: &SpectralParam, radii: &[f64], angles: usize) -> Result<Vec<(f64, f64)>> {
    let star = s.associated_real().ok_or(Error::ForbiddenRay { lambda: s.lambda })?;
    let ctx = TransformContext::new(n, *s)?;
    let base = TransformContext::new(0, star)?;
    radii
        .iter()
        .map(|&r| {
            let frame = RadialFrame::from_r(r);
            let (p, q) = (ctx.normalizer(r)?, base.normalizer(r)?);
            let sup = (0..angles)
                .map(|j| {
                    let psi = PI * (j as f64 + 0.5) / angles as f64;
                    (ctx.kernel(&frame, 0.0, psi) / p).norm() / (base.kernel(&frame, 0.0, psi) / q).norm()
                })
                .fold(0.0, f64::max);
            Ok((r, sup))
        })
        .collect()
}

/// (1/2π)∫ f(re^{iφ}) dφ by the periodic trapezoid rule.
pub fn spherical_average<F: Fn(DiskPoint) -> Result<Complex64>>(f: F, r: f64) -> Result<Complex64> {
    let spec = QuadratureSpec::default().with_rel_tol(1e-11).with_peak_scale((1.0 - r).max(1e-4));
    let failure = std::cell::Cell::new(None);
    let g = |phi: f64| match DiskPoint::from_polar(r, phi).and_then(&f) {
        Ok(v) => v,
        Err(e) => {
            failure.set(Some(e));
            Complex64::new(0.0, 0.0)
        }
    };
    let q = integrate_trapezoid(&g, &spec, 0.0)?;
    match failure.into_inner() {
        Some(e) => Err(e),
        None => Ok(q.value),
    }
}

/// Radii 1 − 10^{−k}, k = 1..=kmax.
pub fn radial_ladder(kmax: u32) -> Vec<f64> {
    (1..=kmax).map(|k| 1.0 - 10f64.powi(-(k as i32))).collect()
}

/// The λ-harmonic extension h = P_λ g of a continuous density.
#[derive(Debug, Clone)]
pub struct DirichletField {
    pub g: Density,
    ctx: TransformContext,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DirichletReport {
    /// (r, sup over sampled ξ of |h(rξ)/Φ(r) − g(ξ)|).
    pub rows: Vec<(f64, f64)>,
}

impl DirichletReport {
    pub fn is_decreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].1 < w[0].1)
    }

    pub fn final_error(&self) -> f64 {
        self.rows.last().map_or(f64::NAN, |r| r.1)
    }
}

pub fn dirichlet_solve(s: &SpectralParam, g: Density) -> Result<DirichletField> {
    s.require_off_ray()?;
    Ok(DirichletField { g, ctx: TransformContext::new(0, *s)? })
}

impl DirichletField {
    pub fn value(&self, z: DiskPoint) -> Result<Complex64> {
        self.ctx.density_value(&self.g, &z.frame(), z.arg())
    }

    pub fn verify(&self, radii: &[f64], angles: usize) -> Result<DirichletReport> {
        let rows = radii
            .iter()
            .map(|&r| {
                let phi = self.ctx.normalizer(r)?;
                let frame = RadialFrame::from_r(r);
                let errs = (0..angles)
                    .into_par_iter()
                    .map(|j| {
                        let a = -PI + 2.0 * PI * (j as f64 + 0.5) / angles as f64;
                        let h = self.ctx.density_value(&self.g, &frame, a)?;
                        Ok((h / phi - self.g.eval(a)).norm())
                    })
                    .collect::<Result<Vec<f64>>>()?;
                Ok((r, errs.into_iter().fold(0.0, f64::max)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DirichletReport { rows })
    }
}

/// f_k = P_{k,λ} g_k for k = 0..n.
#[derive(Debug, Clone)]
pub struct RiquierSolution {
    pub data: Vec<Density>,
    ctxs: Vec<TransformContext>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RiquierRow {
    pub r: f64,
    /// Normalizing order k.
    pub k: usize,
    /// Field index j.
    pub j: usize,
    /// sup over ξ of |f_j(rξ)/Φ_k(r) − δ_jk g_k(ξ)|.
    pub error: f64,
}

pub fn riquier_solve(s: &SpectralParam, data: Vec<Density>) -> Result<RiquierSolution> {
    s.require_off_ray()?;
    let ctxs = (0..data.len()).map(|k| TransformContext::new(k, *s)).collect::<Result<Vec<_>>>()?;
    Ok(RiquierSolution { data, ctxs })
}

impl RiquierSolution {
    pub fn field(&self, k: usize, z: DiskPoint) -> Result<Complex64> {
        self.ctxs[k].density_value(&self.data[k], &z.frame(), z.arg())
    }

    /// Diagonal and lower cross terms f_j/Φ_k (j ≤ k) over a radial sweep.
    pub fn verify(&self, radii: &[f64], angles: usize) -> Result<Vec<RiquierRow>> {
        let mut rows = Vec::new();
        for &r in radii {
            let frame = RadialFrame::from_r(r);
            for k in 0..self.data.len() {
                let phi_k = self.ctxs[k].normalizer(r)?;
                for j in 0..=k {
                    let errs = (0..angles)
                        .into_par_iter()
                        .map(|i| {
                            let a = -PI + 2.0 * PI * (i as f64 + 0.5) / angles as f64;
                            let f = self.ctxs[j].density_value(&self.data[j], &frame, a)?;
                            let target = if j == k { self.data[k].eval(a) } else { Complex64::new(0.0, 0.0) };
                            Ok((f / phi_k - target).norm())
                        })
                        .collect::<Result<Vec<f64>>>()?;
                    rows.push(RiquierRow { r, k, j, error: errs.into_iter().fold(0.0, f64::max) });
                }
            }
        }
        Ok(rows)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ConvergenceMode {
    /// Sup over a ξ-grid of |f/Φ_n − g| (continuous g).
    Uniform { angles: usize },
    /// |f/Φ_n − g(ξ)| at the given continuity points.
    PointwiseAe { points: Vec<f64> },
    /// (mean over a ξ-grid of |f/Φ_n − g|^p)^{1/p}.
    Lp { p: f64, angles: usize },
    /// max_k |(1/2π)∫ f(rξ)/Φ_n ξ^{−k} − ν̂(k)|.
    WeakStar { modes: Vec<i64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub mode: ConvergenceMode,
    pub rows: Vec<(f64, f64)>,
}

pub fn convergence_probe(
    n: usize,
    s: &SpectralParam,
    datum: &BoundaryDatum,
    mode: &ConvergenceMode,
    radii: &[f64],
) -> Result<ConvergenceReport> {
    let ctx = TransformContext::new(n, *s)?;
    let limit = |a: f64| datum.density().map_or(Complex64::new(0.0, 0.0), |d| d.eval(a));
    let errors_at = |r: f64, angles: &[f64]| -> Result<Vec<f64>> {
        let phi = ctx.normalizer(r)?;
        angles
            .par_iter()
            .map(|&a| {
                let z = DiskPoint::from_polar(r, a)?;
                Ok((ctx.value(datum, z)? / phi - limit(a)).norm())
            })
            .collect()
    };
    let grid = |m: usize| (0..m).map(|j| -PI + 2.0 * PI * (j as f64 + 0.5) / m as f64).collect::<Vec<_>>();
    let rows = radii
        .iter()
        .map(|&r| {
            let metric = match mode {
                ConvergenceMode::Uniform { angles } => errors_at(r, &grid(*angles))?.into_iter().fold(0.0, f64::max),
                ConvergenceMode::PointwiseAe { points } => errors_at(r, points)?.into_iter().fold(0.0, f64::max),
                ConvergenceMode::Lp { p, angles } => {
                    let e = errors_at(r, &grid(*angles))?;
                    (e.iter().map(|x| x.powf(*p)).sum::<f64>() / e.len() as f64).powf(1.0 / p)
                }
                ConvergenceMode::WeakStar { modes } => {
                    // By rotation invariance the pairing factors as κ_k(r)/Φ_n(r)·ν̂(k),
                    // with κ_k the k-th coefficient of the radial kernel profile.
                    let phi = ctx.normalizer(r)?;
                    let frame = RadialFrame::from_r(r);
                    let spec = QuadratureSpec::default().with_rel_tol(1e-11).with_peak_scale(1.0 / frame.tau);
                    let mut worst: f64 = 0.0;
                    for &k in modes {
                        let kappa = integrate_circle(|psi| ctx.kernel(&frame, 0.0, psi) * (k as f64 * psi).cos(), &spec)?
                            .value;
                        let nu = datum.fourier_coefficient(k)?;
                        worst = worst.max((kappa / phi * nu - nu).norm());
                    }
                    worst
                }
            };
            Ok((r, metric))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceReport { mode: mode.clone(), rows })
}
