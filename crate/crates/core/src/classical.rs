//! The λ = 0 Fourier calculus: d_n coefficients, associated biharmonic
//! functions, the spiral polynomial and the lacunary Borichev function.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::DiskPoint;
use crate::numerics::poly::ComplexPoly;
use crate::numerics::quadrature::{integrate_breaks, QuadratureSpec};
use crate::transforms::FourierSeq;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// floor(2^320 / 2π).
const INV_TWO_PI_320: &str =
    "28be60db9391054a7f09d5f47d4d377036d8a5664f10e4107f9458eaf7aef1586dc91b8e909374b8";
const INV_TWO_PI_BITS: i64 = 320;

/// Σ_{k=1}^n 1/k.
pub fn harmonic_number(n: u64) -> f64 {
    if n <= 10_000 {
        return (1..=n).rev().map(|k| 1.0 / k as f64).sum();
    }
    let x = n as f64;
    x.ln() + EULER_GAMMA + 0.5 / x - 1.0 / (12.0 * x * x) + 1.0 / (120.0 * x.powi(4))
}

/// log(1/(1 − r²)).
pub fn log_inv_one_minus_r2(r: f64) -> f64 {
    -((1.0 - r) * (1.0 + r)).ln()
}

/// d_n(r) = H_n + Σ_{k≥1} r^{2k}/(k + n).
pub fn d_coefficient(n: u64, r: f64) -> f64 {
    assert!((0.0..1.0).contains(&r), "d_coefficient needs 0 <= r < 1, got {r}");
    if n == 0 {
        return log_inv_one_minus_r2(r);
    }
    harmonic_number(n) + shifted_log_tail(n, r)
}

/// Σ_{k≥1} y^k/(k + n) with y = r².
fn shifted_log_tail(n: u64, r: f64) -> f64 {
    let y = r * r;
    if y == 0.0 {
        return 0.0;
    }
    if y < 0.99 {
        let (mut sum, mut pow) = (0.0, 1.0);
        for k in 1.. {
            pow *= y;
            let term = pow / (k as f64 + n as f64);
            sum += term;
            if term <= 1e-17 * sum {
                break;
            }
        }
        return sum;
    }
    // ∫_0^∞ y e^{−(n+1)s} / (1 − y e^{−s}) ds, peaked at s ~ 1 − y.
    let one_minus_y = (1.0 - r) * (1.0 + r);
    let m = n as f64 + 1.0;
    let upper = 60.0 / m + 60.0 * one_minus_y;
    let mut breaks = vec![0.0];
    let mut x = one_minus_y.min(1.0 / m) / 4.0;
    while x < upper {
        breaks.push(x);
        x *= 2.0;
    }
    breaks.push(upper);
    let f = |s: f64| Complex64::new(y * (-m * s).exp() / (one_minus_y + y * -(-s).exp_m1()), 0.0);
    let spec = QuadratureSpec::default().with_rel_tol(1e-13);
    match integrate_breaks(&f, &breaks, &spec) {
        Ok(q) => q.value.re,
        Err(Error::NonConvergence { value, .. }) => value.re,
        Err(_) => f64::NAN,
    }
}

/// The literal upper bound (1 + n(1 − r²))·log(1/(1 − r²)).
pub fn dnlog_upper(n: u64, r: f64) -> f64 {
    (1.0 + n as f64 * (1.0 - r * r)) * log_inv_one_minus_r2(r)
}

/// The valid upper bound (1 + n(1 − r²)/r²)·log(1/(1 − r²)).
pub fn dnlog_upper_corrected(n: u64, r: f64) -> f64 {
    (1.0 + n as f64 * (1.0 - r * r) / (r * r)) * log_inv_one_minus_r2(r)
}

/// h(z) = Σ h_m z^m stored sparsely.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct AnalyticSeries {
    /// (exponent, coefficient), exponents strictly increasing.
    pub terms: Vec<(u64, Complex64)>,
    /// Declared bound on Σ |h_m| beyond the last stored exponent.
    pub tail_bound: f64,
}

impl AnalyticSeries {
    pub fn new(mut terms: Vec<(u64, Complex64)>) -> Self {
        terms.sort_by_key(|t| t.0);
        terms.dedup_by(|b, a| {
            if a.0 == b.0 {
                a.1 += b.1;
                true
            } else {
                false
            }
        });
        AnalyticSeries { terms, tail_bound: 0.0 }
    }

    pub fn dense(coeffs: &[Complex64]) -> Self {
        Self::new(
            coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| **c != Complex64::new(0.0, 0.0))
                .map(|(m, c)| (m as u64, *c))
                .collect(),
        )
    }

    pub fn evaluate(&self, z: DiskPoint) -> Result<Complex64> {
        self.terms.iter().map(|&(m, c)| Ok(c * power(z, m)?)).sum()
    }

    /// Σ m|h_m| r^m.
    pub fn weighted_abs(&self, r: f64) -> f64 {
        self.terms.iter().map(|&(m, c)| m as f64 * c.norm() * r.powf(m as f64)).sum()
    }

    fn max_exponent(&self) -> u64 {
        self.terms.last().map_or(0, |t| t.0)
    }
}

/// z^m with the angle m·arg z reduced mod 2π in extended precision.
///
/// The modulus is exp(m log|z|) and underflows to exactly zero.
pub fn power(z: DiskPoint, m: u64) -> Result<Complex64> {
    if m == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let r = z.modulus();
    if r == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let modulus = (m as f64 * r.ln()).exp();
    if modulus == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let angle = reduce_angle(z.arg(), m)?;
    Ok(Complex64::from_polar(modulus, angle))
}

/// m·α mod 2π in [0, 2π), exact up to the stored bits of 1/(2π).
pub fn reduce_angle(alpha: f64, m: u64) -> Result<f64> {
    if alpha == 0.0 || m == 0 {
        return Ok(0.0);
    }
    if m < (1 << 20) && (m as f64 * alpha).abs() < 1e6 {
        return Ok((m as f64 * alpha).rem_euclid(2.0 * PI));
    }
    let (mant, exp) = decompose(alpha.abs());
    // m·|α|/(2π) = mant·m·C·2^{exp − 320}, C = floor(2^320/(2π)).
    let shift = INV_TWO_PI_BITS - exp;
    let magnitude_bits = 64 - m.leading_zeros() as i64 + 53 + exp;
    if shift <= 64 || magnitude_bits > INV_TWO_PI_BITS - 128 {
        return Err(Error::PrecisionLoss { k: magnitude_bits.max(0) as usize });
    }
    let c = BigUint::parse_bytes(INV_TWO_PI_320.as_bytes(), 16).expect("valid constant");
    let product = c * BigUint::from(mant) * BigUint::from(m);
    let mask = (BigUint::one() << shift as usize) - BigUint::one();
    let frac_bits: BigUint = (product & mask) >> (shift as usize - 64);
    let frac = frac_bits.to_u64().unwrap_or(0) as f64 / 2f64.powi(64);
    let turn = if alpha < 0.0 && frac != 0.0 { 1.0 - frac } else { frac };
    Ok(2.0 * PI * turn)
}

/// x = mant·2^exp with an integer mantissa.
fn decompose(x: f64) -> (u64, i64) {
    let bits = x.to_bits();
    let raw_exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    if raw_exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), raw_exp - 1075)
    }
}

/// f_h(z) = Σ h_m d_m(|z|) z^m.
pub fn associated_biharmonic(h: &AnalyticSeries, z: DiskPoint) -> Result<Complex64> {
    let r = z.modulus();
    let mut value = Complex64::new(0.0, 0.0);
    for &(m, c) in &h.terms {
        let zm = power(z, m)?;
        if zm != Complex64::new(0.0, 0.0) {
            value += c * d_coefficient(m, r) * zm;
        }
    }
    if h.tail_bound > 0.0 {
        let next = h.max_exponent() + 1;
        let tail = h.tail_bound * d_coefficient(next, r) * r.powf(next as f64);
        if tail > 1e-8 * value.norm() {
            return Err(Error::TruncationWarning { value, tail, magnitude: value.norm() });
        }
    }
    Ok(value)
}

/// ν_n = conj(h_{−n}) for n ≤ 0, zero otherwise.
pub fn functional_from_series(h: &AnalyticSeries) -> FourierSeq {
    let mut seq = FourierSeq::from_pairs(h.terms.iter().map(|&(m, c)| (-(m as i64), c.conj())));
    seq.declared_tail = h.tail_bound;
    seq
}

/// The functional of Re h: ν_0 = Re h_0, ν_m = h_m/2, ν_{−m} = conj(h_m)/2.
pub fn functional_from_real_part(h: &AnalyticSeries) -> FourierSeq {
    let mut pairs = Vec::new();
    for &(m, c) in &h.terms {
        if m == 0 {
            pairs.push((0, Complex64::new(c.re, 0.0)));
        } else {
            pairs.push((m as i64, c / 2.0));
            pairs.push((-(m as i64), c.conj() / 2.0));
        }
    }
    let mut seq = FourierSeq::from_pairs(pairs);
    seq.declared_tail = h.tail_bound;
    seq
}

/// Target value and tolerance of the spiral fit.
pub const RUNGE_TARGET: f64 = 5.0 / 3.0;
pub const RUNGE_RADIUS: f64 = 2.0 / 3.0;
pub const RUNGE_MARGIN: f64 = 0.05;
pub const RUNGE_FIT_SAMPLES: usize = 512;
pub const RUNGE_CHECK_SAMPLES: usize = 4096;

/// The spiral ((t+1)/6)·e^{3πit}, t ∈ [0, 1].
pub fn spiral_point(t: f64) -> Complex64 {
    Complex64::from_polar((t + 1.0) / 6.0, 3.0 * PI * t)
}

/// `count` spiral points at t = j/(count − 1).
pub fn spiral_samples(count: usize) -> Vec<Complex64> {
    (0..count).map(|j| spiral_point(j as f64 / (count - 1) as f64)).collect()
}

/// Spiral points at the cell midpoints t = (j + 1/2)/count.
pub fn spiral_check_samples(count: usize) -> Vec<Complex64> {
    (0..count).map(|j| spiral_point((j as f64 + 0.5) / count as f64)).collect()
}

/// The polynomial p of the lacunary construction and its truncation depth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LacunarySpec {
    /// p with p(0) = 0.
    pub p: ComplexPoly,
    /// B = Σ |p_j|.
    pub b: f64,
    pub k_max: usize,
    /// max |p − 5/3| over the fitting samples.
    pub fit_error: f64,
}

impl LacunarySpec {
    pub fn new(p: ComplexPoly, k_max: usize) -> Self {
        let b = p.coeffs().iter().map(|c| c.norm()).sum();
        let fit_error = spiral_error(&p, &spiral_samples(RUNGE_FIT_SAMPLES));
        LacunarySpec { p, b, k_max, fit_error }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "coefficients": self.p.coeffs().iter().map(|c| [c.re, c.im]).collect::<Vec<_>>(),
            "B": self.b,
            "k_max": self.k_max,
            "fit_error": self.fit_error,
        })
    }
}

/// max over the samples of |p − 5/3|.
pub fn spiral_error(p: &ComplexPoly, samples: &[Complex64]) -> f64 {
    samples
        .iter()
        .map(|&w| (p.evaluate(w) - RUNGE_TARGET).norm())
        .fold(0.0, f64::max)
}

/// Least-squares fit of Σ_{j=1}^s p_j z^j to 5/3 on the fitting samples.
pub fn spiral_least_squares(s: usize) -> ComplexPoly {
    let z = spiral_samples(RUNGE_FIT_SAMPLES);
    // Columns (3z)^j keep the spiral modulus near one.
    let a = DMatrix::from_fn(z.len(), s, |i, j| (z[i] * 3.0).powu(j as u32 + 1));
    let b = DVector::from_element(z.len(), Complex64::new(RUNGE_TARGET, 0.0));
    let x = a.svd(true, true).solve(&b, 1e-14).expect("svd with both factors");
    let mut coeffs = vec![Complex64::new(0.0, 0.0)];
    coeffs.extend(x.iter().enumerate().map(|(j, c)| c * 3f64.powi(j as i32 + 1)));
    ComplexPoly::new(coeffs)
}

/// The smallest s ≤ budget meeting |p − 5/3| < 2/3 − margin on the fitting samples.
pub fn runge_spiral_fit(budget: usize, k_max: usize) -> Result<LacunarySpec> {
    let (spec, best_degree) = runge_best_effort(budget, k_max);
    if spec.fit_error < RUNGE_RADIUS - RUNGE_MARGIN {
        return Ok(spec);
    }
    Err(Error::FitFailed { budget, best_error: spec.fit_error, best_degree })
}

/// The first fit meeting the bound, else the fit of least sampled error, with its degree.
pub fn runge_best_effort(budget: usize, k_max: usize) -> (LacunarySpec, usize) {
    let mut best: Option<(LacunarySpec, usize)> = None;
    for s in 1..=budget.max(1) {
        let spec = LacunarySpec::new(spiral_least_squares(s), k_max);
        let done = spec.fit_error < RUNGE_RADIUS - RUNGE_MARGIN;
        if best.as_ref().map_or(true, |b| spec.fit_error < b.0.fit_error) {
            best = Some((spec, s));
        }
        if done {
            break;
        }
    }
    best.expect("budget is at least one")
}

/// h(z) = Σ_{k=1}^{k_max} k!·p(z^{2^{k!}}).
pub fn borichev_h(z: DiskPoint, spec: &LacunarySpec) -> Result<Complex64> {
    let mut value = Complex64::new(0.0, 0.0);
    let mut fact: u64 = 1;
    for k in 1..=spec.k_max as u64 {
        fact *= k;
        let w = match lacunary_power(z, fact) {
            Ok(w) => w,
            Err(Error::PrecisionLoss { .. }) => return Err(Error::PrecisionLoss { k: k as usize }),
            Err(e) => return Err(e),
        };
        if w != Complex64::new(0.0, 0.0) {
            value += fact as f64 * spec.p.evaluate(w);
        }
    }
    Ok(value)
}

/// z^{2^e}; beyond e = 63 the modulus underflows for every double |z| < 1.
fn lacunary_power(z: DiskPoint, e: u64) -> Result<Complex64> {
    let r = z.modulus();
    if r == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let modulus = (2f64.powf(e as f64) * r.ln()).exp();
    if modulus == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if e >= 64 {
        return Err(Error::PrecisionLoss { k: e as usize });
    }
    Ok(Complex64::from_polar(modulus, reduce_angle(z.arg(), 1u64 << e)?))
}

/// c with Σ_k k!|z|^{2^{k!}} ≤ |z|² + 4|log(1 − |z|)| ≤ c|log(1 − |z|)|.
pub fn logbound_constant() -> f64 {
    // Sampled supremum of r²/|log(1 − r)|.
    let sup = (1..=100_000)
        .map(|j| {
            let r = j as f64 / 100_001.0;
            r * r / -(-r).ln_1p()
        })
        .fold(0.0, f64::max);
    4.0 + sup
}

/// |h(z)| / |log(1 − |z|)|.
pub fn borichev_ratio(z: DiskPoint, spec: &LacunarySpec) -> Result<f64> {
    let r = z.modulus();
    Ok(borichev_h(z, spec)?.norm() / (-(-r).ln_1p()).abs())
}

/// Sampled sup of |h|/|log(1 − |z|)| on |z| = 1 − 2^{−N!√N}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircleSup {
    pub n: usize,
    pub circle_radius: f64,
    pub sup_value: f64,
    /// Value at angle zero.
    pub radial_value: f64,
}

/// Angular samples used on the test circles.
pub const CIRCLE_SAMPLES: usize = 1 << 15;

pub fn borichev_circle_sup(n: usize, spec: &LacunarySpec) -> Result<CircleSup> {
    // For N ≥ 4 the k = 4 term oscillates at frequency 2^24·deg p, beyond any angular net.
    if !(2..=3).contains(&n) {
        return Err(Error::PrecisionLoss { k: n });
    }
    let fact: f64 = (1..=n).map(|k| k as f64).product();
    let one_minus = 2f64.powf(-fact * (n as f64).sqrt());
    let radius = 1.0 - one_minus;
    let values = (0..CIRCLE_SAMPLES)
        .into_par_iter()
        .map(|j| {
            let z = DiskPoint::from_polar(radius, -PI + 2.0 * PI * j as f64 / CIRCLE_SAMPLES as f64)?;
            Ok(borichev_h(z, spec)?.norm())
        })
        .collect::<Result<Vec<f64>>>()?;
    let log = one_minus.ln().abs();
    let sup = values.iter().copied().fold(0.0, f64::max) / log;
    let radial = borichev_h(DiskPoint::new(radius, 0.0)?, spec)?.norm() / log;
    Ok(CircleSup { n, circle_radius: radius, sup_value: sup.max(radial), radial_value: radial })
}

/// A point z_N = r_N^{1/2^{N!}} e^{iα} with z_N^{2^{N!}} on the spiral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub n: usize,
    pub alpha: f64,
    pub r_n: f64,
    pub z_modulus: f64,
    /// |h(z_N)| / |log(1 − |z_N|)|.
    pub ratio: f64,
    /// |p(w_N)|.
    pub p_abs: f64,
}

pub fn borichev_witness(n: usize, alpha: f64, spec: &LacunarySpec) -> Result<Witness> {
    if !(1..=4).contains(&n) {
        return Err(Error::InvalidArgument(format!("witness order N must lie in 1..=4, got {n}")));
    }
    let e: u64 = (1..=n as u64).product();
    let theta = reduce_angle(alpha, 1u64 << e)?;
    // 3πt ≡ θ (mod 2π) with t ∈ [0, 1].
    let t = theta / (3.0 * PI);
    let r_n = (t + 1.0) / 6.0;
    let z_modulus = (r_n.ln() / 2f64.powi(e as i32)).exp();
    let z = DiskPoint::from_polar(z_modulus, alpha)?;
    let w = Complex64::from_polar(r_n, theta);
    Ok(Witness { n, alpha, r_n, z_modulus, ratio: borichev_ratio(z, spec)?, p_abs: spec.p.evaluate(w).norm() })
}

/// h as a sparse series: coefficient k!·p_j at exponent j·2^{k!}.
pub fn borichev_series(spec: &LacunarySpec) -> Result<AnalyticSeries> {
    let mut terms = Vec::new();
    let mut fact: u64 = 1;
    for k in 1..=spec.k_max as u64 {
        fact *= k;
        if fact >= 58 {
            return Err(Error::PrecisionLoss { k: k as usize });
        }
        for (j, c) in spec.p.coeffs().iter().enumerate().skip(1) {
            terms.push((j as u64 * (1u64 << fact), c * fact as f64));
        }
    }
    Ok(AnalyticSeries::new(terms))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FhRow {
    pub r: f64,
    pub alpha: f64,
    /// |f_h(z)| / R².
    pub scaled: f64,
    /// |f_h − log(1/(1 − r²))·h| / log(1/(1 − r)).
    pub deviation: f64,
    /// (1 − r²)·Σ m|h_m| r^m, the literal bound on |f_h − log(1/(1 − r²))·h|.
    pub literal_bound: f64,
    /// The same with the factor log(1/(1 − r²))/r².
    pub corrected_bound: f64,
    /// |f_h − log(1/(1 − r²))·h|.
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FhReport {
    pub rows: Vec<FhRow>,
    pub max_scaled: f64,
    /// Fitted C̃ = max deviation.
    pub fitted_c: f64,
}

pub fn borichev_fh_probe(radii: &[f64], angles: &[f64], spec: &LacunarySpec) -> Result<FhReport> {
    let h = borichev_series(spec)?;
    let jobs: Vec<(f64, f64)> = radii.iter().flat_map(|&r| angles.iter().map(move |&a| (r, a))).collect();
    let rows = jobs
        .par_iter()
        .map(|&(r, alpha)| {
            let z = DiskPoint::from_polar(r, alpha)?;
            let f = associated_biharmonic(&h, z)?;
            let hz = h.evaluate(z)?;
            let l2 = log_inv_one_minus_r2(r);
            let big_r = ((1.0 + r) / (1.0 - r)).ln();
            let gap = (f - l2 * hz).norm();
            let weighted = h.weighted_abs(r);
            Ok(FhRow {
                r,
                alpha,
                scaled: f.norm() / (big_r * big_r),
                deviation: gap / -(-r).ln_1p(),
                literal_bound: (1.0 - r * r) * weighted,
                corrected_bound: (1.0 - r * r) * l2 / (r * r) * weighted,
                gap,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let max_scaled = rows.iter().map(|r| r.scaled).fold(0.0, f64::max);
    let fitted_c = rows.iter().map(|r| r.deviation).fold(0.0, f64::max);
    Ok(FhReport { rows, max_scaled, fitted_c })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{log_poisson, poisson_kernel, BoundaryPoint};
    use crate::numerics::fd::fd_laplacian;
    use crate::numerics::fft::{circle_fft, sample_circle};
    use crate::spectral::SpectralParam;
    use crate::transforms::{BoundaryDatum, TransformContext};
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn d_coefficient_examples() {
        for r in [0.0, 0.3, 0.9, 0.999] {
            assert!((d_coefficient(0, r) + (1.0 - r * r).ln()).abs() < 1e-12 * d_coefficient(0, r).max(1e-3));
        }
        for n in [1, 2, 5, 30] {
            assert!((d_coefficient(n, 0.0) - harmonic_number(n)).abs() < 1e-15);
        }
        // Both evaluation routes agree where they meet.
        for n in [1u64, 7, 30] {
            let r = 0.99f64.sqrt();
            let below = d_coefficient(n, r * (1.0 - 1e-12));
            let above = d_coefficient(n, r * (1.0 + 1e-12));
            assert!((below - above).abs() < 1e-9 * above, "{below} {above}");
        }
        assert!((harmonic_number(10_001) - harmonic_number(10_000) - 1.0 / 10_001.0).abs() < 1e-12);
    }

    #[test]
    fn d_coefficient_matches_fft_of_p_log_p() {
        for r in [0.3, 0.5, 0.7] {
            let z = DiskPoint::new(r, 0.0).unwrap();
            let samples = sample_circle(
                |phi| {
                    let xi = BoundaryPoint::new(phi);
                    c(poisson_kernel(z, xi) * log_poisson(z, xi), 0.0)
                },
                256,
            );
            let fc = circle_fft(&samples).unwrap();
            for n in -20i64..=20 {
                let m = n.unsigned_abs();
                let want = r.powi(m as i32) * d_coefficient(m, r);
                assert!((fc.get(n) - want).norm() < 1e-10, "n={n} r={r}");
            }
        }
    }

    #[test]
    fn angle_reduction() {
        for &(alpha, m) in &[(0.3f64, 1u64 << 24), (-1.7, 3 << 24), (2.9, 1 << 6), (1e-3, 1 << 40)] {
            let got = reduce_angle(alpha, m).unwrap();
            // m·α computed in 128-bit fixed point on the exact double α.
            let exact = alpha * m as f64;
            let two_pi = 2.0 * PI;
            if exact.abs() < 1e12 {
                let diff = (got - exact.rem_euclid(two_pi)).abs();
                assert!(diff.min(two_pi - diff) < 1e-15 * exact.abs() + 1e-13, "{alpha} {m}");
            }
        }
        assert_eq!(reduce_angle(0.0, 1 << 30).unwrap(), 0.0);
        let z = DiskPoint::from_polar(0.999, 0.4).unwrap();
        let direct = z.to_complex().powu(50);
        assert!((power(z, 50).unwrap() - direct).norm() < 1e-13);
        assert_eq!(power(DiskPoint::from_polar(0.9, 1.0).unwrap(), 1 << 40).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn series_and_functionals() {
        let h = AnalyticSeries::dense(&[c(0.0, 0.0), c(1.0, 0.0)]);
        let z = DiskPoint::from_polar(0.6, 0.7).unwrap();
        let f = associated_biharmonic(&h, z).unwrap();
        assert!((f - d_coefficient(1, 0.6) * z.to_complex()).norm() < 1e-14);
        let nu = functional_from_series(&h);
        assert_eq!(nu.coeffs.len(), 1);
        assert_eq!(nu.get(-1), c(1.0, 0.0));
        let k = AnalyticSeries::dense(&[c(2.0, -1.0)]);
        assert_eq!(functional_from_series(&k).get(0), c(2.0, 1.0));
        // Round trip through the order-zero and order-one transforms at λ = 0.
        let h = AnalyticSeries::dense(&[c(0.5, 0.0), c(0.0, 1.0), c(0.0, 0.0), c(-0.3, 0.2)]);
        let s0 = SpectralParam::real(0.0);
        let (ctx0, ctx1) = (TransformContext::new(0, s0).unwrap(), TransformContext::new(1, s0).unwrap());
        let datum = BoundaryDatum::Fourier(functional_from_series(&h));
        let v0 = ctx0.value(&datum, z).unwrap();
        let v1 = ctx1.value(&datum, z).unwrap();
        assert!((v0 - h.evaluate(z).unwrap()).norm() < 1e-12);
        assert!((v1 - associated_biharmonic(&h, z).unwrap()).norm() < 1e-11, "{v1}");
        let re = BoundaryDatum::Fourier(functional_from_real_part(&h));
        assert!((ctx0.value(&re, z).unwrap() - h.evaluate(z).unwrap().re).norm() < 1e-12);
        assert!((ctx1.value(&re, z).unwrap() - associated_biharmonic(&h, z).unwrap().re).norm() < 1e-11);
        // h = 1: f_h = d_0(r), the order-one average of Lebesgue measure.
        let one = AnalyticSeries::dense(&[c(1.0, 0.0)]);
        let phi1 = ctx1.value(&BoundaryDatum::lebesgue(), z).unwrap();
        assert!((associated_biharmonic(&one, z).unwrap() - phi1).norm() < 1e-10);
    }

    #[test]
    fn associated_function_is_biharmonic() {
        let h = AnalyticSeries::dense(&[c(0.2, 0.0), c(1.0, 0.5), c(0.0, -0.7), c(0.4, 0.0)]);
        let f = |p: DiskPoint| associated_biharmonic(&h, p).unwrap();
        let lap = |p: DiskPoint| fd_laplacian(f, p, 5e-3).unwrap();
        let z = DiskPoint::from_polar(0.5, 0.3).unwrap();
        let bi = fd_laplacian(lap, z, 5e-3).unwrap();
        assert!(bi.norm() < 1e-3 * lap(z).norm(), "{bi}");
    }

    #[test]
    fn truncation_warning() {
        let mut h = AnalyticSeries::dense(&[c(1.0, 0.0), c(1.0, 0.0)]);
        h.tail_bound = 1e-6;
        assert!(matches!(
            associated_biharmonic(&h, DiskPoint::new(0.9, 0.0).unwrap()),
            Err(Error::TruncationWarning { .. })
        ));
        assert!(associated_biharmonic(&h, DiskPoint::new(1e-3, 0.0).unwrap()).is_ok());
    }

    #[test]
    fn spiral_fit_properties() {
        let (spec, degree) = runge_best_effort(8, 4);
        assert!(degree >= 1 && spec.p.coeff(0) == c(0.0, 0.0));
        for j in 0..64 {
            let z = Complex64::from_polar(j as f64 / 64.0, 0.37 * j as f64);
            assert!(spec.p.evaluate(z).norm() <= spec.b * z.norm() + 1e-12);
        }
        match runge_spiral_fit(8, 4) {
            Ok(s) => assert!(spiral_error(&s.p, &spiral_check_samples(RUNGE_CHECK_SAMPLES)) < RUNGE_RADIUS),
            Err(Error::FitFailed { best_error, .. }) => assert_eq!(best_error, spec.fit_error),
            Err(e) => panic!("{e}"),
        }
        let json = spec.to_json();
        assert_eq!(json["k_max"], 4);
    }

    #[test]
    fn borichev_examples() {
        let spec = LacunarySpec::new(ComplexPoly::new(vec![c(0.0, 0.0), c(1.0, 0.0), c(0.5, 0.0)]), 4);
        assert_eq!(borichev_h(DiskPoint::origin(), &spec).unwrap(), c(0.0, 0.0));
        // Small |z|: h is the k = 1 term plus small corrections.
        let z = DiskPoint::from_polar(0.3, 0.2).unwrap();
        let w = z.to_complex().powu(2);
        let direct = spec.p.evaluate(w) + 2.0 * spec.p.evaluate(w.powu(2)) + 6.0 * spec.p.evaluate(w.powu(32));
        assert!((borichev_h(z, &spec).unwrap() - direct).norm() < 1e-14);
        let c_log = logbound_constant();
        assert!(c_log > 4.0 && c_log <= 5.0);
        for k in 1..=10 {
            let r = 1.0 - 10f64.powf(-(k as f64) / 2.0);
            let ratio = borichev_ratio(DiskPoint::new(r, 0.0).unwrap(), &spec).unwrap();
            assert!(ratio <= c_log * spec.b, "r={r} ratio={ratio}");
        }
        let sup = borichev_circle_sup(2, &spec).unwrap();
        assert!(sup.radial_value <= sup.sup_value && sup.sup_value.is_finite());
        assert!(borichev_circle_sup(5, &spec).is_err());
        let w = borichev_witness(2, 0.7, &spec).unwrap();
        assert!((1.0 / 6.0..=1.0 / 3.0).contains(&w.r_n));
        let zn = DiskPoint::from_polar(w.z_modulus, 0.7).unwrap();
        let wn = zn.to_complex().powu(4);
        assert!((wn.norm() - w.r_n).abs() < 1e-12);
        let t = (w.r_n * 6.0 - 1.0).clamp(0.0, 1.0);
        assert!((wn - spiral_point(t)).norm() < 1e-10);
    }

    #[test]
    fn fh_probe_single_mode() {
        let spec = LacunarySpec::new(ComplexPoly::new(vec![c(0.0, 0.0), c(1.0, 0.0)]), 3);
        let radii: Vec<f64> = (1..=10).map(|k| 1.0 - 10f64.powf(-(k as f64) / 2.0)).collect();
        let rep = borichev_fh_probe(&radii, &[0.0, 1.0], &spec).unwrap();
        assert!(rep.max_scaled.is_finite() && rep.fitted_c.is_finite());
        for row in &rep.rows {
            assert!(row.gap <= row.corrected_bound * (1.0 + 1e-9) + 1e-12, "{row:?}");
        }
        // h = z: f_h/R² → 0.
        let h = AnalyticSeries::dense(&[c(0.0, 0.0), c(1.0, 0.0)]);
        let scaled: Vec<f64> = [0.99f64, 0.9999, 0.999999]
            .iter()
            .map(|&r| {
                let big_r = ((1.0 + r) / (1.0 - r)).ln();
                associated_biharmonic(&h, DiskPoint::new(r, 0.0).unwrap()).unwrap().norm() / (big_r * big_r)
            })
            .collect();
        assert!(scaled[2] < scaled[1] && scaled[1] < scaled[0]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn d_monotone_and_lower_bound(n in 1u64..30, r in 0.01..0.9999f64) {
            let (a, b) = (d_coefficient(n - 1, r), d_coefficient(n, r));
            prop_assert!(b >= a);
            prop_assert!(b >= log_inv_one_minus_r2(r) * (1.0 - 1e-14));
            prop_assert!(b <= dnlog_upper_corrected(n, r) * (1.0 + 1e-12));
        }

        #[test]
        fn large_index_route(n in 100u64..5000, k in 1i32..8) {
            // The integral route against the direct series at moderate r.
            let r = (1.0 - 10f64.powi(-k)).min(0.994);
            let y = r * r;
            let mut direct = 0.0;
            let mut pow = 1.0;
            for j in 1..200_000 {
                pow *= y;
                direct += pow / (j as f64 + n as f64);
                if pow < 1e-18 { break; }
            }
            let got = shifted_log_tail(n, r);
            if y >= 0.99 {
                prop_assert!((got - direct).abs() < 1e-11 * direct.max(1e-300), "{got} {direct}");
            }
        }
    }
}
