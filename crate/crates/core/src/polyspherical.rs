//! Polyspherical functions Φ_n(·|λ) and |Φ|_n: quadrature and closed forms,
//! boundary and small-r asymptotics, positivity and zeros.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::RadialFrame;
use crate::numerics::hypergeometric::gauss_2f1;
use crate::numerics::quadrature::{
    halfline_breaks, integrate_breaks, integrate_circle, integrate_circle_at, integrate_halfline_peak,
    Quadrature, QuadratureSpec, PEAK_SWITCH,
};
use crate::spectral::{factorial, PolyKernelForm, SpectralClass, SpectralParam};

/// Default radius excluded around the pole of odd-order normalized kernels.
pub const DEFAULT_ODD_EPSILON: f64 = 0.05;

/// Number of points of the zero scan, geometric in 1 − r from 1 to 1e−6.
pub const SCAN_POINTS: usize = 2000;

/// Relative size |Φ_n|/|Φ|_n below which a scan point counts as a zero.
pub const ZERO_THRESHOLD: f64 = 1e-6;

/// (1/2π)∫ f(log P_r(φ)) dφ over the circle of the frame.
///
/// Peaked profiles (τ ≥ 20) are integrated in the variable u = τ sin(φ/2)
/// on φ ∈ [0, π/3] and directly on [π/3, π]. With `kink` set, the panels are
/// cut where log P = 0, for integrands such as |log P|^n.
pub fn radial_average<F: Fn(f64) -> Complex64>(
    frame: &RadialFrame,
    f: F,
    rel_tol: f64,
    kink: bool,
) -> Result<Quadrature> {
    if frame.r == 0.0 {
        return Ok(Quadrature { value: f(0.0), error: 0.0 });
    }
    let spec = QuadratureSpec::default().with_rel_tol(rel_tol).with_peak_scale(1.0 / frame.tau);
    // log P = 0 where sin²(φ/2) = (1 − r)/2.
    let half_gap = (0.5 * frame.one_minus_r).sqrt();
    let phi0 = 2.0 * half_gap.asin();
    if frame.tau * PEAK_SWITCH < 1.0 {
        let g = |phi: f64| f(frame.log_poisson(phi));
        return if kink {
            integrate_circle_at(g, &spec, 0.0, &[phi0, -phi0])
        } else {
            integrate_circle(g, &spec)
        };
    }
    let tau = frame.tau;
    let u_part = |u: f64| f(frame.big_r - (u * u).ln_1p()) * (2.0 / ((tau - u) * (tau + u)).sqrt());
    let extra = if kink { vec![tau * half_gap] } else { Vec::new() };
    let q1 = integrate_breaks(&u_part, &halfline_breaks(0.5 * tau, &extra), &spec)?;
    let mut breaks = vec![PI / 3.0, PI / 2.0, 2.0 * PI / 3.0, 5.0 * PI / 6.0, PI];
    if kink && phi0 > PI / 3.0 {
        breaks.push(phi0);
        breaks.sort_by(|a, b| a.total_cmp(b));
    }
    let q2 = integrate_breaks(&|phi: f64| f(frame.log_poisson(phi)), &breaks, &spec)?;
    Ok(Quadrature { value: (q1.value + q2.value) / PI, error: (q1.error + q2.error) / PI })
}

/// Φ_n(r|λ) = (1/2π)∫ P_n(r, e^{iφ}|λ) dφ.
pub fn phi_n(n: usize, r: f64, s: &SpectralParam) -> Result<Complex64> {
    check_radius(r)?;
    phi_n_frame(n, &RadialFrame::from_r(r), s)
}

/// Φ_n on the circle described by a radial frame (use for R beyond ~20).
pub fn phi_n_frame(n: usize, frame: &RadialFrame, s: &SpectralParam) -> Result<Complex64> {
    let form = PolyKernelForm::new(n, *s);
    Ok(radial_average(frame, |lp| form.eval_log(lp), 1e-12, false)?.value)
}

/// |Φ|_n(r|λ) = (1/2π)∫ |P_n(r, e^{iφ}|λ)| dφ.
pub fn phi_abs(n: usize, r: f64, s: &SpectralParam) -> Result<f64> {
    check_radius(r)?;
    phi_abs_frame(n, &RadialFrame::from_r(r), s)
}

pub fn phi_abs_frame(n: usize, frame: &RadialFrame, s: &SpectralParam) -> Result<f64> {
    let nonnegative = s.is_critical() || (s.is_real_nonforbidden() && n % 2 == 0);
    if nonnegative {
        return Ok(phi_n_frame(n, frame, s)?.re);
    }
    let form = PolyKernelForm::new(n, *s);
    let q = radial_average(frame, |lp| Complex64::new(form.abs_log(lp), 0.0), 1e-12, n % 2 == 1)?;
    Ok(q.value.re)
}

fn check_radius(r: f64) -> Result<()> {
    if (0.0..1.0).contains(&r) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("radius {r} not in [0, 1)")))
    }
}

/// Φ(r|λ) = F(a+1, −a; 1; (1−z)/2) with a = μ − 1/2 and z = (1+r²)/(1−r²).
pub fn phi_closed_form(r: f64, s: &SpectralParam) -> Result<Complex64> {
    check_radius(r)?;
    let a = s.mu - 0.5;
    let x = -(r * r) / ((1.0 - r) * (1.0 + r));
    gauss_2f1(a + 1.0, -a, Complex64::new(1.0, 0.0), x)
}

/// The (prefactor, power of R, exponential rate) of a boundary law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticLaw {
    pub prefactor: Complex64,
    pub r_power: i32,
    pub exp_rate: Complex64,
}

impl AsymptoticLaw {
    pub fn eval(&self, big_r: f64) -> Complex64 {
        self.prefactor * big_r.powi(self.r_power) * (self.exp_rate * big_r).exp()
    }
}

/// c(λ) = (2/π)∫₀^∞ (1+x²)^{−μ−1/2} dx for generic λ.
pub fn c_lambda(s: &SpectralParam) -> Result<Complex64> {
    s.require_off_ray()?;
    if s.is_critical() {
        return Err(Error::InvalidArgument("c(lambda) diverges at lambda = -1/4".into()));
    }
    let e = s.exponent();
    let cut = 64.0;
    let body = integrate_halfline_peak(|x| (-e * (x * x).ln_1p()).exp(), cut, &QuadratureSpec::default())?;
    // ∫_T^∞ x^{−2e}(1 + x^{−2})^{−e} dx expanded binomially.
    let mut tail = Complex64::new(0.0, 0.0);
    let mut binom = Complex64::new(1.0, 0.0);
    for k in 0..40 {
        let k_f = k as f64;
        let expo = s.mu * 2.0 + 2.0 * k_f;
        let term = binom * (-expo * cut.ln()).exp() / expo;
        tail += term;
        if term.norm() < 1e-18 * tail.norm() {
            break;
        }
        binom *= (-e - k_f) / (k_f + 1.0);
    }
    Ok((body.value + tail) * (2.0 / PI))
}

/// Boundary law of Φ_n as R → ∞.
pub fn asymptotic_law(n: usize, s: &SpectralParam) -> Result<AsymptoticLaw> {
    s.require_off_ray()?;
    if s.is_critical() {
        return Ok(critical_law(n));
    }
    let c = c_lambda(s)?;
    Ok(AsymptoticLaw {
        prefactor: c / (factorial(n) * (s.mu * 2.0).powi(n as i32)),
        r_power: n as i32,
        exp_rate: s.mu - 0.5,
    })
}

/// Boundary law of |Φ|_n as R → ∞.
pub fn abs_asymptotic_law(n: usize, s: &SpectralParam) -> Result<AsymptoticLaw> {
    s.require_off_ray()?;
    if s.is_critical() {
        return Ok(critical_law(n));
    }
    let star = s.associated_real().expect("off-ray parameters have lambda*");
    let c = c_lambda(&star)?;
    Ok(AsymptoticLaw {
        prefactor: c / (factorial(n) * (2.0 * s.mu.norm()).powi(n as i32)),
        r_power: n as i32,
        exp_rate: Complex64::new(s.mu.re - 0.5, 0.0),
    })
}

fn critical_law(n: usize) -> AsymptoticLaw {
    AsymptoticLaw {
        prefactor: Complex64::new(2.0 / (factorial(2 * n + 1) * PI), 0.0),
        r_power: 2 * n as i32 + 1,
        exp_rate: Complex64::new(-0.5, 0.0),
    }
}

/// Leading term of Φ_n(r|λ) as r → 0, for n ≥ 1.
pub fn small_r_law(n: usize, s: &SpectralParam, r: f64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    if s.is_critical() {
        return one * r.powi(2 * n as i32) / factorial(n).powi(2);
    }
    let two_mu = s.mu * 2.0;
    if n % 2 == 0 {
        let h = factorial(n / 2);
        one * r.powi(n as i32) / (two_mu.powi(n as i32) * h * h)
    } else {
        let d = factorial(n.div_ceil(2)) * factorial((n - 1) / 2);
        one * r.powi(n as i32 + 1) / (two_mu.powi(n as i32 - 1) * d)
    }
}

/// Zeros of r ↦ Φ(r|λ) on (0, r_max] for λ on the forbidden ray, by sign
/// changes on a uniform grid in R followed by bisection.
pub fn spherical_zeros(s: &SpectralParam, r_max: f64) -> Result<Vec<f64>> {
    if s.class != SpectralClass::ForbiddenRay {
        return Err(Error::InvalidArgument(format!(
            "spherical_zeros needs lambda real < -1/4, got {}",
            s.lambda
        )));
    }
    check_radius(r_max)?;
    let big_r_max = RadialFrame::from_r(r_max).big_r;
    let beta = s.mu.im;
    let steps = ((big_r_max * beta * 40.0).ceil() as usize).max(400);
    let value = |big_r: f64| phi_n_frame(0, &RadialFrame::from_big_r(big_r), s).map(|v| v.re);
    let grid: Vec<f64> = (0..=steps).map(|j| big_r_max * j as f64 / steps as f64).collect();
    let values = grid.par_iter().map(|&x| value(x)).collect::<Result<Vec<f64>>>()?;
    let mut zeros = Vec::new();
    for j in 0..steps {
        let (mut a, mut b) = (grid[j], grid[j + 1]);
        let (mut fa, fb) = (values[j], values[j + 1]);
        if fa == 0.0 {
            if j > 0 {
                zeros.push((0.5 * a).tanh());
            }
            continue;
        }
        if fa.signum() == fb.signum() || fb == 0.0 {
            continue;
        }
        while b - a > 1e-13 * b.max(1.0) {
            let m = 0.5 * (a + b);
            let fm = value(m)?;
            if fm == 0.0 {
                a = m;
                b = m;
                break;
            }
            if fm.signum() == fa.signum() {
                a = m;
                fa = fm;
            } else {
                b = m;
            }
        }
        zeros.push((0.25 * (a + b)).tanh());
    }
    Ok(zeros)
}

/// An empirically certified radius beyond which Φ_n(·|λ) has no zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroFreeRadius {
    pub n: usize,
    pub lambda: Complex64,
    pub r_min: f64,
}

/// The scan grid: 1 − r geometric from 1 down to 1e−6.
pub fn scan_grid() -> Vec<f64> {
    (0..SCAN_POINTS)
        .map(|i| 1.0 - 10f64.powf(-6.0 * i as f64 / (SCAN_POINTS - 1) as f64))
        .collect()
}

pub fn zero_free_radius(n: usize, s: &SpectralParam) -> Result<ZeroFreeRadius> {
    zero_free_radius_with(n, s, DEFAULT_ODD_EPSILON)
}

/// Closed-form radii for real λ ≥ −1/4 and critical λ, otherwise a cached grid scan.
pub fn zero_free_radius_with(n: usize, s: &SpectralParam, odd_epsilon: f64) -> Result<ZeroFreeRadius> {
    s.require_off_ray()?;
    let done = |r_min| Ok(ZeroFreeRadius { n, lambda: s.lambda, r_min });
    if s.is_critical() {
        return done(0.0);
    }
    if s.is_real_nonforbidden() {
        return done(if n % 2 == 0 { 0.0 } else { odd_epsilon });
    }
    type Key = (usize, u64, u64);
    static CACHE: OnceLock<Mutex<HashMap<Key, f64>>> = OnceLock::new();
    let key = (n, s.lambda.re.to_bits(), s.lambda.im.to_bits());
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(r) = cache.lock().expect("scan cache poisoned").get(&key) {
        return done(*r);
    }
    let r_min = scan_zero_free(n, s)?;
    cache.lock().expect("scan cache poisoned").insert(key, r_min);
    done(r_min)
}

fn scan_zero_free(n: usize, s: &SpectralParam) -> Result<f64> {
    let grid = scan_grid();
    let samples = grid
        .par_iter()
        .map(|&r| {
            let frame = RadialFrame::from_r(r);
            Ok((phi_n_frame(n, &frame, s)?, phi_abs_frame(n, &frame, s)?))
        })
        .collect::<Result<Vec<(Complex64, f64)>>>()?;
    let mut last_suspect = None;
    for (i, (v, a)) in samples.iter().enumerate() {
        let small = !(v.norm() > ZERO_THRESHOLD * a);
        let crossing = i > 0 && {
            let p = samples[i - 1].0;
            let re_flip = p.re.signum() != v.re.signum();
            let im_flip = p.im.signum() != v.im.signum() || v.im == 0.0;
            re_flip && im_flip
        };
        if small || crossing {
            last_suspect = Some(i);
        }
    }
    match last_suspect {
        None => Ok(0.0),
        Some(i) if i + SCAN_POINTS / 100 >= SCAN_POINTS => Err(Error::ScanInconclusive { r: grid[i] }),
        Some(i) => Ok(grid[i + 1]),
    }
}

/// Positivity of Φ_n on a grid, and the vanishing odd moments
/// (1/2π)∫(log P)^{2m+1} P^{1/2} that drive it.
#[derive(Debug, Clone, PartialEq)]
pub struct PositivityReport {
    pub n: usize,
    pub values: Vec<(f64, Complex64)>,
    pub min_value: f64,
    /// (m, r, moment / ∫|log P|^{2m+1} P^{1/2}).
    pub odd_moments: Vec<(usize, f64, f64)>,
    pub max_odd_moment: f64,
}

pub fn positivity_grid() -> Vec<f64> {
    let mut g: Vec<f64> = (1..=19).map(|k| 0.05 * k as f64).collect();
    g.extend((2..=5).map(|k| 1.0 - 10f64.powi(-k)));
    g
}

pub fn positivity_scan(n: usize, s: &SpectralParam) -> Result<PositivityReport> {
    if !s.is_real_nonforbidden() || n == 0 {
        return Err(Error::InvalidArgument("positivity_scan needs real lambda >= -1/4 and n >= 1".into()));
    }
    let grid = positivity_grid();
    let values = grid
        .iter()
        .map(|&r| Ok((r, phi_n(n, r, s)?)))
        .collect::<Result<Vec<_>>>()?;
    let mut min_value = f64::INFINITY;
    for &(r, v) in &values {
        if !(v.re > 0.0) || v.im.abs() > 1e-12 * v.re {
            return Err(Error::PositivityViolation { r, value: v });
        }
        min_value = min_value.min(v.re);
    }
    let mut odd_moments = Vec::new();
    for m in 0..=n {
        let p = 2 * m as i32 + 1;
        for &r in &[0.3, 0.7, 0.95, 0.999] {
            let frame = RadialFrame::from_r(r);
            let signed = radial_average(&frame, |lp| Complex64::new(lp.powi(p) * (0.5 * lp).exp(), 0.0), 1e-12, true)?;
            let abs = radial_average(&frame, |lp| Complex64::new(lp.abs().powi(p) * (0.5 * lp).exp(), 0.0), 1e-12, true)?;
            odd_moments.push((m, r, signed.value.re / abs.value.re));
        }
    }
    let max_odd_moment = odd_moments.iter().map(|m| m.2.abs()).fold(0.0, f64::max);
    Ok(PositivityReport { n, values, min_value, odd_moments, max_odd_moment })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::poisson_radial_profile;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Lanczos approximation (g = 7) of Γ on the right half-plane.
    fn gamma(z: Complex64) -> Complex64 {
        const G: [f64; 9] = [
            0.999_999_999_999_809_9,
            676.520_368_121_885_1,
            -1_259.139_216_722_402_8,
            771.323_428_777_653_1,
            -176.615_029_162_140_6,
            12.507_343_278_686_905,
            -0.138_571_095_265_720_12,
            9.984_369_578_019_572e-6,
            1.505_632_735_149_311_6e-7,
        ];
        let z = z - 1.0;
        let mut x = c(G[0], 0.0);
        for (i, g) in G.iter().enumerate().skip(1) {
            x += *g / (z + i as f64);
        }
        let t = z + 7.5;
        (2.0 * PI).sqrt() * t.powc(z + 0.5) * (-t).exp() * x
    }

    fn c_oracle(mu: Complex64) -> Complex64 {
        gamma(mu) / (PI.sqrt() * gamma(mu + 0.5))
    }

    #[test]
    fn phi_basic_values() {
        let zero = SpectralParam::real(0.0);
        for &r in &[0.0, 0.3, 0.9, 0.999, 1.0 - 1e-7] {
            assert!((phi_n(0, r, &zero).unwrap() - 1.0).norm() < 1e-12, "r={r}");
        }
        for n in 1..4 {
            assert_eq!(phi_n(n, 0.0, &SpectralParam::real(2.0)).unwrap(), c(0.0, 0.0));
        }
        let s = SpectralParam::real(2.0);
        let q = phi_n(0, 0.6, &s).unwrap();
        let cf = phi_closed_form(0.6, &s).unwrap();
        assert!((q - cf).norm() < 1e-10 * cf.norm());
    }

    #[test]
    fn critical_closed_form_matches_sqrt_poisson_average() {
        let s = SpectralParam::real(-0.25);
        let r = 0.99;
        let spec = QuadratureSpec::default().with_peak_scale((1.0 - r) / (2.0 * f64::sqrt(r)));
        let q = integrate_circle(|p| c(poisson_radial_profile(r, p).sqrt(), 0.0), &spec).unwrap();
        let cf = phi_closed_form(r, &s).unwrap();
        assert!((q.value - cf).norm() < 1e-9);
        let cf = phi_closed_form(1.0 / 2f64.sqrt(), &s).unwrap();
        let direct = crate::numerics::hypergeometric::gauss_2f1(c(0.5, 0.0), c(0.5, 0.0), c(1.0, 0.0), -1.0).unwrap();
        assert!((cf - direct).norm() < 1e-14);
    }

    #[test]
    fn closed_form_special_cases() {
        assert_eq!(phi_closed_form(0.0, &SpectralParam::new(c(1.3, -0.4))).unwrap(), c(1.0, 0.0));
        assert!((phi_closed_form(0.8, &SpectralParam::real(0.0)).unwrap() - 1.0).norm() < 1e-15);
        let s = SpectralParam::real(-1.0);
        let q = phi_n(0, 0.95, &s).unwrap();
        let cf = phi_closed_form(0.95, &s).unwrap();
        assert!((q - cf).norm() < 1e-8);
    }

    #[test]
    fn c_lambda_values() {
        assert!((c_lambda(&SpectralParam::real(0.0)).unwrap() - 1.0).norm() < 1e-12);
        assert!((c_lambda(&SpectralParam::real(2.0)).unwrap() - 0.5).norm() < 1e-12);
        for lam in [c(0.0, 1.0), c(1.0, 1.0), c(-0.2, 0.5), c(5.0, -3.0)] {
            let s = SpectralParam::new(lam);
            let v = c_lambda(&s).unwrap();
            let o = c_oracle(s.mu);
            assert!((v - o).norm() < 1e-10 * o.norm(), "{lam}: {v} vs {o}");
        }
        // μ = 0.8 + 0.6i, against a direct quadrature on a long interval.
        let mu = c(0.8, 0.6);
        let s = SpectralParam::new(mu * mu - 0.25);
        let e = s.exponent();
        let direct = integrate_halfline_peak(|x| (-e * (x * x).ln_1p()).exp(), 1e7, &QuadratureSpec::default())
            .unwrap()
            .value
            * (2.0 / PI);
        assert!((c_lambda(&s).unwrap() - direct).norm() < 1e-9);
        assert!(c_lambda(&SpectralParam::real(-0.25)).is_err());
    }

    #[test]
    fn critical_law_and_abs_equality() {
        let law = asymptotic_law(0, &SpectralParam::real(-0.25)).unwrap();
        assert_eq!(law.r_power, 1);
        assert!((law.prefactor.re - 2.0 / PI).abs() < 1e-16);
        let s = SpectralParam::real(-0.25);
        for &r in &[0.2, 0.9, 0.9999] {
            assert_eq!(phi_abs(2, r, &s).unwrap(), phi_n(2, r, &s).unwrap().re);
        }
    }

    #[test]
    fn abs_dominates() {
        for lam in [c(0.0, 1.0), c(2.0, 0.0), c(-1.0, 0.5)] {
            let s = SpectralParam::new(lam);
            for n in 0..3 {
                for &r in &[0.1, 0.5, 0.9, 0.999] {
                    let a = phi_abs(n, r, &s).unwrap();
                    let v = phi_n(n, r, &s).unwrap().norm();
                    assert!(a >= v * (1.0 - 1e-12), "{lam} n={n} r={r}");
                }
            }
        }
    }

    #[test]
    fn abs_law_trend() {
        let s = SpectralParam::new(c(0.0, 1.0));
        let law = abs_asymptotic_law(1, &s).unwrap();
        let ratios: Vec<f64> = [10.0, 15.0, 20.0, 25.0]
            .iter()
            .map(|&big_r| phi_abs_frame(1, &RadialFrame::from_big_r(big_r), &s).unwrap() / law.eval(big_r).re)
            .collect();
        assert!((ratios[3] - 1.0).abs() < (ratios[0] - 1.0).abs());
        assert!((ratios[3] - 1.0).abs() < 0.15);
    }

    #[test]
    fn small_r_examples() {
        let s = SpectralParam::real(2.0);
        assert!((small_r_law(1, &s, 0.5) - 0.25).norm() < 1e-16);
        assert!((small_r_law(2, &s, 1.0) - 1.0 / 9.0).norm() < 1e-16);
        for n in 1..=3 {
            let mut errs = Vec::new();
            for k in 1..=3 {
                let r = 10f64.powi(-k);
                errs.push((phi_n(n, r, &s).unwrap() / small_r_law(n, &s, r) - 1.0).norm());
            }
            assert!(errs[2] < errs[0] && errs[2] < 0.02, "n={n}: {errs:?}");
        }
    }

    #[test]
    fn zero_free_shortcuts() {
        assert_eq!(zero_free_radius(0, &SpectralParam::real(2.0)).unwrap().r_min, 0.0);
        assert_eq!(zero_free_radius(3, &SpectralParam::real(-0.25)).unwrap().r_min, 0.0);
        assert_eq!(zero_free_radius(1, &SpectralParam::real(0.0)).unwrap().r_min, DEFAULT_ODD_EPSILON);
        assert!(zero_free_radius(0, &SpectralParam::real(-1.0)).is_err());
        let scanned = zero_free_radius(1, &SpectralParam::new(c(0.0, 1.0))).unwrap();
        assert!(scanned.r_min > 0.0 && scanned.r_min < 0.1, "{}", scanned.r_min);
    }

    #[test]
    fn zeros_on_forbidden_ray() {
        assert!(spherical_zeros(&SpectralParam::real(0.5), 0.9).is_err());
        let z1 = spherical_zeros(&SpectralParam::real(-1.0), 0.9999).unwrap();
        assert!((z1[0] - 0.895_702_5).abs() < 1e-6, "{z1:?}");
        for z in &z1 {
            assert!(phi_closed_form(*z, &SpectralParam::real(-1.0)).map(|v| v.norm() < 1e-8).unwrap_or(true));
        }
        let z5 = spherical_zeros(&SpectralParam::real(-5.0), 0.9999).unwrap();
        assert!(z5.len() > z1.len());
        for w in z5.windows(3) {
            assert!(w[2] - w[1] < w[1] - w[0]);
        }
    }

    #[test]
    fn positivity() {
        let rep = positivity_scan(1, &SpectralParam::real(0.0)).unwrap();
        assert!(rep.min_value > 0.0);
        assert!(rep.max_odd_moment < 1e-10, "{}", rep.max_odd_moment);
        assert!(positivity_scan(2, &SpectralParam::real(-0.25)).unwrap().min_value > 0.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn closed_form_matches_quadrature(re in -2.0..4.0f64, im in 0.1..3.0f64, r in 0.05..0.99f64, flip in proptest::bool::ANY) {
            let s = SpectralParam::new(c(re, if flip { -im } else { im }));
            let q = phi_n(0, r, &s).unwrap();
            let cf = phi_closed_form(r, &s).unwrap();
            prop_assert!((q - cf).norm() < 1e-8 * (1.0 + cf.norm()));
        }
    }
}
