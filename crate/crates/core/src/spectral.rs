//! The spectral parameter μ(λ) and the λ-polyharmonic kernel family.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{log_poisson, BoundaryPoint, DiskPoint};
use crate::numerics::fd::fd_laplacian;
use crate::numerics::poly::ComplexPoly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpectralClass {
    Generic,
    Critical,
    ForbiddenRay,
}

/// An eigenvalue λ together with μ = √(λ + 1/4) on the principal branch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralParam {
    pub lambda: Complex64,
    pub mu: Complex64,
    pub class: SpectralClass,
    /// (Re μ)² − 1/4; absent on the forbidden ray.
    pub lambda_star: Option<f64>,
}

impl SpectralParam {
    pub fn new(lambda: Complex64) -> Self {
        let w = lambda + 0.25;
        let (mu, class) = if w.norm() <= 1e-15 {
            (Complex64::new(0.0, 0.0), SpectralClass::Critical)
        } else if w.im == 0.0 && w.re < 0.0 {
            (Complex64::new(0.0, (-w.re).sqrt()), SpectralClass::ForbiddenRay)
        } else {
            (w.sqrt(), SpectralClass::Generic)
        };
        let lambda_star = match class {
            SpectralClass::ForbiddenRay => None,
            _ => Some(mu.re * mu.re - 0.25),
        };
        SpectralParam { lambda, mu, class, lambda_star }
    }

    pub fn real(lambda: f64) -> Self {
        Self::new(Complex64::new(lambda, 0.0))
    }

    /// The associated real eigenvalue λ*, whose μ is Re μ(λ).
    pub fn associated_real(&self) -> Option<SpectralParam> {
        self.lambda_star.map(SpectralParam::real)
    }

    /// Exponent μ + 1/2 of the Poisson kernel.
    pub fn exponent(&self) -> Complex64 {
        self.mu + 0.5
    }

    pub fn is_critical(&self) -> bool {
        self.class == SpectralClass::Critical
    }

    /// Real λ ≥ −1/4 (the positive-kernel regime).
    pub fn is_real_nonforbidden(&self) -> bool {
        self.lambda.im == 0.0 && self.class != SpectralClass::ForbiddenRay
    }

    pub fn require_off_ray(&self) -> Result<()> {
        match self.class {
            SpectralClass::ForbiddenRay => Err(Error::ForbiddenRay { lambda: self.lambda }),
            _ => Ok(()),
        }
    }
}

pub fn make_spectral(lambda: Complex64) -> SpectralParam {
    SpectralParam::new(lambda)
}

/// The order-n kernel written as f(w)·P^{μ+1/2} with w = −hor = log P.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyKernelForm {
    pub n: usize,
    pub spectral: SpectralParam,
    pub poly: ComplexPoly,
    power: i32,
    coef: Complex64,
}

impl PolyKernelForm {
    /// Generic: w^n/(n!(2μ)^n); Critical: w^{2n}/(2n)!.
    pub fn new(n: usize, spectral: SpectralParam) -> Self {
        let (power, coef) = if spectral.is_critical() {
            (2 * n, Complex64::new(1.0 / factorial(2 * n), 0.0))
        } else {
            (n, (spectral.mu * 2.0).powi(n as i32).inv() / factorial(n))
        };
        PolyKernelForm {
            n,
            spectral,
            poly: ComplexPoly::monomial(power, coef),
            power: power as i32,
            coef,
        }
    }

    /// Kernel value as a function of log P.
    pub fn eval_log(&self, log_p: f64) -> Complex64 {
        let base = (self.spectral.exponent() * log_p).exp();
        self.coef * base * log_p.powi(self.power)
    }

    /// |kernel| as a function of log P.
    pub fn abs_log(&self, log_p: f64) -> f64 {
        self.coef.norm() * ((self.spectral.mu.re + 0.5) * log_p).exp() * log_p.abs().powi(self.power)
    }
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// P(z, ξ)^{μ+1/2}.
pub fn lambda_kernel(z: DiskPoint, xi: BoundaryPoint, s: &SpectralParam) -> Complex64 {
    (s.exponent() * log_poisson(z, xi)).exp()
}

/// P_n(z, ξ | λ).
pub fn polyharmonic_kernel(n: usize, z: DiskPoint, xi: BoundaryPoint, s: &SpectralParam) -> Complex64 {
    PolyKernelForm::new(n, *s).eval_log(log_poisson(z, xi))
}

/// Q_f(z, ξ) = f(log P)·P^{μ+1/2}.
pub fn q_kernel(f: &ComplexPoly, z: DiskPoint, xi: BoundaryPoint, s: &SpectralParam) -> Complex64 {
    let lp = log_poisson(z, xi);
    f.evaluate_real(lp) * (s.exponent() * lp).exp()
}

/// g = f″ + 2μ f′, so that (Λ − λ)Q_f = Q_g.
pub fn reduce_step(f: &ComplexPoly, s: &SpectralParam) -> ComplexPoly {
    let d1 = f.differentiate();
    d1.differentiate().scale_add(&d1, s.mu * 2.0)
}

/// Outcome of reducing the order-n kernel polynomial n times.
#[derive(Debug, Clone, PartialEq)]
pub struct ReduceReport {
    pub n: usize,
    /// Largest coefficient deviation of the n-fold reduction from 1.
    pub residual: f64,
    /// Critical only: deviation of one reduction from the order n−1 polynomial.
    pub collapse_residual: Option<f64>,
}

pub const CHAIN_TOLERANCE: f64 = 1e-12;

pub fn verify_reduce_chain(n: usize, s: &SpectralParam) -> Result<ReduceReport> {
    let form = PolyKernelForm::new(n, *s);
    let mut p = form.poly.clone();
    for _ in 0..n {
        p = reduce_step(&p, s);
    }
    let one = ComplexPoly::constant(Complex64::new(1.0, 0.0));
    let residual = p.max_abs_diff(&one);
    if residual > CHAIN_TOLERANCE {
        return Err(Error::ChainBroken { n, residual, coefficients: p.coeffs().to_vec() });
    }
    let collapse_residual = if s.is_critical() && n >= 1 {
        let step = reduce_step(&form.poly, s);
        let lower = PolyKernelForm::new(n - 1, *s).poly;
        let res = step.max_abs_diff(&lower);
        if res > CHAIN_TOLERANCE {
            return Err(Error::ChainBroken { n, residual: res, coefficients: step.coeffs().to_vec() });
        }
        Some(res)
    } else {
        None
    };
    Ok(ReduceReport { n, residual, collapse_residual })
}

/// |Δ_h Q_f − λQ_f − Q_g| with g = reduce_step(f).
pub fn fd_verify_poly(
    f: &ComplexPoly,
    z: DiskPoint,
    xi: BoundaryPoint,
    s: &SpectralParam,
    h: f64,
) -> Result<f64> {
    let g = reduce_step(f, s);
    let lap = fd_laplacian(|p| q_kernel(f, p, xi, s), z, h)?;
    Ok((lap - s.lambda * q_kernel(f, z, xi, s) - q_kernel(&g, z, xi, s)).norm())
}

/// FD residual of the reduction identity for the order-n kernel.
pub fn fd_verify_kernel(n: usize, z: DiskPoint, xi: BoundaryPoint, s: &SpectralParam, h: f64) -> Result<f64> {
    fd_verify_poly(&PolyKernelForm::new(n, *s).poly, z, xi, s, h)
}

/// |Δ_h P^λ − λ P^λ| at z.
pub fn fd_eigen_residual(z: DiskPoint, xi: BoundaryPoint, s: &SpectralParam, h: f64) -> Result<f64> {
    let lap = fd_laplacian(|p| lambda_kernel(p, xi, s), z, h)?;
    Ok((lap - s.lambda * lambda_kernel(z, xi, s)).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{poisson_kernel, rotate};
    use crate::numerics::fd::observed_order;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn spectral_examples() {
        let s = SpectralParam::real(0.0);
        assert_eq!(s.mu, c(0.5, 0.0));
        assert_eq!(s.class, SpectralClass::Generic);
        assert_eq!(s.lambda_star, Some(0.0));
        let s = SpectralParam::real(-0.25);
        assert_eq!(s.mu, c(0.0, 0.0));
        assert_eq!(s.class, SpectralClass::Critical);
        let s = SpectralParam::new(c(0.0, 1.0));
        // Oracle: √(1/4 + i) in polar form.
        let w = c(0.25, 1.0);
        let (m, a) = (w.norm().sqrt(), 0.5 * w.im.atan2(w.re));
        assert!((s.mu - c(m * a.cos(), m * a.sin())).norm() < 1e-15);
        assert!((s.mu - c(0.800_243, 0.624_811)).norm() < 1e-6);
        assert!((s.lambda_star.unwrap() - (m * a.cos()).powi(2) + 0.25).abs() < 1e-15);
        assert!((s.lambda_star.unwrap() - 0.390_388).abs() < 1e-6);
        let s = SpectralParam::real(-1.0);
        assert_eq!(s.class, SpectralClass::ForbiddenRay);
        assert!(s.mu.re == 0.0 && s.mu.im > 0.0);
        assert!(s.lambda_star.is_none());
    }

    #[test]
    fn kernel_special_values() {
        let z = DiskPoint::new(0.3, 0.4).unwrap();
        let xi = BoundaryPoint::new(0.2);
        let s0 = SpectralParam::real(0.0);
        assert!((lambda_kernel(z, xi, &s0).re - poisson_kernel(z, xi)).abs() < 1e-14);
        for lam in [c(2.0, 0.0), c(0.0, 1.0), c(-0.25, 0.0)] {
            let s = SpectralParam::new(lam);
            assert_eq!(lambda_kernel(DiskPoint::origin(), xi, &s), c(1.0, 0.0));
            assert_eq!(polyharmonic_kernel(2, DiskPoint::origin(), xi, &s), c(0.0, 0.0));
            assert_eq!(polyharmonic_kernel(0, z, xi, &s), lambda_kernel(z, xi, &s));
        }
        let p = poisson_kernel(z, xi);
        assert!((polyharmonic_kernel(1, z, xi, &s0).re - p * p.ln()).abs() < 1e-13);
    }

    #[test]
    fn reduce_step_examples() {
        let g = SpectralParam::real(2.0);
        let one = ComplexPoly::constant(c(1.0, 0.0));
        assert!(reduce_step(&one, &g).is_zero());
        let w = ComplexPoly::monomial(1, c(1.0, 0.0));
        assert_eq!(reduce_step(&w, &g), ComplexPoly::constant(g.mu * 2.0));
        let crit = SpectralParam::real(-0.25);
        assert_eq!(reduce_step(&ComplexPoly::monomial(2, c(0.5, 0.0)), &crit), one);
    }

    #[test]
    fn reduce_chains() {
        for lam in [c(2.0, 0.0), c(0.5, 0.0), c(0.0, 1.0), c(1.0, 1.0), c(-0.25, 0.0)] {
            let s = SpectralParam::new(lam);
            for n in 0..=6 {
                let rep = verify_reduce_chain(n, &s).unwrap();
                assert!(rep.residual <= 1e-12);
                if s.is_critical() && n > 0 {
                    assert!(rep.collapse_residual.unwrap() <= 1e-15);
                }
            }
        }
        let crit = SpectralParam::real(-0.25);
        let step = reduce_step(&PolyKernelForm::new(2, crit).poly, &crit);
        assert_eq!(step, ComplexPoly::monomial(2, c(0.5, 0.0)));
    }

    #[test]
    fn fd_examples() {
        let s = SpectralParam::real(2.0);
        let z = DiskPoint::new(0.3, 0.2).unwrap();
        let xi = BoundaryPoint::new(0.0);
        assert!(fd_verify_kernel(0, z, xi, &s, 1e-4).unwrap() <= 1e-5);
        let s = SpectralParam::real(0.0);
        let z = DiskPoint::new(0.5, 0.0).unwrap();
        assert!(fd_verify_kernel(1, z, BoundaryPoint::new(1.0), &s, 1e-4).unwrap() <= 1e-5);
        let s = SpectralParam::real(-0.25);
        let z = DiskPoint::new(0.0, 0.4).unwrap();
        assert!(fd_verify_kernel(1, z, BoundaryPoint::new(2.0), &s, 1e-4).unwrap() <= 1e-5);
    }

    #[test]
    fn fd_order_for_polyharmonic_kernels() {
        let hs = [4e-3, 2e-3, 1e-3];
        for lam in [c(2.0, 0.0), c(0.0, 1.0), c(-0.25, 0.0)] {
            let s = SpectralParam::new(lam);
            for n in 0..=3 {
                let z = DiskPoint::new(0.35, -0.2).unwrap();
                let xi = BoundaryPoint::new(0.4);
                let res: Vec<f64> = hs.iter().map(|h| fd_verify_kernel(n, z, xi, &s, *h).unwrap()).collect();
                assert!(observed_order(&hs, &res) >= 1.9, "lambda={lam} n={n}: {res:?}");
            }
        }
    }

    /// Half-plane model with w = −hor: the Laplacian is e^{2w}∂²_u + ∂²_w − ∂_w,
    /// so on f(w)e^{(μ+1/2)w} it must give (g(w) + λf(w))e^{(μ+1/2)w}.
    #[test]
    fn log_model_reduction() {
        for lam in [c(2.0, 0.0), c(1.0, 1.0), c(-0.25, 0.0)] {
            let s = SpectralParam::new(lam);
            for n in 0..=3 {
                let f = PolyKernelForm::new(n, s).poly;
                let g = reduce_step(&f, &s);
                let q = |w: f64| f.evaluate_real(w) * (s.exponent() * w).exp();
                for &w in &[-0.7, 0.3, 1.1] {
                    let h = 1e-3;
                    let d2 = (q(w + h) - q(w) * 2.0 + q(w - h)) / (h * h);
                    let d1 = (q(w + h) - q(w - h)) / (2.0 * h);
                    let lhs = d2 - d1 - s.lambda * q(w);
                    let rhs = g.evaluate_real(w) * (s.exponent() * w).exp();
                    assert!((lhs - rhs).norm() < 1e-5 * (1.0 + rhs.norm()), "n={n} w={w}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn mu_squares_back(re in -50.0..50.0f64, im in -50.0..50.0f64) {
            let s = SpectralParam::new(c(re, im));
            prop_assert!((s.mu * s.mu - 0.25 - s.lambda).norm() <= 1e-14 * (1.0 + s.lambda.norm()));
            prop_assert!(s.mu.re >= 0.0);
        }

        #[test]
        fn real_half_line_maps_to_positive_mu(x in -0.2499..100.0f64) {
            let s = SpectralParam::real(x);
            prop_assert!(s.mu.im == 0.0 && s.mu.re > 0.0);
        }

        #[test]
        fn mu_continuous_off_the_ray(re in -5.0..5.0f64, im in 0.01..5.0f64) {
            let a = SpectralParam::new(c(re, im)).mu;
            let b = SpectralParam::new(c(re, im + 1e-9)).mu;
            prop_assert!((a - b).norm() < 1e-6);
            let lower = SpectralParam::new(c(re, -im)).mu;
            prop_assert!((lower - a.conj()).norm() < 1e-13);
        }

        #[test]
        fn kernel_rotation_invariant(r in 0.0..0.95f64, a in -PI..PI, phi in -PI..PI, alpha in -PI..PI,
                                     n in 0usize..4, re in -0.2..3.0f64, im in -2.0..2.0f64) {
            let s = SpectralParam::new(c(re, im));
            let z = DiskPoint::from_polar(r, a).unwrap();
            let k1 = polyharmonic_kernel(n, z, BoundaryPoint::new(phi), &s);
            let k2 = polyharmonic_kernel(n, rotate(z, alpha), BoundaryPoint::new(phi + alpha), &s);
            prop_assert!((k1 - k2).norm() <= 1e-13 * (1.0 + k1.norm()) * (1.0 + 10.0 * r));
        }
    }
}
