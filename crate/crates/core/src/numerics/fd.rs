//! Five-point finite-difference hyperbolic Laplacian.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::DiskPoint;

/// Default step 1e−4·(1 − |z|).
pub fn default_step(z: DiskPoint) -> f64 {
    1e-4 * (1.0 - z.modulus())
}

/// ((1−|z|²)²/4)·(f(z+h) + f(z−h) + f(z+ih) + f(z−ih) − 4f(z))/h².
pub fn fd_laplacian<F: Fn(DiskPoint) -> Complex64>(f: F, z: DiskPoint, h: f64) -> Result<Complex64> {
    let offsets = [(h, 0.0), (-h, 0.0), (0.0, h), (0.0, -h)];
    let mut acc = -4.0 * f(z);
    for (dx, dy) in offsets {
        let p = DiskPoint { re: z.re + dx, im: z.im + dy };
        let m = p.modulus();
        if m >= 1.0 {
            return Err(Error::StencilOutOfDomain { modulus: m });
        }
        acc += f(p);
    }
    let w = z.one_minus_abs_sq();
    Ok(acc * (0.25 * w * w / (h * h)))
}

/// Rounding floor of `fd_laplacian` for values of size `magnitude`: the stencil
/// weights sum to 8 in absolute value.
pub fn laplacian_roundoff(magnitude: f64, z: DiskPoint, h: f64) -> f64 {
    let w = z.one_minus_abs_sq();
    8.0 * f64::EPSILON * magnitude * 0.25 * w * w / (h * h)
}

/// Least-squares slope of log(residual) against log(h).
pub fn observed_order(steps: &[f64], residuals: &[f64]) -> f64 {
    let n = steps.len() as f64;
    let xs: Vec<f64> = steps.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = residuals.iter().map(|e| e.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}
