//! Gauss hypergeometric function on the negative real axis.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const MAX_TERMS: usize = 200_000;

/// Largest Pfaff-transformed argument accepted before the series is
/// considered too slow.
pub const MAX_PFAFF_ARGUMENT: f64 = 0.999;

/// ₂F₁(a, b; c; x) for x ≤ 0 through the Pfaff transformation
/// F(a,b;c;x) = (1−x)^{−a} F(a, c−b; c; x/(x−1)).
pub fn gauss_2f1(a: Complex64, b: Complex64, c: Complex64, x: f64) -> Result<Complex64> {
    if !(x <= 0.0) {
        return Err(Error::InvalidArgument(format!("gauss_2f1 needs x <= 0, got {x}")));
    }
    if c.im == 0.0 && c.re <= 0.0 && c.re.fract() == 0.0 {
        return Err(Error::InvalidArgument(format!("c = {c} is a nonpositive integer")));
    }
    let y = x / (x - 1.0);
    if y > MAX_PFAFF_ARGUMENT {
        return Err(Error::SlowConvergence { y });
    }
    let prefactor = (-a * (-x).ln_1p()).exp();
    Ok(prefactor * series(a, c - b, c, y))
}

/// The defining power series Σ (a)_k (b)_k / ((c)_k k!) y^k, for |y| < 1.
pub fn series(a: Complex64, b: Complex64, c: Complex64, y: f64) -> Complex64 {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut quiet = 0;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * y;
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            quiet += 1;
            if quiet == 2 || term.norm() == 0.0 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    sum
}
