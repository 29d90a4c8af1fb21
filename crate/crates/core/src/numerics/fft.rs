//! Fourier coefficients of functions on the circle from equispaced samples.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Discrete Fourier coefficients in FFT order: index k holds mode k for
/// k < N/2 and mode k − N otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierCoefficients {
    coeffs: Vec<Complex64>,
}

impl FourierCoefficients {
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of mode n, or zero outside the resolved band.
    pub fn get(&self, n: i64) -> Complex64 {
        let len = self.coeffs.len() as i64;
        if n >= len / 2 || n < -len / 2 {
            return Complex64::new(0.0, 0.0);
        }
        self.coeffs[n.rem_euclid(len) as usize]
    }

    /// Modes from −N/2 to N/2 − 1 with their coefficients.
    pub fn modes(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let len = self.coeffs.len() as i64;
        (-len / 2..len / 2).map(move |n| (n, self.get(n)))
    }

    pub fn raw(&self) -> &[Complex64] {
        &self.coeffs
    }
}

/// Samples f at the angles 2πj/N, j = 0..N.
pub fn sample_circle<F: Fn(f64) -> Complex64>(f: F, n: usize) -> Vec<Complex64> {
    let step = 2.0 * std::f64::consts::PI / n as f64;
    (0..n).map(|j| f(step * j as f64)).collect()
}

/// Coefficient n estimates (1/2π)∫f(e^{iφ})e^{−inφ}dφ.
pub fn circle_fft(samples: &[Complex64]) -> Result<FourierCoefficients> {
    let n = samples.len();
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::InvalidArgument(format!("sample count {n} is not a power of two")));
    }
    let mut buf = samples.to_vec();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    buf.iter_mut().for_each(|c| *c *= scale);
    Ok(FourierCoefficients { coeffs: buf })
}

/// Samples at the angles 2πj/N from the coefficients.
pub fn inverse_circle_fft(coeffs: &FourierCoefficients) -> Vec<Complex64> {
    let mut buf = coeffs.coeffs.clone();
    FftPlanner::new().plan_fft_inverse(buf.len()).process(&mut buf);
    buf
}
