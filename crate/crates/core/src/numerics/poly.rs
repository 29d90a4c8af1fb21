//! Univariate polynomials with complex coefficients.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// c₀ + c₁w + … + c_d w^d with c_d ≠ 0, or the zero polynomial (no coefficients).
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ComplexPoly {
    coeffs: Vec<Complex64>,
}

impl ComplexPoly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        ComplexPoly { coeffs }
    }

    pub fn zero() -> Self {
        ComplexPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// c·w^degree.
    pub fn monomial(degree: usize, c: Complex64) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); degree + 1];
        coeffs[degree] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of w^k (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn differentiate(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * k as f64)
                .collect(),
        )
    }

    /// self + c·other.
    pub fn scale_add(&self, other: &ComplexPoly, c: Complex64) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..len).map(|k| self.coeff(k) + c * other.coeff(k)).collect())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Horner evaluation.
    pub fn evaluate(&self, w: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * w + c)
    }

    pub fn evaluate_real(&self, w: f64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * w + c)
    }

    /// Largest coefficient modulus of self − other.
    pub fn max_abs_diff(&self, other: &ComplexPoly) -> f64 {
        let len = self.coeffs.len().max(other.coeffs.len());
        (0..len).map(|k| (self.coeff(k) - other.coeff(k)).norm()).fold(0.0, f64::max)
    }
}

pub fn differentiate(p: &ComplexPoly) -> ComplexPoly {
    p.differentiate()
}

pub fn scale_add(p: &ComplexPoly, q: &ComplexPoly, c: Complex64) -> ComplexPoly {
    p.scale_add(q, c)
}

pub fn evaluate(p: &ComplexPoly, w: Complex64) -> Complex64 {
    p.evaluate(w)
}

impl fmt::Display for ComplexPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != Complex64::new(0.0, 0.0))
            .map(|(k, c)| match k {
                0 => format!("({c})"),
                1 => format!("({c})w"),
                _ => format!("({c})w^{k}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn derivative_of_square() {
        let p = ComplexPoly::monomial(2, c(1.0));
        assert_eq!(p.differentiate(), ComplexPoly::monomial(1, c(2.0)));
    }

    #[test]
    fn evaluate_half_square() {
        let p = ComplexPoly::monomial(2, c(0.5));
        assert_eq!(p.evaluate(c(3.0)), c(4.5));
    }

    #[test]
    fn second_derivative_of_power() {
        for n in 2..10usize {
            let d2 = ComplexPoly::monomial(n, c(1.0)).differentiate().differentiate();
            assert_eq!(d2, ComplexPoly::monomial(n - 2, c((n * (n - 1)) as f64)));
        }
    }

    #[test]
    fn trims_leading_zeros() {
        let p = ComplexPoly::new(vec![c(1.0), c(0.0), c(0.0)]);
        assert_eq!(p.degree(), Some(0));
        assert!(ComplexPoly::constant(c(0.0)).is_zero());
        assert_eq!(ComplexPoly::constant(c(1.0)).differentiate().degree(), None);
    }

    proptest! {
        #[test]
        fn scale_add_is_linear(a in proptest::collection::vec(-5.0..5.0f64, 1..6),
                               b in proptest::collection::vec(-5.0..5.0f64, 1..6),
                               k in -3.0..3.0f64, w in -2.0..2.0f64) {
            let p = ComplexPoly::new(a.iter().map(|x| c(*x)).collect());
            let q = ComplexPoly::new(b.iter().map(|x| c(*x)).collect());
            let s = p.scale_add(&q, c(k));
            let lhs = s.evaluate(c(w));
            let rhs = p.evaluate(c(w)) + q.evaluate(c(w)) * k;
            prop_assert!((lhs - rhs).norm() < 1e-10 * (1.0 + rhs.norm()));
        }
    }
}
