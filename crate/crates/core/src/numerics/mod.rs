//! Shared numerical machinery.

pub mod fd;
pub mod fft;
pub mod hypergeometric;
pub mod poly;
pub mod quadrature;
