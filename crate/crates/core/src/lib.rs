//! Polyharmonic potential theory on the Poincaré disk.
//!
//! The crate evaluates λ-polyharmonic Poisson kernels and their circle
//! averages (polyspherical functions), builds generalized Poisson transforms
//! of boundary data, and probes boundary behavior: Dirichlet and Riquier
//! problems at infinity, maximal operators and admissible limits. The
//! `classical` module covers the explicit λ = 0 Fourier calculus and the
//! lacunary counterexample.

pub mod acceptance;
pub mod behavior;
pub mod classical;
pub mod error;
pub mod geometry;
pub mod numerics;
pub mod polyspherical;
pub mod report;
pub mod spectral;
pub mod transforms;

pub use error::{Error, Result};
pub use geometry::{BoundaryPoint, DiskPoint, Mobius, RadialFrame};
pub use numerics::poly::ComplexPoly;
pub use numerics::quadrature::QuadratureSpec;
pub use polyspherical::{AsymptoticLaw, ZeroFreeRadius};
pub use spectral::{PolyKernelForm, SpectralClass, SpectralParam};
pub use transforms::{BoundaryDatum, Density, FourierSeq, TransformResult};

pub use num_complex::Complex64;
