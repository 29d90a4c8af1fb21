//! Admissible regions, maximal operators and Fatou-limit experiments.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{distance_to_segment, normalize_angle, BoundaryPoint, DiskPoint, RadialFrame};
use crate::polyspherical::phi_n;
use crate::spectral::SpectralParam;
use crate::transforms::{BoundaryDatum, Density, TransformContext};

/// Samples used for the Hardy–Littlewood side of the maximal probe.
pub const HL_SAMPLES: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegionKind {
    /// ρ(z, [0, ζ]) ≤ a.
    Tube,
    /// ρ(z, [0, ζ]) ≤ a + log ρ(z, 0).
    Enlarged,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdmissibleRegion {
    pub anchor: BoundaryPoint,
    pub width: f64,
    pub kind: RegionKind,
}

impl AdmissibleRegion {
    pub fn new(anchor: BoundaryPoint, width: f64, kind: RegionKind) -> Result<Self> {
        if !(width >= 0.0) {
            return Err(Error::InvalidArgument(format!("region width must be >= 0, got {width}")));
        }
        Ok(AdmissibleRegion { anchor, width, kind })
    }

    /// a + log R* at hyperbolic radius R.
    pub fn allowance(&self, big_r: f64) -> f64 {
        match self.kind {
            RegionKind::Tube => self.width,
            RegionKind::Enlarged => self.width + big_r.ln(),
        }
    }

    /// K_r = (1 − r²)/(2r)·sinh(a + log R*).
    pub fn k_r(&self, frame: &RadialFrame) -> f64 {
        let d = self.allowance(frame.big_r);
        (1.0 - frame.r * frame.r) / (2.0 * frame.r) * d.sinh()
    }

    pub fn contains(&self, z: DiskPoint) -> bool {
        let r = z.modulus();
        if r == 0.0 {
            return true;
        }
        let frame = z.frame();
        let d = self.allowance(frame.big_r);
        if d < 0.0 {
            return false;
        }
        let alpha = normalize_angle(z.arg() - self.anchor.angle());
        if alpha.abs() < PI / 2.0 {
            self.k_r(&frame) >= alpha.sin().abs()
        } else {
            frame.big_r <= d
        }
    }

    /// Membership by direct distance minimization.
    pub fn contains_by_distance(&self, z: DiskPoint) -> bool {
        let big_r = z.frame().big_r;
        distance_to_segment(z, self.anchor) <= self.allowance(big_r)
    }

    /// Largest |α| with r·e^{i(ζ+α)} in the region.
    pub fn angular_window(&self, r: f64) -> f64 {
        let frame = RadialFrame::from_r(r);
        let d = self.allowance(frame.big_r);
        if d < 0.0 {
            return -1.0;
        }
        if frame.big_r <= d {
            return PI;
        }
        let k = self.k_r(&frame);
        if k >= 1.0 {
            // The closed boundary |α| = π/2 is excluded here.
            PI / 2.0 * (1.0 - 1e-12)
        } else {
            k.asin()
        }
    }
}

/// Sup over centered arcs of the average of |g|, for g sampled at 2πj/N.
///
/// The arc of half-width (m + 1/2)·2π/N around the nearest sample carries
/// 2m + 1 cells, so the average is exact for the sampled measure.
pub fn hl_maximal(samples: &[Complex64], zeta: BoundaryPoint) -> f64 {
    let n = samples.len();
    if n == 0 {
        return 0.0;
    }
    let abs: Vec<f64> = samples.iter().map(|c| c.norm()).collect();
    let mut prefix = vec![0.0; 3 * n + 1];
    for j in 0..3 * n {
        prefix[j + 1] = prefix[j] + abs[j % n];
    }
    let c = ((zeta.angle().rem_euclid(2.0 * PI)) / (2.0 * PI) * n as f64).round() as usize % n;
    // Shift the window into the doubled buffer.
    let c = c + n;
    let mut best: f64 = 0.0;
    for m in 0..=(n - 1) / 2 {
        let (lo, hi) = (c - m, c + m + 1);
        let sum = prefix[hi] - prefix[lo];
        best = best.max(sum / (2 * m + 1) as f64);
    }
    let mean = abs.iter().sum::<f64>() / n as f64;
    best.max(mean)
}

/// Deterministic sample net of an admissible region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleNet {
    /// Radii 1 − 10^{−e} for e = start, start + step, ... up to `depth`.
    pub start: f64,
    pub step: f64,
    pub depth: f64,
    /// Offsets α_max·j/m for j = −m..=m.
    pub offsets: usize,
}

impl SampleNet {
    pub fn coarse() -> Self {
        SampleNet { start: 0.5, step: 0.5, depth: 4.0, offsets: 4 }
    }

    /// Halves the radial step and doubles the angular count over the same
    /// radial range, keeping every coarse point.
    pub fn refined(&self) -> Self {
        SampleNet { step: self.step / 2.0, offsets: 2 * self.offsets, ..*self }
    }

    pub fn radii(&self) -> Vec<f64> {
        let count = ((self.depth - self.start) / self.step).round() as usize;
        (0..=count).map(|k| 1.0 - 10f64.powf(-(self.start + k as f64 * self.step))).collect()
    }

    pub fn points(&self, region: &AdmissibleRegion, r_min: f64) -> Vec<(f64, f64)> {
        let m = self.offsets as i64;
        let mut pts = Vec::new();
        for r in self.radii().into_iter().filter(|&r| r >= r_min) {
            let w = region.angular_window(r);
            if w < 0.0 {
                continue;
            }
            for j in -m..=m {
                pts.push((r, w * j as f64 / m as f64));
            }
        }
        pts
    }
}

/// Sup of |∫K_{n,λ}(z, ξ) g(ξ) dξ| over the net points of the region.
pub fn tubular_maximal(ctx: &TransformContext, region: &AdmissibleRegion, g: &Density, net: &SampleNet) -> Result<f64> {
    let r_min = ctx.r_min().ok_or(Error::ForbiddenRay { lambda: ctx.spectral.lambda })?;
    let pts = net.points(region, r_min);
    let values = pts
        .par_iter()
        .map(|&(r, alpha)| {
            let frame = RadialFrame::from_r(r);
            let v = ctx.density_value(g, &frame, region.anchor.angle() + alpha)?;
            Ok((v / ctx.normalizer(r)?).norm())
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(values.into_iter().fold(0.0, f64::max))
}

/// The default test suite of the maximal probe.
pub fn maximal_test_suite() -> Vec<(String, Density)> {
    vec![
        ("cos1".into(), Density::Cos(1)),
        ("cos3".into(), Density::Cos(3)),
        ("indicator:0:0.5".into(), Density::Indicator { center: 0.0, half_width: 0.5 }),
        ("indicator:2:0.2".into(), Density::Indicator { center: 2.0, half_width: 0.2 }),
        ("sawtooth".into(), Density::Sawtooth),
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaximalReport {
    /// (test id, sup over ζ of tubular/HL) on the coarse net.
    pub ratios: Vec<(String, f64)>,
    /// Same ratios on the refined net.
    pub refined_ratios: Vec<(String, f64)>,
    pub fitted_c: f64,
    pub refined_c: f64,
}

impl MaximalReport {
    /// |refined/coarse − 1|.
    pub fn relative_change(&self) -> f64 {
        (self.refined_c / self.fitted_c - 1.0).abs()
    }
}

/// Anchors −π + 2π(j + 1/2)/count.
pub fn anchor_grid(count: usize) -> Vec<f64> {
    (0..count).map(|j| -PI + 2.0 * PI * (j as f64 + 0.5) / count as f64).collect()
}

pub fn maximal_inequality_probe(
    n: usize,
    s: &SpectralParam,
    a: f64,
    kind: RegionKind,
    suite: &[(String, Density)],
    anchors: &[f64],
    net: &SampleNet,
) -> Result<MaximalReport> {
    s.require_off_ray()?;
    let ctx = TransformContext::new(n, *s)?;
    let refined = net.refined();
    let mut ratios = Vec::new();
    let mut refined_ratios = Vec::new();
    for (id, g) in suite {
        let table = g.sample_table(HL_SAMPLES);
        let (mut coarse_sup, mut fine_sup) = (0.0f64, 0.0f64);
        for &zeta in anchors {
            let anchor = BoundaryPoint::new(zeta);
            let region = AdmissibleRegion::new(anchor, a, kind)?;
            let hl = hl_maximal(&table, anchor);
            if hl == 0.0 {
                continue;
            }
            coarse_sup = coarse_sup.max(tubular_maximal(&ctx, &region, g, net)? / hl);
            fine_sup = fine_sup.max(tubular_maximal(&ctx, &region, g, &refined)? / hl);
        }
        ratios.push((id.clone(), coarse_sup));
        refined_ratios.push((id.clone(), fine_sup));
    }
    let fitted_c = ratios.iter().map(|r| r.1).fold(0.0, f64::max);
    let refined_c = refined_ratios.iter().map(|r| r.1).fold(0.0, f64::max);
    if refined_c >= 2.0 * fitted_c {
        return Err(Error::RatioDiverging { coarse: fitted_c, refined: refined_c });
    }
    Ok(MaximalReport { ratios, refined_ratios, fitted_c, refined_c })
}

/// One sample of an approach to a boundary point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub zeta_angle: f64,
    pub r: f64,
    pub alpha_offset: f64,
    pub value: Complex64,
    pub normalized: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FatouRow {
    pub sample: SweepRow,
    /// Density value at ζ, the expected limit.
    pub target: Complex64,
    /// |normalized − target|.
    pub error: f64,
    /// |atomic part of the normalized transform|.
    pub atom_contribution: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FatouReport {
    pub rows: Vec<FatouRow>,
}

impl FatouReport {
    /// Worst error and atom contribution at the given radius.
    pub fn worst_at(&self, r: f64) -> (f64, f64) {
        self.rows
            .iter()
            .filter(|row| row.sample.r == r)
            .fold((0.0, 0.0), |(e, a), row| (e.max(row.error), a.max(row.atom_contribution)))
    }
}

/// Approaches each ζ inside Γ_a(ζ) (Γ_(a)(ζ) for critical λ) along the centre
/// line and both edges of the region.
pub fn fatou_probe(
    n: usize,
    s: &SpectralParam,
    datum: &BoundaryDatum,
    a: f64,
    anchors: &[f64],
    radii: &[f64],
) -> Result<FatouReport> {
    s.require_off_ray()?;
    let ctx = TransformContext::new(n, *s)?;
    let kind = if s.is_critical() { RegionKind::Enlarged } else { RegionKind::Tube };
    let mut jobs = Vec::new();
    for &zeta in anchors {
        let region = AdmissibleRegion::new(BoundaryPoint::new(zeta), a, kind)?;
        for &r in radii {
            let w = region.angular_window(r);
            if w < 0.0 {
                continue;
            }
            for edge in [-1.0, 0.0, 1.0] {
                jobs.push((zeta, r, edge * w));
            }
        }
    }
    let rows = jobs
        .par_iter()
        .map(|&(zeta, r, alpha)| {
            let z = DiskPoint::from_polar(r, zeta + alpha)?;
            let frame = z.frame();
            let phi = ctx.normalizer(r)?;
            let value = ctx.value(datum, z)?;
            let atoms: Complex64 = datum
                .atoms()
                .iter()
                .map(|at| at.weight * ctx.kernel(&frame, z.arg(), at.point.angle()))
                .sum();
            let normalized = value / phi;
            let target = datum.density().map_or(Complex64::new(0.0, 0.0), |d| d.eval(zeta));
            Ok(FatouRow {
                sample: SweepRow { zeta_angle: zeta, r, alpha_offset: alpha, value, normalized },
                target,
                error: (normalized - target).norm(),
                atom_contribution: (atoms / phi).norm(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FatouReport { rows })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RigidityFit {
    pub coefficients: Vec<Complex64>,
    /// max |fit − f| / max |f| over the samples.
    pub residual: f64,
}

/// Least-squares fit of radial samples against Φ_0, ..., Φ_n.
pub fn radial_rigidity_check(s: &SpectralParam, n: usize, samples: &[(f64, Complex64)], tolerance: f64) -> Result<RigidityFit> {
    s.require_off_ray()?;
    if samples.len() <= n {
        return Err(Error::InvalidArgument(format!("need more than {n} radial samples, got {}", samples.len())));
    }
    let mut basis = Vec::with_capacity(samples.len() * (n + 1));
    for &(r, _) in samples {
        for k in 0..=n {
            basis.push(phi_n(k, r, s)?);
        }
    }
    let a = DMatrix::from_row_slice(samples.len(), n + 1, &basis);
    let b = DVector::from_iterator(samples.len(), samples.iter().map(|p| p.1));
    let svd = a.clone().svd(true, true);
    let x = svd
        .solve(&b, 1e-14)
        .map_err(|e| Error::InvalidArgument(format!("least squares failed: {e}")))?;
    let fit = &a * &x;
    let scale = b.iter().map(|c| c.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let residual = fit.iter().zip(b.iter()).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max) / scale;
    if residual > tolerance {
        return Err(Error::FitResidualLarge { residual, tolerance });
    }
    Ok(RigidityFit { coefficients: x.iter().copied().collect(), residual })
}
