//! Disk primitives: points, the hyperbolic metric, the Poisson kernel and
//! Busemann function, disk automorphisms and radial bookkeeping.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of the open unit disk in Euclidean coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskPoint {
    pub re: f64,
    pub im: f64,
}

impl DiskPoint {
    pub fn new(re: f64, im: f64) -> Result<Self> {
        let p = DiskPoint { re, im };
        if !(re.is_finite() && im.is_finite()) || p.modulus() >= 1.0 {
            return Err(Error::InvalidArgument(format!(
                "point ({re}, {im}) is not inside the unit disk"
            )));
        }
        Ok(p)
    }

    pub fn from_polar(r: f64, angle: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&r) {
            return Err(Error::InvalidArgument(format!("radius {r} not in [0, 1)")));
        }
        let (s, c) = angle.sin_cos();
        Self::new(r * c, r * s)
    }

    pub fn from_complex(z: Complex64) -> Result<Self> {
        Self::new(z.re, z.im)
    }

    pub const fn origin() -> Self {
        DiskPoint { re: 0.0, im: 0.0 }
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn modulus(self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn arg(self) -> f64 {
        self.im.atan2(self.re)
    }

    /// 1 − |z|², computed without squaring the modulus first.
    pub fn one_minus_abs_sq(self) -> f64 {
        let r = self.modulus();
        (1.0 - r) * (1.0 + r)
    }

    pub fn frame(self) -> RadialFrame {
        RadialFrame::from_r(self.modulus())
    }
}

/// A point of the unit circle, stored by its angle in (−π, π].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint {
    angle: f64,
}

impl BoundaryPoint {
    pub fn new(angle: f64) -> Self {
        BoundaryPoint { angle: normalize_angle(angle) }
    }

    pub fn angle(self) -> f64 {
        self.angle
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::from_polar(1.0, self.angle)
    }

    pub fn rotate(self, alpha: f64) -> Self {
        Self::new(self.angle + alpha)
    }
}

/// Reduces an angle to (−π, π].
pub fn normalize_angle(angle: f64) -> f64 {
    let a = (angle + PI).rem_euclid(2.0 * PI) - PI;
    if a <= -PI {
        a + 2.0 * PI
    } else {
        a
    }
}

/// Radial quantities of a circle |z| = r: the hyperbolic radius R and the
/// peak parameter τ = 2√r/(1−r) of the Poisson profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialFrame {
    pub r: f64,
    pub one_minus_r: f64,
    pub big_r: f64,
    pub tau: f64,
}

impl RadialFrame {
    pub fn from_r(r: f64) -> Self {
        let one_minus_r = 1.0 - r;
        RadialFrame {
            r,
            one_minus_r,
            big_r: (2.0 * r / one_minus_r).ln_1p(),
            tau: 2.0 * r.sqrt() / one_minus_r,
        }
    }

    /// Builds the frame from the hyperbolic radius, keeping 1 − r accurate
    /// far beyond the point where r itself rounds to 1.
    pub fn from_big_r(big_r: f64) -> Self {
        let r = (0.5 * big_r).tanh();
        let e = big_r.exp();
        RadialFrame {
            r,
            one_minus_r: 2.0 / (e + 1.0),
            big_r,
            tau: r.sqrt() * (e + 1.0),
        }
    }

    /// log P_r(φ) = R − log(1 + τ² sin²(φ/2)).
    pub fn log_poisson(&self, phi: f64) -> f64 {
        let s = self.tau * (0.5 * phi).sin();
        self.big_r - (s * s).ln_1p()
    }
}

/// ρ(z, w) for points of the disk.
pub fn hyperbolic_distance(z: DiskPoint, w: DiskPoint) -> f64 {
    let zc = z.to_complex();
    let wc = w.to_complex();
    let a = (Complex64::new(1.0, 0.0) - zc * wc.conj()).norm();
    let b = (zc - wc).norm();
    if b <= 0.5 * a {
        2.0 * (b / a).atanh()
    } else {
        // (A+B)(A−B) = (1−|z|²)(1−|w|²) avoids the cancellation in A − B.
        2.0 * (a + b).ln() - z.one_minus_abs_sq().ln() - w.one_minus_abs_sq().ln()
    }
}

/// Poisson kernel (1−|z|²)/|ξ−z|².
pub fn poisson_kernel(z: DiskPoint, xi: BoundaryPoint) -> f64 {
    log_poisson(z, xi).exp()
}

/// log P(z, ξ), evaluated in the polar form that stays accurate as |z| → 1.
pub fn log_poisson(z: DiskPoint, xi: BoundaryPoint) -> f64 {
    let r = z.modulus();
    if r == 0.0 {
        return 0.0;
    }
    RadialFrame::from_r(r).log_poisson(xi.angle() - z.arg())
}

/// Busemann function hor(z, ξ) = −log P(z, ξ).
pub fn busemann(z: DiskPoint, xi: BoundaryPoint) -> f64 {
    -log_poisson(z, xi)
}

/// P_r(φ) = (1−r²)/(1+r²−2r cos φ).
pub fn poisson_radial_profile(r: f64, phi: f64) -> f64 {
    RadialFrame::from_r(r).log_poisson(phi).exp()
}

pub fn rotate(z: DiskPoint, alpha: f64) -> DiskPoint {
    let w = z.to_complex() * Complex64::from_polar(1.0, alpha);
    DiskPoint { re: w.re, im: w.im }
}

/// The disk automorphism u ↦ (u + a)/(1 + ā u), which sends 0 to a.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mobius {
    a: Complex64,
}

impl Mobius {
    pub fn image_of_origin(self) -> DiskPoint {
        DiskPoint { re: self.a.re, im: self.a.im }
    }

    pub fn apply(self, u: DiskPoint) -> DiskPoint {
        let u = u.to_complex();
        let w = (u + self.a) / (1.0 + self.a.conj() * u);
        DiskPoint { re: w.re, im: w.im }
    }

    pub fn apply_inverse(self, u: DiskPoint) -> DiskPoint {
        let u = u.to_complex();
        let w = (u - self.a) / (1.0 - self.a.conj() * u);
        DiskPoint { re: w.re, im: w.im }
    }

    pub fn inverse(self) -> Mobius {
        Mobius { a: -self.a }
    }
}

/// The automorphism γ with γ(0) = z0.
pub fn mobius_to_origin(z0: DiskPoint) -> Mobius {
    Mobius { a: z0.to_complex() }
}

/// ρ(z, [0, ζ]): golden-section search over the hyperbolic arclength s of the
/// segment point tanh(s/2)·ζ.
pub fn distance_to_segment(z: DiskPoint, zeta: BoundaryPoint) -> f64 {
    let dir = zeta.to_complex();
    let dist_at = |s: f64| {
        let t = (0.5 * s).tanh();
        hyperbolic_distance(z, DiskPoint { re: t * dir.re, im: t * dir.im })
    };
    let upper = hyperbolic_distance(z, DiskPoint::origin());
    let (mut lo, mut hi) = (0.0, upper);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let mut f1 = dist_at(x1);
    let mut f2 = dist_at(x2);
    while hi - lo > 1e-10 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = dist_at(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = dist_at(x2);
        }
    }
    dist_at(0.5 * (lo + hi)).min(upper)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pt(re: f64, im: f64) -> DiskPoint {
        DiskPoint::new(re, im).unwrap()
    }

    #[test]
    fn distance_examples() {
        assert_eq!(hyperbolic_distance(DiskPoint::origin(), DiskPoint::origin()), 0.0);
        let d = hyperbolic_distance(DiskPoint::origin(), pt(0.5, 0.0));
        assert!((d - 3f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn poisson_examples() {
        assert!((poisson_kernel(DiskPoint::origin(), BoundaryPoint::new(1.3)) - 1.0).abs() < 1e-15);
        let r: f64 = 0.7;
        let p = poisson_kernel(pt(r, 0.0), BoundaryPoint::new(0.0));
        assert!((p - (1.0 + r) / (1.0 - r)).abs() < 1e-13);
        let p = poisson_kernel(pt(0.5, 0.0), BoundaryPoint::new(PI / 2.0));
        assert!((p - 0.6).abs() < 1e-15);
    }

    #[test]
    fn busemann_signs() {
        let r: f64 = 0.6;
        let big_r = ((1.0 + r) / (1.0 - r)).ln();
        assert_eq!(busemann(DiskPoint::origin(), BoundaryPoint::new(0.4)), 0.0);
        assert!((busemann(pt(r, 0.0), BoundaryPoint::new(0.0)) + big_r).abs() < 1e-14);
        assert!((busemann(pt(r, 0.0), BoundaryPoint::new(PI)) - big_r).abs() < 1e-14);
    }

    #[test]
    fn busemann_matches_limit_along_ray() {
        // hor(z, ξ) = lim_{t→∞} ρ(z, γ(t)) − t along the ray from 0 to ξ.
        let z = pt(0.3, -0.25);
        let xi = BoundaryPoint::new(0.8);
        let t: f64 = 20.0;
        let w = DiskPoint::from_polar((0.5 * t).tanh(), xi.angle()).unwrap();
        let limit = hyperbolic_distance(z, w) - t;
        assert!((limit - busemann(z, xi)).abs() < 1e-6);
    }

    #[test]
    fn radial_profile_endpoints_and_tau_identity() {
        let r: f64 = 0.8;
        assert!((poisson_radial_profile(r, 0.0) - (1.0 + r) / (1.0 - r)).abs() < 1e-13);
        assert!((poisson_radial_profile(r, PI) - (1.0 - r) / (1.0 + r)).abs() < 1e-15);
        let f = RadialFrame::from_r(r);
        for &phi in &[0.1, 0.5, 1.7, 3.0] {
            let direct = (1.0 - r * r) / (1.0 + r * r - 2.0 * r * f64::cos(phi));
            let ratio = direct / poisson_radial_profile(r, 0.0);
            let s = (phi / 2.0).sin();
            assert!((ratio - 1.0 / (1.0 + f.tau * f.tau * s * s)).abs() < 1e-13);
        }
    }

    #[test]
    fn frames_agree() {
        let a = RadialFrame::from_r(0.9);
        let b = RadialFrame::from_big_r(a.big_r);
        assert!((a.r - b.r).abs() < 1e-15);
        assert!((a.tau - b.tau).abs() < 1e-12 * a.tau);
        assert!((a.one_minus_r - b.one_minus_r).abs() < 1e-15);
        let far = RadialFrame::from_big_r(25.0);
        assert!(far.tau <= far.big_r.exp() + 1.0);
        assert!((far.tau / far.big_r.exp() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rotation_example() {
        let z = rotate(pt(0.3, 0.0), PI);
        assert!((z.re + 0.3).abs() < 1e-16 && z.im.abs() < 1e-16);
    }

    #[test]
    fn mobius_recentering_bound() {
        let g = mobius_to_origin(pt(0.4, 0.3));
        let back = g.apply_inverse(DiskPoint::origin());
        let shift = hyperbolic_distance(back, DiskPoint::origin());
        for k in 0..20 {
            let z = DiskPoint::from_polar(0.05 * k as f64, 0.7 * k as f64).unwrap();
            let gz = g.apply(z);
            let lhs = (hyperbolic_distance(gz, DiskPoint::origin())
                - hyperbolic_distance(z, DiskPoint::origin()))
            .abs();
            assert!(lhs <= shift + 1e-12);
        }
        let o = g.apply(DiskPoint::origin());
        assert!((o.re - 0.4).abs() < 1e-16 && (o.im - 0.3).abs() < 1e-16);
    }

    #[test]
    fn segment_distance_on_segment_and_grid_oracle() {
        assert!(distance_to_segment(pt(0.6, 0.0), BoundaryPoint::new(0.0)) < 1e-8);
        let z = pt(0.0, 0.5);
        let mut best = f64::INFINITY;
        for i in 0..1_000_000 {
            let t = i as f64 / 1e6;
            best = best.min(hyperbolic_distance(z, pt(t, 0.0)));
        }
        assert!((distance_to_segment(z, BoundaryPoint::new(0.0)) - best).abs() < 1e-6);
    }

    #[test]
    fn angle_normalization() {
        assert_eq!(BoundaryPoint::new(PI).angle(), PI);
        assert_eq!(BoundaryPoint::new(-PI).angle(), PI);
        assert!((BoundaryPoint::new(3.0 * PI / 2.0).angle() + PI / 2.0).abs() < 1e-15);
    }

    fn disk_point() -> impl Strategy<Value = DiskPoint> {
        (0.0..0.98f64, -PI..PI).prop_map(|(r, a)| DiskPoint::from_polar(r, a).unwrap())
    }

    proptest! {
        #[test]
        fn kernel_is_exp_of_minus_busemann(z in disk_point(), phi in -PI..PI) {
            let xi = BoundaryPoint::new(phi);
            let p = poisson_kernel(z, xi);
            prop_assert!((p - (-busemann(z, xi)).exp()).abs() <= 1e-14 * p);
            let zc = z.to_complex();
            let direct = (1.0 - zc.norm_sqr()) / (xi.to_complex() - zc).norm_sqr();
            prop_assert!((p - direct).abs() <= 1e-11 * p);
        }

        #[test]
        fn busemann_rotation_invariant(z in disk_point(), phi in -PI..PI, alpha in -PI..PI) {
            let a = busemann(z, BoundaryPoint::new(phi));
            let b = busemann(rotate(z, alpha), BoundaryPoint::new(phi + alpha));
            prop_assert!((a - b).abs() < 1e-13 * (1.0 + a.abs()));
        }

        #[test]
        fn busemann_bounded_by_radius(z in disk_point(), phi in -PI..PI) {
            let f = z.frame();
            prop_assert!(busemann(z, BoundaryPoint::new(phi)).abs() <= f.big_r * (1.0 + 1e-14) + 1e-15);
        }

        #[test]
        fn distance_rotation_and_symmetry(z in disk_point(), w in disk_point(), alpha in -PI..PI) {
            let d = hyperbolic_distance(z, w);
            prop_assert!((d - hyperbolic_distance(w, z)).abs() < 1e-12);
            let dr = hyperbolic_distance(rotate(z, alpha), rotate(w, alpha));
            prop_assert!((d - dr).abs() < 1e-12 * (1.0 + d));
        }

        #[test]
        fn triangle_inequality(a in disk_point(), b in disk_point(), c in disk_point()) {
            let ab = hyperbolic_distance(a, b);
            let bc = hyperbolic_distance(b, c);
            let ac = hyperbolic_distance(a, c);
            prop_assert!(ac <= ab + bc + 1e-10);
        }

        #[test]
        fn mobius_is_isometry(u in disk_point(), v in disk_point(), z0 in disk_point()) {
            let g = mobius_to_origin(DiskPoint { re: 0.8 * z0.re, im: 0.8 * z0.im });
            let d = hyperbolic_distance(u, v);
            let dg = hyperbolic_distance(g.apply(u), g.apply(v));
            prop_assert!((d - dg).abs() < 1e-9 * (1.0 + d));
            let back = g.apply_inverse(g.apply(u));
            prop_assert!((back.re - u.re).abs() < 1e-12 && (back.im - u.im).abs() < 1e-12);
        }
    }
}
