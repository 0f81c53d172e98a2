//! Two-sphere configuration and bispherical coordinates.
//!
//! The spheres `B1` (radius `r1`) and `B2` (radius `r2`) sit on the `x3`
//! axis, `B1` below `B2`, with gap `eps`. The poles of the bispherical
//! system are `p1 = (0, 0, -a)` and `p2 = (0, 0, a)`, and the sphere
//! boundaries are the level sets `ξ = -ξ1` and `ξ = ξ2`.

use crate::error::{domain, Error, Result};
use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};

/// Below this gap the pole parameter loses relative precision.
pub const EPS_WARN_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CartesianPoint {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl CartesianPoint {
    pub const ORIGIN: Self = Self {
        x1: 0.0,
        x2: 0.0,
        x3: 0.0,
    };

    pub fn new(x1: f64, x2: f64, x3: f64) -> Self {
        Self { x1, x2, x3 }
    }

    pub fn axial(x3: f64) -> Self {
        Self {
            x1: 0.0,
            x2: 0.0,
            x3,
        }
    }

    pub fn from_array(v: [f64; 3]) -> Self {
        Self::new(v[0], v[1], v[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x1, self.x2, self.x3]
    }

    pub fn dot(self, o: Self) -> f64 {
        self.x1 * o.x1 + self.x2 * o.x2 + self.x3 * o.x3
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Distance from the symmetry axis.
    pub fn rho(self) -> f64 {
        self.x1.hypot(self.x2)
    }

    pub fn is_finite(self) -> bool {
        self.x1.is_finite() && self.x2.is_finite() && self.x3.is_finite()
    }
}

impl Add for CartesianPoint {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x1 + o.x1, self.x2 + o.x2, self.x3 + o.x3)
    }
}

impl Sub for CartesianPoint {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x1 - o.x1, self.x2 - o.x2, self.x3 - o.x3)
    }
}

impl Neg for CartesianPoint {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x1, -self.x2, -self.x3)
    }
}

impl Mul<CartesianPoint> for f64 {
    type Output = CartesianPoint;
    fn mul(self, p: CartesianPoint) -> CartesianPoint {
        CartesianPoint::new(self * p.x1, self * p.x2, self * p.x3)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BisphericalPoint {
    pub xi: f64,
    pub theta: f64,
    pub phi: f64,
}

impl BisphericalPoint {
    pub fn new(xi: f64, theta: f64, phi: f64) -> Self {
        Self { xi, theta, phi }
    }

    /// Point in the `x1 >= 0` half of the `x1 x3` plane.
    pub fn meridian(xi: f64, theta: f64) -> Self {
        Self {
            xi,
            theta,
            phi: 0.0,
        }
    }

    /// `cosh ξ - cos θ`, the common denominator of the coordinate map.
    pub fn denom(&self) -> f64 {
        // 2 sinh²(ξ/2) + 2 sin²(θ/2) avoids cancellation near (0, 0)
        let a = (0.5 * self.xi).sinh();
        let b = (0.5 * self.theta).sin();
        2.0 * (a * a + b * b)
    }
}

/// Which boundary coordinate offsets a family of reflected centers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ImageFamily {
    Xi1,
    Xi2,
    Xi1PlusXi2,
}

/// Sphere index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sphere {
    B1,
    B2,
}

impl Sphere {
    pub fn from_index(j: usize) -> Result<Self> {
        match j {
            1 => Ok(Sphere::B1),
            2 => Ok(Sphere::B2),
            _ => domain(format!("sphere index must be 1 or 2, got {j}")),
        }
    }

    /// `(-1)^j`.
    pub fn sign(self) -> f64 {
        match self {
            Sphere::B1 => -1.0,
            Sphere::B2 => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphereConfig {
    pub r1: f64,
    pub r2: f64,
    pub eps: f64,
    pub c1: f64,
    pub c2: f64,
    pub a_eps: f64,
    pub xi1: f64,
    pub xi2: f64,
    pub r_tilde: f64,
    pub r_tilde_1: f64,
    pub r_tilde_2: f64,
    /// Set when `eps` is below [`EPS_WARN_THRESHOLD`].
    pub precision_warning: bool,
}

impl SphereConfig {
    pub fn new(r1: f64, r2: f64, eps: f64) -> Result<Self> {
        for (name, v) in [("r1", r1), ("r2", r2), ("eps", eps)] {
            if !(v > 0.0) || !v.is_finite() {
                return domain(format!("{name} must be positive and finite, got {v}"));
            }
        }
        let d = r1 + r2 + eps;
        let c1 = (r2 * r2 - r1 * r1 - d * d) / (2.0 * d);
        let c2 = c1 + d;
        let a_eps = eps.sqrt()
            * ((2.0 * r1 + eps) * (2.0 * r2 + eps) * (2.0 * r1 + 2.0 * r2 + eps)).sqrt()
            / (2.0 * d);
        let precision_warning = eps < EPS_WARN_THRESHOLD;
        if precision_warning {
            log::warn!(
                "gap {eps:e} is below {EPS_WARN_THRESHOLD:e}; derived constants lose precision"
            );
        }
        Ok(Self {
            r1,
            r2,
            eps,
            c1,
            c2,
            a_eps,
            xi1: (a_eps / r1).asinh(),
            xi2: (a_eps / r2).asinh(),
            r_tilde: r1 * r2 / (r1 + r2),
            r_tilde_1: r1 / (r1 + r2),
            r_tilde_2: r2 / (r1 + r2),
            precision_warning,
        })
    }

    /// `ξ1 + ξ2`.
    pub fn s(&self) -> f64 {
        self.xi1 + self.xi2
    }

    pub fn radius(&self, j: Sphere) -> f64 {
        match j {
            Sphere::B1 => self.r1,
            Sphere::B2 => self.r2,
        }
    }

    pub fn center(&self, j: Sphere) -> CartesianPoint {
        match j {
            Sphere::B1 => CartesianPoint::axial(self.c1),
            Sphere::B2 => CartesianPoint::axial(self.c2),
        }
    }

    /// Boundary coordinate `ξ = (-1)^j ξ_j` of sphere `j`.
    pub fn boundary_xi(&self, j: Sphere) -> f64 {
        match j {
            Sphere::B1 => -self.xi1,
            Sphere::B2 => self.xi2,
        }
    }

    pub fn pole(&self, j: Sphere) -> CartesianPoint {
        match j {
            Sphere::B1 => CartesianPoint::axial(-self.a_eps),
            Sphere::B2 => CartesianPoint::axial(self.a_eps),
        }
    }

    pub fn is_exterior(&self, p: &CartesianPoint) -> bool {
        (*p - self.center(Sphere::B1)).norm() >= self.r1
            && (*p - self.center(Sphere::B2)).norm() >= self.r2
    }

    fn check_not_pole(&self, p: &CartesianPoint) -> Result<()> {
        let tol = 1e-300_f64.max(self.a_eps * 1e-15);
        for j in [Sphere::B1, Sphere::B2] {
            if (*p - self.pole(j)).norm() <= tol {
                return Err(Error::Singular(format!(
                    "point coincides with pole p{}",
                    if j == Sphere::B1 { 1 } else { 2 }
                )));
            }
        }
        Ok(())
    }

    pub fn to_bispherical(&self, p: &CartesianPoint) -> Result<BisphericalPoint> {
        if !p.is_finite() {
            return domain("point has non-finite components");
        }
        self.check_not_pole(p)?;
        let a = self.a_eps;
        let rho = p.rho();
        let z = p.x3;
        // e^{ξ - iθ} = (z + a)/(z - a) with z = x3 + iρ
        let theta = (2.0 * a * rho)
            .atan2(rho * rho + z * z - a * a)
            .clamp(0.0, std::f64::consts::PI);
        let xi = 0.5 * (((z + a) * (z + a) + rho * rho) / ((z - a) * (z - a) + rho * rho)).ln();
        let phi = if rho == 0.0 {
            0.0
        } else {
            let f = p.x2.atan2(p.x1);
            if f < 0.0 {
                f + std::f64::consts::TAU
            } else {
                f
            }
        };
        Ok(BisphericalPoint { xi, theta, phi })
    }

    pub fn to_cartesian(&self, b: &BisphericalPoint) -> Result<CartesianPoint> {
        let den = b.denom();
        if den == 0.0 {
            return Err(Error::Singular(
                "(ξ, θ) = (0, 0) is the point at infinity".into(),
            ));
        }
        let f = self.a_eps / den;
        let st = b.theta.sin();
        Ok(CartesianPoint::new(
            f * st * b.phi.cos(),
            f * st * b.phi.sin(),
            f * b.xi.sinh(),
        ))
    }

    /// `(σ_ξ, σ_θ, σ_φ)`.
    pub fn scale_factors(&self, b: &BisphericalPoint) -> Result<(f64, f64, f64)> {
        let den = b.denom();
        if den == 0.0 {
            return Err(Error::Singular(
                "scale factors are undefined at infinity".into(),
            ));
        }
        let s = self.a_eps / den;
        Ok((s, s, s * b.theta.sin().abs()))
    }

    /// `N(x) = (x - p1)/|x - p1|² - (x - p2)/|x - p2|²`.
    pub fn pole_field(&self, p: &CartesianPoint) -> Result<CartesianPoint> {
        self.check_not_pole(p)?;
        let d1 = *p - self.pole(Sphere::B1);
        let d2 = *p - self.pole(Sphere::B2);
        Ok((1.0 / d1.norm_sq()) * d1 - (1.0 / d2.norm_sq()) * d2)
    }

    /// Unit vector `ê_ξ = σ_ξ N`.
    pub fn unit_xi_vector(&self, p: &CartesianPoint) -> Result<CartesianPoint> {
        let n = self.pole_field(p)?;
        // σ_ξ = |x - p1| |x - p2| / (2a)
        let sigma = (*p - self.pole(Sphere::B1)).norm() * (*p - self.pole(Sphere::B2)).norm()
            / (2.0 * self.a_eps);
        Ok(sigma * n)
    }

    /// Reflection with respect to `∂B_j`.
    pub fn reflect(&self, j: Sphere, p: &CartesianPoint) -> Result<CartesianPoint> {
        let c = self.center(j);
        let d = *p - c;
        let n2 = d.norm_sq();
        if n2 == 0.0 {
            return Err(Error::Singular(
                "reflection about a sphere's own center".into(),
            ));
        }
        let r = self.radius(j);
        Ok((r * r / n2) * d + c)
    }

    /// `(ξ_m^c, q_m^c, p_m^c)` for the reflected-center family `tag`.
    pub fn reflected_center(&self, m: usize, tag: ImageFamily) -> (f64, f64, CartesianPoint) {
        let c = match tag {
            ImageFamily::Xi1 => self.xi1,
            ImageFamily::Xi2 => self.xi2,
            ImageFamily::Xi1PlusXi2 => self.s(),
        };
        let xi = m as f64 * self.s() + c;
        let q = 4.0 * std::f64::consts::PI * self.a_eps / xi.sinh();
        (xi, q, CartesianPoint::axial(self.a_eps / xi.tanh()))
    }

    pub fn superfocus_region(&self) -> Result<SuperfocusRegion> {
        SuperfocusRegion::new(self)
    }
}

/// Gap neighbourhood `Ω*`: the solid of revolution of the disk of radius
/// `r_star` centred at distance `d_star` from the axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuperfocusRegion {
    pub theta_eps: f64,
    pub d_star: f64,
    pub r_star: f64,
}

impl SuperfocusRegion {
    pub fn new(cfg: &SphereConfig) -> Result<Self> {
        let eps = cfg.eps;
        if eps >= (-1.0f64).exp() {
            return domain(format!("superfocus region requires eps < 1/e, got {eps}"));
        }
        let theta_eps = (eps * eps.ln().abs()).sqrt();
        if !(theta_eps > 0.0 && theta_eps < std::f64::consts::FRAC_PI_2) {
            return domain(format!(
                "superfocus angle {theta_eps} is outside (0, π/2) for eps = {eps}"
            ));
        }
        Ok(Self {
            theta_eps,
            // centre distance and radius of the θ = θ_eps level torus
            d_star: cfg.a_eps / theta_eps.tan(),
            r_star: cfg.a_eps / theta_eps.sin(),
        })
    }

    pub fn contains(&self, p: &CartesianPoint) -> bool {
        let d = p.rho() - self.d_star;
        d * d + p.x3 * p.x3 < self.r_star * self.r_star
    }

    /// Same test expressed through the bispherical angle.
    pub fn contains_bispherical(&self, b: &BisphericalPoint) -> bool {
        b.theta > self.theta_eps
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn cfg() -> SphereConfig {
        SphereConfig::new(3.0, 2.0, 0.1).unwrap()
    }

    #[test]
    fn config_invariants() {
        for &(r1, r2, eps) in &[
            (3.0, 2.0, 1.0),
            (1.0, 1.0, 0.01),
            (1.0, 0.1, 1e-6),
            (0.5, 4.0, 0.3),
        ] {
            let c = SphereConfig::new(r1, r2, eps).unwrap();
            assert!(((c.c2 - c.c1) - (r1 + r2 + eps)).abs() < 1e-14 * (r1 + r2));
            assert!((c.xi1.sinh() * r1 / c.a_eps - 1.0).abs() < 1e-13);
            assert!((c.xi2.sinh() * r2 / c.a_eps - 1.0).abs() < 1e-13);
            assert!((c.a_eps / c.xi1.tanh() + c.c1).abs() < 1e-12 * c.c1.abs());
            assert!((c.a_eps / c.xi2.tanh() - c.c2).abs() < 1e-12 * c.c2.abs());
            assert!((c.r_tilde_1 + c.r_tilde_2 - 1.0).abs() < 1e-15);
            assert!(((c.c2 - r2) - (c.c1 + r1) - eps).abs() < 1e-12);
            // each pole lies inside its sphere
            assert!((-c.a_eps - c.c1).abs() < r1 && (c.a_eps - c.c2).abs() < r2);
        }
    }

    #[test]
    fn config_examples() {
        let c = SphereConfig::new(1.0, 1.0, 0.01).unwrap();
        let oracle = 0.1 * (2.01f64 * 2.01 * 4.01).sqrt() / (2.0 * 2.01);
        assert!((c.a_eps - oracle).abs() < 1e-15);
        assert!((c.a_eps - 0.100_124_9).abs() < 1e-7);
        let c = SphereConfig::new(3.0, 2.0, 1.0).unwrap();
        assert!((c.r_tilde - 1.2).abs() < 1e-15);
        assert!((c.r_tilde_1 - 0.6).abs() < 1e-15 && (c.r_tilde_2 - 0.4).abs() < 1e-15);
        let c = SphereConfig::new(1.0, 1.0, 1e-10).unwrap();
        assert!((c.a_eps / 1e-5 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn config_errors_and_warning() {
        assert!(SphereConfig::new(0.0, 1.0, 0.1).is_err());
        assert!(SphereConfig::new(1.0, -1.0, 0.1).is_err());
        assert!(SphereConfig::new(1.0, 1.0, 0.0).is_err());
        assert!(SphereConfig::new(1.0, 1.0, f64::NAN).is_err());
        assert!(
            SphereConfig::new(1.0, 1.0, 1e-13)
                .unwrap()
                .precision_warning
        );
        assert!(!SphereConfig::new(1.0, 1.0, 1e-6).unwrap().precision_warning);
    }

    #[test]
    fn origin_and_infinity() {
        let c = cfg();
        let b = c.to_bispherical(&CartesianPoint::ORIGIN).unwrap();
        assert_eq!((b.xi, b.theta, b.phi), (0.0, PI, 0.0));
        let b = c.to_bispherical(&CartesianPoint::axial(1e8)).unwrap();
        assert!(b.xi.abs() < 1e-7 && b.theta.abs() < 1e-7);
        assert!(c.to_bispherical(&c.pole(Sphere::B2)).is_err());
        assert!(c
            .to_cartesian(&BisphericalPoint::new(0.0, 0.0, 1.0))
            .is_err());
        let p = c
            .to_cartesian(&BisphericalPoint::new(0.0, PI / 2.0, 0.0))
            .unwrap();
        assert!((p.x1 - c.a_eps).abs() < 1e-15 && p.x2 == 0.0 && p.x3 == 0.0);
    }

    #[test]
    fn boundary_surfaces() {
        let c = cfg();
        for i in 0..=20 {
            let theta = PI * i as f64 / 20.0;
            for k in 0..4 {
                let phi = 0.5 * k as f64;
                let p1 = c
                    .to_cartesian(&BisphericalPoint::new(-c.xi1, theta, phi))
                    .unwrap();
                let p2 = c
                    .to_cartesian(&BisphericalPoint::new(c.xi2, theta, phi))
                    .unwrap();
                assert!(((p1 - c.center(Sphere::B1)).norm() / c.r1 - 1.0).abs() < 1e-10);
                assert!(((p2 - c.center(Sphere::B2)).norm() / c.r2 - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn theta_level_set_is_torus() {
        // {θ = t}: (ρ - a cot t)² + x3² = a²/sin² t
        let c = cfg();
        let t = 1.1;
        for i in 0..50 {
            let xi = -c.xi1 + (c.xi1 + c.xi2) * i as f64 / 49.0;
            let p = c.to_cartesian(&BisphericalPoint::meridian(xi, t)).unwrap();
            let lhs = (p.rho() - c.a_eps / t.tan()).powi(2) + p.x3 * p.x3;
            let rhs = (c.a_eps / t.sin()).powi(2);
            assert!((lhs / rhs - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn scale_factor_examples() {
        let c = cfg();
        let (sx, st, sp) = c
            .scale_factors(&BisphericalPoint::new(0.0, PI, 0.0))
            .unwrap();
        assert!((sx - c.a_eps / 2.0).abs() < 1e-16 && sx == st && sp.abs() < 1e-16);
    }

    #[test]
    fn gradient_of_x3_from_scale_factors() {
        let c = cfg();
        let h = 1e-6;
        for &(xi, theta) in &[(0.1, 2.0), (-0.2, 0.7), (0.05, 3.0)] {
            let b = BisphericalPoint::meridian(xi, theta);
            let f = |xi: f64, th: f64| {
                c.to_cartesian(&BisphericalPoint::meridian(xi, th))
                    .unwrap()
                    .x3
            };
            let (sx, st, _) = c.scale_factors(&b).unwrap();
            let dxi = (f(xi + h, theta) - f(xi - h, theta)) / (2.0 * h) / sx;
            let dth = (f(xi, theta + h) - f(xi, theta - h)) / (2.0 * h) / st;
            let p = c.to_cartesian(&b).unwrap();
            let e_xi = c.unit_xi_vector(&p).unwrap();
            let pt = c
                .to_cartesian(&BisphericalPoint::meridian(xi, theta + h))
                .unwrap();
            let pm = c
                .to_cartesian(&BisphericalPoint::meridian(xi, theta - h))
                .unwrap();
            let e_th = {
                let d = pt - pm;
                (1.0 / d.norm()) * d
            };
            let g = dxi * e_xi + dth * e_th;
            assert!(g.x1.abs() < 1e-6 && (g.x3 - 1.0).abs() < 1e-6, "{g:?}");
        }
    }

    #[test]
    fn unit_xi_vector_origin_and_boundary() {
        let c = cfg();
        let e = c.unit_xi_vector(&CartesianPoint::ORIGIN).unwrap();
        assert!(e.x1 == 0.0 && (e.x3 - 1.0).abs() < 1e-14);
        // on ∂B1, ê_ξ is the outward normal of B1
        for i in 0..=10 {
            let theta = 0.01 + 3.1 * i as f64 / 10.0;
            let p = c
                .to_cartesian(&BisphericalPoint::meridian(-c.xi1, theta))
                .unwrap();
            let e = c.unit_xi_vector(&p).unwrap();
            let nu = p - c.center(Sphere::B1);
            let nu = (1.0 / nu.norm()) * nu;
            assert!((e - nu).norm() < 1e-10);
            let p2 = c
                .to_cartesian(&BisphericalPoint::meridian(c.xi2, theta))
                .unwrap();
            let e2 = c.unit_xi_vector(&p2).unwrap();
            let nu2 = p2 - c.center(Sphere::B2);
            assert!((e2 + (1.0 / nu2.norm()) * nu2).norm() < 1e-10);
        }
    }

    #[test]
    fn reflection_properties() {
        let c = cfg();
        let p1 = c.pole(Sphere::B1);
        let p2 = c.pole(Sphere::B2);
        let back = c
            .reflect(Sphere::B1, &c.reflect(Sphere::B2, &p1).unwrap())
            .unwrap();
        assert!((back - p1).norm() < 1e-10);
        let back = c
            .reflect(Sphere::B2, &c.reflect(Sphere::B1, &p2).unwrap())
            .unwrap();
        assert!((back - p2).norm() < 1e-10);
        let r1c2 = c.reflect(Sphere::B1, &c.center(Sphere::B2)).unwrap();
        assert!((r1c2.x3 + c.a_eps / c.s().tanh()).abs() < 1e-10);
        let r2c1 = c.reflect(Sphere::B2, &c.center(Sphere::B1)).unwrap();
        let (_, _, pm) = c.reflected_center(0, ImageFamily::Xi1PlusXi2);
        assert!((r2c1 - pm).norm() < 1e-10);
        let (_, _, pm) = c.reflected_center(0, ImageFamily::Xi2);
        assert!((pm.x3 - c.c2).abs() < 1e-12 * c.c2);
        assert!(c.reflect(Sphere::B1, &c.center(Sphere::B1)).is_err());
    }

    #[test]
    fn reflected_charges_decrease() {
        let c = cfg();
        for tag in [ImageFamily::Xi1, ImageFamily::Xi2, ImageFamily::Xi1PlusXi2] {
            let mut last = f64::INFINITY;
            for m in 0..50 {
                let (_, q, _) = c.reflected_center(m, tag);
                assert!(q > 0.0 && q < last);
                last = q;
            }
            assert!(last < 1e-3 * c.reflected_center(0, tag).1);
        }
    }

    #[test]
    fn superfocus_examples() {
        let c = SphereConfig::new(1.0, 1.0, 1e-4).unwrap();
        let r = c.superfocus_region().unwrap();
        let asym = 1.0 / (1e-4f64.ln().abs()).sqrt();
        assert!((r.d_star / asym - 1.0).abs() < 0.05);
        assert!((r.d_star - 0.3297).abs() < 0.02);
        assert!(r.contains(&CartesianPoint::ORIGIN));
        let outside = c
            .to_cartesian(&BisphericalPoint::meridian(0.0, r.theta_eps / 2.0))
            .unwrap();
        assert!(!r.contains(&outside));
        assert!(SphereConfig::new(1.0, 1.0, 0.9)
            .unwrap()
            .superfocus_region()
            .is_err());
        // torus test agrees with the angle test
        let c = SphereConfig::new(3.0, 2.0, 1e-3).unwrap();
        let r = c.superfocus_region().unwrap();
        for i in 0..400 {
            let xi = -c.xi1 + c.s() * (i % 20) as f64 / 19.0;
            let th = 1e-3 + 3.1 * (i / 20) as f64 / 19.0;
            let b = BisphericalPoint::meridian(xi, th);
            if (th - r.theta_eps).abs() < 1e-9 {
                continue;
            }
            assert_eq!(
                r.contains(&c.to_cartesian(&b).unwrap()),
                r.contains_bispherical(&b)
            );
        }
    }
}
