//! Closed-form blow-up terms as the gap `eps` tends to zero.
//!
//! The field between the spheres is `∇u ≈ C_H ∇h + ∇H`, where the limiting
//! concentration factor `C_H` depends only on the radii and on the axial
//! Taylor coefficients of `H`, and `∇h` is captured by elementary functions
//! of the bispherical coordinates.

use crate::error::{domain, Error, Result};
use crate::exact::{SeriesOptions, UniformSolution};
use crate::field::AxialField;
use crate::geometry::{BisphericalPoint, CartesianPoint, Sphere, SphereConfig, SuperfocusRegion};
use crate::quadrature::GaussLegendre;
use crate::specfun::{polygamma, riemann_zeta_int, EULER_GAMMA};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// The constants `μ_ε`, `μ_1`, `μ_2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MuConstants {
    pub mu_eps: f64,
    pub mu1: f64,
    pub mu2: f64,
}

impl MuConstants {
    /// Evaluates the defining formulas for any gap. `eps >= 1` is allowed
    /// here because the profile formulas are still meaningful there; the
    /// checked entry point is [`mu_constants`].
    pub fn from_config(cfg: &SphereConfig) -> Result<Self> {
        let (mu1, mu2) = mu_weights(cfg.r1, cfg.r2)?;
        let (d1, d2) = (polygamma(0, cfg.r_tilde_1)?, polygamma(0, cfg.r_tilde_2)?);
        let g = EULER_GAMMA;
        let bracket = cfg.eps.ln().abs() + cfg.r_tilde.ln() + 2f64.ln()
            - 2.0 * (d1 * d2 - g * g) / (d1 + d2 + 2.0 * g);
        if !(bracket > 0.0) {
            return domain(format!("μ_ε bracket is {bracket} for eps = {}", cfg.eps));
        }
        Ok(Self {
            mu_eps: 1.0 / (2.0 * PI * cfg.r_tilde * bracket),
            mu1,
            mu2,
        })
    }

    /// `(μ̃1, μ̃2) = (μ_ε μ1, μ_ε μ2)`.
    pub fn scaled(&self) -> (f64, f64) {
        (self.mu_eps * self.mu1, self.mu_eps * self.mu2)
    }
}

/// `μ_ε, μ_1, μ_2` for `0 < eps < 1`.
pub fn mu_constants(cfg: &SphereConfig) -> Result<MuConstants> {
    if cfg.eps >= 1.0 {
        return domain(format!("μ constants require eps < 1, got {}", cfg.eps));
    }
    MuConstants::from_config(cfg)
}

/// `(μ_1, μ_2)`, which depend on the radii only.
pub fn mu_weights(r1: f64, r2: f64) -> Result<(f64, f64)> {
    if !(r1 > 0.0 && r2 > 0.0) {
        return domain("radii must be positive");
    }
    let d1 = polygamma(0, r1 / (r1 + r2))? + EULER_GAMMA;
    let d2 = polygamma(0, r2 / (r1 + r2))? + EULER_GAMMA;
    Ok((d1 / (d1 + d2), d2 / (d1 + d2)))
}

/// `Q_k(r1, r2)`.
pub fn q_coefficient(k: u32, r1: f64, r2: f64) -> Result<f64> {
    if k == 0 {
        return domain("Q_k is defined for k >= 1");
    }
    let (mu1, mu2) = mu_weights(r1, r2)?;
    let rt = r1 * r2 / (r1 + r2);
    let (rt1, rt2) = (r1 / (r1 + r2), r2 / (r1 + r2));
    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
    let kfact: f64 = (1..=k).map(f64::from).product();
    let zeta = riemann_zeta_int(k + 1)?;
    let poly = (mu1 * polygamma(k, rt2)? + sign * mu2 * polygamma(k, rt1)?) / kfact;
    Ok(4.0 * PI * rt.powi(k as i32 + 1) * ((mu1 + sign * mu2) * zeta + poly))
}

/// `C_H = Σ_k b_k Q_k(r1, r2)`.
pub fn concentration_factor_limit(field: &AxialField, r1: f64, r2: f64) -> Result<f64> {
    let mut sum = 0.0;
    for (i, &b) in field.b.iter().enumerate() {
        if b != 0.0 {
            sum += b * q_coefficient(i as u32 + 1, r1, r2)?;
        }
    }
    Ok(sum)
}

/// `C_H` from the reflection double series, used as an independent check of
/// [`concentration_factor_limit`].
///
/// The m-sum is added directly up to `M` and its tail is estimated with the
/// Euler–Maclaurin formula, the tail integral being done by quadrature
/// after the substitution `x = M/u`. `M` doubles until two estimates agree
/// to `tol`.
pub fn c_h_double_series(field: &AxialField, r1: f64, r2: f64, tol: f64) -> Result<f64> {
    if field.is_zero() {
        return Ok(0.0);
    }
    let (mu1, mu2) = mu_weights(r1, r2)?;
    let rt = r1 * r2 / (r1 + r2);
    let (rt1, rt2) = (r1 / (r1 + r2), r2 / (r1 + r2));
    let g = |t: f64| field.axis_increment(t);
    let term = |m: f64| {
        let a = rt / (m + 1.0);
        let b = rt / (m + rt2);
        let c = rt / (m + rt1);
        4.0 * PI * (mu1 * (a * g(a) - b * g(-b)) + mu2 * (c * g(c) - a * g(-a)))
    };
    let gl = GaussLegendre::new(40);
    let estimate = |m_cut: usize| -> f64 {
        let head: f64 = (0..m_cut).rev().map(|m| term(m as f64)).sum();
        let m = m_cut as f64;
        let integral = gl.integrate(0.0, 1.0, |u| {
            if u == 0.0 {
                0.0
            } else {
                term(m / u) * m / (u * u)
            }
        });
        let h = 1e-2 * m;
        let d1 = (term(m + h) - term(m - h)) / (2.0 * h);
        head + integral + 0.5 * term(m) - d1 / 12.0
    };
    let mut m_cut = 64usize;
    let mut prev = estimate(m_cut);
    while m_cut < 1 << 24 {
        m_cut *= 2;
        let next = estimate(m_cut);
        if (next - prev).abs() <= tol * next.abs().max(f64::MIN_POSITIVE) || next == prev {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::NonConvergence {
        cap: m_cut,
        tail: f64::NAN,
    })
}

/// Blow-up factor `ψ(x)` multiplying `C_H N(x)` in the gradient asymptotics.
pub fn blowup_psi(p: &CartesianPoint, cfg: &SphereConfig) -> Result<f64> {
    let mu = MuConstants::from_config(cfg)?;
    let c1 = cfg.center(Sphere::B1);
    let c2 = cfg.center(Sphere::B2);
    let r1c2 = cfg.reflect(Sphere::B1, &c2)?;
    let r2c1 = cfg.reflect(Sphere::B2, &c1)?;
    let d = [
        (*p - c1).norm(),
        (*p - r1c2).norm(),
        (*p - c2).norm(),
        (*p - r2c1).norm(),
    ];
    if d.contains(&0.0) {
        return Err(Error::Singular(
            "ψ is singular at the centers and their reflections".into(),
        ));
    }
    let rt = cfg.r_tilde;
    Ok(mu.mu_eps * rt / (2.0 * cfg.a_eps)
        * (mu.mu1 * cfg.r1 / d[0]
            + mu.mu2 * rt / d[1]
            + mu.mu2 * cfg.r2 / d[2]
            + mu.mu1 * rt / d[3]))
}

/// `C_H ψ(x) N(x) + ∇H(x)`; the bounded remainder is not included.
pub fn gradient_asymptotic(
    p: &CartesianPoint,
    cfg: &SphereConfig,
    field: &AxialField,
) -> Result<CartesianPoint> {
    let grad_h = CartesianPoint::from_array(field.gradient(p));
    let ch = concentration_factor_limit(field, cfg.r1, cfg.r2)?;
    if ch == 0.0 {
        return Ok(grad_h);
    }
    let n = cfg.pole_field(p)?;
    Ok((ch * blowup_psi(p, cfg)?) * n + grad_h)
}

fn w_theta(xi: f64, theta: f64) -> f64 {
    BisphericalPoint::meridian(xi, theta).denom().sqrt()
}

/// `q_{∂B1}(θ)`, the blow-up profile of `∂_ν h` on `∂B1`.
pub fn q_boundary_b1(theta: f64, cfg: &SphereConfig) -> Result<f64> {
    let (m1, m2) = MuConstants::from_config(cfg)?.scaled();
    let (x1, x2) = (cfg.xi1, cfg.xi2);
    let w = w_theta(x1, theta);
    let f = 1.0 / (2.0 * cfg.a_eps * cfg.s());
    Ok(
        f * (m1 * (w * w + w.powi(3) / w_theta(3.0 * x1 + 2.0 * x2, theta))
            + m2 * 2.0 * w.powi(3) / w_theta(x1 + 2.0 * x2, theta)),
    )
}

/// `q_h` at bispherical coordinates.
pub fn q_h_bispherical(xi: f64, theta: f64, cfg: &SphereConfig) -> Result<f64> {
    let (m1, m2) = MuConstants::from_config(cfg)?.scaled();
    let s = cfg.s();
    let f = 1.0 / (2.0 * cfg.a_eps * s);
    let i1 = |x: f64, c: f64| f * w_theta(x, theta).powi(3) / w_theta(x - c, theta);
    Ok(m1 * (i1(-xi, 2.0 * cfg.xi1) + i1(xi, 2.0 * s))
        + m2 * (i1(xi, 2.0 * cfg.xi2) + i1(-xi, 2.0 * s)))
}

/// `q_h(x)`, the coefficient of `ê_ξ` in the singular part of `∇h`.
pub fn q_h(p: &CartesianPoint, cfg: &SphereConfig) -> Result<f64> {
    let b = cfg.to_bispherical(p)?;
    q_h_bispherical(b.xi, b.theta, cfg)
}

/// Maximum of `q_h` over a uniform `(ξ, θ)` grid of the exterior.
pub fn q_h_grid_max(cfg: &SphereConfig, n_xi: usize, n_theta: usize) -> Result<f64> {
    let mut best: f64 = 0.0;
    for i in 0..n_xi {
        let xi = -cfg.xi1 + cfg.s() * i as f64 / (n_xi - 1) as f64;
        for j in 1..=n_theta {
            let theta = PI * j as f64 / n_theta as f64;
            best = best.max(q_h_bispherical(xi, theta, cfg)?);
        }
    }
    Ok(best)
}

/// Line-charge densities of the singular part, in the variable
/// `t = acosh(|c|/a)` so that the `1/√(c² - a²)` endpoint factor cancels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineDensities {
    pub weight: f64,
    pub mu1: f64,
    pub mu2: f64,
    /// `t` at `c_1` and `c_2`.
    pub t1: f64,
    pub t2: f64,
    /// `t` at `R_1(c_2)` and `R_2(c_1)`.
    pub t_reflect: f64,
}

impl LineDensities {
    pub fn new(cfg: &SphereConfig) -> Result<Self> {
        let mu = MuConstants::from_config(cfg)?;
        let coth = |x: f64| 1.0 / x.tanh();
        Ok(Self {
            weight: cfg.r_tilde * mu.mu_eps,
            mu1: mu.mu1,
            mu2: mu.mu2,
            t1: coth(cfg.xi1).acosh(),
            t2: coth(cfg.xi2).acosh(),
            t_reflect: coth(cfg.s()).acosh(),
        })
    }

    /// `∫ ρ_1 dc` over `[c_1, p_1]`.
    pub fn total_b1(&self) -> f64 {
        self.weight * (self.mu1 * self.t1 + self.mu2 * self.t_reflect)
    }

    /// `∫ ρ_2 dc` over `[p_2, c_2]`.
    pub fn total_b2(&self) -> f64 {
        self.weight * (self.mu2 * self.t2 + self.mu1 * self.t_reflect)
    }
}

/// `h̃_s(x)`: potential of the line charges `-ρ_1` on `[c_1, p_1]` and `ρ_2`
/// on `[p_2, c_2]`.
pub fn singular_part_hs(p: &CartesianPoint, cfg: &SphereConfig, quad_order: usize) -> Result<f64> {
    let dens = LineDensities::new(cfg)?;
    let gl = GaussLegendre::new(quad_order);
    let a = cfg.a_eps;
    let rho2 = p.x1 * p.x1 + p.x2 * p.x2;
    // ∫_0^T dt / |x - (0, 0, σ a cosh t)|, on unit-width panels
    let line = |sign: f64, t_end: f64| -> f64 {
        let panels = t_end.ceil().max(1.0) as usize;
        let h = t_end / panels as f64;
        (0..panels)
            .map(|i| {
                gl.integrate(i as f64 * h, (i + 1) as f64 * h, |t| {
                    let dz = p.x3 - sign * a * t.cosh();
                    1.0 / (rho2 + dz * dz).sqrt()
                })
            })
            .sum()
    };
    let part1 = dens.mu1 * line(-1.0, dens.t1) + dens.mu2 * line(-1.0, dens.t_reflect);
    let part2 = dens.mu2 * line(1.0, dens.t2) + dens.mu1 * line(1.0, dens.t_reflect);
    let v = dens.weight * (part2 - part1);
    if !v.is_finite() {
        return Err(Error::Singular(
            "evaluation point lies on a charged segment".into(),
        ));
    }
    Ok(v)
}

/// Grid resolution for the superfocusing scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n_xi: usize,
    pub n_theta: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            n_xi: 21,
            n_theta: 200,
        }
    }
}

/// Largest finite-differenced `|∇u|` inside and outside `Ω*`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuperfocusReport {
    pub eps: f64,
    pub region: SuperfocusRegion,
    pub inside_max: f64,
    pub inside_argmax: (f64, f64),
    pub outside_max: f64,
    pub outside_argmax: (f64, f64),
    pub points: usize,
}

/// `|∇u|` at `(ξ, θ)` by central differences of the exact series for the
/// uniform field.
pub fn gradient_norm_fd(us: &UniformSolution, xi: f64, theta: f64) -> Result<f64> {
    let cfg = us.config();
    let hx = 1e-5 * cfg.s();
    let ht = 1e-5;
    let u = |x: f64, t: f64| us.u_bispherical(x, t);
    let d_xi = (u(xi + hx, theta)? - u(xi - hx, theta)?) / (2.0 * hx);
    let d_theta = (u(xi, theta + ht)? - u(xi, theta - ht)?) / (2.0 * ht);
    let (sigma, _, _) = cfg.scale_factors(&BisphericalPoint::meridian(xi, theta))?;
    Ok(d_xi.hypot(d_theta) / sigma)
}

/// Scans a uniform `(ξ, θ)` grid of the exterior for the uniform field `E0 x3`.
pub fn superfocus_bound_check(
    cfg: &SphereConfig,
    e0: f64,
    grid: &GridSpec,
    opts: &SeriesOptions,
) -> Result<SuperfocusReport> {
    if grid.n_xi < 2 || grid.n_theta < 2 {
        return domain("grid needs at least two points per axis");
    }
    let region = cfg.superfocus_region()?;
    let us = UniformSolution::new(cfg, e0, opts)?;
    let pts: Vec<(f64, f64)> = (0..grid.n_xi)
        .flat_map(|i| {
            let xi = -cfg.xi1 + cfg.s() * i as f64 / (grid.n_xi - 1) as f64;
            (1..=grid.n_theta).map(move |j| (xi, PI * j as f64 / grid.n_theta as f64))
        })
        .collect();
    let values: Vec<Result<f64>> = pts
        .par_iter()
        .map(|&(xi, th)| gradient_norm_fd(&us, xi, th))
        .collect();
    let mut rep = SuperfocusReport {
        eps: cfg.eps,
        region,
        inside_max: 0.0,
        inside_argmax: (0.0, 0.0),
        outside_max: 0.0,
        outside_argmax: (0.0, 0.0),
        points: pts.len(),
    };
    for (&(xi, th), v) in pts.iter().zip(values) {
        let v = v?;
        if region.contains_bispherical(&BisphericalPoint::meridian(xi, th)) {
            if v > rep.inside_max {
                rep.inside_max = v;
                rep.inside_argmax = (xi, th);
            }
        } else if v > rep.outside_max {
            rep.outside_max = v;
            rep.outside_argmax = (xi, th);
        }
    }
    Ok(rep)
}
