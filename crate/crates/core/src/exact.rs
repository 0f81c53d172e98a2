//! Exact bispherical series for the singular function `h` and for the
//! potential `u` in a uniform external field, the image-charge form of `h`,
//! and the exact concentration factor.
//!
//! Both solutions share one series shape,
//!
//! ```text
//! v(ξ, θ) = √2 √(cosh ξ - cos θ) Σ_n (A_n e^{(n+½)ξ} + B_n e^{-(n+½)ξ}) P_n(cos θ),
//! ```
//!
//! with coefficients fixed by the boundary values `X1(n)` on `ξ = -ξ1` and
//! `X2(n)` on `ξ = ξ2`. The coefficients are never formed on their own:
//! each term is assembled from decaying exponentials so nothing overflows.

use crate::error::{Error, Result};
use crate::field::AxialField;
use crate::geometry::{BisphericalPoint, CartesianPoint, ImageFamily, Sphere, SphereConfig};
use crate::quadrature::{composite, graded_panels, QuadResult};
use crate::specfun::LegendreIter;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, SQRT_2};

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_TERMS_CAP: usize = 10_000_000;
/// Gauss–Legendre order per panel used by the flux integrals.
pub const DEFAULT_QUAD_ORDER: usize = 24;

/// Truncation controls shared by every series in this module.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesOptions {
    /// Relative tolerance on the truncated tail.
    pub tol: f64,
    /// Maximum number of terms before giving up.
    pub terms_cap: usize,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            terms_cap: DEFAULT_TERMS_CAP,
        }
    }
}

impl SeriesOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }
}

/// A truncated sum with the number of terms that were added.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum {
    pub value: f64,
    pub terms: usize,
    pub tail_bound: f64,
}

/// `1 / (1 - e^{-x})` for `x > 0`.
fn inv_one_minus_exp(x: f64) -> f64 {
    -1.0 / (-x).exp_m1()
}

/// Sums positive terms `f(n)` whose ratio is bounded by `ratio(n)`.
fn sum_positive<F, R>(opts: &SeriesOptions, mut f: F, ratio: R) -> Result<SeriesSum>
where
    F: FnMut(usize) -> f64,
    R: Fn(usize) -> f64,
{
    let mut sum = 0.0;
    for n in 0..opts.terms_cap {
        let t = f(n);
        sum += t;
        let r = ratio(n);
        if r < 1.0 {
            let tail = t * r / (1.0 - r);
            if tail <= opts.tol * sum.abs() || tail == 0.0 {
                return Ok(SeriesSum {
                    value: sum,
                    terms: n + 1,
                    tail_bound: tail,
                });
            }
        }
    }
    let r = ratio(opts.terms_cap);
    let tail = if r < 1.0 {
        f(opts.terms_cap) / (1.0 - r)
    } else {
        f64::INFINITY
    };
    Err(Error::NonConvergence {
        cap: opts.terms_cap,
        tail,
    })
}

/// `U(c) = Σ e^{(2n+1)c} / (e^{(2n+1)(ξ1+ξ2)} - 1)` for `0 <= c < ξ1 + ξ2`.
pub fn capacitance_u(cfg: &SphereConfig, c: f64, opts: &SeriesOptions) -> Result<SeriesSum> {
    let s = cfg.s();
    if !(0.0..s).contains(&c) {
        return Err(Error::Domain(format!(
            "U(c) needs 0 <= c < ξ1+ξ2 = {s}, got {c}"
        )));
    }
    let gap = s - c;
    let rho = (-2.0 * gap).exp();
    sum_positive(
        opts,
        |n| {
            let k = (2 * n + 1) as f64;
            (-k * gap).exp() * inv_one_minus_exp(k * s)
        },
        |_| rho,
    )
}

/// `T(c) = Σ (2n+1)(e^{(2n+1)c} + 1) / (e^{(2n+1)(ξ1+ξ2)} - 1)` for `0 <= c < ξ1 + ξ2`.
pub fn capacitance_t(cfg: &SphereConfig, c: f64, opts: &SeriesOptions) -> Result<SeriesSum> {
    let s = cfg.s();
    if !(0.0..s).contains(&c) {
        return Err(Error::Domain(format!(
            "T(c) needs 0 <= c < ξ1+ξ2 = {s}, got {c}"
        )));
    }
    let gap = s - c;
    let rho = (-2.0 * gap).exp();
    sum_positive(
        opts,
        |n| {
            let k = (2 * n + 1) as f64;
            k * ((-k * gap).exp() + (-k * s).exp()) * inv_one_minus_exp(k * s)
        },
        |n| rho * (2 * n + 3) as f64 / (2 * n + 1) as f64,
    )
}

/// The three capacitance sums `U(0)`, `U(ξ1)`, `U(ξ2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CapacitanceSums {
    pub u0: f64,
    pub u1: f64,
    pub u2: f64,
    pub terms: usize,
}

impl CapacitanceSums {
    pub fn new(cfg: &SphereConfig, opts: &SeriesOptions) -> Result<Self> {
        let u0 = capacitance_u(cfg, 0.0, opts)?;
        let u1 = capacitance_u(cfg, cfg.xi1, opts)?;
        let u2 = capacitance_u(cfg, cfg.xi2, opts)?;
        Ok(Self {
            u0: u0.value,
            u1: u1.value,
            u2: u2.value,
            terms: u0.terms.max(u1.terms).max(u2.terms),
        })
    }

    /// `U(ξ1) U(ξ2) - U(0)²`.
    pub fn det(&self) -> f64 {
        self.u1 * self.u2 - self.u0 * self.u0
    }
}

/// Boundary values `(C1, C2)` of `h`.
pub fn boundary_constants(cfg: &SphereConfig, opts: &SeriesOptions) -> Result<(f64, f64)> {
    let u = CapacitanceSums::new(cfg, opts)?;
    boundary_constants_from(cfg, &u)
}

fn boundary_constants_from(cfg: &SphereConfig, u: &CapacitanceSums) -> Result<(f64, f64)> {
    let det = u.det();
    if !(det > 0.0) {
        return Err(Error::Internal(format!("capacitance determinant is {det}")));
    }
    let f = 1.0 / (8.0 * PI * cfg.a_eps * det);
    Ok((-f * (u.u1 - u.u0), f * (u.u2 - u.u0)))
}

/// Boundary data of a two-sphere series.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Boundary {
    /// Constant values on the two spheres.
    Constant { x1: f64, x2: f64 },
    /// `u - H` for `H = E0 x3`: `E0 (V1 + a k)` on ∂B1 and `E0 (V2 - a k)` on ∂B2.
    Uniform { e0: f64, v1: f64, v2: f64, a: f64 },
}

impl Boundary {
    fn values(&self, n: usize) -> (f64, f64) {
        match *self {
            Boundary::Constant { x1, x2 } => (x1, x2),
            Boundary::Uniform { e0, v1, v2, a } => {
                let ak = a * (2 * n + 1) as f64;
                (e0 * (v1 + ak), e0 * (v2 - ak))
            }
        }
    }

    /// Polynomial growth degree of the boundary values in `n`.
    fn growth(&self) -> i32 {
        match self {
            Boundary::Constant { .. } => 0,
            Boundary::Uniform { .. } => 1,
        }
    }
}

/// Value and ξ-derivative of a series at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    pub d_xi: f64,
    pub terms: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct TwoSphereSeries {
    cfg: SphereConfig,
    boundary: Boundary,
    opts: SeriesOptions,
}

impl TwoSphereSeries {
    fn eval(&self, xi: f64, theta: f64) -> Result<SeriesValue> {
        let cfg = &self.cfg;
        let (xi1, xi2, s) = (cfg.xi1, cfg.xi2, cfg.s());
        let lambda = (2.0 * xi2 - xi).min(2.0 * xi1 + xi);
        if !(lambda > 0.0) {
            return Err(Error::Domain(format!(
                "ξ = {xi} is outside the convergence strip"
            )));
        }
        let b = BisphericalPoint::meridian(xi, theta);
        let den = b.denom();
        if den == 0.0 {
            return Err(Error::Singular("series evaluated at infinity".into()));
        }
        let w = den.sqrt();
        let x = theta.cos();
        let p = self.boundary.growth() + 1;
        let decay = (-lambda).exp();

        let mut legendre = LegendreIter::new(x);
        let (mut sum_f, mut sum_df, mut scale) = (0.0, 0.0, 0.0);
        for n in 0..self.opts.terms_cap {
            let pn = legendre.next().unwrap_or(0.0);
            let h = n as f64 + 0.5;
            let k = 2.0 * h;
            let inv = inv_one_minus_exp(k * s);
            let (x1, x2) = self.boundary.values(n);
            let g = |d: f64| (-h * d).exp();
            let cpart = inv * (x2 * g(2.0 * xi2 - xi) - x1 * g(2.0 * s - xi));
            let dpart = inv * (x1 * g(2.0 * xi1 + xi) - x2 * g(2.0 * s + xi));
            let f = (cpart + dpart) * pn;
            let df = h * (cpart - dpart) * pn;
            sum_f += f;
            sum_df += df;
            scale += f.abs() + df.abs();

            // envelope of the remaining terms: X(n) (n+½) 2 e^{-(n+½)λ} inv
            let (y1, y2) = self.boundary.values(n + 1);
            let xmax = y1.abs().max(y2.abs());
            let env = 2.0 * xmax * (h + 1.0) * (-(h + 1.0) * lambda).exp() * inv;
            let r = decay * ((n as f64 + 3.0) / (n as f64 + 2.0)).powi(p);
            if n >= 4 && r < 1.0 {
                let tail = env / (1.0 - r);
                if tail <= self.opts.tol * scale || env == 0.0 {
                    let value = SQRT_2 * w * sum_f;
                    let d_xi = SQRT_2 * (xi.sinh() / (2.0 * w) * sum_f + w * sum_df);
                    return Ok(SeriesValue {
                        value,
                        d_xi,
                        terms: n + 1,
                    });
                }
            }
        }
        Err(Error::NonConvergence {
            cap: self.opts.terms_cap,
            tail: f64::NAN,
        })
    }

    /// Outward normal derivative on `∂B_j` at angle θ.
    fn normal_derivative(&self, j: Sphere, theta: f64) -> Result<f64> {
        let xi = self.cfg.boundary_xi(j);
        let v = self.eval(xi, theta)?;
        let den = BisphericalPoint::meridian(xi, theta).denom();
        // ν = (-1)^{j+1} ê_ξ and ∂/∂ν = ±(1/σ_ξ) ∂/∂ξ
        Ok(-j.sign() * den / self.cfg.a_eps * v.d_xi)
    }

    fn eval_cartesian(&self, p: &CartesianPoint) -> Result<SeriesValue> {
        let b = self.cfg.to_bispherical(p)?;
        self.eval(b.xi, b.theta)
    }
}

/// The singular function `h`: harmonic outside both spheres, constant
/// `C_j` on `∂B_j`, with fluxes `+1` through `∂B1` and `-1` through `∂B2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HSeries {
    pub c1: f64,
    pub c2: f64,
    /// Terms needed for the tolerance on the boundary, the slowest case.
    pub n_terms: usize,
    series: TwoSphereSeries,
}

impl HSeries {
    pub fn new(cfg: &SphereConfig, opts: &SeriesOptions) -> Result<Self> {
        let (c1, c2) = boundary_constants(cfg, opts)?;
        let series = TwoSphereSeries {
            cfg: *cfg,
            boundary: Boundary::Constant { x1: c1, x2: c2 },
            opts: *opts,
        };
        let n_terms = series.eval(-cfg.xi1, PI)?.terms;
        Ok(Self {
            c1,
            c2,
            n_terms,
            series,
        })
    }

    pub fn config(&self) -> &SphereConfig {
        &self.series.cfg
    }

    /// `(A_0..A_N, B_0..B_N)`.
    pub fn coefficients(&self, n_max: usize) -> (Vec<f64>, Vec<f64>) {
        let cfg = &self.series.cfg;
        let s = cfg.s();
        (0..=n_max)
            .map(|n| {
                let k = (2 * n + 1) as f64;
                let inv = inv_one_minus_exp(k * s);
                let a = inv * (self.c2 * (-k * cfg.xi2).exp() - self.c1 * (-k * s).exp());
                let b = inv * (self.c1 * (-k * cfg.xi1).exp() - self.c2 * (-k * s).exp());
                (a, b)
            })
            .unzip()
    }

    pub fn eval_bispherical(&self, xi: f64, theta: f64) -> Result<SeriesValue> {
        self.series.eval(xi, theta)
    }

    pub fn value(&self, p: &CartesianPoint) -> Result<f64> {
        Ok(self.series.eval_cartesian(p)?.value)
    }

    pub fn normal_derivative(&self, j: Sphere, theta: f64) -> Result<f64> {
        self.series.normal_derivative(j, theta)
    }

    pub fn normal_derivative_b1(&self, theta: f64) -> Result<f64> {
        self.normal_derivative(Sphere::B1, theta)
    }
}

/// `∂_ν h` on `∂B1`.
pub fn h_normal_derivative_b1(cfg: &SphereConfig, theta: f64, opts: &SeriesOptions) -> Result<f64> {
    HSeries::new(cfg, opts)?.normal_derivative_b1(theta)
}

/// Solution `u` for the uniform field `H = E0 x3`, stored as `u - H`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformSolution {
    pub e0: f64,
    /// `u|∂B_j = E0 V_j`.
    pub v1: f64,
    pub v2: f64,
    pub capacitance: CapacitanceSums,
    pub t1: f64,
    pub t2: f64,
    pub n_terms: usize,
    series: TwoSphereSeries,
}

impl UniformSolution {
    pub fn new(cfg: &SphereConfig, e0: f64, opts: &SeriesOptions) -> Result<Self> {
        let u = CapacitanceSums::new(cfg, opts)?;
        let t1 = capacitance_t(cfg, cfg.xi1, opts)?.value;
        let t2 = capacitance_t(cfg, cfg.xi2, opts)?.value;
        let det = u.det();
        if !(det > 0.0) {
            return Err(Error::Internal(format!("capacitance determinant is {det}")));
        }
        let a = cfg.a_eps;
        // zero net flux through each sphere, with U12 read as U(0)
        let v1 = -a * (t2 * u.u1 - t1 * u.u0) / det;
        let v2 = a * (t1 * u.u2 - t2 * u.u0) / det;
        let series = TwoSphereSeries {
            cfg: *cfg,
            boundary: Boundary::Uniform { e0, v1, v2, a },
            opts: *opts,
        };
        let n_terms = if e0 == 0.0 {
            0
        } else {
            series.eval(-cfg.xi1, PI)?.terms
        };
        Ok(Self {
            e0,
            v1,
            v2,
            capacitance: u,
            t1,
            t2,
            n_terms,
            series,
        })
    }

    pub fn config(&self) -> &SphereConfig {
        &self.series.cfg
    }

    pub fn field(&self) -> AxialField {
        AxialField::uniform(self.e0)
    }

    /// `(C_0..C_N, D_0..D_N)`, the coefficients of `e^{±(n+½)ξ}` in `u - H`.
    pub fn coefficients(&self, n_max: usize) -> (Vec<f64>, Vec<f64>) {
        let cfg = &self.series.cfg;
        let s = cfg.s();
        (0..=n_max)
            .map(|n| {
                let k = (2 * n + 1) as f64;
                let inv = inv_one_minus_exp(k * s);
                let (x1, x2) = self.series.boundary.values(n);
                let c = inv * (x2 * (-k * cfg.xi2).exp() - x1 * (-k * s).exp());
                let d = inv * (x1 * (-k * cfg.xi1).exp() - x2 * (-k * s).exp());
                (c, d)
            })
            .unzip()
    }

    pub fn eval_bispherical(&self, xi: f64, theta: f64) -> Result<SeriesValue> {
        self.series.eval(xi, theta)
    }

    pub fn u_minus_h(&self, p: &CartesianPoint) -> Result<f64> {
        Ok(self.series.eval_cartesian(p)?.value)
    }

    pub fn u(&self, p: &CartesianPoint) -> Result<f64> {
        Ok(self.u_minus_h(p)? + self.e0 * p.x3)
    }

    /// `u` at bispherical coordinates in the meridian plane.
    pub fn u_bispherical(&self, xi: f64, theta: f64) -> Result<f64> {
        let v = self.series.eval(xi, theta)?;
        let p = self
            .series
            .cfg
            .to_cartesian(&BisphericalPoint::meridian(xi, theta))?;
        Ok(v.value + self.e0 * p.x3)
    }

    /// `∂_ν (u - H)` on `∂B_j`.
    pub fn normal_derivative(&self, j: Sphere, theta: f64) -> Result<f64> {
        self.series.normal_derivative(j, theta)
    }

    pub fn normal_derivative_b1(&self, theta: f64) -> Result<f64> {
        self.normal_derivative(Sphere::B1, theta)
    }

    /// `u|∂B_j`, read off the series at θ = π/2.
    pub fn boundary_value(&self, j: Sphere) -> Result<f64> {
        self.u_bispherical(self.series.cfg.boundary_xi(j), PI / 2.0)
    }
}

/// One point charge of the image expansion of `h`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImageCharge {
    pub family: ImageFamily,
    pub m: usize,
    /// Signed weight `±C_j` multiplying `q Γ(x - location)`.
    pub weight: f64,
    pub q: f64,
    pub location: CartesianPoint,
}

/// Image-charge representation of `h` truncated at `m < M`.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageChargeSet {
    pub m_terms: usize,
    pub c1: f64,
    pub c2: f64,
    pub charges: Vec<ImageCharge>,
}

/// `Γ(x) = -1/(4π|x|)`.
pub fn newton_kernel(x: &CartesianPoint) -> f64 {
    -1.0 / (4.0 * PI * x.norm())
}

/// Number of image generations for a relative tail `tol`.
pub fn image_terms_for_tol(cfg: &SphereConfig, tol: f64) -> usize {
    ((1.0 / tol).ln() / cfg.s()).ceil().max(1.0) as usize + 1
}

pub fn image_charges(
    cfg: &SphereConfig,
    m_terms: usize,
    opts: &SeriesOptions,
) -> Result<ImageChargeSet> {
    let (c1, c2) = boundary_constants(cfg, opts)?;
    let mut charges = Vec::with_capacity(4 * m_terms);
    for m in 0..m_terms {
        let (_, qs, ps) = cfg.reflected_center(m, ImageFamily::Xi1PlusXi2);
        let (_, q1, p1) = cfg.reflected_center(m, ImageFamily::Xi1);
        let (_, q2, p2) = cfg.reflected_center(m, ImageFamily::Xi2);
        charges.push(ImageCharge {
            family: ImageFamily::Xi1PlusXi2,
            m,
            weight: c1,
            q: qs,
            location: ps,
        });
        charges.push(ImageCharge {
            family: ImageFamily::Xi1,
            m,
            weight: -c1,
            q: q1,
            location: -p1,
        });
        charges.push(ImageCharge {
            family: ImageFamily::Xi2,
            m,
            weight: -c2,
            q: q2,
            location: p2,
        });
        charges.push(ImageCharge {
            family: ImageFamily::Xi1PlusXi2,
            m,
            weight: c2,
            q: qs,
            location: -ps,
        });
    }
    Ok(ImageChargeSet {
        m_terms,
        c1,
        c2,
        charges,
    })
}

impl ImageChargeSet {
    /// Largest ratio `q_{m+1}/q_m` over all families, a ratio-test margin.
    pub fn max_charge_ratio(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for w in self.charges.windows(5) {
            if w[4].family == w[0].family && w[0].q > 0.0 {
                worst = worst.max(w[4].q / w[0].q);
            }
        }
        worst
    }
}

pub fn h_via_images(ics: &ImageChargeSet, p: &CartesianPoint) -> f64 {
    ics.charges
        .iter()
        .map(|c| c.weight * c.q * newton_kernel(&(*p - c.location)))
        .sum()
}

/// Exact concentration factor `C_H^ε` for an axial polynomial field.
pub fn concentration_factor_eps(
    cfg: &SphereConfig,
    field: &AxialField,
    opts: &SeriesOptions,
) -> Result<f64> {
    if field.is_zero() {
        return Ok(0.0);
    }
    let (c1, c2) = boundary_constants(cfg, opts)?;
    let w1 = c1 / (c1 - c2);
    let w2 = c2 / (c1 - c2);
    let g = |p: &CartesianPoint| field.axis_increment(p.x3);
    let decay = 1.0 / (1.0 - (-cfg.s()).exp());
    let mut sum = 0.0;
    let mut scale = 0.0;
    for m in 0..opts.terms_cap {
        let (_, qs, ps) = cfg.reflected_center(m, ImageFamily::Xi1PlusXi2);
        let (_, q1, p1) = cfg.reflected_center(m, ImageFamily::Xi1);
        let (_, q2, p2) = cfg.reflected_center(m, ImageFamily::Xi2);
        let t1 = w1 * (qs * g(&ps) - q1 * g(&-p1));
        let t2 = w2 * (q2 * g(&p2) - qs * g(&-ps));
        sum += t1 - t2;
        scale += t1.abs() + t2.abs();
        // sinh(x + s) >= e^s sinh(x): later charges shrink geometrically
        let (_, q_next, p_next) = cfg.reflected_center(m + 1, ImageFamily::Xi1);
        let (_, q_next2, _) = cfg.reflected_center(m + 1, ImageFamily::Xi2);
        let hmax = field.axis_bound(
            p_next
                .x3
                .abs()
                .max(cfg.a_eps / (cfg.s() * (m + 1) as f64).tanh()),
        );
        let tail = 2.0 * (w1.abs() + w2.abs()) * hmax * q_next.max(q_next2) * decay;
        if m >= 2 && tail <= opts.tol * scale.max(sum.abs()) {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence {
        cap: opts.terms_cap,
        tail: f64::NAN,
    })
}

/// Integral of `∂_ν v` over `∂B_j`, given `∂_ν v` as a function of θ.
pub fn flux_quadrature<F>(
    cfg: &SphereConfig,
    normal_derivative: F,
    j: Sphere,
    quad_order: usize,
) -> Result<QuadResult>
where
    F: Fn(f64) -> Result<f64>,
{
    let xi = cfg.boundary_xi(j);
    let a = cfg.a_eps;
    // the surface element a² sin θ/(cosh ξ - cos θ)² peaks at θ ~ |ξ|
    let edges = graded_panels(0.0, PI, 0.5 * xi.abs().min(1.0));
    let mut err = None;
    let r = composite(&edges, quad_order, |theta| {
        let d = BisphericalPoint::meridian(xi, theta).denom();
        match normal_derivative(theta) {
            Ok(v) => 2.0 * PI * v * a * a * theta.sin() / (d * d),
            Err(e) => {
                err.get_or_insert(e);
                f64::NAN
            }
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(r),
    }
}

/// Both sides of `u|∂B1 - u|∂B2 = ∫_{∂B1 ∪ ∂B2} H ∂_ν h dσ` for `H = E0 x3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

pub fn potential_difference_identity_check(
    cfg: &SphereConfig,
    e0: f64,
    opts: &SeriesOptions,
    quad_order: usize,
) -> Result<IdentityCheck> {
    let us = UniformSolution::new(cfg, e0, opts)?;
    let lhs = us.boundary_value(Sphere::B1)? - us.boundary_value(Sphere::B2)?;
    let hs = HSeries::new(cfg, opts)?;
    let mut rhs = 0.0;
    for j in [Sphere::B1, Sphere::B2] {
        let xi = cfg.boundary_xi(j);
        let q = flux_quadrature(
            cfg,
            |theta| {
                let p = cfg.to_cartesian(&BisphericalPoint::meridian(xi, theta))?;
                Ok(e0 * p.x3 * hs.normal_derivative(j, theta)?)
            },
            j,
            quad_order,
        )?;
        rhs += q.value;
    }
    Ok(IdentityCheck {
        lhs,
        rhs,
        residual: (lhs - rhs).abs(),
    })
}
