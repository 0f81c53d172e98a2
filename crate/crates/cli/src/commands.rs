//! One function per subcommand, each producing a `Report`.

use crate::config::{Command, RunConfig, UsageError};
use crate::report::{Cell, Report, Status};
use bisphere::asymptotic::{
    c_h_double_series, concentration_factor_limit, gradient_asymptotic, gradient_norm_fd,
    mu_constants, q_boundary_b1, q_coefficient, q_h_bispherical, q_h_grid_max,
};
use bisphere::exact::{
    boundary_constants, concentration_factor_eps, flux_quadrature, h_via_images, image_charges,
    image_terms_for_tol, potential_difference_identity_check, HSeries, SeriesOptions,
    UniformSolution, DEFAULT_QUAD_ORDER,
};
use bisphere::geometry::Sphere;
use bisphere::{BisphericalPoint, CartesianPoint, Error, SphereConfig};
use rayon::prelude::*;
use std::f64::consts::PI;
use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum RunError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Library(#[from] Error),
}

impl From<UsageError> for RunError {
    fn from(e: UsageError) -> Self {
        RunError::Usage(e.0)
    }
}

impl RunError {
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Usage(_) | RunError::Library(Error::Domain(_)) => 3,
            RunError::Library(_) => 2,
        }
    }
}

type Result<T> = std::result::Result<T, RunError>;

/// Gaps at or below this print progress to standard error.
const PROGRESS_EPS: f64 = 1e-6;

pub fn run(cfg: &RunConfig) -> Result<Report> {
    match cfg.command {
        Command::QTable => q_table(cfg),
        Command::CH => c_h(cfg),
        Command::ExactProfile => exact_profile(cfg),
        Command::BlowupProfile => blowup_profile(cfg),
        Command::Compare => compare(cfg),
        Command::FieldMap => field_map(cfg),
        Command::RateStudy => rate_study(cfg),
        Command::Invariants => invariants(cfg),
    }
}

fn options(cfg: &RunConfig) -> SeriesOptions {
    SeriesOptions {
        tol: cfg.tol,
        terms_cap: cfg.terms_cap,
    }
}

fn geometry(cfg: &RunConfig, eps: f64) -> Result<SphereConfig> {
    Ok(SphereConfig::new(cfg.r1, cfg.r2_single(), eps)?)
}

fn progress(eps: f64, what: &str) {
    if eps <= PROGRESS_EPS {
        eprintln!("bisphere: eps = {eps:e}: {what}");
    }
}

fn require_uniform(cfg: &RunConfig) -> Result<f64> {
    cfg.uniform_e0().ok_or_else(|| {
        RunError::Usage(format!(
            "{} needs a uniform field (a single --field coefficient)",
            cfg.command
        ))
    })
}

fn q_table(cfg: &RunConfig) -> Result<Report> {
    let mut cols = vec!["r2".to_string()];
    cols.extend((1..=cfg.k_max).map(|k| format!("Q{k}")));
    let rows: Vec<Result<Vec<Cell>>> = cfg
        .r2
        .par_iter()
        .map(|&r2| {
            let mut row = vec![Cell::Num(r2)];
            for k in 1..=cfg.k_max {
                row.push(Cell::Num(q_coefficient(k, cfg.r1, r2)?));
            }
            Ok(row)
        })
        .collect();
    let mut rep = Report::new(&[]);
    rep.columns = cols;
    rep.rows = rows.into_iter().collect::<Result<_>>()?;
    Ok(rep)
}

fn scaled_gap(diff: f64, eps: f64) -> f64 {
    let l = eps * eps.ln().abs();
    if l > 0.0 {
        diff.abs() / l
    } else {
        f64::NAN
    }
}

fn c_h(cfg: &RunConfig) -> Result<Report> {
    let field = cfg.axial_field();
    let limit = concentration_factor_limit(&field, cfg.r1, cfg.r2_single())?;
    let opts = options(cfg);
    let rows: Vec<Result<Vec<Cell>>> = cfg
        .eps
        .par_iter()
        .map(|&eps| {
            let g = geometry(cfg, eps)?;
            let che = concentration_factor_eps(&g, &field, &opts)?;
            Ok(vec![
                eps.into(),
                che.into(),
                limit.into(),
                (che - limit).into(),
                scaled_gap(che - limit, eps).into(),
            ])
        })
        .collect();
    let mut rep = Report::new(&[
        "eps",
        "c_h_eps",
        "c_h",
        "difference",
        "difference_over_eps_ln_eps",
    ]);
    rep.rows = rows.into_iter().collect::<Result<_>>()?;
    rep.summarize_num("c_h", limit, cfg.digits);
    let series = c_h_double_series(&field, cfg.r1, cfg.r2_single(), cfg.tol.min(1e-10))?;
    rep.summarize_num("c_h_double_series", series, cfg.digits);
    Ok(rep)
}

/// Evaluates `f` at each θ of the list, flagging rows that fail to converge.
fn theta_rows<F>(cfg: &RunConfig, eps: f64, width: usize, f: F) -> Vec<(Vec<Cell>, bool)>
where
    F: Fn(f64) -> std::result::Result<Vec<f64>, Error> + Sync,
{
    cfg.theta_list
        .par_iter()
        .map(|&t| match f(t * PI) {
            Ok(vals) => {
                let mut row = vec![Cell::Num(eps), Cell::Num(t)];
                row.extend(vals.into_iter().map(Cell::Num));
                (row, true)
            }
            Err(_) => {
                let mut row = vec![Cell::Num(eps), Cell::Num(t)];
                row.extend(std::iter::repeat_n(Cell::Num(f64::NAN), width));
                (row, false)
            }
        })
        .collect()
}

fn push_flagged(rep: &mut Report, rows: Vec<(Vec<Cell>, bool)>) {
    for (mut row, ok) in rows {
        row.push(Cell::Bool(ok));
        if !ok {
            rep.status = rep.status.max(Status::ConvergenceFailure);
        }
        rep.rows.push(row);
    }
}

fn failed_rows(cfg: &RunConfig, eps: f64, width: usize) -> Vec<(Vec<Cell>, bool)> {
    theta_rows(cfg, eps, width, |_| Err(Error::Internal(String::new())))
}

fn exact_profile(cfg: &RunConfig) -> Result<Report> {
    let e0 = require_uniform(cfg)?;
    let opts = options(cfg);
    let mut rep = Report::new(&["eps", "theta", "dnu_h", "dnu_u_minus_h", "converged"]);
    for &eps in &cfg.eps {
        let g = geometry(cfg, eps)?;
        progress(eps, "summing the exact series");
        let rows = match (HSeries::new(&g, &opts), UniformSolution::new(&g, e0, &opts)) {
            (Ok(h), Ok(us)) => theta_rows(cfg, eps, 2, |th| {
                Ok(vec![
                    h.normal_derivative(Sphere::B1, th)?,
                    us.normal_derivative(Sphere::B1, th)?,
                ])
            }),
            (Err(Error::NonConvergence { .. }), _) | (_, Err(Error::NonConvergence { .. })) => {
                failed_rows(cfg, eps, 2)
            }
            (Err(e), _) | (_, Err(e)) => return Err(e.into()),
        };
        push_flagged(&mut rep, rows);
    }
    Ok(rep)
}

fn blowup_profile(cfg: &RunConfig) -> Result<Report> {
    let ch = concentration_factor_limit(&cfg.axial_field(), cfg.r1, cfg.r2_single())?;
    let mut rep = Report::new(&["eps", "theta", "q_b1", "c_h_q_b1"]);
    for &eps in &cfg.eps {
        let g = geometry(cfg, eps)?;
        for &t in &cfg.theta_list {
            let q = q_boundary_b1(t * PI, &g)?;
            rep.rows
                .push(vec![eps.into(), t.into(), q.into(), (ch * q).into()]);
        }
    }
    rep.summarize_num("c_h", ch, cfg.digits);
    Ok(rep)
}

fn compare(cfg: &RunConfig) -> Result<Report> {
    let e0 = require_uniform(cfg)?;
    let ch = concentration_factor_limit(&cfg.axial_field(), cfg.r1, cfg.r2_single())?;
    let opts = options(cfg);
    let mut rep = Report::new(&[
        "eps",
        "theta",
        "exact",
        "asymptotic",
        "difference",
        "converged",
    ]);
    for &eps in &cfg.eps {
        let g = geometry(cfg, eps)?;
        progress(eps, "summing the exact series");
        let rows = match UniformSolution::new(&g, e0, &opts) {
            Ok(us) => theta_rows(cfg, eps, 3, |th| {
                let exact = us.normal_derivative(Sphere::B1, th)?;
                let asym = ch * q_boundary_b1(th, &g)?;
                Ok(vec![exact, asym, exact - asym])
            }),
            Err(Error::NonConvergence { .. }) => failed_rows(cfg, eps, 3),
            Err(e) => return Err(e.into()),
        };
        push_flagged(&mut rep, rows);
    }
    rep.summarize_num("c_h", ch, cfg.digits);
    Ok(rep)
}

fn field_map(cfg: &RunConfig) -> Result<Report> {
    let eps = cfg.eps[0];
    let g = geometry(cfg, eps)?;
    let field = cfg.axial_field();
    let region = g.superfocus_region().ok();
    let opts = options(cfg);
    let exact = match cfg.uniform_e0() {
        Some(e0) => Some(UniformSolution::new(&g, e0, &opts)?),
        None => None,
    };
    let half = cfg.extent.unwrap_or(g.r1.max(g.r2));
    let [n, m] = cfg.grid;
    let coord = |i: usize, k: usize| -half + 2.0 * half * i as f64 / (k - 1) as f64;
    progress(eps, "evaluating the field map");
    let pts: Vec<(f64, f64)> = (0..m)
        .flat_map(|j| (0..n).map(move |i| (coord(i, n), coord(j, m))))
        .collect();
    let rows: Vec<Vec<Cell>> = pts
        .par_iter()
        .map(|&(x1, x3)| {
            let p = CartesianPoint::new(x1, 0.0, x3);
            if !g.is_exterior(&p) {
                return vec![
                    x1.into(),
                    x3.into(),
                    f64::NAN.into(),
                    f64::NAN.into(),
                    false.into(),
                ];
            }
            let asym = gradient_asymptotic(&p, &g, &field).map_or(f64::NAN, |v| v.norm());
            let ex = match &exact {
                Some(us) => g
                    .to_bispherical(&p)
                    .and_then(|b| gradient_norm_fd(us, b.xi, b.theta))
                    .unwrap_or(f64::NAN),
                None => f64::NAN,
            };
            let inside = region.is_some_and(|r| r.contains(&p));
            vec![x1.into(), x3.into(), asym.into(), ex.into(), inside.into()]
        })
        .collect();
    let mut rep = Report::new(&[
        "x1",
        "x3",
        "grad_u_asymptotic",
        "grad_u_exact_if_uniform",
        "in_omega_star",
    ]);
    rep.rows = rows;
    if let Some(r) = region {
        rep.summarize_num("theta_eps", r.theta_eps, cfg.digits);
    }
    Ok(rep)
}

fn least_squares_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

fn rate_study(cfg: &RunConfig) -> Result<Report> {
    let lo = cfg.eps.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = cfg.eps.iter().cloned().fold(0.0, f64::max);
    if hi / lo < 1e3 * (1.0 - 1e-12) || cfg.eps.iter().any(|&e| e >= 1.0) {
        return Err(RunError::Usage(
            "rate-study needs eps values in (0, 1) spanning at least three decades".into(),
        ));
    }
    let field = cfg.axial_field();
    let limit = concentration_factor_limit(&field, cfg.r1, cfg.r2_single())?;
    let opts = options(cfg);
    let [n_xi, n_theta] = cfg.grid;
    let rows: Vec<Result<(f64, f64, f64)>> = cfg
        .eps
        .par_iter()
        .map(|&eps| {
            let g = geometry(cfg, eps)?;
            let che = concentration_factor_eps(&g, &field, &opts)?;
            Ok((eps, che, q_h_grid_max(&g, n_xi, n_theta)?))
        })
        .collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let mut rep = Report::new(&[
        "eps",
        "c_h_eps",
        "c_h",
        "difference_over_eps_ln_eps",
        "max_q_h",
    ]);
    let mut ratios = Vec::new();
    for &(eps, che, qmax) in &rows {
        let r = scaled_gap(che - limit, eps);
        ratios.push(r);
        rep.rows.push(vec![
            eps.into(),
            che.into(),
            limit.into(),
            r.into(),
            qmax.into(),
        ]);
    }
    let x: Vec<f64> = rows
        .iter()
        .map(|r| (1.0 / (r.0 * r.0.ln().abs())).ln())
        .collect();
    let y: Vec<f64> = rows.iter().map(|r| r.2.ln()).collect();
    rep.summarize_num("max_q_h_slope", least_squares_slope(&x, &y), cfg.digits);
    let band = ratios.iter().cloned().fold(0.0, f64::max)
        / ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    rep.summarize_num("ratio_band", band, cfg.digits);
    let mut by_eps = rows.clone();
    by_eps.sort_by(|a, b| b.0.total_cmp(&a.0));
    let diffs: Vec<f64> = by_eps.iter().map(|r| r.1 - limit).collect();
    let one_sided = diffs.iter().all(|&d| d > 0.0) || diffs.iter().all(|&d| d < 0.0);
    let shrinking = diffs.windows(2).all(|w| w[1].abs() <= w[0].abs());
    rep.summarize("monotone_one_sided", one_sided && shrinking);
    Ok(rep)
}

struct Check {
    name: &'static str,
    residual: f64,
    tolerance: f64,
}

fn invariants(cfg: &RunConfig) -> Result<Report> {
    let g = geometry(cfg, cfg.eps[0])?;
    let field = cfg.axial_field();
    let opts = options(cfg);
    let mut checks = Vec::new();

    let pole_residual = [Sphere::B1, Sphere::B2]
        .iter()
        .map(|&j| (g.radius(j) * g.boundary_xi(j).abs().sinh() / g.a_eps - 1.0).abs())
        .fold(0.0, f64::max);
    checks.push(Check {
        name: "pole_parameter",
        residual: pole_residual,
        tolerance: 1e-13,
    });

    let mut rt: f64 = 0.0;
    for i in 0..=8 {
        for k in 1..=8 {
            let xi = -g.xi1 + g.s() * i as f64 / 8.0;
            let b = BisphericalPoint::new(xi, PI * k as f64 / 9.0, 0.7);
            let p = g.to_cartesian(&b)?;
            let q = g.to_cartesian(&g.to_bispherical(&p)?)?;
            rt = rt.max((p - q).norm() / p.norm().max(g.a_eps));
        }
    }
    checks.push(Check {
        name: "coordinate_round_trip",
        residual: rt,
        tolerance: 1e-10,
    });

    let h = HSeries::new(&g, &opts)?;
    let f1 = flux_quadrature(
        &g,
        |t| h.normal_derivative(Sphere::B1, t),
        Sphere::B1,
        DEFAULT_QUAD_ORDER,
    )?;
    let f2 = flux_quadrature(
        &g,
        |t| h.normal_derivative(Sphere::B2, t),
        Sphere::B2,
        DEFAULT_QUAD_ORDER,
    )?;
    checks.push(Check {
        name: "h_flux_b1",
        residual: (f1.value - 1.0).abs(),
        tolerance: 1e-6,
    });
    checks.push(Check {
        name: "h_flux_b2",
        residual: (f2.value + 1.0).abs(),
        tolerance: 1e-6,
    });

    let mut hc: f64 = 0.0;
    for j in [Sphere::B1, Sphere::B2] {
        let c = if j == Sphere::B1 { h.c1 } else { h.c2 };
        for k in 0..=16 {
            let b = BisphericalPoint::meridian(g.boundary_xi(j), PI * k as f64 / 16.0);
            hc = hc.max((h.value(&g.to_cartesian(&b)?)? - c).abs() / h.c1.abs());
        }
    }
    checks.push(Check {
        name: "h_constant_on_boundaries",
        residual: hc,
        tolerance: 1e-8,
    });

    let us = UniformSolution::new(&g, 1.0, &opts)?;
    let mut uf: f64 = 0.0;
    for j in [Sphere::B1, Sphere::B2] {
        uf = uf.max(
            flux_quadrature(&g, |t| us.normal_derivative(j, t), j, DEFAULT_QUAD_ORDER)?
                .value
                .abs(),
        );
    }
    checks.push(Check {
        name: "uniform_solution_zero_flux",
        residual: uf,
        tolerance: 1e-6,
    });

    let (c1, c2) = boundary_constants(&g, &opts)?;
    let che = concentration_factor_eps(&g, &bisphere::AxialField::uniform(1.0), &opts)?;
    let ratio = (us.boundary_value(Sphere::B1)? - us.boundary_value(Sphere::B2)?) / (c1 - c2);
    checks.push(Check {
        name: "c_h_eps_boundary_ratio",
        residual: (che - ratio).abs() / ratio.abs(),
        tolerance: 1e-6,
    });

    let id = potential_difference_identity_check(&g, 1.0, &opts, DEFAULT_QUAD_ORDER)?;
    checks.push(Check {
        name: "potential_difference_identity",
        residual: id.residual / id.lhs.abs(),
        tolerance: 1e-5,
    });

    let closed = concentration_factor_limit(&field, g.r1, g.r2)?;
    let series = c_h_double_series(&field, g.r1, g.r2, 1e-12)?;
    let rel = if closed == 0.0 {
        series.abs()
    } else {
        (closed - series).abs() / closed.abs()
    };
    checks.push(Check {
        name: "c_h_closed_form_vs_double_series",
        residual: rel,
        tolerance: 1e-6,
    });

    let ics = image_charges(&g, image_terms_for_tol(&g, 1e-12), &opts)?;
    let mut im: f64 = 0.0;
    for &(f, t) in &[(0.1, 0.5), (0.5, 1.5), (0.9, 2.5), (0.5, PI)] {
        let p = g.to_cartesian(&BisphericalPoint::meridian(-g.xi1 + f * g.s(), t))?;
        im = im.max((h.value(&p)? - h_via_images(&ics, &p)).abs() / h.c1.abs());
    }
    checks.push(Check {
        name: "images_vs_series",
        residual: im,
        tolerance: 1e-8,
    });

    let mut qb: f64 = 0.0;
    for k in 0..=16 {
        let t = PI * k as f64 / 16.0;
        let a = q_h_bispherical(-g.xi1, t, &g)?;
        qb = qb.max((a - q_boundary_b1(t, &g)?).abs() / a.abs());
    }
    checks.push(Check {
        name: "q_h_restricts_to_boundary_profile",
        residual: qb,
        tolerance: 1e-12,
    });

    if g.eps < 1.0 {
        let mu = mu_constants(&g)?;
        checks.push(Check {
            name: "mu_weights_sum",
            residual: (mu.mu1 + mu.mu2 - 1.0).abs(),
            tolerance: 1e-14,
        });
    }

    let mut rep = Report::new(&["invariant", "residual", "tolerance", "pass"]);
    for c in checks {
        let pass = c.residual <= c.tolerance;
        if !pass {
            rep.status = rep.status.max(Status::InvariantFailure);
        }
        rep.rows.push(vec![
            c.name.into(),
            c.residual.into(),
            c.tolerance.into(),
            pass.into(),
        ]);
    }
    rep.summarize("all_pass", rep.status == Status::Ok);
    Ok(rep)
}
