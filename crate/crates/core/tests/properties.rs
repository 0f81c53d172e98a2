use approx::assert_relative_eq;
use bisphere::asymptotic::{
    concentration_factor_limit, q_boundary_b1, q_coefficient, q_h_bispherical,
};
use bisphere::exact::{
    h_via_images, image_charges, image_terms_for_tol, HSeries, SeriesOptions, UniformSolution,
};
use bisphere::geometry::{BisphericalPoint, Sphere};
use bisphere::specfun::{legendre_sequence, polygamma};
use bisphere::{AxialField, CartesianPoint, SphereConfig};
use proptest::prelude::*;
use std::f64::consts::PI;

fn config() -> impl Strategy<Value = SphereConfig> {
    (0.2f64..5.0, 0.2f64..5.0, -6.0f64..0.0)
        .prop_map(|(r1, r2, le)| SphereConfig::new(r1, r2, 10f64.powf(le)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn bispherical_round_trip(cfg in config(), xi_frac in 0.0f64..1.0, theta in 0.01f64..PI, phi in 0.0f64..6.2) {
        let xi = -cfg.xi1 + xi_frac * cfg.s();
        let b = BisphericalPoint::new(xi, theta, phi);
        let p = cfg.to_cartesian(&b).unwrap();
        let back = cfg.to_bispherical(&p).unwrap();
        let q = cfg.to_cartesian(&back).unwrap();
        prop_assert!((p - q).norm() <= 1e-10 * p.norm().max(cfg.a_eps));
        prop_assert!(cfg.is_exterior(&p) || (p - cfg.center(Sphere::B1)).norm() > cfg.r1 * (1.0 - 1e-9));
    }

    #[test]
    fn boundary_surfaces_are_spheres(cfg in config(), theta in 0.01f64..PI) {
        for j in [Sphere::B1, Sphere::B2] {
            let p = cfg.to_cartesian(&BisphericalPoint::meridian(cfg.boundary_xi(j), theta)).unwrap();
            let r = (p - cfg.center(j)).norm();
            prop_assert!((r / cfg.radius(j) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn reflection_is_an_involution(cfg in config(), x in -4.0f64..4.0, z in -4.0f64..4.0) {
        let p = CartesianPoint::new(x, 0.3, z);
        for j in [Sphere::B1, Sphere::B2] {
            if (p - cfg.center(j)).norm() < 1e-3 {
                continue;
            }
            let q = cfg.reflect(j, &cfg.reflect(j, &p).unwrap()).unwrap();
            prop_assert!((p - q).norm() < 1e-9 * (1.0 + p.norm()));
        }
    }

    #[test]
    fn unit_xi_vector_is_unit(cfg in config(), x in -3.0f64..3.0, z in -3.0f64..3.0) {
        let p = CartesianPoint::new(x, -0.2, z);
        let e = cfg.unit_xi_vector(&p).unwrap();
        prop_assert!((e.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn legendre_bounded_on_interval(x in -1.0f64..=1.0) {
        let seq = legendre_sequence(x, 200).unwrap();
        prop_assert!(seq.values.iter().all(|v| v.abs() <= 1.0 + 1e-12));
    }

    #[test]
    fn trigamma_recurrence(z in 0.05f64..30.0) {
        let lhs = polygamma(1, z + 1.0).unwrap();
        let rhs = polygamma(1, z).unwrap() - 1.0 / (z * z);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * polygamma(1, z).unwrap());
    }

    #[test]
    fn q_coefficients_are_symmetric_up_to_parity(r1 in 0.2f64..4.0, r2 in 0.2f64..4.0, k in 1u32..7) {
        // swapping the spheres mirrors the axis, so Q_k picks up (-1)^{k+1}
        let a = q_coefficient(k, r1, r2).unwrap();
        let b = q_coefficient(k, r2, r1).unwrap();
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        prop_assert!((a - sign * b).abs() <= 1e-10 * a.abs().max(1e-12));
    }

    #[test]
    fn concentration_factor_is_linear(b in prop::collection::vec(-1.0f64..1.0, 1..6), t in -3.0f64..3.0) {
        let f = AxialField::new(b.clone());
        let g = AxialField::new(b.iter().map(|c| t * c).collect());
        let cf = concentration_factor_limit(&f, 3.0, 2.0).unwrap();
        let cg = concentration_factor_limit(&g, 3.0, 2.0).unwrap();
        prop_assert!((cg - t * cf).abs() <= 1e-12 * (1.0 + cf.abs() * t.abs()));
    }
}

#[test]
fn q_h_on_boundary_is_boundary_profile() {
    let cfg = SphereConfig::new(3.0, 2.0, 1e-3).unwrap();
    for i in 0..=20 {
        let theta = PI * i as f64 / 20.0;
        assert_relative_eq!(
            q_h_bispherical(-cfg.xi1, theta, &cfg).unwrap(),
            q_boundary_b1(theta, &cfg).unwrap(),
            max_relative = 1e-12
        );
    }
}

#[test]
fn h_series_and_images_agree_on_boundaries() {
    let cfg = SphereConfig::new(1.0, 0.5, 0.05).unwrap();
    let opts = SeriesOptions::with_tol(1e-12);
    let h = HSeries::new(&cfg, &opts).unwrap();
    let ics = image_charges(&cfg, image_terms_for_tol(&cfg, 1e-12), &opts).unwrap();
    for i in 1..10 {
        let theta = PI * i as f64 / 10.0;
        let p1 = cfg
            .to_cartesian(&BisphericalPoint::meridian(-cfg.xi1, theta))
            .unwrap();
        let p2 = cfg
            .to_cartesian(&BisphericalPoint::meridian(cfg.xi2, theta))
            .unwrap();
        assert!((h_via_images(&ics, &p1) - h.c1).abs() < 1e-8 * h.c1.abs());
        assert!((h_via_images(&ics, &p2) - h.c2).abs() < 1e-8 * h.c1.abs());
    }
}

#[test]
fn uniform_solution_is_constant_on_each_sphere() {
    let cfg = SphereConfig::new(3.0, 2.0, 0.01).unwrap();
    let us = UniformSolution::new(&cfg, 1.0, &SeriesOptions::with_tol(1e-12)).unwrap();
    for j in [Sphere::B1, Sphere::B2] {
        let v = us.boundary_value(j).unwrap();
        for i in 0..=12 {
            let theta = PI * i as f64 / 12.0;
            let u = us.u_bispherical(cfg.boundary_xi(j), theta).unwrap();
            assert!(
                (u - v).abs() < 1e-8 * (1.0 + v.abs()),
                "{j:?} θ={theta}: {u} vs {v}"
            );
        }
    }
}

#[test]
fn gap_field_grows_as_gap_closes() {
    let mut prev = 0.0;
    for eps in [1e-1, 1e-2, 1e-3, 1e-4] {
        let cfg = SphereConfig::new(3.0, 2.0, eps).unwrap();
        let us = UniformSolution::new(&cfg, 1.0, &SeriesOptions::default()).unwrap();
        let v = us.normal_derivative_b1(PI).unwrap();
        assert!(v > 2.0 * prev, "eps={eps}: {v} after {prev}");
        prev = v;
    }
}

#[test]
fn invalid_inputs_are_rejected() {
    assert!(SphereConfig::new(0.0, 1.0, 0.1).is_err());
    assert!(SphereConfig::new(1.0, 1.0, -0.1).is_err());
    assert!(SphereConfig::new(1.0, f64::NAN, 0.1).is_err());
    assert!(q_coefficient(0, 1.0, 1.0).is_err());
    assert!(polygamma(1, 0.0).is_err());
}
