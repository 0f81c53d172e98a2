//! Axisymmetric external harmonic fields given by their values on the axis.

use crate::geometry::CartesianPoint;
use serde::{Deserialize, Serialize};

/// External field `H` described by `H(t e3) = h0 + Σ_k b_k t^k`.
///
/// Off the axis `H` is the axisymmetric harmonic extension
/// `h0 + Σ_k b_k r^k P_k(cos α)`, i.e. each `t^k` becomes the zonal solid
/// harmonic of degree `k`. A uniform field `E0 x3` is `b = [E0]`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct AxialField {
    pub h0: f64,
    /// `b[0]` is the coefficient of `t`, `b[1]` of `t^2`, ...
    pub b: Vec<f64>,
}

impl AxialField {
    pub fn new(b: Vec<f64>) -> Self {
        Self { h0: 0.0, b }
    }

    pub fn with_constant(h0: f64, b: Vec<f64>) -> Self {
        Self { h0, b }
    }

    pub fn uniform(e0: f64) -> Self {
        Self::new(vec![e0])
    }

    pub fn degree(&self) -> usize {
        self.b.len()
    }

    /// `b_k` with 1-based `k`; zero beyond the stored coefficients.
    pub fn coeff(&self, k: usize) -> f64 {
        if k == 0 {
            self.h0
        } else {
            self.b.get(k - 1).copied().unwrap_or(0.0)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.b.iter().all(|&c| c == 0.0)
    }

    /// `g(t) = H(t e3) - H(0)` by Horner's rule.
    pub fn axis_increment(&self, t: f64) -> f64 {
        self.b.iter().rev().fold(0.0, |acc, &c| (acc + c) * t)
    }

    pub fn axis_value(&self, t: f64) -> f64 {
        self.h0 + self.axis_increment(t)
    }

    /// Sum of `|b_k| r^k`, an upper bound for `|g|` on `[-r, r]`.
    pub fn axis_bound(&self, r: f64) -> f64 {
        self.b.iter().rev().fold(0.0, |acc, &c| (acc + c.abs()) * r)
    }

    pub fn value(&self, p: &CartesianPoint) -> f64 {
        let rho2 = p.x1 * p.x1 + p.x2 * p.x2;
        let z = p.x3;
        let r2 = rho2 + z * z;
        let mut acc = self.h0;
        let (mut s_prev, mut s) = (0.0, 1.0);
        for (k, &c) in self.b.iter().enumerate() {
            let next = next_solid(k, z, r2, s, s_prev);
            s_prev = s;
            s = next;
            acc += c * s;
        }
        acc
    }

    pub fn gradient(&self, p: &CartesianPoint) -> [f64; 3] {
        let k_max = self.b.len();
        if k_max == 0 {
            return [0.0; 3];
        }
        let z = p.x3;
        let r2 = p.x1 * p.x1 + p.x2 * p.x2 + z * z;
        // S_n = r^n P_n(z/r); ∂_z S_k = k S_{k-1}; ∂_ρ S_k = -ρ T_{k-1}
        // with T_0 = 0, T_1 = 1, T_{n+1} = r² T_{n-1} + (2n+1) S_n.
        let mut s = vec![1.0; k_max];
        for n in 1..k_max {
            let prev = if n >= 2 { s[n - 2] } else { 0.0 };
            s[n] = next_solid(n - 1, z, r2, s[n - 1], prev);
        }
        let mut t = vec![0.0; k_max];
        if k_max > 1 {
            t[1] = 1.0;
        }
        for n in 1..k_max.saturating_sub(1) {
            t[n + 1] = r2 * t[n - 1] + (2.0 * n as f64 + 1.0) * s[n];
        }
        let mut dz = 0.0;
        let mut drho_over_rho = 0.0;
        for (i, &c) in self.b.iter().enumerate() {
            dz += c * (i + 1) as f64 * s[i];
            drho_over_rho -= c * t[i];
        }
        [drho_over_rho * p.x1, drho_over_rho * p.x2, dz]
    }
}

/// S_{k+1} from S_k and S_{k-1}, where S_n = r^n P_n(z/r).
fn next_solid(k: usize, z: f64, r2: f64, s: f64, s_prev: f64) -> f64 {
    let kf = k as f64;
    ((2.0 * kf + 1.0) * z * s - kf * r2 * s_prev) / (kf + 1.0)
}
