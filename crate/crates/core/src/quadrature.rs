//! Gauss–Legendre quadrature on intervals and on geometrically graded panels.

use crate::specfun::LegendreIter;
use std::f64::consts::PI;

/// Nodes and weights of an n-point Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Newton iteration on P_n from the Tricomi initial guesses.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d.is_finite() {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Integral of `f` over [a, b].
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut it = LegendreIter::new(x).skip(n - 1);
    let pm1 = it.next().unwrap_or(1.0);
    let p = it.next().unwrap_or(x);
    let nf = n as f64;
    (p, nf * (x * p - pm1) / (x * x - 1.0))
}

/// Quadrature value with an error estimate from a rule of doubled order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub order: usize,
}

/// Panel boundaries on [a, b] whose widths grow geometrically from `a`.
///
/// The first panel has width `first`, each next one is twice as wide, and
/// the last panel is clipped to end at `b`.
pub fn graded_panels(a: f64, b: f64, first: f64) -> Vec<f64> {
    let mut edges = vec![a];
    let mut width = first.max((b - a) * 1e-14).min(b - a);
    let mut x = a;
    while x + width < b - 1e-12 * (b - a) {
        x += width;
        edges.push(x);
        width *= 2.0;
    }
    edges.push(b);
    edges
}

/// Composite Gauss–Legendre over `edges` with order `n` per panel; the
/// error is estimated by comparison with order `2n`.
pub fn composite<F: FnMut(f64) -> f64>(edges: &[f64], n: usize, mut f: F) -> QuadResult {
    let lo = GaussLegendre::new(n);
    let hi = GaussLegendre::new(2 * n);
    let mut v_lo = 0.0;
    let mut v_hi = 0.0;
    for w in edges.windows(2) {
        v_lo += lo.integrate(w[0], w[1], &mut f);
        v_hi += hi.integrate(w[0], w[1], &mut f);
    }
    QuadResult {
        value: v_hi,
        error: (v_hi - v_lo).abs(),
        order: n,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        for n in [1, 2, 5, 16, 40, 101] {
            let g = GaussLegendre::new(n);
            let s: f64 = g.weights.iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "n={n} sum={s}");
        }
    }

    #[test]
    fn exact_for_polynomials() {
        let g = GaussLegendre::new(8);
        for k in 0..16 {
            let v = g.integrate(0.0, 1.0, |x| x.powi(k));
            assert!((v - 1.0 / (k as f64 + 1.0)).abs() < 1e-14, "k={k}");
        }
    }

    #[test]
    fn nodes_sorted_and_symmetric() {
        let g = GaussLegendre::new(21);
        for w in g.nodes.windows(2) {
            assert!(w[0] < w[1]);
        }
        for i in 0..21 {
            assert!((g.nodes[i] + g.nodes[20 - i]).abs() < 1e-15);
        }
    }

    #[test]
    fn graded_panels_cover_interval() {
        let e = graded_panels(0.0, PI, 1e-3);
        assert_eq!(e[0], 0.0);
        assert_eq!(*e.last().unwrap(), PI);
        assert!((e[1] - 1e-3).abs() < 1e-18);
        for w in e.windows(2) {
            assert!(w[1] > w[0]);
        }
    }

    #[test]
    fn composite_peaked_integrand() {
        // ∫_0^π δ/(δ²+θ²) dθ = atan(π/δ)
        let d = 1e-4;
        let r = composite(&graded_panels(0.0, PI, d), 20, |t| d / (d * d + t * t));
        assert!((r.value - (PI / d).atan()).abs() < 1e-12);
        assert!(r.error < 1e-8);
    }
}
