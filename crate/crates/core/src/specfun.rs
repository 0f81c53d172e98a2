//! Special functions: Legendre polynomials, polygamma, integer zeta values.
//!
//! Everything is evaluated in binary64. The polygamma implementation shifts
//! the argument upward with the recurrence `ψ_k(z+1) = ψ_k(z) + (-1)^k k!/z^(k+1)`
//! and then applies the Bernoulli-number asymptotic expansion.

use crate::error::{domain, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

pub fn euler_gamma() -> f64 {
    EULER_GAMMA
}

/// Bernoulli numbers B_2, B_4, ..., B_16.
const BERNOULLI_EVEN: [f64; 8] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
];

/// ζ(2), ζ(3), ..., ζ(20).
const ZETA_TABLE: [f64; 19] = [
    1.644_934_066_848_226_4,
    1.202_056_903_159_594_3,
    1.082_323_233_711_138_2,
    1.036_927_755_143_37,
    1.017_343_061_984_449,
    1.008_349_277_381_922_8,
    1.004_077_356_197_944_3,
    1.002_008_392_826_082_2,
    1.000_994_575_127_818_1,
    1.000_494_188_604_119_5,
    1.000_246_086_553_308,
    1.000_122_713_347_578_5,
    1.000_061_248_135_058_7,
    1.000_030_588_236_307,
    1.000_015_282_259_408_7,
    1.000_007_637_197_637_9,
    1.000_003_817_293_265,
    1.000_001_908_212_716_6,
    1.000_000_953_962_033_9,
];

/// Values P_0(x), ..., P_N(x) of the Legendre polynomials at one argument.
#[derive(Debug, Clone, PartialEq)]
pub struct LegendreSequence {
    pub x: f64,
    pub values: Vec<f64>,
}

impl LegendreSequence {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, n: usize) -> Option<f64> {
        self.values.get(n).copied()
    }
}

/// Upward three-term recurrence for `P_0(x)..P_n_max(x)`.
pub fn legendre_sequence(x: f64, n_max: usize) -> Result<LegendreSequence> {
    if !(-1.0..=1.0).contains(&x) {
        return domain(format!("Legendre argument {x} outside [-1, 1]"));
    }
    let values = LegendreIter::new(x).take(n_max + 1).collect();
    Ok(LegendreSequence { x, values })
}

/// Unbounded iterator over `P_0(x), P_1(x), ...`.
///
/// The argument is not range checked; callers inside the crate only pass
/// cosines.
#[derive(Debug, Clone)]
pub struct LegendreIter {
    x: f64,
    n: usize,
    prev: f64,
    curr: f64,
}

impl LegendreIter {
    pub fn new(x: f64) -> Self {
        Self {
            x,
            n: 0,
            prev: 0.0,
            curr: 1.0,
        }
    }
}

impl Iterator for LegendreIter {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let out = self.curr;
        let n = self.n as f64;
        let next = if self.n == 0 {
            self.x
        } else {
            ((2.0 * n + 1.0) * self.x * self.curr - n * self.prev) / (n + 1.0)
        };
        self.prev = self.curr;
        self.curr = next;
        self.n += 1;
        Some(out)
    }
}

fn factorial(k: u32) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * i as f64)
}

/// Polygamma function ψ_k(z) for real z > 0.
pub fn polygamma(k: u32, z: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return domain(format!(
            "polygamma argument must be positive and finite, got {z}"
        ));
    }
    let threshold = 12.0_f64.max(2.0 * k as f64);
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let kfact = factorial(k);

    // ψ_k(z) = ψ_k(z + n) - (-1)^k k! Σ_{i<n} (z+i)^{-(k+1)}
    let mut shift_sum = 0.0;
    let mut w = z;
    while w < threshold {
        shift_sum += w.powi(-(k as i32) - 1);
        w += 1.0;
    }
    let shifted = polygamma_asymptotic(k, w);
    Ok(shifted - sign * kfact * shift_sum)
}

fn polygamma_asymptotic(k: u32, z: f64) -> f64 {
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    if k == 0 {
        let mut acc = z.ln() - 0.5 * inv;
        let mut p = inv2;
        for (j, b) in BERNOULLI_EVEN.iter().enumerate() {
            let two_j = 2.0 * (j + 1) as f64;
            acc -= b / two_j * p;
            p *= inv2;
        }
        return acc;
    }
    let kf = k as f64;
    // (k-1)!/z^k + k!/(2 z^(k+1)) + Σ_j B_2j (2j+k-1)!/((2j)! z^(2j+k))
    let lead = factorial(k - 1) * inv.powi(k as i32);
    let mut acc = lead * (1.0 + 0.5 * kf * inv);
    // ratio (2j+k-1)!/((2j)! (k-1)!) built incrementally
    let mut ratio = 1.0;
    let mut p = lead;
    for (j, b) in BERNOULLI_EVEN.iter().enumerate() {
        let two_j = 2.0 * (j + 1) as f64;
        ratio *= (two_j + kf - 2.0) * (two_j + kf - 1.0) / ((two_j - 1.0) * two_j);
        p *= inv2;
        acc += b * ratio * p;
    }
    if k % 2 == 1 {
        acc
    } else {
        -acc
    }
}

/// Riemann zeta at integer arguments s >= 2.
pub fn riemann_zeta_int(s: u32) -> Result<f64> {
    if s < 2 {
        return domain(format!("zeta requires s >= 2, got {s}"));
    }
    if s <= 20 {
        return Ok(ZETA_TABLE[(s - 2) as usize]);
    }
    // direct sum plus Euler–Maclaurin tail from n = 10
    const N: u32 = 10;
    let sf = s as f64;
    let head: f64 = (1..N).map(|n| (n as f64).powf(-sf)).sum();
    let nf = N as f64;
    let tail = nf.powf(1.0 - sf) / (sf - 1.0) + 0.5 * nf.powf(-sf) + sf * nf.powf(-sf - 1.0) / 12.0;
    Ok(head + tail)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    /// Brute-force ψ_k(z) for k >= 1: partial sum of (m+z)^-(k+1) plus an
    /// integral tail with trapezoid correction.
    fn polygamma_series_oracle(k: u32, z: f64, terms: usize) -> f64 {
        let p = k as f64 + 1.0;
        let mut s = 0.0;
        for m in (0..terms).rev() {
            s += (m as f64 + z).powf(-p);
        }
        let x = terms as f64 + z;
        let tail = x.powf(1.0 - p) / (p - 1.0) + 0.5 * x.powf(-p) + p * x.powf(-p - 1.0) / 12.0;
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        sign * factorial(k) * (s + tail)
    }

    #[test]
    fn legendre_endpoints() {
        let s = legendre_sequence(1.0, 5).unwrap();
        assert!(s.values.iter().all(|&v| v == 1.0));
        let s = legendre_sequence(-1.0, 3).unwrap();
        assert_eq!(s.values, vec![1.0, -1.0, 1.0, -1.0]);
        let s = legendre_sequence(0.5, 2).unwrap();
        assert_eq!(s.values, vec![1.0, 0.5, -0.125]);
        assert_eq!(legendre_sequence(0.3, 0).unwrap().values, vec![1.0]);
    }

    #[test]
    fn legendre_domain() {
        assert!(legendre_sequence(1.0 + 1e-12, 3).is_err());
        assert!(legendre_sequence(f64::NAN, 3).is_err());
    }

    #[test]
    fn legendre_closed_forms() {
        for i in 0..=100 {
            let x = -1.0 + 2.0 * i as f64 / 100.0;
            let s = legendre_sequence(x, 4).unwrap();
            let x2 = x * x;
            let exact = [
                1.0,
                x,
                0.5 * (3.0 * x2 - 1.0),
                0.5 * (5.0 * x2 * x - 3.0 * x),
                (35.0 * x2 * x2 - 30.0 * x2 + 3.0) / 8.0,
            ];
            for (a, b) in s.values.iter().zip(exact) {
                assert!((a - b).abs() < 1e-13, "x={x}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn legendre_bounded_and_recurrent() {
        for &x in &[-0.999, -0.4, 0.0, 0.17, 0.93] {
            let s = legendre_sequence(x, 2000).unwrap();
            for n in 1..2000 {
                assert!(s.values[n].abs() <= 1.0 + 1e-12);
                let nf = n as f64;
                let lhs = (nf + 1.0) * s.values[n + 1];
                let rhs = (2.0 * nf + 1.0) * x * s.values[n] - nf * s.values[n - 1];
                assert!((lhs - rhs).abs() <= 1e-13 * (lhs.abs() + rhs.abs()).max(1e-300) + 1e-15);
            }
        }
    }

    #[test]
    fn polygamma_known_values() {
        assert_relative_eq!(
            polygamma(0, 1.0).unwrap(),
            -EULER_GAMMA,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            polygamma(0, 2.0).unwrap(),
            1.0 - EULER_GAMMA,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            polygamma(1, 0.5).unwrap(),
            PI * PI / 2.0,
            max_relative = 1e-13
        );
        assert_relative_eq!(polygamma(3, 0.5).unwrap(), PI.powi(4), max_relative = 1e-13);
        assert_relative_eq!(
            polygamma(1, 1.0).unwrap(),
            PI * PI / 6.0,
            max_relative = 1e-13
        );
        // ψ_0(1/2) = -γ - 2 ln 2
        assert_relative_eq!(
            polygamma(0, 0.5).unwrap(),
            -EULER_GAMMA - 2.0 * 2f64.ln(),
            max_relative = 1e-13
        );
    }

    #[test]
    fn polygamma_domain() {
        assert!(polygamma(0, 0.0).is_err());
        assert!(polygamma(2, -1.5).is_err());
        assert!(polygamma(1, f64::INFINITY).is_err());
    }

    #[test]
    fn polygamma_matches_series_oracle() {
        for k in 1..=5 {
            for &z in &[0.05, 0.3, 0.5, 0.77, 1.0] {
                let oracle = polygamma_series_oracle(k, z, 1_000_000);
                let value = polygamma(k, z).unwrap();
                assert_relative_eq!(value, oracle, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn polygamma_digamma_series_oracle() {
        // ψ_0(z) = -γ + Σ_{n>=0} (z-1)/((n+1)(n+z)); tail ~ (z-1)/N
        let z = 0.37;
        let n_terms = 10_000_000usize;
        let mut s = 0.0;
        for n in (0..n_terms).rev() {
            let nf = n as f64;
            s += (z - 1.0) / ((nf + 1.0) * (nf + z));
        }
        // Σ_{n>=N} (z-1)/((n+1)(n+z)) ≈ (z-1)(1/N - (z+1)/(2N^2)...)
        let nf = n_terms as f64;
        let tail = (z - 1.0) * (1.0 / nf - (z + 1.0 - 1.0) / (2.0 * nf * nf));
        let oracle = -EULER_GAMMA + s + tail;
        assert_relative_eq!(polygamma(0, z).unwrap(), oracle, max_relative = 1e-12);
    }

    #[test]
    fn polygamma_recurrence() {
        for k in 0..=5u32 {
            for &z in &[0.1, 0.3, 0.5, 1.0, 2.0, 7.0] {
                let lhs = polygamma(k, z + 1.0).unwrap();
                let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
                let base = polygamma(k, z).unwrap();
                let step = sign * factorial(k) / z.powi(k as i32 + 1);
                let rhs = base + step;
                // relative to the magnitude of the summands: at z = 0.1 the
                // two terms cancel to several digits
                let scale = lhs.abs().max(base.abs()).max(step.abs());
                assert!(
                    (lhs - rhs).abs() <= 1e-11 * scale,
                    "k={k} z={z}: {lhs} vs {rhs}"
                );
            }
        }
    }

    #[test]
    fn polygamma_sign_pattern() {
        for k in 1..=8u32 {
            for &z in &[0.2, 1.3, 9.0, 40.0] {
                let v = polygamma(k, z).unwrap();
                let expected = if k % 2 == 1 { 1.0 } else { -1.0 };
                assert_eq!(v.signum(), expected);
            }
        }
    }

    #[test]
    fn zeta_values() {
        assert_relative_eq!(
            riemann_zeta_int(2).unwrap(),
            PI * PI / 6.0,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            riemann_zeta_int(4).unwrap(),
            PI.powi(4) / 90.0,
            max_relative = 1e-15
        );
        assert!(riemann_zeta_int(1).is_err());
        assert!(riemann_zeta_int(0).is_err());
    }

    #[test]
    fn zeta_three_against_direct_sum() {
        let n = 100_000u64;
        let mut s = 0.0;
        for i in (1..n).rev() {
            s += (i as f64).powi(-3);
        }
        let nf = n as f64;
        s += 0.5 / (nf * nf) + 0.5 / nf.powi(3) + 3.0 / (12.0 * nf.powi(4));
        assert_relative_eq!(riemann_zeta_int(3).unwrap(), s, max_relative = 1e-13);
        assert_relative_eq!(
            riemann_zeta_int(3).unwrap(),
            1.2020569032,
            max_relative = 1e-10
        );
    }

    #[test]
    fn zeta_beyond_table() {
        for s in 21..40u32 {
            let direct: f64 = (1..200).map(|n| (n as f64).powi(-(s as i32))).sum();
            assert_relative_eq!(riemann_zeta_int(s).unwrap(), direct, max_relative = 1e-14);
        }
        // continuity across the table boundary
        let direct20: f64 = (1..200).map(|n| (n as f64).powi(-20)).sum();
        assert_relative_eq!(
            riemann_zeta_int(20).unwrap(),
            direct20,
            max_relative = 1e-15
        );
    }

    #[test]
    fn euler_gamma_harmonic_limit() {
        // H_n - ln n - 1/(2n) + 1/(12 n^2) → γ
        let n = 1_000_000u64;
        let h: f64 = (1..=n).rev().map(|i| 1.0 / i as f64).sum();
        let nf = n as f64;
        let approx = h - nf.ln() - 0.5 / nf + 1.0 / (12.0 * nf * nf);
        assert!((approx - euler_gamma()).abs() < 1e-12);
        assert!((euler_gamma() - 0.577_215_664_901_532_9).abs() < 1e-15);
    }
}
