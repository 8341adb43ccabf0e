//! Deterministic quadrature rules: Gauss–Legendre on bounded angle ranges and
//! uniform (trapezoid on the torus) rules for periodic angles, plus pairwise
//! summation so results do not depend on accumulation order tweaks.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

#[derive(Debug, Clone)]
pub struct Rule1d {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

fn gl_cache() -> &'static Mutex<HashMap<usize, Arc<Rule1d>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Rule1d>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Gauss–Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
fn gauss_legendre_reference(n: usize) -> Arc<Rule1d> {
    if let Some(rule) = gl_cache().lock().unwrap().get(&n) {
        return rule.clone();
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Evaluate P_n(x) and P_n'(x) by the three-term recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    let rule = Arc::new(Rule1d { nodes, weights });
    gl_cache().lock().unwrap().insert(n, rule.clone());
    rule
}

/// Gauss–Legendre rule on [lo, hi].
pub fn gauss_legendre(n: usize, lo: f64, hi: f64) -> Rule1d {
    assert!(n >= 1 && hi > lo);
    let base = gauss_legendre_reference(n);
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    Rule1d {
        nodes: base.nodes.iter().map(|&t| mid + half * t).collect(),
        weights: base.weights.iter().map(|&w| w * half).collect(),
    }
}

/// Uniform midpoint rule on [lo, hi); spectrally exact for periodic integrands.
pub fn periodic(n: usize, lo: f64, hi: f64) -> Rule1d {
    assert!(n >= 1 && hi > lo);
    let h = (hi - lo) / n as f64;
    Rule1d {
        nodes: (0..n).map(|i| lo + (i as f64 + 0.5) * h).collect(),
        weights: vec![h; n],
    }
}

/// Pairwise (cascade) summation; deterministic and accurate for long sums.
pub fn pairwise_sum_c(xs: &[Complex64]) -> Complex64 {
    if xs.len() <= 32 {
        let mut acc = Complex64::new(0.0, 0.0);
        for x in xs {
            acc += x;
        }
        return acc;
    }
    let mid = xs.len() / 2;
    pairwise_sum_c(&xs[..mid]) + pairwise_sum_c(&xs[mid..])
}

pub fn pairwise_sum_f(xs: &[f64]) -> f64 {
    if xs.len() <= 32 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum_f(&xs[..mid]) + pairwise_sum_f(&xs[mid..])
}

/// Van der Corput radical inverse in the given base.
pub fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let mut inv = 1.0 / base as f64;
    let mut result = 0.0;
    while index > 0 {
        result += (index % base) as f64 * inv;
        index /= base;
        inv /= base as f64;
    }
    result
}

const HALTON_BASES: [u64; 4] = [2, 3, 5, 7];

/// Point `index` of the Halton sequence in `dim` dimensions, in [0,1)^dim.
pub fn halton(index: u64, dim: usize) -> Vec<f64> {
    (0..dim)
        .map(|d| radical_inverse(index + 1, HALTON_BASES[d]))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn gl_integrates_polynomials_exactly() {
        let rule = gauss_legendre(8, 0.0, 1.0);
        // x^7 integrates to 1/8; degree 7 < 2*8.
        let s: f64 = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(x, w)| w * x.powi(7))
            .sum();
        assert_abs_diff_eq!(s, 0.125, epsilon = 1e-14);
    }

    #[test]
    fn gl_integrates_sin_squared() {
        let rule = gauss_legendre(64, 0.0, std::f64::consts::PI);
        let s: f64 = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(x, w)| w * x.sin().powi(2))
            .sum();
        assert_abs_diff_eq!(s, std::f64::consts::PI / 2.0, epsilon = 1e-13);
    }

    #[test]
    fn periodic_rule_kills_fourier_modes() {
        let rule = periodic(32, 0.0, 2.0 * std::f64::consts::PI);
        for n in 1..10i32 {
            let s: f64 = rule
                .nodes
                .iter()
                .zip(&rule.weights)
                .map(|(x, w)| w * (n as f64 * x).cos())
                .sum();
            assert_abs_diff_eq!(s, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn pairwise_sum_matches_naive() {
        let xs: Vec<f64> = (0..1000).map(|i| (i as f64).sin()).collect();
        let naive: f64 = xs.iter().sum();
        assert_abs_diff_eq!(pairwise_sum_f(&xs), naive, epsilon = 1e-9);
    }

    #[test]
    fn halton_is_in_unit_cube() {
        for i in 0..100 {
            for x in halton(i, 3) {
                assert!((0.0..1.0).contains(&x));
            }
        }
    }
}
