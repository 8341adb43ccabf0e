//! Irreducible characters of USp(4) (root system C2) as exponential sums,
//! with weight multiplicities computed by the Freudenthal recursion. Angles
//! are the eigenvalue phases: the class has eigenvalues e^{±i t1}, e^{±i t2}.

use std::collections::{BTreeMap, HashMap};

use super::ExpTerm;

const POSITIVE_ROOTS: [(i64, i64); 4] = [(1, -1), (0, 2), (1, 1), (2, 0)];
const RHO: (i64, i64) = (2, 1);

fn dot(a: (i64, i64), b: (i64, i64)) -> i64 {
    a.0 * b.0 + a.1 * b.1
}

fn norm2_shifted(mu: (i64, i64)) -> i64 {
    dot((mu.0 + RHO.0, mu.1 + RHO.1), (mu.0 + RHO.0, mu.1 + RHO.1))
}

/// Dominant representative under the C2 Weyl group (signed permutations).
fn dominant(mu: (i64, i64)) -> (i64, i64) {
    let (a, b) = (mu.0.abs(), mu.1.abs());
    if a >= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// lambda - mu must be a nonnegative integer combination of the simple roots
/// (1,-1) and (0,2): lambda - mu = p*(1,-1) + q*(0,2).
fn below(lambda: (i64, i64), mu: (i64, i64)) -> bool {
    let p = lambda.0 - mu.0;
    let two_q = lambda.1 - mu.1 + p;
    p >= 0 && two_q >= 0 && two_q % 2 == 0
}

/// Weyl dimension formula for C2 highest weight (a, b), a >= b >= 0.
pub fn c2_dimension(a: i64, b: i64) -> i64 {
    (a - b + 1) * (b + 1) * (a + 2) * (a + b + 3) / 6
}

/// Weight multiplicities of the irreducible with highest weight (a, b),
/// keyed by dominant weight.
fn c2_weight_multiplicities(a: i64, b: i64) -> HashMap<(i64, i64), i64> {
    assert!(a >= b && b >= 0);
    let lambda = (a, b);
    // Candidate dominant weights below lambda, sorted by decreasing height.
    let mut candidates: Vec<(i64, i64)> = Vec::new();
    for c in (0..=a).rev() {
        for d in (0..=c).rev() {
            let mu = (c, d);
            if below(lambda, mu) {
                candidates.push(mu);
            }
        }
    }
    candidates.sort_by_key(|&(c, d)| std::cmp::Reverse(c + d));

    let mut mult: HashMap<(i64, i64), i64> = HashMap::new();
    mult.insert(lambda, 1);
    let lambda_norm = norm2_shifted(lambda);
    for &mu in &candidates {
        if mu == lambda {
            continue;
        }
        let denom = lambda_norm - norm2_shifted(mu);
        debug_assert!(denom > 0);
        let mut acc: i64 = 0;
        for &alpha in &POSITIVE_ROOTS {
            for k in 1..=(a + b + 2) {
                let nu = (mu.0 + k * alpha.0, mu.1 + k * alpha.1);
                let dom = dominant(nu);
                if !below(lambda, dom) {
                    continue;
                }
                if let Some(&m) = mult.get(&dom) {
                    acc += m * dot(nu, alpha);
                }
            }
        }
        let m = 2 * acc / denom;
        debug_assert_eq!(2 * acc % denom, 0, "Freudenthal division must be exact");
        if m > 0 {
            mult.insert(mu, m);
        }
    }
    mult
}

/// Full Weyl orbit of a dominant weight under signed permutations.
fn weyl_orbit(mu: (i64, i64)) -> Vec<(i64, i64)> {
    let mut orbit = BTreeMap::new();
    for &(x, y) in &[(mu.0, mu.1), (mu.1, mu.0)] {
        for &sx in &[1i64, -1] {
            for &sy in &[1i64, -1] {
                orbit.insert((sx * x, sy * y), ());
            }
        }
    }
    orbit.into_keys().collect()
}

/// Character of the irreducible with highest weight (a, b) as a sum of
/// exponentials in the two angle coordinates.
pub fn c2_character_terms(a: i64, b: i64) -> Vec<ExpTerm> {
    let mult = c2_weight_multiplicities(a, b);
    let mut dominants: Vec<_> = mult.into_iter().collect();
    dominants.sort();
    let mut terms = Vec::new();
    let mut total = 0i64;
    for ((c, d), m) in dominants {
        for (w1, w2) in weyl_orbit((c, d)) {
            terms.push(ExpTerm { coeff: m as f64, freqs: vec![w1, w2] });
            total += m;
        }
    }
    debug_assert_eq!(total, c2_dimension(a, b), "dimension check for ({a},{b})");
    terms
}
