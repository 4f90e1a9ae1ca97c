//! Log-space factorials, binomials and multinomials.
//!
//! Coherent-state amplitudes for `N ~ 100` involve binomials near `1e29` and
//! multinomials far beyond `f64` range once raised to powers, so every
//! combinatorial prefactor is carried as a logarithm.

use statrs::function::gamma::ln_gamma;

/// `ln n!`
pub fn ln_factorial(n: u64) -> f64 {
    if n < 2 {
        0.0
    } else {
        ln_gamma(n as f64 + 1.0)
    }
}

/// `ln C(n, k)`; `-inf` when `k > n`.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// `ln [N! / (a! b! c!)]` with `a + b + c = N`.
pub fn ln_multinomial3(a: u64, b: u64, c: u64) -> f64 {
    ln_factorial(a + b + c) - ln_factorial(a) - ln_factorial(b) - ln_factorial(c)
}

/// Table of `ln k!` for `k = 0..=n`.
pub fn ln_factorial_table(n: usize) -> Vec<f64> {
    (0..=n as u64).map(ln_factorial).collect()
}

/// `k * ln(x)` with the convention `0 * ln 0 = 0`.
#[inline]
pub fn xlny(k: f64, x: f64) -> f64 {
    if k == 0.0 {
        0.0
    } else {
        k * x.ln()
    }
}

/// Neumaier-compensated sum in iteration order.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0f64;
    let mut c = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            c += (sum - t) + v;
        } else {
            c += (v - t) + sum;
        }
        sum = t;
    }
    sum + c
}

/// Pairwise sum with a compensated base case. The split points depend only
/// on the slice length, so the result is reproducible bit for bit.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const BASE: usize = 256;
    if values.len() <= BASE {
        compensated_sum(values.iter().copied())
    } else {
        let mid = values.len() / 2;
        pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
    }
}
