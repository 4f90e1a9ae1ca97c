//! One-dimensional Gauss rules used to assemble the phase-space grids.

use crate::special::ln_factorial;
use statrs::function::gamma::ln_gamma;

/// Nodes and weights of a Gauss rule.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Gauss-Legendre rule on `[-1, 1]`, exact for polynomials of degree
/// `2n - 1`.
pub fn gauss_legendre(n: usize) -> GaussRule {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                let (_, d) = legendre_with_derivative(n, x);
                dp = d;
                break;
            }
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
    GaussRule { nodes, weights }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Generalized Gauss-Laguerre rule for `int_0^inf s^alpha e^{-s} f(s) ds`.
///
/// Weights for large `n` underflow `f64`, so they are returned as
/// logarithms.
#[derive(Debug, Clone, PartialEq)]
pub struct LaguerreRule {
    pub nodes: Vec<f64>,
    pub ln_weights: Vec<f64>,
}

pub fn gauss_laguerre(n: usize, alpha: f64) -> LaguerreRule {
    assert!(n >= 1, "Gauss-Laguerre rule needs at least one node");
    assert!(alpha > -1.0);
    // Jacobi matrix eigenvalues by implicit QL, polished by Newton.
    let mut roots: Vec<f64> = (0..n).map(|k| 2.0 * k as f64 + alpha + 1.0).collect();
    let mut off: Vec<f64> = (1..=n).map(|k| if k < n { (k as f64 * (k as f64 + alpha)).sqrt() } else { 0.0 }).collect();
    tridiagonal_eigenvalues(&mut roots, &mut off);
    roots.sort_by(f64::total_cmp);

    let mut nodes = Vec::with_capacity(n);
    let mut ln_weights = Vec::with_capacity(n);
    let ln_norm = ln_gamma(n as f64 + alpha + 1.0) - ln_factorial(n as u64);
    for &guess in &roots {
        let mut x = guess;
        for _ in 0..20 {
            let (ln, lnm1, _) = scaled_laguerre(n, alpha, x);
            let deriv = (n as f64 * ln - (n as f64 + alpha) * lnm1) / x;
            let dx = ln / deriv;
            if !dx.is_finite() || (x - dx) <= 0.0 {
                break;
            }
            x -= dx;
            if dx.abs() <= 4.0 * f64::EPSILON * x {
                break;
            }
        }
        let (_, lnm1, ln_scale) = scaled_laguerre(n, alpha, x);
        // At a root L_n' = -(n + alpha) L_{n-1} / x.
        let ln_abs_deriv = (n as f64 + alpha).ln() + lnm1.abs().ln() + ln_scale - x.ln();
        ln_weights.push(ln_norm - x.ln() - 2.0 * ln_abs_deriv);
        nodes.push(x);
    }
    LaguerreRule { nodes, ln_weights }
}

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `d` and
/// off-diagonal `e` (`e[i]` couples `i` and `i+1`, last entry unused), by
/// implicit QL with Wilkinson shifts. Overwrites `d` with the eigenvalues.
fn tridiagonal_eigenvalues(d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter <= 60, "tridiagonal QL did not converge");
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

/// Returns `(L_n, L_{n-1}, ln_scale)` with the true values equal to the
/// first two times `exp(ln_scale)`.
fn scaled_laguerre(n: usize, alpha: f64, x: f64) -> (f64, f64, f64) {
    const BIG: f64 = 1e150;
    let mut prev = 1.0;
    let mut cur = 1.0 + alpha - x;
    let mut ln_scale = 0.0;
    if n == 0 {
        return (prev, 0.0, 0.0);
    }
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
        if cur.abs() > BIG {
            cur /= BIG;
            prev /= BIG;
            ln_scale += BIG.ln();
        }
    }
    (cur, prev, ln_scale)
}
