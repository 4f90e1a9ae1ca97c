//! Classical energy surfaces (coherent-state expectation values), their
//! analytic equilibria and critical points, and a multistart minimizer that
//! checks them.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::hamiltonians::{ModelKind, ModelParams};
use crate::sweep::classify::Order;
use crate::{Error, Result};

/// `V(x) = x^4/4 + u x^2/2 + v x`.
pub fn cusp_potential(x: f64, u: f64, v: f64) -> f64 {
    0.25 * x.powi(4) + 0.5 * u * x * x + v * x
}

/// Real roots of `x^3 + u x + v = 0`, ascending, without repeats.
pub fn cusp_stationary(u: f64, v: f64) -> Vec<f64> {
    let (p, q) = (u, v);
    let disc = -(4.0 * p * p * p + 27.0 * q * q);
    let mut roots = if p == 0.0 && q == 0.0 {
        vec![0.0]
    } else if disc > 0.0 {
        let r = 2.0 * (-p / 3.0).sqrt();
        let arg = ((3.0 * q / (2.0 * p)) * (-3.0 / p).sqrt()).clamp(-1.0, 1.0);
        let phi = arg.acos() / 3.0;
        (0..3)
            .map(|k| r * (phi - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos())
            .collect()
    } else if disc == 0.0 {
        vec![3.0 * q / p, -1.5 * q / p]
    } else {
        let s = (q * q / 4.0 + p * p * p / 27.0).sqrt();
        vec![(-q / 2.0 + s).cbrt() + (-q / 2.0 - s).cbrt()]
    };
    // Newton polish on the cubic.
    for x in roots.iter_mut() {
        for _ in 0..3 {
            let d = 3.0 * *x * *x + p;
            if d.abs() < 1e-300 {
                break;
            }
            let step = (*x * *x * *x + p * *x + q) / d;
            if !step.is_finite() {
                break;
            }
            *x -= step;
        }
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    roots
}

/// Dicke surface `<alpha, zeta|H|alpha, zeta>` with
/// `zeta = tan(theta/2) e^{-i phi}`.
pub fn dicke_surface(alpha: Complex64, theta: f64, phi: f64, params: &ModelParams) -> Result<f64> {
    let ModelParams::Dicke {
        omega0,
        omega,
        lambda,
        two_j,
    } = *params
    else {
        return Err(Error::InvalidParams("dicke_surface needs dicke params".into()));
    };
    let j = two_j.j();
    // (|z|^2-1)/(|z|^2+1) = -cos(theta), Re z/(1+|z|^2) = sin(theta) cos(phi)/2
    Ok(omega * alpha.norm_sqr() - j * omega0 * theta.cos()
        + lambda * (2.0 * j).sqrt() * 2.0 * alpha.re * theta.sin() * phi.cos())
}

/// Same surface in terms of the stereographic coordinate `zeta`.
pub fn dicke_surface_zeta(alpha: Complex64, zeta: Complex64, params: &ModelParams) -> Result<f64> {
    let ModelParams::Dicke {
        omega0,
        omega,
        lambda,
        two_j,
    } = *params
    else {
        return Err(Error::InvalidParams("dicke_surface needs dicke params".into()));
    };
    let j = two_j.j();
    let z2 = zeta.norm_sqr();
    Ok(omega * alpha.norm_sqr()
        + j * omega0 * (z2 - 1.0) / (z2 + 1.0)
        + lambda * (2.0 * j).sqrt() * 4.0 * alpha.re * zeta.re / (z2 + 1.0))
}

/// `lambda_c = sqrt(omega omega0) / 2`.
pub fn dicke_lambda_c(omega0: f64, omega: f64) -> f64 {
    0.5 * (omega * omega0).sqrt()
}

/// Minimum of the Dicke surface on the `alpha < 0`, `zeta > 0` branch
/// (the mirror `(-alpha, -zeta)` is degenerate). Zero in the normal phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DickeEquilibrium {
    pub alpha_e: f64,
    pub zeta_e: f64,
}

pub fn dicke_equilibrium(params: &ModelParams) -> Result<DickeEquilibrium> {
    let ModelParams::Dicke {
        omega0,
        omega,
        lambda,
        two_j,
    } = *params
    else {
        return Err(Error::InvalidParams("dicke_equilibrium needs dicke params".into()));
    };
    let lc = dicke_lambda_c(omega0, omega);
    let lam = lambda.abs();
    if lam < lc {
        return Ok(DickeEquilibrium {
            alpha_e: 0.0,
            zeta_e: 0.0,
        });
    }
    let mu2 = (lc / lam).powi(4);
    let zeta_e = ((lam * lam - lc * lc) / (lam * lam + lc * lc)).sqrt();
    let alpha_e = -(two_j.0 as f64).sqrt() * (lam / omega) * (1.0 - mu2).sqrt();
    // Negative lambda flips the sign of the coupling, hence of zeta.
    let zeta_e = if lambda < 0.0 { -zeta_e } else { zeta_e };
    Ok(DickeEquilibrium { alpha_e, zeta_e })
}

/// Scaled LMG surface `-cos(theta) + sin^2(theta)(gx cos^2 phi + gy sin^2 phi)/2`.
pub fn lmg_surface(theta: f64, phi: f64, gamma_x: f64, gamma_y: f64) -> f64 {
    let (s, c) = phi.sin_cos();
    -theta.cos() + 0.5 * theta.sin().powi(2) * (gamma_x * c * c + gamma_y * s * s)
}

/// IBM-LMG surface per boson in the thermodynamic limit.
pub fn ibm_surface(beta: f64, x: f64, y: f64) -> f64 {
    let b2 = beta * beta;
    b2 / (1.0 + b2).powi(2) * (5.0 * x - 4.0 + 4.0 * beta * y * (x - 1.0) + b2 * (x + y * y * (x - 1.0)))
}

/// Control value where the spherical and deformed minima coexist,
/// `(4 + y^2)/(5 + y^2)`.
pub fn ibm_xc(y: f64) -> f64 {
    (4.0 + y * y) / (5.0 + y * y)
}

/// 2D vibron surface per boson on the `zeta1 = r/sqrt2 = -zeta2` section.
pub fn vibron_surface(r: f64, xi: f64) -> f64 {
    let r2 = r * r;
    (1.0 - xi) * r2 / (1.0 + r2) + xi * ((1.0 - r2) / (1.0 + r2)).powi(2)
}

pub const VIBRON_XI_C: f64 = 0.2;

/// Equilibrium radius: 0 in the linear phase, `sqrt((5 xi - 1)/(3 xi + 1))`
/// in the bent phase.
pub fn vibron_re(xi: f64) -> f64 {
    if xi <= VIBRON_XI_C {
        0.0
    } else {
        ((5.0 * xi - 1.0) / (3.0 * xi + 1.0)).sqrt()
    }
}

/// Analytic critical point of a model along a one-parameter trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalInfo {
    pub model: ModelKind,
    pub control: String,
    pub critical_value: f64,
    pub order: Order,
}

/// Linear constraint `target = slope * control + intercept`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearLink {
    pub target: String,
    pub slope: f64,
    pub intercept: f64,
}

/// Critical point crossed by the trajectory `control in [start, stop]`
/// from `base`, if one is known in closed form.
pub fn critical_point(
    base: &ModelParams,
    control: &str,
    link: Option<&LinearLink>,
    start: f64,
    stop: f64,
) -> Option<CriticalInfo> {
    let (lo, hi) = (start.min(stop), start.max(stop));
    let inside = |c: f64| c > lo && c < hi;
    let info = |value: f64, order: Order| CriticalInfo {
        model: base.kind(),
        control: control.to_string(),
        critical_value: value,
        order,
    };
    match (*base, control) {
        (ModelParams::Cusp { u, .. }, "v") if u < 0.0 && inside(0.0) => Some(info(0.0, Order::First)),
        (ModelParams::Cusp { v, .. }, "u") if v == 0.0 && inside(0.0) => Some(info(0.0, Order::Second)),
        (ModelParams::Dicke { omega0, omega, .. }, "lambda") => {
            let lc = dicke_lambda_c(omega0, omega);
            inside(lc).then(|| info(lc, Order::Second))
        }
        (ModelParams::IbmLmg { y, .. }, "x") => {
            let xc = ibm_xc(y);
            let order = if y == 0.0 { Order::Second } else { Order::First };
            inside(xc).then(|| info(xc, order))
        }
        (ModelParams::Vibron2D { .. }, "xi") => inside(VIBRON_XI_C).then(|| info(VIBRON_XI_C, Order::Second)),
        (ModelParams::Lmg { gamma_x, gamma_y, .. }, "gamma_x" | "gamma_y") => {
            // gamma pair along the trajectory as a function of the control value.
            let pair = |c: f64| -> (f64, f64) {
                let other = match link {
                    Some(l) => l.slope * c + l.intercept,
                    None if control == "gamma_x" => gamma_y,
                    None => gamma_x,
                };
                if control == "gamma_x" {
                    (c, other)
                } else {
                    (other, c)
                }
            };
            lmg_boundary(pair, lo, hi).map(|(c, order)| info(c, order))
        }
        _ => None,
    }
}

/// Locates the LMG phase boundary along a straight trajectory by bisection
/// on the phase label.
fn lmg_boundary(pair: impl Fn(f64) -> (f64, f64), lo: f64, hi: f64) -> Option<(f64, Order)> {
    // 1: gx < -1 and gx < gy; 2: gy < -1 and gy < gx; 3: both > -1.
    let phase = |c: f64| {
        let (gx, gy) = pair(c);
        if gx < -1.0 && gx < gy {
            1
        } else if gy < -1.0 && gy < gx {
            2
        } else {
            3
        }
    };
    let (pa, pb) = (phase(lo), phase(hi));
    if pa == pb {
        return None;
    }
    let (mut a, mut b) = (lo, hi);
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if phase(mid) == pa {
            a = mid;
        } else {
            b = mid;
        }
    }
    let c = 0.5 * (a + b);
    let order = if pa == 3 || pb == 3 { Order::Second } else { Order::First };
    Some((c, order))
}

/// Surface selected for numerical minimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Surface {
    /// Coordinates `[x]`.
    Cusp { u: f64, v: f64 },
    /// Coordinates `[Re alpha, Im alpha, Re zeta, Im zeta]`.
    Dicke(ModelParams),
    /// Coordinates `[theta, phi]`.
    Lmg { gamma_x: f64, gamma_y: f64 },
    /// Coordinates `[beta]`.
    Ibm { x: f64, y: f64 },
    /// Coordinates `[r]`, `r >= 0`.
    Vibron { xi: f64 },
}

impl Surface {
    pub fn from_params(params: &ModelParams) -> Self {
        match *params {
            ModelParams::Cusp { u, v, .. } => Surface::Cusp { u, v },
            ModelParams::Dicke { .. } => Surface::Dicke(*params),
            ModelParams::Lmg { gamma_x, gamma_y, .. } => Surface::Lmg { gamma_x, gamma_y },
            ModelParams::IbmLmg { x, y, .. } => Surface::Ibm { x, y },
            ModelParams::Vibron2D { xi, .. } => Surface::Vibron { xi },
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Surface::Dicke(_) => 4,
            Surface::Lmg { .. } => 2,
            _ => 1,
        }
    }

    pub fn value(&self, p: &[f64]) -> f64 {
        match *self {
            Surface::Cusp { u, v } => cusp_potential(p[0], u, v),
            Surface::Dicke(params) => {
                dicke_surface_zeta(Complex64::new(p[0], p[1]), Complex64::new(p[2], p[3]), &params)
                    .expect("dicke params")
            }
            Surface::Lmg { gamma_x, gamma_y } => lmg_surface(p[0], p[1], gamma_x, gamma_y),
            Surface::Ibm { x, y } => ibm_surface(p[0], x, y),
            Surface::Vibron { xi } => vibron_surface(p[0], xi),
        }
    }

    /// Coarse scan box per coordinate.
    fn scan_box(&self) -> Vec<(f64, f64)> {
        match *self {
            Surface::Cusp { u, v } => {
                let r = 2.0 * (1.0 + u.abs().sqrt() + v.abs().cbrt());
                vec![(-r, r)]
            }
            Surface::Dicke(ModelParams::Dicke {
                omega,
                lambda,
                two_j,
                ..
            }) => {
                let a = (two_j.0 as f64).sqrt() * lambda.abs() / omega + 1.0;
                vec![(-a, a), (-1.0, 1.0), (-1.5, 1.5), (-1.5, 1.5)]
            }
            Surface::Dicke(_) => unreachable!("dicke surface built from dicke params"),
            Surface::Lmg { .. } => vec![(0.0, std::f64::consts::PI), (0.0, 2.0 * std::f64::consts::PI)],
            Surface::Ibm { .. } => vec![(-6.0, 6.0)],
            Surface::Vibron { .. } => vec![(0.0, 4.0)],
        }
    }

    /// Maps a trial point back into the domain.
    fn clamp(&self, p: &mut [f64]) {
        match self {
            Surface::Lmg { .. } => p[0] = p[0].clamp(0.0, std::f64::consts::PI),
            Surface::Vibron { .. } => p[0] = p[0].max(0.0),
            _ => {}
        }
    }
}

/// Result of [`minimize_surface`].
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceMinimum {
    pub point: Vec<f64>,
    pub value: f64,
}

const SCAN_POINTS_PER_DIM: [usize; 4] = [4001, 121, 25, 25];

/// Multistart minimization: a coarse grid scan seeds `multistart` compass
/// searches (step down to `1e-10`), each polished by finite-difference
/// Newton steps. Discrete local minima of the scan are seeded first, lowest
/// value first. Ties within `1e-12` go to the lexicographically smallest
/// point.
pub fn minimize_surface(surface: &Surface, multistart: usize) -> Result<SurfaceMinimum> {
    if multistart < 4 {
        return Err(Error::InvalidParams(format!("multistart must be >= 4 (got {multistart})")));
    }
    let dim = surface.dim();
    let bounds = surface.scan_box();
    let per_dim = SCAN_POINTS_PER_DIM[dim - 1];
    let axes: Vec<Vec<f64>> = bounds
        .iter()
        .map(|&(a, b)| (0..per_dim).map(|i| a + (b - a) * i as f64 / (per_dim - 1) as f64).collect())
        .collect();

    let total = per_dim.pow(dim as u32);
    let index_of = |flat: usize| -> Vec<usize> {
        let mut f = flat;
        (0..dim)
            .map(|_| {
                let i = f % per_dim;
                f /= per_dim;
                i
            })
            .collect()
    };
    let values: Vec<f64> = (0..total)
        .map(|flat| {
            let p: Vec<f64> = index_of(flat).iter().enumerate().map(|(d, &i)| axes[d][i]).collect();
            surface.value(&p)
        })
        .collect();
    let is_local_min = |flat: usize| {
        let idx = index_of(flat);
        let mut stride = 1;
        for &i in &idx {
            if i > 0 && values[flat - stride] < values[flat] {
                return false;
            }
            if i + 1 < per_dim && values[flat + stride] < values[flat] {
                return false;
            }
            stride *= per_dim;
        }
        true
    };
    let point = |flat: usize| -> Vec<f64> { index_of(flat).iter().enumerate().map(|(d, &i)| axes[d][i]).collect() };
    let local: Vec<bool> = (0..total).map(is_local_min).collect();
    let mut order: Vec<usize> = (0..total).collect();
    // Axes ascend, so comparing indices with the first coordinate most
    // significant is the lexicographic order of points.
    let lex_key = |flat: usize| index_of(flat).into_iter().fold(0usize, |acc, i| acc * per_dim + i);
    let keys: Vec<usize> = (0..total).map(lex_key).collect();
    order.sort_by(|&a, &b| {
        local[b]
            .cmp(&local[a])
            .then(values[a].total_cmp(&values[b]))
            .then(keys[a].cmp(&keys[b]))
    });

    // Starts: local minima, then the lowest scan points not adjacent to an
    // earlier start.
    let spacing: Vec<f64> = bounds.iter().map(|&(a, b)| (b - a) / (per_dim - 1) as f64).collect();
    let mut starts: Vec<Vec<f64>> = Vec::new();
    for flat in order {
        if starts.len() >= multistart {
            break;
        }
        let p = point(flat);
        let near = starts
            .iter()
            .any(|s| s.iter().zip(&p).zip(&spacing).all(|((a, b), h)| (a - b).abs() <= 1.5 * h));
        if !near {
            starts.push(p);
        }
    }

    let mut best: Option<SurfaceMinimum> = None;
    for s in starts {
        let mut p = compass_search(surface, s, &spacing);
        newton_polish(surface, &mut p);
        let value = surface.value(&p);
        let better = match &best {
            None => true,
            Some(b) => {
                value < b.value - 1e-12 || ((value - b.value).abs() <= 1e-12 && lex_cmp(&p, &b.point).is_lt())
            }
        };
        if better {
            best = Some(SurfaceMinimum { point: p, value });
        }
    }
    Ok(best.expect("at least one start"))
}

fn lex_cmp(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            std::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    std::cmp::Ordering::Equal
}

const COMPASS_MAX_ITER: usize = 20_000;

fn compass_search(surface: &Surface, mut p: Vec<f64>, spacing: &[f64]) -> Vec<f64> {
    let mut step: Vec<f64> = spacing.to_vec();
    let mut f = surface.value(&p);
    // The cap stops walks along surfaces that keep descending outwards.
    for _ in 0..COMPASS_MAX_ITER {
        if step.iter().all(|s| *s <= 1e-10) {
            break;
        }
        let mut moved = false;
        for d in 0..p.len() {
            for sign in [1.0, -1.0] {
                let mut q = p.clone();
                q[d] += sign * step[d];
                surface.clamp(&mut q);
                let fq = surface.value(&q);
                if fq < f {
                    p = q;
                    f = fq;
                    moved = true;
                    break;
                }
            }
        }
        if !moved {
            step.iter_mut().for_each(|s| *s *= 0.5);
        }
    }
    p
}

fn newton_polish(surface: &Surface, p: &mut Vec<f64>) {
    let n = p.len();
    let h = 1e-4;
    for _ in 0..6 {
        let f0 = surface.value(p);
        let eval = |q: &[f64]| {
            let mut q = q.to_vec();
            surface.clamp(&mut q);
            surface.value(&q)
        };
        let mut grad = DVector::zeros(n);
        let mut hess = DMatrix::zeros(n, n);
        for a in 0..n {
            let mut pp = p.clone();
            let mut pm = p.clone();
            pp[a] += h;
            pm[a] -= h;
            let mut clipped = pm.clone();
            surface.clamp(&mut clipped);
            if clipped != pm {
                return; // on a domain boundary
            }
            grad[a] = (eval(&pp) - eval(&pm)) / (2.0 * h);
            hess[(a, a)] = (eval(&pp) - 2.0 * f0 + eval(&pm)) / (h * h);
            for b in 0..a {
                let mut q = p.clone();
                q[a] += h;
                q[b] += h;
                let fpp = eval(&q);
                q[b] -= 2.0 * h;
                let fpm = eval(&q);
                q[a] -= 2.0 * h;
                let fmm = eval(&q);
                q[b] += 2.0 * h;
                let fmp = eval(&q);
                let v = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
                hess[(a, b)] = v;
                hess[(b, a)] = v;
            }
        }
        let Some(chol) = hess.clone().cholesky() else {
            return;
        };
        let delta = chol.solve(&(-grad));
        if delta.amax() > 1e-3 {
            return;
        }
        let mut q: Vec<f64> = p.iter().zip(delta.iter()).map(|(a, d)| a + d).collect();
        surface.clamp(&mut q);
        if surface.value(&q) <= f0 {
            *p = q;
        } else {
            return;
        }
        if delta.amax() < 1e-14 {
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonians::TwoJ;
    use approx::assert_relative_eq;

    #[test]
    fn cusp_roots_and_potential() {
        let r = cusp_stationary(-1.0, 0.0);
        assert_eq!(r.len(), 3);
        for (a, b) in r.iter().zip([-1.0, 0.0, 1.0]) {
            assert!((a - b).abs() < 1e-14);
        }
        assert_relative_eq!(cusp_potential(1.0, -1.0, 0.0), -0.25);
        assert_relative_eq!(cusp_potential(-1.0, -1.0, 0.0), -0.25);
        for &(x, u, v) in &[(0.3, -1.0, 0.2), (1.7, 0.5, -0.4), (-2.0, -2.0, 1.0)] {
            assert_eq!(cusp_potential(x, u, v), cusp_potential(-x, u, -v));
        }
        // single real root branch
        let r = cusp_stationary(1.0, 0.5);
        assert_eq!(r.len(), 1);
        assert!((r[0].powi(3) + r[0] + 0.5).abs() < 1e-14);
        // double root
        let r = cusp_stationary(-3.0, 2.0);
        assert_eq!(r.len(), 2);
    }

    #[test]
    fn cusp_coexistence_flips_with_v() {
        for v in [0.05f64, -0.05] {
            let r = cusp_stationary(-1.0, v);
            let (left, right) = (r[0], r[2]);
            let deeper_left = cusp_potential(left, -1.0, v) < cusp_potential(right, -1.0, v);
            assert_eq!(deeper_left, v > 0.0);
        }
    }

    fn dicke(lambda: f64, two_j: u32) -> ModelParams {
        ModelParams::Dicke {
            omega0: 1.0,
            omega: 1.0,
            lambda,
            two_j: TwoJ(two_j),
        }
    }

    #[test]
    fn dicke_equilibria() {
        let eq = dicke_equilibrium(&dicke(0.3, 10)).unwrap();
        assert_eq!(eq, DickeEquilibrium { alpha_e: 0.0, zeta_e: 0.0 });
        assert_relative_eq!(
            dicke_surface(Complex64::new(0.0, 0.0), 0.0, 0.0, &dicke(0.3, 10)).unwrap(),
            -5.0
        );
        let eq = dicke_equilibrium(&dicke(1.0, 10)).unwrap();
        assert!((eq.zeta_e - 0.6f64.sqrt()).abs() < 1e-15);
        assert!((eq.alpha_e + 3.061_862_178_478_973).abs() < 1e-12);
    }

    #[test]
    fn dicke_forms_agree() {
        let p = dicke(0.8, 7);
        for &(ar, ai, th, ph) in &[(0.3, -0.2, 1.1, 0.4), (-2.0, 0.5, 2.9, 3.3)] {
            let zeta = Complex64::from_polar((th / 2.0f64).tan(), -ph);
            let a = dicke_surface(Complex64::new(ar, ai), th, ph, &p).unwrap();
            let b = dicke_surface_zeta(Complex64::new(ar, ai), zeta, &p).unwrap();
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn lmg_surface_values() {
        assert_eq!(lmg_surface(0.0, 1.3, -3.0, 5.0), -1.0);
        for &(t, p, gx, gy) in &[(0.7, 0.2, -3.0, 5.0), (2.1, 4.0, 1.0, -2.0)] {
            let a = lmg_surface(t, p, gx, gy);
            let b = lmg_surface(t, std::f64::consts::FRAC_PI_2 - p, gy, gx);
            assert!((a - b).abs() < 1e-14);
        }
        let m = minimize_surface(&Surface::Lmg { gamma_x: 0.0, gamma_y: 0.0 }, 4).unwrap();
        assert!((m.value + 1.0).abs() < 1e-14);
        assert!(m.point[0].abs() < 1e-6);
    }

    #[test]
    fn ibm_critical_values() {
        assert_eq!(ibm_xc(0.0), 0.8);
        assert!((ibm_xc(std::f64::consts::FRAC_1_SQRT_2) - 9.0 / 11.0).abs() < 1e-15);
        assert_eq!(ibm_surface(0.0, 0.3, 2.0), 0.0);
    }

    #[test]
    fn vibron_values() {
        assert_eq!(vibron_surface(0.0, 0.37), 0.37);
        assert_eq!(vibron_re(0.2), 0.0);
        assert!((vibron_re(0.5) - 0.6f64.sqrt()).abs() < 1e-15);
        let m = minimize_surface(&Surface::Vibron { xi: 0.5 }, 4).unwrap();
        assert!((m.point[0] - 0.6f64.sqrt()).abs() < 1e-6);
    }

    #[test]
    fn minimizer_finds_dicke_equilibrium() {
        let p = dicke(1.0, 10);
        let eq = dicke_equilibrium(&p).unwrap();
        let m = minimize_surface(&Surface::Dicke(p), 8).unwrap();
        assert!((m.point[0] - eq.alpha_e).abs() < 1e-6, "{:?}", m.point);
        assert!(m.point[1].abs() < 1e-6);
        assert!((m.point[2] - eq.zeta_e).abs() < 1e-6);
        assert!(m.point[3].abs() < 1e-6);
    }

    #[test]
    fn cusp_tie_breaks_toward_smallest() {
        let m = minimize_surface(&Surface::Cusp { u: -1.0, v: 0.0 }, 4).unwrap();
        assert!((m.point[0] + 1.0).abs() < 1e-8);
        assert!((m.value + 0.25).abs() < 1e-14);
    }

    #[test]
    fn critical_points_along_trajectories() {
        let lmg = ModelParams::Lmg {
            omega: 0.5,
            gamma_x: 0.0,
            gamma_y: 0.0,
            two_j: TwoJ(20),
        };
        let first = LinearLink {
            target: "gamma_y".into(),
            slope: -1.0,
            intercept: -4.0,
        };
        let c = critical_point(&lmg, "gamma_x", Some(&first), -3.0, -1.0).unwrap();
        assert!((c.critical_value + 2.0).abs() < 1e-12);
        assert_eq!(c.order, Order::First);
        let second = LinearLink {
            target: "gamma_y".into(),
            slope: -1.0,
            intercept: 2.0,
        };
        let c = critical_point(&lmg, "gamma_x", Some(&second), -3.0, 1.0).unwrap();
        assert!((c.critical_value + 1.0).abs() < 1e-12);
        assert_eq!(c.order, Order::Second);

        let ibm = ModelParams::IbmLmg {
            x: 0.5,
            y: std::f64::consts::FRAC_1_SQRT_2,
            n: 40,
        };
        let c = critical_point(&ibm, "x", None, 0.6, 0.95).unwrap();
        assert_eq!(c.order, Order::First);
        assert!(critical_point(&ibm, "x", None, 0.9, 0.95).is_none());
    }

    #[test]
    fn rejects_small_multistart() {
        assert!(minimize_surface(&Surface::Vibron { xi: 0.5 }, 3).is_err());
    }
}
