//! Coherent-state amplitude vectors `<basis|z>` for the Glauber, SU(2),
//! U(3) and Dicke product families.
//!
//! Every combinatorial prefactor goes through log-Gamma and every power
//! through a logarithm, so amplitudes stay finite and normalized up to
//! `N ~ 100` where raw binomials overflow.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::hamiltonians::{BasisDescriptor, BasisLabel, TwoJ};
use crate::special::{ln_factorial, ln_multinomial3};
use crate::{Error, Result};

/// A point in one of the coherent-state phase spaces.
///
/// Sphere points are kept as angles so the south pole `theta = pi`
/// (stereographic `zeta = inf`) is representable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "geometry", rename_all = "snake_case")]
pub enum PhasePoint {
    Plane { alpha: Complex64 },
    /// `zeta = tan(theta/2) e^{-i phi}`.
    Sphere { theta: f64, phi: f64 },
    CP2 { zeta1: Complex64, zeta2: Complex64 },
    DickeProduct { alpha: Complex64, theta: f64, phi: f64 },
}

impl PhasePoint {
    /// Stereographic coordinate of a sphere point; `None` at the south pole
    /// and for non-sphere points.
    pub fn zeta(&self) -> Option<Complex64> {
        match *self {
            PhasePoint::Sphere { theta, phi } | PhasePoint::DickeProduct { theta, phi, .. } => {
                let t = (theta / 2.0).tan();
                t.is_finite().then(|| Complex64::from_polar(t, -phi))
            }
            _ => None,
        }
    }
}

/// Coherent-state amplitudes aligned to `basis`.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeVector {
    pub values: Vec<Complex64>,
    pub basis: BasisDescriptor,
    pub point: PhasePoint,
    /// Prefactors were accumulated as logarithms.
    pub log_stable: bool,
}

impl AmplitudeVector {
    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &AmplitudeVector) -> Result<Complex64> {
        if self.basis != other.basis {
            return Err(Error::BasisMismatch(format!("{:?} vs {:?}", self.basis, other.basis)));
        }
        Ok(self.values.iter().zip(&other.values).map(|(a, b)| a.conj() * b).sum())
    }
}

/// `e^{-|a|^2/2} a^n / sqrt(n!)` for `n = 0..=cutoff`.
pub fn glauber_amplitudes(alpha: Complex64, cutoff: usize) -> AmplitudeVector {
    AmplitudeVector {
        values: glauber_values(alpha, cutoff),
        basis: BasisDescriptor::Fock1D { cutoff },
        point: PhasePoint::Plane { alpha },
        log_stable: true,
    }
}

pub(crate) fn glauber_values(alpha: Complex64, cutoff: usize) -> Vec<Complex64> {
    let mut values = vec![Complex64::new(0.0, 0.0); cutoff + 1];
    GlauberKernel::new(cutoff).fill(alpha, &mut values);
    values
}

/// Glauber amplitudes with a cached `ln(n!)/2` table.
#[derive(Debug, Clone)]
pub(crate) struct GlauberKernel {
    half_ln_fact: Vec<f64>,
}

impl GlauberKernel {
    pub fn new(cutoff: usize) -> Self {
        GlauberKernel {
            half_ln_fact: (0..=cutoff as u64).map(|n| 0.5 * ln_factorial(n)).collect(),
        }
    }

    pub fn fill(&self, alpha: Complex64, out: &mut [Complex64]) {
        let r2 = alpha.norm_sqr();
        if r2 == 0.0 {
            out.fill(Complex64::new(0.0, 0.0));
            out[0] = Complex64::new(1.0, 0.0);
            return;
        }
        let ln_r = 0.5 * r2.ln();
        let step = Complex64::from_polar(1.0, alpha.arg());
        let mut phase = Complex64::new(1.0, 0.0);
        for (n, (v, h)) in out.iter_mut().zip(&self.half_ln_fact).enumerate() {
            let ln_mod = -0.5 * r2 + n as f64 * ln_r - h;
            *v = phase * ln_mod.exp();
            phase *= step;
        }
    }
}

/// Spin-`j` coherent state on the `|j, m>` basis (index `i = j + m`):
/// `sqrt(C(2j, i)) cos(theta/2)^(2j-i) sin(theta/2)^i e^{-i i phi}`.
///
/// `theta = 0` is `|j, -j>`.
pub fn su2_amplitudes(theta: f64, phi: f64, two_j: TwoJ) -> Result<AmplitudeVector> {
    if two_j.0 == 0 {
        return Err(Error::InvalidParams("su2_amplitudes needs 2j >= 1".into()));
    }
    Ok(AmplitudeVector {
        values: su2_values(theta, phi, two_j.0),
        basis: BasisDescriptor::Spin { two_j },
        point: PhasePoint::Sphere { theta, phi },
        log_stable: true,
    })
}

pub(crate) fn su2_values(theta: f64, phi: f64, two_j: u32) -> Vec<Complex64> {
    let mut values = vec![Complex64::new(0.0, 0.0); two_j as usize + 1];
    Su2Kernel::new(two_j).fill(theta, phi, &mut values);
    values
}

/// SU(2) amplitudes with cached `ln C(2j, i)/2`.
#[derive(Debug, Clone)]
pub(crate) struct Su2Kernel {
    two_j: u32,
    half_ln_binom: Vec<f64>,
}

impl Su2Kernel {
    pub fn new(two_j: u32) -> Self {
        let f = ln_factorial(two_j as u64);
        Su2Kernel {
            two_j,
            half_ln_binom: (0..=two_j as u64)
                .map(|i| 0.5 * (f - ln_factorial(i) - ln_factorial(two_j as u64 - i)))
                .collect(),
        }
    }

    pub fn fill(&self, theta: f64, phi: f64, out: &mut [Complex64]) {
        let two_j = self.two_j;
        let (s, c) = (theta / 2.0).sin_cos();
        let (ln_c, ln_s) = (c.abs().ln(), s.abs().ln());
        let step = Complex64::from_polar(1.0, -phi);
        let mut phase = Complex64::new(1.0, 0.0);
        for (i, v) in out.iter_mut().enumerate().take(two_j as usize + 1) {
            let up = two_j - i as u32;
            let ln_mod = self.half_ln_binom[i] + pow_log(up as f64, ln_c) + pow_log(i as f64, ln_s);
            let mut sign = 1.0;
            if c < 0.0 && up % 2 == 1 {
                sign = -sign;
            }
            if s < 0.0 && i % 2 == 1 {
                sign = -sign;
            }
            *v = phase * (sign * ln_mod.exp());
            phase *= step;
        }
    }
}

/// `k ln x` with `0 * ln 0 = 0`.
#[inline]
fn pow_log(k: f64, ln_x: f64) -> f64 {
    if k == 0.0 {
        0.0
    } else {
        k * ln_x
    }
}

/// U(3) coherent state
/// `[N!/((N-n)!(n-m)!m!)]^(1/2) zeta1^(n-m) zeta2^m / (1+|zeta1|^2+|zeta2|^2)^(N/2)`
/// on the full symmetric basis, or on the fixed-`l` block (`l = n - 2m`)
/// when `l_filter` is set.
pub fn u3_amplitudes(zeta1: Complex64, zeta2: Complex64, n: u32, l_filter: Option<i32>) -> Result<AmplitudeVector> {
    let denom = 1.0 + zeta1.norm_sqr() + zeta2.norm_sqr();
    let (w1, w2) = (zeta1.norm_sqr() / denom, zeta2.norm_sqr() / denom);
    let mut out = u3_amplitudes_simplex(w1, w2, zeta1.arg(), zeta2.arg(), n, l_filter)?;
    out.point = PhasePoint::CP2 { zeta1, zeta2 };
    Ok(out)
}

/// Same state in simplex coordinates `w_k = |zeta_k|^2 / (1 + |zeta1|^2 +
/// |zeta2|^2)` and phases `phi_k = arg zeta_k`. Stays finite on the whole
/// closed simplex.
pub fn u3_amplitudes_simplex(
    w1: f64,
    w2: f64,
    phi1: f64,
    phi2: f64,
    n: u32,
    l_filter: Option<i32>,
) -> Result<AmplitudeVector> {
    if n == 0 || n > U3_MAX_N {
        return Err(Error::InvalidParams(format!("u3_amplitudes needs 1 <= N <= {U3_MAX_N} (got {n})")));
    }
    let basis = match l_filter {
        None => BasisDescriptor::U3Full { n },
        Some(l) => {
            let basis = BasisDescriptor::U3Block { n, l };
            if basis.dim() == 0 || (n as i32 - l).rem_euclid(2) != 0 {
                return Err(Error::InvalidParams(format!("no U(3) block with N={n}, l={l}")));
            }
            basis
        }
    };
    let mut values = vec![Complex64::new(0.0, 0.0); basis.dim()];
    U3Kernel::new(&basis).fill(w1, w2, phi1, phi2, &mut values);
    let w0 = (1.0 - w1 - w2).max(0.0);
    let zeta = |w: f64, phi: f64| Complex64::from_polar((w / w0).sqrt(), phi);
    Ok(AmplitudeVector {
        values,
        basis,
        point: PhasePoint::CP2 {
            zeta1: zeta(w1, phi1),
            zeta2: zeta(w2, phi2),
        },
        log_stable: true,
    })
}

/// U(3) amplitudes over a fixed basis with cached multinomials.
#[derive(Debug, Clone)]
pub(crate) struct U3Kernel {
    n: u32,
    /// `(N - n, n - m, m, sqrt(multinomial))` per basis index.
    entries: Vec<(u32, u32, u32, f64)>,
}

/// Largest `N` the U(3) kernel supports; `sqrt(N!/(a! b! c!))` stays
/// below `1e150` well past this.
pub const U3_MAX_N: u32 = 200;
const U3_MAX_POW: usize = U3_MAX_N as usize + 1;

impl U3Kernel {
    /// `basis` must be `U3Full` or `U3Block`.
    pub fn new(basis: &BasisDescriptor) -> Self {
        let n = match *basis {
            BasisDescriptor::U3Full { n } | BasisDescriptor::U3Block { n, .. } => n,
            _ => panic!("U3Kernel needs a U(3) basis"),
        };
        let entries = (0..basis.dim())
            .map(|k| {
                let BasisLabel::U3 { n: nn, m } = basis.label(k) else {
                    unreachable!("U(3) basis labels")
                };
                let (a, b, c) = (n - nn, nn - m, m);
                (a, b, c, (0.5 * ln_multinomial3(a as u64, b as u64, c as u64)).exp())
            })
            .collect();
        U3Kernel { n, entries }
    }

    pub fn fill(&self, w1: f64, w2: f64, phi1: f64, phi2: f64, out: &mut [Complex64]) {
        // Powers by repeated multiplication; anything that underflows is
        // below 1e-280 even after the multinomial factor.
        let w0 = (1.0 - w1 - w2).max(0.0);
        let mut p0 = [0.0; U3_MAX_POW];
        let mut p1 = [0.0; U3_MAX_POW];
        let mut p2 = [0.0; U3_MAX_POW];
        let mut e1 = [Complex64::new(0.0, 0.0); U3_MAX_POW];
        let mut e2 = [Complex64::new(0.0, 0.0); U3_MAX_POW];
        let (r0, r1, r2) = (w0.sqrt(), w1.sqrt(), w2.sqrt());
        let (s1, s2) = (Complex64::from_polar(1.0, phi1), Complex64::from_polar(1.0, phi2));
        let top = self.n as usize;
        p0[0] = 1.0;
        p1[0] = 1.0;
        p2[0] = 1.0;
        e1[0] = Complex64::new(1.0, 0.0);
        e2[0] = Complex64::new(1.0, 0.0);
        for k in 1..=top {
            p0[k] = p0[k - 1] * r0;
            p1[k] = p1[k - 1] * r1;
            p2[k] = p2[k - 1] * r2;
            e1[k] = e1[k - 1] * s1;
            e2[k] = e2[k - 1] * s2;
        }
        for (v, &(a, b, c, coef)) in out.iter_mut().zip(&self.entries) {
            let (a, b, c) = (a as usize, b as usize, c as usize);
            *v = e1[b] * e2[c] * (coef * p0[a] * p1[b] * p2[c]);
        }
    }
}

/// Field-times-spin product state aligned to `target`, a
/// [`BasisDescriptor::DickeProduct`] with matching dimensions.
pub fn product_amplitudes(
    a: &AmplitudeVector,
    b: &AmplitudeVector,
    target: &BasisDescriptor,
) -> Result<AmplitudeVector> {
    let (BasisDescriptor::Fock1D { cutoff }, BasisDescriptor::Spin { two_j }) = (a.basis, b.basis) else {
        return Err(Error::BasisMismatch("product_amplitudes needs Fock1D x Spin".into()));
    };
    let expected = BasisDescriptor::DickeProduct { n_max: cutoff, two_j };
    if *target != expected {
        return Err(Error::BasisMismatch(format!("{target:?} vs {expected:?}")));
    }
    let (PhasePoint::Plane { alpha }, PhasePoint::Sphere { theta, phi }) = (a.point, b.point) else {
        return Err(Error::BasisMismatch("product_amplitudes needs plane and sphere points".into()));
    };
    let values = a.values.iter().flat_map(|fa| b.values.iter().map(move |gb| fa * gb)).collect();
    Ok(AmplitudeVector {
        values,
        basis: expected,
        point: PhasePoint::DickeProduct { alpha, theta, phi },
        log_stable: a.log_stable && b.log_stable,
    })
}
