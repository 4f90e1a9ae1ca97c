use super::{BasisDescriptor, HamiltonianMatrix, ModelParams, ScaleNote, SymBuilder};
use crate::surfaces::{cusp_potential, cusp_stationary};
use crate::{Error, Result};

/// Below this curvature the deepest well is treated as quartic.
const QUARTIC_CURVATURE: f64 = 0.1;

/// Frequency of the reference oscillator used as the cusp basis:
/// `sqrt(V'')` at the deepest minimum, or `K^(1/3)` when that curvature is
/// below 0.1.
pub fn cusp_basis_frequency(params: &ModelParams) -> Result<f64> {
    let ModelParams::Cusp { u, v, k } = *params else {
        return Err(Error::InvalidParams("cusp_basis_frequency needs cusp params".into()));
    };
    params.validate()?;
    let x_min = cusp_stationary(u, v)
        .into_iter()
        .min_by(|a, b| cusp_potential(*a, u, v).total_cmp(&cusp_potential(*b, u, v)))
        .expect("a real cubic has a real root");
    let curvature = 3.0 * x_min * x_min + u;
    if curvature < QUARTIC_CURVATURE {
        Ok(k.cbrt())
    } else {
        Ok(curvature.sqrt())
    }
}

/// Cusp Hamiltonian in the eigenbasis of an oscillator with frequency
/// `basis_freq`, unit mass and `hbar = K`:
/// `x = sqrt(K/2W)(a + a^+)`, `p = i sqrt(K W/2)(a^+ - a)`.
///
/// Every element comes from ladder algebra on the infinite basis, so the
/// truncated matrix is the exact projection (no truncation error inside the
/// `x^4` product).
pub fn build_cusp(params: &ModelParams, cutoff: usize, basis_freq: f64) -> Result<HamiltonianMatrix> {
    let ModelParams::Cusp { u, v, k } = *params else {
        return Err(Error::InvalidParams("build_cusp needs cusp params".into()));
    };
    params.validate()?;
    if cutoff < 4 {
        return Err(Error::InvalidParams(format!(
            "cusp cutoff {cutoff} cannot represent x^4 (need >= 4)"
        )));
    }
    if !(basis_freq > 0.0) || !basis_freq.is_finite() {
        return Err(Error::InvalidParams(format!(
            "basis frequency must be positive (got {basis_freq})"
        )));
    }
    let dim = cutoff + 1;
    let len2 = k / (2.0 * basis_freq);
    let len = len2.sqrt();
    let p2_scale = k * basis_freq / 2.0;

    // x^2 on the infinite basis: diagonal L^2(2n+1), (n, n+2) L^2 sqrt((n+1)(n+2)).
    let x2 = |i: usize, j: usize| -> f64 {
        if i == j {
            len2 * (2 * i + 1) as f64
        } else if i.abs_diff(j) == 2 {
            let n = i.min(j) as f64;
            len2 * ((n + 1.0) * (n + 2.0)).sqrt()
        } else {
            0.0
        }
    };
    let x4 = |i: usize, j: usize| -> f64 {
        let lo = i.max(j).saturating_sub(2);
        let hi = i.min(j) + 2;
        (lo..=hi)
            .filter(|kk| kk.abs_diff(i) <= 2 && kk.abs_diff(j) <= 2)
            .map(|kk| x2(i, kk) * x2(kk, j))
            .sum()
    };

    let mut h = SymBuilder::new(dim);
    for i in 0..dim {
        for j in i..(i + 5).min(dim) {
            let mut val = 0.25 * x4(i, j) + 0.5 * u * x2(i, j);
            match j - i {
                0 => val += 0.5 * p2_scale * (2 * i + 1) as f64,
                1 => val += v * len * ((i + 1) as f64).sqrt(),
                2 => val -= 0.5 * p2_scale * (((i + 1) * (i + 2)) as f64).sqrt(),
                _ => {}
            }
            if val != 0.0 {
                h.add(i, j, val);
            }
        }
    }
    Ok(HamiltonianMatrix {
        matrix: h.finish(),
        basis: BasisDescriptor::Fock1D { cutoff },
        params: *params,
        scale: ScaleNote {
            factor: 1.0,
            note: format!("oscillator basis frequency {basis_freq:.17e}"),
        },
    })
}
