use std::f64::consts::PI;

use num_complex::Complex64;

use super::{Geometry, Quadrature};
use crate::coherent::PhasePoint;
use crate::hamiltonians::TwoJ;
use crate::quadrature::{gauss_laguerre, gauss_legendre};
use crate::{Error, Result};

fn require(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParams(what.to_string()))
    }
}

/// Polar grid on the plane: `alpha = sqrt(s * scale) e^{i phi}` with `s` at
/// Gauss-Laguerre abscissas and `phi` uniform. With
/// `d^2 alpha / pi = scale ds dphi / (2 pi)` the weights are
/// `scale * w_i e^{s_i} / angular_nodes`.
pub fn plane_grid(radial_nodes: usize, angular_nodes: usize, scale: f64) -> Result<Quadrature> {
    require(radial_nodes >= 1, "plane grid needs radial_nodes >= 1")?;
    require(angular_nodes >= 1, "plane grid needs angular_nodes >= 1")?;
    require(scale > 0.0 && scale.is_finite(), "plane grid needs scale > 0")?;
    let rule = gauss_laguerre(radial_nodes, 0.0);
    let mut nodes = Vec::with_capacity(radial_nodes * angular_nodes);
    let mut weights = Vec::with_capacity(radial_nodes * angular_nodes);
    for (s, lw) in rule.nodes.iter().zip(&rule.ln_weights) {
        let r = (s * scale).sqrt();
        let w = scale * (lw + s).exp() / angular_nodes as f64;
        for k in 0..angular_nodes {
            let phi = 2.0 * PI * k as f64 / angular_nodes as f64;
            nodes.push(PhasePoint::Plane {
                alpha: Complex64::from_polar(r, phi),
            });
            weights.push(w);
        }
    }
    Ok(Quadrature {
        geometry: Geometry::Plane,
        nodes,
        weights,
        resolution: vec![radial_nodes, angular_nodes],
        reduced_phase: false,
    })
}

/// Gauss-Legendre in `cos(theta)`, trapezoid in `phi`; weights include
/// `(2j+1)/(4 pi)`.
pub fn sphere_grid(two_j: TwoJ, theta_nodes: usize, phi_nodes: usize) -> Result<Quadrature> {
    require(theta_nodes >= 1, "sphere grid needs theta_nodes >= 1")?;
    require(phi_nodes >= 1, "sphere grid needs phi_nodes >= 1")?;
    require(two_j.0 >= 1, "sphere grid needs 2j >= 1")?;
    let rule = gauss_legendre(theta_nodes);
    let pref = two_j.multiplicity() as f64 / (4.0 * PI) * (2.0 * PI / phi_nodes as f64);
    let mut nodes = Vec::with_capacity(theta_nodes * phi_nodes);
    let mut weights = Vec::with_capacity(theta_nodes * phi_nodes);
    for (t, wt) in rule.nodes.iter().zip(&rule.weights) {
        let theta = t.clamp(-1.0, 1.0).acos();
        for k in 0..phi_nodes {
            nodes.push(PhasePoint::Sphere {
                theta,
                phi: 2.0 * PI * k as f64 / phi_nodes as f64,
            });
            weights.push(pref * wt);
        }
    }
    Ok(Quadrature {
        geometry: Geometry::Sphere,
        nodes,
        weights,
        resolution: vec![theta_nodes, phi_nodes],
        reduced_phase: false,
    })
}

/// CP2 grid in simplex coordinates `w_k = |zeta_k|^2 / (1 + |zeta1|^2 +
/// |zeta2|^2)` and phases `phi_k = arg zeta_k`, where
/// `dmu = (N+1)(N+2)/(4 pi^2) dw1 dw2 dphi1 dphi2`.
///
/// The simplex is mapped from the unit square by `w1 = u`,
/// `w2 = (1-u) v` (Jacobian `1-u`) with Gauss-Legendre in `u` and `v`;
/// phases use the trapezoid rule. With `l_symmetric` the grid runs over
/// `phi1 + phi2` only (nodes carry `phi2 = 0`) and the other phase
/// contributes a factor `2 pi`.
pub fn cp2_grid(n: u32, simplex_nodes: usize, phi_nodes: usize, l_symmetric: bool) -> Result<Quadrature> {
    require(n >= 1, "cp2 grid needs N >= 1")?;
    require(simplex_nodes >= 1, "cp2 grid needs simplex_nodes >= 1")?;
    require(phi_nodes >= 1, "cp2 grid needs phi_nodes >= 1")?;
    let rule = gauss_legendre(simplex_nodes);
    let unit: Vec<(f64, f64)> = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(x, w)| (0.5 * (x + 1.0), 0.5 * w))
        .collect();
    let nf = n as f64;
    let dphi = 2.0 * PI / phi_nodes as f64;
    let phase_weight = if l_symmetric { dphi * 2.0 * PI } else { dphi * dphi };
    let pref = (nf + 1.0) * (nf + 2.0) / (4.0 * PI * PI) * phase_weight;
    let phases: Vec<(f64, f64)> = if l_symmetric {
        (0..phi_nodes).map(|a| (a as f64 * dphi, 0.0)).collect()
    } else {
        (0..phi_nodes)
            .flat_map(|a| (0..phi_nodes).map(move |b| (a as f64 * dphi, b as f64 * dphi)))
            .collect()
    };
    let mut nodes = Vec::with_capacity(unit.len() * unit.len() * phases.len());
    let mut weights = Vec::with_capacity(nodes.capacity());
    for &(u, wu) in &unit {
        for &(v, wv) in &unit {
            let (w1, w2) = (u, (1.0 - u) * v);
            let w0 = (1.0 - u) * (1.0 - v);
            let weight = pref * wu * wv * (1.0 - u);
            for &(p1, p2) in &phases {
                nodes.push(PhasePoint::CP2 {
                    zeta1: Complex64::from_polar((w1 / w0).sqrt(), p1),
                    zeta2: Complex64::from_polar((w2 / w0).sqrt(), p2),
                });
                weights.push(weight);
            }
        }
    }
    let mut resolution = vec![simplex_nodes, simplex_nodes, phi_nodes];
    if !l_symmetric {
        resolution.push(phi_nodes);
    }
    Ok(Quadrature {
        geometry: Geometry::CP2,
        nodes,
        weights,
        resolution,
        reduced_phase: l_symmetric,
    })
}

/// Simplex coordinates `(w1, w2, phi1, phi2)` of a CP2 node.
pub(crate) fn simplex_coords(zeta1: Complex64, zeta2: Complex64) -> (f64, f64, f64, f64) {
    let d = 1.0 + zeta1.norm_sqr() + zeta2.norm_sqr();
    (zeta1.norm_sqr() / d, zeta2.norm_sqr() / d, zeta1.arg(), zeta2.arg())
}
