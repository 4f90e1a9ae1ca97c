use num_complex::Complex64;
use rayon::prelude::*;

use super::grids::simplex_coords;
use super::{Geometry, PhaseGrid, Quadrature, StateVector};
use crate::coherent::{GlauberKernel, PhasePoint, Su2Kernel, U3Kernel, U3_MAX_N};
use crate::hamiltonians::BasisDescriptor;
use crate::special::{compensated_sum, pairwise_sum};
use crate::{Error, Result};

/// Husimi values below this are treated as exact zeros.
pub const Q_FLOOR: f64 = 1e-300;

/// Product-grid plane nodes whose field-projected weight `sum_m |U_m|^2`
/// is below this bound are skipped. Every `Q` at such a node is bounded by
/// it, so the entropy error is below `1e-24 * 56` per unit weight.
const PLANE_SKIP: f64 = 1e-24;

const MIN_CHUNK: usize = 256;

/// `Q_i = |<z_i|psi>|^2` on the nodes of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct HusimiField {
    /// Node order of the grid (plane-major for product grids).
    pub q_values: Vec<f64>,
    /// `|1 - sum_i w_i Q_i|`.
    pub norm_deficit: f64,
    pub basis: BasisDescriptor,
}

/// Wehrl entropy with its normalization diagnostic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WehrlEstimate {
    pub w: f64,
    pub norm_deficit: f64,
    pub nodes: usize,
}

#[inline]
fn clamp_q(q: f64) -> f64 {
    if q < Q_FLOOR {
        0.0
    } else {
        q.min(1.0)
    }
}

#[inline]
fn entropy_term(q: f64) -> f64 {
    if q == 0.0 {
        0.0
    } else {
        -q * q.ln()
    }
}

#[inline]
fn overlap(amps: &[Complex64], state: &[Complex64]) -> f64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (a, c) in amps.iter().zip(state) {
        acc += a.conj() * c;
    }
    acc.norm_sqr()
}

/// Coherent-state family of a single-geometry grid.
enum Kernel {
    Plane(GlauberKernel),
    Sphere(Su2Kernel),
    Cp2(U3Kernel),
}

impl Kernel {
    fn for_state(state: &StateVector, grid: &Quadrature) -> Result<Kernel> {
        let geometry = Geometry::of_basis(&state.basis);
        if geometry != grid.geometry {
            return Err(Error::BasisMismatch(format!(
                "{:?} state on a {:?} grid",
                state.basis, grid.geometry
            )));
        }
        Ok(match state.basis {
            BasisDescriptor::Fock1D { cutoff } => Kernel::Plane(GlauberKernel::new(cutoff)),
            BasisDescriptor::Spin { .. } | BasisDescriptor::TwoMode { .. } => {
                Kernel::Sphere(Su2Kernel::new(state.sphere_two_j().expect("sphere basis").0))
            }
            BasisDescriptor::U3Full { .. } if grid.reduced_phase => {
                return Err(Error::BasisMismatch(
                    "phase-reduced CP2 grids need a fixed-l state".into(),
                ))
            }
            BasisDescriptor::U3Full { n } | BasisDescriptor::U3Block { n, .. } => {
                if n > U3_MAX_N {
                    return Err(Error::InvalidParams(format!(
                        "U(3) Husimi evaluation supports N <= {U3_MAX_N} (got {n})"
                    )));
                }
                Kernel::Cp2(U3Kernel::new(&state.basis))
            }
            BasisDescriptor::DickeProduct { .. } => unreachable!("product states use product grids"),
        })
    }

    fn fill(&self, node: &PhasePoint, out: &mut [Complex64]) {
        match (self, *node) {
            (Kernel::Plane(k), PhasePoint::Plane { alpha }) => k.fill(alpha, out),
            (Kernel::Sphere(k), PhasePoint::Sphere { theta, phi }) => k.fill(theta, phi, out),
            (Kernel::Cp2(k), PhasePoint::CP2 { zeta1, zeta2 }) => {
                let (w1, w2, p1, p2) = simplex_coords(zeta1, zeta2);
                k.fill(w1, w2, p1, p2, out)
            }
            _ => unreachable!("grid nodes match the grid geometry"),
        }
    }
}

fn single_field(state: &StateVector, grid: &Quadrature) -> Result<Vec<f64>> {
    let kernel = Kernel::for_state(state, grid)?;
    let dim = state.values.len();
    Ok(grid
        .nodes
        .par_iter()
        .with_min_len(MIN_CHUNK)
        .map_init(
            || vec![Complex64::new(0.0, 0.0); dim],
            |buf, node| {
                kernel.fill(node, buf);
                clamp_q(overlap(buf, &state.values))
            },
        )
        .collect())
}

/// Checks a Dicke state against a product grid and returns
/// `(n_max, multiplicity)`.
fn product_shape(state: &StateVector, plane: &Quadrature, sphere: &Quadrature) -> Result<(usize, usize)> {
    let BasisDescriptor::DickeProduct { n_max, two_j } = state.basis else {
        return Err(Error::BasisMismatch(format!("{:?} state on a product grid", state.basis)));
    };
    if plane.geometry != Geometry::Plane || sphere.geometry != Geometry::Sphere {
        return Err(Error::BasisMismatch("product grids pair a plane and a sphere".into()));
    }
    Ok((n_max, two_j.multiplicity()))
}

/// Sphere amplitudes of every sphere node, conjugated, node-major.
fn sphere_table(sphere: &Quadrature, two_j: u32, mult: usize) -> Vec<Complex64> {
    let kernel = Su2Kernel::new(two_j);
    let mut table = vec![Complex64::new(0.0, 0.0); sphere.len() * mult];
    for (node, row) in sphere.nodes.iter().zip(table.chunks_mut(mult)) {
        let PhasePoint::Sphere { theta, phi } = *node else {
            unreachable!("sphere grid nodes")
        };
        kernel.fill(theta, phi, row);
        row.iter_mut().for_each(|v| *v = v.conj());
    }
    table
}

/// `U_m = sum_n conj(f_n(alpha)) c_{n,m}`; returns `sum_m |U_m|^2`.
fn project_field(glauber: &GlauberKernel, alpha: Complex64, coeffs: &[Complex64], f: &mut [Complex64], u: &mut [Complex64]) -> f64 {
    glauber.fill(alpha, f);
    let mult = u.len();
    u.fill(Complex64::new(0.0, 0.0));
    for (fnv, row) in f.iter().zip(coeffs.chunks(mult)) {
        let fc = fnv.conj();
        for (um, c) in u.iter_mut().zip(row) {
            *um += fc * c;
        }
    }
    u.iter().map(|x| x.norm_sqr()).sum()
}

#[inline]
fn dot(g: &[Complex64], u: &[Complex64]) -> f64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (a, b) in g.iter().zip(u) {
        acc += a * b;
    }
    acc.norm_sqr()
}

/// Husimi function of `state` on every node of `grid`.
///
/// Product grids are evaluated separably but the returned field has one
/// value per (plane, sphere) pair; use [`wehrl`] for entropies on large
/// product grids.
pub fn husimi(state: &StateVector, grid: &PhaseGrid) -> Result<HusimiField> {
    let q_values = match grid {
        PhaseGrid::Single(q) => single_field(state, q)?,
        PhaseGrid::Product { plane, sphere } => {
            let (n_max, mult) = product_shape(state, plane, sphere)?;
            let table = sphere_table(sphere, (mult - 1) as u32, mult);
            let glauber = GlauberKernel::new(n_max);
            plane
                .nodes
                .par_iter()
                .map_init(
                    || (vec![Complex64::new(0.0, 0.0); n_max + 1], vec![Complex64::new(0.0, 0.0); mult]),
                    |(f, u), node| {
                        let PhasePoint::Plane { alpha } = *node else {
                            unreachable!("plane grid nodes")
                        };
                        project_field(&glauber, alpha, &state.values, f, u);
                        table.chunks(mult).map(|g| clamp_q(dot(g, u))).collect::<Vec<f64>>()
                    },
                )
                .flatten_iter()
                .collect()
        }
    };
    let weighted: Vec<f64> = q_values.iter().enumerate().map(|(i, q)| grid.weight(i) * q).collect();
    Ok(HusimiField {
        norm_deficit: (1.0 - pairwise_sum(&weighted)).abs(),
        q_values,
        basis: state.basis,
    })
}

/// `W = -sum_i w_i Q_i ln Q_i` with `0 ln 0 = 0`, summed pairwise in node
/// order.
pub fn wehrl_entropy(field: &HusimiField, grid: &PhaseGrid) -> Result<f64> {
    if field.q_values.len() != grid.node_count() {
        return Err(Error::BasisMismatch(format!(
            "field of {} values on a grid of {} nodes",
            field.q_values.len(),
            grid.node_count()
        )));
    }
    let terms: Vec<f64> = field
        .q_values
        .iter()
        .enumerate()
        .map(|(i, &q)| grid.weight(i) * entropy_term(q))
        .collect();
    Ok(pairwise_sum(&terms))
}

/// Wehrl entropy and norm deficit of `state` on `grid` without storing
/// the Husimi field of product grids.
pub fn wehrl(state: &StateVector, grid: &PhaseGrid) -> Result<WehrlEstimate> {
    match grid {
        PhaseGrid::Single(_) => {
            let field = husimi(state, grid)?;
            Ok(WehrlEstimate {
                w: wehrl_entropy(&field, grid)?,
                norm_deficit: field.norm_deficit,
                nodes: grid.node_count(),
            })
        }
        PhaseGrid::Product { plane, sphere } => {
            let (n_max, mult) = product_shape(state, plane, sphere)?;
            let table = sphere_table(sphere, (mult - 1) as u32, mult);
            let glauber = GlauberKernel::new(n_max);
            let per_plane: Vec<(f64, f64)> = plane
                .nodes
                .par_iter()
                .zip(plane.weights.par_iter())
                .map_init(
                    || (vec![Complex64::new(0.0, 0.0); n_max + 1], vec![Complex64::new(0.0, 0.0); mult]),
                    |(f, u), (node, &wp)| {
                        let PhasePoint::Plane { alpha } = *node else {
                            unreachable!("plane grid nodes")
                        };
                        if project_field(&glauber, alpha, &state.values, f, u) <= PLANE_SKIP {
                            return (0.0, 0.0);
                        }
                        let qs = table.chunks(mult).map(|g| clamp_q(dot(g, u)));
                        let (mut e, mut n) = (Vec::with_capacity(sphere.len()), Vec::with_capacity(sphere.len()));
                        for (q, ws) in qs.zip(&sphere.weights) {
                            e.push(ws * entropy_term(q));
                            n.push(ws * q);
                        }
                        (wp * compensated_sum(e), wp * compensated_sum(n))
                    },
                )
                .collect();
            let e: Vec<f64> = per_plane.iter().map(|p| p.0).collect();
            let n: Vec<f64> = per_plane.iter().map(|p| p.1).collect();
            Ok(WehrlEstimate {
                w: pairwise_sum(&e),
                norm_deficit: (1.0 - pairwise_sum(&n)).abs(),
                nodes: grid.node_count(),
            })
        }
    }
}
