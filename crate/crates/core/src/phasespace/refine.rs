use serde::{Deserialize, Serialize};

use super::{cp2_grid, plane_grid, sphere_grid, wehrl, Geometry, PhaseGrid, StateVector};
use crate::hamiltonians::{BasisDescriptor, TwoJ};
use crate::{Error, Result};

/// Family of grids of increasing resolution for one geometry.
///
/// Level 0 integrates the resolution of identity of the occupied part of
/// the state's basis exactly: `floor(c/2)+1` Gauss-Laguerre by `c+1`
/// angular nodes on the plane for a state supported on levels `0..=c`,
/// `2j+1` by `4j+2` on the sphere and `N+1` by `2N+1` on CP2. Each further
/// level doubles every node count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "geometry", rename_all = "snake_case")]
pub enum GridFamily {
    Plane { scale: f64 },
    Sphere,
    CP2 { l_symmetric: bool },
    PlaneXSphere { scale: f64 },
}

impl GridFamily {
    /// Default family for states in `basis`: unit plane scale (the Fock
    /// basis oscillator) and phase-reduced CP2 grids for fixed-`l` states.
    pub fn for_basis(basis: &BasisDescriptor) -> GridFamily {
        match basis {
            BasisDescriptor::Fock1D { .. } => GridFamily::Plane { scale: 1.0 },
            BasisDescriptor::Spin { .. } | BasisDescriptor::TwoMode { .. } => GridFamily::Sphere,
            BasisDescriptor::U3Block { .. } => GridFamily::CP2 { l_symmetric: true },
            BasisDescriptor::U3Full { .. } => GridFamily::CP2 { l_symmetric: false },
            BasisDescriptor::DickeProduct { .. } => GridFamily::PlaneXSphere { scale: 1.0 },
        }
    }

    pub fn geometry(&self) -> Geometry {
        match self {
            GridFamily::Plane { .. } => Geometry::Plane,
            GridFamily::Sphere => Geometry::Sphere,
            GridFamily::CP2 { .. } => Geometry::CP2,
            GridFamily::PlaneXSphere { .. } => Geometry::PlaneXSphere,
        }
    }

    /// Node count of `level` without building the grid.
    pub fn node_count(&self, state: &StateVector, level: u32) -> Result<usize> {
        let res = self.resolution(state, level)?;
        Ok(match self {
            GridFamily::CP2 { l_symmetric: false } => res[0] * res[0] * res[1] * res[1],
            GridFamily::CP2 { l_symmetric: true } => res[0] * res[0] * res[1],
            _ => res.iter().product(),
        })
    }

    /// Node counts per coordinate at `level`.
    fn resolution(&self, state: &StateVector, level: u32) -> Result<Vec<usize>> {
        let basis = &state.basis;
        if Geometry::of_basis(basis) != self.geometry() {
            return Err(Error::BasisMismatch(format!("{basis:?} with a {:?} grid family", self.geometry())));
        }
        let f = 1usize << level;
        let plane = || {
            let c = support_cutoff(state).unwrap_or(0);
            [(c / 2 + 1) * f, (c + 1) * f]
        };
        let sphere = |t: TwoJ| [(t.0 as usize + 1) * f, (2 * t.0 as usize + 2) * f];
        Ok(match *basis {
            BasisDescriptor::Fock1D { .. } => plane().to_vec(),
            BasisDescriptor::Spin { two_j } => sphere(two_j).to_vec(),
            BasisDescriptor::TwoMode { n } => sphere(TwoJ(n)).to_vec(),
            BasisDescriptor::U3Block { n, .. } | BasisDescriptor::U3Full { n } => {
                vec![(n as usize + 1) * f, (2 * n as usize + 1) * f]
            }
            BasisDescriptor::DickeProduct { two_j, .. } => plane().into_iter().chain(sphere(two_j)).collect(),
        })
    }

    /// Grid at `level` for `state`.
    pub fn grid(&self, state: &StateVector, level: u32) -> Result<PhaseGrid> {
        let res = self.resolution(state, level)?;
        Ok(match (*self, state.basis) {
            (GridFamily::Plane { scale }, _) => PhaseGrid::Single(plane_grid(res[0], res[1], scale)?),
            (GridFamily::Sphere, BasisDescriptor::TwoMode { n }) => PhaseGrid::Single(sphere_grid(TwoJ(n), res[0], res[1])?),
            (GridFamily::Sphere, BasisDescriptor::Spin { two_j }) => PhaseGrid::Single(sphere_grid(two_j, res[0], res[1])?),
            (GridFamily::CP2 { l_symmetric }, BasisDescriptor::U3Block { n, .. } | BasisDescriptor::U3Full { n }) => {
                PhaseGrid::Single(cp2_grid(n, res[0], res[1], l_symmetric)?)
            }
            (GridFamily::PlaneXSphere { scale }, BasisDescriptor::DickeProduct { two_j, .. }) => PhaseGrid::Product {
                plane: plane_grid(res[0], res[1], scale)?,
                sphere: sphere_grid(two_j, res[2], res[3])?,
            },
            _ => unreachable!("resolution() checked the geometry"),
        })
    }
}

/// Weight below which the top oscillator levels of a state count as
/// unoccupied when sizing plane grids.
pub const SUPPORT_TAIL: f64 = 1e-20;

/// Highest oscillator level `c` such that the weight above `c` is at most
/// [`SUPPORT_TAIL`] of the norm; `None` for bases without oscillator levels.
pub fn support_cutoff(state: &StateVector) -> Option<usize> {
    let cutoff = state.basis.truncation_cutoff()?;
    let mut per_level = vec![0.0; cutoff + 1];
    for (i, v) in state.values.iter().enumerate() {
        per_level[state.basis.truncation_level(i)?] += v.norm_sqr();
    }
    let total: f64 = per_level.iter().sum();
    let mut tail = 0.0;
    for (n, w) in per_level.iter().enumerate().rev() {
        tail += w;
        if tail > SUPPORT_TAIL * total {
            return Some(n);
        }
    }
    Some(0)
}

/// One rung of a refinement ladder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefineStep {
    pub level: u32,
    pub resolution: Vec<usize>,
    pub nodes: usize,
    pub w: f64,
    pub norm_deficit: f64,
}

/// Outcome of [`refine_until`]: the entropy on the finest grid and the
/// full ladder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefineReport {
    pub w: f64,
    pub norm_deficit: f64,
    pub nodes_used: usize,
    pub ladder: Vec<RefineStep>,
}

/// Doubles the grid resolution until two successive entropies differ by at
/// most `w_tol` and the finer grid's norm deficit is at most `norm_tol`.
pub fn refine_until(
    state: &StateVector,
    family: &GridFamily,
    w_tol: f64,
    norm_tol: f64,
    max_nodes: usize,
) -> Result<RefineReport> {
    if !(w_tol >= 0.0) || !(norm_tol > 0.0) {
        return Err(Error::InvalidParams(format!(
            "refinement tolerances must be positive (w_tol {w_tol}, norm_tol {norm_tol})"
        )));
    }
    let mut ladder: Vec<RefineStep> = Vec::new();
    for level in 0.. {
        let nodes = family.node_count(state, level)?;
        if nodes > max_nodes {
            return Err(Error::QuadratureConvergence {
                max_nodes,
                last: ladder.iter().rev().take(2).rev().map(|s| s.w).collect(),
            });
        }
        let grid = family.grid(state, level)?;
        let est = wehrl(state, &grid)?;
        let step = RefineStep {
            level,
            resolution: grid.resolution(),
            nodes,
            w: est.w,
            norm_deficit: est.norm_deficit,
        };
        let done = ladder
            .last()
            .is_some_and(|prev| (prev.w - step.w).abs() <= w_tol && step.norm_deficit <= norm_tol);
        ladder.push(step);
        if done {
            break;
        }
    }
    let last = ladder.last().expect("at least one level");
    Ok(RefineReport {
        w: last.w,
        norm_deficit: last.norm_deficit,
        nodes_used: last.nodes,
        ladder,
    })
}
