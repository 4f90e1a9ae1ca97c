//! Phase-space quadrature grids, Husimi fields and Wehrl entropies.
//!
//! Grid weights absorb the invariant measure of each geometry, so
//! `sum_i w_i Q_i = 1` for a normalized state and `W = -sum_i w_i Q_i ln Q_i`.
//! Sums run in a fixed pairwise order so entropies do not depend on how many
//! worker threads evaluated the nodes.

mod grids;
mod husimi;
mod refine;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coherent::{AmplitudeVector, PhasePoint};
use crate::hamiltonians::{BasisDescriptor, GroundState, TwoJ};
use crate::{Error, Result};

pub use grids::{cp2_grid, plane_grid, sphere_grid};
pub use husimi::{husimi, wehrl, wehrl_entropy, HusimiField, WehrlEstimate, Q_FLOOR};
pub use refine::{refine_until, support_cutoff, GridFamily, RefineReport, RefineStep, SUPPORT_TAIL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Geometry {
    /// Glauber plane, `d^2 alpha / pi`.
    Plane,
    /// Bloch sphere, `(2j+1)/(4 pi) sin(theta) dtheta dphi`.
    Sphere,
    /// Complex projective plane of the U(3) coherent states.
    CP2,
    /// Dicke product space, plane times sphere.
    PlaneXSphere,
}

impl Geometry {
    /// Phase space whose coherent states expand in `basis`. Two-mode
    /// bosons use the sphere through the Schwinger map `n_t = j + m`.
    pub fn of_basis(basis: &BasisDescriptor) -> Geometry {
        match basis {
            BasisDescriptor::Fock1D { .. } => Geometry::Plane,
            BasisDescriptor::Spin { .. } | BasisDescriptor::TwoMode { .. } => Geometry::Sphere,
            BasisDescriptor::U3Block { .. } | BasisDescriptor::U3Full { .. } => Geometry::CP2,
            BasisDescriptor::DickeProduct { .. } => Geometry::PlaneXSphere,
        }
    }
}

/// Lieb lower bound of the Wehrl entropy for states in `basis`, attained
/// by coherent states.
pub fn lieb_minimum(basis: &BasisDescriptor) -> f64 {
    let sphere = |two_j: f64| two_j / (two_j + 1.0);
    match *basis {
        BasisDescriptor::Fock1D { .. } => 1.0,
        BasisDescriptor::Spin { two_j } => sphere(two_j.0 as f64),
        BasisDescriptor::TwoMode { n } => sphere(n as f64),
        BasisDescriptor::U3Block { n, .. } | BasisDescriptor::U3Full { n } => {
            let n = n as f64;
            n * (3.0 + 2.0 * n) / ((n + 1.0) * (n + 2.0))
        }
        BasisDescriptor::DickeProduct { two_j, .. } => 1.0 + sphere(two_j.0 as f64),
    }
}

/// Phase-space nodes and measure-absorbing weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Quadrature {
    pub geometry: Geometry,
    pub nodes: Vec<PhasePoint>,
    pub weights: Vec<f64>,
    /// Node counts per coordinate.
    pub resolution: Vec<usize>,
    /// CP2 only: the relative phase `phi1 - phi2` is integrated analytically,
    /// which is exact for states of fixed `l`.
    pub reduced_phase: bool,
}

impl Quadrature {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        crate::special::pairwise_sum(&self.weights)
    }
}

/// A single grid or the plane-times-sphere product used for Dicke states.
/// Product grids are never expanded node by node.
#[derive(Debug, Clone, PartialEq)]
pub enum PhaseGrid {
    Single(Quadrature),
    Product { plane: Quadrature, sphere: Quadrature },
}

impl PhaseGrid {
    pub fn geometry(&self) -> Geometry {
        match self {
            PhaseGrid::Single(q) => q.geometry,
            PhaseGrid::Product { .. } => Geometry::PlaneXSphere,
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            PhaseGrid::Single(q) => q.len(),
            PhaseGrid::Product { plane, sphere } => plane.len() * sphere.len(),
        }
    }

    pub fn resolution(&self) -> Vec<usize> {
        match self {
            PhaseGrid::Single(q) => q.resolution.clone(),
            PhaseGrid::Product { plane, sphere } => plane.resolution.iter().chain(&sphere.resolution).copied().collect(),
        }
    }

    /// Weight of node `i` in plane-major order.
    pub fn weight(&self, i: usize) -> f64 {
        match self {
            PhaseGrid::Single(q) => q.weights[i],
            PhaseGrid::Product { plane, sphere } => plane.weights[i / sphere.len()] * sphere.weights[i % sphere.len()],
        }
    }

    /// Node `i` in plane-major order.
    pub fn node(&self, i: usize) -> PhasePoint {
        match self {
            PhaseGrid::Single(q) => q.nodes[i],
            PhaseGrid::Product { plane, sphere } => {
                let (PhasePoint::Plane { alpha }, PhasePoint::Sphere { theta, phi }) =
                    (plane.nodes[i / sphere.len()], sphere.nodes[i % sphere.len()])
                else {
                    unreachable!("product grids pair plane and sphere nodes")
                };
                PhasePoint::DickeProduct { alpha, theta, phi }
            }
        }
    }
}

/// Complex state vector over a labeled basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    pub basis: BasisDescriptor,
    pub values: Vec<Complex64>,
}

impl StateVector {
    pub fn new(basis: BasisDescriptor, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != basis.dim() {
            return Err(Error::BasisMismatch(format!(
                "{} coefficients for a basis of dimension {}",
                values.len(),
                basis.dim()
            )));
        }
        Ok(StateVector { basis, values })
    }

    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum()
    }

    pub fn normalized(mut self) -> Self {
        let n = self.norm_sqr().sqrt();
        self.values.iter_mut().for_each(|v| *v /= n);
        self
    }

    /// Normalized `a + b` over the same basis.
    pub fn superpose(a: &StateVector, b: &StateVector) -> Result<StateVector> {
        if a.basis != b.basis {
            return Err(Error::BasisMismatch(format!("{:?} vs {:?}", a.basis, b.basis)));
        }
        let values = a.values.iter().zip(&b.values).map(|(x, y)| x + y).collect();
        Ok(StateVector { basis: a.basis, values }.normalized())
    }

    /// Spin length of the sphere factor, for sphere and Dicke bases.
    pub(crate) fn sphere_two_j(&self) -> Option<TwoJ> {
        match self.basis {
            BasisDescriptor::Spin { two_j } | BasisDescriptor::DickeProduct { two_j, .. } => Some(two_j),
            BasisDescriptor::TwoMode { n } => Some(TwoJ(n)),
            _ => None,
        }
    }
}

impl From<&GroundState> for StateVector {
    fn from(g: &GroundState) -> Self {
        StateVector {
            basis: g.basis,
            values: g.coefficients.iter().map(|&c| Complex64::new(c, 0.0)).collect(),
        }
    }
}

impl From<&AmplitudeVector> for StateVector {
    fn from(a: &AmplitudeVector) -> Self {
        StateVector {
            basis: a.basis,
            values: a.values.clone(),
        }
    }
}
