//! Wehrl entropy of ground-state Husimi functions across quantum phase
//! transitions.
//!
//! The crate builds the Hamiltonian matrices of five algebraic and
//! oscillator models (quantum cusp, Dicke, Lipkin-Meshkov-Glick, a
//! one-dimensional interacting boson model and the two-dimensional vibron
//! model), extracts their ground states, evaluates the Husimi function
//! `Q(z) = |<z|psi>|^2` against the matching coherent-state family and
//! integrates `-Q ln Q` over phase space.
//!
//! Along a control-parameter sweep the entropy shows a peak at a first-order
//! critical point and a step of height `ln 2` at a second-order one; the
//! [`sweep`] module runs the sweeps and classifies them.
//!
//! Module map:
//!
//! - [`hamiltonians`]: model parameters, bases, matrix builders, eigensolver
//!   and truncation control.
//! - [`coherent`]: Glauber, SU(2), U(3) and product coherent-state amplitudes.
//! - [`phasespace`]: quadrature grids, Husimi fields and Wehrl entropies.
//! - [`surfaces`]: classical energy surfaces, analytic critical points and a
//!   multistart minimizer.
//! - [`sweep`]: parameter sweeps, order classification and sharpening.

#![forbid(unsafe_code)]

pub mod coherent;
mod error;
pub mod hamiltonians;
pub mod phasespace;
pub mod quadrature;
pub mod special;
pub mod surfaces;
pub mod sweep;

pub use error::{Error, Result};

pub use coherent::{AmplitudeVector, PhasePoint};
pub use hamiltonians::{
    BasisDescriptor, GroundState, HamiltonianMatrix, ModelKind, ModelParams, TwoJ,
};
pub use num_complex::Complex64;
pub use phasespace::{
    Geometry, GridFamily, HusimiField, PhaseGrid, Quadrature, RefineReport, StateVector,
};
pub use surfaces::CriticalInfo;
pub use sweep::{
    classify::{Order, Thresholds, TransitionReport},
    SweepResult, SweepRow, SweepSpec,
};
