//! Model parameters, bases, Hamiltonian matrix builders and ground states.
//!
//! All five models are realized as dense real-symmetric matrices in an
//! explicit basis. Builders fill the upper triangle and mirror it, so the
//! stored matrices are exactly symmetric.

mod cusp;
mod dicke;
mod eigen;
mod ibm;
mod lmg;
mod truncation;
mod vibron;

pub use cusp::{build_cusp, cusp_basis_frequency};
pub use dicke::{build_dicke, dicke_seed_cutoff};
pub use eigen::{lowest_eigenpairs, lowest_eigenpairs_dense, Eigenpair};
pub use ibm::build_ibm_lmg;
pub use lmg::build_lmg;
pub use truncation::{converge_truncation, TruncationSettings};
pub use vibron::{build_2dvm, w_squared_block};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A spin length `j` stored as the integer `2j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TwoJ(pub u32);

impl TwoJ {
    /// From a (half-)integer `j`. Fails unless `2j` is a positive integer.
    pub fn from_j(j: f64) -> Result<Self> {
        let two_j = 2.0 * j;
        if !(two_j >= 1.0) || (two_j - two_j.round()).abs() > 1e-9 || two_j > u32::MAX as f64 {
            return Err(Error::InvalidParams(format!(
                "spin length j = {j} is not a positive half-integer"
            )));
        }
        Ok(TwoJ(two_j.round() as u32))
    }

    /// Spin length for `N = 2j` particles.
    pub fn from_particles(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParams("particle number must be positive".into()));
        }
        Ok(TwoJ(n))
    }

    pub fn j(self) -> f64 {
        self.0 as f64 / 2.0
    }

    /// Number of `m` states, `2j + 1`.
    pub fn multiplicity(self) -> usize {
        self.0 as usize + 1
    }

    /// `m` for the index `i = j + m`.
    pub fn m_of(self, i: usize) -> f64 {
        (2.0 * i as f64 - self.0 as f64) / 2.0
    }
}

/// Model tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Cusp,
    Dicke,
    Lmg,
    IbmLmg,
    #[serde(rename = "vibron2d")]
    Vibron2D,
}

impl ModelKind {
    pub fn tag(self) -> &'static str {
        match self {
            ModelKind::Cusp => "cusp",
            ModelKind::Dicke => "dicke",
            ModelKind::Lmg => "lmg",
            ModelKind::IbmLmg => "ibm_lmg",
            ModelKind::Vibron2D => "vibron2d",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "cusp" => Some(ModelKind::Cusp),
            "dicke" => Some(ModelKind::Dicke),
            "lmg" => Some(ModelKind::Lmg),
            "ibm_lmg" | "ibm-lmg" => Some(ModelKind::IbmLmg),
            "vibron2d" | "2dvm" => Some(ModelKind::Vibron2D),
            _ => None,
        }
    }

    pub const ALL: [ModelKind; 5] = [
        ModelKind::Cusp,
        ModelKind::Dicke,
        ModelKind::Lmg,
        ModelKind::IbmLmg,
        ModelKind::Vibron2D,
    ];
}

/// Parameters of one model instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum ModelParams {
    /// `K^2 p^2 / 2 + x^4/4 + u x^2/2 + v x`.
    Cusp { u: f64, v: f64, k: f64 },
    /// `w0 Jz + w a^+a + lambda/sqrt(2j) (a^+ + a)(J+ + J-)`.
    Dicke {
        omega0: f64,
        omega: f64,
        lambda: f64,
        two_j: TwoJ,
    },
    /// `H/(2 w j) = Jz/j + (gx Jx^2 + gy Jy^2)/(j(2j-1))`.
    Lmg {
        omega: f64,
        gamma_x: f64,
        gamma_y: f64,
        two_j: TwoJ,
    },
    /// `x n_t - (1-x)/N Q^y Q^y`.
    IbmLmg { x: f64, y: f64, n: u32 },
    /// `(1-xi) n + xi (N(N+1) - W^2)/(N-1)` on the angular momentum `l` block.
    #[serde(rename = "vibron2d")]
    Vibron2D { xi: f64, n: u32, l: i32 },
}

impl ModelParams {
    pub fn kind(&self) -> ModelKind {
        match self {
            ModelParams::Cusp { .. } => ModelKind::Cusp,
            ModelParams::Dicke { .. } => ModelKind::Dicke,
            ModelParams::Lmg { .. } => ModelKind::Lmg,
            ModelParams::IbmLmg { .. } => ModelKind::IbmLmg,
            ModelParams::Vibron2D { .. } => ModelKind::Vibron2D,
        }
    }

    /// Checks the per-model invariants; collects every violation.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut finite = |name: &str, v: f64| {
            if !v.is_finite() {
                out.push(format!("{name} must be finite"));
            }
        };
        match *self {
            ModelParams::Cusp { u, v, k } => {
                finite("u", u);
                finite("v", v);
                finite("K", k);
                if !(k > 0.0) {
                    out.push(format!("cusp classicality K must be > 0 (got {k})"));
                }
            }
            ModelParams::Dicke {
                omega0,
                omega,
                lambda,
                two_j,
            } => {
                finite("omega0", omega0);
                finite("omega", omega);
                finite("lambda", lambda);
                if !(omega > 0.0) {
                    out.push(format!("dicke field frequency omega must be > 0 (got {omega})"));
                }
                if !(omega0 > 0.0) {
                    out.push(format!("dicke splitting omega0 must be > 0 (got {omega0})"));
                }
                if two_j.0 < 1 {
                    out.push("dicke requires 2j >= 1".into());
                }
            }
            ModelParams::Lmg {
                omega,
                gamma_x,
                gamma_y,
                two_j,
            } => {
                finite("omega", omega);
                finite("gamma_x", gamma_x);
                finite("gamma_y", gamma_y);
                if !(omega > 0.0) {
                    out.push(format!("lmg omega must be > 0 (got {omega})"));
                }
                if two_j.0 < 2 {
                    out.push(format!("lmg requires 2j >= 2 (got 2j = {})", two_j.0));
                }
            }
            ModelParams::IbmLmg { x, y, n } => {
                finite("y", y);
                if !(0.0..=1.0).contains(&x) {
                    out.push(format!("ibm_lmg control x must lie in [0, 1] (got {x})"));
                }
                if n < 1 {
                    out.push("ibm_lmg requires N >= 1".into());
                }
            }
            ModelParams::Vibron2D { xi, n, l } => {
                if !(0.0..=1.0).contains(&xi) {
                    out.push(format!("vibron2d control xi must lie in [0, 1] (got {xi})"));
                }
                if n < 2 {
                    out.push(format!("vibron2d requires N >= 2 (got N = {n})"));
                }
                if l.unsigned_abs() > n {
                    out.push(format!("vibron2d requires |l| <= N (got l = {l}, N = {n})"));
                }
            }
        }
        out
    }

    /// Factor between the physical Hamiltonian and the stored matrix
    /// (`2 omega j` for LMG, 1 otherwise).
    pub fn energy_scale(&self) -> f64 {
        match *self {
            ModelParams::Lmg { omega, two_j, .. } => 2.0 * omega * two_j.j(),
            _ => 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidParams(v.join("; ")))
        }
    }
}

/// Basis in which a Hamiltonian or coherent state is expanded.
///
/// Enumeration order is ascending in the first label, then ascending in the
/// second; [`BasisDescriptor::label`] maps an index back to its labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "basis", rename_all = "snake_case")]
pub enum BasisDescriptor {
    /// Oscillator levels `n = 0..=cutoff`.
    Fock1D { cutoff: usize },
    /// `|j, m>`, `m = -j..=j`.
    Spin { two_j: TwoJ },
    /// Two-mode states `|n_s = N - n_t, n_t>`, `n_t = 0..=N`.
    TwoMode { n: u32 },
    /// U(3) states `|N, n, l>` at fixed `l`, `n = |l|, |l|+2, ..., <= N`.
    U3Block { n: u32, l: i32 },
    /// Full symmetric U(3) space, `(n, m)` with `n = 0..=N`, `m = 0..=n`.
    U3Full { n: u32 },
    /// Field levels times spin states, `(n, m)`.
    DickeProduct { n_max: usize, two_j: TwoJ },
}

/// Labels of a single basis vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisLabel {
    Fock { n: usize },
    Spin { two_m: i32 },
    TwoMode { n_t: u32 },
    U3 { n: u32, m: u32 },
    Dicke { n: usize, two_m: i32 },
}

impl BasisDescriptor {
    pub fn dim(&self) -> usize {
        match *self {
            BasisDescriptor::Fock1D { cutoff } => cutoff + 1,
            BasisDescriptor::Spin { two_j } => two_j.multiplicity(),
            BasisDescriptor::TwoMode { n } => n as usize + 1,
            BasisDescriptor::U3Block { n, l } => {
                if l.unsigned_abs() > n {
                    0
                } else {
                    ((n - l.unsigned_abs()) / 2) as usize + 1
                }
            }
            BasisDescriptor::U3Full { n } => (n as usize + 1) * (n as usize + 2) / 2,
            BasisDescriptor::DickeProduct { n_max, two_j } => (n_max + 1) * two_j.multiplicity(),
        }
    }

    pub fn label(&self, index: usize) -> BasisLabel {
        assert!(index < self.dim(), "basis index out of range");
        match *self {
            BasisDescriptor::Fock1D { .. } => BasisLabel::Fock { n: index },
            BasisDescriptor::Spin { two_j } => BasisLabel::Spin {
                two_m: 2 * index as i32 - two_j.0 as i32,
            },
            BasisDescriptor::TwoMode { .. } => BasisLabel::TwoMode { n_t: index as u32 },
            BasisDescriptor::U3Block { l, .. } => {
                let n = l.unsigned_abs() + 2 * index as u32;
                BasisLabel::U3 {
                    n,
                    m: ((n as i32 - l) / 2) as u32,
                }
            }
            BasisDescriptor::U3Full { .. } => {
                // index = n(n+1)/2 + m
                let mut n = 0u32;
                while ((n + 1) * (n + 2) / 2) as usize <= index {
                    n += 1;
                }
                BasisLabel::U3 {
                    n,
                    m: (index - (n * (n + 1) / 2) as usize) as u32,
                }
            }
            BasisDescriptor::DickeProduct { two_j, .. } => {
                let mult = two_j.multiplicity();
                BasisLabel::Dicke {
                    n: index / mult,
                    two_m: 2 * (index % mult) as i32 - two_j.0 as i32,
                }
            }
        }
    }

    /// Oscillator level used to measure truncation tails, for truncated
    /// bases only.
    pub fn truncation_level(&self, index: usize) -> Option<usize> {
        match *self {
            BasisDescriptor::Fock1D { .. } => Some(index),
            BasisDescriptor::DickeProduct { two_j, .. } => Some(index / two_j.multiplicity()),
            _ => None,
        }
    }

    /// Highest oscillator level of a truncated basis.
    pub fn truncation_cutoff(&self) -> Option<usize> {
        match *self {
            BasisDescriptor::Fock1D { cutoff } => Some(cutoff),
            BasisDescriptor::DickeProduct { n_max, .. } => Some(n_max),
            _ => None,
        }
    }
}

/// Affine scaling applied when storing a Hamiltonian: the stored matrix
/// equals the physical operator divided by `factor`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleNote {
    pub factor: f64,
    pub note: String,
}

impl ScaleNote {
    pub fn identity() -> Self {
        ScaleNote {
            factor: 1.0,
            note: "unscaled".into(),
        }
    }
}

/// Dense real-symmetric Hamiltonian in an explicit basis.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianMatrix {
    pub matrix: DMatrix<f64>,
    pub basis: BasisDescriptor,
    pub params: ModelParams,
    pub scale: ScaleNote,
}

impl HamiltonianMatrix {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Diagonal parity signs `S` with `S H S = H`, for the model instances
    /// that conserve a parity: cusp with `v = 0`, Dicke, LMG and IBM-LMG with
    /// `y = 0`.
    pub fn parity_signs(&self) -> Option<Vec<f64>> {
        let sign = |k: usize| if k % 2 == 0 { 1.0 } else { -1.0 };
        match (self.params, self.basis) {
            (ModelParams::Cusp { v, .. }, _) if v != 0.0 => None,
            (ModelParams::IbmLmg { y, .. }, _) if y != 0.0 => None,
            (ModelParams::Vibron2D { .. }, _) => None,
            (_, BasisDescriptor::DickeProduct { two_j, .. }) => {
                let mult = two_j.multiplicity();
                // (-1)^(n + m + j) = (-1)^(n + i) with i = m + j
                Some((0..self.dim()).map(|k| sign(k / mult + k % mult)).collect())
            }
            _ => Some((0..self.dim()).map(sign).collect()),
        }
    }

    /// Maximum absolute row sum.
    pub fn inf_norm(&self) -> f64 {
        inf_norm(&self.matrix)
    }
}

pub(crate) fn inf_norm(m: &DMatrix<f64>) -> f64 {
    m.row_iter()
        .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Builds a symmetric matrix from upper-triangle entries.
pub(crate) struct SymBuilder {
    m: DMatrix<f64>,
}

impl SymBuilder {
    pub fn new(dim: usize) -> Self {
        SymBuilder {
            m: DMatrix::zeros(dim, dim),
        }
    }

    /// Adds `v` at `(i, j)` and `(j, i)` (once on the diagonal).
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        self.m[(i, j)] += v;
        if i != j {
            self.m[(j, i)] += v;
        }
    }

    pub fn finish(self) -> DMatrix<f64> {
        self.m
    }
}

/// Truncation bookkeeping of a ground state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncationInfo {
    pub converged: bool,
    pub tail_weight: f64,
    pub cutoffs_tried: Vec<usize>,
}

impl TruncationInfo {
    /// For finite-dimensional models, where no truncation applies.
    pub fn exact() -> Self {
        TruncationInfo {
            converged: true,
            tail_weight: 0.0,
            cutoffs_tried: Vec::new(),
        }
    }
}

/// Normalized ground state `psi = sum_n c_n |n>` with its energy.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundState {
    pub coefficients: DVector<f64>,
    pub energy: f64,
    /// `E1 - E0` when at least two levels were requested.
    pub gap: Option<f64>,
    pub basis: BasisDescriptor,
    pub params: ModelParams,
    pub truncation: TruncationInfo,
}

/// Weight of `coefficients` in the top 10% of oscillator levels.
pub fn tail_weight(basis: &BasisDescriptor, coefficients: &DVector<f64>) -> f64 {
    let Some(cutoff) = basis.truncation_cutoff() else {
        return 0.0;
    };
    let levels = cutoff + 1;
    let first_tail = levels - levels.div_ceil(10);
    coefficients
        .iter()
        .enumerate()
        .filter(|(i, _)| basis.truncation_level(*i).unwrap_or(0) >= first_tail)
        .map(|(_, c)| c * c)
        .sum()
}

/// Ground state (and optionally further levels) of a built matrix.
pub fn ground_state(h: &HamiltonianMatrix, tol: f64, levels: usize) -> Result<GroundState> {
    let pairs = lowest_eigenpairs(h, tol, levels.max(1))?;
    let gap = pairs.get(1).map(|p| p.energy - pairs[0].energy);
    let first = pairs.into_iter().next().expect("at least one eigenpair");
    let tail = tail_weight(&h.basis, &first.vector);
    Ok(GroundState {
        coefficients: first.vector,
        energy: first.energy,
        gap,
        basis: h.basis,
        params: h.params,
        truncation: TruncationInfo {
            converged: true,
            tail_weight: tail,
            cutoffs_tried: h.basis.truncation_cutoff().into_iter().collect(),
        },
    })
}

/// Numerical settings for [`solve_ground_state`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveSettings {
    pub eig_tol: f64,
    pub e_tol: f64,
    pub tail_tol: f64,
    pub growth_factor: f64,
    pub max_dim: usize,
    pub levels: usize,
}

impl Default for SolveSettings {
    fn default() -> Self {
        SolveSettings {
            eig_tol: 1e-10,
            e_tol: 1e-10,
            tail_tol: 1e-8,
            growth_factor: 1.5,
            max_dim: 12_000,
            levels: 1,
        }
    }
}

/// Initial oscillator cutoff for the cusp truncation loop.
pub const CUSP_SEED_CUTOFF: usize = 24;

/// Builds the model, diagonalizes it and, for the truncated models, grows
/// the cutoff until the ground state is converged.
pub fn solve_ground_state(params: &ModelParams, settings: &SolveSettings) -> Result<GroundState> {
    params.validate()?;
    let trunc = TruncationSettings {
        growth_factor: settings.growth_factor,
        e_tol: settings.e_tol,
        tail_tol: settings.tail_tol,
        max_dim: settings.max_dim,
        eig_tol: settings.eig_tol,
        levels: settings.levels,
    };
    match *params {
        ModelParams::Cusp { .. } => {
            let omega = cusp_basis_frequency(params)?;
            converge_truncation(|c| build_cusp(params, c, omega), CUSP_SEED_CUTOFF, &trunc)
        }
        ModelParams::Dicke { .. } => {
            let seed = dicke_seed_cutoff(params)?;
            converge_truncation(|c| build_dicke(params, c), seed, &trunc)
        }
        ModelParams::Lmg { .. } => ground_state(&build_lmg(params)?, settings.eig_tol, settings.levels),
        ModelParams::IbmLmg { .. } => {
            ground_state(&build_ibm_lmg(params)?, settings.eig_tol, settings.levels)
        }
        ModelParams::Vibron2D { .. } => {
            ground_state(&build_2dvm(params)?, settings.eig_tol, settings.levels)
        }
    }
}
