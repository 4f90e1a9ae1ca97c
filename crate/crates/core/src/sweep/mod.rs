//! Control-parameter sweeps over several system sizes.
//!
//! Every (size, control value) point is an independent job: build the
//! Hamiltonian, converge its ground state and refine the Wehrl entropy.
//! Jobs run on a worker pool and write into pre-allocated slots, so rows
//! come out in the same order whatever the schedule.

pub mod classify;

use std::sync::atomic::{AtomicBool, Ordering as AtomicOrdering};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::hamiltonians::{solve_ground_state, ModelKind, ModelParams, SolveSettings, TwoJ};
use crate::phasespace::{refine_until, GridFamily, StateVector};
use crate::surfaces::{critical_point, CriticalInfo, LinearLink};
use crate::{Error, Result};

pub use classify::{classify_curve, classify_order, sharpening, Sharpening};

/// Straight-line path through parameter space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub control: String,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    /// Optional second parameter tied linearly to the control.
    #[serde(default)]
    pub link: Option<LinearLink>,
}

impl Trajectory {
    /// Control values `start (1 - t) + stop t`, `t = k/(steps-1)`; the
    /// endpoints and any exactly representable interior point (such as 0 on
    /// a symmetric range with an odd step count) are hit exactly.
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|k| {
                let t = k as f64 / last;
                self.start * (1.0 - t) + self.stop * t
            })
            .collect()
    }

    pub fn step(&self) -> f64 {
        (self.stop - self.start).abs() / (self.steps.max(2) - 1) as f64
    }
}

/// Numerical controls of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Numerics {
    pub solve: SolveSettings,
    pub w_tol: f64,
    pub norm_tol: f64,
    pub max_nodes: usize,
    /// Worker threads; 0 uses every available core.
    pub workers: usize,
}

impl Default for Numerics {
    fn default() -> Self {
        Numerics {
            solve: SolveSettings::default(),
            w_tol: 1e-6,
            norm_tol: 1e-6,
            max_nodes: 50_000_000,
            workers: 0,
        }
    }
}

/// A sweep: base parameters, a trajectory and the system sizes.
///
/// Sizes are particle numbers `N` (`2j` for Dicke and LMG), or the
/// classicality constant `K` for the cusp, where smaller `K` plays the
/// role of a larger system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub base: ModelParams,
    pub trajectory: Trajectory,
    pub sizes: Vec<f64>,
    #[serde(default)]
    pub numerics: Numerics,
}

/// Parameter names a trajectory may vary, per model.
pub fn control_names(kind: ModelKind) -> &'static [&'static str] {
    match kind {
        ModelKind::Cusp => &["u", "v"],
        ModelKind::Dicke => &["lambda", "omega", "omega0"],
        ModelKind::Lmg => &["gamma_x", "gamma_y", "omega"],
        ModelKind::IbmLmg => &["x", "y"],
        ModelKind::Vibron2D => &["xi"],
    }
}

/// Returns `params` with parameter `name` set to `value`.
pub fn set_param(params: &ModelParams, name: &str, value: f64) -> Result<ModelParams> {
    let mut p = *params;
    let slot: Option<&mut f64> = match (&mut p, name) {
        (ModelParams::Cusp { u, .. }, "u") => Some(u),
        (ModelParams::Cusp { v, .. }, "v") => Some(v),
        (ModelParams::Dicke { lambda, .. }, "lambda") => Some(lambda),
        (ModelParams::Dicke { omega, .. }, "omega") => Some(omega),
        (ModelParams::Dicke { omega0, .. }, "omega0") => Some(omega0),
        (ModelParams::Lmg { gamma_x, .. }, "gamma_x") => Some(gamma_x),
        (ModelParams::Lmg { gamma_y, .. }, "gamma_y") => Some(gamma_y),
        (ModelParams::Lmg { omega, .. }, "omega") => Some(omega),
        (ModelParams::IbmLmg { x, .. }, "x") => Some(x),
        (ModelParams::IbmLmg { y, .. }, "y") => Some(y),
        (ModelParams::Vibron2D { xi, .. }, "xi") => Some(xi),
        _ => None,
    };
    match slot {
        Some(s) => {
            *s = value;
            Ok(p)
        }
        None => Err(Error::InvalidParams(format!(
            "unknown control '{name}' for model {}",
            params.kind().tag()
        ))),
    }
}

/// Returns `params` at system size `size`.
pub fn set_size(params: &ModelParams, size: f64) -> Result<ModelParams> {
    let mut p = *params;
    if let ModelParams::Cusp { k, .. } = &mut p {
        *k = size;
        return Ok(p);
    }
    if !(size >= 1.0 && size.fract() == 0.0 && size <= u32::MAX as f64) {
        return Err(Error::InvalidParams(format!(
            "size of model {} must be a positive integer (got {size})",
            params.kind().tag()
        )));
    }
    let n = size as u32;
    match &mut p {
        ModelParams::Dicke { two_j, .. } | ModelParams::Lmg { two_j, .. } => *two_j = TwoJ(n),
        ModelParams::IbmLmg { n: nn, .. } | ModelParams::Vibron2D { n: nn, .. } => *nn = n,
        ModelParams::Cusp { .. } => unreachable!(),
    }
    Ok(p)
}

/// Ordering key of sizes: `N`, or `1/K` for the cusp.
pub fn size_rank(kind: ModelKind, size: f64) -> f64 {
    if kind == ModelKind::Cusp {
        1.0 / size
    } else {
        size
    }
}

impl SweepSpec {
    /// Parameters at one point of the sweep.
    pub fn params_at(&self, size: f64, value: f64) -> Result<ModelParams> {
        let mut p = set_size(&self.base, size)?;
        p = set_param(&p, &self.trajectory.control, value)?;
        if let Some(link) = &self.trajectory.link {
            p = set_param(&p, &link.target, link.slope * value + link.intercept)?;
        }
        Ok(p)
    }

    /// Analytic critical point crossed by the trajectory, if known.
    pub fn critical_info(&self) -> Option<CriticalInfo> {
        let t = &self.trajectory;
        critical_point(&self.base, &t.control, t.link.as_ref(), t.start, t.stop)
    }

    /// Every violation of the spec invariants. A trajectory that misses
    /// the known critical point is a violation; one without a closed-form
    /// critical point is not.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let t = &self.trajectory;
        let kind = self.base.kind();
        if t.steps < 8 {
            out.push(format!("trajectory needs at least 8 steps (got {})", t.steps));
        }
        if !(t.start.is_finite() && t.stop.is_finite()) || t.start == t.stop {
            out.push(format!("trajectory needs distinct finite endpoints (got {} and {})", t.start, t.stop));
        }
        if !control_names(kind).contains(&t.control.as_str()) {
            out.push(format!(
                "unknown control '{}' for model {} (expected one of {:?})",
                t.control,
                kind.tag(),
                control_names(kind)
            ));
        }
        if let Some(link) = &t.link {
            if link.target == t.control {
                out.push("linked parameter must differ from the control".into());
            } else if !control_names(kind).contains(&link.target.as_str()) {
                out.push(format!("unknown linked parameter '{}' for model {}", link.target, kind.tag()));
            }
        }
        if self.sizes.is_empty() {
            out.push("at least one size is required".into());
        }
        let n = &self.numerics;
        if !(n.w_tol > 0.0) || !(n.norm_tol > 0.0) {
            out.push("w_tol and norm_tol must be positive".into());
        }
        if out.is_empty() {
            for &size in &self.sizes {
                for value in [t.start, t.stop] {
                    match self.params_at(size, value) {
                        Ok(p) => out.extend(p.violations().into_iter().map(|v| format!("size {size}, {} = {value}: {v}", t.control))),
                        Err(e) => out.push(e.to_string()),
                    }
                }
            }
        }
        out.dedup();
        out
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidParams(v.join("; ")))
        }
    }

    /// Non-fatal remarks, such as the absence of a closed-form critical
    /// point inside the trajectory.
    pub fn warnings(&self) -> Vec<String> {
        match self.critical_info() {
            Some(_) => Vec::new(),
            None => vec![format!(
                "no analytic critical point of {} known strictly inside {} in [{}, {}]",
                self.base.kind().tag(),
                self.trajectory.control,
                self.trajectory.start,
                self.trajectory.stop
            )],
        }
    }
}

/// One computed point of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub model: ModelKind,
    pub size: f64,
    pub control_name: String,
    pub control_value: f64,
    /// Ground-state energy of the physical (unscaled) Hamiltonian.
    pub energy0: f64,
    pub gap: Option<f64>,
    pub wehrl: f64,
    pub norm_deficit: f64,
    pub nodes_used: usize,
    /// Seconds spent on this point; not part of the reproducible output.
    pub wall_time: f64,
}

impl SweepRow {
    /// Equality of every field except `wall_time`.
    pub fn same_result(&self, other: &SweepRow) -> bool {
        let mut a = self.clone();
        a.wall_time = other.wall_time;
        a == *other
    }
}

/// Rows in (size, step) order. A failed sweep keeps the rows that finished
/// and marks itself `partial`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub partial: bool,
    pub failure: Option<Error>,
}

impl SweepResult {
    /// The result, or the first point failure.
    pub fn into_result(self) -> Result<SweepResult> {
        match self.failure {
            Some(e) => Err(e),
            None => Ok(self),
        }
    }

    /// Rows grouped by size in the order of first appearance.
    pub fn by_size(&self) -> Vec<(f64, Vec<&SweepRow>)> {
        let mut groups: Vec<(f64, Vec<&SweepRow>)> = Vec::new();
        for row in &self.rows {
            match groups.iter_mut().find(|(s, _)| *s == row.size) {
                Some((_, g)) => g.push(row),
                None => groups.push((row.size, vec![row])),
            }
        }
        groups
    }
}

/// Computes one sweep point.
pub fn run_point(spec: &SweepSpec, size: f64, value: f64) -> Result<SweepRow> {
    let started = Instant::now();
    let params = spec.params_at(size, value)?;
    let n = &spec.numerics;
    let gs = solve_ground_state(&params, &n.solve)?;
    let state = StateVector::from(&gs);
    let report = refine_until(&state, &GridFamily::for_basis(&gs.basis), n.w_tol, n.norm_tol, n.max_nodes)?;
    let scale = params.energy_scale();
    Ok(SweepRow {
        model: params.kind(),
        size,
        control_name: spec.trajectory.control.clone(),
        control_value: value,
        energy0: gs.energy * scale,
        gap: gs.gap.map(|g| g * scale),
        wehrl: report.w,
        norm_deficit: report.norm_deficit,
        nodes_used: report.nodes_used,
        wall_time: started.elapsed().as_secs_f64(),
    })
}

/// Runs every (size, control value) point of `spec`.
///
/// Invalid specs are rejected up front. A point failure stops the
/// remaining points; the returned result is then `partial` and carries
/// the failure of the earliest failed slot.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let values = spec.trajectory.values();
    let jobs: Vec<(f64, f64)> = spec
        .sizes
        .iter()
        .flat_map(|&s| values.iter().map(move |&v| (s, v)))
        .collect();
    let abort = AtomicBool::new(false);
    let work = || -> Vec<Option<Result<SweepRow>>> {
        jobs.par_iter()
            .with_max_len(1)
            .map(|&(size, value)| {
                if abort.load(AtomicOrdering::Relaxed) {
                    return None;
                }
                let row = run_point(spec, size, value).map_err(|e| Error::SweepPoint {
                    size,
                    control: spec.trajectory.control.clone(),
                    value,
                    source: Box::new(e),
                });
                if row.is_err() {
                    abort.store(true, AtomicOrdering::Relaxed);
                }
                Some(row)
            })
            .collect()
    };
    let slots = if spec.numerics.workers == 0 {
        work()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(spec.numerics.workers)
            .build()
            .map_err(|e| Error::InvalidParams(format!("cannot start worker pool: {e}")))?
            .install(work)
    };
    let mut rows = Vec::with_capacity(slots.len());
    let mut failure = None;
    let mut complete = true;
    for slot in slots {
        match slot {
            Some(Ok(row)) => rows.push(row),
            Some(Err(e)) => {
                complete = false;
                failure.get_or_insert(e);
            }
            None => complete = false,
        }
    }
    Ok(SweepResult {
        rows,
        partial: !complete,
        failure,
    })
}
