use super::{ground_state, GroundState, HamiltonianMatrix};
use crate::{Error, Result};

/// Controls for [`converge_truncation`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationSettings {
    pub growth_factor: f64,
    pub e_tol: f64,
    pub tail_tol: f64,
    pub max_dim: usize,
    pub eig_tol: f64,
    pub levels: usize,
}

impl Default for TruncationSettings {
    fn default() -> Self {
        TruncationSettings {
            growth_factor: 1.5,
            e_tol: 1e-10,
            tail_tol: 1e-8,
            max_dim: 12_000,
            eig_tol: 1e-10,
            levels: 1,
        }
    }
}

/// Grows the oscillator cutoff by `growth_factor` until a ground state is
/// certified.
///
/// The state at cutoff `c` is accepted once its weight in the top 10% of
/// levels is at most `tail_tol` and the next larger cutoff reproduces its
/// energy to `e_tol`. The returned state is the accepted one at cutoff `c`;
/// `cutoffs_tried` lists every cutoff diagonalized, including the
/// confirming one.
pub fn converge_truncation<F>(builder: F, seed: usize, settings: &TruncationSettings) -> Result<GroundState>
where
    F: Fn(usize) -> Result<HamiltonianMatrix>,
{
    if !(settings.growth_factor > 1.0) {
        return Err(Error::InvalidParams(format!(
            "growth factor must exceed 1 (got {})",
            settings.growth_factor
        )));
    }
    let next_cutoff = |c: usize| ((c as f64 * settings.growth_factor).ceil() as usize).max(c + 1);

    let mut tried = Vec::new();
    let mut cutoff = seed;
    let mut previous: Option<GroundState> = None;
    let mut last_delta = f64::INFINITY;
    loop {
        let h = builder(cutoff)?;
        if h.dim() > settings.max_dim {
            return Err(Error::TruncationConvergence {
                max_dim: settings.max_dim,
                cutoffs_tried: tried,
                last_delta,
                tail_weight: previous.map_or(f64::NAN, |p| p.truncation.tail_weight),
            });
        }
        tried.push(cutoff);
        let gs = ground_state(&h, settings.eig_tol, settings.levels)?;
        if let Some(mut prev) = previous.take() {
            last_delta = (gs.energy - prev.energy).abs();
            if last_delta <= settings.e_tol && prev.truncation.tail_weight <= settings.tail_tol {
                prev.truncation.converged = true;
                prev.truncation.cutoffs_tried = tried;
                return Ok(prev);
            }
        }
        previous = Some(gs);
        cutoff = next_cutoff(cutoff);
    }
}
