//! Transition-order classification from Wehrl-entropy curves.
//!
//! A first-order transition shows up as a peak that returns to both
//! plateaus; a second-order one as a monotone step of height close to
//! `ln 2` (the cat-state offset).

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use super::{size_rank, SweepResult};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Order {
    First,
    Second,
    Ambiguous,
}

/// Classifier thresholds, in entropy units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Thresholds {
    /// Minimum peak height above the higher plateau.
    pub theta_peak: f64,
    /// How close the curve must come back to each plateau after a peak.
    pub theta_return: f64,
    pub step_min: f64,
    pub step_max: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            theta_peak: 0.3 * LN_2,
            theta_return: 0.15 * LN_2,
            step_min: 0.5 * LN_2,
            step_max: 1.5 * LN_2,
        }
    }
}

pub const MIN_POINTS: usize = 8;

/// Classification of a single curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveReport {
    pub size: f64,
    pub order: Order,
    pub critical_estimate: Option<f64>,
    pub plateau_left: f64,
    pub plateau_right: f64,
    pub step_height: f64,
    pub peak_height: f64,
    pub transition_width: Option<f64>,
    pub diagnostics: Vec<String>,
}

/// Classification of a whole sweep. Headline values come from the largest
/// size; `per_size` is ordered by increasing size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionReport {
    pub order: Order,
    pub critical_estimate: Option<f64>,
    pub plateau_left: f64,
    pub plateau_right: f64,
    pub step_height: f64,
    pub peak_height: f64,
    pub transition_width: Option<f64>,
    pub per_size: Vec<CurveReport>,
    pub sharpening: Option<Sharpening>,
}

fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        0.5 * (s[n / 2 - 1] + s[n / 2])
    }
}

/// Control value where the segment `(c0, w0)-(c1, w1)` crosses `level`.
fn crossing(c0: f64, w0: f64, c1: f64, w1: f64, level: f64) -> f64 {
    if w1 == w0 {
        0.5 * (c0 + c1)
    } else {
        c0 + (level - w0) / (w1 - w0) * (c1 - c0)
    }
}

/// Classifies one curve `w(control)` in the given point order; plateaus
/// are the medians of the first and last 10% of points.
pub fn classify_curve(size: f64, control: &[f64], w: &[f64], th: &Thresholds) -> Result<CurveReport> {
    let n = w.len();
    if n < MIN_POINTS || control.len() != n {
        return Err(Error::TooFewPoints {
            needed: MIN_POINTS,
            got: n.min(control.len()),
        });
    }
    let edge = (n / 10).max(1);
    let pl = median(&w[..edge]);
    let pr = median(&w[n - edge..]);
    let delta = pr - pl;
    let top = pl.max(pr);
    let (imax, wmax) = w
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
    let peak_height = wmax - top;
    let mut diagnostics = Vec::new();

    let mut report = CurveReport {
        size,
        order: Order::Ambiguous,
        critical_estimate: None,
        plateau_left: pl,
        plateau_right: pr,
        step_height: delta,
        peak_height,
        transition_width: None,
        diagnostics: Vec::new(),
    };

    if peak_height > th.theta_peak {
        let left_min = w[..imax].iter().copied().fold(f64::INFINITY, f64::min);
        let right_min = w[imax + 1..].iter().copied().fold(f64::INFINITY, f64::min);
        let returns_left = left_min <= pl + th.theta_return;
        let returns_right = right_min <= pr + th.theta_return;
        if returns_left && returns_right {
            let level = wmax - 0.5 * peak_height;
            let mut lo = control[0];
            for i in (0..imax).rev() {
                if w[i] < level {
                    lo = crossing(control[i], w[i], control[i + 1], w[i + 1], level);
                    break;
                }
            }
            let mut hi = control[n - 1];
            for i in imax + 1..n {
                if w[i] < level {
                    hi = crossing(control[i - 1], w[i - 1], control[i], w[i], level);
                    break;
                }
            }
            report.order = Order::First;
            report.critical_estimate = Some(control[imax]);
            report.transition_width = Some((hi - lo).abs());
            return Ok(report);
        }
        diagnostics.push(format!(
            "peak of height {peak_height:.4} does not return to the plateaus (left {returns_left}, right {returns_right})"
        ));
    } else {
        diagnostics.push(format!("no peak: height {peak_height:.4} <= {:.4}", th.theta_peak));
    }

    let step_ok = (th.step_min..=th.step_max).contains(&delta.abs());
    if step_ok && peak_height <= th.theta_peak {
        // steepest centered slope
        let mut best = (0usize, f64::NEG_INFINITY);
        for i in 0..n {
            let (a, b) = (i.saturating_sub(1), (i + 1).min(n - 1));
            let slope = ((w[b] - w[a]) / (control[b] - control[a])).abs();
            if slope > best.1 {
                best = (i, slope);
            }
        }
        let lo_level = pl + 0.1 * delta;
        let hi_level = pl + 0.9 * delta;
        // first crossings in point order
        let first_cross = |level: f64| -> Option<f64> {
            (1..n).find_map(|i| {
                let (a, b) = (w[i - 1] - level, w[i] - level);
                (a == 0.0 || a.signum() != b.signum()).then(|| crossing(control[i - 1], w[i - 1], control[i], w[i], level))
            })
        };
        report.order = Order::Second;
        report.critical_estimate = Some(control[best.0]);
        report.transition_width = match (first_cross(lo_level), first_cross(hi_level)) {
            (Some(a), Some(b)) => Some((b - a).abs()),
            _ => None,
        };
        return Ok(report);
    }
    diagnostics.push(format!(
        "no step: |dW| = {:.4} outside [{:.4}, {:.4}]",
        delta.abs(),
        th.step_min,
        th.step_max
    ));
    report.diagnostics = diagnostics;
    Ok(report)
}

/// Width trend across sizes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sharpening {
    pub sharpens: bool,
    pub widths: Vec<Option<f64>>,
    /// Set when the sizes disagree on the order.
    pub mismatched_orders: bool,
}

/// Whether transition widths strictly decrease along `reports` (ordered by
/// increasing size).
pub fn sharpening(reports: &[CurveReport]) -> Result<Sharpening> {
    if reports.len() < 2 {
        return Err(Error::TooFewPoints {
            needed: 2,
            got: reports.len(),
        });
    }
    let widths: Vec<Option<f64>> = reports.iter().map(|r| r.transition_width).collect();
    let mismatched = reports.iter().any(|r| r.order != reports[0].order || r.order == Order::Ambiguous);
    let decreasing = widths.windows(2).all(|p| match (p[0], p[1]) {
        (Some(a), Some(b)) => b < a,
        _ => false,
    });
    Ok(Sharpening {
        sharpens: !mismatched && decreasing,
        widths,
        mismatched_orders: mismatched,
    })
}

/// Classifies every size of a sweep and combines the results.
pub fn classify_order(result: &SweepResult, th: &Thresholds) -> Result<TransitionReport> {
    let mut groups = result.by_size();
    if groups.is_empty() {
        return Err(Error::TooFewPoints {
            needed: MIN_POINTS,
            got: 0,
        });
    }
    let kind = result.rows[0].model;
    groups.sort_by(|a, b| size_rank(kind, a.0).total_cmp(&size_rank(kind, b.0)));
    let per_size = groups
        .iter()
        .map(|(size, rows)| {
            let c: Vec<f64> = rows.iter().map(|r| r.control_value).collect();
            let w: Vec<f64> = rows.iter().map(|r| r.wehrl).collect();
            classify_curve(*size, &c, &w, th)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(combine(per_size))
}

/// Merges per-size reports (ordered by increasing size).
pub fn combine(per_size: Vec<CurveReport>) -> TransitionReport {
    let last = per_size.last().expect("at least one size").clone();
    let agree = per_size.iter().all(|r| r.order == last.order);
    let sharp = sharpening(&per_size).ok();
    TransitionReport {
        order: if agree { last.order } else { Order::Ambiguous },
        critical_estimate: last.critical_estimate,
        plateau_left: last.plateau_left,
        plateau_right: last.plateau_right,
        step_height: last.step_height,
        peak_height: last.peak_height,
        transition_width: last.transition_width,
        per_size,
        sharpening: sharp,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize, a: f64, b: f64) -> Vec<f64> {
        (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn logistic_step_is_second_order() {
        let c = grid(41, -3.0, 1.0);
        let w: Vec<f64> = c.iter().map(|x| 0.9 + LN_2 / (1.0 + ((x + 1.0) / 0.1).exp())).collect();
        let r = classify_curve(20.0, &c, &w, &Thresholds::default()).unwrap();
        assert_eq!(r.order, Order::Second);
        assert!((r.critical_estimate.unwrap() + 1.0).abs() <= 0.1 + 1e-12);
    }

    #[test]
    fn gaussian_bump_is_first_order() {
        let c = grid(41, -3.0, -1.0);
        let w: Vec<f64> = c.iter().map(|x| 1.0 + LN_2 * (-((x + 2.0) / 0.1).powi(2)).exp()).collect();
        let r = classify_curve(20.0, &c, &w, &Thresholds::default()).unwrap();
        assert_eq!(r.order, Order::First);
        assert!((r.critical_estimate.unwrap() + 2.0).abs() < 1e-12);
        let fwhm = 2.0 * 0.1 * LN_2.sqrt();
        assert!((r.transition_width.unwrap() - fwhm).abs() < 0.05);
    }

    #[test]
    fn flat_curve_is_ambiguous() {
        let c = grid(20, 0.0, 1.0);
        let w = vec![1.0; 20];
        let r = classify_curve(1.0, &c, &w, &Thresholds::default()).unwrap();
        assert_eq!(r.order, Order::Ambiguous);
        assert!(!r.diagnostics.is_empty());
    }

    #[test]
    fn too_few_points() {
        assert!(matches!(
            classify_curve(1.0, &[0.0; 5], &[0.0; 5], &Thresholds::default()),
            Err(Error::TooFewPoints { needed: 8, got: 5 })
        ));
    }

    #[test]
    fn reversal_swaps_plateaus() {
        let mut c = grid(41, -3.0, 1.0);
        let mut w: Vec<f64> = c.iter().map(|x| 0.9 + LN_2 / (1.0 + ((x + 1.0) / 0.2).exp())).collect();
        let a = classify_curve(1.0, &c, &w, &Thresholds::default()).unwrap();
        c.reverse();
        w.reverse();
        let b = classify_curve(1.0, &c, &w, &Thresholds::default()).unwrap();
        assert_eq!(a.order, b.order);
        assert_eq!(a.critical_estimate, b.critical_estimate);
        assert_eq!(a.plateau_left, b.plateau_right);
        assert_eq!(a.plateau_right, b.plateau_left);
    }

    #[test]
    fn identical_curves_do_not_sharpen() {
        let c = grid(41, -3.0, -1.0);
        let w: Vec<f64> = c.iter().map(|x| 1.0 + LN_2 * (-((x + 2.0) / 0.2).powi(2)).exp()).collect();
        let r = classify_curve(1.0, &c, &w, &Thresholds::default()).unwrap();
        let s = sharpening(&[r.clone(), r]).unwrap();
        assert!(!s.sharpens);
    }
}
