//! Run configuration: strict JSON parsing that reports every problem at once.

use serde_json::{json, Map, Value};
use wehrl_qpt::hamiltonians::{ModelKind, SolveSettings};
use wehrl_qpt::surfaces::LinearLink;
use wehrl_qpt::sweep::{set_size, Numerics, Trajectory};
use wehrl_qpt::{ModelParams, SweepSpec, Thresholds, TwoJ};

use crate::line::{format_line, parse_line};

/// Eigen levels computed per point when the config does not say; two give
/// the gap column.
pub const DEFAULT_LEVELS: usize = 2;

const TOP_KEYS: &[&str] = &[
    "model",
    "params",
    "sizes",
    "trajectory",
    "eig_tol",
    "w_tol",
    "norm_tol",
    "e_tol",
    "tail_tol",
    "growth_factor",
    "max_dim",
    "max_nodes",
    "levels",
    "workers",
    "thresholds",
    "out",
    "report",
];
const TRAJECTORY_KEYS: &[&str] = &["control", "start", "stop", "steps", "line"];
const THRESHOLD_KEYS: &[&str] = &["theta_peak", "theta_return", "step_min", "step_max"];

/// A validated sweep configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub spec: SweepSpec,
    pub thresholds: Thresholds,
    pub out: Option<String>,
    pub report: Option<String>,
}

/// Every problem found in a config.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigErrors(pub Vec<String>);

impl std::fmt::Display for ConfigErrors {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "invalid configuration ({} problem(s)):", self.0.len())?;
        for e in &self.0 {
            writeln!(f, "  - {e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigErrors {}

/// Parameter names accepted under `params`, with defaults. The size
/// parameter (`K` for the cusp, `N` otherwise) comes last.
fn param_table(kind: ModelKind) -> &'static [(&'static str, f64)] {
    match kind {
        ModelKind::Cusp => &[("u", -1.0), ("v", 0.0), ("K", 0.1)],
        ModelKind::Dicke => &[("omega0", 1.0), ("omega", 1.0), ("lambda", 0.5), ("N", 10.0)],
        ModelKind::Lmg => &[("omega", 1.0), ("gamma_x", 0.0), ("gamma_y", 0.0), ("N", 20.0)],
        ModelKind::IbmLmg => &[("x", 0.5), ("y", 0.0), ("N", 40.0)],
        ModelKind::Vibron2D => &[("xi", 0.2), ("l", 0.0), ("N", 8.0)],
    }
}

fn size_key(kind: ModelKind) -> &'static str {
    param_table(kind).last().expect("non-empty").0
}

/// Builds model parameters from a complete name/value table.
fn build_params(kind: ModelKind, get: impl Fn(&str) -> f64) -> Result<ModelParams, String> {
    let n = get("N");
    let count = |v: f64| -> Result<u32, String> {
        if v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
            Ok(v as u32)
        } else {
            Err(format!("N must be a non-negative integer (got {v})"))
        }
    };
    Ok(match kind {
        ModelKind::Cusp => ModelParams::Cusp {
            u: get("u"),
            v: get("v"),
            k: get("K"),
        },
        ModelKind::Dicke => ModelParams::Dicke {
            omega0: get("omega0"),
            omega: get("omega"),
            lambda: get("lambda"),
            two_j: TwoJ(count(n)?),
        },
        ModelKind::Lmg => ModelParams::Lmg {
            omega: get("omega"),
            gamma_x: get("gamma_x"),
            gamma_y: get("gamma_y"),
            two_j: TwoJ(count(n)?),
        },
        ModelKind::IbmLmg => ModelParams::IbmLmg {
            x: get("x"),
            y: get("y"),
            n: count(n)?,
        },
        ModelKind::Vibron2D => {
            let l = get("l");
            if l.fract() != 0.0 || l.abs() > i32::MAX as f64 {
                return Err(format!("l must be an integer (got {l})"));
            }
            ModelParams::Vibron2D {
                xi: get("xi"),
                n: count(n)?,
                l: l as i32,
            }
        }
    })
}

/// Name/value pairs of `params`, size parameter last.
pub fn param_values(p: &ModelParams) -> Vec<(&'static str, f64)> {
    match *p {
        ModelParams::Cusp { u, v, k } => vec![("u", u), ("v", v), ("K", k)],
        ModelParams::Dicke {
            omega0,
            omega,
            lambda,
            two_j,
        } => vec![("omega0", omega0), ("omega", omega), ("lambda", lambda), ("N", two_j.0 as f64)],
        ModelParams::Lmg {
            omega,
            gamma_x,
            gamma_y,
            two_j,
        } => vec![("omega", omega), ("gamma_x", gamma_x), ("gamma_y", gamma_y), ("N", two_j.0 as f64)],
        ModelParams::IbmLmg { x, y, n } => vec![("x", x), ("y", y), ("N", n as f64)],
        ModelParams::Vibron2D { xi, n, l } => vec![("xi", xi), ("l", l as f64), ("N", n as f64)],
    }
}

fn unknown_keys(obj: &Map<String, Value>, allowed: &[&str], context: &str, errors: &mut Vec<String>) {
    for key in obj.keys() {
        if !allowed.contains(&key.as_str()) {
            errors.push(format!("unknown key '{key}' in {context} (allowed: {})", allowed.join(", ")));
        }
    }
}

fn number(v: &Value, what: &str, errors: &mut Vec<String>) -> Option<f64> {
    match v.as_f64() {
        Some(x) => Some(x),
        None => {
            errors.push(format!("{what} must be a number (got {v})"));
            None
        }
    }
}

fn count(v: &Value, what: &str, errors: &mut Vec<String>) -> Option<usize> {
    match v.as_u64() {
        Some(x) => Some(x as usize),
        None => {
            errors.push(format!("{what} must be a non-negative integer (got {v})"));
            None
        }
    }
}

fn positive(obj: &Map<String, Value>, key: &str, default: f64, errors: &mut Vec<String>) -> f64 {
    match obj.get(key) {
        None => default,
        Some(v) => match number(v, key, errors) {
            Some(x) if x > 0.0 && x.is_finite() => x,
            Some(x) => {
                errors.push(format!("{key} must be positive and finite (got {x})"));
                default
            }
            None => default,
        },
    }
}

/// Parses and validates a sweep config.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigErrors> {
    let root: Value = serde_json::from_str(text).map_err(|e| ConfigErrors(vec![format!("malformed JSON: {e}")]))?;
    let Some(obj) = root.as_object() else {
        return Err(ConfigErrors(vec!["config must be a JSON object".into()]));
    };
    let mut errors = Vec::new();
    unknown_keys(obj, TOP_KEYS, "config", &mut errors);

    let kind = match obj.get("model") {
        None => {
            errors.push("missing key 'model'".into());
            None
        }
        Some(Value::String(tag)) => {
            let k = ModelKind::from_tag(tag);
            if k.is_none() {
                let tags: Vec<&str> = ModelKind::ALL.iter().map(|k| k.tag()).collect();
                errors.push(format!("unknown model tag '{tag}' (expected one of {})", tags.join(", ")));
            }
            k
        }
        Some(v) => {
            errors.push(format!("model must be a string (got {v})"));
            None
        }
    };

    // Model parameters, defaults filled in.
    let mut values: Vec<(&'static str, f64)> = kind.map(|k| param_table(k).to_vec()).unwrap_or_default();
    let mut size_given = None;
    match obj.get("params") {
        None => {}
        Some(Value::Object(p)) => {
            if let Some(k) = kind {
                let names: Vec<&str> = param_table(k).iter().map(|(n, _)| *n).collect();
                unknown_keys(p, &names, "params", &mut errors);
                for (name, slot) in values.iter_mut() {
                    if let Some(x) = p.get(*name).and_then(|v| number(v, &format!("params.{name}"), &mut errors)) {
                        *slot = x;
                        if *name == size_key(k) {
                            size_given = Some(x);
                        }
                    }
                }
            }
        }
        Some(v) => errors.push(format!("params must be an object (got {v})")),
    }

    let sizes: Vec<f64> = match obj.get("sizes") {
        Some(Value::Array(a)) => {
            if a.is_empty() {
                errors.push("sizes must not be empty".into());
            }
            a.iter().filter_map(|v| number(v, "sizes entry", &mut errors)).collect()
        }
        Some(v) => {
            errors.push(format!("sizes must be an array of numbers (got {v})"));
            Vec::new()
        }
        None => match size_given {
            Some(s) => vec![s],
            None => {
                errors.push("missing key 'sizes'".into());
                Vec::new()
            }
        },
    };

    let base = kind.and_then(|k| match build_params(k, |n| values.iter().find(|(m, _)| *m == n).map_or(0.0, |x| x.1)) {
        Ok(p) => Some(p),
        Err(e) => {
            errors.push(format!("params: {e}"));
            None
        }
    });

    // Model invariants at the configured parameters, for every size.
    if let Some(base) = &base {
        let check_sizes: Vec<f64> = if sizes.is_empty() { size_given.into_iter().collect() } else { sizes.clone() };
        for &s in &check_sizes {
            match set_size(base, s) {
                Ok(p) => errors.extend(p.violations().into_iter().map(|v| format!("size {s}: {v}"))),
                Err(e) => errors.push(e.to_string()),
            }
        }
    }

    let trajectory = match obj.get("trajectory") {
        None => {
            errors.push("missing key 'trajectory'".into());
            None
        }
        Some(Value::Object(t)) => parse_trajectory(t, &mut errors),
        Some(v) => {
            errors.push(format!("trajectory must be an object (got {v})"));
            None
        }
    };

    let defaults = SolveSettings::default();
    let num_defaults = Numerics::default();
    let solve = SolveSettings {
        eig_tol: positive(obj, "eig_tol", defaults.eig_tol, &mut errors),
        e_tol: positive(obj, "e_tol", defaults.e_tol, &mut errors),
        tail_tol: positive(obj, "tail_tol", defaults.tail_tol, &mut errors),
        growth_factor: positive(obj, "growth_factor", defaults.growth_factor, &mut errors),
        max_dim: obj.get("max_dim").and_then(|v| count(v, "max_dim", &mut errors)).unwrap_or(defaults.max_dim),
        levels: obj.get("levels").and_then(|v| count(v, "levels", &mut errors)).unwrap_or(DEFAULT_LEVELS),
    };
    if solve.growth_factor <= 1.0 {
        errors.push(format!("growth_factor must exceed 1 (got {})", solve.growth_factor));
    }
    if solve.levels == 0 {
        errors.push("levels must be at least 1".into());
    }
    let numerics = Numerics {
        solve,
        w_tol: positive(obj, "w_tol", num_defaults.w_tol, &mut errors),
        norm_tol: positive(obj, "norm_tol", num_defaults.norm_tol, &mut errors),
        max_nodes: obj
            .get("max_nodes")
            .and_then(|v| count(v, "max_nodes", &mut errors))
            .unwrap_or(num_defaults.max_nodes),
        workers: obj.get("workers").and_then(|v| count(v, "workers", &mut errors)).unwrap_or(0),
    };

    let thresholds = match obj.get("thresholds") {
        None => Thresholds::default(),
        Some(Value::Object(t)) => {
            unknown_keys(t, THRESHOLD_KEYS, "thresholds", &mut errors);
            let d = Thresholds::default();
            Thresholds {
                theta_peak: positive(t, "theta_peak", d.theta_peak, &mut errors),
                theta_return: positive(t, "theta_return", d.theta_return, &mut errors),
                step_min: positive(t, "step_min", d.step_min, &mut errors),
                step_max: positive(t, "step_max", d.step_max, &mut errors),
            }
        }
        Some(v) => {
            errors.push(format!("thresholds must be an object (got {v})"));
            Thresholds::default()
        }
    };
    if thresholds.step_min > thresholds.step_max {
        errors.push("thresholds.step_min exceeds thresholds.step_max".into());
    }

    let path = |key: &str, errors: &mut Vec<String>| match obj.get(key) {
        None => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(v) => {
            errors.push(format!("{key} must be a string path (got {v})"));
            None
        }
    };
    let out = path("out", &mut errors);
    let report = path("report", &mut errors);

    let (Some(base), Some(trajectory)) = (base, trajectory) else {
        return Err(ConfigErrors(errors));
    };
    let spec = SweepSpec {
        base,
        trajectory,
        sizes,
        numerics,
    };
    if errors.is_empty() {
        errors.extend(spec.violations());
    }
    if !errors.is_empty() {
        errors.dedup();
        return Err(ConfigErrors(errors));
    }
    Ok(RunConfig {
        spec,
        thresholds,
        out,
        report,
    })
}

fn parse_trajectory(t: &Map<String, Value>, errors: &mut Vec<String>) -> Option<Trajectory> {
    unknown_keys(t, TRAJECTORY_KEYS, "trajectory", errors);
    let mut missing = |key: &str| {
        let v = t.get(key);
        if v.is_none() {
            errors.push(format!("missing key 'trajectory.{key}'"));
        }
        v
    };
    let control = missing("control").cloned();
    let start = missing("start").cloned();
    let stop = missing("stop").cloned();
    let steps = missing("steps").cloned();
    let control = match control {
        Some(Value::String(s)) => Some(s),
        Some(v) => {
            errors.push(format!("trajectory.control must be a string (got {v})"));
            None
        }
        None => None,
    };
    let start = start.and_then(|v| number(&v, "trajectory.start", errors));
    let stop = stop.and_then(|v| number(&v, "trajectory.stop", errors));
    let steps = steps.and_then(|v| count(&v, "trajectory.steps", errors));
    let link: Option<LinearLink> = match t.get("line") {
        None => None,
        Some(Value::String(s)) => match (&control, parse_line(s)) {
            (_, Err(e)) => {
                errors.push(format!("trajectory.line: {e}"));
                None
            }
            (Some(c), Ok((link, var))) if &var != c => {
                errors.push(format!("trajectory.line must be written in the control '{c}' (found '{var}')"));
                Some(link)
            }
            (_, Ok((link, _))) => Some(link),
        },
        Some(v) => {
            errors.push(format!("trajectory.line must be a string (got {v})"));
            None
        }
    };
    Some(Trajectory {
        control: control?,
        start: start?,
        stop: stop?,
        steps: steps?,
        link,
    })
}

/// The fully materialized config in the input schema; parsing it back
/// gives the same run.
pub fn echo(cfg: &RunConfig) -> Value {
    let spec = &cfg.spec;
    let kind = spec.base.kind();
    let mut params = Map::new();
    let pv = param_values(&spec.base);
    for (name, v) in &pv[..pv.len() - 1] {
        params.insert((*name).into(), json!(v));
    }
    let t = &spec.trajectory;
    let mut traj = json!({
        "control": t.control,
        "start": t.start,
        "stop": t.stop,
        "steps": t.steps,
    });
    if let Some(link) = &t.link {
        traj["line"] = json!(format_line(link, &t.control));
    }
    let n = &spec.numerics;
    json!({
        "model": kind.tag(),
        "params": params,
        "sizes": spec.sizes,
        "trajectory": traj,
        "eig_tol": n.solve.eig_tol,
        "e_tol": n.solve.e_tol,
        "tail_tol": n.solve.tail_tol,
        "growth_factor": n.solve.growth_factor,
        "max_dim": n.solve.max_dim,
        "levels": n.solve.levels,
        "w_tol": n.w_tol,
        "norm_tol": n.norm_tol,
        "max_nodes": n.max_nodes,
        "workers": n.workers,
        "thresholds": {
            "theta_peak": cfg.thresholds.theta_peak,
            "theta_return": cfg.thresholds.theta_return,
            "step_min": cfg.thresholds.step_min,
            "step_max": cfg.thresholds.step_max,
        },
    })
}

/// Model parameters for a single state (no trajectory), as used by the
/// `husimi` subcommand: `{"model": ..., "params": {...}}`.
pub fn parse_state(obj: &Map<String, Value>, errors: &mut Vec<String>) -> Option<ModelParams> {
    let kind = match obj.get("model").and_then(Value::as_str) {
        Some(tag) => match ModelKind::from_tag(tag) {
            Some(k) => k,
            None => {
                errors.push(format!("unknown model tag '{tag}'"));
                return None;
            }
        },
        None => {
            errors.push("missing string key 'model'".into());
            return None;
        }
    };
    let mut values: Vec<(&'static str, f64)> = param_table(kind).to_vec();
    match obj.get("params") {
        None => {}
        Some(Value::Object(p)) => {
            let names: Vec<&str> = values.iter().map(|(n, _)| *n).collect();
            unknown_keys(p, &names, "params", errors);
            for (name, slot) in values.iter_mut() {
                if let Some(x) = p.get(*name).and_then(|v| number(v, &format!("params.{name}"), errors)) {
                    *slot = x;
                }
            }
        }
        Some(v) => errors.push(format!("params must be an object (got {v})")),
    }
    match build_params(kind, |n| values.iter().find(|(m, _)| *m == n).map_or(0.0, |x| x.1)) {
        Ok(p) => {
            errors.extend(p.violations());
            Some(p)
        }
        Err(e) => {
            errors.push(format!("params: {e}"));
            None
        }
    }
}
