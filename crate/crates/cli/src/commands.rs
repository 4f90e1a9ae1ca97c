//! Subcommand implementations. Each returns the process exit code.

use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};
use wehrl_qpt::hamiltonians::{solve_ground_state, SolveSettings};
use wehrl_qpt::phasespace::{husimi, wehrl_entropy};
use wehrl_qpt::surfaces::{cusp_potential, dicke_surface, ibm_surface, lmg_surface, vibron_surface};
use wehrl_qpt::sweep::{classify_order, run_sweep};
use wehrl_qpt::{
    Complex64, Error, GridFamily, ModelKind, ModelParams, Order, PhasePoint, StateVector, SweepResult, Thresholds,
    TransitionReport, TwoJ,
};

use crate::config::{echo, parse_config, parse_state, RunConfig};
use crate::output::{fmt_f64, read_sweep_csv, sweep_record, write_header, write_rows, SWEEP_COLUMNS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_CONVERGENCE: i32 = 3;
pub const EXIT_AMBIGUOUS: i32 = 4;

/// A failure with its exit code.
#[derive(Debug, thiserror::Error)]
#[error("{message}")]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_CONFIG,
            message: message.into(),
        }
    }

    fn io(path: &Path, e: impl std::fmt::Display) -> Self {
        CliError {
            code: EXIT_IO,
            message: format!("{}: {e}", path.display()),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidParams(_) | Error::BasisMismatch(_) | Error::TooFewPoints { .. } => EXIT_CONFIG,
            _ => EXIT_CONVERGENCE,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

pub type CliResult = Result<i32, CliError>;

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

/// Where an output goes.
#[derive(Debug, Clone, Copy)]
enum Sink<'a> {
    File(&'a Path),
    Stdout,
    Stderr,
}

impl<'a> Sink<'a> {
    /// The file, or stdout when there is none.
    fn or_stdout(path: Option<&'a Path>) -> Self {
        path.map_or(Sink::Stdout, Sink::File)
    }
}

fn emit(sink: Sink<'_>, bytes: &[u8]) -> Result<(), CliError> {
    match sink {
        Sink::File(p) => fs::write(p, bytes).map_err(|e| CliError::io(p, e)),
        Sink::Stdout => std::io::stdout().write_all(bytes).map_err(|e| CliError::io(Path::new("<stdout>"), e)),
        Sink::Stderr => std::io::stderr().write_all(bytes).map_err(|e| CliError::io(Path::new("<stderr>"), e)),
    }
}

fn report_json(report: &TransitionReport) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
    s.push('\n');
    s.into_bytes()
}

fn order_code(report: &TransitionReport) -> i32 {
    if report.order == Order::Ambiguous {
        EXIT_AMBIGUOUS
    } else {
        EXIT_OK
    }
}

/// Report written when the classifier cannot run at all.
fn unclassifiable(message: String) -> Vec<u8> {
    let v = json!({"order": "ambiguous", "critical_estimate": null, "diagnostics": [message]});
    let mut s = serde_json::to_string_pretty(&v).expect("json");
    s.push('\n');
    s.into_bytes()
}

fn classify_and_write(result: &SweepResult, th: &Thresholds, report: Sink<'_>) -> CliResult {
    match classify_order(result, th) {
        Ok(r) => {
            emit(report, &report_json(&r))?;
            Ok(order_code(&r))
        }
        Err(e) => {
            eprintln!("classification failed: {e}");
            emit(report, &unclassifiable(e.to_string()))?;
            Ok(EXIT_AMBIGUOUS)
        }
    }
}

/// Overrides applied on top of a sweep config file.
#[derive(Debug, Clone, Default)]
pub struct SweepArgs {
    pub config: PathBuf,
    pub out: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub workers: Option<usize>,
    pub levels: Option<usize>,
}

/// Default report path next to the CSV: `run.csv` gives `run.report.json`.
fn report_path_for(out: &Path) -> PathBuf {
    out.with_extension("report.json")
}

fn same_file(a: &Path, b: &Path) -> bool {
    let Ok(ca) = fs::canonicalize(a) else {
        return false;
    };
    let dir = match b.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    match (fs::canonicalize(dir), b.file_name()) {
        (Ok(d), Some(n)) => d.join(n) == ca,
        _ => false,
    }
}

pub fn cmd_sweep(args: &SweepArgs) -> CliResult {
    let text = read(&args.config)?;
    let mut cfg: RunConfig = parse_config(&text).map_err(|e| CliError::config(e.to_string()))?;
    if let Some(w) = args.workers {
        cfg.spec.numerics.workers = w;
    }
    if let Some(l) = args.levels {
        if l == 0 {
            return Err(CliError::config("--levels must be at least 1"));
        }
        cfg.spec.numerics.solve.levels = l;
    }
    for w in cfg.spec.warnings() {
        eprintln!("warning: {w}");
    }
    let out = args.out.clone().or(cfg.out.clone().map(PathBuf::from));
    let report = args
        .report
        .clone()
        .or(cfg.report.clone().map(PathBuf::from))
        .or(out.as_deref().map(report_path_for));

    for p in out.iter().chain(report.iter()) {
        if same_file(&args.config, p) {
            return Err(CliError::config(format!("output {} would overwrite the config", p.display())));
        }
    }

    let result = run_sweep(&cfg.spec)?;
    let mut entries = vec![("config", echo(&cfg).to_string()), ("partial", result.partial.to_string())];
    if let Some(f) = &result.failure {
        entries.push(("failure", f.to_string()));
    }
    let mut csv = Vec::new();
    write_header(&mut csv, &entries).map_err(|e| CliError::io(Path::new("<buffer>"), e))?;
    write_rows(&mut csv, &SWEEP_COLUMNS, result.rows.iter().map(sweep_record))
        .map_err(|e| CliError::io(Path::new("<buffer>"), e))?;
    emit(Sink::or_stdout(out.as_deref()), &csv)?;

    if let Some(f) = &result.failure {
        eprintln!("sweep stopped: {f}");
        return Ok(EXIT_CONVERGENCE);
    }
    // Without a report path the CSV went to stdout; keep the report off it.
    let sink = report.as_deref().map_or(Sink::Stderr, Sink::File);
    classify_and_write(&result, &cfg.thresholds, sink)
}

pub fn cmd_classify(csv: &Path, out: Option<&Path>) -> CliResult {
    let text = read(csv)?;
    let parsed = read_sweep_csv(&text).map_err(|e| CliError::config(format!("{}: {e}", csv.display())))?;
    if parsed.entry("partial") == Some("true") {
        return Err(CliError {
            code: EXIT_CONVERGENCE,
            message: format!("{} holds a partial sweep", csv.display()),
        });
    }
    let thresholds = match parsed.config() {
        Some(Ok(v)) => match v.get("thresholds") {
            Some(t) => serde_json::from_value::<Thresholds>(t.clone())
                .map_err(|e| CliError::config(format!("thresholds in header: {e}")))?,
            None => Thresholds::default(),
        },
        Some(Err(e)) => return Err(CliError::config(e)),
        None => Thresholds::default(),
    };
    let result = SweepResult {
        rows: parsed.rows,
        partial: false,
        failure: None,
    };
    classify_and_write(&result, &thresholds, Sink::or_stdout(out))
}

/// Sample points `a:b:n` (inclusive ends) or a single value.
pub fn parse_range(text: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = text.split(':').collect();
    let num = |s: &str| -> Result<f64, String> {
        match s.trim() {
            "pi" => Ok(PI),
            "2pi" => Ok(2.0 * PI),
            "-pi" => Ok(-PI),
            t => t.parse::<f64>().map_err(|_| format!("bad number '{s}' in range '{text}'")),
        }
    };
    match parts.as_slice() {
        [x] => Ok(vec![num(x)?]),
        [a, b, n] => {
            let (a, b) = (num(a)?, num(b)?);
            let n: usize = n.trim().parse().map_err(|_| format!("bad count '{n}' in range '{text}'"))?;
            match n {
                0 => Err(format!("range '{text}' has no points")),
                1 => Ok(vec![a]),
                _ => {
                    let last = (n - 1) as f64;
                    Ok((0..n)
                        .map(|k| {
                            let t = k as f64 / last;
                            a * (1.0 - t) + b * t
                        })
                        .collect())
                }
            }
        }
        _ => Err(format!("range '{text}' is not 'start:stop:count' or a single value")),
    }
}

/// Flags of the `surface` subcommand, all as text.
#[derive(Debug, Clone, Default)]
pub struct SurfaceArgs {
    pub model: String,
    pub values: Vec<(&'static str, Option<String>)>,
    pub out: Option<PathBuf>,
}

/// Parameters and phase-space coordinates (with default ranges) of each
/// model's energy surface.
fn surface_layout(kind: ModelKind) -> (&'static [(&'static str, f64)], &'static [(&'static str, &'static str)]) {
    match kind {
        ModelKind::Cusp => (&[("u", -1.0), ("v", 0.0)], &[("x", "-2:2:401")]),
        ModelKind::Dicke => (
            &[("omega0", 1.0), ("omega", 1.0), ("lambda", 0.5), ("N", 10.0)],
            &[("alpha_re", "-3:3:61"), ("alpha_im", "0"), ("theta", "0:pi:61"), ("phi", "0")],
        ),
        ModelKind::Lmg => (&[("gamma_x", 0.0), ("gamma_y", 0.0)], &[("theta", "0:pi:91"), ("phi", "0:2pi:181")]),
        ModelKind::IbmLmg => (&[("x", 0.5), ("y", 0.0)], &[("beta", "-3:3:301")]),
        ModelKind::Vibron2D => (&[("xi", 0.2)], &[("r", "0:2:201")]),
    }
}

pub fn cmd_surface(args: &SurfaceArgs) -> CliResult {
    let kind = ModelKind::from_tag(&args.model).ok_or_else(|| CliError::config(format!("unknown model tag '{}'", args.model)))?;
    let (params, coords) = surface_layout(kind);
    let given = |name: &str| args.values.iter().find(|(n, _)| *n == name).and_then(|(_, v)| v.clone());
    let mut errors = Vec::new();
    for (name, v) in &args.values {
        if v.is_some() && !params.iter().any(|(p, _)| p == name) && !coords.iter().any(|(c, _)| c == name) {
            errors.push(format!("--{} does not apply to the {} surface", name.replace('_', "-"), kind.tag()));
        }
    }
    let mut pv = Vec::new();
    for (name, default) in params {
        match given(name).map(|s| s.parse::<f64>()) {
            None => pv.push(*default),
            Some(Ok(x)) => pv.push(x),
            Some(Err(_)) => errors.push(format!("--{name} expects a number")),
        }
    }
    let mut axes = Vec::new();
    for (name, default) in coords {
        match parse_range(&given(name).unwrap_or_else(|| default.to_string())) {
            Ok(v) => axes.push(v),
            Err(e) => errors.push(format!("--{}: {e}", name.replace('_', "-"))),
        }
    }
    if !errors.is_empty() {
        return Err(CliError::config(errors.join("\n")));
    }
    let dicke = if kind == ModelKind::Dicke {
        if pv[3] < 1.0 || pv[3].fract() != 0.0 {
            return Err(CliError::config("--n must be a positive integer"));
        }
        let p = ModelParams::Dicke {
            omega0: pv[0],
            omega: pv[1],
            lambda: pv[2],
            two_j: TwoJ(pv[3] as u32),
        };
        let v = p.violations();
        if !v.is_empty() {
            return Err(CliError::config(v.join("\n")));
        }
        Some(p)
    } else {
        None
    };

    let total: usize = axes.iter().map(Vec::len).product();
    let mut rows = Vec::with_capacity(total);
    let mut point = vec![0.0; axes.len()];
    for flat in 0..total {
        let mut rem = flat;
        for d in (0..axes.len()).rev() {
            point[d] = axes[d][rem % axes[d].len()];
            rem /= axes[d].len();
        }
        let e = match kind {
            ModelKind::Cusp => cusp_potential(point[0], pv[0], pv[1]),
            ModelKind::Dicke => dicke_surface(
                Complex64::new(point[0], point[1]),
                point[2],
                point[3],
                dicke.as_ref().expect("dicke params"),
            )?,
            ModelKind::Lmg => lmg_surface(point[0], point[1], pv[0], pv[1]),
            ModelKind::IbmLmg => ibm_surface(point[0], pv[0], pv[1]),
            ModelKind::Vibron2D => vibron_surface(point[0], pv[0]),
        };
        let mut rec: Vec<String> = point.iter().map(|x| fmt_f64(*x)).collect();
        rec.push(fmt_f64(e));
        rows.push(rec);
    }

    let mut header: Vec<&str> = coords.iter().map(|(c, _)| *c).collect();
    header.push("energy");
    let mut echo_params = Map::new();
    for ((name, _), v) in params.iter().zip(&pv) {
        echo_params.insert((*name).into(), json!(v));
    }
    let mut buf = Vec::new();
    write_header(
        &mut buf,
        &[("surface", json!({"model": kind.tag(), "params": echo_params}).to_string())],
    )
    .map_err(|e| CliError::io(Path::new("<buffer>"), e))?;
    write_rows(&mut buf, &header, rows).map_err(|e| CliError::io(Path::new("<buffer>"), e))?;
    emit(Sink::or_stdout(args.out.as_deref()), &buf)?;
    Ok(EXIT_OK)
}

/// `husimi` input: `{"model": ..., "params": {...}, "level": k}` plus the
/// optional solver tolerances of a sweep config.
pub fn cmd_husimi(config: &Path, level: Option<u32>, out: Option<&Path>) -> CliResult {
    let text = read(config)?;
    let root: Value = serde_json::from_str(&text).map_err(|e| CliError::config(format!("malformed JSON: {e}")))?;
    let obj = root.as_object().ok_or_else(|| CliError::config("config must be a JSON object"))?;
    let mut errors = Vec::new();
    const KEYS: &[&str] = &["model", "params", "level", "eig_tol", "e_tol", "tail_tol", "max_dim"];
    for k in obj.keys() {
        if !KEYS.contains(&k.as_str()) {
            errors.push(format!("unknown key '{k}' (allowed: {})", KEYS.join(", ")));
        }
    }
    let params = parse_state(obj, &mut errors);
    let mut settings = SolveSettings::default();
    for (key, slot) in [
        ("eig_tol", &mut settings.eig_tol),
        ("e_tol", &mut settings.e_tol),
        ("tail_tol", &mut settings.tail_tol),
    ] {
        if let Some(v) = obj.get(key) {
            match v.as_f64() {
                Some(x) if x > 0.0 => *slot = x,
                _ => errors.push(format!("{key} must be a positive number")),
            }
        }
    }
    if let Some(v) = obj.get("max_dim") {
        match v.as_u64() {
            Some(x) => settings.max_dim = x as usize,
            None => errors.push("max_dim must be a non-negative integer".into()),
        }
    }
    let level = match (level, obj.get("level")) {
        (Some(l), _) => l,
        (None, None) => 0,
        (None, Some(v)) => match v.as_u64() {
            Some(l) if l <= 16 => l as u32,
            _ => {
                errors.push("level must be an integer in 0..=16".into());
                0
            }
        },
    };
    let params = match params {
        Some(p) if errors.is_empty() => p,
        _ => return Err(CliError::config(errors.join("\n"))),
    };

    let gs = solve_ground_state(&params, &settings)?;
    let state = StateVector::from(&gs);
    let grid = GridFamily::for_basis(&gs.basis).grid(&state, level)?;
    let field = husimi(&state, &grid)?;
    let w = wehrl_entropy(&field, &grid)?;

    let mut header: Vec<&str> = match grid.node(0) {
        PhasePoint::Plane { .. } => vec!["alpha_re", "alpha_im"],
        PhasePoint::Sphere { .. } => vec!["theta", "phi"],
        PhasePoint::CP2 { .. } => vec!["zeta1_re", "zeta1_im", "zeta2_re", "zeta2_im"],
        PhasePoint::DickeProduct { .. } => vec!["alpha_re", "alpha_im", "theta", "phi"],
    };
    header.extend(["weight", "q"]);
    let rows = field.q_values.iter().enumerate().map(|(i, q)| {
        let mut rec: Vec<String> = match grid.node(i) {
            PhasePoint::Plane { alpha } => vec![alpha.re, alpha.im],
            PhasePoint::Sphere { theta, phi } => vec![theta, phi],
            PhasePoint::CP2 { zeta1, zeta2 } => vec![zeta1.re, zeta1.im, zeta2.re, zeta2.im],
            PhasePoint::DickeProduct { alpha, theta, phi } => vec![alpha.re, alpha.im, theta, phi],
        }
        .into_iter()
        .map(fmt_f64)
        .collect();
        rec.push(fmt_f64(grid.weight(i)));
        rec.push(fmt_f64(*q));
        rec
    });
    let mut echo_params = Map::new();
    for (name, v) in crate::config::param_values(&params) {
        echo_params.insert(name.into(), json!(v));
    }
    let mut buf = Vec::new();
    write_header(
        &mut buf,
        &[
            ("state", json!({"model": params.kind().tag(), "params": echo_params, "level": level}).to_string()),
            ("resolution", format!("{:?}", grid.resolution())),
            ("energy0", fmt_f64(gs.energy * params.energy_scale())),
            ("wehrl", fmt_f64(w)),
            ("norm_deficit", fmt_f64(field.norm_deficit)),
        ],
    )
    .map_err(|e| CliError::io(Path::new("<buffer>"), e))?;
    write_rows(&mut buf, &header, rows).map_err(|e| CliError::io(Path::new("<buffer>"), e))?;
    emit(Sink::or_stdout(out), &buf)?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("0:1.5:151").unwrap().len(), 151);
        assert_eq!(parse_range("0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_range("0.25").unwrap(), vec![0.25]);
        assert_eq!(*parse_range("0:pi:5").unwrap().last().unwrap(), PI);
        for bad in ["", "0:1", "0:1:0", "a:1:3", "0:1:x"] {
            assert!(parse_range(bad).is_err(), "{bad}");
        }
    }
}
