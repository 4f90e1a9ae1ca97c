use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;
use wehrl_qpt::sweep::classify_order;
use wehrl_qpt::{SweepResult, Thresholds};
use wehrl_qpt_cli::output::{read_sweep_csv, sweep_record, write_header, write_rows, SWEEP_COLUMNS};

const LMG_SECOND: &str = r#"{"model":"lmg","sizes":[20,40],"trajectory":{"control":"gamma_x","start":-3,"stop":1,"steps":41,"line":"gamma_y=-gamma_x+2"}}"#;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wehrl-qpt"))
        .args(args)
        .env_remove("WEHRL_QPT_WORKERS")
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json(path: impl AsRef<Path>) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn unknown_model_tag_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.json", r#"{"model":"dicke5"}"#);
    let o = bin(&["sweep", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("'dicke5'"), "{}", stderr(&o));
}

#[test]
fn vibron_with_one_boson_is_rejected() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.json", r#"{"model":"vibron2d","params":{"N":1}}"#);
    let o = bin(&["sweep", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("N >= 2"), "{}", stderr(&o));
}

#[test]
fn malformed_json_and_unknown_keys() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.json", "{\"model\": ");
    assert_eq!(bin(&["sweep", "--config", &cfg]).status.code(), Some(2));
    let cfg = write(
        &dir,
        "d.json",
        r#"{"model":"lmg","sizes":[20],"tolerance":1,"trajectory":{"control":"gamma_x","start":0,"stop":1,"steps":9}}"#,
    );
    let o = bin(&["sweep", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("'tolerance'"));
}

#[test]
fn vibron_surface_minimum() {
    let o = bin(&["surface", "--model", "vibron2d", "--xi", "0.5", "--r", "0:1.5:151"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = String::from_utf8(o.stdout).unwrap();
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    assert_eq!(reader.headers().unwrap(), vec!["r", "energy"]);
    let rows: Vec<(f64, f64)> = reader
        .records()
        .map(|r| {
            let r = r.unwrap();
            (r[0].parse().unwrap(), r[1].parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 151);
    let best = rows.iter().min_by(|a, b| a.1.total_cmp(&b.1)).unwrap();
    // Exact minimum at sqrt(0.6); the grid spacing is 0.01.
    assert!((best.0 - 0.6f64.sqrt()).abs() <= 0.005 + 1e-12, "{best:?}");
}

#[test]
fn surface_rejects_foreign_flags() {
    let o = bin(&["surface", "--model", "vibron2d", "--u", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--u"));
}

#[test]
fn flat_single_size_is_ambiguous() {
    let dir = TempDir::new().unwrap();
    let rows: Vec<_> = (0..21)
        .map(|k| wehrl_qpt::SweepRow {
            model: wehrl_qpt::ModelKind::Lmg,
            size: 20.0,
            control_name: "gamma_x".into(),
            control_value: -3.0 + 0.2 * k as f64,
            energy0: -1.0,
            gap: None,
            wehrl: 20.0 / 21.0,
            norm_deficit: 0.0,
            nodes_used: 100,
            wall_time: 0.0,
        })
        .collect();
    let mut buf = Vec::new();
    write_header(&mut buf, &[]).unwrap();
    write_rows(&mut buf, &SWEEP_COLUMNS, rows.iter().map(sweep_record)).unwrap();
    let csv = write(&dir, "flat.csv", std::str::from_utf8(&buf).unwrap());
    let report = dir.path().join("r.json");
    let o = bin(&["classify", &csv, "--out", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
    assert_eq!(json(&report)["order"], "ambiguous");
}

#[test]
fn lmg_sweep_round_trip_and_provenance() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "lmg.json", LMG_SECOND);
    let out = dir.path().join("lmg.csv");
    let o = bin(&["sweep", "--config", &cfg, "--out", out.to_str().unwrap(), "--workers", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = fs::read_to_string(&out).unwrap();
    let parsed = read_sweep_csv(&text).unwrap();
    assert_eq!(parsed.rows.len(), 2 * 41);
    assert!(parsed.rows.iter().all(|r| r.gap.is_some_and(|g| g > 0.0)));

    // The config is untouched and the report sits next to the CSV.
    assert_eq!(fs::read_to_string(&cfg).unwrap(), LMG_SECOND);
    let report = json(dir.path().join("lmg.report.json"));
    assert_eq!(report["order"], "second");

    // classify on the CSV reproduces the sweep's report exactly.
    let again = dir.path().join("again.json");
    let o = bin(&["classify", out.to_str().unwrap(), "--out", again.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(fs::read(dir.path().join("lmg.report.json")).unwrap(), fs::read(&again).unwrap());

    // ... and so does classifying the parsed rows in process.
    let in_process = classify_order(
        &SweepResult {
            rows: parsed.rows.clone(),
            partial: false,
            failure: None,
        },
        &Thresholds::default(),
    )
    .unwrap();
    assert_eq!(serde_json::to_value(&in_process).unwrap(), report);

    // Re-running from the echoed config reproduces the CSV bitwise.
    let echoed = write(&dir, "echo.json", parsed.entry("config").unwrap());
    let out2 = dir.path().join("echo.csv");
    let o = bin(&["sweep", "--config", &echoed, "--out", out2.to_str().unwrap(), "--workers", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(text, fs::read_to_string(&out2).unwrap());
}

#[test]
fn worker_count_from_environment_does_not_change_rows() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "c.json",
        r#"{"model":"lmg","sizes":[10],"trajectory":{"control":"gamma_x","start":-3,"stop":1,"steps":9,"line":"gamma_y=-gamma_x+2"}}"#,
    );
    let rows = |workers: &str| {
        let out = dir.path().join(format!("w{workers}.csv"));
        let o = Command::new(env!("CARGO_BIN_EXE_wehrl-qpt"))
            .args(["sweep", "--config", &cfg, "--out", out.to_str().unwrap()])
            .env("WEHRL_QPT_WORKERS", workers)
            .output()
            .unwrap();
        assert!(matches!(o.status.code(), Some(0 | 4)), "{}", stderr(&o));
        let text = fs::read_to_string(out).unwrap();
        let csv = read_sweep_csv(&text).unwrap();
        let config: Value = serde_json::from_str(csv.entry("config").unwrap()).unwrap();
        assert_eq!(config["workers"].as_u64().unwrap().to_string(), workers);
        text.lines().filter(|l| !l.starts_with('#')).map(String::from).collect::<Vec<_>>()
    };
    assert_eq!(rows("1"), rows("3"));
}

#[test]
fn levels_flag_controls_the_gap_column() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "c.json",
        r#"{"model":"ibm_lmg","sizes":[10],"trajectory":{"control":"x","start":0.6,"stop":0.95,"steps":8}}"#,
    );
    let out = dir.path().join("o.csv");
    let o = bin(&["sweep", "--config", &cfg, "--out", out.to_str().unwrap(), "--levels", "1"]);
    assert!(matches!(o.status.code(), Some(0 | 4)), "{}", stderr(&o));
    let text = fs::read_to_string(&out).unwrap();
    assert!(read_sweep_csv(&text).unwrap().rows.iter().all(|r| r.gap.is_none()));
}

#[test]
fn quadrature_failure_gives_a_flagged_partial_csv() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "c.json",
        r#"{"model":"lmg","sizes":[20],"max_nodes":50,"trajectory":{"control":"gamma_x","start":-3,"stop":1,"steps":9,"line":"gamma_y=-gamma_x+2"}}"#,
    );
    let out = dir.path().join("o.csv");
    let o = bin(&["sweep", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    let text = fs::read_to_string(&out).unwrap();
    let csv = read_sweep_csv(&text).unwrap();
    assert_eq!(csv.entry("partial"), Some("true"));
    assert!(csv.entry("failure").is_some());
    let o = bin(&["classify", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn output_may_not_overwrite_the_config() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.json", LMG_SECOND);
    let o = bin(&["sweep", "--config", &cfg, "--out", "/dev/null", "--report", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(fs::read_to_string(&cfg).unwrap(), LMG_SECOND);
}

#[test]
fn husimi_of_a_spin_ground_state() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "s.json", r#"{"model":"lmg","params":{"gamma_x":-3,"gamma_y":5,"N":10},"level":1}"#);
    let o = bin(&["husimi", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = String::from_utf8(o.stdout).unwrap();
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    assert_eq!(reader.headers().unwrap(), vec!["theta", "phi", "weight", "q"]);
    let mut total = 0.0;
    let mut n = 0;
    for r in reader.records() {
        let r = r.unwrap();
        let (w, q): (f64, f64) = (r[2].parse().unwrap(), r[3].parse().unwrap());
        assert!((0.0..=1.0).contains(&q));
        total += w * q;
        n += 1;
    }
    // Level 1 on the sphere for 2j = 10: 22 by 44 nodes.
    assert_eq!(n, 22 * 44);
    assert!((total - 1.0).abs() < 1e-10, "{total}");
    let w: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("# wehrl: "))
        .unwrap()
        .parse()
        .unwrap();
    // Lieb bound for spin 5.
    assert!(w >= 10.0 / 11.0 - 1e-9, "{w}");
}
