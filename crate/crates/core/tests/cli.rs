use std::path::Path;
use std::process::{Command, Output};

fn codecrit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_codecrit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn rate_of_small_codes() {
    let dir = tempfile::tempdir().unwrap();
    let half = dir.path().join("half.txt");
    let full = dir.path().join("full.txt");
    std::fs::write(&half, "q=2 n=2\n00\n11\n").unwrap();
    let words: Vec<String> = (0..8).map(|i| format!("{:03b}", i)).collect();
    std::fs::write(&full, format!("q=2 n=3\n{}\n", words.join("\n"))).unwrap();
    let out = dir.path().join("out");
    let o = codecrit(&["--out", path(&out), "rate", path(&half), path(&full)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let rates: Vec<&str> = text.lines().skip(1).map(|l| l.rsplit(',').next().unwrap()).collect();
    assert_eq!(rates, ["0.5", "1.0"]);
    assert!(out.join("rate.csv").exists());
}

#[test]
fn malformed_code_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "q=2 n=2\n00\n0x\n").unwrap();
    let o = codecrit(&["--out", path(dir.path()), "rate", path(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}

#[test]
fn fractal_dimension_of_three_words() {
    let dir = tempfile::tempdir().unwrap();
    let o = codecrit(&["--out", path(dir.path()), "fractal", "--words", "00,01,10", "--depths", "1..6"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("fractal.json")).unwrap()).unwrap();
    let dim = json["estimate"]["normalized_dimension"].as_f64().unwrap();
    assert!((dim - 3f64.log2() / 2.0).abs() < 1e-12, "{dim}");
}

#[test]
fn fractal_budget_fallback_is_noted() {
    let dir = tempfile::tempdir().unwrap();
    let o = codecrit(&[
        "--out",
        path(dir.path()),
        "fractal",
        "--words",
        "00,01,10",
        "--depths",
        "1..8",
        "--box-cap",
        "1000",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).to_lowercase().contains("sampl"), "{}", stdout(&o));
}

#[test]
fn single_depth_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = codecrit(&["--out", path(dir.path()), "fractal", "--depths", "3"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn statmech_scan_flags_divergence() {
    let dir = tempfile::tempdir().unwrap();
    let o = codecrit(&["--out", path(dir.path()), "statmech", "--beta-min", "0.1", "--beta-max", "2.0"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join("statmech.csv")).unwrap();
    for line in csv.lines().filter(|l| !l.starts_with('#')).skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let beta: f64 = f[0].parse().unwrap();
        if beta < 0.5 {
            assert_eq!(f[2], "DIVERGENT");
        } else if beta > 0.5 {
            assert!(f[4].parse::<f64>().unwrap() <= 1e-12, "{line}");
        }
    }
}

#[test]
fn keane_residual_prints_as_zero() {
    let dir = tempfile::tempdir().unwrap();
    let o = codecrit(&["--out", path(dir.path()), "statmech", "--keane"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("keane_residual=0.000000000000"), "{}", stdout(&o));
}

#[test]
fn bound_regimes() {
    let dir = tempfile::tempdir().unwrap();
    let o = codecrit(&["--out", path(dir.path()), "bound", "--d", "3", "--nu", "0.62999", "--dnu", "0.00005"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("bound.json")).unwrap()).unwrap();
    assert!((json["bound"].as_f64().unwrap() - 2.82535).abs() < 1e-5);
    assert!((json["bound_err"].as_f64().unwrap() - 0.00025).abs() < 1e-5);

    let o = codecrit(&["--out", path(dir.path()), "bound", "--N", "6"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("d = 3"), "{}", stdout(&o));

    let o = codecrit(&["--out", path(dir.path()), "bound", "--N", "7"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("unknown regime"), "{}", stderr(&o));
}

#[test]
fn lattice_side_below_two_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = codecrit(&["--out", path(dir.path()), "ising", "--d", "2", "--ls", "1,4"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn unknown_config_field_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, "{\n  \"seed\": 1,\n  \"sed\": 2\n}\n").unwrap();
    let o = codecrit(&["--config", path(&cfg), "bound"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}

fn cell_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap())
        })
        .collect();
    v.sort();
    v
}

#[test]
fn interrupted_run_resumes_to_identical_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let common = [
        "--seed", "3", "--out", path(&out), "ising", "--d", "2", "--ls", "4,6,8", "--sweeps", "2000",
        "--thermalization", "400", "--t-min", "2.0", "--t-max", "2.6", "--points", "7",
    ];
    let o = codecrit(&common);
    assert!(o.status.success(), "{}", stderr(&o));
    let full = std::fs::read(out.join("ising_d2/binder.csv")).unwrap();
    let cells = cell_files(&out.join("ising_d2/cells"));
    std::fs::remove_dir_all(&out).unwrap();

    let mut partial = common.to_vec();
    partial.extend(["--stop-after-cells", "8"]);
    let o = codecrit(&partial);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(cell_files(&out.join("ising_d2/cells")).len(), 8);
    let mut resumed = common.to_vec();
    resumed.push("--resume");
    let o = codecrit(&resumed);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(std::fs::read(out.join("ising_d2/binder.csv")).unwrap(), full);
    assert_eq!(cell_files(&out.join("ising_d2/cells")), cells);
}

#[test]
fn missing_output_directory_is_created() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("a/b/c");
    let o = codecrit(&["--out", path(&out), "bound", "--N", "4"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(out.join("bound.json").exists());
}

#[test]
fn quick_2d_preset_recovers_nu() {
    let dir = tempfile::tempdir().unwrap();
    let o = codecrit(&["--quick", "--out", path(dir.path()), "ising", "--d", "2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("ising_d2/fit.json")).unwrap()).unwrap();
    let nu = json["fit"]["nu"].as_f64().unwrap();
    assert!((nu - 1.0).abs() <= 0.2, "{nu}");
}
