use std::path::Path;
use std::process::{Command, Output};
use tempfile::TempDir;

fn twr(args: &[&str]) -> Output {
    twr_env(args, None)
}

fn twr_env(args: &[&str], seed_env: Option<&str>) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_twr"));
    c.args(args).env_remove("TWR_SEED");
    if let Some(s) = seed_env {
        c.env("TWR_SEED", s);
    }
    c.output().expect("run twr")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn ok(o: &Output) {
    assert!(o.status.success(), "exit {:?}: {}", o.status.code(), stderr(o));
}

fn records(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let head = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|x| x.unwrap().iter().map(String::from).collect()).collect();
    (head, rows)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn sweep_grid_header_and_values() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("sweep.csv");
    ok(&twr(&["sweep", "--trials", "20000", "--out", s(&out)]));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(!text.contains('\r'));
    let (head, rows) = records(&out);
    assert_eq!(head, ["rho_ar_db", "protocol", "mode", "sum_ber", "std_error"]);
    assert_eq!(rows.len(), 5 * 9 * 3);
    for r in &rows {
        let v: f64 = r[3].parse().unwrap();
        assert!(v.is_finite() && (0.0..=2.0).contains(&v), "{r:?}");
        if r[2] == "mc" {
            let se: f64 = r[4].parse().unwrap();
            assert!(se.is_finite() && se >= 0.0);
        } else {
            assert!(r[4].is_empty());
        }
    }
}

#[test]
fn sweep_is_reproducible_and_seeded() {
    let dir = TempDir::new().unwrap();
    let run = |name: &str, env: Option<&str>| {
        let out = dir.path().join(name);
        ok(&twr_env(
            &["sweep", "--mode", "mc", "--protocols", "two-slot,second-four-slot", "--trials", "10000", "--out", s(&out)],
            env,
        ));
        std::fs::read(out).unwrap()
    };
    let a = run("a.csv", None);
    assert_eq!(a, run("b.csv", None));
    let c = run("c.csv", Some("7"));
    assert_ne!(a, c);
    assert_eq!(c, run("d.csv", Some("7")));

    // --seed beats the environment
    let out = dir.path().join("e.csv");
    ok(&twr_env(
        &["--seed", "20110301", "sweep", "--mode", "mc", "--protocols", "two-slot,second-four-slot", "--trials", "10000", "--out", s(&out)],
        Some("7"),
    ));
    assert_eq!(a, std::fs::read(out).unwrap());
}

/// SNR in dB where a decreasing curve crosses `target`, interpolated in log.
fn crossing(points: &[(f64, f64)], target: f64) -> f64 {
    points
        .windows(2)
        .find_map(|w| {
            let ((x0, y0), (x1, y1)) = (w[0], w[1]);
            (y0 >= target && y1 < target)
                .then(|| x0 + (x1 - x0) * (y0.ln() - target.ln()) / (y0.ln() - y1.ln()))
        })
        .expect("target crossed")
}

#[test]
fn simulated_and_closed_form_curves_agree() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("agree.csv");
    ok(&twr(&[
        "sweep", "--protocols", "two-slot", "--rho-start", "20", "--rho-stop", "36", "--rho-step", "1", "--trials",
        "1000000", "--out", s(&out),
    ]));
    let (_, rows) = records(&out);
    let curve = |mode: &str| -> Vec<(f64, f64)> {
        rows.iter().filter(|r| r[2] == mode).map(|r| (r[0].parse().unwrap(), r[3].parse().unwrap())).collect()
    };
    let mc = crossing(&curve("mc"), 1e-4);
    let cf = crossing(&curve("closed"), 1e-4);
    assert!((mc - cf).abs() < 0.2, "mc {mc} closed {cf}");
}

#[test]
fn plot_script_leaves_csv_untouched() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let script = dir.path().join("plot.py");
    ok(&twr(&["sweep", "--trials", "10000", "--out", s(&a)]));
    ok(&twr(&["sweep", "--trials", "10000", "--out", s(&b), "--plot-script", s(&script)]));
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let py = std::fs::read_to_string(&script).unwrap();
    assert!(py.contains("b.csv"));
}

fn gap_rows(args: &[&str]) -> Vec<(String, f64, f64, bool)> {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("gaps.csv");
    let mut full = vec!["gaps", "--out", s(&out)];
    full.extend_from_slice(args);
    let o = twr(&full);
    ok(&o);
    assert!(String::from_utf8_lossy(&o.stdout).contains("gap_db"));
    let (head, rows) = records(&out);
    assert_eq!(head, ["protocol", "beta_sq", "gap_db", "best"]);
    rows.iter().map(|r| (r[0].clone(), r[1].parse().unwrap(), r[2].parse().unwrap(), r[3] == "true")).collect()
}

#[test]
fn gaps_balanced_single_relay() {
    let rows = gap_rows(&[]);
    let want = [("two-slot", 0.0), ("first-three-slot", 3.1014), ("second-three-slot", 0.6608), ("first-four-slot", 3.3547), ("second-four-slot", 3.3547)];
    assert_eq!(rows.len(), 5);
    for (p, w) in want {
        let r = rows.iter().find(|r| r.0 == p).unwrap();
        assert!((r.2 - w).abs() < 0.002, "{p}: {}", r.2);
        assert_eq!(r.3, p == "two-slot");
    }
}

#[test]
fn gaps_single_protocol() {
    let rows = gap_rows(&["--protocols", "first-four-slot"]);
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].2, 0.0);
    assert!(rows[0].3);
}

#[test]
fn gaps_unbalanced_ordering() {
    let rows = gap_rows(&["--d0", "0.3", "--rho-ar-db", "40", "--relay-rho-db", "40"]);
    let best = rows.iter().find(|r| r.3).unwrap();
    assert_eq!(best.0, "second-four-slot");
    assert!(rows.iter().all(|r| r.2 >= 0.0));
}

#[test]
#[ignore = "two-slot at M_R > 1 is not attainable under matched beamforming"]
fn gaps_multi_relay_two_slot() {
    let rows = gap_rows(&["--antennas", "2x2x2"]);
    let best = rows.iter().find(|r| r.3).unwrap();
    assert_eq!(best.0, "second-three-slot");
    let two = rows.iter().find(|r| r.0 == "two-slot").unwrap();
    assert!((two.2 - 0.8412).abs() < 0.05, "{}", two.2);
}

fn beta_rows(args: &[&str]) -> Vec<Vec<String>> {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("beta.csv");
    let mut full = vec!["beta", "--out", s(&out)];
    full.extend_from_slice(args);
    ok(&twr(&full));
    records(&out).1
}

#[test]
fn beta_sweeps() {
    let rows = beta_rows(&["--protocol", "first-three-slot", "--sweep", "d0", "--start", "0.5", "--stop", "0.5"]);
    let b: f64 = rows[0][2].parse().unwrap();
    assert!((b - 0.5).abs() < 1e-4, "{b}");

    let common = ["--antennas", "1x1x1", "--rho-ar-db", "40", "--relay-rho-db", "40", "--sweep", "d0", "--start", "0.3", "--stop", "0.3"];
    for (p, want) in [("first-three-slot", 0.82915), ("second-four-slot", 0.85159)] {
        let mut args = vec!["--protocol", p];
        args.extend_from_slice(&common);
        let rows = beta_rows(&args);
        let closed: f64 = rows[0][1].parse().unwrap();
        let numeric: f64 = rows[0][2].parse().unwrap();
        assert!((closed - want).abs() < 1e-4, "{p}: {closed}");
        assert!((closed - numeric).abs() < 1e-4, "{p}: {closed} vs {numeric}");
    }

    let rows = beta_rows(&["--protocol", "second-four-slot", "--sweep", "rho", "--start", "10", "--stop", "30", "--step", "10"]);
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r[1].is_empty()));
}

#[test]
fn validate_outcomes() {
    let o = twr(&["validate"]);
    ok(&o);
    assert!(String::from_utf8_lossy(&o.stdout).contains("PASS"));

    let o = twr(&["validate", "--trials", "1000"]);
    ok(&o);
    assert!(stderr(&o).contains("warning"));
    assert!(String::from_utf8_lossy(&o.stdout).contains("UNDERPOWERED"));

    let o = twr(&["validate", "--trials", "20000", "--corrupt-coefficient", "1.3"]);
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
}

fn kappa(trials: &str, max: &str) -> Vec<Vec<f64>> {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("k.csv");
    ok(&twr(&["kappa", "--antennas", "4x1x4", "--m-r-max", max, "--trials", trials, "--out", s(&out)]));
    records(&out).1.iter().map(|r| r.iter().map(|v| v.parse().unwrap()).collect()).collect()
}

#[test]
fn kappa_decreases_with_relay_antennas() {
    let rows = kappa("100000", "4");
    assert_eq!(rows.len(), 4);
    assert_eq!(&rows[0][1..5], &[2.0; 4]);
    for w in rows.windows(2) {
        for c in 1..5 {
            assert!(w[1][c] < w[0][c], "{w:?}");
        }
    }
    let fine = kappa("1000000", "2");
    for c in 1..5 {
        let se = (rows[1][c + 4].powi(2) + fine[1][c + 4].powi(2)).sqrt();
        assert!((rows[1][c] - fine[1][c]).abs() < 3.0 * se, "column {c}");
    }
}

#[test]
fn config_errors_name_the_key() {
    let dir = TempDir::new().unwrap();
    let sc = dir.path().join("bad.txt");
    std::fs::write(&sc, "m_a = 2\nd0 = 1.5\n").unwrap();
    let o = twr(&["gaps", "--scenario", s(&sc)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("d0"));

    std::fs::write(&sc, "protocol = five-slot\n").unwrap();
    let o = twr(&["gaps", "--scenario", s(&sc)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("protocol"));

    let o = twr(&["gaps", "--antennas", "2x2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--antennas"));

    let o = twr_env(&["gaps"], Some("abc"));
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("TWR_SEED"));

    let o = twr(&["gaps", "--scenario", "/nonexistent/scenario.txt"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn scenario_file_seed_sits_between_env_and_flag() {
    let dir = TempDir::new().unwrap();
    let sc = dir.path().join("sc.txt");
    std::fs::write(&sc, "seed = 7\n").unwrap();
    let run = |name: &str, args: &[&str], env: Option<&str>| {
        let out = dir.path().join(name);
        let mut full: Vec<&str> = args.to_vec();
        full.extend_from_slice(&["sweep", "--mode", "mc", "--protocols", "two-slot", "--trials", "10000", "--out", s(&out)]);
        ok(&twr_env(&full, env));
        std::fs::read(out).unwrap()
    };
    let env7 = run("a.csv", &[], Some("7"));
    let out = dir.path().join("b.csv");
    ok(&twr_env(
        &["sweep", "--scenario", s(&sc), "--mode", "mc", "--protocols", "two-slot", "--trials", "10000", "--out", s(&out)],
        Some("99"),
    ));
    assert_eq!(env7, std::fs::read(out).unwrap());
    let flag = run("c.csv", &["--seed", "7"], Some("99"));
    assert_eq!(env7, flag);
}
