use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use diskflow::disk_basis::snapshot;
use diskflow::{BasisSpec, DiskBasis64};

fn diskflow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diskflow"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

fn basis() -> DiskBasis64 {
    DiskBasis64::build(BasisSpec::new(32, 32)).unwrap()
}

fn read_spectral(path: &Path, b: &DiskBasis64) -> diskflow::SpectralField64 {
    let file = fs::File::open(path).unwrap();
    let snap = snapshot::read::<f64, _>(std::io::BufReader::new(file)).unwrap();
    snap.into_spectral(b).unwrap()
}

/// Data rows of a CSV file as floats (header and `#` lines skipped).
fn rows(path: &Path) -> Vec<Vec<f64>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect()
}

#[test]
fn zeros_listing() {
    let o = diskflow(&["zeros", "--n", "1", "--count", "1"]);
    assert!(o.status.success());
    let z: f64 = stdout(&o).trim().parse().unwrap();
    assert!((z - 3.831705970213).abs() < 1e-9);
    assert_eq!(stdout(&o).trim().split('.').nth(1).unwrap().len(), 12);

    let o = diskflow(&["zeros", "--n", "0", "--count", "3"]);
    let lines: Vec<f64> = stdout(&o).lines().map(|l| l.parse().unwrap()).collect();
    assert_eq!(lines.len(), 3);
    assert!((lines[0] - 2.404825557696).abs() < 1e-9);
    assert!(lines.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn zeros_usage_errors() {
    let o = diskflow(&["zeros", "--n", "1", "--count", "0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = diskflow(&["zeros", "--n", "-1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = diskflow(&["zeros", "--bogus"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn simulate_steady_state() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "steady.cfg",
        "solver.dt = 1e-3\nsolver.t_end = 1\nsolver.save_every = 100\nexperiment.A = 1\nexperiment.B = 2\nexperiment.eps = 0\n",
    );
    let out = dir.path().join("out");
    let o = diskflow(&["simulate", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let b = basis();
    let last = read_spectral(&out.join("final.snap"), &b);
    let start = b.steady_field(1.0, 2.0, 0.0);
    assert!(b.norm(&last.add_scaled(-1.0, &start)) <= 1e-6);
    let r = rows(&out.join("trajectory.csv"));
    assert_eq!(r.len(), 11);
    assert!((r[10][0] - 1.0).abs() < 1e-12);
}

#[test]
fn simulate_zero_and_generic_data() {
    let dir = tempfile::tempdir().unwrap();
    let zero = write_config(
        dir.path(),
        "zero.cfg",
        "solver.t_end = 0.05\nexperiment.A = 0\nexperiment.B = 0\nexperiment.eps = 0\n",
    );
    let out = dir.path().join("zero");
    let o = diskflow(&["simulate", "--config", &zero, "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    for row in rows(&out.join("trajectory.csv")) {
        assert!(row[1..].iter().all(|&v| v == 0.0), "{row:?}");
    }

    let generic = write_config(
        dir.path(),
        "generic.cfg",
        "solver.t_end = 0.5\nsolver.save_every = 50\nexperiment.A = 1\nexperiment.B = 1\nexperiment.eps = 0.05\nexperiment.perturbation = random:3\n",
    );
    let out = dir.path().join("generic");
    let o = diskflow(&["simulate", "--config", &generic, "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let header = fs::read_to_string(out.join("trajectory.csv")).unwrap();
    assert!(header.starts_with("t,E,I,J,EC,mean_omega,drift_E,drift_I,drift_J\n"));
    for row in rows(&out.join("trajectory.csv")) {
        assert!(row[6..9].iter().all(|d| d.abs() <= 1e-6), "{row:?}");
    }
}

#[test]
fn simulate_failures_leave_no_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let bad = write_config(dir.path(), "bad.cfg", "solver.dt = soon\n");
    let o = diskflow(&["simulate", "--config", &bad, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());

    let o = diskflow(&["simulate", "--config", "/nonexistent/run.cfg"]);
    assert_eq!(o.status.code(), Some(2));

    let fast = write_config(
        dir.path(),
        "fast.cfg",
        "solver.dt = 0.5\nsolver.t_end = 5\nexperiment.A = 20\nexperiment.B = 40\n",
    );
    let o = diskflow(&["simulate", "--config", &fast, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("after t = 0"));
    assert!(!out.exists() || fs::read_dir(&out).unwrap().next().is_none());
}

fn summary(dir: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(dir.join("summary.csv"))
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn stability_reports_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "stab.cfg",
        "solver.t_end = 0.5\nsolver.save_every = 50\nexperiment.A = 0\nexperiment.B = 1\nexperiment.eps = 0, 0.02\nexperiment.perturbation = random\nexperiment.seed = 5\nexperiment.trials = 2\n",
    );
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = diskflow(&["stability", "--config", &cfg, "--out", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        out
    };
    let a = run("a");
    let b = run("b");
    let s = summary(&a);
    assert_eq!(s.len(), 4);
    for row in &s {
        let eps: f64 = row[1].parse().unwrap();
        let sup: f64 = row[3].parse().unwrap();
        if eps == 0.0 {
            assert!(sup <= 1e-7);
        }
    }
    assert_eq!(s[0][2], "random:5");
    assert_eq!(s[2][2], "random:6");
    for entry in fs::read_dir(&a).unwrap() {
        let entry = entry.unwrap();
        let other = fs::read(b.join(entry.file_name())).unwrap();
        assert_eq!(fs::read(entry.path()).unwrap(), other, "{:?}", entry.file_name());
    }
    let report = fs::read_to_string(a.join("stability_trial1_eps1.csv")).unwrap();
    assert!(report.starts_with("t,dist_orbit,dist_V,E,I,J,EC,A_prime,B_prime,alpha_prime,mean_omega\n"));
    assert!(report.trim_end().lines().last().unwrap().starts_with("# sup_dist_orbit="));
}

#[test]
fn stability_eps_ladders() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "ladder.cfg",
        "solver.t_end = 2\nsolver.save_every = 100\nexperiment.eps = 0.02, 0.04, 0.08\nexperiment.perturbation = random:1\n",
    );
    for (a, b, lo, hi) in [("0", "1", 1.5, 2.7), ("1", "0", 1.3, 2.1)] {
        let out = dir.path().join(format!("A{a}B{b}"));
        let o = diskflow(&[
            "stability", "--config", &cfg, "--out", out.to_str().unwrap(), "--A", a, "--B", b,
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let sups: Vec<f64> = summary(&out).iter().map(|r| r[3].parse().unwrap()).collect();
        for w in sups.windows(2) {
            let ratio = w[1] / w[0];
            assert!(ratio >= lo && ratio <= hi, "A={a} B={b}: {ratio}");
        }
    }
}

#[test]
fn stability_flag_overrides_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "o.cfg", "solver.t_end = 0.02\nexperiment.eps = 0.5\n");
    let out = dir.path().join("o");
    let o = diskflow(&[
        "stability", "--config", &cfg, "--out", out.to_str().unwrap(), "--eps", "0,0.01", "--seed", "3",
    ]);
    assert!(o.status.success());
    assert_eq!(summary(&out).len(), 2);
    let o = diskflow(&["stability", "--config", &cfg, "--B", "-1"]);
    assert_eq!(o.status.code(), Some(2));
    let bad = write_config(dir.path(), "bad.cfg", "experiment.perturbation = wobble\n");
    let o = diskflow(&["stability", "--config", &bad]);
    assert_eq!(o.status.code(), Some(2));
}

fn project(snap: &Path, a: &str, b: &str) -> Vec<(String, f64)> {
    let o = diskflow(&["project", "--snapshot", snap.to_str().unwrap(), "--A", a, "--B", b]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
        .lines()
        .map(|l| {
            let (k, v) = l.split_once('=').unwrap();
            (k.to_string(), v.parse().unwrap())
        })
        .collect()
}

fn value(report: &[(String, f64)], key: &str) -> f64 {
    report.iter().find(|(k, _)| k == key).unwrap().1
}

#[test]
fn project_reports() {
    let dir = tempfile::tempdir().unwrap();
    let b = basis();
    let w = b.steady_field(1.0, 2.0, 0.0);
    let path = dir.path().join("w.snap");
    let mut buf = Vec::new();
    snapshot::write_spectral(&mut buf, b.spec(), &w).unwrap();
    fs::write(&path, buf).unwrap();

    let on = project(&path, "1", "2");
    assert!(value(&on, "dist_orbit").abs() <= 1e-10);
    assert!((value(&on, "A_prime") - 1.0).abs() < 1e-12);
    assert!((value(&on, "B_prime") - 2.0).abs() < 1e-12);
    let off = project(&path, "0", "2");
    let n0 = b.constants().norm_j0_sq.sqrt();
    assert!((value(&off, "dist_orbit") - n0).abs() <= 1e-8);

    // a rotated snapshot on the grid: same distances, shifted phase
    let rotated = b.synthesize(&b.rotate(&w, 0.7)).unwrap();
    let rpath = dir.path().join("r.snap");
    let mut buf = Vec::new();
    snapshot::write_grid(&mut buf, b.spec(), &rotated).unwrap();
    fs::write(&rpath, buf).unwrap();
    let rot = project(&rpath, "0", "2");
    for key in ["A_prime", "B_prime", "dist_V", "dist_orbit"] {
        assert!((value(&rot, key) - value(&off, key)).abs() < 1e-10, "{key}");
    }
    assert!((value(&rot, "alpha_prime") + 0.7).abs() < 1e-10);

    let bad = dir.path().join("bad.snap");
    fs::write(&bad, "n_theta=32\nk_radial=32\nkind=grid\n0,0,x\n").unwrap();
    let o = diskflow(&["project", "--snapshot", bad.to_str().unwrap(), "--A", "1", "--B", "1"]);
    assert_eq!(o.status.code(), Some(2));
}
