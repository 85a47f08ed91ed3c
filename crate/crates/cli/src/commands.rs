use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;

use diskflow::disk_basis::snapshot;
use diskflow::euler_solver;
use diskflow::special_fn;
use diskflow::stability::{self, Orbit};
use diskflow::{DiskBasis64, SpectralField64, StabilityReport64};

use crate::config::RunConfig;
use crate::error::CliError;

/// Writes `bytes` next to `path` and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let name = path
        .file_name()
        .ok_or_else(|| CliError::Run(format!("not a file path: {}", path.display())))?;
    let tmp = path.with_file_name(format!(".{}.tmp", name.to_string_lossy()));
    fs::write(&tmp, bytes).map_err(CliError::io(&tmp))?;
    fs::rename(&tmp, path).map_err(CliError::io(path))
}

pub fn zeros(n: u32, count: u32) -> Result<String, CliError> {
    if count == 0 {
        return Err(CliError::Usage("--count must be at least 1".into()));
    }
    let mut out = String::new();
    for k in 1..=count {
        let z: f64 = special_fn::bessel_zero(n, k).map_err(|e| CliError::Run(e.to_string()))?;
        writeln!(out, "{z:.12}").unwrap();
    }
    Ok(out)
}

pub fn load_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input {
        path: path.to_path_buf(),
        msg: e.to_string(),
    })?;
    RunConfig::parse(&text)
}

fn output_dir(cfg: &RunConfig, out: Option<PathBuf>) -> Result<PathBuf, CliError> {
    let dir = out
        .or_else(|| cfg.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir).map_err(CliError::io(&dir))?;
    Ok(dir)
}

fn build_basis(cfg: &RunConfig) -> Result<DiskBasis64, CliError> {
    DiskBasis64::build(cfg.basis.clone()).map_err(|e| CliError::Config(e.to_string()))
}

fn read_snapshot(path: &Path) -> Result<diskflow::disk_basis::snapshot::Snapshot<f64>, CliError> {
    let file = fs::File::open(path).map_err(|e| CliError::Input {
        path: path.to_path_buf(),
        msg: e.to_string(),
    })?;
    snapshot::read(std::io::BufReader::new(file)).map_err(|e| CliError::Input {
        path: path.to_path_buf(),
        msg: e.to_string(),
    })
}

fn initial_field(cfg: &RunConfig, basis: &DiskBasis64) -> Result<SpectralField64, CliError> {
    if let Some(path) = &cfg.initial_snapshot {
        return read_snapshot(path)?
            .into_spectral(basis)
            .map_err(|e| CliError::Input {
                path: path.clone(),
                msg: e.to_string(),
            });
    }
    let orbit = Orbit::new(cfg.a, cfg.b)?;
    let mut w = orbit.point(basis, 0.0);
    let p = cfg.trial_perturbation(0).field(basis)?;
    w.axpy(cfg.eps[0], &p);
    Ok(w)
}

fn fmt_row(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| format!("{v:.16e}"))
        .collect::<Vec<_>>()
        .join(",")
}

/// Runs the configured initial state and writes `trajectory.csv` and
/// `final.snap`. Returns the written paths.
pub fn simulate(cfg: &RunConfig, out: Option<PathBuf>) -> Result<Vec<PathBuf>, CliError> {
    let basis = build_basis(cfg)?;
    let w0 = initial_field(cfg, &basis)?;
    let traj = euler_solver::simulate(&basis, &w0, &cfg.solver)?;

    let first = traj.ledgers[0];
    let drift = |x: f64, x0: f64| (x - x0) / x0.abs().max(1e-12);
    let mut csv = String::from("t,E,I,J,EC,mean_omega,drift_E,drift_I,drift_J\n");
    for l in &traj.ledgers {
        csv.push_str(&fmt_row(&[
            l.time_stamp,
            l.energy,
            l.impulse,
            l.enstrophy,
            l.energy_casimir,
            l.mean_vorticity,
            drift(l.energy, first.energy),
            drift(l.impulse, first.impulse),
            drift(l.enstrophy, first.enstrophy),
        ]));
        csv.push('\n');
    }
    let mut snap = Vec::new();
    snapshot::write_spectral(&mut snap, basis.spec(), traj.last().expect("nonempty trajectory"))
        .map_err(|e| CliError::Run(e.to_string()))?;

    let dir = output_dir(cfg, out)?;
    let csv_path = dir.join("trajectory.csv");
    let snap_path = dir.join("final.snap");
    write_atomic(&csv_path, csv.as_bytes())?;
    write_atomic(&snap_path, &snap)?;
    Ok(vec![csv_path, snap_path])
}

fn run_one(
    cfg: &RunConfig,
    basis: &DiskBasis64,
    trial: usize,
    eps: f64,
) -> Result<StabilityReport64, CliError> {
    let orbit = Orbit::new(cfg.a, cfg.b)?;
    let p = cfg.trial_perturbation(trial).field(basis)?;
    let report = stability::run_stability_experiment(basis, &orbit, &p, eps, &cfg.solver)?;
    if let Some(e) = report.failure.clone() {
        return Err(e.into());
    }
    Ok(report)
}

/// Runs every `(trial, eps)` pair, concurrently when cores allow, and writes
/// one report per pair plus `summary.csv`. Nothing is written if any run fails.
pub fn stability(cfg: &RunConfig, out: Option<PathBuf>) -> Result<Vec<PathBuf>, CliError> {
    let basis = build_basis(cfg)?;
    let jobs: Vec<(usize, usize)> = (0..cfg.trials)
        .flat_map(|t| (0..cfg.eps.len()).map(move |e| (t, e)))
        .collect();
    let results: Mutex<Vec<Option<Result<StabilityReport64, CliError>>>> =
        Mutex::new((0..jobs.len()).map(|_| None).collect());
    let next = AtomicUsize::new(0);
    let workers = thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(jobs.len());
    thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(trial, e)) = jobs.get(i) else {
                    break;
                };
                let r = run_one(cfg, &basis, trial, cfg.eps[e]);
                results.lock().unwrap()[i] = Some(r);
            });
        }
    });
    let mut reports = Vec::with_capacity(jobs.len());
    for r in results.into_inner().unwrap() {
        reports.push(r.expect("every job ran")?);
    }

    let dir = output_dir(cfg, out)?;
    let mut written = Vec::new();
    let mut summary =
        String::from("trial,eps,perturbation,sup_dist_orbit,empirical_constant,prop31_ratio\n");
    for (&(trial, e), report) in jobs.iter().zip(&reports) {
        let mut buf = Vec::new();
        report
            .write_csv(&mut buf)
            .map_err(|e| CliError::Run(e.to_string()))?;
        let path = dir.join(format!("stability_trial{trial}_eps{e}.csv"));
        write_atomic(&path, &buf)?;
        written.push(path);
        writeln!(
            summary,
            "{trial},{:.16e},{},{:.16e},{:.16e},{:.16e}",
            cfg.eps[e],
            cfg.trial_perturbation(trial),
            report.sup_dist_orbit,
            report.empirical_constant,
            report.prop31_ratio
        )
        .unwrap();
    }
    let path = dir.join("summary.csv");
    write_atomic(&path, summary.as_bytes())?;
    written.push(path);
    Ok(written)
}

pub fn project(path: &Path, a: f64, b: f64) -> Result<String, CliError> {
    let snap = read_snapshot(path)?;
    let basis = DiskBasis64::build(snap.basis_spec()).map_err(|e| CliError::Input {
        path: path.to_path_buf(),
        msg: e.to_string(),
    })?;
    let w = snap.into_spectral(&basis).map_err(|e| CliError::Input {
        path: path.to_path_buf(),
        msg: e.to_string(),
    })?;
    let orbit = Orbit::new(a, b).map_err(|e| CliError::Usage(e.to_string()))?;
    let c = stability::project_v(&basis, &w);
    let mut out = String::new();
    writeln!(out, "A_prime={:.16e}", c.a).unwrap();
    writeln!(out, "B_prime={:.16e}", c.b_prime()).unwrap();
    writeln!(out, "alpha_prime={:.16e}", c.alpha_prime()).unwrap();
    writeln!(out, "dist_V={:.16e}", stability::dist_to_v(&basis, &w)).unwrap();
    writeln!(out, "dist_orbit={:.16e}", stability::dist_to_orbit(&basis, &w, &orbit)).unwrap();
    Ok(out)
}
