//! End-to-end acceptance checks at the reference resolution. Prints one
//! `[PASS]`/`[FAIL]` line per criterion and exits nonzero if any fail.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::thread;
use std::time::Instant;

use diskflow::euler_solver::{nonlinear_term, simulate, SolverConfig};
use diskflow::fields::{self, Trig};
use diskflow::functionals::casimir;
use diskflow::special_fn::{bessel_j, bessel_zero, steady_wavenumber};
use diskflow::stability::{
    lambda1, lambda2, prop31_constant, run_stability_experiment, Orbit, Perturbation,
    StabilityReport,
};
use diskflow::{BasisSpec, DiskBasis64, SpectralField64};
use quadrature::double_exponential;

struct Outcome {
    id: usize,
    name: &'static str,
    pass: bool,
    detail: String,
    secs: f64,
}

fn spec() -> BasisSpec {
    BasisSpec::new(32, 32)
}

fn basis() -> DiskBasis64 {
    DiskBasis64::build(spec()).unwrap()
}

fn config(t_end: f64, save_every: usize) -> SolverConfig {
    SolverConfig::new(1e-3, t_end, save_every, spec())
}

fn bessel_by_quadrature(n: u32, x: f64) -> f64 {
    double_exponential::integrate(|t: f64| (n as f64 * t - x * t.sin()).cos(), 0.0, PI, 1e-14)
        .integral
        / PI
}

fn bisect(n: u32, mut lo: f64, mut hi: f64) -> f64 {
    let f = |x| bessel_by_quadrature(n, x);
    let neg = f(lo) < 0.0;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) < 0.0) == neg {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn special_functions() -> (bool, String) {
    let j: f64 = steady_wavenumber();
    let d11 = (j - 3.831706).abs();
    let d01 = (bessel_zero::<f64>(0, 1).unwrap() - bisect(0, 2.0, 3.0)).abs();
    let d21 = (bessel_zero::<f64>(2, 1).unwrap() - bisect(2, 5.0, 5.5)).abs();
    let mut rec: f64 = 0.0;
    for n in 1..=20u32 {
        for i in 0..=500 {
            let x = 0.1 + i as f64 * 0.1;
            let lhs = bessel_j(n - 1, x).unwrap() + bessel_j(n + 1, x).unwrap();
            let rhs = 2.0 * n as f64 / x * bessel_j(n, x).unwrap();
            rec = rec.max((lhs - rhs).abs());
        }
    }
    let pass = d11 < 5e-6 && d01 <= 1e-9 && d21 <= 1e-9 && rec <= 1e-11;
    (
        pass,
        format!("j11={j:.9} |j01-oracle|={d01:.1e} |j21-oracle|={d21:.1e} recurrence={rec:.1e}"),
    )
}

fn transforms_and_green() -> (bool, String) {
    let b = basis();
    let j = b.constants().j;
    let mut trip: f64 = 0.0;
    for seed in 0..20 {
        let c = fields::random_polynomial(&b, 14, seed);
        let back = b.analyze(&b.synthesize(&c).unwrap()).unwrap();
        trip = trip.max(back.max_abs_diff(&c));
    }
    let j1 = b.spectral_from_fn(|r, t| bessel_j(1, j * r).unwrap() * t.cos());
    let g1 = b.synthesize(&b.apply_green(&j1).unwrap()).unwrap();
    let want1 = b.grid_from_fn(|r, t| bessel_j(1, j * r).unwrap() * t.cos() / (j * j));
    let e1 = max_diff(&g1.values, &want1.values);
    let j0 = b.spectral_from_fn(|r, _| bessel_j(0, j * r).unwrap());
    let j0_edge = bessel_j(0, j).unwrap();
    let g0 = b.synthesize(&b.apply_green(&j0).unwrap()).unwrap();
    let want0 = b.grid_from_fn(|r, _| (bessel_j(0, j * r).unwrap() - j0_edge) / (j * j));
    let e0 = max_diff(&g0.values, &want0.values);
    (
        trip <= 1e-10 && e1 <= 1e-8 && e0 <= 1e-8,
        format!("round_trip={trip:.1e} green_J1cos={e1:.1e} green_J0={e0:.1e}"),
    )
}

fn max_diff(a: &ndarray::Array2<f64>, b: &ndarray::Array2<f64>) -> f64 {
    a.iter().zip(b.iter()).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

fn poincare() -> (bool, String) {
    let b = basis();
    let (l1, l2) = (lambda1::<f64>(), lambda2::<f64>());
    let vgv = |v: &SpectralField64| b.inner(v, &b.apply_green(v).unwrap());
    let mut worst_excess = f64::NEG_INFINITY;
    for seed in 0..50 {
        let v = fields::random_perturbation(&b, 12, 1000 + seed);
        worst_excess = worst_excess.max(vgv(&v) - b.inner(&v, &v) / l1);
    }
    let mut v_eq: f64 = 0.0;
    for (a, bc, bs) in [(1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0), (0.3, -1.2, 0.7)] {
        let v = b.steady_field(a, bc, bs);
        v_eq = v_eq.max((vgv(&v) - b.inner(&v, &v) / l1).abs());
    }
    let mut gap_ratio = f64::INFINITY;
    for (c, s) in [(1.0, 0.0), (0.0, 1.0), (0.6, -0.8)] {
        let mut v = fields::bessel_mode(&b, 2, 1, Trig::Cos).unwrap().scaled(c);
        v.axpy(s, &fields::bessel_mode(&b, 2, 1, Trig::Sin).unwrap());
        let vv = b.inner(&v, &v);
        let gap = vv / l1 - vgv(&v);
        gap_ratio = gap_ratio.min(gap / ((1.0 / l1 - 1.0 / l2) * vv));
    }
    (
        worst_excess <= 1e-9 && v_eq <= 1e-9 && gap_ratio >= 0.99,
        format!(
            "max(∫vGv-∫v²/Λ₁)={worst_excess:.2e} V equality={v_eq:.1e} E₂ gap/bound={gap_ratio:.6}"
        ),
    )
}

fn steady_states() -> (bool, String) {
    let b = basis();
    let w = b.steady_field(1.0, 2.0, 0.0);
    let nl = b.norm(&nonlinear_term(&b, &w).unwrap());
    let traj = simulate(&b, &w, &config(1.0, 1000)).unwrap();
    let d = b.norm(&traj.last().unwrap().add_scaled(-1.0, &w));
    (
        nl <= 1e-7 && d <= 1e-6,
        format!("‖N(ω̄)‖={nl:.1e} ‖ω(1)-ω̄‖={d:.1e}"),
    )
}

fn conservation() -> (bool, String) {
    let b = basis();
    let mut w0 = b.steady_field(0.5, 1.0, 0.0);
    w0.axpy(0.05, &fields::random_perturbation(&b, 8, 2024));
    let traj = simulate(&b, &w0, &config(5.0, 500)).unwrap();
    let (de, di, dj) = traj.relative_drift();
    (
        de <= 1e-6 && di <= 1e-6 && dj <= 1e-6,
        format!("drift E={de:.1e} I={di:.1e} J={dj:.1e}"),
    )
}

fn run(orbit: (f64, f64), p: Perturbation, eps: f64, t_end: f64) -> StabilityReport<f64> {
    let b = basis();
    let o = Orbit::new(orbit.0, orbit.1).unwrap();
    run_stability_experiment(&b, &o, &p.field(&b).unwrap(), eps, &config(t_end, 50)).unwrap()
}

fn proposition_bound() -> (bool, String) {
    let limit = prop31_constant::<f64>() + 0.05;
    let jobs: Vec<_> = [(0.0, 1.0), (0.5, 1.0)]
        .into_iter()
        .flat_map(|o| {
            [Perturbation::Mode21, Perturbation::Radial01, Perturbation::Mode12]
                .into_iter()
                .map(move |p| (o, p))
        })
        .collect();
    let ratios: Vec<f64> = thread::scope(|s| {
        let handles: Vec<_> = jobs
            .iter()
            .map(|&(o, p)| s.spawn(move || run(o, p, 0.05, 10.0)))
            .collect();
        handles
            .into_iter()
            .map(|h| {
                let r = h.join().unwrap();
                if r.truncated {
                    f64::INFINITY
                } else {
                    r.prop31_ratio
                }
            })
            .collect()
    });
    let worst = ratios.iter().cloned().fold(0.0, f64::max);
    (
        ratios.iter().all(|r| *r <= limit),
        format!("max sup dist_V/dist_V(0)={worst:.4} limit={limit:.4}"),
    )
}

fn scaling_trends() -> (bool, String) {
    let ladder = [0.02, 0.04, 0.08];
    let reports: Vec<Vec<StabilityReport<f64>>> = thread::scope(|s| {
        let handles: Vec<Vec<_>> = [(0.0, 1.0), (1.0, 0.0)]
            .iter()
            .map(|&o| {
                ladder
                    .iter()
                    .map(|&e| s.spawn(move || run(o, Perturbation::Random { seed: 1 }, e, 10.0)))
                    .collect()
            })
            .collect();
        handles
            .into_iter()
            .map(|hs| hs.into_iter().map(|h| h.join().unwrap()).collect())
            .collect()
    });
    let ratios = |rs: &[StabilityReport<f64>]| -> Vec<f64> {
        rs.windows(2).map(|w| w[1].sup_dist_orbit / w[0].sup_dist_orbit).collect()
    };
    let (r1, r0) = (ratios(&reports[0]), ratios(&reports[1]));
    let c1: Vec<f64> = reports[0].iter().map(|r| r.empirical_constant).collect();
    let c0: Vec<f64> = reports[1].iter().map(|r| r.empirical_constant).collect();
    let truncated = reports.iter().flatten().any(|r| r.truncated);
    let lin = r1.iter().all(|r| (1.5..=2.7).contains(r));
    let sqrt = r0.iter().all(|r| (1.3..=2.1).contains(r));
    let ordered = c0.iter().zip(&c1).all(|(a, b)| a > b);
    let f = |v: &[f64]| v.iter().map(|x| format!("{x:.3}")).collect::<Vec<_>>().join(",");
    (
        !truncated && lin && sqrt && ordered,
        format!(
            "B=1 ratios [{}] {}; B=0 ratios [{}] {}; constants B=0 [{}] vs B=1 [{}] {}",
            f(&r1),
            ok(lin),
            f(&r0),
            ok(sqrt),
            f(&c0),
            f(&c1),
            ok(ordered)
        ),
    )
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAILED"
    }
}

fn rotation_trick() -> (bool, String) {
    let b = basis();
    let mut q = fields::random_perturbation(&b, 8, 77).scaled(0.05);
    q.axpy(1.0, &b.spectral_from_fn(|_, _| 0.1));
    let eps = b.norm(&q);
    let dir = q.scaled(1.0 / eps);
    let orbit = Orbit::new(0.0, 1.0).unwrap();
    let rep = run_stability_experiment(&b, &orbit, &dir, eps, &config(3.0, 50)).unwrap();
    let lift = rep.lift.as_ref().expect("nonzero mean data is lifted");
    let omega = lift.omega;
    let omega_ok = omega.abs() <= eps / (2.0 * PI.sqrt()) + 1e-12;
    let bound = 2.0 * omega.abs() * PI.sqrt() * 1.01;
    let gap = rep
        .dist_orbit
        .iter()
        .zip(&lift.dist_orbit_lifted)
        .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
    (
        !rep.truncated && omega_ok && gap <= bound,
        format!(
            "|Ω|={:.5} ε/(2√π)={:.5} max|dist(ω)-dist(w)|={gap:.5} bound={bound:.5}",
            omega.abs(),
            eps / (2.0 * PI.sqrt())
        ),
    )
}

fn symmetry_obstruction() -> (bool, String) {
    let b = basis();
    let h = 1e-4;
    let fs: [(&str, fn(f64) -> f64); 3] = [
        ("s³", |s| s.powi(3)),
        ("s⁴", |s| s.powi(4)),
        ("cosh", f64::cosh),
    ];
    let mut worst: f64 = 0.0;
    for (_, f) in fs {
        for a in [0.5, 1.0, 2.0] {
            let plus = casimir(&b, &b.steady_field(a, h, 0.0), f).unwrap();
            let minus = casimir(&b, &b.steady_field(a, -h, 0.0), f).unwrap();
            worst = worst.max(((plus - minus) / (2.0 * h)).abs());
        }
    }
    (worst <= 1e-8, format!("max |∂_B F| at B=0: {worst:.1e}"))
}

type Check = fn() -> (bool, String);

fn main() -> ExitCode {
    let checks: [(usize, &'static str, Check); 9] = [
        (1, "special functions", special_functions),
        (2, "transforms and Green operator", transforms_and_green),
        (3, "Poincaré inequality", poincare),
        (4, "steady states", steady_states),
        (5, "conservation", conservation),
        (6, "distance to V stays bounded", proposition_bound),
        (7, "orbital stability scaling", scaling_trends),
        (8, "rotating frame", rotation_trick),
        (9, "symmetric Casimir derivative", symmetry_obstruction),
    ];
    let outcomes: Vec<Outcome> = thread::scope(|s| {
        let handles: Vec<_> = checks
            .iter()
            .map(|&(id, name, check)| {
                s.spawn(move || {
                    let start = Instant::now();
                    let (pass, detail) = check();
                    Outcome { id, name, pass, detail, secs: start.elapsed().as_secs_f64() }
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut failed = 0;
    for o in &outcomes {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] {}. {}: {} ({:.1}s)", o.id, o.name, o.detail, o.secs);
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} passed, {failed} failed", outcomes.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
