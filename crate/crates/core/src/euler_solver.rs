//! Pseudospectral RK4 integration of the vorticity equation
//! `∂_t ω + v·∇ω = 0`, `v = ∇⊥Gω`, plus the rotating-frame reduction to
//! mean-zero data.

use ndarray::{Array2, Axis};

use crate::disk_basis::{BasisSpec, DiskBasis, SpectralField};
use crate::error::SolverError;
use crate::functionals::ConservedLedger;
use crate::scalar::Real;

pub const CFL_LIMIT: f64 = 0.5;
/// Runs abort once `‖ω‖_∞` exceeds this multiple of its initial value.
pub const BLOW_UP_FACTOR: f64 = 1e3;

/// Exponential damping `exp(-strength · q^order)` of coefficient `(n, m)`
/// with `q = max(n / n_max, m / (k - 1))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpFilter {
    pub strength: f64,
    pub order: i32,
}

impl Default for ExpFilter {
    fn default() -> Self {
        Self {
            strength: 36.0,
            order: 36,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub dt: f64,
    pub t_end: f64,
    pub save_every: usize,
    pub basis: BasisSpec,
    pub filter: Option<ExpFilter>,
}

impl SolverConfig {
    pub fn new(dt: f64, t_end: f64, save_every: usize, basis: BasisSpec) -> Self {
        Self {
            dt,
            t_end,
            save_every,
            basis,
            filter: None,
        }
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(SolverError::Config(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_end.is_finite() && self.t_end > 0.0) {
            return Err(SolverError::Config(format!(
                "t_end must be positive, got {}",
                self.t_end
            )));
        }
        if self.save_every == 0 {
            return Err(SolverError::Config("save_every must be at least 1".into()));
        }
        if let Some(f) = self.filter {
            if !(f.strength.is_finite() && f.strength >= 0.0) || f.order < 2 {
                return Err(SolverError::Config(format!("invalid filter {f:?}")));
            }
        }
        self.basis.validate()?;
        Ok(())
    }

    /// Number of RK4 steps; `t_end` is reached to within rounding.
    pub fn steps(&self) -> usize {
        (self.t_end / self.dt - 1e-9).ceil().max(1.0) as usize
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    pub times: Vec<T>,
    pub snapshots: Vec<SpectralField<T>>,
    pub ledgers: Vec<ConservedLedger<T>>,
}

impl<T: Real> Trajectory<T> {
    fn new() -> Self {
        Self {
            times: Vec::new(),
            snapshots: Vec::new(),
            ledgers: Vec::new(),
        }
    }

    fn record(&mut self, basis: &DiskBasis<T>, w: &SpectralField<T>, t: T) {
        self.times.push(t);
        self.ledgers.push(ConservedLedger::measure(basis, w, t));
        self.snapshots.push(w.clone());
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<&SpectralField<T>> {
        self.snapshots.last()
    }

    /// Largest relative deviation from the initial value of
    /// `(energy, impulse, enstrophy)`, each normalized by `max(|X(0)|, 1e-12)`.
    pub fn relative_drift(&self) -> (T, T, T) {
        let Some(first) = self.ledgers.first() else {
            return (T::zero(), T::zero(), T::zero());
        };
        let floor = T::lit(1e-12);
        let rel = |f: fn(&ConservedLedger<T>) -> T| {
            let x0 = f(first);
            let d = x0.abs().max(floor);
            self.ledgers
                .iter()
                .fold(T::zero(), |m, l| m.max((f(l) - x0).abs() / d))
        };
        (rel(|l| l.energy), rel(|l| l.impulse), rel(|l| l.enstrophy))
    }
}

fn config_matches<T: Real>(basis: &DiskBasis<T>, config: &SolverConfig) -> Result<(), SolverError> {
    config.validate()?;
    let (a, b) = (basis.spec(), &config.basis);
    if a.n_theta != b.n_theta || a.k_radial != b.k_radial || a.dealias_pad != b.dealias_pad {
        return Err(SolverError::Config(format!(
            "solver basis {b:?} does not match the field basis {a:?}"
        )));
    }
    Ok(())
}

/// `-v·∇ω` evaluated on the padded grid and truncated back to the basis.
pub fn nonlinear_term<T: Real>(
    basis: &DiskBasis<T>,
    w: &SpectralField<T>,
) -> Result<SpectralField<T>, SolverError> {
    basis.check_spectral(w)?;
    Ok(advection(basis, w))
}

fn advection<T: Real>(basis: &DiskBasis<T>, w: &SpectralField<T>) -> SpectralField<T> {
    let pad = basis.pad_grid();
    let psi = basis.green_unchecked(w);
    let psi_t = pad.synthesize(&psi.d_theta(), false);
    let psi_r = pad.synthesize(&basis.d_r(&psi), true);
    let w_t = pad.synthesize(&w.d_theta(), false);
    let w_r = pad.synthesize(&basis.d_r(w), true);
    // -(v_r ω_r + v_θ ω_θ / r) = -(ψ_θ ω_r - ψ_r ω_θ) / r
    let mut rhs: Array2<T> = &psi_r * &w_t - &psi_t * &w_r;
    for (mut row, &r) in rhs.axis_iter_mut(Axis(0)).zip(pad.r.iter()) {
        let inv = T::one() / r;
        row.mapv_inplace(|v| v * inv);
    }
    pad.analyze(&rhs)
}

/// One classical RK4 step.
pub fn step<T: Real>(
    basis: &DiskBasis<T>,
    w: &SpectralField<T>,
    dt: T,
) -> Result<SpectralField<T>, SolverError> {
    basis.check_spectral(w)?;
    Ok(rk4(basis, w, dt))
}

fn rk4<T: Real>(basis: &DiskBasis<T>, w: &SpectralField<T>, dt: T) -> SpectralField<T> {
    let half = dt * T::lit(0.5);
    let k1 = advection(basis, w);
    let k2 = advection(basis, &w.add_scaled(half, &k1));
    let k3 = advection(basis, &w.add_scaled(half, &k2));
    let k4 = advection(basis, &w.add_scaled(dt, &k3));
    let sixth = dt / T::lit(6.0);
    let mut out = w.clone();
    out.axpy(sixth, &k1);
    out.axpy(sixth * T::lit(2.0), &k2);
    out.axpy(sixth * T::lit(2.0), &k3);
    out.axpy(sixth, &k4);
    out
}

/// `dt · max(|v_r|/Δr + |v_θ|/(r Δθ))` over the collocation grid, where
/// `Δr` is the gap to the nearest radial neighbour.
pub fn cfl_number<T: Real>(basis: &DiskBasis<T>, w: &SpectralField<T>, dt: T) -> Result<T, SolverError> {
    let (vr, vt) = basis.velocity(w)?;
    let r = basis.radial_nodes();
    let k = r.len();
    let dtheta = T::PI() * T::lit(2.0) / T::from_usize_lossy(basis.spec().n_theta);
    let mut worst = T::zero();
    for i in 0..k {
        let above = if i == 0 { T::infinity() } else { r[i - 1] - r[i] };
        // across the pole the nearest node is the reflected one
        let below = if i + 1 == k { T::lit(2.0) * r[i] } else { r[i] - r[i + 1] };
        let dr = above.min(below);
        for j in 0..vr.values.ncols() {
            let c = vr.values[[i, j]].abs() / dr + vt.values[[i, j]].abs() / (r[i] * dtheta);
            worst = worst.max(c);
        }
    }
    Ok(worst * dt)
}

fn apply_filter<T: Real>(w: &mut SpectralField<T>, f: &ExpFilter) {
    let (rows, k) = w.shape();
    let n_max = (rows - 1).max(1);
    for n in 0..rows {
        for m in 0..k {
            let q = (n as f64 / n_max as f64).max(m as f64 / (k - 1) as f64);
            let s = T::lit((-f.strength * q.powi(f.order)).exp());
            w.cos[[n, m]] *= s;
            w.sin[[n, m]] *= s;
        }
    }
}

fn sup_norm<T: Real>(basis: &DiskBasis<T>, w: &SpectralField<T>) -> T {
    basis.synthesize(w).map(|g| g.max_abs()).unwrap_or(T::nan())
}

/// Integrates `w0` to `config.t_end`. On failure the trajectory recorded so
/// far is returned next to the error.
pub fn simulate_partial<T: Real>(
    basis: &DiskBasis<T>,
    w0: &SpectralField<T>,
    config: &SolverConfig,
) -> (Trajectory<T>, Option<SolverError>) {
    let mut traj = Trajectory::new();
    if let Err(e) = config_matches(basis, config).and_then(|_| Ok(basis.check_spectral(w0)?)) {
        return (traj, Some(e));
    }
    let dt = T::lit(config.dt);
    let limit = T::lit(CFL_LIMIT);
    let check_cfl = |w: &SpectralField<T>, time: f64| -> Result<(), SolverError> {
        let cfl = cfl_number(basis, w, dt)?;
        if !(cfl <= limit) {
            return Err(SolverError::StepSize {
                cfl: cfl.to_f64_lossy(),
                limit: CFL_LIMIT,
                time,
            });
        }
        Ok(())
    };
    if let Err(e) = check_cfl(w0, 0.0) {
        return (traj, Some(e));
    }
    let initial_sup = sup_norm(basis, w0);
    if !initial_sup.is_finite() {
        return (
            traj,
            Some(SolverError::BlowUp {
                last_valid_time: 0.0,
                reason: "initial field is not finite".into(),
            }),
        );
    }
    traj.record(basis, w0, T::zero());

    let steps = config.steps();
    let mut w = w0.clone();
    let mut last_valid = 0.0;
    for s in 1..=steps {
        w = rk4(basis, &w, dt);
        if let Some(f) = &config.filter {
            apply_filter(&mut w, f);
        }
        let t = s as f64 * config.dt;
        if !w.is_finite() {
            let e = SolverError::BlowUp {
                last_valid_time: last_valid,
                reason: format!("non-finite coefficients at t = {t}"),
            };
            return (traj, Some(e));
        }
        last_valid = t;
        if s % config.save_every == 0 || s == steps {
            let sup = sup_norm(basis, &w);
            if !sup.is_finite()
                || (initial_sup > T::zero() && sup > initial_sup * T::lit(BLOW_UP_FACTOR))
            {
                let e = SolverError::BlowUp {
                    last_valid_time: traj.times.last().map_or(0.0, |t| t.to_f64_lossy()),
                    reason: format!("sup norm {sup:e} exceeds {BLOW_UP_FACTOR:e} x initial {initial_sup:e}"),
                };
                return (traj, Some(e));
            }
            traj.record(basis, &w, T::lit(t));
            if let Err(e) = check_cfl(&w, t) {
                return (traj, Some(e));
            }
        }
    }
    (traj, None)
}

pub fn simulate<T: Real>(
    basis: &DiskBasis<T>,
    w0: &SpectralField<T>,
    config: &SolverConfig,
) -> Result<Trajectory<T>, SolverError> {
    match simulate_partial(basis, w0, config) {
        (traj, None) => Ok(traj),
        (_, Some(e)) => Err(e),
    }
}

/// `(r, θ) ↦ ω(r, θ - β)`.
pub fn rotate_field<T: Real>(basis: &DiskBasis<T>, w: &SpectralField<T>, beta: T) -> SpectralField<T> {
    basis.rotate(w, beta)
}

/// Returns `(w₀, Ω)` with `Ω = -mean(ω₀)/2` and `w₀ = ω₀ + 2Ω`, which has
/// zero mean.
pub fn rotate_and_lift<T: Real>(basis: &DiskBasis<T>, w0: &SpectralField<T>) -> (SpectralField<T>, T) {
    let omega = -basis.spectral_mean(w0) * T::lit(0.5);
    let mut lifted = w0.clone();
    lifted.cos[[0, 0]] += T::lit(2.0) * omega;
    (lifted, omega)
}

/// Maps a rotating-frame state `w_t` back to `ω_t = w_t(R_{-Ωt}·) - 2Ω`.
pub fn unlift<T: Real>(basis: &DiskBasis<T>, w: &SpectralField<T>, omega: T, t: T) -> SpectralField<T> {
    let mut out = basis.rotate(w, -omega * t);
    out.cos[[0, 0]] -= T::lit(2.0) * omega;
    out
}
