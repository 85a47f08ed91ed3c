//! Distances to the steady space `V` and to rotational orbits, the
//! eigenvalue constants, and the perturbation experiment harness.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use crate::disk_basis::{DiskBasis, SpectralField};
use crate::error::{SolverError, StabilityError};
use crate::euler_solver::{self, SolverConfig};
use crate::fields::{self, Trig};
use crate::functionals::ConservedLedger;
use crate::scalar::Real;
use crate::special_fn;

/// Rotational orbit `{A J₀(jr) + B J₁(jr) cos(θ + α) : α ∈ ℝ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Orbit<T> {
    a: T,
    b: T,
}

impl<T: Real> Orbit<T> {
    pub fn new(a: T, b: T) -> Result<Self, StabilityError> {
        if !(a.is_finite() && b.is_finite() && b >= T::zero()) {
            return Err(StabilityError::InvalidOrbit {
                a: a.to_f64_lossy(),
                b: b.to_f64_lossy(),
            });
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> T {
        self.a
    }

    pub fn b(&self) -> T {
        self.b
    }

    /// The orbit point with phase `α`.
    pub fn point(&self, basis: &DiskBasis<T>, alpha: T) -> SpectralField<T> {
        let (s, c) = alpha.sin_cos();
        basis.steady_field(self.a, self.b * c, -self.b * s)
    }
}

/// Coordinates of `P₁ω = a J₀(jr) + b_c J₁(jr) cos θ + b_s J₁(jr) sin θ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VCoordinates<T> {
    pub a: T,
    pub b_c: T,
    pub b_s: T,
}

impl<T: Real> VCoordinates<T> {
    /// `B' = √(b_c² + b_s²)`.
    pub fn b_prime(&self) -> T {
        self.b_c.hypot(self.b_s)
    }

    /// Phase `α'` with `P₁ω = a J₀ + B' J₁ cos(θ + α')`; zero when `B' = 0`.
    pub fn alpha_prime(&self) -> T {
        if self.b_prime() == T::zero() {
            T::zero()
        } else {
            (-self.b_s).atan2(self.b_c)
        }
    }

    pub fn reconstruct(&self, basis: &DiskBasis<T>) -> SpectralField<T> {
        basis.steady_field(self.a, self.b_c, self.b_s)
    }
}

pub fn project_v<T: Real>(basis: &DiskBasis<T>, w: &SpectralField<T>) -> VCoordinates<T> {
    let (a, b_c, b_s) = basis.steady_coordinates(w);
    VCoordinates { a, b_c, b_s }
}

/// `‖ω - P₁ω‖₂`.
pub fn dist_to_v<T: Real>(basis: &DiskBasis<T>, w: &SpectralField<T>) -> T {
    let p = project_v(basis, w).reconstruct(basis);
    basis.norm(&w.add_scaled(-T::one(), &p))
}

/// Closed-form distance to the orbit, minimized over the phase.
pub fn dist_to_orbit<T: Real>(basis: &DiskBasis<T>, w: &SpectralField<T>, orbit: &Orbit<T>) -> T {
    let dv = dist_to_v(basis, w);
    let c = project_v(basis, w);
    let (n0, n1) = basis.steady_norms_sq();
    let da = orbit.a - c.a;
    let db = orbit.b - c.b_prime();
    (dv * dv + da * da * n0 + db * db * n1).sqrt()
}

/// `Λ₁ = j²`.
pub fn lambda1<T: Real>() -> T {
    let j: T = special_fn::steady_wavenumber();
    j * j
}

/// `Λ₂ = j_{2,1}²`.
pub fn lambda2<T: Real>() -> T {
    let z: T = special_fn::bessel_zero(2, 1).expect("j_{2,1} is always found");
    z * z
}

/// `√(Λ₂ / (Λ₂ - Λ₁))` for given eigenvalues.
pub fn prop31_constant_with<T: Real>(lambda1: T, lambda2: T) -> T {
    (lambda2 / (lambda2 - lambda1)).sqrt()
}

pub fn prop31_constant<T: Real>() -> T {
    prop31_constant_with(lambda1(), lambda2())
}

/// Right-hand side of the orbital stability estimate for `dist₂(ω₀, O) ≤ ε`:
/// `C B⁻¹ (A² + B²)^{1/2} ε + C B⁻¹ ε²` when `B > 0`, and
/// `C |A|^{1/2} ε^{1/2} + C ε` when `B = 0`.
pub fn theorem_bound<T: Real>(orbit: &Orbit<T>, eps: T, c: T) -> T {
    if orbit.b > T::zero() {
        c / orbit.b * (orbit.a.hypot(orbit.b) * eps + eps * eps)
    } else {
        c * (orbit.a.abs().sqrt() * eps.sqrt() + eps)
    }
}

/// Named unit-norm perturbation directions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Perturbation {
    /// `J₂(j_{2,1} r) cos 2θ`
    Mode21,
    /// `J₀(j_{0,1} r)` minus its mean
    Radial01,
    /// `J₁(j_{1,2} r) cos θ`
    Mode12,
    /// Seeded random polynomial with zero mean
    Random { seed: u64 },
    /// `J₁(jr) sin θ`, tangent to the orbit through `B J₁ cos θ`
    AlongOrbit,
}

/// Polynomial degree used for random perturbations.
pub const RANDOM_DEGREE: usize = 8;

impl Perturbation {
    pub fn field<T: Real>(&self, basis: &DiskBasis<T>) -> Result<SpectralField<T>, StabilityError> {
        let raw = match *self {
            Perturbation::Mode21 => fields::bessel_mode(basis, 2, 1, Trig::Cos).map_err(bad)?,
            Perturbation::Radial01 => {
                let mut f = fields::bessel_mode(basis, 0, 1, Trig::Cos).map_err(bad)?;
                fields::remove_mean(basis, &mut f);
                f
            }
            Perturbation::Mode12 => fields::bessel_mode(basis, 1, 2, Trig::Cos).map_err(bad)?,
            Perturbation::Random { seed } => fields::random_perturbation(basis, RANDOM_DEGREE, seed),
            Perturbation::AlongOrbit => basis.steady_field(T::zero(), T::zero(), T::one()),
        };
        Ok(fields::normalized(basis, &raw))
    }
}

fn bad(e: crate::error::SpecialFnError) -> StabilityError {
    StabilityError::Basis(e.into())
}

impl fmt::Display for Perturbation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Perturbation::Mode21 => f.write_str("mode21"),
            Perturbation::Radial01 => f.write_str("radial01"),
            Perturbation::Mode12 => f.write_str("mode12"),
            Perturbation::Random { seed } => write!(f, "random:{seed}"),
            Perturbation::AlongOrbit => f.write_str("along_orbit"),
        }
    }
}

impl FromStr for Perturbation {
    type Err = StabilityError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "mode21" => Ok(Perturbation::Mode21),
            "radial01" => Ok(Perturbation::Radial01),
            "mode12" => Ok(Perturbation::Mode12),
            "along_orbit" => Ok(Perturbation::AlongOrbit),
            "random" => Ok(Perturbation::Random { seed: 0 }),
            other => match other.strip_prefix("random:").map(str::parse) {
                Some(Ok(seed)) => Ok(Perturbation::Random { seed }),
                _ => Err(StabilityError::Config(format!("unknown perturbation `{other}`"))),
            },
        }
    }
}

/// Rotating-frame data for runs started from nonzero-mean vorticity.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftRecord<T> {
    /// `Ω = -mean(ω₀)/2`
    pub omega: T,
    /// `dist₂(w_t, O)` in the rotating frame
    pub dist_orbit_lifted: Vec<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport<T> {
    pub orbit: Orbit<T>,
    pub epsilon: T,
    pub times: Vec<T>,
    pub dist_orbit: Vec<T>,
    pub dist_v: Vec<T>,
    pub coordinates: Vec<VCoordinates<T>>,
    pub ledgers: Vec<ConservedLedger<T>>,
    pub sup_dist_orbit: T,
    /// `sup_t dist₂(ω_t, O)` over the bound with `C = 1`; NaN when that is 0.
    pub empirical_constant: T,
    /// `sup_t dist_V(t) / dist_V(0)`; NaN when `dist_V(0) = 0`.
    pub prop31_ratio: T,
    pub lift: Option<LiftRecord<T>>,
    pub truncated: bool,
    pub failure: Option<SolverError>,
}

impl<T: Real> StabilityReport<T> {
    pub fn write_csv<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(
            out,
            "t,dist_orbit,dist_V,E,I,J,EC,A_prime,B_prime,alpha_prime,mean_omega"
        )?;
        for i in 0..self.times.len() {
            let l = &self.ledgers[i];
            let c = &self.coordinates[i];
            let row = [
                self.times[i],
                self.dist_orbit[i],
                self.dist_v[i],
                l.energy,
                l.impulse,
                l.enstrophy,
                l.energy_casimir,
                c.a,
                c.b_prime(),
                c.alpha_prime(),
                l.mean_vorticity,
            ];
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        writeln!(
            out,
            "# sup_dist_orbit={:.16e}, empirical_constant={:.16e}, prop31_ratio={:.16e}",
            self.sup_dist_orbit, self.empirical_constant, self.prop31_ratio
        )
    }
}

fn ratio_or_nan<T: Real>(num: T, den: T) -> T {
    if den > T::zero() {
        num / den
    } else {
        T::nan()
    }
}

/// Evolves `A J₀ + B J₁ cos θ + ε·perturbation` and measures distances to the
/// orbit and to `V` at every saved step. Nonzero-mean data is evolved in the
/// rotating frame and mapped back.
pub fn run_stability_experiment<T: Real>(
    basis: &DiskBasis<T>,
    orbit: &Orbit<T>,
    perturbation: &SpectralField<T>,
    eps: T,
    config: &SolverConfig,
) -> Result<StabilityReport<T>, StabilityError> {
    if !(eps.is_finite() && eps >= T::zero()) {
        return Err(StabilityError::Config(format!("eps must be nonnegative, got {eps}")));
    }
    basis.check_spectral(perturbation)?;
    let pn = basis.norm(perturbation);
    if (pn - T::one()).abs() > T::lit(1e-8) {
        return Err(StabilityError::Config(format!(
            "perturbation must have unit norm, got {pn}"
        )));
    }
    let mut w0 = orbit.point(basis, T::zero());
    w0.axpy(eps, perturbation);

    let mean = basis.spectral_mean(&w0);
    let lifted = mean.abs() > T::epsilon() * T::lit(16.0);
    let (start, omega) = if lifted {
        euler_solver::rotate_and_lift(basis, &w0)
    } else {
        (w0, T::zero())
    };

    let (traj, failure) = euler_solver::simulate_partial(basis, &start, config);
    if traj.is_empty() {
        return Err(failure
            .unwrap_or_else(|| SolverError::Config("empty trajectory".into()))
            .into());
    }

    let mut report = StabilityReport {
        orbit: *orbit,
        epsilon: eps,
        times: traj.times.clone(),
        dist_orbit: Vec::with_capacity(traj.len()),
        dist_v: Vec::with_capacity(traj.len()),
        coordinates: Vec::with_capacity(traj.len()),
        ledgers: Vec::with_capacity(traj.len()),
        sup_dist_orbit: T::zero(),
        empirical_constant: T::zero(),
        prop31_ratio: T::zero(),
        lift: lifted.then(|| LiftRecord {
            omega,
            dist_orbit_lifted: Vec::with_capacity(traj.len()),
        }),
        truncated: failure.is_some(),
        failure,
    };
    for (w, &t) in traj.snapshots.iter().zip(traj.times.iter()) {
        let physical = if lifted {
            let l = report.lift.as_mut().expect("lift record present");
            l.dist_orbit_lifted.push(dist_to_orbit(basis, w, orbit));
            euler_solver::unlift(basis, w, omega, t)
        } else {
            w.clone()
        };
        report.dist_orbit.push(dist_to_orbit(basis, &physical, orbit));
        report.dist_v.push(dist_to_v(basis, &physical));
        report.coordinates.push(project_v(basis, &physical));
        report.ledgers.push(ConservedLedger::measure(basis, &physical, t));
    }
    let sup = |v: &[T]| v.iter().fold(T::zero(), |m, &x| m.max(x));
    report.sup_dist_orbit = sup(&report.dist_orbit);
    report.empirical_constant = ratio_or_nan(
        report.sup_dist_orbit,
        theorem_bound(orbit, eps, T::one()),
    );
    report.prop31_ratio = ratio_or_nan(sup(&report.dist_v), report.dist_v[0]);
    Ok(report)
}
