//! Conserved quantities of the Euler flow and general Casimirs.

use crate::disk_basis::{DiskBasis, SpectralField};
use crate::error::FunctionalError;
use crate::scalar::Real;

/// Snapshot of the invariants at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConservedLedger<T> {
    pub energy: T,
    pub impulse: T,
    pub enstrophy: T,
    pub energy_casimir: T,
    pub mean_vorticity: T,
    pub time_stamp: T,
}

impl<T: Real> ConservedLedger<T> {
    pub fn measure(basis: &DiskBasis<T>, w: &SpectralField<T>, time: T) -> Self {
        let e = energy(basis, w);
        let j = enstrophy(basis, w);
        Self {
            energy: e,
            impulse: impulse(basis, w),
            enstrophy: j,
            energy_casimir: combine_ec(basis, e, j),
            mean_vorticity: basis.spectral_mean(w),
            time_stamp: time,
        }
    }

    pub fn is_finite(&self) -> bool {
        [
            self.energy,
            self.impulse,
            self.enstrophy,
            self.energy_casimir,
            self.mean_vorticity,
            self.time_stamp,
        ]
        .iter()
        .all(|v| v.is_finite())
    }
}

/// Kinetic energy `½∫ ω Gω`.
pub fn energy<T: Real>(basis: &DiskBasis<T>, w: &SpectralField<T>) -> T {
    let psi = basis.green_unchecked(w);
    (T::lit(0.5) * basis.inner(w, &psi)).max(T::zero())
}

/// Impulse `∫ |x|² ω`.
pub fn impulse<T: Real>(basis: &DiskBasis<T>, w: &SpectralField<T>) -> T {
    basis.spectral_impulse(w)
}

/// Enstrophy `∫ ω²`.
pub fn enstrophy<T: Real>(basis: &DiskBasis<T>, w: &SpectralField<T>) -> T {
    basis.inner(w, w).max(T::zero())
}

fn combine_ec<T: Real>(basis: &DiskBasis<T>, e: T, j: T) -> T {
    let k = basis.constants().j;
    T::lit(2.0) * e - j / (k * k)
}

/// `2E - J/j²`; nonpositive on mean-zero fields and zero on the steady space.
pub fn energy_casimir<T: Real>(basis: &DiskBasis<T>, w: &SpectralField<T>) -> T {
    combine_ec(basis, energy(basis, w), enstrophy(basis, w))
}

/// `∫ f(ω)` by quadrature on the padded grid.
pub fn casimir<T: Real, F: Fn(T) -> T>(
    basis: &DiskBasis<T>,
    w: &SpectralField<T>,
    f: F,
) -> Result<T, FunctionalError> {
    let pad = basis.pad_grid();
    let mut values = pad.synthesize(w, false);
    for v in values.iter_mut() {
        let fv = f(*v);
        if !fv.is_finite() {
            return Err(FunctionalError::NonFinite {
                value: fv.to_f64_lossy(),
                at: v.to_f64_lossy(),
            });
        }
        *v = fv;
    }
    Ok(pad.integrate(&values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disk_basis::BasisSpec;
    use crate::fields::{self, Trig};

    fn basis() -> DiskBasis<f64> {
        DiskBasis::build(BasisSpec::new(32, 32)).unwrap()
    }

    #[test]
    fn energy_of_first_modes() {
        let b = basis();
        let j = b.constants().j;
        assert_eq!(energy(&b, &b.spectral_zeros()), 0.0);
        let c = fields::bessel_mode(&b, 1, 1, Trig::Cos).unwrap();
        let s = fields::bessel_mode(&b, 1, 1, Trig::Sin).unwrap();
        let e = energy(&b, &c);
        assert!((e - b.constants().norm_j1_sq / (2.0 * j * j)).abs() < 1e-10);
        assert!((e - 0.008678).abs() < 1e-5);
        assert!((energy(&b, &s) - e).abs() < 1e-12);
        let scaled = energy(&b, &c.scaled(3.0));
        assert!((scaled / e - 9.0).abs() < 1e-10);
    }

    #[test]
    fn impulse_examples() {
        let b = basis();
        let c = fields::bessel_mode(&b, 1, 1, Trig::Cos).unwrap();
        assert!(impulse(&b, &c).abs() < 1e-12);
        let j0 = b.steady_field(1.0, 0.0, 0.0);
        assert!((impulse(&b, &j0) + 0.34472).abs() < 1e-4);
        let one = b.spectral_from_fn(|_, _| 1.0);
        assert!((impulse(&b, &one) - std::f64::consts::FRAC_PI_2).abs() < 1e-13);
    }

    #[test]
    fn enstrophy_of_orbit_points() {
        let b = basis();
        let (n0, n1) = (b.constants().norm_j0_sq, b.constants().norm_j1_sq);
        let j0 = b.steady_field(1.0, 0.0, 0.0);
        assert!((enstrophy(&b, &j0) - n0).abs() < 1e-10);
        for alpha in [0.0, 0.4, 2.0, -1.3] {
            let (a, bb) = (0.7, 1.9);
            let w = b.steady_field(a, bb * f64::cos(alpha), -bb * f64::sin(alpha));
            assert!((enstrophy(&b, &w) - (a * a * n0 + bb * bb * n1)).abs() < 1e-10);
        }
    }

    #[test]
    fn energy_casimir_examples() {
        let b = basis();
        assert_eq!(energy_casimir(&b, &b.spectral_zeros()), 0.0);
        let v = b.steady_field(1.3, -0.4, 2.0);
        assert!(energy_casimir(&b, &v).abs() < 1e-8);
        let j21 = b.constants().j21;
        let j = b.constants().j;
        let w = fields::bessel_mode(&b, 2, 1, Trig::Cos).unwrap();
        let want = (1.0 / (j21 * j21) - 1.0 / (j * j)) * enstrophy(&b, &w);
        assert!((energy_casimir(&b, &w) - want).abs() < 1e-8);
    }

    #[test]
    fn casimir_examples() {
        let b = basis();
        let w = fields::random_polynomial(&b, 8, 11);
        let sq = casimir(&b, &w, |s| s * s).unwrap();
        assert!((sq - enstrophy(&b, &w)).abs() < 1e-12);
        let lin = casimir(&b, &w, |s| s).unwrap();
        let grid = b.synthesize(&w).unwrap();
        assert!((lin - b.integrate(&grid).unwrap()).abs() < 1e-12);
        let err = casimir(&b, &w, |s| if s > 0.5 { f64::NAN } else { s });
        assert!(matches!(err, Err(FunctionalError::NonFinite { .. })));
    }

    #[test]
    fn radial_states_are_critical_in_b() {
        let b = basis();
        let h = 1e-4;
        let dfb = |f: &dyn Fn(f64) -> f64| {
            let plus = casimir(&b, &b.steady_field(1.0, h, 0.0), f).unwrap();
            let minus = casimir(&b, &b.steady_field(1.0, -h, 0.0), f).unwrap();
            (plus - minus) / (2.0 * h)
        };
        assert!(dfb(&|s: f64| s.powi(4)).abs() < 1e-8);
    }
}
