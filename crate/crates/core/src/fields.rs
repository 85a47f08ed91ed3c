//! Constructors for the fields used in experiments: Bessel disk modes and
//! seeded random smooth fields.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::disk_basis::{DiskBasis, SpectralField};
use crate::error::SpecialFnError;
use crate::scalar::Real;
use crate::special_fn;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trig {
    Cos,
    Sin,
}

/// `J_n(s r) cos nθ` (or `sin nθ`) for an arbitrary wavenumber `s`.
pub fn bessel_mode_with<T: Real>(
    basis: &DiskBasis<T>,
    n: u32,
    wavenumber: T,
    trig: Trig,
) -> SpectralField<T> {
    let nn = T::from_u32(n).unwrap();
    basis.spectral_from_fn(|r, th| {
        let ang = match trig {
            Trig::Cos => (nn * th).cos(),
            Trig::Sin => (nn * th).sin(),
        };
        special_fn::jn(n, wavenumber * r) * ang
    })
}

/// Dirichlet eigenmode `J_n(j_{n,k} r) cos nθ` (or `sin nθ`).
pub fn bessel_mode<T: Real>(
    basis: &DiskBasis<T>,
    n: u32,
    k: u32,
    trig: Trig,
) -> Result<SpectralField<T>, SpecialFnError> {
    let z = special_fn::bessel_zero(n, k)?;
    Ok(bessel_mode_with(basis, n, z, trig))
}

/// Removes the area mean by adjusting the constant coefficient.
pub fn remove_mean<T: Real>(basis: &DiskBasis<T>, c: &mut SpectralField<T>) {
    let m = basis.spectral_mean(c);
    c.cos[[0, 0]] -= m;
}

/// Scales `c` to unit `L²(D)` norm. Zero fields are returned unchanged.
pub fn normalized<T: Real>(basis: &DiskBasis<T>, c: &SpectralField<T>) -> SpectralField<T> {
    let n = basis.norm(c);
    if n > T::zero() {
        c.scaled(T::one() / n)
    } else {
        c.clone()
    }
}

/// Random Cartesian polynomial `Σ_{a+b ≤ degree} c_ab x^a y^b` with
/// coefficients uniform in `[-1, 1]`. Polynomials are smooth on the disk and
/// exactly representable whenever `degree ≤ max_order`.
pub fn random_polynomial<T: Real>(basis: &DiskBasis<T>, degree: usize, seed: u64) -> SpectralField<T> {
    let degree = degree.min(basis.max_order());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coef = Vec::new();
    for total in 0..=degree {
        for a in 0..=total {
            let c: f64 = rng.gen_range(-1.0..=1.0);
            coef.push((a, total - a, T::lit(c)));
        }
    }
    basis.spectral_from_fn(|r, th| {
        let (x, y) = (r * th.cos(), r * th.sin());
        coef.iter()
            .fold(T::zero(), |s, &(a, b, c)| s + c * x.powi(a as i32) * y.powi(b as i32))
    })
}

/// Seeded random mean-zero field of unit norm.
pub fn random_perturbation<T: Real>(basis: &DiskBasis<T>, degree: usize, seed: u64) -> SpectralField<T> {
    let mut c = random_polynomial(basis, degree, seed);
    remove_mean(basis, &mut c);
    normalized(basis, &c)
}
