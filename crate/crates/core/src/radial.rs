//! Parity-restricted Chebyshev machinery for the radial direction.
//!
//! The radial coordinate is treated on the doubled interval `r ∈ [-1, 1]`.
//! A Fourier mode of order `n` has a radial profile with parity `(-1)^n`
//! under `r → -r`, so it is expanded in `T_{2m+p}` with `p = n mod 2`.
//! Collocation uses the positive half of the Chebyshev–Lobatto points of
//! degree `2k - 1`; the origin is never a node.

use ndarray::{Array1, Array2};

use crate::error::BasisError;
use crate::linalg::Lu;
use crate::scalar::Real;

/// Angles `φ_i = iπ/(2k-1)`, `i = 0..k`, of the positive radial nodes `r_i = cos φ_i`.
pub(crate) fn node_angles<T: Real>(k: usize) -> Array1<T> {
    let denom = T::from_usize_lossy(2 * k - 1);
    (0..k).map(|i| T::PI() * T::from_usize_lossy(i) / denom).collect()
}

pub(crate) fn nodes<T: Real>(k: usize) -> Array1<T> {
    node_angles::<T>(k).mapv(|phi| phi.cos())
}

/// `T_q(r)` for `r ∈ [-1, 1]`.
#[inline]
pub(crate) fn cheb<T: Real>(q: usize, r: T) -> T {
    let r = r.max(-T::one()).min(T::one());
    (T::from_usize_lossy(q) * r.acos()).cos()
}

/// Values of `T_{2m+p}` at the nodes: `out[i][m] = T_{2m+p}(r_i)`.
pub(crate) fn vandermonde<T: Real>(r: &Array1<T>, count: usize, parity: usize) -> Array2<T> {
    Array2::from_shape_fn((r.len(), count), |(i, m)| cheb(2 * m + parity, r[i]))
}

/// Maps the `T_{2m+p}` coefficients of a profile to the `T_{2m+1-p}`
/// coefficients of its derivative.
pub(crate) fn derivative<T: Real>(k: usize, parity: usize) -> Array2<T> {
    let mut d = Array2::zeros((k, k));
    for m in 0..k {
        if parity == 0 {
            // T'_{2m} = 4m Σ_{odd j < 2m} T_j
            for jj in 0..m {
                d[[jj, m]] = T::from_usize_lossy(4 * m);
            }
        } else {
            // T'_{2m+1} = (2m+1) (T_0 + 2 Σ_{even 0 < j ≤ 2m} T_j)
            let q = T::from_usize_lossy(2 * m + 1);
            d[[0, m]] = q;
            for jj in 1..=m {
                d[[jj, m]] = q * T::lit(2.0);
            }
        }
    }
    d
}

/// `∫₀¹ T_{2m}(r) r dr`.
pub(crate) fn even_moment<T: Real>(m: usize) -> T {
    if m % 2 == 1 {
        return T::zero();
    }
    // m even: (1/2)[1/(2m+2) + 1/(2-2m)]
    let mm = T::from_usize_lossy(m);
    let two = T::lit(2.0);
    T::lit(0.5) * (T::one() / (two * mm + two) + T::one() / (two - two * mm))
}

/// Radial rule on the `k` positive nodes, exact for `∫₀¹ p(r²) r dr` with
/// `deg p ≤ k - 1`.
pub(crate) fn weights<T: Real>(k: usize) -> Result<Array1<T>, BasisError> {
    let r = nodes::<T>(k);
    let v = vandermonde(&r, k, 0);
    let moments: Array1<T> = (0..k).map(even_moment).collect();
    let lu = Lu::factor(&v.t().to_owned())?;
    Ok(lu.solve(moments.view()))
}

/// Exact Gram matrices `∫₀¹ T_{2m+p} T_{2m'+p} r dr` and radial moments,
/// evaluated with a rule large enough to integrate every product exactly.
#[derive(Debug)]
pub(crate) struct RadialIntegrals<T> {
    pub gram: [Array2<T>; 2],
    /// `∫₀¹ T_{2m}(r) r³ dr`
    pub impulse: Array1<T>,
    /// `∫₀¹ T_{2m}(r) r dr`
    pub mean: Array1<T>,
}

impl<T: Real> RadialIntegrals<T> {
    pub(crate) fn new(k: usize) -> Result<Self, BasisError> {
        let fine = 2 * k + 2;
        let r = nodes::<T>(fine);
        let w = weights::<T>(fine)?;
        let gram = [0, 1].map(|p| {
            let v = vandermonde(&r, k, p);
            let wv = &v * &w.view().insert_axis(ndarray::Axis(1));
            v.t().dot(&wv)
        });
        let even = vandermonde(&r, k, 0);
        let r2w = &w * &r.mapv(|x| x * x);
        let impulse = even.t().dot(&r2w);
        let mean = (0..k).map(even_moment).collect();
        Ok(Self {
            gram,
            impulse,
            mean,
        })
    }
}
