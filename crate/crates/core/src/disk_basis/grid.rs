use std::fmt;
use std::sync::Arc;

use ndarray::{s, Array1, Array2};
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use super::SpectralField;
use crate::error::BasisError;
use crate::linalg::Lu;
use crate::radial;
use crate::scalar::Real;

/// One collocation grid (base or padded) together with its transforms.
pub(crate) struct Grid<T: Real> {
    pub k: usize,
    pub n_theta: usize,
    pub n_max: usize,
    pub r: Array1<T>,
    pub theta: Array1<T>,
    pub radial_weights: Array1<T>,
    /// `synth[p][i][m] = T_{2m+p}(r_i)` for the `k_coef` retained coefficients.
    pub synth: [Array2<T>; 2],
    /// Interpolation on this grid followed by truncation to `k_coef` coefficients.
    pub analysis: [Array2<T>; 2],
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
}

impl<T: Real> fmt::Debug for Grid<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("k", &self.k)
            .field("n_theta", &self.n_theta)
            .field("n_max", &self.n_max)
            .finish_non_exhaustive()
    }
}

impl<T: Real> Grid<T> {
    pub fn new(k: usize, n_theta: usize, k_coef: usize, n_max: usize) -> Result<Self, BasisError> {
        let r = radial::nodes::<T>(k);
        let dtheta = T::PI() * T::lit(2.0) / T::from_usize_lossy(n_theta);
        let theta = (0..n_theta)
            .map(|j| T::from_usize_lossy(j) * dtheta)
            .collect();
        let radial_weights = radial::weights::<T>(k)?;
        let mut synth = [Array2::zeros((0, 0)), Array2::zeros((0, 0))];
        let mut analysis = [Array2::zeros((0, 0)), Array2::zeros((0, 0))];
        for p in 0..2 {
            let full = radial::vandermonde(&r, k, p);
            let inv = Lu::factor(&full)?.inverse();
            synth[p] = full.slice(s![.., ..k_coef]).to_owned();
            analysis[p] = inv.slice(s![..k_coef, ..]).to_owned();
        }
        let mut planner = FftPlanner::new();
        Ok(Self {
            k,
            n_theta,
            n_max,
            r,
            theta,
            radial_weights,
            synth,
            analysis,
            forward: planner.plan_fft_forward(n_theta),
            inverse: planner.plan_fft_inverse(n_theta),
        })
    }

    pub fn angular_weight(&self) -> T {
        T::PI() * T::lit(2.0) / T::from_usize_lossy(self.n_theta)
    }

    pub fn sample(&self, f: impl Fn(T, T) -> T) -> super::GridField<T> {
        super::GridField::new(Array2::from_shape_fn((self.k, self.n_theta), |(i, j)| {
            f(self.r[i], self.theta[j])
        }))
    }

    pub fn integrate(&self, v: &Array2<T>) -> T {
        let per_ring: Array1<T> = v.sum_axis(ndarray::Axis(1));
        per_ring.dot(&self.radial_weights) * self.angular_weight()
    }

    /// Angular analysis of each ring: returns `(cos, sin)` modal values of
    /// shape `(n_max + 1, k)`.
    fn to_modal(&self, v: &Array2<T>) -> (Array2<T>, Array2<T>) {
        let nt = self.n_theta;
        let mut buf: Vec<Complex<T>> = v.iter().map(|&x| Complex::new(x, T::zero())).collect();
        self.forward.process(&mut buf);
        let scale = T::lit(2.0) / T::from_usize_lossy(nt);
        let mut cos = Array2::zeros((self.n_max + 1, self.k));
        let mut sin = Array2::zeros((self.n_max + 1, self.k));
        for i in 0..self.k {
            let ring = &buf[i * nt..(i + 1) * nt];
            cos[[0, i]] = ring[0].re * scale * T::lit(0.5);
            for n in 1..=self.n_max {
                cos[[n, i]] = ring[n].re * scale;
                sin[[n, i]] = -ring[n].im * scale;
            }
        }
        (cos, sin)
    }

    fn from_modal(&self, cos: &Array2<T>, sin: &Array2<T>) -> Array2<T> {
        let nt = self.n_theta;
        let half = T::lit(0.5);
        let mut buf = vec![Complex::new(T::zero(), T::zero()); self.k * nt];
        for i in 0..self.k {
            let ring = &mut buf[i * nt..(i + 1) * nt];
            ring[0] = Complex::new(cos[[0, i]], T::zero());
            for n in 1..=self.n_max {
                let c = Complex::new(cos[[n, i]] * half, -sin[[n, i]] * half);
                ring[n] = c;
                ring[nt - n] = c.conj();
            }
        }
        self.inverse.process(&mut buf);
        Array2::from_shape_fn((self.k, nt), |(i, j)| buf[i * nt + j].re)
    }

    /// Grid values of a spectral field. With `flipped`, each order uses the
    /// opposite radial parity (radial derivatives).
    pub fn synthesize(&self, c: &SpectralField<T>, flipped: bool) -> Array2<T> {
        let mut cos = Array2::zeros((self.n_max + 1, self.k));
        let mut sin = Array2::zeros((self.n_max + 1, self.k));
        for n in 0..=self.n_max {
            let p = (n % 2) ^ usize::from(flipped);
            cos.row_mut(n).assign(&self.synth[p].dot(&c.cos.row(n)));
            if n > 0 {
                sin.row_mut(n).assign(&self.synth[p].dot(&c.sin.row(n)));
            }
        }
        self.from_modal(&cos, &sin)
    }

    pub fn analyze(&self, v: &Array2<T>) -> SpectralField<T> {
        let (mc, ms) = self.to_modal(v);
        let k_coef = self.analysis[0].nrows();
        let mut out = SpectralField::zeros(self.n_max, k_coef);
        for n in 0..=self.n_max {
            let a = &self.analysis[n % 2];
            out.cos.row_mut(n).assign(&a.dot(&mc.row(n)));
            if n > 0 {
                out.sin.row_mut(n).assign(&a.dot(&ms.row(n)));
            }
        }
        out
    }
}
