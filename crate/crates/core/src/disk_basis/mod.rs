//! Discretization of the unit disk: Fourier collocation in `θ` and
//! parity-restricted Chebyshev collocation in `r`.
//!
//! A [`SpectralField`] stores, for every Fourier order `0 ≤ n ≤ n_max`, the
//! `cos nθ` and `sin nθ` radial profiles as coefficients of `T_{2m+p}(r)`
//! with `p = n mod 2`. This parity pairing makes every band-limited field
//! regular at the origin. A [`GridField`] stores point values on the
//! `(r_i, θ_j)` collocation grid, indexed `[radial, angular]`.
//!
//! Quadratic quantities (inner products, energy, enstrophy) are evaluated
//! exactly in coefficient space with precomputed Gram matrices; pointwise
//! nonlinear work happens on a padded product grid.

mod grid;
pub mod snapshot;

use ndarray::{Array1, Array2, Axis, Zip};

use crate::error::BasisError;
use crate::linalg::Lu;
use crate::radial::{self, RadialIntegrals};
use crate::scalar::Real;
use crate::special_fn;

pub(crate) use grid::Grid;

/// Resolution of a [`DiskBasis`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisSpec {
    /// Number of angular nodes (even). Fourier orders `0..=n_theta/2 - 1` are kept.
    pub n_theta: usize,
    /// Number of radial nodes in `(0, 1]`, equal to the number of Chebyshev
    /// coefficients per Fourier component.
    pub k_radial: usize,
    /// Oversampling factor of the product grid, in `[1, 2]`.
    pub dealias_pad: f64,
}

impl BasisSpec {
    pub fn new(n_theta: usize, k_radial: usize) -> Self {
        Self {
            n_theta,
            k_radial,
            dealias_pad: 1.5,
        }
    }

    pub fn with_pad(mut self, pad: f64) -> Self {
        self.dealias_pad = pad;
        self
    }

    pub fn validate(&self) -> Result<(), BasisError> {
        if self.n_theta < 8 || self.n_theta % 2 != 0 {
            return Err(BasisError::Config(format!(
                "n_theta must be even and at least 8, got {}",
                self.n_theta
            )));
        }
        if self.k_radial < 8 {
            return Err(BasisError::Config(format!(
                "k_radial must be at least 8, got {}",
                self.k_radial
            )));
        }
        if !(1.0..=2.0).contains(&self.dealias_pad) {
            return Err(BasisError::Config(format!(
                "dealias_pad must lie in [1, 2], got {}",
                self.dealias_pad
            )));
        }
        Ok(())
    }

    /// Highest Fourier order carried by the basis.
    pub fn max_order(&self) -> usize {
        self.n_theta / 2 - 1
    }

    /// `(radial, angular)` node counts of the padded product grid.
    pub fn padded_shape(&self) -> (usize, usize) {
        let k = (self.dealias_pad * self.k_radial as f64 - 1e-9).ceil() as usize;
        let mut nt = (self.dealias_pad * self.n_theta as f64 - 1e-9).ceil() as usize;
        nt += nt % 2;
        (k.max(self.k_radial), nt.max(self.n_theta))
    }
}

/// Point values on a collocation grid, indexed `[radial node, angular node]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField<T> {
    pub values: Array2<T>,
}

impl<T: Real> GridField<T> {
    pub fn new(values: Array2<T>) -> Self {
        Self { values }
    }

    pub fn shape(&self) -> (usize, usize) {
        self.values.dim()
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |m, &v| m.max(v.abs()))
    }
}

/// Fourier × Chebyshev coefficients. Row `n` of `cos`/`sin` holds the radial
/// coefficients of the `cos nθ`/`sin nθ` component; `sin` row 0 is unused and
/// kept at zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField<T> {
    pub cos: Array2<T>,
    pub sin: Array2<T>,
}

impl<T: Real> SpectralField<T> {
    pub fn zeros(n_max: usize, k: usize) -> Self {
        Self {
            cos: Array2::zeros((n_max + 1, k)),
            sin: Array2::zeros((n_max + 1, k)),
        }
    }

    /// `(n_max + 1, k)`
    pub fn shape(&self) -> (usize, usize) {
        self.cos.dim()
    }

    pub fn is_finite(&self) -> bool {
        self.cos.iter().chain(self.sin.iter()).all(|v| v.is_finite())
    }

    pub fn scaled(&self, s: T) -> Self {
        Self {
            cos: &self.cos * s,
            sin: &self.sin * s,
        }
    }

    /// `self + s·other`
    pub fn add_scaled(&self, s: T, other: &Self) -> Self {
        let mut out = self.clone();
        out.axpy(s, other);
        out
    }

    /// In place `self += s·other`.
    pub fn axpy(&mut self, s: T, other: &Self) {
        Zip::from(&mut self.cos)
            .and(&other.cos)
            .for_each(|a, &b| *a += s * b);
        Zip::from(&mut self.sin)
            .and(&other.sin)
            .for_each(|a, &b| *a += s * b);
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.cos
            .iter()
            .zip(other.cos.iter())
            .chain(self.sin.iter().zip(other.sin.iter()))
            .fold(T::zero(), |m, (a, b)| m.max((*a - *b).abs()))
    }

    /// Angular derivative `∂_θ`.
    pub fn d_theta(&self) -> Self {
        let mut out = Self::zeros(self.cos.nrows() - 1, self.cos.ncols());
        for n in 1..self.cos.nrows() {
            let nn = T::from_usize_lossy(n);
            out.cos.row_mut(n).assign(&(&self.sin.row(n) * nn));
            out.sin.row_mut(n).assign(&(&self.cos.row(n) * (-nn)));
        }
        out
    }
}

/// Constants of the steady space `V = span{J₀(jr), J₁(jr)cos θ, J₁(jr)sin θ}`.
#[derive(Debug, Clone, Copy)]
pub struct BesselConstants<T> {
    /// `j = j_{1,1}`
    pub j: T,
    /// `j_{2,1}`
    pub j21: T,
    /// `‖J₀(jr)‖²` from quadrature
    pub norm_j0_sq: T,
    /// `‖J₁(jr) cos θ‖²` from quadrature
    pub norm_j1_sq: T,
    /// `∫₀¹ r³ J₀(jr) dr`
    pub impulse_moment: T,
}

/// Immutable discretization data: grids, quadrature, transforms, and the
/// per-order Green solvers.
#[derive(Debug)]
pub struct DiskBasis<T: Real> {
    spec: BasisSpec,
    n_max: usize,
    base: Grid<T>,
    pad: Grid<T>,
    deriv: [Array2<T>; 2],
    integrals: RadialIntegrals<T>,
    green: Vec<Array2<T>>,
    laplace: Vec<Array2<T>>,
    constants: BesselConstants<T>,
    /// Even-parity coefficients of `J₀(jr)`.
    j0_profile: Array1<T>,
    /// Odd-parity coefficients of `J₁(jr)`.
    j1_profile: Array1<T>,
}

impl<T: Real> DiskBasis<T> {
    pub fn build(spec: BasisSpec) -> Result<Self, BasisError> {
        spec.validate()?;
        let k = spec.k_radial;
        let n_max = spec.max_order();
        let base = Grid::new(k, spec.n_theta, k, n_max)?;
        let (kp, ntp) = spec.padded_shape();
        let pad = Grid::new(kp, ntp, k, n_max)?;
        let deriv = [radial::derivative(k, 0), radial::derivative(k, 1)];
        let integrals = RadialIntegrals::new(k)?;

        let mut green = Vec::with_capacity(n_max + 1);
        let mut laplace = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            let p = n % 2;
            let s = &base.synth[p];
            let d1 = &deriv[p];
            let d2 = deriv[1 - p].dot(d1);
            let first = base.synth[1 - p].dot(d1);
            let nn = T::from_usize_lossy(n * n);
            let mut op = s.dot(&d2);
            for i in 0..k {
                let inv_r = T::one() / base.r[i];
                for m in 0..k {
                    op[[i, m]] += inv_r * first[[i, m]] - nn * inv_r * inv_r * s[[i, m]];
                }
            }
            laplace.push(base.analysis[p].dot(&op));
            // Dirichlet row at r = 1 (node 0); regularity is carried by parity.
            let mut rhs = s.mapv(|v| -v);
            for m in 0..k {
                op[[0, m]] = s[[0, m]];
                rhs[[0, m]] = T::zero();
            }
            green.push(Lu::factor(&op)?.solve_matrix(&rhs));
        }

        let j: T = special_fn::bessel_zero(1, 1)?;
        let j21: T = special_fn::bessel_zero(2, 1)?;
        let constants = BesselConstants {
            j,
            j21,
            norm_j0_sq: special_fn::mode_norm_sq(0)?,
            norm_j1_sq: special_fn::mode_norm_sq(1)?,
            impulse_moment: special_fn::impulse_moment_j0(),
        };
        let j0_nodal = base.r.mapv(|r| special_fn::jn(0, j * r));
        let j1_nodal = base.r.mapv(|r| special_fn::jn(1, j * r));
        let j0_profile = base.analysis[0].dot(&j0_nodal);
        let j1_profile = base.analysis[1].dot(&j1_nodal);

        Ok(Self {
            spec,
            n_max,
            base,
            pad,
            deriv,
            integrals,
            green,
            laplace,
            constants,
            j0_profile,
            j1_profile,
        })
    }

    pub fn spec(&self) -> &BasisSpec {
        &self.spec
    }

    pub fn max_order(&self) -> usize {
        self.n_max
    }

    pub fn k_radial(&self) -> usize {
        self.spec.k_radial
    }

    pub fn constants(&self) -> &BesselConstants<T> {
        &self.constants
    }

    /// Radial nodes, `r_0 = 1` first.
    pub fn radial_nodes(&self) -> &Array1<T> {
        &self.base.r
    }

    pub fn angular_nodes(&self) -> &Array1<T> {
        &self.base.theta
    }

    /// `(radial, angular)` node counts.
    pub fn grid_shape(&self) -> (usize, usize) {
        (self.base.k, self.base.n_theta)
    }

    pub fn padded_shape(&self) -> (usize, usize) {
        (self.pad.k, self.pad.n_theta)
    }

    /// Quadrature weight of node `(i, j)`, including the Jacobian `r`.
    pub fn weight(&self, i: usize) -> T {
        self.base.radial_weights[i] * self.base.angular_weight()
    }

    pub fn spectral_zeros(&self) -> SpectralField<T> {
        SpectralField::zeros(self.n_max, self.spec.k_radial)
    }

    pub fn grid_zeros(&self) -> GridField<T> {
        GridField::new(Array2::zeros(self.grid_shape()))
    }

    /// Samples `f(r, θ)` on the collocation grid.
    pub fn grid_from_fn(&self, f: impl Fn(T, T) -> T) -> GridField<T> {
        self.base.sample(f)
    }

    /// Samples `f(r, θ)` and projects it onto the basis.
    pub fn spectral_from_fn(&self, f: impl Fn(T, T) -> T) -> SpectralField<T> {
        self.base.analyze(&self.base.sample(f).values)
    }

    fn check_grid(&self, f: &GridField<T>) -> Result<(), BasisError> {
        if f.shape() != self.grid_shape() {
            return Err(BasisError::Shape {
                expected: self.grid_shape(),
                found: f.shape(),
            });
        }
        Ok(())
    }

    pub(crate) fn check_spectral(&self, c: &SpectralField<T>) -> Result<(), BasisError> {
        let want = (self.n_max + 1, self.spec.k_radial);
        if c.shape() != want || c.sin.dim() != want {
            return Err(BasisError::Shape {
                expected: want,
                found: c.shape(),
            });
        }
        Ok(())
    }

    pub fn analyze(&self, f: &GridField<T>) -> Result<SpectralField<T>, BasisError> {
        self.check_grid(f)?;
        Ok(self.base.analyze(&f.values))
    }

    pub fn synthesize(&self, c: &SpectralField<T>) -> Result<GridField<T>, BasisError> {
        self.check_spectral(c)?;
        Ok(GridField::new(self.base.synthesize(c, false)))
    }

    /// Quadrature approximation of `∫_D f dx` on the collocation grid.
    pub fn integrate(&self, f: &GridField<T>) -> Result<T, BasisError> {
        self.check_grid(f)?;
        Ok(self.base.integrate(&f.values))
    }

    /// Area average `(1/π) ∫_D f dx`.
    pub fn mean(&self, f: &GridField<T>) -> Result<T, BasisError> {
        Ok(self.integrate(f)? / T::PI())
    }

    /// Exact `∫_D f dx` of a band-limited field.
    pub fn spectral_integral(&self, c: &SpectralField<T>) -> T {
        T::PI() * T::lit(2.0) * c.cos.row(0).dot(&self.integrals.mean)
    }

    pub fn spectral_mean(&self, c: &SpectralField<T>) -> T {
        self.spectral_integral(c) / T::PI()
    }

    /// Exact `∫_D |x|² f dx` of a band-limited field.
    pub fn spectral_impulse(&self, c: &SpectralField<T>) -> T {
        T::PI() * T::lit(2.0) * c.cos.row(0).dot(&self.integrals.impulse)
    }

    /// Exact `L²(D)` inner product of two band-limited fields.
    pub fn inner(&self, a: &SpectralField<T>, b: &SpectralField<T>) -> T {
        let mut total = T::zero();
        for n in 0..=self.n_max {
            let g = &self.integrals.gram[n % 2];
            let ang = if n == 0 { T::PI() * T::lit(2.0) } else { T::PI() };
            let mut s = a.cos.row(n).dot(&g.dot(&b.cos.row(n)));
            if n > 0 {
                s += a.sin.row(n).dot(&g.dot(&b.sin.row(n)));
            }
            total += ang * s;
        }
        total
    }

    pub fn norm(&self, c: &SpectralField<T>) -> T {
        self.inner(c, c).max(T::zero()).sqrt()
    }

    /// Green operator `G = (-Δ)^{-1}` with zero Dirichlet data, one radial
    /// two-point solve per Fourier order.
    pub fn apply_green(&self, w: &SpectralField<T>) -> Result<SpectralField<T>, BasisError> {
        self.check_spectral(w)?;
        Ok(self.green_unchecked(w))
    }

    pub(crate) fn green_unchecked(&self, w: &SpectralField<T>) -> SpectralField<T> {
        let mut out = self.spectral_zeros();
        for n in 0..=self.n_max {
            let g = &self.green[n];
            out.cos.row_mut(n).assign(&g.dot(&w.cos.row(n)));
            if n > 0 {
                out.sin.row_mut(n).assign(&g.dot(&w.sin.row(n)));
            }
        }
        out
    }

    /// Collocation Laplacian `Δ`.
    pub fn laplacian(&self, c: &SpectralField<T>) -> Result<SpectralField<T>, BasisError> {
        self.check_spectral(c)?;
        let mut out = self.spectral_zeros();
        for n in 0..=self.n_max {
            let l = &self.laplace[n];
            out.cos.row_mut(n).assign(&l.dot(&c.cos.row(n)));
            if n > 0 {
                out.sin.row_mut(n).assign(&l.dot(&c.sin.row(n)));
            }
        }
        Ok(out)
    }

    /// Radial derivative. The result has flipped radial parity, so it is only
    /// meaningful through the `*_flipped` synthesis helpers.
    pub(crate) fn d_r(&self, c: &SpectralField<T>) -> SpectralField<T> {
        let mut out = self.spectral_zeros();
        for n in 0..=self.n_max {
            let d = &self.deriv[n % 2];
            out.cos.row_mut(n).assign(&d.dot(&c.cos.row(n)));
            if n > 0 {
                out.sin.row_mut(n).assign(&d.dot(&c.sin.row(n)));
            }
        }
        out
    }

    /// Velocity `v = ∇⊥Gω` in polar components on the collocation grid:
    /// `v_r = (1/r) ∂_θψ`, `v_θ = -∂_rψ` with `ψ = Gω`.
    pub fn velocity(
        &self,
        w: &SpectralField<T>,
    ) -> Result<(GridField<T>, GridField<T>), BasisError> {
        self.check_spectral(w)?;
        let psi = self.green_unchecked(w);
        let mut vr = self.base.synthesize(&psi.d_theta(), false);
        for (mut row, &r) in vr.axis_iter_mut(Axis(0)).zip(self.base.r.iter()) {
            row.mapv_inplace(|v| v / r);
        }
        let vt = self.base.synthesize(&self.d_r(&psi), true).mapv(|v| -v);
        Ok((GridField::new(vr), GridField::new(vt)))
    }

    /// Point evaluation of a spectral field at `(r, θ)`, `0 ≤ r ≤ 1`.
    pub fn evaluate(&self, c: &SpectralField<T>, r: T, theta: T) -> T {
        let k = self.spec.k_radial;
        let t: Vec<T> = (0..2 * k + 1).map(|q| radial::cheb(q, r)).collect();
        let mut total = T::zero();
        for n in 0..=self.n_max {
            let p = n % 2;
            let prof = |row: ndarray::ArrayView1<T>| {
                row.iter()
                    .enumerate()
                    .fold(T::zero(), |s, (m, &a)| s + a * t[2 * m + p])
            };
            let nt = T::from_usize_lossy(n) * theta;
            total += prof(c.cos.row(n)) * nt.cos();
            if n > 0 {
                total += prof(c.sin.row(n)) * nt.sin();
            }
        }
        total
    }

    /// `A J₀(jr) + b_c J₁(jr) cos θ + b_s J₁(jr) sin θ` as a spectral field.
    pub fn steady_field(&self, a: T, b_cos: T, b_sin: T) -> SpectralField<T> {
        let mut out = self.spectral_zeros();
        out.cos.row_mut(0).assign(&(&self.j0_profile * a));
        out.cos.row_mut(1).assign(&(&self.j1_profile * b_cos));
        out.sin.row_mut(1).assign(&(&self.j1_profile * b_sin));
        out
    }

    /// Coordinates of the orthogonal projection onto `V`:
    /// `(a, b_cos, b_sin)`.
    pub fn steady_coordinates(&self, c: &SpectralField<T>) -> (T, T, T) {
        let g0 = &self.integrals.gram[0];
        let g1 = &self.integrals.gram[1];
        let two_pi = T::PI() * T::lit(2.0);
        let norm0 = two_pi * self.j0_profile.dot(&g0.dot(&self.j0_profile));
        let norm1 = T::PI() * self.j1_profile.dot(&g1.dot(&self.j1_profile));
        let gj0 = g0.dot(&self.j0_profile);
        let gj1 = g1.dot(&self.j1_profile);
        let a = two_pi * c.cos.row(0).dot(&gj0) / norm0;
        let bc = T::PI() * c.cos.row(1).dot(&gj1) / norm1;
        let bs = T::PI() * c.sin.row(1).dot(&gj1) / norm1;
        (a, bc, bs)
    }

    /// Discrete `‖J₀(jr)‖²` and `‖J₁(jr) cos θ‖²` (consistent with [`Self::inner`]).
    pub fn steady_norms_sq(&self) -> (T, T) {
        let g0 = &self.integrals.gram[0];
        let g1 = &self.integrals.gram[1];
        (
            T::PI() * T::lit(2.0) * self.j0_profile.dot(&g0.dot(&self.j0_profile)),
            T::PI() * self.j1_profile.dot(&g1.dot(&self.j1_profile)),
        )
    }

    /// Rotation `(r, θ) ↦ ω(r, θ - β)`, an exact phase shift per order.
    pub fn rotate(&self, c: &SpectralField<T>, beta: T) -> SpectralField<T> {
        let mut out = c.clone();
        for n in 1..c.cos.nrows() {
            let (s, co) = (T::from_usize_lossy(n) * beta).sin_cos();
            for m in 0..c.cos.ncols() {
                let a = c.cos[[n, m]];
                let b = c.sin[[n, m]];
                out.cos[[n, m]] = a * co - b * s;
                out.sin[[n, m]] = a * s + b * co;
            }
        }
        out
    }

    // -- padded product grid --------------------------------------------

    pub(crate) fn pad_grid(&self) -> &Grid<T> {
        &self.pad
    }

    /// Values of `c` on the padded grid.
    pub fn synthesize_padded(&self, c: &SpectralField<T>) -> Result<GridField<T>, BasisError> {
        self.check_spectral(c)?;
        Ok(GridField::new(self.pad.synthesize(c, false)))
    }

    /// Quadrature of padded-grid values.
    pub fn integrate_padded(&self, f: &GridField<T>) -> Result<T, BasisError> {
        if f.shape() != self.padded_shape() {
            return Err(BasisError::Shape {
                expected: self.padded_shape(),
                found: f.shape(),
            });
        }
        Ok(self.pad.integrate(&f.values))
    }
}
