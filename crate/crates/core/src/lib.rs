//! Spectral simulation of two-dimensional Euler flow on the unit disk and
//! tools for measuring orbital stability of its Bessel steady states.

pub mod disk_basis;
pub mod error;
pub mod euler_solver;
pub mod fields;
pub mod functionals;
mod linalg;
pub mod quad;
mod radial;
pub mod scalar;
pub mod special_fn;
pub mod stability;

pub use disk_basis::{BasisSpec, DiskBasis, GridField, SpectralField};
pub use error::{
    BasisError, FunctionalError, SnapshotError, SolverError, SpecialFnError, StabilityError,
};
pub use euler_solver::{SolverConfig, Trajectory};
pub use functionals::ConservedLedger;
pub use scalar::Real;
pub use stability::{Orbit, Perturbation, StabilityReport, VCoordinates};

pub type DiskBasis64 = DiskBasis<f64>;
pub type DiskBasis32 = DiskBasis<f32>;
pub type SpectralField64 = SpectralField<f64>;
pub type SpectralField32 = SpectralField<f32>;
pub type GridField64 = GridField<f64>;
pub type GridField32 = GridField<f32>;
pub type Trajectory64 = Trajectory<f64>;
pub type StabilityReport64 = StabilityReport<f64>;
pub type Orbit64 = Orbit<f64>;
