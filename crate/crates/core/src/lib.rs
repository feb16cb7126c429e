//! Collective spectra and single-photon scattering of periodic emitter
//! arrays ("superatoms") coupled to a one-dimensional waveguide.
//!
//! * [`model`]: emitters, geometry and the effective non-Hermitian
//!   Hamiltonian.
//! * [`linalg`]: dense complex eigendecomposition and resolvent solves.
//! * [`scattering`]: transmission/reflection by resolvent, mode sum and
//!   transfer matrix.
//! * [`analysis`]: linewidths, band gaps, transparency windows, circle
//!   fits and mode tracking.
//! * [`scenarios`]: parameter sweeps reproducing the standard experiments.

pub mod analysis;
pub mod config;
pub mod error;
pub mod linalg;
pub mod model;
pub mod scattering;
pub mod scenarios;
pub mod units;

pub use config::ArrayConfig;
pub use error::{Error, Result};
pub use linalg::{eigendecompose, resolvent_apply, ComplexMatrix, ComplexSpectrum};
pub use model::{build_h_eff, coupling_pair, device_preset, ArrayModel, DevicePreset, Qubit, WaveguideMedium};
pub use num_complex::Complex64;
pub use scattering::{
    scan, scatter_modes, scatter_resolvent, scatter_transfer_matrix, single_qubit_tr, Method, PhaseConvention,
    ScatteringPoint,
};
