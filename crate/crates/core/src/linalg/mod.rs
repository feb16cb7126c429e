//! Dense complex linear algebra for small non-Hermitian matrices.

mod eigen;
mod lu;
mod matrix;

pub use eigen::{eigendecompose, ComplexSpectrum, DEGENERACY_THRESHOLD};
pub use lu::{resolvent_apply, LuDecomposition};
pub use matrix::ComplexMatrix;
