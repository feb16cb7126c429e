//! Post-processing of spectra and collective modes.

mod chebyshev;
mod curve;
mod fit;
mod track;
mod windows;

pub use chebyshev::{
    band_edges, band_edges_with_tolerance, band_parameter, chebyshev_transmittance, chebyshev_u,
};
pub use curve::{asymmetry, flat_bottom_width, fwhm_of_dip, Observable, SpectralCurve, DEFAULT_FLOOR};
pub use fit::{fit_single_qubit, SingleQubitFit};
pub use track::{track_modes, FrequencySweep, ModeTrack};
pub use windows::{detect_windows, Window, WindowReport, DEFAULT_MIN_PROMINENCE};
