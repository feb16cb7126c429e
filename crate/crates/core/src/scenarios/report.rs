use serde::{Deserialize, Serialize};

use super::{ControlUnit, SweepResult};
use crate::analysis::{
    detect_windows, flat_bottom_width, fwhm_of_dip, Observable, Window, DEFAULT_FLOOR, DEFAULT_MIN_PROMINENCE,
};
use crate::error::Result;

/// Tracks whose decay never exceeds this fraction of the mean waveguide
/// linewidth count as dark.
const DARK_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowAnalysis {
    pub control: f64,
    /// Of `|t|^2`; absent without a resolvable dip.
    pub fwhm: Option<f64>,
    /// Of `|t|^2` at the default floor.
    pub flat_bottom_width: Option<f64>,
    /// Found on `|t|` at the default prominence.
    pub windows: Vec<Window>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrackSummary {
    /// `detuning[track][step]`, against the working frequency.
    pub detuning: Vec<Vec<f64>>,
    /// `decay[track][step]`.
    pub decay: Vec<Vec<f64>>,
    pub dark_tracks: usize,
    pub crossings: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepAnalysis {
    pub rows: Vec<RowAnalysis>,
    /// Least-squares slope of FWHM against qubit count.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fwhm_slope: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode_track: Option<TrackSummary>,
}

/// Per-row dip widths and transparency windows, plus the mode-track
/// summary when one is attached.
pub fn analyze_sweep(result: &SweepResult) -> Result<SweepAnalysis> {
    let mut rows = Vec::with_capacity(result.rows());
    for (i, &control) in result.control.values.iter().enumerate() {
        let power = result.curve(i, Observable::Transmittance)?;
        let amplitude = result.curve(i, Observable::TransmissionAmplitude)?;
        rows.push(RowAnalysis {
            control,
            fwhm: fwhm_of_dip(&power).ok(),
            flat_bottom_width: flat_bottom_width(&power, DEFAULT_FLOOR).ok(),
            windows: detect_windows(&amplitude, DEFAULT_MIN_PROMINENCE).windows,
        });
    }

    let fwhm_slope = if result.control.unit == ControlUnit::Count {
        let pts: Vec<(f64, f64)> = rows.iter().filter_map(|r| r.fwhm.map(|w| (r.control, w))).collect();
        slope(&pts)
    } else {
        None
    };

    let mode_track = match &result.mode_track {
        None => None,
        Some(track) => {
            let gamma = result.spec.device.build(track.reference)?.mean_gamma_wg();
            let decay: Vec<Vec<f64>> = (0..track.track_count()).map(|k| track.decay(k)).collect();
            let dark_tracks = decay
                .iter()
                .filter(|d| d.iter().all(|&x| x.abs() < DARK_THRESHOLD * gamma))
                .count();
            Some(TrackSummary {
                detuning: (0..track.track_count()).map(|k| track.detuning(k)).collect(),
                decay,
                dark_tracks,
                crossings: track.crossings.clone(),
            })
        }
    };

    Ok(SweepAnalysis {
        rows,
        fwhm_slope,
        mode_track,
    })
}

fn slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}
