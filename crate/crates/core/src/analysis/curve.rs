use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scattering::ScatteringPoint;

/// Default transmittance threshold for [`flat_bottom_width`].
pub const DEFAULT_FLOOR: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    /// `|t|^2`
    Transmittance,
    /// `|t|`
    TransmissionAmplitude,
    /// `|r|^2`
    Reflectance,
    /// `|r|`
    ReflectionAmplitude,
}

impl Observable {
    pub fn of(self, p: &ScatteringPoint) -> f64 {
        match self {
            Observable::Transmittance => p.t.norm_sqr(),
            Observable::TransmissionAmplitude => p.t.norm(),
            Observable::Reflectance => p.r.norm_sqr(),
            Observable::ReflectionAmplitude => p.r.norm(),
        }
    }
}

/// A real observable sampled on a strictly increasing frequency grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralCurve {
    grid: Vec<f64>,
    values: Vec<f64>,
    observable: Observable,
}

impl SpectralCurve {
    pub fn new(grid: Vec<f64>, values: Vec<f64>, observable: Observable) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::Analysis(format!(
                "grid has {} points but there are {} values",
                grid.len(),
                values.len()
            )));
        }
        if grid.len() < 3 {
            return Err(Error::Analysis("a curve needs at least three points".into()));
        }
        if grid.windows(2).any(|w| !(w[1] > w[0])) || grid.iter().any(|g| !g.is_finite()) {
            return Err(Error::Analysis("grid must be finite and strictly increasing".into()));
        }
        if let Some(v) = values.iter().find(|v| !(**v >= 0.0 && **v <= 1.0 + 1e-9)) {
            return Err(Error::Analysis(format!("value {v} outside [0, 1]")));
        }
        Ok(SpectralCurve {
            grid,
            values,
            observable,
        })
    }

    /// Curve of `observable` over scattering points ordered by probe frequency.
    pub fn from_points(points: &[ScatteringPoint], observable: Observable) -> Result<Self> {
        Self::new(
            points.iter().map(|p| p.omega_p).collect(),
            points.iter().map(|p| observable.of(p)).collect(),
            observable,
        )
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn observable(&self) -> Observable {
        self.observable
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// Mean of the outer 5% of points on each side.
    pub fn baseline(&self) -> f64 {
        let n = self.len();
        let m = ((n as f64 * 0.05).ceil() as usize).max(1);
        let edge: f64 = self.values[..m].iter().chain(&self.values[n - m..]).sum();
        edge / (2 * m) as f64
    }

    pub fn argmin(&self) -> usize {
        self.values
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .expect("curve is non-empty")
    }

    /// Linear interpolation; `None` outside the grid.
    pub fn interpolate(&self, x: f64) -> Option<f64> {
        if x < self.grid[0] || x > self.grid[self.len() - 1] {
            return None;
        }
        let i = self.grid.partition_point(|&g| g <= x).clamp(1, self.len() - 1);
        Some(lerp_at(self.grid[i - 1], self.values[i - 1], self.grid[i], self.values[i], x))
    }

    /// Frequency at which the segment `(i, i + 1)` crosses `level`.
    pub(crate) fn crossing(&self, i: usize, level: f64) -> f64 {
        let (x0, y0, x1, y1) = (self.grid[i], self.values[i], self.grid[i + 1], self.values[i + 1]);
        if y1 == y0 {
            return 0.5 * (x0 + x1);
        }
        x0 + (level - y0) * (x1 - x0) / (y1 - y0)
    }
}

fn lerp_at(x0: f64, y0: f64, x1: f64, y1: f64, x: f64) -> f64 {
    if x1 == x0 {
        y0
    } else {
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }
}

/// Full width of the global dip at half depth between the edge baseline
/// and the minimum.
pub fn fwhm_of_dip(curve: &SpectralCurve) -> Result<f64> {
    let v = curve.values();
    let baseline = curve.baseline();
    let imin = curve.argmin();
    let vmin = v[imin];
    if !(baseline - vmin > 1e-12) {
        return Err(Error::Analysis("no dip below the baseline".into()));
    }
    let half = 0.5 * (baseline + vmin);
    let left = (0..imin)
        .rev()
        .find(|&i| v[i] >= half)
        .map(|i| curve.crossing(i, half))
        .ok_or_else(|| Error::Analysis("left half-depth crossing lies outside the grid".into()))?;
    let right = (imin + 1..v.len())
        .find(|&i| v[i] >= half)
        .map(|i| curve.crossing(i - 1, half))
        .ok_or_else(|| Error::Analysis("right half-depth crossing lies outside the grid".into()))?;
    Ok(right - left)
}

/// Width of the widest contiguous region with values at or below `floor`,
/// with its ends interpolated to the floor crossing.
pub fn flat_bottom_width(curve: &SpectralCurve, floor: f64) -> Result<f64> {
    let v = curve.values();
    let g = curve.grid();
    let n = v.len();
    if !(v[curve.argmin()] < floor) {
        return Err(Error::Analysis(format!("curve never drops below the floor {floor}")));
    }
    let mut best = 0.0f64;
    let mut i = 0;
    while i < n {
        if v[i] > floor {
            i += 1;
            continue;
        }
        let start = i;
        while i < n && v[i] <= floor {
            i += 1;
        }
        let end = i - 1;
        let left = if start == 0 { g[0] } else { curve.crossing(start - 1, floor) };
        let right = if end == n - 1 { g[n - 1] } else { curve.crossing(end, floor) };
        best = best.max(right - left);
    }
    Ok(best)
}

/// Largest difference between the curve at `center + x` and `center - x`
/// over grid points whose mirror image is also inside the grid.
pub fn asymmetry(curve: &SpectralCurve, center: f64) -> f64 {
    curve
        .grid()
        .iter()
        .zip(curve.values())
        .filter_map(|(&x, &y)| curve.interpolate(2.0 * center - x).map(|m| (y - m).abs()))
        .fold(0.0, f64::max)
}
