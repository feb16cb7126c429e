use serde::{Deserialize, Serialize};

use super::curve::SpectralCurve;

/// Default minimum prominence, in units of the curve's observable.
pub const DEFAULT_MIN_PROMINENCE: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub center: f64,
    /// Width at half prominence.
    pub width: f64,
    pub peak: f64,
    pub prominence: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct WindowReport {
    /// Sorted by center.
    pub windows: Vec<Window>,
}

impl WindowReport {
    pub fn len(&self) -> usize {
        self.windows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.windows.is_empty()
    }

    pub fn centers(&self) -> Vec<f64> {
        self.windows.iter().map(|w| w.center).collect()
    }
}

/// Transparency windows: local maxima inside the extinction region of the
/// global dip whose topographic prominence reaches `min_prominence`.
///
/// The extinction region spans the outermost points at or below half depth.
pub fn detect_windows(curve: &SpectralCurve, min_prominence: f64) -> WindowReport {
    let v = curve.values();
    let g = curve.grid();
    let n = v.len();
    let baseline = curve.baseline();
    let vmin = v[curve.argmin()];
    if !(baseline - vmin > 0.0) {
        return WindowReport::default();
    }
    let half = 0.5 * (baseline + vmin);
    let Some(lo) = v.iter().position(|&x| x <= half) else {
        return WindowReport::default();
    };
    let hi = v.iter().rposition(|&x| x <= half).unwrap_or(lo);

    let mut windows = Vec::new();
    let mut i = lo.max(1);
    while i < hi.min(n - 1) {
        if !(v[i] > v[i - 1]) {
            i += 1;
            continue;
        }
        // extend across a plateau
        let mut j = i;
        while j + 1 < n && v[j + 1] == v[i] {
            j += 1;
        }
        if j + 1 >= n || v[j + 1] > v[i] {
            i = j + 1;
            continue;
        }
        let peak_index = (i + j) / 2;
        let peak = v[i];
        let left_base = v[..i]
            .iter()
            .rposition(|&x| x > peak)
            .map_or(&v[..i], |k| &v[k..i])
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        let right_base = v[j + 1..]
            .iter()
            .position(|&x| x > peak)
            .map_or(&v[j + 1..], |k| &v[j + 1..j + 1 + k])
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        let prominence = peak - left_base.max(right_base);
        if prominence >= min_prominence {
            let level = peak - 0.5 * prominence;
            let left = (0..i)
                .rev()
                .find(|&k| v[k] < level)
                .map_or(g[0], |k| curve.crossing(k, level));
            let right = (j + 1..n)
                .find(|&k| v[k] < level)
                .map_or(g[n - 1], |k| curve.crossing(k - 1, level));
            windows.push(Window {
                center: refine_peak(g, v, peak_index, i == j),
                width: right - left,
                peak,
                prominence,
            });
        }
        i = j + 1;
    }
    windows.sort_by(|a, b| a.center.total_cmp(&b.center));
    WindowReport { windows }
}

/// Vertex of the parabola through the peak and its neighbours.
fn refine_peak(g: &[f64], v: &[f64], i: usize, sharp: bool) -> f64 {
    if !sharp || i == 0 || i + 1 >= g.len() {
        return g[i];
    }
    let (x0, x1, x2) = (g[i - 1], g[i], g[i + 1]);
    let (y0, y1, y2) = (v[i - 1], v[i], v[i + 1]);
    let d0 = (y1 - y0) / (x1 - x0);
    let d1 = (y2 - y1) / (x2 - x1);
    let curvature = (d1 - d0) / (x2 - x0);
    if !(curvature < 0.0) {
        return x1;
    }
    // y' = d0 + curvature (2x - x0 - x1) = 0
    let vertex = 0.5 * (x0 + x1) - 0.5 * d0 / curvature;
    vertex.clamp(x0, x2)
}
