use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::eigendecompose;
use crate::model::{build_h_eff, ArrayModel};

/// Two candidate pairings closer than this relative margin mark a crossing.
const CROSSING_MARGIN: f64 = 0.1;

/// Sweep of one qubit's frequency with everything else held fixed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencySweep {
    /// Zero-based qubit index.
    pub qubit: usize,
    /// Monotone grid of frequencies (rad/s).
    pub omegas: Vec<f64>,
}

/// Eigenvalues followed continuously across a parameter sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeTrack {
    pub parameter: Vec<f64>,
    /// `eigenvalues[step][track]`.
    pub eigenvalues: Vec<Vec<Complex64>>,
    /// Frequency subtracted when reporting detunings.
    pub reference: f64,
    /// `(step, track)` pairs whose assignment at `step` was ambiguous.
    pub crossings: Vec<(usize, usize)>,
}

impl ModeTrack {
    pub fn track_count(&self) -> usize {
        self.eigenvalues.first().map_or(0, Vec::len)
    }

    pub fn steps(&self) -> usize {
        self.parameter.len()
    }

    pub fn track(&self, k: usize) -> Vec<Complex64> {
        self.eigenvalues.iter().map(|row| row[k]).collect()
    }

    /// `Re(ω) - reference` along track `k`.
    pub fn detuning(&self, k: usize) -> Vec<f64> {
        self.eigenvalues.iter().map(|row| row[k].re - self.reference).collect()
    }

    /// `-2 Im(ω)` along track `k`.
    pub fn decay(&self, k: usize) -> Vec<f64> {
        self.eigenvalues.iter().map(|row| -2.0 * row[k].im).collect()
    }
}

/// Eigendecomposes the model at each sweep value and pairs modes between
/// neighbouring steps by greedy nearest-eigenvalue matching against the
/// linear extrapolation of each track.
///
/// Detunings are reported against the medium's reference frequency.
pub fn track_modes(model: &ArrayModel, sweep: &FrequencySweep) -> Result<ModeTrack> {
    if sweep.qubit >= model.len() {
        return Err(Error::domain(format!(
            "qubit {} is outside an array of {}",
            sweep.qubit,
            model.len()
        )));
    }
    if sweep.omegas.is_empty() {
        return Err(Error::domain("sweep grid is empty"));
    }
    let increasing = sweep.omegas.windows(2).all(|w| w[1] >= w[0]);
    let decreasing = sweep.omegas.windows(2).all(|w| w[1] <= w[0]);
    if !(increasing || decreasing) || sweep.omegas.iter().any(|w| !w.is_finite()) {
        return Err(Error::domain("sweep grid must be finite and monotone"));
    }

    let mut eigenvalues: Vec<Vec<Complex64>> = Vec::with_capacity(sweep.omegas.len());
    let mut crossings = Vec::new();
    for (step, &omega) in sweep.omegas.iter().enumerate() {
        let h = build_h_eff(&model.with_qubit_omega(sweep.qubit, omega)?)?;
        let current = eigendecompose(&h.matrix)?.eigenvalues;
        let row = match eigenvalues.as_slice() {
            [] => current,
            [last] => {
                let (row, ambiguous) = pair(last, &current);
                crossings.extend(ambiguous.into_iter().map(|k| (step, k)));
                row
            }
            [.., before, last] => {
                // linear continuation carries tracks straight through degeneracies
                let predicted: Vec<Complex64> = last.iter().zip(before).map(|(a, b)| 2.0 * a - b).collect();
                let (row, ambiguous) = pair(&predicted, &current);
                crossings.extend(ambiguous.into_iter().map(|k| (step, k)));
                row
            }
        };
        eigenvalues.push(row);
    }
    Ok(ModeTrack {
        parameter: sweep.omegas.clone(),
        eigenvalues,
        reference: model.medium().omega_ref,
        crossings,
    })
}

/// Orders `current` to follow the predicted positions `prev`; also returns
/// tracks whose runner-up candidate was within the crossing margin.
fn pair(prev: &[Complex64], current: &[Complex64]) -> (Vec<Complex64>, Vec<usize>) {
    let n = prev.len();
    let mut candidates: Vec<(f64, usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| ((prev[i] - current[j]).norm(), i, j))
        .collect();
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    let mut assigned = vec![None; n];
    let mut taken = vec![false; n];
    for &(_, i, j) in &candidates {
        if assigned[i].is_none() && !taken[j] {
            assigned[i] = Some(j);
            taken[j] = true;
        }
    }

    let mut ambiguous = Vec::new();
    for (i, a) in assigned.iter().enumerate() {
        let j = a.expect("every track is assigned");
        let best = (prev[i] - current[j]).norm();
        let runner_up = (0..n)
            .filter(|&k| k != j)
            .map(|k| (prev[i] - current[k]).norm())
            .fold(f64::INFINITY, f64::min);
        if runner_up - best <= CROSSING_MARGIN * runner_up {
            ambiguous.push(i);
        }
    }
    (assigned.into_iter().map(|j| current[j.unwrap()]).collect(), ambiguous)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scattering::linspace;

    #[test]
    fn pairing_follows_nearest() {
        let prev = [Complex64::new(0.0, -1.0), Complex64::new(5.0, -0.1)];
        let cur = [Complex64::new(5.1, -0.1), Complex64::new(0.2, -1.0)];
        let (row, ambiguous) = pair(&prev, &cur);
        assert_eq!(row, vec![cur[1], cur[0]]);
        assert!(ambiguous.is_empty());
    }

    #[test]
    fn constant_sweep_gives_constant_tracks() {
        let m = ArrayModel::homogeneous(4, 100.0, 1.0, 0.0, 0.3).unwrap();
        let sweep = FrequencySweep {
            qubit: 2,
            omegas: vec![100.0; 5],
        };
        let track = track_modes(&m, &sweep).unwrap();
        assert_eq!(track.track_count(), 4);
        for k in 0..4 {
            let t = track.track(k);
            assert!(t.iter().all(|z| *z == t[0]));
        }
    }

    #[test]
    fn rejects_non_monotone_and_bad_index() {
        let m = ArrayModel::homogeneous(3, 100.0, 1.0, 0.0, 0.3).unwrap();
        let bad = FrequencySweep {
            qubit: 0,
            omegas: vec![99.0, 101.0, 100.0],
        };
        assert!(track_modes(&m, &bad).is_err());
        let outside = FrequencySweep {
            qubit: 3,
            omegas: linspace(99.0, 101.0, 3),
        };
        assert!(track_modes(&m, &outside).is_err());
    }
}
