//! Emitter arrays and the effective non-Hermitian Hamiltonian of the
//! single-excitation sector.
//!
//! All frequencies and rates are angular (rad/s); positions are in meters.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::units::{mhz_to_rad, CPW_VELOCITY};

/// A two-level emitter side-coupled to the waveguide.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Qubit {
    /// Transition frequency.
    pub omega: f64,
    /// Decay rate into the guided mode.
    pub gamma_wg: f64,
    /// Dissipation into everything else.
    pub gamma_nr: f64,
    /// Position along the waveguide.
    pub position: f64,
}

impl Qubit {
    pub fn new(omega: f64, gamma_wg: f64, gamma_nr: f64, position: f64) -> Result<Self> {
        let q = Qubit {
            omega,
            gamma_wg,
            gamma_nr,
            position,
        };
        q.validate()?;
        Ok(q)
    }

    fn validate(&self) -> Result<()> {
        if !(self.omega.is_finite() && self.omega > 0.0) {
            return Err(Error::domain(format!("qubit frequency must be positive, got {}", self.omega)));
        }
        if !(self.gamma_wg.is_finite() && self.gamma_wg >= 0.0) {
            return Err(Error::domain(format!("waveguide decay rate must be >= 0, got {}", self.gamma_wg)));
        }
        if !(self.gamma_nr.is_finite() && self.gamma_nr >= 0.0) {
            return Err(Error::domain(format!("free-space dissipation must be >= 0, got {}", self.gamma_nr)));
        }
        if !self.position.is_finite() {
            return Err(Error::domain("qubit position must be finite"));
        }
        Ok(())
    }

    /// Total linewidth `gamma_wg + gamma_nr`.
    pub fn total_linewidth(&self) -> f64 {
        self.gamma_wg + self.gamma_nr
    }

    /// Fraction of the emission that goes into the guided mode.
    pub fn beta(&self) -> f64 {
        let total = self.total_linewidth();
        if total == 0.0 {
            0.0
        } else {
            self.gamma_wg / total
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveguideMedium {
    /// Phase velocity (m/s).
    pub velocity: f64,
    /// Frequency at which propagation phases are evaluated.
    pub omega_ref: f64,
}

impl WaveguideMedium {
    pub fn new(velocity: f64, omega_ref: f64) -> Result<Self> {
        if !(velocity.is_finite() && velocity > 0.0) {
            return Err(Error::domain(format!("velocity must be positive, got {velocity}")));
        }
        if !(omega_ref.is_finite() && omega_ref > 0.0) {
            return Err(Error::domain(format!("reference frequency must be positive, got {omega_ref}")));
        }
        Ok(WaveguideMedium { velocity, omega_ref })
    }

    pub fn lambda0(&self) -> f64 {
        TAU * self.velocity / self.omega_ref
    }

    pub fn k0(&self) -> f64 {
        self.omega_ref / self.velocity
    }
}

/// Ordered emitters along a waveguide.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArrayModel {
    qubits: Vec<Qubit>,
    medium: WaveguideMedium,
}

impl ArrayModel {
    pub fn new(qubits: Vec<Qubit>, medium: WaveguideMedium) -> Result<Self> {
        if qubits.is_empty() {
            return Err(Error::domain("array must contain at least one qubit"));
        }
        for q in &qubits {
            q.validate()?;
        }
        if qubits.windows(2).any(|w| w[1].position <= w[0].position) {
            return Err(Error::domain("qubit positions must be strictly increasing"));
        }
        Ok(ArrayModel { qubits, medium })
    }

    /// `n` identical emitters at `omega0` with nearest-neighbour spacing
    /// `spacing_ratio * lambda0`, in the nominal CPW medium with
    /// `omega_ref = omega0`.
    pub fn homogeneous(
        n: usize,
        omega0: f64,
        gamma_wg: f64,
        gamma_nr: f64,
        spacing_ratio: f64,
    ) -> Result<Self> {
        let medium = WaveguideMedium::new(CPW_VELOCITY, omega0)?;
        Self::with_spacing_ratio(vec![(omega0, gamma_wg, gamma_nr); n], medium, spacing_ratio)
    }

    /// Places emitters `(omega, gamma_wg, gamma_nr)` at a uniform spacing
    /// given in units of `lambda0`.
    pub fn with_spacing_ratio(
        params: Vec<(f64, f64, f64)>,
        medium: WaveguideMedium,
        spacing_ratio: f64,
    ) -> Result<Self> {
        if !(spacing_ratio.is_finite() && spacing_ratio > 0.0) {
            return Err(Error::domain(format!("spacing ratio must be positive, got {spacing_ratio}")));
        }
        let d = spacing_ratio * medium.lambda0();
        Self::with_spacing(params, medium, d)
    }

    /// Places emitters at a uniform physical spacing `d` (meters).
    pub fn with_spacing(params: Vec<(f64, f64, f64)>, medium: WaveguideMedium, d: f64) -> Result<Self> {
        let qubits = params
            .into_iter()
            .enumerate()
            .map(|(i, (omega, g, gnr))| Qubit::new(omega, g, gnr, i as f64 * d))
            .collect::<Result<Vec<_>>>()?;
        Self::new(qubits, medium)
    }

    pub fn len(&self) -> usize {
        self.qubits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.qubits.is_empty()
    }

    pub fn qubits(&self) -> &[Qubit] {
        &self.qubits
    }

    pub fn medium(&self) -> &WaveguideMedium {
        &self.medium
    }

    /// `|x_i - x_j| / lambda0`.
    pub fn spacing_ratio(&self, i: usize, j: usize) -> f64 {
        (self.qubits[i].position - self.qubits[j].position).abs() / self.medium.lambda0()
    }

    /// Positions measured from the first emitter.
    pub fn relative_positions(&self) -> Vec<f64> {
        let x0 = self.qubits[0].position;
        self.qubits.iter().map(|q| q.position - x0).collect()
    }

    pub fn mean_gamma_wg(&self) -> f64 {
        self.qubits.iter().map(|q| q.gamma_wg).sum::<f64>() / self.len() as f64
    }

    pub fn max_gamma_wg(&self) -> f64 {
        self.qubits.iter().map(|q| q.gamma_wg).fold(0.0, f64::max)
    }

    pub fn is_lossless(&self) -> bool {
        self.qubits.iter().all(|q| q.gamma_nr == 0.0)
    }

    /// Copy with qubit `index` moved to frequency `omega`.
    pub fn with_qubit_omega(&self, index: usize, omega: f64) -> Result<Self> {
        if index >= self.len() {
            return Err(Error::domain(format!("qubit index {index} out of range for N={}", self.len())));
        }
        let mut qubits = self.qubits.clone();
        qubits[index].omega = omega;
        Self::new(qubits, self.medium)
    }

    /// Copy with every qubit frequency replaced.
    pub fn with_omegas(&self, omegas: &[f64]) -> Result<Self> {
        if omegas.len() != self.len() {
            return Err(Error::domain(format!(
                "expected {} frequencies, got {}",
                self.len(),
                omegas.len()
            )));
        }
        let qubits = self
            .qubits
            .iter()
            .zip(omegas)
            .map(|(q, &omega)| Qubit { omega, ..*q })
            .collect();
        Self::new(qubits, self.medium)
    }

    /// All qubits and the phase reference moved to `omega0`; geometry kept.
    pub fn retuned(&self, omega0: f64) -> Result<Self> {
        let medium = WaveguideMedium::new(self.medium.velocity, omega0)?;
        let qubits = self.qubits.iter().map(|q| Qubit { omega: omega0, ..*q }).collect();
        Self::new(qubits, medium)
    }

    pub fn with_velocity(&self, velocity: f64) -> Result<Self> {
        let medium = WaveguideMedium::new(velocity, self.medium.omega_ref)?;
        Self::new(self.qubits.clone(), medium)
    }

    /// Copy with all free-space dissipation removed.
    pub fn lossless(&self) -> Self {
        let qubits = self.qubits.iter().map(|q| Qubit { gamma_nr: 0.0, ..*q }).collect();
        ArrayModel {
            qubits,
            medium: self.medium,
        }
    }

    /// Copy with every waveguide decay rate set to `gamma_wg`.
    pub fn with_uniform_gamma_wg(&self, gamma_wg: f64) -> Result<Self> {
        let qubits = self.qubits.iter().map(|q| Qubit { gamma_wg, ..*q }).collect();
        Self::new(qubits, self.medium)
    }

    /// Mirror image: the last qubit becomes the first, spacings preserved.
    pub fn reversed(&self) -> Self {
        let x_last = self.qubits[self.len() - 1].position;
        let qubits = self
            .qubits
            .iter()
            .rev()
            .map(|q| Qubit {
                position: x_last - q.position,
                ..*q
            })
            .collect();
        ArrayModel {
            qubits,
            medium: self.medium,
        }
    }

    /// Coupling vector `sqrt(Gamma_k) exp(i k0 (x_k - x_1))`.
    pub(crate) fn coupling_vector(&self) -> Vec<Complex64> {
        let k0 = self.medium.k0();
        self.relative_positions()
            .iter()
            .zip(&self.qubits)
            .map(|(x, q)| Complex64::from_polar(q.gamma_wg.sqrt(), k0 * x))
            .collect()
    }
}

/// `sin(2 pi r)` and `cos(2 pi r)` with `r` reduced to one period first.
fn sin_cos_turns(r: f64) -> (f64, f64) {
    (TAU * r.rem_euclid(1.0)).sin_cos()
}

/// Waveguide-mediated coherent and dissipative couplings `(g_ij, gamma_ij)`
/// between two emitters a distance `spacing_ratio * lambda0` apart.
pub fn coupling_pair(gamma_wg_i: f64, gamma_wg_j: f64, spacing_ratio: f64) -> Result<(f64, f64)> {
    if !(gamma_wg_i >= 0.0 && gamma_wg_j >= 0.0) {
        return Err(Error::domain(format!(
            "decay rates must be non-negative, got {gamma_wg_i} and {gamma_wg_j}"
        )));
    }
    if !(spacing_ratio >= 0.0 && spacing_ratio.is_finite()) {
        return Err(Error::domain(format!("spacing ratio must be >= 0, got {spacing_ratio}")));
    }
    let amplitude = (gamma_wg_i * gamma_wg_j).sqrt() / 2.0;
    let (s, c) = sin_cos_turns(spacing_ratio);
    Ok((amplitude * s, amplitude * c))
}

/// `H_eff` together with the array it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveHamiltonian {
    pub matrix: ComplexMatrix,
    pub model: ArrayModel,
}

/// Builds `H_eff` with diagonal `omega_i - i (gamma_nr_i + gamma_wg_i) / 2`
/// and off-diagonal `g_ij - i gamma_ij`.
pub fn build_h_eff(model: &ArrayModel) -> Result<EffectiveHamiltonian> {
    let n = model.len();
    if n == 0 {
        return Err(Error::domain("array must contain at least one qubit"));
    }
    let qubits = model.qubits();
    let mut matrix = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        let q = &qubits[i];
        matrix[(i, i)] = Complex64::new(q.omega, -(q.gamma_nr + q.gamma_wg) / 2.0);
        for j in (i + 1)..n {
            let (g, gamma) = coupling_pair(q.gamma_wg, qubits[j].gamma_wg, model.spacing_ratio(i, j))?;
            let entry = Complex64::new(g, -gamma);
            matrix[(i, j)] = entry;
            matrix[(j, i)] = entry;
        }
    }
    Ok(EffectiveHamiltonian {
        matrix,
        model: model.clone(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DevicePreset {
    A,
    B1,
    B2,
}

impl DevicePreset {
    pub const ALL: [DevicePreset; 3] = [DevicePreset::A, DevicePreset::B1, DevicePreset::B2];

    /// Nearest-neighbour spacing in meters.
    pub fn spacing(self) -> f64 {
        match self {
            DevicePreset::A => 10e-3,
            DevicePreset::B1 | DevicePreset::B2 => 5e-3,
        }
    }
}

impl fmt::Display for DevicePreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DevicePreset::A => "A",
            DevicePreset::B1 => "B1",
            DevicePreset::B2 => "B2",
        };
        f.write_str(s)
    }
}

impl FromStr for DevicePreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "A" => Ok(DevicePreset::A),
            "B1" => Ok(DevicePreset::B1),
            "B2" => Ok(DevicePreset::B2),
            other => Err(Error::config("device", format!("unknown device preset `{other}`"))),
        }
    }
}

// Single-qubit characterisation, (Gamma/2pi, gamma'/2pi) in MHz, Q1..Q8.
const DEVICE_A_MHZ: [(f64, f64); 8] = [
    (10.132, 0.304),
    (9.759, 0.313),
    (9.738, 0.268),
    (10.172, 0.290),
    (10.049, 0.328),
    (9.824, 0.283),
    (10.931, 1.096),
    (10.084, 0.283),
];

const DEVICE_B_MHZ: [(f64, f64); 8] = [
    (7.834, 0.643),
    (5.664, 1.108),
    (7.668, 0.174),
    (6.495, 1.889),
    (7.255, 0.429),
    (6.868, 1.048),
    (6.807, 0.513),
    (6.791, 1.179),
];

/// Measured device geometry and rates with every qubit at `omega_common`.
///
/// B2 is B1 with a nonfunctional Q1: the remaining seven qubits keep their
/// original positions.
pub fn device_preset(name: DevicePreset, omega_common: f64) -> Result<ArrayModel> {
    let medium = WaveguideMedium::new(CPW_VELOCITY, omega_common)?;
    let (rows, skip): (&[(f64, f64)], usize) = match name {
        DevicePreset::A => (&DEVICE_A_MHZ, 0),
        DevicePreset::B1 => (&DEVICE_B_MHZ, 0),
        DevicePreset::B2 => (&DEVICE_B_MHZ, 1),
    };
    let d = name.spacing();
    let qubits = rows
        .iter()
        .enumerate()
        .skip(skip)
        .map(|(i, &(g, gnr))| Qubit::new(omega_common, mhz_to_rad(g), mhz_to_rad(gnr), i as f64 * d))
        .collect::<Result<Vec<_>>>()?;
    ArrayModel::new(qubits, medium)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{ghz_to_rad, MHZ};
    use proptest::prelude::*;

    const GAMMA: f64 = 10.0 * MHZ;

    #[test]
    fn anti_bragg_and_bragg_points() {
        let (g, gamma) = coupling_pair(GAMMA, GAMMA, 0.25).unwrap();
        assert!((g - GAMMA / 2.0).abs() < 1e-12 * GAMMA);
        assert!(gamma.abs() < 1e-12 * GAMMA);

        let (g, gamma) = coupling_pair(GAMMA, GAMMA, 0.5).unwrap();
        assert!(g.abs() < 1e-12 * GAMMA);
        assert!((gamma + GAMMA / 2.0).abs() < 1e-12 * GAMMA);
    }

    #[test]
    fn device_a_q1_q2_bragg_coupling() {
        let (g, gamma) = coupling_pair(10.132 * MHZ, 9.759 * MHZ, 0.5).unwrap();
        assert!(g.abs() < 1e-9 * MHZ);
        // -sqrt(10.132 * 9.759) / 2 = -4.97197...
        let expected = -(10.132f64 * 9.759).sqrt() / 2.0;
        assert!((gamma / MHZ - expected).abs() < 1e-12);
        assert!((gamma / MHZ + 4.971).abs() < 1e-3);
    }

    #[test]
    fn negative_rate_rejected() {
        assert!(matches!(coupling_pair(-1.0, 1.0, 0.1), Err(Error::Domain(_))));
        assert!(matches!(coupling_pair(1.0, 1.0, -0.1), Err(Error::Domain(_))));
    }

    #[test]
    fn single_qubit_matrix() {
        let model = ArrayModel::new(
            vec![Qubit::new(ghz_to_rad(6.0), GAMMA, 0.03 * GAMMA, 0.0).unwrap()],
            WaveguideMedium::new(CPW_VELOCITY, ghz_to_rad(6.0)).unwrap(),
        )
        .unwrap();
        let h = build_h_eff(&model).unwrap().matrix;
        assert_eq!(h[(0, 0)], Complex64::new(ghz_to_rad(6.0), -1.03 * GAMMA / 2.0));
    }

    #[test]
    fn two_qubit_bragg_matrix() {
        let w0 = ghz_to_rad(6.0);
        let model = ArrayModel::homogeneous(2, w0, GAMMA, 0.0, 0.5).unwrap();
        let h = build_h_eff(&model).unwrap().matrix;
        assert_eq!(h[(0, 0)], Complex64::new(w0, -GAMMA / 2.0));
        let off = h[(0, 1)];
        assert!(off.re.abs() < 1e-9 * GAMMA);
        assert!((off.im - GAMMA / 2.0).abs() < 1e-9 * GAMMA);
    }

    #[test]
    fn device_a_entry_matches_coupling_pair() {
        let w0 = ghz_to_rad(6.0);
        let model = device_preset(DevicePreset::A, w0).unwrap();
        assert_eq!(model.len(), 8);
        assert!((model.spacing_ratio(0, 1) - 0.5).abs() < 1e-12);
        let h = build_h_eff(&model).unwrap().matrix;
        let q = model.qubits();
        let (g, gamma) = coupling_pair(q[0].gamma_wg, q[1].gamma_wg, 10e-3 / model.medium().lambda0()).unwrap();
        assert!((h[(0, 1)] - Complex64::new(g, -gamma)).norm() < 1e-9 * GAMMA);
    }

    #[test]
    fn presets_carry_table_values() {
        let w0 = ghz_to_rad(6.0);
        let a = device_preset(DevicePreset::A, w0).unwrap();
        assert!((a.qubits()[0].gamma_wg / MHZ - 10.132).abs() < 1e-12);
        assert!((a.qubits()[0].gamma_nr / MHZ - 0.304).abs() < 1e-12);

        let b1 = device_preset(DevicePreset::B1, w0).unwrap();
        assert_eq!(b1.len(), 8);
        assert!((b1.qubits()[3].gamma_wg / MHZ - 6.495).abs() < 1e-12);
        assert!((b1.qubits()[3].gamma_nr / MHZ - 1.889).abs() < 1e-12);
        assert!((b1.spacing_ratio(0, 1) - 0.25).abs() < 1e-12);

        let b2 = device_preset(DevicePreset::B2, w0).unwrap();
        assert_eq!(b2.len(), 7);
        assert!((b2.qubits()[0].gamma_wg / MHZ - 5.664).abs() < 1e-12);
        assert!((b2.qubits()[0].position - 5e-3).abs() < 1e-15);
        assert!(b2.qubits().iter().all(|q| q.omega == w0));
    }

    #[test]
    fn unknown_preset_name() {
        assert!("C".parse::<DevicePreset>().is_err());
        assert_eq!("b2".parse::<DevicePreset>().unwrap(), DevicePreset::B2);
    }

    #[test]
    fn invalid_arrays_rejected() {
        let medium = WaveguideMedium::new(CPW_VELOCITY, 1e10).unwrap();
        assert!(ArrayModel::new(vec![], medium).is_err());
        let q = Qubit::new(1e10, 1e7, 0.0, 0.0).unwrap();
        assert!(ArrayModel::new(vec![q, q], medium).is_err());
        assert!(Qubit::new(-1.0, 1e7, 0.0, 0.0).is_err());
        assert!(Qubit::new(1e10, -1e7, 0.0, 0.0).is_err());
        assert!(WaveguideMedium::new(0.0, 1e10).is_err());
    }

    #[test]
    fn reversal_preserves_spacings() {
        let model = device_preset(DevicePreset::B2, ghz_to_rad(6.0)).unwrap();
        let rev = model.reversed();
        assert_eq!(rev.qubits()[0].gamma_wg, model.qubits()[6].gamma_wg);
        assert!((rev.spacing_ratio(0, 6) - model.spacing_ratio(0, 6)).abs() < 1e-12);
    }

    fn arb_model() -> impl Strategy<Value = ArrayModel> {
        (1usize..10, 0.05f64..0.95, proptest::collection::vec((0.5f64..2.0, 0.0f64..0.2, -3.0f64..3.0), 10))
            .prop_map(|(n, ratio, params)| {
                let w0 = ghz_to_rad(6.0);
                let params = params[..n]
                    .iter()
                    .map(|&(g, gnr, det)| (w0 + det * GAMMA, g * GAMMA, gnr * GAMMA))
                    .collect();
                ArrayModel::with_spacing_ratio(params, WaveguideMedium::new(CPW_VELOCITY, w0).unwrap(), ratio).unwrap()
            })
    }

    proptest! {
        #[test]
        fn h_eff_is_complex_symmetric_and_passive(model in arb_model()) {
            let h = build_h_eff(&model).unwrap().matrix;
            let n = model.len();
            for i in 0..n {
                prop_assert!(h[(i, i)].im <= 0.0);
                for j in 0..n {
                    prop_assert_eq!(h[(i, j)], h[(j, i)]);
                }
            }
        }

        #[test]
        fn couplings_are_one_periodic(g1 in 0.0f64..3.0, g2 in 0.0f64..3.0, ratio in 0.0f64..4.0) {
            let (a, b) = coupling_pair(g1, g2, ratio).unwrap();
            let (c, d) = coupling_pair(g1, g2, ratio + 1.0).unwrap();
            let scale = (g1 * g2).sqrt().max(f64::MIN_POSITIVE);
            prop_assert!((a - c).abs() <= 1e-12 * scale);
            prop_assert!((b - d).abs() <= 1e-12 * scale);
        }

        #[test]
        fn bragg_couplings_purely_dissipative(n in 2usize..12) {
            let model = ArrayModel::homogeneous(n, ghz_to_rad(6.0), GAMMA, 0.0, 0.5).unwrap();
            let h = build_h_eff(&model).unwrap().matrix;
            for i in 0..n {
                for j in (i + 1)..n {
                    prop_assert!(h[(i, j)].re.abs() < 1e-9 * GAMMA);
                    prop_assert!((h[(i, j)].im.abs() - GAMMA / 2.0).abs() < 1e-9 * GAMMA);
                }
            }
        }

        #[test]
        fn anti_bragg_nearest_real_next_imaginary(n in 3usize..12) {
            let model = ArrayModel::homogeneous(n, ghz_to_rad(6.0), GAMMA, 0.0, 0.25).unwrap();
            let h = build_h_eff(&model).unwrap().matrix;
            for i in 0..n - 1 {
                prop_assert!(h[(i, i + 1)].im.abs() < 1e-9 * GAMMA);
            }
            for i in 0..n - 2 {
                prop_assert!(h[(i, i + 2)].re.abs() < 1e-9 * GAMMA);
            }
        }
    }
}
