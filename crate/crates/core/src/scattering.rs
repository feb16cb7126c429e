//! Single-photon transmission and reflection through an emitter array.
//!
//! Three independent routes are provided: a pivoted solve of the resolvent
//! `(omega_p - H_eff)^{-1}`, the biorthogonal mode sum, and 2x2 transfer
//! matrices built from the single-emitter response. Transmission is
//! referenced to the empty waveguide and reflection to the first emitter's
//! position.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eigendecompose, resolvent_apply, ComplexMatrix, ComplexSpectrum};
use crate::model::{build_h_eff, ArrayModel};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Fraction of the largest linewidth by which a probe sitting exactly on a
/// lossless resonance is moved.
pub const PROBE_SHIFT_FRACTION: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScatteringPoint {
    /// Requested probe frequency (rad/s).
    pub omega_p: f64,
    pub t: Complex64,
    pub r: Complex64,
    /// Offset actually applied to `omega_p` to avoid an exact lossless
    /// resonance; zero almost always.
    #[serde(default)]
    pub probe_shift: f64,
}

impl ScatteringPoint {
    pub fn transmittance(&self) -> f64 {
        self.t.norm_sqr()
    }

    pub fn reflectance(&self) -> f64 {
        self.r.norm_sqr()
    }

    /// `|t|^2 + |r|^2`.
    pub fn energy(&self) -> f64 {
        self.transmittance() + self.reflectance()
    }
}

/// How propagation phases between emitters are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PhaseConvention {
    /// Fixed at the reference wavenumber `k0`.
    #[default]
    Markov,
    /// At the probe wavenumber `omega_p / v`.
    Dispersive,
}

impl fmt::Display for PhaseConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PhaseConvention::Markov => "markov",
            PhaseConvention::Dispersive => "dispersive",
        })
    }
}

impl FromStr for PhaseConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "markov" => Ok(PhaseConvention::Markov),
            "dispersive" => Ok(PhaseConvention::Dispersive),
            other => Err(Error::config("convention", format!("unknown convention `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Method {
    #[default]
    #[serde(rename = "resolvent")]
    Resolvent,
    #[serde(rename = "modes")]
    Modes,
    #[serde(rename = "tmatrix")]
    TransferMatrix,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Resolvent => "resolvent",
            Method::Modes => "modes",
            Method::TransferMatrix => "tmatrix",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "resolvent" => Ok(Method::Resolvent),
            "modes" => Ok(Method::Modes),
            "tmatrix" => Ok(Method::TransferMatrix),
            other => Err(Error::config("method", format!("unknown method `{other}`"))),
        }
    }
}

/// Lorentzian response of one emitter at probe detuning `delta_p`:
/// `t = 1 - beta / (1 - 2 i delta_p / (gamma_wg + gamma_nr))`, `r = t - 1`.
pub fn single_qubit_tr(gamma_wg: f64, gamma_nr: f64, delta_p: f64) -> Result<(Complex64, Complex64)> {
    if !(gamma_wg >= 0.0 && gamma_nr >= 0.0) {
        return Err(Error::domain(format!(
            "decay rates must be non-negative, got {gamma_wg} and {gamma_nr}"
        )));
    }
    let total = gamma_wg + gamma_nr;
    if total == 0.0 {
        return Err(Error::domain("total linewidth is zero"));
    }
    let beta = gamma_wg / total;
    let t = ONE - beta / Complex64::new(1.0, -2.0 * delta_p / total);
    Ok((t, t - ONE))
}

fn shift_step(model: &ArrayModel) -> f64 {
    let widest = model
        .qubits()
        .iter()
        .map(|q| q.total_linewidth())
        .fold(0.0, f64::max);
    if widest > 0.0 {
        PROBE_SHIFT_FRACTION * widest
    } else {
        PROBE_SHIFT_FRACTION * 1e-6 * model.medium().omega_ref
    }
}

/// Resolvent evaluator with `H_eff` and the coupling vector cached, for
/// scanning many probe frequencies.
#[derive(Debug, Clone)]
pub struct ResolventScatterer {
    h: ComplexMatrix,
    coupling: Vec<Complex64>,
    shift: f64,
}

impl ResolventScatterer {
    pub fn new(model: &ArrayModel) -> Result<Self> {
        Ok(ResolventScatterer {
            h: build_h_eff(model)?.matrix,
            coupling: model.coupling_vector(),
            shift: shift_step(model),
        })
    }

    pub fn at(&self, omega_p: f64) -> Result<ScatteringPoint> {
        let (x, probe_shift) = match resolvent_apply(&self.h, omega_p, &self.coupling) {
            Ok(x) => (x, 0.0),
            Err(Error::Singular { .. }) => (resolvent_apply(&self.h, omega_p + self.shift, &self.coupling)?, self.shift),
            Err(e) => return Err(e),
        };
        let forward: Complex64 = self.coupling.iter().zip(&x).map(|(u, g)| u.conj() * g).sum();
        let backward: Complex64 = self.coupling.iter().zip(&x).map(|(u, g)| u * g).sum();
        Ok(ScatteringPoint {
            omega_p,
            t: ONE - 0.5 * I * forward,
            r: -0.5 * I * backward,
            probe_shift,
        })
    }
}

/// `t = 1 - (i/2) u^H G u`, `r = -(i/2) u^T G u` with
/// `u_k = sqrt(Gamma_k) exp(i k0 (x_k - x_1))` and `G = (omega_p - H_eff)^{-1}`.
///
/// A probe exactly on a real eigenvalue of a lossless array is moved by
/// [`PROBE_SHIFT_FRACTION`] of the widest linewidth; the offset is
/// recorded in the result.
pub fn scatter_resolvent(model: &ArrayModel, omega_p: f64) -> Result<ScatteringPoint> {
    ResolventScatterer::new(model)?.at(omega_p)
}

/// Mode-sum form of [`scatter_resolvent`] using a precomputed spectrum of
/// `H_eff`. Refuses spectra with near-degenerate modes.
pub fn scatter_modes(spectrum: &ComplexSpectrum, model: &ArrayModel, omega_p: f64) -> Result<ScatteringPoint> {
    if spectrum.len() != model.len() {
        return Err(Error::domain(format!(
            "spectrum has {} modes but the array has {} qubits",
            spectrum.len(),
            model.len()
        )));
    }
    if spectrum.has_near_degenerate() {
        return Err(Error::IllConditioned {
            flagged: spectrum.flagged_count(),
        });
    }
    let u = model.coupling_vector();
    let mut forward = Complex64::new(0.0, 0.0);
    let mut backward = Complex64::new(0.0, 0.0);
    for (n, &omega_n) in spectrum.eigenvalues.iter().enumerate() {
        let right = spectrum.right_vector(n);
        let into_mode: Complex64 = spectrum.left_vector(n).iter().zip(&u).map(|(l, v)| l * v).sum();
        let out_forward: Complex64 = u.iter().zip(&right).map(|(v, r)| v.conj() * r).sum();
        let out_backward: Complex64 = u.iter().zip(&right).map(|(v, r)| v * r).sum();
        let denom = omega_p - omega_n;
        forward += out_forward * into_mode / denom;
        backward += out_backward * into_mode / denom;
    }
    Ok(ScatteringPoint {
        omega_p,
        t: ONE - 0.5 * I * forward,
        r: -0.5 * I * backward,
        probe_shift: 0.0,
    })
}

/// Amplitudes of a stretch of waveguide, referenced to its two ends.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Section {
    t_forward: Complex64,
    t_backward: Complex64,
    r_left: Complex64,
    r_right: Complex64,
}

impl Section {
    fn emitter(t: Complex64, r: Complex64) -> Self {
        Section {
            t_forward: t,
            t_backward: t,
            r_left: r,
            r_right: r,
        }
    }

    /// `self`, then free propagation through `phase`, then `next`.
    fn then(self, phase: f64, next: Section) -> Section {
        let p = Complex64::from_polar(1.0, phase);
        let (tf, tb, rl) = (next.t_forward * p, next.t_backward * p, next.r_left * p * p);
        let round_trip = ONE - self.r_right * rl;
        Section {
            t_forward: self.t_forward * tf / round_trip,
            t_backward: tb * self.t_backward / round_trip,
            r_left: self.r_left + self.t_forward * rl * self.t_backward / round_trip,
            r_right: next.r_right + tb * self.r_right * tf / round_trip,
        }
    }
}

fn emitter_responses(model: &ArrayModel, omega: f64) -> Vec<(Complex64, Complex64)> {
    model
        .qubits()
        .iter()
        .map(|q| {
            if q.total_linewidth() == 0.0 {
                (ONE, Complex64::new(0.0, 0.0))
            } else {
                single_qubit_tr(q.gamma_wg, q.gamma_nr, omega - q.omega).expect("rates validated by the model")
            }
        })
        .collect()
}

/// Chains single-emitter responses and propagation segments from left to
/// right.
///
/// The chain is the product of the 2x2 transfer matrices
/// `(1/t)[[t^2 - r^2, r], [-r, 1]]` and `diag(e^{ikd}, e^{-ikd})`, but
/// carried as scattering amplitudes (Redheffer star products): near a
/// lossless resonance the matrix entries grow like `1/t_m` and the plain
/// product loses every digit of `t`.
///
/// Two perfect mirrors facing each other across a resonant gap make the
/// chain 0/0; the probe is then moved by [`PROBE_SHIFT_FRACTION`] of the
/// widest linewidth and the offset recorded.
pub fn scatter_transfer_matrix(
    model: &ArrayModel,
    omega_p: f64,
    convention: PhaseConvention,
) -> Result<ScatteringPoint> {
    if !omega_p.is_finite() {
        return Err(Error::domain("probe frequency must be finite"));
    }
    let (mut t, mut r) = chain(model, omega_p, convention);
    let mut probe_shift = 0.0;
    if !(t.is_finite() && r.is_finite()) {
        probe_shift = shift_step(model);
        (t, r) = chain(model, omega_p + probe_shift, convention);
    }
    Ok(ScatteringPoint {
        omega_p,
        t,
        r,
        probe_shift,
    })
}

fn chain(model: &ArrayModel, omega: f64, convention: PhaseConvention) -> (Complex64, Complex64) {
    let k = match convention {
        PhaseConvention::Markov => model.medium().k0(),
        PhaseConvention::Dispersive => omega / model.medium().velocity,
    };
    let positions = model.relative_positions();
    let responses = emitter_responses(model, omega);

    let (t1, r1) = responses[0];
    let mut total = Section::emitter(t1, r1);
    for m in 1..model.len() {
        let (tm, rm) = responses[m];
        let gap = positions[m] - positions[m - 1];
        total = total.then(k * gap, Section::emitter(tm, rm));
    }
    let length = positions[model.len() - 1];
    (total.t_forward * Complex64::from_polar(1.0, -k * length), total.r_left)
}

/// Evaluates a probe grid with the chosen method; points are computed in
/// parallel and returned in grid order.
pub fn scan(
    model: &ArrayModel,
    grid: &[f64],
    method: Method,
    convention: PhaseConvention,
) -> Result<Vec<ScatteringPoint>> {
    if method != Method::TransferMatrix && convention != PhaseConvention::Markov {
        return Err(Error::config(
            "convention",
            format!("the {method} method uses fixed (markov) phases only"),
        ));
    }
    match method {
        Method::Resolvent => {
            let scatterer = ResolventScatterer::new(model)?;
            grid.par_iter().map(|&w| scatterer.at(w)).collect()
        }
        Method::Modes => {
            let spectrum = eigendecompose(&build_h_eff(model)?.matrix)?;
            grid.par_iter().map(|&w| scatter_modes(&spectrum, model, w)).collect()
        }
        Method::TransferMatrix => grid
            .par_iter()
            .map(|&w| scatter_transfer_matrix(model, w, convention))
            .collect(),
    }
}

/// `n` evenly spaced points from `start` to `stop` inclusive.
pub fn linspace(start: f64, stop: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![start],
        _ => {
            let step = (stop - start) / (n - 1) as f64;
            (0..n)
                .map(|i| if i == n - 1 { stop } else { start + step * i as f64 })
                .collect()
        }
    }
}
