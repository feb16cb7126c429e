//! Named parameter sweeps mirroring the measurement protocols: qubits
//! brought into resonance one at a time, a single detuned qubit, linear
//! frequency gradients and effective-spacing sweeps through the common
//! qubit frequency.
//!
//! A [`ScenarioSpec`] is plain JSON with frequencies in GHz and spans in
//! MHz (cyclic, i.e. already divided by 2π). Running the same spec always
//! produces the same [`SweepResult`] bit for bit, whatever the thread count.
//!
//! Device A with the nominal waveguide velocity reaches `d/λ0 = 0.5` at
//! 6.0 GHz. The velocity implied by `d/λ0 = 0.483` at 5.7 GHz is
//! [`CALIBRATED_CPW_VELOCITY`], which moves the Bragg point to about
//! 5.9 GHz; presets use the nominal value unless `velocity_m_per_s` is set.

mod presets;
mod report;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{track_modes, FrequencySweep, ModeTrack, Observable, SpectralCurve};
use crate::config::ArrayConfig;
use crate::error::{Error, Result};
use crate::model::{device_preset, ArrayModel, DevicePreset};
use crate::scattering::{linspace, scan, Method, PhaseConvention, ScatteringPoint};
use crate::units::{ghz_to_rad, mhz_to_rad};

pub use presets::{antibragg_gradient, bragg_gradient, figure, FIGURES};
pub use report::{analyze_sweep, RowAnalysis, SweepAnalysis, TrackSummary};

/// Distance of parked qubits above the working frequency, in mean
/// waveguide linewidths.
pub const PARKING_OFFSET: f64 = 200.0;

/// Waveguide velocity (m/s) matching `d/λ0 = 0.483` for 10 mm spacing at
/// 5.7 GHz.
pub const CALIBRATED_CPW_VELOCITY: f64 = 5.7e9 * 10e-3 / 0.483;

/// How the measured rates of a preset are used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rates {
    /// Waveguide and free-space rates as characterised.
    #[default]
    Measured,
    /// Measured waveguide rates, no free-space loss.
    Lossless,
    /// Every waveguide rate set to the device mean, no free-space loss.
    Ideal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum DeviceSpec {
    Preset {
        name: DevicePreset,
        #[serde(default)]
        rates: Rates,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        velocity_m_per_s: Option<f64>,
    },
    Array(ArrayConfig),
}

impl DeviceSpec {
    pub fn preset(name: DevicePreset, rates: Rates) -> Self {
        DeviceSpec::Preset {
            name,
            rates,
            velocity_m_per_s: None,
        }
    }

    /// The array with every qubit and the phase reference at `omega0`.
    pub fn build(&self, omega0: f64) -> Result<ArrayModel> {
        match self {
            DeviceSpec::Preset {
                name,
                rates,
                velocity_m_per_s,
            } => {
                let mut model = device_preset(*name, omega0)?;
                if let Some(v) = velocity_m_per_s {
                    model = model.with_velocity(*v)?;
                }
                match rates {
                    Rates::Measured => Ok(model),
                    Rates::Lossless => Ok(model.lossless()),
                    Rates::Ideal => model.lossless().with_uniform_gamma_wg(model.mean_gamma_wg()),
                }
            }
            DeviceSpec::Array(config) => config.to_model()?.retuned(omega0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SweepSpec {
    /// Rows `N = 1..=n_max`: the first `N` qubits at ω0, the rest parked.
    SuccessiveResonance { n_max: usize },
    /// One qubit (zero-based) swept across `detuning_mhz` around ω0.
    DetuneOneQubit {
        qubit: usize,
        detuning_mhz: [f64; 2],
        steps: usize,
    },
    /// Qubit `i` at `ω0 + offsets[i] δ` for each δ in `delta_mhz`.
    GradientDetuning {
        offsets: Vec<f64>,
        delta_mhz: [f64; 2],
        steps: usize,
    },
    /// All qubits moved together to each listed frequency.
    EffectiveSpacing { omega0_ghz: Vec<f64> },
}

/// Symmetric probe window around each row's centre frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeSpec {
    pub span_mhz: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub id: String,
    pub device: DeviceSpec,
    pub omega0_ghz: f64,
    pub sweep: SweepSpec,
    pub probe: ProbeSpec,
    #[serde(default)]
    pub method: Method,
    #[serde(default)]
    pub convention: PhaseConvention,
}

impl ScenarioSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            Error::config("<json>", format!("line {} column {}: {e}", e.line(), e.column()))
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serialises")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ControlUnit {
    Count,
    /// Absolute frequency, rad/s.
    Frequency,
    /// Frequency difference, rad/s.
    Detuning,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlAxis {
    pub name: String,
    pub unit: ControlUnit,
    pub values: Vec<f64>,
    /// `d/λ0` per row, for effective-spacing sweeps.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub spacing_ratio: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub spec: ScenarioSpec,
    pub control: ControlAxis,
    /// Probe offsets from each row's centre (rad/s).
    pub probe: Vec<f64>,
    /// Centre frequency of each row (rad/s).
    pub centers: Vec<f64>,
    /// `points[row][probe]`.
    pub points: Vec<Vec<ScatteringPoint>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode_track: Option<ModeTrack>,
}

impl SweepResult {
    pub fn rows(&self) -> usize {
        self.points.len()
    }

    pub fn curve(&self, row: usize, observable: Observable) -> Result<SpectralCurve> {
        SpectralCurve::from_points(&self.points[row], observable)
    }

    pub fn abs_t(&self, row: usize) -> Vec<f64> {
        self.points[row].iter().map(|p| p.t.norm()).collect()
    }
}

struct Row {
    control: f64,
    center: f64,
    model: ArrayModel,
}

/// Evaluates every (row, probe) cell of a scenario.
pub fn run(spec: &ScenarioSpec) -> Result<SweepResult> {
    if !(spec.omega0_ghz > 0.0 && spec.omega0_ghz.is_finite()) {
        return Err(Error::config("omega0_ghz", "must be positive"));
    }
    if !(spec.probe.span_mhz > 0.0 && spec.probe.span_mhz.is_finite()) {
        return Err(Error::config("probe.span_mhz", "must be positive"));
    }
    if spec.probe.points < 3 {
        return Err(Error::config("probe.points", "need at least 3 points"));
    }
    let omega0 = ghz_to_rad(spec.omega0_ghz);
    let base = spec.device.build(omega0)?;
    let (control, rows, track) = plan(spec, &base, omega0)?;

    let span = mhz_to_rad(spec.probe.span_mhz);
    let probe = linspace(-span, span, spec.probe.points);
    let points = rows
        .par_iter()
        .map(|row| {
            let grid: Vec<f64> = probe.iter().map(|d| row.center + d).collect();
            scan(&row.model, &grid, spec.method, spec.convention)
        })
        .collect::<Result<Vec<_>>>()?;
    let mode_track = track.map(|sweep| track_modes(&base, &sweep)).transpose()?;

    Ok(SweepResult {
        spec: spec.clone(),
        control,
        probe,
        centers: rows.iter().map(|r| r.center).collect(),
        points,
        mode_track,
    })
}

fn steps_grid(range: [f64; 2], steps: usize, field: &str) -> Result<Vec<f64>> {
    if steps == 0 || !range.iter().all(|x| x.is_finite()) {
        return Err(Error::config(field, "need a finite range and at least one step"));
    }
    if steps == 1 {
        return Ok(vec![mhz_to_rad(range[0])]);
    }
    Ok(linspace(mhz_to_rad(range[0]), mhz_to_rad(range[1]), steps))
}

fn plan(
    spec: &ScenarioSpec,
    base: &ArrayModel,
    omega0: f64,
) -> Result<(ControlAxis, Vec<Row>, Option<FrequencySweep>)> {
    let n = base.len();
    let axis = |name: &str, unit, values: Vec<f64>| ControlAxis {
        name: name.into(),
        unit,
        values,
        spacing_ratio: Vec::new(),
    };
    match &spec.sweep {
        SweepSpec::SuccessiveResonance { n_max } => {
            if *n_max == 0 || *n_max > n {
                return Err(Error::config("sweep.n_max", format!("must be in 1..={n}")));
            }
            let parked = omega0 + PARKING_OFFSET * base.mean_gamma_wg();
            let rows = (1..=*n_max)
                .map(|k| {
                    let omegas: Vec<f64> = (0..n).map(|i| if i < k { omega0 } else { parked }).collect();
                    Ok(Row {
                        control: k as f64,
                        center: omega0,
                        model: base.with_omegas(&omegas)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let values = rows.iter().map(|r| r.control).collect();
            Ok((axis("n", ControlUnit::Count, values), rows, None))
        }
        SweepSpec::DetuneOneQubit {
            qubit,
            detuning_mhz,
            steps,
        } => {
            if *qubit >= n {
                return Err(Error::config("sweep.qubit", format!("must be below {n}")));
            }
            let omegas: Vec<f64> = steps_grid(*detuning_mhz, *steps, "sweep.detuning_mhz")?
                .into_iter()
                .map(|d| omega0 + d)
                .collect();
            let rows = omegas
                .iter()
                .map(|&w| {
                    Ok(Row {
                        control: w,
                        center: omega0,
                        model: base.with_qubit_omega(*qubit, w)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let sweep = FrequencySweep {
                qubit: *qubit,
                omegas: omegas.clone(),
            };
            let name = format!("omega_q{}", qubit + 1);
            Ok((axis(&name, ControlUnit::Frequency, omegas), rows, Some(sweep)))
        }
        SweepSpec::GradientDetuning {
            offsets,
            delta_mhz,
            steps,
        } => {
            if offsets.len() != n {
                return Err(Error::config(
                    "sweep.offsets",
                    format!("length mismatch: {} offsets for {n} qubits", offsets.len()),
                ));
            }
            if offsets.iter().any(|o| !o.is_finite()) {
                return Err(Error::config("sweep.offsets", "offsets must be finite"));
            }
            let deltas = steps_grid(*delta_mhz, *steps, "sweep.delta_mhz")?;
            let rows = deltas
                .iter()
                .map(|&d| {
                    let omegas: Vec<f64> = offsets.iter().map(|o| omega0 + o * d).collect();
                    Ok(Row {
                        control: d,
                        center: omega0,
                        model: base.with_omegas(&omegas)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((axis("delta", ControlUnit::Detuning, deltas), rows, None))
        }
        SweepSpec::EffectiveSpacing { omega0_ghz } => {
            if omega0_ghz.is_empty() {
                return Err(Error::config("sweep.omega0_ghz", "list is empty"));
            }
            let rows = omega0_ghz
                .iter()
                .map(|&f| {
                    if !(f > 0.0 && f.is_finite()) {
                        return Err(Error::config("sweep.omega0_ghz", "frequencies must be positive"));
                    }
                    let w = ghz_to_rad(f);
                    Ok(Row {
                        control: w,
                        center: w,
                        model: base.retuned(w)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let mut control = axis("omega0", ControlUnit::Frequency, rows.iter().map(|r| r.control).collect());
            if n > 1 {
                control.spacing_ratio = rows.iter().map(|r| r.model.spacing_ratio(0, 1)).collect();
            }
            Ok((control, rows, None))
        }
    }
}

fn scenario(id: &str, device: DeviceSpec, omega0_ghz: f64, sweep: SweepSpec, probe: ProbeSpec) -> Result<SweepResult> {
    run(&ScenarioSpec {
        id: id.into(),
        device,
        omega0_ghz,
        sweep,
        probe,
        method: Method::default(),
        convention: PhaseConvention::default(),
    })
}

/// Qubits `1..=N` at `omega0_ghz` for each `N` up to `n_max`, others parked
/// [`PARKING_OFFSET`] linewidths above.
pub fn successive_resonance(device: DeviceSpec, omega0_ghz: f64, n_max: usize, probe: ProbeSpec) -> Result<SweepResult> {
    scenario("successive_resonance", device, omega0_ghz, SweepSpec::SuccessiveResonance { n_max }, probe)
}

/// Sweeps one qubit across `detuning_mhz` with the rest at `omega0_ghz`,
/// attaching the eigenmode track over the same grid.
pub fn detune_one_qubit(
    device: DeviceSpec,
    omega0_ghz: f64,
    qubit: usize,
    detuning_mhz: [f64; 2],
    steps: usize,
    probe: ProbeSpec,
) -> Result<SweepResult> {
    let sweep = SweepSpec::DetuneOneQubit {
        qubit,
        detuning_mhz,
        steps,
    };
    scenario("detune_one_qubit", device, omega0_ghz, sweep, probe)
}

pub fn gradient_detuning(
    device: DeviceSpec,
    omega0_ghz: f64,
    offsets: Vec<f64>,
    delta_mhz: [f64; 2],
    steps: usize,
    probe: ProbeSpec,
) -> Result<SweepResult> {
    let sweep = SweepSpec::GradientDetuning {
        offsets,
        delta_mhz,
        steps,
    };
    scenario("gradient_detuning", device, omega0_ghz, sweep, probe)
}

/// Moves every qubit to each listed frequency; `d/λ0` follows.
pub fn effective_spacing_sweep(device: DeviceSpec, omega0_list_ghz: Vec<f64>, probe: ProbeSpec) -> Result<SweepResult> {
    let first = *omega0_list_ghz
        .first()
        .ok_or_else(|| Error::config("sweep.omega0_ghz", "list is empty"))?;
    let sweep = SweepSpec::EffectiveSpacing {
        omega0_ghz: omega0_list_ghz,
    };
    scenario("effective_spacing_sweep", device, first, sweep, probe)
}

#[cfg(test)]
mod tests {
    use super::*;

    const PROBE: ProbeSpec = ProbeSpec {
        span_mhz: 50.0,
        points: 101,
    };

    #[test]
    fn spec_json_roundtrip() {
        let spec = figure("fig4").unwrap();
        assert_eq!(ScenarioSpec::from_json(&spec.to_json()).unwrap(), spec);
    }

    #[test]
    fn unknown_field_reports_position() {
        let text = r#"{"id": "x", "device": {"preset": {"name": "A"}}, "omega0_ghz": 6.0,
            "sweep": {"kind": "successive_resonance", "n_max": 3}, "probe": {"span_mhz": 10, "points": 11},
            "colour": 1}"#;
        match ScenarioSpec::from_json(text) {
            Err(Error::Config { message, .. }) => assert!(message.contains("line 3"), "{message}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn offsets_length_mismatch() {
        let err = gradient_detuning(
            DeviceSpec::preset(DevicePreset::A, Rates::Ideal),
            6.0,
            vec![0.0; 7],
            [0.0, 5.0],
            3,
            PROBE,
        )
        .unwrap_err();
        assert!(err.to_string().contains("length mismatch"), "{err}");
    }

    #[test]
    fn successive_resonance_bounds() {
        let device = DeviceSpec::preset(DevicePreset::B2, Rates::Measured);
        assert!(successive_resonance(device.clone(), 6.0, 8, PROBE).is_err());
        let r = successive_resonance(device, 6.0, 7, PROBE).unwrap();
        assert_eq!(r.rows(), 7);
        assert_eq!(r.control.values, (1..=7).map(f64::from).collect::<Vec<_>>());
    }

    #[test]
    fn device_a_spacing_ratio_at_six_ghz() {
        let r = effective_spacing_sweep(DeviceSpec::preset(DevicePreset::A, Rates::Ideal), vec![6.0, 5.7], PROBE).unwrap();
        assert!((r.control.spacing_ratio[0] - 0.5).abs() < 1e-12);
        assert!((r.control.spacing_ratio[1] - 0.475).abs() < 1e-12);
    }

    #[test]
    fn calibrated_velocity_shifts_bragg_point() {
        let device = DeviceSpec::Preset {
            name: DevicePreset::A,
            rates: Rates::Measured,
            velocity_m_per_s: Some(CALIBRATED_CPW_VELOCITY),
        };
        let m = device.build(ghz_to_rad(5.7)).unwrap();
        assert!((m.spacing_ratio(0, 1) - 0.483).abs() < 1e-12);
    }
}
