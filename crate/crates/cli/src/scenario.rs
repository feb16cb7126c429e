use serde::Serialize;
use superatom::scenarios::{analyze_sweep, run as run_sweep, ControlUnit, ScenarioSpec, SweepResult};
use superatom::units::{rad_to_ghz, rad_to_mhz};

use crate::error::CliError;
use crate::{output, ScenarioOverrides, Sink};

#[derive(Debug, Serialize)]
struct LongRow {
    control: f64,
    omega_p_ghz: f64,
    abs_t: f64,
    abs_r: f64,
}

#[derive(Serialize)]
struct ControlOut<'a> {
    name: &'a str,
    /// `count`, `ghz` or `mhz`.
    unit: &'static str,
    values: Vec<f64>,
    #[serde(skip_serializing_if = "<[f64]>::is_empty")]
    spacing_ratio: &'a [f64],
}

#[derive(Serialize)]
struct MatrixDocument<'a> {
    scenario: &'a ScenarioSpec,
    control: ControlOut<'a>,
    probe_offset_mhz: Vec<f64>,
    centers_ghz: Vec<f64>,
    /// `[row][probe]` from here on.
    abs_t: Vec<Vec<f64>>,
    abs_r: Vec<Vec<f64>>,
    re_t: Vec<Vec<f64>>,
    im_t: Vec<Vec<f64>>,
    re_r: Vec<Vec<f64>>,
    im_r: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct WindowOut {
    center_ghz: f64,
    /// From the row centre.
    offset_mhz: f64,
    width_mhz: f64,
    peak: f64,
    prominence: f64,
}

#[derive(Serialize)]
struct RowOut {
    control: f64,
    fwhm_mhz: Option<f64>,
    flat_bottom_mhz: Option<f64>,
    windows: Vec<WindowOut>,
}

#[derive(Serialize)]
struct TrackOut {
    parameter_ghz: Vec<f64>,
    /// `[track][step]` from here on.
    detuning_mhz: Vec<Vec<f64>>,
    decay_mhz: Vec<Vec<f64>>,
    dark_tracks: usize,
    /// `(step, track)`.
    crossings: Vec<(usize, usize)>,
}

#[derive(Serialize)]
struct AnalysisDocument<'a> {
    scenario: &'a str,
    control: ControlOut<'a>,
    rows: Vec<RowOut>,
    /// MHz per qubit, for successive-resonance sweeps.
    #[serde(skip_serializing_if = "Option::is_none")]
    fwhm_slope_mhz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mode_track: Option<TrackOut>,
}

fn display_unit(unit: ControlUnit) -> (&'static str, fn(f64) -> f64) {
    match unit {
        ControlUnit::Count => ("count", |x| x),
        ControlUnit::Frequency => ("ghz", rad_to_ghz),
        ControlUnit::Detuning => ("mhz", rad_to_mhz),
    }
}

fn control_out(result: &SweepResult) -> ControlOut<'_> {
    let (unit, convert) = display_unit(result.control.unit);
    ControlOut {
        name: &result.control.name,
        unit,
        values: result.control.values.iter().map(|&x| convert(x)).collect(),
        spacing_ratio: &result.control.spacing_ratio,
    }
}

fn matrix<F: Fn(&superatom::ScatteringPoint) -> f64>(result: &SweepResult, f: F) -> Vec<Vec<f64>> {
    result.points.iter().map(|row| row.iter().map(&f).collect()).collect()
}

pub fn run(mut spec: ScenarioSpec, overrides: &ScenarioOverrides, sink: &Sink) -> Result<(), CliError> {
    let Some(out) = sink.out.as_deref() else {
        return Err(CliError::Config(
            "--out is required: the analysis sidecar is written next to it".into(),
        ));
    };
    if let Some(m) = overrides.method {
        spec.method = m.into();
    }
    if let Some(c) = overrides.convention {
        spec.convention = c.into();
    }

    let result = run_sweep(&spec)?;
    let analysis = analyze_sweep(&result)?;
    let control = control_out(&result);

    let mut long = Vec::with_capacity(result.rows() * result.probe.len());
    for (row, &value) in result.points.iter().zip(&control.values) {
        for p in row {
            long.push(LongRow {
                control: value,
                omega_p_ghz: rad_to_ghz(p.omega_p),
                abs_t: p.t.norm(),
                abs_r: p.r.norm(),
            });
        }
    }
    let document = MatrixDocument {
        scenario: &result.spec,
        control: control_out(&result),
        probe_offset_mhz: result.probe.iter().map(|&x| rad_to_mhz(x)).collect(),
        centers_ghz: result.centers.iter().map(|&x| rad_to_ghz(x)).collect(),
        abs_t: matrix(&result, |p| p.t.norm()),
        abs_r: matrix(&result, |p| p.r.norm()),
        re_t: matrix(&result, |p| p.t.re),
        im_t: matrix(&result, |p| p.t.im),
        re_r: matrix(&result, |p| p.r.re),
        im_r: matrix(&result, |p| p.r.im),
    };
    output::emit(sink, &long, &document)?;

    let rows = analysis
        .rows
        .iter()
        .zip(&control.values)
        .zip(&result.centers)
        .map(|((row, &value), &center)| RowOut {
            control: value,
            fwhm_mhz: row.fwhm.map(rad_to_mhz),
            flat_bottom_mhz: row.flat_bottom_width.map(rad_to_mhz),
            windows: row
                .windows
                .iter()
                .map(|w| WindowOut {
                    center_ghz: rad_to_ghz(w.center),
                    offset_mhz: rad_to_mhz(w.center - center),
                    width_mhz: rad_to_mhz(w.width),
                    peak: w.peak,
                    prominence: w.prominence,
                })
                .collect(),
        })
        .collect();
    let mode_track = match (&analysis.mode_track, &result.mode_track) {
        (Some(summary), Some(track)) => Some(TrackOut {
            parameter_ghz: track.parameter.iter().map(|&x| rad_to_ghz(x)).collect(),
            detuning_mhz: mhz_rows(&summary.detuning),
            decay_mhz: mhz_rows(&summary.decay),
            dark_tracks: summary.dark_tracks,
            crossings: summary.crossings.clone(),
        }),
        _ => None,
    };
    let sidecar = AnalysisDocument {
        scenario: &result.spec.id,
        control,
        rows,
        fwhm_slope_mhz: analysis.fwhm_slope.map(rad_to_mhz),
        mode_track,
    };
    output::emit_json(
        Some(&output::companion(out, "analysis.json")),
        &sidecar,
        sink.meta.as_ref(),
    )
}

fn mhz_rows(rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    rows.iter().map(|r| r.iter().map(|&x| rad_to_mhz(x)).collect()).collect()
}
