use serde::Serialize;
use superatom::units::rad_to_ghz;
use superatom::{scan, Method, PhaseConvention, ScatteringPoint};

use crate::error::CliError;
use crate::input::{GridArgs, ModelArgs};
use crate::{output, Sink};

pub const AMPLITUDE_TOLERANCE: f64 = 1e-9;
pub const UNITARITY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Serialize)]
struct Report {
    points: usize,
    convention: PhaseConvention,
    lossless: bool,
    max_dt: f64,
    max_dt_at_ghz: f64,
    max_dr: f64,
    max_dr_at_ghz: f64,
    /// `| |t|^2 + |r|^2 - 1 |` when lossless, the excess over 1 otherwise.
    unitarity_defect: f64,
    unitarity_at_ghz: f64,
    passed: bool,
}

/// Largest value and the probe frequency it occurred at.
fn worst(values: impl Iterator<Item = (f64, f64)>) -> (f64, f64) {
    values.fold((0.0, f64::NAN), |best, (x, at)| if x > best.0 || best.1.is_nan() { (x, at) } else { best })
}

fn defect(p: &ScatteringPoint, lossless: bool) -> f64 {
    let excess = p.energy() - 1.0;
    if lossless {
        excess.abs()
    } else {
        excess.max(0.0)
    }
}

/// Runs the resolvent (fixed phases) against the transfer matrix in
/// `convention`.
pub fn run(model: &ModelArgs, grid: &GridArgs, convention: PhaseConvention, sink: &Sink) -> Result<(), CliError> {
    let model = model.load()?;
    let grid = grid.build(&model)?;
    let resolvent = scan(&model, &grid, Method::Resolvent, PhaseConvention::Markov)?;
    let transfer = scan(&model, &grid, Method::TransferMatrix, convention)?;
    let lossless = model.is_lossless();

    let pairs = || resolvent.iter().zip(&transfer);
    // A probe moved off an exact lossless pole has an arbitrary overall
    // phase, so only magnitudes are comparable there.
    let gap = |a: ScatteringPoint, b: ScatteringPoint, pick: fn(&ScatteringPoint) -> superatom::Complex64| {
        if a.probe_shift != 0.0 || b.probe_shift != 0.0 {
            (pick(&a).norm() - pick(&b).norm()).abs()
        } else {
            (pick(&a) - pick(&b)).norm()
        }
    };
    let (max_dt, dt_at) = worst(pairs().map(|(a, b)| (gap(*a, *b, |p| p.t), a.omega_p)));
    let (max_dr, dr_at) = worst(pairs().map(|(a, b)| (gap(*a, *b, |p| p.r), a.omega_p)));
    let (unitarity, u_at) = worst(
        pairs().map(|(a, b)| (defect(a, lossless).max(defect(b, lossless)), a.omega_p)),
    );

    let passed = max_dt <= AMPLITUDE_TOLERANCE && max_dr <= AMPLITUDE_TOLERANCE && unitarity <= UNITARITY_TOLERANCE;
    let report = Report {
        points: grid.len(),
        convention,
        lossless,
        max_dt,
        max_dt_at_ghz: rad_to_ghz(dt_at),
        max_dr,
        max_dr_at_ghz: rad_to_ghz(dr_at),
        unitarity_defect: unitarity,
        unitarity_at_ghz: rad_to_ghz(u_at),
        passed,
    };
    eprintln!(
        "verify: max |dt| {:.3e} at {:.9} GHz, max |dr| {:.3e} at {:.9} GHz, unitarity defect {:.3e} at {:.9} GHz",
        report.max_dt,
        report.max_dt_at_ghz,
        report.max_dr,
        report.max_dr_at_ghz,
        report.unitarity_defect,
        report.unitarity_at_ghz
    );
    output::emit(sink, std::slice::from_ref(&report), &report)?;

    if passed {
        return Ok(());
    }
    let (what, value, at, tol) = if max_dt > AMPLITUDE_TOLERANCE {
        ("|dt|", max_dt, report.max_dt_at_ghz, AMPLITUDE_TOLERANCE)
    } else if max_dr > AMPLITUDE_TOLERANCE {
        ("|dr|", max_dr, report.max_dr_at_ghz, AMPLITUDE_TOLERANCE)
    } else {
        ("unitarity defect", unitarity, report.unitarity_at_ghz, UNITARITY_TOLERANCE)
    };
    Err(CliError::Failure(format!(
        "verification failed: {what} = {value:.3e} exceeds {tol:e}, worst at {at:.9} GHz"
    )))
}
