use serde::Serialize;
use superatom::units::{rad_to_ghz, rad_to_mhz};
use superatom::{build_h_eff, eigendecompose, ArrayConfig};

use crate::error::CliError;
use crate::input::ModelArgs;
use crate::{output, Sink};

#[derive(Debug, Serialize)]
struct ModeRow {
    mode: usize,
    omega_ghz: f64,
    /// From the phase reference.
    detuning_mhz: f64,
    /// `-2 Im(λ)`.
    decay_mhz: f64,
    near_degenerate: bool,
}

#[derive(Serialize)]
struct EigenDocument<'a> {
    model: ArrayConfig,
    modes: &'a [ModeRow],
}

/// Modes ordered by frequency; `mode` is the position in that order.
pub fn run(model: &ModelArgs, sink: &Sink) -> Result<(), CliError> {
    let model = model.load()?;
    let spectrum = eigendecompose(&build_h_eff(&model)?.matrix)?;
    let reference = model.medium().omega_ref;

    let mut order: Vec<usize> = (0..spectrum.len()).collect();
    order.sort_by(|&a, &b| {
        let (x, y) = (spectrum.eigenvalues[a], spectrum.eigenvalues[b]);
        x.re.total_cmp(&y.re).then(y.im.total_cmp(&x.im))
    });
    let rows: Vec<ModeRow> = order
        .iter()
        .enumerate()
        .map(|(mode, &n)| {
            let lambda = spectrum.eigenvalues[n];
            ModeRow {
                mode,
                omega_ghz: rad_to_ghz(lambda.re),
                detuning_mhz: rad_to_mhz(lambda.re - reference),
                decay_mhz: rad_to_mhz(-2.0 * lambda.im),
                near_degenerate: spectrum.near_degenerate[n],
            }
        })
        .collect();
    let document = EigenDocument {
        model: ArrayConfig::from_model(&model),
        modes: &rows,
    };
    output::emit(sink, &rows, &document)
}
