use serde::{Deserialize, Serialize};
use superatom::units::rad_to_ghz;
use superatom::{scan, ArrayConfig, Method, PhaseConvention, ScatteringPoint};

use crate::error::CliError;
use crate::input::{GridArgs, ModelArgs};
use crate::{output, Sink};

/// One probe frequency; also the CSV schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub omega_p_ghz: f64,
    pub re_t: f64,
    pub im_t: f64,
    pub abs_t: f64,
    pub re_r: f64,
    pub im_r: f64,
    pub abs_r: f64,
    pub t2_plus_r2: f64,
}

impl From<&ScatteringPoint> for SpectrumRow {
    fn from(p: &ScatteringPoint) -> Self {
        SpectrumRow {
            omega_p_ghz: rad_to_ghz(p.omega_p),
            re_t: p.t.re,
            im_t: p.t.im,
            abs_t: p.t.norm(),
            re_r: p.r.re,
            im_r: p.r.im,
            abs_r: p.r.norm(),
            t2_plus_r2: p.energy(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SpectrumDocument {
    pub method: Method,
    pub convention: PhaseConvention,
    pub model: ArrayConfig,
    pub points: Vec<SpectrumRow>,
}

pub fn run(
    model: &ModelArgs,
    grid: &GridArgs,
    method: Method,
    convention: PhaseConvention,
    sink: &Sink,
) -> Result<(), CliError> {
    let model = model.load()?;
    let grid = grid.build(&model)?;
    let points = scan(&model, &grid, method, convention)?;
    let rows: Vec<SpectrumRow> = points.iter().map(SpectrumRow::from).collect();
    let document = SpectrumDocument {
        method,
        convention,
        model: ArrayConfig::from_model(&model),
        points: rows,
    };
    output::emit(sink, &document.points, &document)
}
