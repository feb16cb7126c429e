use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use superatom::analysis::fit_single_qubit;
use superatom::units::{ghz_to_rad, rad_to_ghz, rad_to_mhz};
use superatom::Complex64;

use crate::error::CliError;
use crate::spectrum::SpectrumDocument;
use crate::{output, Sink};

#[derive(Deserialize)]
struct Sample {
    omega_p_ghz: f64,
    re_t: f64,
    im_t: f64,
}

#[derive(Debug, Serialize)]
struct FitRow {
    gamma_wg_mhz: f64,
    gamma_nr_mhz: f64,
    total_linewidth_mhz: f64,
    omega_center_ghz: f64,
    beta: f64,
    residual: f64,
}

fn read_samples(path: &Path) -> Result<(Vec<f64>, Vec<Complex64>), CliError> {
    let bad = |m: String| CliError::Config(format!("{}: {m}", path.display()));
    let text = fs::read_to_string(path).map_err(|e| bad(format!("cannot read: {e}")))?;
    let samples: Vec<(f64, Complex64)> = if path.extension().is_some_and(|e| e == "json") {
        let doc: SpectrumDocument = serde_json::from_str(&text)
            .map_err(|e| bad(format!("line {} column {}: {e}", e.line(), e.column())))?;
        doc.points
            .iter()
            .map(|p| (p.omega_p_ghz, Complex64::new(p.re_t, p.im_t)))
            .collect()
    } else {
        csv::Reader::from_reader(text.as_bytes())
            .deserialize::<Sample>()
            .map(|s| s.map(|s| (s.omega_p_ghz, Complex64::new(s.re_t, s.im_t))))
            .collect::<Result<_, _>>()
            .map_err(|e| bad(format!("csv: {e}")))?
    };
    Ok(samples.into_iter().map(|(g, t)| (ghz_to_rad(g), t)).unzip())
}

pub fn run(path: &Path, sink: &Sink) -> Result<(), CliError> {
    let (grid, t) = read_samples(path)?;
    let fit = fit_single_qubit(&grid, &t).map_err(|e| CliError::from(e).in_file(path))?;
    let row = FitRow {
        gamma_wg_mhz: rad_to_mhz(fit.gamma_wg),
        gamma_nr_mhz: rad_to_mhz(fit.gamma_nr),
        total_linewidth_mhz: rad_to_mhz(fit.total_linewidth()),
        omega_center_ghz: rad_to_ghz(fit.omega_center),
        beta: fit.gamma_wg / fit.total_linewidth(),
        residual: fit.residual,
    };
    output::emit(sink, std::slice::from_ref(&row), &row)
}
