use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use superatom::scenarios::{DeviceSpec, Rates, ScenarioSpec};
use superatom::scattering::linspace;
use superatom::units::{ghz_to_rad, mhz_to_rad, rad_to_mhz};
use superatom::{ArrayConfig, ArrayModel, DevicePreset};

use crate::error::CliError;

/// Default probe span, in waveguide linewidths of the broadest qubit.
const DEFAULT_SPAN_LINEWIDTHS: f64 = 20.0;
const DEFAULT_PRESET_GHZ: f64 = 6.0;

#[derive(Args)]
pub struct ModelArgs {
    /// Array configuration (JSON)
    #[arg(long, value_name = "PATH", conflicts_with = "preset")]
    pub config: Option<PathBuf>,

    /// Measured device instead of a file: A, B1 or B2
    #[arg(long)]
    pub preset: Option<String>,

    #[arg(long, value_enum, default_value_t = RatesArg::Measured, requires = "preset")]
    pub rates: RatesArg,

    /// Put every qubit and the phase reference here (preset default 6.0)
    #[arg(long, value_name = "GHZ")]
    pub omega0_ghz: Option<f64>,

    /// Waveguide phase velocity in m/s
    #[arg(long)]
    pub velocity: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum RatesArg {
    Measured,
    Lossless,
    Ideal,
}

#[derive(Args)]
pub struct GridArgs {
    /// Centre of the probe window (default: the phase reference)
    #[arg(long, value_name = "GHZ")]
    pub center_ghz: Option<f64>,

    /// Full probe span (default: 20 waveguide linewidths)
    #[arg(long, value_name = "MHZ")]
    pub span_mhz: Option<f64>,

    #[arg(long, default_value_t = 1001)]
    pub points: usize,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: cannot read: {e}", path.display())))
}

pub fn read_scenario(path: &Path) -> Result<ScenarioSpec, CliError> {
    ScenarioSpec::from_json(&read(path)?).map_err(|e| CliError::from(e).in_file(path))
}

impl ModelArgs {
    pub fn load(&self) -> Result<ArrayModel, CliError> {
        let model = match (&self.config, &self.preset) {
            (Some(path), None) => {
                let model = ArrayConfig::from_json(&read(path)?)
                    .and_then(|c| c.to_model())
                    .map_err(|e| CliError::from(e).in_file(path))?;
                match self.omega0_ghz {
                    Some(ghz) => model.retuned(ghz_to_rad(positive("--omega0-ghz", ghz)?))?,
                    None => model,
                }
            }
            (None, Some(name)) => {
                let rates = match self.rates {
                    RatesArg::Measured => Rates::Measured,
                    RatesArg::Lossless => Rates::Lossless,
                    RatesArg::Ideal => Rates::Ideal,
                };
                let preset: DevicePreset = name.parse()?;
                let ghz = self.omega0_ghz.unwrap_or(DEFAULT_PRESET_GHZ);
                DeviceSpec::preset(preset, rates).build(ghz_to_rad(positive("--omega0-ghz", ghz)?))?
            }
            _ => return Err(CliError::Config("give exactly one of --config or --preset".into())),
        };
        match self.velocity {
            Some(v) => Ok(model.with_velocity(positive("--velocity", v)?)?),
            None => Ok(model),
        }
    }
}

impl GridArgs {
    /// Probe frequencies in rad/s.
    pub fn build(&self, model: &ArrayModel) -> Result<Vec<f64>, CliError> {
        let center = match self.center_ghz {
            Some(ghz) => ghz_to_rad(positive("--center-ghz", ghz)?),
            None => model.medium().omega_ref,
        };
        let span = match self.span_mhz {
            Some(mhz) => mhz_to_rad(positive("--span-mhz", mhz)?),
            None => DEFAULT_SPAN_LINEWIDTHS * model.max_gamma_wg(),
        };
        if self.points < 3 {
            return Err(CliError::Config("--points: need at least 3".into()));
        }
        if span / 2.0 >= center {
            return Err(CliError::Config(format!(
                "--span-mhz: {} MHz reaches below zero frequency",
                rad_to_mhz(span)
            )));
        }
        Ok(linspace(center - span / 2.0, center + span / 2.0, self.points))
    }
}

fn positive(flag: &str, x: f64) -> Result<f64, CliError> {
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(CliError::Config(format!("{flag}: must be positive and finite, got {x}")))
    }
}
