use super::{DeviceSpec, ProbeSpec, Rates, ScenarioSpec, SweepSpec};
use crate::error::{Error, Result};
use crate::model::DevicePreset;
use crate::scattering::{Method, PhaseConvention};
use crate::units::{ghz_to_rad, rad_to_mhz};

/// Names accepted by [`figure`].
pub const FIGURES: [&str; 6] = ["fig2", "fig3", "fig3_gradient", "fig4", "fig5", "smfig_s4"];

const OMEGA0_GHZ: f64 = 6.0;

/// Offsets `-3.5..=3.5` in unit steps for eight qubits.
pub fn bragg_gradient() -> Vec<f64> {
    (0..8).map(|i| i as f64 - 3.5).collect()
}

/// Offsets `-2.5..=3.5` in unit steps for the seven working qubits of B2.
pub fn antibragg_gradient() -> Vec<f64> {
    (0..7).map(|i| i as f64 - 2.5).collect()
}

fn mean_gamma_mhz(device: &DeviceSpec) -> Result<f64> {
    Ok(rad_to_mhz(device.build(ghz_to_rad(OMEGA0_GHZ))?.mean_gamma_wg()))
}

/// Default scenario for a named figure, with grids scaled to the device's
/// mean waveguide linewidth.
pub fn figure(name: &str) -> Result<ScenarioSpec> {
    let bragg_ideal = DeviceSpec::preset(DevicePreset::A, Rates::Ideal);
    let spec = |device: DeviceSpec, sweep: SweepSpec, span: f64, points: usize| -> Result<ScenarioSpec> {
        let gamma = mean_gamma_mhz(&device)?;
        Ok(ScenarioSpec {
            id: name.to_string(),
            device,
            omega0_ghz: OMEGA0_GHZ,
            sweep,
            probe: ProbeSpec {
                span_mhz: span * gamma,
                points,
            },
            method: Method::Resolvent,
            convention: PhaseConvention::Markov,
        })
    };
    let gamma_a = mean_gamma_mhz(&bragg_ideal)?;
    match name {
        "fig2" => spec(bragg_ideal, SweepSpec::SuccessiveResonance { n_max: 8 }, 160.0, 8001),
        "fig3" => spec(
            bragg_ideal,
            SweepSpec::DetuneOneQubit {
                qubit: 7,
                detuning_mhz: [-3.0 * gamma_a, 3.0 * gamma_a],
                steps: 61,
            },
            10.0,
            4001,
        ),
        "fig3_gradient" => spec(
            bragg_ideal,
            SweepSpec::GradientDetuning {
                offsets: bragg_gradient(),
                delta_mhz: [0.0, gamma_a],
                steps: 9,
            },
            10.0,
            4001,
        ),
        "fig4" => {
            let device = DeviceSpec::preset(DevicePreset::B2, Rates::Lossless);
            let gamma = mean_gamma_mhz(&device)?;
            spec(
                device,
                SweepSpec::GradientDetuning {
                    offsets: antibragg_gradient(),
                    delta_mhz: [0.0, gamma],
                    steps: 9,
                },
                8.0,
                8001,
            )
        }
        "fig5" => spec(
            bragg_ideal,
            SweepSpec::EffectiveSpacing {
                omega0_ghz: vec![5.7, 5.8, 5.9, 6.0, 6.1, 6.2, 6.3],
            },
            10.0,
            4001,
        ),
        "smfig_s4" => spec(
            DeviceSpec::preset(DevicePreset::A, Rates::Lossless),
            SweepSpec::DetuneOneQubit {
                qubit: 7,
                detuning_mhz: [-3.0 * gamma_a, 3.0 * gamma_a],
                steps: 121,
            },
            10.0,
            2001,
        ),
        other => Err(Error::config(
            "scenario",
            format!("unknown scenario `{other}`, expected one of {}", FIGURES.join(", ")),
        )),
    }
}
