//! Configuration file schema and the defaults < file < flags merge.
//!
//! ```json
//! {
//!   "scenario": { "d_sr": 80, "d1": 0, "lateral_offset": 10,
//!                 "source": { "height": 10, "antenna_gain": 8 },
//!                 "relay": { "height": 10, "antenna_gain": 8 },
//!                 "destination": { "height": 1.5, "antenna_gain": 0 } },
//!   "radio": { "f_c": 3, "bandwidth": 1e7, "noise_figure": 10,
//!              "noise_power": -94, "target_rate": 6, "alpha": 1 },
//!   "experiment": { "element_counts": [25, 50, 80, 150],
//!                   "d1_grid": { "start": 0, "stop": 160, "step": 0.5 },
//!                   "dsr_grid": { "start": 10, "stop": 80, "step": 1 },
//!                   "ratios": [0.5, 0.75, 1.25, 1.5], "target": "both",
//!                   "cap": 1000000, "n_elements": 16,
//!                   "fc_grid": [2, 3, 100], "rates": [5, 6, 7], "d1_step": 0.5 }
//! }
//! ```
//!
//! Every field is optional. Unknown fields are rejected.

use std::fs;
use std::path::Path;

use serde::Deserialize;

use irs5g_core::experiments::{Grid, MaxDsrSpec, NminSpec, SweepSpec};
use irs5g_core::{NodeConfig, RadioConfig, Scenario, Target};

use crate::args::{MaxDsrArgs, NminArgs, Overrides, SweepD1Args, TargetArg};
use crate::CliError;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub scenario: ScenarioSection,
    #[serde(default)]
    pub radio: RadioSection,
    #[serde(default)]
    pub experiment: ExperimentSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSection {
    pub d_sr: Option<f64>,
    pub d1: Option<f64>,
    pub lateral_offset: Option<f64>,
    pub source: Option<NodeConfig>,
    pub relay: Option<NodeConfig>,
    pub destination: Option<NodeConfig>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadioSection {
    pub f_c: Option<f64>,
    pub bandwidth: Option<f64>,
    pub noise_figure: Option<f64>,
    pub noise_power: Option<f64>,
    pub target_rate: Option<f64>,
    pub alpha: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    pub element_counts: Option<Vec<u64>>,
    pub d1_grid: Option<Grid>,
    pub dsr_grid: Option<Grid>,
    pub ratios: Option<Vec<f64>>,
    pub target: Option<Target>,
    pub cap: Option<u64>,
    pub n_elements: Option<u64>,
    pub fc_grid: Option<Vec<f64>>,
    pub rates: Option<Vec<f64>>,
    pub d1_step: Option<f64>,
}

impl ConfigFile {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("malformed config {}: {e}", path.display())))
    }
}

fn single(name: &str, values: &[f64]) -> Result<Option<f64>, CliError> {
    match values {
        [] => Ok(None),
        [v] => Ok(Some(*v)),
        _ => Err(CliError::Usage(format!(
            "--{name} takes a single value for this command"
        ))),
    }
}

fn grid(
    base: Grid,
    file: Option<Grid>,
    start: Option<f64>,
    stop: Option<f64>,
    step: Option<f64>,
) -> Grid {
    let g = file.unwrap_or(base);
    Grid::new(
        start.unwrap_or(g.start),
        stop.unwrap_or(g.stop),
        step.unwrap_or(g.step),
    )
}

impl ConfigFile {
    /// Scenario with file values and flag overrides applied.
    pub fn scenario(&self, base: Scenario, o: &Overrides) -> Scenario {
        let f = &self.scenario;
        Scenario {
            d_sr: o.dsr.or(f.d_sr).unwrap_or(base.d_sr),
            d1: o.d1.or(f.d1).unwrap_or(base.d1),
            lateral_offset: o
                .lateral
                .or(f.lateral_offset)
                .unwrap_or(base.lateral_offset),
            source: f.source.unwrap_or(base.source),
            relay: f.relay.unwrap_or(base.relay),
            destination: f.destination.unwrap_or(base.destination),
        }
    }

    /// Radio configuration; `--fc` and `--rate` must be single-valued here.
    pub fn radio(&self, o: &Overrides) -> Result<RadioConfig, CliError> {
        let f = &self.radio;
        let base = RadioConfig::default();
        Ok(RadioConfig {
            f_c: single("fc", &o.fc)?.or(f.f_c).unwrap_or(base.f_c),
            bandwidth: o.bandwidth.or(f.bandwidth).unwrap_or(base.bandwidth),
            noise_figure: o
                .noise_figure
                .or(f.noise_figure)
                .unwrap_or(base.noise_figure),
            noise_power: o.noise_dbm.or(f.noise_power),
            target_rate: single("rate", &o.rate)?
                .or(f.target_rate)
                .unwrap_or(base.target_rate),
            alpha: o.alpha.or(f.alpha).unwrap_or(base.alpha),
        })
    }

    pub fn element_counts(&self, flags: &[u64], default: &[u64]) -> Vec<u64> {
        if !flags.is_empty() {
            flags.to_vec()
        } else {
            self.experiment
                .element_counts
                .clone()
                .unwrap_or_else(|| default.to_vec())
        }
    }

    pub fn sweep_d1(&self, a: &SweepD1Args) -> Result<SweepSpec, CliError> {
        let base = SweepSpec::d1_default();
        Ok(SweepSpec {
            grid: grid(
                base.grid,
                self.experiment.d1_grid,
                a.d1_start,
                a.d1_stop,
                a.d1_step,
            ),
            scenario: self.scenario(base.scenario, &a.overrides),
            radio: self.radio(&a.overrides)?,
            element_counts: self.element_counts(&a.n, &base.element_counts),
            ..base
        })
    }

    pub fn nmin(&self, a: &NminArgs) -> Result<NminSpec, CliError> {
        let base = NminSpec::default();
        let target = match a.target {
            Some(TargetArg::Df) => Target::Df,
            Some(TargetArg::Siso) => Target::Siso,
            Some(TargetArg::Both) => Target::Both,
            None => self.experiment.target.unwrap_or(base.target),
        };
        Ok(NminSpec {
            scenario: self.scenario(base.scenario, &a.overrides),
            radio: self.radio(&a.overrides)?,
            dsr_grid: grid(
                base.dsr_grid,
                self.experiment.dsr_grid,
                a.dsr_start,
                a.dsr_stop,
                a.dsr_step,
            ),
            ratios: if a.ratios.is_empty() {
                self.experiment.ratios.clone().unwrap_or(base.ratios)
            } else {
                a.ratios.clone()
            },
            target,
            cap: a.cap.or(self.experiment.cap).unwrap_or(base.cap),
        })
    }

    pub fn max_dsr(&self, a: &MaxDsrArgs) -> Result<MaxDsrSpec, CliError> {
        let base = MaxDsrSpec::default();
        let o = &a.overrides;
        let radio_flags = Overrides {
            fc: Vec::new(),
            rate: Vec::new(),
            dsr: None,
            d1: None,
            lateral: o.lateral,
            bandwidth: o.bandwidth,
            noise_figure: o.noise_figure,
            noise_dbm: o.noise_dbm,
            alpha: o.alpha,
        };
        let pick = |flags: &[f64], file: &Option<Vec<f64>>, default: Vec<f64>| {
            if !flags.is_empty() {
                flags.to_vec()
            } else {
                file.clone().unwrap_or(default)
            }
        };
        if o.dsr.is_some() || o.d1.is_some() {
            return Err(CliError::Usage(
                "max-dsr searches over d_sr and d1; use --dsr-start/--dsr-stop/--dsr-step and --d1-step".into(),
            ));
        }
        Ok(MaxDsrSpec {
            scenario: self.scenario(base.scenario, &radio_flags),
            radio: self.radio(&radio_flags)?,
            n_elements: a
                .n
                .or(self.experiment.n_elements)
                .unwrap_or(base.n_elements),
            fc_grid: pick(&o.fc, &self.experiment.fc_grid, base.fc_grid),
            rates: pick(&o.rate, &self.experiment.rates, base.rates),
            dsr_grid: grid(
                base.dsr_grid,
                self.experiment.dsr_grid,
                a.dsr_start,
                a.dsr_stop,
                a.dsr_step,
            ),
            d1_step: a
                .d1_step
                .or(self.experiment.d1_step)
                .unwrap_or(base.d1_step),
        })
    }
}
