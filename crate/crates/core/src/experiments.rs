//! Parameter sweeps: required power along a grid, the IRS break-even element
//! count against relay placement, and the farthest IRS placement that still
//! beats SISO and DF for a fixed element count.
//!
//! Grid points are independent and evaluated through [`map_ordered`], so
//! results come back in grid order regardless of [`Execution`].

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::{map_ordered, Execution};
use crate::power::{n_min_oracle, IrsConfig, PowerError, Target, DEFAULT_N_CAP};
use crate::power::{p_df, p_irs, p_siso};
use crate::scenario::{
    evaluate_budget, watts_to_dbm, LinkId, RadioConfig, Scenario, ScenarioError,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExperimentError {
    #[error("invalid experiment: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Power(#[from] PowerError),
}

/// Evenly spaced values from `start` to `stop`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Grid {
    pub const fn new(start: f64, stop: f64, step: f64) -> Self {
        Self { start, stop, step }
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(ExperimentError::InvalidSpec(format!(
                "grid step must be positive, got {}",
                self.step
            )));
        }
        if !(self.start <= self.stop && self.start.is_finite() && self.stop.is_finite()) {
            return Err(ExperimentError::InvalidSpec(format!(
                "grid start {} must not exceed stop {}",
                self.start, self.stop
            )));
        }
        Ok(())
    }

    /// Grid values; `stop` is always the last value, appended if the step
    /// does not land on it.
    pub fn points(&self) -> Vec<f64> {
        let span = self.stop - self.start;
        let n = (span / self.step + 1e-9).floor() as usize;
        let mut out: Vec<f64> = (0..=n).map(|i| self.start + i as f64 * self.step).collect();
        let last = out[n];
        if self.stop - last > 1e-9 * self.step {
            out.push(self.stop);
        } else {
            out[n] = self.stop;
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    D1,
    DSr,
    FC,
}

impl SweepVariable {
    fn apply(
        self,
        value: f64,
        scenario: &Scenario,
        radio: &RadioConfig,
    ) -> (Scenario, RadioConfig) {
        match self {
            SweepVariable::D1 => (scenario.with_d1(value), *radio),
            SweepVariable::DSr => (scenario.with_d_sr(value), *radio),
            SweepVariable::FC => (*scenario, radio.with_fc(value)),
        }
    }
}

/// A one-dimensional power sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub grid: Grid,
    pub scenario: Scenario,
    pub radio: RadioConfig,
    pub element_counts: Vec<u64>,
}

impl SweepSpec {
    /// Destination travelling 0..160 m past an IRS/relay 80 m from the source.
    pub fn d1_default() -> Self {
        Self {
            variable: SweepVariable::D1,
            grid: Grid::new(0.0, 160.0, 0.5),
            scenario: Scenario::new(80.0, 0.0),
            radio: RadioConfig::default(),
            element_counts: vec![25, 50, 80, 150],
        }
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        self.grid.validate()?;
        let mut counts = self.element_counts.clone();
        counts.sort_unstable();
        counts.dedup();
        if counts.len() != self.element_counts.len() || counts.first() == Some(&0) {
            return Err(ExperimentError::InvalidSpec(
                "element counts must be distinct positive integers".into(),
            ));
        }
        Ok(())
    }
}

/// Per-link channel-model validity of a row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkFlags {
    pub sr: bool,
    pub rd: bool,
    pub sd: bool,
}

impl LinkFlags {
    pub const INVALID: LinkFlags = LinkFlags {
        sr: false,
        rd: false,
        sd: false,
    };

    pub fn all_valid(&self) -> bool {
        self.sr && self.rd && self.sd
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub value: f64,
    /// Powers in watts; NaN when the geometry could not be evaluated at all.
    pub p_siso: f64,
    pub p_df: f64,
    /// Aligned with [`SweepSpec::element_counts`].
    pub p_irs: Vec<f64>,
    pub valid: LinkFlags,
}

impl SweepRow {
    pub fn p_siso_dbm(&self) -> f64 {
        watts_to_dbm(self.p_siso)
    }

    pub fn p_df_dbm(&self) -> f64 {
        watts_to_dbm(self.p_df)
    }

    pub fn p_irs_dbm(&self) -> Vec<f64> {
        self.p_irs.iter().map(|&w| watts_to_dbm(w)).collect()
    }
}

fn sweep_point(spec: &SweepSpec, value: f64) -> Result<SweepRow, ExperimentError> {
    let (scenario, radio) = spec.variable.apply(value, &spec.scenario, &spec.radio);
    let evaluated = match evaluate_budget(&scenario, &radio) {
        Ok(e) => e,
        Err(ScenarioError::Channel { .. }) | Err(ScenarioError::InvalidRadio(_)) => {
            return Ok(SweepRow {
                value,
                p_siso: f64::NAN,
                p_df: f64::NAN,
                p_irs: vec![f64::NAN; spec.element_counts.len()],
                valid: LinkFlags::INVALID,
            })
        }
        Err(e) => return Err(e.into()),
    };
    let b = &evaluated.budget;
    let (rate, noise) = (radio.target_rate, radio.noise_power_w());
    let p_irs = spec
        .element_counts
        .iter()
        .map(|&n| {
            p_irs(
                rate,
                noise,
                b.beta_sd,
                b.beta_irs,
                IrsConfig::new(n, radio.alpha)?,
            )
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SweepRow {
        value,
        p_siso: p_siso(rate, noise, b.beta_sd)?,
        p_df: p_df(rate, noise, b.beta_sd, b.beta_sr, b.beta_rd)?,
        p_irs,
        valid: LinkFlags {
            sr: evaluated.link_valid(LinkId::SourceRelay),
            rd: evaluated.link_valid(LinkId::RelayDestination),
            sd: evaluated.link_valid(LinkId::SourceDestination),
        },
    })
}

/// Required powers at every grid point. Out-of-envelope points are flagged,
/// not rejected.
pub fn sweep(spec: &SweepSpec, exec: Execution) -> Result<Vec<SweepRow>, ExperimentError> {
    spec.validate()?;
    spec.radio.validate()?;
    map_ordered(exec, &spec.grid.points(), |&v| sweep_point(spec, v))
        .into_iter()
        .collect()
}

/// Sweep over the destination position.
pub fn sweep_d1(spec: &SweepSpec, exec: Execution) -> Result<Vec<SweepRow>, ExperimentError> {
    if spec.variable != SweepVariable::D1 {
        return Err(ExperimentError::InvalidSpec(format!(
            "expected a d1 sweep, got {:?}",
            spec.variable
        )));
    }
    sweep(spec, exec)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NminOutcome {
    Found(u64),
    /// The search cap was reached.
    Unbounded,
    /// Some link is outside its channel-model envelope.
    Invalid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NminSpec {
    pub scenario: Scenario,
    pub radio: RadioConfig,
    pub dsr_grid: Grid,
    /// Destination position as a fraction of `d_sr`.
    pub ratios: Vec<f64>,
    pub target: Target,
    pub cap: u64,
}

impl Default for NminSpec {
    fn default() -> Self {
        Self {
            scenario: Scenario::default(),
            radio: RadioConfig::default(),
            dsr_grid: Grid::new(10.0, 80.0, 1.0),
            ratios: vec![0.5, 0.75, 1.25, 1.5],
            target: Target::Both,
            cap: DEFAULT_N_CAP,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NminRow {
    pub d_sr: f64,
    pub ratio: f64,
    pub n_min: NminOutcome,
}

fn nmin_point(spec: &NminSpec, d_sr: f64, ratio: f64) -> Result<NminRow, ExperimentError> {
    let scenario = spec.scenario.with_d_sr(d_sr).with_d1(ratio * d_sr);
    let evaluated = match evaluate_budget(&scenario, &spec.radio) {
        Ok(e) if e.is_valid() => e,
        Ok(_) | Err(ScenarioError::Channel { .. }) => {
            return Ok(NminRow {
                d_sr,
                ratio,
                n_min: NminOutcome::Invalid,
            })
        }
        Err(e) => return Err(e.into()),
    };
    let n_min = {
        let r = &spec.radio;
        match n_min_oracle(
            r.target_rate,
            r.noise_power_w(),
            &evaluated.budget,
            r.alpha,
            spec.target,
            spec.cap,
        ) {
            Ok(n) => NminOutcome::Found(n),
            Err(PowerError::Unbounded { .. }) => NminOutcome::Unbounded,
            Err(e) => return Err(e.into()),
        }
    };
    Ok(NminRow { d_sr, ratio, n_min })
}

/// IRS break-even element count over relay placements and destination ratios.
///
/// Rows are ordered by `d_sr`, then by ratio in the order given.
pub fn nmin_vs_dsr(spec: &NminSpec, exec: Execution) -> Result<Vec<NminRow>, ExperimentError> {
    spec.dsr_grid.validate()?;
    spec.radio.validate()?;
    if spec.ratios.is_empty() || spec.ratios.iter().any(|r| !(*r >= 0.0 && r.is_finite())) {
        return Err(ExperimentError::InvalidSpec(
            "ratios must be a non-empty list of non-negative numbers".into(),
        ));
    }
    let points: Vec<(f64, f64)> = spec
        .dsr_grid
        .points()
        .into_iter()
        .flat_map(|d| spec.ratios.iter().map(move |&r| (d, r)))
        .collect();
    map_ordered(exec, &points, |&(d, r)| nmin_point(spec, d, r))
        .into_iter()
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxDsrSpec {
    pub scenario: Scenario,
    pub radio: RadioConfig,
    pub n_elements: u64,
    /// Carrier frequencies (GHz).
    pub fc_grid: Vec<f64>,
    /// Target rates (bits/sec/Hz).
    pub rates: Vec<f64>,
    pub dsr_grid: Grid,
    pub d1_step: f64,
}

pub const DEFAULT_FC_GRID: [f64; 17] = [
    2.0, 3.0, 4.0, 6.0, 8.0, 10.0, 15.0, 20.0, 24.0, 30.0, 40.0, 50.0, 60.0, 70.0, 80.0, 90.0,
    100.0,
];

impl Default for MaxDsrSpec {
    fn default() -> Self {
        Self {
            scenario: Scenario::default(),
            radio: RadioConfig::default(),
            n_elements: 16,
            fc_grid: DEFAULT_FC_GRID.to_vec(),
            rates: vec![5.0, 6.0, 7.0],
            dsr_grid: Grid::new(10.0, 200.0, 1.0),
            d1_step: 0.5,
        }
    }
}

impl MaxDsrSpec {
    pub fn validate(&self) -> Result<(), ExperimentError> {
        self.dsr_grid.validate()?;
        Grid::new(0.0, 1.0, self.d1_step).validate()?;
        if self.fc_grid.is_empty() || self.rates.is_empty() {
            return Err(ExperimentError::InvalidSpec(
                "frequency grid and rate list must be non-empty".into(),
            ));
        }
        for &f in &self.fc_grid {
            self.radio.with_fc(f).validate()?;
        }
        for &r in &self.rates {
            self.radio.with_rate(r).validate()?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaxDsrRow {
    pub f_c: f64,
    pub rate: f64,
    /// `None` when no grid value qualifies.
    pub max_d_sr: Option<f64>,
}

/// Whether an IRS at `d_sr` needs strictly less power than both SISO and DF
/// for every destination on the `d1` grid over `[d_sr / 2, d_sr]`, with all
/// links inside their channel-model envelopes.
pub fn irs_dominates(
    scenario: &Scenario,
    radio: &RadioConfig,
    n_elements: u64,
    d_sr: f64,
    d1_step: f64,
) -> Result<bool, ExperimentError> {
    let irs = IrsConfig::new(n_elements, radio.alpha)?;
    let (rate, noise) = (radio.target_rate, radio.noise_power_w());
    for d1 in Grid::new(d_sr / 2.0, d_sr, d1_step).points() {
        let evaluated = match evaluate_budget(&scenario.with_d_sr(d_sr).with_d1(d1), radio) {
            Ok(e) => e,
            Err(ScenarioError::Channel { .. }) => return Ok(false),
            Err(e) => return Err(e.into()),
        };
        if !evaluated.is_valid() {
            return Ok(false);
        }
        let b = &evaluated.budget;
        let incumbent = p_df(rate, noise, b.beta_sd, b.beta_sr, b.beta_rd)?
            .min(p_siso(rate, noise, b.beta_sd)?);
        if !(p_irs(rate, noise, b.beta_sd, b.beta_irs, irs)? < incumbent) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Largest `d_sr` on the search grid at which the IRS dominates, per carrier
/// frequency and rate. Rows are ordered by frequency, then rate.
pub fn max_dsr_search(
    spec: &MaxDsrSpec,
    exec: Execution,
) -> Result<Vec<MaxDsrRow>, ExperimentError> {
    spec.validate()?;
    let dsrs = spec.dsr_grid.points();
    let cases: Vec<(f64, f64)> = spec
        .fc_grid
        .iter()
        .flat_map(|&f| spec.rates.iter().map(move |&r| (f, r)))
        .collect();
    let tasks: Vec<(usize, f64)> = (0..cases.len())
        .flat_map(|c| dsrs.iter().map(move |&d| (c, d)))
        .collect();
    let verdicts = map_ordered(exec, &tasks, |&(c, d_sr)| {
        let (f_c, rate) = cases[c];
        let radio = spec.radio.with_fc(f_c).with_rate(rate);
        irs_dominates(&spec.scenario, &radio, spec.n_elements, d_sr, spec.d1_step)
    });

    let mut best: Vec<Option<f64>> = vec![None; cases.len()];
    for (&(c, d_sr), verdict) in tasks.iter().zip(verdicts) {
        if verdict? {
            best[c] = Some(best[c].map_or(d_sr, |b: f64| b.max(d_sr)));
        }
    }
    Ok(cases
        .into_iter()
        .zip(best)
        .map(|((f_c, rate), max_d_sr)| MaxDsrRow {
            f_c,
            rate,
            max_d_sr,
        })
        .collect())
}
