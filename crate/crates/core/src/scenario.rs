//! Node placement, link geometry and the per-scenario link budget.
//!
//! The source and the relay/IRS sit on one line `d_sr` apart. The destination
//! moves along a parallel line `lateral_offset` away, having travelled `d1`
//! from the point opposite the source.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channel::{channel_gain, ChannelError, Gain, PathLossInput, Propagation, Violation};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeConfig {
    /// Antenna height above ground (m).
    pub height: f64,
    /// Antenna gain (dBi).
    pub antenna_gain: f64,
}

impl NodeConfig {
    pub const fn new(height: f64, antenna_gain: f64) -> Self {
        Self {
            height,
            antenna_gain,
        }
    }
}

fn default_lateral_offset() -> f64 {
    10.0
}

fn default_source() -> NodeConfig {
    NodeConfig::new(10.0, 8.0)
}

fn default_relay() -> NodeConfig {
    NodeConfig::new(10.0, 8.0)
}

fn default_destination() -> NodeConfig {
    NodeConfig::new(1.5, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    /// Source to relay/IRS separation (m).
    pub d_sr: f64,
    /// Distance travelled by the destination (m).
    pub d1: f64,
    #[serde(default = "default_lateral_offset")]
    pub lateral_offset: f64,
    #[serde(default = "default_source")]
    pub source: NodeConfig,
    #[serde(default = "default_relay")]
    pub relay: NodeConfig,
    #[serde(default = "default_destination")]
    pub destination: NodeConfig,
}

impl Default for Scenario {
    fn default() -> Self {
        Self::new(80.0, 0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error("invalid radio configuration: {0}")]
    InvalidRadio(String),
    #[error("{link} link: {source}")]
    Channel {
        link: LinkId,
        #[source]
        source: ChannelError,
    },
}

impl Scenario {
    /// Default heights, gains and a 10 m lateral offset.
    pub fn new(d_sr: f64, d1: f64) -> Self {
        Self {
            d_sr,
            d1,
            lateral_offset: default_lateral_offset(),
            source: default_source(),
            relay: default_relay(),
            destination: default_destination(),
        }
    }

    pub fn with_d1(self, d1: f64) -> Self {
        Self { d1, ..self }
    }

    pub fn with_d_sr(self, d_sr: f64) -> Self {
        Self { d_sr, ..self }
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        let bad = |msg: String| Err(ScenarioError::InvalidScenario(msg));
        if !(self.d_sr > 0.0 && self.d_sr.is_finite()) {
            return bad(format!("d_sr must be positive, got {}", self.d_sr));
        }
        if !(self.d1 >= 0.0 && self.d1.is_finite()) {
            return bad(format!("d1 must be non-negative, got {}", self.d1));
        }
        if !(self.lateral_offset >= 0.0 && self.lateral_offset.is_finite()) {
            return bad(format!(
                "lateral_offset must be non-negative, got {}",
                self.lateral_offset
            ));
        }
        for (name, node) in [
            ("source", self.source),
            ("relay", self.relay),
            ("destination", self.destination),
        ] {
            if !(node.height > 0.0 && node.height.is_finite()) {
                return bad(format!(
                    "{name} height must be positive, got {}",
                    node.height
                ));
            }
            if !node.antenna_gain.is_finite() {
                return bad(format!("{name} antenna gain must be finite"));
            }
        }
        Ok(())
    }
}

fn default_bandwidth() -> f64 {
    10e6
}

fn default_noise_figure() -> f64 {
    10.0
}

fn default_rate() -> f64 {
    6.0
}

fn default_alpha() -> f64 {
    1.0
}

fn default_fc() -> f64 {
    3.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadioConfig {
    /// Carrier frequency (GHz).
    #[serde(default = "default_fc")]
    pub f_c: f64,
    /// Bandwidth (Hz).
    #[serde(default = "default_bandwidth")]
    pub bandwidth: f64,
    /// Receiver noise figure (dB).
    #[serde(default = "default_noise_figure")]
    pub noise_figure: f64,
    /// Overrides the thermal-noise computation when set (dBm).
    #[serde(default)]
    pub noise_power: Option<f64>,
    /// Target rate (bits/sec/Hz).
    #[serde(default = "default_rate")]
    pub target_rate: f64,
    /// IRS amplitude reflection coefficient.
    #[serde(default = "default_alpha")]
    pub alpha: f64,
}

impl Default for RadioConfig {
    fn default() -> Self {
        Self {
            f_c: default_fc(),
            bandwidth: default_bandwidth(),
            noise_figure: default_noise_figure(),
            noise_power: None,
            target_rate: default_rate(),
            alpha: default_alpha(),
        }
    }
}

impl RadioConfig {
    pub fn with_fc(self, f_c: f64) -> Self {
        Self { f_c, ..self }
    }

    pub fn with_rate(self, target_rate: f64) -> Self {
        Self {
            target_rate,
            ..self
        }
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        let bad = |msg: String| Err(ScenarioError::InvalidRadio(msg));
        if !(0.5..=100.0).contains(&self.f_c) {
            return bad(format!("f_c must lie in [0.5, 100] GHz, got {}", self.f_c));
        }
        if !(self.bandwidth > 0.0 && self.bandwidth.is_finite()) {
            return bad(format!(
                "bandwidth must be positive, got {}",
                self.bandwidth
            ));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return bad(format!("alpha must lie in (0, 1], got {}", self.alpha));
        }
        if !(self.target_rate > 0.0 && self.target_rate.is_finite()) {
            return bad(format!(
                "target rate must be positive, got {}",
                self.target_rate
            ));
        }
        if !self.noise_figure.is_finite() || self.noise_power.is_some_and(|p| !p.is_finite()) {
            return bad("noise parameters must be finite".into());
        }
        Ok(())
    }

    /// Noise power at the destination (dBm).
    pub fn noise_power_dbm(&self) -> f64 {
        self.noise_power
            .unwrap_or_else(|| -174.0 + 10.0 * self.bandwidth.log10() + self.noise_figure)
    }

    /// Noise power at the destination (W).
    pub fn noise_power_w(&self) -> f64 {
        dbm_to_watts(self.noise_power_dbm())
    }
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

pub fn watts_to_dbm(w: f64) -> f64 {
    10.0 * w.log10() + 30.0
}

/// Identifies one of the three links of a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkId {
    SourceRelay,
    RelayDestination,
    SourceDestination,
}

impl LinkId {
    pub const ALL: [LinkId; 3] = [
        LinkId::SourceRelay,
        LinkId::RelayDestination,
        LinkId::SourceDestination,
    ];

    /// Propagation condition assumed for the link.
    pub fn propagation(self) -> Propagation {
        match self {
            LinkId::SourceDestination => Propagation::Nlos,
            _ => Propagation::Los,
        }
    }

    pub fn short_name(self) -> &'static str {
        match self {
            LinkId::SourceRelay => "sr",
            LinkId::RelayDestination => "rd",
            LinkId::SourceDestination => "sd",
        }
    }
}

impl fmt::Display for LinkId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LinkId::SourceRelay => "source-relay",
            LinkId::RelayDestination => "relay-destination",
            LinkId::SourceDestination => "source-destination",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkGeometry {
    pub d_2d: f64,
    pub d_3d: f64,
}

impl LinkGeometry {
    fn new(dx: f64, dy: f64, dh: f64) -> Self {
        let d_2d = dx.hypot(dy);
        Self {
            d_2d,
            d_3d: d_2d.hypot(dh),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkDistances {
    pub sr: LinkGeometry,
    pub rd: LinkGeometry,
    pub sd: LinkGeometry,
}

impl LinkDistances {
    pub fn get(&self, link: LinkId) -> LinkGeometry {
        match link {
            LinkId::SourceRelay => self.sr,
            LinkId::RelayDestination => self.rd,
            LinkId::SourceDestination => self.sd,
        }
    }
}

pub fn link_distances(s: &Scenario) -> LinkDistances {
    LinkDistances {
        sr: LinkGeometry::new(s.d_sr, 0.0, s.source.height - s.relay.height),
        rd: LinkGeometry::new(
            s.d1 - s.d_sr,
            s.lateral_offset,
            s.relay.height - s.destination.height,
        ),
        sd: LinkGeometry::new(
            s.d1,
            s.lateral_offset,
            s.source.height - s.destination.height,
        ),
    }
}

/// Linear channel gains of one scenario instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkBudget {
    pub beta_sr: Gain,
    pub beta_rd: Gain,
    pub beta_sd: Gain,
    pub beta_irs: Gain,
}

impl LinkBudget {
    /// Builds a budget with the composite IRS gain `beta_sr * beta_rd`.
    pub fn new(beta_sr: Gain, beta_rd: Gain, beta_sd: Gain) -> Result<Self, ChannelError> {
        Ok(Self {
            beta_sr,
            beta_rd,
            beta_sd,
            beta_irs: Gain::new(beta_sr.linear() * beta_rd.linear())?,
        })
    }

    pub fn get(&self, link: LinkId) -> Gain {
        match link {
            LinkId::SourceRelay => self.beta_sr,
            LinkId::RelayDestination => self.beta_rd,
            LinkId::SourceDestination => self.beta_sd,
        }
    }
}

/// Everything computed for one link.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkReport {
    pub link: LinkId,
    pub propagation: Propagation,
    pub geometry: LinkGeometry,
    pub input: PathLossInput,
    pub path_loss_db: f64,
    pub antenna_gain_dbi: f64,
    pub gain: Gain,
    pub violations: Vec<Violation>,
}

/// A link budget evaluated regardless of validity, with every violation found.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluatedBudget {
    pub budget: LinkBudget,
    pub links: [LinkReport; 3],
}

impl EvaluatedBudget {
    pub fn is_valid(&self) -> bool {
        self.links.iter().all(|l| l.violations.is_empty())
    }

    pub fn first_violation(&self) -> Option<(LinkId, Violation)> {
        self.links
            .iter()
            .find_map(|l| l.violations.first().map(|v| (l.link, *v)))
    }

    pub fn link_valid(&self, link: LinkId) -> bool {
        self.links
            .iter()
            .find(|l| l.link == link)
            .is_some_and(|l| l.violations.is_empty())
    }
}

fn evaluate_link(
    s: &Scenario,
    r: &RadioConfig,
    distances: &LinkDistances,
    link: LinkId,
) -> Result<LinkReport, ScenarioError> {
    let (tx, rx) = match link {
        LinkId::SourceRelay => (s.source, s.relay),
        LinkId::RelayDestination => (s.relay, s.destination),
        LinkId::SourceDestination => (s.source, s.destination),
    };
    let geometry = distances.get(link);
    // The receiving node plays the user terminal.
    let input = PathLossInput::new(geometry.d_2d, geometry.d_3d, r.f_c, rx.height);
    let propagation = link.propagation();
    let path_loss_db = propagation.path_loss_unchecked(&input);
    let antenna_gain_dbi = tx.antenna_gain + rx.antenna_gain;
    let gain = channel_gain(path_loss_db, tx.antenna_gain, rx.antenna_gain)
        .map_err(|source| ScenarioError::Channel { link, source })?;
    Ok(LinkReport {
        link,
        propagation,
        geometry,
        input,
        path_loss_db,
        antenna_gain_dbi,
        gain,
        violations: propagation.violations(&input),
    })
}

/// Evaluates all three links without rejecting out-of-envelope geometry.
///
/// Fails only when the formulas themselves break down (coincident nodes).
pub fn evaluate_budget(s: &Scenario, r: &RadioConfig) -> Result<EvaluatedBudget, ScenarioError> {
    s.validate()?;
    r.validate()?;
    let distances = link_distances(s);
    let [sr, rd, sd] = LinkId::ALL.map(|link| evaluate_link(s, r, &distances, link));
    let links = [sr?, rd?, sd?];
    let budget =
        LinkBudget::new(links[0].gain, links[1].gain, links[2].gain).map_err(|source| {
            ScenarioError::Channel {
                link: LinkId::SourceRelay,
                source,
            }
        })?;
    Ok(EvaluatedBudget { budget, links })
}

/// Link budget with every link held to its channel-model validity envelope.
pub fn link_budget(s: &Scenario, r: &RadioConfig) -> Result<LinkBudget, ScenarioError> {
    let evaluated = evaluate_budget(s, r)?;
    match evaluated.first_violation() {
        Some((link, v)) => Err(ScenarioError::Channel {
            link,
            source: ChannelError::Validity(v),
        }),
        None => Ok(evaluated.budget),
    }
}
