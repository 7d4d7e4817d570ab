//! 5G urban-microcell (UMi) path loss and channel gain.
//!
//! Only the pre-breakpoint LOS model and the NLOS model are provided, for a
//! base station mounted at [`H_BS`] = 10 m. Distances are in meters, carrier
//! frequencies in GHz and losses in dB, exactly as the model tables state
//! them; there is no unit auto-detection.
//!
//! Every model has a checked entry point that enforces the validity
//! envelope and an `_unchecked` twin that evaluates the formula anyway.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Base-station height the UMi breakpoint formula is written for (m).
pub const H_BS: f64 = 10.0;

/// Carrier frequency range covered by the models (GHz).
pub const FC_RANGE_GHZ: (f64, f64) = (0.5, 100.0);

/// User-terminal height range of the UMi scenario (m).
pub const H_UT_RANGE: (f64, f64) = (1.5, 22.5);

/// Minimum horizontal distance for either model (m).
pub const MIN_D_2D: f64 = 10.0;

/// Maximum horizontal distance for the NLOS model (m).
pub const MAX_D_2D_NLOS: f64 = 5000.0;

/// A quantity that a validity check can fail on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    CarrierFrequency,
    TerminalHeight,
    Distance2d,
    Distance3d,
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quantity::CarrierFrequency => "f_c [GHz]",
            Quantity::TerminalHeight => "h_UT [m]",
            Quantity::Distance2d => "d_2D [m]",
            Quantity::Distance3d => "d_3D [m]",
        })
    }
}

/// A value that fell outside a model's validity envelope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub quantity: Quantity,
    pub value: f64,
    pub min: f64,
    pub max: f64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} = {} outside [{}, {}]",
            self.quantity, self.value, self.min, self.max
        )
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChannelError {
    #[error("validity bound violated: {0}")]
    Validity(Violation),
    #[error("breakpoint distance undefined for h_UT = {0} m (needs h_UT > 1 m)")]
    DegenerateBreakpoint(f64),
    #[error("gain must be a finite positive linear value, got {0}")]
    NonPositiveGain(f64),
    #[error("path loss must be non-negative, got {0} dB")]
    NegativePathLoss(f64),
}

fn check_range(quantity: Quantity, value: f64, min: f64, max: f64) -> Option<Violation> {
    if (min..=max).contains(&value) {
        None
    } else {
        Some(Violation {
            quantity,
            value,
            min,
            max,
        })
    }
}

/// Geometry and carrier of one transmitter-receiver pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathLossInput {
    /// Horizontal distance (m).
    pub d_2d: f64,
    /// Three-dimensional distance (m).
    pub d_3d: f64,
    /// Carrier frequency (GHz).
    pub f_c: f64,
    /// User-terminal height (m).
    pub h_ut: f64,
}

impl PathLossInput {
    pub fn new(d_2d: f64, d_3d: f64, f_c: f64, h_ut: f64) -> Self {
        Self {
            d_2d,
            d_3d,
            f_c,
            h_ut,
        }
    }

    /// Builds the input from a horizontal distance, deriving `d_3d` from the
    /// height difference between the base station and the terminal.
    pub fn from_geometry(d_2d: f64, f_c: f64, h_ut: f64) -> Self {
        let dh = H_BS - h_ut;
        Self::new(d_2d, d_2d.hypot(dh), f_c, h_ut)
    }

    fn common_violations(&self) -> Vec<Violation> {
        let (f_lo, f_hi) = FC_RANGE_GHZ;
        let (h_lo, h_hi) = H_UT_RANGE;
        [
            check_range(Quantity::CarrierFrequency, self.f_c, f_lo, f_hi),
            check_range(Quantity::TerminalHeight, self.h_ut, h_lo, h_hi),
            check_range(Quantity::Distance3d, self.d_3d, self.d_2d, f64::INFINITY),
        ]
        .into_iter()
        .flatten()
        .collect()
    }

    /// All LOS validity violations; empty when the input is inside the envelope.
    pub fn los_violations(&self) -> Vec<Violation> {
        let mut out = self.common_violations();
        // h_UT <= 1 has no breakpoint; the height check above already reports it.
        let d_bp = breakpoint_distance(self.h_ut, self.f_c).unwrap_or(f64::NAN);
        if !(self.d_2d >= MIN_D_2D && self.d_2d <= d_bp) {
            out.push(Violation {
                quantity: Quantity::Distance2d,
                value: self.d_2d,
                min: MIN_D_2D,
                max: d_bp,
            });
        }
        out
    }

    /// All NLOS validity violations; empty when the input is inside the envelope.
    pub fn nlos_violations(&self) -> Vec<Violation> {
        let mut out = self.common_violations();
        out.extend(check_range(
            Quantity::Distance2d,
            self.d_2d,
            MIN_D_2D,
            MAX_D_2D_NLOS,
        ));
        out
    }
}

/// Breakpoint distance for `h_BS = 10 m`, in meters.
///
/// Equals `36 (h_UT - 1) f_c / 0.3` with `f_c` in GHz, i.e.
/// `4 h'_BS h'_UT f_c / c` with both effective heights reduced by 1 m.
pub fn breakpoint_distance(h_ut: f64, f_c: f64) -> Result<f64, ChannelError> {
    if !(h_ut > 1.0) {
        return Err(ChannelError::DegenerateBreakpoint(h_ut));
    }
    let (f_lo, f_hi) = FC_RANGE_GHZ;
    if let Some(v) = check_range(Quantity::CarrierFrequency, f_c, f_lo, f_hi) {
        return Err(ChannelError::Validity(v));
    }
    Ok(120.0 * (h_ut - 1.0) * f_c)
}

pub fn path_loss_los_unchecked(input: &PathLossInput) -> f64 {
    32.4 + 21.0 * input.d_3d.log10() + 20.0 * input.f_c.log10()
}

/// The NLOS-specific term, before taking the max with the LOS loss.
pub fn path_loss_nlos_prime(input: &PathLossInput) -> f64 {
    22.4 + 35.3 * input.d_3d.log10() + 21.3 * input.f_c.log10() - 0.3 * (input.h_ut - 1.5)
}

pub fn path_loss_nlos_unchecked(input: &PathLossInput) -> f64 {
    // LOS is evaluated here outside its own breakpoint envelope on purpose.
    path_loss_los_unchecked(input).max(path_loss_nlos_prime(input))
}

/// UMi LOS path loss in dB for `10 m <= d_2D <= d_BP`.
pub fn path_loss_los(input: &PathLossInput) -> Result<f64, ChannelError> {
    match input.los_violations().first() {
        Some(v) => Err(ChannelError::Validity(*v)),
        None => Ok(path_loss_los_unchecked(input)),
    }
}

/// UMi NLOS path loss in dB for `10 m <= d_2D <= 5 km`.
pub fn path_loss_nlos(input: &PathLossInput) -> Result<f64, ChannelError> {
    match input.nlos_violations().first() {
        Some(v) => Err(ChannelError::Validity(*v)),
        None => Ok(path_loss_nlos_unchecked(input)),
    }
}

/// Line-of-sight condition of a link.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Propagation {
    Los,
    Nlos,
}

impl Propagation {
    pub fn path_loss_unchecked(self, input: &PathLossInput) -> f64 {
        match self {
            Propagation::Los => path_loss_los_unchecked(input),
            Propagation::Nlos => path_loss_nlos_unchecked(input),
        }
    }

    pub fn violations(self, input: &PathLossInput) -> Vec<Violation> {
        match self {
            Propagation::Los => input.los_violations(),
            Propagation::Nlos => input.nlos_violations(),
        }
    }
}

/// A dimensionless linear power gain, strictly positive and finite.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Gain(f64);

impl Gain {
    pub fn new(linear: f64) -> Result<Self, ChannelError> {
        if linear > 0.0 && linear.is_finite() {
            Ok(Gain(linear))
        } else {
            Err(ChannelError::NonPositiveGain(linear))
        }
    }

    pub fn from_db(db: f64) -> Result<Self, ChannelError> {
        Self::new(10f64.powf(db / 10.0))
    }

    pub fn linear(self) -> f64 {
        self.0
    }

    pub fn db(self) -> f64 {
        10.0 * self.0.log10()
    }

    pub fn sqrt(self) -> f64 {
        self.0.sqrt()
    }
}

impl TryFrom<f64> for Gain {
    type Error = ChannelError;

    fn try_from(v: f64) -> Result<Self, Self::Error> {
        Gain::new(v)
    }
}

impl From<Gain> for f64 {
    fn from(g: Gain) -> f64 {
        g.0
    }
}

/// Combines antenna gains (dBi) with a path loss (dB) into a linear gain.
///
/// The loss is applied as attenuation: `beta[dB] = g_tx + g_rx - pl`.
pub fn channel_gain(pl: f64, g_tx: f64, g_rx: f64) -> Result<Gain, ChannelError> {
    if !(pl >= 0.0) {
        return Err(ChannelError::NegativePathLoss(pl));
    }
    Gain::from_db(g_tx + g_rx - pl)
}
