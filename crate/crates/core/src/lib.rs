//! Transmit-power analysis of SISO, decode-and-forward relaying and
//! intelligent-reflecting-surface links under the 5G urban-microcell
//! (UMi) path-loss models.
//!
//! - [`channel`]: UMi LOS/NLOS path loss, breakpoint distance, linear gains.
//! - [`scenario`]: node placement, link geometry and link budgets.
//! - [`power`]: required transmit powers and the IRS break-even element count.
//! - [`experiments`]: grid sweeps built on the above.
//!
//! Grid evaluation runs on rayon when the `parallel` feature is enabled
//! (the default); see [`exec::Execution`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod exec;
pub mod experiments;
pub mod power;
pub mod scenario;

pub use channel::{ChannelError, Gain, PathLossInput, Propagation, Violation};
pub use exec::Execution;
pub use experiments::{ExperimentError, Grid};
pub use power::{IrsConfig, PowerError, PowerReport, Target};
pub use scenario::{LinkBudget, LinkId, NodeConfig, RadioConfig, Scenario, ScenarioError};
