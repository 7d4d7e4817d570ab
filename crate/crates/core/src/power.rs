//! Required transmit power for SISO, repetition-coded DF relaying and IRS-aided
//! transmission, and the IRS element count at which the IRS wins.
//!
//! All powers are in watts. Noise is the receiver noise power in watts and
//! rates are in bits/sec/Hz.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channel::Gain;
use crate::scenario::{watts_to_dbm, LinkBudget};

/// Default upper bound for the element-count search.
pub const DEFAULT_N_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PowerError {
    #[error("rate must be non-negative and finite, got {0}")]
    InvalidRate(f64),
    #[error("noise power must be positive and finite, got {0} W")]
    InvalidNoise(f64),
    #[error("reflection coefficient must lie in (0, 1], got {0}")]
    InvalidAlpha(f64),
    #[error("closed-form threshold does not apply: beta_sd > beta_sr, so the IRS beats DF for any N >= 1")]
    NotApplicable,
    #[error("no element count up to {cap} beats the target power")]
    Unbounded { cap: u64 },
}

fn check_common(rate: f64, noise: f64) -> Result<(), PowerError> {
    if !(rate >= 0.0 && rate.is_finite()) {
        return Err(PowerError::InvalidRate(rate));
    }
    if !(noise > 0.0 && noise.is_finite()) {
        return Err(PowerError::InvalidNoise(noise));
    }
    Ok(())
}

fn check_alpha(alpha: f64) -> Result<(), PowerError> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(PowerError::InvalidAlpha(alpha))
    }
}

/// IRS size and reflection efficiency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IrsConfig {
    pub n_elements: u64,
    pub alpha: f64,
}

impl IrsConfig {
    pub fn new(n_elements: u64, alpha: f64) -> Result<Self, PowerError> {
        check_alpha(alpha)?;
        Ok(Self { n_elements, alpha })
    }
}

/// Direct transmission without relay or IRS.
pub fn p_siso(rate: f64, noise: f64, beta_sd: Gain) -> Result<f64, PowerError> {
    check_common(rate, noise)?;
    Ok((2f64.powf(rate) - 1.0) * noise / beta_sd.linear())
}

/// Half-duplex repetition-coded DF relaying with MRC at the destination.
///
/// When the direct link is stronger than the source-relay link the relay
/// cannot help and the first branch applies. Ties go to the relayed branch.
pub fn p_df(
    rate: f64,
    noise: f64,
    beta_sd: Gain,
    beta_sr: Gain,
    beta_rd: Gain,
) -> Result<f64, PowerError> {
    check_common(rate, noise)?;
    let (sd, sr, rd) = (beta_sd.linear(), beta_sr.linear(), beta_rd.linear());
    let factor = 2f64.powf(2.0 * rate) - 1.0;
    if sd > sr {
        Ok(factor * noise / sd)
    } else {
        Ok(factor * (sr + rd - sd) * noise / (2.0 * sr * rd))
    }
}

/// IRS-aided transmission with ideally co-phased elements.
pub fn p_irs(
    rate: f64,
    noise: f64,
    beta_sd: Gain,
    beta_irs: Gain,
    irs: IrsConfig,
) -> Result<f64, PowerError> {
    check_common(rate, noise)?;
    check_alpha(irs.alpha)?;
    // (sqrt(b_sd) + x)^2 expanded so that N = 0 reduces to exactly b_sd
    let x = irs.n_elements as f64 * irs.alpha * beta_irs.sqrt();
    let combined = beta_sd.linear() + x * (2.0 * beta_sd.sqrt() + x);
    Ok((2f64.powf(rate) - 1.0) * noise / combined)
}

/// Real-valued element count at which IRS and DF need the same power.
///
/// The IRS needs less power than DF exactly when `N` exceeds the returned
/// value. Only defined on the relayed branch of the DF formula
/// (`beta_sd <= beta_sr`).
pub fn n_min_closed_form(
    p_df: f64,
    noise: f64,
    beta_sd: Gain,
    beta_sr: Gain,
    beta_rd: Gain,
    alpha: f64,
) -> Result<f64, PowerError> {
    check_common(0.0, noise)?;
    check_alpha(alpha)?;
    let (sd, sr, rd) = (beta_sd.linear(), beta_sr.linear(), beta_rd.linear());
    if sd > sr {
        return Err(PowerError::NotApplicable);
    }
    let beta_irs = sr * rd;
    let scale = noise / p_df;
    let mut radicand =
        ((1.0 + 2.0 * p_df * sr * rd / ((sr + rd - sd) * noise)).sqrt() - 1.0) * scale;
    // rounding can push an exact zero slightly negative
    if radicand < 0.0 && radicand >= -1e-12 * scale {
        radicand = 0.0;
    }
    Ok((radicand.sqrt() - sd.sqrt()) / (alpha * beta_irs.sqrt()))
}

/// Which incumbent scheme(s) the IRS must beat.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Df,
    Siso,
    Both,
}

/// Smallest `N >= 1` for which the IRS needs strictly less power than the
/// selected target(s).
///
/// Doubles `N` until the condition holds, then bisects; the predicate is
/// monotone because the IRS power is strictly decreasing in `N`.
pub fn n_min_oracle(
    rate: f64,
    noise: f64,
    budget: &LinkBudget,
    alpha: f64,
    target: Target,
    cap: u64,
) -> Result<u64, PowerError> {
    let threshold = match target {
        Target::Df => p_df(rate, noise, budget.beta_sd, budget.beta_sr, budget.beta_rd)?,
        Target::Siso => p_siso(rate, noise, budget.beta_sd)?,
        Target::Both => p_df(rate, noise, budget.beta_sd, budget.beta_sr, budget.beta_rd)?
            .min(p_siso(rate, noise, budget.beta_sd)?),
    };
    check_alpha(alpha)?;
    let beats = |n: u64| -> Result<bool, PowerError> {
        let irs = IrsConfig {
            n_elements: n,
            alpha,
        };
        Ok(p_irs(rate, noise, budget.beta_sd, budget.beta_irs, irs)? < threshold)
    };

    if cap == 0 {
        return Err(PowerError::Unbounded { cap });
    }
    // beats(hi) is the search target; lo is the largest count known to fail,
    // 0 meaning none checked yet.
    let (mut lo, mut hi) = (0u64, 1u64);
    while !beats(hi)? {
        if hi >= cap {
            return Err(PowerError::Unbounded { cap });
        }
        lo = hi;
        hi = hi.saturating_mul(2).min(cap);
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if beats(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Required powers of the three schemes at one scenario point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerReport {
    pub p_siso: f64,
    pub p_df: f64,
    /// IRS power keyed by element count.
    pub p_irs: BTreeMap<u64, f64>,
}

impl PowerReport {
    pub fn compute(
        rate: f64,
        noise: f64,
        budget: &LinkBudget,
        alpha: f64,
        element_counts: &[u64],
    ) -> Result<Self, PowerError> {
        let p_irs = element_counts
            .iter()
            .map(|&n| {
                let irs = IrsConfig::new(n, alpha)?;
                Ok((n, p_irs(rate, noise, budget.beta_sd, budget.beta_irs, irs)?))
            })
            .collect::<Result<_, PowerError>>()?;
        Ok(Self {
            p_siso: p_siso(rate, noise, budget.beta_sd)?,
            p_df: p_df(rate, noise, budget.beta_sd, budget.beta_sr, budget.beta_rd)?,
            p_irs,
        })
    }

    pub fn p_siso_dbm(&self) -> f64 {
        watts_to_dbm(self.p_siso)
    }

    pub fn p_df_dbm(&self) -> f64 {
        watts_to_dbm(self.p_df)
    }

    pub fn p_irs_dbm(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.p_irs.iter().map(|(&n, &w)| (n, watts_to_dbm(w)))
    }
}
