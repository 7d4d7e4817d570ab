//! Test-only reference evaluation of the path-loss tables, link geometry and
//! power formulas, written directly from the model equations and sharing no
//! code with the library.

#![allow(dead_code)]

use rand::Rng;

use irs5g_core::{RadioConfig, Scenario};

fn lg(x: f64) -> f64 {
    x.ln() / std::f64::consts::LN_10
}

fn from_db(db: f64) -> f64 {
    (db * std::f64::consts::LN_10 / 10.0).exp()
}

pub fn pl_los(d3: f64, fc: f64) -> f64 {
    32.4 + 21.0 * lg(d3) + 20.0 * lg(fc)
}

pub fn pl_nlos(d3: f64, fc: f64, h_ut: f64) -> f64 {
    let nlos = 22.4 + 35.3 * lg(d3) + 21.3 * lg(fc) - 0.3 * (h_ut - 1.5);
    if nlos > pl_los(d3, fc) {
        nlos
    } else {
        pl_los(d3, fc)
    }
}

/// Linear gains (sr, rd, sd) for the default heights and antenna gains.
pub fn gains(d_sr: f64, d1: f64, fc: f64) -> (f64, f64, f64) {
    let d_rd = ((d1 - d_sr) * (d1 - d_sr) + 172.25).sqrt();
    let d_sd = (d1 * d1 + 172.25).sqrt();
    (
        from_db(8.0 + 8.0 - pl_los(d_sr, fc)),
        from_db(8.0 - pl_los(d_rd, fc)),
        from_db(8.0 - pl_nlos(d_sd, fc, 1.5)),
    )
}

pub fn noise_w(noise_dbm: f64) -> f64 {
    from_db(noise_dbm) / 1000.0
}

pub fn p_siso(rate: f64, s2: f64, b_sd: f64) -> f64 {
    (rate.exp2() - 1.0) * s2 / b_sd
}

pub fn p_df(rate: f64, s2: f64, b_sd: f64, b_sr: f64, b_rd: f64) -> f64 {
    let k = (2.0 * rate).exp2() - 1.0;
    if b_sd > b_sr {
        k * s2 / b_sd
    } else {
        k * (b_sr + b_rd - b_sd) * s2 / (2.0 * b_sr * b_rd)
    }
}

pub fn p_irs(rate: f64, s2: f64, b_sd: f64, b_irs: f64, n: u64, alpha: f64) -> f64 {
    let amp = b_sd.sqrt() + n as f64 * alpha * b_irs.sqrt();
    (rate.exp2() - 1.0) * s2 / (amp * amp)
}

/// A randomly drawn configuration inside the channel-model envelope.
#[derive(Debug, Clone, Copy)]
pub struct Instance {
    pub scenario: Scenario,
    pub radio: RadioConfig,
    pub n: u64,
}

pub fn random_instance<R: Rng>(rng: &mut R) -> Instance {
    let d_sr = rng.gen_range(10.0..=80.0);
    // |d1 - d_sr| <= 80 keeps the relay-destination link short of the breakpoint
    let d1 = rng.gen_range(0.0..=2.0 * d_sr);
    let radio = RadioConfig {
        f_c: rng.gen_range(1.35..=100.0),
        noise_power: Some(rng.gen_range(-120.0..=-60.0)),
        target_rate: rng.gen_range(0.5..=10.0),
        alpha: 1.0 - rng.gen_range(0.0..1.0),
        ..RadioConfig::default()
    };
    Instance {
        scenario: Scenario::new(d_sr, d1),
        radio,
        n: rng.gen_range(0..=500),
    }
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}
