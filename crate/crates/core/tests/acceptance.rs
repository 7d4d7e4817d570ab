//! Acceptance suite. Each test prints one `PASS`/`FAIL` line for its
//! criterion, then asserts it. Run with `--nocapture` to see the lines.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod common;

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use irs5g_core::channel::{
    breakpoint_distance, path_loss_nlos_prime, path_loss_nlos_unchecked, PathLossInput, H_BS,
};
use irs5g_core::experiments::{
    max_dsr_search, nmin_vs_dsr, sweep_d1, Grid, MaxDsrSpec, NminOutcome, NminSpec, SweepSpec,
};
use irs5g_core::power::{n_min_closed_form, n_min_oracle, p_df, p_irs, p_siso, DEFAULT_N_CAP};
use irs5g_core::scenario::{link_budget, link_distances};
use irs5g_core::{Execution, IrsConfig, Target};

use common::{random_instance, rel_err};

const PROPERTY_CASES: usize = 10_000;
const ORACLE_CASES: usize = 1_000;
const EXACT_REL: f64 = 1e-12;
const PYTHAGORAS_REL: f64 = 1e-9;

fn verdict(id: &str, what: &str, ok: bool, detail: impl AsRef<str>) {
    let tag = if ok { "PASS" } else { "FAIL" };
    println!("[{tag}] {id} {what}: {}", detail.as_ref());
    assert!(ok, "{id} {what} failed: {}", detail.as_ref());
}

#[test]
fn c1_breakpoint_reproduction() {
    let t = Instant::now();
    let d = breakpoint_distance(1.5, 1.35).unwrap();
    let elapsed = t.elapsed();
    verdict(
        "C1",
        "d_BP(1.5 m, 1.35 GHz) = 81 m",
        d == 81.0 && elapsed < Duration::from_millis(10),
        format!("{d} m in {elapsed:?}"),
    );
}

#[test]
fn c2a_siso_never_below_df() {
    let t = Instant::now();
    let rows = sweep_d1(&SweepSpec::d1_default(), Execution::Sequential).unwrap();
    let violating: Vec<f64> = rows
        .iter()
        .filter(|r| !(r.p_siso >= r.p_df))
        .map(|r| r.value)
        .collect();
    let detail = match (violating.first(), violating.last()) {
        (Some(lo), Some(hi)) => format!(
            "{} of {} grid points have p_siso < p_df (d1 in [{lo}, {hi}] m)",
            violating.len(),
            rows.len()
        ),
        _ => format!("all {} grid points hold", rows.len()),
    };
    verdict(
        "C2a",
        "p_siso >= p_df at every d1",
        violating.is_empty() && t.elapsed() < Duration::from_secs(1),
        detail,
    );
}

#[test]
fn c2b_irs80_above_df_opposite_relay() {
    let t = Instant::now();
    let rows = sweep_d1(&SweepSpec::d1_default(), Execution::Sequential).unwrap();
    let row = rows.iter().find(|r| r.value == 80.0).unwrap();
    let (irs, df) = (row.p_irs_dbm()[2], row.p_df_dbm());
    verdict(
        "C2b",
        "p_irs(N=80) > p_df at d1 = 80 m",
        irs > df && t.elapsed() < Duration::from_secs(1),
        format!("p_irs = {irs:.3} dBm, p_df = {df:.3} dBm"),
    );
}

#[test]
fn c2c_irs80_crossover() {
    let t = Instant::now();
    let spec = SweepSpec::d1_default();
    let rows = sweep_d1(&spec, Execution::Sequential).unwrap();
    let idx = spec.element_counts.iter().position(|&n| n == 80).unwrap();
    let wins = |r: &irs5g_core::experiments::SweepRow| r.p_irs[idx] < r.p_df.min(r.p_siso);
    let crossover = rows.iter().find(|r| !wins(r)).map(|r| r.value);
    let ok = match crossover {
        Some(d) => (40.0..=60.0).contains(&d) && rows.iter().take_while(|r| r.value < d).all(wins),
        None => false,
    };
    verdict(
        "C2c",
        "N=80 IRS beats SISO and DF below a crossover in [40, 60] m",
        ok && t.elapsed() < Duration::from_secs(1),
        format!("crossover d1* = {crossover:?} m"),
    );
}

#[test]
fn c3_nmin_vs_dsr() {
    let t = Instant::now();
    let half = nmin_vs_dsr(
        &NminSpec {
            ratios: vec![0.5],
            ..NminSpec::default()
        },
        Execution::Sequential,
    )
    .unwrap();
    let all_one = half.len() == 71 && half.iter().all(|r| r.n_min == NminOutcome::Found(1));

    let at80 = nmin_vs_dsr(
        &NminSpec {
            dsr_grid: Grid::new(80.0, 80.0, 1.0),
            ratios: vec![0.75, 1.5],
            ..NminSpec::default()
        },
        Execution::Sequential,
    )
    .unwrap();
    let (n34, n32) = (at80[0].n_min, at80[1].n_min);
    let grows = matches!((n34, n32), (NminOutcome::Found(a), NminOutcome::Found(b)) if b > a);
    let elapsed = t.elapsed();
    verdict(
        "C3",
        "N_min = 1 at d1 = d_sr/2; N_min(3/2) > N_min(3/4) at d_sr = 80 m",
        all_one && grows && elapsed < Duration::from_secs(5),
        format!("half-ratio all one: {all_one}; N_min(3/4) = {n34:?}, N_min(3/2) = {n32:?}; {elapsed:?}"),
    );
}

#[test]
fn c4_max_dsr_search() {
    let t = Instant::now();
    let spec = MaxDsrSpec::default();
    let rows = max_dsr_search(&spec, Execution::Sequential).unwrap();
    let elapsed = t.elapsed();
    let lookup = |f: f64, r: f64| {
        rows.iter()
            .find(|row| row.f_c == f && row.rate == r)
            .and_then(|row| row.max_d_sr)
    };
    let at100 = lookup(100.0, 7.0);
    let at6 = lookup(6.0, 7.0);
    let near = |v: Option<f64>, want: f64| v.is_some_and(|v| (v - want).abs() <= 1.0);

    let mut monotone = true;
    for &rate in &spec.rates {
        let series: Vec<f64> = spec
            .fc_grid
            .iter()
            .map(|&f| lookup(f, rate).unwrap_or(f64::NEG_INFINITY))
            .collect();
        monotone &= series.windows(2).all(|w| w[1] <= w[0]);
    }
    for &f in &spec.fc_grid {
        let series: Vec<f64> = spec
            .rates
            .iter()
            .map(|&r| lookup(f, r).unwrap_or(f64::NEG_INFINITY))
            .collect();
        monotone &= series.windows(2).all(|w| w[1] >= w[0]);
    }
    verdict(
        "C4",
        "max d_sr = 24 m at 100 GHz and 33 m at 6 GHz (rate 7), monotone in f_c and rate",
        near(at100, 24.0) && near(at6, 33.0) && monotone && elapsed < Duration::from_secs(60),
        format!("100 GHz: {at100:?} m, 6 GHz: {at6:?} m, monotone: {monotone}, {elapsed:?} single-threaded"),
    );
}

#[test]
fn c5a_irs_with_no_elements_is_siso() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5a);
    let mut failures = 0;
    for _ in 0..PROPERTY_CASES {
        let inst = random_instance(&mut rng);
        let b = link_budget(&inst.scenario, &inst.radio).unwrap();
        let (rate, noise) = (inst.radio.target_rate, inst.radio.noise_power_w());
        let irs = IrsConfig::new(0, inst.radio.alpha).unwrap();
        if p_irs(rate, noise, b.beta_sd, b.beta_irs, irs).unwrap()
            != p_siso(rate, noise, b.beta_sd).unwrap()
        {
            failures += 1;
        }
    }
    verdict(
        "C5a",
        "p_irs(N=0) == p_siso",
        failures == 0,
        format!("{failures} mismatches in {PROPERTY_CASES} cases"),
    );
}

#[test]
fn c5b_irs_strictly_decreasing_in_n() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5b);
    let mut failures = 0;
    for _ in 0..PROPERTY_CASES {
        let inst = random_instance(&mut rng);
        let b = link_budget(&inst.scenario, &inst.radio).unwrap();
        let (rate, noise, alpha) = (
            inst.radio.target_rate,
            inst.radio.noise_power_w(),
            inst.radio.alpha,
        );
        let p = |n| {
            p_irs(
                rate,
                noise,
                b.beta_sd,
                b.beta_irs,
                IrsConfig::new(n, alpha).unwrap(),
            )
            .unwrap()
        };
        if !(p(inst.n + 1) < p(inst.n)) {
            failures += 1;
        }
    }
    verdict(
        "C5b",
        "p_irs(N+1) < p_irs(N)",
        failures == 0,
        format!("{failures} violations in {PROPERTY_CASES} cases"),
    );
}

#[test]
fn c5c_noise_scaling_linearity() {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5c);
    let mut worst: f64 = 0.0;
    for _ in 0..PROPERTY_CASES {
        let inst = random_instance(&mut rng);
        let c = 10f64.powf(rng.gen_range(-3.0..3.0));
        let b = link_budget(&inst.scenario, &inst.radio).unwrap();
        let (rate, noise) = (inst.radio.target_rate, inst.radio.noise_power_w());
        let irs = IrsConfig::new(inst.n, inst.radio.alpha).unwrap();
        let powers = |s2: f64| {
            [
                p_siso(rate, s2, b.beta_sd).unwrap(),
                p_df(rate, s2, b.beta_sd, b.beta_sr, b.beta_rd).unwrap(),
                p_irs(rate, s2, b.beta_sd, b.beta_irs, irs).unwrap(),
            ]
        };
        for (base, scaled) in powers(noise).into_iter().zip(powers(c * noise)) {
            worst = worst.max(rel_err(c * base, scaled));
        }
    }
    verdict(
        "C5c",
        "scaling noise by c scales every power by c",
        worst < EXACT_REL,
        format!("max relative error {worst:.3e} over {PROPERTY_CASES} cases"),
    );
}

#[test]
fn c5d_closed_form_threshold() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5d);
    let (mut checked, mut failures) = (0usize, 0usize);
    while checked < PROPERTY_CASES {
        let inst = random_instance(&mut rng);
        let b = link_budget(&inst.scenario, &inst.radio).unwrap();
        if b.beta_sd > b.beta_sr {
            continue;
        }
        checked += 1;
        let (rate, noise, alpha) = (
            inst.radio.target_rate,
            inst.radio.noise_power_w(),
            inst.radio.alpha,
        );
        let df = p_df(rate, noise, b.beta_sd, b.beta_sr, b.beta_rd).unwrap();
        let n_min = n_min_closed_form(df, noise, b.beta_sd, b.beta_sr, b.beta_rd, alpha).unwrap();
        let base = n_min.floor();
        for n in [base, base + 1.0].into_iter().filter(|&n| n >= 0.0) {
            let irs = IrsConfig::new(n as u64, alpha).unwrap();
            let wins = p_irs(rate, noise, b.beta_sd, b.beta_irs, irs).unwrap() < df;
            if wins != (n > n_min) {
                failures += 1;
            }
        }
    }
    verdict(
        "C5d",
        "p_irs(N) < p_df <=> N > N_min when beta_sd <= beta_sr",
        failures == 0,
        format!("{failures} disagreements over {checked} instances"),
    );
}

#[test]
fn c5e_nlos_effective_branch() {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5e);
    let mut failures = 0;
    for _ in 0..PROPERTY_CASES {
        let d_2d = rng.gen_range(10.0..=5000.0);
        let h_ut = rng.gen_range(1.5..=22.5);
        let f_c = rng.gen_range(0.5..=100.0);
        let input = PathLossInput::new(d_2d, d_2d.hypot(H_BS - h_ut), f_c, h_ut);
        if path_loss_nlos_unchecked(&input) != path_loss_nlos_prime(&input) {
            failures += 1;
        }
    }
    verdict(
        "C5e",
        "PL_NLOS equals the NLOS-specific term over the valid domain",
        failures == 0,
        format!("{failures} cases where the LOS term won, of {PROPERTY_CASES}"),
    );
}

#[test]
fn c5f_pythagorean_consistency() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5f);
    let mut worst: f64 = 0.0;
    for _ in 0..PROPERTY_CASES {
        let s = random_instance(&mut rng).scenario;
        let d = link_distances(&s);
        let checks = [
            (d.sr, s.source.height - s.relay.height),
            (d.rd, s.relay.height - s.destination.height),
            (d.sd, s.source.height - s.destination.height),
        ];
        for (g, dh) in checks {
            let err = (g.d_3d * g.d_3d - g.d_2d * g.d_2d - dh * dh).abs() / (g.d_3d * g.d_3d);
            worst = worst.max(err);
        }
    }
    verdict(
        "C5f",
        "d_3D^2 - d_2D^2 equals the squared height difference",
        worst < PYTHAGORAS_REL,
        format!("max relative error {worst:.3e} over {PROPERTY_CASES} scenarios"),
    );
}

#[test]
fn c6_oracle_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6);
    let mut worst: f64 = 0.0;
    for _ in 0..ORACLE_CASES {
        let inst = random_instance(&mut rng);
        let s = inst.scenario;
        let r = inst.radio;
        let b = link_budget(&s, &r).unwrap();
        let (rate, noise) = (r.target_rate, r.noise_power_w());
        let irs = IrsConfig::new(inst.n, r.alpha).unwrap();
        let lib = [
            p_siso(rate, noise, b.beta_sd).unwrap(),
            p_df(rate, noise, b.beta_sd, b.beta_sr, b.beta_rd).unwrap(),
            p_irs(rate, noise, b.beta_sd, b.beta_irs, irs).unwrap(),
        ];

        let (sr, rd, sd) = common::gains(s.d_sr, s.d1, r.f_c);
        let s2 = common::noise_w(r.noise_power.unwrap());
        let oracle = [
            common::p_siso(rate, s2, sd),
            common::p_df(rate, s2, sd, sr, rd),
            common::p_irs(rate, s2, sd, sr * rd, inst.n, r.alpha),
        ];
        for (a, o) in lib.into_iter().zip(oracle) {
            worst = worst.max(rel_err(a, o));
        }
    }
    verdict(
        "C6",
        "library powers match the independent reference evaluation",
        worst < EXACT_REL,
        format!("max relative error {worst:.3e} over {ORACLE_CASES} scenarios"),
    );
}

#[test]
fn c6_oracle_nmin_cross_check() {
    // supporting check: the search oracle agrees with the closed form
    let mut rng = ChaCha8Rng::seed_from_u64(0x66);
    let mut failures = 0;
    let mut checked = 0;
    while checked < ORACLE_CASES {
        let inst = random_instance(&mut rng);
        let b = link_budget(&inst.scenario, &inst.radio).unwrap();
        if b.beta_sd > b.beta_sr {
            continue;
        }
        checked += 1;
        let (rate, noise, alpha) = (
            inst.radio.target_rate,
            inst.radio.noise_power_w(),
            inst.radio.alpha,
        );
        let df = p_df(rate, noise, b.beta_sd, b.beta_sr, b.beta_rd).unwrap();
        let closed = n_min_closed_form(df, noise, b.beta_sd, b.beta_sr, b.beta_rd, alpha).unwrap();
        if closed >= (DEFAULT_N_CAP - 1) as f64 {
            continue;
        }
        let expected = (closed.floor() + 1.0).max(1.0) as u64;
        if n_min_oracle(rate, noise, &b, alpha, Target::Df, DEFAULT_N_CAP) != Ok(expected) {
            failures += 1;
        }
    }
    verdict(
        "C6+",
        "N_min search agrees with the closed-form threshold",
        failures == 0,
        format!("{failures} disagreements over {checked} instances"),
    );
}
