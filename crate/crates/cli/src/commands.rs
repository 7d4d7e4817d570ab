use serde::Serialize;

use irs5g_core::experiments::{
    max_dsr_search, nmin_vs_dsr, sweep_d1, ExperimentError, NminOutcome, SweepRow,
};
use irs5g_core::scenario::{evaluate_budget, EvaluatedBudget, LinkGeometry};
use irs5g_core::{
    Execution, LinkId, PowerReport, Propagation, RadioConfig, Scenario, ScenarioError,
};

use crate::args::{Cli, Command, PointArgs, Validation};
use crate::config::ConfigFile;
use crate::output::{emit, fmt_g, Sink, Table};
use crate::CliError;

const DEFAULT_POWER_N: [u64; 4] = [25, 50, 80, 150];

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let config = ConfigFile::load(cli.config.as_deref())?;
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    match &cli.command {
        Command::Gain(a) => gain(cli, &config, a),
        Command::Power(a) => power(cli, &config, a),
        Command::SweepD1(a) => {
            let spec = config.sweep_d1(a)?;
            let rows = sweep_d1(&spec, exec)?;
            check_rows(
                cli.validation,
                rows.iter()
                    .filter(|r| !r.valid.all_valid())
                    .map(|r| (spec.scenario.with_d1(r.value), format!("d1 = {}", r.value))),
                &spec.radio,
            )?;
            let table = sweep_table(&spec.element_counts, &rows);
            let json: Vec<SweepJson> = rows
                .iter()
                .map(|r| SweepJson::new(&spec.element_counts, r))
                .collect();
            write(cli, "sweep-d1", &table, &json)
        }
        Command::NminSweep(a) => {
            let spec = config.nmin(a)?;
            let rows = nmin_vs_dsr(&spec, exec)?;
            check_rows(
                cli.validation,
                rows.iter()
                    .filter(|r| r.n_min == NminOutcome::Invalid)
                    .map(|r| {
                        let s = spec.scenario.with_d_sr(r.d_sr).with_d1(r.ratio * r.d_sr);
                        (s, format!("d_sr = {}, ratio = {}", r.d_sr, r.ratio))
                    }),
                &spec.radio,
            )?;
            let mut table = Table::new(["d_sr_m", "ratio", "n_min"]);
            for r in &rows {
                let n = match r.n_min {
                    NminOutcome::Found(n) => n.to_string(),
                    NminOutcome::Unbounded => "inf".into(),
                    NminOutcome::Invalid => "nan".into(),
                };
                table.push(vec![fmt_g(r.d_sr), fmt_g(r.ratio), n]);
            }
            write(cli, "nmin-sweep", &table, &rows)
        }
        Command::MaxDsr(a) => {
            let spec = config.max_dsr(a)?;
            let rows = max_dsr_search(&spec, exec)?;
            let mut table = Table::new(["fc_GHz", "rate_bps_hz", "max_dsr_m"]);
            for r in &rows {
                table.push(vec![
                    fmt_g(r.f_c),
                    fmt_g(r.rate),
                    r.max_d_sr.map_or_else(|| "nan".into(), fmt_g),
                ]);
            }
            write(cli, "max-dsr", &table, &rows)
        }
    }
}

fn write<T: Serialize>(cli: &Cli, stem: &str, table: &Table, json: &T) -> Result<(), CliError> {
    let sink = Sink::resolve(
        cli.output.as_deref(),
        cli.output_dir.as_deref(),
        Some(stem),
        cli.format,
    );
    emit(&sink, cli.format, table, json)?;
    if let Sink::File(p) = &sink {
        eprintln!("wrote {} rows to {}", table.rows.len(), p.display());
    }
    Ok(())
}

fn point(config: &ConfigFile, a: &PointArgs) -> Result<(Scenario, RadioConfig), CliError> {
    Ok((
        config.scenario(Scenario::default(), &a.overrides),
        config.radio(&a.overrides)?,
    ))
}

/// Applies the validation mode to one evaluated placement.
fn check(mode: Validation, e: &EvaluatedBudget, context: &str) -> Result<(), CliError> {
    for l in &e.links {
        for v in &l.violations {
            let msg = format!(
                "{context}{} link ({}): {v}",
                l.link,
                model_name(l.propagation)
            );
            match mode {
                Validation::Strict => {
                    return Err(CliError::Domain(format!("validity bound violated: {msg}")))
                }
                Validation::Warn => eprintln!("warning: {msg}"),
                Validation::Off => {}
            }
        }
    }
    Ok(())
}

fn check_rows(
    mode: Validation,
    bad: impl Iterator<Item = (Scenario, String)>,
    radio: &RadioConfig,
) -> Result<(), CliError> {
    if mode == Validation::Off {
        return Ok(());
    }
    let mut count = 0usize;
    for (scenario, at) in bad {
        count += 1;
        if count > 1 {
            continue;
        }
        let context = format!("at {at}: ");
        match evaluate_budget(&scenario, radio) {
            Ok(e) => check(mode, &e, &context)?,
            Err(err) if mode == Validation::Strict => {
                return Err(CliError::Domain(format!("{context}{err}")))
            }
            Err(err) => eprintln!("warning: {context}{err}"),
        }
    }
    if count > 0 {
        eprintln!("warning: {count} grid points outside the channel-model envelope");
    }
    Ok(())
}

fn model_name(p: Propagation) -> &'static str {
    match p {
        Propagation::Los => "UMi LOS",
        Propagation::Nlos => "UMi NLOS",
    }
}

#[derive(Debug, Serialize)]
struct GainRow {
    link: LinkId,
    model: Propagation,
    d_2d_m: f64,
    d_3d_m: f64,
    h_ut_m: f64,
    path_loss_db: f64,
    antenna_gain_dbi: f64,
    gain_db: f64,
    gain_linear: f64,
    valid: bool,
}

fn gain(cli: &Cli, config: &ConfigFile, a: &PointArgs) -> Result<(), CliError> {
    let (scenario, radio) = point(config, a)?;
    let e = evaluate_budget(&scenario, &radio)?;
    check(cli.validation, &e, "")?;
    let rows: Vec<GainRow> = e
        .links
        .iter()
        .map(|l| {
            let LinkGeometry { d_2d, d_3d } = l.geometry;
            GainRow {
                link: l.link,
                model: l.propagation,
                d_2d_m: d_2d,
                d_3d_m: d_3d,
                h_ut_m: l.input.h_ut,
                path_loss_db: l.path_loss_db,
                antenna_gain_dbi: l.antenna_gain_dbi,
                gain_db: l.gain.db(),
                gain_linear: l.gain.linear(),
                valid: l.violations.is_empty(),
            }
        })
        .collect();
    let mut table = Table::new([
        "link",
        "model",
        "d_2d_m",
        "d_3d_m",
        "h_ut_m",
        "path_loss_dB",
        "antenna_gain_dBi",
        "gain_dB",
        "gain_linear",
        "valid",
    ]);
    for r in &rows {
        table.push(vec![
            r.link.short_name().into(),
            model_name(r.model).into(),
            fmt_g(r.d_2d_m),
            fmt_g(r.d_3d_m),
            fmt_g(r.h_ut_m),
            fmt_g(r.path_loss_db),
            fmt_g(r.antenna_gain_dbi),
            fmt_g(r.gain_db),
            fmt_g(r.gain_linear),
            r.valid.to_string(),
        ]);
    }
    let sink = Sink::resolve(cli.output.as_deref(), None, None, cli.format);
    Ok(emit(&sink, cli.format, &table, &rows)?)
}

#[derive(Debug, Serialize)]
struct PowerRow {
    scheme: &'static str,
    n_elements: Option<u64>,
    p_dbm: f64,
    p_w: f64,
}

fn power(cli: &Cli, config: &ConfigFile, a: &PointArgs) -> Result<(), CliError> {
    let (scenario, radio) = point(config, a)?;
    let e = evaluate_budget(&scenario, &radio)?;
    check(cli.validation, &e, "")?;
    let counts = config.element_counts(&a.n, &DEFAULT_POWER_N);
    let report = PowerReport::compute(
        radio.target_rate,
        radio.noise_power_w(),
        &e.budget,
        radio.alpha,
        &counts,
    )
    .map_err(ExperimentError::from)?;

    let mut rows = vec![
        PowerRow {
            scheme: "siso",
            n_elements: None,
            p_dbm: report.p_siso_dbm(),
            p_w: report.p_siso,
        },
        PowerRow {
            scheme: "df",
            n_elements: None,
            p_dbm: report.p_df_dbm(),
            p_w: report.p_df,
        },
    ];
    for &n in &counts {
        let w = report.p_irs[&n];
        rows.push(PowerRow {
            scheme: "irs",
            n_elements: Some(n),
            p_dbm: irs5g_core::scenario::watts_to_dbm(w),
            p_w: w,
        });
    }
    let mut table = Table::new(["scheme", "n_elements", "p_dBm", "p_W"]);
    for r in &rows {
        table.push(vec![
            r.scheme.into(),
            r.n_elements.map_or_else(String::new, |n| n.to_string()),
            fmt_g(r.p_dbm),
            fmt_g(r.p_w),
        ]);
    }
    let sink = Sink::resolve(cli.output.as_deref(), None, None, cli.format);
    Ok(emit(&sink, cli.format, &table, &rows)?)
}

fn sweep_table(counts: &[u64], rows: &[SweepRow]) -> Table {
    let mut header = vec!["d1_m".to_string(), "p_siso_dBm".into(), "p_df_dBm".into()];
    header.extend(counts.iter().map(|n| format!("p_irs_N{n}_dBm")));
    let mut table = Table::new(header);
    for r in rows {
        let mut cells = vec![fmt_g(r.value), fmt_g(r.p_siso_dbm()), fmt_g(r.p_df_dbm())];
        cells.extend(r.p_irs_dbm().into_iter().map(fmt_g));
        table.push(cells);
    }
    table
}

#[derive(Debug, Serialize)]
struct SweepJson {
    d1_m: f64,
    p_siso_dbm: f64,
    p_df_dbm: f64,
    p_irs_dbm: Vec<(u64, f64)>,
    valid: bool,
}

impl SweepJson {
    fn new(counts: &[u64], r: &SweepRow) -> Self {
        Self {
            d1_m: r.value,
            p_siso_dbm: r.p_siso_dbm(),
            p_df_dbm: r.p_df_dbm(),
            p_irs_dbm: counts.iter().copied().zip(r.p_irs_dbm()).collect(),
            valid: r.valid.all_valid(),
        }
    }
}

impl From<ScenarioError> for CliError {
    fn from(e: ScenarioError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<ExperimentError> for CliError {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::InvalidSpec(msg) => CliError::Usage(msg),
            other => CliError::Domain(other.to_string()),
        }
    }
}
