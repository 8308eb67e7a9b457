//! Command implementations: build tables from the simulation and write them.

use std::io::Write as _;
use std::path::{Path, PathBuf};

use adiashort_core::coupledwave::{self, WaveParameters};
use adiashort_core::{dynamics, experiments, profiles, CouplingSchedule};

use crate::config::{Command, RunConfig};
use crate::csv::{self, Table};
use crate::svg::{self, Plot, Series};
use crate::CliError;

pub const TRACE_COLUMNS: [&str; 8] =
    ["z_mm", "kappa1", "kappa3", "delta_eff", "pop1", "pop2", "pop3", "adiabaticity_ratio"];
pub const SWEEP_COLUMNS: [&str; 5] = ["a", "delta", "fidelity", "max_pop2", "length_mm"];
pub const PROFILE_COLUMNS: [&str; 5] = ["z_mm", "kappa1", "kappa3", "delta_eff", "mixing_angle"];
pub const WAVES_COLUMNS: [&str; 7] =
    ["z_mm", "flux_p", "flux_2", "flux_plus", "flux_minus", "photon_number", "signal_idler"];
pub const COMPARE_COLUMNS: [&str; 7] = ["z_mm", "pop1", "pop2", "pop3", "wave_pop1", "wave_pop2", "wave_pop3"];

/// A table plus the plot drawn from it.
pub struct Output {
    pub table: Table,
    pub plot: Plot,
}

pub fn execute(config: &RunConfig) -> Result<(), CliError> {
    let output = build(config)?;
    write(config, &output)
}

/// Runs the configured command without touching the filesystem.
pub fn build(config: &RunConfig) -> Result<Output, CliError> {
    match config.command {
        Command::Profile => profile(config),
        Command::Propagate => propagate(config),
        Command::Sweep => sweep(config),
        Command::Waves => waves(config),
        Command::Compare => compare(config),
    }
}

fn write(config: &RunConfig, output: &Output) -> Result<(), CliError> {
    match &config.out {
        None => {
            let text = output.table.render()?;
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|source| CliError::Io { path: PathBuf::from("<stdout>"), source })
        }
        Some(out) => {
            if config.format.csv() {
                csv::emit_csv(&output.table, &with_ext(out, "csv"))?;
            }
            if config.format.svg() {
                svg::emit_svg(&output.plot, &with_ext(out, "svg"))?;
            }
            Ok(())
        }
    }
}

fn with_ext(path: &Path, ext: &str) -> PathBuf {
    path.with_extension(ext)
}

fn series_from(table: &Table, x: &str, ys: &[&str]) -> Vec<Series> {
    let xs = table.column(x).unwrap_or_default();
    ys.iter().map(|y| Series::new(*y, &xs, &table.column(y).unwrap_or_default())).collect()
}

fn schedule_title(sched: &CouplingSchedule) -> String {
    let kind = match sched.kind() {
        profiles::ScheduleKind::Plain => "plain",
        profiles::ScheduleKind::TimeRescaled => "time-rescaled",
        profiles::ScheduleKind::GaussianApprox => "Gaussian approx",
    };
    format!("{kind}, a = {}, delta = {}", sched.contraction(), sched.delta0())
}

fn profile(config: &RunConfig) -> Result<Output, CliError> {
    let sched = config.schedule()?;
    let settings = config.settings;
    let len = sched.domain_length();
    let mut table = Table::new(&PROFILE_COLUMNS);
    let mut last_angle = 0.0;
    for k in (0..=settings.n_steps).filter(|&k| settings.is_sample(k)) {
        let z = settings.node(k, len);
        let (k1, k3) = profiles::coupling_pair(z, &sched)?;
        if let Ok(theta) = profiles::mixing_angle(k1, k3) {
            last_angle = theta;
        }
        table.push(vec![z, k1, k3, profiles::detuning_at(z, &sched)?, last_angle]);
    }
    let plot = Plot {
        title: format!("Coupling schedule ({})", schedule_title(&sched)),
        x_label: "z_mm".into(),
        y_label: "coupling (1/mm)".into(),
        series: series_from(&table, "z_mm", &["kappa1", "kappa3"]),
    };
    Ok(Output { table, plot })
}

fn propagate(config: &RunConfig) -> Result<Output, CliError> {
    let sched = config.schedule()?;
    let trace = experiments::run_trace(&sched, &config.settings)?;
    let r = &trace.result;
    let mut table = Table::new(&TRACE_COLUMNS);
    for i in 0..r.z_grid.len() {
        let p = r.populations[i];
        table.push(vec![
            r.z_grid[i],
            trace.kappa1[i],
            trace.kappa3[i],
            trace.delta_eff[i],
            p[0],
            p[1],
            p[2],
            r.adiabaticity_trace[i],
        ]);
    }
    eprintln!(
        "fidelity = {:.9}  max_pop2 = {:.6}  length = {} mm  norm drift = {:.2e}",
        dynamics::fidelity(r),
        dynamics::max_intermediate_population(r),
        sched.domain_length(),
        r.max_norm_drift()
    );
    let plot = Plot {
        title: format!("Populations ({})", schedule_title(&sched)),
        x_label: "z_mm".into(),
        y_label: "population".into(),
        series: series_from(&table, "z_mm", &["pop1", "pop2", "pop3"]),
    };
    Ok(Output { table, plot })
}

fn sweep(config: &RunConfig) -> Result<Output, CliError> {
    let result = experiments::sweep_contraction(&config.sweep_spec())?;
    let mut table = Table::new(&SWEEP_COLUMNS);
    for row in &result.rows {
        table.push(vec![row.a, row.delta, row.fidelity, row.max_pop2, row.length_mm]);
    }
    let mut series: Vec<Series> = Vec::new();
    for row in &result.rows {
        let label = format!("fidelity delta={}", row.delta);
        match series.iter_mut().find(|s| s.label == label) {
            Some(s) => s.points.push((row.a, row.fidelity)),
            None => series.push(Series { label, points: vec![(row.a, row.fidelity)] }),
        }
    }
    eprintln!("min fidelity = {:.9} over {} runs", result.min_fidelity(), result.rows.len());
    let plot = Plot { title: "Final fidelity vs contraction".into(), x_label: "a".into(), y_label: "fidelity".into(), series };
    Ok(Output { table, plot })
}

fn waves(config: &RunConfig) -> Result<Output, CliError> {
    let sched = config.schedule()?;
    let input = coupledwave::reference_input();
    let params = coupledwave::matched_parameters(&sched, &WaveParameters::reference(), &input)?;
    let traj = coupledwave::propagate_waves(input, &params, &config.settings)?;
    let np0 = input.fluxes(&params)[0];
    let mut table = Table::new(&WAVES_COLUMNS);
    for (z, s) in traj.z_grid.iter().zip(&traj.states) {
        let [np, n2, nplus, nminus] = s.fluxes(&params);
        let inv = s.invariants(&params);
        table.push(vec![*z, np / np0, n2 / np0, nplus / np0, nminus / np0, inv.photon_number / np0, inv.signal_idler / np0]);
    }
    let drift = traj.max_invariant_drift(&params);
    eprintln!("invariant drift: photon number {:.2e}, N+ - N- {:.2e}, energy {:.2e}", drift[0], drift[1], drift[2]);
    let plot = Plot {
        title: format!("Classical cascade fluxes ({})", schedule_title(&sched)),
        x_label: "z_mm".into(),
        y_label: "flux / initial pump flux".into(),
        series: series_from(&table, "z_mm", &["flux_p", "flux_2", "flux_plus"]),
    };
    Ok(Output { table, plot })
}

fn compare(config: &RunConfig) -> Result<Output, CliError> {
    let sched = config.schedule()?;
    let cmp = coupledwave::compare_models(
        &sched,
        &WaveParameters::reference(),
        &coupledwave::reference_input(),
        &config.settings,
    )?;
    let mut table = Table::new(&COMPARE_COLUMNS);
    for i in 0..cmp.z_grid.len() {
        let (l, w) = (cmp.level_populations[i], cmp.wave_populations[i]);
        table.push(vec![cmp.z_grid[i], l[0], l[1], l[2], w[0], w[1], w[2]]);
    }
    eprintln!(
        "conversion: three-level {:.6}, coupled-wave {:.6}; max discrepancy {:.4}",
        cmp.level_conversion, cmp.wave_conversion, cmp.max_discrepancy
    );
    let plot = Plot {
        title: format!("Three-level vs coupled-wave ({})", schedule_title(&sched)),
        x_label: "z_mm".into(),
        y_label: "population".into(),
        series: series_from(&table, "z_mm", &["pop1", "pop2", "pop3", "wave_pop1", "wave_pop2", "wave_pop3"]),
    };
    Ok(Output { table, plot })
}
