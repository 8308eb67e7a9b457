//! Run configuration: defaults, overridden by an optional `key = value`
//! config file, overridden by command-line flags.
//!
//! Config file keys: `schedule`, `a`, `kappa0`, `d`, `s`, `L`, `delta`,
//! `steps`, `stride`, `detuning_mode`, `out`, `format`. `a` and `delta` take
//! comma-separated lists. Blank lines and `#` comments are ignored.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use adiashort_core::experiments::DEFAULT_A_VALUES;
use adiashort_core::{
    CouplingSchedule, DetuningMode, IntegratorSettings, PlainGaussianParams, ScheduleKind, SweepSpec,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Dump the coupling schedule.
    Profile,
    /// Propagate |1⟩ through one schedule.
    Propagate,
    /// Fidelity sweep over contraction parameters and mismatches.
    Sweep,
    /// Classical four-field cascade with gratings matched to the schedule.
    Waves,
    /// Classical cascade against the three-level model.
    Compare,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Svg,
    Both,
}

impl OutputFormat {
    pub fn csv(self) -> bool {
        matches!(self, OutputFormat::Csv | OutputFormat::Both)
    }

    pub fn svg(self) -> bool {
        matches!(self, OutputFormat::Svg | OutputFormat::Both)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScheduleArg {
    Plain,
    Tr,
    Approx,
}

impl From<ScheduleArg> for ScheduleKind {
    fn from(s: ScheduleArg) -> Self {
        match s {
            ScheduleArg::Plain => ScheduleKind::Plain,
            ScheduleArg::Tr => ScheduleKind::TimeRescaled,
            ScheduleArg::Approx => ScheduleKind::GaussianApprox,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DetuningArg {
    Rescaled,
    Constant,
}

impl From<DetuningArg> for DetuningMode {
    fn from(d: DetuningArg) -> Self {
        match d {
            DetuningArg::Rescaled => DetuningMode::Rescaled,
            DetuningArg::Constant => DetuningMode::Constant,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "adiashort", version, about = "Cascaded frequency conversion with time-rescaled adiabatic passage")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Dump the coupling schedule κ₁, κ₃, Δ_eff and the mixing angle.
    Profile(Flags),
    /// Propagate |1⟩ and write the population trace.
    Propagate(Flags),
    /// Sweep final fidelity over a and Δ.
    Sweep(Flags),
    /// Integrate the classical four-field cascade.
    Waves(Flags),
    /// Compare the classical cascade with the three-level model.
    Compare(Flags),
}

#[derive(Debug, Args, Default)]
#[command(allow_negative_numbers = true)]
struct Flags {
    /// `key = value` configuration file.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Output path; the extension is set from the format. CSV goes to stdout when absent.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    #[arg(long, value_enum)]
    schedule: Option<ScheduleArg>,
    /// Contraction parameter(s), comma separated for sweeps.
    #[arg(long, value_name = "F", value_delimiter = ',')]
    a: Vec<f64>,
    #[arg(long, value_name = "F")]
    kappa0: Option<f64>,
    #[arg(long, value_name = "F")]
    d: Option<f64>,
    #[arg(long, value_name = "F")]
    s: Option<f64>,
    /// Medium length in mm.
    #[arg(long = "L", value_name = "F")]
    length: Option<f64>,
    /// Single-photon mismatch(es) Δ in mm⁻¹, comma separated for sweeps.
    #[arg(long, value_name = "F", value_delimiter = ',')]
    delta: Vec<f64>,
    #[arg(long, value_name = "N")]
    steps: Option<usize>,
    /// Keep every N-th integration step in the output.
    #[arg(long, value_name = "N")]
    stride: Option<usize>,
    #[arg(long, value_enum)]
    detuning_mode: Option<DetuningArg>,
}

/// Fully resolved and validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub schedule: ScheduleKind,
    pub a_values: Vec<f64>,
    pub delta_values: Vec<f64>,
    pub base: PlainGaussianParams,
    pub settings: IntegratorSettings,
    pub detuning_mode: DetuningMode,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

impl RunConfig {
    /// The single schedule of a non-sweep command.
    pub fn schedule(&self) -> Result<CouplingSchedule, CliError> {
        Ok(CouplingSchedule::new(self.schedule, self.base, self.a_values[0], self.delta_values[0])?
            .with_detuning_mode(self.detuning_mode))
    }

    pub fn sweep_spec(&self) -> SweepSpec {
        SweepSpec {
            a_values: self.a_values.clone(),
            delta_values: self.delta_values.clone(),
            schedule_kind: self.schedule,
            base: self.base,
            settings: self.settings,
            detuning_mode: self.detuning_mode,
        }
    }
}

pub enum Parsed {
    Run(RunConfig),
    /// Help or version text to print.
    Info(String),
}

/// Parses the command line (program name first).
pub fn parse_config<I, T>(args: I) -> Result<Parsed, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp
                | clap::error::ErrorKind::DisplayVersion
                | clap::error::ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand
                    if !e.use_stderr() =>
                {
                    Ok(Parsed::Info(e.render().to_string()))
                }
                _ => Err(CliError::Usage(e.render().to_string().trim_end().to_owned())),
            };
        }
    };
    let (command, flags) = match cli.command {
        Sub::Profile(f) => (Command::Profile, f),
        Sub::Propagate(f) => (Command::Propagate, f),
        Sub::Sweep(f) => (Command::Sweep, f),
        Sub::Waves(f) => (Command::Waves, f),
        Sub::Compare(f) => (Command::Compare, f),
    };
    let mut layer = match &flags.config {
        Some(path) => read_config_file(path)?,
        None => Flags::default(),
    };
    layer.merge(flags);
    resolve(command, layer).map(Parsed::Run)
}

impl Flags {
    /// Fields set in `over` replace those in `self`.
    fn merge(&mut self, over: Flags) {
        macro_rules! take {
            ($($f:ident),*) => { $( if over.$f.is_some() { self.$f = over.$f; } )* };
        }
        take!(config, out, format, schedule, kappa0, d, s, length, steps, stride, detuning_mode);
        if !over.a.is_empty() {
            self.a = over.a;
        }
        if !over.delta.is_empty() {
            self.delta = over.delta;
        }
    }
}

fn read_config_file(path: &Path) -> Result<Flags, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })?;
    parse_config_text(&text)
}

fn parse_config_text(text: &str) -> Result<Flags, CliError> {
    let mut flags = Flags::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected `key = value`", lineno + 1)))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "schedule" => flags.schedule = Some(enum_value(key, value)?),
            "format" => flags.format = Some(enum_value(key, value)?),
            "detuning_mode" => flags.detuning_mode = Some(enum_value(key, value)?),
            "a" => flags.a = list_value(key, value)?,
            "delta" => flags.delta = list_value(key, value)?,
            "kappa0" => flags.kappa0 = Some(number(key, value)?),
            "d" => flags.d = Some(number(key, value)?),
            "s" => flags.s = Some(number(key, value)?),
            "L" => flags.length = Some(number(key, value)?),
            "steps" => flags.steps = Some(count(key, value)?),
            "stride" => flags.stride = Some(count(key, value)?),
            "out" => flags.out = Some(PathBuf::from(value)),
            other => return Err(CliError::Usage(format!("config line {}: unknown key `{other}`", lineno + 1))),
        }
    }
    Ok(flags)
}

fn enum_value<E: ValueEnum>(key: &str, value: &str) -> Result<E, CliError> {
    E::from_str(value, true).map_err(|_| CliError::validation(key, format!("unrecognized value `{value}`")))
}

fn number(key: &str, value: &str) -> Result<f64, CliError> {
    value.parse().map_err(|_| CliError::validation(key, format!("`{value}` is not a number")))
}

fn count(key: &str, value: &str) -> Result<usize, CliError> {
    value.parse().map_err(|_| CliError::validation(key, format!("`{value}` is not a non-negative integer")))
}

fn list_value(key: &str, value: &str) -> Result<Vec<f64>, CliError> {
    value.split(',').map(|v| number(key, v.trim())).collect()
}

fn resolve(command: Command, f: Flags) -> Result<RunConfig, CliError> {
    let length = f.length.unwrap_or(80.0);
    let kappa0 = f.kappa0.unwrap_or(1.0);
    let base = PlainGaussianParams::new(kappa0, f.d.unwrap_or(length / 10.0), f.s.unwrap_or(length / 6.0), length)
        .map_err(core_validation)?;
    if kappa0 <= 0.0 {
        return Err(CliError::validation("kappa0", "must be > 0"));
    }

    let sweep = command == Command::Sweep;
    let schedule = f.schedule.map(ScheduleKind::from).unwrap_or(if sweep {
        ScheduleKind::GaussianApprox
    } else {
        ScheduleKind::Plain
    });
    let a_values = if !f.a.is_empty() {
        f.a
    } else if sweep {
        DEFAULT_A_VALUES.to_vec()
    } else {
        vec![1.0]
    };
    let delta_values = if !f.delta.is_empty() {
        f.delta
    } else if sweep {
        vec![0.0, kappa0]
    } else {
        vec![0.0]
    };
    if let Some(a) = a_values.iter().find(|a| a.is_nan() || **a < 1.0 || a.is_infinite()) {
        return Err(CliError::validation("a", format!("contraction parameter must be >= 1, got {a}")));
    }
    if let Some(d) = delta_values.iter().find(|d| !d.is_finite()) {
        return Err(CliError::validation("delta", format!("must be finite, got {d}")));
    }
    if !sweep && (a_values.len() != 1 || delta_values.len() != 1) {
        return Err(CliError::validation("a/delta", "lists are only accepted by `sweep`"));
    }

    let settings = IntegratorSettings::new(f.steps.unwrap_or(20_000), f.stride.unwrap_or(100)).map_err(core_validation)?;
    let format = f.format.unwrap_or_default();
    if format.svg() && f.out.is_none() {
        return Err(CliError::validation("out", "SVG output needs --out"));
    }
    Ok(RunConfig {
        command,
        schedule,
        a_values,
        delta_values,
        base,
        settings,
        detuning_mode: f.detuning_mode.map(DetuningMode::from).unwrap_or_default(),
        out: f.out,
        format,
    })
}

fn core_validation(e: adiashort_core::Error) -> CliError {
    match e {
        adiashort_core::Error::Invalid { field, reason } => CliError::validation(field, reason),
        other => CliError::Simulation(other),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<RunConfig, CliError> {
        let argv = std::iter::once("adiashort").chain(args.iter().copied());
        match parse_config(argv)? {
            Parsed::Run(c) => Ok(c),
            Parsed::Info(_) => panic!("unexpected help output"),
        }
    }

    #[test]
    fn propagate_defaults() {
        let c = parse(&["propagate", "--schedule", "plain"]).unwrap();
        assert_eq!(c.command, Command::Propagate);
        assert_eq!(c.schedule, ScheduleKind::Plain);
        assert_eq!(c.base.length, 80.0);
        assert_eq!(c.base.d, 8.0);
        assert_eq!(c.base.s, 80.0 / 6.0);
        assert_eq!(c.base.kappa0, 1.0);
        assert_eq!(c.delta_values, vec![0.0]);
        assert_eq!(c.settings, IntegratorSettings::default());
        assert_eq!(c.format, OutputFormat::Csv);
    }

    #[test]
    fn sweep_cross_product() {
        let c = parse(&["sweep", "--a", "2,5,10", "--delta", "0,1.0"]).unwrap();
        let spec = c.sweep_spec();
        assert_eq!(spec.a_values.len() * spec.delta_values.len(), 6);
        assert_eq!(spec.schedule_kind, ScheduleKind::GaussianApprox);
    }

    #[test]
    fn sweep_defaults_follow_kappa0() {
        let c = parse(&["sweep", "--kappa0", "2"]).unwrap();
        assert_eq!(c.delta_values, vec![0.0, 2.0]);
        assert_eq!(c.a_values.len(), 11);
    }

    #[test]
    fn rejects_small_contraction() {
        let err = parse(&["propagate", "--a", "0.5"]).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains('a'));
    }

    #[test]
    fn unknown_flag_is_usage_error() {
        let err = parse(&["propagate", "--bogus", "1"]).unwrap_err();
        assert!(matches!(err, CliError::Usage(_)));
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn negative_detuning_parses() {
        let c = parse(&["propagate", "--delta", "-0.5"]).unwrap();
        assert_eq!(c.delta_values, vec![-0.5]);
    }

    #[test]
    fn length_rescales_default_geometry() {
        let c = parse(&["profile", "--L", "40"]).unwrap();
        assert_eq!((c.base.d, c.base.s), (4.0, 40.0 / 6.0));
    }

    #[test]
    fn invalid_geometry_names_field() {
        let err = parse(&["propagate", "--d", "50"]).unwrap_err();
        assert!(matches!(&err, CliError::Validation { field, .. } if field == "d"));
        let err = parse(&["propagate", "--steps", "10"]).unwrap_err();
        assert!(matches!(&err, CliError::Validation { field, .. } if field == "steps"));
    }

    #[test]
    fn lists_only_for_sweep() {
        assert!(parse(&["propagate", "--a", "2,3"]).is_err());
    }

    #[test]
    fn config_text_layering() {
        let f = parse_config_text("# comment\nschedule = tr\na = 4\nkappa0 = 2.5 # trailing\n\nL = 60\n").unwrap();
        assert_eq!(f.a, vec![4.0]);
        assert_eq!(f.kappa0, Some(2.5));
        let mut layered = f;
        layered.merge(Flags { kappa0: Some(3.0), ..Flags::default() });
        let c = resolve(Command::Propagate, layered).unwrap();
        assert_eq!(c.schedule, ScheduleKind::TimeRescaled);
        assert_eq!(c.base.kappa0, 3.0);
        assert_eq!(c.a_values, vec![4.0]);
        assert_eq!(c.base.length, 60.0);
    }

    #[test]
    fn config_text_errors() {
        assert!(matches!(parse_config_text("colour = red"), Err(CliError::Usage(_))));
        assert!(matches!(parse_config_text("just words"), Err(CliError::Usage(_))));
        assert!(matches!(parse_config_text("kappa0 = lots"), Err(CliError::Validation { .. })));
        assert!(matches!(parse_config_text("schedule = zigzag"), Err(CliError::Validation { .. })));
    }

    #[test]
    fn svg_requires_out() {
        assert!(parse(&["propagate", "--format", "svg"]).is_err());
    }
}
