//! Command-line front end.
//!
//! Parameters resolve in three layers: built-in defaults, then an optional
//! TOML `--config` file, then explicit flags.

use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use thiserror::Error;

use crate::error::Error;
use crate::linkrate::{relay_hop_snr, RelayConfig, RelayProtocol};
use crate::regimes::{find_crossover, Crossover, Curve, RegimeOptions};
use crate::sweep::{
    log_grid, regime_report, run_sweep, ExperimentSpec, Figure, FixedParams, Scheme, SweepError,
    SweepKind, SweepSummary, DEFAULT_GRID_POINTS,
};
use crate::wavefield::{ris_field_diffuser, ris_field_exact, ris_field_mirror, Obliquity};

/// Environment variable naming the default directory for CSV output.
pub const OUTPUT_DIR_ENV: &str = "RISRELAY_OUTPUT_DIR";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_IO: i32 = 4;

/// Regime label tolerance used by `eval`.
const EVAL_REGIME_TOLERANCE_DB: f64 = 1.0;

#[derive(Debug, Parser)]
#[command(
    name = "risrelay",
    version,
    about = "Compare RIS-aided and decode-and-forward relay links in a 2D cylindrical-wave model"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reproduce one of the canned figures and write its CSV.
    Figure {
        /// fig3, fig4-indoor, fig4-outdoor, fig5-indoor or fig5-outdoor
        name: String,
    },
    /// Run a custom sweep and write its CSV.
    Sweep {
        #[arg(long, value_parser = parse_sweep_kind)]
        kind: SweepKind,
        /// First grid value (m, GHz or m of half-length) [default: kind's standard range]
        #[arg(long)]
        grid_start: Option<f64>,
        /// Last grid value, same units as --grid-start
        #[arg(long)]
        grid_end: Option<f64>,
    },
    /// Evaluate every scheme at a single parameter point.
    Eval,
    /// Locate the mirror and diffuser regimes over distance.
    Regimes {
        /// Deviation tolerance in dB
        #[arg(long, default_value_t = 1.0)]
        tolerance_db: f64,
    },
    /// Find where two schemes cross along a sweep.
    Crossover {
        #[arg(long, value_parser = parse_sweep_kind)]
        kind: SweepKind,
        #[arg(long, default_value = "ris_anomalous_exact", value_parser = parse_scheme)]
        scheme_a: Scheme,
        #[arg(long, default_value = "ideal_fd_df", value_parser = parse_scheme)]
        scheme_b: Scheme,
    },
}

fn parse_sweep_kind(s: &str) -> Result<SweepKind, String> {
    s.parse()
}

fn parse_scheme(s: &str) -> Result<Scheme, String> {
    s.parse()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    Csv,
    Records,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObliquityArg {
    PhysicalOptics,
    None,
}

impl From<ObliquityArg> for Obliquity {
    fn from(o: ObliquityArg) -> Self {
        match o {
            ObliquityArg::PhysicalOptics => Obliquity::PhysicalOptics,
            ObliquityArg::None => Obliquity::None,
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct ParamArgs {
    /// Carrier frequency in GHz [default: 28]
    #[arg(long, global = true)]
    pub frequency_ghz: Option<f64>,
    /// Full surface length 2L in meters [default: 1.5]
    #[arg(long, global = true)]
    pub ris_length_m: Option<f64>,
    /// Source-to-surface and surface-to-destination distance d0 in meters [default: 10]
    #[arg(long, global = true)]
    pub distance_m: Option<f64>,
    /// Incidence angle from the surface normal, degrees [default: 45]
    #[arg(long, global = true)]
    pub theta_i_deg: Option<f64>,
    /// Reflection angle from the surface normal, degrees [default: 60]
    #[arg(long, global = true)]
    pub theta_r_deg: Option<f64>,
    /// P/N0 at 1 m in dB [default: 114]
    #[arg(long, global = true)]
    pub ref_snr_db: Option<f64>,
    /// Relay share of the total power, P_R/P [default: 0.5]
    #[arg(long, global = true)]
    pub relay_power_fraction: Option<f64>,
    /// Self-interference coefficient c in I_S = c N0 P_R [default: 10]
    #[arg(long, global = true)]
    pub self_interference_coeff: Option<f64>,
    /// Meta-atom spacing divisor D (spacing lambda/D) [default: 5]
    #[arg(long, global = true)]
    pub element_spacing_divisor: Option<f64>,
    /// Secondary-wavelet weighting [default: physical-optics]
    #[arg(long, global = true, value_enum)]
    pub obliquity: Option<ObliquityArg>,
    /// Comma-separated schemes [default: all seven]
    #[arg(long, global = true, value_delimiter = ',', value_parser = parse_scheme)]
    pub schemes: Option<Vec<Scheme>>,
    /// Points in the log-uniform sweep grid [default: 200]
    #[arg(long, global = true)]
    pub grid_points: Option<usize>,
    /// Output CSV path [default: $RISRELAY_OUTPUT_DIR/<name>.csv, else ./<name>.csv]
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Output format [default: csv]
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    /// TOML file with any of the above keys (snake_case)
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

/// Keys accepted in a `--config` file; each mirrors a flag.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub frequency_ghz: Option<f64>,
    pub ris_length_m: Option<f64>,
    pub distance_m: Option<f64>,
    pub theta_i_deg: Option<f64>,
    pub theta_r_deg: Option<f64>,
    pub ref_snr_db: Option<f64>,
    pub relay_power_fraction: Option<f64>,
    pub self_interference_coeff: Option<f64>,
    pub element_spacing_divisor: Option<f64>,
    pub obliquity: Option<ObliquityArg>,
    pub schemes: Option<Vec<String>>,
    pub grid_points: Option<usize>,
    pub output: Option<PathBuf>,
    pub format: Option<OutputFormat>,
}

/// Fully resolved invocation settings.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub fixed: FixedParams,
    pub schemes: Vec<Scheme>,
    pub grid_points: usize,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("validation error: {0}")]
    Validation(Error),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Validation(_) => EXIT_USAGE,
            CliError::Numerical(_) => EXIT_NUMERICAL,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Validation(e)
        }
    }
}

impl From<SweepError> for CliError {
    fn from(e: SweepError) -> Self {
        match e {
            SweepError::Invalid(e) => e.into(),
            e @ SweepError::Cell { .. } => {
                let rows = match &e {
                    SweepError::Cell { completed, .. } => completed.len(),
                    _ => 0,
                };
                let msg = format!("{e} ({rows} rows completed before the failure)");
                if e.is_numerical() {
                    CliError::Numerical(msg)
                } else {
                    CliError::Usage(msg)
                }
            }
        }
    }
}

impl RunConfig {
    pub fn resolve(args: &ParamArgs) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(path) => load_config(path)?,
            None => ConfigFile::default(),
        };
        let d = FixedParams::default();
        let pick =
            |flag: Option<f64>, file: Option<f64>, default: f64| flag.or(file).unwrap_or(default);

        let fixed = FixedParams {
            frequency_hz: pick(args.frequency_ghz, file.frequency_ghz, d.frequency_hz / 1e9) * 1e9,
            ris_length_m: pick(args.ris_length_m, file.ris_length_m, d.ris_length_m),
            distance_m: pick(args.distance_m, file.distance_m, d.distance_m),
            theta_i_deg: pick(args.theta_i_deg, file.theta_i_deg, d.theta_i_deg),
            theta_r_deg: pick(args.theta_r_deg, file.theta_r_deg, d.theta_r_deg),
            reference_snr_db: pick(args.ref_snr_db, file.ref_snr_db, d.reference_snr_db),
            relay_power_fraction: pick(
                args.relay_power_fraction,
                file.relay_power_fraction,
                d.relay_power_fraction,
            ),
            self_interference_coeff: pick(
                args.self_interference_coeff,
                file.self_interference_coeff,
                d.self_interference_coeff,
            ),
            element_spacing_divisor: pick(
                args.element_spacing_divisor,
                file.element_spacing_divisor,
                d.element_spacing_divisor,
            ),
            obliquity: args
                .obliquity
                .or(file.obliquity)
                .map(Obliquity::from)
                .unwrap_or(d.obliquity),
        };
        // Validate every override through the domain constructors up front.
        fixed.scenario()?;

        let schemes = match (&args.schemes, &file.schemes) {
            (Some(s), _) => s.clone(),
            (None, Some(names)) => names
                .iter()
                .map(|n| n.parse::<Scheme>())
                .collect::<Result<_, _>>()
                .map_err(CliError::Usage)?,
            (None, None) => Scheme::ALL.to_vec(),
        };
        if schemes.is_empty() {
            return Err(CliError::Usage(
                "--schemes needs at least one scheme".into(),
            ));
        }
        let grid_points = args
            .grid_points
            .or(file.grid_points)
            .unwrap_or(DEFAULT_GRID_POINTS);
        if grid_points < 2 {
            return Err(CliError::Validation(Error::Domain {
                field: "grid_points",
                reason: format!("need at least 2, got {grid_points}"),
            }));
        }
        Ok(Self {
            fixed,
            schemes,
            grid_points,
            output: args.output.clone().or(file.output),
            format: args.format.or(file.format).unwrap_or(OutputFormat::Csv),
        })
    }

    fn output_path(&self, default_name: &str) -> PathBuf {
        if let Some(p) = &self.output {
            return p.clone();
        }
        let dir = std::env::var_os(OUTPUT_DIR_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from("."));
        dir.join(format!("{default_name}.csv"))
    }
}

fn load_config(path: &Path) -> Result<ConfigFile, CliError> {
    let text = std::fs::read_to_string(path)?;
    toml::from_str(&text).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
}

/// Parses `args` (including the program name) and runs the command, returning the exit status.
pub fn run_from_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    match run(&cli, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "risrelay: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let config = RunConfig::resolve(&cli.params)?;
    match &cli.command {
        Command::Figure { name } => {
            let figure: Figure = name.parse().map_err(CliError::Usage)?;
            cmd_figure(figure, &config, out)
        }
        Command::Sweep {
            kind,
            grid_start,
            grid_end,
        } => {
            let spec = sweep_spec(*kind, *grid_start, *grid_end, &config)?;
            let result = run_sweep(&spec)?;
            let path = config.output_path(&format!("sweep-{kind}"));
            emit_sweep(&result, &path, &config, out)
        }
        Command::Eval => cmd_eval(&config, out),
        Command::Regimes { tolerance_db } => cmd_regimes(&config, *tolerance_db, out),
        Command::Crossover {
            kind,
            scheme_a,
            scheme_b,
        } => {
            let spec =
                sweep_spec(*kind, None, None, &config)?.with_schemes(vec![*scheme_a, *scheme_b]);
            let result = run_sweep(&spec)?;
            let grid = result.grid();
            let (a, b) = (
                result.column(*scheme_a).unwrap(),
                result.column(*scheme_b).unwrap(),
            );
            let c = find_crossover(
                &grid,
                Curve::new(scheme_a.name(), &a),
                Curve::new(scheme_b.name(), &b),
                kind.crossover_pick(),
            )?;
            match (config.format, c) {
                (OutputFormat::Records, Crossover::At(r)) => writeln!(
                    out,
                    "crossover={:.12e} below={} above={} sign_changes={}",
                    r.crossover_value, r.scheme_a, r.scheme_b, r.sign_changes
                )?,
                (OutputFormat::Records, Crossover::None { dominant }) => writeln!(
                    out,
                    "crossover=none dominant={}",
                    dominant.as_deref().unwrap_or("tie")
                )?,
                (OutputFormat::Csv, c) => {
                    let summary = SweepSummary {
                        sweep_kind: *kind,
                        crossover: Some(c),
                        ris_at_or_above_relay: None,
                        first_match: None,
                        regimes: None,
                    };
                    write!(out, "{summary}")?
                }
            }
            Ok(())
        }
    }
}

fn sweep_spec(
    kind: SweepKind,
    start: Option<f64>,
    end: Option<f64>,
    config: &RunConfig,
) -> Result<ExperimentSpec, CliError> {
    let (mut a, mut b) = kind.default_range();
    // Frequencies are entered in GHz like --frequency-ghz.
    let unit = if kind == SweepKind::Frequency {
        1e9
    } else {
        1.0
    };
    if let Some(s) = start {
        a = s * unit;
    }
    if let Some(e) = end {
        b = e * unit;
    }
    if !(a.is_finite() && b.is_finite() && a > 0.0 && b > a) {
        return Err(CliError::Usage(format!(
            "grid range must satisfy 0 < start < end, got [{a}, {b}]"
        )));
    }
    Ok(ExperimentSpec::new(kind, config.fixed)
        .with_grid(log_grid(a, b, config.grid_points))
        .with_schemes(config.schemes.clone()))
}

/// Runs a canned figure, writes its CSV and manifest, prints the summary.
pub fn cmd_figure(figure: Figure, config: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let spec = figure.spec(config.fixed);
    let grid = {
        let (a, b) = spec.sweep_kind.default_range();
        log_grid(a, b, config.grid_points)
    };
    let spec = spec.with_grid(grid).with_schemes(config.schemes.clone());
    let result = run_sweep(&spec)?;
    let path = config.output_path(figure.name());
    emit_sweep(&result, &path, config, out)
}

fn emit_sweep(
    result: &crate::sweep::SweepResult,
    path: &Path,
    config: &RunConfig,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let manifest = result.write_csv(path)?;
    let mut summary = result.summary()?;
    if result.spec.sweep_kind == SweepKind::Distance {
        let grid = result.grid();
        let spans_regimes = grid.len() >= 50 && grid[0] <= 1.0 && grid[grid.len() - 1] >= 1000.0;
        if spans_regimes {
            summary.regimes = Some(regime_report(
                &result.spec.fixed,
                &grid,
                &RegimeOptions::default(),
            )?);
        }
    }
    match config.format {
        OutputFormat::Csv => {
            writeln!(out, "wrote {} ({} rows)", path.display(), result.rows.len())?;
            writeln!(out, "wrote {}", manifest.display())?;
            write!(out, "{summary}")?;
        }
        OutputFormat::Records => {
            let mut line = format!("csv={} rows={}", path.display(), result.rows.len());
            match &summary.crossover {
                Some(Crossover::At(c)) => {
                    let _ = write!(line, " crossover={:.12e}", c.crossover_value);
                }
                Some(Crossover::None { .. }) => line.push_str(" crossover=none"),
                None => {}
            }
            if let Some(f) = summary.ris_at_or_above_relay {
                let _ = write!(line, " ris_at_or_above_relay={f:.6}");
            }
            if let Some(v) = summary.first_match {
                let _ = write!(line, " first_match={v:.12e}");
            }
            if let Some(r) = &summary.regimes {
                let show =
                    |b: Option<f64>| b.map_or_else(|| "none".to_owned(), |v| format!("{v:.6e}"));
                let _ = write!(
                    line,
                    " mirror_boundary={} diffuser_boundary={}",
                    show(r.mirror_boundary),
                    show(r.diffuser_boundary)
                );
            }
            writeln!(out, "{line}")?;
        }
    }
    Ok(())
}

/// One line per scheme plus a regime label for the exact surface.
pub fn cmd_eval(config: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let scenario = config.fixed.scenario()?;
    let quadrature = Default::default();
    let mut lines = Vec::new();
    for &scheme in &config.schemes {
        let e = scenario.evaluate(scheme, &quadrature)?;
        let hops = match scheme {
            Scheme::HdDf | Scheme::FdDf | Scheme::IdealFdDf => {
                let protocol = match scheme {
                    Scheme::HdDf => RelayProtocol::HalfDuplexDf,
                    Scheme::FdDf => RelayProtocol::FullDuplexDf,
                    _ => RelayProtocol::IdealFullDuplexDf,
                };
                let cfg = RelayConfig {
                    protocol,
                    relay_power_fraction: config.fixed.relay_power_fraction,
                    self_interference_coefficient: config.fixed.self_interference_coeff,
                };
                let g = &scenario.geometry;
                Some(relay_hop_snr(&scenario.budget, &cfg, g.d_sr(), g.d_rd())?)
            }
            _ => None,
        };
        lines.push((scheme, e, hops));
    }

    let (b, g, ris) = (&scenario.budget, &scenario.geometry, &scenario.anomalous);
    let exact = ris_field_exact(b, g, ris)?.db();
    let to_mirror = exact - ris_field_mirror(b, g, ris.obliquity()).db();
    let to_diffuser = exact - ris_field_diffuser(b, g, ris).db();
    let regime = if to_mirror.abs() <= EVAL_REGIME_TOLERANCE_DB {
        "mirror"
    } else if to_diffuser.abs() <= EVAL_REGIME_TOLERANCE_DB {
        "diffuser"
    } else {
        "transition"
    };
    let db = |x: f64| 10.0 * x.log10();

    match config.format {
        OutputFormat::Csv => {
            writeln!(out, "scheme,snr_db,rate_bps_hz,hop_sr_snr_db,hop_rd_snr_db")?;
            for (s, e, hops) in &lines {
                let (sr, rd) = hops.map_or((String::new(), String::new()), |h| {
                    (
                        format!("{:.6}", db(h.source_to_relay)),
                        format!("{:.6}", db(h.relay_to_destination)),
                    )
                });
                writeln!(out, "{s},{:.6},{:.12},{sr},{rd}", db(e.snr_linear), e.rate)?;
            }
            writeln!(
                out,
                "# regime = {regime} (exact vs mirror {to_mirror:+.3} dB, vs diffuser {to_diffuser:+.3} dB)"
            )?;
            writeln!(out, "# meta_atoms = {}", ris.meta_atom_count(b))?;
        }
        OutputFormat::Records => {
            for (s, e, hops) in &lines {
                let mut line = format!(
                    "scheme={s} snr_linear={:.12e} snr_db={:.9} rate={:.12}",
                    e.snr_linear,
                    db(e.snr_linear),
                    e.rate
                );
                if let Some(h) = hops {
                    let _ = write!(
                        line,
                        " hop_sr_snr_db={:.9} hop_rd_snr_db={:.9}",
                        db(h.source_to_relay),
                        db(h.relay_to_destination)
                    );
                }
                writeln!(out, "{line}")?;
            }
            writeln!(
                out,
                "regime={regime} mirror_deviation_db={to_mirror:.6} diffuser_deviation_db={to_diffuser:.6} meta_atoms={}",
                ris.meta_atom_count(b)
            )?;
        }
    }
    Ok(())
}

fn cmd_regimes(config: &RunConfig, tolerance_db: f64, out: &mut dyn Write) -> Result<(), CliError> {
    if !(tolerance_db.is_finite() && tolerance_db > 0.0) {
        return Err(CliError::Usage(format!(
            "--tolerance-db must be positive, got {tolerance_db}"
        )));
    }
    let (a, b) = SweepKind::Distance.default_range();
    let grid = log_grid(a, b, config.grid_points.max(50));
    let options = RegimeOptions {
        tolerance_db,
        ..RegimeOptions::default()
    };
    let report = regime_report(&config.fixed, &grid, &options)?;
    let show = |b: Option<f64>| b.map_or_else(|| "none".to_owned(), |v| format!("{v:.3}"));
    match config.format {
        OutputFormat::Records => writeln!(
            out,
            "mirror_boundary_m={} diffuser_boundary_m={} tolerance_db={}",
            show(report.mirror_boundary),
            show(report.diffuser_boundary),
            report.tolerance_db
        )?,
        OutputFormat::Csv => {
            writeln!(
                out,
                "mirror regime up to d0 = {} m",
                show(report.mirror_boundary)
            )?;
            writeln!(
                out,
                "diffuser regime from d0 = {} m",
                show(report.diffuser_boundary)
            )?;
            writeln!(out, "tolerance = {} dB", report.tolerance_db)?;
            for d in &report.diagnostics {
                writeln!(out, "note: {d}")?;
            }
        }
    }
    Ok(())
}
