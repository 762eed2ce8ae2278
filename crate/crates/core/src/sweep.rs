//! Parameter sweeps over distance, carrier frequency and surface size.
//!
//! Every grid cell is independent and evaluated in parallel; rows come back in
//! grid order and are bit-identical between runs of the same spec.

use std::fmt::{self, Write as _};
use std::path::Path;
use std::str::FromStr;
use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::Error;
use crate::linkrate::{relay_rate, ris_rate, RelayConfig, RelayProtocol};
use crate::regimes::{
    classify_regimes, find_crossover, Crossover, CrossoverPick, Curve, GeometryTemplate,
    RegimeOptions, RegimeReport,
};
use crate::wavefield::{
    ris_field_diffuser, ris_field_exact_with, ris_field_mirror, LinkBudget, LinkGeometry,
    Obliquity, PhaseProfile, QuadratureSettings, RisProfile,
};

pub const TOOL_NAME: &str = env!("CARGO_PKG_NAME");
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub const DEFAULT_GRID_POINTS: usize = 200;

/// `n` log-uniformly spaced points from `start` to `end` inclusive.
pub fn log_grid(start: f64, end: f64, n: usize) -> Vec<f64> {
    assert!(start > 0.0 && end > start && n >= 2, "invalid log grid");
    let (a, b) = (start.ln(), end.ln());
    (0..n)
        .map(|i| {
            if i == 0 {
                start
            } else if i == n - 1 {
                end
            } else {
                (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

/// `round(2L·D/λ)`.
pub fn meta_atom_count(ris: &RisProfile, budget: &LinkBudget) -> u64 {
    ris.meta_atom_count(budget)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepKind {
    Distance,
    Frequency,
    RisSize,
}

impl SweepKind {
    /// CSV column name of the swept variable.
    pub fn column(&self) -> &'static str {
        match self {
            SweepKind::Distance => "d0_m",
            SweepKind::Frequency => "frequency_hz",
            SweepKind::RisSize => "half_length_m",
        }
    }

    pub fn default_range(&self) -> (f64, f64) {
        match self {
            SweepKind::Distance => (1.0, 1000.0),
            SweepKind::Frequency => (6e9, 100e9),
            SweepKind::RisSize => (0.01, 2.0),
        }
    }

    /// Which crossing to report: the one nearest the electrically small end of the axis.
    pub fn crossover_pick(&self) -> CrossoverPick {
        match self {
            SweepKind::Distance => CrossoverPick::Last,
            SweepKind::Frequency | SweepKind::RisSize => CrossoverPick::First,
        }
    }
}

impl fmt::Display for SweepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepKind::Distance => "distance",
            SweepKind::Frequency => "frequency",
            SweepKind::RisSize => "ris-size",
        })
    }
}

impl FromStr for SweepKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "distance" => Ok(SweepKind::Distance),
            "frequency" => Ok(SweepKind::Frequency),
            "ris-size" | "size" => Ok(SweepKind::RisSize),
            other => Err(format!(
                "unknown sweep kind `{other}` (distance, frequency, ris-size)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Scheme {
    #[serde(rename = "hd_df")]
    HdDf,
    #[serde(rename = "fd_df")]
    FdDf,
    #[serde(rename = "ideal_fd_df")]
    IdealFdDf,
    #[serde(rename = "ris_anomalous_exact")]
    RisAnomalousExact,
    #[serde(rename = "ris_mirror_asymptote")]
    RisMirrorAsymptote,
    #[serde(rename = "ris_diffuser_asymptote")]
    RisDiffuserAsymptote,
    #[serde(rename = "ris_lens")]
    RisLens,
}

impl Scheme {
    pub const ALL: [Scheme; 7] = [
        Scheme::HdDf,
        Scheme::FdDf,
        Scheme::IdealFdDf,
        Scheme::RisAnomalousExact,
        Scheme::RisMirrorAsymptote,
        Scheme::RisDiffuserAsymptote,
        Scheme::RisLens,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Scheme::HdDf => "hd_df",
            Scheme::FdDf => "fd_df",
            Scheme::IdealFdDf => "ideal_fd_df",
            Scheme::RisAnomalousExact => "ris_anomalous_exact",
            Scheme::RisMirrorAsymptote => "ris_mirror_asymptote",
            Scheme::RisDiffuserAsymptote => "ris_diffuser_asymptote",
            Scheme::RisLens => "ris_lens",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        Scheme::ALL
            .into_iter()
            .find(|k| k.name() == s || k.name().replace('_', "-") == s)
            .ok_or_else(|| {
                let names: Vec<_> = Scheme::ALL.iter().map(Scheme::name).collect();
                format!(
                    "unknown scheme `{s}` (expected one of {})",
                    names.join(", ")
                )
            })
    }
}

/// Every link parameter of an experiment; the swept one is overridden per cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixedParams {
    pub frequency_hz: f64,
    /// Full surface length `2L`.
    pub ris_length_m: f64,
    pub distance_m: f64,
    pub theta_i_deg: f64,
    pub theta_r_deg: f64,
    pub reference_snr_db: f64,
    pub relay_power_fraction: f64,
    pub self_interference_coeff: f64,
    pub element_spacing_divisor: f64,
    pub obliquity: Obliquity,
}

impl Default for FixedParams {
    fn default() -> Self {
        Self {
            frequency_hz: 28e9,
            ris_length_m: 1.5,
            distance_m: 10.0,
            theta_i_deg: 45.0,
            theta_r_deg: 60.0,
            reference_snr_db: 114.0,
            relay_power_fraction: RelayConfig::DEFAULT_POWER_FRACTION,
            self_interference_coeff: RelayConfig::DEFAULT_SELF_INTERFERENCE,
            element_spacing_divisor: RisProfile::DEFAULT_SPACING_DIVISOR,
            obliquity: Obliquity::default(),
        }
    }
}

/// Validated domain objects for one parameter point.
#[derive(Debug, Clone, Copy)]
pub struct Scenario {
    pub budget: LinkBudget,
    pub geometry: LinkGeometry,
    pub anomalous: RisProfile,
    pub lens: RisProfile,
    pub relay_power_fraction: f64,
    pub self_interference_coeff: f64,
}

impl FixedParams {
    pub fn with_swept(&self, kind: SweepKind, value: f64) -> Self {
        let mut p = *self;
        match kind {
            SweepKind::Distance => p.distance_m = value,
            SweepKind::Frequency => p.frequency_hz = value,
            SweepKind::RisSize => p.ris_length_m = 2.0 * value,
        }
        p
    }

    pub fn scenario(&self) -> Result<Scenario, Error> {
        let budget = LinkBudget::new(self.frequency_hz, self.reference_snr_db)?;
        let geometry = LinkGeometry::from_degrees(
            self.distance_m,
            self.distance_m,
            self.theta_i_deg,
            self.theta_r_deg,
        )?;
        let anomalous = RisProfile::new(
            self.ris_length_m / 2.0,
            PhaseProfile::AnomalousGradient,
            self.element_spacing_divisor,
        )?
        .with_obliquity(self.obliquity);
        let lens = anomalous.with_phase(PhaseProfile::FocusingLens);
        self.relay_config(RelayProtocol::IdealFullDuplexDf)
            .validate()?;
        Ok(Scenario {
            budget,
            geometry,
            anomalous,
            lens,
            relay_power_fraction: self.relay_power_fraction,
            self_interference_coeff: self.self_interference_coeff,
        })
    }

    fn relay_config(&self, protocol: RelayProtocol) -> RelayConfig {
        RelayConfig {
            protocol,
            relay_power_fraction: self.relay_power_fraction,
            self_interference_coefficient: self.self_interference_coeff,
        }
    }
}

/// Rate of one scheme at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeEvaluation {
    pub rate: f64,
    pub snr_linear: f64,
    /// Integrand samples when the scheme needed the surface integral.
    pub quadrature_samples: Option<usize>,
}

impl Scenario {
    pub fn evaluate(
        &self,
        scheme: Scheme,
        quadrature: &QuadratureSettings,
    ) -> Result<SchemeEvaluation, Error> {
        let (b, g) = (&self.budget, &self.geometry);
        let relay = |protocol| -> Result<SchemeEvaluation, Error> {
            let cfg = RelayConfig {
                protocol,
                relay_power_fraction: self.relay_power_fraction,
                self_interference_coefficient: self.self_interference_coeff,
            };
            let r = relay_rate(b, &cfg, g.d_sr(), g.d_rd())?;
            Ok(SchemeEvaluation {
                rate: r.rate,
                snr_linear: r.snr_linear,
                quadrature_samples: None,
            })
        };
        let surface = |field, samples| {
            let r = ris_rate(b, &field);
            SchemeEvaluation {
                rate: r.rate,
                snr_linear: r.snr_linear,
                quadrature_samples: samples,
            }
        };
        match scheme {
            Scheme::HdDf => relay(RelayProtocol::HalfDuplexDf),
            Scheme::FdDf => relay(RelayProtocol::FullDuplexDf),
            Scheme::IdealFdDf => relay(RelayProtocol::IdealFullDuplexDf),
            Scheme::RisAnomalousExact | Scheme::RisLens => {
                let ris = if scheme == Scheme::RisLens {
                    &self.lens
                } else {
                    &self.anomalous
                };
                let exact = ris_field_exact_with(b, g, ris, quadrature)?;
                Ok(surface(exact.sample, Some(exact.certificate.samples)))
            }
            Scheme::RisMirrorAsymptote => Ok(surface(
                ris_field_mirror(b, g, self.anomalous.obliquity()),
                None,
            )),
            Scheme::RisDiffuserAsymptote => {
                Ok(surface(ris_field_diffuser(b, g, &self.anomalous), None))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub sweep_kind: SweepKind,
    pub fixed: FixedParams,
    pub grid: Vec<f64>,
    pub schemes: Vec<Scheme>,
    #[serde(skip, default)]
    pub quadrature: QuadratureSettings,
}

impl ExperimentSpec {
    /// Default log grid over the kind's standard range, all schemes.
    pub fn new(sweep_kind: SweepKind, fixed: FixedParams) -> Self {
        let (a, b) = sweep_kind.default_range();
        Self {
            sweep_kind,
            fixed,
            grid: log_grid(a, b, DEFAULT_GRID_POINTS),
            schemes: Scheme::ALL.to_vec(),
            quadrature: QuadratureSettings::default(),
        }
    }

    pub fn with_grid(mut self, grid: Vec<f64>) -> Self {
        self.grid = grid;
        self
    }

    pub fn with_schemes(mut self, schemes: Vec<Scheme>) -> Self {
        self.schemes = schemes;
        self
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.grid.len() < 2 {
            return Err(Error::Domain {
                field: "grid",
                reason: format!("need at least two points, got {}", self.grid.len()),
            });
        }
        if self.grid.iter().any(|v| !(v.is_finite() && *v > 0.0))
            || self.grid.windows(2).any(|w| !(w[1] > w[0]))
        {
            return Err(Error::Domain {
                field: "grid",
                reason: "values must be positive and strictly increasing".into(),
            });
        }
        if self.schemes.is_empty() {
            return Err(Error::Domain {
                field: "schemes",
                reason: "select at least one scheme".into(),
            });
        }
        for (i, s) in self.schemes.iter().enumerate() {
            if self.schemes[..i].contains(s) {
                return Err(Error::Domain {
                    field: "schemes",
                    reason: format!("`{s}` listed twice"),
                });
            }
        }
        // Check every cell's parameters before spending time on any of them.
        for &v in [self.grid[0], self.grid[self.grid.len() - 1]].iter() {
            self.fixed.with_swept(self.sweep_kind, v).scenario()?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    /// Rates in bit/s/Hz, in the order of `ExperimentSpec::schemes`.
    pub rates: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepMetadata {
    pub tool: String,
    pub version: String,
    pub timestamp_unix: u64,
    /// Largest integrand sample count used by any cell.
    pub max_quadrature_samples: usize,
    pub total_quadrature_samples: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub spec: ExperimentSpec,
    pub rows: Vec<SweepRow>,
    pub metadata: SweepMetadata,
}

#[derive(Debug, Error)]
pub enum SweepError {
    #[error(transparent)]
    Invalid(#[from] Error),
    #[error("cell {index} ({column} = {value:e}, scheme {scheme}) failed: {source}")]
    Cell {
        index: usize,
        column: &'static str,
        value: f64,
        scheme: Scheme,
        source: Error,
        /// Rows evaluated before the failing cell, in grid order.
        completed: Vec<SweepRow>,
    },
}

impl SweepError {
    pub fn is_numerical(&self) -> bool {
        match self {
            SweepError::Invalid(e) => e.is_numerical(),
            SweepError::Cell { source, .. } => source.is_numerical(),
        }
    }
}

/// Evaluates every (grid point, scheme) cell of `spec` with equidistant placement.
pub fn run_sweep(spec: &ExperimentSpec) -> Result<SweepResult, SweepError> {
    spec.validate()?;
    let cells: Vec<Result<(SweepRow, Vec<usize>), (Scheme, Error)>> = spec
        .grid
        .par_iter()
        .map(|&value| {
            let scenario = spec
                .fixed
                .with_swept(spec.sweep_kind, value)
                .scenario()
                .map_err(|e| (spec.schemes[0], e))?;
            let mut rates = Vec::with_capacity(spec.schemes.len());
            let mut samples = Vec::new();
            for &scheme in &spec.schemes {
                let eval = scenario
                    .evaluate(scheme, &spec.quadrature)
                    .map_err(|e| (scheme, e))?;
                rates.push(eval.rate);
                samples.extend(eval.quadrature_samples);
            }
            Ok((SweepRow { value, rates }, samples))
        })
        .collect();

    let mut rows = Vec::with_capacity(cells.len());
    let mut max_samples = 0;
    let mut total_samples = 0u64;
    for (index, cell) in cells.into_iter().enumerate() {
        match cell {
            Ok((row, samples)) => {
                max_samples = samples.iter().copied().fold(max_samples, usize::max);
                total_samples += samples.iter().map(|&s| s as u64).sum::<u64>();
                rows.push(row);
            }
            Err((scheme, source)) => {
                return Err(SweepError::Cell {
                    index,
                    column: spec.sweep_kind.column(),
                    value: spec.grid[index],
                    scheme,
                    source,
                    completed: rows,
                })
            }
        }
    }
    Ok(SweepResult {
        spec: spec.clone(),
        rows,
        metadata: SweepMetadata {
            tool: TOOL_NAME.into(),
            version: TOOL_VERSION.into(),
            timestamp_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            max_quadrature_samples: max_samples,
            total_quadrature_samples: total_samples,
        },
    })
}

/// Prefix of the only CSV line that varies between identical runs.
pub const TIMESTAMP_PREFIX: &str = "# timestamp_unix = ";

impl SweepResult {
    pub fn column(&self, scheme: Scheme) -> Option<Vec<f64>> {
        let i = self.spec.schemes.iter().position(|&s| s == scheme)?;
        Some(self.rows.iter().map(|r| r.rates[i]).collect())
    }

    pub fn grid(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.value).collect()
    }

    pub fn to_csv(&self) -> String {
        let spec = &self.spec;
        let fixed = &spec.fixed;
        let q = &spec.quadrature;
        let mut out = String::new();
        let _ = writeln!(out, "# {} {}", self.metadata.tool, self.metadata.version);
        let _ = writeln!(out, "{TIMESTAMP_PREFIX}{}", self.metadata.timestamp_unix);
        let _ = writeln!(out, "# sweep = {}", spec.sweep_kind);
        let _ = writeln!(out, "# frequency_hz = {:e}", fixed.frequency_hz);
        let _ = writeln!(out, "# ris_length_m = {}", fixed.ris_length_m);
        let _ = writeln!(out, "# distance_m = {}", fixed.distance_m);
        let _ = writeln!(out, "# theta_i_deg = {}", fixed.theta_i_deg);
        let _ = writeln!(out, "# theta_r_deg = {}", fixed.theta_r_deg);
        let _ = writeln!(out, "# reference_snr_db = {}", fixed.reference_snr_db);
        let _ = writeln!(
            out,
            "# relay_power_fraction = {}",
            fixed.relay_power_fraction
        );
        let _ = writeln!(
            out,
            "# self_interference_coeff = {}",
            fixed.self_interference_coeff
        );
        let _ = writeln!(
            out,
            "# element_spacing_divisor = {}",
            fixed.element_spacing_divisor
        );
        let _ = writeln!(out, "# obliquity = {}", obliquity_name(fixed.obliquity));
        let _ = writeln!(
            out,
            "# quadrature = composite simpson, {} samples per wavelength, relative tolerance {:e}, cap {}",
            q.samples_per_wavelength, q.relative_tolerance, q.max_samples
        );
        let _ = writeln!(
            out,
            "# quadrature_max_samples_used = {}",
            self.metadata.max_quadrature_samples
        );
        let names: Vec<&str> = spec.schemes.iter().map(Scheme::name).collect();
        let _ = writeln!(out, "{},{}", spec.sweep_kind.column(), names.join(","));
        for row in &self.rows {
            out.push_str(&format!("{:.14e}", row.value));
            for r in &row.rates {
                out.push_str(&format!(",{r:.14e}"));
            }
            out.push('\n');
        }
        out
    }

    /// CSV with the timestamp line removed; equal across runs of the same spec.
    pub fn csv_data_section(&self) -> String {
        strip_timestamp(&self.to_csv())
    }

    /// Structured run manifest accompanying the CSV.
    pub fn manifest(&self, csv_file: Option<&str>) -> String {
        #[derive(Serialize)]
        struct Quadrature {
            samples_per_wavelength: usize,
            relative_tolerance: f64,
            max_samples: usize,
        }
        #[derive(Serialize)]
        struct Grid {
            start: f64,
            end: f64,
            points: usize,
        }
        #[derive(Serialize)]
        struct Manifest<'a> {
            #[serde(skip_serializing_if = "Option::is_none")]
            csv: Option<&'a str>,
            sweep_kind: SweepKind,
            schemes: &'a [Scheme],
            grid: Grid,
            fixed: &'a FixedParams,
            quadrature: Quadrature,
            metadata: &'a SweepMetadata,
        }
        let g = &self.spec.grid;
        let q = &self.spec.quadrature;
        let manifest = Manifest {
            csv: csv_file,
            sweep_kind: self.spec.sweep_kind,
            schemes: &self.spec.schemes,
            grid: Grid {
                start: g[0],
                end: g[g.len() - 1],
                points: g.len(),
            },
            fixed: &self.spec.fixed,
            quadrature: Quadrature {
                samples_per_wavelength: q.samples_per_wavelength,
                relative_tolerance: q.relative_tolerance,
                max_samples: q.max_samples,
            },
            metadata: &self.metadata,
        };
        toml::to_string_pretty(&manifest).expect("manifest is plain data")
    }

    /// Writes `path` and a `<stem>.manifest.toml` next to it; returns the manifest path.
    pub fn write_csv(&self, path: &Path) -> std::io::Result<std::path::PathBuf> {
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            std::fs::create_dir_all(parent)?;
        }
        std::fs::write(path, self.to_csv())?;
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("sweep");
        let manifest_path = path.with_file_name(format!("{stem}.manifest.toml"));
        let csv_name = path.file_name().and_then(|s| s.to_str());
        std::fs::write(&manifest_path, self.manifest(csv_name))?;
        Ok(manifest_path)
    }
}

pub fn strip_timestamp(csv: &str) -> String {
    csv.lines()
        .filter(|l| !l.starts_with(TIMESTAMP_PREFIX))
        .map(|l| format!("{l}\n"))
        .collect()
}

fn obliquity_name(o: Obliquity) -> &'static str {
    match o {
        Obliquity::None => "none",
        Obliquity::PhysicalOptics => "physical-optics",
    }
}

/// The canned experiments behind the distance, frequency and size figures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Figure {
    Fig3,
    Fig4Indoor,
    Fig4Outdoor,
    Fig5Indoor,
    Fig5Outdoor,
}

impl Figure {
    pub const ALL: [Figure; 5] = [
        Figure::Fig3,
        Figure::Fig4Indoor,
        Figure::Fig4Outdoor,
        Figure::Fig5Indoor,
        Figure::Fig5Outdoor,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Figure::Fig3 => "fig3",
            Figure::Fig4Indoor => "fig4-indoor",
            Figure::Fig4Outdoor => "fig4-outdoor",
            Figure::Fig5Indoor => "fig5-indoor",
            Figure::Fig5Outdoor => "fig5-outdoor",
        }
    }

    pub fn sweep_kind(&self) -> SweepKind {
        match self {
            Figure::Fig3 => SweepKind::Distance,
            Figure::Fig4Indoor | Figure::Fig4Outdoor => SweepKind::Frequency,
            Figure::Fig5Indoor | Figure::Fig5Outdoor => SweepKind::RisSize,
        }
    }

    /// Indoor runs use `d0 = 10 m`, outdoor `d0 = 100 m`.
    pub fn spec(&self, base: FixedParams) -> ExperimentSpec {
        let mut fixed = base;
        match self {
            Figure::Fig3 => {}
            Figure::Fig4Indoor | Figure::Fig5Indoor => fixed.distance_m = 10.0,
            Figure::Fig4Outdoor | Figure::Fig5Outdoor => fixed.distance_m = 100.0,
        }
        ExperimentSpec::new(self.sweep_kind(), fixed)
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Figure {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Figure::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown figure `{s}` (fig3, fig4-indoor, fig4-outdoor, fig5-indoor, fig5-outdoor)"))
    }
}

/// Rate gap accepted when asking whether the surface matches the ideal relay.
pub const MATCH_TOLERANCE_BPS_HZ: f64 = 0.1;

/// Headline numbers of a sweep: surface against the ideal full-duplex relay.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSummary {
    pub sweep_kind: SweepKind,
    pub crossover: Option<Crossover>,
    /// Fraction of grid points where the exact surface rate is at least the ideal relay rate.
    pub ris_at_or_above_relay: Option<f64>,
    /// Smallest grid value where the surface comes within [`MATCH_TOLERANCE_BPS_HZ`] of the relay.
    pub first_match: Option<f64>,
    pub regimes: Option<RegimeReport>,
}

impl SweepResult {
    pub fn summary(&self) -> Result<SweepSummary, Error> {
        let (Some(ris), Some(relay)) = (
            self.column(Scheme::RisAnomalousExact),
            self.column(Scheme::IdealFdDf),
        ) else {
            return Ok(SweepSummary {
                sweep_kind: self.spec.sweep_kind,
                crossover: None,
                ris_at_or_above_relay: None,
                first_match: None,
                regimes: None,
            });
        };
        let grid = self.grid();
        let crossover = find_crossover(
            &grid,
            Curve::new(Scheme::RisAnomalousExact.name(), &ris),
            Curve::new(Scheme::IdealFdDf.name(), &relay),
            self.spec.sweep_kind.crossover_pick(),
        )?;
        let above =
            ris.iter().zip(&relay).filter(|(r, q)| r >= q).count() as f64 / ris.len() as f64;
        let first_match = grid
            .iter()
            .zip(ris.iter().zip(&relay))
            .find(|(_, (r, q))| **r >= **q - MATCH_TOLERANCE_BPS_HZ)
            .map(|(v, _)| *v);
        Ok(SweepSummary {
            sweep_kind: self.spec.sweep_kind,
            crossover: Some(crossover),
            ris_at_or_above_relay: Some(above),
            first_match,
            regimes: None,
        })
    }
}

/// Mirror/diffuser regime scan for the distance-sweep parameters.
pub fn regime_report(
    fixed: &FixedParams,
    grid: &[f64],
    options: &RegimeOptions,
) -> Result<RegimeReport, Error> {
    let scenario = fixed.scenario()?;
    classify_regimes(
        &scenario.budget,
        &GeometryTemplate::from_degrees(fixed.theta_i_deg, fixed.theta_r_deg),
        &scenario.anomalous,
        grid,
        options,
    )
}

impl fmt::Display for SweepSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let unit = |v: f64| match self.sweep_kind {
            SweepKind::Distance => format!("d0 = {v:.1} m"),
            SweepKind::Frequency => format!("f_c = {:.2} GHz", v / 1e9),
            SweepKind::RisSize => format!("L = {v:.3} m"),
        };
        match &self.crossover {
            Some(Crossover::At(c)) => writeln!(
                f,
                "crossover: {} ({} leads below, {} leads above; {} sign change(s))",
                unit(c.crossover_value),
                c.scheme_a,
                c.scheme_b,
                c.sign_changes
            )?,
            Some(Crossover::None { dominant }) => writeln!(
                f,
                "crossover: none ({} on top throughout)",
                dominant.as_deref().unwrap_or("neither curve")
            )?,
            None => writeln!(
                f,
                "crossover: not computed (needs ris_anomalous_exact and ideal_fd_df)"
            )?,
        }
        if let Some(frac) = self.ris_at_or_above_relay {
            writeln!(
                f,
                "ris_anomalous_exact >= ideal_fd_df at {:.1}% of grid points",
                100.0 * frac
            )?;
        }
        match self.first_match {
            Some(v) => writeln!(
                f,
                "first within {MATCH_TOLERANCE_BPS_HZ} bit/s/Hz of ideal_fd_df: {}",
                unit(v)
            )?,
            None if self.ris_at_or_above_relay.is_some() => writeln!(
                f,
                "never within {MATCH_TOLERANCE_BPS_HZ} bit/s/Hz of ideal_fd_df"
            )?,
            None => {}
        }
        if let Some(r) = &self.regimes {
            let show =
                |b: Option<f64>| b.map_or_else(|| "absent".to_owned(), |v| format!("{v:.1} m"));
            writeln!(
                f,
                "regimes ({} dB): mirror up to {}, diffuser from {}",
                r.tolerance_db,
                show(r.mirror_boundary),
                show(r.diffuser_boundary)
            )?;
            for d in &r.diagnostics {
                writeln!(f, "  note: {d}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(kind: SweepKind, grid: Vec<f64>) -> ExperimentSpec {
        ExperimentSpec::new(kind, FixedParams::default()).with_grid(grid)
    }

    #[test]
    fn log_grid_endpoints_and_spacing() {
        let g = log_grid(1.0, 1000.0, 4);
        assert_eq!(g[0], 1.0);
        assert_eq!(g[3], 1000.0);
        assert!((g[1] - 10.0).abs() < 1e-12 && (g[2] - 100.0).abs() < 1e-10);
    }

    #[test]
    fn two_point_grid_gives_two_rows() {
        let r = run_sweep(&quick(SweepKind::Distance, vec![5.0, 50.0])).unwrap();
        assert_eq!(r.rows.len(), 2);
        assert_eq!(r.rows[0].rates.len(), 7);
        assert!(r
            .rows
            .iter()
            .flat_map(|r| &r.rates)
            .all(|x| x.is_finite() && *x >= 0.0));
    }

    #[test]
    fn schemes_are_independent_columns() {
        let grid = log_grid(2.0, 300.0, 9);
        let full = run_sweep(&quick(SweepKind::Distance, grid.clone())).unwrap();
        let only = run_sweep(
            &quick(SweepKind::Distance, grid).with_schemes(vec![Scheme::RisLens, Scheme::HdDf]),
        )
        .unwrap();
        assert_eq!(only.column(Scheme::RisLens), full.column(Scheme::RisLens));
        assert_eq!(only.column(Scheme::HdDf), full.column(Scheme::HdDf));
        assert!(only.column(Scheme::FdDf).is_none());
    }

    #[test]
    fn csv_layout() {
        let r = run_sweep(&quick(SweepKind::Frequency, vec![10e9, 20e9, 40e9])).unwrap();
        let csv = r.to_csv();
        let data: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(
            data[0],
            "frequency_hz,hd_df,fd_df,ideal_fd_df,ris_anomalous_exact,ris_mirror_asymptote,ris_diffuser_asymptote,ris_lens"
        );
        assert_eq!(data.len(), 4);
        let first: Vec<&str> = data[1].split(',').collect();
        assert_eq!(first.len(), 8);
        // 15 significant digits in scientific notation
        assert_eq!(first[0], "1.00000000000000e10");
        assert!(csv.lines().any(|l| l.starts_with(TIMESTAMP_PREFIX)));
        assert!(!r.csv_data_section().contains("timestamp"));
    }

    #[test]
    fn manifest_is_valid_toml() {
        let r = run_sweep(&quick(SweepKind::RisSize, vec![0.1, 0.2])).unwrap();
        let text = r.manifest(Some("x.csv"));
        let v: toml::Value = toml::from_str(&text).unwrap();
        assert_eq!(v["sweep_kind"].as_str(), Some("ris-size"));
        assert_eq!(v["grid"]["points"].as_integer(), Some(2));
        assert_eq!(v["fixed"]["frequency_hz"].as_float(), Some(28e9));
        assert_eq!(v["csv"].as_str(), Some("x.csv"));
        assert_eq!(v["schemes"].as_array().unwrap().len(), 7);
    }

    #[test]
    fn invalid_specs_are_rejected() {
        assert!(run_sweep(&quick(SweepKind::Distance, vec![5.0])).is_err());
        assert!(run_sweep(&quick(SweepKind::Distance, vec![5.0, 5.0])).is_err());
        assert!(run_sweep(&quick(SweepKind::Distance, vec![0.0, 5.0])).is_err());
        assert!(
            run_sweep(&quick(SweepKind::Distance, vec![1.0, 2.0]).with_schemes(vec![])).is_err()
        );
        let mut bad = quick(SweepKind::Distance, vec![1.0, 2.0]);
        bad.fixed.theta_r_deg = 95.0;
        assert!(matches!(
            run_sweep(&bad),
            Err(SweepError::Invalid(Error::Domain {
                field: "theta_r",
                ..
            }))
        ));
    }

    #[test]
    fn failing_cell_keeps_partial_rows() {
        // At 100 GHz the 1.5 m surface alone needs 8000 intervals, over the cap.
        let mut spec = quick(SweepKind::Frequency, vec![6e9, 7e9, 100e9]);
        spec.quadrature.max_samples = 6000;
        let err = run_sweep(&spec).unwrap_err();
        assert!(err.is_numerical());
        match err {
            SweepError::Cell {
                index,
                completed,
                scheme,
                value,
                ..
            } => {
                assert_eq!(index, 2);
                assert_eq!(value, 100e9);
                assert_eq!(completed.len(), 2);
                assert_eq!(scheme, Scheme::RisAnomalousExact);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn meta_atoms_of_fig3_surface() {
        let b = LinkBudget::new(28e9, 114.0).unwrap();
        let ris = RisProfile::new(0.75, PhaseProfile::AnomalousGradient, 5.0).unwrap();
        assert_eq!(meta_atom_count(&ris, &b), 700);
    }

    #[test]
    fn parse_names() {
        assert_eq!(
            "fig4-outdoor".parse::<Figure>().unwrap(),
            Figure::Fig4Outdoor
        );
        assert!("fig6".parse::<Figure>().is_err());
        assert_eq!("ideal-fd-df".parse::<Scheme>().unwrap(), Scheme::IdealFdDf);
        assert_eq!("ris_lens".parse::<Scheme>().unwrap(), Scheme::RisLens);
        assert_eq!("size".parse::<SweepKind>().unwrap(), SweepKind::RisSize);
    }

    #[test]
    fn figure_specs() {
        let s = Figure::Fig5Outdoor.spec(FixedParams::default());
        assert_eq!(s.sweep_kind, SweepKind::RisSize);
        assert_eq!(s.fixed.distance_m, 100.0);
        assert_eq!(s.grid.len(), DEFAULT_GRID_POINTS);
        assert_eq!((s.grid[0], *s.grid.last().unwrap()), (0.01, 2.0));
        assert_eq!(
            Figure::Fig4Indoor
                .spec(FixedParams::default())
                .fixed
                .distance_m,
            10.0
        );
    }
}
