//! Sampled radial, azimuthal and cross-section maps of the mode, and their
//! CSV / JSON export.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::Execution;
use crate::field::{self, Polarization, PolarizationFamily};
use crate::mode::{self, FiberSpec, ModeError, ModeShape, ModeSolution, Normalization, SolutionSummary};

/// Upper bound on grid points per map (4096²).
pub const MAX_GRID_POINTS: usize = 4096 * 4096;

pub const TOOL_VERSION: &str = concat!("nanofiber ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Error)]
pub enum ProfileError {
    #[error("invalid configuration: {0}")]
    Validation(String),
    #[error(transparent)]
    Mode(#[from] ModeError),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed field map: {0}")]
    Parse(String),
}

fn invalid(msg: impl Into<String>) -> ProfileError {
    ProfileError::Validation(msg.into())
}

/// Quantities a map can carry. `Theta` needs the quasi-linear mode and
/// `Epsilon` the rotating one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Column {
    #[serde(rename = "intensity")]
    Intensity,
    #[serde(rename = "ex2")]
    Ex2,
    #[serde(rename = "ey2")]
    Ey2,
    #[serde(rename = "ez2")]
    Ez2,
    #[serde(rename = "er2")]
    Er2,
    #[serde(rename = "ephi2")]
    Ephi2,
    #[serde(rename = "theta")]
    Theta,
    #[serde(rename = "epsilon")]
    Epsilon,
    #[serde(rename = "intensity_lp01")]
    IntensityLp01,
}

impl Column {
    pub const ALL: [Column; 9] = [
        Column::Intensity,
        Column::Ex2,
        Column::Ey2,
        Column::Ez2,
        Column::Er2,
        Column::Ephi2,
        Column::Theta,
        Column::Epsilon,
        Column::IntensityLp01,
    ];

    /// Every intensity-valued column.
    pub const INTENSITIES: [Column; 7] = [
        Column::Intensity,
        Column::Ex2,
        Column::Ey2,
        Column::Ez2,
        Column::Er2,
        Column::Ephi2,
        Column::IntensityLp01,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Column::Intensity => "intensity",
            Column::Ex2 => "ex2",
            Column::Ey2 => "ey2",
            Column::Ez2 => "ez2",
            Column::Er2 => "er2",
            Column::Ephi2 => "ephi2",
            Column::Theta => "theta",
            Column::Epsilon => "epsilon",
            Column::IntensityLp01 => "intensity_lp01",
        }
    }

    fn needs_field(self) -> bool {
        matches!(
            self,
            Column::Ex2 | Column::Ey2 | Column::Ez2 | Column::Er2 | Column::Ephi2 | Column::Theta
        )
    }
}

impl fmt::Display for Column {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Column {
    type Err = ProfileError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Column::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| invalid(format!("unknown column '{s}'")))
    }
}

/// Radial sampling direction, as an azimuth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    /// φ = 0
    X,
    /// φ = π/2
    Y,
    /// φ = π/4
    Diagonal,
    Azimuth(f64),
}

impl Direction {
    pub fn angle(self) -> f64 {
        match self {
            Direction::X => 0.0,
            Direction::Y => FRAC_PI_2,
            Direction::Diagonal => FRAC_PI_4,
            Direction::Azimuth(phi) => phi,
        }
    }

    pub fn label(self) -> String {
        match self {
            Direction::X => "x".into(),
            Direction::Y => "y".into(),
            Direction::Diagonal => "diagonal".into(),
            Direction::Azimuth(phi) => format!("phi={phi}"),
        }
    }
}

impl FromStr for Direction {
    type Err = ProfileError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "x" => Ok(Direction::X),
            "y" => Ok(Direction::Y),
            "diagonal" => Ok(Direction::Diagonal),
            other => other
                .strip_prefix("phi=")
                .unwrap_or(other)
                .parse::<f64>()
                .map(Direction::Azimuth)
                .map_err(|_| {
                    invalid(format!(
                        "unknown direction '{s}' (x, y, diagonal or an azimuth in radians)"
                    ))
                }),
        }
    }
}

/// Fiber, polarization and normalization shared by every map kind.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeConfig {
    pub spec: FiberSpec,
    pub polarization: Polarization,
    #[serde(default)]
    pub normalization: Normalization,
}

/// `count` uniform samples of `r` on `[0, r_max·a]` along each direction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialConfig {
    pub mode: ModeConfig,
    pub directions: Vec<Direction>,
    /// In units of the core radius.
    pub r_max: f64,
    pub count: usize,
    pub columns: Vec<Column>,
}

/// `count` uniform samples of φ on `[0, 2π)` at each radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AzimuthalConfig {
    pub mode: ModeConfig,
    /// In units of the core radius.
    pub radii: Vec<f64>,
    pub count: usize,
    pub columns: Vec<Column>,
}

/// `resolution × resolution` Cartesian grid over `[-extent·a, extent·a]²`,
/// stored row-major with `y` as the slow index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    pub mode: ModeConfig,
    /// In units of the core radius.
    pub extent: f64,
    pub resolution: usize,
    pub columns: Vec<Column>,
}

pub const DEFAULT_GRID_EXTENT: f64 = 3.0;
pub const DEFAULT_GRID_RESOLUTION: usize = 201;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MapConfig {
    Radial(RadialConfig),
    Azimuthal(AzimuthalConfig),
    Grid2d(GridConfig),
}

impl MapConfig {
    pub fn mode(&self) -> &ModeConfig {
        match self {
            MapConfig::Radial(c) => &c.mode,
            MapConfig::Azimuthal(c) => &c.mode,
            MapConfig::Grid2d(c) => &c.mode,
        }
    }

    pub fn kind(&self) -> MapKind {
        match self {
            MapConfig::Radial(_) => MapKind::Radial,
            MapConfig::Azimuthal(_) => MapKind::Azimuthal,
            MapConfig::Grid2d(_) => MapKind::Grid2d,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MapKind {
    Radial,
    Azimuthal,
    Grid2d,
}

/// Everything needed to regenerate a map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub tool: String,
    pub config: MapConfig,
    pub solution: SolutionSummary,
    pub shape: ModeShape,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldMap {
    pub metadata: Metadata,
    pub axes: IndexMap<String, Vec<f64>>,
    pub columns: IndexMap<String, Vec<f64>>,
}

impl FieldMap {
    pub fn kind(&self) -> MapKind {
        self.metadata.config.kind()
    }

    /// Number of samples (rows in the CSV form).
    pub fn len(&self) -> usize {
        self.columns.values().next().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns.get(name).map(Vec::as_slice)
    }

    pub fn axis(&self, name: &str) -> Option<&[f64]> {
        self.axes.get(name).map(Vec::as_slice)
    }

    /// Checks that axes and columns have consistent lengths.
    pub fn validate(&self) -> Result<(), ProfileError> {
        if self.columns.is_empty() {
            return Err(invalid("field map has no columns"));
        }
        let rows = match self.kind() {
            MapKind::Grid2d => self.axes.values().map(Vec::len).product(),
            _ => self.axes.values().next().map_or(0, Vec::len),
        };
        for (name, values) in &self.columns {
            if values.len() != rows {
                return Err(invalid(format!(
                    "column '{name}' has {} values, axes imply {rows}",
                    values.len()
                )));
            }
        }
        Ok(())
    }
}

/// A solved mode ready for point evaluation.
#[derive(Debug, Clone, Copy)]
pub struct PreparedMode {
    pub config: ModeConfig,
    pub solution: ModeSolution,
    pub shape: ModeShape,
}

impl PreparedMode {
    pub fn new(config: ModeConfig) -> Result<Self, ProfileError> {
        let solution = mode::solve_fundamental(&config.spec)?;
        let shape = mode::mode_shape(&solution, config.normalization)?;
        Ok(Self {
            config,
            solution,
            shape,
        })
    }

    /// Values of `columns` at `(r, phi)`; `r` in micrometers. Missing
    /// orientation angles are NaN.
    pub fn evaluate(&self, columns: &[Column], r: f64, phi: f64) -> Vec<f64> {
        let (shape, sol) = (&self.shape, &self.solution);
        let pol = self.config.polarization;
        let vector = columns
            .iter()
            .any(|c| c.needs_field())
            .then(|| field::field(shape, sol, r, phi, pol));
        let component = |f: fn(&field::FieldVector) -> f64| vector.as_ref().map_or(f64::NAN, f);
        columns
            .iter()
            .map(|column| match column {
                Column::Intensity => field::intensity(shape, sol, r, phi, pol),
                Column::Ex2 => component(|e| e.ex.norm_sqr()),
                Column::Ey2 => component(|e| e.ey.norm_sqr()),
                Column::Ez2 => component(|e| e.ez.norm_sqr()),
                Column::Er2 => component(|e| e.er.norm_sqr()),
                Column::Ephi2 => component(|e| e.ephi.norm_sqr()),
                Column::Theta => vector
                    .as_ref()
                    .and_then(field::transverse_orientation)
                    .unwrap_or(f64::NAN),
                Column::Epsilon => field::ellipticity_rotating(shape, sol, r).epsilon.unwrap_or(f64::NAN),
                Column::IntensityLp01 => field::intensity_lp01(shape, sol, r, pol.family()),
            })
            .collect()
    }

    fn metadata(&self, config: MapConfig) -> Metadata {
        Metadata {
            tool: TOOL_VERSION.to_string(),
            config,
            solution: self.solution.summary(),
            shape: self.shape,
        }
    }
}

fn validate_columns(columns: &[Column], family: PolarizationFamily) -> Result<(), ProfileError> {
    if columns.is_empty() {
        return Err(invalid("no columns requested"));
    }
    for (i, c) in columns.iter().enumerate() {
        if columns[..i].contains(c) {
            return Err(invalid(format!("column '{c}' requested twice")));
        }
        match (c, family) {
            (Column::Theta, PolarizationFamily::Rotating) => {
                return Err(invalid("theta is defined for the quasi-linear mode only"))
            }
            (Column::Epsilon, PolarizationFamily::QuasiLinear) => {
                return Err(invalid("epsilon is defined for the rotating mode only"))
            }
            _ => {}
        }
    }
    Ok(())
}

fn validate_mode(mode: &ModeConfig) -> Result<(), ProfileError> {
    if let Polarization::QuasiLinear { phi0 } = mode.polarization {
        if !phi0.is_finite() {
            return Err(invalid("phi0 must be finite"));
        }
    }
    Ok(())
}

/// Uniform samples `lo + (hi - lo) i / (n - 1)`, endpoints exact.
fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            if i + 1 == n {
                hi
            } else {
                lo + (hi - lo) * (i as f64 / (n - 1) as f64)
            }
        })
        .collect()
}

/// Transposes row-major point values into named columns.
fn into_columns(names: Vec<String>, rows: Vec<Vec<f64>>, width: usize) -> IndexMap<String, Vec<f64>> {
    let mut columns: Vec<Vec<f64>> = (0..width).map(|_| Vec::with_capacity(rows.len())).collect();
    for row in rows {
        for (column, value) in columns.iter_mut().zip(row) {
            column.push(value);
        }
    }
    names.into_iter().zip(columns).collect()
}

fn suffixed(columns: &[Column], suffixes: &[String]) -> Vec<String> {
    if suffixes.len() == 1 {
        columns.iter().map(|c| c.name().to_string()).collect()
    } else {
        suffixes
            .iter()
            .flat_map(|s| columns.iter().map(move |c| format!("{c}@{s}")))
            .collect()
    }
}

pub fn sample_radial(config: &RadialConfig) -> Result<FieldMap, ProfileError> {
    sample_radial_with(config, Execution::default())
}

pub fn sample_radial_with(config: &RadialConfig, exec: Execution) -> Result<FieldMap, ProfileError> {
    validate_mode(&config.mode)?;
    validate_columns(&config.columns, config.mode.polarization.family())?;
    if config.count < 2 {
        return Err(invalid("radial sampling needs count >= 2"));
    }
    if !(config.r_max.is_finite() && config.r_max > 0.0) {
        return Err(invalid("r_max must be positive"));
    }
    if config.directions.is_empty() {
        return Err(invalid("at least one direction is required"));
    }
    let prepared = PreparedMode::new(config.mode)?;
    let a = prepared.solution.core_radius();
    let axis = linspace(0.0, config.r_max, config.count);
    let angles: Vec<f64> = config.directions.iter().map(|d| d.angle()).collect();
    let rows = exec.map_range(axis.len(), |i| {
        angles
            .iter()
            .flat_map(|&phi| prepared.evaluate(&config.columns, axis[i] * a, phi))
            .collect::<Vec<f64>>()
    });
    let labels: Vec<String> = config.directions.iter().map(|d| d.label()).collect();
    let names = suffixed(&config.columns, &labels);
    let width = names.len();
    Ok(FieldMap {
        metadata: prepared.metadata(MapConfig::Radial(config.clone())),
        axes: IndexMap::from([("r_over_a".to_string(), axis)]),
        columns: into_columns(names, rows, width),
    })
}

pub fn sample_azimuthal(config: &AzimuthalConfig) -> Result<FieldMap, ProfileError> {
    sample_azimuthal_with(config, Execution::default())
}

pub fn sample_azimuthal_with(config: &AzimuthalConfig, exec: Execution) -> Result<FieldMap, ProfileError> {
    validate_mode(&config.mode)?;
    validate_columns(&config.columns, config.mode.polarization.family())?;
    if config.count < 4 {
        return Err(invalid("azimuthal sampling needs count >= 4"));
    }
    if config.radii.is_empty() {
        return Err(invalid("at least one radius is required"));
    }
    if let Some(r) = config.radii.iter().find(|r| !(r.is_finite() && **r >= 0.0)) {
        return Err(invalid(format!("radius {r} must be finite and non-negative")));
    }
    let prepared = PreparedMode::new(config.mode)?;
    let a = prepared.solution.core_radius();
    // φ/π on [0, 2): the endpoint 2π is excluded.
    let axis: Vec<f64> = (0..config.count)
        .map(|i| 2.0 * (i as f64 / config.count as f64))
        .collect();
    let rows = exec.map_range(axis.len(), |i| {
        config
            .radii
            .iter()
            .flat_map(|&r| prepared.evaluate(&config.columns, r * a, axis[i] * PI))
            .collect::<Vec<f64>>()
    });
    let labels: Vec<String> = config.radii.iter().map(|r| format!("r={r}")).collect();
    let names = suffixed(&config.columns, &labels);
    let width = names.len();
    Ok(FieldMap {
        metadata: prepared.metadata(MapConfig::Azimuthal(config.clone())),
        axes: IndexMap::from([("phi_over_pi".to_string(), axis)]),
        columns: into_columns(names, rows, width),
    })
}

pub fn sample_grid2d(config: &GridConfig) -> Result<FieldMap, ProfileError> {
    sample_grid2d_with(config, Execution::default())
}

pub fn sample_grid2d_with(config: &GridConfig, exec: Execution) -> Result<FieldMap, ProfileError> {
    validate_mode(&config.mode)?;
    validate_columns(&config.columns, config.mode.polarization.family())?;
    if config.resolution < 16 {
        return Err(invalid("grid resolution must be at least 16"));
    }
    if config.resolution.saturating_mul(config.resolution) > MAX_GRID_POINTS {
        return Err(invalid(format!(
            "grid of {0}x{0} points exceeds the 4096x4096 limit",
            config.resolution
        )));
    }
    if !(config.extent.is_finite() && config.extent > 0.0) {
        return Err(invalid("grid extent must be positive"));
    }
    let prepared = PreparedMode::new(config.mode)?;
    let a = prepared.solution.core_radius();
    let n = config.resolution;
    let axis = linspace(-config.extent, config.extent, n);
    let rows = exec.map_range(n * n, |index| {
        let (x, y) = (axis[index % n], axis[index / n]);
        prepared.evaluate(&config.columns, x.hypot(y) * a, y.atan2(x))
    });
    let names = config.columns.iter().map(|c| c.name().to_string()).collect();
    Ok(FieldMap {
        metadata: prepared.metadata(MapConfig::Grid2d(config.clone())),
        axes: IndexMap::from([("x_over_a".to_string(), axis.clone()), ("y_over_a".to_string(), axis)]),
        columns: into_columns(names, rows, config.columns.len()),
    })
}

/// Samples whatever `config` describes.
pub fn sample(config: &MapConfig, exec: Execution) -> Result<FieldMap, ProfileError> {
    match config {
        MapConfig::Radial(c) => sample_radial_with(c, exec),
        MapConfig::Azimuthal(c) => sample_azimuthal_with(c, exec),
        MapConfig::Grid2d(c) => sample_grid2d_with(c, exec),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

impl FromStr for Format {
    type Err = ProfileError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(invalid(format!("unknown format '{s}' (csv or json)"))),
        }
    }
}

/// 17 significant digits: enough to round-trip every f64.
fn format_number(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_csv<W: Write>(map: &FieldMap, out: W) -> Result<(), ProfileError> {
    map.validate()?;
    let mut out = out;
    let meta = serde_json::to_value(&map.metadata)?;
    if let serde_json::Value::Object(entries) = meta {
        for (key, value) in entries {
            writeln!(out, "# {key}: {value}").map_err(io_error(Path::new("<csv>")))?;
        }
    }
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    let axis_names: Vec<&str> = map.axes.keys().map(String::as_str).collect();
    writer.write_record(axis_names.iter().copied().chain(map.columns.keys().map(String::as_str)))?;

    let mut record = Vec::with_capacity(axis_names.len() + map.columns.len());
    for row in 0..map.len() {
        record.clear();
        match map.kind() {
            MapKind::Grid2d => {
                let n = map.axes[0].len();
                record.push(format_number(map.axes[0][row % n]));
                record.push(format_number(map.axes[1][row / n]));
            }
            _ => record.push(format_number(map.axes[0][row])),
        }
        record.extend(map.columns.values().map(|c| format_number(c[row])));
        writer.write_record(&record)?;
    }
    writer.flush().map_err(io_error(Path::new("<csv>")))?;
    Ok(())
}

pub fn write_json<W: Write>(map: &FieldMap, out: W) -> Result<(), ProfileError> {
    map.validate()?;
    serde_json::to_writer_pretty(out, map)?;
    Ok(())
}

fn io_error(path: &Path) -> impl FnOnce(io::Error) -> ProfileError + '_ {
    move |source| ProfileError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Writes `map` to `path`. Nothing is created when the map fails validation.
pub fn export(map: &FieldMap, format: Format, path: &Path) -> Result<(), ProfileError> {
    map.validate()?;
    let file = File::create(path).map_err(io_error(path))?;
    let mut out = BufWriter::new(file);
    let written = match format {
        Format::Csv => write_csv(map, &mut out),
        Format::Json => write_json(map, &mut out),
    };
    match written {
        Err(ProfileError::Io { source, .. }) => return Err(io_error(path)(source)),
        other => other?,
    }
    out.flush().map_err(io_error(path))
}

#[derive(Deserialize)]
struct JsonMap {
    metadata: Metadata,
    axes: IndexMap<String, Vec<Option<f64>>>,
    columns: IndexMap<String, Vec<Option<f64>>>,
}

fn nulls_to_nan(map: IndexMap<String, Vec<Option<f64>>>) -> IndexMap<String, Vec<f64>> {
    map.into_iter()
        .map(|(k, v)| (k, v.into_iter().map(|x| x.unwrap_or(f64::NAN)).collect()))
        .collect()
}

pub fn read_json<R: io::Read>(input: R) -> Result<FieldMap, ProfileError> {
    let raw: JsonMap = serde_json::from_reader(input)?;
    let map = FieldMap {
        metadata: raw.metadata,
        axes: nulls_to_nan(raw.axes),
        columns: nulls_to_nan(raw.columns),
    };
    map.validate()?;
    Ok(map)
}

pub fn read_csv<R: io::Read>(input: R) -> Result<FieldMap, ProfileError> {
    let mut reader = BufReader::new(input);
    let mut meta = serde_json::Map::new();
    let mut line = String::new();
    let mut header = None;
    loop {
        line.clear();
        if reader.read_line(&mut line).map_err(io_error(Path::new("<csv>")))? == 0 {
            break;
        }
        match line.trim_end_matches('\n').strip_prefix("# ") {
            Some(entry) => {
                let (key, value) = entry
                    .split_once(": ")
                    .ok_or_else(|| ProfileError::Parse(format!("bad metadata line '{entry}'")))?;
                meta.insert(key.to_string(), serde_json::from_str(value)?);
            }
            None => {
                header = Some(line.clone());
                break;
            }
        }
    }
    let header = header.ok_or_else(|| ProfileError::Parse("missing header row".into()))?;
    let metadata: Metadata = serde_json::from_value(serde_json::Value::Object(meta))?;

    let body = io::Cursor::new(header).chain(reader);
    let mut csv_reader = csv::ReaderBuilder::new().from_reader(body);
    let names: Vec<String> = csv_reader.headers()?.iter().map(str::to_string).collect();
    let mut values: Vec<Vec<f64>> = vec![Vec::new(); names.len()];
    for record in csv_reader.records() {
        let record = record?;
        for (slot, field) in values.iter_mut().zip(record.iter()) {
            slot.push(
                field
                    .parse::<f64>()
                    .map_err(|_| ProfileError::Parse(format!("bad number '{field}'")))?,
            );
        }
    }

    let axis_count = if metadata.config.kind() == MapKind::Grid2d {
        2
    } else {
        1
    };
    if names.len() <= axis_count {
        return Err(ProfileError::Parse("no data columns".into()));
    }
    let mut named = names.into_iter().zip(values);
    let mut axes = IndexMap::new();
    if axis_count == 2 {
        let (x_name, xs) = named.next().expect("checked length");
        let (y_name, ys) = named.next().expect("checked length");
        let n = match &metadata.config {
            MapConfig::Grid2d(g) => g.resolution,
            _ => unreachable!(),
        };
        if xs.len() != n * n {
            return Err(ProfileError::Parse(format!(
                "expected {} grid rows, found {}",
                n * n,
                xs.len()
            )));
        }
        axes.insert(x_name, xs[..n].to_vec());
        axes.insert(y_name, ys.iter().step_by(n).copied().collect());
    } else {
        let (name, axis) = named.next().expect("checked length");
        axes.insert(name, axis);
    }
    let map = FieldMap {
        metadata,
        axes,
        columns: named.collect(),
    };
    map.validate()?;
    Ok(map)
}

/// Reads a map written by [`export`], picking the parser from the extension.
pub fn import(path: &Path) -> Result<FieldMap, ProfileError> {
    let file = File::open(path).map_err(io_error(path))?;
    match path.extension().and_then(|e| e.to_str()) {
        Some("json") => read_json(BufReader::new(file)),
        _ => read_csv(BufReader::new(file)),
    }
}

/// Resamples the configuration recorded in a map's metadata.
pub fn regenerate(metadata: &Metadata) -> Result<FieldMap, ProfileError> {
    sample(&metadata.config, Execution::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Sense;

    fn thin_mode(polarization: Polarization) -> ModeConfig {
        ModeConfig {
            spec: FiberSpec::new(0.2, 1.3, 1.4469, 1.0).unwrap(),
            polarization,
            normalization: Normalization::UnitAmplitude,
        }
    }

    fn radial(count: usize, columns: Vec<Column>) -> RadialConfig {
        RadialConfig {
            mode: thin_mode(Polarization::QuasiLinear { phi0: 0.0 }),
            directions: vec![Direction::X],
            r_max: 3.0,
            count,
            columns,
        }
    }

    #[test]
    fn column_names_round_trip() {
        for c in Column::ALL {
            assert_eq!(c.name().parse::<Column>().unwrap(), c);
            assert_eq!(serde_json::to_string(&c).unwrap(), format!("\"{}\"", c.name()));
        }
        assert!("bogus".parse::<Column>().is_err());
    }

    #[test]
    fn direction_parsing() {
        assert_eq!("x".parse::<Direction>().unwrap(), Direction::X);
        assert_eq!("diagonal".parse::<Direction>().unwrap().angle(), FRAC_PI_4);
        assert_eq!("phi=0.5".parse::<Direction>().unwrap(), Direction::Azimuth(0.5));
        assert!("north".parse::<Direction>().is_err());
    }

    #[test]
    fn radial_validation() {
        assert!(matches!(
            sample_radial(&radial(1, vec![Column::Intensity])),
            Err(ProfileError::Validation(_))
        ));
        assert!(sample_radial(&radial(10, vec![])).is_err());
        assert!(sample_radial(&radial(10, vec![Column::Intensity, Column::Intensity])).is_err());
        assert!(sample_radial(&radial(10, vec![Column::Epsilon])).is_err());
        let mut bad = radial(10, vec![Column::Intensity]);
        bad.r_max = 0.0;
        assert!(sample_radial(&bad).is_err());
        bad.r_max = 1.0;
        bad.directions.clear();
        assert!(sample_radial(&bad).is_err());
    }

    #[test]
    fn grid_validation() {
        let mut config = GridConfig {
            mode: thin_mode(Polarization::Rotating {
                sense: Sense::Clockwise,
            }),
            extent: 3.0,
            resolution: 15,
            columns: vec![Column::Intensity],
        };
        assert!(sample_grid2d(&config).is_err());
        config.resolution = 4097;
        let err = sample_grid2d(&config).unwrap_err();
        assert!(err.to_string().contains("4096"), "{err}");
        config.resolution = 16;
        config.extent = -1.0;
        assert!(sample_grid2d(&config).is_err());
        config.extent = 1.0;
        config.columns = vec![Column::Theta];
        assert!(sample_grid2d(&config).is_err());
    }

    #[test]
    fn azimuthal_validation() {
        let mut config = AzimuthalConfig {
            mode: thin_mode(Polarization::QuasiLinear { phi0: 0.0 }),
            radii: vec![1.5],
            count: 3,
            columns: vec![Column::Theta],
        };
        assert!(sample_azimuthal(&config).is_err());
        config.count = 4;
        config.radii = vec![-1.0];
        assert!(sample_azimuthal(&config).is_err());
        config.radii = vec![];
        assert!(sample_azimuthal(&config).is_err());
    }

    #[test]
    fn azimuth_axis_excludes_two_pi() {
        let config = AzimuthalConfig {
            mode: thin_mode(Polarization::QuasiLinear { phi0: 0.0 }),
            radii: vec![1.5],
            count: 8,
            columns: vec![Column::Intensity],
        };
        let map = sample_azimuthal(&config).unwrap();
        let axis = map.axis("phi_over_pi").unwrap();
        assert_eq!(axis, &[0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75]);
    }

    #[test]
    fn multi_direction_columns_are_suffixed() {
        let mut config = radial(5, vec![Column::Intensity, Column::IntensityLp01]);
        config.directions = vec![Direction::X, Direction::Y];
        let map = sample_radial(&config).unwrap();
        let names: Vec<&str> = map.columns.keys().map(String::as_str).collect();
        assert_eq!(
            names,
            ["intensity@x", "intensity_lp01@x", "intensity@y", "intensity_lp01@y"]
        );
    }

    #[test]
    fn csv_layout() {
        let map = sample_radial(&radial(3, vec![Column::Intensity])).unwrap();
        let mut buf = Vec::new();
        write_csv(&map, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        let comments = lines.iter().take_while(|l| l.starts_with('#')).count();
        assert!(comments >= 1);
        assert_eq!(lines[comments], "r_over_a,intensity");
        assert_eq!(lines.len() - comments - 1, 3);
        assert!(lines[comments + 1].starts_with("0.0000000000000000e0,"));
        assert!(!text.contains('\r'));
    }

    #[test]
    fn export_refuses_empty_map() {
        let mut map = sample_radial(&radial(3, vec![Column::Intensity])).unwrap();
        map.columns.clear();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.csv");
        assert!(matches!(
            export(&map, Format::Csv, &path),
            Err(ProfileError::Validation(_))
        ));
        assert!(!path.exists());
    }

    #[test]
    fn io_errors_carry_path() {
        let map = sample_radial(&radial(3, vec![Column::Intensity])).unwrap();
        let path = Path::new("/nonexistent-dir/for/sure/map.csv");
        let err = export(&map, Format::Csv, path).unwrap_err();
        assert!(err.to_string().contains("/nonexistent-dir/for/sure/map.csv"), "{err}");
    }
}
