//! `nanofiber`: solve the HE11 mode of a step-index fiber and export field
//! profiles as CSV or JSON.
//!
//! Exit codes: 0 success, 1 I/O or encoding failure, 2 usage or validation
//! error, 3 solver failure.

use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nanofiber::exec::Execution;
use nanofiber::field::{Polarization, Sense};
use nanofiber::figures;
use nanofiber::mode::{solve_fundamental, FiberSpec, ModeError, Normalization};
use nanofiber::profile::{
    self, AzimuthalConfig, Column, Direction, Format, GridConfig, MapConfig, ModeConfig, ProfileError, RadialConfig,
    DEFAULT_GRID_EXTENT, DEFAULT_GRID_RESOLUTION,
};

#[derive(Parser)]
#[command(
    name = "nanofiber",
    version,
    about = "HE11 mode solver and field-profile exporter for step-index fibers"
)]
struct Cli {
    /// Evaluate on one thread instead of the rayon pool.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the fundamental mode and print its scalars.
    Solve {
        #[command(flatten)]
        fiber: FiberArgs,
        /// Print JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Sample |E|² and friends along one or more radial lines.
    Radial {
        #[command(flatten)]
        mode: ModeArgs,
        /// x, y, diagonal, or an azimuth in radians (repeatable).
        #[arg(long = "direction", default_value = "x")]
        directions: Vec<Direction>,
        /// Outer radius in units of the core radius.
        #[arg(long, default_value_t = 5.0)]
        r_max: f64,
        #[arg(long, default_value_t = 501)]
        count: usize,
        #[arg(long, value_delimiter = ',', default_value = "intensity,intensity_lp01")]
        columns: Vec<Column>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Sample around circles of fixed radius.
    Azimuthal {
        #[command(flatten)]
        mode: ModeArgs,
        /// Radius in units of the core radius (repeatable).
        #[arg(long = "radius", required = true)]
        radii: Vec<f64>,
        #[arg(long, default_value_t = 360)]
        count: usize,
        #[arg(long, value_delimiter = ',', default_value = "intensity")]
        columns: Vec<Column>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Sample a square cross-section grid.
    Map {
        #[command(flatten)]
        mode: ModeArgs,
        /// Half-width of the grid in units of the core radius.
        #[arg(long, default_value_t = DEFAULT_GRID_EXTENT)]
        extent: f64,
        /// Points per side.
        #[arg(long, default_value_t = DEFAULT_GRID_RESOLUTION)]
        resolution: usize,
        #[arg(long, value_delimiter = ',', default_value = "intensity")]
        columns: Vec<Column>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Write the data behind all eleven reference figures into a directory.
    Figures {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
    },
}

#[derive(Args)]
struct FiberArgs {
    /// Core radius in micrometers.
    #[arg(long)]
    radius_um: f64,
    /// Vacuum wavelength in micrometers.
    #[arg(long)]
    wavelength_um: f64,
    /// Core refractive index.
    #[arg(long)]
    n1: f64,
    /// Cladding refractive index.
    #[arg(long, default_value_t = 1.0)]
    n2: f64,
}

impl FiberArgs {
    fn spec(&self) -> Result<FiberSpec, ModeError> {
        FiberSpec::new(self.radius_um, self.wavelength_um, self.n1, self.n2)
    }
}

#[derive(Args)]
struct ModeArgs {
    #[command(flatten)]
    fiber: FiberArgs,
    #[arg(long, value_enum, default_value_t = PolarizationArg::QuasiLinear)]
    polarization: PolarizationArg,
    /// Polarization axis of the quasi-linear mode, radians from x.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    phi0: f64,
    /// Circulation of the rotating mode.
    #[arg(long, value_enum, default_value_t = SenseArg::Clockwise)]
    sense: SenseArg,
    #[arg(long, value_enum, default_value_t = NormalizationArg::UnitAmplitude)]
    normalization: NormalizationArg,
}

impl ModeArgs {
    fn config(&self) -> Result<ModeConfig, ModeError> {
        let polarization = match self.polarization {
            PolarizationArg::QuasiLinear => Polarization::QuasiLinear { phi0: self.phi0 },
            PolarizationArg::Rotating => Polarization::Rotating {
                sense: match self.sense {
                    SenseArg::Clockwise => Sense::Clockwise,
                    SenseArg::Counterclockwise => Sense::Counterclockwise,
                },
            },
        };
        let normalization = match self.normalization {
            NormalizationArg::UnitAmplitude => Normalization::UnitAmplitude,
            NormalizationArg::UnitPeak => Normalization::UnitPeak,
            NormalizationArg::UnitCrossSectionIntegral => Normalization::UnitCrossSectionIntegral,
        };
        Ok(ModeConfig {
            spec: self.fiber.spec()?,
            polarization,
            normalization,
        })
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Destination file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Defaults to the extension of --out, else csv.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

impl OutputArgs {
    fn format(&self) -> Format {
        let from_extension = || {
            self.out
                .as_deref()
                .and_then(Path::extension)
                .filter(|e| *e == "json")
                .map(|_| FormatArg::Json)
        };
        self.format.or_else(from_extension).unwrap_or(FormatArg::Csv).into()
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum PolarizationArg {
    QuasiLinear,
    Rotating,
}

#[derive(Clone, Copy, ValueEnum)]
enum SenseArg {
    Clockwise,
    Counterclockwise,
}

#[derive(Clone, Copy, ValueEnum)]
#[allow(clippy::enum_variant_names)]
enum NormalizationArg {
    UnitAmplitude,
    UnitPeak,
    UnitCrossSectionIntegral,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

fn exit_code(err: &ProfileError) -> u8 {
    match err {
        ProfileError::Validation(_) => 2,
        ProfileError::Mode(ModeError::InvalidSpec(_) | ModeError::InvalidIndices { .. }) => 2,
        ProfileError::Mode(_) => 3,
        ProfileError::Io { .. } | ProfileError::Csv(_) | ProfileError::Json(_) | ProfileError::Parse(_) => 1,
    }
}

fn print_solution(spec: &FiberSpec, json: bool) -> Result<(), ProfileError> {
    let sol = solve_fundamental(spec)?;
    let summary = sol.summary();
    let mut out = io::stdout().lock();
    let io_err = |source| ProfileError::Io {
        path: PathBuf::from("<stdout>"),
        source,
    };
    if json {
        let value = serde_json::json!({ "spec": spec, "solution": summary });
        serde_json::to_writer_pretty(&mut out, &value)?;
        writeln!(out).map_err(io_err)?;
        return Ok(());
    }
    let lines = [
        ("beta_um^-1", summary.beta.to_string()),
        ("h_um^-1", summary.h.to_string()),
        ("q_um^-1", summary.q.to_string()),
        ("ha", summary.ha.to_string()),
        ("qa", summary.qa.to_string()),
        ("beta_a", summary.beta_a.to_string()),
        ("s", summary.s.to_string()),
        ("V", summary.v.to_string()),
        ("penetration_length_um", summary.penetration_length.to_string()),
        (
            "penetration_length_over_a",
            summary.penetration_length_over_a.to_string(),
        ),
        ("single_mode (V < 2.405)", summary.single_mode.to_string()),
        ("trap_condition (qa < 0.93)", summary.trap_condition.to_string()),
    ];
    for (key, value) in lines {
        writeln!(out, "{key:<28}{value}").map_err(io_err)?;
    }
    Ok(())
}

fn emit(config: MapConfig, output: &OutputArgs, exec: Execution) -> Result<(), ProfileError> {
    let map = profile::sample(&config, exec)?;
    let format = output.format();
    match &output.out {
        Some(path) => profile::export(&map, format, path),
        None => {
            let stdout = io::stdout().lock();
            match format {
                Format::Csv => profile::write_csv(&map, stdout),
                Format::Json => profile::write_json(&map, stdout),
            }
        }
    }
}

fn run(cli: Cli) -> Result<(), ProfileError> {
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    match cli.command {
        Command::Solve { fiber, json } => print_solution(&fiber.spec()?, json),
        Command::Radial {
            mode,
            directions,
            r_max,
            count,
            columns,
            output,
        } => {
            let config = MapConfig::Radial(RadialConfig {
                mode: mode.config()?,
                directions,
                r_max,
                count,
                columns,
            });
            emit(config, &output, exec)
        }
        Command::Azimuthal {
            mode,
            radii,
            count,
            columns,
            output,
        } => {
            let config = MapConfig::Azimuthal(AzimuthalConfig {
                mode: mode.config()?,
                radii,
                count,
                columns,
            });
            emit(config, &output, exec)
        }
        Command::Map {
            mode,
            extent,
            resolution,
            columns,
            output,
        } => {
            let config = MapConfig::Grid2d(GridConfig {
                mode: mode.config()?,
                extent,
                resolution,
                columns,
            });
            emit(config, &output, exec)
        }
        Command::Figures { out, format } => {
            for path in figures::write_all(&out, format.into(), exec)? {
                println!("{}", path.display());
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
