//! Data behind the eleven standard profiles of the HE11 mode.

use std::fs;
use std::path::{Path, PathBuf};

use crate::exec::Execution;
use crate::field::{Polarization, Sense};
use crate::mode::{FiberSpec, Normalization};
use crate::profile::{
    self, AzimuthalConfig, Column, Direction, Format, GridConfig, MapConfig, ModeConfig, ProfileError, RadialConfig,
    DEFAULT_GRID_EXTENT, DEFAULT_GRID_RESOLUTION,
};

/// Thin vacuum-clad silica fiber: a = 0.2 µm, λ = 1.3 µm.
pub fn thin_fiber() -> FiberSpec {
    FiberSpec::new(0.2, 1.3, 1.4469, 1.0).expect("valid constants")
}

/// Conventional weakly guiding single-mode fiber: a = 4 µm, λ = 1.3 µm.
pub fn conventional_fiber() -> FiberSpec {
    FiberSpec::new(4.0, 1.3, 1.4469, 1.4419).expect("valid constants")
}

/// Radii (in units of a) of the azimuthal cuts: one inside, two outside.
pub const AZIMUTHAL_RADII: [f64; 3] = [0.5, 1.5, 2.0];

const AZIMUTHAL_COUNT: usize = 360;
const RADIAL_COUNT: usize = 501;

#[derive(Debug, Clone)]
pub struct Figure {
    pub number: u8,
    pub name: &'static str,
    pub config: MapConfig,
}

impl Figure {
    pub fn file_name(&self, format: Format) -> String {
        format!("fig{:02}_{}.{}", self.number, self.name, format.extension())
    }
}

fn mode(spec: FiberSpec, polarization: Polarization) -> ModeConfig {
    ModeConfig {
        spec,
        polarization,
        normalization: Normalization::UnitAmplitude,
    }
}

pub fn catalog() -> Vec<Figure> {
    let linear = Polarization::QuasiLinear { phi0: 0.0 };
    let rotating = Polarization::Rotating {
        sense: Sense::Clockwise,
    };
    let thin = thin_fiber();
    let grid = |polarization, columns: &[Column]| {
        MapConfig::Grid2d(GridConfig {
            mode: mode(thin, polarization),
            extent: DEFAULT_GRID_EXTENT,
            resolution: DEFAULT_GRID_RESOLUTION,
            columns: columns.to_vec(),
        })
    };
    let radial = |spec, polarization, directions: &[Direction], r_max, columns: &[Column]| {
        MapConfig::Radial(RadialConfig {
            mode: mode(spec, polarization),
            directions: directions.to_vec(),
            r_max,
            count: RADIAL_COUNT,
            columns: columns.to_vec(),
        })
    };
    let azimuthal = |polarization, columns: &[Column]| {
        MapConfig::Azimuthal(AzimuthalConfig {
            mode: mode(thin, polarization),
            radii: AZIMUTHAL_RADII.to_vec(),
            count: AZIMUTHAL_COUNT,
            columns: columns.to_vec(),
        })
    };
    let components = [Column::Ex2, Column::Ey2, Column::Ez2];
    vec![
        Figure {
            number: 1,
            name: "weakly_guiding_x_profile",
            config: radial(
                conventional_fiber(),
                linear,
                &[Direction::X],
                2.0,
                &[Column::Intensity, Column::Ex2, Column::Ey2, Column::Ez2],
            ),
        },
        Figure {
            number: 2,
            name: "quasilinear_total_map",
            config: grid(linear, &[Column::Intensity]),
        },
        Figure {
            number: 3,
            name: "quasilinear_radial_xy",
            config: radial(
                thin,
                linear,
                &[Direction::X, Direction::Y],
                5.0,
                &[Column::Intensity, Column::IntensityLp01],
            ),
        },
        Figure {
            number: 4,
            name: "quasilinear_components_map",
            config: grid(linear, &components),
        },
        Figure {
            number: 5,
            name: "quasilinear_components_azimuthal",
            config: azimuthal(linear, &components),
        },
        Figure {
            number: 6,
            name: "quasilinear_orientation_angle",
            config: azimuthal(linear, &[Column::Theta]),
        },
        Figure {
            number: 7,
            name: "rotating_total_map",
            config: grid(rotating, &[Column::Intensity]),
        },
        Figure {
            number: 8,
            name: "rotating_radial",
            config: radial(
                thin,
                rotating,
                &[Direction::X],
                5.0,
                &[Column::Intensity, Column::IntensityLp01],
            ),
        },
        Figure {
            number: 9,
            name: "rotating_cylindrical_components",
            config: radial(
                thin,
                rotating,
                &[Direction::X],
                3.0,
                &[Column::Er2, Column::Ephi2, Column::Ez2, Column::Epsilon],
            ),
        },
        Figure {
            number: 10,
            name: "rotating_components_map",
            config: grid(rotating, &components),
        },
        Figure {
            number: 11,
            name: "rotating_components_azimuthal",
            config: azimuthal(rotating, &components),
        },
    ]
}

/// Samples every figure and writes one file per figure into `dir`.
pub fn write_all(dir: &Path, format: Format, exec: Execution) -> Result<Vec<PathBuf>, ProfileError> {
    fs::create_dir_all(dir).map_err(|source| ProfileError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    catalog()
        .iter()
        .map(|figure| {
            let map = profile::sample(&figure.config, exec)?;
            let path = dir.join(figure.file_name(format));
            profile::export(&map, format, &path)?;
            Ok(path)
        })
        .collect()
}
