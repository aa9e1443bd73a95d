use std::f64::consts::PI;
use std::fs;

use nanofiber::exec::Execution;
use nanofiber::field::{Polarization, Sense};
use nanofiber::figures::{self, conventional_fiber, thin_fiber};
use nanofiber::mode::{solve_fundamental, Normalization};
use nanofiber::profile::*;

fn linear() -> ModeConfig {
    ModeConfig {
        spec: thin_fiber(),
        polarization: Polarization::QuasiLinear { phi0: 0.0 },
        normalization: Normalization::UnitAmplitude,
    }
}

fn rotating() -> ModeConfig {
    ModeConfig {
        polarization: Polarization::Rotating {
            sense: Sense::Clockwise,
        },
        ..linear()
    }
}

fn radial(mode: ModeConfig, direction: Direction, r_max: f64, count: usize) -> FieldMap {
    sample_radial(&RadialConfig {
        mode,
        directions: vec![direction],
        r_max,
        count,
        columns: vec![Column::Intensity, Column::IntensityLp01],
    })
    .unwrap()
}

fn last(map: &FieldMap, column: &str) -> f64 {
    *map.column(column).unwrap().last().unwrap()
}

/// Intensity just inside and exactly at the surface along `direction`.
fn surface_ratio(direction: Direction) -> f64 {
    let inside = radial(linear(), direction, 1.0 - 1e-12, 2);
    let outside = radial(linear(), direction, 1.0, 2);
    last(&outside, "intensity") / last(&inside, "intensity")
}

#[test]
fn radial_discontinuity_along_x_only() {
    assert!(surface_ratio(Direction::X) > 2.0);
    assert!((surface_ratio(Direction::Y) - 1.0).abs() < 1e-6);
}

#[test]
fn radial_y_profile_has_outer_peak() {
    let map = radial(linear(), Direction::Y, 5.0, 501);
    let r = map.axis("r_over_a").unwrap();
    let intensity = map.column("intensity").unwrap();
    let peak =
        (1..r.len() - 1).find(|&i| r[i] > 1.0 && intensity[i] > intensity[i - 1] && intensity[i] > intensity[i + 1]);
    let peak = peak.expect("local maximum outside the core");
    assert!(r[peak] < 1.5, "peak at r/a = {}", r[peak]);
}

#[test]
fn radial_axis_and_lengths() {
    let map = radial(linear(), Direction::X, 5.0, 501);
    assert_eq!(map.kind(), MapKind::Radial);
    let r = map.axis("r_over_a").unwrap();
    assert_eq!(r.len(), 501);
    assert_eq!((r[0], r[500]), (0.0, 5.0));
    assert!(r.iter().all(|&x| (0.0..=5.0).contains(&x)));
    for values in map.columns.values() {
        assert_eq!(values.len(), 501);
    }
}

#[test]
fn rotating_azimuthal_cut_is_flat() {
    let map = sample_azimuthal(&AzimuthalConfig {
        mode: rotating(),
        radii: vec![0.5, 1.0, 1.5],
        count: 360,
        columns: vec![Column::Intensity, Column::Er2, Column::Epsilon],
    })
    .unwrap();
    for (name, values) in &map.columns {
        let first = values[0];
        assert!(
            values.iter().all(|v| (v - first).abs() <= 1e-12 * first.abs()),
            "{name} varies with φ"
        );
    }
}

#[test]
fn quasilinear_azimuthal_cut() {
    let map = sample_azimuthal(&AzimuthalConfig {
        mode: linear(),
        radii: vec![0.5, 1.5],
        count: 360,
        columns: vec![Column::Ez2, Column::Theta],
    })
    .unwrap();
    let phi = map.axis("phi_over_pi").unwrap();
    assert_eq!(phi.len(), 360);
    assert!(phi.iter().all(|&p| (0.0..2.0).contains(&p)));
    assert_eq!(phi[90], 0.5);

    let ez = map.column("ez2@r=0.5").unwrap();
    assert!(ez[0] / ez[90] > 1e6);

    let theta = map.column("theta@r=1.5").unwrap();
    let max = theta.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    assert!((max - 0.06 * PI).abs() <= 0.01 * PI);
    let inner = map.column("theta@r=0.5").unwrap();
    assert!(inner.iter().all(|t| t.abs() < 0.01 * PI));
}

fn grid(mode: ModeConfig, columns: Vec<Column>) -> FieldMap {
    sample_grid2d(&GridConfig {
        mode,
        extent: DEFAULT_GRID_EXTENT,
        resolution: DEFAULT_GRID_RESOLUTION,
        columns,
    })
    .unwrap()
}

#[test]
fn quasilinear_grid_mirror_symmetry() {
    let map = grid(linear(), vec![Column::Intensity, Column::Ez2]);
    let n = DEFAULT_GRID_RESOLUTION;
    let x = map.axis("x_over_a").unwrap();
    assert_eq!((x[0], x[n - 1]), (-3.0, 3.0));
    for values in map.columns.values() {
        let at = |i: usize, j: usize| values[j * n + i];
        for j in 0..n {
            for i in 0..n {
                let v = at(i, j);
                let tol = 1e-12 * v.abs().max(1e-300);
                assert!((at(n - 1 - i, j) - v).abs() <= tol);
                assert!((at(i, n - 1 - j) - v).abs() <= tol);
            }
        }
    }
}

#[test]
fn rotating_grid_depends_on_radius_only() {
    let map = grid(rotating(), vec![Column::Intensity]);
    let n = DEFAULT_GRID_RESOLUTION;
    let values = map.column("intensity").unwrap();
    let at = |i: usize, j: usize| values[j * n + i];
    for j in 0..n {
        for i in 0..n {
            let v = at(i, j);
            // Transposition and reflections keep the grid radius.
            for w in [at(j, i), at(n - 1 - i, j), at(n - 1 - j, n - 1 - i)] {
                assert!((w - v).abs() <= 1e-10 * v, "({i}, {j})");
            }
        }
    }
}

#[test]
fn execution_modes_agree_exactly() {
    let config = MapConfig::Grid2d(GridConfig {
        mode: linear(),
        extent: 2.0,
        resolution: 64,
        columns: Column::INTENSITIES.to_vec(),
    });
    let parallel = sample(&config, Execution::Parallel).unwrap();
    let sequential = sample(&config, Execution::Sequential).unwrap();
    let mut a = Vec::new();
    let mut b = Vec::new();
    write_csv(&parallel, &mut a).unwrap();
    write_csv(&sequential, &mut b).unwrap();
    assert_eq!(a, b);
}

fn assert_bit_identical(a: &FieldMap, b: &FieldMap) {
    assert_eq!(a.metadata, b.metadata);
    for (left, right) in [(&a.axes, &b.axes), (&a.columns, &b.columns)] {
        assert_eq!(left.keys().collect::<Vec<_>>(), right.keys().collect::<Vec<_>>());
        for (x, y) in left.values().zip(right.values()) {
            assert_eq!(x.len(), y.len());
            for (p, q) in x.iter().zip(y) {
                assert!(p.to_bits() == q.to_bits() || (p.is_nan() && q.is_nan()), "{p} vs {q}");
            }
        }
    }
}

fn sample_maps() -> Vec<FieldMap> {
    vec![
        sample_radial(&RadialConfig {
            mode: linear(),
            directions: vec![Direction::X, Direction::Y, Direction::Azimuth(0.3)],
            r_max: 4.0,
            count: 97,
            columns: vec![Column::Intensity, Column::Theta, Column::Ex2],
        })
        .unwrap(),
        sample_azimuthal(&AzimuthalConfig {
            mode: ModeConfig {
                normalization: Normalization::UnitPeak,
                ..rotating()
            },
            radii: vec![0.0, 1.0, 2.5],
            count: 72,
            columns: vec![Column::Epsilon, Column::Ephi2],
        })
        .unwrap(),
        sample_grid2d(&GridConfig {
            mode: linear(),
            extent: 1.5,
            resolution: 17,
            columns: vec![Column::Theta, Column::Intensity],
        })
        .unwrap(),
    ]
}

#[test]
fn csv_and_json_round_trip_bit_exactly() {
    let dir = tempfile::tempdir().unwrap();
    for (k, map) in sample_maps().iter().enumerate() {
        for format in [Format::Csv, Format::Json] {
            let path = dir.path().join(format!("map{k}.{}", format.extension()));
            export(map, format, &path).unwrap();
            assert_bit_identical(map, &import(&path).unwrap());
        }
    }
}

#[test]
fn exports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for format in [Format::Csv, Format::Json] {
        let mut contents = Vec::new();
        for run in 0..2 {
            // Fresh sampling on every run.
            let map = &sample_maps()[0];
            let path = dir.path().join(format!("run{run}.{}", format.extension()));
            export(map, format, &path).unwrap();
            contents.push(fs::read(&path).unwrap());
        }
        assert_eq!(contents[0], contents[1]);
    }
}

#[test]
fn metadata_regenerates_the_map() {
    let dir = tempfile::tempdir().unwrap();
    for map in sample_maps() {
        let path = dir.path().join("map.csv");
        export(&map, Format::Csv, &path).unwrap();
        let loaded = import(&path).unwrap();
        assert_eq!(loaded.metadata.tool, TOOL_VERSION);
        assert_bit_identical(&map, &regenerate(&loaded.metadata).unwrap());

        let resolved = solve_fundamental(&loaded.metadata.config.mode().spec)
            .unwrap()
            .summary();
        let stored = loaded.metadata.solution;
        for (x, y) in [
            (resolved.beta, stored.beta),
            (resolved.ha, stored.ha),
            (resolved.qa, stored.qa),
            (resolved.s, stored.s),
            (resolved.v, stored.v),
            (resolved.penetration_length, stored.penetration_length),
        ] {
            assert!((x - y).abs() <= 1e-12 * x.abs());
        }
    }
}

#[test]
fn csv_layout() {
    let map = sample_radial(&RadialConfig {
        mode: linear(),
        directions: vec![Direction::X],
        r_max: 2.0,
        count: 3,
        columns: vec![Column::Intensity, Column::IntensityLp01],
    })
    .unwrap();
    let mut out = Vec::new();
    write_csv(&map, &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    assert!(!text.contains('\r'));
    let lines: Vec<&str> = text.lines().collect();
    let comments = lines.iter().take_while(|l| l.starts_with("# ")).count();
    assert!(comments >= 4);
    assert_eq!(lines[comments], "r_over_a,intensity,intensity_lp01");
    assert_eq!(lines.len(), comments + 1 + 3);
    assert!(lines[comments + 2].starts_with("1.0000000000000000e0,"));
}

#[test]
fn json_layout() {
    let map = radial(linear(), Direction::X, 1.0, 5);
    let mut out = Vec::new();
    write_json(&map, &mut out).unwrap();
    let value: serde_json::Value = serde_json::from_slice(&out).unwrap();
    let object = value.as_object().unwrap();
    assert_eq!(object.keys().collect::<Vec<_>>(), ["metadata", "axes", "columns"]);
    assert_eq!(value["axes"]["r_over_a"].as_array().unwrap().len(), 5);
    assert_eq!(value["metadata"]["config"]["kind"], "radial");
}

#[test]
fn invalid_requests_write_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let config = RadialConfig {
        mode: linear(),
        directions: vec![Direction::X],
        r_max: 2.0,
        count: 3,
        columns: vec![],
    };
    assert!(matches!(sample_radial(&config), Err(ProfileError::Validation(_))));

    let mut map = radial(linear(), Direction::X, 1.0, 5);
    map.columns.clear();
    let path = dir.path().join("empty.csv");
    assert!(matches!(
        export(&map, Format::Csv, &path),
        Err(ProfileError::Validation(_))
    ));
    assert!(!path.exists());

    let missing = dir.path().join("no/such/dir/map.csv");
    let full = radial(linear(), Direction::X, 1.0, 5);
    match export(&full, Format::Csv, &missing) {
        Err(ProfileError::Io { path, .. }) => assert_eq!(path, missing),
        other => panic!("expected an I/O error, got {other:?}"),
    }
}

#[test]
fn grid_memory_guard() {
    let config = GridConfig {
        mode: linear(),
        extent: 3.0,
        resolution: 4097,
        columns: vec![Column::Intensity],
    };
    assert!(matches!(sample_grid2d(&config), Err(ProfileError::Validation(_))));
}

#[test]
fn figure_catalog_writes_eleven_files() {
    let dir = tempfile::tempdir().unwrap();
    let paths = figures::write_all(dir.path(), Format::Csv, Execution::default()).unwrap();
    assert_eq!(paths.len(), 11);
    let mut names: Vec<String> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    for (k, name) in names.iter().enumerate() {
        assert!(name.starts_with(&format!("fig{:02}_", k + 1)), "{name}");
    }

    // The weakly guiding profile carries its own negligibility evidence.
    let fig1 = import(&paths[0]).unwrap();
    assert_eq!(fig1.metadata.config.mode().spec, conventional_fiber());
    let max = |c: &str| fig1.column(c).unwrap().iter().fold(0.0f64, |m, v| m.max(*v));
    assert!(max("ey2") / max("ex2") < 1e-2);
    assert!(max("ez2") / max("ex2") < 1e-2);
    for map in paths.iter().map(|p| import(p).unwrap()) {
        map.validate().unwrap();
    }
}

#[test]
fn direction_and_column_parsing() {
    assert_eq!("x".parse::<Direction>().unwrap(), Direction::X);
    assert_eq!("phi=0.5".parse::<Direction>().unwrap(), Direction::Azimuth(0.5));
    assert!("z".parse::<Direction>().is_err());
    for column in Column::ALL {
        assert_eq!(column.name().parse::<Column>().unwrap(), column);
    }
    assert!("intensity2".parse::<Column>().is_err());
}
