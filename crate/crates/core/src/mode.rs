//! HE11 eigenvalue problem for a step-index fiber and the scalar mode
//! parameters derived from its root.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{self, Region};
use crate::quadrature::{self, QuadratureError, Tolerance};
use crate::specfun::{self, SpecFunError};

/// Cutoff of the first higher-order mode family (first zero of J0).
pub const SINGLE_MODE_CUTOFF: f64 = 2.405;

/// Largest `qa` for which the evanescent-wave trap can balance the centrifugal force.
pub const TRAP_QA_LIMIT: f64 = 0.93;

/// Number of uniform β samples used to bracket the root.
pub const SCAN_SAMPLES: usize = 2000;

/// Relative β width at which bisection stops.
pub const BISECTION_TOLERANCE: f64 = 1e-12;

/// Largest accepted |residual| at the returned root, relative to [`residual_scale`].
pub const RESIDUAL_TOLERANCE: f64 = 1e-10;

/// Outer radius, in units of `a`, of the disc used by the cross-section normalization.
pub const NORMALIZATION_RADIUS: f64 = 25.0;

const SINGULAR_J1: f64 = 1e-13;

const EDGE_SAMPLES: usize = 200;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModeError {
    #[error("invalid fiber: {0}")]
    InvalidSpec(String),
    #[error("invalid refractive indices n1 = {n1}, n2 = {n2}: need n1 > n2 >= 1")]
    InvalidIndices { n1: f64, n2: f64 },
    #[error("beta = {beta} outside the guided window ({lower}, {upper})")]
    OutsideGuidedWindow { beta: f64, lower: f64, upper: f64 },
    #[error("eigenvalue equation singular at beta = {beta}: J1(ha) = {j1:e}")]
    Singular { beta: f64, j1: f64 },
    #[error("no HE11 root found in the guided window")]
    NoRoot,
    #[error("root refinement stalled with residual {residual:e} at beta = {beta}")]
    ResidualTooLarge { beta: f64, residual: f64 },
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
    #[error("normalization failed: {0}")]
    Normalization(#[from] QuadratureError),
}

/// Geometry and materials of a step-index fiber. Lengths in micrometers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawFiberSpec")]
pub struct FiberSpec {
    core_radius_um: f64,
    wavelength_um: f64,
    n1: f64,
    n2: f64,
}

#[derive(Deserialize)]
struct RawFiberSpec {
    core_radius_um: f64,
    wavelength_um: f64,
    n1: f64,
    n2: f64,
}

impl TryFrom<RawFiberSpec> for FiberSpec {
    type Error = ModeError;

    fn try_from(raw: RawFiberSpec) -> Result<Self, Self::Error> {
        FiberSpec::new(raw.core_radius_um, raw.wavelength_um, raw.n1, raw.n2)
    }
}

impl FiberSpec {
    pub fn new(core_radius_um: f64, wavelength_um: f64, n1: f64, n2: f64) -> Result<Self, ModeError> {
        if !(core_radius_um.is_finite() && core_radius_um > 0.0) {
            return Err(ModeError::InvalidSpec(format!(
                "core radius must be positive, got {core_radius_um} um"
            )));
        }
        if !(wavelength_um.is_finite() && wavelength_um > 0.0) {
            return Err(ModeError::InvalidSpec(format!(
                "wavelength must be positive, got {wavelength_um} um"
            )));
        }
        check_indices(n1, n2)?;
        Ok(Self {
            core_radius_um,
            wavelength_um,
            n1,
            n2,
        })
    }

    /// Silica core in vacuum, the configuration used for the thin-fiber profiles.
    pub fn vacuum_clad_silica(core_radius_um: f64, wavelength_um: f64) -> Result<Self, ModeError> {
        Self::new(core_radius_um, wavelength_um, 1.4469, 1.0)
    }

    pub fn core_radius(&self) -> f64 {
        self.core_radius_um
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength_um
    }

    pub fn n1(&self) -> f64 {
        self.n1
    }

    pub fn n2(&self) -> f64 {
        self.n2
    }

    /// Free-space wavenumber `k = 2π/λ` in 1/µm.
    pub fn wavenumber(&self) -> f64 {
        TAU / self.wavelength_um
    }

    /// Open interval `(n2 k, n1 k)` that contains every guided β.
    pub fn guided_window(&self) -> (f64, f64) {
        let k = self.wavenumber();
        (self.n2 * k, self.n1 * k)
    }
}

fn check_indices(n1: f64, n2: f64) -> Result<(), ModeError> {
    if n1.is_finite() && n2.is_finite() && n2 >= 1.0 && n1 > n2 {
        Ok(())
    } else {
        Err(ModeError::InvalidIndices { n1, n2 })
    }
}

/// Normalized size parameter `V = k a sqrt(n1² - n2²)`.
pub fn v_number(spec: &FiberSpec) -> f64 {
    spec.wavenumber() * spec.core_radius_um * (spec.n1 * spec.n1 - spec.n2 * spec.n2).sqrt()
}

/// Largest `a/λ` for which the fiber stays single-mode (`V < 2.405`).
pub fn single_mode_max_radius_ratio(n1: f64, n2: f64) -> Result<f64, ModeError> {
    check_indices(n1, n2)?;
    Ok(SINGLE_MODE_CUTOFF / (TAU * (n1 * n1 - n2 * n2).sqrt()))
}

/// Solved HE11 parameters. Wavenumbers in 1/µm, lengths in µm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeSolution {
    pub spec: FiberSpec,
    pub beta: f64,
    pub h: f64,
    pub q: f64,
    pub s: f64,
    pub v: f64,
    /// Evanescent decay length `1/q`.
    pub penetration_length: f64,
    pub single_mode: bool,
    pub trap_condition: bool,
}

impl ModeSolution {
    pub fn ha(&self) -> f64 {
        self.h * self.spec.core_radius_um
    }

    pub fn qa(&self) -> f64 {
        self.q * self.spec.core_radius_um
    }

    pub fn beta_a(&self) -> f64 {
        self.beta * self.spec.core_radius_um
    }

    pub fn core_radius(&self) -> f64 {
        self.spec.core_radius_um
    }

    pub fn residual(&self) -> Result<f64, ModeError> {
        eigenvalue_residual(self.beta, &self.spec)
    }

    pub fn summary(&self) -> SolutionSummary {
        SolutionSummary {
            beta: self.beta,
            h: self.h,
            q: self.q,
            s: self.s,
            v: self.v,
            ha: self.ha(),
            qa: self.qa(),
            beta_a: self.beta_a(),
            penetration_length: self.penetration_length,
            penetration_length_over_a: self.penetration_length / self.core_radius(),
            single_mode: self.single_mode,
            trap_condition: self.trap_condition,
        }
    }
}

/// Dimensional and dimensionless scalars of a solved mode, as reported by
/// the CLI and stored in exported metadata.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolutionSummary {
    pub beta: f64,
    pub h: f64,
    pub q: f64,
    pub s: f64,
    pub v: f64,
    pub ha: f64,
    pub qa: f64,
    pub beta_a: f64,
    pub penetration_length: f64,
    pub penetration_length_over_a: f64,
    pub single_mode: bool,
    pub trap_condition: bool,
}

struct Transverse {
    ha: f64,
    qa: f64,
    j: [f64; 3],
    k: [f64; 3],
}

fn transverse(beta: f64, spec: &FiberSpec) -> Result<Transverse, ModeError> {
    let (lower, upper) = spec.guided_window();
    if !(beta > lower && beta < upper) {
        return Err(ModeError::OutsideGuidedWindow { beta, lower, upper });
    }
    let a = spec.core_radius_um;
    let ha = (upper * upper - beta * beta).sqrt() * a;
    let qa = (beta * beta - lower * lower).sqrt() * a;
    if ha > specfun::MAX_ARGUMENT {
        return Err(SpecFunError::Domain {
            x: ha,
            domain: "[0, 50]",
        }
        .into());
    }
    if !(specfun::MIN_K_ARGUMENT..=specfun::MAX_ARGUMENT).contains(&qa) {
        return Err(SpecFunError::Domain {
            x: qa,
            domain: "[1e-6, 50]",
        }
        .into());
    }
    Ok(Transverse {
        ha,
        qa,
        j: specfun::j012(ha),
        k: specfun::k012(qa),
    })
}

/// Left minus right side of the HE11 eigenvalue equation
///
/// ```text
/// J0(ha)/(ha J1(ha)) = -(n1²+n2²)/(2n1²) K' + 1/(ha)²
///                      - sqrt( [(n1²-n2²)/(2n1²) K']² + β²/(n1²k²) (1/(qa)² + 1/(ha)²)² )
/// ```
///
/// with `K' = K1'(qa)/(qa K1(qa))`.
pub fn eigenvalue_residual(beta: f64, spec: &FiberSpec) -> Result<f64, ModeError> {
    let t = transverse(beta, spec)?;
    if t.j[1].abs() < SINGULAR_J1 {
        return Err(ModeError::Singular { beta, j1: t.j[1] });
    }
    let n1sq = spec.n1 * spec.n1;
    let n2sq = spec.n2 * spec.n2;
    let k = spec.wavenumber();

    let k_log = -0.5 * (t.k[0] + t.k[2]) / (t.qa * t.k[1]);
    let inv_ha2 = 1.0 / (t.ha * t.ha);
    let inv_qa2 = 1.0 / (t.qa * t.qa);

    let lhs = t.j[0] / (t.ha * t.j[1]);
    let split = (n1sq - n2sq) / (2.0 * n1sq) * k_log;
    let coupling = beta / (spec.n1 * k) * (inv_qa2 + inv_ha2);
    let rhs = -(n1sq + n2sq) / (2.0 * n1sq) * k_log + inv_ha2 - (split * split + coupling * coupling).sqrt();
    Ok(lhs - rhs)
}

/// HE11 mixing coefficient
/// `s = [1/(qa)² + 1/(ha)²] / [J1'(ha)/(ha J1(ha)) + K1'(qa)/(qa K1(qa))]`.
fn mixing_coefficient(t: &Transverse) -> f64 {
    let j_log = 0.5 * (t.j[0] - t.j[2]) / (t.ha * t.j[1]);
    let k_log = -0.5 * (t.k[0] + t.k[2]) / (t.qa * t.k[1]);
    (1.0 / (t.qa * t.qa) + 1.0 / (t.ha * t.ha)) / (j_log + k_log)
}

/// Highest-β sign change of the residual that is not a pole, from samples
/// ordered by decreasing β.
fn find_bracket(samples: impl Iterator<Item = (f64, Option<f64>, f64)>) -> Option<(f64, f64, f64, f64)> {
    let mut upper_sample: Option<(f64, Option<f64>, f64)> = None;
    for lower_sample in samples {
        if let Some((b1, Some(f1), j1)) = upper_sample {
            if let (b0, Some(f0), j0) = lower_sample {
                let crosses = f0 == 0.0 || f1 == 0.0 || (f0 < 0.0) != (f1 < 0.0);
                // A sign flip across a J1(ha) zero is a pole, not a root.
                if crosses && (j0 > 0.0) == (j1 > 0.0) {
                    return Some((b0, f0, b1, f1));
                }
            }
        }
        upper_sample = Some(lower_sample);
    }
    None
}

/// Magnitude of the terms entering the eigenvalue equation at β; the
/// residual tolerance is relative to it.
pub fn residual_scale(beta: f64, spec: &FiberSpec) -> Result<f64, ModeError> {
    let t = transverse(beta, spec)?;
    Ok(1.0 + 1.0 / (t.qa * t.qa) + 1.0 / (t.ha * t.ha))
}

/// Finds the HE11 propagation constant and the derived scalars.
///
/// β is scanned uniformly over the guided window; the sign change closest to
/// `n1 k` that is not a pole of `J0/J1` is refined by bisection.
///
/// The mode has no cutoff, but at small V (below about 0.5 for silica in
/// vacuum) `qa` drops under the smallest argument `K` is evaluated at and the
/// result is [`ModeError::NoRoot`].
pub fn solve_fundamental(spec: &FiberSpec) -> Result<ModeSolution, ModeError> {
    let (lower, upper) = spec.guided_window();
    let lo = lower * (1.0 + 1e-9);
    let hi = upper * (1.0 - 1e-9);
    let a = spec.core_radius_um;
    let step = (hi - lo) / (SCAN_SAMPLES - 1) as f64;

    let sample = |beta: f64| {
        let value = eigenvalue_residual(beta, spec).ok();
        let ha = (upper * upper - beta * beta).sqrt() * a;
        (beta, value, specfun::j012(ha.min(specfun::MAX_ARGUMENT))[1])
    };
    let uniform = (0..SCAN_SAMPLES).rev().map(|i| {
        if i == SCAN_SAMPLES - 1 {
            hi
        } else {
            lo + step * i as f64
        }
    });
    // Below V ~ 0.6 the root can sit inside the 1e-9 margin; walk qa down
    // geometrically towards the smallest argument K accepts.
    let qa_edge = (lo * lo - lower * lower).sqrt() * a;
    let qa_floor = 2.0 * specfun::MIN_K_ARGUMENT;
    let tail = (1..=EDGE_SAMPLES).filter(move |_| qa_edge > qa_floor).map(|i| {
        let qa = qa_edge * (qa_floor / qa_edge).powf(i as f64 / EDGE_SAMPLES as f64);
        (lower * lower + (qa / a).powi(2)).sqrt()
    });
    let bracket = find_bracket(uniform.chain(tail).map(sample));
    let (mut b_lo, mut f_lo, mut b_hi, f_hi) = bracket.ok_or(ModeError::NoRoot)?;

    let mut best = if f_lo.abs() < f_hi.abs() {
        (b_lo, f_lo)
    } else {
        (b_hi, f_hi)
    };
    loop {
        let width = b_hi - b_lo;
        let converged = width <= BISECTION_TOLERANCE * b_hi;
        if (converged && best.1.abs() < RESIDUAL_TOLERANCE * residual_scale(best.0, spec)?) || best.1 == 0.0 {
            break;
        }
        let mid = 0.5 * (b_lo + b_hi);
        if mid <= b_lo || mid >= b_hi {
            break;
        }
        let f_mid = eigenvalue_residual(mid, spec)?;
        if f_mid.abs() < best.1.abs() {
            best = (mid, f_mid);
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            b_lo = mid;
            f_lo = f_mid;
        } else {
            b_hi = mid;
        }
    }
    let (beta, residual) = best;
    let accepted = residual.abs() < RESIDUAL_TOLERANCE * residual_scale(beta, spec)?;
    if !accepted {
        return Err(ModeError::ResidualTooLarge { beta, residual });
    }

    let t = transverse(beta, spec)?;
    let v = v_number(spec);
    let h = t.ha / a;
    let q = t.qa / a;
    Ok(ModeSolution {
        spec: *spec,
        beta,
        h,
        q,
        s: mixing_coefficient(&t),
        v,
        penetration_length: 1.0 / q,
        single_mode: v < SINGLE_MODE_CUTOFF,
        trap_condition: t.qa < TRAP_QA_LIMIT,
    })
}

/// How the field amplitude `A` is fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    /// `A = 1`.
    #[default]
    UnitAmplitude,
    /// Largest quasi-linear `|E|²` over the cross-section equals 1.
    UnitPeak,
    /// `∬ |E|² dA = 1` for the quasi-linear mode over `r <= 25 a`.
    UnitCrossSectionIntegral,
}

/// Shape coefficients of the intensity closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeShape {
    /// `2h² / (β² (1-s)²)`
    pub u: f64,
    /// `2q² / (β² (1-s)²)`
    pub w: f64,
    /// `(1+s)² / (1-s)²`
    pub f: f64,
    /// `2(1+s) / (1-s)`
    pub f_p: f64,
    /// `|A|² / (2u)`
    pub g_in: f64,
    /// `|A|² J1²(ha) / (2w K1²(qa))`
    pub g_out: f64,
    pub amplitude: f64,
    pub normalization: Normalization,
    /// `J1(ha) / K1(qa)`, the outside matching factor.
    pub matching: f64,
}

impl ModeShape {
    fn with_amplitude(self, amplitude: f64) -> Self {
        let scale = amplitude * amplitude / (self.amplitude * self.amplitude);
        Self {
            g_in: self.g_in * scale,
            g_out: self.g_out * scale,
            amplitude,
            ..self
        }
    }
}

pub fn mode_shape(sol: &ModeSolution, normalization: Normalization) -> Result<ModeShape, ModeError> {
    let s = sol.s;
    let beta_term = sol.beta * sol.beta * (1.0 - s) * (1.0 - s);
    let u = 2.0 * sol.h * sol.h / beta_term;
    let w = 2.0 * sol.q * sol.q / beta_term;
    let ratio = (1.0 + s) / (1.0 - s);
    let j1 = specfun::j012(sol.ha())[1];
    let k1 = specfun::k012(sol.qa())[1];
    let matching = j1 / k1;
    let unit = ModeShape {
        u,
        w,
        f: ratio * ratio,
        f_p: 2.0 * ratio,
        g_in: 1.0 / (2.0 * u),
        g_out: matching * matching / (2.0 * w),
        amplitude: 1.0,
        normalization,
        matching,
    };
    let amplitude = match normalization {
        Normalization::UnitAmplitude => return Ok(unit),
        Normalization::UnitPeak => 1.0 / peak_intensity(&unit, sol).sqrt(),
        Normalization::UnitCrossSectionIntegral => 1.0 / cross_section_integral(&unit, sol)?.sqrt(),
    };
    Ok(unit.with_amplitude(amplitude))
}

/// Largest quasi-linear `|E|²` over the cross-section, one-sided surface
/// limits included. At fixed `r` the intensity is `P(r) + Q(r) cos 2(φ-φ0)`,
/// so the extremes over `φ` sit at `φ - φ0 = 0` and `π/2`.
pub fn peak_intensity(shape: &ModeShape, sol: &ModeSolution) -> f64 {
    let a = sol.core_radius();
    let envelope = |r: f64, region: Region| {
        let along = field::intensity_quasilinear_in(shape, sol, r, 0.0, region);
        let across = field::intensity_quasilinear_in(shape, sol, r, 0.5 * PI, region);
        along.max(across)
    };
    let segments = [(0.0, a, Region::Core), (a, NORMALIZATION_RADIUS * a, Region::Cladding)];
    let mut peak = 0.0f64;
    for (lo, hi, region) in segments {
        const SAMPLES: usize = 2001;
        let dr = (hi - lo) / (SAMPLES - 1) as f64;
        let mut best = (0usize, f64::NEG_INFINITY);
        for i in 0..SAMPLES {
            let value = envelope(lo + dr * i as f64, region);
            if value > best.1 {
                best = (i, value);
            }
        }
        peak = peak.max(best.1);
        if best.0 == 0 || best.0 == SAMPLES - 1 {
            continue;
        }
        // Golden-section refinement around an interior sample maximum.
        let (mut x0, mut x1) = (lo + dr * (best.0 - 1) as f64, lo + dr * (best.0 + 1) as f64);
        let ratio = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..80 {
            let c = x1 - ratio * (x1 - x0);
            let d = x0 + ratio * (x1 - x0);
            if envelope(c, region) > envelope(d, region) {
                x1 = d;
            } else {
                x0 = c;
            }
        }
        peak = peak.max(envelope(0.5 * (x0 + x1), region));
    }
    peak
}

/// `∬ |E|² dA` of the quasi-linear mode over the disc `r <= 25 a`, by nested
/// adaptive quadrature (azimuth outside, radius inside, split at `r = a`).
pub fn cross_section_integral(shape: &ModeShape, sol: &ModeSolution) -> Result<f64, QuadratureError> {
    let a = sol.core_radius();
    let tol = Tolerance {
        relative: 1e-11,
        ..Tolerance::default()
    };
    let mut inner_error = None;
    let outer = quadrature::integrate(
        |phi| {
            let core = quadrature::integrate(
                |r| r * field::intensity_quasilinear_in(shape, sol, r, phi, Region::Core),
                0.0,
                a,
                tol,
            );
            let cladding = quadrature::integrate(
                |r| r * field::intensity_quasilinear_in(shape, sol, r, phi, Region::Cladding),
                a,
                NORMALIZATION_RADIUS * a,
                tol,
            );
            match (core, cladding) {
                (Ok(c), Ok(o)) => c + o,
                (Err(e), _) | (_, Err(e)) => {
                    inner_error.get_or_insert(e);
                    0.0
                }
            }
        },
        0.0,
        TAU,
        Tolerance {
            relative: 1e-10,
            ..Tolerance::default()
        },
    )?;
    match inner_error {
        Some(e) => Err(e),
        None => Ok(outer),
    }
}
