//! Electric field of the HE11 mode, its closed-form intensities, the LP01
//! reference, and polarization metrics.
//!
//! Everything is evaluated at `z = 0, t = 0`; the common factor
//! `exp(i(ωt - βz))` is a global phase and can be applied afterwards with
//! [`FieldVector::with_phase`]. Points with `r < a` use the core expressions,
//! points with `r >= a` the cladding ones. The `*_in` variants take the region
//! explicitly so that both one-sided limits at the surface are reachable.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mode::{ModeShape, ModeSolution};
use crate::specfun;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FieldError {
    #[error("radial field vanishes on the inner side of the surface at phi = {phi}; jump ratio undefined")]
    UndefinedJump { phi: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Core,
    Cladding,
}

impl Region {
    pub fn at(sol: &ModeSolution, r: f64) -> Self {
        if r < sol.core_radius() {
            Region::Core
        } else {
            Region::Cladding
        }
    }
}

/// Circulation sense of the rotating mode. `Clockwise` takes the upper sign
/// in `exp(±iφ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sense {
    Clockwise,
    Counterclockwise,
}

impl Sense {
    pub fn sign(self) -> f64 {
        match self {
            Sense::Clockwise => 1.0,
            Sense::Counterclockwise => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Polarization {
    /// Transverse field along the axis at angle `phi0` from x.
    QuasiLinear {
        phi0: f64,
    },
    Rotating {
        sense: Sense,
    },
}

impl Polarization {
    pub fn family(&self) -> PolarizationFamily {
        match self {
            Polarization::QuasiLinear { .. } => PolarizationFamily::QuasiLinear,
            Polarization::Rotating { .. } => PolarizationFamily::Rotating,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolarizationFamily {
    QuasiLinear,
    Rotating,
}

/// Complex field components at one point, in both bases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldVector {
    pub ex: Complex64,
    pub ey: Complex64,
    pub ez: Complex64,
    pub er: Complex64,
    pub ephi: Complex64,
    pub r: f64,
    pub phi: f64,
}

impl FieldVector {
    fn from_cartesian(ex: Complex64, ey: Complex64, ez: Complex64, r: f64, phi: f64) -> Self {
        let (sin, cos) = phi.sin_cos();
        Self {
            ex,
            ey,
            ez,
            er: ex * cos + ey * sin,
            ephi: -ex * sin + ey * cos,
            r,
            phi,
        }
    }

    fn from_cylindrical(er: Complex64, ephi: Complex64, ez: Complex64, r: f64, phi: f64) -> Self {
        let (sin, cos) = phi.sin_cos();
        Self {
            ex: er * cos - ephi * sin,
            ey: er * sin + ephi * cos,
            ez,
            er,
            ephi,
            r,
            phi,
        }
    }

    /// Multiplies every component by `exp(i phase)`, e.g. `phase = ωt - βz`.
    pub fn with_phase(self, phase: f64) -> Self {
        let rot = Complex64::from_polar(1.0, phase);
        Self {
            ex: self.ex * rot,
            ey: self.ey * rot,
            ez: self.ez * rot,
            er: self.er * rot,
            ephi: self.ephi * rot,
            ..self
        }
    }

    pub fn intensity(&self) -> f64 {
        self.ex.norm_sqr() + self.ey.norm_sqr() + self.ez.norm_sqr()
    }

    pub fn cylindrical_intensity(&self) -> f64 {
        self.er.norm_sqr() + self.ephi.norm_sqr() + self.ez.norm_sqr()
    }
}

/// Radial building blocks shared by both polarizations:
/// transverse parts `scale · [P0 ... ± P2 ...]` and longitudinal `z_scale · Z1`.
struct RadialParts {
    scale: f64,
    p0: f64,
    p2: f64,
    z: f64,
}

fn radial_parts(shape: &ModeShape, sol: &ModeSolution, r: f64, region: Region) -> RadialParts {
    let a = shape.amplitude;
    let s = sol.s;
    match region {
        Region::Core => {
            let [j0, j1, j2] = specfun::j012(sol.h * r);
            RadialParts {
                scale: a * sol.beta / (2.0 * sol.h),
                p0: (1.0 - s) * j0,
                p2: -(1.0 + s) * j2,
                z: a * j1,
            }
        }
        Region::Cladding => {
            let [k0, k1, k2] = specfun::k012(sol.q * r);
            RadialParts {
                scale: a * sol.beta / (2.0 * sol.q) * shape.matching,
                p0: (1.0 - s) * k0,
                p2: (1.0 + s) * k2,
                z: a * shape.matching * k1,
            }
        }
    }
}

const MINUS_I: Complex64 = Complex64::new(0.0, -1.0);

pub fn field_quasilinear_in(
    shape: &ModeShape,
    sol: &ModeSolution,
    r: f64,
    phi: f64,
    phi0: f64,
    region: Region,
) -> FieldVector {
    let p = radial_parts(shape, sol, r, region);
    let (sin0, cos0) = phi0.sin_cos();
    let (sin2, cos2) = (2.0 * phi - phi0).sin_cos();
    let ex = MINUS_I * (p.scale * (p.p0 * cos0 + p.p2 * cos2));
    let ey = MINUS_I * (p.scale * (p.p0 * sin0 + p.p2 * sin2));
    let ez = Complex64::new(p.z * (phi - phi0).cos(), 0.0);
    FieldVector::from_cartesian(ex, ey, ez, r, phi)
}

/// Quasi-linearly polarized HE11 field with polarization axis `phi0`.
pub fn field_quasilinear(shape: &ModeShape, sol: &ModeSolution, r: f64, phi: f64, phi0: f64) -> FieldVector {
    field_quasilinear_in(shape, sol, r, phi, phi0, Region::at(sol, r))
}

pub fn field_rotating_in(
    shape: &ModeShape,
    sol: &ModeSolution,
    r: f64,
    phi: f64,
    sense: Sense,
    region: Region,
) -> FieldVector {
    let p = radial_parts(shape, sol, r, region);
    let sign = sense.sign();
    let fr = MINUS_I * (p.scale * (p.p0 + p.p2));
    let fphi = p.scale * (p.p0 - p.p2);
    let carrier = Complex64::from_polar(1.0, sign * phi);
    let er = fr * carrier;
    let ephi = carrier * (sign * fphi);
    let ez = carrier * p.z;
    FieldVector::from_cylindrical(er, ephi, ez, r, phi)
}

/// HE11 field with rotating polarization, `E ∝ exp(±iφ)`.
pub fn field_rotating(shape: &ModeShape, sol: &ModeSolution, r: f64, phi: f64, sense: Sense) -> FieldVector {
    field_rotating_in(shape, sol, r, phi, sense, Region::at(sol, r))
}

pub fn field_in(
    shape: &ModeShape,
    sol: &ModeSolution,
    r: f64,
    phi: f64,
    polarization: Polarization,
    region: Region,
) -> FieldVector {
    match polarization {
        Polarization::QuasiLinear { phi0 } => field_quasilinear_in(shape, sol, r, phi, phi0, region),
        Polarization::Rotating { sense } => field_rotating_in(shape, sol, r, phi, sense, region),
    }
}

pub fn field(shape: &ModeShape, sol: &ModeSolution, r: f64, phi: f64, polarization: Polarization) -> FieldVector {
    field_in(shape, sol, r, phi, polarization, Region::at(sol, r))
}

/// The φ-independent and `cos 2(φ-φ0)` parts of the quasi-linear intensity.
fn intensity_terms(shape: &ModeShape, sol: &ModeSolution, r: f64, region: Region) -> (f64, f64) {
    match region {
        Region::Core => {
            let [j0, j1, j2] = specfun::j012(sol.h * r);
            let mean = shape.g_in * (j0 * j0 + shape.u * j1 * j1 + shape.f * j2 * j2);
            let swing = shape.g_in * (shape.u * j1 * j1 - shape.f_p * j0 * j2);
            (mean, swing)
        }
        Region::Cladding => {
            let [k0, k1, k2] = specfun::k012(sol.q * r);
            let mean = shape.g_out * (k0 * k0 + shape.w * k1 * k1 + shape.f * k2 * k2);
            let swing = shape.g_out * (shape.w * k1 * k1 + shape.f_p * k0 * k2);
            (mean, swing)
        }
    }
}

pub fn intensity_quasilinear_in(
    shape: &ModeShape,
    sol: &ModeSolution,
    r: f64,
    phi_minus_phi0: f64,
    region: Region,
) -> f64 {
    let (mean, swing) = intensity_terms(shape, sol, r, region);
    mean + swing * (2.0 * phi_minus_phi0).cos()
}

/// Closed-form `|E|²` of the quasi-linear mode.
pub fn intensity_quasilinear(shape: &ModeShape, sol: &ModeSolution, r: f64, phi: f64, phi0: f64) -> f64 {
    intensity_quasilinear_in(shape, sol, r, phi - phi0, Region::at(sol, r))
}

/// φ-average of the quasi-linear intensity (the closed form without its
/// `cos 2(φ-φ0)` term).
pub fn intensity_quasilinear_mean(shape: &ModeShape, sol: &ModeSolution, r: f64) -> f64 {
    intensity_terms(shape, sol, r, Region::at(sol, r)).0
}

pub fn intensity_rotating_in(shape: &ModeShape, sol: &ModeSolution, r: f64, region: Region) -> f64 {
    2.0 * intensity_terms(shape, sol, r, region).0
}

/// Closed-form `|E|²` of the rotating mode; independent of φ.
pub fn intensity_rotating(shape: &ModeShape, sol: &ModeSolution, r: f64) -> f64 {
    intensity_rotating_in(shape, sol, r, Region::at(sol, r))
}

pub fn intensity(shape: &ModeShape, sol: &ModeSolution, r: f64, phi: f64, polarization: Polarization) -> f64 {
    match polarization {
        Polarization::QuasiLinear { phi0 } => intensity_quasilinear(shape, sol, r, phi, phi0),
        Polarization::Rotating { .. } => intensity_rotating(shape, sol, r),
    }
}

/// LP01 reference intensity: `g_in J0²(hr)` inside and `g_out K0²(qr)`
/// outside, doubled for the rotating polarization.
pub fn intensity_lp01(shape: &ModeShape, sol: &ModeSolution, r: f64, family: PolarizationFamily) -> f64 {
    let single = match Region::at(sol, r) {
        Region::Core => {
            let j0 = specfun::j012(sol.h * r)[0];
            shape.g_in * j0 * j0
        }
        Region::Cladding => {
            let k0 = specfun::k012(sol.q * r)[0];
            shape.g_out * k0 * k0
        }
    };
    match family {
        PolarizationFamily::QuasiLinear => single,
        PolarizationFamily::Rotating => 2.0 * single,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MajorAxis {
    Radial,
    Azimuthal,
}

/// Local polarization descriptors at `(r, phi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationSample {
    pub r: f64,
    pub phi: f64,
    /// Orientation of the transverse field in `(-π/2, π/2]`; `None` at field zeros.
    pub theta: Option<f64>,
    /// `||E_r| - |E_φ|| / (|E_r| + |E_φ|)` for the rotating mode.
    pub epsilon: Option<f64>,
    /// Which basis vector carries the semimajor axis; `None` when circular.
    pub major_axis: Option<MajorAxis>,
}

/// Folds an angle into `(-π/2, π/2]`.
pub fn fold_half_turn(angle: f64) -> f64 {
    let mut t = angle.rem_euclid(PI);
    if t > FRAC_PI_2 {
        t -= PI;
    }
    t
}

/// Orientation angle `θ = arctan[Re(E_y)/Re(E_x)]` of the transverse field.
///
/// The real parts are taken at the instant where the transverse field is
/// largest: both components are first rotated by the phase of the larger
/// one. For the quasi-linear mode `E_x` and `E_y` share their phase, so this
/// is the orientation of the (time-invariant) polarization line.
pub fn orientation_angle(shape: &ModeShape, sol: &ModeSolution, r: f64, phi: f64, phi0: f64) -> PolarizationSample {
    let e = field_quasilinear(shape, sol, r, phi, phi0);
    PolarizationSample {
        r,
        phi,
        theta: transverse_orientation(&e),
        epsilon: None,
        major_axis: None,
    }
}

pub(crate) fn transverse_orientation(e: &FieldVector) -> Option<f64> {
    let reference = if e.ex.norm_sqr() >= e.ey.norm_sqr() { e.ex } else { e.ey };
    let norm = reference.norm();
    if norm == 0.0 {
        return None;
    }
    let unphase = reference.conj() / norm;
    let x = (e.ex * unphase).re;
    let y = (e.ey * unphase).re;
    if x.abs() < 1e-300 && y.abs() < 1e-300 {
        return None;
    }
    Some(fold_half_turn(y.atan2(x)))
}

/// Ellipticity of the rotating mode's transverse orbit at radius `r`.
///
/// The orbit axes lie along r̂ and φ̂ with lengths `|E_r|` and `|E_φ|`; the
/// metric vanishes for circular polarization. Outside the core it equals
/// `(1+s) K2(qr) / ((1-s) K0(qr))`.
pub fn ellipticity_rotating(shape: &ModeShape, sol: &ModeSolution, r: f64) -> PolarizationSample {
    let e = field_rotating(shape, sol, r, 0.0, Sense::Clockwise);
    let (radial, azimuthal) = (e.er.norm(), e.ephi.norm());
    let total = radial + azimuthal;
    let (epsilon, major_axis) = if total == 0.0 {
        (None, None)
    } else {
        let signed = (radial - azimuthal) / total;
        let axis = if signed > 0.0 {
            Some(MajorAxis::Radial)
        } else if signed < 0.0 {
            Some(MajorAxis::Azimuthal)
        } else {
            None
        };
        (Some(signed.abs()), axis)
    };
    PolarizationSample {
        r,
        phi: 0.0,
        theta: None,
        epsilon,
        major_axis,
    }
}

/// One-sided limits `(inside, outside)` of the field at `r = a`.
pub fn surface_limits(
    shape: &ModeShape,
    sol: &ModeSolution,
    phi: f64,
    polarization: Polarization,
) -> (FieldVector, FieldVector) {
    let a = sol.core_radius();
    (
        field_in(shape, sol, a, phi, polarization, Region::Core),
        field_in(shape, sol, a, phi, polarization, Region::Cladding),
    )
}

/// Jump ratio `|E_r(a⁺)| / |E_r(a⁻)|` of the normal field component, which
/// the boundary conditions fix at `n1²/n2²`.
pub fn boundary_jump(
    shape: &ModeShape,
    sol: &ModeSolution,
    phi: f64,
    polarization: Polarization,
) -> Result<f64, FieldError> {
    let (inside, outside) = surface_limits(shape, sol, phi, polarization);
    let radial = inside.er.norm();
    if radial <= 1e-12 * inside.intensity().sqrt() {
        return Err(FieldError::UndefinedJump { phi });
    }
    Ok(outside.er.norm() / radial)
}
