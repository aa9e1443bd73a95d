//! Exact fundamental mode (HE11) of a step-index optical fiber, aimed at
//! vacuum-clad subwavelength-diameter fibers.
//!
//! * [`specfun`]: J0..J2 and K0..K2 on the argument ranges the solver needs.
//! * [`mode`]: eigenvalue equation, propagation constant and shape coefficients.
//! * [`field`]: field components, closed-form intensities, LP01 reference and
//!   polarization metrics for quasi-linear and rotating polarization.
//! * [`profile`]: radial / azimuthal / 2-D sampling and CSV or JSON export.
//! * [`figures`]: the standard set of reference profiles.
//!
//! ```
//! use nanofiber::mode::{solve_fundamental, FiberSpec};
//!
//! let spec = FiberSpec::new(0.2, 1.3, 1.4469, 1.0).unwrap();
//! let sol = solve_fundamental(&spec).unwrap();
//! assert!((sol.beta_a() - 0.9702).abs() < 5e-4);
//! assert!(sol.single_mode && sol.trap_condition);
//! ```

pub mod exec;
pub mod field;
pub mod figures;
pub mod mode;
pub mod profile;
pub mod quadrature;
pub mod specfun;

pub use exec::Execution;
pub use field::{FieldVector, Polarization, PolarizationFamily, PolarizationSample, Sense};
pub use mode::{FiberSpec, ModeError, ModeShape, ModeSolution, Normalization};
pub use profile::{Column, FieldMap, Format, MapConfig, ProfileError};
