//! Adaptive Gauss–Kronrod (7/15) quadrature on finite intervals.

// Nodes and weights are kept at 33-digit precision.
#![allow(clippy::excessive_precision)]

use thiserror::Error;

const KRONROD_NODES: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const KRONROD_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
const GAUSS_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("quadrature did not converge: estimated error {error:e} exceeds tolerance {tolerance:e} after {intervals} subintervals")]
    NotConverged {
        error: f64,
        tolerance: f64,
        intervals: usize,
    },
    #[error("integrand returned a non-finite value at {0}")]
    NonFinite(f64),
}

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub absolute: f64,
    pub relative: f64,
    pub max_intervals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            absolute: 0.0,
            relative: 1e-12,
            max_intervals: 2000,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

fn gauss_kronrod<F: FnMut(f64) -> f64>(f: &mut F, lo: f64, hi: f64) -> Result<Panel, QuadratureError> {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let mut kronrod = 0.0;
    let mut gauss = 0.0;
    for (i, (&node, &weight)) in KRONROD_NODES.iter().zip(&KRONROD_WEIGHTS).enumerate() {
        let values = if node == 0.0 {
            let v = f(center);
            [v, 0.0]
        } else {
            [f(center - half * node), f(center + half * node)]
        };
        if !values.iter().all(|v| v.is_finite()) {
            return Err(QuadratureError::NonFinite(center));
        }
        let pair = values[0] + values[1];
        kronrod += weight * pair;
        if i % 2 == 1 {
            gauss += GAUSS_WEIGHTS[i / 2] * pair;
        }
    }
    Ok(Panel {
        lo,
        hi,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    })
}

/// Integrates `f` over `[lo, hi]` by repeatedly bisecting the panel with the
/// largest error estimate.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: Tolerance) -> Result<f64, QuadratureError> {
    if lo == hi {
        return Ok(0.0);
    }
    let mut panels = vec![gauss_kronrod(&mut f, lo, hi)?];
    loop {
        let value: f64 = panels.iter().map(|p| p.value).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        let target = tol.absolute.max(tol.relative * value.abs());
        if error <= target {
            return Ok(value);
        }
        if panels.len() >= tol.max_intervals {
            return Err(QuadratureError::NotConverged {
                error,
                tolerance: target,
                intervals: panels.len(),
            });
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.error.total_cmp(&b.1.error))
            .map(|(i, _)| i)
            .expect("at least one panel");
        let panel = panels.swap_remove(worst);
        let mid = 0.5 * (panel.lo + panel.hi);
        if mid <= panel.lo || mid >= panel.hi {
            // Cannot split further; accept what we have.
            panels.push(panel);
            return Ok(panels.iter().map(|p| p.value).sum());
        }
        panels.push(gauss_kronrod(&mut f, panel.lo, mid)?);
        panels.push(gauss_kronrod(&mut f, mid, panel.hi)?);
    }
}

/// Integrates `f` over a sequence of breakpoints, one adaptive run per segment.
pub fn integrate_segments<F: FnMut(f64) -> f64>(
    mut f: F,
    breakpoints: &[f64],
    tol: Tolerance,
) -> Result<f64, QuadratureError> {
    breakpoints.windows(2).map(|w| integrate(&mut f, w[0], w[1], tol)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_panel_is_exact_for_degree_22() {
        // Kronrod 15-point rule integrates polynomials up to degree 22 exactly.
        let panel = gauss_kronrod(&mut |x: f64| x.powi(22) + 3.0 * x.powi(7), -1.0, 1.0).unwrap();
        assert!((panel.value - 2.0 / 23.0).abs() < 1e-15);
    }

    #[test]
    fn gauss_part_is_exact_for_degree_13() {
        let mut gauss = 0.0;
        for i in 0..4 {
            let node = KRONROD_NODES[2 * i + 1];
            let pair = if node == 0.0 {
                node.powi(12)
            } else {
                2.0 * node.powi(12)
            };
            gauss += GAUSS_WEIGHTS[i] * pair;
        }
        assert!((gauss - 2.0 / 13.0).abs() < 1e-15);
    }

    #[test]
    fn weights_sum_to_two() {
        let k: f64 = KRONROD_WEIGHTS[..7].iter().sum::<f64>() * 2.0 + KRONROD_WEIGHTS[7];
        let g: f64 = GAUSS_WEIGHTS[..3].iter().sum::<f64>() * 2.0 + GAUSS_WEIGHTS[3];
        assert!((k - 2.0).abs() < 1e-15);
        assert!((g - 2.0).abs() < 1e-15);
    }

    #[test]
    fn adaptive_handles_peaked_integrand() {
        let v = integrate(|x| 1.0 / (1e-4 + x * x), -1.0, 1.0, Tolerance::default()).unwrap();
        let exact = 2.0 * (1.0 / 1e-2) * (1.0f64 / 1e-2).atan();
        assert!((v - exact).abs() < 1e-10 * exact);
    }

    #[test]
    fn periodic_integral() {
        let v = integrate(|t| t.cos().powi(2), 0.0, std::f64::consts::TAU, Tolerance::default()).unwrap();
        assert!((v - std::f64::consts::PI).abs() < 1e-13);
    }

    #[test]
    fn non_finite_is_reported() {
        assert!(integrate(|x| 1.0 / x, 0.0, 1.0, Tolerance::default()).is_err());
    }
}
