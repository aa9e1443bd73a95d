//! Bessel functions J0, J1, J2 and modified Bessel functions K0, K1, K2.
//!
//! Only the integer orders 0..=2 and the real argument ranges the mode solver
//! touches are supported: `J_n` on `[0, 50]`, `K_n` on `[1e-6, 50]`.
//!
//! `J_n` uses the power series below `x = 2` and Miller's backward recurrence
//! (normalized with `J0 + 2 (J2 + J4 + ...) = 1`) above. `K_n` is evaluated
//! from the integral `K_nu(x) = ∫_0^∞ exp(-x cosh t) cosh(nu t) dt` with the
//! trapezoidal rule, which converges geometrically for this analytic, rapidly
//! decaying integrand; all terms are positive so the result keeps full
//! relative precision at every argument.

use thiserror::Error;

/// Largest argument accepted by either family.
pub const MAX_ARGUMENT: f64 = 50.0;

/// Smallest argument accepted by `K_n`; below it the values are overflow-scale.
pub const MIN_K_ARGUMENT: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecFunError {
    #[error("unsupported Bessel order {0} (only 0, 1 and 2 are available)")]
    UnsupportedOrder(u32),
    #[error("argument {x} outside the supported domain {domain}")]
    Domain { x: f64, domain: &'static str },
}

/// Bessel function of the first kind `J_order(x)`.
pub fn bessel_j(order: u32, x: f64) -> Result<f64, SpecFunError> {
    if order > 2 {
        return Err(SpecFunError::UnsupportedOrder(order));
    }
    if !(0.0..=MAX_ARGUMENT).contains(&x) {
        return Err(SpecFunError::Domain { x, domain: "[0, 50]" });
    }
    Ok(j012(x)[order as usize])
}

/// Modified Bessel function of the second kind `K_order(x)`.
pub fn bessel_k(order: u32, x: f64) -> Result<f64, SpecFunError> {
    if order > 2 {
        return Err(SpecFunError::UnsupportedOrder(order));
    }
    check_k_argument(x)?;
    Ok(k012(x)[order as usize])
}

/// Derivative `J1'(x) = J0(x) - J1(x)/x`, with the limit `1/2` at the origin.
pub fn bessel_j1_prime(x: f64) -> Result<f64, SpecFunError> {
    if !(x > 0.0 && x <= MAX_ARGUMENT) {
        return Err(SpecFunError::Domain { x, domain: "(0, 50]" });
    }
    Ok(j1_prime_unchecked(x))
}

/// Derivative `K1'(x) = -K0(x) - K1(x)/x`. Always negative.
pub fn bessel_k1_prime(x: f64) -> Result<f64, SpecFunError> {
    check_k_argument(x)?;
    Ok(k1_prime_unchecked(x))
}

fn check_k_argument(x: f64) -> Result<(), SpecFunError> {
    if !(MIN_K_ARGUMENT..=MAX_ARGUMENT).contains(&x) {
        return Err(SpecFunError::Domain {
            x,
            domain: "[1e-6, 50]",
        });
    }
    Ok(())
}

pub(crate) fn j1_prime_unchecked(x: f64) -> f64 {
    // (J0 - J2)/2 avoids the 1/x division at tiny arguments.
    let [j0, _, j2] = j012(x);
    0.5 * (j0 - j2)
}

pub(crate) fn k1_prime_unchecked(x: f64) -> f64 {
    let [k0, _, k2] = k012(x);
    -0.5 * (k0 + k2)
}

/// `[J0(x), J1(x), J2(x)]` for `x >= 0`. No domain checks.
pub fn j012(x: f64) -> [f64; 3] {
    if x == 0.0 {
        [1.0, 0.0, 0.0]
    } else if x < 2.0 {
        j012_series(x)
    } else {
        j012_miller(x)
    }
}

fn j012_series(x: f64) -> [f64; 3] {
    // J_n(x) = (x/2)^n Σ (-x²/4)^m / (m! (m+n)!)
    let half = 0.5 * x;
    let y = -half * half;
    let mut out = [0.0; 3];
    for (n, slot) in out.iter_mut().enumerate() {
        let mut term = 1.0;
        for k in 1..=n {
            term *= half / k as f64;
        }
        let mut sum = term;
        let mut m = 1usize;
        loop {
            term *= y / (m as f64 * (m + n) as f64);
            sum += term;
            if term.abs() <= 1e-17 * sum.abs() {
                break;
            }
            m += 1;
        }
        *slot = sum;
    }
    out
}

fn j012_miller(x: f64) -> [f64; 3] {
    const RESCALE: f64 = 1e250;
    let mut start = (x + 12.0 * x.cbrt() + 30.0) as usize;
    start += start % 2;
    let two_over_x = 2.0 / x;

    // Unnormalized backward recurrence J_{k-1} = (2k/x) J_k - J_{k+1}.
    let mut above = 0.0;
    let mut current = 1e-300;
    let mut even_sum = 0.0;
    let mut tail = [0.0; 3];
    for k in (1..=start).rev() {
        let below = k as f64 * two_over_x * current - above;
        above = current;
        current = below;
        let order = k - 1;
        if order % 2 == 0 && order > 0 {
            even_sum += current;
        }
        if order <= 2 {
            tail[order] = current;
        }
        if current.abs() > RESCALE {
            above /= RESCALE;
            current /= RESCALE;
            even_sum /= RESCALE;
            for t in tail.iter_mut() {
                *t /= RESCALE;
            }
        }
    }
    let norm = tail[0] + 2.0 * even_sum;
    [tail[0] / norm, tail[1] / norm, tail[2] / norm]
}

/// `[K0(x), K1(x), K2(x)]` for `x > 0`. No domain checks.
pub fn k012(x: f64) -> [f64; 3] {
    let scaled = k012_scaled(x);
    let damp = (-x).exp();
    [scaled[0] * damp, scaled[1] * damp, scaled[2] * damp]
}

/// `exp(x) · [K0, K1, K2](x)`, free of underflow at large argument.
pub fn k012_scaled(x: f64) -> [f64; 3] {
    let step = (0.6 / x.sqrt()).min(0.125);
    let growth = step.exp();
    let mut exp_t = 1.0;
    let mut sums = [0.5, 0.5, 0.5];
    loop {
        exp_t *= growth;
        let cosh_t = 0.5 * (exp_t + 1.0 / exp_t);
        let cosh_2t = 2.0 * cosh_t * cosh_t - 1.0;
        let weight = (-x * (cosh_t - 1.0)).exp();
        let last = weight * cosh_2t;
        sums[0] += weight;
        sums[1] += weight * cosh_t;
        sums[2] += last;
        if last < 1e-18 * sums[2] {
            break;
        }
    }
    [sums[0] * step, sums[1] * step, sums[2] * step]
}
