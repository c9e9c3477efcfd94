//! Phase helpers. Phases are stored canonically in `[0, 2π)`.

use core::f64::consts::{PI, TAU};

use crate::C64;

/// Wraps an angle into `[0, 2π)`.
pub fn wrap(theta: f64) -> f64 {
    let mut r = theta % TAU;
    if r < 0.0 {
        r += TAU;
    }
    // Tiny negative inputs round up to exactly TAU.
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Signed distance between two angles, in `(-π, π]`.
pub fn distance(a: f64, b: f64) -> f64 {
    let d = wrap(a - b);
    if d > PI {
        d - TAU
    } else {
        d
    }
}

pub fn unit(theta: f64) -> C64 {
    C64::from_polar(1.0, theta)
}

/// Argument of `z`, with `arg(0) = 0`.
pub fn arg(z: C64) -> f64 {
    if z.re == 0.0 && z.im == 0.0 {
        0.0
    } else {
        z.im.atan2(z.re)
    }
}

/// `Σ e^{j(uₙ + wₙ)}` for two phase vectors.
pub fn steering_inner(u: &[f64], w: &[f64]) -> C64 {
    debug_assert_eq!(u.len(), w.len());
    u.iter().zip(w).map(|(a, b)| unit(a + b)).sum()
}
