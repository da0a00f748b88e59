//! Tolerance ladder shared by every solver in the crate.
//!
//! Comparisons against zero are scale-aware: a quantity counts as zero when
//! `|x| <= tol * max(1, scale)` where `scale` is the magnitude of the terms
//! that produced it (see [`is_zero`]).

/// Algebraic identities (unit-circle constraints, orthonormality).
pub const ALGEBRAIC: f64 = 1e-12;

/// Residual acceptance for reconstructions and pair solutions.
pub const RESIDUAL: f64 = 1e-9;

/// Degeneracy detection (parallel lines, coplanar normals, singular systems).
pub const DEGENERACY: f64 = 1e-6;

/// Default central-difference step for numeric Jacobians.
pub const FD_STEP: f64 = 1e-6;

/// Scale-aware zero test.
#[inline]
pub fn is_zero(x: f64, scale: f64, tol: f64) -> bool {
    x.abs() <= tol * scale.abs().max(1.0)
}

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_angle(theta: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let mut t = theta.rem_euclid(TAU);
    if t > PI {
        t -= TAU;
    }
    t
}

/// Shortest signed distance between two angles.
#[inline]
pub fn angle_diff(a: f64, b: f64) -> f64 {
    wrap_angle(a - b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn wrap_is_half_open_at_minus_pi() {
        assert_eq!(wrap_angle(PI), PI);
        assert!((wrap_angle(-PI) - PI).abs() < 1e-15);
        assert!((wrap_angle(3.0 * PI) - PI).abs() < 1e-12);
        assert!((wrap_angle(0.5 + 4.0 * PI) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn angle_diff_is_short_way() {
        assert!((angle_diff(PI - 0.1, -PI + 0.1) + 0.2).abs() < 1e-12);
    }
}
