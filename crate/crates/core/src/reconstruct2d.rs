//! Closed-form inversion of the planar structure-from-motion map.
//!
//! Eliminating `p` and `q` from the four projection equations leaves a pair of
//! quadratic equations in `x = cos(alpha)`, `y = cos(beta)`:
//!
//! ```text
//! (1 - x^2)(c - u y) = (1 - y^2)(a - u x)
//! (1 - x^2)(d - v y) = (1 - y^2)(b - v x)
//! ```
//!
//! whose nontrivial solution is a single rational point. Both signs of
//! `sin(alpha)` and `sin(beta)` are then tried and kept only if they reproject,
//! which leaves the scene and its mirror image.

use crate::candidates::{Candidate, CandidateSet};
use crate::error::{Error, Result};
use crate::forward::project_2d;
use crate::scene::{ImageData2D, Scene2D};
use crate::tol::{self, wrap_angle};

/// Rational solution `(cos alpha, cos beta)` of the eliminated system, with
/// the two denominators exposed for degeneracy tests.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CosineSolution {
    pub cos_alpha: f64,
    pub cos_beta: f64,
    pub num_alpha: f64,
    pub den_alpha: f64,
    pub num_beta: f64,
    pub den_beta: f64,
}

/// Evaluates the closed-form cosines. Denominators may be zero; callers decide.
pub fn closed_form_cosines(data: &ImageData2D) -> CosineSolution {
    let ImageData2D { u, v, a, b, c, d } = *data;
    let det = c * b - a * d;
    let num_alpha = (d * d - b * b) * u * u + 2.0 * a * b * u * v - 2.0 * c * d * (a * b + u * v)
        + a * a * (d * d - v * v)
        + c * c * (b * b + v * v);
    let den_alpha = 2.0 * det * (c * v - d * u);
    let num_beta = (b * b - d * d) * u * u - 2.0 * a * b * u * v
        + 2.0 * c * d * (u * v - a * b)
        + c * c * (b * b - v * v)
        + a * a * (d * d + v * v);
    let den_beta = 2.0 * det * (b * u - a * v);
    CosineSolution {
        cos_alpha: num_alpha / den_alpha,
        cos_beta: num_beta / den_beta,
        num_alpha,
        den_alpha,
        num_beta,
        den_beta,
    }
}

/// Max-abs reprojection error of `scene` against `data`.
pub fn reprojection_residual(scene: &Scene2D, data: &ImageData2D) -> f64 {
    let r = project_2d(scene);
    [r.a - data.a, r.b - data.b, r.c - data.c, r.d - data.d]
        .into_iter()
        .fold(0.0, |m, x| m.max(x.abs()))
}

/// All real reconstructions of `data` (0, 1 or 2 scenes).
///
/// `tol` is both the degeneracy threshold for the closed-form denominators
/// and the (scale-relative) reprojection acceptance.
pub fn invert_2d(data: &ImageData2D, tol: f64) -> Result<CandidateSet<Scene2D>> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let sol = closed_form_cosines(data);
    if sol.den_alpha.abs() <= tol * (1.0 + sol.num_alpha.abs())
        || sol.den_beta.abs() <= tol * (1.0 + sol.num_beta.abs())
    {
        return Err(Error::Degenerate(format!(
            "closed-form denominators vanish ({:e}, {:e}): collinear points or coincident cameras",
            sol.den_alpha, sol.den_beta
        )));
    }
    let (x, y) = (sol.cos_alpha, sol.cos_beta);
    if x.abs() > 1.0 + tol || y.abs() > 1.0 + tol {
        return Err(Error::Infeasible(format!(
            "cos(alpha) = {x}, cos(beta) = {y} outside [-1, 1]"
        )));
    }
    let (x, y) = (x.clamp(-1.0, 1.0), y.clamp(-1.0, 1.0));
    let (sa, sb) = ((1.0 - x * x).sqrt(), (1.0 - y * y).sqrt());
    if sa <= tol || sb <= tol {
        return Err(Error::Degenerate("a camera coincides with the first camera".into()));
    }

    let accept = tol * data.scale().max(1.0);
    let mut raw = Vec::with_capacity(4);
    for sign_a in [1.0, -1.0] {
        for sign_b in [1.0, -1.0] {
            let sin_a = sign_a * sa;
            let scene = Scene2D::new(
                data.u,
                (data.a - data.u * x) / sin_a,
                data.v,
                (data.b - data.v * x) / sin_a,
                sin_a.atan2(x),
                (sign_b * sb).atan2(y),
            );
            raw.push(Candidate {
                residual: reprojection_residual(&scene, data),
                scene,
            });
        }
    }
    let set = CandidateSet::assemble(raw, accept, 1e-7);
    if set.is_empty() {
        return Err(Error::Infeasible("no sign choice reprojects onto the data".into()));
    }
    Ok(set)
}

/// `sin(beta) = G sin(alpha)` and `cos(beta) = (A + B cos alpha) / (C + D cos alpha)`.
///
/// `G` is the inverse image of `u / v` under the Moebius map
/// `rho -> (c - a rho) / (d - b rho)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusAnalysis {
    pub sin_ratio: f64,
    /// `[A, B, C, D]`
    pub cos_map: [f64; 4],
}

impl MobiusAnalysis {
    pub fn sin_beta(&self, sin_alpha: f64) -> f64 {
        self.sin_ratio * sin_alpha
    }

    pub fn cos_beta(&self, cos_alpha: f64) -> f64 {
        let [a, b, c, d] = self.cos_map;
        (a + b * cos_alpha) / (c + d * cos_alpha)
    }
}

pub fn mobius_analysis(data: &ImageData2D) -> Result<MobiusAnalysis> {
    let ImageData2D { u, v, a, b, c, d } = *data;
    let scale = data.scale().powi(2);
    let det = a * d - b * c;
    if tol::is_zero(det, scale, tol::ALGEBRAIC) {
        return Err(Error::Degenerate("Moebius map is singular (ad - bc = 0)".into()));
    }
    let den = v * a - u * b;
    if tol::is_zero(den, scale, tol::ALGEBRAIC) {
        return Err(Error::Degenerate("va - ub = 0".into()));
    }
    let g = (v * c - u * d) / den;
    let cos_map = if u.abs() >= v.abs() {
        [c - g * a, g * u, u, 0.0]
    } else {
        [d - g * b, g * v, v, 0.0]
    };
    if cos_map[2] == 0.0 {
        return Err(Error::Degenerate("u = v = 0".into()));
    }
    Ok(MobiusAnalysis { sin_ratio: g, cos_map })
}

/// Readings on the surface `a = 0, c = u, d = 0` parametrized by `(u, v, b)`.
pub fn special_surface_data(u: f64, v: f64, b: f64) -> ImageData2D {
    ImageData2D {
        u,
        v,
        a: 0.0,
        b,
        c: u,
        d: 0.0,
    }
}

/// Explicit inverse on the surface `a = 0, c = u, d = 0`.
///
/// With `D = v / (2b)`:
///
/// ```text
/// alpha = arccos(D)             beta = 2 alpha - pi   (so cos beta = 1 - 2 D^2)
/// p = -u D / sqrt(1 - D^2)      q = (2 b^2 - v^2) / (2 b sqrt(1 - D^2))
/// ```
///
/// Real solutions exist only for `|D| <= 1`. `D = +-1` puts camera 2 on
/// camera 1 and `D = 0` puts camera 3 there; both are reported as degenerate.
/// The mirror scene is the other preimage.
pub fn special_surface_inverse(u: f64, v: f64, b: f64) -> Result<Scene2D> {
    if b == 0.0 {
        return Err(Error::ZeroDenominator("b = 0 on the special surface"));
    }
    let dd = v / (2.0 * b);
    if dd.abs() > 1.0 {
        return Err(Error::Infeasible(format!("|D| = |v / 2b| = {} > 1", dd.abs())));
    }
    let s2 = 1.0 - dd * dd;
    if s2 <= tol::ALGEBRAIC {
        return Err(Error::Degenerate("|D| = 1: camera 2 coincides with camera 1".into()));
    }
    if dd.abs() <= tol::ALGEBRAIC {
        return Err(Error::Degenerate("D = 0: camera 3 coincides with camera 1".into()));
    }
    let root = s2.sqrt();
    let alpha = dd.acos();
    Ok(Scene2D::new(
        u,
        -u * dd / root,
        v,
        (2.0 * b * b - v * v) / (2.0 * b * root),
        alpha,
        wrap_angle(2.0 * alpha - std::f64::consts::PI),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn data(u: f64, v: f64, a: f64, b: f64, c: f64, d: f64) -> ImageData2D {
        ImageData2D { u, v, a, b, c, d }
    }

    #[test]
    fn unrealizable_readings_are_infeasible() {
        let r = invert_2d(&data(1.0, 5.0, 0.0, 1.0, 1.0, 0.0), tol::RESIDUAL);
        assert!(matches!(r, Err(Error::Infeasible(_))), "{r:?}");
    }

    #[test]
    fn hand_built_scene_inverts_to_itself_and_mirror() {
        let s = Scene2D::new(1.0, 0.0, 0.0, 1.0, FRAC_PI_2, FRAC_PI_4);
        let set = invert_2d(&project_2d(&s), tol::RESIDUAL).unwrap();
        assert_eq!(set.len(), 2);
        assert!(set.contains(&s, 1e-12));
        assert!(set.contains(&s.mirror(), 1e-12));
        assert_eq!(set.ambiguity_note, vec![[0, 1]]);
    }

    #[test]
    fn collinear_data_is_degenerate() {
        let s = Scene2D::new(1.0, 0.5, 2.0, 1.0, 0.7, -1.3);
        assert!(matches!(
            invert_2d(&project_2d(&s), tol::RESIDUAL),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn coincident_cameras_are_degenerate() {
        let s = Scene2D::new(1.0, 0.5, -2.0, 1.0, 0.7, 0.7);
        assert!(matches!(
            invert_2d(&project_2d(&s), tol::RESIDUAL),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn rejects_nonpositive_tolerance() {
        assert!(invert_2d(&data(1.0, 2.0, 0.1, 0.2, 0.3, 0.4), 0.0).is_err());
    }

    #[test]
    fn printed_formulas_need_the_swapped_reading_convention() {
        // Substituting the readings unswapped does not give cos(alpha).
        let s = Scene2D::new(0.8, -0.6, 1.3, 0.4, 1.2, -0.7);
        let d = project_2d(&s);
        let swapped = closed_form_cosines(&data(d.u, d.v, d.a, d.c, d.b, d.d));
        assert!((swapped.cos_alpha - s.alpha.cos()).abs() > 1e-3);
        let ours = closed_form_cosines(&d);
        assert!((ours.cos_alpha - s.alpha.cos()).abs() < 1e-12);
        assert!((ours.cos_beta - s.beta.cos()).abs() < 1e-12);
    }

    #[test]
    fn mobius_ratio_matches_scene() {
        let s = Scene2D::new(0.8, -0.6, 1.3, 0.4, 1.2, -0.7);
        let m = mobius_analysis(&project_2d(&s)).unwrap();
        assert!((m.sin_ratio - s.beta.sin() / s.alpha.sin()).abs() < 1e-12);
        assert!((m.cos_beta(s.alpha.cos()) - s.beta.cos()).abs() < 1e-12);
        let mm = mobius_analysis(&project_2d(&s.mirror())).unwrap();
        assert!((m.sin_ratio - mm.sin_ratio).abs() < 1e-12);
        assert!(m.cos_map.iter().zip(mm.cos_map).all(|(x, y)| (x - y).abs() < 1e-12));
    }

    #[test]
    fn mobius_degenerates_without_second_point_readings() {
        assert!(matches!(
            mobius_analysis(&data(1.0, 2.0, 0.3, 0.0, 0.7, 0.0)),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn special_surface_far_point_is_infeasible() {
        assert!(matches!(
            special_surface_inverse(1.0, 3.0, 1.0),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn special_surface_center_is_degenerate() {
        assert!(matches!(
            special_surface_inverse(1.0, 0.0, 1.0),
            Err(Error::Degenerate(_))
        ));
        assert!(matches!(
            special_surface_inverse(1.0, 2.0, 1.0),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn special_surface_inverse_reprojects() {
        for u in [0.7, -1.2, 2.0] {
            let s = special_surface_inverse(u, 1.6, 1.0).unwrap();
            let target = special_surface_data(u, 1.6, 1.0);
            assert!(reprojection_residual(&s, &target) < 1e-12);
            assert!(reprojection_residual(&s.mirror(), &target) < 1e-12);
        }
    }

    #[test]
    fn special_surface_printed_q_misses_the_surface() {
        // q = (2b^2 - v^2)(1 - D^2)^(-1/2) without the 1/(2b) factor.
        let (u, v, b) = (0.7, 1.6, 1.0);
        let mut s = special_surface_inverse(u, v, b).unwrap();
        let dd = v / (2.0 * b);
        s.q = (2.0 * b * b - v * v) / (1.0 - dd * dd).sqrt();
        assert!(reprojection_residual(&s, &special_surface_data(u, v, b)) > 1e-3);
    }

    #[test]
    fn special_surface_agrees_with_general_inverse() {
        let (u, v, b) = (0.9, 1.1, -1.4);
        let s = special_surface_inverse(u, v, b).unwrap();
        let set = invert_2d(&special_surface_data(u, v, b), tol::RESIDUAL).unwrap();
        assert!(set.contains(&s, 1e-9));
    }
}
