//! The pair equations locating an intersection line in two camera planes.
//!
//! For cameras `i` and `j` the line direction has unit coordinates `(x, y)` in
//! plane `i` and `(u, v)` in plane `j`. Dotting with the two points gives
//!
//! ```text
//! a x + b y = c u + d v,   e x + f y = g u + h v,   x^2 + y^2 = u^2 + v^2 = 1.
//! ```
//!
//! The linear part is solved for `(x, y) = (A u + B v, F u + G v)`. With
//! `u = cos t`, `v = sin t` the remaining circle condition becomes
//! `S cos 2t + W sin 2t + T = 0`, a quadratic in `cos 2t` after squaring.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scene::{EulerFrame, PairCoefficients};
use crate::tol;

/// One real solution of a pair system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UllmanPairSolution {
    /// Line coordinates in the first plane of the pair.
    pub alpha: f64,
    pub beta: f64,
    /// Line coordinates in the second plane of the pair.
    pub gamma: f64,
    pub delta: f64,
    pub spurious: bool,
}

impl UllmanPairSolution {
    pub fn negated(&self) -> Self {
        UllmanPairSolution {
            alpha: -self.alpha,
            beta: -self.beta,
            gamma: -self.gamma,
            delta: -self.delta,
            spurious: self.spurious,
        }
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (self.alpha - other.alpha)
            .abs()
            .max((self.beta - other.beta).abs())
            .max((self.gamma - other.gamma).abs())
            .max((self.delta - other.delta).abs())
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.alpha, self.beta, self.gamma, self.delta]
    }
}

/// `(x, y) = (A u + B v, F u + G v)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Elimination {
    pub a: f64,
    pub b: f64,
    pub f: f64,
    pub g: f64,
}

/// `U = (A^2 + F^2)/2`, `V = (B^2 + G^2)/2`, `W = AB + FG`, `S = U - V`, `T = U + V - 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuarticAux {
    pub u: f64,
    pub v: f64,
    pub w: f64,
    pub s: f64,
    pub t: f64,
}

impl QuarticAux {
    pub fn new(e: &Elimination) -> Self {
        let u = (e.a * e.a + e.f * e.f) / 2.0;
        let v = (e.b * e.b + e.g * e.g) / 2.0;
        let w = e.a * e.b + e.f * e.g;
        QuarticAux {
            u,
            v,
            w,
            s: u - v,
            t: u + v - 1.0,
        }
    }

    /// `S^2 - T^2 + W^2`
    pub fn discriminant(&self) -> f64 {
        self.s * self.s - self.t * self.t + self.w * self.w
    }

    /// The two values `cos 2t = -(S T +- W sqrt(S^2 - T^2 + W^2)) / (S^2 + W^2)`,
    /// `+` root first. `None` when the discriminant is negative.
    pub fn cos_2t(&self) -> Option<[f64; 2]> {
        let disc = self.discriminant();
        let scale = self.s * self.s + self.t * self.t + self.w * self.w;
        if disc < -tol::ALGEBRAIC * scale.max(1.0) {
            return None;
        }
        let root = disc.max(0.0).sqrt();
        let den = self.s * self.s + self.w * self.w;
        Some([
            -(self.s * self.t + self.w * root) / den,
            -(self.s * self.t - self.w * root) / den,
        ])
    }
}

pub fn eliminate(c: &PairCoefficients) -> Result<Elimination> {
    let det = c.a * c.f - c.b * c.e;
    if det == 0.0 || det.abs() <= 1e-12 * (c.a * c.f).abs().max((c.b * c.e).abs()) {
        return Err(Error::SingularElimination(det));
    }
    Ok(Elimination {
        a: (c.f * c.c - c.b * c.g) / det,
        b: (c.f * c.d - c.b * c.h) / det,
        f: (c.a * c.g - c.e * c.c) / det,
        g: (c.a * c.h - c.e * c.d) / det,
    })
}

/// Max-abs residual of the two linear equations.
pub fn linear_residual(c: &PairCoefficients, s: &UllmanPairSolution) -> f64 {
    let r1 = c.a * s.alpha + c.b * s.beta - c.c * s.gamma - c.d * s.delta;
    let r2 = c.e * s.alpha + c.f * s.beta - c.g * s.gamma - c.h * s.delta;
    r1.abs().max(r2.abs())
}

/// Max-abs residual of the unit-circle constraints.
pub fn circle_residual(s: &UllmanPairSolution) -> f64 {
    (s.alpha.hypot(s.beta) - 1.0)
        .abs()
        .max((s.gamma.hypot(s.delta) - 1.0).abs())
}

fn coefficient_scale(c: &PairCoefficients) -> f64 {
    c.to_array().iter().fold(1.0_f64, |m, x| m.max(x.abs()))
}

/// All branch candidates (up to 8: two roots for `cos 2t`, two signs of
/// `sin 2t`, two half-angles), before any filtering.
pub fn branch_candidates(c: &PairCoefficients) -> Result<Vec<UllmanPairSolution>> {
    let e = eliminate(c)?;
    let aux = QuarticAux::new(&e);
    let den = aux.s * aux.s + aux.w * aux.w;
    if den <= tol::ALGEBRAIC * (1.0 + aux.t.abs()) {
        // the elimination maps the circle isometrically onto a circle of radius sqrt(U+V)
        return if aux.t.abs() <= tol::ALGEBRAIC {
            Err(Error::Degenerate("pair system has a continuum of solutions".into()))
        } else {
            Err(Error::NoRealSolution("circle radii differ".into()))
        };
    }
    let roots = aux
        .cos_2t()
        .ok_or_else(|| Error::NoRealSolution(format!("S^2 - T^2 + W^2 = {:e} < 0", aux.discriminant())))?;

    let g = |t: f64| aux.s * (2.0 * t).cos() + aux.w * (2.0 * t).sin() + aux.t;
    let dg = |t: f64| 2.0 * (aux.w * (2.0 * t).cos() - aux.s * (2.0 * t).sin());
    let gscale = aux.s.abs() + aux.w.abs() + aux.t.abs();

    let mut out = Vec::with_capacity(8);
    for c2 in roots {
        if c2.abs() > 1.0 + tol::ALGEBRAIC {
            continue;
        }
        let c2 = c2.clamp(-1.0, 1.0);
        let s2 = (1.0 - c2 * c2).sqrt();
        for sin2 in [s2, -s2] {
            let two_t = sin2.atan2(c2);
            for k in 0..2 {
                let mut t = two_t / 2.0 + k as f64 * std::f64::consts::PI;
                if g(t).abs() <= 1e-6 * gscale {
                    for _ in 0..3 {
                        let slope = dg(t);
                        if slope.abs() <= 1e-8 * gscale {
                            break;
                        }
                        t -= g(t) / slope;
                    }
                }
                let (v, u) = t.sin_cos();
                let x = e.a * u + e.b * v;
                let y = e.f * u + e.g * v;
                let norm = x.hypot(y);
                out.push(UllmanPairSolution {
                    alpha: x / norm,
                    beta: y / norm,
                    gamma: u,
                    delta: v,
                    spurious: false,
                });
            }
        }
    }
    Ok(out)
}

/// Real solutions of the pair system (at most 8; generically 4, forming two
/// antipodal pairs).
///
/// Every branch of the closed form is expanded and kept when it satisfies the
/// linear equations to [`tol::RESIDUAL`] (relative to the coefficient scale).
pub fn solve_ullman_pair(c: &PairCoefficients) -> Result<Vec<UllmanPairSolution>> {
    let accept = tol::RESIDUAL * coefficient_scale(c);
    let mut kept: Vec<UllmanPairSolution> = Vec::new();
    for cand in branch_candidates(c)? {
        if !cand.alpha.is_finite() || linear_residual(c, &cand) > accept {
            continue;
        }
        if kept.iter().all(|k| k.distance(&cand) > 1e-9) {
            kept.push(cand);
        }
    }
    if kept.is_empty() {
        return Err(Error::NoRealSolution("no branch satisfies the pair equations".into()));
    }
    kept.sort_by(|x, y| {
        x.as_array()
            .iter()
            .zip(y.as_array().iter())
            .map(|(p, q)| p.total_cmp(q))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(kept)
}

/// Known frames of the two cameras of a pair and the normal of the point
/// plane, used to classify pair solutions geometrically.
#[derive(Debug, Clone, Copy)]
pub struct PairReference {
    pub first: (Vector3<f64>, Vector3<f64>),
    pub second: (Vector3<f64>, Vector3<f64>),
    pub point_normal: Vector3<f64>,
}

impl PairReference {
    pub fn from_frames(first: &EulerFrame, second: &EulerFrame, point_normal: Vector3<f64>) -> Self {
        PairReference {
            first: (first.p_vec, first.q_vec),
            second: (second.p_vec, second.q_vec),
            point_normal,
        }
    }

    /// `alpha p_i + beta q_i - (gamma p_j + delta q_j)`.
    pub fn line_gap(&self, s: &UllmanPairSolution) -> Vector3<f64> {
        let wi = self.first.0 * s.alpha + self.first.1 * s.beta;
        let wj = self.second.0 * s.gamma + self.second.1 * s.delta;
        wi - wj
    }
}

/// Flags solutions whose two line representatives differ by a nonzero vector
/// perpendicular to the point plane.
///
/// Such a solution is the true intersection line of camera `i` with the
/// mirror image of camera `j` across the point plane. Pair readings alone
/// cannot tell it apart, so the classification needs the reference frames.
pub fn filter_spurious(solutions: Vec<UllmanPairSolution>, reference: &PairReference) -> Vec<UllmanPairSolution> {
    let n = reference.point_normal.normalize();
    solutions
        .into_iter()
        .map(|mut s| {
            let gap = reference.line_gap(&s);
            let len = gap.norm();
            s.spurious = len > tol::DEGENERACY && gap.cross(&n).norm() <= tol::DEGENERACY * len.max(1.0);
            s
        })
        .collect()
}
