//! Slow brute-force solvers and seeded scene generators used to cross-check
//! the closed forms.
//!
//! Both solvers reduce their problem to two equations in two angles, scan a
//! uniform grid for cells where both equations change sign, and polish each
//! hit with Newton's method.

use nalgebra::{Matrix2, Vector2, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::forward::jacobian_factors_3d;
use crate::forward::project_2d;
use crate::reconstruct2d::{closed_form_cosines, reprojection_residual};
use crate::reconstruct3d::ullman::{linear_residual, UllmanPairSolution};
use crate::scene::{EulerFrame, ImageData2D, PairCoefficients, Scene2D, Scene3D};
use crate::tol;

/// Angular grid step and residual acceptance of a scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub resolution: f64,
    pub tolerance: f64,
}

impl GridSpec {
    /// `2 pi / cells` per axis.
    pub fn with_cells(cells: usize, tolerance: f64) -> Self {
        GridSpec {
            resolution: TAU / cells as f64,
            tolerance,
        }
    }

    pub fn cells(&self) -> usize {
        (TAU / self.resolution).ceil() as usize
    }
}

/// More distinct clusters than this means a continuum of solutions.
pub const MAX_CLUSTERS: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleOutcome<T> {
    /// Distinct solutions sorted by parameters; empty on overflow.
    pub solutions: Vec<T>,
    /// Set when more than [`MAX_CLUSTERS`] clusters were found.
    pub overflow: bool,
    /// Grid cells where both equations change sign.
    pub flagged_cells: usize,
}

/// Scans `[-pi, pi)^2` for common zeros of `f`, given on precomputed
/// `(cos, sin)` of both angles. Returns polished zeros `(s, t)`.
fn scan_angles<F>(f: F, grid: &GridSpec, accept: impl Fn(f64, f64) -> bool) -> (Vec<[f64; 2]>, usize, bool)
where
    F: Fn(f64, f64, f64, f64) -> [f64; 2],
{
    let n = grid.cells();
    let h = TAU / n as f64;
    let trig: Vec<(f64, f64)> = (0..=n)
        .map(|k| (-PI + k as f64 * h).sin_cos())
        .map(|(s, c)| (c, s))
        .collect();
    let eval = |i: usize, j: usize| {
        let (ci, si) = trig[i];
        let (cj, sj) = trig[j];
        f(ci, si, cj, sj)
    };
    let mut prev: Vec<[f64; 2]> = (0..=n).map(|j| eval(0, j)).collect();
    let mut cur = vec![[0.0; 2]; n + 1];
    let mut found: Vec<[f64; 2]> = Vec::new();
    let mut flagged = 0;
    let cluster_radius = (10.0 * h).max(1e-6);
    for i in 1..=n {
        for (j, slot) in cur.iter_mut().enumerate() {
            *slot = eval(i, j);
        }
        for j in 0..n {
            let corners = [prev[j], prev[j + 1], cur[j], cur[j + 1]];
            let changes = |k: usize| {
                let lo = corners.iter().map(|c| c[k]).fold(f64::INFINITY, f64::min);
                let hi = corners.iter().map(|c| c[k]).fold(f64::NEG_INFINITY, f64::max);
                lo <= 0.0 && hi >= 0.0
            };
            if !(changes(0) && changes(1)) {
                continue;
            }
            flagged += 1;
            let start = [-PI + (i as f64 - 0.5) * h, -PI + (j as f64 + 0.5) * h];
            let Some(z) = newton(&f, start, 4.0 * h) else { continue };
            if !accept(z[0], z[1]) {
                continue;
            }
            if found.iter().all(|o| angle_dist(o, &z) > cluster_radius) {
                found.push(z);
                if found.len() > MAX_CLUSTERS {
                    return (Vec::new(), flagged, true);
                }
            }
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    found.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    (found, flagged, false)
}

fn angle_dist(a: &[f64; 2], b: &[f64; 2]) -> f64 {
    tol::angle_diff(a[0], b[0]).abs().max(tol::angle_diff(a[1], b[1]).abs())
}

/// Newton's method on `f(s, t) = 0` with a central-difference Jacobian,
/// staying within `reach` of the start.
fn newton<F>(f: &F, start: [f64; 2], reach: f64) -> Option<[f64; 2]>
where
    F: Fn(f64, f64, f64, f64) -> [f64; 2],
{
    let g = |s: f64, t: f64| {
        let (ss, cs) = s.sin_cos();
        let (st, ct) = t.sin_cos();
        Vector2::from(f(cs, ss, ct, st))
    };
    let mut z = Vector2::from(start);
    let h = 1e-7;
    for _ in 0..50 {
        let r = g(z.x, z.y);
        if r.amax() <= 1e-14 {
            break;
        }
        let ds = (g(z.x + h, z.y) - g(z.x - h, z.y)) / (2.0 * h);
        let dt = (g(z.x, z.y + h) - g(z.x, z.y - h)) / (2.0 * h);
        let jac = Matrix2::from_columns(&[ds, dt]);
        // pseudo-inverse: a rank-deficient Jacobian (solution curve) still converges
        let step = jac.pseudo_inverse(1e-12).ok()? * r;
        z -= step;
        if (z - Vector2::from(start)).amax() > reach || step.amax() < 1e-15 {
            break;
        }
    }
    let r = g(z.x, z.y);
    ((z - Vector2::from(start)).amax() <= reach && r.amax() <= 1e-9)
        .then(|| [tol::wrap_angle(z.x), tol::wrap_angle(z.y)])
}

/// Scene for fixed camera angles, with `p`, `q` fitted by least squares to all
/// four readings.
pub fn fit_depths_2d(data: &ImageData2D, alpha: f64, beta: f64) -> Scene2D {
    let (sa, ca) = alpha.sin_cos();
    let (sb, cb) = beta.sin_cos();
    let n = sa * sa + sb * sb;
    let p = (sa * (data.a - data.u * ca) + sb * (data.c - data.u * cb)) / n;
    let q = (sa * (data.b - data.v * ca) + sb * (data.d - data.v * cb)) / n;
    Scene2D::new(data.u, p, data.v, q, alpha, beta)
}

/// Grid-search inversion of planar data.
///
/// With `p`, `q` eliminated by least squares, the data are reproduced exactly
/// where both
/// `c sin(a) - a sin(b) + u sin(b - a)` and `d sin(a) - b sin(b) + v sin(b - a)`
/// vanish (the determinant of each 2x2 least-squares problem). Zeros with
/// `sin(alpha) = sin(beta) = 0` are discarded.
pub fn brute_invert_2d(data: &ImageData2D, grid: &GridSpec) -> OracleOutcome<Scene2D> {
    let ImageData2D { u, v, a, b, c, d } = *data;
    let f = |ca: f64, sa: f64, cb: f64, sb: f64| {
        let sba = sb * ca - cb * sa;
        [c * sa - a * sb + u * sba, d * sa - b * sb + v * sba]
    };
    let accept = tol::DEGENERACY.max(grid.tolerance) * data.scale().max(1.0);
    let keep = |al: f64, be: f64| {
        if al.sin().hypot(be.sin()) <= 1e-3 {
            return false;
        }
        reprojection_residual(&fit_depths_2d(data, al, be), data) <= accept
    };
    let (zeros, flagged, overflow) = scan_angles(f, grid, keep);
    let mut solutions: Vec<Scene2D> = zeros.iter().map(|z| fit_depths_2d(data, z[0], z[1])).collect();
    solutions.retain(|s| reprojection_residual(s, data) <= grid.tolerance * data.scale().max(1.0));
    OracleOutcome {
        solutions,
        overflow,
        flagged_cells: flagged,
    }
}

/// Grid-search solution of a pair system, parametrized by
/// `(x, y) = (cos s, sin s)` and `(u, v) = (cos t, sin t)`.
pub fn brute_ullman(c: &PairCoefficients, grid: &GridSpec) -> OracleOutcome<UllmanPairSolution> {
    let k = *c;
    let f = move |cs: f64, ss: f64, ct: f64, st: f64| {
        [
            k.a * cs + k.b * ss - k.c * ct - k.d * st,
            k.e * cs + k.f * ss - k.g * ct - k.h * st,
        ]
    };
    let (zeros, flagged, overflow) = scan_angles(f, grid, |_, _| true);
    let scale = c.to_array().iter().fold(1.0_f64, |m, x| m.max(x.abs()));
    let solutions = zeros
        .iter()
        .map(|z| UllmanPairSolution {
            alpha: z[0].cos(),
            beta: z[0].sin(),
            gamma: z[1].cos(),
            delta: z[1].sin(),
            spurious: false,
        })
        .filter(|s| linear_residual(c, s) <= grid.tolerance * scale)
        .collect();
    OracleOutcome {
        solutions,
        overflow,
        flagged_cells: flagged,
    }
}

/// Margin required of every degeneracy measure in generated scenes.
pub const SCENE_MARGIN: f64 = 0.1;

fn nondegenerate_2d(s: &Scene2D) -> bool {
    let m = SCENE_MARGIN;
    let (n2, n3) = (s.u.hypot(s.p), s.v.hypot(s.q));
    let cos = closed_form_cosines(&project_2d(s));
    s.alpha.sin().abs() >= m
        && s.beta.sin().abs() >= m
        && (s.alpha - s.beta).sin().abs() >= m
        && (s.u * s.q - s.v * s.p).abs() >= m * n2 * n3
        && cos.den_alpha.abs() >= 1e-3
        && cos.den_beta.abs() >= 1e-3
        && !s.validate_with(tol::DEGENERACY).is_degenerate()
}

fn nondegenerate_3d(s: &Scene3D) -> bool {
    let m = SCENE_MARGIN;
    let (pa, pb) = (s.point(0), s.point(1));
    if pa.cross(&pb).norm() < m * pa.norm() * pb.norm() {
        return false;
    }
    let frames = [EulerFrame::identity(), s.cam2, s.cam3];
    let normals = frames.map(|f| f.normal());
    if nalgebra::Matrix3::from_columns(&normals).determinant().abs() < m {
        return false;
    }
    for i in 0..3 {
        for j in (i + 1)..3 {
            if normals[i].cross(&normals[j]).norm() < m {
                return false;
            }
        }
        // projected points must not be collinear with the origin in any camera
        let (a, b) = (frames[i].project(&pa), frames[i].project(&pb));
        if (a.x * b.y - a.y * b.x).abs() < m * a.norm() * b.norm() || a.norm() < m || b.norm() < m {
            return false;
        }
    }
    let l23: Vector3<f64> = normals[1].cross(&normals[2]).normalize();
    if l23.z.abs() < m {
        return false;
    }
    let [s1, s2, k1, k2, _, bracket] = jacobian_factors_3d(s);
    let [x1, y1, z1] = s.p2;
    let [x2, y2, z2] = s.p3;
    let ab = (y2 * z1 - y1 * z2).hypot(x2 * z1 - x1 * z2);
    let scale = [y2 * z1 - y1 * z2, x2 * z1 - x1 * z2, y1 * x2 - x1 * y2]
        .iter()
        .fold(0.0_f64, |acc, x| acc.max(x.abs()));
    s1 >= m * m
        && s2 >= m * m
        && ab >= m * pa.norm() * pb.norm()
        && k1.abs() >= m * ab
        && k2.abs() >= m * ab
        && bracket.abs() >= m * scale
        && !s.validate_with(tol::DEGENERACY).is_degenerate()
}

fn uniform_angle(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen_range(-PI..PI)
}

/// Deterministic nondegenerate planar scene for `seed`.
pub fn random_scene_2d(seed: u64) -> Scene2D {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let s = Scene2D::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            uniform_angle(&mut rng),
            uniform_angle(&mut rng),
        );
        if nondegenerate_2d(&s) {
            return s;
        }
    }
}

/// Deterministic nondegenerate spatial scene for `seed`.
pub fn random_scene_3d(seed: u64) -> Scene3D {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut point = || {
            [
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            ]
        };
        let (p2, p3) = (point(), point());
        let mut frame =
            || EulerFrame::from_angles(uniform_angle(&mut rng), rng.gen_range(0.0..PI), uniform_angle(&mut rng));
        let (cam2, cam3) = (frame(), frame());
        let s = Scene3D::new(p2, p3, cam2, cam3);
        if nondegenerate_3d(&s) {
            return s;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AnyScene {
    Plane(Scene2D),
    Space(Scene3D),
}

/// Scene of dimension `dim` (2 or 3) for `seed`.
pub fn random_scene(seed: u64, dim: u8) -> Result<AnyScene> {
    match dim {
        2 => Ok(AnyScene::Plane(random_scene_2d(seed))),
        3 => Ok(AnyScene::Space(random_scene_3d(seed))),
        _ => Err(Error::InvalidArgument(format!("dimension must be 2 or 3, got {dim}"))),
    }
}

/// One frozen oracle run: input, output and the grid that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenRecord {
    pub name: String,
    pub kind: String,
    pub input: Vec<f64>,
    /// Flattened solutions; `(p, q, alpha, beta)` or `(alpha, beta, gamma, delta)` each.
    pub output: Vec<[f64; 4]>,
    pub overflow: bool,
    pub resolution: f64,
    pub tolerance: f64,
}

pub fn golden_invert_2d(name: &str, data: &ImageData2D, grid: &GridSpec) -> GoldenRecord {
    let out = brute_invert_2d(data, grid);
    GoldenRecord {
        name: name.into(),
        kind: "invert_2d".into(),
        input: vec![data.u, data.v, data.a, data.b, data.c, data.d],
        output: out.solutions.iter().map(|s| [s.p, s.q, s.alpha, s.beta]).collect(),
        overflow: out.overflow,
        resolution: grid.resolution,
        tolerance: grid.tolerance,
    }
}

pub fn golden_ullman(name: &str, c: &PairCoefficients, grid: &GridSpec) -> GoldenRecord {
    let out = brute_ullman(c, grid);
    GoldenRecord {
        name: name.into(),
        kind: "ullman_pair".into(),
        input: c.to_array().to_vec(),
        output: out.solutions.iter().map(|s| s.as_array()).collect(),
        overflow: out.overflow,
        resolution: grid.resolution,
        tolerance: grid.tolerance,
    }
}
