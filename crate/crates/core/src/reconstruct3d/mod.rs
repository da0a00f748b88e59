//! Inversion of the spatial map.
//!
//! Each pair of cameras meets in a line whose in-plane coordinates solve a
//! small polynomial system ([`ullman`]). The lines of pairs (1,2) and (1,3)
//! lie in the xy-plane; the line of pair (2,3) follows from its known angles
//! to them ([`lines::third_line`]). Two lines per camera fix its frame, and the
//! frames fix the depths. When all three camera normals are coplanar the
//! pairwise lines coincide and the problem reduces to the planar one.

pub mod lines;
pub mod ullman;

use nalgebra::{Matrix2, Vector2, Vector3};

use crate::candidates::{Candidate, CandidateSet};
use crate::error::{Error, Result};
use crate::forward::project_3d;
use crate::reconstruct2d::invert_2d;
use crate::scene::{EulerFrame, ImageData2D, ImageData3D, Scene2D, Scene3D};
use crate::tol;

pub use lines::{recover_depths, recover_frame, third_line, DepthRecovery};
pub use ullman::{filter_spurious, solve_ullman_pair, PairReference, QuarticAux, UllmanPairSolution};

/// Candidates closer than this (max-norm) are merged.
pub const SAME_SCENE: f64 = 1e-7;

/// Max-abs difference between the readings of `scene` and `data`.
pub fn reprojection_residual(scene: &Scene3D, data: &ImageData3D) -> f64 {
    let got = project_3d(scene);
    let mut r = 0.0_f64;
    for i in 0..2 {
        for k in 0..2 {
            r = r
                .max((got.xy[i][k] - data.xy[i][k]).abs())
                .max((got.a[i][k] - data.a[i][k]).abs())
                .max((got.b[i][k] - data.b[i][k]).abs());
        }
    }
    r
}

fn pair(data: &ImageData3D, i: usize, j: usize) -> Result<Vec<UllmanPairSolution>> {
    solve_ullman_pair(&data.pair_coefficients(i, j)).map_err(|e| match e {
        Error::SingularElimination(det) => {
            Error::Degenerate(format!("points project collinearly in camera {i} (af - be = {det:e})"))
        }
        Error::NoRealSolution(why) => Error::Infeasible(format!("cameras {i} and {j}: {why}")),
        other => other,
    })
}

/// Every reconstruction of `data`, sorted by residual.
///
/// Candidates reproject to within `tol * max(1, scale)`. The set is closed
/// under the global reflection and holds at most 64 scenes. Besides the true
/// scene and its mirror it generally contains scenes in which one camera is
/// reflected across the plane of the points; those fit the data equally well.
pub fn reconstruct_3d(data: &ImageData3D, tol: f64) -> Result<CandidateSet<Scene3D>> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let s12 = pair(data, 1, 2)?;
    let s13 = pair(data, 1, 3)?;
    let s23 = pair(data, 2, 3)?;

    let mut raw = Vec::new();
    for a in &s12 {
        for b in &s13 {
            for c in &s23 {
                raw.extend(assemble_combo(data, a, b, c));
            }
        }
    }

    let mut reduced_error = None;
    for line in common_lines_from(&s12, &s13) {
        match reconstruct_reduced(data, &line, tol) {
            Ok(found) => raw.extend(found),
            Err(e) => reduced_error = Some(e),
        }
    }

    let accept = tol * data.scale().max(1.0);
    let set = CandidateSet::assemble(raw, accept, SAME_SCENE);
    if set.is_empty() {
        return Err(
            reduced_error.unwrap_or_else(|| Error::Infeasible("no combination of pair solutions reprojects".into()))
        );
    }
    Ok(set)
}

fn assemble_combo(
    data: &ImageData3D,
    s12: &UllmanPairSolution,
    s13: &UllmanPairSolution,
    s23: &UllmanPairSolution,
) -> Vec<Candidate<Scene3D>> {
    let u = Vector3::new(s12.alpha, s12.beta, 0.0);
    let v = Vector3::new(s13.alpha, s13.beta, 0.0);
    let r = s12.gamma * s23.alpha + s12.delta * s23.beta;
    let s = s13.gamma * s23.gamma + s13.delta * s23.delta;
    let Ok(xs) = third_line(&u, &v, r, s) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for x in xs {
        let f2 = recover_frame(
            [u, x],
            [Vector2::new(s12.gamma, s12.delta), Vector2::new(s23.alpha, s23.beta)],
        );
        let f3 = recover_frame(
            [v, x],
            [Vector2::new(s13.gamma, s13.delta), Vector2::new(s23.gamma, s23.delta)],
        );
        let (Ok((p2, q2, d2)), Ok((p3, q3, d3))) = (f2, f3) else {
            continue;
        };
        let cam2 = EulerFrame::from_vectors(&p2, &q2);
        let cam3 = EulerFrame::from_vectors(&p3, &q3);
        let Ok(depths) = recover_depths([&cam2, &cam3], data) else {
            continue;
        };
        let [x2, y2] = data.xy[0];
        let [x3, y3] = data.xy[1];
        let scene = Scene3D::new([x2, y2, depths.z[0]], [x3, y3, depths.z[1]], cam2, cam3);
        let residual = reprojection_residual(&scene, data).max(d2).max(d3);
        if residual.is_finite() {
            out.push(Candidate { scene, residual });
        }
    }
    out
}

fn canonical_sign(l: Vector3<f64>) -> Vector3<f64> {
    let lead = if l.x.abs() > tol::DEGENERACY { l.x } else { l.y };
    if lead < 0.0 {
        -l
    } else {
        l
    }
}

fn common_lines_from(s12: &[UllmanPairSolution], s13: &[UllmanPairSolution]) -> Vec<Vector3<f64>> {
    let mut out: Vec<Vector3<f64>> = Vec::new();
    for a in s12 {
        for b in s13 {
            let u = Vector3::new(a.alpha, a.beta, 0.0);
            let v = Vector3::new(b.alpha, b.beta, 0.0);
            if u.cross(&v).norm() <= tol::DEGENERACY {
                let l = canonical_sign((u + v * u.dot(&v).signum()).normalize());
                if out.iter().all(|o| (o - l).amax() > tol::DEGENERACY) {
                    out.push(l);
                }
            }
        }
    }
    out
}

/// Directions in the xy-plane that are consistent with being a line shared by
/// all three camera planes, one per antipodal pair.
pub fn common_lines(data: &ImageData3D) -> Vec<Vector3<f64>> {
    match (
        solve_ullman_pair(&data.pair_coefficients(1, 2)),
        solve_ullman_pair(&data.pair_coefficients(1, 3)),
    ) {
        (Ok(a), Ok(b)) => common_lines_from(&a, &b),
        _ => Vec::new(),
    }
}

/// True when the readings admit a line common to all three camera planes,
/// i.e. the camera normals may be coplanar.
pub fn detect_coplanar_normals(data: &ImageData3D) -> bool {
    !common_lines(data).is_empty()
}

/// How a planar reconstruction maps back to space once the common line is
/// known.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BackMap {
    /// The common line, in the xy-plane.
    pub line: Vector3<f64>,
    /// In-plane unit vector of camera 1 perpendicular to the line.
    pub m1: Vector3<f64>,
    /// Coordinates `(gamma_j, delta_j)` of the line in cameras 2 and 3.
    pub in_plane: [Vector2<f64>; 2],
    pub xy: [[f64; 2]; 2],
}

impl BackMap {
    /// Spatial scene whose shadow on the plane orthogonal to the line is
    /// `planar`.
    pub fn lift(&self, planar: &Scene2D) -> Scene3D {
        let e3 = Vector3::z();
        let frame = |angle: f64, g: &Vector2<f64>| {
            let m = self.m1 * angle.cos() + e3 * angle.sin();
            let p = self.line * g.x - m * g.y;
            let q = self.line * g.y + m * g.x;
            EulerFrame::from_vectors(&p, &q)
        };
        let [x2, y2] = self.xy[0];
        let [x3, y3] = self.xy[1];
        Scene3D::new(
            [x2, y2, planar.p],
            [x3, y3, planar.q],
            frame(planar.alpha, &self.in_plane[0]),
            frame(planar.beta, &self.in_plane[1]),
        )
    }
}

/// Planar data seen in the plane orthogonal to `common_line`.
///
/// Fails with `Infeasible` when `common_line` is not a line of every camera
/// plane for these readings, and with `Degenerate` when a camera sees both
/// points on one line through the origin.
pub fn reduce_to_2d(data: &ImageData3D, common_line: &Vector3<f64>) -> Result<(ImageData2D, BackMap)> {
    if common_line.z.abs() > tol::DEGENERACY || common_line.norm() <= tol::DEGENERACY {
        return Err(Error::InvalidArgument(
            "common line must be a nonzero direction in the xy-plane".into(),
        ));
    }
    let line = Vector3::new(common_line.x, common_line.y, 0.0).normalize();
    let m1 = Vector3::new(-line.y, line.x, 0.0);
    let dot = |i: usize, v: &Vector3<f64>| data.xy[i][0] * v.x + data.xy[i][1] * v.y;
    let rhs = Vector2::new(dot(0, &line), dot(1, &line));

    let mut in_plane = [Vector2::zeros(); 2];
    let mut readings = [[0.0; 2]; 2];
    for j in 0..2 {
        let m = Matrix2::new(data.b[0][j], data.a[0][j], data.b[1][j], data.a[1][j]);
        let inv = m
            .try_inverse()
            .filter(|_| m.determinant().abs() > tol::DEGENERACY * data.scale().max(1.0).powi(2))
            .ok_or_else(|| Error::Degenerate(format!("camera {} sees the points on one line", j + 2)))?;
        let g = inv * rhs;
        if (g.norm() - 1.0).abs() > 1e-6 {
            return Err(Error::Infeasible(format!(
                "line is not contained in camera {} (|g| = {})",
                j + 2,
                g.norm()
            )));
        }
        let g = g.normalize();
        in_plane[j] = g;
        for (i, row) in readings.iter_mut().enumerate() {
            row[j] = -g.y * data.b[i][j] + g.x * data.a[i][j];
        }
    }
    let planar = ImageData2D {
        u: dot(0, &m1),
        v: dot(1, &m1),
        a: readings[0][0],
        b: readings[1][0],
        c: readings[0][1],
        d: readings[1][1],
    };
    Ok((
        planar,
        BackMap {
            line,
            m1,
            in_plane,
            xy: data.xy,
        },
    ))
}

fn reconstruct_reduced(data: &ImageData3D, line: &Vector3<f64>, tol: f64) -> Result<Vec<Candidate<Scene3D>>> {
    let (planar, back) = reduce_to_2d(data, line)?;
    let set = invert_2d(&planar, tol)?;
    Ok(set
        .iter()
        .map(|c| {
            let scene = back.lift(&c.scene);
            Candidate {
                scene,
                residual: reprojection_residual(&scene, data),
            }
        })
        .collect())
}
