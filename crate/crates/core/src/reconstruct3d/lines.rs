//! From intersection lines to camera frames and point depths.

use nalgebra::{Matrix2, Matrix3x2, Vector2, Vector3};

use crate::error::{Error, Result};
use crate::scene::{EulerFrame, ImageData3D};
use crate::tol;

/// Unit vectors `X` with `X . U = r` and `X . V = s`, for `U`, `V` in the
/// xy-plane. Returns the two choices of the z-sign (one when `|X_xy| = 1`).
pub fn third_line(u: &Vector3<f64>, v: &Vector3<f64>, r: f64, s: f64) -> Result<Vec<Vector3<f64>>> {
    let m = Matrix2::new(u.x, u.y, v.x, v.y);
    let det = m.determinant();
    if det.abs() <= tol::DEGENERACY * u.norm().max(1.0) * v.norm().max(1.0) {
        return Err(Error::ParallelLines);
    }
    let xy = m.try_inverse().ok_or(Error::ParallelLines)? * Vector2::new(r, s);
    let rem = 1.0 - xy.norm_squared();
    if rem < -tol::DEGENERACY {
        return Err(Error::NoRealSolution(format!("|X_xy|^2 exceeds 1 by {:e}", -rem)));
    }
    let z = rem.max(0.0).sqrt();
    if z <= tol::ALGEBRAIC {
        return Ok(vec![Vector3::new(xy.x, xy.y, 0.0)]);
    }
    Ok(vec![Vector3::new(xy.x, xy.y, z), Vector3::new(xy.x, xy.y, -z)])
}

/// Frame vectors `(p, q)` of a camera in which two known world directions have
/// known in-plane coordinates: `lines[k] = coords[k].x p + coords[k].y q`.
///
/// The result need not be orthonormal when the inputs are inconsistent; the
/// returned defect measures that.
pub fn recover_frame(lines: [Vector3<f64>; 2], coords: [Vector2<f64>; 2]) -> Result<(Vector3<f64>, Vector3<f64>, f64)> {
    let m = Matrix2::from_columns(&coords);
    if m.determinant().abs() <= tol::DEGENERACY {
        return Err(Error::DependentLines);
    }
    let inv = m.try_inverse().ok_or(Error::DependentLines)?;
    let pq = Matrix3x2::from_columns(&lines) * inv;
    let p: Vector3<f64> = pq.column(0).into();
    let q: Vector3<f64> = pq.column(1).into();
    let defect = (p.norm_squared() - 1.0)
        .abs()
        .max((q.norm_squared() - 1.0).abs())
        .max(p.dot(&q).abs());
    Ok((p, q, defect))
}

/// Depths of `P2`, `P3` by least squares given both camera frames.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DepthRecovery {
    pub z: [f64; 2],
    /// Max-abs residual of the four readings per point.
    pub residual: f64,
}

pub fn recover_depths(frames: [&EulerFrame; 2], data: &ImageData3D) -> Result<DepthRecovery> {
    let mut z = [0.0; 2];
    let mut residual = 0.0_f64;
    for (i, zi) in z.iter_mut().enumerate() {
        let [x, y] = data.xy[i];
        let mut num = 0.0;
        let mut den = 0.0;
        let mut rows = Vec::with_capacity(4);
        for (k, f) in frames.iter().enumerate() {
            for (vec, val) in [(f.p_vec, data.b[i][k]), (f.q_vec, data.a[i][k])] {
                let rhs = val - vec.x * x - vec.y * y;
                num += vec.z * rhs;
                den += vec.z * vec.z;
                rows.push((vec.z, rhs));
            }
        }
        if den <= tol::ALGEBRAIC {
            return Err(Error::Degenerate("both cameras contain the z-axis direction".into()));
        }
        *zi = num / den;
        residual = rows.iter().fold(residual, |m, (a, r)| m.max((a * *zi - r).abs()));
    }
    Ok(DepthRecovery { z, residual })
}
