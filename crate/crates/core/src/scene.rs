//! Scenes, cameras and image readings in normalized coordinates.
//!
//! The first point is pinned at the origin. In the plane the first camera is
//! the x-axis, so the x-coordinates `u`, `v` of the remaining points are read
//! off directly and only their ordinates and the two remaining camera angles
//! are unknown. In space the first camera is the xy-plane with the standard
//! basis, leaving two depths and two Euler frames unknown.

use nalgebra::{Matrix3, Vector2, Vector3};
use serde::{Deserialize, Serialize};

use crate::tol::{self, wrap_angle};

/// Planar scene: points `(0,0)`, `(u,p)`, `(v,q)`; camera directions
/// `(1,0)`, `(cos alpha, sin alpha)`, `(cos beta, sin beta)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scene2D {
    pub u: f64,
    pub v: f64,
    pub p: f64,
    pub q: f64,
    pub alpha: f64,
    pub beta: f64,
}

/// Readings of the planar cameras.
///
/// `a`, `c` are what cameras 2 and 3 see of the point `(u,p)`; `b`, `d` are
/// what they see of `(v,q)`:
///
/// ```text
/// u cos(alpha) + p sin(alpha) = a      v cos(alpha) + q sin(alpha) = b
/// u cos(beta)  + p sin(beta)  = c      v cos(beta)  + q sin(beta)  = d
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImageData2D {
    pub u: f64,
    pub v: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Scene2D {
    pub fn new(u: f64, p: f64, v: f64, q: f64, alpha: f64, beta: f64) -> Self {
        Scene2D {
            u,
            v,
            p,
            q,
            alpha: wrap_angle(alpha),
            beta: wrap_angle(beta),
        }
    }

    /// The reflection `(alpha, beta, p, q) -> (-alpha, -beta, -p, -q)`, which
    /// leaves every reading unchanged.
    pub fn mirror(&self) -> Self {
        Scene2D::new(self.u, -self.p, self.v, -self.q, -self.alpha, -self.beta)
    }

    /// Max-norm distance over `(p, q, alpha, beta)`; angles compared modulo 2 pi.
    pub fn distance(&self, other: &Scene2D) -> f64 {
        [
            (self.p - other.p).abs(),
            (self.q - other.q).abs(),
            tol::angle_diff(self.alpha, other.alpha).abs(),
            tol::angle_diff(self.beta, other.beta).abs(),
            (self.u - other.u).abs(),
            (self.v - other.v).abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn validate(&self) -> Degeneracy2D {
        self.validate_with(tol::RESIDUAL)
    }

    /// Flags each factor of the Jacobian determinant
    /// `sin(alpha) sin(beta) sin(alpha - beta) (u q - v p)` that vanishes.
    pub fn validate_with(&self, tol: f64) -> Degeneracy2D {
        let cross = self.u * self.q - self.v * self.p;
        let scale = (self.u * self.q).abs() + (self.v * self.p).abs();
        Degeneracy2D {
            camera2_on_camera1: self.alpha.sin().abs() <= tol,
            camera3_on_camera1: self.beta.sin().abs() <= tol,
            cameras_coincide: (self.alpha - self.beta).sin().abs() <= tol,
            collinear_points: tol::is_zero(cross, scale, tol),
        }
    }
}

/// Degeneracy flags of a planar scene.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Degeneracy2D {
    pub camera2_on_camera1: bool,
    pub camera3_on_camera1: bool,
    pub cameras_coincide: bool,
    pub collinear_points: bool,
}

impl Degeneracy2D {
    pub fn is_degenerate(&self) -> bool {
        self.camera2_on_camera1 || self.camera3_on_camera1 || self.cameras_coincide || self.collinear_points
    }
}

/// Orthonormal camera frame given by three Euler angles.
///
/// `p_vec` and `q_vec` are the images of `e1` and `e2`; the camera measures
/// `P . p_vec` and `P . q_vec`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "FrameAngles", into = "FrameRecord")]
pub struct EulerFrame {
    pub theta: f64,
    pub phi: f64,
    pub gamma: f64,
    pub p_vec: Vector3<f64>,
    pub q_vec: Vector3<f64>,
}

#[derive(Deserialize)]
struct FrameAngles {
    theta: f64,
    phi: f64,
    gamma: f64,
}

#[derive(Serialize)]
struct FrameRecord {
    theta: f64,
    phi: f64,
    gamma: f64,
    p_vec: [f64; 3],
    q_vec: [f64; 3],
}

impl From<FrameAngles> for EulerFrame {
    fn from(a: FrameAngles) -> Self {
        EulerFrame::from_angles(a.theta, a.phi, a.gamma)
    }
}

impl From<EulerFrame> for FrameRecord {
    fn from(f: EulerFrame) -> Self {
        FrameRecord {
            theta: f.theta,
            phi: f.phi,
            gamma: f.gamma,
            p_vec: f.p_vec.into(),
            q_vec: f.q_vec.into(),
        }
    }
}

/// Builds the camera frame for the angles `(theta, phi, gamma)`.
pub fn frame_from_angles(theta: f64, phi: f64, gamma: f64) -> EulerFrame {
    EulerFrame::from_angles(theta, phi, gamma)
}

impl EulerFrame {
    pub fn identity() -> Self {
        Self::from_angles(0.0, 0.0, 0.0)
    }

    pub fn from_angles(theta: f64, phi: f64, gamma: f64) -> Self {
        let theta = wrap_angle(theta);
        let phi = wrap_angle(phi);
        let gamma = wrap_angle(gamma);
        let (st, ct) = theta.sin_cos();
        let (sf, cf) = phi.sin_cos();
        let (sg, cg) = gamma.sin_cos();
        let p_vec = Vector3::new(cg * ct - cf * sg * st, -cf * ct * sg - cg * st, sg * sf);
        let q_vec = Vector3::new(ct * sg + cg * cf * st, cg * cf * ct - sg * st, -cg * sf);
        EulerFrame {
            theta,
            phi,
            gamma,
            p_vec,
            q_vec,
        }
    }

    /// Recovers Euler angles from an (approximately) orthonormal pair.
    ///
    /// The pair is Gram-Schmidt orthonormalized first. The returned angles have
    /// `phi` in `[0, pi]`; when `sin(phi) = 0` the split between `theta` and
    /// `gamma` is arbitrary and `gamma = 0` is chosen.
    pub fn from_vectors(p: &Vector3<f64>, q: &Vector3<f64>) -> Self {
        let p = p.normalize();
        let q = (q - p * p.dot(q)).normalize();
        let n = p.cross(&q);
        let sin_phi = n.x.hypot(n.y);
        let phi = sin_phi.atan2(n.z);
        let (theta, gamma) = if sin_phi > 1e-12 {
            (n.x.atan2(n.y), p.z.atan2(-q.z))
        } else {
            // gamma = 0 gives p = (cos theta, -sin theta, 0)
            ((-p.y).atan2(p.x), 0.0)
        };
        Self::from_angles(theta, phi, gamma)
    }

    /// Camera-plane normal `p x q = (sin phi sin theta, sin phi cos theta, cos phi)`.
    pub fn normal(&self) -> Vector3<f64> {
        self.p_vec.cross(&self.q_vec)
    }

    pub fn rotation(&self) -> Matrix3<f64> {
        Matrix3::from_columns(&[self.p_vec, self.q_vec, self.normal()])
    }

    /// Reflection through the xy-plane (`z -> -z` on both frame vectors).
    pub fn mirror_z(&self) -> Self {
        Self::from_angles(self.theta, -self.phi, self.gamma)
    }

    /// Projection of a point onto the camera plane, in `(p, q)` coordinates.
    pub fn project(&self, point: &Vector3<f64>) -> Vector2<f64> {
        Vector2::new(point.dot(&self.p_vec), point.dot(&self.q_vec))
    }

    /// Max deviation from orthonormality.
    pub fn orthonormality_defect(&self) -> f64 {
        (self.p_vec.norm() - 1.0)
            .abs()
            .max((self.q_vec.norm() - 1.0).abs())
            .max(self.p_vec.dot(&self.q_vec).abs())
    }

    /// Max-norm distance between frame vectors (angle aliasing does not matter).
    pub fn distance(&self, other: &EulerFrame) -> f64 {
        (self.p_vec - other.p_vec).amax().max((self.q_vec - other.q_vec).amax())
    }
}

/// Spatial scene: points `O`, `P2`, `P3` and cameras `xy-plane`, `cam2`, `cam3`.
///
/// The x,y-components of `P2`, `P3` are what camera 1 sees; their third
/// components are the two unknown depths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scene3D {
    #[serde(rename = "P2")]
    pub p2: [f64; 3],
    #[serde(rename = "P3")]
    pub p3: [f64; 3],
    pub cam2: EulerFrame,
    pub cam3: EulerFrame,
}

impl Scene3D {
    pub fn new(p2: [f64; 3], p3: [f64; 3], cam2: EulerFrame, cam3: EulerFrame) -> Self {
        Scene3D { p2, p3, cam2, cam3 }
    }

    /// Point `i` with `i = 0` for `P2` and `i = 1` for `P3`.
    pub fn point(&self, i: usize) -> Vector3<f64> {
        Vector3::from(if i == 0 { self.p2 } else { self.p3 })
    }

    /// Camera `j` with `j = 0` for camera 2 and `j = 1` for camera 3.
    pub fn camera(&self, j: usize) -> &EulerFrame {
        if j == 0 {
            &self.cam2
        } else {
            &self.cam3
        }
    }

    pub fn depths(&self) -> (f64, f64) {
        (self.p2[2], self.p3[2])
    }

    /// The global reflection restricted to the gauge: `z -> -z` for points and
    /// frames. Camera 1 (the xy-plane) is fixed by it.
    pub fn mirror(&self) -> Self {
        let [x2, y2, z2] = self.p2;
        let [x3, y3, z3] = self.p3;
        Scene3D {
            p2: [x2, y2, -z2],
            p3: [x3, y3, -z3],
            cam2: self.cam2.mirror_z(),
            cam3: self.cam3.mirror_z(),
        }
    }

    /// Max-norm distance over points and frame vectors.
    pub fn distance(&self, other: &Scene3D) -> f64 {
        let dp = (self.point(0) - other.point(0))
            .amax()
            .max((self.point(1) - other.point(1)).amax());
        dp.max(self.cam2.distance(&other.cam2))
            .max(self.cam3.distance(&other.cam3))
    }

    /// Normal of the plane through `O`, `P2`, `P3` (unnormalized).
    pub fn point_plane_normal(&self) -> Vector3<f64> {
        self.point(0).cross(&self.point(1))
    }

    pub fn validate(&self) -> Degeneracy3D {
        self.validate_with(tol::RESIDUAL)
    }

    pub fn validate_with(&self, tol: f64) -> Degeneracy3D {
        let n1 = Vector3::z();
        let n2 = self.cam2.normal();
        let n3 = self.cam3.normal();
        let (pa, pb) = (self.point(0), self.point(1));
        let cross = pa.cross(&pb).norm();
        Degeneracy3D {
            camera2_on_camera1: n1.cross(&n2).norm() <= tol,
            camera3_on_camera1: n1.cross(&n3).norm() <= tol,
            cameras_coincide: n2.cross(&n3).norm() <= tol,
            collinear_points: tol::is_zero(cross, pa.norm() * pb.norm(), tol),
            coplanar_normals: Matrix3::from_columns(&[n1, n2, n3]).determinant().abs() <= tol,
        }
    }
}

/// Degeneracy flags of a spatial scene.
///
/// `coplanar_normals` marks the reducible case (all camera planes share a
/// line); it does not make the scene unreconstructable and is not part of
/// [`Degeneracy3D::is_degenerate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Degeneracy3D {
    pub camera2_on_camera1: bool,
    pub camera3_on_camera1: bool,
    pub cameras_coincide: bool,
    pub collinear_points: bool,
    pub coplanar_normals: bool,
}

impl Degeneracy3D {
    pub fn is_degenerate(&self) -> bool {
        self.camera2_on_camera1 || self.camera3_on_camera1 || self.cameras_coincide || self.collinear_points
    }
}

/// Readings of the spatial cameras.
///
/// `xy[i]` is what camera 1 sees of point `i` (`i = 0` for `P2`, `1` for `P3`).
/// For camera `j` (`j = 0` for camera 2, `1` for camera 3),
/// `a[i][j] = P_i . q_j` and `b[i][j] = P_i . p_j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImageData3D {
    pub xy: [[f64; 2]; 2],
    pub a: [[f64; 2]; 2],
    pub b: [[f64; 2]; 2],
}

/// Coefficients of `a x + b y = c u + d v`, `e x + f y = g u + h v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
    pub g: f64,
    pub h: f64,
}

impl PairCoefficients {
    pub fn new(c: [f64; 8]) -> Self {
        let [a, b, c, d, e, f, g, h] = c;
        PairCoefficients { a, b, c, d, e, f, g, h }
    }

    pub fn to_array(&self) -> [f64; 8] {
        [self.a, self.b, self.c, self.d, self.e, self.f, self.g, self.h]
    }
}

impl ImageData3D {
    /// Reading `(along p, along q)` of point `i` (0 = `P2`, 1 = `P3`) in
    /// camera `cam` (1, 2 or 3).
    pub fn reading(&self, i: usize, cam: usize) -> (f64, f64) {
        match cam {
            1 => (self.xy[i][0], self.xy[i][1]),
            2 | 3 => (self.b[i][cam - 2], self.a[i][cam - 2]),
            _ => panic!("camera index {cam} out of range 1..=3"),
        }
    }

    /// Pair system for cameras `i < j` (1-based). Unknowns `(x, y)` are the
    /// coordinates of the intersection line in camera `i`, `(u, v)` those in
    /// camera `j`.
    pub fn pair_coefficients(&self, i: usize, j: usize) -> PairCoefficients {
        let (a, b) = self.reading(0, i);
        let (c, d) = self.reading(0, j);
        let (e, f) = self.reading(1, i);
        let (g, h) = self.reading(1, j);
        PairCoefficients { a, b, c, d, e, f, g, h }
    }

    /// Largest absolute reading; used for scale-aware tolerances.
    pub fn scale(&self) -> f64 {
        self.xy
            .iter()
            .chain(self.a.iter())
            .chain(self.b.iter())
            .flatten()
            .fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    pub fn to_vec(&self) -> Vec<f64> {
        vec![
            self.b[0][0],
            self.a[0][0],
            self.b[1][0],
            self.a[1][0],
            self.b[0][1],
            self.a[0][1],
            self.b[1][1],
            self.a[1][1],
        ]
    }
}

impl ImageData2D {
    pub fn scale(&self) -> f64 {
        [self.u, self.v, self.a, self.b, self.c, self.d]
            .into_iter()
            .fold(0.0, |m, x| m.max(x.abs()))
    }
}
