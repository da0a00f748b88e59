//! The structure-from-motion map and its Jacobian determinant.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::scene::{EulerFrame, ImageData2D, ImageData3D, Scene2D, Scene3D};
use crate::tol;

/// Readings of the planar cameras for `scene`.
pub fn project_2d(scene: &Scene2D) -> ImageData2D {
    let (sa, ca) = scene.alpha.sin_cos();
    let (sb, cb) = scene.beta.sin_cos();
    ImageData2D {
        u: scene.u,
        v: scene.v,
        a: scene.u * ca + scene.p * sa,
        b: scene.v * ca + scene.q * sa,
        c: scene.u * cb + scene.p * sb,
        d: scene.v * cb + scene.q * sb,
    }
}

/// Readings of the spatial cameras for `scene`.
pub fn project_3d(scene: &Scene3D) -> ImageData3D {
    let mut a = [[0.0; 2]; 2];
    let mut b = [[0.0; 2]; 2];
    for i in 0..2 {
        let point = scene.point(i);
        for j in 0..2 {
            let cam = scene.camera(j);
            a[i][j] = point.dot(&cam.q_vec);
            b[i][j] = point.dot(&cam.p_vec);
        }
    }
    ImageData3D {
        xy: [[scene.p2[0], scene.p2[1]], [scene.p3[0], scene.p3[1]]],
        a,
        b,
    }
}

/// `sin(alpha) sin(beta) sin(alpha - beta) (u q - v p)`.
pub fn jacobian_det_2d(scene: &Scene2D) -> f64 {
    scene.alpha.sin() * scene.beta.sin() * (scene.alpha - scene.beta).sin() * (scene.u * scene.q - scene.v * scene.p)
}

/// Closed-form Jacobian determinant of the reduced spatial map, as a product
/// of its six factors. With `P2 = (x1, y1, z1)`, `P3 = (x2, y2, z2)` and the
/// angles of cameras 2 and 3 indexed 1 and 2:
///
/// ```text
/// A = y2 z1 - y1 z2,  B = x2 z1 - x1 z2,  C = y1 z2 - y2 z1,  D = y1 x2 - x1 y2
/// det = sin^2(phi1) sin^2(phi2) (A cos th1 + B sin th1) (A cos th2 + B sin th2)
///       * (cos phi2 sin phi1 (A cos th1 + B sin th1)
///          + sin phi2 (D sin phi1 sin(th1 - th2) + cos phi1 (C cos th2 - B sin th2)))
/// ```
///
/// `C = -A` as printed; the product still equals the exact determinant.
pub fn jacobian_det_3d(scene: &Scene3D) -> f64 {
    jacobian_factors_3d(scene).iter().product()
}

/// The six factors of [`jacobian_det_3d`], in order.
pub fn jacobian_factors_3d(scene: &Scene3D) -> [f64; 6] {
    let [x1, y1, z1] = scene.p2;
    let [x2, y2, z2] = scene.p3;
    let (t1, f1) = (scene.cam2.theta, scene.cam2.phi);
    let (t2, f2) = (scene.cam3.theta, scene.cam3.phi);
    let a = y2 * z1 - y1 * z2;
    let b = x2 * z1 - x1 * z2;
    let c = y1 * z2 - y2 * z1;
    let d = y1 * x2 - x1 * y2;
    let k1 = a * t1.cos() + b * t1.sin();
    let k2 = a * t2.cos() + b * t2.sin();
    let bracket = f2.cos() * f1.sin() * k1
        + f2.sin() * (d * f1.sin() * (t1 - t2).sin() + f1.cos() * (c * t2.cos() - b * t2.sin()));
    [f1.sin().powi(2), f2.sin().powi(2), k1, k2, 1.0, bracket]
}

/// A scene viewed as a point of the reduced unknown space, mapped to the
/// stacked readings.
pub trait ReducedMap: Sized {
    fn params(&self) -> Vec<f64>;
    fn with_params(&self, params: &[f64]) -> Self;
    fn readings(&self) -> Vec<f64>;
}

impl ReducedMap for Scene2D {
    /// `(p, q, alpha, beta)`
    fn params(&self) -> Vec<f64> {
        vec![self.p, self.q, self.alpha, self.beta]
    }
    fn with_params(&self, x: &[f64]) -> Self {
        Scene2D {
            p: x[0],
            q: x[1],
            alpha: x[2],
            beta: x[3],
            ..*self
        }
    }
    /// `(a, b, c, d)`
    fn readings(&self) -> Vec<f64> {
        let d = project_2d(self);
        vec![d.a, d.b, d.c, d.d]
    }
}

impl ReducedMap for Scene3D {
    /// `(z1, z2, theta2, phi2, gamma2, theta3, phi3, gamma3)`
    fn params(&self) -> Vec<f64> {
        let (c2, c3) = (&self.cam2, &self.cam3);
        vec![
            self.p2[2], self.p3[2], c2.theta, c2.phi, c2.gamma, c3.theta, c3.phi, c3.gamma,
        ]
    }
    fn with_params(&self, x: &[f64]) -> Self {
        Scene3D {
            p2: [self.p2[0], self.p2[1], x[0]],
            p3: [self.p3[0], self.p3[1], x[1]],
            cam2: EulerFrame::from_angles(x[2], x[3], x[4]),
            cam3: EulerFrame::from_angles(x[5], x[6], x[7]),
        }
    }
    /// `(p2.P2, q2.P2, p2.P3, q2.P3, p3.P2, q3.P2, p3.P3, q3.P3)`
    fn readings(&self) -> Vec<f64> {
        project_3d(self).to_vec()
    }
}

/// Central-difference Jacobian and its determinant.
#[derive(Debug, Clone)]
pub struct NumericJacobian {
    pub matrix: DMatrix<f64>,
    pub det: f64,
}

/// Central-difference Jacobian of the reduced map at `scene`.
pub fn jacobian_numeric<S: ReducedMap>(scene: &S, step: f64) -> Result<NumericJacobian> {
    if step.is_nan() || step <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "finite-difference step must be positive, got {step}"
        )));
    }
    let x0 = scene.params();
    let n = x0.len();
    let mut matrix = DMatrix::zeros(n, n);
    for k in 0..n {
        let mut xp = x0.clone();
        let mut xm = x0.clone();
        xp[k] += step;
        xm[k] -= step;
        let fp = scene.with_params(&xp).readings();
        let fm = scene.with_params(&xm).readings();
        for (row, (hi, lo)) in fp.iter().zip(&fm).enumerate() {
            matrix[(row, k)] = (hi - lo) / (2.0 * step);
        }
    }
    let det = matrix.clone().determinant();
    Ok(NumericJacobian { matrix, det })
}

/// Closed form vs. numeric determinant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobianReport {
    pub closed_form: f64,
    pub numeric: f64,
    pub relative_gap: f64,
}

impl JacobianReport {
    pub fn new(closed_form: f64, numeric: f64) -> Self {
        JacobianReport {
            closed_form,
            numeric,
            relative_gap: (closed_form - numeric).abs() / closed_form.abs().max(1.0),
        }
    }
}

pub fn jacobian_report_2d(scene: &Scene2D) -> JacobianReport {
    let numeric = jacobian_numeric(scene, tol::FD_STEP)
        .expect("default step is positive")
        .det;
    JacobianReport::new(jacobian_det_2d(scene), numeric)
}

pub fn jacobian_report_3d(scene: &Scene3D) -> JacobianReport {
    let numeric = jacobian_numeric(scene, tol::FD_STEP)
        .expect("default step is positive")
        .det;
    JacobianReport::new(jacobian_det_3d(scene), numeric)
}
