//! Cameras whose viewing directions lie in one plane all share a common
//! line. The spatial problem then collapses to the planar one.

use nalgebra::{Vector2, Vector3};
use orthosfm::forward::project_3d;
use orthosfm::reconstruct3d::{common_lines, detect_coplanar_normals, reconstruct_3d, BackMap};
use orthosfm::{tol, Scene2D};

pub fn main() {
    let line = Vector3::x();
    let back = BackMap {
        line,
        m1: Vector3::y(),
        in_plane: [Vector2::new(0.8, 0.6), Vector2::new(0.0, 1.0)],
        xy: [[0.6, -0.4], [-0.3, 0.8]],
    };
    let scene = back.lift(&Scene2D {
        u: 0.0,
        v: 0.0,
        p: 0.7,
        q: -0.5,
        alpha: 1.1,
        beta: -0.6,
    });
    let data = project_3d(&scene);
    assert!(detect_coplanar_normals(&data));
    println!("common lines: {:?}", common_lines(&data));

    let set = reconstruct_3d(&data, tol::RESIDUAL).expect("coplanar scene reconstructs");
    println!(
        "{} candidates, distance to truth {:.1e}",
        set.len(),
        set.nearest(&scene).unwrap()
    );
    assert!(set.contains(&scene, 1e-7));
}
