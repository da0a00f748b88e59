//! Project a planar scene into three cameras and invert the readings.
//! The scene and its reflection come back as the two candidates.

use orthosfm::forward::project_2d;
use orthosfm::reconstruct2d::invert_2d;
use orthosfm::{tol, Scene2D};

pub fn main() {
    let scene = Scene2D::new(1.0, 0.4, -0.3, 1.2, 0.9, -1.4);
    let data = project_2d(&scene);
    println!("readings: {data:?}");

    let set = invert_2d(&data, tol::RESIDUAL).expect("generic scene inverts");
    for (k, c) in set.iter().enumerate() {
        println!("candidate {k}: {:?} residual {:.1e}", c.scene, c.residual);
    }
    assert!(set.contains(&scene, 1e-9));
    assert!(set.contains(&scene.mirror(), 1e-9));
    println!("mirror pairs: {:?}", set.ambiguity_note);
}
