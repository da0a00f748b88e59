//! Full spatial reconstruction from three orthographic views.

use orthosfm::forward::project_3d;
use orthosfm::oracle::random_scene_3d;
use orthosfm::reconstruct3d::reconstruct_3d;
use orthosfm::tol;

pub fn main() {
    let scene = random_scene_3d(42);
    let data = project_3d(&scene);
    let set = reconstruct_3d(&data, tol::RESIDUAL).expect("generic scene reconstructs");
    println!("{} candidates", set.len());
    for (k, c) in set.iter().enumerate() {
        println!(
            "  {k}: P2 {:?} P3 {:?} residual {:.1e}",
            c.scene.p2, c.scene.p3, c.residual
        );
    }
    println!("distance to truth: {:.1e}", set.nearest(&scene).unwrap());
    assert!(set.contains(&scene, 1e-7));
    assert!(set.closed_under_reflection(1e-7));
}
