//! Solve the two-camera line equations for each camera pair of a scene and
//! mark which solutions are the mirrored-camera branch.

use orthosfm::forward::project_3d;
use orthosfm::oracle::random_scene_3d;
use orthosfm::reconstruct3d::{filter_spurious, solve_ullman_pair, PairReference};
use orthosfm::EulerFrame;

pub fn main() {
    let scene = random_scene_3d(7);
    let data = project_3d(&scene);
    let frames = [EulerFrame::identity(), scene.cam2, scene.cam3];
    for (i, j) in [(1, 2), (1, 3), (2, 3)] {
        let c = data.pair_coefficients(i, j);
        let sols = solve_ullman_pair(&c).expect("projected data is solvable");
        let reference = PairReference::from_frames(&frames[i - 1], &frames[j - 1], scene.point_plane_normal());
        println!("cameras ({i}, {j}):");
        for s in filter_spurious(sols, &reference) {
            let tag = if s.spurious { "mirrored" } else { "true line" };
            println!("  {:?} {tag}", s.as_array());
        }
    }
}
