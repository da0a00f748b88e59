//! SVG drawings of a scene and of its candidate set. Files go to the
//! directory given as the first argument, or the system temp directory.

use std::path::{Path, PathBuf};

use orthosfm::forward::project_3d;
use orthosfm::oracle::random_scene_3d;
use orthosfm::plot::{svg_candidates_3d, svg_scene_3d};
use orthosfm::reconstruct3d::reconstruct_3d;
use orthosfm::tol;

pub fn main() {
    run(&std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(std::env::temp_dir));
}

pub fn run(dir: &Path) {
    let scene = random_scene_3d(3);
    let set = reconstruct_3d(&project_3d(&scene), tol::RESIDUAL).expect("generic scene reconstructs");
    let scene_svg = dir.join("orthosfm-scene.svg");
    let cand_svg = dir.join("orthosfm-candidates.svg");
    std::fs::write(&scene_svg, svg_scene_3d(&scene)).expect("write scene plot");
    std::fs::write(&cand_svg, svg_candidates_3d(&set.candidates, "")).expect("write candidate plot");
    println!(
        "wrote {} and {} ({} candidates)",
        scene_svg.display(),
        cand_svg.display(),
        set.len()
    );
}
