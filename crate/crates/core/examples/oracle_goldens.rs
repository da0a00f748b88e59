//! Brute-force oracle runs frozen as golden records. With a path argument the
//! records are written there; the checked-in copy lives in
//! `tests/golden/oracle.json`.

use std::path::Path;

use orthosfm::forward::{project_2d, project_3d};
use orthosfm::oracle::{golden_invert_2d, golden_ullman, random_scene_2d, random_scene_3d, GoldenRecord, GridSpec};
use orthosfm::ImageData2D;

pub fn records() -> Vec<GoldenRecord> {
    let grid = GridSpec::with_cells(1000, 1e-9);
    let mut out = Vec::new();
    for seed in [1, 2, 3] {
        out.push(golden_invert_2d(
            &format!("planar-seed-{seed}"),
            &project_2d(&random_scene_2d(seed)),
            &grid,
        ));
    }
    let bad = ImageData2D {
        u: 1.0,
        v: 5.0,
        a: 0.0,
        b: 1.0,
        c: 1.0,
        d: 0.0,
    };
    out.push(golden_invert_2d("planar-infeasible", &bad, &grid));
    for seed in [1, 2] {
        let data = project_3d(&random_scene_3d(seed));
        for (i, j) in [(1, 2), (2, 3)] {
            out.push(golden_ullman(
                &format!("pair-seed-{seed}-{i}{j}"),
                &data.pair_coefficients(i, j),
                &grid,
            ));
        }
    }
    out
}

pub fn main() {
    run(std::env::args().nth(1).as_deref().map(Path::new));
}

pub fn run(out: Option<&Path>) {
    let recs = records();
    let text = serde_json::to_string_pretty(&recs).expect("records serialize") + "\n";
    match out {
        Some(path) => {
            std::fs::write(path, text).expect("write goldens");
            println!("wrote {} records to {}", recs.len(), path.display());
        }
        None => {
            for r in &recs {
                println!("{}: {} solutions, overflow {}", r.name, r.output.len(), r.overflow);
            }
        }
    }
}
