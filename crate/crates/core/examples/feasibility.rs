//! Which readings come from a real scene: the planar classifier, the
//! two-camera solvability test and the spatial classifier.

use num_complex::Complex64;
use orthosfm::feasibility::{angle_interval, classify_2d, classify_3d, pair_has_solution, ullman_pair_solvable};
use orthosfm::forward::project_3d;
use orthosfm::oracle::random_scene_3d;
use orthosfm::scene::PairCoefficients;
use orthosfm::{tol, ImageData2D};

pub fn main() {
    let bad = ImageData2D {
        u: 1.0,
        v: 5.0,
        a: 0.0,
        b: 1.0,
        c: 1.0,
        d: 0.0,
    };
    println!(
        "planar (1, 5, 0, 1, 1, 0): {:?}",
        classify_2d(&bad, tol::RESIDUAL).unwrap()
    );

    let i = angle_interval(Complex64::new(2.0, 0.0), Complex64::new(0.0, 3.0), 720).unwrap();
    println!("I(2, 3i) = {:?}, measure {:.4}", i.arcs, i.measure());

    let unsolvable = PairCoefficients::new([2.0, 0.0, 1.0, 0.0, 0.0, 2.0, 0.0, 1.0]);
    let lemma = ullman_pair_solvable(&unsolvable).unwrap();
    println!("pair test {lemma}, solver {}", pair_has_solution(&unsolvable));
    assert_eq!(lemma, pair_has_solution(&unsolvable));

    let report = classify_3d(&project_3d(&random_scene_3d(1)), tol::RESIDUAL).unwrap();
    println!(
        "spatial: reconstructable {}, pairs {:?}",
        report.verdict.is_reconstructable(),
        report.pairs_solvable
    );
}
