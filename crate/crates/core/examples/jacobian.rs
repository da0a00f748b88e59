//! Closed-form Jacobian determinants of the forward maps against central
//! differences.

use orthosfm::forward::{jacobian_factors_3d, jacobian_report_2d, jacobian_report_3d};
use orthosfm::oracle::{random_scene_2d, random_scene_3d};

pub fn main() {
    for seed in 0..3 {
        let r = jacobian_report_2d(&random_scene_2d(seed));
        println!(
            "2d seed {seed}: closed {:+.6e} numeric {:+.6e} gap {:.1e}",
            r.closed_form, r.numeric, r.relative_gap
        );
        assert!(r.relative_gap < 1e-6);
    }
    for seed in 0..3 {
        let s = random_scene_3d(seed);
        let r = jacobian_report_3d(&s);
        println!(
            "3d seed {seed}: closed {:+.6e} numeric {:+.6e} gap {:.1e}",
            r.closed_form, r.numeric, r.relative_gap
        );
        println!("  factors {:?}", jacobian_factors_3d(&s));
        assert!(r.relative_gap < 1e-6);
    }
}
