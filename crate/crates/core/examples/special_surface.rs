//! The explicit inverse on the surface `a = 0, c = u, d = 0`, checked by
//! projecting the result back.

use orthosfm::forward::project_2d;
use orthosfm::reconstruct2d::{special_surface_data, special_surface_inverse};

pub fn main() {
    for (u, v, b) in [(1.0, 1.6, 1.0), (0.5, -0.8, 2.0), (2.0, 3.0, -1.7)] {
        let scene = special_surface_inverse(u, v, b).expect("|v / 2b| < 1");
        let back = project_2d(&scene);
        let want = special_surface_data(u, v, b);
        let gap = [back.a - want.a, back.b - want.b, back.c - want.c, back.d - want.d]
            .iter()
            .fold(0f64, |m, x| m.max(x.abs()));
        println!("(u, v, b) = ({u}, {v}, {b}): {scene:?}, reprojection gap {gap:.1e}");
        assert!(gap < 1e-12);
    }
    // |v / 2b| > 1 has no real preimage
    println!("{}", special_surface_inverse(1.0, 5.0, 1.0).unwrap_err());
}
