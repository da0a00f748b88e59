//! Minimum point counts for orthographic structure from motion by dimension
//! and number of cameras.

use orthosfm::feasibility::{dimension_table, min_points, render_table_csv, render_table_text, sfm_inequality};

pub fn main() {
    let rows = dimension_table(4, 4);
    print!("{}", render_table_text(&rows));
    print!("{}", render_table_csv(&rows));
    let n = min_points(3, 3).unwrap();
    println!("d = 3, m = 3: exact {} -> {}", n.exact, n.ceiling);
    println!("{:?}", sfm_inequality(3, 3, 3).unwrap());
}
