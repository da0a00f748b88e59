//! Acceptance criteria, one line each: `PASS`/`FAIL`, number, name, details.
//!
//! Run with `cargo test --test acceptance`. Exits nonzero if any criterion
//! fails.

use std::f64::consts::PI;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use nalgebra::{Vector2, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use orthosfm::feasibility::{pair_has_solution, ullman_pair_solvable};
use orthosfm::forward::{jacobian_det_3d, jacobian_numeric, jacobian_report_2d, project_2d, project_3d};
use orthosfm::oracle::{brute_invert_2d, brute_ullman, random_scene_2d, random_scene_3d, GridSpec};
use orthosfm::reconstruct2d::{invert_2d, reprojection_residual, special_surface_data, special_surface_inverse};
use orthosfm::reconstruct3d::ullman::{circle_residual, linear_residual};
use orthosfm::reconstruct3d::{
    common_lines, detect_coplanar_normals, reconstruct_3d, reduce_to_2d, solve_ullman_pair, BackMap, UllmanPairSolution,
};
use orthosfm::scene::{EulerFrame, ImageData2D, PairCoefficients};
use orthosfm::{tol, Error, Scene2D, Scene3D};

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn within(limit: Duration, start: Instant) -> (bool, String) {
    let t = start.elapsed();
    (
        t <= limit,
        format!("{:.2}s (limit {}s)", t.as_secs_f64(), limit.as_secs()),
    )
}

/// 1. Planar roundtrip on 1000 seeded scenes.
fn roundtrip_2d() -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut worst = 0.0_f64;
    for seed in 0..1000 {
        let s = random_scene_2d(seed);
        match invert_2d(&project_2d(&s), tol::RESIDUAL) {
            Ok(set) => {
                let d = set.nearest(&s).unwrap();
                let m = set.nearest(&s.mirror()).unwrap();
                worst = worst.max(d).max(m);
                if set.len() != 2 || d > 1e-9 || m > 1e-9 {
                    bad.push(seed);
                }
            }
            Err(_) => bad.push(seed),
        }
    }
    let (fast, time) = within(Duration::from_secs(5), start);
    check(
        bad.is_empty() && fast,
        format!(
            "1000 scenes, failures {:?}, worst distance {worst:.1e}, {time}",
            &bad[..bad.len().min(5)]
        ),
    )
}

/// 2. The infeasible planar example, confirmed by exhaustive search.
fn infeasible_2d() -> Outcome {
    let data = ImageData2D {
        u: 1.0,
        v: 5.0,
        a: 0.0,
        b: 1.0,
        c: 1.0,
        d: 0.0,
    };
    let closed = matches!(invert_2d(&data, tol::RESIDUAL), Err(Error::Infeasible(_)));
    let start = Instant::now();
    let brute = brute_invert_2d(&data, &GridSpec::with_cells(10_000, tol::RESIDUAL));
    let (fast, time) = within(Duration::from_secs(30), start);
    check(
        closed && brute.solutions.is_empty() && !brute.overflow && fast,
        format!(
            "closed form infeasible: {closed}, oracle solutions at 2pi/1e4: {}, sign-change cells {}, {time}",
            brute.solutions.len(),
            brute.flagged_cells
        ),
    )
}

/// 3. Planar Jacobian: closed form against finite differences.
fn jacobian_2d() -> Outcome {
    let mut worst = 0.0_f64;
    for seed in 0..1000 {
        worst = worst.max(jacobian_report_2d(&random_scene_2d(seed)).relative_gap);
    }
    let mut worst_zero = 0.0_f64;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for k in 0..100 {
        let s = random_scene_2d(10_000 + k);
        let coincident = Scene2D { beta: s.alpha, ..s };
        let t = rng.gen_range(-2.0..2.0);
        let collinear = Scene2D {
            v: t * s.u,
            q: t * s.p,
            ..s
        };
        for d in [coincident, collinear] {
            let r = jacobian_report_2d(&d);
            worst_zero = worst_zero.max(r.closed_form.abs()).max(r.numeric.abs());
        }
    }
    check(
        worst <= 1e-6 && worst_zero <= 1e-8,
        format!("1000 scenes, worst relative gap {worst:.1e}; 200 degenerate scenes, worst |det| {worst_zero:.1e}"),
    )
}

fn degenerate_3d(kind: usize, s: &Scene3D, rng: &mut ChaCha8Rng) -> Scene3D {
    let mut d = *s;
    let [x1, y1, z1] = s.p2;
    let [x2, y2, z2] = s.p3;
    let (a, b) = (y2 * z1 - y1 * z2, x2 * z1 - x1 * z2);
    match kind {
        // camera 2 parallel to camera 1
        0 => d.cam2 = EulerFrame::from_angles(s.cam2.theta, 0.0, s.cam2.gamma),
        // camera 3 parallel to camera 1
        1 => d.cam3 = EulerFrame::from_angles(s.cam3.theta, 0.0, s.cam3.gamma),
        // A cos(theta) + B sin(theta) = 0 for camera 2
        2 => d.cam2 = EulerFrame::from_angles((-a).atan2(b), s.cam2.phi, s.cam2.gamma),
        // the same for camera 3
        3 => d.cam3 = EulerFrame::from_angles((-a).atan2(b), s.cam3.phi, s.cam3.gamma),
        // collinear points
        _ => {
            let t = rng.gen_range(0.3..1.5);
            d.p3 = [t * x1, t * y1, t * z1];
        }
    }
    d
}

/// 4. Spatial Jacobian: zero sets and signs of the closed form and
///    the numeric 8x8 determinant.
fn jacobian_3d() -> Outcome {
    let mut sign_mismatch = 0;
    let mut worst_ratio_gap = 0.0_f64;
    for seed in 0..200 {
        let s = random_scene_3d(seed);
        let closed = jacobian_det_3d(&s);
        let numeric = jacobian_numeric(&s, tol::FD_STEP).unwrap().det;
        if closed.signum() != numeric.signum() || closed.abs() < 1e-8 || numeric.abs() < 1e-8 {
            sign_mismatch += 1;
        }
        worst_ratio_gap = worst_ratio_gap.max((numeric / closed - 1.0).abs());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst_zero = 0.0_f64;
    for k in 0..50 {
        let d = degenerate_3d(k % 5, &random_scene_3d(5_000 + k as u64), &mut rng);
        let closed = jacobian_det_3d(&d);
        let numeric = jacobian_numeric(&d, tol::FD_STEP).unwrap().det;
        worst_zero = worst_zero.max(closed.abs()).max(numeric.abs());
    }
    check(
        sign_mismatch == 0 && worst_zero <= 1e-8,
        format!(
            "200 scenes, sign mismatches {sign_mismatch}, worst |numeric/closed - 1| {worst_ratio_gap:.1e}; 50 degenerate scenes, worst |det| {worst_zero:.1e}"
        ),
    )
}

/// 5. Pair equations against ground truth and the grid oracle.
fn ullman_pairs() -> Outcome {
    let start = Instant::now();
    let grid = GridSpec::with_cells(1000, tol::RESIDUAL);
    let mut failures = Vec::new();
    let mut max_count = 0;
    for seed in 0..200 {
        let s = random_scene_3d(seed);
        let data = project_3d(&s);
        let frames = [EulerFrame::identity(), s.cam2, s.cam3];
        for (i, j) in [(1, 2), (1, 3), (2, 3)] {
            let c = data.pair_coefficients(i, j);
            let Ok(sols) = solve_ullman_pair(&c) else {
                failures.push((seed, i, j, "no solution"));
                continue;
            };
            max_count = max_count.max(sols.len());
            let ok_eq = sols.len() <= 8
                && sols
                    .iter()
                    .all(|x| linear_residual(&c, x) <= 1e-9 && circle_residual(x) <= 1e-9);
            let (fi, fj) = (&frames[i - 1], &frames[j - 1]);
            let line = fi.normal().cross(&fj.normal()).normalize();
            let truth = UllmanPairSolution {
                alpha: line.dot(&fi.p_vec),
                beta: line.dot(&fi.q_vec),
                gamma: line.dot(&fj.p_vec),
                delta: line.dot(&fj.q_vec),
                spurious: false,
            };
            let ok_truth = sols.iter().any(|x| x.distance(&truth) <= 1e-9);
            let brute = brute_ullman(&c, &grid);
            let ok_oracle = !brute.overflow
                && brute
                    .solutions
                    .iter()
                    .all(|b| sols.iter().any(|x| x.distance(b) <= 1e-3));
            if !(ok_eq && ok_truth && ok_oracle) {
                failures.push((
                    seed,
                    i,
                    j,
                    if !ok_eq {
                        "equations"
                    } else if !ok_truth {
                        "truth"
                    } else {
                        "oracle"
                    },
                ));
            }
        }
    }
    let (fast, time) = within(Duration::from_secs(120), start);
    check(
        failures.is_empty() && fast,
        format!(
            "600 pairs, max solutions {max_count}, failures {:?}, {time}",
            &failures[..failures.len().min(5)]
        ),
    )
}

/// 6. Spatial roundtrip on 200 seeded scenes.
fn roundtrip_3d() -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut worst = 0.0_f64;
    let mut max_len = 0;
    for seed in 0..200 {
        let s = random_scene_3d(seed);
        match reconstruct_3d(&project_3d(&s), tol::RESIDUAL) {
            Ok(set) => {
                let d = set.nearest(&s).unwrap().max(set.nearest(&s.mirror()).unwrap());
                worst = worst.max(d);
                max_len = max_len.max(set.len());
                if d > 1e-7 || set.len() > 64 {
                    bad.push(seed);
                }
            }
            Err(_) => bad.push(seed),
        }
    }
    let (fast, time) = within(Duration::from_secs(120), start);
    check(
        bad.is_empty() && fast,
        format!(
            "200 scenes, failures {:?}, worst distance {worst:.1e}, most candidates {max_len}, {time}",
            &bad[..bad.len().min(5)]
        ),
    )
}

fn coplanar_scene(rng: &mut ChaCha8Rng) -> Scene3D {
    loop {
        let omega: f64 = rng.gen_range(-1.5..1.5);
        let line = Vector3::new(omega.cos(), omega.sin(), 0.0);
        let spin = |r: &mut ChaCha8Rng| {
            let t: f64 = r.gen_range(-PI..PI);
            Vector2::new(t.cos(), t.sin())
        };
        let back = BackMap {
            line,
            m1: Vector3::new(-line.y, line.x, 0.0),
            in_plane: [spin(rng), spin(rng)],
            xy: [
                [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)],
                [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)],
            ],
        };
        let planar = random_scene_2d(rng.gen());
        let s = back.lift(&planar);
        // keep the shadow problem itself away from its own degeneracies
        let m = |i: usize| back.xy[i][0] * back.m1.x + back.xy[i][1] * back.m1.y;
        let shadow = Scene2D {
            u: m(0),
            v: m(1),
            ..planar
        };
        let (u, v, p, q) = (shadow.u, shadow.v, shadow.p, shadow.q);
        if (u * q - v * p).abs() >= 0.1 * u.hypot(p) * v.hypot(q) && !s.validate_with(1e-3).is_degenerate() {
            return s;
        }
    }
}

/// 7. Coplanar camera normals: detection and planar reduction.
fn degenerate_routing() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut missed = 0;
    let mut unrecovered = 0;
    let mut worst = 0.0_f64;
    for _ in 0..50 {
        let s = coplanar_scene(&mut rng);
        let data = project_3d(&s);
        if !detect_coplanar_normals(&data) {
            missed += 1;
            continue;
        }
        let mut best = f64::INFINITY;
        for line in common_lines(&data) {
            let Ok((planar, back)) = reduce_to_2d(&data, &line) else {
                continue;
            };
            let Ok(set) = invert_2d(&planar, tol::RESIDUAL) else {
                continue;
            };
            for c in set.iter() {
                let lifted = back.lift(&c.scene);
                best = best.min(lifted.distance(&s)).min(lifted.distance(&s.mirror()));
            }
        }
        worst = worst.max(best);
        if best > 1e-7 {
            unrecovered += 1;
        }
    }
    check(
        missed == 0 && unrecovered == 0,
        format!("50 scenes, undetected {missed}, not recovered {unrecovered}, worst distance {worst:.1e}"),
    )
}

/// 8. Angle-interval solvability test against the pair solver.
fn solvability_lemma() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut disagree = 0;
    let mut solvable = 0;
    for _ in 0..1000 {
        let c = PairCoefficients::new(std::array::from_fn(|_| rng.gen_range(-1.0..1.0)));
        let solver = pair_has_solution(&c);
        solvable += usize::from(solver);
        if ullman_pair_solvable(&c).ok() != Some(solver) {
            disagree += 1;
        }
    }
    check(
        disagree == 0,
        format!("1000 draws, {solvable} solvable, disagreements {disagree}"),
    )
}

/// The published table of minimal point counts (`None` for "-").
const PUBLISHED: [(u32, [Option<i64>; 3]); 3] = [
    (2, [None, Some(3), Some(3)]),
    (3, [Some(3), Some(3), Some(3)]),
    (4, [Some(4), Some(4), Some(4)]),
];

/// 9. Dimension table from the command-line tool.
fn dimension_table() -> Outcome {
    let out = Command::new(env!("CARGO_BIN_EXE_orthosfm"))
        .args(["dims", "--max-d", "4", "--max-m", "4", "--format", "csv"])
        .output()
        .expect("run orthosfm");
    let csv = String::from_utf8_lossy(&out.stdout);
    let mut mismatches = Vec::new();
    for (d, row) in PUBLISHED {
        for (k, expected) in row.iter().enumerate() {
            let m = k as u32 + 2;
            let want_tail = match expected {
                Some(n) => format!(",{n}"),
                None => ",-,-".to_string(),
            };
            let line = csv.lines().find(|l| l.starts_with(&format!("{d},{m},")));
            if !line.is_some_and(|l| l.ends_with(&want_tail)) {
                let published = expected.map_or("-".to_string(), |n| n.to_string());
                mismatches.push(format!(
                    "(d={d}, m={m}): published n={published}, row {:?}",
                    line.unwrap_or("")
                ));
            }
        }
    }
    check(
        out.status.success() && mismatches.is_empty(),
        format!("9 entries, mismatches {mismatches:?}"),
    )
}

/// 10. Explicit inverse on the special surface.
fn special_surface() -> Outcome {
    let u = 1.0;
    let vs: Vec<f64> = (0..100).map(|i| -3.0 + 6.0 * i as f64 / 99.0).collect();
    let cs: Vec<f64> = (0..100)
        .map(|j| {
            if j < 50 {
                -3.0 + 2.9 * j as f64 / 49.0
            } else {
                0.1 + 2.9 * (j - 50) as f64 / 49.0
            }
        })
        .collect();
    let mut wrong_class = 0;
    let mut worst = 0.0_f64;
    let mut feasible = 0;
    for &v in &vs {
        for &c in &cs {
            let outside = (v / (2.0 * c)).abs() > 1.0;
            match special_surface_inverse(u, v, c) {
                Err(Error::Infeasible(_)) => wrong_class += usize::from(!outside),
                Ok(s) => {
                    wrong_class += usize::from(outside);
                    feasible += 1;
                    worst = worst.max(reprojection_residual(&s, &special_surface_data(u, v, c)));
                }
                Err(_) => wrong_class += usize::from(outside),
            }
        }
    }
    check(
        wrong_class == 0 && worst <= 1e-9,
        format!("10000 grid points, {feasible} feasible, misclassified {wrong_class}, worst reprojection {worst:.1e} (corrected q)"),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("2D roundtrip", roundtrip_2d),
        ("2D infeasibility", infeasible_2d),
        ("Jacobian consistency (2D)", jacobian_2d),
        ("Jacobian consistency (3D)", jacobian_3d),
        ("pair equations", ullman_pairs),
        ("3D roundtrip", roundtrip_3d),
        ("degenerate routing", degenerate_routing),
        ("solvability lemma", solvability_lemma),
        ("dimension table", dimension_table),
        ("special surface", special_surface),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        failed += usize::from(!o.pass);
        println!(
            "{} {:>2} {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            k + 1,
            o.detail
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
