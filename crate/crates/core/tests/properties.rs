use num_complex::Complex64;
use proptest::prelude::*;

use orthosfm::feasibility::{angle_interval, min_points, pair_has_solution, sfm_inequality, ullman_pair_solvable};
use orthosfm::forward::{project_2d, project_3d};
use orthosfm::oracle::{random_scene_2d, random_scene_3d};
use orthosfm::reconstruct2d::invert_2d;
use orthosfm::reconstruct3d::{reconstruct_3d, solve_ullman_pair};
use orthosfm::scene::{frame_from_angles, ImageData2D, PairCoefficients};
use orthosfm::{tol, Error, Scene2D, Scene3D};

fn angle() -> impl Strategy<Value = f64> {
    -std::f64::consts::PI..std::f64::consts::PI
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn frames_are_orthonormal(t in angle(), p in angle(), g in angle()) {
        let f = frame_from_angles(t, p, g);
        prop_assert!(f.orthonormality_defect() < 1e-12);
        prop_assert!((f.normal().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reflection_leaves_planar_readings_unchanged(u in -2.0..2.0, p in -2.0..2.0, v in -2.0..2.0, q in -2.0..2.0, a in angle(), b in angle()) {
        let s = Scene2D::new(u, p, v, q, a, b);
        let (x, y) = (project_2d(&s), project_2d(&s.mirror()));
        for (l, r) in [(x.a, y.a), (x.b, y.b), (x.c, y.c), (x.d, y.d)] {
            prop_assert!((l - r).abs() < 1e-12);
        }
    }

    #[test]
    fn reflection_leaves_spatial_readings_unchanged(seed in 0u64..10_000) {
        let s = random_scene_3d(seed);
        let (x, y) = (project_3d(&s).to_vec(), project_3d(&s.mirror()).to_vec());
        prop_assert!(x.iter().zip(&y).all(|(l, r)| (l - r).abs() < 1e-12));
    }

    #[test]
    fn planar_roundtrip(seed in 0u64..1_000_000) {
        let s = random_scene_2d(seed);
        let set = invert_2d(&project_2d(&s), tol::RESIDUAL).unwrap();
        prop_assert_eq!(set.len(), 2);
        prop_assert!(set.contains(&s, 1e-9));
        prop_assert!(set.contains(&s.mirror(), 1e-9));
        prop_assert_eq!(set.ambiguity_note.clone(), vec![[0, 1]]);
    }

    #[test]
    fn spatial_roundtrip(seed in 0u64..1_000_000) {
        let s: Scene3D = random_scene_3d(seed);
        let set = reconstruct_3d(&project_3d(&s), tol::RESIDUAL).unwrap();
        prop_assert!(set.contains(&s, 1e-7));
        prop_assert!(set.closed_under_reflection(1e-7));
        prop_assert!(set.len() <= 64);
    }

    #[test]
    fn pair_solutions_come_in_antipodal_pairs(c in proptest::array::uniform8(-1.0..1.0f64)) {
        let c = PairCoefficients::new(c);
        if let Ok(sols) = solve_ullman_pair(&c) {
            prop_assert!(sols.len() <= 8);
            for s in &sols {
                prop_assert!(sols.iter().any(|o| o.distance(&s.negated()) < 1e-9));
            }
        }
    }

    #[test]
    fn lemma_matches_solver(c in proptest::array::uniform8(-1.0..1.0f64)) {
        let c = PairCoefficients::new(c);
        prop_assert_eq!(ullman_pair_solvable(&c).unwrap(), pair_has_solution(&c));
    }

    #[test]
    fn infeasible_example_is_an_open_set(d in proptest::array::uniform6(-1e-3..1e-3f64)) {
        let data = ImageData2D { u: 1.0 + d[0], v: 5.0 + d[1], a: d[2], b: 1.0 + d[3], c: 1.0 + d[4], d: d[5] };
        prop_assert!(matches!(invert_2d(&data, tol::RESIDUAL), Err(Error::Infeasible(_))));
    }

    #[test]
    fn interval_covers_the_quotient_and_flips_under_swap(ar in -3.0..3.0f64, ai in -3.0..3.0f64, br in -3.0..3.0f64, bi in -3.0..3.0f64, t in angle()) {
        let (a, b) = (Complex64::new(ar, ai), Complex64::new(br, bi));
        prop_assume!((a.norm() - 1.0).abs() > 1e-3 && (b.norm() - 1.0).abs() > 1e-3);
        let z = Complex64::from_polar(1.0, t);
        let w = ((z - a) / (z - b)).arg();
        let ab = angle_interval(a, b, 720).unwrap();
        let ba = angle_interval(b, a, 720).unwrap();
        prop_assert!(ab.contains(w, 1e-9));
        prop_assert!(ba.contains(-w, 1e-9));
        prop_assert!((ab.measure() - ba.measure()).abs() < 1e-7);
        let same = angle_interval(a, a, 720).unwrap();
        prop_assert!(same.measure() < 1e-9 && same.contains(0.0, 1e-9));
    }

    #[test]
    fn tight_point_count_balances_the_inequality(d in 2u32..8, m in 2u32..8) {
        if let Ok(n) = min_points(d, m) {
            if *n.exact.denom() == 1 && *n.exact.numer() > 0 {
                let c = sfm_inequality(d, n.ceiling as u32, m).unwrap();
                prop_assert!(c.tight);
            }
        } else {
            prop_assert_eq!((d, m), (2, 2));
        }
    }
}
