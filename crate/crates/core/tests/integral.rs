mod common;

use std::f64::consts::PI;

use approx::assert_relative_eq;
use curvemetrics::constructions::gamma_h;
use curvemetrics::integral::{barbier_check, crofton_length_2d, decompose_length, spherical_crofton_length};
use curvemetrics::{Direction3, Isometry, Mat3, Point3, PolyCurve};

#[test]
fn crofton_matches_length_on_random_planar_polylines() {
    use rand::Rng;
    let mut rng = common::rng(11);
    for _ in 0..20 {
        let pts: Vec<Point3> = (0..12)
            .map(|_| Point3::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), 0.0))
            .collect();
        let c = PolyCurve::open(pts).unwrap();
        let rot = Isometry::new(Mat3::random_rotation(&mut rng), Point3::new(1.0, 2.0, 3.0));
        let tilted = c.transformed(&rot);
        // Equally spaced directions integrate |cos| exactly up to O(1/n²).
        assert_relative_eq!(crofton_length_2d(&tilted, 20_000).unwrap(), c.length(), max_relative = 1e-6);
    }
}

#[test]
fn gamma_h_decomposes_exactly() {
    for h in [0.5, 1.97, 3.0] {
        let g = gamma_h(h).unwrap().sample(300.0).unwrap();
        let (l, lz, lxy) = decompose_length(&g, &[Direction3::Z], &[Direction3::X, Direction3::Y]).unwrap();
        assert_relative_eq!(l * l, lz * lz + lxy * lxy, max_relative = 1e-9);
    }
}

#[test]
fn spherical_crofton_is_rotation_invariant() {
    let mut rng = common::rng(8);
    let base = common::circle(1.0, 256);
    let est = spherical_crofton_length(&base, 1.0, 40_000, 1).unwrap();
    for _ in 0..3 {
        let iso = Isometry::new(Mat3::random_rotation(&mut rng), Point3::ORIGIN);
        let moved = spherical_crofton_length(&base.transformed(&iso), 1.0, 40_000, 1).unwrap();
        assert!((moved.value - est.value).abs() <= est.abs_error + moved.abs_error);
        assert!((moved.value - 2.0 * PI).abs() <= moved.abs_error);
    }
}

#[test]
fn barbier_on_regular_polygons() {
    for n in [3usize, 5, 7, 9] {
        // Odd regular polygons: width is the apex-to-side distance.
        let c = common::circle(1.0, n);
        let (l, pw, ok) = barbier_check(&c).unwrap();
        assert!(ok);
        let width = 1.0 + (PI / n as f64).cos();
        assert_relative_eq!(pw, PI * width, max_relative = 1e-12);
        assert!(l > pw);
    }
}
