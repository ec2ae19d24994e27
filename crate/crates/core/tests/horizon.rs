mod common;

use std::f64::consts::PI;

use curvemetrics::constructions::baseball_curve;
use curvemetrics::horizon::{
    horizon, horizon_by_counting, is_efficient_inspection, make_efficient, make_efficient_with_log,
    min_edge_line_distance, min_segment_distance, verify_horizon_bounds,
};
use curvemetrics::metrics::inspects_sphere;
use curvemetrics::{Error, PolyCurve};

fn baseball(per_semicircle: f64) -> PolyCurve {
    baseball_curve().unwrap().sample_circumscribed(per_semicircle / PI).unwrap()
}

#[test]
fn octagon_fixtures_have_the_intended_geometry() {
    for c in [common::offending_octagon(), common::doubly_offending_octagon()] {
        assert!(inspects_sphere(&c));
        assert!(min_segment_distance(&c) > 1.0);
        assert!(min_edge_line_distance(&c) < 1.0);
        assert!(!is_efficient_inspection(&c));
    }
    let plain = PolyCurve::closed(common::zigzag_octagon()).unwrap();
    assert!(is_efficient_inspection(&plain));
}

#[test]
fn single_offender_is_repaired() {
    let c = common::offending_octagon();
    let (out, lengths) = make_efficient_with_log(&c).unwrap();
    assert!(is_efficient_inspection(&out));
    assert!(out.length() < c.length());
    assert!(lengths.windows(2).all(|w| w[1] <= w[0] + 1e-12), "{lengths:?}");
    assert_eq!(lengths.last().copied(), Some(out.length()));
}

#[test]
fn double_offender_is_repaired_with_monotone_length() {
    let c = common::doubly_offending_octagon();
    let (out, lengths) = make_efficient_with_log(&c).unwrap();
    assert!(lengths.len() >= 3, "two defects need two steps: {lengths:?}");
    assert!(lengths.windows(2).all(|w| w[1] <= w[0] + 1e-12), "{lengths:?}");
    assert!(min_edge_line_distance(&out) >= 1.0 - 1e-9);
    assert!(inspects_sphere(&out));
    // Horizon bounds hold before and after.
    for curve in [&c, &out] {
        let b = verify_horizon_bounds(curve, 1e-7).unwrap();
        assert!(b.lower_holds && b.upper_holds, "{b:?}");
    }
}

#[test]
fn efficient_input_is_a_fixed_point() {
    let c = PolyCurve::closed(common::zigzag_octagon()).unwrap();
    let out = make_efficient(&c).unwrap();
    assert_eq!(out, c);
}

#[test]
fn make_efficient_rejects_non_inspecting_input() {
    let c = common::circle(2.0, 100);
    assert!(matches!(make_efficient(&c), Err(Error::InvalidArgument(_))));
}

#[test]
fn baseball_horizon_is_eight_pi() {
    let b = baseball(400.0);
    let h = horizon(&b, 1e-9).unwrap();
    assert!((h.value - 8.0 * PI).abs() < 1e-3, "{h:?}");
    let mc = horizon_by_counting(&b, 50_000, 5).unwrap();
    assert!((mc.value - 8.0 * PI).abs() <= mc.abs_error, "{mc:?}");
}

#[test]
fn doubled_baseball_counts_twice() {
    let b = baseball(200.0);
    let single = horizon(&b, 1e-9).unwrap().value;
    let double = horizon(&b.repeated(2), 1e-9).unwrap().value;
    assert!((double - 2.0 * single).abs() < 1e-8);
    assert!((double - 16.0 * PI).abs() < 4e-3);
}

#[test]
fn horizon_is_rotation_invariant() {
    let mut rng = common::rng(3);
    let b = baseball(100.0);
    let h = horizon(&b, 1e-9).unwrap().value;
    for _ in 0..5 {
        let rot = curvemetrics::Mat3::random_rotation(&mut rng);
        let moved = b.transformed(&curvemetrics::Isometry::new(rot, curvemetrics::Point3::ORIGIN));
        assert!((horizon(&moved, 1e-9).unwrap().value - h).abs() < 1e-7);
    }
}

#[test]
fn scaled_baseball_still_inspects() {
    // Radius 2: the curve stays at distance 2 and its hull contains the
    // radius-2 ball, hence the unit ball. Inspection only asks for that.
    let b = baseball(100.0).scaled(2.0);
    assert!(inspects_sphere(&b));
    assert!(is_efficient_inspection(&b));
    let bounds = verify_horizon_bounds(&b, 1e-8).unwrap();
    assert!(bounds.lower_holds && bounds.upper_holds, "{bounds:?}");
}
