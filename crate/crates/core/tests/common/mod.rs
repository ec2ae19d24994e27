#![allow(dead_code)]

use std::f64::consts::PI;

use curvemetrics::{Point3, PolyCurve};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn circle(r: f64, n: usize) -> PolyCurve {
    PolyCurve::closed(
        (0..n)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / n as f64;
                Point3::new(r * t.cos(), r * t.sin(), 0.0)
            })
            .collect(),
    )
    .unwrap()
}

/// Zigzag octagon of radius 4 and height ±3 around the unit sphere.
pub fn zigzag_octagon() -> Vec<Point3> {
    (0..8)
        .map(|k| {
            let t = k as f64 * PI / 4.0;
            let z = if k % 2 == 0 { 3.0 } else { -3.0 };
            Point3::new(4.0 * t.cos(), 4.0 * t.sin(), z)
        })
        .collect()
}

/// The octagon with vertex 0 moved close to the sphere, so the line of the
/// edge to vertex 1 passes through the sphere while the edge itself and
/// the hull stay clear.
pub fn offending_octagon() -> PolyCurve {
    let mut v = zigzag_octagon();
    v[0] = Point3::new(0.88, 1.342, -0.872);
    PolyCurve::closed(v).unwrap()
}

/// Same defect at two opposite vertices.
pub fn doubly_offending_octagon() -> PolyCurve {
    let mut v = zigzag_octagon();
    v[0] = Point3::new(0.88, 1.342, -0.872);
    v[4] = Point3::new(-0.88, -1.342, -0.872);
    PolyCurve::closed(v).unwrap()
}

/// Closed polyline with `n` vertices drawn uniformly from [−1, 1]³.
pub fn random_closed(rng: &mut ChaCha8Rng, n: usize) -> PolyCurve {
    PolyCurve::closed(
        (0..n)
            .map(|_| Point3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect(),
    )
    .unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
