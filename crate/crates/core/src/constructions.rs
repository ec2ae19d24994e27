//! Closed-form curves with small length-to-width or length-to-inradius
//! ratios, the h₀ solver and the higher-dimensional bound table.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::curve::{PiecewiseCurve, Segment};
use crate::error::{invalid, Result};
use crate::geom::{Direction3, Isometry, Mat3, Point3};
use crate::optimize::{bisect, golden_section};

/// Γ_h: four helical arcs on the unit cylinder about the z-axis joining
/// (1,0,h/2), (0,1,−h/2), (−1,0,h/2), (0,−1,−h/2).
pub fn gamma_h(h: f64) -> Result<PiecewiseCurve> {
    if !(h > 0.0 && h.is_finite()) {
        return invalid(format!("height {h} must be positive"));
    }
    let rate = 2.0 * h / PI;
    let segments = (0..4)
        .map(|k| {
            let theta0 = k as f64 * FRAC_PI_2;
            let (z_start, pitch) = if k % 2 == 0 { (h / 2.0, -rate) } else { (-h / 2.0, rate) };
            let origin = Point3::new(0.0, 0.0, z_start - pitch * theta0);
            Segment::helix(origin, Direction3::Z, 1.0, pitch, theta0, theta0 + FRAC_PI_2)
        })
        .collect::<Result<Vec<_>>>()?;
    PiecewiseCurve::new(segments, true)
}

/// Corners of Γ_h in traversal order.
pub fn gamma_h_corners(h: f64) -> [Point3; 4] {
    [
        Point3::new(1.0, 0.0, h / 2.0),
        Point3::new(0.0, 1.0, -h / 2.0),
        Point3::new(-1.0, 0.0, h / 2.0),
        Point3::new(0.0, -1.0, -h / 2.0),
    ]
}

/// Length of Γ_h in closed form.
pub fn gamma_h_length(h: f64) -> f64 {
    (16.0 * h * h + 4.0 * PI * PI).sqrt()
}

/// min over t ∈ [−π/2, 0] of √((cos t + 1)² + (2th/π)²).
pub fn d_of_h(h: f64) -> f64 {
    let f = |t: f64| ((t.cos() + 1.0).powi(2) + (2.0 * t * h / PI).powi(2)).sqrt();
    let (a, b) = (-FRAC_PI_2, 0.0);
    const SCAN: usize = 100;
    let grid = |i: usize| a + (b - a) * i as f64 / SCAN as f64;
    let best = (0..=SCAN)
        .min_by(|&i, &j| f(grid(i)).total_cmp(&f(grid(j))))
        .unwrap();
    let lo = grid(best.saturating_sub(1));
    let hi = grid((best + 1).min(SCAN));
    let (_, inner) = golden_section(f, lo, hi, 1e-12);
    inner.min(f(a)).min(f(b))
}

/// Width of Γ_h: min(h, d(h)).
pub fn gamma_h_width(h: f64) -> f64 {
    h.min(d_of_h(h))
}

/// Root of d(h) = h on [1.9, 2.0].
pub fn solve_h0(tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return invalid(format!("tolerance {tol} must be positive"));
    }
    let g = |h: f64| d_of_h(h) - h;
    // Bisection to a bracket far below tol; g has slope of order one.
    bisect(g, 1.9, 2.0, (tol * 1e-3).max(1e-15))
}

const SQRT2: f64 = std::f64::consts::SQRT_2;

/// Vertices A, B, C, D of the regular tetrahedron with edge √2.
pub fn tetrahedron() -> [Point3; 4] {
    let s = SQRT2 / 2.0;
    [
        Point3::new(1.0, s, 0.0),
        Point3::new(1.0, -s, 0.0),
        Point3::new(0.0, 0.0, s),
        Point3::new(0.0, 0.0, -s),
    ]
}

/// Center of the tetrahedron.
pub fn tetrahedron_center() -> Point3 {
    Point3::new(0.5, 0.0, 0.0)
}

/// Start point A′ of the first L5 piece, on edge AC.
pub fn l5_a_prime() -> Point3 {
    let r3 = 3f64.sqrt();
    Point3::new(r3 / 2.0, r3 / (2.0 * SQRT2), (2.0 - r3) / (2.0 * SQRT2))
}

/// Polar angle of the tangency point Ē, solved from ⟨Ē − Ā′, Ē⟩ = 0 with
/// |Ē| = 1 on the side facing the x-axis.
pub fn l5_tangent_angle() -> f64 {
    let a = l5_a_prime();
    let r = a.x.hypot(a.y);
    a.y.atan2(a.x) - (1.0 / r).acos()
}

/// Height drop Δ of one piece (from +Δ/2 at A′ to −Δ/2 at B′).
fn l5_drop() -> f64 {
    (2.0 - 3f64.sqrt()) / SQRT2
}

/// Planar (projected) length of one piece: two tangent segments plus the arc.
pub fn l5_piece_planar_length() -> f64 {
    let a = l5_a_prime();
    let tangent = (a.x * a.x + a.y * a.y - 1.0).sqrt();
    2.0 * tangent + 2.0 * l5_tangent_angle()
}

/// Closed-form length of the L5 curve.
pub fn l5_length() -> f64 {
    4.0 * l5_piece_planar_length().hypot(l5_drop())
}

/// The rotoreflection of the tetrahedron sending A→B→C→D→A.
pub fn l5_symmetry() -> Isometry {
    let [a, b, c, d] = tetrahedron();
    let m = tetrahedron_center();
    let src = Mat3::from_cols(a - m, b - m, c - m);
    let dst = Mat3::from_cols(b - m, c - m, d - m);
    let q = dst.mul(&src.inverse().expect("tetrahedron spans R³"));
    Isometry::new(q, m - q.apply(m))
}

/// The first piece A′ → E → (helix about CD) → F → B′ of the L5 curve.
pub fn l5_piece() -> Result<Vec<Segment>> {
    let a = l5_a_prime();
    let b = Point3::new(a.x, -a.y, -a.z);
    let theta = l5_tangent_angle();
    let lp = l5_piece_planar_length();
    let slope = l5_drop() / lp;
    let helix = Segment::helix(Point3::ORIGIN, Direction3::Z, 1.0, slope, theta, -theta)?;
    let (e, f) = (helix.start(), helix.end());
    Ok(vec![Segment::line(a, e), helix, Segment::line(f, b)])
}

/// Closed curve on the regular tetrahedron: four congruent pieces, each
/// a geodesic on the unit cylinder about one edge, extended by tangent
/// segments to the neighboring edges.
pub fn l5_curve() -> Result<PiecewiseCurve> {
    let sigma = l5_symmetry();
    let mut piece = l5_piece()?;
    let mut segments = Vec::with_capacity(12);
    for _ in 0..4 {
        segments.extend(piece.iter().cloned());
        piece = piece.iter().map(|s| s.transformed(&sigma)).collect();
    }
    PiecewiseCurve::new(segments, true)
}

fn l5_e_height_certificate(z: f64) -> f64 {
    let theta = l5_tangent_angle();
    let e = Point3::new(theta.cos(), theta.sin(), z);
    let m = tetrahedron_center();
    let u = Point3::new(0.0, 1.0, 1.0) / SQRT2;
    let project = |p: Point3| p - u * p.dot(u);
    2.0 * project(e).dist(project(m))
}

/// Width upper bound 2‖Ẽ − M̃‖ for the projection along (0,1,1)/√2, with
/// the height of E taken from the rule z(t) = (h/(L/8))·t, h = Δ/2 and
/// t = arctan(√2/5).
pub fn l5_width_upper_bound() -> f64 {
    let h = l5_drop() / 2.0;
    let z = h / (l5_length() / 8.0) * l5_tangent_angle();
    l5_e_height_certificate(z)
}

/// The same certificate using the actual point E of [`l5_curve`], whose
/// height follows the slope over the planar arclength.
pub fn l5_width_certificate_on_curve() -> f64 {
    let z = l5_drop() / l5_piece_planar_length() * l5_tangent_angle();
    l5_e_height_certificate(z)
}

/// Four unit semicircles on the sphere of radius √2, alternating between
/// the planes z = ±1 and x = ±1.
pub fn baseball_curve() -> Result<PiecewiseCurve> {
    let x = Point3::new(1.0, 0.0, 0.0);
    let y = Point3::new(0.0, 1.0, 0.0);
    let z = Point3::new(0.0, 0.0, 1.0);
    let arcs = [
        (z, x, y),
        (-x, z, -y),
        (-z, -x, y),
        (x, -z, -y),
    ];
    let segments = arcs
        .into_iter()
        .map(|(c, u, v)| Segment::arc(c, 1.0, u, v, 0.0, PI))
        .collect::<Result<Vec<_>>>()?;
    PiecewiseCurve::new(segments, true)
}

/// L/w of the best known planar curve (open, caliper-shaped).
pub fn caliper_constant() -> f64 {
    2.2782
}

/// L/r of the best known planar curve (open, horseshoe-shaped).
pub fn horseshoe_constant() -> f64 {
    PI + 2.0
}

/// Lower bounds for curves in R^(2+k).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundTableRow {
    pub k: usize,
    pub open_w: f64,
    pub open_r: f64,
    pub closed_w: f64,
    pub closed_r: f64,
}

impl BoundTableRow {
    pub fn new(k: usize) -> Self {
        let kf = k as f64;
        BoundTableRow {
            k,
            open_w: (caliper_constant().powi(2) + 9.0 * kf).sqrt(),
            open_r: (horseshoe_constant().powi(2) + 36.0 * kf).sqrt(),
            closed_w: (PI * PI + 16.0 * kf).sqrt(),
            closed_r: (108.0 + 64.0 * (kf - 1.0)).sqrt(),
        }
    }
}

pub fn bound_table(k_max: usize) -> Result<Vec<BoundTableRow>> {
    if k_max < 1 {
        return invalid("k_max must be at least 1");
    }
    Ok((1..=k_max).map(BoundTableRow::new).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_h_length_and_corners() {
        for h in [0.3, 1.5, 2.0, 3.7] {
            let g = gamma_h(h).unwrap();
            assert!((g.length() - gamma_h_length(h)).abs() < 1e-12);
            let corners = gamma_h_corners(h);
            for (k, s) in g.segments().iter().enumerate() {
                assert!(s.start().dist(corners[k]) < 1e-14, "{k}");
            }
        }
        assert!((gamma_h_length(2.0) - (64.0 + 4.0 * PI * PI).sqrt()).abs() < 1e-14);
        assert!(gamma_h(0.0).is_err());
        assert!(gamma_h(-1.0).is_err());
    }

    #[test]
    fn gamma_h_projects_to_unit_circle() {
        let g = gamma_h(1.97079).unwrap().sample(500.0).unwrap();
        let mut winding = 0.0;
        let v = g.vertices();
        for i in 0..v.len() {
            assert!((v[i].x.hypot(v[i].y) - 1.0).abs() < 1e-12);
            let a = v[i];
            let b = v[(i + 1) % v.len()];
            winding += (a.x * b.y - a.y * b.x).atan2(a.x * b.x + a.y * b.y);
        }
        assert!((winding / (2.0 * PI) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn d_of_h_against_dense_grid() {
        for h in [0.01, 0.5, 1.0, 1.5, 1.97, 2.5] {
            let brute = (0..=200_000)
                .map(|i| {
                    let t = -FRAC_PI_2 * i as f64 / 200_000.0;
                    ((t.cos() + 1.0).powi(2) + (2.0 * t * h / PI).powi(2)).sqrt()
                })
                .fold(f64::INFINITY, f64::min);
            let d = d_of_h(h);
            assert!(d <= brute + 1e-15 && brute - d < 1e-9, "{h}: {d} {brute}");
        }
        assert!((d_of_h(0.01) - 1.0).abs() < 1e-3);
        let mut prev = 0.0;
        for i in 0..=150 {
            let d = d_of_h(1.0 + i as f64 / 100.0);
            assert!(d >= prev);
            prev = d;
        }
    }

    #[test]
    fn h0_is_a_fixed_point() {
        let h0 = solve_h0(1e-12).unwrap();
        assert!((d_of_h(h0) - h0).abs() < 1e-12);
        let ratio = gamma_h_length(h0) / h0;
        assert!(ratio > (PI * PI + 16.0).sqrt() && ratio < 5.1151, "{ratio}");
    }

    #[test]
    fn l5_angle_matches_one_printed_form() {
        let theta = l5_tangent_angle();
        assert!((theta - (2f64.sqrt() / 5.0).atan()).abs() < 1e-15);
        assert!((theta - (5f64.sqrt() / 2.0).atan()).abs() > 0.5);
        let e = Point3::new(theta.cos(), theta.sin(), 0.0);
        let r27 = 27f64.sqrt();
        assert!(e.dist(Point3::new(5.0 / r27, 2f64.sqrt() / r27, 0.0)) < 1e-15);
    }

    #[test]
    fn l5_pieces_are_congruent_and_close_up() {
        let c = l5_curve().unwrap();
        let lens: Vec<f64> = c
            .segments()
            .chunks(3)
            .map(|p| p.iter().map(Segment::exact_length).sum())
            .collect();
        for l in &lens {
            assert!((l - lens[0]).abs() < 1e-12);
        }
        assert!((c.length() - l5_length()).abs() < 1e-12);
        assert!((c.length() - 5.0903).abs() < 5e-4);
        // Each piece starts on an edge of the tetrahedron.
        let [a, b, cc, d] = tetrahedron();
        let starts: Vec<Point3> = c.segments().iter().step_by(3).map(Segment::start).collect();
        let on = |p: Point3, x: Point3, y: Point3| crate::convex::point_segment_distance(p, x, y) < 1e-14;
        assert!(on(starts[0], a, cc));
        assert!(on(starts[1], b, d));
        assert!(on(starts[2], cc, a));
        assert!(on(starts[3], d, b));
    }

    #[test]
    fn l5_symmetry_is_a_rotoreflection_of_order_four() {
        let s = l5_symmetry();
        let t = tetrahedron();
        for k in 0..4 {
            assert!(s.apply(t[k]).dist(t[(k + 1) % 4]) < 1e-14);
        }
        assert!((s.linear.det() + 1.0).abs() < 1e-14);
        assert!(s.linear.is_orthogonal(1e-14));
    }

    #[test]
    fn l5_certificates() {
        assert!((l5_width_upper_bound() - 0.980582).abs() < 1e-6);
        assert!((l5_width_certificate_on_curve() - 0.980364).abs() < 1e-6);
        assert!(l5_length() / l5_width_upper_bound() >= 5.1911);
    }

    #[test]
    fn baseball_on_sphere() {
        let b = baseball_curve().unwrap();
        assert!((b.length() - 4.0 * PI).abs() < 1e-14);
        let s = b.sample(200.0).unwrap();
        for v in s.vertices() {
            assert!((v.norm() - SQRT2).abs() < 1e-14);
        }
    }

    #[test]
    fn bound_constants() {
        assert!(((9.0 + caliper_constant().powi(2)).sqrt() - 3.7669).abs() < 1e-4);
        let rows = bound_table(3).unwrap();
        assert_eq!(rows.len(), 3);
        assert!((rows[0].closed_r - 6.0 * 3f64.sqrt()).abs() < 1e-14);
        assert!((rows[1].open_w - (2.2782f64.powi(2) + 18.0).sqrt()).abs() < 1e-14);
        for w in rows.windows(2) {
            assert!(w[1].open_w > w[0].open_w && w[1].closed_r > w[0].closed_r);
        }
        assert!(bound_table(0).is_err());
    }
}
