//! Crofton-type length formulas, Barbier's inequality, length decomposition
//! over orthogonal subspaces and the max/min-norm bound for inspection curves.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::convex::min_distance_to_curve;
use crate::curve::{check_orthonormal, PolyCurve};
use crate::error::{Error, Result};
use crate::geom::{Direction3, Point3};
use crate::horizon::monte_carlo_estimate;
use crate::metrics::{plane_frame, width2d};

/// A Monte Carlo value with a three-standard-error bar.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub abs_error: f64,
}

/// In-plane orthonormal pair for a planar curve (any pair containing the
/// line for collinear curves).
fn planar_axes(curve: &PolyCurve) -> Result<(Point3, Point3)> {
    match plane_frame(curve.vertices())? {
        Some((_, e1, e2)) => Ok((e1, e2)),
        None => {
            let v = curve.vertices();
            let far = v.iter().copied().fold(v[0], |b, p| if p.dist(v[0]) > b.dist(v[0]) { p } else { b });
            match Direction3::normalize(far - v[0]) {
                Ok(d) => Ok((d.vec(), d.frame().0)),
                Err(_) => Ok((Point3::new(1.0, 0.0, 0.0), Point3::new(0.0, 1.0, 0.0))),
            }
        }
    }
}

/// (1/4)·(2π/n)·Σ_k Σ_edges |⟨edge, u_k⟩| over n equally spaced in-plane
/// directions u_k.
pub fn crofton_length_2d(curve: &PolyCurve, n_dirs: usize) -> Result<f64> {
    if n_dirs < 4 {
        return Err(Error::InvalidArgument(format!("n_dirs {n_dirs} below 4")));
    }
    let (e1, e2) = planar_axes(curve)?;
    let edges: Vec<(f64, f64)> = curve
        .edges()
        .map(|(a, b)| {
            let d = b - a;
            (d.dot(e1), d.dot(e2))
        })
        .collect();
    let total: f64 = (0..n_dirs)
        .into_par_iter()
        .map(|k| {
            let (s, c) = (2.0 * PI * k as f64 / n_dirs as f64).sin_cos();
            edges.iter().map(|(x, y)| (x * c + y * s).abs()).sum::<f64>()
        })
        .collect::<Vec<_>>()
        .iter()
        .sum();
    Ok(total * 2.0 * PI / n_dirs as f64 / 4.0)
}

/// (L, π·w, L ≥ π·w) for a closed planar curve.
pub fn barbier_check(curve: &PolyCurve) -> Result<(f64, f64, bool)> {
    if !curve.is_closed() {
        return Err(Error::InvalidArgument("curve must be closed".into()));
    }
    let l = curve.length();
    let pw = PI * width2d(curve)?;
    Ok((l, pw, l >= pw - 1e-9))
}

/// (L, L₁, L₂): the curve's length and the lengths of its projections onto
/// two orthogonal complementary subspaces.
pub fn decompose_length(curve: &PolyCurve, subspace: &[Direction3], complement: &[Direction3]) -> Result<(f64, f64, f64)> {
    let all: Vec<Direction3> = subspace.iter().chain(complement).copied().collect();
    if all.len() != 3 || subspace.is_empty() || complement.is_empty() {
        return Err(Error::InvalidArgument(
            "the two subspaces must be nonzero and together span R³".into(),
        ));
    }
    check_orthonormal(&all)?;
    Ok((
        curve.length(),
        curve.project(subspace)?.length(),
        curve.project(complement)?.length(),
    ))
}

/// Number of φ ∈ [0, span) with r·cos(φ − δ) = level.
fn arc_hits(r: f64, delta: f64, level: f64, span: f64) -> usize {
    if r <= level.abs() {
        return 0;
    }
    let w = (level / r).acos();
    [delta + w, delta - w]
        .into_iter()
        .filter(|&phi| phi.rem_euclid(2.0 * PI) < span)
        .count()
}

/// Great-circle arc from a to b as (a, w, span) with x(φ) = a cos φ + w sin φ.
fn great_arc(a: Point3, b: Point3) -> Result<(Point3, Point3, f64)> {
    let (a, b) = (a.normalized().unwrap_or(a), b.normalized().unwrap_or(b));
    let along = b - a * a.dot(b);
    let span = along.norm().atan2(a.dot(b));
    if span == 0.0 {
        return Ok((a, Point3::ORIGIN, 0.0));
    }
    let w = along
        .normalized()
        .ok_or_else(|| Error::DegenerateCurve("antipodal consecutive vertices".into()))?;
    Ok((a, w, span))
}

/// Monte Carlo spherical Crofton formula: L = (1/(4 sin ρ))·∫ #(γ ∩ C_ρ(p)) dp
/// over p ∈ S², where C_ρ(p) is the circle of spherical radius ρ about p.
/// Edges are treated as great-circle arcs between their (snapped) ends.
pub fn spherical_crofton_length(curve: &PolyCurve, rho: f64, n_circles: usize, seed: u64) -> Result<Estimate> {
    if !(rho > 0.0 && rho <= PI / 2.0) {
        return Err(Error::InvalidArgument(format!("rho {rho} outside (0, π/2]")));
    }
    if n_circles < 2 {
        return Err(Error::InvalidArgument("need at least 2 circles".into()));
    }
    if let Some(p) = curve.vertices().iter().find(|p| (p.norm() - 1.0).abs() > 1e-6) {
        return Err(Error::InvalidArgument(format!("vertex {p:?} is not on the unit sphere")));
    }
    let arcs = curve.edges().map(|(a, b)| great_arc(a, b)).collect::<Result<Vec<_>>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let centers: Vec<Direction3> = (0..n_circles).map(|_| Direction3::random(&mut rng)).collect();
    let level = rho.cos();
    let counts: Vec<f64> = centers
        .par_iter()
        .map(|p| {
            arcs.iter()
                .map(|&(a, w, span)| {
                    let (x, y) = (p.dot(a), p.dot(w));
                    arc_hits(x.hypot(y), y.atan2(x), level, span)
                })
                .sum::<usize>() as f64
        })
        .collect();
    let e = monte_carlo_estimate(&counts, 4.0 * PI / (4.0 * rho.sin()));
    Ok(Estimate {
        value: e.value,
        abs_error: e.abs_error,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormBound {
    pub max_norm: f64,
    pub min_norm: f64,
    /// 2πMm/√(M²−1).
    pub bound: f64,
    pub length: f64,
    pub holds: bool,
}

/// Length lower bound from the largest and smallest distances to the origin.
pub fn min_max_norm_bound(curve: &PolyCurve) -> Result<NormBound> {
    let max_norm = curve.vertices().iter().map(|p| p.norm()).fold(0.0, f64::max);
    if max_norm <= 1.0 {
        return Err(Error::Domain(format!("max norm {max_norm} must exceed 1")));
    }
    let min_norm = min_distance_to_curve(curve, Point3::ORIGIN);
    let bound = 2.0 * PI * max_norm * min_norm / (max_norm * max_norm - 1.0).sqrt();
    let length = curve.length();
    Ok(NormBound {
        max_norm,
        min_norm,
        bound,
        length,
        holds: length >= bound - 1e-6,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle(n: usize) -> PolyCurve {
        PolyCurve::closed(
            (0..n)
                .map(|k| {
                    let t = 2.0 * PI * k as f64 / n as f64;
                    Point3::new(t.cos(), t.sin(), 0.0)
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn crofton_basics() {
        let seg = PolyCurve::open(vec![Point3::ORIGIN, Point3::new(0.6, 0.0, 0.8)]).unwrap();
        assert!((crofton_length_2d(&seg, 10_000).unwrap() - 1.0).abs() < 1e-4);
        assert!((crofton_length_2d(&circle(2000), 10_000).unwrap() - 2.0 * PI).abs() < 1e-3);
        assert!(crofton_length_2d(&seg, 3).is_err());
        let bent = PolyCurve::open(vec![Point3::ORIGIN, Point3::new(1., 0., 0.), Point3::new(1., 1., 0.), Point3::new(1., 1., 1.)]).unwrap();
        assert!(crofton_length_2d(&bent, 100).is_err());
    }

    #[test]
    fn barbier_cases() {
        let (l, pw, ok) = barbier_check(&circle(4000)).unwrap();
        assert!(ok && (l - pw).abs() < 1e-5);
        let sq = PolyCurve::closed(vec![
            Point3::new(0., 0., 0.),
            Point3::new(1., 0., 0.),
            Point3::new(1., 1., 0.),
            Point3::new(0., 1., 0.),
        ])
        .unwrap();
        let (l, pw, ok) = barbier_check(&sq).unwrap();
        assert!(ok && l == 4.0 && (pw - PI).abs() < 1e-15);
        assert!(barbier_check(&PolyCurve::open(vec![Point3::ORIGIN, Point3::new(1., 0., 0.)]).unwrap()).is_err());
    }

    #[test]
    fn reuleaux_triangle_is_tight() {
        // Arcs of radius 1 about each corner of a unit equilateral triangle.
        let corners: Vec<Point3> = (0..3)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / 3.0;
                Point3::new(t.cos(), t.sin(), 0.0) / 3f64.sqrt()
            })
            .collect();
        let mut pts = Vec::new();
        let n = 2000;
        for k in 0..3 {
            let c = corners[k];
            let a = corners[(k + 1) % 3] - c;
            let start = a.y.atan2(a.x);
            for i in 0..n {
                let t = start + PI / 3.0 * i as f64 / n as f64;
                pts.push(c + Point3::new(t.cos(), t.sin(), 0.0));
            }
        }
        let (l, pw, ok) = barbier_check(&PolyCurve::closed(pts).unwrap()).unwrap();
        assert!(ok);
        assert!((l - PI).abs() < 1e-6 && (pw - PI).abs() < 1e-6, "{l} {pw}");
    }

    #[test]
    fn decomposition_inequality() {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let pts: Vec<Point3> = (0..50)
            .map(|_| Point3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let c = PolyCurve::closed(pts).unwrap();
        let rot = crate::geom::Mat3::random_rotation(&mut rng);
        let cols: Vec<Direction3> = (0..3)
            .map(|i| Direction3::normalize(rot.transpose().rows[i]).unwrap())
            .collect();
        let (l, l1, l2) = decompose_length(&c, &cols[..1], &cols[1..]).unwrap();
        assert!(l * l > l1 * l1 + l2 * l2 + 1e-3);
        let (l, l1, l2) = decompose_length(&circle(100), &[Direction3::X, Direction3::Y], &[Direction3::Z]).unwrap();
        assert_eq!(l2, 0.0);
        assert!((l - l1).abs() < 1e-14);
        assert!(decompose_length(&c, &[Direction3::X], &[Direction3::Y]).is_err());
    }

    #[test]
    fn arc_hit_counting() {
        assert_eq!(arc_hits(1.0, 0.0, 0.0, 2.0 * PI), 2);
        assert_eq!(arc_hits(0.5, 0.0, 0.7, 2.0 * PI), 0);
        assert_eq!(arc_hits(1.0, 0.0, 0.0, PI), 1);
    }

    #[test]
    fn great_circle_at_right_angle_radius() {
        let est = spherical_crofton_length(&circle(64), PI / 2.0, 2000, 42).unwrap();
        assert!((est.value - 2.0 * PI).abs() < 1e-12, "{est:?}");
    }

    #[test]
    fn half_great_circle() {
        let half = PolyCurve::open(
            (0..=64)
                .map(|k| {
                    let t = PI * k as f64 / 64.0;
                    Point3::new(t.cos(), t.sin(), 0.0)
                })
                .collect(),
        )
        .unwrap();
        let est = spherical_crofton_length(&half, PI / 4.0, 100_000, 7).unwrap();
        assert!((est.value - PI).abs() <= est.abs_error, "{est:?}");
        assert!(spherical_crofton_length(&half, 0.0, 10, 1).is_err());
        assert!(spherical_crofton_length(&half.scaled(2.0), 0.5, 10, 1).is_err());
    }

    #[test]
    fn norm_bound_formula_grid() {
        // For M ≤ 2/√3 and m = 1 the bound is at least 4π.
        for i in 1..=100 {
            let m_big = 1.0 + (2.0 / 3f64.sqrt() - 1.0) * i as f64 / 100.0;
            let b = 2.0 * PI * m_big / (m_big * m_big - 1.0).sqrt();
            assert!(b >= 4.0 * PI - 1e-12);
        }
        assert!(matches!(min_max_norm_bound(&circle(50)), Err(Error::Domain(_))));
    }
}
