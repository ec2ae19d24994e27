//! Width, inradius, sphere inspection, alternating-slab witnesses and
//! nth-hull membership for polygonal curves.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::convex::{self, hull, min_distance_to_curve, ConvexHull3, HullKind};
use crate::curve::{ParamPoint, PolyCurve};
use crate::error::{Error, Result};
use crate::geom::{fibonacci_hemisphere, Direction3, Point3};
use crate::optimize::{halton, halton3, pattern_search, PatternOptions};

pub const DEFAULT_WIDTH_TOL: f64 = 1e-6;
pub const DEFAULT_INRADIUS_TOL: f64 = 1e-5;

/// Slack used when comparing a ratio against a bound.
pub const BOUND_TOL: f64 = 1e-9;

/// Slack for the inspection tests (distances measured against 1).
pub const INSPECTION_TOL: f64 = 1e-9;

const WIDTH_LATTICE: usize = 2000;
const WIDTH_STARTS: usize = 8;
const POLISH_NEIGHBORS: usize = 24;
const POLISH_ANGLE: f64 = 0.1;
const INRADIUS_STARTS: usize = 64;

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("tolerance {tol} must be positive")))
    }
}

/// Unit vector u0 tilted by (a, b) in the tangent plane at u0.
fn tilt(u0: Direction3, e1: Point3, e2: Point3, x: &[f64]) -> Option<Direction3> {
    Direction3::normalize(u0.vec() + e1 * x[0] + e2 * x[1]).ok()
}

/// Minimal slab width over all directions, with a direction attaining it.
pub fn width3d(curve: &PolyCurve, tol: f64) -> Result<(f64, Direction3)> {
    check_tol(tol)?;
    let h = hull(curve.vertices())?;
    Ok(width_of_hull(&h, tol))
}

/// Width of a hull. Flat hulls have width 0 across their plane.
pub fn width_of_hull(h: &ConvexHull3, tol: f64) -> (f64, Direction3) {
    match h.kind() {
        HullKind::Planar => {
            let n = h.plane_normal().expect("planar hull has a normal");
            (h.slab_width(n), n)
        }
        HullKind::Segment => {
            let v = h.vertices();
            let d = Direction3::normalize(v[1] - v[0]).expect("distinct ends");
            let (e1, _) = d.frame();
            let u = Direction3::normalize(e1).expect("unit");
            (h.slab_width(u), u)
        }
        HullKind::Solid => solid_width(h, tol),
    }
}

fn solid_width(h: &ConvexHull3, tol: f64) -> (f64, Direction3) {
    let verts = h.vertices();
    let diam = verts
        .iter()
        .map(|p| p.dist(verts[0]))
        .fold(0.0, f64::max)
        .max(1e-300);
    let lattice = fibonacci_hemisphere(WIDTH_LATTICE);
    let mut scored: Vec<(f64, Direction3)> = lattice
        .par_iter()
        .map(|&u| (h.slab_width(u), u))
        .collect();
    scored.sort_by(|a, b| a.0.total_cmp(&b.0));

    let spacing = (2.0 * PI / WIDTH_LATTICE as f64).sqrt();
    let refined: Vec<(f64, Direction3)> = scored[..WIDTH_STARTS.min(scored.len())]
        .par_iter()
        .enumerate()
        .map(|(k, &(w0, u0))| {
            let (e1, e2) = u0.frame();
            let f = |x: &[f64]| tilt(u0, e1, e2, x).map_or(f64::INFINITY, |u| h.slab_width(u));
            let (x, w) = pattern_search(
                f,
                &[0.0, 0.0],
                PatternOptions {
                    initial_step: spacing,
                    min_step: (0.01 * tol / diam).min(1e-10),
                    max_evals: 4000,
                    rotations: 3,
                    seed: 42 + k as u64,
                },
            );
            match tilt(u0, e1, e2, &x) {
                Some(u) if w < w0 => (w, u),
                _ => (w0, u0),
            }
        })
        .collect();
    let mut best = refined
        .into_iter()
        .fold(scored[0], |b, c| if c.0 < b.0 { c } else { b });

    // The exact width of a polytope is attained by a facet normal or by the
    // common normal of two edges. Facet normals are cheap to try exhaustively;
    // edge pairs are tried near the numerically located optimum.
    let facet_best = h
        .facets()
        .par_iter()
        .map(|f| (h.slab_width(f.normal), f.normal))
        .min_by(|a, b| a.0.total_cmp(&b.0));
    if let Some(fb) = facet_best {
        if fb.0 < best.0 {
            best = fb;
        }
    }
    if let Some(eb) = edge_pair_polish(h, best.1) {
        if eb.0 < best.0 {
            best = eb;
        }
    }
    best
}

fn edge_pair_polish(h: &ConvexHull3, u: Direction3) -> Option<(f64, Direction3)> {
    let verts = h.vertices();
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); verts.len()];
    for (a, b) in h.edges() {
        adjacency[a].push(b);
        adjacency[b].push(a);
    }
    let near = |sign: f64| -> Vec<(Point3, Point3)> {
        let mut idx: Vec<usize> = (0..verts.len()).collect();
        idx.sort_by(|&i, &j| (-sign * u.dot(verts[i])).total_cmp(&(-sign * u.dot(verts[j]))));
        let mut edges: Vec<(usize, usize)> = idx
            .iter()
            .take(POLISH_NEIGHBORS)
            .flat_map(|&i| adjacency[i].iter().map(move |&j| (i.min(j), i.max(j))))
            .collect();
        edges.sort_unstable();
        edges.dedup();
        edges.into_iter().map(|(a, b)| (verts[a], verts[b])).collect()
    };
    let top = near(1.0);
    let bottom = near(-1.0);
    let cos_limit = POLISH_ANGLE.cos();
    top.par_iter()
        .flat_map_iter(|&(a, b)| {
            bottom.iter().filter_map(move |&(c, d)| {
                let n = (b - a).cross(d - c).normalized()?;
                let n = if n.dot(u.vec()) < 0.0 { -n } else { n };
                (n.dot(u.vec()) >= cos_limit).then_some(n)
            })
        })
        .map(|n| {
            let d = Direction3::new(n).unwrap_or(u);
            (h.slab_width(d), d)
        })
        .min_by(|a, b| a.0.total_cmp(&b.0))
}

/// Width of a planar curve by rotating calipers over its 2-D hull.
pub fn width2d(curve: &PolyCurve) -> Result<f64> {
    let pts = curve.vertices();
    let Some(frame) = plane_frame(pts)? else {
        return Ok(0.0);
    };
    let (origin, e1, e2) = frame;
    let uv = |i: usize| {
        let d = pts[i] - origin;
        (d.dot(e1), d.dot(e2))
    };
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    idx.sort_by(|&a, &b| {
        let (ax, ay) = uv(a);
        let (bx, by) = uv(b);
        ax.total_cmp(&bx).then(ay.total_cmp(&by))
    });
    let ring: Vec<(f64, f64)> = convex::monotone_chain(&idx, uv).into_iter().map(uv).collect();
    Ok(calipers(&ring))
}

/// Orthonormal frame of the plane containing `pts`, or `None` if they are
/// collinear. Errors when the points leave the plane by more than 1e-9.
pub(crate) fn plane_frame(pts: &[Point3]) -> Result<Option<(Point3, Point3, Point3)>> {
    let p0 = pts[0];
    let far = pts.iter().copied().fold(p0, |b, p| if p.dist(p0) > b.dist(p0) { p } else { b });
    let scale = far.dist(p0);
    if scale == 0.0 {
        return Ok(None);
    }
    let axis = (far - p0) / scale;
    let off = |p: Point3| {
        let d = p - p0;
        d - axis * d.dot(axis)
    };
    let side = pts.iter().copied().fold(p0, |b, p| if off(p).norm() > off(b).norm() { p } else { b });
    if off(side).norm() <= 1e-12 * scale {
        return Ok(None);
    }
    let normal = axis.cross(off(side)).normalized().expect("non-collinear");
    let worst = pts.iter().map(|p| (*p - p0).dot(normal).abs()).fold(0.0, f64::max);
    if worst > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "curve is not planar (out-of-plane distance {worst:e})"
        )));
    }
    let e2 = normal.cross(axis);
    Ok(Some((p0, axis, e2)))
}

/// Minimal width of a convex polygon given counterclockwise.
pub(crate) fn calipers(ring: &[(f64, f64)]) -> f64 {
    let n = ring.len();
    if n < 3 {
        return 0.0;
    }
    let dist = |i: usize, k: usize| {
        let (ax, ay) = ring[i];
        let (bx, by) = ring[(i + 1) % n];
        let (px, py) = ring[k];
        let (ex, ey) = (bx - ax, by - ay);
        ((ex * (py - ay) - ey * (px - ax)) / ex.hypot(ey)).abs()
    };
    let mut best = f64::INFINITY;
    let mut k = 1;
    for i in 0..n {
        if k == i {
            k = (k + 1) % n;
        }
        while dist(i, (k + 1) % n) >= dist(i, k) && (k + 1) % n != i {
            k = (k + 1) % n;
        }
        best = best.min(dist(i, k));
    }
    best
}

/// Largest ball inside the hull and disjoint from the curve: (radius, center).
/// Flat hulls give (0, centroid).
pub fn inradius(curve: &PolyCurve, tol: f64) -> Result<(f64, Point3)> {
    check_tol(tol)?;
    let h = hull(curve.vertices())?;
    if !h.is_solid() {
        return Ok((0.0, curve.centroid()));
    }
    let objective = |c: Point3| -> f64 {
        let inside = h.distance_to_boundary_inside(c).expect("solid hull");
        if inside <= 0.0 {
            return inside;
        }
        inside.min(min_distance_to_curve(curve, c))
    };
    let (lo, hi) = bounding_box(h.vertices());
    let extent = hi - lo;
    let diam = extent.norm();
    let mut starts = vec![h.centroid()];
    let mut i = 1;
    while starts.len() < INRADIUS_STARTS + 1 && i < 100 * INRADIUS_STARTS as u64 {
        let [a, b, c] = halton3(i);
        let p = lo + Point3::new(a * extent.x, b * extent.y, c * extent.z);
        if h.distance_to_boundary_inside(p).expect("solid hull") > 0.0 {
            starts.push(p);
        }
        i += 1;
    }
    let results: Vec<(f64, Point3)> = starts
        .par_iter()
        .enumerate()
        .map(|(k, &c0)| {
            let f = |x: &[f64]| -objective(Point3::new(x[0], x[1], x[2]));
            let (x, v) = pattern_search(
                f,
                &[c0.x, c0.y, c0.z],
                PatternOptions {
                    initial_step: 0.05 * diam,
                    min_step: 0.01 * tol,
                    max_evals: 6000,
                    rotations: 2,
                    seed: 1000 + k as u64,
                },
            );
            (-v, Point3::new(x[0], x[1], x[2]))
        })
        .collect();
    let best = results
        .into_iter()
        .fold((f64::NEG_INFINITY, Point3::ORIGIN), |b, c| if c.0 > b.0 { c } else { b });
    Ok((best.0.max(0.0), best.1))
}

fn bounding_box(pts: &[Point3]) -> (Point3, Point3) {
    let inf = f64::INFINITY;
    pts.iter().fold(
        (Point3::new(inf, inf, inf), Point3::new(-inf, -inf, -inf)),
        |(lo, hi), p| {
            (
                Point3::new(lo.x.min(p.x), lo.y.min(p.y), lo.z.min(p.z)),
                Point3::new(hi.x.max(p.x), hi.y.max(p.y), hi.z.max(p.z)),
            )
        },
    )
}

/// Whether the curve stays outside the unit sphere while its hull contains it.
pub fn inspects_sphere(curve: &PolyCurve) -> bool {
    if min_distance_to_curve(curve, Point3::ORIGIN) < 1.0 - INSPECTION_TOL {
        return false;
    }
    match hull(curve.vertices()) {
        Ok(h) if h.is_solid() => h
            .distance_to_boundary_inside(Point3::ORIGIN)
            .is_ok_and(|d| d >= 1.0 - INSPECTION_TOL),
        _ => false,
    }
}

/// Four curve points alternating between the two support planes of a slab.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlabWitness {
    pub u: Direction3,
    pub s_min: f64,
    pub s_max: f64,
    pub t: [ParamPoint; 4],
    /// Distance of each point to its assigned plane.
    pub residuals: [f64; 4],
    /// Largest of the four residuals.
    pub residual: f64,
}

/// Best alternating quadruple for one direction: minimizes the largest
/// distance of the four points to their planes, over both label patterns.
pub fn witness_for_direction(curve: &PolyCurve, u: Direction3) -> Option<SlabWitness> {
    let h: Vec<f64> = curve.vertices().iter().map(|&p| u.dot(p)).collect();
    if h.len() < 4 {
        return None;
    }
    let s_max = h.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let s_min = h.iter().copied().fold(f64::INFINITY, f64::min);
    let top = |i: usize| s_max - h[i];
    let bottom = |i: usize| h[i] - s_min;
    let mut best: Option<(f64, [usize; 4], bool)> = None;
    for starts_top in [true, false] {
        let cost = |k: usize, i: usize| if k.is_multiple_of(2) == starts_top { top(i) } else { bottom(i) };
        // b[k]: smallest max-residual of a matched prefix of length k + 1.
        let mut b = [(f64::INFINITY, [0usize; 4]); 4];
        for i in 0..h.len() {
            for k in (0..4).rev() {
                let prev = if k == 0 { 0.0 } else { b[k - 1].0 };
                let c = prev.max(cost(k, i));
                if c < b[k].0 {
                    let mut idx = if k == 0 { [0; 4] } else { b[k - 1].1 };
                    idx[k] = i;
                    b[k] = (c, idx);
                }
            }
        }
        if best.is_none_or(|(r, _, _)| b[3].0 < r) {
            best = Some((b[3].0, b[3].1, starts_top));
        }
    }
    let (residual, idx, starts_top) = best?;
    if !residual.is_finite() {
        return None;
    }
    let residuals = std::array::from_fn(|k| {
        if (k % 2 == 0) == starts_top {
            top(idx[k])
        } else {
            bottom(idx[k])
        }
    });
    Some(SlabWitness {
        u,
        s_min,
        s_max,
        t: idx.map(|i| ParamPoint::new(i, 0.0)),
        residuals,
        residual,
    })
}

/// Nested quasi-uniform hemisphere directions: the first n are a prefix of
/// the first 2n.
fn nested_hemisphere(n: usize) -> Vec<Direction3> {
    (1..=n as u64)
        .map(|i| {
            let z = halton(i, 2);
            let phi = 2.0 * PI * halton(i, 3);
            let r = (1.0 - z * z).max(0.0).sqrt();
            Direction3::new(Point3::new(r * phi.cos(), r * phi.sin(), z))
                .unwrap_or(Direction3::Z)
        })
        .collect()
}

fn better(a: SlabWitness, b: SlabWitness) -> SlabWitness {
    if b.residual < a.residual {
        b
    } else {
        a
    }
}

/// Best witness over a lattice of `n_dirs` directions, without refinement.
pub fn wienholtz_witness_lattice(curve: &PolyCurve, n_dirs: usize) -> Result<SlabWitness> {
    if curve.vertex_count() < 4 {
        return Err(Error::InvalidArgument("witness needs at least 4 vertices".into()));
    }
    let mut dirs = vec![Direction3::Z];
    dirs.extend(nested_hemisphere(n_dirs.max(1)));
    let found: Vec<SlabWitness> = dirs
        .par_iter()
        .filter_map(|&u| witness_for_direction(curve, u))
        .collect();
    found
        .into_iter()
        .reduce(better)
        .ok_or_else(|| Error::DegenerateCurve("no alternating quadruple".into()))
}

/// Searches directions for the witness with the smallest residual: a lattice
/// of `n_dirs` directions, then local refinement from the best few.
pub fn wienholtz_witness(curve: &PolyCurve, n_dirs: usize) -> Result<SlabWitness> {
    if curve.vertex_count() < 4 {
        return Err(Error::InvalidArgument("witness needs at least 4 vertices".into()));
    }
    let mut dirs = vec![Direction3::Z];
    dirs.extend(nested_hemisphere(n_dirs.max(1)));
    let mut found: Vec<SlabWitness> = dirs
        .par_iter()
        .filter_map(|&u| witness_for_direction(curve, u))
        .collect();
    found.sort_by(|a, b| a.residual.total_cmp(&b.residual));
    let lattice_best = *found
        .first()
        .ok_or_else(|| Error::DegenerateCurve("no alternating quadruple".into()))?;
    let spacing = (2.0 * PI / n_dirs.max(1) as f64).sqrt();
    let refined = found
        .iter()
        .take(4)
        .enumerate()
        .collect::<Vec<_>>()
        .par_iter()
        .filter_map(|&(k, w)| {
            let u0 = w.u;
            let (e1, e2) = u0.frame();
            let f = |x: &[f64]| {
                tilt(u0, e1, e2, x)
                    .and_then(|u| witness_for_direction(curve, u))
                    .map_or(f64::INFINITY, |w| w.residual)
            };
            let (x, _) = pattern_search(
                f,
                &[0.0, 0.0],
                PatternOptions {
                    initial_step: spacing,
                    min_step: 1e-11,
                    max_evals: 3000,
                    rotations: 3,
                    seed: 7 + k as u64,
                },
            );
            tilt(u0, e1, e2, &x).and_then(|u| witness_for_direction(curve, u))
        })
        .collect::<Vec<_>>();
    Ok(refined.into_iter().fold(lattice_best, better))
}

/// Whether every sampled plane through `p` meets the curve in at least 2n
/// transversal crossings. Plane offsets are nudged by ±1e-9 and the smaller
/// count is used, so a vertex on the plane never inflates the count.
pub fn nth_hull_membership(curve: &PolyCurve, p: Point3, n: usize, n_planes: usize) -> Result<bool> {
    if n < 1 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if n_planes < 100 {
        return Err(Error::InvalidArgument(format!("n_planes {n_planes} below 100")));
    }
    const NUDGE: f64 = 1e-9;
    let need = 2 * n;
    let ok = fibonacci_hemisphere(n_planes).par_iter().all(|&u| {
        let s: Vec<f64> = curve.vertices().iter().map(|&v| u.dot(v - p)).collect();
        let count = |delta: f64| {
            let m = s.len();
            let edges = if curve.is_closed() { m } else { m - 1 };
            (0..edges)
                .filter(|&i| (s[i] - delta) * (s[(i + 1) % m] - delta) < 0.0)
                .count()
        };
        count(NUDGE).min(count(-NUDGE)) >= need
    });
    Ok(ok)
}

/// Named lower bound on a ratio.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCheck {
    pub name: String,
    pub threshold: f64,
    pub satisfied: bool,
}

fn finite_or_null<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(*x)
    } else {
        s.serialize_none()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricReport {
    pub length: f64,
    pub width: f64,
    pub inradius: f64,
    #[serde(serialize_with = "finite_or_null")]
    pub ratio_lw: f64,
    #[serde(serialize_with = "finite_or_null")]
    pub ratio_lr: f64,
    pub closed: bool,
    pub bounds: Vec<BoundCheck>,
}

impl MetricReport {
    /// False means a computation bug: the bounds hold for every curve.
    pub fn consistent(&self) -> bool {
        self.bounds.iter().all(|b| b.satisfied)
    }
}

/// Lower bounds on L/w and L/r for open and closed curves in R³.
pub fn ratio_bounds(closed: bool) -> [(&'static str, f64, bool); 2] {
    if closed {
        [
            ("L/w >= sqrt(pi^2+16)", (PI * PI + 16.0).sqrt(), true),
            ("L/r >= 6*sqrt(3)", 6.0 * 3f64.sqrt(), false),
        ]
    } else {
        [
            (
                "L/w >= sqrt(9+2.2782^2)",
                (9.0 + crate::constructions::caliper_constant().powi(2)).sqrt(),
                true,
            ),
            (
                "L/r >= sqrt((pi+2)^2+36)",
                ((PI + 2.0).powi(2) + 36.0).sqrt(),
                false,
            ),
        ]
    }
}

pub fn verify_bounds(curve: &PolyCurve) -> Result<MetricReport> {
    verify_bounds_with(curve, DEFAULT_WIDTH_TOL, DEFAULT_INRADIUS_TOL)
}

/// Computes L, w, r and checks the applicable ratio bounds.
pub fn verify_bounds_with(curve: &PolyCurve, width_tol: f64, inradius_tol: f64) -> Result<MetricReport> {
    let length = curve.length();
    let (width, _) = width3d(curve, width_tol)?;
    let (r, _) = inradius(curve, inradius_tol)?;
    let ratio = |d: f64| if d > 0.0 { length / d } else { f64::INFINITY };
    let ratio_lw = ratio(width);
    let ratio_lr = ratio(r);
    let bounds = ratio_bounds(curve.is_closed())
        .into_iter()
        .map(|(name, threshold, is_width)| {
            let value = if is_width { ratio_lw } else { ratio_lr };
            let satisfied = value >= threshold - BOUND_TOL;
            if !satisfied {
                log::warn!("internal inconsistency: {name} violated ({value} < {threshold})");
            }
            BoundCheck {
                name: name.to_string(),
                threshold,
                satisfied,
            }
        })
        .collect();
    Ok(MetricReport {
        length,
        width,
        inradius: r,
        ratio_lw,
        ratio_lr,
        closed: curve.is_closed(),
        bounds,
    })
}
