//! The horizon functional of curves outside the unit sphere: the area of
//! the sphere's tangent planes that meet the curve, counted with
//! multiplicity.
//!
//! For a point at distance c from the origin, moving at angle α to its
//! position vector, the θ-integral over the horizon circle is
//! ∫₀^{2π} |A cos θ + B| dθ with A = √(c²−1) sin α, B = cos α, scaled by
//! 1/c². That inner integral has a closed form, so only the integral along
//! the curve is done numerically.

use std::f64::consts::PI;
use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::convex::{min_distance_to_curve, point_line_distance, point_segment_distance};
use crate::curve::PolyCurve;
use crate::error::{Error, Result};
use crate::geom::{Direction3, Point3};
use crate::metrics::{inspects_sphere, INSPECTION_TOL};
use crate::optimize::golden_section;
use crate::quadrature;

/// Curves must keep at least this far outside the unit sphere.
pub const SPHERE_CLEARANCE: f64 = 1e-9;

/// Default absolute tolerance for [`horizon`].
pub const DEFAULT_HORIZON_TOL: f64 = 1e-6;

const MAX_PANELS_PER_EDGE: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HorizonMethod {
    ClosedFormInner,
    FullQuadrature,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HorizonEstimate {
    pub value: f64,
    pub abs_error: f64,
    pub method: HorizonMethod,
}

/// Local geometry of the curve at one parameter value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrameSample {
    pub t: f64,
    pub gamma_norm: f64,
    pub alpha: f64,
}

/// ∫₀^{2π} |a cos θ + b| dθ.
pub fn abs_cos_integral(a: f64, b: f64) -> f64 {
    let (a, b) = (a.abs(), b.abs());
    if b >= a {
        return 2.0 * PI * b;
    }
    // With b = a cos φ the integral is 2πb + 4a(sin φ − φ cos φ). This form
    // avoids the √ε cancellation of 4(√(a²−b²) + b asin(b/a)) near a = b.
    let phi = ((a - b) * (a + b)).sqrt().atan2(b);
    let excess = if phi < 1e-2 {
        let p2 = phi * phi;
        phi * p2 * (1.0 / 3.0 - p2 * (1.0 / 30.0 - p2 / 840.0))
    } else {
        phi.sin() - phi * phi.cos()
    };
    2.0 * PI * b + 4.0 * a * excess
}

/// I(x, y) = (1/x²) ∫₀^{2π} |√(x²−1) y cos θ + √(1−y²)| dθ for x ≥ 1 and
/// y ∈ [0, 1]; y plays the role of sin α and x of ‖γ‖.
pub fn inner_integral_i(x: f64, y: f64) -> Result<f64> {
    if !(x >= 1.0 && x.is_finite()) || !(0.0..=1.0).contains(&y) {
        return Err(Error::InvalidArgument(format!(
            "I({x}, {y}) needs x >= 1 and 0 <= y <= 1"
        )));
    }
    let a = (x * x - 1.0).sqrt() * y;
    let b = (1.0 - y * y).sqrt();
    Ok(abs_cos_integral(a, b) / (x * x))
}

/// Horizon density at a point `g` moving in unit direction `e`.
fn density(g: Point3, e: Point3) -> f64 {
    let c2 = g.norm_sq();
    let c = c2.sqrt();
    let cos_a = (g.dot(e) / c).clamp(-1.0, 1.0);
    let sin_a = (1.0 - cos_a * cos_a).sqrt();
    abs_cos_integral((c2 - 1.0).sqrt() * sin_a, cos_a) / c2
}

fn check_outside(curve: &PolyCurve) -> Result<()> {
    let d = min_distance_to_curve(curve, Point3::ORIGIN);
    if d <= 1.0 + SPHERE_CLEARANCE {
        return Err(Error::Domain(format!(
            "curve comes within {d} of the origin; it must stay outside the unit sphere"
        )));
    }
    Ok(())
}

/// Contribution of each edge: (integral, error estimate).
fn edge_integrals(curve: &PolyCurve, tol: f64) -> Result<Vec<(f64, f64)>> {
    let edges: Vec<(Point3, Point3)> = curve.edges().collect();
    let per_edge = tol / edges.len().max(1) as f64;
    edges
        .par_iter()
        .map(|&(a, b)| {
            let len = a.dist(b);
            if len == 0.0 {
                return Ok((0.0, 0.0));
            }
            let e = (b - a) / len;
            quadrature::integrate(|s| density(a + e * s, e), 0.0, len, per_edge, MAX_PANELS_PER_EDGE)
        })
        .collect()
}

/// H(γ) by closed-form θ-integration and adaptive Gauss–Kronrod along each
/// edge, to absolute error `tol`.
pub fn horizon(curve: &PolyCurve, tol: f64) -> Result<HorizonEstimate> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance {tol} must be positive")));
    }
    check_outside(curve)?;
    warn_radial_edges(curve);
    let parts = edge_integrals(curve, tol)?;
    let (value, abs_error) = parts.iter().fold((0.0, 0.0), |(v, e), p| (v + p.0, e + p.1));
    Ok(HorizonEstimate {
        value,
        abs_error,
        method: HorizonMethod::ClosedFormInner,
    })
}

fn warn_radial_edges(curve: &PolyCurve) {
    for (i, (a, b)) in curve.edges().enumerate() {
        let d = b - a;
        if d.norm() > 0.0 && a.cross(d).norm() <= 1e-12 * a.norm() * d.norm() {
            log::warn!("edge {i} is radial; its horizon density is 2π/‖γ‖² throughout");
        }
    }
}

/// Monte Carlo estimate of H(γ): 4π times the mean number of transversal
/// crossings of the curve with the tangent plane at a uniform random point of
/// the sphere. The reported error is three standard errors.
pub fn horizon_by_counting(curve: &PolyCurve, n_points: usize, seed: u64) -> Result<HorizonEstimate> {
    if n_points < 2 {
        return Err(Error::InvalidArgument("need at least 2 sample points".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<Direction3> = (0..n_points).map(|_| Direction3::random(&mut rng)).collect();
    let v = curve.vertices();
    let m = v.len();
    let edges = curve.edge_count();
    let counts: Vec<f64> = points
        .par_iter()
        .map(|p| {
            let s: Vec<f64> = v.iter().map(|&x| p.dot(x) - 1.0).collect();
            (0..edges).filter(|&i| s[i] * s[(i + 1) % m] < 0.0).count() as f64
        })
        .collect();
    Ok(monte_carlo_estimate(&counts, 4.0 * PI))
}

/// Mean and 3σ error of `scale`·counts. The standard error is floored at the
/// resolution of a single count change so an all-equal sample does not
/// report zero error.
pub(crate) fn monte_carlo_estimate(counts: &[f64], scale: f64) -> HorizonEstimate {
    let n = counts.len() as f64;
    let mean = counts.iter().sum::<f64>() / n;
    let var = counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let se = (scale * (var / n).sqrt()).max(scale * 2.0 / n);
    HorizonEstimate {
        value: scale * mean,
        abs_error: 3.0 * se,
        method: HorizonMethod::MonteCarlo,
    }
}

/// Whether the curve inspects the sphere and no edge line enters it.
pub fn is_efficient_inspection(curve: &PolyCurve) -> bool {
    inspects_sphere(curve) && offending_edge(curve).is_none()
}

/// First edge whose supporting line passes closer than 1 to the origin.
fn offending_edge(curve: &PolyCurve) -> Option<usize> {
    curve.edges().position(|(a, b)| a != b && point_line_distance(Point3::ORIGIN, a, b) < 1.0 - INSPECTION_TOL)
}

/// Cone of rays from `p` that hit the unit sphere: positive strictly inside.
fn cone_sign(p: Point3, x: Point3) -> f64 {
    let d = x - p;
    let n = d.norm();
    if n == 0.0 {
        return 0.0;
    }
    let cos_beta = (1.0 - 1.0 / p.norm_sq()).sqrt();
    (-p).dot(d) / (p.norm() * n) - cos_beta
}

/// Replaces edges whose lines enter the sphere, one at a time, until the
/// inspection is efficient. Returns the curve and its length after each step.
pub fn make_efficient_with_log(curve: &PolyCurve) -> Result<(PolyCurve, Vec<f64>)> {
    if !curve.is_closed() {
        return Err(Error::InvalidArgument("curve must be closed".into()));
    }
    if !inspects_sphere(curve) {
        return Err(Error::InvalidArgument("curve does not inspect the unit sphere".into()));
    }
    let cap = 10 * curve.edge_count();
    let mut current = curve.clone();
    let mut log = vec![current.length()];
    for _ in 0..cap {
        let Some(i) = offending_edge(&current) else {
            return Ok((current, log));
        };
        current = cut_corner(&current, i)?;
        log.push(current.length());
    }
    if offending_edge(&current).is_none() {
        return Ok((current, log));
    }
    Err(Error::NonTermination {
        iterations: cap,
        detail: "edges still enter the sphere".into(),
    })
}

pub fn make_efficient(curve: &PolyCurve) -> Result<PolyCurve> {
    make_efficient_with_log(curve).map(|(c, _)| c)
}

/// One step: p is the end of edge `i` farther from the sphere, p′ the other.
/// Walk from p′ away from p to the first point q on the tangent cone at p and
/// replace the arc p′…q by the segment pq.
fn cut_corner(curve: &PolyCurve, i: usize) -> Result<PolyCurve> {
    let v = curve.vertices();
    let n = v.len();
    let (a, b) = (i, (i + 1) % n);
    let a_is_p = match v[a].norm().total_cmp(&v[b].norm()) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Less => false,
        std::cmp::Ordering::Equal => v[a].lex_cmp(&v[b]).is_le(),
    };
    // Order the ring as p, p′, … walking away from p.
    let ring: Vec<Point3> = if a_is_p {
        (0..n).map(|k| v[(b + n - 1 + k) % n]).collect()
    } else {
        (0..n).map(|k| v[(b + n - k) % n]).collect()
    };
    let p = ring[0];
    let g = |x: Point3| cone_sign(p, x);
    for k in 1..n - 1 {
        let (x0, x1) = (ring[k], ring[k + 1]);
        if g(x1) > 0.0 {
            continue;
        }
        // Bisect on the edge for the exit point; keep q on the outside.
        let (mut lo, mut hi) = (0.0, 1.0);
        let len = x0.dist(x1);
        while (hi - lo) * len > 1e-10 {
            let mid = 0.5 * (lo + hi);
            if g(x0.lerp(x1, mid)) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let q = x0.lerp(x1, hi);
        let mut out = vec![p, q];
        let rest = if q == x1 { k + 2 } else { k + 1 };
        out.extend_from_slice(&ring[rest.min(n)..]);
        if !a_is_p {
            out[1..].reverse();
        }
        return PolyCurve::closed(out);
    }
    Err(Error::DegenerateCurve(format!(
        "the arc after edge {i} never leaves the tangent cone at its far vertex"
    )))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HorizonBounds {
    /// 8π.
    pub lower: f64,
    pub horizon: HorizonEstimate,
    /// (4π/(3√3))·L, meaningful only for efficient inspections.
    pub upper: f64,
    pub efficient: bool,
    pub lower_holds: bool,
    /// Always true when the inspection is not efficient.
    pub upper_holds: bool,
}

/// Checks 8π ≤ H(γ), and H(γ) ≤ (4π/(3√3))·L when the inspection is
/// efficient; together these give L ≥ 6√3.
pub fn verify_horizon_bounds(curve: &PolyCurve, tol: f64) -> Result<HorizonBounds> {
    if !curve.is_closed() {
        return Err(Error::InvalidArgument("curve must be closed".into()));
    }
    if !inspects_sphere(curve) {
        return Err(Error::InvalidArgument("curve does not inspect the unit sphere".into()));
    }
    let h = horizon(curve, tol)?;
    let lower = 8.0 * PI;
    let upper = 4.0 * PI / (3.0 * 3f64.sqrt()) * curve.length();
    let efficient = is_efficient_inspection(curve);
    let slack = h.abs_error + 1e-9;
    Ok(HorizonBounds {
        lower,
        horizon: h,
        upper,
        efficient,
        lower_holds: h.value >= lower - slack,
        upper_holds: !efficient || h.value <= upper + slack,
    })
}

/// CSV rows (t, ‖γ‖, α, edge, edge contribution) at `per_edge` interior
/// points of every edge; t is arclength from the first vertex.
pub fn horizon_diagnostics_csv(curve: &PolyCurve, per_edge: usize, tol: f64) -> Result<String> {
    check_outside(curve)?;
    let parts = edge_integrals(curve, tol)?;
    let mut out = String::from("t,gamma_norm,alpha,edge,edge_contribution\n");
    let mut start = 0.0;
    for (i, (a, b)) in curve.edges().enumerate() {
        let len = a.dist(b);
        for s in frame_samples_on_edge(a, b, per_edge) {
            let _ = writeln!(out, "{},{},{},{},{}", start + s.t, s.gamma_norm, s.alpha, i, parts[i].0);
        }
        start += len;
    }
    Ok(out)
}

/// Samples at the midpoints of `count` equal parts of the edge; t is the
/// arclength from `a`.
pub fn frame_samples_on_edge(a: Point3, b: Point3, count: usize) -> Vec<FrameSample> {
    let len = a.dist(b);
    if len == 0.0 {
        return Vec::new();
    }
    let e = (b - a) / len;
    (0..count)
        .map(|k| {
            let t = len * (k as f64 + 0.5) / count as f64;
            let g = a + e * t;
            let c = g.norm();
            FrameSample {
                t,
                gamma_norm: c,
                alpha: (g.dot(e) / c).clamp(-1.0, 1.0).acos(),
            }
        })
        .collect()
}

/// I(x, y) on an nx × ny grid over x ∈ [1, 3], y ∈ [1/x, 1].
pub fn i_grid(nx: usize, ny: usize) -> Result<Vec<(f64, f64, f64)>> {
    if nx < 2 || ny < 2 {
        return Err(Error::InvalidArgument("grid needs at least 2 points per axis".into()));
    }
    let mut out = Vec::with_capacity(nx * ny);
    for i in 0..nx {
        let x = 1.0 + 2.0 * i as f64 / (nx - 1) as f64;
        for j in 0..ny {
            let y0 = 1.0 / x;
            let y = (y0 + (1.0 - y0) * j as f64 / (ny - 1) as f64).min(1.0);
            out.push((x, y, inner_integral_i(x, y)?));
        }
    }
    Ok(out)
}

/// Maximum of I over x ∈ [1, 3], 1/x ≤ y ≤ 1 as (x, y, I): the best point of
/// an nx × ny grid, refined by nested golden-section searches over the
/// neighboring cells. The inner search runs in s with y = 1/x + s(1 − 1/x),
/// so a maximum on the y = 1/x edge is an endpoint of the bracket.
pub fn i_max(nx: usize, ny: usize) -> Result<(f64, f64, f64)> {
    let grid = i_grid(nx, ny)?;
    let best = grid.iter().copied().fold((1.0, 1.0, f64::NEG_INFINITY), |b, c| if c.2 > b.2 { c } else { b });
    let to_y = |x: f64, s: f64| (1.0 / x + s * (1.0 - 1.0 / x)).min(1.0);
    let i_at = |x: f64, s: f64| inner_integral_i(x, to_y(x, s)).unwrap_or(f64::NEG_INFINITY);
    let (gx, gy, _) = best;
    let s0 = if gx > 1.0 { ((gy - 1.0 / gx) / (1.0 - 1.0 / gx)).clamp(0.0, 1.0) } else { 0.0 };
    let (hx, hs) = (2.0 / (nx - 1) as f64, 1.0 / (ny - 1) as f64);
    let (s_lo, s_hi) = ((s0 - hs).max(0.0), (s0 + hs).min(1.0));
    let inner = |x: f64| golden_section(|s| -i_at(x, s), s_lo, s_hi, 1e-12);
    let (x, neg) = golden_section(|x| inner(x).1, (gx - hx).max(1.0), (gx + hx).min(3.0), 1e-12);
    if -neg <= best.2 {
        return Ok(best);
    }
    let s = inner(x).0;
    Ok((x, to_y(x, s), -neg))
}

pub fn i_grid_csv(nx: usize, ny: usize) -> Result<String> {
    let mut out = String::from("x,y,I\n");
    for (x, y, v) in i_grid(nx, ny)? {
        let _ = writeln!(out, "{x},{y},{v}");
    }
    Ok(out)
}

/// Distance from the origin to the closest edge line (ignoring segment ends).
pub fn min_edge_line_distance(curve: &PolyCurve) -> f64 {
    curve
        .edges()
        .filter(|(a, b)| a != b)
        .map(|(a, b)| point_line_distance(Point3::ORIGIN, a, b))
        .fold(f64::INFINITY, f64::min)
}

/// Distance from the origin to the curve, for reporting.
pub fn min_segment_distance(curve: &PolyCurve) -> f64 {
    curve
        .edges()
        .map(|(a, b)| point_segment_distance(Point3::ORIGIN, a, b))
        .fold(f64::INFINITY, f64::min)
}
