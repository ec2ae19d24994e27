//! Curve representations.
//!
//! Everything numeric downstream works on [`PolyCurve`], an ordered vertex
//! list with a closed flag. Exact constructions are kept as
//! [`PiecewiseCurve`]s of lines, circular arcs and helical arcs, whose
//! lengths are known in closed form, and are sampled into polylines on demand.

use crate::error::{invalid, Error, Result};
use crate::geom::{Direction3, Isometry, Point3};

/// Endpoint chaining tolerance for piecewise curves.
pub const CHAIN_TOL: f64 = 1e-9;

/// Orthogonality tolerance for projection bases.
pub const BASIS_TOL: f64 = 1e-12;

/// A polygonal curve. When `closed`, an implicit edge joins the last vertex
/// back to the first.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyCurve {
    vertices: Vec<Point3>,
    closed: bool,
}

/// Address of a point on a curve: segment (or edge) index plus a local
/// parameter in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ParamPoint {
    pub segment: usize,
    pub t: f64,
}

impl ParamPoint {
    pub fn new(segment: usize, t: f64) -> Self {
        ParamPoint { segment, t }
    }

    /// Position along the curve as a single real, for ordering.
    pub fn as_real(&self) -> f64 {
        self.segment as f64 + self.t
    }
}

impl PolyCurve {
    pub fn new(vertices: Vec<Point3>, closed: bool) -> Result<Self> {
        if vertices.len() < 2 {
            return invalid(format!(
                "a polyline needs at least 2 vertices, got {}",
                vertices.len()
            ));
        }
        if let Some(i) = vertices.iter().position(|p| !p.is_finite()) {
            return invalid(format!("vertex {i} has a non-finite coordinate"));
        }
        Ok(PolyCurve { vertices, closed })
    }

    pub fn open(vertices: Vec<Point3>) -> Result<Self> {
        Self::new(vertices, false)
    }

    pub fn closed(vertices: Vec<Point3>) -> Result<Self> {
        Self::new(vertices, true)
    }

    pub fn vertices(&self) -> &[Point3] {
        &self.vertices
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        if self.closed {
            self.vertices.len()
        } else {
            self.vertices.len() - 1
        }
    }

    /// Endpoints of edge `i` (the closing edge is the last one when closed).
    pub fn edge(&self, i: usize) -> (Point3, Point3) {
        let n = self.vertices.len();
        (self.vertices[i], self.vertices[(i + 1) % n])
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point3, Point3)> + '_ {
        (0..self.edge_count()).map(move |i| self.edge(i))
    }

    pub fn length(&self) -> f64 {
        self.edges().map(|(a, b)| a.dist(b)).sum()
    }

    pub fn point_at(&self, p: ParamPoint) -> Point3 {
        let (a, b) = self.edge(p.segment.min(self.edge_count() - 1));
        a.lerp(b, p.t)
    }

    pub fn centroid(&self) -> Point3 {
        let sum = self
            .vertices
            .iter()
            .fold(Point3::ORIGIN, |acc, &p| acc + p);
        sum / self.vertices.len() as f64
    }

    pub fn map_points(&self, f: impl Fn(Point3) -> Point3) -> PolyCurve {
        PolyCurve {
            vertices: self.vertices.iter().map(|&p| f(p)).collect(),
            closed: self.closed,
        }
    }

    pub fn transformed(&self, iso: &Isometry) -> PolyCurve {
        self.map_points(|p| iso.apply(p))
    }

    pub fn translated(&self, t: Point3) -> PolyCurve {
        self.map_points(|p| p + t)
    }

    pub fn scaled(&self, s: f64) -> PolyCurve {
        self.map_points(|p| p * s)
    }

    /// The same closed curve traversed `times` times.
    pub fn repeated(&self, times: usize) -> PolyCurve {
        let mut vertices = Vec::with_capacity(self.vertices.len() * times);
        for k in 0..times.max(1) {
            if !self.closed && k > 0 {
                vertices.extend(self.vertices.iter().rev().skip(1));
                continue;
            }
            vertices.extend_from_slice(&self.vertices);
        }
        PolyCurve {
            vertices,
            closed: self.closed,
        }
    }

    /// Orthogonal projection onto the span of `basis`, in basis coordinates,
    /// zero-padded to three components.
    pub fn project(&self, basis: &[Direction3]) -> Result<PolyCurve> {
        check_orthonormal(basis)?;
        Ok(self.map_points(|p| {
            let mut c = [0.0; 3];
            for (slot, b) in c.iter_mut().zip(basis) {
                *slot = b.dot(p);
            }
            Point3::from(c)
        }))
    }

    /// Cumulative arclength at each vertex, plus the total as the last entry
    /// for closed curves.
    fn cumulative_lengths(&self) -> Vec<f64> {
        let mut acc = Vec::with_capacity(self.edge_count() + 1);
        let mut s = 0.0;
        acc.push(0.0);
        for (a, b) in self.edges() {
            s += a.dist(b);
            acc.push(s);
        }
        acc
    }

    /// Point at arclength `s` from the first vertex.
    pub fn point_at_arclength(&self, s: f64) -> Point3 {
        let cum = self.cumulative_lengths();
        point_on_cumulative(self, &cum, s)
    }

    /// Resample with `n` vertices equally spaced in arclength.
    ///
    /// Open curves keep both endpoints (spacing L/(n-1)); closed curves keep
    /// the first vertex and use spacing L/n around the loop.
    pub fn arclength_reparam(&self, n: usize) -> Result<PolyCurve> {
        if n < 2 {
            return invalid(format!("arclength_reparam needs n >= 2, got {n}"));
        }
        let cum = self.cumulative_lengths();
        let total = *cum.last().unwrap();
        if total <= 0.0 {
            return Err(Error::DegenerateCurve("curve has zero length".into()));
        }
        let step = if self.closed {
            total / n as f64
        } else {
            total / (n - 1) as f64
        };
        let mut out: Vec<Point3> = (0..n)
            .map(|k| point_on_cumulative(self, &cum, k as f64 * step))
            .collect();
        if !self.closed {
            out[n - 1] = *self.vertices.last().unwrap();
        }
        PolyCurve::new(out, self.closed)
    }
}

fn point_on_cumulative(curve: &PolyCurve, cum: &[f64], s: f64) -> Point3 {
    let total = *cum.last().unwrap();
    let s = s.clamp(0.0, total);
    // First edge whose end lies at or beyond s.
    let idx = cum.partition_point(|&c| c < s).clamp(1, cum.len() - 1) - 1;
    let (a, b) = curve.edge(idx);
    let len = cum[idx + 1] - cum[idx];
    if len <= 0.0 {
        a
    } else {
        a.lerp(b, (s - cum[idx]) / len)
    }
}

pub(crate) fn check_orthonormal(basis: &[Direction3]) -> Result<()> {
    if basis.is_empty() || basis.len() > 3 {
        return invalid(format!("basis must have 1..=3 vectors, got {}", basis.len()));
    }
    for (i, a) in basis.iter().enumerate() {
        for b in &basis[i + 1..] {
            if a.dot(b.vec()).abs() > BASIS_TOL {
                return invalid("basis vectors are not pairwise orthogonal");
            }
        }
    }
    Ok(())
}

/// One exact analytic piece of a [`PiecewiseCurve`].
#[derive(Debug, Clone, PartialEq)]
pub enum Segment {
    Line {
        a: Point3,
        b: Point3,
    },
    /// `center + radius (cos θ u + sin θ v)` for θ from `theta0` to `theta1`.
    Arc {
        center: Point3,
        radius: f64,
        u: Point3,
        v: Point3,
        theta0: f64,
        theta1: f64,
    },
    /// `origin + radius (cos θ e1 + sin θ e2) + pitch θ axis`, where
    /// `(e1, e2) = axis.frame()`.
    Helix {
        origin: Point3,
        axis: Direction3,
        radius: f64,
        pitch: f64,
        theta0: f64,
        theta1: f64,
    },
}

impl Segment {
    pub fn line(a: Point3, b: Point3) -> Segment {
        Segment::Line { a, b }
    }

    pub fn arc(center: Point3, radius: f64, u: Point3, v: Point3, theta0: f64, theta1: f64) -> Result<Segment> {
        let s = Segment::Arc {
            center,
            radius,
            u,
            v,
            theta0,
            theta1,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn helix(
        origin: Point3,
        axis: Direction3,
        radius: f64,
        pitch: f64,
        theta0: f64,
        theta1: f64,
    ) -> Result<Segment> {
        let s = Segment::Helix {
            origin,
            axis,
            radius,
            pitch,
            theta0,
            theta1,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = match *self {
            Segment::Line { a, b } => a.is_finite() && b.is_finite(),
            Segment::Arc {
                center,
                radius,
                u,
                v,
                theta0,
                theta1,
            } => {
                if !(radius > 0.0) {
                    return invalid("arc radius must be positive");
                }
                if (u.norm() - 1.0).abs() > 1e-9
                    || (v.norm() - 1.0).abs() > 1e-9
                    || u.dot(v).abs() > 1e-9
                {
                    return invalid("arc basis (u, v) must be orthonormal");
                }
                center.is_finite() && theta0.is_finite() && theta1.is_finite()
            }
            Segment::Helix {
                origin,
                radius,
                pitch,
                theta0,
                theta1,
                ..
            } => {
                if !(radius > 0.0) {
                    return invalid("helix radius must be positive");
                }
                origin.is_finite() && pitch.is_finite() && theta0.is_finite() && theta1.is_finite()
            }
        };
        if finite {
            Ok(())
        } else {
            invalid("segment has non-finite data")
        }
    }

    /// Point at local parameter `t ∈ [0, 1]`.
    pub fn point(&self, t: f64) -> Point3 {
        match *self {
            Segment::Line { a, b } => a.lerp(b, t),
            Segment::Arc {
                center,
                radius,
                u,
                v,
                theta0,
                theta1,
            } => {
                let th = theta0 + (theta1 - theta0) * t;
                center + (u * th.cos() + v * th.sin()) * radius
            }
            Segment::Helix {
                theta0, theta1, ..
            } => self.helix_point(theta0 + (theta1 - theta0) * t, 1.0),
        }
    }

    /// Helix point at angle `theta`, with the radial part scaled by `stretch`.
    fn helix_point(&self, theta: f64, stretch: f64) -> Point3 {
        match *self {
            Segment::Helix {
                origin,
                axis,
                radius,
                pitch,
                ..
            } => {
                let (e1, e2) = axis.frame();
                origin + (e1 * theta.cos() + e2 * theta.sin()) * (radius * stretch) + axis.vec() * (pitch * theta)
            }
            _ => unreachable!("helix_point on a non-helix segment"),
        }
    }

    pub fn start(&self) -> Point3 {
        self.point(0.0)
    }

    pub fn end(&self) -> Point3 {
        self.point(1.0)
    }

    pub fn exact_length(&self) -> f64 {
        match *self {
            Segment::Line { a, b } => a.dist(b),
            Segment::Arc {
                radius,
                theta0,
                theta1,
                ..
            } => radius * (theta1 - theta0).abs(),
            Segment::Helix {
                radius,
                pitch,
                theta0,
                theta1,
                ..
            } => (theta1 - theta0).abs() * radius.hypot(pitch),
        }
    }

    fn is_curved(&self) -> bool {
        !matches!(self, Segment::Line { .. })
    }

    /// Vertices of a polygon inscribed in the segment with `pieces` edges,
    /// including both endpoints.
    fn inscribed(&self, pieces: usize) -> Vec<Point3> {
        (0..=pieces)
            .map(|j| self.point(j as f64 / pieces as f64))
            .collect()
    }

    /// Vertices of a polygon whose edges are tangent to the segment's
    /// circle (or, for helices, to the projected circle), including both
    /// endpoints. Lines fall back to the inscribed sampling.
    fn circumscribed(&self, pieces: usize) -> Vec<Point3> {
        let half = 0.5 / pieces as f64;
        match *self {
            Segment::Line { .. } => self.inscribed(pieces),
            Segment::Arc {
                center,
                radius,
                u,
                v,
                theta0,
                theta1,
            } => {
                let dth = (theta1 - theta0) / pieces as f64;
                let stretch = 1.0 / (0.5 * dth).cos();
                let mut out = vec![self.start()];
                for j in 0..pieces {
                    let th = theta0 + (theta1 - theta0) * (j as f64 / pieces as f64 + half);
                    out.push(center + (u * th.cos() + v * th.sin()) * (radius * stretch));
                }
                out.push(self.end());
                out
            }
            Segment::Helix {
                theta0, theta1, ..
            } => {
                let dth = (theta1 - theta0) / pieces as f64;
                let stretch = 1.0 / (0.5 * dth).cos();
                let mut out = vec![self.start()];
                for j in 0..pieces {
                    let th = theta0 + (theta1 - theta0) * (j as f64 / pieces as f64 + half);
                    out.push(self.helix_point(th, stretch));
                }
                out.push(self.end());
                out
            }
        }
    }

    pub fn transformed(&self, iso: &Isometry) -> Segment {
        match *self {
            Segment::Line { a, b } => Segment::Line {
                a: iso.apply(a),
                b: iso.apply(b),
            },
            Segment::Arc {
                center,
                radius,
                u,
                v,
                theta0,
                theta1,
            } => Segment::Arc {
                center: iso.apply(center),
                radius,
                u: iso.apply_vector(u),
                v: iso.apply_vector(v),
                theta0,
                theta1,
            },
            Segment::Helix {
                origin,
                axis,
                radius,
                pitch,
                theta0,
                theta1,
            } => {
                // Re-express the image in the canonical frame of the new axis.
                let (e1, _) = axis.frame();
                let new_axis = Direction3::normalize(iso.apply_vector(axis.vec()))
                    .expect("isometries keep unit vectors nonzero");
                let (f1, f2) = new_axis.frame();
                let qe1 = iso.apply_vector(e1);
                let phi = qe1.dot(f2).atan2(qe1.dot(f1));
                let moved = iso.apply(origin);
                if iso.linear.det() > 0.0 {
                    Segment::Helix {
                        origin: moved - new_axis.vec() * (pitch * phi),
                        axis: new_axis,
                        radius,
                        pitch,
                        theta0: theta0 + phi,
                        theta1: theta1 + phi,
                    }
                } else {
                    Segment::Helix {
                        origin: moved + new_axis.vec() * (pitch * phi),
                        axis: new_axis,
                        radius,
                        pitch: -pitch,
                        theta0: phi - theta0,
                        theta1: phi - theta1,
                    }
                }
            }
        }
    }

    pub fn scaled(&self, s: f64) -> Segment {
        match *self {
            Segment::Line { a, b } => Segment::Line { a: a * s, b: b * s },
            Segment::Arc {
                center,
                radius,
                u,
                v,
                theta0,
                theta1,
            } => Segment::Arc {
                center: center * s,
                radius: radius * s,
                u,
                v,
                theta0,
                theta1,
            },
            Segment::Helix {
                origin,
                axis,
                radius,
                pitch,
                theta0,
                theta1,
            } => Segment::Helix {
                origin: origin * s,
                axis,
                radius: radius * s,
                pitch: pitch * s,
                theta0,
                theta1,
            },
        }
    }
}

/// A chain of exact segments.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseCurve {
    segments: Vec<Segment>,
    closed: bool,
}

impl PiecewiseCurve {
    pub fn new(segments: Vec<Segment>, closed: bool) -> Result<Self> {
        if segments.is_empty() {
            return invalid("piecewise curve needs at least one segment");
        }
        for s in &segments {
            s.validate()?;
        }
        for (i, w) in segments.windows(2).enumerate() {
            let gap = w[0].end().dist(w[1].start());
            if gap > CHAIN_TOL {
                return invalid(format!("segments {i} and {} are {gap:e} apart", i + 1));
            }
        }
        if closed {
            let gap = segments.last().unwrap().end().dist(segments[0].start());
            if gap > CHAIN_TOL {
                return invalid(format!("closing gap {gap:e} exceeds tolerance"));
            }
        }
        Ok(PiecewiseCurve { segments, closed })
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn length(&self) -> f64 {
        self.segments.iter().map(Segment::exact_length).sum()
    }

    pub fn point(&self, p: ParamPoint) -> Point3 {
        self.segments[p.segment].point(p.t)
    }

    fn pieces_for(seg: &Segment, density: f64, even: bool) -> usize {
        let k = ((seg.exact_length() * density).ceil() as usize).max(1);
        if even && seg.is_curved() && k % 2 == 1 {
            k + 1
        } else {
            k
        }
    }

    fn assemble(&self, density: f64, outer: bool) -> Result<PolyCurve> {
        if !(density > 0.0) || !density.is_finite() {
            return invalid(format!("sampling density must be positive, got {density}"));
        }
        let mut pts: Vec<Point3> = Vec::new();
        for (i, seg) in self.segments.iter().enumerate() {
            let k = Self::pieces_for(seg, density, outer);
            let local = if outer {
                seg.circumscribed(k)
            } else {
                seg.inscribed(k)
            };
            let skip = usize::from(i > 0);
            pts.extend(local.into_iter().skip(skip));
        }
        if self.closed && pts.len() > 2 {
            pts.pop();
        }
        PolyCurve::new(pts, self.closed)
    }

    /// Inscribed polyline with about `points_per_unit_length` vertices per
    /// unit of exact length. Each segment is sampled uniformly in its own
    /// parameter, so its length never exceeds the exact length.
    pub fn sample(&self, points_per_unit_length: f64) -> Result<PolyCurve> {
        self.assemble(points_per_unit_length, false)
    }

    /// Polyline whose curved pieces are replaced by tangent (circumscribed)
    /// polygons. Its convex hull contains the hull of the exact curve, which
    /// is what sphere-containment checks need. Curved segments get an even
    /// number of edges so the segment midpoint is a tangency point.
    pub fn sample_circumscribed(&self, points_per_unit_length: f64) -> Result<PolyCurve> {
        self.assemble(points_per_unit_length, true)
    }

    pub fn transformed(&self, iso: &Isometry) -> PiecewiseCurve {
        PiecewiseCurve {
            segments: self.segments.iter().map(|s| s.transformed(iso)).collect(),
            closed: self.closed,
        }
    }

    pub fn scaled(&self, s: f64) -> PiecewiseCurve {
        PiecewiseCurve {
            segments: self.segments.iter().map(|g| g.scaled(s)).collect(),
            closed: self.closed,
        }
    }
}

/// Either curve representation, as read from or written to JSON.
#[derive(Debug, Clone, PartialEq)]
pub enum Curve {
    Poly(PolyCurve),
    Piecewise(PiecewiseCurve),
}

impl Curve {
    pub fn length(&self) -> f64 {
        match self {
            Curve::Poly(c) => c.length(),
            Curve::Piecewise(c) => c.length(),
        }
    }

    pub fn is_closed(&self) -> bool {
        match self {
            Curve::Poly(c) => c.is_closed(),
            Curve::Piecewise(c) => c.is_closed(),
        }
    }

    /// Polyline view: piecewise curves are sampled at `density`.
    pub fn to_poly(&self, density: f64) -> Result<PolyCurve> {
        match self {
            Curve::Poly(c) => Ok(c.clone()),
            Curve::Piecewise(c) => c.sample(density),
        }
    }
}
