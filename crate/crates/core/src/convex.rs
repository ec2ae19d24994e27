//! Convex hulls of point clouds in R³ and the queries built on them.
//!
//! The hull is built incrementally (beneath-beyond) on exact orientation
//! predicates, so visibility decisions never contradict each other even on
//! the nearly coplanar ruled patches that curve samples produce. Coplanar
//! triangles are merged into facets afterwards. Planar and collinear inputs
//! produce flat hulls that still answer support queries.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use robust::Coord3D;

use crate::curve::PolyCurve;
use crate::error::{Error, Result};
use crate::geom::{Direction3, Point3};

/// Normal agreement needed to merge adjacent triangles into one facet.
pub const FACET_MERGE_TOL: f64 = 1e-10;

/// Relative thickness below which a point set is treated as flat.
const FLAT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HullKind {
    Solid,
    /// All points lie in one plane; `plane_normal` is set.
    Planar,
    /// All points lie on one line.
    Segment,
}

/// A face of the hull: outward unit normal, offset, incident vertices
/// (indices into [`ConvexHull3::vertices`]).
#[derive(Debug, Clone, PartialEq)]
pub struct Facet {
    pub normal: Direction3,
    pub offset: f64,
    pub vertices: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct ConvexHull3 {
    kind: HullKind,
    vertices: Vec<Point3>,
    facets: Vec<Facet>,
    triangles: Vec<[usize; 3]>,
    plane_normal: Option<Direction3>,
}

#[inline]
fn c3(p: Point3) -> Coord3D<f64> {
    Coord3D {
        x: p.x,
        y: p.y,
        z: p.z,
    }
}

/// Exact sign of the orientation of `d` against the oriented plane (a, b, c).
/// Negative when `d` is on the side of the normal (b − a) × (c − a).
#[inline]
fn orient(a: Point3, b: Point3, c: Point3, d: Point3) -> f64 {
    robust::orient3d(c3(a), c3(b), c3(c), c3(d))
}

impl ConvexHull3 {
    pub fn kind(&self) -> HullKind {
        self.kind
    }

    pub fn is_solid(&self) -> bool {
        self.kind == HullKind::Solid
    }

    pub fn vertices(&self) -> &[Point3] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// Hull triangles (solid hulls only), outward oriented.
    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn plane_normal(&self) -> Option<Direction3> {
        self.plane_normal
    }

    /// Undirected edges of the triangulated boundary.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self
            .triangles
            .iter()
            .flat_map(|t| [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])])
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        if self.kind != HullKind::Solid {
            let n = self.vertices.len();
            out.extend((0..n).map(|i| (i.min((i + 1) % n), i.max((i + 1) % n))));
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn centroid(&self) -> Point3 {
        let s = self.vertices.iter().fold(Point3::ORIGIN, |a, &p| a + p);
        s / self.vertices.len() as f64
    }

    /// Support function: max over the hull of ⟨x, u⟩.
    pub fn support(&self, u: Direction3) -> f64 {
        support_of(&self.vertices, u.vec())
    }

    /// Width of the slab orthogonal to `u`.
    pub fn slab_width(&self, u: Direction3) -> f64 {
        self.support(u) + self.support(-u)
    }

    /// Signed distance from `p` to the hull boundary: positive inside, the
    /// radius of the largest ball centered at `p` inside the hull.
    pub fn distance_to_boundary_inside(&self, p: Point3) -> Result<f64> {
        if self.kind != HullKind::Solid {
            return Err(Error::DegenerateHull(format!(
                "{:?} hull has no interior",
                self.kind
            )));
        }
        Ok(self.facets.iter().fold(f64::INFINITY, |m, f| {
            m.min(f.offset - f.normal.dot(p))
        }))
    }

    /// OFF text (triangles for solid hulls, one polygon otherwise).
    pub fn to_off(&self) -> String {
        let mut out = String::from("OFF\n");
        let faces: Vec<Vec<usize>> = if self.kind == HullKind::Solid {
            self.triangles.iter().map(|t| t.to_vec()).collect()
        } else {
            vec![(0..self.vertices.len()).collect()]
        };
        let _ = writeln!(out, "{} {} 0", self.vertices.len(), faces.len());
        for v in &self.vertices {
            let _ = writeln!(out, "{:.17} {:.17} {:.17}", v.x, v.y, v.z);
        }
        for f in faces {
            let _ = write!(out, "{}", f.len());
            for i in f {
                let _ = write!(out, " {i}");
            }
            out.push('\n');
        }
        out
    }
}

pub(crate) fn support_of(points: &[Point3], u: Point3) -> f64 {
    points
        .iter()
        .fold(f64::NEG_INFINITY, |m, p| m.max(p.dot(u)))
}

/// Convex hull of a point set.
///
/// Errors only when fewer than two distinct points are given; flat inputs
/// return a [`HullKind::Planar`] or [`HullKind::Segment`] hull.
pub fn hull(points: &[Point3]) -> Result<ConvexHull3> {
    if let Some(i) = points.iter().position(|p| !p.is_finite()) {
        return Err(Error::InvalidArgument(format!("point {i} is not finite")));
    }
    let Some(&first) = points.first() else {
        return Err(Error::DegenerateInput("no points".into()));
    };
    // Extreme point in x (ties broken lexicographically) seeds the simplex.
    let i0 = (0..points.len())
        .min_by(|&a, &b| points[a].lex_cmp(&points[b]))
        .unwrap();
    let p0 = points[i0];
    let i1 = farthest(points, |p| p.dist(p0));
    let p1 = points[i1];
    let scale = p0.dist(p1);
    if scale == 0.0 || !scale.is_finite() {
        let _ = first;
        return Err(Error::DegenerateInput(
            "fewer than two distinct points".into(),
        ));
    }
    let axis = (p1 - p0) / scale;
    let i2 = farthest(points, |p| {
        let d = p - p0;
        (d - axis * d.dot(axis)).norm()
    });
    let off_line = {
        let d = points[i2] - p0;
        (d - axis * d.dot(axis)).norm()
    };
    if off_line <= FLAT_TOL * scale {
        return Ok(segment_hull(points, p0, axis));
    }
    let normal = (p1 - p0)
        .cross(points[i2] - p0)
        .normalized()
        .expect("non-collinear triple");
    let i3 = farthest(points, |p| (p - p0).dot(normal).abs());
    if (points[i3] - p0).dot(normal).abs() <= FLAT_TOL * scale
        || orient(p0, p1, points[i2], points[i3]) == 0.0
    {
        return Ok(planar_hull(points, p0, normal));
    }
    Ok(solid_hull(points, [i0, i1, i2, i3]))
}

fn farthest(points: &[Point3], f: impl Fn(Point3) -> f64) -> usize {
    let mut best = 0;
    let mut best_v = f64::NEG_INFINITY;
    for (i, &p) in points.iter().enumerate() {
        let v = f(p);
        if v > best_v {
            best_v = v;
            best = i;
        }
    }
    best
}

fn segment_hull(points: &[Point3], p0: Point3, axis: Point3) -> ConvexHull3 {
    let lo = (0..points.len())
        .min_by(|&a, &b| (points[a] - p0).dot(axis).total_cmp(&(points[b] - p0).dot(axis)))
        .unwrap();
    let hi = farthest(points, |p| (p - p0).dot(axis));
    ConvexHull3 {
        kind: HullKind::Segment,
        vertices: vec![points[lo], points[hi]],
        facets: Vec::new(),
        triangles: Vec::new(),
        plane_normal: None,
    }
}

fn planar_hull(points: &[Point3], p0: Point3, normal: Point3) -> ConvexHull3 {
    let n = Direction3::normalize(normal).expect("unit normal");
    let (e1, e2) = n.frame();
    let mut idx: Vec<usize> = (0..points.len()).collect();
    let uv = |i: usize| {
        let d = points[i] - p0;
        (d.dot(e1), d.dot(e2))
    };
    idx.sort_by(|&a, &b| {
        let (ax, ay) = uv(a);
        let (bx, by) = uv(b);
        ax.total_cmp(&bx).then(ay.total_cmp(&by))
    });
    let ring = monotone_chain(&idx, uv);
    ConvexHull3 {
        kind: HullKind::Planar,
        vertices: ring.into_iter().map(|i| points[i]).collect(),
        facets: Vec::new(),
        triangles: Vec::new(),
        plane_normal: Some(n),
    }
}

/// Andrew's monotone chain on indices pre-sorted by (u, v); returns the
/// counterclockwise hull without repeating the first vertex.
pub(crate) fn monotone_chain(sorted: &[usize], uv: impl Fn(usize) -> (f64, f64)) -> Vec<usize> {
    let cross = |o: usize, a: usize, b: usize| {
        let (ox, oy) = uv(o);
        let (ax, ay) = uv(a);
        let (bx, by) = uv(b);
        robust::orient2d(
            robust::Coord { x: ox, y: oy },
            robust::Coord { x: ax, y: ay },
            robust::Coord { x: bx, y: by },
        )
    };
    let mut lower: Vec<usize> = Vec::new();
    for &i in sorted {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], i) <= 0.0 {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &i in sorted.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], i) <= 0.0 {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.is_empty() && !sorted.is_empty() {
        lower.push(sorted[0]);
    }
    lower
}

struct Builder<'a> {
    points: &'a [Point3],
    faces: Vec<Option<[usize; 3]>>,
    /// Directed edge (a → b) to the face that contains it.
    edge_face: HashMap<(usize, usize), usize>,
}

impl<'a> Builder<'a> {
    fn add_face(&mut self, f: [usize; 3]) {
        let id = self.faces.len();
        self.faces.push(Some(f));
        for k in 0..3 {
            self.edge_face.insert((f[k], f[(k + 1) % 3]), id);
        }
    }

    fn remove_face(&mut self, id: usize) {
        if let Some(f) = self.faces[id].take() {
            for k in 0..3 {
                self.edge_face.remove(&(f[k], f[(k + 1) % 3]));
            }
        }
    }

    fn visible(&self, id: usize, p: Point3) -> bool {
        match self.faces[id] {
            Some([a, b, c]) => orient(self.points[a], self.points[b], self.points[c], p) < 0.0,
            None => false,
        }
    }

    fn insert(&mut self, pi: usize) {
        let p = self.points[pi];
        let Some(start) = (0..self.faces.len()).find(|&f| self.visible(f, p)) else {
            return;
        };
        // Visible faces form a connected patch; flood fill from `start`.
        let mut seen = vec![false; self.faces.len()];
        let mut visible = Vec::new();
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(f) = queue.pop_front() {
            visible.push(f);
            let tri = self.faces[f].unwrap();
            for k in 0..3 {
                let (a, b) = (tri[k], tri[(k + 1) % 3]);
                if let Some(&g) = self.edge_face.get(&(b, a)) {
                    if !seen[g] && self.visible(g, p) {
                        seen[g] = true;
                        queue.push_back(g);
                    }
                }
            }
        }
        let mut horizon = Vec::new();
        for &f in &visible {
            let tri = self.faces[f].unwrap();
            for k in 0..3 {
                let (a, b) = (tri[k], tri[(k + 1) % 3]);
                match self.edge_face.get(&(b, a)) {
                    Some(&g) if seen[g] => {}
                    _ => horizon.push((a, b)),
                }
            }
        }
        for &f in &visible {
            self.remove_face(f);
        }
        for (a, b) in horizon {
            self.add_face([a, b, pi]);
        }
    }
}

fn solid_hull(points: &[Point3], seed: [usize; 4]) -> ConvexHull3 {
    let mut b = Builder {
        points,
        faces: Vec::new(),
        edge_face: HashMap::new(),
    };
    let [i0, i1, i2, i3] = seed;
    for (f, opposite) in [
        ([i0, i1, i2], i3),
        ([i0, i3, i1], i2),
        ([i1, i3, i2], i0),
        ([i0, i2, i3], i1),
    ] {
        let [a, c, d] = f;
        // Orient so the opposite vertex lies behind the face.
        if orient(points[a], points[c], points[d], points[opposite]) < 0.0 {
            b.add_face([a, d, c]);
        } else {
            b.add_face(f);
        }
    }
    for i in 0..points.len() {
        if !seed.contains(&i) {
            b.insert(i);
        }
    }
    finish(points, b)
}

fn finish(points: &[Point3], b: Builder<'_>) -> ConvexHull3 {
    let tris: Vec<[usize; 3]> = b.faces.iter().flatten().copied().collect();
    // Reindex to the compact vertex list, keeping input order.
    let mut used: Vec<usize> = tris.iter().flatten().copied().collect();
    used.sort_unstable();
    used.dedup();
    let remap: HashMap<usize, usize> = used.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let vertices: Vec<Point3> = used.iter().map(|&i| points[i]).collect();
    let triangles: Vec<[usize; 3]> = tris
        .iter()
        .map(|t| [remap[&t[0]], remap[&t[1]], remap[&t[2]]])
        .collect();

    let raw_normals: Vec<Point3> = triangles
        .iter()
        .map(|t| (vertices[t[1]] - vertices[t[0]]).cross(vertices[t[2]] - vertices[t[0]]))
        .collect();
    let unit: Vec<Point3> = raw_normals
        .iter()
        .map(|n| n.normalized().unwrap_or(Point3::ORIGIN))
        .collect();

    // Union adjacent triangles whose normals agree.
    let mut parent: Vec<usize> = (0..triangles.len()).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let mut edge_tri: HashMap<(usize, usize), usize> = HashMap::new();
    for (ti, t) in triangles.iter().enumerate() {
        for k in 0..3 {
            edge_tri.insert((t[k], t[(k + 1) % 3]), ti);
        }
    }
    for (ti, t) in triangles.iter().enumerate() {
        for k in 0..3 {
            if let Some(&tj) = edge_tri.get(&(t[(k + 1) % 3], t[k])) {
                if (unit[ti] - unit[tj]).norm() <= FACET_MERGE_TOL {
                    let (ri, rj) = (root(&mut parent, ti), root(&mut parent, tj));
                    if ri != rj {
                        parent[ri] = rj;
                    }
                }
            }
        }
    }
    let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
    for ti in 0..triangles.len() {
        let r = root(&mut parent, ti);
        groups.entry(r).or_default().push(ti);
    }
    let mut keys: Vec<usize> = groups.keys().copied().collect();
    keys.sort_unstable();
    let facets = keys
        .into_iter()
        .filter_map(|k| {
            let members = &groups[&k];
            let sum = members
                .iter()
                .fold(Point3::ORIGIN, |acc, &ti| acc + raw_normals[ti]);
            let normal = Direction3::normalize(sum).ok()?;
            let mut vs: Vec<usize> = members.iter().flat_map(|&ti| triangles[ti]).collect();
            vs.sort_unstable();
            vs.dedup();
            let offset = vs
                .iter()
                .fold(f64::NEG_INFINITY, |m, &i| m.max(normal.dot(vertices[i])));
            Some(Facet {
                normal,
                offset,
                vertices: vs,
            })
        })
        .collect();
    ConvexHull3 {
        kind: HullKind::Solid,
        vertices,
        facets,
        triangles,
        plane_normal: None,
    }
}

/// Distance from `p` to the segment [a, b].
pub fn point_segment_distance(p: Point3, a: Point3, b: Point3) -> f64 {
    let e = b - a;
    let len2 = e.norm_sq();
    if len2 == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(e) / len2).clamp(0.0, 1.0);
    p.dist(a + e * t)
}

/// Distance from `p` to the infinite line through a and b.
pub fn point_line_distance(p: Point3, a: Point3, b: Point3) -> f64 {
    let e = b - a;
    let len2 = e.norm_sq();
    if len2 == 0.0 {
        return p.dist(a);
    }
    let t = (p - a).dot(e) / len2;
    p.dist(a + e * t)
}

/// Exact minimum distance from `p` to the union of the polyline's edges.
pub fn min_distance_to_curve(curve: &PolyCurve, p: Point3) -> f64 {
    curve
        .edges()
        .fold(f64::INFINITY, |m, (a, b)| m.min(point_segment_distance(p, a, b)))
}
