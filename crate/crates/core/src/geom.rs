//! Small fixed-size linear algebra for R³.
//!
//! `Point3` doubles as a vector type. Directions are unit vectors wrapped in
//! `Direction3` so the unit-norm invariant is checked once, at construction.

use std::ops::{Add, AddAssign, Div, Index, Mul, Neg, Sub, SubAssign};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on the norm of a `Direction3`.
pub const UNIT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const ORIGIN: Point3 = Point3 {
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    #[inline]
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Point3 { x, y, z }
    }

    #[inline]
    pub fn dot(self, o: Point3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    #[inline]
    pub fn cross(self, o: Point3) -> Point3 {
        Point3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    #[inline]
    pub fn dist(self, o: Point3) -> f64 {
        (self - o).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Unit vector in the same direction, or `None` for (near) zero vectors.
    pub fn normalized(self) -> Option<Point3> {
        let n = self.norm();
        if n > 0.0 && n.is_finite() {
            Some(self / n)
        } else {
            None
        }
    }

    pub fn lerp(self, o: Point3, t: f64) -> Point3 {
        self + (o - self) * t
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    /// Lexicographic comparison on (x, y, z).
    pub fn lex_cmp(&self, o: &Point3) -> std::cmp::Ordering {
        self.x
            .total_cmp(&o.x)
            .then(self.y.total_cmp(&o.y))
            .then(self.z.total_cmp(&o.z))
    }
}

impl From<[f64; 3]> for Point3 {
    fn from(a: [f64; 3]) -> Self {
        Point3::new(a[0], a[1], a[2])
    }
}

impl From<Point3> for [f64; 3] {
    fn from(p: Point3) -> Self {
        p.to_array()
    }
}

impl Index<usize> for Point3 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        match i {
            0 => &self.x,
            1 => &self.y,
            2 => &self.z,
            _ => panic!("Point3 index {i} out of range"),
        }
    }
}

impl Add for Point3 {
    type Output = Point3;
    #[inline]
    fn add(self, o: Point3) -> Point3 {
        Point3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Point3 {
    fn add_assign(&mut self, o: Point3) {
        *self = *self + o;
    }
}

impl Sub for Point3 {
    type Output = Point3;
    #[inline]
    fn sub(self, o: Point3) -> Point3 {
        Point3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl SubAssign for Point3 {
    fn sub_assign(&mut self, o: Point3) {
        *self = *self - o;
    }
}

impl Mul<f64> for Point3 {
    type Output = Point3;
    #[inline]
    fn mul(self, s: f64) -> Point3 {
        Point3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Point3> for f64 {
    type Output = Point3;
    #[inline]
    fn mul(self, p: Point3) -> Point3 {
        p * self
    }
}

impl Div<f64> for Point3 {
    type Output = Point3;
    #[inline]
    fn div(self, s: f64) -> Point3 {
        Point3::new(self.x / s, self.y / s, self.z / s)
    }
}

impl Neg for Point3 {
    type Output = Point3;
    #[inline]
    fn neg(self) -> Point3 {
        Point3::new(-self.x, -self.y, -self.z)
    }
}

/// A unit vector in R³.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct Direction3(Point3);

impl Direction3 {
    pub const X: Direction3 = Direction3(Point3::new(1.0, 0.0, 0.0));
    pub const Y: Direction3 = Direction3(Point3::new(0.0, 1.0, 0.0));
    pub const Z: Direction3 = Direction3(Point3::new(0.0, 0.0, 1.0));

    /// Checked constructor: the vector must already be unit within `UNIT_TOL`.
    pub fn new(v: Point3) -> Result<Self> {
        if v.is_finite() && (v.norm() - 1.0).abs() <= UNIT_TOL {
            Ok(Direction3(v))
        } else {
            Err(Error::InvalidArgument(format!(
                "direction {v:?} is not a unit vector"
            )))
        }
    }

    /// Normalizing constructor.
    pub fn normalize(v: Point3) -> Result<Self> {
        v.normalized()
            .map(Direction3)
            .ok_or_else(|| Error::InvalidArgument(format!("cannot normalize {v:?}")))
    }

    /// Unit vector from spherical angles (polar angle from +z, azimuth from +x).
    pub fn from_spherical(polar: f64, azimuth: f64) -> Self {
        let (sp, cp) = polar.sin_cos();
        let (sa, ca) = azimuth.sin_cos();
        Direction3(Point3::new(sp * ca, sp * sa, cp))
    }

    /// Uniformly distributed random direction.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let z: f64 = rng.gen_range(-1.0..=1.0);
        let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let r = (1.0 - z * z).max(0.0).sqrt();
        Direction3(Point3::new(r * phi.cos(), r * phi.sin(), z))
    }

    #[inline]
    pub fn vec(self) -> Point3 {
        self.0
    }

    #[inline]
    pub fn dot(self, p: Point3) -> f64 {
        self.0.dot(p)
    }

    /// Two unit vectors completing `self` to a right-handed orthonormal frame.
    ///
    /// The choice is canonical: for the z-axis it returns (x, y).
    pub fn frame(self) -> (Point3, Point3) {
        let a = self.0;
        let reference = if a.x.abs() < 0.9 {
            Point3::new(1.0, 0.0, 0.0)
        } else {
            Point3::new(0.0, 1.0, 0.0)
        };
        let e1 = (reference - a * reference.dot(a))
            .normalized()
            .expect("reference vector is never parallel to the axis");
        let e2 = a.cross(e1);
        (e1, e2)
    }
}

impl Neg for Direction3 {
    type Output = Direction3;
    fn neg(self) -> Direction3 {
        Direction3(-self.0)
    }
}

impl TryFrom<[f64; 3]> for Direction3 {
    type Error = Error;
    fn try_from(a: [f64; 3]) -> Result<Self> {
        Direction3::new(a.into())
    }
}

impl From<Direction3> for [f64; 3] {
    fn from(d: Direction3) -> Self {
        d.0.to_array()
    }
}

/// Row-major 3×3 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat3 {
    pub rows: [Point3; 3],
}

impl Mat3 {
    pub const IDENTITY: Mat3 = Mat3 {
        rows: [
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(0.0, 1.0, 0.0),
            Point3::new(0.0, 0.0, 1.0),
        ],
    };

    pub fn from_rows(r0: Point3, r1: Point3, r2: Point3) -> Self {
        Mat3 { rows: [r0, r1, r2] }
    }

    pub fn from_cols(c0: Point3, c1: Point3, c2: Point3) -> Self {
        Mat3::from_rows(c0, c1, c2).transpose()
    }

    pub fn transpose(&self) -> Mat3 {
        let [a, b, c] = self.rows;
        Mat3::from_rows(
            Point3::new(a.x, b.x, c.x),
            Point3::new(a.y, b.y, c.y),
            Point3::new(a.z, b.z, c.z),
        )
    }

    pub fn apply(&self, p: Point3) -> Point3 {
        Point3::new(self.rows[0].dot(p), self.rows[1].dot(p), self.rows[2].dot(p))
    }

    pub fn mul(&self, o: &Mat3) -> Mat3 {
        let ot = o.transpose();
        let row = |r: Point3| Point3::new(r.dot(ot.rows[0]), r.dot(ot.rows[1]), r.dot(ot.rows[2]));
        Mat3::from_rows(row(self.rows[0]), row(self.rows[1]), row(self.rows[2]))
    }

    pub fn det(&self) -> f64 {
        self.rows[0].dot(self.rows[1].cross(self.rows[2]))
    }

    pub fn inverse(&self) -> Option<Mat3> {
        let det = self.det();
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let [a, b, c] = self.rows;
        // Columns of the inverse are the cross products of rows, scaled.
        Some(Mat3::from_cols(b.cross(c) / det, c.cross(a) / det, a.cross(b) / det))
    }

    /// Rotation by `angle` about the unit `axis` (Rodrigues).
    pub fn rotation(axis: Direction3, angle: f64) -> Mat3 {
        let a = axis.vec();
        let (s, c) = angle.sin_cos();
        let t = 1.0 - c;
        Mat3::from_rows(
            Point3::new(t * a.x * a.x + c, t * a.x * a.y - s * a.z, t * a.x * a.z + s * a.y),
            Point3::new(t * a.x * a.y + s * a.z, t * a.y * a.y + c, t * a.y * a.z - s * a.x),
            Point3::new(t * a.x * a.z - s * a.y, t * a.y * a.z + s * a.x, t * a.z * a.z + c),
        )
    }

    /// Uniformly random rotation (Haar measure) via a random unit quaternion.
    pub fn random_rotation<R: Rng + ?Sized>(rng: &mut R) -> Mat3 {
        let (u1, u2, u3): (f64, f64, f64) = (rng.gen(), rng.gen(), rng.gen());
        let tau = std::f64::consts::TAU;
        let (a, b) = ((1.0 - u1).sqrt(), u1.sqrt());
        let (w, x, y, z) = (
            a * (tau * u2).sin(),
            a * (tau * u2).cos(),
            b * (tau * u3).sin(),
            b * (tau * u3).cos(),
        );
        Mat3::from_rows(
            Point3::new(1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - z * w), 2.0 * (x * z + y * w)),
            Point3::new(2.0 * (x * y + z * w), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - x * w)),
            Point3::new(2.0 * (x * z - y * w), 2.0 * (y * z + x * w), 1.0 - 2.0 * (x * x + y * y)),
        )
    }

    pub fn is_orthogonal(&self, tol: f64) -> bool {
        let p = self.mul(&self.transpose());
        (0..3).all(|i| {
            (0..3).all(|j| {
                let expect = if i == j { 1.0 } else { 0.0 };
                (p.rows[i][j] - expect).abs() <= tol
            })
        })
    }
}

/// Rigid motion (possibly orientation reversing): x ↦ linear·x + translation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Isometry {
    pub linear: Mat3,
    pub translation: Point3,
}

impl Isometry {
    pub const IDENTITY: Isometry = Isometry {
        linear: Mat3::IDENTITY,
        translation: Point3::ORIGIN,
    };

    pub fn new(linear: Mat3, translation: Point3) -> Self {
        Isometry {
            linear,
            translation,
        }
    }

    pub fn translation(t: Point3) -> Self {
        Isometry::new(Mat3::IDENTITY, t)
    }

    pub fn apply(&self, p: Point3) -> Point3 {
        self.linear.apply(p) + self.translation
    }

    pub fn apply_vector(&self, v: Point3) -> Point3 {
        self.linear.apply(v)
    }
}

/// `n` nearly uniform directions on the unit sphere (Fibonacci lattice).
pub fn fibonacci_sphere(n: usize) -> Vec<Direction3> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * i as f64;
            Direction3(Point3::new(r * phi.cos(), r * phi.sin(), z))
        })
        .collect()
}

/// `n` directions covering the upper hemisphere (z ≥ 0), for antipodally
/// symmetric objectives.
pub fn fibonacci_hemisphere(n: usize) -> Vec<Direction3> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (i as f64 + 0.5) / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * i as f64;
            Direction3(Point3::new(r * phi.cos(), r * phi.sin(), z))
        })
        .collect()
}
