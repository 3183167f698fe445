//! Planar convex polygons: half-plane clipping, Minkowski sums, areas and
//! the regular constraint polygons `R_l(x0)`.
//!
//! Polygons are stored as counterclockwise vertex cycles. Empty polygons,
//! single points and segments are ordinary values: several of the regions
//! this crate computes collapse to them (the coexistence region of an
//! extremal effect, slices of one-dimensional lower sets).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{Vec2, PREDICATE_TOL};
use crate::error::{Error, Result};

/// The closed half-plane `{x : normal · x <= offset}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfPlane2D {
    normal: Vec2,
    offset: f64,
}

impl HalfPlane2D {
    pub fn new(normal: Vec2, offset: f64) -> Result<Self> {
        if !offset.is_finite() {
            return Err(Error::NonFinite("HalfPlane2D offset"));
        }
        if normal.norm() == 0.0 {
            return Err(Error::ZeroNormal);
        }
        Ok(HalfPlane2D { normal, offset })
    }

    pub fn normal(&self) -> Vec2 {
        self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// Signed Euclidean distance of `p` past the boundary line; positive outside.
    pub fn signed_distance(&self, p: Vec2) -> f64 {
        (self.normal.dot(p) - self.offset) / self.normal.norm()
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ConvexPolygon2D {
    vertices: Vec<Vec2>,
}

impl ConvexPolygon2D {
    pub fn empty() -> Self {
        ConvexPolygon2D { vertices: vec![] }
    }

    pub fn point(p: Vec2) -> Self {
        ConvexPolygon2D { vertices: vec![p] }
    }

    /// Builds a polygon from a counterclockwise vertex cycle, rejecting
    /// reflex or clockwise turns beyond the predicate tolerance.
    pub fn new(vertices: Vec<Vec2>) -> Result<Self> {
        if vertices
            .iter()
            .any(|v| !(v.x.is_finite() && v.y.is_finite()))
        {
            return Err(Error::NonFinite("polygon vertex"));
        }
        let poly = ConvexPolygon2D::cleaned(vertices);
        let n = poly.vertices.len();
        if n >= 3 {
            for i in 0..n {
                let a = poly.vertices[i];
                let b = poly.vertices[(i + 1) % n];
                let c = poly.vertices[(i + 2) % n];
                let turn = (b - a).cross(c - b);
                if turn < -PREDICATE_TOL * (b - a).norm().max((c - b).norm()).max(1.0) {
                    return Err(Error::InvalidParameter(
                        "polygon vertices are not convex and counterclockwise".into(),
                    ));
                }
            }
        }
        Ok(poly)
    }

    /// Convex hull of an arbitrary point cloud (Andrew's monotone chain).
    pub fn hull(points: &[Vec2]) -> Self {
        let mut pts: Vec<Vec2> = points.to_vec();
        pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
        pts.dedup_by(|a, b| a.distance(*b) <= PREDICATE_TOL);
        if pts.len() <= 2 {
            return ConvexPolygon2D::cleaned(pts);
        }
        let mut lower: Vec<Vec2> = Vec::new();
        for &p in &pts {
            while lower.len() >= 2 {
                let k = lower.len();
                if (lower[k - 1] - lower[k - 2]).cross(p - lower[k - 2]) <= 0.0 {
                    lower.pop();
                } else {
                    break;
                }
            }
            lower.push(p);
        }
        let mut upper: Vec<Vec2> = Vec::new();
        for &p in pts.iter().rev() {
            while upper.len() >= 2 {
                let k = upper.len();
                if (upper[k - 1] - upper[k - 2]).cross(p - upper[k - 2]) <= 0.0 {
                    upper.pop();
                } else {
                    break;
                }
            }
            upper.push(p);
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        ConvexPolygon2D::cleaned(lower)
    }

    /// Drops repeated vertices and vertices lying on the segment between
    /// their neighbours, so that degenerate results shrink to a segment or a
    /// point instead of keeping slivers.
    fn cleaned(mut v: Vec<Vec2>) -> Self {
        loop {
            let before = v.len();
            if v.len() >= 2 {
                let mut out: Vec<Vec2> = Vec::with_capacity(v.len());
                for p in v.iter().copied() {
                    if out
                        .last()
                        .is_none_or(|q: &Vec2| q.distance(p) > PREDICATE_TOL)
                    {
                        out.push(p);
                    }
                }
                while out.len() >= 2 && out[0].distance(*out.last().unwrap()) <= PREDICATE_TOL {
                    out.pop();
                }
                v = out;
            }
            if v.len() >= 3 {
                let n = v.len();
                let mut drop = None;
                for i in 0..n {
                    let a = v[(i + n - 1) % n];
                    let b = v[i];
                    let c = v[(i + 1) % n];
                    let ac = c - a;
                    let len = ac.norm();
                    if len <= PREDICATE_TOL {
                        continue;
                    }
                    let off_line = (b - a).cross(ac).abs() / len;
                    let along = (b - a).dot(ac) / (len * len);
                    if off_line <= PREDICATE_TOL && (0.0..=1.0).contains(&along) {
                        drop = Some(i);
                        break;
                    }
                }
                if let Some(i) = drop {
                    v.remove(i);
                }
            }
            if v.len() == before {
                return ConvexPolygon2D { vertices: v };
            }
        }
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// True for empty polygons, points and segments.
    pub fn is_degenerate(&self) -> bool {
        self.vertices.len() < 3
    }

    pub fn translate(&self, t: Vec2) -> Self {
        ConvexPolygon2D {
            vertices: self.vertices.iter().map(|&v| v + t).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        assert!(s >= 0.0, "negative scale would reverse orientation");
        ConvexPolygon2D::cleaned(self.vertices.iter().map(|&v| v * s).collect())
    }

    /// Point reflection through the origin.
    pub fn negate(&self) -> Self {
        ConvexPolygon2D {
            vertices: self.vertices.iter().map(|&v| -v).collect(),
        }
    }

    /// Support function `h(u) = max_{v in P} u · v`; `-inf` for the empty polygon.
    pub fn support(&self, u: Vec2) -> f64 {
        self.vertices
            .iter()
            .map(|v| v.dot(u))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Shoelace area; zero for degenerate polygons.
    pub fn area(&self) -> f64 {
        polygon_area(self)
    }

    pub fn contains(&self, p: Vec2, tol: f64) -> bool {
        contains_point(self, p, tol)
    }

    pub fn clip(&self, hp: &HalfPlane2D) -> Self {
        clip_halfplane(self, hp)
    }

    /// Index of the lowest vertex, leftmost among ties.
    fn bottom_index(&self) -> usize {
        let mut best = 0;
        for (i, v) in self.vertices.iter().enumerate() {
            let b = self.vertices[best];
            if v.y < b.y || (v.y == b.y && v.x < b.x) {
                best = i;
            }
        }
        best
    }
}

/// Sutherland–Hodgman clipping of a convex polygon against one half-plane.
pub fn clip_halfplane(poly: &ConvexPolygon2D, hp: &HalfPlane2D) -> ConvexPolygon2D {
    let v = &poly.vertices;
    let n = v.len();
    if n == 0 {
        return ConvexPolygon2D::empty();
    }
    let dist: Vec<f64> = v.iter().map(|&p| hp.signed_distance(p)).collect();
    if dist.iter().all(|&d| d <= PREDICATE_TOL) {
        return poly.clone();
    }
    if n == 1 {
        return ConvexPolygon2D::empty();
    }
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let j = (i + 1) % n;
        let (dc, dn) = (dist[i], dist[j]);
        if dc <= PREDICATE_TOL {
            out.push(v[i]);
        }
        let crosses = (dc < -PREDICATE_TOL && dn > PREDICATE_TOL)
            || (dc > PREDICATE_TOL && dn < -PREDICATE_TOL);
        if crosses {
            let t = dc / (dc - dn);
            out.push(v[i] + (v[j] - v[i]) * t);
        }
    }
    ConvexPolygon2D::cleaned(out)
}

/// Intersects `bound` with every half-plane in `hps`.
pub fn intersect_halfplanes(hps: &[HalfPlane2D], bound: &ConvexPolygon2D) -> ConvexPolygon2D {
    let mut poly = bound.clone();
    for hp in hps {
        if poly.is_empty() {
            break;
        }
        poly = clip_halfplane(&poly, hp);
    }
    poly
}

/// Minkowski sum by merging the edge sequences of both polygons in angular
/// order, starting from their bottom vertices.
pub fn minkowski_sum(p: &ConvexPolygon2D, q: &ConvexPolygon2D) -> ConvexPolygon2D {
    if p.is_empty() || q.is_empty() {
        return ConvexPolygon2D::empty();
    }
    if p.len() == 1 {
        return q.translate(p.vertices[0]);
    }
    if q.len() == 1 {
        return p.translate(q.vertices[0]);
    }
    let (ip, iq) = (p.bottom_index(), q.bottom_index());
    let pv: Vec<Vec2> = (0..p.len())
        .map(|k| p.vertices[(ip + k) % p.len()])
        .collect();
    let qv: Vec<Vec2> = (0..q.len())
        .map(|k| q.vertices[(iq + k) % q.len()])
        .collect();
    let (n, m) = (pv.len(), qv.len());
    let edge_p = |i: usize| pv[(i + 1) % n] - pv[i % n];
    let edge_q = |j: usize| qv[(j + 1) % m] - qv[j % m];

    let mut out = Vec::with_capacity(n + m);
    let (mut i, mut j) = (0, 0);
    while i < n || j < m {
        out.push(pv[i % n] + qv[j % m]);
        if i == n {
            j += 1;
        } else if j == m {
            i += 1;
        } else {
            // Both edge sequences start at the bottom vertex, so their
            // directions increase monotonically through [0, 2π).
            let (ap, aq) = (angle_from_east(edge_p(i)), angle_from_east(edge_q(j)));
            if (ap - aq).abs() <= 1e-12 {
                i += 1;
                j += 1;
            } else if ap < aq {
                i += 1;
            } else {
                j += 1;
            }
        }
    }
    ConvexPolygon2D::cleaned(out)
}

fn angle_from_east(v: Vec2) -> f64 {
    let a = v.y.atan2(v.x);
    if a < 0.0 {
        a + 2.0 * PI
    } else {
        a
    }
}

pub fn polygon_area(poly: &ConvexPolygon2D) -> f64 {
    let v = &poly.vertices;
    if v.len() < 3 {
        return 0.0;
    }
    let n = v.len();
    let twice: f64 = (0..n).map(|i| v[i].cross(v[(i + 1) % n])).sum();
    (0.5 * twice).abs()
}

/// Closed membership: true when `pt` is within distance `tol` of `poly`.
pub fn contains_point(poly: &ConvexPolygon2D, pt: Vec2, tol: f64) -> bool {
    let v = &poly.vertices;
    match v.len() {
        0 => false,
        1 => v[0].distance(pt) <= tol,
        2 => segment_distance(v[0], v[1], pt) <= tol,
        n => (0..n).all(|i| {
            let a = v[i];
            let b = v[(i + 1) % n];
            let len = (b - a).norm();
            (b - a).cross(pt - a) >= -tol * len
        }),
    }
}

fn segment_distance(a: Vec2, b: Vec2, p: Vec2) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 == 0.0 {
        return a.distance(p);
    }
    let t = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    (a + ab * t).distance(p)
}

/// Outward unit normal of the k-th side of `R_l`: angle `2kπ/n`.
pub fn side_normal(n: usize, k: usize) -> Vec2 {
    Vec2::from_angle(2.0 * PI * k as f64 / n as f64)
}

/// The half-planes `e_{2kπ/n} · (x - x0) <= l`, `k = 0..n`.
pub fn regular_constraint_halfplanes(n: usize, l: f64, x0: Vec2) -> Result<Vec<HalfPlane2D>> {
    check_regular_args(n, l)?;
    (0..n)
        .map(|k| {
            let s = side_normal(n, k);
            HalfPlane2D::new(s, l + s.dot(x0))
        })
        .collect()
}

/// `R_l(x0)`: the regular n-gon with apothem `l` centred at `x0` whose side
/// normals point at angles `2kπ/n`. Vertices sit at angles `(2k+1)π/n` and
/// radius `l / cos(π/n)`.
pub fn regular_constraint_polygon(n: usize, l: f64, x0: Vec2) -> Result<ConvexPolygon2D> {
    check_regular_args(n, l)?;
    if l == 0.0 {
        return Ok(ConvexPolygon2D::point(x0));
    }
    let radius = l / (PI / n as f64).cos();
    let vertices = (0..n)
        .map(|k| x0 + Vec2::from_angle((2 * k + 1) as f64 * PI / n as f64) * radius)
        .collect();
    Ok(ConvexPolygon2D { vertices })
}

fn check_regular_args(n: usize, l: f64) -> Result<()> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "polygon needs n >= 3, got {n}"
        )));
    }
    if !(l >= 0.0 && l.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "apothem must be >= 0, got {l}"
        )));
    }
    Ok(())
}
