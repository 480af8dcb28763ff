//! Planar primitives: points, exact orientation, segment intersection and
//! convex polygon clipping.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Global coincidence tolerance for angles and lengths (relative to the
/// problem scale where one is available).
pub const EPS: f64 = 1e-9;

/// A point (or vector) in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl From<[f64; 2]> for Point2 {
    fn from([x, y]: [f64; 2]) -> Self {
        Point2 { x, y }
    }
}

impl From<Point2> for [f64; 2] {
    fn from(p: Point2) -> Self {
        [p.x, p.y]
    }
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, o: Point2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, o: Point2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Point2) -> f64 {
        (self - o).norm()
    }

    /// Unit vector in the same direction; zero vectors are returned unchanged.
    pub fn normalized(self) -> Point2 {
        let n = self.norm();
        if n == 0.0 {
            self
        } else {
            Point2::new(self.x / n, self.y / n)
        }
    }

    /// Counterclockwise quarter turn.
    pub fn perp(self) -> Point2 {
        Point2::new(-self.y, self.x)
    }

    pub fn lerp(self, o: Point2, t: f64) -> Point2 {
        self + (o - self) * t
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    CounterClockwise,
    Clockwise,
    Collinear,
}

/// Adaptive-precision orientation of the triple (a, b, c).
pub fn orient(a: Point2, b: Point2, c: Point2) -> Orientation {
    let det = robust::orient2d(
        robust::Coord { x: a.x, y: a.y },
        robust::Coord { x: b.x, y: b.y },
        robust::Coord { x: c.x, y: c.y },
    );
    if det > 0.0 {
        Orientation::CounterClockwise
    } else if det < 0.0 {
        Orientation::Clockwise
    } else {
        Orientation::Collinear
    }
}

fn orient_sign(a: Point2, b: Point2, c: Point2) -> i8 {
    match orient(a, b, c) {
        Orientation::CounterClockwise => 1,
        Orientation::Clockwise => -1,
        Orientation::Collinear => 0,
    }
}

/// How two closed segments meet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SegmentIntersection {
    Disjoint,
    /// Interiors cross at a single point; `t` and `u` are the parameters
    /// along the first and second segment.
    Proper {
        point: Point2,
        t: f64,
        u: f64,
    },
    /// The segments share exactly one point and at least one of them meets
    /// it at an endpoint.
    Touch {
        point: Point2,
    },
    /// Collinear with a shared piece of positive length.
    Overlap,
}

/// Classifies the intersection of segments [p0, p1] and [q0, q1] with exact
/// predicates; the reported coordinates are rounded.
pub fn segment_intersection(p0: Point2, p1: Point2, q0: Point2, q1: Point2) -> SegmentIntersection {
    let o1 = orient_sign(p0, p1, q0);
    let o2 = orient_sign(p0, p1, q1);
    let o3 = orient_sign(q0, q1, p0);
    let o4 = orient_sign(q0, q1, p1);

    if o1 == 0 && o2 == 0 {
        // collinear: compare projections on the dominant axis
        let d = p1 - p0;
        let key = |p: Point2| if d.x.abs() >= d.y.abs() { p.x } else { p.y };
        let (a0, a1) = minmax(key(p0), key(p1));
        let (b0, b1) = minmax(key(q0), key(q1));
        let lo = a0.max(b0);
        let hi = a1.min(b1);
        return if lo < hi {
            SegmentIntersection::Overlap
        } else if lo == hi {
            let pt = [p0, p1, q0, q1].into_iter().find(|p| key(*p) == lo).unwrap_or(p0);
            SegmentIntersection::Touch { point: pt }
        } else {
            SegmentIntersection::Disjoint
        };
    }

    if o1 * o2 > 0 || o3 * o4 > 0 {
        return SegmentIntersection::Disjoint;
    }
    if o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0 {
        let (point, t, u) = line_intersection(p0, p1, q0, q1);
        return SegmentIntersection::Proper { point, t, u };
    }
    // one endpoint lies on the other segment
    let point = if o1 == 0 {
        q0
    } else if o2 == 0 {
        q1
    } else if o3 == 0 {
        p0
    } else {
        p1
    };
    SegmentIntersection::Touch { point }
}

fn minmax(a: f64, b: f64) -> (f64, f64) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Intersection of the supporting lines, with parameters along each segment.
/// Callers guarantee the lines are not parallel.
pub fn line_intersection(p0: Point2, p1: Point2, q0: Point2, q1: Point2) -> (Point2, f64, f64) {
    let r = p1 - p0;
    let s = q1 - q0;
    let denom = r.cross(s);
    let qp = q0 - p0;
    let t = qp.cross(s) / denom;
    let u = qp.cross(r) / denom;
    (p0 + r * t, t, u)
}

/// Half-open crossing test used when counting signed crossings between
/// polylines: a vertex lying exactly on the other segment's line is
/// counted on the negative side, so a polyline passing through a line is
/// counted once.
pub fn half_open_crossing(p0: Point2, p1: Point2, q0: Point2, q1: Point2) -> Option<Point2> {
    let pos = |o: i8| o > 0;
    let o1 = orient_sign(p0, p1, q0);
    let o2 = orient_sign(p0, p1, q1);
    let o3 = orient_sign(q0, q1, p0);
    let o4 = orient_sign(q0, q1, p1);
    if o1 == 0 && o2 == 0 {
        return None;
    }
    if pos(o1) != pos(o2) && pos(o3) != pos(o4) {
        Some(line_intersection(p0, p1, q0, q1).0)
    } else {
        None
    }
}

/// Signed area (positive for counterclockwise vertex order).
pub fn signed_area(poly: &[Point2]) -> f64 {
    let n = poly.len();
    let mut a = 0.0;
    for i in 0..n {
        a += poly[i].cross(poly[(i + 1) % n]);
    }
    a / 2.0
}

pub fn perimeter(poly: &[Point2]) -> f64 {
    let n = poly.len();
    (0..n).map(|i| poly[i].dist(poly[(i + 1) % n])).sum()
}

/// `2·area / perimeter`: the inradius for triangles and half the width of a
/// thin sliver. Used to decide whether an intersection is a genuine overlap
/// or measure-zero touching.
pub fn thickness(poly: &[Point2]) -> f64 {
    if poly.len() < 3 {
        return 0.0;
    }
    let p = perimeter(poly);
    if p == 0.0 {
        return 0.0;
    }
    2.0 * signed_area(poly).abs() / p
}

pub fn centroid(poly: &[Point2]) -> Point2 {
    let a = signed_area(poly);
    if a.abs() < f64::MIN_POSITIVE || poly.len() < 3 {
        let n = poly.len().max(1) as f64;
        let s = poly.iter().fold(Point2::default(), |acc, p| acc + *p);
        return s * (1.0 / n);
    }
    let n = poly.len();
    let mut c = Point2::default();
    for i in 0..n {
        let (p, q) = (poly[i], poly[(i + 1) % n]);
        let f = p.cross(q);
        c = c + (p + q) * f;
    }
    c * (1.0 / (6.0 * a))
}

/// Drops consecutive duplicates (within `tol`) from a closed vertex ring.
pub fn dedup_ring(poly: &[Point2], tol: f64) -> Vec<Point2> {
    let mut out: Vec<Point2> = Vec::with_capacity(poly.len());
    for &p in poly {
        if out.last().map_or(true, |q| q.dist(p) > tol) {
            out.push(p);
        }
    }
    while out.len() > 1 && out[0].dist(*out.last().unwrap()) <= tol {
        out.pop();
    }
    out
}

/// Intersection of two convex counterclockwise polygons (Sutherland–Hodgman).
pub fn clip_convex(subject: &[Point2], clip: &[Point2]) -> Vec<Point2> {
    let mut out = subject.to_vec();
    let n = clip.len();
    for i in 0..n {
        if out.is_empty() {
            break;
        }
        let a = clip[i];
        let b = clip[(i + 1) % n];
        if a == b {
            continue;
        }
        out = clip_halfplane(&out, a, b);
    }
    out
}

/// Keeps the part of `poly` on the left of the directed line a→b.
fn clip_halfplane(poly: &[Point2], a: Point2, b: Point2) -> Vec<Point2> {
    let side = |p: Point2| (b - a).cross(p - a);
    let mut out = Vec::with_capacity(poly.len() + 2);
    let n = poly.len();
    for i in 0..n {
        let p = poly[i];
        let q = poly[(i + 1) % n];
        let sp = side(p);
        let sq = side(q);
        if sp >= 0.0 {
            out.push(p);
        }
        if (sp >= 0.0) != (sq >= 0.0) {
            let t = sp / (sp - sq);
            out.push(p.lerp(q, t));
        }
    }
    out
}

/// Length of the part of segment [p, q] lying at distance more than `margin`
/// inside the convex counterclockwise polygon `poly`.
pub fn segment_depth_inside(p: Point2, q: Point2, poly: &[Point2], margin: f64) -> f64 {
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    let n = poly.len();
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        let e = b - a;
        let len = e.norm();
        if len == 0.0 {
            continue;
        }
        // signed distance to the edge line, positive inside
        let fp = e.cross(p - a) / len - margin;
        let fq = e.cross(q - a) / len - margin;
        if fp < 0.0 && fq < 0.0 {
            return 0.0;
        }
        if fp < 0.0 {
            t0 = t0.max(fp / (fp - fq));
        } else if fq < 0.0 {
            t1 = t1.min(fp / (fp - fq));
        }
        if t0 >= t1 {
            return 0.0;
        }
    }
    (t1 - t0) * p.dist(q)
}

/// Whether `p` lies inside the convex counterclockwise polygon by more than
/// `margin`.
pub fn point_deep_inside(p: Point2, poly: &[Point2], margin: f64) -> bool {
    let n = poly.len();
    if n < 3 {
        return false;
    }
    (0..n).all(|i| {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        let e = b - a;
        let len = e.norm();
        len == 0.0 || e.cross(p - a) / len > margin
    })
}

/// Whether the closed polygon has two non-adjacent edges that meet.
pub fn is_self_intersecting(poly: &[Point2]) -> bool {
    let n = poly.len();
    for i in 0..n {
        for j in i + 1..n {
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            let hit = segment_intersection(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n]);
            if hit != SegmentIntersection::Disjoint {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point2 {
        Point2::new(x, y)
    }

    #[test]
    fn orientation_signs() {
        assert_eq!(orient(p(0., 0.), p(1., 0.), p(0., 1.)), Orientation::CounterClockwise);
        assert_eq!(orient(p(0., 0.), p(1., 0.), p(0., -1.)), Orientation::Clockwise);
        assert_eq!(orient(p(0., 0.), p(1., 1.), p(3., 3.)), Orientation::Collinear);
    }

    #[test]
    fn orientation_is_exact_near_degenerate() {
        // a naive determinant flips sign on this nearly collinear input
        let a = p(0.5, 0.5);
        let b = p(12.0, 12.0);
        let c = p(24.0, 24.0 + 1e-15 * 24.0);
        assert_ne!(orient(a, b, c), Orientation::Collinear);
    }

    #[test]
    fn segments() {
        match segment_intersection(p(0., 0.), p(2., 2.), p(0., 2.), p(2., 0.)) {
            SegmentIntersection::Proper { point, t, u } => {
                assert!((point.x - 1.0).abs() < 1e-15 && (point.y - 1.0).abs() < 1e-15);
                assert!((t - 0.5).abs() < 1e-15 && (u - 0.5).abs() < 1e-15);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(segment_intersection(p(0., 0.), p(1., 0.), p(2., 0.), p(3., 0.)), SegmentIntersection::Disjoint);
        assert_eq!(segment_intersection(p(0., 0.), p(2., 0.), p(1., 0.), p(3., 0.)), SegmentIntersection::Overlap);
        assert_eq!(
            segment_intersection(p(0., 0.), p(2., 0.), p(1., 0.), p(1., 3.)),
            SegmentIntersection::Touch { point: p(1., 0.) }
        );
    }

    #[test]
    fn clip_squares() {
        let a = [p(0., 0.), p(2., 0.), p(2., 2.), p(0., 2.)];
        let b = [p(1., 1.), p(3., 1.), p(3., 3.), p(1., 3.)];
        let c = clip_convex(&a, &b);
        assert!((signed_area(&c) - 1.0).abs() < 1e-12);
        assert!((thickness(&c) - 0.5).abs() < 1e-12);
        let far = [p(5., 5.), p(6., 5.), p(6., 6.)];
        assert!(clip_convex(&a, &far).len() < 3 || thickness(&clip_convex(&a, &far)) == 0.0);
        // shared edge only
        let d = [p(2., 0.), p(4., 0.), p(4., 2.), p(2., 2.)];
        assert!(thickness(&clip_convex(&a, &d)) < 1e-12);
    }

    #[test]
    fn depth_inside() {
        let sq = [p(0., 0.), p(2., 0.), p(2., 2.), p(0., 2.)];
        let l = segment_depth_inside(p(-1., 1.), p(3., 1.), &sq, 0.0);
        assert!((l - 2.0).abs() < 1e-12);
        assert_eq!(segment_depth_inside(p(-1., 0.), p(3., 0.), &sq, 1e-9), 0.0);
    }

    #[test]
    fn self_intersection() {
        let bowtie = [p(0., 0.), p(1., 1.), p(1., 0.), p(0., 1.)];
        assert!(is_self_intersecting(&bowtie));
        let sq = [p(0., 0.), p(1., 0.), p(1., 1.), p(0., 1.)];
        assert!(!is_self_intersecting(&sq));
    }
}
