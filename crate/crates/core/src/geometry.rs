//! Low-level geometric routines: planar rings, closest-point distances
//! between primitives.

use crate::entities::{Box3, LineSegment, Point3, Polygon, SpatialPrimitive};

pub type Vec2 = [f64; 2];

/// Areas at or below this are treated as zero, square metres.
pub const EPS_AREA: f64 = 1e-12;

pub fn mean(points: &[Point3]) -> Point3 {
    if points.is_empty() {
        return Point3::ORIGIN;
    }
    let sum = points.iter().fold(Point3::ORIGIN, |acc, p| acc + *p);
    sum * (1.0 / points.len() as f64)
}

pub fn newell_normal(vertices: &[Point3]) -> Point3 {
    let n = vertices.len();
    let mut normal = Point3::ORIGIN;
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        normal.x += (a.y - b.y) * (a.z + b.z);
        normal.y += (a.z - b.z) * (a.x + b.x);
        normal.z += (a.x - b.x) * (a.y + b.y);
    }
    normal
}

pub fn dominant_axis(n: Point3) -> usize {
    let (ax, ay, az) = (n.x.abs(), n.y.abs(), n.z.abs());
    if az >= ax && az >= ay {
        2
    } else if ax >= ay {
        0
    } else {
        1
    }
}

/// Drops one axis keeping the remaining two in cyclic order, so that the
/// orientation of the projection agrees with the sign of the dropped normal
/// component.
pub fn project_drop_axis(p: Point3, axis: usize) -> Vec2 {
    match axis {
        0 => [p.y, p.z],
        1 => [p.z, p.x],
        _ => [p.x, p.y],
    }
}

pub fn sub2(a: Vec2, b: Vec2) -> Vec2 {
    [a[0] - b[0], a[1] - b[1]]
}

pub fn dot2(a: Vec2, b: Vec2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

pub fn cross2(a: Vec2, b: Vec2) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

pub fn norm2(a: Vec2) -> f64 {
    dot2(a, a).sqrt()
}

pub fn lerp2(a: Vec2, b: Vec2, s: f64) -> Vec2 {
    [a[0] + (b[0] - a[0]) * s, a[1] + (b[1] - a[1]) * s]
}

pub fn signed_area2(ring: &[Vec2]) -> f64 {
    let n = ring.len();
    (0..n).map(|i| cross2(ring[i], ring[(i + 1) % n])).sum::<f64>() / 2.0
}

pub fn point_segment_distance2(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    let ab = sub2(b, a);
    let len2 = dot2(ab, ab);
    let s = if len2 > 0.0 {
        (dot2(sub2(p, a), ab) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    norm2(sub2(p, lerp2(a, b, s)))
}

/// Parameter along `a→b` and `c→d` of a proper crossing, if any.
pub fn segment_crossing2(a: Vec2, b: Vec2, c: Vec2, d: Vec2) -> Option<(f64, f64)> {
    let r = sub2(b, a);
    let s = sub2(d, c);
    let denom = cross2(r, s);
    if denom == 0.0 {
        return None;
    }
    let ac = sub2(c, a);
    let t = cross2(ac, s) / denom;
    let u = cross2(ac, r) / denom;
    ((0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&u)).then_some((t, u))
}

pub fn segment_distance2(a: Vec2, b: Vec2, c: Vec2, d: Vec2) -> f64 {
    if segment_crossing2(a, b, c, d).is_some() {
        return 0.0;
    }
    point_segment_distance2(a, c, d)
        .min(point_segment_distance2(b, c, d))
        .min(point_segment_distance2(c, a, b))
        .min(point_segment_distance2(d, a, b))
}

/// Even-odd containment; boundary points may go either way, callers handle
/// the boundary band with [`ring_boundary_distance`].
pub fn point_in_ring(p: Vec2, ring: &[Vec2]) -> bool {
    let n = ring.len();
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (ring[i], ring[j]);
        if (a[1] > p[1]) != (b[1] > p[1]) {
            let x = a[0] + (p[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
            if p[0] < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

pub fn ring_boundary_distance(p: Vec2, ring: &[Vec2]) -> f64 {
    let n = ring.len();
    (0..n)
        .map(|i| point_segment_distance2(p, ring[i], ring[(i + 1) % n]))
        .fold(f64::INFINITY, f64::min)
}

fn chain_self_intersects(points: &[Vec2], closed: bool, tol: f64) -> bool {
    let n = points.len();
    let edges = if closed { n } else { n.saturating_sub(1) };
    let edge = |i: usize| (points[i], points[(i + 1) % n]);
    for i in 0..edges {
        let (a, b) = edge(i);
        if norm2(sub2(b, a)) <= tol {
            return true;
        }
    }
    for i in 0..edges {
        for j in (i + 1)..edges {
            let (a, b) = edge(i);
            let (c, d) = edge(j);
            let adjacent = j == i + 1 || (closed && i == 0 && j == edges - 1);
            if adjacent {
                // shared vertex: intersecting only when the chain folds back on itself
                let (shared, before, after) = if j == i + 1 { (b, a, d) } else { (a, b, c) };
                let _ = shared;
                if point_segment_distance2(after, before, shared) <= tol
                    || point_segment_distance2(before, shared, after) <= tol
                {
                    return true;
                }
            } else if segment_distance2(a, b, c, d) <= tol {
                return true;
            }
        }
    }
    false
}

pub fn ring_self_intersects(ring: &[Vec2], tol: f64) -> bool {
    chain_self_intersects(ring, true, tol)
}

pub fn polyline_self_intersects_xy(vertices: &[Point3], tol: f64) -> bool {
    let flat: Vec<Vec2> = vertices.iter().map(|v| v.xy()).collect();
    chain_self_intersects(&flat, false, tol)
}

pub fn point_segment_distance(p: Point3, s: &LineSegment) -> f64 {
    let d = s.direction();
    let len2 = d.dot(d);
    let t = if len2 > 0.0 {
        ((p - s.p1).dot(d) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    p.distance(s.p1 + d * t)
}

/// Closest distance between two 3D segments.
pub fn segment_segment_distance(s1: &LineSegment, s2: &LineSegment) -> f64 {
    let d1 = s1.direction();
    let d2 = s2.direction();
    let r = s1.p1 - s2.p1;
    let a = d1.dot(d1);
    let e = d2.dot(d2);
    let f = d2.dot(r);
    let (s, t);
    if a <= f64::EPSILON && e <= f64::EPSILON {
        return s1.p1.distance(s2.p1);
    }
    if a <= f64::EPSILON {
        s = 0.0;
        t = (f / e).clamp(0.0, 1.0);
    } else {
        let c = d1.dot(r);
        if e <= f64::EPSILON {
            t = 0.0;
            s = (-c / a).clamp(0.0, 1.0);
        } else {
            let b = d1.dot(d2);
            let denom = a * e - b * b;
            let mut s0 = if denom > 0.0 {
                ((b * f - c * e) / denom).clamp(0.0, 1.0)
            } else {
                0.0
            };
            let mut t0 = (b * s0 + f) / e;
            if t0 < 0.0 {
                t0 = 0.0;
                s0 = (-c / a).clamp(0.0, 1.0);
            } else if t0 > 1.0 {
                t0 = 1.0;
                s0 = ((b - c) / a).clamp(0.0, 1.0);
            }
            s = s0;
            t = t0;
        }
    }
    let c1 = s1.p1 + d1 * s;
    let c2 = s2.p1 + d2 * t;
    let direct = c1.distance(c2);
    // guard the degenerate parallel case with endpoint checks
    direct
        .min(point_segment_distance(s1.p1, s2))
        .min(point_segment_distance(s1.p2, s2))
        .min(point_segment_distance(s2.p1, s1))
        .min(point_segment_distance(s2.p2, s1))
}

pub fn point_box_distance(p: Point3, b: &Box3) -> f64 {
    let dx = (b.min.x - p.x).max(0.0).max(p.x - b.max.x);
    let dy = (b.min.y - p.y).max(0.0).max(p.y - b.max.y);
    let dz = (b.min.z - p.z).max(0.0).max(p.z - b.max.z);
    (dx * dx + dy * dy + dz * dz).sqrt()
}

pub fn box_box_distance(a: &Box3, b: &Box3) -> f64 {
    let gap = |lo1: f64, hi1: f64, lo2: f64, hi2: f64| (lo2 - hi1).max(lo1 - hi2).max(0.0);
    let dx = gap(a.min.x, a.max.x, b.min.x, b.max.x);
    let dy = gap(a.min.y, a.max.y, b.min.y, b.max.y);
    let dz = gap(a.min.z, a.max.z, b.min.z, b.max.z);
    (dx * dx + dy * dy + dz * dz).sqrt()
}

/// Liang-Barsky clip of the segment against the closed box.
fn segment_hits_box(s: &LineSegment, b: &Box3) -> bool {
    let d = s.direction();
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    for axis in 0..3 {
        let p = s.p1.component(axis);
        let v = d.component(axis);
        let lo = b.min.component(axis);
        let hi = b.max.component(axis);
        if v == 0.0 {
            if p < lo || p > hi {
                return false;
            }
        } else {
            let (mut a, mut c) = ((lo - p) / v, (hi - p) / v);
            if a > c {
                std::mem::swap(&mut a, &mut c);
            }
            t0 = t0.max(a);
            t1 = t1.min(c);
            if t0 > t1 {
                return false;
            }
        }
    }
    true
}

pub fn segment_box_distance(s: &LineSegment, b: &Box3) -> f64 {
    if segment_hits_box(s, b) {
        return 0.0;
    }
    // distance to a convex set is convex along the segment
    let f = |t: f64| point_box_distance(s.p1.lerp(s.p2, t), b);
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut x1 = hi - phi * (hi - lo);
    let mut x2 = lo + phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..90 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = f(x2);
        }
    }
    f1.min(f2).min(f(0.0)).min(f(1.0))
}

struct PlaneFrame {
    unit_normal: Point3,
    origin: Point3,
    axis: usize,
    ring: Vec<Vec2>,
}

fn plane_frame(pg: &Polygon) -> Option<PlaneFrame> {
    let n = pg.newell_normal();
    let unit_normal = n.normalized()?;
    let axis = dominant_axis(n);
    let ring = pg.vertices.iter().map(|v| project_drop_axis(*v, axis)).collect();
    Some(PlaneFrame {
        unit_normal,
        origin: pg.vertex_centroid(),
        axis,
        ring,
    })
}

impl PlaneFrame {
    fn signed_distance(&self, p: Point3) -> f64 {
        (p - self.origin).dot(self.unit_normal)
    }

    /// Whether the orthogonal projection of `p` lies in the closed region.
    fn projects_inside(&self, p: Point3) -> bool {
        let q = p - self.unit_normal * self.signed_distance(p);
        let q2 = project_drop_axis(q, self.axis);
        point_in_ring(q2, &self.ring) || ring_boundary_distance(q2, &self.ring) <= 1e-12
    }
}

pub fn point_polygon_distance(p: Point3, pg: &Polygon) -> f64 {
    let edges = pg
        .edges()
        .map(|e| point_segment_distance(p, &e))
        .fold(f64::INFINITY, f64::min);
    match plane_frame(pg) {
        Some(frame) if frame.projects_inside(p) => frame.signed_distance(p).abs().min(edges),
        _ => edges,
    }
}

pub fn segment_polygon_distance(s: &LineSegment, pg: &Polygon) -> f64 {
    if let Some(frame) = plane_frame(pg) {
        let da = frame.signed_distance(s.p1);
        let db = frame.signed_distance(s.p2);
        if da * db <= 0.0 && da != db {
            let x = s.p1.lerp(s.p2, da / (da - db));
            if frame.projects_inside(x) {
                return 0.0;
            }
        }
    }
    let edges = pg
        .edges()
        .map(|e| segment_segment_distance(s, &e))
        .fold(f64::INFINITY, f64::min);
    edges
        .min(point_polygon_distance(s.p1, pg))
        .min(point_polygon_distance(s.p2, pg))
}

pub fn box_polygon_distance(b: &Box3, pg: &Polygon) -> f64 {
    let from_box_edges = b
        .edges()
        .iter()
        .map(|e| segment_polygon_distance(e, pg))
        .fold(f64::INFINITY, f64::min);
    let from_polygon_edges = pg
        .edges()
        .map(|e| segment_box_distance(&e, b))
        .fold(f64::INFINITY, f64::min);
    from_box_edges.min(from_polygon_edges)
}

pub fn polygon_polygon_distance(a: &Polygon, b: &Polygon) -> f64 {
    let ab = a
        .edges()
        .map(|e| segment_polygon_distance(&e, b))
        .fold(f64::INFINITY, f64::min);
    let ba = b
        .edges()
        .map(|e| segment_polygon_distance(&e, a))
        .fold(f64::INFINITY, f64::min);
    ab.min(ba)
}

enum Shape<'a> {
    Point(Point3),
    Segments(Vec<LineSegment>),
    Box(Box3),
    Polygon(&'a Polygon),
}

fn shape(p: &SpatialPrimitive) -> Shape<'_> {
    match p {
        SpatialPrimitive::Point(q) => Shape::Point(*q),
        SpatialPrimitive::OrientedPoint(op) => Shape::Point(op.p),
        SpatialPrimitive::Segment(s) => Shape::Segments(vec![*s]),
        SpatialPrimitive::Polyline(pl) => Shape::Segments(pl.segments().collect()),
        SpatialPrimitive::Polygon(pg) => Shape::Polygon(pg),
        SpatialPrimitive::Box(b) => Shape::Box(*b),
    }
}

fn min_over<T>(items: &[T], f: impl Fn(&T) -> f64) -> f64 {
    items.iter().map(f).fold(f64::INFINITY, f64::min)
}

/// Minimum Euclidean distance between the extents of two primitives; zero
/// when they touch or overlap.
pub fn primitive_distance(a: &SpatialPrimitive, b: &SpatialPrimitive) -> f64 {
    use Shape::*;
    match (shape(a), shape(b)) {
        (Point(p), Point(q)) => p.distance(q),
        (Point(p), Segments(s)) | (Segments(s), Point(p)) => min_over(&s, |e| point_segment_distance(p, e)),
        (Point(p), Box(bx)) | (Box(bx), Point(p)) => point_box_distance(p, &bx),
        (Point(p), Polygon(pg)) | (Polygon(pg), Point(p)) => point_polygon_distance(p, pg),
        (Segments(s1), Segments(s2)) => min_over(&s1, |e| min_over(&s2, |f| segment_segment_distance(e, f))),
        (Segments(s), Box(bx)) | (Box(bx), Segments(s)) => min_over(&s, |e| segment_box_distance(e, &bx)),
        (Segments(s), Polygon(pg)) | (Polygon(pg), Segments(s)) => min_over(&s, |e| segment_polygon_distance(e, pg)),
        (Box(b1), Box(b2)) => box_box_distance(&b1, &b2),
        (Box(bx), Polygon(pg)) | (Polygon(pg), Box(bx)) => box_polygon_distance(&bx, pg),
        (Polygon(p1), Polygon(p2)) => polygon_polygon_distance(p1, p2),
    }
}

/// Smallest signed turn from heading `a` to heading `b`, in (-π, π].
pub fn wrap_angle(a: f64) -> f64 {
    let two_pi = std::f64::consts::TAU;
    let mut x = a.rem_euclid(two_pi);
    if x > std::f64::consts::PI {
        x -= two_pi;
    }
    x
}
