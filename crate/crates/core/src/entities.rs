//! Basic spatial and temporal entities, domain objects and space-time
//! histories.
//!
//! Geometry is in meters and time in seconds. Regions used for body parts are
//! housed as [`Polygon`] or [`Box3`]; there is no separate region primitive.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry;

/// Absolute tolerance for geometric predicates, in meters.
pub const GEOM_TOLERANCE: f64 = 1e-7;

const UNIT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
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

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn dot(self, o: Point3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Point3) -> Point3 {
        Point3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn distance(self, o: Point3) -> f64 {
        (self - o).norm()
    }

    pub fn normalized(self) -> Option<Point3> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| self * (1.0 / n))
    }

    pub fn lerp(self, o: Point3, s: f64) -> Point3 {
        self + (o - self) * s
    }

    /// Ground-plane (x, y) projection.
    pub fn xy(self) -> [f64; 2] {
        [self.x, self.y]
    }

    pub fn component(self, axis: usize) -> f64 {
        match axis {
            0 => self.x,
            1 => self.y,
            _ => self.z,
        }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }
}

impl Add for Point3 {
    type Output = Point3;
    fn add(self, o: Point3) -> Point3 {
        Point3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Point3 {
    type Output = Point3;
    fn sub(self, o: Point3) -> Point3 {
        Point3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Point3 {
    type Output = Point3;
    fn mul(self, s: f64) -> Point3 {
        Point3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Neg for Point3 {
    type Output = Point3;
    fn neg(self) -> Point3 {
        Point3::new(-self.x, -self.y, -self.z)
    }
}

impl fmt::Display for Point3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrientedPoint {
    pub p: Point3,
    pub v: Point3,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineSegment {
    pub p1: Point3,
    pub p2: Point3,
}

impl LineSegment {
    pub fn new(p1: Point3, p2: Point3) -> Self {
        Self { p1, p2 }
    }

    pub fn length(&self) -> f64 {
        self.p1.distance(self.p2)
    }

    pub fn direction(&self) -> Point3 {
        self.p2 - self.p1
    }

    pub fn midpoint(&self) -> Point3 {
        self.p1.lerp(self.p2, 0.5)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyLine {
    pub vertices: Vec<Point3>,
}

impl PolyLine {
    pub fn segments(&self) -> impl Iterator<Item = LineSegment> + '_ {
        self.vertices
            .windows(2)
            .map(|w| LineSegment::new(w[0], w[1]))
    }

    pub fn length(&self) -> f64 {
        self.segments().map(|s| s.length()).sum()
    }
}

/// Planar polygon. Vertices are counter-clockwise when seen from the positive
/// side of the dominant axis of the polygon normal (for ground-plane polygons,
/// counter-clockwise from above).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polygon {
    pub vertices: Vec<Point3>,
}

impl Polygon {
    pub fn new(vertices: Vec<Point3>) -> Self {
        Self { vertices }
    }

    pub fn edges(&self) -> impl Iterator<Item = LineSegment> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| LineSegment::new(self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Newell normal; its length is twice the polygon area.
    pub fn newell_normal(&self) -> Point3 {
        geometry::newell_normal(&self.vertices)
    }

    pub fn area(&self) -> f64 {
        self.newell_normal().norm() / 2.0
    }

    /// Signed area in the projection that drops the dominant normal axis.
    /// Positive for the counter-clockwise orientation.
    pub fn signed_area(&self) -> f64 {
        let n = self.newell_normal();
        let axis = geometry::dominant_axis(n);
        n.component(axis) / 2.0
    }

    pub fn reversed(&self) -> Polygon {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        Polygon { vertices }
    }

    pub fn vertex_centroid(&self) -> Point3 {
        geometry::mean(&self.vertices)
    }
}

/// Axis-aligned cuboid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Box3 {
    pub min: Point3,
    pub max: Point3,
}

impl Box3 {
    pub fn new(min: Point3, max: Point3) -> Self {
        Self { min, max }
    }

    pub fn center(&self) -> Point3 {
        self.min.lerp(self.max, 0.5)
    }

    pub fn extent(&self) -> Point3 {
        self.max - self.min
    }

    pub fn volume(&self) -> f64 {
        let e = self.extent();
        e.x * e.y * e.z
    }

    pub fn translated(&self, d: Point3) -> Box3 {
        Box3::new(self.min + d, self.max + d)
    }

    pub fn corners(&self) -> [Point3; 8] {
        let (a, b) = (self.min, self.max);
        [
            Point3::new(a.x, a.y, a.z),
            Point3::new(b.x, a.y, a.z),
            Point3::new(b.x, b.y, a.z),
            Point3::new(a.x, b.y, a.z),
            Point3::new(a.x, a.y, b.z),
            Point3::new(b.x, a.y, b.z),
            Point3::new(b.x, b.y, b.z),
            Point3::new(a.x, b.y, b.z),
        ]
    }

    pub fn edges(&self) -> [LineSegment; 12] {
        let c = self.corners();
        let e = |i: usize, j: usize| LineSegment::new(c[i], c[j]);
        [
            e(0, 1),
            e(1, 2),
            e(2, 3),
            e(3, 0),
            e(4, 5),
            e(5, 6),
            e(6, 7),
            e(7, 4),
            e(0, 4),
            e(1, 5),
            e(2, 6),
            e(3, 7),
        ]
    }

    /// Counter-clockwise ground-plane footprint at the box's lower z.
    pub fn footprint(&self) -> Polygon {
        let (a, b) = (self.min, self.max);
        Polygon::new(vec![
            Point3::new(a.x, a.y, a.z),
            Point3::new(b.x, a.y, a.z),
            Point3::new(b.x, b.y, a.z),
            Point3::new(a.x, b.y, a.z),
        ])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrimitiveKind {
    Point,
    OrientedPoint,
    Segment,
    Polyline,
    Polygon,
    Box,
}

impl fmt::Display for PrimitiveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PrimitiveKind::Point => "point",
            PrimitiveKind::OrientedPoint => "oriented_point",
            PrimitiveKind::Segment => "segment",
            PrimitiveKind::Polyline => "polyline",
            PrimitiveKind::Polygon => "polygon",
            PrimitiveKind::Box => "box",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpatialPrimitive {
    Point(Point3),
    OrientedPoint(OrientedPoint),
    Segment(LineSegment),
    Polyline(PolyLine),
    Polygon(Polygon),
    Box(Box3),
}

impl SpatialPrimitive {
    pub fn kind(&self) -> PrimitiveKind {
        match self {
            SpatialPrimitive::Point(_) => PrimitiveKind::Point,
            SpatialPrimitive::OrientedPoint(_) => PrimitiveKind::OrientedPoint,
            SpatialPrimitive::Segment(_) => PrimitiveKind::Segment,
            SpatialPrimitive::Polyline(_) => PrimitiveKind::Polyline,
            SpatialPrimitive::Polygon(_) => PrimitiveKind::Polygon,
            SpatialPrimitive::Box(_) => PrimitiveKind::Box,
        }
    }

    /// Point for points, midpoint for segments, vertex centroid for
    /// polylines and polygons, extent centroid for boxes.
    pub fn centroid(&self) -> Point3 {
        match self {
            SpatialPrimitive::Point(p) => *p,
            SpatialPrimitive::OrientedPoint(op) => op.p,
            SpatialPrimitive::Segment(s) => s.midpoint(),
            SpatialPrimitive::Polyline(pl) => geometry::mean(&pl.vertices),
            SpatialPrimitive::Polygon(pg) => pg.vertex_centroid(),
            SpatialPrimitive::Box(b) => b.center(),
        }
    }

    /// Intrinsic orientation: the vector of an oriented point, the direction
    /// of a segment or polyline, the longest edge of a polygon. Boxes and
    /// plain points carry none.
    pub fn orientation(&self) -> Option<Point3> {
        let v = match self {
            SpatialPrimitive::OrientedPoint(op) => op.v,
            SpatialPrimitive::Segment(s) => s.direction(),
            SpatialPrimitive::Polyline(pl) => *pl.vertices.last()? - pl.vertices[0],
            SpatialPrimitive::Polygon(pg) => pg
                .edges()
                .max_by(|a, b| a.length().total_cmp(&b.length()))?
                .direction(),
            SpatialPrimitive::Point(_) | SpatialPrimitive::Box(_) => return None,
        };
        v.normalized()
    }

    fn points(&self) -> Vec<Point3> {
        match self {
            SpatialPrimitive::Point(p) => vec![*p],
            SpatialPrimitive::OrientedPoint(op) => vec![op.p],
            SpatialPrimitive::Segment(s) => vec![s.p1, s.p2],
            SpatialPrimitive::Polyline(pl) => pl.vertices.clone(),
            SpatialPrimitive::Polygon(pg) => pg.vertices.clone(),
            SpatialPrimitive::Box(b) => vec![b.min, b.max],
        }
    }

    fn with_points(&self, pts: &[Point3]) -> SpatialPrimitive {
        match self {
            SpatialPrimitive::Point(_) => SpatialPrimitive::Point(pts[0]),
            SpatialPrimitive::OrientedPoint(op) => SpatialPrimitive::OrientedPoint(OrientedPoint {
                p: pts[0],
                v: op.v,
            }),
            SpatialPrimitive::Segment(_) => SpatialPrimitive::Segment(LineSegment::new(pts[0], pts[1])),
            SpatialPrimitive::Polyline(_) => SpatialPrimitive::Polyline(PolyLine {
                vertices: pts.to_vec(),
            }),
            SpatialPrimitive::Polygon(_) => SpatialPrimitive::Polygon(Polygon::new(pts.to_vec())),
            SpatialPrimitive::Box(_) => SpatialPrimitive::Box(Box3::new(pts[0], pts[1])),
        }
    }

    /// Componentwise linear interpolation towards `other` (same kind and
    /// vertex count). Oriented-point vectors are interpolated and
    /// re-normalised.
    pub fn lerp(&self, other: &SpatialPrimitive, s: f64) -> Option<SpatialPrimitive> {
        if self.kind() != other.kind() {
            return None;
        }
        let a = self.points();
        let b = other.points();
        if a.len() != b.len() {
            return None;
        }
        let pts: Vec<Point3> = a.iter().zip(&b).map(|(p, q)| p.lerp(*q, s)).collect();
        let mut out = self.with_points(&pts);
        if let (SpatialPrimitive::OrientedPoint(op), SpatialPrimitive::OrientedPoint(oq)) = (self, other) {
            let v = op.v.lerp(oq.v, s).normalized().unwrap_or(if s < 0.5 { op.v } else { oq.v });
            out = SpatialPrimitive::OrientedPoint(OrientedPoint { p: pts[0], v });
        }
        Some(out)
    }

    pub fn translated(&self, d: Point3) -> SpatialPrimitive {
        let pts: Vec<Point3> = self.points().into_iter().map(|p| p + d).collect();
        self.with_points(&pts)
    }

    pub fn vertex_count(&self) -> usize {
        self.points().len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    NonFinite,
    NotUnitVector,
    DegenerateSegment,
    TooFewVertices,
    NonPlanar,
    SelfIntersecting,
    Clockwise,
    InvertedBox,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub message: String,
    /// Corrected primitive, when a mechanical fix exists (vertex reversal).
    pub suggestion: Option<SpatialPrimitive>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidityReport {
    pub violations: Vec<Violation>,
}

impl ValidityReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }

    fn push(&mut self, kind: ViolationKind, message: impl Into<String>) {
        self.violations.push(Violation {
            kind,
            message: message.into(),
            suggestion: None,
        });
    }
}

pub fn validate(entity: &SpatialPrimitive) -> ValidityReport {
    let mut report = ValidityReport::default();
    if !entity.points().iter().all(|p| p.is_finite()) {
        report.push(ViolationKind::NonFinite, "coordinates must be finite");
        return report;
    }
    match entity {
        SpatialPrimitive::Point(_) => {}
        SpatialPrimitive::OrientedPoint(op) => {
            if !op.v.is_finite() || (op.v.norm() - 1.0).abs() > UNIT_TOLERANCE {
                report.push(
                    ViolationKind::NotUnitVector,
                    format!("orientation vector has norm {}", op.v.norm()),
                );
            }
        }
        SpatialPrimitive::Segment(s) => {
            if s.length() <= GEOM_TOLERANCE {
                report.push(ViolationKind::DegenerateSegment, "segment endpoints coincide");
            }
        }
        SpatialPrimitive::Polyline(pl) => {
            if pl.vertices.len() < 2 {
                report.push(ViolationKind::TooFewVertices, "polyline needs at least 2 vertices");
            } else if geometry::polyline_self_intersects_xy(&pl.vertices, GEOM_TOLERANCE) {
                report.push(
                    ViolationKind::SelfIntersecting,
                    "polyline self-intersects in the ground plane",
                );
            }
        }
        SpatialPrimitive::Polygon(pg) => validate_polygon(pg, &mut report),
        SpatialPrimitive::Box(b) => {
            let e = b.extent();
            if !(e.x > 0.0 && e.y > 0.0 && e.z > 0.0) {
                report.push(ViolationKind::InvertedBox, "box min must be below max on every axis");
            }
        }
    }
    report
}

fn validate_polygon(pg: &Polygon, report: &mut ValidityReport) {
    if pg.vertices.len() < 3 {
        report.push(ViolationKind::TooFewVertices, "polygon needs at least 3 vertices");
        return;
    }
    let n = pg.newell_normal();
    let Some(unit) = n.normalized() else {
        // zero net area: either a crossed ring or collinear vertices
        let crossed = (0..3).any(|axis| {
            let flat: Vec<[f64; 2]> = pg
                .vertices
                .iter()
                .map(|v| geometry::project_drop_axis(*v, axis))
                .collect();
            let spans_plane = flat.iter().any(|q| {
                flat.iter().any(|r| {
                    geometry::cross2(geometry::sub2(*q, flat[0]), geometry::sub2(*r, flat[0])).abs()
                        > GEOM_TOLERANCE
                })
            });
            spans_plane && geometry::ring_self_intersects(&flat, GEOM_TOLERANCE)
        });
        if crossed {
            report.push(ViolationKind::SelfIntersecting, "polygon boundary self-intersects");
        } else {
            report.push(ViolationKind::TooFewVertices, "polygon vertices are collinear");
        }
        return;
    };
    let c = pg.vertex_centroid();
    if pg
        .vertices
        .iter()
        .any(|v| (*v - c).dot(unit).abs() > GEOM_TOLERANCE.max(1e-9 * n.norm()))
    {
        report.push(ViolationKind::NonPlanar, "polygon vertices do not share one plane");
    }
    let axis = geometry::dominant_axis(n);
    let flat: Vec<[f64; 2]> = pg
        .vertices
        .iter()
        .map(|v| geometry::project_drop_axis(*v, axis))
        .collect();
    if geometry::ring_self_intersects(&flat, GEOM_TOLERANCE) {
        report.push(ViolationKind::SelfIntersecting, "polygon boundary self-intersects");
    } else if pg.signed_area() < 0.0 {
        report.violations.push(Violation {
            kind: ViolationKind::Clockwise,
            message: "polygon vertices are clockwise; reverse the vertex order".into(),
            suggestion: Some(SpatialPrimitive::Polygon(pg.reversed())),
        });
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeInterval {
    pub start: f64,
    pub end: f64,
}

impl TimeInterval {
    pub fn new(start: f64, end: f64) -> Result<Self> {
        if start.is_finite() && end.is_finite() && start < end {
            Ok(Self { start, end })
        } else {
            Err(Error::InvalidInterval { start, end })
        }
    }

    pub fn duration(&self) -> f64 {
        self.end - self.start
    }

    pub fn contains_time(&self, t: f64) -> bool {
        self.start <= t && t <= self.end
    }

    pub fn contains(&self, other: &TimeInterval) -> bool {
        self.start <= other.start && other.end <= self.end
    }
}

impl fmt::Display for TimeInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.start, self.end)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainObject {
    pub id: String,
    pub class: String,
}

/// Timestamped spatial primitives of one domain object.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceTimeHistory {
    object: String,
    samples: Vec<(f64, SpatialPrimitive)>,
}

/// Non-fatal condition raised while sampling a history.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleWarning {
    pub object: String,
    pub t: f64,
    pub used_sample_time: f64,
}

impl SpaceTimeHistory {
    pub fn new(object: impl Into<String>, samples: Vec<(f64, SpatialPrimitive)>) -> Result<Self> {
        let object = object.into();
        let bad = |reason: String| Error::InvalidHistory {
            object: object.clone(),
            reason,
        };
        if samples.is_empty() {
            return Err(bad("no samples".into()));
        }
        let kind = samples[0].1.kind();
        let count = samples[0].1.vertex_count();
        for (i, (t, prim)) in samples.iter().enumerate() {
            if !t.is_finite() {
                return Err(bad(format!("sample {i} has a non-finite timestamp")));
            }
            if i > 0 && *t <= samples[i - 1].0 {
                return Err(bad(format!("timestamps not strictly increasing at sample {i} (t={t})")));
            }
            if prim.kind() != kind {
                return Err(bad(format!("sample {i} is a {} but the history holds {kind}", prim.kind())));
            }
            if prim.vertex_count() != count {
                return Err(bad(format!("sample {i} changes the vertex count from {count}")));
            }
            let report = validate(prim);
            if let Some(v) = report.violations.first() {
                return Err(bad(format!("sample {i} at t={t}: {}", v.message)));
            }
        }
        Ok(Self { object, samples })
    }

    pub fn object(&self) -> &str {
        &self.object
    }

    pub fn samples(&self) -> &[(f64, SpatialPrimitive)] {
        &self.samples
    }

    pub fn kind(&self) -> PrimitiveKind {
        self.samples[0].1.kind()
    }

    pub fn first_time(&self) -> f64 {
        self.samples[0].0
    }

    pub fn last_time(&self) -> f64 {
        self.samples[self.samples.len() - 1].0
    }

    pub fn span(&self) -> Result<TimeInterval> {
        if self.samples.len() < 2 {
            return Err(Error::DegenerateSpan(self.object.clone()));
        }
        TimeInterval::new(self.first_time(), self.last_time())
    }

    pub fn covers(&self, t: f64) -> bool {
        self.first_time() <= t && t <= self.last_time()
    }

    pub fn sample_at(&self, t: f64) -> Result<SpatialPrimitive> {
        self.sample_at_flagged(t).map(|(p, _)| p)
    }

    /// Like [`sample_at`](Self::sample_at), also reporting when polygon
    /// interpolation degenerated and the nearer stored sample was used.
    pub fn sample_at_flagged(&self, t: f64) -> Result<(SpatialPrimitive, Option<SampleWarning>)> {
        if !self.covers(t) {
            return Err(Error::OutOfRange {
                t,
                start: self.first_time(),
                end: self.last_time(),
            });
        }
        let idx = self.samples.partition_point(|(ts, _)| *ts < t);
        let (t1, p1) = &self.samples[idx];
        if *t1 == t || idx == 0 {
            return Ok((p1.clone(), None));
        }
        let (t0, p0) = &self.samples[idx - 1];
        let s = (t - t0) / (t1 - t0);
        let interp = p0.lerp(p1, s).expect("history samples share kind and vertex count");
        if matches!(interp, SpatialPrimitive::Polygon(_)) && !validate(&interp).is_ok() {
            let (nt, nearer) = if s < 0.5 { (*t0, p0) } else { (*t1, p1) };
            let warning = SampleWarning {
                object: self.object.clone(),
                t,
                used_sample_time: nt,
            };
            return Ok((nearer.clone(), Some(warning)));
        }
        Ok((interp, None))
    }

    /// History mirrored in time about the midpoint of `[t0, t1]`.
    pub fn time_reversed(&self, t0: f64, t1: f64) -> SpaceTimeHistory {
        let samples = self
            .samples
            .iter()
            .rev()
            .map(|(t, p)| ((t0 + t1) - t, p.clone()))
            .collect();
        SpaceTimeHistory {
            object: self.object.clone(),
            samples,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: f64, y: f64) -> Point3 {
        Point3::new(x, y, 0.0)
    }

    fn square() -> Polygon {
        Polygon::new(vec![pt(0.0, 0.0), pt(1.0, 0.0), pt(1.0, 1.0), pt(0.0, 1.0)])
    }

    fn shoelace(v: &[Point3]) -> f64 {
        let n = v.len();
        (0..n)
            .map(|i| {
                let (a, b) = (v[i], v[(i + 1) % n]);
                a.x * b.y - b.x * a.y
            })
            .sum::<f64>()
            / 2.0
    }

    #[test]
    fn ccw_square_is_valid() {
        assert!(validate(&SpatialPrimitive::Polygon(square())).is_ok());
    }

    #[test]
    fn crossed_square_is_self_intersecting() {
        let bowtie = Polygon::new(vec![pt(0.0, 0.0), pt(1.0, 1.0), pt(1.0, 0.0), pt(0.0, 1.0)]);
        let r = validate(&SpatialPrimitive::Polygon(bowtie));
        assert!(r.has(ViolationKind::SelfIntersecting));
        let line = Polygon::new(vec![pt(0.0, 0.0), pt(1.0, 0.0), pt(2.0, 0.0)]);
        assert!(validate(&SpatialPrimitive::Polygon(line)).has(ViolationKind::TooFewVertices));
    }

    #[test]
    fn clockwise_polygon_suggests_reversal() {
        let cw = square().reversed();
        assert!(shoelace(&cw.vertices) < 0.0);
        let r = validate(&SpatialPrimitive::Polygon(cw.clone()));
        assert!(r.has(ViolationKind::Clockwise));
        let fixed = r.violations[0].suggestion.clone().unwrap();
        assert_eq!(fixed, SpatialPrimitive::Polygon(square()));
        assert!(validate(&fixed).is_ok());
    }

    #[test]
    fn other_invariants() {
        let op = OrientedPoint {
            p: Point3::ORIGIN,
            v: Point3::new(2.0, 0.0, 0.0),
        };
        assert!(validate(&SpatialPrimitive::OrientedPoint(op)).has(ViolationKind::NotUnitVector));
        let seg = LineSegment::new(Point3::ORIGIN, Point3::ORIGIN);
        assert!(validate(&SpatialPrimitive::Segment(seg)).has(ViolationKind::DegenerateSegment));
        let b = Box3::new(Point3::new(0.0, 0.0, 0.0), Point3::new(1.0, 0.0, 1.0));
        assert!(validate(&SpatialPrimitive::Box(b)).has(ViolationKind::InvertedBox));
        let nan = SpatialPrimitive::Point(Point3::new(f64::NAN, 0.0, 0.0));
        assert!(validate(&nan).has(ViolationKind::NonFinite));
        let tilted = Polygon::new(vec![
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(1.0, 1.0, 0.5),
            Point3::new(0.0, 1.0, 0.0),
        ]);
        assert!(validate(&SpatialPrimitive::Polygon(tilted)).has(ViolationKind::NonPlanar));
    }

    #[test]
    fn sample_at_interpolates_linearly() {
        let h = SpaceTimeHistory::new(
            "o",
            vec![
                (0.0, SpatialPrimitive::Point(Point3::ORIGIN)),
                (2.0, SpatialPrimitive::Point(Point3::new(2.0, 0.0, 0.0))),
            ],
        )
        .unwrap();
        assert_eq!(h.sample_at(1.0).unwrap(), SpatialPrimitive::Point(Point3::new(1.0, 0.0, 0.0)));
        assert_eq!(h.sample_at(2.0).unwrap(), SpatialPrimitive::Point(Point3::new(2.0, 0.0, 0.0)));
        let err = h.sample_at(2.5).unwrap_err();
        assert_eq!(
            err,
            Error::OutOfRange {
                t: 2.5,
                start: 0.0,
                end: 2.0
            }
        );
    }

    #[test]
    fn box_history_interpolation() {
        let unit = Point3::new(1.0, 1.0, 1.0);
        let h = SpaceTimeHistory::new(
            "b",
            vec![
                (0.0, SpatialPrimitive::Box(Box3::new(Point3::ORIGIN, unit))),
                (
                    4.0,
                    SpatialPrimitive::Box(Box3::new(Point3::new(1.0, 0.0, 0.0), unit + Point3::new(1.0, 0.0, 0.0))),
                ),
            ],
        )
        .unwrap();
        // oracle: min.x = 0 + (3 / 4) * (1 - 0)
        let SpatialPrimitive::Box(b) = h.sample_at(3.0).unwrap() else {
            panic!("expected a box")
        };
        assert!((b.min.x - 0.75).abs() < 1e-12);
        assert_eq!(b.min.y, 0.0);
    }

    #[test]
    fn degenerate_polygon_interpolation_falls_back() {
        let a = square();
        // same square with vertex labels rotated by two: halfway, every vertex meets the center
        let b = Polygon::new(vec![pt(1.0, 1.0), pt(0.0, 1.0), pt(0.0, 0.0), pt(1.0, 0.0)]);
        let h = SpaceTimeHistory::new(
            "pg",
            vec![(0.0, SpatialPrimitive::Polygon(a.clone())), (1.0, SpatialPrimitive::Polygon(b.clone()))],
        )
        .unwrap();
        let (p, w) = h.sample_at_flagged(0.5).unwrap();
        assert_eq!(p, SpatialPrimitive::Polygon(b.clone()));
        assert_eq!(w.unwrap().used_sample_time, 1.0);
        let (p, w) = h.sample_at_flagged(0.4).unwrap();
        assert!(w.is_none());
        assert!(validate(&p).is_ok());
        assert_ne!(p, SpatialPrimitive::Polygon(a));
    }

    #[test]
    fn span_rules() {
        let mk = |ts: &[f64]| {
            SpaceTimeHistory::new(
                "o",
                ts.iter().map(|t| (*t, SpatialPrimitive::Point(Point3::ORIGIN))).collect(),
            )
            .unwrap()
        };
        assert_eq!(mk(&[0.0, 1.0, 2.0]).span().unwrap(), TimeInterval { start: 0.0, end: 2.0 });
        assert_eq!(mk(&[0.5, 0.6]).span().unwrap(), TimeInterval { start: 0.5, end: 0.6 });
        assert!(matches!(mk(&[0.5]).span(), Err(Error::DegenerateSpan(_))));
    }

    #[test]
    fn history_rejects_bad_samples() {
        let p = SpatialPrimitive::Point(Point3::ORIGIN);
        assert!(SpaceTimeHistory::new("o", vec![(0.0, p.clone()), (0.0, p.clone())]).is_err());
        let b = SpatialPrimitive::Box(Box3::new(Point3::ORIGIN, Point3::new(1.0, 1.0, 1.0)));
        assert!(SpaceTimeHistory::new("o", vec![(0.0, p), (1.0, b)]).is_err());
    }
}
