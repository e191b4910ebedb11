//! Quantitative property functions over objects and time.

use std::f64::consts::TAU;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::entities::{Point3, SpaceTimeHistory, SpatialPrimitive, GEOM_TOLERANCE};
use crate::error::{Error, Result};
use crate::geometry;
use crate::scene::Scene;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Unit {
    #[serde(rename = "m")]
    Meter,
    #[serde(rename = "m2")]
    SquareMeter,
    #[serde(rename = "m3")]
    CubicMeter,
    #[serde(rename = "m/s")]
    MeterPerSecond,
    #[serde(rename = "rad")]
    Radian,
    #[serde(rename = "rad/s")]
    RadianPerSecond,
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Unit::Meter => "m",
            Unit::SquareMeter => "m²",
            Unit::CubicMeter => "m³",
            Unit::MeterPerSecond => "m/s",
            Unit::Radian => "rad",
            Unit::RadianPerSecond => "rad/s",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricValue {
    pub value: f64,
    pub unit: Unit,
}

impl MetricValue {
    pub fn new(value: f64, unit: Unit) -> Self {
        Self { value, unit }
    }
}

impl fmt::Display for MetricValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.value, self.unit)
    }
}

/// Volume of a box, area of a polygon, length of a segment or polyline;
/// zero for points.
pub fn size_of(p: &SpatialPrimitive) -> MetricValue {
    match p {
        SpatialPrimitive::Box(b) => MetricValue::new(b.volume(), Unit::CubicMeter),
        SpatialPrimitive::Polygon(pg) => MetricValue::new(pg.area(), Unit::SquareMeter),
        SpatialPrimitive::Segment(s) => MetricValue::new(s.length(), Unit::Meter),
        SpatialPrimitive::Polyline(pl) => MetricValue::new(pl.length(), Unit::Meter),
        SpatialPrimitive::Point(_) | SpatialPrimitive::OrientedPoint(_) => MetricValue::new(0.0, Unit::Meter),
    }
}

/// Linear scale of a primitive: cube root of volume, square root of area,
/// or length.
pub fn characteristic_length(p: &SpatialPrimitive) -> f64 {
    let s = size_of(p);
    match s.unit {
        Unit::CubicMeter => s.value.cbrt(),
        Unit::SquareMeter => s.value.sqrt(),
        _ => s.value,
    }
}

pub fn position_in(h: &SpaceTimeHistory, t: f64) -> Result<Point3> {
    Ok(h.sample_at(t)?.centroid())
}

pub fn size_in(h: &SpaceTimeHistory, t: f64) -> Result<MetricValue> {
    Ok(size_of(&h.sample_at(t)?))
}

pub fn distance_between(a: &SpaceTimeHistory, b: &SpaceTimeHistory, t: f64) -> Result<MetricValue> {
    let pa = a.sample_at(t)?;
    let pb = b.sample_at(t)?;
    Ok(MetricValue::new(geometry::primitive_distance(&pa, &pb), Unit::Meter))
}

/// Intrinsic orientation at `t`, or the direction of travel between the
/// bracketing samples when the primitive has none.
pub fn orientation_at(h: &SpaceTimeHistory, t: f64) -> Result<Point3> {
    if let Some(v) = h.sample_at(t)?.orientation() {
        return Ok(v);
    }
    let samples = h.samples();
    let undefined = || Error::OrientationUndefined(h.object().to_string());
    if samples.len() < 2 {
        return Err(undefined());
    }
    let idx = samples.partition_point(|(ts, _)| *ts < t).clamp(1, samples.len() - 1);
    let d = samples[idx].1.centroid() - samples[idx - 1].1.centroid();
    if d.norm() <= GEOM_TOLERANCE {
        return Err(undefined());
    }
    d.normalized().ok_or_else(undefined)
}

pub fn angle_between(a: &SpaceTimeHistory, b: &SpaceTimeHistory, t: f64) -> Result<MetricValue> {
    let u = orientation_at(a, t)?;
    let v = orientation_at(b, t)?;
    Ok(MetricValue::new(u.dot(v).clamp(-1.0, 1.0).acos(), Unit::Radian))
}

fn check_interval(h: &SpaceTimeHistory, t1: f64, t2: f64) -> Result<()> {
    if t1.partial_cmp(&t2) != Some(std::cmp::Ordering::Less) {
        return Err(Error::InvalidInterval { start: t1, end: t2 });
    }
    for t in [t1, t2] {
        if !h.covers(t) {
            return Err(Error::OutOfRange {
                t,
                start: h.first_time(),
                end: h.last_time(),
            });
        }
    }
    Ok(())
}

pub fn velocity_over(h: &SpaceTimeHistory, t1: f64, t2: f64) -> Result<MetricValue> {
    check_interval(h, t1, t2)?;
    let d = position_in(h, t2)?.distance(position_in(h, t1)?);
    Ok(MetricValue::new(d / (t2 - t1), Unit::MeterPerSecond))
}

/// Ground-plane azimuth of a displacement in [0, 2π), CCW from +x.
pub fn azimuth(d: Point3) -> Result<f64> {
    if d.x.hypot(d.y) <= GEOM_TOLERANCE {
        return Err(Error::DirectionUndefined);
    }
    let a = d.y.atan2(d.x).rem_euclid(TAU);
    Ok(if a >= TAU { 0.0 } else { a })
}

pub fn direction_over(h: &SpaceTimeHistory, t1: f64, t2: f64) -> Result<MetricValue> {
    check_interval(h, t1, t2)?;
    let d = position_in(h, t2)? - position_in(h, t1)?;
    Ok(MetricValue::new(azimuth(d)?, Unit::Radian))
}

fn yaw(h: &SpaceTimeHistory, t: f64) -> Result<f64> {
    let v = h
        .sample_at(t)?
        .orientation()
        .ok_or_else(|| Error::OrientationUndefined(h.object().to_string()))?;
    if v.x.hypot(v.y) <= GEOM_TOLERANCE {
        return Err(Error::OrientationUndefined(h.object().to_string()));
    }
    Ok(v.y.atan2(v.x))
}

/// Signed ground-plane yaw change, accumulated over every stored sample in
/// between so that turns beyond a half revolution are not aliased.
pub fn rotation_over(h: &SpaceTimeHistory, t1: f64, t2: f64) -> Result<MetricValue> {
    check_interval(h, t1, t2)?;
    let mut times = vec![t1];
    times.extend(h.samples().iter().map(|(t, _)| *t).filter(|t| *t > t1 && *t < t2));
    times.push(t2);
    let mut total = 0.0;
    let mut prev = yaw(h, t1)?;
    for t in &times[1..] {
        let cur = yaw(h, *t)?;
        total += geometry::wrap_angle(cur - prev);
        prev = cur;
    }
    Ok(MetricValue::new(total, Unit::Radian))
}

pub fn position(scene: &Scene, o: &str, t: f64) -> Result<Point3> {
    position_in(scene.history(o)?, t)
}

pub fn size(scene: &Scene, o: &str, t: f64) -> Result<MetricValue> {
    size_in(scene.history(o)?, t)
}

pub fn distance(scene: &Scene, o1: &str, o2: &str, t: f64) -> Result<MetricValue> {
    distance_between(scene.history(o1)?, scene.history(o2)?, t)
}

pub fn angle(scene: &Scene, o1: &str, o2: &str, t: f64) -> Result<MetricValue> {
    angle_between(scene.history(o1)?, scene.history(o2)?, t)
}

pub fn movement_velocity(scene: &Scene, o: &str, t1: f64, t2: f64) -> Result<MetricValue> {
    velocity_over(scene.history(o)?, t1, t2)
}

pub fn movement_direction(scene: &Scene, o: &str, t1: f64, t2: f64) -> Result<MetricValue> {
    direction_over(scene.history(o)?, t1, t2)
}

pub fn rotation(scene: &Scene, o: &str, t1: f64, t2: f64) -> Result<MetricValue> {
    rotation_over(scene.history(o)?, t1, t2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entities::{Box3, LineSegment, OrientedPoint, Polygon};
    use std::f64::consts::PI;

    fn p(x: f64, y: f64, z: f64) -> Point3 {
        Point3::new(x, y, z)
    }

    fn hist(samples: Vec<(f64, SpatialPrimitive)>) -> SpaceTimeHistory {
        SpaceTimeHistory::new("o", samples).unwrap()
    }

    fn points(pts: &[(f64, Point3)]) -> SpaceTimeHistory {
        hist(pts.iter().map(|(t, q)| (*t, SpatialPrimitive::Point(*q))).collect())
    }

    fn oriented(v: &[(f64, f64)]) -> SpaceTimeHistory {
        hist(
            v.iter()
                .enumerate()
                .map(|(i, (x, y))| {
                    let op = OrientedPoint {
                        p: Point3::ORIGIN,
                        v: p(*x, *y, 0.0).normalized().unwrap(),
                    };
                    (i as f64, SpatialPrimitive::OrientedPoint(op))
                })
                .collect(),
        )
    }

    #[test]
    fn positions() {
        let h = points(&[(0.0, p(1.0, 2.0, 3.0)), (1.0, p(1.0, 2.0, 3.0))]);
        assert_eq!(position_in(&h, 0.0).unwrap(), p(1.0, 2.0, 3.0));
        let b = SpatialPrimitive::Box(Box3::new(Point3::ORIGIN, p(2.0, 2.0, 2.0)));
        assert_eq!(b.centroid(), p(1.0, 1.0, 1.0));
        let s = SpatialPrimitive::Segment(LineSegment::new(Point3::ORIGIN, p(4.0, 0.0, 0.0)));
        assert_eq!(s.centroid(), p(2.0, 0.0, 0.0));
        assert!(position_in(&h, 2.0).is_err());
    }

    #[test]
    fn sizes() {
        let unit = SpatialPrimitive::Box(Box3::new(Point3::ORIGIN, p(1.0, 1.0, 1.0)));
        assert_eq!(size_of(&unit), MetricValue::new(1.0, Unit::CubicMeter));
        assert_eq!(size_of(&SpatialPrimitive::Point(Point3::ORIGIN)).value, 0.0);
        let tri = SpatialPrimitive::Polygon(Polygon::new(vec![Point3::ORIGIN, p(2.0, 0.0, 0.0), p(0.0, 2.0, 0.0)]));
        // shoelace: (0*0 - 2*0 + 2*2 - 0*0 + 0*0 - 0*2) / 2
        assert!((size_of(&tri).value - 2.0).abs() < 1e-12);
        assert_eq!(size_of(&tri).unit, Unit::SquareMeter);
    }

    #[test]
    fn angles() {
        let a = oriented(&[(1.0, 0.0), (1.0, 0.0)]);
        let b = oriented(&[(0.0, 1.0), (0.0, 1.0)]);
        let c = oriented(&[(-1.0, 0.0), (-1.0, 0.0)]);
        assert!(angle_between(&a, &a, 0.0).unwrap().value.abs() < 1e-12);
        assert!((angle_between(&a, &c, 0.0).unwrap().value - PI).abs() < 1e-12);
        assert!((angle_between(&a, &b, 0.5).unwrap().value - PI / 2.0).abs() < 1e-12);
        let still = points(&[(0.0, Point3::ORIGIN), (1.0, Point3::ORIGIN)]);
        assert!(matches!(angle_between(&a, &still, 0.5), Err(Error::OrientationUndefined(_))));
        let mover = points(&[(0.0, Point3::ORIGIN), (1.0, p(0.0, 3.0, 0.0))]);
        assert!((angle_between(&a, &mover, 1.0).unwrap().value - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn velocities() {
        let still = points(&[(0.0, Point3::ORIGIN), (1.0, Point3::ORIGIN)]);
        assert_eq!(velocity_over(&still, 0.0, 1.0).unwrap().value, 0.0);
        let h = points(&[(0.0, Point3::ORIGIN), (1.0, p(2.0, 0.0, 0.0))]);
        assert_eq!(velocity_over(&h, 0.0, 1.0).unwrap().value, 2.0);
        let h = points(&[(0.0, Point3::ORIGIN), (2.0, p(3.0, 4.0, 0.0))]);
        assert!((velocity_over(&h, 0.0, 2.0).unwrap().value - 2.5).abs() < 1e-12);
        assert!(matches!(velocity_over(&h, 1.0, 1.0), Err(Error::InvalidInterval { .. })));
    }

    #[test]
    fn directions() {
        let dir = |d: Point3| azimuth(d).unwrap();
        assert_eq!(dir(p(1.0, 0.0, 0.0)), 0.0);
        assert!((dir(p(0.0, 1.0, 0.0)) - PI / 2.0).abs() < 1e-12);
        assert!((dir(p(-1.0, -1.0, 0.0)) - 5.0 * PI / 4.0).abs() < 1e-12);
        assert_eq!(azimuth(p(0.0, 0.0, 1.0)), Err(Error::DirectionUndefined));
        let h = points(&[(0.0, Point3::ORIGIN), (1.0, p(0.0, 0.0, 0.5))]);
        assert_eq!(direction_over(&h, 0.0, 1.0), Err(Error::DirectionUndefined));
    }

    #[test]
    fn rotations() {
        let fixed = oriented(&[(1.0, 0.0), (1.0, 0.0)]);
        assert_eq!(rotation_over(&fixed, 0.0, 1.0).unwrap().value, 0.0);
        let quarter = oriented(&[(1.0, 0.0), (0.0, 1.0)]);
        assert!((rotation_over(&quarter, 0.0, 1.0).unwrap().value - PI / 2.0).abs() < 1e-12);
        let steps: Vec<(f64, f64)> = (0..=10).map(|k| {
            let a = PI * k as f64 / 10.0;
            (a.cos(), a.sin())
        }).collect();
        let half = oriented(&steps);
        assert!((rotation_over(&half, 0.0, 10.0).unwrap().value - PI).abs() < 1e-9);
        let pts = points(&[(0.0, Point3::ORIGIN), (1.0, p(1.0, 0.0, 0.0))]);
        assert!(matches!(rotation_over(&pts, 0.0, 1.0), Err(Error::OrientationUndefined(_))));
    }
}
