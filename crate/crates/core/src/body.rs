//! Skeleton tracks and the body-part abstraction over them.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::entities::{validate, LineSegment, Point3, Polygon, SpaceTimeHistory, SpatialPrimitive};
use crate::error::{Error, Result};
use crate::geometry;

/// Joints below this confidence are treated as absent.
pub const DEFAULT_MIN_CONFIDENCE: f64 = 0.3;

macro_rules! joints {
    ($($variant:ident => $name:literal),* $(,)?) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(rename_all = "snake_case")]
        pub enum JointId { $($variant),* }

        impl JointId {
            pub const ALL: [JointId; 25] = [$(JointId::$variant),*];

            pub fn name(self) -> &'static str {
                match self { $(JointId::$variant => $name),* }
            }
        }
    };
}

joints! {
    SpineBase => "spine_base",
    SpineMid => "spine_mid",
    SpineShoulder => "spine_shoulder",
    Neck => "neck",
    Head => "head",
    ShoulderLeft => "shoulder_left",
    ElbowLeft => "elbow_left",
    WristLeft => "wrist_left",
    HandLeft => "hand_left",
    HandTipLeft => "hand_tip_left",
    ThumbLeft => "thumb_left",
    HipLeft => "hip_left",
    KneeLeft => "knee_left",
    AnkleLeft => "ankle_left",
    FootLeft => "foot_left",
    ShoulderRight => "shoulder_right",
    ElbowRight => "elbow_right",
    WristRight => "wrist_right",
    HandRight => "hand_right",
    HandTipRight => "hand_tip_right",
    ThumbRight => "thumb_right",
    HipRight => "hip_right",
    KneeRight => "knee_right",
    AnkleRight => "ankle_right",
    FootRight => "foot_right",
}

impl fmt::Display for JointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for JointId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        JointId::ALL
            .into_iter()
            .find(|j| j.name() == s)
            .ok_or_else(|| Error::InvalidScene(format!("unknown joint `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BodyPartId {
    Head,
    Torso,
    Hand(Side),
    Forearm(Side),
    UpperArm(Side),
    Thigh(Side),
    Shank(Side),
    Foot(Side),
}

impl BodyPartId {
    pub const ALL: [BodyPartId; 14] = {
        use BodyPartId::*;
        use Side::*;
        [
            Head,
            Torso,
            Hand(Left),
            Hand(Right),
            Forearm(Left),
            Forearm(Right),
            UpperArm(Left),
            UpperArm(Right),
            Thigh(Left),
            Thigh(Right),
            Shank(Left),
            Shank(Right),
            Foot(Left),
            Foot(Right),
        ]
    };

    fn base_name(self) -> &'static str {
        match self {
            BodyPartId::Head => "head",
            BodyPartId::Torso => "torso",
            BodyPartId::Hand(_) => "hand",
            BodyPartId::Forearm(_) => "forearm",
            BodyPartId::UpperArm(_) => "upper_arm",
            BodyPartId::Thigh(_) => "thigh",
            BodyPartId::Shank(_) => "shank",
            BodyPartId::Foot(_) => "foot",
        }
    }

    fn side(self) -> Option<Side> {
        match self {
            BodyPartId::Head | BodyPartId::Torso => None,
            BodyPartId::Hand(s)
            | BodyPartId::Forearm(s)
            | BodyPartId::UpperArm(s)
            | BodyPartId::Thigh(s)
            | BodyPartId::Shank(s)
            | BodyPartId::Foot(s) => Some(s),
        }
    }

    /// Ordered joints defining the part's primitive.
    pub fn joints(self) -> Vec<JointId> {
        use JointId::*;
        let left = self.side() == Some(Side::Left);
        let pick = |l: JointId, r: JointId| if left { l } else { r };
        match self {
            BodyPartId::Head => vec![Head],
            BodyPartId::Torso => vec![ShoulderLeft, ShoulderRight, HipRight, HipLeft],
            BodyPartId::Hand(_) => vec![pick(HandLeft, HandRight)],
            BodyPartId::Forearm(_) => vec![pick(ElbowLeft, ElbowRight), pick(WristLeft, WristRight)],
            BodyPartId::UpperArm(_) => vec![pick(ShoulderLeft, ShoulderRight), pick(ElbowLeft, ElbowRight)],
            BodyPartId::Thigh(_) => vec![pick(HipLeft, HipRight), pick(KneeLeft, KneeRight)],
            BodyPartId::Shank(_) => vec![pick(KneeLeft, KneeRight), pick(AnkleLeft, AnkleRight)],
            BodyPartId::Foot(_) => vec![pick(FootLeft, FootRight)],
        }
    }
}

impl fmt::Display for BodyPartId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.side() {
            None => f.write_str(self.base_name()),
            Some(Side::Left) => write!(f, "{}_left", self.base_name()),
            Some(Side::Right) => write!(f, "{}_right", self.base_name()),
        }
    }
}

impl FromStr for BodyPartId {
    type Err = Error;

    /// Accepts `hand_left`, `hand_right` and the side-less `hand`, which
    /// names the right-hand side.
    fn from_str(s: &str) -> Result<Self> {
        BodyPartId::ALL
            .into_iter()
            .find(|p| p.to_string() == s || (p.side() == Some(Side::Right) && p.base_name() == s))
            .ok_or_else(|| Error::Rule(format!("unknown body part `{s}`")))
    }
}

/// Joint positions with confidences at one instant. Missing joints are
/// absent from the map.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SkeletonPose {
    pub joints: BTreeMap<JointId, (Point3, f64)>,
}

impl SkeletonPose {
    pub fn joint(&self, j: JointId, min_confidence: f64) -> Option<Point3> {
        self.joints
            .get(&j)
            .filter(|(_, c)| *c >= min_confidence)
            .map(|(p, _)| *p)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkeletonTrack {
    person: String,
    samples: Vec<(f64, SkeletonPose)>,
}

impl SkeletonTrack {
    pub fn new(person: impl Into<String>, samples: Vec<(f64, SkeletonPose)>) -> Result<Self> {
        let person = person.into();
        for i in 1..samples.len() {
            if samples[i].0 <= samples[i - 1].0 {
                return Err(Error::InvalidHistory {
                    object: person,
                    reason: format!("skeleton timestamps not strictly increasing at sample {i}"),
                });
            }
        }
        for (t, pose) in &samples {
            if !t.is_finite() || pose.joints.values().any(|(p, c)| !p.is_finite() || !c.is_finite()) {
                return Err(Error::InvalidHistory {
                    object: person,
                    reason: format!("non-finite skeleton data at t={t}"),
                });
            }
        }
        Ok(Self { person, samples })
    }

    pub fn person(&self) -> &str {
        &self.person
    }

    pub fn samples(&self) -> &[(f64, SkeletonPose)] {
        &self.samples
    }

    pub fn covers(&self, t: f64) -> bool {
        match (self.samples.first(), self.samples.last()) {
            (Some(a), Some(b)) => a.0 <= t && t <= b.0,
            _ => false,
        }
    }

    /// Joint position at `t`, interpolated between bracketing samples.
    /// `None` when the joint is missing in either bracketing sample.
    pub fn joint_at(&self, j: JointId, t: f64, min_confidence: f64) -> Result<Option<Point3>> {
        if !self.covers(t) {
            let (start, end) = match (self.samples.first(), self.samples.last()) {
                (Some(a), Some(b)) => (a.0, b.0),
                _ => (f64::NAN, f64::NAN),
            };
            return Err(Error::OutOfRange { t, start, end });
        }
        let idx = self.samples.partition_point(|(ts, _)| *ts < t);
        let (t1, pose1) = &self.samples[idx];
        if *t1 == t || idx == 0 {
            return Ok(pose1.joint(j, min_confidence));
        }
        let (t0, pose0) = &self.samples[idx - 1];
        let s = (t - t0) / (t1 - t0);
        Ok(match (pose0.joint(j, min_confidence), pose1.joint(j, min_confidence)) {
            (Some(a), Some(b)) => Some(a.lerp(b, s)),
            _ => None,
        })
    }

    fn joints_at(&self, part: BodyPartId, t: f64, min_confidence: f64) -> Result<Vec<Point3>> {
        let mut found = Vec::new();
        let mut missing = Vec::new();
        for j in part.joints() {
            match self.joint_at(j, t, min_confidence)? {
                Some(p) => found.push(p),
                None => missing.push(j.name()),
            }
        }
        if missing.is_empty() {
            Ok(found)
        } else {
            Err(Error::PartialPose {
                person: self.person.clone(),
                part: part.to_string(),
                t,
                joints: missing.join(", "),
            })
        }
    }
}

/// Spatial primitive abstracting `part` of the tracked person at `t`.
pub fn body_part_entity(
    track: &SkeletonTrack,
    part: BodyPartId,
    t: f64,
    min_confidence: f64,
) -> Result<SpatialPrimitive> {
    let pts = track.joints_at(part, t, min_confidence)?;
    let prim = match part {
        BodyPartId::Head | BodyPartId::Hand(_) | BodyPartId::Foot(_) => SpatialPrimitive::Point(pts[0]),
        BodyPartId::Torso => SpatialPrimitive::Polygon(planar_ccw(&pts)),
        _ => SpatialPrimitive::Segment(LineSegment::new(pts[0], pts[1])),
    };
    if let Some(v) = validate(&prim).violations.first() {
        return Err(Error::Degenerate(format!("{part} of `{}` at t={t}: {}", track.person, v.message)));
    }
    Ok(prim)
}

/// Projects the ring onto its best-fit plane and orders it counter-clockwise.
fn planar_ccw(pts: &[Point3]) -> Polygon {
    let c = geometry::mean(pts);
    let projected = match geometry::newell_normal(pts).normalized() {
        Some(n) => pts.iter().map(|p| *p - n * (*p - c).dot(n)).collect(),
        None => pts.to_vec(),
    };
    let pg = Polygon::new(projected);
    if pg.signed_area() < 0.0 {
        pg.reversed()
    } else {
        pg
    }
}

/// Interior angle at `b` of the chain a-b-c, radians in [0, π].
pub fn angle_between(a: Point3, b: Point3, c: Point3) -> Result<f64> {
    let u = (a - b)
        .normalized()
        .ok_or_else(|| Error::Degenerate("joints a and b coincide".into()))?;
    let v = (c - b)
        .normalized()
        .ok_or_else(|| Error::Degenerate("joints c and b coincide".into()))?;
    Ok(u.dot(v).clamp(-1.0, 1.0).acos())
}

pub fn joint_angle(
    track: &SkeletonTrack,
    a: JointId,
    b: JointId,
    c: JointId,
    t: f64,
    min_confidence: f64,
) -> Result<f64> {
    let mut pts = Vec::with_capacity(3);
    let mut missing = Vec::new();
    for j in [a, b, c] {
        match track.joint_at(j, t, min_confidence)? {
            Some(p) => pts.push(p),
            None => missing.push(j.name()),
        }
    }
    if !missing.is_empty() {
        return Err(Error::PartialPose {
            person: track.person.clone(),
            part: format!("{a}-{b}-{c}"),
            t,
            joints: missing.join(", "),
        });
    }
    angle_between(pts[0], pts[1], pts[2])
}

/// History of a body part over the track's sample times. Frames where the
/// part cannot be resolved are skipped and reported as warnings.
pub fn as_history(
    track: &SkeletonTrack,
    part: BodyPartId,
    min_confidence: f64,
) -> Result<(SpaceTimeHistory, Vec<String>)> {
    let mut samples = Vec::new();
    let mut warnings = Vec::new();
    for (t, _) in &track.samples {
        match body_part_entity(track, part, *t, min_confidence) {
            Ok(p) => samples.push((*t, p)),
            Err(e) => warnings.push(format!("skipped frame t={t}: {e}")),
        }
    }
    let name = format!("body_part({part},{})", track.person);
    if samples.len() < 2 {
        return Err(Error::InsufficientSamples(name));
    }
    Ok((SpaceTimeHistory::new(name, samples)?, warnings))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn pose(joints: &[(JointId, [f64; 3])]) -> SkeletonPose {
        SkeletonPose {
            joints: joints.iter().map(|(j, p)| (*j, (Point3::from_array(*p), 1.0))).collect(),
        }
    }

    #[test]
    fn twenty_five_distinct_joints() {
        let names: std::collections::BTreeSet<_> = JointId::ALL.iter().map(|j| j.name()).collect();
        assert_eq!(names.len(), 25);
        assert_eq!("hand_tip_left".parse::<JointId>().unwrap(), JointId::HandTipLeft);
    }

    #[test]
    fn part_names() {
        assert_eq!("hand".parse::<BodyPartId>().unwrap(), BodyPartId::Hand(Side::Right));
        assert_eq!("forearm_left".parse::<BodyPartId>().unwrap(), BodyPartId::Forearm(Side::Left));
        assert_eq!(BodyPartId::UpperArm(Side::Right).to_string(), "upper_arm_right");
        assert!("tail".parse::<BodyPartId>().is_err());
        for p in BodyPartId::ALL {
            assert_eq!(p.to_string().parse::<BodyPartId>().unwrap(), p);
        }
    }

    #[test]
    fn point_and_segment_parts() {
        let track = SkeletonTrack::new(
            "p",
            vec![(
                0.0,
                pose(&[
                    (JointId::HandRight, [1.0, 1.0, 1.0]),
                    (JointId::ElbowRight, [0.0, 0.0, 0.0]),
                    (JointId::WristRight, [0.3, 0.0, 0.0]),
                ]),
            )],
        )
        .unwrap();
        let hand = body_part_entity(&track, BodyPartId::Hand(Side::Right), 0.0, 0.3).unwrap();
        assert_eq!(hand, SpatialPrimitive::Point(Point3::new(1.0, 1.0, 1.0)));
        match body_part_entity(&track, BodyPartId::Forearm(Side::Right), 0.0, 0.3).unwrap() {
            SpatialPrimitive::Segment(s) => assert!((s.length() - 0.3).abs() < 1e-12),
            other => panic!("expected segment, got {other:?}"),
        }
        let err = body_part_entity(&track, BodyPartId::Head, 0.0, 0.3).unwrap_err();
        assert!(matches!(err, Error::PartialPose { ref joints, .. } if joints == "head"));
    }

    #[test]
    fn torso_is_ccw_and_valid() {
        // slightly warped quad, listed clockwise when seen from the front
        let track = SkeletonTrack::new(
            "p",
            vec![(
                0.0,
                pose(&[
                    (JointId::ShoulderLeft, [0.0, 0.2, 1.1]),
                    (JointId::ShoulderRight, [0.01, -0.2, 1.1]),
                    (JointId::HipRight, [0.0, -0.15, 0.5]),
                    (JointId::HipLeft, [0.02, 0.15, 0.5]),
                ]),
            )],
        )
        .unwrap();
        let SpatialPrimitive::Polygon(pg) = body_part_entity(&track, BodyPartId::Torso, 0.0, 0.3).unwrap() else {
            panic!("torso must be a polygon");
        };
        assert!(validate(&SpatialPrimitive::Polygon(pg.clone())).is_ok());
        // shoelace over the dominant-axis projection
        let axis = geometry::dominant_axis(pg.newell_normal());
        let ring: Vec<_> = pg.vertices.iter().map(|v| geometry::project_drop_axis(*v, axis)).collect();
        let shoelace: f64 = (0..ring.len())
            .map(|i| {
                let (a, b) = (ring[i], ring[(i + 1) % ring.len()]);
                a[0] * b[1] - b[0] * a[1]
            })
            .sum();
        assert!(shoelace > 0.0);
    }

    #[test]
    fn joint_angles() {
        let o = Point3::ORIGIN;
        assert!((angle_between(Point3::new(-1.0, 0.0, 0.0), o, Point3::new(1.0, 0.0, 0.0)).unwrap() - PI).abs() < 1e-12);
        assert!((angle_between(Point3::new(1.0, 0.0, 0.0), o, Point3::new(0.0, 1.0, 0.0)).unwrap() - PI / 2.0).abs() < 1e-12);
        assert!((angle_between(Point3::new(1.0, 0.0, 0.0), o, Point3::new(1.0, 1.0, 0.0)).unwrap() - PI / 4.0).abs() < 1e-12);
        assert!(angle_between(o, o, Point3::new(1.0, 0.0, 0.0)).is_err());
    }

    #[test]
    fn low_confidence_frames_are_skipped() {
        let mut samples = Vec::new();
        for k in 0..10 {
            let mut p = pose(&[(JointId::HandRight, [k as f64 * 0.1, 0.0, 1.0])]);
            if k == 4 || k == 5 {
                p.joints.get_mut(&JointId::HandRight).unwrap().1 = 0.1;
            }
            samples.push((k as f64 / 30.0, p));
        }
        let track = SkeletonTrack::new("p", samples).unwrap();
        let (h, warnings) = as_history(&track, BodyPartId::Hand(Side::Right), 0.3).unwrap();
        assert_eq!(h.samples().len(), 8);
        assert_eq!(warnings.len(), 2);
    }
}
