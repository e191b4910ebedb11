use std::borrow::Cow;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::body::{self, BodyPartId, SkeletonPose, SkeletonTrack};
use crate::entities::{DomainObject, SpaceTimeHistory};
use crate::error::{Error, Result};

/// Something a predicate can be applied to: a tracked object or a body part
/// of a tracked person.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EntityRef {
    Object(String),
    BodyPart { part: BodyPartId, person: String },
}

impl EntityRef {
    pub fn object(id: impl Into<String>) -> Self {
        EntityRef::Object(id.into())
    }

    pub fn body_part(part: BodyPartId, person: impl Into<String>) -> Self {
        EntityRef::BodyPart {
            part,
            person: person.into(),
        }
    }
}

impl fmt::Display for EntityRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EntityRef::Object(id) => f.write_str(id),
            EntityRef::BodyPart { part, person } => write!(f, "body_part({part},{person})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub frame_rate: f64,
    frame_times: Vec<f64>,
    objects: Vec<DomainObject>,
    histories: BTreeMap<String, SpaceTimeHistory>,
    skeletons: BTreeMap<String, SkeletonTrack>,
}

impl Scene {
    /// Frame times are the union of all history and skeleton timestamps.
    pub fn new(
        frame_rate: f64,
        objects: Vec<DomainObject>,
        histories: BTreeMap<String, SpaceTimeHistory>,
        skeletons: BTreeMap<String, SkeletonTrack>,
    ) -> Result<Self> {
        if !(frame_rate.is_finite() && frame_rate > 0.0) {
            return Err(Error::InvalidScene(format!("frame rate must be positive, got {frame_rate}")));
        }
        let mut ids = BTreeSet::new();
        for o in &objects {
            if !ids.insert(o.id.as_str()) {
                return Err(Error::InvalidScene(format!("duplicate object id `{}`", o.id)));
            }
        }
        for key in histories.keys().chain(skeletons.keys()) {
            if !ids.contains(key.as_str()) {
                return Err(Error::InvalidScene(format!("track for undeclared object `{key}`")));
            }
        }
        for (key, h) in &histories {
            if h.object() != key {
                return Err(Error::InvalidScene(format!("history keyed `{key}` belongs to `{}`", h.object())));
            }
        }
        let mut times: Vec<f64> = histories
            .values()
            .flat_map(|h| h.samples().iter().map(|(t, _)| *t))
            .chain(skeletons.values().flat_map(|s| s.samples().iter().map(|(t, _)| *t)))
            .collect();
        times.sort_by(f64::total_cmp);
        times.dedup();
        Ok(Self {
            frame_rate,
            frame_times: times,
            objects,
            histories,
            skeletons,
        })
    }

    pub fn frame_times(&self) -> &[f64] {
        &self.frame_times
    }

    pub fn objects(&self) -> &[DomainObject] {
        &self.objects
    }

    pub fn object(&self, id: &str) -> Option<&DomainObject> {
        self.objects.iter().find(|o| o.id == id)
    }

    pub fn histories(&self) -> &BTreeMap<String, SpaceTimeHistory> {
        &self.histories
    }

    pub fn skeletons(&self) -> &BTreeMap<String, SkeletonTrack> {
        &self.skeletons
    }

    pub fn history(&self, id: &str) -> Result<&SpaceTimeHistory> {
        self.histories.get(id).ok_or_else(|| Error::UnknownObject(id.to_string()))
    }

    pub fn skeleton(&self, person: &str) -> Result<&SkeletonTrack> {
        self.skeletons.get(person).ok_or_else(|| Error::UnknownObject(person.to_string()))
    }

    /// History of an object or derived history of a body part.
    pub fn entity_history(&self, e: &EntityRef, min_confidence: f64) -> Result<Cow<'_, SpaceTimeHistory>> {
        match e {
            EntityRef::Object(id) => self.history(id).map(Cow::Borrowed),
            EntityRef::BodyPart { part, person } => {
                let track = self.skeleton(person)?;
                body::as_history(track, *part, min_confidence).map(|(h, _)| Cow::Owned(h))
            }
        }
    }

    /// Scene mirrored in time over its own span: `t ↦ t0 + t1 − t`.
    pub fn time_reversed(&self) -> Scene {
        let (t0, t1) = match (self.frame_times.first(), self.frame_times.last()) {
            (Some(a), Some(b)) => (*a, *b),
            _ => return self.clone(),
        };
        let histories = self
            .histories
            .iter()
            .map(|(k, h)| (k.clone(), h.time_reversed(t0, t1)))
            .collect();
        let skeletons = self
            .skeletons
            .iter()
            .map(|(k, s)| {
                let samples: Vec<(f64, SkeletonPose)> = s
                    .samples()
                    .iter()
                    .rev()
                    .map(|(t, p)| (t0 + t1 - t, p.clone()))
                    .collect();
                (k.clone(), SkeletonTrack::new(k.clone(), samples).expect("mirrored track stays monotone"))
            })
            .collect();
        Scene::new(self.frame_rate, self.objects.clone(), histories, skeletons)
            .expect("mirroring keeps scene invariants")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entities::{Point3, SpatialPrimitive};

    fn point_history(id: &str, pts: &[(f64, [f64; 3])]) -> SpaceTimeHistory {
        let samples = pts
            .iter()
            .map(|(t, p)| (*t, SpatialPrimitive::Point(Point3::from_array(*p))))
            .collect();
        SpaceTimeHistory::new(id, samples).unwrap()
    }

    fn obj(id: &str) -> DomainObject {
        DomainObject {
            id: id.into(),
            class: "thing".into(),
        }
    }

    #[test]
    fn rejects_undeclared_and_duplicate() {
        let h = point_history("a", &[(0.0, [0.0; 3]), (1.0, [1.0, 0.0, 0.0])]);
        let histories = BTreeMap::from([("a".to_string(), h)]);
        assert!(Scene::new(30.0, vec![], histories.clone(), BTreeMap::new()).is_err());
        assert!(Scene::new(30.0, vec![obj("a"), obj("a")], histories.clone(), BTreeMap::new()).is_err());
        assert!(Scene::new(30.0, vec![obj("a")], histories, BTreeMap::new()).is_ok());
    }

    #[test]
    fn reversal_mirrors_positions() {
        let h = point_history("a", &[(0.0, [0.0; 3]), (1.0, [1.0, 0.0, 0.0]), (3.0, [3.0, 0.0, 0.0])]);
        let scene = Scene::new(1.0, vec![obj("a")], BTreeMap::from([("a".to_string(), h)]), BTreeMap::new()).unwrap();
        let rev = scene.time_reversed();
        assert_eq!(rev.frame_times(), &[0.0, 2.0, 3.0]);
        let p = rev.history("a").unwrap().sample_at(0.5).unwrap();
        assert_eq!(p, SpatialPrimitive::Point(Point3::new(2.5, 0.0, 0.0)));
        assert_eq!(rev.time_reversed(), scene);
    }
}
