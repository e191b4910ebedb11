//! Seeded synthetic scenes with known ground truth.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::body::{JointId, SkeletonPose, SkeletonTrack};
use crate::entities::{Box3, DomainObject, Point3, SpaceTimeHistory, SpatialPrimitive};
use crate::error::{Error, Result};
use crate::scene::Scene;

pub const FIXTURES: &[&str] = &["pass_cup", "reach_only", "pick_put", "parallel_motion", "cyclic_stir"];

/// Fixtures are sampled at this rate.
pub const FIXTURE_RATE: f64 = 30.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixtureParams {
    pub seed: u64,
    /// Standard deviation of Gaussian noise added to every coordinate, metres.
    pub jitter: f64,
}

impl Default for FixtureParams {
    fn default() -> Self {
        Self { seed: 0, jitter: 0.0 }
    }
}

/// One expected interaction or fluent interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruthEntry {
    pub kind: String,
    pub name: String,
    pub args: Vec<String>,
    pub interval: [f64; 2],
}

#[derive(Debug, Clone)]
pub struct Fixture {
    pub scene: Scene,
    pub truth: Vec<TruthEntry>,
}

pub fn truth_to_string(truth: &[TruthEntry]) -> String {
    let mut s = serde_json::to_string_pretty(truth).expect("truth serialises");
    s.push('\n');
    s
}

pub fn parse_truth(text: &str) -> Result<Vec<TruthEntry>> {
    serde_json::from_str(text).map_err(|e| Error::InvalidScene(format!("malformed truth file: {e}")))
}

fn frame_time(k: usize) -> f64 {
    k as f64 / FIXTURE_RATE
}

fn entry(kind: &str, name: &str, args: &[&str], from: usize, to: usize) -> TruthEntry {
    TruthEntry {
        kind: kind.into(),
        name: name.into(),
        args: args.iter().map(|a| a.to_string()).collect(),
        interval: [frame_time(from), frame_time(to)],
    }
}

/// Linear interpolation through `(time, position)` keyframes, held
/// constant outside them.
pub fn keyframes(t: f64, keys: &[(f64, [f64; 3])]) -> Point3 {
    let p = |a: [f64; 3]| Point3::from_array(a);
    if t <= keys[0].0 {
        return p(keys[0].1);
    }
    for w in keys.windows(2) {
        let ((t0, a), (t1, b)) = (w[0], w[1]);
        if t <= t1 {
            return p(a).lerp(p(b), (t - t0) / (t1 - t0));
        }
    }
    p(keys[keys.len() - 1].1)
}

/// Accumulates per-frame samples and builds a scene, adding noise.
pub struct SceneBuilder {
    objects: Vec<DomainObject>,
    samples: BTreeMap<String, Vec<(f64, SpatialPrimitive)>>,
    poses: BTreeMap<String, Vec<(f64, SkeletonPose)>>,
    rng: ChaCha8Rng,
    noise: Option<Normal<f64>>,
    rate: f64,
}

impl SceneBuilder {
    pub fn new(params: FixtureParams) -> Self {
        Self::with_rate(params, FIXTURE_RATE)
    }

    pub fn with_rate(params: FixtureParams, rate: f64) -> Self {
        Self {
            rate,
            objects: Vec::new(),
            samples: BTreeMap::new(),
            poses: BTreeMap::new(),
            rng: ChaCha8Rng::seed_from_u64(params.seed),
            noise: (params.jitter > 0.0).then(|| Normal::new(0.0, params.jitter).expect("finite jitter")),
        }
    }

    pub fn declare(&mut self, id: &str, class: &str) {
        self.objects.push(DomainObject {
            id: id.into(),
            class: class.into(),
        });
    }

    fn jitter(&mut self) -> Point3 {
        match self.noise {
            Some(n) => Point3::new(n.sample(&mut self.rng), n.sample(&mut self.rng), n.sample(&mut self.rng)),
            None => Point3::ORIGIN,
        }
    }

    pub fn object(&mut self, id: &str, t: f64, prim: SpatialPrimitive) {
        let d = self.jitter();
        let prim = match prim {
            SpatialPrimitive::Point(p) => SpatialPrimitive::Point(p + d),
            other => other.translated(d),
        };
        self.samples.entry(id.into()).or_default().push((t, prim));
    }

    pub fn pose(&mut self, person: &str, t: f64, joints: Vec<(JointId, Point3)>) {
        let mut pose = SkeletonPose::default();
        for (j, p) in joints {
            let d = self.jitter();
            pose.joints.insert(j, (p + d, 1.0));
        }
        self.poses.entry(person.into()).or_default().push((t, pose));
    }

    pub fn build(self) -> Result<Scene> {
        let mut histories = BTreeMap::new();
        for (id, s) in self.samples {
            histories.insert(id.clone(), SpaceTimeHistory::new(id, s)?);
        }
        let mut skeletons = BTreeMap::new();
        for (id, s) in self.poses {
            skeletons.insert(id.clone(), SkeletonTrack::new(id, s)?);
        }
        Scene::new(self.rate, self.objects, histories, skeletons)
    }
}

/// Seated person whose torso lies in the plane `x = cx`, facing `+x` when
/// `facing` is 1 and `-x` when it is -1, with the right hand at `hand`.
pub fn seated_pose(cx: f64, facing: f64, hand: Point3) -> Vec<(JointId, Point3)> {
    use JointId::*;
    let s = facing;
    let p = |x: f64, y: f64, z: f64| Point3::new(x, y, z);
    let shoulder_r = p(cx, -s * 0.2, 1.1);
    let elbow_r = shoulder_r.lerp(hand, 0.5) + p(0.0, 0.0, -0.1);
    vec![
        (Head, p(cx, 0.0, 1.25)),
        (Neck, p(cx, 0.0, 1.15)),
        (SpineShoulder, p(cx, 0.0, 1.1)),
        (SpineMid, p(cx, 0.0, 0.8)),
        (SpineBase, p(cx, 0.0, 0.5)),
        (ShoulderLeft, p(cx, s * 0.2, 1.1)),
        (ShoulderRight, shoulder_r),
        (ElbowLeft, p(cx + s * 0.1, s * 0.25, 0.85)),
        (WristLeft, p(cx + s * 0.15, s * 0.25, 0.76)),
        (HandLeft, p(cx + s * 0.17, s * 0.25, 0.75)),
        (ElbowRight, elbow_r),
        (WristRight, elbow_r.lerp(hand, 0.85)),
        (HandRight, hand),
        (HipLeft, p(cx, s * 0.15, 0.5)),
        (HipRight, p(cx, -s * 0.15, 0.5)),
        (KneeLeft, p(cx + s * 0.4, s * 0.15, 0.5)),
        (KneeRight, p(cx + s * 0.4, -s * 0.15, 0.5)),
        (AnkleLeft, p(cx + s * 0.4, s * 0.15, 0.05)),
        (AnkleRight, p(cx + s * 0.4, -s * 0.15, 0.05)),
        (FootLeft, p(cx + s * 0.5, s * 0.15, 0.0)),
        (FootRight, p(cx + s * 0.5, -s * 0.15, 0.0)),
    ]
}

pub fn table_box() -> SpatialPrimitive {
    SpatialPrimitive::Box(Box3::new(Point3::new(0.0, -0.4, 0.65), Point3::new(1.2, 0.4, 0.70)))
}

pub fn cup_box(center: Point3) -> SpatialPrimitive {
    let h = Point3::new(0.04, 0.04, 0.06);
    SpatialPrimitive::Box(Box3::new(center - h, center + h))
}

type Keys = &'static [(f64, [f64; 3])];

/// Hand rest, reach for the cup on the table, then hold it.
const REACH: Keys = &[(0.3, [0.1, 0.0, 0.76]), (0.7, [0.39, 0.0, 0.76])];

fn pass_cup(params: FixtureParams) -> Result<Fixture> {
    const HAND1: Keys = &[
        (0.3, [0.1, 0.0, 0.76]),
        (0.7, [0.39, 0.0, 0.76]),
        (0.9, [0.39, 0.0, 0.76]),
        (1.1, [0.39, 0.0, 0.91]),
        (1.8, [0.79, 0.0, 0.91]),
        (2.4, [0.79, 0.0, 0.91]),
        (2.7, [0.49, 0.0, 0.91]),
    ];
    const CUP: Keys = &[(0.9, [0.4, 0.0, 0.76]), (1.1, [0.4, 0.0, 0.91]), (1.8, [0.8, 0.0, 0.91])];
    const HAND2: Keys = &[(1.1, [1.1, 0.0, 0.91]), (1.8, [0.81, 0.0, 0.91])];
    let mut b = SceneBuilder::new(params);
    for (id, class) in [("cup1", "cup"), ("person1", "person"), ("person2", "person"), ("table1", "table")] {
        b.declare(id, class);
    }
    for k in 0..90 {
        let t = frame_time(k);
        b.object("table1", t, table_box());
        b.object("cup1", t, cup_box(keyframes(t, CUP)));
        b.pose("person1", t, seated_pose(-0.05, 1.0, keyframes(t, HAND1)));
        b.pose("person2", t, seated_pose(1.25, -1.0, keyframes(t, HAND2)));
    }
    // Frame indices follow from the keyframes: the hand enters the cup's
    // adjacency band at frame 20, the cup leaves the table's after frame
    // 28, the second hand arrives at frame 53 and the first leaves after 73.
    let truth = vec![
        entry("interaction", "reach_for", &["person1", "cup1"], 10, 73),
        entry("interaction", "pick_up", &["person1", "cup1"], 20, 28),
        entry("interaction", "move_towards", &["person1", "cup1", "person2"], 34, 53),
        entry("interaction", "grasp", &["person2", "cup1"], 53, 73),
        entry("interaction", "release", &["person1", "cup1"], 74, 80),
    ];
    Ok(Fixture {
        scene: b.build()?,
        truth,
    })
}

fn reach_only(params: FixtureParams) -> Result<Fixture> {
    let mut b = SceneBuilder::new(params);
    for (id, class) in [("cup1", "cup"), ("person1", "person"), ("table1", "table")] {
        b.declare(id, class);
    }
    for k in 0..60 {
        let t = frame_time(k);
        b.object("table1", t, table_box());
        b.object("cup1", t, cup_box(Point3::new(0.4, 0.0, 0.76)));
        b.pose("person1", t, seated_pose(-0.05, 1.0, keyframes(t, REACH)));
    }
    Ok(Fixture {
        scene: b.build()?,
        truth: vec![entry("interaction", "reach_for", &["person1", "cup1"], 10, 59)],
    })
}

fn pick_put(params: FixtureParams) -> Result<Fixture> {
    const HAND: Keys = &[
        (0.3, [0.1, 0.0, 0.76]),
        (0.7, [0.39, 0.0, 0.76]),
        (0.9, [0.39, 0.0, 0.76]),
        (1.1, [0.39, 0.0, 0.91]),
        (1.6, [0.39, 0.3, 0.91]),
        (1.8, [0.39, 0.3, 0.76]),
        (2.0, [0.39, 0.3, 0.76]),
        (2.3, [0.09, 0.3, 0.76]),
    ];
    const CUP: Keys = &[
        (0.9, [0.4, 0.0, 0.76]),
        (1.1, [0.4, 0.0, 0.91]),
        (1.6, [0.4, 0.3, 0.91]),
        (1.8, [0.4, 0.3, 0.76]),
    ];
    let mut b = SceneBuilder::new(params);
    for (id, class) in [("cup1", "cup"), ("person1", "person"), ("table1", "table")] {
        b.declare(id, class);
    }
    for k in 0..78 {
        let t = frame_time(k);
        b.object("table1", t, table_box());
        b.object("cup1", t, cup_box(keyframes(t, CUP)));
        b.pose("person1", t, seated_pose(-0.05, 1.0, keyframes(t, HAND)));
    }
    Ok(Fixture {
        scene: b.build()?,
        truth: vec![
            entry("interaction", "reach_for", &["person1", "cup1"], 10, 61),
            entry("interaction", "pick_up", &["person1", "cup1"], 20, 28),
            entry("interaction", "put_down", &["person1", "cup1"], 53, 61),
        ],
    })
}

fn parallel_motion(params: FixtureParams) -> Result<Fixture> {
    const A: Keys = &[(0.5, [0.0, 0.0, 0.0]), (2.5, [0.6, 0.0, 0.0])];
    const B: Keys = &[(0.5, [0.0, 0.5, 0.0]), (2.5, [0.6, 0.5, 0.0])];
    let mut b = SceneBuilder::new(params);
    b.declare("cart1", "cart");
    b.declare("cart2", "cart");
    for k in 0..90 {
        let t = frame_time(k);
        b.object("cart1", t, SpatialPrimitive::Point(keyframes(t, A)));
        b.object("cart2", t, SpatialPrimitive::Point(keyframes(t, B)));
    }
    Ok(Fixture {
        scene: b.build()?,
        truth: vec![entry("fluent", "parallel", &["cart1", "cart2"], 15, 75)],
    })
}

fn cyclic_stir(params: FixtureParams) -> Result<Fixture> {
    let (r, period) = (0.03, 0.4);
    let centre = Point3::new(0.4, 0.0, 0.8);
    let mut b = SceneBuilder::new(params);
    b.declare("cup1", "cup");
    b.declare("spoon1", "spoon");
    for k in 0..108 {
        let t = frame_time(k);
        // at rest on the rim before and after stirring over [1.0, 2.6]
        let phase = 2.0 * std::f64::consts::PI * (t.clamp(1.0, 2.6) - 1.0) / period;
        let tip = centre + Point3::new(r * phase.cos(), r * phase.sin(), 0.0);
        b.object("cup1", t, cup_box(Point3::new(0.4, 0.0, 0.76)));
        b.object("spoon1", t, SpatialPrimitive::Point(tip));
    }
    // a window spans one period, so full loops fit between 1.2 and 2.4
    Ok(Fixture {
        scene: b.build()?,
        truth: vec![entry("fluent", "cyclic", &["spoon1"], 36, 72)],
    })
}

pub fn fixture(name: &str, params: FixtureParams) -> Result<Fixture> {
    match name {
        "pass_cup" => pass_cup(params),
        "reach_only" => reach_only(params),
        "pick_put" => pick_put(params),
        "parallel_motion" => parallel_motion(params),
        "cyclic_stir" => cyclic_stir(params),
        _ => Err(Error::InvalidScene(format!(
            "unknown fixture `{name}` (expected one of {})",
            FIXTURES.join(", ")
        ))),
    }
}
