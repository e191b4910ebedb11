//! Motion predicates over space-time histories, evaluated on the scene's
//! frames inside an interval.

use crate::config::EngineConfig;
use crate::entities::{LineSegment, Point3, SpatialPrimitive, TimeInterval};
use crate::error::{Error, Result};
use crate::geometry;
use crate::metrics::{self, size_of};
use crate::relations::lr::{lr, LrLabel};
use crate::relations::qdc::{adjacency_threshold, reference_length};
use crate::relations::topology::{topology, TopologyLabel};
use crate::scene::{EntityRef, Scene};

/// Slack when comparing timestamps, seconds.
pub const TIME_EPS: f64 = 1e-9;

labels!(MotionPredicate {
    Moving => "moving",
    Stationary => "stationary",
    Growing => "growing",
    Shrinking => "shrinking",
    Approaching => "approaching",
    MovingAway => "moving_away",
    Parallel => "parallel",
    Merging => "merging",
    Splitting => "splitting",
    MovingInto => "moving_into",
    MovingOut => "moving_out",
    Attached => "attached",
    Curved => "curved",
    Cyclic => "cyclic",
    PassingInFront => "passing_in_front",
    PassingBehind => "passing_behind",
    RotatingCw => "rotating_cw",
    RotatingCcw => "rotating_ccw",
});

impl MotionPredicate {
    pub fn arity(self) -> usize {
        use MotionPredicate::*;
        match self {
            Moving | Stationary | Growing | Shrinking | Curved | Cyclic | RotatingCw | RotatingCcw => 1,
            _ => 2,
        }
    }
}

/// Primitive of an entity at each scene frame; `None` where it is not
/// observed.
pub type Track = Vec<Option<SpatialPrimitive>>;

pub fn sample_track(scene: &Scene, e: &EntityRef, cfg: &EngineConfig) -> Result<Track> {
    let h = scene.entity_history(e, cfg.min_confidence)?;
    Ok(scene
        .frame_times()
        .iter()
        .map(|t| if h.covers(*t) { h.sample_at(*t).ok() } else { None })
        .collect())
}

/// Half-width in frames of the smoothing window around a frame.
pub fn window_frames(scene_rate: f64, cfg: &EngineConfig) -> usize {
    ((cfg.window * scene_rate - TIME_EPS).ceil()).max(1.0) as usize
}

/// Frame view handed to predicate evaluation.
pub struct FrameView<'a> {
    pub times: &'a [f64],
    pub tracks: Vec<&'a [Option<SpatialPrimitive>]>,
    pub cfg: &'a EngineConfig,
}

impl<'a> FrameView<'a> {
    fn prim(&self, arg: usize, k: usize) -> Result<&'a SpatialPrimitive> {
        self.tracks[arg][k].as_ref().ok_or_else(|| Error::OutOfRange {
            t: self.times[k],
            start: self.times[0],
            end: self.times[self.times.len() - 1],
        })
    }

    fn centroid(&self, arg: usize, k: usize) -> Result<Point3> {
        Ok(self.prim(arg, k)?.centroid())
    }

    fn distance(&self, k: usize) -> Result<f64> {
        Ok(geometry::primitive_distance(self.prim(0, k)?, self.prim(1, k)?))
    }

    /// First frame at least one window after `i`, if any up to `hi`.
    fn partner(&self, i: usize, hi: usize) -> Option<usize> {
        let target = self.times[i] + self.cfg.window - TIME_EPS;
        let j = i + self.times[i..=hi].partition_point(|t| *t < target);
        (j <= hi).then_some(j)
    }

    /// Window-spaced pairs `(i, first partner of i)` inside `[lo, hi]`.
    fn window_pairs(&self, lo: usize, hi: usize) -> Vec<(usize, usize)> {
        (lo..=hi).filter_map(|i| self.partner(i, hi).map(|j| (i, j))).collect()
    }

    /// Window pairs, or the endpoints when the range is shorter than a window.
    fn pairs_or_endpoints(&self, lo: usize, hi: usize) -> Vec<(usize, usize)> {
        let pairs = self.window_pairs(lo, hi);
        if pairs.is_empty() && hi > lo {
            vec![(lo, hi)]
        } else {
            pairs
        }
    }

    fn velocity(&self, arg: usize, i: usize, j: usize) -> Result<f64> {
        Ok(self.centroid(arg, j)?.distance(self.centroid(arg, i)?) / (self.times[j] - self.times[i]))
    }
}

/// Truth of `pred` over frames `lo..=hi`.
pub fn eval_frames(pred: MotionPredicate, v: &FrameView<'_>, lo: usize, hi: usize) -> Result<bool> {
    use MotionPredicate::*;
    if v.tracks.len() != pred.arity() {
        return Err(Error::UnknownPredicate {
            name: pred.name().into(),
            arity: v.tracks.len(),
        });
    }
    if hi >= v.times.len() || lo > hi {
        return Err(Error::InvalidInterval {
            start: lo as f64,
            end: hi as f64,
        });
    }
    for arg in 0..v.tracks.len() {
        for k in lo..=hi {
            v.prim(arg, k)?;
        }
    }
    match pred {
        Moving => moving(v, 0, lo, hi),
        Stationary => stationary(v, 0, lo, hi),
        Growing => size_trend(v, lo, hi, true),
        Shrinking => size_trend(v, lo, hi, false),
        Approaching => distance_trend(v, lo, hi, true),
        MovingAway => distance_trend(v, lo, hi, false),
        Parallel => parallel(v, lo, hi),
        Merging => Ok(!connected(v, lo)? && connected(v, hi)?),
        Splitting => Ok(connected(v, lo)? && !connected(v, hi)?),
        MovingInto => containment_change(v, lo, hi, true),
        MovingOut => containment_change(v, lo, hi, false),
        Attached => attached(v, lo, hi),
        Curved => Ok(heading_change(v, lo, hi)?.curved),
        Cyclic => Ok(heading_change(v, lo, hi)?.cyclic),
        PassingInFront => passing(v, lo, hi, true),
        PassingBehind => passing(v, lo, hi, false),
        RotatingCcw => Ok(yaw_change(v, lo, hi)? > v.cfg.rotation_min_deg.to_radians()),
        RotatingCw => Ok(yaw_change(v, lo, hi)? < -v.cfg.rotation_min_deg.to_radians()),
    }
}

fn moving(v: &FrameView<'_>, arg: usize, lo: usize, hi: usize) -> Result<bool> {
    let pairs = v.pairs_or_endpoints(lo, hi);
    if pairs.is_empty() {
        return Ok(false);
    }
    for (i, j) in pairs {
        if v.velocity(arg, i, j)? < v.cfg.v_min {
            return Ok(false);
        }
    }
    Ok(true)
}

fn stationary(v: &FrameView<'_>, arg: usize, lo: usize, hi: usize) -> Result<bool> {
    let pairs = v.pairs_or_endpoints(lo, hi);
    if pairs.is_empty() {
        return Ok(false);
    }
    for (i, j) in pairs {
        if v.velocity(arg, i, j)? >= v.cfg.v_min {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every window-spaced pair decreases (`towards`) or increases by more than
/// the noise margin.
fn distance_trend(v: &FrameView<'_>, lo: usize, hi: usize, towards: bool) -> Result<bool> {
    let d: Vec<f64> = (lo..=hi).map(|k| v.distance(k)).collect::<Result<_>>()?;
    let sign = if towards { 1.0 } else { -1.0 };
    // largest signed distance from each index onwards
    let mut suffix = vec![f64::NEG_INFINITY; d.len() + 1];
    for k in (0..d.len()).rev() {
        suffix[k] = suffix[k + 1].max(sign * d[k]);
    }
    let mut any = false;
    for i in lo..=hi {
        let Some(j) = v.partner(i, hi) else { break };
        any = true;
        // towards: d_i > max_{k >= j} d_k + margin
        if (sign * d[i - lo] - suffix[j - lo]).partial_cmp(&v.cfg.trend_noise_margin) != Some(std::cmp::Ordering::Greater) {
            return Ok(false);
        }
    }
    Ok(any)
}

fn size_trend(v: &FrameView<'_>, lo: usize, hi: usize, grow: bool) -> Result<bool> {
    let s: Vec<f64> = (lo..=hi)
        .map(|k| Ok(size_of(v.prim(0, k)?).value))
        .collect::<Result<_>>()?;
    let pairs = v.pairs_or_endpoints(lo, hi);
    if pairs.is_empty() {
        return Ok(false);
    }
    let ordered = |a: f64, b: f64| if grow { b > a } else { a > b };
    if !pairs.iter().all(|(i, j)| ordered(s[i - lo], s[j - lo])) {
        return Ok(false);
    }
    let (first, last) = (s[0], s[s.len() - 1]);
    let (small, large) = if grow { (first, last) } else { (last, first) };
    // change must exceed the margin relative to the larger size
    let margin = v.cfg.growth_ratio - 1.0;
    Ok(large - small > margin * large + 1e-12)
}

fn heading(p: Point3, q: Point3) -> f64 {
    (q.y - p.y).atan2(q.x - p.x)
}

fn parallel(v: &FrameView<'_>, lo: usize, hi: usize) -> Result<bool> {
    if !moving(v, 0, lo, hi)? || !moving(v, 1, lo, hi)? {
        return Ok(false);
    }
    let limit = v.cfg.parallel_angle_deg.to_radians();
    for (i, j) in v.pairs_or_endpoints(lo, hi) {
        let (a0, a1) = (v.centroid(0, i)?, v.centroid(0, j)?);
        let (b0, b1) = (v.centroid(1, i)?, v.centroid(1, j)?);
        let ground = |p: Point3, q: Point3| (q.x - p.x).hypot(q.y - p.y) > v.cfg.geom_tolerance;
        if !ground(a0, a1) || !ground(b0, b1) {
            return Ok(false);
        }
        if geometry::wrap_angle(heading(a0, a1) - heading(b0, b1)).abs() >= limit {
            return Ok(false);
        }
    }
    let d: Vec<f64> = (lo..=hi).map(|k| v.distance(k)).collect::<Result<_>>()?;
    let mean = d.iter().sum::<f64>() / d.len() as f64;
    let spread = d.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - d.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(spread <= v.cfg.parallel_distance_variation * mean)
}

fn connected(v: &FrameView<'_>, k: usize) -> Result<bool> {
    Ok(v.distance(k)? <= v.cfg.geom_tolerance)
}

fn containment_change(v: &FrameView<'_>, lo: usize, hi: usize, into: bool) -> Result<bool> {
    let label = |k| topology(v.prim(0, k)?, v.prim(1, k)?, v.cfg.geom_tolerance);
    let outside = |l: TopologyLabel| matches!(l, TopologyLabel::Dc | TopologyLabel::Ec);
    let inside = |l: TopologyLabel| matches!(l, TopologyLabel::Tpp | TopologyLabel::Ntpp);
    let (first, last) = (label(lo)?, label(hi)?);
    Ok(if into {
        outside(first) && inside(last)
    } else {
        inside(first) && outside(last)
    })
}

fn attached(v: &FrameView<'_>, lo: usize, hi: usize) -> Result<bool> {
    if hi == lo {
        return Ok(false);
    }
    for k in lo..=hi {
        let (a, b) = (v.prim(0, k)?, v.prim(1, k)?);
        if geometry::primitive_distance(a, b) > adjacency_threshold(a, b, v.cfg) {
            return Ok(false);
        }
    }
    let offset = |k| -> Result<Point3> { Ok(v.centroid(0, k)? - v.centroid(1, k)?) };
    let drift = (offset(hi)? - offset(lo)?).norm();
    Ok(drift < v.cfg.v_min * (v.times[hi] - v.times[lo]))
}

struct HeadingChange {
    curved: bool,
    cyclic: bool,
}

fn heading_change(v: &FrameView<'_>, lo: usize, hi: usize) -> Result<HeadingChange> {
    let pts: Vec<Point3> = (lo..=hi).map(|k| v.centroid(0, k)).collect::<Result<_>>()?;
    let mut headings = Vec::new();
    for k in 1..pts.len() {
        let dt = v.times[lo + k] - v.times[lo + k - 1];
        let step = (pts[k].x - pts[k - 1].x).hypot(pts[k].y - pts[k - 1].y);
        // steps slower than movement speed carry no heading
        if step > v.cfg.geom_tolerance.max(v.cfg.v_min * dt) {
            headings.push(heading(pts[k - 1], pts[k]));
        }
    }
    let mut total: f64 = headings.windows(2).map(|w| geometry::wrap_angle(w[1] - w[0])).sum();
    let prim = v.prim(0, lo)?;
    let scale = reference_length(prim, prim, v.cfg);
    let gap = (pts[pts.len() - 1].x - pts[0].x).hypot(pts[pts.len() - 1].y - pts[0].y);
    let closed = headings.len() >= 2 && gap <= v.cfg.qdc_adjacent_factor * scale;
    if closed {
        total += geometry::wrap_angle(headings[0] - headings[headings.len() - 1]);
    }
    let full_turn = std::f64::consts::TAU - v.cfg.cyclic_margin_deg.to_radians();
    Ok(HeadingChange {
        curved: !closed && total.abs() > v.cfg.curved_min_turn_deg.to_radians(),
        cyclic: closed && total.abs() >= full_turn,
    })
}

/// Facing of `arg` at frame `k`: intrinsic orientation, else travel
/// direction through the frame.
fn facing(v: &FrameView<'_>, arg: usize, k: usize, lo: usize, hi: usize) -> Result<Point3> {
    if let Some(o) = v.prim(arg, k)?.orientation() {
        return Ok(o);
    }
    let (a, b) = if k < hi { (k, k + 1) } else { (k.saturating_sub(1).max(lo), k) };
    let d = v.centroid(arg, b)? - v.centroid(arg, a)?;
    d.normalized().ok_or(Error::FacingUndefined)
}

fn passing(v: &FrameView<'_>, lo: usize, hi: usize, in_front: bool) -> Result<bool> {
    if hi == lo {
        return Ok(false);
    }
    let side = |k: usize| -> Result<LrLabel> {
        let f = facing(v, 1, k, lo, hi)?;
        let base = v.centroid(1, k)?;
        lr(&LineSegment::new(base, base + f), v.centroid(0, k)?, v.cfg.geom_tolerance)
    };
    let (first, last) = (side(lo)?, side(hi)?);
    let flipped = matches!(
        (first, last),
        (LrLabel::Left, LrLabel::Right) | (LrLabel::Right, LrLabel::Left)
    );
    if !flipped {
        return Ok(false);
    }
    let mut closest = (f64::INFINITY, lo);
    for k in lo..=hi {
        let (a, b) = (v.prim(0, k)?, v.prim(1, k)?);
        let d = geometry::primitive_distance(a, b);
        if d >= v.cfg.qdc_near_factor * reference_length(a, b, v.cfg) {
            return Ok(false);
        }
        if d < closest.0 {
            closest = (d, k);
        }
    }
    let k = closest.1;
    let f = facing(v, 1, k, lo, hi)?;
    let ahead = (v.centroid(0, k)? - v.centroid(1, k)?).dot(f);
    Ok(if in_front { ahead > 0.0 } else { ahead < 0.0 })
}

fn yaw_change(v: &FrameView<'_>, lo: usize, hi: usize) -> Result<f64> {
    let mut total = 0.0;
    let mut prev: Option<f64> = None;
    for k in lo..=hi {
        let o = v.prim(0, k)?.orientation().ok_or_else(|| Error::OrientationUndefined(format!("frame {k}")))?;
        if o.x.hypot(o.y) <= v.cfg.geom_tolerance {
            return Err(Error::OrientationUndefined(format!("frame {k}")));
        }
        let yaw = o.y.atan2(o.x);
        if let Some(p) = prev {
            total += geometry::wrap_angle(yaw - p);
        }
        prev = Some(yaw);
    }
    Ok(total)
}

/// Frame index range covered by `delta`.
pub fn frame_range(times: &[f64], delta: &TimeInterval) -> Option<(usize, usize)> {
    let lo = times.partition_point(|t| *t < delta.start - TIME_EPS);
    let hi = times.partition_point(|t| *t <= delta.end + TIME_EPS);
    (hi > lo).then(|| (lo, hi - 1))
}

/// Truth of `pred(args)` over `delta`, sampled at the scene's frames.
pub fn eval(
    pred: MotionPredicate,
    args: &[EntityRef],
    delta: &TimeInterval,
    scene: &Scene,
    cfg: &EngineConfig,
) -> Result<bool> {
    if args.len() != pred.arity() {
        return Err(Error::UnknownPredicate {
            name: pred.name().into(),
            arity: args.len(),
        });
    }
    let mut tracks = Vec::new();
    for a in args {
        let h = scene.entity_history(a, cfg.min_confidence)?;
        for t in [delta.start, delta.end] {
            if !h.covers(t) {
                return Err(Error::OutOfRange {
                    t,
                    start: h.first_time(),
                    end: h.last_time(),
                });
            }
        }
        tracks.push(sample_track(scene, a, cfg)?);
    }
    let (lo, hi) = frame_range(scene.frame_times(), delta).ok_or(Error::InvalidInterval {
        start: delta.start,
        end: delta.end,
    })?;
    let view = FrameView {
        times: scene.frame_times(),
        tracks: tracks.iter().map(|t| t.as_slice()).collect(),
        cfg,
    };
    eval_frames(pred, &view, lo, hi)
}

/// Ground-plane heading of an entity's travel over `delta`, radians.
pub fn travel_direction(scene: &Scene, e: &str, delta: &TimeInterval) -> Result<f64> {
    Ok(metrics::movement_direction(scene, e, delta.start, delta.end)?.value)
}
