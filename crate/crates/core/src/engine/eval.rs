//! Per-frame truth of built-in predicates.

use crate::config::EngineConfig;
use crate::entities::{LineSegment, OrientedPoint, Point3, SpatialPrimitive};
use crate::error::Result;
use crate::geometry;
use crate::motion::{eval_frames, FrameView, TIME_EPS};
use crate::relations::lr::lr;
use crate::relations::qdc::{adjacency_threshold, qdc_of, size_of_pair};
use crate::relations::topology::{topology, TopologyLabel};
use crate::relations::relative_orientation;

use super::builtins::Builtin;

/// Maps evaluation errors meaning "relation undefined here" to `false`.
fn defined(r: Result<bool>) -> Result<bool> {
    match r {
        Err(e) if e.is_undefined() => Ok(false),
        other => other,
    }
}

/// Contiguous run of frames around `k` where every track is observed.
fn run_bounds(present: &[bool], k: usize) -> (usize, usize) {
    let mut lo = k;
    while lo > 0 && present[lo - 1] {
        lo -= 1;
    }
    let mut hi = k;
    while hi + 1 < present.len() && present[hi + 1] {
        hi += 1;
    }
    (lo, hi)
}

/// Frames within one window of frame `k`, clipped to `[lo, hi]`.
pub fn window_range(times: &[f64], k: usize, lo: usize, hi: usize, w: f64) -> (usize, usize) {
    let a = times.partition_point(|t| *t < times[k] - w - TIME_EPS).max(lo);
    let b = times.partition_point(|t| *t <= times[k] + w + TIME_EPS).saturating_sub(1).min(hi);
    (a, b.max(a))
}

/// Truth of `b` applied to `tracks` at every frame. Frames where an argument
/// is unobserved are false.
pub fn frame_truth(
    b: Builtin,
    times: &[f64],
    tracks: &[&[Option<SpatialPrimitive>]],
    cfg: &EngineConfig,
) -> Result<Vec<bool>> {
    let n = times.len();
    let present: Vec<bool> = (0..n).map(|k| tracks.iter().all(|t| t[k].is_some())).collect();
    let view = FrameView {
        times,
        tracks: tracks.to_vec(),
        cfg,
    };
    let mut out = vec![false; n];
    let mut k = 0;
    while k < n {
        if !present[k] {
            k += 1;
            continue;
        }
        let (rlo, rhi) = run_bounds(&present, k);
        for f in rlo..=rhi {
            let (lo, hi) = window_range(times, f, rlo, rhi, cfg.window);
            out[f] = match b {
                Builtin::Motion(m) => defined(eval_frames(m, &view, lo, hi))?,
                _ => {
                    let prims: Vec<&SpatialPrimitive> = tracks.iter().map(|t| t[f].as_ref().unwrap()).collect();
                    defined(static_truth(b, &prims, &view, f, lo, hi))?
                }
            };
        }
        k = rhi + 1;
    }
    Ok(out)
}

/// Heading of argument `arg` at frame `f`: intrinsic orientation, else its
/// displacement across the window.
fn facing(view: &FrameView<'_>, arg: usize, f: usize, lo: usize, hi: usize) -> Option<Point3> {
    let prim = view.tracks[arg][f].as_ref()?;
    if let Some(v) = prim.orientation() {
        return Some(v);
    }
    let a = view.tracks[arg][lo].as_ref()?.centroid();
    let b = view.tracks[arg][hi].as_ref()?.centroid();
    let d = b - a;
    let dt = view.times[hi] - view.times[lo];
    if dt <= 0.0 || d.norm() < view.cfg.v_min * dt || d.norm() <= view.cfg.geom_tolerance {
        return None;
    }
    d.normalized()
}

fn static_truth(
    b: Builtin,
    prims: &[&SpatialPrimitive],
    view: &FrameView<'_>,
    f: usize,
    lo: usize,
    hi: usize,
) -> Result<bool> {
    let cfg = view.cfg;
    let (x, y) = (prims[0], prims[1]);
    Ok(match b {
        Builtin::Topology(l) => topology(x, y, cfg.geom_tolerance)? == l,
        Builtin::Coarse(c) => topology(x, y, cfg.geom_tolerance)?.satisfies(c),
        Builtin::Inside => matches!(topology(x, y, cfg.geom_tolerance)?, TopologyLabel::Tpp | TopologyLabel::Ntpp),
        Builtin::Discrete => matches!(topology(x, y, cfg.geom_tolerance)?, TopologyLabel::Dc | TopologyLabel::Ec),
        Builtin::Touches => geometry::primitive_distance(x, y) <= adjacency_threshold(x, y, cfg),
        Builtin::Qdc(l) => qdc_of(x, y, cfg) == l,
        Builtin::Size(l) => size_of_pair(x, y, cfg)? == l,
        Builtin::Orientation(l) => {
            let (Some(va), Some(vb)) = (facing(view, 0, f, lo, hi), facing(view, 1, f, lo, hi)) else {
                return Ok(false);
            };
            let a = OrientedPoint { p: x.centroid(), v: va };
            let bp = OrientedPoint { p: y.centroid(), v: vb };
            relative_orientation(&a, &bp, cfg.facing_half_angle_deg, cfg.alignment_deg)?
                .labels()
                .contains(&l)
        }
        Builtin::Lr(l) => {
            let line = match y {
                SpatialPrimitive::Segment(s) => *s,
                _ => {
                    let Some(v) = facing(view, 1, f, lo, hi) else {
                        return Ok(false);
                    };
                    let c = y.centroid();
                    LineSegment::new(c, c + v)
                }
            };
            lr(&line, x.centroid(), cfg.geom_tolerance)? == l
        }
        Builtin::Motion(_) => unreachable!("motion predicates are windowed"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entities::Box3;
    use crate::motion::MotionPredicate;

    fn pt(x: f64) -> Option<SpatialPrimitive> {
        Some(SpatialPrimitive::Point(Point3::new(x, 0.0, 0.0)))
    }

    #[test]
    fn windows_clip_to_observed_runs() {
        let times: Vec<f64> = (0..10).map(|k| k as f64 * 0.1).collect();
        assert_eq!(window_range(&times, 5, 0, 9, 0.2), (3, 7));
        assert_eq!(window_range(&times, 1, 0, 9, 0.2), (0, 3));
        assert_eq!(window_range(&times, 8, 4, 8, 0.2), (6, 8));
    }

    #[test]
    fn touches_and_gaps() {
        let times: Vec<f64> = (0..4).map(|k| k as f64).collect();
        let cube = Some(SpatialPrimitive::Box(Box3::new(Point3::new(1.0, -0.5, -0.5), Point3::new(2.0, 0.5, 0.5))));
        let a = vec![pt(1.0), None, pt(0.0), pt(0.95)];
        let b = vec![cube.clone(); 4];
        let cfg = EngineConfig::default();
        let t = frame_truth(Builtin::Touches, &times, &[&a, &b], &cfg).unwrap();
        assert_eq!(t, vec![true, false, false, true]);
        let m = frame_truth(Builtin::Motion(MotionPredicate::Moving), &times, &[&a], &EngineConfig { window: 1.0, ..cfg }).unwrap();
        assert_eq!(m, vec![false, false, true, true]);
    }
}
