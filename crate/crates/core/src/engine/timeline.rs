use std::fmt;

use serde::Serialize;

use crate::config::EngineConfig;
use crate::entities::TimeInterval;
use crate::scene::EntityRef;

/// A predicate applied to ground arguments.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FluentAtom {
    pub predicate: String,
    pub args: Vec<EntityRef>,
}

impl FluentAtom {
    pub fn new(predicate: impl Into<String>, args: Vec<EntityRef>) -> Self {
        Self {
            predicate: predicate.into(),
            args,
        }
    }
}

impl fmt::Display for FluentAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.predicate)?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

/// Maximal intervals on which an atom holds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FluentTimeline {
    pub intervals: Vec<TimeInterval>,
    /// Gaps bridged by gap merging; frames in them were false.
    pub bridged: Vec<TimeInterval>,
}

impl FluentTimeline {
    pub fn empty() -> Self {
        Self {
            intervals: Vec::new(),
            bridged: Vec::new(),
        }
    }

    pub fn holds_in(&self, delta: &TimeInterval) -> bool {
        self.intervals.iter().any(|i| i.contains(delta))
    }

    pub fn holds_at(&self, t: f64) -> bool {
        self.intervals.iter().any(|i| i.contains_time(t))
    }
}

/// Runs of true frames become intervals; gaps up to `gap_merge` are bridged
/// unless `merge_gaps` is off; intervals shorter than `min_duration` go.
pub fn from_frames(times: &[f64], truth: &[bool], merge_gaps: bool, cfg: &EngineConfig) -> FluentTimeline {
    let mut runs: Vec<(f64, f64)> = Vec::new();
    let mut k = 0;
    while k < truth.len() {
        if truth[k] {
            let a = k;
            while k + 1 < truth.len() && truth[k + 1] {
                k += 1;
            }
            runs.push((times[a], times[k]));
        }
        k += 1;
    }
    let mut merged: Vec<(f64, f64)> = Vec::new();
    let mut bridged = Vec::new();
    for (a, b) in runs {
        match merged.last_mut() {
            Some(last) if merge_gaps && a - last.1 <= cfg.gap_merge + 1e-9 => {
                bridged.push(TimeInterval { start: last.1, end: a });
                last.1 = b;
            }
            _ => merged.push((a, b)),
        }
    }
    finish(merged, bridged, cfg)
}

/// Union of possibly overlapping intervals, filtered by `min_duration`.
pub fn from_intervals(mut ivs: Vec<TimeInterval>, cfg: &EngineConfig) -> FluentTimeline {
    ivs.sort_by(|a, b| a.start.total_cmp(&b.start).then(a.end.total_cmp(&b.end)));
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for iv in ivs {
        match merged.last_mut() {
            Some(last) if iv.start <= last.1 + 1e-9 => last.1 = last.1.max(iv.end),
            _ => merged.push((iv.start, iv.end)),
        }
    }
    finish(merged, Vec::new(), cfg)
}

fn finish(merged: Vec<(f64, f64)>, bridged: Vec<TimeInterval>, cfg: &EngineConfig) -> FluentTimeline {
    let intervals: Vec<TimeInterval> = merged
        .into_iter()
        .filter(|(a, b)| b > a && b - a >= cfg.min_duration - 1e-9)
        .map(|(a, b)| TimeInterval { start: a, end: b })
        .collect();
    let bridged = bridged
        .into_iter()
        .filter(|g| intervals.iter().any(|i| i.contains(g)))
        .collect();
    FluentTimeline { intervals, bridged }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frames(n: usize, on: &[std::ops::RangeInclusive<usize>]) -> (Vec<f64>, Vec<bool>) {
        let times = (0..n).map(|k| k as f64 / 30.0).collect();
        let truth = (0..n).map(|k| on.iter().any(|r| r.contains(&k))).collect();
        (times, truth)
    }

    #[test]
    fn gap_merge_and_min_duration() {
        let cfg = EngineConfig::default();
        let (t, v) = frames(30, &[3..=10, 12..=20]);
        let tl = from_frames(&t, &v, true, &cfg);
        assert_eq!(tl.intervals.len(), 1);
        assert!((tl.intervals[0].start - 0.1).abs() < 1e-12);
        assert!((tl.intervals[0].end - 20.0 / 30.0).abs() < 1e-12);
        assert_eq!(tl.bridged.len(), 1);
        assert_eq!(from_frames(&t, &v, false, &cfg).intervals.len(), 2);
        // two frames is under the minimum duration
        let (t, v) = frames(30, &[3..=4, 20..=29]);
        assert_eq!(from_frames(&t, &v, false, &cfg).intervals.len(), 1);
    }

    #[test]
    fn trivial_timelines() {
        let cfg = EngineConfig::default();
        let (t, v) = frames(10, &[0..=9]);
        assert_eq!(from_frames(&t, &v, true, &cfg).intervals, vec![TimeInterval { start: 0.0, end: 0.3 }]);
        let (t, v) = frames(10, &[]);
        assert!(from_frames(&t, &v, true, &cfg).intervals.is_empty());
    }

    #[test]
    fn holds_in_boundaries() {
        let tl = FluentTimeline {
            intervals: vec![TimeInterval { start: 0.0, end: 1.0 }, TimeInterval { start: 2.0, end: 3.0 }],
            bridged: vec![],
        };
        assert!(tl.holds_in(&TimeInterval { start: 0.2, end: 0.8 }));
        assert!(tl.holds_in(&TimeInterval { start: 0.0, end: 1.0 }));
        assert!(!tl.holds_in(&TimeInterval { start: 0.5, end: 2.5 }));
    }
}
