//! Fluent timelines over a scene and interaction detection.

pub mod builtins;
pub mod eval;
mod matcher;
pub mod timeline;

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::EngineConfig;
use crate::dsl::{self, Decl, DeclKind, Goal};
use crate::entities::TimeInterval;
use crate::error::{Error, Result};
use crate::motion::{sample_track, MotionPredicate, Track, TIME_EPS};
use crate::scene::{EntityRef, Scene};

pub use builtins::Builtin;
pub use matcher::Solution;
pub use timeline::{FluentAtom, FluentTimeline};

/// One detected interaction.
#[derive(Debug, Clone, PartialEq)]
pub struct Occurrence {
    pub rule: String,
    pub args: Vec<EntityRef>,
    pub interval: TimeInterval,
    /// Body literal index to the interval it was matched on.
    pub grounding: BTreeMap<usize, TimeInterval>,
}

impl Occurrence {
    pub fn to_json(&self) -> Value {
        let iv = |i: &TimeInterval| json!([i.start, i.end]);
        let grounding: serde_json::Map<String, Value> =
            self.grounding.iter().map(|(k, v)| (k.to_string(), iv(v))).collect();
        json!({
            "rule": self.rule,
            "args": self.args.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
            "interval": iv(&self.interval),
            "grounding": grounding,
        })
    }
}

/// Chronological order: start, then rule name, then arguments.
pub fn sort_occurrences(v: &mut [Occurrence]) {
    v.sort_by(|a, b| {
        a.interval
            .start
            .total_cmp(&b.interval.start)
            .then_with(|| a.rule.cmp(&b.rule))
            .then_with(|| a.args.cmp(&b.args))
            .then_with(|| a.interval.end.total_cmp(&b.interval.end))
    });
}

#[derive(Debug)]
enum Derived {
    Occurrences(Vec<Occurrence>),
    Fluent(BTreeMap<Vec<EntityRef>, FluentTimeline>),
}

/// Evaluates fluents and rules over one scene. Results are memoised; the
/// engine can be shared across threads.
pub struct Engine<'s> {
    scene: &'s Scene,
    cfg: EngineConfig,
    rules: Vec<Decl>,
    tracks: Mutex<HashMap<EntityRef, Arc<Track>>>,
    truths: Mutex<HashMap<FluentAtom, Arc<Vec<bool>>>>,
    timelines: Mutex<HashMap<FluentAtom, Arc<FluentTimeline>>>,
    derived: Mutex<HashMap<String, Arc<Derived>>>,
}

/// Predicates whose true runs are never bridged: merging would pair
/// samples across the gap that violate the trend.
fn gap_merge_exempt(b: Builtin) -> bool {
    matches!(
        b,
        Builtin::Motion(
            MotionPredicate::Approaching | MotionPredicate::MovingAway | MotionPredicate::Growing | MotionPredicate::Shrinking
        )
    )
}

impl<'s> Engine<'s> {
    /// `rules` must resolve on their own.
    pub fn new(scene: &'s Scene, cfg: EngineConfig, rules: Vec<Decl>) -> Result<Self> {
        let diags = dsl::resolve::check(&rules, "", &[]);
        if let Some(d) = diags.first() {
            return Err(Error::Rule(d.message.clone()));
        }
        Ok(Self {
            scene,
            cfg,
            rules,
            tracks: Mutex::default(),
            truths: Mutex::default(),
            timelines: Mutex::default(),
            derived: Mutex::default(),
        })
    }

    pub fn scene(&self) -> &'s Scene {
        self.scene
    }

    pub fn config(&self) -> &EngineConfig {
        &self.cfg
    }

    pub fn rules(&self) -> &[Decl] {
        &self.rules
    }

    pub fn rule(&self, name: &str) -> Option<&Decl> {
        self.rules.iter().find(|d| d.name == name)
    }

    fn check_arity(&self, atom: &FluentAtom) -> Result<()> {
        let arity = Builtin::lookup(&atom.predicate)
            .map(Builtin::arity)
            .or_else(|| self.rule(&atom.predicate).map(Decl::arity));
        match arity {
            Some(n) if n == atom.args.len() => Ok(()),
            _ => Err(Error::UnknownPredicate {
                name: atom.predicate.clone(),
                arity: atom.args.len(),
            }),
        }
    }

    pub fn track(&self, e: &EntityRef) -> Result<Arc<Track>> {
        if let Some(t) = self.tracks.lock().unwrap().get(e) {
            return Ok(t.clone());
        }
        let t = Arc::new(sample_track(self.scene, e, &self.cfg)?);
        self.tracks.lock().unwrap().insert(e.clone(), t.clone());
        Ok(t)
    }

    /// Frame-by-frame truth of a built-in atom.
    pub fn frame_truth(&self, atom: &FluentAtom) -> Result<Arc<Vec<bool>>> {
        if let Some(t) = self.truths.lock().unwrap().get(atom) {
            return Ok(t.clone());
        }
        self.check_arity(atom)?;
        let b = Builtin::lookup(&atom.predicate).ok_or_else(|| Error::UnknownPredicate {
            name: atom.predicate.clone(),
            arity: atom.args.len(),
        })?;
        let tracks = atom.args.iter().map(|a| self.track(a)).collect::<Result<Vec<_>>>()?;
        let slices: Vec<&[_]> = tracks.iter().map(|t| t.as_slice()).collect();
        let truth = Arc::new(eval::frame_truth(b, self.scene.frame_times(), &slices, &self.cfg)?);
        self.truths.lock().unwrap().insert(atom.clone(), truth.clone());
        Ok(truth)
    }

    /// Truth of `atom` at `t`. Built-ins are read at the nearest frame.
    pub fn holds_at(&self, atom: &FluentAtom, t: f64) -> Result<bool> {
        self.check_arity(atom)?;
        let times = self.scene.frame_times();
        let (first, last) = (times[0], times[times.len() - 1]);
        if !(first - TIME_EPS..=last + TIME_EPS).contains(&t) {
            return Err(Error::OutOfRange { t, start: first, end: last });
        }
        if Builtin::lookup(&atom.predicate).is_none() {
            return Ok(match &*self.derived(&atom.predicate)? {
                Derived::Occurrences(v) => v.iter().any(|o| o.args == atom.args && o.interval.contains_time(t)),
                Derived::Fluent(m) => m.get(&atom.args).is_some_and(|tl| tl.holds_at(t)),
            });
        }
        let k = times.partition_point(|x| *x < t);
        let k = if k == times.len() || (k > 0 && t - times[k - 1] <= times[k] - t) { k - 1 } else { k };
        for a in &atom.args {
            let tr = self.track(a)?;
            if tr[k].is_none() {
                let h = self.scene.entity_history(a, self.cfg.min_confidence)?;
                return Err(Error::OutOfRange {
                    t,
                    start: h.first_time(),
                    end: h.last_time(),
                });
            }
        }
        Ok(self.frame_truth(atom)?[k])
    }

    pub fn timeline(&self, atom: &FluentAtom) -> Result<Arc<FluentTimeline>> {
        if let Some(t) = self.timelines.lock().unwrap().get(atom) {
            return Ok(t.clone());
        }
        self.check_arity(atom)?;
        let tl = match Builtin::lookup(&atom.predicate) {
            Some(b) => {
                let truth = self.frame_truth(atom)?;
                timeline::from_frames(self.scene.frame_times(), &truth, !gap_merge_exempt(b), &self.cfg)
            }
            None => match &*self.derived(&atom.predicate)? {
                Derived::Occurrences(v) => timeline::from_intervals(
                    v.iter().filter(|o| o.args == atom.args).map(|o| o.interval).collect(),
                    &self.cfg,
                ),
                Derived::Fluent(m) => m.get(&atom.args).cloned().unwrap_or_else(FluentTimeline::empty),
            },
        };
        let tl = Arc::new(tl);
        self.timelines.lock().unwrap().insert(atom.clone(), tl.clone());
        Ok(tl)
    }

    pub fn holds_in(&self, atom: &FluentAtom, delta: &TimeInterval) -> Result<bool> {
        Ok(self.timeline(atom)?.holds_in(delta))
    }

    /// Intervals a holds-in literal over `atom` can bind: maximal timeline
    /// intervals, or occurrence intervals for interactions.
    fn literal_intervals(&self, atom: &FluentAtom) -> Result<Vec<TimeInterval>> {
        if let Some(d) = self.rule(&atom.predicate) {
            if d.kind == DeclKind::Interaction {
                let Derived::Occurrences(v) = &*self.derived(&d.name)? else { unreachable!() };
                let mut out: Vec<TimeInterval> = v.iter().filter(|o| o.args == atom.args).map(|o| o.interval).collect();
                out.sort_by(|a, b| a.start.total_cmp(&b.start).then(a.end.total_cmp(&b.end)));
                out.dedup();
                return Ok(out);
            }
        }
        Ok(self.timeline(atom)?.intervals.clone())
    }

    fn derived(&self, name: &str) -> Result<Arc<Derived>> {
        if let Some(d) = self.derived.lock().unwrap().get(name) {
            return Ok(d.clone());
        }
        let decl = self.rule(name).ok_or_else(|| Error::UnknownPredicate {
            name: name.into(),
            arity: 0,
        })?;
        let d = Arc::new(match decl.kind {
            DeclKind::Interaction => Derived::Occurrences(matcher::detect(self, decl)?),
            DeclKind::Fluent => Derived::Fluent(matcher::fluent_timelines(self, decl)?),
        });
        self.derived.lock().unwrap().insert(name.into(), d.clone());
        Ok(d)
    }

    /// Occurrences of one interaction, chronologically.
    pub fn detect(&self, rule: &str) -> Result<Vec<Occurrence>> {
        match self.rule(rule) {
            Some(d) if d.kind == DeclKind::Interaction => {}
            _ => return Err(Error::Rule(format!("`{rule}` is not a declared interaction"))),
        }
        if self.cfg.parallel {
            self.precompute(&[rule])?;
        }
        match &*self.derived(rule)? {
            Derived::Occurrences(v) => Ok(v.clone()),
            Derived::Fluent(_) => unreachable!(),
        }
    }

    /// Occurrences of every interaction, chronologically.
    pub fn detect_all(&self) -> Result<Vec<Occurrence>> {
        let names: Vec<&str> = self
            .rules
            .iter()
            .filter(|d| d.kind == DeclKind::Interaction)
            .map(|d| d.name.as_str())
            .collect();
        if self.cfg.parallel {
            self.precompute(&names)?;
        }
        let mut all = Vec::new();
        for n in names {
            all.extend(self.detect(n)?);
        }
        sort_occurrences(&mut all);
        Ok(all)
    }

    /// Fills the timeline cache for every built-in atom the named rules can
    /// touch, on the rayon pool.
    fn precompute(&self, names: &[&str]) -> Result<()> {
        let mut atoms = Vec::new();
        let mut seen = std::collections::BTreeSet::new();
        let mut stack: Vec<&str> = names.to_vec();
        while let Some(n) = stack.pop() {
            if !seen.insert(n) {
                continue;
            }
            if let Some(d) = self.rule(n) {
                atoms.extend(matcher::candidate_builtin_atoms(self, d));
                for l in &d.body {
                    if let dsl::Literal::HoldsIn { atom, .. } = l {
                        stack.push(atom.name.as_str());
                    }
                }
            }
        }
        atoms.sort();
        atoms.dedup();
        atoms.par_iter().try_for_each(|a| self.timeline(a).map(|_| ()))
    }

    /// Answers a one-shot query goal.
    pub fn solve(&self, goal: &Goal) -> Result<Vec<Solution>> {
        matcher::solve(self, goal)
    }
}

#[cfg(test)]
mod tests;
