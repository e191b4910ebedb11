//! Backtracking matcher over memoised timelines.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::builtins::Builtin;
use super::timeline::{self, FluentAtom, FluentTimeline};
use super::{sort_occurrences, Derived, Engine, Occurrence};
use crate::body::BodyPartId;
use crate::dsl::{Atom, Decl, Goal, GoalKind, Literal, Term};
use crate::entities::TimeInterval;
use crate::error::Result;
use crate::relations::allen::relate;
use crate::relations::AllenLabel;
use crate::scene::EntityRef;

/// Classes a broader guard accepts besides its own name.
const SURFACES: &[&str] = &["counter", "desk", "shelf", "surface", "table", "tray"];

pub fn class_matches(class: &str, guard: &str) -> bool {
    class == guard
        || match guard {
            "surface" => SURFACES.contains(&class),
            "object" => class != "person",
            _ => false,
        }
}

/// One answer to a query goal.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub bindings: Vec<(String, String)>,
    pub interval: Option<(String, TimeInterval)>,
}

impl fmt::Display for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.bindings.iter().map(|(k, v)| format!("{k}={v}")).collect();
        if let Some((name, iv)) = &self.interval {
            parts.push(format!("{name}={iv}"));
        }
        if parts.is_empty() {
            f.write_str("true")
        } else {
            f.write_str(&parts.join(" "))
        }
    }
}

struct Plan<'d> {
    vars: Vec<&'d str>,
    domains: BTreeMap<&'d str, Vec<String>>,
    holds: Vec<(usize, &'d Atom, &'d str)>,
    allen: Vec<(AllenLabel, &'d str, &'d str)>,
    occurrence: Option<&'d str>,
}

#[derive(Default)]
struct Env {
    objs: BTreeMap<String, String>,
    ivs: BTreeMap<String, TimeInterval>,
    grounding: BTreeMap<usize, TimeInterval>,
}

type Emit<'a> = dyn FnMut(&Env) -> Result<()> + 'a;
type Step<'a> = dyn FnMut(&mut Env) -> Result<()> + 'a;

fn push_unique<'d>(v: &mut Vec<&'d str>, x: &'d str) {
    if !v.contains(&x) {
        v.push(x);
    }
}

/// Candidate object ids for `var`, given the literals it appears in.
fn domain(engine: &Engine<'_>, var: &str, guards: &[&str], atoms: &[&Atom]) -> Vec<String> {
    let scene = engine.scene();
    let mut needs_history = false;
    let mut needs_skeleton = false;
    for a in atoms {
        let builtin = Builtin::lookup(&a.name).is_some();
        for t in &a.args {
            match t {
                Term::Var(v) if v == var && builtin => needs_history = true,
                Term::BodyPart { person, .. } if **person == Term::Var(var.into()) => needs_skeleton = true,
                _ => {}
            }
        }
    }
    let mut ids: Vec<String> = scene
        .objects()
        .iter()
        .filter(|o| guards.iter().all(|g| class_matches(&o.class, g)))
        .filter(|o| !needs_history || scene.history(&o.id).is_ok())
        .filter(|o| !needs_skeleton || scene.skeleton(&o.id).is_ok())
        .map(|o| o.id.clone())
        .collect();
    ids.sort();
    ids
}

fn plan<'d>(engine: &Engine<'_>, body: &'d [Literal], occurrence: Option<&'d str>) -> Plan<'d> {
    let mut vars = Vec::new();
    let mut guards: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    let mut holds = Vec::new();
    let mut allen = Vec::new();
    for (i, l) in body.iter().enumerate() {
        match l {
            Literal::Guard { class, term, .. } => {
                for v in term.vars() {
                    push_unique(&mut vars, v);
                    guards.entry(v).or_default().push(class);
                }
            }
            Literal::HoldsIn { atom, ivar, .. } => {
                for t in &atom.args {
                    for v in t.vars() {
                        push_unique(&mut vars, v);
                    }
                }
                holds.push((i, atom, ivar.as_str()));
            }
            Literal::Allen { op, left, right, .. } => allen.push((*op, left.as_str(), right.as_str())),
        }
    }
    let atoms: Vec<&Atom> = holds.iter().map(|h| h.1).collect();
    let domains = vars
        .iter()
        .map(|v| (*v, domain(engine, v, guards.get(v).map(Vec::as_slice).unwrap_or(&[]), &atoms)))
        .collect();
    Plan {
        vars,
        domains,
        holds,
        allen,
        occurrence,
    }
}

fn ground(t: &Term, env: &Env) -> Option<EntityRef> {
    match t {
        Term::Var(v) => env.objs.get(v).map(|id| EntityRef::object(id.clone())),
        Term::Const(c) => Some(EntityRef::object(c.clone())),
        Term::BodyPart { part, person } => {
            let part: BodyPartId = part.parse().ok()?;
            let person = match &**person {
                Term::Var(v) => env.objs.get(v)?.clone(),
                Term::Const(c) => c.clone(),
                Term::BodyPart { .. } => return None,
            };
            Some(EntityRef::body_part(part, person))
        }
    }
}

fn ground_atom(a: &Atom, env: &Env) -> Option<FluentAtom> {
    let args = a.args.iter().map(|t| ground(t, env)).collect::<Option<Vec<_>>>()?;
    Some(FluentAtom::new(a.name.clone(), args))
}

/// Binds `vars[i..]` to distinct objects not already in use.
fn bind_vars(plan: &Plan<'_>, vars: &[&str], i: usize, env: &mut Env, f: &mut Step<'_>) -> Result<()> {
    if i == vars.len() {
        return f(env);
    }
    let v = vars[i];
    for id in &plan.domains[v] {
        if env.objs.values().any(|x| x == id) {
            continue;
        }
        env.objs.insert(v.into(), id.clone());
        bind_vars(plan, vars, i + 1, env, f)?;
        env.objs.remove(v);
    }
    Ok(())
}

fn allen_ok(plan: &Plan<'_>, env: &Env, just_bound: &str, tol: f64) -> bool {
    plan.allen.iter().all(|(op, l, r)| {
        if (*l != just_bound && *r != just_bound) || Some(*l) == plan.occurrence || Some(*r) == plan.occurrence {
            return true;
        }
        match (env.ivs.get(*l), env.ivs.get(*r)) {
            (Some(a), Some(b)) => relate(a.start, a.end, b.start, b.end, tol) == *op,
            _ => true,
        }
    })
}

fn search(engine: &Engine<'_>, plan: &Plan<'_>, step: usize, env: &mut Env, emit: &mut Emit<'_>) -> Result<()> {
    if step == plan.holds.len() {
        let rest: Vec<&str> = plan.vars.iter().copied().filter(|v| !env.objs.contains_key(*v)).collect();
        return bind_vars(plan, &rest, 0, env, &mut |e: &mut Env| emit(e));
    }
    let (li, atom, ivar) = plan.holds[step];
    let mut unbound = Vec::new();
    for t in &atom.args {
        for v in t.vars() {
            if !env.objs.contains_key(v) {
                push_unique(&mut unbound, v);
            }
        }
    }
    let tol = engine.config().allen_tolerance;
    bind_vars(plan, &unbound, 0, env, &mut |env: &mut Env| {
        let Some(fa) = ground_atom(atom, env) else { return Ok(()) };
        let ivs = engine.literal_intervals(&fa)?;
        if let Some(bound) = env.ivs.get(ivar).copied() {
            if ivs.iter().any(|i| i.contains(&bound)) {
                env.grounding.insert(li, bound);
                search(engine, plan, step + 1, env, emit)?;
                env.grounding.remove(&li);
            }
            return Ok(());
        }
        for iv in ivs {
            env.ivs.insert(ivar.into(), iv);
            env.grounding.insert(li, iv);
            if allen_ok(plan, env, ivar, tol) {
                search(engine, plan, step + 1, env, emit)?;
            }
        }
        env.ivs.remove(ivar);
        env.grounding.remove(&li);
        Ok(())
    })
}

/// Occurrence interval from the anchoring constraints, falling back to the
/// hull of the matched intervals for unanchored endpoints.
fn occurrence_interval(plan: &Plan<'_>, env: &Env) -> Option<TimeInterval> {
    let d = plan.occurrence?;
    let (mut start, mut end) = (None, None);
    for (op, l, r) in &plan.allen {
        let (other, op_xd) = if *l == d && *r != d {
            (*r, op.converse())
        } else if *r == d && *l != d {
            (*l, *op)
        } else {
            continue;
        };
        let x = env.ivs.get(other)?;
        match op_xd {
            AllenLabel::Starts | AllenLabel::StartedBy => {
                start.get_or_insert(x.start);
            }
            AllenLabel::Finishes | AllenLabel::FinishedBy => {
                end.get_or_insert(x.end);
            }
            AllenLabel::Equals => {
                start.get_or_insert(x.start);
                end.get_or_insert(x.end);
            }
            AllenLabel::Meets => {
                start.get_or_insert(x.end);
            }
            AllenLabel::MetBy => {
                end.get_or_insert(x.start);
            }
            _ => {}
        }
    }
    let hull_start = env.grounding.values().map(|i| i.start).fold(f64::INFINITY, f64::min);
    let hull_end = env.grounding.values().map(|i| i.end).fold(f64::NEG_INFINITY, f64::max);
    TimeInterval::new(start.unwrap_or(hull_start), end.unwrap_or(hull_end)).ok()
}

fn constraints_hold(plan: &Plan<'_>, env: &Env, d: &TimeInterval, tol: f64) -> bool {
    let get = |v: &str| {
        if Some(v) == plan.occurrence {
            Some(*d)
        } else {
            env.ivs.get(v).copied()
        }
    };
    plan.allen.iter().all(|(op, l, r)| match (get(l), get(r)) {
        (Some(a), Some(b)) => relate(a.start, a.end, b.start, b.end, tol) == *op,
        _ => false,
    })
}

fn param_args(decl: &Decl, env: &Env) -> Vec<EntityRef> {
    decl.params.iter().map(|p| EntityRef::object(env.objs[p].clone())).collect()
}

pub(super) fn detect(engine: &Engine<'_>, decl: &Decl) -> Result<Vec<Occurrence>> {
    let plan = plan(engine, &decl.body, decl.interval.as_deref());
    let tol = engine.config().allen_tolerance;
    let mut out: Vec<Occurrence> = Vec::new();
    let mut seen = BTreeSet::new();
    let mut env = Env::default();
    search(engine, &plan, 0, &mut env, &mut |env: &Env| {
        let Some(d) = occurrence_interval(&plan, env) else { return Ok(()) };
        if !constraints_hold(&plan, env, &d, tol) {
            return Ok(());
        }
        let args = param_args(decl, env);
        if seen.insert((args.clone(), d.start.to_bits(), d.end.to_bits())) {
            out.push(Occurrence {
                rule: decl.name.clone(),
                args,
                interval: d,
                grounding: env.grounding.clone(),
            });
        }
        Ok(())
    })?;
    sort_occurrences(&mut out);
    Ok(out)
}

/// Timelines of a declared fluent: where every matched literal holds at
/// once, merged over all matches.
pub(super) fn fluent_timelines(engine: &Engine<'_>, decl: &Decl) -> Result<BTreeMap<Vec<EntityRef>, FluentTimeline>> {
    let plan = plan(engine, &decl.body, None);
    let tol = engine.config().allen_tolerance;
    let mut parts: BTreeMap<Vec<EntityRef>, Vec<TimeInterval>> = BTreeMap::new();
    let mut env = Env::default();
    search(engine, &plan, 0, &mut env, &mut |env: &Env| {
        let start = env.grounding.values().map(|i| i.start).fold(f64::NEG_INFINITY, f64::max);
        let end = env.grounding.values().map(|i| i.end).fold(f64::INFINITY, f64::min);
        if let Ok(iv) = TimeInterval::new(start, end) {
            if constraints_hold(&plan, env, &iv, tol) {
                parts.entry(param_args(decl, env)).or_default().push(iv);
            }
        }
        Ok(())
    })?;
    Ok(parts
        .into_iter()
        .map(|(k, v)| (k, timeline::from_intervals(v, engine.config())))
        .filter(|(_, tl)| !tl.intervals.is_empty())
        .collect())
}

/// Every ground built-in atom the rule's holds-in literals can produce.
pub(super) fn candidate_builtin_atoms(engine: &Engine<'_>, decl: &Decl) -> Vec<FluentAtom> {
    let plan = plan(engine, &decl.body, decl.interval.as_deref());
    let mut out = Vec::new();
    for (_, atom, _) in &plan.holds {
        if Builtin::lookup(&atom.name).is_none() {
            continue;
        }
        let mut vars = Vec::new();
        for t in &atom.args {
            for v in t.vars() {
                push_unique(&mut vars, v);
            }
        }
        let mut env = Env::default();
        let _ = bind_vars(&plan, &vars, 0, &mut env, &mut |env: &mut Env| {
            out.extend(ground_atom(atom, env));
            Ok(())
        });
    }
    out
}

pub(super) fn solve(engine: &Engine<'_>, goal: &Goal) -> Result<Vec<Solution>> {
    let body = [Literal::HoldsIn {
        atom: goal.atom.clone(),
        ivar: goal.ivar.clone().unwrap_or_else(|| "D".into()),
        span: goal.atom.span,
    }];
    let plan = plan(engine, &body, None);
    let ivar_name = goal.ivar.clone().unwrap_or_else(|| "D".into());
    let mut out = Vec::new();
    let mut emit = |env: &Env, iv: Option<TimeInterval>| {
        out.push(Solution {
            bindings: plan.vars.iter().map(|v| (v.to_string(), env.objs[*v].clone())).collect(),
            interval: iv.map(|i| (ivar_name.clone(), i)),
        });
    };
    let at = match goal.kind {
        GoalKind::HoldsAt(t) | GoalKind::OccursAt(t) => Some(t),
        _ => None,
    };
    if let Some(decl) = engine.rule(&goal.atom.name) {
        if let Derived::Occurrences(occs) = &*engine.derived(&decl.name)? {
            for o in occs {
                let mut env = Env::default();
                if !unify(&goal.atom, &o.args, &mut env) {
                    continue;
                }
                match at {
                    Some(t) if o.interval.contains_time(t) => emit(&env, None),
                    Some(_) => {}
                    None => emit(&env, Some(o.interval)),
                }
            }
            return Ok(finish(out));
        }
    }
    let mut env = Env::default();
    let vars = plan.vars.clone();
    bind_vars(&plan, &vars, 0, &mut env, &mut |env: &mut Env| {
        let Some(fa) = ground_atom(&goal.atom, env) else { return Ok(()) };
        match at {
            Some(t) => {
                let holds = match engine.holds_at(&fa, t) {
                    Err(e) if e.is_undefined() => false,
                    r => r?,
                };
                if holds {
                    emit(env, None);
                }
            }
            None => {
                for iv in engine.timeline(&fa)?.intervals.iter() {
                    emit(env, Some(*iv));
                }
            }
        }
        Ok(())
    })?;
    Ok(finish(out))
}

/// Matches goal arguments against an occurrence's object arguments.
fn unify(atom: &Atom, args: &[EntityRef], env: &mut Env) -> bool {
    atom.args.iter().zip(args).all(|(t, a)| match (t, a) {
        (Term::Var(v), EntityRef::Object(id)) => match env.objs.get(v) {
            Some(x) => x == id,
            None => {
                env.objs.insert(v.clone(), id.clone());
                true
            }
        },
        (Term::Const(c), EntityRef::Object(id)) => c == id,
        _ => false,
    })
}

fn finish(mut v: Vec<Solution>) -> Vec<Solution> {
    v.sort_by(|a, b| {
        let s = |x: &Solution| x.interval.as_ref().map(|i| (i.1.start, i.1.end));
        match (s(a), s(b)) {
            (Some(x), Some(y)) => x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)),
            _ => std::cmp::Ordering::Equal,
        }
        .then_with(|| a.bindings.cmp(&b.bindings))
    });
    v.dedup();
    v
}
