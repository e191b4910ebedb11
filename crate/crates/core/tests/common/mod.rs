#![allow(dead_code)]

use std::collections::BTreeSet;

use qsground::dsl::{self, Decl, Literal, Term};
use qsground::engine::{Engine, FluentAtom};
use qsground::ingest::fixtures::{keyframes, FixtureParams, SceneBuilder};
use qsground::relations::allen::relate;
use qsground::relations::AllenLabel;
use qsground::{Box3, EngineConfig, EntityRef, Point3, Scene, SpatialPrimitive, TimeInterval};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const FRAME: f64 = 1.0 / 30.0;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Allen relation from the textbook endpoint definitions, exact.
pub fn allen_holding(a: (f64, f64), b: (f64, f64)) -> Vec<AllenLabel> {
    use AllenLabel::*;
    let ((s1, e1), (s2, e2)) = (a, b);
    let defs = [
        (Before, e1 < s2),
        (After, e2 < s1),
        (Meets, e1 == s2),
        (MetBy, e2 == s1),
        (Overlaps, s1 < s2 && s2 < e1 && e1 < e2),
        (OverlappedBy, s2 < s1 && s1 < e2 && e2 < e1),
        (Starts, s1 == s2 && e1 < e2),
        (StartedBy, s1 == s2 && e2 < e1),
        (During, s2 < s1 && e1 < e2),
        (Contains, s1 < s2 && e2 < e1),
        (Finishes, e1 == e2 && s2 < s1),
        (FinishedBy, e1 == e2 && s1 < s2),
        (Equals, s1 == s2 && e1 == e2),
    ];
    defs.into_iter().filter(|d| d.1).map(|d| d.0).collect()
}

/// Interval with endpoints on a coarse integer grid so that ties are common.
pub fn grid_interval(r: &mut impl Rng, n: i32) -> (f64, f64) {
    let a = r.random_range(0..n);
    let b = r.random_range(a + 1..=n);
    (a as f64, b as f64)
}

pub fn grid_box(r: &mut impl Rng, n: i32) -> Box3 {
    let (x0, x1) = grid_interval(r, n);
    let (y0, y1) = grid_interval(r, n);
    let (z0, z1) = grid_interval(r, n);
    Box3::new(Point3::new(x0, y0, z0), Point3::new(x1, y1, z1))
}

/// RCC-8 name of two integer-grid boxes, by sampling the half-integer
/// lattice, which resolves interiors and boundaries of such boxes exactly.
pub fn rcc8_by_sampling(a: &Box3, b: &Box3, n: i32) -> &'static str {
    let inside = |bx: &Box3, p: [f64; 3]| (0..3).all(|i| bx.min.to_array()[i] < p[i] && p[i] < bx.max.to_array()[i]);
    let closed = |bx: &Box3, p: [f64; 3]| (0..3).all(|i| bx.min.to_array()[i] <= p[i] && p[i] <= bx.max.to_array()[i]);
    let (mut share_interior, mut share_closure, mut share_boundary) = (false, false, false);
    let (mut a_in_b, mut b_in_a) = (true, true);
    for i in 0..=2 * n {
        for j in 0..=2 * n {
            for k in 0..=2 * n {
                let p = [i as f64 / 2.0, j as f64 / 2.0, k as f64 / 2.0];
                let (ia, ca, ib, cb) = (inside(a, p), closed(a, p), inside(b, p), closed(b, p));
                share_interior |= ia && ib;
                share_closure |= ca && cb;
                share_boundary |= ca && !ia && cb && !ib;
                a_in_b &= !ca || cb;
                b_in_a &= !cb || ca;
            }
        }
    }
    match (share_closure, share_interior, a_in_b, b_in_a) {
        (false, ..) => "dc",
        (true, false, ..) => "ec",
        (_, _, true, true) => "eq",
        (_, _, true, false) => {
            if share_boundary {
                "tpp"
            } else {
                "ntpp"
            }
        }
        (_, _, false, true) => {
            if share_boundary {
                "tppi"
            } else {
                "ntppi"
            }
        }
        _ => "po",
    }
}

/// Euclidean distance between points and axis-aligned boxes.
pub fn distance(a: &SpatialPrimitive, b: &SpatialPrimitive) -> f64 {
    let bounds = |p: &SpatialPrimitive| match p {
        SpatialPrimitive::Point(q) => (q.to_array(), q.to_array()),
        SpatialPrimitive::Box(bx) => (bx.min.to_array(), bx.max.to_array()),
        other => panic!("no oracle distance for {other:?}"),
    };
    let ((amin, amax), (bmin, bmax)) = (bounds(a), bounds(b));
    (0..3)
        .map(|i| (amin[i] - bmax[i]).max(bmin[i] - amax[i]).max(0.0))
        .map(|g| g * g)
        .sum::<f64>()
        .sqrt()
}

fn wander(r: &mut impl Rng, t_end: f64) -> Vec<(f64, [f64; 3])> {
    let mut keys = Vec::new();
    let mut t = 0.0;
    let mut p = [r.random_range(-1.0..1.0), r.random_range(-1.0..1.0), r.random_range(0.0..0.5)];
    while t <= t_end {
        keys.push((t, p));
        t += r.random_range(0.15..1.0);
        if r.random_bool(0.7) {
            p = [r.random_range(-1.0..1.0), r.random_range(-1.0..1.0), r.random_range(0.0..0.5)];
        }
    }
    keys
}

/// Two wandering objects, points or boxes, with optional sensor noise.
pub fn random_pair_scene(r: &mut impl Rng) -> Scene {
    let rate = [30.0, 25.0, 15.0][r.random_range(0..3)];
    let frames = r.random_range(20..=120);
    let t_end = (frames - 1) as f64 / rate;
    let noise = [0.0, 0.002, 0.01][r.random_range(0..3)];
    let mut b = SceneBuilder::with_rate(FixtureParams { seed: r.random(), jitter: noise }, rate);
    type Track = (String, Vec<(f64, [f64; 3])>, Option<f64>);
    let objs: Vec<Track> = (0..2)
        .map(|i| {
            let half = r.random_bool(0.5).then(|| r.random_range(0.02..0.15));
            (format!("o{i}"), wander(r, t_end), half)
        })
        .collect();
    for (id, _, _) in &objs {
        b.declare(id, "thing");
    }
    for k in 0..frames {
        let t = k as f64 / rate;
        for (id, keys, half) in &objs {
            let c = keyframes(t, keys);
            let prim = match half {
                Some(h) => SpatialPrimitive::Box(Box3::new(c - Point3::new(*h, *h, *h), c + Point3::new(*h, *h, *h))),
                None => SpatialPrimitive::Point(c),
            };
            b.object(id, t, prim);
        }
    }
    b.build().unwrap()
}

/// Two to four boxes on a table-sized area; later objects now and then
/// chase earlier ones so contacts and approaches occur.
pub fn random_small_scene(r: &mut impl Rng) -> Scene {
    let n = r.random_range(2..=4);
    let frames = r.random_range(40..=200);
    let t_end = (frames - 1) as f64 / 30.0;
    let mut b = SceneBuilder::new(FixtureParams::default());
    let mut tracks: Vec<Vec<(f64, [f64; 3])>> = Vec::new();
    for i in 0..n {
        let mut keys = Vec::new();
        let mut t = 0.0;
        while t <= t_end + 0.5 {
            let p = if i > 0 && r.random_bool(0.5) {
                let target = &tracks[r.random_range(0..i)];
                let q = keyframes(t, target);
                [q.x + 0.1 + r.random_range(0.0..0.01), q.y, q.z]
            } else {
                [r.random_range(0.0..1.0), r.random_range(0.0..1.0), 0.05]
            };
            keys.push((t, p));
            t += r.random_range(0.3..1.2);
            if r.random_bool(0.3) {
                keys.push((t, p));
                t += r.random_range(0.2..0.6);
            }
        }
        tracks.push(keys);
        b.declare(&format!("o{i}"), "thing");
    }
    let h = Point3::new(0.05, 0.05, 0.05);
    for k in 0..frames {
        let t = k as f64 / 30.0;
        for (i, keys) in tracks.iter().enumerate() {
            let c = keyframes(t, keys);
            b.object(&format!("o{i}"), t, SpatialPrimitive::Box(Box3::new(c - h, c + h)));
        }
    }
    b.build().unwrap()
}

/// Occurrence interval of one rule body match, as each test rule defines it.
pub type DRule = fn(&[TimeInterval]) -> Option<TimeInterval>;

/// Every occurrence of `decl` found by trying all injective bindings and
/// all combinations of timeline intervals. `occurrence` maps the matched
/// intervals (in holds-in order) to D.
pub fn brute_force(engine: &Engine<'_>, decl: &Decl, occurrence: DRule) -> BTreeSet<(Vec<String>, u64, u64)> {
    let scene = engine.scene();
    let ids: Vec<String> = scene.histories().keys().cloned().collect();
    let mut vars: Vec<String> = Vec::new();
    let mut holds: Vec<(&str, &[Term], &str)> = Vec::new();
    let mut allen: Vec<(AllenLabel, &str, &str)> = Vec::new();
    for l in &decl.body {
        match l {
            Literal::HoldsIn { atom, ivar, .. } => {
                for t in &atom.args {
                    if let Term::Var(v) = t {
                        if !vars.contains(v) {
                            vars.push(v.clone());
                        }
                    }
                }
                holds.push((atom.name.as_str(), &atom.args, ivar.as_str()));
            }
            Literal::Allen { op, left, right, .. } => allen.push((*op, left, right)),
            Literal::Guard { .. } => {}
        }
    }
    let d_name = decl.interval.as_deref().unwrap_or("D");
    let tol = engine.config().allen_tolerance;
    let mut out = BTreeSet::new();
    let k = vars.len();
    let mut assign = vec![0usize; k];
    'bindings: loop {
        let distinct: BTreeSet<usize> = assign.iter().copied().collect();
        if distinct.len() == k {
            let bind = |v: &str| ids[assign[vars.iter().position(|x| x == v).unwrap()]].clone();
            let choices: Vec<Vec<TimeInterval>> = holds
                .iter()
                .map(|(name, args, _)| {
                    let args = args
                        .iter()
                        .map(|t| match t {
                            Term::Var(v) => EntityRef::object(bind(v)),
                            Term::Const(c) => EntityRef::object(c.clone()),
                            _ => unreachable!(),
                        })
                        .collect();
                    engine.timeline(&FluentAtom::new(*name, args)).unwrap().intervals.clone()
                })
                .collect();
            let mut pick = vec![0usize; holds.len()];
            if choices.iter().all(|c| !c.is_empty()) {
                loop {
                    let ivs: Vec<TimeInterval> = pick.iter().zip(&choices).map(|(i, c)| c[*i]).collect();
                    if let Some(d) = occurrence(&ivs) {
                        let get = |n: &str| {
                            if n == d_name {
                                d
                            } else {
                                ivs[holds.iter().position(|h| h.2 == n).unwrap()]
                            }
                        };
                        let ok = allen.iter().all(|(op, l, r)| {
                            let (a, b) = (get(l), get(r));
                            relate(a.start, a.end, b.start, b.end, tol) == *op
                        });
                        if ok {
                            let args = decl.params.iter().map(|p| bind(p)).collect();
                            out.insert((args, d.start.to_bits(), d.end.to_bits()));
                        }
                    }
                    let mut i = 0;
                    loop {
                        if i == pick.len() {
                            break;
                        }
                        pick[i] += 1;
                        if pick[i] < choices[i].len() {
                            break;
                        }
                        pick[i] = 0;
                        i += 1;
                    }
                    if i == pick.len() {
                        break;
                    }
                }
            }
        }
        let mut i = 0;
        loop {
            if i == k {
                break 'bindings;
            }
            assign[i] += 1;
            if assign[i] < ids.len() {
                break;
            }
            assign[i] = 0;
            i += 1;
        }
    }
    out
}

/// Rules exercised by the completeness check, with their D construction.
pub fn completeness_rules() -> Vec<(Decl, DRule)> {
    let src = "
interaction contact(A, B) during D :-
    approaching(A, B) holds-in D1,
    touches(A, B) holds-in D2,
    meets(D1, D2),
    starts(D1, D),
    ends(D2, D).

interaction relay(A, B) during D :-
    moving(A) holds-in D1,
    moving(B) holds-in D2,
    before(D1, D2).

interaction escort(A, B, C) during D :-
    touches(A, B) holds-in D1,
    moving(C) holds-in D2,
    during(D2, D1),
    equals(D, D2).

interaction handover(A, B) during D :-
    stationary(A) holds-in D1,
    moving_away(A, B) holds-in D2,
    overlaps(D1, D2),
    starts(D, D2),
    finishes(D, D1).
";
    let decls = dsl::parse(src).unwrap();
    let rules: [DRule; 4] = [
        |v| TimeInterval::new(v[0].start, v[1].end).ok(),
        |v| TimeInterval::new(v[0].start.min(v[1].start), v[0].end.max(v[1].end)).ok(),
        |v| Some(v[1]),
        |v| TimeInterval::new(v[1].start, v[0].end).ok(),
    ];
    decls.into_iter().zip(rules).collect()
}

pub fn engine_for<'s>(scene: &'s Scene, rules: Vec<Decl>) -> Engine<'s> {
    Engine::new(scene, EngineConfig::default(), rules).unwrap()
}
