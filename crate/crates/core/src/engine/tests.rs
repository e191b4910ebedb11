use super::*;
use crate::body::{BodyPartId, Side};
use crate::entities::Point3;
use crate::ingest::fixtures::{cup_box, fixture, keyframes, seated_pose, FixtureParams, SceneBuilder, FIXTURES};

const FRAME: f64 = 1.0 / 30.0;

const REACH_RULE: &str = "
interaction reach(P, O) during D :-
    person(P),
    approaching(body_part(hand, P), O) holds-in D1,
    touches(body_part(hand, P), O) holds-in D2,
    meets(D1, D2),
    starts(D1, D),
    ends(D2, D).
";

fn stdlib_engine(scene: &Scene) -> Engine<'_> {
    Engine::new(scene, EngineConfig::default(), dsl::load_standard_library()).unwrap()
}

fn hand(person: &str) -> EntityRef {
    EntityRef::body_part(BodyPartId::Hand(Side::Right), person)
}

fn atom(p: &str, args: Vec<EntityRef>) -> FluentAtom {
    FluentAtom::new(p, args)
}

/// Hand closes on a cup over [0, 2] and rests on it until 3.
fn scripted_reach(mirrored: bool) -> Scene {
    let mut b = SceneBuilder::new(FixtureParams::default());
    b.declare("person1", "person");
    b.declare("cup1", "cup");
    if mirrored {
        b.declare("person2", "person");
        b.declare("cup2", "cup");
    }
    // the hand enters the adjacency band exactly at t = 2
    let band = 0.1 * (0.08f64 * 0.08 * 0.12).cbrt();
    let keys = [(0.0, [-0.6, 0.0, 0.76]), (2.0, [0.36 - band, 0.0, 0.76]), (2.2, [0.38, 0.0, 0.76])];
    for k in 0..=90 {
        let t = k as f64 * FRAME;
        let h = keyframes(t, &keys);
        b.object("cup1", t, cup_box(Point3::new(0.4, 0.0, 0.76)));
        b.pose("person1", t, seated_pose(-0.8, 1.0, h));
        if mirrored {
            b.object("cup2", t, cup_box(Point3::new(0.4, 2.0, 0.76)));
            b.pose("person2", t, seated_pose(-0.8, 1.0, h + Point3::new(0.0, 2.0, 0.0)));
        }
    }
    b.build().unwrap()
}

fn reach_engine(scene: &Scene) -> Engine<'_> {
    Engine::new(scene, EngineConfig::default(), dsl::parse(REACH_RULE).unwrap()).unwrap()
}

#[test]
fn holds_at_touch_and_approach() {
    let s = scripted_reach(false);
    let e = reach_engine(&s);
    let cup = EntityRef::object("cup1");
    let touch = atom("touches", vec![hand("person1"), cup.clone()]);
    assert!(e.holds_at(&touch, 2.5).unwrap());
    // about a metre apart
    assert!(!e.holds_at(&touch, 0.1).unwrap());
    let appr = atom("approaching", vec![hand("person1"), cup.clone()]);
    assert!(e.holds_at(&appr, 1.0).unwrap());
    assert!(!e.holds_at(&appr, 2.8).unwrap());
    assert!(e.holds_at(&touch, 7.0).is_err());
    assert!(e.holds_at(&atom("levitates", vec![cup.clone()]), 1.0).is_err());
    assert!(e.holds_at(&atom("touches", vec![cup.clone(), EntityRef::object("ghost")]), 1.0).is_err());
}

#[test]
fn timeline_and_holds_in() {
    let s = scripted_reach(false);
    let e = reach_engine(&s);
    let cup = EntityRef::object("cup1");
    let touch = e.timeline(&atom("touches", vec![hand("person1"), cup.clone()])).unwrap();
    assert_eq!(touch.intervals.len(), 1);
    let iv = touch.intervals[0];
    assert!((iv.start - 2.0).abs() < FRAME + 1e-9 && (iv.end - 3.0).abs() < 1e-9);
    assert!(e.holds_in(&atom("touches", vec![hand("person1"), cup.clone()]), &iv).unwrap());
    let straddle = TimeInterval::new(1.0, 2.5).unwrap();
    assert!(!e.holds_in(&atom("touches", vec![hand("person1"), cup.clone()]), &straddle).unwrap());
    // the cup never moves
    assert!(e.timeline(&atom("moving", vec![cup.clone()])).unwrap().intervals.is_empty());
    let still = e.timeline(&atom("stationary", vec![cup])).unwrap();
    assert_eq!(still.intervals, vec![TimeInterval::new(0.0, 3.0).unwrap()]);
}

#[test]
fn reach_occurrence_interval() {
    let s = scripted_reach(false);
    let occ = reach_engine(&s).detect("reach").unwrap();
    assert_eq!(occ.len(), 1);
    let o = &occ[0];
    assert_eq!(o.args, vec![EntityRef::object("person1"), EntityRef::object("cup1")]);
    assert!(o.interval.start.abs() < 1e-9, "{:?}", o.interval);
    assert!((o.interval.end - 3.0).abs() < 1e-9);
    assert_eq!(o.grounding.len(), 2);
    let j = o.to_json();
    assert_eq!(j["rule"], "reach");
    assert_eq!(j["args"][1], "cup1");
}

#[test]
fn touch_without_approach_is_not_a_reach() {
    let mut b = SceneBuilder::new(FixtureParams::default());
    b.declare("person1", "person");
    b.declare("cup1", "cup");
    for k in 0..60 {
        let t = k as f64 * FRAME;
        b.object("cup1", t, cup_box(Point3::new(0.4, 0.0, 0.76)));
        b.pose("person1", t, seated_pose(-0.05, 1.0, Point3::new(0.38, 0.0, 0.76)));
    }
    let s = b.build().unwrap();
    assert!(reach_engine(&s).detect("reach").unwrap().is_empty());
}

#[test]
fn mirrored_persons_reach_separately() {
    let s = scripted_reach(true);
    let occ = reach_engine(&s).detect_all().unwrap();
    let args: Vec<Vec<String>> = occ.iter().map(|o| o.args.iter().map(|a| a.to_string()).collect()).collect();
    assert_eq!(args, vec![vec!["person1", "cup1"], vec!["person2", "cup2"]]);
    assert_eq!(occ[0].interval, occ[1].interval);
}

#[test]
fn empty_rules_detect_nothing() {
    let s = scripted_reach(false);
    let e = Engine::new(&s, EngineConfig::default(), vec![]).unwrap();
    assert!(e.detect_all().unwrap().is_empty());
    assert!(e.detect("reach").is_err());
}

#[test]
fn invalid_rules_are_rejected() {
    let s = scripted_reach(false);
    let mut rules = dsl::parse(REACH_RULE).unwrap();
    rules.extend(dsl::parse(REACH_RULE).unwrap());
    assert!(Engine::new(&s, EngineConfig::default(), rules).is_err());
}

fn within_frames(a: f64, b: f64, n: f64) -> bool {
    (a - b).abs() <= n * FRAME + 1e-9
}

#[test]
fn fixtures_reproduce_their_truth() {
    for name in FIXTURES {
        let f = fixture(name, FixtureParams::default()).unwrap();
        let e = stdlib_engine(&f.scene);
        let occ = e.detect_all().unwrap();
        for t in &f.truth {
            let args: Vec<EntityRef> = t.args.iter().map(EntityRef::object).collect();
            let found: Vec<TimeInterval> = if t.kind == "interaction" {
                occ.iter().filter(|o| o.rule == t.name && o.args == args).map(|o| o.interval).collect()
            } else {
                e.timeline(&atom(&t.name, args)).unwrap().intervals.clone()
            };
            assert!(
                found
                    .iter()
                    .any(|i| within_frames(i.start, t.interval[0], 2.0) && within_frames(i.end, t.interval[1], 2.0)),
                "{name}: {} {:?} expected {:?}, found {found:?}",
                t.name,
                t.args,
                t.interval
            );
        }
    }
}

#[test]
fn pass_cup_sequence() {
    let f = fixture("pass_cup", FixtureParams::default()).unwrap();
    let occ = stdlib_engine(&f.scene).detect_all().unwrap();
    let seq: Vec<&str> = occ.iter().map(|o| o.rule.as_str()).filter(|r| *r != "passing_over").collect();
    assert_eq!(seq, ["reach_for", "pick_up", "move_towards", "grasp", "release"]);
    let over: Vec<_> = occ.iter().filter(|o| o.rule == "passing_over").collect();
    assert_eq!(over.len(), 1);
    assert_eq!(over[0].args[0], EntityRef::object("person1"));
}

#[test]
fn parallel_and_sequential_agree() {
    let f = fixture("pick_put", FixtureParams::default()).unwrap();
    let mut cfg = EngineConfig { parallel: false, ..EngineConfig::default() };
    let a = Engine::new(&f.scene, cfg.clone(), dsl::load_standard_library()).unwrap().detect_all().unwrap();
    cfg.parallel = true;
    let b = Engine::new(&f.scene, cfg, dsl::load_standard_library()).unwrap().detect_all().unwrap();
    assert_eq!(a, b);
}

#[test]
fn queries() {
    let f = fixture("pass_cup", FixtureParams::default()).unwrap();
    let e = stdlib_engine(&f.scene);
    let sol = e.solve(&dsl::parse_goal("occurs-in(reach_for(P, O), D)").unwrap()).unwrap();
    assert_eq!(sol.len(), 1);
    assert_eq!(sol[0].bindings, vec![("P".into(), "person1".into()), ("O".into(), "cup1".into())]);
    let sol = e.solve(&dsl::parse_goal("holds-at(touches(cup1, table1), 0.5)").unwrap()).unwrap();
    assert_eq!(sol.len(), 1);
    assert_eq!(sol[0].to_string(), "true");
    assert!(e.solve(&dsl::parse_goal("holds-at(touches(cup1, table1), 2.0)").unwrap()).unwrap().is_empty());
    let sol = e.solve(&dsl::parse_goal("hand_approaching(P, cup1) holds-in T").unwrap()).unwrap();
    let who: Vec<&str> = sol.iter().map(|s| s.bindings[0].1.as_str()).collect();
    assert!(who.contains(&"person1") && who.contains(&"person2"));
}
