//! Scene files: one JSON document with object declarations and a frames array.

use std::collections::BTreeMap;
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::body::{JointId, SkeletonPose, SkeletonTrack, DEFAULT_MIN_CONFIDENCE};
use crate::entities::{
    validate, Box3, DomainObject, LineSegment, OrientedPoint, Point3, PolyLine, Polygon, SpaceTimeHistory,
    SpatialPrimitive,
};
use crate::error::{Error, Result};
use crate::scene::Scene;

pub const FORMAT_VERSION: u64 = 1;

/// Shape kinds an object may declare.
pub const SHAPES: &[&str] = &["point", "oriented_point", "segment", "polyline", "polygon", "bbox", "skeleton"];

fn err(path: &str, msg: impl std::fmt::Display) -> Error {
    Error::InvalidScene(format!("{path}: {msg}"))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| err(path, format!("missing field `{key}`")))
}

fn as_object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| err(path, "expected an object"))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| err(path, "expected an array"))
}

fn as_f64(v: &Value, path: &str) -> Result<f64> {
    v.as_f64()
        .filter(|x| x.is_finite())
        .ok_or_else(|| err(path, "expected a finite number"))
}

fn as_str<'a>(v: &'a Value, path: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| err(path, "expected a string"))
}

fn point(v: &Value, path: &str) -> Result<Point3> {
    let a = as_array(v, path)?;
    if a.len() != 3 {
        return Err(err(path, format!("expected [x, y, z], found {} values", a.len())));
    }
    Ok(Point3::new(
        as_f64(&a[0], &format!("{path}[0]"))?,
        as_f64(&a[1], &format!("{path}[1]"))?,
        as_f64(&a[2], &format!("{path}[2]"))?,
    ))
}

fn points(v: &Value, path: &str) -> Result<Vec<Point3>> {
    as_array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, p)| point(p, &format!("{path}[{i}]")))
        .collect()
}

fn shape(kind: &str, v: &Value, path: &str) -> Result<SpatialPrimitive> {
    let rec = as_object(v, path)?;
    let path = format!("{path}.{kind}");
    let val = rec.get(kind).ok_or_else(|| err(&path, format!("missing `{kind}` for an object declared as {kind}")))?;
    for key in rec.keys() {
        if key != kind && key != "centroid" {
            return Err(err(&path, format!("unexpected field `{key}`")));
        }
    }
    Ok(match kind {
        "point" => SpatialPrimitive::Point(point(val, &path)?),
        "oriented_point" => {
            let o = as_object(val, &path)?;
            SpatialPrimitive::OrientedPoint(OrientedPoint {
                p: point(field(o, "p", &path)?, &format!("{path}.p"))?,
                v: point(field(o, "v", &path)?, &format!("{path}.v"))?,
            })
        }
        "segment" => {
            let ps = points(val, &path)?;
            if ps.len() != 2 {
                return Err(err(&path, "a segment has two endpoints"));
            }
            SpatialPrimitive::Segment(LineSegment::new(ps[0], ps[1]))
        }
        "polyline" => SpatialPrimitive::Polyline(PolyLine { vertices: points(val, &path)? }),
        "polygon" => SpatialPrimitive::Polygon(Polygon::new(points(val, &path)?)),
        "bbox" => {
            let o = as_object(val, &path)?;
            SpatialPrimitive::Box(Box3::new(
                point(field(o, "min", &path)?, &format!("{path}.min"))?,
                point(field(o, "max", &path)?, &format!("{path}.max"))?,
            ))
        }
        _ => unreachable!(),
    })
}

fn kind_name(p: &SpatialPrimitive) -> &'static str {
    match p {
        SpatialPrimitive::Point(_) => "point",
        SpatialPrimitive::OrientedPoint(_) => "oriented_point",
        SpatialPrimitive::Segment(_) => "segment",
        SpatialPrimitive::Polyline(_) => "polyline",
        SpatialPrimitive::Polygon(_) => "polygon",
        SpatialPrimitive::Box(_) => "bbox",
    }
}

/// Parses and validates scene text. Warnings name dropped low-confidence joints.
pub fn parse_scene(text: &str) -> Result<(Scene, Vec<String>)> {
    let doc: Value = serde_json::from_str(text).map_err(|e| Error::InvalidScene(format!("malformed JSON: {e}")))?;
    let root = as_object(&doc, "$")?;
    let version = field(root, "format_version", "$")?
        .as_u64()
        .ok_or_else(|| err("format_version", "expected an integer"))?;
    if version != FORMAT_VERSION {
        return Err(err("format_version", format!("unsupported version {version}")));
    }
    let rate = as_f64(field(root, "frame_rate", "$")?, "frame_rate")?;
    if rate <= 0.0 {
        return Err(err("frame_rate", "must be positive"));
    }

    let mut objects = Vec::new();
    let mut shapes: BTreeMap<String, String> = BTreeMap::new();
    for (i, o) in as_array(field(root, "objects", "$")?, "objects")?.iter().enumerate() {
        let path = format!("objects[{i}]");
        let o = as_object(o, &path)?;
        let id = as_str(field(o, "id", &path)?, &format!("{path}.id"))?.to_string();
        let class = as_str(field(o, "class", &path)?, &format!("{path}.class"))?.to_string();
        let kind = as_str(field(o, "shape", &path)?, &format!("{path}.shape"))?;
        if !SHAPES.contains(&kind) {
            return Err(err(&format!("{path}.shape"), format!("unknown shape kind `{kind}`")));
        }
        if shapes.insert(id.clone(), kind.to_string()).is_some() {
            return Err(err(&format!("{path}.id"), format!("duplicate object id `{id}`")));
        }
        objects.push(DomainObject { id, class });
    }

    let mut samples: BTreeMap<String, Vec<(f64, SpatialPrimitive)>> = BTreeMap::new();
    let mut poses: BTreeMap<String, Vec<(f64, SkeletonPose)>> = BTreeMap::new();
    let mut warnings = Vec::new();
    let mut prev: Option<f64> = None;
    for (i, f) in as_array(field(root, "frames", "$")?, "frames")?.iter().enumerate() {
        let path = format!("frames[{i}]");
        let f = as_object(f, &path)?;
        let t = as_f64(field(f, "t", &path)?, &format!("{path}.t"))?;
        if let Some(p) = prev {
            if t <= p {
                return Err(err(
                    &format!("{path}.t"),
                    format!("timestamps must increase strictly (frame {i} has t={t} after t={p})"),
                ));
            }
        }
        prev = Some(t);
        if let Some(objs) = f.get("objects") {
            for (id, rec) in as_object(objs, &format!("{path}.objects"))? {
                let p = format!("{path}.objects.{id}");
                let kind = shapes.get(id).ok_or_else(|| err(&p, format!("undeclared object `{id}`")))?;
                if kind == "skeleton" {
                    return Err(err(&p, format!("`{id}` is declared as a skeleton")));
                }
                let prim = shape(kind, rec, &p)?;
                if let Some(v) = validate(&prim).violations.first() {
                    return Err(err(&p, &v.message));
                }
                samples.entry(id.clone()).or_default().push((t, prim));
            }
        }
        if let Some(skels) = f.get("skeletons") {
            for (person, joints) in as_object(skels, &format!("{path}.skeletons"))? {
                let p = format!("{path}.skeletons.{person}");
                match shapes.get(person).map(String::as_str) {
                    Some("skeleton") => {}
                    Some(_) => return Err(err(&p, format!("`{person}` is not declared as a skeleton"))),
                    None => return Err(err(&p, format!("undeclared person `{person}`"))),
                }
                let mut pose = SkeletonPose::default();
                for (name, v) in as_object(joints, &p)? {
                    let jp = format!("{p}.{name}");
                    let j: JointId = name.parse().map_err(|_| err(&jp, format!("unknown joint `{name}`")))?;
                    let a = as_array(v, &jp)?;
                    if a.len() != 3 && a.len() != 4 {
                        return Err(err(&jp, "expected [x, y, z] or [x, y, z, confidence]"));
                    }
                    let pt = point(&Value::Array(a[..3].to_vec()), &jp)?;
                    let c = match a.get(3) {
                        Some(c) => as_f64(c, &format!("{jp}[3]"))?,
                        None => 1.0,
                    };
                    if !(0.0..=1.0).contains(&c) {
                        return Err(err(&format!("{jp}[3]"), "confidence must lie in [0, 1]"));
                    }
                    if c < DEFAULT_MIN_CONFIDENCE {
                        warnings.push(format!("frame {i} (t={t}): dropped low-confidence joint {person}.{name} ({c})"));
                    }
                    pose.joints.insert(j, (pt, c));
                }
                poses.entry(person.clone()).or_default().push((t, pose));
            }
        }
    }

    let mut histories = BTreeMap::new();
    for (id, s) in samples {
        histories.insert(id.clone(), SpaceTimeHistory::new(id, s)?);
    }
    let mut skeletons = BTreeMap::new();
    for (person, s) in poses {
        skeletons.insert(person.clone(), SkeletonTrack::new(person, s)?);
    }
    Ok((Scene::new(rate, objects, histories, skeletons)?, warnings))
}

pub fn load(path: &Path) -> Result<(Scene, Vec<String>)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidScene(format!("cannot read {}: {e}", path.display())))?;
    parse_scene(&text)
}

fn pt(p: Point3) -> Value {
    json!([p.x, p.y, p.z])
}

fn shape_json(p: &SpatialPrimitive) -> Value {
    let body = match p {
        SpatialPrimitive::Point(q) => pt(*q),
        SpatialPrimitive::OrientedPoint(op) => json!({"p": pt(op.p), "v": pt(op.v)}),
        SpatialPrimitive::Segment(s) => json!([pt(s.p1), pt(s.p2)]),
        SpatialPrimitive::Polyline(pl) => Value::Array(pl.vertices.iter().map(|v| pt(*v)).collect()),
        SpatialPrimitive::Polygon(pg) => Value::Array(pg.vertices.iter().map(|v| pt(*v)).collect()),
        SpatialPrimitive::Box(b) => json!({"min": pt(b.min), "max": pt(b.max)}),
    };
    json!({ kind_name(p): body, "centroid": pt(p.centroid()) })
}

/// JSON document for `scene`; keys are sorted, so output is deterministic.
pub fn scene_to_json(scene: &Scene) -> Value {
    let objects: Vec<Value> = scene
        .objects()
        .iter()
        .map(|o| {
            let kind = if scene.skeletons().contains_key(&o.id) {
                "skeleton"
            } else {
                scene.histories().get(&o.id).map(|h| kind_name(&h.samples()[0].1)).unwrap_or("point")
            };
            json!({"id": o.id, "class": o.class, "shape": kind})
        })
        .collect();
    let at = |samples: &[(f64, SpatialPrimitive)], t: f64| {
        samples
            .binary_search_by(|(ts, _)| ts.total_cmp(&t))
            .ok()
            .map(|i| shape_json(&samples[i].1))
    };
    let frames: Vec<Value> = scene
        .frame_times()
        .iter()
        .map(|&t| {
            let objs: Map<String, Value> = scene
                .histories()
                .iter()
                .filter_map(|(id, h)| at(h.samples(), t).map(|v| (id.clone(), v)))
                .collect();
            let skels: Map<String, Value> = scene
                .skeletons()
                .iter()
                .filter_map(|(person, track)| {
                    let s = track.samples();
                    let i = s.binary_search_by(|(ts, _)| ts.total_cmp(&t)).ok()?;
                    let joints: Map<String, Value> = s[i]
                        .1
                        .joints
                        .iter()
                        .map(|(j, (p, c))| {
                            let v = if *c == 1.0 { pt(*p) } else { json!([p.x, p.y, p.z, c]) };
                            (j.name().to_string(), v)
                        })
                        .collect();
                    Some((person.clone(), Value::Object(joints)))
                })
                .collect();
            json!({"t": t, "objects": objs, "skeletons": skels})
        })
        .collect();
    json!({
        "format_version": FORMAT_VERSION,
        "frame_rate": scene.frame_rate,
        "objects": objects,
        "frames": frames,
    })
}

pub fn scene_to_string(scene: &Scene) -> String {
    let mut s = serde_json::to_string_pretty(&scene_to_json(scene)).expect("scene serialises");
    s.push('\n');
    s
}

pub fn save(scene: &Scene, path: &Path) -> Result<()> {
    std::fs::write(path, scene_to_string(scene))
        .map_err(|e| Error::InvalidScene(format!("cannot write {}: {e}", path.display())))
}
