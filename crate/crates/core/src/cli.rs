//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::config::EngineConfig;
use crate::dsl::{self, Decl, Diagnostic};
use crate::engine::Engine;
use crate::entities::{OrientedPoint, SpatialPrimitive};
use crate::ingest::{self, fixtures, FixtureParams};
use crate::relations::orientation::relative_orientation;
use crate::relations::qdc::{qdc_of, size_of_pair};
use crate::relations::topology::topology;
use crate::scene::Scene;

#[derive(Debug, Parser)]
#[command(name = "qsground", version, about = "Ground activity recordings into qualitative fluents and interactions")]
pub struct Cli {
    /// Print the effective configuration and exit.
    #[arg(long)]
    print_config: bool,
    /// Threshold overrides (TOML, flat keys).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Debug, Args)]
struct RuleArgs {
    /// Rule file in the interaction DSL.
    #[arg(long, required_unless_present = "stdlib")]
    rules: Option<PathBuf>,
    /// Use the bundled rule library (rules from --rules are added to it).
    #[arg(long)]
    stdlib: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, ValueEnum)]
enum Family {
    Topology,
    Qdc,
    Orientation,
    Size,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Detect every interaction in a scene.
    Ground {
        #[arg(long)]
        scene: PathBuf,
        #[command(flatten)]
        rules: RuleArgs,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Answer one goal against a scene.
    Query {
        #[arg(long)]
        scene: PathBuf,
        #[command(flatten)]
        rules: RuleArgs,
        #[arg(long)]
        goal: String,
    },
    /// Print qualitative relations between objects at one instant.
    Relations {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long)]
        at: f64,
        /// Two object ids, `a,b`.
        #[arg(long)]
        pair: Option<String>,
        #[arg(long, value_enum)]
        family: Option<Family>,
    },
    /// Write a synthetic scene and its ground-truth sidecar.
    Fixture {
        #[arg(long)]
        name: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Gaussian noise on every coordinate, metres.
        #[arg(long, default_value_t = 0.0)]
        jitter: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

enum Failure {
    /// I/O and usage problems.
    Io(String),
    /// Invalid input content.
    Invalid(String),
    Diagnostics(String, Vec<Diagnostic>),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Io(_) => 1,
            Failure::Invalid(_) | Failure::Diagnostics(..) => 2,
        }
    }
}

impl From<crate::Error> for Failure {
    fn from(e: crate::Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

fn read(path: &Path) -> std::result::Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Outcome {
    std::fs::write(path, text).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))
}

fn emit(out: &mut dyn Write, text: &str) -> Outcome {
    out.write_all(text.as_bytes()).map_err(|e| Failure::Io(e.to_string()))
}

fn load_config(path: Option<&Path>) -> std::result::Result<EngineConfig, Failure> {
    match path {
        Some(p) => Ok(EngineConfig::from_toml(&read(p)?)?),
        None => Ok(EngineConfig::default()),
    }
}

fn load_scene(path: &Path, err: &mut dyn Write) -> std::result::Result<Scene, Failure> {
    let (scene, warnings) = ingest::parse_scene(&read(path)?)?;
    for w in warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    Ok(scene)
}

fn load_rules(args: &RuleArgs) -> std::result::Result<(Vec<Decl>, String), Failure> {
    let mut decls = if args.stdlib { dsl::load_standard_library() } else { Vec::new() };
    let mut label = Vec::new();
    if args.stdlib {
        label.push("stdlib".to_string());
    }
    if let Some(p) = &args.rules {
        let text = read(p)?;
        let user = dsl::parse_with(&text, &decls).map_err(|d| Failure::Diagnostics(p.display().to_string(), d))?;
        decls.extend(user);
        label.push(p.display().to_string());
    }
    Ok((decls, label.join("+")))
}

fn ground(scene_path: &Path, rules: &RuleArgs, out_path: Option<&Path>, cfg: EngineConfig, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let (decls, label) = load_rules(rules)?;
    let scene = load_scene(scene_path, err)?;
    let engine = Engine::new(&scene, cfg, decls)?;
    let occ = engine.detect_all()?;
    let doc = json!({
        "scene": scene_path.display().to_string(),
        "rules": label,
        "occurrences": occ.iter().map(|o| o.to_json()).collect::<Vec<Value>>(),
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("json");
    text.push('\n');
    match out_path {
        Some(p) => write_file(p, &text),
        None => emit(out, &text),
    }
}

fn query(scene_path: &Path, rules: &RuleArgs, goal_text: &str, cfg: EngineConfig, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let (decls, _) = load_rules(rules)?;
    let goal = dsl::parse_goal(goal_text).map_err(|d| Failure::Diagnostics("goal".into(), d))?;
    let diags = dsl::check_goal(goal_text, &goal, &decls);
    if !diags.is_empty() {
        return Err(Failure::Diagnostics("goal".into(), diags));
    }
    let scene = load_scene(scene_path, err)?;
    let engine = Engine::new(&scene, cfg, decls)?;
    let sols = engine.solve(&goal)?;
    if sols.is_empty() {
        return emit(out, "no solutions\n");
    }
    let mut text = String::new();
    for s in sols {
        text.push_str(&s.to_string());
        text.push('\n');
    }
    emit(out, &text)
}

fn orientation_line(a: &SpatialPrimitive, b: &SpatialPrimitive, cfg: &EngineConfig) -> String {
    let (Some(va), Some(vb)) = (a.orientation(), b.orientation()) else {
        return "undefined".into();
    };
    let pa = OrientedPoint { p: a.centroid(), v: va };
    let pb = OrientedPoint { p: b.centroid(), v: vb };
    match relative_orientation(&pa, &pb, cfg.facing_half_angle_deg, cfg.alignment_deg) {
        Ok(r) => {
            let l: Vec<String> = r.labels().iter().map(|l| l.to_string()).collect();
            if l.is_empty() {
                "none".into()
            } else {
                l.join(" ")
            }
        }
        Err(_) => "undefined".into(),
    }
}

fn family_lines(a: &SpatialPrimitive, b: &SpatialPrimitive, family: Option<Family>, cfg: &EngineConfig) -> Vec<String> {
    let or_undef = |r: crate::Result<String>| r.unwrap_or_else(|_| "undefined".into());
    let all = [Family::Topology, Family::Qdc, Family::Orientation, Family::Size];
    all.into_iter()
        .filter(|f| family.is_none_or(|g| g == *f))
        .map(|f| match f {
            Family::Topology => format!("topology: {}", or_undef(topology(a, b, cfg.geom_tolerance).map(|l| l.to_string()))),
            Family::Qdc => format!("qdc: {}", qdc_of(a, b, cfg)),
            Family::Orientation => format!("orientation: {}", orientation_line(a, b, cfg)),
            Family::Size => format!("size: {}", or_undef(size_of_pair(a, b, cfg).map(|l| l.to_string()))),
        })
        .collect()
}

fn relations(scene_path: &Path, at: f64, pair: Option<&str>, family: Option<Family>, cfg: EngineConfig, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let scene = load_scene(scene_path, err)?;
    let pairs: Vec<(String, String)> = match pair {
        Some(p) => {
            let Some((a, b)) = p.split_once(',') else {
                return Err(Failure::Io(format!("--pair expects `a,b`, got `{p}`")));
            };
            for id in [a, b] {
                scene.history(id)?;
            }
            vec![(a.trim().to_string(), b.trim().to_string())]
        }
        None => {
            let ids: Vec<&String> = scene.histories().keys().collect();
            let mut v = Vec::new();
            for (i, a) in ids.iter().enumerate() {
                for b in &ids[i + 1..] {
                    v.push((a.to_string(), b.to_string()));
                }
            }
            v
        }
    };
    let mut text = String::new();
    for (a, b) in pairs {
        text.push_str(&format!("{a} {b}\n"));
        let sa = scene.history(&a)?.sample_at(at);
        let sb = scene.history(&b)?.sample_at(at);
        let lines = match (sa, sb) {
            (Ok(x), Ok(y)) => family_lines(&x, &y, family, &cfg),
            (Err(e), _) | (_, Err(e)) if pair.is_some() => return Err(e.into()),
            _ => vec!["not observed".into()],
        };
        for l in lines {
            text.push_str(&format!("  {l}\n"));
        }
    }
    emit(out, &text)
}

/// `foo.json` becomes `foo.truth.json`.
pub fn truth_path(scene_path: &Path) -> PathBuf {
    let stem = scene_path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    scene_path.with_file_name(format!("{stem}.truth.json"))
}

fn fixture(name: &str, seed: u64, jitter: f64, out_path: &Path) -> Outcome {
    if !(jitter.is_finite() && jitter >= 0.0) {
        return Err(Failure::Io(format!("--jitter must be a non-negative number, got {jitter}")));
    }
    let f = fixtures::fixture(name, FixtureParams { seed, jitter })?;
    write_file(out_path, &ingest::scene_to_string(&f.scene))?;
    write_file(&truth_path(out_path), &fixtures::truth_to_string(&f.truth))
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let cfg = load_config(cli.config.as_deref())?;
    if cli.print_config {
        return emit(out, &cfg.to_toml());
    }
    match cli.command {
        None => Err(Failure::Io("no command given; see --help".into())),
        Some(Command::Ground { scene, rules, out: o }) => ground(&scene, &rules, o.as_deref(), cfg, out, err),
        Some(Command::Query { scene, rules, goal }) => query(&scene, &rules, &goal, cfg, out, err),
        Some(Command::Relations {
            scene,
            at,
            pair,
            family,
        }) => relations(&scene, at, pair.as_deref(), family, cfg, out, err),
        Some(Command::Fixture { name, seed, jitter, out: o }) => fixture(&name, seed, jitter, &o),
    }
}

/// Runs the tool and returns its exit code: 0 on success, 1 for I/O and
/// usage errors, 2 for invalid input or rule diagnostics.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                1
            } else {
                let _ = out.write_all(text.as_bytes());
                0
            };
        }
    };
    match dispatch(cli, out, err) {
        Ok(()) => 0,
        Err(f) => {
            match &f {
                Failure::Io(m) | Failure::Invalid(m) => {
                    let _ = writeln!(err, "error: {m}");
                }
                Failure::Diagnostics(src, diags) => {
                    for d in diags {
                        let _ = writeln!(err, "{src}: {d}");
                    }
                }
            }
            f.code()
        }
    }
}
