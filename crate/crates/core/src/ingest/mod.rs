//! Scene files and synthetic fixtures.

pub mod fixtures;
pub mod format;

pub use fixtures::{fixture, Fixture, FixtureParams, TruthEntry, FIXTURES};
pub use format::{load, parse_scene, save, scene_to_json, scene_to_string};
