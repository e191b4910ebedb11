//! Qualitative spatio-temporal grounding of recorded human activity.
//!
//! Object tracks and skeleton joints are abstracted into spatial entities and
//! space-time histories, related through qualitative calculi (mereotopology,
//! interval and block algebra, orientation, distance and size), turned into
//! fluent timelines, and matched against declarative interaction rules.

#[macro_use]
mod labels;

pub mod body;
pub mod cli;
pub mod config;
pub mod dsl;
pub mod engine;
pub mod entities;
pub mod error;
pub mod geometry;
pub mod ingest;
pub mod metrics;
pub mod motion;
pub mod relations;
pub mod scene;

pub use config::EngineConfig;
pub use entities::{
    Box3, DomainObject, LineSegment, OrientedPoint, Point3, PolyLine, Polygon, PrimitiveKind,
    SpaceTimeHistory, SpatialPrimitive, TimeInterval,
};
pub use error::{Error, Result};
pub use scene::{EntityRef, Scene};
