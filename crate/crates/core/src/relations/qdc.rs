//! Qualitative distance and relative size, scaled by the objects' own size.

use crate::config::EngineConfig;
use crate::entities::SpatialPrimitive;
use crate::error::{Error, Result};
use crate::geometry;
use crate::metrics::{self, characteristic_length, size_of, MetricValue};
use crate::scene::Scene;

labels!(QdcLabel {
    Adjacent => "adjacent",
    Near => "near",
    Far => "far",
});

labels!(SizeLabel {
    Smaller => "smaller",
    EquiSized => "equi_sized",
    Larger => "larger",
});

/// Scale both distance thresholds are relative to.
pub fn reference_length(a: &SpatialPrimitive, b: &SpatialPrimitive, cfg: &EngineConfig) -> f64 {
    characteristic_length(a)
        .max(characteristic_length(b))
        .max(cfg.min_reference_length)
}

pub fn adjacency_threshold(a: &SpatialPrimitive, b: &SpatialPrimitive, cfg: &EngineConfig) -> f64 {
    cfg.qdc_adjacent_factor * reference_length(a, b, cfg)
}

pub fn qdc_label(distance: f64, reference: f64, cfg: &EngineConfig) -> QdcLabel {
    if distance < cfg.qdc_adjacent_factor * reference {
        QdcLabel::Adjacent
    } else if distance < cfg.qdc_near_factor * reference {
        QdcLabel::Near
    } else {
        QdcLabel::Far
    }
}

pub fn qdc_of(a: &SpatialPrimitive, b: &SpatialPrimitive, cfg: &EngineConfig) -> QdcLabel {
    qdc_label(geometry::primitive_distance(a, b), reference_length(a, b, cfg), cfg)
}

pub fn qdc(scene: &Scene, o1: &str, o2: &str, t: f64, cfg: &EngineConfig) -> Result<QdcLabel> {
    let a = scene.history(o1)?.sample_at(t)?;
    let b = scene.history(o2)?.sample_at(t)?;
    Ok(qdc_of(&a, &b, cfg))
}

pub fn size_label(a: MetricValue, b: MetricValue, ratio: f64) -> Result<SizeLabel> {
    if a.unit != b.unit {
        return Err(Error::UnitMismatch(a.unit, b.unit));
    }
    Ok(if a.value * ratio < b.value {
        SizeLabel::Smaller
    } else if b.value * ratio < a.value {
        SizeLabel::Larger
    } else {
        SizeLabel::EquiSized
    })
}

pub fn size_of_pair(a: &SpatialPrimitive, b: &SpatialPrimitive, cfg: &EngineConfig) -> Result<SizeLabel> {
    size_label(size_of(a), size_of(b), cfg.size_ratio)
}

pub fn size_relation(scene: &Scene, o1: &str, o2: &str, t: f64, cfg: &EngineConfig) -> Result<SizeLabel> {
    size_label(metrics::size(scene, o1, t)?, metrics::size(scene, o2, t)?, cfg.size_ratio)
}
