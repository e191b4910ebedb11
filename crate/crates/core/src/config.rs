//! Engine thresholds. Loaded from a flat TOML file; every key is optional.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EngineConfig {
    /// Absolute tolerance for geometric predicates, metres.
    pub geom_tolerance: f64,
    /// Minimum speed counted as movement, m/s.
    pub v_min: f64,
    /// Smoothing window for trend predicates, seconds.
    pub window: f64,
    pub qdc_adjacent_factor: f64,
    pub qdc_near_factor: f64,
    /// Lower bound on the QDC reference length, metres.
    pub min_reference_length: f64,
    pub size_ratio: f64,
    pub growth_ratio: f64,
    pub facing_half_angle_deg: f64,
    pub alignment_deg: f64,
    pub parallel_angle_deg: f64,
    pub parallel_distance_variation: f64,
    pub curved_min_turn_deg: f64,
    pub cyclic_margin_deg: f64,
    pub rotation_min_deg: f64,
    /// Margin a distance must drop (or rise) by to count as a trend, metres.
    pub trend_noise_margin: f64,
    /// Shortest timeline interval kept, seconds.
    pub min_duration: f64,
    /// Gaps up to this length between true runs are bridged, seconds.
    pub gap_merge: f64,
    /// Endpoint tolerance when comparing matched intervals, seconds.
    pub allen_tolerance: f64,
    /// Joints below this confidence count as missing.
    pub min_confidence: f64,
    /// Compute timelines on the rayon pool.
    pub parallel: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            geom_tolerance: 1e-7,
            v_min: 0.02,
            window: 0.2,
            qdc_adjacent_factor: 0.1,
            qdc_near_factor: 2.0,
            min_reference_length: 0.05,
            size_ratio: 1.2,
            growth_ratio: 1.05,
            facing_half_angle_deg: 45.0,
            alignment_deg: 30.0,
            parallel_angle_deg: 15.0,
            parallel_distance_variation: 0.1,
            curved_min_turn_deg: 30.0,
            cyclic_margin_deg: 15.0,
            rotation_min_deg: 30.0,
            trend_noise_margin: 0.01,
            min_duration: 0.1,
            gap_merge: 0.1,
            allen_tolerance: 0.07,
            min_confidence: 0.3,
            parallel: true,
        }
    }
}

impl EngineConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: EngineConfig =
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.check()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("flat config always serialises")
    }

    fn check(&self) -> Result<()> {
        let positive = [
            ("v_min", self.v_min),
            ("window", self.window),
            ("qdc_adjacent_factor", self.qdc_adjacent_factor),
            ("qdc_near_factor", self.qdc_near_factor),
            ("size_ratio", self.size_ratio),
            ("growth_ratio", self.growth_ratio),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        let non_negative = [
            ("geom_tolerance", self.geom_tolerance),
            ("min_reference_length", self.min_reference_length),
            ("trend_noise_margin", self.trend_noise_margin),
            ("min_duration", self.min_duration),
            ("gap_merge", self.gap_merge),
            ("allen_tolerance", self.allen_tolerance),
            ("min_confidence", self.min_confidence),
        ];
        for (name, v) in non_negative {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::Config(format!("{name} must be non-negative, got {v}")));
            }
        }
        if self.qdc_adjacent_factor >= self.qdc_near_factor {
            return Err(Error::Config(
                "qdc_adjacent_factor must be below qdc_near_factor".into(),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let cfg = EngineConfig::default();
        assert_eq!(EngineConfig::from_toml(&cfg.to_toml()).unwrap(), cfg);
    }

    #[test]
    fn partial_file_keeps_defaults() {
        let cfg = EngineConfig::from_toml("v_min = 0.05\nparallel = false\n").unwrap();
        assert_eq!(cfg.v_min, 0.05);
        assert!(!cfg.parallel);
        assert_eq!(cfg.window, 0.2);
    }

    #[test]
    fn rejects_unknown_and_bad_values() {
        assert!(EngineConfig::from_toml("speed = 1").is_err());
        assert!(EngineConfig::from_toml("window = -1.0").is_err());
        assert!(EngineConfig::from_toml("qdc_adjacent_factor = 3.0").is_err());
    }
}
