//! Rectangle and block algebra: per-axis Allen relations of box extents.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::allen::{relate, AllenLabel};
use super::topology::TopologyLabel;
use crate::entities::{Box3, SpatialPrimitive};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BlockLabel(pub Vec<AllenLabel>);

impl fmt::Display for BlockLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = self.0.iter().map(|l| l.name()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Per-axis relation over x, y (and z when `axes == 3`).
pub fn block_relation(b1: &Box3, b2: &Box3, axes: usize) -> Result<BlockLabel> {
    if !(axes == 2 || axes == 3) {
        return Err(Error::Rule(format!("block algebra needs 2 or 3 axes, got {axes}")));
    }
    Ok(BlockLabel(
        (0..axes)
            .map(|i| {
                relate(
                    b1.min.component(i),
                    b1.max.component(i),
                    b2.min.component(i),
                    b2.max.component(i),
                    0.0,
                )
            })
            .collect(),
    ))
}

pub fn block_relation_of(a: &SpatialPrimitive, b: &SpatialPrimitive, axes: usize) -> Result<BlockLabel> {
    match (a, b) {
        (SpatialPrimitive::Box(x), SpatialPrimitive::Box(y)) => block_relation(x, y, axes),
        _ => Err(Error::UnsupportedPair(a.kind(), b.kind())),
    }
}

/// RCC-8 label implied by the per-axis relations of two boxes.
pub fn topology_from_block(label: &BlockLabel) -> TopologyLabel {
    use AllenLabel::*;
    let axes = &label.0;
    if axes.iter().any(|l| matches!(l, Before | After)) {
        return TopologyLabel::Dc;
    }
    if axes.iter().any(|l| matches!(l, Meets | MetBy)) {
        return TopologyLabel::Ec;
    }
    if axes.iter().all(|l| *l == Equals) {
        return TopologyLabel::Eq;
    }
    let inside = axes.iter().all(|l| matches!(l, Starts | During | Finishes | Equals));
    let around = axes.iter().all(|l| matches!(l, StartedBy | Contains | FinishedBy | Equals));
    let strict_in = axes.iter().all(|l| *l == During);
    let strict_around = axes.iter().all(|l| *l == Contains);
    match (inside, around) {
        (true, _) => if strict_in { TopologyLabel::Ntpp } else { TopologyLabel::Tpp },
        (_, true) => if strict_around { TopologyLabel::Ntppi } else { TopologyLabel::Tppi },
        _ => TopologyLabel::Po,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entities::Point3;
    use AllenLabel::*;

    fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> Box3 {
        Box3::new(Point3::new(x0, y0, 0.0), Point3::new(x1, y1, 1.0))
    }

    #[test]
    fn per_axis_labels() {
        let a = rect(0.0, 0.0, 1.0, 1.0);
        assert_eq!(block_relation(&a, &a, 2).unwrap().0, vec![Equals, Equals]);
        assert_eq!(block_relation(&a, &a, 3).unwrap().0, vec![Equals, Equals, Equals]);
        assert_eq!(block_relation(&a, &rect(2.0, 0.0, 3.0, 1.0), 2).unwrap().0, vec![Before, Equals]);
        let b1 = rect(0.0, 1.0, 2.0, 4.0);
        let b2 = rect(1.0, 0.0, 3.0, 2.0);
        assert_eq!(block_relation(&b1, &b2, 2).unwrap().0, vec![Overlaps, OverlappedBy]);
        assert!(block_relation(&a, &a, 4).is_err());
        let p = SpatialPrimitive::Point(Point3::ORIGIN);
        assert!(matches!(block_relation_of(&p, &SpatialPrimitive::Box(a), 2), Err(Error::UnsupportedPair(..))));
    }

    #[test]
    fn implied_topology() {
        assert_eq!(topology_from_block(&BlockLabel(vec![Contains, Contains])), TopologyLabel::Ntppi);
        assert_eq!(topology_from_block(&BlockLabel(vec![During, Starts])), TopologyLabel::Tpp);
        assert_eq!(topology_from_block(&BlockLabel(vec![Meets, Overlaps])), TopologyLabel::Ec);
        assert_eq!(topology_from_block(&BlockLabel(vec![Overlaps, During])), TopologyLabel::Po);
    }
}
