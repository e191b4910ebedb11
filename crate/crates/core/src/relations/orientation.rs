//! Facing and alignment relations between oriented points.

use serde::{Deserialize, Serialize};

use crate::entities::OrientedPoint;
use crate::error::{Error, Result};

labels!(OrientationLabel {
    FacingTowards => "facing_towards",
    FacingAway => "facing_away",
    SameDirection => "same_direction",
    OppositeDirection => "opposite_direction",
    Neutral => "neutral",
});

/// Both aspects of the relation of `a` to `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelativeOrientation {
    pub facing: OrientationLabel,
    pub alignment: OrientationLabel,
}

impl RelativeOrientation {
    /// The non-neutral labels.
    pub fn labels(&self) -> Vec<OrientationLabel> {
        [self.facing, self.alignment]
            .into_iter()
            .filter(|l| *l != OrientationLabel::Neutral)
            .collect()
    }
}

fn angle(u: crate::entities::Point3, v: crate::entities::Point3) -> Option<f64> {
    let (u, v) = (u.normalized()?, v.normalized()?);
    Some(u.dot(v).clamp(-1.0, 1.0).acos())
}

pub fn relative_orientation(
    a: &OrientedPoint,
    b: &OrientedPoint,
    facing_half_angle_deg: f64,
    alignment_deg: f64,
) -> Result<RelativeOrientation> {
    let half = facing_half_angle_deg.to_radians();
    let align = alignment_deg.to_radians();
    let pi = std::f64::consts::PI;
    let towards = angle(a.v, b.p - a.p).ok_or(Error::FacingUndefined)?;
    let facing = if towards < half {
        OrientationLabel::FacingTowards
    } else if towards > pi - half {
        OrientationLabel::FacingAway
    } else {
        OrientationLabel::Neutral
    };
    let between = angle(a.v, b.v).ok_or(Error::FacingUndefined)?;
    let alignment = if between < align {
        OrientationLabel::SameDirection
    } else if between > pi - align {
        OrientationLabel::OppositeDirection
    } else {
        OrientationLabel::Neutral
    };
    Ok(RelativeOrientation { facing, alignment })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entities::Point3;

    fn op(p: [f64; 3], v: [f64; 3]) -> OrientedPoint {
        OrientedPoint {
            p: Point3::from_array(p),
            v: Point3::from_array(v),
        }
    }

    #[test]
    fn named_relations() {
        let a = op([0.0; 3], [1.0, 0.0, 0.0]);
        let r = relative_orientation(&a, &op([2.0, 0.0, 0.0], [0.0, 1.0, 0.0]), 45.0, 30.0).unwrap();
        assert_eq!(r.facing, OrientationLabel::FacingTowards);
        assert_eq!(r.alignment, OrientationLabel::Neutral);
        let r = relative_orientation(&a, &op([-2.0, 0.5, 0.0], [1.0, 0.0, 0.0]), 45.0, 30.0).unwrap();
        assert_eq!(r.labels(), vec![OrientationLabel::FacingAway, OrientationLabel::SameDirection]);
        let r = relative_orientation(&a, &op([0.0, 2.0, 0.0], [-1.0, 0.0, 0.0]), 45.0, 30.0).unwrap();
        assert_eq!(r.labels(), vec![OrientationLabel::OppositeDirection]);
    }

    #[test]
    fn coincident_points_are_undefined() {
        let a = op([0.0; 3], [1.0, 0.0, 0.0]);
        assert_eq!(relative_orientation(&a, &a, 45.0, 30.0), Err(Error::FacingUndefined));
    }
}
