//! Left/right relation of a point to a directed segment, on the ground plane.

use crate::entities::{LineSegment, Point3};
use crate::error::{Error, Result};
use crate::geometry;

labels!(LrLabel {
    Left => "left",
    Right => "right",
    Collinear => "collinear",
    Front => "front",
    Back => "back",
    On => "on",
});

impl LrLabel {
    /// Label seen from the reversed segment.
    pub fn reversed(self) -> LrLabel {
        match self {
            LrLabel::Left => LrLabel::Right,
            LrLabel::Right => LrLabel::Left,
            LrLabel::Front => LrLabel::Back,
            LrLabel::Back => LrLabel::Front,
            other => other,
        }
    }
}

/// Off-line points are left or right. On the carrier line: `front` beyond
/// the end, `back` before the start, `on` strictly inside the segment, and
/// `collinear` at either endpoint.
pub fn lr(seg: &LineSegment, p: Point3, tol: f64) -> Result<LrLabel> {
    let a = seg.p1.xy();
    let b = seg.p2.xy();
    let q = p.xy();
    let ab = geometry::sub2(b, a);
    let len = geometry::norm2(ab);
    if len <= tol {
        return Err(Error::Degenerate("segment has no ground-plane extent".into()));
    }
    let aq = geometry::sub2(q, a);
    let side = geometry::cross2(ab, aq) / len;
    if side > tol {
        return Ok(LrLabel::Left);
    }
    if side < -tol {
        return Ok(LrLabel::Right);
    }
    let t = geometry::dot2(aq, ab) / (len * len);
    let eps = tol / len;
    Ok(if t > 1.0 + eps {
        LrLabel::Front
    } else if t < -eps {
        LrLabel::Back
    } else if t > eps && t < 1.0 - eps {
        LrLabel::On
    } else {
        LrLabel::Collinear
    })
}
