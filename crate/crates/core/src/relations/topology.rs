//! RCC-8 mereotopology. Boxes relate in 3D; anything involving a polygon is
//! judged on the ground-plane projection, boxes contributing their footprint.

use crate::entities::{Box3, Point3, Polygon, SpatialPrimitive};
use crate::error::{Error, Result};
use crate::geometry::{self, Vec2};

labels!(TopologyLabel {
    Dc => "dc",
    Ec => "ec",
    Po => "po",
    Tpp => "tpp",
    Ntpp => "ntpp",
    Tppi => "tppi",
    Ntppi => "ntppi",
    Eq => "eq",
});

labels!(Rcc5Label {
    Dr => "dr",
    Po => "po",
    Pp => "pp",
    Ppi => "ppi",
    Eq => "eq",
});

labels!(
    /// Coarse predicates: discrete, overlapping, connected, part-of. Several
    /// may hold at once.
    CoarseRelation {
        Dr => "dr",
        O => "o",
        C => "c",
        P => "p",
    }
);

impl TopologyLabel {
    pub fn converse(self) -> TopologyLabel {
        use TopologyLabel::*;
        match self {
            Tpp => Tppi,
            Ntpp => Ntppi,
            Tppi => Tpp,
            Ntppi => Ntpp,
            other => other,
        }
    }

    pub fn rcc5(self) -> Rcc5Label {
        use TopologyLabel::*;
        match self {
            Dc | Ec => Rcc5Label::Dr,
            Po => Rcc5Label::Po,
            Tpp | Ntpp => Rcc5Label::Pp,
            Tppi | Ntppi => Rcc5Label::Ppi,
            Eq => Rcc5Label::Eq,
        }
    }

    pub fn satisfies(self, coarse: CoarseRelation) -> bool {
        use TopologyLabel::*;
        match coarse {
            CoarseRelation::Dr => matches!(self, Dc | Ec),
            CoarseRelation::O => !matches!(self, Dc | Ec),
            CoarseRelation::C => self != Dc,
            CoarseRelation::P => matches!(self, Tpp | Ntpp | Eq),
        }
    }
}

/// RCC-8 label of `(a, b)`; boundaries are judged within `tol`.
pub fn topology(a: &SpatialPrimitive, b: &SpatialPrimitive, tol: f64) -> Result<TopologyLabel> {
    use SpatialPrimitive as S;
    let unsupported = || Error::UnsupportedPair(a.kind(), b.kind());
    let point = |p: &SpatialPrimitive| match p {
        S::Point(q) => Some(*q),
        S::OrientedPoint(op) => Some(op.p),
        _ => None,
    };
    match (a, b) {
        (S::Box(x), S::Box(y)) => Ok(box_box(x, y, tol)),
        (S::Box(x), _) if point(b).is_some() => Ok(point_box(point(b).unwrap(), x, tol).converse()),
        (_, S::Box(y)) if point(a).is_some() => Ok(point_box(point(a).unwrap(), y, tol)),
        (S::Polygon(x), S::Polygon(y)) => region_region(&ring(x)?, &ring(y)?, tol),
        (S::Polygon(x), S::Box(y)) => region_region(&ring(x)?, &ring(&y.footprint())?, tol),
        (S::Box(x), S::Polygon(y)) => region_region(&ring(&x.footprint())?, &ring(y)?, tol),
        (S::Polygon(x), _) if point(b).is_some() => Ok(point_region(point(b).unwrap().xy(), &ring(x)?, tol).converse()),
        (_, S::Polygon(y)) if point(a).is_some() => Ok(point_region(point(a).unwrap().xy(), &ring(y)?, tol)),
        _ => Err(unsupported()),
    }
}

fn box_box(a: &Box3, b: &Box3, tol: f64) -> TopologyLabel {
    use TopologyLabel::*;
    if geometry::box_box_distance(a, b) > tol {
        return Dc;
    }
    let overlap = (0..3)
        .map(|i| a.max.component(i).min(b.max.component(i)) - a.min.component(i).max(b.min.component(i)))
        .fold(f64::INFINITY, f64::min);
    if overlap <= tol {
        return Ec;
    }
    let within = |x: &Box3, y: &Box3| {
        (0..3).all(|i| {
            x.min.component(i) >= y.min.component(i) - tol && x.max.component(i) <= y.max.component(i) + tol
        })
    };
    let face_shared = (0..3).any(|i| {
        (a.min.component(i) - b.min.component(i)).abs() <= tol || (a.max.component(i) - b.max.component(i)).abs() <= tol
    });
    match (within(a, b), within(b, a)) {
        (true, true) => Eq,
        (true, false) => if face_shared { Tpp } else { Ntpp },
        (false, true) => if face_shared { Tppi } else { Ntppi },
        (false, false) => Po,
    }
}

fn point_box(p: Point3, b: &Box3, tol: f64) -> TopologyLabel {
    let d = geometry::point_box_distance(p, b);
    if d > tol {
        return TopologyLabel::Dc;
    }
    let depth = (0..3)
        .map(|i| (p.component(i) - b.min.component(i)).min(b.max.component(i) - p.component(i)))
        .fold(f64::INFINITY, f64::min);
    if depth <= tol {
        TopologyLabel::Ec
    } else {
        TopologyLabel::Ntpp
    }
}

fn ring(pg: &Polygon) -> Result<Vec<Vec2>> {
    let r: Vec<Vec2> = pg.vertices.iter().map(|v| v.xy()).collect();
    if geometry::signed_area2(&r).abs() <= geometry::EPS_AREA {
        return Err(Error::Degenerate("polygon has no ground-plane extent".into()));
    }
    Ok(r)
}

fn point_region(p: Vec2, r: &[Vec2], tol: f64) -> TopologyLabel {
    if geometry::ring_boundary_distance(p, r) <= tol {
        TopologyLabel::Ec
    } else if geometry::point_in_ring(p, r) {
        TopologyLabel::Ntpp
    } else {
        TopologyLabel::Dc
    }
}

#[derive(Default)]
struct PieceSummary {
    inside: bool,
    outside: bool,
    on: bool,
}

/// Splits `r`'s edges where they meet `other`'s boundary and classifies the
/// midpoint of each piece against `other`.
fn classify_pieces(r: &[Vec2], other: &[Vec2], tol: f64) -> PieceSummary {
    let mut out = PieceSummary::default();
    let n = r.len();
    let m = other.len();
    for i in 0..n {
        let (a, b) = (r[i], r[(i + 1) % n]);
        let ab = geometry::sub2(b, a);
        let len2 = geometry::dot2(ab, ab);
        let mut cuts = vec![0.0, 1.0];
        for j in 0..m {
            let (c, d) = (other[j], other[(j + 1) % m]);
            if let Some((t, _)) = geometry::segment_crossing2(a, b, c, d) {
                cuts.push(t);
            }
            for q in [c, d] {
                if geometry::point_segment_distance2(q, a, b) <= tol && len2 > 0.0 {
                    cuts.push((geometry::dot2(geometry::sub2(q, a), ab) / len2).clamp(0.0, 1.0));
                }
            }
        }
        cuts.sort_by(f64::total_cmp);
        let len = len2.sqrt();
        for w in cuts.windows(2) {
            if (w[1] - w[0]) * len <= tol {
                continue;
            }
            let mid = geometry::lerp2(a, b, (w[0] + w[1]) / 2.0);
            if geometry::ring_boundary_distance(mid, other) <= tol {
                out.on = true;
            } else if geometry::point_in_ring(mid, other) {
                out.inside = true;
            } else {
                out.outside = true;
            }
        }
    }
    out
}

fn rings_touch(a: &[Vec2], b: &[Vec2], tol: f64) -> bool {
    let (n, m) = (a.len(), b.len());
    (0..n).any(|i| {
        (0..m).any(|j| geometry::segment_distance2(a[i], a[(i + 1) % n], b[j], b[(j + 1) % m]) <= tol)
    })
}

fn region_region(a: &[Vec2], b: &[Vec2], tol: f64) -> Result<TopologyLabel> {
    use TopologyLabel::*;
    let pa = classify_pieces(a, b, tol);
    let pb = classify_pieces(b, a, tol);
    let touch = rings_touch(a, b, tol);
    if !pa.inside && !pa.outside && !pb.inside && !pb.outside {
        return Ok(Eq);
    }
    if !pa.inside && !pb.inside {
        return Ok(if touch { Ec } else { Dc });
    }
    let a_in_b = !pa.outside && !pb.inside;
    let b_in_a = !pb.outside && !pa.inside;
    Ok(match (a_in_b, b_in_a) {
        (true, _) => if touch { Tpp } else { Ntpp },
        (_, true) => if touch { Tppi } else { Ntppi },
        _ => Po,
    })
}
