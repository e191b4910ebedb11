use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::entities::TimeInterval;
use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AllenLabel {
    Before,
    Meets,
    Overlaps,
    Starts,
    During,
    Finishes,
    Equals,
    After,
    MetBy,
    OverlappedBy,
    StartedBy,
    Contains,
    FinishedBy,
}

impl AllenLabel {
    pub const ALL: [AllenLabel; 13] = [
        AllenLabel::Before,
        AllenLabel::Meets,
        AllenLabel::Overlaps,
        AllenLabel::Starts,
        AllenLabel::During,
        AllenLabel::Finishes,
        AllenLabel::Equals,
        AllenLabel::After,
        AllenLabel::MetBy,
        AllenLabel::OverlappedBy,
        AllenLabel::StartedBy,
        AllenLabel::Contains,
        AllenLabel::FinishedBy,
    ];

    pub fn converse(self) -> AllenLabel {
        use AllenLabel::*;
        match self {
            Before => After,
            Meets => MetBy,
            Overlaps => OverlappedBy,
            Starts => StartedBy,
            During => Contains,
            Finishes => FinishedBy,
            Equals => Equals,
            After => Before,
            MetBy => Meets,
            OverlappedBy => Overlaps,
            StartedBy => Starts,
            Contains => During,
            FinishedBy => Finishes,
        }
    }

    pub fn name(self) -> &'static str {
        use AllenLabel::*;
        match self {
            Before => "before",
            Meets => "meets",
            Overlaps => "overlaps",
            Starts => "starts",
            During => "during",
            Finishes => "finishes",
            Equals => "equals",
            After => "after",
            MetBy => "met_by",
            OverlappedBy => "overlapped_by",
            StartedBy => "started_by",
            Contains => "contains",
            FinishedBy => "finished_by",
        }
    }
}

impl fmt::Display for AllenLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AllenLabel {
    type Err = Error;

    /// `ends` and `precedes` are accepted as aliases.
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "ends" => Ok(AllenLabel::Finishes),
            "precedes" => Ok(AllenLabel::Before),
            _ => AllenLabel::ALL
                .into_iter()
                .find(|l| l.name() == s)
                .ok_or_else(|| Error::Rule(format!("unknown interval relation `{s}`"))),
        }
    }
}

fn cmp_tol(a: f64, b: f64, tol: f64) -> Ordering {
    if (a - b).abs() <= tol {
        Ordering::Equal
    } else if a < b {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

/// Allen relation of `[s1, e1]` to `[s2, e2]`, treating endpoints closer
/// than `tol` as equal. With `tol = 0` this is the exact relation.
pub fn relate(s1: f64, e1: f64, s2: f64, e2: f64, tol: f64) -> AllenLabel {
    use AllenLabel::*;
    use Ordering::*;
    let ss = cmp_tol(s1, s2, tol);
    let ee = cmp_tol(e1, e2, tol);
    let es = cmp_tol(e1, s2, tol);
    let se = cmp_tol(s1, e2, tol);
    if es == Less {
        return Before;
    }
    if se == Greater {
        return After;
    }
    if es == Equal && ss == Less && ee == Less {
        return Meets;
    }
    if se == Equal && ss == Greater && ee == Greater {
        return MetBy;
    }
    match (ss, ee) {
        (Equal, Equal) => Equals,
        (Equal, Less) => Starts,
        (Equal, Greater) => StartedBy,
        (Greater, Equal) => Finishes,
        (Less, Equal) => FinishedBy,
        (Greater, Less) => During,
        (Less, Greater) => Contains,
        (Less, Less) => Overlaps,
        (Greater, Greater) => OverlappedBy,
    }
}

pub fn interval_relation(i1: &TimeInterval, i2: &TimeInterval) -> AllenLabel {
    relate(i1.start, i1.end, i2.start, i2.end, 0.0)
}

fn table() -> &'static [[BTreeSet<AllenLabel>; 13]; 13] {
    static TABLE: OnceLock<[[BTreeSet<AllenLabel>; 13]; 13]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t: [[BTreeSet<AllenLabel>; 13]; 13] = Default::default();
        // six endpoints take at most six distinct values, so ranks 0..6 realise
        // every qualitative configuration
        let intervals: Vec<(f64, f64)> = (0..6)
            .flat_map(|a| ((a + 1)..6).map(move |b| (a as f64, b as f64)))
            .collect();
        for a in &intervals {
            for b in &intervals {
                let r1 = relate(a.0, a.1, b.0, b.1, 0.0);
                for c in &intervals {
                    let r2 = relate(b.0, b.1, c.0, c.1, 0.0);
                    let r3 = relate(a.0, a.1, c.0, c.1, 0.0);
                    t[r1 as usize][r2 as usize].insert(r3);
                }
            }
        }
        t
    })
}

/// Possible relations of (i1, i3) given r1(i1, i2) and r2(i2, i3).
pub fn compose(r1: AllenLabel, r2: AllenLabel) -> BTreeSet<AllenLabel> {
    table()[r1 as usize][r2 as usize].clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use AllenLabel::*;

    fn iv(a: f64, b: f64) -> TimeInterval {
        TimeInterval::new(a, b).unwrap()
    }

    #[test]
    fn basic_relations() {
        assert_eq!(interval_relation(&iv(1.0, 2.0), &iv(3.0, 4.0)), Before);
        assert_eq!(interval_relation(&iv(1.0, 3.0), &iv(3.0, 5.0)), Meets);
        assert_eq!(interval_relation(&iv(2.0, 3.0), &iv(1.0, 5.0)), During);
        assert_eq!(interval_relation(&iv(1.0, 3.0), &iv(2.0, 5.0)), Overlaps);
        assert_eq!(interval_relation(&iv(1.0, 2.0), &iv(1.0, 5.0)), Starts);
        assert_eq!(interval_relation(&iv(4.0, 5.0), &iv(1.0, 5.0)), Finishes);
        assert_eq!(interval_relation(&iv(1.0, 5.0), &iv(1.0, 5.0)), Equals);
    }

    #[test]
    fn tolerance_snaps_endpoints() {
        assert_eq!(relate(0.0, 1.0, 1.03, 2.0, 0.05), Meets);
        assert_eq!(relate(0.0, 1.0, 1.03, 2.0, 0.0), Before);
        assert_eq!(relate(0.0, 0.1, 0.0, 0.1, 0.07), Equals);
        assert_eq!(relate(0.02, 1.0, 0.0, 2.0, 0.05), Starts);
    }

    #[test]
    fn names_and_aliases() {
        for l in AllenLabel::ALL {
            assert_eq!(l.name().parse::<AllenLabel>().unwrap(), l);
            assert_eq!(l.converse().converse(), l);
        }
        assert_eq!("ends".parse::<AllenLabel>().unwrap(), Finishes);
        assert_eq!(serde_json::to_string(&MetBy).unwrap(), "\"met_by\"");
    }

    #[test]
    fn textbook_compositions() {
        assert_eq!(compose(Before, Before), BTreeSet::from([Before]));
        for x in AllenLabel::ALL {
            assert_eq!(compose(Equals, x), BTreeSet::from([x]));
            assert_eq!(compose(x, Equals), BTreeSet::from([x]));
        }
        assert_eq!(compose(Meets, During), BTreeSet::from([Overlaps, During, Starts]));
        assert_eq!(compose(Overlaps, Overlaps), BTreeSet::from([Before, Meets, Overlaps]));
        assert_eq!(compose(Meets, Meets), BTreeSet::from([Before]));
        assert_eq!(compose(During, Contains).len(), 13);
        assert_eq!(compose(Before, After).len(), 13);
    }

    #[test]
    fn composition_converse_identity() {
        for a in AllenLabel::ALL {
            for b in AllenLabel::ALL {
                let lhs: BTreeSet<_> = compose(a, b).into_iter().map(AllenLabel::converse).collect();
                assert_eq!(lhs, compose(b.converse(), a.converse()), "{a} ∘ {b}");
            }
        }
    }
}
