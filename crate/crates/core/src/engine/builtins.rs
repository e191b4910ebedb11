//! Built-in fluent predicates available to rules.

use std::fmt;

use crate::motion::MotionPredicate;
use crate::relations::{LrLabel, OrientationLabel, QdcLabel, SizeLabel, TopologyLabel};
use crate::relations::CoarseRelation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Builtin {
    Topology(TopologyLabel),
    Coarse(CoarseRelation),
    /// Within the adjacency threshold.
    Touches,
    /// Proper part, tangential or not.
    Inside,
    /// dc or ec.
    Discrete,
    Qdc(QdcLabel),
    Size(SizeLabel),
    Orientation(OrientationLabel),
    Lr(LrLabel),
    Motion(MotionPredicate),
}

impl Builtin {
    pub fn all() -> Vec<Builtin> {
        let mut v: Vec<Builtin> = TopologyLabel::ALL.iter().map(|l| Builtin::Topology(*l)).collect();
        v.extend(CoarseRelation::ALL.iter().map(|l| Builtin::Coarse(*l)));
        v.extend([Builtin::Touches, Builtin::Inside, Builtin::Discrete]);
        v.extend(QdcLabel::ALL.iter().map(|l| Builtin::Qdc(*l)));
        v.extend(SizeLabel::ALL.iter().map(|l| Builtin::Size(*l)));
        v.extend(
            OrientationLabel::ALL
                .iter()
                .filter(|l| **l != OrientationLabel::Neutral)
                .map(|l| Builtin::Orientation(*l)),
        );
        v.extend(LrLabel::ALL.iter().map(|l| Builtin::Lr(*l)));
        v.extend(MotionPredicate::ALL.iter().map(|l| Builtin::Motion(*l)));
        v
    }

    pub fn lookup(name: &str) -> Option<Builtin> {
        Builtin::all().into_iter().find(|b| b.name() == name)
    }

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Topology(l) => l.name(),
            Builtin::Coarse(l) => l.name(),
            Builtin::Touches => "touches",
            Builtin::Inside => "inside",
            Builtin::Discrete => "discrete",
            Builtin::Qdc(l) => l.name(),
            Builtin::Size(l) => l.name(),
            Builtin::Orientation(l) => l.name(),
            Builtin::Lr(l) => l.name(),
            Builtin::Motion(m) => m.name(),
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Builtin::Motion(m) => m.arity(),
            _ => 2,
        }
    }

    /// Static predicates look at one frame; motion predicates at a window.
    pub fn is_static(self) -> bool {
        !matches!(self, Builtin::Motion(_))
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Arity of a built-in predicate, if `name` is one.
pub fn builtin_arity(name: &str) -> Option<usize> {
    Builtin::lookup(name).map(Builtin::arity)
}
