use crate::relations::AllenLabel;

/// Source position of a node. Positions never take part in equality, so a
/// reparsed pretty-print compares equal to the original.
#[derive(Debug, Clone, Copy, Default)]
pub struct Span {
    pub line: usize,
    pub column: usize,
}

impl PartialEq for Span {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeclKind {
    Interaction,
    Fluent,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decl {
    pub kind: DeclKind,
    pub name: String,
    pub params: Vec<String>,
    /// Occurrence interval variable; interactions only.
    pub interval: Option<String>,
    pub body: Vec<Literal>,
    pub span: Span,
}

impl Decl {
    pub fn arity(&self) -> usize {
        self.params.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Literal {
    /// Class test on one term, e.g. `person(P)`.
    Guard { class: String, term: Term, span: Span },
    HoldsIn { atom: Atom, ivar: String, span: Span },
    Allen { op: AllenLabel, left: String, right: String, span: Span },
}

impl Literal {
    pub fn span(&self) -> Span {
        match self {
            Literal::Guard { span, .. } | Literal::HoldsIn { span, .. } | Literal::Allen { span, .. } => *span,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub name: String,
    pub args: Vec<Term>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    Const(String),
    /// `body_part(part, Person)`; the person may be a variable or an id.
    BodyPart { part: String, person: Box<Term> },
}

impl Term {
    pub fn vars(&self) -> Vec<&str> {
        match self {
            Term::Var(v) => vec![v.as_str()],
            Term::Const(_) => vec![],
            Term::BodyPart { person, .. } => person.vars(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GoalKind {
    /// Bare atom: occurrences of an interaction or intervals of a fluent.
    Bare,
    HoldsIn,
    OccursIn,
    HoldsAt(f64),
    OccursAt(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Goal {
    pub kind: GoalKind,
    pub atom: Atom,
    pub ivar: Option<String>,
}

pub fn is_var(name: &str) -> bool {
    name.chars().next().is_some_and(|c| c.is_ascii_uppercase() || c == '_')
}
