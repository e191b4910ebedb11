use std::fmt::{self, Display, Write};

use super::ast::{Atom, Decl, DeclKind, Goal, GoalKind, Literal, Term};

impl Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) | Term::Const(v) => f.write_str(v),
            Term::BodyPart { part, person } => write!(f, "body_part({part}, {person})"),
        }
    }
}

impl Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.name)?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

impl Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Guard { class, term, .. } => write!(f, "{class}({term})"),
            Literal::HoldsIn { atom, ivar, .. } => write!(f, "{atom} holds-in {ivar}"),
            Literal::Allen { op, left, right, .. } => write!(f, "{op}({left}, {right})"),
        }
    }
}

impl Display for Decl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kw = match self.kind {
            DeclKind::Interaction => "interaction",
            DeclKind::Fluent => "fluent",
        };
        write!(f, "{kw} {}({})", self.name, self.params.join(", "))?;
        if let Some(d) = &self.interval {
            write!(f, " during {d}")?;
        }
        f.write_str(" :-")?;
        for (i, l) in self.body.iter().enumerate() {
            let end = if i + 1 == self.body.len() { "." } else { "," };
            write!(f, "\n    {l}{end}")?;
        }
        Ok(())
    }
}

impl Display for Goal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let iv = self.ivar.as_deref().unwrap_or("D");
        match self.kind {
            GoalKind::Bare => write!(f, "{}", self.atom),
            GoalKind::HoldsIn => write!(f, "holds-in({}, {iv})", self.atom),
            GoalKind::OccursIn => write!(f, "occurs-in({}, {iv})", self.atom),
            GoalKind::HoldsAt(t) => write!(f, "holds-at({}, {t})", self.atom),
            GoalKind::OccursAt(t) => write!(f, "occurs-at({}, {t})", self.atom),
        }
    }
}

/// Canonical source text for `decls`; parsing it gives back equal declarations.
pub fn pretty(decls: &[Decl]) -> String {
    let mut out = String::new();
    for (i, d) in decls.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let _ = writeln!(out, "{d}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::parser::parse_syntax;
    use super::*;

    #[test]
    fn round_trip() {
        let src = "interaction r(P,O) during D :- person(P), approaching(body_part(hand,P),O) holds-in D1,touches(body_part(hand,P),O) holds-in D2, meets(D1,D2), ends(D2,D).\nfluent m(A) :- moving(A) holds-in T.";
        let (a, d) = parse_syntax(src);
        assert!(d.is_empty());
        let printed = pretty(&a);
        assert!(printed.contains("    finishes(D2, D)."));
        let (b, d) = parse_syntax(&printed);
        assert!(d.is_empty());
        assert_eq!(a, b);
        assert_eq!(pretty(&b), printed);
    }
}
