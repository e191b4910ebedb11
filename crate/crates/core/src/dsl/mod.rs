//! Rule language: fluent and interaction declarations.
//!
//! ```text
//! interaction reach_for(P, O) during D :-
//!     approaching(body_part(hand, P), O) holds-in D1,
//!     touches(body_part(hand, P), O) holds-in D2,
//!     meets(D1, D2), starts(D1, D), ends(D2, D).
//! ```

pub mod ast;
pub mod diagnostic;
pub mod lexer;
pub mod parser;
pub mod printer;
pub mod resolve;

use std::sync::OnceLock;

pub use ast::{Atom, Decl, DeclKind, Goal, GoalKind, Literal, Term};
pub use diagnostic::{Diagnostic, Severity};
pub use parser::parse_goal;
pub use printer::pretty;

const STDLIB: &str = include_str!("../../rules/stdlib.qsr");

/// Parses and resolves a rule file on its own.
pub fn parse(text: &str) -> Result<Vec<Decl>, Vec<Diagnostic>> {
    parse_with(text, &[])
}

/// Parses a rule file that may refer to the already loaded `library`.
pub fn parse_with(text: &str, library: &[Decl]) -> Result<Vec<Decl>, Vec<Diagnostic>> {
    let (decls, mut diags) = parser::parse_syntax(text);
    diags.extend(resolve::check(&decls, text, library));
    if diags.is_empty() {
        Ok(decls)
    } else {
        diags.sort_by_key(|d| (d.line, d.column));
        Err(diags)
    }
}

pub fn standard_library_source() -> &'static str {
    STDLIB
}

pub fn load_standard_library() -> Vec<Decl> {
    static LIB: OnceLock<Vec<Decl>> = OnceLock::new();
    LIB.get_or_init(|| parse(STDLIB).expect("embedded rule library is valid"))
        .clone()
}

/// Checks a goal's predicate against built-ins and `decls`.
pub fn check_goal(text: &str, goal: &Goal, decls: &[Decl]) -> Vec<Diagnostic> {
    let scope: Vec<&Decl> = decls.iter().collect();
    let span = goal.atom.span;
    match resolve::lookup(&goal.atom.name, &scope) {
        None => vec![Diagnostic::error(
            text,
            span.line,
            span.column,
            format!("unknown predicate {}/{}", goal.atom.name, goal.atom.args.len()),
        )],
        Some(r) if r.arity() != goal.atom.args.len() => vec![Diagnostic::error(
            text,
            span.line,
            span.column,
            format!(
                "arity mismatch: {} takes {} argument(s), found {}",
                goal.atom.name,
                r.arity(),
                goal.atom.args.len()
            ),
        )],
        Some(_) => Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file() {
        assert_eq!(parse("").unwrap(), vec![]);
        assert_eq!(parse("  % only a comment\n").unwrap(), vec![]);
    }

    #[test]
    fn reach_for_transcription() {
        let src = "interaction reach_for(Oi, Oj) during D :-\n  approaching(body_part(hand, Oi), Oj) holds-in Di,\n  touches(body_part(hand, Oi), Oj) holds-in Dj,\n  meets(Di, Dj), starts(Di, D), ends(Dj, D).\n";
        let decls = parse(src).unwrap();
        assert_eq!(decls.len(), 1);
        let holds = decls[0].body.iter().filter(|l| matches!(l, Literal::HoldsIn { .. })).count();
        let allen = decls[0].body.iter().filter(|l| matches!(l, Literal::Allen { .. })).count();
        assert_eq!((decls[0].kind, holds, allen), (DeclKind::Interaction, 2, 3));
    }

    #[test]
    fn standard_library() {
        let lib = load_standard_library();
        let has = |n: &str, a: usize| lib.iter().any(|d| d.name == n && d.arity() == a && d.kind == DeclKind::Interaction);
        assert!(has("reach_for", 2));
        assert!(has("passing_over", 3));
        for n in ["pick_up", "put_down", "grasp", "release"] {
            assert!(has(n, 2), "{n}");
        }
        assert!(has("move_towards", 3));
        assert_eq!(parse(&pretty(&lib)).unwrap(), lib);
    }

    #[test]
    fn user_rules_see_library() {
        let lib = load_standard_library();
        let src = "interaction twice(P, O) during D :- reach_for(P, O) holds-in A, reach_for(P, O) holds-in B, before(A, B), starts(A, D), ends(B, D).";
        assert!(parse(src).is_err());
        assert!(parse_with(src, &lib).is_ok());
    }

    #[test]
    fn goal_checking() {
        let g = parse_goal("occurs-in(flies(X), D)").unwrap();
        let d = check_goal("occurs-in(flies(X), D)", &g, &[]);
        assert_eq!(d[0].message, "unknown predicate flies/1");
        assert_eq!(d[0].column, 11);
    }

    #[test]
    fn arbitrary_input_never_panics() {
        for s in ["(((", "interaction", "fluent f(", ":- .", "interaction a(X) during :- b.", "é%\n", "1.2.3", "body_part(", "-"] {
            let _ = parse(s);
            let _ = parse_goal(s);
        }
    }
}
