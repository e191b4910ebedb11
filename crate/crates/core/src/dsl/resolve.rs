use std::collections::{BTreeMap, BTreeSet};

use super::ast::{Atom, Decl, DeclKind, Literal, Span, Term};
use super::diagnostic::Diagnostic;
use crate::body::BodyPartId;
use crate::engine::builtins::builtin_arity;

/// What a predicate name refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resolved {
    Builtin(usize),
    Declared(DeclKind, usize),
}

impl Resolved {
    pub fn arity(self) -> usize {
        match self {
            Resolved::Builtin(n) | Resolved::Declared(_, n) => n,
        }
    }
}

pub fn lookup(name: &str, decls: &[&Decl]) -> Option<Resolved> {
    if let Some(n) = builtin_arity(name) {
        return Some(Resolved::Builtin(n));
    }
    decls
        .iter()
        .find(|d| d.name == name)
        .map(|d| Resolved::Declared(d.kind, d.arity()))
}

struct Checker<'a> {
    text: &'a str,
    diags: Vec<Diagnostic>,
}

impl Checker<'_> {
    fn err(&mut self, span: Span, msg: impl Into<String>) {
        self.diags.push(Diagnostic::error(self.text, span.line, span.column, msg));
    }

    fn atom(&mut self, atom: &Atom, scope: &[&Decl]) {
        match lookup(&atom.name, scope) {
            None => self.err(atom.span, format!("unknown predicate {}/{}", atom.name, atom.args.len())),
            Some(r) if r.arity() != atom.args.len() => self.err(
                atom.span,
                format!(
                    "arity mismatch: {} takes {} argument(s), found {}",
                    atom.name,
                    r.arity(),
                    atom.args.len()
                ),
            ),
            Some(_) => {}
        }
        for t in &atom.args {
            self.term(t, atom.span);
        }
    }

    fn term(&mut self, t: &Term, span: Span) {
        if let Term::BodyPart { part, .. } = t {
            if part.parse::<BodyPartId>().is_err() {
                self.err(span, format!("unknown body part `{part}`"));
            }
        }
    }
}

/// Name resolution and well-formedness of `decls`, whose spans refer to
/// `text`. `library` declarations are visible but not checked.
pub fn check(decls: &[Decl], text: &str, library: &[Decl]) -> Vec<Diagnostic> {
    let mut c = Checker {
        text,
        diags: Vec::new(),
    };
    let scope: Vec<&Decl> = decls.iter().chain(library).collect();

    let mut seen: BTreeSet<&str> = library.iter().map(|d| d.name.as_str()).collect();
    for d in decls {
        if builtin_arity(&d.name).is_some() {
            c.err(d.span, format!("`{}` is a built-in predicate and cannot be redefined", d.name));
        } else if !seen.insert(&d.name) {
            c.err(d.span, format!("duplicate declaration of `{}`", d.name));
        }
    }

    for d in decls {
        check_decl(&mut c, d, &scope);
    }
    check_cycles(&mut c, decls, &scope);
    c.diags.sort_by_key(|d| (d.line, d.column));
    c.diags
}

fn check_decl(c: &mut Checker<'_>, d: &Decl, scope: &[&Decl]) {
    let mut params = BTreeSet::new();
    for p in &d.params {
        if !params.insert(p.as_str()) {
            c.err(d.span, format!("parameter `{p}` repeated"));
        }
    }
    let mut object_vars: BTreeSet<&str> = BTreeSet::new();
    let mut bound_ivars: BTreeSet<&str> = BTreeSet::new();
    for lit in &d.body {
        match lit {
            Literal::Guard { class, term, span } => {
                if lookup(class, scope).is_some() {
                    c.err(*span, format!("`{class}` is a predicate; write `{class}(..) holds-in T`"));
                }
                match term {
                    Term::BodyPart { .. } => c.err(*span, "class guards apply to objects, not body parts"),
                    t => object_vars.extend(t.vars()),
                }
            }
            Literal::HoldsIn { atom, ivar, span } => {
                c.atom(atom, scope);
                for t in &atom.args {
                    object_vars.extend(t.vars());
                }
                if d.interval.as_deref() == Some(ivar.as_str()) {
                    c.err(*span, format!("occurrence interval `{ivar}` cannot be bound by holds-in"));
                }
                bound_ivars.insert(ivar);
            }
            Literal::Allen { .. } => {}
        }
    }
    if !d.body.iter().any(|l| matches!(l, Literal::HoldsIn { .. })) {
        c.err(d.span, format!("`{}` has no holds-in literal", d.name));
    }
    for lit in &d.body {
        if let Literal::Allen { left, right, span, .. } = lit {
            for v in [left, right] {
                if !bound_ivars.contains(v.as_str()) && d.interval.as_deref() != Some(v.as_str()) {
                    c.err(*span, format!("unbound interval variable `{v}`"));
                }
            }
        }
    }
    for v in &object_vars {
        if bound_ivars.contains(v) || d.interval.as_deref() == Some(*v) {
            c.err(d.span, format!("`{v}` is used both as an interval and as an object"));
        }
    }
    for p in &d.params {
        if !object_vars.contains(p.as_str()) {
            c.err(d.span, format!("parameter `{p}` does not occur in the body"));
        }
    }
}

fn check_cycles(c: &mut Checker<'_>, decls: &[Decl], scope: &[&Decl]) {
    let names: BTreeSet<&str> = scope.iter().map(|d| d.name.as_str()).collect();
    let deps: BTreeMap<&str, Vec<&str>> = scope
        .iter()
        .map(|d| {
            let refs = d
                .body
                .iter()
                .filter_map(|l| match l {
                    Literal::HoldsIn { atom, .. } if names.contains(atom.name.as_str()) => Some(atom.name.as_str()),
                    _ => None,
                })
                .collect();
            (d.name.as_str(), refs)
        })
        .collect();
    for d in decls {
        let mut stack = deps.get(d.name.as_str()).cloned().unwrap_or_default();
        let mut visited = BTreeSet::new();
        while let Some(n) = stack.pop() {
            if n == d.name {
                c.err(d.span, format!("`{}` is defined in terms of itself", d.name));
                break;
            }
            if visited.insert(n) {
                stack.extend(deps.get(n).into_iter().flatten());
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::parser::parse_syntax;
    use super::*;

    fn diags(src: &str) -> Vec<Diagnostic> {
        let (decls, d) = parse_syntax(src);
        assert!(d.is_empty(), "{d:?}");
        check(&decls, src, &[])
    }

    #[test]
    fn unknown_predicate_position() {
        let src = "% birds\ninteraction f(O) during D :-\n    flies(O) holds-in D1, equals(D, D1).\n";
        let d = diags(src);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].message, "unknown predicate flies/1");
        assert_eq!((d[0].line, d[0].column), (3, 5));
    }

    #[test]
    fn structural_errors() {
        let msgs = |s: &str| diags(s).into_iter().map(|d| d.message).collect::<Vec<_>>();
        assert!(msgs("fluent f(A, B) :- moving(A, B) holds-in T.")[0].starts_with("arity mismatch"));
        assert_eq!(
            msgs("interaction f(A) during D :- moving(A) holds-in T, meets(T, U).")[0],
            "unbound interval variable `U`"
        );
        assert_eq!(
            msgs("fluent f(A, B) :- moving(A) holds-in T.")[0],
            "parameter `B` does not occur in the body"
        );
        assert!(msgs("fluent moving(A) :- stationary(A) holds-in T.")[0].contains("built-in"));
        assert!(msgs("fluent f(A) :- g(A) holds-in T.\nfluent g(A) :- f(A) holds-in T.")[0].contains("itself"));
        assert_eq!(msgs("fluent f(A) :- touches(body_part(wing, A), A) holds-in T.")[0], "unknown body part `wing`");
        assert!(msgs("fluent f(A) :- moving(A) holds-in T.\nfluent f(A) :- moving(A) holds-in T.")[0].starts_with("duplicate"));
        assert!(msgs("fluent f(A) :- moving(A) holds-in T, moving(A).")[0].contains("is a predicate"));
    }

    #[test]
    fn clean_rule_passes() {
        assert!(diags("interaction f(P, O) during D :- person(P), touches(body_part(hand, P), O) holds-in T, equals(D, T).").is_empty());
    }
}
