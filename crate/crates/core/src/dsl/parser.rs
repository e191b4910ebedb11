use super::ast::{is_var, Atom, Decl, DeclKind, Goal, GoalKind, Literal, Span, Term};
use super::diagnostic::Diagnostic;
use super::lexer::{tokenize, Tok, Token};
use crate::relations::AllenLabel;

struct Parser<'a> {
    text: &'a str,
    toks: Vec<Token>,
    pos: usize,
}

type PResult<T> = std::result::Result<T, Diagnostic>;

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> PResult<Self> {
        Ok(Self {
            text,
            toks: tokenize(text)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn span(&self) -> Span {
        let t = self.peek();
        Span {
            line: t.line,
            column: t.column,
        }
    }

    fn error_here(&self, msg: impl Into<String>) -> Diagnostic {
        let t = self.peek();
        Diagnostic::error(self.text, t.line, t.column, msg)
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if self.peek().tok == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error_here(format!("expected {}, found {}", tok.describe(), self.peek().tok.describe())))
        }
    }

    fn ident(&mut self, what: &str) -> PResult<String> {
        match &self.peek().tok {
            Tok::Ident(s) => {
                let s = s.clone();
                self.bump();
                Ok(s)
            }
            other => Err(self.error_here(format!("expected {what}, found {}", other.describe()))),
        }
    }

    fn name(&mut self, what: &str) -> PResult<String> {
        let span = self.span();
        let s = self.ident(what)?;
        if is_var(&s) {
            return Err(Diagnostic::error(
                self.text,
                span.line,
                span.column,
                format!("expected {what}, found variable `{s}`"),
            ));
        }
        Ok(s)
    }

    fn var(&mut self, what: &str) -> PResult<String> {
        let span = self.span();
        let s = self.ident(what)?;
        if !is_var(&s) {
            return Err(Diagnostic::error(
                self.text,
                span.line,
                span.column,
                format!("expected {what} (uppercase initial), found `{s}`"),
            ));
        }
        Ok(s)
    }

    /// Skips past the next `.` so parsing can resume at the following declaration.
    fn recover(&mut self) {
        loop {
            match self.bump().tok {
                Tok::Dot | Tok::Eof => return,
                _ => {}
            }
        }
    }

    fn file(&mut self) -> (Vec<Decl>, Vec<Diagnostic>) {
        let mut decls = Vec::new();
        let mut diags = Vec::new();
        while self.peek().tok != Tok::Eof {
            match self.decl() {
                Ok(d) => decls.push(d),
                Err(e) => {
                    diags.push(e);
                    self.recover();
                }
            }
        }
        (decls, diags)
    }

    fn decl(&mut self) -> PResult<Decl> {
        let span = self.span();
        let kind = match &self.peek().tok {
            Tok::Ident(s) if s == "interaction" => DeclKind::Interaction,
            Tok::Ident(s) if s == "fluent" => DeclKind::Fluent,
            other => {
                return Err(self.error_here(format!(
                    "expected `interaction` or `fluent`, found {}",
                    other.describe()
                )))
            }
        };
        self.bump();
        let name = self.name("a declaration name")?;
        self.expect(Tok::LParen)?;
        let mut params = Vec::new();
        if self.peek().tok != Tok::RParen {
            params.push(self.var("a parameter variable")?);
            while self.peek().tok == Tok::Comma {
                self.bump();
                params.push(self.var("a parameter variable")?);
            }
        }
        self.expect(Tok::RParen)?;
        let interval = if kind == DeclKind::Interaction {
            match &self.peek().tok {
                Tok::Ident(s) if s == "during" => {
                    self.bump();
                }
                other => return Err(self.error_here(format!("expected `during`, found {}", other.describe()))),
            }
            Some(self.var("an interval variable")?)
        } else {
            None
        };
        self.expect(Tok::Turnstile)?;
        let mut body = vec![self.literal()?];
        while self.peek().tok == Tok::Comma {
            self.bump();
            body.push(self.literal()?);
        }
        self.expect(Tok::Dot)?;
        Ok(Decl {
            kind,
            name,
            params,
            interval,
            body,
            span,
        })
    }

    fn atom(&mut self) -> PResult<Atom> {
        let span = self.span();
        let name = self.name("a predicate name")?;
        self.expect(Tok::LParen)?;
        let mut args = vec![self.term()?];
        while self.peek().tok == Tok::Comma {
            self.bump();
            args.push(self.term()?);
        }
        self.expect(Tok::RParen)?;
        Ok(Atom { name, args, span })
    }

    fn literal(&mut self) -> PResult<Literal> {
        let span = self.span();
        let atom = self.atom()?;
        if self.peek().tok == Tok::HoldsIn {
            self.bump();
            let ivar = self.var("an interval variable")?;
            return Ok(Literal::HoldsIn { atom, ivar, span });
        }
        if let Ok(op) = atom.name.parse::<AllenLabel>() {
            if let [Term::Var(l), Term::Var(r)] = atom.args.as_slice() {
                return Ok(Literal::Allen {
                    op,
                    left: l.clone(),
                    right: r.clone(),
                    span,
                });
            }
            return Err(Diagnostic::error(
                self.text,
                span.line,
                span.column,
                format!("interval relation `{}` takes two interval variables", atom.name),
            ));
        }
        if atom.args.len() == 1 {
            let Atom { name, mut args, .. } = atom;
            return Ok(Literal::Guard {
                class: name,
                term: args.remove(0),
                span,
            });
        }
        Err(self.error_here(format!(
            "expected `holds-in` after `{}/{}`, found {}",
            atom.name,
            atom.args.len(),
            self.peek().tok.describe()
        )))
    }

    fn term(&mut self) -> PResult<Term> {
        let s = self.ident("a term")?;
        if s == "body_part" && self.peek().tok == Tok::LParen {
            self.bump();
            let part = self.name("a body part name")?;
            self.expect(Tok::Comma)?;
            let p = self.ident("a person")?;
            let person = if is_var(&p) { Term::Var(p) } else { Term::Const(p) };
            self.expect(Tok::RParen)?;
            return Ok(Term::BodyPart {
                part,
                person: Box::new(person),
            });
        }
        Ok(if is_var(&s) { Term::Var(s) } else { Term::Const(s) })
    }

    fn goal(&mut self) -> PResult<Goal> {
        let prefix = match self.peek().tok {
            Tok::HoldsIn => Some(GoalKind::HoldsIn),
            Tok::OccursIn => Some(GoalKind::OccursIn),
            Tok::HoldsAt => Some(GoalKind::HoldsAt(0.0)),
            Tok::OccursAt => Some(GoalKind::OccursAt(0.0)),
            _ => None,
        };
        let goal = match prefix {
            Some(kind) => {
                self.bump();
                self.expect(Tok::LParen)?;
                let atom = self.atom()?;
                self.expect(Tok::Comma)?;
                let (kind, ivar) = match kind {
                    GoalKind::HoldsAt(_) | GoalKind::OccursAt(_) => {
                        let t = match self.peek().tok {
                            Tok::Number(n) => n,
                            _ => return Err(self.error_here("expected a time in seconds")),
                        };
                        self.bump();
                        let kind = if matches!(kind, GoalKind::HoldsAt(_)) {
                            GoalKind::HoldsAt(t)
                        } else {
                            GoalKind::OccursAt(t)
                        };
                        (kind, None)
                    }
                    k => (k, Some(self.var("an interval variable")?)),
                };
                self.expect(Tok::RParen)?;
                Goal { kind, atom, ivar }
            }
            None => {
                let atom = self.atom()?;
                if self.peek().tok == Tok::HoldsIn {
                    self.bump();
                    let ivar = self.var("an interval variable")?;
                    Goal {
                        kind: GoalKind::HoldsIn,
                        atom,
                        ivar: Some(ivar),
                    }
                } else {
                    Goal {
                        kind: GoalKind::Bare,
                        atom,
                        ivar: None,
                    }
                }
            }
        };
        if self.peek().tok == Tok::Dot {
            self.bump();
        }
        if self.peek().tok != Tok::Eof {
            return Err(self.error_here(format!("unexpected {} after goal", self.peek().tok.describe())));
        }
        Ok(goal)
    }
}

/// Syntax only: declarations in source order plus any syntax errors.
pub fn parse_syntax(text: &str) -> (Vec<Decl>, Vec<Diagnostic>) {
    match Parser::new(text) {
        Ok(mut p) => p.file(),
        Err(d) => (Vec::new(), vec![d]),
    }
}

/// Parses a one-shot query goal. Name resolution is left to the caller.
pub fn parse_goal(text: &str) -> Result<Goal, Vec<Diagnostic>> {
    let mut p = Parser::new(text).map_err(|d| vec![d])?;
    if p.peek().tok == Tok::Eof {
        return Err(vec![p.error_here("empty goal")]);
    }
    p.goal().map_err(|d| vec![d])
}
