use super::diagnostic::Diagnostic;

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Ident(String),
    Number(f64),
    LParen,
    RParen,
    Comma,
    Dot,
    Turnstile,
    HoldsIn,
    OccursIn,
    HoldsAt,
    OccursAt,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Number(n) => format!("number {n}"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Turnstile => "`:-`".into(),
            Tok::HoldsIn => "`holds-in`".into(),
            Tok::OccursIn => "`occurs-in`".into(),
            Tok::HoldsAt => "`holds-at`".into(),
            Tok::OccursAt => "`occurs-at`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

/// Position of the last character of `text`, used for end-of-input errors.
pub fn last_position(text: &str) -> (usize, usize) {
    let mut pos = (1, 1);
    let (mut line, mut col) = (1, 1);
    for c in text.chars() {
        pos = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
        } else {
            col += 1;
        }
    }
    pos
}

pub fn tokenize(text: &str) -> Result<Vec<Token>, Diagnostic> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let advance = |i: &mut usize, line: &mut usize, col: &mut usize, n: usize| {
        for _ in 0..n {
            if chars[*i] == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
            *i += 1;
        }
    };
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let push = |out: &mut Vec<Token>, tok| out.push(Token { tok, line: tl, column: tc });
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col, 1);
        } else if c == '%' {
            while i < chars.len() && chars[i] != '\n' {
                advance(&mut i, &mut line, &mut col, 1);
            }
        } else if c == '(' || c == ')' || c == ',' || c == '.' {
            let tok = match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                _ => Tok::Dot,
            };
            // a dot directly followed by a digit belongs to a number like `.5`
            if c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()) {
                let (n, len) = number(&chars, i);
                push(&mut out, Tok::Number(n));
                advance(&mut i, &mut line, &mut col, len);
            } else {
                push(&mut out, tok);
                advance(&mut i, &mut line, &mut col, 1);
            }
        } else if c == ':' {
            if chars.get(i + 1) == Some(&'-') {
                push(&mut out, Tok::Turnstile);
                advance(&mut i, &mut line, &mut col, 2);
            } else {
                return Err(Diagnostic::error(text, tl, tc, "expected `:-`"));
            }
        } else if c.is_ascii_digit() || (c == '-' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit() || *d == '.')) {
            let (n, len) = number(&chars, i);
            if !n.is_finite() {
                return Err(Diagnostic::error(text, tl, tc, "malformed number"));
            }
            push(&mut out, Tok::Number(n));
            advance(&mut i, &mut line, &mut col, len);
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            let mut j = i;
            while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            let word: String = chars[start..j].iter().collect();
            let keyword = |suffix: &str| {
                let s: Vec<char> = suffix.chars().collect();
                chars.len() >= j + s.len()
                    && chars[j..j + s.len()] == s[..]
                    && !chars
                        .get(j + s.len())
                        .is_some_and(|d| d.is_ascii_alphanumeric() || *d == '_')
            };
            let (tok, len) = match word.as_str() {
                "holds" if keyword("-in") => (Tok::HoldsIn, j - start + 3),
                "holds" if keyword("-at") => (Tok::HoldsAt, j - start + 3),
                "occurs" if keyword("-in") => (Tok::OccursIn, j - start + 3),
                "occurs" if keyword("-at") => (Tok::OccursAt, j - start + 3),
                _ => (Tok::Ident(word), j - start),
            };
            push(&mut out, tok);
            advance(&mut i, &mut line, &mut col, len);
        } else {
            return Err(Diagnostic::error(text, tl, tc, format!("unexpected character `{c}`")));
        }
    }
    let (line, column) = last_position(text);
    out.push(Token { tok: Tok::Eof, line, column });
    Ok(out)
}

fn number(chars: &[char], start: usize) -> (f64, usize) {
    let mut j = start;
    if chars[j] == '-' {
        j += 1;
    }
    let mut seen_dot = false;
    let mut seen_exp = false;
    while j < chars.len() {
        let c = chars[j];
        if c.is_ascii_digit() {
            j += 1;
        } else if c == '.' && !seen_dot && !seen_exp && chars.get(j + 1).is_some_and(|d| d.is_ascii_digit()) {
            seen_dot = true;
            j += 1;
        } else if (c == 'e' || c == 'E') && !seen_exp {
            let k = if matches!(chars.get(j + 1), Some('+') | Some('-')) { j + 2 } else { j + 1 };
            if chars.get(k).is_some_and(|d| d.is_ascii_digit()) {
                seen_exp = true;
                j = k;
            } else {
                break;
            }
        } else {
            break;
        }
    }
    let s: String = chars[start..j].iter().collect();
    (s.parse().unwrap_or(f64::NAN), j - start)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        tokenize(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn keywords_and_comments() {
        assert_eq!(
            toks("a(X) holds-in D1, % note\n b."),
            vec![
                Tok::Ident("a".into()),
                Tok::LParen,
                Tok::Ident("X".into()),
                Tok::RParen,
                Tok::HoldsIn,
                Tok::Ident("D1".into()),
                Tok::Comma,
                Tok::Ident("b".into()),
                Tok::Dot,
                Tok::Eof
            ]
        );
        assert_eq!(toks("holds_in")[0], Tok::Ident("holds_in".into()));
        assert!(tokenize("holds-inx").is_err());
    }

    #[test]
    fn numbers_and_positions() {
        assert_eq!(toks("1.5, -2, 3e-1")[..5], [Tok::Number(1.5), Tok::Comma, Tok::Number(-2.0), Tok::Comma, Tok::Number(0.3)]);
        let t = tokenize("a\n  :- b").unwrap();
        assert_eq!((t[1].line, t[1].column), (2, 3));
        let e = tokenize("a ; b").unwrap_err();
        assert_eq!((e.line, e.column), (1, 3));
    }
}
