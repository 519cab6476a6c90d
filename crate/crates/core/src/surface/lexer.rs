use super::{ParseError, ParseErrorKind, Span};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Num(u64),
    Sym(&'static str),
    Eof,
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
    /// No whitespace between this token and the previous one.
    pub glued: bool,
}

const SYMBOLS: &[&str] = &[
    "|->", ":=", "=>", "->", "(", ")", "[", "]", "{", "}", ":", ",", ".", "*", "+", "=", "|",
];

fn ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn ident_continue(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

pub fn lex(file: &str, text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let mut glued = false;
    let span = |l1, c1, l2, c2| Span::new(file, l1, c1, l2, c2);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            glued = false;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            glued = false;
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'-') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            glued = false;
            continue;
        }
        let (sl, sc) = (line, col);
        if ident_start(c) {
            let start = i;
            while i < chars.len() && ident_continue(chars[i]) {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Token {
                tok: Tok::Ident(s),
                span: span(sl, sc, line, col),
                glued,
            });
            glued = true;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            let n = s.parse::<u64>().map_err(|_| {
                ParseError::new(
                    ParseErrorKind::Syntax,
                    span(sl, sc, line, col),
                    format!("number {s} is too large"),
                )
            })?;
            out.push(Token {
                tok: Tok::Num(n),
                span: span(sl, sc, line, col),
                glued,
            });
            glued = true;
            continue;
        }
        if c == '↦' {
            i += 1;
            col += 1;
            out.push(Token {
                tok: Tok::Sym("|->"),
                span: span(sl, sc, line, col),
                glued,
            });
            glued = true;
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 3)].iter().collect();
        match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
            Some(s) => {
                i += s.len();
                col += s.len();
                out.push(Token {
                    tok: Tok::Sym(s),
                    span: span(sl, sc, line, col),
                    glued,
                });
                glued = true;
            }
            None => {
                return Err(ParseError::new(
                    ParseErrorKind::Syntax,
                    span(sl, sc, line, col + 1),
                    format!("unexpected character {c:?}"),
                ))
            }
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        span: span(line, col, line, col),
        glued: false,
    });
    Ok(out)
}
