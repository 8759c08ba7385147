//! Tokenizer for the supported subset.
//!
//! Produces the whole token stream up front; inputs are program files, not
//! streams. Unsupported lexical constructs (double-quoted strings, `0'c`
//! character codes) are rejected with a distinct error so they cannot be
//! silently mis-read.

use num_bigint::BigInt;

use super::parser::{ParseError, Unsupported};
use super::term::Span;

#[derive(Debug, Clone, PartialEq)]
pub enum TokKind {
    /// Plain, quoted or symbolic atom, plus the solo atoms `!` and `;`.
    Atom(String),
    /// Variable token; the name `_` denotes an anonymous variable.
    Var(String),
    Int(BigInt),
    Float(f64),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Bar,
    /// Clause-terminating `.`.
    End,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tok {
    pub kind: TokKind,
    pub span: Span,
}

/// Characters that agglutinate into symbolic atoms such as `:-` and `=<`.
fn is_symbol_char(c: char) -> bool {
    matches!(
        c,
        '+' | '-' | '*' | '/' | '\\' | '^' | '<' | '>' | '=' | '~' | ':' | '.' | '?' | '@' | '#' | '&'
    )
}

fn is_atom_start(c: char) -> bool {
    c.is_ascii_lowercase()
}

fn is_var_start(c: char) -> bool {
    c.is_ascii_uppercase() || c == '_'
}

fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

pub fn tokenize(source: &str) -> Result<Vec<Tok>, ParseError> {
    let mut toks = Vec::new();
    let chars: Vec<(usize, char)> = source.char_indices().collect();
    let len = source.len();
    let mut i = 0;

    let at = |i: usize| chars.get(i).map(|&(_, c)| c);
    let pos = |i: usize| chars.get(i).map(|&(p, _)| p).unwrap_or(len);

    while i < chars.len() {
        let (start, c) = chars[i];
        match c {
            ' ' | '\t' | '\r' | '\n' => i += 1,
            '%' => {
                while i < chars.len() && chars[i].1 != '\n' {
                    i += 1;
                }
            }
            '/' if at(i + 1) == Some('*') => {
                let mut j = i + 2;
                loop {
                    if j + 1 >= chars.len() {
                        if at(j) == Some('*') && j + 1 == chars.len() {
                            // `*` at EOF without `/`
                        }
                        return Err(ParseError::syntax(
                            source,
                            start,
                            "unterminated block comment",
                            &["*/"],
                        ));
                    }
                    if chars[j].1 == '*' && chars[j + 1].1 == '/' {
                        break;
                    }
                    j += 1;
                }
                i = j + 2;
            }
            '(' => {
                toks.push(Tok { kind: TokKind::LParen, span: Span::new(start, start + 1) });
                i += 1;
            }
            ')' => {
                toks.push(Tok { kind: TokKind::RParen, span: Span::new(start, start + 1) });
                i += 1;
            }
            '[' => {
                toks.push(Tok { kind: TokKind::LBracket, span: Span::new(start, start + 1) });
                i += 1;
            }
            ']' => {
                toks.push(Tok { kind: TokKind::RBracket, span: Span::new(start, start + 1) });
                i += 1;
            }
            ',' => {
                toks.push(Tok { kind: TokKind::Comma, span: Span::new(start, start + 1) });
                i += 1;
            }
            '|' => {
                toks.push(Tok { kind: TokKind::Bar, span: Span::new(start, start + 1) });
                i += 1;
            }
            '!' | ';' => {
                toks.push(Tok {
                    kind: TokKind::Atom(c.to_string()),
                    span: Span::new(start, start + 1),
                });
                i += 1;
            }
            '\'' => {
                let (name, next) = lex_quoted(source, &chars, i)?;
                toks.push(Tok { kind: TokKind::Atom(name), span: Span::new(start, pos(next)) });
                i = next;
            }
            '"' => {
                return Err(ParseError::unsupported(source, start, Unsupported::StringLiteral));
            }
            '{' | '}' => {
                return Err(ParseError::syntax(
                    source,
                    start,
                    "curly-brace terms are not part of the supported subset",
                    &["term"],
                ));
            }
            _ if c.is_ascii_digit() => {
                if c == '0' && at(i + 1) == Some('\'') {
                    return Err(ParseError::unsupported(source, start, Unsupported::CharCodeLiteral));
                }
                let (kind, next) = lex_number(source, &chars, i)?;
                toks.push(Tok { kind, span: Span::new(start, pos(next)) });
                i = next;
            }
            _ if is_atom_start(c) => {
                let mut j = i + 1;
                while j < chars.len() && is_name_char(chars[j].1) {
                    j += 1;
                }
                let name = &source[start..pos(j)];
                toks.push(Tok {
                    kind: TokKind::Atom(name.to_string()),
                    span: Span::new(start, pos(j)),
                });
                i = j;
            }
            _ if is_var_start(c) => {
                let mut j = i + 1;
                while j < chars.len() && is_name_char(chars[j].1) {
                    j += 1;
                }
                let name = &source[start..pos(j)];
                toks.push(Tok {
                    kind: TokKind::Var(name.to_string()),
                    span: Span::new(start, pos(j)),
                });
                i = j;
            }
            _ if is_symbol_char(c) => {
                // A `.` followed by layout, a comment or EOF ends the clause.
                if c == '.' {
                    let next = at(i + 1);
                    let ends = match next {
                        None => true,
                        Some(n) => n.is_whitespace() || n == '%',
                    };
                    if ends {
                        toks.push(Tok { kind: TokKind::End, span: Span::new(start, start + 1) });
                        i += 1;
                        continue;
                    }
                }
                let mut j = i + 1;
                while j < chars.len() && is_symbol_char(chars[j].1) {
                    j += 1;
                }
                let name = &source[start..pos(j)];
                toks.push(Tok {
                    kind: TokKind::Atom(name.to_string()),
                    span: Span::new(start, pos(j)),
                });
                i = j;
            }
            _ => {
                return Err(ParseError::syntax(
                    source,
                    start,
                    &format!("unexpected character {c:?}"),
                    &["token"],
                ));
            }
        }
    }
    Ok(toks)
}

/// Lexes a quoted atom starting at the opening quote; returns the unescaped
/// name and the index just past the closing quote.
fn lex_quoted(
    source: &str,
    chars: &[(usize, char)],
    open: usize,
) -> Result<(String, usize), ParseError> {
    let mut name = String::new();
    let mut i = open + 1;
    loop {
        let Some(&(p, c)) = chars.get(i) else {
            return Err(ParseError::syntax(source, chars[open].0, "unterminated quoted atom", &["'"]));
        };
        match c {
            '\'' => {
                // A doubled quote is an escaped quote.
                if chars.get(i + 1).map(|&(_, c)| c) == Some('\'') {
                    name.push('\'');
                    i += 2;
                } else {
                    return Ok((name, i + 1));
                }
            }
            '\\' => {
                let Some(&(_, esc)) = chars.get(i + 1) else {
                    return Err(ParseError::syntax(source, p, "unterminated escape", &["escape"]));
                };
                let ch = match esc {
                    'n' => '\n',
                    't' => '\t',
                    'r' => '\r',
                    'a' => '\x07',
                    'b' => '\x08',
                    'f' => '\x0c',
                    'v' => '\x0b',
                    '\\' => '\\',
                    '\'' => '\'',
                    '"' => '"',
                    _ => {
                        return Err(ParseError::syntax(
                            source,
                            p,
                            &format!("unknown escape \\{esc}"),
                            &["escape"],
                        ))
                    }
                };
                name.push(ch);
                i += 2;
            }
            '\n' => {
                return Err(ParseError::syntax(source, p, "newline in quoted atom", &["'"]));
            }
            _ => {
                name.push(c);
                i += 1;
            }
        }
    }
}

/// Lexes an unsigned integer or float literal.
fn lex_number(
    source: &str,
    chars: &[(usize, char)],
    start: usize,
) -> Result<(TokKind, usize), ParseError> {
    let at = |i: usize| chars.get(i).map(|&(_, c)| c);
    let pos = |i: usize| chars.get(i).map(|&(p, _)| p).unwrap_or(source.len());

    let mut i = start;
    while at(i).is_some_and(|c| c.is_ascii_digit()) {
        i += 1;
    }
    let mut is_float = false;
    // Fraction: `.` must be followed by a digit, otherwise it terminates the
    // integer (as in `X = 1.`).
    if at(i) == Some('.') && at(i + 1).is_some_and(|c| c.is_ascii_digit()) {
        is_float = true;
        i += 1;
        while at(i).is_some_and(|c| c.is_ascii_digit()) {
            i += 1;
        }
    }
    // Exponent.
    if at(i).is_some_and(|c| c == 'e' || c == 'E') {
        let mut j = i + 1;
        if at(j).is_some_and(|c| c == '+' || c == '-') {
            j += 1;
        }
        if at(j).is_some_and(|c| c.is_ascii_digit()) {
            is_float = true;
            i = j;
            while at(i).is_some_and(|c| c.is_ascii_digit()) {
                i += 1;
            }
        }
    }

    let text = &source[chars[start].0..pos(i)];
    if is_float {
        let value: f64 = text.parse().map_err(|_| {
            ParseError::syntax(source, chars[start].0, "malformed float literal", &["float"])
        })?;
        Ok((TokKind::Float(value), i))
    } else {
        let value: BigInt = text.parse().expect("digit run parses as integer");
        Ok((TokKind::Int(value), i))
    }
}
