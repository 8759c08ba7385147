//! Reader for the supported subset: operator-precedence parsing over the
//! fixed table, clause collection, and directive separation.

use thiserror::Error;

use super::lexer::{tokenize, Tok, TokKind};
use super::ops::{self, ARG_PRIORITY, MAX_PRIORITY};
use super::program::Program;
use super::term::{Span, Term, TermKind};

/// Constructs that are recognized and refused rather than mis-parsed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unsupported {
    /// `"..."` string literals.
    StringLiteral,
    /// `0'c` character-code literals.
    CharCodeLiteral,
    /// DCG rules (`-->`).
    Dcg,
    /// `:- op(P, T, N)` directives.
    UserOperator,
}

impl std::fmt::Display for Unsupported {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Unsupported::StringLiteral => "double-quoted string literal",
            Unsupported::CharCodeLiteral => "0'c character-code literal",
            Unsupported::Dcg => "DCG rule (-->)",
            Unsupported::UserOperator => "user-defined operator (op/3)",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {line}:{column}: {message} (expected one of: {})", expected.join(", "))]
    Syntax {
        line: usize,
        column: usize,
        message: String,
        expected: Vec<String>,
    },
    #[error("unsupported construct at {line}:{column}: {construct}")]
    Unsupported {
        construct: Unsupported,
        line: usize,
        column: usize,
    },
}

/// 1-based line and column of a byte offset.
pub fn line_col(source: &str, offset: usize) -> (usize, usize) {
    let clamped = offset.min(source.len());
    let before = &source[..clamped];
    let line = before.matches('\n').count() + 1;
    let column = before.chars().rev().take_while(|&c| c != '\n').count() + 1;
    (line, column)
}

impl ParseError {
    pub fn syntax(source: &str, offset: usize, message: &str, expected: &[&str]) -> ParseError {
        let (line, column) = line_col(source, offset);
        ParseError::Syntax {
            line,
            column,
            message: message.to_string(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn unsupported(source: &str, offset: usize, construct: Unsupported) -> ParseError {
        let (line, column) = line_col(source, offset);
        ParseError::Unsupported { construct, line, column }
    }
}

/// One top-level item of a source file.
#[derive(Debug, Clone, PartialEq)]
pub enum Item {
    /// `Head :- Body.` or a fact (body `true`).
    Clause { head: Term, body: Term },
    /// `:- Goal.`
    Directive(Term),
}

/// Parses a whole program file. Directives are collected on the returned
/// [`Program`]; clause order and per-predicate ordinals follow the source.
pub fn parse_program(source: &str) -> Result<Program, ParseError> {
    let items = parse_items(source)?;
    let mut clauses = Vec::new();
    let mut directives = Vec::new();
    for item in items {
        match item {
            Item::Clause { head, body } => clauses.push((head, body)),
            Item::Directive(goal) => directives.push(goal),
        }
    }
    Ok(Program::new(clauses, directives))
}

/// Parses a file into raw items, preserving source order.
pub fn parse_items(source: &str) -> Result<Vec<Item>, ParseError> {
    let toks = tokenize(source)?;
    let mut parser = Parser { source, toks, pos: 0 };
    let mut items = Vec::new();
    while !parser.at_end() {
        items.push(parser.item()?);
    }
    Ok(items)
}

/// Parses a single term, as used for goals given on the command line.
/// A trailing `.` is optional; trailing garbage is an error.
pub fn parse_term_text(source: &str) -> Result<Term, ParseError> {
    let toks = tokenize(source)?;
    let mut parser = Parser { source, toks, pos: 0 };
    if parser.at_end() {
        return Err(ParseError::syntax(source, source.len(), "empty term", &["term"]));
    }
    let (term, _) = parser.term(MAX_PRIORITY)?;
    if let Some(tok) = parser.peek() {
        if tok.kind == TokKind::End {
            parser.pos += 1;
        }
    }
    if let Some(tok) = parser.peek() {
        let offset = tok.span.start;
        return Err(ParseError::syntax(source, offset, "trailing input after term", &["end of input"]));
    }
    Ok(term)
}

struct Parser<'s> {
    source: &'s str,
    toks: Vec<Tok>,
    pos: usize,
}

impl<'s> Parser<'s> {
    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn peek_kind(&self) -> Option<&TokKind> {
        self.peek().map(|t| &t.kind)
    }

    fn next(&mut self) -> Option<Tok> {
        let tok = self.toks.get(self.pos).cloned();
        if tok.is_some() {
            self.pos += 1;
        }
        tok
    }

    fn err_here(&self, message: &str, expected: &[&str]) -> ParseError {
        let offset = self
            .peek()
            .map(|t| t.span.start)
            .unwrap_or(self.source.len());
        ParseError::syntax(self.source, offset, message, expected)
    }

    fn item(&mut self) -> Result<Item, ParseError> {
        // A leading `:-` introduces a directive; the table only defines the
        // infix form, so this is the one place prefix `:-` is meaningful.
        if let Some(TokKind::Atom(name)) = self.peek_kind() {
            if name == ":-" {
                self.pos += 1;
                let (goal, _) = self.term(MAX_PRIORITY)?;
                self.expect_end()?;
                if let Some(("op", 3)) = goal.functor_arity() {
                    return Err(ParseError::unsupported(
                        self.source,
                        goal.span.start,
                        Unsupported::UserOperator,
                    ));
                }
                return Ok(Item::Directive(goal));
            }
        }

        let (term, _) = self.term(MAX_PRIORITY)?;
        self.expect_end()?;
        let (head, body) = match term.kind {
            TermKind::Compound { ref functor, ref args } if functor == ":-" && args.len() == 2 => {
                (args[0].clone(), args[1].clone())
            }
            _ => {
                let span = term.span;
                (term, Term::atom("true").with_span(span))
            }
        };
        if !head.is_callable() {
            return Err(ParseError::syntax(
                self.source,
                head.span.start,
                "clause head must be an atom or a compound term",
                &["atom", "compound term"],
            ));
        }
        Ok(Item::Clause { head, body })
    }

    fn expect_end(&mut self) -> Result<(), ParseError> {
        match self.peek_kind() {
            Some(TokKind::End) => {
                self.pos += 1;
                Ok(())
            }
            Some(TokKind::Atom(name)) if name == "-->" => Err(ParseError::unsupported(
                self.source,
                self.peek().unwrap().span.start,
                Unsupported::Dcg,
            )),
            _ => Err(self.err_here("expected end of clause", &["."])),
        }
    }

    /// Parses a term whose priority does not exceed `max`. Returns the term
    /// and its priority (0 for plain operands).
    fn term(&mut self, max: u16) -> Result<(Term, u16), ParseError> {
        let (mut left, mut left_prio) = self.primary(max)?;
        while let Some(tok) = self.peek() {
            let op_name = match &tok.kind {
                TokKind::Comma => ",",
                TokKind::Atom(name) => name.as_str(),
                _ => break,
            };
            let Some(def) = ops::infix(op_name) else { break };
            if def.priority > max || left_prio > def.left_max() {
                break;
            }
            let op_span = tok.span;
            let name = op_name.to_string();
            self.pos += 1;
            let (right, _) = self.term(def.right_max())?;
            let span = Span::new(left.span.start, right.span.end);
            let _ = op_span;
            left = Term::compound(name, vec![left, right]).with_span(span);
            left_prio = def.priority;
        }
        Ok((left, left_prio))
    }

    fn primary(&mut self, max: u16) -> Result<(Term, u16), ParseError> {
        let Some(tok) = self.next() else {
            return Err(self.err_here("unexpected end of input", &["term"]));
        };
        let span = tok.span;
        match tok.kind {
            TokKind::Int(v) => Ok((Term { kind: TermKind::Int(v), span }, 0)),
            TokKind::Float(v) => Ok((Term { kind: TermKind::Float(v), span }, 0)),
            TokKind::Var(name) => {
                let anonymous = name == "_";
                Ok((Term { kind: TermKind::Var { name, anonymous }, span }, 0))
            }
            TokKind::LParen => {
                let (term, _) = self.term(MAX_PRIORITY)?;
                self.expect_kind(&TokKind::RParen, ")")?;
                Ok((term, 0))
            }
            TokKind::LBracket => self.list_rest(span),
            TokKind::Atom(name) => self.atom_or_structure(name, span, max),
            TokKind::Comma | TokKind::Bar | TokKind::RParen | TokKind::RBracket | TokKind::End => {
                self.pos -= 1;
                Err(self.err_here("expected a term", &["term"]))
            }
        }
    }

    fn expect_kind(&mut self, kind: &TokKind, what: &str) -> Result<Span, ParseError> {
        match self.peek() {
            Some(tok) if &tok.kind == kind => {
                let span = tok.span;
                self.pos += 1;
                Ok(span)
            }
            _ => Err(self.err_here(&format!("expected {what}"), &[what])),
        }
    }

    /// Continues after `[`.
    fn list_rest(&mut self, open: Span) -> Result<(Term, u16), ParseError> {
        if let Some(TokKind::RBracket) = self.peek_kind() {
            let close = self.next().unwrap().span;
            return Ok((Term::atom("[]").with_span(Span::new(open.start, close.end)), 0));
        }
        let mut elems = Vec::new();
        loop {
            let (elem, _) = self.term(ARG_PRIORITY)?;
            elems.push(elem);
            match self.peek_kind() {
                Some(TokKind::Comma) => {
                    self.pos += 1;
                }
                Some(TokKind::Bar) => {
                    self.pos += 1;
                    let (tail, _) = self.term(ARG_PRIORITY)?;
                    let close = self.expect_kind(&TokKind::RBracket, "]")?;
                    return Ok((self.build_list(elems, tail, open, close), 0));
                }
                Some(TokKind::RBracket) => {
                    let close = self.next().unwrap().span;
                    let nil = Term::atom("[]").with_span(Span::new(close.start, close.end));
                    return Ok((self.build_list(elems, nil, open, close), 0));
                }
                _ => return Err(self.err_here("expected list continuation", &[",", "|", "]"])),
            }
        }
    }

    fn build_list(&self, elems: Vec<Term>, tail: Term, open: Span, close: Span) -> Term {
        let whole = Span::new(open.start, close.end);
        elems.into_iter().rev().fold(tail, |acc, elem| {
            let span = Span::new(elem.span.start, whole.end);
            Term::compound(".", vec![elem, acc]).with_span(span)
        })
    }

    fn atom_or_structure(
        &mut self,
        name: String,
        span: Span,
        max: u16,
    ) -> Result<(Term, u16), ParseError> {
        // `f(` with no layout in between opens a compound term.
        if let Some(tok) = self.peek() {
            if tok.kind == TokKind::LParen && tok.span.start == span.end {
                self.pos += 1;
                let mut args = Vec::new();
                loop {
                    let (arg, _) = self.term(ARG_PRIORITY)?;
                    args.push(arg);
                    match self.peek_kind() {
                        Some(TokKind::Comma) => {
                            self.pos += 1;
                        }
                        Some(TokKind::RParen) => break,
                        _ => return Err(self.err_here("expected argument continuation", &[",", ")"])),
                    }
                }
                let close = self.next().unwrap().span;
                let term = Term::compound(name, args).with_span(Span::new(span.start, close.end));
                return Ok((term, 0));
            }
        }

        if let Some(def) = ops::prefix(&name) {
            // Negative literals: `-` immediately followed by a number token
            // (no layout) collapses into the number itself; with layout in
            // between it stays an application, as the reference readers do.
            if name == "-" {
                let adjacent = self.peek().is_some_and(|t| t.span.start == span.end);
                match self.peek_kind() {
                    Some(TokKind::Int(_)) if adjacent => {
                        let tok = self.next().unwrap();
                        let TokKind::Int(v) = tok.kind else { unreachable!() };
                        let whole = Span::new(span.start, tok.span.end);
                        return Ok((Term { kind: TermKind::Int(-v), span: whole }, 0));
                    }
                    Some(TokKind::Float(_)) if adjacent => {
                        let tok = self.next().unwrap();
                        let TokKind::Float(v) = tok.kind else { unreachable!() };
                        let whole = Span::new(span.start, tok.span.end);
                        return Ok((Term { kind: TermKind::Float(-v), span: whole }, 0));
                    }
                    _ => {}
                }
            }
            if def.priority <= max && self.peek_can_start_term() {
                let (arg, _) = self.term(def.right_max())?;
                let whole = Span::new(span.start, arg.span.end);
                return Ok((Term::compound(name, vec![arg]).with_span(whole), def.priority));
            }
        }

        Ok((Term { kind: TermKind::Atom(name), span }, 0))
    }

    /// True if the next token can begin an operand. Atoms that are pure
    /// infix operators do not count, so `a = =` fails to parse rather than
    /// reading the second `=` as an operand.
    fn peek_can_start_term(&self) -> bool {
        match self.peek_kind() {
            Some(
                TokKind::Int(_)
                | TokKind::Float(_)
                | TokKind::Var(_)
                | TokKind::LParen
                | TokKind::LBracket,
            ) => true,
            Some(TokKind::Atom(name)) => {
                ops::prefix(name).is_some() || ops::infix(name).is_none()
            }
            _ => false,
        }
    }
}

/// Convenience used across the test suites: parses source that must be a
/// valid program.
pub fn must_parse(source: &str) -> Program {
    match parse_program(source) {
        Ok(p) => p,
        Err(e) => panic!("corpus source failed to parse: {e}\n{source}"),
    }
}
