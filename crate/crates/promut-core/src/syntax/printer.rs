//! Operator-aware source rendering.
//!
//! The printer is the inverse of the reader over the supported subset:
//! re-parsing its output yields a structurally identical term. Variables
//! keep their source names and anonymous variables print as `_`.

use super::ops::{self, MAX_PRIORITY};
use super::program::Program;
use super::term::{Term, TermKind};

/// No cap; programs and mutants are always finite trees.
const NO_DEPTH_CAP: usize = usize::MAX;

/// Renders a whole program, directives first, one clause per line.
pub fn print_program(program: &Program) -> String {
    let mut out = String::new();
    for directive in program.directives() {
        out.push_str(":- ");
        out.push_str(&print_term(directive));
        push_clause_end(&mut out);
    }
    for clause in program.clauses() {
        out.push_str(&print_term(&clause.head));
        if !clause.is_fact() {
            out.push_str(" :- ");
            out.push_str(&print_term(&clause.body));
        }
        push_clause_end(&mut out);
    }
    out
}

/// Renders one clause without a trailing newline.
pub fn print_clause(clause: &crate::syntax::program::Clause) -> String {
    let mut out = String::new();
    out.push_str(&print_term(&clause.head));
    if !clause.is_fact() {
        out.push_str(" :- ");
        out.push_str(&print_term(&clause.body));
    }
    if out.ends_with(is_symbol_char_last) {
        out.push(' ');
    }
    out.push('.');
    out
}

/// Renders a standalone term in operator notation.
pub fn print_term(term: &Term) -> String {
    let mut out = String::new();
    write_term(&mut out, term, MAX_PRIORITY, NO_DEPTH_CAP);
    out
}

/// Renders a term but elides below `max_depth` with `...`; bindings can be
/// cyclic when unification runs without the occurs check, and the printer
/// must not recurse forever on them.
pub fn print_term_depth_capped(term: &Term, max_depth: usize) -> String {
    let mut out = String::new();
    write_term(&mut out, term, MAX_PRIORITY, max_depth);
    out
}

/// A `.` directly after a symbolic atom would agglutinate into one token,
/// so separate it when needed.
fn push_clause_end(out: &mut String) {
    if out.ends_with(is_symbol_char_last) {
        out.push(' ');
    }
    out.push_str(".\n");
}

fn is_symbol_char_last(c: char) -> bool {
    matches!(
        c,
        '+' | '-' | '*' | '/' | '\\' | '^' | '<' | '>' | '=' | '~' | ':' | '.' | '?' | '@' | '#' | '&'
    )
}

/// Syntactic priority of a term when printed: the operator's priority for
/// operator-shaped compounds, 0 for everything else.
fn term_priority(term: &Term) -> u16 {
    match &term.kind {
        TermKind::Compound { functor, args } if args.len() == 2 => {
            if functor == "." {
                0 // printed as list sugar
            } else {
                ops::infix(functor).map(|d| d.priority).unwrap_or(0)
            }
        }
        TermKind::Compound { functor, args } if args.len() == 1 => {
            ops::prefix(functor).map(|d| d.priority).unwrap_or(0)
        }
        _ => 0,
    }
}

fn write_term(out: &mut String, term: &Term, max: u16, depth: usize) {
    if depth == 0 {
        out.push_str("...");
        return;
    }
    if term_priority(term) > max {
        out.push('(');
        write_term(out, term, MAX_PRIORITY, depth);
        out.push(')');
        return;
    }
    match &term.kind {
        TermKind::Var { name, anonymous } => {
            if *anonymous {
                out.push('_');
            } else {
                out.push_str(name);
            }
        }
        TermKind::Int(v) => out.push_str(&v.to_string()),
        TermKind::Float(v) => out.push_str(&format!("{v:?}")),
        TermKind::Atom(name) => write_atom(out, name),
        TermKind::Compound { functor, args } => {
            write_compound(out, functor, args, depth);
        }
    }
}

fn write_compound(out: &mut String, functor: &str, args: &[Term], depth: usize) {
    // List sugar.
    if functor == "." && args.len() == 2 {
        out.push('[');
        write_term(out, &args[0], ops::ARG_PRIORITY, depth.saturating_sub(1));
        let mut tail = &args[1];
        loop {
            match &tail.kind {
                TermKind::Atom(n) if n == "[]" => break,
                TermKind::Compound { functor, args } if functor == "." && args.len() == 2 => {
                    out.push_str(", ");
                    write_term(out, &args[0], ops::ARG_PRIORITY, depth.saturating_sub(1));
                    tail = &args[1];
                }
                _ => {
                    out.push('|');
                    write_term(out, tail, ops::ARG_PRIORITY, depth.saturating_sub(1));
                    break;
                }
            }
        }
        out.push(']');
        return;
    }

    // Infix operators.
    if args.len() == 2 {
        if let Some(def) = ops::infix(functor) {
            write_term(out, &args[0], def.left_max(), depth.saturating_sub(1));
            if functor == "," {
                out.push_str(", ");
            } else {
                out.push(' ');
                out.push_str(functor);
                out.push(' ');
            }
            write_term(out, &args[1], def.right_max(), depth.saturating_sub(1));
            return;
        }
    }

    // Prefix operators.
    if args.len() == 1 {
        if let Some(def) = ops::prefix(functor) {
            let arg = &args[0];
            if functor == "-" {
                // `-` directly before a number literal would be read back
                // as a negative literal, not an application.
                if arg.is_number() || term_priority(arg) > def.right_max() {
                    out.push_str("-(");
                    write_term(out, arg, MAX_PRIORITY, depth.saturating_sub(1));
                    out.push(')');
                } else {
                    out.push('-');
                    let mark = out.len();
                    write_term(out, arg, def.right_max(), depth.saturating_sub(1));
                    if out[mark..].starts_with(is_symbol_char_last) {
                        out.insert(mark, ' ');
                    }
                }
            } else {
                out.push_str(functor);
                out.push(' ');
                write_term(out, arg, def.right_max(), depth.saturating_sub(1));
            }
            return;
        }
    }

    // Plain canonical compound. `[]` would lex as two brackets, so it is
    // quoted in functor position.
    if functor == "[]" {
        out.push_str("'[]'");
    } else {
        write_atom(out, functor);
    }
    out.push('(');
    for (i, arg) in args.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write_term(out, arg, ops::ARG_PRIORITY, depth.saturating_sub(1));
    }
    out.push(')');
}

fn write_atom(out: &mut String, name: &str) {
    if atom_needs_quotes(name) {
        out.push('\'');
        for c in name.chars() {
            match c {
                '\'' => out.push_str("\\'"),
                '\\' => out.push_str("\\\\"),
                '\n' => out.push_str("\\n"),
                '\t' => out.push_str("\\t"),
                _ => out.push(c),
            }
        }
        out.push('\'');
    } else {
        out.push_str(name);
    }
}

fn atom_needs_quotes(name: &str) -> bool {
    if matches!(name, "[]" | "!" | ";") {
        return false;
    }
    // `.` alone or trailing would fuse with the clause terminator; a bare
    // `,` is a punctuation token, never an atom.
    if name == "." || name == "," {
        return true;
    }
    let mut chars = name.chars();
    let Some(first) = chars.next() else {
        return true; // the empty atom ''
    };
    if first.is_ascii_lowercase() {
        return !name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_');
    }
    if is_symbol_char_last(first) {
        return !name.chars().all(is_symbol_char_last);
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parser::{parse_program, parse_term_text};

    fn roundtrip_program(src: &str) {
        let once = parse_program(src).unwrap();
        let printed = print_program(&once);
        let twice = parse_program(&printed)
            .unwrap_or_else(|e| panic!("printed source failed to parse: {e}\n{printed}"));
        assert_eq!(once, twice, "round-trip mismatch for:\n{printed}");
    }

    #[test]
    fn min_prints_in_operator_notation() {
        let p = parse_program("min(A,B,A) :- A < B, !.\nmin(A,B,B).").unwrap();
        let text = print_program(&p);
        assert_eq!(text, "min(A, B, A) :- A < B, !.\nmin(A, B, B).\n");
        roundtrip_program(&text);
    }

    #[test]
    fn empty_program_prints_empty() {
        assert_eq!(print_program(&Program::empty()), "");
    }

    #[test]
    fn lists_resugar() {
        let p = parse_program("f([1,2]).").unwrap();
        assert_eq!(print_program(&p), "f([1, 2]).\n");
        let t = parse_term_text("[a, b | T]").unwrap();
        assert_eq!(print_term(&t), "[a, b|T]");
    }

    #[test]
    fn nested_operators_parenthesize_only_when_needed() {
        let t = parse_term_text("1 + 2 * 3").unwrap();
        assert_eq!(print_term(&t), "1 + 2 * 3");
        let t = parse_term_text("(1 + 2) * 3").unwrap();
        assert_eq!(print_term(&t), "(1 + 2) * 3");
        let t = parse_term_text("a, b ; c").unwrap();
        assert_eq!(print_term(&t), "a, b ; c");
        let t = parse_term_text("(a ; b), c").unwrap();
        assert_eq!(print_term(&t), "(a ; b), c");
        let t = parse_term_text("f((a, b))").unwrap();
        assert_eq!(print_term(&t), "f((a, b))");
    }

    #[test]
    fn negative_literals_and_minus_applications() {
        assert_eq!(print_term(&parse_term_text("-1").unwrap()), "-1");
        assert_eq!(print_term(&parse_term_text("3 - -1").unwrap()), "3 - -1");
        assert_eq!(print_term(&parse_term_text("-X").unwrap()), "-X");
        // A handmade application of `-` to a literal must not collapse on
        // re-parse.
        let applied = Term::compound("-", vec![Term::int(1)]);
        let printed = print_term(&applied);
        assert_eq!(parse_term_text(&printed).unwrap(), applied);
    }

    #[test]
    fn quoting_rules() {
        assert_eq!(print_term(&Term::atom("hello world")), "'hello world'");
        assert_eq!(print_term(&Term::atom("foo")), "foo");
        assert_eq!(print_term(&Term::atom("=<")), "=<");
        assert_eq!(print_term(&Term::atom(",")), "','");
        assert_eq!(print_term(&Term::atom("Caps")), "'Caps'");
        assert_eq!(print_term(&Term::atom("it's")), "'it\\'s'");
        let t = Term::compound(",", vec![Term::atom("a"), Term::atom("b")]);
        assert_eq!(print_term(&t), "a, b");
    }

    #[test]
    fn symbolic_goal_before_clause_dot_keeps_a_space() {
        let p = parse_program("x :- =(a, a).").unwrap();
        let printed = print_program(&p);
        roundtrip_program(&printed);
    }

    #[test]
    fn anonymous_prints_underscore() {
        let p = parse_program("f(_, X).").unwrap();
        assert_eq!(print_program(&p), "f(_, X).\n");
    }

    #[test]
    fn depth_cap_elides() {
        let t = parse_term_text("f(g(h(i)))").unwrap();
        assert_eq!(print_term_depth_capped(&t, 2), "f(g(...))");
    }

    #[test]
    fn directives_print_first() {
        let p = parse_program(":- begin_tests(x).\nf(a).").unwrap();
        assert_eq!(print_program(&p), ":- begin_tests(x).\nf(a).\n");
    }
}
