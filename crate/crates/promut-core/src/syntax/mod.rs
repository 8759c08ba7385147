//! Reading, addressing, rewriting and printing programs in the supported
//! Prolog subset.
//!
//! The subset covers plain and quoted atoms, integers and floats,
//! variables, compounds, lists, `%` and `/* */` comments, and the fixed
//! operator table in [`ops`]. User-defined operators, DCG rules, character
//! codes and strings are rejected with distinct errors.

pub mod lexer;
pub mod ops;
pub mod parser;
pub mod path;
pub mod printer;
pub mod program;
pub mod term;

pub use parser::{parse_items, parse_program, parse_term_text, Item, ParseError, Unsupported};
pub use path::{enumerate_paths, replace_at, resolve_path, InvalidPath, TermPath};
pub use printer::{print_program, print_term, print_term_depth_capped};
pub use program::{Clause, Program};
pub use term::{PredId, Span, Term, TermKind};
