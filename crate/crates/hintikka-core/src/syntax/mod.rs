//! Concrete syntax: a line-oriented sentence format, a prop format for the
//! meta-level, and signature files.
//!
//! ```text
//! type   := "o" | "i" | "(" type ">" type ")"
//! term   := name | "T" | "F" | "~" term | "![" type "]" term
//!         | term "=[" type "]" term | term "&" term | term "|" term
//!         | term "->" term | "(" "\" name ":" type "." term ")"
//!         | "(" term ")" | term term | "=[" type "]" | "(" "~" ")"
//! ```
//!
//! Precedence: application > `~`/`![τ]` > `=[τ]` > `&` > `|` > `->`; infix
//! operators associate left except `->` which associates right. `#` starts a
//! comment. In blue signatures the sugared connectives expand through the
//! definition table at parse time; red signatures accept only the core forms
//! plus primitive `~`.
//!
//! Prop files add `!~`, `!=[τ]`, `!T`, `!|` and `!![τ] X.` for the
//! meta-level connectives, with `!|` loosest, then `!~`/`!![τ]`, then
//! `!=[τ]` between object terms.

mod lexer;
mod parser;
mod printer;

pub use lexer::{Lexer, Token, TokenKind};
pub use parser::{
    parse_prop, parse_prop_file, parse_sentence, parse_sentence_file, parse_signature_file,
    parse_type, ParseError,
};
pub use printer::{print_prop, print_term, print_term_with_offset};
