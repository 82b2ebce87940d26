//! Tokenizer for the sentence and prop formats.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TokenKind {
    Name(String),
    LParen,
    RParen,
    Backslash,
    Colon,
    Dot,
    Gt,
    Tilde,
    Amp,
    Pipe,
    Arrow,
    /// `=[` — the type and closing bracket are parsed by the parser.
    EqOpen,
    /// `![`
    ForallOpen,
    /// `!=[`
    MetaEqOpen,
    /// `!![`
    MetaForallOpen,
    /// `!~`
    MetaNeg,
    /// `!T`
    MetaTop,
    /// `!|`
    MetaOr,
    RBracket,
    TopLit,
    BotLit,
    Eof,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Name(n) => write!(f, "{n}"),
            TokenKind::LParen => write!(f, "("),
            TokenKind::RParen => write!(f, ")"),
            TokenKind::Backslash => write!(f, "\\"),
            TokenKind::Colon => write!(f, ":"),
            TokenKind::Dot => write!(f, "."),
            TokenKind::Gt => write!(f, ">"),
            TokenKind::Tilde => write!(f, "~"),
            TokenKind::Amp => write!(f, "&"),
            TokenKind::Pipe => write!(f, "|"),
            TokenKind::Arrow => write!(f, "->"),
            TokenKind::EqOpen => write!(f, "=["),
            TokenKind::ForallOpen => write!(f, "!["),
            TokenKind::MetaEqOpen => write!(f, "!=["),
            TokenKind::MetaForallOpen => write!(f, "!!["),
            TokenKind::MetaNeg => write!(f, "!~"),
            TokenKind::MetaTop => write!(f, "!T"),
            TokenKind::MetaOr => write!(f, "!|"),
            TokenKind::RBracket => write!(f, "]"),
            TokenKind::TopLit => write!(f, "T"),
            TokenKind::BotLit => write!(f, "F"),
            TokenKind::Eof => write!(f, "<eof>"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Token {
    pub kind: TokenKind,
    pub line: usize,
    pub col: usize,
}

pub struct Lexer;

impl Lexer {
    /// Tokenizes one line; `line` is used for positions in errors.
    pub fn tokenize(input: &str, line: usize) -> Result<Vec<Token>, (usize, usize, String)> {
        let mut out = Vec::new();
        let chars: Vec<char> = input.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let col = i + 1;
            let c = chars[i];
            let push = |out: &mut Vec<Token>, kind: TokenKind, width: usize, i: &mut usize| {
                out.push(Token { kind, line, col });
                *i += width;
            };
            match c {
                '#' => break,
                c if c.is_whitespace() => i += 1,
                '(' => push(&mut out, TokenKind::LParen, 1, &mut i),
                ')' => push(&mut out, TokenKind::RParen, 1, &mut i),
                '\\' => push(&mut out, TokenKind::Backslash, 1, &mut i),
                ':' => push(&mut out, TokenKind::Colon, 1, &mut i),
                '.' => push(&mut out, TokenKind::Dot, 1, &mut i),
                '>' => push(&mut out, TokenKind::Gt, 1, &mut i),
                '~' => push(&mut out, TokenKind::Tilde, 1, &mut i),
                '&' => push(&mut out, TokenKind::Amp, 1, &mut i),
                '|' => push(&mut out, TokenKind::Pipe, 1, &mut i),
                ']' => push(&mut out, TokenKind::RBracket, 1, &mut i),
                '-' => {
                    if chars.get(i + 1) == Some(&'>') {
                        push(&mut out, TokenKind::Arrow, 2, &mut i);
                    } else {
                        return Err((line, col, "expected '->'".to_string()));
                    }
                }
                '=' => {
                    if chars.get(i + 1) == Some(&'[') {
                        push(&mut out, TokenKind::EqOpen, 2, &mut i);
                    } else {
                        return Err((line, col, "expected '=['".to_string()));
                    }
                }
                '!' => match (chars.get(i + 1), chars.get(i + 2)) {
                    (Some('='), Some('[')) => push(&mut out, TokenKind::MetaEqOpen, 3, &mut i),
                    (Some('!'), Some('[')) => push(&mut out, TokenKind::MetaForallOpen, 3, &mut i),
                    (Some('['), _) => push(&mut out, TokenKind::ForallOpen, 2, &mut i),
                    (Some('~'), _) => push(&mut out, TokenKind::MetaNeg, 2, &mut i),
                    (Some('T'), _) => push(&mut out, TokenKind::MetaTop, 2, &mut i),
                    (Some('|'), _) => push(&mut out, TokenKind::MetaOr, 2, &mut i),
                    _ => return Err((line, col, "stray '!'".to_string())),
                },
                c if c.is_ascii_alphabetic() || c == '_' || c == '$' => {
                    let start = i;
                    while i < chars.len()
                        && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '$')
                    {
                        i += 1;
                    }
                    let name: String = chars[start..i].iter().collect();
                    let kind = match name.as_str() {
                        "T" => TokenKind::TopLit,
                        "F" => TokenKind::BotLit,
                        _ => TokenKind::Name(name),
                    };
                    out.push(Token {
                        kind,
                        line,
                        col: start + 1,
                    });
                }
                other => return Err((line, col, format!("unexpected character '{other}'"))),
            }
        }
        out.push(Token {
            kind: TokenKind::Eof,
            line,
            col: chars.len() + 1,
        });
        Ok(out)
    }
}
