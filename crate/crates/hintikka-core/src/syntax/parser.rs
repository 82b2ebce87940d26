//! Recursive-descent parser for sentences, props, types and signature files.



use thiserror::Error;

use super::lexer::{Lexer, Token, TokenKind};
use crate::connectives::{expand_connective, Connective};
use crate::prop::{meta_var_name, Prop};
use crate::signature::{Flavor, Signature};
use crate::term::Term;
use crate::ty::Type;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("unknown symbol '{0}'")]
    UnknownSymbol(String),
    #[error("ill-typed: {0}")]
    IllTyped(String),
    #[error("sentence is not closed")]
    NotClosed,
    #[error("sentence is not Boolean, has type {0}")]
    NotBoolean(Type),
    #[error("connective '{0}' is not available in a red signature")]
    NotInRedSignature(String),
}

fn syn(tok: &Token, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line: tok.line,
        col: tok.col,
        msg: msg.into(),
    }
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    sig: &'a Signature,
    /// Innermost binder last; values are the binder argument types.
    binders: Vec<(String, Type)>,
    /// Names bound by enclosing meta-quantifiers, outermost first.
    meta_binders: Vec<(String, Type)>,
}

impl<'a> Parser<'a> {
    fn new(tokens: Vec<Token>, sig: &'a Signature) -> Self {
        Parser {
            tokens,
            pos: 0,
            sig,
            binders: Vec::new(),
            meta_binders: Vec::new(),
        }
    }

    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, kind: TokenKind) -> Result<Token, ParseError> {
        let t = self.next();
        if t.kind == kind {
            Ok(t)
        } else {
            Err(syn(&t, format!("expected '{kind}', found '{}'", t.kind)))
        }
    }

    fn at_eof(&self) -> bool {
        self.peek().kind == TokenKind::Eof
    }

    // ---- types ----

    fn parse_type(&mut self) -> Result<Type, ParseError> {
        let t = self.next();
        match &t.kind {
            TokenKind::Name(n) if n == "o" => Ok(Type::O),
            TokenKind::Name(n) if n == "i" => Ok(Type::Iota),
            TokenKind::LParen => {
                let arg = self.parse_type()?;
                self.expect(TokenKind::Gt)?;
                let ret = self.parse_type()?;
                self.expect(TokenKind::RParen)?;
                Ok(Type::fun(arg, ret))
            }
            _ => Err(syn(&t, format!("expected a type, found '{}'", t.kind))),
        }
    }

    fn parse_bracketed_type(&mut self) -> Result<Type, ParseError> {
        let ty = self.parse_type()?;
        self.expect(TokenKind::RBracket)?;
        Ok(ty)
    }

    // ---- terms ----

    fn blue_macro(&self, c: Connective, tok: &Token) -> Result<Term, ParseError> {
        if self.sig.flavor.is_blue() {
            Ok(expand_connective(&c))
        } else {
            Err(syn(tok, format!("'{}' requires a blue signature", tok.kind)))
        }
    }

    fn parse_term(&mut self) -> Result<Term, ParseError> {
        self.parse_arrow()
    }

    fn parse_arrow(&mut self) -> Result<Term, ParseError> {
        let lhs = self.parse_or()?;
        if self.peek().kind == TokenKind::Arrow {
            let tok = self.next();
            let rhs = self.parse_arrow()?; // right-associative
            let imp = self.blue_macro(Connective::Implies, &tok)?;
            Ok(Term::apps(imp, [lhs, rhs]))
        } else {
            Ok(lhs)
        }
    }

    fn parse_or(&mut self) -> Result<Term, ParseError> {
        let mut lhs = self.parse_and()?;
        while self.peek().kind == TokenKind::Pipe {
            let tok = self.next();
            let rhs = self.parse_and()?;
            let or = self.blue_macro(Connective::Or, &tok)?;
            lhs = Term::apps(or, [lhs, rhs]);
        }
        Ok(lhs)
    }

    fn parse_and(&mut self) -> Result<Term, ParseError> {
        let mut lhs = self.parse_eq()?;
        while self.peek().kind == TokenKind::Amp {
            let tok = self.next();
            let rhs = self.parse_eq()?;
            let and = self.blue_macro(Connective::And, &tok)?;
            lhs = Term::apps(and, [lhs, rhs]);
        }
        Ok(lhs)
    }

    fn parse_eq(&mut self) -> Result<Term, ParseError> {
        let mut lhs = self.parse_prefix()?;
        while self.peek().kind == TokenKind::EqOpen {
            self.next();
            let ty = self.parse_bracketed_type()?;
            let rhs = self.parse_prefix()?;
            lhs = Term::prim_eq(ty, lhs, rhs);
        }
        Ok(lhs)
    }

    fn parse_prefix(&mut self) -> Result<Term, ParseError> {
        match self.peek().kind.clone() {
            TokenKind::Tilde => {
                let tok = self.next();
                let body = self.parse_prefix()?;
                if self.sig.flavor.is_blue() {
                    let neg = self.blue_macro(Connective::Neg, &tok)?;
                    Ok(Term::app(neg, body))
                } else {
                    Ok(Term::app(Term::Const(crate::term::Const::Neg), body))
                }
            }
            TokenKind::ForallOpen => {
                let tok = self.next();
                let ty = self.parse_bracketed_type()?;
                let body = self.parse_prefix()?;
                let pi = self.blue_macro(Connective::Pi(ty), &tok)?;
                Ok(Term::app(pi, body))
            }
            _ => self.parse_app(),
        }
    }

    fn parse_app(&mut self) -> Result<Term, ParseError> {
        let mut head = self.parse_atom()?;
        while self.starts_atom() {
            let arg = self.parse_atom()?;
            head = Term::app(head, arg);
        }
        Ok(head)
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek().kind,
            TokenKind::Name(_)
                | TokenKind::LParen
                | TokenKind::TopLit
                | TokenKind::BotLit
                | TokenKind::EqOpen
        )
    }

    fn parse_atom(&mut self) -> Result<Term, ParseError> {
        let tok = self.next();
        match &tok.kind {
            TokenKind::Name(name) => self.resolve_name(name, &tok),
            TokenKind::TopLit => self.blue_macro(Connective::Top, &tok),
            TokenKind::BotLit => self.blue_macro(Connective::Bottom, &tok),
            TokenKind::EqOpen => {
                let ty = self.parse_bracketed_type()?;
                Ok(Term::eq_const(ty))
            }
            TokenKind::LParen => {
                match self.peek().kind.clone() {
                    TokenKind::Backslash => {
                        self.next();
                        let name_tok = self.next();
                        let name = match &name_tok.kind {
                            TokenKind::Name(n) => n.clone(),
                            k => return Err(syn(&name_tok, format!("expected binder name, found '{k}'"))),
                        };
                        self.expect(TokenKind::Colon)?;
                        let ty = self.parse_type()?;
                        self.expect(TokenKind::Dot)?;
                        self.binders.push((name, ty.clone()));
                        let body = self.parse_term()?;
                        self.binders.pop();
                        self.expect(TokenKind::RParen)?;
                        Ok(Term::lam(ty, body))
                    }
                    TokenKind::Tilde
                        if self.tokens.get(self.pos + 1).map(|t| &t.kind)
                            == Some(&TokenKind::RParen) =>
                    {
                        // bare negation constant "(~)"
                        let tilde = self.next();
                        self.next();
                        if self.sig.flavor.is_blue() {
                            self.blue_macro(Connective::Neg, &tilde)
                        } else {
                            Ok(Term::Const(crate::term::Const::Neg))
                        }
                    }
                    _ => {
                        let t = self.parse_term()?;
                        self.expect(TokenKind::RParen)?;
                        Ok(t)
                    }
                }
            }
            k => Err(syn(&tok, format!("expected a term, found '{k}'"))),
        }
    }

    fn resolve_name(&self, name: &str, tok: &Token) -> Result<Term, ParseError> {
        // innermost binder wins
        for (depth_back, (n, _)) in self.binders.iter().rev().enumerate() {
            if n == name {
                return Ok(Term::Bound(depth_back as u32));
            }
        }
        for (idx, (bname, bty)) in self.meta_binders.iter().enumerate() {
            if bname == name {
                return Ok(Term::Free(meta_var_name(idx as u32).into(), bty.clone()));
            }
        }
        if let Some(ty) = self.sig.param_type(name) {
            return Ok(Term::param(name, ty.clone()));
        }
        if name.starts_with('$') {
            return Err(syn(tok, "names starting with '$' are reserved"));
        }
        Err(ParseError::UnknownSymbol(name.to_string()))
    }

    // ---- props ----

    fn parse_prop(&mut self) -> Result<Prop, ParseError> {
        let mut lhs = self.parse_prop_prefix()?;
        while self.peek().kind == TokenKind::MetaOr {
            self.next();
            let rhs = self.parse_prop_prefix()?;
            lhs = Prop::meta_or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn parse_prop_prefix(&mut self) -> Result<Prop, ParseError> {
        match self.peek().kind.clone() {
            TokenKind::MetaNeg => {
                self.next();
                let body = self.parse_prop_prefix()?;
                Ok(Prop::meta_neg(body))
            }
            TokenKind::MetaForallOpen => {
                self.next();
                let ty = self.parse_bracketed_type()?;
                let name_tok = self.next();
                let name = match &name_tok.kind {
                    TokenKind::Name(n) => n.clone(),
                    k => return Err(syn(&name_tok, format!("expected binder name, found '{k}'"))),
                };
                self.expect(TokenKind::Dot)?;
                self.meta_binders.push((name, ty.clone()));
                let body = self.parse_prop_prefix()?;
                self.meta_binders.pop();
                Ok(Prop::meta_forall(ty, body))
            }
            TokenKind::MetaTop => {
                self.next();
                Ok(Prop::MetaTop)
            }
            TokenKind::LParen if self.prop_in_parens() => {
                self.next();
                let p = self.parse_prop()?;
                self.expect(TokenKind::RParen)?;
                Ok(p)
            }
            _ => {
                let l = self.parse_term()?;
                if self.peek().kind == TokenKind::MetaEqOpen {
                    self.next();
                    let ty = self.parse_bracketed_type()?;
                    let r = self.parse_term()?;
                    Ok(Prop::MetaEq(l, r, ty))
                } else {
                    Ok(Prop::Embed(l))
                }
            }
        }
    }

    /// Lookahead: does this parenthesis open a prop rather than a term?
    /// True when the next token is itself a meta connective.
    fn prop_in_parens(&self) -> bool {
        matches!(
            self.tokens.get(self.pos + 1).map(|t| &t.kind),
            Some(TokenKind::MetaNeg)
                | Some(TokenKind::MetaForallOpen)
                | Some(TokenKind::MetaTop)
        )
    }
}

/// Parses a type written in the concrete syntax.
pub fn parse_type(text: &str) -> Result<Type, ParseError> {
    let tokens = Lexer::tokenize(text, 1)
        .map_err(|(line, col, msg)| ParseError::Syntax { line, col, msg })?;
    let sig = Signature::blue();
    let mut p = Parser::new(tokens, &sig);
    let ty = p.parse_type()?;
    if !p.at_eof() {
        let tok = p.peek().clone();
        return Err(syn(&tok, "trailing input after type"));
    }
    Ok(ty)
}

/// Parses one closed Boolean sentence over the signature.
///
/// Blue signatures expand sugared connectives through the definition table;
/// the returned term is unnormalized core syntax.
pub fn parse_sentence(text: &str, sig: &Signature) -> Result<Term, ParseError> {
    parse_sentence_at(text, sig, 1)
}

fn parse_sentence_at(text: &str, sig: &Signature, line: usize) -> Result<Term, ParseError> {
    let tokens = Lexer::tokenize(text, line)
        .map_err(|(line, col, msg)| ParseError::Syntax { line, col, msg })?;
    let mut p = Parser::new(tokens, sig);
    let t = p.parse_term()?;
    if !p.at_eof() {
        let tok = p.peek().clone();
        return Err(syn(&tok, format!("trailing input '{}'", tok.kind)));
    }
    let ty = t.typecheck().map_err(|e| ParseError::IllTyped(e.to_string()))?;
    if !t.is_closed() {
        return Err(ParseError::NotClosed);
    }
    if ty != Type::O {
        return Err(ParseError::NotBoolean(ty));
    }
    Ok(t)
}

/// Parses one external proposition (sentence-level) over a red signature.
pub fn parse_prop(text: &str, sig: &Signature) -> Result<Prop, ParseError> {
    parse_prop_at(text, sig, 1)
}

fn parse_prop_at(text: &str, sig: &Signature, line: usize) -> Result<Prop, ParseError> {
    let tokens = Lexer::tokenize(text, line)
        .map_err(|(line, col, msg)| ParseError::Syntax { line, col, msg })?;
    let mut p = Parser::new(tokens, sig);
    let prop = p.parse_prop()?;
    if !p.at_eof() {
        let tok = p.peek().clone();
        return Err(syn(&tok, format!("trailing input '{}'", tok.kind)));
    }
    prop.validate().map_err(|e| ParseError::IllTyped(e.to_string()))?;
    if !prop.is_sentence() {
        return Err(ParseError::NotClosed);
    }
    Ok(prop)
}

/// Parses a sentence file: one sentence per line, `#` comments.
pub fn parse_sentence_file(text: &str, sig: &Signature) -> Result<Vec<Term>, ParseError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        out.push(parse_sentence_at(line, sig, idx + 1)?);
    }
    Ok(out)
}

/// Parses a prop file: one external proposition per line, `#` comments.
pub fn parse_prop_file(text: &str, sig: &Signature) -> Result<Vec<Prop>, ParseError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        out.push(parse_prop_at(line, sig, idx + 1)?);
    }
    Ok(out)
}

/// Parses a signature file: lines of the form `param <name> : <type>`.
pub fn parse_signature_file(text: &str, flavor: Flavor) -> Result<Signature, ParseError> {
    let mut sig = Signature::new(flavor);
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens = Lexer::tokenize(line, idx + 1)
            .map_err(|(line, col, msg)| ParseError::Syntax { line, col, msg })?;
        let mut p = Parser::new(tokens, &sig);
        let kw = p.next();
        match &kw.kind {
            TokenKind::Name(n) if n == "param" => {}
            k => return Err(syn(&kw, format!("expected 'param', found '{k}'"))),
        }
        let name_tok = p.next();
        let name = match &name_tok.kind {
            TokenKind::Name(n) => n.clone(),
            k => return Err(syn(&name_tok, format!("expected parameter name, found '{k}'"))),
        };
        if name == "o" || name == "i" || name == "param" || name.starts_with('$') {
            return Err(syn(&name_tok, format!("reserved parameter name '{name}'")));
        }
        p.expect(TokenKind::Colon)?;
        let ty = p.parse_type()?;
        if !p.at_eof() {
            let tok = p.peek().clone();
            return Err(syn(&tok, "trailing input after parameter declaration"));
        }
        drop(p);
        sig.add_param(&name, ty);
    }
    Ok(sig)
}
