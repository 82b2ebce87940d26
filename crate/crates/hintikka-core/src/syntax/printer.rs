//! Printing back into the concrete syntax.
//!
//! The printer emits core syntax only, except for three exact shorthands
//! that re-parse to the identical term: `T` and `F` for the table expansions
//! of top and bottom (which are already normal), and `(~)` for the bare
//! negation (the defined lambda under blue, the primitive constant under
//! red). Everything printed re-parses to an alpha-equal term, so
//! parse∘print is the identity on closed sentences.

use crate::connectives::{expand_connective, Connective};
use crate::prop::Prop;
use crate::signature::Flavor;
use crate::term::{Const, Term};

/// Precedence levels from loosest to tightest binding.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Level {
    Eq,
    Prefix,
    Atom,
}

pub fn print_term(t: &Term, flavor: Flavor) -> String {
    print_term_with_offset(t, flavor, 0)
}

/// Prints with binder names starting at `X<offset>`; used by tests to
/// produce alpha-variants of the same canonical term.
pub fn print_term_with_offset(t: &Term, flavor: Flavor, offset: u32) -> String {
    let mut s = String::new();
    go(t, flavor, Level::Eq, offset, &mut s);
    s
}

fn binder_name(depth: u32) -> String {
    format!("X{depth}")
}

fn go(t: &Term, flavor: Flavor, level: Level, depth: u32, out: &mut String) {
    // exact shorthands
    if flavor.is_blue() {
        if *t == expand_connective(&Connective::Top) {
            out.push('T');
            return;
        }
        if *t == expand_connective(&Connective::Bottom) {
            out.push('F');
            return;
        }
        if *t == expand_connective(&Connective::Neg) {
            out.push_str("(~)");
            return;
        }
    }
    match t {
        Term::Const(Const::Eq(ty)) => {
            out.push_str("=[");
            out.push_str(&ty.to_string());
            out.push(']');
        }
        Term::Const(Const::Neg) => out.push_str("(~)"),
        Term::Const(Const::Param(n, _)) => out.push_str(n),
        Term::Free(n, _) => out.push_str(n),
        Term::Bound(i) => {
            let k = depth.checked_sub(1 + i).unwrap_or(u32::MAX);
            out.push_str(&binder_name(k));
        }
        Term::Lam(ty, b) => {
            out.push_str("(\\");
            out.push_str(&binder_name(depth));
            out.push(':');
            out.push_str(&ty.to_string());
            out.push_str(". ");
            go(b, flavor, Level::Eq, depth + 1, out);
            out.push(')');
        }
        Term::App(..) => {
            if let Some((l, r, ty)) = t.match_eq() {
                // full equation: infix, operands one level tighter
                parenthesize_if(level > Level::Eq, out, |out| {
                    go(l, flavor, Level::Prefix, depth, out);
                    out.push_str(" =[");
                    out.push_str(&ty.to_string());
                    out.push_str("] ");
                    go(r, flavor, Level::Prefix, depth, out);
                });
                return;
            }
            if !flavor.is_blue() {
                if let Term::App(f, a) = t {
                    if matches!(f.as_ref(), Term::Const(Const::Neg)) {
                        parenthesize_if(level > Level::Prefix, out, |out| {
                            out.push('~');
                            go(a, flavor, Level::Prefix, depth, out);
                        });
                        return;
                    }
                }
            }
            // application spine
            parenthesize_if(level > Level::Atom, out, |out| {
                let (head, args) = t.spine();
                go(head, flavor, Level::Atom, depth, out);
                for a in args {
                    out.push(' ');
                    // arguments that are themselves applications or
                    // equations need their own parentheses
                    let needs = matches!(a, Term::App(..));
                    parenthesize_if(needs, out, |out| {
                        go(a, flavor, Level::Eq, depth, out);
                    });
                }
            });
        }
    }
}

fn parenthesize_if(cond: bool, out: &mut String, body: impl FnOnce(&mut String)) {
    if cond {
        out.push('(');
        body(out);
        out.push(')');
    } else {
        body(out);
    }
}

/// Prints an external proposition in the prop-file syntax.
pub fn print_prop(p: &Prop, flavor: Flavor) -> String {
    let mut s = String::new();
    go_prop(p, flavor, 0, &mut s);
    s
}

fn go_prop(p: &Prop, flavor: Flavor, meta_depth: u32, out: &mut String) {
    match p {
        Prop::Embed(t) => out.push_str(&print_term(t, flavor)),
        Prop::MetaNeg(q) => {
            out.push_str("!~ ");
            match q.as_ref() {
                Prop::MetaOr(..) => {
                    out.push('(');
                    go_prop(q, flavor, meta_depth, out);
                    out.push(')');
                }
                _ => go_prop(q, flavor, meta_depth, out),
            }
        }
        Prop::MetaEq(l, r, ty) => {
            let lhs = print_term(l, flavor);
            let rhs = print_term(r, flavor);
            let wrap_l = l.match_eq().is_some();
            let wrap_r = r.match_eq().is_some();
            if wrap_l {
                out.push('(');
            }
            out.push_str(&lhs);
            if wrap_l {
                out.push(')');
            }
            out.push_str(" !=[");
            out.push_str(&ty.to_string());
            out.push_str("] ");
            if wrap_r {
                out.push('(');
            }
            out.push_str(&rhs);
            if wrap_r {
                out.push(')');
            }
        }
        Prop::MetaTop => out.push_str("!T"),
        Prop::MetaOr(l, r) => {
            go_prop(l, flavor, meta_depth, out);
            out.push_str(" !| ");
            go_prop(r, flavor, meta_depth, out);
        }
        Prop::MetaForall(ty, b) => {
            out.push_str("!![");
            out.push_str(&ty.to_string());
            out.push_str("] $");
            out.push_str(&meta_depth.to_string());
            out.push_str(". ");
            go_prop(b, flavor, meta_depth + 1, out);
        }
    }
}
