//! Full beta-eta normalization.
//!
//! Beta-reduction runs in normal order down to beta-normal form; eta
//! contraction then rewrites `λx. f x` to `f` bottom-up. The simply typed
//! calculus is strongly normalizing, so this terminates for well-typed input
//! and yields the canonical representative of the βη-equivalence class.

use std::sync::Arc;

use crate::term::Term;

/// Beta-eta-normal form.
pub fn normalize(t: &Term) -> Term {
    eta_contract(&beta_normalize(t))
}

/// Two terms are βη-equivalent iff their normal forms coincide.
pub fn beta_eta_equal(a: &Term, b: &Term) -> bool {
    normalize(a) == normalize(b)
}

fn beta_normalize(t: &Term) -> Term {
    match t {
        Term::Const(_) | Term::Bound(_) | Term::Free(..) => t.clone(),
        Term::Lam(ty, b) => Term::Lam(ty.clone(), Arc::new(beta_normalize(b))),
        Term::App(f, a) => {
            let f = beta_normalize(f);
            if let Term::Lam(_, body) = &f {
                beta_normalize(&body.open_with(0, a))
            } else {
                Term::App(Arc::new(f), Arc::new(beta_normalize(a)))
            }
        }
    }
}

fn eta_contract(t: &Term) -> Term {
    match t {
        Term::Const(_) | Term::Bound(_) | Term::Free(..) => t.clone(),
        Term::App(f, a) => Term::App(Arc::new(eta_contract(f)), Arc::new(eta_contract(a))),
        Term::Lam(ty, b) => {
            let body = eta_contract(b);
            if let Term::App(f, a) = &body {
                if matches!(a.as_ref(), Term::Bound(0)) && !uses_index(f, 0) {
                    // λx. f x  ~>  f, re-contracting what this exposes.
                    return eta_contract(&f.shift_above(0, -1));
                }
            }
            Term::Lam(ty.clone(), Arc::new(body))
        }
    }
}

fn uses_index(t: &Term, idx: u32) -> bool {
    match t {
        Term::Const(_) | Term::Free(..) => false,
        Term::Bound(i) => *i == idx,
        Term::Lam(_, b) => uses_index(b, idx + 1),
        Term::App(f, a) => uses_index(f, idx) || uses_index(a, idx),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ty::Type;

    fn ia() -> Term {
        Term::param("a", Type::Iota)
    }

    #[test]
    fn beta_redex_reduces() {
        // (λx:i. x) a  ~>  a
        let id = Term::lam(Type::Iota, Term::Bound(0));
        let t = Term::app(id, ia());
        assert_eq!(normalize(&t), ia());
    }

    #[test]
    fn eta_redex_contracts() {
        // λx:i. f x  ~>  f  when x not free in f
        let f = Term::param("f", Type::fun(Type::Iota, Type::Iota));
        let t = Term::lam(Type::Iota, Term::app(f.clone(), Term::Bound(0)));
        assert_eq!(normalize(&t), f);
    }

    #[test]
    fn eta_cascade() {
        // λx. λy. f x y  ~>  f
        let fty = Type::fun(Type::Iota, Type::fun(Type::Iota, Type::Iota));
        let f = Term::param("f", fty);
        let t = Term::lam(
            Type::Iota,
            Term::lam(
                Type::Iota,
                Term::apps(f.clone(), [Term::Bound(1), Term::Bound(0)]),
            ),
        );
        assert_eq!(normalize(&t), f);
    }

    #[test]
    fn no_eta_under_applied_argument() {
        // λx. f a x with a occurrence shields nothing: contractible to (f a).
        let fty = Type::fun(Type::Iota, Type::fun(Type::Iota, Type::Iota));
        let f = Term::param("f", fty);
        let t = Term::lam(Type::Iota, Term::apps(f.clone(), [ia(), Term::Bound(0)]));
        assert_eq!(normalize(&t), Term::app(f, ia()));
    }

    #[test]
    fn normalization_is_idempotent_and_type_preserving() {
        let id = Term::lam(Type::Iota, Term::Bound(0));
        let t = Term::app(
            Term::lam(
                Type::fun(Type::Iota, Type::Iota),
                Term::app(Term::Bound(0), ia()),
            ),
            id,
        );
        let ty = t.typecheck().unwrap();
        let n = normalize(&t);
        assert_eq!(n, ia());
        assert_eq!(n.typecheck().unwrap(), ty);
        assert_eq!(normalize(&n), n);
    }
}
