//! The defined logical connectives of the equality-only formulation.
//!
//! Every connective is a closed term over the equality family alone. The
//! table keeps the argument order of Steen's presentation (several defining
//! equations are order-swapped relative to Andrews' originals):
//!
//! ```text
//! ⊤   := =^o  =^{ooo}  =^o
//! ⊥   := (λP:o. P) =^{oo} (λP:o. ⊤)
//! ¬   := λP:o. P =^o ⊥
//! ∧   := λP.λQ. (λF:ooo. F ⊤ ⊤) =^{o(ooo)} (λF:ooo. F P Q)
//! ∨   := λP.λQ. ¬(¬P ∧ ¬Q)
//! ⇒   := λP.λQ. ¬P ∨ Q
//! ⇔   := λP.λQ. P =^o Q
//! Π^τ := λP:oτ. P =^{oτ} (λX:τ. ⊤)
//! ```
//!
//! Connectives are macros: the parser expands them, internal storage is
//! always core syntax.

use thiserror::Error;

use crate::normalize::normalize;
use crate::term::Term;
use crate::ty::Type;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Connective {
    Top,
    Bottom,
    Neg,
    And,
    Or,
    Implies,
    Iff,
    /// Universal quantifier over the given argument type.
    Pi(Type),
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
#[error("unknown connective {0}")]
pub struct UnknownConnective(pub String);

fn ooo() -> Type {
    Type::fun(Type::O, Type::fun(Type::O, Type::O))
}

/// The expansion of a defined connective into core syntax, unnormalized.
pub fn expand_connective(c: &Connective) -> Term {
    match c {
        // =^o =^{ooo} =^o
        Connective::Top => Term::prim_eq(ooo(), Term::eq_const(Type::O), Term::eq_const(Type::O)),
        // (λP. P) =^{oo} (λP. ⊤)
        Connective::Bottom => Term::prim_eq(
            Type::fun(Type::O, Type::O),
            Term::lam(Type::O, Term::Bound(0)),
            Term::lam(Type::O, expand_connective(&Connective::Top)),
        ),
        // λP. P =^o ⊥
        Connective::Neg => Term::lam(
            Type::O,
            Term::prim_eq(
                Type::O,
                Term::Bound(0),
                expand_connective(&Connective::Bottom),
            ),
        ),
        // λP. λQ. (λF. F ⊤ ⊤) =^{o(ooo)} (λF. F P Q)
        Connective::And => {
            let top = expand_connective(&Connective::Top);
            Term::lam(
                Type::O,
                Term::lam(
                    Type::O,
                    Term::prim_eq(
                        Type::fun(ooo(), Type::O),
                        Term::lam(ooo(), Term::apps(Term::Bound(0), [top.clone(), top])),
                        Term::lam(
                            ooo(),
                            Term::apps(Term::Bound(0), [Term::Bound(2), Term::Bound(1)]),
                        ),
                    ),
                ),
            )
        }
        // λP. λQ. ¬(¬P ∧ ¬Q)
        Connective::Or => {
            let neg = || expand_connective(&Connective::Neg);
            let and = expand_connective(&Connective::And);
            Term::lam(
                Type::O,
                Term::lam(
                    Type::O,
                    Term::app(
                        neg(),
                        Term::apps(
                            and,
                            [
                                Term::app(neg(), Term::Bound(1)),
                                Term::app(neg(), Term::Bound(0)),
                            ],
                        ),
                    ),
                ),
            )
        }
        // λP. λQ. ¬P ∨ Q
        Connective::Implies => {
            let neg = expand_connective(&Connective::Neg);
            let or = expand_connective(&Connective::Or);
            Term::lam(
                Type::O,
                Term::lam(
                    Type::O,
                    Term::apps(or, [Term::app(neg, Term::Bound(1)), Term::Bound(0)]),
                ),
            )
        }
        // λP. λQ. P =^o Q
        Connective::Iff => Term::lam(
            Type::O,
            Term::lam(
                Type::O,
                Term::prim_eq(Type::O, Term::Bound(1), Term::Bound(0)),
            ),
        ),
        // λP:oτ. P =^{oτ} (λX:τ. ⊤)
        Connective::Pi(tau) => {
            let otau = Type::fun(tau.clone(), Type::O);
            Term::lam(
                otau.clone(),
                Term::prim_eq(
                    otau,
                    Term::Bound(0),
                    Term::lam(tau.clone(), expand_connective(&Connective::Top)),
                ),
            )
        }
    }
}

/// The annotated type of a connective from the table.
pub fn connective_type(c: &Connective) -> Type {
    match c {
        Connective::Top | Connective::Bottom => Type::O,
        Connective::Neg => Type::fun(Type::O, Type::O),
        Connective::And | Connective::Or | Connective::Implies | Connective::Iff => ooo(),
        Connective::Pi(tau) => Type::fun(Type::fun(tau.clone(), Type::O), Type::O),
    }
}

/// Normal form of `⊥`; the right-hand side of every negation.
pub fn bottom_nf() -> Term {
    normalize(&expand_connective(&Connective::Bottom))
}

/// Normal form of `⊤`.
pub fn top_nf() -> Term {
    normalize(&expand_connective(&Connective::Top))
}

/// `¬t` in normal form, assuming `t` is a normal Boolean term.
pub fn mk_neg_nf(t: &Term) -> Term {
    normalize(&Term::prim_eq(Type::O, t.clone(), bottom_nf()))
}

/// `s ≠^τ t`, i.e. `¬(s =^τ t)`, in normal form for normal `s`, `t`.
pub fn mk_neq_nf(tau: Type, s: &Term, t: &Term) -> Term {
    mk_neg_nf(&Term::prim_eq(tau, s.clone(), t.clone()))
}

/// Matches `¬x` on normal forms: an equation `x =^o ⊥`.
pub fn match_neg(t: &Term) -> Option<&Term> {
    let (l, r, tau) = t.match_eq()?;
    if *tau == Type::O && *r == bottom_nf() {
        Some(l)
    } else {
        None
    }
}

/// Matches `s ≠^τ t` on normal forms.
pub fn match_neq(t: &Term) -> Option<(&Term, &Term, &Type)> {
    match_neg(t)?.match_eq()
}

/// Leibniz equality at `τ`: `λX.λY. ∀P:oτ. (P X) ⇒ (P Y)`, with the
/// quantifier and implication expanded through the table so the result is a
/// closed equality-only term. Unnormalized.
pub fn leibniz(tau: &Type) -> Term {
    let otau = Type::fun(tau.clone(), Type::O);
    let implies = expand_connective(&Connective::Implies);
    let pi = expand_connective(&Connective::Pi(otau.clone()));
    // λX. λY. Π^{oτ} (λP. (P X) ⇒ (P Y))
    Term::lam(
        tau.clone(),
        Term::lam(
            tau.clone(),
            Term::app(
                pi,
                Term::lam(
                    otau,
                    Term::apps(
                        implies,
                        [
                            Term::app(Term::Bound(0), Term::Bound(2)),
                            Term::app(Term::Bound(0), Term::Bound(1)),
                        ],
                    ),
                ),
            ),
        ),
    )
}

/// `s =̇^τ t` (Leibniz equation) in normal form.
pub fn mk_leibniz_eq_nf(tau: &Type, s: &Term, t: &Term) -> Term {
    normalize(&Term::apps(leibniz(tau), [s.clone(), t.clone()]))
}

/// Recognizes a normalized Leibniz equation and recovers `(τ, s, t)`.
///
/// The normal form of `s =̇^τ t` is an equation at type `o(oτ)` whose right
/// side is `λP:oτ. ⊤` and whose left side stores `s` and `t` at fixed
/// positions of the expanded implication body. Candidates are re-normalized
/// and compared, so false positives are impossible.
pub fn match_leibniz_eq(t: &Term) -> Option<(Type, Term, Term)> {
    let (lhs, rhs, eq_ty) = t.match_eq()?;
    // eq_ty must be o(oτ) = Fun(O, Fun(O, τ)): an equation between predicates
    // over predicates... precisely Fun(ret=O, arg=Fun(ret=O, arg=τ)).
    let (arg, ret) = eq_ty.split_fun()?;
    if *ret != Type::O {
        return None;
    }
    let (tau, pred_ret) = arg.split_fun()?;
    if *pred_ret != Type::O {
        return None;
    }
    // rhs must be λP:oτ. ⊤
    match rhs {
        Term::Lam(ty, body) if ty == arg && **body == top_nf() => {}
        _ => return None,
    }
    // lhs is λP:oτ. <implication body>; dig out the two applied arguments.
    let body = match lhs {
        Term::Lam(ty, body) if ty == arg => body.as_ref(),
        _ => return None,
    };
    let (s, t_cand) = extract_leibniz_args(body)?;
    if !s.is_closed() || !t_cand.is_closed() {
        return None;
    }
    let rebuilt = mk_leibniz_eq_nf(tau, &s, &t_cand);
    if rebuilt == *t {
        Some((tau.clone(), s, t_cand))
    } else {
        None
    }
}

/// In the normalized implication body, `(P s)` appears inside the double
/// negation and `(P t)` inside the single negation. Rather than hard-coding
/// the entire skeleton we scan for the two applications of the bound
/// predicate `P` (index 0 relative to the Leibniz binder) to closed terms.
fn extract_leibniz_args(body: &Term) -> Option<(Term, Term)> {
    let mut hits = Vec::new();
    fn scan(t: &Term, depth: u32, hits: &mut Vec<Term>) {
        if let Term::App(f, a) = t {
            if let Term::Bound(i) = f.as_ref() {
                if *i == depth {
                    // argument sits under `depth` extra binders; only closed
                    // arguments are candidates, so unshifting is a no-op.
                    if a.is_locally_closed_at(0) {
                        hits.push(a.as_ref().clone());
                    }
                }
            }
            scan(f, depth, hits);
            scan(a, depth, hits);
        } else if let Term::Lam(_, b) = t {
            scan(b, depth + 1, hits);
        }
    }
    scan(body, 0, &mut hits);
    if hits.len() == 2 {
        Some((hits[0].clone(), hits[1].clone()))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normalize::beta_eta_equal;

    #[test]
    fn table_entries_typecheck_at_annotated_types() {
        let taus = [Type::Iota, Type::O, Type::fun(Type::Iota, Type::O)];
        let mut cases = vec![
            Connective::Top,
            Connective::Bottom,
            Connective::Neg,
            Connective::And,
            Connective::Or,
            Connective::Implies,
            Connective::Iff,
        ];
        for tau in taus {
            cases.push(Connective::Pi(tau));
        }
        for c in cases {
            let t = expand_connective(&c);
            assert!(t.is_closed(), "{c:?} must be closed");
            assert_eq!(t.typecheck().unwrap(), connective_type(&c), "{c:?}");
        }
    }

    #[test]
    fn iff_coincides_with_boolean_equality() {
        let iff = expand_connective(&Connective::Iff);
        assert_eq!(normalize(&iff), normalize(&Term::eq_const(Type::O)));
    }

    #[test]
    fn and_expansion_matches_functional_shape() {
        // (a ∧ b) normalizes to (λF. F ⊤ ⊤) =^{o(ooo)} (λF. F a b).
        let a = Term::param("a", Type::O);
        let b = Term::param("b", Type::O);
        let and = expand_connective(&Connective::And);
        let lhs = Term::apps(and, [a.clone(), b.clone()]);
        let top = expand_connective(&Connective::Top);
        let expected = Term::prim_eq(
            Type::fun(ooo(), Type::O),
            Term::lam(ooo(), Term::apps(Term::Bound(0), [top.clone(), top])),
            Term::lam(ooo(), Term::apps(Term::Bound(0), [a, b])),
        );
        assert!(beta_eta_equal(&lhs, &expected));
    }

    #[test]
    fn negation_shape_is_detected() {
        let s = Term::param("p", Type::O);
        let n = mk_neg_nf(&s);
        assert_eq!(match_neg(&n), Some(&s));
        assert!(match_neg(&s).is_none());
    }

    #[test]
    fn leibniz_typechecks_as_binary_predicate() {
        for tau in [Type::Iota, Type::O] {
            let l = leibniz(&tau);
            assert_eq!(l.typecheck().unwrap(), Type::eq_pred(&tau));
        }
    }

    #[test]
    fn leibniz_differs_from_primitive_equality() {
        let a = Term::param("a", Type::Iota);
        let b = Term::param("b", Type::Iota);
        let leib = mk_leibniz_eq_nf(&Type::Iota, &a, &b);
        let prim = normalize(&Term::prim_eq(Type::Iota, a, b));
        assert_ne!(leib, prim);
    }

    #[test]
    fn leibniz_equation_round_trips_through_matcher() {
        let a = Term::param("a", Type::Iota);
        let b = Term::param("b", Type::Iota);
        let leib = mk_leibniz_eq_nf(&Type::Iota, &a, &b);
        let (tau, s, t) = match_leibniz_eq(&leib).expect("must match");
        assert_eq!(tau, Type::Iota);
        assert_eq!(s, a);
        assert_eq!(t, b);
        // A plain equation must not be mistaken for a Leibniz equation.
        let prim = normalize(&Term::prim_eq(Type::Iota, s, t));
        assert!(match_leibniz_eq(&prim).is_none());
    }
}
