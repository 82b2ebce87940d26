//! Brown-style external propositions: the meta-level layer over object
//! terms. Object-level terms of type `o` embed directly; the meta
//! connectives are negation, typed equation, top, disjunction and typed
//! universal quantification.

use std::sync::Arc;

use thiserror::Error;

use crate::normalize::normalize;
use crate::term::Term;
use crate::ty::Type;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Prop {
    /// An object-level Boolean term.
    Embed(Term),
    MetaNeg(Arc<Prop>),
    /// `l =̇^τ r` between object terms of type `τ`.
    MetaEq(Term, Term, Type),
    MetaTop,
    MetaOr(Arc<Prop>, Arc<Prop>),
    /// Binds the free variable `$k` (k = binder depth from the root) of the
    /// given type inside all embedded terms of the body.
    MetaForall(Type, Arc<Prop>),
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum PropError {
    #[error("embedded term is not Boolean: {0}")]
    NotBoolean(String),
    #[error("meta-equation sides disagree at type {0}")]
    EqTypeMismatch(Type),
}

/// Canonical name of the meta-variable bound at `depth`.
pub fn meta_var_name(depth: u32) -> String {
    format!("${depth}")
}

impl Prop {
    pub fn meta_neg(p: Prop) -> Prop {
        Prop::MetaNeg(Arc::new(p))
    }

    pub fn meta_or(l: Prop, r: Prop) -> Prop {
        Prop::MetaOr(Arc::new(l), Arc::new(r))
    }

    pub fn meta_forall(ty: Type, body: Prop) -> Prop {
        Prop::MetaForall(ty, Arc::new(body))
    }

    /// Normalizes every embedded term, yielding the stored representative.
    pub fn normalized(&self) -> Prop {
        match self {
            Prop::Embed(t) => Prop::Embed(normalize(t)),
            Prop::MetaNeg(p) => Prop::meta_neg(p.normalized()),
            Prop::MetaEq(l, r, ty) => Prop::MetaEq(normalize(l), normalize(r), ty.clone()),
            Prop::MetaTop => Prop::MetaTop,
            Prop::MetaOr(l, r) => Prop::meta_or(l.normalized(), r.normalized()),
            Prop::MetaForall(ty, b) => Prop::meta_forall(ty.clone(), b.normalized()),
        }
    }

    /// Substitutes `sub` for the named free variable in all embedded terms.
    pub fn substitute(&self, name: &str, sub: &Term) -> Prop {
        match self {
            Prop::Embed(t) => Prop::Embed(t.substitute(name, sub).expect("type-correct instance")),
            Prop::MetaNeg(p) => Prop::meta_neg(p.substitute(name, sub)),
            Prop::MetaEq(l, r, ty) => Prop::MetaEq(
                l.substitute(name, sub).expect("type-correct instance"),
                r.substitute(name, sub).expect("type-correct instance"),
                ty.clone(),
            ),
            Prop::MetaTop => Prop::MetaTop,
            Prop::MetaOr(l, r) => {
                Prop::meta_or(l.substitute(name, sub), r.substitute(name, sub))
            }
            Prop::MetaForall(ty, b) => Prop::meta_forall(ty.clone(), b.substitute(name, sub)),
        }
    }

    /// Instantiates the outermost binder of a `MetaForall` body.
    ///
    /// The binder at depth `depth` bound `$depth`; deeper binders keep their
    /// names because depth numbering is absolute from the root.
    pub fn instantiate(&self, depth: u32, arg: &Term) -> Prop {
        self.substitute(&meta_var_name(depth), arg)
    }

    /// A sentence has no free variables in any embedded term.
    pub fn is_sentence(&self) -> bool {
        fn go(p: &Prop, bound: &mut Vec<String>) -> bool {
            match p {
                Prop::Embed(t) => embedded_ok(t, bound),
                Prop::MetaNeg(q) => go(q, bound),
                Prop::MetaEq(l, r, _) => embedded_ok(l, bound) && embedded_ok(r, bound),
                Prop::MetaTop => true,
                Prop::MetaOr(l, r) => go(l, bound) && go(r, bound),
                Prop::MetaForall(_, b) => {
                    bound.push(meta_var_name(bound.len() as u32));
                    let ok = go(b, bound);
                    bound.pop();
                    ok
                }
            }
        }
        fn embedded_ok(t: &Term, bound: &[String]) -> bool {
            t.is_locally_closed_at(0)
                && t.free_vars()
                    .iter()
                    .all(|(n, _)| bound.iter().any(|b| b == n.as_ref()))
        }
        go(self, &mut Vec::new())
    }

    /// Well-formedness: embedded terms Boolean, equation sides at their
    /// annotated type.
    pub fn validate(&self) -> Result<(), PropError> {
        match self {
            Prop::Embed(t) => match t.typecheck() {
                Ok(Type::O) => Ok(()),
                _ => Err(PropError::NotBoolean(format!("{t:?}"))),
            },
            Prop::MetaNeg(p) => p.validate(),
            Prop::MetaEq(l, r, ty) => {
                let lt = l.typecheck().map_err(|_| PropError::EqTypeMismatch(ty.clone()))?;
                let rt = r.typecheck().map_err(|_| PropError::EqTypeMismatch(ty.clone()))?;
                if lt == *ty && rt == *ty {
                    Ok(())
                } else {
                    Err(PropError::EqTypeMismatch(ty.clone()))
                }
            }
            Prop::MetaTop => Ok(()),
            Prop::MetaOr(l, r) => {
                l.validate()?;
                r.validate()
            }
            Prop::MetaForall(_, b) => b.validate(),
        }
    }
}
