//! Bounded closed-term universes.
//!
//! The paper's "for every closed term" conditions are checked against a
//! finite, depth-limited enumeration of closed βη-normal terms. Depth counts
//! spine nesting: a constant is depth 0, an application spine `h s̄` is one
//! deeper than its deepest argument, an abstraction is one deeper than its
//! body.

use std::sync::Arc;

use indexmap::IndexSet;
use thiserror::Error;

use crate::normalize::normalize;
use crate::signature::Signature;
use crate::term::Term;
use crate::ty::Type;

use std::collections::BTreeMap;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum UniverseError {
    #[error("universe exceeds {cap} terms at type {ty}")]
    UniverseExplosion { ty: Type, cap: usize },
    #[error("universe has no terms of type {0}")]
    MissingType(Type),
}

pub const DEFAULT_TERM_CAP: usize = 10_000;

#[derive(Clone, Debug)]
pub struct TermUniverse {
    per_type: BTreeMap<Type, Vec<Term>>,
    parameter_pool: BTreeMap<Type, Vec<Arc<str>>>,
    pub generation_depth: u32,
}

impl TermUniverse {
    /// Enumerates closed normal terms for every relevant type.
    ///
    /// Relevant types are the base types, the parameter types with all their
    /// subtypes, and the predicate types `oι`, `oo` (these are the argument
    /// types of the expanded Leibniz equations, so the checkers always have
    /// an argument bucket for them).
    pub fn generate(sig: &Signature, depth: u32) -> Result<TermUniverse, UniverseError> {
        Self::generate_with_cap(sig, depth, DEFAULT_TERM_CAP)
    }

    pub fn generate_with_cap(
        sig: &Signature,
        depth: u32,
        cap: usize,
    ) -> Result<TermUniverse, UniverseError> {
        let inventory = inventory_types(sig);
        let mut per_type: BTreeMap<Type, Vec<Term>> = BTreeMap::new();
        let mut seen: BTreeMap<Type, IndexSet<Term>> = BTreeMap::new();
        for ty in &inventory {
            per_type.insert(ty.clone(), Vec::new());
            seen.insert(ty.clone(), IndexSet::new());
        }

        // closed enumeration: no environment at the top level
        for ty in &inventory {
            let mut terms = enumerate(ty, depth, &Vec::new(), sig, &inventory, cap)
                .map_err(|cap| UniverseError::UniverseExplosion { ty: ty.clone(), cap })?;
            // canonicalize, dedup, keep normal representatives
            let mut bucket = IndexSet::new();
            for t in terms.drain(..) {
                let n = normalize(&t);
                if n.typecheck().ok().as_ref() == Some(ty) {
                    bucket.insert(n);
                }
            }
            if bucket.len() > cap {
                return Err(UniverseError::UniverseExplosion { ty: ty.clone(), cap });
            }
            per_type.insert(ty.clone(), bucket.into_iter().collect());
        }

        let mut parameter_pool: BTreeMap<Type, Vec<Arc<str>>> = BTreeMap::new();
        for (name, ty) in sig.params() {
            parameter_pool
                .entry(ty.clone())
                .or_default()
                .push(name.clone());
        }

        Ok(TermUniverse {
            per_type,
            parameter_pool,
            generation_depth: depth,
        })
    }

    pub fn terms_of(&self, ty: &Type) -> Result<&[Term], UniverseError> {
        self.per_type
            .get(ty)
            .map(|v| v.as_slice())
            .ok_or_else(|| UniverseError::MissingType(ty.clone()))
    }

    pub fn contains_term(&self, ty: &Type, t: &Term) -> bool {
        self.per_type
            .get(ty)
            .map(|v| v.iter().any(|u| u == t))
            .unwrap_or(false)
    }

    pub fn params_of(&self, ty: &Type) -> &[Arc<str>] {
        self.parameter_pool
            .get(ty)
            .map(|v| v.as_slice())
            .unwrap_or(&[])
    }

    pub fn types(&self) -> impl Iterator<Item = &Type> {
        self.per_type.keys()
    }

    /// Applies a term transformation to every bucket entry (used to carry a
    /// blue universe over to the red signature).
    pub fn map_terms(&self, f: impl Fn(&Term) -> Term) -> TermUniverse {
        let per_type = self
            .per_type
            .iter()
            .map(|(ty, v)| {
                let mut out = IndexSet::new();
                for t in v {
                    out.insert(f(t));
                }
                (ty.clone(), out.into_iter().collect())
            })
            .collect();
        TermUniverse {
            per_type,
            parameter_pool: self.parameter_pool.clone(),
            generation_depth: self.generation_depth,
        }
    }
}

/// Base + parameter subtype closure + the Leibniz argument types.
fn inventory_types(sig: &Signature) -> Vec<Type> {
    let mut out: IndexSet<Type> = IndexSet::new();
    fn add_subtypes(ty: &Type, out: &mut IndexSet<Type>) {
        out.insert(ty.clone());
        if let Some((arg, ret)) = ty.split_fun() {
            add_subtypes(arg, out);
            add_subtypes(ret, out);
        }
    }
    add_subtypes(&Type::O, &mut out);
    add_subtypes(&Type::Iota, &mut out);
    add_subtypes(&Type::fun(Type::Iota, Type::O), &mut out);
    add_subtypes(&Type::fun(Type::O, Type::O), &mut out);
    for (_, ty) in sig.params() {
        add_subtypes(ty, &mut out);
    }
    let mut v: Vec<Type> = out.into_iter().collect();
    v.sort();
    v
}

/// All terms of `ty` with spine depth <= `depth` over `env` (innermost
/// binder last). Unnormalized; the caller canonicalizes.
fn enumerate(
    ty: &Type,
    depth: u32,
    env: &Vec<Type>,
    sig: &Signature,
    inventory: &[Type],
    cap: usize,
) -> Result<Vec<Term>, usize> {
    let mut out: Vec<Term> = Vec::new();

    // depth 0: heads with no arguments
    for (h, hty) in heads(sig, env, inventory) {
        if hty == *ty {
            out.push(h.clone());
        }
    }

    if depth > 0 {
        // application spines: head applied to 1..=arity arguments, each of
        // depth <= depth-1, such that the result type is `ty`
        for (h, hty) in heads(sig, env, inventory) {
            let arg_tys = hty.arg_types();
            for n in 1..=arg_tys.len() {
                if hty.result_after(n) != Some(ty) {
                    continue;
                }
                let mut arg_choices: Vec<Vec<Term>> = Vec::new();
                let mut feasible = true;
                for at in arg_tys.iter().take(n) {
                    let choices = enumerate(at, depth - 1, env, sig, inventory, cap)?;
                    if choices.is_empty() {
                        feasible = false;
                        break;
                    }
                    arg_choices.push(choices);
                }
                if !feasible {
                    continue;
                }
                let mut stack: Vec<Vec<Term>> = vec![Vec::new()];
                for choices in &arg_choices {
                    let mut next = Vec::new();
                    for partial in &stack {
                        for c in choices {
                            let mut p = partial.clone();
                            p.push(c.clone());
                            next.push(p);
                        }
                    }
                    stack = next;
                    if stack.len() > cap {
                        return Err(cap);
                    }
                }
                for args in stack {
                    out.push(Term::apps(h.clone(), args));
                    if out.len() > cap {
                        return Err(cap);
                    }
                }
            }
        }
        // abstractions
        if let Some((arg, ret)) = ty.split_fun() {
            let mut env2 = env.clone();
            env2.push(arg.clone());
            for body in enumerate(ret, depth - 1, &env2, sig, inventory, cap)? {
                out.push(Term::lam(arg.clone(), body));
                if out.len() > cap {
                    return Err(cap);
                }
            }
        }
    }
    Ok(out)
}

/// Available spine heads: parameters, the equality family over inventory
/// types, and bound variables from the environment.
fn heads(sig: &Signature, env: &[Type], inventory: &[Type]) -> Vec<(Term, Type)> {
    let mut out = Vec::new();
    for (name, ty) in sig.params() {
        out.push((Term::param(name, ty.clone()), ty.clone()));
    }
    for tau in inventory {
        out.push((Term::eq_const(tau.clone()), Type::eq_pred(tau)));
    }
    for (i, ty) in env.iter().rev().enumerate() {
        out.push((Term::Bound(i as u32), ty.clone()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_iota_params() -> Signature {
        Signature::blue()
            .with_param("a", Type::Iota)
            .with_param("b", Type::Iota)
    }

    #[test]
    fn depth_zero_iota_is_the_parameters() {
        let u = TermUniverse::generate(&two_iota_params(), 0).unwrap();
        let terms = u.terms_of(&Type::Iota).unwrap();
        assert_eq!(
            terms,
            &[
                Term::param("a", Type::Iota),
                Term::param("b", Type::Iota)
            ]
        );
        assert!(u.terms_of(&Type::O).unwrap().is_empty());
    }

    #[test]
    fn depth_one_booleans_include_the_four_equations() {
        let u = TermUniverse::generate(&two_iota_params(), 1).unwrap();
        let terms = u.terms_of(&Type::O).unwrap();
        let a = Term::param("a", Type::Iota);
        let b = Term::param("b", Type::Iota);
        for (l, r) in [(&a, &a), (&a, &b), (&b, &a), (&b, &b)] {
            let eq = Term::prim_eq(Type::Iota, l.clone(), r.clone());
            assert!(terms.contains(&eq), "missing {l:?} = {r:?}");
        }
    }

    #[test]
    fn deterministic_enumeration() {
        let u1 = TermUniverse::generate(&two_iota_params(), 1).unwrap();
        let u2 = TermUniverse::generate(&two_iota_params(), 1).unwrap();
        for ty in u1.types() {
            assert_eq!(u1.terms_of(ty).unwrap(), u2.terms_of(ty).unwrap());
        }
    }
}
