//! Bounded term-model extraction and evaluation.
//!
//! From a saturated, consistency-checked sentence set this builds a
//! desk-scale model: individuals are equivalence classes of the universe's
//! iota-terms under the set's positive equations, the Boolean domain is
//! bivalent, and parameter-headed atoms read their truth value off set
//! membership. Equations evaluate by denotation identity; function-type
//! denotations are not reified, equality at function types is evaluated
//! pointwise over the universe's argument terms.

use std::collections::BTreeMap;

use petgraph::unionfind::UnionFind;
use thiserror::Error;

use crate::connectives::match_neg;
use crate::normalize::normalize;
use crate::report::{PropertyReport, Status, Suite, Witness};
use crate::sets::SentenceSet;
use crate::steen::check_saturated;
use crate::syntax::print_term;
use crate::term::{Const, Term};
use crate::ty::Type;
use crate::universe::{TermUniverse, UniverseError};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("set is not saturated over its universe")]
    NotSaturated,
    #[error("set is contradictory: {0} and its negation are both members")]
    Contradictory(String),
    #[error("needed instance is outside the universe: {0}")]
    OutOfUniverse(String),
    #[error(transparent)]
    Universe(#[from] UniverseError),
}

#[derive(Clone, Debug)]
pub struct BoundedModel {
    pub universe: TermUniverse,
    flavor: crate::signature::Flavor,
    /// Truth values for Boolean universe terms and member atoms (keys are
    /// βη-normal).
    valuation: BTreeMap<Term, bool>,
    /// Universe iota-terms in enumeration order.
    iota_terms: Vec<Term>,
    /// Union-find over `iota_terms` indices.
    iota_uf: UnionFind<usize>,
}

impl BoundedModel {
    /// Reads a model off a saturated set: a Boolean universe term is true
    /// iff it is a member, false iff its negation is; iota-individuals are
    /// the universe terms modulo the set's positive equations.
    pub fn extract(set: &SentenceSet) -> Result<BoundedModel, ModelError> {
        let saturation = check_saturated(set)?;
        if saturation.status.is_fail() {
            return Err(ModelError::NotSaturated);
        }

        let iota_terms: Vec<Term> = set.universe.terms_of(&Type::Iota)?.to_vec();
        let mut iota_uf = UnionFind::new(iota_terms.len());
        let index: BTreeMap<&Term, usize> =
            iota_terms.iter().enumerate().map(|(i, t)| (t, i)).collect();
        for m in set.members() {
            if match_neg(m).is_some() {
                continue;
            }
            if let Some((l, r, tau)) = m.match_eq() {
                if *tau == Type::Iota {
                    if let (Some(&li), Some(&ri)) = (index.get(l), index.get(r)) {
                        iota_uf.union(li, ri);
                    }
                }
            }
        }

        let mut valuation: BTreeMap<Term, bool> = BTreeMap::new();
        let flavor = set.signature.flavor;
        let mut assign = |t: &Term, v: bool| -> Result<(), ModelError> {
            if let Some(prev) = valuation.insert(t.clone(), v) {
                if prev != v {
                    return Err(ModelError::Contradictory(print_term(t, flavor)));
                }
            }
            Ok(())
        };
        for s in set.universe.terms_of(&Type::O)? {
            let pos = set.contains_nf(s);
            let neg = set.contains_nf(&crate::connectives::mk_neg_nf(s));
            match (pos, neg) {
                (true, true) => {
                    return Err(ModelError::Contradictory(print_term(s, flavor)));
                }
                (true, false) => assign(s, true)?,
                (false, true) => assign(s, false)?,
                (false, false) => unreachable!("saturation checked above"),
            }
        }
        // member atoms beyond the universe keep the valuation total on
        // everything check_models will look up
        for m in set.members() {
            if is_param_atom(m) {
                assign(m, true)?;
            } else if let Some(inner) = match_neg(m) {
                if is_param_atom(inner) {
                    assign(inner, false)?;
                }
            }
        }

        Ok(BoundedModel {
            universe: set.universe.clone(),
            flavor,
            valuation,
            iota_terms,
            iota_uf,
        })
    }

    /// Compositional truth-value of a closed Boolean term.
    pub fn evaluate(&self, t: &Term) -> Result<bool, ModelError> {
        let n = normalize(t);
        self.eval_nf(&n)
    }

    fn eval_nf(&self, t: &Term) -> Result<bool, ModelError> {
        if let Some((l, r, tau)) = t.match_eq() {
            return self.den_equal(l, r, tau);
        }
        if is_param_atom(t) {
            return self
                .valuation
                .get(t)
                .copied()
                .ok_or_else(|| ModelError::OutOfUniverse(print_term(t, self.flavor)));
        }
        Err(ModelError::OutOfUniverse(print_term(t, self.flavor)))
    }

    fn iota_class(&self, t: &Term) -> Result<usize, ModelError> {
        let idx = self
            .iota_terms
            .iter()
            .position(|u| u == t)
            .ok_or_else(|| ModelError::OutOfUniverse(print_term(t, self.flavor)))?;
        Ok(self.iota_uf.find(idx))
    }

    /// Denotation identity, pointwise over universe arguments at function
    /// types.
    pub fn den_equal(&self, l: &Term, r: &Term, tau: &Type) -> Result<bool, ModelError> {
        match tau {
            Type::O => Ok(self.eval_nf(&normalize(l))? == self.eval_nf(&normalize(r))?),
            Type::Iota => Ok(self.iota_class(&normalize(l))? == self.iota_class(&normalize(r))?),
            Type::Fun(..) => {
                let (arg_ty, ret_ty) = tau.split_fun().expect("function type");
                for u in self.universe.terms_of(arg_ty)? {
                    let lu = normalize(&Term::app(l.clone(), u.clone()));
                    let ru = normalize(&Term::app(r.clone(), u.clone()));
                    if !self.den_equal(&lu, &ru, ret_ty)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }

    /// True when every Boolean universe term has a truth value.
    pub fn bivalent_over_boolean_universe(&self) -> Result<bool, ModelError> {
        for s in self.universe.terms_of(&Type::O)? {
            if !self.valuation.contains_key(s) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn valuation(&self) -> impl Iterator<Item = (&Term, bool)> {
        self.valuation.iter().map(|(t, v)| (t, *v))
    }

    /// Iota classes as groups of universe terms, deterministic order.
    pub fn iota_classes(&self) -> Vec<Vec<Term>> {
        let mut by_root: BTreeMap<usize, Vec<Term>> = BTreeMap::new();
        for (i, t) in self.iota_terms.iter().enumerate() {
            by_root.entry(self.iota_uf.find(i)).or_default().push(t.clone());
        }
        by_root.into_values().collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let classes: Vec<Vec<String>> = self
            .iota_classes()
            .into_iter()
            .map(|class| {
                class
                    .iter()
                    .map(|t| print_term(t, self.flavor))
                    .collect()
            })
            .collect();
        let mut valuation = serde_json::Map::new();
        for (t, v) in &self.valuation {
            valuation.insert(
                print_term(t, self.flavor),
                serde_json::Value::String(if *v { "T" } else { "F" }.to_string()),
            );
        }
        serde_json::json!({
            "iotaClasses": classes,
            "valuation": valuation,
        })
    }
}

fn is_param_atom(t: &Term) -> bool {
    let (head, _) = t.spine();
    matches!(head, Term::Const(Const::Param(..)))
}

/// Does the model satisfy every member of the set?
///
/// Out-of-universe instances downgrade the verdict to a bounded pass with a
/// gap note instead of failing.
pub fn check_models(model: &BoundedModel, set: &SentenceSet) -> PropertyReport {
    let flavor = set.signature.flavor;
    let mut witnesses = Vec::new();
    let mut gaps = 0usize;
    for m in set.members() {
        match model.evaluate(m) {
            Ok(true) => {}
            Ok(false) => witnesses.push(Witness {
                premises: vec![print_term(m, flavor)],
                missing: "member evaluates to F".to_string(),
            }),
            Err(ModelError::OutOfUniverse(t)) => {
                gaps += 1;
                let _ = t;
            }
            Err(e) => witnesses.push(Witness {
                premises: vec![print_term(m, flavor)],
                missing: format!("evaluation error: {e}"),
            }),
        }
    }
    if !witnesses.is_empty() {
        PropertyReport::fail("models_set", Suite::Derived, witnesses)
    } else if gaps > 0 {
        PropertyReport::pass("models_set", Suite::Derived)
            .with_status(Status::BoundedPass)
            .with_note(&format!("{gaps} member(s) outside the evaluable universe"))
    } else {
        PropertyReport::pass("models_set", Suite::Derived)
    }
}
