//! The translation pipeline: connective replacement into the red signature,
//! the sharp lift to external propositions, the inductive closure of the
//! translated set, and the end-to-end reduction verifier.

use std::sync::Arc;

use thiserror::Error;

use crate::brown::check_brown;
use crate::connectives::{expand_connective, match_neg, Connective};
use crate::normalize::normalize;
use crate::prop::Prop;
use crate::report::{all_pass, reports_to_json, PropertyReport, Status};
use crate::sets::{PropSet, SentenceSet};
use crate::signature::Flavor;
use crate::steen::check_steen;
use crate::syntax::print_prop;
use crate::term::{Const, Term};
use crate::ty::Type;
use crate::universe::UniverseError;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("term is not closed")]
    NotClosed,
    #[error("term is not Boolean, has type {0}")]
    NotBoolean(Type),
    #[error("sharp requires a βη-normal term")]
    NotNormal,
    #[error("ill-typed input: {0}")]
    IllTyped(String),
    #[error(transparent)]
    Universe(#[from] UniverseError),
}

/// Replaces the defined blue negation by the primitive red negation, at all
/// positions, and carries everything else over homomorphically.
///
/// Members are stored with macros expanded, so a blue negation occurs as the
/// definitional shape `t =^o ⊥` and the bare connective as `λP. P =^o ⊥`;
/// both are mapped. Equality constants are primitive on both sides and stay
/// untouched. The result of a βη-normal input is βη-normal.
pub fn blue_to_red(s: &Term) -> Result<Term, ReductionError> {
    let ty = s.typecheck().map_err(|e| ReductionError::IllTyped(e.to_string()))?;
    if ty != Type::O {
        return Err(ReductionError::NotBoolean(ty));
    }
    if !s.is_closed() {
        return Err(ReductionError::NotClosed);
    }
    Ok(translate(s))
}

fn translate(t: &Term) -> Term {
    // bare defined negation
    if *t == expand_connective(&Connective::Neg) {
        return Term::Const(Const::Neg);
    }
    // applied defined negation
    if let Some(inner) = match_neg(t) {
        return Term::app(Term::Const(Const::Neg), translate(inner));
    }
    match t {
        Term::Const(_) | Term::Bound(_) | Term::Free(..) => t.clone(),
        Term::Lam(ty, b) => Term::Lam(ty.clone(), Arc::new(translate(b))),
        Term::App(f, a) => Term::App(Arc::new(translate(f)), Arc::new(translate(a))),
    }
}

/// The sharp operator: replaces the primitive connective at head position by
/// its external equivalent, one level only.
///
/// `(¬ s)^♯` is the meta-negation of the embedded `s`, `(l =^τ r)^♯` is the
/// meta-equation, and a parameter-headed term maps to itself.
pub fn sharp(s: &Term) -> Result<Prop, ReductionError> {
    let ty = s.typecheck().map_err(|e| ReductionError::IllTyped(e.to_string()))?;
    if ty != Type::O {
        return Err(ReductionError::NotBoolean(ty));
    }
    if normalize(s) != *s {
        return Err(ReductionError::NotNormal);
    }
    if let Some((l, r, tau)) = s.match_eq() {
        return Ok(Prop::MetaEq(l.clone(), r.clone(), tau.clone()));
    }
    if let Term::App(f, a) = s {
        if matches!(f.as_ref(), Term::Const(Const::Neg)) {
            return Ok(Prop::meta_neg(Prop::Embed(a.as_ref().clone())));
        }
    }
    Ok(Prop::Embed(s.clone()))
}

/// Sharp on propositions: embedded terms lift through [`sharp`], everything
/// already meta-level is fixed.
pub fn prop_sharp(p: &Prop) -> Prop {
    match p {
        Prop::Embed(t) => sharp(t).unwrap_or_else(|_| p.clone()),
        _ => p.clone(),
    }
}

/// The translated closure: smallest set of external propositions containing
/// the red image of every member (clause 1), its sharp lift (clause 2), and
/// closed under sharping directly below a meta-negation (clause 3).
pub fn sharp_closure(set: &SentenceSet) -> Result<PropSet, ReductionError> {
    let red_sig = set.signature.with_flavor(Flavor::RedNegAndEquality);
    let red_universe = set
        .universe
        .map_terms(|t| translate(t));
    let mut out = PropSet::new(red_sig, red_universe);

    for s in set.members() {
        let red = blue_to_red(s)?;
        out.insert(&Prop::Embed(red.clone()));
        out.insert(&sharp(&red)?);
    }

    // clause (3): fixpoint; each pass can only add sharp lifts under
    // meta-negations, which are idempotent, so two passes suffice
    loop {
        let mut additions = Vec::new();
        for m in out.members() {
            if let Prop::MetaNeg(inner) = m {
                if let Prop::Embed(t) = inner.as_ref() {
                    let lifted = Prop::meta_neg(prop_sharp(&Prop::Embed(t.clone())));
                    if !out.contains(&lifted) {
                        additions.push(lifted);
                    }
                }
            }
        }
        if additions.is_empty() {
            break;
        }
        for a in additions {
            out.insert(&a);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    ReductionConfirmed,
    SteenFailed,
    Counterexample,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::ReductionConfirmed => "reduction-confirmed",
            Verdict::SteenFailed => "steen-failed",
            Verdict::Counterexample => "counterexample",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ReductionReport {
    pub steen: Vec<PropertyReport>,
    pub brown: Vec<PropertyReport>,
    pub verdict: Verdict,
    pub translated: Vec<String>,
    /// For a counterexample verdict: whether every failing red property
    /// depended on a bounded quantifier, which points at a universe artifact
    /// rather than a genuine refutation.
    pub bounded_artifact: bool,
}

/// Checks the blue suite; if it passes, translates and checks the red suite.
/// A red failure after a blue pass contradicts the reduction theorem, so it
/// is flagged as a counterexample (an implementation bug or a bounded
/// universe artifact).
pub fn verify_reduction(set: &SentenceSet) -> Result<ReductionReport, ReductionError> {
    let steen = check_steen(set)?;
    if !all_pass(&steen) {
        return Ok(ReductionReport {
            steen,
            brown: Vec::new(),
            verdict: Verdict::SteenFailed,
            translated: Vec::new(),
            bounded_artifact: false,
        });
    }
    let translated_set = sharp_closure(set)?;
    let flavor = translated_set.signature.flavor;
    let translated: Vec<String> = translated_set
        .members()
        .map(|p| print_prop(p, flavor))
        .collect();
    let brown = check_brown(&translated_set)?;
    let verdict = if all_pass(&brown) {
        Verdict::ReductionConfirmed
    } else {
        Verdict::Counterexample
    };
    let bounded_artifact = verdict == Verdict::Counterexample
        && brown
            .iter()
            .filter(|r| r.status.is_fail())
            .all(|r| r.status == Status::Fail && is_bounded_property(&r.property));
    Ok(ReductionReport {
        steen,
        brown,
        verdict,
        translated,
        bounded_artifact,
    })
}

fn is_bounded_property(name: &str) -> bool {
    matches!(name, "nabla_forall" | "nabla_eq_fun")
}

impl ReductionReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "steen": reports_to_json(&self.steen),
            "brown": reports_to_json(&self.brown),
            "verdict": self.verdict.as_str(),
            "translated": self.translated,
            "bounded_artifact": self.bounded_artifact,
        })
    }
}
