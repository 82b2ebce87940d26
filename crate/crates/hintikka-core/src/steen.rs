//! Executable checks for the acceptable-Hintikka properties (blue suite).
//!
//! Ten properties: consistency, βη-closure, equality reflexivity and
//! substitutivity, positive/negative Boolean extensionality, positive/
//! negative functional extensionality, mating and decomposition.
//!
//! Quantified hypotheses range over the attached bounded universe and are
//! reported `BoundedPass`, never silently `Pass`. Witness-searching
//! conclusions ("for some parameter w") scan the parameter pool in order.
//! The checker and the closure engine share the obligation generators in
//! this module, so an engine fixpoint passes the checker by construction.

use crate::connectives::{match_leibniz_eq, match_neg, match_neq, mk_neg_nf, mk_neq_nf};
use crate::normalize::normalize;
use crate::report::{sort_reports, PropertyReport, Status, Suite, Witness};
use crate::sets::SentenceSet;
use crate::signature::Flavor;
use crate::syntax::print_term;
use crate::term::{Const, Term};
use crate::ty::Type;
use crate::universe::UniverseError;

use std::collections::HashMap;

/// What a triggered property instance requires of the set.
#[derive(Clone, Debug)]
pub(crate) enum Demand {
    /// Every term must be a member.
    All(Vec<Term>),
    /// At least one group must be fully present.
    Branch(Vec<Vec<Term>>),
}

#[derive(Clone, Debug)]
pub(crate) struct Obligation {
    pub property: &'static str,
    pub premises: Vec<Term>,
    pub demand: Demand,
    /// True when the hypothesis or conclusion ranged over the universe.
    pub bounded: bool,
}

pub(crate) const STEEN_PROPERTIES: &[&str] = &[
    "nabla_b_minus",
    "nabla_b_plus",
    "nabla_betaeta",
    "nabla_c",
    "nabla_d",
    "nabla_eq_r",
    "nabla_eq_s",
    "nabla_f_minus",
    "nabla_f_plus",
    "nabla_m",
];

/// A member is atomic when its spine head is a parameter.
pub(crate) fn is_atomic(t: &Term) -> bool {
    let (head, _) = t.spine();
    matches!(head, Term::Const(Const::Param(..)))
}

/// Obligations of every membership-demanding property for the current
/// member snapshot. Prohibition properties (`nabla_c`, `nabla_eq_r`) are
/// separate; see [`violations`].
pub(crate) fn obligations(set: &SentenceSet) -> Result<Vec<Obligation>, UniverseError> {
    let members: Vec<&Term> = set.members().collect();
    let mut out = Vec::new();

    // index: equation lhs -> (rhs, type) over all equation members,
    // negation-shaped members included
    let mut eq_by_lhs: HashMap<&Term, Vec<(&Term, &Type, &Term)>> = HashMap::new();
    for m in &members {
        if let Some((l, r, tau)) = m.match_eq() {
            eq_by_lhs.entry(l).or_default().push((r, tau, m));
        }
    }

    for m in &members {
        // nabla_eq_s: rewriting any closed subterm occurrence
        for (pos, sub, _) in m.positions() {
            if !sub.is_locally_closed_at(0) {
                continue;
            }
            if let Some(entries) = eq_by_lhs.get(sub) {
                for (rhs, _, eq_member) in entries {
                    if sub == *rhs {
                        continue;
                    }
                    let rewritten = m
                        .replace_at(&pos, rhs)
                        .expect("position and type validated");
                    out.push(Obligation {
                        property: "nabla_eq_s",
                        premises: vec![(*m).clone(), (*eq_member).clone()],
                        demand: Demand::All(vec![normalize(&rewritten)]),
                        bounded: false,
                    });
                }
            }
        }

        if let Some((l, r, tau)) = m.match_eq() {
            if *tau == Type::O {
                // nabla_b_plus
                out.push(Obligation {
                    property: "nabla_b_plus",
                    premises: vec![(*m).clone()],
                    demand: Demand::Branch(vec![
                        vec![l.clone(), r.clone()],
                        vec![mk_neg_nf(l), mk_neg_nf(r)],
                    ]),
                    bounded: false,
                });
            }
            if let Some((arg_ty, ret_ty)) = tau.split_fun() {
                // nabla_f_plus, one obligation per universe argument
                for s in set.universe.terms_of(arg_ty)? {
                    let inst = Term::prim_eq(
                        ret_ty.clone(),
                        Term::app(l.clone(), s.clone()),
                        Term::app(r.clone(), s.clone()),
                    );
                    out.push(Obligation {
                        property: "nabla_f_plus",
                        premises: vec![(*m).clone()],
                        demand: Demand::All(vec![normalize(&inst)]),
                        bounded: true,
                    });
                }
            }
        }

        if let Some((l, r, tau)) = match_neq(m) {
            if *tau == Type::O {
                // nabla_b_minus
                out.push(Obligation {
                    property: "nabla_b_minus",
                    premises: vec![(*m).clone()],
                    demand: Demand::Branch(vec![
                        vec![l.clone(), mk_neg_nf(r)],
                        vec![mk_neg_nf(l), r.clone()],
                    ]),
                    bounded: false,
                });
            }
            if let Some((arg_ty, ret_ty)) = tau.split_fun() {
                // nabla_f_minus: some parameter w with f w != g w
                let branches: Vec<Vec<Term>> = set
                    .universe
                    .params_of(arg_ty)
                    .iter()
                    .map(|w| {
                        let wt = Term::param(w, arg_ty.clone());
                        vec![mk_neq_nf(
                            ret_ty.clone(),
                            &normalize(&Term::app(l.clone(), wt.clone())),
                            &normalize(&Term::app(r.clone(), wt)),
                        )]
                    })
                    .collect();
                out.push(Obligation {
                    property: "nabla_f_minus",
                    premises: vec![(*m).clone()],
                    demand: Demand::Branch(branches),
                    bounded: false,
                });
            }

            // nabla_d: decomposition under a shared parameter head
            let (lh, largs) = l.spine();
            let (rh, rargs) = r.spine();
            if !largs.is_empty()
                && largs.len() == rargs.len()
                && lh == rh
                && matches!(lh, Term::Const(Const::Param(..)))
            {
                let head_ty = match lh {
                    Term::Const(c) => c.ty(),
                    _ => unreachable!("parameter head"),
                };
                let arg_tys = head_ty.arg_types();
                let branches: Vec<Vec<Term>> = largs
                    .iter()
                    .zip(rargs.iter())
                    .zip(arg_tys.iter())
                    .map(|((si, ti), at)| vec![mk_neq_nf((*at).clone(), si, ti)])
                    .collect();
                out.push(Obligation {
                    property: "nabla_d",
                    premises: vec![(*m).clone()],
                    demand: Demand::Branch(branches),
                    bounded: false,
                });
            }
        }
    }

    // nabla_m: atomic s with s in H, atomic t with ~t in H
    let pos_atoms: Vec<&Term> = members.iter().copied().filter(|m| is_atomic(m)).collect();
    let neg_atoms: Vec<(&Term, &Term)> = members
        .iter()
        .filter_map(|m| match_neg(m).map(|inner| (inner, *m)))
        .filter(|(inner, _)| is_atomic(inner))
        .collect();
    for s in &pos_atoms {
        for (t, neg_member) in &neg_atoms {
            out.push(Obligation {
                property: "nabla_m",
                premises: vec![(*s).clone(), (*neg_member).clone()],
                demand: Demand::All(vec![mk_neq_nf(Type::O, s, t)]),
                bounded: false,
            });
        }
    }

    Ok(out)
}

/// Violations of the prohibition properties `nabla_c` and `nabla_eq_r`.
pub(crate) fn violations(set: &SentenceSet) -> Vec<(&'static str, Witness)> {
    let flavor = set.signature.flavor;
    let mut out = Vec::new();
    for m in set.members() {
        let neg = mk_neg_nf(m);
        if set.contains_nf(&neg) {
            out.push((
                "nabla_c",
                Witness {
                    premises: vec![print_term(m, flavor), print_term(&neg, flavor)],
                    missing: "s and ~s are both members".to_string(),
                },
            ));
        }
        if let Some((l, r, _)) = match_neq(m) {
            if l == r {
                out.push((
                    "nabla_eq_r",
                    Witness {
                        premises: vec![print_term(m, flavor)],
                        missing: "a negated reflexive equation is a member".to_string(),
                    },
                ));
            }
        }
    }
    out
}

/// Runs the full blue property suite.
pub fn check_steen(set: &SentenceSet) -> Result<Vec<PropertyReport>, UniverseError> {
    let flavor = set.signature.flavor;
    let mut failures: HashMap<&'static str, Vec<Witness>> = HashMap::new();
    let mut bounded: HashMap<&'static str, bool> = HashMap::new();

    for ob in obligations(set)? {
        if ob.bounded {
            bounded.insert(ob.property, true);
        }
        if !demand_met(set, &ob.demand) {
            failures
                .entry(ob.property)
                .or_default()
                .push(witness_for(set, &ob, flavor));
        }
    }
    for (prop, w) in violations(set) {
        failures.entry(prop).or_default().push(w);
    }

    let mut reports = Vec::new();
    for prop in STEEN_PROPERTIES {
        let mut r = if let Some(ws) = failures.remove(prop) {
            PropertyReport::fail(prop, Suite::Steen, ws)
        } else if bounded.get(prop).copied().unwrap_or(false) {
            PropertyReport::pass(prop, Suite::Steen).with_status(Status::BoundedPass)
        } else {
            PropertyReport::pass(prop, Suite::Steen)
        };
        if *prop == "nabla_betaeta" {
            r = r.with_note("holds by construction: members are stored in βη-normal form");
        }
        reports.push(r);
    }
    Ok(sort_reports(reports))
}

pub(crate) fn demand_met(set: &SentenceSet, demand: &Demand) -> bool {
    match demand {
        Demand::All(ts) => ts.iter().all(|t| set.contains_nf(t)),
        Demand::Branch(branches) => branches
            .iter()
            .any(|group| group.iter().all(|t| set.contains_nf(t))),
    }
}

fn witness_for(set: &SentenceSet, ob: &Obligation, flavor: Flavor) -> Witness {
    let premises = ob.premises.iter().map(|t| print_term(t, flavor)).collect();
    let missing = match &ob.demand {
        Demand::All(ts) => {
            let missing: Vec<String> = ts
                .iter()
                .filter(|t| !set.contains_nf(t))
                .map(|t| print_term(t, flavor))
                .collect();
            format!("missing: {}", missing.join(" ; "))
        }
        Demand::Branch(branches) => {
            if branches.is_empty() {
                "no candidate parameter or component to satisfy the conclusion".to_string()
            } else {
                let alts: Vec<String> = branches
                    .iter()
                    .map(|group| {
                        group
                            .iter()
                            .map(|t| print_term(t, flavor))
                            .collect::<Vec<_>>()
                            .join(" , ")
                    })
                    .collect();
                format!("none of the alternatives holds: {{{}}}", alts.join("} / {"))
            }
        }
    };
    Witness { premises, missing }
}

/// Bounded saturation: every Boolean universe term or its negation is a
/// member.
pub fn check_saturated(set: &SentenceSet) -> Result<PropertyReport, UniverseError> {
    let flavor = set.signature.flavor;
    let terms = set.universe.terms_of(&Type::O)?;
    if terms.is_empty() {
        return Ok(PropertyReport::pass("saturated", Suite::Steen)
            .with_status(Status::VacuousPass)
            .with_note("Boolean universe is empty"));
    }
    let mut witnesses = Vec::new();
    for s in terms {
        if !set.contains_nf(s) && !set.contains_nf(&mk_neg_nf(s)) {
            witnesses.push(Witness {
                premises: vec![],
                missing: format!("undecided: {}", print_term(s, flavor)),
            });
        }
    }
    if witnesses.is_empty() {
        Ok(PropertyReport::pass("saturated", Suite::Steen).with_status(Status::BoundedPass))
    } else {
        Ok(PropertyReport::fail("saturated", Suite::Steen, witnesses))
    }
}

/// Leibniz-freeness: no member is a Leibniz equation.
pub fn check_leibniz_free(set: &SentenceSet) -> PropertyReport {
    let flavor = set.signature.flavor;
    let mut witnesses = Vec::new();
    for m in set.members() {
        if match_leibniz_eq(m).is_some() {
            witnesses.push(Witness {
                premises: vec![print_term(m, flavor)],
                missing: "a Leibniz equation is a member".to_string(),
            });
        }
    }
    if witnesses.is_empty() {
        PropertyReport::pass("leibniz_free", Suite::Steen)
    } else {
        PropertyReport::fail("leibniz_free", Suite::Steen, witnesses)
    }
}
