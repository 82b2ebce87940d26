//! Executable checks for the extensional-Hintikka properties over external
//! propositions (red suite).
//!
//! All seventeen properties of the definition are implemented. The meta
//! connective eliminations (`nabla_or`, `nabla_and`, `nabla_forall`,
//! `nabla_exists`) are vacuous for sets produced by the translation, which
//! never emits a meta disjunction or quantifier; they fire on hand-written
//! prop files. Decomposition-style hypotheses (`nabla_m`, `nabla_dec`)
//! require at least one applied argument; the zero-argument degenerate case
//! is the business of `nabla_c`.

use std::collections::HashMap;

use crate::prop::Prop;
use crate::report::{sort_reports, PropertyReport, Status, Suite, Witness};
use crate::sets::PropSet;
use crate::signature::Flavor;
use crate::syntax::print_prop;
use crate::term::{Const, Term};
use crate::ty::Type;
use crate::universe::UniverseError;

use crate::normalize::normalize;
use crate::reduction::prop_sharp;

#[derive(Clone, Debug)]
pub(crate) enum PDemand {
    All(Vec<Prop>),
    Branch(Vec<Vec<Prop>>),
}

#[derive(Clone, Debug)]
pub(crate) struct PObligation {
    pub property: &'static str,
    pub premises: Vec<Prop>,
    pub demand: PDemand,
    pub bounded: bool,
}

pub(crate) const BROWN_PROPERTIES: &[&str] = &[
    "nabla_and",
    "nabla_b",
    "nabla_betaeta",
    "nabla_bot",
    "nabla_c",
    "nabla_dec",
    "nabla_eq_fun",
    "nabla_eq_o",
    "nabla_eq_r",
    "nabla_eq_u",
    "nabla_exists",
    "nabla_f",
    "nabla_forall",
    "nabla_m",
    "nabla_neg",
    "nabla_or",
    "nabla_sharp",
];

fn embed(t: &Term) -> Prop {
    Prop::Embed(t.clone())
}

fn neg_embed(t: &Term) -> Prop {
    Prop::meta_neg(embed(t))
}

fn meta_eq(l: &Term, r: &Term, ty: &Type) -> Prop {
    Prop::MetaEq(l.clone(), r.clone(), ty.clone())
}

fn neg_meta_eq(l: &Term, r: &Term, ty: &Type) -> Prop {
    Prop::meta_neg(meta_eq(l, r, ty))
}

/// Parameter-headed spine with at least one argument.
fn param_spine(t: &Term) -> Option<(&Term, Vec<&Term>, Vec<Type>)> {
    let (head, args) = t.spine();
    if args.is_empty() {
        return None;
    }
    if let Term::Const(c @ Const::Param(..)) = head {
        let arg_tys: Vec<Type> = c.ty().arg_types().into_iter().cloned().collect();
        Some((head, args, arg_tys))
    } else {
        None
    }
}

pub(crate) fn obligations(set: &PropSet) -> Result<Vec<PObligation>, UniverseError> {
    let members: Vec<&Prop> = set.members().collect();
    let mut out = Vec::new();

    // positive meta-equations at iota and negated meta-equations at iota,
    // collected for the nabla_eq_u cross product
    let mut pos_eq_iota: Vec<(&Term, &Term, &Prop)> = Vec::new();
    let mut neg_eq_iota: Vec<(&Term, &Term, &Prop)> = Vec::new();

    for m in &members {
        match m {
            Prop::MetaOr(l, r) => {
                out.push(PObligation {
                    property: "nabla_or",
                    premises: vec![(*m).clone()],
                    demand: PDemand::Branch(vec![
                        vec![l.as_ref().clone()],
                        vec![r.as_ref().clone()],
                    ]),
                    bounded: false,
                });
            }
            Prop::MetaForall(ty, body) => {
                for t in set.universe.terms_of(ty)? {
                    out.push(PObligation {
                        property: "nabla_forall",
                        premises: vec![(*m).clone()],
                        demand: PDemand::All(vec![body.instantiate(0, t)]),
                        bounded: true,
                    });
                }
            }
            Prop::MetaEq(l, r, ty) => {
                if *ty == Type::O {
                    out.push(PObligation {
                        property: "nabla_eq_o",
                        premises: vec![(*m).clone()],
                        demand: PDemand::Branch(vec![
                            vec![embed(l), embed(r)],
                            vec![neg_embed(l), neg_embed(r)],
                        ]),
                        bounded: false,
                    });
                }
                if let Some((arg_ty, ret_ty)) = ty.split_fun() {
                    for u in set.universe.terms_of(arg_ty)? {
                        let lu = normalize(&Term::app(l.clone(), u.clone()));
                        let ru = normalize(&Term::app(r.clone(), u.clone()));
                        out.push(PObligation {
                            property: "nabla_eq_fun",
                            premises: vec![(*m).clone()],
                            demand: PDemand::All(vec![meta_eq(&lu, &ru, ret_ty)]),
                            bounded: true,
                        });
                    }
                }
                if *ty == Type::Iota {
                    pos_eq_iota.push((l, r, m));
                }
            }
            Prop::MetaNeg(inner) => match inner.as_ref() {
                Prop::MetaNeg(s) => {
                    out.push(PObligation {
                        property: "nabla_neg",
                        premises: vec![(*m).clone()],
                        demand: PDemand::All(vec![s.as_ref().clone()]),
                        bounded: false,
                    });
                }
                Prop::MetaOr(l, r) => {
                    out.push(PObligation {
                        property: "nabla_and",
                        premises: vec![(*m).clone()],
                        demand: PDemand::All(vec![
                            Prop::meta_neg(l.as_ref().clone()),
                            Prop::meta_neg(r.as_ref().clone()),
                        ]),
                        bounded: false,
                    });
                }
                Prop::MetaForall(ty, body) => {
                    let branches: Vec<Vec<Prop>> = set
                        .universe
                        .params_of(ty)
                        .iter()
                        .map(|p| {
                            let pt = Term::param(p, ty.clone());
                            vec![Prop::meta_neg(body.instantiate(0, &pt))]
                        })
                        .collect();
                    out.push(PObligation {
                        property: "nabla_exists",
                        premises: vec![(*m).clone()],
                        demand: PDemand::Branch(branches),
                        bounded: false,
                    });
                }
                Prop::MetaEq(l, r, ty) => {
                    if *ty == Type::O {
                        out.push(PObligation {
                            property: "nabla_b",
                            premises: vec![(*m).clone()],
                            demand: PDemand::Branch(vec![
                                vec![embed(l), neg_embed(r)],
                                vec![neg_embed(l), embed(r)],
                            ]),
                            bounded: false,
                        });
                    }
                    if let Some((arg_ty, ret_ty)) = ty.split_fun() {
                        let branches: Vec<Vec<Prop>> = set
                            .universe
                            .params_of(arg_ty)
                            .iter()
                            .map(|p| {
                                let pt = Term::param(p, arg_ty.clone());
                                let lp = normalize(&Term::app(l.clone(), pt.clone()));
                                let rp = normalize(&Term::app(r.clone(), pt));
                                vec![neg_meta_eq(&lp, &rp, ret_ty)]
                            })
                            .collect();
                        out.push(PObligation {
                            property: "nabla_f",
                            premises: vec![(*m).clone()],
                            demand: PDemand::Branch(branches),
                            bounded: false,
                        });
                    }
                    if *ty == Type::Iota {
                        neg_eq_iota.push((l, r, m));
                        // nabla_dec
                        if let (Some((lh, largs, arg_tys)), Some((rh, rargs, _))) =
                            (param_spine(l), param_spine(r))
                        {
                            if lh == rh && largs.len() == rargs.len() {
                                let branches: Vec<Vec<Prop>> = largs
                                    .iter()
                                    .zip(rargs.iter())
                                    .zip(arg_tys.iter())
                                    .map(|((si, ti), at)| vec![neg_meta_eq(si, ti, at)])
                                    .collect();
                                out.push(PObligation {
                                    property: "nabla_dec",
                                    premises: vec![(*m).clone()],
                                    demand: PDemand::Branch(branches),
                                    bounded: false,
                                });
                            }
                        }
                    }
                }
                _ => {}
            },
            _ => {}
        }

        // nabla_sharp: s in H => s# in H; ~s in H => ~(s#) in H
        match m {
            Prop::MetaNeg(inner) => {
                let sharped = prop_sharp(inner);
                if sharped != *inner.as_ref() {
                    out.push(PObligation {
                        property: "nabla_sharp",
                        premises: vec![(*m).clone()],
                        demand: PDemand::All(vec![Prop::meta_neg(sharped)]),
                        bounded: false,
                    });
                }
            }
            other => {
                let sharped = prop_sharp(other);
                if sharped != **other {
                    out.push(PObligation {
                        property: "nabla_sharp",
                        premises: vec![(*m).clone()],
                        demand: PDemand::All(vec![sharped]),
                        bounded: false,
                    });
                }
            }
        }
    }

    // nabla_m: ~(h s̄) and (h t̄) with the same parameter head
    let pos_embed: Vec<&Term> = members
        .iter()
        .filter_map(|m| match m {
            Prop::Embed(t) => Some(t),
            _ => None,
        })
        .collect();
    let neg_embed_terms: Vec<(&Term, &Prop)> = members
        .iter()
        .filter_map(|m| match m {
            Prop::MetaNeg(inner) => match inner.as_ref() {
                Prop::Embed(t) => Some((t, *m)),
                _ => None,
            },
            _ => None,
        })
        .collect();
    for (nt, nm) in &neg_embed_terms {
        for pt in &pos_embed {
            if let (Some((nh, nargs, arg_tys)), Some((ph, pargs, _))) =
                (param_spine(nt), param_spine(pt))
            {
                if nh == ph && nargs.len() == pargs.len() {
                    let branches: Vec<Vec<Prop>> = nargs
                        .iter()
                        .zip(pargs.iter())
                        .zip(arg_tys.iter())
                        .map(|((si, ti), at)| vec![neg_meta_eq(si, ti, at)])
                        .collect();
                    out.push(PObligation {
                        property: "nabla_m",
                        premises: vec![(*nm).clone(), embed(pt)],
                        demand: PDemand::Branch(branches),
                        bounded: false,
                    });
                }
            }
        }
    }

    // nabla_eq_u: positive and negative iota meta-equations interact
    for (s, t, pm) in &pos_eq_iota {
        for (u, v, nm) in &neg_eq_iota {
            out.push(PObligation {
                property: "nabla_eq_u",
                premises: vec![(*pm).clone(), (*nm).clone()],
                demand: PDemand::Branch(vec![
                    vec![neg_meta_eq(s, u, &Type::Iota)],
                    vec![neg_meta_eq(t, v, &Type::Iota)],
                ]),
                bounded: false,
            });
            out.push(PObligation {
                property: "nabla_eq_u",
                premises: vec![(*pm).clone(), (*nm).clone()],
                demand: PDemand::Branch(vec![
                    vec![neg_meta_eq(s, v, &Type::Iota)],
                    vec![neg_meta_eq(t, u, &Type::Iota)],
                ]),
                bounded: false,
            });
        }
    }

    Ok(out)
}

/// Prohibition properties: `nabla_c`, `nabla_bot`, `nabla_eq_r`.
pub(crate) fn violations(set: &PropSet) -> Vec<(&'static str, Witness)> {
    let flavor = set.signature.flavor;
    let mut out = Vec::new();
    for m in set.members() {
        if set.contains(&Prop::meta_neg(m.clone())) {
            out.push((
                "nabla_c",
                Witness {
                    premises: vec![
                        print_prop(m, flavor),
                        print_prop(&Prop::meta_neg(m.clone()), flavor),
                    ],
                    missing: "s and !~s are both members".to_string(),
                },
            ));
        }
        if let Prop::MetaNeg(inner) = m {
            match inner.as_ref() {
                Prop::MetaTop => out.push((
                    "nabla_bot",
                    Witness {
                        premises: vec![print_prop(m, flavor)],
                        missing: "!~ !T is a member".to_string(),
                    },
                )),
                Prop::MetaEq(l, r, ty) if *ty == Type::Iota && l == r => out.push((
                    "nabla_eq_r",
                    Witness {
                        premises: vec![print_prop(m, flavor)],
                        missing: "a negated reflexive meta-equation is a member".to_string(),
                    },
                )),
                _ => {}
            }
        }
    }
    out
}

pub(crate) fn demand_met(set: &PropSet, demand: &PDemand) -> bool {
    match demand {
        PDemand::All(ps) => ps.iter().all(|p| set.contains(p)),
        PDemand::Branch(branches) => branches
            .iter()
            .any(|group| group.iter().all(|p| set.contains(p))),
    }
}

fn witness_for(set: &PropSet, ob: &PObligation, flavor: Flavor) -> Witness {
    let premises = ob.premises.iter().map(|p| print_prop(p, flavor)).collect();
    let missing = match &ob.demand {
        PDemand::All(ps) => {
            let missing: Vec<String> = ps
                .iter()
                .filter(|p| !set.contains(p))
                .map(|p| print_prop(p, flavor))
                .collect();
            format!("missing: {}", missing.join(" ; "))
        }
        PDemand::Branch(branches) => {
            if branches.is_empty() {
                "no candidate parameter or component to satisfy the conclusion".to_string()
            } else {
                let alts: Vec<String> = branches
                    .iter()
                    .map(|group| {
                        group
                            .iter()
                            .map(|p| print_prop(p, flavor))
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

/// Runs the full red property suite.
pub fn check_brown(set: &PropSet) -> Result<Vec<PropertyReport>, UniverseError> {
    let flavor = set.signature.flavor;
    let mut failures: HashMap<&'static str, Vec<Witness>> = HashMap::new();
    let mut bounded: HashMap<&'static str, bool> = HashMap::new();
    let mut triggered: HashMap<&'static str, bool> = HashMap::new();

    for ob in obligations(set)? {
        triggered.insert(ob.property, true);
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
        triggered.insert(prop, true);
        failures.entry(prop).or_default().push(w);
    }

    let mut reports = Vec::new();
    for prop in BROWN_PROPERTIES {
        let always_checked = matches!(*prop, "nabla_c" | "nabla_bot" | "nabla_eq_r");
        let mut r = if let Some(ws) = failures.remove(prop) {
            PropertyReport::fail(prop, Suite::Brown, ws)
        } else if bounded.get(prop).copied().unwrap_or(false) {
            PropertyReport::pass(prop, Suite::Brown).with_status(Status::BoundedPass)
        } else if triggered.get(prop).copied().unwrap_or(false) || always_checked {
            PropertyReport::pass(prop, Suite::Brown)
        } else {
            PropertyReport::pass(prop, Suite::Brown).with_status(Status::VacuousPass)
        };
        if *prop == "nabla_betaeta" {
            r = r.with_note("holds by construction: embedded terms are stored in βη-normal form");
        }
        reports.push(r);
    }
    Ok(sort_reports(reports))
}
