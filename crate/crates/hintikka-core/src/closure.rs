//! Forward closure: builds bounded acceptable Hintikka sets from seeds.
//!
//! Two regimes. Seeds consisting solely of positive equations whose equated
//! types end in `ι` close by congruence: the engine maintains equivalence
//! classes of the mentioned terms, closes them under subterm rewriting and
//! functional instances, and emits every in-class pair as a member. Such
//! sets stay unsaturated and Leibniz-free.
//!
//! Any other seed shape forces eventual saturation (a negation or Boolean
//! structure is present), so the engine first builds a concrete valuation
//! that satisfies the seeds, then saturates the Boolean universe and closes
//! under the property obligations, inserting only members that are true in
//! the valuation. Since every blue closure rule is sound for the valuation,
//! a branch choice that is true always exists, and the fixpoint passes the
//! checker by construction. Parameter witnesses demanded by the negative
//! functional property are allocated from a typed pool `w_<ty>_<k>` and
//! denote values that realize the required distinction.

use std::collections::HashMap;

use thiserror::Error;

use crate::connectives::{
    bottom_nf, match_leibniz_eq, match_neg, match_neq, mk_leibniz_eq_nf, mk_neg_nf, mk_neq_nf,
    top_nf,
};
use crate::normalize::normalize;
use crate::sets::SentenceSet;
use crate::signature::Signature;
use crate::steen::{self, Demand};
use crate::syntax::print_term;
use crate::term::{Const, Term};
use crate::ty::Type;
use crate::universe::{TermUniverse, UniverseError};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BranchPolicy {
    LeftFirst,
    SeedDriven,
}

#[derive(Clone, Debug)]
pub struct ClosureConfig {
    pub universe_depth: u32,
    pub max_iterations: u32,
    pub valuation_seed: u64,
    pub branch_policy: BranchPolicy,
    pub member_cap: usize,
}

impl Default for ClosureConfig {
    fn default() -> Self {
        ClosureConfig {
            universe_depth: 1,
            max_iterations: 1000,
            valuation_seed: 0,
            branch_policy: BranchPolicy::LeftFirst,
            member_cap: 20_000,
        }
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ClosureError {
    #[error("closure not reached within {0} iterations")]
    IterationLimit(u32),
    #[error("member count exceeded the cap of {0}")]
    MemberExplosion(usize),
    #[error(transparent)]
    Universe(#[from] UniverseError),
    #[error("engine invariant broken: {0}")]
    Internal(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProvenanceEntry {
    pub rule: String,
    pub premises: Vec<String>,
    pub conclusion: String,
}

impl ProvenanceEntry {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "rule": self.rule,
            "premises": self.premises,
            "conclusion": self.conclusion,
        })
    }
}

#[derive(Clone, Debug)]
pub enum ClosureOutcome {
    Closed {
        set: SentenceSet,
        provenance: Vec<ProvenanceEntry>,
    },
    Inconsistent {
        reason: String,
    },
}

/// Runs the closure engine on normalized seeds.
pub fn close(
    seeds: &[Term],
    sig: &Signature,
    cfg: &ClosureConfig,
) -> Result<ClosureOutcome, ClosureError> {
    let seeds: Vec<Term> = seeds.iter().map(normalize).collect();
    if seeds
        .iter()
        .all(|s| matches!(s.match_eq(), Some((_, _, tau)) if *tau.final_result() == Type::Iota))
    {
        close_equational(&seeds, sig, cfg)
    } else {
        close_saturating(&seeds, sig, cfg)
    }
}

// ---------------------------------------------------------------------------
// equational mode
// ---------------------------------------------------------------------------

/// Growable union-find over interned terms.
#[derive(Default, Clone, Debug)]
struct TermClasses {
    ids: HashMap<Term, usize>,
    terms: Vec<Term>,
    parent: Vec<usize>,
}

impl TermClasses {
    fn intern(&mut self, t: &Term) -> usize {
        if let Some(&i) = self.ids.get(t) {
            return i;
        }
        let i = self.terms.len();
        self.ids.insert(t.clone(), i);
        self.terms.push(t.clone());
        self.parent.push(i);
        i
    }

    fn find(&mut self, i: usize) -> usize {
        let mut root = i;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = i;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        // smaller id becomes the root so representatives are deterministic
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    fn rep(&mut self, i: usize) -> Term {
        let r = self.find(i);
        self.terms[r].clone()
    }

    fn len(&self) -> usize {
        self.terms.len()
    }

    fn term(&self, i: usize) -> Term {
        self.terms[i].clone()
    }
}

fn close_equational(
    seeds: &[Term],
    sig: &Signature,
    cfg: &ClosureConfig,
) -> Result<ClosureOutcome, ClosureError> {
    let universe = TermUniverse::generate(sig, cfg.universe_depth)?;
    let mut provenance = Vec::new();
    let flavor = sig.flavor;

    // pool of mentioned terms per type and their classes
    let mut classes = TermClasses::default();
    let mut type_of: HashMap<usize, Type> = HashMap::new();
    let mut pending: Vec<(usize, usize)> = Vec::new();
    for s in seeds {
        let (l, r, tau) = s.match_eq().expect("mode guard");
        let li = classes.intern(&normalize(l));
        let ri = classes.intern(&normalize(r));
        type_of.insert(li, tau.clone());
        type_of.insert(ri, tau.clone());
        pending.push((li, ri));
        provenance.push(ProvenanceEntry {
            rule: "seed".to_string(),
            premises: vec![],
            conclusion: print_term(s, flavor),
        });
    }
    for (a, b) in pending {
        classes.union(a, b);
    }

    // close the pool under subterm rewriting within classes and under
    // functional instances over the universe
    let mut iterations = 0;
    loop {
        iterations += 1;
        if iterations > cfg.max_iterations {
            return Err(ClosureError::IterationLimit(cfg.max_iterations));
        }
        let mut changed = false;
        let n = classes.len();

        // functional instances: equal functions applied to universe args
        for i in 0..n {
            for j in 0..n {
                if i == j || !classes.same(i, j) {
                    continue;
                }
                let ty = match type_of.get(&i) {
                    Some(t) => t.clone(),
                    None => continue,
                };
                if let Some((arg_ty, ret_ty)) = ty.split_fun() {
                    for u in universe.terms_of(arg_ty)? {
                        let fi = normalize(&Term::app(classes.term(i), u.clone()));
                        let gi = normalize(&Term::app(classes.term(j), u.clone()));
                        let a = classes.intern(&fi);
                        let b = classes.intern(&gi);
                        type_of.entry(a).or_insert_with(|| ret_ty.clone());
                        type_of.entry(b).or_insert_with(|| ret_ty.clone());
                        if classes.union(a, b) {
                            changed = true;
                            provenance.push(ProvenanceEntry {
                                rule: "nabla_f_plus".to_string(),
                                premises: vec![format!(
                                    "{} =[{}] {}",
                                    print_term(&classes.term(i), flavor),
                                    ty,
                                    print_term(&classes.term(j), flavor)
                                )],
                                conclusion: format!(
                                    "{} =[{}] {}",
                                    print_term(&fi, flavor),
                                    ret_ty,
                                    print_term(&gi, flavor)
                                ),
                            });
                        }
                        if classes.len() > cfg.member_cap {
                            return Err(ClosureError::MemberExplosion(cfg.member_cap));
                        }
                    }
                }
            }
        }

        // subterm rewriting: replace a closed subterm by a classmate
        let n = classes.len();
        for i in 0..n {
            let t = classes.term(i);
            for (pos, sub, _) in t.positions() {
                if !sub.is_locally_closed_at(0) {
                    continue;
                }
                let Some(&si) = classes.ids.get(sub) else {
                    continue;
                };
                let mates: Vec<usize> =
                    (0..classes.len()).filter(|&k| classes.same(si, k)).collect();
                for k in mates {
                    let mate = classes.term(k);
                    if mate == *sub {
                        continue;
                    }
                    if pos.0.is_empty() {
                        continue; // the whole term is already classed with its mates
                    }
                    let rewritten = normalize(
                        &t.replace_at(&pos, &mate)
                            .map_err(|e| ClosureError::Internal(e.to_string()))?,
                    );
                    let a = classes.intern(&rewritten);
                    if let Some(ty) = type_of.get(&i).cloned() {
                        type_of.entry(a).or_insert(ty);
                    }
                    if classes.union(a, i) {
                        changed = true;
                        provenance.push(ProvenanceEntry {
                            rule: "nabla_eq_s".to_string(),
                            premises: vec![
                                print_term(&t, flavor),
                                format!(
                                    "{} ~ {}",
                                    print_term(sub, flavor),
                                    print_term(&mate, flavor)
                                ),
                            ],
                            conclusion: print_term(&rewritten, flavor),
                        });
                    }
                    if classes.len() > cfg.member_cap {
                        return Err(ClosureError::MemberExplosion(cfg.member_cap));
                    }
                }
            }
        }

        if !changed {
            break;
        }
    }

    // members: every ordered in-class pair at its type
    let mut set = SentenceSet::new(sig.clone(), universe);
    let n = classes.len();
    let mut count = 0usize;
    for i in 0..n {
        for j in 0..n {
            if !classes.same(i, j) {
                continue;
            }
            let ty = match type_of.get(&i) {
                Some(t) => t.clone(),
                None => continue,
            };
            let eq = normalize(&Term::prim_eq(ty, classes.term(i), classes.term(j)));
            if set
                .insert(&eq)
                .map_err(|e| ClosureError::Internal(e.to_string()))?
            {
                count += 1;
                if count > cfg.member_cap {
                    return Err(ClosureError::MemberExplosion(cfg.member_cap));
                }
            }
        }
    }
    Ok(ClosureOutcome::Closed { set, provenance })
}

// ---------------------------------------------------------------------------
// saturating mode
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
enum WitnessDen {
    /// A Boolean parameter with a fixed truth value.
    BoolConst(bool),
    /// A parameter behaving exactly like the given closed term.
    Mirror(Term),
    /// A predicate on individuals true exactly on one class.
    IndicatorIota(Term),
}

struct Valuation {
    sig: Signature,
    universe: TermUniverse,
    classes: TermClasses,
    /// pinned truth values of canonicalized atoms
    atoms: HashMap<Term, bool>,
    /// head-parameter aliases from predicate-equation seeds
    aliases: HashMap<String, String>,
    witnesses: HashMap<String, WitnessDen>,
    seed: u64,
    cache: HashMap<Term, bool>,
}

fn fnv(s: &str, seed: u64) -> u64 {
    let mut h = 0xcbf29ce484222325u64 ^ seed.wrapping_mul(0x9e3779b97f4a7c15);
    for b in s.as_bytes() {
        h ^= *b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

impl Valuation {
    fn new(sig: Signature, universe: TermUniverse, seed: u64) -> Self {
        Valuation {
            sig,
            universe,
            classes: TermClasses::default(),
            atoms: HashMap::new(),
            aliases: HashMap::new(),
            witnesses: HashMap::new(),
            seed,
            cache: HashMap::new(),
        }
    }

    fn alias_of(&self, name: &str) -> String {
        let mut n = name.to_string();
        while let Some(next) = self.aliases.get(&n) {
            n = next.clone();
        }
        n
    }

    fn invalidate(&mut self) {
        self.cache.clear();
    }

    /// Replaces iota-subterms by class representatives and Boolean
    /// arguments of atoms by the canonical truth constant, so denotation-
    /// equal arguments give the same atom key.
    fn canon_atom(&mut self, t: &Term) -> Result<Term, ClosureError> {
        let (head, args) = t.spine();
        let head = match head {
            Term::Const(Const::Param(n, ty)) => {
                Term::param(&self.alias_of(n.as_ref()), ty.clone())
            }
            other => other.clone(),
        };
        let mut canon_args = Vec::new();
        for a in args {
            let aty = a
                .typecheck()
                .map_err(|e| ClosureError::Internal(e.to_string()))?;
            let ca = match aty {
                Type::Iota => self.iota_rep(a)?,
                Type::O => {
                    if self.eval(a)? {
                        top_nf()
                    } else {
                        bottom_nf()
                    }
                }
                _ => a.clone(),
            };
            canon_args.push(ca);
        }
        Ok(Term::apps(head, canon_args))
    }

    fn iota_rep(&mut self, t: &Term) -> Result<Term, ClosureError> {
        let n = normalize(t);
        // canonicalize the arguments of applied iota-terms so congruent
        // applications share a class
        let key = match n.spine() {
            (Term::Const(Const::Param(..)), args) if !args.is_empty() => self.canon_atom(&n)?,
            _ => n.clone(),
        };
        let i = self.classes.intern(&key);
        Ok(self.classes.rep(i))
    }

    fn union_iota(&mut self, a: &Term, b: &Term) -> Result<(), ClosureError> {
        let ra = self.iota_rep(a)?;
        let rb = self.iota_rep(b)?;
        let ia = self.classes.intern(&ra);
        let ib = self.classes.intern(&rb);
        self.classes.union(ia, ib);
        self.invalidate();
        Ok(())
    }

    fn same_iota(&mut self, a: &Term, b: &Term) -> Result<bool, ClosureError> {
        let ra = self.iota_rep(a)?;
        let rb = self.iota_rep(b)?;
        let ia = self.classes.intern(&ra);
        let ib = self.classes.intern(&rb);
        Ok(self.classes.same(ia, ib))
    }

    fn pin_atom(&mut self, t: &Term, v: bool) -> Result<bool, ClosureError> {
        let key = self.canon_atom(&normalize(t))?;
        if let Some(&prev) = self.atoms.get(&key) {
            return Ok(prev == v);
        }
        self.atoms.insert(key, v);
        self.invalidate();
        Ok(true)
    }

    fn atom_value(&mut self, t: &Term) -> Result<bool, ClosureError> {
        let key = self.canon_atom(t)?;
        if let Some(&v) = self.atoms.get(&key) {
            return Ok(v);
        }
        let (head, args) = key.spine();
        if let Term::Const(Const::Param(name, _)) = head {
            if let Some(rule) = self.witnesses.get(name.as_ref()).cloned() {
                let v = match rule {
                    WitnessDen::BoolConst(b) => b,
                    WitnessDen::Mirror(u) => {
                        let applied =
                            normalize(&Term::apps(u, args.iter().map(|a| (*a).clone())));
                        self.eval(&applied)?
                    }
                    WitnessDen::IndicatorIota(rep) => {
                        if args.len() == 1 {
                            self.same_iota(args[0], &rep)?
                        } else {
                            false
                        }
                    }
                };
                return Ok(v);
            }
        }
        // unpinned atom: deterministic pseudo-random default
        let v = fnv(&print_term(&key, self.sig.flavor), self.seed) & 1 == 1;
        Ok(v)
    }

    fn eval(&mut self, t: &Term) -> Result<bool, ClosureError> {
        let n = normalize(t);
        if let Some(&v) = self.cache.get(&n) {
            return Ok(v);
        }
        let v = if let Some((l, r, tau)) = n.match_eq() {
            let (l, r, tau) = (l.clone(), r.clone(), tau.clone());
            self.den_equal(&l, &r, &tau)?
        } else {
            let (head, _) = n.spine();
            match head {
                Term::Const(Const::Param(..)) => self.atom_value(&n)?,
                _ => {
                    return Err(ClosureError::Internal(format!(
                        "cannot evaluate {}",
                        print_term(&n, self.sig.flavor)
                    )))
                }
            }
        };
        self.cache.insert(n, v);
        Ok(v)
    }

    fn den_equal(&mut self, l: &Term, r: &Term, tau: &Type) -> Result<bool, ClosureError> {
        match tau {
            Type::O => Ok(self.eval(l)? == self.eval(r)?),
            Type::Iota => self.same_iota(l, r),
            Type::Fun(..) => {
                let (arg_ty, ret_ty) = tau.split_fun().expect("function type");
                let args: Vec<Term> = match self.universe.terms_of(arg_ty) {
                    Ok(ts) => ts.to_vec(),
                    Err(_) => Vec::new(),
                };
                for u in args {
                    let lu = normalize(&Term::app(l.clone(), u.clone()));
                    let ru = normalize(&Term::app(r.clone(), u));
                    if !self.den_equal(&lu, &ru, ret_ty)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }
}

fn type_slug(ty: &Type) -> String {
    match ty {
        Type::O => "o".to_string(),
        Type::Iota => "i".to_string(),
        Type::Fun(ret, arg) => format!("{}{}", type_slug(ret), type_slug(arg)),
    }
}

struct Engine {
    val: Valuation,
    cfg: ClosureConfig,
    provenance: Vec<ProvenanceEntry>,
    witness_counter: HashMap<String, u32>,
}

impl Engine {
    fn allocate_witness(&mut self, ty: &Type, den: WitnessDen) -> Result<Term, ClosureError> {
        let slug = type_slug(ty);
        let k = self.witness_counter.entry(slug.clone()).or_insert(0);
        let name = format!("w_{slug}_{k}");
        *k += 1;
        self.val.sig.add_param(&name, ty.clone());
        match &den {
            WitnessDen::BoolConst(b) => {
                self.val.witnesses.insert(name.clone(), WitnessDen::BoolConst(*b));
            }
            WitnessDen::Mirror(u) => {
                if *ty == Type::Iota {
                    let w = Term::param(&name, ty.clone());
                    let u = u.clone();
                    self.val.union_iota(&w, &u)?;
                } else {
                    self.val.witnesses.insert(name.clone(), den.clone());
                }
            }
            WitnessDen::IndicatorIota(_) => {
                self.val.witnesses.insert(name.clone(), den.clone());
            }
        }
        self.val.universe = TermUniverse::generate(&self.val.sig, self.cfg.universe_depth)?;
        self.val.invalidate();
        self.provenance.push(ProvenanceEntry {
            rule: "witness".to_string(),
            premises: vec![],
            conclusion: format!("{name} : {ty}"),
        });
        Ok(Term::param(&name, ty.clone()))
    }
}

fn close_saturating(
    seeds: &[Term],
    sig: &Signature,
    cfg: &ClosureConfig,
) -> Result<ClosureOutcome, ClosureError> {
    let flavor = sig.flavor;
    let mut engine = Engine {
        val: Valuation::new(
            sig.clone(),
            TermUniverse::generate(sig, cfg.universe_depth)?,
            cfg.valuation_seed,
        ),
        cfg: cfg.clone(),
        provenance: Vec::new(),
        witness_counter: HashMap::new(),
    };

    // the Boolean universe always needs a false element (the negative
    // functional property on ¬⊥ demands a Boolean parameter witness) and
    // the Leibniz properties at type o need a predicate behaving like the
    // identity
    let has_false_o_param = false;
    if !has_false_o_param {
        engine.allocate_witness(&Type::O, WitnessDen::BoolConst(false))?;
    }
    let identity_oo = Term::lam(Type::O, Term::Bound(0));
    engine.allocate_witness(
        &Type::fun(Type::O, Type::O),
        WitnessDen::Mirror(identity_oo),
    )?;

    // pin the seeds
    let mut deferred: Vec<Term> = Vec::new();
    let mut disequalities: Vec<(Term, Term)> = Vec::new();
    for s in seeds {
        if let Some((l, r, tau)) = s.match_eq().map(|(l, r, t)| (l.clone(), r.clone(), t.clone())) {
            if match_neg(s).is_none() {
                match tau {
                    Type::Iota => {
                        engine.val.union_iota(&l, &r)?;
                        continue;
                    }
                    ref t if t.is_fun() => {
                        // predicate alias between bare parameter heads
                        if let (
                            Term::Const(Const::Param(ln, _)),
                            Term::Const(Const::Param(rn, _)),
                        ) = (&l, &r)
                        {
                            let la = engine.val.alias_of(ln.as_ref());
                            let ra = engine.val.alias_of(rn.as_ref());
                            if la != ra {
                                let (lo, hi) = if la < ra { (la, ra) } else { (ra, la) };
                                engine.val.aliases.insert(hi, lo);
                                engine.val.invalidate();
                            }
                            continue;
                        }
                        deferred.push(s.clone());
                        continue;
                    }
                    _ => {}
                }
            }
        }
        if let Some((l, r, tau)) = match_neq(s).map(|(l, r, t)| (l.clone(), r.clone(), t.clone())) {
            if tau == Type::Iota {
                disequalities.push((l, r));
                continue;
            }
        }
        if let Some(inner) = match_neg(s) {
            let (head, _) = inner.spine();
            if matches!(head, Term::Const(Const::Param(..))) {
                if !engine.val.pin_atom(inner, false)? {
                    return Ok(ClosureOutcome::Inconsistent {
                        reason: format!("conflicting seed {}", print_term(s, flavor)),
                    });
                }
                continue;
            }
        }
        {
            let (head, _) = s.spine();
            if matches!(head, Term::Const(Const::Param(..))) {
                if !engine.val.pin_atom(s, true)? {
                    return Ok(ClosureOutcome::Inconsistent {
                        reason: format!("conflicting seed {}", print_term(s, flavor)),
                    });
                }
                continue;
            }
        }
        deferred.push(s.clone());
    }
    for (l, r) in &disequalities {
        if engine.val.same_iota(l, r)? {
            return Ok(ClosureOutcome::Inconsistent {
                reason: format!(
                    "{} and {} are forced equal but seeded distinct",
                    print_term(l, flavor),
                    print_term(r, flavor)
                ),
            });
        }
    }

    // deferred seeds: search over their unpinned atoms
    if !deferred.is_empty() && !satisfy_deferred(&mut engine, &deferred)? {
        return Ok(ClosureOutcome::Inconsistent {
            reason: "no valuation over the seed atoms satisfies the seeds".to_string(),
        });
    }
    for s in seeds {
        if !engine.val.eval(s)? {
            return Ok(ClosureOutcome::Inconsistent {
                reason: format!("seed {} is unsatisfiable", print_term(s, flavor)),
            });
        }
    }

    // closure loop
    let mut set = SentenceSet::new(engine.val.sig.clone(), engine.val.universe.clone());
    for s in seeds {
        insert_member(&mut set, &mut engine, s, "seed", &[])?;
    }

    let mut iterations = 0;
    loop {
        iterations += 1;
        if iterations > cfg.max_iterations {
            return Err(ClosureError::IterationLimit(cfg.max_iterations));
        }
        let mut changed = false;

        // refresh the signature and universe on the set after allocations
        if set.signature.params().count() != engine.val.sig.params().count() {
            let mut fresh = SentenceSet::new(engine.val.sig.clone(), engine.val.universe.clone());
            for m in set.members() {
                fresh
                    .insert(m)
                    .map_err(|e| ClosureError::Internal(e.to_string()))?;
            }
            set = fresh;
        }

        // saturation of the Boolean universe
        let universe_booleans: Vec<Term> = set.universe.terms_of(&Type::O)?.to_vec();
        for s in &universe_booleans {
            let neg = mk_neg_nf(s);
            if !set.contains_nf(s) && !set.contains_nf(&neg) {
                let truth = engine.val.eval(s)?;
                let chosen = if truth { s.clone() } else { neg };
                insert_member(&mut set, &mut engine, &chosen, "saturation", &[])?;
                changed = true;
            }
        }

        // derived-closure enrichment
        changed |= enrichment_pass(&mut set, &mut engine)?;

        // property obligations
        let obligations = steen::obligations(&set)?;
        for ob in obligations {
            if steen::demand_met(&set, &ob.demand) {
                continue;
            }
            changed = true;
            match &ob.demand {
                Demand::All(ts) => {
                    for t in ts {
                        insert_member(&mut set, &mut engine, t, ob.property, &ob.premises)?;
                    }
                }
                Demand::Branch(branches) => {
                    let mut satisfied = false;
                    for group in branches {
                        let mut all_true = true;
                        for t in group {
                            if !engine.val.eval(t)? {
                                all_true = false;
                                break;
                            }
                        }
                        if all_true {
                            for t in group {
                                insert_member(&mut set, &mut engine, t, ob.property, &ob.premises)?;
                            }
                            satisfied = true;
                            break;
                        }
                    }
                    if !satisfied {
                        if ob.property == "nabla_f_minus" {
                            satisfy_f_minus(&mut set, &mut engine, &ob.premises[0])?;
                        } else {
                            return Ok(ClosureOutcome::Inconsistent {
                                reason: format!(
                                    "no branch of {} is satisfiable for {}",
                                    ob.property,
                                    ob.premises
                                        .iter()
                                        .map(|t| print_term(t, flavor))
                                        .collect::<Vec<_>>()
                                        .join(" ; ")
                                ),
                            });
                        }
                    }
                }
            }
            if set.len() > cfg.member_cap {
                return Err(ClosureError::MemberExplosion(cfg.member_cap));
            }
        }

        // consistency guard
        for (prop, w) in steen::violations(&set) {
            return Ok(ClosureOutcome::Inconsistent {
                reason: format!("{prop}: {}", w.render()),
            });
        }

        if !changed {
            break;
        }
    }

    Ok(ClosureOutcome::Closed {
        set,
        provenance: engine.provenance,
    })
}

fn insert_member(
    set: &mut SentenceSet,
    engine: &mut Engine,
    t: &Term,
    rule: &str,
    premises: &[Term],
) -> Result<bool, ClosureError> {
    let n = normalize(t);
    if set.contains_nf(&n) {
        return Ok(false);
    }
    if !engine.val.eval(&n)? {
        return Err(ClosureError::Internal(format!(
            "rule {rule} would insert a member that is false in the valuation: {}",
            print_term(&n, set.signature.flavor)
        )));
    }
    set.insert(&n)
        .map_err(|e| ClosureError::Internal(e.to_string()))?;
    let flavor = set.signature.flavor;
    engine.provenance.push(ProvenanceEntry {
        rule: rule.to_string(),
        premises: premises.iter().map(|p| print_term(p, flavor)).collect(),
        conclusion: print_term(&n, flavor),
    });
    Ok(true)
}

/// Enrichment with the derived-lemma consequences that the property
/// obligations alone do not force at desk scale.
fn enrichment_pass(set: &mut SentenceSet, engine: &mut Engine) -> Result<bool, ClosureError> {
    let mut changed = false;
    let top = top_nf();
    let bottom = bottom_nf();
    let neg_bottom = mk_neg_nf(&bottom);
    let members: Vec<Term> = set.members().cloned().collect();

    // double negation elimination
    for m in &members {
        if let Some(inner) = match_neg(m) {
            if let Some(s) = match_neg(inner) {
                if !set.contains_nf(s) {
                    changed |= insert_member(set, engine, &s.clone(), "double_negation", &[m.clone()])?;
                }
            }
        }
    }
    // top and not-bottom imply each other
    if set.contains_nf(&neg_bottom) && !set.contains_nf(&top) {
        changed |= insert_member(set, engine, &top, "neg_bottom_gives_top", &[neg_bottom.clone()])?;
    }
    if set.contains_nf(&top) && !set.contains_nf(&neg_bottom) {
        changed |= insert_member(set, engine, &neg_bottom, "top_gives_neg_bottom", &[top.clone()])?;
    }
    // negated equality symmetry
    for m in &members {
        if let Some((l, r, tau)) = match_neq(m).map(|(l, r, t)| (l.clone(), r.clone(), t.clone())) {
            if l != r {
                let sym = mk_neq_nf(tau, &r, &l);
                if !set.contains_nf(&sym) {
                    changed |= insert_member(set, engine, &sym, "neq_symmetry", &[m.clone()])?;
                }
            }
        }
    }
    // reflexivity over the universe, primitive and Leibniz
    for tau in [Type::Iota, Type::O] {
        let terms: Vec<Term> = set.universe.terms_of(&tau)?.to_vec();
        for s in terms {
            let refl = normalize(&Term::prim_eq(tau.clone(), s.clone(), s.clone()));
            if !set.contains_nf(&refl) {
                changed |= insert_member(set, engine, &refl, "reflexivity", &[])?;
            }
            let leib = mk_leibniz_eq_nf(&tau, &s, &s);
            if !set.contains_nf(&leib) {
                ensure_leibniz_distinguishable(engine, &tau)?;
                changed |= insert_member(set, engine, &leib, "leibniz_reflexivity", &[])?;
            }
        }
    }
    // universe-sided positive equations get Leibniz counterparts
    let members: Vec<Term> = set.members().cloned().collect();
    for m in &members {
        if match_neg(m).is_some() {
            continue;
        }
        if let Some((l, r, tau)) = m.match_eq().map(|(l, r, t)| (l.clone(), r.clone(), t.clone())) {
            if set.universe.contains_term(&tau, &l) && set.universe.contains_term(&tau, &r) {
                let leib = mk_leibniz_eq_nf(&tau, &l, &r);
                if !set.contains_nf(&leib) {
                    ensure_leibniz_distinguishable(engine, &tau)?;
                    changed |= insert_member(set, engine, &leib, "leibniz_counterpart", &[m.clone()])?;
                }
            }
        }
    }
    // universe-sided negated equations get negated Leibniz counterparts
    for m in &members {
        if let Some((l, r, tau)) = match_neq(m).map(|(l, r, t)| (l.clone(), r.clone(), t.clone())) {
            if set.universe.contains_term(&tau, &l) && set.universe.contains_term(&tau, &r) {
                ensure_leibniz_distinguishable(engine, &tau)?;
                let leib = mk_leibniz_eq_nf(&tau, &l, &r);
                let neg_leib = mk_neg_nf(&leib);
                if !set.contains_nf(&neg_leib) {
                    changed |=
                        insert_member(set, engine, &neg_leib, "neg_leibniz_counterpart", &[m.clone()])?;
                }
            }
        }
    }
    // Leibniz members close under symmetry, transitivity, and projection to
    // primitive equations; negated ones project and flip symmetrically
    let members: Vec<Term> = set.members().cloned().collect();
    let leib_members: Vec<(Type, Term, Term, Term)> = members
        .iter()
        .filter_map(|m| match_leibniz_eq(m).map(|(tau, s, t)| (tau, s, t, m.clone())))
        .collect();
    for (tau, s, t, m) in &leib_members {
        let prim = normalize(&Term::prim_eq(tau.clone(), s.clone(), t.clone()));
        if !set.contains_nf(&prim) {
            changed |= insert_member(set, engine, &prim, "leibniz_to_primitive", &[m.clone()])?;
        }
        let sym = mk_leibniz_eq_nf(tau, t, s);
        if !set.contains_nf(&sym) {
            changed |= insert_member(set, engine, &sym, "leibniz_symmetry", &[m.clone()])?;
        }
    }
    for (tau1, s1, t1, m1) in &leib_members {
        for (tau2, s2, t2, m2) in &leib_members {
            if tau1 == tau2 && t1 == s2 {
                let trans = mk_leibniz_eq_nf(tau1, s1, t2);
                if !set.contains_nf(&trans) {
                    changed |= insert_member(
                        set,
                        engine,
                        &trans,
                        "leibniz_transitivity",
                        &[m1.clone(), m2.clone()],
                    )?;
                }
            }
        }
    }
    let neg_leib_members: Vec<(Type, Term, Term, Term)> = members
        .iter()
        .filter_map(|m| {
            let inner = match_neg(m)?;
            match_leibniz_eq(inner).map(|(tau, s, t)| (tau, s, t, m.clone()))
        })
        .collect();
    for (tau, s, t, m) in &neg_leib_members {
        let neq = mk_neq_nf(tau.clone(), s, t);
        if !set.contains_nf(&neq) {
            changed |= insert_member(set, engine, &neq, "neg_leibniz_to_neg_primitive", &[m.clone()])?;
        }
        if s != t {
            let sym = mk_neg_nf(&mk_leibniz_eq_nf(tau, t, s));
            if !set.contains_nf(&sym) {
                changed |= insert_member(set, engine, &sym, "neg_leibniz_symmetry", &[m.clone()])?;
            }
        }
    }
    Ok(changed)
}

/// The negation of a Leibniz equation is true only when some universe
/// predicate distinguishes the sides; at shallow depths the predicate
/// bucket can be empty, so allocate an indicator witness once per type.
fn ensure_leibniz_distinguishable(engine: &mut Engine, tau: &Type) -> Result<(), ClosureError> {
    if *tau != Type::Iota {
        return Ok(());
    }
    let pred_ty = Type::fun(Type::Iota, Type::O);
    let iotas: Vec<Term> = engine.val.universe.terms_of(&Type::Iota)?.to_vec();
    let mut reps = Vec::new();
    for t in &iotas {
        let r = engine.val.iota_rep(t)?;
        if !reps.contains(&r) {
            reps.push(r);
        }
    }
    if reps.len() < 2 {
        return Ok(());
    }
    // one indicator per class suffices to distinguish all pairs
    let existing: Vec<String> = engine
        .val
        .witnesses
        .iter()
        .filter_map(|(n, d)| match d {
            WitnessDen::IndicatorIota(r) => Some(format!("{n}:{r:?}")),
            _ => None,
        })
        .collect();
    for rep in reps {
        let tag = format!(":{rep:?}");
        if existing.iter().any(|e| e.ends_with(&tag)) {
            continue;
        }
        engine.allocate_witness(&pred_ty, WitnessDen::IndicatorIota(rep))?;
    }
    Ok(())
}

/// Allocates a witness parameter that realizes a negative functional
/// property instance: the premise is `¬(f =^{ντ} g)` and the fresh
/// parameter behaves like the first universe argument on which `f` and `g`
/// differ.
fn satisfy_f_minus(
    set: &mut SentenceSet,
    engine: &mut Engine,
    premise: &Term,
) -> Result<(), ClosureError> {
    let flavor = set.signature.flavor;
    let (l, r, tau) = match_neq(premise)
        .map(|(l, r, t)| (l.clone(), r.clone(), t.clone()))
        .ok_or_else(|| {
            ClosureError::Internal(format!(
                "nabla_f_minus premise is not a negated equation: {}",
                print_term(premise, flavor)
            ))
        })?;
    let (arg_ty, ret_ty) = tau
        .split_fun()
        .map(|(a, b)| (a.clone(), b.clone()))
        .ok_or_else(|| ClosureError::Internal("premise is not at function type".to_string()))?;
    let args: Vec<Term> = engine.val.universe.terms_of(&arg_ty)?.to_vec();
    let mut distinguishing = None;
    for u in args {
        let lu = normalize(&Term::app(l.clone(), u.clone()));
        let ru = normalize(&Term::app(r.clone(), u.clone()));
        if !engine.val.den_equal(&lu, &ru, &ret_ty)? {
            distinguishing = Some(u);
            break;
        }
    }
    let u = distinguishing.ok_or_else(|| {
        ClosureError::Internal(format!(
            "sides of {} are not distinguishable over the universe",
            print_term(premise, flavor)
        ))
    })?;
    let den = match arg_ty {
        Type::O => WitnessDen::BoolConst(engine.val.eval(&u)?),
        _ => WitnessDen::Mirror(u.clone()),
    };
    let w = engine.allocate_witness(&arg_ty, den)?;
    let lw = normalize(&Term::app(l, w.clone()));
    let rw = normalize(&Term::app(r, w));
    let conclusion = mk_neq_nf(ret_ty, &lw, &rw);
    // the set's universe is refreshed at the top of the next pass; insert
    // into the current set so the obligation is already satisfied
    insert_member(set, engine, &conclusion, "nabla_f_minus", &[premise.clone()])?;
    Ok(())
}

/// Deferred seeds carry Boolean structure; search assignments of their
/// unpinned atoms (at most sixteen) for one satisfying all of them.
fn satisfy_deferred(engine: &mut Engine, deferred: &[Term]) -> Result<bool, ClosureError> {
    // collect candidate atoms: parameter-headed Boolean subterms
    let mut atoms: Vec<Term> = Vec::new();
    for s in deferred {
        for (_, sub, _) in s.positions() {
            if !sub.is_locally_closed_at(0) {
                continue;
            }
            if sub.typecheck().map(|t| t == Type::O).unwrap_or(false) {
                let (head, _) = sub.spine();
                if matches!(head, Term::Const(Const::Param(..))) {
                    let key = engine.val.canon_atom(&normalize(sub))?;
                    if !engine.val.atoms.contains_key(&key) && !atoms.contains(&key) {
                        atoms.push(key);
                    }
                }
            }
        }
    }
    if atoms.len() > 16 {
        return Ok(false);
    }
    let all_true = |engine: &mut Engine, deferred: &[Term]| -> Result<bool, ClosureError> {
        for s in deferred {
            if !engine.val.eval(s)? {
                return Ok(false);
            }
        }
        Ok(true)
    };
    if all_true(engine, deferred)? {
        return Ok(true);
    }
    let n = atoms.len();
    for mask in 0u32..(1u32 << n) {
        for (i, a) in atoms.iter().enumerate() {
            engine.val.atoms.insert(a.clone(), mask & (1 << i) != 0);
        }
        engine.val.invalidate();
        if all_true(engine, deferred)? {
            return Ok(true);
        }
    }
    for a in &atoms {
        engine.val.atoms.remove(a);
    }
    engine.val.invalidate();
    Ok(false)
}
