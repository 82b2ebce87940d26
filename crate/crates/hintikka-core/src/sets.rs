//! Finite sets of sentences (blue) and external propositions (red), stored
//! under βη-normal representatives so membership is βη-invariant by
//! construction.

use indexmap::IndexSet;
use thiserror::Error;

use crate::normalize::normalize;
use crate::prop::Prop;
use crate::signature::Signature;
use crate::term::Term;
use crate::ty::Type;
use crate::universe::TermUniverse;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum SetError {
    #[error("member is not closed: {0}")]
    NotClosed(String),
    #[error("member is not Boolean: {0}")]
    NotBoolean(String),
    #[error("member is ill-typed: {0}")]
    IllTyped(String),
}

#[derive(Clone, Debug)]
pub struct SentenceSet {
    members: IndexSet<Term>,
    pub signature: Signature,
    pub universe: TermUniverse,
}

impl SentenceSet {
    pub fn new(signature: Signature, universe: TermUniverse) -> Self {
        SentenceSet {
            members: IndexSet::new(),
            signature,
            universe,
        }
    }

    /// Inserts the βη-normal form of a closed Boolean term.
    pub fn insert(&mut self, t: &Term) -> Result<bool, SetError> {
        let n = normalize(t);
        match n.typecheck() {
            Ok(Type::O) => {}
            Ok(ty) => return Err(SetError::NotBoolean(format!("{ty}"))),
            Err(e) => return Err(SetError::IllTyped(e.to_string())),
        }
        if !n.is_closed() {
            return Err(SetError::NotClosed(format!("{n:?}")));
        }
        Ok(self.members.insert(n))
    }

    /// Membership modulo βη.
    pub fn contains(&self, t: &Term) -> bool {
        self.members.contains(&normalize(t))
    }

    /// Membership of an already-normal term.
    pub fn contains_nf(&self, t: &Term) -> bool {
        self.members.contains(t)
    }

    /// Members in insertion order; every member is βη-normal.
    pub fn members(&self) -> impl Iterator<Item = &Term> {
        self.members.iter()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct PropSet {
    members: IndexSet<Prop>,
    pub signature: Signature,
    pub universe: TermUniverse,
}

impl PropSet {
    pub fn new(signature: Signature, universe: TermUniverse) -> Self {
        PropSet {
            members: IndexSet::new(),
            signature,
            universe,
        }
    }

    /// Inserts with embedded terms normalized.
    pub fn insert(&mut self, p: &Prop) -> bool {
        self.members.insert(p.normalized())
    }

    pub fn contains(&self, p: &Prop) -> bool {
        self.members.contains(&p.normalized())
    }

    pub fn members(&self) -> impl Iterator<Item = &Prop> {
        self.members.iter()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}
