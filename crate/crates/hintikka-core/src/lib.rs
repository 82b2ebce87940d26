//! A term kernel and workbench for Hintikka sets over equality-based
//! higher-order logic.
//!
//! The crate provides:
//!
//! * a simply typed lambda-calculus kernel with canonical alpha-form,
//!   capture-avoiding substitution and βη-normalization ([`term`],
//!   [`normalize`]);
//! * signatures, the defined-connective table of the equality-only
//!   formulation, Leibniz equality, and a concrete syntax ([`signature`],
//!   [`connectives`], [`syntax`]);
//! * executable checkers for the acceptable (blue) and extensional (red)
//!   Hintikka property suites over bounded term universes ([`steen`],
//!   [`brown`], [`lemmas`]);
//! * the blue-to-red translation with the sharp lift and an end-to-end
//!   reduction verifier ([`reduction`]);
//! * a closure engine that builds acceptable sets from seed sentences
//!   ([`closure`]) and a bounded term-model evaluator ([`model`]).

pub mod brown;
pub mod closure;
pub mod connectives;
pub mod lemmas;
pub mod model;
pub mod normalize;
pub mod prop;
pub mod reduction;
pub mod report;
pub mod sets;
pub mod signature;
pub mod steen;
pub mod syntax;
pub mod term;
pub mod ty;
pub mod universe;

pub use normalize::{beta_eta_equal, normalize};
pub use prop::Prop;
pub use report::{PropertyReport, Status, Suite, Witness};
pub use sets::{PropSet, SentenceSet};
pub use signature::{Flavor, Signature};
pub use term::{Const, KernelError, Position, Step, Term};
pub use ty::Type;
pub use universe::TermUniverse;
