//! Signatures: the logical-constant inventory plus typed parameters.

use indexmap::IndexMap;
use std::sync::Arc;

use crate::ty::Type;

/// Which logical constants are primitive.
///
/// The blue signature has the typed equality family as its only logical
/// connectives; the red signatures additionally may carry primitive negation.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Flavor {
    BlueEqualityOnly,
    RedNegAndEquality,
    RedEqualityOnly,
}

impl Flavor {
    pub fn is_blue(self) -> bool {
        matches!(self, Flavor::BlueEqualityOnly)
    }

    pub fn has_primitive_neg(self) -> bool {
        matches!(self, Flavor::RedNegAndEquality)
    }
}

#[derive(Clone, Debug)]
pub struct Signature {
    pub flavor: Flavor,
    params: IndexMap<Arc<str>, Type>,
}

impl Signature {
    pub fn new(flavor: Flavor) -> Self {
        Signature {
            flavor,
            params: IndexMap::new(),
        }
    }

    pub fn blue() -> Self {
        Signature::new(Flavor::BlueEqualityOnly)
    }

    pub fn red() -> Self {
        Signature::new(Flavor::RedNegAndEquality)
    }

    pub fn with_param(mut self, name: &str, ty: Type) -> Self {
        self.add_param(name, ty);
        self
    }

    pub fn add_param(&mut self, name: &str, ty: Type) {
        self.params.insert(name.into(), ty);
    }

    pub fn param_type(&self, name: &str) -> Option<&Type> {
        self.params.get(name)
    }

    /// Parameters in declaration order.
    pub fn params(&self) -> impl Iterator<Item = (&Arc<str>, &Type)> {
        self.params.iter()
    }

    /// Parameter names of the given type, in declaration order.
    pub fn params_of_type(&self, ty: &Type) -> Vec<Arc<str>> {
        self.params
            .iter()
            .filter(|(_, t)| *t == ty)
            .map(|(n, _)| n.clone())
            .collect()
    }

    /// Same parameters under a different flavor.
    pub fn with_flavor(&self, flavor: Flavor) -> Signature {
        Signature {
            flavor,
            params: self.params.clone(),
        }
    }
}
