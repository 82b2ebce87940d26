//! Simple types over the base types `o` (Booleans) and `i` (individuals).
//!
//! A function type is written by juxtaposition in the literature: the type
//! `ντ` takes an argument of type `τ` to a result of type `ν`. In the
//! concrete syntax used by the tooling it is rendered `(τ > ν)`.

use std::fmt;
use std::sync::Arc;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Type {
    /// Booleans.
    O,
    /// Individuals.
    Iota,
    /// `Fun(result, argument)`, i.e. the type `ντ`.
    Fun(Arc<Type>, Arc<Type>),
}

impl Type {
    /// Function type from `arg` to `ret`.
    pub fn fun(arg: Type, ret: Type) -> Type {
        Type::Fun(Arc::new(ret), Arc::new(arg))
    }

    /// The type `o τ τ` of the equality predicate at `τ`.
    pub fn eq_pred(tau: &Type) -> Type {
        Type::fun(tau.clone(), Type::fun(tau.clone(), Type::O))
    }

    pub fn is_fun(&self) -> bool {
        matches!(self, Type::Fun(..))
    }

    /// For a function type `ντ`, the pair `(τ, ν)`.
    pub fn split_fun(&self) -> Option<(&Type, &Type)> {
        match self {
            Type::Fun(ret, arg) => Some((arg, ret)),
            _ => None,
        }
    }

    /// Result type after applying `n` arguments; `None` if not that deep.
    pub fn result_after(&self, n: usize) -> Option<&Type> {
        let mut t = self;
        for _ in 0..n {
            t = match t.split_fun() {
                Some((_, ret)) => ret,
                None => return None,
            };
        }
        Some(t)
    }

    /// Argument types consumed before reaching a base type.
    pub fn arg_types(&self) -> Vec<&Type> {
        let mut args = Vec::new();
        let mut t = self;
        while let Some((a, r)) = t.split_fun() {
            args.push(a);
            t = r;
        }
        args
    }

    /// Final result type after all arguments.
    pub fn final_result(&self) -> &Type {
        let mut t = self;
        while let Some((_, r)) = t.split_fun() {
            t = r;
        }
        t
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::O => write!(f, "o"),
            Type::Iota => write!(f, "i"),
            Type::Fun(ret, arg) => write!(f, "({} > {})", arg, ret),
        }
    }
}

impl fmt::Debug for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_round_shape() {
        let oi = Type::fun(Type::Iota, Type::O);
        assert_eq!(oi.to_string(), "(i > o)");
        let eq_i = Type::eq_pred(&Type::Iota);
        assert_eq!(eq_i.to_string(), "(i > (i > o))");
        assert_eq!(eq_i.final_result(), &Type::O);
        assert_eq!(eq_i.arg_types(), vec![&Type::Iota, &Type::Iota]);
    }
}
