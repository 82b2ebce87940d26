//! Lambda-terms in canonical alpha-form.
//!
//! Bound variables are nameless de Bruijn indices, free variables and
//! parameters carry names, so structural equality coincides with
//! alpha-equivalence. Terms are immutable and shared via `Arc`.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::ty::Type;

/// Constant symbols: the logical constants plus signature parameters.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Const {
    /// Primitive equality `=^τ` of type `oττ`.
    Eq(Type),
    /// Primitive negation `¬` of type `oo` (red signatures only).
    Neg,
    /// A parameter with its declared type.
    Param(Arc<str>, Type),
}

impl Const {
    pub fn ty(&self) -> Type {
        match self {
            Const::Eq(tau) => Type::eq_pred(tau),
            Const::Neg => Type::fun(Type::O, Type::O),
            Const::Param(_, ty) => ty.clone(),
        }
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Const(Const),
    /// Bound variable as a de Bruijn index (0 = innermost binder).
    Bound(u32),
    /// Named free variable.
    Free(Arc<str>, Type),
    /// Abstraction over the given argument type.
    Lam(Type, Arc<Term>),
    App(Arc<Term>, Arc<Term>),
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Const(Const::Eq(ty)) => write!(f, "=[{ty}]"),
            Term::Const(Const::Neg) => write!(f, "~"),
            Term::Const(Const::Param(n, _)) => write!(f, "{n}"),
            Term::Bound(i) => write!(f, "#{i}"),
            Term::Free(n, _) => write!(f, "{n}"),
            Term::Lam(ty, b) => write!(f, "(\\_:{ty}. {b:?})"),
            Term::App(g, a) => write!(f, "({g:?} {a:?})"),
        }
    }
}

impl fmt::Debug for Const {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Const::Eq(ty) => write!(f, "=[{ty}]"),
            Const::Neg => write!(f, "~"),
            Const::Param(n, ty) => write!(f, "{n}:{ty}"),
        }
    }
}

/// One step into a term.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Step {
    FunSide,
    ArgSide,
    UnderBinder,
}

/// A path addressing a subterm; the empty path is the whole term.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Position(pub Vec<Step>);

impl fmt::Debug for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            match s {
                Step::FunSide => write!(f, "f")?,
                Step::ArgSide => write!(f, "a")?,
                Step::UnderBinder => write!(f, "b")?,
            }
        }
        write!(f, "]")
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum KernelError {
    #[error("ill-typed at {position:?}: expected {expected}, found {found}")]
    IllTyped {
        position: Position,
        expected: String,
        found: String,
    },
    #[error("type mismatch: expected {expected}, found {found}")]
    TypeMismatch { expected: Type, found: Type },
    #[error("no subterm at {0:?}")]
    BadPosition(Position),
    #[error("replacement term is not closed")]
    OpenReplacement,
    #[error("unbound de Bruijn index {0}")]
    UnboundIndex(u32),
}

impl Term {
    pub fn con(c: Const) -> Term {
        Term::Const(c)
    }

    pub fn param(name: &str, ty: Type) -> Term {
        Term::Const(Const::Param(name.into(), ty))
    }

    pub fn eq_const(tau: Type) -> Term {
        Term::Const(Const::Eq(tau))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Arc::new(f), Arc::new(a))
    }

    pub fn apps(head: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(head, Term::app)
    }

    pub fn lam(arg_ty: Type, body: Term) -> Term {
        Term::Lam(arg_ty, Arc::new(body))
    }

    /// The equation `l =^τ r`.
    pub fn prim_eq(tau: Type, l: Term, r: Term) -> Term {
        Term::apps(Term::eq_const(tau), [l, r])
    }

    /// Spine view: innermost head and the arguments applied to it.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut head = self;
        while let Term::App(f, a) = head {
            args.push(a.as_ref());
            head = f.as_ref();
        }
        args.reverse();
        (head, args)
    }

    /// Matches a fully applied primitive equation `l =^τ r`.
    pub fn match_eq(&self) -> Option<(&Term, &Term, &Type)> {
        if let Term::App(f, r) = self {
            if let Term::App(e, l) = f.as_ref() {
                if let Term::Const(Const::Eq(tau)) = e.as_ref() {
                    return Some((l, r, tau));
                }
            }
        }
        None
    }

    /// True if no dangling de Bruijn index and no free variable occurs.
    pub fn is_closed(&self) -> bool {
        fn go(t: &Term, depth: u32) -> bool {
            match t {
                Term::Const(_) => true,
                Term::Bound(i) => *i < depth,
                Term::Free(..) => false,
                Term::Lam(_, b) => go(b, depth + 1),
                Term::App(f, a) => go(f, depth) && go(a, depth),
            }
        }
        go(self, 0)
    }

    /// True if no de Bruijn index points above `depth` enclosing binders.
    pub fn is_locally_closed_at(&self, depth: u32) -> bool {
        match self {
            Term::Const(_) | Term::Free(..) => true,
            Term::Bound(i) => *i < depth,
            Term::Lam(_, b) => b.is_locally_closed_at(depth + 1),
            Term::App(f, a) => {
                f.is_locally_closed_at(depth) && a.is_locally_closed_at(depth)
            }
        }
    }

    pub fn free_vars(&self) -> Vec<(Arc<str>, Type)> {
        let mut out = Vec::new();
        fn go(t: &Term, out: &mut Vec<(Arc<str>, Type)>) {
            match t {
                Term::Free(n, ty) => {
                    if !out.iter().any(|(m, _)| m == n) {
                        out.push((n.clone(), ty.clone()));
                    }
                }
                Term::Lam(_, b) => go(b, out),
                Term::App(f, a) => {
                    go(f, out);
                    go(a, out);
                }
                _ => {}
            }
        }
        go(self, &mut out);
        out
    }

    /// Node count, used by resource caps.
    pub fn size(&self) -> usize {
        match self {
            Term::Const(_) | Term::Bound(_) | Term::Free(..) => 1,
            Term::Lam(_, b) => 1 + b.size(),
            Term::App(f, a) => 1 + f.size() + a.size(),
        }
    }

    /// Type of the term, or a kernel error pointing at the offending node.
    pub fn typecheck(&self) -> Result<Type, KernelError> {
        fn go(t: &Term, env: &mut Vec<Type>, path: &mut Vec<Step>) -> Result<Type, KernelError> {
            match t {
                Term::Const(c) => Ok(c.ty()),
                Term::Free(_, ty) => Ok(ty.clone()),
                Term::Bound(i) => {
                    let idx = env.len().checked_sub(1 + *i as usize);
                    match idx.and_then(|k| env.get(k)) {
                        Some(ty) => Ok(ty.clone()),
                        None => Err(KernelError::UnboundIndex(*i)),
                    }
                }
                Term::Lam(arg, b) => {
                    env.push(arg.clone());
                    path.push(Step::UnderBinder);
                    let body_ty = go(b, env, path)?;
                    path.pop();
                    env.pop();
                    Ok(Type::fun(arg.clone(), body_ty))
                }
                Term::App(f, a) => {
                    path.push(Step::FunSide);
                    let fty = go(f, env, path)?;
                    path.pop();
                    path.push(Step::ArgSide);
                    let aty = go(a, env, path)?;
                    path.pop();
                    match fty.split_fun() {
                        Some((arg, ret)) if *arg == aty => Ok(ret.clone()),
                        Some((arg, _)) => Err(KernelError::IllTyped {
                            position: Position(path.clone()),
                            expected: arg.to_string(),
                            found: aty.to_string(),
                        }),
                        None => Err(KernelError::IllTyped {
                            position: Position(path.clone()),
                            expected: "function type".to_string(),
                            found: fty.to_string(),
                        }),
                    }
                }
            }
        }
        go(self, &mut Vec::new(), &mut Vec::new())
    }

    /// Shift dangling indices >= `cutoff` by `by`.
    pub(crate) fn shift_above(&self, cutoff: u32, by: i64) -> Term {
        match self {
            Term::Const(_) | Term::Free(..) => self.clone(),
            Term::Bound(i) => {
                if *i >= cutoff {
                    Term::Bound((*i as i64 + by) as u32)
                } else {
                    Term::Bound(*i)
                }
            }
            Term::Lam(ty, b) => Term::Lam(ty.clone(), Arc::new(b.shift_above(cutoff + 1, by))),
            Term::App(f, a) => Term::App(
                Arc::new(f.shift_above(cutoff, by)),
                Arc::new(a.shift_above(cutoff, by)),
            ),
        }
    }

    /// Replace `Bound(depth)` by `arg` (shifted), lowering deeper indices.
    pub(crate) fn open_with(&self, depth: u32, arg: &Term) -> Term {
        match self {
            Term::Const(_) | Term::Free(..) => self.clone(),
            Term::Bound(i) => {
                if *i == depth {
                    arg.shift_above(0, depth as i64)
                } else if *i > depth {
                    Term::Bound(i - 1)
                } else {
                    Term::Bound(*i)
                }
            }
            Term::Lam(ty, b) => Term::Lam(ty.clone(), Arc::new(b.open_with(depth + 1, arg))),
            Term::App(f, a) => Term::App(
                Arc::new(f.open_with(depth, arg)),
                Arc::new(a.open_with(depth, arg)),
            ),
        }
    }

    /// Capture-avoiding substitution of `sub` for the free variable `name`.
    ///
    /// Bound variables are nameless so no capture is possible; `sub` must be
    /// locally closed and of the variable's type.
    pub fn substitute(&self, name: &str, sub: &Term) -> Result<Term, KernelError> {
        let var_ty = self.free_vars().into_iter().find(|(n, _)| n.as_ref() == name);
        if let Some((_, ty)) = var_ty {
            let sub_ty = sub.typecheck()?;
            if sub_ty != ty {
                return Err(KernelError::TypeMismatch {
                    expected: ty,
                    found: sub_ty,
                });
            }
        }
        fn go(t: &Term, name: &str, sub: &Term) -> Term {
            match t {
                Term::Free(n, _) if n.as_ref() == name => sub.clone(),
                Term::Const(_) | Term::Bound(_) | Term::Free(..) => t.clone(),
                Term::Lam(ty, b) => Term::Lam(ty.clone(), Arc::new(go(b, name, sub))),
                Term::App(f, a) => {
                    Term::App(Arc::new(go(f, name, sub)), Arc::new(go(a, name, sub)))
                }
            }
        }
        Ok(go(self, name, sub))
    }

    pub fn subterm_at(&self, pos: &Position) -> Result<&Term, KernelError> {
        let mut t = self;
        for (i, step) in pos.0.iter().enumerate() {
            t = match (step, t) {
                (Step::FunSide, Term::App(f, _)) => f.as_ref(),
                (Step::ArgSide, Term::App(_, a)) => a.as_ref(),
                (Step::UnderBinder, Term::Lam(_, b)) => b.as_ref(),
                _ => return Err(KernelError::BadPosition(Position(pos.0[..=i].to_vec()))),
            };
        }
        Ok(t)
    }

    /// Replace the subterm at `pos` by the closed term `new`, which must have
    /// the same type as the subterm it replaces.
    pub fn replace_at(&self, pos: &Position, new: &Term) -> Result<Term, KernelError> {
        if !new.is_closed() {
            return Err(KernelError::OpenReplacement);
        }
        let old = self.subterm_at(pos)?;
        let new_ty = new.typecheck()?;
        let old_ty = type_in_context(self, pos, old)?;
        if new_ty != old_ty {
            return Err(KernelError::TypeMismatch {
                expected: old_ty,
                found: new_ty,
            });
        }
        fn go(t: &Term, steps: &[Step], new: &Term) -> Term {
            match steps.split_first() {
                None => new.clone(),
                Some((Step::FunSide, rest)) => {
                    if let Term::App(f, a) = t {
                        Term::App(Arc::new(go(f, rest, new)), a.clone())
                    } else {
                        unreachable!("validated by subterm_at")
                    }
                }
                Some((Step::ArgSide, rest)) => {
                    if let Term::App(f, a) = t {
                        Term::App(f.clone(), Arc::new(go(a, rest, new)))
                    } else {
                        unreachable!("validated by subterm_at")
                    }
                }
                Some((Step::UnderBinder, rest)) => {
                    if let Term::Lam(ty, b) = t {
                        Term::Lam(ty.clone(), Arc::new(go(b, rest, new)))
                    } else {
                        unreachable!("validated by subterm_at")
                    }
                }
            }
        }
        Ok(go(self, &pos.0, new))
    }

    /// All positions in leftmost-outermost (preorder) order, paired with the
    /// addressed subterm and the number of binders above it.
    pub fn positions(&self) -> Vec<(Position, &Term, u32)> {
        let mut out = Vec::new();
        fn go<'a>(
            t: &'a Term,
            path: &mut Vec<Step>,
            depth: u32,
            out: &mut Vec<(Position, &'a Term, u32)>,
        ) {
            out.push((Position(path.clone()), t, depth));
            match t {
                Term::App(f, a) => {
                    path.push(Step::FunSide);
                    go(f, path, depth, out);
                    path.pop();
                    path.push(Step::ArgSide);
                    go(a, path, depth, out);
                    path.pop();
                }
                Term::Lam(_, b) => {
                    path.push(Step::UnderBinder);
                    go(b, path, depth + 1, out);
                    path.pop();
                }
                _ => {}
            }
        }
        go(self, &mut Vec::new(), 0, &mut out);
        out
    }
}

/// Type of the subterm `old` of `whole` at `pos`, accounting for binders.
fn type_in_context(whole: &Term, pos: &Position, old: &Term) -> Result<Type, KernelError> {
    let mut env = Vec::new();
    let mut t = whole;
    for step in &pos.0 {
        match (step, t) {
            (Step::FunSide, Term::App(f, _)) => t = f.as_ref(),
            (Step::ArgSide, Term::App(_, a)) => t = a.as_ref(),
            (Step::UnderBinder, Term::Lam(ty, b)) => {
                env.push(ty.clone());
                t = b.as_ref();
            }
            _ => return Err(KernelError::BadPosition(pos.clone())),
        }
    }
    // Close the subterm over its binder context before typechecking.
    let mut closed = old.clone();
    for ty in env.iter().rev() {
        closed = Term::Lam(ty.clone(), Arc::new(closed));
    }
    let mut ty = closed.typecheck()?;
    for _ in 0..env.len() {
        ty = match ty.split_fun() {
            Some((_, ret)) => ret.clone(),
            None => unreachable!("lambda wrapper must produce a function type"),
        };
    }
    Ok(ty)
}
