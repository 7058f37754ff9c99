//! Substitutions in rational solved form and their normalization to
//! variable-idempotent form.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::term::{Term, Var, VarRegistry, VarSet};

/// `lhs ↦ rhs` with `rhs ≠ lhs`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Binding {
    pub lhs: Var,
    pub rhs: Term,
}

impl Binding {
    pub fn new(lhs: Var, rhs: Term) -> Self {
        Binding { lhs, rhs }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SubstError {
    #[error("variable {0:?} is bound more than once")]
    DuplicateDomainVar(Var),
    #[error("identity binding for {0:?}")]
    IdentityBinding(Var),
    #[error("circular variable chain through {0:?}")]
    CircularVariableChain(Var),
}

/// A substitution in rational solved form: finitely many non-identity
/// bindings with pairwise distinct left-hand sides and no circular subset
/// of variable-to-variable bindings.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RSubst {
    map: BTreeMap<Var, Term>,
}

/// Validate a set of bindings.
pub fn check_rsubst(bindings: impl IntoIterator<Item = Binding>) -> Result<RSubst, SubstError> {
    let mut map = BTreeMap::new();
    for b in bindings {
        if b.rhs == Term::Var(b.lhs) {
            return Err(SubstError::IdentityBinding(b.lhs));
        }
        if map.insert(b.lhs, b.rhs).is_some() {
            return Err(SubstError::DuplicateDomainVar(b.lhs));
        }
    }
    // Variable-to-variable bindings form a partial function; any cycle in it
    // is a circular subset.
    for &start in map.keys() {
        let mut cur = start;
        let mut steps = 0;
        while let Some(Term::Var(next)) = map.get(&cur) {
            cur = *next;
            steps += 1;
            if cur == start || steps > map.len() {
                return Err(SubstError::CircularVariableChain(start));
            }
        }
    }
    Ok(RSubst { map })
}

impl RSubst {
    pub fn empty() -> Self {
        RSubst::default()
    }

    /// Build from bindings already known to be in rational solved form.
    pub(crate) fn from_map_unchecked(map: BTreeMap<Var, Term>) -> Self {
        debug_assert!(check_rsubst(map.clone().into_iter().map(|(l, r)| Binding::new(l, r))).is_ok());
        RSubst { map }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn get(&self, v: Var) -> Option<&Term> {
        self.map.get(&v)
    }

    pub fn in_dom(&self, v: Var) -> bool {
        self.map.contains_key(&v)
    }

    pub fn dom(&self) -> VarSet {
        self.map.keys().copied().collect()
    }

    /// All variables occurring in the bindings.
    pub fn vars(&self) -> VarSet {
        let mut out = self.dom();
        for t in self.map.values() {
            t.collect_vars(&mut out);
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, &Term)> {
        self.map.iter().map(|(&v, t)| (v, t))
    }

    pub fn bindings(&self) -> Vec<Binding> {
        self.iter().map(|(v, t)| Binding::new(v, t.clone())).collect()
    }

    /// The bindings read as equations `x = t`.
    pub fn equations(&self) -> Vec<(Term, Term)> {
        self.iter().map(|(v, t)| (Term::Var(v), t.clone())).collect()
    }

    /// `xσ`: the image of a variable (itself outside the domain).
    pub fn image(&self, v: Var) -> Term {
        self.map.get(&v).cloned().unwrap_or(Term::Var(v))
    }

    /// Single simultaneous application `tσ`.
    pub fn apply(&self, t: &Term) -> Term {
        t.map_vars(&mut |v| self.image(v))
    }

    /// `tσⁱ`.
    pub fn apply_n(&self, t: &Term, n: usize) -> Term {
        (0..n).fold(t.clone(), |acc, _| self.apply(&acc))
    }

    /// Restriction of the substitution to the bindings whose left-hand side
    /// is in `keep`. Any subset of a solved form is again in solved form.
    pub fn restrict(&self, keep: &VarSet) -> RSubst {
        RSubst {
            map: self
                .map
                .iter()
                .filter(|(v, _)| keep.contains(v))
                .map(|(&v, t)| (v, t.clone()))
                .collect(),
        }
    }

    /// `vars(tσσ) = vars(tσ)` for every term, checked on the domain
    /// variables (which is sufficient since vars distribute over terms).
    pub fn is_variable_idempotent(&self) -> bool {
        self.map.keys().all(|&y| {
            let once = self.image(y);
            let twice = self.apply(&once);
            once.vars() == twice.vars()
        })
    }

    pub fn display<'a>(&'a self, reg: &'a VarRegistry) -> SubstDisplay<'a> {
        SubstDisplay { subst: self, reg }
    }
}

pub struct SubstDisplay<'a> {
    subst: &'a RSubst,
    reg: &'a VarRegistry,
}

impl fmt::Display for SubstDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (v, t)) in self.subst.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{} -> {}", self.reg.display_name(v), t.display(self.reg))?;
        }
        write!(f, "}}")
    }
}

/// Rewrite by S-steps into a strongly variable-idempotent substitution.
///
/// A step replaces `y ↦ s` by `y ↦ s{x ↦ t}` for another binding `x ↦ t`.
/// Domain variables are eliminated in id order: `x ↦ t` is substituted into
/// every other binding that mentions `x`. Afterwards a domain variable
/// occurs in a right-hand side only if it occurs in its own binding, and
/// then its binding's variables are contained in that right-hand side. This
/// makes the result, and every subset of it, variable-idempotent.
pub fn s_normalize(sigma: &RSubst) -> RSubst {
    let mut map = sigma.map.clone();
    let dom: Vec<Var> = map.keys().copied().collect();
    for &x in &dom {
        let t = map[&x].clone();
        for &y in &dom {
            if y != x && map[&y].occurs(x) {
                let s = map[&y].map_vars(&mut |v| if v == x { t.clone() } else { Term::Var(v) });
                map.insert(y, s);
            }
        }
    }
    let out = RSubst { map };
    debug_assert!(out.is_variable_idempotent());
    out
}

/// `τ ∘ σ`, with `(τ ∘ σ)(t) = tστ`.
#[cfg(test)]
pub(crate) fn compose(tau: &RSubst, sigma: &RSubst) -> BTreeMap<Var, Term> {
    let mut dom = sigma.dom();
    dom.extend(tau.dom());
    dom.into_iter()
        .filter_map(|x| {
            let img = tau.apply(&sigma.image(x));
            (img != Term::Var(x)).then_some((x, img))
        })
        .collect()
}
