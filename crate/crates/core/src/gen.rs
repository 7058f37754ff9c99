//! Seeded random generators for terms, solved forms and programs, used by the
//! property and soundness tests.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::subst::RSubst;
use crate::term::{Term, Var};

/// Term shapes to draw from: constants, functors with arities, maximum depth.
#[derive(Clone, Debug)]
pub struct TermPool {
    pub constants: Vec<&'static str>,
    pub functors: Vec<(&'static str, usize)>,
    pub max_depth: usize,
}

impl Default for TermPool {
    fn default() -> Self {
        TermPool {
            constants: vec!["a", "b"],
            functors: vec![("f", 1), ("g", 2), ("h", 2)],
            max_depth: 3,
        }
    }
}

impl TermPool {
    pub fn random_term<R: Rng>(&self, vars: &[Var], rng: &mut R) -> Term {
        let depth = rng.gen_range(0..=self.max_depth);
        self.term_of_depth(vars, depth, rng)
    }

    fn term_of_depth<R: Rng>(&self, vars: &[Var], depth: usize, rng: &mut R) -> Term {
        if depth == 0 || rng.gen_bool(0.25) {
            if !vars.is_empty() && (self.constants.is_empty() || rng.gen_bool(0.7)) {
                return Term::Var(*vars.choose(rng).unwrap());
            }
            return Term::atom(self.constants.choose(rng).unwrap());
        }
        let &(name, arity) = self.functors.choose(rng).unwrap();
        let args = (0..arity)
            .map(|_| self.term_of_depth(vars, depth - 1, rng))
            .collect();
        Term::app(name, args)
    }

    /// Right-hand side for a random equation `y = t`, biased to produce
    /// cycles through `y` now and then.
    pub fn random_binding_rhs<R: Rng>(&self, y: Var, vars: &[Var], rng: &mut R) -> Term {
        if rng.gen_bool(0.15) {
            let &(name, arity) = self.functors.choose(rng).unwrap();
            let pos = rng.gen_range(0..arity);
            let args = (0..arity)
                .map(|i| {
                    if i == pos {
                        Term::Var(y)
                    } else {
                        self.term_of_depth(vars, 1, rng)
                    }
                })
                .collect();
            return Term::app(name, args);
        }
        self.random_term(vars, rng)
    }

    /// A random rational solved form over `vars`. Bindings are drawn for a
    /// random subset of the variables; chains of variable bindings that
    /// would close a loop are dropped.
    pub fn random_rsubst<R: Rng>(&self, vars: &[Var], rng: &mut R) -> RSubst {
        let mut map = std::collections::BTreeMap::new();
        for &y in vars {
            if !rng.gen_bool(0.5) {
                continue;
            }
            let t = self.random_term(vars, rng);
            if t == Term::Var(y) {
                continue;
            }
            map.insert(y, t);
            if var_chain_loops(&map, y) {
                map.remove(&y);
            }
        }
        RSubst::from_map_unchecked(map)
    }
}

fn var_chain_loops(map: &std::collections::BTreeMap<Var, Term>, start: Var) -> bool {
    let mut cur = start;
    for _ in 0..=map.len() {
        match map.get(&cur) {
            Some(Term::Var(next)) => {
                if *next == start {
                    return true;
                }
                cur = *next;
            }
            _ => return false,
        }
    }
    false
}
