//! Programs, clauses and goals.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::term::{Term, Var, VarRegistry, VarSet};

/// Predicate indicator `name/arity`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PredId {
    pub name: Arc<str>,
    pub arity: usize,
}

impl PredId {
    pub fn new(name: &str, arity: usize) -> Self {
        PredId {
            name: Arc::from(name),
            arity,
        }
    }

    /// Parse `name/arity`.
    pub fn parse(s: &str) -> Option<Self> {
        let (name, arity) = s.rsplit_once('/')?;
        if name.is_empty() {
            return None;
        }
        Some(PredId::new(name, arity.parse().ok()?))
    }
}

impl fmt::Display for PredId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Goal {
    Unify(Term, Term),
    Call { pred: PredId, args: Vec<Term> },
}

impl Goal {
    pub fn vars(&self) -> VarSet {
        let mut out = VarSet::new();
        match self {
            Goal::Unify(s, t) => {
                s.collect_vars(&mut out);
                t.collect_vars(&mut out);
            }
            Goal::Call { args, .. } => args.iter().for_each(|a| a.collect_vars(&mut out)),
        }
        out
    }

    /// Build a goal from a term: `=(S, T)` is a unification, anything else a
    /// call. A bare variable becomes a call to `call/1`.
    pub fn from_term(t: Term) -> Goal {
        match &t {
            Term::App(c) if &*c.name == "=" && c.args.len() == 2 => Goal::Unify(c.args[0].clone(), c.args[1].clone()),
            Term::App(c) => Goal::Call {
                pred: PredId::new(&c.name, c.args.len()),
                args: c.args.clone(),
            },
            Term::Var(_) => Goal::Call {
                pred: PredId::new("call", 1),
                args: vec![t],
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clause {
    pub pred: PredId,
    pub head: Vec<Term>,
    pub body: Vec<Goal>,
    /// Clause variables in order of first occurrence.
    pub vars: Vec<Var>,
    pub line: usize,
}

#[derive(Clone, Debug, Default)]
pub struct Program {
    pub reg: VarRegistry,
    pub clauses: Vec<Clause>,
    /// Clause indices per predicate, in source order.
    pub index: BTreeMap<PredId, Vec<usize>>,
}

impl Program {
    pub fn add_clause(&mut self, c: Clause) {
        self.index.entry(c.pred.clone()).or_default().push(self.clauses.len());
        self.clauses.push(c);
    }

    pub fn clauses_of(&self, p: &PredId) -> impl Iterator<Item = &Clause> {
        self.index.get(p).into_iter().flatten().map(|&i| &self.clauses[i])
    }

    pub fn defines(&self, p: &PredId) -> bool {
        self.index.contains_key(p)
    }

    pub fn predicates(&self) -> impl Iterator<Item = &PredId> {
        self.index.keys()
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let reg = &self.reg;
        for c in &self.clauses {
            write!(f, "{}", Term::app(&c.pred.name, c.head.clone()).display(reg))?;
            for (i, g) in c.body.iter().enumerate() {
                write!(f, "{}", if i == 0 { " :- " } else { ", " })?;
                match g {
                    Goal::Unify(s, t) => write!(f, "{} = {}", s.display(reg), t.display(reg))?,
                    Goal::Call { pred, args } => write!(f, "{}", Term::app(&pred.name, args.clone()).display(reg))?,
                }
            }
            writeln!(f, ".")?;
        }
        Ok(())
    }
}
