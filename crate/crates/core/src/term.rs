//! Variables, finite terms and the variable registry.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

/// An interned variable. Equality is identity of the id.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub u32);

impl Var {
    pub fn id(self) -> u32 {
        self.0
    }
}

pub type VarSet = BTreeSet<Var>;

/// Per-analysis table of variables and their printable names.
///
/// `intern` reuses an existing variable with the same name, `fresh` always
/// allocates a new one. Parsed clauses use `fresh` so that every clause gets
/// its own variables even when the source names coincide.
#[derive(Clone, Debug, Default)]
pub struct VarRegistry {
    names: Vec<String>,
    by_name: HashMap<String, Var>,
}

impl VarRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn fresh(&mut self, name: impl Into<String>) -> Var {
        let v = Var(self.names.len() as u32);
        let name = name.into();
        self.by_name.entry(name.clone()).or_insert(v);
        self.names.push(name);
        v
    }

    pub fn intern(&mut self, name: &str) -> Var {
        if let Some(&v) = self.by_name.get(name) {
            return v;
        }
        self.fresh(name)
    }

    pub fn lookup(&self, name: &str) -> Option<Var> {
        self.by_name.get(name).copied()
    }

    pub fn name(&self, v: Var) -> &str {
        self.names
            .get(v.0 as usize)
            .map(String::as_str)
            .unwrap_or("_")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Printable name that is unique even when source names collide.
    pub fn display_name(&self, v: Var) -> String {
        let name = self.name(v);
        match self.by_name.get(name) {
            Some(&w) if w == v => name.to_string(),
            _ => format!("{}_{}", name, v.0),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Compound {
    pub name: Arc<str>,
    pub args: Vec<Term>,
}

/// A finite term: a variable or a functor applied to `rank` arguments.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(Var),
    App(Arc<Compound>),
}

impl From<Var> for Term {
    fn from(v: Var) -> Self {
        Term::Var(v)
    }
}

impl Term {
    pub fn var(v: Var) -> Term {
        Term::Var(v)
    }

    pub fn atom(name: &str) -> Term {
        Term::app(name, Vec::new())
    }

    pub fn app(name: &str, args: Vec<Term>) -> Term {
        Term::App(Arc::new(Compound {
            name: Arc::from(name),
            args,
        }))
    }

    pub fn as_var(&self) -> Option<Var> {
        match self {
            Term::Var(v) => Some(*v),
            Term::App(_) => None,
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn functor(&self) -> Option<(&str, usize)> {
        match self {
            Term::Var(_) => None,
            Term::App(c) => Some((&c.name, c.args.len())),
        }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::Var(_) => &[],
            Term::App(c) => &c.args,
        }
    }

    /// Set of variables occurring in the term.
    pub fn vars(&self) -> VarSet {
        let mut out = VarSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn collect_vars(&self, out: &mut VarSet) {
        match self {
            Term::Var(v) => {
                out.insert(*v);
            }
            Term::App(c) => c.args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    /// Multiset of variables: occurrence count per variable.
    pub fn mvars(&self) -> BTreeMap<Var, usize> {
        let mut out = BTreeMap::new();
        self.collect_mvars(&mut out);
        out
    }

    fn collect_mvars(&self, out: &mut BTreeMap<Var, usize>) {
        match self {
            Term::Var(v) => *out.entry(*v).or_insert(0) += 1,
            Term::App(c) => c.args.iter().for_each(|a| a.collect_mvars(out)),
        }
    }

    pub fn occurs(&self, v: Var) -> bool {
        match self {
            Term::Var(w) => *w == v,
            Term::App(c) => c.args.iter().any(|a| a.occurs(v)),
        }
    }

    /// 1 for a variable, 1 + sum of argument sizes for a compound.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(c) => 1 + c.args.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(c) => c.args.iter().all(Term::is_ground),
        }
    }

    /// Replace every variable through `f` in a single simultaneous pass.
    pub fn map_vars(&self, f: &mut impl FnMut(Var) -> Term) -> Term {
        match self {
            Term::Var(v) => f(*v),
            Term::App(c) => {
                if c.args.is_empty() {
                    return self.clone();
                }
                let args = c.args.iter().map(|a| a.map_vars(f)).collect();
                Term::App(Arc::new(Compound {
                    name: c.name.clone(),
                    args,
                }))
            }
        }
    }

    pub fn rename(&self, map: &BTreeMap<Var, Var>) -> Term {
        self.map_vars(&mut |v| Term::Var(map.get(&v).copied().unwrap_or(v)))
    }

    pub fn display<'a>(&'a self, reg: &'a VarRegistry) -> TermDisplay<'a> {
        TermDisplay { term: self, reg }
    }
}

/// Variables and occurrence counts of a term.
pub fn term_vars(t: &Term) -> (VarSet, BTreeMap<Var, usize>) {
    let counts = t.mvars();
    let vars = counts.keys().copied().collect();
    (vars, counts)
}

/// `y` occurs exactly once in `t`.
pub fn occ_lin(y: Var, t: &Term) -> bool {
    t.mvars().get(&y) == Some(&1)
}

/// Variables occurring more than once in `t`.
pub fn nlvars(t: &Term) -> VarSet {
    t.mvars()
        .into_iter()
        .filter(|&(_, n)| n > 1)
        .map(|(v, _)| v)
        .collect()
}

pub struct TermDisplay<'a> {
    term: &'a Term,
    reg: &'a VarRegistry,
}

fn needs_quotes(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        None => true,
        Some(c) if c.is_ascii_lowercase() => !chars.all(|c| c.is_alphanumeric() || c == '_'),
        Some(c) if c.is_ascii_digit() => !name.chars().all(|c| c.is_ascii_digit()),
        Some(_) => !matches!(name, "[]" | "!" | ";"),
    }
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.term {
            Term::Var(v) => write!(f, "{}", self.reg.display_name(*v)),
            Term::App(c) => {
                if needs_quotes(&c.name) {
                    write!(f, "'{}'", c.name.replace('\'', "\\'"))?;
                } else {
                    write!(f, "{}", c.name)?;
                }
                if !c.args.is_empty() {
                    write!(f, "(")?;
                    for (i, a) in c.args.iter().enumerate() {
                        if i > 0 {
                            write!(f, ", ")?;
                        }
                        write!(f, "{}", a.display(self.reg))?;
                    }
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

/// Render a variable set as `{X, Y}` using registry names.
pub fn fmt_varset(set: &VarSet, reg: &VarRegistry) -> String {
    let names: Vec<String> = set.iter().map(|&v| reg.display_name(v)).collect();
    format!("{{{}}}", names.join(","))
}
