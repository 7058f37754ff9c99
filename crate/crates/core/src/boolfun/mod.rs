//! Boolean functions as reduced ordered decision diagrams.
//!
//! A [`BddManager`] owns all nodes; [`Bdd`] values are plain handles into
//! it. Variables are ordered by id. Because nodes are hash-consed through a
//! unique table, two handles from the same manager are equal exactly when
//! they denote the same function.

mod truth_table;

pub use truth_table::TruthTable;

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::term::{Var, VarSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
#[error("variable {0:?} is not registered with this manager")]
pub struct UnknownVariable(pub Var);

/// Handle to a function owned by a [`BddManager`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bdd(u32);

impl Bdd {
    pub const FALSE: Bdd = Bdd(0);
    pub const TRUE: Bdd = Bdd(1);

    pub fn is_false(self) -> bool {
        self == Bdd::FALSE
    }

    pub fn is_true(self) -> bool {
        self == Bdd::TRUE
    }

    pub fn is_const(self) -> bool {
        self.0 < 2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Node {
    var: u32,
    lo: Bdd,
    hi: Bdd,
}

const TERMINAL: u32 = u32::MAX;

/// The common interface of the decision-diagram backend and the
/// truth-table oracle.
pub trait BoolAlgebra {
    type F: Copy + Eq + std::fmt::Debug;

    fn top(&mut self) -> Self::F;
    fn bot(&mut self) -> Self::F;
    fn var(&mut self, v: Var) -> Result<Self::F, UnknownVariable>;
    fn and(&mut self, f: Self::F, g: Self::F) -> Self::F;
    fn or(&mut self, f: Self::F, g: Self::F) -> Self::F;
    fn not(&mut self, f: Self::F) -> Self::F;
    fn restrict(&mut self, f: Self::F, v: Var, c: bool) -> Result<Self::F, UnknownVariable>;
    fn rename(&mut self, f: Self::F, from: Var, to: Var) -> Result<Self::F, UnknownVariable>;
    fn exists(&mut self, v: Var, f: Self::F) -> Result<Self::F, UnknownVariable>;
    fn eval(&self, f: Self::F, assignment: &dyn Fn(Var) -> bool) -> bool;
    fn entails(&mut self, f: Self::F, g: Self::F) -> bool;
    fn is_pos(&self, f: Self::F) -> bool;
    fn pos_part(&mut self, f: Self::F, vi: &VarSet) -> Result<Self::F, UnknownVariable>;
    fn true_set(&mut self, f: Self::F, vi: &VarSet) -> VarSet;
    fn false_set(&mut self, f: Self::F, vi: &VarSet) -> VarSet;

    fn iff(&mut self, f: Self::F, g: Self::F) -> Self::F {
        let a = self.and(f, g);
        let nf = self.not(f);
        let ng = self.not(g);
        let b = self.and(nf, ng);
        self.or(a, b)
    }

    fn implies(&mut self, f: Self::F, g: Self::F) -> Self::F {
        let nf = self.not(f);
        self.or(nf, g)
    }

    fn conj_vars(&mut self, vars: &VarSet) -> Result<Self::F, UnknownVariable> {
        let mut acc = self.top();
        for &v in vars.iter().rev() {
            let x = self.var(v)?;
            acc = self.and(x, acc);
        }
        Ok(acc)
    }

    fn exists_all(&mut self, vars: &VarSet, f: Self::F) -> Result<Self::F, UnknownVariable> {
        let mut acc = f;
        for &v in vars {
            acc = self.exists(v, acc)?;
        }
        Ok(acc)
    }
}

#[derive(Debug, Clone)]
pub struct BddManager {
    nodes: Vec<Node>,
    unique: HashMap<Node, Bdd>,
    ite_cache: HashMap<(Bdd, Bdd, Bdd), Bdd>,
    universe: Option<VarSet>,
}

impl Default for BddManager {
    fn default() -> Self {
        Self::new()
    }
}

impl BddManager {
    /// A manager accepting any variable.
    pub fn new() -> Self {
        let terminal = |b| Node {
            var: TERMINAL,
            lo: Bdd(b),
            hi: Bdd(b),
        };
        BddManager {
            nodes: vec![terminal(0), terminal(1)],
            unique: HashMap::new(),
            ite_cache: HashMap::new(),
            universe: None,
        }
    }

    /// A manager that rejects variables outside `universe`.
    pub fn with_universe(universe: VarSet) -> Self {
        BddManager {
            universe: Some(universe),
            ..Self::new()
        }
    }

    pub fn register(&mut self, v: Var) {
        if let Some(u) = &mut self.universe {
            u.insert(v);
        }
    }

    fn check(&self, v: Var) -> Result<(), UnknownVariable> {
        match &self.universe {
            Some(u) if !u.contains(&v) => Err(UnknownVariable(v)),
            _ => Ok(()),
        }
    }

    /// Total number of nodes allocated, terminals included.
    pub fn allocated(&self) -> usize {
        self.nodes.len()
    }

    fn node(&self, f: Bdd) -> Node {
        self.nodes[f.0 as usize]
    }

    fn top_var(&self, f: Bdd) -> u32 {
        self.node(f).var
    }

    fn mk(&mut self, var: u32, lo: Bdd, hi: Bdd) -> Bdd {
        if lo == hi {
            return lo;
        }
        let n = Node { var, lo, hi };
        if let Some(&b) = self.unique.get(&n) {
            return b;
        }
        let b = Bdd(self.nodes.len() as u32);
        self.nodes.push(n);
        self.unique.insert(n, b);
        b
    }

    fn cofactors(&self, f: Bdd, var: u32) -> (Bdd, Bdd) {
        let n = self.node(f);
        if n.var == var {
            (n.lo, n.hi)
        } else {
            (f, f)
        }
    }

    pub fn ite(&mut self, f: Bdd, g: Bdd, h: Bdd) -> Bdd {
        if f.is_true() {
            return g;
        }
        if f.is_false() {
            return h;
        }
        if g == h {
            return g;
        }
        if g.is_true() && h.is_false() {
            return f;
        }
        if let Some(&r) = self.ite_cache.get(&(f, g, h)) {
            return r;
        }
        let v = self.top_var(f).min(self.top_var(g)).min(self.top_var(h));
        let (f0, f1) = self.cofactors(f, v);
        let (g0, g1) = self.cofactors(g, v);
        let (h0, h1) = self.cofactors(h, v);
        let lo = self.ite(f0, g0, h0);
        let hi = self.ite(f1, g1, h1);
        let r = self.mk(v, lo, hi);
        self.ite_cache.insert((f, g, h), r);
        r
    }

    pub fn support(&self, f: Bdd) -> VarSet {
        let mut out = VarSet::new();
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![f];
        while let Some(g) = stack.pop() {
            if g.is_const() || !seen.insert(g) {
                continue;
            }
            let n = self.node(g);
            out.insert(Var(n.var));
            stack.push(n.lo);
            stack.push(n.hi);
        }
        out
    }

    /// Number of internal nodes reachable from `f`.
    pub fn size(&self, f: Bdd) -> usize {
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![f];
        while let Some(g) = stack.pop() {
            if g.is_const() || !seen.insert(g) {
                continue;
            }
            let n = self.node(g);
            stack.push(n.lo);
            stack.push(n.hi);
        }
        seen.len()
    }

    fn restrict_rec(&mut self, f: Bdd, var: u32, c: bool, memo: &mut HashMap<Bdd, Bdd>) -> Bdd {
        let n = self.node(f);
        if f.is_const() || n.var > var {
            return f;
        }
        if n.var == var {
            return if c { n.hi } else { n.lo };
        }
        if let Some(&r) = memo.get(&f) {
            return r;
        }
        let lo = self.restrict_rec(n.lo, var, c, memo);
        let hi = self.restrict_rec(n.hi, var, c, memo);
        let r = self.mk(n.var, lo, hi);
        memo.insert(f, r);
        r
    }

    /// Simultaneous renaming of variables in `f`.
    pub fn rename_map(&mut self, f: Bdd, map: &BTreeMap<Var, Var>) -> Result<Bdd, UnknownVariable> {
        for &to in map.values() {
            self.check(to)?;
        }
        let mut memo = HashMap::new();
        Ok(self.rename_rec(f, map, &mut memo))
    }

    fn rename_rec(&mut self, f: Bdd, map: &BTreeMap<Var, Var>, memo: &mut HashMap<Bdd, Bdd>) -> Bdd {
        if f.is_const() {
            return f;
        }
        if let Some(&r) = memo.get(&f) {
            return r;
        }
        let n = self.node(f);
        let lo = self.rename_rec(n.lo, map, memo);
        let hi = self.rename_rec(n.hi, map, memo);
        let v = map.get(&Var(n.var)).copied().unwrap_or(Var(n.var));
        let x = self.mk(v.0, Bdd::FALSE, Bdd::TRUE);
        let r = self.ite(x, hi, lo);
        memo.insert(f, r);
        r
    }

    fn exists_rec(&mut self, f: Bdd, vars: &VarSet, memo: &mut HashMap<Bdd, Bdd>) -> Bdd {
        if f.is_const() {
            return f;
        }
        let n = self.node(f);
        match vars.iter().next_back() {
            Some(last) if n.var > last.0 => return f,
            None => return f,
            _ => {}
        }
        if let Some(&r) = memo.get(&f) {
            return r;
        }
        let lo = self.exists_rec(n.lo, vars, memo);
        let hi = self.exists_rec(n.hi, vars, memo);
        let r = if vars.contains(&Var(n.var)) {
            self.ite(lo, Bdd::TRUE, hi)
        } else {
            self.mk(n.var, lo, hi)
        };
        memo.insert(f, r);
        r
    }

    /// `∃vars . f`, in one pass.
    pub fn exists_set(&mut self, vars: &VarSet, f: Bdd) -> Bdd {
        let mut memo = HashMap::new();
        self.exists_rec(f, vars, &mut memo)
    }

    /// Quantify away the least variable of the support until `f` has at most
    /// `budget` nodes. Returns the variables that were dropped.
    pub fn enforce_budget(&mut self, f: Bdd, budget: usize) -> (Bdd, Vec<Var>) {
        let mut f = f;
        let mut dropped = Vec::new();
        while self.size(f) > budget {
            let Some(&v) = self.support(f).iter().next() else {
                break;
            };
            f = self.exists_set(&[v].into(), f);
            dropped.push(v);
        }
        (f, dropped)
    }

    pub fn is_sat(&self, f: Bdd) -> bool {
        !f.is_false()
    }

    /// Disjoint cubes of `f`: one per path to the true terminal.
    pub fn cubes(&self, f: Bdd) -> Vec<Vec<(Var, bool)>> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        self.cubes_rec(f, &mut path, &mut out);
        out
    }

    fn cubes_rec(&self, f: Bdd, path: &mut Vec<(Var, bool)>, out: &mut Vec<Vec<(Var, bool)>>) {
        if f.is_false() {
            return;
        }
        if f.is_true() {
            out.push(path.clone());
            return;
        }
        let n = self.node(f);
        path.push((Var(n.var), false));
        self.cubes_rec(n.lo, path, out);
        path.pop();
        path.push((Var(n.var), true));
        self.cubes_rec(n.hi, path, out);
        path.pop();
    }

    /// Sum-of-products rendering, e.g. `x & ~y | z`.
    pub fn to_sop(&self, f: Bdd, name: &dyn Fn(Var) -> String) -> String {
        if f.is_false() {
            return "false".to_string();
        }
        if f.is_true() {
            return "true".to_string();
        }
        self.cubes(f)
            .into_iter()
            .map(|cube| {
                cube.into_iter()
                    .map(|(v, pos)| if pos { name(v) } else { format!("~{}", name(v)) })
                    .collect::<Vec<_>>()
                    .join(" & ")
            })
            .collect::<Vec<_>>()
            .join(" | ")
    }

    /// Truth table over `vars` as a bit string; position `i` holds the value
    /// at the assignment whose k-th variable is bit k of `i`.
    pub fn to_truth_table(&self, f: Bdd, vars: &[Var]) -> String {
        (0..1usize << vars.len())
            .map(|i| {
                let val = self.eval(f, &|v| {
                    vars.iter().position(|&w| w == v).is_some_and(|k| i >> k & 1 == 1)
                });
                if val {
                    '1'
                } else {
                    '0'
                }
            })
            .collect()
    }
}

impl BoolAlgebra for BddManager {
    type F = Bdd;

    fn top(&mut self) -> Bdd {
        Bdd::TRUE
    }

    fn bot(&mut self) -> Bdd {
        Bdd::FALSE
    }

    fn var(&mut self, v: Var) -> Result<Bdd, UnknownVariable> {
        self.check(v)?;
        Ok(self.mk(v.0, Bdd::FALSE, Bdd::TRUE))
    }

    fn and(&mut self, f: Bdd, g: Bdd) -> Bdd {
        self.ite(f, g, Bdd::FALSE)
    }

    fn or(&mut self, f: Bdd, g: Bdd) -> Bdd {
        self.ite(f, Bdd::TRUE, g)
    }

    fn not(&mut self, f: Bdd) -> Bdd {
        self.ite(f, Bdd::FALSE, Bdd::TRUE)
    }

    fn restrict(&mut self, f: Bdd, v: Var, c: bool) -> Result<Bdd, UnknownVariable> {
        self.check(v)?;
        let mut memo = HashMap::new();
        Ok(self.restrict_rec(f, v.0, c, &mut memo))
    }

    fn rename(&mut self, f: Bdd, from: Var, to: Var) -> Result<Bdd, UnknownVariable> {
        self.check(from)?;
        self.rename_map(f, &[(from, to)].into())
    }

    fn exists(&mut self, v: Var, f: Bdd) -> Result<Bdd, UnknownVariable> {
        self.check(v)?;
        Ok(self.exists_set(&[v].into(), f))
    }

    fn exists_all(&mut self, vars: &VarSet, f: Bdd) -> Result<Bdd, UnknownVariable> {
        for &v in vars {
            self.check(v)?;
        }
        Ok(self.exists_set(vars, f))
    }

    fn eval(&self, f: Bdd, assignment: &dyn Fn(Var) -> bool) -> bool {
        let mut g = f;
        while !g.is_const() {
            let n = self.node(g);
            g = if assignment(Var(n.var)) { n.hi } else { n.lo };
        }
        g.is_true()
    }

    fn entails(&mut self, f: Bdd, g: Bdd) -> bool {
        let ng = self.not(g);
        self.and(f, ng).is_false()
    }

    fn is_pos(&self, f: Bdd) -> bool {
        self.eval(f, &|_| true)
    }

    fn pos_part(&mut self, f: Bdd, vi: &VarSet) -> Result<Bdd, UnknownVariable> {
        let all = self.conj_vars(vi)?;
        Ok(self.or(f, all))
    }

    fn true_set(&mut self, f: Bdd, vi: &VarSet) -> VarSet {
        if f.is_false() {
            return vi.clone();
        }
        let support = self.support(f);
        vi.iter()
            .copied()
            .filter(|&v| support.contains(&v) && self.restrict_rec(f, v.0, false, &mut HashMap::new()).is_false())
            .collect()
    }

    fn false_set(&mut self, f: Bdd, vi: &VarSet) -> VarSet {
        if f.is_false() {
            return vi.clone();
        }
        let support = self.support(f);
        vi.iter()
            .copied()
            .filter(|&v| support.contains(&v) && self.restrict_rec(f, v.0, true, &mut HashMap::new()).is_false())
            .collect()
    }
}
