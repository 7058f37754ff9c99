//! Bottom-up abstract fixpoint over the product of finiteness, sharing,
//! finite-tree dependencies and groundness dependencies.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use thiserror::Error;

use crate::boolfun::{Bdd, BddManager, BoolAlgebra};
use crate::deps::{self, Fired};
use crate::hp::{amgu_h, HSet};
use crate::program::{Goal, PredId, Program};
use crate::sfl::{rel_bar, star, SflElement};
use crate::term::{fmt_varset, Term, Var, VarRegistry, VarSet};

/// Which components beyond finiteness and sharing are computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Domain {
    Hp,
    HpFd,
    #[default]
    HpFdGd,
}

impl Domain {
    pub fn fd(self) -> bool {
        !matches!(self, Domain::Hp)
    }

    pub fn gd(self) -> bool {
        matches!(self, Domain::HpFdGd)
    }
}

#[derive(Clone, Debug)]
pub struct Options {
    pub domain: Domain,
    pub max_iterations: usize,
    pub node_budget: usize,
    /// Calls to undefined, non-builtin predicates are errors instead of
    /// being havoc'd.
    pub strict: bool,
    pub trace: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            domain: Domain::HpFdGd,
            max_iterations: 100,
            node_budget: 1_000_000,
            strict: false,
            trace: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("unknown predicate {0}")]
    UnknownPredicate(PredId),
}

/// A reachable abstract state over the variables `vi`. Unreachable program
/// points are represented by `None` wherever an `Option<AbsState>` is used.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbsState {
    pub vi: VarSet,
    pub h: HSet,
    pub p: SflElement,
    pub phi: Bdd,
    pub psi: Bdd,
}

impl AbsState {
    /// Fresh, unbound variables: all finite, free, linear and independent.
    pub fn initial(vi: &VarSet) -> Self {
        AbsState {
            vi: vi.clone(),
            h: vi.clone(),
            p: SflElement::top_free(vi),
            phi: Bdd::TRUE,
            psi: Bdd::TRUE,
        }
    }

    /// No information at all.
    pub fn top(vi: &VarSet) -> Self {
        AbsState {
            vi: vi.clone(),
            h: HSet::new(),
            p: SflElement::top(vi),
            phi: Bdd::TRUE,
            psi: Bdd::TRUE,
        }
    }

    pub fn display<'a>(&'a self, m: &'a BddManager, reg: &'a VarRegistry) -> StateDisplay<'a> {
        StateDisplay { s: self, m, reg }
    }
}

pub struct StateDisplay<'a> {
    s: &'a AbsState,
    m: &'a BddManager,
    reg: &'a VarRegistry,
}

impl fmt::Display for StateDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = |v: Var| self.reg.display_name(v);
        write!(
            f,
            "h={} | {} | fd={} | gd={}",
            fmt_varset(&self.s.h, self.reg),
            self.s.p.display(self.reg),
            self.m.to_sop(self.s.phi, &name),
            self.m.to_sop(self.s.psi, &name)
        )
    }
}

/// Abstract operations shared by the engine and the builtin table.
pub struct Ops {
    pub m: BddManager,
    pub domain: Domain,
    pub node_budget: usize,
    pub warnings: BTreeSet<String>,
    fired: Fired,
}

impl Ops {
    pub fn new(domain: Domain, node_budget: usize) -> Self {
        Ops {
            m: BddManager::new(),
            domain,
            node_budget,
            warnings: BTreeSet::new(),
            fired: Fired::default(),
        }
    }

    fn conj(&mut self, vars: &VarSet) -> Bdd {
        self.m.conj_vars(vars).expect("unrestricted manager")
    }

    fn check(&self, s: AbsState) -> Option<AbsState> {
        if s.p.is_bottom() || s.phi.is_false() || s.psi.is_false() {
            None
        } else {
            Some(s)
        }
    }

    /// Apply the binding `x ↦ t` to every component.
    pub fn bind(&mut self, s: AbsState, x: Var, t: &Term) -> Option<AbsState> {
        let h = amgu_h(&s.h, &s.p, x, t);
        let p = s.p.amgu(x, t);
        let phi = if self.domain.fd() {
            deps::amgu_fd(&mut self.m, s.phi, x, t).expect("unrestricted manager")
        } else {
            s.phi
        };
        let psi = if self.domain.gd() {
            deps::amgu_gd(&mut self.m, s.psi, x, t).expect("unrestricted manager")
        } else {
            s.psi
        };
        self.check(AbsState { vi: s.vi, h, p, phi, psi })
    }

    /// Solve `s = t` by decomposition into bindings. A functor clash makes
    /// the point unreachable.
    pub fn unify(&mut self, state: AbsState, s: &Term, t: &Term) -> Option<AbsState> {
        let mut state = state;
        let mut pending = vec![(s.clone(), t.clone())];
        while let Some((a, b)) = pending.pop() {
            match (&a, &b) {
                (Term::Var(x), Term::Var(y)) if x == y => {}
                (Term::Var(x), _) => state = self.bind(state, *x, &b)?,
                (_, Term::Var(y)) => state = self.bind(state, *y, &a)?,
                (Term::App(ca), Term::App(cb)) => {
                    if ca.name != cb.name || ca.args.len() != cb.args.len() {
                        return None;
                    }
                    pending.extend(ca.args.iter().cloned().zip(cb.args.iter().cloned()).rev());
                }
            }
        }
        Some(state)
    }

    /// Project `x` away and drop it from the variables of interest.
    pub fn project(&mut self, s: AbsState, x: Var) -> AbsState {
        let mut vi = s.vi;
        vi.remove(&x);
        let mut h = s.h;
        h.remove(&x);
        let p = s.p.project(x).remove_var(x);
        let phi = self.m.exists_set(&[x].into(), s.phi);
        let psi = self.m.exists_set(&[x].into(), s.psi);
        AbsState { vi, h, p, phi, psi }
    }

    pub fn merge(&mut self, a: Option<AbsState>, b: Option<AbsState>) -> Option<AbsState> {
        match (a, b) {
            (None, x) | (x, None) => x,
            (Some(a), Some(b)) => {
                debug_assert_eq!(a.vi, b.vi);
                Some(AbsState {
                    h: a.h.intersection(&b.h).copied().collect(),
                    p: a.p.merge(&b.p),
                    phi: self.m.or(a.phi, b.phi),
                    psi: self.m.or(a.psi, b.psi),
                    vi: a.vi,
                })
            }
        }
    }

    /// Apply the reductions between finiteness and the dependency
    /// components until nothing changes.
    pub fn reduce(&mut self, s: AbsState) -> Option<AbsState> {
        if !self.domain.fd() {
            return Some(s);
        }
        let hv = self.conj(&s.h);
        if self.m.and(s.phi, hv).is_false() {
            return None;
        }
        let (h, phi, psi, fired) =
            deps::reduce_all(&mut self.m, &s.h, s.phi, s.psi, &s.vi, self.domain.gd()).expect("unrestricted manager");
        self.fired.absorb(fired);
        self.check(AbsState { h, phi, psi, ..s })
    }

    /// The variables in `vars` are known to be finite now.
    pub fn make_finite(&mut self, s: AbsState, vars: &VarSet) -> Option<AbsState> {
        let mut s = s;
        s.h.extend(vars.iter().copied());
        self.reduce(s)
    }

    /// The variables in `vars` are ground now; when `finite` also holds,
    /// they are bound to finite ground terms for good.
    pub fn make_ground(&mut self, s: AbsState, vars: &VarSet, finite: bool) -> Option<AbsState> {
        if !vars.is_disjoint(s.p.free()) {
            return None;
        }
        let sh = rel_bar(vars, s.p.sh());
        let p = SflElement::new(&s.vi, sh, s.p.free().clone(), s.p.linear().clone());
        let mut out = AbsState { p, ..s };
        let c = self.conj(vars);
        if self.domain.gd() {
            out.psi = self.m.and(out.psi, c);
        }
        if finite {
            out.h.extend(vars.iter().copied());
            if self.domain.fd() {
                out.phi = self.m.and(out.phi, c);
            }
        }
        let out = self.check(out)?;
        self.reduce(out)
    }

    /// Forget everything about the goal variables and whatever shares with
    /// them.
    pub fn havoc(&mut self, s: AbsState, goal_vars: &VarSet) -> Option<AbsState> {
        let mut touched = goal_vars.clone();
        for &v in goal_vars {
            touched.extend(s.p.share_with(&Term::Var(v)));
        }
        let rel: crate::sfl::SharingSet = s.p.sh().iter().filter(|g| !g.is_disjoint(&touched)).cloned().collect();
        let mut sh = rel_bar(&touched, s.p.sh());
        sh.extend(star(&rel));
        let minus = |a: &VarSet| -> VarSet { a.difference(&touched).copied().collect() };
        let p = SflElement::new(&s.vi, sh, minus(s.p.free()), minus(s.p.linear()));
        let h = minus(&s.h);
        let phi = self.m.exists_set(&touched, s.phi);
        let psi = self.m.exists_set(&touched, s.psi);
        self.check(AbsState { vi: s.vi, h, p, phi, psi })
    }

    pub fn warn(&mut self, msg: impl Into<String>) {
        self.warnings.insert(msg.into());
    }

    fn take_fired(&mut self) -> Fired {
        std::mem::take(&mut self.fired)
    }

    /// Reductions that made progress since the last summary update or
    /// specialization started.
    pub fn last_fired(&self) -> Fired {
        self.fired
    }
}

/// Transfer function of a builtin predicate.
pub type BuiltinFn = fn(&mut Ops, AbsState, &[Term]) -> Option<AbsState>;

fn vars_of(args: &[Term]) -> VarSet {
    let mut out = VarSet::new();
    args.iter().for_each(|a| a.collect_vars(&mut out));
    out
}

fn bi_true(_: &mut Ops, s: AbsState, _: &[Term]) -> Option<AbsState> {
    Some(s)
}

fn bi_fail(_: &mut Ops, _: AbsState, _: &[Term]) -> Option<AbsState> {
    None
}

fn bi_acyclic(ops: &mut Ops, s: AbsState, args: &[Term]) -> Option<AbsState> {
    ops.make_finite(s, &vars_of(args))
}

fn bi_unify_oc(ops: &mut Ops, s: AbsState, args: &[Term]) -> Option<AbsState> {
    // Finite inputs stay finite under occurs-checked unification, and so
    // does everything that was finite before.
    let inputs_finite = vars_of(args).is_subset(&s.h);
    let before = s.h.clone();
    let mut out = ops.unify(s, &args[0], &args[1])?;
    if inputs_finite {
        out.h.extend(before);
        return ops.reduce(out);
    }
    Some(out)
}

fn bi_var(ops: &mut Ops, s: AbsState, args: &[Term]) -> Option<AbsState> {
    let x = args[0].as_var()?;
    if s.p.ground(&Term::Var(x)) {
        return None;
    }
    let mut f = s.p.free().clone();
    f.insert(x);
    let p = SflElement::new(&s.vi, s.p.sh().clone(), f, s.p.linear().clone());
    let mut out = AbsState { p, ..s };
    out.h.insert(x);
    ops.reduce(out)
}

fn bi_ground(ops: &mut Ops, s: AbsState, args: &[Term]) -> Option<AbsState> {
    ops.make_ground(s, &vars_of(args), false)
}

fn bi_atomic(ops: &mut Ops, s: AbsState, args: &[Term]) -> Option<AbsState> {
    match &args[0] {
        Term::App(c) if !c.args.is_empty() => None,
        Term::App(_) => Some(s),
        Term::Var(_) => ops.make_ground(s, &vars_of(args), true),
    }
}

fn bi_is(ops: &mut Ops, s: AbsState, args: &[Term]) -> Option<AbsState> {
    ops.make_ground(s, &vars_of(args), true)
}

/// The default builtin table.
pub fn default_builtins() -> BTreeMap<PredId, BuiltinFn> {
    let mut t: BTreeMap<PredId, BuiltinFn> = BTreeMap::new();
    let mut add = |name: &str, arity: usize, f: BuiltinFn| {
        t.insert(PredId::new(name, arity), f);
    };
    add("true", 0, bi_true);
    add("nl", 0, bi_true);
    add("write", 1, bi_true);
    add("nonvar", 1, bi_true);
    add("fail", 0, bi_fail);
    add("false", 0, bi_fail);
    add("acyclic_term", 1, bi_acyclic);
    add("unify_with_occurs_check", 2, bi_unify_oc);
    add("var", 1, bi_var);
    add("ground", 1, bi_ground);
    add("atom", 1, bi_atomic);
    add("atomic", 1, bi_atomic);
    add("number", 1, bi_atomic);
    add("integer", 1, bi_atomic);
    add("is", 2, bi_is);
    t
}

/// Success pattern of a predicate over its formal parameters.
#[derive(Clone, Debug)]
pub struct Summary {
    pub pred: PredId,
    pub formals: Vec<Var>,
    /// Reduced success pattern; `None` when the predicate has no success.
    pub state: Option<AbsState>,
    /// The same pattern before the final reduction.
    pub unreduced: Option<AbsState>,
    pub fired: Fired,
}

#[derive(Clone, Debug)]
pub struct TraceEntry {
    pub iteration: usize,
    pub pred: PredId,
    pub state: String,
}

pub struct Analyzer {
    pub program: Program,
    pub reg: VarRegistry,
    pub ops: Ops,
    pub options: Options,
    builtins: BTreeMap<PredId, BuiltinFn>,
    formals: BTreeMap<PredId, Vec<Var>>,
    temps: HashMap<(usize, usize), Vec<Var>>,
    summaries: BTreeMap<PredId, Summary>,
    pub trace: Vec<TraceEntry>,
}

impl Analyzer {
    pub fn new(program: Program, options: Options) -> Self {
        let mut reg = program.reg.clone();
        let mut formals = BTreeMap::new();
        for p in program.predicates() {
            let vs: Vec<Var> = (1..=p.arity).map(|i| reg.fresh(format!("X{i}"))).collect();
            formals.insert(p.clone(), vs);
        }
        let mut temps = HashMap::new();
        for (ci, c) in program.clauses.iter().enumerate() {
            for (gi, g) in c.body.iter().enumerate() {
                if let Goal::Call { pred, .. } = g {
                    if program.defines(pred) {
                        let vs: Vec<Var> = (1..=pred.arity).map(|i| reg.fresh(format!("T{i}"))).collect();
                        temps.insert((ci, gi), vs);
                    }
                }
            }
        }
        let ops = Ops::new(options.domain, options.node_budget);
        Analyzer {
            program,
            reg,
            ops,
            options,
            builtins: default_builtins(),
            formals,
            temps,
            summaries: BTreeMap::new(),
            trace: Vec::new(),
        }
    }

    /// Add or replace a builtin.
    pub fn register_builtin(&mut self, name: &str, arity: usize, f: BuiltinFn) {
        self.builtins.insert(PredId::new(name, arity), f);
    }

    pub fn summary(&self, p: &PredId) -> Option<&Summary> {
        self.summaries.get(p)
    }

    pub fn summaries(&self) -> impl Iterator<Item = &Summary> {
        self.summaries.values()
    }

    pub fn formals(&self, p: &PredId) -> Option<&[Var]> {
        self.formals.get(p).map(Vec::as_slice)
    }

    /// Strongly connected components of the call graph, callees first.
    pub fn sccs(&self) -> Vec<Vec<PredId>> {
        let mut g = DiGraph::<PredId, ()>::new();
        let mut nodes = BTreeMap::new();
        for p in self.program.predicates() {
            nodes.insert(p.clone(), g.add_node(p.clone()));
        }
        for c in &self.program.clauses {
            for goal in &c.body {
                if let Goal::Call { pred, .. } = goal {
                    if let Some(&to) = nodes.get(pred) {
                        g.update_edge(nodes[&c.pred], to, ());
                    }
                }
            }
        }
        tarjan_scc(&g)
            .into_iter()
            .map(|scc| {
                let mut preds: Vec<PredId> = scc.into_iter().map(|n| g[n].clone()).collect();
                preds.sort();
                preds
            })
            .collect()
    }

    fn is_recursive(&self, scc: &[PredId]) -> bool {
        scc.len() > 1
            || self.program.clauses_of(&scc[0]).any(|c| {
                c.body
                    .iter()
                    .any(|g| matches!(g, Goal::Call { pred, .. } if *pred == scc[0]))
            })
    }

    /// Compute summaries for every predicate.
    pub fn run(&mut self) -> Result<(), AnalysisError> {
        for p in self.program.predicates().cloned().collect::<Vec<_>>() {
            let formals = self.formals[&p].clone();
            self.summaries.insert(
                p.clone(),
                Summary {
                    pred: p,
                    formals,
                    state: None,
                    unreduced: None,
                    fired: Fired::default(),
                },
            );
        }
        for scc in self.sccs() {
            let recursive = self.is_recursive(&scc);
            let mut iteration = 0;
            loop {
                iteration += 1;
                let mut changed = false;
                for p in &scc {
                    changed |= self.update(p, iteration)?;
                }
                if !recursive || !changed {
                    break;
                }
                if iteration >= self.options.max_iterations {
                    let names: Vec<String> = scc.iter().map(ToString::to_string).collect();
                    self.ops.warn(format!(
                        "iteration cap of {} exceeded for {}; summaries set to top",
                        self.options.max_iterations,
                        names.join(", ")
                    ));
                    for p in &scc {
                        let s = self.summaries.get_mut(p).expect("summary exists");
                        let vi: VarSet = s.formals.iter().copied().collect();
                        s.state = Some(AbsState::top(&vi));
                        s.unreduced = s.state.clone();
                    }
                    break;
                }
            }
        }
        Ok(())
    }

    fn update(&mut self, p: &PredId, iteration: usize) -> Result<bool, AnalysisError> {
        let clause_ids: Vec<usize> = self.program.index[p].clone();
        self.ops.take_fired();
        let mut acc = self.summaries[p].state.clone();
        for ci in clause_ids {
            let r = self.eval_clause(ci)?;
            acc = self.ops.merge(acc, r);
        }
        let unreduced = acc.clone();
        let reduced = acc.and_then(|s| self.ops.reduce(s)).map(|s| self.enforce_budget(s, p));
        let fired = self.ops.take_fired();
        let s = self.summaries.get_mut(p).expect("summary exists");
        let changed = s.state != reduced;
        s.state = reduced;
        s.unreduced = unreduced;
        s.fired.absorb(fired);
        if self.options.trace {
            let text = match &s.state {
                Some(st) => st.display(&self.ops.m, &self.reg).to_string(),
                None => "unreachable".to_string(),
            };
            self.trace.push(TraceEntry {
                iteration,
                pred: p.clone(),
                state: text,
            });
        }
        Ok(changed)
    }

    fn enforce_budget(&mut self, s: AbsState, p: &PredId) -> AbsState {
        let budget = self.ops.node_budget;
        let (phi, d1) = self.ops.m.enforce_budget(s.phi, budget);
        let (psi, d2) = self.ops.m.enforce_budget(s.psi, budget);
        if !d1.is_empty() || !d2.is_empty() {
            self.ops.warn(format!("node budget exceeded in {p}; dependencies weakened"));
        }
        AbsState { phi, psi, ..s }
    }

    /// Abstract success state of one clause, over the predicate's formals.
    pub fn eval_clause(&mut self, ci: usize) -> Result<Option<AbsState>, AnalysisError> {
        let states = self.clause_states(ci)?;
        Ok(states.into_iter().last().flatten())
    }

    /// States of a clause: the initial state, the state after each body goal,
    /// after head unification, and finally after projection onto the formals.
    pub fn clause_states(&mut self, ci: usize) -> Result<Vec<Option<AbsState>>, AnalysisError> {
        let clause = self.program.clauses[ci].clone();
        let formals = self.formals[&clause.pred].clone();
        let mut vi: VarSet = formals.iter().copied().collect();
        vi.extend(clause.vars.iter().copied());
        let mut out = Vec::new();
        let mut cur = Some(AbsState::initial(&vi));
        out.push(cur.clone());
        for (gi, g) in clause.body.iter().enumerate() {
            cur = match cur {
                Some(s) => self.eval_goal(s, g, Some((ci, gi)))?,
                None => None,
            };
            out.push(cur.clone());
        }
        cur = cur.and_then(|mut s| {
            for (f, a) in formals.iter().zip(&clause.head) {
                s = self.ops.unify(s, &Term::Var(*f), a)?;
            }
            Some(s)
        });
        out.push(cur.clone());
        cur = cur.map(|s| clause.vars.iter().rev().fold(s, |s, &v| self.ops.project(s, v)));
        out.push(cur);
        Ok(out)
    }

    /// Abstractly execute one goal. `site` identifies the body position so
    /// that precomputed temporaries can be reused.
    pub fn eval_goal(
        &mut self,
        s: AbsState,
        g: &Goal,
        site: Option<(usize, usize)>,
    ) -> Result<Option<AbsState>, AnalysisError> {
        match g {
            Goal::Unify(a, b) => Ok(self.ops.unify(s, a, b)),
            Goal::Call { pred, args } => {
                if self.program.defines(pred) {
                    let temps = match site.and_then(|k| self.temps.get(&k)) {
                        Some(t) => t.clone(),
                        None => (1..=pred.arity).map(|i| self.reg.fresh(format!("T{i}"))).collect(),
                    };
                    Ok(self.call(s, pred, args, &temps))
                } else if let Some(f) = self.builtins.get(pred).copied() {
                    Ok(f(&mut self.ops, s, args))
                } else if self.options.strict {
                    Err(AnalysisError::UnknownPredicate(pred.clone()))
                } else {
                    self.ops.warn(format!("unknown predicate {pred}; its effect is approximated"));
                    Ok(self.ops.havoc(s, &g.vars()))
                }
            }
        }
    }

    fn call(&mut self, s: AbsState, pred: &PredId, args: &[Term], temps: &[Var]) -> Option<AbsState> {
        let summary = self.summaries.get(pred)?;
        let callee = summary.state.clone()?;
        let map: BTreeMap<Var, Var> = summary.formals.iter().copied().zip(temps.iter().copied()).collect();
        let r = |v: &Var| map[v];
        let phi = self.ops.m.rename_map(callee.phi, &map).expect("unrestricted manager");
        let psi = self.ops.m.rename_map(callee.psi, &map).expect("unrestricted manager");
        let cp = callee.p.rename(&map);
        let mut vi = s.vi.clone();
        vi.extend(temps.iter().copied());
        let mut h = s.h.clone();
        h.extend(callee.h.iter().map(r));
        let joined = AbsState {
            vi,
            h,
            p: s.p.conjoin_independent(&cp),
            phi: self.ops.m.and(s.phi, phi),
            psi: self.ops.m.and(s.psi, psi),
        };
        let mut cur = self.ops.check(joined)?;
        for (t, a) in temps.iter().zip(args) {
            cur = self.ops.unify(cur, &Term::Var(*t), a)?;
        }
        Some(temps.iter().rev().fold(cur, |st, &t| self.ops.project(st, t)))
    }

    /// Abstractly run `pred(X1, ..., Xn)` from fresh variables, against the
    /// computed summaries. Returns the fresh variables and the final state.
    pub fn specialize_entry(&mut self, pred: &PredId) -> Result<(Vec<Var>, Option<AbsState>), AnalysisError> {
        let vars: Vec<Var> = (1..=pred.arity).map(|i| self.reg.fresh(format!("X{i}"))).collect();
        let goal = Goal::Call {
            pred: pred.clone(),
            args: vars.iter().map(|&v| Term::Var(v)).collect(),
        };
        let st = self.specialize_goal(&goal, &vars.iter().copied().collect())?;
        Ok((vars, st))
    }

    /// Abstractly run an arbitrary goal over the variables `vi`.
    pub fn specialize_goal(&mut self, goal: &Goal, vi: &VarSet) -> Result<Option<AbsState>, AnalysisError> {
        if let Goal::Call { pred, .. } = goal {
            if !self.program.defines(pred) && !self.builtins.contains_key(pred) {
                return Err(AnalysisError::UnknownPredicate(pred.clone()));
            }
        }
        let s = AbsState::initial(vi);
        self.ops.take_fired();
        let r = self.eval_goal(s, goal, None)?;
        Ok(r.and_then(|s| self.ops.reduce(s)))
    }

    pub fn warnings(&self) -> impl Iterator<Item = &String> {
        self.ops.warnings.iter()
    }

    /// Consistency of finiteness with finite-tree dependencies.
    pub fn consistent(&mut self, s: &AbsState) -> bool {
        s.phi.is_false() || deps::consistency_check(&mut self.ops.m, &s.h, s.phi, &s.vi).expect("unrestricted manager")
    }
}

/// Parse and analyze a program in one go.
pub fn analyze(program: Program, options: Options) -> Result<Analyzer, AnalysisError> {
    let mut a = Analyzer::new(program, options);
    a.run()?;
    Ok(a)
}
