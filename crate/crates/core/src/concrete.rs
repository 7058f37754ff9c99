//! Concrete rational-tree semantics: unification without occurs-check,
//! the occurrence, groundness and finiteness operators, and graph-based
//! oracles over the solved-form dependency graph.
//!
//! Rational trees are never materialized. Everything here works on the
//! solved form, where the edge `y → z` exists iff `y ∈ dom(σ)` and
//! `z ∈ vars(yσ)`.

use std::collections::{BTreeMap, HashMap, HashSet};

use rand::Rng;
use thiserror::Error;

use crate::gen::TermPool;
use crate::subst::RSubst;
use crate::term::{Term, Var, VarSet};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("cannot unify {left}/{left_arity} with {right}/{right_arity}")]
pub struct ClashFailure {
    pub left: String,
    pub left_arity: usize,
    pub right: String,
    pub right_arity: usize,
}

enum Node {
    Var,
    App { name: std::sync::Arc<str>, args: Vec<usize> },
}

/// Union-find over term nodes. Each class keeps at most one compound node
/// as its structure; merging two structured classes unifies arguments.
struct Unifier {
    nodes: Vec<Node>,
    parent: Vec<usize>,
    rank: Vec<u8>,
    structure: Vec<Option<usize>>,
    var_node: HashMap<Var, usize>,
}

impl Unifier {
    fn new() -> Self {
        Unifier {
            nodes: Vec::new(),
            parent: Vec::new(),
            rank: Vec::new(),
            structure: Vec::new(),
            var_node: HashMap::new(),
        }
    }

    fn push(&mut self, node: Node) -> usize {
        let id = self.nodes.len();
        let is_app = matches!(node, Node::App { .. });
        self.nodes.push(node);
        self.parent.push(id);
        self.rank.push(0);
        self.structure.push(is_app.then_some(id));
        id
    }

    fn add_term(&mut self, t: &Term) -> usize {
        match t {
            Term::Var(v) => {
                if let Some(&id) = self.var_node.get(v) {
                    return id;
                }
                let id = self.push(Node::Var);
                self.var_node.insert(*v, id);
                id
            }
            Term::App(c) => {
                let args = c.args.iter().map(|a| self.add_term(a)).collect();
                self.push(Node::App {
                    name: c.name.clone(),
                    args,
                })
            }
        }
    }

    fn find(&mut self, mut a: usize) -> usize {
        while self.parent[a] != a {
            self.parent[a] = self.parent[self.parent[a]];
            a = self.parent[a];
        }
        a
    }

    fn unify(&mut self, a: usize, b: usize) -> Result<(), ClashFailure> {
        let mut pending = vec![(a, b)];
        while let Some((a, b)) = pending.pop() {
            let (ra, rb) = (self.find(a), self.find(b));
            if ra == rb {
                continue;
            }
            let (root, child) = if self.rank[ra] >= self.rank[rb] { (ra, rb) } else { (rb, ra) };
            if self.rank[root] == self.rank[child] {
                self.rank[root] += 1;
            }
            self.parent[child] = root;
            match (self.structure[root], self.structure[child]) {
                (Some(sa), Some(sb)) => {
                    let (Node::App { name: na, args: aa }, Node::App { name: nb, args: ab }) =
                        (&self.nodes[sa], &self.nodes[sb])
                    else {
                        unreachable!("structure nodes are compound");
                    };
                    if na != nb || aa.len() != ab.len() {
                        return Err(ClashFailure {
                            left: na.to_string(),
                            left_arity: aa.len(),
                            right: nb.to_string(),
                            right_arity: ab.len(),
                        });
                    }
                    pending.extend(aa.iter().copied().zip(ab.iter().copied()));
                }
                (None, Some(s)) => self.structure[root] = Some(s),
                _ => {}
            }
        }
        Ok(())
    }

    /// Read the classes back as a solved form. The representative of a class
    /// is its least variable; it is bound to the class structure (if any),
    /// every other variable of the class is bound to the representative.
    fn solved_form(mut self) -> RSubst {
        let mut class_vars: BTreeMap<usize, Vec<Var>> = BTreeMap::new();
        let mut vars: Vec<(Var, usize)> = self.var_node.iter().map(|(&v, &n)| (v, n)).collect();
        vars.sort();
        for (v, n) in vars {
            let r = self.find(n);
            class_vars.entry(r).or_default().push(v);
        }
        let reps: HashMap<usize, Var> = class_vars.iter().map(|(&r, vs)| (r, vs[0])).collect();
        let mut map = BTreeMap::new();
        let roots: Vec<usize> = class_vars.keys().copied().collect();
        for r in roots {
            let rep = reps[&r];
            if let Some(s) = self.structure[r] {
                let t = self.build(s, &reps);
                map.insert(rep, t);
            }
            for &v in &class_vars[&r][1..] {
                map.insert(v, Term::Var(rep));
            }
        }
        RSubst::from_map_unchecked(map)
    }

    // Classes without variables cannot lie on a cycle: the least-height node
    // of such a cycle would have an argument of smaller height in the cycle.
    fn build(&mut self, node: usize, reps: &HashMap<usize, Var>) -> Term {
        let Node::App { name, args } = &self.nodes[node] else {
            unreachable!("build called on a variable node");
        };
        let name = name.clone();
        let args = args.clone();
        let built = args
            .into_iter()
            .map(|a| {
                let r = self.find(a);
                match reps.get(&r) {
                    Some(&v) => Term::Var(v),
                    None => {
                        let s = self.structure[r].expect("variable-free class has structure");
                        self.build(s, reps)
                    }
                }
            })
            .collect();
        Term::app(&name, built)
    }
}

/// Most general solution of `base ∪ eqs` over rational trees.
///
/// No occurs-check is performed, so the only failure is a functor clash.
/// The result only mentions variables of the input.
pub fn rat_unify(eqs: &[(Term, Term)], base: &RSubst) -> Result<RSubst, ClashFailure> {
    let mut u = Unifier::new();
    for (v, t) in base.iter() {
        let a = u.add_term(&Term::Var(v));
        let b = u.add_term(t);
        u.unify(a, b)?;
    }
    for (s, t) in eqs {
        let a = u.add_term(s);
        let b = u.add_term(t);
        u.unify(a, b)?;
    }
    Ok(u.solved_form())
}

/// `occ(σ, v)`: the variables whose rational tree contains `v`.
pub fn occ(sigma: &RSubst, v: Var) -> VarSet {
    let mut cur: VarSet = if sigma.in_dom(v) { VarSet::new() } else { [v].into() };
    let mut universe = sigma.vars();
    universe.insert(v);
    for _ in 0..sigma.len() {
        cur = universe
            .iter()
            .copied()
            .filter(|&y| {
                let img = sigma.image(y);
                cur.iter().any(|&w| img.occurs(w))
            })
            .collect();
    }
    cur
}

/// Domain variables bound to ground rational trees.
pub fn gvars(sigma: &RSubst) -> VarSet {
    let vars = sigma.vars();
    let occs: Vec<VarSet> = vars
        .iter()
        .filter(|v| !sigma.in_dom(**v))
        .map(|&v| occ(sigma, v))
        .collect();
    sigma
        .dom()
        .into_iter()
        .filter(|y| occs.iter().all(|o| !o.contains(y)))
        .collect()
}

/// The co-finite set `hvars(σ)`, stored as its finite complement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HVars {
    non_finite: VarSet,
}

impl HVars {
    pub fn contains(&self, v: Var) -> bool {
        !self.non_finite.contains(&v)
    }

    /// Variables (all in `dom(σ)`) whose rational tree is infinite.
    pub fn complement(&self) -> &VarSet {
        &self.non_finite
    }

    pub fn restrict_to(&self, vars: &VarSet) -> VarSet {
        vars.iter().copied().filter(|&v| self.contains(v)).collect()
    }
}

/// Stationary limit of the finiteness functions, plus the number of
/// iterations needed to reach it.
pub fn hvars_with_steps(sigma: &RSubst) -> (HVars, usize) {
    let mut non_finite = sigma.dom();
    let mut steps = 0;
    loop {
        let next: VarSet = non_finite
            .iter()
            .copied()
            .filter(|&y| sigma.image(y).vars().iter().any(|w| non_finite.contains(w)))
            .collect();
        if next == non_finite {
            return (HVars { non_finite }, steps);
        }
        non_finite = next;
        steps += 1;
    }
}

pub fn hvars(sigma: &RSubst) -> HVars {
    hvars_with_steps(sigma).0
}

fn successors(sigma: &RSubst, y: Var) -> VarSet {
    sigma.get(y).map(Term::vars).unwrap_or_default()
}

fn reachable(sigma: &RSubst, from: Var) -> VarSet {
    let mut seen = VarSet::new();
    let mut stack = vec![from];
    while let Some(y) = stack.pop() {
        if seen.insert(y) {
            stack.extend(successors(sigma, y));
        }
    }
    seen
}

fn on_cycle(sigma: &RSubst, y: Var) -> bool {
    successors(sigma, y).into_iter().any(|z| reachable(sigma, z).contains(&y))
}

/// `rt(x, σ)` is finite: no variable reachable from `x` lies on a cycle.
pub fn rt_finite(x: Var, sigma: &RSubst) -> bool {
    reachable(sigma, x).into_iter().all(|y| !on_cycle(sigma, y))
}

/// `rt(x, σ)` is ground: every reachable variable is in the domain.
pub fn rt_ground(x: Var, sigma: &RSubst) -> bool {
    reachable(sigma, x).into_iter().all(|y| sigma.in_dom(y))
}

/// `rt(x, σ)` is a variable.
pub fn rt_free(x: Var, sigma: &RSubst) -> bool {
    let mut cur = x;
    loop {
        match sigma.get(cur) {
            None => return true,
            Some(Term::Var(next)) => cur = *next,
            Some(Term::App(_)) => return false,
        }
    }
}

/// Number of occurrences of a variable in a rational tree, saturating at two.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Occurrences {
    Zero,
    One,
    Many,
}

impl Occurrences {
    fn from_count(n: usize) -> Self {
        match n {
            0 => Occurrences::Zero,
            1 => Occurrences::One,
            _ => Occurrences::Many,
        }
    }
}

/// Occurrences of the parameter variable `v` in `rt(x, σ)`, counted as
/// paths from `x` to `v` in the multigraph of variable occurrences.
pub fn rt_occurrences(x: Var, v: Var, sigma: &RSubst) -> Occurrences {
    if sigma.in_dom(v) {
        return Occurrences::Zero;
    }
    let reach_x = reachable(sigma, x);
    // Any node on a cycle that can still reach v yields infinitely many paths.
    let infinite = reach_x
        .iter()
        .any(|&y| sigma.in_dom(y) && on_cycle(sigma, y) && reachable(sigma, y).contains(&v));
    if infinite {
        return Occurrences::Many;
    }
    let mut memo: HashMap<Var, usize> = HashMap::new();
    Occurrences::from_count(count_paths(x, v, sigma, &mut memo))
}

fn count_paths(y: Var, v: Var, sigma: &RSubst, memo: &mut HashMap<Var, usize>) -> usize {
    if let Some(&n) = memo.get(&y) {
        return n;
    }
    let n = match sigma.get(y) {
        None => usize::from(y == v),
        Some(t) => {
            if !reachable(sigma, y).contains(&v) {
                0
            } else {
                let counts = t.mvars();
                counts
                    .into_iter()
                    .map(|(z, k)| k * count_paths(z, v, sigma, memo))
                    .sum::<usize>()
                    .min(2)
            }
        }
    };
    memo.insert(y, n);
    n
}

/// Non-domain variables of `rt(x, σ)`.
pub fn rt_vars(x: Var, sigma: &RSubst) -> VarSet {
    reachable(sigma, x).into_iter().filter(|y| !sigma.in_dom(*y)).collect()
}

/// `rt(x, σ)` is linear.
pub fn rt_linear(x: Var, sigma: &RSubst) -> bool {
    rt_vars(x, sigma)
        .into_iter()
        .all(|v| rt_occurrences(x, v, sigma) != Occurrences::Many)
}

/// Occurrences of `v` in `rt(t, σ)` for an arbitrary finite term.
pub fn rt_term_occurrences(t: &Term, v: Var, sigma: &RSubst) -> Occurrences {
    let mut total = 0usize;
    for (y, k) in t.mvars() {
        total += k * match rt_occurrences(y, v, sigma) {
            Occurrences::Zero => 0,
            Occurrences::One => 1,
            Occurrences::Many => 2,
        };
    }
    Occurrences::from_count(total)
}

pub fn rt_term_vars(t: &Term, sigma: &RSubst) -> VarSet {
    t.vars().into_iter().flat_map(|y| rt_vars(y, sigma)).collect()
}

/// `rt(s, σ) = rt(t, σ)`, decided by bisimulation on the solved form.
pub fn rt_equal(s: &Term, t: &Term, sigma: &RSubst) -> bool {
    let deref = |mut t: Term| {
        while let Term::Var(v) = t {
            match sigma.get(v) {
                Some(next) => t = next.clone(),
                None => break,
            }
        }
        t
    };
    let mut seen: HashSet<(Term, Term)> = HashSet::new();
    let mut stack = vec![(s.clone(), t.clone())];
    while let Some((a, b)) = stack.pop() {
        let (a, b) = (deref(a), deref(b));
        if !seen.insert((a.clone(), b.clone())) {
            continue;
        }
        match (&a, &b) {
            (Term::Var(x), Term::Var(y)) => {
                if x != y {
                    return false;
                }
            }
            (Term::App(ca), Term::App(cb)) => {
                if ca.name != cb.name || ca.args.len() != cb.args.len() {
                    return false;
                }
                stack.extend(ca.args.iter().cloned().zip(cb.args.iter().cloned()));
            }
            _ => return false,
        }
    }
    true
}

/// `σ` entails every equation in `eqs` over rational trees.
pub fn entails_equations(sigma: &RSubst, eqs: &[(Term, Term)]) -> bool {
    eqs.iter().all(|(s, t)| rt_equal(s, t, sigma))
}

/// `σ` and `τ` are equivalent over rational trees.
pub fn rt_equivalent(sigma: &RSubst, tau: &RSubst) -> bool {
    entails_equations(sigma, &tau.equations()) && entails_equations(tau, &sigma.equations())
}

/// Finiteness valuation over the variables of interest.
pub fn hval(sigma: &RSubst, vi: &VarSet) -> BTreeMap<Var, bool> {
    let hv = hvars(sigma);
    vi.iter().map(|&v| (v, hv.contains(v))).collect()
}

/// Groundness valuation over the variables of interest.
pub fn gval(sigma: &RSubst, vi: &VarSet) -> BTreeMap<Var, bool> {
    let gv = gvars(sigma);
    vi.iter().map(|&v| (v, gv.contains(&v))).collect()
}

/// Random members of `↓σ`: solutions of `σ ∪ σ'` for random `σ'` over
/// `vars(σ) ∪ vi`. Clashing draws are discarded and redrawn, up to a
/// bounded number of attempts.
pub fn sample_downarrow<R: Rng>(
    sigma: &RSubst,
    vi: &VarSet,
    pool: &TermPool,
    n: usize,
    rng: &mut R,
) -> Vec<RSubst> {
    let mut vars = sigma.vars();
    vars.extend(vi.iter().copied());
    let vars: Vec<Var> = vars.into_iter().collect();
    let mut out = Vec::with_capacity(n);
    if vars.is_empty() {
        return vec![sigma.clone(); n];
    }
    let mut attempts = 0;
    while out.len() < n && attempts < 50 * n.max(1) {
        attempts += 1;
        let k = rng.gen_range(1..=2);
        let eqs: Vec<(Term, Term)> = (0..k)
            .map(|_| {
                let y = vars[rng.gen_range(0..vars.len())];
                (Term::Var(y), pool.random_binding_rhs(y, &vars, rng))
            })
            .collect();
        if let Ok(tau) = rat_unify(&eqs, sigma) {
            out.push(tau);
        }
    }
    out
}
