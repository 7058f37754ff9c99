//! Generators and a bounded concrete interpreter shared by the integration
//! test targets.
#![allow(dead_code)]

use std::collections::BTreeMap;

use finitree::boolfun::{BddManager, Bdd, BoolAlgebra};
use finitree::concrete::{hvars, rat_unify, rt_finite};
use finitree::gen::TermPool;
use finitree::program::{Goal, Program};
use finitree::{RSubst, Term, Var, VarRegistry, VarSet};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn vars(n: usize) -> (VarRegistry, Vec<Var>) {
    let mut reg = VarRegistry::new();
    let vs = (0..n).map(|i| reg.intern(&format!("V{i}"))).collect();
    (reg, vs)
}

/// A random solved form over `vs` whose variables all denote finite trees.
pub fn finite_rsubst<R: Rng>(pool: &TermPool, vs: &[Var], rng: &mut R) -> RSubst {
    loop {
        let s = pool.random_rsubst(vs, rng);
        let hv = hvars(&s);
        if s.vars().iter().chain(vs).all(|&v| hv.contains(v)) {
            return s;
        }
    }
}

/// Random Boolean formula as an expression over `vs`, built in any algebra.
#[derive(Clone, Debug)]
pub enum Expr {
    T,
    F,
    V(Var),
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Ex(Var, Box<Expr>),
}

pub fn random_expr<R: Rng>(vs: &[Var], depth: usize, rng: &mut R) -> Expr {
    if depth == 0 || rng.gen_bool(0.2) {
        return match rng.gen_range(0..10) {
            0 => Expr::T,
            1 => Expr::F,
            _ => Expr::V(*vs.choose(rng).unwrap()),
        };
    }
    let sub = |rng: &mut R| Box::new(random_expr(vs, depth - 1, rng));
    match rng.gen_range(0..7) {
        0 => Expr::Not(sub(rng)),
        1 | 2 => Expr::And(sub(rng), sub(rng)),
        3 | 4 => Expr::Or(sub(rng), sub(rng)),
        5 => Expr::Ex(*vs.choose(rng).unwrap(), sub(rng)),
        _ => Expr::Not(Box::new(Expr::And(sub(rng), sub(rng)))),
    }
}

pub fn build<A: BoolAlgebra>(a: &mut A, e: &Expr) -> A::F
where
    A::F: Copy,
{
    match e {
        Expr::T => a.top(),
        Expr::F => a.bot(),
        Expr::V(v) => a.var(*v).unwrap(),
        Expr::Not(x) => {
            let f = build(a, x);
            a.not(f)
        }
        Expr::And(x, y) => {
            let f = build(a, x);
            let g = build(a, y);
            a.and(f, g)
        }
        Expr::Or(x, y) => {
            let f = build(a, x);
            let g = build(a, y);
            a.or(f, g)
        }
        Expr::Ex(v, x) => {
            let f = build(a, x);
            a.exists(*v, f).unwrap()
        }
    }
}

/// Models of `f` over `vs` as a bitmask, bit `i` for the assignment where
/// `vs[k]` takes bit `k` of `i`.
pub fn models<A: BoolAlgebra>(a: &A, f: A::F, vs: &[Var]) -> u64
where
    A::F: Copy,
{
    (0..1u32 << vs.len())
        .filter(|&i| a.eval(f, &|v| vs.iter().position(|&w| w == v).is_some_and(|k| i >> k & 1 == 1)))
        .fold(0, |acc, i| acc | 1 << i)
}

pub fn eval_on(m: &BddManager, f: Bdd, val: &BTreeMap<Var, bool>) -> bool {
    m.eval(f, &|v| val.get(&v).copied().unwrap_or(false))
}

/// Random Prolog source: up to three predicates `p0..p2` with one or two
/// clauses each. Arguments and unifications draw from `a`, `b`, `f/1`,
/// `g/2` and the clause variables; bodies may call any predicate and may
/// check `acyclic_term/1`.
pub fn random_program<R: Rng>(rng: &mut R) -> String {
    let npreds = rng.gen_range(1..=3);
    let arities: Vec<usize> = (0..npreds).map(|_| rng.gen_range(1..=2)).collect();
    let names = ["A", "B", "C"];
    let term = |rng: &mut R, depth: usize| -> String {
        fn go<R: Rng>(rng: &mut R, depth: usize, names: &[&str]) -> String {
            let r = rng.gen_range(0..10);
            if depth == 0 || r < 5 {
                return if r < 2 { ["a", "b"][rng.gen_range(0..2)].to_string() } else { names.choose(rng).unwrap().to_string() };
            }
            if r < 7 {
                format!("f({})", go(rng, depth - 1, names))
            } else {
                format!("g({}, {})", go(rng, depth - 1, names), go(rng, depth - 1, names))
            }
        }
        go(rng, depth, &names)
    };
    let mut src = String::new();
    for (p, &ar) in arities.iter().enumerate() {
        for _ in 0..rng.gen_range(1..=2) {
            let head: Vec<String> = (0..ar).map(|_| term(rng, 1)).collect();
            let mut body = Vec::new();
            for _ in 0..rng.gen_range(0..=2) {
                match rng.gen_range(0..10) {
                    0..=3 => body.push(format!("{} = {}", names.choose(rng).unwrap(), term(rng, 2))),
                    4..=7 => {
                        let q = rng.gen_range(0..npreds);
                        let args: Vec<String> = (0..arities[q]).map(|_| term(rng, 1)).collect();
                        body.push(format!("p{q}({})", args.join(", ")));
                    }
                    _ => body.push(format!("acyclic_term({})", names.choose(rng).unwrap())),
                }
            }
            src.push_str(&format!("p{p}({})", head.join(", ")));
            if !body.is_empty() {
                src.push_str(&format!(" :- {}", body.join(", ")));
            }
            src.push_str(".\n");
        }
    }
    src
}

/// Bounded depth-first SLD resolution over rational trees.
pub struct Sld<'a> {
    pub program: &'a Program,
    pub reg: VarRegistry,
    pub max_depth: usize,
    pub max_answers: usize,
    pub answers: Vec<RSubst>,
}

impl<'a> Sld<'a> {
    pub fn new(program: &'a Program, max_depth: usize, max_answers: usize) -> Self {
        Sld {
            program,
            reg: program.reg.clone(),
            max_depth,
            max_answers,
            answers: Vec::new(),
        }
    }

    /// Answers of `goal` from the empty substitution.
    pub fn solve(&mut self, goal: Goal) -> Vec<RSubst> {
        self.answers.clear();
        self.run(vec![goal], RSubst::empty(), 0);
        std::mem::take(&mut self.answers)
    }

    fn run(&mut self, goals: Vec<Goal>, sigma: RSubst, depth: usize) {
        if self.answers.len() >= self.max_answers {
            return;
        }
        let Some((first, rest)) = goals.split_first() else {
            self.answers.push(sigma);
            return;
        };
        match first {
            Goal::Unify(s, t) => {
                if let Ok(tau) = rat_unify(&[(s.clone(), t.clone())], &sigma) {
                    self.run(rest.to_vec(), tau, depth);
                }
            }
            Goal::Call { pred, args } => match (&*pred.name, pred.arity) {
                ("true", 0) => self.run(rest.to_vec(), sigma, depth),
                ("acyclic_term", 1) => {
                    let finite = args[0].vars().iter().all(|&v| rt_finite(v, &sigma));
                    if finite {
                        self.run(rest.to_vec(), sigma, depth);
                    }
                }
                _ => {
                    if depth >= self.max_depth {
                        return;
                    }
                    let clauses: Vec<_> = self.program.clauses_of(pred).cloned().collect();
                    for c in clauses {
                        let map: BTreeMap<Var, Var> = c.vars.iter().map(|&v| (v, self.reg.fresh("R"))).collect();
                        let eqs: Vec<(Term, Term)> =
                            args.iter().cloned().zip(c.head.iter().map(|h| h.rename(&map))).collect();
                        let Ok(tau) = rat_unify(&eqs, &sigma) else { continue };
                        let mut next: Vec<Goal> = c
                            .body
                            .iter()
                            .map(|g| match g {
                                Goal::Unify(s, t) => Goal::Unify(s.rename(&map), t.rename(&map)),
                                Goal::Call { pred, args } => Goal::Call {
                                    pred: pred.clone(),
                                    args: args.iter().map(|a| a.rename(&map)).collect(),
                                },
                            })
                            .collect();
                        next.extend(rest.iter().cloned());
                        self.run(next, tau, depth + 1);
                    }
                }
            },
        }
    }
}

pub fn vi_of(vs: &[Var]) -> VarSet {
    vs.iter().copied().collect()
}
