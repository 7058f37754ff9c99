//! Acceptance criteria. Runs without the libtest harness so that every
//! criterion prints its own PASS/FAIL line; exits non-zero if any fails.

mod common;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use common::*;
use finitree::boolfun::{BddManager, BoolAlgebra, TruthTable};
use finitree::concrete::{gvars, hvars, hvars_with_steps, rat_unify, rt_finite, rt_ground, sample_downarrow};
use finitree::deps::{self, reduce_all};
use finitree::gen::TermPool;
use finitree::hp::{alpha_h, amgu_h, proj_h};
use finitree::program::Goal;
use finitree::sfl::{self, SflElement};
use finitree::{analyze, check_rsubst, parse_program, Binding, Options, PredId, Term, Var, VarRegistry, VarSet};
use rand::seq::SliceRandom;
use rand::Rng;

const FINITENESS: &str = include_str!("../../../programs/finiteness.pl");
const GROUNDNESS1: &str = include_str!("../../../programs/groundness1.pl");
const GROUNDNESS2: &str = include_str!("../../../programs/groundness2.pl");

type Outcome = Result<String, String>;

fn check(ok: bool, what: &str) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.to_string())
    }
}

fn criterion(id: &str, name: &str, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let r = f();
    let elapsed = start.elapsed();
    let in_time = elapsed <= limit;
    let (pass, detail) = match r {
        Ok(d) if in_time => (true, d),
        Ok(d) => (false, format!("{d}; too slow")),
        Err(e) => (false, e),
    };
    println!(
        "{} [{id}] {name}: {detail} ({:.3} s, limit {} s)",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        limit.as_secs_f64()
    );
    pass
}

fn positions(formals: &[Var], set: &VarSet) -> Vec<usize> {
    formals.iter().enumerate().filter(|(_, v)| set.contains(v)).map(|(i, _)| i + 1).collect()
}

fn golden_finiteness() -> Outcome {
    let mut a = analyze(parse_program(FINITENESS).unwrap(), Options::default()).unwrap();
    let r = a.summary(&PredId::new("r", 2)).unwrap().clone();
    let h_r = positions(&r.formals, &r.state.as_ref().unwrap().h);
    check(h_r == vec![1, 2], &format!("r/2 finite params {h_r:?}"))?;

    let ci = a.program.index[&PredId::new("r", 2)][0];
    let clause_vars: VarSet = a.program.clauses[ci].vars.iter().copied().collect();
    let after_q = a.clause_states(ci).unwrap()[2].clone().unwrap();
    check(after_q.h.is_disjoint(&clause_vars), "h after q/2 mentions X or Y")?;

    let q = a.summary(&PredId::new("q", 2)).unwrap().clone();
    let qs = q.state.unwrap();
    let m = &mut a.ops.m;
    let (x, y) = (m.var(q.formals[0]).unwrap(), m.var(q.formals[1]).unwrap());
    let imp = m.implies(x, y);
    check(m.entails(qs.phi, imp), "q/2 summary does not entail x -> y")?;

    let mut reg = VarRegistry::new();
    let (vx, vy) = (reg.intern("x"), reg.intern("y"));
    let mut m = BddManager::new();
    let (bx, by) = (m.var(vx).unwrap(), m.var(vy).unwrap());
    let imp = m.implies(bx, by);
    let h = deps::reduce_h_from_fd(&mut m, &[vx].into(), imp, &[vx, vy].into()).unwrap();
    check(h == [vx, vy].into(), "reduce_h_from_fd({x}, x -> y) != {x,y}")?;

    let (vars, st) = a.specialize_entry(&PredId::new("r", 2)).unwrap();
    let entry = positions(&vars, &st.unwrap().h);
    check(entry == vec![1, 2], &format!("entry r(X1,X2) finite {entry:?}"))?;
    Ok("r/2 finite {1,2}; h after q = {}; q entails x->y; reduce gives {x,y}".into())
}

fn golden_groundness(src: &str, second: bool) -> Outcome {
    let mut a = analyze(parse_program(src).unwrap(), Options::default()).unwrap();
    let q = a.summary(&PredId::new("q", 2)).unwrap().clone();
    let (st, un) = (q.state.unwrap(), q.unreduced.unwrap());
    let m = &mut a.ops.m;
    let (x, y) = (m.var(q.formals[0]).unwrap(), m.var(q.formals[1]).unwrap());
    if second {
        let xy = m.and(x, y);
        check(un.psi == x, "pre-reduction psi_q != x")?;
        check(st.psi == xy, "psi_q != x & y")?;
        Ok("psi_q: x before reduction, x & y after".into())
    } else {
        check(st.psi == y, "psi_q != y")?;
        Ok("psi_q = y after reduction".into())
    }
}

fn golden_set_sharing() -> Outcome {
    let mut reg = VarRegistry::new();
    let (x, y, z) = (reg.intern("x"), reg.intern("y"), reg.intern("z"));
    let vi: VarSet = [x, y, z].into();
    let sh = [[x, y].into(), [x, z].into(), [y, z].into()].into();
    let d = SflElement::new(&vi, sh, VarSet::new(), vi.clone());
    let h = amgu_h(&vi, &d, x, &Term::Var(y));
    check(h == [z].into(), &format!("h' has {} variables", h.len()))?;
    Ok("h' = {z}".into())
}

fn golden_hvars_gvars() -> Outcome {
    let mut reg = VarRegistry::new();
    let x: Vec<Var> = (1..=5).map(|i| reg.intern(&format!("x{i}"))).collect();
    let f = |t: Term| Term::app("f", vec![t]);
    let g = |t: Term| Term::app("g", vec![t]);
    let sigma = check_rsubst([
        Binding::new(x[0], f(x[1].into())),
        Binding::new(x[1], g(x[4].into())),
        Binding::new(x[2], f(x[3].into())),
        Binding::new(x[3], g(x[2].into())),
    ])
    .unwrap();
    let (hv, _) = hvars_with_steps(&sigma);
    check(hv.complement() == &[x[2], x[3]].into(), "hvars complement != {x3,x4}")?;
    let vi: VarSet = x.iter().copied().collect();
    check(alpha_h(&sigma, &vi) == [x[0], x[1], x[4]].into(), "alpha_H != {x1,x2,x5}")?;

    let (a, b, c) = (reg.intern("x"), reg.intern("y"), reg.intern("z"));
    let sigma = check_rsubst([
        Binding::new(a, Term::app("f", vec![b.into(), c.into()])),
        Binding::new(b, Term::app("g", vec![c.into(), a.into()])),
        Binding::new(c, Term::app("f", vec![Term::atom("a")])),
    ])
    .unwrap();
    check(gvars(&sigma) == [a, b, c].into(), "gvars != {x,y,z}")?;
    Ok("hvars complement {x3,x4}; gvars {x,y,z}".into())
}

fn oracle_equivalence() -> Outcome {
    let pool = TermPool::default();
    let mut rng = rng(6);
    let cases = 10_000;
    let mut mismatches = 0;
    let mut cyclic = 0;
    for _ in 0..cases {
        let (_, vs) = vars(rng.gen_range(1..=6));
        let sigma = pool.random_rsubst(&vs, &mut rng);
        let hv = hvars(&sigma);
        let mut scope = sigma.dom();
        scope.extend(vs.iter().copied());
        if scope.iter().any(|&v| !hv.contains(v)) {
            cyclic += 1;
        }
        let h_ok = scope.iter().all(|&v| hv.contains(v) == rt_finite(v, &sigma));
        let g_oracle: VarSet = sigma.dom().into_iter().filter(|&v| rt_ground(v, &sigma)).collect();
        if !h_ok || gvars(&sigma) != g_oracle {
            mismatches += 1;
        }
    }
    check(mismatches == 0, &format!("{mismatches} mismatches in {cases} cases"))?;
    Ok(format!("{cases} cases ({cyclic} with infinite trees), 0 mismatches"))
}

fn amgu_h_soundness() -> Outcome {
    let pool = TermPool::default();
    let mut rng = rng(7);
    let (mut cases, mut clashes, mut violations, mut shrinking) = (0, 0, 0, 0);
    while cases < 10_000 {
        let (_, vs) = vars(rng.gen_range(2..=5));
        let vi = vi_of(&vs);
        let sigma = finite_rsubst(&pool, &vs, &mut rng);
        let h = alpha_h(&sigma, &vi);
        let p = sfl::alpha(&sigma, &vi);
        let x = *vs.choose(&mut rng).unwrap();
        let t = pool.random_binding_rhs(x, &vs, &mut rng);
        let Ok(tau) = rat_unify(&[(Term::Var(x), t.clone())], &sigma) else {
            clashes += 1;
            continue;
        };
        cases += 1;
        let abs = amgu_h(&h, &p, x, &t);
        let conc = alpha_h(&tau, &vi);
        if !abs.is_subset(&conc) {
            violations += 1;
        }
        if conc.len() < vi.len() {
            shrinking += 1;
        }
    }
    check(violations == 0, &format!("{violations} violations in {cases} cases"))?;
    Ok(format!("{cases} cases ({shrinking} creating infinite trees, {clashes} clashes skipped), 0 violations"))
}

fn permanence() -> Outcome {
    let pool = TermPool::default();
    let mut rng = rng(8);
    let chains = 1_000;
    let mut violations = Vec::new();
    let mut samples = 0;
    for chain in 0..chains {
        let (_, vs) = vars(rng.gen_range(2..=5));
        let vi = vi_of(&vs);
        let mut m = BddManager::new();
        let mut sigma = finitree::RSubst::empty();
        let (mut phi, mut psi) = (m.top(), m.top());
        let mut steps = 0;
        while steps < 3 {
            let x = *vs.choose(&mut rng).unwrap();
            let t = pool.random_binding_rhs(x, &vs, &mut rng);
            let Ok(tau) = rat_unify(&[(Term::Var(x), t.clone())], &sigma) else { continue };
            steps += 1;
            // Prop. 3 inclusions between consecutive elements of the chain.
            let mut scope = tau.vars();
            scope.extend(vi.iter().copied());
            let (hs, ht) = (hvars(&sigma).restrict_to(&scope), hvars(&tau).restrict_to(&scope));
            if !ht.is_subset(&hs) {
                violations.push(format!("chain {chain}: hvars grew"));
            }
            let gh = |s: &finitree::RSubst| -> VarSet {
                let hv = hvars(s);
                gvars(s).into_iter().filter(|&v| hv.contains(v)).collect()
            };
            if !gh(&sigma).is_subset(&gh(&tau)) {
                violations.push(format!("chain {chain}: finite ground variables lost"));
            }
            phi = deps::amgu_fd(&mut m, phi, x, &t).unwrap();
            psi = deps::amgu_gd(&mut m, psi, x, &t).unwrap();
            sigma = tau;
            let forced: Vec<Var> = m.true_set(phi, &vi).into_iter().collect();
            let mut witnesses = sample_downarrow(&sigma, &vi, &pool, 3, &mut rng);
            witnesses.push(sigma.clone());
            for w in &witnesses {
                samples += 1;
                if !eval_on(&m, phi, &finitree::concrete::hval(w, &vi)) {
                    violations.push(format!("chain {chain}: fd formula false on a member of the down-set"));
                }
                if !eval_on(&m, psi, &finitree::concrete::gval(w, &vi)) {
                    violations.push(format!("chain {chain}: gd formula false on a member of the down-set"));
                }
                if forced.iter().any(|&v| !rt_ground(v, w)) {
                    violations.push(format!("chain {chain}: variable forced finite is not ground"));
                }
            }
        }
    }
    if let Some(first) = violations.first() {
        return Err(format!("{} violations, first: {first}", violations.len()));
    }
    Ok(format!("{chains} chains of length 3, {samples} down-set members checked, 0 violations"))
}

fn random_reduced(m: &mut BddManager, vs: &[Var], rng: &mut impl Rng) -> (VarSet, finitree::boolfun::Bdd, finitree::boolfun::Bdd) {
    let vi = vi_of(vs);
    loop {
        let h: VarSet = vs.iter().copied().filter(|_| rng.gen_bool(0.4)).collect();
        let e = random_expr(vs, 4, rng);
        let phi = build(m, &e);
        let e = random_expr(vs, 4, rng);
        let g = build(m, &e);
        let psi = m.pos_part(g, &vi).unwrap();
        let (h, phi, psi, _) = reduce_all(m, &h, phi, psi, &vi, true).unwrap();
        let hv = m.conj_vars(&h).unwrap();
        let consistent = m.and(phi, hv);
        if !consistent.is_false() {
            return (h, phi, psi);
        }
    }
}

fn reduction_idempotence() -> Outcome {
    let mut rng = rng(9);
    let triples = 1_000;
    let mut violations = Vec::new();
    for i in 0..triples {
        let (_, vs) = vars(rng.gen_range(2..=5));
        let vi = vi_of(&vs);
        let mut m = BddManager::new();
        let (h1, p1, s1) = random_reduced(&mut m, &vs, &mut rng);
        let (h2, p2, s2) = random_reduced(&mut m, &vs, &mut rng);

        let again = reduce_all(&mut m, &h1, p1, s1, &vi, true).unwrap();
        if again.3.any() {
            violations.push(format!("triple {i}: reduce_all is not a fixpoint"));
        }

        let hm: VarSet = h1.intersection(&h2).copied().collect();
        let (pm, sm) = (deps::merge(&mut m, p1, p2), deps::merge(&mut m, s1, s2));
        let r = reduce_all(&mut m, &hm, pm, sm, &vi, true).unwrap();
        if r.3.any() || r.0 != hm || r.1 != pm || r.2 != sm {
            violations.push(format!("triple {i}: reduction after merge fired {:?}", r.3.names()));
        }

        let x = *vs.choose(&mut rng).unwrap();
        let hp = proj_h(&h1, x);
        let (pp, sp) = (deps::project(&mut m, p1, x).unwrap(), deps::project(&mut m, s1, x).unwrap());
        let r = reduce_all(&mut m, &hp, pp, sp, &vi, true).unwrap();
        if r.3.any() || r.0 != hp || r.1 != pp || r.2 != sp {
            violations.push(format!("triple {i}: reduction after projection fired {:?}", r.3.names()));
        }
    }
    if let Some(first) = violations.first() {
        return Err(format!("{} violations, first: {first}", violations.len()));
    }
    Ok(format!("{triples} pairs of reduced triples, merge and projection leave them reduced"))
}

fn boolfun_differential() -> Outcome {
    let mut rng = rng(10);
    let cases = 10_000;
    let mut mismatches = Vec::new();
    for i in 0..cases {
        let (_, vs) = vars(rng.gen_range(1..=6));
        let vi = vi_of(&vs);
        let mut b = BddManager::with_universe(vi.clone());
        let mut t = TruthTable::new(&vs);
        let (e1, e2) = (random_expr(&vs, 5, &mut rng), random_expr(&vs, 5, &mut rng));
        let (bf, bg) = (build(&mut b, &e1), build(&mut b, &e2));
        let (tf, tg) = (build(&mut t, &e1), build(&mut t, &e2));
        let v = *vs.choose(&mut rng).unwrap();
        let w = *vs.choose(&mut rng).unwrap();
        let c = rng.gen_bool(0.5);
        let mut same = |name: &str, x: finitree::boolfun::Bdd, y: u64, b: &BddManager, t: &TruthTable| {
            if models(b, x, &vs) != models(t, y, &vs) {
                mismatches.push(format!("case {i}: {name}"));
            }
        };
        same("build", bf, tf, &b, &t);
        let (x, y) = (b.and(bf, bg), t.and(tf, tg));
        same("and", x, y, &b, &t);
        let (x, y) = (b.or(bf, bg), t.or(tf, tg));
        same("or", x, y, &b, &t);
        let (x, y) = (b.not(bf), t.not(tf));
        same("not", x, y, &b, &t);
        let (x, y) = (b.iff(bf, bg), t.iff(tf, tg));
        same("iff", x, y, &b, &t);
        let (x, y) = (b.implies(bf, bg), t.implies(tf, tg));
        same("implies", x, y, &b, &t);
        let (x, y) = (b.restrict(bf, v, c).unwrap(), t.restrict(tf, v, c).unwrap());
        same("restrict", x, y, &b, &t);
        let (x, y) = (b.exists(v, bf).unwrap(), t.exists(v, tf).unwrap());
        same("exists", x, y, &b, &t);
        let (x, y) = (b.rename(bf, v, w).unwrap(), t.rename(tf, v, w).unwrap());
        same("rename", x, y, &b, &t);
        let (x, y) = (b.pos_part(bf, &vi).unwrap(), t.pos_part(tf, &vi).unwrap());
        same("pos_part", x, y, &b, &t);
        let mut flags = |name: &str, ok: bool| {
            if !ok {
                mismatches.push(format!("case {i}: {name}"));
            }
        };
        flags("entails", b.entails(bf, bg) == t.entails(tf, tg));
        flags("is_pos", b.is_pos(bf) == t.is_pos(tf));
        flags("true_set", b.true_set(bf, &vi) == t.true_set(tf, &vi));
        flags("false_set", b.false_set(bf, &vi) == t.false_set(tf, &vi));
        let assignment: BTreeMap<Var, bool> = vs.iter().map(|&v| (v, rng.gen_bool(0.5))).collect();
        flags("eval", b.eval(bf, &|v| assignment[&v]) == t.eval(tf, &|v| assignment[&v]));
        // Canonicity: equal tables give the same node.
        let rebuilt = (0..1u32 << vs.len())
            .filter(|&r| tf >> r & 1 == 1)
            .map(|r| {
                vs.iter().enumerate().fold(b.top(), |acc, (k, &v)| {
                    let lit = b.var(v).unwrap();
                    let lit = if r >> k & 1 == 1 { lit } else { b.not(lit) };
                    b.and(acc, lit)
                })
            })
            .collect::<Vec<_>>();
        let rebuilt = rebuilt.into_iter().fold(b.bot(), |acc, cube| b.or(acc, cube));
        flags("canonicity", rebuilt == bf);
    }
    if let Some(first) = mismatches.first() {
        return Err(format!("{} mismatches, first: {first}", mismatches.len()));
    }
    Ok(format!("{cases} random formula pairs over up to 6 variables, 0 mismatches"))
}

/// Check every bounded-SLD answer of every predicate against its summary.
pub fn end_to_end_program(src: &str, findings: &mut Vec<String>) -> usize {
    let program = parse_program(src).unwrap();
    let a = analyze(program.clone(), Options::default()).unwrap();
    let mut sld = Sld::new(&program, 5, 40);
    let mut checked = 0;
    for s in a.summaries() {
        let xs: Vec<Var> = (1..=s.pred.arity).map(|i| sld.reg.fresh(format!("X{i}"))).collect();
        let vi = vi_of(&xs);
        let goal = Goal::Call {
            pred: s.pred.clone(),
            args: xs.iter().map(|&v| Term::Var(v)).collect(),
        };
        let answers = sld.solve(goal);
        let Some(st) = &s.state else {
            if !answers.is_empty() {
                findings.push(format!("{}: answers exist but summary is unreachable\n{src}", s.pred));
            }
            continue;
        };
        let map: BTreeMap<Var, Var> = s.formals.iter().copied().zip(xs.iter().copied()).collect();
        let back: BTreeMap<Var, Var> = xs.iter().copied().zip(s.formals.iter().copied()).collect();
        let h: VarSet = st.h.iter().map(|v| map[v]).collect();
        let p = st.p.rename(&map);
        for tau in answers {
            checked += 1;
            let hv = hvars(&tau);
            if !h.iter().all(|&v| hv.contains(v)) {
                findings.push(format!("{}: finiteness claim violated\n{src}", s.pred));
            }
            let hval = finitree::concrete::hval(&tau, &vi);
            let gval = finitree::concrete::gval(&tau, &vi);
            let on = |val: &BTreeMap<Var, bool>| -> BTreeMap<Var, bool> {
                val.iter().map(|(v, b)| (back[v], *b)).collect()
            };
            if !eval_on(&a.ops.m, st.phi, &on(&hval)) {
                findings.push(format!("{}: fd formula false on an answer\n{src}", s.pred));
            }
            if !eval_on(&a.ops.m, st.psi, &on(&gval)) {
                findings.push(format!("{}: gd formula false on an answer\n{src}", s.pred));
            }
            if !sfl::alpha(&tau, &vi).leq(&p) {
                findings.push(format!("{}: sharing summary excludes an answer\n{src}", s.pred));
            }
        }
    }
    checked
}

fn end_to_end() -> Outcome {
    let mut rng = rng(11);
    let mut findings = Vec::new();
    let mut answers = 0;
    let mut programs = 0;
    for src in [FINITENESS, GROUNDNESS1, GROUNDNESS2] {
        answers += end_to_end_program(src, &mut findings);
        programs += 1;
    }
    for _ in 0..300 {
        let src = random_program(&mut rng);
        answers += end_to_end_program(&src, &mut findings);
        programs += 1;
    }
    if let Some(first) = findings.first() {
        return Err(format!("{} unsound findings, first: {first}", findings.len()));
    }
    check(answers >= 500, &format!("only {answers} concrete answers checked"))?;
    Ok(format!("{programs} programs, {answers} concrete answers inside their summaries"))
}

fn main() {
    let secs = Duration::from_secs;
    let ms = Duration::from_millis;
    let results = [
        criterion("1", "golden finiteness program", secs(1), golden_finiteness),
        criterion("2", "golden groundness program 1", secs(1), || golden_groundness(GROUNDNESS1, false)),
        criterion("3", "golden groundness program 2", secs(1), || golden_groundness(GROUNDNESS2, true)),
        criterion("4", "set sharing versus pair sharing", ms(100), golden_set_sharing),
        criterion("5", "hvars and gvars examples", ms(100), golden_hvars_gvars),
        criterion("6", "hvars/gvars against graph oracles", secs(30), oracle_equivalence),
        criterion("7", "amgu_H soundness against concrete unification", secs(60), amgu_h_soundness),
        criterion("8", "permanence on down-set chains", secs(30), permanence),
        criterion("9", "reductions idempotent after merge and projection", secs(30), reduction_idempotence),
        criterion("10", "boolfun differential against truth tables", secs(30), boolfun_differential),
        criterion("11", "end-to-end soundness against bounded SLD", secs(120), end_to_end),
    ];
    let failed = results.iter().filter(|&&p| !p).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
