//! The finiteness component `H` and its product with a sharing domain.

use std::fmt;

use crate::concrete::hvars;
use crate::sfl::SflElement;
use crate::subst::RSubst;
use crate::term::{fmt_varset, Term, Var, VarRegistry, VarSet};

/// Queries and operations a sharing domain must provide so that the
/// finiteness component can be combined with it.
///
/// Every predicate is a definite property: when it answers `true`, the
/// property holds for every concrete substitution described by the element.
/// `share_same_var` and `share_with` may over-approximate.
pub trait ParamDomain: Clone + PartialEq {
    fn vi(&self) -> &VarSet;
    fn is_bottom(&self) -> bool;
    fn ind(&self, s: &Term, t: &Term) -> bool;
    fn ground(&self, t: &Term) -> bool;
    fn gfree(&self, t: &Term) -> bool;
    fn lin(&self, t: &Term) -> bool;
    fn or_lin(&self, s: &Term, t: &Term) -> bool;
    fn share_lin(&self, s: &Term, t: &Term) -> bool;
    fn share_same_var(&self, s: &Term, t: &Term) -> VarSet;
    fn share_with(&self, t: &Term) -> VarSet;
    fn amgu(&self, x: Var, t: &Term) -> Self;
    fn project(&self, x: Var) -> Self;
    fn merge(&self, other: &Self) -> Self;
}

impl ParamDomain for SflElement {
    fn vi(&self) -> &VarSet {
        SflElement::vi(self)
    }
    fn is_bottom(&self) -> bool {
        SflElement::is_bottom(self)
    }
    fn ind(&self, s: &Term, t: &Term) -> bool {
        SflElement::ind(self, s, t)
    }
    fn ground(&self, t: &Term) -> bool {
        SflElement::ground(self, t)
    }
    fn gfree(&self, t: &Term) -> bool {
        SflElement::gfree(self, t)
    }
    fn lin(&self, t: &Term) -> bool {
        SflElement::lin(self, t)
    }
    fn or_lin(&self, s: &Term, t: &Term) -> bool {
        SflElement::or_lin(self, s, t)
    }
    fn share_lin(&self, s: &Term, t: &Term) -> bool {
        SflElement::share_lin(self, s, t)
    }
    fn share_same_var(&self, s: &Term, t: &Term) -> VarSet {
        SflElement::share_same_var(self, s, t)
    }
    fn share_with(&self, t: &Term) -> VarSet {
        SflElement::share_with(self, t)
    }
    fn amgu(&self, x: Var, t: &Term) -> Self {
        SflElement::amgu(self, x, t)
    }
    fn project(&self, x: Var) -> Self {
        SflElement::project(self, x)
    }
    fn merge(&self, other: &Self) -> Self {
        SflElement::merge(self, other)
    }
}

/// Variables of interest known to be bound to finite trees.
pub type HSet = VarSet;

pub fn alpha_h(sigma: &RSubst, vi: &VarSet) -> HSet {
    hvars(sigma).restrict_to(vi)
}

/// `t` is a finite tree whenever every variable in `h` is.
pub fn hterm(h: &HSet, t: &Term) -> bool {
    t.vars().is_subset(h)
}

fn minus(a: &VarSet, b: &VarSet) -> VarSet {
    a.difference(b).copied().collect()
}

/// New finiteness set after `x ↦ t`, and the number (1 to 8) of the row of
/// the case table that produced it. The trivial equation `x = x` is row 0.
pub fn amgu_h_case<P: ParamDomain>(h: &HSet, p: &P, x: Var, t: &Term) -> (HSet, u8) {
    let xt = Term::Var(x);
    if *t == xt {
        return (h.clone(), 0);
    }
    let hx = h.contains(&x);
    let ht = hterm(h, t);
    if hx && p.ground(&xt) {
        let mut out = h.clone();
        out.extend(t.vars());
        return (out, 1);
    }
    if ht && p.ground(t) {
        let mut out = h.clone();
        out.insert(x);
        return (out, 2);
    }
    if hx && ht {
        if p.ind(&xt, t) && p.or_lin(&xt, t) {
            return (h.clone(), 3);
        }
        if p.gfree(&xt) && p.gfree(t) {
            return (h.clone(), 4);
        }
        if p.share_lin(&xt, t) && p.or_lin(&xt, t) {
            return (minus(h, &p.share_same_var(&xt, t)), 5);
        }
    }
    if hx && p.lin(&xt) {
        return (minus(h, &p.share_with(&xt)), 6);
    }
    if ht && p.lin(t) {
        return (minus(h, &p.share_with(t)), 7);
    }
    let mut both = p.share_with(&xt);
    both.extend(p.share_with(t));
    (minus(h, &both), 8)
}

pub fn amgu_h<P: ParamDomain>(h: &HSet, p: &P, x: Var, t: &Term) -> HSet {
    amgu_h_case(h, p, x, t).0
}

/// The coarsest row of the table, used as a reference in tests.
pub fn amgu_h_coarse<P: ParamDomain>(h: &HSet, p: &P, x: Var, t: &Term) -> HSet {
    let mut both = p.share_with(&Term::Var(x));
    both.extend(p.share_with(t));
    minus(h, &both)
}

pub fn proj_h(h: &HSet, x: Var) -> HSet {
    let mut out = h.clone();
    out.insert(x);
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HPState<P = SflElement> {
    pub h: HSet,
    pub p: P,
}

impl<P: ParamDomain> HPState<P> {
    pub fn new(h: HSet, p: P) -> Self {
        HPState { h, p }
    }

    pub fn amgu(&self, x: Var, t: &Term) -> Self {
        HPState {
            h: amgu_h(&self.h, &self.p, x, t),
            p: self.p.amgu(x, t),
        }
    }

    pub fn project(&self, x: Var) -> Self {
        HPState {
            h: proj_h(&self.h, x),
            p: self.p.project(x),
        }
    }

    pub fn merge(&self, other: &Self) -> Self {
        HPState {
            h: self.h.intersection(&other.h).copied().collect(),
            p: self.p.merge(&other.p),
        }
    }
}

impl HPState<SflElement> {
    pub fn alpha(sigma: &RSubst, vi: &VarSet) -> Self {
        HPState {
            h: alpha_h(sigma, vi),
            p: crate::sfl::alpha(sigma, vi),
        }
    }

    pub fn display<'a>(&'a self, reg: &'a VarRegistry) -> HPDisplay<'a> {
        HPDisplay { s: self, reg }
    }
}

pub struct HPDisplay<'a> {
    s: &'a HPState<SflElement>,
    reg: &'a VarRegistry,
}

impl fmt::Display for HPDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "h={} | {}", fmt_varset(&self.s.h, self.reg), self.s.p.display(self.reg))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sfl::SharingSet;
    use crate::subst::{check_rsubst, Binding};

    fn vs(vars: &[Var]) -> VarSet {
        vars.iter().copied().collect()
    }

    fn sh(groups: &[&[Var]]) -> SharingSet {
        groups.iter().map(|g| vs(g)).collect()
    }

    #[test]
    fn set_sharing_beats_pair_sharing() {
        let mut reg = VarRegistry::new();
        let (x, y, z) = (reg.intern("x"), reg.intern("y"), reg.intern("z"));
        let vi = vs(&[x, y, z]);
        let d = SflElement::new(&vi, sh(&[&[x, y], &[x, z], &[y, z]]), VarSet::new(), vi.clone());
        let (h, case) = amgu_h_case(&vi, &d, x, &y.into());
        assert_eq!(case, 5);
        assert_eq!(h, vs(&[z]));
        // The redundant group {x,y,z} of a pair-sharing view loses z.
        let d2 = SflElement::new(
            &vi,
            sh(&[&[x, y], &[x, z], &[y, z], &[x, y, z]]),
            VarSet::new(),
            vi.clone(),
        );
        assert!(amgu_h(&vi, &d2, x, &y.into()).is_empty());

        let s = HPState::new(vi.clone(), d).amgu(x, &y.into());
        assert_eq!(s.h, vs(&[z]));
        assert_eq!(s.display(&reg).to_string(), format!("h={{z}} | {}", s.p.display(&reg)));
    }

    #[test]
    fn case_rows() {
        let mut reg = VarRegistry::new();
        let (x, y, w) = (reg.intern("x"), reg.intern("y"), reg.intern("w"));
        let vi = vs(&[x, y, w]);
        let d = SflElement::new(&vi, sh(&[&[y], &[w]]), VarSet::new(), VarSet::new());
        let t = Term::app("f", vec![y.into(), w.into()]);
        assert_eq!(amgu_h_case(&vs(&[x]), &d, x, &t), (vs(&[x, y, w]), 1));

        let vi = vs(&[x, y]);
        let d = SflElement::new(&vi, sh(&[&[x], &[y]]), VarSet::new(), vi.clone());
        let t = Term::app("f", vec![x.into()]);
        assert_eq!(amgu_h_case(&vs(&[y]), &d, x, &t), (vs(&[y]), 8));
    }

    #[test]
    fn alpha_and_projection() {
        let mut reg = VarRegistry::new();
        let xs: Vec<Var> = (1..=5).map(|i| reg.intern(&format!("x{i}"))).collect();
        let f = |v: Var| Term::app("f", vec![v.into()]);
        let g = |v: Var| Term::app("g", vec![v.into()]);
        let sigma = check_rsubst([
            Binding::new(xs[0], f(xs[1])),
            Binding::new(xs[1], g(xs[4])),
            Binding::new(xs[2], f(xs[3])),
            Binding::new(xs[3], g(xs[2])),
        ])
        .unwrap();
        assert_eq!(alpha_h(&sigma, &vs(&xs)), vs(&[xs[0], xs[1], xs[4]]));
        assert_eq!(alpha_h(&RSubst::empty(), &vs(&xs)), vs(&xs));
        let c = check_rsubst([Binding::new(xs[0], f(xs[0]))]).unwrap();
        assert_eq!(alpha_h(&c, &vs(&xs[..2])), vs(&[xs[1]]));

        assert!(hterm(&vs(&[xs[0], xs[1]]), &Term::app("f", vec![xs[0].into(), xs[1].into()])));
        assert!(hterm(&VarSet::new(), &Term::atom("a")));
        assert!(!hterm(&vs(&[xs[0]]), &Term::app("f", vec![xs[0].into(), xs[2].into()])));

        let vi = vs(&xs[..2]);
        let d = SflElement::top_free(&vi);
        let s = HPState::new(VarSet::new(), d.clone()).project(xs[0]);
        assert_eq!(s.h, vs(&[xs[0]]));
        assert_eq!(s.p, d.project(xs[0]));
        let b = HPState::new(VarSet::new(), SflElement::bottom(&vi)).project(xs[0]);
        assert!(b.p.is_bottom() && b.h == vs(&[xs[0]]));

        let m = HPState::new(vs(&xs[..2]), d.clone()).merge(&HPState::new(vs(&[xs[1]]), d.clone()));
        assert_eq!(m.h, vs(&[xs[1]]));
    }
}
