//! Set-sharing with freeness and linearity.

use std::collections::BTreeSet;
use std::fmt;

use crate::concrete::{occ, rt_free, rt_linear};
use crate::subst::RSubst;
use crate::term::{fmt_varset, occ_lin, Term, Var, VarRegistry, VarSet};

/// A set of sharing groups; every group is a non-empty set of variables.
pub type SharingSet = BTreeSet<VarSet>;

/// Groups that meet `v`.
pub fn rel(v: &VarSet, sh: &SharingSet) -> SharingSet {
    sh.iter().filter(|g| !g.is_disjoint(v)).cloned().collect()
}

/// Groups that do not meet `v`.
pub fn rel_bar(v: &VarSet, sh: &SharingSet) -> SharingSet {
    sh.iter().filter(|g| g.is_disjoint(v)).cloned().collect()
}

/// All non-empty unions of groups in `sh`.
pub fn star(sh: &SharingSet) -> SharingSet {
    let mut acc = SharingSet::new();
    for g in sh {
        let extended: Vec<VarSet> = acc.iter().map(|s| s.union(g).copied().collect()).collect();
        acc.insert(g.clone());
        acc.extend(extended);
    }
    acc
}

/// Pairwise unions.
pub fn bin(sh1: &SharingSet, sh2: &SharingSet) -> SharingSet {
    let mut out = SharingSet::new();
    for a in sh1 {
        for b in sh2 {
            out.insert(a.union(b).copied().collect());
        }
    }
    out
}

pub fn cyclic(x: Var, t: &Term, sh: &SharingSet) -> SharingSet {
    let vt = t.vars();
    let mut xt = vt.clone();
    xt.insert(x);
    let mut t_minus_x = vt;
    t_minus_x.remove(&x);
    let mut out = rel_bar(&xt, sh);
    out.extend(rel(&t_minus_x, sh));
    out
}

pub fn proj_sh(sh: &SharingSet, x: Var) -> SharingSet {
    let single: VarSet = [x].into();
    let mut out: SharingSet = [single.clone()].into();
    for g in sh {
        if *g != single {
            let mut g = g.clone();
            g.remove(&x);
            if !g.is_empty() {
                out.insert(g);
            }
        }
    }
    out
}

pub fn sh_vars(sh: &SharingSet) -> VarSet {
    sh.iter().flatten().copied().collect()
}

/// The query predicates evaluated on a pair of terms.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SflPredicates {
    pub ind: bool,
    pub ground_s: bool,
    pub ground_t: bool,
    pub free_s: bool,
    pub free_t: bool,
    pub gfree_s: bool,
    pub gfree_t: bool,
    pub lin_s: bool,
    pub lin_t: bool,
    pub or_lin: bool,
    pub share_lin: bool,
}

/// An element of the domain, or its bottom.
///
/// Bottom is stored as `⟨∅, VI, VI⟩` with a flag, so predicates can be
/// evaluated on it uniformly.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SflElement {
    vi: VarSet,
    sh: SharingSet,
    f: VarSet,
    l: VarSet,
    bottom: bool,
}

impl SflElement {
    /// The element where every variable is free and independent.
    pub fn top_free(vi: &VarSet) -> Self {
        SflElement {
            vi: vi.clone(),
            sh: vi.iter().map(|&v| [v].into()).collect(),
            f: vi.clone(),
            l: vi.clone(),
            bottom: false,
        }
    }

    /// The least informative element: any sharing, nothing known.
    pub fn top(vi: &VarSet) -> Self {
        let singles: SharingSet = vi.iter().map(|&v| [v].into()).collect();
        SflElement {
            vi: vi.clone(),
            sh: star(&singles),
            f: VarSet::new(),
            l: VarSet::new(),
            bottom: false,
        }
    }

    pub fn bottom(vi: &VarSet) -> Self {
        SflElement {
            vi: vi.clone(),
            sh: SharingSet::new(),
            f: vi.clone(),
            l: vi.clone(),
            bottom: true,
        }
    }

    /// Build an element from its components. `f` and `l` are intersected
    /// with `VI` and `l` is closed under the normalization
    /// `l ⊇ (VI \ vars(sh)) ∪ f`.
    pub fn new(vi: &VarSet, sh: SharingSet, f: VarSet, l: VarSet) -> Self {
        debug_assert!(sh.iter().all(|g| !g.is_empty() && g.is_subset(vi)));
        let mut e = SflElement {
            vi: vi.clone(),
            sh,
            f: f.intersection(vi).copied().collect(),
            l: l.intersection(vi).copied().collect(),
            bottom: false,
        };
        e.normalize();
        e
    }

    fn normalize(&mut self) {
        if self.bottom {
            return;
        }
        let shv = sh_vars(&self.sh);
        let f = self.f.clone();
        self.l.extend(self.vi.iter().filter(|v| !shv.contains(v)));
        self.l.extend(f);
    }

    pub fn is_bottom(&self) -> bool {
        self.bottom
    }

    pub fn vi(&self) -> &VarSet {
        &self.vi
    }

    pub fn sh(&self) -> &SharingSet {
        &self.sh
    }

    pub fn free(&self) -> &VarSet {
        &self.f
    }

    pub fn linear(&self) -> &VarSet {
        &self.l
    }

    fn sh_of(&self, t: &Term) -> SharingSet {
        rel(&t.vars(), &self.sh)
    }

    pub fn ind(&self, s: &Term, t: &Term) -> bool {
        self.sh_of(s).is_disjoint(&self.sh_of(t))
    }

    pub fn ground(&self, t: &Term) -> bool {
        t.vars().is_disjoint(&sh_vars(&self.sh))
    }

    pub fn is_free(&self, t: &Term) -> bool {
        t.as_var().is_some_and(|v| self.vi.contains(&v) && self.f.contains(&v))
    }

    pub fn gfree(&self, t: &Term) -> bool {
        self.ground(t) || self.is_free(t)
    }

    pub fn occ_lin_d(&self, y: Var, t: &Term) -> bool {
        let yt = Term::Var(y);
        self.ground(&yt)
            || (occ_lin(y, t)
                && self.l.contains(&y)
                && t.vars().into_iter().all(|z| z == y || self.ind(&yt, &Term::Var(z))))
    }

    pub fn lin(&self, t: &Term) -> bool {
        t.vars().into_iter().all(|y| self.occ_lin_d(y, t))
    }

    pub fn or_lin(&self, s: &Term, t: &Term) -> bool {
        self.lin(s) || self.lin(t)
    }

    pub fn share_lin(&self, s: &Term, t: &Term) -> bool {
        let (vs, vt) = (s.vars(), t.vars());
        self.share_same_var(s, t).into_iter().all(|y| {
            (!vs.contains(&y) || self.occ_lin_d(y, s)) && (!vt.contains(&y) || self.occ_lin_d(y, t))
        })
    }

    pub fn share_same_var(&self, s: &Term, t: &Term) -> VarSet {
        let common: SharingSet = self.sh_of(s).intersection(&self.sh_of(t)).cloned().collect();
        sh_vars(&common)
    }

    pub fn share_with(&self, t: &Term) -> VarSet {
        sh_vars(&self.sh_of(t))
    }

    pub fn predicates(&self, s: &Term, t: &Term) -> SflPredicates {
        let (lin_s, lin_t) = (self.lin(s), self.lin(t));
        SflPredicates {
            ind: self.ind(s, t),
            ground_s: self.ground(s),
            ground_t: self.ground(t),
            free_s: self.is_free(s),
            free_t: self.is_free(t),
            gfree_s: self.gfree(s),
            gfree_t: self.gfree(t),
            lin_s,
            lin_t,
            or_lin: lin_s || lin_t,
            share_lin: self.share_lin(s, t),
        }
    }

    /// `(share_same_var(s,t), share_with(s), share_with(t))`.
    pub fn share_queries(&self, s: &Term, t: &Term) -> (VarSet, VarSet, VarSet) {
        (self.share_same_var(s, t), self.share_with(s), self.share_with(t))
    }

    /// Abstract effect of the binding `x ↦ t`.
    pub fn amgu(&self, x: Var, t: &Term) -> SflElement {
        if self.bottom || t.as_var() == Some(x) {
            return self.clone();
        }
        debug_assert!(self.vi.contains(&x) && t.vars().is_subset(&self.vi));
        let xt = Term::Var(x);
        let vt = t.vars();
        let mut xvt = vt.clone();
        xvt.insert(x);
        let sh_x = rel(&[x].into(), &self.sh);
        let sh_t = rel(&vt, &self.sh);
        let sh_xt: SharingSet = sh_x.intersection(&sh_t).cloned().collect();
        let sh_minus = rel_bar(&xvt, &self.sh);

        let (free_x, free_t) = (self.is_free(&xt), self.is_free(t));
        let (lin_x, lin_t) = (self.lin(&xt), self.lin(t));

        let sh2 = if free_x || free_t {
            bin(&sh_x, &sh_t)
        } else if lin_x && lin_t {
            let xt_star = star(&sh_xt);
            let mut left = sh_x.clone();
            left.extend(bin(&sh_x, &xt_star));
            let mut right = sh_t.clone();
            right.extend(bin(&sh_t, &xt_star));
            bin(&left, &right)
        } else if lin_x {
            bin(&star(&sh_x), &sh_t)
        } else if lin_t {
            bin(&sh_x, &star(&sh_t))
        } else {
            bin(&star(&sh_x), &star(&sh_t))
        };
        let mut pre = sh_minus;
        pre.extend(sh2);
        let sh_new = cyclic(x, t, &pre);

        let s_x = sh_vars(&sh_x);
        let s_t = sh_vars(&sh_t);
        let diff = |a: &VarSet, b: &VarSet| -> VarSet { a.difference(b).copied().collect() };
        let union: VarSet = s_x.union(&s_t).copied().collect();
        let f_new = if free_x && free_t {
            self.f.clone()
        } else if free_x {
            diff(&self.f, &s_x)
        } else if free_t {
            diff(&self.f, &s_t)
        } else {
            diff(&self.f, &union)
        };
        let l2 = if lin_x && lin_t {
            diff(&self.l, &s_x.intersection(&s_t).copied().collect())
        } else if lin_x {
            diff(&self.l, &s_x)
        } else if lin_t {
            diff(&self.l, &s_t)
        } else {
            diff(&self.l, &union)
        };
        let shv = sh_vars(&sh_new);
        let mut l_new: VarSet = self.vi.iter().copied().filter(|v| !shv.contains(v)).collect();
        l_new.extend(f_new.iter().copied());
        l_new.extend(l2);
        SflElement::new(&self.vi, sh_new, f_new, l_new)
    }

    /// Project away `x`, which stays in `VI` as a fresh free variable.
    pub fn project(&self, x: Var) -> SflElement {
        if self.bottom {
            return self.clone();
        }
        let mut f = self.f.clone();
        f.insert(x);
        let mut l = self.l.clone();
        l.insert(x);
        SflElement::new(&self.vi, proj_sh(&self.sh, x), f, l)
    }

    /// Least upper bound. Both arguments must share `VI`.
    pub fn merge(&self, other: &SflElement) -> SflElement {
        debug_assert_eq!(self.vi, other.vi);
        if self.bottom {
            return other.clone();
        }
        if other.bottom {
            return self.clone();
        }
        SflElement::new(
            &self.vi,
            self.sh.union(&other.sh).cloned().collect(),
            self.f.intersection(&other.f).copied().collect(),
            self.l.intersection(&other.l).copied().collect(),
        )
    }

    /// Component-wise order: `self` is at least as precise as `other`.
    pub fn leq(&self, other: &SflElement) -> bool {
        if self.bottom {
            return true;
        }
        if other.bottom {
            return false;
        }
        self.sh.is_subset(&other.sh) && self.f.is_superset(&other.f) && self.l.is_superset(&other.l)
    }

    /// Add fresh, free, independent variables to `VI`.
    pub fn extend(&self, vars: &VarSet) -> SflElement {
        let mut vi = self.vi.clone();
        vi.extend(vars.iter().copied());
        if self.bottom {
            return SflElement::bottom(&vi);
        }
        let new: VarSet = vars.difference(&self.vi).copied().collect();
        let mut sh = self.sh.clone();
        sh.extend(new.iter().map(|&v| VarSet::from([v])));
        let mut f = self.f.clone();
        f.extend(new.iter().copied());
        let mut l = self.l.clone();
        l.extend(new.iter().copied());
        SflElement::new(&vi, sh, f, l)
    }

    /// Conjunction with an element over disjoint variables.
    pub fn conjoin_independent(&self, other: &SflElement) -> SflElement {
        debug_assert!(self.vi.is_disjoint(&other.vi));
        let vi: VarSet = self.vi.union(&other.vi).copied().collect();
        if self.bottom || other.bottom {
            return SflElement::bottom(&vi);
        }
        SflElement::new(
            &vi,
            self.sh.union(&other.sh).cloned().collect(),
            self.f.union(&other.f).copied().collect(),
            self.l.union(&other.l).copied().collect(),
        )
    }

    /// Drop `x` from `VI`, forgetting everything about it. Usually applied
    /// right after [`SflElement::project`].
    pub fn remove_var(&self, x: Var) -> SflElement {
        let mut vi = self.vi.clone();
        vi.remove(&x);
        if self.bottom {
            return SflElement::bottom(&vi);
        }
        let sh = self
            .sh
            .iter()
            .map(|g| g.iter().copied().filter(|&v| v != x).collect::<VarSet>())
            .filter(|g| !g.is_empty())
            .collect();
        SflElement::new(&vi, sh, self.f.clone(), self.l.clone())
    }

    /// Rename variables (injectively) throughout.
    pub fn rename(&self, map: &std::collections::BTreeMap<Var, Var>) -> SflElement {
        let r = |v: &Var| map.get(v).copied().unwrap_or(*v);
        let vi: VarSet = self.vi.iter().map(r).collect();
        if self.bottom {
            return SflElement::bottom(&vi);
        }
        SflElement::new(
            &vi,
            self.sh.iter().map(|g| g.iter().map(r).collect()).collect(),
            self.f.iter().map(r).collect(),
            self.l.iter().map(r).collect(),
        )
    }

    /// Restrict to `VI ∩ keep` by projecting away the other variables.
    pub fn restrict(&self, keep: &VarSet) -> SflElement {
        let drop: Vec<Var> = self.vi.difference(keep).copied().collect();
        drop.into_iter().fold(self.clone(), |d, v| d.project(v).remove_var(v))
    }

    pub fn display<'a>(&'a self, reg: &'a VarRegistry) -> SflDisplay<'a> {
        SflDisplay { d: self, reg }
    }
}

/// Exact abstraction of a solved form onto `VI`.
pub fn alpha(sigma: &RSubst, vi: &VarSet) -> SflElement {
    let mut candidates: VarSet = sigma.vars();
    candidates.extend(vi.iter().copied());
    let sh: SharingSet = candidates
        .into_iter()
        .filter(|v| !sigma.in_dom(*v))
        .map(|v| occ(sigma, v).intersection(vi).copied().collect::<VarSet>())
        .filter(|g| !g.is_empty())
        .collect();
    let f = vi.iter().copied().filter(|&x| rt_free(x, sigma)).collect();
    let l = vi.iter().copied().filter(|&x| rt_linear(x, sigma)).collect();
    SflElement::new(vi, sh, f, l)
}

pub struct SflDisplay<'a> {
    d: &'a SflElement,
    reg: &'a VarRegistry,
}

impl fmt::Display for SflDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.d.bottom {
            return write!(f, "bottom");
        }
        let groups: Vec<String> = self.d.sh.iter().map(|g| fmt_varset(g, self.reg)).collect();
        write!(
            f,
            "sh={{{}}} f={} l={}",
            groups.join(","),
            fmt_varset(&self.d.f, self.reg),
            fmt_varset(&self.d.l, self.reg)
        )
    }
}
