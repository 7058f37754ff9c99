//! Finite-tree dependencies (arbitrary Boolean functions) and groundness
//! dependencies (positive functions), with the reductions between them and
//! the finiteness component.

use crate::boolfun::{Bdd, BddManager, BoolAlgebra, UnknownVariable};
use crate::hp::HSet;
use crate::term::{Term, Var, VarSet};

pub type FdFormula = Bdd;
pub type GdFormula = Bdd;

fn conj_of(m: &mut BddManager, vars: &VarSet) -> Result<Bdd, UnknownVariable> {
    m.conj_vars(vars)
}

/// `φ ∧ (x ↔ ⋀vars(t))` when `x ∉ vars(t)`, otherwise `φ ∧ ¬x`.
/// The trivial equation `x = x` leaves `φ` unchanged.
pub fn amgu_fd(m: &mut BddManager, phi: FdFormula, x: Var, t: &Term) -> Result<FdFormula, UnknownVariable> {
    let xv = m.var(x)?;
    if t.as_var() == Some(x) {
        return Ok(phi);
    }
    let vt = t.vars();
    let c = if vt.contains(&x) {
        m.not(xv)
    } else {
        let all = conj_of(m, &vt)?;
        m.iff(xv, all)
    };
    Ok(m.and(phi, c))
}

/// `ψ ∧ (x ↔ ⋀(vars(t) \ {x}))`, or `ψ` for `x = x`.
pub fn amgu_gd(m: &mut BddManager, psi: GdFormula, x: Var, t: &Term) -> Result<GdFormula, UnknownVariable> {
    let xv = m.var(x)?;
    if t.as_var() == Some(x) {
        return Ok(psi);
    }
    let mut vt = t.vars();
    vt.remove(&x);
    let all = conj_of(m, &vt)?;
    let c = m.iff(xv, all);
    Ok(m.and(psi, c))
}

pub fn project(m: &mut BddManager, f: Bdd, x: Var) -> Result<Bdd, UnknownVariable> {
    m.exists(x, f)
}

pub fn merge(m: &mut BddManager, f: Bdd, g: Bdd) -> Bdd {
    m.or(f, g)
}

/// `true(φ ∧ ⋀h)` over `vi`.
pub fn reduce_h_from_fd(m: &mut BddManager, h: &HSet, phi: FdFormula, vi: &VarSet) -> Result<HSet, UnknownVariable> {
    let hv = conj_of(m, h)?;
    let f = m.and(phi, hv);
    Ok(m.true_set(f, vi))
}

/// `h ∩ false(φ ∧ ⋀h) = ∅`.
pub fn consistency_check(m: &mut BddManager, h: &HSet, phi: FdFormula, vi: &VarSet) -> Result<bool, UnknownVariable> {
    let hv = conj_of(m, h)?;
    let f = m.and(phi, hv);
    Ok(h.is_disjoint(&m.false_set(f, vi)))
}

/// `ψ ∧ pos(∃(VI \ h) . φ)`.
pub fn reduce_gd_from_fd(
    m: &mut BddManager,
    h: &HSet,
    phi: FdFormula,
    psi: GdFormula,
    vi: &VarSet,
) -> Result<GdFormula, UnknownVariable> {
    let outside: VarSet = vi.difference(h).copied().collect();
    let q = m.exists_all(&outside, phi)?;
    let p = m.pos_part(q, vi)?;
    Ok(m.and(psi, p))
}

/// `φ ∧ ∃(VI \ h) . ψ`.
pub fn reduce_fd_from_gd(
    m: &mut BddManager,
    h: &HSet,
    phi: FdFormula,
    psi: GdFormula,
    vi: &VarSet,
) -> Result<FdFormula, UnknownVariable> {
    let outside: VarSet = vi.difference(h).copied().collect();
    let q = m.exists_all(&outside, psi)?;
    Ok(m.and(phi, q))
}

/// `ψ ∧ ⋀true(φ)`.
pub fn reduce_gd_from_true(
    m: &mut BddManager,
    phi: FdFormula,
    psi: GdFormula,
    vi: &VarSet,
) -> Result<GdFormula, UnknownVariable> {
    let t = m.true_set(phi, vi);
    let c = conj_of(m, &t)?;
    Ok(m.and(psi, c))
}

/// Which reductions changed something in one call of [`reduce_all`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Fired {
    pub h_from_fd: bool,
    pub gd_from_fd: bool,
    pub fd_from_gd: bool,
    pub gd_from_true: bool,
}

impl Fired {
    pub fn absorb(&mut self, other: Fired) {
        self.h_from_fd |= other.h_from_fd;
        self.gd_from_fd |= other.gd_from_fd;
        self.fd_from_gd |= other.fd_from_gd;
        self.gd_from_true |= other.gd_from_true;
    }

    pub fn any(&self) -> bool {
        self.h_from_fd || self.gd_from_fd || self.fd_from_gd || self.gd_from_true
    }

    pub fn names(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.h_from_fd {
            out.push("h_from_fd");
        }
        if self.fd_from_gd {
            out.push("fd_from_gd");
        }
        if self.gd_from_fd {
            out.push("gd_from_fd");
        }
        if self.gd_from_true {
            out.push("gd_from_true");
        }
        out
    }
}

/// Apply all reductions until none changes the triple. Returns the reduced
/// triple and the reductions that made progress. When `use_gd` is false the
/// groundness component is left alone.
pub fn reduce_all(
    m: &mut BddManager,
    h: &HSet,
    phi: FdFormula,
    psi: GdFormula,
    vi: &VarSet,
    use_gd: bool,
) -> Result<(HSet, FdFormula, GdFormula, Fired), UnknownVariable> {
    let (mut h, mut phi, mut psi) = (h.clone(), phi, psi);
    let mut fired = Fired::default();
    if phi.is_false() {
        return Ok((h, phi, psi, fired));
    }
    loop {
        let mut changed = false;
        let h2 = reduce_h_from_fd(m, &h, phi, vi)?;
        if h2 != h {
            fired.h_from_fd = true;
            changed = true;
            h = h2;
        }
        if use_gd {
            let phi2 = reduce_fd_from_gd(m, &h, phi, psi, vi)?;
            if phi2 != phi {
                fired.fd_from_gd = true;
                changed = true;
                phi = phi2;
            }
            let psi2 = reduce_gd_from_fd(m, &h, phi, psi, vi)?;
            if psi2 != psi {
                fired.gd_from_fd = true;
                changed = true;
                psi = psi2;
            }
            let psi3 = reduce_gd_from_true(m, phi, psi, vi)?;
            if psi3 != psi {
                fired.gd_from_true = true;
                changed = true;
                psi = psi3;
            }
        }
        if !changed || phi.is_false() {
            return Ok((h, phi, psi, fired));
        }
    }
}
