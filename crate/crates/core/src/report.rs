//! Per-predicate reports, as JSON and as text. The text form is rendered
//! from the [`Report`] value alone, so a report read back from JSON prints
//! identically.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::analyzer::{AbsState, AnalysisError, Analyzer};
use crate::deps::Fired;
use crate::program::PredId;
use crate::term::{Var, VarSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub predicates: Vec<PredicateReport>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredicateReport {
    pub name: String,
    pub arity: usize,
    /// 1-based positions of arguments known to be finite trees.
    pub finite_params: Vec<usize>,
    pub sharing: SharingReport,
    /// `None` when the finite-tree dependency layer is disabled.
    pub fd_formula: Option<String>,
    /// `None` when the groundness layer is disabled.
    pub gd_formula: Option<String>,
    pub reductions_fired: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SharingReport {
    pub groups: Vec<Vec<usize>>,
    pub free: Vec<usize>,
    pub linear: Vec<usize>,
}

fn positions(params: &[Var], set: &VarSet) -> Vec<usize> {
    params
        .iter()
        .enumerate()
        .filter(|(_, v)| set.contains(v))
        .map(|(i, _)| i + 1)
        .collect()
}

fn predicate_report(
    a: &Analyzer,
    pred: &PredId,
    params: &[Var],
    state: Option<&AbsState>,
    fired: Fired,
) -> PredicateReport {
    let domain = a.options.domain;
    let all: VarSet = params.iter().copied().collect();
    let name = |v: Var| match params.iter().position(|&w| w == v) {
        Some(i) => format!("X{}", i + 1),
        None => a.reg.display_name(v),
    };
    let (finite, sharing, fd, gd) = match state {
        // No success: every property holds vacuously.
        None => {
            let all_pos = positions(params, &all);
            (
                all_pos.clone(),
                SharingReport {
                    groups: Vec::new(),
                    free: all_pos.clone(),
                    linear: all_pos,
                },
                "false".to_string(),
                "false".to_string(),
            )
        }
        Some(s) => (
            positions(params, &s.h),
            SharingReport {
                groups: s.p.sh().iter().map(|g| positions(params, g)).collect(),
                free: positions(params, s.p.free()),
                linear: positions(params, s.p.linear()),
            },
            a.ops.m.to_sop(s.phi, &name),
            a.ops.m.to_sop(s.psi, &name),
        ),
    };
    PredicateReport {
        name: pred.name.to_string(),
        arity: pred.arity,
        finite_params: finite,
        sharing,
        fd_formula: domain.fd().then_some(fd),
        gd_formula: domain.gd().then_some(gd),
        reductions_fired: fired.names().into_iter().map(String::from).collect(),
    }
}

/// Report on every analyzed predicate, or on the given entries only.
/// Entries are run from fresh variables against the summaries.
pub fn build_report(a: &mut Analyzer, entries: &[PredId]) -> Result<Report, AnalysisError> {
    let mut predicates = Vec::new();
    if entries.is_empty() {
        for s in a.summaries() {
            predicates.push(predicate_report(a, &s.pred, &s.formals, s.state.as_ref(), s.fired));
        }
    } else {
        for e in entries {
            let (vars, st) = a.specialize_entry(e)?;
            let mut fired = a.summary(e).map(|s| s.fired).unwrap_or_default();
            fired.absorb(a.ops.last_fired());
            predicates.push(predicate_report(a, e, &vars, st.as_ref(), fired));
        }
    }
    Ok(Report {
        predicates,
        warnings: a.warnings().cloned().collect(),
    })
}

fn fmt_positions(ps: &[usize]) -> String {
    let names: Vec<String> = ps.iter().map(|i| format!("X{i}")).collect();
    format!("{{{}}}", names.join(","))
}

/// Human-readable rendering.
pub fn render_text(r: &Report) -> String {
    let mut out = String::new();
    for p in &r.predicates {
        let _ = writeln!(out, "{}/{}: finite {}", p.name, p.arity, fmt_positions(&p.finite_params));
        let groups: Vec<String> = p.sharing.groups.iter().map(|g| fmt_positions(g)).collect();
        let _ = writeln!(
            out,
            "  sharing: sh={{{}}} f={} l={}",
            groups.join(","),
            fmt_positions(&p.sharing.free),
            fmt_positions(&p.sharing.linear)
        );
        if let Some(fd) = &p.fd_formula {
            let _ = writeln!(out, "  fd: {fd}");
        }
        if let Some(gd) = &p.gd_formula {
            let _ = writeln!(out, "  gd: {gd}");
        }
        let fired = if p.reductions_fired.is_empty() {
            "none".to_string()
        } else {
            p.reductions_fired.join(", ")
        };
        let _ = writeln!(out, "  reductions: {fired}");
    }
    for w in &r.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
    out
}
