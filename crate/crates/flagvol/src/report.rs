//! Text and JSON renderings of reports.

use std::fmt::Write as _;

use flagvol_core::battery::PropertyOutcome;
use flagvol_core::invariants::{RelationCheck, RelationReport, TetContribution};
use flagvol_core::{Complex, InvariantReport};
use serde::Serialize;

/// Which invariants to print.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Selection {
    /// BFG volume.
    pub bfg: bool,
    /// GTZ volume.
    pub gtz: bool,
    /// Cheeger–Chern–Simons class.
    pub cchat: bool,
}

impl Selection {
    /// Everything.
    pub const ALL: Selection = Selection { bfg: true, gtz: true, cchat: true };
}

fn complex_text(z: Complex) -> String {
    format!("{} {} {}i", z.re, if z.im.is_sign_negative() { '-' } else { '+' }, z.im.abs())
}

fn sign(o: i8) -> &'static str {
    if o > 0 {
        "+1"
    } else {
        "-1"
    }
}

/// Plain text report, one `key: value` per line.
pub fn invariants_text(r: &InvariantReport, sel: Selection) -> String {
    let mut s = String::new();
    if sel.bfg {
        let note = if r.bfg_derived { " (derived from vol_gtz)" } else { "" };
        let _ = writeln!(s, "vol_bfg: {}{note}", r.vol_bfg);
    }
    if sel.gtz {
        let _ = writeln!(s, "vol_gtz: {}", r.vol_gtz);
    }
    if sel.cchat {
        let _ = writeln!(s, "cchat: {}", complex_text(r.cchat));
        let _ = writeln!(s, "lattice: real part defined modulo {} (pi^2)", r.lattice);
        let _ = writeln!(s, "cchat_residual: {:e}", r.cchat_residual);
    }
    let _ = writeln!(s, "relation_residual: {:e}", r.relation_residual);
    if sel == Selection::ALL {
        let _ = writeln!(s, "per_tet:");
        for t in &r.per_tet {
            let _ = writeln!(
                s,
                "  tet {} orientation {}: vol_bfg {} vol_gtz {} cchat {}",
                t.id,
                sign(t.orientation),
                t.vol_bfg,
                t.vol_gtz,
                complex_text(t.cchat)
            );
        }
        if !r.warnings.is_empty() {
            let _ = writeln!(s, "warnings:");
            for w in &r.warnings {
                let _ = writeln!(s, "  - {w}");
            }
        }
    }
    s
}

#[derive(Serialize)]
struct TetJson {
    id: i64,
    orientation: i8,
    vol_bfg: f64,
    bfg_derived: bool,
    vol_gtz: f64,
    cchat: [f64; 2],
}

impl From<&TetContribution> for TetJson {
    fn from(t: &TetContribution) -> Self {
        TetJson {
            id: t.id,
            orientation: t.orientation,
            vol_bfg: t.vol_bfg,
            bfg_derived: t.bfg_derived,
            vol_gtz: t.vol_gtz,
            cchat: [t.cchat.re, t.cchat.im],
        }
    }
}

#[derive(Serialize)]
struct ReportJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    vol_bfg: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bfg_derived: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    vol_gtz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cchat: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lattice: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cchat_residual: Option<f64>,
    relation_residual: f64,
    per_tet: Vec<TetJson>,
    warnings: Vec<String>,
}

fn report_json(r: &InvariantReport, sel: Selection) -> ReportJson {
    ReportJson {
        vol_bfg: sel.bfg.then_some(r.vol_bfg),
        bfg_derived: sel.bfg.then_some(r.bfg_derived),
        vol_gtz: sel.gtz.then_some(r.vol_gtz),
        cchat: sel.cchat.then_some([r.cchat.re, r.cchat.im]),
        lattice: sel.cchat.then_some(r.lattice),
        cchat_residual: sel.cchat.then_some(r.cchat_residual),
        relation_residual: r.relation_residual,
        per_tet: r.per_tet.iter().map(TetJson::from).collect(),
        warnings: r.warnings.clone(),
    }
}

/// JSON report.
pub fn invariants_json(r: &InvariantReport, sel: Selection) -> String {
    let mut s = serde_json::to_string_pretty(&report_json(r, sel)).unwrap_or_default();
    s.push('\n');
    s
}

fn check_status(c: &RelationCheck) -> &'static str {
    match (c.asserted, c.within_tol()) {
        (true, true) => "PASS",
        (true, false) => "FAIL",
        (false, _) => "INFO",
    }
}

/// One line per relation check.
pub fn relation_lines(r: &RelationReport) -> Vec<String> {
    r.checks
        .iter()
        .map(|c| {
            format!(
                "{} relations/{}: deviation {:e} (tol {:e}) {}",
                check_status(c),
                c.name,
                c.deviation,
                c.tol,
                c.description
            )
        })
        .collect()
}

/// One line per battery property.
pub fn battery_line(o: &PropertyOutcome) -> String {
    let status = if o.passed() { "PASS" } else { "FAIL" };
    match &o.error {
        Some(e) => format!("{status} {}: error after {} trials: {e}", o.name, o.trials),
        None => format!(
            "{status} {}: {} trials, max deviation {:e}, tol {:e}",
            o.name, o.trials, o.max_deviation, o.tol
        ),
    }
}
