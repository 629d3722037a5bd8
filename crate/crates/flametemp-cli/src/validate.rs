//! Database validation report: subrange continuity at T_mid, reference
//! enthalpies of elemental species, Cp positivity, and range metadata.

use std::fmt::Write as _;

use serde::Serialize;

use flametemp_core::prelude::*;

/// Continuity residuals above this fail validation.
pub const CONTINUITY_LIMIT: f64 = 1e-3;

/// Elemental reference enthalpies beyond this are flagged as notes.
pub const REF_ENTHALPY_NOTE_J_MOL: f64 = 0.05;

/// Species whose enthalpy should vanish at 298.15 K.
const ELEMENTAL: &[&str] = &["AR", "N2", "O2", "H2"];

#[derive(Debug, Clone, Serialize)]
pub struct SpeciesReport {
    pub name: String,
    pub t_min: f64,
    pub t_mid: f64,
    pub t_max: f64,
    /// |low - high| at t_mid for cp/R, h/RT, s/R.
    pub cp_gap: f64,
    pub h_gap: f64,
    pub s_gap: f64,
    pub continuity_ok: bool,
    pub cp_positive: bool,
    /// h(298.15 K) in J/mol for the elemental reference species.
    pub ref_enthalpy_j_mol: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub species: Vec<SpeciesReport>,
    pub parser_warnings: Vec<String>,
    pub pass: bool,
}

pub fn validate_database(db: &ThermoDatabase) -> Result<ValidationReport, Error> {
    let eps = 1e-6;
    let mut species = Vec::with_capacity(db.len());
    for rec in db.species() {
        let tm = rec.poly.t_mid;
        let gap = |f: &dyn Fn(f64) -> Result<EvalResult, Error>| -> Result<f64, Error> {
            Ok((f(tm - eps)?.value - f(tm + eps)?.value).abs())
        };
        let cp_gap = gap(&|t| rec.cp_r(t))?;
        let h_gap = gap(&|t| rec.h_rt(t))?;
        let s_gap = gap(&|t| rec.s_r(t))?;

        let mut cp_positive = true;
        for k in 0..=100 {
            let t = rec.poly.t_min + (rec.poly.t_max - rec.poly.t_min) * (k as f64) / 100.0;
            if rec.cp_r(t)?.value <= 0.0 {
                cp_positive = false;
                break;
            }
        }

        let ref_enthalpy = if ELEMENTAL.contains(&rec.name.as_str()) {
            Some(rec.h_molar(T_REF)?.value)
        } else {
            None
        };

        species.push(SpeciesReport {
            name: rec.name.clone(),
            t_min: rec.poly.t_min,
            t_mid: tm,
            t_max: rec.poly.t_max,
            cp_gap,
            h_gap,
            s_gap,
            continuity_ok: cp_gap <= CONTINUITY_LIMIT
                && h_gap <= CONTINUITY_LIMIT
                && s_gap <= CONTINUITY_LIMIT,
            cp_positive,
            ref_enthalpy_j_mol: ref_enthalpy,
        });
    }
    let pass = species.iter().all(|s| s.continuity_ok);
    Ok(ValidationReport {
        species,
        parser_warnings: db.warnings.clone(),
        pass,
    })
}

pub fn render_report(report: &ValidationReport) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "{:<10} {:>8} {:>8} {:>8} {:>10} {:>10} {:>10}  {}",
        "species", "T_min", "T_mid", "T_max", "cp gap", "h gap", "s gap", "notes"
    )
    .unwrap();
    for sp in &report.species {
        let mut notes: Vec<String> = Vec::new();
        if !sp.continuity_ok {
            notes.push("DISCONTINUOUS".to_string());
        }
        if !sp.cp_positive {
            notes.push("cp <= 0 in range".to_string());
        }
        if let Some(h) = sp.ref_enthalpy_j_mol {
            if h.abs() > REF_ENTHALPY_NOTE_J_MOL {
                notes.push(format!("h(298.15 K) = {h:+.3} J/mol (expected ~0)"));
            } else {
                notes.push(format!("h(298.15 K) = {h:+.3} J/mol"));
            }
        }
        writeln!(
            out,
            "{:<10} {:>8.1} {:>8.1} {:>8.1} {:>10.2e} {:>10.2e} {:>10.2e}  {}",
            sp.name,
            sp.t_min,
            sp.t_mid,
            sp.t_max,
            sp.cp_gap,
            sp.h_gap,
            sp.s_gap,
            notes.join("; ")
        )
        .unwrap();
    }
    for w in &report.parser_warnings {
        writeln!(out, "parser warning: {w}").unwrap();
    }
    let worst = report
        .species
        .iter()
        .map(|s| s.cp_gap.max(s.h_gap).max(s.s_gap))
        .fold(0.0f64, f64::max);
    writeln!(
        out,
        "result: {} ({} species, worst continuity residual {:.2e}, limit {CONTINUITY_LIMIT:.0e})",
        if report.pass { "PASS" } else { "FAIL" },
        report.species.len(),
        worst
    )
    .unwrap();
    out
}
