//! Rendering of case results in the supported output formats.

use std::fmt::Write as _;

use serde::Serialize;

use crate::cases::{CaseResult, CaseSpec, Mode};
use crate::reference::EXPLAIN;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Table,
    Csv,
    Json,
    Md,
}

fn mode_label(mode: Mode) -> &'static str {
    match mode {
        Mode::Complete => "complete",
        Mode::Equilibrium => "equilibrium",
    }
}

fn fuel_label(spec: &CaseSpec) -> &'static str {
    spec.fuel.species()
}

/// Render a single case.
pub fn render_case(result: &CaseResult, format: Format, explain: bool) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(result).expect("serializable") + "\n",
        Format::Csv => {
            let mut out = String::from(ROW_HEADER);
            out.push('\n');
            out.push_str(&case_row_csv(result));
            out.push('\n');
            out
        }
        Format::Md => {
            let mut out = String::new();
            out.push_str(MD_HEADER);
            out.push_str(&case_row_md(result));
            out.push('\n');
            if explain {
                out.push('\n');
                out.push_str(EXPLAIN);
                out.push('\n');
            }
            out
        }
        Format::Table => {
            let mut out = String::new();
            let spec = &result.spec;
            writeln!(
                out,
                "case      : {} + {} ({})",
                fuel_label(spec),
                spec.oxidizer.label(),
                mode_label(spec.mode)
            )
            .unwrap();
            writeln!(
                out,
                "conditions: T0 = {:.2} K, P = {} Pa, N2 patch {}",
                spec.t0,
                spec.pressure,
                if spec.patch_n2 { "on" } else { "off" }
            )
            .unwrap();
            writeln!(out, "t_ad      : {:.2} K", result.t_ad).unwrap();
            writeln!(out, "products (top mole fractions):").unwrap();
            for (name, x) in result.products.iter().take(10) {
                writeln!(out, "  {name:<8} {x:.6}").unwrap();
            }
            if let Some(cmp) = &result.reference {
                writeln!(out, "reference comparison:").unwrap();
                writeln!(
                    out,
                    "  CEARUN       {:>9.2} K   deviation {:.3} %",
                    cmp.cearun_k, cmp.deviation_vs_cearun_pct
                )
                .unwrap();
                writeln!(
                    out,
                    "  GRI-Mech 3.0 {:>9.2} K   deviation {:.3} %  (published {:.3} %)",
                    cmp.grimech_k, cmp.deviation_vs_grimech_pct, cmp.published_deviation_pct
                )
                .unwrap();
            }
            for w in &result.warnings {
                writeln!(out, "note: {w}").unwrap();
            }
            if explain {
                out.push('\n');
                out.push_str(EXPLAIN);
                out.push('\n');
            }
            out
        }
    }
}

const ROW_HEADER: &str = "fuel,oxidizer,mode,t_ad_K,cearun_K,grimech_K,dev_vs_cearun_pct,dev_published_pct,extrapolated,status";
const MD_HEADER: &str = "| fuel | oxidizer | mode | t_ad [K] | CEARUN [K] | GRI-Mech [K] | dev vs CEARUN [%] | published dev [%] | notes |\n|---|---|---|---|---|---|---|---|---|\n";

fn reference_cells(result: &CaseResult) -> (String, String, String, String) {
    match &result.reference {
        Some(c) => (
            format!("{:.2}", c.cearun_k),
            format!("{:.2}", c.grimech_k),
            format!("{:.3}", c.deviation_vs_cearun_pct),
            format!("{:.3}", c.published_deviation_pct),
        ),
        None => ("".into(), "".into(), "".into(), "".into()),
    }
}

fn case_row_csv(result: &CaseResult) -> String {
    let (cearun, grimech, dev, dev_pub) = reference_cells(result);
    format!(
        "{},{},{},{:.2},{},{},{},{},{},ok",
        fuel_label(&result.spec),
        result.spec.oxidizer.label().replace(' ', "_").replace(',', ";"),
        mode_label(result.spec.mode),
        result.t_ad,
        cearun,
        grimech,
        dev,
        dev_pub,
        result.extrapolated
    )
}

fn case_row_md(result: &CaseResult) -> String {
    let (cearun, grimech, dev, dev_pub) = reference_cells(result);
    format!(
        "| {} | {} | {} | {:.2} | {} | {} | {} | {} | {} |",
        fuel_label(&result.spec),
        result.spec.oxidizer.label(),
        mode_label(result.spec.mode),
        result.t_ad,
        cearun,
        grimech,
        dev,
        dev_pub,
        if result.extrapolated { "extrapolated" } else { "" }
    )
}

/// One row of the 8-case report: a result or the failure that replaced it.
pub type TableRow = Result<CaseResult, (CaseSpec, String)>;

#[derive(Serialize)]
struct JsonRow<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    result: Option<&'a CaseResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    spec: Option<&'a CaseSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<&'a str>,
}

/// Render the full report. Returns the text and whether every row succeeded.
pub fn render_table(rows: &[TableRow], format: Format, explain: bool) -> (String, bool) {
    let all_ok = rows.iter().all(|r| r.is_ok());
    let text = match format {
        Format::Json => {
            let view: Vec<JsonRow> = rows
                .iter()
                .map(|row| match row {
                    Ok(result) => JsonRow {
                        result: Some(result),
                        spec: None,
                        error: None,
                    },
                    Err((spec, msg)) => JsonRow {
                        result: None,
                        spec: Some(spec),
                        error: Some(msg),
                    },
                })
                .collect();
            serde_json::to_string_pretty(&view).expect("serializable") + "\n"
        }
        Format::Csv => {
            let mut out = String::from(ROW_HEADER);
            out.push('\n');
            for row in rows {
                match row {
                    Ok(result) => out.push_str(&case_row_csv(result)),
                    Err((spec, msg)) => {
                        out.push_str(&format!(
                            "{},{},{},,,,,,,FAILED: {}",
                            spec.fuel.species(),
                            spec.oxidizer.label().replace(' ', "_"),
                            mode_label(spec.mode),
                            msg.replace(',', ";")
                        ));
                    }
                }
                out.push('\n');
            }
            out
        }
        Format::Md => {
            let mut out = String::from(MD_HEADER);
            for row in rows {
                match row {
                    Ok(result) => out.push_str(&case_row_md(result)),
                    Err((spec, msg)) => out.push_str(&format!(
                        "| {} | {} | {} | FAILED | | | | | {} |",
                        spec.fuel.species(),
                        spec.oxidizer.label(),
                        mode_label(spec.mode),
                        msg
                    )),
                }
                out.push('\n');
            }
            if explain {
                out.push('\n');
                out.push_str(EXPLAIN);
                out.push('\n');
            }
            out
        }
        Format::Table => {
            let mut out = String::new();
            writeln!(
                out,
                "{:<5} {:<18} {:<12} {:>10} {:>10} {:>11} {:>14} {:>14}  {}",
                "fuel", "oxidizer", "mode", "t_ad [K]", "CEARUN [K]", "GRI [K]", "dev/CEARUN [%]", "published [%]", "notes"
            )
            .unwrap();
            for row in rows {
                match row {
                    Ok(result) => {
                        let (cearun, grimech, dev, dev_pub) = reference_cells(result);
                        writeln!(
                            out,
                            "{:<5} {:<18} {:<12} {:>10.2} {:>10} {:>11} {:>14} {:>14}  {}",
                            fuel_label(&result.spec),
                            result.spec.oxidizer.label(),
                            mode_label(result.spec.mode),
                            result.t_ad,
                            cearun,
                            grimech,
                            dev,
                            dev_pub,
                            if result.extrapolated { "extrapolated" } else { "" }
                        )
                        .unwrap();
                    }
                    Err((spec, msg)) => writeln!(
                        out,
                        "{:<5} {:<18} {:<12} {:>10}  FAILED: {}",
                        spec.fuel.species(),
                        spec.oxidizer.label(),
                        mode_label(spec.mode),
                        "-",
                        msg
                    )
                    .unwrap(),
                }
            }
            if explain {
                out.push('\n');
                out.push_str(EXPLAIN);
                out.push('\n');
            }
            out
        }
    };
    (text, all_ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cases::{prepare_database, run_case, Fuel, Oxidizer};
    use flametemp_core::prelude::*;

    fn sample() -> CaseResult {
        let db = prepare_database(ThermoDatabase::bundled(), true).unwrap();
        run_case(&CaseSpec::new(Fuel::H2, Oxidizer::O2, Mode::Complete), &db).unwrap()
    }

    #[test]
    fn csv_row_has_the_documented_columns() {
        let text = render_case(&sample(), Format::Csv, false);
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), ROW_HEADER);
        let row = lines.next().unwrap();
        assert_eq!(row.split(',').count(), ROW_HEADER.split(',').count());
        assert!(row.starts_with("H2,O2,complete,"));
    }

    #[test]
    fn json_round_trips_through_the_schema() {
        let result = sample();
        let text = render_case(&result, Format::Json, false);
        let back: CaseResult = serde_json::from_str(&text).unwrap();
        assert_eq!(back, result);
    }

    #[test]
    fn table_prints_temperature_to_hundredths() {
        let text = render_case(&sample(), Format::Table, false);
        assert!(text.contains("t_ad      : 4890."), "{text}");
    }
}
