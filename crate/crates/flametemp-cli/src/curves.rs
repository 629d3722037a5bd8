//! Enthalpy-curve export: normalized and dimensional molar enthalpy per
//! species per database over a temperature grid.

use std::fmt::Write as _;

use flametemp_core::prelude::*;

pub struct CurveRequest {
    pub species: Vec<String>,
    pub t_min: f64,
    pub t_max: f64,
    pub step: f64,
}

/// CSV schema: `database,species,T_K,h_over_RT,h_J_per_mol,extrapolated`.
pub fn curves_csv(
    databases: &[(String, ThermoDatabase)],
    req: &CurveRequest,
) -> Result<String, Error> {
    if req.species.is_empty() {
        return Err(Error::InvalidInput("no species requested".to_string()));
    }
    if !(req.t_min > 0.0) || !(req.t_max > req.t_min) || !(req.step > 0.0) {
        return Err(Error::InvalidInput(format!(
            "bad temperature range {}..{} step {}",
            req.t_min, req.t_max, req.step
        )));
    }
    // fail before emitting anything if a species is missing anywhere
    for (label, db) in databases {
        for name in &req.species {
            db.get(name)
                .ok_or_else(|| Error::UnknownSpecies(format!("{name} (database {label})")))?;
        }
    }

    let mut out = String::from("database,species,T_K,h_over_RT,h_J_per_mol,extrapolated\n");
    for (label, db) in databases {
        for name in &req.species {
            let rec = db.require(name)?;
            let mut k = 0usize;
            loop {
                let t = req.t_min + req.step * k as f64;
                if t > req.t_max + 1e-9 {
                    break;
                }
                let h_rt = rec.h_rt(t)?;
                let h = rec.h_molar(t)?;
                writeln!(
                    out,
                    "{label},{},{t:.2},{:.8e},{:.8e},{}",
                    rec.name, h_rt.value, h.value, h_rt.extrapolated
                )
                .unwrap();
                k += 1;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bundled_patched() -> ThermoDatabase {
        ThermoDatabase::bundled().apply_n2_patch().unwrap()
    }

    fn req(species: &[&str]) -> CurveRequest {
        CurveRequest {
            species: species.iter().map(|s| s.to_string()).collect(),
            t_min: 300.0,
            t_max: 3500.0,
            step: 50.0,
        }
    }

    #[test]
    fn dimensional_enthalpy_is_monotone_for_the_seven_report_species() {
        // Cp > 0 over the grid implies strictly increasing H columns
        let dbs = vec![("bundled".to_string(), bundled_patched())];
        let species = ["AR", "CH4", "CO2", "H2", "H2O", "N2", "O2"];
        let text = curves_csv(&dbs, &req(&species)).unwrap();
        for name in species {
            let col: Vec<f64> = text
                .lines()
                .skip(1)
                .filter(|l| l.split(',').nth(1) == Some(name))
                .map(|l| l.split(',').nth(4).unwrap().parse().unwrap())
                .collect();
            assert_eq!(col.len(), 65);
            for pair in col.windows(2) {
                assert!(pair[1] > pair[0], "{name}: {} !> {}", pair[1], pair[0]);
            }
        }
    }

    #[test]
    fn patched_n2_curve_crosses_zero_at_the_reference_temperature() {
        let dbs = vec![("bundled".to_string(), bundled_patched())];
        let r = CurveRequest {
            species: vec!["N2".to_string()],
            t_min: 298.0,
            t_max: 298.3,
            step: 0.15,
        };
        let text = curves_csv(&dbs, &r).unwrap();
        let values: Vec<f64> = text
            .lines()
            .skip(1)
            .map(|l| l.split(',').nth(4).unwrap().parse().unwrap())
            .collect();
        assert!(values.first().unwrap() < &0.0);
        assert!(values.last().unwrap() > &0.0);
    }

    #[test]
    fn two_database_run_pairs_identical_columns() {
        let dbs = vec![
            ("a".to_string(), bundled_patched()),
            ("b".to_string(), bundled_patched()),
        ];
        let text = curves_csv(&dbs, &req(&["CO2"])).unwrap();
        let of = |label: &str| -> Vec<&str> {
            text.lines()
                .skip(1)
                .filter(|l| l.starts_with(&format!("{label},")))
                .map(|l| l.splitn(2, ',').nth(1).unwrap())
                .collect()
        };
        assert_eq!(of("a"), of("b"));
        assert!(!of("a").is_empty());
    }

    #[test]
    fn out_of_range_rows_are_flagged() {
        let dbs = vec![("bundled".to_string(), bundled_patched())];
        let r = CurveRequest {
            species: vec!["CO2".to_string()],
            t_min: 3400.0,
            t_max: 3700.0,
            step: 100.0,
        };
        let text = curves_csv(&dbs, &r).unwrap();
        let flags: Vec<&str> = text
            .lines()
            .skip(1)
            .map(|l| l.rsplit(',').next().unwrap())
            .collect();
        assert_eq!(flags, ["false", "false", "true", "true"]);
    }

    #[test]
    fn unknown_species_and_bad_ranges_error() {
        let dbs = vec![("bundled".to_string(), bundled_patched())];
        assert!(matches!(
            curves_csv(&dbs, &req(&["XE"])),
            Err(Error::UnknownSpecies(_))
        ));
        let mut bad = req(&["AR"]);
        bad.step = -5.0;
        assert!(matches!(curves_csv(&dbs, &bad), Err(Error::InvalidInput(_))));
    }
}
