//! NASA 7-coefficient polynomial thermodynamics and the CHEMKIN-format
//! species database.
//!
//! Each species carries two 7-coefficient sets (low and high temperature
//! subrange) plus three boundary temperatures. Normalized properties:
//!
//! ```text
//! Cp/R  = a1 + a2 T + a3 T^2 + a4 T^3 + a5 T^4
//! H/RT  = a1 + a2 T/2 + a3 T^2/3 + a4 T^3/4 + a5 T^4/5 + a6/T
//! S/R   = a1 ln T + a2 T + a3 T^2/2 + a4 T^3/3 + a5 T^4/4 + a7
//! ```
//!
//! The low set applies for `T < t_mid`, the high set for `T >= t_mid`.
//! Outside `[t_min, t_max]` the nearest subrange polynomial is extrapolated
//! and the result is flagged; this mirrors how the bundled GRI-Mech 3.0
//! coefficients are used in practice for very hot oxy-fuel products.

mod parse;
mod serialize;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::Error;

pub use parse::parse_thermo_text;
pub use serialize::serialize_thermo;

/// Universal gas constant, J/(mol K), as used by the NASA 1993-edition
/// 7-coefficient fits and the GRI-Mech 3.0 data derived from them.
pub const R_UNIVERSAL: f64 = 8.314510;

/// Reference temperature at which elemental species have zero enthalpy, K.
pub const T_REF: f64 = 298.15;

/// Standard-state pressure (1 atm), Pa.
pub const P_STANDARD: f64 = 101_325.0;

/// Replacement low-range a6 coefficient for N2 that zeroes its enthalpy at
/// 298.15 K (original fit value: -1020.8999).
pub const N2_A6_LOW_PATCHED: f64 = -1021.07188;

/// Standard atomic weights (IUPAC) for the elements appearing in the bundled
/// database. Used only for optional mass-fraction reporting; all solver math
/// is mole-based.
pub const ATOMIC_WEIGHTS: &[(&str, f64)] = &[
    ("H", 1.008),
    ("C", 12.011),
    ("N", 14.007),
    ("O", 15.999),
    ("AR", 39.948),
];

/// Look up a standard atomic weight in g/mol.
pub fn atomic_weight(element: &str) -> Option<f64> {
    ATOMIC_WEIGHTS
        .iter()
        .find(|(sym, _)| *sym == element)
        .map(|(_, w)| *w)
}

/// One species' pair of 7-coefficient sets and subrange boundaries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NasaPoly7 {
    pub t_min: f64,
    pub t_mid: f64,
    pub t_max: f64,
    /// a1..a7 for the low-temperature subrange `[t_min, t_mid)`.
    pub low: [f64; 7],
    /// a1..a7 for the high-temperature subrange `[t_mid, t_max]`.
    pub high: [f64; 7],
}

/// A property value plus a flag marking evaluation outside the fitted range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub value: f64,
    pub extrapolated: bool,
}

impl NasaPoly7 {
    /// Validate the invariants the parser enforces.
    pub fn validate(&self) -> Result<(), String> {
        if !(self.t_min < self.t_mid && self.t_mid < self.t_max) {
            return Err(format!(
                "temperature bounds not ordered: {} / {} / {}",
                self.t_min, self.t_mid, self.t_max
            ));
        }
        if self.low.iter().chain(self.high.iter()).any(|c| !c.is_finite()) {
            return Err("non-finite coefficient".to_string());
        }
        Ok(())
    }

    fn coeffs(&self, t: f64) -> &[f64; 7] {
        if t < self.t_mid {
            &self.low
        } else {
            &self.high
        }
    }

    fn check_domain(&self, t: f64) -> Result<bool, Error> {
        if !(t > 0.0) {
            return Err(Error::Domain { t });
        }
        Ok(t < self.t_min || t > self.t_max)
    }

    /// Dimensionless heat capacity Cp/R.
    pub fn cp_r(&self, t: f64) -> Result<EvalResult, Error> {
        let extrapolated = self.check_domain(t)?;
        let a = self.coeffs(t);
        let value = a[0] + t * (a[1] + t * (a[2] + t * (a[3] + t * a[4])));
        Ok(EvalResult { value, extrapolated })
    }

    /// Dimensionless enthalpy H/(R T).
    pub fn h_rt(&self, t: f64) -> Result<EvalResult, Error> {
        let extrapolated = self.check_domain(t)?;
        let a = self.coeffs(t);
        let value = a[0]
            + t * (a[1] / 2.0 + t * (a[2] / 3.0 + t * (a[3] / 4.0 + t * a[4] / 5.0)))
            + a[5] / t;
        Ok(EvalResult { value, extrapolated })
    }

    /// Dimensionless entropy S/R.
    pub fn s_r(&self, t: f64) -> Result<EvalResult, Error> {
        let extrapolated = self.check_domain(t)?;
        let a = self.coeffs(t);
        let value = a[0] * t.ln()
            + t * (a[1] + t * (a[2] / 2.0 + t * (a[3] / 3.0 + t * a[4] / 4.0)))
            + a[6];
        Ok(EvalResult { value, extrapolated })
    }
}

/// One parsed species block.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpeciesRecord {
    /// Uppercase identifier, unique within a database.
    pub name: String,
    /// Element symbol -> atom count. Counts may be non-integer.
    pub composition: BTreeMap<String, f64>,
    /// Phase character from the thermo file; `G` for every bundled species.
    pub phase: char,
    pub poly: NasaPoly7,
    /// 1-based line number of the block's first line, for diagnostics.
    pub source_line: usize,
}

impl PartialEq for SpeciesRecord {
    /// `source_line` is diagnostics only and does not participate in equality.
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.composition == other.composition
            && self.phase == other.phase
            && self.poly == other.poly
    }
}

impl SpeciesRecord {
    /// Dimensionless heat capacity Cp/R at `t` kelvin.
    pub fn cp_r(&self, t: f64) -> Result<EvalResult, Error> {
        self.poly.cp_r(t)
    }

    /// Dimensionless enthalpy H/(R T) at `t` kelvin.
    pub fn h_rt(&self, t: f64) -> Result<EvalResult, Error> {
        self.poly.h_rt(t)
    }

    /// Dimensionless entropy S/R at `t` kelvin.
    pub fn s_r(&self, t: f64) -> Result<EvalResult, Error> {
        self.poly.s_r(t)
    }

    /// Dimensionless Gibbs function G/(R T) = H/(R T) - S/R.
    pub fn g_rt(&self, t: f64) -> Result<EvalResult, Error> {
        let h = self.h_rt(t)?;
        let s = self.s_r(t)?;
        Ok(EvalResult {
            value: h.value - s.value,
            extrapolated: h.extrapolated || s.extrapolated,
        })
    }

    /// Molar enthalpy in J/mol: H = (H/RT) * R * T.
    pub fn h_molar(&self, t: f64) -> Result<EvalResult, Error> {
        let h = self.h_rt(t)?;
        Ok(EvalResult {
            value: h.value * R_UNIVERSAL * t,
            extrapolated: h.extrapolated,
        })
    }

    /// Molar heat capacity in J/(mol K).
    pub fn cp_molar(&self, t: f64) -> Result<EvalResult, Error> {
        let cp = self.cp_r(t)?;
        Ok(EvalResult {
            value: cp.value * R_UNIVERSAL,
            extrapolated: cp.extrapolated,
        })
    }

    /// Molar mass in g/mol, if every element has a tabulated atomic weight.
    pub fn molar_mass(&self) -> Option<f64> {
        self.composition
            .iter()
            .map(|(el, n)| atomic_weight(el).map(|w| w * n))
            .sum()
    }
}

/// Validated, indexed collection of species records.
#[derive(Debug, Clone, Default)]
pub struct ThermoDatabase {
    species: Vec<SpeciesRecord>,
    by_name: HashMap<String, usize>,
    elements: BTreeSet<String>,
    /// Non-fatal parser notes (e.g. missing END terminator).
    pub warnings: Vec<String>,
}

impl PartialEq for ThermoDatabase {
    fn eq(&self, other: &Self) -> bool {
        self.species == other.species && self.elements == other.elements
    }
}

impl ThermoDatabase {
    /// Build a database from records, checking name uniqueness.
    pub fn from_records(records: Vec<SpeciesRecord>) -> Result<Self, Error> {
        let mut by_name = HashMap::with_capacity(records.len());
        let mut elements = BTreeSet::new();
        for (idx, rec) in records.iter().enumerate() {
            if by_name.insert(rec.name.clone(), idx).is_some() {
                return Err(Error::DuplicateSpecies {
                    name: rec.name.clone(),
                    line: rec.source_line,
                });
            }
            elements.extend(rec.composition.keys().cloned());
        }
        Ok(ThermoDatabase {
            species: records,
            by_name,
            elements,
            warnings: Vec::new(),
        })
    }

    /// Species records in file order.
    pub fn species(&self) -> &[SpeciesRecord] {
        &self.species
    }

    pub fn len(&self) -> usize {
        self.species.len()
    }

    pub fn is_empty(&self) -> bool {
        self.species.is_empty()
    }

    /// Case-insensitive lookup by name.
    pub fn get(&self, name: &str) -> Option<&SpeciesRecord> {
        self.index_of(name).map(|i| &self.species[i])
    }

    /// Case-insensitive index lookup.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.by_name.get(name.to_uppercase().as_str()).copied()
    }

    /// Lookup that reports the missing name as an error.
    pub fn require(&self, name: &str) -> Result<&SpeciesRecord, Error> {
        self.get(name)
            .ok_or_else(|| Error::UnknownSpecies(name.to_string()))
    }

    /// Sorted set of element symbols occurring in any species.
    pub fn elements(&self) -> &BTreeSet<String> {
        &self.elements
    }

    /// Return a copy with N2's low-range a6 replaced by the value that zeroes
    /// its enthalpy at 298.15 K. Idempotent; every other record is unchanged.
    pub fn apply_n2_patch(&self) -> Result<ThermoDatabase, Error> {
        let mut db = self.clone();
        let idx = db
            .index_of("N2")
            .ok_or_else(|| Error::Patch("species N2 not present".to_string()))?;
        db.species[idx].poly.low[5] = N2_A6_LOW_PATCHED;
        Ok(db)
    }

    /// The bundled GRI-Mech 3.0 database (53 species), parsed once.
    pub fn bundled() -> &'static ThermoDatabase {
        static DB: OnceLock<ThermoDatabase> = OnceLock::new();
        DB.get_or_init(|| {
            parse_thermo_text(BUNDLED_GRI30).expect("bundled thermo data must parse")
        })
    }
}

/// Raw text of the bundled GRI-Mech 3.0 thermodynamic data file.
pub const BUNDLED_GRI30: &str = include_str!("../../data/thermo30.dat");

#[cfg(test)]
mod tests {
    use super::*;

    fn db() -> &'static ThermoDatabase {
        ThermoDatabase::bundled()
    }

    #[test]
    fn bundled_parses_53_species() {
        let db = db();
        assert_eq!(db.len(), 53);
        let els: Vec<&str> = db.elements().iter().map(|s| s.as_str()).collect();
        assert_eq!(els, ["AR", "C", "H", "N", "O"]);
    }

    #[test]
    fn argon_is_monatomic() {
        let ar = db().get("AR").unwrap();
        assert_eq!(ar.composition.len(), 1);
        assert_eq!(ar.composition["AR"], 1.0);
        // constant Cp: a2..a5 of both ranges are zero
        assert!(ar.poly.low[1..5].iter().all(|&c| c == 0.0));
        assert_eq!(ar.cp_r(1500.0).unwrap().value, 2.5);
    }

    #[test]
    fn lookup_is_case_insensitive() {
        assert!(db().get("ch4").is_some());
        assert!(db().get("Ch2(s)").is_some());
        assert!(db().get("XE").is_none());
    }

    #[test]
    fn hcno_has_nonstandard_t_mid() {
        assert_eq!(db().get("HCNO").unwrap().poly.t_mid, 1382.0);
        assert_eq!(db().get("HOCN").unwrap().poly.t_mid, 1368.0);
        assert_eq!(db().get("HNCO").unwrap().poly.t_mid, 1478.0);
        assert_eq!(db().get("N2").unwrap().poly.t_mid, 1000.0);
    }

    #[test]
    fn extrapolation_flag_tracks_fitted_range() {
        let co2 = db().get("CO2").unwrap();
        assert_eq!(co2.poly.t_max, 3500.0);
        assert!(co2.cp_r(6000.0).unwrap().extrapolated);
        assert!(co2.cp_r(100.0).unwrap().extrapolated);
        assert!(!co2.cp_r(3500.0).unwrap().extrapolated);
        assert!(!co2.cp_r(298.15).unwrap().extrapolated);
    }

    #[test]
    fn non_positive_temperature_is_domain_error() {
        let n2 = db().get("N2").unwrap();
        assert!(matches!(n2.cp_r(0.0), Err(Error::Domain { .. })));
        assert!(matches!(n2.h_rt(-5.0), Err(Error::Domain { .. })));
        assert!(matches!(n2.s_r(f64::NAN), Err(Error::Domain { .. })));
    }

    #[test]
    fn n2_patch_zeroes_reference_enthalpy() {
        let raw = db();
        let h_raw = raw.get("N2").unwrap().h_molar(T_REF).unwrap().value;
        assert!((h_raw - 1.430).abs() < 0.05, "unpatched N2 h = {h_raw}");

        let patched = raw.apply_n2_patch().unwrap();
        let h = patched.get("N2").unwrap().h_molar(T_REF).unwrap().value;
        assert!(h.abs() < 0.05, "patched N2 h = {h}");
        assert!(patched.get("N2").unwrap().h_rt(T_REF).unwrap().value.abs() <= 2e-5);

        // idempotent, and everything else untouched
        let twice = patched.apply_n2_patch().unwrap();
        assert_eq!(patched, twice);
        for (a, b) in raw.species().iter().zip(patched.species()) {
            if a.name != "N2" {
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn patch_requires_n2() {
        let rec = db().get("AR").unwrap().clone();
        let small = ThermoDatabase::from_records(vec![rec]).unwrap();
        assert!(matches!(small.apply_n2_patch(), Err(Error::Patch(_))));
    }

    #[test]
    fn formation_enthalpies_match_standard_tables() {
        // polynomial evaluations against well-known 298.15 K values, kJ/mol
        for (name, expect) in [("CO2", -393.5), ("H2O", -241.8), ("CH4", -74.6), ("CO", -110.5)] {
            let h = db().get(name).unwrap().h_molar(T_REF).unwrap().value / 1e3;
            assert!((h - expect).abs() < 0.5, "{name}: {h} vs {expect}");
        }
    }

    #[test]
    fn standard_entropies_match_reference_values() {
        for (name, expect) in [("O2", 205.1), ("AR", 154.8), ("N2", 191.6), ("H2", 130.7)] {
            let s = db().get(name).unwrap().s_r(T_REF).unwrap().value * R_UNIVERSAL;
            assert!((s - expect).abs() < 0.5, "{name}: {s} vs {expect}");
        }
    }

    #[test]
    fn gibbs_identity_holds() {
        for name in ["AR", "N2", "CO2", "OH"] {
            let sp = db().get(name).unwrap();
            for t in [298.15, 1000.0, 3000.0] {
                let g = sp.g_rt(t).unwrap().value;
                let h = sp.h_rt(t).unwrap().value;
                let s = sp.s_r(t).unwrap().value;
                // g is defined as the computed difference, bit-for-bit
                assert_eq!(g, h - s);
            }
        }
    }

    #[test]
    fn h_molar_is_h_rt_scaled() {
        let sp = db().get("H2O").unwrap();
        for t in [300.0, 1234.5, 2850.0] {
            let h = sp.h_molar(t).unwrap().value;
            let hrt = sp.h_rt(t).unwrap().value;
            assert_eq!(h, hrt * R_UNIVERSAL * t);
        }
    }

    #[test]
    fn subrange_boundary_assignment() {
        // T one ulp below t_mid uses the low set; at t_mid the high set.
        let n2 = db().get("N2").unwrap();
        let below = n2.cp_r(1000.0 - 1e-9).unwrap().value;
        let at = n2.cp_r(1000.0).unwrap().value;
        let low_val = {
            let a = &n2.poly.low;
            a[0] + 1000.0 * (a[1] + 1000.0 * (a[2] + 1000.0 * (a[3] + 1000.0 * a[4])))
        };
        let high_val = {
            let a = &n2.poly.high;
            a[0] + 1000.0 * (a[1] + 1000.0 * (a[2] + 1000.0 * (a[3] + 1000.0 * a[4])))
        };
        assert!((below - low_val).abs() < 1e-9);
        assert_eq!(at, high_val);
    }

    #[test]
    fn molar_masses_are_sensible() {
        let m = db().get("CH4").unwrap().molar_mass().unwrap();
        assert!((m - 16.043).abs() < 0.01);
        let m = db().get("AR").unwrap().molar_mass().unwrap();
        assert!((m - 39.948).abs() < 1e-9);
    }
}
