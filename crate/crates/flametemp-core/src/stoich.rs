//! Reactant/product mixtures, oxidizer presets, and complete-combustion
//! product construction.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::thermo::{EvalResult, SpeciesRecord, ThermoDatabase};

/// One mixture component: a species at some mole amount and initial
/// temperature. Per-species temperatures are allowed even though the bundled
/// reference cases start every reactant at 298.15 K.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixtureEntry {
    pub species: String,
    /// mol
    pub moles: f64,
    /// K
    pub temperature: f64,
}

/// A list of (species, moles, temperature) entries plus a shared pressure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixtureSpec {
    pub entries: Vec<MixtureEntry>,
    /// Pa
    pub pressure: f64,
}

impl MixtureSpec {
    /// Build a mixture with a common temperature for every entry.
    pub fn uniform(pairs: &[(&str, f64)], temperature: f64, pressure: f64) -> Self {
        MixtureSpec {
            entries: pairs
                .iter()
                .map(|(name, moles)| MixtureEntry {
                    species: name.to_string(),
                    moles: *moles,
                    temperature,
                })
                .collect(),
            pressure,
        }
    }

    /// Total moles over all entries.
    pub fn total_moles(&self) -> f64 {
        self.entries.iter().map(|e| e.moles).sum()
    }

    /// Moles of a named species (0 if absent).
    pub fn moles_of(&self, species: &str) -> f64 {
        let upper = species.to_uppercase();
        self.entries
            .iter()
            .filter(|e| e.species.to_uppercase() == upper)
            .map(|e| e.moles)
            .sum()
    }

    /// Check the structural invariants: non-negative moles with at least one
    /// positive entry, positive temperatures, positive pressure.
    pub fn validate(&self) -> Result<(), Error> {
        if self.entries.iter().any(|e| e.moles < 0.0 || !e.moles.is_finite()) {
            return Err(Error::InvalidInput("negative mole amount".to_string()));
        }
        if !self.entries.iter().any(|e| e.moles > 0.0) {
            return Err(Error::InvalidInput(
                "mixture has no positive mole amounts".to_string(),
            ));
        }
        if let Some(e) = self.entries.iter().find(|e| !(e.temperature > 0.0)) {
            return Err(Error::Domain { t: e.temperature });
        }
        if !(self.pressure > 0.0) {
            return Err(Error::InvalidInput(format!(
                "pressure {} Pa is not positive",
                self.pressure
            )));
        }
        Ok(())
    }
}

/// Total element moles of a mixture.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ElementVector {
    totals: BTreeMap<String, f64>,
}

impl ElementVector {
    pub fn get(&self, element: &str) -> f64 {
        self.totals.get(element).copied().unwrap_or(0.0)
    }

    /// Elements with strictly positive totals, in sorted order.
    pub fn elements(&self) -> impl Iterator<Item = &str> {
        self.totals
            .iter()
            .filter(|(_, v)| **v > 0.0)
            .map(|(k, _)| k.as_str())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.totals.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn max_total(&self) -> f64 {
        self.totals.values().cloned().fold(0.0, f64::max)
    }

    pub fn add(&mut self, element: &str, amount: f64) {
        *self.totals.entry(element.to_string()).or_insert(0.0) += amount;
    }
}

/// Oxidizer presets: pure oxygen or one of two dry-air representations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OxidizerPreset {
    /// Pure molecular oxygen.
    PureO2,
    /// Three-component air: N2/O2/Ar = 78/21/1 by mole.
    Air3,
    /// Four-component air: N2/O2/Ar/CO2 = 78.0840/20.9476/0.9365/0.0319 by mole.
    Air4,
}

impl OxidizerPreset {
    /// Component mole fractions, normalized to sum to one.
    pub fn mole_fractions(&self) -> Vec<(&'static str, f64)> {
        let raw: &[(&str, f64)] = match self {
            OxidizerPreset::PureO2 => &[("O2", 1.0)],
            OxidizerPreset::Air3 => &[("N2", 78.0), ("O2", 21.0), ("AR", 1.0)],
            OxidizerPreset::Air4 => &[
                ("N2", 78.0840),
                ("O2", 20.9476),
                ("AR", 0.9365),
                ("CO2", 0.0319),
            ],
        };
        let total: f64 = raw.iter().map(|(_, x)| x).sum();
        raw.iter().map(|(s, x)| (*s, x / total)).collect()
    }

    /// Moles of each non-O2 companion species accompanying one mole of O2.
    pub fn companions_per_o2(&self) -> Vec<(&'static str, f64)> {
        let fractions = self.mole_fractions();
        let x_o2 = fractions
            .iter()
            .find(|(s, _)| *s == "O2")
            .map(|(_, x)| *x)
            .expect("every preset contains O2");
        fractions
            .iter()
            .filter(|(s, _)| *s != "O2")
            .map(|(s, x)| (*s, x / x_o2))
            .collect()
    }
}

/// A CxHy fuel checked against the thermo database.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuelSpec {
    pub name: String,
    /// carbon atoms per molecule
    pub carbon: f64,
    /// hydrogen atoms per molecule
    pub hydrogen: f64,
}

impl FuelSpec {
    /// Build from a database record, rejecting anything outside C/H chemistry.
    pub fn from_species(record: &SpeciesRecord) -> Result<FuelSpec, Error> {
        for element in record.composition.keys() {
            if element != "C" && element != "H" {
                return Err(Error::UnsupportedFuel {
                    name: record.name.clone(),
                    msg: format!("contains element {element}; only C/H fuels are supported"),
                });
            }
        }
        let carbon = record.composition.get("C").copied().unwrap_or(0.0);
        let hydrogen = record.composition.get("H").copied().unwrap_or(0.0);
        if hydrogen <= 0.0 {
            return Err(Error::UnsupportedFuel {
                name: record.name.clone(),
                msg: "fuel must contain hydrogen".to_string(),
            });
        }
        Ok(FuelSpec {
            name: record.name.clone(),
            carbon,
            hydrogen,
        })
    }

    /// Look a fuel up by name and validate its composition.
    pub fn from_name(db: &ThermoDatabase, name: &str) -> Result<FuelSpec, Error> {
        FuelSpec::from_species(db.require(name)?)
    }

    /// Moles of O2 required for complete combustion of one mole of fuel.
    pub fn o2_per_mole(&self) -> f64 {
        self.carbon + self.hydrogen / 4.0
    }
}

/// Sum per-species atom counts weighted by mole amounts: b_k = sum_j a_jk n_j.
pub fn element_totals(mix: &MixtureSpec, db: &ThermoDatabase) -> Result<ElementVector, Error> {
    let mut out = ElementVector::default();
    for entry in &mix.entries {
        let rec = db.require(&entry.species)?;
        for (element, count) in &rec.composition {
            out.add(element, count * entry.moles);
        }
    }
    Ok(out)
}

/// Extensive mixture enthalpy in joules.
///
/// With no override each entry is evaluated at its own initial temperature;
/// with an override every entry is evaluated at the common temperature (the
/// products-at-T_ad form of the energy balance). The flag is set if any
/// evaluation left its fitted range.
pub fn mixture_enthalpy(
    mix: &MixtureSpec,
    db: &ThermoDatabase,
    t_override: Option<f64>,
) -> Result<EvalResult, Error> {
    let mut value = 0.0;
    let mut extrapolated = false;
    for entry in &mix.entries {
        let rec = db.require(&entry.species)?;
        let t = t_override.unwrap_or(entry.temperature);
        let h = rec.h_molar(t)?;
        value += entry.moles * h.value;
        extrapolated |= h.extrapolated && entry.moles > 0.0;
    }
    Ok(EvalResult { value, extrapolated })
}

/// Build the stoichiometric reactant mixture for a fuel and oxidizer preset:
/// O2 = fuel_moles * (x + y/4), companions scaled by the preset ratios, every
/// entry at the common initial temperature.
pub fn stoichiometric_reactants(
    fuel: &FuelSpec,
    oxidizer: OxidizerPreset,
    fuel_moles: f64,
    t0: f64,
    pressure: f64,
) -> Result<MixtureSpec, Error> {
    if !(fuel_moles > 0.0) {
        return Err(Error::InvalidInput(format!(
            "fuel amount {fuel_moles} mol is not positive"
        )));
    }
    if !(t0 > 0.0) {
        return Err(Error::Domain { t: t0 });
    }
    let n_o2 = fuel_moles * fuel.o2_per_mole();
    let mut pairs: Vec<(&str, f64)> = vec![(fuel.name.as_str(), fuel_moles), ("O2", n_o2)];
    let companions = oxidizer.companions_per_o2();
    for (species, ratio) in &companions {
        pairs.push((species, ratio * n_o2));
    }
    Ok(MixtureSpec::uniform(&pairs, t0, pressure))
}

/// Species that survive complete combustion unchanged.
const PASS_THROUGH: &[&str] = &["N2", "AR", "CO2", "H2O"];

/// Convert a reactant mixture to its complete-combustion products: all fuel
/// carbon to CO2, all fuel hydrogen to H2O, excess O2 passed through, inert
/// N2/Ar and reactant CO2/H2O passed through. Rich (oxygen-deficient)
/// mixtures are rejected; products are uniquely defined only at or below
/// stoichiometric fuel. Product entries inherit the first reactant entry's
/// temperature and the mixture pressure.
pub fn complete_products(
    reactants: &MixtureSpec,
    db: &ThermoDatabase,
) -> Result<MixtureSpec, Error> {
    reactants.validate()?;
    let mut fuel_c = 0.0;
    let mut fuel_h = 0.0;
    let mut o2_available = 0.0;
    let mut o2_required = 0.0;
    let mut passed: BTreeMap<&str, f64> = BTreeMap::new();

    for entry in &reactants.entries {
        let rec = db.require(&entry.species)?;
        if entry.moles == 0.0 {
            continue;
        }
        let name = rec.name.as_str();
        if name == "O2" {
            o2_available += entry.moles;
        } else if PASS_THROUGH.contains(&name) {
            *passed.entry(name).or_insert(0.0) += entry.moles;
        } else if rec.composition.keys().all(|e| e == "C" || e == "H") {
            let x = rec.composition.get("C").copied().unwrap_or(0.0);
            let y = rec.composition.get("H").copied().unwrap_or(0.0);
            fuel_c += x * entry.moles;
            fuel_h += y * entry.moles;
            o2_required += entry.moles * (x + y / 4.0);
        } else {
            return Err(Error::UnsupportedFuel {
                name: rec.name.clone(),
                msg: "complete combustion is undefined for this reactant".to_string(),
            });
        }
    }

    if o2_required > o2_available {
        return Err(Error::RichMixture {
            required: o2_required,
            available: o2_available,
        });
    }

    let t_out = reactants
        .entries
        .first()
        .map(|e| e.temperature)
        .unwrap_or(crate::thermo::T_REF);
    let mut pairs: Vec<(&str, f64)> = Vec::new();
    let n_co2 = fuel_c + passed.get("CO2").copied().unwrap_or(0.0);
    if n_co2 > 0.0 {
        pairs.push(("CO2", n_co2));
    }
    let n_h2o = fuel_h / 2.0 + passed.get("H2O").copied().unwrap_or(0.0);
    if n_h2o > 0.0 {
        pairs.push(("H2O", n_h2o));
    }
    let excess_o2 = o2_available - o2_required;
    if excess_o2 > 0.0 {
        pairs.push(("O2", excess_o2));
    }
    for name in ["N2", "AR"] {
        if let Some(&n) = passed.get(name) {
            pairs.push((name, n));
        }
    }
    Ok(MixtureSpec::uniform(&pairs, t_out, reactants.pressure))
}
