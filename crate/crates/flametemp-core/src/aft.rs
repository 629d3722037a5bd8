//! Adiabatic flame temperature under fixed complete-combustion products.
//!
//! Solves the constant-pressure enthalpy balance
//!
//! ```text
//! F(T) = sum_products n_j H_j(T) - sum_reactants n_i H_i(T_ini,i) = 0
//! ```
//!
//! for the single unknown T. F is strictly increasing wherever Cp > 0, so a
//! sign-changing bracket contains exactly one root. Newton steps use the
//! analytic derivative F'(T) = sum n_j Cp_j(T); any step that leaves the
//! current bracket falls back to bisection. Pressure never enters the
//! residual (ideal-gas enthalpy is temperature-only), so the result is
//! bit-identical across pressures.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::stoich::{complete_products, mixture_enthalpy, MixtureSpec};
use crate::thermo::{ThermoDatabase, R_UNIVERSAL};

/// Bracket and tolerance settings for the scalar enthalpy-balance solve.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Lower bracket end, K.
    pub t_lo: f64,
    /// Upper bracket end, K.
    pub t_hi: f64,
    /// Stop when the temperature step falls below this, K.
    pub abs_tol_t: f64,
    /// Stop when |F| falls below this fraction of the enthalpy scale.
    pub rel_tol_h: f64,
    pub max_iter: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            t_lo: 250.0,
            t_hi: 6500.0,
            abs_tol_t: 1e-4,
            rel_tol_h: 1e-10,
            max_iter: 100,
        }
    }
}

impl SolverOptions {
    fn validate(&self) -> Result<(), Error> {
        if !(self.t_lo < self.t_hi) || !(self.t_lo > 0.0) {
            return Err(Error::InvalidInput(format!(
                "bracket [{}, {}] K is not ordered and positive",
                self.t_lo, self.t_hi
            )));
        }
        if !(self.abs_tol_t > 0.0) || !(self.rel_tol_h > 0.0) {
            return Err(Error::InvalidInput("tolerances must be positive".to_string()));
        }
        Ok(())
    }
}

/// A converged complete-combustion AFT solution.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AftResult {
    /// Adiabatic flame temperature, K.
    pub t_ad: f64,
    /// Product mixture, every entry at `t_ad`.
    pub products: MixtureSpec,
    /// Reactant-side enthalpy the products were balanced against, J.
    pub h_target: f64,
    /// Residual F(t_ad), J.
    pub residual: f64,
    pub iterations: usize,
    /// True when any product evaluation at `t_ad` left its fitted range.
    pub extrapolated: bool,
}

/// Solve the enthalpy balance for the complete-combustion product set of the
/// given reactants.
pub fn solve_aft_complete(
    reactants: &MixtureSpec,
    db: &ThermoDatabase,
    opts: &SolverOptions,
) -> Result<AftResult, Error> {
    opts.validate()?;
    reactants.validate()?;
    let products = complete_products(reactants, db)?;
    let h_target = mixture_enthalpy(reactants, db, None)?.value;

    let f = |t: f64| -> Result<f64, Error> {
        Ok(mixture_enthalpy(&products, db, Some(t))?.value - h_target)
    };
    let fprime = |t: f64| -> Result<f64, Error> {
        let mut sum = 0.0;
        for entry in &products.entries {
            sum += entry.moles * db.require(&entry.species)?.cp_r(t)?.value;
        }
        Ok(sum * R_UNIVERSAL)
    };

    let (mut lo, mut hi) = (opts.t_lo, opts.t_hi);
    let f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if f_lo == 0.0 || f_hi == 0.0 {
        let t = if f_lo == 0.0 { lo } else { hi };
        return finish(t, products, h_target, db, 0);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoBracket {
            t_lo: lo,
            t_hi: hi,
            f_lo,
            f_hi,
        });
    }
    // F is increasing on the bracket; keep the orientation explicit anyway.
    debug_assert!(f_lo < 0.0 && f_hi > 0.0);

    let mut t = 0.5 * (lo + hi);
    for iteration in 1..=opts.max_iter {
        let ft = f(t)?;
        let h_scale = h_target.abs() + (ft + h_target).abs();
        if ft.abs() <= opts.rel_tol_h * h_scale.max(1.0) {
            return finish(t, products, h_target, db, iteration);
        }
        if ft > 0.0 {
            hi = t;
        } else {
            lo = t;
        }
        let dft = fprime(t)?;
        let mut t_next = if dft > 0.0 { t - ft / dft } else { f64::NAN };
        if !t_next.is_finite() || t_next <= lo || t_next >= hi {
            t_next = 0.5 * (lo + hi);
        }
        if (t_next - t).abs() <= opts.abs_tol_t {
            return finish(t_next, products, h_target, db, iteration);
        }
        t = t_next;
    }
    Err(Error::NoConvergence {
        iterations: opts.max_iter,
        msg: format!("enthalpy balance still open on bracket [{lo}, {hi}] K"),
    })
}

fn finish(
    t_ad: f64,
    mut products: MixtureSpec,
    h_target: f64,
    db: &ThermoDatabase,
    iterations: usize,
) -> Result<AftResult, Error> {
    for entry in &mut products.entries {
        entry.temperature = t_ad;
    }
    let h = mixture_enthalpy(&products, db, Some(t_ad))?;
    Ok(AftResult {
        t_ad,
        residual: h.value - h_target,
        extrapolated: h.extrapolated,
        products,
        h_target,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stoich::{stoichiometric_reactants, FuelSpec, OxidizerPreset};
    use crate::thermo::{P_STANDARD, T_REF};

    fn patched() -> ThermoDatabase {
        ThermoDatabase::bundled().apply_n2_patch().unwrap()
    }

    fn solve_case(fuel: &str, ox: OxidizerPreset, db: &ThermoDatabase) -> AftResult {
        let fuel = FuelSpec::from_name(db, fuel).unwrap();
        let reac = stoichiometric_reactants(&fuel, ox, 1.0, T_REF, P_STANDARD).unwrap();
        solve_aft_complete(&reac, db, &SolverOptions::default()).unwrap()
    }

    #[test]
    fn oxy_methane_reaches_published_value() {
        let db = patched();
        let r = solve_case("CH4", OxidizerPreset::PureO2, &db);
        assert!((r.t_ad - 5153.68).abs() < 2.0, "t_ad = {}", r.t_ad);
        assert!(r.extrapolated, "CO2/H2O leave their 3500 K range here");
    }

    #[test]
    fn air_methane_reaches_published_value() {
        let db = patched();
        let r = solve_case("CH4", OxidizerPreset::Air3, &db);
        assert!((r.t_ad - 2330.55).abs() < 2.0, "t_ad = {}", r.t_ad);
        assert!(!r.extrapolated);
    }

    #[test]
    fn inert_mixture_keeps_its_temperature() {
        let db = patched();
        let reac = MixtureSpec::uniform(&[("AR", 1.0)], 400.0, P_STANDARD);
        let r = solve_aft_complete(&reac, &db, &SolverOptions::default()).unwrap();
        assert!((r.t_ad - 400.0).abs() < 1e-4, "t_ad = {}", r.t_ad);
    }

    #[test]
    fn pressure_is_bit_irrelevant() {
        let db = patched();
        let fuel = FuelSpec::from_name(&db, "CH4").unwrap();
        let a = {
            let reac =
                stoichiometric_reactants(&fuel, OxidizerPreset::PureO2, 1.0, T_REF, P_STANDARD)
                    .unwrap();
            solve_aft_complete(&reac, &db, &SolverOptions::default()).unwrap()
        };
        let b = {
            let reac = stoichiometric_reactants(
                &fuel,
                OxidizerPreset::PureO2,
                1.0,
                T_REF,
                2.0 * P_STANDARD,
            )
            .unwrap();
            solve_aft_complete(&reac, &db, &SolverOptions::default()).unwrap()
        };
        assert_eq!(a.t_ad.to_bits(), b.t_ad.to_bits());
    }

    #[test]
    fn mole_scaling_leaves_t_ad_unchanged() {
        let db = patched();
        let fuel = FuelSpec::from_name(&db, "H2").unwrap();
        let base = {
            let reac =
                stoichiometric_reactants(&fuel, OxidizerPreset::Air3, 1.0, T_REF, P_STANDARD)
                    .unwrap();
            solve_aft_complete(&reac, &db, &SolverOptions::default()).unwrap()
        };
        let scaled = {
            let reac =
                stoichiometric_reactants(&fuel, OxidizerPreset::Air3, 37.5, T_REF, P_STANDARD)
                    .unwrap();
            solve_aft_complete(&reac, &db, &SolverOptions::default()).unwrap()
        };
        assert!((base.t_ad - scaled.t_ad).abs() <= 1e-4);
    }

    #[test]
    fn warmer_reactants_burn_hotter() {
        let db = patched();
        let fuel = FuelSpec::from_name(&db, "CH4").unwrap();
        let mut previous = 0.0;
        for t0 in [250.0, 298.15, 400.0, 600.0] {
            let reac =
                stoichiometric_reactants(&fuel, OxidizerPreset::Air3, 1.0, t0, P_STANDARD)
                    .unwrap();
            let r = solve_aft_complete(&reac, &db, &SolverOptions::default()).unwrap();
            assert!(r.t_ad > previous, "t0 = {t0}: {} !> {previous}", r.t_ad);
            previous = r.t_ad;
        }
    }

    #[test]
    fn residual_is_within_tolerance() {
        let db = patched();
        let r = solve_case("H2", OxidizerPreset::PureO2, &db);
        let h_scale: f64 = r
            .products
            .entries
            .iter()
            .map(|e| {
                e.moles
                    * db.require(&e.species)
                        .unwrap()
                        .h_molar(r.t_ad)
                        .unwrap()
                        .value
                        .abs()
            })
            .sum::<f64>()
            + r.h_target.abs();
        assert!(r.residual.abs() <= 1e-10 * h_scale.max(1.0));
    }

    #[test]
    fn no_bracket_is_reported() {
        let db = patched();
        let reac = MixtureSpec::uniform(&[("AR", 1.0)], 400.0, P_STANDARD);
        let opts = SolverOptions {
            t_lo: 500.0,
            t_hi: 900.0,
            ..SolverOptions::default()
        };
        assert!(matches!(
            solve_aft_complete(&reac, &db, &opts),
            Err(Error::NoBracket { .. })
        ));
    }
}
