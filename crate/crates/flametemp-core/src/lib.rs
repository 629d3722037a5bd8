//! Thermochemistry toolkit for adiabatic flame temperature calculations.
//!
//! Built around the NASA 7-coefficient polynomial data of GRI-Mech 3.0
//! (bundled, 53 species), the crate computes AFTs for fuel/oxidizer mixtures
//! two ways:
//!
//! * [`aft::solve_aft_complete`] — single-step complete combustion: fixed
//!   CO2/H2O product composition, enthalpy balance solved by safeguarded
//!   Newton iteration.
//! * [`equilibrium::equilibrate_hp`] — chemical equilibrium at constant
//!   enthalpy and pressure: Gibbs free-energy minimization over the full
//!   eligible species set via an element-potential Newton scheme.
//!
//! ```
//! use flametemp_core::prelude::*;
//!
//! let db = ThermoDatabase::bundled().apply_n2_patch().unwrap();
//! let fuel = FuelSpec::from_name(&db, "CH4").unwrap();
//! let reactants =
//!     stoichiometric_reactants(&fuel, OxidizerPreset::PureO2, 1.0, T_REF, P_STANDARD).unwrap();
//! let aft = solve_aft_complete(&reactants, &db, &SolverOptions::default()).unwrap();
//! assert!((aft.t_ad - 5153.7).abs() < 2.0);
//! ```

pub mod aft;
pub mod equilibrium;
mod error;
mod linalg;
pub mod stoich;
pub mod thermo;

pub use error::Error;

/// Convenient single import for the common types and operations.
pub mod prelude {
    pub use crate::aft::{solve_aft_complete, AftResult, SolverOptions};
    pub use crate::equilibrium::{
        candidate_species, equilibrate_hp, equilibrate_tp, EquilibriumMode, EquilibriumOptions,
        EquilibriumProblem, EquilibriumSolution,
    };
    pub use crate::stoich::{
        complete_products, element_totals, mixture_enthalpy, stoichiometric_reactants,
        ElementVector, FuelSpec, MixtureEntry, MixtureSpec, OxidizerPreset,
    };
    pub use crate::thermo::{
        parse_thermo_text, serialize_thermo, EvalResult, NasaPoly7, SpeciesRecord,
        ThermoDatabase, P_STANDARD, R_UNIVERSAL, T_REF,
    };
    pub use crate::Error;
}
