//! Gibbs free-energy minimization over a candidate gas-species set.
//!
//! At fixed (T, P) the solver minimizes
//!
//! ```text
//! G/(RT) = sum_j n_j * mu_j/(RT),
//! mu_j/(RT) = g_j(T) + ln(n_j / n_tot) + ln(P / P0)
//! ```
//!
//! subject to element balance `sum_j a_jk n_j = b_k`, using the classic
//! reduced (element-potential) Newton iteration: each step solves a small
//! symmetric system in the element potentials and a total-moles correction,
//! then recovers per-species updates
//!
//! ```text
//! dln n_j = sum_k a_jk pi_k + dln n_tot - mu_j/(RT)
//! ```
//!
//! Steps are clamped in log space and halved if the Gibbs function rises
//! while element residuals worsen. Species below the trace floor are pinned
//! there and excluded from the stationarity check.
//!
//! The constant-(H, P) variant wraps this in a scalar outer iteration on T:
//! Newton steps using the composition-frozen heat capacity as the slope
//! estimate, with a growing bisection bracket as safeguard, warm-starting
//! each inner solve from the previous composition.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::linalg::solve_dense;
use crate::stoich::{element_totals, mixture_enthalpy, ElementVector, MixtureSpec};
use crate::thermo::{SpeciesRecord, ThermoDatabase, P_STANDARD, R_UNIVERSAL};

/// Problem mode: fixed temperature or fixed enthalpy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum EquilibriumMode {
    /// Fixed temperature and pressure.
    Tp { temperature: f64 },
    /// Fixed total enthalpy (J) and pressure; `t_guess` seeds the outer solve.
    Hp { h_target: f64, t_guess: f64 },
}

/// Element abundances, candidate species, pressure, and mode.
#[derive(Debug, Clone)]
pub struct EquilibriumProblem {
    pub b: ElementVector,
    /// Indices into the database species list, in database order.
    pub candidates: Vec<usize>,
    /// Pa
    pub pressure: f64,
    pub mode: EquilibriumMode,
}

impl EquilibriumProblem {
    /// Fixed-(T,P) problem over all eligible species for the given abundances.
    pub fn tp(
        db: &ThermoDatabase,
        b: ElementVector,
        pressure: f64,
        temperature: f64,
    ) -> Result<Self, Error> {
        let candidates = candidate_species(db, &b)?;
        Ok(EquilibriumProblem {
            b,
            candidates,
            pressure,
            mode: EquilibriumMode::Tp { temperature },
        })
    }

    /// Constant-(H,P) problem whose element abundances and target enthalpy
    /// come from a reactant mixture at its initial state.
    pub fn hp_from_reactants(
        db: &ThermoDatabase,
        reactants: &MixtureSpec,
        t_guess: f64,
    ) -> Result<Self, Error> {
        reactants.validate()?;
        let b = element_totals(reactants, db)?;
        let candidates = candidate_species(db, &b)?;
        let h_target = mixture_enthalpy(reactants, db, None)?.value;
        Ok(EquilibriumProblem {
            b,
            candidates,
            pressure: reactants.pressure,
            mode: EquilibriumMode::Hp { h_target, t_guess },
        })
    }

    fn validate(&self, db: &ThermoDatabase) -> Result<(), Error> {
        if !(self.pressure > 0.0) {
            return Err(Error::InvalidInput(format!(
                "pressure {} Pa is not positive",
                self.pressure
            )));
        }
        if self.candidates.is_empty() {
            return Err(Error::NoCandidates(
                self.b.elements().map(str::to_string).collect(),
            ));
        }
        for &idx in &self.candidates {
            let rec = db.species().get(idx).ok_or_else(|| {
                Error::InvalidInput(format!("candidate index {idx} out of range"))
            })?;
            for element in rec.composition.keys() {
                if self.b.get(element) <= 0.0 {
                    return Err(Error::InvalidInput(format!(
                        "candidate {} contains element {element} with zero abundance",
                        rec.name
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Tolerances and safeguards for the equilibrium iterations.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EquilibriumOptions {
    /// Minimum retained mole fraction; keeps log variables finite.
    pub trace_floor: f64,
    /// Element-balance residual bound, relative to max(b).
    pub tol_element: f64,
    /// Stationarity bound on |mu_j/(RT) - sum_k a_jk lambda_k|.
    pub tol_stationarity: f64,
    pub max_iter: usize,
    /// Bound on |delta ln n| per iteration.
    pub max_step: f64,
    /// Enthalpy closure bound for HP solves, relative to the enthalpy scale.
    pub hp_tol_h: f64,
    pub hp_max_outer: usize,
    /// Warm-start inner solves from the previous outer composition.
    pub warm_start: bool,
}

impl Default for EquilibriumOptions {
    fn default() -> Self {
        EquilibriumOptions {
            trace_floor: 1e-30,
            tol_element: 1e-10,
            tol_stationarity: 1e-8,
            max_iter: 200,
            max_step: 2.0,
            hp_tol_h: 1e-9,
            hp_max_outer: 60,
            warm_start: true,
        }
    }
}

/// Converged composition, temperature, and diagnostics.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EquilibriumSolution {
    /// Candidate indices into the database species list.
    pub species: Vec<usize>,
    /// Moles per candidate, floored at the trace level.
    pub moles: Vec<f64>,
    pub n_tot: f64,
    /// K
    pub temperature: f64,
    /// Element potentials (dimensionless Lagrange multipliers), one per
    /// element with positive abundance, in sorted element order.
    pub lambda: Vec<(String, f64)>,
    /// Total Gibbs function G/(RT) of the converged composition.
    pub g_total: f64,
    pub iterations: usize,
    pub converged: bool,
    pub max_element_residual: f64,
    pub max_stationarity_residual: f64,
    /// True when a retained (above display floor) species was evaluated
    /// outside its fitted temperature range.
    pub extrapolated: bool,
}

impl EquilibriumSolution {
    /// Mole fractions sorted by descending abundance (ties by name), with
    /// floored species reported as zero below the display threshold.
    pub fn mole_fractions<'a>(&self, db: &'a ThermoDatabase) -> Vec<(&'a str, f64)> {
        let mut out: Vec<(&str, f64)> = self
            .species
            .iter()
            .zip(&self.moles)
            .map(|(&idx, &n)| {
                let x = n / self.n_tot;
                (
                    db.species()[idx].name.as_str(),
                    if x < 1e-12 { 0.0 } else { x },
                )
            })
            .collect();
        out.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(b.0)));
        out
    }

    /// Total enthalpy of the converged composition at its temperature, J.
    pub fn enthalpy(&self, db: &ThermoDatabase) -> Result<f64, Error> {
        let mut sum = 0.0;
        for (&idx, &n) in self.species.iter().zip(&self.moles) {
            sum += n * db.species()[idx].h_molar(self.temperature)?.value;
        }
        Ok(sum)
    }
}

/// All gas-phase species whose every element has positive abundance, in
/// database order.
pub fn candidate_species(db: &ThermoDatabase, b: &ElementVector) -> Result<Vec<usize>, Error> {
    let available: Vec<&str> = b.elements().collect();
    let out: Vec<usize> = db
        .species()
        .iter()
        .enumerate()
        .filter(|(_, rec)| {
            rec.phase == 'G'
                && rec
                    .composition
                    .keys()
                    .all(|el| available.contains(&el.as_str()))
        })
        .map(|(idx, _)| idx)
        .collect();
    if out.is_empty() {
        return Err(Error::NoCandidates(
            available.iter().map(|s| s.to_string()).collect(),
        ));
    }
    Ok(out)
}

/// Fixed-(T,P) Gibbs minimization.
pub fn equilibrate_tp(
    db: &ThermoDatabase,
    prob: &EquilibriumProblem,
    opts: &EquilibriumOptions,
) -> Result<EquilibriumSolution, Error> {
    let EquilibriumMode::Tp { temperature } = prob.mode else {
        return Err(Error::InvalidInput(
            "equilibrate_tp called with an HP-mode problem".to_string(),
        ));
    };
    prob.validate(db)?;
    let ws = Workspace::build(db, prob)?;
    ws.solve_tp(temperature, prob.pressure, opts, None)
}

/// Constant-(H,P) Gibbs minimization: find T such that the equilibrium
/// composition at T carries the target enthalpy.
pub fn equilibrate_hp(
    db: &ThermoDatabase,
    prob: &EquilibriumProblem,
    opts: &EquilibriumOptions,
) -> Result<EquilibriumSolution, Error> {
    let EquilibriumMode::Hp { h_target, t_guess } = prob.mode else {
        return Err(Error::InvalidInput(
            "equilibrate_hp called with a TP-mode problem".to_string(),
        ));
    };
    prob.validate(db)?;
    if !(t_guess > 250.0 && t_guess < 6500.0) {
        return Err(Error::InvalidInput(format!(
            "t_guess {t_guess} K outside (250, 6500)"
        )));
    }
    let ws = Workspace::build(db, prob)?;

    let (mut t_lo, mut t_hi) = (250.0_f64, 6500.0_f64);
    let mut have_lo = false;
    let mut have_hi = false;
    let mut t = t_guess;
    let mut warm: Option<(Vec<f64>, f64)> = None;

    for outer in 1..=opts.hp_max_outer {
        let sol = ws
            .solve_tp(t, prob.pressure, opts, warm.as_ref())
            .map_err(|e| wrap_outer(e, outer, t))?;
        if opts.warm_start {
            warm = Some((sol.moles.clone(), sol.n_tot));
        }

        let mut h = 0.0;
        let mut cp_frozen = 0.0;
        for (&idx, &n) in sol.species.iter().zip(&sol.moles) {
            let rec = &db.species()[idx];
            h += n * rec.h_molar(t)?.value;
            cp_frozen += n * rec.cp_r(t)?.value * R_UNIVERSAL;
        }
        let residual = h - h_target;
        let h_scale: f64 = sol
            .species
            .iter()
            .zip(&sol.moles)
            .map(|(&idx, &n)| (n * db.species()[idx].h_molar(t).unwrap().value).abs())
            .sum::<f64>()
            + h_target.abs();
        if residual.abs() <= opts.hp_tol_h * h_scale.max(1.0) {
            return Ok(EquilibriumSolution {
                iterations: sol.iterations,
                ..sol
            });
        }

        if residual > 0.0 {
            t_hi = t_hi.min(t);
            have_hi = true;
        } else {
            t_lo = t_lo.max(t);
            have_lo = true;
        }

        // frozen Cp underestimates the equilibrium slope, so the raw Newton
        // step overshoots; the bracket catches it once both sides are known
        let mut t_next = t - residual / cp_frozen;
        if !t_next.is_finite() {
            t_next = 0.5 * (t_lo + t_hi);
        }
        if have_lo && have_hi && (t_next <= t_lo || t_next >= t_hi) {
            t_next = 0.5 * (t_lo + t_hi);
        }
        t_next = t_next.clamp(250.0, 6500.0);
        if have_lo && have_hi && (t_hi - t_lo) < 1e-12 * t {
            return Err(Error::NoConvergence {
                iterations: outer,
                msg: format!(
                    "HP bracket collapsed at [{t_lo}, {t_hi}] K with enthalpy residual {residual:.3e} J"
                ),
            });
        }
        t = t_next;
    }
    Err(Error::NoConvergence {
        iterations: opts.hp_max_outer,
        msg: format!("HP outer iteration did not close the enthalpy balance (last T = {t} K)"),
    })
}

fn wrap_outer(err: Error, outer: usize, t: f64) -> Error {
    match err {
        Error::NoConvergence { iterations, msg } => Error::NoConvergence {
            iterations,
            msg: format!("inner TP solve at outer step {outer}, T = {t:.2} K: {msg}"),
        },
        other => other,
    }
}

/// Candidate table shared by the TP iterations of one problem.
struct Workspace<'a> {
    candidates: Vec<usize>,
    records: Vec<&'a SpeciesRecord>,
    elements: Vec<String>,
    b: Vec<f64>,
    b_max: f64,
    /// a[j][k]: atoms of element k in candidate j.
    a: Vec<Vec<f64>>,
}

impl<'a> Workspace<'a> {
    fn build(db: &'a ThermoDatabase, prob: &EquilibriumProblem) -> Result<Self, Error> {
        let elements: Vec<String> = prob.b.elements().map(str::to_string).collect();
        if elements.is_empty() {
            return Err(Error::InvalidInput(
                "element vector has no positive entries".to_string(),
            ));
        }
        let b: Vec<f64> = elements.iter().map(|el| prob.b.get(el)).collect();
        let b_max = b.iter().cloned().fold(0.0, f64::max);
        let records: Vec<&SpeciesRecord> = prob
            .candidates
            .iter()
            .map(|&idx| &db.species()[idx])
            .collect();
        let a: Vec<Vec<f64>> = records
            .iter()
            .map(|rec| {
                elements
                    .iter()
                    .map(|el| rec.composition.get(el).copied().unwrap_or(0.0))
                    .collect()
            })
            .collect();
        // every element must be reachable through some candidate
        for (k, el) in elements.iter().enumerate() {
            if a.iter().all(|row| row[k] == 0.0) {
                return Err(Error::SingularSystem {
                    elements: vec![el.clone()],
                    msg: "no candidate species carries this element".to_string(),
                });
            }
        }
        Ok(Workspace {
            candidates: prob.candidates.clone(),
            records,
            elements,
            b,
            b_max,
            a,
        })
    }

    /// Complete-combustion-like major species assignment, used to seed the
    /// iteration; falls back to a uniform composition when the abundances
    /// cannot be covered by CO2/H2O/O2/N2/AR majors.
    fn initial_moles(&self) -> Vec<f64> {
        let ns = self.candidates.len();
        let scale: f64 = self.b.iter().sum();
        let uniform = vec![0.1 * scale / ns as f64; ns];

        let index_of = |name: &str| self.records.iter().position(|r| r.name == name);
        let el = |symbol: &str| {
            self.elements
                .iter()
                .position(|e| e == symbol)
                .map(|k| self.b[k])
                .unwrap_or(0.0)
        };

        let mut majors: Vec<(usize, f64)> = Vec::new();
        let mut oxygen_left = el("O");
        let carbon = el("C");
        if carbon > 0.0 {
            match index_of("CO2") {
                Some(j) => {
                    majors.push((j, carbon));
                    oxygen_left -= 2.0 * carbon;
                }
                None => return uniform,
            }
        }
        let hydrogen = el("H");
        if hydrogen > 0.0 {
            match index_of("H2O") {
                Some(j) => {
                    majors.push((j, hydrogen / 2.0));
                    oxygen_left -= hydrogen / 2.0;
                }
                None => return uniform,
            }
        }
        if el("O") > 0.0 {
            if oxygen_left < -1e-9 * el("O") {
                return uniform; // rich in oxygen terms; no unique major split
            }
            if oxygen_left > 0.0 {
                match index_of("O2") {
                    Some(j) => majors.push((j, oxygen_left / 2.0)),
                    None => return uniform,
                }
            }
        }
        let nitrogen = el("N");
        if nitrogen > 0.0 {
            match index_of("N2") {
                Some(j) => majors.push((j, nitrogen / 2.0)),
                None => return uniform,
            }
        }
        let argon = el("AR");
        if argon > 0.0 {
            match index_of("AR") {
                Some(j) => majors.push((j, argon)),
                None => return uniform,
            }
        }
        // any element outside the combustion set means the heuristic does
        // not apply
        for (k, element) in self.elements.iter().enumerate() {
            if !["C", "H", "O", "N", "AR"].contains(&element.as_str()) && self.b[k] > 0.0 {
                return uniform;
            }
        }

        let major_total: f64 = majors.iter().map(|(_, n)| n).sum();
        if major_total <= 0.0 {
            return uniform;
        }
        let minor = 1e-10 * major_total;
        let mut n = vec![minor; ns];
        for (j, amount) in majors {
            n[j] = n[j].max(amount);
        }
        n
    }

    #[allow(clippy::too_many_arguments)]
    fn solve_tp(
        &self,
        temperature: f64,
        pressure: f64,
        opts: &EquilibriumOptions,
        warm: Option<&(Vec<f64>, f64)>,
    ) -> Result<EquilibriumSolution, Error> {
        if !(temperature > 0.0) {
            return Err(Error::Domain { t: temperature });
        }
        let ns = self.candidates.len();
        let ne = self.elements.len();
        let dim = ne + 1;
        let ln_p = (pressure / P_STANDARD).ln();

        let mut g = Vec::with_capacity(ns);
        let mut extrapolated_any = vec![false; ns];
        for (j, rec) in self.records.iter().enumerate() {
            let gr = rec.g_rt(temperature)?;
            g.push(gr.value);
            extrapolated_any[j] = gr.extrapolated;
        }

        let (mut n, mut n_bar) = match warm {
            Some((moles, total)) => (moles.clone(), *total),
            None => {
                let n0 = self.initial_moles();
                let total = n0.iter().sum();
                (n0, total)
            }
        };

        let mu = |n: &[f64], n_bar: f64, out: &mut Vec<f64>| {
            out.clear();
            for j in 0..ns {
                out.push(g[j] + (n[j] / n_bar).ln() + ln_p);
            }
        };
        let gibbs = |n: &[f64]| -> f64 {
            let total: f64 = n.iter().sum();
            n.iter()
                .zip(&g)
                .map(|(&nj, &gj)| nj * (gj + (nj / total).ln() + ln_p))
                .sum()
        };
        let element_residual = |n: &[f64]| -> f64 {
            let mut worst = 0.0f64;
            for k in 0..ne {
                let total: f64 = (0..ns).map(|j| self.a[j][k] * n[j]).sum();
                worst = worst.max((total - self.b[k]).abs());
            }
            worst / self.b_max
        };

        let mut mu_vec = Vec::with_capacity(ns);
        let mut pi = vec![0.0; ne];
        let mut matrix = vec![0.0; dim * dim];
        let mut rhs = vec![0.0; dim];

        for iteration in 1..=opts.max_iter {
            let floor = opts.trace_floor * n_bar;
            for nj in n.iter_mut() {
                if *nj < floor {
                    *nj = floor;
                }
            }
            mu(&n, n_bar, &mut mu_vec);

            // reduced system in (pi_1..pi_ne, dln n_bar)
            matrix.fill(0.0);
            rhs.fill(0.0);
            for i in 0..ne {
                for k in i..ne {
                    let mut sum = 0.0;
                    for j in 0..ns {
                        if self.a[j][i] != 0.0 && self.a[j][k] != 0.0 {
                            sum += self.a[j][i] * self.a[j][k] * n[j];
                        }
                    }
                    matrix[i * dim + k] = sum;
                    matrix[k * dim + i] = sum;
                }
                let row_total: f64 = (0..ns).map(|j| self.a[j][i] * n[j]).sum();
                matrix[i * dim + ne] = row_total;
                matrix[ne * dim + i] = row_total;
                let mu_weighted: f64 = (0..ns).map(|j| self.a[j][i] * n[j] * mu_vec[j]).sum();
                rhs[i] = self.b[i] - row_total + mu_weighted;
            }
            let n_sum: f64 = n.iter().sum();
            matrix[ne * dim + ne] = n_sum - n_bar;
            rhs[ne] = n_bar - n_sum + n.iter().zip(&mu_vec).map(|(&nj, &m)| nj * m).sum::<f64>();

            solve_dense(&mut matrix, &mut rhs, dim).map_err(|msg| Error::SingularSystem {
                elements: self.elements.clone(),
                msg,
            })?;
            pi.copy_from_slice(&rhs[..ne]);
            let dln_bar = rhs[ne];

            let mut dln = Vec::with_capacity(ns);
            for j in 0..ns {
                let mut step = dln_bar - mu_vec[j];
                for k in 0..ne {
                    step += self.a[j][k] * pi[k];
                }
                dln.push(step);
            }

            // two-tier step control: species above the trace boundary (and
            // the total) are limited to max_step log units; deeply trace
            // species may rise all the way to ~1e-4 mole fraction in one
            // step but no further, so they cannot throttle the majors
            const TRACE_LN_X: f64 = -18.326;
            const TRACE_RISE_TO: f64 = 9.2103404;
            let mut worst_major = 5.0 * dln_bar.abs();
            let mut alpha: f64 = 1.0;
            for j in 0..ns {
                let ln_x = (n[j] / n_bar).ln();
                if ln_x > TRACE_LN_X {
                    if dln[j].abs() > worst_major {
                        worst_major = dln[j].abs();
                    }
                } else if dln[j] >= 0.0 {
                    let denom = dln[j] - dln_bar;
                    if denom > 0.0 {
                        alpha = alpha.min((-ln_x - TRACE_RISE_TO) / denom);
                    }
                }
            }
            if worst_major > opts.max_step {
                alpha = alpha.min(opts.max_step / worst_major);
            }

            let g_before = gibbs(&n);
            let res_before = element_residual(&n);
            let mut trial = vec![0.0; ns];
            let mut trial_bar = n_bar;
            for _ in 0..5 {
                for j in 0..ns {
                    trial[j] = n[j] * (alpha * dln[j]).exp();
                }
                trial_bar = n_bar * (alpha * dln_bar).exp();
                let g_after = gibbs(&trial);
                let res_after = element_residual(&trial);
                let g_tol = 1e-12 * (1.0 + g_before.abs());
                if g_after <= g_before + g_tol || res_after <= res_before {
                    break;
                }
                alpha *= 0.5;
            }
            std::mem::swap(&mut n, &mut trial);
            n_bar = trial_bar;

            // convergence: element balance, stationarity over retained
            // species, and internal total-moles consistency
            let floor = opts.trace_floor * n_bar;
            let e_res = element_residual(&n);
            mu(&n, n_bar, &mut mu_vec);
            let mut s_res = 0.0f64;
            for j in 0..ns {
                if n[j] > floor {
                    let mut defect = mu_vec[j];
                    for k in 0..ne {
                        defect -= self.a[j][k] * pi[k];
                    }
                    s_res = s_res.max(defect.abs());
                }
            }
            let n_sum: f64 = n.iter().sum();
            let totals_ok = ((n_sum - n_bar) / n_bar).abs() <= 1e-12;

            if e_res <= opts.tol_element && s_res <= opts.tol_stationarity && totals_ok {
                return Ok(self.finish(n, temperature, &pi, &extrapolated_any, iteration, e_res, s_res, ln_p, &g));
            }
        }

        let e_res = element_residual(&n);
        let worst = self
            .records
            .iter()
            .zip(&n)
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .map(|(rec, _)| rec.name.clone())
            .unwrap_or_default();
        Err(Error::NoConvergence {
            iterations: opts.max_iter,
            msg: format!(
                "TP equilibrium at {temperature} K: element residual {e_res:.3e}, dominant species {worst}"
            ),
        })
    }

    #[allow(clippy::too_many_arguments)]
    fn finish(
        &self,
        n: Vec<f64>,
        temperature: f64,
        pi: &[f64],
        extrapolated_any: &[bool],
        iterations: usize,
        e_res: f64,
        s_res: f64,
        ln_p: f64,
        g: &[f64],
    ) -> EquilibriumSolution {
        let n_tot: f64 = n.iter().sum();
        let g_total: f64 = n
            .iter()
            .zip(g)
            .map(|(&nj, &gj)| nj * (gj + (nj / n_tot).ln() + ln_p))
            .sum();
        let extrapolated = n
            .iter()
            .zip(extrapolated_any)
            .any(|(&nj, &flag)| flag && nj / n_tot > 1e-12);
        let lambda = self
            .elements
            .iter()
            .cloned()
            .zip(pi.iter().copied())
            .collect();
        EquilibriumSolution {
            species: self.candidates.clone(),
            moles: n,
            n_tot,
            temperature,
            lambda,
            g_total,
            iterations,
            converged: true,
            max_element_residual: e_res,
            max_stationarity_residual: s_res,
            extrapolated,
        }
    }
}
