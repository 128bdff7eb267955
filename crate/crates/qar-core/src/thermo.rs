//! Heat currents, cooling efficiency, virtual temperature, and entropy
//! production at the steady state.
//!
//! Sign convention: a positive current means heat flows from that reservoir
//! into the machine. The machine refrigerates exactly when the cold current
//! is positive.

use crate::bath::Bath;
use crate::error::Error;
use crate::liouvillian::{DensityMatrix, Generator};
use crate::model::ModelParams;
use crate::steadystate::{steady_state_full, PopulationVector, RateMatrix, SteadyDiagnostics};
use crate::{RMatrix8, DIM};

/// Steady-state heat currents, one per bath.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatCurrents {
    pub hot: f64,
    pub room: f64,
    pub cold: f64,
}

impl HeatCurrents {
    #[inline]
    pub fn get(&self, bath: Bath) -> f64 {
        match bath {
            Bath::Hot => self.hot,
            Bath::Room => self.room,
            Bath::Cold => self.cold,
        }
    }

    /// First-law residual; identically zero at stationarity up to rounding.
    #[inline]
    pub fn sum(&self) -> f64 {
        self.hot + self.room + self.cold
    }

    /// Largest current magnitude, the natural scale for residual checks.
    pub fn max_abs(&self) -> f64 {
        self.hot.abs().max(self.room.abs()).max(self.cold.abs())
    }

    /// True when the cold reservoir is being refrigerated.
    #[inline]
    pub fn is_refrigerator(&self) -> bool {
        self.cold > 0.0
    }
}

/// Heat current from one bath into the machine, evaluated two equivalent
/// ways: as the energy-trace of that bath's dissipator acting on the state,
/// and as the energy row-vector applied to that bath's rate-matrix part times
/// the populations.
///
/// Returns `(trace_form, vector_form, gross)` after checking that the two
/// forms agree. `gross` is the one-way energy flow
/// `|energies| . |M_bath| . populations`, which also scales the agreement
/// tolerance: the net row flows cancel gains against losses and vanish at
/// reversibility, so they cannot set it. `gross` is the right yardstick for
/// any residual built from currents (e.g. the first-law sum along a sweep
/// that crosses the all-currents-zero point).
pub fn heat_current_forms(
    gen: &Generator,
    bath: Bath,
    state: &DensityMatrix,
    m_part: &RMatrix8,
) -> Result<(f64, f64, f64), Error> {
    let energies = &gen.eigensystem().eigenvalues;

    // Trace form: Tr{ H (L_bath rho) } with H diagonal in the eigenbasis.
    let l = gen.dissipator(bath, state.matrix());
    let mut trace_form = 0.0;
    for i in 0..DIM {
        trace_form += energies[i] * l[(i, i)].re;
    }

    // Vector form: <energies| M_bath |populations>.
    let pops = state.populations();
    let flow = m_part * pops;
    let vector_form = energies.dot(&flow);

    // One-way flow scale |energies| . |M_bath| . populations: the row flows
    // in `flow` net gains against losses and vanish at reversibility, so
    // they cannot set the tolerance.
    let mut gross = 0.0;
    for i in 0..DIM {
        let mut one_way = 0.0;
        for j in 0..DIM {
            one_way += m_part[(i, j)].abs() * pops[j].abs();
        }
        gross += energies[i].abs() * one_way;
    }
    let scale = gross.max(trace_form.abs()).max(vector_form.abs());
    if (trace_form - vector_form).abs() > 1e-10 * scale {
        return Err(Error::FormMismatch {
            bath,
            trace_form,
            vector_form,
        });
    }
    Ok((trace_form, vector_form, gross))
}

/// The heat current as a single number: the vector form, after the two-form
/// agreement check in [`heat_current_forms`].
pub fn heat_current(
    gen: &Generator,
    bath: Bath,
    state: &DensityMatrix,
    m_part: &RMatrix8,
) -> Result<f64, Error> {
    heat_current_forms(gen, bath, state, m_part).map(|(_, v, _)| v)
}

/// Cooling efficiency `Q_cold / Q_hot`, reported for any sign of either
/// current; `None` when the hot current is too small for the ratio to mean
/// anything (all-currents-zero crossing point).
pub fn efficiency(q: &HeatCurrents) -> Option<f64> {
    let scale = q.max_abs();
    if scale == 0.0 || q.hot.abs() <= 1e-14 * scale {
        None
    } else {
        Some(q.cold / q.hot)
    }
}

/// The hot-bath temperature at which all three currents vanish
/// simultaneously in the weak-coupling machine:
/// `omega_H / (omega_R/T_R - omega_C/T_C)`.
///
/// Returns infinity when the denominator vanishes (the degenerate-ratio
/// regime `omega_C/T_C = omega_R/T_R`) and a negative value when the cold
/// side dominates; both are meaningful, neither is an error.
pub fn virtual_temperature(p: &ModelParams) -> f64 {
    let denom = p.omega_r() / p.t_room - p.omega_c / p.t_cold;
    if denom == 0.0 {
        f64::INFINITY
    } else {
        p.omega_h / denom
    }
}

/// Entropy production rate `sigma = -(Q_H/T_H + Q_R/T_R + Q_C/T_C)`.
///
/// Non-negative for any steady state of the model; a value below -1e-8
/// signals an implementation bug and is escalated.
pub fn entropy_production(q: &HeatCurrents, p: &ModelParams) -> Result<f64, Error> {
    let sigma = -(q.hot / p.t_hot + q.room / p.t_room + q.cold / p.t_cold);
    if sigma < -1e-8 {
        return Err(Error::SecondLawViolation { sigma });
    }
    Ok(sigma)
}

/// Everything there is to report about one steady state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyReport {
    /// Eigenbasis populations.
    pub populations: PopulationVector,
    /// Heat currents into the machine.
    pub q_dot: HeatCurrents,
    /// `Q_cold / Q_hot`, when defined.
    pub efficiency: Option<f64>,
    /// Zero-current hot temperature of the weak-coupling machine.
    pub t_virtual: f64,
    /// Entropy production rate.
    pub entropy_production: f64,
    /// First-law residual `Q_H + Q_R + Q_C` (reported, not zeroed).
    pub first_law_residual: f64,
    /// Largest gross one-way energy flow across the baths; the scale against
    /// which current residuals stay meaningful even where the net currents
    /// all cross zero.
    pub flow_scale: f64,
    /// Solver and construction diagnostics.
    pub diagnostics: SteadyDiagnostics,
}

/// Full pipeline for one parameter point: steady state, currents (both
/// evaluation routes cross-checked), efficiency, virtual temperature, and
/// entropy production.
pub fn steady_report(gen: &Generator) -> Result<SteadyReport, Error> {
    steady_report_with_matrix(gen).map(|(report, _)| report)
}

/// [`steady_report`] variant for callers that also want the rate matrix.
pub fn steady_report_with_matrix(gen: &Generator) -> Result<(SteadyReport, RateMatrix), Error> {
    let (populations, rate_matrix, diagnostics) = steady_state_full(gen)?;
    let state = DensityMatrix::from_populations(populations.as_vector());
    let (_, hot, g_h) = heat_current_forms(gen, Bath::Hot, &state, rate_matrix.part(Bath::Hot))?;
    let (_, room, g_r) = heat_current_forms(gen, Bath::Room, &state, rate_matrix.part(Bath::Room))?;
    let (_, cold, g_c) = heat_current_forms(gen, Bath::Cold, &state, rate_matrix.part(Bath::Cold))?;
    let q_dot = HeatCurrents { hot, room, cold };
    let report = SteadyReport {
        populations,
        q_dot,
        efficiency: efficiency(&q_dot),
        t_virtual: virtual_temperature(gen.params()),
        entropy_production: entropy_production(&q_dot, gen.params())?,
        first_law_residual: q_dot.sum(),
        flow_scale: g_h.max(g_r).max(g_c),
        diagnostics,
    };
    Ok((report, rate_matrix))
}
