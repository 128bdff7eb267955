//! Parameter sweeps and zero-crossing searches over steady-state observables.
//!
//! Grid points are independent steady-state solves, evaluated in parallel and
//! gathered back into grid order, so output is deterministic regardless of
//! scheduling. A point that fails (invalid parameters on that grid value, or
//! a numerical failure) becomes a row carrying the reason instead of
//! aborting the sweep.

use clap::ValueEnum;
use qar_core::{steady_report, Generator, ModelParams};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::CliError;

/// Which parameter the grid walks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Variable {
    #[value(name = "T_H")]
    THot,
    #[value(name = "T_R")]
    TRoom,
    #[value(name = "T_C")]
    TCold,
    #[value(name = "g")]
    G,
}

impl Variable {
    /// Plain symbol, used in JSON and messages.
    pub fn label(self) -> &'static str {
        match self {
            Variable::THot => "T_H",
            Variable::TRoom => "T_R",
            Variable::TCold => "T_C",
            Variable::G => "g",
        }
    }

    /// Unit-annotated CSV column heading.
    pub fn csv_heading(self) -> &'static str {
        match self {
            Variable::THot => "T_H[K]",
            Variable::TRoom => "T_R[K]",
            Variable::TCold => "T_C[K]",
            Variable::G => "g",
        }
    }

    fn apply(self, p: &mut ModelParams, value: f64) {
        match self {
            Variable::THot => p.t_hot = value,
            Variable::TRoom => p.t_room = value,
            Variable::TCold => p.t_cold = value,
            Variable::G => p.g = value,
        }
    }
}

/// A full sweep request.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    /// Parameters at every grid point, before the swept variable (and the
    /// per-line coupling) are written in.
    pub base: ModelParams,
    pub variable: Variable,
    pub from: f64,
    pub to: f64,
    /// Number of grid points (inclusive endpoints).
    pub steps: usize,
    /// One sweep line per coupling value; empty means "use the base g".
    pub g_list: Vec<f64>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.from < self.to) {
            return Err(CliError::Config(format!(
                "sweep range must satisfy from < to, got [{}, {}]",
                self.from, self.to
            )));
        }
        if self.steps < 2 {
            return Err(CliError::Config(format!(
                "sweep needs at least 2 grid points, got {}",
                self.steps
            )));
        }
        if self.variable == Variable::G && self.g_list.len() > 1 {
            return Err(CliError::Config(
                "cannot sweep g and give a multi-valued --g-list at the same time".into(),
            ));
        }
        Ok(())
    }

    /// The coupling values that define the sweep lines (at least one).
    fn lines(&self) -> Vec<f64> {
        if self.g_list.is_empty() {
            vec![self.base.g]
        } else {
            self.g_list.clone()
        }
    }

    /// Inclusive uniform grid.
    pub fn grid(&self) -> Vec<f64> {
        let h = (self.to - self.from) / (self.steps - 1) as f64;
        (0..self.steps).map(|k| self.from + k as f64 * h).collect()
    }
}

/// Numbers attached to one successful grid point.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RowData {
    pub q_hot: f64,
    pub q_room: f64,
    pub q_cold: f64,
    /// `q_cold / q_hot`; absent where the hot current vanishes.
    pub eta: Option<f64>,
    pub sigma: f64,
    /// Non-finite values serialize as JSON null (undefined crossing point).
    pub t_virtual: f64,
    pub first_law_residual: f64,
    /// Gross one-way energy flow; the scale for residual checks.
    pub flow_scale: f64,
    pub construction_gap: f64,
    pub generator_residual: f64,
}

/// One grid point of one line. Exactly one of `data`/`skipped` is present.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub g: f64,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
    #[serde(flatten)]
    pub data: Option<RowData>,
}

/// Ordered sweep result: line-major, grid-ascending.
#[derive(Debug, Clone)]
pub struct SweepTable {
    pub variable: Variable,
    /// More than one coupling line (adds the leading `g` CSV column).
    pub multi_line: bool,
    pub rows: Vec<SweepRow>,
}

/// Solves one grid point to a row; errors become the skip reason.
fn evaluate_point(spec: &SweepSpec, g: f64, value: f64) -> SweepRow {
    let mut p = spec.base;
    p.g = g;
    spec.variable.apply(&mut p, value);
    let outcome = Generator::new(p).and_then(|gen| steady_report(&gen));
    match outcome {
        Ok(r) => SweepRow {
            g,
            value,
            skipped: None,
            data: Some(RowData {
                q_hot: r.q_dot.hot,
                q_room: r.q_dot.room,
                q_cold: r.q_dot.cold,
                eta: r.efficiency,
                sigma: r.entropy_production,
                t_virtual: r.t_virtual,
                first_law_residual: r.first_law_residual,
                flow_scale: r.flow_scale,
                construction_gap: r.diagnostics.construction_gap,
                generator_residual: r.diagnostics.generator_residual,
            }),
        },
        Err(e) => SweepRow {
            g,
            value,
            skipped: Some(e.to_string()),
            data: None,
        },
    }
}

/// Runs the whole grid. Never fails beyond `SweepSpec::validate`: per-point
/// errors are recorded in their rows.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable, CliError> {
    spec.validate()?;
    let lines = spec.lines();
    let grid = spec.grid();
    let points: Vec<(f64, f64)> = lines
        .iter()
        .flat_map(|&g| grid.iter().map(move |&v| (g, v)))
        .collect();
    let rows: Vec<SweepRow> = points
        .par_iter()
        .map(|&(g, v)| evaluate_point(spec, g, v))
        .collect();
    Ok(SweepTable {
        variable: spec.variable,
        multi_line: lines.len() > 1,
        rows,
    })
}

/// Cold-bath current at one point of a single-line sweep; the observable
/// whose zeros bound the refrigeration window.
fn q_cold_at(spec: &SweepSpec, g: f64, value: f64) -> Result<f64, CliError> {
    let mut p = spec.base;
    p.g = g;
    spec.variable.apply(&mut p, value);
    let gen = Generator::new(p)?;
    Ok(steady_report(&gen)?.q_dot.cold)
}

/// Scans the grid for sign changes of the cold current and refines each by
/// bisection to a variable resolution of 1e-4. Returns the ascending list of
/// roots; an empty list means the current never changes sign.
///
/// Only single-line specs make sense here (one observable, one curve).
pub fn find_zero_crossings(spec: &SweepSpec) -> Result<Vec<f64>, CliError> {
    spec.validate()?;
    let lines = spec.lines();
    if lines.len() != 1 {
        return Err(CliError::Config(
            "zero-crossing search needs a single coupling line".into(),
        ));
    }
    let g = lines[0];

    // Grid scan; points that fail to solve break bracketing continuity and
    // are treated as gaps.
    let mut samples = Vec::with_capacity(spec.steps);
    for v in spec.grid() {
        samples.push((v, q_cold_at(spec, g, v).ok()));
    }

    let mut roots = Vec::new();
    for pair in samples.windows(2) {
        let (a, fa) = pair[0];
        let (b, fb) = pair[1];
        let (Some(fa), Some(fb)) = (fa, fb) else {
            continue;
        };
        if fa == 0.0 {
            roots.push(a);
            continue;
        }
        if fa * fb < 0.0 {
            roots.push(bisect(spec, g, a, b, fa)?);
        }
    }
    // An exact zero at the last grid point is a root too.
    if let Some(&(b, Some(fb))) = samples.last() {
        if fb == 0.0 {
            roots.push(b);
        }
    }
    Ok(roots)
}

fn bisect(spec: &SweepSpec, g: f64, mut lo: f64, mut hi: f64, mut flo: f64) -> Result<f64, CliError> {
    while hi - lo > 1e-4 {
        let mid = 0.5 * (lo + hi);
        let fm = q_cold_at(spec, g, mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if flo * fm < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Re-checks the physical invariants a row must satisfy before it is written
/// anywhere: entropy production non-negative (to rounding) and energy
/// conservation at the gross-flow scale.
pub fn check_row_laws(row: &SweepRow) -> Result<(), CliError> {
    let Some(d) = &row.data else { return Ok(()) };
    if d.sigma < -1e-12 {
        return Err(CliError::Law(format!(
            "negative entropy production {} at grid value {}",
            d.sigma, row.value
        )));
    }
    // Generous 10x headroom over the verified residual bound so legitimate
    // rows never abort an emission; genuine bugs overshoot by orders.
    if d.first_law_residual.abs() > 1e-11 * d.flow_scale {
        return Err(CliError::Law(format!(
            "first-law residual {} exceeds scale {} at grid value {}",
            d.first_law_residual, d.flow_scale, row.value
        )));
    }
    Ok(())
}
