//! Built-in dataset presets.
//!
//! All presets share the reference machine (`omega_H = 3`, `omega_C = 1`,
//! `gamma = 0.001 * omega_H`) and sweep the hot-bath temperature. They differ
//! in bath temperatures and in the set of internal couplings plotted as
//! separate lines.

use std::str::FromStr;

use qar_core::ModelParams;

use crate::error::CliError;
use crate::sweep::{SweepSpec, Variable};

const OMEGA_H: f64 = 3.0;
const OMEGA_C: f64 = 1.0;
const GAMMA: f64 = 1e-3 * OMEGA_H;

/// Identifier of a built-in dataset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureId {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
}

impl FigureId {
    pub const ALL: [FigureId; 6] = [
        FigureId::Fig1,
        FigureId::Fig2,
        FigureId::Fig3,
        FigureId::Fig4,
        FigureId::Fig5,
        FigureId::Fig6,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FigureId::Fig1 => "fig1",
            FigureId::Fig2 => "fig2",
            FigureId::Fig3 => "fig3",
            FigureId::Fig4 => "fig4",
            FigureId::Fig5 => "fig5",
            FigureId::Fig6 => "fig6",
        }
    }
}

impl FromStr for FigureId {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FigureId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| {
                CliError::Config(format!(
                    "unknown figure id `{s}` (expected fig1..fig6)"
                ))
            })
    }
}

/// A fully resolved preset: base parameters, swept range, and coupling lines.
#[derive(Debug, Clone)]
pub struct FigurePreset {
    pub id: FigureId,
    pub spec: SweepSpec,
}

/// Resolves a preset. The physics (baths, coupling ladder) is fixed; the
/// grid ranges are implementation defaults, overridable with
/// `--from`/`--to`/`--steps`.
pub fn preset(id: FigureId) -> FigurePreset {
    let cool = base(21.0, 18.0); // refrigerating bath pair
    let degenerate = base(40.0, 10.0); // omega_C/T_C = omega_R/T_R pair
    let spec = match id {
        // Currents (fig1) and efficiency (fig2) of the weak-coupling machine.
        FigureId::Fig1 | FigureId::Fig2 => sweep(cool, &[1e-3], 18.0, 40.0, 200),
        // Cooling-current suppression as the coupling grows.
        FigureId::Fig3 => sweep(cool, &[1e-3, 0.1, 0.2, 0.25, 0.3, 0.35], 18.0, 40.0, 200),
        // One strong-coupling line, wide range: shows the shifted onset and
        // the upper sign change back to heating.
        FigureId::Fig4 => sweep(cool, &[0.3], 18.0, 200.0, 200),
        // Efficiency lines for the same coupling ladder.
        FigureId::Fig5 => sweep(cool, &[1e-3, 0.1, 0.15, 0.2, 0.25, 0.3], 18.0, 40.0, 200),
        // Degenerate bath ratio: no coupling refrigerates.
        FigureId::Fig6 => sweep(degenerate, &[1e-3, 0.1, 0.2, 0.3, 0.4, 0.5], 41.0, 200.0, 160),
    };
    FigurePreset { id, spec }
}

fn base(t_room: f64, t_cold: f64) -> ModelParams {
    // T_H is swept; the base value is overwritten at every grid point.
    ModelParams::uniform_gamma(OMEGA_H, OMEGA_C, 1e-3 * OMEGA_H, 30.0, t_room, t_cold, GAMMA)
}

fn sweep(base: ModelParams, g_over_wh: &[f64], from: f64, to: f64, steps: usize) -> SweepSpec {
    SweepSpec {
        base,
        variable: Variable::THot,
        from,
        to,
        steps,
        g_list: g_over_wh.iter().map(|r| r * OMEGA_H).collect(),
    }
}
