//! Error type shared across the crate.

use crate::bath::Bath;

/// Everything that can go wrong while building the model or solving it.
///
/// Variants are grouped by origin: parameter validation, construction-time
/// consistency checks, and numerical failures. The consistency checks guard
/// hand-derived closed forms against independent numerical routes; tripping
/// one means an implementation bug, not bad user input.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A frequency, temperature, or coupling that must be > 0 was not.
    #[error("parameter `{name}` must be positive, got {value}")]
    NonPositiveParameter { name: &'static str, value: f64 },

    /// `g` coincides with one of the qubit frequencies, collapsing a Bohr
    /// frequency to zero (the bath spectral functions diverge there).
    #[error("coupling g = {g} is degenerate with {collides_with} (Bohr frequency would vanish)")]
    DegenerateBohrFrequency { g: f64, collides_with: &'static str },

    /// Scalar-function domain violation (`mean_occupation` needs w, T > 0).
    #[error("domain error in {op}: `{name}` = {value} is out of range")]
    Domain {
        op: &'static str,
        name: &'static str,
        value: f64,
    },

    /// Analytic spectrum disagrees with the numerical diagonalization oracle.
    #[error("eigenvalue {index}: analytic {analytic} vs numeric {numeric} beyond tolerance")]
    EigenvalueMismatch {
        index: usize,
        analytic: f64,
        numeric: f64,
    },

    /// An eigenoperator came out with a (near-)zero transition frequency.
    #[error("eigenoperator ({bath}, {j}) has |frequency| = {frequency} below tolerance")]
    ZeroFrequency { bath: Bath, j: u8, frequency: f64 },

    /// An eigenoperator fails its defining commutation relation.
    #[error("eigenoperator ({bath}, {j}) violates [H, V] = -wV, residual {residual}")]
    CommutatorViolation { bath: Bath, j: u8, residual: f64 },

    /// The rate-matrix kernel is not one-dimensional (disconnected rate graph).
    #[error("rate matrix kernel has dimension {dimension}, expected 1")]
    DegenerateKernel { dimension: usize },

    /// A solved population is negative beyond numerical slack.
    #[error("population {index} = {value} is negative beyond tolerance")]
    NegativePopulation { index: usize, value: f64 },

    /// The literal and dissipator-derived rate matrices disagree.
    #[error("rate-matrix construction routes disagree: max |difference| = {max_diff}")]
    ConstructionMismatch { max_diff: f64 },

    /// The solved steady state does not annihilate the full generator.
    #[error("steady-state generator residual {residual} exceeds {tolerance}")]
    SteadyResidual { residual: f64, tolerance: f64 },

    /// The two equivalent heat-current evaluations disagree.
    #[error("heat current for bath {bath}: trace form {trace_form} vs vector form {vector_form}")]
    FormMismatch {
        bath: Bath,
        trace_form: f64,
        vector_form: f64,
    },

    /// Entropy production came out negative beyond numerical slack.
    #[error("entropy production {sigma} < -1e-8 signals an implementation bug")]
    SecondLawViolation { sigma: f64 },

    /// Time integration lost trace normalization (step size too large).
    #[error("time evolution trace drift {trace_drift} exceeds 1e-6; reduce dt")]
    StepSizeUnstable { trace_drift: f64 },

    /// A matrix handed to `DensityMatrix::new` is not a valid state.
    #[error("not a density matrix: {reason} (measure {measure})")]
    InvalidState {
        reason: &'static str,
        measure: f64,
    },
}
