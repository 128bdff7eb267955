//! Core model of a three-qubit quantum absorption refrigerator treated with a
//! global master equation.
//!
//! Three resonant qubits (hot, room, cold; `omega_R = omega_H + omega_C`)
//! interact through a three-body exchange term of strength `g`. Each qubit is
//! weakly coupled to its own thermal bath. Because the baths couple to
//! eigenoperators of the *full* interacting Hamiltonian, the dissipators are
//! diagonal in the dressed eigenbasis and the steady state is a classical
//! population vector: the kernel of an 8x8 rate matrix.
//!
//! The crate builds that rate matrix two independent ways (a literal
//! Kronecker/permutation assembly and one derived from the dissipators),
//! solves for the steady state, and evaluates heat currents, cooling
//! efficiency, virtual temperature, and entropy production. A Runge-Kutta
//! time-evolution oracle cross-validates the linear-algebra route.
//!
//! `no_std` builds are supported with `default-features = false,
//! features = ["libm"]`; everything is stack-allocated (no `alloc`).

#![cfg_attr(not(feature = "std"), no_std)]

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("building without `std` requires the `libm` feature for scalar math");

pub mod bath;
pub mod eigenops;
pub mod error;
pub mod liouvillian;
pub mod model;
pub mod steadystate;
pub mod thermo;

pub use bath::Bath;
pub use eigenops::{build_eigenoperators, verify_commutators, EigenOperator};
pub use error::Error;
pub use liouvillian::{
    mean_occupation, spectral_pair, BathSpectrum, DensityMatrix, Evolution, Generator,
};
pub use model::{build_hamiltonian, eigensystem, validate_params, EigenSystem, ModelParams};
pub use steadystate::{
    build_rate_matrix_derived, build_rate_matrix_literal, solve_steady, steady_state_full,
    PopulationVector, RateKind, RateMatrix, SteadyDiagnostics,
};
pub use thermo::{
    efficiency, entropy_production, heat_current, heat_current_forms, steady_report,
    steady_report_with_matrix, virtual_temperature, HeatCurrents, SteadyReport,
};

/// Hilbert-space dimension of the three-qubit machine.
pub const DIM: usize = 8;

/// Complex scalar used throughout.
pub type C64 = nalgebra::Complex<f64>;
/// Dense complex operator on the three-qubit space.
pub type CMatrix8 = nalgebra::SMatrix<C64, 8, 8>;
/// Dense real operator (Hamiltonian, rate matrices).
pub type RMatrix8 = nalgebra::SMatrix<f64, 8, 8>;
/// Real 8-vector (spectra, populations).
pub type RVector8 = nalgebra::SVector<f64, 8>;

/// Scalar math shim: inherent `f64` methods on std, `libm` otherwise.
pub(crate) mod fmath {
    #[cfg(feature = "std")]
    #[inline]
    pub fn exp(x: f64) -> f64 {
        x.exp()
    }
    #[cfg(feature = "std")]
    #[inline]
    pub fn exp_m1(x: f64) -> f64 {
        x.exp_m1()
    }
    #[cfg(feature = "std")]
    #[inline]
    pub fn sqrt(x: f64) -> f64 {
        x.sqrt()
    }

    #[cfg(not(feature = "std"))]
    #[inline]
    pub fn exp(x: f64) -> f64 {
        libm::exp(x)
    }
    #[cfg(not(feature = "std"))]
    #[inline]
    pub fn exp_m1(x: f64) -> f64 {
        libm::expm1(x)
    }
    #[cfg(not(feature = "std"))]
    #[inline]
    pub fn sqrt(x: f64) -> f64 {
        libm::sqrt(x)
    }
}
