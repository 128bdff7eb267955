//! Model parameters, the three-qubit Hamiltonian, and its analytic eigensystem.
//!
//! Basis convention used everywhere: tensor slots are (hot, room, cold); each
//! qubit's first basis state is its excited state |e> (bit 0) and the second
//! its ground state |g> (bit 1); product index = 4*b1 + 2*b2 + b3 (zero-based).
//! Under this convention six eigenvectors of the interacting Hamiltonian are
//! plain product states and the remaining two are the dressed pair mixing
//! |e_H g_R e_C> (index 2) with |g_H e_R g_C> (index 5).

use crate::bath::Bath;
use crate::error::Error;
use crate::fmath;
use crate::{CMatrix8, RMatrix8, RVector8, C64, DIM};

/// Relative tolerance at which `g` is considered degenerate with a qubit
/// frequency (the affected Bohr frequency vanishes and bath occupations
/// diverge).
const DEGENERACY_REL_TOL: f64 = 1e-12;

/// Relative tolerance for the internal analytic-vs-numeric spectrum check.
const SPECTRUM_REL_TOL: f64 = 1e-10;

/// Physical parameters of the machine: qubit frequencies, internal coupling,
/// bath temperatures, and bath coupling strengths.
///
/// The room qubit is always resonant, `omega_r = omega_h + omega_c`; it is a
/// derived quantity, never stored. Natural units with hbar = k_B = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Frequency of the qubit attached to the hot bath.
    pub omega_h: f64,
    /// Frequency of the qubit attached to the cold bath.
    pub omega_c: f64,
    /// Three-body internal coupling strength.
    pub g: f64,
    /// Hot bath temperature.
    pub t_hot: f64,
    /// Room bath temperature.
    pub t_room: f64,
    /// Cold bath temperature.
    pub t_cold: f64,
    /// Bath coupling rate for the hot bath (flat in frequency).
    pub gamma_h: f64,
    /// Bath coupling rate for the room bath.
    pub gamma_r: f64,
    /// Bath coupling rate for the cold bath.
    pub gamma_c: f64,
}

/// Soft-constraint findings from validation; never fatal.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Warnings {
    /// The usual operating regime has T_hot > T_room > T_cold; other
    /// orderings are legitimate (they just do not refrigerate).
    pub temperature_ordering: bool,
}

impl ModelParams {
    /// Convenience constructor with a single bath coupling for all three baths.
    pub fn uniform_gamma(
        omega_h: f64,
        omega_c: f64,
        g: f64,
        t_hot: f64,
        t_room: f64,
        t_cold: f64,
        gamma: f64,
    ) -> Self {
        Self {
            omega_h,
            omega_c,
            g,
            t_hot,
            t_room,
            t_cold,
            gamma_h: gamma,
            gamma_r: gamma,
            gamma_c: gamma,
        }
    }

    /// Frequency of the room qubit, fixed by the resonance condition.
    #[inline]
    pub fn omega_r(&self) -> f64 {
        self.omega_h + self.omega_c
    }

    /// Qubit frequency coupled to the given bath.
    #[inline]
    pub fn omega(&self, bath: Bath) -> f64 {
        match bath {
            Bath::Hot => self.omega_h,
            Bath::Room => self.omega_r(),
            Bath::Cold => self.omega_c,
        }
    }

    /// Temperature of the given bath.
    #[inline]
    pub fn temperature(&self, bath: Bath) -> f64 {
        match bath {
            Bath::Hot => self.t_hot,
            Bath::Room => self.t_room,
            Bath::Cold => self.t_cold,
        }
    }

    /// Coupling rate of the given bath.
    #[inline]
    pub fn gamma(&self, bath: Bath) -> f64 {
        match bath {
            Bath::Hot => self.gamma_h,
            Bath::Room => self.gamma_r,
            Bath::Cold => self.gamma_c,
        }
    }

    /// Shorthand for `validate_params(self)`.
    pub fn validate(&self) -> Result<Warnings, Error> {
        validate_params(self)
    }
}

/// Checks hard invariants (positivity, non-degenerate Bohr frequencies) and
/// reports soft ones as [`Warnings`].
pub fn validate_params(p: &ModelParams) -> Result<Warnings, Error> {
    let positives = [
        ("omega_H", p.omega_h),
        ("omega_C", p.omega_c),
        ("g", p.g),
        ("T_H", p.t_hot),
        ("T_R", p.t_room),
        ("T_C", p.t_cold),
        ("gamma_H", p.gamma_h),
        ("gamma_R", p.gamma_r),
        ("gamma_C", p.gamma_c),
    ];
    for (name, value) in positives {
        if !(value > 0.0) || !value.is_finite() {
            return Err(Error::NonPositiveParameter { name, value });
        }
    }
    // g equal to any qubit frequency collapses one Bohr frequency to zero.
    let collisions = [
        ("omega_C", p.omega_c),
        ("omega_H", p.omega_h),
        ("omega_R", p.omega_r()),
    ];
    for (name, omega) in collisions {
        if (p.g - omega).abs() <= DEGENERACY_REL_TOL * omega {
            return Err(Error::DegenerateBohrFrequency {
                g: p.g,
                collides_with: name,
            });
        }
    }
    Ok(Warnings {
        temperature_ordering: !(p.t_hot > p.t_room && p.t_room > p.t_cold),
    })
}

/// Free Hamiltonian plus the three-body exchange coupling, in the product
/// basis, as a real symmetric matrix.
///
/// Diagonal: sum of (omega/2) * sigma_z per qubit with sigma_z = +1 on the
/// excited state. Off-diagonal: the exchange term couples |e_H g_R e_C|
/// (index 2) and |g_H e_R g_C> (index 5) with amplitude g.
pub fn build_hamiltonian_real(p: &ModelParams) -> RMatrix8 {
    let omegas = [p.omega_h, p.omega_r(), p.omega_c];
    let mut h = RMatrix8::zeros();
    for idx in 0..DIM {
        let bits = [(idx >> 2) & 1, (idx >> 1) & 1, idx & 1];
        let mut e = 0.0;
        for (slot, &b) in bits.iter().enumerate() {
            // bit 0 = excited (+omega/2), bit 1 = ground (-omega/2)
            e += 0.5 * omegas[slot] * (1.0 - 2.0 * b as f64);
        }
        h[(idx, idx)] = e;
    }
    h[(2, 5)] = p.g;
    h[(5, 2)] = p.g;
    h
}

/// [`build_hamiltonian_real`] promoted to a complex matrix, for use alongside
/// density matrices.
pub fn build_hamiltonian(p: &ModelParams) -> CMatrix8 {
    build_hamiltonian_real(p).map(|x| C64::new(x, 0.0))
}

/// Spectrum and eigenvectors of the interacting Hamiltonian in closed form.
///
/// Eigenvalues follow a fixed ordering:
/// `[omega_R, omega_H, g, -omega_C, omega_C, -g, -omega_H, -omega_R]`.
/// The `basis` matrix U holds the eigenvectors as columns (product-basis
/// components, all real); it is orthogonal, so U^T rotates product-basis
/// operators into the eigenbasis.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    /// Eigenvalues in the fixed ordering above.
    pub eigenvalues: RVector8,
    /// Columns are the eigenvectors in the product basis.
    pub basis: RMatrix8,
}

impl EigenSystem {
    /// Energy of eigenstate `i` (zero-based).
    #[inline]
    pub fn energy(&self, i: usize) -> f64 {
        self.eigenvalues[i]
    }

    /// Rotates an operator given in the eigenbasis into the product basis
    /// (conjugation by U).
    pub fn to_product_basis(&self, op: &CMatrix8) -> CMatrix8 {
        let u = self.basis.map(|x| C64::new(x, 0.0));
        u * op * u.transpose()
    }
}

/// Builds the analytic eigensystem and cross-checks its spectrum against a
/// general-purpose numerical diagonalization of the same matrix.
///
/// Six eigenvectors are product states; the dressed pair is
/// `(|g_H e_R g_C> + |e_H g_R e_C>)/sqrt(2)` at energy +g (index 2) and
/// `(|e_H g_R e_C> - |g_H e_R g_C>)/sqrt(2)` at energy -g (index 5). This
/// sign/index assignment is the one under which all nine bath eigenoperators
/// take their standard closed forms; changing it breaks the literal-vs-derived
/// rate-matrix equality tested in `steadystate`.
pub fn eigensystem(p: &ModelParams) -> Result<EigenSystem, Error> {
    let (wh, wc, wr, g) = (p.omega_h, p.omega_c, p.omega_r(), p.g);
    let eigenvalues = RVector8::from_column_slice(&[wr, wh, g, -wc, wc, -g, -wh, -wr]);

    let mut basis = RMatrix8::zeros();
    // Product eigenvectors: |eee>, |eeg>, |egg>, |gee>, |gge>, |ggg>.
    for idx in [0usize, 1, 3, 4, 6, 7] {
        basis[(idx, idx)] = 1.0;
    }
    let s = 1.0 / fmath::sqrt(2.0);
    basis[(5, 2)] = s; // +g state: (|geg> + |ege>)/sqrt2
    basis[(2, 2)] = s;
    basis[(2, 5)] = s; // -g state: (|ege> - |geg>)/sqrt2
    basis[(5, 5)] = -s;

    // Internal consistency check: the closed-form spectrum must match a
    // numerical diagonalization of the same real symmetric matrix.
    let numeric = build_hamiltonian_real(p).symmetric_eigen().eigenvalues;
    let mut analytic_sorted: [f64; DIM] = eigenvalues.into();
    let mut numeric_sorted: [f64; DIM] = numeric.into();
    analytic_sorted.sort_unstable_by(f64::total_cmp);
    numeric_sorted.sort_unstable_by(f64::total_cmp);
    let scale = wr.max(g);
    for i in 0..DIM {
        if (analytic_sorted[i] - numeric_sorted[i]).abs() > SPECTRUM_REL_TOL * scale {
            return Err(Error::EigenvalueMismatch {
                index: i,
                analytic: analytic_sorted[i],
                numeric: numeric_sorted[i],
            });
        }
    }

    Ok(EigenSystem { eigenvalues, basis })
}
