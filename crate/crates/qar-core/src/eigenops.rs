//! The nine bath eigenoperators of the interacting Hamiltonian.
//!
//! Each bath couples to its qubit through sigma_x, which decomposes in the
//! dressed eigenbasis into three lowering operators per bath, one per Bohr
//! frequency: bath H at {omega_H, omega_H - g, omega_H + g}, bath R at
//! {omega_R - g, omega_R, omega_R + g}, bath C at {omega_C - g, omega_C + g,
//! omega_C}. Every operator has exactly two nonzero entries of magnitude
//! 1 or 1/sqrt(2) connecting eigenstate pairs, and satisfies
//! [H, V] = -w V with w > 0 after canonicalization.

use crate::bath::Bath;
use crate::error::Error;
use crate::fmath;
use crate::model::{EigenSystem, ModelParams};
use crate::{CMatrix8, C64, DIM};

/// One `|row><col|` component of an eigenoperator (eigenbasis indices,
/// zero-based, real amplitude).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub row: usize,
    pub col: usize,
    pub amp: f64,
}

/// A single bath eigenoperator: lowers the system energy by `frequency`.
///
/// Stored sparsely as its two nonzero eigenbasis entries; `matrix()` expands
/// to a dense operator when needed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenOperator {
    /// Which bath this operator couples to.
    pub bath: Bath,
    /// Line index within the bath, 1..=3.
    pub j: u8,
    /// Bohr frequency; positive by construction.
    pub frequency: f64,
    /// The two `|row><col|` components.
    pub terms: [Term; 2],
}

impl EigenOperator {
    /// Dense eigenbasis representation.
    pub fn matrix(&self) -> CMatrix8 {
        let mut m = CMatrix8::zeros();
        for t in self.terms {
            m[(t.row, t.col)] += C64::new(t.amp, 0.0);
        }
        m
    }

    /// Dense representation rotated into the product basis.
    pub fn in_product_basis(&self, es: &EigenSystem) -> CMatrix8 {
        es.to_product_basis(&self.matrix())
    }
}

/// Builds the nine eigenoperators in their closed forms and canonicalizes any
/// negative-frequency entry (possible only for the cold bath's
/// `omega_C - g` line once g exceeds omega_C) by taking the adjoint and
/// flipping the frequency sign.
pub fn build_eigenoperators(
    es: &EigenSystem,
    p: &ModelParams,
) -> Result<[EigenOperator; 9], Error> {
    let _ = es; // operators are defined directly in the eigenbasis
    let (wh, wc, wr, g) = (p.omega_h, p.omega_c, p.omega_r(), p.g);
    let s = 1.0 / fmath::sqrt(2.0);

    // (bath, j, signed frequency, two |row><col| terms), eigenbasis indices
    // zero-based. Signs of the 1/sqrt2 amplitudes follow from the dressed-pair
    // phase convention fixed in `model::eigensystem`.
    let raw: [(Bath, u8, f64, [Term; 2]); 9] = [
        (Bath::Hot, 1, wh, [term(4, 0, 1.0), term(7, 3, 1.0)]),
        (Bath::Hot, 2, wh - g, [term(2, 1, s), term(6, 5, s)]),
        (Bath::Hot, 3, wh + g, [term(6, 2, s), term(5, 1, -s)]),
        (Bath::Room, 1, wr - g, [term(2, 0, s), term(7, 5, -s)]),
        (Bath::Room, 2, wr, [term(3, 1, 1.0), term(6, 4, 1.0)]),
        (Bath::Room, 3, wr + g, [term(7, 2, s), term(5, 0, s)]),
        (Bath::Cold, 1, wc - g, [term(2, 4, s), term(3, 5, s)]),
        (Bath::Cold, 2, wc + g, [term(3, 2, s), term(5, 4, -s)]),
        (Bath::Cold, 3, wc, [term(1, 0, 1.0), term(7, 6, 1.0)]),
    ];

    let mut ops = [EigenOperator {
        bath: Bath::Hot,
        j: 0,
        frequency: 0.0,
        terms: [term(0, 0, 0.0); 2],
    }; 9];

    for (i, (bath, j, w, terms)) in raw.into_iter().enumerate() {
        if w.abs() <= 1e-12 * wh {
            return Err(Error::ZeroFrequency {
                bath,
                j,
                frequency: w,
            });
        }
        let op = if w > 0.0 {
            EigenOperator {
                bath,
                j,
                frequency: w,
                terms,
            }
        } else {
            // Adjoint: swap row/col of each term (amplitudes are real).
            EigenOperator {
                bath,
                j,
                frequency: -w,
                terms: terms.map(|t| term(t.col, t.row, t.amp)),
            }
        };
        ops[i] = op;
    }
    Ok(ops)
}

#[inline]
const fn term(row: usize, col: usize, amp: f64) -> Term {
    Term { row, col, amp }
}

/// Verifies [H, V] = -w V for every operator by direct dense matrix
/// arithmetic against the diagonalized Hamiltonian; returns the worst
/// residual norm.
pub fn verify_commutators(ops: &[EigenOperator; 9], es: &EigenSystem) -> Result<f64, Error> {
    let mut h = CMatrix8::zeros();
    for i in 0..DIM {
        h[(i, i)] = C64::new(es.energy(i), 0.0);
    }
    let scale = es.eigenvalues.amax();
    let mut worst = 0.0_f64;
    for op in ops {
        let v = op.matrix();
        let residual = ((h * v - v * h) + v * C64::new(op.frequency, 0.0)).norm();
        if residual > 1e-10 * scale {
            return Err(Error::CommutatorViolation {
                bath: op.bath,
                j: op.j,
                residual,
            });
        }
        worst = worst.max(residual);
    }
    Ok(worst)
}
