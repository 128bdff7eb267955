//! Bath spectral functions, dissipators, the full generator, and a
//! Runge-Kutta time-evolution oracle.
//!
//! Spectral convention: for a canonical (positive) Bohr frequency w,
//! `J(w) = gamma * n_bar(w)` drives upward transitions (absorption) and
//! `J(-w) = gamma * (n_bar(w) + 1)` downward ones (emission); their ratio is
//! the KMS factor exp(w/T) and their difference is exactly gamma.

use crate::bath::Bath;
use crate::eigenops::{build_eigenoperators, EigenOperator};
use crate::error::Error;
use crate::fmath;
use crate::model::{eigensystem, EigenSystem, ModelParams};
use crate::{CMatrix8, RVector8, C64, DIM};

/// Bose-Einstein occupation `1/(exp(w/T) - 1)`, evaluated via `exp_m1` so the
/// small-argument regime (w much less than T) keeps full precision.
pub fn mean_occupation(w: f64, t: f64) -> Result<f64, Error> {
    if !(w > 0.0) {
        return Err(Error::Domain {
            op: "mean_occupation",
            name: "w",
            value: w,
        });
    }
    if !(t > 0.0) {
        return Err(Error::Domain {
            op: "mean_occupation",
            name: "T",
            value: t,
        });
    }
    Ok(1.0 / fmath::exp_m1(w / t))
}

/// The absorption/emission spectral pair at a canonical frequency:
/// `(J_plus, J_minus) = (gamma * n_bar, gamma * (n_bar + 1))`.
///
/// `J_minus` is computed as `J_plus + gamma` so the pair stays consistent
/// to the last bit rather than drifting through two separate expansions.
pub fn spectral_pair(w: f64, t: f64, gamma: f64) -> Result<(f64, f64), Error> {
    if !(gamma > 0.0) {
        return Err(Error::Domain {
            op: "spectral_pair",
            name: "gamma",
            value: gamma,
        });
    }
    let n = mean_occupation(w, t)?;
    let j_plus = gamma * n;
    Ok((j_plus, j_plus + gamma))
}

/// Spectral data for one Bohr line of one bath.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineSpectrum {
    /// Canonical (positive) Bohr frequency.
    pub frequency: f64,
    /// Mean thermal occupation at that frequency.
    pub occupation: f64,
    /// Absorption rate density `gamma * n_bar`.
    pub j_plus: f64,
    /// Emission rate density `gamma * (n_bar + 1)`.
    pub j_minus: f64,
}

/// The three spectral lines a bath couples to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathSpectrum {
    pub bath: Bath,
    /// Indexed by line number j - 1.
    pub lines: [LineSpectrum; 3],
}

impl BathSpectrum {
    /// Spectral data for line `j` (1..=3).
    #[inline]
    pub fn line(&self, j: u8) -> &LineSpectrum {
        &self.lines[(j - 1) as usize]
    }
}

/// Evaluates all nine spectral pairs for the given canonical eigenoperators.
pub fn build_spectra(
    ops: &[EigenOperator; 9],
    p: &ModelParams,
) -> Result<[BathSpectrum; 3], Error> {
    let empty = LineSpectrum {
        frequency: 0.0,
        occupation: 0.0,
        j_plus: 0.0,
        j_minus: 0.0,
    };
    let mut spectra = [
        BathSpectrum { bath: Bath::Hot, lines: [empty; 3] },
        BathSpectrum { bath: Bath::Room, lines: [empty; 3] },
        BathSpectrum { bath: Bath::Cold, lines: [empty; 3] },
    ];
    for op in ops {
        let t = p.temperature(op.bath);
        let gamma = p.gamma(op.bath);
        let n = mean_occupation(op.frequency, t)?;
        let j_plus = gamma * n;
        spectra[op.bath.index()].lines[(op.j - 1) as usize] = LineSpectrum {
            frequency: op.frequency,
            occupation: n,
            j_plus,
            j_minus: j_plus + gamma,
        };
    }
    Ok(spectra)
}

/// A density matrix in the eigenbasis of the interacting Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    m: CMatrix8,
}

impl DensityMatrix {
    /// Validates hermiticity, unit trace, and positivity (eigenvalues above
    /// -1e-10) before wrapping.
    pub fn new(m: CMatrix8) -> Result<Self, Error> {
        let herm = (m - m.adjoint()).norm();
        if herm > 1e-12 {
            return Err(Error::InvalidState {
                reason: "not Hermitian",
                measure: herm,
            });
        }
        let tr = m.trace();
        let tr_err = fmath::sqrt((tr.re - 1.0) * (tr.re - 1.0) + tr.im * tr.im);
        if tr_err > 1e-12 {
            return Err(Error::InvalidState {
                reason: "trace differs from 1",
                measure: tr_err,
            });
        }
        let min_eig = m
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .fold(f64::INFINITY, |a, &b| a.min(b));
        if min_eig < -1e-10 {
            return Err(Error::InvalidState {
                reason: "negative eigenvalue",
                measure: min_eig,
            });
        }
        Ok(Self { m })
    }

    /// Diagonal state from eigenbasis populations (assumed normalized).
    pub fn from_populations(pops: &RVector8) -> Self {
        let mut m = CMatrix8::zeros();
        for i in 0..DIM {
            m[(i, i)] = C64::new(pops[i], 0.0);
        }
        Self { m }
    }

    /// The pure eigenstate `|i><i|`.
    pub fn pure_state(i: usize) -> Self {
        let mut m = CMatrix8::zeros();
        m[(i, i)] = C64::new(1.0, 0.0);
        Self { m }
    }

    /// The maximally mixed state.
    pub fn maximally_mixed() -> Self {
        Self {
            m: CMatrix8::identity() * C64::new(1.0 / DIM as f64, 0.0),
        }
    }

    /// Thermal state of the machine Hamiltonian at temperature `t`.
    pub fn gibbs(es: &EigenSystem, t: f64) -> Result<Self, Error> {
        if !(t > 0.0) {
            return Err(Error::Domain {
                op: "gibbs",
                name: "T",
                value: t,
            });
        }
        let e_min = es.eigenvalues.min();
        let mut pops = RVector8::zeros();
        for i in 0..DIM {
            pops[i] = fmath::exp(-(es.energy(i) - e_min) / t);
        }
        pops /= pops.sum();
        Ok(Self::from_populations(&pops))
    }

    /// Raw matrix access.
    #[inline]
    pub fn matrix(&self) -> &CMatrix8 {
        &self.m
    }

    /// Real parts of the diagonal.
    pub fn populations(&self) -> RVector8 {
        let mut v = RVector8::zeros();
        for i in 0..DIM {
            v[i] = self.m[(i, i)].re;
        }
        v
    }

    /// Largest off-diagonal magnitude (coherence in the eigenbasis).
    pub fn max_coherence(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..DIM {
            for j in 0..DIM {
                if i != j {
                    // norm_sqr + explicit sqrt keeps this no_std-friendly.
                    worst = worst.max(fmath::sqrt(self.m[(i, j)].norm_sqr()));
                }
            }
        }
        worst
    }

    /// Trace distance `0.5 * sum |eigenvalues(self - other)|`.
    pub fn trace_distance(&self, other: &Self) -> f64 {
        let diff = self.m - other.m;
        let eig = diff.symmetric_eigen().eigenvalues;
        0.5 * eig.iter().map(|x| x.abs()).sum::<f64>()
    }
}

/// Result of a time evolution run.
#[derive(Debug, Clone, Copy)]
pub struct Evolution {
    /// Final state, trace renormalized.
    pub state: DensityMatrix,
    /// |trace - 1| accumulated before renormalization.
    pub trace_drift: f64,
    /// Norm of the generator applied to the final state (zero at stationarity).
    pub residual_norm: f64,
}

/// Precomputed immutable context: eigensystem, canonical eigenoperators, and
/// spectral pairs. Shareable across threads; all methods are pure.
#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    params: ModelParams,
    eigensystem: EigenSystem,
    ops: [EigenOperator; 9],
    spectra: [BathSpectrum; 3],
}

impl Generator {
    /// Validates parameters and builds the full context.
    pub fn new(params: ModelParams) -> Result<Self, Error> {
        params.validate()?;
        let es = eigensystem(&params)?;
        let ops = build_eigenoperators(&es, &params)?;
        let spectra = build_spectra(&ops, &params)?;
        Ok(Self {
            params,
            eigensystem: es,
            ops,
            spectra,
        })
    }

    #[inline]
    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    #[inline]
    pub fn eigensystem(&self) -> &EigenSystem {
        &self.eigensystem
    }

    #[inline]
    pub fn operators(&self) -> &[EigenOperator; 9] {
        &self.ops
    }

    #[inline]
    pub fn spectra(&self) -> &[BathSpectrum; 3] {
        &self.spectra
    }

    /// Applies the dissipator of one bath to an arbitrary (Hermitian) matrix.
    ///
    /// Uses the two-entry sparsity of each eigenoperator: for
    /// V = sum_s c_s |a_s><b_s| with disjoint index pairs, V rho V^dag has the
    /// four entries (a_s, a_t) and V^dag V, V V^dag are diagonal, so each line
    /// costs O(DIM) instead of a chain of dense products. The dense-product
    /// route is kept in tests as an independent check.
    pub fn dissipator(&self, bath: Bath, rho: &CMatrix8) -> CMatrix8 {
        let mut out = CMatrix8::zeros();
        self.accumulate_dissipator(bath, rho, &mut out);
        out
    }

    fn accumulate_dissipator(&self, bath: Bath, rho: &CMatrix8, out: &mut CMatrix8) {
        for op in self.ops.iter().filter(|o| o.bath == bath) {
            let line = self.spectra[bath.index()].line(op.j);
            let (jp, jm) = (line.j_plus, line.j_minus);
            let t = &op.terms;
            // Sandwich terms 2 J(-w) V rho V^dag and 2 J(w) V^dag rho V.
            for s in 0..2 {
                for u in 0..2 {
                    let cc = t[s].amp * t[u].amp;
                    out[(t[s].row, t[u].row)] += rho[(t[s].col, t[u].col)] * (2.0 * jm * cc);
                    out[(t[s].col, t[u].col)] += rho[(t[s].row, t[u].row)] * (2.0 * jp * cc);
                }
            }
            // Anticommutator halves: V^dag V = sum c^2 |b><b| (upper states),
            // V V^dag = sum c^2 |a><a| (lower states); each scales a row and a
            // column of rho.
            for s in 0..2 {
                let c2 = t[s].amp * t[s].amp;
                let (up, lo) = (t[s].col, t[s].row);
                let du = jm * c2;
                let dl = jp * c2;
                for k in 0..DIM {
                    out[(up, k)] -= rho[(up, k)] * du;
                    out[(k, up)] -= rho[(k, up)] * du;
                    out[(lo, k)] -= rho[(lo, k)] * dl;
                    out[(k, lo)] -= rho[(k, lo)] * dl;
                }
            }
        }
    }

    /// Full master-equation right-hand side: the three dissipators plus the
    /// Hamiltonian commutator -i[H, rho]. In the eigenbasis the commutator
    /// only rotates coherences; populations never feel it.
    pub fn apply(&self, rho: &CMatrix8) -> CMatrix8 {
        let mut out = CMatrix8::zeros();
        for bath in Bath::ALL {
            self.accumulate_dissipator(bath, rho, &mut out);
        }
        let e = &self.eigensystem.eigenvalues;
        for i in 0..DIM {
            for j in 0..DIM {
                if i != j {
                    // -i (e_i - e_j) rho_ij
                    let w = e[i] - e[j];
                    let r = rho[(i, j)];
                    out[(i, j)] += C64::new(w * r.im, -w * r.re);
                }
            }
        }
        out
    }

    /// Step size heuristic: well inside both the fastest dissipative rate and
    /// the fastest coherent rotation.
    pub fn default_dt(&self) -> f64 {
        let mut max_rate = self.params.omega_r();
        for s in &self.spectra {
            for l in &s.lines {
                max_rate = max_rate.max(l.j_minus);
            }
        }
        0.01 / max_rate
    }

    /// Classic fixed-step fourth-order Runge-Kutta integration of the master
    /// equation.
    ///
    /// The discrete one-step map shares the exact fixed-point set of the
    /// generator (for stable step sizes), so long runs converge to the true
    /// steady state regardless of per-step accuracy. Trace drift is tracked
    /// and the final state renormalized; drift beyond 1e-6 aborts.
    pub fn evolve(&self, rho0: &DensityMatrix, dt: f64, steps: usize) -> Result<Evolution, Error> {
        let mut rho = *rho0.matrix();
        for _ in 0..steps {
            let k1 = self.apply(&rho);
            let k2 = self.apply(&(rho + k1 * C64::new(0.5 * dt, 0.0)));
            let k3 = self.apply(&(rho + k2 * C64::new(0.5 * dt, 0.0)));
            let k4 = self.apply(&(rho + k3 * C64::new(dt, 0.0)));
            rho += (k1 + (k2 + k3) * C64::new(2.0, 0.0) + k4) * C64::new(dt / 6.0, 0.0);
        }
        // Populations and coherences evolve independently here, so a
        // coherence blow-up never shows in the trace; screen for non-finite
        // entries first.
        if rho.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::StepSizeUnstable {
                trace_drift: f64::INFINITY,
            });
        }
        let tr = rho.trace();
        let trace_drift =
            fmath::sqrt((tr.re - 1.0) * (tr.re - 1.0) + tr.im * tr.im);
        // Negated comparison so an overflow to NaN also lands here.
        if !(trace_drift <= 1e-6) {
            return Err(Error::StepSizeUnstable { trace_drift });
        }
        rho /= tr;
        let residual_norm = self.apply(&rho).norm();
        Ok(Evolution {
            state: DensityMatrix { m: rho },
            trace_drift,
            residual_norm,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ModelParams;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fig_generator(g: f64, t_hot: f64) -> Generator {
        Generator::new(ModelParams::uniform_gamma(
            3.0, 1.0, g, t_hot, 21.0, 18.0, 0.003,
        ))
        .unwrap()
    }

    fn random_hermitian_state(rng: &mut ChaCha8Rng) -> DensityMatrix {
        let a = CMatrix8::from_fn(|_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let m = a * a.adjoint();
        let tr = m.trace();
        DensityMatrix::new(m / tr).unwrap()
    }

    #[test]
    fn occupation_matches_closed_forms() {
        // exp(ln 2) - 1 = 1 exactly.
        let t = 7.3;
        assert_relative_eq!(
            mean_occupation(t * core::f64::consts::LN_2, t).unwrap(),
            1.0,
            epsilon = 1e-14
        );
        // Frozen scalar value for the reference point w=3, T=30.
        assert_relative_eq!(
            mean_occupation(3.0, 30.0).unwrap(),
            9.50833194477505,
            max_relative = 1e-13
        );
        // Frozen bath freeze-out: occupation underflows to zero.
        assert_eq!(mean_occupation(3.0, 1e-3).unwrap(), 0.0);
        assert!(mean_occupation(-1.0, 10.0).is_err());
        assert!(mean_occupation(1.0, 0.0).is_err());
    }

    #[test]
    fn spectral_pair_satisfies_detailed_balance() {
        let (jp, jm) = spectral_pair(3.0, 30.0, 0.003).unwrap();
        assert_relative_eq!(jp, 0.028524995834325148, max_relative = 1e-13);
        assert_relative_eq!(jm, 0.03152499583432515, max_relative = 1e-13);
        // J_minus is stored as J_plus + gamma; the stored sum is bitwise
        // reproducible even though re-subtracting rounds.
        assert_eq!(jm, jp + 0.003);
        assert_relative_eq!(jm - jp, 0.003, max_relative = 1e-12);
        // KMS ratio.
        assert_relative_eq!(jm / jp, (3.0_f64 / 30.0).exp(), max_relative = 1e-12);
        // Frozen bath: (0, gamma).
        let (jp0, jm0) = spectral_pair(3.0, 1e-4, 0.003).unwrap();
        assert_eq!((jp0, jm0), (0.0, 0.003));
    }

    #[test]
    fn spectra_cover_all_nine_lines() {
        let gen = fig_generator(0.003, 30.0);
        for s in gen.spectra() {
            for l in &s.lines {
                assert!(l.frequency > 0.0);
                assert!(l.occupation > 0.0);
                assert_relative_eq!(
                    l.j_minus / l.j_plus,
                    (l.frequency / gen.params().temperature(s.bath)).exp(),
                    max_relative = 1e-12
                );
            }
        }
    }

    #[test]
    fn dissipators_are_traceless_and_hermiticity_preserving() {
        let gen = fig_generator(0.9, 30.0);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let rho = random_hermitian_state(&mut rng);
            for bath in Bath::ALL {
                let l = gen.dissipator(bath, rho.matrix());
                assert!(l.trace().norm() <= 1e-14);
                assert!((l - l.adjoint()).norm() <= 1e-12);
            }
            let full = gen.apply(rho.matrix());
            assert!(full.trace().norm() <= 1e-14);
            assert!((full - full.adjoint()).norm() <= 1e-12);
        }
    }

    #[test]
    fn each_bath_is_in_detailed_balance_with_its_own_gibbs_state() {
        let gen = fig_generator(0.9, 30.0);
        for bath in Bath::ALL {
            let gibbs =
                DensityMatrix::gibbs(gen.eigensystem(), gen.params().temperature(bath)).unwrap();
            let l = gen.dissipator(bath, gibbs.matrix());
            for i in 0..DIM {
                assert!(
                    l[(i, i)].norm() <= 1e-14,
                    "bath {bath} diag {i}: {}",
                    l[(i, i)]
                );
            }
        }
    }

    #[test]
    fn single_jump_rate_from_the_top_state() {
        // From |top><top|, the hot-bath dissipator feeds the state reached by
        // its first eigenoperator at twice the emission density.
        let gen = fig_generator(0.003, 30.0);
        let rho = DensityMatrix::pure_state(0);
        let l = gen.dissipator(Bath::Hot, rho.matrix());
        let expect = 2.0 * gen.spectra()[0].line(1).j_minus;
        assert_relative_eq!(l[(4, 4)].re, expect, max_relative = 1e-13);
        assert_relative_eq!(l[(4, 4)].re, 0.0630499916686503, max_relative = 1e-12);
    }

    #[test]
    fn dense_product_route_agrees_with_sparse_accumulation() {
        let gen = fig_generator(1.5, 33.0);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let rho = random_hermitian_state(&mut rng);
            for bath in Bath::ALL {
                let sparse = gen.dissipator(bath, rho.matrix());
                let mut dense = CMatrix8::zeros();
                for op in gen.operators().iter().filter(|o| o.bath == bath) {
                    let line = gen.spectra()[bath.index()].line(op.j);
                    let v = op.matrix();
                    let vd = v.adjoint();
                    let r = rho.matrix();
                    let two = C64::new(2.0, 0.0);
                    dense += (v * r * vd * two - vd * v * r - r * vd * v)
                        * C64::new(line.j_minus, 0.0);
                    dense += (vd * r * v * two - v * vd * r - r * v * vd)
                        * C64::new(line.j_plus, 0.0);
                }
                assert!((sparse - dense).norm() <= 1e-14);
            }
        }
    }

    #[test]
    fn generator_keeps_diagonal_states_diagonal() {
        let gen = fig_generator(0.9, 30.0);
        let rho = DensityMatrix::gibbs(gen.eigensystem(), 25.0).unwrap();
        let out = gen.apply(rho.matrix());
        for i in 0..DIM {
            for j in 0..DIM {
                if i != j {
                    assert!(out[(i, j)].norm() <= 1e-16);
                }
            }
        }
    }

    #[test]
    fn equal_temperatures_fix_the_gibbs_state() {
        let p = ModelParams::uniform_gamma(3.0, 1.0, 0.3, 25.0, 25.0, 25.0, 0.003);
        let gen = Generator::new(p).unwrap();
        let gibbs = DensityMatrix::gibbs(gen.eigensystem(), 25.0).unwrap();
        assert!(gen.apply(gibbs.matrix()).norm() <= 1e-15);
    }

    #[test]
    fn zero_steps_is_the_identity() {
        let gen = fig_generator(0.003, 30.0);
        let rho = DensityMatrix::maximally_mixed();
        let out = gen.evolve(&rho, 0.01, 0).unwrap();
        assert_eq!(out.state.matrix(), rho.matrix());
        assert_eq!(out.trace_drift, 0.0);
    }

    #[test]
    fn relaxation_reaches_gibbs_at_equal_temperatures() {
        let p = ModelParams::uniform_gamma(3.0, 1.0, 0.3, 25.0, 25.0, 25.0, 0.003);
        let gen = Generator::new(p).unwrap();
        let gibbs = DensityMatrix::gibbs(gen.eigensystem(), 25.0).unwrap();
        let out = gen
            .evolve(&DensityMatrix::maximally_mixed(), 0.025, 12_000)
            .unwrap();
        assert!(out.state.trace_distance(&gibbs) <= 1e-8);
        assert!(out.trace_drift <= 1e-9);
    }

    #[test]
    fn coherences_decay_along_evolution() {
        let gen = fig_generator(0.9, 30.0);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rho0 = random_hermitian_state(&mut rng);
        let out = gen.evolve(&rho0, 0.025, 12_000).unwrap();
        assert!(out.state.max_coherence() <= 1e-10);
        // Positivity is preserved to numerical slack along the way.
        let min_eig = out
            .state
            .matrix()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .fold(f64::INFINITY, |a, &b| a.min(b));
        assert!(min_eig >= -1e-8);
    }

    #[test]
    fn oversized_steps_are_reported_not_returned() {
        let gen = fig_generator(0.003, 30.0);
        // A state with coherences feels the fastest rotation (2*omega_R);
        // dt = 5 puts it far outside the stability region.
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let rho = random_hermitian_state(&mut rng);
        let result = gen.evolve(&rho, 5.0, 400);
        assert!(matches!(result, Err(Error::StepSizeUnstable { .. })));
    }

    #[test]
    fn density_matrix_validation_rejects_bad_inputs() {
        let mut m = CMatrix8::zeros();
        m[(0, 0)] = C64::new(1.0, 0.0);
        m[(0, 1)] = C64::new(0.5, 0.0); // not Hermitian
        assert!(matches!(
            DensityMatrix::new(m),
            Err(Error::InvalidState { reason: "not Hermitian", .. })
        ));

        let m = CMatrix8::identity() * C64::new(0.25, 0.0); // trace 2
        assert!(matches!(
            DensityMatrix::new(m),
            Err(Error::InvalidState { reason: "trace differs from 1", .. })
        ));

        let mut m = CMatrix8::zeros();
        m[(0, 0)] = C64::new(1.5, 0.0);
        m[(1, 1)] = C64::new(-0.5, 0.0); // negative eigenvalue
        assert!(matches!(
            DensityMatrix::new(m),
            Err(Error::InvalidState { reason: "negative eigenvalue", .. })
        ));
    }

    #[test]
    fn default_dt_tracks_the_fastest_scale() {
        let gen = fig_generator(0.003, 30.0);
        // At these parameters the coherent scale omega_R = 4 dominates every
        // dissipative rate gamma*(n_bar+1) ~ 0.03.
        assert_relative_eq!(gen.default_dt(), 0.01 / 4.0, max_relative = 1e-12);
    }
}
