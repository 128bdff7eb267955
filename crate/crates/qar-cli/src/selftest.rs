//! Randomized invariant suite over the full supported parameter domain.
//!
//! All draws come from a caller-seeded generator, so a given `(draws, seed)`
//! pair always exercises the same points and the suite is reproducible bit
//! for bit. The distribution keeps temperatures in the refrigerating order
//! and stays 2% of `omega_H` away from the one degenerate coupling
//! (`g = omega_C`); the first-law ratio check additionally skips a 10% band
//! around the virtual temperature, where all currents cross zero together
//! and a ratio to the largest current stops being meaningful.

use qar_core::{
    heat_current_forms, steady_report_with_matrix, steady_state_full, virtual_temperature, Bath,
    CMatrix8, DensityMatrix, Generator, ModelParams, C64,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::CliError;

/// Fixed-step integration used for relaxation cross-checks: the slowest decay
/// mode at the reference points is about 0.08, so t = dt * steps = 300 leaves
/// transients near 1e-11, and |dt * lambda| stays well inside the stability
/// region for the fastest mode (about 8 in magnitude).
pub const RELAX_DT: f64 = 0.025;
pub const RELAX_STEPS: usize = 12_000;
/// Independent random initial states per operating point.
pub const RELAX_SEEDS: u64 = 5;

/// One random machine in the supported domain (hot > room > cold).
pub fn random_params(rng: &mut ChaCha8Rng) -> ModelParams {
    loop {
        let wh: f64 = rng.gen_range(0.5..4.0);
        let wc = rng.gen_range(0.1..0.95) * wh;
        let g = rng.gen_range(1e-3..0.5) * wh;
        let tc = rng.gen_range(2.0..30.0);
        let tr = tc + rng.gen_range(0.5..20.0);
        let th = tr + rng.gen_range(0.5..60.0);
        let gamma = rng.gen_range(1e-4..2e-3) * wh;
        if (g - wc).abs() >= 0.02 * wh {
            return ModelParams::uniform_gamma(wh, wc, g, th, tr, tc, gamma);
        }
    }
}

/// Same machine family with all three baths at one temperature.
pub fn random_equal_temperature_params(rng: &mut ChaCha8Rng) -> ModelParams {
    loop {
        let wh: f64 = rng.gen_range(0.5..4.0);
        let wc = rng.gen_range(0.1..0.95) * wh;
        let g = rng.gen_range(1e-3..0.5) * wh;
        let t = rng.gen_range(2.0..40.0);
        let gamma = rng.gen_range(1e-4..2e-3) * wh;
        if (g - wc).abs() >= 0.02 * wh {
            return ModelParams::uniform_gamma(wh, wc, g, t, t, t, gamma);
        }
    }
}

/// True when the draw sits outside the 10% band around the point where all
/// currents vanish together.
pub fn away_from_crossing(p: &ModelParams) -> bool {
    let tv = virtual_temperature(p);
    !tv.is_finite() || (p.t_hot - tv).abs() >= 0.1 * tv.abs()
}

/// Full-rank random density matrix (normalized Gram matrix of a random
/// complex square root).
pub fn random_density(seed: u64) -> DensityMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = CMatrix8::from_fn(|_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let m = a * a.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(m / C64::new(tr, 0.0)).expect("Gram matrix is a valid state")
}

/// Worst observed values across the whole battery; every field already passed
/// its bound or the run returned an error instead.
#[derive(Debug, Clone, Serialize)]
pub struct SelftestReport {
    pub draws: usize,
    pub seed: u64,
    /// Largest entrywise gap between the two rate-matrix constructions.
    pub max_construction_gap: f64,
    /// Largest relative disagreement between the two heat-current forms.
    pub max_current_form_gap: f64,
    /// Largest |sum of currents| / max |current| outside the crossing band.
    pub max_first_law_ratio: f64,
    /// Draws that entered the first-law ratio check.
    pub first_law_samples: usize,
    /// Smallest entropy production seen (bound: >= -1e-12).
    pub min_entropy_production: f64,
    pub equal_temperature_draws: usize,
    /// Largest trace distance between the steady state and the thermal state
    /// at equal bath temperatures.
    pub max_gibbs_distance: f64,
    pub relaxation_runs: usize,
    /// Largest trace distance between integrated and kernel steady states.
    pub max_relaxation_distance: f64,
    /// Largest coherence magnitude left after relaxation.
    pub max_residual_coherence: f64,
}

/// Runs the battery. Any violated bound aborts with a message naming the
/// draw; success returns the worst observed values.
pub fn run_selftest(draws: usize, seed: u64) -> Result<SelftestReport, CliError> {
    if draws < 100 {
        return Err(CliError::Config(format!(
            "self-test needs at least 100 draws to be meaningful, got {draws}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SelftestReport {
        draws,
        seed,
        max_construction_gap: 0.0,
        max_current_form_gap: 0.0,
        max_first_law_ratio: 0.0,
        first_law_samples: 0,
        min_entropy_production: f64::INFINITY,
        equal_temperature_draws: draws / 5,
        max_gibbs_distance: 0.0,
        relaxation_runs: 0,
        max_relaxation_distance: 0.0,
        max_residual_coherence: 0.0,
    };

    for k in 0..draws {
        let p = random_params(&mut rng);
        let fail = |what: String| CliError::Selftest(format!("draw {k}: {what} ({p:?})"));
        let gen = Generator::new(p).map_err(|e| fail(e.to_string()))?;
        let (r, matrix) =
            steady_report_with_matrix(&gen).map_err(|e| fail(e.to_string()))?;

        let gap = r.diagnostics.construction_gap;
        if gap > 1e-12 {
            return Err(fail(format!("rate-matrix constructions differ by {gap:e}")));
        }
        report.max_construction_gap = report.max_construction_gap.max(gap);

        let state = DensityMatrix::from_populations(r.populations.as_vector());
        for bath in Bath::ALL {
            let (tf, vf, gross) = heat_current_forms(&gen, bath, &state, matrix.part(bath))
                .map_err(|e| fail(e.to_string()))?;
            // A single current can cross zero on its own; the relative gap is
            // meaningless there, and the forms check above already bounded
            // the difference at the gross-flow scale.
            if tf.abs() <= 1e-12 * gross && vf.abs() <= 1e-12 * gross {
                continue;
            }
            let rel = (tf - vf).abs() / tf.abs().max(vf.abs());
            if rel > 1e-10 {
                return Err(fail(format!(
                    "heat-current forms for {bath} disagree by {rel:e} relative"
                )));
            }
            report.max_current_form_gap = report.max_current_form_gap.max(rel);
        }

        if r.entropy_production < -1e-12 {
            return Err(fail(format!(
                "entropy production {:e} below -1e-12",
                r.entropy_production
            )));
        }
        report.min_entropy_production = report.min_entropy_production.min(r.entropy_production);

        if away_from_crossing(&p) {
            let ratio = r.first_law_residual.abs() / r.q_dot.max_abs();
            if ratio > 1e-12 {
                return Err(fail(format!("first-law residual ratio {ratio:e}")));
            }
            report.max_first_law_ratio = report.max_first_law_ratio.max(ratio);
            report.first_law_samples += 1;
        }
    }

    for k in 0..report.equal_temperature_draws {
        let p = random_equal_temperature_params(&mut rng);
        let fail =
            |what: String| CliError::Selftest(format!("equal-T draw {k}: {what} ({p:?})"));
        let gen = Generator::new(p).map_err(|e| fail(e.to_string()))?;
        let (pops, _, _) = steady_state_full(&gen).map_err(|e| fail(e.to_string()))?;
        let steady = DensityMatrix::from_populations(pops.as_vector());
        let gibbs = DensityMatrix::gibbs(gen.eigensystem(), p.t_hot)
            .map_err(|e| fail(e.to_string()))?;
        let d = steady.trace_distance(&gibbs);
        if d > 1e-8 {
            return Err(fail(format!("steady state is {d:e} from the thermal state")));
        }
        report.max_gibbs_distance = report.max_gibbs_distance.max(d);
    }

    for &g in &[0.003, 0.9] {
        let p = ModelParams::uniform_gamma(3.0, 1.0, g, 30.0, 21.0, 18.0, 0.003);
        let gen = Generator::new(p)
            .map_err(|e| CliError::Selftest(format!("relaxation point g={g}: {e}")))?;
        let (pops, _, _) = steady_state_full(&gen)
            .map_err(|e| CliError::Selftest(format!("relaxation point g={g}: {e}")))?;
        let target = DensityMatrix::from_populations(pops.as_vector());
        for s in 0..RELAX_SEEDS {
            let fail = |what: String| {
                CliError::Selftest(format!("relaxation g={g} state {s}: {what}"))
            };
            let ev = gen
                .evolve(&random_density(s), RELAX_DT, RELAX_STEPS)
                .map_err(|e| fail(e.to_string()))?;
            let d = ev.state.trace_distance(&target);
            if d > 1e-7 {
                return Err(fail(format!("integrated state is {d:e} from the kernel")));
            }
            let coh = ev.state.max_coherence();
            if coh > 1e-10 {
                return Err(fail(format!("residual coherence {coh:e}")));
            }
            report.relaxation_runs += 1;
            report.max_relaxation_distance = report.max_relaxation_distance.max(d);
            report.max_residual_coherence = report.max_residual_coherence.max(coh);
        }
    }

    Ok(report)
}
