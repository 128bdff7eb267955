//! `qar` — steady states, sweeps, and datasets for a three-qubit absorption
//! refrigerator driven by three thermal baths.
//!
//! Exit codes: 0 success, 1 invalid configuration or flags, 2 numerical
//! failure, 3 I/O failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use qar_cli::config;
use qar_cli::emit::{self, Format};
use qar_cli::error::CliError;
use qar_cli::presets::{preset, FigureId};
use qar_cli::selftest::run_selftest;
use qar_cli::sweep::{run_sweep, SweepSpec, Variable};

#[derive(Parser)]
#[command(
    name = "qar",
    version,
    about = "Three-qubit absorption refrigerator: steady states, sweeps, datasets",
    after_help = "Exit codes: 0 success, 1 invalid configuration, 2 numerical failure, 3 I/O."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve one operating point and print a JSON report.
    Steady {
        /// JSON parameter file (defaults to the reference weak-coupling point).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep one parameter over an inclusive grid.
    Sweep {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Swept parameter.
        #[arg(long, value_enum, default_value = "T_H")]
        variable: Variable,
        /// Grid start; for T_H it defaults to T_C.
        #[arg(long)]
        from: Option<f64>,
        /// Grid end; for T_H it defaults to 3x the virtual temperature
        /// (or 100 when that is undefined).
        #[arg(long)]
        to: Option<f64>,
        /// Number of grid points.
        #[arg(long, default_value_t = 200)]
        steps: usize,
        /// Comma-separated coupling values, one sweep line each.
        #[arg(long = "g-list", value_delimiter = ',')]
        g_list: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Generate a built-in dataset (fig1..fig6).
    Figure {
        /// One of fig1, fig2, fig3, fig4, fig5, fig6.
        id: String,
        /// Override the preset grid.
        #[arg(long)]
        from: Option<f64>,
        #[arg(long)]
        to: Option<f64>,
        #[arg(long)]
        steps: Option<usize>,
        /// Override the preset coupling lines.
        #[arg(long = "g-list", value_delimiter = ',')]
        g_list: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Run the randomized invariant battery and print its report.
    Selftest {
        /// Random parameter draws (at least 100).
        #[arg(long, default_value_t = 300)]
        draws: usize,
        /// Seed for the draw generator.
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version are successful outcomes; everything else is
            // a usage problem.
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.cmd {
        Cmd::Steady { config, out } => steady(config.as_deref(), out.as_deref()),
        Cmd::Sweep {
            config,
            variable,
            from,
            to,
            steps,
            g_list,
            out,
            format,
        } => {
            let base = config::load_or_baseline(config.as_deref())?;
            let (from, to) = default_range(&base, variable, from, to)?;
            let spec = SweepSpec {
                base,
                variable,
                from,
                to,
                steps,
                g_list,
            };
            let table = run_sweep(&spec)?;
            emit::write_output(&emit::render(&table, format)?, out.as_deref())
        }
        Cmd::Figure {
            id,
            from,
            to,
            steps,
            g_list,
            out,
            format,
        } => {
            let id: FigureId = id.parse()?;
            let mut spec = preset(id).spec;
            if let Some(v) = from {
                spec.from = v;
            }
            if let Some(v) = to {
                spec.to = v;
            }
            if let Some(v) = steps {
                spec.steps = v;
            }
            if !g_list.is_empty() {
                spec.g_list = g_list;
            }
            let table = run_sweep(&spec)?;
            emit::write_output(&emit::render(&table, format)?, out.as_deref())
        }
        Cmd::Selftest { draws, seed } => {
            let report = run_selftest(draws, seed)?;
            let text = serde_json::to_string_pretty(&report)
                .map_err(|e| CliError::Config(format!("serialization failed: {e}")))?;
            println!("{text}");
            Ok(())
        }
    }
}

/// `T_H` grids may omit the range: it defaults to `[T_C, 3 T_v]`, falling
/// back to 100 for the upper end when the virtual temperature is undefined
/// or non-positive. Other variables must state their range.
fn default_range(
    base: &qar_core::ModelParams,
    variable: Variable,
    from: Option<f64>,
    to: Option<f64>,
) -> Result<(f64, f64), CliError> {
    if variable != Variable::THot {
        return match (from, to) {
            (Some(a), Some(b)) => Ok((a, b)),
            _ => Err(CliError::Config(format!(
                "--from and --to are required when sweeping {}",
                variable.label()
            ))),
        };
    }
    let tv = qar_core::virtual_temperature(base);
    let from = from.unwrap_or(base.t_cold);
    let to = to.unwrap_or(if tv.is_finite() && tv > 0.0 {
        3.0 * tv
    } else {
        100.0
    });
    if !(from < to) {
        return Err(CliError::Config(format!(
            "derived sweep range [{from}, {to}] is empty; pass --from/--to explicitly"
        )));
    }
    Ok((from, to))
}

/// Single-point report: everything the model exposes for one parameter set.
#[derive(Serialize)]
struct SteadyOutput {
    params: ParamsEcho,
    populations: [f64; qar_core::DIM],
    q_hot: f64,
    q_room: f64,
    q_cold: f64,
    eta: Option<f64>,
    sigma: f64,
    t_virtual: f64,
    first_law_residual: f64,
    flow_scale: f64,
    construction_gap: f64,
    generator_residual: f64,
    g_over_gamma: f64,
}

#[derive(Serialize)]
struct ParamsEcho {
    omega_h: f64,
    omega_c: f64,
    omega_r: f64,
    g: f64,
    t_hot: f64,
    t_room: f64,
    t_cold: f64,
    gamma_h: f64,
    gamma_r: f64,
    gamma_c: f64,
}

fn steady(config: Option<&std::path::Path>, out: Option<&std::path::Path>) -> Result<(), CliError> {
    let p = config::load_or_baseline(config)?;
    let gen = qar_core::Generator::new(p)?;
    let r = qar_core::steady_report(&gen)?;
    let mut populations = [0.0; qar_core::DIM];
    for (i, slot) in populations.iter_mut().enumerate() {
        *slot = r.populations.get(i);
    }
    let doc = SteadyOutput {
        params: ParamsEcho {
            omega_h: p.omega_h,
            omega_c: p.omega_c,
            omega_r: p.omega_r(),
            g: p.g,
            t_hot: p.t_hot,
            t_room: p.t_room,
            t_cold: p.t_cold,
            gamma_h: p.gamma_h,
            gamma_r: p.gamma_r,
            gamma_c: p.gamma_c,
        },
        populations,
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
        g_over_gamma: r.diagnostics.g_over_gamma,
    };
    let mut text = serde_json::to_string_pretty(&doc)
        .map_err(|e| CliError::Config(format!("serialization failed: {e}")))?;
    text.push('\n');
    emit::write_output(&text, out)
}
