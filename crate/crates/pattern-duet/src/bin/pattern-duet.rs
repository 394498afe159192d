//! Command-line front end: batch analysis of Turing-Turing bifurcations and
//! reaction-diffusion multistability. All logic lives in the library; this
//! binary only parses arguments, dispatches, and maps errors to exit codes.

use clap::{Args, Parser, Subcommand};
use pattern_duet::cli::{
    cmd_dispersion, cmd_equilibrium, cmd_nf_phase, cmd_normal_form, cmd_regions, cmd_simulate,
    cmd_sweep, cmd_tt_point, cmd_turing_curves, exit_code, CommandContext, ModelSource,
};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "pattern-duet",
    version,
    about = "Turing-Turing bifurcation analysis and superposition-pattern simulation \
             for two-component 1D reaction-diffusion systems"
)]
struct Cli {
    /// Model parameter JSON file (keys m, a, b, s, d1, d2, optional l)
    #[arg(long, global = true)]
    model: Option<PathBuf>,

    /// Built-in parameter set (1 or 2) instead of --model
    #[arg(long, global = true)]
    set: Option<u8>,

    /// Output directory for artifacts
    #[arg(long, global = true, default_value = "out")]
    out_dir: PathBuf,

    /// Seed for stochastic initial-condition ensembles
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker thread bound for sweeps and region maps
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Recompute and diff against existing artifacts instead of writing
    #[arg(long, global = true)]
    check: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ModePair {
    /// First critical mode
    #[arg(long)]
    k1: Option<u32>,
    /// Second critical mode (k2 > k1)
    #[arg(long)]
    k2: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// Interior equilibrium and linearization scalars
    Equilibrium,
    /// Dispersion-relation table over modes 0..=k_max
    Dispersion {
        #[arg(long, default_value_t = 50)]
        k_max: u32,
    },
    /// Sampled Turing curves L_k in the d1-s plane
    TuringCurves {
        /// Comma-separated mode list
        #[arg(long, value_delimiter = ',', default_values_t = [1u32, 2, 3, 4])]
        modes: Vec<u32>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Closed-form (k1, k2) Turing-Turing point
    TtPoint {
        #[command(flatten)]
        modes: ModePair,
    },
    /// Third-order normal form coefficients
    NormalForm {
        #[command(flatten)]
        modes: ModePair,
    },
    /// Equilibria, stability, unfolding, lines, optional trajectory
    NfPhase {
        #[command(flatten)]
        modes: ModePair,
        /// Evaluate at this d1 (defaults to the model value)
        #[arg(long)]
        d1: Option<f64>,
        /// Evaluate at this s (defaults to the model value)
        #[arg(long)]
        s: Option<f64>,
        /// Trajectory start "z1,z2"
        #[arg(long, value_delimiter = ',', num_args = 2)]
        z0: Option<Vec<f64>>,
        #[arg(long, default_value_t = 2000.0)]
        t_end: f64,
        #[arg(long, default_value_t = 0.01)]
        dt: f64,
    },
    /// Region map of equilibrium censuses around the Turing-Turing point
    Regions {
        #[command(flatten)]
        modes: ModePair,
        /// Half-widths of the window: d1 then s
        #[arg(long, num_args = 2, default_values_t = [0.002, 0.05])]
        window: Vec<f64>,
        #[arg(long, default_value_t = 40)]
        n: usize,
    },
    /// Integrate one scenario and classify its attractor
    Simulate {
        /// Built-in scenario name (fig3a..fig3d, fig6a..fig6c, fig7a..fig7d, fig8a..fig8d)
        #[arg(long)]
        scenario: Option<String>,
        /// Scenario definition JSON
        #[arg(long)]
        scenario_file: Option<PathBuf>,
        /// Grid nodes
        #[arg(long)]
        n: Option<usize>,
    },
    /// Attractor census over a (d1, s) grid with an IC ensemble
    Sweep {
        /// d1 range "lo,hi,count"
        #[arg(long, value_delimiter = ',', num_args = 3)]
        d1: Vec<f64>,
        /// s range "lo,hi,count"
        #[arg(long, value_delimiter = ',', num_args = 3)]
        s: Vec<f64>,
        /// Random ICs per cell on top of the deterministic four
        #[arg(long, default_value_t = 2)]
        random_ics: usize,
        #[arg(long, default_value_t = 256)]
        n: usize,
    },
}

fn model_source(cli: &Cli) -> Result<ModelSource, pattern_duet::Error> {
    match (&cli.model, cli.set) {
        (Some(path), None) => Ok(ModelSource::File(path.clone())),
        (None, Some(set)) => Ok(ModelSource::BuiltinSet(set)),
        (None, None) => Err(pattern_duet::Error::InvalidParams(
            "provide --model FILE or --set 1|2".into(),
        )),
        (Some(_), Some(_)) => Err(pattern_duet::Error::InvalidParams(
            "--model and --set are mutually exclusive".into(),
        )),
    }
}

fn mode_pair(modes: &ModePair, model: &ModelSource) -> Result<(u32, u32), pattern_duet::Error> {
    match (modes.k1, modes.k2) {
        (Some(a), Some(b)) => Ok((a, b)),
        (None, None) => model.default_mode_pair().ok_or_else(|| {
            pattern_duet::Error::InvalidParams(
                "--k1/--k2 required unless --set provides defaults".into(),
            )
        }),
        _ => Err(pattern_duet::Error::InvalidParams(
            "provide both --k1 and --k2".into(),
        )),
    }
}

fn run(cli: &Cli) -> Result<(), pattern_duet::Error> {
    if let Some(jobs) = cli.jobs {
        // ignore failure if a pool already exists (repeated invocation in-process)
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    let ctx = CommandContext {
        out_dir: cli.out_dir.clone(),
        seed: cli.seed,
        check: cli.check,
    };
    match &cli.command {
        Command::Equilibrium => {
            cmd_equilibrium(&ctx, &model_source(cli)?)?;
        }
        Command::Dispersion { k_max } => {
            cmd_dispersion(&ctx, &model_source(cli)?, *k_max)?;
        }
        Command::TuringCurves { modes, samples } => {
            cmd_turing_curves(&ctx, &model_source(cli)?, modes, *samples)?;
        }
        Command::TtPoint { modes } => {
            let model = model_source(cli)?;
            let (k1, k2) = mode_pair(modes, &model)?;
            cmd_tt_point(&ctx, &model, k1, k2)?;
        }
        Command::NormalForm { modes } => {
            let model = model_source(cli)?;
            let (k1, k2) = mode_pair(modes, &model)?;
            cmd_normal_form(&ctx, &model, k1, k2)?;
        }
        Command::NfPhase {
            modes,
            d1,
            s,
            z0,
            t_end,
            dt,
        } => {
            let model = model_source(cli)?;
            let (k1, k2) = mode_pair(modes, &model)?;
            let at = match (d1, s) {
                (Some(a), Some(b)) => Some((*a, *b)),
                (None, None) => None,
                _ => {
                    return Err(pattern_duet::Error::InvalidParams(
                        "provide both --d1 and --s or neither".into(),
                    ))
                }
            };
            let z0 = z0.as_ref().map(|v| (v[0], v[1]));
            cmd_nf_phase(&ctx, &model, k1, k2, at, z0, *t_end, *dt)?;
        }
        Command::Regions { modes, window, n } => {
            let model = model_source(cli)?;
            let (k1, k2) = mode_pair(modes, &model)?;
            cmd_regions(&ctx, &model, k1, k2, (window[0], window[1]), *n)?;
        }
        Command::Simulate {
            scenario,
            scenario_file,
            n,
        } => {
            cmd_simulate(&ctx, scenario.as_deref(), scenario_file.as_deref(), *n)?;
        }
        Command::Sweep {
            d1,
            s,
            random_ics,
            n,
        } => {
            let model = model_source(cli)?;
            let d1_range = (d1[0], d1[1], d1[2] as usize);
            let s_range = (s[0], s[1], s[2] as usize);
            cmd_sweep(&ctx, &model, d1_range, s_range, *random_ics, *n)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("PATTERN_DUET_LOG")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let code = exit_code(&err);
            let payload = serde_json::json!({
                "error": err.to_string(),
                "code": code,
            });
            eprintln!("{payload}");
            ExitCode::from(code as u8)
        }
    }
}
