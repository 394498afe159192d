//! Batch command implementations behind the `pattern-duet` binary: every
//! subcommand is pure pipeline orchestration around the library modules and
//! emits deterministic CSV/JSON artifacts plus a run manifest.
//!
//! Determinism contract: identical inputs and seed produce byte-identical
//! data artifacts (floats reference with 17 significant digits, `\n` line
//! endings). The run manifest records wall time and is therefore excluded
//! from `--check` comparisons.

use crate::error::Error;
use crate::kinetics::{find_interior_equilibrium, linearize, KineticsModel, ModelParams};
use crate::linear_analysis::{
    critical_eigenvectors, dispersion, spectrum_check, tt_point, turing_curve,
};
use crate::nf_dynamics::{
    classify_unfolding, nf_bifurcation_lines, nf_equilibria, nf_trajectory, region_classify,
    RegionGrid, TruncatedNf,
};
use crate::normal_form::{compute_nf, CaseTerms, NfCoefficients};
use crate::pde_sim::{
    builtin_scenario, classify_attractor, integrate, modal_signature, sweep, FieldState, Grid1D,
    Integrator, ModalIc, Scenario, SimConfig, SweepSpec, DEFAULT_K_SIG,
};
use crate::Result;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

/// Global options shared by every subcommand.
#[derive(Debug, Clone)]
pub struct CommandContext {
    pub out_dir: PathBuf,
    pub seed: u64,
    pub check: bool,
}

impl CommandContext {
    pub fn new(out_dir: impl Into<PathBuf>) -> Self {
        Self {
            out_dir: out_dir.into(),
            seed: 0,
            check: false,
        }
    }
}

/// Everything a run writes, staged in memory so `--check` can diff without
/// touching the filesystem and failed runs leave no partial files.
#[derive(Default)]
struct ArtifactSet {
    files: Vec<(String, Vec<u8>)>,
}

impl ArtifactSet {
    fn add_bytes(&mut self, name: &str, bytes: Vec<u8>) {
        self.files.push((name.to_string(), bytes));
    }

    fn add_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut bytes = serde_json::to_vec_pretty(value)?;
        bytes.push(b'\n');
        self.add_bytes(name, bytes);
        Ok(())
    }
}

fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    format!("{:x}", hasher.finalize())
}

/// The per-run record: command, input hashes, parameter block, tool
/// version, produced files, wall time.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub params: serde_json::Value,
    pub version: String,
    pub outputs: Vec<String>,
    pub wall_time_s: f64,
    pub seed: u64,
}

fn finish(
    ctx: &CommandContext,
    command: &str,
    inputs: BTreeMap<String, String>,
    params: serde_json::Value,
    artifacts: ArtifactSet,
    started: Instant,
) -> Result<Vec<PathBuf>> {
    if ctx.check {
        for (name, bytes) in &artifacts.files {
            let path = ctx.out_dir.join(name);
            let on_disk = std::fs::read(&path).map_err(|_| Error::CheckFailed {
                path: path.display().to_string(),
            })?;
            if &on_disk != bytes {
                return Err(Error::CheckFailed {
                    path: path.display().to_string(),
                });
            }
        }
        return Ok(Vec::new());
    }
    std::fs::create_dir_all(&ctx.out_dir)?;
    let mut written = Vec::new();
    let outputs: Vec<String> = artifacts.files.iter().map(|(n, _)| n.clone()).collect();
    for (name, bytes) in &artifacts.files {
        let path = ctx.out_dir.join(name);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent)?;
        }
        std::fs::write(&path, bytes)?;
        written.push(path);
    }
    let manifest = RunManifest {
        command: command.to_string(),
        inputs,
        params,
        version: env!("CARGO_PKG_VERSION").to_string(),
        outputs,
        wall_time_s: started.elapsed().as_secs_f64(),
        seed: ctx.seed,
    };
    let path = ctx.out_dir.join("run_manifest.json");
    std::fs::write(&path, serde_json::to_vec_pretty(&manifest)?)?;
    written.push(path);
    Ok(written)
}

/// Model source: a JSON file or one of the two built-in parameter sets.
#[derive(Debug, Clone)]
pub enum ModelSource {
    File(PathBuf),
    BuiltinSet(u8),
}

impl ModelSource {
    pub fn load(&self) -> Result<(ModelParams, BTreeMap<String, String>)> {
        match self {
            ModelSource::File(path) => {
                let bytes = std::fs::read(path)?;
                let params: ModelParams = serde_json::from_slice(&bytes)?;
                params.validate()?;
                let mut inputs = BTreeMap::new();
                inputs.insert(path.display().to_string(), sha256_hex(&bytes));
                Ok((params, inputs))
            }
            ModelSource::BuiltinSet(n) => {
                let params = match n {
                    1 => ModelParams::set1(),
                    2 => ModelParams::set2(),
                    _ => {
                        return Err(Error::InvalidParams(format!(
                            "built-in set must be 1 or 2, got {n}"
                        )))
                    }
                };
                let mut inputs = BTreeMap::new();
                inputs.insert(format!("builtin:set{n}"), String::new());
                Ok((params, inputs))
            }
        }
    }

    /// Default critical mode pair of the built-in examples.
    pub fn default_mode_pair(&self) -> Option<(u32, u32)> {
        match self {
            ModelSource::BuiltinSet(1) => Some((2, 3)),
            ModelSource::BuiltinSet(2) => Some((1, 2)),
            _ => None,
        }
    }
}

#[derive(Serialize)]
struct EquilibriumJson {
    u_star: f64,
    v_star: f64,
    s0: f64,
    sigma: f64,
}

/// `equilibrium`: interior equilibrium and linearization scalars.
pub fn cmd_equilibrium(ctx: &CommandContext, model: &ModelSource) -> Result<Vec<PathBuf>> {
    let started = Instant::now();
    let (params, inputs) = model.load()?;
    let eq = find_interior_equilibrium(&params)?;
    let lin = linearize(&params, &eq);
    let mut artifacts = ArtifactSet::default();
    artifacts.add_json(
        "equilibrium.json",
        &EquilibriumJson {
            u_star: eq.u,
            v_star: eq.v,
            s0: lin.s0,
            sigma: lin.sigma,
        },
    )?;
    finish(
        ctx,
        "equilibrium",
        inputs,
        serde_json::to_value(params)?,
        artifacts,
        started,
    )
}

/// `dispersion`: trace/determinant table over modes `0..=k_max` at the
/// model's `(d1, s)`.
pub fn cmd_dispersion(
    ctx: &CommandContext,
    model: &ModelSource,
    k_max: u32,
) -> Result<Vec<PathBuf>> {
    let started = Instant::now();
    let (params, inputs) = model.load()?;
    let eq = find_interior_equilibrium(&params)?;
    let lin = linearize(&params, &eq);
    let mut csv = String::from("k,d1,s,theta,delta\n");
    for k in 0..=k_max {
        let dp = dispersion(&params, &lin, k);
        let _ = writeln!(
            csv,
            "{},{},{},{},{}",
            k,
            fmt_float(params.d1),
            fmt_float(params.s),
            fmt_float(dp.theta),
            fmt_float(dp.delta)
        );
    }
    let mut artifacts = ArtifactSet::default();
    artifacts.add_bytes("dispersion.csv", csv.into_bytes());
    finish(
        ctx,
        "dispersion",
        inputs,
        serde_json::to_value(params)?,
        artifacts,
        started,
    )
}

/// `turing-curves`: sampled `L_k` curves, `Delta(k) = 0` along each.
pub fn cmd_turing_curves(
    ctx: &CommandContext,
    model: &ModelSource,
    modes: &[u32],
    samples: usize,
) -> Result<Vec<PathBuf>> {
    let started = Instant::now();
    let (params, inputs) = model.load()?;
    let eq = find_interior_equilibrium(&params)?;
    let lin = linearize(&params, &eq);
    let mut csv = String::from("k,d1,s,theta,delta\n");
    for &k in modes {
        let curve = turing_curve(&params, &lin, k, samples)?;
        for &(d1, s) in &curve.samples {
            let at = ModelParams { d1, s, ..params };
            let dp = dispersion(&at, &lin, k);
            let _ = writeln!(
                csv,
                "{},{},{},{},{}",
                k,
                fmt_float(d1),
                fmt_float(s),
                fmt_float(dp.theta),
                fmt_float(dp.delta)
            );
        }
    }
    let mut artifacts = ArtifactSet::default();
    artifacts.add_bytes("turing_curves.csv", csv.into_bytes());
    let params_json = serde_json::json!({ "model": params, "modes": modes, "samples": samples });
    finish(
        ctx,
        "turing-curves",
        inputs,
        params_json,
        artifacts,
        started,
    )
}

/// `tt-point`: closed-form Turing-Turing point of a mode pair.
pub fn cmd_tt_point(
    ctx: &CommandContext,
    model: &ModelSource,
    k1: u32,
    k2: u32,
) -> Result<Vec<PathBuf>> {
    let started = Instant::now();
    let (params, inputs) = model.load()?;
    let eq = find_interior_equilibrium(&params)?;
    let lin = linearize(&params, &eq);
    let tt = tt_point(&params, &lin, k1, k2)?;
    let mut artifacts = ArtifactSet::default();
    artifacts.add_json("tt_point.json", &tt)?;
    let params_json = serde_json::json!({ "model": params, "k1": k1, "k2": k2 });
    finish(ctx, "tt-point", inputs, params_json, artifacts, started)
}

#[derive(Serialize)]
struct NfJson {
    resonance: crate::normal_form::ResonanceCase,
    provenance: crate::linear_analysis::TTPoint,
    raw: BTreeMap<String, f64>,
    display: NfDisplayJson,
    spectrum_ok: bool,
}

#[derive(Serialize)]
struct NfDisplayJson {
    z1dot: BTreeMap<String, f64>,
    z2dot: BTreeMap<String, f64>,
}

fn nf_to_json(nf: &NfCoefficients, spectrum_ok: bool) -> NfJson {
    let mut raw = BTreeMap::new();
    raw.insert("g1010_11".into(), nf.lin[(0, 0)]);
    raw.insert("g1001_11".into(), nf.lin[(0, 1)]);
    raw.insert("g0110_12".into(), nf.lin[(1, 0)]);
    raw.insert("g0101_12".into(), nf.lin[(1, 1)]);
    raw.insert("g3000_11".into(), nf.g3000_11);
    raw.insert("g1200_11".into(), nf.g1200_11);
    raw.insert("g2100_12".into(), nf.g2100_12);
    raw.insert("g0300_12".into(), nf.g0300_12);
    let mut z1 = BTreeMap::new();
    let mut z2 = BTreeMap::new();
    z1.insert("eps1_z1".into(), nf.lin[(0, 0)]);
    z1.insert("eps2_z1".into(), nf.lin[(0, 1)]);
    z1.insert("z1^3".into(), nf.z1_cubed());
    z1.insert("z1_z2^2".into(), nf.z1_z2sq());
    z2.insert("eps1_z2".into(), nf.lin[(1, 0)]);
    z2.insert("eps2_z2".into(), nf.lin[(1, 1)]);
    z2.insert("z1^2_z2".into(), nf.z1sq_z2());
    z2.insert("z2^3".into(), nf.z2_cubed());
    match nf.case {
        CaseTerms::Generic => {}
        CaseTerms::OneTwo { g1100_11, g2000_12 } => {
            raw.insert("g1100_11".into(), g1100_11);
            raw.insert("g2000_12".into(), g2000_12);
            z1.insert("z1_z2".into(), g1100_11);
            z2.insert("z1^2".into(), g2000_12 / 2.0);
        }
        CaseTerms::OneThree { g2100_11, g3000_12 } => {
            raw.insert("g2100_11".into(), g2100_11);
            raw.insert("g3000_12".into(), g3000_12);
            z1.insert("z1^2_z2".into(), g2100_11 / 2.0);
            z2.insert("z1^3".into(), g3000_12 / 6.0);
        }
    }
    NfJson {
        resonance: nf.resonance,
        provenance: nf.tt,
        raw,
        display: NfDisplayJson {
            z1dot: z1,
            z2dot: z2,
        },
        spectrum_ok,
    }
}

fn nf_pipeline(params: &ModelParams, k1: u32, k2: u32) -> Result<(NfCoefficients, bool)> {
    let eq = find_interior_equilibrium(params)?;
    let lin = linearize(params, &eq);
    let tt = tt_point(params, &lin, k1, k2)?;
    let critical = critical_eigenvectors(params, &lin, &tt)?;
    let at_tt = params.at_tt_point(tt.d_star, tt.s_star);
    let model = KineticsModel::crowley_martin(&at_tt)?;
    let nf = compute_nf(&tt, &critical, &model)?;
    let spectrum = spectrum_check(params, &lin, &tt, 50);
    Ok((nf, spectrum.ok))
}

/// `normal-form`: full coefficient set with provenance.
pub fn cmd_normal_form(
    ctx: &CommandContext,
    model: &ModelSource,
    k1: u32,
    k2: u32,
) -> Result<Vec<PathBuf>> {
    let started = Instant::now();
    let (params, inputs) = model.load()?;
    let (nf, spectrum_ok) = nf_pipeline(&params, k1, k2)?;
    let mut artifacts = ArtifactSet::default();
    artifacts.add_json("nf.json", &nf_to_json(&nf, spectrum_ok))?;
    let params_json = serde_json::json!({ "model": params, "k1": k1, "k2": k2 });
    finish(ctx, "normal-form", inputs, params_json, artifacts, started)
}

#[derive(Serialize)]
struct NfPhaseJson {
    epsilon: (f64, f64),
    d1: f64,
    s: f64,
    equilibria: Vec<crate::nf_dynamics::NfEquilibrium>,
    unfolding: Option<crate::nf_dynamics::UnfoldingClass>,
}

/// `nf-phase`: equilibria, stability, unfolding, bifurcation lines, and an
/// optional trajectory of the truncated normal form at one `(d1, s)`.
#[allow(clippy::too_many_arguments)]
pub fn cmd_nf_phase(
    ctx: &CommandContext,
    model: &ModelSource,
    k1: u32,
    k2: u32,
    at: Option<(f64, f64)>,
    z0: Option<(f64, f64)>,
    t_end: f64,
    dt: f64,
) -> Result<Vec<PathBuf>> {
    let started = Instant::now();
    let (params, inputs) = model.load()?;
    let (nf, _) = nf_pipeline(&params, k1, k2)?;
    let (d1, s) = at.unwrap_or((params.d1, params.s));
    let eps = (d1 - nf.tt.d_star, s - nf.tt.s_star);
    let truncated = TruncatedNf::new(&nf, eps);
    let equilibria = nf_equilibria(&truncated)?;
    let unfolding = classify_unfolding(&nf).ok();
    let lines = nf_bifurcation_lines(&nf, (0.002, 0.05))?;

    let mut artifacts = ArtifactSet::default();
    artifacts.add_json(
        "nf_phase.json",
        &NfPhaseJson {
            epsilon: eps,
            d1,
            s,
            equilibria,
            unfolding,
        },
    )?;
    artifacts.add_json("bifurcation_lines.json", &lines)?;
    if let Some((a, b)) = z0 {
        let traj = nf_trajectory(&truncated, nalgebra::Vector2::new(a, b), t_end, dt)?;
        let mut csv = String::from("t,z1,z2\n");
        for (t, z1, z2) in traj {
            let _ = writeln!(csv, "{},{},{}", fmt_float(t), fmt_float(z1), fmt_float(z2));
        }
        artifacts.add_bytes("trajectory.csv", csv.into_bytes());
    }
    let params_json = serde_json::json!({
        "model": params, "k1": k1, "k2": k2, "d1": d1, "s": s, "z0": z0,
        "t_end": t_end, "dt": dt
    });
    finish(ctx, "nf-phase", inputs, params_json, artifacts, started)
}

/// `regions`: census-fingerprint map of a `(d1, s)` window around the
/// Turing-Turing point.
pub fn cmd_regions(
    ctx: &CommandContext,
    model: &ModelSource,
    k1: u32,
    k2: u32,
    window: (f64, f64),
    n: usize,
) -> Result<Vec<PathBuf>> {
    let started = Instant::now();
    let (params, inputs) = model.load()?;
    if n < 2 {
        return Err(Error::InvalidConfig(format!(
            "regions grid needs n >= 2, got {n}"
        )));
    }
    let (nf, _) = nf_pipeline(&params, k1, k2)?;
    let grid = RegionGrid::centered((nf.tt.d_star, nf.tt.s_star), window.0, window.1, n);
    let map = region_classify(&nf, &grid);
    let mut csv =
        String::from("d1,s,eps1,eps2,fingerprint,region_label,n_stable,n_saddle,n_unstable\n");
    for cell in &map.cells {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{},{},{}",
            fmt_float(cell.d1),
            fmt_float(cell.s),
            fmt_float(cell.eps1),
            fmt_float(cell.eps2),
            cell.fingerprint,
            cell.region_label.as_deref().unwrap_or(""),
            cell.n_stable,
            cell.n_saddle,
            cell.n_unstable
        );
    }
    let lines = nf_bifurcation_lines(&nf, window)?;
    let mut artifacts = ArtifactSet::default();
    artifacts.add_bytes("regions.csv", csv.into_bytes());
    artifacts.add_json("bifurcation_lines.json", &lines)?;
    let params_json = serde_json::json!({
        "model": params, "k1": k1, "k2": k2, "window": window, "n": n
    });
    finish(ctx, "regions", inputs, params_json, artifacts, started)
}

/// Scenario definition file: `{params, ic: {mode_coeffs_u, mode_coeffs_v},
/// config}`. Baselines default to the interior equilibrium.
#[derive(Debug, Deserialize)]
pub struct ScenarioFile {
    pub params: ModelParams,
    pub ic: ScenarioIc,
    #[serde(default)]
    pub config: ConfigOverrides,
}

#[derive(Debug, Deserialize)]
pub struct ScenarioIc {
    pub mode_coeffs_u: Vec<(u32, f64)>,
    pub mode_coeffs_v: Vec<(u32, f64)>,
    #[serde(default)]
    pub base_u: Option<f64>,
    #[serde(default)]
    pub base_v: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
pub struct ConfigOverrides {
    pub dt: Option<f64>,
    pub t_max: Option<f64>,
    pub steady_tol: Option<f64>,
    pub integrator: Option<String>,
    pub snapshot_stride: Option<usize>,
    pub n: Option<usize>,
}

impl ConfigOverrides {
    pub fn apply(&self, mut config: SimConfig) -> Result<(SimConfig, usize)> {
        if let Some(dt) = self.dt {
            config.dt = dt;
        }
        if let Some(t_max) = self.t_max {
            config.t_max = t_max;
        }
        if let Some(tol) = self.steady_tol {
            config.steady_tol = tol;
        }
        if let Some(stride) = self.snapshot_stride {
            config.snapshot_stride = stride;
        }
        if let Some(ref name) = self.integrator {
            config.integrator = match name.as_str() {
                "imex" => Integrator::Imex,
                "explicit" => Integrator::Explicit,
                other => {
                    return Err(Error::InvalidConfig(format!(
                        "unknown integrator '{other}'"
                    )))
                }
            };
        }
        Ok((config, self.n.unwrap_or(256)))
    }
}

#[derive(Serialize)]
struct AttractorReportJson {
    scenario: String,
    label: crate::pde_sim::AttractorLabel,
    label_short: String,
    modal_amplitudes: crate::pde_sim::ModalSignature,
    steady: bool,
    convergence_time: f64,
    steps: usize,
}

/// `simulate`: run one scenario (built-in name or JSON file), emitting
/// snapshot CSVs, a time-index manifest, and the attractor report.
pub fn cmd_simulate(
    ctx: &CommandContext,
    scenario_name: Option<&str>,
    scenario_file: Option<&Path>,
    n_override: Option<usize>,
) -> Result<Vec<PathBuf>> {
    let started = Instant::now();
    let mut inputs = BTreeMap::new();
    let (scenario, config, n) = match (scenario_name, scenario_file) {
        (Some(name), None) => {
            inputs.insert(format!("builtin:{name}"), String::new());
            (
                builtin_scenario(name)?,
                SimConfig::default(),
                n_override.unwrap_or(256),
            )
        }
        (None, Some(path)) => {
            let bytes = std::fs::read(path)?;
            inputs.insert(path.display().to_string(), sha256_hex(&bytes));
            let file: ScenarioFile = serde_json::from_slice(&bytes)?;
            file.params.validate()?;
            let eq = find_interior_equilibrium(&file.params)?;
            let (config, n) = file.config.apply(SimConfig::default())?;
            let scenario = Scenario {
                name: path.display().to_string(),
                params: file.params,
                ic: ModalIc {
                    base_u: file.ic.base_u.unwrap_or(eq.u),
                    modes_u: file.ic.mode_coeffs_u,
                    base_v: file.ic.base_v.unwrap_or(eq.v),
                    modes_v: file.ic.mode_coeffs_v,
                },
            };
            (scenario, config, n_override.unwrap_or(n))
        }
        _ => {
            return Err(Error::InvalidConfig(
                "simulate needs exactly one of --scenario or --scenario-file".into(),
            ))
        }
    };
    let grid = Grid1D::new(n, scenario.params.l)?;
    let eq = find_interior_equilibrium(&scenario.params)?;
    let initial = FieldState::from_modes(
        &grid,
        scenario.ic.base_u,
        &scenario.ic.modes_u,
        scenario.ic.base_v,
        &scenario.ic.modes_v,
    );
    let outcome = integrate(&scenario.params, &grid, &config, &initial)?;
    let signature = modal_signature(&outcome.final_state, &eq, &grid, DEFAULT_K_SIG);
    let label = classify_attractor(&signature, outcome.steady);

    let mut artifacts = ArtifactSet::default();
    let mut t_index = String::from("index,t,file\n");
    for (i, snap) in outcome.history.iter().enumerate() {
        let file = format!("snapshot_{i:04}.csv");
        let mut csv = String::from("x,u,v\n");
        for j in 0..grid.n {
            let _ = writeln!(
                csv,
                "{},{},{}",
                fmt_float(grid.x[j]),
                fmt_float(snap.u[j]),
                fmt_float(snap.v[j])
            );
        }
        let _ = writeln!(t_index, "{},{},{}", i, fmt_float(snap.t), file);
        artifacts.add_bytes(&file, csv.into_bytes());
    }
    artifacts.add_bytes("t_index.csv", t_index.into_bytes());
    artifacts.add_json(
        "attractor.json",
        &AttractorReportJson {
            scenario: scenario.name.clone(),
            label_short: label.short(),
            label,
            modal_amplitudes: signature,
            steady: outcome.steady,
            convergence_time: outcome.final_state.t,
            steps: outcome.steps,
        },
    )?;
    let params_json = serde_json::json!({
        "scenario": scenario.name, "model": scenario.params, "ic": scenario.ic,
        "config": config, "n": n
    });
    finish(ctx, "simulate", inputs, params_json, artifacts, started)
}

/// `sweep`: attractor census over a `(d1, s)` grid with the deterministic
/// IC ensemble.
#[allow(clippy::too_many_arguments)]
pub fn cmd_sweep(
    ctx: &CommandContext,
    model: &ModelSource,
    d1_range: (f64, f64, usize),
    s_range: (f64, f64, usize),
    n_random_ic: usize,
    n_grid: usize,
) -> Result<Vec<PathBuf>> {
    let started = Instant::now();
    let (params, inputs) = model.load()?;
    let linspace = |(lo, hi, n): (f64, f64, usize)| -> Vec<f64> {
        if n == 1 {
            vec![0.5 * (lo + hi)]
        } else {
            (0..n)
                .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
                .collect()
        }
    };
    if d1_range.2 == 0 || s_range.2 == 0 {
        return Err(Error::InvalidConfig(
            "sweep grid must contain at least one cell".into(),
        ));
    }
    let spec = SweepSpec {
        base: params,
        d1_values: linspace(d1_range),
        s_values: linspace(s_range),
        seed: ctx.seed,
        n_random_ic,
    };
    let grid = Grid1D::new(n_grid, params.l)?;
    let cells = sweep(&spec, &grid, &SimConfig::default(), DEFAULT_K_SIG);

    let mut csv = String::from("d1,s,n_attractors,n_runs,n_nonstationary,blow_up,labels\n");
    for cell in &cells {
        let labels: Vec<String> = cell
            .attractors
            .iter()
            .map(|a| {
                if a.generic_basin {
                    a.label.short()
                } else {
                    format!("{}?", a.label.short())
                }
            })
            .collect();
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{}",
            fmt_float(cell.d1),
            fmt_float(cell.s),
            cell.attractors.len(),
            cell.n_runs,
            cell.n_nonstationary,
            cell.blow_up,
            labels.join("|")
        );
    }
    let mut artifacts = ArtifactSet::default();
    artifacts.add_bytes("sweep.csv", csv.into_bytes());
    artifacts.add_json("sweep.json", &cells)?;
    let params_json = serde_json::json!({
        "model": params, "d1_range": d1_range, "s_range": s_range,
        "n_random_ic": n_random_ic, "n_grid": n_grid
    });
    finish(ctx, "sweep", inputs, params_json, artifacts, started)
}

/// Process exit code for an error: 2 for input/validation problems, 3 for
/// violated mathematical hypotheses, 1 otherwise.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidParams(_)
        | Error::Json(_)
        | Error::Io(_)
        | Error::InvalidConfig(_)
        | Error::UnknownScenario(_)
        | Error::CheckFailed { .. } => 2,
        Error::HypothesisViolated(_)
        | Error::NegativeCritical(_)
        | Error::InvalidModePair { .. }
        | Error::ExistenceConditionViolated { .. }
        | Error::NoInteriorEquilibrium => 3,
        _ => 1,
    }
}
