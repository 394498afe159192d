//! Direct simulation of the reaction-diffusion system on `(0, l*pi)` with
//! Neumann boundary conditions: first-order IMEX integration (implicit
//! diffusion via a prefactored tridiagonal solve, explicit reaction),
//! steady-state detection, cosine-modal signatures, attractor
//! classification, and multistability sweeps.
//!
//! The grid is vertex-centered with mirror ghost nodes, which makes
//! `cos(k x / l)` an exact discrete eigenfunction of the Laplacian and keeps
//! the scheme exactly equivariant under `x -> l*pi - x`.

use crate::error::Error;
use crate::kinetics::{Equilibrium, ModelParams};
use crate::Result;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::PI;

/// Vertex-centered grid on `[0, l*pi]` with `n` nodes.
#[derive(Debug, Clone)]
pub struct Grid1D {
    pub n: usize,
    pub l: f64,
    pub h: f64,
    pub x: Vec<f64>,
}

impl Grid1D {
    pub fn new(n: usize, l: f64) -> Result<Self> {
        if n < 64 {
            return Err(Error::InvalidConfig(format!(
                "grid needs n >= 64 nodes, got {n}"
            )));
        }
        if l.is_nan() || l <= 0.0 {
            return Err(Error::InvalidConfig(
                "domain scale l must be positive".into(),
            ));
        }
        let h = l * PI / (n - 1) as f64;
        let x = (0..n).map(|i| i as f64 * h).collect();
        Ok(Self { n, l, h, x })
    }

    /// Nested refinement: `n -> 2n - 1` halves `h` exactly, so coarse nodes
    /// are a subset of fine nodes.
    pub fn refined(&self) -> Self {
        Self::new(2 * self.n - 1, self.l).expect("refined grid is valid")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Integrator {
    Imex,
    Explicit,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SimConfig {
    pub dt: f64,
    pub t_max: f64,
    /// max-norm of the finite-difference time derivative below which the
    /// state is declared steady
    pub steady_tol: f64,
    pub integrator: Integrator,
    /// history snapshot cadence, in steps
    pub snapshot_stride: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            dt: 0.05,
            t_max: 2e4,
            steady_tol: 1e-9,
            integrator: Integrator::Imex,
            snapshot_stride: 4000,
        }
    }
}

impl SimConfig {
    pub fn validate(&self, params: &ModelParams, grid: &Grid1D) -> Result<()> {
        if [self.dt, self.t_max, self.steady_tol]
            .iter()
            .any(|v| v.is_nan() || *v <= 0.0)
        {
            return Err(Error::InvalidConfig(
                "dt, t_max, steady_tol must be positive".into(),
            ));
        }
        if self.integrator == Integrator::Explicit {
            let bound = 0.4 * grid.h * grid.h / params.d1.max(params.d2);
            if self.dt > bound {
                return Err(Error::InvalidConfig(format!(
                    "explicit integrator needs dt <= 0.4 h^2 / max(d1, d2) = {bound:e}, got {:e}",
                    self.dt
                )));
            }
        }
        Ok(())
    }
}

/// Solution snapshot: prey and predator node values at time `t`.
#[derive(Debug, Clone, Serialize)]
pub struct FieldState {
    pub t: f64,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

impl FieldState {
    pub fn uniform(grid: &Grid1D, u0: f64, v0: f64) -> Self {
        Self {
            t: 0.0,
            u: vec![u0; grid.n],
            v: vec![v0; grid.n],
        }
    }

    /// `field(x) = base + sum over (k, amp) of amp * cos(k x / l)`, the
    /// initial-condition form used by all the reference scenarios.
    pub fn from_modes(
        grid: &Grid1D,
        base_u: f64,
        modes_u: &[(u32, f64)],
        base_v: f64,
        modes_v: &[(u32, f64)],
    ) -> Self {
        let field = |base: f64, modes: &[(u32, f64)]| -> Vec<f64> {
            grid.x
                .iter()
                .map(|&x| {
                    base + modes
                        .iter()
                        .map(|&(k, amp)| amp * (f64::from(k) * x / grid.l).cos())
                        .sum::<f64>()
                })
                .collect()
        };
        Self {
            t: 0.0,
            u: field(base_u, modes_u),
            v: field(base_v, modes_v),
        }
    }

    /// Node-reversal image, i.e. the field at `l*pi - x`.
    pub fn reflected(&self) -> Self {
        let mut out = self.clone();
        out.u.reverse();
        out.v.reverse();
        out
    }

    pub fn max_abs_diff(&self, other: &FieldState) -> f64 {
        self.u
            .iter()
            .zip(&other.u)
            .chain(self.v.iter().zip(&other.v))
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Prefactored Thomas solve for `(I - r L) x = d` with the mirror-ghost
/// Neumann Laplacian (`L` row 0 is `(-2, 2)/h^2`, interior `(1, -2, 1)/h^2`).
struct ImexSolver {
    lower: Vec<f64>,
    cp: Vec<f64>,
    inv_denom: Vec<f64>,
}

impl ImexSolver {
    fn new(n: usize, r: f64) -> Self {
        let diag = vec![1.0 + 2.0 * r; n];
        let mut upper = vec![-r; n - 1];
        let mut lower = vec![-r; n - 1];
        upper[0] = -2.0 * r;
        lower[n - 2] = -2.0 * r;
        let mut cp = vec![0.0; n - 1];
        let mut inv_denom = vec![0.0; n];
        cp[0] = upper[0] / diag[0];
        inv_denom[0] = 1.0 / diag[0];
        for i in 1..n {
            let denom = diag[i] - lower[i - 1] * cp[i - 1];
            inv_denom[i] = 1.0 / denom;
            if i < n - 1 {
                cp[i] = upper[i] * inv_denom[i];
            }
        }
        Self {
            lower,
            cp,
            inv_denom,
        }
    }

    fn solve_in_place(&self, d: &mut [f64]) {
        let n = d.len();
        d[0] *= self.inv_denom[0];
        for i in 1..n {
            d[i] = (d[i] - self.lower[i - 1] * d[i - 1]) * self.inv_denom[i];
        }
        for i in (0..n - 1).rev() {
            d[i] -= self.cp[i] * d[i + 1];
        }
    }
}

/// Ghost-closed second-difference Laplacian applied to one field.
fn laplacian_into(f: &[f64], h: f64, out: &mut [f64]) {
    let n = f.len();
    let inv_h2 = 1.0 / (h * h);
    out[0] = 2.0 * (f[1] - f[0]) * inv_h2;
    for i in 1..n - 1 {
        out[i] = (f[i - 1] - 2.0 * f[i] + f[i + 1]) * inv_h2;
    }
    out[n - 1] = 2.0 * (f[n - 2] - f[n - 1]) * inv_h2;
}

#[derive(Debug, Clone)]
pub struct SimOutcome {
    pub final_state: FieldState,
    pub history: Vec<FieldState>,
    pub steady: bool,
    pub steps: usize,
    pub negativity_warning: bool,
}

const BLOW_UP_LIMIT: f64 = 1e6;

/// Advances the system until the time derivative drops below
/// `config.steady_tol` in max norm or `t_max` is reached. Reaching `t_max`
/// is not an error: the outcome reports `steady = false` and classification
/// downstream labels it non-stationary.
pub fn integrate(
    params: &ModelParams,
    grid: &Grid1D,
    config: &SimConfig,
    initial: &FieldState,
) -> Result<SimOutcome> {
    params.validate()?;
    config.validate(params, grid)?;
    if initial.u.len() != grid.n || initial.v.len() != grid.n {
        return Err(Error::InvalidConfig(
            "initial state size does not match grid".into(),
        ));
    }
    match config.integrator {
        Integrator::Imex => integrate_imex(params, grid, config, initial),
        Integrator::Explicit => integrate_explicit(params, grid, config, initial),
    }
}

fn check_finite(u: &[f64], v: &[f64], t: f64) -> Result<f64> {
    let mut max = 0.0f64;
    for &val in u.iter().chain(v.iter()) {
        let a = val.abs();
        if a.is_nan() || a > BLOW_UP_LIMIT {
            return Err(Error::BlowUp { t, max: a });
        }
        max = max.max(a);
    }
    Ok(max)
}

fn integrate_imex(
    params: &ModelParams,
    grid: &Grid1D,
    config: &SimConfig,
    initial: &FieldState,
) -> Result<SimOutcome> {
    let n = grid.n;
    let dt = config.dt;
    let solver_u = ImexSolver::new(n, dt * params.d1 / (grid.h * grid.h));
    let solver_v = ImexSolver::new(n, dt * params.d2 / (grid.h * grid.h));

    let mut u = initial.u.clone();
    let mut v = initial.v.clone();
    let mut un = vec![0.0; n];
    let mut vn = vec![0.0; n];
    let mut t = initial.t;
    let n_steps = (config.t_max / dt).ceil() as usize;
    let mut history = vec![FieldState {
        t,
        u: u.clone(),
        v: v.clone(),
    }];
    let mut steady = false;
    let mut negativity_warning = false;
    let mut steps = 0;

    for step in 0..n_steps {
        for i in 0..n {
            let r = params.reaction(u[i], v[i]);
            un[i] = u[i] + dt * r[0];
            vn[i] = v[i] + dt * r[1];
        }
        solver_u.solve_in_place(&mut un);
        solver_v.solve_in_place(&mut vn);
        t += dt;
        steps = step + 1;
        check_finite(&un, &vn, t)?;

        let mut max_rate = 0.0f64;
        let mut min_val = f64::INFINITY;
        for i in 0..n {
            max_rate = max_rate.max((un[i] - u[i]).abs()).max((vn[i] - v[i]).abs());
            min_val = min_val.min(un[i]).min(vn[i]);
        }
        max_rate /= dt;
        if min_val < -1e-8 && !negativity_warning {
            log::warn!("scheme produced negative densities (min {min_val:e}) at t = {t}");
            negativity_warning = true;
        }
        std::mem::swap(&mut u, &mut un);
        std::mem::swap(&mut v, &mut vn);
        if steps % config.snapshot_stride == 0 {
            history.push(FieldState {
                t,
                u: u.clone(),
                v: v.clone(),
            });
        }
        if max_rate < config.steady_tol {
            steady = true;
            break;
        }
    }
    let final_state = FieldState { t, u, v };
    history.push(final_state.clone());
    Ok(SimOutcome {
        final_state,
        history,
        steady,
        steps,
        negativity_warning,
    })
}

fn integrate_explicit(
    params: &ModelParams,
    grid: &Grid1D,
    config: &SimConfig,
    initial: &FieldState,
) -> Result<SimOutcome> {
    let n = grid.n;
    let dt = config.dt;
    let mut u = initial.u.clone();
    let mut v = initial.v.clone();
    let mut t = initial.t;
    let n_steps = (config.t_max / dt).ceil() as usize;
    let mut history = vec![FieldState {
        t,
        u: u.clone(),
        v: v.clone(),
    }];
    let mut steady = false;
    let mut negativity_warning = false;
    let mut steps = 0;

    // classical RK4 on the full semi-discretization
    let mut lap = vec![0.0; n];
    let rhs = |uu: &[f64], vv: &[f64], out_u: &mut [f64], out_v: &mut [f64], lap: &mut [f64]| {
        laplacian_into(uu, grid.h, lap);
        for i in 0..n {
            let r = params.reaction(uu[i], vv[i]);
            out_u[i] = params.d1 * lap[i] + r[0];
        }
        laplacian_into(vv, grid.h, lap);
        for i in 0..n {
            let r = params.reaction(uu[i], vv[i]);
            out_v[i] = params.d2 * lap[i] + r[1];
        }
    };
    let mut k = vec![vec![0.0; n]; 8];
    let mut tu = vec![0.0; n];
    let mut tv = vec![0.0; n];

    for step in 0..n_steps {
        let (k1u, rest) = k.split_at_mut(1);
        let (k1v, rest) = rest.split_at_mut(1);
        let (k2u, rest) = rest.split_at_mut(1);
        let (k2v, rest) = rest.split_at_mut(1);
        let (k3u, rest) = rest.split_at_mut(1);
        let (k3v, rest) = rest.split_at_mut(1);
        let (k4u, k4v) = rest.split_at_mut(1);

        rhs(&u, &v, &mut k1u[0], &mut k1v[0], &mut lap);
        for i in 0..n {
            tu[i] = u[i] + 0.5 * dt * k1u[0][i];
            tv[i] = v[i] + 0.5 * dt * k1v[0][i];
        }
        rhs(&tu, &tv, &mut k2u[0], &mut k2v[0], &mut lap);
        for i in 0..n {
            tu[i] = u[i] + 0.5 * dt * k2u[0][i];
            tv[i] = v[i] + 0.5 * dt * k2v[0][i];
        }
        rhs(&tu, &tv, &mut k3u[0], &mut k3v[0], &mut lap);
        for i in 0..n {
            tu[i] = u[i] + dt * k3u[0][i];
            tv[i] = v[i] + dt * k3v[0][i];
        }
        rhs(&tu, &tv, &mut k4u[0], &mut k4v[0], &mut lap);

        let mut max_rate = 0.0f64;
        let mut min_val = f64::INFINITY;
        for i in 0..n {
            let du = dt / 6.0 * (k1u[0][i] + 2.0 * k2u[0][i] + 2.0 * k3u[0][i] + k4u[0][i]);
            let dv = dt / 6.0 * (k1v[0][i] + 2.0 * k2v[0][i] + 2.0 * k3v[0][i] + k4v[0][i]);
            u[i] += du;
            v[i] += dv;
            max_rate = max_rate.max(du.abs()).max(dv.abs());
            min_val = min_val.min(u[i]).min(v[i]);
        }
        max_rate /= dt;
        t += dt;
        steps = step + 1;
        check_finite(&u, &v, t)?;
        if min_val < -1e-8 && !negativity_warning {
            log::warn!("scheme produced negative densities (min {min_val:e}) at t = {t}");
            negativity_warning = true;
        }
        if steps % config.snapshot_stride == 0 {
            history.push(FieldState {
                t,
                u: u.clone(),
                v: v.clone(),
            });
        }
        if max_rate < config.steady_tol {
            steady = true;
            break;
        }
    }
    let final_state = FieldState { t, u, v };
    history.push(final_state.clone());
    Ok(SimOutcome {
        final_state,
        history,
        steady,
        steps,
        negativity_warning,
    })
}

/// Projections of `(field - E*)` onto the normalized eigenfunctions
/// `beta_0 = 1`, `beta_k = sqrt(2) cos(k x / l)`, by the trapezoid rule
/// (exactly orthogonal on the vertex grid).
#[derive(Debug, Clone, Serialize)]
pub struct ModalSignature {
    pub a_u: Vec<f64>,
    pub a_v: Vec<f64>,
}

pub const DEFAULT_K_SIG: usize = 8;

pub fn modal_signature(
    state: &FieldState,
    eq: &Equilibrium,
    grid: &Grid1D,
    k_sig: usize,
) -> ModalSignature {
    let project = |field: &[f64], base: f64, k: usize| -> f64 {
        let mut acc = 0.0;
        for (i, &x) in grid.x.iter().enumerate() {
            let beta = if k == 0 {
                1.0
            } else {
                f64::sqrt(2.0) * (k as f64 * x / grid.l).cos()
            };
            let w = if i == 0 || i == grid.n - 1 { 0.5 } else { 1.0 };
            acc += w * (field[i] - base) * beta;
        }
        acc * grid.h / (grid.l * PI)
    };
    ModalSignature {
        a_u: (0..=k_sig).map(|k| project(&state.u, eq.u, k)).collect(),
        a_v: (0..=k_sig).map(|k| project(&state.v, eq.v, k)).collect(),
    }
}

impl ModalSignature {
    /// Per-mode energy `a_u[k]^2 + a_v[k]^2` for `k >= 1`.
    pub fn mode_energy(&self, k: usize) -> f64 {
        self.a_u[k] * self.a_u[k] + self.a_v[k] * self.a_v[k]
    }

    /// Two signatures are the same attractor when every amplitude agrees to
    /// 1e-4.
    pub fn distinct_from(&self, other: &ModalSignature) -> bool {
        self.a_u
            .iter()
            .zip(&other.a_u)
            .chain(self.a_v.iter().zip(&other.a_v))
            .any(|(a, b)| (a - b).abs() > 1e-4)
    }
}

/// Classified steady state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum AttractorLabel {
    ConstantEq,
    PureMode { k: u32, sign: i8 },
    Superposition { modes: Vec<(u32, f64)> },
    NonStationary,
    Unresolved,
}

impl AttractorLabel {
    pub fn short(&self) -> String {
        match self {
            AttractorLabel::ConstantEq => "ConstantEq".into(),
            AttractorLabel::PureMode { k, sign } => {
                format!("PureMode({k},{})", if *sign >= 0 { "+" } else { "-" })
            }
            AttractorLabel::Superposition { modes } => {
                let ks: Vec<String> = modes
                    .iter()
                    .map(|(k, a)| format!("{k}{}", if *a >= 0.0 { "+" } else { "-" }))
                    .collect();
                format!("Superposition{{{}}}", ks.join(","))
            }
            AttractorLabel::NonStationary => "NonStationary".into(),
            AttractorLabel::Unresolved => "Unresolved".into(),
        }
    }
}

const CONSTANT_FLOOR: f64 = 1e-6;
const SUPERPOSITION_SHARE: f64 = 0.05;
const PURE_MODE_SHARE: f64 = 0.90;
/// Integer harmonics of the dominant mode are folded into it when their
/// amplitude is at most this fraction of the dominant amplitude. A pattern's
/// own harmonics scale like the pattern amplitude squared (ratio well below
/// 1/2 at the amplitudes reached here), while genuine superpositions carry
/// comparable amplitudes on independent modes.
const HARMONIC_RATIO: f64 = 0.5;

pub fn classify_attractor(sig: &ModalSignature, steady: bool) -> AttractorLabel {
    if !steady {
        return AttractorLabel::NonStationary;
    }
    let k_sig = sig.a_u.len() - 1;
    let peak = (1..=k_sig)
        .map(|k| sig.a_u[k].abs().max(sig.a_v[k].abs()))
        .fold(0.0, f64::max);
    if peak < CONSTANT_FLOOR {
        return AttractorLabel::ConstantEq;
    }
    let total: f64 = (1..=k_sig).map(|k| sig.mode_energy(k)).sum();
    let dominant = (1..=k_sig)
        .max_by(|&a, &b| sig.mode_energy(a).partial_cmp(&sig.mode_energy(b)).unwrap())
        .unwrap();
    // fold subdominant integer harmonics of the dominant mode into it
    let mut folded = sig.mode_energy(dominant);
    let dom_amp = sig.mode_energy(dominant).sqrt();
    for k in (2 * dominant..=k_sig).step_by(dominant) {
        if sig.mode_energy(k).sqrt() <= HARMONIC_RATIO * dom_amp {
            folded += sig.mode_energy(k);
        }
    }
    if folded >= PURE_MODE_SHARE * total {
        let sign = if sig.a_u[dominant] != 0.0 {
            sig.a_u[dominant].signum() as i8
        } else {
            sig.a_v[dominant].signum() as i8
        };
        return AttractorLabel::PureMode {
            k: dominant as u32,
            sign,
        };
    }
    let significant: Vec<(u32, f64)> = (1..=k_sig)
        .filter(|&k| sig.mode_energy(k) >= SUPERPOSITION_SHARE * total)
        .map(|k| (k as u32, sig.a_u[k]))
        .collect();
    if significant.len() >= 2 {
        AttractorLabel::Superposition { modes: significant }
    } else {
        AttractorLabel::Unresolved
    }
}

/// Initial condition as cosine-mode coefficients around constant baselines.
#[derive(Debug, Clone, Serialize)]
pub struct ModalIc {
    pub base_u: f64,
    pub modes_u: Vec<(u32, f64)>,
    pub base_v: f64,
    pub modes_v: Vec<(u32, f64)>,
}

/// A named or ad-hoc simulation setup.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub params: ModelParams,
    pub ic: ModalIc,
}

/// The reference scenarios: exact initial data and parameter values of the
/// multistability figures for both parameter sets.
pub fn builtin_scenario(name: &str) -> Result<Scenario> {
    let set1 = |d1: f64, s: f64| ModelParams {
        d1,
        s,
        ..ModelParams::set1()
    };
    let set2 = |d1: f64, s: f64| ModelParams {
        d1,
        s,
        ..ModelParams::set2()
    };
    let ic = |bu: f64, mu: &[(u32, f64)], bv: f64, mv: &[(u32, f64)]| ModalIc {
        base_u: bu,
        modes_u: mu.to_vec(),
        base_v: bv,
        modes_v: mv.to_vec(),
    };
    let (params, ic) = match name {
        "fig3a" => (
            set1(0.0051, 0.2064),
            ic(0.245, &[(2, -0.02)], 0.245, &[(2, 0.05)]),
        ),
        "fig3b" => (
            set1(0.0051, 0.2064),
            ic(0.245, &[(2, 0.02)], 0.245, &[(2, -0.05)]),
        ),
        "fig3c" => (
            set1(0.0051, 0.2064),
            ic(0.245, &[(3, -0.02)], 0.245, &[(3, 0.05)]),
        ),
        "fig3d" => (
            set1(0.0051, 0.2064),
            ic(0.245, &[(3, 0.02)], 0.245, &[(3, -0.05)]),
        ),
        "fig6a" => (
            set2(0.01195, 0.2679),
            ic(0.2716, &[(1, -0.1)], 0.2716, &[(1, -0.1)]),
        ),
        "fig6b" => (
            set2(0.01195, 0.2679),
            ic(0.2716, &[(1, 0.1)], 0.2716, &[(1, 0.1)]),
        ),
        "fig6c" => (
            set2(0.01195, 0.2679),
            ic(0.2716, &[(2, -0.02)], 0.2716, &[(2, -0.05)]),
        ),
        "fig7a" => (
            set2(0.01045, 0.3029),
            ic(0.2716, &[(1, -0.1)], 0.2716, &[(1, -0.1)]),
        ),
        "fig7b" => (
            set2(0.01045, 0.3029),
            ic(0.2716, &[(1, 0.1)], 0.2716, &[(1, 0.1)]),
        ),
        "fig7c" => (
            set2(0.01045, 0.3029),
            ic(0.2716, &[(2, 0.02)], 0.2716, &[(2, 0.05)]),
        ),
        "fig7d" => (
            set2(0.01045, 0.3029),
            ic(0.2716, &[(2, -0.02)], 0.2716, &[(2, -0.05)]),
        ),
        "fig8a" => (
            set2(0.01045, 0.2379),
            ic(0.2716, &[(1, -0.1)], 0.2716, &[(1, -0.1)]),
        ),
        "fig8b" => (
            set2(0.01045, 0.2379),
            ic(0.2716, &[(1, 0.1)], 0.2716, &[(1, 0.1)]),
        ),
        "fig8c" => (
            set2(0.01045, 0.2379),
            ic(0.2716, &[(2, 0.02)], 0.2716, &[(2, 0.05)]),
        ),
        "fig8d" => (
            set2(0.01045, 0.2379),
            ic(0.2716, &[(2, -0.02)], 0.2716, &[(2, -0.05)]),
        ),
        _ => return Err(Error::UnknownScenario(name.into())),
    };
    Ok(Scenario {
        name: name.into(),
        params,
        ic,
    })
}

pub const BUILTIN_SCENARIOS: [&str; 15] = [
    "fig3a", "fig3b", "fig3c", "fig3d", "fig6a", "fig6b", "fig6c", "fig7a", "fig7b", "fig7c",
    "fig7d", "fig8a", "fig8b", "fig8c", "fig8d",
];

#[derive(Debug, Clone)]
pub struct ScenarioResult {
    pub label: AttractorLabel,
    pub signature: ModalSignature,
    pub outcome: SimOutcome,
    pub equilibrium: Equilibrium,
}

/// Integrate, project, classify.
pub fn run_scenario(
    scenario: &Scenario,
    grid: &Grid1D,
    config: &SimConfig,
    k_sig: usize,
) -> Result<ScenarioResult> {
    let eq = crate::kinetics::find_interior_equilibrium(&scenario.params)?;
    let initial = FieldState::from_modes(
        grid,
        scenario.ic.base_u,
        &scenario.ic.modes_u,
        scenario.ic.base_v,
        &scenario.ic.modes_v,
    );
    let outcome = integrate(&scenario.params, grid, config, &initial)?;
    let signature = modal_signature(&outcome.final_state, &eq, grid, k_sig);
    let label = classify_attractor(&signature, outcome.steady);
    Ok(ScenarioResult {
        label,
        signature,
        outcome,
        equilibrium: eq,
    })
}

/// Parameter-grid sweep specification. Each cell runs a deterministic IC
/// ensemble: four caption-style single-mode perturbations plus seeded random
/// combinations of modes 1-4 with amplitude 0.05.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub base: ModelParams,
    pub d1_values: Vec<f64>,
    pub s_values: Vec<f64>,
    pub seed: u64,
    pub n_random_ic: usize,
}

/// One distinct steady state found by the ensemble.
#[derive(Debug, Clone, Serialize)]
pub struct SweepAttractor {
    pub label: AttractorLabel,
    pub signature: ModalSignature,
    /// reached by at least one fully-generic (all-mode random) initial
    /// condition. Single-mode caption ICs live in symmetry-protected
    /// subspaces and can settle on states that are unstable transversally;
    /// a `false` here marks such a candidate.
    pub generic_basin: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepCell {
    pub d1: f64,
    pub s: f64,
    /// distinct stable attractors found, with one representative signature
    pub attractors: Vec<SweepAttractor>,
    pub n_runs: usize,
    pub n_nonstationary: usize,
    pub blow_up: bool,
}

/// caption-style deterministic ICs (both signs of each family), then
/// `n_random` seeded random mode-1..4 combinations; the bool marks the
/// symmetry-breaking random ICs
fn cell_ensemble(eq: &Equilibrium, seed: u64, n_random: usize) -> Vec<(ModalIc, bool)> {
    let b = eq.u;
    let single = |k: u32, au: f64, av: f64| ModalIc {
        base_u: b,
        modes_u: vec![(k, au)],
        base_v: b,
        modes_v: vec![(k, av)],
    };
    let mut ics = vec![
        (single(1, -0.1, -0.1), false),
        (single(1, 0.1, 0.1), false),
        (single(2, 0.02, 0.05), false),
        (single(2, -0.02, -0.05), false),
        (single(2, -0.02, 0.05), false),
        (single(3, -0.02, 0.05), false),
        (single(3, 0.02, -0.05), false),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..n_random {
        let modes: Vec<(u32, f64)> = (1..=4)
            .map(|k| (k, 0.05 * rng.gen_range(-1.0..1.0)))
            .collect();
        let modes_v: Vec<(u32, f64)> = (1..=4)
            .map(|k| (k, 0.05 * rng.gen_range(-1.0..1.0)))
            .collect();
        ics.push((
            ModalIc {
                base_u: b,
                modes_u: modes,
                base_v: b,
                modes_v,
            },
            true,
        ));
    }
    ics
}

/// Runs the ensemble over every grid cell (cells in parallel, deterministic
/// row-major output; per-cell seeds derive from the spec seed and the cell
/// index, so results do not depend on scheduling).
pub fn sweep(spec: &SweepSpec, grid: &Grid1D, config: &SimConfig, k_sig: usize) -> Vec<SweepCell> {
    use rayon::prelude::*;
    let cells: Vec<(usize, f64, f64)> = spec
        .d1_values
        .iter()
        .enumerate()
        .flat_map(|(i, &d1)| {
            spec.s_values
                .iter()
                .enumerate()
                .map(move |(j, &s)| (i * 1_000_003 + j, d1, s))
        })
        .collect();
    cells
        .par_iter()
        .map(|&(cell_idx, d1, s)| {
            let params = ModelParams { d1, s, ..spec.base };
            let eq = match crate::kinetics::find_interior_equilibrium(&params) {
                Ok(eq) => eq,
                Err(_) => {
                    return SweepCell {
                        d1,
                        s,
                        attractors: Vec::new(),
                        n_runs: 0,
                        n_nonstationary: 0,
                        blow_up: true,
                    }
                }
            };
            let ics = cell_ensemble(
                &eq,
                spec.seed.wrapping_add(cell_idx as u64),
                spec.n_random_ic,
            );
            let mut attractors: Vec<SweepAttractor> = Vec::new();
            let mut blow_up = false;
            let mut n_nonstationary = 0;
            let n_runs = ics.len();
            for (ic, generic) in ics {
                let initial =
                    FieldState::from_modes(grid, ic.base_u, &ic.modes_u, ic.base_v, &ic.modes_v);
                match integrate(&params, grid, config, &initial) {
                    Ok(outcome) => {
                        let sig = modal_signature(&outcome.final_state, &eq, grid, k_sig);
                        let label = classify_attractor(&sig, outcome.steady);
                        if label == AttractorLabel::NonStationary {
                            n_nonstationary += 1;
                            continue;
                        }
                        match attractors
                            .iter_mut()
                            .find(|a| !sig.distinct_from(&a.signature))
                        {
                            Some(existing) => existing.generic_basin |= generic,
                            None => attractors.push(SweepAttractor {
                                label,
                                signature: sig,
                                generic_basin: generic,
                            }),
                        }
                    }
                    Err(Error::BlowUp { .. }) => blow_up = true,
                    Err(_) => {}
                }
            }
            SweepCell {
                d1,
                s,
                attractors,
                n_runs,
                n_nonstationary,
                blow_up,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinetics::find_interior_equilibrium;

    fn grid() -> Grid1D {
        Grid1D::new(256, 1.0).unwrap()
    }

    #[test]
    fn constant_field_has_zero_discrete_flux() {
        let g = grid();
        let f = vec![0.7; g.n];
        let mut lap = vec![0.0; g.n];
        laplacian_into(&f, g.h, &mut lap);
        for v in lap {
            assert!(v.abs() < 1e-12);
        }
    }

    #[test]
    fn equilibrium_is_fixed_point_of_scheme() {
        let p = ModelParams::set1();
        let g = grid();
        let eq = find_interior_equilibrium(&p).unwrap();
        let init = FieldState::uniform(&g, eq.u, eq.v);
        let config = SimConfig {
            t_max: 100.0,
            ..SimConfig::default()
        };
        let out = integrate(&p, &g, &config, &init).unwrap();
        assert!(out.final_state.max_abs_diff(&init) < 1e-12);
    }

    #[test]
    fn modal_projection_is_orthonormal() {
        let g = grid();
        let eq = Equilibrium { u: 0.3, v: 0.3 };
        let mut state = FieldState::uniform(&g, eq.u, eq.v);
        for (i, &x) in g.x.iter().enumerate() {
            state.u[i] += 0.1 * f64::sqrt(2.0) * (2.0 * x).cos();
        }
        let sig = modal_signature(&state, &eq, &g, 8);
        assert!((sig.a_u[2] - 0.1).abs() < 1e-10);
        for (k, a) in sig.a_u.iter().enumerate() {
            if k != 2 {
                assert!(a.abs() < 1e-10, "a_{k} = {a:e}");
            }
        }
    }

    #[test]
    fn modal_projection_recovers_two_modes_independently() {
        let g = grid();
        let eq = Equilibrium { u: 0.3, v: 0.3 };
        let mut state = FieldState::uniform(&g, eq.u, eq.v);
        for (i, &x) in g.x.iter().enumerate() {
            state.u[i] += 0.03 * x.cos() + 0.07 * (2.0 * x).cos();
        }
        let sig = modal_signature(&state, &eq, &g, 8);
        // plain cos(kx) = beta_k / sqrt(2)
        assert!((sig.a_u[1] - 0.03 / f64::sqrt(2.0)).abs() < 1e-10);
        assert!((sig.a_u[2] - 0.07 / f64::sqrt(2.0)).abs() < 1e-10);
    }

    #[test]
    fn parseval_partial_sum_bounded_by_total_norm() {
        let g = grid();
        let eq = Equilibrium { u: 0.3, v: 0.3 };
        let mut state = FieldState::uniform(&g, eq.u, eq.v);
        for (i, &x) in g.x.iter().enumerate() {
            state.u[i] += 0.05 * (3.0 * x).cos() - 0.02 * x.cos() + 0.01 * (x * 1.7).sin();
        }
        let sig = modal_signature(&state, &eq, &g, 8);
        let partial: f64 = (0..=8).map(|k| sig.a_u[k] * sig.a_u[k]).sum();
        let total: f64 =
            g.x.iter()
                .enumerate()
                .map(|(i, _)| {
                    let w = if i == 0 || i == g.n - 1 { 0.5 } else { 1.0 };
                    w * (state.u[i] - eq.u).powi(2) * g.h / (g.l * PI)
                })
                .sum();
        assert!(partial <= total + 1e-10);
    }

    #[test]
    fn reflection_equivariance_of_integrator() {
        let p = ModelParams::set1(); // fig3 parameter point
        let g = grid();
        let config = SimConfig {
            t_max: 50.0,
            snapshot_stride: 200,
            ..SimConfig::default()
        };
        let ic = FieldState::from_modes(&g, 0.245, &[(2, -0.02), (3, 0.03)], 0.245, &[(2, 0.05)]);
        let out = integrate(&p, &g, &config, &ic).unwrap();
        let out_reflected = integrate(&p, &g, &config, &ic.reflected()).unwrap();
        assert_eq!(out.history.len(), out_reflected.history.len());
        for (a, b) in out.history.iter().zip(&out_reflected.history) {
            assert!(a.reflected().max_abs_diff(b) < 1e-10);
        }
    }

    #[test]
    fn blow_up_is_reported() {
        let p = ModelParams::set1();
        let g = grid();
        let init = FieldState::uniform(&g, 5e5, 5e5);
        let out = integrate(&p, &g, &SimConfig::default(), &init);
        assert!(matches!(out, Err(Error::BlowUp { .. })));
    }

    #[test]
    fn explicit_integrator_enforces_stability_bound() {
        let p = ModelParams::set1();
        let g = grid();
        let config = SimConfig {
            integrator: Integrator::Explicit,
            ..SimConfig::default()
        };
        let init = FieldState::uniform(&g, 0.3, 0.3);
        assert!(matches!(
            integrate(&p, &g, &config, &init),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn explicit_and_imex_agree_on_smooth_short_run() {
        let p = ModelParams {
            d1: 0.004,
            d2: 0.004,
            ..ModelParams::set1()
        };
        let g = Grid1D::new(96, 1.0).unwrap();
        let ic = FieldState::from_modes(&g, 0.245, &[(2, -0.02)], 0.245, &[(2, 0.05)]);
        let dt_ok = 0.4 * g.h * g.h / 0.004;
        let dt = (dt_ok * 0.9).min(0.002);
        let run = |integrator| {
            let config = SimConfig {
                dt,
                t_max: 2.0,
                integrator,
                ..SimConfig::default()
            };
            integrate(&p, &g, &config, &ic).unwrap().final_state
        };
        let a = run(Integrator::Imex);
        let b = run(Integrator::Explicit);
        // first-order IMEX vs RK4: difference is O(dt) over a short horizon
        assert!(a.max_abs_diff(&b) < 5.0 * dt);
    }

    #[test]
    fn classifier_detects_constant_state() {
        let sig = ModalSignature {
            a_u: vec![1e-9; 9],
            a_v: vec![1e-9; 9],
        };
        assert_eq!(classify_attractor(&sig, true), AttractorLabel::ConstantEq);
        assert_eq!(
            classify_attractor(&sig, false),
            AttractorLabel::NonStationary
        );
    }

    #[test]
    fn classifier_folds_harmonics_into_pure_mode() {
        // mode 2 with a 35% mode-4 harmonic is still a mode-2 pattern
        let mut a_u = vec![0.0; 9];
        a_u[2] = -0.05;
        a_u[4] = -0.0175;
        let sig = ModalSignature {
            a_u,
            a_v: vec![0.0; 9],
        };
        assert_eq!(
            classify_attractor(&sig, true),
            AttractorLabel::PureMode { k: 2, sign: -1 }
        );
    }

    #[test]
    fn classifier_keeps_comparable_modes_as_superposition() {
        let mut a_u = vec![0.0; 9];
        a_u[1] = -0.035;
        a_u[2] = -0.034;
        let sig = ModalSignature {
            a_u,
            a_v: vec![0.0; 9],
        };
        match classify_attractor(&sig, true) {
            AttractorLabel::Superposition { modes } => {
                let ks: Vec<u32> = modes.iter().map(|m| m.0).collect();
                assert_eq!(ks, vec![1, 2]);
            }
            other => panic!("expected superposition, got {other:?}"),
        }
    }

    #[test]
    fn fig3a_converges_to_mode_two_pattern() {
        let scen = builtin_scenario("fig3a").unwrap();
        let g = grid();
        let res = run_scenario(&scen, &g, &SimConfig::default(), DEFAULT_K_SIG).unwrap();
        assert!(res.outcome.steady);
        assert!(matches!(
            res.label,
            AttractorLabel::PureMode { k: 2, sign: -1 }
        ));
        // the mode-3 content is far below the mode-2 content
        assert!(res.signature.a_u[3].abs() / res.signature.a_u[2].abs() < 0.1);
    }

    #[test]
    fn reflected_ic_yields_reflected_attractor() {
        // u0(pi - x) flips the sign of odd-mode amplitudes only
        let scen = builtin_scenario("fig6a").unwrap();
        let g = grid();
        let config = SimConfig::default();
        let res = run_scenario(&scen, &g, &config, DEFAULT_K_SIG).unwrap();
        let eq = res.equilibrium;
        let init = FieldState::from_modes(
            &g,
            scen.ic.base_u,
            &scen.ic.modes_u,
            scen.ic.base_v,
            &scen.ic.modes_v,
        )
        .reflected();
        let out = integrate(&scen.params, &g, &config, &init).unwrap();
        let sig = modal_signature(&out.final_state, &eq, &g, DEFAULT_K_SIG);
        for k in 0..=DEFAULT_K_SIG {
            let parity = if k % 2 == 0 { 1.0 } else { -1.0 };
            assert!(
                (sig.a_u[k] - parity * res.signature.a_u[k]).abs() < 1e-8,
                "mode {k}: {} vs {}",
                sig.a_u[k],
                res.signature.a_u[k]
            );
        }
    }

    #[test]
    fn dt_halving_leaves_steady_state_unchanged() {
        let scen = builtin_scenario("fig3a").unwrap();
        let g = grid();
        let coarse = run_scenario(&scen, &g, &SimConfig::default(), 8).unwrap();
        let fine_config = SimConfig {
            dt: 0.025,
            ..SimConfig::default()
        };
        let fine = run_scenario(&scen, &g, &fine_config, 8).unwrap();
        assert!(
            coarse
                .outcome
                .final_state
                .max_abs_diff(&fine.outcome.final_state)
                < 1e-6
        );
    }

    #[test]
    fn unknown_scenario_is_an_error() {
        assert!(matches!(
            builtin_scenario("fig9z"),
            Err(Error::UnknownScenario(_))
        ));
    }
}
