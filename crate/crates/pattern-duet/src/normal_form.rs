//! Third-order normal form coefficients of the Turing-Turing bifurcation,
//! dispatching on the spatial resonance of the two critical modes.
//!
//! The three cases carry different term sets:
//!
//! * generic (`k2 != 2 k1, 3 k1`): odd cubic field, no quadratic terms;
//! * 1:2 (`k2 = 2 k1`): quadratic pair `g1100^11 z1 z2`, `g2000^12 z1^2`,
//!   and two center-manifold blocks whose characteristic matrices are
//!   singular - those are solved as bordered systems enforcing the kernel
//!   orthogonality constraints exactly;
//! * 1:3 (`k2 = 3 k1`): extra cubic cross terms `g2100^11 z1^2 z2`,
//!   `g3000^12 z1^3`, all blocks nonsingular.
//!
//! For a reaction-diffusion system (no delay) the quadratic and cubic forms
//! act on present-time values only, so every center-manifold function enters
//! through its value at `theta = 0`; the `theta`-linear parts are never
//! materialized. Linear-in-epsilon coefficients use the effective convention
//! `g = psi(0) (L_eps phi - mu D_eps phi(0))`, which reproduces the worked
//! reference coefficients and is frozen by regression tests.

use crate::error::Error;
use crate::kinetics::KineticsModel;
use crate::linear_analysis::{CriticalData, TTPoint};
use crate::Result;
use nalgebra::{Matrix2, Matrix3, Vector2, Vector3};
use serde::Serialize;
use std::f64::consts::SQRT_2;

/// Spatial resonance of the critical mode pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ResonanceCase {
    Generic,
    OneTwo,
    OneThree,
}

/// Exact integer classification: `OneTwo` iff `k2 = 2 k1`, `OneThree` iff
/// `k2 = 3 k1`, `Generic` otherwise.
pub fn classify_resonance(k1: u32, k2: u32) -> Result<ResonanceCase> {
    if k1 < 1 || k2 <= k1 {
        return Err(Error::InvalidModePair { k1, k2 });
    }
    Ok(if k2 == 2 * k1 {
        ResonanceCase::OneTwo
    } else if k2 == 3 * k1 {
        ResonanceCase::OneThree
    } else {
        ResonanceCase::Generic
    })
}

const COND_LIMIT: f64 = 1e12;

/// Solves `Delta(0, mu_k) h = rhs` for a non-critical mode `k`. A condition
/// number beyond 1e12 signals a resonant mode routed to the wrong solver or
/// a third critical mode.
pub fn solve_block_nonresonant(
    critical: &CriticalData,
    k: u32,
    rhs: &Vector2<f64>,
) -> Result<Vector2<f64>> {
    let m = critical.char_matrix(k);
    let sv = m.svd(false, false).singular_values;
    let cond = sv[0] / sv[1];
    if !cond.is_finite() || cond > COND_LIMIT {
        return Err(Error::UnexpectedSingularity { k, cond });
    }
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    Ok(Vector2::new(
        (m[(1, 1)] * rhs[0] - m[(0, 1)] * rhs[1]) / det,
        (m[(0, 0)] * rhs[1] - m[(1, 0)] * rhs[0]) / det,
    ))
}

/// Removes the kernel component: `(I - phi_j psi_j) rhs`.
pub fn project_out_kernel(critical: &CriticalData, j: u8, rhs: &Vector2<f64>) -> Vector2<f64> {
    let (phi, psi, _) = critical.pair(j);
    rhs - phi * (psi * rhs)[(0, 0)]
}

/// Solves the singular block at critical mode `j` through the bordered
/// system `[Delta, phi_j; psi_j, 0] [h; lambda] = [(I - phi_j psi_j) rhs; 0]`,
/// which enforces `psi_j h = 0` exactly. The projection is idempotent, so
/// the right-hand side may be passed raw or already projected.
pub fn solve_block_resonant(
    critical: &CriticalData,
    j: u8,
    rhs: &Vector2<f64>,
) -> Result<Vector2<f64>> {
    let (phi, psi, _) = critical.pair(j);
    let k = critical.critical_mode(j);
    let m = critical.char_matrix(k);
    let projected = project_out_kernel(critical, j, rhs);
    let bordered = Matrix3::new(
        m[(0, 0)],
        m[(0, 1)],
        phi[0],
        m[(1, 0)],
        m[(1, 1)],
        phi[1],
        psi[0],
        psi[1],
        0.0,
    );
    let b = Vector3::new(projected[0], projected[1], 0.0);
    let sol = bordered
        .lu()
        .solve(&b)
        .ok_or(Error::BorderedSolveFailed { k })?;
    Ok(Vector2::new(sol[0], sol[1]))
}

/// The second-order center-manifold blocks entering the cubic coefficients,
/// all evaluated at `theta = 0`.
#[derive(Debug, Clone, Copy)]
pub struct CenterManifoldBlocks {
    /// mode-0 block of `h2000`
    pub h2000_0: Vector2<f64>,
    /// mode-0 block of `h0200`
    pub h0200_0: Vector2<f64>,
    /// mode-`2k1` block of `h2000` (bordered solve in the 1:2 case)
    pub h2000_2k1: Vector2<f64>,
    /// mode-`2k2` block of `h0200`
    pub h0200_2k2: Vector2<f64>,
    /// mode-`|k2-k1|` block of `h1100` (bordered solve in the 1:2 case)
    pub h1100_diff: Vector2<f64>,
    /// mode-`k2+k1` block of `h1100`
    pub h1100_sum: Vector2<f64>,
}

/// Solves all six blocks for the resonance case of `critical.tt`.
pub fn center_manifold_blocks(
    critical: &CriticalData,
    model: &KineticsModel,
) -> Result<CenterManifoldBlocks> {
    let tt = critical.tt;
    let case = classify_resonance(tt.k1, tt.k2)?;
    let (phi1, phi2) = (critical.phi1, critical.phi2);
    let q11 = model.q(&phi1, &phi1);
    let q12 = model.q(&phi1, &phi2);
    let q22 = model.q(&phi2, &phi2);
    let half_rt2 = SQRT_2 / 2.0;

    let h2000_0 = solve_block_nonresonant(critical, 0, &q11)?;
    let h0200_0 = solve_block_nonresonant(critical, 0, &q22)?;
    let h1100_sum = solve_block_nonresonant(critical, tt.k1 + tt.k2, &(half_rt2 * q12))?;
    let h0200_2k2 = solve_block_nonresonant(critical, 2 * tt.k2, &(half_rt2 * q22))?;
    let (h2000_2k1, h1100_diff) = match case {
        ResonanceCase::OneTwo => (
            solve_block_resonant(critical, 2, &(half_rt2 * q11))?,
            solve_block_resonant(critical, 1, &(half_rt2 * q12))?,
        ),
        _ => (
            solve_block_nonresonant(critical, 2 * tt.k1, &(half_rt2 * q11))?,
            solve_block_nonresonant(critical, tt.k2 - tt.k1, &(half_rt2 * q12))?,
        ),
    };
    Ok(CenterManifoldBlocks {
        h2000_0,
        h0200_0,
        h2000_2k1,
        h0200_2k2,
        h1100_diff,
        h1100_sum,
    })
}

/// Case-specific extra coefficients; the variants structurally exclude
/// the terms the other cases do not have.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CaseTerms {
    Generic,
    OneTwo { g1100_11: f64, g2000_12: f64 },
    OneThree { g2100_11: f64, g3000_12: f64 },
}

/// Raw normal-form coefficients (center-manifold subscript convention,
/// without the
/// `1/q!` display factors).
#[derive(Debug, Clone)]
pub struct NfCoefficients {
    pub tt: TTPoint,
    pub resonance: ResonanceCase,
    /// `[[g1010^11, g1001^11], [g0110^12, g0101^12]]`
    pub lin: Matrix2<f64>,
    pub g3000_11: f64,
    pub g1200_11: f64,
    pub g2100_12: f64,
    pub g0300_12: f64,
    pub case: CaseTerms,
}

impl NfCoefficients {
    /// Display coefficient of `z1^3` in the truncated field (`g3000^11 / 6`).
    pub fn z1_cubed(&self) -> f64 {
        self.g3000_11 / 6.0
    }
    /// Display coefficient of `z1 z2^2` (`g1200^11 / 2`).
    pub fn z1_z2sq(&self) -> f64 {
        self.g1200_11 / 2.0
    }
    /// Display coefficient of `z1^2 z2` in the second equation (`g2100^12 / 2`).
    pub fn z1sq_z2(&self) -> f64 {
        self.g2100_12 / 2.0
    }
    /// Display coefficient of `z2^3` (`g0300^12 / 6`).
    pub fn z2_cubed(&self) -> f64 {
        self.g0300_12 / 6.0
    }

    fn all_values(&self) -> Vec<f64> {
        let mut v = vec![
            self.lin[(0, 0)],
            self.lin[(0, 1)],
            self.lin[(1, 0)],
            self.lin[(1, 1)],
            self.g3000_11,
            self.g1200_11,
            self.g2100_12,
            self.g0300_12,
        ];
        match self.case {
            CaseTerms::Generic => {}
            CaseTerms::OneTwo { g1100_11, g2000_12 } => v.extend([g1100_11, g2000_12]),
            CaseTerms::OneThree { g2100_11, g3000_12 } => v.extend([g2100_11, g3000_12]),
        }
        v
    }
}

/// Computes every coefficient of the active resonance case's formula set.
/// `model` must be built at the critical parameter values of `tt`.
pub fn compute_nf(
    tt: &TTPoint,
    critical: &CriticalData,
    model: &KineticsModel,
) -> Result<NfCoefficients> {
    let resonance = classify_resonance(tt.k1, tt.k2)?;
    let (phi1, phi2) = (critical.phi1, critical.phi2);
    let (psi1, psi2) = (critical.psi1, critical.psi2);
    let rt2 = SQRT_2;

    // linear-in-epsilon coefficients, effective factor 1 (see module docs)
    let g_lin = |j: u8, i: usize| {
        let (phi, psi, mu) = critical.pair(j);
        (psi * (model.l_eps(i) * phi - mu * model.d_eps(i) * phi))[(0, 0)]
    };
    let lin = Matrix2::new(g_lin(1, 0), g_lin(1, 1), g_lin(2, 0), g_lin(2, 1));

    let blocks = center_manifold_blocks(critical, model)?;
    let dot1 = |v: Vector2<f64>| (psi1 * v)[(0, 0)];
    let dot2 = |v: Vector2<f64>| (psi2 * v)[(0, 0)];

    let g3000_11 = 1.5 * dot1(model.c(&phi1, &phi1, &phi1))
        + 3.0 * dot1(model.q(&phi1, &(blocks.h2000_0 + blocks.h2000_2k1 / rt2)));
    let g1200_11 = dot1(model.c(&phi1, &phi2, &phi2))
        + rt2 * dot1(model.q(&phi2, &(blocks.h1100_diff + blocks.h1100_sum)))
        + dot1(model.q(&phi1, &blocks.h0200_0));
    let g2100_12 = dot2(model.c(&phi1, &phi1, &phi2))
        + rt2 * dot2(model.q(&phi1, &(blocks.h1100_diff + blocks.h1100_sum)))
        + dot2(model.q(&phi2, &blocks.h2000_0));
    let g0300_12 = 1.5 * dot2(model.c(&phi2, &phi2, &phi2))
        + 3.0 * dot2(model.q(&phi2, &(blocks.h0200_0 + blocks.h0200_2k2 / rt2)));

    let case = match resonance {
        ResonanceCase::Generic => CaseTerms::Generic,
        ResonanceCase::OneTwo => CaseTerms::OneTwo {
            g1100_11: dot1(model.q(&phi1, &phi2)) / rt2,
            g2000_12: dot2(model.q(&phi1, &phi1)) / rt2,
        },
        ResonanceCase::OneThree => CaseTerms::OneThree {
            g2100_11: 0.5 * dot1(model.c(&phi1, &phi1, &phi2))
                + rt2 * dot1(model.q(&phi1, &blocks.h1100_diff))
                + dot1(model.q(&phi1, &blocks.h2000_2k1)) / rt2,
            g3000_12: 0.5 * dot2(model.c(&phi1, &phi1, &phi1))
                + 3.0 / rt2 * dot2(model.q(&phi1, &blocks.h2000_2k1)),
        },
    };

    let out = NfCoefficients {
        tt: *tt,
        resonance,
        lin,
        g3000_11,
        g1200_11,
        g2100_12,
        g0300_12,
        case,
    };
    if let Some(bad) = out.all_values().iter().find(|v| !v.is_finite()) {
        return Err(Error::NonFiniteCoefficient(format!("{bad}")));
    }
    Ok(out)
}

/// One-call pipeline from model parameters and a mode pair to coefficients.
pub fn normal_form_at(
    params: &crate::kinetics::ModelParams,
    k1: u32,
    k2: u32,
) -> Result<(CriticalData, NfCoefficients)> {
    let eq = crate::kinetics::find_interior_equilibrium(params)?;
    let lin = crate::kinetics::linearize(params, &eq);
    let tt = crate::linear_analysis::tt_point(params, &lin, k1, k2)?;
    let critical = crate::linear_analysis::critical_eigenvectors(params, &lin, &tt)?;
    let at_tt = params.at_tt_point(tt.d_star, tt.s_star);
    let model = KineticsModel::crowley_martin(&at_tt)?;
    let nf = compute_nf(&tt, &critical, &model)?;
    Ok((critical, nf))
}
