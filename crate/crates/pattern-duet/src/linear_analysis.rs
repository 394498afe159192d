//! Dispersion relation, Turing curves, Turing-Turing point location, critical
//! mode index, critical eigenvectors, and spectral side-condition checks.
//!
//! Mode `k` lives on `(0, l*pi)` with Neumann conditions; the Laplacian
//! eigenvalue is `mu_k = k^2 / l^2` and the per-mode characteristic
//! polynomial is `P_k(lambda) = lambda^2 - Theta(k) lambda + Delta(k)`.

use crate::error::Error;
use crate::kinetics::{Linearization, ModelParams};
use crate::Result;
use nalgebra::{Matrix2, RowVector2, Vector2};
use serde::{Deserialize, Serialize};

pub use crate::kinetics::linearize;

/// One sample of the dispersion relation.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DispersionPoint {
    pub k: u32,
    /// trace `Theta(k) = s0 - s - (d1 + d2) k^2/l^2`
    pub theta: f64,
    /// determinant `Delta(k) = d1 d2 k^4/l^4 + (s d1 - s0 d2) k^2/l^2 - s (s0 + sigma)`
    pub delta: f64,
}

/// Evaluates `Theta(k)` and `Delta(k)`.
pub fn dispersion(params: &ModelParams, lin: &Linearization, k: u32) -> DispersionPoint {
    let mu = mu_k(k, params.l);
    let (s0, sigma, s) = (lin.s0, lin.sigma, params.s);
    DispersionPoint {
        k,
        theta: s0 - s - (params.d1 + params.d2) * mu,
        delta: params.d1 * params.d2 * mu * mu + (s * params.d1 - s0 * params.d2) * mu
            - s * (s0 + sigma),
    }
}

pub fn mu_k(k: u32, l: f64) -> f64 {
    let kf = f64::from(k);
    kf * kf / (l * l)
}

/// The Turing curve `L_k` in the `d1`-`s` plane: the locus where
/// `Delta(k) = 0`, valid on `0 < d1 < s0 l^2 / k^2`.
#[derive(Debug, Clone)]
pub struct TuringCurve {
    pub k: u32,
    mu: f64,
    s0: f64,
    sigma: f64,
    d2: f64,
    /// sampled `(d1, s)` pairs, increasing in `d1`
    pub samples: Vec<(f64, f64)>,
}

impl TuringCurve {
    /// Closed-form evaluator `s = s_k(d1) = (s0 d2 mu - d1 d2 mu^2) / (d1 mu - (s0 + sigma))`.
    pub fn eval(&self, d1: f64) -> Result<f64> {
        if d1 <= 0.0 || d1 >= self.s0 / self.mu {
            return Err(Error::DomainError(format!(
                "d1 = {d1} outside Turing-curve validity window (0, {})",
                self.s0 / self.mu
            )));
        }
        Ok(
            (self.s0 * self.d2 * self.mu - d1 * self.d2 * self.mu * self.mu)
                / (d1 * self.mu - (self.s0 + self.sigma)),
        )
    }
}

/// Samples the mode-`k` Turing curve at `n` points across its validity window.
pub fn turing_curve(
    params: &ModelParams,
    lin: &Linearization,
    k: u32,
    n: usize,
) -> Result<TuringCurve> {
    if lin.s0 <= 0.0 {
        return Err(Error::HypothesisViolated(
            "s0 > 0 required for Turing curves".into(),
        ));
    }
    let mu = mu_k(k, params.l);
    let mut curve = TuringCurve {
        k,
        mu,
        s0: lin.s0,
        sigma: lin.sigma,
        d2: params.d2,
        samples: Vec::with_capacity(n),
    };
    let d_max = lin.s0 / mu;
    for i in 0..n {
        // open interval: keep clear of both endpoints
        let d1 = d_max * (i as f64 + 0.5) / (n as f64 + 1.0);
        let s = curve.eval(d1)?;
        curve.samples.push((d1, s));
    }
    Ok(curve)
}

/// Codimension-2 `(k1, k2)`-mode Turing-Turing bifurcation point.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TTPoint {
    pub k1: u32,
    pub k2: u32,
    pub d_star: f64,
    pub s_star: f64,
}

/// Closed-form Turing-Turing point of modes `(i, j)`:
///
/// ```text
/// d*_{i,j} = [(mu_i + mu_j)(s0 + sigma) + sqrt((mu_i + mu_j)^2 (s0 + sigma)^2
///             - 4 mu_i mu_j (s0 + sigma) s0)] / (2 mu_i mu_j)
/// s*_{i,j} = (s0 d2 mu_i - d* d2 mu_i^2) / (d* mu_i - (s0 + sigma))
/// ```
///
/// Requires `s0 > 0` and `s0 + sigma < 0`; at the returned point
/// `Delta(i) = Delta(j) = 0`.
pub fn tt_point(params: &ModelParams, lin: &Linearization, i: u32, j: u32) -> Result<TTPoint> {
    if i == j || i == 0 || j == 0 {
        return Err(Error::InvalidModePair {
            k1: i.min(j),
            k2: i.max(j),
        });
    }
    if lin.s0 <= 0.0 {
        return Err(Error::HypothesisViolated(format!(
            "s0 = {} must be > 0",
            lin.s0
        )));
    }
    let cap = lin.s0 + lin.sigma;
    if cap >= 0.0 {
        return Err(Error::HypothesisViolated(format!(
            "s0 + sigma = {cap} must be < 0"
        )));
    }
    let (k1, k2) = (i.min(j), i.max(j));
    let (mu1, mu2) = (mu_k(k1, params.l), mu_k(k2, params.l));
    let disc = (mu1 + mu2).powi(2) * cap * cap - 4.0 * mu1 * mu2 * cap * lin.s0;
    let d_star = ((mu1 + mu2) * cap + disc.sqrt()) / (2.0 * mu1 * mu2);
    if d_star.is_nan() || d_star <= 0.0 {
        return Err(Error::NegativeCritical(format!(
            "d*_{{{k1},{k2}}} = {d_star}"
        )));
    }
    let s_star = (lin.s0 * params.d2 * mu1 - d_star * params.d2 * mu1 * mu1) / (d_star * mu1 - cap);
    if s_star.is_nan() || s_star <= 0.0 {
        return Err(Error::NegativeCritical(format!(
            "s*_{{{k1},{k2}}} = {s_star}"
        )));
    }
    Ok(TTPoint {
        k1,
        k2,
        d_star,
        s_star,
    })
}

/// `k0* = max{ xi : d_xi* = max_k d_k* }` with
/// `d_k* = (s0 / mu_k)(1 + sigma / (d2 mu_k + s0))`. Ties resolve to the
/// larger index; the scan extends past the default cutoff until the tail is
/// decreasing.
pub fn critical_mode_index(params: &ModelParams, lin: &Linearization) -> Result<u32> {
    if lin.s0 <= 0.0 || lin.s0 + lin.sigma >= 0.0 {
        return Err(Error::HypothesisViolated(
            "critical mode index requires s0 > 0 and s0 + sigma < 0".into(),
        ));
    }
    let dk = |k: u32| {
        let mu = mu_k(k, params.l);
        (lin.s0 / mu) * (1.0 + lin.sigma / (params.d2 * mu + lin.s0))
    };
    let mut best_k = 1;
    let mut best = dk(1);
    let mut k = 2;
    let mut decreasing = 0;
    while decreasing < 8 && k < 10_000 {
        let v = dk(k);
        if v >= best {
            best = v;
            best_k = k;
            decreasing = 0;
        } else {
            decreasing += 1;
        }
        k += 1;
    }
    Ok(best_k)
}

/// Critical eigendata at a Turing-Turing point: right/left null vectors of
/// the characteristic matrices of the two zero modes, normalized so that
/// `psi_j phi_j = 1`, plus the characteristic-matrix evaluator.
#[derive(Debug, Clone)]
pub struct CriticalData {
    pub tt: TTPoint,
    pub phi1: Vector2<f64>,
    pub phi2: Vector2<f64>,
    pub psi1: RowVector2<f64>,
    pub psi2: RowVector2<f64>,
    pub mu1: f64,
    pub mu2: f64,
    /// diffusion matrix at the critical point: `diag(d*, d2)`
    pub d0: Matrix2<f64>,
    /// linear part at the critical point: `[[s0, sigma], [s*, -s*]]`
    pub l0: Matrix2<f64>,
    pub l: f64,
}

impl CriticalData {
    /// `Delta(0, mu_k) = mu_k D0 - L0`.
    pub fn char_matrix(&self, k: u32) -> Matrix2<f64> {
        mu_k(k, self.l) * self.d0 - self.l0
    }

    /// Right/left critical pair for `j = 1 | 2`.
    pub fn pair(&self, j: u8) -> (Vector2<f64>, RowVector2<f64>, f64) {
        match j {
            1 => (self.phi1, self.psi1, self.mu1),
            2 => (self.phi2, self.psi2, self.mu2),
            _ => panic!("critical index must be 1 or 2"),
        }
    }

    pub fn critical_mode(&self, j: u8) -> u32 {
        if j == 1 {
            self.tt.k1
        } else {
            self.tt.k2
        }
    }
}

/// Evaluates the closed-form eigenvectors
///
/// ```text
/// phi_j = (1, s*/(d2 mu_kj + s*)),   psi_j = (1, (d* mu_kj - s0)/s*) / N_j,
/// N_j = 1 + (d* mu_kj - s0)/(d2 mu_kj + s*)
/// ```
///
/// and verifies the four null-vector residuals and both normalizations.
pub fn critical_eigenvectors(
    params: &ModelParams,
    lin: &Linearization,
    tt: &TTPoint,
) -> Result<CriticalData> {
    let (mu1, mu2) = (mu_k(tt.k1, params.l), mu_k(tt.k2, params.l));
    let (d_star, s_star) = (tt.d_star, tt.s_star);

    let phi_psi = |mu: f64, index: u8| -> Result<(Vector2<f64>, RowVector2<f64>)> {
        let phi = Vector2::new(1.0, s_star / (params.d2 * mu + s_star));
        let n = 1.0 + (d_star * mu - lin.s0) / (params.d2 * mu + s_star);
        if n.abs() < 1e-10 {
            return Err(Error::SingularNormalizer { index, value: n });
        }
        let psi = RowVector2::new(1.0 / n, (d_star * mu - lin.s0) / (s_star * n));
        Ok((phi, psi))
    };
    let (phi1, psi1) = phi_psi(mu1, 1)?;
    let (phi2, psi2) = phi_psi(mu2, 2)?;

    let data = CriticalData {
        tt: *tt,
        phi1,
        phi2,
        psi1,
        psi2,
        mu1,
        mu2,
        d0: Matrix2::new(d_star, 0.0, 0.0, params.d2),
        l0: Matrix2::new(lin.s0, lin.sigma, s_star, -s_star),
        l: params.l,
    };
    for (j, phi, psi) in [(1u8, phi1, psi1), (2, phi2, psi2)] {
        let m = data.char_matrix(data.critical_mode(j));
        if (m * phi).norm() >= 1e-10 || (psi * m).norm() >= 1e-10 {
            return Err(Error::HypothesisViolated(format!(
                "mode {} null-vector residual above 1e-10; not a Turing-Turing point",
                data.critical_mode(j)
            )));
        }
        debug_assert!(((psi * phi)[0] - 1.0).abs() < 1e-12);
    }
    Ok(data)
}

/// Real parts of the eigenvalues of `-mu_k D0 + L0` for one mode.
fn mode_eig_real_parts(theta: f64, delta: f64) -> (f64, f64) {
    let disc = theta * theta - 4.0 * delta;
    if disc >= 0.0 {
        let r = disc.sqrt();
        (0.5 * (theta + r), 0.5 * (theta - r))
    } else {
        (0.5 * theta, 0.5 * theta)
    }
}

/// Outcome of the spectral side-condition scan at a Turing-Turing point.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    /// modes whose characteristic matrix carries a zero eigenvalue
    pub zero_modes: Vec<u32>,
    /// modes (other than the two critical ones) with eigenvalue real part
    /// `>= -margin_floor`
    pub offending: Vec<u32>,
    /// `min over non-critical k <= k_cut of -max Re(lambda_k)`
    pub margin: f64,
    pub k_cut: u32,
    pub ok: bool,
}

impl SpectrumReport {
    pub fn ensure_ok(&self) -> Result<()> {
        if self.ok {
            Ok(())
        } else {
            let mut modes = self.offending.clone();
            if self.zero_modes.len() != 2 {
                modes.extend(&self.zero_modes);
            }
            Err(Error::SideConditionFailed { modes })
        }
    }
}

/// Verifies that at `(d1, s) = (d*, s*)` exactly the modes `k1, k2` carry
/// zero eigenvalues and every other mode up to `k_cut` is strictly stable.
pub fn spectrum_check(
    params: &ModelParams,
    lin: &Linearization,
    tt: &TTPoint,
    k_cut: u32,
) -> SpectrumReport {
    let at_tt = params.at_tt_point(tt.d_star, tt.s_star);
    let zero_tol = 1e-8;
    let mut zero_modes = Vec::new();
    let mut offending = Vec::new();
    let mut margin = f64::INFINITY;
    for k in 0..=k_cut {
        let dp = dispersion(&at_tt, lin, k);
        if dp.delta.abs() < zero_tol && dp.theta < 0.0 {
            zero_modes.push(k);
            continue;
        }
        let (re1, re2) = mode_eig_real_parts(dp.theta, dp.delta);
        let max_re = re1.max(re2);
        if max_re >= 0.0 {
            offending.push(k);
        }
        margin = margin.min(-max_re);
    }
    let ok = zero_modes == vec![tt.k1, tt.k2] && offending.is_empty() && margin > 0.0;
    SpectrumReport {
        zero_modes,
        offending,
        margin,
        k_cut,
        ok,
    }
}
