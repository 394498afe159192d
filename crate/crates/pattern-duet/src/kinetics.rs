//! Reaction kinetics: the built-in Crowley-Martin predator-prey model plus a
//! generic user-supplied reaction field, their equilibria, and every
//! derivative structure needed downstream (Jacobian, symmetric bilinear `Q`,
//! symmetric trilinear `C`, parameter-derivative matrices).
//!
//! The nondimensionalized system is
//!
//! ```text
//! du/dt - d1 Lu = u(1 - u) - m u v / ((1 + a u)(1 + b v))
//! dv/dt - d2 Lv = s v (1 - v / u)
//! ```
//!
//! on `(0, l*pi)` with Neumann boundary conditions. `Q` and `C` are the true
//! second and third Frechet derivatives of the reaction field at the interior
//! equilibrium; they are stored as symmetric coefficient tensors and agree
//! with central finite differences of the field by construction.

use crate::error::Error;
use crate::Result;
use nalgebra::{Matrix2, RowVector2, Vector2};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Model parameters of the scaled system. `d1` and `s` double as the two
/// bifurcation parameters downstream.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    /// Capture-rate scale.
    pub m: f64,
    /// Handling-time coefficient.
    pub a: f64,
    /// Predator-interference coefficient.
    pub b: f64,
    /// Predator intrinsic growth rate.
    pub s: f64,
    /// Prey diffusion coefficient.
    pub d1: f64,
    /// Predator diffusion coefficient.
    pub d2: f64,
    /// Domain scale: the interval is `(0, l*pi)`.
    #[serde(default = "default_domain_scale")]
    pub l: f64,
}

fn default_domain_scale() -> f64 {
    1.0
}

impl ModelParams {
    /// First reference parameter set (`m=6, a=3, b=0.5, d2=0.7`), completed with
    /// the figure values `(d1, s) = (0.0051, 0.2064)`.
    pub fn set1() -> Self {
        Self {
            m: 6.0,
            a: 3.0,
            b: 0.5,
            s: 0.2064,
            d1: 0.0051,
            d2: 0.7,
            l: 1.0,
        }
    }

    /// Second reference parameter set (`m=5, a=3, b=0.1, d2=4`), completed with
    /// the figure values `(d1, s) = (0.01195, 0.2679)`.
    pub fn set2() -> Self {
        Self {
            m: 5.0,
            a: 3.0,
            b: 0.1,
            s: 0.2679,
            d1: 0.01195,
            d2: 4.0,
            l: 1.0,
        }
    }

    /// Validates positivity constraints. The interior-equilibrium existence
    /// condition `a + b >= ab` is checked separately by the equilibrium
    /// solver (warning only when a root is still found).
    pub fn validate(&self) -> Result<()> {
        let checks = [
            (self.m >= 0.0, "m must be >= 0"),
            (self.a >= 0.0, "a must be >= 0"),
            (self.b >= 0.0, "b must be >= 0"),
            (self.s > 0.0, "s must be > 0"),
            (self.d1 > 0.0, "d1 must be > 0"),
            (self.d2 > 0.0, "d2 must be > 0"),
            (self.l > 0.0, "l must be > 0"),
        ];
        for (ok, msg) in checks {
            if !ok {
                return Err(Error::InvalidParams(msg.into()));
            }
        }
        for (val, name) in [
            (self.m, "m"),
            (self.a, "a"),
            (self.b, "b"),
            (self.s, "s"),
            (self.d1, "d1"),
            (self.d2, "d2"),
            (self.l, "l"),
        ] {
            if !val.is_finite() {
                return Err(Error::InvalidParams(format!("{name} is not finite")));
            }
        }
        Ok(())
    }

    /// Same kinetics with `(d1, s)` moved to a Turing-Turing point. Normal
    /// form coefficients must be evaluated at the critical parameter values.
    pub fn at_tt_point(&self, d_star: f64, s_star: f64) -> Self {
        Self {
            d1: d_star,
            s: s_star,
            ..*self
        }
    }

    /// Crowley-Martin reaction field at `(u, v)`.
    pub fn reaction(&self, u: f64, v: f64) -> Vector2<f64> {
        Vector2::new(
            u * (1.0 - u) - self.m * u * v / ((1.0 + self.a * u) * (1.0 + self.b * v)),
            self.s * v * (1.0 - v / u),
        )
    }
}

/// Interior equilibrium `E* = (u*, v*)`; the built-in model forces `v* = u*`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Equilibrium {
    pub u: f64,
    pub v: f64,
}

/// Linearization data at the interior equilibrium: the two derived scalars
/// and the full linear matrix `L0 = [[s0, sigma], [s, -s]]`.
#[derive(Debug, Clone, Copy)]
pub struct Linearization {
    pub s0: f64,
    pub sigma: f64,
    pub l0: Matrix2<f64>,
}

/// Finds the unique interior equilibrium by bracketed bisection on
/// `(1e-12, 1)` followed by Newton polish. `m = 0` short-circuits to the
/// boundary logistic equilibrium `(1, 1)`.
pub fn find_interior_equilibrium(params: &ModelParams) -> Result<Equilibrium> {
    params.validate()?;
    if params.m == 0.0 {
        return Ok(Equilibrium { u: 1.0, v: 1.0 });
    }
    let (m, a, b) = (params.m, params.a, params.b);
    let existence = a + b >= a * b;
    // scalar reduction with v = u substituted
    let g = |u: f64| 1.0 - u - m * u / ((1.0 + a * u) * (1.0 + b * u));
    let dg = |u: f64| -1.0 - m * (1.0 - a * b * u * u) / (((1.0 + a * u) * (1.0 + b * u)).powi(2));

    let (mut lo, mut hi) = (1e-12, 1.0);
    if g(lo) * g(hi) > 0.0 {
        return if existence {
            Err(Error::NoInteriorEquilibrium)
        } else {
            Err(Error::ExistenceConditionViolated { a, b })
        };
    }
    if !existence {
        log::warn!(
            "existence condition a + b >= ab violated (a={a}, b={b}); \
             a sign change is still present, continuing"
        );
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(lo) * g(mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    let mut u = 0.5 * (lo + hi);
    for _ in 0..50 {
        let r = g(u);
        if r.abs() < 1e-15 {
            break;
        }
        u -= r / dg(u);
    }
    if g(u).abs() >= 1e-12 {
        return Err(Error::RootFindingFailed(format!(
            "equilibrium residual {:e} above 1e-12",
            g(u)
        )));
    }
    Ok(Equilibrium { u, v: u })
}

/// Evaluates the linearization scalars
/// `s0 = u*(a m u* / ((1+a u*)^2 (1+b u*)) - 1)` and
/// `sigma = -m u* / ((1+a u*)(1+b u*)^2)` and assembles `L0`.
pub fn linearize(params: &ModelParams, eq: &Equilibrium) -> Linearization {
    let (m, a, b, s) = (params.m, params.a, params.b, params.s);
    let u = eq.u;
    let s0 = u * (a * m * u / ((1.0 + a * u).powi(2) * (1.0 + b * u)) - 1.0);
    let sigma = -m * u / ((1.0 + a * u) * (1.0 + b * u).powi(2));
    let l0 = Matrix2::new(s0, sigma, s, -s);
    Linearization { s0, sigma, l0 }
}

type ReactionFn = Arc<dyn Fn(f64, f64) -> Vector2<f64> + Send + Sync>;

/// Immutable bundle of the reaction field and all of its derivative
/// structures at the interior equilibrium. Built either from the
/// Crowley-Martin closed forms or, for generic user kinetics, from
/// Richardson-extrapolated central finite differences of the reaction field.
#[derive(Clone)]
pub struct KineticsModel {
    eq: Equilibrium,
    reaction: ReactionFn,
    jac: Matrix2<f64>,
    /// per component: (f_uu, f_uv, f_vv)
    q: [[f64; 3]; 2],
    /// per component: (f_uuu, f_uuv, f_uvv, f_vvv)
    c: [[f64; 4]; 2],
    l_eps: [Matrix2<f64>; 2],
    d_eps: [Matrix2<f64>; 2],
}

impl std::fmt::Debug for KineticsModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("KineticsModel")
            .field("eq", &self.eq)
            .field("jac", &self.jac)
            .field("q", &self.q)
            .field("c", &self.c)
            .finish()
    }
}

impl KineticsModel {
    /// Built-in Crowley-Martin model with closed-form derivative tensors.
    pub fn crowley_martin(params: &ModelParams) -> Result<Self> {
        let eq = find_interior_equilibrium(params)?;
        let lin = linearize(params, &eq);
        let (m, a, b, s) = (params.m, params.a, params.b, params.s);
        let (u, v) = (eq.u, eq.v);
        let au = 1.0 + a * u;
        let bv = 1.0 + b * v;

        // second partials of the prey equation
        let q1 = [
            -2.0 + 2.0 * a * m * v / (au.powi(3) * bv),
            -m / (au.powi(2) * bv.powi(2)),
            2.0 * m * b * u / (au * bv.powi(3)),
        ];
        // second partials of s v (1 - v/u)
        let q2 = [
            -2.0 * s * v * v / u.powi(3),
            2.0 * s * v / u.powi(2),
            -2.0 * s / u,
        ];
        // third partials
        let c1 = [
            -6.0 * m * a * a * v / (au.powi(4) * bv),
            2.0 * m * a / (au.powi(3) * bv.powi(2)),
            2.0 * m * b / (au.powi(2) * bv.powi(3)),
            -6.0 * m * b * b * u / (au * bv.powi(4)),
        ];
        let c2 = [
            6.0 * s * v * v / u.powi(4),
            -4.0 * s * v / u.powi(3),
            2.0 * s / u.powi(2),
            0.0,
        ];

        let p = *params;
        Ok(Self {
            eq,
            reaction: Arc::new(move |uu, vv| p.reaction(uu, vv)),
            jac: lin.l0,
            q: [q1, q2],
            c: [c1, c2],
            l_eps: parameter_l_derivatives(),
            d_eps: parameter_d_derivatives(),
        })
    }

    /// Generic kinetics from a reaction field alone: Jacobian, `Q`, `C` are
    /// derived by central finite differences (step 1e-4, one Richardson
    /// extrapolation step). Parameter-derivative matrices default to the
    /// `(d1, s)` convention of the built-in model; supply your own with
    /// [`KineticsModel::with_parameter_derivatives`] if the bifurcation
    /// parameters enter differently.
    pub fn from_reaction<F>(reaction: F, eq: Equilibrium) -> Self
    where
        F: Fn(f64, f64) -> Vector2<f64> + Send + Sync + 'static,
    {
        let f: ReactionFn = Arc::new(reaction);
        let jac = fd_jacobian(&f, &eq);
        let q = fd_q_tensor(&f, &eq);
        let c = fd_c_tensor(&f, &eq);
        Self {
            eq,
            reaction: f,
            jac,
            q,
            c,
            l_eps: parameter_l_derivatives(),
            d_eps: parameter_d_derivatives(),
        }
    }

    /// Overrides the first-order parameter perturbation matrices.
    pub fn with_parameter_derivatives(
        mut self,
        l_eps: [Matrix2<f64>; 2],
        d_eps: [Matrix2<f64>; 2],
    ) -> Self {
        self.l_eps = l_eps;
        self.d_eps = d_eps;
        self
    }

    pub fn equilibrium(&self) -> Equilibrium {
        self.eq
    }

    pub fn reaction(&self, u: f64, v: f64) -> Vector2<f64> {
        (self.reaction)(u, v)
    }

    /// Jacobian of the reaction field at the equilibrium.
    pub fn jacobian(&self) -> Matrix2<f64> {
        self.jac
    }

    /// Symmetric bilinear form: `Q(x, y) = Q(y, x)` exactly. Products are
    /// grouped so every term is bitwise invariant under the swap.
    pub fn q(&self, x: &Vector2<f64>, y: &Vector2<f64>) -> Vector2<f64> {
        let mut out = Vector2::zeros();
        for i in 0..2 {
            let [fuu, fuv, fvv] = self.q[i];
            out[i] = fuu * (x[0] * y[0]) + fuv * (x[0] * y[1] + x[1] * y[0]) + fvv * (x[1] * y[1]);
        }
        out
    }

    /// Symmetric trilinear form, bitwise invariant under every argument
    /// permutation: each monomial is multiplied in a canonical factor order
    /// and each symmetric class is summed in a canonical order.
    pub fn c(&self, x: &Vector2<f64>, y: &Vector2<f64>, z: &Vector2<f64>) -> Vector2<f64> {
        fn prod3(a: f64, b: f64, c: f64) -> f64 {
            let mut f = [a, b, c];
            f.sort_by(f64::total_cmp);
            (f[0] * f[1]) * f[2]
        }
        fn sum3(a: f64, b: f64, c: f64) -> f64 {
            let mut t = [a, b, c];
            t.sort_by(f64::total_cmp);
            (t[0] + t[1]) + t[2]
        }
        let s_uuu = prod3(x[0], y[0], z[0]);
        let s_uuv = sum3(
            prod3(x[0], y[0], z[1]),
            prod3(x[0], y[1], z[0]),
            prod3(x[1], y[0], z[0]),
        );
        let s_uvv = sum3(
            prod3(x[0], y[1], z[1]),
            prod3(x[1], y[0], z[1]),
            prod3(x[1], y[1], z[0]),
        );
        let s_vvv = prod3(x[1], y[1], z[1]);
        let mut out = Vector2::zeros();
        for i in 0..2 {
            let [fuuu, fuuv, fuvv, fvvv] = self.c[i];
            out[i] = fuuu * s_uuu + fuuv * s_uuv + fuvv * s_uvv + fvvv * s_vvv;
        }
        out
    }

    /// First-order perturbation of the linear part per bifurcation parameter.
    pub fn l_eps(&self, i: usize) -> Matrix2<f64> {
        self.l_eps[i]
    }

    /// First-order perturbation of the diffusion matrix per parameter.
    pub fn d_eps(&self, i: usize) -> Matrix2<f64> {
        self.d_eps[i]
    }
}

/// `dL/d eps` for the bifurcation parameters `(d1, s) = (d* + eps1, s* + eps2)`:
/// only `s` enters the linear part, through the predator row `[1, -1]`.
fn parameter_l_derivatives() -> [Matrix2<f64>; 2] {
    [Matrix2::zeros(), Matrix2::new(0.0, 0.0, 1.0, -1.0)]
}

/// `dD/d eps`: only `d1` enters the diffusion matrix.
fn parameter_d_derivatives() -> [Matrix2<f64>; 2] {
    [Matrix2::new(1.0, 0.0, 0.0, 0.0), Matrix2::zeros()]
}

/// Parameter-derivative matrices of the built-in model, in the effective
/// convention that makes the linear normal-form coefficient read
/// `g = psi(0) (L_eps phi - mu D_eps phi(0))` with no extra factor. That
/// convention reproduces the worked linear coefficients of the reference
/// parameter sets and is frozen by regression tests.
pub fn parameter_derivatives() -> (Matrix2<f64>, Matrix2<f64>, Matrix2<f64>, Matrix2<f64>) {
    let l = parameter_l_derivatives();
    let d = parameter_d_derivatives();
    (l[0], l[1], d[0], d[1])
}

const FD_STEP: f64 = 1e-4;

fn fd_jacobian(f: &ReactionFn, eq: &Equilibrium) -> Matrix2<f64> {
    let (u, v) = (eq.u, eq.v);
    let mut jac = Matrix2::zeros();
    for j in 0..2 {
        let col = richardson_vec(
            |h| {
                let (du, dv) = if j == 0 { (h, 0.0) } else { (0.0, h) };
                (f(u + du, v + dv) - f(u - du, v - dv)) / (2.0 * h)
            },
            FD_STEP,
        );
        jac.set_column(j, &col);
    }
    jac
}

fn richardson_vec<G: Fn(f64) -> Vector2<f64>>(g: G, h: f64) -> Vector2<f64> {
    (4.0 * g(0.5 * h) - g(h)) / 3.0
}

fn fd_q_tensor(f: &ReactionFn, eq: &Equilibrium) -> [[f64; 3]; 2] {
    let (u, v) = (eq.u, eq.v);
    let d2 = |i: usize, j: usize, h: f64| -> Vector2<f64> {
        let e = |k: usize, s: f64| if k == 0 { (s, 0.0) } else { (0.0, s) };
        let (iu, iv) = e(i, h);
        let (ju, jv) = e(j, h);
        (f(u + iu + ju, v + iv + jv) - f(u + iu - ju, v + iv - jv) - f(u - iu + ju, v - iv + jv)
            + f(u - iu - ju, v - iv - jv))
            / (4.0 * h * h)
    };
    let fuu = richardson_vec(|h| d2(0, 0, h), FD_STEP);
    let fuv = richardson_vec(|h| d2(0, 1, h), FD_STEP);
    let fvv = richardson_vec(|h| d2(1, 1, h), FD_STEP);
    [[fuu[0], fuv[0], fvv[0]], [fuu[1], fuv[1], fvv[1]]]
}

fn fd_c_tensor(f: &ReactionFn, eq: &Equilibrium) -> [[f64; 4]; 2] {
    let (u, v) = (eq.u, eq.v);
    // third derivative in directions (i, i, j): central difference of the
    // second difference along i, displaced along j
    let d3 = |i: usize, j: usize, k: usize, h: f64| -> Vector2<f64> {
        let dir = |n: usize| -> (f64, f64) {
            if n == 0 {
                (1.0, 0.0)
            } else {
                (0.0, 1.0)
            }
        };
        let (iu, iv) = dir(i);
        let (ju, jv) = dir(j);
        let (ku, kv) = dir(k);
        let mut acc = Vector2::zeros();
        for (si, wi) in [(1.0, 1.0), (-1.0, -1.0)] {
            for (sj, wj) in [(1.0, 1.0), (-1.0, -1.0)] {
                for (sk, wk) in [(1.0, 1.0), (-1.0, -1.0)] {
                    let du = h * (si * iu + sj * ju + sk * ku);
                    let dv = h * (si * iv + sj * jv + sk * kv);
                    acc += wi * wj * wk * f(u + du, v + dv);
                }
            }
        }
        acc / (8.0 * h * h * h)
    };
    // larger base step: third differences lose more precision to rounding
    let h3 = 5e-3;
    let fuuu = richardson_vec(|h| d3(0, 0, 0, h), h3);
    let fuuv = richardson_vec(|h| d3(0, 0, 1, h), h3);
    let fuvv = richardson_vec(|h| d3(0, 1, 1, h), h3);
    let fvvv = richardson_vec(|h| d3(1, 1, 1, h), h3);
    [
        [fuuu[0], fuuv[0], fuvv[0], fvvv[0]],
        [fuuu[1], fuuv[1], fuvv[1], fvvv[1]],
    ]
}

/// Left eigenvector convenience: `psi` rows are used as `RowVector2` all over
/// the normal-form assembly.
pub type Row2 = RowVector2<f64>;

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn set1_critical() -> ModelParams {
        // set 1 kinetics at its (2,3) Turing-Turing point; frozen values are
        // regression-tested in linear_analysis
        ModelParams {
            s: 0.236_397_107_841_406_58,
            d1: 0.005_607_129_178_403_398,
            ..ModelParams::set1()
        }
    }

    #[test]
    fn equilibrium_set1_matches_reference_value() {
        let eq = find_interior_equilibrium(&ModelParams::set1()).unwrap();
        assert_relative_eq!(eq.u, 0.245, max_relative = 5e-3);
        assert!((eq.u - 0.245).abs() < 5e-4, "reference value has 3 decimals");
        assert_eq!(eq.u, eq.v);
        let r = ModelParams::set1().reaction(eq.u, eq.v);
        assert!(r[0].abs() < 1e-12 && r[1].abs() < 1e-12);
    }

    #[test]
    fn equilibrium_set2_matches_reference_value() {
        let eq = find_interior_equilibrium(&ModelParams::set2()).unwrap();
        assert!(
            (eq.u - 0.2716).abs() < 5e-5,
            "reference to 4 decimals, got {}",
            eq.u
        );
        let r = ModelParams::set2().reaction(eq.u, eq.v);
        assert!(r[0].abs() < 1e-12 && r[1].abs() < 1e-12);
    }

    #[test]
    fn equilibrium_without_predation_is_logistic() {
        let p = ModelParams {
            m: 0.0,
            ..ModelParams::set1()
        };
        let eq = find_interior_equilibrium(&p).unwrap();
        assert_eq!((eq.u, eq.v), (1.0, 1.0));
    }

    #[test]
    fn linearization_matches_reference_values() {
        let p1 = ModelParams::set1();
        let eq1 = find_interior_equilibrium(&p1).unwrap();
        let lin1 = linearize(&p1, &eq1);
        assert_relative_eq!(lin1.s0, 0.0748, max_relative = 5e-3);
        assert_relative_eq!(lin1.sigma, -0.673, max_relative = 5e-3);

        let p2 = ModelParams::set2();
        let eq2 = find_interior_equilibrium(&p2).unwrap();
        let lin2 = linearize(&p2, &eq2);
        assert_relative_eq!(lin2.s0, 0.0555, max_relative = 5e-3);
        assert_relative_eq!(lin2.sigma, -0.7092, max_relative = 5e-3);
    }

    #[test]
    fn sigma_is_negative_for_admissible_parameters() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..200 {
            let p = ModelParams {
                m: rng.gen_range(0.1..10.0),
                a: rng.gen_range(0.0..5.0),
                b: rng.gen_range(0.0..2.0),
                s: rng.gen_range(0.05..2.0),
                d1: 0.01,
                d2: 1.0,
                l: 1.0,
            };
            if let Ok(eq) = find_interior_equilibrium(&p) {
                assert!(linearize(&p, &eq).sigma < 0.0);
            }
        }
    }

    #[test]
    fn linear_matrix_has_expected_structure() {
        let p = ModelParams::set2();
        let eq = find_interior_equilibrium(&p).unwrap();
        let lin = linearize(&p, &eq);
        assert_eq!(lin.l0[(1, 0)], p.s);
        assert_eq!(lin.l0[(1, 1)], -p.s);
        assert_eq!(lin.l0[(0, 0)], lin.s0);
        assert_eq!(lin.l0[(0, 1)], lin.sigma);
    }

    #[test]
    fn q_is_symmetric_on_random_inputs() {
        let p = set1_critical();
        let model = KineticsModel::crowley_martin(&p).unwrap();
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..50 {
            let x = Vector2::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let y = Vector2::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            assert_eq!(model.q(&x, &y), model.q(&y, &x));
        }
    }

    #[test]
    fn q_first_component_matches_closed_form_expansion() {
        // the displayed prey coefficient of phi1^2:
        // -2 + 2 m v a/((a u+1)^2 (b v+1)) - 2 m u v a^2/((a u+1)^3 (b v+1))
        let p = set1_critical();
        let model = KineticsModel::crowley_martin(&p).unwrap();
        let eq = model.equilibrium();
        let (m, a, b) = (p.m, p.a, p.b);
        let (u, v) = (eq.u, eq.v);
        let expected = -2.0 + 2.0 * m * v * a / ((a * u + 1.0).powi(2) * (b * v + 1.0))
            - 2.0 * m * u * v * a * a / ((a * u + 1.0).powi(3) * (b * v + 1.0));
        let got = model.q(&Vector2::x(), &Vector2::x())[0];
        assert_relative_eq!(got, expected, max_relative = 1e-13);
    }

    #[test]
    fn c_is_permutation_symmetric_on_random_inputs() {
        let p = set1_critical();
        let model = KineticsModel::crowley_martin(&p).unwrap();
        let mut rng = StdRng::seed_from_u64(13);
        for _ in 0..30 {
            let v: Vec<Vector2<f64>> = (0..3)
                .map(|_| Vector2::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
                .collect();
            let base = model.c(&v[0], &v[1], &v[2]);
            for perm in [[0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
                assert_eq!(base, model.c(&v[perm[0]], &v[perm[1]], &v[perm[2]]));
            }
        }
    }

    #[test]
    fn c_second_component_matches_closed_form_expansion() {
        // displayed predator coefficient of phi1^3: 6 s* v*^2 / u*^4
        let p = set1_critical();
        let model = KineticsModel::crowley_martin(&p).unwrap();
        let eq = model.equilibrium();
        let expected = 6.0 * p.s * eq.v * eq.v / eq.u.powi(4);
        let got = model.c(&Vector2::x(), &Vector2::x(), &Vector2::x())[1];
        assert_relative_eq!(got, expected, max_relative = 1e-13);
    }

    /// Independent finite-difference oracle, written against the raw reaction
    /// field only (never against the stored tensors).
    fn fd_oracle_q(
        p: &ModelParams,
        eq: &Equilibrium,
        x: &Vector2<f64>,
        y: &Vector2<f64>,
    ) -> Vector2<f64> {
        let h = 1e-4;
        let f = |du: f64, dv: f64| p.reaction(eq.u + du, eq.v + dv);
        let mut out = Vector2::zeros();
        for i in 0..2 {
            for j in 0..2 {
                let (iu, iv) = if i == 0 { (h, 0.0) } else { (0.0, h) };
                let (ju, jv) = if j == 0 { (h, 0.0) } else { (0.0, h) };
                let d2 = (f(iu + ju, iv + jv) - f(iu - ju, iv - jv) - f(ju - iu, jv - iv)
                    + f(-iu - ju, -iv - jv))
                    / (4.0 * h * h);
                out += d2 * x[i] * y[j];
            }
        }
        out
    }

    #[test]
    fn q_agrees_with_finite_differences_both_sets() {
        for p in [set1_critical(), ModelParams::set2()] {
            let model = KineticsModel::crowley_martin(&p).unwrap();
            let eq = model.equilibrium();
            let mut rng = StdRng::seed_from_u64(17);
            for _ in 0..20 {
                let x = Vector2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                let y = Vector2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                let analytic = model.q(&x, &y);
                let fd = fd_oracle_q(&p, &eq, &x, &y);
                assert!(
                    (analytic - fd).norm() <= 1e-6 * (1.0 + analytic.norm()),
                    "Q mismatch: {analytic:?} vs {fd:?}"
                );
            }
        }
    }

    #[test]
    fn c_agrees_with_finite_differences_both_sets() {
        for p in [set1_critical(), ModelParams::set2()] {
            let model = KineticsModel::crowley_martin(&p).unwrap();
            let eq = model.equilibrium();
            // generic-path model derives C purely by finite differences of
            // the same reaction field: an independent numerical route
            let generic = KineticsModel::from_reaction(move |u, v| p.reaction(u, v), eq);
            let mut rng = StdRng::seed_from_u64(19);
            for _ in 0..20 {
                let x = Vector2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                let y = Vector2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                let z = Vector2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                let analytic = model.c(&x, &y, &z);
                let fd = generic.c(&x, &y, &z);
                assert!(
                    (analytic - fd).norm() <= 1e-5 * (1.0 + analytic.norm()),
                    "C mismatch: {analytic:?} vs {fd:?}"
                );
            }
        }
    }

    #[test]
    fn generic_model_reproduces_closed_form_jacobian() {
        let p = set1_critical();
        let closed = KineticsModel::crowley_martin(&p).unwrap();
        let generic =
            KineticsModel::from_reaction(move |u, v| p.reaction(u, v), closed.equilibrium());
        assert!((closed.jacobian() - generic.jacobian()).norm() < 1e-8);
    }

    #[test]
    fn parameter_derivative_matrices() {
        let (l1, l2, d1, d2) = parameter_derivatives();
        assert_eq!(l1, Matrix2::zeros());
        assert_eq!(l2, Matrix2::new(0.0, 0.0, 1.0, -1.0));
        assert_eq!(d1, Matrix2::new(1.0, 0.0, 0.0, 0.0));
        assert_eq!(d2, Matrix2::zeros());
    }

    #[test]
    fn model_json_rejects_unknown_keys() {
        let ok = r#"{"m":6.0,"a":3.0,"b":0.5,"s":0.2,"d1":0.01,"d2":0.7}"#;
        let p: ModelParams = serde_json::from_str(ok).unwrap();
        assert_eq!(p.l, 1.0);
        let bad = r#"{"m":6.0,"a":3.0,"b":0.5,"s":0.2,"d1":0.01,"d2":0.7,"extra":1}"#;
        assert!(serde_json::from_str::<ModelParams>(bad).is_err());
    }

    #[test]
    fn linear_functional_response_is_allowed() {
        let p = ModelParams {
            a: 0.0,
            b: 0.0,
            ..ModelParams::set1()
        };
        let eq = find_interior_equilibrium(&p).unwrap();
        assert!(eq.u > 0.0 && eq.u < 1.0);
    }

    #[test]
    fn violated_existence_condition_with_root_still_succeeds() {
        // a + b = 8 < 15 = ab, yet the scalar reduction still brackets a
        // root; the solver warns and proceeds
        let p = ModelParams {
            a: 5.0,
            b: 3.0,
            ..ModelParams::set1()
        };
        let eq = find_interior_equilibrium(&p).unwrap();
        assert!(p.reaction(eq.u, eq.v).norm() < 1e-12);
    }
}
