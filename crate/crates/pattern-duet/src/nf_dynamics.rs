//! Dynamics of the truncated planar normal form: equilibria and stability,
//! Guckenheimer-Holmes unfolding classification, local bifurcation lines in
//! both `(eps1, eps2)` and `(d1, s)` coordinates, parameter region maps, and
//! phase-portrait trajectories.

use crate::error::Error;
use crate::normal_form::{CaseTerms, NfCoefficients, ResonanceCase};
use crate::Result;
use nalgebra::{Matrix2, Vector2};
use serde::Serialize;

/// Truncated polynomial vector field at a fixed parameter offset
/// `eps = (d1 - d*, s - s*)`, assembled with the display-convention
/// coefficients (combinatorial factors included).
#[derive(Debug, Clone)]
pub struct TruncatedNf {
    pub resonance: ResonanceCase,
    pub epsilon: (f64, f64),
    /// linear coefficients `a1 = g1010 e1 + g1001 e2`, `a2 = g0110 e1 + g0101 e2`
    pub a1: f64,
    pub a2: f64,
    /// 1:2 quadratic display coefficients (`z1 z2` and `z1^2`), zero otherwise
    pub q1: f64,
    pub q2: f64,
    /// cubic display coefficients: `z1^3`, `z1 z2^2`, `z1^2 z2`, `z2^3`
    pub c11: f64,
    pub c12: f64,
    pub c21: f64,
    pub c22: f64,
    /// 1:3 extra display coefficients (`z1^2 z2` in the first equation,
    /// `z1^3` in the second), zero otherwise
    pub d11: f64,
    pub d21: f64,
}

impl TruncatedNf {
    pub fn new(coeffs: &NfCoefficients, epsilon: (f64, f64)) -> Self {
        let (e1, e2) = epsilon;
        let lin = coeffs.lin;
        let (mut q1, mut q2, mut d11, mut d21) = (0.0, 0.0, 0.0, 0.0);
        match coeffs.case {
            CaseTerms::Generic => {}
            CaseTerms::OneTwo { g1100_11, g2000_12 } => {
                q1 = g1100_11;
                q2 = g2000_12 / 2.0;
            }
            CaseTerms::OneThree { g2100_11, g3000_12 } => {
                d11 = g2100_11 / 2.0;
                d21 = g3000_12 / 6.0;
            }
        }
        Self {
            resonance: coeffs.resonance,
            epsilon,
            a1: lin[(0, 0)] * e1 + lin[(0, 1)] * e2,
            a2: lin[(1, 0)] * e1 + lin[(1, 1)] * e2,
            q1,
            q2,
            c11: coeffs.z1_cubed(),
            c12: coeffs.z1_z2sq(),
            c21: coeffs.z1sq_z2(),
            c22: coeffs.z2_cubed(),
            d11,
            d21,
        }
    }

    pub fn rhs(&self, z: &Vector2<f64>) -> Vector2<f64> {
        let (z1, z2) = (z[0], z[1]);
        Vector2::new(
            self.a1 * z1
                + self.q1 * z1 * z2
                + self.c11 * z1.powi(3)
                + self.c12 * z1 * z2 * z2
                + self.d11 * z1 * z1 * z2,
            self.a2 * z2
                + self.q2 * z1 * z1
                + self.c21 * z1 * z1 * z2
                + self.c22 * z2.powi(3)
                + self.d21 * z1.powi(3),
        )
    }

    pub fn jacobian(&self, z: &Vector2<f64>) -> Matrix2<f64> {
        let (z1, z2) = (z[0], z[1]);
        Matrix2::new(
            self.a1
                + self.q1 * z2
                + 3.0 * self.c11 * z1 * z1
                + self.c12 * z2 * z2
                + 2.0 * self.d11 * z1 * z2,
            self.q1 * z1 + 2.0 * self.c12 * z1 * z2 + self.d11 * z1 * z1,
            2.0 * self.q2 * z1 + 2.0 * self.c21 * z1 * z2 + 3.0 * self.d21 * z1 * z1,
            self.a2 + self.c21 * z1 * z1 + 3.0 * self.c22 * z2 * z2,
        )
    }
}

/// Equilibrium labels following the worked examples' naming: `A1`/`A2` are
/// the single-mode axis equilibria, `A3` the generic-case mixed states, and
/// `Mixed` the off-axis states of the resonant cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum NfLabel {
    A0,
    A1Plus,
    A1Minus,
    A2Plus,
    A2Minus,
    A3 { s1: i8, s2: i8 },
    Mixed,
}

impl NfLabel {
    /// Axis family used by region fingerprints.
    pub fn kind(&self) -> &'static str {
        match self {
            NfLabel::A0 => "A0",
            NfLabel::A1Plus | NfLabel::A1Minus => "Z1",
            NfLabel::A2Plus | NfLabel::A2Minus => "Z2",
            NfLabel::A3 { .. } | NfLabel::Mixed => "XY",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    Stable,
    Saddle,
    Unstable,
    Degenerate,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct NfEquilibrium {
    pub z: (f64, f64),
    pub label: NfLabel,
    /// eigenvalues as (re, im) pairs
    pub eigenvalues: [(f64, f64); 2],
    pub stability: Stability,
}

const STABILITY_MARGIN: f64 = 1e-10;
const DEDUP_RADIUS: f64 = 1e-9;
const AXIS_TOL: f64 = 1e-9;

/// Eigenvalues and classification of the truncated field at an equilibrium.
pub fn nf_stability(nf: &TruncatedNf, z: &Vector2<f64>) -> ([(f64, f64); 2], Stability) {
    let j = nf.jacobian(z);
    let tr = j[(0, 0)] + j[(1, 1)];
    let det = j[(0, 0)] * j[(1, 1)] - j[(0, 1)] * j[(1, 0)];
    let disc = tr * tr - 4.0 * det;
    let eig: [(f64, f64); 2] = if disc >= 0.0 {
        let r = disc.sqrt();
        [((tr + r) / 2.0, 0.0), ((tr - r) / 2.0, 0.0)]
    } else {
        let im = (-disc).sqrt() / 2.0;
        [(tr / 2.0, im), (tr / 2.0, -im)]
    };
    let (re_max, re_min) = (eig[0].0.max(eig[1].0), eig[0].0.min(eig[1].0));
    let stability = if re_max < -STABILITY_MARGIN {
        Stability::Stable
    } else if re_min > STABILITY_MARGIN {
        Stability::Unstable
    } else if re_min < -STABILITY_MARGIN && re_max > STABILITY_MARGIN {
        Stability::Saddle
    } else {
        Stability::Degenerate
    };
    (eig, stability)
}

fn newton_polish(nf: &TruncatedNf, z0: Vector2<f64>) -> Result<Vector2<f64>> {
    let mut z = z0;
    for _ in 0..60 {
        let r = nf.rhs(&z);
        if r.norm() < 1e-14 {
            break;
        }
        let j = nf.jacobian(&z);
        match j.lu().solve(&r) {
            Some(step) => z -= step,
            None => break,
        }
    }
    if nf.rhs(&z).norm() >= 1e-12 {
        return Err(Error::RootFindingFailed(format!(
            "Newton polish stalled at z = ({}, {}), residual {:e}",
            z[0],
            z[1],
            nf.rhs(&z).norm()
        )));
    }
    Ok(z)
}

/// Real roots of `c3 x^3 + c2 x^2 + c1 x + c0`, by companion-matrix
/// eigenvalues plus a Newton polish. Degrades gracefully to the quadratic /
/// linear case when leading coefficients vanish.
fn real_poly_roots(coeffs: &[f64]) -> Vec<f64> {
    // strip negligible leading coefficients
    let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    if scale == 0.0 {
        return Vec::new();
    }
    let mut c: Vec<f64> = coeffs.to_vec(); // highest degree first
    while c.len() > 1 && c[0].abs() < 1e-14 * scale {
        c.remove(0);
    }
    let n = c.len() - 1;
    let mut roots = match n {
        0 => Vec::new(),
        1 => vec![-c[1] / c[0]],
        2 => {
            let (a, b, cc) = (c[0], c[1], c[2]);
            let disc = b * b - 4.0 * a * cc;
            if disc < 0.0 {
                Vec::new()
            } else {
                let r = disc.sqrt();
                // numerically stable quadratic roots
                let q = -0.5 * (b + b.signum() * r);
                if q == 0.0 {
                    vec![0.0, 0.0]
                } else {
                    vec![q / a, cc / q]
                }
            }
        }
        _ => {
            let m = nalgebra::DMatrix::<f64>::from_fn(n, n, |i, j| {
                if j == n - 1 {
                    -c[n - i] / c[0]
                } else if i == j + 1 {
                    1.0
                } else {
                    0.0
                }
            });
            let eig = m.complex_eigenvalues();
            let mag = eig.iter().fold(1.0f64, |m, e| m.max(e.norm()));
            eig.iter()
                .filter(|e| e.im.abs() < 1e-8 * mag)
                .map(|e| e.re)
                .collect()
        }
    };
    // polish on the original polynomial
    let eval = |x: f64| coeffs.iter().fold(0.0, |acc, &ci| acc * x + ci);
    let deriv = |x: f64| {
        let deg = coeffs.len() - 1;
        coeffs[..deg]
            .iter()
            .enumerate()
            .fold(0.0, |acc, (i, &ci)| acc * x + ci * (deg - i) as f64)
    };
    for r in roots.iter_mut() {
        for _ in 0..40 {
            let f = eval(*r);
            let d = deriv(*r);
            if d == 0.0 || f.abs() < 1e-15 * scale {
                break;
            }
            *r -= f / d;
        }
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots
}

fn push_unique(list: &mut Vec<Vector2<f64>>, z: Vector2<f64>) {
    if !list.iter().any(|p| (p - z).norm() < DEDUP_RADIUS) {
        list.push(z);
    }
}

fn label_point(nf: &TruncatedNf, z: &Vector2<f64>) -> NfLabel {
    let on_z2_axis = z[0].abs() < AXIS_TOL;
    let on_z1_axis = z[1].abs() < AXIS_TOL;
    match (on_z2_axis, on_z1_axis) {
        (true, true) => NfLabel::A0,
        (false, true) => {
            if z[0] > 0.0 {
                NfLabel::A1Plus
            } else {
                NfLabel::A1Minus
            }
        }
        (true, false) => {
            if z[1] > 0.0 {
                NfLabel::A2Plus
            } else {
                NfLabel::A2Minus
            }
        }
        (false, false) => match nf.resonance {
            ResonanceCase::Generic => NfLabel::A3 {
                s1: if z[0] > 0.0 { 1 } else { -1 },
                s2: if z[1] > 0.0 { 1 } else { -1 },
            },
            _ => NfLabel::Mixed,
        },
    }
}

/// All equilibria of the truncated field, Newton-polished to residual
/// `< 1e-12` and deduplicated (radius 1e-9).
///
/// Generic case: closed-form axis amplitudes plus the `2x2` linear system in
/// `(z1^2, z2^2)` for the mixed states. 1:2 case: the invariant `z2` axis
/// plus resultant elimination to a cubic in `z2` for the off-axis states.
/// 1:3 case: the `z2` axis plus deterministic grid-seeded Newton (the cross
/// cubic terms defeat a clean elimination; the seeding box is derived from
/// the coefficient scales).
pub fn nf_equilibria(nf: &TruncatedNf) -> Result<Vec<NfEquilibrium>> {
    let mut points: Vec<Vector2<f64>> = vec![Vector2::zeros()];

    // z2-axis equilibria exist in every case (the first equation always
    // carries z1 as a factor)
    if nf.c22.abs() > 1e-14 {
        let r = -nf.a2 / nf.c22;
        if r > 0.0 {
            let amp = r.sqrt();
            push_unique(&mut points, Vector2::new(0.0, amp));
            push_unique(&mut points, Vector2::new(0.0, -amp));
        }
    }

    match nf.resonance {
        ResonanceCase::Generic => {
            if nf.c11.abs() > 1e-14 {
                let r = -nf.a1 / nf.c11;
                if r > 0.0 {
                    let amp = r.sqrt();
                    push_unique(&mut points, Vector2::new(amp, 0.0));
                    push_unique(&mut points, Vector2::new(-amp, 0.0));
                }
            }
            // mixed states: c11 r1 + c12 r2 = -a1, c21 r1 + c22 r2 = -a2
            let m = Matrix2::new(nf.c11, nf.c12, nf.c21, nf.c22);
            if let Some(r) = m.lu().solve(&Vector2::new(-nf.a1, -nf.a2)) {
                if r[0] > 0.0 && r[1] > 0.0 {
                    let (h1, h2) = (r[0].sqrt(), r[1].sqrt());
                    for (s1, s2) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                        push_unique(&mut points, Vector2::new(s1 * h1, s2 * h2));
                    }
                }
            }
        }
        ResonanceCase::OneTwo => {
            // off-axis: z1^2 = -(a1 + q1 z2 + c12 z2^2)/c11, substituted into
            // the second equation; a cubic in z2
            if nf.c11.abs() > 1e-14 {
                let al = -1.0 / nf.c11;
                let c3 = nf.c22 + al * nf.c21 * nf.c12;
                let c2 = al * (nf.q2 * nf.c12 + nf.c21 * nf.q1);
                let c1 = nf.a2 + al * (nf.q2 * nf.q1 + nf.c21 * nf.a1);
                let c0 = al * nf.q2 * nf.a1;
                for z2 in real_poly_roots(&[c3, c2, c1, c0]) {
                    let zsq = al * (nf.a1 + nf.q1 * z2 + nf.c12 * z2 * z2);
                    if zsq > DEDUP_RADIUS * DEDUP_RADIUS {
                        let z1 = zsq.sqrt();
                        push_unique(&mut points, Vector2::new(z1, z2));
                        push_unique(&mut points, Vector2::new(-z1, z2));
                    }
                }
            }
        }
        ResonanceCase::OneThree => {
            // deterministic grid-seeded Newton inside a coefficient-scaled box
            let scale = [nf.a1.abs(), nf.a2.abs()]
                .iter()
                .fold(0.0f64, |m, v| m.max(*v));
            let cscale = [nf.c11, nf.c12, nf.c21, nf.c22, nf.d11, nf.d21]
                .iter()
                .fold(1e-12f64, |m, v| m.max(v.abs()));
            let r_box = (4.0 * scale / cscale).sqrt().max(1e-3);
            let n = 41;
            for i in 0..n {
                for j in 0..n {
                    let seed = Vector2::new(
                        r_box * (2.0 * i as f64 / (n - 1) as f64 - 1.0),
                        r_box * (2.0 * j as f64 / (n - 1) as f64 - 1.0),
                    );
                    if let Ok(z) = newton_polish(nf, seed) {
                        if z.norm() <= 2.0 * r_box {
                            push_unique(&mut points, z);
                        }
                    }
                }
            }
        }
    }

    let mut out = Vec::with_capacity(points.len());
    for p in points {
        let z = if p.norm() == 0.0 {
            p
        } else {
            newton_polish(nf, p)?
        };
        // polishing can slide a near-axis seed onto an already-found point
        if out
            .iter()
            .any(|e: &NfEquilibrium| (Vector2::new(e.z.0, e.z.1) - z).norm() < DEDUP_RADIUS)
        {
            continue;
        }
        let (eigenvalues, stability) = nf_stability(nf, &z);
        out.push(NfEquilibrium {
            z: (z[0], z[1]),
            label: label_point(nf, &z),
            eigenvalues,
            stability,
        });
    }
    out.sort_by(|a, b| {
        (a.z.0, a.z.1)
            .partial_cmp(&(b.z.0, b.z.1))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(out)
}

/// Guckenheimer-Holmes unfolding case of the quadratic-free cubic field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum UnfoldingCase {
    Ia,
    Ib,
    II,
    III,
    IVa,
    IVb,
    V,
    VIa,
    VIb,
    VIIa,
    VIIb,
    VIII,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct UnfoldingClass {
    pub case_label: UnfoldingCase,
    pub d0: i8,
    pub b0: f64,
    pub c0: f64,
    pub d0_minus_b0c0: f64,
    /// the field was time-reversed (both diagonal cubics negative) before
    /// rescaling; stability statements map back with reversed sign
    pub time_reversed: bool,
}

/// Classification from the raw cubic display coefficients
/// `(z1^3, z1 z2^2, z1^2 z2, z2^3) = (c11, c12, c21, c22)`.
pub fn classify_unfolding_cubic(c11: f64, c12: f64, c21: f64, c22: f64) -> Result<UnfoldingClass> {
    if c11.abs() < 1e-10 || c22.abs() < 1e-10 {
        return Err(Error::DegenerateCubic(if c11.abs() < c22.abs() {
            c11
        } else {
            c22
        }));
    }
    // normalize the z1^3 coefficient to +1: reverse time if it is negative
    let time_reversed = c11 < 0.0;
    let sgn = if time_reversed { -1.0 } else { 1.0 };
    let (b11, b12, b21, b22) = (sgn * c11, sgn * c12, sgn * c21, sgn * c22);
    // rescale z1 -> z1/sqrt(b11), z2 -> z2/sqrt(|b22|)
    let d0 = if b22 > 0.0 { 1i8 } else { -1 };
    let b0 = b12 / b22.abs();
    let c0 = b21 / b11;
    let dmb = f64::from(d0) - b0 * c0;
    let pos = |x: f64| x > 0.0;
    let case_label = match (d0 == 1, pos(b0), pos(c0), pos(dmb)) {
        (true, true, true, true) => UnfoldingCase::Ia,
        (true, true, true, false) => UnfoldingCase::Ib,
        (true, true, false, _) => UnfoldingCase::II,
        (true, false, true, _) => UnfoldingCase::III,
        (true, false, false, true) => UnfoldingCase::IVa,
        (true, false, false, false) => UnfoldingCase::IVb,
        (false, true, true, _) => UnfoldingCase::V,
        (false, true, false, true) => UnfoldingCase::VIa,
        (false, true, false, false) => UnfoldingCase::VIb,
        (false, false, true, true) => UnfoldingCase::VIIa,
        (false, false, true, false) => UnfoldingCase::VIIb,
        (false, false, false, _) => UnfoldingCase::VIII,
    };
    Ok(UnfoldingClass {
        case_label,
        d0,
        b0,
        c0,
        d0_minus_b0c0: dmb,
        time_reversed,
    })
}

/// Classifies the unfolding of a generic (non-resonant) normal form. The
/// resonant cases fall outside the twelve-case family: 1:2 carries quadratic
/// terms and 1:3 carries cubic cross terms.
pub fn classify_unfolding(coeffs: &NfCoefficients) -> Result<UnfoldingClass> {
    match coeffs.resonance {
        ResonanceCase::Generic => classify_unfolding_cubic(
            coeffs.z1_cubed(),
            coeffs.z1_z2sq(),
            coeffs.z1sq_z2(),
            coeffs.z2_cubed(),
        ),
        ResonanceCase::OneTwo => Err(Error::NotApplicable(
            "1:2 resonance carries quadratic terms outside the cubic unfolding family".into(),
        )),
        ResonanceCase::OneThree => Err(Error::NotApplicable(
            "1:3 resonance carries cubic cross terms outside the cubic unfolding family".into(),
        )),
    }
}

/// A straight local bifurcation line through the Turing-Turing point, in
/// both coordinate systems: `eps2 = slope * eps1`, equivalently
/// `s = s* + slope (d1 - d*)`.
#[derive(Debug, Clone, Serialize)]
pub struct BifLine {
    pub name: String,
    pub slope: f64,
    /// restriction to a half plane: `Some(-1)` means `d1 <= d*`
    pub half_plane: Option<i8>,
    pub kind: LineKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LineKind {
    /// a single-mode pair bifurcates from the origin
    Pitchfork { mode: u32 },
    /// mixed states are created or destroyed against an axis pair
    SecondaryExistence { collides_with_mode: u32 },
}

/// Sampled secondary curve (1:2 case) in `(eps1, eps2)` coordinates.
#[derive(Debug, Clone, Serialize)]
pub struct SampledCurve {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BifurcationLines {
    pub lines: Vec<BifLine>,
    pub curves: Vec<SampledCurve>,
}

/// Local bifurcation lines of the truncated normal form.
///
/// Primary pitchfork lines are the zero sets of the linear coefficients
/// (closed form). Generic-case secondary lines are the existence boundaries
/// of the mixed-state linear system (closed form). The 1:2 secondary curve,
/// the locus where off-axis states are created or destroyed against the
/// `z2` axis, is traced by pseudo-arclength continuation.
pub fn nf_bifurcation_lines(
    coeffs: &NfCoefficients,
    eps_window: (f64, f64),
) -> Result<BifurcationLines> {
    let lin = coeffs.lin;
    let mut lines = Vec::new();
    let mut curves = Vec::new();
    let slope_of = |row: usize| -> Result<f64> {
        if lin[(row, 1)].abs() < 1e-300 {
            return Err(Error::DegenerateCubic(lin[(row, 1)]));
        }
        Ok(-lin[(row, 0)] / lin[(row, 1)])
    };

    match coeffs.resonance {
        ResonanceCase::Generic => {
            lines.push(BifLine {
                name: format!("L{}", coeffs.tt.k1),
                slope: slope_of(0)?,
                half_plane: None,
                kind: LineKind::Pitchfork { mode: coeffs.tt.k1 },
            });
            lines.push(BifLine {
                name: format!("L{}", coeffs.tt.k2),
                slope: slope_of(1)?,
                half_plane: None,
                kind: LineKind::Pitchfork { mode: coeffs.tt.k2 },
            });
            // existence boundaries of the mixed states: rows of
            // (z1^2, z2^2) = -M^{-1} L eps vanish
            let m = Matrix2::new(
                coeffs.z1_cubed(),
                coeffs.z1_z2sq(),
                coeffs.z1sq_z2(),
                coeffs.z2_cubed(),
            );
            let minv = m
                .try_inverse()
                .ok_or_else(|| Error::DegenerateCubic(m.determinant()))?;
            let k = -minv * lin;
            // row 0 zero-set: z1 amplitude vanishes, mixed states merge into
            // the k2 axis pair; row 1: merge into the k1 pair
            for (row, name, partner) in [(0usize, "T1", coeffs.tt.k2), (1, "T2", coeffs.tt.k1)] {
                let slope = -k[(row, 0)] / k[(row, 1)];
                let other = 1 - row;
                // the side of the line where the other squared amplitude is
                // positive: sign of (K_other,0 + K_other,1 * slope) * eps1
                let factor = k[(other, 0)] + k[(other, 1)] * slope;
                lines.push(BifLine {
                    name: name.into(),
                    slope,
                    half_plane: Some(if factor > 0.0 { 1 } else { -1 }),
                    kind: LineKind::SecondaryExistence {
                        collides_with_mode: partner,
                    },
                });
            }
        }
        ResonanceCase::OneTwo => {
            lines.push(BifLine {
                name: format!("L{}", coeffs.tt.k2),
                slope: slope_of(1)?,
                half_plane: None,
                kind: LineKind::Pitchfork { mode: coeffs.tt.k2 },
            });
            curves.extend(trace_one_two_collision_curves(coeffs, eps_window)?);
        }
        ResonanceCase::OneThree => {
            lines.push(BifLine {
                name: format!("L{}", coeffs.tt.k2),
                slope: slope_of(1)?,
                half_plane: None,
                kind: LineKind::Pitchfork { mode: coeffs.tt.k2 },
            });
        }
    }
    Ok(BifurcationLines { lines, curves })
}

/// The two residuals whose common zero set is the 1:2 secondary curve: the
/// conic branch `z1^2(z2) = 0` (off-axis states touch the `z2` axis) and the
/// eliminated cubic (the touch point is an equilibrium). Along this locus
/// off-axis pairs are created or destroyed against the axis states or the
/// origin; the reference normal form's implicit `T1` equation is exactly
/// this condition with the conic solved for `z2`.
fn one_two_collision_residuals(coeffs: &NfCoefficients, z2: f64, e1: f64, e2: f64) -> [f64; 2] {
    let nf = TruncatedNf::new(coeffs, (e1, e2));
    // z1^2 = -(a1 + q1 z2 + c12 z2^2)/c11 vanishes iff the quadratic does
    let quad = nf.a1 + nf.q1 * z2 + nf.c12 * z2 * z2;
    let al = -1.0 / nf.c11;
    let c3 = nf.c22 + al * nf.c21 * nf.c12;
    let c2 = al * (nf.q2 * nf.c12 + nf.c21 * nf.q1);
    let c1 = nf.a2 + al * (nf.q2 * nf.q1 + nf.c21 * nf.a1);
    let c0 = al * nf.q2 * nf.a1;
    let g = ((c3 * z2 + c2) * z2 + c1) * z2 + c0;
    [quad, g]
}

/// Seeds on the window boundary: scan each edge for sign changes of the
/// cubic residual evaluated on a conic root branch, bisect to 1e-12.
fn one_two_collision_seeds(coeffs: &NfCoefficients, window: (f64, f64)) -> Vec<[f64; 3]> {
    let nf0 = TruncatedNf::new(coeffs, (0.0, 0.0));
    let (w1, w2) = window;
    let conic_root = |e1: f64, e2: f64, branch: f64| -> Option<f64> {
        let nf = TruncatedNf::new(coeffs, (e1, e2));
        let disc = nf.q1 * nf.q1 - 4.0 * nf.c12 * nf.a1;
        if disc < 0.0 {
            return None;
        }
        Some((-nf.q1 + branch * disc.sqrt()) / (2.0 * nf.c12))
    };
    let residual = |e1: f64, e2: f64, branch: f64| -> Option<f64> {
        conic_root(e1, e2, branch).map(|z2| one_two_collision_residuals(coeffs, z2, e1, e2)[1])
    };
    let mut seeds: Vec<[f64; 3]> = Vec::new();
    let m = 2000;
    type Edge = Box<dyn Fn(f64) -> (f64, f64)>;
    let edges: [Edge; 4] = [
        Box::new(move |t| (-w1 + 2.0 * w1 * t, -w2)),
        Box::new(move |t| (-w1 + 2.0 * w1 * t, w2)),
        Box::new(move |t| (-w1, -w2 + 2.0 * w2 * t)),
        Box::new(move |t| (w1, -w2 + 2.0 * w2 * t)),
    ];
    for branch in [1.0, -1.0] {
        for edge in &edges {
            let mut prev: Option<(f64, f64)> = None;
            for i in 0..=m {
                let t = i as f64 / m as f64;
                let (e1, e2) = edge(t);
                let r = residual(e1, e2, branch);
                if let (Some((tp, rp)), Some(rc)) = (prev, r) {
                    if rp * rc < 0.0 {
                        // bisect along the edge parameter
                        let (mut lo, mut hi, mut rlo) = (tp, t, rp);
                        for _ in 0..60 {
                            let mid = 0.5 * (lo + hi);
                            let (e1m, e2m) = edge(mid);
                            match residual(e1m, e2m, branch) {
                                Some(rm) if rlo * rm <= 0.0 => hi = mid,
                                Some(rm) => {
                                    lo = mid;
                                    rlo = rm;
                                }
                                None => break,
                            }
                        }
                        let (e1s, e2s) = edge(0.5 * (lo + hi));
                        if let Some(z2) = conic_root(e1s, e2s, branch) {
                            seeds.push([z2, e1s, e2s]);
                        }
                    }
                }
                prev = r.map(|rc| (t, rc));
            }
        }
    }
    let _ = nf0;
    seeds
}

/// Pseudo-arclength continuation of the 1:2 secondary curve(s) through the
/// window, seeded from boundary scans. Curves traced twice (entry and exit
/// seeds) are deduplicated.
fn trace_one_two_collision_curves(
    coeffs: &NfCoefficients,
    window: (f64, f64),
) -> Result<Vec<SampledCurve>> {
    let seeds = one_two_collision_seeds(coeffs, window);
    if seeds.is_empty() {
        return Err(Error::ContinuationStalled(0.0, 0.0));
    }
    let h = |x: &[f64; 3]| one_two_collision_residuals(coeffs, x[0], x[1], x[2]);
    let jac = |x: &[f64; 3]| -> [[f64; 3]; 2] {
        let mut j = [[0.0; 3]; 2];
        let base = h(x);
        for col in 0..3 {
            let mut xp = *x;
            let step = 1e-8 * (1.0 + x[col].abs());
            xp[col] += step;
            let hp = h(&xp);
            j[0][col] = (hp[0] - base[0]) / step;
            j[1][col] = (hp[1] - base[1]) / step;
        }
        j
    };
    let tangent = |j: &[[f64; 3]; 2]| -> [f64; 3] {
        let (a, b) = (j[0], j[1]);
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    };
    let scale = window.0.max(window.1);
    let ds = 1e-4 * scale.max(1e-2);
    let inside = |x: &[f64; 3]| x[1].abs() <= window.0 * 1.001 && x[2].abs() <= window.1 * 1.001;

    let mut curves: Vec<SampledCurve> = Vec::new();
    for (idx, seed) in seeds.iter().enumerate() {
        // skip seeds lying on an already-traced curve
        let near_existing = curves.iter().any(|c| {
            c.points.iter().any(|&(e1, e2)| {
                let d1 = (e1 - seed[1]) / scale;
                let d2 = (e2 - seed[2]) / scale;
                (d1 * d1 + d2 * d2).sqrt() < 5e-4
            })
        });
        if near_existing {
            continue;
        }
        let mut points: Vec<(f64, f64)> = vec![(seed[1], seed[2])];
        let mut x = *seed;
        let mut last_t: Option<[f64; 3]> = None;
        let mut stalled = false;
        for _ in 0..400_000 {
            let j = jac(&x);
            let mut t = tangent(&j);
            let norm = (t[0] * t[0] + t[1] * t[1] + t[2] * t[2]).sqrt();
            if norm < 1e-16 {
                stalled = true;
                break;
            }
            for v in t.iter_mut() {
                *v /= norm;
            }
            match last_t {
                Some(lt) => {
                    if lt[0] * t[0] + lt[1] * t[1] + lt[2] * t[2] < 0.0 {
                        for v in t.iter_mut() {
                            *v = -*v;
                        }
                    }
                }
                None => {
                    // head into the window
                    let into = t[1] * -x[1].signum() + t[2] * -x[2].signum();
                    if into < 0.0 {
                        for v in t.iter_mut() {
                            *v = -*v;
                        }
                    }
                }
            }
            let mut xn = [x[0] + ds * t[0], x[1] + ds * t[1], x[2] + ds * t[2]];
            let mut converged = false;
            for _ in 0..30 {
                let r = h(&xn);
                let phase = t[0] * (xn[0] - x[0] - ds * t[0])
                    + t[1] * (xn[1] - x[1] - ds * t[1])
                    + t[2] * (xn[2] - x[2] - ds * t[2]);
                if r[0].abs().max(r[1].abs()).max(phase.abs()) < 1e-10 {
                    converged = true;
                    break;
                }
                let jn = jac(&xn);
                let a = nalgebra::Matrix3::new(
                    jn[0][0], jn[0][1], jn[0][2], jn[1][0], jn[1][1], jn[1][2], t[0], t[1], t[2],
                );
                match a.lu().solve(&nalgebra::Vector3::new(-r[0], -r[1], -phase)) {
                    Some(d) => {
                        xn[0] += d[0];
                        xn[1] += d[1];
                        xn[2] += d[2];
                    }
                    None => break,
                }
            }
            if !converged {
                stalled = true;
                break;
            }
            x = xn;
            last_t = Some(t);
            points.push((x[1], x[2]));
            if !inside(&x) && points.len() > 3 {
                break;
            }
        }
        if stalled && points.len() < 4 {
            log::warn!(
                "secondary-curve continuation stalled immediately at ({:e}, {:e})",
                seed[1],
                seed[2]
            );
            continue;
        }
        let name = if curves.is_empty() {
            "T1".to_string()
        } else {
            format!("T1_{}", idx)
        };
        curves.push(SampledCurve { name, points });
    }
    if curves.is_empty() {
        let s = seeds[0];
        return Err(Error::ContinuationStalled(s[1], s[2]));
    }
    Ok(curves)
}

/// Row-major cell grid over the `(d1, s)` plane around a Turing-Turing point.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RegionGrid {
    pub d1_min: f64,
    pub d1_max: f64,
    pub s_min: f64,
    pub s_max: f64,
    pub n_d1: usize,
    pub n_s: usize,
}

impl RegionGrid {
    /// Window of half-width `wd` in `d1` and `ws` in `s` around the point.
    pub fn centered(tt: (f64, f64), wd: f64, ws: f64, n: usize) -> Self {
        Self {
            d1_min: tt.0 - wd,
            d1_max: tt.0 + wd,
            s_min: tt.1 - ws,
            s_max: tt.1 + ws,
            n_d1: n,
            n_s: n,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RegionCell {
    pub d1: f64,
    pub s: f64,
    pub eps1: f64,
    pub eps2: f64,
    /// canonical census string, e.g. `A0:u Z1:s Z1:s XY:x XY:x`
    pub fingerprint: String,
    pub region_label: Option<String>,
    pub n_stable: usize,
    pub n_saddle: usize,
    pub n_unstable: usize,
    pub degenerate: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RegionMap {
    pub grid: RegionGrid,
    /// cells in row-major order: `s` varies fastest within a `d1` row
    pub cells: Vec<RegionCell>,
}

fn census_fingerprint(eqs: &[NfEquilibrium]) -> (String, bool) {
    let mut parts: Vec<String> = eqs
        .iter()
        .map(|e| {
            let s = match e.stability {
                Stability::Stable => "s",
                Stability::Saddle => "x",
                Stability::Unstable => "u",
                Stability::Degenerate => "d",
            };
            format!("{}:{}", e.label.kind(), s)
        })
        .collect();
    parts.sort();
    let degenerate = eqs.iter().any(|e| e.stability == Stability::Degenerate);
    (parts.join(" "), degenerate)
}

/// The two worked reference examples divide the plane into six regions; this
/// maps a census fingerprint onto those labels. Censuses outside the tables
/// return `None` (a legitimately new region).
pub fn reference_region_label(resonance: ResonanceCase, fingerprint: &str) -> Option<String> {
    let table: &[(&str, &str)] = match resonance {
        ResonanceCase::Generic => &[
            ("A0:s", "D1"),
            ("A0:x Z2:s Z2:s", "D2"),
            ("A0:u Z1:x Z1:x Z2:s Z2:s", "D3"),
            ("A0:u XY:x XY:x XY:x XY:x Z1:s Z1:s Z2:s Z2:s", "D4"),
            ("A0:u Z1:s Z1:s Z2:x Z2:x", "D5"),
            ("A0:x Z1:s Z1:s", "D6"),
        ],
        ResonanceCase::OneTwo => &[
            ("A0:s XY:s XY:s XY:x XY:x", "D1"),
            ("A0:x XY:s XY:s XY:x XY:x Z2:s Z2:s", "D2"),
            ("A0:x XY:s XY:s Z2:s Z2:x", "D3"),
            ("A0:u XY:s XY:s XY:x XY:x Z2:s Z2:x", "D4"),
            ("A0:u XY:s XY:s Z2:x Z2:x", "D5"),
            ("A0:x XY:s XY:s", "D6"),
        ],
        ResonanceCase::OneThree => &[],
    };
    let mut key: Vec<&str> = fingerprint.split(' ').collect();
    key.sort_unstable();
    let key = key.join(" ");
    table
        .iter()
        .find(|(f, _)| *f == key)
        .map(|(_, l)| (*l).to_string())
}

/// Classifies every grid cell by its equilibrium census. Cells are
/// processed in parallel and merged in row-major order.
pub fn region_classify(coeffs: &NfCoefficients, grid: &RegionGrid) -> RegionMap {
    use rayon::prelude::*;
    let tt = coeffs.tt;
    let cells: Vec<RegionCell> = (0..grid.n_d1 * grid.n_s)
        .into_par_iter()
        .map(|idx| {
            let i = idx / grid.n_s;
            let j = idx % grid.n_s;
            let d1 = grid.d1_min
                + (grid.d1_max - grid.d1_min) * i as f64 / (grid.n_d1 - 1).max(1) as f64;
            let s =
                grid.s_min + (grid.s_max - grid.s_min) * j as f64 / (grid.n_s - 1).max(1) as f64;
            let eps = (d1 - tt.d_star, s - tt.s_star);
            let nf = TruncatedNf::new(coeffs, eps);
            match nf_equilibria(&nf) {
                Ok(eqs) => {
                    let (fingerprint, degenerate) = census_fingerprint(&eqs);
                    let region_label = if degenerate {
                        None
                    } else {
                        reference_region_label(coeffs.resonance, &fingerprint)
                    };
                    RegionCell {
                        d1,
                        s,
                        eps1: eps.0,
                        eps2: eps.1,
                        n_stable: eqs
                            .iter()
                            .filter(|e| e.stability == Stability::Stable)
                            .count(),
                        n_saddle: eqs
                            .iter()
                            .filter(|e| e.stability == Stability::Saddle)
                            .count(),
                        n_unstable: eqs
                            .iter()
                            .filter(|e| e.stability == Stability::Unstable)
                            .count(),
                        fingerprint,
                        region_label,
                        degenerate,
                    }
                }
                Err(_) => RegionCell {
                    d1,
                    s,
                    eps1: eps.0,
                    eps2: eps.1,
                    fingerprint: "unknown".into(),
                    region_label: None,
                    n_stable: 0,
                    n_saddle: 0,
                    n_unstable: 0,
                    degenerate: true,
                },
            }
        })
        .collect();
    RegionMap { grid: *grid, cells }
}

/// Classical fixed-step RK4 with a step-halving accuracy check: the whole
/// trajectory is re-integrated at half the step until the endpoints agree to
/// a relative drift of 1e-8.
pub fn nf_trajectory(
    nf: &TruncatedNf,
    z0: Vector2<f64>,
    t_end: f64,
    dt: f64,
) -> Result<Vec<(f64, f64, f64)>> {
    if !(dt > 0.0 && t_end > 0.0 && z0.norm().is_finite()) {
        return Err(Error::InvalidConfig(
            "trajectory needs finite z0 and positive dt, t_end".into(),
        ));
    }
    let run = |step: f64| -> Vec<(f64, f64, f64)> {
        let n = (t_end / step).ceil() as usize;
        let mut z = z0;
        let mut out = Vec::with_capacity(n + 1);
        out.push((0.0, z[0], z[1]));
        for i in 0..n {
            let k1 = nf.rhs(&z);
            let k2 = nf.rhs(&(z + 0.5 * step * k1));
            let k3 = nf.rhs(&(z + 0.5 * step * k2));
            let k4 = nf.rhs(&(z + step * k3));
            z += step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            out.push((step * (i + 1) as f64, z[0], z[1]));
        }
        out
    };
    let mut step = dt;
    for _ in 0..8 {
        let coarse = run(step);
        let fine = run(0.5 * step);
        let (_, x1, y1) = *coarse.last().unwrap();
        let (_, x2, y2) = *fine.last().unwrap();
        let drift = ((x1 - x2).powi(2) + (y1 - y2).powi(2)).sqrt();
        let scale = 1.0 + (x2 * x2 + y2 * y2).sqrt();
        if drift / scale < 1e-8 {
            return Ok(coarse);
        }
        step *= 0.5;
    }
    Err(Error::StepSizeUnderflow(step))
}
