//! Acceptance suite: every reference value the toolkit must reproduce, one
//! pass/fail line per criterion. Run with `cargo test --test acceptance`
//! (add `-- --nocapture` to see the lines for passing criteria too).

use nalgebra::Vector2;
use pattern_duet::kinetics::{find_interior_equilibrium, linearize, KineticsModel, ModelParams};
use pattern_duet::linear_analysis::{critical_eigenvectors, critical_mode_index, tt_point};
use pattern_duet::nf_dynamics::{
    classify_unfolding, nf_bifurcation_lines, nf_equilibria, TruncatedNf, UnfoldingCase,
};
use pattern_duet::normal_form::{center_manifold_blocks, normal_form_at, CaseTerms};
use pattern_duet::pde_sim::{
    builtin_scenario, classify_attractor, integrate, modal_signature, run_scenario, AttractorLabel,
    FieldState, Grid1D, ModalSignature, SimConfig, DEFAULT_K_SIG,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::time::Instant;

fn check(line: &str, ok: bool) {
    println!("[{}] {line}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "{line}");
}

fn rel(x: f64, reference: f64) -> f64 {
    (x - reference).abs() / reference.abs()
}

#[test]
fn criterion_01_equilibria_match_reference_precision() {
    let eq1 = find_interior_equilibrium(&ModelParams::set1()).unwrap();
    check(
        &format!(
            "criterion 1a: set-1 (u*, v*) = ({:.4}, {:.4}) vs (0.245, 0.245)",
            eq1.u, eq1.v
        ),
        (eq1.u - 0.245).abs() < 5e-4 && (eq1.v - 0.245).abs() < 5e-4,
    );
    let eq2 = find_interior_equilibrium(&ModelParams::set2()).unwrap();
    check(
        &format!(
            "criterion 1b: set-2 (u*, v*) = ({:.5}, {:.5}) vs (0.2716, 0.2716)",
            eq2.u, eq2.v
        ),
        (eq2.u - 0.2716).abs() < 5e-5 && (eq2.v - 0.2716).abs() < 5e-5,
    );
}

#[test]
fn criterion_02_linearization_within_half_percent() {
    let p1 = ModelParams::set1();
    let lin1 = linearize(&p1, &find_interior_equilibrium(&p1).unwrap());
    check(
        &format!(
            "criterion 2a: set-1 s0 = {:.5} vs 0.0748, sigma = {:.4} vs -0.673",
            lin1.s0, lin1.sigma
        ),
        rel(lin1.s0, 0.0748) < 5e-3 && rel(lin1.sigma, -0.673) < 5e-3,
    );
    let p2 = ModelParams::set2();
    let lin2 = linearize(&p2, &find_interior_equilibrium(&p2).unwrap());
    check(
        &format!(
            "criterion 2b: set-2 s0 = {:.5} vs 0.0555, sigma = {:.5} vs -0.7092",
            lin2.s0, lin2.sigma
        ),
        rel(lin2.s0, 0.0555) < 5e-3 && rel(lin2.sigma, -0.7092) < 5e-3,
    );
}

#[test]
fn criterion_03_tt_points_and_critical_mode_indices() {
    let p1 = ModelParams::set1();
    let lin1 = linearize(&p1, &find_interior_equilibrium(&p1).unwrap());
    let tt1 = tt_point(&p1, &lin1, 2, 3).unwrap();
    check(
        &format!(
            "criterion 3a: (d*_23, s*_23) = ({:.5}, {:.5}) vs (0.0056, 0.2364)",
            tt1.d_star, tt1.s_star
        ),
        rel(tt1.d_star, 0.0056) < 1e-2 && rel(tt1.s_star, 0.2364) < 1e-2,
    );
    let p2 = ModelParams::set2();
    let lin2 = linearize(&p2, &find_interior_equilibrium(&p2).unwrap());
    let tt2 = tt_point(&p2, &lin2, 1, 2).unwrap();
    check(
        &format!(
            "criterion 3b: (d*_12, s*_12) = ({:.6}, {:.5}) vs (0.01095, 0.2679)",
            tt2.d_star, tt2.s_star
        ),
        rel(tt2.d_star, 0.01095) < 1e-2 && rel(tt2.s_star, 0.2679) < 1e-2,
    );
    let k1 = critical_mode_index(&p1, &lin1).unwrap();
    let k2 = critical_mode_index(&p2, &lin2).unwrap();
    check(
        &format!("criterion 3c: k0* = {k1} (set 1, expect 2) and {k2} (set 2, expect 1)"),
        k1 == 2 && k2 == 1,
    );
}

#[test]
fn criterion_04_generic_normal_form_coefficients() {
    let (_, nf) = normal_form_at(&ModelParams::set1(), 2, 3).unwrap();
    let got = [
        nf.lin[(0, 0)],
        nf.lin[(0, 1)],
        nf.lin[(1, 0)],
        nf.lin[(1, 1)],
        nf.z1_cubed(),
        nf.z1_z2sq(),
        nf.z1sq_z2(),
        nf.z2_cubed(),
    ];
    let reference = [
        -4.0702, -0.20782, -9.0336, -0.099536, -1.6069, -5.9052, -4.1872, -3.2439,
    ];
    let worst = got
        .iter()
        .zip(&reference)
        .map(|(g, p)| rel(*g, *p))
        .fold(0.0, f64::max);
    check(
        &format!("criterion 4: all 8 coefficients of the (2,3) normal form within 1% (worst {worst:.2e})"),
        worst < 1e-2,
    );
}

#[test]
fn criterion_05_one_two_normal_form_coefficients() {
    let (_, nf) = normal_form_at(&ModelParams::set2(), 1, 2).unwrap();
    let CaseTerms::OneTwo { g1100_11, g2000_12 } = nf.case else {
        panic!("(1,2) must classify as the 1:2 resonance")
    };
    let got = [
        nf.lin[(0, 0)],
        nf.lin[(0, 1)],
        nf.lin[(1, 0)],
        nf.lin[(1, 1)],
        g1100_11,
        g2000_12 / 2.0,
        nf.z1_cubed(),
        nf.z1_z2sq(),
        nf.z1sq_z2(),
        nf.z2_cubed(),
    ];
    let reference = [
        -1.0105, -0.1574, -4.0028, -0.04291, -0.3461, -0.2750, -2.8448, -2.4251, 1.2199, -2.5756,
    ];
    let worst = got
        .iter()
        .zip(&reference)
        .map(|(g, p)| rel(*g, *p))
        .fold(0.0, f64::max);
    check(
        &format!(
            "criterion 5: all 10 coefficients of the (1,2) normal form within 1%, \
             incl. quadratic pair and +1.2199 (worst {worst:.2e})"
        ),
        worst < 1e-2 && got[8] > 0.0,
    );
}

#[test]
fn criterion_06_unfolding_class_ib() {
    let (_, nf) = normal_form_at(&ModelParams::set1(), 2, 3).unwrap();
    let u = classify_unfolding(&nf).unwrap();
    check(
        &format!(
            "criterion 6: unfolding case {:?} (expect Ib), b0 = {:.4} vs 1.820, c0 = {:.4} vs 2.606, \
             d0 = {} after time reversal = {}",
            u.case_label, u.b0, u.c0, u.d0, u.time_reversed
        ),
        u.case_label == UnfoldingCase::Ib
            && rel(u.b0, 1.820) < 5e-3
            && rel(u.c0, 2.606) < 5e-3
            && u.d0 == 1
            && u.time_reversed,
    );
}

#[test]
fn criterion_07_bifurcation_line_slopes() {
    let (_, nf1) = normal_form_at(&ModelParams::set1(), 2, 3).unwrap();
    let lines1 = nf_bifurcation_lines(&nf1, (0.002, 0.05)).unwrap();
    let slope = |name: &str| lines1.lines.iter().find(|l| l.name == name).unwrap().slope;
    let pairs = [
        ("L2", slope("L2"), -19.5852),
        ("L3", slope("L3"), -90.7571),
        ("T1", slope("T1"), 464.7488),
        ("T2", slope("T2"), -3.5568),
    ];
    let worst = pairs
        .iter()
        .map(|(_, g, p)| rel(*g, *p))
        .fold(0.0, f64::max);
    check(
        &format!("criterion 7a: (3.7) slopes L2/L3/T1/T2 within 1% (worst {worst:.2e})"),
        worst < 1e-2,
    );
    let (_, nf2) = normal_form_at(&ModelParams::set2(), 1, 2).unwrap();
    let lines2 = nf_bifurcation_lines(&nf2, (0.002, 0.05)).unwrap();
    let l2 = lines2.lines.iter().find(|l| l.name == "L2").unwrap().slope;
    check(
        &format!(
            "criterion 7b: (3.8) L2 slope {:.4} vs -93.2920 within 1%",
            l2
        ),
        rel(l2, -93.2920) < 1e-2,
    );
}

#[test]
fn criterion_08_axis_amplitude_expansions() {
    let (_, nf) = normal_form_at(&ModelParams::set1(), 2, 3).unwrap();
    let a1_eps1 = -nf.lin[(0, 0)] / nf.z1_cubed();
    let a2_eps1 = -nf.lin[(1, 0)] / nf.z2_cubed();
    check(
        &format!(
            "criterion 8: A1 amplitude^2 eps1-coefficient {a1_eps1:.4} vs -2.5330 and \
             A2 {a2_eps1:.4} vs -2.7848 within 0.5%"
        ),
        rel(a1_eps1, -2.5330) < 5e-3 && rel(a2_eps1, -2.7848) < 5e-3,
    );
}

fn run_group(names: &[&str]) -> Vec<(String, AttractorLabel, ModalSignature)> {
    use rayon::prelude::*;
    let grid = Grid1D::new(256, 1.0).unwrap();
    names
        .par_iter()
        .map(|name| {
            let scen = builtin_scenario(name).unwrap();
            let res = run_scenario(&scen, &grid, &SimConfig::default(), DEFAULT_K_SIG).unwrap();
            assert!(res.outcome.steady, "{name} did not reach steadiness");
            (name.to_string(), res.label, res.signature)
        })
        .collect()
}

fn distinct_count(results: &[(String, AttractorLabel, ModalSignature)]) -> usize {
    let mut reps: Vec<&ModalSignature> = Vec::new();
    for (_, _, sig) in results {
        if reps.iter().all(|r| sig.distinct_from(r)) {
            reps.push(sig);
        }
    }
    reps.len()
}

#[test]
fn criterion_09a_fig3_quad_stability() {
    let started = Instant::now();
    let results = run_group(&["fig3a", "fig3b", "fig3c", "fig3d"]);
    let elapsed = started.elapsed().as_secs_f64();
    let labels: Vec<String> = results
        .iter()
        .map(|(n, l, _)| format!("{n}={}", l.short()))
        .collect();
    let pure2 = results
        .iter()
        .filter(|(_, l, _)| matches!(l, AttractorLabel::PureMode { k: 2, .. }))
        .count();
    let pure3 = results
        .iter()
        .filter(|(_, l, _)| matches!(l, AttractorLabel::PureMode { k: 3, .. }))
        .count();
    check(
        &format!(
            "criterion 9a: fig3 gives 4 distinct stable attractors PureMode(2,+-)/PureMode(3,+-) \
             [{}] in {elapsed:.0}s (< 120s)",
            labels.join(", ")
        ),
        distinct_count(&results) == 4 && pure2 == 2 && pure3 == 2 && elapsed < 120.0,
    );
}

#[test]
fn criterion_09b_fig6_tri_stability() {
    let results = run_group(&["fig6a", "fig6b", "fig6c"]);
    let labels: Vec<String> = results
        .iter()
        .map(|(n, l, _)| format!("{n}={}", l.short()))
        .collect();
    let superpositions = results
        .iter()
        .filter(|(_, l, _)| matches!(l, AttractorLabel::Superposition { .. }))
        .count();
    let constants = results
        .iter()
        .filter(|(_, l, _)| matches!(l, AttractorLabel::ConstantEq))
        .count();
    check(
        &format!(
            "criterion 9b: fig6 tri-stability {{Superposition(1,2) x2, ConstantEq}} [{}]",
            labels.join(", ")
        ),
        distinct_count(&results) == 3 && superpositions == 2 && constants == 1,
    );
}

#[test]
fn criterion_09c_fig7_quad_stability() {
    let results = run_group(&["fig7a", "fig7b", "fig7c", "fig7d"]);
    let labels: Vec<String> = results
        .iter()
        .map(|(n, l, _)| format!("{n}={}", l.short()))
        .collect();
    let superpositions = results
        .iter()
        .filter(|(_, l, _)| matches!(l, AttractorLabel::Superposition { .. }))
        .count();
    let pure2 = results
        .iter()
        .filter(|(_, l, _)| matches!(l, AttractorLabel::PureMode { k: 2, .. }))
        .count();
    check(
        &format!(
            "criterion 9c: fig7 quad-stability {{Superposition(1,2) x2, PureMode(2,+-)}} [{}]",
            labels.join(", ")
        ),
        distinct_count(&results) == 4 && superpositions == 2 && pure2 == 2,
    );
}

#[test]
fn criterion_09d_fig8_tri_stability_with_saddle_escape() {
    let results = run_group(&["fig8a", "fig8b", "fig8c", "fig8d"]);
    let labels: Vec<String> = results
        .iter()
        .map(|(n, l, _)| format!("{n}={}", l.short()))
        .collect();
    let fig8d = &results.iter().find(|(n, _, _)| n == "fig8d").unwrap().1;
    check(
        &format!(
            "criterion 9d: fig8 tri-stability with fig8d escaping to a superposition state [{}]",
            labels.join(", ")
        ),
        distinct_count(&results) == 3 && matches!(fig8d, AttractorLabel::Superposition { .. }),
    );
}

#[test]
fn criterion_10a_qc_symmetry_and_fd_consistency() {
    let mut rng = StdRng::seed_from_u64(101);
    let mut ok = true;
    for p in [ModelParams::set1(), ModelParams::set2()] {
        let model = KineticsModel::crowley_martin(&p).unwrap();
        let eq = model.equilibrium();
        let fd_model = KineticsModel::from_reaction(move |u, v| p.reaction(u, v), eq);
        for _ in 0..20 {
            let x = Vector2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let y = Vector2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let z = Vector2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            ok &= model.q(&x, &y) == model.q(&y, &x);
            ok &= model.c(&x, &y, &z) == model.c(&z, &x, &y);
            ok &= (model.q(&x, &y) - fd_model.q(&x, &y)).norm()
                < 1e-6 * (1.0 + model.q(&x, &y).norm());
            ok &= (model.c(&x, &y, &z) - fd_model.c(&x, &y, &z)).norm()
                < 1e-5 * (1.0 + model.c(&x, &y, &z).norm());
        }
    }
    check(
        "criterion 10a: Q/C symmetry exact, finite-difference consistency 1e-6/1e-5",
        ok,
    );
}

#[test]
fn criterion_10b_eigenvector_residuals() {
    let mut worst = 0.0f64;
    for (p, (i, j)) in [(ModelParams::set1(), (2, 3)), (ModelParams::set2(), (1, 2))] {
        let lin = linearize(&p, &find_interior_equilibrium(&p).unwrap());
        let tt = tt_point(&p, &lin, i, j).unwrap();
        let crit = critical_eigenvectors(&p, &lin, &tt).unwrap();
        for jj in [1u8, 2] {
            let (phi, psi, _) = crit.pair(jj);
            let m = crit.char_matrix(crit.critical_mode(jj));
            worst = worst
                .max((m * phi).norm())
                .max((psi * m).norm())
                .max(((psi * phi)[(0, 0)] - 1.0).abs());
        }
    }
    check(
        &format!(
            "criterion 10b: eigenvector residuals and normalization (worst {worst:.2e} < 1e-10)"
        ),
        worst < 1e-10,
    );
}

#[test]
fn criterion_10c_bordered_solve_orthogonality() {
    let p = ModelParams::set2();
    let (critical, nf) = normal_form_at(&p, 1, 2).unwrap();
    let at_tt = p.at_tt_point(nf.tt.d_star, nf.tt.s_star);
    let model = KineticsModel::crowley_martin(&at_tt).unwrap();
    let blocks = center_manifold_blocks(&critical, &model).unwrap();
    let c1 = (critical.psi2 * blocks.h2000_2k1)[(0, 0)].abs();
    let c2 = (critical.psi1 * blocks.h1100_diff)[(0, 0)].abs();
    check(
        &format!(
            "criterion 10c: bordered-solve orthogonality |psi.h| = {:.2e}, {:.2e} < 1e-12",
            c1, c2
        ),
        c1 < 1e-12 && c2 < 1e-12,
    );
}

fn brute_force_count(nf: &TruncatedNf, r: f64, n: usize) -> usize {
    let mut found: Vec<Vector2<f64>> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let mut z = Vector2::new(
                r * (2.0 * i as f64 / (n - 1) as f64 - 1.0),
                r * (2.0 * j as f64 / (n - 1) as f64 - 1.0),
            );
            let mut ok = false;
            for _ in 0..80 {
                let f = nf.rhs(&z);
                if f.norm() < 1e-13 {
                    ok = true;
                    break;
                }
                match nf.jacobian(&z).lu().solve(&f) {
                    Some(d) => z -= d,
                    None => break,
                }
            }
            if ok && z.norm() < 2.0 * r && !found.iter().any(|q| (q - z).norm() < 1e-7) {
                found.push(z);
            }
        }
    }
    found.len()
}

#[test]
fn criterion_10d_equilibrium_counts_vs_oracle() {
    let cases = [
        normal_form_at(&ModelParams::set1(), 2, 3).unwrap().1,
        normal_form_at(&ModelParams::set2(), 1, 2).unwrap().1,
        normal_form_at(&ModelParams::set1(), 1, 3).unwrap().1,
    ];
    let mut rng = StdRng::seed_from_u64(202);
    let mut ok = true;
    for coeffs in &cases {
        for _ in 0..20 {
            let eps = (rng.gen_range(-8e-4..8e-4), rng.gen_range(-0.03..0.03));
            let nf = TruncatedNf::new(coeffs, eps);
            let ours = nf_equilibria(&nf).unwrap().len();
            let brute = brute_force_count(&nf, 0.4, 81);
            if ours != brute {
                println!(
                    "  count mismatch: case {:?} eps {eps:?}: {ours} vs oracle {brute}",
                    coeffs.resonance
                );
                ok = false;
            }
        }
    }
    check(
        "criterion 10d: normal-form equilibrium counts match grid-seeded oracle (20 eps x 3 cases)",
        ok,
    );
}

#[test]
fn criterion_10e_reflection_equivariance() {
    let scen = builtin_scenario("fig3a").unwrap();
    let grid = Grid1D::new(256, 1.0).unwrap();
    let config = SimConfig {
        t_max: 100.0,
        snapshot_stride: 400,
        ..SimConfig::default()
    };
    let ic = FieldState::from_modes(
        &grid,
        scen.ic.base_u,
        &[(2, -0.02), (3, 0.04)],
        scen.ic.base_v,
        &scen.ic.modes_v,
    );
    let a = integrate(&scen.params, &grid, &config, &ic).unwrap();
    let b = integrate(&scen.params, &grid, &config, &ic.reflected()).unwrap();
    let worst = a
        .history
        .iter()
        .zip(&b.history)
        .map(|(x, y)| x.reflected().max_abs_diff(y))
        .fold(0.0, f64::max);
    check(
        &format!("criterion 10e: simulator reflection equivariance (worst snapshot diff {worst:.2e} < 1e-10)"),
        worst < 1e-10,
    );
}

/// Distance between final states up to the exact x -> l*pi - x equivariance
/// (symmetric-unstable transients make the escape sign a coin flip).
fn state_distance_mod_reflection(a: &FieldState, b: &FieldState) -> f64 {
    a.max_abs_diff(b).min(a.reflected().max_abs_diff(b))
}

#[test]
fn criterion_10f_grid_refinement_convergence() {
    use rayon::prelude::*;
    let worst: Vec<(String, f64)> = pattern_duet::pde_sim::BUILTIN_SCENARIOS
        .par_iter()
        .map(|name| {
            let scen = builtin_scenario(name).unwrap();
            let coarse = Grid1D::new(512, 1.0).unwrap();
            let fine = coarse.refined();
            let config = SimConfig::default();
            let run = |grid: &Grid1D| {
                let ic = FieldState::from_modes(
                    grid,
                    scen.ic.base_u,
                    &scen.ic.modes_u,
                    scen.ic.base_v,
                    &scen.ic.modes_v,
                );
                integrate(&scen.params, grid, &config, &ic)
                    .unwrap()
                    .final_state
            };
            let a = run(&coarse);
            let b = run(&fine);
            // compare on the shared coarse nodes
            let b_on_coarse = FieldState {
                t: b.t,
                u: b.u.iter().step_by(2).copied().collect(),
                v: b.v.iter().step_by(2).copied().collect(),
            };
            (
                name.to_string(),
                state_distance_mod_reflection(&a, &b_on_coarse),
            )
        })
        .collect();
    let max = worst.iter().map(|(_, d)| *d).fold(0.0, f64::max);
    for (name, d) in &worst {
        println!("  grid refinement {name}: {d:.2e}");
    }
    check(
        &format!("criterion 10f: grid refinement changes steady states < 1e-5 for all scenarios (worst {max:.2e})"),
        max < 1e-5,
    );
}

#[test]
fn criterion_10g_time_step_convergence() {
    use rayon::prelude::*;
    let worst: Vec<(String, f64)> = pattern_duet::pde_sim::BUILTIN_SCENARIOS
        .par_iter()
        .map(|name| {
            let scen = builtin_scenario(name).unwrap();
            let grid = Grid1D::new(256, 1.0).unwrap();
            let run = |dt: f64| {
                let config = SimConfig {
                    dt,
                    ..SimConfig::default()
                };
                let ic = FieldState::from_modes(
                    &grid,
                    scen.ic.base_u,
                    &scen.ic.modes_u,
                    scen.ic.base_v,
                    &scen.ic.modes_v,
                );
                integrate(&scen.params, &grid, &config, &ic)
                    .unwrap()
                    .final_state
            };
            let a = run(0.05);
            let b = run(0.025);
            (name.to_string(), state_distance_mod_reflection(&a, &b))
        })
        .collect();
    let max = worst.iter().map(|(_, d)| *d).fold(0.0, f64::max);
    check(
        &format!("criterion 10g: dt halving changes steady states < 1e-6 for all scenarios (worst {max:.2e})"),
        max < 1e-6,
    );
}

#[test]
fn criterion_11_soft_nf_amplitude_cross_validation() {
    // soft check (warning, not failure): at eps = (-5e-4, 0), norm 5e-4 <=
    // 1e-3, the simulated pure-mode amplitudes should match sqrt(-a/c) of
    // the normal form within 25%
    let p = ModelParams::set1();
    let (_, nf) = normal_form_at(&p, 2, 3).unwrap();
    let eps = (-5e-4, 0.0);
    let at = ModelParams {
        d1: nf.tt.d_star + eps.0,
        s: nf.tt.s_star + eps.1,
        ..p
    };
    let z1_star = (-(nf.lin[(0, 0)] * eps.0) / nf.z1_cubed()).sqrt();
    let z2_star = (-(nf.lin[(1, 0)] * eps.0) / nf.z2_cubed()).sqrt();
    let grid = Grid1D::new(256, 1.0).unwrap();
    let eq = find_interior_equilibrium(&at).unwrap();
    let run_mode = |k: u32, z_star: f64| -> (f64, f64) {
        let ic = FieldState::from_modes(&grid, eq.u, &[(k, -0.02)], eq.v, &[(k, 0.05)]);
        let out = integrate(&at, &grid, &SimConfig::default(), &ic).unwrap();
        let sig = modal_signature(&out.final_state, &eq, &grid, DEFAULT_K_SIG);
        let label = classify_attractor(&sig, out.steady);
        assert!(
            matches!(label, AttractorLabel::PureMode { k: kk, .. } if kk == k),
            "expected PureMode({k}), got {label:?}"
        );
        let measured = sig.a_u[k as usize].abs();
        (measured, (measured - z_star).abs() / z_star)
    };
    let (m1, err1) = run_mode(2, z1_star);
    let (m2, err2) = run_mode(3, z2_star);
    let ok = err1 < 0.25 && err2 < 0.25;
    // report-only: print a warning rather than failing
    println!(
        "[{}] criterion 11 (soft): pure-mode amplitudes vs normal form at |eps| = 5e-4: \
         mode 2 {m1:.4} vs {z1_star:.4} ({:.0}%), mode 3 {m2:.4} vs {z2_star:.4} ({:.0}%)",
        if ok { "PASS" } else { "WARN" },
        err1 * 100.0,
        err2 * 100.0
    );
}
