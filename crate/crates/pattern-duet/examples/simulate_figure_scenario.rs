//! Direct PDE simulation of one built-in figure scenario: integrate to
//! steadiness, project onto cosine modes, classify the attractor.
//!
//! Run with: `cargo run --release --example simulate_figure_scenario -- fig3a`
//! (any of fig3a..fig3d, fig6a..fig6c, fig7a..fig7d, fig8a..fig8d)

use pattern_duet::pde_sim::{builtin_scenario, run_scenario, Grid1D, SimConfig, DEFAULT_K_SIG};

fn main() {
    let name = std::env::args().nth(1).unwrap_or_else(|| "fig3a".into());
    let scenario = builtin_scenario(&name).expect("known scenario name");
    println!(
        "scenario {name}: (d1, s) = ({}, {}), u0 = {} + {:?} cos, v0 = {} + {:?} cos",
        scenario.params.d1,
        scenario.params.s,
        scenario.ic.base_u,
        scenario.ic.modes_u,
        scenario.ic.base_v,
        scenario.ic.modes_v
    );

    let grid = Grid1D::new(256, scenario.params.l).unwrap();
    let config = SimConfig::default();
    let res = run_scenario(&scenario, &grid, &config, DEFAULT_K_SIG).unwrap();

    println!(
        "steady = {} after t = {:.0} ({} steps)",
        res.outcome.steady, res.outcome.final_state.t, res.outcome.steps
    );
    println!("attractor: {}", res.label.short());
    println!("modal amplitudes of u - u*:");
    for (k, a) in res.signature.a_u.iter().enumerate() {
        println!("  a_{k} = {a:+.6}");
    }
    let (umin, umax) = res
        .outcome
        .final_state
        .u
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    println!("final u range: [{umin:.4}, {umax:.4}]");
}
