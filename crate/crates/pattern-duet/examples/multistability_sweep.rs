//! Small multistability sweep: run the initial-condition ensemble over a
//! few (d1, s) cells near the set-2 Turing-Turing point and report the
//! distinct stable attractors found in each cell.
//!
//! Run with: `cargo run --release --example multistability_sweep`

use pattern_duet::kinetics::ModelParams;
use pattern_duet::pde_sim::{sweep, Grid1D, SimConfig, SweepSpec, DEFAULT_K_SIG};

fn main() {
    let base = ModelParams::set2();
    // one column of cells crossing D1 -> D2 territory at d1 = 0.01045
    let spec = SweepSpec {
        base,
        d1_values: vec![0.01045],
        s_values: vec![0.2379, 0.2679, 0.3029],
        seed: 7,
        n_random_ic: 2,
    };
    let grid = Grid1D::new(192, base.l).unwrap();
    let cells = sweep(&spec, &grid, &SimConfig::default(), DEFAULT_K_SIG);

    for cell in &cells {
        println!(
            "(d1, s) = ({:.5}, {:.4}): {} runs, {} nonstationary, {} distinct stable attractors",
            cell.d1,
            cell.s,
            cell.n_runs,
            cell.n_nonstationary,
            cell.attractors.len()
        );
        for a in &cell.attractors {
            println!(
                "    {}   (a1, a2) = ({:+.4}, {:+.4}){}",
                a.label.short(),
                a.signature.a_u[1],
                a.signature.a_u[2],
                if a.generic_basin {
                    ""
                } else {
                    "   [symmetric-subspace only]"
                }
            );
        }
    }
}
