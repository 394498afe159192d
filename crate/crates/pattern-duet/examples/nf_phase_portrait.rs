//! Phase analysis of the truncated normal form at a chosen parameter point:
//! equilibria with stability, plus a trajectory from a small perturbation.
//!
//! Run with: `cargo run --release --example nf_phase_portrait`

use nalgebra::Vector2;
use pattern_duet::kinetics::ModelParams;
use pattern_duet::nf_dynamics::{nf_equilibria, nf_trajectory, TruncatedNf};
use pattern_duet::normal_form::normal_form_at;

fn main() {
    let (_, nf) = normal_form_at(&ModelParams::set1(), 2, 3).unwrap();
    // the quad-stability point of the worked example
    let (d1, s) = (0.0051, 0.2064);
    let eps = (d1 - nf.tt.d_star, s - nf.tt.s_star);
    let truncated = TruncatedNf::new(&nf, eps);

    println!(
        "(d1, s) = ({d1}, {s}), eps = ({:+.5}, {:+.5})",
        eps.0, eps.1
    );
    println!("equilibria:");
    for e in nf_equilibria(&truncated).unwrap() {
        println!(
            "  {:?} at ({:+.5}, {:+.5})  eig re = ({:+.5}, {:+.5})  {:?}",
            e.label, e.z.0, e.z.1, e.eigenvalues[0].0, e.eigenvalues[1].0, e.stability
        );
    }

    let traj = nf_trajectory(&truncated, Vector2::new(0.01, 0.01), 6000.0, 0.05).unwrap();
    let (t, z1, z2) = traj.last().unwrap();
    println!("\ntrajectory from (0.01, 0.01) ends at ({z1:+.5}, {z2:+.5}) at t = {t}");
}
