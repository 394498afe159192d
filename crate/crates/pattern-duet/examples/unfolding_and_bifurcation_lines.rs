//! Unfolding classification of the generic normal form and the local
//! bifurcation lines in the d1-s plane for both reference sets.
//!
//! Run with: `cargo run --release --example unfolding_and_bifurcation_lines`

use pattern_duet::kinetics::ModelParams;
use pattern_duet::nf_dynamics::{classify_unfolding, nf_bifurcation_lines};
use pattern_duet::normal_form::normal_form_at;

fn main() {
    let (_, nf) = normal_form_at(&ModelParams::set1(), 2, 3).unwrap();
    let u = classify_unfolding(&nf).unwrap();
    println!("set 1 (2,3) unfolding:");
    println!("  case          = {:?}", u.case_label);
    println!("  b0            = {:.4}", u.b0);
    println!("  c0            = {:.4}", u.c0);
    println!("  d0            = {:+}", u.d0);
    println!("  d0 - b0 c0    = {:.4}", u.d0_minus_b0c0);
    println!("  time reversed = {}", u.time_reversed);

    let lines = nf_bifurcation_lines(&nf, (0.002, 0.05)).unwrap();
    println!(
        "\nset 1 local lines through (d*, s*) = ({:.5}, {:.5}):",
        nf.tt.d_star, nf.tt.s_star
    );
    for line in &lines.lines {
        let half = match line.half_plane {
            Some(-1) => ", d1 <= d*",
            Some(_) => ", d1 >= d*",
            None => "",
        };
        println!("  {}: s = s* {:+.4} (d1 - d*){half}", line.name, line.slope);
    }

    let (_, nf2) = normal_form_at(&ModelParams::set2(), 1, 2).unwrap();
    let lines2 = nf_bifurcation_lines(&nf2, (0.002, 0.05)).unwrap();
    println!("\nset 2 local lines:");
    for line in &lines2.lines {
        println!("  {}: s = s* {:+.4} (d1 - d*)", line.name, line.slope);
    }
    for curve in &lines2.curves {
        let (e1, e2) = curve.points[curve.points.len() / 2];
        println!(
            "  {}: sampled collision curve, {} points, midpoint eps = ({:+.2e}, {:+.2e})",
            curve.name,
            curve.points.len(),
            e1,
            e2
        );
    }
}
