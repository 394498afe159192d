//! Dispersion relation, Turing curves, Turing-Turing points, and the
//! spectral side conditions that make a point a genuine double zero.
//!
//! Run with: `cargo run --release --example turing_curves_and_tt_points`

use pattern_duet::kinetics::{find_interior_equilibrium, linearize, ModelParams};
use pattern_duet::linear_analysis::{
    critical_eigenvectors, critical_mode_index, dispersion, spectrum_check, tt_point, turing_curve,
};

fn main() {
    let params = ModelParams::set1();
    let eq = find_interior_equilibrium(&params).unwrap();
    let lin = linearize(&params, &eq);

    println!("dispersion at (d1, s) = ({}, {}):", params.d1, params.s);
    println!("  k   Theta(k)      Delta(k)");
    for k in 0..=6 {
        let dp = dispersion(&params, &lin, k);
        println!("  {k}  {:+.6}   {:+.6}", dp.theta, dp.delta);
    }

    let k0 = critical_mode_index(&params, &lin).unwrap();
    println!("\ncritical mode index k0* = {k0}");

    println!("\nTuring curves L_k (first three samples each):");
    for k in 1..=4 {
        let curve = turing_curve(&params, &lin, k, 200).unwrap();
        let head: Vec<String> = curve
            .samples
            .iter()
            .take(3)
            .map(|(d1, s)| format!("({d1:.5}, {s:.5})"))
            .collect();
        println!("  L{k}: {}", head.join(" "));
    }

    let tt = tt_point(&params, &lin, 2, 3).unwrap();
    println!(
        "\n(2,3)-mode Turing-Turing point: (d*, s*) = ({:.6}, {:.6})",
        tt.d_star, tt.s_star
    );

    let crit = critical_eigenvectors(&params, &lin, &tt).unwrap();
    println!(
        "  phi1 = ({:.4}, {:.4})   phi2 = ({:.4}, {:.4})",
        crit.phi1[0], crit.phi1[1], crit.phi2[0], crit.phi2[1]
    );
    println!(
        "  psi1 = ({:.4}, {:.4})   psi2 = ({:.4}, {:.4})",
        crit.psi1[0], crit.psi1[1], crit.psi2[0], crit.psi2[1]
    );

    let report = spectrum_check(&params, &lin, &tt, 50);
    println!(
        "\nspectrum over k <= {}: zero modes {:?}, margin {:.4}, ok = {}",
        report.k_cut, report.zero_modes, report.margin, report.ok
    );
}
