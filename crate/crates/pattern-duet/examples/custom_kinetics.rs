//! Using the generic kinetics interface: supply only a reaction field and
//! let the derivative tensors come from Richardson-extrapolated finite
//! differences, then push the result through the normal-form pipeline.
//!
//! Here the custom field is the built-in kinetics written by hand, so the
//! finite-difference route can be compared against the closed forms.
//!
//! Run with: `cargo run --release --example custom_kinetics`

use nalgebra::Vector2;
use pattern_duet::kinetics::{find_interior_equilibrium, linearize, KineticsModel, ModelParams};
use pattern_duet::linear_analysis::{critical_eigenvectors, tt_point};
use pattern_duet::normal_form::compute_nf;

fn main() {
    let params = ModelParams::set1();
    let eq = find_interior_equilibrium(&params).unwrap();
    let lin = linearize(&params, &eq);
    let tt = tt_point(&params, &lin, 2, 3).unwrap();
    let critical = critical_eigenvectors(&params, &lin, &tt).unwrap();
    let at_tt = params.at_tt_point(tt.d_star, tt.s_star);

    // user-supplied reaction field (polynomial + rational terms only)
    let (m, a, b, s) = (at_tt.m, at_tt.a, at_tt.b, at_tt.s);
    let reaction = move |u: f64, v: f64| {
        Vector2::new(
            u * (1.0 - u) - m * u * v / ((1.0 + a * u) * (1.0 + b * v)),
            s * v * (1.0 - v / u),
        )
    };
    let generic = KineticsModel::from_reaction(reaction, eq);
    let closed = KineticsModel::crowley_martin(&at_tt).unwrap();

    let nf_fd = compute_nf(&tt, &critical, &generic).unwrap();
    let nf_cf = compute_nf(&tt, &critical, &closed).unwrap();

    println!("cubic display coefficients, finite differences vs closed form:");
    for (name, fd, cf) in [
        ("z1^3   ", nf_fd.z1_cubed(), nf_cf.z1_cubed()),
        ("z1 z2^2", nf_fd.z1_z2sq(), nf_cf.z1_z2sq()),
        ("z1^2 z2", nf_fd.z1sq_z2(), nf_cf.z1sq_z2()),
        ("z2^3   ", nf_fd.z2_cubed(), nf_cf.z2_cubed()),
    ] {
        println!(
            "  {name}: {fd:+.6} vs {cf:+.6}   (diff {:.2e})",
            (fd - cf).abs()
        );
    }
}
