//! Interior equilibrium and linearization of the built-in predator-prey
//! kinetics for both reference parameter sets.
//!
//! Run with: `cargo run --release --example equilibrium_and_linearization`

use pattern_duet::kinetics::{find_interior_equilibrium, linearize, ModelParams};

fn main() {
    for (name, params) in [
        ("set 1", ModelParams::set1()),
        ("set 2", ModelParams::set2()),
    ] {
        let eq = find_interior_equilibrium(&params).expect("interior equilibrium");
        let lin = linearize(&params, &eq);
        let residual = params.reaction(eq.u, eq.v);
        println!(
            "{name}: m={}, a={}, b={}, d2={}",
            params.m, params.a, params.b, params.d2
        );
        println!("  (u*, v*)  = ({:.6}, {:.6})", eq.u, eq.v);
        println!("  residual  = ({:+.2e}, {:+.2e})", residual[0], residual[1]);
        println!("  s0        = {:.6}", lin.s0);
        println!("  sigma     = {:.6}", lin.sigma);
        println!(
            "  s0+sigma  = {:.6}  (< 0 required for Turing-Turing points)",
            lin.s0 + lin.sigma
        );
        println!();
    }
}
