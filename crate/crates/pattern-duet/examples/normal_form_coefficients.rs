//! Third-order normal form coefficients for both reference parameter sets:
//! the generic (2,3) interaction and the 1:2 resonant (1,2) interaction.
//!
//! Run with: `cargo run --release --example normal_form_coefficients`

use pattern_duet::kinetics::ModelParams;
use pattern_duet::normal_form::{normal_form_at, CaseTerms};

fn main() {
    let (_, nf) = normal_form_at(&ModelParams::set1(), 2, 3).unwrap();
    println!("set 1, modes (2,3), resonance {:?}:", nf.resonance);
    println!(
        "  dz1/dt = ({:+.4} e1 {:+.5} e2) z1 {:+.4} z1^3 {:+.4} z1 z2^2",
        nf.lin[(0, 0)],
        nf.lin[(0, 1)],
        nf.z1_cubed(),
        nf.z1_z2sq()
    );
    println!(
        "  dz2/dt = ({:+.4} e1 {:+.6} e2) z2 {:+.4} z1^2 z2 {:+.4} z2^3",
        nf.lin[(1, 0)],
        nf.lin[(1, 1)],
        nf.z1sq_z2(),
        nf.z2_cubed()
    );

    let (_, nf2) = normal_form_at(&ModelParams::set2(), 1, 2).unwrap();
    let CaseTerms::OneTwo { g1100_11, g2000_12 } = nf2.case else {
        unreachable!()
    };
    println!("\nset 2, modes (1,2), resonance {:?}:", nf2.resonance);
    println!(
        "  dz1/dt = ({:+.4} e1 {:+.4} e2) z1 {:+.4} z1 z2 {:+.4} z1^3 {:+.4} z1 z2^2",
        nf2.lin[(0, 0)],
        nf2.lin[(0, 1)],
        g1100_11,
        nf2.z1_cubed(),
        nf2.z1_z2sq()
    );
    println!(
        "  dz2/dt = ({:+.4} e1 {:+.5} e2) z2 {:+.4} z1^2 {:+.4} z1^2 z2 {:+.4} z2^3",
        nf2.lin[(1, 0)],
        nf2.lin[(1, 1)],
        g2000_12 / 2.0,
        nf2.z1sq_z2(),
        nf2.z2_cubed()
    );

    // a 1:3 resonant point also exists for set-1 kinetics at modes (1,3)
    let (_, nf3) = normal_form_at(&ModelParams::set1(), 1, 3).unwrap();
    let CaseTerms::OneThree { g2100_11, g3000_12 } = nf3.case else {
        unreachable!()
    };
    println!("\nset 1, modes (1,3), resonance {:?}:", nf3.resonance);
    println!(
        "  extra cross terms: {:+.4} z1^2 z2 (first eq), {:+.4} z1^3 (second eq)",
        g2100_11 / 2.0,
        g3000_12 / 6.0
    );
}
