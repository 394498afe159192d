//! Region map of the truncated normal form around the set-1 Turing-Turing
//! point: each cell is classified by its equilibrium census and matched to
//! the six regions of the worked example.
//!
//! Run with: `cargo run --release --example region_map`

use pattern_duet::kinetics::ModelParams;
use pattern_duet::nf_dynamics::{region_classify, RegionGrid};
use pattern_duet::normal_form::normal_form_at;
use std::collections::BTreeMap;

fn main() {
    let (_, nf) = normal_form_at(&ModelParams::set1(), 2, 3).unwrap();
    let n = 36;
    let grid = RegionGrid::centered((nf.tt.d_star, nf.tt.s_star), 0.002, 0.05, n);
    let map = region_classify(&nf, &grid);

    // ASCII map: rows are s from high to low, columns d1 from low to high
    println!(
        "region map around (d*, s*) = ({:.5}, {:.5}):",
        nf.tt.d_star, nf.tt.s_star
    );
    for j in (0..n).rev() {
        let mut row = String::new();
        for i in 0..n {
            let cell = &map.cells[i * n + j];
            row.push(match cell.region_label.as_deref() {
                Some(label) => label.as_bytes()[1] as char,
                None if cell.degenerate => '*',
                None => '?',
            });
        }
        println!("  {row}");
    }

    let mut census: BTreeMap<String, (usize, String)> = BTreeMap::new();
    for cell in &map.cells {
        let key = cell.region_label.clone().unwrap_or_else(|| "?".into());
        let entry = census.entry(key).or_insert((0, cell.fingerprint.clone()));
        entry.0 += 1;
    }
    println!("\ncells per region (with census fingerprint):");
    for (label, (count, fingerprint)) in census {
        println!("  {label}: {count:4} cells   {fingerprint}");
    }
}
