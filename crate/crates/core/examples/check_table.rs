//! Recomputes the bundled tree table's f values from its angles.
//!
//! `cargo run --release --example check_table -- 7` checks p = 1..7. Larger p
//! exhausts memory on the tensor-network backend.

use std::time::Instant;

use qaoa_maxcut::graph::build_tree_neighborhood;
use qaoa_maxcut::lightcone::{edge_expectation, Backend, NeighborhoodTask};
use qaoa_maxcut::qaoa::bundled_tree_table;
use qaoa_maxcut::MixerSpec;

fn main() {
    let max_p: usize = std::env::args().nth(1).map_or(5, |s| s.parse().expect("max p"));
    for entry in bundled_tree_table().iter().filter(|e| e.degree == 3 && e.depth <= max_p) {
        let tree = build_tree_neighborhood(3, entry.depth).unwrap();
        let task = NeighborhoodTask::from_neighborhood(tree, &MixerSpec::Standard, &entry.params);
        let start = Instant::now();
        let r = edge_expectation(&task, Backend::TensorNetwork, f64::INFINITY).unwrap();
        println!(
            "p={:2} table f={:.4} computed f={:.6} cost={:.3e} ({:.2?})",
            entry.depth,
            entry.f_value,
            0.5 * (1.0 - r.zz),
            r.plan_cost.unwrap_or(0.0),
            start.elapsed()
        );
    }
}
