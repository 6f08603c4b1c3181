//! Trade workspace for recomputation over the multiplier's recursion
//! tree: build compute/copy/uncompute schedules, replay them under a
//! validity checker, and compare peak live space across cut levels.
//!
//! Run with `cargo run --example pebble_schedule`.

use revmul::pebble::{
    make_schedule, optimal_cut_level, space_optimized_model, space_unoptimized, RecursionTree,
};

fn main() {
    // Small tree first: the full action stream is readable.
    let tree = RecursionTree::new(36);
    let schedule = make_schedule(&tree, 1).expect("k is within the tree height");
    println!("schedule for n=36, k=1 ({} actions):", schedule.actions.len());
    for line in schedule.export_lines().iter().take(10) {
        println!("  {line}");
    }
    println!("  ... ({} more)", schedule.actions.len().saturating_sub(10));
    println!(
        "peak space {} (idealized) / {} (measured footprints), depth units {}",
        schedule.peak_space, schedule.measured_peak_space, schedule.total_depth_units
    );
    println!();

    // Sweep every cut parameter k at n=216. Small k keeps subtrees
    // pebbled (more space, less recomputation); large k uncomputes
    // aggressively below the cut.
    let tree = RecursionTree::new(216);
    println!("n=216 sweep (height {}):", tree.height());
    println!("{:>3} {:>10} {:>12} {:>12}", "k", "peak", "depth units", "actions");
    for k in 0..=tree.height() {
        let s = make_schedule(&tree, k).expect("k is within the tree height");
        println!("{:>3} {:>10} {:>12} {:>12}", k, s.peak_space, s.total_depth_units, s.actions.len());
    }
    let k_star = optimal_cut_level(tree.height());
    println!("published cut rule picks k = {k_star}");
    println!();

    // Asymptotics: unoptimized live space against the optimized model.
    println!("{:>6} {:>12} {:>16}", "n", "unoptimized", "optimized model");
    for n in [6usize, 36, 216, 1296] {
        println!("{:>6} {:>12} {:>16.0}", n, space_unoptimized(n), space_optimized_model(n));
    }
}
