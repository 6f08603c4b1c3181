//! Put the closed-form cost models next to measured netlist counts,
//! fit growth exponents from log-log samples, and locate the Toffoli
//! crossover where the asymptotically cheaper method starts winning.
//!
//! Run with `cargo run --example resource_compare`.

use revmul::costmodel::{
    fit_exponent, mirror_cost, paper_cost, paper_toffoli_recurrence, toffoli_crossover, CostModel,
};
use revmul::multipliers::{build_multiplier, Method, MultiplierConfig};

fn main() {
    // Model rows come from closed-form formulas; measured rows from
    // counting an actual netlist.
    println!("{:>6} {:>10} {:>12} {:>12} {:>12}", "n", "method", "model TC", "measured TC", "measured QC");
    for n in [4usize, 8, 16, 32] {
        for method in [Method::Naive, Method::Karatsuba, Method::Toom25] {
            let model = paper_cost(CostModel::of_method(method), n as u64);
            let cfg = MultiplierConfig { method, ..MultiplierConfig::default() };
            let measured = build_multiplier(n, cfg).expect("width is valid").count_resources();
            println!(
                "{:>6} {:>10} {:>12} {:>12} {:>12}",
                n,
                method.name(),
                model.toffoli_count,
                measured.toffoli_count,
                measured.qubit_count
            );
        }
    }
    println!();

    // The adder-level recurrence sits below its closed-form bound.
    println!("recurrence vs bound (Toffoli, with uncomputation):");
    for n in [6u64, 36, 216, 1296] {
        let rec = paper_toffoli_recurrence(n, true).expect("n is a power of 6");
        let bound = 49.0 * (n as f64).powf((16f64).log(6.0));
        println!("  n={:<5} recurrence {:>9}  bound {:>10.0}  ratio {:.3}", n, rec, bound, rec as f64 / bound);
    }
    println!();

    // Growth exponents from log-log least squares. The netlist census
    // uses the mirror recurrence, which reproduces measured counts
    // without building multi-million-gate circuits.
    let grid = [6usize, 36, 216, 1296];
    let model_samples: Vec<(f64, f64)> = grid
        .iter()
        .map(|&n| (n as f64, paper_cost(CostModel::Toom25, n as u64).toffoli_count as f64))
        .collect();
    let measured_samples: Vec<(f64, f64)> = grid
        .iter()
        .map(|&n| (n as f64, mirror_cost(n, MultiplierConfig::default()).toffoli_count as f64))
        .collect();
    let model_slope = fit_exponent(&model_samples).expect("positive samples");
    let measured_slope = fit_exponent(&measured_samples).expect("positive samples");
    println!("toffoli growth exponent, model:    {model_slope:.4} (formula exponent log6 16 = {:.4})", (16f64).log(6.0));
    println!("toffoli growth exponent, measured: {measured_slope:.4}");
    println!();

    // Crossover scan on the model formulas.
    match toffoli_crossover(50, 5000) {
        Some(n) => println!("model Toffoli crossover (naive vs toom25): n = {n}"),
        None => println!("no model Toffoli crossover in [50, 5000]"),
    }
}
