//! Synthesize multiplier netlists and inspect what comes out: gates,
//! registers, resource counts, and the OpenQASM 2.0 rendering.
//!
//! Run with `cargo run --example build_netlist`.

use revmul::multipliers::{build_multiplier, Method, MultiplierConfig};
use revmul::qasm::export_qasm;

fn main() {
    let n = 6;

    for method in [Method::Naive, Method::Karatsuba, Method::Toom25] {
        let cfg = MultiplierConfig { method, ..MultiplierConfig::default() };
        let circuit = build_multiplier(n, cfg).expect("width is valid");
        let r = circuit.count_resources();

        println!("{} ({} bits):", method.name(), n);
        println!("  wires          {}", r.qubit_count);
        println!("  gates          {}", r.gate_count);
        println!("  not / cnot     {} / {}", r.not_count, r.cnot_count);
        println!("  toffoli        {} (depth {})", r.toffoli_count, r.toffoli_depth);
        println!("  t-count        {} (depth {})", r.t_count, r.t_depth);
        for reg in &circuit.registers {
            println!("  register {:10} {:3} wires  {:?}", reg.name, reg.width(), reg.role);
        }
        println!();
    }

    // The flat gate list renders directly as OpenQASM 2.0. Show the
    // whole 1-bit circuit and an excerpt of a larger one.
    let tiny = build_multiplier(1, MultiplierConfig::default()).expect("width is valid");
    println!("full OpenQASM export at 1 bit:");
    print!("{}", export_qasm(&tiny));

    let small = build_multiplier(4, MultiplierConfig::default()).expect("width is valid");
    let text = export_qasm(&small);
    println!("\nfirst lines of the 4-bit export ({} lines total):", text.lines().count());
    for line in text.lines().take(12) {
        println!("  {line}");
    }
}
