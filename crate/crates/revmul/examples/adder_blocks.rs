//! Exercise the arithmetic building blocks on their own: ripple-carry
//! addition, subtraction with borrow, controlled addition, and
//! conditional negation, each simulated on concrete values.
//!
//! Run with `cargo run --example adder_blocks`.

use num_bigint::BigUint;
use revmul::blocks::{
    build_conditional_negate, build_controlled_adder, build_cuccaro_adder, build_subtractor,
    BlockHandle,
};
use revmul::sim::{simulate, BasisState};

fn drive(handle: &BlockHandle, loads: &[(&str, u64)]) -> BasisState {
    let c = &handle.circuit;
    let mut state = BasisState::zero(c.width);
    for &(name, value) in loads {
        state.load_register(handle.reg(name), &BigUint::from(value));
    }
    simulate(c, &mut state).expect("block ancillae return to zero");
    state
}

fn read(handle: &BlockHandle, state: &BasisState, name: &str) -> u64 {
    let digits = state.read_register(handle.reg(name)).to_u64_digits();
    digits.first().copied().unwrap_or(0)
}

fn main() {
    let w = 8;

    // (a, b) -> (a, a+b), carry-out on its own wire.
    let adder = build_cuccaro_adder(w).expect("width is valid");
    let r = adder.circuit.count_resources();
    println!("adder, {w} bits: {} toffoli, {} cnot, {} wires", r.toffoli_count, r.cnot_count, r.qubit_count);
    let state = drive(&adder, &[("a", 120), ("b", 99)]);
    println!("  120 + 99 = {} carry {}", read(&adder, &state, "b"), read(&adder, &state, "cout"));
    let state = drive(&adder, &[("a", 200), ("b", 100)]);
    println!("  200 + 100 = {} carry {} (mod 256 with carry set)", read(&adder, &state, "b"), read(&adder, &state, "cout"));

    // (a, b) -> (a, b-a), borrow reads 1 exactly when a > b.
    let sub = build_subtractor(w).expect("width is valid");
    let state = drive(&sub, &[("a", 99), ("b", 200)]);
    println!("subtractor: 200 - 99 = {} borrow {}", read(&sub, &state, "b"), read(&sub, &state, "borrow"));
    let state = drive(&sub, &[("a", 200), ("b", 99)]);
    println!("subtractor: 99 - 200 = {} borrow {} (two's complement)", read(&sub, &state, "b"), read(&sub, &state, "borrow"));

    // (ctl, a, b) -> (ctl, a, b + ctl*a).
    let ctl_add = build_controlled_adder(w).expect("width is valid");
    for ctl in [0u64, 1] {
        let state = drive(&ctl_add, &[("ctl", ctl), ("a", 31), ("b", 40)]);
        println!("controlled adder, ctl={ctl}: 40 + {ctl}*31 = {}", read(&ctl_add, &state, "b"));
    }

    // (sign, v) -> (sign, sign ? -v : v).
    let negate = build_conditional_negate(w).expect("width is valid");
    for sign in [0u64, 1] {
        let state = drive(&negate, &[("sign", sign), ("v", 5)]);
        println!("conditional negate, sign={sign}: v = {} (mod 256)", read(&negate, &state, "v"));
    }

    // Blocks run backwards too: a circuit followed by its reverse is
    // the identity.
    let forward = &adder.circuit;
    let mut state = BasisState::zero(forward.width);
    state.load_register(adder.reg("a"), &BigUint::from(77u32));
    state.load_register(adder.reg("b"), &BigUint::from(33u32));
    simulate(forward, &mut state).expect("block ancillae return to zero");
    simulate(&forward.reversed(), &mut state).expect("reverse restores the chain ancilla");
    println!(
        "adder then reversed adder: a={} b={} (inputs restored)",
        read(&adder, &state, "a"),
        read(&adder, &state, "b")
    );
}
