//! Synthesis, simulation, and resource accounting for reversible-logic
//! integer multipliers built from NOT, CNOT, and Toffoli gates.
//!
//! The crate produces flat gate netlists for three multiplication
//! strategies: schoolbook (naive), Karatsuba (2-way splitting), and a
//! five-point evaluation scheme (2/3-way splitting) with a better
//! asymptotic Toffoli count. Every circuit maps `|x>|y>|0>|0>` to
//! `|x>|y>|x*y>|0>`, restoring all working storage, and can be checked
//! bit-exactly against integer multiplication by the classical
//! simulator in [`sim`].
//!
//! Modules:
//! - [`netlist`]: gate/register/circuit types, a builder with wire
//!   pooling, resource counting, and ASAP depth scheduling.
//! - [`sim`]: basis-state simulation and end-to-end verification.
//! - [`blocks`]: ripple-carry adders, subtractors, controlled adders,
//!   copies, and conditional negation.
//! - [`multipliers`]: the three multiplier constructions.
//! - [`pebble`]: recomputation schedules trading workspace for depth.
//! - [`costmodel`]: closed-form cost models, an independent resource
//!   census, exponent fitting, and crossover scans.
//! - [`qasm`]: OpenQASM 2.0 export and a counting parser.
//! - [`cli`]: the command-line interface behind the `revmul` binary.
//!
//! Runnable examples (`cargo run --example <name>`):
//! - `build_netlist`: synthesize a multiplier and print its gates.
//! - `verify_circuit`: simulate circuits against integer products.
//! - `resource_compare`: tabulate costs and fit growth exponents.
//! - `pebble_schedule`: workspace/depth trade-offs from recomputation.
//! - `adder_blocks`: the arithmetic building blocks on their own.

pub mod blocks;
pub mod cli;
pub mod costmodel;
pub mod multipliers;
pub mod netlist;
pub mod pebble;
pub mod qasm;
pub mod sim;
