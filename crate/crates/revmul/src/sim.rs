//! Exact classical simulation of reversible netlists on basis states,
//! plus the verification harness that checks generated multipliers
//! against integer multiplication.
//!
//! Every gate in the supported set permutes basis states, so a bit
//! vector per wire captures the full semantics. The simulator also
//! enforces a circuit's zero-check obligations: claims made during
//! construction that a wire is `|0>` at a given point.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::netlist::{Circuit, Gate, Register, Role};

/// Default seed for randomized verification plans.
pub const DEFAULT_SEED: u64 = 42;

/// Exhaustive verification is refused above this many input bits.
pub const EXHAUSTIVE_BIT_LIMIT: usize = 24;

/// One classical assignment of all wires.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisState {
    words: Vec<u64>,
    width: u32,
}

impl BasisState {
    /// All-zero state of the given width.
    pub fn zero(width: u32) -> Self {
        BasisState { words: vec![0; (width as usize + 63) / 64], width }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn get(&self, wire: u32) -> bool {
        let w = wire as usize;
        self.words[w / 64] >> (w % 64) & 1 == 1
    }

    pub fn set(&mut self, wire: u32, value: bool) {
        let w = wire as usize;
        if value {
            self.words[w / 64] |= 1 << (w % 64);
        } else {
            self.words[w / 64] &= !(1 << (w % 64));
        }
    }

    pub fn flip(&mut self, wire: u32) {
        let w = wire as usize;
        self.words[w / 64] ^= 1 << (w % 64);
    }

    /// Write `value` into the listed wires, LSB first.
    pub fn load(&mut self, wires: &[u32], value: &BigUint) {
        for (bit, &wire) in wires.iter().enumerate() {
            self.set(wire, value.bit(bit as u64));
        }
    }

    /// Read the listed wires as an unsigned little-endian integer.
    pub fn read(&self, wires: &[u32]) -> BigUint {
        let mut value = BigUint::default();
        for (bit, &wire) in wires.iter().enumerate() {
            if self.get(wire) {
                value.set_bit(bit as u64, true);
            }
        }
        value
    }

    pub fn load_register(&mut self, reg: &Register, value: &BigUint) {
        self.load(&reg.wires, value);
    }

    pub fn read_register(&self, reg: &Register) -> BigUint {
        self.read(&reg.wires)
    }
}

/// Simulation failures.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum SimError {
    #[error("state width {state} does not match circuit width {circuit}")]
    WidthMismatch { state: u32, circuit: u32 },
    #[error("zero check failed: wire {wire} is 1 before gate {position}")]
    ZeroCheckFailed { position: usize, wire: u32 },
}

/// Apply the circuit to the state in place, enforcing zero checks.
pub fn simulate(circuit: &Circuit, state: &mut BasisState) -> Result<(), SimError> {
    if state.width < circuit.width {
        return Err(SimError::WidthMismatch { state: state.width, circuit: circuit.width });
    }
    let mut checks: Vec<(usize, u32)> =
        circuit.zero_checks.iter().map(|zc| (zc.position, zc.wire)).collect();
    checks.sort_unstable();
    let mut next_check = 0;
    for (position, gate) in circuit.gates.iter().enumerate() {
        while next_check < checks.len() && checks[next_check].0 == position {
            let wire = checks[next_check].1;
            if state.get(wire) {
                return Err(SimError::ZeroCheckFailed { position, wire });
            }
            next_check += 1;
        }
        match *gate {
            Gate::Not { target } => state.flip(target),
            Gate::Cnot { control, target } => {
                if state.get(control) {
                    state.flip(target);
                }
            }
            Gate::Toffoli { controls, target } => {
                if state.get(controls[0]) && state.get(controls[1]) {
                    state.flip(target);
                }
            }
        }
    }
    while next_check < checks.len() {
        let (position, wire) = checks[next_check];
        if state.get(wire) {
            return Err(SimError::ZeroCheckFailed { position, wire });
        }
        next_check += 1;
    }
    Ok(())
}

/// Apply the circuit to a copy of the state and return the result.
pub fn run(circuit: &Circuit, state: &BasisState) -> Result<BasisState, SimError> {
    let mut out = state.clone();
    simulate(circuit, &mut out)?;
    Ok(out)
}

/// How many and which operand vectors a verification run uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestVectorPlan {
    /// Every operand pair. Only allowed up to 24 total input bits.
    Exhaustive,
    /// Seeded pseudorandom operand pairs.
    Random { cases: u64, seed: u64 },
}

impl TestVectorPlan {
    pub fn random(cases: u64, seed: u64) -> Self {
        TestVectorPlan::Random { cases, seed }
    }

    /// Exhaustive when affordable, otherwise `cases` seeded pairs.
    pub fn auto(input_bits: usize, cases: u64, seed: u64) -> Self {
        if input_bits <= EXHAUSTIVE_BIT_LIMIT {
            TestVectorPlan::Exhaustive
        } else {
            TestVectorPlan::Random { cases, seed }
        }
    }
}

/// Verification harness failures (not counterexamples: misuse).
#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("circuit has no register named {0:?}")]
    MissingRegister(&'static str),
    #[error("exhaustive plan over {bits} input bits exceeds the {limit}-bit limit")]
    ExhaustiveTooWide { bits: usize, limit: usize },
}

/// Why a single vector failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FailureKind {
    /// Product register read back a wrong value.
    WrongProduct,
    /// An input register was not preserved.
    InputClobbered,
    /// A wire outside x, y, and product ended nonzero.
    DirtyAncilla { wire: u32 },
    /// A zero-check obligation fired mid-run.
    Obligation { position: usize, wire: u32 },
}

/// One failing operand pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub x: BigUint,
    pub y: BigUint,
    pub got: BigUint,
    pub want: BigUint,
    pub kind: FailureKind,
}

/// Outcome of a multiplier verification run.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    /// Operand width the verdict lines are labeled with.
    pub n: usize,
    pub cases: u64,
    /// Counterexamples in vector order, capped at [`MAX_COUNTEREXAMPLES`].
    pub failures: Vec<Counterexample>,
    /// Total failing vectors, even beyond the stored cap.
    pub failure_count: u64,
}

/// Stored-counterexample cap; the failure count keeps the true total.
pub const MAX_COUNTEREXAMPLES: usize = 10;

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }

    /// One `FAIL ...` line per stored counterexample, or `PASS <count>`.
    pub fn verdict(&self) -> String {
        if self.passed() {
            return format!("PASS {}", self.cases);
        }
        let mut out = String::new();
        for f in &self.failures {
            out.push_str(&format!(
                "FAIL n={} x={} y={} got={} want={}\n",
                self.n, f.x, f.y, f.got, f.want
            ));
        }
        out.pop();
        out
    }
}

fn random_value(rng: &mut ChaCha8Rng, bits: usize) -> BigUint {
    let mut words = vec![0u64; (bits + 63) / 64];
    rng.fill(&mut words[..]);
    let extra = words.len() * 64 - bits;
    if extra > 0 {
        let last = words.len() - 1;
        words[last] &= u64::MAX >> extra;
    }
    let bytes: Vec<u8> = words.iter().flat_map(|w| w.to_le_bytes()).collect();
    BigUint::from_bytes_le(&bytes)
}

fn vector_stream(
    plan: TestVectorPlan,
    xw: usize,
    yw: usize,
) -> Result<Box<dyn Iterator<Item = (BigUint, BigUint)>>, VerifyError> {
    match plan {
        TestVectorPlan::Exhaustive => {
            if xw + yw > EXHAUSTIVE_BIT_LIMIT {
                return Err(VerifyError::ExhaustiveTooWide {
                    bits: xw + yw,
                    limit: EXHAUSTIVE_BIT_LIMIT,
                });
            }
            let xs = 1u64 << xw;
            let ys = 1u64 << yw;
            Ok(Box::new((0..xs).flat_map(move |x| {
                (0..ys).map(move |y| (BigUint::from(x), BigUint::from(y)))
            })))
        }
        TestVectorPlan::Random { cases, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok(Box::new((0..cases).map(move |_| {
                let x = random_value(&mut rng, xw);
                let y = random_value(&mut rng, yw);
                (x, y)
            })))
        }
    }
}

/// Check a multiplier circuit against integer multiplication.
///
/// For each vector, x and y are loaded into their registers with
/// every other wire zero. After simulation the product register must
/// read x*y, the inputs must be preserved, and, when `strict_ancilla`
/// is set (the uncomputed contract), every wire outside the three
/// named registers must read zero. Zero-check obligations are
/// enforced during every run regardless.
pub fn verify_multiplier(
    circuit: &Circuit,
    plan: TestVectorPlan,
    strict_ancilla: bool,
) -> Result<VerifyReport, VerifyError> {
    let xreg = circuit.register("x").ok_or(VerifyError::MissingRegister("x"))?;
    let yreg = circuit.register("y").ok_or(VerifyError::MissingRegister("y"))?;
    let preg = circuit.register("product").ok_or(VerifyError::MissingRegister("product"))?;
    let mut report = VerifyReport {
        n: xreg.width(),
        cases: 0,
        failures: Vec::new(),
        failure_count: 0,
    };
    let mut named = vec![false; circuit.width as usize];
    for &w in xreg.wires.iter().chain(&yreg.wires).chain(&preg.wires) {
        named[w as usize] = true;
    }
    for (x, y) in vector_stream(plan, xreg.width(), yreg.width())? {
        report.cases += 1;
        let mut state = BasisState::zero(circuit.width);
        state.load(&xreg.wires, &x);
        state.load(&yreg.wires, &y);
        let want = &x * &y;
        let fail = |report: &mut VerifyReport, got: BigUint, kind: FailureKind| {
            report.failure_count += 1;
            if report.failures.len() < MAX_COUNTEREXAMPLES {
                report.failures.push(Counterexample {
                    x: x.clone(),
                    y: y.clone(),
                    got,
                    want: want.clone(),
                    kind,
                });
            }
        };
        match simulate(circuit, &mut state) {
            Err(SimError::ZeroCheckFailed { position, wire }) => {
                let got = state.read(&preg.wires);
                fail(&mut report, got, FailureKind::Obligation { position, wire });
                continue;
            }
            Err(SimError::WidthMismatch { .. }) => unreachable!("state sized from circuit"),
            Ok(()) => {}
        }
        let got = state.read(&preg.wires);
        if got != want {
            fail(&mut report, got, FailureKind::WrongProduct);
            continue;
        }
        if state.read(&xreg.wires) != x || state.read(&yreg.wires) != y {
            fail(&mut report, got, FailureKind::InputClobbered);
            continue;
        }
        if strict_ancilla {
            if let Some(wire) =
                (0..circuit.width).find(|&w| !named[w as usize] && state.get(w))
            {
                fail(&mut report, got, FailureKind::DirtyAncilla { wire });
            }
        }
    }
    Ok(report)
}

/// One obligation violation seen while sweeping input vectors.
#[derive(Debug, Clone)]
pub struct ObligationFailure {
    /// Input register values that triggered it, in register-table order.
    pub inputs: Vec<(String, BigUint)>,
    pub position: usize,
    pub wire: u32,
}

/// Outcome of an obligation-only sweep.
#[derive(Debug, Clone)]
pub struct ParityReport {
    pub cases: u64,
    /// Number of registered obligation sites in the circuit.
    pub sites: usize,
    pub failures: Vec<ObligationFailure>,
}

impl ParityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn verdict(&self) -> String {
        if self.passed() {
            format!("PASS {} ({} sites)", self.cases, self.sites)
        } else {
            let f = &self.failures[0];
            let inputs: Vec<String> =
                f.inputs.iter().map(|(name, v)| format!("{name}={v}")).collect();
            format!(
                "FAIL site position={} wire={} inputs {}",
                f.position,
                f.wire,
                inputs.join(" ")
            )
        }
    }
}

/// Sweep input vectors and enforce only zero-check obligations.
///
/// Random values go into every input-role register; other wires start
/// zero. A circuit with no obligations passes vacuously. Functional
/// output is deliberately not inspected here.
pub fn check_parity_sites(
    circuit: &Circuit,
    plan: TestVectorPlan,
) -> Result<ParityReport, VerifyError> {
    let inputs: Vec<&Register> =
        circuit.registers.iter().filter(|r| r.role == Role::Input).collect();
    let total_bits: usize = inputs.iter().map(|r| r.width()).sum();
    let mut report =
        ParityReport { cases: 0, sites: circuit.zero_checks.len(), failures: Vec::new() };
    let record = |report: &mut ParityReport,
                      state_inputs: &[(String, BigUint)],
                      position: usize,
                      wire: u32| {
        if report.failures.len() < MAX_COUNTEREXAMPLES {
            report.failures.push(ObligationFailure {
                inputs: state_inputs.to_vec(),
                position,
                wire,
            });
        }
    };
    let run_one = |report: &mut ParityReport, values: Vec<(String, BigUint)>| {
        report.cases += 1;
        let mut state = BasisState::zero(circuit.width);
        for (reg, (_, v)) in inputs.iter().zip(&values) {
            state.load(&reg.wires, v);
        }
        if let Err(SimError::ZeroCheckFailed { position, wire }) = simulate(circuit, &mut state)
        {
            record(report, &values, position, wire);
        }
    };
    match plan {
        TestVectorPlan::Exhaustive => {
            if total_bits > EXHAUSTIVE_BIT_LIMIT {
                return Err(VerifyError::ExhaustiveTooWide {
                    bits: total_bits,
                    limit: EXHAUSTIVE_BIT_LIMIT,
                });
            }
            for assignment in 0u64..1 << total_bits {
                let mut offset = 0;
                let values: Vec<(String, BigUint)> = inputs
                    .iter()
                    .map(|reg| {
                        let mask = (1u64 << reg.width()) - 1;
                        let v = assignment >> offset & mask;
                        offset += reg.width();
                        (reg.name.clone(), BigUint::from(v))
                    })
                    .collect();
                run_one(&mut report, values);
            }
        }
        TestVectorPlan::Random { cases, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..cases {
                let values: Vec<(String, BigUint)> = inputs
                    .iter()
                    .map(|reg| (reg.name.clone(), random_value(&mut rng, reg.width())))
                    .collect();
                run_one(&mut report, values);
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::Builder;
    use rand::RngCore;

    fn toffoli_circuit() -> Circuit {
        let mut b = Builder::new();
        let w = b.alloc_wires(3);
        b.toffoli(w[0], w[1], w[2]);
        b.finish()
    }

    #[test]
    fn toffoli_truth_table() {
        let c = toffoli_circuit();
        let mut s = BasisState::zero(3);
        s.set(0, true);
        s.set(1, true);
        simulate(&c, &mut s).unwrap();
        assert!(s.get(2));

        let mut s = BasisState::zero(3);
        s.set(0, true);
        simulate(&c, &mut s).unwrap();
        assert!(!s.get(2));
    }

    #[test]
    fn empty_circuit_preserves_state() {
        let c = Circuit::new(4);
        let mut s = BasisState::zero(4);
        s.set(1, true);
        s.set(3, true);
        let before = s.clone();
        simulate(&c, &mut s).unwrap();
        assert_eq!(s, before);
    }

    #[test]
    fn reverse_round_trips_random_states() {
        let mut b = Builder::new();
        let w = b.alloc_wires(16);
        for j in 0..14 {
            b.toffoli(w[j], w[j + 1], w[j + 2]);
            b.cnot(w[j + 2], w[(j + 5) % 16]);
        }
        b.not(w[3]);
        let c = b.finish();
        let r = c.reversed();
        let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
        for _ in 0..1000 {
            let mut s = BasisState::zero(16);
            for wire in 0..16 {
                s.set(wire, rng.next_u32() & 1 == 1);
            }
            let original = s.clone();
            simulate(&c, &mut s).unwrap();
            simulate(&r, &mut s).unwrap();
            assert_eq!(s, original);
        }
    }

    #[test]
    fn concat_composes_like_sequential_simulation() {
        let mut b = Builder::new();
        let w = b.alloc_wires(6);
        b.toffoli(w[0], w[1], w[2]);
        b.cnot(w[2], w[3]);
        let first = b.finish();
        let mut b = Builder::new();
        let w = b.alloc_wires(6);
        b.cnot(w[3], w[4]);
        b.toffoli(w[4], w[0], w[5]);
        let second = b.finish();
        let identity: Vec<u32> = (0..6).collect();
        let joined = first.concat(&second, &identity).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
        for _ in 0..100 {
            let mut s = BasisState::zero(6);
            for wire in 0..6 {
                s.set(wire, rng.next_u32() & 1 == 1);
            }
            let mut chained = s.clone();
            simulate(&first, &mut chained).unwrap();
            simulate(&second, &mut chained).unwrap();
            simulate(&joined, &mut s).unwrap();
            assert_eq!(s, chained);
        }
    }

    #[test]
    fn zero_check_violation_is_reported() {
        let mut b = Builder::new();
        let w = b.alloc_wires(2);
        b.not(w[1]);
        b.record_zero_check(w[1]);
        b.cnot(w[0], w[1]);
        let c = b.finish();
        let mut s = BasisState::zero(2);
        assert_eq!(
            simulate(&c, &mut s),
            Err(SimError::ZeroCheckFailed { position: 1, wire: 1 })
        );
    }

    #[test]
    fn parity_sweep_flags_odd_site_and_passes_vacuously() {
        // A circuit whose obligation holds only when the input bit is 0.
        let mut b = Builder::new();
        let x = b.alloc_register("x", 1, Role::Input);
        let w = b.alloc_wires(1);
        b.cnot(x.wires[0], w[0]);
        b.record_zero_check(w[0]);
        let c = b.finish();
        let report = check_parity_sites(&c, TestVectorPlan::Exhaustive).unwrap();
        assert_eq!(report.cases, 2);
        assert_eq!(report.failures.len(), 1);
        assert_eq!(report.failures[0].wire, 1);

        let empty = Circuit::new(2);
        let report = check_parity_sites(&empty, TestVectorPlan::Exhaustive).unwrap();
        assert!(report.passed());
        assert_eq!(report.sites, 0);
    }

    #[test]
    fn verdict_formats() {
        let report = VerifyReport { n: 4, cases: 256, failures: vec![], failure_count: 0 };
        assert_eq!(report.verdict(), "PASS 256");
        let report = VerifyReport {
            n: 3,
            cases: 64,
            failures: vec![Counterexample {
                x: BigUint::from(5u32),
                y: BigUint::from(3u32),
                got: BigUint::from(14u32),
                want: BigUint::from(15u32),
                kind: FailureKind::WrongProduct,
            }],
            failure_count: 1,
        };
        assert_eq!(report.verdict(), "FAIL n=3 x=5 y=3 got=14 want=15");
    }
}
