//! Gate-level circuit representation: flat gate lists over numbered
//! wires, named registers, a builder with wire pooling, exact resource
//! counting, and ASAP depth scheduling.
//!
//! Wires are `u32` indices. Registers list their wires least
//! significant first. Circuits may carry zero-check obligations,
//! claims that a wire holds `|0>` at a given point in the gate
//! stream, which the simulator verifies on every run.

use thiserror::Error;

/// A reversible gate over the universal set {NOT, CNOT, Toffoli}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gate {
    /// Bit flip on `target`.
    Not { target: u32 },
    /// Flip `target` when `control` is set.
    Cnot { control: u32, target: u32 },
    /// Flip `target` when both controls are set.
    Toffoli { controls: [u32; 2], target: u32 },
}

impl Gate {
    /// All wires the gate touches, target last.
    pub fn wires(&self) -> Vec<u32> {
        match *self {
            Gate::Not { target } => vec![target],
            Gate::Cnot { control, target } => vec![control, target],
            Gate::Toffoli { controls, target } => vec![controls[0], controls[1], target],
        }
    }

    /// The wire the gate may flip.
    pub fn target(&self) -> u32 {
        match *self {
            Gate::Not { target }
            | Gate::Cnot { target, .. }
            | Gate::Toffoli { target, .. } => target,
        }
    }

    /// Every gate in this set is its own inverse.
    pub fn inverse(&self) -> Gate {
        *self
    }
}

/// What a register holds from the caller's point of view.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    /// Operand, preserved by the circuit.
    Input,
    /// Result, starts zero and ends holding the output.
    Output,
    /// Working storage, starts and ends zero.
    Ancilla,
    /// Single-wire sign flag used by signed intermediate values.
    Sign,
}

/// Numeric reading of a register's bits (always LSB first).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Interpretation {
    Unsigned,
    TwosComplement,
}

/// A named group of wires, least significant bit first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Register {
    pub name: String,
    pub wires: Vec<u32>,
    pub interpretation: Interpretation,
    pub role: Role,
}

impl Register {
    pub fn new(name: impl Into<String>, wires: Vec<u32>, role: Role) -> Self {
        Register { name: name.into(), wires, interpretation: Interpretation::Unsigned, role }
    }

    pub fn signed(mut self) -> Self {
        self.interpretation = Interpretation::TwosComplement;
        self
    }

    pub fn width(&self) -> usize {
        self.wires.len()
    }
}

/// A zero-check obligation: before the gate at `position` executes
/// (or at the end of the circuit when `position` equals the gate
/// count), `wire` must hold `|0>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZeroCheck {
    pub position: usize,
    pub wire: u32,
}

/// A flat reversible circuit.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Circuit {
    pub gates: Vec<Gate>,
    /// Total number of wires, pooled ancillas included.
    pub width: u32,
    pub registers: Vec<Register>,
    pub zero_checks: Vec<ZeroCheck>,
}

/// Structural problems detectable without simulation.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum NetlistError {
    #[error("gate {index} touches wire {wire} but circuit width is {width}")]
    WireOutOfRange { index: usize, wire: u32, width: u32 },
    #[error("gate {index} uses wire {wire} more than once")]
    DuplicateWire { index: usize, wire: u32 },
    #[error("register {name:?} lists wire {wire} but circuit width is {width}")]
    RegisterOutOfRange { name: String, wire: u32, width: u32 },
    #[error("wire map sends two wires to combined wire {wire}")]
    NonInjectiveWireMap { wire: u32 },
    #[error("wire map covers {mapped} wires but the appended circuit has {width}")]
    WireMapTooShort { mapped: usize, width: u32 },
    #[error("both circuits declare a register named {name:?}")]
    RegisterNameCollision { name: String },
}

/// Exact gate and depth tallies for a circuit.
///
/// `t_count` and `t_depth` are the standard fault-tolerant estimates
/// obtained from the Toffoli figures: seven T gates per Toffoli and
/// three T stages per Toffoli layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ResourceReport {
    pub qubit_count: u64,
    pub gate_count: u64,
    pub not_count: u64,
    pub cnot_count: u64,
    pub toffoli_count: u64,
    /// Number of ASAP layers containing at least one Toffoli.
    pub toffoli_depth: u64,
    pub t_count: u64,
    pub t_depth: u64,
}

impl Circuit {
    pub fn new(width: u32) -> Self {
        Circuit { gates: Vec::new(), width, registers: Vec::new(), zero_checks: Vec::new() }
    }

    /// Look up a register by name.
    pub fn register(&self, name: &str) -> Option<&Register> {
        self.registers.iter().find(|r| r.name == name)
    }

    /// Check wire ranges and per-gate wire distinctness.
    pub fn validate(&self) -> Result<(), NetlistError> {
        for (index, gate) in self.gates.iter().enumerate() {
            let wires = gate.wires();
            for &wire in &wires {
                if wire >= self.width {
                    return Err(NetlistError::WireOutOfRange { index, wire, width: self.width });
                }
            }
            for (k, &wire) in wires.iter().enumerate() {
                if wires[..k].contains(&wire) {
                    return Err(NetlistError::DuplicateWire { index, wire });
                }
            }
        }
        for reg in &self.registers {
            for &wire in &reg.wires {
                if wire >= self.width {
                    return Err(NetlistError::RegisterOutOfRange {
                        name: reg.name.clone(),
                        wire,
                        width: self.width,
                    });
                }
            }
        }
        Ok(())
    }

    /// The inverse circuit: gates in reverse order, each its own
    /// inverse. Zero checks move to the mirrored position, since the
    /// reversed circuit retraces the same state sequence backwards.
    pub fn reversed(&self) -> Circuit {
        let len = self.gates.len();
        let gates = self.gates.iter().rev().map(Gate::inverse).collect();
        let zero_checks = self
            .zero_checks
            .iter()
            .map(|zc| ZeroCheck { position: len - zc.position, wire: zc.wire })
            .collect();
        Circuit { gates, width: self.width, registers: self.registers.clone(), zero_checks }
    }

    /// Sequential composition: `other` runs after `self`, with
    /// `other`'s wire `w` relocated to `wire_map[w]`. The map must be
    /// injective and cover `other`'s width; register tables merge and
    /// a shared register name is an error.
    pub fn concat(&self, other: &Circuit, wire_map: &[u32]) -> Result<Circuit, NetlistError> {
        if wire_map.len() < other.width as usize {
            return Err(NetlistError::WireMapTooShort {
                mapped: wire_map.len(),
                width: other.width,
            });
        }
        let mut seen = std::collections::HashSet::new();
        for &wire in &wire_map[..other.width as usize] {
            if !seen.insert(wire) {
                return Err(NetlistError::NonInjectiveWireMap { wire });
            }
        }
        for reg in &other.registers {
            if self.register(&reg.name).is_some() {
                return Err(NetlistError::RegisterNameCollision { name: reg.name.clone() });
            }
        }
        let remap = |w: u32| wire_map[w as usize];
        let mut joined = self.clone();
        let offset = joined.gates.len();
        joined.width = self
            .width
            .max(wire_map[..other.width as usize].iter().map(|&w| w + 1).max().unwrap_or(0));
        joined.gates.extend(other.gates.iter().map(|gate| match *gate {
            Gate::Not { target } => Gate::Not { target: remap(target) },
            Gate::Cnot { control, target } => {
                Gate::Cnot { control: remap(control), target: remap(target) }
            }
            Gate::Toffoli { controls, target } => Gate::Toffoli {
                controls: [remap(controls[0]), remap(controls[1])],
                target: remap(target),
            },
        }));
        joined.zero_checks.extend(
            other
                .zero_checks
                .iter()
                .map(|zc| ZeroCheck { position: zc.position + offset, wire: remap(zc.wire) }),
        );
        joined.registers.extend(other.registers.iter().map(|reg| Register {
            name: reg.name.clone(),
            wires: reg.wires.iter().map(|&w| remap(w)).collect(),
            interpretation: reg.interpretation,
            role: reg.role,
        }));
        Ok(joined)
    }

    /// Count gates and schedule depths in one pass.
    ///
    /// Depth uses ASAP layering: each gate lands in the earliest layer
    /// after every layer already occupying one of its wires. The
    /// Toffoli depth is the number of distinct layers containing a
    /// Toffoli, so circuits without Toffoli gates report depth zero.
    pub fn count_resources(&self) -> ResourceReport {
        let mut report = ResourceReport { qubit_count: self.width as u64, ..Default::default() };
        let mut avail = vec![0u64; self.width as usize];
        let mut toffoli_layers = std::collections::HashSet::new();
        for gate in &self.gates {
            report.gate_count += 1;
            match gate {
                Gate::Not { .. } => report.not_count += 1,
                Gate::Cnot { .. } => report.cnot_count += 1,
                Gate::Toffoli { .. } => report.toffoli_count += 1,
            }
            let wires = gate.wires();
            let layer = wires.iter().map(|&w| avail[w as usize]).max().unwrap_or(0);
            for &w in &wires {
                avail[w as usize] = layer + 1;
            }
            if matches!(gate, Gate::Toffoli { .. }) {
                toffoli_layers.insert(layer);
            }
        }
        report.toffoli_depth = toffoli_layers.len() as u64;
        report.t_count = 7 * report.toffoli_count;
        report.t_depth = 3 * report.toffoli_depth;
        report
    }
}

/// Incremental circuit constructor with a LIFO pool of released
/// ancilla wires.
///
/// Fresh wires come from a monotone counter; released wires are
/// recycled before the counter grows, so the final width reflects the
/// peak number of live wires rather than the total ever requested.
#[derive(Debug, Default)]
pub struct Builder {
    gates: Vec<Gate>,
    next_wire: u32,
    pool: Vec<u32>,
    registers: Vec<Register>,
    zero_checks: Vec<ZeroCheck>,
}

impl Builder {
    pub fn new() -> Self {
        Builder::default()
    }

    /// Number of gates emitted so far.
    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Total wires allocated so far (the width of the finished circuit).
    pub fn width(&self) -> u32 {
        self.next_wire
    }

    /// Number of wires currently sitting in the free pool.
    pub fn pool_size(&self) -> usize {
        self.pool.len()
    }

    /// Allocate `count` zero wires, reusing released ones first.
    pub fn alloc_wires(&mut self, count: usize) -> Vec<u32> {
        let mut wires = Vec::with_capacity(count);
        for _ in 0..count {
            if let Some(w) = self.pool.pop() {
                wires.push(w);
            } else {
                wires.push(self.next_wire);
                self.next_wire += 1;
            }
        }
        wires
    }

    /// Allocate a named register of fresh-or-pooled zero wires.
    pub fn alloc_register(&mut self, name: impl Into<String>, width: usize, role: Role) -> Register {
        let reg = Register::new(name, self.alloc_wires(width), role);
        self.registers.push(reg.clone());
        reg
    }

    /// Record that `wire` holds zero at this point, without releasing it.
    pub fn record_zero_check(&mut self, wire: u32) {
        self.zero_checks.push(ZeroCheck { position: self.gates.len(), wire });
    }

    /// Record zero checks for `wires` here and return them to the pool.
    pub fn release_zero(&mut self, wires: &[u32]) {
        for &wire in wires {
            self.record_zero_check(wire);
            self.pool.push(wire);
        }
    }

    pub fn not(&mut self, target: u32) {
        self.gates.push(Gate::Not { target });
    }

    pub fn cnot(&mut self, control: u32, target: u32) {
        assert_ne!(control, target, "cnot wires must be distinct");
        self.gates.push(Gate::Cnot { control, target });
    }

    pub fn toffoli(&mut self, c0: u32, c1: u32, target: u32) {
        assert!(c0 != c1 && c0 != target && c1 != target, "toffoli wires must be distinct");
        self.gates.push(Gate::Toffoli { controls: [c0, c1], target });
    }

    /// Append the inverse of gates `from..to`, newest first, undoing
    /// that section. Zero checks recorded inside it are mirrored,
    /// because the appended gates drive the section's wires back
    /// through the same state sequence. When gates were emitted after
    /// `to`, they must not modify any wire the section writes (reading
    /// such a wire as a control is fine), or the replay premise breaks
    /// (the simulator's checks would catch it).
    pub fn append_reverse_range(&mut self, from: usize, to: usize) {
        let base = self.gates.len();
        let section: Vec<Gate> = self.gates[from..to].iter().rev().map(Gate::inverse).collect();
        let mirrored: Vec<ZeroCheck> = self
            .zero_checks
            .iter()
            .filter(|zc| zc.position >= from && zc.position <= to)
            .map(|zc| ZeroCheck { position: base + (to - zc.position), wire: zc.wire })
            .collect();
        self.gates.extend(section);
        self.zero_checks.extend(mirrored);
    }

    /// Append the inverse of every gate from `from` onward.
    pub fn append_reverse(&mut self, from: usize) {
        self.append_reverse_range(from, self.gates.len());
    }

    /// Finish the circuit.
    pub fn finish(self) -> Circuit {
        Circuit {
            gates: self.gates,
            width: self.next_wire,
            registers: self.registers,
            zero_checks: self.zero_checks,
        }
    }
}
