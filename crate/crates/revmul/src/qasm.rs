//! QASM-2.0-style netlist text export and re-import.
//!
//! The dialect is deliberately small: the header line `OPENQASM 2.0;`,
//! one `qreg` declaration per named register plus a synthetic `work`
//! register covering pooled ancilla wires no register owns, a comment
//! block mapping global wire numbers to register slots, then one line
//! per gate in circuit order (`x`, `cx`, `ccx`). The parser accepts
//! exactly this dialect and rebuilds a circuit with the same gate
//! sequence and register names, so an exported netlist reparses to
//! identical resource counts and still simulates correctly.
//!
//! Register roles and zero-check obligations are not part of the text
//! format; reparsed registers carry ancilla role, which affects no
//! count.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::netlist::{Circuit, Gate, NetlistError, Register, Role};

/// Name of the synthetic register that collects unowned wires.
pub const WORK_REGISTER: &str = "work";

/// Failures while reading netlist text.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum QasmError {
    #[error("line {line}: expected `OPENQASM 2.0;` header")]
    MissingHeader { line: usize },
    #[error("line {line}: duplicate register {name:?}")]
    DuplicateRegister { line: usize, name: String },
    #[error("line {line}: unknown register {name:?}")]
    UnknownRegister { line: usize, name: String },
    #[error("line {line}: index {index} out of range for {name:?} of length {len}")]
    IndexOutOfRange { line: usize, name: String, index: usize, len: usize },
    #[error("line {line}: cannot parse {text:?}")]
    Malformed { line: usize, text: String },
    #[error("netlist is structurally invalid: {0}")]
    Invalid(#[from] NetlistError),
}

fn role_label(role: Role) -> &'static str {
    match role {
        Role::Input => "input",
        Role::Output => "output",
        Role::Ancilla => "ancilla",
        Role::Sign => "sign",
    }
}

/// Render a circuit as netlist text.
pub fn export_qasm(c: &Circuit) -> String {
    // Slot table: wire -> (register name, slot, role).
    let mut owner: Vec<Option<(usize, usize)>> = vec![None; c.width as usize];
    for (ri, reg) in c.registers.iter().enumerate() {
        for (slot, &w) in reg.wires.iter().enumerate() {
            debug_assert!(owner[w as usize].is_none(), "registers overlap on wire {w}");
            owner[w as usize] = Some((ri, slot));
        }
    }
    debug_assert!(c.registers.iter().all(|r| r.name != WORK_REGISTER));
    let work: Vec<u32> =
        (0..c.width).filter(|&w| owner[w as usize].is_none()).collect();

    let mut label: Vec<String> = Vec::with_capacity(c.width as usize);
    let mut work_slot = 0usize;
    for w in 0..c.width {
        match owner[w as usize] {
            Some((ri, slot)) => label.push(format!("{}[{slot}]", c.registers[ri].name)),
            None => {
                label.push(format!("{WORK_REGISTER}[{work_slot}]"));
                work_slot += 1;
            }
        }
    }

    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\n");
    for reg in &c.registers {
        let _ = writeln!(out, "qreg {}[{}];", reg.name, reg.wires.len());
    }
    if !work.is_empty() {
        let _ = writeln!(out, "qreg {WORK_REGISTER}[{}];", work.len());
    }
    out.push_str("// wire-to-register map\n");
    for w in 0..c.width {
        let role = match owner[w as usize] {
            Some((ri, _)) => role_label(c.registers[ri].role),
            None => "ancilla",
        };
        let _ = writeln!(out, "// wire {w} -> {}  [{role}]", label[w as usize]);
    }
    for gate in &c.gates {
        match *gate {
            Gate::Not { target } => {
                let _ = writeln!(out, "x {};", label[target as usize]);
            }
            Gate::Cnot { control, target } => {
                let _ = writeln!(
                    out,
                    "cx {},{};",
                    label[control as usize], label[target as usize]
                );
            }
            Gate::Toffoli { controls, target } => {
                let _ = writeln!(
                    out,
                    "ccx {},{},{};",
                    label[controls[0] as usize],
                    label[controls[1] as usize],
                    label[target as usize]
                );
            }
        }
    }
    out
}

struct RegDecl {
    name: String,
    base: u32,
    len: usize,
}

fn parse_slot(
    text: &str,
    line: usize,
    decls: &[RegDecl],
    by_name: &HashMap<String, usize>,
) -> Result<u32, QasmError> {
    let text = text.trim();
    let malformed = || QasmError::Malformed { line, text: text.to_string() };
    let open = text.find('[').ok_or_else(malformed)?;
    let close = text.strip_suffix(']').ok_or_else(malformed)?;
    let name = text[..open].trim();
    let index: usize = close[open + 1..].trim().parse().map_err(|_| malformed())?;
    if name.is_empty() {
        return Err(malformed());
    }
    let &ri = by_name.get(name).ok_or_else(|| QasmError::UnknownRegister {
        line,
        name: name.to_string(),
    })?;
    let decl = &decls[ri];
    if index >= decl.len {
        return Err(QasmError::IndexOutOfRange {
            line,
            name: name.to_string(),
            index,
            len: decl.len,
        });
    }
    Ok(decl.base + index as u32)
}

/// Rebuild a circuit from netlist text produced by [`export_qasm`].
///
/// Wires are renumbered contiguously in declaration order; gate
/// structure, register names, and widths survive, so resource counts
/// match the exported circuit exactly.
pub fn parse_qasm(text: &str) -> Result<Circuit, QasmError> {
    let mut decls: Vec<RegDecl> = Vec::new();
    let mut by_name: HashMap<String, usize> = HashMap::new();
    let mut gates: Vec<Gate> = Vec::new();
    let mut width = 0u32;
    let mut seen_header = false;
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let s = raw.trim();
        if s.is_empty() || s.starts_with("//") {
            continue;
        }
        let s = match s.strip_suffix(';') {
            Some(body) => body.trim(),
            None => return Err(QasmError::Malformed { line, text: s.to_string() }),
        };
        if !seen_header {
            if s == "OPENQASM 2.0" {
                seen_header = true;
                continue;
            }
            return Err(QasmError::MissingHeader { line });
        }
        if let Some(rest) = s.strip_prefix("qreg ") {
            let rest = rest.trim();
            let malformed = || QasmError::Malformed { line, text: s.to_string() };
            let open = rest.find('[').ok_or_else(malformed)?;
            let close = rest.strip_suffix(']').ok_or_else(malformed)?;
            let name = rest[..open].trim().to_string();
            let len: usize = close[open + 1..].trim().parse().map_err(|_| malformed())?;
            if name.is_empty() || len == 0 {
                return Err(malformed());
            }
            if by_name.contains_key(&name) {
                return Err(QasmError::DuplicateRegister { line, name });
            }
            by_name.insert(name.clone(), decls.len());
            decls.push(RegDecl { name, base: width, len });
            width += len as u32;
            continue;
        }
        let (op, args) = s
            .split_once(' ')
            .ok_or_else(|| QasmError::Malformed { line, text: s.to_string() })?;
        let wires: Vec<u32> = args
            .split(',')
            .map(|a| parse_slot(a, line, &decls, &by_name))
            .collect::<Result<_, _>>()?;
        let gate = match (op, wires.len()) {
            ("x", 1) => Gate::Not { target: wires[0] },
            ("cx", 2) => Gate::Cnot { control: wires[0], target: wires[1] },
            ("ccx", 3) => Gate::Toffoli { controls: [wires[0], wires[1]], target: wires[2] },
            _ => return Err(QasmError::Malformed { line, text: s.to_string() }),
        };
        gates.push(gate);
    }
    if !seen_header {
        return Err(QasmError::MissingHeader { line: last_line + 1 });
    }
    let registers = decls
        .iter()
        .filter(|d| d.name != WORK_REGISTER)
        .map(|d| {
            Register::new(
                d.name.clone(),
                (d.base..d.base + d.len as u32).collect(),
                Role::Ancilla,
            )
        })
        .collect();
    let circuit = Circuit { gates, width, registers, zero_checks: Vec::new() };
    circuit.validate()?;
    Ok(circuit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipliers::{build_multiplier, Method, MultiplierConfig};
    use crate::sim::{verify_multiplier, TestVectorPlan};

    fn build(method: Method, n: usize) -> Circuit {
        let cfg = MultiplierConfig { method, ..MultiplierConfig::default() };
        build_multiplier(n, cfg).unwrap()
    }

    #[test]
    fn one_bit_export_is_a_single_toffoli_line() {
        let text = export_qasm(&build(Method::Toom25, 1));
        let gates: Vec<&str> = text
            .lines()
            .filter(|l| !l.starts_with("//") && !l.starts_with("qreg") && !l.starts_with("OPENQASM"))
            .collect();
        assert_eq!(gates, vec!["ccx x[0],y[0],product[0];"]);
        assert!(text.starts_with("OPENQASM 2.0;\n"));
    }

    #[test]
    fn export_declares_every_register_and_covers_every_wire() {
        let c = build(Method::Toom25, 6);
        let text = export_qasm(&c);
        assert!(text.contains("qreg x[6];"));
        assert!(text.contains("qreg y[6];"));
        assert!(text.contains("qreg product[12];"));
        assert!(text.contains("qreg work["));
        let map_lines = text.lines().filter(|l| l.starts_with("// wire ")).count();
        assert_eq!(map_lines, c.width as usize);
        let gate_lines = text
            .lines()
            .filter(|l| {
                l.starts_with("x ") || l.starts_with("cx ") || l.starts_with("ccx ")
            })
            .count();
        assert_eq!(gate_lines, c.gates.len());
    }

    #[test]
    fn round_trip_preserves_resource_counts() {
        for method in [Method::Toom25, Method::Karatsuba, Method::Naive] {
            for n in [1usize, 4, 6] {
                let c = build(method, n);
                let parsed = parse_qasm(&export_qasm(&c)).unwrap();
                assert_eq!(
                    parsed.count_resources(),
                    c.count_resources(),
                    "{} n={n}",
                    method.name()
                );
                assert_eq!(parsed.width, c.width);
            }
        }
    }

    #[test]
    fn round_trip_still_multiplies() {
        let parsed = parse_qasm(&export_qasm(&build(Method::Toom25, 4))).unwrap();
        let report =
            verify_multiplier(&parsed, TestVectorPlan::Exhaustive, true).unwrap();
        assert!(report.passed());
        assert_eq!(report.cases, 256);
    }

    #[test]
    fn parser_rejects_malformed_input() {
        assert!(matches!(
            parse_qasm("qreg x[2];\n"),
            Err(QasmError::MissingHeader { line: 1 })
        ));
        assert!(matches!(parse_qasm(""), Err(QasmError::MissingHeader { .. })));
        let header = "OPENQASM 2.0;\nqreg a[2];\n";
        assert!(matches!(
            parse_qasm(&format!("{header}cx a[0],b[0];\n")),
            Err(QasmError::UnknownRegister { line: 3, .. })
        ));
        assert!(matches!(
            parse_qasm(&format!("{header}x a[2];\n")),
            Err(QasmError::IndexOutOfRange { line: 3, index: 2, .. })
        ));
        assert!(matches!(
            parse_qasm(&format!("{header}qreg a[3];\n")),
            Err(QasmError::DuplicateRegister { line: 3, .. })
        ));
        assert!(matches!(
            parse_qasm(&format!("{header}x a[0]\n")),
            Err(QasmError::Malformed { line: 3, .. })
        ));
        assert!(matches!(
            parse_qasm(&format!("{header}cz a[0],a[1];\n")),
            Err(QasmError::Malformed { line: 3, .. })
        ));
        assert!(matches!(
            parse_qasm(&format!("{header}cx a[0],a[0];\n")),
            Err(QasmError::Invalid(NetlistError::DuplicateWire { .. }))
        ));
    }

    #[test]
    fn parser_tolerates_spacing_and_comments() {
        let text = "\n// banner\nOPENQASM 2.0;\n\nqreg a[1];\nqreg b[2];\n// note\n  ccx a[0], b[0], b[1];\n";
        let c = parse_qasm(text).unwrap();
        assert_eq!(c.width, 3);
        assert_eq!(c.gates, vec![Gate::Toffoli { controls: [0, 1], target: 2 }]);
        assert_eq!(c.registers.len(), 2);
    }
}
