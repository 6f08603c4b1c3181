//! Reversible arithmetic building blocks: in-place ripple-carry
//! adders (plain, carry-out, controlled), subtraction, copy,
//! halving by relabeling, and conditional negation.
//!
//! Two layers live here. The `emit_*` functions write gates into an
//! existing [`Builder`], borrowing scratch wires from its pool; the
//! multiplier builders compose these. The `build_*` functions wrap
//! single blocks as standalone circuits with named registers. Each
//! emitter has a colocated `cnt_*` function stating its exact gate
//! counts; the cost mirror and the tests both hold the emitters to
//! those formulas.
//!
//! The ripple scheme is Cuccaro's: a MAJ sweep propagates carries up
//! through the addend wires, a UMA sweep restores them and writes sum
//! bits. One pooled carry ancilla seeds the chain and is returned
//! clean (a recorded zero-check guards the claim).

use thiserror::Error;

use crate::netlist::{Builder, Circuit, Register, Role};

/// A standalone arithmetic block: a circuit fragment plus role-tagged
/// registers describing its operands (reachable by name through
/// [`Circuit::register`]).
#[derive(Debug, Clone)]
pub struct BlockHandle {
    pub circuit: Circuit,
}

impl BlockHandle {
    /// Operand register lookup; panics on a name the block never declared.
    pub fn reg(&self, name: &str) -> &Register {
        self.circuit
            .register(name)
            .unwrap_or_else(|| panic!("block has no register named {name:?}"))
    }
}

/// Construction errors for the standalone blocks.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum BlockError {
    #[error("block width must be at least 1")]
    ZeroWidth,
    #[error("cannot halve an empty register")]
    EmptyRegister,
}

/// Exact gate tallies a block emitter promises.
///
/// `transient` is the peak number of pool wires the emitter borrows
/// beyond its operand wires (carry ancilla plus zero padding); all of
/// them are returned to the pool before the emitter returns.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub(crate) struct Counts {
    pub ccx: u64,
    pub cnot: u64,
    pub not: u64,
    pub transient: u64,
}

impl std::ops::Add for Counts {
    type Output = Counts;
    fn add(self, o: Counts) -> Counts {
        Counts {
            ccx: self.ccx + o.ccx,
            cnot: self.cnot + o.cnot,
            not: self.not + o.not,
            transient: self.transient.max(o.transient),
        }
    }
}

impl std::ops::AddAssign for Counts {
    fn add_assign(&mut self, o: Counts) {
        *self = *self + o;
    }
}

// MAJ: carry-in wire g, target t, addend a. Leaves a = maj(a, t, g),
// the carry out of this bit position; g and t hold XOR residues the
// matching UMA consumes.
fn maj(b: &mut Builder, g: u32, t: u32, a: u32) {
    b.cnot(a, t);
    b.cnot(a, g);
    b.toffoli(g, t, a);
}

// UMA: inverse bookkeeping of MAJ. Restores a and g, leaves t as the
// sum bit t ^ a ^ carry.
fn uma(b: &mut Builder, g: u32, t: u32, a: u32) {
    b.toffoli(g, t, a);
    b.cnot(a, g);
    b.cnot(g, t);
}

// Controlled UMA: restores a and g unconditionally, writes the sum
// bit only under ctl. The MAJ sweep it undoes ran uncontrolled.
fn cuma(b: &mut Builder, ctl: u32, g: u32, t: u32, a: u32) {
    b.toffoli(g, t, a);
    b.toffoli(ctl, g, t);
    b.cnot(a, t);
    b.cnot(a, g);
}

/// t += a mod 2^w, addend restored. Widths must match.
pub(crate) fn emit_add_mod(b: &mut Builder, a: &[u32], t: &[u32]) {
    let w = t.len();
    assert_eq!(a.len(), w, "addend and target widths must match");
    assert!(w >= 1);
    if w == 1 {
        b.cnot(a[0], t[0]);
        return;
    }
    let carry = b.alloc_wires(1)[0];
    let gamma = |j: usize| if j == 0 { carry } else { a[j - 1] };
    for j in 0..w - 1 {
        maj(b, gamma(j), t[j], a[j]);
    }
    // Top bit needs only the sum: t += a_top ^ carry_top.
    b.cnot(a[w - 1], t[w - 1]);
    b.cnot(gamma(w - 1), t[w - 1]);
    for j in (0..w - 1).rev() {
        uma(b, gamma(j), t[j], a[j]);
    }
    b.release_zero(&[carry]);
}

pub(crate) fn cnt_add_mod(w: usize) -> Counts {
    let w = w as u64;
    if w == 1 {
        Counts { cnot: 1, ..Counts::default() }
    } else {
        Counts { ccx: 2 * w - 2, cnot: 4 * w - 2, not: 0, transient: 1 }
    }
}

/// t += a mod 2^w with the carry out of the top bit XORed onto z.
pub(crate) fn emit_add_carry(b: &mut Builder, a: &[u32], t: &[u32], z: u32) {
    let w = t.len();
    assert_eq!(a.len(), w, "addend and target widths must match");
    assert!(w >= 1);
    if w == 1 {
        b.toffoli(a[0], t[0], z);
        b.cnot(a[0], t[0]);
        return;
    }
    let carry = b.alloc_wires(1)[0];
    let gamma = |j: usize| if j == 0 { carry } else { a[j - 1] };
    for j in 0..w - 1 {
        maj(b, gamma(j), t[j], a[j]);
    }
    // Fused top: one Toffoli yields both the carry-out onto z and the
    // top sum bit, in place of a MAJ/UMA pair.
    let (at, tt, g) = (a[w - 1], t[w - 1], gamma(w - 1));
    b.cnot(at, tt);
    b.cnot(at, g);
    b.toffoli(g, tt, z);
    b.cnot(at, z);
    b.cnot(at, g);
    b.cnot(g, tt);
    for j in (0..w - 1).rev() {
        uma(b, gamma(j), t[j], a[j]);
    }
    b.release_zero(&[carry]);
}

#[cfg(test)]
pub(crate) fn cnt_add_carry(w: usize) -> Counts {
    let w = w as u64;
    if w == 1 {
        Counts { ccx: 1, cnot: 1, ..Counts::default() }
    } else {
        Counts { ccx: 2 * w - 1, cnot: 4 * w + 1, not: 0, transient: 1 }
    }
}

/// t += ctl * a mod 2^w. The carry sweep runs uncontrolled; only the
/// sum writes are gated, which keeps the Toffoli count near 3w.
pub(crate) fn emit_ctrl_add_mod(b: &mut Builder, ctl: u32, a: &[u32], t: &[u32]) {
    let w = t.len();
    assert_eq!(a.len(), w, "addend and target widths must match");
    assert!(w >= 1);
    if w == 1 {
        b.toffoli(ctl, a[0], t[0]);
        return;
    }
    let carry = b.alloc_wires(1)[0];
    let gamma = |j: usize| if j == 0 { carry } else { a[j - 1] };
    for j in 0..w - 1 {
        maj(b, gamma(j), t[j], a[j]);
    }
    b.toffoli(ctl, a[w - 1], t[w - 1]);
    b.toffoli(ctl, gamma(w - 1), t[w - 1]);
    for j in (0..w - 1).rev() {
        cuma(b, ctl, gamma(j), t[j], a[j]);
    }
    b.release_zero(&[carry]);
}

#[cfg(test)]
pub(crate) fn cnt_ctrl_add_mod(w: usize) -> Counts {
    let w = w as u64;
    if w == 1 {
        Counts { ccx: 1, ..Counts::default() }
    } else {
        Counts { ccx: 3 * w - 1, cnot: 4 * w - 4, not: 0, transient: 1 }
    }
}

/// t += ctl * a with the conditional carry out XORed onto z.
pub(crate) fn emit_ctrl_add_carry(b: &mut Builder, ctl: u32, a: &[u32], t: &[u32], z: u32) {
    let w = t.len();
    assert_eq!(a.len(), w, "addend and target widths must match");
    assert!(w >= 1);
    let carry = b.alloc_wires(1)[0];
    let gamma = |j: usize| if j == 0 { carry } else { a[j - 1] };
    for j in 0..w {
        maj(b, gamma(j), t[j], a[j]);
    }
    b.toffoli(ctl, a[w - 1], z);
    for j in (0..w).rev() {
        cuma(b, ctl, gamma(j), t[j], a[j]);
    }
    b.release_zero(&[carry]);
}

#[cfg(test)]
pub(crate) fn cnt_ctrl_add_carry(w: usize) -> Counts {
    let w = w as u64;
    Counts { ccx: 3 * w + 1, cnot: 4 * w, not: 0, transient: 1 }
}

/// NOT on every listed wire (bitwise complement of a register).
pub(crate) fn emit_not_fan(b: &mut Builder, ws: &[u32]) {
    for &w in ws {
        b.not(w);
    }
}

pub(crate) fn cnt_not_fan(w: usize) -> Counts {
    Counts { not: w as u64, ..Counts::default() }
}

/// CNOT from one control onto every listed wire.
pub(crate) fn emit_cnot_fan(b: &mut Builder, ctl: u32, ws: &[u32]) {
    for &w in ws {
        b.cnot(ctl, w);
    }
}

pub(crate) fn cnt_cnot_fan(w: usize) -> Counts {
    Counts { cnot: w as u64, ..Counts::default() }
}

/// dst ^= src bitwise; a copy when dst starts zero.
pub(crate) fn emit_copy(b: &mut Builder, src: &[u32], dst: &[u32]) {
    assert_eq!(src.len(), dst.len(), "copy widths must match");
    for (&s, &d) in src.iter().zip(dst) {
        b.cnot(s, d);
    }
}

pub(crate) fn cnt_copy(w: usize) -> Counts {
    Counts { cnot: w as u64, ..Counts::default() }
}

/// t += a mod 2^w where a may be narrower than t; the missing high
/// bits are zero pads borrowed from the pool.
pub(crate) fn emit_add_mod_padded(b: &mut Builder, a: &[u32], t: &[u32]) {
    assert!(a.len() <= t.len(), "addend wider than target");
    if a.len() == t.len() {
        emit_add_mod(b, a, t);
        return;
    }
    let pads = b.alloc_wires(t.len() - a.len());
    let full: Vec<u32> = a.iter().chain(&pads).copied().collect();
    emit_add_mod(b, &full, t);
    b.release_zero(&pads);
}

pub(crate) fn cnt_add_mod_padded(m: usize, w: usize) -> Counts {
    let inner = cnt_add_mod(w);
    Counts { transient: (w - m) as u64 + inner.transient, ..inner }
}

/// t -= a mod 2^w (two's complement), via ~(~t + a); a may be narrower.
pub(crate) fn emit_sub_in_place_padded(b: &mut Builder, a: &[u32], t: &[u32]) {
    emit_not_fan(b, t);
    emit_add_mod_padded(b, a, t);
    emit_not_fan(b, t);
}

pub(crate) fn cnt_sub_in_place_padded(m: usize, w: usize) -> Counts {
    cnt_add_mod_padded(m, w) + cnt_not_fan(2 * w)
}

/// v := sign ? -v mod 2^w : v. Complement under the sign, then add the
/// sign wire itself back in as the +1 of two's complement negation.
pub(crate) fn emit_cond_negate(b: &mut Builder, sign: u32, v: &[u32]) {
    emit_cnot_fan(b, sign, v);
    emit_add_mod_padded(b, &[sign], v);
}

pub(crate) fn cnt_cond_negate(w: usize) -> Counts {
    cnt_cnot_fan(w) + cnt_add_mod_padded(1, w)
}

/// In-place adder block: (a, b) -> (a, a+b mod 2^width), with the
/// ripple carry out of the top bit landing in a one-wire `cout`
/// register. The chain ancilla is returned to the pool clean.
pub fn build_cuccaro_adder(width: usize) -> Result<BlockHandle, BlockError> {
    if width == 0 {
        return Err(BlockError::ZeroWidth);
    }
    let mut b = Builder::new();
    let a = b.alloc_register("a", width, Role::Input);
    let t = b.alloc_register("b", width, Role::Input);
    let cout = b.alloc_register("cout", 1, Role::Output);
    emit_add_carry(&mut b, &a.wires, &t.wires, cout.wires[0]);
    Ok(BlockHandle { circuit: b.finish() })
}

/// In-place subtractor: (a, b) -> (a, b-a mod 2^width), complement
/// then add then complement around the adder, so its Toffoli count
/// equals the adder's. The adder's carry out lands in a one-wire
/// `borrow` register reading 1 exactly when a > b.
pub fn build_subtractor(width: usize) -> Result<BlockHandle, BlockError> {
    if width == 0 {
        return Err(BlockError::ZeroWidth);
    }
    let mut b = Builder::new();
    let a = b.alloc_register("a", width, Role::Input);
    let t = b.alloc_register("b", width, Role::Input);
    let borrow = b.alloc_register("borrow", 1, Role::Output);
    emit_not_fan(&mut b, &t.wires);
    emit_add_carry(&mut b, &a.wires, &t.wires, borrow.wires[0]);
    emit_not_fan(&mut b, &t.wires);
    Ok(BlockHandle { circuit: b.finish() })
}

/// Controlled in-place adder: (ctl, a, b) -> (ctl, a, b + ctl*a mod 2^width).
pub fn build_controlled_adder(width: usize) -> Result<BlockHandle, BlockError> {
    if width == 0 {
        return Err(BlockError::ZeroWidth);
    }
    let mut b = Builder::new();
    let ctl = b.alloc_register("ctl", 1, Role::Input);
    let a = b.alloc_register("a", width, Role::Input);
    let t = b.alloc_register("b", width, Role::Input);
    emit_ctrl_add_mod(&mut b, ctl.wires[0], &a.wires, &t.wires);
    Ok(BlockHandle { circuit: b.finish() })
}

/// Register copy onto a zero target, one CNOT per bit.
pub fn build_copy(width: usize) -> Result<BlockHandle, BlockError> {
    if width == 0 {
        return Err(BlockError::ZeroWidth);
    }
    let mut b = Builder::new();
    let src = b.alloc_register("src", width, Role::Input);
    let dst = b.alloc_register("dst", width, Role::Output);
    emit_copy(&mut b, &src.wires, &dst.wires);
    Ok(BlockHandle { circuit: b.finish() })
}

/// Conditional two's complement negation:
/// (sign, v) -> (sign, sign ? -v mod 2^width : v).
pub fn build_conditional_negate(width: usize) -> Result<BlockHandle, BlockError> {
    if width == 0 {
        return Err(BlockError::ZeroWidth);
    }
    let mut b = Builder::new();
    let sign = b.alloc_register("sign", 1, Role::Input);
    let v = b.alloc_register("v", width, Role::Input);
    emit_cond_negate(&mut b, sign.wires[0], &v.wires);
    Ok(BlockHandle { circuit: b.finish() })
}

/// Halve an even register by relabeling: drops the LSB wire from the
/// register view at zero gate cost. The builder records a zero-check
/// obligation on the dropped wire (the construction's evenness claim,
/// verified whenever the circuit is simulated) and returns it to the
/// pool as a clean ancilla.
pub fn shift_halve(b: &mut Builder, reg: &Register) -> Result<Register, BlockError> {
    let Some((&lsb, rest)) = reg.wires.split_first() else {
        return Err(BlockError::EmptyRegister);
    };
    b.release_zero(&[lsb]);
    Ok(Register {
        name: reg.name.clone(),
        wires: rest.to_vec(),
        interpretation: reg.interpretation,
        role: reg.role,
    })
}
