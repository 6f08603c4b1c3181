//! Recursive multiplier circuit builders: Toom-2.5, Karatsuba, and
//! naive shift-and-add, over the common register convention
//! x = wires 0..n, y = n..2n, product = 2n..4n.
//!
//! Every builder realizes (x, y, 0, 0) -> (x, y, 0, x*y) when
//! uncomputation is on, and (x, y, g, x*y) with garbage g when off.
//!
//! The recursion is planned first ([`PlanNode`]) and emitted second.
//! The plan fixes, per node, the limb radix, every intermediate
//! register width, and the child operand shapes; the gate emitter,
//! the closed-form cost mirror, and the instrumentation tests all
//! walk the same plan, which is what makes exact count
//! reconciliation possible.
//!
//! Toom-2.5 splits the wider operand y into three limbs and the
//! narrower x into two, sharing one radix 2^i:
//!   x = x1*2^i + x0,  y = y2*2^{2i} + y1*2^i + y0.
//! Four half-size products are taken at the evaluation points
//! {0, 1, -1, inf}:
//!   P = x0*y0, Q = (x0+x1)(y0+y1+y2), R = (x0-x1)(y0-y1+y2),
//!   S = x1*y2,
//! and the product coefficients are interpolated as
//!   B = (Q+R)/2 - P,  C = (Q-R)/2 - S,
//!   x*y = S*2^{3i} + B*2^{2i} + C*2^i + P.
//! Q+R and Q-R are always even (each is twice a sum of limb
//! products), so the halvings are wire relabelings guarded by
//! recorded zero checks. The -1 point is handled sign-magnitude:
//! both differences are conditionally negated to magnitudes next to
//! one sign wire each, and R enters the interpolation through
//! complement sandwiches controlled by the combined sign. The
//! alternative point set {0, 1, 2, inf} replaces R with
//! R2 = (x0+2x1)(y0+2y1+4y2) = P + 2C + 4B + 8S, avoiding signs at
//! the cost of wider operands and shifted adders.

use num_bigint::BigUint;
use thiserror::Error;

use crate::blocks::{
    emit_add_mod_padded, emit_cnot_fan, emit_cond_negate, emit_copy, emit_ctrl_add_carry,
    emit_not_fan, emit_sub_in_place_padded,
};
use crate::netlist::{Builder, Circuit, Interpretation, Register, Role};

/// Multiplication algorithm selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Toom25,
    Karatsuba,
    Naive,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Toom25 => "toom25",
            Method::Karatsuba => "karatsuba",
            Method::Naive => "naive",
        }
    }
}

/// Interpolation points for the Toom-2.5 recursion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalPointSet {
    /// {0, 1, -1, inf}: narrowest operands, needs sign handling.
    ZeroOneMinusOneInf,
    /// {0, 1, 2, inf}: sign-free, wider point-product operands.
    ZeroOneTwoInf,
}

/// Construction parameters shared by all builders.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MultiplierConfig {
    pub method: Method,
    /// Operands at or below this width multiply by the naive method.
    pub base_threshold: usize,
    pub eval_point_set: EvalPointSet,
    /// Reverse the compute section after copying the product out.
    pub uncompute: bool,
}

impl Default for MultiplierConfig {
    fn default() -> Self {
        MultiplierConfig {
            method: Method::Toom25,
            base_threshold: 4,
            eval_point_set: EvalPointSet::ZeroOneMinusOneInf,
            uncompute: true,
        }
    }
}

/// Builder failures.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum MultiplierError {
    #[error("operand width must be at least 1")]
    ZeroWidth,
    #[error("base threshold must be at least 1")]
    ZeroThreshold,
    #[error(
        "width {n} with base threshold {threshold} is a single base case; \
         there is no Toom level whose product terms could be exposed"
    )]
    NoToomLevel { n: usize, threshold: usize },
}

/// Uniform limb decomposition of an n-bit operand into `parts` limbs
/// of i = ceil(n/parts) bits each, the top limb zero-padded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LimbSplit {
    pub n: usize,
    pub parts: usize,
    /// Limb size (the radix is 2^i).
    pub i: usize,
}

impl LimbSplit {
    /// Bits the k-th limb actually occupies in the operand (the
    /// logical limb is i bits; the tail may be narrower or empty).
    pub fn limb_width(&self, k: usize) -> usize {
        let lo = (k * self.i).min(self.n);
        let hi = ((k + 1) * self.i).min(self.n);
        hi - lo
    }

    /// Wires of the k-th limb within an operand register's wires.
    pub fn limb_wires<'a>(&self, wires: &'a [u32], k: usize) -> &'a [u32] {
        let lo = (k * self.i).min(self.n);
        &wires[lo..lo + self.limb_width(k)]
    }

    /// Limb values of an integer, least significant limb first.
    pub fn limb_values(&self, v: &BigUint) -> Vec<BigUint> {
        let mask = (BigUint::from(1u32) << self.i) - 1u32;
        (0..self.parts).map(|k| (v >> (k * self.i)) & &mask).collect()
    }

    /// Inverse of [`limb_values`]: sum of limbs weighted by 2^{k*i}.
    pub fn reassemble(&self, limbs: &[BigUint]) -> BigUint {
        limbs
            .iter()
            .enumerate()
            .map(|(k, l)| l << (k * self.i))
            .sum()
    }
}

/// Split an n-bit operand into 2 or 3 uniform limbs.
pub fn decompose(n: usize, parts: usize) -> LimbSplit {
    assert!(n >= 1, "operand width must be at least 1");
    assert!(parts == 2 || parts == 3, "only 2- and 3-way splits exist");
    LimbSplit { n, parts, i: n.div_ceil(parts) }
}

// ---------------------------------------------------------------------------
// Recursion plan
// ---------------------------------------------------------------------------

/// One node of the planned recursion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum PlanNode {
    /// Naive rectangular multiply of an s-bit by a t-bit operand.
    Base { s: usize, t: usize },
    Toom(Box<ToomPlan>),
    Kar(Box<KarPlan>),
}

impl PlanNode {
    #[cfg(test)]
    pub(crate) fn operand_widths(&self) -> (usize, usize) {
        match self {
            PlanNode::Base { s, t } => (*s, *t),
            PlanNode::Toom(p) => (p.s, p.t),
            PlanNode::Kar(p) => (p.s, p.t),
        }
    }
}

/// A Toom-2.5 node in canonical orientation: the 3-split operand has
/// t bits, the 2-split one s bits, t >= s at the call site that
/// created the node. All derived widths are functions of (s, t, i).
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct ToomPlan {
    /// 2-split operand width.
    pub s: usize,
    /// 3-split operand width.
    pub t: usize,
    /// Limb size (single radix 2^i for both splits).
    pub i: usize,
    pub points: EvalPointSet,
    /// Children in emission order: P, Q, R (or R2), S.
    pub children: [PlanNode; 4],
}

impl ToomPlan {
    pub(crate) fn wx1(&self) -> usize {
        self.s - self.i
    }
    pub(crate) fn wy2(&self) -> usize {
        self.t - 2 * self.i
    }
    /// Two's complement width of x0 - x1.
    pub(crate) fn wdx(&self) -> usize {
        self.i.max(self.wx1()) + 1
    }
    /// Two's complement width of y0 - y1 + y2.
    pub(crate) fn wdy(&self) -> usize {
        self.i.max(self.wy2()) + 2
    }
    /// Width of x0 + x1.
    pub(crate) fn wqx(&self) -> usize {
        self.i.max(self.wx1()) + 1
    }
    /// Width of y0 + y1 + y2.
    pub(crate) fn wqy(&self) -> usize {
        self.i.max(self.wy2()) + 2
    }
    /// Width of the Q point product (and of the V = Q - R register).
    pub(crate) fn wpq(&self) -> usize {
        self.wqx() + self.wqy()
    }
    /// Width of x0 + 2*x1.
    pub(crate) fn w2x(&self) -> usize {
        self.i.max(self.wx1() + 1) + 1
    }
    /// Width of y0 + 2*y1 + 4*y2.
    pub(crate) fn w2y(&self) -> usize {
        (self.i + 1).max(self.wy2() + 2) + 2
    }
    /// Coefficient width: B = x0*y2 + x1*y1.
    pub(crate) fn wb(&self) -> usize {
        (self.i + self.wy2()).max(self.wx1() + self.i) + 1
    }
    /// Coefficient width: C = x0*y1 + x1*y0.
    pub(crate) fn wc(&self) -> usize {
        self.i.max(self.wx1()) + self.i + 1
    }
    /// Operand widths of the third-point child (R or R2).
    pub(crate) fn r_child_widths(&self) -> (usize, usize) {
        match self.points {
            EvalPointSet::ZeroOneMinusOneInf => (self.wdx() - 1, self.wdy() - 1),
            EvalPointSet::ZeroOneTwoInf => (self.w2x(), self.w2y()),
        }
    }
}

/// A Karatsuba node: both operands 2-split at the shared limb size
/// i = ceil(max(s,t)/2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct KarPlan {
    pub s: usize,
    pub t: usize,
    pub i: usize,
    /// Children in emission order: P0 = x0*y0, P2 = x1*y1,
    /// P1 = (x0+x1)(y0+y1).
    pub children: [PlanNode; 3],
}

impl KarPlan {
    /// Width of the middle coefficient x0*y1 + x1*y0.
    pub(crate) fn wmid(&self) -> usize {
        self.s.max(self.t) + 1
    }
}

/// Single shared radix for a Toom-2.5 node, about (s+t)/5 bits so
/// grandchildren of a square call come out near-square, clamped so
/// both splits stay feasible (x1 and y2 nonempty).
fn toom_radix(s: usize, t: usize) -> usize {
    let upper = (s - 1).min((t - 1) / 2);
    (s + t).div_ceil(5).clamp(1, upper.max(1))
}

/// Plan one node for the given method and operand widths.
pub(crate) fn plan_node(su: usize, sv: usize, cfg: &MultiplierConfig) -> PlanNode {
    match cfg.method {
        Method::Naive => PlanNode::Base { s: su, t: sv },
        Method::Toom25 => toom_plan(su, sv, cfg),
        Method::Karatsuba => kar_plan(su, sv, cfg),
    }
}

fn toom_plan(su: usize, sv: usize, cfg: &MultiplierConfig) -> PlanNode {
    // The wider operand is 3-split; on ties, the first.
    let (t, s) = if su >= sv { (su, sv) } else { (sv, su) };
    if s.min(t) <= cfg.base_threshold || s < 2 || t < 3 {
        return PlanNode::Base { s: su, t: sv };
    }
    let i = toom_radix(s, t);
    let probe = ToomPlan {
        s,
        t,
        i,
        points: cfg.eval_point_set,
        children: std::array::from_fn(|_| PlanNode::Base { s: 0, t: 0 }),
    };
    let (wrx, wry) = probe.r_child_widths();
    // Every child must be strictly narrower than this node, or the
    // recursion would not terminate; fall back to the base case.
    if probe.wpq() >= s + t || wrx + wry >= s + t {
        return PlanNode::Base { s: su, t: sv };
    }
    let children = [
        plan_node(i, i, cfg),
        plan_node(probe.wqx(), probe.wqy(), cfg),
        plan_node(wrx, wry, cfg),
        plan_node(probe.wx1(), probe.wy2(), cfg),
    ];
    PlanNode::Toom(Box::new(ToomPlan { children, ..probe }))
}

fn kar_plan(su: usize, sv: usize, cfg: &MultiplierConfig) -> PlanNode {
    let (s, t) = (su, sv);
    let i = s.max(t).div_ceil(2);
    if s.min(t) <= cfg.base_threshold || s.min(t) <= i || 2 * (i + 1) >= s + t {
        return PlanNode::Base { s: su, t: sv };
    }
    let children = [
        plan_node(i, i, cfg),
        plan_node(s - i, t - i, cfg),
        plan_node(i + 1, i + 1, cfg),
    ];
    PlanNode::Kar(Box::new(KarPlan { s, t, i, children }))
}

// ---------------------------------------------------------------------------
// Gate emission
// ---------------------------------------------------------------------------

/// Ripple window width for an in-place shifted add of an m-bit value
/// at `offset` into an accumulator of `total` bits holding `acc_bits`
/// significant bits: wide enough that no carry is lost, clipped at
/// the top (exact anyway, the full product fits the accumulator).
pub(crate) fn window_ripple(m: usize, total: usize, offset: usize, acc_bits: usize) -> usize {
    (total - offset).min(m.max(acc_bits.saturating_sub(offset)) + 1)
}

/// New significant-bit count after that add.
pub(crate) fn window_acc_bits(m: usize, total: usize, offset: usize, acc_bits: usize) -> usize {
    total.min(acc_bits.max(m + offset) + 1)
}

fn emit_window_add(
    b: &mut Builder,
    addend: &[u32],
    out: &[u32],
    offset: usize,
    acc_bits: &mut usize,
) {
    let r = window_ripple(addend.len(), out.len(), offset, *acc_bits);
    emit_add_mod_padded(b, addend, &out[offset..offset + r]);
    *acc_bits = window_acc_bits(addend.len(), out.len(), offset, *acc_bits);
}

/// Wire groups of one emitted Toom node, for introspection.
struct ToomNodeWires {
    p: Vec<u32>,
    q: Vec<u32>,
    r: Vec<u32>,
    s: Vec<u32>,
    b: Vec<u32>,
    c: Vec<u32>,
    sx: Option<u32>,
    sy: Option<u32>,
    sr: Option<u32>,
}

/// Emit a node's compute section: out (zero on entry) ends holding
/// u * v; intermediates are left live (garbage) for a global reverse.
fn emit_node(b: &mut Builder, node: &PlanNode, u: &[u32], v: &[u32], out: &[u32]) {
    match node {
        PlanNode::Base { .. } => naive_mul_acc(b, u, v, out),
        PlanNode::Toom(p) => {
            emit_toom(b, p, u, v, out);
        }
        PlanNode::Kar(p) => emit_kar(b, p, u, v, out),
    }
}

/// Compute a signed combination into a fresh two's complement
/// register: value = sum of `plus` minus `minus`, then split into
/// (magnitude, sign wire). Widths must make overflow impossible.
fn emit_signed_magnitude(
    b: &mut Builder,
    width: usize,
    plus: &[&[u32]],
    minus: &[&[u32]],
) -> (Vec<u32>, u32) {
    let d = b.alloc_wires(width);
    emit_copy(b, plus[0], &d[..plus[0].len()]);
    for term in &plus[1..] {
        emit_add_mod_padded(b, term, &d);
    }
    for term in minus {
        emit_sub_in_place_padded(b, term, &d);
    }
    let sign = b.alloc_wires(1)[0];
    b.cnot(d[width - 1], sign);
    emit_cond_negate(b, sign, &d);
    // The magnitude fits width-1 bits, so the top is clean again.
    b.release_zero(&d[width - 1..]);
    (d[..width - 1].to_vec(), sign)
}

fn emit_toom(b: &mut Builder, plan: &ToomPlan, u: &[u32], v: &[u32], out: &[u32]) -> ToomNodeWires {
    let wires = emit_toom_terms(b, plan, u, v, out);
    // Assembly: out already holds P; add C, B, S at offsets i, 2i,
    // 3i with just-wide-enough ripple windows.
    let i = plan.i;
    let mut acc_bits = 2 * i;
    emit_window_add(b, &wires.c, out, i, &mut acc_bits);
    emit_window_add(b, &wires.b, out, 2 * i, &mut acc_bits);
    emit_window_add(b, &wires.s, out, 3 * i, &mut acc_bits);
    wires
}

/// Everything up to the interpolation boundary: point products,
/// coefficient recovery, and halving, but not the shifted
/// recombination into the accumulator. The output window holds only
/// P; the returned wires name each coefficient in place.
fn emit_toom_terms(
    b: &mut Builder,
    plan: &ToomPlan,
    u: &[u32],
    v: &[u32],
    out: &[u32],
) -> ToomNodeWires {
    // Canonical orientation: y is the 3-split operand.
    let (y, x) = if u.len() >= v.len() { (u, v) } else { (v, u) };
    debug_assert_eq!(x.len(), plan.s);
    debug_assert_eq!(y.len(), plan.t);
    debug_assert_eq!(out.len(), plan.s + plan.t);
    let i = plan.i;
    let (x0, x1) = (&x[..i], &x[i..]);
    let (y0, y1, y2) = (&y[..i], &y[i..2 * i], &y[2 * i..]);
    let [cp, cq, cr, cs] = &plan.children;

    // Point products at 0, 1, and infinity are common to both sets.
    // P goes straight into the low window of the accumulator; the
    // interpolation below reads it back as a restored addend.
    let qx = {
        let q = b.alloc_wires(plan.wqx());
        emit_copy(b, x0, &q[..i]);
        emit_add_mod_padded(b, x1, &q);
        q
    };
    let qy = {
        let q = b.alloc_wires(plan.wqy());
        emit_copy(b, y0, &q[..i]);
        emit_add_mod_padded(b, y1, &q);
        emit_add_mod_padded(b, y2, &q);
        q
    };
    let p = &out[..2 * i];

    let (bb, cc, r_wires, s_wires, pq, signs);
    match plan.points {
        EvalPointSet::ZeroOneMinusOneInf => {
            // Signed differences as magnitude + sign.
            let (dxm, sx) = emit_signed_magnitude(b, plan.wdx(), &[x0], &[x1]);
            let (dym, sy) = emit_signed_magnitude(b, plan.wdy(), &[y0, y2], &[y1]);
            let sr = b.alloc_wires(1)[0];
            b.cnot(sx, sr);
            b.cnot(sy, sr);

            emit_node(b, cp, x0, y0, p);
            let pqv = b.alloc_wires(plan.wpq());
            emit_node(b, cq, &qx, &qy, &pqv);
            let pr = b.alloc_wires(dxm.len() + dym.len());
            emit_node(b, cr, &dxm, &dym, &pr);
            let ps = b.alloc_wires(plan.wx1() + plan.wy2());
            emit_node(b, cs, x1, y2, &ps);

            // U = Q + (-1)^sr * |R| on a fresh register one bit wider
            // than Q; the sandwich complements around the add exactly
            // when the sign is negative.
            let uu = b.alloc_wires(plan.wpq() + 1);
            emit_copy(b, &pqv, &uu[..plan.wpq()]);
            emit_cnot_fan(b, sr, &uu);
            emit_add_mod_padded(b, &pr, &uu);
            emit_cnot_fan(b, sr, &uu);
            // V = Q - (-1)^sr * |R| in place on Q: complement exactly
            // when the sign is positive (NOT fan + controlled fan).
            emit_not_fan(b, &pqv);
            emit_cnot_fan(b, sr, &pqv);
            emit_add_mod_padded(b, &pr, &pqv);
            emit_not_fan(b, &pqv);
            emit_cnot_fan(b, sr, &pqv);

            // Both are even; halve by relabeling, then subtract the
            // outer point products to reach the coefficients.
            b.release_zero(&uu[..1]);
            let uh = &uu[1..];
            emit_sub_in_place_padded(b, p, uh);
            b.release_zero(&uh[plan.wb()..]);
            b.release_zero(&pqv[..1]);
            let vh = &pqv[1..];
            emit_sub_in_place_padded(b, &ps, vh);
            b.release_zero(&vh[plan.wc()..]);

            bb = uh[..plan.wb()].to_vec();
            cc = vh[..plan.wc()].to_vec();
            r_wires = pr;
            s_wires = ps;
            pq = pqv;
            signs = (Some(sx), Some(sy), Some(sr));
        }
        EvalPointSet::ZeroOneTwoInf => {
            // Sign-free third point: R2 = (x0 + 2x1)(y0 + 2y1 + 4y2),
            // shifted copies and adds only.
            let r2x = {
                let r = b.alloc_wires(plan.w2x());
                emit_copy(b, x0, &r[..i]);
                emit_add_mod_padded(b, x1, &r[1..]);
                r
            };
            let r2y = {
                let r = b.alloc_wires(plan.w2y());
                emit_copy(b, y0, &r[..i]);
                emit_add_mod_padded(b, y1, &r[1..]);
                emit_add_mod_padded(b, y2, &r[2..]);
                r
            };

            emit_node(b, cp, x0, y0, p);
            let pqv = b.alloc_wires(plan.wpq());
            emit_node(b, cq, &qx, &qy, &pqv);
            let pt = b.alloc_wires(plan.w2x() + plan.w2y());
            emit_node(b, cr, &r2x, &r2y, &pt);
            let ps = b.alloc_wires(plan.wx1() + plan.wy2());
            emit_node(b, cs, x1, y2, &ps);

            // 2B = R2 + P - 2Q - 6S, all in place on the R2 register;
            // intermediate wraps cancel, the result is exact.
            emit_add_mod_padded(b, p, &pt);
            emit_not_fan(b, &pt);
            emit_add_mod_padded(b, &pqv, &pt[1..]);
            emit_add_mod_padded(b, &ps, &pt[1..]);
            emit_add_mod_padded(b, &ps, &pt[2..]);
            emit_not_fan(b, &pt);
            b.release_zero(&pt[..1]);
            let th = &pt[1..];
            b.release_zero(&th[plan.wb()..]);
            let bv = &th[..plan.wb()];

            // C = Q - P - B - S in place on Q.
            emit_not_fan(b, &pqv);
            emit_add_mod_padded(b, p, &pqv);
            emit_add_mod_padded(b, bv, &pqv);
            emit_add_mod_padded(b, &ps, &pqv);
            emit_not_fan(b, &pqv);
            b.release_zero(&pqv[plan.wc()..]);

            bb = bv.to_vec();
            cc = pqv[..plan.wc()].to_vec();
            r_wires = pt;
            s_wires = ps;
            pq = pqv;
            signs = (None, None, None);
        }
    }

    ToomNodeWires {
        p: p.to_vec(),
        q: pq,
        r: r_wires,
        s: s_wires,
        b: bb,
        c: cc,
        sx: signs.0,
        sy: signs.1,
        sr: signs.2,
    }
}

fn emit_kar(b: &mut Builder, plan: &KarPlan, u: &[u32], v: &[u32], out: &[u32]) {
    debug_assert_eq!(u.len(), plan.s);
    debug_assert_eq!(v.len(), plan.t);
    debug_assert_eq!(out.len(), plan.s + plan.t);
    let i = plan.i;
    let (x0, x1) = (&u[..i], &u[i..]);
    let (y0, y1) = (&v[..i], &v[i..]);
    let [c0, c2, c1] = &plan.children;

    let qx = {
        let q = b.alloc_wires(i + 1);
        emit_copy(b, x0, &q[..i]);
        emit_add_mod_padded(b, x1, &q);
        q
    };
    let qy = {
        let q = b.alloc_wires(i + 1);
        emit_copy(b, y0, &q[..i]);
        emit_add_mod_padded(b, y1, &q);
        q
    };
    let p0 = &out[..2 * i];
    emit_node(b, c0, x0, y0, p0);
    let p2 = b.alloc_wires(plan.s + plan.t - 2 * i);
    emit_node(b, c2, x1, y1, &p2);
    let p1 = b.alloc_wires(2 * i + 2);
    emit_node(b, c1, &qx, &qy, &p1);

    // Mid = P1 - P0 - P2 in place on P1, nonnegative by the
    // Karatsuba identity (it equals x0*y1 + x1*y0).
    emit_not_fan(b, &p1);
    emit_add_mod_padded(b, p0, &p1);
    emit_add_mod_padded(b, &p2, &p1);
    emit_not_fan(b, &p1);
    b.release_zero(&p1[plan.wmid()..]);
    let mid = &p1[..plan.wmid()];

    let mut acc_bits = 2 * i;
    emit_window_add(b, mid, out, i, &mut acc_bits);
    emit_window_add(b, &p2, out, 2 * i, &mut acc_bits);
}

/// Rectangular naive multiply: out (zero) += u * v by one Toffoli
/// row for the lowest bit of the narrower operand and one controlled
/// adder with carry-out per remaining bit. Garbage-free: the only
/// scratch is the ripple carry, returned clean.
pub(crate) fn naive_mul_acc(b: &mut Builder, u: &[u32], v: &[u32], out: &[u32]) {
    let (outer, inner) = if u.len() <= v.len() { (u, v) } else { (v, u) };
    assert_eq!(out.len(), outer.len() + inner.len());
    let vlen = inner.len();
    for (k, &iw) in inner.iter().enumerate() {
        b.toffoli(outer[0], iw, out[k]);
    }
    for (j, &ow) in outer.iter().enumerate().skip(1) {
        // The partial sum so far occupies fewer than j + vlen bits,
        // so the carry target is provably clean; record the claim.
        b.record_zero_check(out[j + vlen]);
        emit_ctrl_add_carry(b, ow, inner, &out[j..j + vlen], out[j + vlen]);
    }
}

/// Exact gate counts of [`naive_mul_acc`].
pub(crate) fn cnt_naive(su: usize, sv: usize) -> crate::blocks::Counts {
    let (u, v) = (su.min(sv) as u64, su.max(sv) as u64);
    crate::blocks::Counts {
        ccx: v + (u - 1) * (3 * v + 1),
        cnot: 4 * v * (u - 1),
        not: 0,
        transient: u64::from(u >= 2),
    }
}

// ---------------------------------------------------------------------------
// Public builders
// ---------------------------------------------------------------------------

fn check_config(n: usize, cfg: &MultiplierConfig) -> Result<(), MultiplierError> {
    if n == 0 {
        return Err(MultiplierError::ZeroWidth);
    }
    if cfg.base_threshold == 0 {
        return Err(MultiplierError::ZeroThreshold);
    }
    Ok(())
}

struct Frame {
    builder: Builder,
    x: Register,
    y: Register,
    product: Register,
    root: PlanNode,
}

fn open_frame(n: usize, cfg: &MultiplierConfig) -> Result<Frame, MultiplierError> {
    check_config(n, cfg)?;
    let mut builder = Builder::new();
    let x = builder.alloc_register("x", n, Role::Input);
    let y = builder.alloc_register("y", n, Role::Input);
    let product = builder.alloc_register("product", 2 * n, Role::Output);
    let root = plan_node(n, n, cfg);
    Ok(Frame { builder, x, y, product, root })
}

fn build_with(n: usize, cfg: MultiplierConfig) -> Result<Circuit, MultiplierError> {
    let Frame { mut builder, x, y, product, root } = open_frame(n, &cfg)?;
    if let PlanNode::Base { .. } = root {
        // Base-case root: the naive block is garbage-free and
        // orientation-free, so it writes the product directly and
        // needs no uncompute pass under either setting.
        naive_mul_acc(&mut builder, &x.wires, &y.wires, &product.wires);
        return Ok(builder.finish());
    }
    // For Toom the 3-split operand is passed first, so the recursion
    // splits y into three limbs at the root; Karatsuba and the naive
    // method are orientation-free.
    let (first, second) = match cfg.method {
        Method::Toom25 => (&y.wires, &x.wires),
        _ => (&x.wires, &y.wires),
    };
    if cfg.uncompute {
        let acc = builder.alloc_wires(2 * n);
        let start = builder.len();
        emit_node(&mut builder, &root, first, second, &acc);
        let end = builder.len();
        emit_copy(&mut builder, &acc, &product.wires);
        builder.append_reverse_range(start, end);
    } else {
        emit_node(&mut builder, &root, first, second, &product.wires);
    }
    Ok(builder.finish())
}

/// Toom-2.5 multiplier for two n-bit operands.
pub fn build_toom25(n: usize, cfg: MultiplierConfig) -> Result<Circuit, MultiplierError> {
    build_with(n, MultiplierConfig { method: Method::Toom25, ..cfg })
}

/// Karatsuba multiplier for two n-bit operands.
pub fn build_karatsuba(n: usize, cfg: MultiplierConfig) -> Result<Circuit, MultiplierError> {
    build_with(n, MultiplierConfig { method: Method::Karatsuba, ..cfg })
}

/// Naive shift-and-add multiplier for two n-bit operands.
pub fn build_naive(n: usize, cfg: MultiplierConfig) -> Result<Circuit, MultiplierError> {
    build_with(n, MultiplierConfig { method: Method::Naive, ..cfg })
}

/// Build by the method named in the configuration.
pub fn build_multiplier(n: usize, cfg: MultiplierConfig) -> Result<Circuit, MultiplierError> {
    build_with(n, cfg)
}

/// The point products and interpolated coefficients of the root
/// Toom-2.5 node, as registers over the returned circuit's wires.
///
/// The circuit is built without uncomputation so every group is
/// still populated at the end of a run. Interpolation rewrites two
/// of them in place: the Q register ends holding 2*C (C plus the
/// released halving wire below it) and the R register ends holding
/// the shifted/truncated form of B, so the value-level identities
/// for Q and R are checked through the reconstruction
/// Q = 2*(C + S) + R rather than read directly.
#[derive(Debug, Clone)]
pub struct ProductTerms {
    /// Radix of the root split (limb size in bits).
    pub radix: usize,
    /// P = x0*y0 (low window of the product accumulator).
    pub p: Register,
    /// Register Q = (x0+x1)(y0+y1+y2) was computed into.
    pub q: Register,
    /// Register the third point product was computed into: |R| for
    /// points {0,1,-1,inf}, R2 for {0,1,2,inf}.
    pub r: Register,
    /// S = x1*y2.
    pub s: Register,
    /// A = S (the top interpolated coefficient is the infinity point).
    pub a: Register,
    /// B = x0*y2 + x1*y1.
    pub b: Register,
    /// C = x0*y1 + x1*y0.
    pub c: Register,
    /// D = P (the bottom coefficient is the zero point).
    pub d: Register,
    /// Sign of x0 - x1 (absent for the sign-free point set).
    pub sign_x: Option<Register>,
    /// Sign of y0 - y1 + y2.
    pub sign_y: Option<Register>,
    /// Combined sign of R (sign_x XOR sign_y).
    pub sign_r: Option<Register>,
}

/// Build a compute-only Toom-2.5 circuit and expose the root node's
/// term registers for inspection.
pub fn build_toom25_with_terms(
    n: usize,
    cfg: MultiplierConfig,
) -> Result<(Circuit, ProductTerms), MultiplierError> {
    let cfg = MultiplierConfig { method: Method::Toom25, uncompute: false, ..cfg };
    let Frame { mut builder, x, y, product, root } = open_frame(n, &cfg)?;
    let PlanNode::Toom(plan) = &root else {
        return Err(MultiplierError::NoToomLevel { n, threshold: cfg.base_threshold });
    };
    let wires = emit_toom_terms(&mut builder, plan, &y.wires, &x.wires, &product.wires);
    let circuit = builder.finish();
    let reg = |name: &str, ws: &[u32]| Register::new(name, ws.to_vec(), Role::Ancilla);
    let sign = |name: &str, w: Option<u32>| w.map(|w| Register::new(name, vec![w], Role::Sign));
    let terms = ProductTerms {
        radix: plan.i,
        p: reg("p", &wires.p),
        q: reg("q", &wires.q),
        r: reg("r", &wires.r),
        s: reg("s", &wires.s),
        a: reg("a", &wires.s),
        b: reg("b", &wires.b),
        c: reg("c", &wires.c),
        d: reg("d", &wires.p),
        sign_x: sign("sign_x", wires.sx),
        sign_y: sign("sign_y", wires.sy),
        sign_r: sign("sign_r", wires.sr),
    };
    Ok((circuit, terms))
}

// ---------------------------------------------------------------------------
// Signed difference multiplier
// ---------------------------------------------------------------------------

/// Standalone realization of the -1-point product: given limb
/// registers x0 and x1 (wx bits each), a magnitude register m (my
/// bits) and its sign wire sy, computes
/// (x0 - x1) * (-1)^sy * m into a two's complement `product`
/// register of wx + my + 1 bits. The difference is taken two's
/// complement, its top bit becomes the x-side sign wire, the
/// magnitudes multiply by the configured recursive method, and the
/// product is conditionally negated by the XOR of the signs; the
/// compute section is then reversed, leaving only inputs and product.
pub fn build_signed_sub_multiply(
    wx: usize,
    my: usize,
    cfg: MultiplierConfig,
) -> Result<Circuit, MultiplierError> {
    if wx == 0 || my == 0 {
        return Err(MultiplierError::ZeroWidth);
    }
    if cfg.base_threshold == 0 {
        return Err(MultiplierError::ZeroThreshold);
    }
    let mut b = Builder::new();
    let x0 = b.alloc_register("x0", wx, Role::Input);
    let x1 = b.alloc_register("x1", wx, Role::Input);
    let m = b.alloc_register("m", my, Role::Input);
    let sy = b.alloc_register("sy", 1, Role::Sign);
    let product = b.alloc_register("product", wx + my + 1, Role::Output);
    let start = b.len();
    let (dxm, sx) = emit_signed_magnitude(&mut b, wx + 1, &[&x0.wires], &[&x1.wires]);
    let sr = b.alloc_wires(1)[0];
    b.cnot(sx, sr);
    b.cnot(sy.wires[0], sr);
    let mag = b.alloc_wires(dxm.len() + my);
    let node = plan_node(dxm.len(), my, &cfg);
    emit_node(&mut b, &node, &dxm, &m.wires, &mag);
    let end = b.len();
    // Copy the magnitude out, negate under the combined sign (the
    // reverse replays cleanly: it reads these wires only as
    // controls), then unwind the compute section.
    emit_copy(&mut b, &mag, &product.wires[..mag.len()]);
    emit_cond_negate(&mut b, sr, &product.wires);
    b.append_reverse_range(start, end);
    let mut c = b.finish();
    // Record the product's signed interpretation in the register table.
    for reg in &mut c.registers {
        if reg.name == "product" {
            reg.interpretation = Interpretation::TwosComplement;
        }
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::Gate;
    use crate::sim::{check_parity_sites, simulate, verify_multiplier, BasisState, TestVectorPlan};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cfg(method: Method) -> MultiplierConfig {
        MultiplierConfig { method, ..MultiplierConfig::default() }
    }

    fn big(v: u128) -> BigUint {
        let bytes = v.to_le_bytes();
        BigUint::from_bytes_le(&bytes)
    }

    fn assert_verified(c: &Circuit, plan: TestVectorPlan, strict: bool) {
        let rep = verify_multiplier(c, plan, strict).unwrap();
        assert!(rep.passed(), "{}", rep.verdict());
    }

    #[test]
    fn naive_matches_oracle() {
        for n in 1..=4 {
            let c = build_naive(n, cfg(Method::Naive)).unwrap();
            assert_verified(&c, TestVectorPlan::Exhaustive, true);
        }
        // 21 * 19 = 399 as a direct spot check at n = 5.
        let c = build_naive(5, cfg(Method::Naive)).unwrap();
        let mut state = BasisState::zero(c.width);
        state.load_register(c.register("x").unwrap(), &big(21));
        state.load_register(c.register("y").unwrap(), &big(19));
        simulate(&c, &mut state).unwrap();
        assert_eq!(state.read_register(c.register("product").unwrap()), big(399));
        assert_verified(&c, TestVectorPlan::random(400, 3), true);
    }

    #[test]
    fn toom_matches_oracle_exhaustively_when_small() {
        for n in 1..=6 {
            let c = build_toom25(n, cfg(Method::Toom25)).unwrap();
            assert_verified(&c, TestVectorPlan::Exhaustive, true);
        }
    }

    #[test]
    fn karatsuba_matches_oracle_exhaustively_when_small() {
        for n in 1..=6 {
            let c = build_karatsuba(n, cfg(Method::Karatsuba)).unwrap();
            assert_verified(&c, TestVectorPlan::Exhaustive, true);
        }
    }

    #[test]
    fn toom_matches_oracle_at_recursive_widths() {
        for n in [7, 9, 12] {
            let c = build_toom25(n, cfg(Method::Toom25)).unwrap();
            assert_verified(&c, TestVectorPlan::random(200, 11), true);
        }
    }

    #[test]
    fn karatsuba_matches_oracle_at_recursive_widths() {
        for n in [7, 9, 12] {
            let c = build_karatsuba(n, cfg(Method::Karatsuba)).unwrap();
            assert_verified(&c, TestVectorPlan::random(200, 12), true);
        }
    }

    #[test]
    fn two_inf_point_set_matches_oracle() {
        let base = MultiplierConfig {
            eval_point_set: EvalPointSet::ZeroOneTwoInf,
            ..cfg(Method::Toom25)
        };
        for n in [7, 8, 11] {
            for uncompute in [true, false] {
                let c = build_toom25(n, MultiplierConfig { uncompute, ..base }).unwrap();
                assert_verified(&c, TestVectorPlan::random(200, 21), uncompute);
            }
        }
        // The sign-free point widths only shrink from 7 bits up; the
        // planner must refuse to expose a root level below that.
        assert!(matches!(
            build_toom25_with_terms(6, base),
            Err(MultiplierError::NoToomLevel { n: 6, threshold: 4 })
        ));
    }

    #[test]
    fn deep_recursion_at_threshold_one_stays_correct() {
        let t1 = MultiplierConfig { base_threshold: 1, ..cfg(Method::Toom25) };
        let c = build_toom25(5, t1).unwrap();
        assert_verified(&c, TestVectorPlan::Exhaustive, true);
        let c = build_toom25(8, t1).unwrap();
        assert_verified(&c, TestVectorPlan::random(200, 5), true);
        let k1 = MultiplierConfig { base_threshold: 1, ..cfg(Method::Karatsuba) };
        let c = build_karatsuba(8, k1).unwrap();
        assert_verified(&c, TestVectorPlan::random(200, 6), true);
    }

    #[test]
    fn plans_terminate_for_every_small_shape() {
        for threshold in [1, 2, 4, 7] {
            for method in [Method::Toom25, Method::Karatsuba, Method::Naive] {
                for points in [EvalPointSet::ZeroOneMinusOneInf, EvalPointSet::ZeroOneTwoInf] {
                    let c = MultiplierConfig {
                        method,
                        base_threshold: threshold,
                        eval_point_set: points,
                        uncompute: true,
                    };
                    for n in 1..=60 {
                        // Termination is the assertion: planning is the
                        // same recursion the emitter follows.
                        let _ = plan_node(n, n, &c);
                    }
                }
            }
        }
    }

    #[test]
    fn uncompute_off_leaves_garbage_but_correct_products() {
        let c = build_toom25(
            6,
            MultiplierConfig { uncompute: false, ..cfg(Method::Toom25) },
        )
        .unwrap();
        assert_verified(&c, TestVectorPlan::random(100, 9), false);
        // Garbage is really present: some wire beyond the named
        // registers ends nonzero.
        let mut state = BasisState::zero(c.width);
        state.load_register(c.register("x").unwrap(), &big(63));
        state.load_register(c.register("y").unwrap(), &big(61));
        simulate(&c, &mut state).unwrap();
        assert_eq!(state.read_register(c.register("product").unwrap()), big(63 * 61));
        assert!((24..c.width).any(|w| state.get(w)), "expected live garbage");
    }

    #[test]
    fn root_base_case_is_garbage_free_under_both_settings() {
        for uncompute in [true, false] {
            let c = build_toom25(
                4,
                MultiplierConfig { uncompute, ..cfg(Method::Toom25) },
            )
            .unwrap();
            let r = c.count_resources();
            assert_eq!(r.toffoli_count, cnt_naive(4, 4).ccx);
            assert_eq!(c.width, 17);
            assert_verified(&c, TestVectorPlan::Exhaustive, true);
        }
    }

    #[test]
    fn width_one_multiplier_is_a_single_toffoli() {
        for method in [Method::Toom25, Method::Karatsuba, Method::Naive] {
            for uncompute in [true, false] {
                let c = build_multiplier(
                    1,
                    MultiplierConfig { uncompute, ..cfg(method) },
                )
                .unwrap();
                assert_eq!(c.gates.len(), 1);
                assert!(matches!(c.gates[0], Gate::Toffoli { .. }));
                assert_eq!(c.width, 4);
                assert_verified(&c, TestVectorPlan::Exhaustive, true);
            }
        }
    }

    #[test]
    fn naive_qubit_and_gate_counts_are_exact() {
        for n in 1..=10u64 {
            let c = build_naive(n as usize, cfg(Method::Naive)).unwrap();
            let r = c.count_resources();
            let want = cnt_naive(n as usize, n as usize);
            assert_eq!(r.toffoli_count, want.ccx, "n={n}");
            assert_eq!(r.cnot_count, want.cnot, "n={n}");
            assert_eq!(r.not_count, 0, "n={n}");
            let qubits = if n >= 2 { 4 * n + 1 } else { 4 };
            assert_eq!(u64::from(c.width), qubits, "n={n}");
        }
    }

    #[test]
    fn recursion_shape_spreads_into_sixteen_grandchildren() {
        let c = cfg(Method::Toom25);
        // Child pairs are (s, t) with t the 3-split side, so the
        // wider operand of each point product lands in t.
        for (n, want_children) in [
            (36, [(15, 15), (17, 22), (16, 21), (6, 21)]),
            (216, [(87, 87), (89, 130), (88, 129), (42, 129)]),
        ] {
            let PlanNode::Toom(plan) = plan_node(n, n, &c) else {
                panic!("width {n} must recurse");
            };
            let widths: Vec<(usize, usize)> =
                plan.children.iter().map(PlanNode::operand_widths).collect();
            assert_eq!(widths, want_children, "n={n}");
            let grandchildren: usize = plan
                .children
                .iter()
                .map(|child| match child {
                    PlanNode::Toom(t) => t.children.len(),
                    PlanNode::Kar(k) => k.children.len(),
                    PlanNode::Base { .. } => 0,
                })
                .sum();
            assert_eq!(grandchildren, 16, "n={n}");
        }
    }

    #[test]
    fn parity_obligations_hold_under_random_sweep() {
        let c = build_toom25(6, cfg(Method::Toom25)).unwrap();
        let rep = check_parity_sites(&c, TestVectorPlan::random(500, 42)).unwrap();
        assert!(rep.passed(), "{}", rep.verdict());
        assert!(rep.sites > 0, "halving sites must be recorded");
        assert_eq!(rep.cases, 500);
    }

    #[test]
    fn product_terms_expose_the_root_interpolation() {
        let (c, terms) = build_toom25_with_terms(6, cfg(Method::Toom25)).unwrap();
        assert_eq!(terms.radix, 2);
        assert_eq!(terms.a.wires, terms.s.wires);
        assert_eq!(terms.d.wires, terms.p.wires);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..300 {
            let x: u64 = rng.gen_range(0..64);
            let y: u64 = rng.gen_range(0..64);
            let mut state = BasisState::zero(c.width);
            state.load_register(c.register("x").unwrap(), &big(x.into()));
            state.load_register(c.register("y").unwrap(), &big(y.into()));
            simulate(&c, &mut state).unwrap();
            let rd = |r: &Register| {
                let v = state.read_register(r);
                let mut out = 0u64;
                for (k, byte) in v.to_bytes_le().into_iter().enumerate() {
                    out |= u64::from(byte) << (8 * k);
                }
                out
            };
            let (x0, x1) = (x & 3, x >> 2);
            let (y0, y1, y2) = (y & 3, (y >> 2) & 3, y >> 4);
            assert_eq!(rd(&terms.p), x0 * y0);
            assert_eq!(rd(&terms.s), x1 * y2);
            assert_eq!(rd(&terms.b), x0 * y2 + x1 * y1);
            assert_eq!(rd(&terms.c), x0 * y1 + x1 * y0);
            // The in-place halving leaves Q's register holding 2C.
            assert_eq!(rd(&terms.q), 2 * (x0 * y1 + x1 * y0));
            let dx = x0 as i64 - x1 as i64;
            let dy = y0 as i64 - y1 as i64 + y2 as i64;
            let sx = rd(&terms.sign_x.clone().unwrap()) == 1;
            let sy = rd(&terms.sign_y.clone().unwrap()) == 1;
            let sr = rd(&terms.sign_r.clone().unwrap()) == 1;
            assert_eq!(sx, dx < 0, "x={x} y={y}");
            assert_eq!(sy, dy < 0, "x={x} y={y}");
            assert_eq!(sr, sx ^ sy);
            let r_mag = rd(&terms.r) as i64;
            let r_signed = if sr { -r_mag } else { r_mag };
            assert_eq!(r_signed, dx * dy, "x={x} y={y}");
            // Reconstruct the 1-point product from the interpolated
            // coefficients: Q = 2(C + S) + R.
            let c_v = rd(&terms.c) as i64;
            let s_v = rd(&terms.s) as i64;
            let q_v = (x0 + x1) as i64 * (y0 + y1 + y2) as i64;
            assert_eq!(q_v, 2 * (c_v + s_v) + r_signed, "x={x} y={y}");
        }
    }

    #[test]
    fn product_terms_for_the_sign_free_point_set() {
        let two_inf = MultiplierConfig {
            eval_point_set: EvalPointSet::ZeroOneTwoInf,
            ..cfg(Method::Toom25)
        };
        let (c, terms) = build_toom25_with_terms(8, two_inf).unwrap();
        assert_eq!(terms.radix, 3);
        assert!(terms.sign_x.is_none() && terms.sign_y.is_none() && terms.sign_r.is_none());
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..300 {
            let x: u64 = rng.gen_range(0..256);
            let y: u64 = rng.gen_range(0..256);
            let mut state = BasisState::zero(c.width);
            state.load_register(c.register("x").unwrap(), &big(x.into()));
            state.load_register(c.register("y").unwrap(), &big(y.into()));
            simulate(&c, &mut state).unwrap();
            let rd = |r: &Register| {
                let mut out = 0u64;
                for (k, byte) in state.read_register(r).to_bytes_le().into_iter().enumerate() {
                    out |= u64::from(byte) << (8 * k);
                }
                out
            };
            let (x0, x1) = (x & 7, x >> 3);
            let (y0, y1, y2) = (y & 7, (y >> 3) & 7, y >> 6);
            let b_v = x0 * y2 + x1 * y1;
            let c_v = x0 * y1 + x1 * y0;
            assert_eq!(rd(&terms.p), x0 * y0);
            assert_eq!(rd(&terms.s), x1 * y2);
            assert_eq!(rd(&terms.b), b_v);
            assert_eq!(rd(&terms.c), c_v);
            // Interpolation rewrote R2 into 2B and Q into C in place.
            assert_eq!(rd(&terms.r), 2 * b_v);
            assert_eq!(rd(&terms.q), c_v);
        }
    }

    #[test]
    fn signed_sub_multiply_matches_the_signed_oracle() {
        let c = build_signed_sub_multiply(4, 4, cfg(Method::Toom25)).unwrap();
        let product = c.register("product").unwrap();
        assert_eq!(product.interpretation, Interpretation::TwosComplement);
        assert_eq!(product.width(), 9);
        let named: Vec<u32> = c
            .registers
            .iter()
            .flat_map(|r| r.wires.iter().copied())
            .collect();
        for x0 in 0..16u64 {
            for x1 in 0..16u64 {
                for m in 0..16u64 {
                    for sy in 0..2u64 {
                        let mut state = BasisState::zero(c.width);
                        state.load_register(c.register("x0").unwrap(), &big(x0.into()));
                        state.load_register(c.register("x1").unwrap(), &big(x1.into()));
                        state.load_register(c.register("m").unwrap(), &big(m.into()));
                        state.load_register(c.register("sy").unwrap(), &big(sy.into()));
                        simulate(&c, &mut state).unwrap();
                        let got_raw = state.read_register(product);
                        let mut got = 0i64;
                        for (k, byte) in got_raw.to_bytes_le().into_iter().enumerate() {
                            got |= i64::from(byte) << (8 * k);
                        }
                        if got >= 256 {
                            got -= 512;
                        }
                        let want =
                            (x0 as i64 - x1 as i64) * (if sy == 1 { -(m as i64) } else { m as i64 });
                        assert_eq!(got, want, "x0={x0} x1={x1} m={m} sy={sy}");
                        // Inputs preserved, every helper wire clean.
                        assert_eq!(state.read_register(c.register("x0").unwrap()), big(x0.into()));
                        assert_eq!(state.read_register(c.register("x1").unwrap()), big(x1.into()));
                        assert_eq!(state.read_register(c.register("m").unwrap()), big(m.into()));
                        assert_eq!(state.read_register(c.register("sy").unwrap()), big(sy.into()));
                        for w in 0..c.width {
                            if !named.contains(&w) {
                                assert!(!state.get(w), "dirty wire {w}");
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn signed_sub_multiply_spot_examples() {
        let c = build_signed_sub_multiply(4, 4, cfg(Method::Toom25)).unwrap();
        let run = |x0: u64, x1: u64, m: u64, sy: u64| -> u64 {
            let mut state = BasisState::zero(c.width);
            state.load_register(c.register("x0").unwrap(), &big(x0.into()));
            state.load_register(c.register("x1").unwrap(), &big(x1.into()));
            state.load_register(c.register("m").unwrap(), &big(m.into()));
            state.load_register(c.register("sy").unwrap(), &big(sy.into()));
            simulate(&c, &mut state).unwrap();
            let mut out = 0u64;
            for (k, byte) in
                state.read_register(c.register("product").unwrap()).to_bytes_le().into_iter().enumerate()
            {
                out |= u64::from(byte) << (8 * k);
            }
            out
        };
        assert_eq!(run(7, 7, 5, 0), 0);
        assert_eq!(run(5, 3, 2, 0), 4);
        // (3 - 5) * 2 = -4, read as 512 - 4 in 9-bit two's complement.
        assert_eq!(run(3, 5, 2, 0), 508);
    }

    #[test]
    fn decompose_splits_and_reassembles() {
        let d = decompose(6, 2);
        assert_eq!((d.i, d.limb_width(0), d.limb_width(1)), (3, 3, 3));
        let d = decompose(6, 3);
        assert_eq!(d.i, 2);
        let d = decompose(7, 3);
        assert_eq!(
            (d.limb_width(0), d.limb_width(1), d.limb_width(2)),
            (3, 3, 1)
        );
        let d = decompose(1, 3);
        assert_eq!(
            (d.limb_width(0), d.limb_width(1), d.limb_width(2)),
            (1, 0, 0)
        );
        let v = big(0b1011011);
        let limbs = decompose(7, 3).limb_values(&v);
        assert_eq!(limbs, vec![big(0b011), big(0b011), big(0b1)]);
        assert_eq!(decompose(7, 3).reassemble(&limbs), v);
    }

    #[test]
    fn every_builder_validates_and_uses_only_the_gate_family() {
        for (method, n) in [
            (Method::Toom25, 7),
            (Method::Karatsuba, 7),
            (Method::Naive, 5),
        ] {
            let c = build_multiplier(n, cfg(method)).unwrap();
            c.validate().unwrap();
            assert!(!c.gates.is_empty());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn recursive_methods_agree_with_the_integer_oracle(
            n in 5usize..=20,
            threshold in prop_oneof![Just(1usize), Just(4usize)],
            seed in 0u64..1u64 << 48,
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x = rng.gen_range(0u128..1 << n);
            let y = rng.gen_range(0u128..1 << n);
            for method in [Method::Toom25, Method::Karatsuba] {
                let c = build_multiplier(
                    n,
                    MultiplierConfig { base_threshold: threshold, ..cfg(method) },
                )
                .unwrap();
                let mut state = BasisState::zero(c.width);
                state.load_register(c.register("x").unwrap(), &big(x));
                state.load_register(c.register("y").unwrap(), &big(y));
                simulate(&c, &mut state).unwrap();
                prop_assert_eq!(
                    state.read_register(c.register("product").unwrap()),
                    big(x * y)
                );
            }
        }

        #[test]
        fn limb_values_round_trip(
            n in 1usize..=64,
            parts in 2usize..=3,
            seed in 0u64..1 << 32,
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let v = big(rng.gen_range(0u128..1 << n));
            let d = decompose(n, parts);
            let limbs = d.limb_values(&v);
            prop_assert_eq!(limbs.len(), parts);
            prop_assert_eq!(d.reassemble(&limbs), v);
        }
    }
}
