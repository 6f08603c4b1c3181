//! Reversible-pebble-game scheduling over the Toom recursion tree.
//!
//! Two Toom levels collapse into one tree level: a node of width w
//! has 16 grandchildren of width about w/6, so the space analysis
//! runs on a 16-ary tree whose level-x node size is the ceil-division
//! chain n, n/6, n/36, ... down to 1.
//!
//! A schedule is parameterized by the cut parameter k (cut level
//! c = N - k). Below the cut, a subtree is computed with every
//! intermediate pebbled, its root value is copied to persistent
//! wires, and the whole subtree is uncomputed before the next
//! sibling starts; above the cut, nodes stay pebbled until the
//! global uncompute pass that mirrors the forward schedule around
//! the root's copy-out. Raising k trades recomputation depth for
//! peak width.
//!
//! Replaying a schedule against the flag/free-list model checks
//! validity (nothing consumed before it exists, nothing uncomputed
//! while still referenced, no double pebbles) and reproduces the
//! reported peak: once with idealized node weights (the level
//! sizes), once with the wire footprint the multipliers module
//! actually allocates per node width.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::costmodel::{node_footprint, CostFormulaSet, CostModel};
use crate::multipliers::MultiplierConfig;

/// The collapsed 16-ary recursion tree for an n-bit multiplication.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecursionTree {
    pub n: usize,
    /// Node size per level, levels[0] = n down to levels[N] = 1.
    pub levels: Vec<usize>,
}

impl RecursionTree {
    pub fn new(n: usize) -> RecursionTree {
        assert!(n >= 1, "tree width must be at least 1");
        let mut levels = vec![n];
        while *levels.last().unwrap() > 1 {
            let prev = *levels.last().unwrap();
            levels.push(prev.div_ceil(6));
        }
        RecursionTree { n, levels }
    }

    /// Tree height N = ceil(log6 n); a single node has height 0.
    pub fn height(&self) -> usize {
        self.levels.len() - 1
    }

    /// Width of one node at the given level.
    pub fn node_size(&self, level: usize) -> usize {
        self.levels[level]
    }

    /// Number of nodes at the given level: 16^level.
    pub fn nodes_at(&self, level: usize) -> u64 {
        1u64 << (4 * level)
    }

    /// Total width held by a fully pebbled level.
    pub fn aggregate_size(&self, level: usize) -> u64 {
        self.nodes_at(level) * self.levels[level] as u64
    }
}

/// Tree address: child indices from the root, displayed as a dotted
/// path rooted at `r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NodeId(pub Vec<u8>);

impl NodeId {
    pub fn root() -> NodeId {
        NodeId(Vec::new())
    }

    pub fn child(&self, j: u8) -> NodeId {
        let mut p = self.0.clone();
        p.push(j);
        NodeId(p)
    }

    pub fn level(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r")?;
        for j in &self.0 {
            write!(f, ".{j}")?;
        }
        Ok(())
    }
}

/// One pebble-game move.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PebbleAction {
    Compute(NodeId),
    CopyOut(NodeId),
    Uncompute(NodeId),
}

impl fmt::Display for PebbleAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PebbleAction::Compute(id) => write!(f, "COMPUTE {id}"),
            PebbleAction::CopyOut(id) => write!(f, "COPY {id}"),
            PebbleAction::Uncompute(id) => write!(f, "UNCOMPUTE {id}"),
        }
    }
}

/// Scheduler failures.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum PebbleError {
    #[error("cut parameter k={k} exceeds tree height {height}")]
    KOutOfRange { k: usize, height: usize },
    #[error("invalid schedule at step {step} ({action}): {reason}")]
    InvalidAction { step: usize, action: String, reason: &'static str },
}

/// A complete schedule with its accounted costs.
#[derive(Debug, Clone)]
pub struct PebbleSchedule {
    pub n: usize,
    pub k: usize,
    /// Cut level c = N - k (nodes at this level copy-and-uncompute).
    pub cut_level: usize,
    pub actions: Vec<PebbleAction>,
    /// Peak live width under idealized node weights (level sizes).
    pub peak_space: u64,
    /// Peak live width under measured per-node wire footprints.
    pub measured_peak_space: u64,
    /// Sequential-depth units ST_k * D_k: 16^c subtree executions,
    /// each worth the cut-level node size.
    pub total_depth_units: u64,
}

impl PebbleSchedule {
    /// Audit export, one action per line.
    pub fn export_lines(&self) -> Vec<String> {
        self.actions.iter().map(|a| a.to_string()).collect()
    }
}

/// Cut parameter from the published bound k <= N / (2 - log16 6),
/// floored and clamped to the valid range.
pub fn optimal_cut_level(height: usize) -> usize {
    let denom = 2.0 - 6f64.ln() / 16f64.ln();
    ((height as f64 / denom).floor() as usize).min(height)
}

/// Full-pebble peak of the whole tree: every node at every level
/// live at once, leaves included (a single node occupies one unit).
pub fn space_unoptimized(n: usize) -> u64 {
    let tree = RecursionTree::new(n);
    (0..=tree.height()).map(|x| tree.aggregate_size(x)).sum()
}

/// The published closed-form width model for the optimized schedule
/// family, n * (8/3)^{log6 n / (2 - log16 6)}; the asymptotic slope
/// of the real-valued-cut analysis.
pub fn space_optimized_model(n: usize) -> f64 {
    CostFormulaSet::new(CostModel::Toom25).qubits(n as u64)
}

/// Sequential depth units of the k-cut schedule: 16^c sequentially
/// executed cut subtrees times the cut-level node size.
pub fn depth_under_schedule(tree: &RecursionTree, k: usize) -> Result<u64, PebbleError> {
    let height = tree.height();
    if k > height {
        return Err(PebbleError::KOutOfRange { k, height });
    }
    let c = height - k;
    Ok((1u64 << (4 * c)) * tree.node_size(c) as u64)
}

/// Append postorder Compute actions for the whole subtree under
/// (and including) `v`.
fn subtree_computes(out: &mut Vec<PebbleAction>, v: &NodeId, height: usize) {
    if v.level() < height {
        for j in 0..16 {
            subtree_computes(out, &v.child(j), height);
        }
    }
    out.push(PebbleAction::Compute(v.clone()));
}

/// Cut-node block: pebble the whole subtree, move the node's value
/// to persistent wires, then unwind every descendant.
fn cut_block(out: &mut Vec<PebbleAction>, v: &NodeId, height: usize) {
    let mut desc = Vec::new();
    if v.level() < height {
        for j in 0..16 {
            subtree_computes(&mut desc, &v.child(j), height);
        }
    }
    out.extend(desc.iter().cloned());
    out.push(PebbleAction::Compute(v.clone()));
    out.push(PebbleAction::CopyOut(v.clone()));
    out.extend(desc.iter().rev().map(|a| match a {
        PebbleAction::Compute(id) => PebbleAction::Uncompute(id.clone()),
        other => other.clone(),
    }));
}

/// Above-cut node: schedule all children (recursing or cutting),
/// then pebble the node itself and keep it.
fn above_cut(out: &mut Vec<PebbleAction>, v: &NodeId, cut: usize, height: usize) {
    for j in 0..16 {
        let child = v.child(j);
        if child.level() < cut {
            above_cut(out, &child, cut, height);
        } else {
            cut_block(out, &child, height);
        }
    }
    out.push(PebbleAction::Compute(v.clone()));
}

fn mirror(actions: &[PebbleAction]) -> impl Iterator<Item = PebbleAction> + '_ {
    actions.iter().rev().map(|a| match a {
        PebbleAction::Compute(id) => PebbleAction::Uncompute(id.clone()),
        PebbleAction::Uncompute(id) => PebbleAction::Compute(id.clone()),
        PebbleAction::CopyOut(id) => PebbleAction::CopyOut(id.clone()),
    })
}

/// Replay outcome: allocator high-water mark and what stayed live.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReplayOutcome {
    pub peak_space: u64,
    pub final_live: u64,
}

/// Replay a schedule against the flag model, enforcing validity.
///
/// `weights[x]` prices a level-x node, both for its pebble and for
/// its copied-out value (the idealized model does not separate the
/// two). The root's own copy-out is the product register and is
/// priced at zero.
pub fn replay_schedule(
    tree: &RecursionTree,
    actions: &[PebbleAction],
    weights: &[u64],
) -> Result<ReplayOutcome, PebbleError> {
    assert_eq!(weights.len(), tree.height() + 1, "one weight per level");
    // Per node: (pebbled, copied).
    let mut flags: HashMap<NodeId, (bool, bool)> = HashMap::new();
    let mut live = 0u64;
    let mut peak = 0u64;
    let height = tree.height();
    let fail = |step: usize, action: &PebbleAction, reason: &'static str| PebbleError::InvalidAction {
        step,
        action: action.to_string(),
        reason,
    };
    for (step, action) in actions.iter().enumerate() {
        let id = match action {
            PebbleAction::Compute(id) | PebbleAction::CopyOut(id) | PebbleAction::Uncompute(id) => id,
        };
        if id.level() > height {
            return Err(fail(step, action, "node below the leaf level"));
        }
        let (pebbled, copied) = flags.get(id).copied().unwrap_or((false, false));
        let children_present = id.level() == height
            || (0..16).all(|j| {
                let (p, c) = flags.get(&id.child(j)).copied().unwrap_or((false, false));
                p || c
            });
        match action {
            PebbleAction::Compute(_) => {
                if pebbled || copied {
                    return Err(fail(step, action, "node already live"));
                }
                if !children_present {
                    return Err(fail(step, action, "child value missing"));
                }
                flags.insert(id.clone(), (true, false));
                live += weights[id.level()];
                peak = peak.max(live);
            }
            PebbleAction::Uncompute(_) => {
                if !pebbled {
                    return Err(fail(step, action, "node not pebbled"));
                }
                if copied {
                    return Err(fail(step, action, "node both pebbled and copied"));
                }
                if !children_present {
                    return Err(fail(step, action, "child value missing"));
                }
                flags.insert(id.clone(), (false, false));
                live -= weights[id.level()];
            }
            PebbleAction::CopyOut(_) => {
                if id.level() == 0 {
                    // Root copy-out targets the product register.
                    if !pebbled {
                        return Err(fail(step, action, "root not pebbled"));
                    }
                } else {
                    if pebbled == copied {
                        return Err(fail(step, action, "copy needs exactly one live form"));
                    }
                    flags.insert(id.clone(), (copied, pebbled));
                }
            }
        }
    }
    Ok(ReplayOutcome { peak_space: peak, final_live: live })
}

/// Build and cost the k-cut schedule for the tree.
pub fn make_schedule(tree: &RecursionTree, k: usize) -> Result<PebbleSchedule, PebbleError> {
    let height = tree.height();
    if k > height {
        return Err(PebbleError::KOutOfRange { k, height });
    }
    let cut = height - k;
    let root = NodeId::root();
    let mut actions = Vec::new();
    if height == 0 {
        actions.push(PebbleAction::Compute(root.clone()));
        actions.push(PebbleAction::CopyOut(root));
    } else {
        let mut fwd = Vec::new();
        if cut == 0 {
            subtree_computes(&mut fwd, &root, height);
        } else {
            above_cut(&mut fwd, &root, cut, height);
        }
        actions.extend(fwd.iter().cloned());
        actions.push(PebbleAction::CopyOut(root));
        actions.extend(mirror(&fwd));
    }

    let idealized: Vec<u64> = tree.levels.iter().map(|&s| s as u64).collect();
    let cfg = MultiplierConfig::default();
    let measured: Vec<u64> = tree.levels.iter().map(|&s| node_footprint(s, &cfg)).collect();
    let ideal = replay_schedule(tree, &actions, &idealized)?;
    let meas = replay_schedule(tree, &actions, &measured)?;
    // A well-formed schedule ends with only the product left: the
    // root's pebble survives exactly when it is itself the base node.
    let want_left = if height == 0 { idealized[0] } else { 0 };
    debug_assert_eq!(ideal.final_live, want_left);
    let total_depth_units = depth_under_schedule(tree, k)?;
    Ok(PebbleSchedule {
        n: tree.n,
        k,
        cut_level: cut,
        actions,
        peak_space: ideal.peak_space,
        measured_peak_space: meas.peak_space,
        total_depth_units,
    })
}
