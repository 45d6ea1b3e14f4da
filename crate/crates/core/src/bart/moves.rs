//! Reversible tree proposals: grow, prune, change and swap.
//!
//! Each proposal reports the log Hastings correction (reverse over forward
//! proposal density) and the log prior ratio, which covers both the tree shape
//! and the uniform choice of split rules. Grow and change only draw cuts that
//! leave both children of a non-empty node with at least one training point.

use rand::seq::IndexedRandom;
use rand::Rng;

use super::tree::{log_tree_prior, CutpointGrid, RankedPoints, RegressionTree, SplitRule};
use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TreeMove {
    Grow,
    Prune,
    Change,
    Swap,
}

impl TreeMove {
    pub const ALL: [TreeMove; 4] = [TreeMove::Grow, TreeMove::Prune, TreeMove::Change, TreeMove::Swap];
}

/// Mixture weights over the four move types.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoveProbs {
    pub grow: f64,
    pub prune: f64,
    pub change: f64,
    pub swap: f64,
}

impl Default for MoveProbs {
    fn default() -> Self {
        Self {
            grow: 0.25,
            prune: 0.25,
            change: 0.40,
            swap: 0.10,
        }
    }
}

impl MoveProbs {
    pub fn validate(&self) -> Result<()> {
        let all = [self.grow, self.prune, self.change, self.swap];
        if all.iter().any(|p| !(p.is_finite() && *p >= 0.0)) || (all.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(invalid("move probabilities must be non-negative and sum to 1"));
        }
        Ok(())
    }

    pub fn weight(&self, mv: TreeMove) -> f64 {
        match mv {
            TreeMove::Grow => self.grow,
            TreeMove::Prune => self.prune,
            TreeMove::Change => self.change,
            TreeMove::Swap => self.swap,
        }
    }

    /// Probability of picking `mv` on `tree` once illegal moves are excluded
    /// and the remaining weights renormalized.
    pub fn effective(&self, mv: TreeMove, tree: &RegressionTree) -> f64 {
        if !is_legal(mv, tree) {
            return 0.0;
        }
        let total: f64 = TreeMove::ALL
            .iter()
            .filter(|m| is_legal(**m, tree))
            .map(|m| self.weight(*m))
            .sum();
        if total > 0.0 {
            self.weight(mv) / total
        } else {
            0.0
        }
    }

    /// Draws a legal move, or `None` when every legal move has zero weight.
    pub fn pick<R: Rng + ?Sized>(&self, tree: &RegressionTree, rng: &mut R) -> Option<TreeMove> {
        let usable = |m: &TreeMove| is_legal(*m, tree) && self.weight(*m) > 0.0;
        let total: f64 = TreeMove::ALL
            .iter()
            .filter(|m| usable(m))
            .map(|m| self.weight(*m))
            .sum();
        if total <= 0.0 {
            return None;
        }
        let mut u = rng.random::<f64>() * total;
        let mut last = None;
        for m in TreeMove::ALL.iter().filter(|m| usable(m)) {
            u -= self.weight(*m);
            last = Some(*m);
            if u < 0.0 {
                break;
            }
        }
        last
    }
}

pub fn is_legal(mv: TreeMove, tree: &RegressionTree) -> bool {
    match mv {
        TreeMove::Grow => true,
        TreeMove::Prune | TreeMove::Change => tree.nodes().len() > 1,
        TreeMove::Swap => tree.has_swappable_pair(),
    }
}

/// Everything a proposal needs besides the tree itself.
#[derive(Debug, Clone, Copy)]
pub struct MoveContext<'a> {
    pub grid: &'a CutpointGrid,
    pub points: &'a RankedPoints,
    pub probs: MoveProbs,
    pub alpha: f64,
    pub beta: f64,
}

#[derive(Debug, Clone)]
pub struct Proposal {
    pub tree: RegressionTree,
    pub kind: TreeMove,
    pub log_proposal_ratio: f64,
    pub log_prior_ratio: f64,
}

/// Why a proposal could not be made.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoMove {
    /// The move type does not apply to this tree.
    Illegal,
    /// The chosen node admits no valid rule; the chain stays put.
    NoValidRule,
}

/// Cuts on one axis that split the node's points into two non-empty sides.
fn valid_cut_range(range: (u32, u32), min_rank: u32, max_rank: u32, occupied: bool) -> (u32, u32) {
    if occupied {
        (range.0.max(min_rank), range.1.min(max_rank))
    } else {
        range
    }
}

/// Per-axis valid cut ranges for the points currently routed through `node`.
fn valid_ranges(
    tree: &RegressionTree,
    node: usize,
    ctx: &MoveContext<'_>,
    assignment: &[usize],
    ranges: &[(u32, u32)],
) -> Vec<(u32, u32)> {
    let d = ctx.grid.d();
    let mut min_rank = vec![u32::MAX; d];
    let mut max_rank = vec![0u32; d];
    let mut occupied = false;
    for (i, &leaf) in assignment.iter().enumerate() {
        if tree.is_under(leaf, node) {
            occupied = true;
            for a in 0..d {
                let r = ctx.points.rank(i, a);
                min_rank[a] = min_rank[a].min(r);
                max_rank[a] = max_rank[a].max(r);
            }
        }
    }
    (0..d)
        .map(|a| valid_cut_range(ranges[node * d + a], min_rank[a], max_rank[a], occupied))
        .collect()
}

fn width(r: (u32, u32)) -> u32 {
    r.1.saturating_sub(r.0)
}

fn draw_rule<R: Rng + ?Sized>(valid: &[(u32, u32)], rng: &mut R) -> Option<(SplitRule, usize, u32)> {
    let open: Vec<usize> = (0..valid.len()).filter(|&a| width(valid[a]) > 0).collect();
    let &axis = open.choose(rng)?;
    let (lo, hi) = valid[axis];
    let cut = rng.random_range(lo..hi);
    Some((SplitRule { axis, cut }, open.len(), hi - lo))
}

fn full_log_prior(tree: &RegressionTree, ctx: &MoveContext<'_>) -> Option<f64> {
    Some(log_tree_prior(tree, ctx.alpha, ctx.beta) + tree.log_rule_prior(ctx.grid)?)
}

/// Proposes `mv` on `tree`. `assignment` holds the current leaf of every
/// training point in `ctx.points`.
pub fn propose_tree_move<R: Rng + ?Sized>(
    tree: &RegressionTree,
    mv: TreeMove,
    ctx: &MoveContext<'_>,
    assignment: &[usize],
    rng: &mut R,
) -> std::result::Result<Proposal, NoMove> {
    if !is_legal(mv, tree) {
        return Err(NoMove::Illegal);
    }
    let ranges = tree.cut_ranges(ctx.grid);
    let current_prior = full_log_prior(tree, ctx).expect("current tree is satisfiable");
    let (new_tree, log_q) = match mv {
        TreeMove::Grow => {
            let leaves: Vec<usize> = tree.leaves().collect();
            let &leaf = leaves.choose(rng).unwrap();
            let valid = valid_ranges(tree, leaf, ctx, assignment, &ranges);
            let (rule, n_axes, n_cuts) = draw_rule(&valid, rng).ok_or(NoMove::NoValidRule)?;
            let mut t = tree.clone();
            t.split_leaf(leaf, rule, 0.0, 0.0);
            let forward = ctx.probs.effective(TreeMove::Grow, tree).ln()
                - (leaves.len() as f64).ln()
                - (n_axes as f64).ln()
                - (n_cuts as f64).ln();
            let reverse = ctx.probs.effective(TreeMove::Prune, &t).ln() - (t.prunable_nodes().len() as f64).ln();
            (t, reverse - forward)
        }
        TreeMove::Prune => {
            let prunable = tree.prunable_nodes();
            let &node = prunable.choose(rng).unwrap();
            let rule = tree.rule(node).unwrap();
            let valid = valid_ranges(tree, node, ctx, assignment, &ranges);
            let n_axes = valid.iter().filter(|r| width(**r) > 0).count();
            let n_cuts = width(valid[rule.axis]);
            let mut t = tree.clone();
            t.collapse(node, 0.0);
            let forward = ctx.probs.effective(TreeMove::Prune, tree).ln() - (prunable.len() as f64).ln();
            let reverse = ctx.probs.effective(TreeMove::Grow, &t).ln()
                - (t.n_leaves() as f64).ln()
                - (n_axes as f64).ln()
                - (n_cuts as f64).ln();
            (t, reverse - forward)
        }
        TreeMove::Change => {
            let internal: Vec<usize> = tree.internal_nodes().collect();
            let &node = internal.choose(rng).unwrap();
            let old = tree.rule(node).unwrap();
            let valid = valid_ranges(tree, node, ctx, assignment, &ranges);
            let (rule, _, n_new) = draw_rule(&valid, rng).ok_or(NoMove::NoValidRule)?;
            let n_old = width(valid[old.axis]);
            let mut t = tree.clone();
            t.set_rule(node, rule);
            (t, (n_new as f64).ln() - (n_old as f64).ln())
        }
        TreeMove::Swap => {
            let pairs = tree.swappable_pairs();
            let &(parent, child) = pairs.choose(rng).unwrap();
            let (rp, rc) = (tree.rule(parent).unwrap(), tree.rule(child).unwrap());
            let mut t = tree.clone();
            t.set_rule(parent, rc);
            t.set_rule(child, rp);
            (t, 0.0)
        }
    };
    let new_prior = full_log_prior(&new_tree, ctx).unwrap_or(f64::NEG_INFINITY);
    Ok(Proposal {
        tree: new_tree,
        kind: mv,
        log_proposal_ratio: log_q,
        log_prior_ratio: new_prior - current_prior,
    })
}
