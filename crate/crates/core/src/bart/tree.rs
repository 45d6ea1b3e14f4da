//! Regression trees over a fixed per-axis cutpoint grid.

use crate::design::DesignMatrix;
use crate::error::{invalid, Result};

/// Allowed split thresholds per axis, strictly increasing and inside `(0,1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CutpointGrid {
    cuts: Vec<Vec<f64>>,
}

impl CutpointGrid {
    /// `per_axis` equally spaced interior points `(c + 1) / (per_axis + 1)` on every axis.
    pub fn uniform(d: usize, per_axis: usize) -> Result<Self> {
        if d == 0 || per_axis == 0 {
            return Err(invalid("cutpoint grid needs d >= 1 and at least one cutpoint"));
        }
        let step = 1.0 / (per_axis + 1) as f64;
        let axis: Vec<f64> = (1..=per_axis).map(|c| c as f64 * step).collect();
        Ok(Self { cuts: vec![axis; d] })
    }

    pub fn from_axes(cuts: Vec<Vec<f64>>) -> Result<Self> {
        for axis in &cuts {
            if axis.is_empty()
                || axis.windows(2).any(|w| !(w[0] < w[1]))
                || axis.iter().any(|c| !(*c > 0.0 && *c < 1.0))
            {
                return Err(invalid("cutpoints must be strictly increasing inside (0,1)"));
            }
        }
        if cuts.is_empty() {
            return Err(invalid("cutpoint grid needs at least one axis"));
        }
        Ok(Self { cuts })
    }

    pub fn d(&self) -> usize {
        self.cuts.len()
    }

    pub fn n_cuts(&self, axis: usize) -> u32 {
        self.cuts[axis].len() as u32
    }

    pub fn value(&self, axis: usize, cut: u32) -> f64 {
        self.cuts[axis][cut as usize]
    }

    /// Number of cutpoints `<= x`. A point goes left at cut `c` iff `rank <= c`.
    pub fn rank(&self, axis: usize, x: f64) -> u32 {
        self.cuts[axis].partition_point(|&c| c <= x) as u32
    }
}

/// Grid ranks of a set of points, stored column-major for routing.
#[derive(Debug, Clone)]
pub struct RankedPoints {
    n: usize,
    d: usize,
    ranks: Vec<u32>,
}

impl RankedPoints {
    pub fn new(design: &DesignMatrix, grid: &CutpointGrid) -> Self {
        let (n, d) = (design.n(), grid.d());
        let mut ranks = vec![0; n * d];
        for (i, row) in design.rows().enumerate() {
            for axis in 0..d {
                ranks[axis * n + i] = grid.rank(axis, row[axis]);
            }
        }
        Self { n, d, ranks }
    }

    pub fn empty(d: usize) -> Self {
        Self {
            n: 0,
            d,
            ranks: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn rank(&self, i: usize, axis: usize) -> u32 {
        self.ranks[axis * self.n + i]
    }

    pub(crate) fn column(&self, axis: usize) -> &[u32] {
        &self.ranks[axis * self.n..(axis + 1) * self.n]
    }
}

/// `x[axis] < grid.value(axis, cut)` routes left.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitRule {
    pub axis: usize,
    pub cut: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub enum NodeKind {
    Leaf { value: f64 },
    Split { rule: SplitRule, left: usize, right: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TreeNode {
    pub parent: Option<usize>,
    pub depth: u32,
    pub kind: NodeKind,
}

/// Binary tree in an arena; node 0 is the root.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressionTree {
    nodes: Vec<TreeNode>,
}

/// Half-open range `[lo, hi)` of cut indices still available on one axis.
pub type CutRange = (u32, u32);

impl RegressionTree {
    pub fn stump(value: f64) -> Self {
        Self {
            nodes: vec![TreeNode {
                parent: None,
                depth: 0,
                kind: NodeKind::Leaf { value },
            }],
        }
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> &TreeNode {
        &self.nodes[id]
    }

    pub fn is_leaf(&self, id: usize) -> bool {
        matches!(self.nodes[id].kind, NodeKind::Leaf { .. })
    }

    pub fn rule(&self, id: usize) -> Option<SplitRule> {
        match self.nodes[id].kind {
            NodeKind::Split { rule, .. } => Some(rule),
            NodeKind::Leaf { .. } => None,
        }
    }

    pub fn children(&self, id: usize) -> Option<(usize, usize)> {
        match self.nodes[id].kind {
            NodeKind::Split { left, right, .. } => Some((left, right)),
            NodeKind::Leaf { .. } => None,
        }
    }

    pub fn leaf_value(&self, id: usize) -> Option<f64> {
        match self.nodes[id].kind {
            NodeKind::Leaf { value } => Some(value),
            NodeKind::Split { .. } => None,
        }
    }

    pub fn set_leaf_value(&mut self, id: usize, v: f64) {
        if let NodeKind::Leaf { value } = &mut self.nodes[id].kind {
            *value = v;
        }
    }

    pub fn leaves(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nodes.len()).filter(|&i| self.is_leaf(i))
    }

    pub fn internal_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nodes.len()).filter(|&i| !self.is_leaf(i))
    }

    pub fn n_leaves(&self) -> usize {
        self.leaves().count()
    }

    pub fn max_depth(&self) -> u32 {
        self.nodes.iter().map(|n| n.depth).max().unwrap_or(0)
    }

    /// Internal nodes whose two children are both leaves.
    pub fn prunable_nodes(&self) -> Vec<usize> {
        self.internal_nodes()
            .filter(|&i| {
                let (l, r) = self.children(i).unwrap();
                self.is_leaf(l) && self.is_leaf(r)
            })
            .collect()
    }

    /// True when some internal node has an internal child.
    pub fn has_swappable_pair(&self) -> bool {
        self.nodes
            .iter()
            .any(|n| n.parent.is_some_and(|p| !self.is_leaf(p)) && !matches!(n.kind, NodeKind::Leaf { .. }))
    }

    /// `(parent, child)` pairs where both are internal.
    pub fn swappable_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for p in self.internal_nodes() {
            let (l, r) = self.children(p).unwrap();
            for c in [l, r] {
                if !self.is_leaf(c) {
                    out.push((p, c));
                }
            }
        }
        out
    }

    /// Turns leaf `id` into a split with two fresh leaves; returns their ids.
    pub fn split_leaf(&mut self, id: usize, rule: SplitRule, left: f64, right: f64) -> (usize, usize) {
        assert!(self.is_leaf(id), "only leaves can be split");
        let depth = self.nodes[id].depth + 1;
        let l = self.nodes.len();
        let r = l + 1;
        for value in [left, right] {
            self.nodes.push(TreeNode {
                parent: Some(id),
                depth,
                kind: NodeKind::Leaf { value },
            });
        }
        self.nodes[id].kind = NodeKind::Split {
            rule,
            left: l,
            right: r,
        };
        (l, r)
    }

    /// Collapses split `id` (whose children must be leaves) into a leaf.
    /// Node ids are renumbered afterwards.
    pub fn collapse(&mut self, id: usize, value: f64) {
        let (l, r) = self.children(id).expect("collapse needs a split node");
        assert!(self.is_leaf(l) && self.is_leaf(r));
        self.nodes[id].kind = NodeKind::Leaf { value };
        self.compact();
    }

    pub fn set_rule(&mut self, id: usize, new_rule: SplitRule) {
        if let NodeKind::Split { rule, .. } = &mut self.nodes[id].kind {
            *rule = new_rule;
        }
    }

    /// Rebuilds the arena with only nodes reachable from the root, in DFS order.
    fn compact(&mut self) {
        let old = std::mem::take(&mut self.nodes);
        // (old id, (new parent id, is left child))
        let mut queue: Vec<(usize, Option<(usize, bool)>)> = vec![(0, None)];
        while let Some((oid, link)) = queue.pop() {
            let nid = self.nodes.len();
            let node = &old[oid];
            self.nodes.push(TreeNode {
                parent: link.map(|(p, _)| p),
                depth: node.depth,
                kind: node.kind.clone(),
            });
            if let Some((p, is_left)) = link {
                if let NodeKind::Split { left, right, .. } = &mut self.nodes[p].kind {
                    if is_left {
                        *left = nid;
                    } else {
                        *right = nid;
                    }
                }
            }
            if let NodeKind::Split { left, right, .. } = node.kind {
                queue.push((right, Some((nid, false))));
                queue.push((left, Some((nid, true))));
            }
        }
    }

    /// Terminal node reached by a point described through its grid ranks.
    #[inline]
    pub fn leaf_for(&self, rank: impl Fn(usize) -> u32) -> usize {
        let mut id = 0;
        loop {
            match self.nodes[id].kind {
                NodeKind::Leaf { .. } => return id,
                NodeKind::Split { rule, left, right } => {
                    id = if rank(rule.axis) <= rule.cut { left } else { right };
                }
            }
        }
    }

    /// Leaf id of every point in `points`, written into `out`.
    pub fn route(&self, points: &RankedPoints, out: &mut Vec<usize>) {
        out.clear();
        out.extend((0..points.n()).map(|i| self.leaf_for(|a| points.rank(i, a))));
    }

    /// Adds each point's leaf value into `acc`.
    pub(crate) fn accumulate(&self, points: &RankedPoints, acc: &mut [f64]) {
        if let NodeKind::Leaf { value } = self.nodes[0].kind {
            acc.iter_mut().for_each(|a| *a += value);
            return;
        }
        for (i, a) in acc.iter_mut().enumerate() {
            let leaf = self.leaf_for(|axis| points.column(axis)[i]);
            *a += self.leaf_value(leaf).unwrap();
        }
    }

    /// True when `node` lies in the subtree rooted at `ancestor`.
    pub fn is_under(&self, mut node: usize, ancestor: usize) -> bool {
        loop {
            if node == ancestor {
                return true;
            }
            match self.nodes[node].parent {
                Some(p) => node = p,
                None => return false,
            }
        }
    }

    /// Available cut range per node and axis, flattened as `node * d + axis`.
    pub fn cut_ranges(&self, grid: &CutpointGrid) -> Vec<CutRange> {
        let d = grid.d();
        let mut ranges = vec![(0, 0); self.nodes.len() * d];
        for (axis, r) in ranges.iter_mut().enumerate().take(d) {
            *r = (0, grid.n_cuts(axis));
        }
        let mut order: Vec<usize> = vec![0];
        let mut k = 0;
        while k < order.len() {
            let id = order[k];
            k += 1;
            if let NodeKind::Split { rule, left, right } = self.nodes[id].kind {
                for axis in 0..d {
                    let r = ranges[id * d + axis];
                    ranges[left * d + axis] = r;
                    ranges[right * d + axis] = r;
                }
                let (lo, hi) = ranges[id * d + rule.axis];
                ranges[left * d + rule.axis] = (lo, rule.cut.min(hi).max(lo));
                ranges[right * d + rule.axis] = ((rule.cut + 1).max(lo).min(hi), hi);
                order.push(left);
                order.push(right);
            }
        }
        ranges
    }

    /// Every split cut lies inside the range its ancestors leave open.
    pub fn is_satisfiable(&self, grid: &CutpointGrid) -> bool {
        let ranges = self.cut_ranges(grid);
        let d = grid.d();
        self.internal_nodes().all(|id| {
            let rule = self.rule(id).unwrap();
            let (lo, hi) = ranges[id * d + rule.axis];
            lo <= rule.cut && rule.cut < hi
        })
    }

    /// Log prior probability of the split rules: each internal node picks an
    /// axis uniformly among those with cuts left, then a cut uniformly.
    /// `None` when some rule is outside its available range.
    pub fn log_rule_prior(&self, grid: &CutpointGrid) -> Option<f64> {
        let ranges = self.cut_ranges(grid);
        let d = grid.d();
        let mut acc = 0.0;
        for id in self.internal_nodes() {
            let rule = self.rule(id).unwrap();
            let node_ranges = &ranges[id * d..(id + 1) * d];
            let (lo, hi) = node_ranges[rule.axis];
            if !(lo <= rule.cut && rule.cut < hi) {
                return None;
            }
            let open_axes = node_ranges.iter().filter(|(l, h)| h > l).count();
            acc -= (open_axes as f64).ln() + ((hi - lo) as f64).ln();
        }
        Some(acc)
    }
}

/// Value of the terminal node containing `x`.
pub fn tree_predict(tree: &RegressionTree, grid: &CutpointGrid, x: &[f64]) -> f64 {
    let mut id = 0;
    loop {
        match tree.nodes[id].kind {
            NodeKind::Leaf { value } => return value,
            NodeKind::Split { rule, left, right } => {
                id = if x[rule.axis] < grid.value(rule.axis, rule.cut) {
                    left
                } else {
                    right
                };
            }
        }
    }
}

/// Sum of the tree predictions at `x`.
pub fn ensemble_predict(trees: &[RegressionTree], grid: &CutpointGrid, x: &[f64]) -> f64 {
    trees.iter().map(|t| tree_predict(t, grid, x)).sum()
}

/// Split probability of a node at `depth`.
pub fn split_probability(alpha: f64, beta: f64, depth: u32) -> f64 {
    alpha * (1.0 + depth as f64).powf(-beta)
}

/// Log prior of the tree shape: internal nodes split with probability
/// `alpha (1 + depth)^-beta` and leaves decline to.
pub fn log_tree_prior(tree: &RegressionTree, alpha: f64, beta: f64) -> f64 {
    tree.nodes
        .iter()
        .map(|n| {
            let p = split_probability(alpha, beta, n.depth);
            match n.kind {
                NodeKind::Split { .. } => p.ln(),
                NodeKind::Leaf { .. } => (1.0 - p).ln(),
            }
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid2() -> CutpointGrid {
        CutpointGrid::from_axes(vec![vec![0.25, 0.5, 0.75], vec![0.25, 0.5, 0.75]]).unwrap()
    }

    const HALF: u32 = 1;

    #[test]
    fn stump_predicts_constant() {
        let t = RegressionTree::stump(0.3);
        assert_eq!(tree_predict(&t, &grid2(), &[0.9, 0.1]), 0.3);
    }

    #[test]
    fn root_split_routes_left() {
        let mut t = RegressionTree::stump(0.0);
        t.split_leaf(0, SplitRule { axis: 0, cut: HALF }, -1.0, 1.0);
        assert_eq!(tree_predict(&t, &grid2(), &[0.2, 0.9]), -1.0);
        assert_eq!(tree_predict(&t, &grid2(), &[0.5, 0.9]), 1.0);
    }

    #[test]
    fn depth_two_path() {
        let g = grid2();
        let mut t = RegressionTree::stump(0.0);
        let (l, _) = t.split_leaf(0, SplitRule { axis: 0, cut: HALF }, 0.0, 3.0);
        t.split_leaf(l, SplitRule { axis: 1, cut: HALF }, 1.0, 2.0);
        assert_eq!(tree_predict(&t, &g, &[0.4, 0.6]), 2.0);
        assert_eq!(tree_predict(&t, &g, &[0.4, 0.4]), 1.0);
        assert_eq!(tree_predict(&t, &g, &[0.6, 0.4]), 3.0);
    }

    #[test]
    fn rank_routing_matches_value_routing() {
        let g = CutpointGrid::uniform(2, 1000).unwrap();
        let mut t = RegressionTree::stump(0.0);
        let (l, r) = t.split_leaf(0, SplitRule { axis: 0, cut: 411 }, 1.0, 2.0);
        t.split_leaf(l, SplitRule { axis: 1, cut: 77 }, 3.0, 4.0);
        t.split_leaf(r, SplitRule { axis: 1, cut: 900 }, 5.0, 6.0);
        let rows: Vec<Vec<f64>> = (0..500)
            .map(|i| vec![(i as f64 * 0.618_033_9) % 1.0, (i as f64 * 0.414_213_5) % 1.0])
            .chain([vec![g.value(0, 411), g.value(1, 77)], vec![0.0, 1.0]])
            .collect();
        let design = DesignMatrix::from_rows(2, &rows).unwrap();
        let ranked = RankedPoints::new(&design, &g);
        let mut leaves = Vec::new();
        t.route(&ranked, &mut leaves);
        for (i, row) in design.rows().enumerate() {
            assert_eq!(t.leaf_value(leaves[i]).unwrap(), tree_predict(&t, &g, row));
        }
    }

    #[test]
    fn ensemble_sums() {
        let g = grid2();
        let trees = vec![RegressionTree::stump(0.25); 4];
        assert_eq!(ensemble_predict(&trees, &g, &[0.1, 0.1]), 1.0);
        let two = vec![RegressionTree::stump(0.1), RegressionTree::stump(-0.3)];
        assert!((ensemble_predict(&two, &g, &[0.5, 0.5]) + 0.2).abs() < 1e-15);
    }

    #[test]
    fn ensemble_is_piecewise_constant() {
        let g = CutpointGrid::uniform(1, 9).unwrap();
        let mut a = RegressionTree::stump(0.0);
        a.split_leaf(0, SplitRule { axis: 0, cut: 3 }, 1.0, 2.0);
        let mut b = RegressionTree::stump(0.0);
        b.split_leaf(0, SplitRule { axis: 0, cut: 5 }, 10.0, 20.0);
        let trees = [a, b];
        // cell between cutpoints 0.4 and 0.5
        let base = ensemble_predict(&trees, &g, &[0.41]);
        for x in [0.4, 0.43, 0.47, 0.499] {
            assert_eq!(ensemble_predict(&trees, &g, &[x]), base);
        }
    }

    #[test]
    fn prior_values() {
        let stump = RegressionTree::stump(0.0);
        assert!((log_tree_prior(&stump, 0.95, 2.0) - 0.05f64.ln()).abs() < 1e-15);
        let mut t = RegressionTree::stump(0.0);
        t.split_leaf(0, SplitRule { axis: 0, cut: 0 }, 0.0, 0.0);
        let expect = 0.95f64.ln() + 2.0 * (1.0 - 0.95 / 4.0f64).ln();
        assert!((log_tree_prior(&t, 0.95, 2.0) - expect).abs() < 1e-14);
        assert!((expect + 0.593_6).abs() < 1e-4);
    }

    #[test]
    fn deep_trees_vanish_as_beta_grows() {
        let mut t = RegressionTree::stump(0.0);
        let (l, _) = t.split_leaf(0, SplitRule { axis: 0, cut: 1 }, 0.0, 0.0);
        t.split_leaf(l, SplitRule { axis: 1, cut: 1 }, 0.0, 0.0);
        let p = log_tree_prior(&t, 0.95, 200.0).exp();
        assert!(p < 1e-50);
    }

    #[test]
    fn collapse_restores_stump() {
        let mut t = RegressionTree::stump(0.0);
        let (l, _) = t.split_leaf(0, SplitRule { axis: 0, cut: 1 }, 0.0, 0.0);
        t.split_leaf(l, SplitRule { axis: 1, cut: 1 }, 0.0, 0.0);
        t.collapse(l, 5.0);
        assert_eq!(t.nodes().len(), 3);
        t.collapse(0, 7.0);
        assert_eq!(t, RegressionTree::stump(7.0));
    }

    #[test]
    fn ranges_and_satisfiability() {
        let g = grid2();
        let mut t = RegressionTree::stump(0.0);
        let (l, _) = t.split_leaf(0, SplitRule { axis: 0, cut: 1 }, 0.0, 0.0);
        let (ll, _) = t.split_leaf(l, SplitRule { axis: 0, cut: 0 }, 0.0, 0.0);
        let ranges = t.cut_ranges(&g);
        assert_eq!(ranges[ll * 2], (0, 0));
        assert!(t.is_satisfiable(&g));
        t.set_rule(l, SplitRule { axis: 0, cut: 2 });
        assert!(!t.is_satisfiable(&g));
        assert!(t.log_rule_prior(&g).is_none());
    }
}
