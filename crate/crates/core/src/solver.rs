//! Exact minimum bandwidth for small explicit graphs, by iterative-deepening
//! placement search with pruning, plus a brute-force permutation oracle used
//! to certify the search on very small instances.

use thiserror::Error;

use crate::comb::{binom_u64, colex_unrank};
use crate::subset::RSubset;

pub const MATERIALIZE_BUDGET: u64 = 24;
pub const ORACLE_BUDGET: usize = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolverError {
    #[error("explicit graph limited to {budget} vertices, K({n},{r}) has {count}")]
    TooLarge { n: u8, r: u8, count: u64, budget: u64 },
    #[error("graph has {verts} vertices, limit is {limit}")]
    VertexLimit { verts: usize, limit: usize },
    #[error("edge ({u}, {v}) out of range or a self-loop")]
    BadEdge { u: usize, v: usize },
}

/// A small explicit graph with adjacency stored as per-vertex bitmasks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmallGraph {
    verts: usize,
    adj: Vec<u32>,
}

impl SmallGraph {
    pub fn new(verts: usize, edges: &[(usize, usize)]) -> Result<Self, SolverError> {
        if verts > MATERIALIZE_BUDGET as usize {
            return Err(SolverError::VertexLimit {
                verts,
                limit: MATERIALIZE_BUDGET as usize,
            });
        }
        let mut adj = vec![0u32; verts];
        for &(u, v) in edges {
            if u >= verts || v >= verts || u == v {
                return Err(SolverError::BadEdge { u, v });
            }
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        Ok(SmallGraph { verts, adj })
    }

    pub fn vertex_count(&self) -> usize {
        self.verts
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] & (1 << v) != 0
    }

    pub fn degree(&self, v: usize) -> u32 {
        self.adj[v].count_ones()
    }

    pub fn max_degree(&self) -> u32 {
        (0..self.verts).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.count_ones() as usize).sum::<usize>() / 2
    }

    /// Dilation of a position assignment (`labels[v]` is the 1-based label).
    pub fn dilation_of(&self, labels: &[u64]) -> u64 {
        let mut best = 0;
        for u in 0..self.verts {
            for v in u + 1..self.verts {
                if self.has_edge(u, v) {
                    best = best.max(labels[u].abs_diff(labels[v]));
                }
            }
        }
        best
    }

    /// Connected components as vertex bitmasks.
    fn components(&self) -> Vec<u32> {
        let mut seen = 0u32;
        let mut comps = Vec::new();
        for s in 0..self.verts {
            if seen & (1 << s) != 0 {
                continue;
            }
            let mut comp = 1u32 << s;
            loop {
                let mut grown = comp;
                let mut c = comp;
                while c != 0 {
                    let v = c.trailing_zeros() as usize;
                    c &= c - 1;
                    grown |= self.adj[v];
                }
                if grown == comp {
                    break;
                }
                comp = grown;
            }
            seen |= comp;
            comps.push(comp);
        }
        comps
    }

    /// Eccentricity-based diameter of one component (vertex mask).
    fn component_diameter(&self, comp: u32) -> u64 {
        let mut diam = 0u64;
        let mut c = comp;
        while c != 0 {
            let s = c.trailing_zeros() as usize;
            c &= c - 1;
            let mut dist = vec![u64::MAX; self.verts];
            dist[s] = 0;
            let mut queue = std::collections::VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                let mut nb = self.adj[u] & comp;
                while nb != 0 {
                    let v = nb.trailing_zeros() as usize;
                    nb &= nb - 1;
                    if dist[v] == u64::MAX {
                        dist[v] = dist[u] + 1;
                        diam = diam.max(dist[v]);
                        queue.push_back(v);
                    }
                }
            }
        }
        diam
    }

    /// Classic lower bounds: ceil(maxdeg/2) and, per component,
    /// ceil((size-1)/diameter).
    pub fn bandwidth_lower_bound(&self) -> u64 {
        if self.edge_count() == 0 {
            return 0;
        }
        let mut lb = (self.max_degree() as u64).div_ceil(2);
        for comp in self.components() {
            let size = comp.count_ones() as u64;
            if size >= 2 {
                let diam = self.component_diameter(comp);
                if diam > 0 {
                    lb = lb.max((size - 1).div_ceil(diam));
                }
            }
        }
        lb
    }

    /// Quick reverse-BFS ordering, used only to seed an upper bound.
    fn greedy_upper(&self) -> (u64, Vec<u64>) {
        let mut order = Vec::with_capacity(self.verts);
        let mut visited = vec![false; self.verts];
        let start = (0..self.verts)
            .min_by_key(|&v| (self.degree(v), v))
            .unwrap_or(0);
        let mut roots: Vec<usize> = (0..self.verts).collect();
        roots.sort_by_key(|&v| if v == start { 0 } else { v + 1 });
        for root in roots {
            if visited[root] {
                continue;
            }
            visited[root] = true;
            let mut queue = std::collections::VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                order.push(u);
                let mut nb: Vec<usize> = (0..self.verts)
                    .filter(|&v| !visited[v] && self.has_edge(u, v))
                    .collect();
                nb.sort_by_key(|&v| (self.degree(v), v));
                for v in nb {
                    visited[v] = true;
                    queue.push_back(v);
                }
            }
        }
        order.reverse();
        let mut labels = vec![0u64; self.verts];
        for (i, &v) in order.iter().enumerate() {
            labels[v] = i as u64 + 1;
        }
        (self.dilation_of(&labels), labels)
    }
}

/// Explicit K(n,r) limited to 24 vertices, with the colex vertex order.
pub fn materialize(n: u8, r: u8) -> Result<(SmallGraph, Vec<RSubset>), SolverError> {
    let count = binom_u64(n as u64, r as u64);
    if count > MATERIALIZE_BUDGET {
        return Err(SolverError::TooLarge {
            n,
            r,
            count,
            budget: MATERIALIZE_BUDGET,
        });
    }
    let verts: Vec<RSubset> = (1..=count)
        .map(|rank| colex_unrank(rank, n, r).expect("rank in range"))
        .collect();
    let mut edges = Vec::new();
    for i in 0..verts.len() {
        for j in i + 1..verts.len() {
            if verts[i].is_disjoint(&verts[j]) {
                edges.push((i, j));
            }
        }
    }
    Ok((SmallGraph::new(verts.len(), &edges)?, verts))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BandwidthOutcome {
    /// Exact bandwidth with a witness assignment (`labels[v]` is 1-based).
    Solved { value: u64, labels: Vec<u64> },
    /// Search budget ran out; the bandwidth lies in `[lower, upper]`.
    BudgetExceeded { lower: u64, upper: u64 },
}

struct Search<'a> {
    g: &'a SmallGraph,
    k: u64,
    order: Vec<usize>,
    budget: u64,
    expansions: u64,
}

impl<'a> Search<'a> {
    /// Tries to place all vertices with dilation <= k. Positions are filled
    /// left to right; candidates are tried in a fixed order (degree
    /// descending, then vertex index), so the first solution found is the
    /// canonical witness.
    fn run(&mut self) -> Result<Option<Vec<usize>>, ()> {
        let mut placement: Vec<usize> = Vec::with_capacity(self.g.verts);
        let mut pos_of = vec![usize::MAX; self.g.verts];
        if self.place(&mut placement, &mut pos_of)? {
            Ok(Some(placement))
        } else {
            Ok(None)
        }
    }

    fn place(
        &mut self,
        placement: &mut Vec<usize>,
        pos_of: &mut [usize],
    ) -> Result<bool, ()> {
        let n = self.g.verts;
        let p = placement.len();
        if p == n {
            return Ok(true);
        }
        let mut placed_mask = 0u32;
        for &v in placement.iter() {
            placed_mask |= 1 << v;
        }
        // A placed vertex at distance k from the frontier with unplaced
        // neighbors forces one of them into this position.
        let mut forced: Option<u32> = None;
        if p >= self.k as usize {
            let u = placement[p - self.k as usize];
            let pending = self.g.adj[u] & !placed_mask;
            if pending != 0 {
                if pending.count_ones() > 1 {
                    return Ok(false);
                }
                forced = Some(pending);
            }
        }
        let candidates: Vec<usize> = match forced {
            Some(mask) => vec![mask.trailing_zeros() as usize],
            None => self
                .order
                .iter()
                .copied()
                .filter(|&v| placed_mask & (1 << v) == 0)
                .collect(),
        };
        for v in candidates {
            // All placed neighbors of v must lie within k of position p.
            let mut ok = true;
            let mut nb = self.g.adj[v] & placed_mask;
            while nb != 0 {
                let u = nb.trailing_zeros() as usize;
                nb &= nb - 1;
                if p - pos_of[u] > self.k as usize {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            // Mirror pruning: the reversal of any layout is equivalent, so
            // keep only layouts whose first vertex index is below the last.
            if p == n - 1 && n >= 2 && v < placement[0] {
                continue;
            }
            self.expansions += 1;
            if self.expansions > self.budget {
                return Err(());
            }
            pos_of[v] = p;
            placement.push(v);
            if self.place(placement, pos_of)? {
                return Ok(true);
            }
            placement.pop();
            pos_of[v] = usize::MAX;
        }
        Ok(false)
    }
}

/// Exact bandwidth by deciding "bandwidth <= k" for k increasing from the
/// classic lower bound. Deterministic; the witness is the first layout found
/// under the fixed candidate order.
pub fn bandwidth_exact(g: &SmallGraph, budget: u64) -> BandwidthOutcome {
    let n = g.verts;
    if n == 0 {
        return BandwidthOutcome::Solved {
            value: 0,
            labels: Vec::new(),
        };
    }
    if g.edge_count() == 0 {
        return BandwidthOutcome::Solved {
            value: 0,
            labels: (1..=n as u64).collect(),
        };
    }
    let lb = g.bandwidth_lower_bound();
    let (ub, _) = g.greedy_upper();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    let mut expansions_left = budget;
    for k in lb..=ub {
        let mut search = Search {
            g,
            k,
            order: order.clone(),
            budget: expansions_left,
            expansions: 0,
        };
        match search.run() {
            Ok(Some(placement)) => {
                let mut labels = vec![0u64; n];
                for (i, &v) in placement.iter().enumerate() {
                    labels[v] = i as u64 + 1;
                }
                debug_assert_eq!(g.dilation_of(&labels), k);
                return BandwidthOutcome::Solved { value: k, labels };
            }
            Ok(None) => {
                expansions_left -= search.expansions;
            }
            Err(()) => {
                return BandwidthOutcome::BudgetExceeded { lower: k, upper: ub };
            }
        }
    }
    // Unreachable in practice: k = ub always admits the greedy layout. Kept
    // as a safe fallback for pathological pruning interactions.
    let (value, labels) = g.greedy_upper();
    BandwidthOutcome::Solved { value, labels }
}

/// Independent brute-force oracle: minimizes dilation over all vertex
/// orderings with simple partial-dilation pruning. Limited to 10 vertices.
pub fn bandwidth_exhaustive(g: &SmallGraph) -> Result<(u64, Vec<u64>), SolverError> {
    let n = g.verts;
    if n > ORACLE_BUDGET {
        return Err(SolverError::VertexLimit {
            verts: n,
            limit: ORACLE_BUDGET,
        });
    }
    if n == 0 {
        return Ok((0, Vec::new()));
    }
    let (mut best, seed) = g.greedy_upper();
    let mut best_labels = seed;

    fn dfs(
        g: &SmallGraph,
        placement: &mut Vec<usize>,
        pos_of: &mut [usize],
        partial: u64,
        best: &mut u64,
        best_labels: &mut Vec<u64>,
    ) {
        let n = g.vertex_count();
        let p = placement.len();
        if partial >= *best {
            return;
        }
        if p == n {
            *best = partial;
            for (i, &v) in placement.iter().enumerate() {
                best_labels[v] = i as u64 + 1;
            }
            return;
        }
        for v in 0..n {
            if pos_of[v] != usize::MAX {
                continue;
            }
            let mut worst = partial;
            for u in 0..n {
                if pos_of[u] != usize::MAX && g.has_edge(u, v) {
                    worst = worst.max((p - pos_of[u]) as u64);
                }
            }
            if worst >= *best {
                continue;
            }
            pos_of[v] = p;
            placement.push(v);
            dfs(g, placement, pos_of, worst, best, best_labels);
            placement.pop();
            pos_of[v] = usize::MAX;
        }
    }

    let mut placement = Vec::with_capacity(n);
    let mut pos_of = vec![usize::MAX; n];
    dfs(
        g,
        &mut placement,
        &mut pos_of,
        0,
        &mut best,
        &mut best_labels,
    );
    Ok((best, best_labels))
}

#[cfg(test)]
mod tests {
    use super::*;

    const DEFAULT_BUDGET: u64 = 10_000_000;

    #[test]
    fn complete_graphs() {
        for n in 2..=8u8 {
            let (g, _) = materialize(n, 1).unwrap();
            match bandwidth_exact(&g, DEFAULT_BUDGET) {
                BandwidthOutcome::Solved { value, labels } => {
                    assert_eq!(value, n as u64 - 1);
                    assert_eq!(g.dilation_of(&labels), value);
                }
                other => panic!("unexpected outcome {other:?}"),
            }
        }
    }

    #[test]
    fn perfect_matchings() {
        for (n, r) in [(4u8, 2u8), (6, 3)] {
            let (g, _) = materialize(n, r).unwrap();
            match bandwidth_exact(&g, DEFAULT_BUDGET) {
                BandwidthOutcome::Solved { value, labels } => {
                    assert_eq!(value, 1, "K({n},{r})");
                    assert_eq!(g.dilation_of(&labels), 1);
                }
                other => panic!("unexpected outcome {other:?}"),
            }
        }
    }

    #[test]
    fn petersen_value_and_oracle_agreement() {
        let (g, _) = materialize(5, 2).unwrap();
        assert_eq!(g.vertex_count(), 10);
        assert_eq!(g.edge_count(), 15);
        let (oracle_value, oracle_labels) = bandwidth_exhaustive(&g).unwrap();
        assert_eq!(g.dilation_of(&oracle_labels), oracle_value);
        match bandwidth_exact(&g, DEFAULT_BUDGET) {
            BandwidthOutcome::Solved { value, labels } => {
                assert_eq!(value, oracle_value);
                assert!((5..=8).contains(&value));
                assert_eq!(g.dilation_of(&labels), value);
            }
            other => panic!("unexpected outcome {other:?}"),
        }
    }

    #[test]
    fn lower_bounds_hold() {
        for (n, r) in [(5u8, 2u8), (6, 2), (4, 2), (6, 3)] {
            let (g, _) = materialize(n, r).unwrap();
            let lb = g.bandwidth_lower_bound();
            match bandwidth_exact(&g, DEFAULT_BUDGET) {
                BandwidthOutcome::Solved { value, .. } => {
                    assert!(value >= lb, "K({n},{r}): {value} < {lb}")
                }
                other => panic!("unexpected outcome {other:?}"),
            }
        }
    }

    #[test]
    fn budget_exceeded_reports_interval() {
        let (g, _) = materialize(6, 2).unwrap();
        match bandwidth_exact(&g, 3) {
            BandwidthOutcome::BudgetExceeded { lower, upper } => {
                assert!(lower <= upper);
                assert!(lower >= g.bandwidth_lower_bound());
            }
            BandwidthOutcome::Solved { .. } => panic!("budget of 3 should not suffice"),
        }
    }

    #[test]
    fn materialize_shapes() {
        let (g, verts) = materialize(4, 2).unwrap();
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(verts.len(), 6);

        let (g, _) = materialize(6, 2).unwrap();
        assert_eq!(g.vertex_count(), 15);
        assert!((0..15).all(|v| g.degree(v) == 6));

        assert!(matches!(
            materialize(8, 3),
            Err(SolverError::TooLarge { .. })
        ));
    }

    #[test]
    fn oracle_rejects_large() {
        let (g, _) = materialize(6, 2).unwrap();
        assert!(bandwidth_exhaustive(&g).is_err());
    }

    #[test]
    fn solver_matches_oracle_on_random_small_graphs() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xba2d_0001);
        for _ in 0..40 {
            let n = rng.gen_range(2..=7usize);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.4) {
                        edges.push((u, v));
                    }
                }
            }
            let g = SmallGraph::new(n, &edges).unwrap();
            let (oracle, _) = bandwidth_exhaustive(&g).unwrap();
            match bandwidth_exact(&g, DEFAULT_BUDGET) {
                BandwidthOutcome::Solved { value, .. } => assert_eq!(value, oracle),
                other => panic!("unexpected outcome {other:?}"),
            }
        }
    }
}
