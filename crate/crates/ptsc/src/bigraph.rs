//! Bipartite graph algorithms: maximum matching, min/max-weight maximum
//! matching with 0/1 weights, strongly connected components, and the
//! Dulmage-Mendelsohn decomposition.
//!
//! This is an internal service module; vertices are 0-based here. Callers
//! translate to the 1-based pattern conventions at the boundary.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use serde::Serialize;

use crate::error::{PtscError, Result};

/// An edge of a bipartite graph. `weight` is 0 or 1, `lambda` marks edges
/// coming from the identity part of a pencil, and a self-loop is a λ-edge
/// that coincides with a nonzero matrix entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub left: usize,
    pub right: usize,
    pub weight: u8,
    pub lambda: bool,
    pub self_loop: bool,
}

impl Edge {
    pub fn plain(left: usize, right: usize) -> Self {
        Edge { left, right, weight: 0, lambda: false, self_loop: false }
    }
}

#[derive(Clone, Debug)]
pub struct BipartiteGraph {
    left: usize,
    right: usize,
    edges: Vec<Edge>,
}

impl BipartiteGraph {
    /// Validates: indices in range, no parallel edges, self-loop ⇒ λ-edge,
    /// weights in {0, 1}.
    pub fn new(left: usize, right: usize, mut edges: Vec<Edge>) -> Result<Self> {
        edges.sort_unstable_by_key(|e| (e.left, e.right));
        for w in edges.windows(2) {
            if w[0].left == w[1].left && w[0].right == w[1].right {
                return Err(PtscError::InvalidGraph(format!(
                    "parallel edge ({}, {})",
                    w[0].left, w[0].right
                )));
            }
        }
        for e in &edges {
            if e.left >= left || e.right >= right {
                return Err(PtscError::InvalidGraph(format!(
                    "edge ({}, {}) outside {}x{} graph",
                    e.left, e.right, left, right
                )));
            }
            if e.weight > 1 {
                return Err(PtscError::InvalidGraph("weights must be 0 or 1".into()));
            }
            if e.self_loop && !e.lambda {
                return Err(PtscError::InvalidGraph("a self-loop must be a λ-edge".into()));
            }
        }
        Ok(BipartiteGraph { left, right, edges })
    }

    pub fn unweighted(left: usize, right: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let edges = pairs.iter().map(|&(l, r)| Edge::plain(l, r)).collect();
        BipartiteGraph::new(left, right, edges)
    }

    pub fn left(&self) -> usize {
        self.left
    }

    pub fn right(&self) -> usize {
        self.right
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_between(&self, l: usize, r: usize) -> Option<&Edge> {
        self.edges
            .binary_search_by_key(&(l, r), |e| (e.left, e.right))
            .ok()
            .map(|k| &self.edges[k])
    }

    /// Left-to-right adjacency lists, neighbor lists ascending.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.left];
        for e in &self.edges {
            adj[e.left].push(e.right);
        }
        adj
    }

    fn adjacency_with_cost(&self) -> Vec<Vec<(usize, i64)>> {
        let mut adj = vec![Vec::new(); self.left];
        for e in &self.edges {
            adj[e.left].push((e.right, e.weight as i64));
        }
        adj
    }

    pub fn has_self_loop(&self) -> bool {
        self.edges.iter().any(|e| e.self_loop)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Matching {
    pub left_to_right: Vec<Option<usize>>,
    pub right_to_left: Vec<Option<usize>>,
    pub size: usize,
}

impl Matching {
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.left_to_right
            .iter()
            .enumerate()
            .filter_map(|(l, r)| r.map(|r| (l, r)))
            .collect()
    }

    pub fn weight_in(&self, g: &BipartiteGraph) -> u64 {
        self.edges()
            .iter()
            .map(|&(l, r)| g.edge_between(l, r).map(|e| e.weight as u64).unwrap_or(0))
            .sum()
    }
}

/// Hopcroft-Karp maximum matching.
pub fn max_matching(g: &BipartiteGraph) -> Matching {
    let adj = g.adjacency();
    let (n_left, n_right) = (g.left, g.right);
    let mut left_to_right = vec![None; n_left];
    let mut right_to_left = vec![None; n_right];
    let inf = i32::MAX / 4;
    let mut dist = vec![inf; n_left];
    let mut size = 0;

    while hk_bfs(&adj, &left_to_right, &right_to_left, &mut dist, inf) {
        for u in 0..n_left {
            if left_to_right[u].is_none()
                && hk_dfs(u, &adj, &mut left_to_right, &mut right_to_left, &mut dist, inf)
            {
                size += 1;
            }
        }
    }
    Matching { left_to_right, right_to_left, size }
}

fn hk_bfs(
    adj: &[Vec<usize>],
    left_to_right: &[Option<usize>],
    right_to_left: &[Option<usize>],
    dist: &mut [i32],
    inf: i32,
) -> bool {
    let mut q = VecDeque::new();
    for (u, m) in left_to_right.iter().enumerate() {
        if m.is_none() {
            dist[u] = 0;
            q.push_back(u);
        } else {
            dist[u] = inf;
        }
    }
    let mut found = false;
    while let Some(u) = q.pop_front() {
        for &v in &adj[u] {
            match right_to_left[v] {
                Some(u2) => {
                    if dist[u2] == inf {
                        dist[u2] = dist[u] + 1;
                        q.push_back(u2);
                    }
                }
                None => found = true,
            }
        }
    }
    found
}

fn hk_dfs(
    u: usize,
    adj: &[Vec<usize>],
    left_to_right: &mut [Option<usize>],
    right_to_left: &mut [Option<usize>],
    dist: &mut [i32],
    inf: i32,
) -> bool {
    for &v in &adj[u] {
        match right_to_left[v] {
            None => {
                left_to_right[u] = Some(v);
                right_to_left[v] = Some(u);
                return true;
            }
            Some(u2) => {
                if dist[u2] == dist[u] + 1
                    && hk_dfs(u2, adj, left_to_right, right_to_left, dist, inf)
                {
                    left_to_right[u] = Some(v);
                    right_to_left[v] = Some(u);
                    return true;
                }
            }
        }
    }
    dist[u] = inf;
    false
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Min,
    Max,
}

/// Among all maximum-cardinality matchings, returns one of minimum
/// (resp. maximum) total weight together with that weight.
///
/// Successive shortest augmenting paths with Johnson potentials; ties are
/// broken by lowest vertex index so outputs are deterministic.
pub fn extreme_weight_max_matching(g: &BipartiteGraph, sense: Sense) -> (Matching, u64) {
    let mut adj = g.adjacency_with_cost();
    if sense == Sense::Max {
        for row in &mut adj {
            for (_, c) in row.iter_mut() {
                *c = 1 - *c;
            }
        }
    }
    let matching = min_cost_max_matching(&adj, g.left, g.right);
    let weight = matching.weight_in(g);
    (matching, weight)
}

const UNREACHED: i64 = i64::MAX / 4;

/// Min-cost maximum-cardinality bipartite matching, nonnegative integer costs.
fn min_cost_max_matching(adj: &[Vec<(usize, i64)>], n_left: usize, n_right: usize) -> Matching {
    let mut left_to_right: Vec<Option<usize>> = vec![None; n_left];
    let mut right_to_left: Vec<Option<usize>> = vec![None; n_right];
    let mut pot_l = vec![0i64; n_left];
    let mut pot_r = vec![0i64; n_right];
    let mut size = 0;

    loop {
        // Multi-source Dijkstra over the residual graph with reduced costs.
        let mut dist_l = vec![UNREACHED; n_left];
        let mut dist_r = vec![UNREACHED; n_right];
        let mut parent_r: Vec<Option<usize>> = vec![None; n_right]; // left vertex we came from
        // heap entries: (dist, is_right, index)
        let mut heap: BinaryHeap<Reverse<(i64, bool, usize)>> = BinaryHeap::new();
        for u in 0..n_left {
            if left_to_right[u].is_none() {
                dist_l[u] = 0;
                heap.push(Reverse((0, false, u)));
            }
        }
        while let Some(Reverse((d, is_right, x))) = heap.pop() {
            if is_right {
                if d > dist_r[x] {
                    continue;
                }
                // leave a matched right vertex through its matching edge
                if let Some(u) = right_to_left[x] {
                    let cost = adj[u].iter().find(|&&(v, _)| v == x).map(|&(_, c)| c).unwrap();
                    let red = -cost + pot_r[x] - pot_l[u];
                    debug_assert!(red >= 0);
                    let nd = d + red;
                    if nd < dist_l[u] {
                        dist_l[u] = nd;
                        heap.push(Reverse((nd, false, u)));
                    }
                }
            } else {
                if d > dist_l[x] {
                    continue;
                }
                for &(v, cost) in &adj[x] {
                    if left_to_right[x] == Some(v) {
                        continue;
                    }
                    let red = cost + pot_l[x] - pot_r[v];
                    debug_assert!(red >= 0);
                    let nd = d + red;
                    if nd < dist_r[v] {
                        dist_r[v] = nd;
                        parent_r[v] = Some(x);
                        heap.push(Reverse((nd, true, v)));
                    }
                }
            }
        }

        // Nearest unmatched right vertex, smallest index on ties.
        let target = (0..n_right)
            .filter(|&v| right_to_left[v].is_none() && dist_r[v] < UNREACHED)
            .min_by_key(|&v| (dist_r[v], v));
        let Some(target) = target else { break };
        let d_target = dist_r[target];

        for u in 0..n_left {
            if dist_l[u] < UNREACHED {
                pot_l[u] += dist_l[u].min(d_target);
            }
        }
        for v in 0..n_right {
            if dist_r[v] < UNREACHED {
                pot_r[v] += dist_r[v].min(d_target);
            }
        }

        // Augment along parent pointers.
        let mut v = target;
        loop {
            let u = parent_r[v].expect("augmenting path is connected");
            let prev = left_to_right[u];
            left_to_right[u] = Some(v);
            right_to_left[v] = Some(u);
            match prev {
                Some(pv) => v = pv,
                None => break,
            }
        }
        size += 1;
    }

    Matching { left_to_right, right_to_left, size }
}

/// Strongly connected components of a digraph, iterative Tarjan.
///
/// Components are returned in a topological order of the condensation
/// (edges go from earlier to later components); vertices within a component
/// are ascending.
pub fn scc(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut counter = 0usize;
    // call stack of (vertex, next child position)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        call.push((root, 0));
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut ci)) = call.last_mut() {
            if *ci < adj[v].len() {
                let w = adj[v][*ci];
                *ci += 1;
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(p, _)) = call.last() {
                    low[p] = low[p].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    comps.push(comp);
                }
            }
        }
    }
    // Tarjan emits components in reverse topological order.
    comps.reverse();
    comps
}

/// Where a vertex landed in a DM-decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompSlot {
    Horizontal,
    Consistent(usize),
    Vertical,
}

/// A DM-component: its row and column vertices (original ids, ascending).
#[derive(Clone, Debug, Serialize)]
pub struct DmComponent {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl DmComponent {
    fn empty() -> Self {
        DmComponent { rows: Vec::new(), cols: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty() && self.cols.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct DmDecomposition {
    /// Horizontal tail G₀ (more columns than rows); possibly empty.
    pub horizontal: DmComponent,
    /// Consistent components G₁..G_d in block-triangular order.
    pub components: Vec<DmComponent>,
    /// Vertical tail G∞ (more rows than columns); possibly empty.
    pub vertical: DmComponent,
    /// Original row index at each permuted position (tail₀, blocks, tail∞).
    pub row_perm: Vec<usize>,
    /// Original column index at each permuted position.
    pub col_perm: Vec<usize>,
    pub matching: Matching,
    row_slot: Vec<CompSlot>,
    col_slot: Vec<CompSlot>,
}

impl DmDecomposition {
    pub fn row_slot(&self, r: usize) -> CompSlot {
        self.row_slot[r]
    }

    pub fn col_slot(&self, c: usize) -> CompSlot {
        self.col_slot[c]
    }

    /// Consistent-component index of a row vertex, if it is in one.
    pub fn component_of_row(&self, r: usize) -> Option<usize> {
        match self.row_slot[r] {
            CompSlot::Consistent(k) => Some(k),
            _ => None,
        }
    }

    pub fn has_tails(&self) -> bool {
        !self.horizontal.is_empty() || !self.vertical.is_empty()
    }
}

/// Dulmage-Mendelsohn decomposition.
///
/// One maximum matching is computed, matched edges are made two-way in the
/// auxiliary digraph, tails are identified by reachability from/to unmatched
/// vertices, and the consistent part is split into SCCs ordered by the
/// condensation. Ties between incomparable components are broken by the
/// smallest row vertex they contain, so the block order is reproducible.
pub fn dm_decompose(g: &BipartiteGraph) -> DmDecomposition {
    let matching = max_matching(g);
    let (nl, nr) = (g.left, g.right);
    let n = nl + nr;
    // digraph: rows 0..nl, cols nl..nl+nr; arcs row→col everywhere,
    // col→row on matched edges
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in g.edges() {
        adj[e.left].push(nl + e.right);
        if matching.left_to_right[e.left] == Some(e.right) {
            adj[nl + e.right].push(e.left);
        }
    }

    // vertical tail: reachable from unmatched rows
    let mut in_vertical = vec![false; n];
    let mut q: VecDeque<usize> = (0..nl).filter(|&u| matching.left_to_right[u].is_none()).collect();
    for &u in &q {
        in_vertical[u] = true;
    }
    while let Some(x) = q.pop_front() {
        for &y in &adj[x] {
            if !in_vertical[y] {
                in_vertical[y] = true;
                q.push_back(y);
            }
        }
    }

    // horizontal tail: can reach an unmatched column
    let mut radj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (x, outs) in adj.iter().enumerate() {
        for &y in outs {
            radj[y].push(x);
        }
    }
    let mut in_horizontal = vec![false; n];
    let mut q: VecDeque<usize> =
        (0..nr).filter(|&v| matching.right_to_left[v].is_none()).map(|v| nl + v).collect();
    for &v in &q {
        in_horizontal[v] = true;
    }
    while let Some(x) = q.pop_front() {
        for &y in &radj[x] {
            if !in_horizontal[y] {
                in_horizontal[y] = true;
                q.push_back(y);
            }
        }
    }
    debug_assert!(
        (0..n).all(|x| !(in_horizontal[x] && in_vertical[x])),
        "tails intersect; matching was not maximum"
    );

    // SCCs of the consistent part
    let core: Vec<usize> = (0..n).filter(|&x| !in_horizontal[x] && !in_vertical[x]).collect();
    let mut core_id = vec![usize::MAX; n];
    for (i, &x) in core.iter().enumerate() {
        core_id[x] = i;
    }
    let core_adj: Vec<Vec<usize>> = core
        .iter()
        .map(|&x| adj[x].iter().filter(|&&y| core_id[y] != usize::MAX).map(|&y| core_id[y]).collect())
        .collect();
    let raw = scc(&core_adj);

    // Topological order with smallest-row-vertex tie-breaking.
    let ncomp = raw.len();
    let mut comp_of = vec![usize::MAX; core.len()];
    for (k, comp) in raw.iter().enumerate() {
        for &v in comp {
            comp_of[v] = k;
        }
    }
    let mut indeg = vec![0usize; ncomp];
    let mut dag: Vec<Vec<usize>> = vec![Vec::new(); ncomp];
    for (v, outs) in core_adj.iter().enumerate() {
        for &w in outs {
            let (a, b) = (comp_of[v], comp_of[w]);
            if a != b {
                dag[a].push(b);
            }
        }
    }
    for outs in &mut dag {
        outs.sort_unstable();
        outs.dedup();
    }
    for outs in &dag {
        for &b in outs {
            indeg[b] += 1;
        }
    }
    let comp_key = |comp: &[usize]| -> usize {
        comp.iter().map(|&v| core[v]).filter(|&x| x < nl).min().unwrap_or(usize::MAX)
    };
    let mut heap: BinaryHeap<Reverse<(usize, usize)>> = (0..ncomp)
        .filter(|&k| indeg[k] == 0)
        .map(|k| Reverse((comp_key(&raw[k]), k)))
        .collect();
    let mut order = Vec::with_capacity(ncomp);
    while let Some(Reverse((_, k))) = heap.pop() {
        order.push(k);
        for &b in &dag[k] {
            indeg[b] -= 1;
            if indeg[b] == 0 {
                heap.push(Reverse((comp_key(&raw[b]), b)));
            }
        }
    }
    debug_assert_eq!(order.len(), ncomp);

    let mut row_slot = vec![CompSlot::Horizontal; nl];
    let mut col_slot = vec![CompSlot::Horizontal; nr];
    let mut horizontal = DmComponent::empty();
    let mut vertical = DmComponent::empty();
    for r in 0..nl {
        if in_horizontal[r] {
            horizontal.rows.push(r);
        } else if in_vertical[r] {
            vertical.rows.push(r);
            row_slot[r] = CompSlot::Vertical;
        }
    }
    for c in 0..nr {
        if in_horizontal[nl + c] {
            horizontal.cols.push(c);
        } else if in_vertical[nl + c] {
            vertical.cols.push(c);
            col_slot[c] = CompSlot::Vertical;
        }
    }

    let mut components = Vec::with_capacity(ncomp);
    for (pos, &k) in order.iter().enumerate() {
        let mut comp = DmComponent::empty();
        for &v in &raw[k] {
            let x = core[v];
            if x < nl {
                comp.rows.push(x);
                row_slot[x] = CompSlot::Consistent(pos);
            } else {
                comp.cols.push(x - nl);
                col_slot[x - nl] = CompSlot::Consistent(pos);
            }
        }
        debug_assert_eq!(comp.rows.len(), comp.cols.len(), "consistent component must be square");
        components.push(comp);
    }

    let mut row_perm = horizontal.rows.clone();
    let mut col_perm = horizontal.cols.clone();
    for comp in &components {
        row_perm.extend_from_slice(&comp.rows);
        col_perm.extend_from_slice(&comp.cols);
    }
    row_perm.extend_from_slice(&vertical.rows);
    col_perm.extend_from_slice(&vertical.cols);

    DmDecomposition {
        horizontal,
        components,
        vertical,
        row_perm,
        col_perm,
        matching,
        row_slot,
        col_slot,
    }
}

/// DM-irreducibility of a square bipartite graph with a perfect matching:
/// exactly one consistent component and no tails.
pub fn is_dm_irreducible(g: &BipartiteGraph) -> Result<bool> {
    if g.left != g.right {
        return Err(PtscError::InvalidGraph(format!("graph is {}x{}, not square", g.left, g.right)));
    }
    let dm = dm_decompose(g);
    if dm.matching.size < g.left {
        return Err(PtscError::InvalidGraph("graph has no perfect matching".into()));
    }
    Ok(dm.components.len() == 1 && !dm.has_tails())
}

/// An induced subgraph with its new→old vertex maps.
#[derive(Clone, Debug)]
pub struct InducedSubgraph {
    pub graph: BipartiteGraph,
    /// Original row id of each new left vertex.
    pub rows: Vec<usize>,
    /// Original column id of each new right vertex.
    pub cols: Vec<usize>,
}

/// Subgraph induced by `keep_rows` × `keep_cols`, re-weighting each surviving
/// edge through `weight`.
pub fn induced_subgraph(
    g: &BipartiteGraph,
    keep_rows: &[usize],
    keep_cols: &[usize],
    mut weight: impl FnMut(&Edge) -> u8,
) -> InducedSubgraph {
    let mut row_new = vec![usize::MAX; g.left];
    let mut col_new = vec![usize::MAX; g.right];
    for (i, &r) in keep_rows.iter().enumerate() {
        row_new[r] = i;
    }
    for (i, &c) in keep_cols.iter().enumerate() {
        col_new[c] = i;
    }
    let edges: Vec<Edge> = g
        .edges()
        .iter()
        .filter(|e| row_new[e.left] != usize::MAX && col_new[e.right] != usize::MAX)
        .map(|e| Edge {
            left: row_new[e.left],
            right: col_new[e.right],
            weight: weight(e),
            lambda: e.lambda,
            self_loop: e.self_loop,
        })
        .collect();
    let graph = BipartiteGraph::new(keep_rows.len(), keep_cols.len(), edges)
        .expect("induced subgraph of a valid graph is valid");
    InducedSubgraph { graph, rows: keep_rows.to_vec(), cols: keep_cols.to_vec() }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lambda_edge(l: usize, r: usize, self_loop: bool) -> Edge {
        Edge { left: l, right: r, weight: 1, lambda: true, self_loop }
    }

    #[test]
    fn max_matching_empty_and_complete() {
        let g = BipartiteGraph::unweighted(0, 0, &[]).unwrap();
        assert_eq!(max_matching(&g).size, 0);
        let pairs: Vec<(usize, usize)> =
            (0..3).flat_map(|l| (0..3).map(move |r| (l, r))).collect();
        let g = BipartiteGraph::unweighted(3, 3, &pairs).unwrap();
        assert_eq!(max_matching(&g).size, 3);
    }

    #[test]
    fn parallel_edges_rejected() {
        let edges = vec![Edge::plain(0, 0), Edge::plain(0, 0)];
        assert!(BipartiteGraph::new(1, 1, edges).is_err());
    }

    /// Pencil graph of [A̅ᵉ - λI] for the chain-with-loops system used in the
    /// worked PSSC example (j = 5 after merging the (3,3) entry): rows x1..x4,
    /// columns v1..v4.
    fn pencil_f2_case() -> BipartiteGraph {
        let edges = vec![
            lambda_edge(0, 0, false),       // x1: -λ
            Edge::plain(1, 0),              // a21
            lambda_edge(1, 1, false),       // x2: -λ
            Edge::plain(2, 1),              // a32
            lambda_edge(2, 2, true),        // x3: Δa33 - λ (self-loop)
            Edge::plain(3, 0),              // a41
            Edge::plain(3, 1),              // a42
            lambda_edge(3, 3, true),        // x4: a44 - λ (self-loop)
        ];
        BipartiteGraph::new(4, 4, edges).unwrap()
    }

    /// Pencil graph for the same system with the (1,3) entry merged and the
    /// b-column kept (j = 4): rows x1..x4, columns {v1, v2, v3, v5} → 0..3.
    fn pencil_f1_case() -> BipartiteGraph {
        let edges = vec![
            lambda_edge(0, 0, false), // x1: -λ at v1
            Edge::plain(0, 2),        // Δa13 at v3
            Edge::plain(0, 3),        // b1 at v5
            Edge::plain(1, 0),        // a21
            lambda_edge(1, 1, false), // x2: -λ at v2
            Edge::plain(2, 1),        // a32
            lambda_edge(2, 2, false), // x3: -λ at v3
            Edge::plain(3, 0),        // a41
            Edge::plain(3, 1),        // a42
        ];
        BipartiteGraph::new(4, 4, edges).unwrap()
    }

    #[test]
    fn pencil_has_full_matching() {
        assert_eq!(max_matching(&pencil_f2_case()).size, 4);
        assert_eq!(max_matching(&pencil_f1_case()).size, 4);
    }

    #[test]
    fn extreme_weight_single_lambda_edge() {
        let g = BipartiteGraph::new(1, 1, vec![lambda_edge(0, 0, false)]).unwrap();
        assert_eq!(extreme_weight_max_matching(&g, Sense::Min).1, 1);
        assert_eq!(extreme_weight_max_matching(&g, Sense::Max).1, 1);
    }

    #[test]
    fn extreme_weight_two_by_two_twist() {
        // λ-edges on the diagonal, plain edges off it: the two perfect
        // matchings have weights 2 and 0.
        let edges = vec![
            lambda_edge(0, 0, false),
            Edge::plain(0, 1),
            Edge::plain(1, 0),
            lambda_edge(1, 1, false),
        ];
        let g = BipartiteGraph::new(2, 2, edges).unwrap();
        let (m_min, w_min) = extreme_weight_max_matching(&g, Sense::Min);
        let (m_max, w_max) = extreme_weight_max_matching(&g, Sense::Max);
        assert_eq!((w_min, w_max), (0, 2));
        assert_eq!(m_min.size, 2);
        assert_eq!(m_max.size, 2);
    }

    #[test]
    fn extreme_weight_sizes_match_mt() {
        let g = pencil_f1_case();
        let mt = max_matching(&g).size;
        assert_eq!(extreme_weight_max_matching(&g, Sense::Min).0.size, mt);
        assert_eq!(extreme_weight_max_matching(&g, Sense::Max).0.size, mt);
    }

    #[test]
    fn scc_dag_and_cycle() {
        // 0 → 1 → 2
        let comps = scc(&[vec![1], vec![2], vec![]]);
        assert_eq!(comps, vec![vec![0], vec![1], vec![2]]);
        // 3-cycle
        let comps = scc(&[vec![1], vec![2], vec![0]]);
        assert_eq!(comps, vec![vec![0, 1, 2]]);
    }

    #[test]
    fn scc_topological_order() {
        // two components: {0,1} → {2}
        let comps = scc(&[vec![1], vec![0, 2], vec![]]);
        assert_eq!(comps, vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn dm_diagonal_gives_singletons() {
        let pairs: Vec<(usize, usize)> = (0..4).map(|i| (i, i)).collect();
        let g = BipartiteGraph::unweighted(4, 4, &pairs).unwrap();
        let dm = dm_decompose(&g);
        assert!(!dm.has_tails());
        assert_eq!(dm.components.len(), 4);
        for comp in &dm.components {
            assert_eq!(comp.rows.len(), 1);
            assert_eq!(comp.cols.len(), 1);
        }
    }

    #[test]
    fn dm_blocks_f2_case() {
        // Expected block diagonals: (Δa33-λ), (a44-λ), (-λ), (-λ), i.e. rows
        // x3, x4, x2, x1 in that order.
        let dm = dm_decompose(&pencil_f2_case());
        assert!(!dm.has_tails());
        let rows: Vec<Vec<usize>> = dm.components.iter().map(|c| c.rows.clone()).collect();
        let cols: Vec<Vec<usize>> = dm.components.iter().map(|c| c.cols.clone()).collect();
        assert_eq!(rows, vec![vec![2], vec![3], vec![1], vec![0]]);
        assert_eq!(cols, vec![vec![2], vec![3], vec![1], vec![0]]);
    }

    #[test]
    fn dm_blocks_f1_case() {
        // Expected blocks: (b1), (-λ), then the 2x2 {a41, a42; a21, -λ}.
        let dm = dm_decompose(&pencil_f1_case());
        assert!(!dm.has_tails());
        let rows: Vec<Vec<usize>> = dm.components.iter().map(|c| c.rows.clone()).collect();
        let cols: Vec<Vec<usize>> = dm.components.iter().map(|c| c.cols.clone()).collect();
        assert_eq!(rows, vec![vec![0], vec![2], vec![1, 3]]);
        assert_eq!(cols, vec![vec![3], vec![2], vec![0, 1]]);
    }

    #[test]
    fn dm_permuted_matrix_is_block_upper_triangular() {
        for g in [pencil_f1_case(), pencil_f2_case()] {
            let dm = dm_decompose(&g);
            let mut col_pos = vec![0usize; g.right()];
            for (p, &c) in dm.col_perm.iter().enumerate() {
                col_pos[c] = p;
            }
            let mut row_pos = vec![0usize; g.left()];
            for (p, &r) in dm.row_perm.iter().enumerate() {
                row_pos[r] = p;
            }
            // block index per permuted position
            let mut row_block = Vec::new();
            let mut col_block = Vec::new();
            for (b, comp) in dm.components.iter().enumerate() {
                row_block.extend(comp.rows.iter().map(|_| b));
                col_block.extend(comp.cols.iter().map(|_| b));
            }
            for e in g.edges() {
                let rb = row_block[row_pos[e.left]];
                let cb = col_block[col_pos[e.right]];
                assert!(rb <= cb, "edge ({}, {}) below the diagonal", e.left, e.right);
            }
        }
    }

    #[test]
    fn dm_tails() {
        // 1 row, 2 cols: horizontal tail only.
        let g = BipartiteGraph::unweighted(1, 2, &[(0, 0), (0, 1)]).unwrap();
        let dm = dm_decompose(&g);
        assert_eq!(dm.horizontal.rows, vec![0]);
        assert_eq!(dm.horizontal.cols, vec![0, 1]);
        assert!(dm.components.is_empty());
        // transpose: vertical tail only
        let g = BipartiteGraph::unweighted(2, 1, &[(0, 0), (1, 0)]).unwrap();
        let dm = dm_decompose(&g);
        assert_eq!(dm.vertical.rows, vec![0, 1]);
        assert_eq!(dm.vertical.cols, vec![0]);
        assert!(dm.components.is_empty());
    }

    /// Lemma-style irreducibility check: removing any (row, col) pair drops
    /// the matching number by exactly one.
    fn irreducible_brute(g: &BipartiteGraph) -> bool {
        let mt = max_matching(g).size;
        for v1 in 0..g.left() {
            for v2 in 0..g.right() {
                let rows: Vec<usize> = (0..g.left()).filter(|&r| r != v1).collect();
                let cols: Vec<usize> = (0..g.right()).filter(|&c| c != v2).collect();
                let sub = induced_subgraph(g, &rows, &cols, |e| e.weight);
                if max_matching(&sub.graph).size != mt - 1 {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn dm_irreducible_cases() {
        let g = BipartiteGraph::unweighted(1, 1, &[(0, 0)]).unwrap();
        assert!(is_dm_irreducible(&g).unwrap());

        let g = BipartiteGraph::unweighted(2, 2, &[(0, 0), (1, 1)]).unwrap();
        assert!(!is_dm_irreducible(&g).unwrap());

        // the 2x2 block {a41, a42; a21, -λ} from the worked example
        let edges = vec![
            Edge::plain(0, 0),
            Edge::plain(0, 1),
            Edge::plain(1, 0),
            lambda_edge(1, 1, false),
        ];
        let g = BipartiteGraph::new(2, 2, edges).unwrap();
        assert!(is_dm_irreducible(&g).unwrap());
        assert!(irreducible_brute(&g));

        // no perfect matching → error
        let g = BipartiteGraph::unweighted(2, 2, &[(0, 0), (1, 0)]).unwrap();
        assert!(is_dm_irreducible(&g).is_err());
    }

    #[test]
    fn dm_irreducible_agrees_with_pair_deletion() {
        for g in [pencil_f1_case(), pencil_f2_case()] {
            let dm = dm_decompose(&g);
            let one_block = dm.components.len() == 1 && !dm.has_tails();
            assert_eq!(one_block, irreducible_brute(&g));
        }
    }
}
