//! Graph-theoretic PSSC criteria for single-input systems: path-cycle family
//! counts, the doubled auxiliary graph with its SCC partition, the two
//! conditions they induce, and a cactus-based sufficient test.
//!
//! This module decides the same question as [`crate::ptsc1`] through the
//! graph formulation; the two are cross-checked against each other in tests.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;

use crate::bigraph::{self, extreme_weight_max_matching, BipartiteGraph, Sense};
use crate::error::{PtscError, Result};
use crate::pattern::{PerturbStructure, SystemPattern};
use crate::ptsc1::{self, gamma_nz, pencil_without_column, GammaInfo, Verdict};
use crate::sctrl;

/// Directed graph of a structured pair: vertices 1..=n are states, n+1..=n+m
/// inputs; an edge (u, v) means entry (v, u) of [A̅, B̅] is nonzero.
#[derive(Clone, Debug)]
pub struct SystemGraph {
    n: usize,
    m: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl SystemGraph {
    pub fn from_system(sys: &SystemPattern) -> Self {
        let edges = sys.ab().entries().iter().map(|&(i, j)| (j, i)).collect();
        SystemGraph { n: sys.n(), m: sys.m(), edges }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn out_edges(&self, v: usize) -> BTreeSet<(usize, usize)> {
        self.edges.iter().copied().filter(|&(u, _)| u == v).collect()
    }

    pub fn in_edges(&self, v: usize) -> BTreeSet<(usize, usize)> {
        self.edges.iter().copied().filter(|&(_, w)| w == v).collect()
    }
}

/// Maximum number of edges over all path-cycle families after deleting
/// `removed` edges. Computed as a maximum matching between head vertices
/// (states) and tail vertices (states and inputs).
pub fn max_path_cycle_family(g: &SystemGraph, removed: &BTreeSet<(usize, usize)>) -> usize {
    let pairs: Vec<(usize, usize)> = g
        .edges
        .iter()
        .filter(|e| !removed.contains(e))
        .map(|&(u, v)| (v - 1, u - 1))
        .collect();
    let bg = BipartiteGraph::unweighted(g.n, g.n + g.m, &pairs).expect("valid family graph");
    bigraph::max_matching(&bg).size
}

/// Condition excluding/creating the zero mode, in graph form: both family
/// maxima equal n − 1 after deleting the out-edges of x_j (and additionally
/// the in-edges of x_i). True means a zero-mode attack exists at (i, j).
pub fn condition_a(merged: &SystemPattern, i: usize, j: usize) -> bool {
    let g = SystemGraph::from_system(merged);
    let n = merged.n();
    let mut removed = g.out_edges(j);
    if max_path_cycle_family(&g, &removed) != n - 1 {
        return false;
    }
    removed.extend(g.in_edges(i));
    max_path_cycle_family(&g, &removed) == n - 1
}

/// The doubled auxiliary graph: each vertex x_k of the system graph (plus the
/// λ self-edges) splits into x_k^o sending and x_k^i receiving. Stored as a
/// bipartite graph with rows = x^i (states only) and columns = x^o.
#[derive(Clone, Debug)]
pub struct AuxGraph {
    pub n: usize,
    /// Edges (x_from^o → x_to^i) with λ/self-loop flags.
    pub edges: Vec<AuxEdge>,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct AuxEdge {
    pub from_o: usize,
    pub to_i: usize,
    pub lambda: bool,
    pub self_loop: bool,
}

impl AuxGraph {
    pub fn from_merged(merged: &SystemPattern) -> Self {
        let h = merged.ab();
        let pencil = ptsc1::build_pencil_bigraph(h, &(1..=h.cols()).collect::<Vec<_>>());
        let edges = pencil
            .graph
            .edges()
            .iter()
            .map(|e| AuxEdge {
                from_o: pencil.col_ids[e.right],
                to_i: e.left + 1,
                lambda: e.lambda,
                self_loop: e.self_loop,
            })
            .collect();
        AuxGraph { n: merged.n(), edges }
    }
}

/// One SCC of the reoriented auxiliary graph, as the bipartite piece it
/// induces: receiving vertices x^i (1-based state ids) against sending
/// vertices x^o (1-based column ids).
#[derive(Clone, Debug, Serialize)]
pub struct AuxComponent {
    pub rows_i: Vec<usize>,
    pub cols_o: Vec<usize>,
    pub gamma: GammaInfo,
}

/// The SCC analysis behind condition b).
#[derive(Clone, Debug)]
pub struct AuxAnalysis {
    pub aux: AuxGraph,
    /// The size-n path family of the auxiliary graph minus the out-edges of
    /// x_j^o, as (x^i state id, x^o column id) pairs.
    pub path_family: Vec<(usize, usize)>,
    /// SCCs ordered by their smallest x^i index.
    pub components: Vec<AuxComponent>,
    /// Components whose bipartite piece has y_nz = 1 (1-based indices).
    pub omega_tilde: Vec<usize>,
    pub i: usize,
    pub j: usize,
}

/// Builds the reoriented graph: take the auxiliary graph minus
/// {x_{n+1}^i, x_j^o}, then reverse the edges of a size-n path family.
/// Its SCCs, with y_nz evaluated on the induced bipartite pieces, give Ω̃_j.
pub fn build_aux_and_sccs(merged: &SystemPattern, i: usize, j: usize) -> AuxAnalysis {
    let n = merged.n();
    let h = merged.ab();
    let aux = AuxGraph::from_merged(merged);
    let pencil = pencil_without_column(h, j);
    let matching = bigraph::max_matching(&pencil.graph);
    assert_eq!(matching.size, n, "a size-n path family always exists");
    let path_family: Vec<(usize, usize)> = matching
        .left_to_right
        .iter()
        .enumerate()
        .map(|(r, c)| (r + 1, pencil.col_ids[c.expect("perfect matching")]))
        .collect();

    // digraph on rows 0..n (x^i) and kept columns n.. (x^o): every auxiliary
    // edge runs x^o → x^i, and each path-family edge adds x^i → x^o back.
    let nr = pencil.graph.right();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n + nr];
    for e in pencil.graph.edges() {
        adj[n + e.right].push(e.left);
        if matching.left_to_right[e.left] == Some(e.right) {
            adj[e.left].push(n + e.right);
        }
    }
    let mut sccs = bigraph::scc(&adj);
    sccs.sort_by_key(|comp| comp.iter().copied().filter(|&v| v < n).min().unwrap_or(usize::MAX));

    let mut components = Vec::with_capacity(sccs.len());
    for comp in &sccs {
        let rows: Vec<usize> = comp.iter().copied().filter(|&v| v < n).collect();
        let cols: Vec<usize> = comp.iter().copied().filter(|&v| v >= n).map(|v| v - n).collect();
        let sub = bigraph::induced_subgraph(&pencil.graph, &rows, &cols, |e| e.weight);
        components.push(AuxComponent {
            rows_i: rows.iter().map(|&r| r + 1).collect(),
            cols_o: cols.iter().map(|&c| pencil.col_ids[c]).collect(),
            gamma: gamma_nz(&sub.graph),
        });
    }
    let omega_tilde: Vec<usize> =
        (1..=components.len()).filter(|&k| components[k - 1].gamma.nz).collect();
    AuxAnalysis { aux, path_family, components, omega_tilde, i, j }
}

/// Brute-force minimum count of component-k edges over all maximum matchings;
/// used to validate the weighted-matching shortcut in debug builds.
#[cfg(debug_assertions)]
fn min_component_edges_brute(g: &BipartiteGraph, mt: usize) -> Option<u64> {
    fn go(
        adj: &[Vec<(usize, u8)>],
        r: usize,
        left: usize,
        used: &mut Vec<bool>,
        picked: usize,
        weight: u64,
        mt: usize,
        best: &mut Option<u64>,
    ) {
        if picked + (left - r) < mt {
            return; // cannot reach maximum cardinality any more
        }
        if r == left {
            if picked == mt {
                *best = Some(best.map_or(weight, |b: u64| b.min(weight)));
            }
            return;
        }
        go(adj, r + 1, left, used, picked, weight, mt, best);
        for &(c, w) in &adj[r] {
            if !used[c] {
                used[c] = true;
                go(adj, r + 1, left, used, picked + 1, weight + w as u64, mt, best);
                used[c] = false;
            }
        }
    }
    let mut adj = vec![Vec::new(); g.left()];
    for e in g.edges() {
        adj[e.left].push((e.right, e.weight));
    }
    let mut best = None;
    go(&adj, 0, g.left(), &mut vec![false; g.right()], 0, 0, mt, &mut best);
    best
}

/// Condition for the nonzero mode, in graph form: some size-(n−1) path family
/// avoiding x_j^o-out and x_i^i-in edges uses at most |Ṽ_k^+| − 1 edges of a
/// component with y_nz = 1. Decided as a minimum-weight maximum matching with
/// weight 1 on that component's edges.
pub fn condition_b(merged: &SystemPattern, i: usize, j: usize) -> bool {
    condition_b_with(&build_aux_and_sccs(merged, i, j), merged, i, j)
}

pub fn condition_b_with(analysis: &AuxAnalysis, merged: &SystemPattern, i: usize, j: usize) -> bool {
    let n = merged.n();
    let pencil = pencil_without_column(merged.ab(), j);
    let keep_rows: Vec<usize> = (0..n).filter(|&r| r != i - 1).collect();
    let all_cols: Vec<usize> = (0..pencil.graph.right()).collect();
    for &k in &analysis.omega_tilde {
        let comp = &analysis.components[k - 1];
        let in_comp = |e: &bigraph::Edge| {
            comp.rows_i.contains(&(e.left + 1)) && comp.cols_o.contains(&pencil.col_ids[e.right])
        };
        let sub = bigraph::induced_subgraph(&pencil.graph, &keep_rows, &all_cols, |e| in_comp(e) as u8);
        let (matching, weight) = extreme_weight_max_matching(&sub.graph, Sense::Min);
        assert_eq!(matching.size, n - 1, "deleting one row leaves a size n-1 family");
        #[cfg(debug_assertions)]
        if n <= 5 {
            assert_eq!(min_component_edges_brute(&sub.graph, n - 1), Some(weight));
        }
        if weight + 1 <= comp.rows_i.len() as u64 {
            return true;
        }
    }
    false
}

/// Theorem-style verdict through the graph criteria, one edge at a time.
pub fn is_pssc_graph(sys: &SystemPattern, f: &PerturbStructure) -> Result<Verdict> {
    if sys.m() != 1 {
        return Err(PtscError::NotSingleInput(sys.m()));
    }
    if !sctrl::is_structurally_controllable(sys) {
        return Ok(Verdict::NotStructurallyControllable);
    }
    for (i, j) in f.edges_colwise() {
        let merged = sys.merged_with(&f.pattern().without_entry(i, j))?;
        if condition_a(&merged, i, j) || condition_b(&merged, i, j) {
            return Ok(Verdict::Pssc { edge: (i, j) });
        }
    }
    Ok(Verdict::Ptsc)
}

// ---------------------------------------------------------------------------
// Cactus sufficiency
// ---------------------------------------------------------------------------

/// Searches for a spanning cactus of G(A̅, b̅) ∪ G(F̅) containing some
/// perturbed edge. Finding one proves PSSC; not finding one proves nothing.
///
/// The search enumerates stems and cycle partitions and is exponential; it
/// gives up (returning false) once `budget` enumeration steps are spent, so
/// it is only meant for desk-scale systems.
pub fn cactus_sufficient(sys: &SystemPattern, f: &PerturbStructure, budget: usize) -> Result<bool> {
    if sys.m() != 1 {
        return Err(PtscError::NotSingleInput(sys.m()));
    }
    let joint: BTreeSet<(usize, usize)> = sys
        .ab()
        .entries()
        .iter()
        .chain(f.pattern().entries())
        .map(|&(i, j)| (j, i))
        .collect();
    let n = sys.n();
    let mut steps = budget;
    for &(i, j) in &f.edges_colwise() {
        if cactus_containing_edge(n, &joint, (j, i), &mut steps) {
            return Ok(true);
        }
    }
    Ok(false)
}

fn cactus_containing_edge(
    n: usize,
    edges: &BTreeSet<(usize, usize)>,
    target: (usize, usize),
    steps: &mut usize,
) -> bool {
    let input = n + 1;
    let mut out = vec![Vec::new(); n + 2];
    for &(u, v) in edges {
        out[u].push(v);
    }
    // DFS over stems: elementary paths starting at the input vertex.
    let mut stem = vec![input];
    let mut on_stem = vec![false; n + 2];
    on_stem[input] = true;
    dfs_stems(n, edges, &out, target, &mut stem, &mut on_stem, steps)
}

fn dfs_stems(
    n: usize,
    edges: &BTreeSet<(usize, usize)>,
    out: &[Vec<usize>],
    target: (usize, usize),
    stem: &mut Vec<usize>,
    on_stem: &mut [bool],
    steps: &mut usize,
) -> bool {
    if *steps == 0 {
        return false;
    }
    *steps -= 1;
    if stem.len() >= 2 {
        // try to close this stem with a cycle partition of the rest
        let rest: Vec<usize> = (1..=n).filter(|&v| !on_stem[v]).collect();
        let stem_now: Vec<usize> = stem.clone();
        let mut partition = Vec::new();
        if partition_into_cycles(
            edges,
            out,
            &rest,
            &mut partition,
            &mut |cycles| attachable(n, edges, &stem_now, cycles, target),
            steps,
        ) {
            return true;
        }
    }
    let head = *stem.last().unwrap();
    for &v in &out[head] {
        if v <= n && !on_stem[v] {
            stem.push(v);
            on_stem[v] = true;
            if dfs_stems(n, edges, out, target, stem, on_stem, steps) {
                return true;
            }
            stem.pop();
            on_stem[v] = false;
        }
    }
    false
}

/// Enumerates partitions of `rest` into vertex-disjoint cycles, invoking
/// `accept` on each complete partition.
fn partition_into_cycles(
    edges: &BTreeSet<(usize, usize)>,
    out: &[Vec<usize>],
    rest: &[usize],
    partition: &mut Vec<Vec<usize>>,
    accept: &mut impl FnMut(&[Vec<usize>]) -> bool,
    steps: &mut usize,
) -> bool {
    if *steps == 0 {
        return false;
    }
    *steps -= 1;
    let Some(&anchor) = rest.first() else {
        return accept(partition);
    };
    // enumerate simple cycles through `anchor` inside `rest`
    let allowed: BTreeSet<usize> = rest.iter().copied().collect();
    let mut path = vec![anchor];
    let mut seen: BTreeSet<usize> = [anchor].into();
    cycle_dfs(edges, out, anchor, &allowed, &mut path, &mut seen, partition, accept, steps)
}

#[allow(clippy::too_many_arguments)]
fn cycle_dfs(
    edges: &BTreeSet<(usize, usize)>,
    out: &[Vec<usize>],
    anchor: usize,
    allowed: &BTreeSet<usize>,
    path: &mut Vec<usize>,
    seen: &mut BTreeSet<usize>,
    partition: &mut Vec<Vec<usize>>,
    accept: &mut impl FnMut(&[Vec<usize>]) -> bool,
    steps: &mut usize,
) -> bool {
    if *steps == 0 {
        return false;
    }
    *steps -= 1;
    let head = *path.last().unwrap();
    if edges.contains(&(head, anchor)) {
        // close the cycle and recurse on the remaining vertices
        let cycle = path.clone();
        let remaining: Vec<usize> =
            allowed.iter().copied().filter(|v| !cycle.contains(v)).collect();
        partition.push(cycle);
        if partition_into_cycles(edges, out, &remaining, partition, accept, steps) {
            return true;
        }
        partition.pop();
    }
    for &v in &out[head] {
        if v > anchor && allowed.contains(&v) && !seen.contains(&v) {
            path.push(v);
            seen.insert(v);
            if cycle_dfs(edges, out, anchor, allowed, path, seen, partition, accept, steps) {
                return true;
            }
            path.pop();
            seen.remove(&v);
        }
    }
    false
}

/// Checks whether every cycle can be attached as a bud (origins anywhere in
/// the cactus built so far except the stem tip) while forcing the target edge
/// to appear as a stem edge, a cycle edge, or a connector.
fn attachable(
    n: usize,
    edges: &BTreeSet<(usize, usize)>,
    stem: &[usize],
    cycles: &[Vec<usize>],
    target: (usize, usize),
) -> bool {
    let tip = *stem.last().unwrap();
    let stem_edges: BTreeSet<(usize, usize)> = stem.windows(2).map(|w| (w[0], w[1])).collect();
    let in_cycles = |e: (usize, usize)| {
        cycles.iter().any(|c| {
            c.windows(2).any(|w| (w[0], w[1]) == e) || (c.last() == Some(&e.0) && c[0] == e.1)
        })
    };
    let target_free = stem_edges.contains(&target) || in_cycles(target);
    // forced-connector mode: the target must attach the cycle containing its head
    let forced_cycle: Option<usize> = if target_free {
        None
    } else {
        let (o, c) = target;
        match cycles.iter().position(|cy| cy.contains(&c)) {
            // the head is on the stem or absent: no cactus of this layout
            // can contain the target edge
            None => return false,
            Some(k) if cycles[k].contains(&o) => {
                return false; // a bud's extra edge must begin outside its cycle
            }
            Some(k) => Some(k),
        }
    };

    let mut attached_v: BTreeSet<usize> = stem.iter().copied().collect();
    attached_v.insert(n + 1);
    let mut pending: Vec<usize> = (0..cycles.len()).collect();
    loop {
        let mut progressed = false;
        pending.retain(|&k| {
            let ok = if forced_cycle == Some(k) {
                let (o, _) = target;
                o != tip && attached_v.contains(&o)
            } else {
                edges.iter().any(|&(o, c)| {
                    o != tip
                        && attached_v.contains(&o)
                        && cycles[k].contains(&c)
                        && !cycles[k].contains(&o)
                })
            };
            if ok {
                for &v in &cycles[k] {
                    attached_v.insert(v);
                }
                progressed = true;
            }
            !ok
        });
        if pending.is_empty() {
            return true;
        }
        if !progressed {
            return false;
        }
    }
}

// ---------------------------------------------------------------------------
// DOT dumps
// ---------------------------------------------------------------------------

pub fn dot_system_graph(g: &SystemGraph) -> String {
    let mut s = String::from("digraph system {\n  rankdir=LR;\n");
    for v in 1..=g.n {
        let _ = writeln!(s, "  x{v} [shape=circle];");
    }
    for v in g.n + 1..=g.n + g.m {
        let _ = writeln!(s, "  x{v} [shape=circle, style=dashed, label=\"u{}\"];", v - g.n);
    }
    for &(u, v) in &g.edges {
        let _ = writeln!(s, "  x{u} -> x{v};");
    }
    s.push_str("}\n");
    s
}

pub fn dot_aux_graph(aux: &AuxGraph) -> String {
    let mut s = String::from("digraph aux {\n  rankdir=LR;\n");
    for e in &aux.edges {
        let style = if e.self_loop {
            " [color=red]"
        } else if e.lambda {
            " [style=dotted]"
        } else {
            ""
        };
        let _ = writeln!(s, "  o{} -> i{}{};", e.from_o, e.to_i, style);
    }
    s.push_str("}\n");
    s
}

pub fn dot_aux_reoriented(analysis: &AuxAnalysis) -> String {
    let mut s = String::from("digraph aux_m {\n  rankdir=LR;\n");
    for e in &analysis.aux.edges {
        if e.from_o == analysis.j {
            continue; // out-edges of x_j^o are deleted
        }
        let _ = writeln!(s, "  o{} -> i{};", e.from_o, e.to_i);
    }
    for &(r, c) in &analysis.path_family {
        let _ = writeln!(s, "  i{r} -> o{c} [style=dashed];");
    }
    s.push_str("}\n");
    s
}

pub fn dot_sccs(analysis: &AuxAnalysis) -> String {
    let mut s = String::from("digraph sccs {\n");
    for (k, comp) in analysis.components.iter().enumerate() {
        let _ = writeln!(s, "  subgraph cluster_{k} {{");
        let _ = writeln!(s, "    label=\"V{} (y_nz={})\";", k + 1, comp.gamma.nz as u8);
        for &r in &comp.rows_i {
            let _ = writeln!(s, "    i{r};");
        }
        for &c in &comp.cols_o {
            let _ = writeln!(s, "    o{c};");
        }
        s.push_str("  }\n");
    }
    s.push_str("}\n");
    s
}
