//! Single-input PTSC decision procedure.
//!
//! For each perturbed entry, the remaining perturbed entries are merged into
//! the system as generic entries (one-edge preservation), then two tests run
//! on the merged pair: a generic-rank test excluding a zero uncontrollable
//! mode, and a DM-decomposition / weighted-matching test excluding nonzero
//! uncontrollable modes.

use serde::Serialize;

use crate::bigraph::{
    self, dm_decompose, extreme_weight_max_matching, BipartiteGraph, DmDecomposition, Edge, Sense,
};
use crate::error::{PtscError, Result};
use crate::pattern::{Pattern, PerturbStructure, SystemPattern};
use crate::sctrl;

/// Bipartite view of a pencil [H - λ diag] restricted to a column subset.
/// Left vertices are the rows x_1..x_n; right vertices are the kept columns
/// in ascending order, with `col_ids` mapping them back to 1-based ids.
#[derive(Clone, Debug)]
pub struct PencilGraph {
    pub graph: BipartiteGraph,
    pub col_ids: Vec<usize>,
}

/// Builds B(H_λ) on the kept columns of `h`: edges are the nonzero entries of
/// `h` plus a λ-edge (x_k, v_k) for every kept column k ≤ rows; a λ-edge that
/// is also a nonzero entry becomes a single self-loop edge.
pub fn build_pencil_bigraph(h: &Pattern, keep_cols: &[usize]) -> PencilGraph {
    let n = h.rows();
    let mut edges: Vec<Edge> = Vec::new();
    for (p, &c) in keep_cols.iter().enumerate() {
        let lambda_row = if c <= n { Some(c) } else { None };
        for r in h.column_support(c) {
            let is_lambda = lambda_row == Some(r);
            edges.push(Edge {
                left: r - 1,
                right: p,
                weight: is_lambda as u8,
                lambda: is_lambda,
                self_loop: is_lambda,
            });
        }
        if let Some(r) = lambda_row {
            if !h.contains(r, c) {
                edges.push(Edge { left: r - 1, right: p, weight: 1, lambda: true, self_loop: false });
            }
        }
    }
    let graph = BipartiteGraph::new(n, keep_cols.len(), edges).expect("pencil graph is valid");
    PencilGraph { graph, col_ids: keep_cols.to_vec() }
}

/// Convenience: all columns of `h` except the 1-based column `j`.
pub fn pencil_without_column(h: &Pattern, j: usize) -> PencilGraph {
    let cols: Vec<usize> = (1..=h.cols()).filter(|&c| c != j).collect();
    build_pencil_bigraph(h, &cols)
}

/// Which branch of the rank test excluded the zero mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ZeroModeBranch {
    /// grank(H̄[J_n, J_{n+1}∖{j}]) = n.
    FullRankWithoutColumn,
    /// grank(H̄[J_n∖{i}, J_{n+1}∖{j}]) = n - 2.
    RankDropsTwice,
    /// Neither held: a zero uncontrollable mode is creatable at (i, j).
    Neither,
}

/// Zero-mode exclusion test at entry (i, j) of the merged pair `h`.
/// Returns true iff no zero uncontrollable mode can be created there.
pub fn zero_mode_blocked(h: &Pattern, i: usize, j: usize) -> (bool, ZeroModeBranch) {
    let n = h.rows();
    let full = h.grank_without(None, Some(j)) == n;
    let drops_twice = n >= 2 && h.grank_without(Some(i), Some(j)) == n - 2;
    // the two branches cannot hold simultaneously: deleting a row from a
    // full-grank submatrix loses at most one
    assert!(!(full && drops_twice), "rank branches must be mutually exclusive");
    if full {
        (true, ZeroModeBranch::FullRankWithoutColumn)
    } else if drops_twice {
        (true, ZeroModeBranch::RankDropsTwice)
    } else {
        (false, ZeroModeBranch::Neither)
    }
}

/// The index set I*_j: rows that can carry a nonzero entry of a left null
/// vector of H̄[J_n, J_{n+1}∖{j}]. Empty when that submatrix has grank n.
pub fn zero_mode_index_set(h: &Pattern, j: usize) -> Vec<usize> {
    let n = h.rows();
    let r_j = h.grank_without(None, Some(j));
    if r_j == n {
        return Vec::new();
    }
    debug_assert_eq!(r_j, n - 1, "structurally controllable pair loses at most one");
    (1..=n).filter(|&i| h.grank_without(Some(i), Some(j)) == n - 1).collect()
}

/// γ statistics of one DM component viewed as a weighted bipartite graph.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct GammaInfo {
    pub gamma_min: u64,
    pub gamma_max: u64,
    pub has_self_loop: bool,
    pub nz: bool,
}

/// γ_nz of a component: 1 iff γ_max − γ_min > 0 or the component contains a
/// self-loop (its determinant then has a nonzero root generically).
pub fn gamma_nz(component: &BipartiteGraph) -> GammaInfo {
    let (_, gamma_min) = extreme_weight_max_matching(component, Sense::Min);
    let (_, gamma_max) = extreme_weight_max_matching(component, Sense::Max);
    let has_self_loop = component.has_self_loop();
    GammaInfo { gamma_min, gamma_max, has_self_loop, nz: gamma_max > gamma_min || has_self_loop }
}

/// One DM component of the pencil, reported in original 1-based ids.
#[derive(Clone, Debug, Serialize)]
pub struct TraceComponent {
    /// State rows x_i (1-based).
    pub rows: Vec<usize>,
    /// Original column ids (1-based; n+1 is the input column).
    pub cols: Vec<usize>,
    pub gamma: GammaInfo,
}

/// Everything the checker derived while testing one perturbed entry.
#[derive(Clone, Debug, Serialize)]
pub struct EdgeCheckTrace {
    /// Entry position (i, j) in F̄, 1-based.
    pub edge: (usize, usize),
    pub zero_mode_ok: bool,
    pub zero_mode_branch: ZeroModeBranch,
    /// DM components of the pencil without column j, block order.
    pub components: Vec<TraceComponent>,
    /// 1-based component index of row i.
    pub i_star: usize,
    /// 1-based position of row i inside component i*.
    pub i_bar: usize,
    /// Ω_j: components k ≤ i* whose determinant has a nonzero root.
    pub omega: Vec<usize>,
    /// Component k certifying a nonzero-mode attack, if any.
    pub offending: Option<usize>,
    pub passes: bool,
}

/// Decision outcome. "Not structurally controllable" is kept distinct from
/// PTSC/PSSC since both notions presuppose structural controllability.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "verdict")]
pub enum Verdict {
    #[serde(rename = "PTSC")]
    Ptsc,
    #[serde(rename = "PSSC")]
    Pssc {
        /// First failing entry in (j, i)-lexicographic order.
        edge: (usize, usize),
    },
    #[serde(rename = "not structurally controllable")]
    NotStructurallyControllable,
}

impl Verdict {
    pub fn is_pssc(&self) -> bool {
        matches!(self, Verdict::Pssc { .. })
    }

    pub fn is_ptsc(&self) -> bool {
        matches!(self, Verdict::Ptsc)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    #[serde(flatten)]
    pub verdict: Verdict,
    pub traces: Vec<EdgeCheckTrace>,
}

/// Builds the weighted graph used by the nonzero-mode test for component pair
/// (k, i*): rows of components k..=i* minus row `skip` (0-based), columns of
/// components k..=i*, weight 1 exactly on edges internal to component k.
fn span_graph(
    pencil: &BipartiteGraph,
    dm: &DmDecomposition,
    k: usize,
    i_star: usize,
    skip_row: usize,
) -> bigraph::InducedSubgraph {
    let mut rows = Vec::new();
    let mut cols = Vec::new();
    for comp in &dm.components[k..=i_star] {
        rows.extend(comp.rows.iter().copied().filter(|&r| r != skip_row));
        cols.extend(comp.cols.iter().copied());
    }
    let comp_k = &dm.components[k];
    bigraph::induced_subgraph(pencil, &rows, &cols, |e| {
        (comp_k.rows.contains(&e.left) && comp_k.cols.contains(&e.right)) as u8
    })
}

/// Literal nonzero-mode test for one k: the minimum weight among maximum
/// matchings of the (k, i*) span graph, compared against |V⁺_k|.
fn span_attack(
    pencil: &BipartiteGraph,
    dm: &DmDecomposition,
    k: usize,
    i_star: usize,
    skip_row: usize,
) -> bool {
    let sub = span_graph(pencil, dm, k, i_star, skip_row);
    let (matching, weight) = extreme_weight_max_matching(&sub.graph, Sense::Min);
    // the span loses exactly one row, and its columns stay saturatable
    debug_assert_eq!(matching.size, sub.rows.len());
    weight < dm.components[k].rows.len() as u64
}

/// Nonzero-mode existence: some k ∈ Ω_j lets a maximum matching avoid
/// saturating component k's columns. Returns the 1-based offending k.
///
/// When i* itself is in Ω_j the answer is immediate: deleting row i from its
/// own component leaves that component's columns short by one.
pub fn nonzero_mode_exists(
    pencil: &BipartiteGraph,
    dm: &DmDecomposition,
    omega: &[usize],
    i_star: usize,
    row_i: usize,
) -> Option<usize> {
    if omega.contains(&i_star) {
        debug_assert!(span_attack(pencil, dm, i_star - 1, i_star - 1, row_i));
        return Some(i_star);
    }
    omega
        .iter()
        .copied()
        .find(|&k| span_attack(pencil, dm, k - 1, i_star - 1, row_i))
}

/// Runs both tests for the perturbed entry `e = (i, j)` against the merged
/// pair [A̅, b̅] ∨ F̅ with `e` removed.
pub fn check_edge(sys: &SystemPattern, f: &PerturbStructure, e: (usize, usize)) -> Result<EdgeCheckTrace> {
    if sys.m() != 1 {
        return Err(PtscError::NotSingleInput(sys.m()));
    }
    let (i, j) = e;
    let merged = sys.merged_with(&f.pattern().without_entry(i, j))?;
    if !sctrl::is_structurally_controllable(&merged) {
        return Err(PtscError::NotStructurallyControllable);
    }
    let n = sys.n();
    let h = merged.ab();

    let (zero_mode_ok, zero_mode_branch) = zero_mode_blocked(h, i, j);

    let pencil = pencil_without_column(h, j);
    let dm = dm_decompose(&pencil.graph);
    assert_eq!(dm.matching.size, n, "pencil keeps full matching under any column deletion");
    assert!(!dm.has_tails(), "full matching leaves no DM tails");

    let i_star = dm.component_of_row(i - 1).expect("row lives in a consistent component") + 1;
    let i_bar = dm.components[i_star - 1].rows.iter().position(|&r| r == i - 1).unwrap() + 1;

    let mut components = Vec::with_capacity(dm.components.len());
    for comp in &dm.components {
        let sub = bigraph::induced_subgraph(&pencil.graph, &comp.rows, &comp.cols, |e| e.weight);
        components.push(TraceComponent {
            rows: comp.rows.iter().map(|&r| r + 1).collect(),
            cols: comp.cols.iter().map(|&c| pencil.col_ids[c]).collect(),
            gamma: gamma_nz(&sub.graph),
        });
    }
    let omega: Vec<usize> = (1..=i_star).filter(|&k| components[k - 1].gamma.nz).collect();

    // computed even when the zero mode already fails, so traces are complete
    let offending = nonzero_mode_exists(&pencil.graph, &dm, &omega, i_star, i - 1);

    Ok(EdgeCheckTrace {
        edge: e,
        zero_mode_ok,
        zero_mode_branch,
        components,
        i_star,
        i_bar,
        omega,
        offending,
        passes: zero_mode_ok && offending.is_none(),
    })
}

/// Full PTSC decision. Edges are visited in (j, i)-lexicographic order; with
/// `full_trace` every edge is evaluated, otherwise the scan stops at the
/// first failure.
pub fn check(sys: &SystemPattern, f: &PerturbStructure, full_trace: bool) -> Result<CheckReport> {
    if sys.m() != 1 {
        return Err(PtscError::NotSingleInput(sys.m()));
    }
    if !sctrl::is_structurally_controllable(sys) {
        return Ok(CheckReport { verdict: Verdict::NotStructurallyControllable, traces: Vec::new() });
    }
    let mut traces = Vec::new();
    let mut failing: Option<(usize, usize)> = None;
    for e in f.edges_colwise() {
        let trace = check_edge(sys, f, e)?;
        let passed = trace.passes;
        traces.push(trace);
        if !passed {
            failing.get_or_insert(e);
            if !full_trace {
                break;
            }
        }
    }
    let verdict = match failing {
        Some(edge) => Verdict::Pssc { edge },
        None => Verdict::Ptsc,
    };
    Ok(CheckReport { verdict, traces })
}

/// Algorithm entry point: PTSC iff structurally controllable and every
/// perturbed entry passes both tests. An empty F̄ is vacuously PTSC.
pub fn is_ptsc(sys: &SystemPattern, f: &PerturbStructure) -> Result<Verdict> {
    Ok(check(sys, f, false)?.verdict)
}
