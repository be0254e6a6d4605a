//! Sufficient PSSC certificates for multi-input systems.
//!
//! Both conditions pick a column subset K, treat the perturbed entries inside
//! K as generic, and ask whether every column outside K can be forced into
//! the left null space of the selected submatrix: condition c1 through a rank
//! argument at λ = 0, condition c2 through the pencil decomposition at a
//! nonzero mode. Either one certifies PSSC; neither failing proves nothing.

use serde::Serialize;

use crate::bigraph::{self, dm_decompose, BipartiteGraph};
use crate::error::{PtscError, Result};
use crate::pattern::{Pattern, PerturbStructure, SystemPattern};
use crate::ptsc1::{self, gamma_nz};
use crate::sctrl;

/// Outcome of testing one condition for one column subset.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CondResult {
    /// The precondition on K failed; nothing was decided.
    NotApplicable,
    Holds,
    Fails,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CertCondition {
    C1,
    C2,
}

/// Tri-state certification result. `Unknown` is honest output: the
/// conditions are sufficient only.
#[derive(Clone, Debug, Serialize)]
pub enum MultiOutcome {
    PsscCertified { k: Vec<usize>, condition: CertCondition },
    Unknown { evaluated: usize, budget_exhausted: bool },
}

impl MultiOutcome {
    pub fn is_certified(&self) -> bool {
        matches!(self, MultiOutcome::PsscCertified { .. })
    }
}

fn grank_cols(p: &Pattern, cols: &[usize], skip_row: Option<usize>) -> usize {
    let pairs: Vec<(usize, usize)> = cols
        .iter()
        .enumerate()
        .flat_map(|(pos, &c)| {
            p.column_support(c).into_iter().filter(|&r| Some(r) != skip_row).map(move |r| (r - 1, pos))
        })
        .collect();
    let g = BipartiteGraph::unweighted(p.rows(), cols.len(), &pairs).expect("valid submatrix graph");
    bigraph::max_matching(&g).size
}

fn validate_k(sys: &SystemPattern, k: &[usize], want: usize) -> Result<()> {
    let total = sys.n() + sys.m();
    if k.len() != want {
        return Err(PtscError::InvalidPattern(format!(
            "column selection must have {want} columns, got {}",
            k.len()
        )));
    }
    let mut sorted = k.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != k.len() || sorted.iter().any(|&c| c < 1 || c > total) {
        return Err(PtscError::InvalidPattern("column selection must be distinct ids in 1..=n+m".into()));
    }
    Ok(())
}

/// Rows whose deletion keeps grank(H̄_f[J_n, K]) at n−1: the candidate
/// nonzero positions of a left null vector of the K-submatrix.
pub fn null_support_set(h_f: &Pattern, k: &[usize]) -> Vec<usize> {
    (1..=h_f.rows()).filter(|&i| grank_cols(h_f, k, Some(i)) == h_f.rows() - 1).collect()
}

/// Condition c1 (zero-mode certificate) for a given K with |K| = n−1:
/// applicable when grank(H̄_f[J_n, K]) = n−1, and it holds when every column
/// j ∉ K either misses the null support entirely or carries a perturbed
/// entry inside it.
pub fn condition_c1(sys: &SystemPattern, f: &PerturbStructure, k: &[usize]) -> Result<CondResult> {
    let n = sys.n();
    validate_k(sys, k, n - 1)?;
    let h_f = sys.ab().or_join(f.pattern())?;
    if grank_cols(&h_f, k, None) != n - 1 {
        return Ok(CondResult::NotApplicable);
    }
    let null_support = null_support_set(&h_f, k);
    let in_k = |j: usize| k.contains(&j);
    for j in (1..=sys.n() + sys.m()).filter(|&j| !in_k(j)) {
        let hits_system = sys.ab().column_support(j).iter().any(|r| null_support.contains(r));
        let has_perturbed = f.pattern().column_support(j).iter().any(|r| null_support.contains(r));
        if hits_system && !has_perturbed {
            return Ok(CondResult::Fails);
        }
    }
    Ok(CondResult::Holds)
}

/// Condition c2 (nonzero-mode certificate) for a given K with |K| = n:
/// applicable when the pencil on the K-columns keeps a full matching, and it
/// holds when every column j ∉ K has a perturbed row whose component test
/// certifies a nonzero root reaching it.
pub fn condition_c2(sys: &SystemPattern, f: &PerturbStructure, k: &[usize]) -> Result<CondResult> {
    let n = sys.n();
    validate_k(sys, k, n)?;
    let h_f = sys.ab().or_join(f.pattern())?;
    let pencil = ptsc1::build_pencil_bigraph(&h_f, k);
    let dm = dm_decompose(&pencil.graph);
    if dm.matching.size != n {
        return Ok(CondResult::NotApplicable);
    }
    debug_assert!(!dm.has_tails());

    let gammas: Vec<bool> = dm
        .components
        .iter()
        .map(|comp| {
            let sub = bigraph::induced_subgraph(&pencil.graph, &comp.rows, &comp.cols, |e| e.weight);
            gamma_nz(&sub.graph).nz
        })
        .collect();

    let in_k = |j: usize| k.contains(&j);
    for j in (1..=sys.n() + sys.m()).filter(|&j| !in_k(j)) {
        let witnessed = f.pattern().column_support(j).iter().any(|&i| {
            let i_star = dm.component_of_row(i - 1).expect("no tails") + 1;
            let omega: Vec<usize> = (1..=i_star).filter(|&kk| gammas[kk - 1]).collect();
            ptsc1::nonzero_mode_exists(&pencil.graph, &dm, &omega, i_star, i - 1).is_some()
        });
        if !witnessed {
            return Ok(CondResult::Fails);
        }
    }
    Ok(CondResult::Holds)
}

/// Lexicographic k-combinations of 1..=pool, resumable.
pub(crate) struct Combinations {
    pool: usize,
    cur: Vec<usize>,
    started: bool,
}

impl Combinations {
    pub(crate) fn new(pool: usize, k: usize) -> Self {
        Combinations { pool, cur: (1..=k).collect(), started: false }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        let k = self.cur.len();
        if k > self.pool {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(self.cur.clone());
        }
        // advance the rightmost index that can still move
        let mut idx = k;
        loop {
            if idx == 0 {
                return None;
            }
            idx -= 1;
            if self.cur[idx] < self.pool - (k - 1 - idx) {
                self.cur[idx] += 1;
                for t in idx + 1..k {
                    self.cur[t] = self.cur[t - 1] + 1;
                }
                return Some(self.cur.clone());
            }
        }
    }
}

/// Candidate subsets: matching-guided seeds first (subsets of the columns a
/// maximum matching of H̄_f touches), then plain lexicographic enumeration.
fn candidates(h_f: &Pattern, size: usize, budget: usize) -> Vec<Vec<usize>> {
    let matching = bigraph::max_matching(&h_f.to_bigraph());
    let mut matched_cols: Vec<usize> = matching
        .left_to_right
        .iter()
        .filter_map(|c| c.map(|c| c + 1))
        .collect();
    matched_cols.sort_unstable();
    let mut out: Vec<Vec<usize>> = Vec::new();
    if matched_cols.len() >= size {
        for drop_set in Combinations::new(matched_cols.len(), matched_cols.len() - size) {
            let k: Vec<usize> = matched_cols
                .iter()
                .enumerate()
                .filter(|(pos, _)| !drop_set.contains(&(pos + 1)))
                .map(|(_, &c)| c)
                .collect();
            out.push(k);
            if out.len() >= budget {
                return out;
            }
        }
    }
    let seeds = out.len();
    for k in Combinations::new(h_f.cols(), size) {
        if !out[..seeds].contains(&k) {
            out.push(k);
            if out.len() >= budget {
                break;
            }
        }
    }
    out
}

/// Tries condition c1 over K ∈ J^{n−1}_{n+m} and condition c2 over
/// K ∈ J^{n}_{n+m}, stopping at the first certificate or when `budget`
/// condition evaluations have been spent.
pub fn is_pssc_sufficient(
    sys: &SystemPattern,
    f: &PerturbStructure,
    budget: usize,
) -> Result<MultiOutcome> {
    if !sctrl::is_structurally_controllable(sys) {
        return Err(PtscError::NotStructurallyControllable);
    }
    let h_f = sys.ab().or_join(f.pattern())?;
    let n = sys.n();
    let mut evaluated = 0usize;

    if f.pattern().num_entries() > 0 {
        for k in candidates(&h_f, n - 1, budget.saturating_sub(evaluated)) {
            evaluated += 1;
            if condition_c1(sys, f, &k)? == CondResult::Holds {
                return Ok(MultiOutcome::PsscCertified { k, condition: CertCondition::C1 });
            }
            if evaluated >= budget {
                return Ok(MultiOutcome::Unknown { evaluated, budget_exhausted: true });
            }
        }
    }
    if f.pattern().num_entries() > 0 {
        for k in candidates(&h_f, n, budget.saturating_sub(evaluated)) {
            evaluated += 1;
            if condition_c2(sys, f, &k)? == CondResult::Holds {
                return Ok(MultiOutcome::PsscCertified { k, condition: CertCondition::C2 });
            }
            if evaluated >= budget {
                return Ok(MultiOutcome::Unknown { evaluated, budget_exhausted: true });
            }
        }
    }
    Ok(MultiOutcome::Unknown { evaluated, budget_exhausted: false })
}
