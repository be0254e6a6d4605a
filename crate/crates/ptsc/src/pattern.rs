//! Structured {0,*} matrices and the system/perturbation pattern model.
//!
//! Indices are 1-based throughout the public surface, matching the usual
//! J_p = {1,...,p} convention for structured systems. A pattern only records
//! which entries are free (`*`); numeric realizations live in [`crate::oracle`].

use serde::{Deserialize, Serialize};

use crate::bigraph::{self, BipartiteGraph};
use crate::error::{PtscError, Result};

/// A sparsity pattern: entries are either fixed zeros or free (`*`) entries.
///
/// The support is kept as a sorted, deduplicated edge list so that equal
/// patterns serialize byte-identically.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PatternRepr", into = "PatternRepr")]
pub struct Pattern {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize)>,
}

/// Wire form: `{"rows": n, "cols": c, "entries": [[i, j], ...]}` (1-based).
#[derive(Serialize, Deserialize)]
struct PatternRepr {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize)>,
}

impl TryFrom<PatternRepr> for Pattern {
    type Error = PtscError;
    fn try_from(r: PatternRepr) -> Result<Self> {
        Pattern::new(r.rows, r.cols, r.entries)
    }
}

impl From<Pattern> for PatternRepr {
    fn from(p: Pattern) -> Self {
        PatternRepr { rows: p.rows, cols: p.cols, entries: p.entries }
    }
}

impl std::fmt::Debug for Pattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Pattern({}x{}, {:?})", self.rows, self.cols, self.entries)
    }
}

impl Pattern {
    /// Builds a pattern, sorting and deduplicating the support.
    pub fn new(rows: usize, cols: usize, entries: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut entries: Vec<(usize, usize)> = entries.into_iter().collect();
        entries.sort_unstable();
        entries.dedup();
        for &(i, j) in &entries {
            if i < 1 || i > rows || j < 1 || j > cols {
                return Err(PtscError::InvalidPattern(format!(
                    "entry ({i}, {j}) outside a {rows}x{cols} pattern"
                )));
            }
        }
        Ok(Pattern { rows, cols, entries })
    }

    pub fn empty(rows: usize, cols: usize) -> Self {
        Pattern { rows, cols, entries: Vec::new() }
    }

    /// Full pattern: every entry is `*`.
    pub fn full(rows: usize, cols: usize) -> Self {
        let entries = (1..=rows).flat_map(|i| (1..=cols).map(move |j| (i, j))).collect();
        Pattern { rows, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Sorted support, 1-based `(row, col)` pairs.
    pub fn entries(&self) -> &[(usize, usize)] {
        &self.entries
    }

    pub fn num_entries(&self) -> usize {
        self.entries.len()
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.entries.binary_search(&(i, j)).is_ok()
    }

    /// Rows supporting column `j`, ascending.
    pub fn column_support(&self, j: usize) -> Vec<usize> {
        self.entries.iter().filter(|&&(_, c)| c == j).map(|&(r, _)| r).collect()
    }

    fn check_same_dims(&self, other: &Pattern) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(PtscError::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    /// Entry-wise OR of two patterns of equal dimensions.
    pub fn or_join(&self, other: &Pattern) -> Result<Pattern> {
        self.check_same_dims(other)?;
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Pattern::new(self.rows, self.cols, entries)
    }

    /// True iff every `*` of `self` is a `*` of `other`.
    pub fn is_subset(&self, other: &Pattern) -> Result<bool> {
        self.check_same_dims(other)?;
        Ok(self.entries.iter().all(|&(i, j)| other.contains(i, j)))
    }

    /// Pattern with one entry removed (no-op when absent).
    pub fn without_entry(&self, i: usize, j: usize) -> Pattern {
        let entries = self.entries.iter().copied().filter(|&e| e != (i, j)).collect();
        Pattern { rows: self.rows, cols: self.cols, entries }
    }

    /// Pattern holding exactly one entry of `self`.
    pub fn only_entry(&self, i: usize, j: usize) -> Result<Pattern> {
        if !self.contains(i, j) {
            return Err(PtscError::InvalidPattern(format!("({i}, {j}) is not in the support")));
        }
        Ok(Pattern { rows: self.rows, cols: self.cols, entries: vec![(i, j)] })
    }

    /// Bipartite graph of the pattern: left = rows, right = columns, 0-based.
    pub fn to_bigraph(&self) -> BipartiteGraph {
        let pairs: Vec<(usize, usize)> = self.entries.iter().map(|&(i, j)| (i - 1, j - 1)).collect();
        BipartiteGraph::unweighted(self.rows, self.cols, &pairs).expect("pattern support is a valid bipartite graph")
    }

    /// Generic rank: the maximum-matching size of the associated bipartite graph.
    pub fn grank(&self) -> usize {
        bigraph::max_matching(&self.to_bigraph()).size
    }

    /// Generic rank of the submatrix with one optional row and column deleted (1-based).
    pub fn grank_without(&self, skip_row: Option<usize>, skip_col: Option<usize>) -> usize {
        let pairs: Vec<(usize, usize)> = self
            .entries
            .iter()
            .filter(|&&(i, j)| Some(i) != skip_row && Some(j) != skip_col)
            .map(|&(i, j)| (i - 1, j - 1))
            .collect();
        let g = BipartiteGraph::unweighted(self.rows, self.cols, &pairs).expect("valid subgraph");
        bigraph::max_matching(&g).size
    }
}

/// A structured pair (A̅, B̅): `ab` has `n` rows and `n + m` columns,
/// columns 1..=n forming A̅ and columns n+1..=n+m forming B̅.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemPattern {
    n: usize,
    m: usize,
    ab: Pattern,
}

impl SystemPattern {
    pub fn new(n: usize, m: usize, ab: Pattern) -> Result<Self> {
        if n < 1 || m < 1 {
            return Err(PtscError::InvalidPattern(format!("need n >= 1 and m >= 1, got n = {n}, m = {m}")));
        }
        if ab.rows() != n || ab.cols() != n + m {
            return Err(PtscError::DimensionMismatch(format!(
                "system pattern must be {n}x{}, got {}x{}",
                n + m,
                ab.rows(),
                ab.cols()
            )));
        }
        Ok(SystemPattern { n, m, ab })
    }

    /// Infers `n = rows` and `m = cols - rows` from a plain pattern.
    pub fn from_pattern(ab: Pattern) -> Result<Self> {
        if ab.cols() <= ab.rows() {
            return Err(PtscError::InvalidPattern(format!(
                "a system pattern needs cols > rows, got {}x{}",
                ab.rows(),
                ab.cols()
            )));
        }
        let (n, m) = (ab.rows(), ab.cols() - ab.rows());
        SystemPattern::new(n, m, ab)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn ab(&self) -> &Pattern {
        &self.ab
    }

    /// The perturbed structured pair [A̅, B̅] ∨ F̅.
    pub fn merged_with(&self, f: &Pattern) -> Result<SystemPattern> {
        let ab = self.ab.or_join(f)?;
        SystemPattern::new(self.n, self.m, ab)
    }
}

/// A perturbation structure F̅ compatible with some system pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerturbStructure {
    f: Pattern,
}

impl PerturbStructure {
    pub fn new(sys: &SystemPattern, f: Pattern) -> Result<Self> {
        if f.rows() != sys.n() || f.cols() != sys.n() + sys.m() {
            return Err(PtscError::DimensionMismatch(format!(
                "perturbation must be {}x{}, got {}x{}",
                sys.n(),
                sys.n() + sys.m(),
                f.rows(),
                f.cols()
            )));
        }
        Ok(PerturbStructure { f })
    }

    pub fn pattern(&self) -> &Pattern {
        &self.f
    }

    /// Perturbed entries in lexicographic (j, i) order: column-major, the
    /// deterministic iteration order used by the checkers.
    pub fn edges_colwise(&self) -> Vec<(usize, usize)> {
        let mut es: Vec<(usize, usize)> = self.f.entries().to_vec();
        es.sort_unstable_by_key(|&(i, j)| (j, i));
        es
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force maximum matching size by recursion over rows.
    fn brute_matching(p: &Pattern) -> usize {
        fn go(rows: &[Vec<usize>], r: usize, used: &mut Vec<bool>) -> usize {
            if r == rows.len() {
                return 0;
            }
            // skip row r
            let mut best = go(rows, r + 1, used);
            for &c in &rows[r] {
                if !used[c] {
                    used[c] = true;
                    best = best.max(1 + go(rows, r + 1, used));
                    used[c] = false;
                }
            }
            best
        }
        let mut rows = vec![Vec::new(); p.rows()];
        for &(i, j) in p.entries() {
            rows[i - 1].push(j - 1);
        }
        go(&rows, 0, &mut vec![false; p.cols()])
    }

    pub(crate) fn example1_ab() -> Pattern {
        Pattern::new(4, 5, [(2, 1), (3, 2), (4, 1), (4, 2), (4, 4), (1, 5)]).unwrap()
    }

    pub(crate) fn example1_f1() -> Pattern {
        Pattern::new(4, 5, [(1, 3), (1, 4)]).unwrap()
    }

    pub(crate) fn example1_f2() -> Pattern {
        Pattern::new(4, 5, [(3, 3), (4, 5)]).unwrap()
    }

    #[test]
    fn or_join_disjoint_union() {
        let a = Pattern::new(1, 2, [(1, 1)]).unwrap();
        let b = Pattern::new(1, 2, [(1, 2)]).unwrap();
        let j = a.or_join(&b).unwrap();
        assert_eq!(j.entries(), &[(1, 1), (1, 2)]);
    }

    #[test]
    fn or_join_idempotent() {
        let m = example1_ab();
        assert_eq!(m.or_join(&m).unwrap(), m);
    }

    #[test]
    fn or_join_example1_f2_adds_two_entries() {
        let merged = example1_ab().or_join(&example1_f2()).unwrap();
        assert!(merged.contains(3, 3));
        assert!(merged.contains(4, 5));
        assert_eq!(merged.num_entries(), example1_ab().num_entries() + 2);
    }

    #[test]
    fn or_join_dimension_mismatch() {
        let a = Pattern::empty(2, 2);
        let b = Pattern::empty(2, 3);
        assert!(a.or_join(&b).is_err());
    }

    #[test]
    fn is_subset_basics() {
        let m = example1_ab();
        assert!(Pattern::empty(4, 5).is_subset(&m).unwrap());
        assert!(m.is_subset(&m).unwrap());
        let merged = m.or_join(&example1_f2()).unwrap();
        assert!(m.is_subset(&merged).unwrap());
        assert!(!merged.is_subset(&m).unwrap());
    }

    #[test]
    fn grank_trivia() {
        assert_eq!(Pattern::empty(3, 3).grank(), 0);
        let id = Pattern::new(3, 3, [(1, 1), (2, 2), (3, 3)]).unwrap();
        assert_eq!(id.grank(), 3);
    }

    #[test]
    fn grank_example1_matches_brute_force() {
        let h = example1_ab();
        assert_eq!(brute_matching(&h), 4);
        assert_eq!(h.grank(), 4);
    }

    #[test]
    fn grank_monotone_under_subset() {
        let m = example1_ab();
        let merged = m.or_join(&example1_f2()).unwrap();
        assert!(m.grank() <= merged.grank());
    }

    #[test]
    fn system_pattern_inference() {
        let sys = SystemPattern::from_pattern(example1_ab()).unwrap();
        assert_eq!((sys.n(), sys.m()), (4, 1));
        assert!(SystemPattern::from_pattern(Pattern::empty(3, 3)).is_err());
    }

    #[test]
    fn pattern_json_round_trip() {
        let m = example1_ab();
        let s = serde_json::to_string(&m).unwrap();
        let back: Pattern = serde_json::from_str(&s).unwrap();
        assert_eq!(m, back);
        // out-of-range entries are rejected at parse time
        let bad = r#"{"rows": 2, "cols": 2, "entries": [[3, 1]]}"#;
        assert!(serde_json::from_str::<Pattern>(bad).is_err());
    }
}
