//! Structural controllability: input-reachability plus generic rank n.

use std::collections::VecDeque;

use crate::pattern::SystemPattern;

/// Directed system graph on vertices x_1..x_{n+m} (states first, then
/// inputs), as adjacency lists of 0-based vertex ids. An edge x_i → x_j
/// exists iff [A̅, B̅]_{j,i} is nonzero (j ≤ n).
pub fn system_digraph(sys: &SystemPattern) -> Vec<Vec<usize>> {
    let total = sys.n() + sys.m();
    let mut adj = vec![Vec::new(); total];
    for &(i, j) in sys.ab().entries() {
        // entry (i, j): edge from vertex x_j to state x_i
        adj[j - 1].push(i - 1);
    }
    for outs in &mut adj {
        outs.sort_unstable();
        outs.dedup();
    }
    adj
}

/// State vertices (1-based) not reachable from any input; empty means the
/// input-reachability condition holds.
pub fn input_reachable(sys: &SystemPattern) -> Vec<usize> {
    let adj = system_digraph(sys);
    let n = sys.n();
    let mut seen = vec![false; n + sys.m()];
    let mut q: VecDeque<usize> = (n..n + sys.m()).collect();
    for &u in &q {
        seen[u] = true;
    }
    while let Some(u) = q.pop_front() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                q.push_back(v);
            }
        }
    }
    (0..n).filter(|&v| !seen[v]).map(|v| v + 1).collect()
}

/// Every state vertex is input-reachable and grank([A̅, B̅]) = n.
pub fn is_structurally_controllable(sys: &SystemPattern) -> bool {
    input_reachable(sys).is_empty() && sys.ab().grank() == sys.n()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::Pattern;

    fn example1() -> SystemPattern {
        let ab = Pattern::new(4, 5, [(2, 1), (3, 2), (4, 1), (4, 2), (4, 4), (1, 5)]).unwrap();
        SystemPattern::from_pattern(ab).unwrap()
    }

    #[test]
    fn full_b_column_reaches_everything() {
        let ab = Pattern::new(3, 4, [(1, 4), (2, 4), (3, 4)]).unwrap();
        let sys = SystemPattern::from_pattern(ab).unwrap();
        assert!(input_reachable(&sys).is_empty());
    }

    #[test]
    fn isolated_state_is_reported() {
        // x2 has no in-edges at all
        let ab = Pattern::new(2, 3, [(1, 3)]).unwrap();
        let sys = SystemPattern::from_pattern(ab).unwrap();
        assert_eq!(input_reachable(&sys), vec![2]);
    }

    #[test]
    fn example1_is_structurally_controllable() {
        let sys = example1();
        assert!(input_reachable(&sys).is_empty());
        assert!(is_structurally_controllable(&sys));
    }

    #[test]
    fn single_state_single_input() {
        let ab = Pattern::new(1, 2, [(1, 2)]).unwrap();
        let sys = SystemPattern::from_pattern(ab).unwrap();
        assert!(is_structurally_controllable(&sys));
    }

    #[test]
    fn removing_the_input_breaks_it() {
        let ab = Pattern::new(4, 5, [(2, 1), (3, 2), (4, 1), (4, 2), (4, 4)]).unwrap();
        let sys = SystemPattern::from_pattern(ab).unwrap();
        assert_eq!(input_reachable(&sys), vec![1, 2, 3, 4]);
        assert!(!is_structurally_controllable(&sys));
    }

    #[test]
    fn monotone_under_entry_addition() {
        let sys = example1();
        let grown = sys.ab().or_join(&Pattern::new(4, 5, [(1, 1), (2, 3)]).unwrap()).unwrap();
        let grown = SystemPattern::from_pattern(grown).unwrap();
        assert!(is_structurally_controllable(&grown));
    }
}
