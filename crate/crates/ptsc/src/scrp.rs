//! Applications: feasibility screening for structured controllability radius
//! problems, and the minimal vulnerable-edge-set search.
//!
//! A PSSC verdict means a structured perturbation destroying controllability
//! generically exists, so the radius problem is generically feasible; for
//! single-input PTSC pairs it is infeasible for every controllable
//! realization.

use serde::Serialize;

use crate::error::{PtscError, Result};
use crate::mptsc::{self, MultiOutcome};
use crate::pattern::{Pattern, PerturbStructure, SystemPattern};
use crate::ptsc1::{self, Verdict};
use crate::sctrl;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Feasibility {
    /// A structured perturbation destroying controllability exists for
    /// almost all controllable realizations.
    #[serde(rename = "generically feasible")]
    GenericallyFeasible,
    /// Single-input PTSC: no structured perturbation works, for any
    /// controllable realization.
    #[serde(rename = "infeasible for every controllable realization")]
    InfeasibleForAllControllable,
    /// The sufficient multi-input conditions were inconclusive.
    #[serde(rename = "undetermined")]
    Undetermined,
}

#[derive(Clone, Debug, Serialize)]
pub struct FeasibilityReport {
    pub feasibility: Feasibility,
    pub verdict: Option<Verdict>,
    pub multi: Option<MultiOutcome>,
    pub statement: String,
}

/// Decides generic feasibility of the radius problem for (sys, f): the exact
/// single-input checker when m = 1, the sufficient certificates otherwise.
pub fn scrp_feasibility(sys: &SystemPattern, f: &PerturbStructure, budget: usize) -> Result<FeasibilityReport> {
    if sys.m() == 1 {
        let verdict = ptsc1::is_ptsc(sys, f)?;
        let (feasibility, statement) = match &verdict {
            Verdict::Pssc { .. } => (
                Feasibility::GenericallyFeasible,
                "a structured perturbation destroying controllability exists for almost all \
                 controllable realizations"
                    .to_string(),
            ),
            Verdict::Ptsc => (
                Feasibility::InfeasibleForAllControllable,
                "no structured perturbation can destroy controllability of any controllable \
                 realization"
                    .to_string(),
            ),
            Verdict::NotStructurallyControllable => (
                Feasibility::Undetermined,
                "the pair is not structurally controllable; the radius question is void".to_string(),
            ),
        };
        return Ok(FeasibilityReport { feasibility, verdict: Some(verdict), multi: None, statement });
    }
    let multi = mptsc::is_pssc_sufficient(sys, f, budget)?;
    let (feasibility, statement) = match &multi {
        MultiOutcome::PsscCertified { .. } => (
            Feasibility::GenericallyFeasible,
            "a certified structured perturbation destroys controllability for almost all \
             controllable realizations"
                .to_string(),
        ),
        MultiOutcome::Unknown { .. } => (
            Feasibility::Undetermined,
            "the sufficient certificates were inconclusive; feasibility is undetermined".to_string(),
        ),
    };
    Ok(FeasibilityReport { feasibility, verdict: None, multi: Some(multi), statement })
}

#[derive(Clone, Debug, Serialize)]
pub struct MinSupportReport {
    /// Smallest cardinality of a PSSC sub-support, when one was found.
    pub minimum: Option<usize>,
    /// All minimum-cardinality PSSC supports found within budget.
    pub supports: Vec<Vec<(usize, usize)>>,
    pub evaluated: usize,
    pub budget_exhausted: bool,
    /// Exact for single input; certified upper bound otherwise.
    pub exact: bool,
    /// Every reported support re-verified minimal (no strict subset is PSSC).
    pub minimality_verified: bool,
}

fn subset_is_pssc(sys: &SystemPattern, entries: &[(usize, usize)]) -> Result<bool> {
    let fp = Pattern::new(sys.n(), sys.n() + sys.m(), entries.iter().copied())?;
    let fs = PerturbStructure::new(sys, fp)?;
    if sys.m() == 1 {
        Ok(ptsc1::is_ptsc(sys, &fs)?.is_pssc())
    } else {
        Ok(mptsc::is_pssc_sufficient(sys, &fs, 10_000)?.is_certified())
    }
}

/// Breadth-first search over sub-supports of F̄ by cardinality 1, 2, ...;
/// single-input monotonicity (a superset of a vulnerable support stays
/// vulnerable) makes the first hit level exactly optimal.
pub fn min_pssc_support(
    sys: &SystemPattern,
    f: &PerturbStructure,
    budget: usize,
) -> Result<MinSupportReport> {
    if !sctrl::is_structurally_controllable(sys) {
        return Err(PtscError::NotStructurallyControllable);
    }
    let entries = f.pattern().entries().to_vec();
    let mut evaluated = 0usize;
    let mut found: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut budget_exhausted = false;

    'levels: for size in 1..=entries.len() {
        for idx in mptsc::Combinations::new(entries.len(), size) {
            if evaluated >= budget {
                budget_exhausted = true;
                break 'levels;
            }
            evaluated += 1;
            let subset: Vec<(usize, usize)> = idx.iter().map(|&p| entries[p - 1]).collect();
            if subset_is_pssc(sys, &subset)? {
                found.push(subset);
            }
        }
        if !found.is_empty() {
            break;
        }
    }

    let minimum = found.first().map(|s| s.len());
    // minimality check: no strict subset of a reported support is PSSC
    let mut minimality_verified = !found.is_empty();
    for s in &found {
        for drop in 0..s.len() {
            let sub: Vec<(usize, usize)> =
                s.iter().enumerate().filter(|&(t, _)| t != drop).map(|(_, &e)| e).collect();
            if !sub.is_empty() && subset_is_pssc(sys, &sub)? {
                minimality_verified = false;
            }
        }
    }
    Ok(MinSupportReport {
        minimum,
        supports: found,
        evaluated,
        budget_exhausted,
        exact: sys.m() == 1,
        minimality_verified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example1() -> SystemPattern {
        let ab = Pattern::new(4, 5, [(2, 1), (3, 2), (4, 1), (4, 2), (4, 4), (1, 5)]).unwrap();
        SystemPattern::from_pattern(ab).unwrap()
    }

    fn perturb(sys: &SystemPattern, entries: &[(usize, usize)]) -> PerturbStructure {
        let f = Pattern::new(sys.n(), sys.n() + sys.m(), entries.iter().copied()).unwrap();
        PerturbStructure::new(sys, f).unwrap()
    }

    #[test]
    fn feasibility_wording() {
        let sys = example1();
        let r1 = scrp_feasibility(&sys, &perturb(&sys, &[(1, 3), (1, 4)]), 1000).unwrap();
        assert_eq!(r1.feasibility, Feasibility::InfeasibleForAllControllable);
        let r2 = scrp_feasibility(&sys, &perturb(&sys, &[(3, 3), (4, 5)]), 1000).unwrap();
        assert_eq!(r2.feasibility, Feasibility::GenericallyFeasible);
        let r0 = scrp_feasibility(&sys, &perturb(&sys, &[]), 1000).unwrap();
        assert_eq!(r0.feasibility, Feasibility::InfeasibleForAllControllable);
    }

    #[test]
    fn min_support_within_f2() {
        let sys = example1();
        let f2 = perturb(&sys, &[(3, 3), (4, 5)]);
        let rep = min_pssc_support(&sys, &f2, 10_000).unwrap();
        assert_eq!(rep.minimum, Some(1));
        // both singletons are vulnerable on their own
        assert_eq!(rep.supports, vec![vec![(3, 3)], vec![(4, 5)]]);
        assert!(rep.minimality_verified);
        assert!(rep.exact);
    }

    #[test]
    fn min_support_none_within_f1() {
        let sys = example1();
        let f1 = perturb(&sys, &[(1, 3), (1, 4)]);
        let rep = min_pssc_support(&sys, &f1, 10_000).unwrap();
        assert_eq!(rep.minimum, None);
        assert!(rep.supports.is_empty());
    }

    #[test]
    fn min_support_full_pattern_is_one() {
        let sys = example1();
        let full = perturb(&sys, &Pattern::full(4, 5).entries().to_vec());
        let rep = min_pssc_support(&sys, &full, 10_000).unwrap();
        assert_eq!(rep.minimum, Some(1));
        assert!(rep.minimality_verified);
    }

    #[test]
    fn budget_exhaustion_is_flagged() {
        let sys = example1();
        let f1 = perturb(&sys, &[(1, 3), (1, 4)]);
        let rep = min_pssc_support(&sys, &f1, 1).unwrap();
        assert!(rep.budget_exhausted);
    }
}
