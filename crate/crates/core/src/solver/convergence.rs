//! Finite-prefix check of pair convergence against a schedule.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hausdorff::MetricPair;

use super::rough::{rough_with, RoughIsometryCheck};
use super::{candidate_infimum, sorted_candidates, ConvergenceSchedule, NodeCounter, SearchBudget};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceEntry {
    pub index: usize,
    pub eps: f64,
    pub radius: f64,
    pub pass: bool,
    /// Smallest `ε < R` admitting a map at this radius, if any.
    pub min_eps: Option<f64>,
    /// False when `min_eps` is an infimum approached only from above.
    pub min_eps_attained: bool,
    /// Clause values of the map found at (or just above) `min_eps`,
    /// reported when the entry fails.
    pub clauses: Option<RoughIsometryCheck>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub entries: Vec<ConvergenceEntry>,
}

impl ConvergenceReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }
}

/// For each `i`, looks for `φ_i` on the closed `R_i`-ball of `A_i` with
/// distortion, subset-Hausdorff and covering clauses at `ε_i`.
pub fn verify_convergence(
    seq: &[MetricPair],
    target: &MetricPair,
    sched: &ConvergenceSchedule,
    budget: SearchBudget,
) -> Result<ConvergenceReport> {
    if seq.len() != sched.len() {
        return Err(Error::LengthMismatch(format!("{} pairs vs schedule of {}", seq.len(), sched.len())));
    }
    let mut counter = NodeCounter::new(budget);
    let mut entries = Vec::with_capacity(seq.len());
    for (i, p) in seq.iter().enumerate() {
        let (eps, radius) = (sched.eps_seq()[i], sched.radius_seq()[i]);
        let pass = eps < radius && rough_with(p, target, radius, eps, &mut counter)?.is_some();
        let candidates = candidates(p, target, radius);
        let inf = candidate_infimum(&candidates, f64::INFINITY, |e| rough_with(p, target, radius, e, &mut counter))?;
        let (min_eps, min_eps_attained, clauses) = match inf {
            None => (None, false, None),
            Some(inf) => {
                let clauses = if pass { None } else { Some(RoughIsometryCheck::evaluate(p, target, &inf.witness)?) };
                (Some(inf.value), inf.attained, clauses)
            }
        };
        entries.push(ConvergenceEntry { index: i, eps, radius, pass, min_eps, min_eps_attained, clauses });
    }
    Ok(ConvergenceReport { entries })
}

fn candidates(p: &MetricPair, q: &MetricPair, radius: f64) -> Vec<f64> {
    let (x, y) = (&p.space, &q.space);
    let mut c = Vec::new();
    for v in 0..y.len() {
        for w in v..y.len() {
            c.push(y.d(v, w));
            for u in 0..x.len() {
                for u2 in u..x.len() {
                    c.push((x.d(u, u2) - y.d(v, w)).abs());
                }
            }
        }
        c.push(radius - y.dist_to_subset(v, &q.a));
    }
    c.retain(|&e| e < radius);
    // one representative of the last open interval below R
    let last = c.iter().copied().filter(|&e| e > 0.0).fold(0.0, f64::max);
    c.push(0.5 * (last + radius));
    sorted_candidates(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{shortest_path_closure, FiniteMetricSpace, SubsetRef, WeightedGraph};

    fn pair(step: f64) -> MetricPair {
        let x = shortest_path_closure(&WeightedGraph::path(3, step).unwrap()).unwrap();
        MetricPair::new(x, SubsetRef::new(3, vec![0]).unwrap()).unwrap()
    }

    #[test]
    fn constant_sequence_passes() {
        let t = pair(1.0);
        let sched = ConvergenceSchedule::new(vec![0.5, 0.25, 0.125], vec![1.0, 2.0, 4.0]).unwrap();
        let r = verify_convergence(&[t.clone(), t.clone(), t.clone()], &t, &sched, SearchBudget::new(1_000_000)).unwrap();
        assert!(r.all_pass());
        assert!(r.entries.iter().all(|e| e.min_eps == Some(0.0)));
    }

    #[test]
    fn planted_violation_is_reported() {
        let t = pair(1.0);
        let far = MetricPair::whole(FiniteMetricSpace::from_matrix(&[vec![0.0, 3.0], vec![3.0, 0.0]]).unwrap());
        let sched = ConvergenceSchedule::new(vec![0.5, 0.1], vec![4.0, 5.0]).unwrap();
        let r = verify_convergence(&[pair(1.05), far], &t, &sched, SearchBudget::new(1_000_000)).unwrap();
        assert!(r.entries[0].pass);
        let bad = &r.entries[1];
        assert!(!bad.pass);
        let c = bad.clauses.as_ref().unwrap();
        assert!(!c.holds(0.1, 0.0));
    }
}
