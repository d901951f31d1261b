//! Gromov–Hausdorff solvers for pairs and tuples, approximation and
//! rough-isometry search, isometry detection and convergence checks.

mod approx;
mod compact;
mod convergence;
mod isometry;
pub mod lp;
mod rough;
mod truncated;

use serde::{Deserialize, Serialize};

pub use approx::{approx_search, complete_distortion_map, min_approx_eps};
pub use compact::{gh_compact_pair, gh_compact_tuple, gh_plain};
pub use convergence::{verify_convergence, ConvergenceEntry, ConvergenceReport};
pub use isometry::pair_isometry_search;
pub use rough::{rough_isometry_search, RoughIsometryCheck};
pub use truncated::gh_truncated_pair;

use crate::error::{Error, Result};
use crate::gluing::CrossMetric;
use crate::hausdorff::MetricPair;
use crate::metric::FiniteMetricSpace;

/// Environment variable overriding the default search budget.
pub const BUDGET_ENV: &str = "METRIC_PAIRS_BUDGET";
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// `lo ≤ true value ≤ hi`, with `hi` backed by an explicit gluing when one
/// exists.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceBracket {
    pub lo: f64,
    pub hi: f64,
    pub resolution: f64,
    pub certificate_hi: Option<CrossMetric>,
    pub certificate_lo: String,
}

impl DistanceBracket {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains_zero(&self, tolerance: f64) -> bool {
        self.lo <= tolerance
    }
}

/// Cap on the number of search nodes any one solver call may expand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_nodes: u64,
}

impl SearchBudget {
    pub fn new(max_nodes: u64) -> Self {
        Self { max_nodes }
    }

    /// Reads [`BUDGET_ENV`], falling back to [`DEFAULT_BUDGET`].
    pub fn from_env() -> Self {
        let max_nodes = std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_BUDGET);
        Self { max_nodes }
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self::from_env()
    }
}

pub(crate) struct NodeCounter {
    used: u64,
    limit: u64,
}

impl NodeCounter {
    pub(crate) fn new(budget: SearchBudget) -> Self {
        Self { used: 0, limit: budget.max_nodes }
    }

    #[inline]
    pub(crate) fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.limit {
            return Err(Error::SizeLimitExceeded { limit: self.limit });
        }
        Ok(())
    }
}

/// Maps `f: X → Y` and `g: Y → X` with their parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproximationPair {
    pub f: Vec<usize>,
    pub g: Vec<usize>,
    pub eps: f64,
}

/// The six quantities constrained by an approximation pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproximationDefects {
    pub distortion_f: f64,
    pub distortion_g: f64,
    /// `max_x d_X(g(f(x)), x)`.
    pub return_left: f64,
    /// `max_y d_Y(f(g(y)), y)`.
    pub return_right: f64,
    /// `d_H(f(A), B)` in `Y`.
    pub hausdorff_fa: f64,
    /// `d_H(g(B), A)` in `X`.
    pub hausdorff_gb: f64,
}

impl ApproximationDefects {
    pub fn max(&self) -> f64 {
        [
            self.distortion_f,
            self.distortion_g,
            self.return_left,
            self.return_right,
            self.hausdorff_fa,
            self.hausdorff_gb,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

impl ApproximationPair {
    pub fn defects(&self, left: &MetricPair, right: &MetricPair) -> Result<ApproximationDefects> {
        let (x, y) = (&left.space, &right.space);
        if self.f.len() != x.len() || self.g.len() != y.len() {
            return Err(Error::LengthMismatch(format!(
                "maps have lengths {}/{}, spaces have {}/{} points",
                self.f.len(),
                self.g.len(),
                x.len(),
                y.len()
            )));
        }
        if self.f.iter().any(|&v| v >= y.len()) || self.g.iter().any(|&u| u >= x.len()) {
            return Err(Error::PreconditionViolated("map value out of range".into()));
        }
        let fa = image(y.len(), &self.f, left.a.iter())?;
        let gb = image(x.len(), &self.g, right.a.iter())?;
        Ok(ApproximationDefects {
            distortion_f: distortion(x, y, &self.f),
            distortion_g: distortion(y, x, &self.g),
            return_left: (0..x.len()).map(|i| x.d(self.g[self.f[i]], i)).fold(0.0, f64::max),
            return_right: (0..y.len()).map(|j| y.d(self.f[self.g[j]], j)).fold(0.0, f64::max),
            hausdorff_fa: crate::hausdorff::hausdorff(y, &fa, &right.a)?,
            hausdorff_gb: crate::hausdorff::hausdorff(x, &gb, &left.a)?,
        })
    }

    /// True when every defect is below `eps` (up to the spaces' tolerance).
    pub fn is_valid(&self, left: &MetricPair, right: &MetricPair) -> Result<bool> {
        let tau = left.space.tolerance().max(right.space.tolerance());
        Ok(self.defects(left, right)?.max() <= self.eps + tau)
    }
}

/// A map from the closed `R`-ball of `A` into the target, with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoughIsometryWitness {
    /// Indexed by source point; `None` outside the domain ball.
    pub f: Vec<Option<usize>>,
    pub eps: f64,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceSchedule {
    eps_seq: Vec<f64>,
    radius_seq: Vec<f64>,
}

impl ConvergenceSchedule {
    pub fn new(eps_seq: Vec<f64>, radius_seq: Vec<f64>) -> Result<Self> {
        if eps_seq.len() != radius_seq.len() {
            return Err(Error::LengthMismatch(format!(
                "{} epsilons vs {} radii",
                eps_seq.len(),
                radius_seq.len()
            )));
        }
        if eps_seq.iter().any(|&e| !(e > 0.0)) {
            return Err(Error::PreconditionViolated("epsilons must be positive".into()));
        }
        if eps_seq.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::PreconditionViolated("epsilons must decrease strictly".into()));
        }
        if radius_seq.iter().any(|&r| !(r > 0.0)) || radius_seq.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::PreconditionViolated("radii must be positive and increase strictly".into()));
        }
        Ok(Self { eps_seq, radius_seq })
    }

    pub fn eps_seq(&self) -> &[f64] {
        &self.eps_seq
    }

    pub fn radius_seq(&self) -> &[f64] {
        &self.radius_seq
    }

    pub fn len(&self) -> usize {
        self.eps_seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eps_seq.is_empty()
    }
}

pub(crate) fn distortion(x: &FiniteMetricSpace, y: &FiniteMetricSpace, f: &[usize]) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..f.len() {
        for j in (i + 1)..f.len() {
            worst = worst.max((x.d(i, j) - y.d(f[i], f[j])).abs());
        }
    }
    worst
}

pub(crate) fn image(
    universe: usize,
    f: &[usize],
    domain: impl Iterator<Item = usize>,
) -> Result<crate::metric::SubsetRef> {
    crate::metric::SubsetRef::new(universe, domain.map(|i| f[i]).collect())
}

pub(crate) fn check_resolution(resolution: f64, spaces: &[&FiniteMetricSpace]) -> Result<()> {
    if !(resolution > 0.0) || !resolution.is_finite() {
        return Err(Error::PreconditionViolated(format!("resolution must be positive, got {resolution}")));
    }
    let scale = spaces.iter().map(|s| s.diameter()).fold(0.0, f64::max);
    if scale > 0.0 && resolution > scale {
        return Err(Error::ResolutionTooCoarse { resolution, scale });
    }
    Ok(())
}

/// Sorted, deduplicated positive candidate thresholds.
pub(crate) fn sorted_candidates(mut v: Vec<f64>) -> Vec<f64> {
    v.retain(|c| c.is_finite() && *c > 0.0);
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

/// Result of locating the infimum of an up-closed feasible set whose
/// boundary lies among finitely many candidates.
pub(crate) struct Infimum<W> {
    pub value: f64,
    /// False when the infimum is approached from above but not feasible itself.
    pub attained: bool,
    /// A feasible parameter and its witness (equal to `value` when attained).
    pub witness_at: f64,
    pub witness: W,
}

/// Binary search over `candidates` (ascending) for the smallest feasible one,
/// then probe the open gap below it. `feasible` must be monotone.
pub(crate) fn candidate_infimum<W>(
    candidates: &[f64],
    resolution: f64,
    mut feasible: impl FnMut(f64) -> Result<Option<W>>,
) -> Result<Option<Infimum<W>>> {
    let Some(&top) = candidates.last() else { return Ok(None) };
    let Some(mut best) = feasible(top)? else { return Ok(None) };
    let (mut lo, mut hi) = (0usize, candidates.len() - 1);
    // invariant: candidates[hi] feasible, everything below lo is infeasible
    while lo < hi {
        let mid = (lo + hi) / 2;
        match feasible(candidates[mid])? {
            Some(w) => {
                hi = mid;
                best = w;
            }
            None => lo = mid + 1,
        }
    }
    let below = if hi == 0 { 0.0 } else { candidates[hi - 1] };
    let probe = 0.5 * (below + candidates[hi]);
    if probe > 0.0 {
        if let Some(w) = feasible(probe)? {
            // feasible strictly inside the gap: the infimum is its lower end
            let at = (below + 0.5 * resolution).min(probe);
            let witness = if at < probe {
                feasible(at)?.ok_or_else(|| Error::PreconditionViolated("feasibility is not monotone".into()))?
            } else {
                w
            };
            return Ok(Some(Infimum { value: below, attained: false, witness_at: at, witness }));
        }
    }
    Ok(Some(Infimum { value: candidates[hi], attained: true, witness_at: candidates[hi], witness: best }))
}
