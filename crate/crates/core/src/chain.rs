//! Chains of pairs glued end to end, the limit proxy at the last member,
//! and tail-sum diagnostics.
//!
//! The ambient space is the shortest-path closure of all member spaces plus
//! the consecutive cross blocks. The infinite construction is replaced by
//! its finite prefix: the last member stands in for the limit space.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gluing::CrossMetric;
use crate::hausdorff::{directed_hausdorff, MetricPair};
use crate::metric::{floyd_warshall, FiniteMetricSpace, SubsetRef};
use crate::solver::{gh_compact_pair, gh_truncated_pair, SearchBudget};

const ROUNDING_SLACK: f64 = 16.0 * f64::EPSILON;

#[derive(Debug, Clone, PartialEq)]
pub struct ChainGluing {
    pairs: Vec<MetricPair>,
    glues: Vec<CrossMetric>,
    eps_budget: Vec<f64>,
    ambient: FiniteMetricSpace,
    offsets: Vec<usize>,
}

impl ChainGluing {
    pub fn pairs(&self) -> &[MetricPair] {
        &self.pairs
    }

    pub fn glues(&self) -> &[CrossMetric] {
        &self.glues
    }

    pub fn eps_budget(&self) -> &[f64] {
        &self.eps_budget
    }

    pub fn ambient(&self) -> &FiniteMetricSpace {
        &self.ambient
    }

    /// Ambient index of point `i` of member `m`.
    pub fn global(&self, m: usize, i: usize) -> usize {
        self.offsets[m] + i
    }

    /// Member `m`'s subset as an ambient subset.
    pub fn subset_in_ambient(&self, m: usize, s: &SubsetRef) -> SubsetRef {
        SubsetRef::new(self.ambient.len(), s.iter().map(|i| self.global(m, i)).collect())
            .expect("member subset is nonempty and in range")
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Chains `pairs` through raw cross blocks (`cross[i]` has one row per
/// point of member `i` and one column per point of member `i + 1`). The
/// stored gluings are the cross blocks of the closed ambient.
pub fn build_chain(pairs: Vec<MetricPair>, cross: Vec<Vec<Vec<f64>>>, eps_budget: Vec<f64>) -> Result<ChainGluing> {
    let k = pairs.len();
    if k < 2 {
        return Err(Error::LengthMismatch(format!("a chain needs at least two pairs, got {k}")));
    }
    if cross.len() != k - 1 || eps_budget.len() != k - 1 {
        return Err(Error::LengthMismatch(format!(
            "{k} pairs need {} gluings and budgets, got {} and {}",
            k - 1,
            cross.len(),
            eps_budget.len()
        )));
    }
    if let Some(&b) = eps_budget.iter().find(|&&b| !(b > 0.0)) {
        return Err(Error::PreconditionViolated(format!("budgets must be positive, got {b}")));
    }
    for (i, block) in cross.iter().enumerate() {
        let (n, m) = (pairs[i].space.len(), pairs[i + 1].space.len());
        if block.len() != n || block.iter().any(|r| r.len() != m) {
            return Err(Error::LengthMismatch(format!("cross block {i} is not {n}x{m}")));
        }
        if let Some(&c) = block.iter().flatten().find(|&&c| !(c > 0.0 && c.is_finite())) {
            return Err(Error::PreconditionViolated(format!("cross block {i} has entry {c}, need finite and positive")));
        }
    }
    let mut offsets = Vec::with_capacity(k);
    let mut total = 0;
    for p in &pairs {
        offsets.push(total);
        total += p.space.len();
    }
    let mut d = vec![f64::INFINITY; total * total];
    for (m, p) in pairs.iter().enumerate() {
        let o = offsets[m];
        for i in 0..p.space.len() {
            for j in 0..p.space.len() {
                d[(o + i) * total + o + j] = p.space.d(i, j);
            }
        }
    }
    for (m, block) in cross.iter().enumerate() {
        let (a, b) = (offsets[m], offsets[m + 1]);
        for (i, row) in block.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                d[(a + i) * total + b + j] = c;
                d[(b + j) * total + a + i] = c;
            }
        }
    }
    loop {
        let before = d.clone();
        floyd_warshall(total, &mut d);
        if before == d {
            break;
        }
    }
    let scale = d.iter().copied().fold(0.0, f64::max);
    let tau = pairs
        .iter()
        .map(|p| p.space.tolerance())
        .fold(ROUNDING_SLACK * scale, f64::max);
    for (m, p) in pairs.iter().enumerate() {
        let o = offsets[m];
        for i in 0..p.space.len() {
            for j in (i + 1)..p.space.len() {
                let glued = d[(o + i) * total + o + j];
                let original = p.space.d(i, j);
                if glued < original - tau {
                    return Err(Error::ShortcutDetected { member: m, i, j, glued, original });
                }
            }
        }
    }
    let labels = pairs
        .iter()
        .enumerate()
        .flat_map(|(m, p)| p.space.labels().iter().map(move |l| format!("{m}:{l}")))
        .collect();
    let mut glues = Vec::with_capacity(k - 1);
    for m in 0..k - 1 {
        let (a, b) = (offsets[m], offsets[m + 1]);
        let block = (0..pairs[m].space.len())
            .map(|i| (0..pairs[m + 1].space.len()).map(|j| d[(a + i) * total + b + j]).collect())
            .collect();
        glues.push(CrossMetric::new(pairs[m].space.clone(), pairs[m + 1].space.clone(), block, false)?);
    }
    let ambient = FiniteMetricSpace::from_trusted(labels, total, d, tau);
    Ok(ChainGluing { pairs, glues, eps_budget, ambient, offsets })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitProxy {
    /// The last member's space with the reachable subset `W`.
    pub z_pair: MetricPair,
    /// For each point of `W` (ascending), a member-local index path
    /// `(a_1, …, a_k)` ending at it.
    pub chains: Vec<Vec<usize>>,
}

/// Points of the last `A_k` reachable through budget-respecting chains,
/// each with its lexicographically first witness path.
pub fn limit_proxy(chain: &ChainGluing) -> Result<LimitProxy> {
    let amb = &chain.ambient;
    let tau = amb.tolerance();
    let first = &chain.pairs[0];
    let mut layer: Vec<(usize, Vec<usize>)> = first.a.iter().map(|a| (a, vec![a])).collect();
    for m in 1..chain.len() {
        let budget = chain.eps_budget[m - 1];
        let mut next = Vec::new();
        for b in chain.pairs[m].a.iter() {
            let gb = chain.global(m, b);
            let best = layer
                .iter()
                .filter(|(a, _)| amb.d(chain.global(m - 1, *a), gb) < budget + tau)
                .map(|(_, path)| path)
                .min();
            if let Some(path) = best {
                let mut p = path.clone();
                p.push(b);
                next.push((b, p));
            }
        }
        if next.is_empty() {
            return Err(Error::EmptyLimit);
        }
        layer = next;
    }
    let last = chain.pairs.last().expect("k >= 2");
    let w = SubsetRef::new(last.space.len(), layer.iter().map(|(b, _)| *b).collect())?;
    Ok(LimitProxy {
        z_pair: MetricPair::new(last.space.clone(), w)?,
        chains: layer.into_iter().map(|(_, p)| p).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainEntry {
    pub index: usize,
    pub compact_lo: f64,
    pub compact_hi: f64,
    pub truncated_lo: f64,
    pub truncated_hi: f64,
    /// `Σ_{j ≥ i} eps_budget[j]`.
    pub tail_sum: f64,
    /// `compact_hi ≤ tail_sum + resolution`.
    pub dominated: bool,
    /// Ambient `d_H(A_i, W)`.
    pub hausdorff_to_w: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    pub resolution: f64,
    pub note: String,
    pub entries: Vec<ChainEntry>,
}

impl ChainReport {
    pub fn all_dominated(&self) -> bool {
        self.entries.iter().all(|e| e.dominated)
    }
}

pub fn chain_convergence_report(
    chain: &ChainGluing,
    proxy: &LimitProxy,
    resolution: f64,
    budget: SearchBudget,
) -> Result<ChainReport> {
    let k = chain.len();
    let w = chain.subset_in_ambient(k - 1, &proxy.z_pair.a);
    let mut entries = Vec::with_capacity(k);
    for (i, p) in chain.pairs.iter().enumerate() {
        let compact = gh_compact_pair(p, &proxy.z_pair, resolution, budget)?;
        let truncated = gh_truncated_pair(p, &proxy.z_pair, resolution, budget)?;
        let tail_sum: f64 = chain.eps_budget[i..].iter().sum();
        let ai = chain.subset_in_ambient(i, &p.a);
        let amb = &chain.ambient;
        let hausdorff_to_w = directed_hausdorff(amb, &ai, &w).max(directed_hausdorff(amb, &w, &ai));
        entries.push(ChainEntry {
            index: i,
            compact_lo: compact.lo,
            compact_hi: compact.hi,
            truncated_lo: truncated.lo,
            truncated_hi: truncated.hi,
            tail_sum,
            dominated: compact.hi <= tail_sum + resolution,
            hausdorff_to_w,
        });
    }
    Ok(ChainReport {
        resolution,
        note: "limit proxy is the last chain member, a finite surrogate for the completed union".into(),
        entries,
    })
}
