//! Covering, packing and separation numbers, family certificates, and the
//! count-transfer check.
//!
//! All counts are exact: covers come from branch-and-bound set cover, packings
//! and separated sets from maximum cliques (Bron–Kerbosch with pivoting).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gluing::{check_eps_admissible, CrossMetric};
use crate::hausdorff::MetricPair;
use crate::metric::{FiniteMetricSpace, SubsetRef};

#[derive(Debug, Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn empty(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64).max(1)])
    }

    fn full(n: usize) -> Self {
        let mut b = Self::empty(n);
        for i in 0..n {
            b.set(i);
        }
        b
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn and(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }

    fn and_not(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & !b).collect())
    }

    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(k, &w)| (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| k * 64 + b))
    }
}

/// Minimum number of `sets` covering `0..n`; every element must be
/// coverable.
fn min_cover(n: usize, sets: &[Bits]) -> usize {
    if n == 0 {
        return 0;
    }
    let mut sets: Vec<Bits> = sets.iter().filter(|s| !s.is_empty()).cloned().collect();
    sets.sort_by_key(|s| std::cmp::Reverse(s.count()));
    sets.dedup();
    let upper = greedy_cover(n, &sets);
    let mut best = upper;
    cover_bb(&Bits::full(n), &sets, 0, &mut best);
    best
}

fn greedy_cover(n: usize, sets: &[Bits]) -> usize {
    let mut left = Bits::full(n);
    let mut used = 0;
    while !left.is_empty() {
        let pick = sets.iter().max_by_key(|s| s.and(&left).count()).expect("coverable");
        left = left.and_not(pick);
        used += 1;
    }
    used
}

fn cover_bb(left: &Bits, sets: &[Bits], used: usize, best: &mut usize) {
    if left.is_empty() {
        *best = (*best).min(used);
        return;
    }
    let widest = sets.iter().map(|s| s.and(left).count()).max().unwrap_or(0);
    if widest == 0 || used + left.count().div_ceil(widest) >= *best {
        return;
    }
    // branch on the element with the fewest covering sets
    let elem = left
        .ones()
        .min_by_key(|&e| sets.iter().filter(|s| s.get(e)).count())
        .expect("nonempty");
    let mut options: Vec<&Bits> = sets.iter().filter(|s| s.get(elem)).collect();
    options.sort_by_key(|s| std::cmp::Reverse(s.and(left).count()));
    for s in options {
        cover_bb(&left.and_not(s), sets, used + 1, best);
    }
}

/// Size of a maximum clique of the graph given by adjacency bitsets.
fn max_clique(adj: &[Bits]) -> usize {
    let n = adj.len();
    let mut best = 0;
    bron_kerbosch(adj, 0, Bits::full(n), Bits::empty(n), &mut best);
    best
}

fn bron_kerbosch(adj: &[Bits], size: usize, p: Bits, x: Bits, best: &mut usize) {
    if p.is_empty() {
        if x.is_empty() {
            *best = (*best).max(size);
        }
        return;
    }
    if size + p.count() <= *best {
        return;
    }
    let pivot = p.ones().chain(x.ones()).max_by_key(|&u| adj[u].and(&p).count()).expect("nonempty");
    let mut p = p;
    let mut x = x;
    let candidates: Vec<usize> = p.and_not(&adj[pivot]).ones().collect();
    for v in candidates {
        bron_kerbosch(adj, size + 1, p.and(&adj[v]), x.and(&adj[v]), best);
        p.0[v / 64] &= !(1 << (v % 64));
        x.set(v);
    }
}

/// Covering count for the listed points with open `r`-balls at `centers`.
fn cover_count(space: &FiniteMetricSpace, pts: &[usize], centers: &[usize], r: f64) -> usize {
    assert!(r > 0.0, "covering radius must be positive, got {r}");
    let sets: Vec<Bits> = centers
        .iter()
        .map(|&c| {
            let mut b = Bits::empty(pts.len());
            for (k, &p) in pts.iter().enumerate() {
                if space.d(c, p) < r {
                    b.set(k);
                }
            }
            b
        })
        .collect();
    min_cover(pts.len(), &sets)
}

/// `M(r, S)` for an explicit (possibly empty) point list.
pub fn outer_cover_of(space: &FiniteMetricSpace, pts: &[usize], r: f64) -> usize {
    let centers: Vec<usize> = (0..space.len()).collect();
    cover_count(space, pts, &centers, r)
}

/// `N(r, S)` for an explicit (possibly empty) point list.
pub fn inner_cover_of(space: &FiniteMetricSpace, pts: &[usize], r: f64) -> usize {
    cover_count(space, pts, pts, r)
}

/// `P(r, S)`: disjointness of open balls is decided in the whole space.
pub fn packing_of(space: &FiniteMetricSpace, pts: &[usize], r: f64) -> usize {
    let n = pts.len();
    let adj: Vec<Bits> = (0..n)
        .map(|i| {
            let mut b = Bits::empty(n);
            for j in 0..n {
                if i != j && !(0..space.len()).any(|z| space.d(z, pts[i]) < r && space.d(z, pts[j]) < r) {
                    b.set(j);
                }
            }
            b
        })
        .collect();
    max_clique(&adj)
}

/// Largest `r`-separated subset size, or `None` below two.
pub fn separation_of(space: &FiniteMetricSpace, pts: &[usize], r: f64) -> Option<usize> {
    let n = pts.len();
    let tau = space.tolerance();
    let adj: Vec<Bits> = (0..n)
        .map(|i| {
            let mut b = Bits::empty(n);
            for j in 0..n {
                if i != j && space.d(pts[i], pts[j]) + tau >= r {
                    b.set(j);
                }
            }
            b
        })
        .collect();
    let s = max_clique(&adj);
    (s >= 2).then_some(s)
}

/// `M(r, A)`: fewest open `r`-balls centered anywhere covering `A`.
pub fn covering_outer(space: &FiniteMetricSpace, a: &SubsetRef, r: f64) -> usize {
    outer_cover_of(space, a.indices(), r)
}

/// `N(r, A)`: centers restricted to `A`.
pub fn covering_inner(space: &FiniteMetricSpace, a: &SubsetRef, r: f64) -> usize {
    inner_cover_of(space, a.indices(), r)
}

/// `P(r, A)`.
pub fn packing(space: &FiniteMetricSpace, a: &SubsetRef, r: f64) -> usize {
    packing_of(space, a.indices(), r)
}

/// `S(r, A)`.
pub fn separation(space: &FiniteMetricSpace, a: &SubsetRef, r: f64) -> Option<usize> {
    separation_of(space, a.indices(), r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CountKind {
    M,
    N,
    P,
    S,
    #[serde(rename = "pi")]
    Pi,
    #[serde(rename = "nu")]
    Nu,
}

impl CountKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CountKind::M => "M",
            CountKind::N => "N",
            CountKind::P => "P",
            CountKind::S => "S",
            CountKind::Pi => "pi",
            CountKind::Nu => "nu",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "M" => CountKind::M,
            "N" => CountKind::N,
            "P" => CountKind::P,
            "S" => CountKind::S,
            "pi" => CountKind::Pi,
            "nu" => CountKind::Nu,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountingProfile {
    pub kind: CountKind,
    pub samples: Vec<(f64, usize)>,
}

fn subset_ball(pair: &MetricPair, radius: f64) -> Result<Vec<usize>> {
    if radius < 0.0 {
        return Ok(Vec::new());
    }
    Ok(crate::metric::closed_ball(&pair.space, &pair.a, radius)?.indices().to_vec())
}

/// `π(ε) = max P(ε, B̄_{1/ε}(A))` and `ν(ε) = max N(ε, B̄_{1/ε}(A))` over
/// the family, tabulated on the grid.
pub fn family_certificate(family: &[MetricPair], eps_grid: &[f64]) -> Result<(CountingProfile, CountingProfile)> {
    if family.is_empty() {
        return Err(Error::PreconditionViolated("family is empty".into()));
    }
    if let Some(&e) = eps_grid.iter().find(|&&e| !(e > 0.0)) {
        return Err(Error::NonPositiveEpsilon(e));
    }
    let mut pi = Vec::with_capacity(eps_grid.len());
    let mut nu = Vec::with_capacity(eps_grid.len());
    for &eps in eps_grid {
        let (mut p_max, mut n_max) = (0, 0);
        for pair in family {
            let ball = subset_ball(pair, 1.0 / eps)?;
            p_max = p_max.max(packing_of(&pair.space, &ball, eps));
            n_max = n_max.max(inner_cover_of(&pair.space, &ball, eps));
        }
        pi.push((eps, p_max));
        nu.push((eps, n_max));
    }
    Ok((CountingProfile { kind: CountKind::Pi, samples: pi }, CountingProfile { kind: CountKind::Nu, samples: nu }))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClauseVerdict {
    pub lhs: usize,
    pub rhs: usize,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountTransferReport {
    pub eps: f64,
    pub r: f64,
    pub big_r: f64,
    /// `M(r+2ε, B̄_R(B)) ≤ N(r, B̄_R(A))`, evaluated when `R ≤ 1/ε`.
    pub covering: Option<ClauseVerdict>,
    /// `P(r+2ε, B̄_{R−2ε}(B)) ≤ P(r, B̄_R(A))`, evaluated when `R + r ≤ 1/ε`.
    pub packing: Option<ClauseVerdict>,
}

impl CountTransferReport {
    pub fn verdict(&self) -> bool {
        self.covering.as_ref().is_none_or(|c| c.holds) && self.packing.as_ref().is_none_or(|c| c.holds)
    }
}

/// Evaluates both count-transfer inequalities for an admissible gluing.
/// Counts are intrinsic to each space; the gluing only gates the hypothesis.
pub fn check_count_transfer(
    p: &MetricPair,
    q: &MetricPair,
    glue: &CrossMetric,
    eps: f64,
    r: f64,
    big_r: f64,
) -> Result<CountTransferReport> {
    glue.check_joins(&p.space, &q.space)?;
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::PreconditionViolated(format!("need 0 < eps < 1/2, got {eps}")));
    }
    if !(r > 0.0 && big_r > 0.0) {
        return Err(Error::PreconditionViolated(format!("need r, R > 0, got r={r}, R={big_r}")));
    }
    let adm = check_eps_admissible(glue, &p.a, &q.a, eps);
    if !adm.verdict {
        return Err(Error::PreconditionViolated(format!(
            "gluing is not ({eps}; A, B)-admissible: d_H(A,B) = {}, coverings {}/{}",
            adm.hausdorff_ab, adm.covering_left, adm.covering_right
        )));
    }
    let inv = 1.0 / eps;
    let covering = if big_r <= inv {
        let lhs = outer_cover_of(&q.space, &subset_ball(q, big_r)?, r + 2.0 * eps);
        let rhs = inner_cover_of(&p.space, &subset_ball(p, big_r)?, r);
        Some(ClauseVerdict { lhs, rhs, holds: lhs <= rhs })
    } else {
        None
    };
    let packing = if big_r + r <= inv {
        let lhs = packing_of(&q.space, &subset_ball(q, big_r - 2.0 * eps)?, r + 2.0 * eps);
        let rhs = packing_of(&p.space, &subset_ball(p, big_r)?, r);
        Some(ClauseVerdict { lhs, rhs, holds: lhs <= rhs })
    } else {
        None
    };
    Ok(CountTransferReport { eps, r, big_r, covering, packing })
}
