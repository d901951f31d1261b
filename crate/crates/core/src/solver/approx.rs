//! Approximation pairs: exhaustive search, minimal parameter, and completion
//! of a single low-distortion map.

use crate::error::{Error, Result};
use crate::hausdorff::MetricPair;

use super::{distortion, sorted_candidates, ApproximationPair, DistanceBracket, NodeCounter, SearchBudget};

struct ApproxSearch<'a, 'c> {
    p: &'a MetricPair,
    q: &'a MetricPair,
    limit: f64,
    f: Vec<usize>,
    g: Vec<usize>,
    last_a: usize,
    last_b: usize,
    counter: &'c mut NodeCounter,
}

impl ApproxSearch<'_, '_> {
    fn fit_f(&self, i: usize, v: usize) -> bool {
        let (x, y) = (&self.p.space, &self.q.space);
        if self.p.a.contains(i) && y.dist_to_subset(v, &self.q.a) > self.limit {
            return false;
        }
        (0..i).all(|j| (x.d(i, j) - y.d(v, self.f[j])).abs() <= self.limit)
    }

    fn fit_g(&self, j: usize, u: usize) -> bool {
        let (x, y) = (&self.p.space, &self.q.space);
        if self.q.a.contains(j) && x.dist_to_subset(u, &self.p.a) > self.limit {
            return false;
        }
        if y.d(self.f[u], j) > self.limit {
            return false;
        }
        if (0..x.len()).any(|i| self.f[i] == j && x.d(u, i) > self.limit) {
            return false;
        }
        (0..j).all(|k| (y.d(j, k) - x.d(u, self.g[k])).abs() <= self.limit)
    }

    /// Every `b ∈ B` is near `f(A)`.
    fn b_covered(&self) -> bool {
        let y = &self.q.space;
        self.q.a.iter().all(|b| self.p.a.iter().any(|a| y.d(self.f[a], b) <= self.limit))
    }

    fn a_covered(&self) -> bool {
        let x = &self.p.space;
        self.p.a.iter().all(|a| self.q.a.iter().any(|b| x.d(self.g[b], a) <= self.limit))
    }

    fn assign_f(&mut self, i: usize) -> Result<bool> {
        self.counter.tick()?;
        if i == self.f.len() {
            return self.assign_g(0);
        }
        for v in 0..self.q.space.len() {
            if !self.fit_f(i, v) {
                continue;
            }
            self.f[i] = v;
            if i == self.last_a && !self.b_covered() {
                continue;
            }
            if self.assign_f(i + 1)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn assign_g(&mut self, j: usize) -> Result<bool> {
        self.counter.tick()?;
        if j == self.g.len() {
            return Ok(true);
        }
        for u in 0..self.p.space.len() {
            if !self.fit_g(j, u) {
                continue;
            }
            self.g[j] = u;
            if j == self.last_b && !self.a_covered() {
                continue;
            }
            if self.assign_g(j + 1)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

fn search_with(p: &MetricPair, q: &MetricPair, eps: f64, counter: &mut NodeCounter) -> Result<Option<ApproximationPair>> {
    let tau = p.space.tolerance().max(q.space.tolerance());
    let mut s = ApproxSearch {
        p,
        q,
        limit: eps + tau,
        f: vec![0; p.space.len()],
        g: vec![0; q.space.len()],
        last_a: *p.a.indices().last().expect("nonempty"),
        last_b: *q.a.indices().last().expect("nonempty"),
        counter,
    };
    let found = s.assign_f(0)?;
    Ok(found.then_some(ApproximationPair { f: s.f, g: s.g, eps }))
}

/// Lexicographically first `(f, g)` (ordered by `f` then `g`) whose six
/// defects are at most `eps` up to tolerance, or `None`.
pub fn approx_search(p: &MetricPair, q: &MetricPair, eps: f64, budget: SearchBudget) -> Result<Option<ApproximationPair>> {
    if !(eps > 0.0) {
        return Err(Error::NonPositiveEpsilon(eps));
    }
    search_with(p, q, eps, &mut NodeCounter::new(budget))
}

/// Smallest `ε` admitting an approximation pair. The feasible set is closed
/// and can only change at a distance or distance difference, so the minimum
/// is one of those values and the bracket is exact.
pub fn min_approx_eps(
    p: &MetricPair,
    q: &MetricPair,
    resolution: f64,
    budget: SearchBudget,
) -> Result<(DistanceBracket, Option<ApproximationPair>)> {
    super::check_resolution(resolution, &[&p.space, &q.space])?;
    let (x, y) = (&p.space, &q.space);
    let mut c = Vec::new();
    for i in 0..x.len() {
        for j in i..x.len() {
            c.push(x.d(i, j));
            for v in 0..y.len() {
                for w in v..y.len() {
                    c.push((x.d(i, j) - y.d(v, w)).abs());
                }
            }
        }
    }
    for v in 0..y.len() {
        for w in v..y.len() {
            c.push(y.d(v, w));
        }
    }
    let candidates = sorted_candidates(c);
    let mut counter = NodeCounter::new(budget);
    let mut probe = |e: f64| search_with(p, q, e, &mut counter);
    let bracket = |v: f64| DistanceBracket {
        lo: v,
        hi: v,
        resolution,
        certificate_hi: None,
        certificate_lo: "no approximation pair at any smaller candidate".into(),
    };
    if let Some(w) = probe(0.0)? {
        return Ok((bracket(0.0), Some(w)));
    }
    let Some(&top) = candidates.last() else { return Ok((bracket(0.0), None)) };
    let mut best = probe(top)?;
    if best.is_none() {
        return Err(Error::PreconditionViolated("no approximation pair at the largest candidate".into()));
    }
    let (mut lo, mut hi) = (0usize, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        match probe(candidates[mid])? {
            Some(w) => {
                hi = mid;
                best = Some(w);
            }
            None => lo = mid + 1,
        }
    }
    Ok((bracket(candidates[hi]), best))
}

/// Completes a low-distortion `f` to an approximation pair `(f, h)` at `3ε`.
pub fn complete_distortion_map(p: &MetricPair, q: &MetricPair, f: &[usize], eps: f64) -> Result<ApproximationPair> {
    if !(eps > 0.0) {
        return Err(Error::NonPositiveEpsilon(eps));
    }
    let (x, y) = (&p.space, &q.space);
    if f.len() != x.len() || f.iter().any(|&v| v >= y.len()) {
        return Err(Error::PreconditionViolated("f must be a total map into the right space".into()));
    }
    let tau = x.tolerance().max(y.tolerance());
    let dis = distortion(x, y, f);
    if dis > eps + tau {
        return Err(Error::PreconditionViolated(format!("distortion of f is {dis}, not below {eps}")));
    }
    let fa = super::image(y.len(), f, p.a.iter())?;
    let hd = crate::hausdorff::hausdorff(y, &fa, &q.a)?;
    if hd > eps + tau {
        return Err(Error::PreconditionViolated(format!("d_H(f(A), B) = {hd}, not below {eps}")));
    }
    let mut g = vec![usize::MAX; y.len()];
    for (i, &v) in f.iter().enumerate() {
        if g[v] == usize::MAX {
            g[v] = i;
        }
    }
    let img: Vec<usize> = (0..y.len()).filter(|&v| g[v] != usize::MAX).collect();
    let mut h = vec![0; y.len()];
    for (w, slot) in h.iter_mut().enumerate() {
        let mut near = img[0];
        for &v in &img[1..] {
            if y.d(v, w) < y.d(near, w) {
                near = v;
            }
        }
        if y.d(near, w) > eps + tau {
            return Err(Error::PreconditionViolated(format!("point {w} is {} from the image of f", y.d(near, w))));
        }
        *slot = g[near];
    }
    let pair = ApproximationPair { f: f.to_vec(), g: h, eps: 3.0 * eps };
    if !pair.is_valid(p, q)? {
        return Err(Error::PreconditionViolated("completed pair fails validation".into()));
    }
    Ok(pair)
}
