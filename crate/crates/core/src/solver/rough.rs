//! Rough isometries from `(B̄_R(A), A)` to `(B̄_{R−ε}(B), B)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hausdorff::MetricPair;
use crate::metric::{closed_ball, SubsetRef};

use super::{NodeCounter, RoughIsometryWitness, SearchBudget};

/// Clause values of a map defined on the domain ball.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoughIsometryCheck {
    pub distortion: f64,
    /// `d_H(f(A), B)`.
    pub hausdorff: f64,
    /// Largest distance from a point of the target ball to `f(domain)`.
    pub coverage_gap: f64,
}

impl RoughIsometryCheck {
    pub fn evaluate(p: &MetricPair, q: &MetricPair, w: &RoughIsometryWitness) -> Result<Self> {
        let (x, y) = (&p.space, &q.space);
        let domain = closed_ball(x, &p.a, w.radius)?;
        let mut map = Vec::with_capacity(domain.len());
        for u in domain.iter() {
            let v = w.f.get(u).copied().flatten().ok_or(Error::DomainTooSmall(u))?;
            map.push((u, v));
        }
        let mut distortion = 0.0f64;
        for (i, &(u, v)) in map.iter().enumerate() {
            for &(u2, v2) in &map[i + 1..] {
                distortion = distortion.max((x.d(u, u2) - y.d(v, v2)).abs());
            }
        }
        let fa = SubsetRef::new(y.len(), p.a.iter().map(|a| map.iter().find(|m| m.0 == a).unwrap().1).collect())?;
        let hausdorff = crate::hausdorff::hausdorff(y, &fa, &q.a)?;
        let image = SubsetRef::new(y.len(), map.iter().map(|m| m.1).collect())?;
        let coverage_gap = target_ball(q, w.radius - w.eps)?
            .map_or(0.0, |t| t.iter().map(|v| y.dist_to_subset(v, &image)).fold(0.0, f64::max));
        Ok(Self { distortion, hausdorff, coverage_gap })
    }

    pub fn holds(&self, eps: f64, tolerance: f64) -> bool {
        self.distortion <= eps + tolerance && self.hausdorff <= eps + tolerance && self.coverage_gap <= eps + tolerance
    }
}

fn target_ball(q: &MetricPair, radius: f64) -> Result<Option<SubsetRef>> {
    if radius < 0.0 {
        return Ok(None);
    }
    closed_ball(&q.space, &q.a, radius).map(Some)
}

struct RoughSearch<'a, 'c> {
    p: &'a MetricPair,
    q: &'a MetricPair,
    limit: f64,
    domain: Vec<usize>,
    target: Vec<usize>,
    img: Vec<usize>,
    counter: &'c mut NodeCounter,
}

impl RoughSearch<'_, '_> {
    fn go(&mut self, k: usize) -> Result<bool> {
        self.counter.tick()?;
        let (x, y) = (&self.p.space, &self.q.space);
        if k == self.domain.len() {
            let lim = self.limit;
            let fa: Vec<usize> = self
                .domain
                .iter()
                .zip(&self.img)
                .filter(|(u, _)| self.p.a.contains(**u))
                .map(|(_, &v)| v)
                .collect();
            let near = |t: usize, pts: &[usize]| pts.iter().any(|&v| y.d(v, t) <= lim);
            let b_ok = self.q.a.iter().all(|b| near(b, &fa));
            let t_ok = self.target.iter().all(|&t| near(t, &self.img));
            return Ok(b_ok && t_ok);
        }
        let u = self.domain[k];
        let in_a = self.p.a.contains(u);
        for v in 0..y.len() {
            if in_a && y.dist_to_subset(v, &self.q.a) > self.limit {
                continue;
            }
            if (0..k).any(|j| (x.d(u, self.domain[j]) - y.d(v, self.img[j])).abs() > self.limit) {
                continue;
            }
            self.img.push(v);
            if self.go(k + 1)? {
                return Ok(true);
            }
            self.img.pop();
        }
        Ok(false)
    }
}

/// Lexicographically first `ε`-rough isometry (comparisons `≤ ε + τ`).
pub fn rough_isometry_search(
    p: &MetricPair,
    q: &MetricPair,
    radius: f64,
    eps: f64,
    budget: SearchBudget,
) -> Result<Option<RoughIsometryWitness>> {
    rough_with(p, q, radius, eps, &mut NodeCounter::new(budget))
}

pub(crate) fn rough_with(
    p: &MetricPair,
    q: &MetricPair,
    radius: f64,
    eps: f64,
    counter: &mut NodeCounter,
) -> Result<Option<RoughIsometryWitness>> {
    if !(eps > 0.0) {
        return Err(Error::NonPositiveEpsilon(eps));
    }
    if !(radius > eps) {
        return Err(Error::PreconditionViolated(format!("need R > eps, got R={radius}, eps={eps}")));
    }
    let tau = p.space.tolerance().max(q.space.tolerance());
    let domain = closed_ball(&p.space, &p.a, radius)?;
    let target = target_ball(q, radius - eps)?;
    let mut s = RoughSearch {
        p,
        q,
        limit: eps + tau,
        domain: domain.indices().to_vec(),
        target: target.map_or(Vec::new(), |t| t.indices().to_vec()),
        img: Vec::new(),
        counter,
    };
    if !s.go(0)? {
        return Ok(None);
    }
    let mut f = vec![None; p.space.len()];
    for (&u, &v) in s.domain.iter().zip(&s.img) {
        f[u] = Some(v);
    }
    Ok(Some(RoughIsometryWitness { f, eps, radius }))
}
