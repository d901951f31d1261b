//! Admissible metrics on a disjoint union `X ⊔ Y`.
//!
//! A [`CrossMetric`] stores only the `|X| × |Y|` block of cross distances;
//! the within-space blocks are read from the two spaces, so restriction
//! exactness holds by construction. The constructors here follow the explicit
//! formulas used to certify upper bounds on Gromov–Hausdorff distances, and
//! every one of them returns a gluing that has passed the full mixed-triangle
//! check.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Side};
use crate::hausdorff::{cross_hausdorff, MetricPair};
use crate::metric::{closed_ball, floyd_warshall, BallKind, FiniteMetricSpace, SubsetRef};

const ROUNDING_SLACK: f64 = 16.0 * f64::EPSILON;

/// Comparison slack shared by two spaces about to be glued.
pub(crate) fn pair_slack(left: &FiniteMetricSpace, right: &FiniteMetricSpace) -> f64 {
    let scale = left.diameter().max(right.diameter());
    left.tolerance().max(right.tolerance()).max(ROUNDING_SLACK * scale)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossMetric {
    left: FiniteMetricSpace,
    right: FiniteMetricSpace,
    cross: Vec<f64>,
    pseudo: bool,
    tolerance: f64,
}

impl CrossMetric {
    /// Validates `cross` (one row per left point) against both spaces.
    pub fn new(left: FiniteMetricSpace, right: FiniteMetricSpace, cross: Vec<Vec<f64>>, pseudo: bool) -> Result<Self> {
        if cross.len() != left.len() {
            return Err(Error::LengthMismatch(format!(
                "cross matrix has {} rows, left space has {} points",
                cross.len(),
                left.len()
            )));
        }
        let m = right.len();
        let mut flat = Vec::with_capacity(left.len() * m);
        for (i, row) in cross.iter().enumerate() {
            if row.len() != m {
                return Err(Error::LengthMismatch(format!("cross row {i} has {} entries, expected {m}", row.len())));
            }
            flat.extend_from_slice(row);
        }
        Self::from_flat(left, right, flat, pseudo)
    }

    fn from_flat(left: FiniteMetricSpace, right: FiniteMetricSpace, cross: Vec<f64>, pseudo: bool) -> Result<Self> {
        let scale = cross.iter().copied().fold(left.diameter().max(right.diameter()), f64::max);
        let tolerance = left.tolerance().max(right.tolerance()).max(ROUNDING_SLACK * scale);
        let glue = Self { left, right, cross, pseudo, tolerance };
        glue.validate()?;
        Ok(glue)
    }

    pub fn left(&self) -> &FiniteMetricSpace {
        &self.left
    }

    pub fn right(&self) -> &FiniteMetricSpace {
        &self.right
    }

    pub fn pseudo(&self) -> bool {
        self.pseudo
    }

    #[inline]
    pub fn cross(&self, i: usize, j: usize) -> f64 {
        self.cross[i * self.right.len() + j]
    }

    pub fn cross_matrix(&self) -> Vec<Vec<f64>> {
        let m = self.right.len();
        self.cross.chunks(m).map(|r| r.to_vec()).collect()
    }

    /// Comparison slack for the glued space: the larger space tolerance, but
    /// never below a few ulps of the largest distance involved.
    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// The same gluing seen from the other side.
    pub fn transposed(&self) -> CrossMetric {
        let (n, m) = (self.left.len(), self.right.len());
        let mut t = vec![0.0; n * m];
        for i in 0..n {
            for j in 0..m {
                t[j * n + i] = self.cross[i * m + j];
            }
        }
        CrossMetric {
            left: self.right.clone(),
            right: self.left.clone(),
            cross: t,
            pseudo: self.pseudo,
            tolerance: self.tolerance,
        }
    }

    pub fn check_joins(&self, left: &FiniteMetricSpace, right: &FiniteMetricSpace) -> Result<()> {
        if &self.left != left || &self.right != right {
            return Err(Error::GlueMismatch);
        }
        Ok(())
    }

    /// Minimum cross distance from left point `i` to right subset `t`.
    pub fn left_to_right(&self, i: usize, t: &SubsetRef) -> f64 {
        t.iter().map(|j| self.cross(i, j)).fold(f64::INFINITY, f64::min)
    }

    /// Minimum cross distance from right point `j` to left subset `s`.
    pub fn right_to_left(&self, j: usize, s: &SubsetRef) -> f64 {
        s.iter().map(|i| self.cross(i, j)).fold(f64::INFINITY, f64::min)
    }

    /// Runs all four mixed triangle families exhaustively within `τ`.
    pub fn validate(&self) -> Result<()> {
        let (n, m) = (self.left.len(), self.right.len());
        let tau = self.tolerance();
        let (dl, dr) = (&self.left, &self.right);
        for i in 0..n {
            for j in 0..m {
                let c = self.cross(i, j);
                if !c.is_finite() || c < -tau {
                    return Err(Error::InvalidGluing(format!("cross[{i}][{j}] = {c}")));
                }
                if !self.pseudo && c <= tau {
                    return Err(Error::InvalidGluing(format!(
                        "cross[{i}][{j}] = {c} is zero but the gluing is not marked pseudo"
                    )));
                }
            }
        }
        for i in 0..n {
            for i2 in 0..n {
                let d = dl.d(i, i2);
                for j in 0..m {
                    let (c1, c2) = (self.cross(i, j), self.cross(i2, j));
                    if c1 > d + c2 + tau {
                        return Err(Error::InvalidGluing(format!(
                            "cross[{i}][{j}] = {c1} > d_L({i},{i2}) + cross[{i2}][{j}] = {}",
                            d + c2
                        )));
                    }
                    if i < i2 && d > c1 + c2 + tau {
                        return Err(Error::InvalidGluing(format!(
                            "d_L({i},{i2}) = {d} > cross[{i}][{j}] + cross[{i2}][{j}] = {}",
                            c1 + c2
                        )));
                    }
                }
            }
        }
        for j in 0..m {
            for j2 in 0..m {
                let d = dr.d(j, j2);
                for i in 0..n {
                    let (c1, c2) = (self.cross(i, j), self.cross(i, j2));
                    if c1 > c2 + d + tau {
                        return Err(Error::InvalidGluing(format!(
                            "cross[{i}][{j}] = {c1} > cross[{i}][{j2}] + d_R({j2},{j}) = {}",
                            c2 + d
                        )));
                    }
                    if j < j2 && d > c1 + c2 + tau {
                        return Err(Error::InvalidGluing(format!(
                            "d_R({j},{j2}) = {d} > cross[{i}][{j}] + cross[{i}][{j2}] = {}",
                            c1 + c2
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Largest (pseudo-)metric on `left ⊔ right` that keeps both spaces intact
/// and puts each listed cross pair `(i, j)` within its cap.
///
/// The cross block is read off the shortest-path closure of both spaces plus
/// the capped cross edges. Any admissible gluing honoring the caps is
/// dominated entrywise by the result. Fails with [`Error::Infeasible`] when
/// the closure shortcuts a within-space distance by more than `τ`.
pub fn glue_from_constraints(
    left: &FiniteMetricSpace,
    right: &FiniteMetricSpace,
    edges: &[(usize, usize, f64)],
    pseudo: bool,
) -> Result<CrossMetric> {
    if edges.is_empty() {
        return Err(Error::EmptyConstraintSet);
    }
    let (n, m) = (left.len(), right.len());
    let total = n + m;
    let mut d = vec![f64::INFINITY; total * total];
    for i in 0..n {
        for i2 in 0..n {
            d[i * total + i2] = left.d(i, i2);
        }
    }
    for j in 0..m {
        for j2 in 0..m {
            d[(n + j) * total + n + j2] = right.d(j, j2);
        }
    }
    for &(i, j, cap) in edges {
        if i >= n || j >= m {
            return Err(Error::PreconditionViolated(format!("cross edge ({i},{j}) out of range")));
        }
        let ok = cap.is_finite() && (cap > 0.0 || (pseudo && cap >= 0.0));
        if !ok {
            return Err(Error::PreconditionViolated(format!("cap {cap} on ({i},{j}) not allowed")));
        }
        let (a, b) = (i * total + n + j, (n + j) * total + i);
        d[a] = d[a].min(cap);
        d[b] = d[b].min(cap);
    }
    floyd_warshall(total, &mut d);

    let tau = pair_slack(left, right);
    for i in 0..n {
        for i2 in (i + 1)..n {
            let glued = d[i * total + i2];
            if glued < left.d(i, i2) - tau {
                return Err(Error::Infeasible { side: Side::Left, i, j: i2, glued, original: left.d(i, i2) });
            }
        }
    }
    for j in 0..m {
        for j2 in (j + 1)..m {
            let glued = d[(n + j) * total + n + j2];
            if glued < right.d(j, j2) - tau {
                return Err(Error::Infeasible { side: Side::Right, i: j, j: j2, glued, original: right.d(j, j2) });
            }
        }
    }
    let mut cross = Vec::with_capacity(n * m);
    for i in 0..n {
        for j in 0..m {
            cross.push(d[i * total + n + j].min(d[(n + j) * total + i]));
        }
    }
    CrossMetric::from_flat(left.clone(), right.clone(), cross, pseudo)
}

/// `δ(x, y) = ε/2 + min_{x'} ( d_X(x, x') + d_Y(f(x'), y) )`.
///
/// Admissible whenever `f` has distortion at most `ε`; otherwise the
/// validation loop rejects the result.
pub fn glue_from_approximation(
    left: &FiniteMetricSpace,
    right: &FiniteMetricSpace,
    f: &[usize],
    eps: f64,
) -> Result<CrossMetric> {
    if !(eps > 0.0) {
        return Err(Error::NonPositiveEpsilon(eps));
    }
    if f.len() < left.len() {
        return Err(Error::DomainTooSmall(f.len()));
    }
    if let Some(&bad) = f.iter().find(|&&y| y >= right.len()) {
        return Err(Error::PreconditionViolated(format!("map value {bad} out of range")));
    }
    let (n, m) = (left.len(), right.len());
    let mut cross = Vec::with_capacity(n * m);
    for x in 0..n {
        for y in 0..m {
            let best = (0..n)
                .map(|x2| left.d(x, x2) + right.d(f[x2], y))
                .fold(f64::INFINITY, f64::min);
            cross.push(eps / 2.0 + best);
        }
    }
    CrossMetric::from_flat(left.clone(), right.clone(), cross, false)
}

/// `δ(x, y) = min { d_X(x, u) + 3ε/2 + d_Y(y, v) }` over `u` in the closed
/// `R`-ball of `A` and `v` with `d_Y(v, f(u)) ≤ ε`.
///
/// `f` is indexed by left point; it must be defined on the whole ball.
pub fn glue_from_rough_isometry(
    left: &FiniteMetricSpace,
    right: &FiniteMetricSpace,
    f: &[Option<usize>],
    a: &SubsetRef,
    eps: f64,
    radius: f64,
) -> Result<CrossMetric> {
    if !(eps > 0.0) {
        return Err(Error::NonPositiveEpsilon(eps));
    }
    if !(eps < radius) {
        return Err(Error::PreconditionViolated(format!("need eps < R, got eps={eps}, R={radius}")));
    }
    left.check_subset(a)?;
    let domain = closed_ball(left, a, radius)?;
    let tau = pair_slack(left, right);
    // admissible (u, v) anchors
    let mut anchors = Vec::new();
    for u in domain.iter() {
        let fu = f.get(u).copied().flatten().ok_or(Error::DomainTooSmall(u))?;
        if fu >= right.len() {
            return Err(Error::PreconditionViolated(format!("map value {fu} out of range")));
        }
        for v in 0..right.len() {
            if right.d(v, fu) <= eps + tau {
                anchors.push((u, v));
            }
        }
    }
    let (n, m) = (left.len(), right.len());
    let mut cross = Vec::with_capacity(n * m);
    for x in 0..n {
        for y in 0..m {
            let best = anchors
                .iter()
                .map(|&(u, v)| left.d(x, u) + right.d(y, v))
                .fold(f64::INFINITY, f64::min);
            cross.push(best + 1.5 * eps);
        }
    }
    CrossMetric::from_flat(left.clone(), right.clone(), cross, false)
}

/// `δ(x, y) = min_i ( d_X(x, xᵢ) + d_Y(y, yᵢ) ) + ε` for paired nets.
pub fn glue_from_nets(
    left: &FiniteMetricSpace,
    right: &FiniteMetricSpace,
    net_left: &[usize],
    net_right: &[usize],
    eps: f64,
) -> Result<CrossMetric> {
    if net_left.len() != net_right.len() {
        return Err(Error::NetLengthMismatch { left: net_left.len(), right: net_right.len() });
    }
    if net_left.is_empty() {
        return Err(Error::EmptyConstraintSet);
    }
    if !(eps > 0.0) {
        return Err(Error::NonPositiveEpsilon(eps));
    }
    if net_left.iter().any(|&i| i >= left.len()) || net_right.iter().any(|&j| j >= right.len()) {
        return Err(Error::PreconditionViolated("net index out of range".into()));
    }
    let (n, m) = (left.len(), right.len());
    let mut cross = Vec::with_capacity(n * m);
    for x in 0..n {
        for y in 0..m {
            let best = net_left
                .iter()
                .zip(net_right)
                .map(|(&xi, &yi)| left.d(x, xi) + right.d(y, yi))
                .fold(f64::INFINITY, f64::min);
            cross.push(best + eps);
        }
    }
    CrossMetric::from_flat(left.clone(), right.clone(), cross, false)
}

/// Outcome of testing a gluing for `(ε; A, B)`-admissibility.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpsAdmissibilityReport {
    pub eps: f64,
    pub hausdorff_ab: f64,
    pub covering_left: bool,
    pub covering_right: bool,
    pub verdict: bool,
    /// First left point of the closed `1/ε`-ball of `A` farther than `ε` from the right space.
    pub uncovered_left: Option<usize>,
    pub uncovered_right: Option<usize>,
}

/// Checks `d_H(A, B) < ε` and that the closed `1/ε`-balls around `A` and
/// `B` lie in the `ε`-neighborhood of the opposite space. Strict
/// comparisons are evaluated as `≤ ε + τ`.
pub fn check_eps_admissible(glue: &CrossMetric, a: &SubsetRef, b: &SubsetRef, eps: f64) -> EpsAdmissibilityReport {
    let hausdorff_ab = cross_hausdorff(glue, a, b);
    if !(eps > 0.0) {
        return EpsAdmissibilityReport {
            eps,
            hausdorff_ab,
            covering_left: false,
            covering_right: false,
            verdict: false,
            uncovered_left: None,
            uncovered_right: None,
        };
    }
    let tau = glue.tolerance();
    let radius = 1.0 / eps;
    let full_right = glue.right().full();
    let full_left = glue.left().full();
    // ball membership is a within-space question and uses that space's slack
    let (tl, tr) = (glue.left().tolerance(), glue.right().tolerance());
    let uncovered_left = (0..glue.left().len()).find(|&x| {
        glue.left().dist_to_subset(x, a) <= radius + tl && glue.left_to_right(x, &full_right) > eps + tau
    });
    let uncovered_right = (0..glue.right().len()).find(|&y| {
        glue.right().dist_to_subset(y, b) <= radius + tr && glue.right_to_left(y, &full_left) > eps + tau
    });
    let covering_left = uncovered_left.is_none();
    let covering_right = uncovered_right.is_none();
    EpsAdmissibilityReport {
        eps,
        hausdorff_ab,
        covering_left,
        covering_right,
        verdict: hausdorff_ab <= eps + tau && covering_left && covering_right,
        uncovered_left,
        uncovered_right,
    }
}

/// For each `a ∈ A` (left) the nearest right point, lowest index on ties.
pub fn transfer_subset(glue: &CrossMetric, a: &SubsetRef) -> Result<SubsetRef> {
    glue.left().check_subset(a)?;
    let m = glue.right().len();
    let picks = a
        .iter()
        .map(|i| {
            let mut best = 0;
            for j in 1..m {
                if glue.cross(i, j) < glue.cross(i, best) {
                    best = j;
                }
            }
            best
        })
        .collect();
    SubsetRef::new(m, picks)
}

/// The seven hypotheses of the paired-net bound, evaluated one by one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetHypotheses {
    /// Open `1/(2ε)`-ball of `A` inside the union of open `ε`-balls at the left net.
    pub left_ball_covered: bool,
    pub right_ball_covered: bool,
    /// `A` inside the union of the first `k` left balls.
    pub a_covered: bool,
    /// Each of the first `k` left balls meets `A`.
    pub a_met: bool,
    pub b_covered: bool,
    pub b_met: bool,
    /// `|d_X(xᵢ, xⱼ) − d_Y(yᵢ, yⱼ)| ≤ ε` for all `i, j`.
    pub nets_aligned: bool,
}

impl NetHypotheses {
    pub fn all(&self) -> bool {
        self.left_ball_covered
            && self.right_ball_covered
            && self.a_covered
            && self.a_met
            && self.b_covered
            && self.b_met
            && self.nets_aligned
    }
}

pub fn check_net_hypotheses(
    left: &MetricPair,
    right: &MetricPair,
    net_left: &[usize],
    net_right: &[usize],
    k: usize,
    eps: f64,
) -> Result<NetHypotheses> {
    if net_left.len() != net_right.len() {
        return Err(Error::NetLengthMismatch { left: net_left.len(), right: net_right.len() });
    }
    if !(eps > 0.0) {
        return Err(Error::NonPositiveEpsilon(eps));
    }
    if k > net_left.len() {
        return Err(Error::PreconditionViolated(format!("k = {k} exceeds net size {}", net_left.len())));
    }
    let side = |pair: &MetricPair, net: &[usize]| -> Result<(bool, bool, bool)> {
        let sp = &pair.space;
        if net.iter().any(|&i| i >= sp.len()) {
            return Err(Error::PreconditionViolated("net index out of range".into()));
        }
        let near = |x: usize, centers: &[usize]| centers.iter().any(|&c| sp.d(x, c) < eps);
        let ball = crate::metric::ball(sp, &pair.a, 1.0 / (2.0 * eps), BallKind::Open)?;
        let ball_covered = ball.is_none_or(|b| b.iter().all(|x| near(x, net)));
        let covered = pair.a.iter().all(|x| near(x, &net[..k]));
        let met = net[..k].iter().all(|&c| pair.a.iter().any(|x| sp.d(x, c) < eps));
        Ok((ball_covered, covered, met))
    };
    let (left_ball_covered, a_covered, a_met) = side(left, net_left)?;
    let (right_ball_covered, b_covered, b_met) = side(right, net_right)?;
    let tau = left.space.tolerance().max(right.space.tolerance());
    let mut nets_aligned = true;
    for i in 0..net_left.len() {
        for j in (i + 1)..net_left.len() {
            let gap = (left.space.d(net_left[i], net_left[j]) - right.space.d(net_right[i], net_right[j])).abs();
            if gap > eps + tau {
                nets_aligned = false;
            }
        }
    }
    Ok(NetHypotheses { left_ball_covered, right_ball_covered, a_covered, a_met, b_covered, b_met, nets_aligned })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{shortest_path_closure, WeightedGraph};

    fn line(n: usize, step: f64) -> FiniteMetricSpace {
        shortest_path_closure(&WeightedGraph::path(n, step).unwrap()).unwrap()
    }

    fn sub(n: usize, idx: &[usize]) -> SubsetRef {
        SubsetRef::new(n, idx.to_vec()).unwrap()
    }

    #[test]
    fn constraints_on_identical_spaces() {
        let s = line(4, 1.0);
        for c in [0.05, 0.5, 3.0] {
            let edges: Vec<_> = (0..4).map(|i| (i, i, c)).collect();
            let g = glue_from_constraints(&s, &s, &edges, false).unwrap();
            for i in 0..4 {
                for j in 0..4 {
                    let expect = (0..4).map(|k| s.d(i, k) + c + s.d(k, j)).fold(f64::INFINITY, f64::min);
                    assert!((g.cross(i, j) - expect).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn constraints_single_edge() {
        let s = line(2, 2.0);
        let g = glue_from_constraints(&s, &s, &[(0, 0, 0.1)], false).unwrap();
        assert!((g.cross(1, 1) - 4.1).abs() < 1e-12);
        assert!((g.cross(0, 1) - 2.1).abs() < 1e-12);
        assert!((g.cross(1, 0) - 2.1).abs() < 1e-12);
    }

    #[test]
    fn constraints_shortcut_is_infeasible() {
        let l = line(2, 10.0);
        let p = FiniteMetricSpace::from_matrix(&[vec![0.0]]).unwrap();
        match glue_from_constraints(&l, &p, &[(0, 0, 1.0), (1, 0, 1.0)], false) {
            Err(Error::Infeasible { side: Side::Left, i: 0, j: 1, .. }) => {}
            other => panic!("expected infeasible, got {other:?}"),
        }
        assert!(matches!(glue_from_constraints(&l, &p, &[], false), Err(Error::EmptyConstraintSet)));
        assert!(glue_from_constraints(&l, &p, &[(0, 0, 0.0)], false).is_err());
        let g = glue_from_constraints(&l, &p, &[(0, 0, 0.0)], true).unwrap();
        assert_eq!(g.cross(0, 0), 0.0);
    }

    #[test]
    fn approximation_gluing_formula() {
        let x = line(4, 1.0);
        let y = line(3, 1.2);
        let f = [0, 1, 2, 2];
        let eps = 1.1;
        let g = glue_from_approximation(&x, &y, &f, eps).unwrap();
        for i in 0..4 {
            assert_eq!(g.cross(i, f[i]), eps / 2.0);
            for j in 0..3 {
                assert!(g.cross(i, j) <= eps / 2.0 + y.d(f[i], j) + 1e-12);
            }
        }
        assert!(matches!(glue_from_approximation(&x, &y, &f, 0.0), Err(Error::NonPositiveEpsilon(_))));
        assert!(matches!(glue_from_approximation(&x, &y, &f[..2], 1.0), Err(Error::DomainTooSmall(2))));
    }

    #[test]
    fn approximation_gluing_rejects_large_distortion() {
        let x = line(3, 1.0);
        let f = [0, 0, 0];
        assert!(matches!(glue_from_approximation(&x, &x, &f, 0.5), Err(Error::InvalidGluing(_))));
    }

    #[test]
    fn rough_isometry_identity() {
        let x = line(5, 1.0);
        let a = sub(5, &[0]);
        let f: Vec<Option<usize>> = (0..5).map(Some).collect();
        for eps in [0.1, 0.7] {
            let g = glue_from_rough_isometry(&x, &x, &f, &a, eps, 3.0).unwrap();
            for i in 0..4 {
                assert!(g.cross(i, i) <= 1.5 * eps + 1e-12);
            }
            assert!((g.cross(4, 4) - (2.0 + 1.5 * eps)).abs() < 1e-12);
        }
        let partial: Vec<Option<usize>> = vec![Some(0), Some(1), None, None, None];
        assert!(matches!(
            glue_from_rough_isometry(&x, &x, &partial, &a, 0.5, 3.0),
            Err(Error::DomainTooSmall(2))
        ));
    }

    #[test]
    fn nets_formula() {
        let x = line(4, 1.0);
        let y = line(4, 1.05);
        let g = glue_from_nets(&x, &y, &[0, 3], &[0, 3], 0.2).unwrap();
        assert!((g.cross(0, 0) - 0.2).abs() < 1e-12);
        assert!((g.cross(3, 3) - 0.2).abs() < 1e-12);
        let single = glue_from_nets(&x, &y, &[1], &[2], 0.5).unwrap();
        assert!((single.cross(3, 0) - (x.d(3, 1) + y.d(0, 2) + 0.5)).abs() < 1e-12);
        assert!(matches!(glue_from_nets(&x, &y, &[0, 1], &[0], 0.2), Err(Error::NetLengthMismatch { .. })));
    }

    #[test]
    fn eps_admissibility() {
        let x = line(3, 1.0);
        let g = glue_from_approximation(&x, &x, &[0, 1, 2], 0.2).unwrap();
        let a = sub(3, &[0]);
        let r = check_eps_admissible(&g, &a, &a, 0.25);
        assert!(r.verdict, "{r:?}");
        let r = check_eps_admissible(&g, &a, &a, 0.05);
        assert!(!r.verdict);
        assert!(r.hausdorff_ab > 0.05);
    }

    #[test]
    fn transfer_picks_twin() {
        let x = line(4, 1.0);
        let g = glue_from_approximation(&x, &x, &[0, 1, 2, 3], 0.1).unwrap();
        let a = sub(4, &[1, 3]);
        assert_eq!(transfer_subset(&g, &a).unwrap(), a);
        assert_eq!(transfer_subset(&g, &sub(4, &[2])).unwrap(), sub(4, &[2]));
    }

    #[test]
    fn transpose_round_trip() {
        let x = line(3, 1.0);
        let y = line(2, 1.5);
        let g = glue_from_approximation(&x, &y, &[0, 1, 1], 1.0).unwrap();
        let t = g.transposed();
        t.validate().unwrap();
        assert_eq!(t.transposed(), g);
        assert_eq!(t.cross(1, 2), g.cross(2, 1));
    }
}
