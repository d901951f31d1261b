//! Hausdorff distance inside one space, and its pair/tuple sums across a
//! gluing.

use crate::error::{Error, Result};
use crate::gluing::CrossMetric;
use crate::metric::{FiniteMetricSpace, SubsetRef};

/// A space with one distinguished nonempty subset, `(X, A)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricPair {
    pub space: FiniteMetricSpace,
    pub a: SubsetRef,
}

impl MetricPair {
    pub fn new(space: FiniteMetricSpace, a: SubsetRef) -> Result<Self> {
        space.check_subset(&a)?;
        Ok(Self { space, a })
    }

    /// `(X, X)`.
    pub fn whole(space: FiniteMetricSpace) -> Self {
        let a = space.full();
        Self { space, a }
    }

    pub fn len(&self) -> usize {
        self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        self.space.is_empty()
    }
}

/// A space with a nested chain `X¹ ⊆ X² ⊆ … ⊆ Xᴺ`, stored innermost first.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricTuple {
    pub space: FiniteMetricSpace,
    pub chain: Vec<SubsetRef>,
}

impl MetricTuple {
    pub fn new(space: FiniteMetricSpace, chain: Vec<SubsetRef>) -> Result<Self> {
        if chain.is_empty() {
            return Err(Error::InvalidSubset("tuple chain must have at least one level".into()));
        }
        for s in &chain {
            space.check_subset(s)?;
        }
        for (k, w) in chain.windows(2).enumerate() {
            if !w[0].is_subset_of(&w[1]) {
                return Err(Error::InvalidSubset(format!("level {} is not contained in level {}", k + 1, k + 2)));
            }
        }
        Ok(Self { space, chain })
    }

    /// Chain length `N`.
    pub fn depth(&self) -> usize {
        self.chain.len()
    }

    pub fn from_pair(pair: &MetricPair) -> Self {
        Self { space: pair.space.clone(), chain: vec![pair.a.clone()] }
    }
}

/// `max_{a∈A} d(a, B)`.
pub fn directed_hausdorff(space: &FiniteMetricSpace, a: &SubsetRef, b: &SubsetRef) -> f64 {
    a.iter().map(|i| space.dist_to_subset(i, b)).fold(0.0, f64::max)
}

/// Hausdorff distance between two subsets of one space.
pub fn hausdorff(space: &FiniteMetricSpace, a: &SubsetRef, b: &SubsetRef) -> Result<f64> {
    if a.universe() != b.universe() {
        return Err(Error::DifferentAmbient { left: a.universe(), right: b.universe() });
    }
    space.check_subset(a)?;
    Ok(directed_hausdorff(space, a, b).max(directed_hausdorff(space, b, a)))
}

/// Hausdorff distance in the glued space between `s ⊆ left` and `t ⊆ right`.
pub fn cross_hausdorff(glue: &CrossMetric, s: &SubsetRef, t: &SubsetRef) -> f64 {
    let forward = s
        .iter()
        .map(|i| t.iter().map(|j| glue.cross(i, j)).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max);
    let backward = t
        .iter()
        .map(|j| s.iter().map(|i| glue.cross(i, j)).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max);
    forward.max(backward)
}

/// `d_H(X, Y) + d_H(A, B)` measured in the gluing.
pub fn pair_hausdorff(glue: &CrossMetric, left: &MetricPair, right: &MetricPair) -> Result<f64> {
    glue.check_joins(&left.space, &right.space)?;
    left.space.check_subset(&left.a)?;
    right.space.check_subset(&right.a)?;
    let spaces = cross_hausdorff(glue, &left.space.full(), &right.space.full());
    Ok(spaces + cross_hausdorff(glue, &left.a, &right.a))
}

/// `d_H(X, Y) + Σ_k d_H(Xᵏ, Yᵏ)` measured in the gluing.
pub fn tuple_hausdorff(glue: &CrossMetric, left: &MetricTuple, right: &MetricTuple) -> Result<f64> {
    if left.depth() != right.depth() {
        return Err(Error::ChainLengthMismatch { left: left.depth(), right: right.depth() });
    }
    glue.check_joins(&left.space, &right.space)?;
    let mut total = cross_hausdorff(glue, &left.space.full(), &right.space.full());
    for (s, t) in left.chain.iter().zip(&right.chain) {
        total += cross_hausdorff(glue, s, t);
    }
    Ok(total)
}
