//! Finite metric spaces, index subsets, balls and shortest-path closures.
//!
//! Every other module works inside a [`FiniteMetricSpace`]: a labeled point
//! set whose distance matrix has been checked against the metric axioms. All
//! threshold comparisons use the space's tolerance `τ`.


use petgraph::algo::dijkstra;
use petgraph::graph::{NodeIndex, UnGraph};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Violation};

/// Relative tolerance used when a space is built without an explicit one.
pub const DEFAULT_RELATIVE_TOLERANCE: f64 = 1e-9;

/// A labeled point set with a validated, symmetric distance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    n: usize,
    dist: Vec<f64>,
    tolerance: f64,
}

/// Validates `matrix` as a metric with comparison slack `tolerance`.
///
/// Labels default to the decimal indices. On failure every violated axiom is
/// reported, triangle violations as `(i, j, k)` with `i < k` meaning
/// `d[i][k] > d[i][j] + d[j][k] + τ`.
pub fn validate_metric(matrix: &[Vec<f64>], tolerance: f64) -> Result<FiniteMetricSpace> {
    let labels = (0..matrix.len()).map(|i| i.to_string()).collect();
    FiniteMetricSpace::with_tolerance(labels, matrix, tolerance)
}

impl FiniteMetricSpace {
    /// Validates with the default tolerance `1e-9 × max entry`.
    pub fn new(labels: Vec<String>, matrix: &[Vec<f64>]) -> Result<Self> {
        let scale = matrix
            .iter()
            .flat_map(|row| row.iter().copied())
            .filter(|x| x.is_finite())
            .fold(0.0_f64, f64::max);
        Self::with_tolerance(labels, matrix, DEFAULT_RELATIVE_TOLERANCE * scale)
    }

    /// Convenience constructor with index labels and the default tolerance.
    pub fn from_matrix(matrix: &[Vec<f64>]) -> Result<Self> {
        let labels = (0..matrix.len()).map(|i| i.to_string()).collect();
        Self::new(labels, matrix)
    }

    pub fn with_tolerance(labels: Vec<String>, matrix: &[Vec<f64>], tolerance: f64) -> Result<Self> {
        let n = matrix.len();
        if n == 0 {
            return Err(Error::EmptySpace);
        }
        if labels.len() != n {
            return Err(Error::LengthMismatch(format!(
                "{} labels for a {n}x{n} matrix",
                labels.len()
            )));
        }
        if !(tolerance.is_finite() && tolerance >= 0.0) {
            return Err(Error::PreconditionViolated(format!("tolerance {tolerance} must be finite and nonnegative")));
        }
        for (row_idx, row) in matrix.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotSquare { rows: n, row: row_idx, len: row.len() });
            }
            if let Some(j) = row.iter().position(|x| !x.is_finite()) {
                return Err(Error::NonFinite { i: row_idx, j });
            }
        }

        let mut violations = Vec::new();
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            if matrix[i][i] != 0.0 {
                violations.push(Violation::NonzeroDiagonal { i });
            }
            for j in (i + 1)..n {
                let (a, b) = (matrix[i][j], matrix[j][i]);
                if (a - b).abs() > tolerance {
                    violations.push(Violation::AsymmetricMatrix { i, j });
                }
                if a < 0.0 || b < 0.0 {
                    violations.push(Violation::NegativeEntry { i, j });
                } else if a <= tolerance || b <= tolerance {
                    violations.push(Violation::ZeroOffDiagonal { i, j });
                }
                // canonical storage: upper triangle wins
                dist[i * n + j] = a;
                dist[j * n + i] = a;
            }
        }
        if violations.is_empty() {
            for i in 0..n {
                for k in (i + 1)..n {
                    let dik = dist[i * n + k];
                    for j in 0..n {
                        if j == i || j == k {
                            continue;
                        }
                        if dik > dist[i * n + j] + dist[j * n + k] + tolerance {
                            violations.push(Violation::TriangleViolation { i, j, k });
                        }
                    }
                }
            }
        }
        if !violations.is_empty() {
            return Err(Error::InvalidMetric(violations));
        }
        Ok(Self { labels, n, dist, tolerance })
    }

    /// Builds a space from a matrix already known to be a metric.
    pub(crate) fn from_trusted(labels: Vec<String>, n: usize, dist: Vec<f64>, tolerance: f64) -> Self {
        debug_assert_eq!(dist.len(), n * n);
        Self { labels, n, dist, tolerance }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.dist[i * self.n..(i + 1) * self.n]
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn matrix(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn full(&self) -> SubsetRef {
        SubsetRef::full(self.n)
    }

    pub fn diameter(&self) -> f64 {
        self.dist.iter().copied().fold(0.0, f64::max)
    }

    /// Minimum distance from point `i` to the members of `subset`.
    pub fn dist_to_subset(&self, i: usize, subset: &SubsetRef) -> f64 {
        subset.iter().map(|j| self.d(i, j)).fold(f64::INFINITY, f64::min)
    }

    /// Same space with a different comparison tolerance.
    pub fn with_tolerance_value(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub(crate) fn check_subset(&self, subset: &SubsetRef) -> Result<()> {
        if subset.universe() != self.n {
            return Err(Error::DifferentAmbient { left: subset.universe(), right: self.n });
        }
        Ok(())
    }
}

/// A nonempty, strictly increasing set of point indices into a space of
/// `universe` points.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetRef {
    universe: usize,
    indices: Vec<usize>,
}

impl SubsetRef {
    /// Sorts and deduplicates `indices`; rejects empty or out-of-range input.
    pub fn new(universe: usize, mut indices: Vec<usize>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidSubset("subset must be nonempty".into()));
        }
        indices.sort_unstable();
        indices.dedup();
        if let Some(&bad) = indices.iter().find(|&&i| i >= universe) {
            return Err(Error::InvalidSubset(format!("index {bad} out of range for {universe} points")));
        }
        Ok(Self { universe, indices })
    }

    pub fn full(universe: usize) -> Self {
        Self { universe, indices: (0..universe).collect() }
    }

    pub fn singleton(universe: usize, i: usize) -> Result<Self> {
        Self::new(universe, vec![i])
    }

    pub fn from_labels(space: &FiniteMetricSpace, labels: &[String]) -> Result<Self> {
        let idx = labels
            .iter()
            .map(|l| {
                space
                    .index_of(l)
                    .ok_or_else(|| Error::InvalidSubset(format!("unknown label {l:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(space.len(), idx)
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices.iter().copied()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    pub fn is_subset_of(&self, other: &SubsetRef) -> bool {
        self.universe == other.universe && self.iter().all(|i| other.contains(i))
    }

    /// Indicator vector over the universe.
    pub fn mask(&self) -> Vec<bool> {
        let mut m = vec![false; self.universe];
        for i in self.iter() {
            m[i] = true;
        }
        m
    }

    pub fn labels<'a>(&self, space: &'a FiniteMetricSpace) -> Vec<&'a str> {
        self.iter().map(|i| space.labels()[i].as_str()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BallKind {
    /// `d(x, center) < r`
    Open,
    /// `d(x, center) ≤ r + τ`
    Closed,
}

/// Points within `r` of `center`. Returns `None` only for an open ball of
/// radius zero, which is empty.
pub fn ball(space: &FiniteMetricSpace, center: &SubsetRef, r: f64, kind: BallKind) -> Result<Option<SubsetRef>> {
    if r < 0.0 || r.is_nan() {
        return Err(Error::NegativeRadius(r));
    }
    space.check_subset(center)?;
    let tau = space.tolerance();
    let members: Vec<usize> = (0..space.len())
        .filter(|&i| {
            let d = space.dist_to_subset(i, center);
            match kind {
                BallKind::Open => d < r,
                BallKind::Closed => d <= r + tau,
            }
        })
        .collect();
    if members.is_empty() {
        return Ok(None);
    }
    Ok(Some(SubsetRef { universe: space.len(), indices: members }))
}

/// Closed ball; never empty because it contains `center`.
pub fn closed_ball(space: &FiniteMetricSpace, center: &SubsetRef, r: f64) -> Result<SubsetRef> {
    Ok(ball(space, center, r, BallKind::Closed)?.expect("closed ball contains its center"))
}

pub fn diam(space: &FiniteMetricSpace, subset: &SubsetRef) -> f64 {
    let mut best = 0.0_f64;
    for (p, i) in subset.iter().enumerate() {
        for j in subset.indices()[p + 1..].iter().copied() {
            best = best.max(space.d(i, j));
        }
    }
    best
}

/// Induced subspace on `subset`, keeping labels and tolerance.
pub fn restrict(space: &FiniteMetricSpace, subset: &SubsetRef) -> FiniteMetricSpace {
    let idx = subset.indices();
    let k = idx.len();
    let mut dist = Vec::with_capacity(k * k);
    for &i in idx {
        for &j in idx {
            dist.push(space.d(i, j));
        }
    }
    let labels = idx.iter().map(|&i| space.labels()[i].clone()).collect();
    FiniteMetricSpace::from_trusted(labels, k, dist, space.tolerance())
}

/// Undirected graph with positive edge weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedGraph {
    vertices: usize,
    edges: Vec<(usize, usize, f64)>,
}

impl WeightedGraph {
    pub fn new(vertices: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        if vertices == 0 {
            return Err(Error::EmptySpace);
        }
        for &(u, v, w) in &edges {
            if u >= vertices || v >= vertices {
                return Err(Error::InvalidGraph(format!("edge ({u},{v}) out of range")));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self loop at {u}")));
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidGraph(format!("edge ({u},{v}) has weight {w}")));
            }
        }
        Ok(Self { vertices, edges })
    }

    /// Path `0 - 1 - ... - (n-1)` with the given step length.
    pub fn path(n: usize, step: f64) -> Result<Self> {
        Self::new(n, (1..n).map(|i| (i - 1, i, step)).collect())
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }
}

/// All-pairs shortest-path metric of a connected graph, labeled by vertex
/// index, with tolerance zero.
pub fn shortest_path_closure(g: &WeightedGraph) -> Result<FiniteMetricSpace> {
    let n = g.vertices();
    let mut graph: UnGraph<(), f64> = UnGraph::with_capacity(n, g.edges().len());
    let nodes: Vec<NodeIndex> = (0..n).map(|_| graph.add_node(())).collect();
    for &(u, v, w) in g.edges() {
        graph.add_edge(nodes[u], nodes[v], w);
    }
    let mut dist = vec![0.0; n * n];
    for s in 0..n {
        let reached = dijkstra(&graph, nodes[s], None, |e| *e.weight());
        if reached.len() != n {
            let missing = (0..n).find(|v| !reached.contains_key(&nodes[*v])).unwrap_or(0);
            return Err(Error::DisconnectedGraph(missing));
        }
        for (node, d) in reached {
            dist[s * n + node.index()] = d;
        }
    }
    // symmetrize exactly; Dijkstra sums may differ in the last bit
    for i in 0..n {
        for j in (i + 1)..n {
            let m = dist[i * n + j].min(dist[j * n + i]);
            dist[i * n + j] = m;
            dist[j * n + i] = m;
        }
    }
    // relax until the float triangle inequality holds with zero slack
    loop {
        let before = dist.clone();
        floyd_warshall(n, &mut dist);
        if before == dist {
            break;
        }
    }
    let labels = (0..n).map(|i| i.to_string()).collect();
    Ok(FiniteMetricSpace::from_trusted(labels, n, dist, 0.0))
}

/// In-place Floyd–Warshall on a dense `n × n` row-major matrix; `INFINITY`
/// marks a missing edge. Zero weights are allowed.
pub(crate) fn floyd_warshall(n: usize, d: &mut [f64]) {
    for k in 0..n {
        for i in 0..n {
            let dik = d[i * n + k];
            if !dik.is_finite() {
                continue;
            }
            for j in 0..n {
                let via = dik + d[k * n + j];
                if via < d[i * n + j] {
                    d[i * n + j] = via;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(n: usize) -> FiniteMetricSpace {
        shortest_path_closure(&WeightedGraph::path(n, 1.0).unwrap()).unwrap()
    }

    fn sub(n: usize, idx: &[usize]) -> SubsetRef {
        SubsetRef::new(n, idx.to_vec()).unwrap()
    }

    #[test]
    fn line_metric_validates() {
        let m = vec![vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 1.0], vec![2.0, 1.0, 0.0]];
        let s = validate_metric(&m, 0.0).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.d(0, 2), 2.0);
    }

    #[test]
    fn triangle_violation_reported() {
        let m = vec![vec![0.0, 1.0, 5.0], vec![1.0, 0.0, 1.0], vec![5.0, 1.0, 0.0]];
        match validate_metric(&m, 0.0) {
            Err(Error::InvalidMetric(v)) => {
                assert_eq!(v, vec![Violation::TriangleViolation { i: 0, j: 1, k: 2 }]);
            }
            other => panic!("expected triangle violation, got {other:?}"),
        }
    }

    #[test]
    fn axiom_violations() {
        let asym = vec![vec![0.0, 1.0], vec![2.0, 0.0]];
        assert!(matches!(validate_metric(&asym, 0.0), Err(Error::InvalidMetric(v)) if v[0] == Violation::AsymmetricMatrix { i: 0, j: 1 }));
        let neg = vec![vec![0.0, -1.0], vec![-1.0, 0.0]];
        assert!(matches!(validate_metric(&neg, 0.0), Err(Error::InvalidMetric(v)) if v[0] == Violation::NegativeEntry { i: 0, j: 1 }));
        let zero = vec![vec![0.0, 0.0], vec![0.0, 0.0]];
        assert!(matches!(validate_metric(&zero, 0.0), Err(Error::InvalidMetric(v)) if v[0] == Violation::ZeroOffDiagonal { i: 0, j: 1 }));
        let ragged = vec![vec![0.0, 1.0], vec![1.0]];
        assert!(matches!(validate_metric(&ragged, 0.0), Err(Error::NotSquare { .. })));
        let nan = vec![vec![0.0, f64::NAN], vec![f64::NAN, 0.0]];
        assert!(matches!(validate_metric(&nan, 0.0), Err(Error::NonFinite { .. })));
    }

    #[test]
    fn near_symmetric_is_canonicalized() {
        let m = vec![vec![0.0, 1.0], vec![1.0 + 1e-12, 0.0]];
        let s = validate_metric(&m, 1e-9).unwrap();
        assert_eq!(s.d(0, 1), s.d(1, 0));
    }

    #[test]
    fn open_ball_on_line() {
        let s = line(4);
        let b = ball(&s, &sub(4, &[0]), 1.5, BallKind::Open).unwrap().unwrap();
        assert_eq!(b.indices(), &[0, 1]);
        let b = ball(&s, &sub(4, &[0, 3]), 1.5, BallKind::Open).unwrap().unwrap();
        assert_eq!(b.indices(), &[0, 1, 2, 3]);
    }

    #[test]
    fn zero_radius_balls() {
        let s = line(4);
        let a = sub(4, &[1, 3]);
        assert_eq!(ball(&s, &a, 0.0, BallKind::Closed).unwrap().unwrap(), a);
        assert_eq!(ball(&s, &a, 0.0, BallKind::Open).unwrap(), None);
        assert!(matches!(ball(&s, &a, -1.0, BallKind::Open), Err(Error::NegativeRadius(_))));
    }

    #[test]
    fn diam_and_restrict() {
        let s = line(4);
        assert_eq!(diam(&s, &sub(4, &[2])), 0.0);
        assert_eq!(diam(&s, &s.full()), 3.0);
        let r = restrict(&s, &sub(4, &[0, 3]));
        assert_eq!(r.matrix(), vec![vec![0.0, 3.0], vec![3.0, 0.0]]);
        assert_eq!(restrict(&s, &s.full()), s);
        assert_eq!(restrict(&s, &sub(4, &[1])).matrix(), vec![vec![0.0]]);
    }

    #[test]
    fn closure_examples() {
        let tri = WeightedGraph::new(3, vec![(0, 1, 1.0), (1, 2, 1.0), (0, 2, 5.0)]).unwrap();
        let s = shortest_path_closure(&tri).unwrap();
        assert_eq!(s.d(0, 2), 2.0);
        let single = shortest_path_closure(&WeightedGraph::new(1, vec![]).unwrap()).unwrap();
        assert_eq!(single.matrix(), vec![vec![0.0]]);
        let disc = WeightedGraph::new(3, vec![(0, 1, 1.0)]).unwrap();
        assert!(matches!(shortest_path_closure(&disc), Err(Error::DisconnectedGraph(2))));
        assert!(WeightedGraph::new(2, vec![(0, 1, 0.0)]).is_err());
    }

    #[test]
    fn subset_canonical() {
        let s = SubsetRef::new(5, vec![3, 1, 3]).unwrap();
        assert_eq!(s.indices(), &[1, 3]);
        assert!(SubsetRef::new(5, vec![]).is_err());
        assert!(SubsetRef::new(5, vec![5]).is_err());
    }
}
