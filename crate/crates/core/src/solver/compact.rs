//! Compact Gromov–Hausdorff distance of pairs and tuples.
//!
//! Any gluing with `d_H(Xᵏ, Yᵏ) ≤ t_k` yields relations `R_k ⊆ Xᵏ × Yᵏ`
//! that cover both sides and satisfy `|d_X(u,u') − d_Y(v,v')| ≤ t_k + t_l`
//! for `(u,v) ∈ R_k`, `(u',v') ∈ R_l`. Conversely, capping every edge of
//! such relations and closing under shortest paths shortcuts nothing, so the
//! infimum equals the minimum over relations of the budget LP in
//! [`super::lp`]. Relations are built from one map per side and level and
//! searched exhaustively by branch and bound.

use crate::error::{Error, Result};
use crate::gluing::glue_from_constraints;
use crate::hausdorff::{MetricPair, MetricTuple};
use crate::metric::{FiniteMetricSpace, SubsetRef};

use super::lp::{budget_split, budget_value};
use super::{check_resolution, DistanceBracket, NodeCounter, SearchBudget};

/// One unknown: a point on one side that needs a partner at a given level.
struct Var {
    kind: usize,
    /// Candidate edges `(u, v)` with `u` in the left space, `v` in the right.
    cands: Vec<(usize, usize)>,
}

/// A correspondence problem between two spaces with `kinds` levels.
pub(crate) struct Correspondence<'a> {
    left: &'a FiniteMetricSpace,
    right: &'a FiniteMetricSpace,
    kinds: usize,
    vars: Vec<Var>,
}

/// Optimal value, the chosen edge per variable, and the level costs.
pub(crate) struct Optimum {
    pub value: f64,
    pub edges: Vec<(usize, usize, usize)>,
    pub costs: Vec<Vec<f64>>,
}

impl<'a> Correspondence<'a> {
    /// `levels[k] = (S_k, T_k)`: every point of `S_k` needs a partner in
    /// `T_k` and vice versa.
    pub(crate) fn new(
        left: &'a FiniteMetricSpace,
        right: &'a FiniteMetricSpace,
        levels: &[(SubsetRef, SubsetRef)],
    ) -> Self {
        let mut vars = Vec::new();
        for (kind, (s, t)) in levels.iter().enumerate() {
            for u in s.iter() {
                vars.push(Var { kind, cands: t.iter().map(|v| (u, v)).collect() });
            }
            for v in t.iter() {
                vars.push(Var { kind, cands: s.iter().map(|u| (u, v)).collect() });
            }
        }
        Self { left, right, kinds: levels.len(), vars }
    }

    #[inline]
    fn diff(&self, e: (usize, usize), f: (usize, usize)) -> f64 {
        (self.left.d(e.0, f.0) - self.right.d(e.1, f.1)).abs()
    }

    /// Minimizes the budget LP over all choices.
    pub(crate) fn solve(&self, budget: SearchBudget) -> Result<Optimum> {
        let nv = self.vars.len();
        let k = self.kinds;
        let mut st = Search {
            p: self,
            best: f64::INFINITY,
            best_choice: vec![0; nv],
            choice: vec![usize::MAX; nv],
            counter: NodeCounter::new(budget),
        };
        // m[var][val][kind]: worst diff of that edge against assigned edges of `kind`
        let m: Vec<Vec<Vec<f64>>> = self.vars.iter().map(|v| vec![vec![0.0; k]; v.cands.len()]).collect();
        let c = vec![vec![0.0; k]; k];
        st.dfs(&c, &m)?;
        let edges = st
            .best_choice
            .iter()
            .zip(&self.vars)
            .map(|(&i, var)| (var.cands[i].0, var.cands[i].1, var.kind))
            .collect::<Vec<_>>();
        let mut costs = vec![vec![0.0; k]; k];
        for (a, &(u, v, ka)) in edges.iter().enumerate() {
            for &(u2, v2, kb) in &edges[a..] {
                let d = self.diff((u, v), (u2, v2));
                if d > costs[ka][kb] {
                    costs[ka][kb] = d;
                    costs[kb][ka] = d;
                }
            }
        }
        Ok(Optimum { value: budget_value(&costs), edges, costs })
    }
}

struct Search<'p, 'a> {
    p: &'p Correspondence<'a>,
    best: f64,
    best_choice: Vec<usize>,
    choice: Vec<usize>,
    counter: NodeCounter,
}

impl Search<'_, '_> {
    fn with_edge(c: &[Vec<f64>], kind: usize, row: &[f64]) -> Vec<Vec<f64>> {
        let mut c2 = c.to_vec();
        for (j, &x) in row.iter().enumerate() {
            if x > c2[kind][j] {
                c2[kind][j] = x;
                c2[j][kind] = x;
            }
        }
        c2
    }

    fn dfs(&mut self, c: &[Vec<f64>], m: &[Vec<Vec<f64>>]) -> Result<()> {
        self.counter.tick()?;
        let p = self.p;
        // pick the unassigned variable whose cheapest value is most expensive
        let mut pick: Option<(usize, Vec<(f64, usize)>)> = None;
        let mut pick_key = (f64::NEG_INFINITY, 0usize);
        for (vi, var) in p.vars.iter().enumerate() {
            if self.choice[vi] != usize::MAX {
                continue;
            }
            let mut opts: Vec<(f64, usize)> = Vec::with_capacity(var.cands.len());
            for val in 0..var.cands.len() {
                let cost = budget_value(&Self::with_edge(c, var.kind, &m[vi][val]));
                if cost < self.best {
                    opts.push((cost, val));
                }
            }
            if opts.is_empty() {
                return Ok(());
            }
            let min = opts.iter().map(|o| o.0).fold(f64::INFINITY, f64::min);
            // larger bound first, then fewer options
            let key = (min, usize::MAX - opts.len());
            if key.0 > pick_key.0 || (key.0 == pick_key.0 && key.1 > pick_key.1) || pick.is_none() {
                pick_key = key;
                pick = Some((vi, opts));
            }
        }
        let Some((vi, mut opts)) = pick else {
            let value = budget_value(c);
            if value < self.best {
                self.best = value;
                self.best_choice.clone_from(&self.choice);
            }
            return Ok(());
        };
        opts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let kind = p.vars[vi].kind;
        for (cost, val) in opts {
            if cost >= self.best {
                break;
            }
            let edge = p.vars[vi].cands[val];
            let c2 = Self::with_edge(c, kind, &m[vi][val]);
            let mut m2 = m.to_vec();
            for (wi, var) in p.vars.iter().enumerate() {
                if self.choice[wi] != usize::MAX || wi == vi {
                    continue;
                }
                for (wv, &cand) in var.cands.iter().enumerate() {
                    let d = p.diff(edge, cand);
                    if d > m2[wi][wv][kind] {
                        m2[wi][wv][kind] = d;
                    }
                }
            }
            self.choice[vi] = val;
            self.dfs(&c2, &m2)?;
            self.choice[vi] = usize::MAX;
        }
        Ok(())
    }
}

fn solve_levels(
    left: &FiniteMetricSpace,
    right: &FiniteMetricSpace,
    levels: &[(SubsetRef, SubsetRef)],
    resolution: f64,
    budget: SearchBudget,
) -> Result<DistanceBracket> {
    check_resolution(resolution, &[left, right])?;
    let problem = Correspondence::new(left, right, levels);
    let opt = problem.solve(budget)?;
    let (value, caps) = budget_split(&opt.costs);
    let edges: Vec<(usize, usize, f64)> = opt.edges.iter().map(|&(u, v, k)| (u, v, caps[k])).collect();
    let glue = glue_from_constraints(left, right, &edges, true)?;
    Ok(DistanceBracket {
        lo: value.min(opt.value),
        hi: value.max(opt.value),
        resolution,
        certificate_hi: Some(glue),
        certificate_lo: "exhaustive branch and bound over covering relations".into(),
    })
}

/// `inf_δ d_H(X, Y) + d_H(A, B)` over (pseudo-)admissible gluings.
pub fn gh_compact_pair(p: &MetricPair, q: &MetricPair, resolution: f64, budget: SearchBudget) -> Result<DistanceBracket> {
    let levels = [(p.space.full(), q.space.full()), (p.a.clone(), q.a.clone())];
    solve_levels(&p.space, &q.space, &levels, resolution, budget)
}

/// `inf_δ d_H(X, Y) + Σ_k d_H(Xᵏ, Yᵏ)`.
pub fn gh_compact_tuple(
    t: &MetricTuple,
    u: &MetricTuple,
    resolution: f64,
    budget: SearchBudget,
) -> Result<DistanceBracket> {
    if t.depth() != u.depth() {
        return Err(Error::ChainLengthMismatch { left: t.depth(), right: u.depth() });
    }
    let mut levels = vec![(t.space.full(), u.space.full())];
    levels.extend(t.chain.iter().cloned().zip(u.chain.iter().cloned()));
    solve_levels(&t.space, &u.space, &levels, resolution, budget)
}

/// Plain Gromov–Hausdorff distance `½ min_R dis(R)` of two spaces; the
/// certificate gluing has `d_H(X, Y)` at most the reported value.
pub fn gh_plain(x: &FiniteMetricSpace, y: &FiniteMetricSpace, resolution: f64, budget: SearchBudget) -> Result<DistanceBracket> {
    solve_levels(x, y, &[(x.full(), y.full())], resolution, budget)
}
