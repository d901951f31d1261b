//! Shared generators and brute-force oracles. The oracles use only plain
//! matrices and never call into the library.

#![allow(dead_code)]

use std::path::PathBuf;

use metric_pairs::hausdorff::{MetricPair, MetricTuple};
use metric_pairs::{FiniteMetricSpace, SubsetRef};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Matrix = Vec<Vec<f64>>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn read_fixture(name: &str) -> serde_json::Value {
    let text = std::fs::read_to_string(fixture_path(name)).unwrap_or_else(|e| panic!("fixture {name}: {e}"));
    serde_json::from_str(&text).unwrap()
}

/// Floyd–Warshall repeated to a fixpoint, on a complete weight matrix.
pub fn close(mut d: Matrix) -> Matrix {
    let n = d.len();
    loop {
        let mut changed = false;
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let via = d[i][k] + d[k][j];
                    if via < d[i][j] {
                        d[i][j] = via;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return d;
        }
    }
}

/// Closure of a complete graph with weights uniform in `[lo, hi]`.
pub fn random_metric(r: &mut impl Rng, n: usize, lo: f64, hi: f64) -> Matrix {
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let w = r.gen_range(lo..=hi);
            d[i][j] = w;
            d[j][i] = w;
        }
    }
    close(d)
}

/// Closure of a complete graph with weights `0.1 · k`, `k` in `1..=max_k`.
pub fn random_grid_metric(r: &mut impl Rng, n: usize, max_k: u32) -> Matrix {
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let w = f64::from(r.gen_range(1..=max_k)) / 10.0;
            d[i][j] = w;
            d[j][i] = w;
        }
    }
    close(d)
}

pub fn random_subset(r: &mut impl Rng, n: usize) -> Vec<usize> {
    loop {
        let s: Vec<usize> = (0..n).filter(|_| r.gen_bool(0.5)).collect();
        if !s.is_empty() {
            return s;
        }
    }
}

/// A random nested chain of `depth` nonempty subsets, innermost first.
pub fn random_chain(r: &mut impl Rng, n: usize, depth: usize) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(r);
    let mut cuts: Vec<usize> = (0..depth).map(|_| r.gen_range(1..=n)).collect();
    cuts.sort_unstable();
    cuts.into_iter()
        .map(|c| {
            let mut s = order[..c].to_vec();
            s.sort_unstable();
            s
        })
        .collect()
}

pub fn line(n: usize, step: f64) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| (i as f64 - j as f64).abs() * step).collect()).collect()
}

pub fn space(d: &Matrix) -> FiniteMetricSpace {
    FiniteMetricSpace::from_matrix(d).unwrap()
}

pub fn subset(n: usize, s: &[usize]) -> SubsetRef {
    SubsetRef::new(n, s.to_vec()).unwrap()
}

pub fn pair(d: &Matrix, a: &[usize]) -> MetricPair {
    MetricPair::new(space(d), subset(d.len(), a)).unwrap()
}

pub fn tuple(d: &Matrix, chain: &[Vec<usize>]) -> MetricTuple {
    MetricTuple::new(space(d), chain.iter().map(|s| subset(d.len(), s)).collect()).unwrap()
}

// ---------------------------------------------------------------- oracles

/// Max-min Hausdorff by double loop over an arbitrary distance function.
pub fn hausdorff_by(dist: impl Fn(usize, usize) -> f64, a: &[usize], b: &[usize]) -> f64 {
    let mut h = 0.0f64;
    for &x in a {
        let mut m = f64::INFINITY;
        for &y in b {
            m = m.min(dist(x, y));
        }
        h = h.max(m);
    }
    for &y in b {
        let mut m = f64::INFINITY;
        for &x in a {
            m = m.min(dist(x, y));
        }
        h = h.max(m);
    }
    h
}

pub fn hausdorff_oracle(d: &Matrix, a: &[usize], b: &[usize]) -> f64 {
    hausdorff_by(|i, j| d[i][j], a, b)
}

/// Shortest simple-path lengths by exhaustive DFS; `None` where unreachable.
pub fn paths_oracle(n: usize, edges: &[(usize, usize, f64)]) -> Vec<Vec<Option<f64>>> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v, w) in edges {
        adj[u].push((v, w));
        adj[v].push((u, w));
    }
    let mut best = vec![vec![None; n]; n];
    fn dfs(
        adj: &[Vec<(usize, f64)>],
        start: usize,
        u: usize,
        len: f64,
        seen: &mut Vec<bool>,
        best: &mut Vec<Vec<Option<f64>>>,
    ) {
        let b = &mut best[start][u];
        if b.is_none_or(|x| len < x) {
            *b = Some(len);
        }
        for &(v, w) in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                dfs(adj, start, v, len + w, seen, best);
                seen[v] = false;
            }
        }
    }
    for s in 0..n {
        let mut seen = vec![false; n];
        seen[s] = true;
        dfs(&adj, s, s, 0.0, &mut seen, &mut best);
    }
    best
}

/// Union graph of two spaces plus capped cross edges, closed by path
/// enumeration. `Err((i, j))` names the first left (then right) pair whose
/// distance is shortcut.
pub fn constraint_gluing_oracle(l: &Matrix, r: &Matrix, edges: &[(usize, usize, f64)]) -> Result<Matrix, (char, usize, usize)> {
    let (n, m) = (l.len(), r.len());
    let mut all = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            all.push((i, j, l[i][j]));
        }
    }
    for i in 0..m {
        for j in (i + 1)..m {
            all.push((n + i, n + j, r[i][j]));
        }
    }
    for &(i, j, c) in edges {
        all.push((i, n + j, c));
    }
    let p = paths_oracle(n + m, &all);
    let slack = 1e-12;
    for i in 0..n {
        for j in (i + 1)..n {
            if p[i][j].unwrap() < l[i][j] - slack {
                return Err(('L', i, j));
            }
        }
    }
    for i in 0..m {
        for j in (i + 1)..m {
            if p[n + i][n + j].unwrap() < r[i][j] - slack {
                return Err(('R', i, j));
            }
        }
    }
    Ok((0..n).map(|i| (0..m).map(|j| p[i][n + j].unwrap()).collect()).collect())
}

/// All mixed triangle inequalities of `X ⊔ Y` (pseudo: cross ≥ 0).
pub fn gluing_is_valid(l: &Matrix, r: &Matrix, cross: &Matrix, slack: f64) -> bool {
    let (n, m) = (l.len(), r.len());
    for i in 0..n {
        for j in 0..m {
            let c = cross[i][j];
            if c < 0.0 {
                return false;
            }
            for k in 0..n {
                if c > l[i][k] + cross[k][j] + slack || l[i][k] > c + cross[k][j] + slack {
                    return false;
                }
            }
            for k in 0..m {
                if c > cross[i][k] + r[k][j] + slack || r[j][k] > c + cross[i][k] + slack {
                    return false;
                }
            }
        }
    }
    true
}

fn subsets_by_size(items: &[usize]) -> Vec<Vec<usize>> {
    let k = items.len();
    let mut all: Vec<Vec<usize>> = (0u32..(1 << k))
        .map(|mask| (0..k).filter(|&b| mask >> b & 1 == 1).map(|b| items[b]).collect())
        .collect();
    all.sort_by_key(Vec::len);
    all
}

fn covers(d: &Matrix, centers: &[usize], set: &[usize], r: f64) -> bool {
    set.iter().all(|&a| centers.iter().any(|&c| d[c][a] < r))
}

/// Smallest number of open `r`-balls centred in `X` covering `set`.
pub fn outer_cover_oracle(d: &Matrix, set: &[usize], r: f64) -> usize {
    let all: Vec<usize> = (0..d.len()).collect();
    subsets_by_size(&all).into_iter().find(|c| covers(d, c, set, r)).unwrap().len()
}

/// Smallest number of open `r`-balls centred in `set` covering `set`.
pub fn inner_cover_oracle(d: &Matrix, set: &[usize], r: f64) -> usize {
    subsets_by_size(set).into_iter().find(|c| covers(d, c, set, r)).unwrap().len()
}

/// Largest number of pairwise disjoint open `r`-balls (in `X`) centred in `set`.
pub fn packing_oracle(d: &Matrix, set: &[usize], r: f64) -> usize {
    let disjoint = |x: usize, y: usize| (0..d.len()).all(|z| !(d[z][x] < r && d[z][y] < r));
    subsets_by_size(set)
        .into_iter()
        .filter(|s| s.iter().enumerate().all(|(i, &x)| s[i + 1..].iter().all(|&y| disjoint(x, y))))
        .map(|s| s.len())
        .max()
        .unwrap()
}

/// Largest `r`-separated subset of `set` of size at least 2, if any.
pub fn separation_oracle(d: &Matrix, set: &[usize], r: f64) -> Option<usize> {
    subsets_by_size(set)
        .into_iter()
        .filter(|s| s.len() >= 2 && s.iter().enumerate().all(|(i, &x)| s[i + 1..].iter().all(|&y| d[x][y] >= r)))
        .map(|s| s.len())
        .max()
}

/// Exhaustive grid over cross matrices (entries `k · step` in `[0, top]`):
/// the smallest `d_H(X, Y) + Σ_levels d_H(Xᵏ, Yᵏ)` over valid pseudo-gluings.
pub fn tuple_gh_grid_oracle(l: &Matrix, lc: &[Vec<usize>], r: &Matrix, rc: &[Vec<usize>], step: f64, top: f64) -> f64 {
    let (n, m) = (l.len(), r.len());
    let steps = (top / step).round() as usize;
    let cells = n * m;
    let mut idx = vec![0usize; cells];
    let lx: Vec<usize> = (0..n).collect();
    let ry: Vec<usize> = (0..m).collect();
    let mut best = f64::INFINITY;
    let mut cross = vec![vec![0.0; m]; n];
    loop {
        for (c, &k) in idx.iter().enumerate() {
            cross[c / m][c % m] = k as f64 * step;
        }
        if gluing_is_valid(l, r, &cross, 1e-9) {
            let dist = |i: usize, j: usize| cross[i][j];
            let mut v = hausdorff_by(dist, &lx, &ry);
            for (a, b) in lc.iter().zip(rc) {
                v += hausdorff_by(dist, a, b);
            }
            best = best.min(v);
        }
        let mut c = 0;
        while c < cells && idx[c] == steps {
            idx[c] = 0;
            c += 1;
        }
        if c == cells {
            return best;
        }
        idx[c] += 1;
    }
}

/// Every budget-respecting layer path `(a_1, …, a_k)`, by brute force over
/// all index tuples. `layers[i]` lists ambient indices of `A_i`.
pub fn chain_paths_oracle(ambient: &Matrix, layers: &[Vec<usize>], budgets: &[f64], slack: f64) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(amb: &Matrix, layers: &[Vec<usize>], budgets: &[f64], slack: f64, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let k = cur.len();
        if k == layers.len() {
            out.push(cur.clone());
            return;
        }
        for &a in &layers[k] {
            if k > 0 && !(amb[cur[k - 1]][a] < budgets[k - 1] + slack) {
                continue;
            }
            cur.push(a);
            go(amb, layers, budgets, slack, cur, out);
            cur.pop();
        }
    }
    go(ambient, layers, budgets, slack, &mut cur, &mut out);
    out
}
