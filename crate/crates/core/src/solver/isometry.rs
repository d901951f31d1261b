//! Exact isometry detection between pairs.

use crate::hausdorff::MetricPair;

/// Lexicographically first bijection `X → Y` preserving distances within
/// tolerance and mapping `A` onto `B`.
pub fn pair_isometry_search(p: &MetricPair, q: &MetricPair) -> Option<Vec<usize>> {
    let (x, y) = (&p.space, &q.space);
    if x.len() != y.len() || p.a.len() != q.a.len() {
        return None;
    }
    let tau = x.tolerance().max(y.tolerance());
    let n = x.len();
    let mut f = vec![0; n];
    let mut used = vec![false; n];
    fn go(
        i: usize,
        p: &MetricPair,
        q: &MetricPair,
        tau: f64,
        f: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        let n = f.len();
        if i == n {
            return true;
        }
        for v in 0..n {
            if used[v] || p.a.contains(i) != q.a.contains(v) {
                continue;
            }
            if (0..i).any(|j| (p.space.d(i, j) - q.space.d(v, f[j])).abs() > tau) {
                continue;
            }
            f[i] = v;
            used[v] = true;
            if go(i + 1, p, q, tau, f, used) {
                return true;
            }
            used[v] = false;
        }
        false
    }
    go(0, p, q, tau, &mut f, &mut used).then_some(f)
}
