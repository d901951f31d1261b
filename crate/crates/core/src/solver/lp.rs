//! Minimal budget split for the correspondence search.
//!
//! Given the symmetric matrix `c` of worst distortions between edge kinds,
//! the cheapest budgets solve
//!
//! ```text
//! min Σ t_k   s.t.  t_i + t_j ≥ c_ij (i < j),  2 t_i ≥ c_ii,  t ≥ 0.
//! ```
//!
//! Two kinds or fewer have a closed form; larger systems go through a dense
//! simplex on the dual, whose origin is always feasible.

const PIVOT_EPS: f64 = 1e-12;

/// Optimal value and budgets.
pub fn budget_split(c: &[Vec<f64>]) -> (f64, Vec<f64>) {
    match c.len() {
        0 => (0.0, Vec::new()),
        1 => {
            let t = c[0][0].max(0.0) / 2.0;
            (t, vec![t])
        }
        2 => {
            let (a, b) = (c[0][0].max(0.0) / 2.0, c[1][1].max(0.0) / 2.0);
            let v = (a + b).max(c[0][1]);
            let s = v - a - b;
            (v, vec![a + s / 2.0, b + s / 2.0])
        }
        _ => simplex(c),
    }
}

/// Optimal value only.
pub fn budget_value(c: &[Vec<f64>]) -> f64 {
    match c.len() {
        0 => 0.0,
        1 => c[0][0].max(0.0) / 2.0,
        2 => (c[0][0].max(0.0) / 2.0 + c[1][1].max(0.0) / 2.0).max(c[0][1]),
        _ => simplex(c).0,
    }
}

/// Dual: `max Σ_{i≤j} c_ij y_ij` with one row per kind (loops count twice).
/// Bland's rule; primal budgets are the reduced costs of the slacks.
pub fn simplex(c: &[Vec<f64>]) -> (f64, Vec<f64>) {
    let k = c.len();
    let mut pairs = Vec::new();
    for i in 0..k {
        for j in i..k {
            pairs.push((i, j));
        }
    }
    let n = pairs.len();
    let cols = n + k;
    // rows 0..k constraints, row k objective; last column rhs
    let width = cols + 1;
    let mut t = vec![0.0; (k + 1) * width];
    for (p, &(i, j)) in pairs.iter().enumerate() {
        if i == j {
            t[i * width + p] = 2.0;
        } else {
            t[i * width + p] = 1.0;
            t[j * width + p] = 1.0;
        }
        t[k * width + p] = -c[i][j].max(0.0);
    }
    for r in 0..k {
        t[r * width + n + r] = 1.0;
        t[r * width + cols] = 1.0;
    }
    let mut basis: Vec<usize> = (n..n + k).collect();
    loop {
        let Some(enter) = (0..cols).find(|&j| t[k * width + j] < -PIVOT_EPS) else { break };
        let mut leave: Option<usize> = None;
        let mut best = f64::INFINITY;
        for r in 0..k {
            let a = t[r * width + enter];
            if a > PIVOT_EPS {
                let ratio = t[r * width + cols] / a;
                let better = match leave {
                    None => true,
                    Some(l) => ratio < best - PIVOT_EPS || (ratio <= best + PIVOT_EPS && basis[r] < basis[l]),
                };
                if better {
                    best = ratio;
                    leave = Some(r);
                }
            }
        }
        // the dual is bounded (every column has a positive entry)
        let r = leave.expect("bounded dual");
        let piv = t[r * width + enter];
        for j in 0..width {
            t[r * width + j] /= piv;
        }
        for row in 0..=k {
            if row != r {
                let factor = t[row * width + enter];
                if factor != 0.0 {
                    for j in 0..width {
                        t[row * width + j] -= factor * t[r * width + j];
                    }
                }
            }
        }
        basis[r] = enter;
    }
    let value = t[k * width + cols];
    let budgets = (0..k).map(|r| t[k * width + n + r].max(0.0)).collect();
    (value, budgets)
}
