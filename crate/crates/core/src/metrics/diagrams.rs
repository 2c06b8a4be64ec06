use crate::assignment::{solve, CostMatrix};
use crate::persistence::{PersistenceDiagram, PersistencePair};

/// Squared Euclidean distance from a point to its diagonal projection.
fn diagonal_sq(p: &PersistencePair) -> f64 {
    let h = p.death - p.birth;
    h * h / 2.0
}

fn diagonal_inf(p: &PersistencePair) -> f64 {
    (p.death - p.birth).abs() / 2.0
}

fn linf(p: &PersistencePair, q: &PersistencePair) -> f64 {
    (p.birth - q.birth).abs().max((p.death - q.death).abs())
}

/// 2-Wasserstein distance with squared Euclidean ground cost; unmatched
/// points go to their diagonal projections.
pub fn wasserstein2(a: &PersistenceDiagram, b: &PersistenceDiagram) -> f64 {
    wasserstein2_pairs(&a.pairs, &b.pairs)
}

pub fn wasserstein2_pairs(a: &[PersistencePair], b: &[PersistencePair]) -> f64 {
    // Fixed argument order makes the result exactly symmetric in floating point.
    let key = |d: &[PersistencePair]| {
        let mut k: Vec<(u64, u64)> = d
            .iter()
            .map(|p| (p.birth.to_bits(), p.death.to_bits()))
            .collect();
        k.sort_unstable();
        k
    };
    let (a, b) = if key(b) < key(a) { (b, a) } else { (a, b) };
    let (m, n) = (a.len(), b.len());
    if m + n == 0 {
        return 0.0;
    }
    let cost = CostMatrix::from_fn(m + n, m + n, |i, j| match (i < m, j < n) {
        (true, true) => {
            let (db, dd) = (a[i].birth - b[j].birth, a[i].death - b[j].death);
            db * db + dd * dd
        }
        (true, false) => diagonal_sq(&a[i]),
        (false, true) => diagonal_sq(&b[j]),
        (false, false) => 0.0,
    });
    let assignment = solve(&cost).expect("diagram coordinates must be finite");
    assignment.cost.max(0.0).sqrt()
}

/// Bottleneck distance with L∞ ground cost.
pub fn bottleneck(a: &PersistenceDiagram, b: &PersistenceDiagram) -> f64 {
    bottleneck_pairs(&a.pairs, &b.pairs)
}

pub fn bottleneck_pairs(a: &[PersistencePair], b: &[PersistencePair]) -> f64 {
    let mut candidates: Vec<f64> = a.iter().chain(b).map(diagonal_inf).collect();
    for p in a {
        candidates.extend(b.iter().map(|q| linf(p, q)));
    }
    candidates.push(0.0);
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();
    // The largest candidate (all points to the diagonal, or better) is always feasible.
    let (mut lo, mut hi) = (0usize, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if perfect_matching_within(a, b, candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    candidates[lo]
}

/// Whether the augmented bipartite graph with edges of cost ≤ `t` has a
/// perfect matching. Each point uses its own diagonal slot; diagonal slots
/// match each other freely.
fn perfect_matching_within(a: &[PersistencePair], b: &[PersistencePair], t: f64) -> bool {
    let (m, n) = (a.len(), b.len());
    let size = m + n;
    // Rows: a[0..m], then diagonal slots of b. Columns: b[0..n], then diagonal slots of a.
    let adjacency: Vec<Vec<usize>> = (0..size)
        .map(|i| {
            if i < m {
                let mut adj: Vec<usize> = (0..n).filter(|&j| linf(&a[i], &b[j]) <= t).collect();
                if diagonal_inf(&a[i]) <= t {
                    adj.push(n + i);
                }
                adj
            } else {
                let j = i - m;
                let mut adj = Vec::with_capacity(m + 1);
                if diagonal_inf(&b[j]) <= t {
                    adj.push(j);
                }
                adj.extend(n..n + m);
                adj
            }
        })
        .collect();

    let mut match_col: Vec<Option<usize>> = vec![None; size];
    for row in 0..size {
        let mut visited = vec![false; size];
        if !augment(row, &adjacency, &mut match_col, &mut visited) {
            return false;
        }
    }
    true
}

fn augment(
    row: usize,
    adj: &[Vec<usize>],
    match_col: &mut [Option<usize>],
    visited: &mut [bool],
) -> bool {
    for &c in &adj[row] {
        if visited[c] {
            continue;
        }
        visited[c] = true;
        if match_col[c].is_none_or(|r| augment(r, adj, match_col, visited)) {
            match_col[c] = Some(row);
            return true;
        }
    }
    false
}
