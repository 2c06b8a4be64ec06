//! Exhaustive enumeration of partial matchings between two small diagrams.

/// Calls `visit` with, for each point of `a`, either `Some(j)` (matched to
/// `b[j]`) or `None` (sent to the diagonal).
fn enumerate(m: usize, n: usize, visit: &mut impl FnMut(&[Option<usize>])) {
    fn rec(
        i: usize,
        m: usize,
        used: &mut Vec<bool>,
        cur: &mut Vec<Option<usize>>,
        visit: &mut impl FnMut(&[Option<usize>]),
    ) {
        if i == m {
            visit(cur);
            return;
        }
        cur.push(None);
        rec(i + 1, m, used, cur, visit);
        cur.pop();
        for j in 0..used.len() {
            if !used[j] {
                used[j] = true;
                cur.push(Some(j));
                rec(i + 1, m, used, cur, visit);
                cur.pop();
                used[j] = false;
            }
        }
    }
    rec(0, m, &mut vec![false; n], &mut Vec::new(), visit);
}

fn unmatched_b(n: usize, choice: &[Option<usize>]) -> Vec<usize> {
    (0..n).filter(|j| !choice.contains(&Some(*j))).collect()
}

pub fn wasserstein2(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    let diag = |p: &(f64, f64)| {
        let mid = 0.5 * (p.0 + p.1);
        (p.0 - mid).powi(2) + (p.1 - mid).powi(2)
    };
    let mut best = f64::INFINITY;
    enumerate(a.len(), b.len(), &mut |choice| {
        let mut c = 0.0;
        for (i, ch) in choice.iter().enumerate() {
            c += match ch {
                Some(j) => (a[i].0 - b[*j].0).powi(2) + (a[i].1 - b[*j].1).powi(2),
                None => diag(&a[i]),
            };
        }
        c += unmatched_b(b.len(), choice)
            .iter()
            .map(|&j| diag(&b[j]))
            .sum::<f64>();
        best = best.min(c);
    });
    best.sqrt()
}

pub fn bottleneck(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    let diag = |p: &(f64, f64)| (p.1 - p.0).abs() / 2.0;
    let mut best = f64::INFINITY;
    enumerate(a.len(), b.len(), &mut |choice| {
        let mut c: f64 = 0.0;
        for (i, ch) in choice.iter().enumerate() {
            c = c.max(match ch {
                Some(j) => (a[i].0 - b[*j].0).abs().max((a[i].1 - b[*j].1).abs()),
                None => diag(&a[i]),
            });
        }
        for j in unmatched_b(b.len(), choice) {
            c = c.max(diag(&b[j]));
        }
        best = best.min(c);
    });
    best
}

/// Minimum of Σ_r cost[r][π(r)] over injections π: rows → columns.
pub fn min_injection(cost: &[Vec<f64>]) -> f64 {
    fn rec(r: usize, cost: &[Vec<f64>], used: &mut [bool], acc: f64, best: &mut f64) {
        if r == cost.len() {
            *best = best.min(acc);
            return;
        }
        for c in 0..used.len() {
            if !used[c] {
                used[c] = true;
                rec(r + 1, cost, used, acc + cost[r][c], best);
                used[c] = false;
            }
        }
    }
    let cols = cost.first().map_or(0, Vec::len);
    let mut best = if cost.is_empty() { 0.0 } else { f64::INFINITY };
    rec(0, cost, &mut vec![false; cols], 0.0, &mut best);
    best
}
