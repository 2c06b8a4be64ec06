//! Minimum-cost assignment (Hungarian algorithm with potentials).
//!
//! Rectangular problems with `rows ≤ cols` are padded with zero-cost rows to a
//! square matrix. Among all optimal assignments [`hungarian`] returns the
//! lexicographically smallest row-to-column vector, found by re-routing the
//! solver's matching inside the equality subgraph of the optimal duals.

use crate::error::{invalid, Result};

/// Dense row-major cost matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl CostMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(invalid(format!(
                "cost matrix data has {} entries, expected {rows}×{cols}",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(invalid("ragged cost matrix"));
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }
}

/// Injective map from rows to columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    pub row_to_col: Vec<usize>,
    pub cost: f64,
}

impl Assignment {
    /// Column flags: `true` where a row is assigned.
    pub fn matched_columns(&self, cols: usize) -> Vec<bool> {
        let mut used = vec![false; cols];
        for &c in &self.row_to_col {
            used[c] = true;
        }
        used
    }
}

struct Solved {
    /// Column assigned to each (padded) row.
    row_to_col: Vec<usize>,
    u: Vec<f64>,
    v: Vec<f64>,
}

fn validate(cost: &CostMatrix) -> Result<()> {
    if cost.rows > cost.cols {
        return Err(invalid(format!(
            "assignment needs rows ≤ cols, got {}×{}",
            cost.rows, cost.cols
        )));
    }
    if let Some(x) = cost.data.iter().find(|x| !x.is_finite()) {
        return Err(invalid(format!("cost matrix has a non-finite entry {x}")));
    }
    Ok(())
}

/// Shortest augmenting path Hungarian algorithm on the zero-padded square matrix.
fn solve_square(cost: &CostMatrix) -> Solved {
    let n = cost.cols;
    let entry = |i: usize, j: usize| if i < cost.rows { cost.get(i, j) } else { 0.0 };
    // 1-based arrays; index 0 is the virtual source column.
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    let mut minv = vec![0.0f64; n + 1];
    let mut used = vec![false; n + 1];
    for i in 1..=n {
        owner[0] = i;
        let mut j0 = 0usize;
        minv.iter_mut().for_each(|m| *m = f64::INFINITY);
        used.iter_mut().for_each(|x| *x = false);
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = entry(i0 - 1, j - 1) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut row_to_col = vec![0usize; n];
    for j in 1..=n {
        row_to_col[owner[j] - 1] = j - 1;
    }
    Solved {
        row_to_col,
        u: u[1..].to_vec(),
        v: v[1..].to_vec(),
    }
}

fn objective(cost: &CostMatrix, row_to_col: &[usize]) -> f64 {
    row_to_col
        .iter()
        .enumerate()
        .map(|(r, &c)| cost.get(r, c))
        .sum()
}

/// Optimal assignment without tie-breaking guarantees.
pub fn solve(cost: &CostMatrix) -> Result<Assignment> {
    validate(cost)?;
    if cost.rows == 0 {
        return Ok(Assignment {
            row_to_col: vec![],
            cost: 0.0,
        });
    }
    let solved = solve_square(cost);
    let row_to_col = solved.row_to_col[..cost.rows].to_vec();
    Ok(Assignment {
        cost: objective(cost, &row_to_col),
        row_to_col,
    })
}

/// Optimal assignment; ties resolve to the lexicographically smallest
/// `row_to_col` vector.
pub fn hungarian(cost: &CostMatrix) -> Result<Assignment> {
    validate(cost)?;
    if cost.rows == 0 {
        return Ok(Assignment {
            row_to_col: vec![],
            cost: 0.0,
        });
    }
    let n = cost.cols;
    let Solved {
        mut row_to_col,
        u,
        v,
    } = solve_square(cost);
    let scale = cost.data.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let tol = 1e-10 * scale;
    let entry = |i: usize, j: usize| if i < cost.rows { cost.get(i, j) } else { 0.0 };
    let tight = |i: usize, j: usize| entry(i, j) - u[i] - v[j] <= tol;

    let mut col_to_row = vec![0usize; n];
    for (r, &c) in row_to_col.iter().enumerate() {
        col_to_row[c] = r;
    }

    for i in 0..cost.rows {
        for j in 0..row_to_col[i] {
            if !tight(i, j) {
                continue;
            }
            // Give column j to row i; its owner must reach i's old column
            // through an alternating path over rows that are not yet fixed.
            let freed = row_to_col[i];
            let start = col_to_row[j];
            if let Some(path) =
                alternating_path(start, freed, j, i, n, &tight, &row_to_col, &col_to_row)
            {
                for (r, c) in path {
                    row_to_col[r] = c;
                    col_to_row[c] = r;
                }
                row_to_col[i] = j;
                col_to_row[j] = i;
                break;
            }
        }
    }

    let row_to_col = row_to_col[..cost.rows].to_vec();
    Ok(Assignment {
        cost: objective(cost, &row_to_col),
        row_to_col,
    })
}

/// Breadth-first search over tight edges from row `start` to column `target`,
/// never touching rows `≤ fixed` or column `taken`. Returns the new
/// (row, column) pairs along the path.
#[allow(clippy::too_many_arguments)]
fn alternating_path(
    start: usize,
    target: usize,
    taken: usize,
    fixed: usize,
    n: usize,
    tight: &impl Fn(usize, usize) -> bool,
    row_to_col: &[usize],
    col_to_row: &[usize],
) -> Option<Vec<(usize, usize)>> {
    if start <= fixed {
        return None;
    }
    let mut parent_row = vec![usize::MAX; n];
    let mut seen_row = vec![false; n];
    let mut queue = std::collections::VecDeque::from([start]);
    seen_row[start] = true;
    while let Some(r) = queue.pop_front() {
        for c in 0..n {
            if c == taken || parent_row[c] != usize::MAX || c == row_to_col[r] || !tight(r, c) {
                continue;
            }
            parent_row[c] = r;
            if c == target {
                let mut path = Vec::new();
                let mut col = c;
                loop {
                    let row = parent_row[col];
                    path.push((row, col));
                    if row == start {
                        return Some(path);
                    }
                    col = row_to_col[row];
                }
            }
            let next = col_to_row[c];
            if next > fixed && !seen_row[next] {
                seen_row[next] = true;
                queue.push_back(next);
            }
        }
    }
    None
}
