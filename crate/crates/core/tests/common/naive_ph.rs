//! Persistence read off from persistent Betti numbers computed by Z/2 rank.
//!
//! Chains are bitmasks over a fixed simplex list, so clouds are limited to
//! 8 points (28 edges, 56 triangles).

use topofiltr::geometry::PointCloud;

pub struct NaiveDiagrams {
    /// Finite bars per dimension.
    pub finite: [Vec<(f64, f64)>; 2],
    /// Births of bars alive at the last filtration value.
    pub essential: [Vec<f64>; 2],
}

struct Complex {
    edges: Vec<(f64, usize, usize)>,
    triangles: Vec<(f64, [usize; 3])>,
}

fn build(cloud: &PointCloud, max_edge: f64) -> Complex {
    let n = cloud.len();
    let d = |i: usize, j: usize| {
        let (p, q) = (cloud.points[i], cloud.points[j]);
        ((p.x - q.x).powi(2) + (p.y - q.y).powi(2) + (p.z - q.z).powi(2)).sqrt()
    };
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if d(i, j) <= max_edge {
                edges.push((d(i, j), i, j));
            }
        }
    }
    let mut triangles = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let v = d(i, j).max(d(i, k)).max(d(j, k));
                if d(i, j) <= max_edge && d(i, k) <= max_edge && d(j, k) <= max_edge {
                    triangles.push((v, [i, j, k]));
                }
            }
        }
    }
    Complex { edges, triangles }
}

/// Rank over Z/2 of a set of bit vectors.
fn rank(vectors: impl IntoIterator<Item = u64>) -> usize {
    let mut basis = [0u64; 64];
    let mut r = 0;
    for mut v in vectors {
        while v != 0 {
            let top = 63 - v.leading_zeros() as usize;
            if basis[top] == 0 {
                basis[top] = v;
                r += 1;
                break;
            }
            v ^= basis[top];
        }
    }
    r
}

/// Kernel basis of a boundary map given as (source bit, image vector) columns.
fn kernel(columns: &[(u64, u64)]) -> Vec<u64> {
    let mut reduced: Vec<(u64, u64)> = Vec::new();
    let mut kernel = Vec::new();
    for &(src, img) in columns {
        let (mut s, mut v) = (src, img);
        loop {
            if v == 0 {
                kernel.push(s);
                break;
            }
            let top = 63 - v.leading_zeros();
            match reduced.iter().find(|(_, w)| 63 - w.leading_zeros() == top) {
                Some(&(ws, w)) => {
                    v ^= w;
                    s ^= ws;
                }
                None => {
                    reduced.push((s, v));
                    break;
                }
            }
        }
    }
    kernel
}

pub fn diagrams(cloud: &PointCloud, max_edge: f64) -> NaiveDiagrams {
    assert!(cloud.len() <= 8);
    let n = cloud.len();
    let c = build(cloud, max_edge);
    let edge_bit = |i: usize, j: usize| -> u64 {
        let pos = c.edges.iter().position(|e| e.1 == i && e.2 == j).unwrap();
        1u64 << pos
    };

    let mut values: Vec<f64> = std::iter::once(0.0)
        .chain(c.edges.iter().map(|e| e.0))
        .chain(c.triangles.iter().map(|t| t.0))
        .collect();
    values.sort_by(f64::total_cmp);
    values.dedup();
    let m = values.len();

    // Cycle and boundary spaces at each filtration index, per dimension.
    let mut cycles: [Vec<Vec<u64>>; 2] = [Vec::new(), Vec::new()];
    let mut bounds: [Vec<Vec<u64>>; 2] = [Vec::new(), Vec::new()];
    for &t in &values {
        cycles[0].push((0..n).map(|v| 1u64 << v).collect());
        let edge_cols: Vec<(u64, u64)> = c
            .edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.0 <= t)
            .map(|(pos, e)| (1u64 << pos, (1u64 << e.1) | (1u64 << e.2)))
            .collect();
        bounds[0].push(edge_cols.iter().map(|x| x.1).collect());
        cycles[1].push(kernel(&edge_cols));
        bounds[1].push(
            c.triangles
                .iter()
                .filter(|tr| tr.0 <= t)
                .map(|tr| {
                    let [a, b, cc] = tr.1;
                    edge_bit(a, b) ^ edge_bit(a, cc) ^ edge_bit(b, cc)
                })
                .collect(),
        );
    }

    let beta = |q: usize, s: isize, t: usize| -> isize {
        if s < 0 {
            return 0;
        }
        let z = &cycles[q][s as usize];
        let b = &bounds[q][t];
        rank(z.iter().chain(b.iter()).copied()) as isize - rank(b.iter().copied()) as isize
    };

    let mut finite = [Vec::new(), Vec::new()];
    let mut essential = [Vec::new(), Vec::new()];
    for q in 0..2 {
        for i in 0..m {
            let si = i as isize;
            for j in i + 1..m {
                let mult = beta(q, si, j - 1) - beta(q, si, j) - beta(q, si - 1, j - 1)
                    + beta(q, si - 1, j);
                assert!(mult >= 0);
                for _ in 0..mult {
                    finite[q].push((values[i], values[j]));
                }
            }
            let ess = beta(q, si, m - 1) - beta(q, si - 1, m - 1);
            for _ in 0..ess {
                essential[q].push(values[i]);
            }
        }
    }
    NaiveDiagrams { finite, essential }
}
