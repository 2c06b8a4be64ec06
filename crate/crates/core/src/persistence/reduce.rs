//! Persistence pairs of a Rips 2-skeleton.
//!
//! H0 comes from Kruskal's union-find over the sorted edges. H1 is computed
//! by reducing the coboundary matrix (edges → triangles) over Z/2 in reverse
//! filtration order, which yields the same diagram as reducing the boundary
//! matrix. Edges that kill an H0 class are cleared up front, and columns
//! whose initial pivot is unclaimed are paired without building a heap.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use super::rips::{sort3, triangle_index, Filtration};
use super::{PersistenceDiagram, PersistencePair, Provenance};
use crate::error::{invalid, Result};

/// Filtration order key of a triangle: (value bits, combinatorial index).
/// Values are non-negative, so their bit patterns order like the values.
type TriKey = (u64, u64);

fn provenance(f: &Filtration) -> Provenance {
    Provenance {
        point_count: f.vertex_count(),
        max_edge: f.max_edge(),
        ..Provenance::default()
    }
}

struct UnionFind(Vec<u32>);

impl UnionFind {
    fn find(&mut self, mut x: u32) -> u32 {
        while self.0[x as usize] != x {
            let up = self.0[self.0[x as usize] as usize];
            self.0[x as usize] = up;
            x = up;
        }
        x
    }
}

/// H0 diagram plus a flag per edge telling whether it merged two components.
fn zero_dimensional(f: &Filtration) -> (PersistenceDiagram, Vec<bool>) {
    let n = f.vertex_count();
    let mut uf = UnionFind((0..n as u32).collect());
    let mut merges = vec![false; f.edges().len()];
    let mut pairs = Vec::new();
    let mut components = n;
    for (pos, &(value, a, b)) in f.edges().iter().enumerate() {
        let (ra, rb) = (uf.find(a), uf.find(b));
        if ra == rb {
            continue;
        }
        uf.0[ra.max(rb) as usize] = ra.min(rb);
        merges[pos] = true;
        components -= 1;
        if value > 0.0 {
            pairs.push(PersistencePair::new(0.0, value));
        }
    }
    let diagram = PersistenceDiagram {
        dimension: 0,
        pairs,
        essential: vec![PersistencePair::new(0.0, f.max_edge()); components],
        provenance: provenance(f),
    };
    (diagram, merges)
}

fn coboundary(f: &Filtration, edge: (f64, u32, u32)) -> Vec<TriKey> {
    let (value, a, b) = edge;
    let max_edge = f.max_edge();
    (0..f.vertex_count() as u32)
        .filter(|&k| k != a && k != b)
        .filter_map(|k| {
            let (da, db) = (f.distance(a, k), f.distance(b, k));
            if da > max_edge || db > max_edge {
                return None;
            }
            let v = value.max(da).max(db);
            let (x, y, z) = sort3(a, b, k);
            Some((v.to_bits(), triangle_index(x, y, z)))
        })
        .collect()
}

/// Smallest entry of the Z/2 column held in `heap`, cancelling duplicate pairs.
fn pop_pivot(heap: &mut BinaryHeap<Reverse<TriKey>>) -> Option<TriKey> {
    while let Some(Reverse(top)) = heap.pop() {
        if heap.peek() == Some(&Reverse(top)) {
            heap.pop();
            continue;
        }
        return Some(top);
    }
    None
}

/// Removes entries that occur an even number of times.
fn z2_normalize(mut v: Vec<u32>) -> Vec<u32> {
    v.sort_unstable();
    let mut out = Vec::with_capacity(v.len());
    let mut i = 0;
    while i < v.len() {
        let mut j = i;
        while j < v.len() && v[j] == v[i] {
            j += 1;
        }
        if (j - i) % 2 == 1 {
            out.push(v[i]);
        }
        i = j;
    }
    out
}

fn one_dimensional(f: &Filtration, merges: &[bool]) -> PersistenceDiagram {
    let edges = f.edges();
    let mut pivot_owner: HashMap<TriKey, u32> = HashMap::new();
    // Reduction-matrix columns (sets of edge positions) of the paired columns.
    let mut reductions: Vec<Vec<u32>> = Vec::new();
    let mut pairs = Vec::new();
    let mut essential = Vec::new();

    for pos in (0..edges.len()).rev() {
        if merges[pos] {
            continue;
        }
        let birth = edges[pos].0;
        let column = coboundary(f, edges[pos]);
        let pivot = match column.iter().min() {
            None => {
                essential.push(PersistencePair::new(birth, f.max_edge()));
                continue;
            }
            Some(&p) if !pivot_owner.contains_key(&p) => Some((p, vec![pos as u32])),
            Some(_) => {
                let mut heap: BinaryHeap<Reverse<TriKey>> =
                    column.into_iter().map(Reverse).collect();
                let mut combination = vec![pos as u32];
                loop {
                    let Some(p) = pop_pivot(&mut heap) else {
                        break None;
                    };
                    let Some(&owner) = pivot_owner.get(&p) else {
                        break Some((p, z2_normalize(combination)));
                    };
                    heap.push(Reverse(p));
                    for &e in &reductions[owner as usize] {
                        heap.extend(coboundary(f, edges[e as usize]).into_iter().map(Reverse));
                    }
                    combination.extend_from_slice(&reductions[owner as usize]);
                }
            }
        };
        match pivot {
            Some((p, combination)) => {
                let death = f64::from_bits(p.0);
                if death > birth {
                    pairs.push(PersistencePair::new(birth, death));
                }
                pivot_owner.insert(p, reductions.len() as u32);
                reductions.push(combination);
            }
            None => essential.push(PersistencePair::new(birth, f.max_edge())),
        }
    }

    PersistenceDiagram {
        dimension: 1,
        pairs,
        essential,
        provenance: provenance(f),
    }
}

/// H0 and H1 diagrams of the filtration.
pub fn compute_diagrams(f: &Filtration) -> (PersistenceDiagram, PersistenceDiagram) {
    let (h0, merges) = zero_dimensional(f);
    let h1 = one_dimensional(f, &merges);
    (h0, h1)
}

/// Diagram of homology dimension `q ∈ {0, 1}`.
pub fn compute_persistence(f: &Filtration, q: usize) -> Result<PersistenceDiagram> {
    match q {
        0 => Ok(zero_dimensional(f).0),
        1 => Ok(compute_diagrams(f).1),
        _ => Err(invalid(format!(
            "homology dimension {q} is not supported (0 or 1)"
        ))),
    }
}
