//! Combinatorial invariants of triangle meshes.

use std::collections::HashMap;

use super::TriangleMesh;

fn edge_key(a: u32, b: u32) -> (u32, u32) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Number of triangles incident to each undirected edge.
pub(crate) fn edge_incidence(mesh: &TriangleMesh) -> HashMap<(u32, u32), u32> {
    let mut edges = HashMap::with_capacity(mesh.triangles.len() * 3 / 2 + 1);
    for t in &mesh.triangles {
        for k in 0..3 {
            *edges.entry(edge_key(t[k], t[(k + 1) % 3])).or_insert(0) += 1;
        }
    }
    edges
}

/// χ = V − E + F with E counted as unique undirected edges.
pub fn euler_characteristic(mesh: &TriangleMesh) -> i64 {
    let e = edge_incidence(mesh).len() as i64;
    mesh.vertices.len() as i64 - e + mesh.triangles.len() as i64
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Component label per triangle, triangles being joined when they share an edge.
fn triangle_labels(mesh: &TriangleMesh) -> (Vec<usize>, usize) {
    let mut uf = UnionFind::new(mesh.triangles.len());
    let mut first_owner: HashMap<(u32, u32), usize> = HashMap::new();
    for (ti, t) in mesh.triangles.iter().enumerate() {
        for k in 0..3 {
            let key = edge_key(t[k], t[(k + 1) % 3]);
            match first_owner.get(&key) {
                Some(&other) => uf.union(ti, other),
                None => {
                    first_owner.insert(key, ti);
                }
            }
        }
    }
    let mut dense = HashMap::new();
    let labels: Vec<usize> = (0..mesh.triangles.len())
        .map(|ti| {
            let root = uf.find(ti);
            let next = dense.len();
            *dense.entry(root).or_insert(next)
        })
        .collect();
    (labels, dense.len())
}

/// Edge-connected components of the triangle set.
pub fn connected_components(mesh: &TriangleMesh) -> usize {
    triangle_labels(mesh).1
}

/// True iff every edge has exactly two incident triangles, every vertex is
/// used, no triangle repeats a vertex, and every vertex link is one cycle.
pub fn is_manifold(mesh: &TriangleMesh) -> bool {
    if mesh.triangles.is_empty() {
        return false;
    }
    if mesh
        .triangles
        .iter()
        .any(|t| t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
    {
        return false;
    }
    if edge_incidence(mesh).values().any(|&c| c != 2) {
        return false;
    }

    // Link of each vertex: the edge opposite to it in every incident triangle.
    let mut link: Vec<Vec<(u32, u32)>> = vec![Vec::new(); mesh.vertices.len()];
    for t in &mesh.triangles {
        link[t[0] as usize].push((t[1], t[2]));
        link[t[1] as usize].push((t[2], t[0]));
        link[t[2] as usize].push((t[0], t[1]));
    }
    link.iter().all(|edges| link_is_single_cycle(edges))
}

fn link_is_single_cycle(edges: &[(u32, u32)]) -> bool {
    if edges.len() < 3 {
        return false;
    }
    let mut adjacency: HashMap<u32, Vec<u32>> = HashMap::with_capacity(edges.len());
    for &(a, b) in edges {
        adjacency.entry(a).or_default().push(b);
        adjacency.entry(b).or_default().push(a);
    }
    if adjacency.len() != edges.len() || adjacency.values().any(|n| n.len() != 2) {
        return false;
    }
    // Walk the cycle from an arbitrary start; it must visit every link vertex.
    let start = edges[0].0;
    let (mut prev, mut cur) = (start, adjacency[&start][0]);
    let mut steps = 1;
    while cur != start {
        let nbrs = &adjacency[&cur];
        let next = if nbrs[0] == prev { nbrs[1] } else { nbrs[0] };
        prev = cur;
        cur = next;
        steps += 1;
        if steps > edges.len() {
            return false;
        }
    }
    steps == edges.len()
}

/// Splits a mesh into its edge-connected components, each re-indexed.
pub fn split_components(mesh: &TriangleMesh) -> Vec<TriangleMesh> {
    let (labels, count) = triangle_labels(mesh);
    let mut parts = vec![TriangleMesh::default(); count];
    let mut remap: Vec<HashMap<u32, u32>> = vec![HashMap::new(); count];
    for (t, &label) in mesh.triangles.iter().zip(&labels) {
        let part = &mut parts[label];
        let map = &mut remap[label];
        let mut out = [0u32; 3];
        for (k, &v) in t.iter().enumerate() {
            out[k] = *map.entry(v).or_insert_with(|| {
                part.vertices.push(mesh.vertices[v as usize]);
                (part.vertices.len() - 1) as u32
            });
        }
        part.triangles.push(out);
    }
    parts
}

/// Summary of the invariants of a mesh.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct MeshTopology {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub euler: i64,
    pub components: usize,
    pub manifold: bool,
}

impl MeshTopology {
    pub fn of(mesh: &TriangleMesh) -> Self {
        let edges = edge_incidence(mesh).len();
        let euler = mesh.vertices.len() as i64 - edges as i64 + mesh.triangles.len() as i64;
        Self {
            vertices: mesh.vertices.len(),
            edges,
            faces: mesh.triangles.len(),
            euler,
            components: connected_components(mesh),
            manifold: is_manifold(mesh),
        }
    }

    /// Genus of a closed orientable connected surface, `None` when χ is odd or
    /// the surface is not a single closed manifold.
    pub fn genus(&self) -> Option<u32> {
        if !self.manifold || self.components != 1 || self.euler > 2 || (2 - self.euler) % 2 != 0 {
            return None;
        }
        Some(((2 - self.euler) / 2) as u32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point3;

    fn tetrahedron() -> TriangleMesh {
        TriangleMesh::new(
            vec![
                Point3::new(0.0, 0.0, 0.0),
                Point3::new(1.0, 0.0, 0.0),
                Point3::new(0.0, 1.0, 0.0),
                Point3::new(0.0, 0.0, 1.0),
            ],
            vec![[0, 2, 1], [0, 1, 3], [0, 3, 2], [1, 2, 3]],
        )
        .unwrap()
    }

    #[test]
    fn tetrahedron_is_a_sphere() {
        let topo = MeshTopology::of(&tetrahedron());
        assert_eq!((topo.vertices, topo.edges, topo.faces), (4, 6, 4));
        assert_eq!(topo.euler, 2);
        assert!(topo.manifold);
        assert_eq!(topo.genus(), Some(0));
        assert!(tetrahedron().signed_volume() > 0.0);
    }

    #[test]
    fn disjoint_copies_add_up() {
        let a = tetrahedron();
        let b = tetrahedron().translated(&crate::geometry::Vector3::new(5.0, 0.0, 0.0));
        let both = TriangleMesh::merge([&a, &b]);
        assert_eq!(euler_characteristic(&both), 4);
        assert_eq!(connected_components(&both), 2);
        assert!(is_manifold(&both));
        let parts = split_components(&both);
        assert_eq!(parts.len(), 2);
        assert!(parts.iter().all(|p| euler_characteristic(p) == 2));
    }

    #[test]
    fn deleted_triangle_breaks_manifoldness() {
        let mut m = tetrahedron();
        m.triangles.pop();
        assert!(!is_manifold(&m));
    }

    #[test]
    fn pinched_vertex_is_not_manifold() {
        // Two tetrahedra glued at a single vertex: edges are fine, the link is two cycles.
        let a = tetrahedron();
        let mut b = tetrahedron().translated(&crate::geometry::Vector3::new(-1.0, -1.0, -1.0));
        b.vertices[0] = Point3::new(5.0, 5.0, 5.0);
        let mut glued = TriangleMesh::merge([&a, &b]);
        // vertex 3 of `a` is (0,0,1); make b's vertex 3 (index 7) reuse it.
        for t in glued.triangles.iter_mut().skip(4) {
            for v in t.iter_mut() {
                if *v == 7 {
                    *v = 3;
                }
            }
        }
        glued.vertices.pop();
        assert!(!is_manifold(&glued));
    }

    #[test]
    fn index_out_of_range_rejected() {
        assert!(TriangleMesh::new(vec![Point3::origin()], vec![[0, 0, 1]]).is_err());
    }
}
