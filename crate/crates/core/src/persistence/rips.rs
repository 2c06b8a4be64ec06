use crate::error::{invalid, Error, Result};
use crate::geometry::PointCloud;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RipsConfig {
    /// Longest edge admitted into the complex.
    pub max_edge: f64,
    /// Largest accepted cloud; Rips cost grows cubically with the point count.
    pub point_cap: usize,
}

impl Default for RipsConfig {
    fn default() -> Self {
        Self {
            max_edge: 2.0,
            point_cap: 2048,
        }
    }
}

/// A simplex of the Rips complex with its filtration value.
#[derive(Debug, Clone, PartialEq)]
pub struct Simplex {
    pub vertices: Vec<u32>,
    pub value: f64,
}

impl Simplex {
    pub fn dimension(&self) -> usize {
        self.vertices.len() - 1
    }
}

/// Rips 2-skeleton of a point cloud truncated at `max_edge`.
///
/// Vertices and edges are stored explicitly; triangles are enumerated on
/// demand from the distance matrix, since there can be O(n³) of them.
#[derive(Debug, Clone)]
pub struct Filtration {
    n: usize,
    dist: Vec<f64>,
    max_edge: f64,
    /// (value, a, b) with a < b, sorted by value then combinatorial index.
    edges: Vec<(f64, u32, u32)>,
}

/// Combinatorial number system index of edge `a < b`.
#[inline]
pub(crate) fn edge_index(a: u32, b: u32) -> u64 {
    let b = b as u64;
    b * (b - 1) / 2 + a as u64
}

/// Combinatorial number system index of triangle `a < b < c`.
#[inline]
pub(crate) fn triangle_index(a: u32, b: u32, c: u32) -> u64 {
    let (b, c) = (b as u64, c as u64);
    c * (c - 1) * (c - 2) / 6 + b * (b - 1) / 2 + a as u64
}

#[inline]
pub(crate) fn sort3(a: u32, b: u32, c: u32) -> (u32, u32, u32) {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    if c < lo {
        (c, lo, hi)
    } else if c < hi {
        (lo, c, hi)
    } else {
        (lo, hi, c)
    }
}

pub fn rips_filtration(cloud: &PointCloud, config: &RipsConfig) -> Result<Filtration> {
    if cloud.is_empty() {
        return Err(invalid("Rips filtration of an empty cloud"));
    }
    if !(config.max_edge > 0.0) || config.max_edge.is_nan() {
        return Err(invalid(format!(
            "max_edge must be positive, got {}",
            config.max_edge
        )));
    }
    let n = cloud.len();
    if n > config.point_cap {
        return Err(Error::SizeLimit {
            points: n,
            cap: config.point_cap,
        });
    }
    let mut dist = vec![0.0f64; n * n];
    let mut edges = Vec::new();
    for b in 0..n {
        for a in 0..b {
            let d = (cloud.points[a] - cloud.points[b]).norm();
            dist[a * n + b] = d;
            dist[b * n + a] = d;
            if d <= config.max_edge {
                edges.push((d, a as u32, b as u32));
            }
        }
    }
    edges.sort_by(|x, y| {
        x.0.total_cmp(&y.0)
            .then(edge_index(x.1, x.2).cmp(&edge_index(y.1, y.2)))
    });
    Ok(Filtration {
        n,
        dist,
        max_edge: config.max_edge,
        edges,
    })
}

impl Filtration {
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn max_edge(&self) -> f64 {
        self.max_edge
    }

    #[inline]
    pub fn distance(&self, a: u32, b: u32) -> f64 {
        self.dist[a as usize * self.n + b as usize]
    }

    /// Edges `(value, a, b)` in filtration order.
    pub fn edges(&self) -> &[(f64, u32, u32)] {
        &self.edges
    }

    /// Triangles `(value, a, b, c)` with `a < b < c`, in lexicographic vertex order.
    pub fn triangles(&self) -> impl Iterator<Item = (f64, u32, u32, u32)> + '_ {
        let n = self.n as u32;
        (0..n).flat_map(move |a| {
            (a + 1..n).flat_map(move |b| {
                (b + 1..n).filter_map(move |c| {
                    let v = self
                        .distance(a, b)
                        .max(self.distance(a, c))
                        .max(self.distance(b, c));
                    (v <= self.max_edge).then_some((v, a, b, c))
                })
            })
        })
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles().count()
    }

    /// Every simplex, sorted by (value, dimension). Materializes all
    /// triangles, so only sensible for small clouds.
    pub fn simplices(&self) -> Vec<Simplex> {
        let mut out: Vec<Simplex> = (0..self.n as u32)
            .map(|v| Simplex {
                vertices: vec![v],
                value: 0.0,
            })
            .collect();
        out.extend(self.edges.iter().map(|&(value, a, b)| Simplex {
            vertices: vec![a, b],
            value,
        }));
        out.extend(self.triangles().map(|(value, a, b, c)| Simplex {
            vertices: vec![a, b, c],
            value,
        }));
        out.sort_by(|x, y| {
            x.value
                .total_cmp(&y.value)
                .then(x.dimension().cmp(&y.dimension()))
        });
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point3;
    use rand::{Rng, SeedableRng};

    fn cloud(points: &[[f64; 3]]) -> PointCloud {
        PointCloud::new(
            points
                .iter()
                .map(|p| Point3::new(p[0], p[1], p[2]))
                .collect(),
        )
    }

    #[test]
    fn two_points() {
        let f =
            rips_filtration(&cloud(&[[0.0; 3], [1.0, 0.0, 0.0]]), &RipsConfig::default()).unwrap();
        assert_eq!(f.vertex_count(), 2);
        assert_eq!(f.edges(), &[(1.0, 0, 1)]);
        assert_eq!(f.triangle_count(), 0);
    }

    #[test]
    fn equilateral_triangle_value() {
        let h = 3f64.sqrt() / 2.0;
        let f = rips_filtration(
            &cloud(&[[0.0; 3], [1.0, 0.0, 0.0], [0.5, h, 0.0]]),
            &RipsConfig::default(),
        )
        .unwrap();
        let tris: Vec<_> = f.triangles().collect();
        assert_eq!(tris.len(), 1);
        assert!((tris[0].0 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn counts_match_exhaustive_enumeration() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let pts: Vec<[f64; 3]> = (0..10)
                .map(|_| [rng.random(), rng.random(), rng.random()])
                .collect();
            let max_edge = rng.random_range(0.3..1.2);
            let f = rips_filtration(
                &cloud(&pts),
                &RipsConfig {
                    max_edge,
                    point_cap: 2048,
                },
            )
            .unwrap();
            let d = |i: usize, j: usize| {
                let (p, q) = (pts[i], pts[j]);
                ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2) + (p[2] - q[2]).powi(2)).sqrt()
            };
            let mut e = 0;
            let mut t = 0;
            for i in 0..10 {
                for j in i + 1..10 {
                    if d(i, j) <= max_edge {
                        e += 1;
                    }
                    for k in j + 1..10 {
                        if d(i, j) <= max_edge && d(i, k) <= max_edge && d(j, k) <= max_edge {
                            t += 1;
                        }
                    }
                }
            }
            assert_eq!(f.edges().len(), e);
            assert_eq!(f.triangle_count(), t);
            let s = f.simplices();
            assert_eq!(s.len(), 10 + e + t);
            assert!(s.windows(2).all(|w| w[0].value <= w[1].value));
        }
    }

    #[test]
    fn combinatorial_indices_are_dense() {
        let mut seen = Vec::new();
        for c in 2..7u32 {
            for b in 1..c {
                for a in 0..b {
                    seen.push(triangle_index(a, b, c));
                }
            }
        }
        seen.sort_unstable();
        assert_eq!(seen, (0..35).collect::<Vec<u64>>());
        assert_eq!(sort3(5, 1, 3), (1, 3, 5));
        assert_eq!(edge_index(0, 1), 0);
        assert_eq!(edge_index(2, 3), 5);
    }

    #[test]
    fn errors() {
        assert!(rips_filtration(&PointCloud::default(), &RipsConfig::default()).is_err());
        let big = PointCloud::new(vec![Point3::origin(); 5]);
        assert!(matches!(
            rips_filtration(
                &big,
                &RipsConfig {
                    max_edge: 1.0,
                    point_cap: 4
                }
            ),
            Err(Error::SizeLimit { points: 5, cap: 4 })
        ));
        assert!(rips_filtration(
            &big,
            &RipsConfig {
                max_edge: 0.0,
                point_cap: 10
            }
        )
        .is_err());
    }
}
