mod common;

use common::{circle, multisets_close, naive_ph, random_cloud, rng, sorted};
use proptest::prelude::*;
use rand::Rng;
use topofiltr::geometry::{Point3, PointCloud};
use topofiltr::persistence::{compute_diagrams, rips_filtration, PersistenceDiagram, RipsConfig};

fn config(max_edge: f64) -> RipsConfig {
    RipsConfig {
        max_edge,
        point_cap: 2048,
    }
}

fn tuples(d: &PersistenceDiagram) -> Vec<(f64, f64)> {
    sorted(d.pairs.iter().map(|p| (p.birth, p.death)).collect())
}

fn essential_births(d: &PersistenceDiagram) -> Vec<f64> {
    let mut v: Vec<f64> = d.essential.iter().map(|p| p.birth).collect();
    v.sort_by(f64::total_cmp);
    v
}

fn check_against_oracle(cloud: &PointCloud, max_edge: f64) {
    let f = rips_filtration(cloud, &config(max_edge)).unwrap();
    let (h0, h1) = compute_diagrams(&f);
    let naive = naive_ph::diagrams(cloud, max_edge);
    for (q, d) in [(0, &h0), (1, &h1)] {
        let expected = sorted(naive.finite[q].clone());
        assert!(
            multisets_close(&tuples(d), &expected, 1e-12),
            "H{q} mismatch: {:?} vs {:?}",
            tuples(d),
            expected
        );
        let mut ess = naive.essential[q].clone();
        ess.sort_by(f64::total_cmp);
        assert_eq!(essential_births(d).len(), ess.len(), "H{q} essential count");
        for (a, b) in essential_births(d).iter().zip(&ess) {
            assert!((a - b).abs() <= 1e-12);
        }
    }
}

#[test]
fn matches_rank_oracle_on_random_clouds() {
    let mut r = rng(7);
    for trial in 0..100 {
        let n = r.random_range(1..=8);
        let cloud = random_cloud(&mut r, n);
        let max_edge = if trial % 3 == 0 {
            r.random_range(0.4..1.5)
        } else {
            4.0
        };
        check_against_oracle(&cloud, max_edge);
    }
}

#[test]
fn matches_rank_oracle_with_tied_values() {
    let mut r = rng(11);
    for _ in 0..40 {
        let n = r.random_range(3..=8);
        let pts = (0..n)
            .map(|_| {
                Point3::new(
                    r.random_range(0..3) as f64,
                    r.random_range(0..3) as f64,
                    0.0,
                )
            })
            .collect::<Vec<_>>();
        let mut unique: Vec<Point3> = Vec::new();
        for p in pts {
            if !unique.contains(&p) {
                unique.push(p);
            }
        }
        check_against_oracle(&PointCloud::new(unique), 2.5);
    }
}

#[test]
fn circle_has_one_dominant_loop() {
    let ideal = |n: usize| 3f64.sqrt() - 2.0 * (std::f64::consts::PI / n as f64).sin();
    let mut previous_error = f64::INFINITY;
    for n in [64, 256, 1024] {
        let f = rips_filtration(&circle(n, 1.0), &config(2.0)).unwrap();
        let (_, h1) = compute_diagrams(&f);
        let mut pers: Vec<f64> = h1.pairs.iter().map(|p| p.persistence()).collect();
        pers.sort_by(|a, b| b.total_cmp(a));
        let dominant = pers[0];
        let rel = (dominant - ideal(n)).abs() / ideal(n);
        assert!(rel < 0.10, "n={n}: dominant {dominant}, ideal {}", ideal(n));
        assert!(
            pers[1..].iter().all(|&p| p < 0.1 * dominant),
            "n={n}: {:?}",
            &pers[..4.min(pers.len())]
        );
        assert!(rel <= previous_error + 1e-12);
        previous_error = rel;
    }
}

fn components(cloud: &PointCloud, eps: f64) -> usize {
    let n = cloud.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] == x {
            x
        } else {
            let r = find(p, p[x]);
            p[x] = r;
            r
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if (cloud.points[i] - cloud.points[j]).norm() <= eps {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    (0..n).filter(|&i| find(&mut parent, i) == i).count()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]
    #[test]
    fn h0_bars_count_components(seed in any::<u64>(), n in 1usize..30, max_edge in 0.1f64..2.0, frac in 0.0f64..=1.0) {
        let cloud = random_cloud(&mut rng(seed), n);
        let f = rips_filtration(&cloud, &config(max_edge)).unwrap();
        let (h0, _) = compute_diagrams(&f);
        let eps = frac * max_edge;
        prop_assert_eq!(h0.alive_at(eps), components(&cloud, eps));
    }

    #[test]
    fn finite_pairs_are_ordered(seed in any::<u64>(), n in 1usize..40) {
        let cloud = random_cloud(&mut rng(seed), n);
        let (h0, h1) = compute_diagrams(&rips_filtration(&cloud, &config(2.0)).unwrap());
        for p in h0.pairs.iter().chain(&h1.pairs) {
            prop_assert!(p.death > p.birth && p.birth >= 0.0);
        }
    }
}
