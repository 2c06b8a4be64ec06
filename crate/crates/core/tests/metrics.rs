mod common;

use common::{matching, random_cloud, rng};
use proptest::prelude::*;
use rand::Rng;
use topofiltr::geometry::{Point3, PointCloud};
use topofiltr::metrics::{bottleneck, chamfer, hausdorff, wasserstein2};
use topofiltr::persistence::{compute_diagrams, rips_filtration, PersistenceDiagram, RipsConfig};

fn random_diagram(r: &mut impl Rng, max_len: usize) -> Vec<(f64, f64)> {
    let n = r.random_range(0..=max_len);
    (0..n)
        .map(|_| {
            let b: f64 = r.random_range(0.0..0.8);
            (b, b + r.random_range(0.0..0.5))
        })
        .collect()
}

fn diagram(pairs: &[(f64, f64)]) -> PersistenceDiagram {
    PersistenceDiagram::from_tuples(1, pairs)
}

#[test]
fn distances_match_exhaustive_matching() {
    let mut r = rng(3);
    for _ in 0..300 {
        let (a, b) = (random_diagram(&mut r, 5), random_diagram(&mut r, 5));
        let w = wasserstein2(&diagram(&a), &diagram(&b));
        let w_ref = matching::wasserstein2(&a, &b);
        assert!((w - w_ref).abs() <= 1e-9, "{a:?} {b:?}: {w} vs {w_ref}");
        let db = bottleneck(&diagram(&a), &diagram(&b));
        assert_eq!(db, matching::bottleneck(&a, &b), "{a:?} {b:?}");
    }
}

#[test]
fn pseudometric_axioms() {
    let mut r = rng(5);
    for _ in 0..200 {
        let [a, b, c] = [(); 3].map(|_| diagram(&random_diagram(&mut r, 6)));
        for metric in [
            wasserstein2 as fn(&PersistenceDiagram, &PersistenceDiagram) -> f64,
            bottleneck,
        ] {
            assert_eq!(metric(&a, &b), metric(&b, &a));
            assert!(metric(&a, &c) <= metric(&a, &b) + metric(&b, &c) + 1e-9);
            assert_eq!(metric(&a, &a), 0.0);
            let mut shuffled = a.clone();
            shuffled.pairs.reverse();
            assert!(metric(&a, &shuffled) <= 1e-12);
            if a.sorted_pairs() != b.sorted_pairs() {
                assert!(metric(&a, &b) > 0.0);
            }
        }
    }
}

#[test]
fn exact_diagonal_points_cost_nothing() {
    let mut r = rng(9);
    for _ in 0..100 {
        let (a, b) = (random_diagram(&mut r, 6), random_diagram(&mut r, 6));
        let mut b2 = b.clone();
        let t: f64 = r.random_range(0.0..1.0);
        b2.push((t, t));
        assert_eq!(
            bottleneck(&diagram(&a), &diagram(&b)),
            bottleneck(&diagram(&a), &diagram(&b2))
        );
        let (w, w2) = (
            wasserstein2(&diagram(&a), &diagram(&b)),
            wasserstein2(&diagram(&a), &diagram(&b2)),
        );
        assert!((w - w2).abs() <= 1e-12, "{w} {w2}");
    }
}

#[test]
fn hausdorff_bounded_by_scaled_chamfer() {
    let mut r = rng(13);
    let n = 64;
    for _ in 0..200 {
        let (x, y) = (random_cloud(&mut r, n), random_cloud(&mut r, n));
        let (dh, cd) = (hausdorff(&x, &y).unwrap(), chamfer(&x, &y).unwrap());
        assert!(dh <= n as f64 * cd, "{dh} > {n}·{cd}");
    }
}

fn perturb(r: &mut impl Rng, x: &PointCloud, delta: f64) -> PointCloud {
    PointCloud::new(
        x.points
            .iter()
            .map(|p| {
                let v = Point3::new(
                    r.random_range(-1.0..1.0),
                    r.random_range(-1.0..1.0),
                    r.random_range(-1.0..1.0),
                )
                .coords;
                p + v.normalize() * r.random_range(0.0..delta)
            })
            .collect(),
    )
}

#[test]
fn rips_stability_chain() {
    let mut r = rng(17);
    let config = RipsConfig {
        max_edge: 10.0,
        point_cap: 2048,
    };
    for _ in 0..100 {
        let n = r.random_range(5..25);
        let x = random_cloud(&mut r, n);
        let delta = r.random_range(0.001..0.2);
        let y = perturb(&mut r, &x, delta);
        let (dx0, dx1) = compute_diagrams(&rips_filtration(&x, &config).unwrap());
        let (dy0, dy1) = compute_diagrams(&rips_filtration(&y, &config).unwrap());
        let dh = hausdorff(&x, &y).unwrap();
        let cd = chamfer(&x, &y).unwrap();
        for (a, b) in [(&dx0, &dy0), (&dx1, &dy1)] {
            assert!(bottleneck(a, b) <= 2.0 * dh + 1e-9);
        }
        assert!(2.0 * dh <= 2.0 * n as f64 * cd + 1e-12);
    }
}

proptest! {
    #[test]
    fn distances_are_nonnegative_and_finite(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b) = (diagram(&random_diagram(&mut r, 12)), diagram(&random_diagram(&mut r, 12)));
        for v in [wasserstein2(&a, &b), bottleneck(&a, &b)] {
            prop_assert!(v.is_finite() && v >= 0.0);
        }
    }
}
